//! Small dense integer matrices: products, exact inverses, saturated kernels,
//! Smith diagonals and the symplectic normal form of skew forms.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Sizes in this crate never exceed
//! 6×6, so intermediate values are kept in `i128` where growth is possible.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch in matrix product");
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Mat, k: i64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn trace(a: &Mat) -> i64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Column `j` of `a`.
pub fn column(a: &Mat, j: usize) -> Vec<i64> {
    a.iter().map(|r| r[j]).collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vec<i64>]) -> Mat {
    if cols.is_empty() {
        return vec![];
    }
    let n = cols[0].len();
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Exact determinant by fraction-free elimination.
pub fn det(a: &Mat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let piv = (k..n).find(|&i| m[i][k] != 0);
        let Some(p) = piv else { return 0 };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular matrix. Returns `None` when the inverse is not
/// integral.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Ratio<i128>> = r.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            row.extend((0..n).map(|j| Ratio::from_integer(i128::from(i == j))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..2 * n {
                    let t = m[c][j] * f;
                    m[i][j] -= t;
                }
            }
        }
    }
    let mut out = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = m[i][n + j];
            if !v.denom().is_one() {
                return None;
            }
            out[i][j] = *v.numer() as i64;
        }
    }
    Some(out)
}

/// Solves `a · x = b` over the rationals for square invertible `a`, returning
/// the solution only when it is integral.
pub fn solve_integral(a: &Mat, b: &[i64]) -> Option<Vec<i64>> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row: Vec<Ratio<i128>> = r.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            row.push(Ratio::from_integer(bi as i128));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..=n {
                    let t = m[c][j] * f;
                    m[i][j] -= t;
                }
            }
        }
    }
    m.iter()
        .map(|r| if r[n].denom().is_one() { Some(*r[n].numer() as i64) } else { None })
        .collect()
}

/// A basis of the integer kernel `{x ∈ Z^n : a·x = 0}` returned as columns.
/// The basis is saturated: it spans the full kernel lattice, because it is
/// read off a unimodular column transformation.
pub fn kernel(a: &Mat) -> Vec<Vec<i64>> {
    let rows = a.len();
    let n = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, j: usize, k: usize, a: i128, b: i128, c: i128, d: i128| {
        // (col_j, col_k) <- (a·col_j + b·col_k, c·col_j + d·col_k)
        for row in m.iter_mut().chain(u.iter_mut()) {
            let (x, y) = (row[j], row[k]);
            row[j] = a * x + b * y;
            row[k] = c * x + d * y;
        }
    };
    let mut pivot = 0usize;
    for r in 0..rows {
        if pivot >= n {
            break;
        }
        for k in pivot + 1..n {
            if m[r][k] == 0 {
                continue;
            }
            let (x, y) = (m[r][pivot], m[r][k]);
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            // [s t; -y/g x/g] has determinant 1.
            col_op(&mut m, &mut u, pivot, k, eg.x, eg.y, -y / g, x / g);
        }
        if m[r][pivot] != 0 {
            pivot += 1;
        }
    }
    (pivot..n).map(|j| u.iter().map(|row| row[j] as i64).collect()).collect()
}

/// Diagonal of the Smith normal form (nonzero invariant factors, ascending).
pub fn smith_diagonal(a: &Mat) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = true;
        let p = m[t][t];
        for i in t + 1..rows {
            let q = m[i][t].div_euclid(p);
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            if m[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = m[t][j].div_euclid(p);
            if q != 0 {
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            if m[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // Enforce divisibility of the trailing block.
        let mut fixed = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if m[i][j] % p != 0 {
                    for k in t..cols {
                        m[t][k] += m[i][k];
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        diag.push(p.abs() as i64);
        t += 1;
    }
    diag
}

/// `bᵀ · g · b`.
pub fn congruence(g: &Mat, b: &Mat) -> Mat {
    mul(&mul(&transpose(b), g), b)
}

fn swap_cols(b: &mut Mat, i: usize, j: usize) {
    if i != j {
        for row in b.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn col_axpy(b: &mut Mat, dst: usize, src: usize, k: i64) {
    for row in b.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// Symplectic normal form of a nondegenerate skew-symmetric integer form.
///
/// Returns `(b, d)` where the columns of `b` form a basis with
/// `bᵀ·g·b = diag(d₁J, d₂J, …)`, `J = [[0,1],[-1,0]]`, and `d₁ | d₂ | …`.
pub fn symplectic_normal_form(g: &Mat) -> Result<(Mat, Vec<i64>)> {
    let n = g.len();
    if !n.is_multiple_of(2) {
        return Err(Error::WrongDivisors(vec![]));
    }
    let mut b = identity(n);
    let mut divisors = Vec::new();
    let mut s = 0;
    let mut guard = 0usize;
    while s < n {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::WrongDivisors(divisors));
        }
        let m = congruence(g, &b);
        let mut best: Option<(usize, usize)> = None;
        for i in s..n {
            for j in s..n {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else {
            // Degenerate remainder: report zeros for the missing pairs.
            divisors.extend(std::iter::repeat_n(0, (n - s) / 2));
            return Err(Error::WrongDivisors(divisors));
        };
        swap_cols(&mut b, s, i);
        let j2 = if j == s { i } else { j };
        swap_cols(&mut b, s + 1, j2);
        let m = congruence(g, &b);
        if m[s][s + 1] < 0 {
            for row in b.iter_mut() {
                row[s + 1] = -row[s + 1];
            }
        }
        let m = congruence(g, &b);
        let d = m[s][s + 1];
        for k in s + 2..n {
            let q = m[s][k].div_euclid(d);
            if q != 0 {
                col_axpy(&mut b, k, s + 1, -q);
            }
            let q2 = m[s + 1][k].div_euclid(d);
            if q2 != 0 {
                col_axpy(&mut b, k, s, q2);
            }
        }
        let m = congruence(g, &b);
        if (s + 2..n).any(|k| m[s][k] != 0 || m[s + 1][k] != 0) {
            continue;
        }
        let mut bad = None;
        'find: for i in s + 2..n {
            for j in s + 2..n {
                if m[i][j] % d != 0 {
                    bad = Some(i);
                    break 'find;
                }
            }
        }
        if let Some(i) = bad {
            col_axpy(&mut b, s, i, 1);
            continue;
        }
        divisors.push(d);
        s += 2;
    }
    Ok((b, divisors))
}

/// Standard block form `diag(d₁J, d₂J, …)`.
pub fn block_form(divisors: &[i64]) -> Mat {
    let n = 2 * divisors.len();
    let mut m = zeros(n, n);
    for (k, &d) in divisors.iter().enumerate() {
        m[2 * k][2 * k + 1] = d;
        m[2 * k + 1][2 * k] = -d;
    }
    m
}

/// True when the integer vectors (as columns) span a saturated sublattice.
pub fn is_saturated(cols: &[Vec<i64>]) -> bool {
    let m = from_columns(cols);
    let d = smith_diagonal(&m);
    d.len() == cols.len() && d.iter().all(|&x| x == 1)
}

/// Reduces every entry modulo 2 into `{0, 1}`.
pub fn mod2(a: &Mat) -> Vec<Vec<u8>> {
    a.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect()
}

/// Column space over F2 as a reduced list of basis vectors.
pub fn f2_column_space(a: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut basis: Vec<Vec<u8>> = Vec::new();
    for j in 0..cols {
        let mut v: Vec<u8> = (0..rows).map(|i| a[i][j]).collect();
        for b in &basis {
            let lead = b.iter().position(|&x| x == 1).unwrap();
            if v[lead] == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some(lead) = v.iter().position(|&x| x == 1) {
            for b in basis.iter_mut() {
                if b[lead] == 1 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x ^= y;
                    }
                }
            }
            basis.push(v);
        }
    }
    basis
}

pub fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

pub fn neg(a: &Mat) -> Mat {
    scale(a, -1)
}

pub fn abs_max(a: &Mat) -> i64 {
    a.iter().flat_map(|r| r.iter().map(|x| x.abs())).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(det(&a), 1);
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(2));
        assert!(inverse(&vec![vec![2, 0], vec![0, 1]]).is_none());
        assert_eq!(det(&vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), -3);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = vec![vec![2, 4, 6]];
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(mat_vec(&a, v), vec![0]);
        }
        assert!(is_saturated(&k));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(&vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(&vec![vec![1, 0], vec![0, 0]]), vec![1]);
    }

    #[test]
    fn symplectic_form_of_prym_gram() {
        let g = vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, -2, 0]];
        let (b, d) = symplectic_normal_form(&g).unwrap();
        assert_eq!(d, vec![1, 2]);
        assert_eq!(congruence(&g, &b), g);
    }

    #[test]
    fn f2_space() {
        let a = vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
        assert_eq!(f2_column_space(&a).len(), 2);
    }

    fn arb_unimodular(n: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec((0..n, 0..n, -3i64..4), 0..12).prop_map(move |ops| {
            let mut m = identity(n);
            for (i, j, k) in ops {
                if i != j {
                    for row in m.iter_mut() {
                        row[i] += k * row[j];
                    }
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn symplectic_reduction_recovers_divisors(u in arb_unimodular(4)) {
            let std = block_form(&[1, 2]);
            let g = congruence(&std, &u);
            let (b, d) = symplectic_normal_form(&g).unwrap();
            prop_assert_eq!(d, vec![1, 2]);
            prop_assert_eq!(congruence(&g, &b), std);
            prop_assert_eq!(det(&b).abs(), 1);
        }

        #[test]
        fn inverse_of_unimodular(u in arb_unimodular(5)) {
            let inv = inverse(&u).unwrap();
            prop_assert_eq!(mul(&u, &inv), identity(5));
        }
    }
}
