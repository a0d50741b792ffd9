//! Integer first homology of a polygonal translation surface.
//!
//! A basis of `H1(X, Z)` comes from a tree-cotree decomposition: a spanning
//! tree of the vertex graph, a spanning tree of the dual graph on the
//! remaining edges, and one cycle for each of the `2g` leftover edges. Dual
//! cocycles (vanishing on the tree and on face boundaries) give integer
//! coordinates of any closed chain. The intersection form is computed by
//! pushing each basis cycle slightly to its left and counting signed edge
//! crossings, with the orientation fixed so that a horizontal cycle meets a
//! vertical cycle with intersection `+1`. A symplectic reduction then brings
//! the basis to standard form.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::intmat::{self, Mat};
use crate::qfield::{QuadNum, Vec2};
use crate::surface::{Chain, FlagMap, HalfEdge, TranslationSurface};

/// Symplectic basis of `H1(X, Z)` with coordinate functionals.
#[derive(Clone, Debug)]
pub struct H1Data {
    /// Basis cycles `(a_1, b_1, …, a_g, b_g)` as chains on the surface.
    pub basis: Vec<Chain>,
    /// Intersection matrix of the basis: standard blocks `J`.
    pub gram: Mat,
    cocycles: Vec<Vec<i64>>,
    to_basis: Mat,
}

/// Holonomy `ω(c)` of a chain.
pub fn holonomy(s: &TranslationSurface, c: &[i64]) -> Vec2 {
    let mut x = QuadNum::zero();
    let mut y = QuadNum::zero();
    for (h, &k) in c.iter().enumerate() {
        if k != 0 {
            let kk = QuadNum::from_int(k);
            x += &(&s.vec(h).x * &kk);
            y += &(&s.vec(h).y * &kk);
        }
    }
    Vec2::new(x, y)
}

/// True when the chain has zero boundary.
pub fn is_cycle(s: &TranslationSurface, c: &[i64]) -> bool {
    let (vid, nv) = s.vertex_ids();
    let mut bd = vec![0i64; nv];
    for (h, &k) in c.iter().enumerate() {
        bd[vid[s.next(h)]] += k;
        bd[vid[h]] -= k;
    }
    bd.iter().all(|&x| x == 0)
}

/// Chain of a closed walk of half-edges.
pub fn walk_chain(n: usize, walk: &[HalfEdge]) -> Chain {
    let mut c = vec![0; n];
    for &h in walk {
        c[h] += 1;
    }
    c
}

/// Signed intersection of a closed walk with a closed chain, computed by
/// pushing the walk to its left.
pub fn walk_intersection(s: &TranslationSurface, walk: &[HalfEdge], c: &[i64]) -> i64 {
    let m = walk.len();
    let mut total = 0;
    for t in 0..m {
        let out = walk[(t + 1) % m];
        let back = s.partner(walk[t]);
        let mut h = s.ccw(out);
        while h != back {
            total += c[h] - c[s.partner(h)];
            h = s.ccw(h);
        }
    }
    total
}

struct TreeCotree {
    /// Half-edge from the parent vertex into each vertex (MAX at the root).
    parent_he: Vec<HalfEdge>,
    depth: Vec<usize>,
    vid: Vec<usize>,
    generators: Vec<HalfEdge>,
    cocycles: Vec<Vec<i64>>,
}

fn tree_cotree(s: &TranslationSurface) -> TreeCotree {
    let n = s.num_half_edges();
    let (vid, nv) = s.vertex_ids();
    let mut rep = vec![usize::MAX; nv];
    for h in 0..n {
        if rep[vid[h]] == usize::MAX {
            rep[vid[h]] = h;
        }
    }
    let mut in_tree = vec![false; n];
    let mut parent_he = vec![usize::MAX; nv];
    let mut depth = vec![0; nv];
    let mut seen = vec![false; nv];
    let root = vid[0];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for h in s.star(rep[v]) {
            let w = vid[s.next(h)];
            if !seen[w] {
                seen[w] = true;
                parent_he[w] = h;
                depth[w] = depth[v] + 1;
                in_tree[h] = true;
                in_tree[s.partner(h)] = true;
                queue.push_back(w);
            }
        }
    }
    // Dual spanning tree across non-tree edges.
    let nf = s.num_faces();
    let mut in_cotree = vec![false; n];
    let mut dual_parent = vec![usize::MAX; nf];
    let mut fseen = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    fseen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for &h in s.face(f) {
            if in_tree[h] {
                continue;
            }
            let g = s.partner(h);
            let f2 = s.face_of(g);
            if !fseen[f2] {
                fseen[f2] = true;
                dual_parent[f2] = g;
                in_cotree[h] = true;
                in_cotree[g] = true;
                queue.push_back(f2);
            }
        }
    }
    let generators: Vec<HalfEdge> =
        (0..n).filter(|&h| h < s.partner(h) && !in_tree[h] && !in_cotree[h]).collect();
    let mut cocycles = Vec::with_capacity(generators.len());
    for &l in &generators {
        let mut phi = vec![0i64; n];
        phi[l] = 1;
        phi[s.partner(l)] = -1;
        for &f in order.iter().rev() {
            let hp = dual_parent[f];
            if hp == usize::MAX {
                continue;
            }
            let sum: i64 = s.face(f).iter().filter(|&&h| h != hp).map(|&h| phi[h]).sum();
            phi[hp] = -sum;
            phi[s.partner(hp)] = sum;
        }
        cocycles.push(phi);
    }
    TreeCotree { parent_he, depth, vid, generators, cocycles }
}

impl TreeCotree {
    /// Tree path of half-edges from vertex `u` to vertex `w`.
    fn path(&self, s: &TranslationSurface, mut u: usize, mut w: usize) -> Vec<HalfEdge> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[u] > self.depth[w] {
            let h = self.parent_he[u];
            up.push(s.partner(h));
            u = self.vid[h];
        }
        while self.depth[w] > self.depth[u] {
            let h = self.parent_he[w];
            down.push(h);
            w = self.vid[h];
        }
        while u != w {
            let hu = self.parent_he[u];
            up.push(s.partner(hu));
            u = self.vid[hu];
            let hw = self.parent_he[w];
            down.push(hw);
            w = self.vid[hw];
        }
        up.extend(down.into_iter().rev());
        up
    }
}

/// Computes a symplectic basis of `H1(X, Z)`.
pub fn h1_basis(s: &TranslationSurface) -> H1Data {
    let n = s.num_half_edges();
    let tc = tree_cotree(s);
    let walks: Vec<Vec<HalfEdge>> = tc
        .generators
        .iter()
        .map(|&l| {
            let mut w = vec![l];
            w.extend(tc.path(s, tc.vid[s.next(l)], tc.vid[l]));
            w
        })
        .collect();
    let raw: Vec<Chain> = walks.iter().map(|w| walk_chain(n, w)).collect();
    let k = raw.len();
    let gram_raw: Mat =
        (0..k).map(|i| (0..k).map(|j| walk_intersection(s, &walks[i], &raw[j])).collect()).collect();
    let (b, divisors) = intmat::symplectic_normal_form(&gram_raw).expect("intersection form is unimodular");
    debug_assert!(divisors.iter().all(|&d| d == 1));
    let basis: Vec<Chain> = (0..k)
        .map(|col| {
            let mut c = vec![0i64; n];
            for (i, r) in raw.iter().enumerate() {
                let coef = b[i][col];
                if coef != 0 {
                    for h in 0..n {
                        c[h] += coef * r[h];
                    }
                }
            }
            c
        })
        .collect();
    let to_basis = intmat::inverse(&b).expect("unimodular change of basis");
    H1Data { basis, gram: intmat::block_form(&vec![1; k / 2]), cocycles: tc.cocycles, to_basis }
}

impl H1Data {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a closed chain in the symplectic basis.
    pub fn coords(&self, c: &[i64]) -> Vec<i64> {
        let raw: Vec<i64> =
            self.cocycles.iter().map(|phi| phi.iter().zip(c).map(|(a, b)| a * b).sum()).collect();
        intmat::mat_vec(&self.to_basis, &raw)
    }

    /// Intersection number of two coordinate vectors.
    pub fn intersection(&self, x: &[i64], y: &[i64]) -> i64 {
        let gy = intmat::mat_vec(&self.gram, y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// Chain representing a coordinate vector.
    pub fn chain_of(&self, x: &[i64]) -> Chain {
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut c = vec![0; n];
        for (k, &coef) in x.iter().enumerate() {
            if coef != 0 {
                for h in 0..n {
                    c[h] += coef * self.basis[k][h];
                }
            }
        }
        c
    }

    /// Matrix of the map induced on homology by a flag map of the same
    /// surface; column `k` holds the coordinates of `f(basis_k)`.
    pub fn induced_action(&self, f: &FlagMap) -> Mat {
        let cols: Vec<Vec<i64>> = self.basis.iter().map(|b| self.coords(&f.push_chain(b))).collect();
        intmat::from_columns(&cols)
    }

    /// Coordinates of several chains as matrix columns.
    pub fn coords_matrix(&self, chains: &[Chain]) -> Mat {
        let cols: Vec<Vec<i64>> = chains.iter().map(|c| self.coords(c)).collect();
        intmat::from_columns(&cols)
    }
}

/// The τ-anti-invariant sublattice with its `(1,2)`-polarized basis.
#[derive(Clone, Debug)]
pub struct PrymLattice {
    /// Coordinates (in the `H1Data` basis) of `a0, b0, a, b`.
    pub basis: Vec<Vec<i64>>,
    /// The same cycles as chains.
    pub chains: Vec<Chain>,
    /// Intersection matrix of the basis, `diag(J, 2J)`.
    pub gram: Mat,
    /// `4 × 2g` inclusion matrix (rows are basis coordinates).
    pub inclusion: Mat,
}

/// `ker(A + Id)` in `H1(X, Z)` with a basis bringing the intersection form to
/// `diag(J, 2J)`.
pub fn anti_invariant_lattice(h1: &H1Data, action: &Mat) -> Result<PrymLattice> {
    let n = h1.dim();
    let m = intmat::add(action, &intmat::identity(n));
    let kernel = intmat::kernel(&m);
    let kmat = intmat::from_columns(&kernel);
    if kernel.is_empty() {
        return Err(Error::WrongDivisors(vec![]));
    }
    let restricted = intmat::congruence(&h1.gram, &kmat);
    let (b, divisors) = intmat::symplectic_normal_form(&restricted)?;
    if divisors != [1, 2] {
        return Err(Error::WrongDivisors(divisors));
    }
    let coords = intmat::mul(&kmat, &b);
    let basis: Vec<Vec<i64>> = (0..4).map(|j| intmat::column(&coords, j)).collect();
    let chains = basis.iter().map(|x| h1.chain_of(x)).collect();
    Ok(PrymLattice { gram: intmat::block_form(&[1, 2]), inclusion: basis.clone(), basis, chains })
}

/// Builds a Prym lattice from explicit anti-invariant cycles, checking that
/// they are anti-invariant, span the saturated anti-invariant lattice and
/// have intersection matrix `diag(J, 2J)`.
pub fn prym_lattice_from_cycles(h1: &H1Data, action: &Mat, chains: &[Chain]) -> Result<PrymLattice> {
    let basis: Vec<Vec<i64>> = chains.iter().map(|c| h1.coords(c)).collect();
    let n = h1.dim();
    for x in &basis {
        let ax = intmat::mat_vec(action, x);
        if ax.iter().zip(x).any(|(a, b)| a + b != 0) {
            return Err(Error::NoInvolution("basis cycle is not anti-invariant".into()));
        }
    }
    let kernel = intmat::kernel(&intmat::add(action, &intmat::identity(n)));
    if kernel.len() != basis.len() || !intmat::is_saturated(&basis) {
        let d = intmat::smith_diagonal(&intmat::from_columns(&basis));
        return Err(Error::WrongDivisors(d));
    }
    let gram: Mat =
        basis.iter().map(|x| basis.iter().map(|y| h1.intersection(x, y)).collect()).collect();
    if gram != intmat::block_form(&[1, 2]) {
        let (_, d) = intmat::symplectic_normal_form(&gram)?;
        return Err(Error::WrongDivisors(d));
    }
    Ok(PrymLattice { inclusion: basis.clone(), basis, chains: chains.to_vec(), gram })
}

/// Periods `(ω(a0), ω(b0), ω(a), ω(b))` of a lattice basis.
pub fn period_vector(s: &TranslationSurface, lattice: &PrymLattice) -> Vec<Vec2> {
    lattice.chains.iter().map(|c| holonomy(s, c)).collect()
}

/// Area from the periods of a symplectic basis (Riemann bilinear relation).
pub fn area_from_periods(s: &TranslationSurface, h1: &H1Data) -> QuadNum {
    let mut a = QuadNum::zero();
    for k in 0..h1.dim() / 2 {
        let u = holonomy(s, &h1.basis[2 * k]);
        let v = holonomy(s, &h1.basis[2 * k + 1]);
        a += &u.cross(&v);
    }
    a
}

/// True when some automorphism with `f*ω = −ω` acts as `−Id` on homology.
pub fn has_hyperelliptic_involution(s: &TranslationSurface) -> bool {
    let cells = s.delaunay_cells();
    let h1 = h1_basis(&cells);
    let minus = intmat::neg(&intmat::identity(h1.dim()));
    crate::surface::maps_between_cells(&cells, &cells, -1, false, false)
        .iter()
        .any(|f| h1.induced_action(f) == minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{origami, rectangle_torus};

    #[test]
    fn torus_orientation_pin() {
        let t = rectangle_torus(QuadNum::one(), QuadNum::one());
        let h1 = h1_basis(&t);
        assert_eq!(h1.dim(), 2);
        assert_eq!(h1.gram, vec![vec![0, 1], vec![-1, 0]]);
        // Horizontal edge 0 and vertical edge 1 as cycles.
        let a = vec![1, 0, 0, 0];
        let b = vec![0, 1, 0, 0];
        assert_eq!(h1.intersection(&h1.coords(&a), &h1.coords(&b)), 1);
        assert_eq!(walk_intersection(&t, &[0], &b), 1);
    }

    #[test]
    fn elliptic_involution_is_minus_identity() {
        let t = rectangle_torus(QuadNum::one(), QuadNum::one()).delaunay_cells();
        let h1 = h1_basis(&t);
        let f = &t.translation_automorphisms(-1)[0];
        assert_eq!(h1.induced_action(f), vec![vec![-1, 0], vec![0, -1]]);
        assert!(has_hyperelliptic_involution(&t));
    }

    #[test]
    fn origami_homology() {
        let s = origami(&[1, 2, 3, 4, 0], &[0, 2, 1, 4, 3]).unwrap();
        let h1 = h1_basis(&s);
        assert_eq!(h1.dim(), 2 * s.genus());
        for c in &h1.basis {
            assert!(is_cycle(&s, c));
        }
        for i in 0..h1.dim() {
            let mut e = vec![0; h1.dim()];
            e[i] = 1;
            assert_eq!(h1.coords(&h1.basis[i]), e);
        }
        assert_eq!(area_from_periods(&s, &h1), s.area());
    }
}
