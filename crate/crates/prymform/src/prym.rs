//! Prototypes of Prym eigenforms, their surfaces, the real-multiplication
//! generator, eigenform verification and the mod-2 component invariant.
//!
//! A prototype is an integer triple `(w, h, e)` with `w, h > 0`,
//! `gcd(w, h, e) = 1` and discriminant `D = e² + 8wh`. Its surface is a
//! connected sum of three slit tori: a square torus of side
//! `λ = (e + √D)/2` and two `w × h` tori exchanged by the Prym involution.
//! On the symplectic basis `(a0, b0, a, b)` of the anti-invariant lattice,
//! with intersection matrix `diag(J, 2J)`, the generator
//! `T = [[e·Id, diag(2w, 2h)], [diag(h, w), 0]]` satisfies
//! `T² = eT + 2wh·Id` and the period row vector `(λ, iλ, 2w, 2ih)` is a
//! `λ`-eigenvector.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homology::{self, H1Data, PrymLattice};
use crate::intmat::{self, Mat};
use crate::qfield::{QuadNum, Vec2};
use crate::surface::{self, Chain, FlagMap, TranslationSurface};

/// The two genus-3 strata carrying Prym eigenforms with a three-tori model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kappa {
    /// `H(2,2)^odd`: zeros `P` and `Q` exchanged by the involution.
    #[serde(rename = "2,2")]
    TwoTwo,
    /// `H(1,1,2)`: double zero `Q` fixed, simple zeros `R1`, `R2` exchanged.
    #[serde(rename = "1,1,2")]
    OneOneTwo,
}

impl Kappa {
    pub const ALL: [Kappa; 2] = [Kappa::TwoTwo, Kappa::OneOneTwo];

    /// Zero orders in decreasing order.
    pub fn orders(self) -> Vec<usize> {
        match self {
            Kappa::TwoTwo => vec![2, 2],
            Kappa::OneOneTwo => vec![2, 1, 1],
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kappa::TwoTwo => "2,2",
            Kappa::OneOneTwo => "1,1,2",
        })
    }
}

impl FromStr for Kappa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace([' ', '(', ')'], "").as_str() {
            "2,2" | "22" => Ok(Kappa::TwoTwo),
            "1,1,2" | "112" => Ok(Kappa::OneOneTwo),
            other => Err(Error::Usage(format!("unknown stratum '{other}', expected 2,2 or 1,1,2"))),
        }
    }
}

/// Integer prototype data `(w, h, e)` with a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prototype {
    pub kappa: Kappa,
    pub w: i64,
    pub h: i64,
    pub e: i64,
}

impl Prototype {
    /// Validated prototype.
    pub fn new(kappa: Kappa, w: i64, h: i64, e: i64) -> Result<Self> {
        if w <= 0 || h <= 0 {
            return Err(Error::Usage(format!("prototype needs w, h > 0, got w={w}, h={h}")));
        }
        if w.gcd(&h).gcd(&e) != 1 {
            return Err(Error::Usage(format!("prototype needs gcd(w, h, e) = 1, got ({w}, {h}, {e})")));
        }
        let p = Prototype { kappa, w, h, e };
        if p.lambda().sign() <= 0 {
            return Err(Error::Usage(format!("prototype needs e + sqrt(D) > 0, got ({w}, {h}, {e})")));
        }
        Ok(p)
    }

    /// `D = e² + 8wh`.
    pub fn discriminant(&self) -> i64 {
        self.e * self.e + 8 * self.w * self.h
    }

    /// `λ = (e + √D)/2`, the positive root of `X² − eX − 2wh`.
    pub fn lambda(&self) -> QuadNum {
        QuadNum::from_parts(self.e, 1, 2, self.discriminant() as u64)
    }

    /// Default slit length: `min(w, λ)/2` for `(2,2)`, `min(w, λ)/4` for
    /// `(1,1,2)`.
    pub fn default_slit(&self) -> QuadNum {
        let lambda = self.lambda();
        let w = QuadNum::from_int(self.w);
        let m = if w < lambda { w } else { lambda };
        let k = match self.kappa {
            Kappa::TwoTwo => 2,
            Kappa::OneOneTwo => 4,
        };
        &m / &QuadNum::from_int(k)
    }

    pub fn triple(&self) -> [i64; 3] {
        [self.w, self.h, self.e]
    }
}

impl fmt::Display for Prototype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({})({},{},{})", self.kappa, self.w, self.h, self.e)
    }
}

/// `e² + 8wh` for a prototype.
pub fn discriminant(p: &Prototype) -> i64 {
    p.discriminant()
}

/// `λ = (e + √D)/2` for a prototype.
pub fn lambda_value(p: &Prototype) -> QuadNum {
    p.lambda()
}

/// All `(w, h, e)` with `e² + 8wh = D`, `w, h ≥ 1`, `gcd(w, h, e) = 1`,
/// sorted by `(w, h, e)`.
pub fn enumerate_prototypes(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    if d < 1 {
        return out;
    }
    let mut e = 0i64;
    while e * e < d {
        for sign_e in if e == 0 { vec![0] } else { vec![-e, e] } {
            let rest = d - e * e;
            if rest % 8 != 0 {
                continue;
            }
            let m = rest / 8;
            for w in 1..=m {
                if m % w == 0 {
                    let h = m / w;
                    if w.gcd(&h).gcd(&sign_e) == 1 {
                        out.push((w, h, sign_e));
                    }
                }
            }
        }
        e += 1;
    }
    out.sort();
    out
}

/// An integer endomorphism of the anti-invariant lattice with minimal
/// polynomial `X² − eX − c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmGenerator {
    pub matrix: Mat,
    pub e: i64,
    pub c: i64,
}

impl RmGenerator {
    pub fn discriminant(&self) -> i64 {
        self.e * self.e + 4 * self.c
    }
}

/// The generator `[[e·Id, diag(2w, 2h)], [diag(h, w), 0]]` with `c = 2wh`.
pub fn rm_generator(p: &Prototype) -> RmGenerator {
    let (w, h, e) = (p.w, p.h, p.e);
    RmGenerator {
        matrix: vec![vec![e, 0, 2 * w, 0], vec![0, e, 0, 2 * h], vec![h, 0, 0, 0], vec![0, w, 0, 0]],
        e,
        c: 2 * w * h,
    }
}

/// Normalizes `T` to `T + k·Id` with trace parameter `e_c ∈ {0, 1}`.
pub fn canonical_generator(t: &RmGenerator) -> RmGenerator {
    let ec = t.e.rem_euclid(2);
    let k = (ec - t.e) / 2;
    let n = t.matrix.len();
    let matrix = intmat::add(&t.matrix, &intmat::scale(&intmat::identity(n), k));
    RmGenerator { matrix, e: ec, c: t.c - k * t.e - k * k }
}

/// The polarization `diag(J, 2J)`.
pub fn polarization() -> Mat {
    intmat::block_form(&[1, 2])
}

/// Parity of the intersection form `g` restricted, modulo 2, to the range
/// of `m` modulo 2: 1 when it is nonzero, 0 when it vanishes.
pub fn range_parity(m: &Mat, g: &Mat) -> u8 {
    let range = intmat::f2_column_space(&intmat::mod2(m));
    let g2 = intmat::mod2(g);
    for x in &range {
        for y in &range {
            let mut s = 0u8;
            for i in 0..x.len() {
                for j in 0..y.len() {
                    s ^= x[i] & g2[i][j] & y[j];
                }
            }
            if s == 1 {
                return 1;
            }
        }
    }
    0
}

/// Component class of a prototype.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentClass {
    pub disc: i64,
    /// Parity of the canonical generator's range; meaningful only for odd D.
    pub parity: Option<u8>,
    /// The same parity, always computed (diagnostic for even D).
    pub raw_parity: u8,
}

/// The mod-2 invariant of the canonical generator of `p`.
pub fn component_invariant(p: &Prototype) -> ComponentClass {
    let t = canonical_generator(&rm_generator(p));
    let raw = range_parity(&t.matrix, &polarization());
    let disc = p.discriminant();
    ComponentClass { disc, parity: if disc % 2 == 1 { Some(raw) } else { None }, raw_parity: raw }
}

/// One parity class of prototypes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub parity: Option<u8>,
    pub prototypes: Vec<[i64; 3]>,
}

/// Classification of the prototypes of one discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(rename = "D")]
    pub disc: i64,
    pub kappa: Kappa,
    pub classes: Vec<ClassEntry>,
    /// Number of classes predicted by the residue of D modulo 8.
    pub expected_classes: usize,
}

impl ClassificationReport {
    pub fn is_consistent(&self) -> bool {
        self.classes.len() == self.expected_classes
    }

    pub fn to_json(&self) -> Value {
        json!({
            "D": self.disc,
            "kappa": self.kappa.to_string(),
            "classes": self.classes.iter().map(|c| json!({
                "parity": c.parity,
                "prototypes": c.prototypes,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Groups the prototypes of `D` by component class and records how many
/// classes are expected (2 for `D ≡ 1 mod 8`, otherwise 1).
pub fn classify_components(d: i64, kappa: Kappa) -> Result<ClassificationReport> {
    let protos = enumerate_prototypes(d);
    if d.rem_euclid(8) == 5 || protos.is_empty() {
        return Err(Error::EmptyLocus(d));
    }
    let mut classes: Vec<ClassEntry> = Vec::new();
    let mut raws: Vec<u8> = Vec::new();
    for (w, h, e) in protos {
        let p = Prototype { kappa, w, h, e };
        let class = component_invariant(&p);
        match raws.iter().position(|&r| r == class.raw_parity) {
            Some(i) => classes[i].prototypes.push([w, h, e]),
            None => {
                raws.push(class.raw_parity);
                classes.push(ClassEntry { parity: class.parity, prototypes: vec![[w, h, e]] });
            }
        }
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| raws[i]);
    let classes = order.into_iter().map(|i| classes[i].clone()).collect();
    let expected_classes = if d.rem_euclid(8) == 1 { 2 } else { 1 };
    Ok(ClassificationReport { disc: d, kappa, classes, expected_classes })
}

/// A genus-3 surface together with a Prym involution and a polarized basis
/// of the anti-invariant lattice. The surface is kept in Delaunay cell form,
/// on which automorphisms are flag maps.
#[derive(Clone, Debug)]
pub struct PrymSurface {
    pub surface: TranslationSurface,
    pub tau: FlagMap,
    pub h1: H1Data,
    pub tau_action: Mat,
    pub lattice: PrymLattice,
}

impl PrymSurface {
    /// Periods `(ω(a0), ω(b0), ω(a), ω(b))`.
    pub fn periods(&self) -> Vec<Vec2> {
        homology::period_vector(&self.surface, &self.lattice)
    }

    pub fn disc(&self) -> u64 {
        self.surface.disc()
    }

    /// Number of fixed points of τ.
    pub fn tau_fixed_points(&self) -> usize {
        surface::fixed_points_anti(&self.surface, &self.tau)
    }

    /// Attaches a Prym involution to a cell-form surface, given
    /// anti-invariant cycles forming a polarized basis. When several Prym
    /// involutions exist, the one negating the given cycles is chosen.
    pub fn from_cycles(cells: TranslationSurface, lattice_chains: &[Chain]) -> Result<Self> {
        let h1 = homology::h1_basis(&cells);
        let candidates = prym_candidates(&cells, &h1);
        for (tau, action) in candidates {
            let negates = lattice_chains.iter().all(|c| {
                let x = h1.coords(c);
                let y = h1.coords(&tau.push_chain(c));
                x.iter().zip(&y).all(|(a, b)| a + b == 0)
            });
            if negates {
                let lattice = homology::prym_lattice_from_cycles(&h1, &action, lattice_chains)?;
                return Ok(PrymSurface { surface: cells, tau, h1, tau_action: action, lattice });
            }
        }
        Err(Error::NoInvolution("no Prym involution negates the given cycles".into()))
    }

    /// Detects a Prym involution on an arbitrary surface (the first one in
    /// the deterministic automorphism order) and computes a polarized basis.
    pub fn detect(s: &TranslationSurface) -> Result<Self> {
        let cells = s.delaunay_cells();
        let h1 = homology::h1_basis(&cells);
        let (tau, action) = prym_candidates(&cells, &h1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::NoInvolution("no involution with f*ω = −ω and trace −2".into()))?;
        let lattice = homology::anti_invariant_lattice(&h1, &action)?;
        Ok(PrymSurface { surface: cells, tau, h1, tau_action: action, lattice })
    }

    /// Re-identifies the involution on a surface obtained from `self` by a
    /// deformation. `old_basis` are the transported H1 basis cycles of
    /// `self.h1`, `lattice_chains` the transported lattice cycles, both as
    /// chains on `cells`. The chosen involution acts on the transported
    /// basis exactly as `self.tau` acted on the original one.
    pub fn transported(&self, cells: TranslationSurface, old_basis: &[Chain], lattice_chains: &[Chain]) -> Result<Self> {
        let h1 = homology::h1_basis(&cells);
        let c = h1.coords_matrix(old_basis);
        let target = intmat::mul(&c, &self.tau_action);
        for (tau, action) in prym_candidates(&cells, &h1) {
            if intmat::mul(&action, &c) == target {
                let lattice = homology::prym_lattice_from_cycles(&h1, &action, lattice_chains)?;
                return Ok(PrymSurface { surface: cells, tau, h1, tau_action: action, lattice });
            }
        }
        Err(Error::NoInvolution("the involution does not persist on the deformed surface".into()))
    }

    /// Chains to transport through a deformation: the H1 basis followed by
    /// the four lattice cycles.
    pub fn tracked_chains(&self) -> Vec<Chain> {
        let mut v = self.h1.basis.clone();
        v.extend(self.lattice.chains.iter().cloned());
        v
    }

    /// Inverse of [`tracked_chains`](Self::tracked_chains).
    pub fn from_tracked(&self, cells: TranslationSurface, chains: &[Chain]) -> Result<Self> {
        let k = self.h1.dim();
        self.transported(cells, &chains[..k], &chains[k..])
    }
}

/// Involutions with `f*ω = −ω` and H1-trace −2, with their actions.
fn prym_candidates(cells: &TranslationSurface, h1: &H1Data) -> Vec<(FlagMap, Mat)> {
    surface::maps_between_cells(cells, cells, -1, false, false)
        .into_iter()
        .filter(|f| f.compose(f).is_identity())
        .filter_map(|f| {
            let a = h1.induced_action(&f);
            (intmat::trace(&a) == -2).then_some((f, a))
        })
        .collect()
}

/// The polygon presentation of a prototype surface, with the basis cycles
/// `(a0, b0, a, b)` as chains on its half-edges.
pub fn prototype_polygons(p: &Prototype, slit: Option<&QuadNum>) -> Result<(TranslationSurface, Vec<Chain>)> {
    let d = p.discriminant() as u64;
    let lambda = p.lambda().in_field(d);
    let w = QuadNum::from_int(p.w);
    let h = QuadNum::from_int(p.h);
    let s = match slit {
        Some(s) => s.in_field(d),
        None => p.default_slit().in_field(d),
    };
    let zero = QuadNum::zero();
    let v = |x: &QuadNum, y: &QuadNum| Vec2::new(x.clone(), y.clone()).in_field(d);
    let in_range = s.sign() > 0
        && s < w
        && s < lambda
        && (p.kappa == Kappa::TwoTwo || &s * &QuadNum::from_int(2) < lambda);
    if !in_range {
        return Err(Error::SlitOutOfRange(format!(
            "slit {} must satisfy 0 < slit < min(w, λ){} for {p}",
            s.to_plain(),
            if p.kappa == Kappa::OneOneTwo { " and 2·slit < λ" } else { "" }
        )));
    }
    match p.kappa {
        Kappa::TwoTwo => {
            let hexagon = |width: &QuadNum, height: &QuadNum| {
                vec![
                    v(&s, &zero),
                    v(&(width - &s), &zero),
                    v(&zero, height),
                    v(&(&s - width), &zero),
                    v(&-&s, &zero),
                    v(&zero, &-height),
                ]
            };
            let polygons = vec![hexagon(&lambda, &lambda), hexagon(&w, &h), hexagon(&w, &h)];
            let mut gluing = Vec::new();
            for k in 0..3 {
                gluing.push(((k, 1), (k, 3)));
                gluing.push(((k, 2), (k, 5)));
            }
            gluing.push(((0, 4), (1, 0)));
            gluing.push(((1, 4), (2, 0)));
            gluing.push(((2, 4), (0, 0)));
            let labels = vec![("P".to_string(), (0, 0)), ("Q".to_string(), (0, 1))];
            let surf = TranslationSurface::from_polygons(d, polygons, &gluing, &labels)?;
            let n = surf.num_half_edges();
            let chain = |hs: &[usize]| homology::walk_chain(n, hs);
            let chains = vec![chain(&[0, 1]), chain(&[2]), chain(&[6, 7, 12, 13]), chain(&[8, 14])];
            Ok((surf, chains))
        }
        Kappa::OneOneTwo => {
            let mid = &lambda - &(&s * &QuadNum::from_int(2));
            let octagon = vec![
                v(&s, &zero),
                v(&mid, &zero),
                v(&s, &zero),
                v(&zero, &lambda),
                v(&-&s, &zero),
                v(&-&mid, &zero),
                v(&-&s, &zero),
                v(&zero, &-&lambda),
            ];
            let t1 = vec![
                v(&s, &zero),
                v(&(&w - &s), &zero),
                v(&zero, &h),
                v(&(&s - &w), &zero),
                v(&-&s, &zero),
                v(&zero, &-&h),
            ];
            let t2 = vec![
                v(&(&w - &s), &zero),
                v(&s, &zero),
                v(&zero, &h),
                v(&-&s, &zero),
                v(&-(&w - &s), &zero),
                v(&zero, &-&h),
            ];
            let gluing = vec![
                ((0, 1), (0, 5)),
                ((0, 3), (0, 7)),
                ((1, 1), (1, 3)),
                ((1, 2), (1, 5)),
                ((2, 0), (2, 4)),
                ((2, 2), (2, 5)),
                ((0, 2), (1, 4)),
                ((0, 4), (1, 0)),
                ((0, 0), (2, 3)),
                ((0, 6), (2, 1)),
            ];
            let labels =
                vec![("Q".to_string(), (0, 0)), ("R1".to_string(), (1, 0)), ("R2".to_string(), (2, 0))];
            let surf = TranslationSurface::from_polygons(d, vec![octagon, t1, t2], &gluing, &labels)?;
            let n = surf.num_half_edges();
            let chain = |hs: &[usize]| homology::walk_chain(n, hs);
            let chains = vec![chain(&[0, 1, 2]), chain(&[3]), chain(&[8, 9, 14, 15]), chain(&[10, 16])];
            Ok((surf, chains))
        }
    }
}

/// Builds the prototype surface in cell form with its Prym involution and
/// polarized lattice, verifying the stratum, the involution's fixed points
/// and its action on the zeros.
pub fn build_prototype_surface(p: &Prototype, slit: Option<&QuadNum>) -> Result<PrymSurface> {
    let (poly, mut chains) = prototype_polygons(p, slit)?;
    let cells = poly.delaunay_cells_tracked(&mut chains);
    let ps = PrymSurface::from_cycles(cells, &chains)?;
    check_prym_structure(&ps, Some(p.kappa))?;
    Ok(ps)
}

/// Checks stratum, fixed points and the involution's action on named zeros.
pub fn check_prym_structure(ps: &PrymSurface, kappa: Option<Kappa>) -> Result<()> {
    let s = &ps.surface;
    if let Some(k) = kappa {
        let orders = s.stratum_orders();
        if orders != k.orders() {
            return Err(Error::Malformed(format!("stratum {orders:?} differs from ({k})")));
        }
    }
    let fixed = ps.tau_fixed_points();
    if fixed != 4 {
        return Err(Error::NoInvolution(format!("involution has {fixed} fixed points, expected 4")));
    }
    let image_label = |name: &str| -> Option<String> {
        let h = s.corner_with_label(name)?;
        s.label(ps.tau.apply(h)).map(str::to_string)
    };
    let expect = |a: &str, b: &str| -> Result<()> {
        match image_label(a) {
            Some(x) if x == b => Ok(()),
            Some(x) => Err(Error::NoInvolution(format!("involution maps {a} to {x}, expected {b}"))),
            None => Ok(()),
        }
    };
    match kappa {
        Some(Kappa::TwoTwo) => {
            expect("P", "Q")?;
            expect("Q", "P")?;
        }
        Some(Kappa::OneOneTwo) => {
            expect("Q", "Q")?;
            expect("R1", "R2")?;
            expect("R2", "R1")?;
        }
        None => {}
    }
    Ok(())
}

/// Outcome of the real-multiplication checks.
#[derive(Clone, Debug)]
pub struct RmReport {
    pub self_adjoint: bool,
    /// Recomputed minimal-polynomial parameters `(e, c)` from the matrix.
    pub min_poly_ok: bool,
    pub found_disc: i64,
    pub eigenform: bool,
    pub lambda: QuadNum,
    /// Z[T] properness is certified only through the discriminant.
    pub properness_by_discriminant_only: bool,
}

/// Verifies real multiplication by `O_D` on the Prym lattice of `ps`:
/// the minimal polynomial `X² − eX − c` with `e² + 4c = D`, the eigenform
/// identity `v·T = λv` for the period row vector, and self-adjointness for
/// `diag(J, 2J)`. Errors are reported in that order.
pub fn verify_real_multiplication(ps: &PrymSurface, t: &RmGenerator, disc: i64) -> Result<RmReport> {
    let periods = ps.periods();
    verify_rm_on_periods(&periods, &ps.lattice.gram, t, disc)
}

/// [`verify_real_multiplication`] on explicit periods and form.
pub fn verify_rm_on_periods(periods: &[Vec2], gram: &Mat, t: &RmGenerator, disc: i64) -> Result<RmReport> {
    let m = &t.matrix;
    let n = m.len();
    let id = intmat::identity(n);
    let residual = intmat::add(&intmat::mul(m, m), &intmat::scale(m, -t.e));
    let scalar = (0..n).all(|i| (0..n).all(|j| residual[i][j] == if i == j { residual[0][0] } else { 0 }));
    let c_found = if scalar { residual[0][0] } else { intmat::trace(&residual).div_euclid(n as i64) };
    let found_disc = t.e * t.e + 4 * c_found;
    let min_poly_ok = scalar && found_disc == disc && intmat::add(&residual, &intmat::scale(&id, -t.c)) == intmat::zeros(n, n);
    let lambda = QuadNum::from_parts(t.e, 1, 2, disc.max(0) as u64);
    let d = disc.max(0) as u64;
    let mut eigenform = periods.len() == n;
    if eigenform {
        for j in 0..n {
            let mut acc = Vec2::zero().in_field(d);
            for (i, p) in periods.iter().enumerate() {
                if m[i][j] != 0 {
                    acc = &acc + &p.scale(&QuadNum::from_int(m[i][j]));
                }
            }
            if acc != periods[j].scale(&lambda) {
                eigenform = false;
                break;
            }
        }
    }
    let lhs = intmat::mul(&intmat::transpose(m), gram);
    let rhs = intmat::mul(gram, m);
    let self_adjoint = lhs == rhs;
    let report = RmReport {
        self_adjoint,
        min_poly_ok,
        found_disc,
        eigenform,
        lambda: lambda.clone(),
        properness_by_discriminant_only: true,
    };
    if !min_poly_ok {
        return Err(Error::WrongDiscriminant { expected: disc, found: found_disc });
    }
    if !eigenform {
        return Err(Error::NotEigenform(format!("v·T ≠ λ·v for λ = {}", lambda.to_plain())));
    }
    if !self_adjoint {
        return Err(Error::NotSelfAdjoint);
    }
    Ok(report)
}

/// Prym involutions of a surface and data on their pairwise composites.
#[derive(Clone, Debug)]
pub struct InvolutionCensus {
    /// The surface in cell form on which the maps act.
    pub cells: TranslationSurface,
    pub involutions: Vec<FlagMap>,
    /// `(i, j, order of τ_i∘τ_j, genus of the quotient by it)`.
    pub composites: Vec<(usize, usize, usize, Option<i64>)>,
}

impl InvolutionCensus {
    /// True when every pairwise composite has order 3 with a torus quotient
    /// (the surface then lies in `H(2,2)`).
    pub fn composites_are_torus_triple_covers(&self) -> bool {
        self.composites.iter().all(|&(_, _, ord, g)| ord == 3 && g == Some(1))
    }
}

/// All involutions `τ` with `τ*ω = −ω` and H1-trace −2. For two or more,
/// each composite's order and quotient genus are recorded (an order-3
/// translation automorphism fixes only zeros; Riemann-Hurwitz then gives
/// the quotient genus `(10 − 2F)/6` for `F` fixed points).
pub fn find_prym_involutions(s: &TranslationSurface) -> InvolutionCensus {
    let cells = s.delaunay_cells();
    let h1 = homology::h1_basis(&cells);
    let involutions: Vec<FlagMap> = prym_candidates(&cells, &h1).into_iter().map(|(f, _)| f).collect();
    let mut composites = Vec::new();
    if involutions.len() >= 2 {
        for i in 0..involutions.len() {
            for j in i + 1..involutions.len() {
                let c = involutions[i].compose(&involutions[j]);
                let ord = c.order();
                let genus = if ord == 3 && cells.stratum_orders() == [2, 2] {
                    let f = surface::fixed_vertices(&cells, &c) as i64;
                    let num = 10 - 2 * f;
                    (num % 6 == 0).then_some(num / 6)
                } else {
                    None
                };
                composites.push((i, j, ord, genus));
            }
        }
    }
    InvolutionCensus { cells, involutions, composites }
}

/// Summary of every check for one prototype (used by the CLI and tests).
pub fn verify_prototype(p: &Prototype) -> Result<PrymSurface> {
    let ps = build_prototype_surface(p, None)?;
    verify_real_multiplication(&ps, &rm_generator(p), p.discriminant())?;
    Ok(ps)
}

/// Verifies every prototype of every discriminant in `ds` for both strata,
/// in parallel; returns failures as `(prototype, error)`.
pub fn verify_range(ds: &[i64]) -> Vec<(Prototype, Error)> {
    let jobs: Vec<Prototype> = ds
        .iter()
        .flat_map(|&d| enumerate_prototypes(d))
        .flat_map(|(w, h, e)| Kappa::ALL.map(|kappa| Prototype { kappa, w, h, e }))
        .collect();
    #[cfg(feature = "parallel")]
    let iter = jobs.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = jobs.iter();
    let mut fails: Vec<(Prototype, Error)> = iter.filter_map(|p| verify_prototype(p).err().map(|e| (*p, e))).collect();
    fails.sort_by_key(|(p, _)| *p);
    fails
}
