//! Straight-line geometry on translation surfaces: saddle connections,
//! twins, admissibility, cylinder decompositions and the three-tori
//! decomposition.
//!
//! Saddle connections are enumerated by unfolding a triangulation: from
//! every corner, the open wedge between its two sides is followed across
//! triangle edges, splitting at each newly visible vertex, and pruned once
//! the crossed edge lies farther than the length bound. Every vertex of the
//! surface, including regular marked points, counts as an endpoint.
//!
//! Directions of a connection are recorded by germs: the corner of the
//! input surface whose half-open wedge `[side, next side)` contains the
//! outgoing direction. A connection is determined by its starting germ and
//! its holonomy.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homology;
use crate::prym::PrymSurface;
use crate::qfield::{dist2_origin_segment, QuadNum, Vec2};
use crate::surface::{self, mat2_apply, mat2_inverse, HalfEdge, Mat2, TranslationSurface};

/// An oriented saddle connection.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleConnection {
    pub holonomy: Vec2,
    pub start: Option<String>,
    pub end: Option<String>,
    pub start_vertex: usize,
    pub end_vertex: usize,
    /// Corner of the input surface containing the outgoing direction.
    pub start_germ: HalfEdge,
    /// Corner of the input surface containing the reversed direction at the
    /// end point.
    pub end_germ: HalfEdge,
    /// Triangulation half-edges crossed, in order.
    pub path: Vec<HalfEdge>,
}

impl SaddleConnection {
    pub fn len2(&self) -> QuadNum {
        self.holonomy.norm2()
    }

    /// Same connection with the opposite orientation (path omitted).
    pub fn reversed(&self) -> SaddleConnection {
        SaddleConnection {
            holonomy: -&self.holonomy,
            start: self.end.clone(),
            end: self.start.clone(),
            start_vertex: self.end_vertex,
            end_vertex: self.start_vertex,
            start_germ: self.end_germ,
            end_germ: self.start_germ,
            path: Vec::new(),
        }
    }

    /// True when both describe the same oriented segment.
    pub fn same_as(&self, o: &SaddleConnection) -> bool {
        self.start_germ == o.start_germ && self.holonomy == o.holonomy
    }

    pub fn to_json(&self) -> Value {
        json!({
            "hol": surface::vec2_json(&self.holonomy),
            "from": self.start,
            "to": self.end,
            "len2": self.len2().to_json(),
        })
    }
}

fn total_order(a: &SaddleConnection, b: &SaddleConnection) -> Ordering {
    a.len2()
        .cmp(&b.len2())
        .then_with(|| a.holonomy.lex_cmp(&b.holonomy))
        .then_with(|| a.start_germ.cmp(&b.start_germ))
}

/// Triangulation of a surface with the data needed to report germs.
struct Unfolder<'a> {
    surf: &'a TranslationSurface,
    tri: TranslationSurface,
    corner: Vec<HalfEdge>,
    vid: Vec<usize>,
    labels: Vec<Option<String>>,
}

impl<'a> Unfolder<'a> {
    fn new(surf: &'a TranslationSurface) -> Self {
        let (tri, corner) = surf.triangulate_with_corners();
        let (vid, _) = surf.vertex_ids();
        let labels = surf.vertex_labels();
        Unfolder { surf, tri, corner, vid, labels }
    }

    fn vertex_of(&self, t: HalfEdge) -> usize {
        self.vid[self.corner[t]]
    }

    fn make(&self, start: HalfEdge, end: HalfEdge, hol: Vec2, path: Vec<HalfEdge>) -> SaddleConnection {
        let sv = self.vertex_of(start);
        let ev = self.vertex_of(end);
        SaddleConnection {
            holonomy: hol.in_field(self.surf.disc()),
            start: self.labels[sv].clone(),
            end: self.labels[ev].clone(),
            start_vertex: sv,
            end_vertex: ev,
            start_germ: self.corner[start],
            end_germ: self.corner[end],
            path,
        }
    }

    /// All connections of squared length at most `max_len2` starting in the
    /// corner `t` of the triangulation (its first side included).
    fn scan_corner(&self, t: HalfEdge, max_len2: &QuadNum, out: &mut Vec<SaddleConnection>) {
        let tri = &self.tri;
        let side = tri.vec(t).clone();
        if &side.norm2() <= max_len2 {
            out.push(self.make(t, tri.partner(t), side.clone(), Vec::new()));
        }
        let lo = side.clone();
        let hi = -tri.vec(tri.prev(t));
        let g = tri.next(t);
        let q = hi.clone();
        // (crossed half-edge, right end, left end, window lo, window hi, path)
        let mut stack = vec![(g, side, q, lo, hi, Vec::new())];
        while let Some((g, p, q, lo, hi, path)) = stack.pop() {
            if &dist2_origin_segment(&p, &q) > max_len2 {
                continue;
            }
            let gp = tri.partner(g);
            let n1 = tri.next(gp);
            let n2 = tri.next(n1);
            let x = &p + tri.vec(n1);
            let mut path2 = path.clone();
            path2.push(g);
            let cl = lo.cross(&x).sign();
            let ch = x.cross(&hi).sign();
            if cl > 0 && ch > 0 {
                if &x.norm2() <= max_len2 {
                    out.push(self.make(t, n2, x.clone(), path2.clone()));
                }
                stack.push((n1, p, x.clone(), lo, x.clone(), path2.clone()));
                stack.push((n2, x.clone(), q, x, hi, path2));
            } else if cl <= 0 {
                stack.push((n2, x, q, lo, hi, path2));
            } else {
                stack.push((n1, p, x, lo, hi, path2));
            }
        }
    }

    /// The connection leaving corner `t` in direction `dir` (strictly inside
    /// the corner), if it is no longer than the bound.
    fn ray(&self, t: HalfEdge, dir: &Vec2, max_len2: &QuadNum) -> Option<SaddleConnection> {
        let tri = &self.tri;
        let mut g = tri.next(t);
        let mut p = tri.vec(t).clone();
        let mut q = -tri.vec(tri.prev(t));
        let mut path = Vec::new();
        loop {
            if &dist2_origin_segment(&p, &q) > max_len2 {
                return None;
            }
            path.push(g);
            let gp = tri.partner(g);
            let n1 = tri.next(gp);
            let n2 = tri.next(n1);
            let x = &p + tri.vec(n1);
            match dir.cross(&x).sign() {
                0 => {
                    return (&x.norm2() <= max_len2).then(|| self.make(t, n2, x, path));
                }
                1 => {
                    g = n1;
                    q = x;
                }
                _ => {
                    g = n2;
                    p = x;
                }
            }
        }
    }
}

/// True when `d` lies in the half-open corner `[a, b)` of angle below `π`.
fn in_corner(a: &Vec2, b: &Vec2, d: &Vec2) -> bool {
    let ca = a.cross(d).sign();
    (ca == 0 && a.dot(d).sign() > 0) || (ca > 0 && d.cross(b).sign() > 0)
}

/// Every saddle connection with `|hol|² ≤ max_len2`, both orientations,
/// sorted by length, then holonomy, then starting germ.
pub fn saddle_connections_len2(s: &TranslationSurface, max_len2: &QuadNum) -> Vec<SaddleConnection> {
    let u = Unfolder::new(s);
    let mut out = Vec::new();
    for t in 0..u.tri.num_half_edges() {
        u.scan_corner(t, max_len2, &mut out);
    }
    out.sort_by(total_order);
    out
}

/// Every saddle connection of length at most `l`.
pub fn saddle_connections(s: &TranslationSurface, l: &QuadNum) -> Vec<SaddleConnection> {
    saddle_connections_len2(s, &(l * l))
}

/// Saddle connections with holonomy a positive multiple of `dir` and
/// `|hol|² ≤ max_len2`, sorted.
pub fn connections_in_direction(s: &TranslationSurface, dir: &Vec2, max_len2: &QuadNum) -> Vec<SaddleConnection> {
    let u = Unfolder::new(s);
    let tri = &u.tri;
    let mut out = Vec::new();
    for t in 0..tri.num_half_edges() {
        let a = tri.vec(t);
        let b = -tri.vec(tri.prev(t));
        if !in_corner(a, &b, dir) {
            continue;
        }
        if a.same_direction(dir) {
            if &a.norm2() <= max_len2 {
                out.push(u.make(t, tri.partner(t), a.clone(), Vec::new()));
            }
        } else if let Some(sc) = u.ray(t, dir, max_len2) {
            out.push(sc);
        }
    }
    out.sort_by(total_order);
    out
}

/// The image `(germ, holonomy)` of a connection under an automorphism with
/// `f*ω = −ω`, given as a flag map of the surface the connection lives on.
pub fn anti_image(sc: &SaddleConnection, f: &surface::FlagMap) -> (HalfEdge, Vec2) {
    (f.apply(sc.start_germ), -&sc.holonomy)
}

/// True when the involution maps the connection onto itself (reversed).
pub fn is_tau_invariant(sc: &SaddleConnection, tau: &surface::FlagMap) -> bool {
    tau.apply(sc.start_germ) == sc.end_germ
}

/// Zero layout of a surface for the designated-connection convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    TwoTwo,
    OneOneTwo,
}

fn layout(s: &TranslationSurface) -> Option<Layout> {
    match s.stratum_orders().as_slice() {
        [2, 2] => Some(Layout::TwoTwo),
        [2, 1, 1] => Some(Layout::OneOneTwo),
        _ => None,
    }
}

/// Checks that `σ0` follows the convention: `P → Q` and τ-invariant in
/// `H(2,2)`, `R1 → Q` in `H(1,1,2)`.
pub fn check_convention(ps: &PrymSurface, sigma0: &SaddleConnection) -> Result<()> {
    let ends = (sigma0.start.as_deref(), sigma0.end.as_deref());
    match layout(&ps.surface) {
        Some(Layout::TwoTwo) => {
            if ends != (Some("P"), Some("Q")) {
                return Err(Error::WrongEndpoints(format!("expected P → Q, got {:?} → {:?}", ends.0, ends.1)));
            }
            if !is_tau_invariant(sigma0, &ps.tau) {
                return Err(Error::WrongEndpoints("connection is not invariant under the involution".into()));
            }
            Ok(())
        }
        Some(Layout::OneOneTwo) => {
            if ends != (Some("R1"), Some("Q")) {
                return Err(Error::WrongEndpoints(format!("expected R1 → Q, got {:?} → {:?}", ends.0, ends.1)));
            }
            Ok(())
        }
        None => Err(Error::WrongEndpoints(format!("surface is in stratum {:?}", ps.surface.stratum_orders()))),
    }
}

/// Connections following the convention with `|hol|² ≤ max_len2`, sorted by
/// length and holonomy.
pub fn designated_connections(ps: &PrymSurface, max_len2: &QuadNum) -> Vec<SaddleConnection> {
    saddle_connections_len2(&ps.surface, max_len2)
        .into_iter()
        .filter(|sc| check_convention(ps, sc).is_ok())
        .collect()
}

/// Twins (same endpoints, same holonomy) and double twins (`R1 → R2`,
/// doubled holonomy) of a designated connection.
#[derive(Clone, Debug)]
pub struct TwinReport {
    pub twins: Vec<SaddleConnection>,
    pub double_twins: Vec<SaddleConnection>,
}

/// Twins of `σ0`, searched among parallel connections of length at most
/// `2|σ0|`.
pub fn twins(ps: &PrymSurface, sigma0: &SaddleConnection) -> Result<TwinReport> {
    check_convention(ps, sigma0)?;
    let h0 = &sigma0.holonomy;
    let bound = &h0.norm2() * &QuadNum::from_int(4);
    let parallel = connections_in_direction(&ps.surface, h0, &bound);
    let twins: Vec<SaddleConnection> = parallel
        .iter()
        .filter(|sc| {
            sc.holonomy == *h0 && sc.start == sigma0.start && sc.end == sigma0.end && !sc.same_as(sigma0)
        })
        .cloned()
        .collect();
    let double = h0.scale(&QuadNum::from_int(2));
    let double_twins: Vec<SaddleConnection> = if layout(&ps.surface) == Some(Layout::OneOneTwo) {
        parallel
            .iter()
            .filter(|sc| sc.holonomy == double && sc.start.as_deref() == Some("R1") && sc.end.as_deref() == Some("R2"))
            .cloned()
            .collect()
    } else {
        Vec::new()
    };
    let over = match layout(&ps.surface) {
        Some(Layout::TwoTwo) => twins.len() > 2,
        _ => twins.len() + double_twins.len() > 1,
    };
    if over {
        return Err(Error::Malformed(format!(
            "{} twins and {} double twins exceed the bound for this stratum",
            twins.len(),
            double_twins.len()
        )));
    }
    Ok(TwinReport { twins, double_twins })
}

/// Verdict of the admissibility test with a violating connection.
#[derive(Clone, Debug)]
pub struct Admissibility {
    pub admissible: bool,
    pub certificate: Option<SaddleConnection>,
}

/// Decides admissibility of `σ0`: every other connection from the start of
/// `σ0` parallel to it with holonomy `λ·hol(σ0)` must have `λ > 1` when it
/// ends at `Q`, and `λ > 2` when it ends at `R2`. Only connections of
/// length at most `2|σ0|` can violate this, so the check is exact.
pub fn is_admissible(ps: &PrymSurface, sigma0: &SaddleConnection) -> Result<Admissibility> {
    check_convention(ps, sigma0)?;
    let h0 = &sigma0.holonomy;
    let n0 = h0.norm2();
    let bound = &n0 * &QuadNum::from_int(4);
    for sc in connections_in_direction(&ps.surface, h0, &bound) {
        if sc.same_as(sigma0) || sc.start != sigma0.start {
            continue;
        }
        // λ·|h0|² = hol · h0.
        let ratio_num = sc.holonomy.dot(h0);
        let limit = match sc.end.as_deref() {
            Some("Q") => QuadNum::one(),
            Some("R2") if layout(&ps.surface) == Some(Layout::OneOneTwo) => QuadNum::from_int(2),
            _ => continue,
        };
        if ratio_num <= &limit * &n0 {
            return Ok(Admissibility { admissible: false, certificate: Some(sc) });
        }
    }
    Ok(Admissibility { admissible: true, certificate: None })
}

/// A maximal cylinder in a periodic direction.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub direction: Vec2,
    /// Circumference, in units of `|direction|`.
    pub width: QuadNum,
    /// Height, in units of `1/|direction|` times the area scale: the product
    /// `width·height` equals the cylinder's area divided by `|direction|²`.
    pub height: QuadNum,
    /// Saddle connections on the bottom boundary, as holonomies.
    pub bottom: Vec<Vec2>,
    /// Saddle connections on the top boundary, as holonomies.
    pub top: Vec<Vec2>,
}

impl Cylinder {
    pub fn to_json(&self) -> Value {
        json!({
            "width": self.width.to_json(),
            "height": self.height.to_json(),
            "bottom": self.bottom.iter().map(surface::vec2_json).collect::<Vec<_>>(),
            "top": self.top.iter().map(surface::vec2_json).collect::<Vec<_>>(),
        })
    }
}

/// `M` with `M·d = (1, 0)`: rotation onto the x-axis scaled by `1/|d|`.
fn to_horizontal(d: &Vec2) -> Mat2 {
    let n = d.norm2();
    [[&d.x / &n, &d.y / &n], [-(&d.y / &n), &d.x / &n]]
}

/// Cylinder decomposition in direction `dir`. The surface is mapped so that
/// `dir` becomes `(1, 0)`, then repeatedly stretched vertically and
/// re-triangulated until every outgoing horizontal separatrix is an edge.
/// Widths and heights are measured on the mapped surface, i.e. in units of
/// `|dir|`.
pub fn cylinder_decomposition(s: &TranslationSurface, dir: &Vec2) -> Result<Vec<Cylinder>> {
    if dir.is_zero() {
        return Err(Error::Usage("direction must be nonzero".into()));
    }
    let m = to_horizontal(&dir.in_field(s.disc()));
    let mut t = s.apply_gl2(&m)?.triangulate();
    t.make_delaunay(&mut []);
    let budget = 10 * t.num_faces().max(1);
    let two = QuadNum::from_int(2);
    let mut scale = QuadNum::one();
    for _ in 0..=budget {
        if let Some(cyls) = read_cylinders(&t, &scale, dir) {
            return Ok(cyls);
        }
        for v in t.vecs.iter_mut() {
            v.y = &v.y * &two;
        }
        scale = &scale * &two;
        t.make_delaunay(&mut []);
    }
    Err(Error::NotPeriodicWithinBudget)
}

fn is_east(v: &Vec2) -> bool {
    v.y.is_zero() && v.x.sign() > 0
}

/// Cylinders of a triangulation in which every horizontal separatrix is an
/// edge; `None` while some separatrix is not yet an edge.
fn read_cylinders(t: &TranslationSurface, scale: &QuadNum, dir: &Vec2) -> Option<Vec<Cylinder>> {
    let (vid, nv) = t.vertex_ids();
    let orders = t.vertex_orders();
    let mut east = vec![0usize; nv];
    for h in 0..t.num_half_edges() {
        if is_east(t.vec(h)) {
            east[vid[h]] += 1;
        }
    }
    if (0..nv).any(|v| east[v] != orders[v] + 1) {
        return None;
    }
    let nf = t.num_faces();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for h in 0..t.num_half_edges() {
        if !t.vec(h).y.is_zero() {
            let a = find(&mut parent, t.face_of(h));
            let b = find(&mut parent, t.face_of(t.partner(h)));
            parent[a] = b;
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for f in 0..nf {
        let r = find(&mut parent, f);
        groups.entry(r).or_default().push(f);
    }
    let mut cyls = Vec::new();
    for faces in groups.values() {
        let mut width = QuadNum::zero();
        let mut area2 = QuadNum::zero();
        let mut bottom = Vec::new();
        let mut top = Vec::new();
        for &f in faces {
            area2 += &t.face_area2(f);
            for &h in t.face(f) {
                let v = t.vec(h);
                if is_east(v) {
                    width += &v.x;
                    bottom.push(dir.scale(&v.x));
                } else if v.y.is_zero() {
                    top.push(dir.scale(&-&v.x));
                }
            }
        }
        let height = &(&area2 / &(&width * &QuadNum::from_int(2))) / scale;
        bottom.sort_by(|a, b| a.lex_cmp(b));
        top.sort_by(|a, b| a.lex_cmp(b));
        cyls.push(Cylinder { direction: dir.clone(), width, height, bottom, top });
    }
    cyls.sort_by(|a, b| b.width.cmp(&a.width).then_with(|| b.height.cmp(&a.height)).then_with(|| {
        a.bottom.len().cmp(&b.bottom.len())
    }));
    Some(cyls)
}

/// A presentation as three slit tori.
#[derive(Clone, Debug)]
pub struct ThreeToriDecomposition {
    /// The slits: `σ0` with its twins, or `σ0`, its twin and their images.
    pub slits: Vec<SaddleConnection>,
    /// Reduced lattice bases of the tori, the fixed torus first.
    pub tori: Vec<[Vec2; 2]>,
    pub fixed_torus_index: usize,
}

/// Gauss-reduced basis of the lattice spanned by `u, v`, positively
/// oriented.
pub fn reduce_lattice(u: &Vec2, v: &Vec2) -> [Vec2; 2] {
    let (mut a, mut b) = (u.clone(), v.clone());
    loop {
        if b.norm2() < a.norm2() {
            std::mem::swap(&mut a, &mut b);
        }
        let r = &b.dot(&a) / &a.norm2();
        let m = (&r + &QuadNum::frac(1, 2)).floor();
        let m = QuadNum::rational(num_rational::BigRational::from_integer(m));
        if m.is_zero() {
            break;
        }
        b = &b - &a.scale(&m);
    }
    if a.cross(&b).sign() < 0 {
        b = -&b;
    }
    [a, b]
}

/// True when two bases span the same lattice.
pub fn same_lattice(a: &[Vec2; 2], b: &[Vec2; 2]) -> bool {
    let det = a[0].cross(&a[1]);
    if det.is_zero() {
        return false;
    }
    let integral = |w: &Vec2| {
        let x = &w.cross(&a[1]) / &det;
        let y = &a[0].cross(w) / &det;
        x.is_rational() && y.is_rational() && x.floor() == x.ceil() && y.floor() == y.ceil()
    };
    integral(&b[0]) && integral(&b[1]) && (b[0].cross(&b[1]) == det || b[0].cross(&b[1]) == -&det)
}

/// Finds a three-tori decomposition among designated connections with
/// `|hol|² ≤ max_len2` (default: the surface area) and verifies it by
/// cutting the surface along the slits.
pub fn three_tori_decomposition(ps: &PrymSurface, max_len2: Option<&QuadNum>) -> Option<ThreeToriDecomposition> {
    let lay = layout(&ps.surface)?;
    let bound = max_len2.cloned().unwrap_or_else(|| ps.surface.area());
    let all = saddle_connections_len2(&ps.surface, &bound);
    for sigma0 in all.iter().filter(|sc| check_convention(ps, sc).is_ok()) {
        let Ok(tw) = twins(ps, sigma0) else { continue };
        let mut slits = vec![sigma0.clone()];
        match lay {
            Layout::TwoTwo => {
                if tw.twins.len() != 2 {
                    continue;
                }
                slits.extend(tw.twins.iter().cloned());
            }
            Layout::OneOneTwo => {
                if tw.twins.len() != 1 {
                    continue;
                }
                slits.push(tw.twins[0].clone());
                let images: Vec<SaddleConnection> = slits
                    .iter()
                    .filter_map(|sc| {
                        let (g, hol) = anti_image(sc, &ps.tau);
                        all.iter().find(|x| x.start_germ == g && x.holonomy == hol).cloned()
                    })
                    .collect();
                if images.len() != 2 {
                    continue;
                }
                slits.extend(images);
            }
        }
        if let Some((tori, fixed)) = cut_along(ps, &slits) {
            let mut order: Vec<usize> = (0..tori.len()).filter(|&i| i != fixed).collect();
            order.insert(0, fixed);
            let tori = order.into_iter().map(|i| tori[i].clone()).collect();
            return Some(ThreeToriDecomposition { slits, tori, fixed_torus_index: 0 });
        }
    }
    None
}

/// Cuts along the slits after shrinking them into Delaunay edges; returns
/// the three torus lattices and the index of the τ-invariant piece.
fn cut_along(ps: &PrymSurface, slits: &[SaddleConnection]) -> Option<(Vec<[Vec2; 2]>, usize)> {
    let d = ps.surface.disc();
    let h0 = &slits[0].holonomy;
    let rot: Mat2 = [[h0.x.clone(), h0.y.clone()], [-&h0.y, h0.x.clone()]];
    let mut squeeze = QuadNum::one();
    for _ in 0..40 {
        let m: Mat2 = [[&rot[0][0] * &squeeze, &rot[0][1] * &squeeze], [rot[1][0].clone(), rot[1][1].clone()]];
        let mut chains = ps.tracked_chains();
        let shrunk = ps.surface.apply_gl2(&m).ok()?;
        let cells = shrunk.delaunay_cells_tracked(&mut chains);
        let ps2 = ps.from_tracked(cells, &chains).ok()?;
        if let Some(res) = cut_cells(&ps2, slits, &m, d) {
            return Some(res);
        }
        squeeze = &squeeze * &QuadNum::frac(1, 2);
    }
    None
}

fn cut_cells(ps2: &PrymSurface, slits: &[SaddleConnection], m: &Mat2, d: u64) -> Option<(Vec<[Vec2; 2]>, usize)> {
    let s = &ps2.surface;
    let (vid, _) = s.vertex_ids();
    let labels = s.vertex_labels();
    let lab = |h: HalfEdge| labels[vid[h]].clone();
    // Half-edges realizing the slits, oriented like the slits.
    let mut cut: Vec<HalfEdge> = Vec::new();
    let mut classes: Vec<(Vec2, Option<String>, Option<String>)> = Vec::new();
    for sc in slits {
        let key = (mat2_apply(m, &sc.holonomy).in_field(d), sc.start.clone(), sc.end.clone());
        if !classes.contains(&key) {
            classes.push(key);
        }
    }
    let mut needed = 0;
    for (v, a, b) in &classes {
        let count = slits
            .iter()
            .filter(|sc| mat2_apply(m, &sc.holonomy).in_field(d) == *v && &sc.start == a && &sc.end == b)
            .count();
        needed += count;
        let found: Vec<HalfEdge> = (0..s.num_half_edges())
            .filter(|&h| s.vec(h) == v && lab(h) == *a && lab(s.partner(h)) == *b)
            .collect();
        if found.len() != count {
            return None;
        }
        cut.extend(found);
    }
    if cut.len() != needed {
        return None;
    }
    let n = s.num_half_edges();
    let mut is_cut = vec![false; n];
    for &h in &cut {
        is_cut[h] = true;
        is_cut[s.partner(h)] = true;
    }
    let nf = s.num_faces();
    let mut comp = vec![usize::MAX; nf];
    let mut ncomp = 0;
    for f0 in 0..nf {
        if comp[f0] != usize::MAX {
            continue;
        }
        let mut stack = vec![f0];
        comp[f0] = ncomp;
        while let Some(f) = stack.pop() {
            for &h in s.face(f) {
                if !is_cut[h] {
                    let g = s.face_of(s.partner(h));
                    if comp[g] == usize::MAX {
                        comp[g] = ncomp;
                        stack.push(g);
                    }
                }
            }
        }
        ncomp += 1;
    }
    if ncomp != 3 {
        return None;
    }
    let minv = mat2_inverse(m);
    let mut tori = Vec::new();
    let mut fixed = None;
    for k in 0..3 {
        let faces: Vec<usize> = (0..nf).filter(|&f| comp[f] == k).collect();
        let hs: Vec<HalfEdge> = faces.iter().flat_map(|&f| s.face(f).iter().copied()).collect();
        let mut new_id = HashMap::new();
        for (i, &h) in hs.iter().enumerate() {
            new_id.insert(h, i);
        }
        let boundary: Vec<HalfEdge> = hs.iter().copied().filter(|&h| is_cut[h]).collect();
        let mut partner = vec![usize::MAX; hs.len()];
        for (i, &h) in hs.iter().enumerate() {
            if !is_cut[h] {
                partner[i] = new_id[&s.partner(h)];
            }
        }
        for &b in &boundary {
            if partner[new_id[&b]] != usize::MAX {
                continue;
            }
            let ends = |h: HalfEdge| {
                let mut e = [lab(h), lab(s.partner(h))];
                e.sort();
                e
            };
            let mate = boundary.iter().copied().find(|&c| {
                c != b && partner[new_id[&c]] == usize::MAX && *s.vec(c) == -s.vec(b) && ends(c) == ends(b)
            })?;
            partner[new_id[&b]] = new_id[&mate];
            partner[new_id[&mate]] = new_id[&b];
        }
        let vecs: Vec<Vec2> = hs.iter().map(|&h| s.vec(h).clone()).collect();
        let lbls: Vec<Option<String>> = hs.iter().map(|&h| lab(h)).collect();
        let pfaces: Vec<Vec<usize>> = faces.iter().map(|&f| s.face(f).iter().map(|h| new_id[h]).collect()).collect();
        let piece = TranslationSurface::assemble(d, vecs, partner, pfaces, lbls);
        if piece.genus() != 1 {
            return None;
        }
        let h1 = homology::h1_basis(&piece);
        let u = mat2_apply(&minv, &homology::holonomy(&piece, &h1.basis[0])).in_field(d);
        let v = mat2_apply(&minv, &homology::holonomy(&piece, &h1.basis[1])).in_field(d);
        tori.push(reduce_lattice(&u, &v));
        let f0 = faces[0];
        if comp[s.face_of(ps2.tau.apply(s.face(f0)[0]))] == k {
            fixed = Some(k);
        }
    }
    Some((tori, fixed?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prym::{build_prototype_surface, Kappa, Prototype};
    use crate::surface::{lattice_torus, rectangle_torus};

    fn primitive_count(u: &Vec2, v: &Vec2, l2: &QuadNum) -> usize {
        let mut n = 0;
        for a in -40i64..=40 {
            for b in -40i64..=40 {
                if num_integer::Integer::gcd(&a, &b) != 1 {
                    continue;
                }
                let w = &u.scale(&QuadNum::from_int(a)) + &v.scale(&QuadNum::from_int(b));
                if &w.norm2() <= l2 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn square_torus_count() {
        let t = rectangle_torus(QuadNum::one(), QuadNum::one());
        let l2 = QuadNum::frac(25, 4);
        let scs = saddle_connections_len2(&t, &l2);
        assert_eq!(scs.len(), primitive_count(&Vec2::ints(1, 0), &Vec2::ints(0, 1), &l2));
    }

    #[test]
    fn skew_torus_count() {
        let u = Vec2::ints(2, 0);
        let v = Vec2::new(QuadNum::frac(3, 5), QuadNum::frac(7, 4));
        let t = lattice_torus(1, &u, &v).unwrap();
        let l2 = QuadNum::from_int(40);
        assert_eq!(saddle_connections_len2(&t, &l2).len(), primitive_count(&u, &v, &l2));
    }

    #[test]
    fn directional_search_matches_full() {
        let ps = build_prototype_surface(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), None).unwrap();
        let l2 = QuadNum::from_int(9);
        let all = saddle_connections_len2(&ps.surface, &l2);
        let dir = Vec2::ints(1, 0);
        let horiz: Vec<_> = all.iter().filter(|sc| sc.holonomy.same_direction(&dir)).cloned().collect();
        let ray = connections_in_direction(&ps.surface, &dir, &l2);
        assert_eq!(horiz.len(), ray.len());
        for (a, b) in horiz.iter().zip(&ray) {
            assert!(a.same_as(b));
            assert_eq!(a.end_germ, b.end_germ);
        }
    }

    #[test]
    fn slits_and_tau_equivariance() {
        let ps = build_prototype_surface(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), Some(&QuadNum::frac(1, 2)))
            .unwrap();
        let all = saddle_connections_len2(&ps.surface, &QuadNum::frac(1, 4));
        let slits: Vec<_> = all
            .iter()
            .filter(|sc| sc.start.as_deref() == Some("P") && sc.holonomy == Vec2::new(QuadNum::frac(1, 2), QuadNum::zero()))
            .collect();
        assert_eq!(slits.len(), 3);
        let all = saddle_connections_len2(&ps.surface, &QuadNum::from_int(5));
        for sc in &all {
            let (g, hol) = anti_image(sc, &ps.tau);
            assert!(all.iter().any(|x| x.start_germ == g && x.holonomy == hol));
            let rev = sc.reversed();
            assert!(all.iter().any(|x| x.same_as(&rev) && x.end_germ == sc.start_germ));
        }
    }

    #[test]
    fn twins_of_slit() {
        let ps = build_prototype_surface(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), Some(&QuadNum::frac(1, 2)))
            .unwrap();
        let sigma0 = designated_connections(&ps, &QuadNum::frac(1, 4)).into_iter().next().unwrap();
        assert_eq!(twins(&ps, &sigma0).unwrap().twins.len(), 2);
        let adm = is_admissible(&ps, &sigma0).unwrap();
        assert!(!adm.admissible);
        assert_eq!(adm.certificate.unwrap().holonomy, sigma0.holonomy);
    }

    #[test]
    fn horizontal_cylinders() {
        let cases = [((1, 1, 1), vec![(2, 2), (1, 1), (1, 1)]), ((1, 1, -1), vec![(1, 1), (1, 1), (1, 1)])];
        for ((w, h, e), expect) in cases {
            let ps = build_prototype_surface(&Prototype::new(Kappa::TwoTwo, w, h, e).unwrap(), None).unwrap();
            let cyl = cylinder_decomposition(&ps.surface, &Vec2::ints(1, 0)).unwrap();
            let got: Vec<(QuadNum, QuadNum)> = cyl.iter().map(|c| (c.width.clone(), c.height.clone())).collect();
            let want: Vec<(QuadNum, QuadNum)> =
                expect.iter().map(|&(a, b)| (QuadNum::from_int(a), QuadNum::from_int(b))).collect();
            assert_eq!(got, want);
            let total = cyl.iter().fold(QuadNum::zero(), |acc, c| &acc + &(&c.width * &c.height));
            assert_eq!(total, ps.surface.area());
        }
    }

    #[test]
    fn irrational_direction_on_torus() {
        let dir = Vec2::new(QuadNum::one(), QuadNum::sqrt_disc(8));
        let t8 = lattice_torus(8, &Vec2::ints(1, 0), &Vec2::ints(0, 1)).unwrap();
        assert_eq!(cylinder_decomposition(&t8, &dir).unwrap_err(), Error::NotPeriodicWithinBudget);
    }

    #[test]
    fn three_tori_of_prototypes() {
        for (kappa, w, h, e) in [(Kappa::TwoTwo, 1, 1, 1), (Kappa::TwoTwo, 1, 2, 1), (Kappa::OneOneTwo, 2, 1, 1)] {
            let p = Prototype::new(kappa, w, h, e).unwrap();
            let ps = build_prototype_surface(&p, None).unwrap();
            let dec = three_tori_decomposition(&ps, None).expect("decomposition");
            let l = p.lambda().in_field(p.discriminant() as u64);
            let square = [Vec2::new(l.clone(), QuadNum::zero()), Vec2::new(QuadNum::zero(), l)];
            let rect = [Vec2::ints(w, 0), Vec2::ints(0, h)];
            assert!(same_lattice(&dec.tori[dec.fixed_torus_index], &square), "{p}: {:?}", dec.tori);
            let others: Vec<_> = (0..3).filter(|&i| i != dec.fixed_torus_index).collect();
            for i in others {
                assert!(same_lattice(&dec.tori[i], &rect), "{p}: {:?}", dec.tori);
            }
        }
    }
}
