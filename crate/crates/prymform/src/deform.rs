//! Kernel (rel) deformations, collapsing zeros along a saddle connection and
//! the inverse surgery breaking a zero of order 4 into two or three zeros.
//!
//! A rel move translates the zeros relative to each other while keeping all
//! absolute periods. It is executed on a triangulation: every edge between
//! two zeros changes by the difference of their displacements, and the
//! triangulation is kept Delaunay between sub-steps. Because all
//! displacements are parallel, triangle areas change linearly, so the
//! largest safe sub-step is exact. A sub-step never exceeds half the time
//! at which some triangle would degenerate; a pair of zeros that would meet
//! is detected exactly on the edge joining them.
//!
//! Displacement conventions (`v` is the move vector):
//! * `H(2,2)`: `P` moves by `−v/2`, `Q` by `+v/2`, so every `P → Q`
//!   connection changes by `+v`.
//! * `H(1,1,2)`: `R1` moves by `−v`, `R2` by `+v`, `Q` stays, so `R1 → Q`
//!   changes by `+v` and `R1 → R2` by `+2v`.
//!
//! Integer chains on the surface are transported through every step, which
//! lets the Prym involution and the lattice basis be matched afterwards.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geodesics::{connections_in_direction, designated_connections, is_admissible, SaddleConnection};
use crate::prym::{check_prym_structure, Kappa, PrymSurface};
use crate::qfield::{QuadNum, Vec2};
use crate::surface::{Chain, HalfEdge, TranslationSurface};

const MAX_SUBSTEPS: usize = 500;

/// A displacement plan: zero name to translation vector.
#[derive(Clone, Debug, PartialEq)]
pub struct RelMove {
    pub v: Vec2,
    pub plan: BTreeMap<String, Vec2>,
}

impl RelMove {
    /// The plan for a surface whose zeros carry the standard names.
    pub fn for_surface(s: &TranslationSurface, v: &Vec2) -> Result<Self> {
        let v = v.in_field(s.disc());
        let half = QuadNum::frac(1, 2);
        let plan: BTreeMap<String, Vec2> = match s.stratum_orders().as_slice() {
            [2, 2] => [("P".to_string(), -&v.scale(&half)), ("Q".to_string(), v.scale(&half))].into(),
            [2, 1, 1] => [("R1".to_string(), -&v), ("R2".to_string(), v.clone()), ("Q".to_string(), Vec2::zero())].into(),
            other => return Err(Error::Usage(format!("rel moves need stratum (2,2) or (1,1,2), got {other:?}"))),
        };
        for name in plan.keys() {
            if s.corner_with_label(name).is_none() {
                return Err(Error::Malformed(format!("zero {name} is not named on the surface")));
            }
        }
        Ok(RelMove { v, plan })
    }

    fn displacement(&self, label: Option<&str>) -> Vec2 {
        label.and_then(|l| self.plan.get(l)).cloned().unwrap_or_else(Vec2::zero)
    }

    fn check_parallel(&self) -> Result<()> {
        let ds: Vec<&Vec2> = self.plan.values().filter(|d| !d.is_zero()).collect();
        if ds.windows(2).any(|w| !w[0].cross(w[1]).is_zero()) {
            return Err(Error::Usage("displacements of a rel move must be parallel".into()));
        }
        Ok(())
    }
}

/// How the flow treats edges shrinking to zero length exactly at the end.
#[derive(Clone, Copy, PartialEq, Eq)]
enum FlowMode {
    /// Any meeting of zeros is an error.
    Move,
    /// Edges reaching zero at the end are the intended outcome; any other
    /// meeting is a parallel obstruction.
    Collapse,
}

/// Displaces the named vertices of a triangulation along straight lines,
/// flipping to stay Delaunay. `skip_first_delaunay` keeps the initial
/// triangulation for the first sub-step (used when it contains degenerate
/// triangles that the move opens up).
fn flow(
    t: &mut TranslationSurface,
    chains: &mut [Chain],
    mv: &RelMove,
    mode: FlowMode,
    skip_first_delaunay: bool,
) -> Result<()> {
    mv.check_parallel()?;
    let n = t.num_half_edges();
    let disc = t.disc();
    let mut remaining = QuadNum::one();
    let collision = |msg: String| match mode {
        FlowMode::Move => Error::CollisionDuringMove(msg),
        FlowMode::Collapse => Error::ParallelObstruction(msg),
    };
    for step in 0..MAX_SUBSTEPS {
        if step > 0 || !skip_first_delaunay {
            t.make_delaunay(chains);
        }
        // Remaining change of every half-edge vector.
        let delta: Vec<Vec2> = (0..n)
            .map(|h| {
                let d = &mv.displacement(t.label(t.partner(h))) - &mv.displacement(t.label(h));
                d.scale(&remaining).in_field(disc)
            })
            .collect();
        let terminal: Vec<bool> = (0..n)
            .map(|h| mode == FlowMode::Collapse && !delta[h].is_zero() && (t.vec(h) + &delta[h]).is_zero())
            .collect();
        for h in 0..n {
            let (v, d) = (t.vec(h), &delta[h]);
            if terminal[h] || d.is_zero() || h > t.partner(h) {
                continue;
            }
            if v.cross(d).is_zero() && v.dot(d).sign() < 0 && v.norm2() <= d.norm2() {
                let names = (t.label(h).unwrap_or("?"), t.label(t.partner(h)).unwrap_or("?"));
                return Err(collision(format!("{} meets {} along {:?}", names.0, names.1, v)));
            }
        }
        // Earliest degeneration time, as a fraction of the remaining move.
        let mut tmax: Option<QuadNum> = None;
        for f in 0..t.num_faces() {
            let face = t.face(f);
            if face.iter().any(|&h| terminal[h]) {
                continue;
            }
            let (h1, h2) = (face[0], face[1]);
            let (v1, v2) = (t.vec(h1), t.vec(h2));
            let (d1, d2) = (&delta[h1], &delta[h2]);
            let a0 = v1.cross(v2);
            let a1 = &d1.cross(v2) + &v1.cross(d2);
            if a1.sign() >= 0 {
                continue;
            }
            let s = -&(&a0 / &a1);
            if s.sign() <= 0 {
                return Err(collision(format!("triangle {f} is degenerate")));
            }
            if tmax.as_ref().is_none_or(|m| &s < m) {
                tmax = Some(s);
            }
        }
        let fraction = match tmax {
            Some(m) if m <= QuadNum::one() => {
                let mut f = QuadNum::frac(1, 2);
                let half_m = &m * &QuadNum::frac(1, 2);
                while f > half_m {
                    f = &f * &QuadNum::frac(1, 2);
                }
                f
            }
            _ => QuadNum::one(),
        };
        for h in 0..n {
            let nv = (t.vec(h) + &delta[h].scale(&fraction)).in_field(disc);
            t.vecs[h] = nv;
        }
        if fraction == QuadNum::one() {
            return Ok(());
        }
        remaining = &remaining * &(&QuadNum::one() - &fraction);
    }
    Err(collision(format!("no progress after {MAX_SUBSTEPS} sub-steps")))
}

/// Triangulates, flows and returns the Delaunay cells with chains carried
/// along.
fn rel_cells(s: &TranslationSurface, chains: &mut [Chain], mv: &RelMove) -> Result<TranslationSurface> {
    let mut t = s.triangulate_tracked(chains);
    flow(&mut t, chains, mv, FlowMode::Move, false)?;
    t.make_delaunay(chains);
    Ok(t.merge_cocircular(chains))
}

/// Rel move of a surface without involution data.
pub fn rel_move_surface(s: &TranslationSurface, v: &Vec2) -> Result<TranslationSurface> {
    let mv = RelMove::for_surface(s, v)?;
    rel_cells(s, &mut [], &mv)
}

/// Rel move of a Prym eigenform; the involution and the lattice basis are
/// transported.
pub fn rel_move(ps: &PrymSurface, v: &Vec2) -> Result<PrymSurface> {
    let mv = RelMove::for_surface(&ps.surface, v)?;
    let mut chains = ps.tracked_chains();
    let cells = rel_cells(&ps.surface, &mut chains, &mv)?;
    ps.from_tracked(cells, &chains)
}

/// The plan moving the endpoints of `σ0` together, and the number of
/// oriented connections expected to vanish with it (σ0, and for
/// `H(1,1,2)` its image under the involution, with reverses).
fn collapse_plan(s: &TranslationSurface, sigma0: &SaddleConnection) -> Result<(RelMove, usize)> {
    let ends = (sigma0.start.as_deref(), sigma0.end.as_deref());
    let expected = match (s.stratum_orders().as_slice(), ends) {
        ([2, 2], (Some("P"), Some("Q"))) => 2,
        ([2, 1, 1], (Some("R1"), Some("Q"))) => 4,
        (o, e) => {
            return Err(Error::WrongEndpoints(format!("cannot collapse {:?} → {:?} in stratum {o:?}", e.0, e.1)));
        }
    };
    Ok((RelMove::for_surface(s, &-&sigma0.holonomy)?, expected))
}

/// Exact check that no connection parallel to `σ0` other than the intended
/// ones shrinks to zero during the collapse. Only connections of length at
/// most `2|σ0|` can.
fn check_parallel_obstruction(s: &TranslationSurface, mv: &RelMove, sigma0: &SaddleConnection, expected: usize) -> Result<()> {
    let h0 = &sigma0.holonomy;
    let bound = &h0.norm2() * &QuadNum::from_int(4);
    let mut terminal = 0;
    for dir in [h0.clone(), -h0] {
        for sc in connections_in_direction(s, &dir, &bound) {
            let change = &mv.displacement(sc.end.as_deref()) - &mv.displacement(sc.start.as_deref());
            if change.is_zero() || !(&sc.holonomy + &change).cross(&sc.holonomy).is_zero() {
                continue;
            }
            let end = &sc.holonomy + &change;
            if end.is_zero() {
                terminal += 1;
            } else if end.dot(&sc.holonomy).sign() < 0 {
                return Err(Error::ParallelObstruction(format!(
                    "{:?} → {:?} with holonomy {:?} collapses first",
                    sc.start, sc.end, sc.holonomy
                )));
            }
        }
    }
    if terminal != expected {
        return Err(Error::ParallelObstruction(format!(
            "{} parallel connections of the collapsing length, expected {expected}",
            terminal / 2
        )));
    }
    Ok(())
}

/// Collapses `σ0` on a surface without involution data. The merged zero is
/// named `Z`.
pub fn collapse_surface(s: &TranslationSurface, sigma0: &SaddleConnection) -> Result<TranslationSurface> {
    collapse_cells(s, sigma0, &mut [])
}

fn collapse_cells(s: &TranslationSurface, sigma0: &SaddleConnection, chains: &mut [Chain]) -> Result<TranslationSurface> {
    let (mv, expected) = collapse_plan(s, sigma0)?;
    check_parallel_obstruction(s, &mv, sigma0, expected)?;
    let mut t = s.triangulate_tracked(chains);
    flow(&mut t, chains, &mv, FlowMode::Collapse, false)?;
    let mut c = contract_zero_edges(&t, chains, "Z")?;
    c.make_delaunay(chains);
    let cells = c.merge_cocircular(chains);
    if cells.stratum_orders() != [4] {
        return Err(Error::Malformed(format!("collapse produced stratum {:?}", cells.stratum_orders())));
    }
    Ok(cells)
}

/// Collapses the zeros of a Prym eigenform along an admissible `σ0`,
/// landing in `H(4)`; the involution is transported.
pub fn collapse(ps: &PrymSurface, sigma0: &SaddleConnection) -> Result<PrymSurface> {
    let adm = is_admissible(ps, sigma0)?;
    if !adm.admissible {
        let c = adm.certificate.expect("a non-admissible verdict carries a certificate");
        return Err(Error::NotAdmissible(format!("{:?} → {:?} with holonomy {:?}", c.start, c.end, c.holonomy)));
    }
    let mut chains = ps.tracked_chains();
    let cells = collapse_cells(&ps.surface, sigma0, &mut chains)?;
    ps.from_tracked(cells, &chains)
}

/// Removes the degenerate triangles around zero-length edges, merging the
/// endpoints of every such edge into one vertex named `merged`.
fn contract_zero_edges(t: &TranslationSurface, chains: &mut [Chain], merged: &str) -> Result<TranslationSurface> {
    let n = t.num_half_edges();
    let zero: Vec<bool> = (0..n).map(|h| t.vec(h).is_zero()).collect();
    let mut removed = vec![false; n];
    let mut mate = vec![usize::MAX; n];
    let mut dead_face = vec![false; t.num_faces()];
    for (f, dead) in dead_face.iter_mut().enumerate() {
        let face = t.face(f);
        let zs: Vec<HalfEdge> = face.iter().copied().filter(|&h| zero[h]).collect();
        match zs.len() {
            0 => continue,
            1 => {}
            _ => return Err(Error::Malformed("triangle with two vanishing sides".into())),
        }
        *dead = true;
        let b = zs[0];
        let (c1, d1) = (t.next(b), t.prev(b));
        mate[c1] = d1;
        mate[d1] = c1;
        for &h in face {
            removed[h] = true;
        }
    }
    // Surviving half-edge carrying the segment of `x`.
    let target = |x: HalfEdge| -> Option<HalfEdge> {
        let mut y = x;
        for _ in 0..=n {
            if !removed[y] {
                return Some(y);
            }
            if zero[y] {
                return None;
            }
            y = t.partner(mate[y]);
        }
        None
    };
    let keep: Vec<HalfEdge> = (0..n).filter(|&h| !removed[h]).collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &h) in keep.iter().enumerate() {
        new_id[h] = i;
    }
    let mut partner = Vec::with_capacity(keep.len());
    for &h in &keep {
        let p = target(t.partner(h)).ok_or_else(|| Error::Malformed("contraction folds an edge onto itself".into()))?;
        partner.push(new_id[p]);
    }
    for c in chains.iter_mut() {
        let mut nc = vec![0i64; keep.len()];
        for x in 0..n {
            if c[x] == 0 {
                continue;
            }
            if let Some(y) = target(x) {
                nc[new_id[y]] += c[x];
            }
        }
        *c = nc;
    }
    let vecs: Vec<Vec2> = keep.iter().map(|&h| t.vec(h).clone()).collect();
    let faces: Vec<Vec<HalfEdge>> = (0..t.num_faces())
        .filter(|&f| !dead_face[f])
        .map(|f| t.face(f).iter().map(|&h| new_id[h]).collect())
        .collect();
    let labels: Vec<Option<String>> = keep.iter().map(|&h| t.label(h).map(str::to_string)).collect();
    let mut s = TranslationSurface::assemble(t.disc(), vecs, partner, faces, labels);
    let (vid, nv) = s.vertex_ids();
    let mut names: Vec<Vec<String>> = vec![Vec::new(); nv];
    for h in 0..s.num_half_edges() {
        if let Some(l) = s.label(h) {
            if !names[vid[h]].iter().any(|x| x == l) {
                names[vid[h]].push(l.to_string());
            }
        }
    }
    s.labels = vid
        .iter()
        .map(|&v| match names[v].len() {
            0 => None,
            1 => Some(names[v][0].clone()),
            _ => Some(merged.to_string()),
        })
        .collect();
    Ok(s)
}

/// Splits the vertex of `hx` into `a` (the corners from `hx` counterclockwise
/// through `k` passes of direction `v`) and `b`, joined by a zero-length
/// edge `a → b` inside two degenerate triangles opened along the edges of
/// `hx` and of the first half-edge after the arc. Returns `None` when this
/// choice of `hx` does not give a valid arc.
fn split_vertex(
    t: &TranslationSurface,
    chains: &mut [Chain],
    hx: HalfEdge,
    k: usize,
    a: &str,
    b: &str,
    v: &Vec2,
) -> Option<TranslationSurface> {
    if t.vec(hx).cross(v).sign() >= 0 {
        return None;
    }
    let star = t.star(hx);
    let m = star.len();
    let mut passes = 0;
    let mut cut = None;
    for i in 0..m {
        let h = star[i];
        if passes == k && i > 0 && v.cross(t.vec(h)).sign() < 0 {
            cut = Some(i);
            break;
        }
        let nx = star[(i + 1) % m];
        let (u, w) = (t.vec(h), t.vec(nx));
        if u.cross(v).sign() > 0 && v.cross(w).sign() >= 0 && !(v.cross(w).is_zero() && v.dot(w).sign() < 0) {
            passes += 1;
        }
    }
    let j = cut?;
    let hy = star[j];
    let (hxp, hyp) = (t.partner(hx), t.partner(hy));
    if hy == hxp {
        return None;
    }
    let n = t.num_half_edges();
    let mut labels: Vec<Option<String>> = (0..n).map(|h| t.label(h).map(str::to_string)).collect();
    for (i, &h) in star.iter().enumerate() {
        labels[h] = Some(if i < j { a } else { b }.to_string());
    }
    let (z1, q1, r1, z2, p2, y2) = (n, n + 1, n + 2, n + 3, n + 4, n + 5);
    let mut vecs: Vec<Vec2> = (0..n).map(|h| t.vec(h).clone()).collect();
    vecs.extend([
        Vec2::zero(),
        t.vec(hx).clone(),
        -t.vec(hx),
        Vec2::zero(),
        t.vec(hy).clone(),
        -t.vec(hy),
    ]);
    let mut partner: Vec<HalfEdge> = (0..n).map(|h| t.partner(h)).collect();
    partner.extend([z2, hxp, hx, z1, hyp, hy]);
    partner[hx] = r1;
    partner[hxp] = q1;
    partner[hy] = y2;
    partner[hyp] = p2;
    let lab_r1 = labels[hxp].clone();
    let lab_y2 = labels[hyp].clone();
    labels.extend([Some(a.to_string()), Some(b.to_string()), lab_r1, Some(b.to_string()), Some(a.to_string()), lab_y2]);
    let mut faces: Vec<Vec<HalfEdge>> = (0..t.num_faces()).map(|f| t.face(f).to_vec()).collect();
    faces.push(vec![z1, q1, r1]);
    faces.push(vec![z2, p2, y2]);
    let s = TranslationSurface::assemble(t.disc(), vecs, partner, faces, labels);
    // Close the chains again through the new edge.
    for c in chains.iter_mut() {
        c.resize(n + 6, 0);
        let mut at_a = 0i64;
        for h in 0..n + 6 {
            if s.label(s.partner(h)) == Some(a) {
                at_a += c[h];
            }
            if s.label(h) == Some(a) {
                at_a -= c[h];
            }
        }
        c[z1] += at_a;
    }
    Some(s)
}

/// Candidate starting half-edges at the vertex named `name`.
fn star_of(t: &TranslationSurface, name: &str) -> Vec<HalfEdge> {
    t.corner_with_label(name).map(|h| t.star(h)).unwrap_or_default()
}

/// Renames the unique zero of a surface in `H(4)` to `name`.
fn name_zero(s: &TranslationSurface, name: &str) -> Result<TranslationSurface> {
    if s.stratum_orders() != [4] {
        return Err(Error::Usage(format!("breaking up needs a surface in H(4), got {:?}", s.stratum_orders())));
    }
    let orders = s.vertex_orders();
    let (vid, _) = s.vertex_ids();
    let mut out = s.clone();
    for h in 0..s.num_half_edges() {
        if orders[vid[h]] == 4 {
            out.labels[h] = Some(name.to_string());
        } else if out.labels[h].as_deref() == Some(name) {
            out.labels[h] = None;
        }
    }
    Ok(out)
}

/// One split followed by the opening move; tries every starting edge and
/// keeps the first result accepted by `accept`.
fn split_and_move(
    t: &TranslationSurface,
    chains: &[Chain],
    zero: &str,
    k: usize,
    names: (&str, &str),
    mv: &RelMove,
    accept: &mut dyn FnMut(&TranslationSurface, &[Chain]) -> bool,
) -> Result<Option<(TranslationSurface, Vec<Chain>)>> {
    let mut last_err = None;
    for hx in star_of(t, zero) {
        let mut ch = chains.to_vec();
        let Some(mut s) = split_vertex(t, &mut ch, hx, k, names.0, names.1, &mv.v) else { continue };
        match flow(&mut s, &mut ch, mv, FlowMode::Move, true) {
            Ok(()) => {
                s.make_delaunay(&mut ch);
                if accept(&s, &ch) {
                    return Ok(Some((s, ch)));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match last_err {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

fn break_up_cells(
    s4: &TranslationSurface,
    v: &Vec2,
    split: Kappa,
    chains: &[Chain],
    accept: &mut dyn FnMut(&TranslationSurface, &[Chain]) -> bool,
) -> Result<(TranslationSurface, Vec<Chain>)> {
    let v = v.in_field(s4.disc());
    if v.is_zero() {
        return Err(Error::Usage("displacement must be nonzero".into()));
    }
    let named = name_zero(s4, "W")?;
    let mut ch = chains.to_vec();
    let mut t = named.triangulate_tracked(&mut ch);
    t.make_delaunay(&mut ch);
    let shortest = (0..t.num_half_edges()).map(|h| t.vec(h).norm2()).min().expect("nonempty surface");
    if &v.norm2() * &QuadNum::from_int(4) >= shortest {
        return Err(Error::VectorTooLarge(format!(
            "|v|² = {} must be below a quarter of the shortest connection length² {}",
            v.norm2().to_plain(),
            shortest.to_plain()
        )));
    }
    let half = QuadNum::frac(1, 2);
    let failed = || Error::CollisionDuringMove("no splitting of the zero gives the requested stratum".into());
    match split {
        Kappa::TwoTwo => {
            let mv = RelMove { v: v.clone(), plan: [("P".into(), -&v.scale(&half)), ("Q".into(), v.scale(&half))].into() };
            split_and_move(&t, &ch, "W", 2, ("P", "Q"), &mv, accept)?.ok_or_else(failed)
        }
        Kappa::OneOneTwo => {
            let first = RelMove { v: v.clone(), plan: [("R1".into(), -&v)].into() };
            let second = RelMove { v: v.clone(), plan: [("R2".into(), v.clone())].into() };
            let mut found = None;
            let mut outer = |s1: &TranslationSurface, ch1: &[Chain]| -> bool {
                if s1.stratum_orders() != [3, 1] {
                    return false;
                }
                let mut inner = |s2: &TranslationSurface, ch2: &[Chain]| -> bool {
                    let joined = (0..s2.num_half_edges()).any(|h| {
                        s2.label(h) == Some("R1") && s2.label(s2.partner(h)) == Some("Q") && *s2.vec(h) == v
                    });
                    joined && accept(s2, ch2)
                };
                match split_and_move(s1, ch1, "W", 2, ("Q", "R2"), &second, &mut inner) {
                    Ok(Some(r)) => {
                        found = Some(r);
                        true
                    }
                    _ => false,
                }
            };
            split_and_move(&t, &ch, "W", 1, ("R1", "W"), &first, &mut outer)?;
            found.ok_or_else(failed)
        }
    }
}

/// Breaks the zero of a surface in `H(4)` into `P, Q` (split `(2,2)`) or
/// `R1, Q, R2` (split `(1,1,2)`), creating a connection `P → Q`
/// (resp. `R1 → Q` and `Q → R2`) of holonomy `v`.
pub fn break_up_zero_surface(s4: &TranslationSurface, v: &Vec2, split: Kappa) -> Result<TranslationSurface> {
    let want = split.orders();
    let mut accept = |s: &TranslationSurface, _: &[Chain]| s.stratum_orders() == want;
    let (t, mut ch) = break_up_cells(s4, v, split, &[], &mut accept)?;
    Ok(t.merge_cocircular(&mut ch))
}

/// Breaks up the zero of a Prym eigenform in `H(4)`, choosing the split
/// for which the involution persists with the standard action on zeros.
pub fn break_up_zero(ps: &PrymSurface, v: &Vec2, split: Kappa) -> Result<PrymSurface> {
    let want = split.orders();
    let mut result: Option<PrymSurface> = None;
    let mut accept = |s: &TranslationSurface, ch: &[Chain]| -> bool {
        if s.stratum_orders() != want {
            return false;
        }
        let mut ch = ch.to_vec();
        let cells = s.merge_cocircular(&mut ch);
        match ps.from_tracked(cells, &ch) {
            Ok(p) if check_prym_structure(&p, Some(split)).is_ok() => {
                result = Some(p);
                true
            }
            _ => false,
        }
    };
    break_up_cells(&ps.surface, v, split, &ps.tracked_chains(), &mut accept)?;
    result.ok_or_else(|| Error::NoInvolution("no τ-symmetric splitting found".into()))
}

/// Holonomies of the edges between two named vertices, for bookkeeping
/// checks.
pub fn edge_holonomies(s: &TranslationSurface, from: &str, to: &str) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = (0..s.num_half_edges())
        .filter(|&h| s.label(h) == Some(from) && s.label(s.partner(h)) == Some(to))
        .map(|h| s.vec(h).clone())
        .collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

/// An admissible designated connection found after a rel move.
#[derive(Clone, Debug)]
pub struct AdmissibleFind {
    pub v: Vec2,
    pub surface: PrymSurface,
    pub sigma0: SaddleConnection,
}

/// Bounded random search over small rel moves `v = (a, b)/den` with
/// `|a|, |b| ≤ 4` for a surface carrying an admissible designated
/// connection of squared length at most the surface area. Deterministic for
/// a given seed.
pub fn search_admissible(ps: &PrymSurface, seed: u64, tries: usize, den: i64) -> Option<AdmissibleFind> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bound = ps.surface.area();
    for _ in 0..tries {
        let (a, b) = (rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4));
        if a == 0 && b == 0 {
            continue;
        }
        let v = Vec2::new(QuadNum::frac(a, den), QuadNum::frac(b, den));
        let Ok(moved) = rel_move(ps, &v) else { continue };
        for sc in designated_connections(&moved, &bound) {
            if matches!(is_admissible(&moved, &sc), Ok(adm) if adm.admissible) {
                return Some(AdmissibleFind { v, surface: moved, sigma0: sc });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{saddle_connections_len2, twins};
    use crate::prym::{build_prototype_surface, Prototype};
    use crate::surface::origami;

    fn s111() -> PrymSurface {
        build_prototype_surface(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), None).unwrap()
    }

    #[test]
    fn rel_preserves_periods_and_tau() {
        let ps = s111();
        let v = Vec2::new(QuadNum::frac(1, 10), QuadNum::frac(1, 7));
        let moved = rel_move(&ps, &v).unwrap();
        assert_eq!(moved.periods(), ps.periods());
        assert_eq!(moved.tau_fixed_points(), 4);
        check_prym_structure(&moved, Some(Kappa::TwoTwo)).unwrap();
        let back = rel_move(&moved, &-&v).unwrap();
        assert_eq!(back.surface.canonical_code(true), ps.surface.canonical_code(true));
    }

    #[test]
    fn rel_shifts_p_to_q_connections() {
        let ps = s111();
        let v = Vec2::new(QuadNum::zero(), QuadNum::frac(1, 10));
        let moved = rel_move(&ps, &v).unwrap();
        let l2 = QuadNum::from_int(2);
        let before: Vec<Vec2> = designated_connections(&ps, &l2).iter().map(|s| s.holonomy.clone()).collect();
        let after: Vec<Vec2> =
            designated_connections(&moved, &QuadNum::from_int(3)).iter().map(|s| s.holonomy.clone()).collect();
        for h in before {
            assert!(after.contains(&(&h + &v)), "{h:?} + v missing");
        }
    }

    #[test]
    fn one_one_two_rel_bookkeeping() {
        let ps = build_prototype_surface(&Prototype::new(Kappa::OneOneTwo, 2, 1, 1).unwrap(), None).unwrap();
        let v = Vec2::new(QuadNum::frac(1, 20), QuadNum::frac(1, 30));
        let moved = rel_move(&ps, &v).unwrap();
        assert_eq!(moved.periods(), ps.periods());
        check_prym_structure(&moved, Some(Kappa::OneOneTwo)).unwrap();
        let l2 = QuadNum::from_int(2);
        let before = saddle_connections_len2(&ps.surface, &l2);
        let after = saddle_connections_len2(&moved.surface, &QuadNum::from_int(4));
        let two_v = v.scale(&QuadNum::from_int(2));
        for sc in before {
            let shift = match (sc.start.as_deref(), sc.end.as_deref()) {
                (Some("R1"), Some("Q")) => v.clone(),
                (Some("R1"), Some("R2")) => two_v.clone(),
                _ => continue,
            };
            let want = &sc.holonomy + &shift;
            assert!(after.iter().any(|x| x.start == sc.start && x.end == sc.end && x.holonomy == want));
        }
    }

    #[test]
    fn large_move_collides() {
        let ps = build_prototype_surface(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), Some(&QuadNum::frac(1, 2)))
            .unwrap();
        let err = rel_move(&ps, &Vec2::new(QuadNum::frac(-1, 2), QuadNum::zero())).unwrap_err();
        assert!(matches!(err, Error::CollisionDuringMove(_)), "{err:?}");
    }

    #[test]
    fn slit_is_not_collapsible() {
        let ps = s111();
        let sigma0 = designated_connections(&ps, &QuadNum::frac(1, 1)).into_iter().next().unwrap();
        assert_eq!(twins(&ps, &sigma0).unwrap().twins.len(), 2);
        assert!(matches!(collapse(&ps, &sigma0).unwrap_err(), Error::NotAdmissible(_)));
    }

    fn h4_origami() -> TranslationSurface {
        // Five squares in a row with the top edges permuted: one zero of order 4.
        origami(&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]).unwrap()
    }

    #[test]
    fn origami_fixture_is_h4() {
        assert_eq!(h4_origami().stratum_orders(), vec![4]);
    }

    #[test]
    fn break_up_and_collapse_round_trip() {
        let s4 = h4_origami();
        let code = s4.delaunay_cells().canonical_code(false);
        for split in Kappa::ALL {
            let v = Vec2::new(QuadNum::frac(1, 10), QuadNum::frac(1, 23));
            let s = break_up_zero_surface(&s4, &v, split).unwrap();
            assert_eq!(s.stratum_orders(), split.orders());
            assert_eq!(s.area(), s4.area());
            let (from, to) = match split {
                Kappa::TwoTwo => ("P", "Q"),
                Kappa::OneOneTwo => ("R1", "Q"),
            };
            let sigma0 = saddle_connections_len2(&s, &v.norm2())
                .into_iter()
                .find(|sc| sc.start.as_deref() == Some(from) && sc.end.as_deref() == Some(to))
                .expect("created connection");
            assert_eq!(sigma0.holonomy, v);
            let back = collapse_surface(&s, &sigma0).unwrap();
            assert_eq!(back.canonical_code(false), code);
        }
    }

    #[test]
    fn too_large_vector() {
        let err = break_up_zero_surface(&h4_origami(), &Vec2::new(QuadNum::frac(1, 2), QuadNum::zero()), Kappa::TwoTwo)
            .unwrap_err();
        assert!(matches!(err, Error::VectorTooLarge(_)));
    }

    #[test]
    fn admissible_connection_collapses_with_rm() {
        let p = Prototype::new(Kappa::TwoTwo, 1, 1, 0).unwrap();
        let ps = build_prototype_surface(&p, None).unwrap();
        let found = search_admissible(&ps, 0, 40, 20).expect("admissible connection");
        let c = collapse(&found.surface, &found.sigma0).unwrap();
        assert_eq!(c.surface.stratum_orders(), vec![4]);
        assert_eq!(c.periods(), ps.periods());
        crate::prym::verify_real_multiplication(&c, &crate::prym::rm_generator(&p), 8).unwrap();
    }
}
