//! Canonical codes, isomorphisms and (anti-)automorphisms of translation
//! surfaces.
//!
//! All of these work on the Delaunay decomposition, which depends only on the
//! flat metric. A code is produced by a breadth-first numbering of half-edges
//! from a starting half-edge; the canonical code is the lexicographically
//! smallest one over all starting half-edges. Two surfaces are translation
//! isomorphic exactly when their canonical codes agree.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde_json::json;

use super::{Chain, HalfEdge, TranslationSurface};
use crate::qfield::Vec2;

/// A bijection between the half-edges of two cell decompositions that
/// commutes with `next` and `partner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagMap {
    pub map: Vec<HalfEdge>,
}

impl FlagMap {
    pub fn identity(n: usize) -> Self {
        FlagMap { map: (0..n).collect() }
    }

    pub fn apply(&self, h: HalfEdge) -> HalfEdge {
        self.map[h]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &FlagMap) -> FlagMap {
        FlagMap { map: other.map.iter().map(|&h| self.map[h]).collect() }
    }

    pub fn inverse(&self) -> FlagMap {
        let mut inv = vec![0; self.map.len()];
        for (h, &m) in self.map.iter().enumerate() {
            inv[m] = h;
        }
        FlagMap { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(h, &m)| h == m)
    }

    /// Smallest `k ≥ 1` with `self^k = id`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Push-forward of a chain.
    pub fn push_chain(&self, c: &[i64]) -> Chain {
        let mut out = vec![0; c.len()];
        for (h, &v) in c.iter().enumerate() {
            out[self.map[h]] += v;
        }
        out
    }
}

/// Canonical code of a surface: the sorted table of distinct edge vectors,
/// the sorted table of zero names (empty when labels are ignored) and the
/// minimal breadth-first code sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalCode {
    pub table: Vec<Vec2>,
    pub names: Vec<String>,
    pub seq: Vec<u32>,
}

impl CanonicalCode {
    /// Deterministic byte serialization.
    pub fn to_bytes(&self) -> Vec<u8> {
        let table: Vec<_> = self.table.iter().map(super::vec2_json).collect();
        let v = json!({"table": table, "names": self.names, "seq": self.seq});
        serde_json::to_vec(&v).expect("serializable")
    }
}

fn vector_ranks(s: &TranslationSurface) -> (Vec<Vec2>, Vec<u32>) {
    let mut table: Vec<Vec2> = s.vecs.clone();
    table.sort_by(|a, b| a.lex_cmp(b));
    table.dedup();
    let rank = s
        .vecs
        .iter()
        .map(|v| table.binary_search_by(|t| t.lex_cmp(v)).expect("vector present") as u32)
        .collect();
    (table, rank)
}

fn name_ranks(s: &TranslationSurface, use_labels: bool) -> (Vec<String>, Vec<u32>) {
    if !use_labels {
        return (vec![], vec![0; s.vecs.len()]);
    }
    let mut names: Vec<String> = s.labels.iter().flatten().cloned().collect();
    names.sort();
    names.dedup();
    let rank = s
        .labels
        .iter()
        .map(|l| match l {
            None => 0,
            Some(n) => 1 + names.binary_search(n).expect("name present") as u32,
        })
        .collect();
    (names, rank)
}

/// Code sequence from a starting half-edge: for every half-edge in
/// breadth-first order, its vector rank, name rank, and the positions of its
/// `next` and `partner`.
fn code_from(s: &TranslationSurface, start: HalfEdge, vrank: &[u32], nrank: &[u32], best: Option<&[u32]>) -> Option<(Vec<u32>, Vec<usize>)> {
    let n = s.vecs.len();
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    pos[start] = 0;
    order.push(start);
    let mut seq = Vec::with_capacity(4 * n);
    let mut i = 0;
    let mut still_equal = best.is_some();
    while i < order.len() {
        let h = order[i];
        for nb in [s.next[h], s.partner[h]] {
            if pos[nb] == usize::MAX {
                pos[nb] = order.len();
                order.push(nb);
            }
        }
        let chunk = [vrank[h], nrank[h], pos[s.next[h]] as u32, pos[s.partner[h]] as u32];
        for x in chunk {
            if still_equal {
                let b = best.unwrap()[seq.len()];
                match x.cmp(&b) {
                    Ordering::Greater => return None,
                    Ordering::Less => still_equal = false,
                    Ordering::Equal => {}
                }
            }
            seq.push(x);
        }
        i += 1;
    }
    Some((seq, order))
}

/// Canonical code of a surface already in Delaunay cell form.
pub(crate) fn canonical_code_of_cells(cells: &TranslationSurface, use_labels: bool) -> CanonicalCode {
    let (table, vrank) = vector_ranks(cells);
    let (names, nrank) = name_ranks(cells, use_labels);
    let min_key = (0..cells.vecs.len()).map(|h| (vrank[h], nrank[h])).min().unwrap_or((0, 0));
    let mut best: Option<Vec<u32>> = None;
    for h in 0..cells.vecs.len() {
        if (vrank[h], nrank[h]) != min_key {
            continue;
        }
        if let Some((seq, _)) = code_from(cells, h, &vrank, &nrank, best.as_deref()) {
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
    }
    CanonicalCode { table, names, seq: best.unwrap_or_default() }
}

/// Tries to extend `a0 ↦ b0` to a flag map from `a` to `b` with
/// `vec_b(f(h)) = sign · vec_a(h)`.
fn try_match(
    a: &TranslationSurface,
    b: &TranslationSurface,
    b_vecs: &[Vec2],
    a0: HalfEdge,
    b0: HalfEdge,
    use_labels: bool,
) -> Option<FlagMap> {
    let n = a.vecs.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut queue = VecDeque::from([a0]);
    map[a0] = b0;
    used[b0] = true;
    while let Some(h) = queue.pop_front() {
        let m = map[h];
        if a.vecs[h] != b_vecs[m] || a.faces[a.face_of[h]].len() != b.faces[b.face_of[m]].len() {
            return None;
        }
        if use_labels && a.labels[h] != b.labels[m] {
            return None;
        }
        for (nh, nm) in [(a.next[h], b.next[m]), (a.partner[h], b.partner[m])] {
            if map[nh] == usize::MAX {
                if used[nm] {
                    return None;
                }
                map[nh] = nm;
                used[nm] = true;
                queue.push_back(nh);
            } else if map[nh] != nm {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    Some(FlagMap { map })
}

/// All flag maps `f` from `a` to `b` (both in cell form) with
/// `vec_b(f(h)) = sign · vec_a(h)`, sorted by the image of half-edge 0.
pub fn maps_between_cells(
    a: &TranslationSurface,
    b: &TranslationSurface,
    sign: i32,
    use_labels: bool,
    first_only: bool,
) -> Vec<FlagMap> {
    if a.vecs.len() != b.vecs.len() || a.faces.len() != b.faces.len() || a.vecs.is_empty() {
        return vec![];
    }
    let b_vecs: Vec<Vec2> = if sign > 0 { b.vecs.clone() } else { b.vecs.iter().map(|v| -v).collect() };
    let a0 = 0;
    let mut out = Vec::new();
    for b0 in 0..b.vecs.len() {
        if b_vecs[b0] != a.vecs[a0] {
            continue;
        }
        if let Some(m) = try_match(a, b, &b_vecs, a0, b0, use_labels) {
            out.push(m);
            if first_only {
                break;
            }
        }
    }
    out
}

impl TranslationSurface {
    /// Canonical code of the surface (label-sensitive when requested).
    pub fn canonical_code(&self, respect_labels: bool) -> CanonicalCode {
        canonical_code_of_cells(&self.delaunay_cells(), respect_labels)
    }

    /// A translation isomorphism from the Delaunay cells of `self` to those of
    /// `other`, if one exists.
    pub fn is_isomorphic(&self, other: &TranslationSurface, respect_labels: bool) -> Option<FlagMap> {
        if self.disc != other.disc && !(crate::qfield::is_square(self.disc) && crate::qfield::is_square(other.disc)) {
            return None;
        }
        let a = self.delaunay_cells();
        let b = other.delaunay_cells();
        maps_between_cells(&a, &b, 1, respect_labels, true).into_iter().next()
    }

    /// All automorphisms with `f*ω = sign·ω`, as flag maps on
    /// `self.delaunay_cells()`.
    pub fn translation_automorphisms(&self, sign: i32) -> Vec<FlagMap> {
        let c = self.delaunay_cells();
        maps_between_cells(&c, &c, sign, false, false)
    }
}

/// Number of points of `cells` fixed by an automorphism `f` with
/// `f*ω = −ω`: fixed vertices, midpoints of edges reversed onto themselves
/// and centres of cells mapped to themselves.
pub fn fixed_points_anti(cells: &TranslationSurface, f: &FlagMap) -> usize {
    let (vid, nv) = cells.vertex_ids();
    let mut fixed_v = vec![false; nv];
    for h in 0..cells.vecs.len() {
        if vid[f.apply(h)] == vid[h] {
            fixed_v[vid[h]] = true;
        }
    }
    let vertices = fixed_v.iter().filter(|&&x| x).count();
    let edges = (0..cells.vecs.len()).filter(|&h| h < cells.partner[h] && f.apply(h) == cells.partner[h]).count();
    let faces = (0..cells.faces.len()).filter(|&k| cells.face_of[f.apply(cells.faces[k][0])] == k).count();
    vertices + edges + faces
}

/// Number of vertices fixed by a flag map.
pub fn fixed_vertices(cells: &TranslationSurface, f: &FlagMap) -> usize {
    let (vid, nv) = cells.vertex_ids();
    let mut fixed = vec![false; nv];
    for h in 0..cells.vecs.len() {
        if vid[f.apply(h)] == vid[h] {
            fixed[vid[h]] = true;
        }
    }
    fixed.iter().filter(|&&x| x).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QuadNum;
    use crate::surface::{mat2_from_ints, origami, rectangle_torus};

    #[test]
    fn torus_codes() {
        let sq = rectangle_torus(QuadNum::one(), QuadNum::one());
        let rect = rectangle_torus(QuadNum::from_int(2), QuadNum::one());
        assert_ne!(sq.canonical_code(false), rect.canonical_code(false));
        let rot = sq.apply_gl2(&mat2_from_ints([[0, -1], [1, 0]])).unwrap();
        assert!(sq.is_isomorphic(&rot, false).is_some());
    }

    #[test]
    fn square_torus_anti_automorphisms() {
        let sq = rectangle_torus(QuadNum::one(), QuadNum::one());
        let anti = sq.translation_automorphisms(-1);
        // The vertex is marked, so only the elliptic involution about it is
        // a map of the cell complex; the three about the other 2-torsion
        // points move the vertex.
        assert_eq!(anti.len(), 1);
        let c = sq.delaunay_cells();
        assert_eq!(fixed_points_anti(&c, &anti[0]), 4);
        for f in &anti {
            let sq2 = f.compose(f);
            assert!(sq.translation_automorphisms(1).contains(&sq2));
        }
    }

    #[test]
    fn relabeling_keeps_code() {
        let s = origami(&[1, 2, 3, 0], &[0, 3, 2, 1]).unwrap();
        let code = s.canonical_code(false);
        let r = s.relabeled(&[2, 0, 3, 1], &[1, 3, 0, 2]);
        assert_eq!(r.canonical_code(false), code);
        assert_eq!(code.to_bytes(), r.canonical_code(false).to_bytes());
    }
}
