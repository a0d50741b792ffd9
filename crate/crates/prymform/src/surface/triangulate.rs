//! Triangulation by ear clipping, edge flips, the Delaunay flip algorithm and
//! the Delaunay cell decomposition.
//!
//! Every operation can transport integer 1-chains. A chain stores one integer
//! per half-edge; the coefficient of an edge, oriented like half-edge `h`, is
//! `c[h] − c[partner(h)]`. Transport keeps the homology class of every closed
//! chain unchanged.

use super::{HalfEdge, TranslationSurface};
use crate::qfield::{incircle, orient, Vec2};

/// Integer 1-chain indexed by half-edge.
pub type Chain = Vec<i64>;

impl TranslationSurface {
    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    /// Triangulates every polygon by ear clipping. Existing half-edges keep
    /// their indices; diagonals are appended.
    pub fn triangulate(&self) -> Self {
        self.triangulate_tracked(&mut [])
    }

    pub fn triangulate_tracked(&self, chains: &mut [Chain]) -> Self {
        let mut vecs = self.vecs.clone();
        let mut partner = self.partner.clone();
        let mut labels = self.labels.clone();
        let mut faces: Vec<Vec<HalfEdge>> = Vec::new();
        for face in &self.faces {
            if face.len() == 3 {
                faces.push(face.clone());
                continue;
            }
            // Remaining polygon as (half-edge, origin position).
            let mut cur: Vec<(HalfEdge, Vec2)> = Vec::with_capacity(face.len());
            let mut p = Vec2::zero();
            for &h in face {
                cur.push((h, p.clone()));
                p = &p + &self.vecs[h];
            }
            while cur.len() > 3 {
                let k = cur.len();
                let mut clipped = false;
                for i in 0..k {
                    let ip = (i + k - 1) % k;
                    let inx = (i + 1) % k;
                    let (a, b, c) = (&cur[ip].1, &cur[i].1, &cur[inx].1);
                    if orient(a, b, c) <= 0 {
                        continue;
                    }
                    let blocked = (0..k).filter(|&j| j != ip && j != i && j != inx).any(|j| {
                        let q = &cur[j].1;
                        orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0
                    });
                    if blocked {
                        continue;
                    }
                    let d = vecs.len();
                    let dp = d + 1;
                    vecs.push(a - c);
                    vecs.push(c - a);
                    partner.push(dp);
                    partner.push(d);
                    labels.push(labels[cur[inx].0].clone());
                    labels.push(labels[cur[ip].0].clone());
                    faces.push(vec![cur[ip].0, cur[i].0, d]);
                    let origin = cur[ip].1.clone();
                    cur[ip] = (dp, origin);
                    cur.remove(i);
                    clipped = true;
                    break;
                }
                assert!(clipped, "ear clipping failed on a simple polygon");
            }
            faces.push(cur.into_iter().map(|(h, _)| h).collect());
        }
        for c in chains.iter_mut() {
            c.resize(vecs.len(), 0);
        }
        Self::assemble(self.disc, vecs, partner, faces, labels)
    }

    /// In-circle sign of the edge of `h` between its two triangles: positive
    /// when the edge is not Delaunay, zero when the four points are
    /// co-circular.
    pub(crate) fn edge_incircle(&self, h: HalfEdge) -> i32 {
        let h1 = self.next[h];
        let g = self.partner[h];
        let g1 = self.next[g];
        let o = Vec2::zero();
        let a = self.vecs[h].clone();
        let c = &a + &self.vecs[h1];
        let d = self.vecs[g1].clone();
        incircle(&o, &a, &c, &d)
    }

    /// Flips the edge of `h` inside the quadrilateral formed by its two
    /// triangles. The half-edges `h` and `partner(h)` are reused for the new
    /// diagonal.
    pub(crate) fn flip(&mut self, h: HalfEdge, chains: &mut [Chain]) {
        let g = self.partner[h];
        let (h1, h2) = (self.next[h], self.prev[h]);
        let (g1, g2) = (self.next[g], self.prev[g]);
        let (ft, fg) = (self.face_of[h], self.face_of[g]);
        for c in chains.iter_mut() {
            let k = c[h] - c[g];
            c[g1] += k;
            c[g2] += k;
            c[h] = 0;
            c[g] = 0;
        }
        let newv = -(&self.vecs[g2] + &self.vecs[h1]);
        self.vecs[g] = -&newv;
        self.vecs[h] = newv;
        self.labels[h] = self.labels[h2].clone();
        self.labels[g] = self.labels[g2].clone();
        self.faces[ft] = vec![g2, h1, h];
        self.faces[fg] = vec![h2, g1, g];
        for (f, tri) in [(ft, [g2, h1, h]), (fg, [h2, g1, g])] {
            for i in 0..3 {
                let x = tri[i];
                self.next[x] = tri[(i + 1) % 3];
                self.prev[x] = tri[(i + 2) % 3];
                self.face_of[x] = f;
            }
        }
    }

    /// Flips non-Delaunay edges until every edge satisfies the empty-circle
    /// condition. Returns the number of flips.
    pub fn make_delaunay(&mut self, chains: &mut [Chain]) -> usize {
        assert!(self.is_triangulated(), "Delaunay flips need a triangulation");
        let n = self.vecs.len();
        let mut queued = vec![true; n];
        let mut stack: Vec<HalfEdge> = (0..n).filter(|&h| h < self.partner[h]).collect();
        let mut flips = 0;
        while let Some(h) = stack.pop() {
            let key = h.min(self.partner[h]);
            queued[key] = false;
            if self.edge_incircle(h) > 0 {
                self.flip(h, chains);
                flips += 1;
                let g = self.partner[h];
                for x in [self.next[h], self.prev[h], self.next[g], self.prev[g]] {
                    let k = x.min(self.partner[x]);
                    if !queued[k] {
                        queued[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
        flips
    }

    /// Delaunay triangulation obtained from this surface by triangulating
    /// and flipping.
    pub fn delaunay(&self) -> Self {
        let mut t = self.triangulate();
        t.make_delaunay(&mut []);
        t
    }

    /// True when every edge is Delaunay.
    pub fn is_delaunay(&self) -> bool {
        self.is_triangulated() && (0..self.vecs.len()).all(|h| self.edge_incircle(h) <= 0)
    }

    /// Merges the triangles of a Delaunay triangulation across co-circular
    /// edges, giving the Delaunay decomposition into convex cells. Removed
    /// edges are rerouted along cell boundaries in every chain.
    pub fn merge_cocircular(&self, chains: &mut [Chain]) -> Self {
        let n = self.vecs.len();
        let removed: Vec<bool> = (0..n).map(|h| self.edge_incircle(h) == 0).collect();
        let cell_next = |h: HalfEdge| -> HalfEdge {
            let mut x = self.next[h];
            while removed[x] {
                x = self.next[self.partner[x]];
            }
            x
        };
        let kept_cw = |h: HalfEdge| -> HalfEdge {
            let mut y = h;
            while removed[y] {
                y = self.cw(y);
            }
            y
        };
        for c in chains.iter_mut() {
            for x in 0..n {
                if !removed[x] || x > self.partner[x] {
                    continue;
                }
                let k = c[x] - c[self.partner[x]];
                if k == 0 {
                    continue;
                }
                let start = kept_cw(x);
                let stop = kept_cw(self.partner[x]);
                let mut y = start;
                while y != stop {
                    c[y] += k;
                    y = cell_next(y);
                }
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut order = Vec::new();
        for h in 0..n {
            if !removed[h] {
                new_id[h] = order.len();
                order.push(h);
            }
        }
        let mut visited = vec![false; n];
        let mut faces = Vec::new();
        for &h0 in &order {
            if visited[h0] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = h0;
            while !visited[h] {
                visited[h] = true;
                face.push(new_id[h]);
                h = cell_next(h);
            }
            faces.push(face);
        }
        let vecs = order.iter().map(|&h| self.vecs[h].clone()).collect();
        let partner = order.iter().map(|&h| new_id[self.partner[h]]).collect();
        let labels = order.iter().map(|&h| self.labels[h].clone()).collect();
        for c in chains.iter_mut() {
            *c = order.iter().map(|&h| c[h]).collect();
        }
        Self::assemble(self.disc, vecs, partner, faces, labels)
    }

    /// The Delaunay decomposition of the surface: a canonical presentation
    /// by convex cells inscribed in empty circles.
    pub fn delaunay_cells(&self) -> Self {
        self.delaunay_cells_tracked(&mut [])
    }

    pub fn delaunay_cells_tracked(&self, chains: &mut [Chain]) -> Self {
        let mut t = self.triangulate_tracked(chains);
        t.make_delaunay(chains);
        t.merge_cocircular(chains)
    }

    /// Triangulates the cells of a surface and reports, for every triangle
    /// corner, the polygon corner of `self` containing it.
    pub fn triangulate_with_corners(&self) -> (Self, Vec<HalfEdge>) {
        let t = self.triangulate();
        let n0 = self.vecs.len();
        let corner = (0..t.vecs.len())
            .map(|h| {
                let mut y = h;
                while y >= n0 {
                    y = t.cw(y);
                }
                y
            })
            .collect();
        (t, corner)
    }
}
