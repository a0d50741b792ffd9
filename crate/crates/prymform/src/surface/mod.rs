//! Translation surfaces presented as polygons glued along edges by
//! translations.
//!
//! Internally a surface is a half-edge structure: every polygon edge is a
//! half-edge carrying its exact edge vector, the polygons list their
//! half-edges counterclockwise, and `partner` pairs each half-edge with the
//! edge it is glued to. The vertex at the start of a half-edge is called its
//! origin, and each corner of a polygon is identified with the half-edge that
//! leaves it. Cone points carry optional names (`P`, `Q`, `R1`, `R2`, ...).

mod canonical;
mod triangulate;

pub use canonical::{fixed_points_anti, fixed_vertices, maps_between_cells, CanonicalCode, FlagMap};
pub use triangulate::Chain;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qfield::{orient, QuadNum, Vec2};

/// A half-edge index.
pub type HalfEdge = usize;

/// Component tag for the stratum `H(2,2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentTag {
    Odd,
    Hyp,
}

/// Zero orders (descending, regular marked points omitted) with an optional
/// component tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub orders: Vec<usize>,
    pub tag: Option<ComponentTag>,
}

impl Stratum {
    pub fn genus(&self) -> usize {
        self.orders.iter().sum::<usize>() / 2 + 1
    }

    pub fn is(&self, orders: &[usize]) -> bool {
        let mut o = orders.to_vec();
        o.sort_unstable_by(|a, b| b.cmp(a));
        self.orders == o
    }
}

impl std::fmt::Display for Stratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| o.to_string()).collect();
        write!(f, "H({})", parts.join(","))?;
        match self.tag {
            Some(ComponentTag::Odd) => write!(f, "^odd"),
            Some(ComponentTag::Hyp) => write!(f, "^hyp"),
            None => Ok(()),
        }
    }
}

/// A 2×2 matrix over the surface field, row-major.
pub type Mat2 = [[QuadNum; 2]; 2];

pub fn mat2_det(m: &Mat2) -> QuadNum {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn mat2_apply(m: &Mat2, v: &Vec2) -> Vec2 {
    Vec2::new(&m[0][0] * &v.x + &m[0][1] * &v.y, &m[1][0] * &v.x + &m[1][1] * &v.y)
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_inverse(m: &Mat2) -> Mat2 {
    let d = mat2_det(m).recip();
    [[&m[1][1] * &d, -(&m[0][1] * &d)], [-(&m[1][0] * &d), &m[0][0] * &d]]
}

pub fn mat2_from_ints(m: [[i64; 2]; 2]) -> Mat2 {
    [
        [QuadNum::from_int(m[0][0]), QuadNum::from_int(m[0][1])],
        [QuadNum::from_int(m[1][0]), QuadNum::from_int(m[1][1])],
    ]
}

/// A translation surface with exact edge vectors.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    pub(crate) disc: u64,
    pub(crate) vecs: Vec<Vec2>,
    pub(crate) next: Vec<HalfEdge>,
    pub(crate) prev: Vec<HalfEdge>,
    pub(crate) partner: Vec<HalfEdge>,
    pub(crate) faces: Vec<Vec<HalfEdge>>,
    pub(crate) face_of: Vec<usize>,
    pub(crate) labels: Vec<Option<String>>,
}

/// Segment intersection test for closed segments `[a,b]` and `[c,d]`.
fn segments_touch(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |p: &Vec2, q: &Vec2, r: &Vec2| {
        // r collinear with pq lies within the bounding box.
        let within = |u: &QuadNum, v: &QuadNum, w: &QuadNum| {
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            w >= lo && w <= hi
        };
        within(&p.x, &q.x, &r.x) && within(&p.y, &q.y, &r.y)
    };
    (o1 == 0 && on(a, b, c)) || (o2 == 0 && on(a, b, d)) || (o3 == 0 && on(c, d, a)) || (o4 == 0 && on(c, d, b))
}

/// Checks that a closed polygon given by edge vectors is simple and
/// counterclockwise.
pub(crate) fn polygon_is_simple(edges: &[Vec2]) -> bool {
    let n = edges.len();
    if n < 3 {
        return false;
    }
    let mut pts = Vec::with_capacity(n + 1);
    let mut p = Vec2::zero();
    for e in edges {
        if e.is_zero() {
            return false;
        }
        pts.push(p.clone());
        p = &p + e;
    }
    if !p.is_zero() {
        return false;
    }
    pts.push(Vec2::zero());
    let mut area2 = QuadNum::zero();
    for i in 0..n {
        area2 += &pts[i].cross(&pts[i + 1]);
    }
    if area2.sign() <= 0 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Consecutive edges may only share their common vertex.
                let (u, v) = if j == i + 1 { (&edges[i], &edges[j]) } else { (&edges[j], &edges[i]) };
                if u.cross(v).is_zero() && u.dot(v).sign() < 0 {
                    return false;
                }
            } else if segments_touch(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]) {
                return false;
            }
        }
    }
    true
}

impl TranslationSurface {
    /// Assembles a surface from raw half-edge data without validation.
    pub(crate) fn assemble(
        disc: u64,
        vecs: Vec<Vec2>,
        partner: Vec<HalfEdge>,
        faces: Vec<Vec<HalfEdge>>,
        labels: Vec<Option<String>>,
    ) -> Self {
        let n = vecs.len();
        let mut next = vec![usize::MAX; n];
        let mut prev = vec![usize::MAX; n];
        let mut face_of = vec![usize::MAX; n];
        for (f, face) in faces.iter().enumerate() {
            let k = face.len();
            for i in 0..k {
                let h = face[i];
                next[h] = face[(i + 1) % k];
                prev[h] = face[(i + k - 1) % k];
                face_of[h] = f;
            }
        }
        TranslationSurface { disc, vecs, next, prev, partner, faces, face_of, labels }
    }

    /// Builds and validates a surface from polygons (edge vectors listed
    /// counterclockwise), a gluing of edges `(polygon, edge)` in pairs, and
    /// zero names attached to representative corners `(polygon, corner)`,
    /// where corner `i` is the start of edge `i`.
    pub fn from_polygons(
        disc: u64,
        polygons: Vec<Vec<Vec2>>,
        gluing: &[((usize, usize), (usize, usize))],
        labels: &[(String, (usize, usize))],
    ) -> Result<Self> {
        let mut offset = Vec::with_capacity(polygons.len());
        let mut total = 0;
        for p in &polygons {
            offset.push(total);
            total += p.len();
        }
        let flat = |(p, e): (usize, usize)| -> Result<usize> {
            if p >= polygons.len() || e >= polygons[p].len() {
                return Err(Error::Malformed(format!("edge ({p}, {e}) does not exist")));
            }
            Ok(offset[p] + e)
        };
        for (i, poly) in polygons.iter().enumerate() {
            if !polygon_is_simple(poly) {
                return Err(Error::NonSimplePolygon(i));
            }
        }
        let mut partner = vec![usize::MAX; total];
        for &(a, b) in gluing {
            let (ha, hb) = (flat(a)?, flat(b)?);
            if ha == hb || partner[ha] != usize::MAX || partner[hb] != usize::MAX {
                return Err(Error::Malformed(format!("edge glued more than once: {a:?} / {b:?}")));
            }
            partner[ha] = hb;
            partner[hb] = ha;
        }
        if let Some(h) = partner.iter().position(|&p| p == usize::MAX) {
            let p = offset.iter().rposition(|&o| o <= h).unwrap();
            return Err(Error::Malformed(format!("edge ({p}, {}) is not glued", h - offset[p])));
        }
        let vecs: Vec<Vec2> = polygons.iter().flatten().map(|v| v.in_field(disc)).collect();
        for h in 0..total {
            if vecs[h] != -&vecs[partner[h]] {
                let p = offset.iter().rposition(|&o| o <= h).unwrap();
                return Err(Error::MismatchedEdge(format!(
                    "edge ({p}, {}) = {:?} glued to {:?}",
                    h - offset[p],
                    vecs[h],
                    vecs[partner[h]]
                )));
            }
        }
        let faces: Vec<Vec<usize>> =
            polygons.iter().enumerate().map(|(p, poly)| (0..poly.len()).map(|e| offset[p] + e).collect()).collect();
        let mut s = Self::assemble(disc, vecs, partner, faces, vec![None; total]);
        if !s.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut named = Vec::new();
        for (name, corner) in labels {
            named.push((flat(*corner)?, name.clone()));
        }
        s.set_vertex_labels(&named)?;
        Ok(s)
    }

    /// Attaches names to the vertex classes of the given corners, replacing
    /// all existing names.
    pub(crate) fn set_vertex_labels(&mut self, named: &[(HalfEdge, String)]) -> Result<()> {
        let (vid, nv) = self.vertex_ids();
        let mut names: Vec<Option<String>> = vec![None; nv];
        for (h, name) in named {
            let v = vid[*h];
            if let Some(old) = &names[v] {
                if old != name {
                    return Err(Error::Malformed(format!("vertex carries two names {old} and {name}")));
                }
            }
            if names.iter().enumerate().any(|(w, n)| w != v && n.as_deref() == Some(name.as_str())) {
                return Err(Error::Malformed(format!("name {name} used for two vertices")));
            }
            names[v] = Some(name.clone());
        }
        self.labels = vid.iter().map(|&v| names[v].clone()).collect();
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let nf = self.faces.len();
        if nf == 0 {
            return false;
        }
        let mut seen = vec![false; nf];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for &h in &self.faces[f] {
                let g = self.face_of[self.partner[h]];
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn num_half_edges(&self) -> usize {
        self.vecs.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vec(&self, h: HalfEdge) -> &Vec2 {
        &self.vecs[h]
    }

    pub fn next(&self, h: HalfEdge) -> HalfEdge {
        self.next[h]
    }

    pub fn prev(&self, h: HalfEdge) -> HalfEdge {
        self.prev[h]
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h]
    }

    pub fn face(&self, f: usize) -> &[HalfEdge] {
        &self.faces[f]
    }

    pub fn face_of(&self, h: HalfEdge) -> usize {
        self.face_of[h]
    }

    pub fn label(&self, h: HalfEdge) -> Option<&str> {
        self.labels[h].as_deref()
    }

    /// Next outgoing half-edge counterclockwise around the origin of `h`.
    pub fn ccw(&self, h: HalfEdge) -> HalfEdge {
        self.partner[self.prev[h]]
    }

    /// Next outgoing half-edge clockwise around the origin of `h`.
    pub fn cw(&self, h: HalfEdge) -> HalfEdge {
        self.next[self.partner[h]]
    }

    /// Vertex class of every half-edge origin, numbered in order of first
    /// appearance, and the number of vertices.
    pub fn vertex_ids(&self) -> (Vec<usize>, usize) {
        let n = self.vecs.len();
        let mut vid = vec![usize::MAX; n];
        let mut count = 0;
        for h0 in 0..n {
            if vid[h0] != usize::MAX {
                continue;
            }
            let mut h = h0;
            loop {
                vid[h] = count;
                h = self.ccw(h);
                if h == h0 {
                    break;
                }
            }
            count += 1;
        }
        (vid, count)
    }

    /// Outgoing half-edges around the origin of `h0`, counterclockwise,
    /// starting at `h0`.
    pub fn star(&self, h0: HalfEdge) -> Vec<HalfEdge> {
        let mut out = vec![h0];
        let mut h = self.ccw(h0);
        while h != h0 {
            out.push(h);
            h = self.ccw(h);
        }
        out
    }

    /// True when the corner at `h` wraps past the direction of the positive
    /// x-axis, used to count total turning at a vertex.
    fn corner_wraps(&self, h: HalfEdge) -> bool {
        let start = &self.vecs[h];
        let end = -&self.vecs[self.prev[h]];
        end.angle_cmp(start) == Ordering::Less
    }

    /// Cone angle of every vertex as a multiple of `2π`.
    pub fn cone_turns(&self) -> Vec<usize> {
        let (vid, nv) = self.vertex_ids();
        let mut turns = vec![0; nv];
        for h in 0..self.vecs.len() {
            if self.corner_wraps(h) {
                turns[vid[h]] += 1;
            }
        }
        turns
    }

    /// Orders of all vertices (0 for regular marked points), by vertex id.
    pub fn vertex_orders(&self) -> Vec<usize> {
        self.cone_turns().into_iter().map(|t| t - 1).collect()
    }

    /// Genus from the Euler characteristic.
    pub fn genus(&self) -> usize {
        let (_, v) = self.vertex_ids();
        let e = self.vecs.len() / 2;
        let f = self.faces.len();
        let chi = v as i64 - e as i64 + f as i64;
        ((2 - chi) / 2) as usize
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (_, v) = self.vertex_ids();
        v as i64 - (self.vecs.len() / 2) as i64 + self.faces.len() as i64
    }

    /// Zero orders (descending) without component tag.
    pub fn stratum_orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.vertex_orders().into_iter().filter(|&k| k > 0).collect();
        o.sort_unstable_by(|a, b| b.cmp(a));
        o
    }

    /// Zero orders plus the odd/hyperelliptic tag for `H(2,2)`. The tag is
    /// decided by searching for an involution acting as `−Id` on homology.
    pub fn stratum(&self) -> Stratum {
        let orders = self.stratum_orders();
        let tag = if orders == [2, 2] {
            if crate::homology::has_hyperelliptic_involution(self) {
                Some(ComponentTag::Hyp)
            } else {
                Some(ComponentTag::Odd)
            }
        } else {
            None
        };
        Stratum { orders, tag }
    }

    /// Positions of the corners of face `f` with its first corner at the origin.
    pub fn face_points(&self, f: usize) -> Vec<Vec2> {
        let mut pts = Vec::with_capacity(self.faces[f].len());
        let mut p = Vec2::zero();
        for &h in &self.faces[f] {
            pts.push(p.clone());
            p = &p + &self.vecs[h];
        }
        pts
    }

    /// Twice the area of face `f`.
    pub fn face_area2(&self, f: usize) -> QuadNum {
        let pts = self.face_points(f);
        let n = pts.len();
        let mut a = QuadNum::zero();
        for i in 0..n {
            a += &pts[i].cross(&pts[(i + 1) % n]);
        }
        a
    }

    /// Total area.
    pub fn area(&self) -> QuadNum {
        let mut a = QuadNum::zero();
        for f in 0..self.faces.len() {
            a += &self.face_area2(f);
        }
        &a * &QuadNum::frac(1, 2)
    }

    /// Names of vertices by vertex id.
    pub fn vertex_labels(&self) -> Vec<Option<String>> {
        let (vid, nv) = self.vertex_ids();
        let mut out = vec![None; nv];
        for h in 0..self.vecs.len() {
            if out[vid[h]].is_none() {
                out[vid[h]] = self.labels[h].clone();
            }
        }
        out
    }

    /// A corner whose origin carries `name`.
    pub fn corner_with_label(&self, name: &str) -> Option<HalfEdge> {
        self.labels.iter().position(|l| l.as_deref() == Some(name))
    }

    /// Removes all zero names.
    pub fn without_labels(&self) -> Self {
        let mut s = self.clone();
        s.labels = vec![None; s.vecs.len()];
        s
    }

    /// Renames vertices according to `map` (names not in the map are kept).
    pub fn renamed(&self, map: &HashMap<String, String>) -> Self {
        let mut s = self.clone();
        for l in s.labels.iter_mut().flatten() {
            if let Some(n) = map.get(l) {
                *l = n.clone();
            }
        }
        s
    }

    /// The image under a linear map with positive determinant.
    pub fn apply_gl2(&self, m: &Mat2) -> Result<Self> {
        if mat2_det(m).sign() <= 0 {
            return Err(Error::NonPositiveDeterminant);
        }
        let mut s = self.clone();
        for v in s.vecs.iter_mut() {
            *v = mat2_apply(m, v).in_field(self.disc);
        }
        Ok(s)
    }

    /// Rotation by `π`, the image of the surface under `−Id`.
    pub fn negated(&self) -> Self {
        let mut s = self.clone();
        for v in s.vecs.iter_mut() {
            *v = -&*v;
        }
        s
    }

    /// The same surface with polygons and their starting corners reordered
    /// according to `face_perm` and `rot` (used to test label invariance).
    pub fn relabeled(&self, face_perm: &[usize], rot: &[usize]) -> Self {
        let faces: Vec<Vec<usize>> = face_perm
            .iter()
            .map(|&f| {
                let face = &self.faces[f];
                let k = face.len();
                (0..k).map(|i| face[(i + rot[f]) % k]).collect()
            })
            .collect();
        let order: Vec<usize> = faces.iter().flatten().copied().collect();
        let mut new_id = vec![0; order.len()];
        for (i, &h) in order.iter().enumerate() {
            new_id[h] = i;
        }
        let vecs = order.iter().map(|&h| self.vecs[h].clone()).collect();
        let partner = order.iter().map(|&h| new_id[self.partner[h]]).collect();
        let labels = order.iter().map(|&h| self.labels[h].clone()).collect();
        let faces = faces.iter().map(|f| f.iter().map(|&h| new_id[h]).collect()).collect();
        Self::assemble(self.disc, vecs, partner, faces, labels)
    }

    /// Polygon/edge position of every half-edge.
    fn positions(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.vecs.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for (i, &h) in face.iter().enumerate() {
                pos[h] = (f, i);
            }
        }
        pos
    }

    /// Surface JSON: `{"D", "polygons", "gluing", "labels"}`.
    pub fn to_json(&self) -> Value {
        let pos = self.positions();
        let polygons: Vec<Value> = self
            .faces
            .iter()
            .map(|face| Value::Array(face.iter().map(|&h| vec2_json(&self.vecs[h])).collect()))
            .collect();
        let mut gluing = Vec::new();
        for h in 0..self.vecs.len() {
            let g = self.partner[h];
            if pos[h] < pos[g] {
                gluing.push(json!([[pos[h].0, pos[h].1], [pos[g].0, pos[g].1]]));
            }
        }
        gluing.sort_by_key(|a| a.to_string());
        let mut labels = BTreeMap::new();
        for h in 0..self.vecs.len() {
            if let Some(l) = &self.labels[h] {
                let entry = labels.entry(l.clone()).or_insert(pos[h]);
                if pos[h] < *entry {
                    *entry = pos[h];
                }
            }
        }
        let labels: serde_json::Map<String, Value> =
            labels.into_iter().map(|(k, (p, i))| (k, json!([p, i]))).collect();
        json!({
            "D": self.disc,
            "polygons": polygons,
            "gluing": gluing,
            "labels": labels,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let o = v.as_object().ok_or_else(|| bad("surface must be an object"))?;
        let disc = o.get("D").and_then(Value::as_u64).ok_or_else(|| bad("missing D"))?;
        let polys = o.get("polygons").and_then(Value::as_array).ok_or_else(|| bad("missing polygons"))?;
        let mut polygons = Vec::new();
        for p in polys {
            let edges = p.as_array().ok_or_else(|| bad("polygon must be an array"))?;
            let mut out = Vec::new();
            for e in edges {
                out.push(vec2_from_json(e).map_err(|m| bad(&m))?);
            }
            polygons.push(out);
        }
        let pair = |x: &Value| -> Result<(usize, usize)> {
            let a = x.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("edge reference must be [p, e]"))?;
            let p = a[0].as_u64().ok_or_else(|| bad("bad polygon index"))? as usize;
            let e = a[1].as_u64().ok_or_else(|| bad("bad edge index"))? as usize;
            Ok((p, e))
        };
        let mut gluing = Vec::new();
        for g in o.get("gluing").and_then(Value::as_array).ok_or_else(|| bad("missing gluing"))? {
            let a = g.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("gluing entry must be a pair"))?;
            gluing.push((pair(&a[0])?, pair(&a[1])?));
        }
        let mut labels = Vec::new();
        if let Some(l) = o.get("labels") {
            let l = l.as_object().ok_or_else(|| bad("labels must be an object"))?;
            for (k, v) in l {
                labels.push((k.clone(), pair(v)?));
            }
        }
        Self::from_polygons(disc, polygons, &gluing, &labels)
    }
}

pub fn vec2_json(v: &Vec2) -> Value {
    json!([v.x.to_json(), v.y.to_json()])
}

/// Accepts `[x, y]` or `{"x": .., "y": ..}` with QuadNum components, or plain
/// integers and `"p/q"` strings for rational components.
pub fn vec2_from_json(v: &Value) -> std::result::Result<Vec2, String> {
    let comp = |c: &Value| -> std::result::Result<QuadNum, String> {
        match c {
            Value::Object(_) => QuadNum::from_json(c),
            Value::Number(n) => n.as_i64().map(QuadNum::from_int).ok_or_else(|| "non-integer number".to_string()),
            Value::String(s) => parse_rational(s),
            _ => Err("bad vector component".to_string()),
        }
    };
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Vec2::new(comp(&a[0])?, comp(&a[1])?)),
        Value::Object(o) => {
            let x = o.get("x").ok_or("missing x")?;
            let y = o.get("y").ok_or("missing y")?;
            Ok(Vec2::new(comp(x)?, comp(y)?))
        }
        _ => Err("vector must be [x, y]".to_string()),
    }
}

/// Parses `"n"` or `"n/d"` into a rational QuadNum.
pub fn parse_rational(s: &str) -> std::result::Result<QuadNum, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad rational {s}"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad rational {s}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s}"));
    }
    Ok(QuadNum::frac(n, d))
}

/// A unit square torus, optionally scaled to a `w × h` rectangle.
pub fn rectangle_torus(w: QuadNum, h: QuadNum) -> TranslationSurface {
    let z = QuadNum::zero;
    let poly = vec![
        Vec2::new(w.clone(), z()),
        Vec2::new(z(), h.clone()),
        Vec2::new(-w, z()),
        Vec2::new(z(), -h),
    ];
    TranslationSurface::from_polygons(1, vec![poly], &[((0, 0), (0, 2)), ((0, 1), (0, 3))], &[])
        .expect("rectangle torus is valid")
}

/// The torus `C / (uZ + vZ)` as a single parallelogram (requires
/// `cross(u, v) > 0`).
pub fn lattice_torus(disc: u64, u: &Vec2, v: &Vec2) -> Result<TranslationSurface> {
    if u.cross(v).sign() <= 0 {
        return Err(Error::NonSimplePolygon(0));
    }
    let poly = vec![u.clone(), v.clone(), -u, -v];
    TranslationSurface::from_polygons(disc, vec![poly], &[((0, 0), (0, 2)), ((0, 1), (0, 3))], &[])
}

/// A square-tiled surface: square `i` has right neighbour `right[i]` and
/// upper neighbour `up[i]`.
pub fn origami(right: &[usize], up: &[usize]) -> Result<TranslationSurface> {
    let n = right.len();
    if up.len() != n {
        return Err(Error::Malformed("permutations of different sizes".into()));
    }
    let sq = || vec![Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(-1, 0), Vec2::ints(0, -1)];
    let polygons = (0..n).map(|_| sq()).collect();
    let mut gluing = Vec::new();
    for i in 0..n {
        // right side (edge 1) of i glued to left side (edge 3) of right[i];
        // top (edge 2) of i glued to bottom (edge 0) of up[i].
        gluing.push(((i, 1), (right[i], 3)));
        gluing.push(((i, 2), (up[i], 0)));
    }
    TranslationSurface::from_polygons(1, polygons, &gluing, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square_torus() -> TranslationSurface {
        rectangle_torus(QuadNum::one(), QuadNum::one())
    }

    #[test]
    fn torus_has_no_zeros() {
        let t = square_torus();
        assert_eq!(t.genus(), 1);
        assert!(t.stratum().orders.is_empty());
        assert_eq!(t.cone_turns(), vec![1]);
        assert_eq!(t.area(), QuadNum::one());
    }

    #[test]
    fn mismatched_edge_is_rejected() {
        let poly = vec![Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(-1, 0), Vec2::ints(0, -1)];
        let bad = vec![Vec2::ints(2, 0), Vec2::ints(0, 1), Vec2::ints(-2, 0), Vec2::ints(0, -1)];
        let r = TranslationSurface::from_polygons(1, vec![poly, bad], &[((0, 0), (1, 2)), ((0, 1), (0, 3)), ((0, 2), (1, 0)), ((1, 1), (1, 3))], &[]);
        assert!(matches!(r, Err(Error::MismatchedEdge(_))));
    }

    #[test]
    fn disconnected_is_rejected() {
        let sq = || vec![Vec2::ints(1, 0), Vec2::ints(0, 1), Vec2::ints(-1, 0), Vec2::ints(0, -1)];
        let g = [((0, 0), (0, 2)), ((0, 1), (0, 3)), ((1, 0), (1, 2)), ((1, 1), (1, 3))];
        assert_eq!(TranslationSurface::from_polygons(1, vec![sq(), sq()], &g, &[]).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn non_simple_polygon_is_rejected() {
        // A bow-tie: edges cross.
        let poly = vec![Vec2::ints(2, 2), Vec2::ints(0, -2), Vec2::ints(-2, 2), Vec2::ints(0, -2)];
        let r = TranslationSurface::from_polygons(1, vec![poly], &[((0, 0), (0, 2)), ((0, 1), (0, 3))], &[]);
        assert_eq!(r.unwrap_err(), Error::NonSimplePolygon(0));
        let cw = vec![Vec2::ints(0, 1), Vec2::ints(1, 0), Vec2::ints(0, -1), Vec2::ints(-1, 0)];
        let r = TranslationSurface::from_polygons(1, vec![cw], &[((0, 0), (0, 2)), ((0, 1), (0, 3))], &[]);
        assert_eq!(r.unwrap_err(), Error::NonSimplePolygon(0));
    }

    #[test]
    fn h4_origami_stratum() {
        let s = origami(&[1, 2, 3, 4, 0], &[0, 2, 1, 4, 3]).unwrap();
        let orders = s.stratum_orders();
        assert_eq!(s.genus(), 1 + orders.iter().sum::<usize>() / 2);
    }

    #[test]
    fn json_round_trip() {
        let mut t = square_torus();
        t.set_vertex_labels(&[(0, "P".to_string())]).unwrap();
        let j = t.to_json();
        let t2 = TranslationSurface::from_json(&j).unwrap();
        assert_eq!(t2.to_json(), j);
        assert_eq!(t2.label(2), Some("P"));
    }

    #[test]
    fn gl2_rejects_orientation_reversal() {
        let t = square_torus();
        assert_eq!(t.apply_gl2(&mat2_from_ints([[0, 1], [1, 0]])).unwrap_err(), Error::NonPositiveDeterminant);
        let r = t.apply_gl2(&mat2_from_ints([[1, 0], [0, 2]])).unwrap();
        assert_eq!(r.area(), QuadNum::from_int(2));
    }
}
