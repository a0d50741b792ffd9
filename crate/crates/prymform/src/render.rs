//! SVG drawings of translation surfaces: every face is drawn as a polygon
//! element, faces are laid out left to right, glued edge pairs share a
//! number and named zeros are marked at their corners.

use std::fmt::Write;

use crate::surface::{HalfEdge, TranslationSurface};

/// Layout parameters.
#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Pixels per unit length.
    pub scale: f64,
    /// Horizontal gap between faces, in pixels.
    pub gap: f64,
    /// Half-edges drawn as slit overlays.
    pub highlight: Vec<HalfEdge>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { scale: 80.0, gap: 30.0, highlight: Vec::new() }
    }
}

fn num(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the surface as a standalone SVG document. Output is a
/// deterministic function of the surface and the options.
pub fn render_svg(s: &TranslationSurface, opts: &RenderOptions) -> String {
    let margin = 20.0;
    let mut placed: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut x_off = margin;
    let mut max_h: f64 = 0.0;
    let mut boxes = Vec::new();
    for f in 0..s.num_faces() {
        let pts: Vec<(f64, f64)> = s.face_points(f).iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
        let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        boxes.push((x_off - min_x * opts.scale, min_y, max_y));
        x_off += (max_x - min_x) * opts.scale + opts.gap;
        max_h = max_h.max((max_y - min_y) * opts.scale);
        placed.push(pts);
    }
    let width = x_off - opts.gap + margin;
    let height = max_h + 2.0 * margin;
    // Screen coordinates: y grows downwards, faces aligned at their tops.
    let screen: Vec<Vec<(f64, f64)>> = placed
        .iter()
        .zip(&boxes)
        .map(|(pts, &(ox, _, max_y))| {
            pts.iter().map(|&(x, y)| (ox + x * opts.scale, margin + (max_y - y) * opts.scale)).collect()
        })
        .collect();
    let mut edge_no = vec![0usize; s.num_half_edges()];
    let mut next_no = 1;
    for h in 0..s.num_half_edges() {
        let p = s.partner(h);
        if h < p {
            edge_no[h] = next_no;
            edge_no[p] = next_no;
            next_no += 1;
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    );
    out.push_str(
        "<style>.face{fill:#eef3fb;stroke:#2b3a55;stroke-width:1.5}.slit{stroke:#c0392b;stroke-width:3}\
         .glue{font:11px sans-serif;fill:#555;text-anchor:middle}.zero{font:12px sans-serif;fill:#000}</style>\n",
    );
    for (f, pts) in screen.iter().enumerate() {
        let points: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        let _ = writeln!(out, r#"<polygon class="face" data-face="{f}" points="{}"/>"#, points.join(" "));
    }
    for (f, pts) in screen.iter().enumerate() {
        let face = s.face(f);
        let k = face.len();
        let (cx, cy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / k as f64, a.1 + p.1 / k as f64));
        for (i, &h) in face.iter().enumerate() {
            let (a, b) = (pts[i], pts[(i + 1) % k]);
            let (mx, my) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            // Pull the label slightly into the face.
            let (lx, ly) = (mx + (cx - mx) * 0.12, my + (cy - my) * 0.12 + 4.0);
            let _ = writeln!(out, r#"<text class="glue" x="{}" y="{}">{}</text>"#, num(lx), num(ly), edge_no[h]);
            if opts.highlight.contains(&h) || opts.highlight.contains(&s.partner(h)) {
                let _ = writeln!(
                    out,
                    r#"<path class="slit" d="M{} {} L{} {}"/>"#,
                    num(a.0),
                    num(a.1),
                    num(b.0),
                    num(b.1)
                );
            }
            if let Some(name) = s.label(h) {
                let (tx, ty) = (a.0 + (cx - a.0) * 0.1, a.1 + (cy - a.1) * 0.1 + 4.0);
                let _ = writeln!(out, r#"<text class="zero" x="{}" y="{}">{}</text>"#, num(tx), num(ty), escape(name));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Half-edges glued across different faces with both endpoints at named
/// zeros: the slits of a slit-torus presentation.
pub fn slit_edges(s: &TranslationSurface) -> Vec<HalfEdge> {
    (0..s.num_half_edges())
        .filter(|&h| {
            let p = s.partner(h);
            h < p && s.face_of(h) != s.face_of(p) && s.label(h).is_some() && s.label(p).is_some()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prym::{prototype_polygons, Kappa, Prototype};
    use crate::qfield::QuadNum;
    use crate::surface::rectangle_torus;

    #[test]
    fn prototype_has_three_paths() {
        let (s, _) = prototype_polygons(&Prototype::new(Kappa::TwoTwo, 1, 1, 1).unwrap(), None).unwrap();
        let svg = render_svg(&s, &RenderOptions::default());
        assert_eq!(svg.matches(r#"class="face""#).count(), 3);
        assert_eq!(svg, render_svg(&s, &RenderOptions::default()));
    }

    #[test]
    fn torus_has_one_polygon() {
        let svg = render_svg(&rectangle_torus(QuadNum::one(), QuadNum::one()), &RenderOptions::default());
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<path").count(), 0);
    }
}
