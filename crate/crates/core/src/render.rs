//! Deterministic SVG 1.1 pictures: marked chambers, developed tilings and unfolded billiards.

use crate::billiard::{BilliardConfig, BilliardTrajectory};
use crate::coxeter::develop::develop_ball;
use crate::coxeter::{realize_chamber, Element, Model, PolygonRealization, Realization, V3};
use crate::error::{Error, Result};
use crate::polar_data::PolarData;
use std::fmt::Write;

const SIZE: f64 = 600.0;
const EDGE_SAMPLES: usize = 16;
pub const MAX_TILES: usize = 20_000;

struct Canvas {
    width: f64,
    body: String,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Canvas {
    fn new(width: f64) -> Self {
        Canvas { width, body: String::new() }
    }

    fn path(&mut self, pts: &[(f64, f64)], closed: bool, style: &str) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.4},{:.4}", if i == 0 { "M" } else { " L" }, x, y);
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(self.body, "<path d=\"{d}\" {style}/>");
    }

    fn circle(&mut self, c: (f64, f64), r: f64, style: &str) {
        let _ = writeln!(self.body, "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" {style}/>", c.0, c.1, r);
    }

    fn text(&mut self, at: (f64, f64), s: &str, size: f64) {
        let _ = writeln!(
            self.body,
            "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"{size}\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>",
            at.0,
            at.1,
            esc(s)
        );
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = SIZE
        )
    }
}

/// Affine map from picture coordinates to pixels, y up.
#[derive(Clone, Copy)]
struct View {
    cx: f64,
    cy: f64,
    scale: f64,
}

impl View {
    fn fit(radius: f64, cx: f64) -> View {
        View { cx, cy: SIZE / 2.0, scale: 0.42 * SIZE / radius.max(1e-9) }
    }

    fn px(&self, p: (f64, f64)) -> (f64, f64) {
        (self.cx + p.0 * self.scale, self.cy - p.1 * self.scale)
    }
}

fn edge(model: Model, a: &V3, b: &V3) -> Vec<V3> {
    let Some((w, d)) = model.direction(a, b) else { return vec![*a] };
    (0..=EDGE_SAMPLES).map(|i| model.geodesic(a, &w, d * i as f64 / EDGE_SAMPLES as f64)).collect()
}

fn outline(poly: &PolygonRealization, g: &crate::coxeter::M3) -> Vec<V3> {
    let k = poly.k();
    let model = poly.model;
    let mut pts = Vec::new();
    for i in 0..k {
        let (a, b) = (g * poly.vertices[i], g * poly.vertices[(i + 1) % k]);
        let mut e = edge(model, &a, &b);
        e.pop();
        pts.extend(e);
    }
    pts
}

/// Disk picture of a point; for the sphere the southern hemisphere uses the other pole.
fn disk(model: Model, x: &V3, south: bool) -> (f64, f64) {
    if south {
        (x.x / (1.0 - x.z), x.y / (1.0 - x.z))
    } else {
        model.to_disk(x)
    }
}

/// Marked chamber: outline with side, corner and principal labels.
pub fn render_data(data: &PolarData) -> Result<String> {
    match realize_chamber(&data.chamber)? {
        Realization::Interval { length, .. } => Ok(render_interval(data, length)),
        Realization::Polygon(poly) => {
            let mark = |v: String| data.mark(&data.vertex(&v).ok()?).ok().map(|g| g.to_string());
            let model = poly.model;
            let pts = outline(&poly, &crate::coxeter::M3::identity());
            let r = pts.iter().map(|x| {
                let (u, v) = disk(model, x, false);
                let (c, d) = disk(model, &poly.center, false);
                (u - c).hypot(v - d)
            });
            let radius = r.fold(0.0, f64::max);
            let (c0, c1) = disk(model, &poly.center, false);
            let view = View {
                cx: SIZE / 2.0 - c0 * 0.42 * SIZE / radius,
                cy: SIZE / 2.0 + c1 * 0.42 * SIZE / radius,
                ..View::fit(radius, 0.0)
            };
            let mut cv = Canvas::new(SIZE);
            let px: Vec<(f64, f64)> = pts.iter().map(|x| view.px(disk(model, x, false))).collect();
            cv.path(&px, true, "fill=\"#eef3fb\" stroke=\"black\" stroke-width=\"2\"");
            let k = poly.k();
            for (i, side) in data.chamber.sides.iter().enumerate() {
                let (a, b) = (poly.vertices[(i + k - 1) % k], poly.vertices[i]);
                let e = edge(model, &a, &b);
                let m = e[e.len() / 2];
                let label = format!("{}: {}", side.id, mark(side.id.clone()).unwrap_or_default());
                cv.text(view.px(disk(model, &m, false)), &label, 13.0);
            }
            for (i, corner) in data.chamber.corners.iter().enumerate() {
                let p = view.px(disk(model, &poly.vertices[i], false));
                cv.circle(p, 4.0, "fill=\"black\"");
                let label =
                    format!("{}: {} π/{}", corner.id, mark(corner.id.clone()).unwrap_or_default(), corner.order);
                cv.text((p.0, p.1 - 8.0), &label, 13.0);
            }
            cv.text(view.px(disk(model, &poly.center, false)), &data.graph.principal.to_string(), 14.0);
            Ok(cv.finish())
        }
    }
}

fn render_interval(data: &PolarData, length: Option<f64>) -> String {
    let mut cv = Canvas::new(SIZE);
    let (a, b) = ((60.0, SIZE / 2.0), (SIZE - 60.0, SIZE / 2.0));
    cv.path(&[a, b], false, "stroke=\"black\" stroke-width=\"2\" fill=\"none\"");
    for (p, side) in [a, b].into_iter().zip(&data.chamber.sides) {
        cv.circle(p, 5.0, "fill=\"black\"");
        let m = data.graph.faces.get(&side.id).map(|g| g.to_string()).unwrap_or_default();
        cv.text((p.0, p.1 + 24.0), &format!("{}: {m}", side.id), 13.0);
    }
    cv.text((SIZE / 2.0, SIZE / 2.0 - 14.0), &data.graph.principal.to_string(), 14.0);
    if let Some(l) = length {
        cv.text((SIZE / 2.0, SIZE / 2.0 + 24.0), &format!("length {l:.4}"), 12.0);
    }
    cv.finish()
}

fn tile_style(e: &Element) -> &'static str {
    if e.word.is_empty() {
        "fill=\"#f4c542\" stroke=\"black\" stroke-width=\"0.8\""
    } else if e.word.len() % 2 == 0 {
        "fill=\"#dde7f5\" stroke=\"#334\" stroke-width=\"0.5\""
    } else {
        "fill=\"#9fb7dc\" stroke=\"#334\" stroke-width=\"0.5\""
    }
}

/// Tiles g·C: two hemispheres for the sphere, the Poincaré disk, or the plane.
pub fn render_tiles(poly: &PolygonRealization, tiles: &[Element]) -> String {
    let model = poly.model;
    match model {
        Model::Sphere => {
            let mut cv = Canvas::new(2.0 * SIZE);
            let views = [View::fit(1.2, SIZE / 2.0), View::fit(1.2, 1.5 * SIZE)];
            for v in &views {
                cv.circle(v.px((0.0, 0.0)), v.scale, "fill=\"none\" stroke=\"#888\"");
            }
            for t in tiles {
                let south = (t.matrix * poly.center).z < 0.0;
                let view = views[usize::from(south)];
                let px: Vec<(f64, f64)> =
                    outline(poly, &t.matrix).iter().map(|x| view.px(disk(model, x, south))).collect();
                cv.path(&px, true, tile_style(t));
            }
            cv.text((SIZE / 2.0, 24.0), "z ≥ 0", 14.0);
            cv.text((1.5 * SIZE, 24.0), "z < 0", 14.0);
            cv.finish()
        }
        _ => {
            let pts: Vec<Vec<(f64, f64)>> =
                tiles.iter().map(|t| outline(poly, &t.matrix).iter().map(|x| model.to_disk(x)).collect()).collect();
            let radius = if model == Model::Hyperbolic {
                1.0
            } else {
                let (c0, c1) = model.to_disk(&poly.center);
                pts.iter().flatten().map(|(u, v)| (u - c0).hypot(v - c1)).fold(0.0, f64::max)
            };
            let mut view = View::fit(radius, SIZE / 2.0);
            if model == Model::Euclidean {
                let (c0, c1) = model.to_disk(&poly.center);
                view.cx -= c0 * view.scale;
                view.cy += c1 * view.scale;
            }
            let mut cv = Canvas::new(SIZE);
            if model == Model::Hyperbolic {
                cv.circle(view.px((0.0, 0.0)), view.scale, "fill=\"none\" stroke=\"#888\"");
            }
            for (t, p) in tiles.iter().zip(&pts) {
                let px: Vec<(f64, f64)> = p.iter().map(|x| view.px(*x)).collect();
                cv.path(&px, true, tile_style(t));
            }
            cv.finish()
        }
    }
}

/// Tiles within `radius` of the chamber center (all tiles for a spherical chamber).
pub fn render_development(data: &PolarData, radius: f64) -> Result<String> {
    match realize_chamber(&data.chamber)? {
        Realization::Interval { .. } => render_data(data),
        Realization::Polygon(poly) => {
            let tiles = if poly.model == Model::Sphere {
                crate::coxeter::develop(data, &crate::coxeter::DevelopOptions::default())?.elements
            } else {
                develop_ball(&poly, radius, 50 * MAX_TILES)?
            };
            if tiles.len() > MAX_TILES {
                return Err(Error::BudgetExhausted(MAX_TILES));
            }
            Ok(render_tiles(&poly, &tiles))
        }
    }
}

/// Unfolded billiard paths from p to the images of q over the tiling they cross.
pub fn render_billiard(cfg: &BilliardConfig, trajectories: &[BilliardTrajectory]) -> Result<String> {
    let Realization::Polygon(poly) = &cfg.realization else {
        return Err(Error::Unsupported("billiard pictures need a polygon chamber".into()));
    };
    let model = poly.model;
    let radius = if model == Model::Sphere { std::f64::consts::PI } else { cfg.l_max + poly.circumradius };
    let tiles = develop_ball(poly, radius, 50 * MAX_TILES)?;
    if tiles.len() > MAX_TILES {
        return Err(Error::BudgetExhausted(MAX_TILES));
    }
    let mut svg = render_tiles(poly, &tiles);
    let extent = match model {
        Model::Euclidean => {
            let (c0, c1) = model.to_disk(&poly.center);
            let r = tiles
                .iter()
                .flat_map(|t| outline(poly, &t.matrix))
                .map(|x| {
                    let (u, v) = model.to_disk(&x);
                    (u - c0).hypot(v - c1)
                })
                .fold(0.0, f64::max);
            (r, c0, c1)
        }
        _ => (if model == Model::Sphere { 1.2 } else { 1.0 }, 0.0, 0.0),
    };
    let mut view = View::fit(extent.0, SIZE / 2.0);
    view.cx -= extent.1 * view.scale;
    view.cy += extent.2 * view.scale;
    let mut cv = Canvas::new(SIZE);
    for t in trajectories {
        if t.length == 0.0 {
            continue;
        }
        let (w, len) = (t.direction, t.length);
        let n = 64;
        let mut seg: Vec<(f64, f64)> = Vec::new();
        for i in 0..=n {
            let x = model.geodesic(&t.start, &w, len * i as f64 / n as f64);
            if model == Model::Sphere && x.z < -0.6 {
                cv.path(&seg, false, "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\"");
                seg.clear();
                continue;
            }
            seg.push(view.px(model.to_disk(&x)));
        }
        cv.path(&seg, false, "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\"");
    }
    for (x, r) in [(&cfg.p, 3.5), (&cfg.q, 3.0)] {
        cv.circle(view.px(model.to_disk(x)), r, "fill=\"#c0392b\"");
    }
    let at = svg.rfind("</svg>").expect("closing tag");
    svg.insert_str(at, &cv.body);
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn figure1_development_has_48_tiles() {
        let svg = render_development(&corpus::figure1(), 0.0).unwrap();
        assert_eq!(svg.matches("<path").count(), 48);
        assert_eq!(svg, render_development(&corpus::figure1(), 0.0).unwrap());
    }

    #[test]
    fn square_grid_and_interval() {
        let svg = render_development(&corpus::figure4(0), 5.5).unwrap();
        // unit squares whose centers lie within 5.5 of the center
        let mut want = 0;
        for a in -6i32..=6 {
            for b in -6i32..=6 {
                if (a as f64).hypot(b as f64) <= 5.5 {
                    want += 1;
                }
            }
        }
        assert_eq!(svg.matches("<path").count(), want);
        let svg = render_data(&corpus::cp1_interval()).unwrap();
        assert!(svg.contains("e0:") && svg.contains("e1:"));
    }

    #[test]
    fn chamber_labels() {
        let svg = render_data(&corpus::figure3()).unwrap();
        assert!(svg.contains("c0: SO(4) π/6"));
        assert!(svg.contains("s1: O&apos;&apos;(2)") || svg.contains("s1: O''(2)"));
    }
}
