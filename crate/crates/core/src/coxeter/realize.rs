//! Metric realization of a chamber in its model space.

use super::model::{Model, Wall, M3, V3};
use crate::error::{Error, Result};
use crate::polar_data::{chamber_geometry, Chamber, Kappa};
use std::f64::consts::PI;

const CLOSURE_TOL: f64 = 1e-7;

/// A geodesic polygon placed in its model: corner i is `vertices[i]`, side i is `walls[i]`
/// (the chamber is where every wall functional is positive).
#[derive(Clone, Debug)]
pub struct PolygonRealization {
    pub model: Model,
    pub kappa: Kappa,
    pub vertices: Vec<V3>,
    pub walls: Vec<Wall>,
    pub reflections: Vec<M3>,
    pub side_lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub center: V3,
    /// Largest distance from `center` to a corner.
    pub circumradius: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Realization {
    Interval { kappa: Kappa, length: Option<f64> },
    Polygon(PolygonRealization),
}

impl Realization {
    pub fn polygon(&self) -> Option<&PolygonRealization> {
        match self {
            Realization::Polygon(p) => Some(p),
            Realization::Interval { .. } => None,
        }
    }

    pub fn warnings(&self) -> &[String] {
        match self {
            Realization::Polygon(p) => &p.warnings,
            Realization::Interval { .. } => &[],
        }
    }
}

impl PolygonRealization {
    pub fn k(&self) -> usize {
        self.walls.len()
    }

    /// Point from chart coordinates (gnomonic, plane or Klein).
    pub fn point(&self, u: f64, v: f64) -> Option<V3> {
        self.model.from_chart(u, v)
    }

    pub fn contains(&self, x: &V3, margin: f64) -> bool {
        self.walls.iter().all(|w| w.value(x) > margin)
    }

    /// Smallest distance from `x` to a wall of the chamber.
    pub fn wall_clearance(&self, x: &V3) -> f64 {
        self.walls.iter().map(|w| w.distance(self.model, x)).fold(f64::INFINITY, f64::min)
    }
}

/// Tangent lengths t_i at each corner of the tangential polygon with incircle radius r.
fn tangential_lengths(model: Model, angles: &[f64]) -> Result<Vec<f64>> {
    let half: Vec<f64> = angles.iter().map(|a| a / 2.0).collect();
    match model {
        Model::Euclidean => Ok(half.iter().map(|h| 1.0 / h.tan()).collect()),
        Model::Hyperbolic => {
            let f = |r: f64| -> f64 { half.iter().map(|h| (h.cos() / r.cosh()).min(1.0).asin()).sum::<f64>() - PI };
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            while f(hi) > 0.0 {
                hi *= 2.0;
                if hi > 100.0 {
                    return Err(Error::Realization("no incircle radius found".into()));
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            Ok(half.iter().map(|h| (r.tanh() / h.tan()).asinh()).collect())
        }
        Model::Sphere => {
            let rmax = half.iter().cloned().fold(f64::INFINITY, f64::min);
            let f = |r: f64| -> f64 { half.iter().map(|h| (h.cos() / r.cos()).min(1.0).asin()).sum::<f64>() - PI };
            if f(rmax) < -1e-12 {
                return Err(Error::Realization("spherical polygon has no incircle".into()));
            }
            let (mut lo, mut hi) = (0.0f64, rmax);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            Ok(half.iter().map(|h| (r.tan() / h.tan()).min(1.0).asin()).collect())
        }
    }
}

/// Walk the boundary: start at corner 0 at the origin heading along +x (side 1), turn left by
/// the exterior angle at each corner. Returns vertices, walls and the closing frame.
fn turtle(model: Model, lengths: &[f64], angles: &[f64]) -> (Vec<V3>, Vec<Wall>, M3) {
    let k = lengths.len();
    let h0 = V3::new(0.0, 1.0, 0.0);
    let mut frame = M3::identity();
    let mut vertices = vec![V3::zeros(); k];
    let mut walls = vec![Wall { h: h0 }; k];
    for step in 0..k {
        let corner = step;
        let side = (step + 1) % k;
        vertices[corner] = frame * model.origin();
        walls[side] = Wall { h: model.inverse(&frame).transpose() * h0 };
        frame = frame * model.translation_x(lengths[side]);
        let next = (corner + 1) % k;
        frame = frame * model.rotation(PI - angles[next]);
    }
    (vertices, walls, frame)
}

pub fn realize_chamber(chamber: &Chamber) -> Result<Realization> {
    let geom = chamber_geometry(chamber)?;
    if chamber.dimension == 1 {
        return Ok(Realization::Interval { kappa: geom.kappa, length: chamber.length });
    }
    let model = Model::from_kappa(geom.kappa);
    let k = chamber.k();
    let angles: Vec<f64> = chamber.corners.iter().map(|c| PI / c.order as f64).collect();
    let mut warnings = Vec::new();
    let given: Vec<Option<f64>> = chamber.sides.iter().map(|s| s.length).collect();
    let all_given = given.iter().all(Option::is_some);
    let any_given = given.iter().any(Option::is_some);
    let rigid = k == 3 && model != Model::Euclidean;

    let user_lengths = if all_given && !rigid && k >= 3 {
        Some(given.iter().map(|l| l.unwrap()).collect::<Vec<f64>>())
    } else {
        if rigid && any_given {
            warnings.push("side lengths of a curved triangle are fixed by its angles; supplied lengths ignored".into());
        } else if any_given {
            warnings.push("incomplete side lengths ignored; canonical realization used".into());
        }
        None
    };

    let lengths = match &user_lengths {
        Some(l) => l.clone(),
        None if k == 2 => {
            if model != Model::Sphere {
                return Err(Error::Realization("a biangle is only realizable on the sphere".into()));
            }
            vec![PI, PI]
        }
        None => {
            let t = tangential_lengths(model, &angles)?;
            let mut l: Vec<f64> = (0..k).map(|j| t[(j + k - 1) % k] + t[j]).collect();
            if model == Model::Euclidean {
                let s = l[1 % k];
                l.iter_mut().for_each(|x| *x /= s);
            }
            l
        }
    };

    let (mut vertices, mut walls, closing) = turtle(model, &lengths, &angles);
    let defect = (closing - M3::identity()).abs().max();
    if defect > CLOSURE_TOL {
        return Err(Error::Realization(format!(
            "polygon does not close: the product of side translations and corner rotations deviates from the identity by {defect:.3e}"
        )));
    }

    let center = if model == Model::Euclidean {
        vertices.iter().sum::<V3>() / k as f64
    } else if k == 2 {
        // lune: corners are antipodal, use the side midpoints
        let mid1 = model.translation_x(PI / 2.0) * model.origin();
        model.normalize_point(&(mid1 + lune_second_mid(model, &angles)))
    } else {
        let mut s: V3 = vertices.iter().sum();
        for j in 0..k {
            let (a, b) = ((j + k - 1) % k, j);
            s += model.normalize_point(&(vertices[a] + vertices[b]));
        }
        model.normalize_point(&s)
    };
    let center = if model == Model::Euclidean {
        center
    } else {
        let g = model.carry_origin_to(&center);
        let gi = model.inverse(&g);
        for v in vertices.iter_mut() {
            *v = gi * *v;
        }
        for w in walls.iter_mut() {
            *w = w.transformed(model, &gi);
        }
        model.origin()
    };
    let reflections = walls.iter().map(|w| w.reflection(model)).collect();
    let circumradius = vertices.iter().map(|v| model.distance(&center, v)).fold(0.0, f64::max);
    Ok(Realization::Polygon(PolygonRealization {
        model,
        kappa: geom.kappa,
        vertices,
        walls,
        reflections,
        side_lengths: lengths,
        angles,
        center,
        circumradius,
        warnings,
    }))
}

/// Midpoint of side 0 of the canonical lune (side 1 runs from the origin along +x).
fn lune_second_mid(model: Model, angles: &[f64]) -> V3 {
    let theta = angles[0];
    model.rotation(theta) * model.translation_x(PI / 2.0) * model.origin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar_data::DeclaredCurvature;

    fn poly(orders: &[u32]) -> PolygonRealization {
        match realize_chamber(&Chamber::polygon(DeclaredCurvature::Auto, orders)).unwrap() {
            Realization::Polygon(p) => p,
            _ => unreachable!(),
        }
    }

    /// Interior angle at corner i measured from the vertex coordinates alone.
    fn measured_angle(p: &PolygonRealization, i: usize) -> f64 {
        let k = p.k();
        let m = p.model;
        let v = p.vertices[i];
        let (a, _) = m.direction(&v, &p.vertices[(i + k - 1) % k]).unwrap();
        let (b, _) = m.direction(&v, &p.vertices[(i + 1) % k]).unwrap();
        (m.dot(&a, &b) / (m.dot(&a, &a) * m.dot(&b, &b)).sqrt()).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn spherical_triangle_excess() {
        let p = poly(&[4, 2, 3]);
        let sum: f64 = (0..3).map(|i| measured_angle(&p, i)).sum();
        assert!((sum - PI - PI / 12.0).abs() < 1e-9);
        for (i, order) in [4.0, 2.0, 3.0].iter().enumerate() {
            assert!((measured_angle(&p, i) - PI / order).abs() < 1e-9);
        }
        for (j, w) in p.walls.iter().enumerate() {
            let (a, b) = ((j + 2) % 3, j);
            assert!(w.value(&p.vertices[a]).abs() < 1e-9);
            assert!(w.value(&p.vertices[b]).abs() < 1e-9);
            assert!(w.value(&p.center) > 0.0);
        }
    }

    #[test]
    fn spherical_triangle_law_of_cosines() {
        // side opposite the π/2 corner via the angle law of cosines
        let p = poly(&[4, 2, 3]);
        let (a, b, c) = (PI / 4.0, PI / 2.0, PI / 3.0);
        let cos_side = (b.cos() + a.cos() * c.cos()) / (a.sin() * c.sin());
        // corner 1 (π/2) lies between sides 1 and 2; the opposite side is side 0
        assert!((p.side_lengths[0] - cos_side.acos()).abs() < 1e-9);
    }

    #[test]
    fn regular_right_angled_hexagon() {
        let p = poly(&[2; 6]);
        for l in &p.side_lengths {
            assert!((l.cosh() - 2.0).abs() < 1e-9, "cosh side = {}", l.cosh());
        }
        for i in 0..6 {
            assert!((measured_angle(&p, i) - PI / 2.0).abs() < 1e-9);
        }
        // area by triangulating from the center: each triangle has area π − (angle sum)
        let m = p.model;
        let mut area = 0.0;
        for i in 0..6 {
            let (a, b) = (p.vertices[i], p.vertices[(i + 1) % 6]);
            let ang = |x: &V3, y: &V3, z: &V3| {
                let (u, _) = m.direction(x, y).unwrap();
                let (v, _) = m.direction(x, z).unwrap();
                (m.dot(&u, &v)).clamp(-1.0, 1.0).acos()
            };
            area += PI - ang(&p.center, &a, &b) - ang(&a, &b, &p.center) - ang(&b, &p.center, &a);
        }
        assert!((area - PI).abs() < 1e-9);
    }

    #[test]
    fn flat_unit_square() {
        let p = poly(&[2; 4]);
        let want = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        for (v, w) in p.vertices.iter().zip(want) {
            assert!((v.x - w.0).abs() < 1e-12 && (v.y - w.1).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn lune_has_antipodal_corners() {
        let p = poly(&[3, 3]);
        assert!((p.vertices[0] + p.vertices[1]).norm() < 1e-9);
        assert!(p.contains(&p.center, 0.0));
        assert!((measured_angle_lune(&p) - PI / 3.0).abs() < 1e-9);
    }

    fn measured_angle_lune(p: &PolygonRealization) -> f64 {
        // angle between the two walls: inward normals meet at π − θ
        (-p.walls[0].h.normalize().dot(&p.walls[1].h.normalize())).acos()
    }

    #[test]
    fn user_lengths_checked_by_closure() {
        let mut c = Chamber::polygon(DeclaredCurvature::Auto, &[2; 4]);
        for (s, l) in c.sides.iter_mut().zip([2.0, 1.0, 2.0, 1.0]) {
            s.length = Some(l);
        }
        assert!(realize_chamber(&c).is_ok());
        c.sides[0].length = Some(3.0);
        assert!(matches!(realize_chamber(&c), Err(Error::Realization(_))));
    }

    #[test]
    fn curved_triangle_lengths_ignored_with_warning() {
        let mut c = Chamber::polygon(DeclaredCurvature::Auto, &[4, 2, 3]);
        c.sides[0].length = Some(5.0);
        let r = realize_chamber(&c).unwrap();
        assert_eq!(r.warnings().len(), 1);
    }
}
