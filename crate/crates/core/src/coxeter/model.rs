//! Constant-curvature model spaces with linear reflections: the unit sphere, the affine plane
//! in homogeneous coordinates, and the hyperboloid sheet.

use crate::polar_data::Kappa;
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

pub type V3 = Vector3<f64>;
pub type M3 = Matrix3<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Sphere,
    Euclidean,
    Hyperbolic,
}

impl Model {
    pub fn from_kappa(k: Kappa) -> Model {
        match k {
            Kappa::Positive => Model::Sphere,
            Kappa::Flat => Model::Euclidean,
            Kappa::Negative => Model::Hyperbolic,
        }
    }

    pub fn origin(self) -> V3 {
        V3::new(0.0, 0.0, 1.0)
    }

    /// Bilinear form for points and tangent vectors.
    pub fn dot(self, a: &V3, b: &V3) -> f64 {
        match self {
            Model::Sphere => a.dot(b),
            Model::Hyperbolic => a.x * b.x + a.y * b.y - a.z * b.z,
            Model::Euclidean => a.x * b.x + a.y * b.y,
        }
    }

    pub fn distance(self, a: &V3, b: &V3) -> f64 {
        match self {
            Model::Sphere => a.dot(b).clamp(-1.0, 1.0).acos(),
            Model::Hyperbolic => (-self.dot(a, b)).max(1.0).acosh(),
            Model::Euclidean => ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt(),
        }
    }

    /// Project a nearby vector back onto the model surface.
    pub fn normalize_point(self, x: &V3) -> V3 {
        match self {
            Model::Sphere => x.normalize(),
            Model::Hyperbolic => x / (-self.dot(x, x)).sqrt(),
            Model::Euclidean => x / x.z,
        }
    }

    pub fn normalize_tangent(self, v: &V3) -> V3 {
        v / self.dot(v, v).sqrt()
    }

    /// Point at distance `t` along the geodesic from `x` with unit tangent `v`.
    pub fn geodesic(self, x: &V3, v: &V3, t: f64) -> V3 {
        match self {
            Model::Sphere => x * t.cos() + v * t.sin(),
            Model::Hyperbolic => x * t.cosh() + v * t.sinh(),
            Model::Euclidean => x + v * t,
        }
    }

    pub fn geodesic_velocity(self, x: &V3, v: &V3, t: f64) -> V3 {
        match self {
            Model::Sphere => -x * t.sin() + v * t.cos(),
            Model::Hyperbolic => x * t.sinh() + v * t.cosh(),
            Model::Euclidean => *v,
        }
    }

    /// Unit tangent at `x` pointing along the geodesic to `y`, with the distance.
    pub fn direction(self, x: &V3, y: &V3) -> Option<(V3, f64)> {
        let d = self.distance(x, y);
        if d < 1e-15 {
            return None;
        }
        let w = match self {
            Model::Sphere => y - x * x.dot(y),
            Model::Hyperbolic => y + x * self.dot(x, y),
            Model::Euclidean => y - x,
        };
        if self.dot(&w, &w) <= 0.0 {
            return None;
        }
        Some((self.normalize_tangent(&w), d))
    }

    /// Orthonormal tangent frame at `x`.
    pub fn tangent_frame(self, x: &V3) -> (V3, V3) {
        let proj = |e: V3| match self {
            Model::Sphere => e - x * x.dot(&e),
            Model::Hyperbolic => e + x * self.dot(x, &e),
            Model::Euclidean => e,
        };
        let e1 = self.normalize_tangent(&proj(V3::x()));
        let mut e2 = proj(V3::y());
        e2 -= e1 * self.dot(&e1, &e2);
        (e1, self.normalize_tangent(&e2))
    }

    /// Translation by `d` along the x-axis through the origin.
    pub fn translation_x(self, d: f64) -> M3 {
        match self {
            Model::Sphere => {
                let (s, c) = d.sin_cos();
                M3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
            }
            Model::Hyperbolic => {
                let (s, c) = (d.sinh(), d.cosh());
                M3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c)
            }
            Model::Euclidean => M3::new(1.0, 0.0, d, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
        }
    }

    pub fn rotation(self, a: f64) -> M3 {
        let (s, c) = a.sin_cos();
        M3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
    }

    /// Isometry taking the origin to `x` (rotate, translate, rotate back).
    pub fn carry_origin_to(self, x: &V3) -> M3 {
        let o = self.origin();
        let (rho, beta) = match self {
            Model::Euclidean => {
                let r = (x.x * x.x + x.y * x.y).sqrt();
                (r, x.y.atan2(x.x))
            }
            _ => (self.distance(&o, x), x.y.atan2(x.x)),
        };
        self.rotation(beta) * self.translation_x(rho) * self.rotation(-beta)
    }

    pub fn inverse(self, g: &M3) -> M3 {
        match self {
            Model::Sphere => g.transpose(),
            Model::Hyperbolic => {
                let j = M3::from_diagonal(&V3::new(1.0, 1.0, -1.0));
                j * g.transpose() * j
            }
            Model::Euclidean => g.try_inverse().expect("affine isometries are invertible"),
        }
    }

    /// Defining identity residual: |MᵀM − I|, |MᵀJM − J| or the affine analogue.
    pub fn isometry_defect(self, g: &M3) -> f64 {
        match self {
            Model::Sphere => (g.transpose() * g - M3::identity()).abs().max(),
            Model::Hyperbolic => {
                let j = M3::from_diagonal(&V3::new(1.0, 1.0, -1.0));
                (g.transpose() * j * g - j).abs().max()
            }
            Model::Euclidean => {
                let lin = g.fixed_view::<2, 2>(0, 0).into_owned();
                let d = (lin.transpose() * lin - nalgebra::Matrix2::identity()).abs().max();
                d.max(g[(2, 0)].abs()).max(g[(2, 1)].abs()).max((g[(2, 2)] - 1.0).abs())
            }
        }
    }

    /// Planar chart: gnomonic (sphere, z > 0), Klein (hyperbolic), identity (plane).
    pub fn to_chart(self, x: &V3) -> (f64, f64) {
        (x.x / x.z, x.y / x.z)
    }

    pub fn from_chart(self, u: f64, v: f64) -> Option<V3> {
        match self {
            Model::Sphere => Some(V3::new(u, v, 1.0).normalize()),
            Model::Hyperbolic => {
                let r2 = u * u + v * v;
                (r2 < 1.0).then(|| V3::new(u, v, 1.0) / (1.0 - r2).sqrt())
            }
            Model::Euclidean => Some(V3::new(u, v, 1.0)),
        }
    }

    /// Conformal disk picture: stereographic (sphere), Poincaré (hyperbolic), identity (plane).
    pub fn to_disk(self, x: &V3) -> (f64, f64) {
        match self {
            Model::Euclidean => (x.x, x.y),
            _ => (x.x / (1.0 + x.z), x.y / (1.0 + x.z)),
        }
    }
}

/// A reflecting line given by the linear functional `h`; the chamber side is `h·x > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wall {
    pub h: V3,
}

impl Wall {
    pub fn value(&self, x: &V3) -> f64 {
        self.h.dot(x)
    }

    /// Dual normal u with reflection x ↦ x − 2 (h·x) u.
    fn dual(&self, model: Model) -> V3 {
        match model {
            Model::Sphere => self.h,
            Model::Hyperbolic => V3::new(self.h.x, self.h.y, -self.h.z),
            Model::Euclidean => V3::new(self.h.x, self.h.y, 0.0),
        }
    }

    pub fn reflection(&self, model: Model) -> M3 {
        M3::identity() - 2.0 * self.dual(model) * self.h.transpose()
    }

    pub fn distance(&self, model: Model, x: &V3) -> f64 {
        let v = self.value(x).abs();
        match model {
            Model::Sphere => v.min(1.0).asin(),
            Model::Hyperbolic => v.asinh(),
            Model::Euclidean => v,
        }
    }

    /// Image of the wall under the isometry `g`.
    pub fn transformed(&self, model: Model, g: &M3) -> Wall {
        Wall { h: model.inverse(g).transpose() * self.h }
    }
}
