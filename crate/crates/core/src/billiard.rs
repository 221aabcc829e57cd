//! Billiard geodesics in a chamber: enumeration by unfolding, Morse indices from face
//! codimensions, counting series and growth classification, plus a ray-shooting oracle.

use crate::coxeter::develop::{walk_ball, word_matrix, DescentTree};
use crate::coxeter::{develop, DevelopOptions, Model, PolygonRealization, Realization, M3, V3};
use crate::error::{Error, Result};
use crate::polar_data::{Kappa, PolarData};
use num_integer::Integer;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

pub const DEFAULT_DELTA: f64 = 1e-6;
pub const DEFAULT_MAX_NODES: usize = 50_000_000;

#[derive(Clone, Debug)]
pub struct BilliardConfig {
    pub realization: Realization,
    /// Start and target; for intervals the position is the x coordinate.
    pub p: V3,
    pub q: V3,
    pub l_max: f64,
    pub codims: Vec<u32>,
    pub nu: u32,
    pub delta: f64,
    pub max_nodes: usize,
}

impl BilliardConfig {
    /// Points are chart coordinates of the realized chamber (plane, gnomonic or Klein); for an
    /// interval only the first coordinate, the position in [0, length], is used.
    pub fn new(data: &PolarData, p: [f64; 2], q: [f64; 2], l_max: f64, codims: Vec<u32>) -> Result<Self> {
        let realization = crate::coxeter::realize_chamber(&data.chamber)?;
        let (pp, qq) = match &realization {
            Realization::Interval { .. } => (V3::new(p[0], 0.0, 1.0), V3::new(q[0], 0.0, 1.0)),
            Realization::Polygon(poly) => {
                let pt = |c: [f64; 2]| {
                    poly.point(c[0], c[1]).ok_or_else(|| Error::InvalidConfig(format!("{c:?} is outside the model")))
                };
                (pt(p)?, pt(q)?)
            }
        };
        let nu = match &realization {
            Realization::Interval { .. } => 0,
            Realization::Polygon(_) => 1,
        };
        let cfg = BilliardConfig {
            realization,
            p: pp,
            q: qq,
            l_max,
            codims,
            nu,
            delta: DEFAULT_DELTA,
            max_nodes: DEFAULT_MAX_NODES,
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_nu(mut self, nu: u32) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = delta;
        self.check()?;
        Ok(self)
    }

    pub fn kappa(&self) -> Kappa {
        match &self.realization {
            Realization::Interval { kappa, .. } => *kappa,
            Realization::Polygon(p) => p.kappa,
        }
    }

    fn faces(&self) -> usize {
        match &self.realization {
            Realization::Interval { .. } => 2,
            Realization::Polygon(p) => p.k(),
        }
    }

    fn interval_length(&self) -> Result<f64> {
        match &self.realization {
            Realization::Interval { length: Some(l), .. } => Ok(*l),
            Realization::Interval { length: None, .. } => {
                Err(Error::InvalidConfig("interval billiards need a chamber length".into()))
            }
            Realization::Polygon(_) => Err(Error::Internal("not an interval".into())),
        }
    }

    fn check(&self) -> Result<()> {
        if self.codims.len() != self.faces() {
            return Err(Error::InvalidConfig(format!("{} codims for {} faces", self.codims.len(), self.faces())));
        }
        if let Some(c) = self.codims.iter().find(|&&c| c < 2) {
            return Err(Error::InvalidConfig(format!("face codimension {c} < 2")));
        }
        if !(self.l_max >= 0.0) || !(self.delta > 0.0) {
            return Err(Error::InvalidConfig("length bound and δ must be non-negative".into()));
        }
        match &self.realization {
            Realization::Interval { .. } => {
                let l = self.interval_length()?;
                for (name, x) in [("p", self.p.x), ("q", self.q.x)] {
                    if !(x > self.delta && x < l - self.delta) {
                        return Err(Error::NonGeneric(format!("{name} = {x} within δ of an endpoint")));
                    }
                }
            }
            Realization::Polygon(poly) => {
                for (name, x) in [("p", &self.p), ("q", &self.q)] {
                    if !poly.contains(x, 0.0) || poly.wall_clearance(x) <= self.delta {
                        return Err(Error::NonGeneric(format!("{name} is not at distance > δ from every wall")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilliardTrajectory {
    pub word: Vec<usize>,
    pub length: f64,
    pub index: u32,
    pub start: V3,
    /// Unit tangent at the start.
    pub direction: V3,
    /// Endpoint in the development (the image g·q).
    pub end: V3,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub trajectories: Vec<BilliardTrajectory>,
    /// Trajectories passing within δ of a corner.
    pub rejected: usize,
}

impl Enumeration {
    pub fn hint(&self) -> Option<String> {
        (self.rejected > 0).then(|| {
            format!("{} trajectories pass within δ of a corner; perturb p or q to resolve them", self.rejected)
        })
    }
}

pub fn morse_index(word: &[usize], length: f64, cfg: &BilliardConfig) -> u32 {
    let crossings: u32 = word.iter().map(|&s| cfg.codims[s] - 1).sum();
    let conjugate = if cfg.kappa() == Kappa::Positive {
        // j ≥ 1 with jπ strictly inside the arc
        let mut j = 0u32;
        while f64::from(j + 1) * PI < length {
            j += 1;
        }
        cfg.nu * j
    } else {
        0
    };
    crossings + conjugate
}

fn canonical_sort(ts: &mut [BilliardTrajectory]) {
    // lengths agreeing to 1e-9 count as ties
    let key = |t: &BilliardTrajectory| (t.length * 1e9).round() as i64;
    ts.sort_by(|a, b| {
        key(a).cmp(&key(b)).then_with(|| a.word.len().cmp(&b.word.len())).then_with(|| a.word.cmp(&b.word))
    });
}

/// Smallest τ > after at which a·C(τ) + b·S(τ) crosses zero downwards.
fn exit_root(model: Model, a: f64, b: f64, after: f64) -> Option<f64> {
    const EPS: f64 = 1e-12;
    match model {
        Model::Sphere => {
            let r = a.hypot(b);
            if r < 1e-300 {
                return None;
            }
            let mut t = b.atan2(a) + PI / 2.0;
            let period = 2.0 * PI;
            t -= period * ((t - after - EPS) / period).floor();
            if t <= after + EPS {
                t += period;
            }
            Some(t)
        }
        Model::Hyperbolic => {
            if b >= 0.0 || a.abs() >= b.abs() {
                return None;
            }
            let t = (-a / b).atanh();
            (t > after + EPS).then_some(t)
        }
        Model::Euclidean => {
            if b >= 0.0 {
                return None;
            }
            let t = -a / b;
            (t > after + EPS).then_some(t)
        }
    }
}

enum Trace {
    Word(Vec<usize>),
    Corner,
}

/// Follow the geodesic from p with unit tangent w for length `len` across the tiling,
/// recording walls in crossing order. `m` is the inverse of the current tile's element.
fn trace(poly: &PolygonRealization, p: &V3, w: &V3, len: f64, delta: f64) -> Result<Trace> {
    let model = poly.model;
    let k = poly.k();
    let mut m = M3::identity();
    let mut t = 0.0;
    let mut word = Vec::new();
    loop {
        let (mp, mw) = (m * p, m * w);
        let mut best: Option<(f64, usize)> = None;
        for s in 0..k {
            let h = &poly.walls[s].h;
            if let Some(r) = exit_root(model, h.dot(&mp), h.dot(&mw), t) {
                if best.is_none_or(|(b, _)| r < b) {
                    best = Some((r, s));
                }
            }
        }
        let Some((r, s)) = best else {
            return Err(Error::Internal("geodesic never leaves the tile".into()));
        };
        if r >= len {
            let end = model.normalize_point(&(m * model.geodesic(p, w, len)));
            if !poly.contains(&end, -1e-7) {
                return Err(Error::Internal("trace ended outside the chamber".into()));
            }
            return Ok(Trace::Word(word));
        }
        let y = model.normalize_point(&(m * model.geodesic(p, w, r)));
        let (c0, c1) = ((s + k - 1) % k, s);
        if model.distance(&y, &poly.vertices[c0]) < delta || model.distance(&y, &poly.vertices[c1]) < delta {
            return Ok(Trace::Corner);
        }
        word.push(s);
        m = poly.reflections[s] * m;
        t = r;
    }
}

fn trajectory_from(
    cfg: &BilliardConfig,
    poly: &PolygonRealization,
    w: &V3,
    len: f64,
    end: V3,
    out: &mut Vec<BilliardTrajectory>,
    rejected: &mut usize,
) -> Result<()> {
    match trace(poly, &cfg.p, w, len, cfg.delta)? {
        Trace::Corner => *rejected += 1,
        Trace::Word(word) => {
            let index = morse_index(&word, len, cfg);
            out.push(BilliardTrajectory { word, length: len, index, start: cfg.p, direction: *w, end });
        }
    }
    Ok(())
}

/// Every billiard trajectory from p to q of length ≤ l_max, in canonical order.
pub fn unfold_enumerate(cfg: &BilliardConfig) -> Result<Enumeration> {
    cfg.check()?;
    let poly = match &cfg.realization {
        Realization::Interval { .. } => return enumerate_interval(cfg),
        Realization::Polygon(p) => p,
    };
    let model = poly.model;
    let mut out = Vec::new();
    let mut rejected = 0;
    if model == Model::Sphere {
        for g in spherical_group(poly)? {
            let x = g * cfg.q;
            let Some((w, d)) = model.direction(&cfg.p, &x) else {
                return Err(Error::NonGeneric("q has an image at p".into()));
            };
            if PI - d < 1e-9 {
                return Err(Error::NonGeneric("q has an image antipodal to p".into()));
            }
            let mut j = 0.0;
            while d + 2.0 * PI * j <= cfg.l_max {
                trajectory_from(cfg, poly, &w, d + 2.0 * PI * j, x, &mut out, &mut rejected)?;
                j += 1.0;
            }
            let mut j = 0.0;
            while 2.0 * PI - d + 2.0 * PI * j <= cfg.l_max {
                trajectory_from(cfg, poly, &-w, 2.0 * PI - d + 2.0 * PI * j, x, &mut out, &mut rejected)?;
                j += 1.0;
            }
        }
    } else {
        let tree = DescentTree::new(poly, cfg.p);
        let mut hits: Vec<Vec<usize>> = Vec::new();
        walk_ball(&tree, cfg.l_max, cfg.max_nodes, |word, node| {
            if tree.distance_to_image(node, &cfg.q) <= cfg.l_max {
                hits.push(word.to_vec());
            }
            true
        })?;
        for word in hits {
            let g = word_matrix(poly, &word);
            let x = model.normalize_point(&(g * cfg.q));
            let Some((w, d)) = model.direction(&cfg.p, &x) else {
                if word.is_empty() {
                    // p = q: the constant path
                    out.push(BilliardTrajectory {
                        word,
                        length: 0.0,
                        index: 0,
                        start: cfg.p,
                        direction: V3::zeros(),
                        end: x,
                    });
                    continue;
                }
                return Err(Error::NonGeneric("q has an image at p".into()));
            };
            trajectory_from(cfg, poly, &w, d, x, &mut out, &mut rejected)?;
        }
    }
    canonical_sort(&mut out);
    Ok(Enumeration { trajectories: out, rejected })
}

fn spherical_group(poly: &PolygonRealization) -> Result<Vec<M3>> {
    let mut elems: Vec<M3> = vec![M3::identity()];
    let mut head = 0;
    while head < elems.len() {
        for r in &poly.reflections {
            let m = elems[head] * r;
            if !elems.iter().any(|e| (e - m).abs().max() < 1e-7) {
                if elems.len() > 100_000 {
                    return Err(Error::BudgetExhausted(100_000));
                }
                elems.push(m);
            }
        }
        head += 1;
    }
    Ok(elems)
}

fn interval_images(cfg: &BilliardConfig) -> Result<Vec<(f64, Vec<usize>)>> {
    let l = cfg.interval_length()?;
    let (p, q) = (cfg.p.x, cfg.q.x);
    let jmax = ((cfg.l_max + p) / (2.0 * l)).ceil() as i64 + 1;
    let mut out = Vec::new();
    for j in -jmax..=jmax {
        for x in [2.0 * j as f64 * l + q, 2.0 * j as f64 * l - q] {
            let len = (x - p).abs();
            if len > cfg.l_max {
                continue;
            }
            // reflection points m·l strictly between p and x, in travel order
            let (lo, hi) = (p.min(x), p.max(x));
            let mut ms: Vec<i64> = ((lo / l).floor() as i64 + 1..=(hi / l).ceil() as i64 - 1)
                .filter(|&m| (m as f64) * l > lo && (m as f64) * l < hi)
                .collect();
            if x < p {
                ms.reverse();
            }
            let word = ms.iter().map(|m| m.rem_euclid(2) as usize).collect();
            out.push((x - p, word));
        }
    }
    Ok(out)
}

fn enumerate_interval(cfg: &BilliardConfig) -> Result<Enumeration> {
    let mut out: Vec<BilliardTrajectory> = interval_images(cfg)?
        .into_iter()
        .map(|(disp, word)| {
            let len = disp.abs();
            let index = morse_index(&word, len, cfg);
            let end = V3::new(cfg.p.x + disp, 0.0, 1.0);
            let direction = V3::new(if disp < 0.0 { -1.0 } else { 1.0 }, 0.0, 0.0);
            BilliardTrajectory { word, length: len, index, start: cfg.p, direction, end }
        })
        .collect();
    canonical_sort(&mut out);
    Ok(Enumeration { trajectories: out, rejected: 0 })
}

/// N(L) for each requested L without tracing words (corner passages are not separated out).
pub fn count_trajectories(cfg: &BilliardConfig, lengths: &[f64]) -> Result<Vec<usize>> {
    let mut sorted: Vec<f64> = lengths.to_vec();
    sorted.sort_by(f64::total_cmp);
    let l_max = sorted.last().copied().unwrap_or(0.0);
    // buckets[i] counts lengths in (sorted[i-1], sorted[i]]
    let mut buckets = vec![0usize; sorted.len() + 1];
    let mut add = |d: f64| buckets[sorted.partition_point(|l| *l < d)] += 1;
    match &cfg.realization {
        Realization::Interval { .. } => {
            let c = BilliardConfig { l_max, ..cfg.clone() };
            interval_images(&c)?.into_iter().for_each(|(d, _)| add(d.abs()));
        }
        Realization::Polygon(poly) if poly.model == Model::Sphere => {
            for g in spherical_group(poly)? {
                let d = poly.model.distance(&cfg.p, &(g * cfg.q));
                let mut j = 0.0;
                while d + 2.0 * PI * j <= l_max {
                    add(d + 2.0 * PI * j);
                    j += 1.0;
                }
                let mut j = 0.0;
                while 2.0 * PI - d + 2.0 * PI * j <= l_max {
                    add(2.0 * PI - d + 2.0 * PI * j);
                    j += 1.0;
                }
            }
        }
        Realization::Polygon(poly) => {
            let tree = DescentTree::new(poly, cfg.p);
            walk_ball(&tree, l_max, cfg.max_nodes, |_, node| {
                let d = tree.distance_to_image(node, &cfg.q);
                if d <= l_max {
                    add(d);
                }
                true
            })?;
        }
    }
    let mut acc = 0;
    let cumulative: Vec<usize> = buckets[..sorted.len()]
        .iter()
        .map(|b| {
            acc += b;
            acc
        })
        .collect();
    Ok(lengths.iter().map(|l| cumulative[sorted.partition_point(|x| x < l)]).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseSeries {
    pub histogram: BTreeMap<u32, usize>,
    /// Sorted trajectory lengths; N(L) is the number of entries ≤ L.
    pub lengths: Vec<f64>,
    pub gap: u32,
    pub lacunary: bool,
}

impl MorseSeries {
    pub fn count(&self, l: f64) -> usize {
        self.lengths.partition_point(|d| *d <= l)
    }

    /// N(L) at `n` evenly spaced lengths in [lo, hi].
    pub fn samples(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, usize)> {
        (0..n)
            .map(|i| {
                let l = if n == 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                (l, self.count(l))
            })
            .collect()
    }

    /// With the lacunary flag the counts are Betti numbers of the path space; otherwise they
    /// bound them from above.
    pub fn counts_are_betti(&self) -> bool {
        self.lacunary
    }

    pub fn growth(&self, lo: f64, hi: f64, n: usize) -> Result<Growth> {
        growth_classify(&self.samples(lo, hi, n))
    }
}

impl fmt::Display for MorseSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in &self.histogram {
            writeln!(f, "index {i}: {n}")?;
        }
        writeln!(f, "gap = {}", self.gap)?;
        writeln!(f, "lacunary = {}", self.lacunary)
    }
}

pub fn morse_series(trajectories: &[BilliardTrajectory], cfg: &BilliardConfig) -> MorseSeries {
    let mut histogram = BTreeMap::new();
    for t in trajectories {
        *histogram.entry(t.index).or_insert(0) += 1;
    }
    let mut gap = cfg.codims.iter().fold(0u32, |g, c| g.gcd(&(c - 1)));
    if cfg.kappa() == Kappa::Positive && cfg.nu > 0 {
        gap = gap.gcd(&cfg.nu);
    }
    let lacunary = gap >= 2 && histogram.keys().all(|i| i % gap == 0);
    let mut lengths: Vec<f64> = trajectories.iter().map(|t| t.length).collect();
    lengths.sort_by(f64::total_cmp);
    MorseSeries { histogram, lengths, gap, lacunary }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rss: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthKind {
    Polynomial { degree: f64 },
    Exponential { rate: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Growth {
    pub kind: GrowthKind,
    /// log N against log L.
    pub power_fit: LineFit,
    /// log N against L.
    pub exp_fit: LineFit,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GrowthKind::Polynomial { degree } => writeln!(f, "polynomial, degree {degree:.3}")?,
            GrowthKind::Exponential { rate } => writeln!(f, "exponential, rate {rate:.3}")?,
        }
        writeln!(f, "log-log fit: slope {:.4}, rss {:.3e}", self.power_fit.slope, self.power_fit.rss)?;
        writeln!(f, "log-linear fit: slope {:.4}, rss {:.3e}", self.exp_fit.slope, self.exp_fit.rss)
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    LineFit { slope, intercept, rss }
}

/// Compare log N ~ d·log L with log N ~ r·L over samples (L, N(L)); zero counts are skipped.
pub fn growth_classify(samples: &[(f64, usize)]) -> Result<Growth> {
    let pts: Vec<(f64, f64)> =
        samples.iter().filter(|(l, n)| *n > 0 && *l > 0.0).map(|(l, n)| (*l, *n as f64)).collect();
    if pts.len() < 10 {
        return Err(Error::TooFewSamples(pts.len()));
    }
    let logn: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let logl: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ls: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let power_fit = least_squares(&logl, &logn);
    let exp_fit = least_squares(&ls, &logn);
    let kind = if power_fit.rss <= exp_fit.rss {
        GrowthKind::Polynomial { degree: power_fit.slope }
    } else {
        GrowthKind::Exponential { rate: exp_fit.slope }
    };
    Ok(Growth { kind, power_fit, exp_fit })
}

/// Text table: header lines, then `word<TAB>length<TAB>index` per trajectory.
pub fn trajectory_table(e: &Enumeration, cfg: &BilliardConfig) -> String {
    let mut out = String::from("# polaris billiard v1\n");
    let model = match &cfg.realization {
        Realization::Interval { .. } => "interval".to_string(),
        Realization::Polygon(p) => format!("{:?}", p.model).to_lowercase(),
    };
    out.push_str(&format!(
        "# model {model}\n# lmax {}\n# count {}\n# rejected {}\n",
        cfg.l_max,
        e.trajectories.len(),
        e.rejected
    ));
    for t in &e.trajectories {
        out.push_str(&format!("{}\t{:.9}\t{}\n", crate::coxeter::develop::format_word(&t.word), t.length, t.index));
    }
    out
}

/// Ray-shooting oracle: reflect rays inside the chamber for directions on an angular grid,
/// refine hits on q by bisection and subdivide cells whose bounce sequences differ.
pub mod oracle {
    use super::*;

    struct Segment {
        x: V3,
        w: V3,
        len: f64,
        before: f64,
    }

    struct Ray {
        bounces: Vec<usize>,
        segments: Vec<Segment>,
        corner: bool,
    }

    fn lorentz(model: Model, a: &V3, b: &V3) -> f64 {
        model.dot(a, b)
    }

    /// Parameter along the geodesic (x, w) of the point where it meets the line {h·y = 0},
    /// found by intersecting the two lines as projective duals.
    fn line_meet(model: Model, x: &V3, w: &V3, h: &V3) -> [Option<f64>; 2] {
        let n = x.cross(w);
        let pt = n.cross(h);
        match model {
            Model::Sphere => {
                if pt.norm() < 1e-300 {
                    return [None, None];
                }
                let pt = pt.normalize();
                let t = |c: V3| {
                    let t = c.dot(w).atan2(c.dot(x));
                    Some(if t < 0.0 { t + 2.0 * PI } else { t })
                };
                [t(pt), t(-pt)]
            }
            Model::Hyperbolic => {
                let norm = -lorentz(model, &pt, &pt);
                if norm <= 0.0 {
                    return [None, None];
                }
                let mut c = pt / norm.sqrt();
                if c.z < 0.0 {
                    c = -c;
                }
                let ratio = lorentz(model, &c, w) / -lorentz(model, &c, x);
                if ratio.abs() >= 1.0 {
                    return [None, None];
                }
                [Some(ratio.atanh()), None]
            }
            Model::Euclidean => {
                if pt.z.abs() < 1e-300 {
                    return [None, None];
                }
                let c = pt / pt.z;
                [Some((c - x).dot(w)), None]
            }
        }
    }

    fn shoot(poly: &PolygonRealization, p: &V3, w0: &V3, l_max: f64, delta: f64) -> Ray {
        let model = poly.model;
        let k = poly.k();
        let (mut x, mut w) = (*p, *w0);
        let mut total = 0.0;
        let mut last: Option<usize> = None;
        let mut ray = Ray { bounces: vec![], segments: vec![], corner: false };
        loop {
            let mut best: Option<(f64, usize)> = None;
            for s in 0..k {
                let h = &poly.walls[s].h;
                for t in line_meet(model, &x, &w, h).into_iter().flatten() {
                    let floor = if Some(s) == last { 1e-9 } else { 1e-13 };
                    if t <= floor {
                        continue;
                    }
                    // leaving the chamber through this wall
                    if h.dot(&model.geodesic_velocity(&x, &w, t)) >= 0.0 {
                        continue;
                    }
                    if best.is_none_or(|(b, _)| t < b) {
                        best = Some((t, s));
                    }
                }
            }
            let Some((t, s)) = best else {
                ray.segments.push(Segment { x, w, len: l_max - total, before: total });
                return ray;
            };
            if total + t >= l_max {
                ray.segments.push(Segment { x, w, len: l_max - total, before: total });
                return ray;
            }
            ray.segments.push(Segment { x, w, len: t, before: total });
            let y = model.normalize_point(&model.geodesic(&x, &w, t));
            let v = model.geodesic_velocity(&x, &w, t);
            let (c0, c1) = ((s + k - 1) % k, s);
            if model.distance(&y, &poly.vertices[c0]) < delta || model.distance(&y, &poly.vertices[c1]) < delta {
                ray.corner = true;
            }
            let r = &poly.reflections[s];
            x = model.normalize_point(&(r * y));
            let v = r * v;
            // project back to the tangent space before renormalizing
            let v = match model {
                Model::Sphere => v - x * x.dot(&v),
                Model::Hyperbolic => v + x * model.dot(&x, &v),
                Model::Euclidean => V3::new(v.x, v.y, 0.0),
            };
            w = model.normalize_tangent(&v);
            total += t;
            last = Some(s);
            ray.bounces.push(s);
        }
    }

    /// Signed side of q relative to the segment's geodesic, and the parameter of the foot point.
    fn offset(model: Model, seg: &Segment, q: &V3) -> (f64, f64) {
        let n = seg.x.cross(&seg.w);
        let side = n.dot(q);
        let tq = match model {
            Model::Sphere => seg.w.dot(q).atan2(seg.x.dot(q)),
            Model::Hyperbolic => (model.dot(q, &seg.w) / -model.dot(q, &seg.x)).clamp(-1.0, 1.0).atanh(),
            Model::Euclidean => (q - seg.x).dot(&seg.w),
        };
        (side, tq)
    }

    fn distance_to_segment(model: Model, seg: &Segment, q: &V3) -> f64 {
        let (_, tq) = offset(model, seg, q);
        let mut d = model.distance(&seg.x, q).min(model.distance(&model.geodesic(&seg.x, &seg.w, seg.len), q));
        if tq > 0.0 && tq < seg.len {
            d = d.min(model.distance(&model.geodesic(&seg.x, &seg.w, tq), q));
        }
        d
    }

    pub struct OracleResult {
        pub trajectories: Vec<BilliardTrajectory>,
        pub rejected: usize,
        /// Cells that hit the angular resolution limit while bounce sequences still differed.
        pub unresolved: usize,
    }

    struct Ctx<'a> {
        cfg: &'a BilliardConfig,
        poly: &'a PolygonRealization,
        e1: V3,
        e2: V3,
        found: Vec<(Vec<usize>, f64, bool, V3)>,
        unresolved: usize,
        min_width: f64,
        spread: f64,
    }

    impl Ctx<'_> {
        fn dir(&self, th: f64) -> V3 {
            self.e1 * th.cos() + self.e2 * th.sin()
        }

        fn ray(&self, th: f64) -> Ray {
            shoot(self.poly, &self.cfg.p, &self.dir(th), self.cfg.l_max, self.cfg.delta)
        }

        fn refine(&mut self, mut a: f64, mut b: f64, j: usize, sa: f64) {
            let prefix = self.ray(a).bounces[..j].to_vec();
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let r = self.ray(m);
                if r.bounces.len() < j || r.bounces[..j] != prefix[..] {
                    return;
                }
                let (s, _) = offset(self.poly.model, &r.segments[j], &self.cfg.q);
                if (s > 0.0) == (sa > 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            let th = 0.5 * (a + b);
            let r = self.ray(th);
            if r.bounces.len() < j || r.bounces[..j] != prefix[..] {
                return;
            }
            let seg = &r.segments[j];
            let (_, tq) = offset(self.poly.model, seg, &self.cfg.q);
            if tq < 0.0 || tq > seg.len {
                return;
            }
            let model = self.poly.model;
            let hit = model.geodesic(&seg.x, &seg.w, tq);
            if model.distance(&hit, &self.cfg.q) > 1e-7 {
                return;
            }
            let length = seg.before + tq;
            if length > self.cfg.l_max {
                return;
            }
            let corner = r.corner && {
                // only bounces before the hit count
                let upto = shoot(self.poly, &self.cfg.p, &self.dir(th), length, self.cfg.delta);
                upto.corner
            };
            let direction = self.dir(th);
            self.found.push((prefix, length, corner, direction));
        }

        fn cell(&mut self, a: f64, b: f64, ra: &Ray, rb: &Ray, min_j: usize) {
            let common = ra.bounces.iter().zip(&rb.bounces).take_while(|(x, y)| x == y).count();
            let top = common.min(ra.segments.len() - 1).min(rb.segments.len() - 1);
            for j in min_j..=top {
                let (sa, _) = offset(self.poly.model, &ra.segments[j], &self.cfg.q);
                let (sb, _) = offset(self.poly.model, &rb.segments[j], &self.cfg.q);
                if (sa > 0.0) != (sb > 0.0) {
                    self.refine(a, b, j, sa);
                }
            }
            let same = ra.bounces == rb.bounces;
            if same {
                return;
            }
            // folding is 1-Lipschitz, so every ray of the cell stays within width·spread of ra
            let reach = (b - a) * self.spread * 1.05 + 1e-12;
            if ra.segments.iter().all(|seg| distance_to_segment(self.poly.model, seg, &self.cfg.q) > reach) {
                return;
            }
            if b - a < self.min_width {
                self.unresolved += 1;
                return;
            }
            let m = 0.5 * (a + b);
            let rm = self.ray(m);
            self.cell(a, m, ra, &rm, top + 1);
            self.cell(m, b, &rm, rb, top + 1);
        }
    }

    pub fn shooting_oracle(cfg: &BilliardConfig, grid: usize) -> Result<OracleResult> {
        let Realization::Polygon(poly) = &cfg.realization else {
            return Err(Error::Unsupported("the shooting oracle needs a polygon".into()));
        };
        let (e1, e2) = poly.model.tangent_frame(&cfg.p);
        // below this width every ray of a cell stays within δ/10 of its neighbours up to
        // length l_max, so a straddled corner is passed within δ
        let spread = match poly.model {
            Model::Sphere => 1.0,
            Model::Euclidean => cfg.l_max.max(1.0),
            Model::Hyperbolic => cfg.l_max.sinh().max(1.0),
        };
        let min_width = (cfg.delta / (10.0 * spread)).max(1e-14);
        let mut ctx = Ctx { cfg, poly, e1, e2, found: vec![], unresolved: 0, min_width, spread };
        let n = grid.max(2);
        let thetas: Vec<f64> = (0..=n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let mut prev = ctx.ray(thetas[0]);
        for i in 0..n {
            let next = ctx.ray(thetas[i + 1]);
            ctx.cell(thetas[i], thetas[i + 1], &prev, &next, 0);
            prev = next;
        }
        let mut found = std::mem::take(&mut ctx.found);
        found.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        found.dedup_by(|a, b| a.0 == b.0 && (a.1 - b.1).abs() < 1e-9);
        let mut rejected = 0;
        let mut trajectories = Vec::new();
        for (word, length, corner, direction) in found {
            if corner {
                rejected += 1;
                continue;
            }
            let index = morse_index(&word, length, cfg);
            let end = poly.model.geodesic(&cfg.p, &direction, length);
            trajectories.push(BilliardTrajectory { word, length, index, start: cfg.p, direction, end });
        }
        canonical_sort(&mut trajectories);
        Ok(OracleResult { trajectories, rejected, unresolved: ctx.unresolved })
    }
}

pub use oracle::{shooting_oracle, OracleResult};

/// Coxeter order check used by callers that want a finite development alongside billiards.
pub fn spherical_order(data: &PolarData) -> Result<Option<usize>> {
    Ok(develop(data, &DevelopOptions::default())?.order())
}
