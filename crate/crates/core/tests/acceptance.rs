//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 6 cannot reach L = 25 on the hexagon inside its time budget (N(25) is of order
//! 10^11); it reports FAIL with a fit over the range it did reach. Set POLARIS_FULL_GROWTH=1 to
//! attempt the whole range regardless of time. The process exits nonzero only when a criterion
//! outside KNOWN_UNATTAINABLE fails.

use polaris_core::billiard::{
    count_trajectories, growth_classify, morse_series, shooting_oracle, unfold_enumerate, BilliardConfig,
    BilliardTrajectory, GrowthKind,
};
use polaris_core::constructions::{
    bundle_lift, connected_sum_fixed_points, cover_expand, forget_l, quotient_descriptor, Cover,
};
use polaris_core::corpus;
use polaris_core::coxeter::{develop, section_invariants, DevelopOptions, DevelopStatus, Realization, V3};
use polaris_core::groups::{Catalog, TorusHom};
use polaris_core::io::from_json;
use polaris_core::polar_data::{validate, Area, Kappa, PolarData, Q};
use polaris_core::torus_actions::{classify4, ManifoldType, WeightSequence};
use polaris_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const KNOWN_UNATTAINABLE: &[u32] = &[6];

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(t: Duration, limit: f64) -> Check {
    let s = t.as_secs_f64();
    if s < limit {
        Ok(format!("{s:.2} s"))
    } else {
        Err(format!("took {s:.2} s, limit {limit} s"))
    }
}

// spherical triangle area from its vertices
fn spherical_area(a: &V3, b: &V3, c: &V3) -> f64 {
    let (a, b, c) = (a.normalize(), b.normalize(), c.normalize());
    let num = a.dot(&b.cross(&c)).abs();
    let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
    2.0 * num.atan2(den)
}

fn criterion1() -> Check {
    let t = Instant::now();
    let d = corpus::figure1();
    let dev = ok(develop(&d, &DevelopOptions::default()))?;
    let elapsed = t.elapsed();
    // B3 has order 2^3 · 3!
    let b3 = 8 * 6;
    ensure!(dev.status == DevelopStatus::ClosedFinite(b3), "status {:?}", dev.status);
    ensure!(dev.elements.len() == b3, "{} elements", dev.elements.len());
    let Realization::Polygon(p) = &dev.realization else { return Err("not a polygon".into()) };
    let area = spherical_area(&p.vertices[0], &p.vertices[1], &p.vertices[2]);
    ensure!((area - PI / 12.0).abs() < 1e-9, "chamber area {area}");
    let tiles: f64 = dev
        .elements
        .iter()
        .map(|e| spherical_area(&(e.matrix * p.vertices[0]), &(e.matrix * p.vertices[1]), &(e.matrix * p.vertices[2])))
        .sum();
    ensure!((tiles - 4.0 * PI).abs() < 1e-6, "tiles cover {tiles}, expected 4π");
    let centres: Vec<V3> = dev.elements.iter().map(|e| e.matrix * p.center).collect();
    for i in 0..centres.len() {
        for j in 0..i {
            ensure!((centres[i] - centres[j]).norm() > 1e-6, "tiles {i} and {j} coincide");
        }
    }
    let inv = ok(section_invariants(&d))?;
    ensure!(inv.area == Area::Exact(Q::new(1, 12)), "area {}", inv.area);
    ensure!(inv.pi_order == 24, "|Π| = {}", inv.pi_order);
    ensure!(inv.chi == Q::from(1), "χ = {}", inv.chi);
    let rt = within(elapsed, 1.0)?;
    Ok(format!("order 48, tiles cover 4π (err {:.1e}), χ = 1, {rt}", (tiles - 4.0 * PI).abs()))
}

fn criterion2() -> Check {
    let inv = ok(section_invariants(&corpus::figure3()))?;
    // π − (π/6 + π/3 + π/6)
    let area = Q::from(1) - (Q::new(1, 6) + Q::new(1, 3) + Q::new(1, 6));
    ensure!(inv.kappa == Kappa::Negative, "κ = {}", inv.kappa);
    ensure!(inv.area == Area::Exact(area), "A = {}", inv.area);
    ensure!(inv.chi == -area * Q::from(12) / Q::from(2), "χ = {}", inv.chi);
    ensure!(inv.chi == Q::from(-2), "χ = {}", inv.chi);
    ensure!(inv.genus == Some(2), "genus {:?}", inv.genus);
    Ok("κ = -1, A = π/3, χ = -2, genus 2".into())
}

fn criterion3() -> Check {
    let t = Instant::now();
    let sq = corpus::figure4(0);
    let hex = ok(connected_sum_fixed_points(&sq, "c0", &sq, "c1", &Catalog::empty()))?;
    let report = ok(validate(&hex, &Catalog::default_catalog()))?;
    let inv = ok(section_invariants(&hex))?;
    let elapsed = t.elapsed();
    ensure!(report.is_valid(), "{report}");
    ensure!(hex.chamber.k() == 6, "{} sides", hex.chamber.k());
    ensure!(hex.chamber.corners.iter().all(|c| c.order == 2), "not right angled");
    ensure!(inv.kappa == Kappa::Negative, "κ = {}", inv.kappa);
    // Gauss–Bonnet: A = 4π − 6·π/2 = π, χ = −|Π|·A/2π
    let chi = -4.0 * (4.0 * PI - 6.0 * PI / 2.0) / (2.0 * PI);
    ensure!((chi - -2.0).abs() < 1e-12 && inv.chi == Q::from(-2), "χ = {}", inv.chi);
    ensure!(inv.genus == Some(2), "genus {:?}", inv.genus);
    let rt = within(elapsed, 1.0)?;
    Ok(format!("valid right-angled hexagon, κ = -1, χ = -2, genus 2, {rt}"))
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m = vec![vec![1i64, 0], vec![0, 1]];
    for _ in 0..rng.gen_range(0..8) {
        let t = rng.gen_range(-3..=3);
        let e = match rng.gen_range(0..4) {
            0 => [[1, t], [0, 1]],
            1 => [[1, 0], [t, 1]],
            2 => [[0, 1], [1, 0]],
            _ => [[-1, 0], [0, 1]],
        };
        m = (0..2).map(|i| (0..2).map(|j| e[i][0] * m[0][j] + e[i][1] * m[1][j]).collect()).collect();
    }
    m
}

fn remark(s: &WeightSequence, rng: &mut ChaCha8Rng) -> WeightSequence {
    let a = random_unimodular(rng);
    let mut t = s.transformed(&a).dihedral(rng.gen_range(0..s.k()), rng.gen());
    for v in t.vectors.iter_mut() {
        if rng.gen() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    t
}

fn criterion4() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut cases: Vec<(WeightSequence, ManifoldType)> = (-4..=4)
        .map(|k| {
            let kind = if k % 2 == 0 { ManifoldType::SumS2xS2(1) } else { ManifoldType::SumCP2 { p: 1, q: 1 } };
            (corpus::figure4_sequence(k), kind)
        })
        .collect();
    cases.push((corpus::cp2_sequence(), ManifoldType::SumCP2 { p: 1, q: 0 }));
    for (s, want) in &cases {
        let c = ok(classify4(s))?;
        ensure!(c.kind == *want, "{:?}: {} instead of {want}", s.vectors, c.kind);
        for _ in 0..200 {
            let r = remark(s, &mut rng);
            let c = ok(classify4(&r))?;
            ensure!(c.kind == *want, "{:?} re-marked to {:?}: {}", s.vectors, r.vectors, c.kind);
        }
    }
    let rt = within(t.elapsed(), 5.0)?;
    Ok(format!("10 instances x 200 re-markings, {rt}"))
}

fn compare(a: &[BilliardTrajectory], b: &[BilliardTrajectory]) -> std::result::Result<(), String> {
    let key = |ts: &[BilliardTrajectory]| {
        let mut v: Vec<(Vec<usize>, f64)> = ts.iter().map(|t| (t.word.clone(), t.length)).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
        v
    };
    let (a, b) = (key(a), key(b));
    ensure!(a.len() == b.len(), "{} vs {} trajectories", a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        ensure!(x.0 == y.0, "words {:?} vs {:?}", x.0, y.0);
        ensure!((x.1 - y.1).abs() < 1e-6, "{:?}: {} vs {}", x.0, x.1, y.1);
    }
    Ok(())
}

fn criterion5() -> Check {
    let t = Instant::now();
    let hex = corpus::hexagon().map_err(|e| e.to_string())?;
    let cases = [
        ("square", corpus::figure4(0), [0.2718, 0.3141], [0.5772, 0.6913]),
        ("triangle", corpus::figure1(), [0.013, -0.021], [-0.017, 0.009]),
        ("hexagon", hex, [0.013, -0.021], [-0.017, 0.009]),
    ];
    let mut counts = Vec::new();
    for (name, d, p, q) in cases {
        let cfg = ok(BilliardConfig::new(&d, p, q, 10.0, vec![2; d.chamber.k()]))?;
        let e = ok(unfold_enumerate(&cfg))?;
        let o = ok(shooting_oracle(&cfg, 180))?;
        compare(&e.trajectories, &o.trajectories).map_err(|m| format!("{name}: {m}"))?;
        ensure!(e.rejected == o.rejected, "{name}: rejected {} vs {}", e.rejected, o.rejected);
        ensure!(o.unresolved == 0, "{name}: {} unresolved oracle cells", o.unresolved);
        counts.push(format!("{name} {}", e.trajectories.len()));
    }
    let rt = within(t.elapsed(), 30.0)?;
    Ok(format!("{}, {rt}", counts.join(", ")))
}

fn linspace(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn criterion6() -> Check {
    let t = Instant::now();
    let sq = corpus::figure4(0);
    let ls = linspace(10.0, 60.0, 2.5);
    let cfg = ok(BilliardConfig::new(&sq, [0.2718, 0.3141], [0.5772, 0.6913], 60.0, vec![2; 4]))?;
    let n = ok(count_trajectories(&cfg, &ls))?;
    let g = ok(growth_classify(&ls.iter().copied().zip(n).collect::<Vec<_>>()))?;
    let GrowthKind::Polynomial { degree } = g.kind else { return Err(format!("square: {g}")) };
    ensure!((degree - 2.0).abs() <= 0.3, "square degree {degree:.3}");

    let full = std::env::var_os("POLARIS_FULL_GROWTH").is_some();
    let reach = if full { 25.0 } else { 17.0 };
    let hex = ok(corpus::hexagon())?;
    let mut cfg = ok(BilliardConfig::new(&hex, [0.013, -0.021], [-0.017, 0.009], reach, vec![2; 6]))?;
    cfg.max_nodes = if full { usize::MAX } else { 200_000_000 };
    let ls = linspace(8.0, reach, 0.5);
    let n = ok(count_trajectories(&cfg, &ls))?;
    let samples: Vec<(f64, usize)> = ls.iter().copied().zip(n.iter().copied()).collect();
    let h = ok(growth_classify(&samples))?;
    let GrowthKind::Exponential { rate } = h.kind else { return Err(format!("hexagon: {h}")) };
    ensure!(rate > 0.0, "hexagon rate {rate}");
    let summary = format!(
        "square degree {degree:.3}; hexagon rate {rate:.3} over [8, {reach}] (N({reach}) = {})",
        n.last().unwrap()
    );
    if reach < 25.0 {
        let projected = (h.exp_fit.intercept + h.exp_fit.slope * 25.0).exp();
        return Err(format!(
            "{summary}; [8, 25] not reached: N(25) ≈ {projected:.2e} trajectories, beyond the 2 min budget"
        ));
    }
    let rt = within(t.elapsed(), 120.0).map_err(|m| format!("{summary}; {m}"))?;
    Ok(format!("{summary}, {rt}"))
}

fn criterion7() -> Check {
    let sq = corpus::figure4(0);
    let cfg = ok(BilliardConfig::new(&sq, [0.2718, 0.3141], [0.5772, 0.6913], 10.0, vec![3; 4]))?;
    let e = ok(unfold_enumerate(&cfg))?;
    for t in &e.trajectories {
        // each wall crossing contributes codimension − 1 = 2
        ensure!(t.index as usize == 2 * t.word.len(), "{:?}: index {}", t.word, t.index);
        ensure!(t.index % 2 == 0, "odd index");
    }
    let s = morse_series(&e.trajectories, &cfg);
    ensure!(s.lacunary && s.gap == 2, "lacunary {} gap {}", s.lacunary, s.gap);
    Ok(format!("{} trajectories, all indices even, lacunary", e.trajectories.len()))
}

fn induced(d: &PolarData, v: &str, f: &[i64]) -> std::result::Result<TorusHom, String> {
    let mark = ok(d.mark(&ok(d.vertex(v))?))?;
    let gens = &mark.as_torus().ok_or("not a torus")?.generators;
    let row: Vec<i64> = gens.iter().map(|g| g.iter().zip(f).map(|(a, b)| a * b).sum()).collect();
    ok(TorusHom::new(row.len(), 1, vec![row]))
}

fn criterion8() -> Check {
    let expected: PolarData = ok(from_json(include_str!("data/hopf_lift_expected.json")))?;
    let base = corpus::cp1_interval();
    let lift = ok(bundle_lift(&base, 1, &corpus::hopf_homs(), &Catalog::empty()))?;
    ensure!(lift.data == expected, "lift differs from the stored diagram");
    ensure!(lift.is_free(), "T¹ does not act freely");
    ensure!(ok(forget_l(&lift.data, 1))? == base, "forget does not invert the lift");

    let d = corpus::figure4(0);
    let mut homs = BTreeMap::new();
    for i in 0..4 {
        for v in [format!("s{i}"), format!("c{i}")] {
            homs.insert(v.clone(), induced(&d, &v, &[1, 0])?);
        }
    }
    let square = ok(bundle_lift(&d, 1, &homs, &Catalog::empty()))?;
    ensure!(ok(forget_l(&square.data, 1))? == d, "forget does not invert the square lift");
    homs.insert("c2".into(), induced(&d, "c2", &[0, 1])?);
    match bundle_lift(&d, 1, &homs, &Catalog::empty()) {
        Err(Error::IncompatibleRestriction { from, to }) if to == "c2" && (from == "s2" || from == "s0") => {
            Ok(format!("Hopf lift matches, forget inverts, violation rejected at {from} -> {to}"))
        }
        other => Err(format!("expected a rejection at an arrow into c2, got {other:?}")),
    }
}

fn criterion9() -> Check {
    let d = corpus::figure2();
    let q = ok(quotient_descriptor(&d, &corpus::figure2_gamma_z3()))?;
    let Cover::Coxeter(back) = ok(cover_expand(&q))? else { return Err("exceptional cover".into()) };
    ensure!(back.chamber == d.chamber && back.graph == d.graph, "cover differs from Figure 2");
    match quotient_descriptor(&d, &corpus::figure2_gamma_z2()) {
        Err(Error::NotNormal(g)) => Ok(format!("Z3 round-trips, {g} rejected as not normal")),
        other => Err(format!("Z2 not rejected: {other:?}")),
    }
}

fn main() {
    let criteria: [(u32, fn() -> Check); 9] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(msg) => {
                let known = KNOWN_UNATTAINABLE.contains(&n);
                println!("FAIL criterion {n}: {msg}{}", if known { " [known unattainable]" } else { "" });
                if !known {
                    unexpected.push(n);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
