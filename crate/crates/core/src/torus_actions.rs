//! Orlik–Raymond data for Tⁿ actions with a polygon as orbit space: legality, normal forms,
//! self-intersection numbers and the diffeomorphism type for n = 2.

use crate::error::{Error, Result};
use crate::groups::lattice::{det2, hnf_with_transform, is_primitive, lattice_span, sign_normalize, IntVec};
use crate::groups::{Catalog, GroupRef, TorusSubgroup};
use crate::polar_data::{validate, Chamber, DeclaredCurvature, GroupGraph, PolarData};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Cyclic list of slope vectors, one per side of the orbit polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSequence {
    pub vectors: Vec<IntVec>,
}

impl WeightSequence {
    pub fn new(vectors: Vec<IntVec>) -> Result<Self> {
        let n = vectors.first().map(Vec::len).unwrap_or(0);
        if vectors.len() < 2 || n == 0 {
            return Err(Error::InvalidSequence("need at least two nonempty vectors".into()));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                found: vectors.iter().map(Vec::len).find(|&l| l != n).unwrap(),
            });
        }
        Ok(WeightSequence { vectors })
    }

    pub fn from_slices(vs: &[&[i64]]) -> Result<Self> {
        WeightSequence::new(vs.iter().map(|v| v.to_vec()).collect())
    }

    pub fn rank(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    fn next(&self, i: usize) -> &IntVec {
        &self.vectors[(i + 1) % self.k()]
    }

    /// Apply an integer matrix to every vector.
    pub fn transformed(&self, a: &[IntVec]) -> WeightSequence {
        let vectors = self
            .vectors
            .iter()
            .map(|v| a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect())
            .collect();
        WeightSequence { vectors }
    }

    /// Cyclic rotation by `r`, optionally reversed.
    pub fn dihedral(&self, r: usize, reverse: bool) -> WeightSequence {
        let k = self.k();
        let vectors = (0..k)
            .map(|i| {
                let j = if reverse { (r + k - i) % k } else { (r + i) % k };
                self.vectors[j].clone()
            })
            .collect();
        WeightSequence { vectors }
    }

    /// Product of the cyclic adjacent determinants (n = 2); +1 means the sequence can be
    /// signed so that every adjacent determinant is +1.
    pub fn det_product(&self) -> i64 {
        (0..self.k()).map(|i| det2(&self.vectors[i], self.next(i))).product()
    }

    pub fn is_normalized(&self) -> bool {
        self.rank() == 2
            && (0..self.k() - 1).all(|i| det2(&self.vectors[i], &self.vectors[i + 1]) == 1)
            && det2(&self.vectors[self.k() - 1], &self.vectors[0]).abs() == 1
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vectors
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceIssue {
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceReport {
    pub issues: Vec<SequenceIssue>,
    /// n = 2 only: the adjacent determinants multiply to −1.
    pub twisted: bool,
}

impl SequenceReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for SequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.issues {
            writeln!(f, "FAIL {}: {}", i.location, i.message)?;
        }
        if self.twisted {
            writeln!(f, "note: adjacent determinants multiply to -1")?;
        }
        writeln!(f, "{}", if self.is_valid() { "valid" } else { "invalid" })
    }
}

pub fn validate_sequence(seq: &WeightSequence) -> SequenceReport {
    let mut report = SequenceReport::default();
    let n = seq.rank();
    for (i, v) in seq.vectors.iter().enumerate() {
        match is_primitive(v) {
            Ok(true) => {}
            Ok(false) => report
                .issues
                .push(SequenceIssue { location: format!("v{i}"), message: format!("{v:?} is not primitive") }),
            Err(_) => report.issues.push(SequenceIssue { location: format!("v{i}"), message: "zero vector".into() }),
        }
    }
    if !report.is_valid() {
        return report;
    }
    for i in 0..seq.k() {
        let j = (i + 1) % seq.k();
        let pair = vec![seq.vectors[i].clone(), seq.vectors[j].clone()];
        let span = lattice_span(&pair, n).expect("ranks agree");
        if span.rank != 2 || span.index != 1 {
            report.issues.push(SequenceIssue {
                location: format!("v{i},v{j}"),
                message: format!("adjacent circles span rank {} with index {}", span.rank, span.index),
            });
        }
    }
    if n == 2 && report.is_valid() {
        report.twisted = seq.det_product() == -1;
    }
    report
}

fn require_valid(seq: &WeightSequence) -> Result<()> {
    let report = validate_sequence(seq);
    match report.issues.first() {
        None => Ok(()),
        Some(i) => Err(Error::InvalidSequence(format!("{}: {}", i.location, i.message))),
    }
}

/// Flip signs so that det(u_i, u_{i+1}) = +1 for i < k; the closing determinant is returned.
fn sign_chain(seq: &WeightSequence) -> (Vec<IntVec>, i64) {
    let mut out = vec![seq.vectors[0].clone()];
    for v in &seq.vectors[1..] {
        let d = det2(out.last().unwrap(), v);
        out.push(v.iter().map(|x| x * d).collect());
    }
    let delta = det2(out.last().unwrap(), &out[0]);
    (out, delta)
}

/// Move (u_1, u_2) to the standard basis.
fn to_standard(us: &[IntVec]) -> Vec<IntVec> {
    let (a1, b1, a2, b2) = (us[0][0], us[0][1], us[1][0], us[1][1]);
    us.iter().map(|u| vec![b2 * u[0] - a2 * u[1], -b1 * u[0] + a1 * u[1]]).collect()
}

/// Canonical representative up to automorphisms of Tⁿ, rotation and reflection of the polygon.
/// For n = 2 the result is in normalized state and starts with (1,0), (0,1).
pub fn normalize(seq: &WeightSequence) -> Result<WeightSequence> {
    require_valid(seq)?;
    if seq.rank() == 2 {
        Ok(normalize2(seq))
    } else {
        normalize_general(seq)
    }
}

fn normalize2(seq: &WeightSequence) -> WeightSequence {
    let flip = vec![vec![1, 0], vec![0, -1]];
    let mut best: Option<Vec<IntVec>> = None;
    for base in [seq.clone(), seq.transformed(&flip)] {
        for r in 0..seq.k() {
            for rev in [false, true] {
                let (us, _) = sign_chain(&base.dihedral(r, rev));
                let cand = to_standard(&us);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    WeightSequence { vectors: best.unwrap() }
}

const MAX_GENERAL_K: usize = 12;

fn normalize_general(seq: &WeightSequence) -> Result<WeightSequence> {
    let k = seq.k();
    let n = seq.rank();
    if k > MAX_GENERAL_K {
        return Err(Error::Unsupported(format!("normal form for n > 2 limited to k ≤ {MAX_GENERAL_K}")));
    }
    let mut best: Option<Vec<IntVec>> = None;
    for r in 0..k {
        for rev in [false, true] {
            let d = seq.dihedral(r, rev);
            for mask in 0u32..(1 << (k - 1)) {
                // columns are the (signed) vectors; HNF of the n×k matrix is the GL(n,Z) invariant
                let signs: Vec<i64> =
                    (0..k).map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { -1 } else { 1 }).collect();
                let rows: Vec<IntVec> = (0..n).map(|a| (0..k).map(|i| signs[i] * d.vectors[i][a]).collect()).collect();
                let (h, _) = hnf_with_transform(&rows, k);
                let mut h: Vec<IntVec> = h.into_iter().filter(|r| r.iter().any(|x| *x != 0)).collect();
                h.resize(n, vec![0; k]);
                if best.as_ref().is_none_or(|b| h < *b) {
                    best = Some(h);
                }
            }
        }
    }
    let h = best.unwrap();
    let vectors = (0..k).map(|i| (0..n).map(|a| h[a][i]).collect()).collect();
    Ok(WeightSequence { vectors })
}

/// Self-intersection numbers e_i from u_{i−1} + u_{i+1} = −e_i·u_i, with the closing vectors
/// carried across the wrap by the closing determinant.
pub fn self_intersections(seq: &WeightSequence) -> Result<Vec<i64>> {
    if seq.rank() != 2 {
        return Err(Error::Unsupported("self-intersections need n = 2".into()));
    }
    if !seq.is_normalized() {
        return Err(Error::NotNormalized(seq.to_string()));
    }
    let k = seq.k();
    let u = &seq.vectors;
    let delta = det2(&u[k - 1], &u[0]);
    let scaled = |v: &IntVec, s: i64| -> IntVec { v.iter().map(|x| x * s).collect() };
    let mut e = Vec::with_capacity(k);
    for i in 0..k {
        let prev = if i == 0 { scaled(&u[k - 1], delta) } else { u[i - 1].clone() };
        let next = if i == k - 1 { scaled(&u[0], delta) } else { u[i + 1].clone() };
        let s = [prev[0] + next[0], prev[1] + next[1]];
        // s is a multiple of u_i since det(u_i, s) = det(u_i,next) − det(prev,u_i) = 0
        let ui = &u[i];
        let c = if ui[0] != 0 { s[0] / ui[0] } else { s[1] / ui[1] };
        if s[0] != c * ui[0] || s[1] != c * ui[1] {
            return Err(Error::Internal(format!("relation fails at v{i}")));
        }
        e.push(-c);
    }
    Ok(e)
}

/// The cyclic intersection matrix: e_i on the diagonal, 1 between neighbours and the closing
/// determinant between the last and first sphere.
pub fn intersection_matrix(seq: &WeightSequence) -> Result<Vec<IntVec>> {
    let e = self_intersections(seq)?;
    let k = seq.k();
    let delta = det2(&seq.vectors[k - 1], &seq.vectors[0]);
    let mut q = vec![vec![0i64; k]; k];
    for i in 0..k {
        q[i][i] = e[i];
    }
    for i in 0..k {
        let j = (i + 1) % k;
        if i == j {
            continue;
        }
        let w = if j == 0 { delta } else { 1 };
        q[i][j] += w;
        q[j][i] += w;
    }
    Ok(q)
}

/// (rank, positive, negative) of a symmetric integer matrix by exact congruence diagonalization.
pub fn inertia(q: &[IntVec]) -> (usize, usize, usize) {
    type R = Ratio<i128>;
    let k = q.len();
    let mut a: Vec<Vec<R>> = q.iter().map(|r| r.iter().map(|&x| R::from(x as i128)).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..k).collect();
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // row/col i += row/col j makes the diagonal 2·a_ij ≠ 0
                        for c in 0..k {
                            let v = a[j][c];
                            a[i][c] += v;
                        }
                        for r in 0..k {
                            let v = a[r][j];
                            a[r][i] += v;
                        }
                        i
                    }
                }
            }
        };
        let d = a[p][p];
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = a[i][p] / d;
            if f.is_zero() {
                continue;
            }
            for c in 0..k {
                let v = a[p][c];
                a[i][c] -= f * v;
            }
            for r in 0..k {
                let v = a[r][p];
                a[r][i] -= f * v;
            }
        }
    }
    (pos + neg, pos, neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ManifoldType {
    S4,
    /// Connected sum of m copies of S²×S².
    SumS2xS2(u32),
    /// p copies of CP² and q copies of −CP².
    SumCP2 {
        p: u32,
        q: u32,
    },
}

impl fmt::Display for ManifoldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ManifoldType::S4 => f.write_str("S^4"),
            ManifoldType::SumS2xS2(1) => f.write_str("S^2xS^2"),
            ManifoldType::SumS2xS2(m) => write!(f, "#{m}(S^2xS^2)"),
            ManifoldType::SumCP2 { p, q } => {
                let mut parts = Vec::new();
                match p {
                    0 => {}
                    1 => parts.push("CP^2".to_string()),
                    _ => parts.push(format!("{p}CP^2")),
                }
                match q {
                    0 => {}
                    1 => parts.push("-CP^2".to_string()),
                    _ => parts.push(format!("{q}(-CP^2)")),
                }
                f.write_str(&parts.join(" # "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification4 {
    pub b2: usize,
    pub parity: Parity,
    pub signature: i64,
    pub euler: i64,
    pub kind: ManifoldType,
    pub self_intersections: Vec<i64>,
}

impl fmt::Display for Classification4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type = {}", self.kind)?;
        writeln!(f, "b2 = {}", self.b2)?;
        writeln!(f, "signature = {}", self.signature)?;
        writeln!(f, "parity = {}", if self.parity == Parity::Even { "even" } else { "odd" })?;
        writeln!(f, "euler = {}", self.euler)
    }
}

/// The type up to orientation: the orientation with non-negative signature is reported.
pub fn classify4(seq: &WeightSequence) -> Result<Classification4> {
    if seq.rank() != 2 {
        return Err(Error::Unsupported("diffeomorphism classification needs n = 2".into()));
    }
    require_valid(seq)?;
    let k = seq.k();
    if k == 2 {
        return Ok(Classification4 {
            b2: 0,
            parity: Parity::Even,
            signature: 0,
            euler: 2,
            kind: ManifoldType::S4,
            self_intersections: vec![],
        });
    }
    let (us, _) = sign_chain(seq);
    let normalized = WeightSequence { vectors: us };
    let e = self_intersections(&normalized)?;
    let q = intersection_matrix(&normalized)?;
    let (rank, mut pos, mut neg) = inertia(&q);
    let mut e = e;
    if neg > pos {
        // reflections of the polygon reverse orientation; report the orientation with σ ≥ 0
        std::mem::swap(&mut pos, &mut neg);
        e.iter_mut().for_each(|x| *x = -*x);
    }
    let b2 = k - 2;
    if rank != b2 {
        return Err(Error::Internal(format!("intersection matrix has rank {rank}, expected {b2}")));
    }
    let signature = pos as i64 - neg as i64;
    let parity = if e.iter().all(|x| x % 2 == 0) { Parity::Even } else { Parity::Odd };
    let kind = match parity {
        Parity::Even if signature != 0 => {
            return Err(Error::Internal(format!("even form with signature {signature}")));
        }
        Parity::Even => ManifoldType::SumS2xS2((b2 / 2) as u32),
        Parity::Odd => ManifoldType::SumCP2 { p: pos as u32, q: neg as u32 },
    };
    Ok(Classification4 { b2, parity, signature, euler: k as i64, kind, self_intersections: e })
}

/// Polar data of the action: a k-gon with right angles, faces marked by the circles and
/// corners by the tori they span.
pub fn polar_data_from_sequence(seq: &WeightSequence) -> Result<PolarData> {
    require_valid(seq)?;
    let n = seq.rank();
    let k = seq.k();
    let chamber = Chamber::polygon(DeclaredCurvature::Auto, &vec![2; k]);
    let faces: BTreeMap<String, GroupRef> =
        (0..k).map(|i| (format!("s{i}"), GroupRef::Torus(TorusSubgroup::circle(&seq.vectors[i])))).collect();
    let mut corners = BTreeMap::new();
    for i in 0..k {
        let sub = TorusSubgroup::new(n, vec![seq.vectors[i].clone(), seq.next(i).clone()])?;
        corners.insert(format!("c{i}"), GroupRef::Torus(sub));
    }
    let data = PolarData {
        chamber,
        graph: GroupGraph { principal: GroupRef::Torus(TorusSubgroup::trivial(n)), faces, corners },
        pi: None,
        symmetry: None,
    };
    let report = validate(&data, &Catalog::empty())?;
    if !report.is_valid() {
        return Err(Error::InvalidResult(report.to_string()));
    }
    Ok(data)
}

/// Canonical legal sequences of length k (n = 2) with entries bounded by `bound` in absolute
/// value, one per equivalence class met in the box.
pub fn enumerate_sequences(k: usize, bound: i64) -> Vec<WeightSequence> {
    let mut pool: Vec<IntVec> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let v = vec![a, b];
            if is_primitive(&v).unwrap_or(false) && sign_normalize(&v) == v {
                pool.push(v);
            }
        }
    }
    let mut found = BTreeSet::new();
    let mut stack: Vec<IntVec> = Vec::new();
    fn dfs(pool: &[IntVec], k: usize, stack: &mut Vec<IntVec>, found: &mut BTreeSet<WeightSequence>) {
        if stack.len() == k {
            if det2(&stack[k - 1], &stack[0]).abs() == 1 {
                found.insert(normalize2(&WeightSequence { vectors: stack.clone() }));
            }
            return;
        }
        for v in pool {
            if stack.last().is_none_or(|u| det2(u, v).abs() == 1) {
                stack.push(v.clone());
                dfs(pool, k, stack, found);
                stack.pop();
            }
        }
    }
    if k >= 2 {
        dfs(&pool, k, &mut stack, &mut found);
    }
    found.into_iter().collect()
}
