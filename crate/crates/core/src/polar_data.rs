//! Polar data D = (C, G(C)): a constant-curvature chamber whose strata are marked by
//! isotropy groups, and the compatibility validator.

use crate::error::{Error, Result};
use crate::groups::{lattice, Catalog, GroupRef};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Q = Ratio<i64>;

pub const ANGLE_ORDERS: [u32; 4] = [2, 3, 4, 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kappa {
    Negative,
    Flat,
    Positive,
}

impl Kappa {
    pub fn sign(self) -> i32 {
        match self {
            Kappa::Negative => -1,
            Kappa::Flat => 0,
            Kappa::Positive => 1,
        }
    }

    fn from_excess(e: &Q) -> Kappa {
        if e.is_positive() {
            Kappa::Positive
        } else if e.is_negative() {
            Kappa::Negative
        } else {
            Kappa::Flat
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Negative => f.write_str("-1"),
            Kappa::Flat => f.write_str("0"),
            Kappa::Positive => f.write_str("+1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DeclaredCurvature {
    #[default]
    #[serde(rename = "auto")]
    Auto,
    #[serde(rename = "+1")]
    Positive,
    #[serde(rename = "0")]
    Flat,
    #[serde(rename = "-1")]
    Negative,
}

impl DeclaredCurvature {
    pub fn kappa(self) -> Option<Kappa> {
        match self {
            DeclaredCurvature::Auto => None,
            DeclaredCurvature::Positive => Some(Kappa::Positive),
            DeclaredCurvature::Flat => Some(Kappa::Flat),
            DeclaredCurvature::Negative => Some(Kappa::Negative),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

/// Corner with interior angle π/order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub id: String,
    pub order: u32,
}

/// Geodesic polygon (corner i sits between side i and side i+1, counter-clockwise) or an
/// interval whose two endpoints are listed as sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chamber {
    pub dimension: u8,
    #[serde(default)]
    pub curvature: DeclaredCurvature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub sides: Vec<Side>,
    #[serde(default)]
    pub corners: Vec<Corner>,
}

impl Chamber {
    pub fn polygon(curvature: DeclaredCurvature, orders: &[u32]) -> Self {
        let k = orders.len();
        Chamber {
            dimension: 2,
            curvature,
            length: None,
            sides: (0..k).map(|i| Side { id: format!("s{i}"), length: None }).collect(),
            corners: orders.iter().enumerate().map(|(i, &order)| Corner { id: format!("c{i}"), order }).collect(),
        }
    }

    pub fn interval(curvature: DeclaredCurvature, length: Option<f64>) -> Self {
        Chamber {
            dimension: 1,
            curvature,
            length,
            sides: vec![Side { id: "e0".into(), length: None }, Side { id: "e1".into(), length: None }],
            corners: vec![],
        }
    }

    pub fn k(&self) -> usize {
        self.sides.len()
    }

    pub fn side_index(&self, id: &str) -> Option<usize> {
        self.sides.iter().position(|s| s.id == id)
    }

    pub fn corner_index(&self, id: &str) -> Option<usize> {
        self.corners.iter().position(|c| c.id == id)
    }

    /// Sides meeting at corner i.
    pub fn corner_sides(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.k())
    }

    /// Corners on side i.
    pub fn side_corners(&self, i: usize) -> (usize, usize) {
        let k = self.k();
        ((i + k - 1) % k, i)
    }

    /// Σ 1/m_i − (k − 2): the Gauss–Bonnet excess in units of π.
    pub fn excess(&self) -> Q {
        let k = self.k() as i64;
        self.corners.iter().map(|c| Q::new(1, i64::from(c.order))).sum::<Q>() - Q::from(k - 2)
    }

    pub fn structure_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut ids = BTreeSet::new();
        for id in self.sides.iter().map(|s| &s.id).chain(self.corners.iter().map(|c| &c.id)) {
            if id == "H" || !ids.insert(id.clone()) {
                out.push(format!("duplicate or reserved stratum id `{id}`"));
            }
        }
        for s in &self.sides {
            if let Some(l) = s.length {
                if !(l.is_finite() && l > 0.0) {
                    out.push(format!("side {} has non-positive length", s.id));
                }
            }
        }
        match self.dimension {
            1 => {
                if self.sides.len() != 2 {
                    out.push("an interval has exactly two endpoints".into());
                }
                if !self.corners.is_empty() {
                    out.push("an interval has no corners".into());
                }
                if let Some(l) = self.length {
                    if !(l.is_finite() && l > 0.0) {
                        out.push("interval length must be positive".into());
                    }
                }
            }
            2 => {
                if self.k() < 2 {
                    out.push("a polygon needs at least two sides".into());
                }
                if self.corners.len() != self.k() {
                    out.push(format!("{} sides but {} corners", self.k(), self.corners.len()));
                }
                for c in &self.corners {
                    if !ANGLE_ORDERS.contains(&c.order) {
                        out.push(format!("corner {} has order {} not in {{2,3,4,6}}", c.id, c.order));
                    }
                }
                if self.k() == 2 && self.corners.len() == 2 && self.corners[0].order != self.corners[1].order {
                    out.push("the two angles of a biangle must be equal".into());
                }
            }
            d => out.push(format!("dimension {d} not supported")),
        }
        out
    }
}

/// Chamber area in units of π, or free (flat and interval chambers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Area {
    Exact(Q),
    Free,
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Area::Free => f.write_str("free"),
            Area::Exact(q) => f.write_str(&pi_multiple(q)),
        }
    }
}

/// Render q·π as text, e.g. "π/12", "2π/3", "π".
pub fn pi_multiple(q: &Q) -> String {
    let (n, d) = (*q.numer(), *q.denom());
    let num = match n {
        0 => return "0".into(),
        1 => "π".to_string(),
        -1 => "-π".to_string(),
        _ => format!("{n}π"),
    };
    if d == 1 {
        num
    } else {
        format!("{num}/{d}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberGeometry {
    pub kappa: Kappa,
    pub excess: Q,
    pub area: Area,
}

pub fn chamber_geometry(chamber: &Chamber) -> Result<ChamberGeometry> {
    let problems = chamber.structure_problems();
    if !problems.is_empty() {
        return Err(Error::InvalidChamber(problems.join("; ")));
    }
    if chamber.dimension == 1 {
        let kappa = chamber.curvature.kappa().unwrap_or(Kappa::Flat);
        return Ok(ChamberGeometry { kappa, excess: Q::zero(), area: Area::Free });
    }
    let excess = chamber.excess();
    let kappa = Kappa::from_excess(&excess);
    if let Some(declared) = chamber.curvature.kappa() {
        if declared != kappa {
            return Err(Error::CurvatureMismatch { declared: declared.to_string(), excess: pi_multiple(&excess) });
        }
    }
    let area = if kappa == Kappa::Flat { Area::Free } else { Area::Exact(excess.abs()) };
    Ok(ChamberGeometry { kappa, excess, area })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupGraph {
    pub principal: GroupRef,
    pub faces: BTreeMap<String, GroupRef>,
    #[serde(default)]
    pub corners: BTreeMap<String, GroupRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Principal,
    Face(String),
    Corner(String),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Principal => f.write_str("H"),
            Vertex::Face(s) | Vertex::Corner(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiOrder {
    Finite(u64),
    Infinite,
}

impl Serialize for PiOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PiOrder::Finite(n) => s.serialize_u64(*n),
            PiOrder::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for PiOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(0) => Err(de::Error::custom("polar group order must be positive")),
            Raw::N(n) => Ok(PiOrder::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(PiOrder::Infinite),
            Raw::S(s) => Err(de::Error::custom(format!("bad order `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarGroupSpec {
    pub order: PiOrder,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub normal: BTreeMap<String, bool>,
}

impl PolarGroupSpec {
    pub fn finite(order: u64, name: &str, orientable: Option<bool>) -> Self {
        PolarGroupSpec { order: PiOrder::Finite(order), name: name.to_string(), orientable, normal: BTreeMap::new() }
    }
}

/// Chamber automorphism in dihedral form: side i maps to `rotation + i`, or to
/// `rotation − i` when `reflect` is set (indices mod k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChamberSymmetry {
    pub rotation: usize,
    #[serde(default)]
    pub reflect: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugation {
    pub from: GroupRef,
    pub to: GroupRef,
}

/// A finite group Γ of marked-chamber automorphisms, with conjugation witnesses for marks
/// that are moved to different labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSpec {
    pub label: String,
    pub generators: Vec<ChamberSymmetry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugations: Vec<Conjugation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarData {
    pub chamber: Chamber,
    pub graph: GroupGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<PolarGroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<GammaSpec>,
}

impl PolarData {
    pub fn mark(&self, v: &Vertex) -> Result<&GroupRef> {
        match v {
            Vertex::Principal => Some(&self.graph.principal),
            Vertex::Face(s) => self.graph.faces.get(s),
            Vertex::Corner(c) => self.graph.corners.get(c),
        }
        .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn face_mark(&self, i: usize) -> Result<&GroupRef> {
        self.mark(&Vertex::Face(self.chamber.sides[i].id.clone()))
    }

    pub fn corner_mark(&self, i: usize) -> Result<&GroupRef> {
        self.mark(&Vertex::Corner(self.chamber.corners[i].id.clone()))
    }

    /// Resolve "H", a side id or a corner id.
    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        if name == "H" {
            Ok(Vertex::Principal)
        } else if self.chamber.side_index(name).is_some() {
            Ok(Vertex::Face(name.to_string()))
        } else if self.chamber.corner_index(name).is_some() {
            Ok(Vertex::Corner(name.to_string()))
        } else {
            Err(Error::UnknownVertex(name.to_string()))
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(Vertex::Principal)
            .chain(self.chamber.sides.iter().map(|s| Vertex::Face(s.id.clone())))
            .chain(self.chamber.corners.iter().map(|c| Vertex::Corner(c.id.clone())))
            .collect()
    }

    /// Arrows from each cardinality-ℓ stratum to the cardinality-(ℓ+1) strata containing it.
    pub fn arrows(&self) -> Vec<(Vertex, Vertex)> {
        let c = &self.chamber;
        let mut out: Vec<(Vertex, Vertex)> =
            c.sides.iter().map(|s| (Vertex::Principal, Vertex::Face(s.id.clone()))).collect();
        for (i, corner) in c.corners.iter().enumerate() {
            let (a, b) = c.corner_sides(i);
            for s in [a, b] {
                out.push((Vertex::Face(c.sides[s].id.clone()), Vertex::Corner(corner.id.clone())));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_torus(&self) -> bool {
        self.vertices().iter().all(|v| matches!(self.mark(v), Ok(GroupRef::Torus(_))))
    }
}

/// All vertices with arrows eventually ending at `v`, including `v`.
pub fn history(data: &PolarData, v: &Vertex) -> Result<Vec<Vertex>> {
    data.mark(v)?;
    let c = &data.chamber;
    let mut out = vec![Vertex::Principal];
    match v {
        Vertex::Principal => {}
        Vertex::Face(_) => out.push(v.clone()),
        Vertex::Corner(id) => {
            let i = c.corner_index(id).ok_or_else(|| Error::UnknownVertex(id.clone()))?;
            let (a, b) = c.corner_sides(i);
            let mut faces = vec![c.sides[a].id.clone(), c.sides[b].id.clone()];
            faces.sort();
            faces.dedup();
            out.extend(faces.into_iter().map(Vertex::Face));
            out.push(v.clone());
        }
    }
    Ok(out)
}

pub fn depth(data: &PolarData, v: &Vertex) -> Result<usize> {
    data.mark(v)?;
    Ok(match v {
        Vertex::Principal => 0,
        Vertex::Face(_) => 1,
        Vertex::Corner(_) => 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckCode {
    V0,
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
}

impl fmt::Display for CheckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Check {
    pub code: CheckCode,
    pub location: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failed_codes(&self) -> BTreeSet<CheckCode> {
        self.failures().map(|c| c.code).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {} {}: {}", c.code, c.location, c.detail)?;
        }
        write!(f, "{}", if self.is_valid() { "valid" } else { "invalid" })
    }
}

struct Checker {
    checks: Vec<Check>,
}

impl Checker {
    fn push(&mut self, code: CheckCode, location: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { code, location: location.to_string(), passed, detail: detail.into() });
    }
}

fn resolve_names(data: &PolarData, catalog: &Catalog) -> Result<()> {
    for v in data.vertices() {
        if let Ok(GroupRef::Named(n)) = data.mark(&v) {
            catalog.lookup(&n.name)?;
        }
    }
    Ok(())
}

/// Containment `small ⊆ big` as a declared or lattice fact.
fn contained(small: &GroupRef, big: &GroupRef, catalog: &Catalog) -> std::result::Result<(), String> {
    match (small, big) {
        (GroupRef::Torus(h), GroupRef::Torus(k)) => {
            if h.rank != k.rank {
                return Err(format!("ambient ranks {} and {} differ", h.rank, k.rank));
            }
            let hl = h.lattice().map_err(|e| e.to_string())?;
            let kl = k.lattice().map_err(|e| e.to_string())?;
            if kl.contains_lattice(&hl) {
                Ok(())
            } else {
                Err(format!("{h} is not contained in {k}"))
            }
        }
        (GroupRef::Named(h), GroupRef::Named(k)) => {
            let entry = catalog.lookup(&k.name).map_err(|e| e.to_string())?;
            if h == k || entry.subgroup(&h.name).is_some() {
                Ok(())
            } else {
                Err(format!("catalog declares no subgroup {} of {}", h.name, k.name))
            }
        }
        _ => Err("mixed torus and named marks".into()),
    }
}

fn check_face_sphere(h: &GroupRef, k: &GroupRef, catalog: &Catalog) -> std::result::Result<String, String> {
    match (h, k) {
        (GroupRef::Torus(h), GroupRef::Torus(k)) => {
            let ks = k.span().map_err(|e| e.to_string())?;
            let hs = h.span().map_err(|e| e.to_string())?;
            for g in &k.generators {
                if !lattice::is_primitive(g).unwrap_or(false) {
                    return Err(format!("non-primitive slope {g:?}"));
                }
            }
            if ks.index != 1 || ks.rank != k.generators.len() {
                return Err(format!("generators of {k} do not form a lattice basis"));
            }
            if ks.rank != hs.rank + 1 {
                return Err(format!("{k}/{h} is not a circle"));
            }
            Ok(format!("{k}/{h} = S^1"))
        }
        (GroupRef::Named(h), GroupRef::Named(k)) => {
            let entry = catalog.lookup(&k.name).map_err(|e| e.to_string())?;
            match entry.subgroup(&h.name) {
                Some(d) if d.quotient_is_sphere && d.sphere_dim >= 1 => {
                    Ok(format!("{}/{} = S^{}", k.name, h.name, d.sphere_dim))
                }
                Some(_) => Err(format!("{}/{} is not declared a sphere", k.name, h.name)),
                None => Err(format!("catalog declares no subgroup {} of {}", h.name, k.name)),
            }
        }
        _ => Err("mixed torus and named marks".into()),
    }
}

fn check_corner_slice(
    ki: &GroupRef,
    kj: &GroupRef,
    kij: &GroupRef,
    m: u32,
    catalog: &Catalog,
) -> std::result::Result<String, String> {
    match (ki, kj, kij) {
        (GroupRef::Torus(_), GroupRef::Torus(_), GroupRef::Torus(_)) => {
            if m == 2 {
                Ok("torus corner, angle π/2".into())
            } else {
                Err(format!("torus corners have angle π/2, found π/{m}"))
            }
        }
        (GroupRef::Named(a), GroupRef::Named(b), GroupRef::Named(c)) => {
            let entry = catalog.lookup(&c.name).map_err(|e| e.to_string())?;
            match entry.coh1_order(&a.name, &b.name) {
                Some(w) if w == m => Ok(format!("Weyl order {w} matches π/{m}")),
                Some(w) => Err(format!("Weyl order {w} does not match angle π/{m}")),
                None => Err(format!("no slice fact for ({}, {}) in {}", a.name, b.name, c.name)),
            }
        }
        _ => Err("mixed torus and named marks".into()),
    }
}

fn check_generation(
    ki: &GroupRef,
    kj: &GroupRef,
    kij: &GroupRef,
    catalog: &Catalog,
) -> std::result::Result<String, String> {
    match (ki, kj, kij) {
        (GroupRef::Torus(a), GroupRef::Torus(b), GroupRef::Torus(c)) => {
            let mut gens = a.generators.clone();
            gens.extend(b.generators.iter().cloned());
            let span = lattice::lattice_span(&gens, c.rank).map_err(|e| e.to_string())?;
            let target = c.lattice().map_err(|e| e.to_string())?;
            if span.index != 1 {
                return Err(format!("span of {a} and {b} has index {}", span.index));
            }
            if span.span != target {
                return Err(format!("{a} and {b} do not generate {c}"));
            }
            Ok(format!("{a} x {b} = {c}"))
        }
        (GroupRef::Named(a), GroupRef::Named(b), GroupRef::Named(c)) => {
            let entry = catalog.lookup(&c.name).map_err(|e| e.to_string())?;
            if entry.generated_by(&[&a.name, &b.name]) {
                Ok(format!("{} generated by {}, {}", c.name, a.name, b.name))
            } else {
                Err(format!("no generation fact for {} from {}, {}", c.name, a.name, b.name))
            }
        }
        _ => Err("mixed torus and named marks".into()),
    }
}

pub fn validate(data: &PolarData, catalog: &Catalog) -> Result<ValidationReport> {
    resolve_names(data, catalog)?;
    let mut ck = Checker { checks: Vec::new() };
    let c = &data.chamber;
    use CheckCode::*;

    let problems = c.structure_problems();
    ck.push(
        V0,
        "chamber",
        problems.is_empty(),
        if problems.is_empty() { "well-formed".into() } else { problems.join("; ") },
    );
    let side_ids: BTreeSet<&String> = c.sides.iter().map(|s| &s.id).collect();
    let corner_ids: BTreeSet<&String> = c.corners.iter().map(|s| &s.id).collect();
    let face_keys: BTreeSet<&String> = data.graph.faces.keys().collect();
    let corner_keys: BTreeSet<&String> = data.graph.corners.keys().collect();
    let marks_ok = side_ids == face_keys && corner_ids == corner_keys;
    ck.push(
        V0,
        "marks",
        marks_ok,
        if marks_ok {
            "every stratum marked once".into()
        } else {
            "face/corner marks do not match the chamber strata".to_string()
        },
    );
    let ranks: BTreeSet<usize> =
        data.vertices().iter().filter_map(|v| data.mark(v).ok().and_then(|g| g.as_torus()).map(|t| t.rank)).collect();
    let kinds: BTreeSet<bool> =
        data.vertices().iter().filter_map(|v| data.mark(v).ok().map(|g| g.as_torus().is_some())).collect();
    let uniform = ranks.len() <= 1 && kinds.len() <= 1;
    ck.push(V0, "kinds", uniform, if uniform { "uniform mark kind" } else { "marks mix kinds or torus ranks" });
    if !problems.is_empty() || !marks_ok {
        return Ok(finish(ck));
    }

    let h = &data.graph.principal;
    for (i, side) in c.sides.iter().enumerate() {
        let k = data.face_mark(i)?;
        let loc = format!("H->{}", side.id);
        match contained(h, k, catalog) {
            Ok(()) => ck.push(V1, &loc, true, format!("{h} ⊆ {k}")),
            Err(e) => ck.push(V1, &loc, false, e),
        }
        match check_face_sphere(h, k, catalog) {
            Ok(d) => ck.push(V2, &side.id, true, d),
            Err(e) => ck.push(V2, &side.id, false, e),
        }
    }
    for (i, corner) in c.corners.iter().enumerate() {
        let (a, b) = c.corner_sides(i);
        let kij = data.corner_mark(i)?;
        let (ka, kb) = (data.face_mark(a)?, data.face_mark(b)?);
        for (s, k) in [(a, ka), (b, kb)] {
            let loc = format!("{}->{}", c.sides[s].id, corner.id);
            match contained(k, kij, catalog) {
                Ok(()) => ck.push(V1, &loc, true, format!("{k} ⊆ {kij}")),
                Err(e) => ck.push(V1, &loc, false, e),
            }
        }
        match check_corner_slice(ka, kb, kij, corner.order, catalog) {
            Ok(d) => ck.push(V3, &corner.id, true, d),
            Err(e) => ck.push(V3, &corner.id, false, e),
        }
        match check_generation(ka, kb, kij, catalog) {
            Ok(d) => ck.push(V4, &corner.id, true, d),
            Err(e) => ck.push(V4, &corner.id, false, e),
        }
    }

    let geometry = chamber_geometry(c);
    match &geometry {
        Ok(g) => ck.push(V5, "chamber", true, format!("κ = {}, area {}", g.kappa, g.area)),
        Err(e) => ck.push(V5, "chamber", false, e.to_string()),
    }
    if let (Some(pi), Ok(g)) = (&data.pi, &geometry) {
        match pi_problems(pi, c, g) {
            None => ck.push(V6, "pi", true, "declared polar group consistent"),
            Some(e) => ck.push(V6, "pi", false, e),
        }
    }
    Ok(finish(ck))
}

fn finish(mut ck: Checker) -> ValidationReport {
    ck.checks.sort();
    ValidationReport { checks: ck.checks }
}

/// χ(Σ) = |Π|·E/2 with E the excess in units of π.
pub fn euler_characteristic(order: u64, geometry: &ChamberGeometry) -> Q {
    Q::from(order as i64) * geometry.excess / Q::from(2)
}

pub fn pi_problems(pi: &PolarGroupSpec, c: &Chamber, g: &ChamberGeometry) -> Option<String> {
    if c.dimension != 2 {
        return None;
    }
    match pi.order {
        PiOrder::Infinite => {
            (g.kappa == Kappa::Positive).then(|| "spherical sections are compact, Π must be finite".into())
        }
        PiOrder::Finite(n) => {
            let chi = euler_characteristic(n, g);
            if !chi.is_integer() {
                return Some(format!("χ = {chi} is not an integer"));
            }
            let chi = chi.to_integer();
            if g.kappa == Kappa::Positive && !(chi == 1 || chi == 2) {
                return Some(format!("spherical section with χ = {chi} ∉ {{1,2}}"));
            }
            if pi.orientable == Some(true) && chi % 2 != 0 {
                return Some(format!("orientable section with odd χ = {chi}"));
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::TorusSubgroup;

    fn torus_square(slopes: [[i64; 2]; 4]) -> PolarData {
        let chamber = Chamber::polygon(DeclaredCurvature::Auto, &[2, 2, 2, 2]);
        let faces = (0..4).map(|i| (format!("s{i}"), GroupRef::Torus(TorusSubgroup::circle(&slopes[i])))).collect();
        let corners = (0..4).map(|i| (format!("c{i}"), GroupRef::Torus(TorusSubgroup::full(2)))).collect();
        PolarData {
            chamber,
            graph: GroupGraph { principal: GroupRef::Torus(TorusSubgroup::trivial(2)), faces, corners },
            pi: None,
            symmetry: None,
        }
    }

    #[test]
    fn figure4_square_valid_for_all_k() {
        for k in -6..=6 {
            let d = torus_square([[0, 1], [1, 0], [k, 1], [1, 0]]);
            let r = validate(&d, &Catalog::empty()).unwrap();
            assert!(r.is_valid(), "k={k}\n{r}");
        }
    }

    #[test]
    fn non_primitive_slope_fails_v2_and_v4() {
        let mut d = torus_square([[0, 1], [1, 0], [3, 1], [1, 0]]);
        d.graph.faces.insert("s1".into(), GroupRef::Torus(TorusSubgroup { rank: 2, generators: vec![vec![2, 0]] }));
        let r = validate(&d, &Catalog::empty()).unwrap();
        let codes = r.failed_codes();
        assert!(codes.contains(&CheckCode::V2));
        assert!(codes.contains(&CheckCode::V4));
        let v4: Vec<_> = r.failures().filter(|c| c.code == CheckCode::V4).map(|c| c.location.clone()).collect();
        assert_eq!(v4, vec!["c0".to_string(), "c1".to_string()]);
    }

    fn figure2() -> PolarData {
        let chamber = Chamber::polygon(DeclaredCurvature::Auto, &[3, 3, 3]);
        let faces = [("s0", "O(2)"), ("s1", "O''(2)"), ("s2", "O'(2)")]
            .iter()
            .map(|(s, n)| (s.to_string(), GroupRef::named(n)))
            .collect();
        let corners = (0..3).map(|i| (format!("c{i}"), GroupRef::named("SO(3)"))).collect();
        PolarData {
            chamber,
            graph: GroupGraph { principal: GroupRef::named("Z2^2"), faces, corners },
            pi: Some(PolarGroupSpec::finite(6, "D3", Some(true))),
            symmetry: None,
        }
    }

    #[test]
    fn figure2_valid_against_default_catalog() {
        let r = validate(&figure2(), &Catalog::default_catalog()).unwrap();
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn unresolved_name_is_hard_error() {
        let mut d = figure2();
        d.graph.principal = GroupRef::named("Nope");
        assert_eq!(validate(&d, &Catalog::default_catalog()), Err(Error::UnresolvedName("Nope".into())));
    }

    #[test]
    fn wrong_weyl_order_fails_v3() {
        let mut d = figure2();
        d.chamber.corners[0].order = 2;
        d.chamber.corners[1].order = 6;
        d.chamber.corners[2].order = 6;
        // 1/2 + 1/6 + 1/6 < 1: hyperbolic, still well formed
        let r = validate(&d, &Catalog::default_catalog()).unwrap();
        assert!(r.failed_codes().contains(&CheckCode::V3));
    }

    #[test]
    fn history_and_depth() {
        let d = figure2();
        let face = Vertex::Face("s0".into());
        let corner = Vertex::Corner("c0".into());
        assert_eq!(history(&d, &face).unwrap(), vec![Vertex::Principal, face.clone()]);
        assert_eq!(
            history(&d, &corner).unwrap(),
            vec![Vertex::Principal, Vertex::Face("s0".into()), Vertex::Face("s1".into()), corner.clone()]
        );
        assert_eq!(history(&d, &Vertex::Principal).unwrap(), vec![Vertex::Principal]);
        assert_eq!(depth(&d, &Vertex::Principal).unwrap(), 0);
        assert_eq!(depth(&d, &face).unwrap(), 1);
        assert_eq!(depth(&d, &corner).unwrap(), 2);
        assert!(matches!(depth(&d, &Vertex::Face("zz".into())), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn arrows_follow_cardinality() {
        let d = figure2();
        let arrows = d.arrows();
        assert_eq!(arrows.len(), 3 + 6);
        for (a, b) in &arrows {
            assert_eq!(depth(&d, b).unwrap(), depth(&d, a).unwrap() + 1);
        }
    }

    #[test]
    fn gauss_bonnet_examples() {
        let g = chamber_geometry(&Chamber::polygon(DeclaredCurvature::Auto, &[4, 2, 3])).unwrap();
        assert_eq!((g.kappa, g.area), (Kappa::Positive, Area::Exact(Q::new(1, 12))));
        let g = chamber_geometry(&Chamber::polygon(DeclaredCurvature::Auto, &[3, 3, 3])).unwrap();
        assert_eq!((g.kappa, g.area), (Kappa::Flat, Area::Free));
        let g = chamber_geometry(&Chamber::polygon(DeclaredCurvature::Auto, &[2; 6])).unwrap();
        assert_eq!((g.kappa, g.area), (Kappa::Negative, Area::Exact(Q::from(1))));
        let bad = Chamber::polygon(DeclaredCurvature::Flat, &[2; 6]);
        assert!(matches!(chamber_geometry(&bad), Err(Error::CurvatureMismatch { .. })));
    }

    #[test]
    fn spherical_area_bound_over_all_small_polygons() {
        // every spherical polygon with orders in {2,3,4,6} has area below 2π
        for k in 2..=4usize {
            let mut idx = vec![0usize; k];
            loop {
                let orders: Vec<u32> = idx.iter().map(|&i| ANGLE_ORDERS[i]).collect();
                let ch = Chamber::polygon(DeclaredCurvature::Auto, &orders);
                if let Ok(g) = chamber_geometry(&ch) {
                    if let (Kappa::Positive, Area::Exact(a)) = (g.kappa, g.area) {
                        assert!(a < Q::from(2));
                    }
                }
                let mut j = 0;
                while j < k {
                    idx[j] += 1;
                    if idx[j] < 4 {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == k {
                    break;
                }
            }
        }
    }

    #[test]
    fn pi_consistency_in_validator() {
        let mut d = figure2();
        d.chamber = Chamber::polygon(DeclaredCurvature::Auto, &[4, 2, 3]);
        d.pi = Some(PolarGroupSpec::finite(96, "", None));
        assert!(pi_problems(d.pi.as_ref().unwrap(), &d.chamber, &chamber_geometry(&d.chamber).unwrap()).is_some());
        d.pi = Some(PolarGroupSpec::finite(24, "", Some(false)));
        assert!(pi_problems(d.pi.as_ref().unwrap(), &d.chamber, &chamber_geometry(&d.chamber).unwrap()).is_none());
    }

    #[test]
    fn report_is_order_independent() {
        let d = figure2();
        let mut shuffled = d.clone();
        let faces: Vec<_> = shuffled.graph.faces.clone().into_iter().rev().collect();
        shuffled.graph.faces = faces.into_iter().collect();
        assert_eq!(
            validate(&d, &Catalog::default_catalog()).unwrap(),
            validate(&shuffled, &Catalog::default_catalog()).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let d = figure2();
        let s = serde_json::to_string_pretty(&d).unwrap();
        let back: PolarData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
    }
}
