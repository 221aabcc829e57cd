//! Constructions on polar data: gluing along cut arcs, connected sums at fixed points,
//! principal torus-bundle lifts, and quotient/cover descriptors.

use crate::coxeter::realize_chamber;
use crate::error::{Error, Result};
use crate::groups::lattice::{integer_coordinates, IntVec};
use crate::groups::{restrict_hom, Catalog, GroupRef, TorusHom, TorusSubgroup};
use crate::polar_data::{
    validate, Chamber, ChamberSymmetry, DeclaredCurvature, GammaSpec, GroupGraph, PolarData, PolarGroupSpec, Vertex,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Separating arc in a chamber, meeting the sides it crosses orthogonally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CutArc {
    /// Cut off a corner; the part away from the corner is kept.
    CornerTruncation { corner: String, radius: f64 },
    /// Arc from a point of one side to a point of another (positions are fractions of the side
    /// lengths); the part running counter-clockwise from `from_side` to `to_side` is kept.
    CrossCut { from_side: String, from_pos: f64, to_side: String, to_pos: f64 },
    /// Interior point of an interval; the half containing endpoint `keep` is kept.
    Point { at: f64, keep: String },
}

/// The kept part of a polygon: sides x..y counter-clockwise, closed by the arc from y back to x.
struct Chain {
    sides: Vec<usize>,
    corners: Vec<usize>,
}

fn chain(c: &Chamber, x: usize, y: usize) -> Chain {
    let k = c.k();
    let n = (y + k - x) % k;
    Chain { sides: (0..=n).map(|j| (x + j) % k).collect(), corners: (0..n).map(|j| (x + j) % k).collect() }
}

fn fraction_ok(t: f64) -> bool {
    t > 0.0 && t < 1.0
}

fn polygon_chain(data: &PolarData, arc: &CutArc) -> Result<Chain> {
    let c = &data.chamber;
    if c.dimension != 2 {
        return Err(Error::InvalidArc("polygon arc on an interval chamber".into()));
    }
    match arc {
        CutArc::CornerTruncation { corner, radius } => {
            let i = c.corner_index(corner).ok_or_else(|| Error::UnknownVertex(corner.clone()))?;
            let (a, b) = c.corner_sides(i);
            if !(*radius > 0.0) {
                return Err(Error::InvalidArc(format!("radius {radius} must be positive")));
            }
            if let Ok(r) = realize_chamber(c) {
                if let Some(p) = r.polygon() {
                    let room = p.side_lengths[a].min(p.side_lengths[b]);
                    if *radius >= room {
                        return Err(Error::InvalidArc(format!(
                            "radius {radius} reaches past the next corner (sides have length {room:.6})"
                        )));
                    }
                }
            }
            Ok(chain(c, b, a))
        }
        CutArc::CrossCut { from_side, from_pos, to_side, to_pos } => {
            let a = c.side_index(from_side).ok_or_else(|| Error::UnknownVertex(from_side.clone()))?;
            let b = c.side_index(to_side).ok_or_else(|| Error::UnknownVertex(to_side.clone()))?;
            if a == b {
                return Err(Error::InvalidArc("cross-cut must join two different sides".into()));
            }
            if !fraction_ok(*from_pos) || !fraction_ok(*to_pos) {
                return Err(Error::InvalidArc("arc endpoints must lie in side interiors".into()));
            }
            Ok(chain(c, a, b))
        }
        CutArc::Point { .. } => Err(Error::InvalidArc("point cut on a polygon".into())),
    }
}

fn combine_pi(a: &Option<PolarGroupSpec>, b: &Option<PolarGroupSpec>) -> Option<PolarGroupSpec> {
    match (a, b) {
        (Some(a), Some(b)) if a.order == b.order => {
            let orientable = match (a.orientable, b.orientable) {
                (Some(x), Some(y)) => Some(x && y),
                _ => None,
            };
            Some(PolarGroupSpec { order: a.order, name: a.name.clone(), orientable, normal: BTreeMap::new() })
        }
        _ => None,
    }
}

fn check_same(what: String, a: &GroupRef, b: &GroupRef) -> Result<()> {
    if a.same_group(b) {
        Ok(())
    } else {
        Err(Error::MarkMismatch(format!("{what}: {a} vs {b}")))
    }
}

fn glue_chains(a: &PolarData, ca: Chain, b: &PolarData, cb: Chain, catalog: &Catalog) -> Result<PolarData> {
    check_same("principal".into(), &a.graph.principal, &b.graph.principal)?;
    let (xa, ya) = (ca.sides[0], *ca.sides.last().unwrap());
    let (xb, yb) = (cb.sides[0], *cb.sides.last().unwrap());
    let sid = |d: &PolarData, i: usize| d.chamber.sides[i].id.clone();
    check_same(format!("{} ~ {}", sid(a, ya), sid(b, xb)), a.face_mark(ya)?, b.face_mark(xb)?)?;
    check_same(format!("{} ~ {}", sid(b, yb), sid(a, xa)), b.face_mark(yb)?, a.face_mark(xa)?)?;

    // glued sides: [x_A ∪ y_B], interior of A, [y_A ∪ x_B], interior of B
    let mut marks: Vec<GroupRef> = vec![a.face_mark(xa)?.clone()];
    for &s in &ca.sides[1..ca.sides.len() - 1] {
        marks.push(a.face_mark(s)?.clone());
    }
    marks.push(a.face_mark(ya)?.clone());
    for &s in &cb.sides[1..cb.sides.len() - 1] {
        marks.push(b.face_mark(s)?.clone());
    }
    let mut corners: Vec<(u32, GroupRef)> = Vec::new();
    for &i in &ca.corners {
        corners.push((a.chamber.corners[i].order, a.corner_mark(i)?.clone()));
    }
    for &i in &cb.corners {
        corners.push((b.chamber.corners[i].order, b.corner_mark(i)?.clone()));
    }
    if marks.len() != corners.len() || marks.len() < 2 {
        return Err(Error::InvalidArc(format!("glued polygon would have {} sides", marks.len())));
    }
    let orders: Vec<u32> = corners.iter().map(|c| c.0).collect();
    let chamber = Chamber::polygon(DeclaredCurvature::Auto, &orders);
    let faces = marks.into_iter().enumerate().map(|(i, m)| (format!("s{i}"), m)).collect();
    let corners = corners.into_iter().enumerate().map(|(i, c)| (format!("c{i}"), c.1)).collect();
    let out = PolarData {
        chamber,
        graph: GroupGraph { principal: a.graph.principal.clone(), faces, corners },
        pi: combine_pi(&a.pi, &b.pi),
        symmetry: None,
    };
    finish(out, catalog)
}

fn finish(out: PolarData, catalog: &Catalog) -> Result<PolarData> {
    let report = validate(&out, catalog)?;
    if !report.is_valid() {
        let fails: Vec<String> =
            report.failures().map(|c| format!("{:?} at {}: {}", c.code, c.location, c.detail)).collect();
        return Err(Error::InvalidResult(fails.join("; ")));
    }
    Ok(out)
}

fn glue_intervals(
    a: &PolarData,
    arc_a: &CutArc,
    b: &PolarData,
    arc_b: &CutArc,
    catalog: &Catalog,
) -> Result<PolarData> {
    let kept = |d: &PolarData, arc: &CutArc| -> Result<(usize, Option<f64>)> {
        let CutArc::Point { at, keep } = arc else {
            return Err(Error::InvalidArc("interval chambers are cut at points".into()));
        };
        if !fraction_ok(*at) {
            return Err(Error::InvalidArc(format!("cut point {at} must lie strictly inside (0,1)")));
        }
        let e = d.chamber.side_index(keep).ok_or_else(|| Error::UnknownVertex(keep.clone()))?;
        let frac = if e == 0 { *at } else { 1.0 - *at };
        Ok((e, d.chamber.length.map(|l| l * frac)))
    };
    let (ea, la) = kept(a, arc_a)?;
    let (eb, lb) = kept(b, arc_b)?;
    check_same("principal".into(), &a.graph.principal, &b.graph.principal)?;
    let curvature =
        if a.chamber.curvature == b.chamber.curvature { a.chamber.curvature } else { DeclaredCurvature::Auto };
    let length = la.zip(lb).map(|(x, y)| x + y);
    let mut faces = BTreeMap::new();
    faces.insert("e0".to_string(), a.face_mark(ea)?.clone());
    faces.insert("e1".to_string(), b.face_mark(eb)?.clone());
    let out = PolarData {
        chamber: Chamber::interval(curvature, length),
        graph: GroupGraph { principal: a.graph.principal.clone(), faces, corners: BTreeMap::new() },
        pi: combine_pi(&a.pi, &b.pi),
        symmetry: None,
    };
    finish(out, catalog)
}

/// Glue the kept parts of two chambers along their cut arcs. Sides meeting an arc endpoint
/// merge with the side across the arc, so their marks must agree.
pub fn glue(a: &PolarData, arc_a: &CutArc, b: &PolarData, arc_b: &CutArc, catalog: &Catalog) -> Result<PolarData> {
    match (a.chamber.dimension, b.chamber.dimension) {
        (1, 1) => glue_intervals(a, arc_a, b, arc_b, catalog),
        (2, 2) => {
            let is_truncation = |arc: &CutArc| matches!(arc, CutArc::CornerTruncation { .. });
            if is_truncation(arc_a) != is_truncation(arc_b) {
                return Err(Error::InvalidArc("arc types differ".into()));
            }
            if let (CutArc::CornerTruncation { corner: x, .. }, CutArc::CornerTruncation { corner: y, .. }) =
                (arc_a, arc_b)
            {
                let ma = a.mark(&a.vertex(x)?)?;
                let mb = b.mark(&b.vertex(y)?)?;
                check_same(format!("corners {x} ~ {y}"), ma, mb)?;
            }
            let ca = polygon_chain(a, arc_a)?;
            let cb = polygon_chain(b, arc_b)?;
            glue_chains(a, ca, b, cb, catalog)
        }
        _ => Err(Error::InvalidArc("chambers of different dimensions".into())),
    }
}

/// Connected sum at two fixed points with equivalent slice representations.
pub fn connected_sum_fixed_points(
    a: &PolarData,
    corner_a: &str,
    b: &PolarData,
    corner_b: &str,
    catalog: &Catalog,
) -> Result<PolarData> {
    let ia = a.chamber.corner_index(corner_a).ok_or_else(|| Error::UnknownVertex(corner_a.into()))?;
    let ib = b.chamber.corner_index(corner_b).ok_or_else(|| Error::UnknownVertex(corner_b.into()))?;
    let (oa, ob) = (a.chamber.corners[ia].order, b.chamber.corners[ib].order);
    if oa != ob {
        return Err(Error::InequivalentSlices(format!("angle orders {oa} and {ob} differ")));
    }
    let (ma, mb) = (a.corner_mark(ia)?, b.corner_mark(ib)?);
    if !ma.same_group(mb) {
        return Err(Error::InequivalentSlices(format!("corner groups {ma} and {mb} differ")));
    }
    let (sa, ta) = a.chamber.corner_sides(ia);
    let (sb, tb) = b.chamber.corner_sides(ib);
    glue_chains(a, chain(&a.chamber, ta, sa), b, chain(&b.chamber, tb, sb), catalog)
}

/// Result of lifting torus data to a principal T^r bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub data: PolarData,
    /// Per vertex: T^r meets the lifted isotropy group trivially.
    pub free: Vec<(String, bool)>,
}

impl Lift {
    pub fn is_free(&self) -> bool {
        self.free.iter().all(|(_, f)| *f)
    }
}

fn torus_mark<'a>(data: &'a PolarData, v: &Vertex) -> Result<&'a TorusSubgroup> {
    data.mark(v)?.as_torus().ok_or_else(|| Error::NotTorus(v.to_string()))
}

/// Replace each vertex group K by the graph {(φ_K(k), k)} ⊂ T^r × T^n. Homomorphisms are
/// given on the parameter lattice of K (coordinates with respect to K's generators).
pub fn bundle_lift(data: &PolarData, r: usize, homs: &BTreeMap<String, TorusHom>, catalog: &Catalog) -> Result<Lift> {
    let vertices = data.vertices();
    let mut phis: BTreeMap<Vertex, TorusHom> = BTreeMap::new();
    let mut n = None;
    for v in &vertices {
        let k = torus_mark(data, v)?;
        if *n.get_or_insert(k.rank) != k.rank {
            return Err(Error::RankMismatch { expected: n.unwrap(), found: k.rank });
        }
        let dim = k.generators.len();
        if k.dim() != dim {
            return Err(Error::NotTorus(format!("generators of {v} are not independent")));
        }
        let phi = match homs.get(&v.to_string()) {
            Some(phi) => phi.clone(),
            None if dim == 0 => TorusHom::zero(0, r),
            None => return Err(Error::MissingHom(v.to_string())),
        };
        if phi.source_rank != dim || phi.target_rank != r {
            return Err(Error::RankMismatch { expected: dim, found: phi.source_rank });
        }
        phis.insert(v.clone(), phi);
    }
    for name in homs.keys() {
        data.vertex(name)?;
    }
    let n = n.unwrap_or(0);
    for (u, k) in data.arrows() {
        let gu = torus_mark(data, &u)?;
        let gk = torus_mark(data, &k)?;
        let mut coords = Vec::new();
        for g in &gu.generators {
            let c = integer_coordinates(&gk.generators, g)
                .ok_or_else(|| Error::IncompatibleRestriction { from: u.to_string(), to: k.to_string() })?;
            coords.push(c);
        }
        let sub = TorusSubgroup { rank: gk.generators.len(), generators: coords };
        let restricted = restrict_hom(&phis[&k], &sub)?;
        if restricted.matrix != phis[&u].matrix {
            return Err(Error::IncompatibleRestriction { from: u.to_string(), to: k.to_string() });
        }
    }
    let mut free = Vec::new();
    let mut lifted: BTreeMap<Vertex, GroupRef> = BTreeMap::new();
    for v in &vertices {
        let k = torus_mark(data, v)?;
        let phi = &phis[v];
        let gens: Vec<IntVec> = k
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let mut e = vec![0; k.generators.len()];
                e[j] = 1;
                let mut out = phi.apply(&e);
                out.extend_from_slice(g);
                out
            })
            .collect();
        let sub = TorusSubgroup::new(r + n, gens)?;
        // T^r × {e} meets the graph trivially iff the projection to the second factor is
        // injective on its lattice, i.e. the lifted generators stay independent
        let projected: Vec<IntVec> = sub.generators.iter().map(|g| g[r..].to_vec()).collect();
        let injective = crate::groups::lattice_span(&projected, n)?.rank == sub.generators.len();
        free.push((v.to_string(), injective));
        lifted.insert(v.clone(), GroupRef::Torus(sub));
    }
    let mut graph =
        GroupGraph { principal: lifted[&Vertex::Principal].clone(), faces: BTreeMap::new(), corners: BTreeMap::new() };
    for (v, g) in lifted {
        match v {
            Vertex::Principal => {}
            Vertex::Face(s) => {
                graph.faces.insert(s, g);
            }
            Vertex::Corner(c) => {
                graph.corners.insert(c, g);
            }
        }
    }
    let out = PolarData { chamber: data.chamber.clone(), graph, pi: data.pi.clone(), symmetry: data.symmetry.clone() };
    Ok(Lift { data: finish(out, catalog)?, free })
}

/// Project lifted marks to the last n coordinates, forgetting the T^r factor.
pub fn forget_l(data: &PolarData, r: usize) -> Result<PolarData> {
    let project = |g: &GroupRef, v: &Vertex| -> Result<GroupRef> {
        let t = g.as_torus().ok_or_else(|| Error::NotTorus(v.to_string()))?;
        if t.rank < r {
            return Err(Error::RankMismatch { expected: r, found: t.rank });
        }
        let gens = t.generators.iter().map(|x| x[r..].to_vec()).collect();
        Ok(GroupRef::Torus(TorusSubgroup::new(t.rank - r, gens)?))
    };
    let mut out = data.clone();
    out.graph.principal = project(&data.graph.principal, &Vertex::Principal)?;
    for (s, g) in out.graph.faces.iter_mut() {
        *g = project(g, &Vertex::Face(s.clone()))?;
    }
    for (c, g) in out.graph.corners.iter_mut() {
        *g = project(g, &Vertex::Corner(c.clone()))?;
    }
    Ok(out)
}

impl ChamberSymmetry {
    pub const IDENTITY: ChamberSymmetry = ChamberSymmetry { rotation: 0, reflect: false };

    pub fn side(&self, i: usize, k: usize) -> usize {
        if self.reflect {
            (self.rotation + k - i % k) % k
        } else {
            (self.rotation + i) % k
        }
    }

    pub fn corner(&self, i: usize, k: usize) -> usize {
        if self.reflect {
            (self.rotation + 2 * k - i % k - 1) % k
        } else {
            (self.rotation + i) % k
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ChamberSymmetry, k: usize) -> ChamberSymmetry {
        if self.reflect {
            ChamberSymmetry { rotation: (self.rotation + k - other.rotation % k) % k, reflect: !other.reflect }
        } else {
            ChamberSymmetry { rotation: (self.rotation + other.rotation) % k, reflect: other.reflect }
        }
    }
}

/// Quotient of Coxeter polar data by a group Γ of marked-chamber automorphisms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub base: PolarData,
    pub gamma: GammaSpec,
    pub elements: Vec<ChamberSymmetry>,
    pub side_orbits: Vec<Vec<String>>,
    pub corner_orbits: Vec<Vec<String>>,
    pub polar_group: String,
    pub normal: bool,
}

fn closure(gens: &[ChamberSymmetry], k: usize) -> Vec<ChamberSymmetry> {
    let norm = |g: &ChamberSymmetry| ChamberSymmetry { rotation: g.rotation % k, reflect: g.reflect };
    let mut set: BTreeSet<ChamberSymmetry> = BTreeSet::from([ChamberSymmetry::IDENTITY]);
    let mut frontier = vec![ChamberSymmetry::IDENTITY];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = norm(&g.compose(&norm(s), k));
            if set.insert(h) {
                frontier.push(h);
            }
        }
    }
    set.into_iter().collect()
}

/// Classes of marks identified by the declared conjugation witnesses.
fn conjugacy_classes(gamma: &GammaSpec) -> Vec<Vec<GroupRef>> {
    let mut classes: Vec<Vec<GroupRef>> = Vec::new();
    let find =
        |classes: &Vec<Vec<GroupRef>>, g: &GroupRef| classes.iter().position(|c| c.iter().any(|x| x.same_group(g)));
    for w in &gamma.conjugations {
        let a = find(&classes, &w.from);
        let b = find(&classes, &w.to);
        match (a, b) {
            (None, None) => classes.push(vec![w.from.clone(), w.to.clone()]),
            (Some(i), None) => classes[i].push(w.to.clone()),
            (None, Some(j)) => classes[j].push(w.from.clone()),
            (Some(i), Some(j)) if i != j => {
                let moved = classes.remove(i.max(j));
                classes[i.min(j)].extend(moved);
            }
            _ => {}
        }
    }
    classes
}

fn orbits(k: usize, elements: &[ChamberSymmetry], act: impl Fn(&ChamberSymmetry, usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if seen[i] {
            continue;
        }
        let mut orbit: Vec<usize> = elements.iter().map(|g| act(g, i)).collect();
        orbit.sort();
        orbit.dedup();
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit);
    }
    out
}

pub fn quotient_descriptor(data: &PolarData, gamma: &GammaSpec) -> Result<QuotientDescriptor> {
    let c = &data.chamber;
    let k = c.k();
    let elements = closure(&gamma.generators, k);
    let lengths_match = |i: usize, j: usize| match (c.sides[i].length, c.sides[j].length) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        (None, None) => true,
        _ => false,
    };
    let classes = conjugacy_classes(gamma);
    let conjugate = |a: &GroupRef, b: &GroupRef| {
        a.same_group(b)
            || classes.iter().any(|cl| cl.iter().any(|x| x.same_group(a)) && cl.iter().any(|x| x.same_group(b)))
    };
    let describe = |g: &ChamberSymmetry| format!("{}{}", if g.reflect { "reflect+" } else { "rot" }, g.rotation);
    // (a) strata preservation
    for g in &elements {
        for i in 0..k {
            if !lengths_match(i, g.side(i, k)) {
                return Err(Error::NotStrataPreserving(format!("{}: side lengths differ", describe(g))));
            }
        }
        for i in 0..c.corners.len() {
            if c.corners[i].order != c.corners[g.corner(i, k)].order {
                return Err(Error::NotStrataPreserving(format!("{}: corner orders differ", describe(g))));
            }
        }
    }
    // (b) conjugation witnesses
    for g in &elements {
        for i in 0..k {
            let (a, b) = (data.face_mark(i)?, data.face_mark(g.side(i, k))?);
            if !conjugate(a, b) {
                return Err(Error::MissingWitness { from: a.to_string(), to: b.to_string() });
            }
        }
        for i in 0..c.corners.len() {
            let (a, b) = (data.corner_mark(i)?, data.corner_mark(g.corner(i, k))?);
            if !conjugate(a, b) {
                return Err(Error::MissingWitness { from: a.to_string(), to: b.to_string() });
            }
        }
    }
    // (c) declared normality
    let normal = if elements.len() == 1 {
        true
    } else {
        let declared = gamma.normal.or_else(|| data.pi.as_ref().and_then(|p| p.normal.get(&gamma.label).copied()));
        match declared {
            None => return Err(Error::NormalityUndeclared(gamma.label.clone())),
            Some(false) => return Err(Error::NotNormal(gamma.label.clone())),
            Some(true) => true,
        }
    };
    let side_orbits = orbits(k, &elements, |g, i| g.side(i, k))
        .into_iter()
        .map(|o| o.into_iter().map(|i| c.sides[i].id.clone()).collect())
        .collect();
    let corner_orbits = orbits(c.corners.len(), &elements, |g, i| g.corner(i, k))
        .into_iter()
        .map(|o| o.into_iter().map(|i| c.corners[i].id.clone()).collect())
        .collect();
    let pi_name = data.pi.as_ref().map(|p| if p.name.is_empty() { "Π".to_string() } else { p.name.clone() });
    let polar_group = format!("{}·{}", pi_name.unwrap_or_else(|| "Π".into()), gamma.label);
    Ok(QuotientDescriptor {
        base: data.clone(),
        gamma: gamma.clone(),
        elements,
        side_orbits,
        corner_orbits,
        polar_group,
        normal,
    })
}

/// Descriptor G/H ×_Π Σ of an exceptional polar manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalDescriptor {
    pub homogeneous: String,
    pub section: String,
    pub polar_group: String,
    pub action: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cover {
    Coxeter(PolarData),
    Exceptional(ExceptionalDescriptor),
}

pub fn cover_expand(desc: &QuotientDescriptor) -> Result<Cover> {
    let base = &desc.base;
    let k = base.chamber.k();
    if desc.elements.is_empty() || !desc.elements.contains(&ChamberSymmetry::IDENTITY) {
        return Err(Error::MalformedDescriptor("element list must contain the identity".into()));
    }
    if closure(&desc.gamma.generators, k) != desc.elements {
        return Err(Error::MalformedDescriptor("elements are not the closure of the generators".into()));
    }
    let singular = (0..k).any(|i| base.face_mark(i).map(|m| !m.same_group(&base.graph.principal)).unwrap_or(false));
    if !singular {
        return Ok(Cover::Exceptional(ExceptionalDescriptor {
            homogeneous: format!("G/{}", base.graph.principal),
            section: "Σ".into(),
            polar_group: desc.polar_group.clone(),
            action: format!("{} acting on the chamber by {:?}", desc.gamma.label, desc.gamma.generators),
        }));
    }
    let mut out = base.clone();
    if desc.elements.len() > 1 {
        out.symmetry = Some(desc.gamma.clone());
    }
    Ok(Cover::Coxeter(out))
}
