//! Coxeter matrix, reflection development and section invariants.

pub mod develop;
pub mod model;
pub mod realize;

pub use develop::{develop, DevelopOptions, DevelopStatus, Development, Element};
pub use model::{Model, Wall, M3, V3};
pub use realize::{realize_chamber, PolygonRealization, Realization};

use crate::error::{Error, Result};
use crate::polar_data::{chamber_geometry, euler_characteristic, pi_problems, Area, Kappa, PiOrder, PolarData, Q};
use num_integer::Integer;
use std::fmt;

/// Symmetric matrix of orders m_ij; `None` stands for ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    pub entries: Vec<Vec<Option<u32>>>,
}

impl CoxeterMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i][j]
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|m| m.map_or_else(|| "∞".to_string(), |m| m.to_string())).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn coxeter_matrix(data: &PolarData) -> CoxeterMatrix {
    let c = &data.chamber;
    if c.dimension == 1 {
        return CoxeterMatrix { entries: vec![vec![Some(1), None], vec![None, Some(1)]] };
    }
    let k = c.k();
    let mut entries = vec![vec![None; k]; k];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    for (ci, corner) in c.corners.iter().enumerate() {
        let (a, b) = c.corner_sides(ci);
        if a == b {
            continue;
        }
        entries[a][b] = Some(corner.order);
        entries[b][a] = Some(corner.order);
    }
    CoxeterMatrix { entries }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionInvariants {
    pub kappa: Kappa,
    pub area: Area,
    pub pi_order: u64,
    pub chi: Q,
    pub genus: Option<i64>,
    pub total_area: Area,
    pub problems: Vec<String>,
}

impl fmt::Display for SectionInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "κ = {}", self.kappa)?;
        writeln!(f, "A = {}", self.area)?;
        writeln!(f, "|Π| = {}", self.pi_order)?;
        writeln!(f, "|Π|·A = {}", self.total_area)?;
        writeln!(f, "χ = {}", self.chi)?;
        match self.genus {
            Some(g) => writeln!(f, "genus = {g}")?,
            None => writeln!(f, "genus = n/a")?,
        }
        for p in &self.problems {
            writeln!(f, "problem: {p}")?;
        }
        Ok(())
    }
}

pub fn section_invariants(data: &PolarData) -> Result<SectionInvariants> {
    let geom = chamber_geometry(&data.chamber)?;
    let pi = data.pi.as_ref().ok_or(Error::MissingPolarGroup)?;
    let order = match pi.order {
        PiOrder::Finite(n) => n,
        PiOrder::Infinite => return Err(Error::NonCompactSection),
    };
    let chi = if geom.kappa == Kappa::Flat || data.chamber.dimension == 1 {
        Q::from(0)
    } else {
        euler_characteristic(order, &geom)
    };
    let total_area = match &geom.area {
        Area::Exact(a) => Area::Exact(a * Q::from(order as i64)),
        Area::Free => Area::Free,
    };
    let genus = (pi.orientable == Some(true) && chi.is_integer() && chi.to_integer().is_even())
        .then(|| (2 - chi.to_integer()) / 2);
    let problems = pi_problems(pi, &data.chamber, &geom).into_iter().collect();
    Ok(SectionInvariants { kappa: geom.kappa, area: geom.area, pi_order: order, chi, genus, total_area, problems })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionRelation {
    /// |Π| equals the Coxeter order: the section is the universal one.
    Universal,
    /// Σ = Σ′ / Z_n for the index n = order(M)/|Π|.
    Quotient(u64),
    /// The Coxeter group is infinite; no finite comparison is available.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiConsistency {
    pub coxeter_order: Option<usize>,
    pub pi_order: PiOrder,
    pub relation: SectionRelation,
    pub chi: Option<Q>,
    pub problems: Vec<String>,
}

impl PiConsistency {
    pub fn is_consistent(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for PiConsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coxeter_order {
            Some(n) => writeln!(f, "order(M) = {n}")?,
            None => writeln!(f, "order(M) = ∞")?,
        }
        match self.pi_order {
            PiOrder::Finite(n) => writeln!(f, "|Π| = {n}")?,
            PiOrder::Infinite => writeln!(f, "|Π| = ∞")?,
        }
        if let Some(chi) = self.chi {
            writeln!(f, "χ = {chi}")?;
        }
        match &self.relation {
            SectionRelation::Universal => writeln!(f, "Σ = Σ′")?,
            SectionRelation::Quotient(n) => writeln!(f, "Σ = Σ′/Z{n}")?,
            SectionRelation::NotApplicable => writeln!(f, "Σ′ infinite")?,
        }
        for p in &self.problems {
            writeln!(f, "problem: {p}")?;
        }
        writeln!(f, "{}", if self.is_consistent() { "consistent" } else { "inconsistent" })
    }
}

/// Compare the declared polar group with the developed Coxeter group.
pub fn pi_consistency(data: &PolarData, dev: &Development) -> Result<PiConsistency> {
    let pi = data.pi.as_ref().ok_or(Error::MissingPolarGroup)?;
    let geom = chamber_geometry(&data.chamber)?;
    let coxeter_order = dev.order();
    let mut problems: Vec<String> = pi_problems(pi, &data.chamber, &geom).into_iter().collect();
    let chi = match pi.order {
        PiOrder::Finite(n) if data.chamber.dimension == 2 && geom.kappa != Kappa::Flat => {
            Some(euler_characteristic(n, &geom))
        }
        PiOrder::Finite(_) => Some(Q::from(0)),
        PiOrder::Infinite => None,
    };
    let relation = match (coxeter_order, pi.order) {
        (Some(n), PiOrder::Finite(p)) => {
            if p > n as u64 {
                return Err(Error::PolarGroupInconsistent { pi: p, order: n });
            }
            if n as u64 % p != 0 {
                problems.push(format!("|Π| = {p} does not divide order(M) = {n}"));
                SectionRelation::NotApplicable
            } else if n as u64 == p {
                SectionRelation::Universal
            } else {
                SectionRelation::Quotient(n as u64 / p)
            }
        }
        (Some(n), PiOrder::Infinite) => {
            problems.push(format!("Π infinite but order(M) = {n}"));
            SectionRelation::NotApplicable
        }
        (None, _) => SectionRelation::NotApplicable,
    };
    Ok(PiConsistency { coxeter_order, pi_order: pi.order, relation, chi, problems })
}
