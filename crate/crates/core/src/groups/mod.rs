//! Groups marking strata: closed subtori of T^n as integer lattices, and named compact
//! groups looked up in a catalog of declared facts.

pub mod catalog;
pub mod lattice;

pub use catalog::{Catalog, CatalogEntry, CatalogReport, Coh1Decl, GenerationDecl, SubgroupDecl};
pub use lattice::{is_primitive, lattice_span, sign_normalize, IntVec, Lattice, LatticeSpan};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Closed subgroup of T^n given by generators of its Lie-algebra lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusSubgroup {
    pub rank: usize,
    pub generators: Vec<IntVec>,
}

impl TorusSubgroup {
    pub fn new(rank: usize, generators: Vec<IntVec>) -> Result<Self> {
        for g in &generators {
            if g.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.len() });
            }
        }
        let generators = if generators.len() == 1 { vec![sign_normalize(&generators[0])] } else { generators };
        Ok(TorusSubgroup { rank, generators })
    }

    pub fn trivial(rank: usize) -> Self {
        TorusSubgroup { rank, generators: Vec::new() }
    }

    pub fn circle(v: &[i64]) -> Self {
        TorusSubgroup { rank: v.len(), generators: vec![sign_normalize(v)] }
    }

    pub fn full(rank: usize) -> Self {
        TorusSubgroup { rank, generators: Lattice::full(rank).basis }
    }

    pub fn span(&self) -> Result<LatticeSpan> {
        lattice_span(&self.generators, self.rank)
    }

    /// Lattice of the closed connected subgroup (saturation of the generators).
    pub fn lattice(&self) -> Result<Lattice> {
        lattice::saturate(&self.generators, self.rank)
    }

    pub fn dim(&self) -> usize {
        self.span().map(|s| s.rank).unwrap_or(0)
    }

    pub fn same_subgroup(&self, other: &TorusSubgroup) -> bool {
        self.rank == other.rank && matches!((self.lattice(), other.lattice()), (Ok(a), Ok(b)) if a == b)
    }

    pub fn contains(&self, other: &TorusSubgroup) -> bool {
        self.rank == other.rank && matches!((self.lattice(), other.lattice()), (Ok(a), Ok(b)) if a.contains_lattice(&b))
    }
}

impl fmt::Display for TorusSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vecs: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let s: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                format!("({})", s.join(","))
            })
            .collect();
        match vecs.len() {
            0 => write!(f, "{{e}}"),
            1 => write!(f, "S1{}", vecs[0]),
            _ => write!(f, "<{}>", vecs.join(",")),
        }
    }
}

/// Homomorphism T^n -> T^r as an r x n integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusHom {
    pub source_rank: usize,
    pub target_rank: usize,
    pub matrix: Vec<IntVec>,
}

impl TorusHom {
    pub fn new(source_rank: usize, target_rank: usize, matrix: Vec<IntVec>) -> Result<Self> {
        if matrix.len() != target_rank {
            return Err(Error::RankMismatch { expected: target_rank, found: matrix.len() });
        }
        for row in &matrix {
            if row.len() != source_rank {
                return Err(Error::RankMismatch { expected: source_rank, found: row.len() });
            }
        }
        Ok(TorusHom { source_rank, target_rank, matrix })
    }

    pub fn identity(n: usize) -> Self {
        TorusHom { source_rank: n, target_rank: n, matrix: Lattice::full(n).basis }
    }

    pub fn zero(source_rank: usize, target_rank: usize) -> Self {
        TorusHom { source_rank, target_rank, matrix: vec![vec![0; source_rank]; target_rank] }
    }

    pub fn apply(&self, v: &[i64]) -> IntVec {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }
}

/// Restriction of `phi` to the subgroup, expressed on the subgroup's parameter lattice
/// (one column per generator).
pub fn restrict_hom(phi: &TorusHom, sub: &TorusSubgroup) -> Result<TorusHom> {
    if sub.rank != phi.source_rank {
        return Err(Error::RankMismatch { expected: phi.source_rank, found: sub.rank });
    }
    let k = sub.generators.len();
    let matrix = phi
        .matrix
        .iter()
        .map(|row| (0..k).map(|j| row.iter().zip(&sub.generators[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    Ok(TorusHom { source_rank: k, target_rank: phi.target_rank, matrix })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NamedGroup {
    pub name: String,
}

/// Isotropy label: an exact subtorus or a catalog name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupRef {
    Torus(TorusSubgroup),
    Named(NamedGroup),
}

impl GroupRef {
    pub fn named(name: &str) -> Self {
        GroupRef::Named(NamedGroup { name: name.to_string() })
    }

    pub fn as_torus(&self) -> Option<&TorusSubgroup> {
        match self {
            GroupRef::Torus(t) => Some(t),
            GroupRef::Named(_) => None,
        }
    }

    /// Equality as groups: tori by saturated lattice, names verbatim.
    pub fn same_group(&self, other: &GroupRef) -> bool {
        match (self, other) {
            (GroupRef::Torus(a), GroupRef::Torus(b)) => a.same_subgroup(b),
            (GroupRef::Named(a), GroupRef::Named(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for GroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupRef::Torus(t) => t.fmt(f),
            GroupRef::Named(n) => f.write_str(&n.name),
        }
    }
}
