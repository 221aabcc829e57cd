//! Catalog of named compact groups with declared subgroup, slice and generation facts.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_CATALOG_JSON: &str = include_str!("../../data/default_catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDecl {
    pub name: String,
    pub quotient_is_sphere: bool,
    pub sphere_dim: i32,
}

/// Cohomogeneity-one slice fact: the pair of face groups meeting at a corner of angle π/m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coh1Decl {
    pub pair: [String; 2],
    pub weyl_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationDecl {
    pub generators: Vec<String>,
    pub generated: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: u32,
    #[serde(default)]
    pub subgroups: Vec<SubgroupDecl>,
    #[serde(default)]
    pub coh1: Vec<Coh1Decl>,
    #[serde(default)]
    pub generation: Vec<GenerationDecl>,
}

impl CatalogEntry {
    pub fn subgroup(&self, name: &str) -> Option<&SubgroupDecl> {
        self.subgroups.iter().find(|s| s.name == name)
    }

    pub fn coh1_order(&self, a: &str, b: &str) -> Option<u32> {
        self.coh1
            .iter()
            .find(|c| (c.pair[0] == a && c.pair[1] == b) || (c.pair[0] == b && c.pair[1] == a))
            .map(|c| c.weyl_order)
    }

    pub fn generated_by(&self, gens: &[&str]) -> bool {
        let want: BTreeSet<&str> = gens.iter().copied().collect();
        self.generation.iter().any(|g| {
            g.generated == self.name && g.generators.iter().map(String::as_str).collect::<BTreeSet<_>>() == want
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogViolation {
    pub entry: String,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogReport {
    pub violations: Vec<CatalogViolation>,
}

impl CatalogReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_catalog(entries: &[CatalogEntry]) -> Result<CatalogReport> {
    let mut by_name: BTreeMap<&str, &CatalogEntry> = BTreeMap::new();
    for e in entries {
        if by_name.insert(&e.name, e).is_some() {
            return Err(Error::DuplicateName(e.name.clone()));
        }
    }
    let mut violations = Vec::new();
    let mut flag = |entry: &str, location: String, message: String| {
        violations.push(CatalogViolation { entry: entry.to_string(), location, message })
    };
    for e in entries {
        for (i, s) in e.subgroups.iter().enumerate() {
            let loc = format!("subgroups[{i}]");
            match by_name.get(s.name.as_str()) {
                None => flag(&e.name, loc, format!("unresolved name `{}`", s.name)),
                Some(h) => {
                    if h.dim > e.dim {
                        flag(&e.name, loc.clone(), format!("dim({}) > dim({})", s.name, e.name));
                    }
                    if s.quotient_is_sphere {
                        let diff = i64::from(e.dim) - i64::from(h.dim);
                        if s.sphere_dim < 0 {
                            flag(&e.name, loc, "sphere quotient with negative sphere_dim".into());
                        } else if diff != i64::from(s.sphere_dim) {
                            flag(
                                &e.name,
                                loc,
                                format!("dim {} - dim {} = {} but sphere_dim = {}", e.name, s.name, diff, s.sphere_dim),
                            );
                        }
                    }
                }
            }
            if s.sphere_dim < -1 {
                flag(&e.name, format!("subgroups[{i}]"), "sphere_dim below -1".into());
            }
        }
        for (i, c) in e.coh1.iter().enumerate() {
            let loc = format!("coh1[{i}]");
            if ![2, 3, 4, 6].contains(&c.weyl_order) {
                flag(&e.name, loc.clone(), format!("order {} not in {{2,3,4,6}}", c.weyl_order));
            }
            for n in &c.pair {
                if !by_name.contains_key(n.as_str()) {
                    flag(&e.name, loc.clone(), format!("unresolved name `{n}`"));
                }
            }
        }
        for (i, g) in e.generation.iter().enumerate() {
            let loc = format!("generation[{i}]");
            for n in g.generators.iter().chain(std::iter::once(&g.generated)) {
                if !by_name.contains_key(n.as_str()) {
                    flag(&e.name, loc.clone(), format!("unresolved name `{n}`"));
                }
            }
        }
    }
    Ok(CatalogReport { violations })
}

/// A validated catalog indexed by name.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn from_entries(entries: Vec<CatalogEntry>) -> Result<(Self, CatalogReport)> {
        let report = validate_catalog(&entries)?;
        let entries = entries.into_iter().map(|e| (e.name.clone(), e)).collect();
        Ok((Catalog { entries }, report))
    }

    pub fn from_json(text: &str) -> std::result::Result<(Self, CatalogReport), String> {
        let entries: Vec<CatalogEntry> = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Catalog::from_entries(entries).map_err(|e| e.to_string())
    }

    pub fn default_catalog() -> Self {
        Catalog::from_json(DEFAULT_CATALOG_JSON).expect("bundled catalog parses").0
    }

    pub fn empty() -> Self {
        Catalog::default()
    }

    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.get(name).ok_or_else(|| Error::UnresolvedName(name.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }
}
