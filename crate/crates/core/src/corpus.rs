//! Bundled example data: the four figures, the hexagon, CP² and a few small chambers.

use crate::constructions::connected_sum_fixed_points;
use crate::error::Result;
use crate::groups::{Catalog, GroupRef, TorusHom, TorusSubgroup};
use crate::io::to_json;
use crate::polar_data::{
    Chamber, ChamberSymmetry, Conjugation, DeclaredCurvature, GammaSpec, GroupGraph, PolarData, PolarGroupSpec,
};
use crate::torus_actions::{polar_data_from_sequence, WeightSequence};
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn named(data: &[(&str, &str)]) -> BTreeMap<String, GroupRef> {
    data.iter().map(|(k, v)| (k.to_string(), GroupRef::named(v))).collect()
}

/// SU(6) on CP^14: triangle with angles π/4, π/2, π/3.
pub fn figure1() -> PolarData {
    PolarData {
        chamber: Chamber::polygon(DeclaredCurvature::Auto, &[4, 2, 3]),
        graph: GroupGraph {
            principal: GroupRef::named("Sp(1)^3"),
            faces: named(&[("s0", "Sp(1)Sp(2)"), ("s1", "Sp(1)^3U(1)"), ("s2", "Sp(2)Sp(1)")]),
            corners: named(&[("c0", "S(U(2)U(4))"), ("c1", "Sp(2)U(2)"), ("c2", "Sp(3)")]),
        },
        pi: Some(PolarGroupSpec::finite(24, "C3/Z2", Some(false))),
        symmetry: None,
    }
}

/// SO(3) on SU(3)/SO(3): flat equilateral triangle.
pub fn figure2() -> PolarData {
    let mut pi = PolarGroupSpec::finite(6, "D3", None);
    pi.normal = BTreeMap::from([("Z3".to_string(), true), ("Z2".to_string(), false)]);
    PolarData {
        chamber: Chamber::polygon(DeclaredCurvature::Auto, &[3, 3, 3]),
        graph: GroupGraph {
            principal: GroupRef::named("Z2^2"),
            faces: named(&[("s0", "O(2)"), ("s1", "O''(2)"), ("s2", "O'(2)")]),
            corners: named(&[("c0", "SO(3)"), ("c1", "SO(3)"), ("c2", "SO(3)")]),
        },
        pi: Some(pi),
        symmetry: None,
    }
}

/// Rotation of the Figure 2 triangle, with the conjugations it needs.
pub fn figure2_gamma_z3() -> GammaSpec {
    GammaSpec {
        label: "Z3".into(),
        generators: vec![ChamberSymmetry { rotation: 1, reflect: false }],
        conjugations: vec![
            Conjugation { from: GroupRef::named("O(2)"), to: GroupRef::named("O''(2)") },
            Conjugation { from: GroupRef::named("O''(2)"), to: GroupRef::named("O'(2)") },
        ],
        normal: None,
    }
}

/// Reflection of the Figure 2 triangle fixing s0; not normal in D3.
pub fn figure2_gamma_z2() -> GammaSpec {
    GammaSpec {
        label: "Z2".into(),
        generators: vec![ChamberSymmetry { rotation: 0, reflect: true }],
        conjugations: vec![Conjugation { from: GroupRef::named("O''(2)"), to: GroupRef::named("O'(2)") }],
        normal: None,
    }
}

/// SO(4) on M^8: hyperbolic triangle with angles π/6, π/3, π/6.
pub fn figure3() -> PolarData {
    PolarData {
        chamber: Chamber::polygon(DeclaredCurvature::Auto, &[6, 3, 6]),
        graph: GroupGraph {
            principal: GroupRef::named("Z2^2"),
            faces: named(&[("s0", "O(2)"), ("s1", "O''(2)"), ("s2", "O'(2)")]),
            corners: named(&[("c0", "SO(4)"), ("c1", "SO(3)"), ("c2", "SO(4)")]),
        },
        pi: Some(PolarGroupSpec::finite(12, "D6", Some(true))),
        symmetry: None,
    }
}

pub fn figure4_sequence(k: i64) -> WeightSequence {
    WeightSequence::new(vec![vec![0, 1], vec![1, 0], vec![k, 1], vec![1, 0]]).expect("rank 2")
}

/// T² on S²×S² (k even) or CP² # −CP² (k odd).
pub fn figure4(k: i64) -> PolarData {
    let mut d = polar_data_from_sequence(&figure4_sequence(k)).expect("legal sequence");
    d.pi = Some(PolarGroupSpec::finite(4, "Z2^2", Some(true)));
    d
}

pub fn cp2_sequence() -> WeightSequence {
    WeightSequence::new(vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).expect("rank 2")
}

/// Standard T² action on CP², section RP².
pub fn cp2() -> PolarData {
    let mut d = polar_data_from_sequence(&cp2_sequence()).expect("legal sequence");
    d.pi = Some(PolarGroupSpec::finite(4, "Z2^2", Some(false)));
    d
}

/// Connected sum of two k = 0 squares at fixed points: a right-angled hexagon.
pub fn hexagon() -> Result<PolarData> {
    let a = figure4(0);
    connected_sum_fixed_points(&a, "c0", &a, "c1", &Catalog::empty())
}

/// Spherical biangle with angle π/3, marked like a corner of Figure 2.
pub fn biangle() -> PolarData {
    PolarData {
        chamber: Chamber::polygon(DeclaredCurvature::Auto, &[3, 3]),
        graph: GroupGraph {
            principal: GroupRef::named("Z2^2"),
            faces: named(&[("s0", "O(2)"), ("s1", "O'(2)")]),
            corners: named(&[("c0", "SO(3)"), ("c1", "SO(3)")]),
        },
        pi: Some(PolarGroupSpec::finite(6, "D3", Some(true))),
        symmetry: None,
    }
}

/// Circle rotating CP¹ = S², fixed points at both ends.
pub fn cp1_interval() -> PolarData {
    PolarData {
        chamber: Chamber::interval(DeclaredCurvature::Positive, Some(PI)),
        graph: GroupGraph {
            principal: GroupRef::Torus(TorusSubgroup::trivial(1)),
            faces: BTreeMap::from([
                ("e0".to_string(), GroupRef::Torus(TorusSubgroup::full(1))),
                ("e1".to_string(), GroupRef::Torus(TorusSubgroup::full(1))),
            ]),
            corners: BTreeMap::new(),
        },
        pi: Some(PolarGroupSpec::finite(2, "Z2", None)),
        symmetry: None,
    }
}

/// Homomorphisms for the Hopf lift of `cp1_interval`: identity at e0, trivial at e1.
pub fn hopf_homs() -> BTreeMap<String, TorusHom> {
    BTreeMap::from([
        ("e0".to_string(), TorusHom::new(1, 1, vec![vec![1]]).expect("1x1")),
        ("e1".to_string(), TorusHom::new(1, 1, vec![vec![0]]).expect("1x1")),
    ])
}

/// SO(3) on S³ with fixed points at both ends; chamber of length π.
pub fn sphere_interval() -> PolarData {
    PolarData {
        chamber: Chamber::interval(DeclaredCurvature::Positive, Some(PI)),
        graph: GroupGraph {
            principal: GroupRef::named("SO(2)"),
            faces: named(&[("e0", "SO(3)"), ("e1", "SO(3)")]),
            corners: BTreeMap::new(),
        },
        pi: Some(PolarGroupSpec::finite(2, "Z2", None)),
        symmetry: None,
    }
}

/// All polar data entries by file stem.
pub fn entries() -> Result<Vec<(&'static str, PolarData)>> {
    Ok(vec![
        ("figure1", figure1()),
        ("figure2", figure2()),
        ("figure3", figure3()),
        ("figure4", figure4(0)),
        ("figure4_k1", figure4(1)),
        ("hexagon", hexagon()?),
        ("cp2", cp2()),
        ("biangle", biangle()),
        ("cp1_interval", cp1_interval()),
        ("sphere_interval", sphere_interval()),
    ])
}

/// Every corpus file as (file name, contents).
pub fn files() -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> =
        entries()?.into_iter().map(|(n, d)| (format!("{n}.json"), to_json(&d))).collect();
    out.push(("figure2_gamma_z3.json".into(), to_json(&figure2_gamma_z3())));
    out.push(("figure2_gamma_z2.json".into(), to_json(&figure2_gamma_z2())));
    out.push(("figure4_sequence.json".into(), to_json(&figure4_sequence(0))));
    out.push(("figure4_k1_sequence.json".into(), to_json(&figure4_sequence(1))));
    out.push(("cp2_sequence.json".into(), to_json(&cp2_sequence())));
    out.push(("cp1_hopf_homs.json".into(), to_json(&hopf_homs())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::section_invariants;
    use crate::polar_data::{validate, Kappa};

    #[test]
    fn corpus_validates() {
        let cat = Catalog::default_catalog();
        for (name, d) in entries().unwrap() {
            let r = validate(&d, &cat).unwrap();
            assert!(r.is_valid(), "{name}\n{r}");
        }
    }

    #[test]
    fn hexagon_invariants() {
        let h = hexagon().unwrap();
        assert_eq!(h.chamber.k(), 6);
        assert!(h.chamber.corners.iter().all(|c| c.order == 2));
        let inv = section_invariants(&h).unwrap();
        assert_eq!(inv.kappa, Kappa::Negative);
        assert_eq!(inv.chi, crate::polar_data::Q::from(-2));
        assert_eq!(inv.genus, Some(2));
    }
}
