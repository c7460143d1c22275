//! Named small complexes, each checked against recorded invariants when loaded.

use std::fmt;

use thiserror::Error;

use crate::bistellar::{apply_generalized_move, classify_move, MoveClass};
use crate::complex::{are_isomorphic, cycle, octahedron, standard_ball, standard_sphere, Face, SimplicialComplex};
use crate::homology::reduced_betti;
use crate::structure::{is_pseudomanifold, is_weak_pseudomanifold};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog name {name:?}; valid names: {}", .valid.join(", "))]
    Unknown { name: String, valid: Vec<&'static str> },
    #[error("catalog entry {name} fails its {what} check: expected {expected}, got {got}")]
    Invalid { name: &'static str, what: &'static str, expected: String, got: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub f_vector: Vec<usize>,
    pub betti: Vec<usize>,
    pub weak_pseudomanifold: bool,
    pub pseudomanifold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub complex: SimplicialComplex,
    pub expected: Expected,
}

impl CatalogEntry {
    /// Recomputes every recorded invariant.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let k = &self.complex;
        let bad = |what, expected: String, got: String| CatalogError::Invalid { name: self.name, what, expected, got };
        let f = k.f_vector().0;
        if f != self.expected.f_vector {
            return Err(bad("f-vector", format!("{:?}", self.expected.f_vector), format!("{f:?}")));
        }
        let b = reduced_betti(k).0;
        if b != self.expected.betti {
            return Err(bad("betti", format!("{:?}", self.expected.betti), format!("{b:?}")));
        }
        let w = is_weak_pseudomanifold(k);
        if w != self.expected.weak_pseudomanifold {
            return Err(bad("weak pseudomanifold", self.expected.weak_pseudomanifold.to_string(), w.to_string()));
        }
        let p = is_pseudomanifold(k);
        if p != self.expected.pseudomanifold {
            return Err(bad("pseudomanifold", self.expected.pseudomanifold.to_string(), p.to_string()));
        }
        Ok(())
    }
}

const NAMES: &[&str] = &[
    "S0_2", "S1_3", "S2_4", "S3_5", "S4_6", "Delta0_1", "Delta1_2", "Delta2_3", "Delta3_4", "Delta4_5", "S1_4",
    "S1_5", "S1_6", "S1_7", "S1_8", "S1_9", "octahedron", "Bipyramid3", "Bipyramid5", "RP2_6", "Sigma1", "Sigma2",
    "Sigma3", "Sigma4", "Sigma5", "Upsilon1", "Upsilon2", "R", "DunceHat8",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn tri(list: &[[usize; 3]]) -> SimplicialComplex {
    SimplicialComplex::from_lists(list).expect("static facet list")
}

fn labels(n: usize) -> Vec<u8> {
    (1..=n as u8).collect()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn points(a: u8, b: u8) -> SimplicialComplex {
    SimplicialComplex::from_lists(&[[usize::from(a)], [usize::from(b)]]).expect("two points")
}

fn sphere_betti(d: usize) -> Vec<usize> {
    (0..=d).map(|q| usize::from(q == d)).collect()
}

pub fn rp2_6() -> SimplicialComplex {
    tri(&[[1, 2, 3], [1, 2, 4], [1, 3, 5], [1, 4, 6], [1, 5, 6], [2, 3, 6], [2, 4, 5], [2, 5, 6], [3, 4, 5], [3, 4, 6]])
}

pub fn sigma(i: usize) -> Option<SimplicialComplex> {
    let list: &[[usize; 3]] = match i {
        1 => &[[1, 2, 5], [1, 2, 6], [1, 5, 6], [2, 3, 5], [2, 3, 6], [3, 4, 5], [3, 4, 6], [4, 5, 6]],
        2 => &[[1, 2, 6], [1, 2, 7], [1, 6, 7], [2, 3, 6], [2, 3, 7], [3, 4, 6], [3, 4, 7], [4, 5, 6], [4, 5, 7], [5, 6, 7]],
        3 => &[[1, 2, 6], [1, 2, 7], [1, 6, 7], [2, 3, 4], [2, 3, 7], [2, 4, 6], [3, 4, 7], [4, 5, 6], [4, 5, 7], [5, 6, 7]],
        4 => &[[1, 2, 4], [1, 2, 7], [1, 4, 5], [1, 5, 6], [1, 6, 7], [2, 3, 4], [2, 3, 7], [3, 4, 7], [4, 5, 7], [5, 6, 7]],
        5 => &[[1, 2, 3], [1, 2, 6], [1, 3, 5], [1, 5, 6], [2, 3, 4], [2, 4, 6], [3, 4, 5], [4, 5, 7], [4, 6, 7], [5, 6, 7]],
        _ => return None,
    };
    Some(tri(list))
}

pub fn upsilon1() -> SimplicialComplex {
    standard_sphere(2, &[1, 2, 3, 7]).unwrap().union(&standard_sphere(2, &[4, 5, 6, 7]).unwrap())
}

pub fn upsilon2() -> SimplicialComplex {
    standard_sphere(2, &[4, 5, 6, 7]).unwrap().union(&bipyramid(&[1, 2, 3], 6, 7))
}

/// `κ_{1256}(RP²₆)`.
pub fn r_complex() -> SimplicialComplex {
    apply_generalized_move(&rp2_6(), Face::new([1, 2, 5, 6]).unwrap()).expect("admissible")
}

pub fn dunce_hat8() -> SimplicialComplex {
    tri(&[
        [1, 2, 8], [2, 3, 7], [1, 3, 7], [2, 7, 8], [6, 7, 8], [1, 6, 7], [1, 3, 6], [1, 3, 8], [3, 4, 8], [2, 3, 4],
        [1, 2, 4], [1, 4, 5], [1, 2, 5], [4, 5, 8], [5, 6, 8], [2, 5, 6], [2, 3, 6],
    ])
}

/// Suspension of the cycle through `ring` with apexes `top` and `bottom`.
pub fn bipyramid(ring: &[u8], top: u8, bottom: u8) -> SimplicialComplex {
    cycle(ring).expect("ring").join(&points(top, bottom)).expect("disjoint apexes")
}

pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    let entry = build(name).ok_or_else(|| CatalogError::Unknown { name: name.to_string(), valid: NAMES.to_vec() })?;
    entry.validate()?;
    Ok(entry)
}

fn build(name: &str) -> Option<CatalogEntry> {
    let name: &'static str = NAMES.iter().copied().find(|n| *n == name)?;
    let closed = |f: Vec<usize>, betti: Vec<usize>, pm: bool| Expected {
        f_vector: f,
        betti,
        weak_pseudomanifold: true,
        pseudomanifold: pm,
    };
    let (complex, expected) = match name {
        "S0_2" | "S1_3" | "S2_4" | "S3_5" | "S4_6" => {
            let d = usize::from(name.as_bytes()[1] - b'0');
            let f = (1..=d + 1).map(|k| binom(d + 2, k)).collect();
            (standard_sphere(d, &labels(d + 2)).unwrap(), closed(f, sphere_betti(d), true))
        }
        _ if name.starts_with("Delta") => {
            let d = usize::from(name.as_bytes()[5] - b'0');
            let f = (1..=d + 1).map(|k| binom(d + 1, k)).collect();
            let exp = Expected { f_vector: f, betti: vec![0; d + 1], weak_pseudomanifold: false, pseudomanifold: false };
            (standard_ball(d, &labels(d + 1)).unwrap(), exp)
        }
        _ if name.starts_with("S1_") => {
            let n: usize = name[3..].parse().ok()?;
            (cycle(&labels(n)).unwrap(), closed(vec![n, n], vec![0, 1], true))
        }
        "octahedron" => (octahedron(), closed(vec![6, 12, 8], sphere_betti(2), true)),
        "Bipyramid3" => (bipyramid(&[1, 2, 3], 4, 5), closed(vec![5, 9, 6], sphere_betti(2), true)),
        "Bipyramid5" => (bipyramid(&[1, 2, 3, 4, 5], 6, 7), closed(vec![7, 15, 10], sphere_betti(2), true)),
        "RP2_6" => (rp2_6(), closed(vec![6, 15, 10], vec![0, 1, 1], true)),
        "Sigma1" => (sigma(1)?, closed(vec![6, 12, 8], sphere_betti(2), true)),
        "Sigma2" | "Sigma3" | "Sigma4" | "Sigma5" => {
            let i = usize::from(name.as_bytes()[5] - b'0');
            (sigma(i)?, closed(vec![7, 15, 10], sphere_betti(2), true))
        }
        "Upsilon1" => (upsilon1(), closed(vec![7, 12, 8], vec![0, 0, 2], false)),
        "Upsilon2" => (upsilon2(), closed(vec![7, 15, 10], vec![0, 1, 2], false)),
        "R" => {
            let exp = Expected { f_vector: vec![6, 14, 10], betti: vec![0, 0, 1], weak_pseudomanifold: false, pseudomanifold: false };
            (r_complex(), exp)
        }
        "DunceHat8" => {
            let exp = Expected { f_vector: vec![8, 24, 17], betti: vec![0, 0, 0], weak_pseudomanifold: false, pseudomanifold: false };
            (dunce_hat8(), exp)
        }
        _ => return None,
    };
    Some(CatalogEntry { name, complex, expected })
}

/// Every catalog entry, validated.
pub fn all() -> Result<Vec<CatalogEntry>, CatalogError> {
    NAMES.iter().map(|n| get(n)).collect()
}

/// One of the six labeled move identities that tie the catalog labelings together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveCheck {
    pub label: char,
    pub source: &'static str,
    pub a_set: Face,
    pub expected_class: MoveClass,
    pub observed_class: MoveClass,
    pub result: SimplicialComplex,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for MoveCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) kappa_{{{}}}({}) -> {} [{}]: {}",
            self.label,
            self.a_set,
            self.source,
            self.observed_class,
            if self.passed { "ok" } else { "FAILED" },
            self.detail
        )
    }
}

fn iso(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    matches!(are_isomorphic(a, b), Ok(Some(_)))
}

/// Replays the labeled generalized moves on `RP2_6`, `Sigma2`, `Upsilon1`, `Upsilon2` and `Sigma4`.
pub fn move_checks() -> Vec<MoveCheck> {
    let a = |v: [u8; 4]| Face::new(v).unwrap();
    let cases: [(char, &'static str, SimplicialComplex, Face, MoveClass); 6] = [
        ('a', "RP2_6", rp2_6(), a([1, 2, 5, 6]), MoveClass::SingularBs1),
        ('b', "Sigma2", sigma(2).unwrap(), a([2, 3, 6, 7]), MoveClass::SingularBs1),
        ('c', "Upsilon1", upsilon1(), a([1, 2, 3, 6]), MoveClass::SingularBs1),
        ('d', "Upsilon2", upsilon2(), a([1, 2, 3, 6]), MoveClass::SingularBs2),
        ('e', "Sigma4", sigma(4).unwrap(), a([2, 3, 4, 6]), MoveClass::SingularBs1),
        ('f', "Sigma2", sigma(2).unwrap(), a([2, 3, 4, 6]), MoveClass::ProperBistellar),
    ];
    cases
        .into_iter()
        .map(|(label, source, k, a_set, expected_class)| {
            let m = classify_move(&k, a_set).expect("admissible");
            let result = apply_generalized_move(&k, a_set).expect("admissible");
            let (ok, detail) = match label {
                'a' => (!is_weak_pseudomanifold(&result) && result == r_complex(), "not a weak pseudomanifold".to_string()),
                'b' => {
                    let want = standard_sphere(2, &[1, 2, 6, 7]).unwrap().union(&bipyramid(&[4, 6, 7], 3, 5));
                    let shared = standard_sphere(2, &[1, 2, 6, 7]).unwrap().intersection(&bipyramid(&[4, 6, 7], 3, 5));
                    let edge = SimplicialComplex::from_lists(&[[6, 7]]).unwrap();
                    (result == want && shared == edge, "two 2-spheres sharing the edge 67".to_string())
                }
                'c' => (iso(&result, &upsilon2()), "isomorphic to Upsilon2".to_string()),
                'd' => (iso(&result, &upsilon1()), "isomorphic to Upsilon1".to_string()),
                'e' => (
                    is_pseudomanifold(&result) && result.num_vertices() == 7 && result.num_facets() == 12,
                    format!("pseudomanifold, {} vertices, {} facets", result.num_vertices(), result.num_facets()),
                ),
                _ => (m.i == 1 && iso(&result, &sigma(3).unwrap()), "proper 1-move onto Sigma3".to_string()),
            };
            MoveCheck {
                label,
                source,
                a_set,
                expected_class,
                observed_class: m.class,
                passed: ok && m.class == expected_class,
                result,
                detail,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates() {
        for e in all().unwrap() {
            e.validate().unwrap();
        }
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        match get("Klein") {
            Err(CatalogError::Unknown { valid, .. }) => assert!(valid.contains(&"RP2_6")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn move_identities_hold() {
        for c in move_checks() {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn upsilon1_is_two_tetrahedra() {
        assert!(upsilon1().is_facet(Face::new([1, 2, 3]).unwrap()));
        assert_eq!(upsilon1().num_facets(), 8);
    }
}
