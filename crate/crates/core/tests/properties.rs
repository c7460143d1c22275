use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trisphere::bistellar::{apply_generalized_move, enumerate_moves};
use trisphere::catalog;
use trisphere::collapse::{elementary_collapse, is_collapsible, verify_certificate, CollapseStatus, DEFAULT_BUDGET};
use trisphere::complex::{are_isomorphic, VertexMap};
use trisphere::homology::{boundary_matrix, reduced_betti};
use trisphere::io::{parse_facets, parse_report, sphere_certificate_from_node, sphere_certificate_node, write_facets};
use trisphere::recognition::{certify_sphere, random_sphere, CertifyOptions, SphereVerdict};
use trisphere::structure::{is_pseudomanifold, is_weak_pseudomanifold};
use trisphere::{Face, SimplicialComplex};

fn complex_on(n: u8, max_face: usize, max_facets: usize) -> impl Strategy<Value = SimplicialComplex> {
    let labels: Vec<u8> = (0..n).collect();
    prop::collection::vec(prop::sample::subsequence(labels, 1..=max_face), 1..=max_facets)
        .prop_map(|faces| SimplicialComplex::from_facets(faces.into_iter().map(|f| Face::new(f).unwrap())).unwrap())
}

fn small_complex() -> impl Strategy<Value = SimplicialComplex> {
    complex_on(7, 4, 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boundary_of_boundary_vanishes(k in small_complex()) {
        for q in 2..=k.dim().max(0) as usize {
            let d_q = boundary_matrix(&k, q).unwrap();
            let d_q1 = boundary_matrix(&k, q - 1).unwrap();
            prop_assert!(d_q1.mul(&d_q).is_zero(), "q = {}", q);
        }
    }

    #[test]
    fn euler_matches_betti(k in small_complex()) {
        let b = reduced_betti(&k);
        let alternating: i64 = b.0.iter().enumerate().map(|(q, &x)| if q % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(k.euler_characteristic() - 1, alternating);
    }

    #[test]
    fn relabeling_preserves_everything(k in small_complex(), perm in Just((10u8..17).collect::<Vec<_>>()).prop_shuffle()) {
        let from: Vec<u8> = (0..7).collect();
        let map = VertexMap::from_permutation(&from, &perm).unwrap();
        let l = k.relabel(&map);
        prop_assert_eq!(l.f_vector(), k.f_vector());
        prop_assert_eq!(reduced_betti(&l), reduced_betti(&k));
        prop_assert_eq!(is_weak_pseudomanifold(&l), is_weak_pseudomanifold(&k));
        prop_assert_eq!(is_pseudomanifold(&l), is_pseudomanifold(&k));
        prop_assert_eq!(is_collapsible(&l, DEFAULT_BUDGET).status, is_collapsible(&k, DEFAULT_BUDGET).status);
        let iso = are_isomorphic(&k, &l).unwrap();
        prop_assert!(iso.is_some());
        prop_assert_eq!(k.relabel(&iso.unwrap()), l);
    }

    #[test]
    fn facet_text_round_trip(k in small_complex()) {
        let text = write_facets(&k);
        let parsed = parse_facets(&text).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(&parsed.complex, &k);
        prop_assert_eq!(write_facets(&parsed.complex), text);
        prop_assert_eq!(SimplicialComplex::from_encoding(&k.encoding()).unwrap(), k);
    }

    #[test]
    fn collapses_preserve_homology(base in complex_on(7, 3, 8), cone in any::<bool>()) {
        let k = if cone { base.cone(7).unwrap() } else { base };
        let v = is_collapsible(&k, DEFAULT_BUDGET);
        prop_assert_ne!(v.status, CollapseStatus::InconclusiveBudget);
        if cone {
            prop_assert_eq!(v.status, CollapseStatus::Collapsible);
        }
        if let Some(cert) = v.certificate {
            prop_assert!(verify_certificate(&k, &cert));
            let b = trimmed(&k);
            prop_assert!(b.is_empty());
            let mut cur = k.clone();
            for step in &cert.steps {
                cur = elementary_collapse(&cur, *step).unwrap();
                prop_assert_eq!(&trimmed(&cur), &b);
            }
            prop_assert_eq!(cur.num_vertices(), 1);
        }
    }
}

fn trimmed(k: &SimplicialComplex) -> Vec<usize> {
    let mut b = reduced_betti(k).0;
    while b.last() == Some(&0) {
        b.pop();
    }
    b
}

fn admissible_sets(k: &SimplicialComplex) -> Vec<Face> {
    let d = k.dim() as usize;
    let mut sets: Vec<Face> = k
        .vertex_set()
        .subsets_of_size(d + 2)
        .into_iter()
        .filter(|a| {
            let inside = k.facets().iter().filter(|f| f.is_subset_of(*a)).count();
            (1..=d + 1).contains(&inside)
        })
        .collect();
    sets.sort();
    sets
}

#[test]
fn move_is_an_involution_on_catalog() {
    let mut checked = 0;
    for entry in catalog::all().unwrap() {
        let k = &entry.complex;
        if k.dim() < 1 || !k.is_pure() {
            continue;
        }
        let sets = admissible_sets(k);
        let listed: Vec<Face> = enumerate_moves(k, &[]).iter().map(|m| m.a_set).collect();
        assert_eq!(listed, sets, "{}", entry.name);
        for a in sets {
            let once = apply_generalized_move(k, a).unwrap();
            let twice = apply_generalized_move(&once, a).unwrap();
            assert_eq!(&twice, k, "{} at {}", entry.name, a);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sphere_certificates_survive_reports(seed in any::<u64>(), d in 1usize..=3, steps in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sphere(d, d + 8, steps, &mut rng);
        let cert = certify_sphere(&s, &CertifyOptions::default()).unwrap();
        prop_assert_eq!(&cert.verdict, &SphereVerdict::CombinatorialSphere);
        let text = sphere_certificate_node(&cert).render();
        let back = sphere_certificate_from_node(&parse_report(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(back.verify(&s));
    }
}
