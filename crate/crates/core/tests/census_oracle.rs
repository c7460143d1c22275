//! Censuses on at most six vertices against a brute-force sweep over all triangle sets.

use std::collections::BTreeSet;

use trisphere::census::{enumerate, CensusSpec};
use trisphere::SimplicialComplex;

const N: usize = 6;

fn triangles() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..N {
        for b in a + 1..N {
            for c in b + 1..N {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    a * N + b
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

type Tris = Vec<[usize; 3]>;

fn apply(t: &Tris, p: &[usize]) -> Tris {
    let mut out: Tris = t
        .iter()
        .map(|f| {
            let mut g = [p[f[0]], p[f[1]], p[f[2]]];
            g.sort();
            g
        })
        .collect();
    out.sort();
    out
}

fn canonical(t: &Tris, perms: &[Vec<usize>]) -> Tris {
    perms.iter().map(|p| apply(t, p)).min().unwrap()
}

fn to_tris(k: &SimplicialComplex) -> Tris {
    let c = k.compacted();
    let mut out: Tris = c
        .facets()
        .iter()
        .map(|f| {
            let v = f.to_vec();
            assert_eq!(v.len(), 3);
            [v[0] as usize, v[1] as usize, v[2] as usize]
        })
        .collect();
    out.sort();
    out
}

/// Every labeled triangle set on `0..6` whose used edges all have degrees accepted by `ok`.
fn sweep(max_facets: usize, ok: impl Fn(usize) -> bool) -> Vec<Tris> {
    let tris = triangles();
    let mut found = Vec::new();
    for mask in 1u32..(1 << tris.len()) {
        if mask.count_ones() as usize > max_facets {
            continue;
        }
        let mut deg = [0usize; N * N];
        for (i, t) in tris.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[edge_index(t[0], t[1])] += 1;
                deg[edge_index(t[0], t[2])] += 1;
                deg[edge_index(t[1], t[2])] += 1;
            }
        }
        if deg.iter().all(|&d| d == 0 || ok(d)) {
            found.push(tris.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| *t).collect());
        }
    }
    found
}

fn vertex_count(t: &Tris) -> usize {
    t.iter().flatten().collect::<BTreeSet<_>>().len()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn check(spec: CensusSpec, labeled: Vec<Tris>) {
    let perms = permutations(N);
    let classes: BTreeSet<Tris> = labeled.iter().map(|t| canonical(t, &perms)).collect();

    let result = enumerate(&spec).unwrap();
    let reps: Vec<Tris> = result.representatives.iter().map(to_tris).collect();
    let rep_classes: BTreeSet<Tris> = reps.iter().map(|t| canonical(t, &perms)).collect();
    assert_eq!(rep_classes.len(), reps.len(), "representatives must be pairwise non-isomorphic");
    assert_eq!(rep_classes, classes);

    // Orbit-stabilizer: labeled copies of a class on n of the 6 labels number C(6, n) * n! / |Aut|.
    let mut expected = 0;
    for t in &reps {
        let n = vertex_count(t);
        let aut = permutations(n).iter().filter(|p| apply(t, p) == *t).count();
        expected += binom(N, n) * factorial(n) / aut;
    }
    assert_eq!(labeled.len(), expected);
}

#[test]
fn closed_surfaces_match_sweep() {
    check(CensusSpec::closed_surfaces_upto6(), sweep(20, |d| d == 2));
}

#[test]
fn even_complexes_match_sweep() {
    let spec = CensusSpec { max_vertices: 6, ..CensusSpec::even_upto7_upto10() };
    check(spec, sweep(10, |d| d % 2 == 0));
}
