//! Exhaustive enumeration of small 2-dimensional complexes, and sampled collapsibility checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog;
use crate::collapse::{free_faces, is_collapsible, verify_certificate, CollapseStatus, DEFAULT_BUDGET};
use crate::complex::{are_isomorphic, standard_sphere, vertex_invariants, FVector, Face, SimplicialComplex, Vertex};
use crate::homology::is_z2_acyclic;

/// Vertex cap for enumeration and sampling.
pub const CENSUS_MAX_VERTICES: usize = 7;

/// f-vectors allowed for a minimal 7-vertex 3-dimensional acyclic non-collapsible complex.
pub const MINIMAL_NONCOLLAPSIBLE_F_VECTORS: [[usize; 4]; 5] =
    [[7, 20, 30, 16], [7, 21, 32, 17], [7, 21, 33, 18], [7, 21, 34, 19], [7, 21, 35, 20]];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("vertex range {min}..={max} outside 3..={cap}", cap = CENSUS_MAX_VERTICES)]
    VertexRange { min: usize, max: usize },
    #[error("only dimension 2 is enumerated, got {0}")]
    Dimension(usize),
    #[error("facet bound must be positive")]
    NoFacets,
}

/// Condition on the number of triangles through each edge that is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeConstraint {
    ExactlyTwo,
    Even,
    /// Degrees 1 or 2, with at least one edge of degree 1.
    OneOrTwo,
}

impl EdgeConstraint {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeConstraint::ExactlyTwo => "ridge-degree-exactly-2",
            EdgeConstraint::Even => "ridge-degree-even",
            EdgeConstraint::OneOrTwo => "ridge-degree-in-1-2",
        }
    }

    fn final_ok(self, deg: u8) -> bool {
        match self {
            EdgeConstraint::ExactlyTwo => deg == 0 || deg == 2,
            EdgeConstraint::Even => deg.is_multiple_of(2),
            EdgeConstraint::OneOrTwo => deg <= 2,
        }
    }

    fn cap(self) -> u8 {
        match self {
            EdgeConstraint::ExactlyTwo | EdgeConstraint::OneOrTwo => 2,
            EdgeConstraint::Even => u8::MAX,
        }
    }

    /// An open edge still needs another triangle.
    fn open(self, deg: u8) -> bool {
        match self {
            EdgeConstraint::ExactlyTwo => deg == 1,
            EdgeConstraint::Even => deg % 2 == 1,
            EdgeConstraint::OneOrTwo => false,
        }
    }
}

impl fmt::Display for EdgeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub dimension: usize,
    pub max_facets: usize,
    pub constraint: EdgeConstraint,
    pub reduce_iso: bool,
    pub symmetry_breaking: bool,
}

impl CensusSpec {
    /// Closed 2-dimensional weak pseudomanifolds on at most 6 vertices.
    pub fn closed_surfaces_upto6() -> Self {
        CensusSpec {
            min_vertices: 3,
            max_vertices: 6,
            dimension: 2,
            max_facets: 20,
            constraint: EdgeConstraint::ExactlyTwo,
            reduce_iso: true,
            symmetry_breaking: true,
        }
    }

    /// 7-vertex closed 2-dimensional weak pseudomanifolds with at most 10 facets.
    pub fn closed_surfaces_7_upto10() -> Self {
        CensusSpec { min_vertices: 7, max_vertices: 7, max_facets: 10, ..Self::closed_surfaces_upto6() }
    }

    /// At most 7 vertices, at most 10 triangles, every edge in an even number of triangles.
    pub fn even_upto7_upto10() -> Self {
        CensusSpec { min_vertices: 3, max_vertices: 7, max_facets: 10, constraint: EdgeConstraint::Even, ..Self::closed_surfaces_upto6() }
    }

    fn validate(&self) -> Result<(), CensusError> {
        if self.min_vertices < 3 || self.max_vertices > CENSUS_MAX_VERTICES || self.min_vertices > self.max_vertices {
            return Err(CensusError::VertexRange { min: self.min_vertices, max: self.max_vertices });
        }
        if self.dimension != 2 {
            return Err(CensusError::Dimension(self.dimension));
        }
        if self.max_facets == 0 {
            return Err(CensusError::NoFacets);
        }
        Ok(())
    }

    /// Post hoc check of a single complex against the spec.
    pub fn admits(&self, k: &SimplicialComplex) -> bool {
        let n = k.num_vertices();
        if n < self.min_vertices || n > self.max_vertices || k.num_facets() > self.max_facets {
            return false;
        }
        if k.dim() != 2 || !k.is_pure() {
            return false;
        }
        let degrees: Vec<usize> = k
            .faces(1)
            .into_iter()
            .map(|e| k.facets().iter().filter(|f| e.is_subset_of(**f)).count())
            .collect();
        match self.constraint {
            EdgeConstraint::ExactlyTwo => degrees.iter().all(|&x| x == 2),
            EdgeConstraint::Even => degrees.iter().all(|&x| x % 2 == 0),
            EdgeConstraint::OneOrTwo => degrees.iter().all(|&x| x == 1 || x == 2) && degrees.contains(&1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub spec: CensusSpec,
    /// One complex per isomorphism class (or every complex found, without reduction).
    pub representatives: Vec<SimplicialComplex>,
    /// Complexes produced by the search before isomorphism reduction.
    pub raw_count: usize,
    pub nodes: u64,
}

impl CensusResult {
    pub fn counts_by_f_vector(&self) -> BTreeMap<FVector, usize> {
        let mut out = BTreeMap::new();
        for r in &self.representatives {
            *out.entry(r.f_vector()).or_insert(0) += 1;
        }
        out
    }
}

struct Tables {
    triangles: Vec<Face>,
    /// Edge ids of each triangle.
    tri_edges: Vec<[usize; 3]>,
    /// Index of the last triangle through each edge.
    last_use: Vec<usize>,
    /// Number of leading triangles that contain vertex 0.
    zero_block: usize,
    edges: usize,
}

impl Tables {
    fn new(n: usize) -> Self {
        let all = Face::from_bits((1u64 << n) - 1);
        let mut triangles = all.subsets_of_size(3);
        triangles.sort();
        let mut edge_list = all.subsets_of_size(2);
        edge_list.sort();
        let edge_id: HashMap<Face, usize> = edge_list.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let tri_edges: Vec<[usize; 3]> = triangles
            .iter()
            .map(|t| {
                let b = t.boundary();
                [edge_id[&b[0]], edge_id[&b[1]], edge_id[&b[2]]]
            })
            .collect();
        let mut last_use = vec![0; edge_list.len()];
        for (i, es) in tri_edges.iter().enumerate() {
            for &e in es {
                last_use[e] = i;
            }
        }
        let zero_block = triangles.iter().take_while(|t| t.contains(0)).count();
        Tables { triangles, tri_edges, last_use, zero_block, edges: edge_list.len() }
    }
}

#[derive(Clone)]
struct State {
    chosen: Vec<usize>,
    edge_deg: Vec<u8>,
    vert_deg: [u8; CENSUS_MAX_VERTICES],
    open: usize,
}

struct Enumerator<'a> {
    spec: &'a CensusSpec,
    t: &'a Tables,
    nodes: u64,
    out: Vec<Vec<usize>>,
}

impl Enumerator<'_> {
    fn include(&self, s: &mut State, i: usize) -> bool {
        let c = self.spec.constraint;
        for &e in &self.t.tri_edges[i] {
            let before = s.edge_deg[e];
            if before >= c.cap() {
                return false;
            }
            s.edge_deg[e] = before + 1;
            s.open = s.open + usize::from(c.open(before + 1)) - usize::from(c.open(before));
        }
        for v in self.t.triangles[i].vertices() {
            s.vert_deg[usize::from(v)] += 1;
        }
        s.chosen.push(i);
        true
    }

    /// Checks constraints that become final once triangle `i` is decided.
    fn settled(&self, s: &State, i: usize) -> bool {
        let c = self.spec.constraint;
        for e in 0..self.t.edges {
            if self.t.last_use[e] == i && !c.final_ok(s.edge_deg[e]) {
                return false;
            }
        }
        let left = self.spec.max_facets - s.chosen.len();
        if s.open > 3 * left {
            return false;
        }
        if self.spec.symmetry_breaking && i + 1 >= self.t.zero_block {
            let d0 = s.vert_deg[0];
            if s.vert_deg.iter().any(|&x| x > d0) {
                return false;
            }
        }
        true
    }

    fn accept(&self, s: &State) -> bool {
        if s.chosen.is_empty() {
            return false;
        }
        let used = s.vert_deg.iter().filter(|&&d| d > 0).count();
        if used < self.spec.min_vertices || used > self.spec.max_vertices {
            return false;
        }
        if self.spec.symmetry_breaking && s.vert_deg[..used].contains(&0) {
            return false;
        }
        if self.spec.constraint == EdgeConstraint::OneOrTwo && !s.edge_deg.contains(&1) {
            return false;
        }
        true
    }

    fn run(&mut self, s: &mut State, i: usize) {
        self.nodes += 1;
        if i == self.t.triangles.len() {
            if self.accept(s) {
                self.out.push(s.chosen.clone());
            }
            return;
        }
        if s.chosen.len() < self.spec.max_facets {
            let mut with = s.clone();
            if self.include(&mut with, i) && self.settled(&with, i) {
                self.run(&mut with, i + 1);
            }
        }
        let forced = self.spec.symmetry_breaking && i == 0;
        if !forced && self.settled(s, i) {
            self.run(s, i + 1);
        }
    }
}

/// Decision prefix length used to split the search across threads.
const SPLIT_DEPTH: usize = 10;

/// Enumerates every complex allowed by `spec`, then reduces to isomorphism classes.
///
/// With symmetry breaking on, the triangle `{0,1,2}` is forced, vertex 0 has
/// maximal degree, and the used labels form an initial segment. Each of these
/// holds for some relabeling of every complex, so no class is lost.
pub fn enumerate(spec: &CensusSpec) -> Result<CensusResult, CensusError> {
    spec.validate()?;
    let t = Tables::new(spec.max_vertices);
    let init = State {
        chosen: Vec::new(),
        edge_deg: vec![0; t.edges],
        vert_deg: [0; CENSUS_MAX_VERTICES],
        open: 0,
    };

    // Expand a shallow decision tree sequentially, then finish subtrees in parallel.
    let depth = SPLIT_DEPTH.min(t.triangles.len());
    let mut frontier = vec![init];
    let mut nodes = 0u64;
    for i in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for s in frontier {
            nodes += 1;
            let e = Enumerator { spec, t: &t, nodes: 0, out: Vec::new() };
            if s.chosen.len() < spec.max_facets {
                let mut with = s.clone();
                if e.include(&mut with, i) && e.settled(&with, i) {
                    next.push(with);
                }
            }
            let forced = spec.symmetry_breaking && i == 0;
            if !forced && e.settled(&s, i) {
                next.push(s);
            }
        }
        frontier = next;
    }
    let parts: Vec<(u64, Vec<Vec<usize>>)> = frontier
        .into_par_iter()
        .map(|mut s| {
            let mut e = Enumerator { spec, t: &t, nodes: 0, out: Vec::new() };
            e.run(&mut s, depth);
            (e.nodes, e.out)
        })
        .collect();

    let mut found: Vec<SimplicialComplex> = Vec::new();
    for (n, part) in parts {
        nodes += n;
        for chosen in part {
            found.push(SimplicialComplex::from_facets(chosen.iter().map(|&i| t.triangles[i])).expect("non-empty"));
        }
    }
    found.sort_by_key(|k| k.encoding());
    let raw_count = found.len();
    let representatives = if spec.reduce_iso { reduce_isomorphism(found) } else { found };
    Ok(CensusResult { spec: spec.clone(), representatives, raw_count, nodes })
}

type ClassKey = (FVector, Vec<(FVector, Vec<usize>)>);

fn class_key(k: &SimplicialComplex) -> ClassKey {
    let mut inv: Vec<_> = vertex_invariants(k).into_iter().map(|(_, i)| i).collect();
    inv.sort();
    (k.f_vector(), inv)
}

/// Keeps the first complex of every isomorphism class, in input order.
pub fn reduce_isomorphism(complexes: Vec<SimplicialComplex>) -> Vec<SimplicialComplex> {
    let keys: Vec<ClassKey> = complexes.par_iter().map(class_key).collect();
    let mut buckets: HashMap<ClassKey, Vec<usize>> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, key) in keys.into_iter().enumerate() {
        let bucket = buckets.entry(key).or_default();
        let k = &complexes[i];
        let known = bucket.iter().any(|&j| matches!(are_isomorphic(&complexes[j], k), Ok(Some(_))));
        if !known {
            bucket.push(i);
            reps.push(i);
        }
    }
    reps.into_iter().map(|i| complexes[i].clone()).collect()
}

/// Representatives matched to expected named complexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogMatch {
    /// `(representative index, name)`.
    pub matched: Vec<(usize, String)>,
    pub unexpected: Vec<usize>,
    pub missing: Vec<String>,
}

impl CatalogMatch {
    pub fn is_perfect(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }
}

pub fn match_catalog(result: &CensusResult, expected: &[(String, SimplicialComplex)]) -> CatalogMatch {
    let mut out = CatalogMatch::default();
    let mut hit = vec![false; expected.len()];
    for (i, r) in result.representatives.iter().enumerate() {
        let found = expected
            .iter()
            .enumerate()
            .find(|(_, (_, e))| matches!(are_isomorphic(r, e), Ok(Some(_))));
        match found {
            Some((j, (name, _))) => {
                hit[j] = true;
                out.matched.push((i, name.clone()));
            }
            None => out.unexpected.push(i),
        }
    }
    out.missing = expected.iter().zip(hit).filter(|(_, h)| !h).map(|((n, _), _)| n.clone()).collect();
    out
}

fn named(names: &[&str]) -> Vec<(String, SimplicialComplex)> {
    names
        .iter()
        .map(|n| (n.to_string(), catalog::get(n).expect("catalog entry").complex))
        .collect()
}

/// The five closed surfaces on at most 6 vertices.
pub fn expected_closed_upto6() -> Vec<(String, SimplicialComplex)> {
    named(&["S2_4", "Bipyramid3", "octahedron", "RP2_6", "Sigma1"])
}

/// The seven 7-vertex closed weak pseudomanifolds with at most 10 facets.
pub fn expected_closed_7() -> Vec<(String, SimplicialComplex)> {
    named(&["Bipyramid5", "Sigma2", "Sigma3", "Sigma4", "Sigma5", "Upsilon1", "Upsilon2"])
}

/// Named even complexes plus every union of two small spheres without a common triangle.
pub fn expected_even() -> Vec<(String, SimplicialComplex)> {
    let mut out = named(&[
        "S2_4", "Bipyramid3", "octahedron", "Bipyramid5", "RP2_6", "Sigma1", "Sigma2", "Sigma3", "Sigma4", "Sigma5", "R",
    ]);
    for (i, u) in two_sphere_unions(7, 10).into_iter().enumerate() {
        if !out.iter().any(|(_, e)| matches!(are_isomorphic(e, &u), Ok(Some(_)))) {
            out.push((format!("union{}", i + 1), u));
        }
    }
    out
}

/// Unions of a tetrahedron boundary with a second 4- or 5-vertex 2-sphere, sharing no triangle.
///
/// Built directly by placing the second sphere on every labeling; one
/// representative per isomorphism class.
pub fn two_sphere_unions(max_vertices: usize, max_facets: usize) -> Vec<SimplicialComplex> {
    let first = standard_sphere(2, &[0, 1, 2, 3]).expect("labels");
    let labels: Vec<Vertex> = (0..max_vertices as u8).collect();
    let mut found = Vec::new();
    for size in [4usize, 5] {
        let all = Face::new(labels.iter().copied()).expect("labels");
        for subset in all.subsets_of_size(size) {
            let vs = subset.to_vec();
            let seconds = if size == 4 {
                vec![standard_sphere(2, &vs).expect("labels")]
            } else {
                (0..5)
                    .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
                    .map(|(a, b)| {
                        let ring: Vec<Vertex> = (0..5).filter(|&j| j != a && j != b).map(|j| vs[j]).collect();
                        catalog::bipyramid(&ring, vs[a], vs[b])
                    })
                    .collect()
            };
            for second in seconds {
                let shared_triangle = first.facets().iter().any(|f| second.is_facet(*f));
                let u = first.union(&second);
                if !shared_triangle && u.num_vertices() <= max_vertices && u.num_facets() <= max_facets {
                    found.push(u);
                }
            }
        }
    }
    found.sort_by_key(|k| k.encoding());
    reduce_isomorphism(found)
}

/// Ridges lying in an odd number of facets.
pub fn odd_ridges(k: &SimplicialComplex) -> Vec<Face> {
    let mut deg: HashMap<Face, usize> = HashMap::new();
    let d = k.dim();
    for f in k.facets().iter().filter(|f| f.dim() == d) {
        for r in f.boundary() {
            *deg.entry(r).or_insert(0) += 1;
        }
    }
    let mut out: Vec<Face> = deg.into_iter().filter(|(_, n)| n % 2 == 1).map(|(r, _)| r).collect();
    out.sort();
    out
}

/// Each codimension-2 face lies in an even number of odd ridges.
pub fn odd_ridge_parity_holds(k: &SimplicialComplex) -> bool {
    let odd = odd_ridges(k);
    let mut count: HashMap<Face, usize> = HashMap::new();
    for r in &odd {
        for s in r.boundary() {
            *count.entry(s).or_insert(0) += 1;
        }
    }
    count.values().all(|n| n % 2 == 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// The expected number of top-dimensional facets is drawn uniformly from `[1, max_density * n]`.
    pub max_density: f64,
    /// Inclusion probability for lower-dimensional generators.
    pub low_probability: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { min_vertices: 3, max_vertices: 7, max_density: 2.0, low_probability: 0.04 }
    }
}

/// Draws sample `index` of a seeded run: a random complex on at most 7 vertices of dimension 2 or 3.
///
/// Each top-dimensional simplex on the chosen vertices is included
/// independently; lower-dimensional generators are added sparsely so that
/// non-pure complexes occur.
pub fn sample_complex(seed: u64, index: u64, cfg: &SamplerConfig) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(cfg.min_vertices..=cfg.max_vertices);
    let dim = rng.gen_range(2..=3usize).min(n - 1);
    let all = Face::from_bits((1u64 << n) - 1);
    let tops = all.subsets_of_size(dim + 1);
    let target = rng.gen_range(1.0..=cfg.max_density.max(1.0 / n as f64) * n as f64);
    let p = (target / tops.len() as f64).clamp(0.0, 1.0);
    let mut faces: Vec<Face> = Vec::new();
    let mut sorted_tops = tops;
    sorted_tops.sort();
    for f in sorted_tops {
        if rng.gen_bool(p) {
            faces.push(f);
        }
    }
    for size in 2..=dim {
        let mut lows = all.subsets_of_size(size);
        lows.sort();
        for f in lows {
            if rng.gen_bool(cfg.low_probability) {
                faces.push(f);
            }
        }
    }
    if faces.is_empty() {
        faces.push(Face::from_bits(0b111));
    }
    SimplicialComplex::from_facets(faces).expect("non-empty")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SamplingReport {
    pub seed: u64,
    pub tested: usize,
    pub acyclic_found: usize,
    pub acyclic_by_dimension: BTreeMap<isize, usize>,
    pub collapsible_count: usize,
    /// Acyclic samples proved not collapsible.
    pub counterexamples: Vec<String>,
    /// Acyclic samples where the search ran out of budget.
    pub inconclusive: Vec<String>,
    /// Acyclic samples whose Euler characteristic is not 1.
    pub euler_violations: usize,
    /// Collapse certificates that failed to replay.
    pub certificate_failures: usize,
    /// 3-dimensional acyclic samples with no free face.
    pub three_dim_without_free_face: usize,
    /// Acyclic samples whose f-vector is one of [`MINIMAL_NONCOLLAPSIBLE_F_VECTORS`].
    pub minimal_f_vector_hits: usize,
    pub max_nodes: u64,
}

impl SamplingReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
            && self.inconclusive.is_empty()
            && self.euler_violations == 0
            && self.certificate_failures == 0
    }
}

enum SampleOutcome {
    NotAcyclic,
    Acyclic { dim: isize, euler_ok: bool, status: CollapseStatus, cert_ok: bool, no_free: bool, minimal_f: bool, nodes: u64, enc: String },
}

/// Samples random complexes on at most 7 vertices and proves every acyclic one collapsible.
pub fn sample_collapse_test(n_samples: usize, seed: u64) -> SamplingReport {
    sample_collapse_test_with(n_samples, seed, &SamplerConfig::default())
}

pub fn sample_collapse_test_with(n_samples: usize, seed: u64, cfg: &SamplerConfig) -> SamplingReport {
    let outcomes: Vec<SampleOutcome> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let k = sample_complex(seed, i, cfg);
            if !is_z2_acyclic(&k) {
                return SampleOutcome::NotAcyclic;
            }
            let v = is_collapsible(&k, DEFAULT_BUDGET);
            let cert_ok = v.certificate.as_ref().map(|c| verify_certificate(&k, c)).unwrap_or(true);
            let f = k.f_vector();
            SampleOutcome::Acyclic {
                dim: k.dim(),
                euler_ok: k.euler_characteristic() == 1,
                status: v.status,
                cert_ok,
                no_free: k.dim() == 3 && free_faces(&k).is_empty(),
                minimal_f: MINIMAL_NONCOLLAPSIBLE_F_VECTORS.iter().any(|m| f.as_slice() == m),
                nodes: v.nodes_explored,
                enc: k.encoding(),
            }
        })
        .collect();

    let mut r = SamplingReport { seed, tested: n_samples, ..Default::default() };
    for o in outcomes {
        let SampleOutcome::Acyclic { dim, euler_ok, status, cert_ok, no_free, minimal_f, nodes, enc } = o else {
            continue;
        };
        r.acyclic_found += 1;
        *r.acyclic_by_dimension.entry(dim).or_insert(0) += 1;
        r.euler_violations += usize::from(!euler_ok);
        r.certificate_failures += usize::from(!cert_ok);
        r.three_dim_without_free_face += usize::from(no_free);
        r.minimal_f_vector_hits += usize::from(minimal_f);
        r.max_nodes = r.max_nodes.max(nodes);
        match status {
            CollapseStatus::Collapsible => r.collapsible_count += 1,
            CollapseStatus::NotCollapsibleExhausted => r.counterexamples.push(enc),
            CollapseStatus::InconclusiveBudget => r.inconclusive.push(enc),
        }
    }
    r
}
