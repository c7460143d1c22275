//! Generalized bistellar moves, their classification, and a randomized flip search.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{are_isomorphic, Face, SimplicialComplex, Vertex, ISOMORPHISM_VERTEX_CAP, MAX_VERTICES};
use crate::structure::is_weak_pseudomanifold;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BistellarError {
    #[error("complex is not pure")]
    NotPure,
    #[error("moves need dimension at least 1, got {0}")]
    DimensionTooSmall(isize),
    #[error("A has {got} vertices, expected {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("inadmissible A {a}: contains {facets} facets, need 1..={max}")]
    Inadmissible { a: Face, facets: usize, max: usize },
    #[error("not a weak pseudomanifold")]
    NotWeakPseudomanifold,
    #[error("no free vertex label below 64")]
    VertexCap,
    #[error("move {0} is not bistellar")]
    NotBistellar(Face),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveClass {
    /// Bistellar 0-move or d-move.
    Bistellar,
    ProperBistellar,
    /// The core is already a face.
    SingularBs1,
    /// bs1 holds, but `α` is not a facet and its link does not span `β`.
    SingularBs2,
}

impl MoveClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveClass::Bistellar => "bistellar",
            MoveClass::ProperBistellar => "proper-bistellar",
            MoveClass::SingularBs1 => "singular-bs1",
            MoveClass::SingularBs2 => "singular-bs2",
        }
    }

    pub fn is_bistellar(self) -> bool {
        matches!(self, MoveClass::Bistellar | MoveClass::ProperBistellar)
    }

    pub fn is_singular(self) -> bool {
        !self.is_bistellar()
    }
}

impl fmt::Display for MoveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MoveClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [MoveClass::Bistellar, MoveClass::ProperBistellar, MoveClass::SingularBs1, MoveClass::SingularBs2]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown move class {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveDescriptor {
    pub a_set: Face,
    pub alpha: Face,
    pub beta: Face,
    /// Dimension of `alpha`.
    pub i: usize,
    pub bs1: bool,
    pub bs2: bool,
    pub class: MoveClass,
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A={} alpha={} beta={} i={} {}", self.a_set, self.alpha, self.beta, self.i, self.class)
    }
}

fn check_shape(k: &SimplicialComplex, a: Face) -> Result<usize, BistellarError> {
    let d = k.dim();
    if d < 1 {
        return Err(BistellarError::DimensionTooSmall(d));
    }
    if !k.is_pure() {
        return Err(BistellarError::NotPure);
    }
    let d = d as usize;
    if a.len() != d + 2 {
        return Err(BistellarError::WrongSize { expected: d + 2, got: a.len() });
    }
    let facets = k.facets().iter().filter(|f| f.is_subset_of(a)).count();
    if facets == 0 || facets > d + 1 {
        return Err(BistellarError::Inadmissible { a, facets, max: d + 1 });
    }
    Ok(d)
}

/// The core `β = {x ∈ A : A \ x ∈ K}`.
pub fn core(k: &SimplicialComplex, a: Face) -> Result<Face, BistellarError> {
    check_shape(k, a)?;
    Ok(core_unchecked(k, a))
}

fn core_unchecked(k: &SimplicialComplex, a: Face) -> Face {
    a.vertices().filter(|&x| k.contains(a.without(x))).fold(Face::EMPTY, |b, x| b.with(x))
}

/// `κ_A(K)`: facets not inside `A`, plus the `(d+1)`-subsets of `A` that are not facets.
pub fn apply_generalized_move(k: &SimplicialComplex, a: Face) -> Result<SimplicialComplex, BistellarError> {
    check_shape(k, a)?;
    Ok(apply_unchecked(k, a))
}

fn apply_unchecked(k: &SimplicialComplex, a: Face) -> SimplicialComplex {
    let mut facets: Vec<Face> = k.facets().iter().copied().filter(|f| !f.is_subset_of(a)).collect();
    facets.extend(a.boundary().into_iter().filter(|r| !k.is_facet(*r)));
    SimplicialComplex::normalized(facets)
}

pub fn classify_move(k: &SimplicialComplex, a: Face) -> Result<MoveDescriptor, BistellarError> {
    let d = check_shape(k, a)?;
    Ok(classify_unchecked(k, a, d))
}

fn classify_unchecked(k: &SimplicialComplex, a: Face, d: usize) -> MoveDescriptor {
    let beta = core_unchecked(k, a);
    let alpha = a.difference(beta);
    let i = alpha.len() - 1;
    let bs1 = !k.contains(beta);
    let bs2 = k.is_facet(alpha) || k.link(alpha).map(|lk| lk.vertex_set() == beta).unwrap_or(false);
    let class = match (bs1, bs2) {
        (false, _) => MoveClass::SingularBs1,
        (true, false) => MoveClass::SingularBs2,
        (true, true) if (1..d).contains(&i) => MoveClass::ProperBistellar,
        (true, true) => MoveClass::Bistellar,
    };
    MoveDescriptor { a_set: a, alpha, beta, i, bs1, bs2, class }
}

/// All admissible `A ⊆ V(K)`, classified and filtered; an empty filter keeps everything.
///
/// Sorted by `A`. Moves that introduce a new vertex are listed by [`star_moves`].
pub fn enumerate_moves(k: &SimplicialComplex, filter: &[MoveClass]) -> Vec<MoveDescriptor> {
    let d = k.dim();
    if d < 1 || !k.is_pure() {
        return Vec::new();
    }
    let d = d as usize;
    let mut candidates: Vec<Face> = k
        .facets()
        .iter()
        .flat_map(|f| k.vertex_set().difference(*f).vertices().map(move |x| f.with(x)))
        .collect();
    candidates.sort();
    candidates.dedup();
    candidates
        .into_par_iter()
        .filter(|&a| {
            let n = k.facets().iter().filter(|f| f.is_subset_of(a)).count();
            n >= 1 && n <= d + 1
        })
        .map(|a| classify_unchecked(k, a, d))
        .filter(|m| filter.is_empty() || filter.contains(&m.class))
        .collect()
}

/// Smallest label not used by `k`.
pub fn fresh_vertex(k: &SimplicialComplex) -> Option<Vertex> {
    (0..MAX_VERTICES as u8).find(|&v| !k.vertex_set().contains(v))
}

/// The `d`-moves starring a fresh vertex into each facet.
pub fn star_moves(k: &SimplicialComplex) -> Result<Vec<MoveDescriptor>, BistellarError> {
    let v = fresh_vertex(k).ok_or(BistellarError::VertexCap)?;
    k.facets().iter().map(|f| classify_move(k, f.with(v))).collect()
}

/// What a flip search is steering towards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipGoal {
    /// The boundary of the `(d+1)`-simplex.
    StandardSphere,
    FacetCount(usize),
    Isomorphic(SimplicialComplex),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealConfig {
    pub restarts: usize,
    pub steps: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Also propose starring a fresh vertex into a random facet.
    pub allow_star: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig { restarts: 10, steps: 10_000, t_start: 1.5, t_end: 0.05, allow_star: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipTrace {
    pub moves: Vec<MoveDescriptor>,
    pub start: String,
    pub end: String,
}

/// Replays a trace, re-classifying every move; fails on any non-bistellar step.
pub fn replay_trace(k: &SimplicialComplex, moves: &[MoveDescriptor]) -> Result<SimplicialComplex, BistellarError> {
    let mut cur = k.clone();
    for m in moves {
        let c = classify_move(&cur, m.a_set)?;
        if !c.class.is_bistellar() || c != *m {
            return Err(BistellarError::NotBistellar(m.a_set));
        }
        cur = apply_unchecked(&cur, m.a_set);
    }
    Ok(cur)
}

pub fn verify_trace(k: &SimplicialComplex, trace: &FlipTrace) -> bool {
    k.encoding() == trace.start
        && replay_trace(k, &trace.moves).map(|end| end.encoding() == trace.end).unwrap_or(false)
}

fn min_vertex_degree(k: &SimplicialComplex) -> usize {
    k.vertex_set()
        .vertices()
        .map(|v| {
            k.facets()
                .iter()
                .filter(|f| f.contains(v))
                .fold(Face::EMPTY, |a, f| a.union(*f))
                .len()
                - 1
        })
        .min()
        .unwrap_or(0)
}

fn energy(k: &SimplicialComplex, goal: &FlipGoal) -> f64 {
    let tiebreak = min_vertex_degree(k) as f64 / (k.num_vertices() as f64 + 1.0);
    match goal {
        FlipGoal::StandardSphere => k.num_facets() as f64 + tiebreak,
        FlipGoal::FacetCount(n) => (k.num_facets() as f64 - *n as f64).abs() + tiebreak,
        FlipGoal::Isomorphic(l) => {
            (k.num_facets() as f64 - l.num_facets() as f64).abs()
                + (k.num_vertices() as f64 - l.num_vertices() as f64).abs()
                + tiebreak
        }
    }
}

fn reached(k: &SimplicialComplex, goal: &FlipGoal, d: usize) -> bool {
    match goal {
        FlipGoal::StandardSphere => k.num_vertices() == d + 2 && k.num_facets() == d + 2,
        FlipGoal::FacetCount(n) => k.num_facets() == *n,
        FlipGoal::Isomorphic(l) => {
            k.num_facets() == l.num_facets()
                && k.num_vertices() == l.num_vertices()
                && k.num_vertices() <= ISOMORPHISM_VERTEX_CAP
                && matches!(are_isomorphic(k, l), Ok(Some(_)))
        }
    }
}

/// Proposes one random bistellar move: a random facet plus a random vertex (or a fresh one).
fn propose(k: &SimplicialComplex, d: usize, rng: &mut ChaCha8Rng, allow_star: bool) -> Option<MoveDescriptor> {
    let sigma = *k.facets().choose(rng)?;
    let outside: Vec<Vertex> = k.vertex_set().difference(sigma).vertices().collect();
    let x = if allow_star && (outside.is_empty() || rng.gen_bool(0.05)) {
        fresh_vertex(k)?
    } else {
        *outside.choose(rng)?
    };
    let a = sigma.with(x);
    let n = k.facets().iter().filter(|f| f.is_subset_of(a)).count();
    if n == 0 || n > d + 1 {
        return None;
    }
    let m = classify_unchecked(k, a, d);
    m.class.is_bistellar().then_some(m)
}

fn anneal_once(k: &SimplicialComplex, goal: &FlipGoal, cfg: &AnnealConfig, d: usize, mut rng: ChaCha8Rng) -> Option<Vec<MoveDescriptor>> {
    let mut cur = k.clone();
    let mut e = energy(&cur, goal);
    let mut trace = Vec::new();
    if reached(&cur, goal, d) {
        return Some(trace);
    }
    let ratio = (cfg.t_end / cfg.t_start).max(1e-12);
    for step in 0..cfg.steps {
        let t = cfg.t_start * ratio.powf(step as f64 / cfg.steps.max(1) as f64);
        let Some(m) = propose(&cur, d, &mut rng, cfg.allow_star) else {
            continue;
        };
        let next = apply_unchecked(&cur, m.a_set);
        let e2 = energy(&next, goal);
        let accept = e2 <= e || rng.gen::<f64>() < ((e - e2) / t).exp();
        if accept {
            cur = next;
            e = e2;
            trace.push(m);
            if reached(&cur, goal, d) {
                return Some(trace);
            }
        }
    }
    None
}

/// Seeded simulated annealing over bistellar moves.
///
/// Restarts run in parallel, each with its own stream of the seeded generator.
/// The shortest successful trace wins, ties broken by comparing traces. A
/// `None` result proves nothing.
pub fn flip_search(
    k: &SimplicialComplex,
    goal: &FlipGoal,
    cfg: &AnnealConfig,
    seed: u64,
) -> Result<Option<FlipTrace>, BistellarError> {
    let d = k.dim();
    if d < 1 {
        return Err(BistellarError::DimensionTooSmall(d));
    }
    if !is_weak_pseudomanifold(k) {
        return Err(BistellarError::NotWeakPseudomanifold);
    }
    let d = d as usize;
    let best = (0..cfg.restarts.max(1))
        .into_par_iter()
        .filter_map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            anneal_once(k, goal, cfg, d, rng)
        })
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| trace_key(a).cmp(&trace_key(b))));
    Ok(best.map(|moves| {
        let end = replay_trace(k, &moves).expect("search emits bistellar moves only");
        FlipTrace { moves, start: k.encoding(), end: end.encoding() }
    }))
}

fn trace_key(moves: &[MoveDescriptor]) -> Vec<Face> {
    moves.iter().map(|m| m.a_set).collect()
}

/// A random walk of bistellar moves, starring only while under `max_vertices`.
pub fn random_walk(
    k: &SimplicialComplex,
    steps: usize,
    max_vertices: usize,
    rng: &mut impl Rng,
) -> Result<(SimplicialComplex, Vec<MoveDescriptor>), BistellarError> {
    let d = k.dim();
    if d < 1 {
        return Err(BistellarError::DimensionTooSmall(d));
    }
    let d = d as usize;
    let mut cur = k.clone();
    let mut moves = Vec::new();
    for _ in 0..steps {
        let mut options: Vec<MoveDescriptor> = enumerate_moves(&cur, &[MoveClass::Bistellar, MoveClass::ProperBistellar]);
        if cur.num_vertices() < max_vertices {
            options.extend(star_moves(&cur)?.into_iter().filter(|m| m.class.is_bistellar()));
        }
        let Some(&m) = options.choose(rng) else {
            break;
        };
        debug_assert!(m.a_set.len() == d + 2);
        cur = apply_unchecked(&cur, m.a_set);
        moves.push(m);
    }
    Ok((cur, moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{octahedron, standard_sphere};
    use crate::structure::is_weak_pseudomanifold;

    fn face(vs: &[u8]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn star_then_remove() {
        let s = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        let a = face(&[1, 2, 3, 5]);
        let m = classify_move(&s, a).unwrap();
        assert_eq!((m.beta, m.alpha, m.i, m.class), (face(&[5]), face(&[1, 2, 3]), 2, MoveClass::Bistellar));
        let t = apply_generalized_move(&s, a).unwrap();
        assert_eq!(t.num_facets(), 6);
        let back = classify_move(&t, a).unwrap();
        assert_eq!((back.alpha, back.i, back.class), (face(&[5]), 0, MoveClass::Bistellar));
        assert_eq!(apply_generalized_move(&t, a).unwrap(), s);
    }

    #[test]
    fn inadmissible_sets() {
        let s = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        assert!(matches!(core(&s, face(&[1, 2, 3, 4])), Err(BistellarError::Inadmissible { facets: 4, .. })));
        assert!(matches!(core(&s, face(&[1, 2, 3])), Err(BistellarError::WrongSize { .. })));
        assert!(matches!(core(&s, face(&[1, 2, 8, 9])), Err(BistellarError::Inadmissible { facets: 0, .. })));
    }

    #[test]
    fn standard_sphere_has_no_internal_moves() {
        for d in 2..=3usize {
            let labels: Vec<u8> = (1..=d as u8 + 2).collect();
            assert!(enumerate_moves(&standard_sphere(d, &labels).unwrap(), &[]).is_empty());
        }
    }

    #[test]
    fn octahedron_flip_across_edge() {
        let o = octahedron();
        let proper = enumerate_moves(&o, &[MoveClass::ProperBistellar]);
        // Each of the 12 edges spans a quadrilateral with a missing diagonal.
        assert_eq!(proper.len(), 12);
        for m in &proper {
            let t = apply_generalized_move(&o, m.a_set).unwrap();
            assert!(is_weak_pseudomanifold(&t));
            assert_eq!(t.num_facets(), 8);
        }
    }

    #[test]
    fn flip_search_reduces_octahedron() {
        let o = octahedron();
        let trace = flip_search(&o, &FlipGoal::StandardSphere, &AnnealConfig::default(), 7).unwrap().expect("reduces");
        assert!(verify_trace(&o, &trace));
        let end = SimplicialComplex::from_encoding(&trace.end).unwrap();
        assert_eq!(end.num_facets(), 4);
        let again = flip_search(&o, &FlipGoal::StandardSphere, &AnnealConfig::default(), 7).unwrap();
        assert_eq!(again, Some(trace));
    }

    #[test]
    fn flip_search_rejects_non_pm() {
        let k = SimplicialComplex::from_lists(&[[1, 2, 3]]).unwrap();
        assert_eq!(
            flip_search(&k, &FlipGoal::StandardSphere, &AnnealConfig::default(), 0),
            Err(BistellarError::NotWeakPseudomanifold)
        );
    }

    #[test]
    fn tampered_trace_fails() {
        let o = octahedron();
        let trace = flip_search(&o, &FlipGoal::StandardSphere, &AnnealConfig::default(), 3).unwrap().unwrap();
        let mut bad = trace.clone();
        bad.moves.reverse();
        assert!(bad.moves.len() < 2 || !verify_trace(&o, &bad));
    }
}
