//! Combinatorial manifold checks and the induced-ball sphere certification pipeline.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bistellar::{enumerate_moves, flip_search, random_walk, AnnealConfig, FlipGoal, MoveClass, MoveDescriptor};
use crate::collapse::{is_collapsible, verify_certificate, CollapseCertificate, CollapseStatus, DEFAULT_BUDGET};
use crate::complex::{standard_sphere, Face, SimplicialComplex, Vertex};
use crate::homology::{is_z2_acyclic, is_z2_homology_sphere, reduced_betti, BettiVector};
use crate::structure::{
    decompose, is_pseudomanifold, is_weak_pm_with_boundary, simplicial_complement, simplicial_neighbourhood,
};

/// Largest `n - m` for which the complement of an `m`-vertex ball is known to collapse.
pub const COMPLEMENT_VERTEX_BOUND: usize = 7;

/// Budget used when testing candidate balls during greedy growth.
const GREEDY_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("bound mismatch: expected {expected} vertices for dimension {d}, got {got}")]
    BoundMismatch { d: isize, expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Inconclusive,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a vertex-link check, with the vertex that decided a negative or inconclusive answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldVerdict {
    pub status: Tri,
    pub method: &'static str,
    pub vertices_checked: usize,
    pub failure: Option<(Vertex, String)>,
}

impl ManifoldVerdict {
    fn yes(method: &'static str, n: usize) -> Self {
        ManifoldVerdict { status: Tri::Yes, method, vertices_checked: n, failure: None }
    }

    fn no(method: &'static str, n: usize, v: Vertex, why: impl Into<String>) -> Self {
        ManifoldVerdict { status: Tri::No, method, vertices_checked: n, failure: Some((v, why.into())) }
    }
}

fn link_of(k: &SimplicialComplex, v: Vertex) -> SimplicialComplex {
    k.link(Face::singleton(v)).expect("vertex of complex")
}

/// Every vertex link is a combinatorial sphere of one dimension less.
///
/// Exact up to dimension 3. In higher dimensions each link is first checked
/// recursively and then certified or reduced by flips; if neither succeeds
/// the answer is inconclusive.
pub fn is_combinatorial_manifold(k: &SimplicialComplex) -> ManifoldVerdict {
    let d = k.dim();
    if d < 0 {
        return ManifoldVerdict { status: Tri::No, method: "void", vertices_checked: 0, failure: None };
    }
    if !k.is_pure() {
        let v = k.facets().iter().find(|f| f.dim() < d).and_then(|f| f.min_vertex()).unwrap_or(0);
        return ManifoldVerdict::no("purity", 0, v, "complex is not pure");
    }
    let d = d as usize;
    let mut checked = 0;
    for v in k.vertex_set().vertices() {
        let lk = link_of(k, v);
        checked += 1;
        match d {
            0 => {}
            1 => {
                if lk.num_facets() != 2 || lk.dim() != 0 {
                    return ManifoldVerdict::no("link-two-points", checked, v, "link is not two points");
                }
            }
            2 => {
                if !is_cycle(&lk) {
                    return ManifoldVerdict::no("link-cycle", checked, v, "link is not a single cycle");
                }
            }
            3 => {
                let surface = is_combinatorial_manifold(&lk).status == Tri::Yes;
                if !(surface && lk.is_connected() && lk.euler_characteristic() == 2) {
                    return ManifoldVerdict::no("link-2-sphere", checked, v, "link is not a 2-sphere");
                }
            }
            _ => match is_combinatorial_sphere(&lk) {
                Tri::Yes => {}
                Tri::No => return ManifoldVerdict::no("link-recursive", checked, v, "link is not a sphere"),
                Tri::Inconclusive => {
                    return ManifoldVerdict {
                        status: Tri::Inconclusive,
                        method: "link-recursive",
                        vertices_checked: checked,
                        failure: Some((v, "link could not be certified".into())),
                    }
                }
            },
        }
    }
    let method = match d {
        0 => "dimension-0",
        1 => "link-two-points",
        2 => "link-cycle",
        3 => "link-2-sphere",
        _ => "link-recursive",
    };
    ManifoldVerdict::yes(method, checked)
}

fn is_cycle(k: &SimplicialComplex) -> bool {
    k.dim() == 1
        && k.is_pure()
        && k.is_connected()
        && k.vertex_set().vertices().all(|v| k.facets().iter().filter(|f| f.contains(v)).count() == 2)
}

/// Three-valued combinatorial sphere test used for links in dimension 4 and up.
fn is_combinatorial_sphere(k: &SimplicialComplex) -> Tri {
    let d = k.dim();
    if d < 0 {
        return Tri::No;
    }
    if !is_z2_homology_sphere(k, d as usize) {
        return Tri::No;
    }
    if d <= 2 {
        // Homology spheres of dimension at most 2 are spheres once they are manifolds.
        return match is_combinatorial_manifold(k).status {
            Tri::Yes => Tri::Yes,
            s => s,
        };
    }
    let cert = certify_sphere(k, &CertifyOptions::default());
    match cert {
        Ok(c) if c.verdict == SphereVerdict::CombinatorialSphere => return Tri::Yes,
        Ok(SphereCertificate { verdict: SphereVerdict::PreconditionFailed(_), manifold: Some(m), .. })
            if m.status == Tri::No =>
        {
            return Tri::No
        }
        _ => {}
    }
    match flip_search(k, &FlipGoal::StandardSphere, &AnnealConfig::default(), 0) {
        Ok(Some(_)) => Tri::Yes,
        _ => Tri::Inconclusive,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BallPolicy {
    /// A single facet.
    Facet,
    /// Grow from a facet vertex by vertex while the induced subcomplex stays a ball.
    Greedy,
    /// Facet first, greedy when the facet leaves too large a complement.
    #[default]
    Auto,
}

impl std::str::FromStr for BallPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "facet" => Ok(BallPolicy::Facet),
            "greedy" => Ok(BallPolicy::Greedy),
            "auto" => Ok(BallPolicy::Auto),
            _ => Err(format!("unknown ball policy {s:?}")),
        }
    }
}

/// An induced subcomplex with the reason it is a combinatorial ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedBall {
    pub vertices: Face,
    pub complex: SimplicialComplex,
    /// `"simplex"` for a single facet, `"collapsible-manifold"` for a grown ball.
    pub evidence: &'static str,
}

/// Looks for an induced combinatorial `d`-ball in `m`, which should be a combinatorial manifold.
pub fn find_induced_ball(m: &SimplicialComplex, policy: BallPolicy) -> Option<InducedBall> {
    let d = m.dim();
    if d < 0 || !m.is_pure() {
        return None;
    }
    let n = m.num_vertices();
    let facet_ball = m.facets().iter().find_map(|&sigma| {
        let x = m.induced(sigma).ok()?;
        (x.num_facets() == 1 && x.facets()[0] == sigma).then_some(InducedBall {
            vertices: sigma,
            complex: x,
            evidence: "simplex",
        })
    })?;
    match policy {
        BallPolicy::Facet => Some(facet_ball),
        BallPolicy::Auto if n <= facet_ball.vertices.len() + COMPLEMENT_VERTEX_BOUND => Some(facet_ball),
        _ => Some(grow_ball(m, facet_ball)),
    }
}

fn grow_ball(m: &SimplicialComplex, start: InducedBall) -> InducedBall {
    let mut ball = start;
    loop {
        let next = m.vertex_set().difference(ball.vertices).vertices().find_map(|v| {
            let u = ball.vertices.with(v);
            let x = m.induced(u).ok()?;
            ball_evidence(&x, m).then_some((u, x))
        });
        match next {
            Some((u, x)) => ball = InducedBall { vertices: u, complex: x, evidence: "collapsible-manifold" },
            None => return ball,
        }
    }
}

/// Sufficient test that `x ⊆ ambient` is a combinatorial ball, for `ambient` a combinatorial manifold.
///
/// `x` must be pure of full dimension with a boundary, collapsible, and every
/// vertex link must either agree with the ambient link (an interior vertex)
/// or pass the same test inside the ambient link.
fn ball_evidence(x: &SimplicialComplex, ambient: &SimplicialComplex) -> bool {
    let d = ambient.dim();
    if x.dim() != d || !x.is_pure() {
        return false;
    }
    if d == 0 {
        return x.num_vertices() == 1;
    }
    if !is_weak_pm_with_boundary(x) {
        return false;
    }
    if is_collapsible(x, GREEDY_BUDGET).status != CollapseStatus::Collapsible {
        return false;
    }
    x.vertex_set().vertices().all(|v| {
        let lx = link_of(x, v);
        let la = link_of(ambient, v);
        lx == la || ball_evidence(&lx, &la)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SphereVerdict {
    CombinatorialSphere,
    Inconclusive(String),
    PreconditionFailed(String),
}

impl fmt::Display for SphereVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereVerdict::CombinatorialSphere => f.write_str("combinatorial-sphere"),
            SphereVerdict::Inconclusive(r) => write!(f, "inconclusive({r})"),
            SphereVerdict::PreconditionFailed(r) => write!(f, "precondition-failed({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub assume_manifold: bool,
    pub policy: BallPolicy,
    pub budget: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { assume_manifold: false, policy: BallPolicy::Auto, budget: DEFAULT_BUDGET }
    }
}

/// The full witness chain of a certification run; later fields are absent when an earlier stage stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereCertificate {
    pub dimension: isize,
    pub num_vertices: usize,
    pub manifold: Option<ManifoldVerdict>,
    pub betti: BettiVector,
    pub ball: Option<InducedBall>,
    pub complement: Option<SimplicialComplex>,
    pub betti_of_complement: Option<BettiVector>,
    pub decomposition_checked: bool,
    pub collapse: Option<CollapseCertificate>,
    pub verdict: SphereVerdict,
}

impl SphereCertificate {
    /// Re-checks the certificate against `m` without trusting any stored verdict.
    pub fn verify(&self, m: &SimplicialComplex) -> bool {
        if self.verdict != SphereVerdict::CombinatorialSphere {
            return false;
        }
        let (Some(ball), Some(l), Some(cert)) = (&self.ball, &self.complement, &self.collapse) else {
            return false;
        };
        let d = m.dim();
        d >= 0
            && is_z2_homology_sphere(m, d as usize)
            && m.induced(ball.vertices).ok().as_ref() == Some(&ball.complex)
            && m.num_vertices() <= ball.vertices.len() + COMPLEMENT_VERTEX_BOUND
            && simplicial_complement(&ball.complex, m).ok().as_ref() == Some(l)
            && is_z2_acyclic(l)
            && cert.terminal.num_facets() == 1
            && cert.terminal.num_vertices() == 1
            && verify_certificate(l, cert)
    }
}

/// Certifies that a small combinatorial manifold is a combinatorial sphere.
///
/// Stages: manifold check, GF(2) homology sphere check, an induced ball whose
/// complement has at most seven vertices, acyclicity of the complement, the
/// decomposition self-check, and finally an exhaustive collapse of the
/// complement. Never reports a sphere unless every stage succeeded.
pub fn certify_sphere(m: &SimplicialComplex, opts: &CertifyOptions) -> Result<SphereCertificate, RecognitionError> {
    let mut cert = SphereCertificate {
        dimension: m.dim(),
        num_vertices: m.num_vertices(),
        manifold: None,
        betti: reduced_betti(m),
        ball: None,
        complement: None,
        betti_of_complement: None,
        decomposition_checked: false,
        collapse: None,
        verdict: SphereVerdict::Inconclusive("not started".into()),
    };
    let fail = |mut c: SphereCertificate, v: SphereVerdict| {
        c.verdict = v;
        Ok(c)
    };
    let d = m.dim();
    if d < 0 {
        return fail(cert, SphereVerdict::PreconditionFailed("void complex".into()));
    }
    if !m.is_pure() {
        return fail(cert, SphereVerdict::PreconditionFailed("not pure".into()));
    }
    if !opts.assume_manifold {
        let mv = is_combinatorial_manifold(m);
        let status = mv.status;
        cert.manifold = Some(mv);
        match status {
            Tri::Yes => {}
            Tri::No => return fail(cert, SphereVerdict::PreconditionFailed("not a combinatorial manifold".into())),
            Tri::Inconclusive => {
                return fail(cert, SphereVerdict::Inconclusive("manifold check inconclusive".into()))
            }
        }
    }
    if !cert.betti.is_sphere(d as usize) {
        return fail(cert, SphereVerdict::PreconditionFailed("not a Z2-homology sphere".into()));
    }
    let Some(ball) = find_induced_ball(m, opts.policy) else {
        return fail(cert, SphereVerdict::Inconclusive("no induced ball found".into()));
    };
    let n = m.num_vertices();
    let bound_ok = n <= ball.vertices.len() + COMPLEMENT_VERTEX_BOUND;
    let ball_vertices = ball.vertices;
    let ball_complex = ball.complex.clone();
    cert.ball = Some(ball);
    if !bound_ok {
        return fail(cert, SphereVerdict::Inconclusive("complement of the ball has more than 7 vertices".into()));
    }
    let l = simplicial_complement(&ball_complex, m).expect("ball is a subcomplex");
    if l.is_void() || ball_vertices == m.vertex_set() {
        return Err(RecognitionError::InvariantViolation("induced ball covers a closed homology sphere".into()));
    }
    let lb = reduced_betti(&l);
    cert.complement = Some(l.clone());
    cert.betti_of_complement = Some(lb.clone());
    if !lb.is_zero() {
        return Err(RecognitionError::InvariantViolation(format!("complement of an induced ball has Betti numbers {lb}")));
    }
    if d >= 1 {
        if !is_pseudomanifold(m) {
            return Err(RecognitionError::InvariantViolation("connected manifold is not a pseudomanifold".into()));
        }
        decompose(m, &ball_complex).map_err(|e| RecognitionError::InvariantViolation(e.to_string()))?;
        cert.decomposition_checked = true;
    }
    let v = is_collapsible(&l, opts.budget);
    match v.status {
        CollapseStatus::Collapsible => {
            let c = v.certificate.expect("collapsible verdict has a certificate");
            if !verify_certificate(&l, &c) {
                return Err(RecognitionError::InvariantViolation("collapse certificate does not replay".into()));
            }
            cert.collapse = Some(c);
            fail(cert, SphereVerdict::CombinatorialSphere)
        }
        CollapseStatus::NotCollapsibleExhausted => {
            fail(cert, SphereVerdict::Inconclusive("complement is acyclic but not collapsible".into()))
        }
        CollapseStatus::InconclusiveBudget => {
            fail(cert, SphereVerdict::Inconclusive("collapse search budget exhausted".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundOutcome {
    /// A bistellar `i`-move with `i < d` exists, so the manifold is a sphere.
    SphereByContrapositive(MoveDescriptor),
    NoProperMove,
    Inconclusive(String),
}

/// For a `(d+9)`-vertex combinatorial manifold that is a GF(2) homology sphere,
/// any bistellar `i`-move with `i < d` forces a combinatorial sphere.
///
/// Proper moves are tried first, then bistellar 0-moves.
pub fn classify_at_vertex_bound(m: &SimplicialComplex) -> Result<BoundOutcome, RecognitionError> {
    let d = m.dim();
    let expected = (d + 9).max(0) as usize;
    if d < 1 || m.num_vertices() != expected {
        return Err(RecognitionError::BoundMismatch { d, expected, got: m.num_vertices() });
    }
    match is_combinatorial_manifold(m).status {
        Tri::Yes => {}
        Tri::No => return Ok(BoundOutcome::Inconclusive("not a combinatorial manifold".into())),
        Tri::Inconclusive => return Ok(BoundOutcome::Inconclusive("manifold check inconclusive".into())),
    }
    if !is_z2_homology_sphere(m, d as usize) {
        return Ok(BoundOutcome::Inconclusive("not a Z2-homology sphere".into()));
    }
    if let Some(mv) = enumerate_moves(m, &[MoveClass::ProperBistellar]).into_iter().next() {
        return Ok(BoundOutcome::SphereByContrapositive(mv));
    }
    if let Some(mv) = enumerate_moves(m, &[MoveClass::Bistellar]).into_iter().find(|mv| mv.i == 0) {
        return Ok(BoundOutcome::SphereByContrapositive(mv));
    }
    Ok(BoundOutcome::NoProperMove)
}

/// A random combinatorial `d`-sphere: a bistellar walk from the boundary of a simplex.
pub fn random_sphere(d: usize, max_vertices: usize, steps: usize, rng: &mut impl Rng) -> SimplicialComplex {
    let labels: Vec<Vertex> = (1..=d as u8 + 2).collect();
    let s = standard_sphere(d, &labels).expect("labels");
    random_walk(&s, steps, max_vertices, rng).expect("dimension at least 1").0
}

/// Results of the decomposition and complement-acyclicity self-checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub decompositions: usize,
    pub decomposition_failures: Vec<String>,
    pub neighbourhoods: usize,
    pub neighbourhood_failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.decomposition_failures.is_empty() && self.neighbourhood_failures.is_empty()
    }
}

/// Randomized self-checks on spheres from bistellar walks.
///
/// For `pairs` random `(Y, Y1)` with `Y1` a proper induced pure subcomplex of
/// full dimension, [`decompose`] must succeed. For each sphere and facet ball
/// the neighbourhood of the complement must be GF(2)-acyclic.
pub fn invariant_suite(pairs: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    let mut attempts = 0;
    while report.decompositions < pairs && attempts < pairs * 200 {
        attempts += 1;
        let d = rng.gen_range(1..=3);
        let y = random_sphere(d, d + 8, rng.gen_range(0..25), &mut rng);
        let mut vs: Vec<Vertex> = y.vertices();
        vs.shuffle(&mut rng);
        let take = rng.gen_range(d + 1..vs.len());
        let u = vs[..take].iter().fold(Face::EMPTY, |f, &v| f.with(v));
        let y1 = y.induced(u).expect("vertex subset");
        if y1.is_void() || !y1.is_pure() || y1.dim() != y.dim() {
            continue;
        }
        report.decompositions += 1;
        if let Err(e) = decompose(&y, &y1) {
            report.decomposition_failures.push(format!("{} | {}: {e}", y.encoding(), y1.encoding()));
        }
        for &sigma in y.facets().iter().take(3) {
            report.neighbourhoods += 1;
            let x1 = y.induced(sigma).expect("facet");
            let l = simplicial_complement(&x1, &y).expect("subcomplex");
            let x2 = simplicial_neighbourhood(&l, &y).expect("subcomplex");
            if !is_z2_acyclic(&x2) {
                report.neighbourhood_failures.push(format!("{} | {}", y.encoding(), sigma));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::{octahedron, standard_sphere};

    #[test]
    fn manifold_checks() {
        assert_eq!(is_combinatorial_manifold(&catalog::sigma(5).unwrap()).status, Tri::Yes);
        assert_eq!(is_combinatorial_manifold(&catalog::rp2_6()).status, Tri::Yes);
        let u = is_combinatorial_manifold(&catalog::upsilon1());
        assert_eq!(u.status, Tri::No);
        assert_eq!(u.failure.unwrap().0, 7);
        assert_eq!(is_combinatorial_manifold(&standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap()).status, Tri::Yes);
        assert_eq!(is_combinatorial_manifold(&standard_sphere(4, &[1, 2, 3, 4, 5, 6]).unwrap()).status, Tri::Yes);
    }

    #[test]
    fn standard_spheres_certify() {
        for d in 0..=4usize {
            let labels: Vec<u8> = (1..=d as u8 + 2).collect();
            let s = standard_sphere(d, &labels).unwrap();
            let c = certify_sphere(&s, &CertifyOptions::default()).unwrap();
            assert_eq!(c.verdict, SphereVerdict::CombinatorialSphere, "d = {d}");
            assert!(c.verify(&s));
            assert_eq!(c.complement.unwrap().num_vertices(), 1);
        }
    }

    #[test]
    fn negative_controls() {
        let c = certify_sphere(&catalog::rp2_6(), &CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, SphereVerdict::PreconditionFailed("not a Z2-homology sphere".into()));
        let c = certify_sphere(&catalog::upsilon1(), &CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, SphereVerdict::PreconditionFailed("not a combinatorial manifold".into()));
        assert!(!c.verify(&catalog::upsilon1()));
    }

    #[test]
    fn greedy_grows_in_octahedron() {
        let b = find_induced_ball(&octahedron(), BallPolicy::Greedy).unwrap();
        assert_eq!(b.vertices.len(), 5);
        let f = find_induced_ball(&catalog::sigma(2).unwrap(), BallPolicy::Facet).unwrap();
        assert_eq!(f.vertices.len(), 3);
    }

    #[test]
    fn bound_mismatch() {
        let s = standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            classify_at_vertex_bound(&s),
            Err(RecognitionError::BoundMismatch { d: 3, expected: 12, got: 5 })
        );
    }

    #[test]
    fn eleven_vertex_two_sphere_has_a_move() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = random_sphere(2, 11, 60, &mut rng);
        while s.num_vertices() < 11 {
            s = random_sphere(2, 11, 80, &mut rng);
        }
        match classify_at_vertex_bound(&s).unwrap() {
            BoundOutcome::SphereByContrapositive(m) => assert!(m.i < 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_suite_passes() {
        let r = invariant_suite(10, 3);
        assert_eq!(r.decompositions, 10);
        assert!(r.passed(), "{r:?}");
    }
}
