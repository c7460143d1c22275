//! Free faces, elementary collapses, and an exhaustive collapsibility search.
//!
//! The search is a depth-first walk over collapse sequences. Every visited
//! intermediate complex is memoized by its face set under the identity
//! labeling, so a state is never expanded twice and a negative answer is only
//! reported once the reachable state space has been exhausted.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};

/// Default node budget for [`is_collapsible`] and [`collapses_to`].
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error("not a free pair: {0}")]
    NotFreePair(CollapseStep),
    #[error("target is not a subcomplex of the source")]
    NotSubcomplex,
}

/// Removal of a free face together with its unique proper coface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CollapseStep {
    pub free_face: Face,
    pub coface: Face,
}

impl fmt::Display for CollapseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} < {}", self.free_face, self.coface)
    }
}

/// A replayable witness for `start ↘ terminal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseCertificate {
    pub steps: Vec<CollapseStep>,
    pub terminal: SimplicialComplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollapseStatus {
    Collapsible,
    NotCollapsibleExhausted,
    InconclusiveBudget,
}

impl CollapseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CollapseStatus::Collapsible => "collapsible",
            CollapseStatus::NotCollapsibleExhausted => "not-collapsible-exhausted",
            CollapseStatus::InconclusiveBudget => "inconclusive-budget",
        }
    }
}

impl fmt::Display for CollapseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseVerdict {
    pub status: CollapseStatus,
    pub certificate: Option<CollapseCertificate>,
    pub nodes_explored: u64,
}

/// All free pairs `(τ, σ)` of `k`, sorted lexicographically.
pub fn free_faces(k: &SimplicialComplex) -> Vec<CollapseStep> {
    let mut out = Vec::new();
    for &sigma in k.facets() {
        if sigma.len() < 2 {
            continue;
        }
        for tau in sigma.boundary() {
            let others = k.facets().iter().filter(|f| **f != sigma && tau.is_subset_of(**f)).count();
            if others == 0 {
                out.push(CollapseStep { free_face: tau, coface: sigma });
            }
        }
    }
    out.sort();
    out
}

/// Performs one elementary collapse.
pub fn elementary_collapse(
    k: &SimplicialComplex,
    step: CollapseStep,
) -> Result<SimplicialComplex, CollapseError> {
    let CollapseStep { free_face: tau, coface: sigma } = step;
    let shape_ok = !tau.is_empty() && tau.is_subset_of(sigma) && sigma.len() == tau.len() + 1;
    if !shape_ok || !k.is_facet(sigma) {
        return Err(CollapseError::NotFreePair(step));
    }
    if k.facets().iter().any(|f| *f != sigma && tau.is_subset_of(*f)) {
        return Err(CollapseError::NotFreePair(step));
    }
    let mut faces: Vec<Face> = k.facets().iter().copied().filter(|f| *f != sigma).collect();
    faces.extend(sigma.boundary().into_iter().filter(|r| *r != tau));
    Ok(SimplicialComplex::normalized(faces))
}

/// Replays a certificate from `k` using [`elementary_collapse`] only.
///
/// Shares no code with the search: each step is re-checked for freeness
/// against the current complex and the final complex must equal the terminal.
pub fn verify_certificate(k: &SimplicialComplex, cert: &CollapseCertificate) -> bool {
    let mut cur = k.clone();
    for step in &cert.steps {
        match elementary_collapse(&cur, *step) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    cur == cert.terminal
}

/// Decides whether `k` collapses to a single vertex.
pub fn is_collapsible(k: &SimplicialComplex, budget: u64) -> CollapseVerdict {
    if k.is_void() {
        return CollapseVerdict {
            status: CollapseStatus::NotCollapsibleExhausted,
            certificate: None,
            nodes_explored: 0,
        };
    }
    Search::new(k, None).run(budget)
}

/// Decides whether `k` collapses onto the subcomplex `l`. Faces of `l` are never removed.
pub fn collapses_to(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    budget: u64,
) -> Result<CollapseVerdict, CollapseError> {
    if !l.is_subcomplex_of(k) {
        return Err(CollapseError::NotSubcomplex);
    }
    Ok(Search::new(k, Some(l)).run(budget))
}

type Bits = Vec<u64>;

struct Search {
    faces: Vec<Face>,
    /// Indices of faces with exactly one more vertex.
    cofaces: Vec<Vec<u32>>,
    protected: Bits,
    target_size: Option<usize>,
    memo: HashSet<Bits>,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Found,
    Dead,
    OutOfBudget,
}

impl Search {
    fn new(k: &SimplicialComplex, target: Option<&SimplicialComplex>) -> Self {
        let faces = k.all_faces();
        let index: HashMap<Face, u32> = faces.iter().enumerate().map(|(i, f)| (*f, i as u32)).collect();
        let mut cofaces = vec![Vec::new(); faces.len()];
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for v in f.vertices() {
                cofaces[index[&f.without(v)] as usize].push(i as u32);
            }
        }
        let words = faces.len().div_ceil(64);
        let mut protected = vec![0u64; words];
        let mut target_size = None;
        if let Some(l) = target {
            let mut n = 0;
            for (i, f) in faces.iter().enumerate() {
                if l.contains(*f) {
                    protected[i / 64] |= 1 << (i % 64);
                    n += 1;
                }
            }
            target_size = Some(n);
        }
        Search { faces, cofaces, protected, target_size, memo: HashSet::new(), nodes: 0, budget: 0 }
    }

    fn run(mut self, budget: u64) -> CollapseVerdict {
        self.budget = budget;
        let n = self.faces.len();
        let mut state: Bits = vec![0u64; n.div_ceil(64)];
        for i in 0..n {
            state[i / 64] |= 1 << (i % 64);
        }
        let mut path = Vec::new();

        let (status, certificate) = if self.is_target(n) {
            (CollapseStatus::Collapsible, Some(Vec::new()))
        } else if self.free_pairs(&state).is_empty() {
            (CollapseStatus::NotCollapsibleExhausted, None)
        } else {
            match self.dfs(&mut state, n, &mut path) {
                Outcome::Found => (CollapseStatus::Collapsible, Some(path)),
                Outcome::Dead => (CollapseStatus::NotCollapsibleExhausted, None),
                Outcome::OutOfBudget => (CollapseStatus::InconclusiveBudget, None),
            }
        };
        let certificate = certificate.map(|pairs| self.certificate(&pairs));
        CollapseVerdict { status, certificate, nodes_explored: self.nodes }
    }

    fn certificate(&self, pairs: &[(u32, u32)]) -> CollapseCertificate {
        let steps: Vec<CollapseStep> = pairs
            .iter()
            .map(|&(t, s)| CollapseStep { free_face: self.faces[t as usize], coface: self.faces[s as usize] })
            .collect();
        // Terminal is read back from the final state.
        let mut alive = vec![true; self.faces.len()];
        for &(t, s) in pairs {
            alive[t as usize] = false;
            alive[s as usize] = false;
        }
        let terminal = SimplicialComplex::normalized(
            self.faces.iter().zip(&alive).filter(|(_, a)| **a).map(|(f, _)| *f).collect(),
        );
        CollapseCertificate { steps, terminal }
    }

    #[inline]
    fn has(state: &Bits, i: usize) -> bool {
        state[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn clear(state: &mut Bits, i: usize) {
        state[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn set(state: &mut Bits, i: usize) {
        state[i / 64] |= 1 << (i % 64);
    }

    fn is_target(&self, remaining: usize) -> bool {
        match self.target_size {
            None => remaining == 1,
            Some(n) => remaining == n,
        }
    }

    /// Free pairs in search order: larger cofaces first, lexicographic within a dimension.
    fn free_pairs(&self, state: &Bits) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.faces.len() {
            if !Self::has(state, i) || Self::has(&self.protected, i) {
                continue;
            }
            let mut only = None;
            let mut count = 0;
            for &c in &self.cofaces[i] {
                if Self::has(state, c as usize) {
                    count += 1;
                    only = Some(c);
                    if count > 1 {
                        break;
                    }
                }
            }
            if count == 1 {
                out.push((i as u32, only.expect("counted coface")));
            }
        }
        out.sort_by(|a, b| {
            let (fa, fb) = (self.faces[a.1 as usize], self.faces[b.1 as usize]);
            fb.len().cmp(&fa.len()).then(fa.cmp(&fb)).then(self.faces[a.0 as usize].cmp(&self.faces[b.0 as usize]))
        });
        out
    }

    fn dfs(&mut self, state: &mut Bits, remaining: usize, path: &mut Vec<(u32, u32)>) -> Outcome {
        if self.is_target(remaining) {
            return Outcome::Found;
        }
        if !self.memo.insert(state.clone()) {
            return Outcome::Dead;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::OutOfBudget;
        }
        for (t, s) in self.free_pairs(state) {
            Self::clear(state, t as usize);
            Self::clear(state, s as usize);
            path.push((t, s));
            match self.dfs(state, remaining - 2, path) {
                Outcome::Found => return Outcome::Found,
                Outcome::OutOfBudget => return Outcome::OutOfBudget,
                Outcome::Dead => {}
            }
            path.pop();
            Self::set(state, t as usize);
            Self::set(state, s as usize);
        }
        Outcome::Dead
    }
}
