//! Finite simplicial complexes on at most 64 vertices, stored as a facet antichain.

mod build;
mod face;
mod iso;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use build::{cycle, octahedron, standard_ball, standard_sphere};
pub use face::{Face, Vertex, Vertices, MAX_VERTICES};
pub use iso::{are_isomorphic, vertex_invariants, VertexMap, ISOMORPHISM_VERTEX_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty complex")]
    Empty,
    #[error("vertex cap: label {0} is not below 64")]
    VertexCap(usize),
    #[error("duplicate vertex {0} in face")]
    DuplicateVertex(Vertex),
    #[error("empty face in facet list")]
    EmptyFace,
    #[error("not a face: {0}")]
    NotAFace(Face),
    #[error("vertex set {0} is not contained in the complex's vertex set")]
    NotVertexSubset(Face),
    #[error("vertex sets overlap on {0}")]
    OverlappingVertices(Face),
    #[error("isomorphism search cap: {0} vertices (limit {limit})", limit = ISOMORPHISM_VERTEX_CAP)]
    IsomorphismCap(usize),
    #[error("wrong number of labels: expected {expected}, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("a cycle needs at least 3 vertices, got {0}")]
    ShortCycle(usize),
    #[error("cannot parse face {0:?}")]
    BadFaceSyntax(String),
}

/// Face counts `(f_0, ..., f_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite simplicial complex given by its facets.
///
/// Facets are kept sorted lexicographically and form an antichain, so two
/// complexes compare equal exactly when they have the same faces under the
/// identity labeling. The facet-free value is the void complex; it only
/// arises as a link or induced subcomplex and cannot be built by
/// [`SimplicialComplex::from_facets`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
    vertex_set: Face,
}

impl SimplicialComplex {
    /// Builds a complex from generating faces. Dominated faces are absorbed.
    pub fn from_facets<I: IntoIterator<Item = Face>>(faces: I) -> Result<Self, ComplexError> {
        let faces: Vec<Face> = faces.into_iter().collect();
        if faces.is_empty() {
            return Err(ComplexError::Empty);
        }
        if faces.iter().any(|f| f.is_empty()) {
            return Err(ComplexError::EmptyFace);
        }
        Ok(Self::normalized(faces))
    }

    /// Convenience constructor from vertex lists, mostly for fixtures and tests.
    pub fn from_lists<L: AsRef<[usize]>>(lists: &[L]) -> Result<Self, ComplexError> {
        let faces = lists
            .iter()
            .map(|l| Face::from_labels(l.as_ref().iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_facets(faces)
    }

    /// The void complex (no faces at all, not even a vertex).
    pub fn void() -> Self {
        Self::default()
    }

    /// Reduces any list of faces to its maximal elements; empty faces are dropped.
    pub(crate) fn normalized(mut faces: Vec<Face>) -> Self {
        faces.retain(|f| !f.is_empty());
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        faces.dedup();
        let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
        for f in faces {
            if !kept.iter().any(|k| f.is_subset_of(*k)) {
                kept.push(f);
            }
        }
        kept.sort();
        let vertex_set = kept.iter().fold(Face::EMPTY, |acc, f| acc.union(*f));
        SimplicialComplex { facets: kept, vertex_set }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Vertex set as a face-shaped bit-set.
    pub fn vertex_set(&self) -> Face {
        self.vertex_set
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_set.len()
    }

    /// Dimension, `-1` for the void complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    /// Membership in the downward closure of the facets.
    pub fn contains(&self, face: Face) -> bool {
        if face.is_empty() {
            return !self.facets.is_empty();
        }
        self.facets.iter().any(|f| face.is_subset_of(*f))
    }

    pub fn is_facet(&self, face: Face) -> bool {
        self.facets.binary_search(&face).is_ok()
    }

    /// The `q`-faces, sorted. Out-of-range `q` gives an empty list.
    pub fn faces(&self, q: usize) -> Vec<Face> {
        let mut set = HashSet::new();
        for f in &self.facets {
            if f.len() > q {
                set.extend(f.subsets_of_size(q + 1));
            }
        }
        let mut out: Vec<Face> = set.into_iter().collect();
        out.sort();
        out
    }

    /// All faces grouped by dimension: `result[q]` are the `q`-faces, sorted.
    pub fn faces_by_dim(&self) -> Vec<Vec<Face>> {
        let d = self.dim();
        if d < 0 {
            return Vec::new();
        }
        let mut sets: Vec<HashSet<Face>> = vec![HashSet::new(); d as usize + 1];
        for f in &self.facets {
            for s in f.nonempty_subsets() {
                sets[s.len() - 1].insert(s);
            }
        }
        sets.into_iter()
            .map(|s| {
                let mut v: Vec<Face> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect()
    }

    pub fn num_faces(&self) -> usize {
        self.faces_by_dim().iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces_by_dim().iter().map(Vec::len).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// Link of `sigma`: faces disjoint from `sigma` whose union with it is a face.
    ///
    /// The link of a facet is the void complex.
    pub fn link(&self, sigma: Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        Ok(Self::normalized(
            self.facets
                .iter()
                .filter(|f| sigma.is_subset_of(**f))
                .map(|f| f.difference(sigma))
                .collect(),
        ))
    }

    /// Closed star of `sigma`: the subcomplex generated by facets containing it.
    pub fn star(&self, sigma: Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        Ok(Self::normalized(
            self.facets.iter().copied().filter(|f| sigma.is_subset_of(*f)).collect(),
        ))
    }

    /// Number of vertices in the link of `sigma`.
    pub fn degree(&self, sigma: Face) -> Result<usize, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        Ok(self
            .facets
            .iter()
            .filter(|f| sigma.is_subset_of(**f))
            .fold(Face::EMPTY, |acc, f| acc.union(*f))
            .difference(sigma)
            .len())
    }

    /// Induced subcomplex on `u`, which must lie inside the vertex set.
    pub fn induced(&self, u: Face) -> Result<SimplicialComplex, ComplexError> {
        if !u.is_subset_of(self.vertex_set) {
            return Err(ComplexError::NotVertexSubset(u));
        }
        Ok(Self::normalized(self.facets.iter().map(|f| f.intersection(u)).collect()))
    }

    /// True when every face of `self` is a face of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.facets.iter().all(|f| other.contains(*f))
    }

    /// Faces common to both complexes.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut faces = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                faces.push(a.intersection(*b));
            }
        }
        Self::normalized(faces)
    }

    /// Union of two complexes (vertex sets may overlap).
    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::normalized(self.facets.iter().chain(other.facets.iter()).copied().collect())
    }

    /// Join over disjoint vertex sets. Joining with the void complex is the identity.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
        let overlap = self.vertex_set.intersection(other.vertex_set);
        if !overlap.is_empty() {
            return Err(ComplexError::OverlappingVertices(overlap));
        }
        if self.is_void() {
            return Ok(other.clone());
        }
        if other.is_void() {
            return Ok(self.clone());
        }
        let mut faces = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                faces.push(a.union(*b));
            }
        }
        Ok(Self::normalized(faces))
    }

    /// Cone with a new apex vertex.
    pub fn cone(&self, apex: Vertex) -> Result<SimplicialComplex, ComplexError> {
        if usize::from(apex) >= MAX_VERTICES {
            return Err(ComplexError::VertexCap(usize::from(apex)));
        }
        let apex_cx = SimplicialComplex::normalized(vec![Face::singleton(apex)]);
        self.join(&apex_cx)
    }

    pub fn is_pure(&self) -> bool {
        match self.facets.first() {
            None => true,
            Some(f0) => self.facets.iter().all(|f| f.len() == f0.len()),
        }
    }

    /// Subcomplex generated by the top-dimensional facets.
    pub fn pure_part(&self) -> SimplicialComplex {
        let top = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
        SimplicialComplex {
            facets: self.facets.iter().copied().filter(|f| f.len() == top).collect(),
            vertex_set: self
                .facets
                .iter()
                .filter(|f| f.len() == top)
                .fold(Face::EMPTY, |acc, f| acc.union(*f)),
        }
    }

    /// Vertex sets of the connected components, sorted by smallest vertex.
    pub fn components(&self) -> Vec<Face> {
        let mut comps: Vec<Face> = Vec::new();
        for f in &self.facets {
            let mut merged = *f;
            comps.retain(|c| {
                if c.is_disjoint(merged) {
                    true
                } else {
                    merged = merged.union(*c);
                    false
                }
            });
            comps.push(merged);
        }
        comps.sort_by_key(|c| c.min_vertex());
        comps
    }

    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// Applies a vertex relabeling. Vertices outside the map's domain are kept.
    pub fn relabel(&self, map: &VertexMap) -> SimplicialComplex {
        Self::normalized(self.facets.iter().map(|f| map.apply(*f)).collect())
    }

    /// Relabels the vertices onto `0..n` preserving their order.
    pub fn compacted(&self) -> SimplicialComplex {
        let map = VertexMap::from_pairs(self.vertex_set.vertices().zip(0..)).expect("compact relabel");
        self.relabel(&map)
    }

    /// Canonical text encoding under the identity labeling, e.g. `1,2,3;1,2,4`.
    pub fn encoding(&self) -> String {
        let mut s = String::new();
        for (i, f) in self.facets.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(&f.to_string());
        }
        s
    }

    /// Inverse of [`SimplicialComplex::encoding`]; the empty string gives the void complex.
    pub fn from_encoding(s: &str) -> Result<SimplicialComplex, ComplexError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::void());
        }
        let faces = s.split(';').map(str::parse).collect::<Result<Vec<Face>, _>>()?;
        Self::from_facets(faces)
    }

    /// All faces, sorted by dimension then lexicographically.
    pub fn all_faces(&self) -> Vec<Face> {
        self.faces_by_dim().into_iter().flatten().collect()
    }

    /// Vertex ids, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.vertex_set.to_vec()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex[{}]", self.encoding())
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(lists: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_lists(lists).unwrap()
    }

    fn f(vs: &[Vertex]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn subset_absorption() {
        let k = cx(&[&[1, 2, 3], &[1, 2]]);
        assert_eq!(k.facets(), &[f(&[1, 2, 3])]);
        let k2 = cx(&[&[1, 2], &[1, 2, 3]]);
        assert_eq!(k, k2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(SimplicialComplex::from_facets(Vec::new()), Err(ComplexError::Empty));
        assert_eq!(
            SimplicialComplex::from_lists(&[vec![1, 70]]),
            Err(ComplexError::VertexCap(70))
        );
        assert_eq!(
            SimplicialComplex::from_facets(vec![Face::EMPTY]),
            Err(ComplexError::EmptyFace)
        );
    }

    #[test]
    fn f_vector_and_euler() {
        let s2 = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(s2.f_vector(), FVector(vec![4, 6, 4]));
        assert_eq!(s2.euler_characteristic(), 2);
        assert_eq!(s2.num_facets(), 4);
        assert_eq!(s2.dim(), 2);
        assert!(s2.faces(5).is_empty());
    }

    #[test]
    fn link_and_degree() {
        let s2 = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        let lk = s2.link(f(&[1])).unwrap();
        assert_eq!(lk, cycle(&[2, 3, 4]).unwrap());
        assert_eq!(s2.degree(f(&[1])).unwrap(), 3);
        assert_eq!(s2.degree(f(&[1, 2])).unwrap(), 2);
        assert!(s2.link(f(&[1, 2, 3])).unwrap().is_void());
        assert_eq!(s2.link(f(&[1, 2, 3, 4])), Err(ComplexError::NotAFace(f(&[1, 2, 3, 4]))));
        assert_eq!(s2.link(Face::EMPTY).unwrap(), s2);
    }

    #[test]
    fn upsilon_vertex_link_is_two_triangles() {
        let u1 = cx(&[
            &[1, 2, 3], &[1, 2, 7], &[1, 3, 7], &[2, 3, 7],
            &[4, 5, 6], &[4, 5, 7], &[4, 6, 7], &[5, 6, 7],
        ]);
        let lk = u1.link(f(&[7])).unwrap();
        assert_eq!(lk, cycle(&[1, 2, 3]).unwrap().union(&cycle(&[4, 5, 6]).unwrap()));
        assert_eq!(lk.num_components(), 2);
        assert_eq!(u1.induced(f(&[1, 2, 3, 7])).unwrap(), standard_sphere(2, &[1, 2, 3, 7]).unwrap());
    }

    #[test]
    fn induced_requires_vertex_subset() {
        let s3 = standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            s3.induced(f(&[1, 2, 3, 4])).unwrap(),
            standard_ball(3, &[1, 2, 3, 4]).unwrap()
        );
        assert!(s3.induced(f(&[1, 9])).is_err());
    }

    #[test]
    fn joins_and_cones() {
        let s0a = standard_sphere(0, &[1, 2]).unwrap();
        let s0b = standard_sphere(0, &[3, 4]).unwrap();
        let s0c = standard_sphere(0, &[5, 6]).unwrap();
        let oct = s0a.join(&s0b).unwrap().join(&s0c).unwrap();
        assert_eq!(oct.f_vector(), FVector(vec![6, 12, 8]));
        assert!(s0a.join(&s0a).is_err());

        let bip = cycle(&[1, 2, 3]).unwrap().join(&standard_sphere(0, &[4, 5]).unwrap()).unwrap();
        assert_eq!(bip.f_vector(), FVector(vec![5, 9, 6]));

        let disk = cycle(&[1, 2, 3]).unwrap().cone(9).unwrap();
        assert_eq!(disk.euler_characteristic(), 1);
        assert!(cycle(&[1, 2, 3]).unwrap().cone(2).is_err());
    }

    #[test]
    fn purity_and_connectivity() {
        let k = cx(&[&[1, 2, 3], &[3, 4], &[5, 6]]);
        assert!(!k.is_pure());
        assert_eq!(k.pure_part(), cx(&[&[1, 2, 3]]));
        assert_eq!(k.num_components(), 2);
        assert!(!k.is_connected());
        assert!(cx(&[&[1, 2], &[2, 3]]).is_connected());
    }

    #[test]
    fn encoding_roundtrip() {
        let k = cx(&[&[1, 2, 3], &[3, 4], &[10, 63]]);
        assert_eq!(k.encoding(), "1,2,3;3,4;10,63");
        assert_eq!(SimplicialComplex::from_encoding(&k.encoding()).unwrap(), k);
        assert!(SimplicialComplex::from_encoding("").unwrap().is_void());
    }

    #[test]
    fn intersection_of_complexes() {
        let a = cx(&[&[1, 2, 3], &[2, 3, 4]]);
        let b = cx(&[&[2, 3, 5], &[1, 4]]);
        assert_eq!(a.intersection(&b), cx(&[&[2, 3], &[1], &[4]]));
    }
}
