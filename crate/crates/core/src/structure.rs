//! Pseudomanifold predicates, boundary complexes, simplicial neighbourhoods and complements.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("no boundary: every ridge lies in two facets")]
    NoBoundary,
    #[error("not a weak pseudomanifold with boundary")]
    NotWeakPmWithBoundary,
    #[error("not a subcomplex")]
    NotSubcomplex,
    #[error("ambient complex is not a pseudomanifold")]
    NotPseudomanifold,
    #[error("subcomplex is not induced")]
    NotInduced,
    #[error("subcomplex is not pure")]
    NotPure,
    #[error("subcomplex has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: isize, got: isize },
    #[error("subcomplex is not proper (its complement is empty)")]
    NotProper,
    #[error("decomposition needs dimension at least 1")]
    DimensionTooSmall,
    #[error("decomposition check failed: {0}")]
    Violated(&'static str),
}

/// Number of facets through each ridge of a pure complex.
///
/// For a 0-dimensional complex the only ridge is the empty face.
pub fn ridge_degrees(k: &SimplicialComplex) -> HashMap<Face, usize> {
    let mut out = HashMap::new();
    let d = k.dim();
    if d < 0 {
        return out;
    }
    for &f in k.facets() {
        if f.dim() != d {
            continue;
        }
        for r in f.boundary() {
            *out.entry(r).or_insert(0) += 1;
        }
    }
    out
}

/// Pure, and every ridge lies in exactly two facets.
pub fn is_weak_pseudomanifold(k: &SimplicialComplex) -> bool {
    !k.is_void() && k.is_pure() && ridge_degrees(k).values().all(|&n| n == 2)
}

/// Weak pseudomanifold whose facet graph (adjacent = sharing a ridge) is connected.
pub fn is_pseudomanifold(k: &SimplicialComplex) -> bool {
    is_weak_pseudomanifold(k) && facet_graph_connected(k)
}

/// Pure, ridge degrees in `{1, 2}`, with at least one ridge of degree 1.
pub fn is_weak_pm_with_boundary(k: &SimplicialComplex) -> bool {
    if k.is_void() || !k.is_pure() {
        return false;
    }
    let deg = ridge_degrees(k);
    deg.values().all(|&n| n == 1 || n == 2) && deg.values().any(|&n| n == 1)
}

fn facet_graph_connected(k: &SimplicialComplex) -> bool {
    let facets = k.facets();
    if facets.len() <= 1 {
        return true;
    }
    let d = k.dim();
    let mut seen = vec![false; facets.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, g) in facets.iter().enumerate() {
            if !seen[j] && facets[i].intersection(*g).dim() == d - 1 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The pure complex generated by the ridges of degree one.
pub fn boundary_complex(k: &SimplicialComplex) -> Result<SimplicialComplex, StructureError> {
    if !k.is_pure() || k.is_void() {
        return Err(StructureError::NotWeakPmWithBoundary);
    }
    let deg = ridge_degrees(k);
    if deg.values().any(|&n| n > 2) {
        return Err(StructureError::NotWeakPmWithBoundary);
    }
    let mut ridges: Vec<Face> = deg.into_iter().filter(|&(_, n)| n == 1).map(|(r, _)| r).collect();
    if ridges.is_empty() {
        return Err(StructureError::NoBoundary);
    }
    ridges.sort();
    Ok(SimplicialComplex::normalized(ridges))
}

/// `N(L, K)`: generated by the facets of `k` meeting `V(L)`.
pub fn simplicial_neighbourhood(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
) -> Result<SimplicialComplex, StructureError> {
    if !l.is_subcomplex_of(k) {
        return Err(StructureError::NotSubcomplex);
    }
    let v = l.vertex_set();
    Ok(SimplicialComplex::normalized(
        k.facets().iter().copied().filter(|f| !f.is_disjoint(v)).collect(),
    ))
}

/// `C(L, K)`: the subcomplex of `k` induced on `V(K) \ V(L)`.
pub fn simplicial_complement(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
) -> Result<SimplicialComplex, StructureError> {
    if !l.is_subcomplex_of(k) {
        return Err(StructureError::NotSubcomplex);
    }
    Ok(k.induced(k.vertex_set().difference(l.vertex_set())).expect("vertex subset"))
}

/// `L` equals the subcomplex of `K` induced on `V(L)`.
pub fn is_induced(l: &SimplicialComplex, k: &SimplicialComplex) -> Result<bool, StructureError> {
    if !l.is_subcomplex_of(k) {
        return Err(StructureError::NotSubcomplex);
    }
    Ok(k.induced(l.vertex_set()).expect("vertex subset") == *l)
}

/// `Y = Y1 ∪ Y2` split along the complement `L` of `Y1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub y1: SimplicialComplex,
    pub l: SimplicialComplex,
    pub y2: SimplicialComplex,
    pub shared_boundary: SimplicialComplex,
}

/// Splits a pseudomanifold along a proper, induced, pure top-dimensional subcomplex.
///
/// Every structural conclusion is re-checked: both halves are weak
/// pseudomanifolds with boundary, the facets are partitioned, `∂Y2` is induced
/// in `Y2`, and `∂Y2 = ∂Y1 = Y1 ∩ Y2`.
pub fn decompose(y: &SimplicialComplex, y1: &SimplicialComplex) -> Result<Decomposition, StructureError> {
    if !is_pseudomanifold(y) {
        return Err(StructureError::NotPseudomanifold);
    }
    if y.dim() < 1 {
        return Err(StructureError::DimensionTooSmall);
    }
    if !is_induced(y1, y)? {
        return Err(StructureError::NotInduced);
    }
    if !y1.is_pure() {
        return Err(StructureError::NotPure);
    }
    if y1.dim() != y.dim() {
        return Err(StructureError::DimensionMismatch { expected: y.dim(), got: y1.dim() });
    }
    if y1.vertex_set() == y.vertex_set() {
        return Err(StructureError::NotProper);
    }

    let l = simplicial_complement(y1, y)?;
    let y2 = simplicial_neighbourhood(&l, y)?;

    if !is_weak_pm_with_boundary(y1) || !is_weak_pm_with_boundary(&y2) {
        return Err(StructureError::Violated("halves are weak pseudomanifolds with boundary"));
    }
    let partition = y.facets().iter().all(|f| y1.is_facet(*f) != y2.is_facet(*f))
        && y1.num_facets() + y2.num_facets() == y.num_facets();
    if !partition {
        return Err(StructureError::Violated("facets split between the halves"));
    }
    let b1 = boundary_complex(y1).map_err(|_| StructureError::Violated("Y1 has a boundary"))?;
    let b2 = boundary_complex(&y2).map_err(|_| StructureError::Violated("Y2 has a boundary"))?;
    if !is_induced(&b2, &y2)? {
        return Err(StructureError::Violated("boundary of Y2 is induced"));
    }
    if b1 != b2 {
        return Err(StructureError::Violated("the halves share their boundary"));
    }
    if y1.intersection(&y2) != b2 {
        return Err(StructureError::Violated("the halves meet in their boundary"));
    }
    Ok(Decomposition { y1: y1.clone(), l, y2, shared_boundary: b2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cycle, octahedron, standard_ball, standard_sphere};

    fn face(vs: &[u8]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn spheres_are_pseudomanifolds() {
        for d in 0..=3usize {
            let labels: Vec<u8> = (1..=d as u8 + 2).collect();
            let s = standard_sphere(d, &labels).unwrap();
            assert!(is_pseudomanifold(&s), "d = {d}");
            assert!(!is_weak_pm_with_boundary(&s));
        }
    }

    #[test]
    fn disjoint_spheres_not_connected() {
        let two = cycle(&[1, 2, 3]).unwrap().union(&cycle(&[4, 5, 6]).unwrap());
        assert!(is_weak_pseudomanifold(&two));
        assert!(!is_pseudomanifold(&two));
    }

    #[test]
    fn simplex_boundary() {
        let b = standard_ball(3, &[1, 2, 3, 4]).unwrap();
        assert!(is_weak_pm_with_boundary(&b));
        assert_eq!(boundary_complex(&b).unwrap(), standard_sphere(2, &[1, 2, 3, 4]).unwrap());
        let s = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(boundary_complex(&s), Err(StructureError::NoBoundary));
    }

    #[test]
    fn cone_boundary_is_base() {
        let c5 = cycle(&[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(boundary_complex(&c5.cone(9).unwrap()).unwrap(), c5);
    }

    #[test]
    fn neighbourhood_of_vertex_is_star() {
        let o = octahedron();
        let v = SimplicialComplex::from_lists(&[[1]]).unwrap();
        assert_eq!(simplicial_neighbourhood(&v, &o).unwrap(), o.star(face(&[1])).unwrap());
        let c = simplicial_complement(&v, &o).unwrap();
        assert_eq!(c.vertex_set(), face(&[2, 3, 4, 5, 6]));
    }

    #[test]
    fn complement_of_facet_in_sphere() {
        let s = standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap();
        let sigma = standard_ball(3, &[1, 2, 3, 4]).unwrap();
        assert_eq!(simplicial_complement(&sigma, &s).unwrap(), SimplicialComplex::from_lists(&[[5]]).unwrap());
        assert!(is_induced(&sigma, &s).unwrap());
        let stray = SimplicialComplex::from_lists(&[[1, 9]]).unwrap();
        assert_eq!(simplicial_complement(&stray, &s), Err(StructureError::NotSubcomplex));
    }

    #[test]
    fn decompose_s3() {
        let s = standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap();
        let y1 = standard_ball(3, &[1, 2, 3, 4]).unwrap();
        let dec = decompose(&s, &y1).unwrap();
        assert_eq!(dec.shared_boundary, standard_sphere(2, &[1, 2, 3, 4]).unwrap());
        assert_eq!(dec.y2.num_facets(), 4);
    }

    #[test]
    fn decompose_octahedron_star() {
        let o = octahedron();
        let y1 = o.star(face(&[1])).unwrap();
        let dec = decompose(&o, &y1).unwrap();
        assert_eq!(dec.shared_boundary, cycle(&[3, 5, 4, 6]).unwrap());
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let o = octahedron();
        let edge = SimplicialComplex::from_lists(&[[1, 3]]).unwrap();
        assert!(matches!(decompose(&o, &edge), Err(StructureError::DimensionMismatch { .. })));
        let three = SimplicialComplex::from_lists(&[[1, 3, 5], [1, 3, 6], [1, 4, 5]]).unwrap();
        assert_eq!(decompose(&o, &three), Err(StructureError::NotInduced));
        assert_eq!(decompose(&o, &o), Err(StructureError::NotProper));
        let tri = standard_ball(2, &[1, 2, 3]).unwrap();
        assert_eq!(decompose(&tri, &tri), Err(StructureError::NotPseudomanifold));
    }
}
