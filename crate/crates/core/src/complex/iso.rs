use std::collections::HashMap;
use std::fmt;

use super::{ComplexError, FVector, Face, SimplicialComplex, Vertex, MAX_VERTICES};

/// Largest vertex count accepted by [`are_isomorphic`].
pub const ISOMORPHISM_VERTEX_CAP: usize = 12;

const UNMAPPED: u8 = u8::MAX;

/// An injective partial map on vertex labels. Unmapped labels are fixed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    table: [u8; MAX_VERTICES],
    domain: Face,
}

impl VertexMap {
    pub fn identity() -> Self {
        VertexMap { table: [UNMAPPED; MAX_VERTICES], domain: Face::EMPTY }
    }

    /// Builds a map from `(source, target)` pairs; fails on non-injective input.
    pub fn from_pairs<I: IntoIterator<Item = (Vertex, Vertex)>>(pairs: I) -> Result<Self, ComplexError> {
        let mut m = Self::identity();
        let mut image = Face::EMPTY;
        for (s, t) in pairs {
            for x in [s, t] {
                if usize::from(x) >= MAX_VERTICES {
                    return Err(ComplexError::VertexCap(usize::from(x)));
                }
            }
            if m.domain.contains(s) {
                return Err(ComplexError::DuplicateVertex(s));
            }
            if image.contains(t) {
                return Err(ComplexError::DuplicateVertex(t));
            }
            m.table[usize::from(s)] = t;
            m.domain = m.domain.with(s);
            image = image.with(t);
        }
        Ok(m)
    }

    /// Map sending `vs[i]` to `perm[i]`.
    pub fn from_permutation(vs: &[Vertex], perm: &[Vertex]) -> Result<Self, ComplexError> {
        Self::from_pairs(vs.iter().copied().zip(perm.iter().copied()))
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> Vertex {
        let t = self.table[usize::from(v)];
        if t == UNMAPPED {
            v
        } else {
            t
        }
    }

    pub fn apply(&self, f: Face) -> Face {
        let mut bits = 0u64;
        for v in f.vertices() {
            bits |= 1u64 << self.get(v);
        }
        Face::from_bits(bits)
    }

    pub fn domain(&self) -> Face {
        self.domain
    }

    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.domain.vertices().map(|v| (v, self.get(v))).collect()
    }

    pub fn inverse(&self) -> VertexMap {
        Self::from_pairs(self.pairs().into_iter().map(|(a, b)| (b, a))).expect("injective map")
    }
}

impl fmt::Debug for VertexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// Per-vertex isomorphism invariant: link f-vector and the sorted link facet sizes.
pub type VertexInvariant = (FVector, Vec<usize>);

pub fn vertex_invariants(k: &SimplicialComplex) -> Vec<(Vertex, VertexInvariant)> {
    k.vertex_set()
        .vertices()
        .map(|v| {
            let lk = k.link(Face::singleton(v)).expect("vertex of complex");
            let mut sizes: Vec<usize> = lk.facets().iter().map(|f| f.len()).collect();
            sizes.sort_unstable();
            (v, (lk.f_vector(), sizes))
        })
        .collect()
}

/// Finds a vertex bijection carrying `k` onto `l`, if one exists.
///
/// Complete backtracking over bijections that preserve the link invariants of
/// [`vertex_invariants`]; refuses inputs above [`ISOMORPHISM_VERTEX_CAP`] vertices.
pub fn are_isomorphic(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
) -> Result<Option<VertexMap>, ComplexError> {
    let n = k.num_vertices().max(l.num_vertices());
    if n > ISOMORPHISM_VERTEX_CAP {
        return Err(ComplexError::IsomorphismCap(n));
    }
    if k.num_vertices() != l.num_vertices() || k.num_facets() != l.num_facets() {
        return Ok(None);
    }
    if k.f_vector() != l.f_vector() {
        return Ok(None);
    }
    let inv_k = vertex_invariants(k);
    let inv_l = vertex_invariants(l);
    let mut sk: Vec<_> = inv_k.iter().map(|(_, i)| i.clone()).collect();
    let mut sl: Vec<_> = inv_l.iter().map(|(_, i)| i.clone()).collect();
    sk.sort();
    sl.sort();
    if sk != sl {
        return Ok(None);
    }

    // Class ids shared between both sides.
    let mut class_of: HashMap<VertexInvariant, usize> = HashMap::new();
    for (_, inv) in inv_k.iter() {
        let next = class_of.len();
        class_of.entry(inv.clone()).or_insert(next);
    }
    let cls_k: Vec<(Vertex, usize)> = inv_k.iter().map(|(v, i)| (*v, class_of[i])).collect();
    let cls_l: Vec<(Vertex, usize)> = inv_l.iter().map(|(v, i)| (*v, class_of[i])).collect();
    let mut class_size = vec![0usize; class_of.len()];
    for &(_, c) in &cls_k {
        class_size[c] += 1;
    }

    // Order: start at the rarest class, then prefer vertices adjacent to mapped ones.
    let adj = |cx: &SimplicialComplex, v: Vertex| -> Face {
        cx.facets()
            .iter()
            .filter(|f| f.contains(v))
            .fold(Face::EMPTY, |a, f| a.union(*f))
            .without(v)
    };
    let mut order: Vec<(Vertex, usize)> = Vec::with_capacity(cls_k.len());
    let mut placed = Face::EMPTY;
    while order.len() < cls_k.len() {
        let best = cls_k
            .iter()
            .filter(|(v, _)| !placed.contains(*v))
            .max_by_key(|(v, c)| {
                let touching = adj(k, *v).intersection(placed).len();
                (touching, usize::MAX - class_size[*c], usize::MAX - usize::from(*v))
            })
            .copied()
            .expect("unplaced vertex");
        placed = placed.with(best.0);
        order.push(best);
    }

    let mut search = IsoSearch {
        k,
        l,
        order,
        cls_l,
        fwd: [UNMAPPED; MAX_VERTICES],
        used: Face::EMPTY,
        dom: Face::EMPTY,
    };
    if search.extend(0) {
        let pairs: Vec<(Vertex, Vertex)> =
            search.order.iter().map(|(v, _)| (*v, search.fwd[usize::from(*v)])).collect();
        let map = VertexMap::from_pairs(pairs)?;
        debug_assert_eq!(&k.relabel(&map), l);
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

struct IsoSearch<'a> {
    k: &'a SimplicialComplex,
    l: &'a SimplicialComplex,
    order: Vec<(Vertex, usize)>,
    cls_l: Vec<(Vertex, usize)>,
    fwd: [u8; MAX_VERTICES],
    used: Face,
    dom: Face,
}

impl IsoSearch<'_> {
    fn image(&self, f: Face) -> Face {
        let mut bits = 0u64;
        for v in f.vertices() {
            bits |= 1u64 << self.fwd[usize::from(v)];
        }
        Face::from_bits(bits)
    }

    fn preimage(&self, g: Face) -> Option<Face> {
        let mut bits = 0u64;
        for w in g.vertices() {
            let v = self.dom.vertices().find(|&v| self.fwd[usize::from(v)] == w)?;
            bits |= 1u64 << v;
        }
        Some(Face::from_bits(bits))
    }

    /// Faces of `k` restricted to the mapped vertices must correspond exactly.
    fn consistent(&self, v: Vertex) -> bool {
        let w = self.fwd[usize::from(v)];
        for f in self.k.facets().iter().filter(|f| f.contains(v)) {
            if !self.l.contains(self.image(f.intersection(self.dom))) {
                return false;
            }
        }
        for g in self.l.facets().iter().filter(|g| g.contains(w)) {
            match self.preimage(g.intersection(self.used)) {
                Some(p) if self.k.contains(p) => {}
                _ => return false,
            }
        }
        true
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            let mapped: Vec<Face> = self.k.facets().iter().map(|f| self.image(*f)).collect();
            return SimplicialComplex::normalized(mapped) == *self.l;
        }
        let (v, c) = self.order[depth];
        let candidates: Vec<Vertex> = self
            .cls_l
            .iter()
            .filter(|(w, cw)| *cw == c && !self.used.contains(*w))
            .map(|(w, _)| *w)
            .collect();
        for w in candidates {
            self.fwd[usize::from(v)] = w;
            self.used = self.used.with(w);
            self.dom = self.dom.with(v);
            if self.consistent(v) && self.extend(depth + 1) {
                return true;
            }
            self.fwd[usize::from(v)] = UNMAPPED;
            self.used = self.used.without(w);
            self.dom = self.dom.without(v);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cycle, octahedron, standard_sphere};

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let k = octahedron();
        let map = VertexMap::from_permutation(&[1, 2, 3, 4, 5, 6], &[9, 4, 11, 0, 7, 2]).unwrap();
        let l = k.relabel(&map);
        let found = are_isomorphic(&k, &l).unwrap().expect("isomorphic");
        assert_eq!(k.relabel(&found), l);
        let back = are_isomorphic(&l, &k).unwrap().unwrap();
        assert_eq!(l.relabel(&back), k);
        assert_eq!(l.relabel(&found.inverse()), k);
    }

    #[test]
    fn non_isomorphic_cycles() {
        let c4 = cycle(&[1, 2, 3, 4]).unwrap();
        let two_c3 = cycle(&[1, 2, 3]).unwrap().union(&cycle(&[4, 5, 6]).unwrap());
        let c6 = cycle(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert!(are_isomorphic(&c4, &two_c3).unwrap().is_none());
        assert!(are_isomorphic(&c6, &two_c3).unwrap().is_none());
    }

    #[test]
    fn cap_enforced() {
        let labels: Vec<Vertex> = (0..13).collect();
        let big = cycle(&labels).unwrap();
        assert_eq!(are_isomorphic(&big, &big), Err(ComplexError::IsomorphismCap(13)));
        let s = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        assert!(are_isomorphic(&s, &s).unwrap().is_some());
    }

    #[test]
    fn map_rejects_non_injective() {
        assert!(VertexMap::from_pairs([(1, 2), (3, 2)]).is_err());
        assert!(VertexMap::from_pairs([(1, 2), (1, 3)]).is_err());
    }
}
