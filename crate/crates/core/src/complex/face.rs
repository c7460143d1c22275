use std::cmp::Ordering;
use std::fmt;

use super::ComplexError;

/// Vertex identifier. Complexes live on the label range `0..64`.
pub type Vertex = u8;

/// Number of representable vertex labels.
pub const MAX_VERTICES: usize = 64;

/// A simplex, stored as a bit-set over vertex labels.
///
/// Ordering is lexicographic on the increasing vertex sequence, so
/// `{1,2} < {1,2,3} < {1,3}`. The empty face exists as a sentinel value
/// (for links of facets and set arithmetic) but is never stored as a facet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    /// Builds a face from vertex labels. Duplicates and labels `>= 64` are rejected.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Face, ComplexError> {
        let mut bits = 0u64;
        for v in vertices {
            if usize::from(v) >= MAX_VERTICES {
                return Err(ComplexError::VertexCap(usize::from(v)));
            }
            let b = 1u64 << v;
            if bits & b != 0 {
                return Err(ComplexError::DuplicateVertex(v));
            }
            bits |= b;
        }
        Ok(Face(bits))
    }

    /// Same as [`Face::new`] for labels given as wider integers.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Result<Face, ComplexError> {
        let mut vs = Vec::new();
        for l in labels {
            if l >= MAX_VERTICES {
                return Err(ComplexError::VertexCap(l));
            }
            vs.push(l as Vertex);
        }
        Face::new(vs)
    }

    #[inline]
    pub const fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(v: Vertex) -> Face {
        debug_assert!(usize::from(v) < MAX_VERTICES);
        Face(1u64 << v)
    }

    /// Number of vertices.
    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Dimension, `-1` for the empty face.
    #[inline]
    pub fn dim(self) -> isize {
        self.len() as isize - 1
    }

    #[inline]
    pub fn contains(self, v: Vertex) -> bool {
        usize::from(v) < MAX_VERTICES && self.0 & (1u64 << v) != 0
    }

    #[inline]
    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, v: Vertex) -> Face {
        Face(self.0 | (1u64 << v))
    }

    #[inline]
    pub fn without(self, v: Vertex) -> Face {
        Face(self.0 & !(1u64 << v))
    }

    /// Smallest vertex, if any.
    #[inline]
    pub fn min_vertex(self) -> Option<Vertex> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Vertex)
    }

    /// Largest vertex, if any.
    #[inline]
    pub fn max_vertex(self) -> Option<Vertex> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as Vertex)
    }

    /// Vertices in increasing order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.vertices().collect()
    }

    /// Codimension-one faces, in lexicographic order.
    pub fn boundary(self) -> Vec<Face> {
        let mut out: Vec<Face> = self.vertices().map(|v| self.without(v)).collect();
        out.sort();
        out
    }

    /// All subsets with exactly `k` vertices, unsorted.
    pub fn subsets_of_size(self, k: usize) -> Vec<Face> {
        let verts = self.to_vec();
        let n = verts.len();
        if k > n {
            return Vec::new();
        }
        if k == 0 {
            return vec![Face::EMPTY];
        }
        // Gosper's hack over positions into `verts`.
        let mut out = Vec::new();
        let limit = 1u128 << n;
        let mut c: u128 = (1u128 << k) - 1;
        while c < limit {
            let mut bits = 0u64;
            let mut m = c;
            while m != 0 {
                bits |= 1u64 << verts[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            out.push(Face(bits));
            let low = c & c.wrapping_neg();
            let ripple = c + low;
            c = (((ripple ^ c) >> 2) / low) | ripple;
        }
        out
    }

    /// All non-empty subsets.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = full;
        let mut done = full == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let cur = sub;
            if sub == 0 {
                return None;
            }
            sub = (sub - 1) & full;
            if sub == 0 {
                done = true;
            }
            Some(Face(cur))
        })
    }
}

/// Iterator over the vertices of a face.
#[derive(Clone)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = Vertex;

    #[inline]
    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as Vertex;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
            let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
            if x != y {
                return x.cmp(&y);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Face {
    /// Comma-separated vertex labels, e.g. `1,2,3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Face {
    type Err = ComplexError;

    /// Parses the [`Display`](fmt::Display) form; commas or whitespace separate labels.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut labels = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let l: usize = tok
                .parse()
                .map_err(|_| ComplexError::BadFaceSyntax(s.to_string()))?;
            labels.push(l);
        }
        Face::from_labels(labels)
    }
}
