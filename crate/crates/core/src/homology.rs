//! Simplicial homology with GF(2) coefficients.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary degree {q} out of range 1..={dim}")]
    DegreeOutOfRange { q: usize, dim: isize },
}

/// Dense matrix over GF(2), one bit-row per row.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, bits: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Product over GF(2). Panics on a dimension mismatch.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.words, k * rhs.words);
                    for w in 0..out.words {
                        out.bits[dst + w] ^= rhs.bits[src + w];
                    }
                }
            }
        }
        out
    }

    /// Rank by bit-row Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.bits.clone();
        let words = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(pivot) = (rank..self.rows).find(|&r| m[r * words + w] & b != 0) else {
                continue;
            };
            if pivot != rank {
                for i in 0..words {
                    m.swap(pivot * words + i, rank * words + i);
                }
            }
            for r in rank + 1..self.rows {
                if m[r * words + w] & b != 0 {
                    for i in w..words {
                        m[r * words + i] ^= m[rank * words + i];
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced Betti numbers `(b~_0, ..., b~_d)` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Alternating sum, equal to `chi - 1` for a non-void complex.
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&b| b == 0)
    }

    /// Reduced homology of the `d`-sphere: a single 1 in degree `d`.
    pub fn is_sphere(&self, d: usize) -> bool {
        self.0.len() == d + 1 && self.0.iter().enumerate().all(|(q, &b)| b == usize::from(q == d))
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Boundary matrix from `q`-chains to `(q-1)`-chains.
///
/// Rows index the `(q-1)`-faces and columns the `q`-faces, both in
/// lexicographic order.
pub fn boundary_matrix(k: &SimplicialComplex, q: usize) -> Result<Gf2Matrix, HomologyError> {
    let dim = k.dim();
    if q < 1 || q as isize > dim {
        return Err(HomologyError::DegreeOutOfRange { q, dim });
    }
    let rows = k.faces(q - 1);
    let cols = k.faces(q);
    Ok(boundary_between(&rows, &cols))
}

fn boundary_between(rows: &[Face], cols: &[Face]) -> Gf2Matrix {
    let index: HashMap<Face, usize> = rows.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
    for (c, sigma) in cols.iter().enumerate() {
        for v in sigma.vertices() {
            m.set(index[&sigma.without(v)], c, true);
        }
    }
    m
}

/// Ranks of `∂_1, ..., ∂_d`; entry `q` holds `rank ∂_q` (entry 0 is unused and zero).
pub fn boundary_ranks(k: &SimplicialComplex) -> Vec<usize> {
    let faces = k.faces_by_dim();
    let mut ranks = vec![0; faces.len()];
    for q in 1..faces.len() {
        ranks[q] = boundary_between(&faces[q - 1], &faces[q]).rank();
    }
    ranks
}

/// Reduced GF(2) Betti numbers. The void complex yields an empty vector.
///
/// `b~_0` comes from the component count; higher degrees use
/// `dim ker ∂_q - rank ∂_{q+1}`.
pub fn reduced_betti(k: &SimplicialComplex) -> BettiVector {
    let faces = k.faces_by_dim();
    if faces.is_empty() {
        return BettiVector(Vec::new());
    }
    let ranks = boundary_ranks(k);
    let top = faces.len() - 1;
    let mut out = Vec::with_capacity(top + 1);
    out.push(k.num_components() - 1);
    for q in 1..=top {
        let kernel = faces[q].len() - ranks[q];
        debug_assert_eq!(ranks[q] + kernel, faces[q].len());
        let image = if q < top { ranks[q + 1] } else { 0 };
        out.push(kernel - image);
    }
    BettiVector(out)
}

/// All reduced GF(2) homology vanishes.
pub fn is_z2_acyclic(k: &SimplicialComplex) -> bool {
    reduced_betti(k).is_zero()
}

/// Reduced GF(2) homology equals that of the `d`-sphere.
pub fn is_z2_homology_sphere(k: &SimplicialComplex, d: usize) -> bool {
    k.dim() == d as isize && reduced_betti(k).is_sphere(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_ball, standard_sphere};

    #[test]
    fn single_edge_boundary() {
        let k = SimplicialComplex::from_lists(&[[1, 2]]).unwrap();
        let m = boundary_matrix(&k, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert!(m.get(0, 0) && m.get(1, 0));
        assert!(boundary_matrix(&k, 0).is_err());
        assert!(boundary_matrix(&k, 2).is_err());
    }

    #[test]
    fn boundary_squared_vanishes_on_s3() {
        let s3 = standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap();
        for q in 2..=3 {
            let a = boundary_matrix(&s3, q - 1).unwrap();
            let b = boundary_matrix(&s3, q).unwrap();
            assert!(a.mul(&b).is_zero());
        }
    }

    #[test]
    fn spheres_and_balls() {
        let s2 = standard_sphere(2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(reduced_betti(&s2), BettiVector(vec![0, 0, 1]));
        assert!(is_z2_homology_sphere(&s2, 2));
        assert!(!is_z2_homology_sphere(&s2, 1));
        let b3 = standard_ball(3, &[0, 1, 2, 3]).unwrap();
        assert!(is_z2_acyclic(&b3));
        assert!(!is_z2_acyclic(&SimplicialComplex::void()));
    }

    #[test]
    fn rank_handles_wide_matrices() {
        let mut m = Gf2Matrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 129, true);
        m.set(1, 5, true);
        m.set(2, 64, true);
        assert_eq!(m.rank(), 3);
        m.set(2, 64, false);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn two_points() {
        let k = SimplicialComplex::from_lists(&[[1], [2]]).unwrap();
        assert_eq!(reduced_betti(&k), BettiVector(vec![1]));
        assert!(is_z2_homology_sphere(&k, 0));
    }
}
