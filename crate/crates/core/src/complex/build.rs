use super::{ComplexError, Face, SimplicialComplex, Vertex};

fn label_face(labels: &[Vertex], expected: usize) -> Result<Face, ComplexError> {
    if labels.len() != expected {
        return Err(ComplexError::LabelCount { expected, got: labels.len() });
    }
    Face::new(labels.iter().copied())
}

/// `S^d_{d+2}`: all proper non-empty subsets of `d + 2` labels.
pub fn standard_sphere(d: usize, labels: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
    let all = label_face(labels, d + 2)?;
    SimplicialComplex::from_facets(all.boundary())
}

/// `Δ^d_{d+1}`: the full simplex on `d + 1` labels.
pub fn standard_ball(d: usize, labels: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
    let all = label_face(labels, d + 1)?;
    SimplicialComplex::from_facets([all])
}

/// The `n`-gon through the labels in the given cyclic order.
pub fn cycle(labels: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
    let n = labels.len();
    if n < 3 {
        return Err(ComplexError::ShortCycle(n));
    }
    Face::new(labels.iter().copied())?;
    let edges = (0..n)
        .map(|i| Face::new([labels[i], labels[(i + 1) % n]]))
        .collect::<Result<Vec<_>, _>>()?;
    SimplicialComplex::from_facets(edges)
}

/// `S^0_2 * S^0_2 * S^0_2` on `{1,2} * {3,4} * {5,6}`.
pub fn octahedron() -> SimplicialComplex {
    let mut facets = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                facets.push(Face::new([a, b, c]).expect("static labels"));
            }
        }
    }
    SimplicialComplex::from_facets(facets).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FVector;

    #[test]
    fn standard_objects() {
        assert_eq!(standard_sphere(1, &[1, 2, 3]).unwrap(), cycle(&[1, 2, 3]).unwrap());
        assert_eq!(
            standard_sphere(3, &[1, 2, 3, 4, 5]).unwrap().f_vector(),
            FVector(vec![5, 10, 10, 5])
        );
        assert_eq!(standard_ball(2, &[1, 2, 3]).unwrap().euler_characteristic(), 1);
        assert_eq!(standard_sphere(0, &[4, 7]).unwrap().num_facets(), 2);
        assert_eq!(octahedron().f_vector(), FVector(vec![6, 12, 8]));
    }

    #[test]
    fn bad_labels() {
        assert_eq!(cycle(&[1, 2]), Err(ComplexError::ShortCycle(2)));
        assert_eq!(
            standard_sphere(2, &[1, 2, 3]),
            Err(ComplexError::LabelCount { expected: 4, got: 3 })
        );
        assert!(standard_ball(1, &[3, 3]).is_err());
        assert!(cycle(&[1, 2, 1]).is_err());
    }
}
