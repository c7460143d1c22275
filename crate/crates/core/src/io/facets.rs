use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Face, SimplicialComplex, Vertex, MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FacetParseError {
    #[error("line {line}: label {label} is not below 64")]
    LabelOverflow { line: usize, label: String },
    #[error("line {line}: more than 64 distinct labels")]
    TooManyLabels { line: usize },
    #[error("line {line}: vertex {label} repeated in one facet")]
    Repeated { line: usize, label: String },
    #[error("line {line}: bad label {label:?}")]
    BadLabel { line: usize, label: String },
    #[error("no facets in input")]
    Empty,
}

/// A parsed facet list with any normalization warnings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFacets {
    pub complex: SimplicialComplex,
    pub warnings: Vec<String>,
    /// Token names by vertex id, when the input used non-numeric labels.
    pub labels: Option<Vec<String>>,
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && s.len() <= 16 && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses whitespace-separated facets, one per line. `#` starts a comment.
///
/// If every label is a decimal integer the integers are used directly,
/// otherwise all tokens are numbered in order of first appearance. Facets
/// contained in others are absorbed with a warning.
pub fn parse_facets(text: &str) -> Result<ParsedFacets, FacetParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(FacetParseError::Empty);
    }
    let numeric = lines.iter().all(|(_, toks)| toks.iter().all(|t| t.chars().all(|c| c.is_ascii_digit())));

    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<&str, Vertex> = HashMap::new();
    let mut raw: Vec<(usize, Face)> = Vec::with_capacity(lines.len());
    for (line, toks) in &lines {
        let mut face = Face::EMPTY;
        for &tok in toks {
            let v = if numeric {
                match tok.parse::<usize>() {
                    Ok(n) if n < MAX_VERTICES => n as Vertex,
                    _ => return Err(FacetParseError::LabelOverflow { line: *line, label: tok.to_string() }),
                }
            } else {
                if !is_token(tok) {
                    return Err(FacetParseError::BadLabel { line: *line, label: tok.to_string() });
                }
                match ids.get(tok) {
                    Some(&v) => v,
                    None => {
                        if names.len() >= MAX_VERTICES {
                            return Err(FacetParseError::TooManyLabels { line: *line });
                        }
                        let v = names.len() as Vertex;
                        ids.insert(tok, v);
                        names.push(tok.to_string());
                        v
                    }
                }
            };
            if face.contains(v) {
                return Err(FacetParseError::Repeated { line: *line, label: tok.to_string() });
            }
            face = face.with(v);
        }
        raw.push((*line, face));
    }

    let complex = SimplicialComplex::from_facets(raw.iter().map(|(_, f)| *f)).map_err(|_| FacetParseError::Empty)?;
    let mut warnings = Vec::new();
    let mut seen = Vec::new();
    for (line, f) in &raw {
        if seen.contains(f) {
            warnings.push(format!("line {line}: duplicate facet {f} ignored"));
        } else if !complex.is_facet(*f) {
            warnings.push(format!("line {line}: face {f} lies in a larger facet and was absorbed"));
        }
        seen.push(*f);
    }
    Ok(ParsedFacets { complex, warnings, labels: (!numeric).then_some(names) })
}

/// One facet per line, labels separated by single spaces, facets in canonical order.
pub fn write_facets(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for f in k.facets() {
        let line: Vec<String> = f.vertices().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Like [`write_facets`] but with token names, recording the mapping in a header comment.
pub fn write_facets_labeled(k: &SimplicialComplex, names: &[String]) -> String {
    let name = |v: Vertex| names.get(usize::from(v)).cloned().unwrap_or_else(|| v.to_string());
    let mut out = String::from("# labels:");
    for v in k.vertex_set().vertices() {
        let _ = write!(out, " {}={}", name(v), v);
    }
    out.push('\n');
    for f in k.facets() {
        let line: Vec<String> = f.vertices().map(name).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FVector;

    #[test]
    fn two_triangles() {
        let p = parse_facets("1 2 3\n1 2 4\n").unwrap();
        assert_eq!(p.complex.f_vector(), FVector(vec![4, 5, 2]));
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn absorbed_with_warning() {
        let p = parse_facets("1 2\n1 2 3\n").unwrap();
        assert_eq!(p.complex.num_facets(), 1);
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].starts_with("line 1"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_facets("# a tetrahedron\n\n0 1 2 3  # solid\n").unwrap();
        assert_eq!(p.complex.num_facets(), 1);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_facets("1 2 3\n1 2 64\n"),
            Err(FacetParseError::LabelOverflow { line: 2, label: "64".into() })
        );
        assert_eq!(parse_facets("1 2\n\n3 3\n"), Err(FacetParseError::Repeated { line: 3, label: "3".into() }));
        assert_eq!(parse_facets("# nothing\n"), Err(FacetParseError::Empty));
        assert!(matches!(parse_facets("a b-c\n"), Err(FacetParseError::BadLabel { line: 1, .. })));
    }

    #[test]
    fn tokens_in_order_of_appearance() {
        let p = parse_facets("a b c\nb c d\n").unwrap();
        assert_eq!(p.labels.as_deref(), Some(&["a".to_string(), "b".into(), "c".into(), "d".into()][..]));
        assert_eq!(p.complex.encoding(), "0,1,2;1,2,3");
        let text = write_facets_labeled(&p.complex, p.labels.as_ref().unwrap());
        assert_eq!(text, "# labels: a=0 b=1 c=2 d=3\na b c\nb c d\n");
        assert_eq!(parse_facets(&text).unwrap().complex, p.complex);
    }

    #[test]
    fn round_trip() {
        let text = "1 2 3\n1 2 4\n1 3 4\n2 3 4\n";
        let k = parse_facets(text).unwrap().complex;
        assert_eq!(write_facets(&k), text);
    }
}
