//! Indented key/value report documents.
//!
//! ```text
//! tool: trisphere
//! status: collapsible
//! certificate:
//!   steps:
//!     - 1,2 < 1,2,3
//!   terminal: 3
//! ```
//!
//! Maps are `key: value` lines, lists are `- value` lines, and a nested block
//! sits two spaces deeper under a bare `key:` or `-`. Empty collections are
//! written `[]` and `{}`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bistellar::{FlipTrace, MoveClass, MoveDescriptor};
use crate::census::CensusResult;
use crate::collapse::{CollapseCertificate, CollapseStep, CollapseVerdict};
use crate::complex::{Face, SimplicialComplex};
use crate::homology::BettiVector;
use crate::recognition::{InducedBall, ManifoldVerdict, SphereCertificate, SphereVerdict, Tri};

pub const TOOL_NAME: &str = "trisphere";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("report line {line}: {message}")]
pub struct ReportError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ReportError {
    ReportError { line, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Scalar(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn scalar(x: impl ToString) -> Node {
        Node::Scalar(x.to_string())
    }

    pub fn map() -> Node {
        Node::Map(Vec::new())
    }

    /// Appends a map entry; no-op on other variants.
    pub fn with(mut self, key: &str, value: Node) -> Node {
        if let Node::Map(entries) = &mut self {
            entries.push((key.to_string(), value));
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Node::Scalar(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Node]> {
        match self {
            Node::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self {
            Node::Scalar(s) => {
                out.push_str(&escape(s));
                out.push('\n');
            }
            _ => render_block(self, 0, &mut out),
        }
        out
    }
}

fn escape(s: &str) -> String {
    let plain = !s.is_empty()
        && s != "[]"
        && s != "{}"
        && !s.starts_with('"')
        && s.trim() == s
        && !s.contains(['\n', '\r']);
    if plain {
        return s.to_string();
    }
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn unescape(s: &str, line: usize) -> Result<String, ReportError> {
    if !s.starts_with('"') {
        return Ok(s.to_string());
    }
    if s.len() < 2 || !s.ends_with('"') {
        return Err(err(line, "unterminated quoted value"));
    }
    let mut out = String::new();
    let mut chars = s[1..s.len() - 1].chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(c @ ('"' | '\\')) => out.push(c),
            _ => return Err(err(line, "bad escape")),
        }
    }
    Ok(out)
}

fn inline(v: &Node) -> Option<String> {
    match v {
        Node::Scalar(s) => Some(escape(s)),
        Node::List(items) if items.is_empty() => Some("[]".into()),
        Node::Map(entries) if entries.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render_block(node: &Node, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match node {
        Node::Map(entries) => {
            for (k, v) in entries {
                match inline(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_block(v, indent + 2, out);
                    }
                }
            }
        }
        Node::List(items) => {
            for v in items {
                match inline(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_block(v, indent + 2, out);
                    }
                }
            }
        }
        Node::Scalar(s) => {
            let _ = writeln!(out, "{pad}{}", escape(s));
        }
    }
}

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

/// Parses a document written by [`Node::render`] for a map or list root.
pub fn parse_report(text: &str) -> Result<Node, ReportError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(err(i + 1, "odd indentation"));
        }
        lines.push(Line { number: i + 1, indent, text: raw[indent..].trim_end() });
    }
    if lines.is_empty() {
        return Ok(Node::map());
    }
    if lines[0].indent != 0 {
        return Err(err(lines[0].number, "document must start at column 0"));
    }
    let mut pos = 0;
    let node = parse_block(&lines, &mut pos, 0)?;
    if pos != lines.len() {
        return Err(err(lines[pos].number, "unexpected indentation"));
    }
    Ok(node)
}

fn parse_value(s: &str, line: usize) -> Result<Node, ReportError> {
    Ok(match s {
        "[]" => Node::List(Vec::new()),
        "{}" => Node::map(),
        _ => Node::Scalar(unescape(s, line)?),
    })
}

fn parse_child(lines: &[Line], pos: &mut usize, indent: usize, line: usize) -> Result<Node, ReportError> {
    match lines.get(*pos) {
        Some(l) if l.indent == indent + 2 => parse_block(lines, pos, indent + 2),
        _ => Err(err(line, "expected a nested block")),
    }
}

fn parse_block(lines: &[Line], pos: &mut usize, indent: usize) -> Result<Node, ReportError> {
    let is_list = lines[*pos].text == "-" || lines[*pos].text.starts_with("- ");
    let mut items = Vec::new();
    let mut entries = Vec::new();
    while let Some(l) = lines.get(*pos) {
        if l.indent < indent {
            break;
        }
        if l.indent > indent {
            return Err(err(l.number, "unexpected indentation"));
        }
        *pos += 1;
        if is_list {
            if l.text == "-" {
                items.push(parse_child(lines, pos, indent, l.number)?);
            } else if let Some(rest) = l.text.strip_prefix("- ") {
                items.push(parse_value(rest, l.number)?);
            } else {
                return Err(err(l.number, "expected a list item"));
            }
        } else if let Some(key) = l.text.strip_suffix(':').filter(|k| !k.contains(": ")) {
            entries.push((key.to_string(), parse_child(lines, pos, indent, l.number)?));
        } else if let Some((key, rest)) = l.text.split_once(": ") {
            entries.push((key.to_string(), parse_value(rest, l.number)?));
        } else {
            return Err(err(l.number, "expected `key: value`"));
        }
    }
    Ok(if is_list { Node::List(items) } else { Node::Map(entries) })
}

/// A report document: a header naming the tool, command, input and seed, then results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, Node)>,
}

impl Report {
    pub fn new(command: &str, input: Option<&SimplicialComplex>, seed: Option<u64>) -> Self {
        let mut entries = vec![
            ("tool".to_string(), Node::scalar(TOOL_NAME)),
            ("version".to_string(), Node::scalar(TOOL_VERSION)),
            ("command".to_string(), Node::scalar(command)),
        ];
        if let Some(k) = input {
            entries.push(("input".to_string(), Node::scalar(k.encoding())));
        }
        if let Some(s) = seed {
            entries.push(("seed".to_string(), Node::scalar(s)));
        }
        Report { entries }
    }

    pub fn push(&mut self, key: &str, value: Node) {
        self.entries.push((key.to_string(), value));
    }

    pub fn node(&self) -> Node {
        Node::Map(self.entries.clone())
    }

    pub fn render(&self) -> String {
        self.node().render()
    }
}

fn field<'a>(n: &'a Node, key: &str) -> Result<&'a Node, ReportError> {
    n.get(key).ok_or_else(|| err(0, format!("missing field {key:?}")))
}

fn text<'a>(n: &'a Node, key: &str) -> Result<&'a str, ReportError> {
    field(n, key)?.as_str().ok_or_else(|| err(0, format!("field {key:?} is not a scalar")))
}

fn parse_num<T: std::str::FromStr>(n: &Node, key: &str) -> Result<T, ReportError> {
    text(n, key)?.parse().map_err(|_| err(0, format!("field {key:?} is not a number")))
}

fn parse_bool(n: &Node, key: &str) -> Result<bool, ReportError> {
    match text(n, key)? {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(err(0, format!("field {key:?}: expected true/false, got {other:?}"))),
    }
}

fn parse_face(s: &str) -> Result<Face, ReportError> {
    s.parse().map_err(|e| err(0, format!("{e}")))
}

fn parse_complex(s: &str) -> Result<SimplicialComplex, ReportError> {
    SimplicialComplex::from_encoding(s).map_err(|e| err(0, format!("{e}")))
}

fn betti_node(b: &BettiVector) -> Node {
    Node::scalar(b)
}

pub fn betti_from_node(n: &Node) -> Result<BettiVector, ReportError> {
    let s = n.as_str().ok_or_else(|| err(0, "betti vector is not a scalar"))?;
    let inner = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| err(0, "bad betti vector"))?;
    if inner.trim().is_empty() {
        return Ok(BettiVector(Vec::new()));
    }
    inner
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| err(0, "bad betti entry")))
        .collect::<Result<Vec<usize>, _>>()
        .map(BettiVector)
}

pub fn collapse_certificate_node(c: &CollapseCertificate) -> Node {
    Node::map()
        .with("steps", Node::List(c.steps.iter().map(Node::scalar).collect()))
        .with("terminal", Node::scalar(c.terminal.encoding()))
}

pub fn collapse_certificate_from_node(n: &Node) -> Result<CollapseCertificate, ReportError> {
    let steps = field(n, "steps")?
        .as_list()
        .ok_or_else(|| err(0, "steps is not a list"))?
        .iter()
        .map(|s| {
            let s = s.as_str().ok_or_else(|| err(0, "step is not a scalar"))?;
            let (a, b) = s.split_once(" < ").ok_or_else(|| err(0, format!("bad step {s:?}")))?;
            Ok(CollapseStep { free_face: parse_face(a)?, coface: parse_face(b)? })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;
    Ok(CollapseCertificate { steps, terminal: parse_complex(text(n, "terminal")?)? })
}

pub fn collapse_verdict_node(v: &CollapseVerdict) -> Node {
    let mut n = Node::map()
        .with("status", Node::scalar(v.status))
        .with("nodes_explored", Node::scalar(v.nodes_explored));
    if let Some(c) = &v.certificate {
        n = n.with("certificate", collapse_certificate_node(c));
    }
    n
}

pub fn move_node(m: &MoveDescriptor) -> Node {
    Node::map()
        .with("a_set", Node::scalar(m.a_set))
        .with("alpha", Node::scalar(m.alpha))
        .with("beta", Node::scalar(m.beta))
        .with("i", Node::scalar(m.i))
        .with("bs1", Node::scalar(m.bs1))
        .with("bs2", Node::scalar(m.bs2))
        .with("class", Node::scalar(m.class))
}

fn move_from_node(n: &Node) -> Result<MoveDescriptor, ReportError> {
    Ok(MoveDescriptor {
        a_set: parse_face(text(n, "a_set")?)?,
        alpha: parse_face(text(n, "alpha")?)?,
        beta: parse_face(text(n, "beta")?)?,
        i: parse_num(n, "i")?,
        bs1: parse_bool(n, "bs1")?,
        bs2: parse_bool(n, "bs2")?,
        class: text(n, "class")?.parse::<MoveClass>().map_err(|e| err(0, e))?,
    })
}

pub fn flip_trace_node(t: &FlipTrace) -> Node {
    Node::map()
        .with("start", Node::scalar(&t.start))
        .with("end", Node::scalar(&t.end))
        .with("moves", Node::List(t.moves.iter().map(move_node).collect()))
}

pub fn flip_trace_from_node(n: &Node) -> Result<FlipTrace, ReportError> {
    let moves = field(n, "moves")?
        .as_list()
        .ok_or_else(|| err(0, "moves is not a list"))?
        .iter()
        .map(move_from_node)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FlipTrace { moves, start: text(n, "start")?.to_string(), end: text(n, "end")?.to_string() })
}

const MANIFOLD_METHODS: &[&str] =
    &["void", "purity", "dimension-0", "link-two-points", "link-cycle", "link-2-sphere", "link-recursive"];
const BALL_EVIDENCE: &[&str] = &["simplex", "collapsible-manifold"];

fn intern(s: &str, known: &[&'static str]) -> Result<&'static str, ReportError> {
    known.iter().copied().find(|k| *k == s).ok_or_else(|| err(0, format!("unknown value {s:?}")))
}

fn verdict_parts(v: &SphereVerdict) -> (&'static str, String) {
    match v {
        SphereVerdict::CombinatorialSphere => ("combinatorial-sphere", String::new()),
        SphereVerdict::Inconclusive(r) => ("inconclusive", r.clone()),
        SphereVerdict::PreconditionFailed(r) => ("precondition-failed", r.clone()),
    }
}

pub fn sphere_certificate_node(c: &SphereCertificate) -> Node {
    let (verdict, reason) = verdict_parts(&c.verdict);
    let mut n = Node::map()
        .with("verdict", Node::scalar(verdict))
        .with("reason", Node::scalar(reason))
        .with("dimension", Node::scalar(c.dimension))
        .with("num_vertices", Node::scalar(c.num_vertices))
        .with("betti", betti_node(&c.betti));
    if let Some(m) = &c.manifold {
        let mut mn = Node::map()
            .with("status", Node::scalar(m.status))
            .with("method", Node::scalar(m.method))
            .with("vertices_checked", Node::scalar(m.vertices_checked));
        if let Some((v, why)) = &m.failure {
            mn = mn.with("failed_vertex", Node::scalar(v)).with("failure", Node::scalar(why));
        }
        n = n.with("manifold", mn);
    }
    if let Some(b) = &c.ball {
        n = n.with(
            "ball",
            Node::map()
                .with("vertices", Node::scalar(b.vertices))
                .with("evidence", Node::scalar(b.evidence))
                .with("complex", Node::scalar(b.complex.encoding())),
        );
    }
    if let Some(l) = &c.complement {
        n = n.with("complement", Node::scalar(l.encoding()));
    }
    if let Some(b) = &c.betti_of_complement {
        n = n.with("betti_of_complement", betti_node(b));
    }
    n = n.with("decomposition_checked", Node::scalar(c.decomposition_checked));
    if let Some(cc) = &c.collapse {
        n = n.with("collapse", collapse_certificate_node(cc));
    }
    n
}

pub fn sphere_certificate_from_node(n: &Node) -> Result<SphereCertificate, ReportError> {
    let reason = text(n, "reason")?.to_string();
    let verdict = match text(n, "verdict")? {
        "combinatorial-sphere" => SphereVerdict::CombinatorialSphere,
        "inconclusive" => SphereVerdict::Inconclusive(reason),
        "precondition-failed" => SphereVerdict::PreconditionFailed(reason),
        other => return Err(err(0, format!("unknown verdict {other:?}"))),
    };
    let manifold = match n.get("manifold") {
        None => None,
        Some(m) => Some(ManifoldVerdict {
            status: match text(m, "status")? {
                "yes" => Tri::Yes,
                "no" => Tri::No,
                "inconclusive" => Tri::Inconclusive,
                other => return Err(err(0, format!("unknown status {other:?}"))),
            },
            method: intern(text(m, "method")?, MANIFOLD_METHODS)?,
            vertices_checked: parse_num(m, "vertices_checked")?,
            failure: match m.get("failed_vertex") {
                Some(_) => Some((parse_num(m, "failed_vertex")?, text(m, "failure")?.to_string())),
                None => None,
            },
        }),
    };
    let ball = match n.get("ball") {
        None => None,
        Some(b) => Some(InducedBall {
            vertices: parse_face(text(b, "vertices")?)?,
            complex: parse_complex(text(b, "complex")?)?,
            evidence: intern(text(b, "evidence")?, BALL_EVIDENCE)?,
        }),
    };
    Ok(SphereCertificate {
        dimension: parse_num(n, "dimension")?,
        num_vertices: parse_num(n, "num_vertices")?,
        manifold,
        betti: betti_from_node(field(n, "betti")?)?,
        ball,
        complement: n.get("complement").map(|c| parse_complex(c.as_str().unwrap_or(""))).transpose()?,
        betti_of_complement: n.get("betti_of_complement").map(betti_from_node).transpose()?,
        decomposition_checked: parse_bool(n, "decomposition_checked")?,
        collapse: n.get("collapse").map(collapse_certificate_from_node).transpose()?,
        verdict,
    })
}

pub fn census_node(r: &CensusResult) -> Node {
    let spec = Node::map()
        .with("min_vertices", Node::scalar(r.spec.min_vertices))
        .with("max_vertices", Node::scalar(r.spec.max_vertices))
        .with("dimension", Node::scalar(r.spec.dimension))
        .with("max_facets", Node::scalar(r.spec.max_facets))
        .with("constraint", Node::scalar(r.spec.constraint))
        .with("reduce_iso", Node::scalar(r.spec.reduce_iso))
        .with("symmetry_breaking", Node::scalar(r.spec.symmetry_breaking));
    let counts = Node::Map(
        r.counts_by_f_vector().into_iter().map(|(f, c)| (f.to_string(), Node::scalar(c))).collect(),
    );
    Node::map()
        .with("spec", spec)
        .with("classes", Node::scalar(r.representatives.len()))
        .with("raw_count", Node::scalar(r.raw_count))
        .with("nodes", Node::scalar(r.nodes))
        .with("counts_by_f_vector", counts)
        .with("representatives", Node::List(r.representatives.iter().map(|k| Node::scalar(k.encoding())).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::{is_collapsible, verify_certificate, DEFAULT_BUDGET};
    use crate::complex::standard_ball;

    #[test]
    fn nested_round_trip() {
        let n = Node::map()
            .with("a", Node::scalar("x: y"))
            .with("empty", Node::scalar(""))
            .with("list", Node::List(vec![Node::scalar("1"), Node::map().with("k", Node::scalar("v")), Node::List(vec![])]))
            .with("m", Node::map())
            .with("q", Node::scalar(" padded \"quoted\"\nline"));
        let text = n.render();
        assert_eq!(parse_report(&text).unwrap(), n);
    }

    #[test]
    fn bad_documents() {
        assert!(parse_report("a:\nb: 1\n").is_err());
        assert!(parse_report(" a: 1\n").is_err());
        assert!(parse_report("a: 1\n    b: 2\n").is_err());
        assert_eq!(parse_report("a: 1\nnonsense\n").unwrap_err().line, 2);
    }

    #[test]
    fn collapse_certificate_survives() {
        let k = standard_ball(3, &[1, 2, 3, 4]).unwrap();
        let c = is_collapsible(&k, DEFAULT_BUDGET).certificate.unwrap();
        let mut r = Report::new("collapse", Some(&k), None);
        r.push("certificate", collapse_certificate_node(&c));
        let parsed = parse_report(&r.render()).unwrap();
        let back = collapse_certificate_from_node(parsed.get("certificate").unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&k, &back));
        assert_eq!(parsed.get("input").and_then(Node::as_str), Some("1,2,3,4"));
    }

    #[test]
    fn betti_text() {
        let b = BettiVector(vec![0, 1, 1]);
        assert_eq!(betti_from_node(&betti_node(&b)).unwrap(), b);
        assert_eq!(betti_from_node(&Node::scalar("()")).unwrap(), BettiVector(vec![]));
    }
}
