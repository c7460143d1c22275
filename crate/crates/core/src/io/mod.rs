//! Facet-list files and line-oriented report documents.

mod facets;
mod report;

pub use facets::{parse_facets, write_facets, write_facets_labeled, FacetParseError, ParsedFacets};
pub use report::{
    betti_from_node, census_node, collapse_certificate_from_node, collapse_certificate_node, collapse_verdict_node,
    flip_trace_from_node, flip_trace_node, move_node, parse_report, sphere_certificate_from_node,
    sphere_certificate_node, Node, ReportError, Report, TOOL_NAME, TOOL_VERSION,
};
