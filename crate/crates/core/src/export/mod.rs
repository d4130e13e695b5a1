pub mod ascii;
pub mod pajek;
pub mod svg;

pub use ascii::{parse_ascii_matrix, write_ascii_matrix, AsciiCell, AsciiMatrix};
pub use pajek::{normalize_positions, pajek_document, read_pajek, write_pajek, PajekDocument, PajekEdge, PajekVertex};
pub use svg::{escape_xml, render_svg, stroke_width, SvgEdge, SvgNode, SvgScene, SvgStyle};

/// Four decimals, never `-0.0000`.
pub(crate) fn fmt4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" { "0.0000".into() } else { s }
}
