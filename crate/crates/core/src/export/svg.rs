//! Standalone SVG rendering of an environment map.

use std::fmt::Write;

use crate::environment::Environment;
use crate::error::Result;
use crate::impact::NodeGeometry;
use crate::layout::Layout;
use crate::num::Scalar;
use crate::similarity::SimilarityEdge;
use crate::store::Registry;

use super::pajek::{check_consistency, normalize_positions};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    /// Space kept free around the drawing for ellipses and labels.
    pub margin: f64,
    pub min_stroke: f64,
    pub max_stroke: f64,
    pub min_cosine: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { width: 1000.0, height: 1000.0, margin: 120.0, min_stroke: 0.5, max_stroke: 6.0, min_cosine: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgNode {
    pub label: String,
    pub title: String,
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgEdge {
    pub from: usize,
    pub to: usize,
    pub cosine: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgScene {
    pub style: SvgStyle,
    pub nodes: Vec<SvgNode>,
    pub edges: Vec<SvgEdge>,
}

/// Stroke width rising linearly from `min_stroke` at `min_cosine` to
/// `max_stroke` at cosine 1.
pub fn stroke_width(cosine: f64, style: &SvgStyle) -> f64 {
    let span = 1.0 - style.min_cosine;
    if span <= 0.0 {
        return style.max_stroke;
    }
    let t = ((cosine - style.min_cosine) / span).clamp(0.0, 1.0);
    style.min_stroke + (style.max_stroke - style.min_stroke) * t
}

impl SvgScene {
    pub fn build<T: Scalar>(
        env: &Environment,
        registry: &Registry,
        edges: &[SimilarityEdge<T>],
        geometries: &[NodeGeometry<T>],
        layout: &Layout<T>,
        style: SvgStyle,
    ) -> Result<Self> {
        check_consistency(env, edges, geometries, layout)?;
        let unit = normalize_positions(&layout.positions);
        let inner_w = (style.width - 2.0 * style.margin).max(0.0);
        let inner_h = (style.height - 2.0 * style.margin).max(0.0);
        let side = inner_w.min(inner_h);
        let (ox, oy) = ((style.width - side) / 2.0, (style.height - side) / 2.0);
        let nodes = env
            .members
            .iter()
            .zip(geometries)
            .zip(unit)
            .map(|((id, g), [x, y])| SvgNode {
                label: id.as_str().to_string(),
                title: registry.get(id.as_str()).map(|j| j.title.clone()).unwrap_or_default(),
                cx: ox + x * side,
                cy: oy + y * side,
                rx: g.h_radius.as_f64(),
                ry: g.v_radius.as_f64(),
            })
            .collect();
        let edges = edges
            .iter()
            .map(|e| SvgEdge { from: e.a_index, to: e.b_index, cosine: e.cosine.as_f64() })
            .collect();
        Ok(SvgScene { style, nodes, edges })
    }
}

pub fn escape_xml(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn f2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

/// Edges first so nodes paint over them; nodes in member order.
pub fn render_svg(scene: &SvgScene) -> String {
    let st = &scene.style;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = f2(st.width),
        h = f2(st.height)
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str("<g class=\"edges\" stroke=\"#555555\" stroke-linecap=\"round\">\n");
    for e in &scene.edges {
        let (a, b) = (&scene.nodes[e.from], &scene.nodes[e.to]);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-width=\"{}\"><title>{} {} {:.4}</title></line>",
            f2(a.cx),
            f2(a.cy),
            f2(b.cx),
            f2(b.cy),
            f2(stroke_width(e.cosine, st)),
            escape_xml(&a.label),
            escape_xml(&b.label),
            e.cosine
        );
    }
    out.push_str("</g>\n");
    out.push_str("<g class=\"nodes\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n");
    for n in &scene.nodes {
        let _ = writeln!(
            out,
            "<g><title>{}</title><ellipse cx=\"{cx}\" cy=\"{cy}\" rx=\"{}\" ry=\"{}\" fill=\"#cfe3f7\" fill-opacity=\"0.8\" stroke=\"#1f4e79\"/><text x=\"{cx}\" y=\"{cy}\" dy=\"0.35em\">{}</text></g>",
            escape_xml(&n.title),
            f2(n.rx),
            f2(n.ry),
            escape_xml(&n.label),
            cx = f2(n.cx),
            cy = f2(n.cy),
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
