mod common;

use std::collections::BTreeMap;

use citenv_core::export::{render_svg, write_pajek, SvgScene, SvgStyle};
use citenv_core::{
    compute_map, default_min_radius, impact_profiles, layout_graph, node_geometry, pairwise_cosines, select_members,
    threshold_edges, ImpactProfile, LayoutOptions, Mode, Orientation, Rational, Threshold,
};

/// Minimal reader kept apart from the library: vertex label and attribute
/// map per vertex, edge triples.
struct NetFile {
    vertices: Vec<(String, Vec<f64>, BTreeMap<String, f64>, Option<String>)>,
    edges: Vec<(usize, usize, f64)>,
}

fn parse_net(text: &str) -> NetFile {
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    let n: usize = head.strip_prefix("*Vertices ").unwrap().parse().unwrap();
    let mut vertices = Vec::new();
    for k in 0..n {
        let line = lines.next().unwrap();
        let (idx, rest) = line.split_once(' ').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), k + 1);
        let rest = rest.strip_prefix('"').unwrap();
        let close = rest.find('"').unwrap();
        let label = rest[..close].to_string();
        let fields: Vec<&str> = rest[close + 1..].split_whitespace().collect();
        let coords: Vec<f64> = fields[..3].iter().map(|f| f.parse().unwrap()).collect();
        let shape = fields.get(3).map(|s| s.to_string());
        let attrs = fields[4..].chunks(2).map(|c| (c[0].to_string(), c[1].parse().unwrap())).collect();
        vertices.push((label, coords, attrs, shape));
    }
    assert_eq!(lines.next(), Some("*Edges"));
    let edges = lines
        .map(|l| {
            let f: Vec<&str> = l.split(' ').collect();
            assert_eq!(f.len(), 3);
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    NetFile { vertices, edges }
}

fn four_decimals(s: f64) -> f64 {
    format!("{s:.4}").parse().unwrap()
}

#[test]
fn pajek_output_matches_an_independent_reading() {
    let graph = common::graph(2004);
    let env = select_members(&graph, "ams-c", Mode::Cited, Threshold::ONE_PERCENT).unwrap();
    let cos = pairwise_cosines::<f64>(&env, Orientation::ColumnCited);
    let edges = threshold_edges(&cos, 0.2);
    let profiles: Vec<ImpactProfile<Rational>> = impact_profiles(&env);
    let geoms: Vec<_> = profiles.iter().map(|p| node_geometry(p, 100.0, default_min_radius(100.0))).collect();
    let layout = layout_graph(env.len(), &edges, &LayoutOptions::default()).unwrap();
    let text = write_pajek(&env, &edges, &geoms, &layout).unwrap();
    let net = parse_net(&text);

    assert_eq!(net.vertices.len(), env.len());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (k, (label, coords, attrs, shape)) in net.vertices.iter().enumerate() {
        assert_eq!(label, env.members[k].as_str());
        assert_eq!(shape.as_deref(), Some("ellipse"));
        assert_eq!(coords[2], 0.5);
        for a in 0..2 {
            assert!((0.0..=1.0).contains(&coords[a]));
            lo[a] = lo[a].min(coords[a]);
            hi[a] = hi[a].max(coords[a]);
        }
        assert_eq!(attrs["x_fact"], four_decimals(geoms[k].h_radius));
        assert_eq!(attrs["y_fact"], four_decimals(geoms[k].v_radius));
        assert!(attrs["x_fact"] <= attrs["y_fact"]);
    }
    // Uniform scaling: the wider axis spans the full unit interval.
    assert!((hi[0] - lo[0]).max(hi[1] - lo[1]) > 0.9999);

    assert_eq!(net.edges.len(), edges.len());
    for ((i, j, w), e) in net.edges.iter().zip(&edges) {
        assert!(i < j);
        let pair = [env.members[i - 1].clone(), env.members[j - 1].clone()];
        assert!(pair.contains(&e.a) && pair.contains(&e.b));
        assert_eq!(*w, four_decimals(e.cosine));
    }
}

#[test]
fn svg_widths_follow_cosines_and_nodes_follow_member_order() {
    let graph = common::graph(2004);
    let env = select_members(&graph, "ams-c", Mode::Cited, Threshold::ONE_PERCENT).unwrap();
    let cos = pairwise_cosines::<f64>(&env, Orientation::ColumnCited);
    let edges = threshold_edges(&cos, 0.2);
    let profiles: Vec<ImpactProfile<f64>> = impact_profiles(&env);
    let geoms: Vec<_> = profiles.iter().map(|p| node_geometry(p, 100.0, 1.0)).collect();
    let layout = layout_graph(env.len(), &edges, &LayoutOptions::default()).unwrap();
    let scene = SvgScene::build(&env, graph.registry(), &edges, &geoms, &layout, SvgStyle::default()).unwrap();
    let svg = render_svg(&scene);

    let mut widths: Vec<(f64, f64)> = svg
        .lines()
        .filter(|l| l.starts_with("<line"))
        .map(|l| {
            let w = l.split("stroke-width=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
            let c = l.split("</title>").next().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
            (c, w)
        })
        .collect();
    assert_eq!(widths.len(), edges.len());
    widths.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for pair in widths.windows(2) {
        if pair[1].0 > pair[0].0 {
            assert!(pair[1].1 > pair[0].1, "{pair:?}");
        }
    }

    let labels: Vec<&str> = svg
        .lines()
        .filter_map(|l| l.split("dy=\"0.35em\">").nth(1))
        .map(|rest| rest.split('<').next().unwrap())
        .collect();
    let members: Vec<&str> = env.members.iter().map(|m| m.as_str()).collect();
    assert_eq!(labels, members);
}

#[test]
fn map_artifacts_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let config = common::config(tmp.path(), 2004, Mode::Cited);
    let graph = common::graph(2004);
    let a = compute_map(&graph, "ams-c", &config).unwrap();
    let b = compute_map(&graph, "ams-c", &config).unwrap();
    assert_eq!(a.map_net, b.map_net);
    assert_eq!(a.map_svg, b.map_svg);
    assert!(!a.map_net.contains("-0.0000"));
}
