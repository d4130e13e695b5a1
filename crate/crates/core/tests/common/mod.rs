#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use citenv_core::{
    parse_citation_edges, parse_journal_registry, CitationGraph, CitationStore, Mode, RunConfig,
};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("mathematics")
}

pub fn registry_path() -> PathBuf {
    fixture_dir().join("journals.csv")
}

pub fn edges_path() -> PathBuf {
    fixture_dir().join("edges.csv")
}

pub fn mathematics() -> CitationStore {
    let reg = fs::read(registry_path()).unwrap();
    let edges = fs::read(edges_path()).unwrap();
    let registry = parse_journal_registry(&reg[..], "journals.csv").unwrap();
    parse_citation_edges(&edges[..], "edges.csv", Arc::new(registry)).unwrap()
}

pub fn graph(year: i32) -> Arc<CitationGraph> {
    mathematics().graph(year).unwrap()
}

pub fn config(out: &Path, year: i32, mode: Mode) -> RunConfig {
    RunConfig { mode, ..RunConfig::new(registry_path(), edges_path(), year, out) }
}

/// Every file under `root`, keyed by relative path.
pub fn read_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    if root.exists() {
        walk(root, root, &mut out);
    }
    out
}

/// Plain cosine, written without the library.
pub fn naive_cosine(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    dot / (nu * nv)
}

/// Spring energy `Σ_{i<j} ½ k (‖pᵢ − pⱼ‖ − l)²` with `l = d`, `k = 1/d²`.
pub fn spring_energy(d: &[Vec<f64>], p: &[[f64; 2]]) -> f64 {
    let mut e = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let r = ((p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2)).sqrt();
            e += 0.5 / (d[i][j] * d[i][j]) * (r - d[i][j]).powi(2);
        }
    }
    e
}

pub fn spring_gradient(d: &[Vec<f64>], p: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut g = vec![[0.0; 2]; p.len()];
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i == j {
                continue;
            }
            let (dx, dy) = (p[i][0] - p[j][0], p[i][1] - p[j][1]);
            let r = (dx * dx + dy * dy).sqrt().max(1e-12);
            let c = (r - d[i][j]) / (d[i][j] * d[i][j] * r);
            g[i][0] += c * dx;
            g[i][1] += c * dy;
        }
    }
    g
}

/// Best energy over random restarts of Jacobi-preconditioned gradient
/// descent with Armijo backtracking.
pub fn random_restart_minimum(d: &[Vec<f64>], restarts: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let n = d.len();
    let span = d.iter().flatten().cloned().fold(0.0, f64::max).max(1e-3);
    let precond: Vec<f64> = (0..n)
        .map(|i| 1.0 / (0..n).filter(|&j| j != i).map(|j| 1.0 / (d[i][j] * d[i][j])).sum::<f64>())
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut p: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(-span..span), rng.gen_range(-span..span)]).collect();
        let mut e = spring_energy(d, &p);
        let mut step: f64 = 1.0;
        for _ in 0..100_000 {
            let g = spring_gradient(d, &p);
            let dir: Vec<[f64; 2]> = g.iter().zip(&precond).map(|(v, c)| [v[0] * c, v[1] * c]).collect();
            let slope: f64 = g.iter().zip(&dir).map(|(a, b)| a[0] * b[0] + a[1] * b[1]).sum();
            if g.iter().all(|v| v[0].hypot(v[1]) < 1e-9) || slope <= 0.0 {
                break;
            }
            step = (step * 2.0).min(1.0);
            let mut moved = false;
            while step > 1e-16 {
                let q: Vec<[f64; 2]> = p.iter().zip(&dir).map(|(a, b)| [a[0] - step * b[0], a[1] - step * b[1]]).collect();
                let eq = spring_energy(d, &q);
                if eq <= e - 1e-4 * step * slope {
                    p = q;
                    e = eq;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        best = best.min(e);
    }
    best
}
