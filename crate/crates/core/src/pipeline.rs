//! End-to-end runs: one seed to five artifacts, every seed in parallel,
//! and year-over-year comparison.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::environment::{select_members, Environment, Mode, Threshold};
use crate::error::{Error, Result};
use crate::export::{render_svg, write_ascii_matrix, write_pajek, SvgScene, SvgStyle};
use crate::impact::{
    default_min_radius, impact_profiles, node_geometry, reference_split_report, ExternalReferences, ImpactProfile,
    ImpactReport, ReferenceSplit,
};
use crate::layout::{layout_graph, LayoutOptions, SolverOptions};
use crate::similarity::{pairwise_cosines, threshold_edges, Orientation};
use crate::store::{parse_citation_edges, parse_journal_registry, CitationGraph, CitationStore, JournalId};
use crate::Rational;

pub const ARTIFACTS: [&str; 6] = ["local.txt", "cosine.txt", "impact.txt", "impact.json", "map.net", "map.svg"];

/// Environment variable capping batch parallelism.
pub const THREADS_VAR: &str = "CITENV_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub registry: PathBuf,
    pub edges: PathBuf,
    pub year: i32,
    pub mode: Mode,
    pub threshold: Threshold,
    pub min_cosine: f64,
    /// Drop cells with a single citation before anything else.
    pub suppress_singles: bool,
    pub layout_seed: u64,
    /// Display units per unit share for ellipse radii.
    pub scale: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(registry: impl Into<PathBuf>, edges: impl Into<PathBuf>, year: i32, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            registry: registry.into(),
            edges: edges.into(),
            year,
            mode: Mode::Cited,
            threshold: Threshold::ONE_PERCENT,
            min_cosine: 0.2,
            suppress_singles: false,
            layout_seed: 42,
            scale: 100.0,
            out: out.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.threshold.as_f64();
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Validation(format!("threshold {t} must lie strictly between 0 and 1")));
        }
        if !(0.0..=1.0).contains(&self.min_cosine) {
            return Err(Error::Validation(format!("min cosine {} must lie in [0, 1]", self.min_cosine)));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Validation(format!("scale {} must be positive", self.scale)));
        }
        Ok(())
    }

    /// `<out>/<seed>/<mode>/<year>`
    pub fn artifact_dir(&self, seed: &str) -> PathBuf {
        artifact_dir(&self.out, seed, self.mode, self.year)
    }
}

pub fn artifact_dir(out: &Path, seed: &str, mode: Mode, year: i32) -> PathBuf {
    out.join(seed).join(mode.as_str()).join(year.to_string())
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Reads the registry and edge files named by the config.
pub fn load_store(config: &RunConfig) -> Result<CitationStore> {
    let name = |p: &Path| p.display().to_string();
    let registry = parse_journal_registry(&read_file(&config.registry)?[..], &name(&config.registry))?;
    parse_citation_edges(&read_file(&config.edges)?[..], &name(&config.edges), Arc::new(registry))
}

/// The configured year's graph, with single citations removed when asked.
pub fn prepare_graph(store: &CitationStore, year: i32, suppress_singles: bool) -> Result<Arc<CitationGraph>> {
    let graph = store.graph(year)?;
    Ok(if suppress_singles { Arc::new(graph.suppress_single_citations()) } else { graph })
}

/// Everything a map run writes, computed before any file is touched.
#[derive(Debug, Clone)]
pub struct MapArtifacts {
    pub environment: Environment,
    pub report: ImpactReport,
    pub edge_count: usize,
    pub local_txt: String,
    pub cosine_txt: String,
    pub impact_txt: String,
    pub impact_json: String,
    pub map_net: String,
    pub map_svg: String,
}

impl MapArtifacts {
    pub fn files(&self) -> [(&'static str, &str); 6] {
        [
            ("local.txt", &self.local_txt),
            ("cosine.txt", &self.cosine_txt),
            ("impact.txt", &self.impact_txt),
            ("impact.json", &self.impact_json),
            ("map.net", &self.map_net),
            ("map.svg", &self.map_svg),
        ]
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in self.files() {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

pub fn compute_map(graph: &CitationGraph, seed: &str, config: &RunConfig) -> Result<MapArtifacts> {
    let env = select_members(graph, seed, config.mode, config.threshold)?;
    let registry = graph.registry();
    let labels: Vec<&str> = env.members.iter().map(JournalId::as_str).collect();

    let cosines = pairwise_cosines::<f64>(&env, Orientation::default_for(config.mode));
    let edges = threshold_edges(&cosines, config.min_cosine);
    let profiles: Vec<ImpactProfile<Rational>> = impact_profiles(&env);
    let report = ImpactReport::new(&env, &profiles, registry);
    let geometries: Vec<_> = profiles
        .iter()
        .map(|p| node_geometry(p, config.scale, default_min_radius(config.scale)))
        .collect();
    let options = LayoutOptions {
        solver: SolverOptions { seed: config.layout_seed, ..SolverOptions::default() },
        ..LayoutOptions::default()
    };
    let layout = layout_graph(env.len(), &edges, &options)?;

    let style = SvgStyle { min_cosine: config.min_cosine, ..SvgStyle::default() };
    let scene = SvgScene::build(&env, registry, &edges, &geometries, &layout, style)?;
    Ok(MapArtifacts {
        local_txt: write_ascii_matrix(&labels, &env.local.to_rows())?,
        cosine_txt: write_ascii_matrix(&labels, &cosines.to_rows())?,
        impact_txt: report.to_table(),
        impact_json: report.to_json(),
        map_net: write_pajek(&env, &edges, &geometries, &layout)?,
        map_svg: render_svg(&scene),
        edge_count: edges.len(),
        report,
        environment: env,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapOutcome {
    pub dir: PathBuf,
    pub members: usize,
    pub edges: usize,
    pub warnings: Vec<String>,
}

/// Maps one seed and writes its artifacts. Nothing is written on failure.
pub fn cmd_map(config: &RunConfig, seed: &str) -> Result<MapOutcome> {
    config.validate()?;
    let store = load_store(config)?;
    let graph = prepare_graph(&store, config.year, config.suppress_singles)?;
    map_into(&graph, seed, config)
}

fn map_into(graph: &CitationGraph, seed: &str, config: &RunConfig) -> Result<MapOutcome> {
    let artifacts = compute_map(graph, seed, config)?;
    let dir = config.artifact_dir(seed);
    artifacts.write_to(&dir)?;
    Ok(MapOutcome {
        dir,
        members: artifacts.environment.len(),
        edges: artifacts.edge_count,
        warnings: artifacts.report.warnings.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchRow {
    pub seed: JournalId,
    pub members: Option<usize>,
    pub edges: Option<usize>,
    pub degenerate: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub rows: Vec<BatchRow>,
}

impl BatchSummary {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("seed\tmembers\tedges\tdegenerate\tstatus\n");
        for r in &self.rows {
            let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let status = r.error.as_deref().map(|e| format!("error: {e}")).unwrap_or_else(|| "ok".into());
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.seed,
                opt(r.members),
                opt(r.edges),
                if r.degenerate { "yes" } else { "no" },
                status.replace(['\t', '\n'], " ")
            );
        }
        out
    }
}

/// Worker count from `CITENV_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Maps every registered journal. Per-seed failures land in the summary;
/// `summary.tsv` is written under the output root.
pub fn cmd_batch(config: &RunConfig) -> Result<BatchSummary> {
    config.validate()?;
    let store = load_store(config)?;
    let graph = prepare_graph(&store, config.year, config.suppress_singles)?;
    let mut seeds: Vec<JournalId> = graph.registry().iter().map(|j| j.id.clone()).collect();
    seeds.sort();

    let run = || -> Vec<BatchRow> {
        seeds
            .par_iter()
            .map(|seed| match map_into(&graph, seed.as_str(), config) {
                Ok(o) => BatchRow {
                    seed: seed.clone(),
                    members: Some(o.members),
                    edges: Some(o.edges),
                    degenerate: o.members == 1,
                    error: None,
                },
                Err(e) => BatchRow { seed: seed.clone(), members: None, edges: None, degenerate: false, error: Some(e.to_string()) },
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    let rows = pool.install(run);

    let summary = BatchSummary { rows };
    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    let path = config.out.join("summary.tsv");
    fs::write(&path, summary.to_table()).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WithinDelta {
    pub journal: JournalId,
    pub from_percent: Option<u64>,
    pub to_percent: Option<u64>,
    pub from_share: Option<f64>,
    pub to_share: Option<f64>,
}

impl WithinDelta {
    pub fn changed(&self) -> bool {
        self.from_share != self.to_share
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub seed: JournalId,
    pub mode: Mode,
    pub from_year: i32,
    pub to_year: i32,
    pub from_members: usize,
    pub to_members: usize,
    pub added: Vec<JournalId>,
    pub removed: Vec<JournalId>,
    /// Seed first, then the union of both member sets by id.
    pub within: Vec<WithinDelta>,
}

impl CompareReport {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.within.iter().all(|d| !d.changed())
    }

    pub fn member_delta(&self) -> i64 {
        self.to_members as i64 - self.from_members as i64
    }

    pub fn seed_within(&self) -> &WithinDelta {
        &self.within[0]
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# seed={} mode={} {}→{} members {}→{} ({:+})",
            self.seed,
            self.mode,
            self.from_year,
            self.to_year,
            self.from_members,
            self.to_members,
            self.member_delta()
        );
        for id in &self.added {
            let _ = writeln!(out, "+\t{id}");
        }
        for id in &self.removed {
            let _ = writeln!(out, "-\t{id}");
        }
        out.push_str("id\twithin_from\twithin_to\n");
        let pct = |p: Option<u64>| p.map(|p| format!("{p}%")).unwrap_or_else(|| "-".into());
        for d in &self.within {
            let _ = writeln!(out, "{}\t{}\t{}", d.journal, pct(d.from_percent), pct(d.to_percent));
        }
        out
    }
}

/// A journal with no citations either way in `graph`.
fn require_present(graph: &CitationGraph, seed: &str) -> Result<()> {
    let idx = graph.registry().resolve(seed)?;
    if graph.row(idx).next().is_none() && graph.column(idx).next().is_none() {
        return Err(Error::AbsentInYear { id: seed.to_string(), year: graph.year() });
    }
    Ok(())
}

pub fn compare_environments(from: &CitationGraph, to: &CitationGraph, seed: &str, config: &RunConfig) -> Result<CompareReport> {
    require_present(from, seed)?;
    require_present(to, seed)?;
    let a = select_members(from, seed, config.mode, config.threshold)?;
    let b = select_members(to, seed, config.mode, config.threshold)?;
    let pa: Vec<ImpactProfile<Rational>> = impact_profiles(&a);
    let pb: Vec<ImpactProfile<Rational>> = impact_profiles(&b);

    let set_a: BTreeSet<&JournalId> = a.members.iter().collect();
    let set_b: BTreeSet<&JournalId> = b.members.iter().collect();
    let added = set_b.difference(&set_a).map(|&id| id.clone()).collect();
    let removed = set_a.difference(&set_b).map(|&id| id.clone()).collect();

    let mut order = vec![a.seed.clone()];
    order.extend(set_a.union(&set_b).filter(|&&id| *id != a.seed).map(|&id| id.clone()));
    let find = |ps: &[ImpactProfile<Rational>], id: &JournalId| ps.iter().find(|p| &p.journal == id).cloned();
    let within = order
        .into_iter()
        .map(|id| {
            let (x, y) = (find(&pa, &id), find(&pb, &id));
            WithinDelta {
                from_percent: x.as_ref().map(|p| p.within_percent()),
                to_percent: y.as_ref().map(|p| p.within_percent()),
                from_share: x.map(|p| crate::Share::to_f64_lossy(&p.within_share)),
                to_share: y.map(|p| crate::Share::to_f64_lossy(&p.within_share)),
                journal: id,
            }
        })
        .collect();
    Ok(CompareReport {
        seed: a.seed.clone(),
        mode: config.mode,
        from_year: from.year(),
        to_year: to.year(),
        from_members: a.len(),
        to_members: b.len(),
        added,
        removed,
        within,
    })
}

/// Compares the seed's environment in `from_year` and `to_year`; the
/// config's own year is ignored.
pub fn cmd_compare(config: &RunConfig, seed: &str, from_year: i32, to_year: i32) -> Result<CompareReport> {
    config.validate()?;
    let store = load_store(config)?;
    let from = prepare_graph(&store, from_year, config.suppress_singles)?;
    let to = prepare_graph(&store, to_year, config.suppress_singles)?;
    compare_environments(&from, &to, seed, config)
}

/// Self / domestic-other / international split of one journal's references.
pub fn cmd_split(config: &RunConfig, journal: &str, external: ExternalReferences) -> Result<ReferenceSplit> {
    let store = load_store(config)?;
    let graph = prepare_graph(&store, config.year, config.suppress_singles)?;
    reference_split_report(&graph, journal, external)
}
