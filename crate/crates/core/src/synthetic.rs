//! Seeded generator for a realistic multi-field citation corpus.
//!
//! Journals are grouped into fields. Each journal receives citations from
//! itself and from a set of citers drawn mostly from its own field, so
//! cited environments come out at a few dozen members with clear cosine
//! structure.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::store::{CitationGraph, CitationStore, Journal, JournalId, Language, Registry};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub journals: usize,
    /// Distinct (citing, cited) cells, diagonal included.
    pub edges: usize,
    pub fields: usize,
    pub year: i32,
    pub seed: u64,
    /// Share of each journal's citers taken from its own field.
    pub in_field: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec { journals: 200, edges: 5000, fields: 10, year: 2004, seed: 2004, in_field: 0.7 }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub spec: SyntheticSpec,
    pub store: CitationStore,
}

impl SyntheticCorpus {
    pub fn registry(&self) -> &Arc<Registry> {
        self.store.registry()
    }

    pub fn graph(&self) -> Arc<CitationGraph> {
        self.store.graph(self.spec.year).expect("generated year")
    }

    pub fn registry_csv(&self) -> String {
        self.registry().to_csv()
    }

    pub fn edges_csv(&self) -> String {
        self.store.to_edges_csv()
    }
}

pub fn journal_id(k: usize) -> JournalId {
    JournalId::new(format!("s{k:03}")).expect("valid id")
}

/// Citer counts per cited journal, each in `lo..=hi`, summing to `total`.
fn citer_counts(rng: &mut ChaCha8Rng, n: usize, total: usize, lo: usize, hi: usize) -> Vec<usize> {
    let mut k: Vec<usize> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut sum: usize = k.iter().sum();
    while sum != total {
        let j = rng.gen_range(0..n);
        if sum < total && k[j] < hi {
            k[j] += 1;
            sum += 1;
        } else if sum > total && k[j] > lo {
            k[j] -= 1;
            sum -= 1;
        }
    }
    k
}

pub fn synthetic_corpus(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    let n = spec.journals;
    if n < 2 || spec.fields == 0 || spec.fields > n {
        return Err(Error::Validation(format!("{n} journals cannot form {} fields", spec.fields)));
    }
    let off_diagonal = spec.edges.checked_sub(n).filter(|&m| m <= n * (n - 1)).ok_or_else(|| {
        Error::Validation(format!("{} cells cannot be placed among {n} journals", spec.edges))
    })?;
    let mean = off_diagonal as f64 / n as f64;
    let lo = ((mean * 0.55).floor() as usize).max(1).min(n - 1);
    let hi = ((mean * 1.45).ceil() as usize).max(lo).min(n - 1);
    if off_diagonal < lo * n || off_diagonal > hi * n {
        return Err(Error::Validation(format!("cannot spread {off_diagonal} cells over {n} journals")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let field_of = |k: usize| k * spec.fields / n;

    let mut registry = Registry::new();
    for k in 0..n {
        registry.insert(Journal {
            id: journal_id(k),
            title: format!("Synthetic Journal {k:03}"),
            english_title: format!("Synthetic Journal {k:03}"),
            language: if k % 3 == 0 { Language::English } else { Language::Chinese },
            category: Some(format!("field-{:02}", field_of(k))),
            impact_factor: Some(f64::from(rng.gen_range(5u32..=250)) / 100.0),
        })?;
    }
    let registry = Arc::new(registry);
    let mut graph = CitationGraph::new(spec.year, registry.clone());

    let citers = citer_counts(&mut rng, n, off_diagonal, lo, hi);
    for (cited, &k) in citers.iter().enumerate() {
        let mut near: Vec<usize> = (0..n).filter(|&j| j != cited && field_of(j) == field_of(cited)).collect();
        let mut far: Vec<usize> = (0..n).filter(|&j| field_of(j) != field_of(cited)).collect();
        near.shuffle(&mut rng);
        far.shuffle(&mut rng);
        let take_near = ((k as f64 * spec.in_field).round() as usize).min(near.len()).max(k.saturating_sub(far.len()));
        let chosen = near.iter().take(take_near).map(|&j| (j, true)).chain(far.iter().take(k - take_near).map(|&j| (j, false)));

        let diagonal = rng.gen_range(40u64..=250);
        graph.add_indexed(cited, cited, diagonal);
        for (citing, same_field) in chosen {
            let count = if same_field { rng.gen_range(4u64..=40) } else { rng.gen_range(3u64..=12) };
            graph.add_indexed(citing, cited, count);
        }
    }
    let mut store = CitationStore::new(registry);
    store.insert_graph(graph);
    Ok(SyntheticCorpus { spec: spec.clone(), store })
}
