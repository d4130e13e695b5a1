//! Journal registry and aggregated journal-journal citation counts.
//!
//! Citation counts are whole numbers keyed by `(citing, cited)`; diagonal
//! cells hold within-journal citations and are kept like any other cell.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Stable journal identifier: a nonempty token without whitespace, quotes or commas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct JournalId(String);

impl JournalId {
    pub fn new(raw: impl Into<String>) -> Result<Self> {
        let raw = raw.into();
        if raw.is_empty() {
            return Err(Error::Validation("journal id must be nonempty".into()));
        }
        if let Some(bad) = raw
            .chars()
            .find(|c| c.is_whitespace() || *c == '"' || *c == ',')
        {
            return Err(Error::Validation(format!(
                "journal id `{raw}` contains forbidden character {bad:?}"
            )));
        }
        Ok(JournalId(raw))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for JournalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for JournalId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        JournalId::new(s)
    }
}

impl Borrow<str> for JournalId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Chinese,
    English,
    Other,
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chinese" => Ok(Language::Chinese),
            "english" => Ok(Language::English),
            "other" => Ok(Language::Other),
            other => Err(format!(
                "unknown language `{other}` (expected chinese, english or other)"
            )),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Chinese => "chinese",
            Language::English => "english",
            Language::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Journal {
    pub id: JournalId,
    /// Title in the language of publication.
    pub title: String,
    pub english_title: String,
    pub language: Language,
    pub category: Option<String>,
    /// Externally reported impact factor; stored, never computed here.
    pub impact_factor: Option<f64>,
}

impl Journal {
    /// Short label used on maps. The registry has no separate abbreviation
    /// column, so the id doubles as the abbreviation.
    pub fn abbrev(&self) -> &str {
        self.id.as_str()
    }
}

/// Journals in file order, with id lookup.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    journals: Vec<Journal>,
    index: HashMap<JournalId, usize>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a journal, returning its index. Fails on a repeated id.
    pub fn insert(&mut self, journal: Journal) -> Result<usize> {
        if journal.title.trim().is_empty() {
            return Err(Error::Validation(format!(
                "journal `{}` has an empty title",
                journal.id
            )));
        }
        if let Some(f) = journal.impact_factor {
            if !(f.is_finite() && f >= 0.0) {
                return Err(Error::Validation(format!(
                    "journal `{}` has invalid impact factor {f}",
                    journal.id
                )));
            }
        }
        if self.index.contains_key(&journal.id) {
            return Err(Error::DuplicateKey {
                source_name: "<registry>".into(),
                line: 0,
                id: journal.id.to_string(),
            });
        }
        let idx = self.journals.len();
        self.index.insert(journal.id.clone(), idx);
        self.journals.push(journal);
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::unresolved(id))
    }

    pub fn get(&self, id: &str) -> Option<&Journal> {
        self.index_of(id).map(|i| &self.journals[i])
    }

    pub fn journal(&self, idx: usize) -> &Journal {
        &self.journals[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Journal> {
        self.journals.iter()
    }

    /// Serializes back to the registry CSV format.
    pub fn to_csv(&self) -> String {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        out.write_record(REGISTRY_COLUMNS).expect("in-memory write");
        for j in &self.journals {
            let factor = j.impact_factor.map(|f| f.to_string()).unwrap_or_default();
            out.write_record([
                j.id.as_str(),
                &j.title,
                &j.english_title,
                &j.language.to_string(),
                j.category.as_deref().unwrap_or(""),
                &factor,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

const REGISTRY_COLUMNS: [&str; 6] = [
    "id",
    "title",
    "english_title",
    "language",
    "category",
    "impact_factor",
];
const EDGE_COLUMNS: [&str; 4] = ["citing_id", "cited_id", "count", "year"];

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

/// Reads and checks the header. `Ok(false)` means the stream had no header at all.
fn check_header<R: Read>(
    reader: &mut csv::Reader<R>,
    expected: &[&str],
    source_name: &str,
) -> Result<bool> {
    let header = reader
        .headers()
        .map_err(|e| csv_error(source_name, e))?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Ok(false);
    }
    let line = header.position().map(|p| p.line()).unwrap_or(1);
    let found: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    if found != expected {
        return Err(Error::parse(
            source_name,
            line,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                found.join(",")
            ),
        ));
    }
    Ok(true)
}

fn csv_error(source_name: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::parse(source_name, line, e.to_string())
}

/// Parses a registry file: `id,title,english_title,language,category,impact_factor`.
pub fn parse_journal_registry<R: Read>(input: R, source_name: &str) -> Result<Registry> {
    let mut reader = csv_reader(input);
    let mut registry = Registry::new();
    if !check_header(&mut reader, &REGISTRY_COLUMNS, source_name)? {
        return Ok(registry);
    }
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let err = |msg: String| Error::parse(source_name, line, msg);
        if record.len() != REGISTRY_COLUMNS.len() {
            return Err(err(format!(
                "expected {} fields, found {}",
                REGISTRY_COLUMNS.len(),
                record.len()
            )));
        }
        let id = JournalId::new(&record[0]).map_err(|e| err(e.to_string()))?;
        let language = record[3].parse::<Language>().map_err(err)?;
        let category = Some(record[4].to_string()).filter(|c| !c.is_empty());
        let impact_factor = match &record[5] {
            "" => None,
            raw => {
                let value: f64 = raw
                    .parse()
                    .map_err(|_| err(format!("impact factor `{raw}` is not a number")))?;
                if !(value.is_finite() && value >= 0.0) {
                    return Err(err(format!("impact factor `{raw}` must be nonnegative")));
                }
                Some(value)
            }
        };
        let journal = Journal {
            id,
            title: record[1].to_string(),
            english_title: record[2].to_string(),
            language,
            category,
            impact_factor,
        };
        match registry.insert(journal) {
            Ok(_) => {}
            Err(Error::DuplicateKey { id, .. }) => {
                return Err(Error::DuplicateKey {
                    source_name: source_name.to_string(),
                    line,
                    id,
                })
            }
            Err(other) => return Err(err(other.to_string())),
        }
    }
    Ok(registry)
}

/// Which margin of the citation matrix to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Sum over a citing journal's row: references it gives.
    Row,
    /// Sum over a cited journal's column: citations it receives.
    Column,
}

/// One year of citation counts over a shared registry.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    year: i32,
    registry: Arc<Registry>,
    by_citing: BTreeMap<(usize, usize), u64>,
    by_cited: BTreeMap<(usize, usize), u64>,
}

impl PartialEq for CitationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.year == other.year
            && self.by_citing == other.by_citing
            && (Arc::ptr_eq(&self.registry, &other.registry) || self.registry == other.registry)
    }
}

impl CitationGraph {
    pub fn new(year: i32, registry: Arc<Registry>) -> Self {
        CitationGraph {
            year,
            registry,
            by_citing: BTreeMap::new(),
            by_cited: BTreeMap::new(),
        }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.registry
    }

    /// Adds `count` citations from `citing` to `cited`, summing with any existing cell.
    pub fn add(&mut self, citing: &str, cited: &str, count: u64) -> Result<()> {
        let i = self.registry.resolve(citing)?;
        let j = self.registry.resolve(cited)?;
        self.add_indexed(i, j, count);
        Ok(())
    }

    pub(crate) fn add_indexed(&mut self, citing: usize, cited: usize, count: u64) {
        if count == 0 {
            return;
        }
        *self.by_citing.entry((citing, cited)).or_insert(0) += count;
        *self.by_cited.entry((cited, citing)).or_insert(0) += count;
    }

    pub fn count_indexed(&self, citing: usize, cited: usize) -> u64 {
        self.by_citing.get(&(citing, cited)).copied().unwrap_or(0)
    }

    pub fn count(&self, citing: &str, cited: &str) -> Result<u64> {
        let i = self.registry.resolve(citing)?;
        let j = self.registry.resolve(cited)?;
        Ok(self.count_indexed(i, j))
    }

    /// Stored cells as `(citing, cited, count)` in registry index order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.by_citing.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn cell_count(&self) -> usize {
        self.by_citing.len()
    }

    /// Nonzero cells of a citing journal's row as `(cited, count)`.
    pub fn row(&self, citing: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.by_citing
            .range((citing, 0)..=(citing, usize::MAX))
            .map(|(&(_, j), &c)| (j, c))
    }

    /// Nonzero cells of a cited journal's column as `(citing, count)`.
    pub fn column(&self, cited: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.by_cited
            .range((cited, 0)..=(cited, usize::MAX))
            .map(|(&(_, i), &c)| (i, c))
    }

    pub fn margin_total_indexed(&self, journal: usize, axis: Axis) -> u64 {
        match axis {
            Axis::Row => self.row(journal).map(|(_, c)| c).sum(),
            Axis::Column => self.column(journal).map(|(_, c)| c).sum(),
        }
    }

    /// Row or column sum for `journal`, diagonal included.
    pub fn margin_total(&self, journal: &str, axis: Axis) -> Result<u64> {
        let idx = self.registry.resolve(journal)?;
        Ok(self.margin_total_indexed(idx, axis))
    }

    pub fn grand_total(&self) -> u64 {
        self.by_citing.values().sum()
    }

    /// Copy with every off-diagonal cell of count 1 removed, as in
    /// databases that fold single relations into an "all others" bucket.
    pub fn suppress_single_citations(&self) -> CitationGraph {
        let mut out = CitationGraph::new(self.year, Arc::clone(&self.registry));
        for (i, j, c) in self.cells() {
            if i == j || c > 1 {
                out.add_indexed(i, j, c);
            }
        }
        out
    }

    /// Edge-list CSV with header, one line per stored cell.
    pub fn to_edges_csv(&self) -> String {
        let mut out = String::from("citing_id,cited_id,count,year\n");
        self.append_edge_lines(&mut out);
        out
    }

    fn append_edge_lines(&self, out: &mut String) {
        use std::fmt::Write;
        for (i, j, c) in self.cells() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                self.registry.journal(i).id,
                self.registry.journal(j).id,
                c,
                self.year
            );
        }
    }
}

/// All parsed years of citation data over one registry.
#[derive(Debug, Clone)]
pub struct CitationStore {
    registry: Arc<Registry>,
    years: BTreeMap<i32, Arc<CitationGraph>>,
}

impl CitationStore {
    pub fn new(registry: Arc<Registry>) -> Self {
        CitationStore {
            registry,
            years: BTreeMap::new(),
        }
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.registry
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.years.keys().copied()
    }

    pub fn graph(&self, year: i32) -> Result<Arc<CitationGraph>> {
        self.years
            .get(&year)
            .cloned()
            .ok_or(Error::MissingYear(year))
    }

    pub fn insert_graph(&mut self, graph: CitationGraph) {
        self.years.insert(graph.year(), Arc::new(graph));
    }

    pub fn to_edges_csv(&self) -> String {
        let mut out = String::from("citing_id,cited_id,count,year\n");
        for graph in self.years.values() {
            graph.append_edge_lines(&mut out);
        }
        out
    }
}

/// Parses an edge file `citing_id,cited_id,count,year`. Repeated keys are summed.
pub fn parse_citation_edges<R: Read>(
    input: R,
    source_name: &str,
    registry: Arc<Registry>,
) -> Result<CitationStore> {
    let mut reader = csv_reader(input);
    let mut graphs: BTreeMap<i32, CitationGraph> = BTreeMap::new();
    if check_header(&mut reader, &EDGE_COLUMNS, source_name)? {
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(source_name, e))?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let err = |msg: String| Error::parse(source_name, line, msg);
            if record.len() != EDGE_COLUMNS.len() {
                return Err(err(format!(
                    "expected {} fields, found {}",
                    EDGE_COLUMNS.len(),
                    record.len()
                )));
            }
            let resolve = |id: &str| {
                registry.index_of(id).ok_or_else(|| Error::UnresolvedReference {
                    id: id.to_string(),
                    context: Some(format!("{source_name}:{line}")),
                })
            };
            let citing = resolve(&record[0])?;
            let cited = resolve(&record[1])?;
            let count: i64 = record[2]
                .parse()
                .map_err(|_| err(format!("count `{}` is not an integer", &record[2])))?;
            if count <= 0 {
                return Err(err(format!("count must be positive, found {count}")));
            }
            let year: i32 = record[3]
                .parse()
                .map_err(|_| err(format!("year `{}` is not an integer", &record[3])))?;
            graphs
                .entry(year)
                .or_insert_with(|| CitationGraph::new(year, Arc::clone(&registry)))
                .add_indexed(citing, cited, count as u64);
        }
    }
    let mut store = CitationStore::new(registry);
    for (_, graph) in graphs {
        store.insert_graph(graph);
    }
    Ok(store)
}
