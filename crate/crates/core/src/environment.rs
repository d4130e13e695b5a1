//! Seed-journal citation environments.
//!
//! A journal joins a seed's environment when it exchanges strictly more than
//! a threshold fraction (1% by default) of the seed's total citations in the
//! chosen direction. The local matrix then holds every count among members.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::CountMatrix;
use crate::store::{Axis, CitationGraph, JournalId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Journals the seed's authors cite.
    Citing,
    /// Journals whose authors cite the seed.
    Cited,
}

impl Mode {
    /// Margin that measures the seed's activity in this direction.
    pub fn axis(self) -> Axis {
        match self {
            Mode::Citing => Axis::Row,
            Mode::Cited => Axis::Column,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Citing => "citing",
            Mode::Cited => "cited",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "citing" => Ok(Mode::Citing),
            "cited" => Ok(Mode::Cited),
            other => Err(Error::Validation(format!(
                "unknown mode `{other}` (expected citing or cited)"
            ))),
        }
    }
}

/// Membership threshold as an exact fraction in (0, 1).
///
/// Kept rational so that "more than one percent" is decided without
/// floating point error at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub const ONE_PERCENT: Threshold = Threshold { num: 1, den: 100 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::Validation(format!(
                "threshold {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        let g = gcd(num, den);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    /// Exact value of the shortest decimal representation of `value`.
    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Validation(format!("threshold {value} is not finite")));
        }
        format!("{value}").parse()
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// True when `count > fraction × base`, evaluated exactly.
    pub fn exceeded_by(self, count: u64, base: u64) -> bool {
        u128::from(count) * u128::from(self.den) > u128::from(self.num) * u128::from(base)
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::ONE_PERCENT
    }
}

impl FromStr for Threshold {
    type Err = Error;

    /// Parses a plain decimal such as `0.01` or `.005`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("threshold `{s}` is not a decimal fraction"));
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Threshold::new(num, den)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub seed: JournalId,
    pub mode: Mode,
    pub year: i32,
    pub threshold: Threshold,
    /// Seed first, then the remaining members ordered by id.
    pub members: Vec<JournalId>,
    /// Registry indices parallel to `members`.
    pub member_indices: Vec<usize>,
    pub local: CountMatrix,
    /// The seed's margin total in the full graph for this mode.
    pub seed_total: u64,
    pub degenerate: bool,
}

impl Environment {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.as_str() == id)
    }

    /// Machine-readable warning for environments that collapsed to the seed.
    pub fn warning(&self) -> Option<String> {
        self.degenerate.then(|| {
            format!(
                "degenerate {} environment for `{}` in {}: no other journal exceeds {}% of the seed total ({})",
                self.mode,
                self.seed,
                self.year,
                self.threshold.as_f64() * 100.0,
                self.seed_total
            )
        })
    }
}

/// The seed's margin total in the mode's direction: citations received
/// (cited) or references given (citing), diagonal included.
pub fn seed_dimension_total(graph: &CitationGraph, seed: &str, mode: Mode) -> Result<u64> {
    graph.margin_total(seed, mode.axis())
}

/// Selects the seed's environment and restricts the graph to it.
pub fn select_members(
    graph: &CitationGraph,
    seed: &str,
    mode: Mode,
    threshold: Threshold,
) -> Result<Environment> {
    let registry = graph.registry();
    let seed_idx = registry.resolve(seed)?;
    let seed_total = graph.margin_total_indexed(seed_idx, mode.axis());

    let candidates: Box<dyn Iterator<Item = (usize, u64)>> = match mode {
        Mode::Cited => Box::new(graph.column(seed_idx)),
        Mode::Citing => Box::new(graph.row(seed_idx)),
    };
    let mut others: Vec<usize> = candidates
        .filter(|&(j, c)| j != seed_idx && threshold.exceeded_by(c, seed_total))
        .map(|(j, _)| j)
        .collect();
    others.sort_by(|&a, &b| registry.journal(a).id.cmp(&registry.journal(b).id));

    let mut member_indices = Vec::with_capacity(others.len() + 1);
    member_indices.push(seed_idx);
    member_indices.extend(others);
    let members = member_indices
        .iter()
        .map(|&i| registry.journal(i).id.clone())
        .collect();
    let local = build_local_matrix_indexed(graph, &member_indices);
    let degenerate = member_indices.len() == 1;

    Ok(Environment {
        seed: registry.journal(seed_idx).id.clone(),
        mode,
        year: graph.year(),
        threshold,
        members,
        member_indices,
        local,
        seed_total,
        degenerate,
    })
}

/// Dense submatrix over `members` in the given order, zeros where absent.
pub fn build_local_matrix(graph: &CitationGraph, members: &[JournalId]) -> Result<CountMatrix> {
    let indices = members
        .iter()
        .map(|m| graph.registry().resolve(m.as_str()))
        .collect::<Result<Vec<_>>>()?;
    Ok(build_local_matrix_indexed(graph, &indices))
}

pub(crate) fn build_local_matrix_indexed(graph: &CitationGraph, members: &[usize]) -> CountMatrix {
    let mut local = CountMatrix::zeros(members.len());
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate() {
            local.set(a, b, graph.count_indexed(i, j));
        }
    }
    local
}
