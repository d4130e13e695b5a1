//! Local citation impact: a journal's share `Cᵢ/N` of all citations in its
//! environment, the same share with within-journal citations removed from
//! the numerator, and the ellipse radii that display both.

use std::cmp::Ordering;
use std::fmt::Write;

use serde::Serialize;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::matrix::CountMatrix;
use crate::num::{percent_half_up, Scalar, Share};
use crate::store::{Axis, CitationGraph, JournalId, Registry};

/// Sum of every cell, diagonal included.
pub fn grand_sum(local: &CountMatrix) -> u64 {
    local.total()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactProfile<T> {
    pub journal: JournalId,
    /// Margin total `Cᵢ` along the environment's axis.
    pub margin: u64,
    /// Within-journal cell `cᵢᵢ`.
    pub diagonal: u64,
    /// Grand sum `N` the shares are taken over.
    pub grand_sum: u64,
    pub total_share: T,
    pub corrected_share: T,
    pub within_share: T,
}

impl<T: Share> ImpactProfile<T> {
    pub fn total_percent(&self) -> u64 {
        percent_half_up(self.margin, self.grand_sum)
    }

    pub fn corrected_percent(&self) -> u64 {
        percent_half_up(self.margin - self.diagonal, self.grand_sum)
    }

    pub fn within_percent(&self) -> u64 {
        percent_half_up(self.diagonal, self.margin)
    }
}

fn ratio<T: Share>(num: u64, den: u64) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::from_count(num) / T::from_count(den)
    }
}

/// Profile of the member at `index` using row (citing) or column (cited) margins.
pub fn impact_profile<T: Share>(
    local: &CountMatrix,
    journal: JournalId,
    index: usize,
    axis: Axis,
) -> ImpactProfile<T> {
    let n = grand_sum(local);
    let margin = match axis {
        Axis::Row => local.row_sum(index),
        Axis::Column => local.column_sum(index),
    };
    let diagonal = local.get(index, index);
    ImpactProfile {
        journal,
        margin,
        diagonal,
        grand_sum: n,
        total_share: ratio(margin, n),
        corrected_share: ratio(margin - diagonal, n),
        within_share: ratio(diagonal, margin),
    }
}

/// Profiles for every member, in member order, along the mode's axis.
pub fn impact_profiles<T: Share>(env: &Environment) -> Vec<ImpactProfile<T>> {
    let axis = env.mode.axis();
    env.members
        .iter()
        .enumerate()
        .map(|(k, id)| impact_profile(&env.local, id.clone(), k, axis))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeGeometry<T> {
    pub journal: JournalId,
    /// Encodes the total share.
    pub v_radius: T,
    /// Encodes the share after removing within-journal citations.
    pub h_radius: T,
}

impl<T: Scalar> NodeGeometry<T> {
    pub fn is_circle(&self) -> bool {
        self.h_radius == self.v_radius
    }
}

/// Default floor on radii: one percent of the scale unit.
pub fn default_min_radius<T: Scalar>(scale: T) -> T {
    scale * T::lit(0.01)
}

/// Ellipse radii `scale × share`, both floored at `min_radius`.
pub fn node_geometry<S: Share, T: Scalar>(
    profile: &ImpactProfile<S>,
    scale: T,
    min_radius: T,
) -> NodeGeometry<T> {
    let to_t = |s: &S| T::from_f64(s.to_f64_lossy()).unwrap_or_else(T::zero);
    let v = (scale * to_t(&profile.total_share)).max(min_radius);
    let h = if profile.diagonal == 0 {
        v
    } else {
        (scale * to_t(&profile.corrected_share)).max(min_radius).min(v)
    };
    NodeGeometry {
        journal: profile.journal.clone(),
        v_radius: v,
        h_radius: h,
    }
}

/// Reference counts the domestic database cannot see.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExternalReferences {
    /// References to journals outside the database.
    pub international: Option<u64>,
    /// All references the journal gave, inside and outside the database.
    pub total: Option<u64>,
}

impl ExternalReferences {
    /// Validates signed inputs, as they arrive from a command line.
    pub fn from_signed(international: Option<i64>, total: Option<i64>) -> Result<Self> {
        let check = |name: &str, v: Option<i64>| -> Result<Option<u64>> {
            match v {
                Some(x) if x < 0 => Err(Error::Validation(format!("{name} must be nonnegative, got {x}"))),
                Some(x) => Ok(Some(x as u64)),
                None => Ok(None),
            }
        };
        Ok(ExternalReferences {
            international: check("international references", international)?,
            total: check("total references", total)?,
        })
    }
}

/// A journal's references partitioned into self, other domestic, international.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceSplit {
    pub journal: JournalId,
    pub self_count: u64,
    pub domestic_other: u64,
    pub international: u64,
}

impl ReferenceSplit {
    pub fn domestic(&self) -> u64 {
        self.self_count + self.domestic_other
    }

    pub fn total(&self) -> u64 {
        self.domestic() + self.international
    }

    pub fn self_percent(&self) -> u64 {
        percent_half_up(self.self_count, self.total())
    }

    pub fn domestic_other_percent(&self) -> u64 {
        percent_half_up(self.domestic_other, self.total())
    }

    pub fn international_percent(&self) -> u64 {
        percent_half_up(self.international, self.total())
    }

    /// Share of all references that stay inside the database.
    pub fn domestic_percent(&self) -> u64 {
        percent_half_up(self.domestic(), self.total())
    }

    /// Within-journal share of the in-database references.
    pub fn domestic_within_percent(&self) -> u64 {
        percent_half_up(self.self_count, self.domestic())
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("part\tcount\tpercent\n");
        let rows = [
            ("self", self.self_count, self.self_percent()),
            ("domestic_other", self.domestic_other, self.domestic_other_percent()),
            ("international", self.international, self.international_percent()),
            ("domestic", self.domestic(), self.domestic_percent()),
            ("total", self.total(), 100),
        ];
        for (name, count, pct) in rows {
            let _ = writeln!(out, "{name}\t{count}\t{pct}%");
        }
        let _ = writeln!(out, "domestic_within\t{}\t{}%", self.self_count, self.domestic_within_percent());
        out
    }
}

/// Splits `journal`'s references using its row in the domestic graph and
/// the externally supplied international or total count.
pub fn reference_split_report(
    graph: &CitationGraph,
    journal: &str,
    external: ExternalReferences,
) -> Result<ReferenceSplit> {
    let idx = graph.registry().resolve(journal)?;
    let self_count = graph.count_indexed(idx, idx);
    let domestic = graph.margin_total_indexed(idx, Axis::Row);
    let international = match (external.international, external.total) {
        (None, None) => {
            return Err(Error::Validation(
                "either the international or the total reference count is required".into(),
            ))
        }
        (Some(i), None) => i,
        (None, Some(t)) => t.checked_sub(domestic).ok_or_else(|| {
            Error::Consistency(format!(
                "total references {t} is smaller than the {domestic} domestic references of `{journal}`"
            ))
        })?,
        (Some(i), Some(t)) => {
            if domestic + i != t {
                return Err(Error::Consistency(format!(
                    "{domestic} domestic + {i} international references != total {t}"
                )));
            }
            i
        }
    };
    Ok(ReferenceSplit {
        journal: graph.registry().journal(idx).id.clone(),
        self_count,
        domestic_other: domestic - self_count,
        international,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedJournal<T> {
    pub rank: usize,
    pub profile: ImpactProfile<T>,
    pub impact_factor: Option<f64>,
}

/// Orders by corrected share, then total share, then id; ranks start at 1.
pub fn rank_by_local_impact<T: Share>(
    profiles: &[ImpactProfile<T>],
    registry: &Registry,
) -> Vec<RankedJournal<T>> {
    let mut sorted: Vec<&ImpactProfile<T>> = profiles.iter().collect();
    sorted.sort_by(|a, b| {
        b.corrected_share
            .partial_cmp(&a.corrected_share)
            .unwrap_or(Ordering::Equal)
            .then_with(|| b.total_share.partial_cmp(&a.total_share).unwrap_or(Ordering::Equal))
            .then_with(|| a.journal.cmp(&b.journal))
    });
    sorted
        .into_iter()
        .enumerate()
        .map(|(k, p)| RankedJournal {
            rank: k + 1,
            profile: p.clone(),
            impact_factor: registry.get(p.journal.as_str()).and_then(|j| j.impact_factor),
        })
        .collect()
}

/// Impact report for one environment: a table and a JSON variant.
#[derive(Debug, Clone, Serialize)]
pub struct ImpactReport {
    pub seed: JournalId,
    pub mode: String,
    pub year: i32,
    pub threshold: f64,
    pub members: usize,
    pub grand_sum: u64,
    pub degenerate: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<ImpactRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImpactRow {
    pub id: JournalId,
    pub rank: usize,
    pub margin: u64,
    pub diagonal: u64,
    pub total_share: f64,
    pub corrected_share: f64,
    pub within_share: f64,
    pub total_percent: u64,
    pub corrected_percent: u64,
    pub within_percent: u64,
    pub impact_factor: Option<f64>,
}

impl ImpactReport {
    /// Rows follow member order.
    pub fn new<T: Share>(env: &Environment, profiles: &[ImpactProfile<T>], registry: &Registry) -> Self {
        let ranked = rank_by_local_impact(profiles, registry);
        let rows = profiles
            .iter()
            .map(|p| {
                let r = ranked.iter().find(|r| r.profile.journal == p.journal).expect("ranked");
                ImpactRow {
                    id: p.journal.clone(),
                    rank: r.rank,
                    margin: p.margin,
                    diagonal: p.diagonal,
                    total_share: p.total_share.to_f64_lossy(),
                    corrected_share: p.corrected_share.to_f64_lossy(),
                    within_share: p.within_share.to_f64_lossy(),
                    total_percent: p.total_percent(),
                    corrected_percent: p.corrected_percent(),
                    within_percent: p.within_percent(),
                    impact_factor: r.impact_factor,
                }
            })
            .collect();
        ImpactReport {
            seed: env.seed.clone(),
            mode: env.mode.to_string(),
            year: env.year,
            threshold: env.threshold.as_f64(),
            members: env.len(),
            grand_sum: grand_sum(&env.local),
            degenerate: env.degenerate,
            warnings: env.warning().into_iter().collect(),
            rows,
        }
    }

    pub fn row(&self, id: &str) -> Option<&ImpactRow> {
        self.rows.iter().find(|r| r.id.as_str() == id)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# seed={} mode={} year={} threshold={} members={} N={}",
            self.seed, self.mode, self.year, self.threshold, self.members, self.grand_sum
        );
        for w in &self.warnings {
            let _ = writeln!(out, "# warning: {w}");
        }
        out.push_str("id\trank\tmargin\tdiagonal\ttotal_share\tcorrected_share\twithin_share\timpact_factor\n");
        for r in &self.rows {
            let factor = r.impact_factor.map(|f| format!("{f:.2}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}%\t{}%\t{}%\t{}",
                r.id, r.rank, r.margin, r.diagonal, r.total_percent, r.corrected_percent, r.within_percent, factor
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn id(s: &str) -> JournalId {
        JournalId::new(s).unwrap()
    }

    fn m(rows: &[Vec<u64>]) -> CountMatrix {
        CountMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn grand_sum_examples() {
        assert_eq!(grand_sum(&m(&[vec![0, 4], vec![0, 0]])), 4);
        assert_eq!(grand_sum(&CountMatrix::zeros(0)), 0);
    }

    #[test]
    fn within_share_of_reported_margins() {
        // column margin 259 of which 239 diagonal
        let local = m(&[vec![239, 0], vec![20, 50]]);
        let p: ImpactProfile<f64> = impact_profile(&local, id("jme"), 0, Axis::Column);
        assert_eq!(p.margin, 259);
        assert!((p.within_share - 239.0 / 259.0).abs() < 1e-15);
        assert_eq!(p.within_percent(), 92);

        let local = m(&[vec![273, 0], vec![11, 3]]);
        let p: ImpactProfile<f64> = impact_profile(&local, id("jme"), 0, Axis::Column);
        assert_eq!(p.within_percent(), 96);
    }

    #[test]
    fn zero_diagonal_gives_equal_shares_and_circle() {
        let local = m(&[vec![0, 5], vec![5, 0]]);
        let p: ImpactProfile<f64> = impact_profile(&local, id("a"), 0, Axis::Column);
        assert_eq!(p.total_share, p.corrected_share);
        assert_eq!(p.total_share, 0.5);
        let g = node_geometry(&p, 100.0, 1.0);
        assert_eq!((g.v_radius, g.h_radius), (50.0, 50.0));
        assert!(g.is_circle());
    }

    #[test]
    fn zero_margin_and_empty_matrix_shares_are_zero() {
        let p: ImpactProfile<f64> = impact_profile(&CountMatrix::zeros(2), id("a"), 1, Axis::Row);
        assert_eq!((p.total_share, p.corrected_share, p.within_share), (0.0, 0.0, 0.0));
        let g = node_geometry(&p, 100.0, 1.0);
        assert_eq!((g.v_radius, g.h_radius), (1.0, 1.0));
    }

    #[test]
    fn narrow_ellipse_ratio_is_one_minus_within_share() {
        let local = m(&[vec![239, 0], vec![20, 50]]);
        let p: ImpactProfile<f64> = impact_profile(&local, id("jme"), 0, Axis::Column);
        let g = node_geometry(&p, 100.0f64, 0.01);
        assert!((g.h_radius / g.v_radius - 20.0 / 259.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_line_nodes_get_the_floor() {
        let local = m(&[vec![100, 0], vec![0, 100]]);
        let p: ImpactProfile<f64> = impact_profile(&local, id("a"), 0, Axis::Column);
        let g = node_geometry(&p, 100.0, default_min_radius(100.0));
        assert_eq!(g.v_radius, 50.0);
        assert_eq!(g.h_radius, 1.0);
    }

    #[test]
    fn exact_shares_in_rationals() {
        let local = m(&[vec![3, 1, 0], vec![2, 0, 5], vec![0, 0, 7]]);
        let total: Ratio<i64> = (0..3)
            .map(|k| impact_profile::<Ratio<i64>>(&local, id("x"), k, Axis::Column).total_share)
            .fold(Ratio::from_integer(0), |a, b| a + b);
        assert_eq!(total, Ratio::from_integer(1));
    }

    fn graph_with_row(self_count: u64, others: &[u64]) -> CitationGraph {
        use crate::store::parse_journal_registry;
        use std::sync::Arc;
        let mut text = String::from("id,title,english_title,language,category,impact_factor\njme,T,T,chinese,,\n");
        for k in 0..others.len() {
            text.push_str(&format!("o{k},T,T,chinese,,\n"));
        }
        let reg = Arc::new(parse_journal_registry(text.as_bytes(), "r").unwrap());
        let mut g = CitationGraph::new(2004, reg);
        g.add("jme", "jme", self_count).unwrap();
        for (k, &c) in others.iter().enumerate() {
            g.add("jme", &format!("o{k}"), c).unwrap();
        }
        g
    }

    #[test]
    fn reference_split_from_international_count() {
        let g = graph_with_row(273, &[1]);
        let s = reference_split_report(&g, "jme", ExternalReferences { international: Some(411), total: None }).unwrap();
        assert_eq!(s.total(), 685);
        assert_eq!(s.international_percent(), 60);
        assert_eq!(s.self_percent(), 40);
    }

    #[test]
    fn reference_split_from_total_count() {
        let g = graph_with_row(239, &[1, 1, 1, 1, 2]);
        let s = reference_split_report(&g, "jme", ExternalReferences { international: None, total: Some(555) }).unwrap();
        assert_eq!(s.domestic(), 245);
        assert_eq!(s.international, 310);
        assert_eq!(s.domestic_within_percent(), 98);
        assert_eq!(s.international_percent(), 56);
        assert_eq!(s.self_percent(), 43);
    }

    #[test]
    fn reference_split_validation() {
        let g = graph_with_row(10, &[5]);
        let both_missing = reference_split_report(&g, "jme", ExternalReferences::default());
        assert!(matches!(both_missing, Err(Error::Validation(_))));
        let too_small = reference_split_report(&g, "jme", ExternalReferences { international: None, total: Some(14) });
        assert!(matches!(too_small, Err(Error::Consistency(_))));
        let disagree = reference_split_report(&g, "jme", ExternalReferences { international: Some(5), total: Some(30) });
        assert!(matches!(disagree, Err(Error::Consistency(_))));
        let agree = reference_split_report(&g, "jme", ExternalReferences { international: Some(15), total: Some(30) });
        assert_eq!(agree.unwrap().total(), 30);
        assert!(ExternalReferences::from_signed(Some(-1), None).is_err());
        assert!(reference_split_report(&g, "zzz", ExternalReferences { international: Some(1), total: None }).is_err());
    }

    fn profile(name: &str, corrected: f64, total: f64) -> ImpactProfile<f64> {
        ImpactProfile {
            journal: id(name),
            margin: 0,
            diagonal: 0,
            grand_sum: 0,
            total_share: total,
            corrected_share: corrected,
            within_share: 0.0,
        }
    }

    #[test]
    fn ranking_order_and_ties() {
        let reg = Registry::new();
        let ranked = rank_by_local_impact(&[profile("a", 0.3, 0.3), profile("b", 0.1, 0.1)], &reg);
        assert_eq!(ranked[0].profile.journal.as_str(), "a");
        let ranked = rank_by_local_impact(&[profile("a", 0.2, 0.3), profile("b", 0.2, 0.4)], &reg);
        assert_eq!(ranked[0].profile.journal.as_str(), "b");
        assert_eq!(ranked[1].rank, 2);
        let ranked = rank_by_local_impact(&[profile("b", 0.2, 0.4), profile("a", 0.2, 0.4)], &reg);
        assert_eq!(ranked[0].profile.journal.as_str(), "a");
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<u64>>> {
        (1..6usize).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..30u64, n), n))
    }

    proptest! {
        #[test]
        fn shares_are_ordered_and_bounded(rows in arb_matrix(), column in any::<bool>()) {
            let local = m(&rows);
            let axis = if column { Axis::Column } else { Axis::Row };
            for k in 0..local.dim() {
                let p: ImpactProfile<f64> = impact_profile(&local, id("x"), k, axis);
                prop_assert!(0.0 <= p.corrected_share && p.corrected_share <= p.total_share && p.total_share <= 1.0);
                prop_assert!((0.0..=1.0).contains(&p.within_share));
                prop_assert_eq!(p.total_share == p.corrected_share, p.diagonal == 0 || local.total() == 0);
                let g = node_geometry(&p, 100.0, 0.0);
                prop_assert!(g.h_radius <= g.v_radius);
                if g.v_radius > 0.0 {
                    prop_assert!((g.h_radius / g.v_radius - (1.0 - p.within_share)).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn scaling_counts_preserves_shares_and_ranking(rows in arb_matrix(), factor in 2..9u64) {
            let local = m(&rows);
            let scaled = m(&rows.iter().map(|r| r.iter().map(|c| c * factor).collect()).collect::<Vec<_>>());
            let labels: Vec<JournalId> = (0..local.dim()).map(|k| id(&format!("j{k}"))).collect();
            let profiles = |mat: &CountMatrix| -> Vec<ImpactProfile<Ratio<i64>>> {
                labels.iter().enumerate().map(|(k, l)| impact_profile(mat, l.clone(), k, Axis::Column)).collect()
            };
            let (a, b) = (profiles(&local), profiles(&scaled));
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(&x.total_share, &y.total_share);
                prop_assert_eq!(&x.corrected_share, &y.corrected_share);
                prop_assert_eq!(&x.within_share, &y.within_share);
            }
            let reg = Registry::new();
            let ra: Vec<_> = rank_by_local_impact(&a, &reg).into_iter().map(|r| r.profile.journal).collect();
            let rb: Vec<_> = rank_by_local_impact(&b, &reg).into_iter().map(|r| r.profile.journal).collect();
            prop_assert_eq!(ra, rb);
        }
    }
}
