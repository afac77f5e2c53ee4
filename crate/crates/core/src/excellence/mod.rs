//! Top-n% citation thresholds per cell and highly-cited classification.
//!
//! The quota of a cell is round-half-up(p·N/100) and the threshold is the
//! citation count found at that position of the descending ordering. Papers
//! strictly above the threshold are always highly cited; the papers sitting
//! exactly on it (the borderline) are handled by the classification method
//! or by a tie-break chain that picks exactly the remaining quota.

mod report;
mod tiebreak;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use chrono::Datelike;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{CellKey, Corpus, PaperIdx};
use crate::error::{Error, Result};
use crate::rational::{self, Exact, Rational};

pub use report::{entity_hcp_share, hcp_report, EntityShare, ExcellenceReport, ReportRow};
pub use tiebreak::{
    select_quota, tiebreak_chronology, tiebreak_citing_excellence, tiebreak_order, tiebreak_trajectory, ExtRatio,
    OrderedGroup, TiebreakKey, TiebreakMethod, TiebreakOrder, YearWindow,
};

/// Thresholds at or below this count trigger the low-threshold rule.
pub const LOW_THRESHOLD_LIMIT: u64 = 2;

/// Which citations count towards a paper's total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CitationWindow {
    /// Every citation in the snapshot.
    #[default]
    AllTime,
    /// Citations dated within years `from..=to` after publication.
    Years { from: i32, to: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcellenceConfig {
    pub top_percent: Rational,
    pub window: CitationWindow,
    /// No paper is highly cited in a cell whose threshold is 2 or less.
    pub esi_low_threshold: bool,
}

impl Default for ExcellenceConfig {
    fn default() -> Self {
        ExcellenceConfig { top_percent: rational::int(1), window: CitationWindow::AllTime, esi_low_threshold: false }
    }
}

impl ExcellenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_percent <= Rational::zero() || self.top_percent >= rational::int(100) {
            return Err(Error::Config(format!(
                "top percent must lie strictly between 0 and 100, got {}",
                rational::render_decimal(&self.top_percent, 4)
            )));
        }
        if let CitationWindow::Years { from, to } = self.window {
            if from > to {
                return Err(Error::Config(format!("citation window {from}..{to} is empty")));
            }
        }
        Ok(())
    }
}

/// Citation count of a paper under the window.
pub fn paper_citations(corpus: &Corpus, idx: PaperIdx, window: CitationWindow) -> Result<u64> {
    match window {
        CitationWindow::AllTime => Ok(corpus.citations(idx)),
        CitationWindow::Years { from, to } => {
            if !corpus.has_edges() {
                return Err(Error::EdgesUnavailable("a windowed citation count"));
            }
            let year = corpus.paper(idx).year;
            let count = corpus
                .citing(idx)
                .filter(|&(citing, date)| {
                    let cited_in = date.map(|d| d.year()).unwrap_or(corpus.paper(citing).year);
                    (year + from..=year + to).contains(&cited_in)
                })
                .count();
            Ok(count as u64)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdResult {
    pub cell: CellKey,
    #[serde(serialize_with = "serialize_fraction")]
    pub top_percent: Rational,
    pub n: usize,
    pub quota: u64,
    /// Undefined when the quota is zero.
    pub threshold: Option<u64>,
    pub above_count: usize,
    pub tie_count: usize,
}

fn serialize_fraction<S: serde::Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::fraction_string(value))
}

/// Threshold from a cell's citation counts.
pub fn threshold_from_counts(cell: CellKey, counts: &[u64], top_percent: &Rational) -> Result<ThresholdResult> {
    if counts.is_empty() {
        return Err(Error::Empty("cell"));
    }
    let n = counts.len();
    let quota = rational::round_half_up(&(top_percent * rational::from_u64(n as u64) / rational::int(100)))
        .to_u64()
        .expect("quota fits in u64");
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let threshold = (quota >= 1).then(|| sorted[quota as usize - 1]);
    let (above_count, tie_count) = match threshold {
        Some(t) => (sorted.iter().filter(|&&c| c > t).count(), sorted.iter().filter(|&&c| c == t).count()),
        None => (0, 0),
    };
    Ok(ThresholdResult { cell, top_percent: top_percent.clone(), n, quota, threshold, above_count, tie_count })
}

/// Threshold of one cell of the corpus.
pub fn compute_threshold(
    corpus: &Corpus,
    cell: &CellKey,
    papers: &[PaperIdx],
    config: &ExcellenceConfig,
) -> Result<ThresholdResult> {
    config.validate()?;
    let counts = papers.iter().map(|&i| paper_citations(corpus, i, config.window)).collect::<Result<Vec<_>>>()?;
    threshold_from_counts(cell.clone(), &counts, &config.top_percent)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassMethod {
    Inclusive,
    Exclusive,
    FractionalWs,
}

impl ClassMethod {
    pub fn name(self) -> &'static str {
        match self {
            ClassMethod::Inclusive => "inclusive",
            ClassMethod::Exclusive => "exclusive",
            ClassMethod::FractionalWs => "fractional_ws",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HcpStatus {
    Full,
    Fractional(Rational),
    None,
}

impl HcpStatus {
    pub fn weight(&self) -> Rational {
        match self {
            HcpStatus::Full => Rational::one(),
            HcpStatus::Fractional(w) => w.clone(),
            HcpStatus::None => Rational::zero(),
        }
    }

    pub fn is_hcp(&self) -> bool {
        !matches!(self, HcpStatus::None)
    }

    pub fn label(&self) -> &'static str {
        match self {
            HcpStatus::Full => "full",
            HcpStatus::Fractional(_) => "fractional",
            HcpStatus::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    Selected,
    Rejected,
    /// Tied at the cut; handed to the next method.
    Unresolved,
}

/// Evidence one tie-break method produced for a borderline paper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub method: String,
    pub evidence: String,
    pub outcome: StepOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcpDecision {
    pub paper: PaperIdx,
    pub paper_id: String,
    pub cell: CellKey,
    pub status: HcpStatus,
    pub method: String,
    /// Present iff a tie-breaker fired for this paper.
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Serialize)]
struct DecisionRecord<'a> {
    paper: &'a str,
    cell: String,
    status: &'static str,
    weight: Exact,
    method: &'a str,
    trace: Option<&'a [TraceStep]>,
}

impl HcpDecision {
    fn plain(corpus: &Corpus, idx: PaperIdx, cell: &CellKey, status: HcpStatus, method: &str) -> Self {
        HcpDecision {
            paper: idx,
            paper_id: corpus.paper(idx).id.clone(),
            cell: cell.clone(),
            status,
            method: method.to_string(),
            trace: None,
        }
    }

    /// One JSON object, the line format of decision exports.
    pub fn to_json_line(&self) -> String {
        let record = DecisionRecord {
            paper: &self.paper_id,
            cell: self.cell.to_string(),
            status: self.status.label(),
            weight: Exact::new(&self.status.weight(), 4),
            method: &self.method,
            trace: self.trace.as_deref(),
        };
        serde_json::to_string(&record).expect("decision serializes")
    }
}

/// Classifies every paper of a cell.
pub fn classify(
    corpus: &Corpus,
    papers: &[PaperIdx],
    threshold: &ThresholdResult,
    method: ClassMethod,
    config: &ExcellenceConfig,
) -> Result<Vec<HcpDecision>> {
    let cell = &threshold.cell;
    let Some(t) = threshold.threshold else {
        return Ok(papers
            .iter()
            .map(|&i| HcpDecision::plain(corpus, i, cell, HcpStatus::None, "zero_quota"))
            .collect());
    };
    if config.esi_low_threshold && t <= LOW_THRESHOLD_LIMIT {
        return Ok(papers
            .iter()
            .map(|&i| HcpDecision::plain(corpus, i, cell, HcpStatus::None, "esi_low_threshold"))
            .collect());
    }
    let tie_weight =
        rational::ratio(threshold.quota as i64 - threshold.above_count as i64, threshold.tie_count.max(1) as i64);
    papers
        .iter()
        .map(|&i| {
            let c = paper_citations(corpus, i, config.window)?;
            let status = match c.cmp(&t) {
                std::cmp::Ordering::Greater => HcpStatus::Full,
                std::cmp::Ordering::Less => HcpStatus::None,
                std::cmp::Ordering::Equal => match method {
                    ClassMethod::Inclusive => HcpStatus::Full,
                    ClassMethod::Exclusive => HcpStatus::None,
                    ClassMethod::FractionalWs if tie_weight.is_one() => HcpStatus::Full,
                    ClassMethod::FractionalWs => HcpStatus::Fractional(tie_weight.clone()),
                },
            };
            Ok(HcpDecision::plain(corpus, i, cell, status, method.name()))
        })
        .collect()
}

/// Papers highly cited under inclusive classification in any cell of the
/// schema. Serves as the reference set for citing-excellence tie-breaks and
/// includes the borderline candidates themselves.
pub fn provisional_hcp_set(corpus: &Corpus, schema: &str, config: &ExcellenceConfig) -> Result<HashSet<PaperIdx>> {
    config.validate()?;
    let cells = corpus.cells(schema)?;
    let per_cell = cells
        .par_iter()
        .map(|(key, papers)| {
            let threshold = compute_threshold(corpus, key, papers, config)?;
            let mut members = Vec::new();
            if let Some(t) = threshold.threshold {
                for &i in papers {
                    if paper_citations(corpus, i, config.window)? >= t {
                        members.push(i);
                    }
                }
            }
            Ok(members)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// How a schema-wide run decides the borderline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Classify(ClassMethod),
    /// Exactly the quota, ordered by the chain.
    Quota(Vec<TiebreakMethod>),
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Classify(m) => f.write_str(m.name()),
            Selection::Quota(chain) => {
                let names: Vec<String> = chain.iter().map(|m| m.to_string()).collect();
                write!(f, "quota[{}]", names.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOutcome {
    pub threshold: ThresholdResult,
    pub decisions: Vec<HcpDecision>,
    /// Set when borderline papers had to be ordered by id alone.
    pub fallback_used: bool,
}

/// Shared, precomputed inputs of tie-breaking.
#[derive(Clone, Debug, Default)]
pub struct TiebreakContext {
    pub provisional: Option<HashSet<PaperIdx>>,
}

impl TiebreakContext {
    pub fn prepare(corpus: &Corpus, schema: &str, config: &ExcellenceConfig, chain: &[TiebreakMethod]) -> Result<Self> {
        let provisional = if chain.contains(&TiebreakMethod::CitingExcellence) {
            Some(provisional_hcp_set(corpus, schema, config)?)
        } else {
            None
        };
        Ok(TiebreakContext { provisional })
    }
}

/// Runs the selection over every cell of the schema, optionally restricted
/// to cells accepted by `filter`.
pub fn analyze(
    corpus: &Corpus,
    schema: &str,
    config: &ExcellenceConfig,
    selection: &Selection,
    filter: impl Fn(&CellKey) -> bool + Sync,
) -> Result<Vec<CellOutcome>> {
    config.validate()?;
    let cells: BTreeMap<CellKey, Vec<PaperIdx>> =
        corpus.cells(schema)?.into_iter().filter(|(k, _)| filter(k)).collect();
    let ctx = match selection {
        Selection::Quota(chain) => TiebreakContext::prepare(corpus, schema, config, chain)?,
        Selection::Classify(_) => TiebreakContext::default(),
    };
    cells
        .par_iter()
        .map(|(key, papers)| {
            let threshold = compute_threshold(corpus, key, papers, config)?;
            match selection {
                Selection::Classify(method) => {
                    let decisions = classify(corpus, papers, &threshold, *method, config)?;
                    Ok(CellOutcome { threshold, decisions, fallback_used: false })
                }
                Selection::Quota(chain) => {
                    if threshold.quota == 0 {
                        let decisions = papers
                            .iter()
                            .map(|&i| HcpDecision::plain(corpus, i, key, HcpStatus::None, "zero_quota"))
                            .collect();
                        return Ok(CellOutcome { threshold, decisions, fallback_used: false });
                    }
                    select_quota(corpus, papers, &threshold, chain, config, &ctx)
                }
            }
        })
        .collect()
}
