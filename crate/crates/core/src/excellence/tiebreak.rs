//! Ordering the borderline papers of a cell.
//!
//! Each method maps a candidate to a key; larger keys rank first. Equal keys
//! form a group, and only a group straddling the quota cut is handed to the
//! next method of the chain. Paper id is the last resort.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{
    paper_citations, CellOutcome, ExcellenceConfig, HcpDecision, HcpStatus, StepOutcome, ThresholdResult,
    TiebreakContext, TraceStep, LOW_THRESHOLD_LIMIT,
};
use crate::corpus::{Corpus, PaperIdx};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Years after publication, inclusive on both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YearWindow {
    pub from: i32,
    pub to: i32,
}

impl YearWindow {
    pub const EARLY: YearWindow = YearWindow { from: 0, to: 4 };
    pub const LATE: YearWindow = YearWindow { from: 5, to: 9 };

    fn contains(&self, offset: i32) -> bool {
        (self.from..=self.to).contains(&offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TiebreakMethod {
    /// Later appearance first: less time to collect the same citations.
    Chronology,
    /// Higher late/early citation ratio first.
    Trajectory { early: YearWindow, late: YearWindow },
    /// More highly cited citing papers first.
    CitingExcellence,
}

impl TiebreakMethod {
    pub fn trajectory() -> Self {
        TiebreakMethod::Trajectory { early: YearWindow::EARLY, late: YearWindow::LATE }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TiebreakMethod::Chronology => "chronology",
            TiebreakMethod::Trajectory { .. } => "trajectory",
            TiebreakMethod::CitingExcellence => "citing_excellence",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let TiebreakMethod::Trajectory { early, late } = self {
            if early.from > early.to || late.from > late.to {
                return Err(Error::Config("trajectory windows must be non-empty".into()));
            }
            if early.to >= late.from {
                return Err(Error::Config("the early window must end before the late window starts".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TiebreakMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TiebreakMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "chronology" => Ok(TiebreakMethod::Chronology),
            "trajectory" => Ok(TiebreakMethod::trajectory()),
            "citing_excellence" => Ok(TiebreakMethod::CitingExcellence),
            other => Err(Error::Config(format!("unknown tie-break method `{other}`"))),
        }
    }
}

/// late/early on the extended non-negative rationals. A zero early count
/// with late citations is unbounded and ranks first; 0/0 ranks last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRatio {
    Undefined,
    Finite(Rational),
    Infinite,
}

impl ExtRatio {
    pub fn of(late: u64, early: u64) -> Self {
        match (late, early) {
            (0, 0) => ExtRatio::Undefined,
            (_, 0) => ExtRatio::Infinite,
            (l, e) => ExtRatio::Finite(rational::from_u64(l) / rational::from_u64(e)),
        }
    }
}

impl fmt::Display for ExtRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRatio::Undefined => f.write_str("undefined"),
            ExtRatio::Infinite => f.write_str("inf"),
            ExtRatio::Finite(r) => f.write_str(&rational::render_decimal(r, 2)),
        }
    }
}

/// Comparable only within one method.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TiebreakKey {
    Date(NaiveDate),
    Ratio(ExtRatio),
    Count(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGroup {
    pub key: TiebreakKey,
    /// Sorted by paper id.
    pub papers: Vec<PaperIdx>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiebreakOrder {
    pub method: TiebreakMethod,
    /// Best first.
    pub groups: Vec<OrderedGroup>,
    pub evidence: BTreeMap<PaperIdx, String>,
}

impl TiebreakOrder {
    /// Candidates best first; ties in id order.
    pub fn ordered(&self) -> Vec<PaperIdx> {
        self.groups.iter().flat_map(|g| g.papers.iter().copied()).collect()
    }

    /// Groups of two or more papers sharing a key.
    pub fn ties(&self) -> impl Iterator<Item = &OrderedGroup> {
        self.groups.iter().filter(|g| g.papers.len() > 1)
    }
}

fn by_id(corpus: &Corpus, papers: &mut [PaperIdx]) {
    papers.sort_by(|&a, &b| corpus.paper(a).id.cmp(&corpus.paper(b).id));
}

fn group(corpus: &Corpus, method: TiebreakMethod, keyed: Vec<(PaperIdx, TiebreakKey, String)>) -> TiebreakOrder {
    let mut by_key: BTreeMap<TiebreakKey, Vec<PaperIdx>> = BTreeMap::new();
    let mut evidence = BTreeMap::new();
    for (idx, key, ev) in keyed {
        by_key.entry(key).or_default().push(idx);
        evidence.insert(idx, ev);
    }
    let groups = by_key
        .into_iter()
        .rev()
        .map(|(key, mut papers)| {
            by_id(corpus, &mut papers);
            OrderedGroup { key, papers }
        })
        .collect();
    TiebreakOrder { method, groups, evidence }
}

pub fn tiebreak_chronology(corpus: &Corpus, candidates: &[PaperIdx]) -> Result<TiebreakOrder> {
    let keyed = candidates
        .iter()
        .map(|&idx| {
            let paper = corpus.paper(idx);
            let date = paper.effective_date().ok_or_else(|| Error::Undated(paper.id.clone()))?;
            Ok((idx, TiebreakKey::Date(date.date), format!("effective date {date}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(group(corpus, TiebreakMethod::Chronology, keyed))
}

pub fn tiebreak_trajectory(
    corpus: &Corpus,
    candidates: &[PaperIdx],
    early: YearWindow,
    late: YearWindow,
) -> Result<TiebreakOrder> {
    let method = TiebreakMethod::Trajectory { early, late };
    method.validate()?;
    if !corpus.has_edges() {
        return Err(Error::EdgesUnavailable("the trajectory tie-break"));
    }
    let keyed = candidates
        .iter()
        .map(|&idx| {
            let year = corpus.paper(idx).year;
            let (mut e, mut l) = (0u64, 0u64);
            for (citing, date) in corpus.citing(idx) {
                let date = date.ok_or_else(|| Error::UndatedEdge {
                    citing: corpus.paper(citing).id.clone(),
                    cited: corpus.paper(idx).id.clone(),
                })?;
                let offset = date.year() - year;
                if early.contains(offset) {
                    e += 1;
                } else if late.contains(offset) {
                    l += 1;
                }
            }
            let ratio = ExtRatio::of(l, e);
            let evidence = format!("late/early {l}/{e} = {ratio}");
            Ok((idx, TiebreakKey::Ratio(ratio), evidence))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(group(corpus, method, keyed))
}

pub fn tiebreak_citing_excellence(
    corpus: &Corpus,
    candidates: &[PaperIdx],
    provisional: &HashSet<PaperIdx>,
) -> Result<TiebreakOrder> {
    if !corpus.has_edges() {
        return Err(Error::EdgesUnavailable("the citing-excellence tie-break"));
    }
    let keyed = candidates
        .iter()
        .map(|&idx| {
            let n = corpus.citing(idx).filter(|(c, _)| provisional.contains(c)).count() as u64;
            (idx, TiebreakKey::Count(n), format!("{n} highly cited citing papers"))
        })
        .collect();
    Ok(group(corpus, TiebreakMethod::CitingExcellence, keyed))
}

pub fn tiebreak_order(
    corpus: &Corpus,
    candidates: &[PaperIdx],
    method: TiebreakMethod,
    ctx: &TiebreakContext,
) -> Result<TiebreakOrder> {
    match method {
        TiebreakMethod::Chronology => tiebreak_chronology(corpus, candidates),
        TiebreakMethod::Trajectory { early, late } => tiebreak_trajectory(corpus, candidates, early, late),
        TiebreakMethod::CitingExcellence => {
            let provisional = ctx
                .provisional
                .as_ref()
                .ok_or_else(|| Error::Config("citing excellence needs a provisional highly-cited set".into()))?;
            tiebreak_citing_excellence(corpus, candidates, provisional)
        }
    }
}

/// Picks exactly `quota` highly cited papers: everything above the threshold
/// plus the best borderline papers under the chain.
pub fn select_quota(
    corpus: &Corpus,
    papers: &[PaperIdx],
    threshold: &ThresholdResult,
    chain: &[TiebreakMethod],
    config: &ExcellenceConfig,
    ctx: &TiebreakContext,
) -> Result<CellOutcome> {
    for m in chain {
        m.validate()?;
    }
    let cell = &threshold.cell;
    let t = threshold.threshold.ok_or(Error::ZeroQuota)?;
    if config.esi_low_threshold && t <= LOW_THRESHOLD_LIMIT {
        let decisions =
            papers.iter().map(|&i| HcpDecision::plain(corpus, i, cell, HcpStatus::None, "esi_low_threshold")).collect();
        return Ok(CellOutcome { threshold: threshold.clone(), decisions, fallback_used: false });
    }

    let mut decisions = Vec::with_capacity(papers.len());
    let mut borderline = Vec::new();
    for &i in papers {
        let c = paper_citations(corpus, i, config.window)?;
        if c > t {
            decisions.push(HcpDecision::plain(corpus, i, cell, HcpStatus::Full, "above_threshold"));
        } else if c < t {
            decisions.push(HcpDecision::plain(corpus, i, cell, HcpStatus::None, "below_threshold"));
        } else {
            borderline.push(i);
        }
    }
    by_id(corpus, &mut borderline);

    let mut need = threshold.quota as usize - threshold.above_count;
    if need == borderline.len() {
        for &i in &borderline {
            decisions.push(HcpDecision::plain(corpus, i, cell, HcpStatus::Full, "at_threshold"));
        }
        return Ok(CellOutcome { threshold: threshold.clone(), decisions, fallback_used: false });
    }

    let mut traces: BTreeMap<PaperIdx, Vec<TraceStep>> = borderline.iter().map(|&i| (i, Vec::new())).collect();
    let mut chosen: HashSet<PaperIdx> = HashSet::new();
    let mut pool = borderline.clone();
    for &method in chain {
        if need == 0 {
            break;
        }
        let order = tiebreak_order(corpus, &pool, method, ctx)?;
        let mut straddling = Vec::new();
        for g in &order.groups {
            let outcome = if need == 0 || !straddling.is_empty() {
                StepOutcome::Rejected
            } else if g.papers.len() <= need {
                need -= g.papers.len();
                chosen.extend(g.papers.iter().copied());
                StepOutcome::Selected
            } else {
                straddling = g.papers.clone();
                StepOutcome::Unresolved
            };
            for &p in &g.papers {
                traces.get_mut(&p).expect("borderline").push(TraceStep {
                    method: method.name().to_string(),
                    evidence: order.evidence[&p].clone(),
                    outcome,
                });
            }
        }
        pool = straddling;
    }

    let fallback_used = need > 0;
    if fallback_used {
        for (k, &p) in pool.iter().enumerate() {
            let outcome = if k < need { StepOutcome::Selected } else { StepOutcome::Rejected };
            if k < need {
                chosen.insert(p);
            }
            traces.get_mut(&p).expect("borderline").push(TraceStep {
                method: "paper_id_fallback".into(),
                evidence: "FLAG: tie unresolved by every method; ordered by paper id".into(),
                outcome,
            });
        }
    }

    for (p, trace) in traces {
        let status = if chosen.contains(&p) { HcpStatus::Full } else { HcpStatus::None };
        let method = trace.last().map_or("unresolved".to_string(), |s| s.method.clone());
        let mut d = HcpDecision::plain(corpus, p, cell, status, &method);
        d.trace = Some(trace);
        decisions.push(d);
    }
    debug_assert_eq!(
        decisions.iter().filter(|d| d.status.is_hcp()).count() as u64,
        threshold.quota,
        "quota selection must be exact"
    );
    Ok(CellOutcome { threshold: threshold.clone(), decisions, fallback_used })
}
