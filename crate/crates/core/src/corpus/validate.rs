use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{single_attribution_violation, Corpus, DatePrecision, Paper};

/// How many offending ids a finding keeps.
pub const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    UnresolvedJournal,
    UnresolvedEdgeEndpoint,
    SelfLoop,
    EmptyCategoryList,
    SingleAttribution,
    MissingCitationCount,
    CitationIndex,
    DuplicateEdge,
    DateOrder,
    CitationCountMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl Check {
    pub fn severity(self) -> Severity {
        match self {
            Check::DuplicateEdge | Check::DateOrder | Check::CitationCountMismatch => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Check::UnresolvedJournal => "paper dropped: journal does not resolve",
            Check::UnresolvedEdgeEndpoint => "edge dropped: endpoint does not resolve",
            Check::SelfLoop => "edge dropped: self-citation loop",
            Check::EmptyCategoryList => "journal schema entry dropped: empty category list",
            Check::SingleAttribution => "journal has several categories under a single-attribution schema",
            Check::MissingCitationCount => "paper has no citation count (treated as 0)",
            Check::CitationIndex => "derived citation count differs from edge in-degree",
            Check::DuplicateEdge => "duplicate citation edge collapsed",
            Check::DateOrder => "online date falls after the issue date",
            Check::CitationCountMismatch => "supplied citation count disagrees with edge in-degree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check: Check,
    pub severity: Severity,
    pub description: String,
    pub count: usize,
    pub examples: Vec<String>,
}

/// Per-invariant violation counts with the first few offending ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    findings: BTreeMap<Check, Finding>,
}

impl ValidationReport {
    pub fn record(&mut self, check: Check, id: &str) {
        let finding = self.findings.entry(check).or_insert_with(|| Finding {
            check,
            severity: check.severity(),
            description: check.describe().to_string(),
            count: 0,
            examples: Vec::new(),
        });
        finding.count += 1;
        if finding.examples.len() < MAX_EXAMPLES {
            finding.examples.push(id.to_string());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.values().any(|f| f.severity == Severity::Error)
    }

    pub fn count(&self, check: Check) -> usize {
        self.findings.get(&check).map_or(0, |f| f.count)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.values()
    }

    fn merge(&mut self, other: &ValidationReport) {
        for (check, finding) in &other.findings {
            let entry = self.findings.entry(*check).or_insert_with(|| Finding {
                examples: Vec::new(),
                count: 0,
                ..finding.clone()
            });
            entry.count += finding.count;
            for ex in &finding.examples {
                if entry.examples.len() < MAX_EXAMPLES {
                    entry.examples.push(ex.clone());
                }
            }
        }
    }
}

impl Serialize for ValidationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            valid: bool,
            findings: Vec<&'a Finding>,
        }
        Out { valid: !self.has_errors(), findings: self.findings.values().collect() }.serialize(s)
    }
}

fn online_after_issue(paper: &Paper) -> bool {
    let (Some(online), Some(issue)) = (paper.online_date, paper.pub_date) else {
        return false;
    };
    match issue.precision {
        DatePrecision::Day => online > issue.date,
        DatePrecision::Month => {
            use chrono::Datelike;
            (online.year(), online.month()) > (issue.date.year(), issue.date.month())
        }
    }
}

/// Ingestion findings plus a fresh pass over every corpus invariant. The
/// report is empty iff nothing was dropped or collapsed at load time and the
/// corpus satisfies all invariants.
pub fn validate(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.merge(corpus.load_report());

    for journal in corpus.journals() {
        if single_attribution_violation(journal, corpus.schemas()).is_some() {
            report.record(Check::SingleAttribution, &journal.id);
        }
    }
    for paper in corpus.papers() {
        if online_after_issue(paper) {
            report.record(Check::DateOrder, &paper.id);
        }
    }
    if corpus.has_edges() {
        let mut in_degree = vec![0u64; corpus.num_papers()];
        for edge in &corpus.edges {
            in_degree[edge.cited] += 1;
        }
        for (idx, &count) in in_degree.iter().enumerate() {
            if corpus.citations(idx) != count {
                report.record(Check::CitationIndex, &corpus.paper(idx).id);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::corpus::{CitationEdge, Journal, Paper, PaperDate, Strictness};
    use crate::fixtures;

    #[test]
    fn two_fields_is_clean() {
        assert!(validate(&fixtures::two_fields(1, 2)).is_empty());
    }

    #[test]
    fn duplicate_edge_is_collapsed_and_reported() {
        let corpus = Corpus::builder()
            .schema("wos", false)
            .journal(Journal::new("J").with_categories("wos", ["A"]))
            .paper(Paper::new("P1", "J", 2020))
            .paper(Paper::new("P2", "J", 2020))
            .edge(CitationEdge::new("P1", "P2"))
            .edge(CitationEdge::new("P1", "P2"))
            .build(Strictness::Strict)
            .unwrap();
        assert_eq!(corpus.citations(1), 1);
        let report = validate(&corpus);
        assert_eq!(report.count(Check::DuplicateEdge), 1);
        assert!(!report.has_errors());
    }

    #[test]
    fn single_attribution_violation_is_flagged() {
        let corpus = Corpus::builder()
            .schema("esi", true)
            .journal(Journal::new("J").with_categories("esi", ["Math", "Physics"]))
            .build(Strictness::Lenient)
            .unwrap();
        let report = validate(&corpus);
        assert_eq!(report.count(Check::SingleAttribution), 1);
        assert!(report.has_errors());

        let strict = Corpus::builder()
            .schema("esi", true)
            .journal(Journal::new("J").with_categories("esi", ["Math", "Physics"]))
            .build(Strictness::Strict);
        assert!(strict.is_err());
    }

    #[test]
    fn online_after_issue_is_a_warning() {
        let corpus = Corpus::builder()
            .schema("wos", false)
            .journal(Journal::new("J").with_categories("wos", ["A"]))
            .paper(
                Paper::new("P", "J", 2011)
                    .with_online_date(NaiveDate::from_ymd_opt(2011, 10, 2).unwrap())
                    .with_pub_date(PaperDate::month(2011, 9).unwrap()),
            )
            .paper(
                Paper::new("Q", "J", 2011)
                    .with_online_date(NaiveDate::from_ymd_opt(2011, 9, 30).unwrap())
                    .with_pub_date(PaperDate::month(2011, 9).unwrap()),
            )
            .build(Strictness::Strict)
            .unwrap();
        let report = validate(&corpus);
        assert_eq!(report.count(Check::DateOrder), 1);
        assert!(!report.has_errors());
    }

    #[test]
    fn examples_are_capped() {
        let mut report = ValidationReport::default();
        for i in 0..12 {
            report.record(Check::SelfLoop, &format!("e{i}"));
        }
        let f = report.findings().next().unwrap();
        assert_eq!(f.count, 12);
        assert_eq!(f.examples.len(), MAX_EXAMPLES);
    }
}
