//! Journals, papers, entities and dated citation edges.
//!
//! A [`Corpus`] is immutable once built; every indicator in this crate is a
//! pure function over it. Citation counts are edge in-degrees unless the
//! corpus was built from a precomputed count column (see
//! [`CorpusBuilder::count_only`]).

mod io;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use io::{load_corpus, write_jsonl, CorpusPaths};
pub use validate::{validate, Check, Finding, Severity, ValidationReport};

/// Load-time findings share the validation report shape.
pub type LoadReport = ValidationReport;

pub type PaperIdx = usize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    /// Any violation aborts the load.
    #[default]
    Strict,
    /// Rows failing soft checks are dropped and counted.
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocType {
    Article,
    Review,
    Proceedings,
    Letter,
    Editorial,
    Other(String),
}

impl FromStr for DocType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "" => return Err(Error::Invalid("empty doc_type".into())),
            "article" => DocType::Article,
            "review" => DocType::Review,
            "proceedings" | "proceedings paper" => DocType::Proceedings,
            "letter" => DocType::Letter,
            "editorial" | "editorial material" => DocType::Editorial,
            _ => DocType::Other(norm),
        })
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocType::Article => f.write_str("article"),
            DocType::Review => f.write_str("review"),
            DocType::Proceedings => f.write_str("proceedings"),
            DocType::Letter => f.write_str("letter"),
            DocType::Editorial => f.write_str("editorial"),
            DocType::Other(s) => f.write_str(s),
        }
    }
}

impl Serialize for DocType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DocType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatePrecision {
    Day,
    Month,
}

/// A calendar date that may only be known to the month (stored as day 01).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PaperDate {
    pub date: NaiveDate,
    pub precision: DatePrecision,
}

impl PaperDate {
    pub fn day(date: NaiveDate) -> Self {
        PaperDate { date, precision: DatePrecision::Day }
    }

    pub fn month(year: i32, month: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, 1).map(|date| PaperDate { date, precision: DatePrecision::Month })
    }

    /// Accepts `YYYY-MM-DD` (day precision) or `YYYY-MM` (month precision).
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Ok(date) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
            return Some(PaperDate::day(date));
        }
        let (y, m) = text.split_once('-')?;
        if y.len() != 4 || m.len() != 2 {
            return None;
        }
        PaperDate::month(y.parse().ok()?, m.parse().ok()?)
    }
}

impl fmt::Display for PaperDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.precision {
            DatePrecision::Day => write!(f, "{}", self.date.format("%Y-%m-%d")),
            DatePrecision::Month => write!(f, "{}", self.date.format("%Y-%m")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaInfo {
    pub single_attribution: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Journal {
    pub id: String,
    /// schema name -> category ids
    pub categories: BTreeMap<String, Vec<String>>,
    /// year -> externally supplied journal metric
    pub metrics: BTreeMap<i32, f64>,
}

impl Journal {
    pub fn new(id: impl Into<String>) -> Self {
        Journal { id: id.into(), ..Default::default() }
    }

    pub fn with_categories<I, S>(mut self, schema: &str, categories: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.categories.insert(schema.to_string(), categories.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_metric(mut self, year: i32, metric: f64) -> Self {
        self.metrics.insert(year, metric);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorCredit {
    pub key: String,
    #[serde(default)]
    pub entities: Vec<String>,
}

impl AuthorCredit {
    pub fn new<I, S>(key: impl Into<String>, entities: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AuthorCredit { key: key.into(), entities: entities.into_iter().map(Into::into).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Paper {
    pub id: String,
    pub journal: String,
    pub year: i32,
    pub doc_type: DocType,
    pub online_date: Option<NaiveDate>,
    pub pub_date: Option<PaperDate>,
    pub authors: Vec<AuthorCredit>,
    pub pages: Option<u32>,
    /// Precomputed citation count, used when no edge file is supplied.
    pub citations: Option<u64>,
}

impl Paper {
    pub fn new(id: impl Into<String>, journal: impl Into<String>, year: i32) -> Self {
        Paper {
            id: id.into(),
            journal: journal.into(),
            year,
            doc_type: DocType::Article,
            online_date: None,
            pub_date: None,
            authors: Vec::new(),
            pages: None,
            citations: None,
        }
    }

    pub fn with_doc_type(mut self, doc_type: DocType) -> Self {
        self.doc_type = doc_type;
        self
    }

    pub fn with_online_date(mut self, date: NaiveDate) -> Self {
        self.online_date = Some(date);
        self
    }

    pub fn with_pub_date(mut self, date: PaperDate) -> Self {
        self.pub_date = Some(date);
        self
    }

    pub fn with_author(mut self, author: AuthorCredit) -> Self {
        self.authors.push(author);
        self
    }

    pub fn with_citations(mut self, citations: u64) -> Self {
        self.citations = Some(citations);
        self
    }

    /// Online date if present, else the issue date at whatever precision it has.
    pub fn effective_date(&self) -> Option<PaperDate> {
        self.online_date.map(PaperDate::day).or(self.pub_date)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationEdge {
    pub citing: String,
    pub cited: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
}

impl CitationEdge {
    pub fn new(citing: impl Into<String>, cited: impl Into<String>) -> Self {
        CitationEdge { citing: citing.into(), cited: cited.into(), date: None }
    }

    pub fn dated(mut self, date: NaiveDate) -> Self {
        self.date = Some(date);
        self
    }
}

/// One (field, year, document type) slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub field: String,
    pub year: i32,
    pub doc_type: DocType,
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.field, self.year, self.doc_type)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ResolvedEdge {
    pub citing: PaperIdx,
    pub cited: PaperIdx,
    pub date: Option<NaiveDate>,
}

/// Where a record came from, for diagnostics.
#[derive(Clone, Debug)]
pub(crate) struct Origin {
    pub file: String,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    schemas: BTreeMap<String, SchemaInfo>,
    journals: Vec<Journal>,
    journal_index: HashMap<String, usize>,
    papers: Vec<Paper>,
    paper_index: HashMap<String, PaperIdx>,
    paper_journal: Vec<usize>,
    edges: Vec<ResolvedEdge>,
    citations: Vec<u64>,
    cited_by: Vec<Vec<usize>>,
    has_edges: bool,
    load_report: LoadReport,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.schemas == other.schemas
            && self.journals == other.journals
            && self.papers == other.papers
            && self.has_edges == other.has_edges
            && self.citations == other.citations
            && self.edge_records().eq(other.edge_records())
    }
}

impl Corpus {
    pub fn builder() -> CorpusBuilder {
        CorpusBuilder::default()
    }

    pub fn schemas(&self) -> &BTreeMap<String, SchemaInfo> {
        &self.schemas
    }

    pub fn schema(&self, name: &str) -> Result<SchemaInfo> {
        self.schemas.get(name).copied().ok_or_else(|| Error::UnknownSchema(name.to_string()))
    }

    pub fn journals(&self) -> &[Journal] {
        &self.journals
    }

    pub fn journal(&self, id: &str) -> Option<&Journal> {
        self.journal_index.get(id).map(|&i| &self.journals[i])
    }

    pub fn papers(&self) -> &[Paper] {
        &self.papers
    }

    pub fn paper(&self, idx: PaperIdx) -> &Paper {
        &self.papers[idx]
    }

    pub fn paper_idx(&self, id: &str) -> Option<PaperIdx> {
        self.paper_index.get(id).copied()
    }

    pub fn paper_journal(&self, idx: PaperIdx) -> &Journal {
        &self.journals[self.paper_journal[idx]]
    }

    pub fn num_papers(&self) -> usize {
        self.papers.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Whether citation counts come from edge-level data.
    pub fn has_edges(&self) -> bool {
        self.has_edges
    }

    /// Citation count c of a paper.
    pub fn citations(&self, idx: PaperIdx) -> u64 {
        self.citations[idx]
    }

    /// Papers citing `idx`, with the citation date when known.
    pub fn citing(&self, idx: PaperIdx) -> impl Iterator<Item = (PaperIdx, Option<NaiveDate>)> + '_ {
        self.cited_by[idx].iter().map(|&e| (self.edges[e].citing, self.edges[e].date))
    }

    pub fn edge_records(&self) -> impl Iterator<Item = CitationEdge> + '_ {
        self.edges.iter().map(|e| CitationEdge {
            citing: self.papers[e.citing].id.clone(),
            cited: self.papers[e.cited].id.clone(),
            date: e.date,
        })
    }

    pub fn load_report(&self) -> &LoadReport {
        &self.load_report
    }

    /// Categories of the paper's journal under `schema`; empty if unclassified.
    pub fn categories(&self, idx: PaperIdx, schema: &str) -> &[String] {
        self.paper_journal(idx).categories.get(schema).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All category ids used under `schema`, sorted.
    pub fn category_ids(&self, schema: &str) -> Vec<String> {
        let set: BTreeSet<&String> = self.journals.iter().filter_map(|j| j.categories.get(schema)).flatten().collect();
        set.into_iter().cloned().collect()
    }

    /// Papers grouped by (field, year, doc type) cell. A paper appears in one
    /// cell per category of its journal.
    pub fn cells(&self, schema: &str) -> Result<BTreeMap<CellKey, Vec<PaperIdx>>> {
        self.cells_of(schema, 0..self.papers.len())
    }

    pub fn cells_of(
        &self,
        schema: &str,
        papers: impl IntoIterator<Item = PaperIdx>,
    ) -> Result<BTreeMap<CellKey, Vec<PaperIdx>>> {
        self.schema(schema)?;
        let mut cells: BTreeMap<CellKey, Vec<PaperIdx>> = BTreeMap::new();
        for idx in papers {
            let paper = &self.papers[idx];
            for field in self.categories(idx, schema) {
                cells.entry(self.cell_key(field, paper)).or_default().push(idx);
            }
        }
        Ok(cells)
    }

    pub fn cell_key(&self, field: &str, paper: &Paper) -> CellKey {
        CellKey { field: field.to_string(), year: paper.year, doc_type: paper.doc_type.clone() }
    }

    /// Papers with at least one author affiliated with `entity`.
    pub fn entity_papers(&self, entity: &str) -> Vec<PaperIdx> {
        (0..self.papers.len())
            .filter(|&i| self.papers[i].authors.iter().any(|a| a.entities.iter().any(|e| e == entity)))
            .collect()
    }

    pub fn entities(&self) -> BTreeSet<String> {
        self.papers.iter().flat_map(|p| p.authors.iter().flat_map(|a| a.entities.iter().cloned())).collect()
    }

    /// Fractional credit of `entity` for a paper: each of the A authors holds
    /// 1/A, split evenly across that author's affiliations.
    pub fn attribution(&self, idx: PaperIdx, entity: &str) -> Result<Rational> {
        let paper = &self.papers[idx];
        if paper.authors.is_empty() {
            return Err(Error::AnonymousPaper(paper.id.clone()));
        }
        let author_count = paper.authors.len() as i64;
        let mut total = rational::int(0);
        for author in &paper.authors {
            if author.entities.iter().any(|e| e == entity) {
                total += rational::ratio(1, author_count * author.entities.len().max(1) as i64);
            }
        }
        Ok(total)
    }

    /// Classic two-year impact factor: citations made in `year` to the
    /// journal's items of the two preceding years, over the item count. The
    /// citation year is the edge date's year, else the citing paper's year.
    pub fn two_year_impact_factor(&self, journal: &str, year: i32) -> Result<Option<Rational>> {
        if !self.has_edges {
            return Err(Error::EdgesUnavailable("the two-year impact factor"));
        }
        let jidx =
            *self.journal_index.get(journal).ok_or_else(|| Error::Invalid(format!("unknown journal `{journal}`")))?;
        let items: Vec<PaperIdx> = (0..self.papers.len())
            .filter(|&i| {
                self.paper_journal[i] == jidx && (self.papers[i].year == year - 1 || self.papers[i].year == year - 2)
            })
            .collect();
        if items.is_empty() {
            return Ok(None);
        }
        let cites = items
            .iter()
            .flat_map(|&i| self.citing(i))
            .filter(|&(citing, date)| date.map(|d| d.year()).unwrap_or(self.papers[citing].year) == year)
            .count();
        Ok(Some(rational::ratio(cites as i64, items.len() as i64)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusBuilder {
    schemas: BTreeMap<String, SchemaInfo>,
    journals: Vec<(Journal, Option<Origin>)>,
    papers: Vec<(Paper, Option<Origin>)>,
    edges: Vec<(CitationEdge, Option<Origin>)>,
    count_only: bool,
}

impl CorpusBuilder {
    pub fn schema(mut self, name: &str, single_attribution: bool) -> Self {
        self.add_schema(name, SchemaInfo { single_attribution });
        self
    }

    pub fn journal(mut self, journal: Journal) -> Self {
        self.journals.push((journal, None));
        self
    }

    pub fn paper(mut self, paper: Paper) -> Self {
        self.papers.push((paper, None));
        self
    }

    pub fn edge(mut self, edge: CitationEdge) -> Self {
        self.edges.push((edge, None));
        self
    }

    /// Citation counts come from each paper's `citations` field; methods that
    /// need edge-level data will refuse to run.
    pub fn count_only(mut self) -> Self {
        self.count_only = true;
        self
    }

    pub fn add_schema(&mut self, name: &str, info: SchemaInfo) {
        self.schemas.insert(name.to_string(), info);
    }

    pub fn add_journal(&mut self, journal: Journal) {
        self.journals.push((journal, None));
    }

    pub fn add_paper(&mut self, paper: Paper) {
        self.papers.push((paper, None));
    }

    pub fn add_edge(&mut self, edge: CitationEdge) {
        self.edges.push((edge, None));
    }

    pub(crate) fn push_journal_at(&mut self, journal: Journal, origin: Origin) {
        self.journals.push((journal, Some(origin)));
    }

    pub(crate) fn push_paper_at(&mut self, paper: Paper, origin: Origin) {
        self.papers.push((paper, Some(origin)));
    }

    pub(crate) fn push_edge_at(&mut self, edge: CitationEdge, origin: Origin) {
        self.edges.push((edge, Some(origin)));
    }

    pub(crate) fn set_count_only(&mut self, count_only: bool) {
        self.count_only = count_only;
    }

    pub fn build(self, strictness: Strictness) -> Result<Corpus> {
        let strict = strictness == Strictness::Strict;
        let mut report = ValidationReport::default();
        let origin_of = |origin: &Option<Origin>, kind: &str, pos: usize| match origin {
            Some(o) => (o.file.clone(), o.line),
            None => (format!("<{kind}>"), pos + 1),
        };

        let mut journals = Vec::with_capacity(self.journals.len());
        let mut journal_index = HashMap::new();
        for (pos, (mut journal, origin)) in self.journals.into_iter().enumerate() {
            if journal_index.contains_key(&journal.id) {
                return Err(Error::DuplicateId { kind: "journal", id: journal.id });
            }
            for (year, metric) in &journal.metrics {
                if !metric.is_finite() || *metric < 0.0 {
                    let (file, line) = origin_of(&origin, "journals", pos);
                    return Err(Error::Parse {
                        file,
                        line,
                        message: format!("journal `{}` metric for {year} must be a non-negative number", journal.id),
                    });
                }
            }
            let mut empty = Vec::new();
            for (schema, cats) in journal.categories.iter_mut() {
                if !self.schemas.contains_key(schema) {
                    return Err(Error::UnknownSchema(schema.clone()));
                }
                let mut seen = BTreeSet::new();
                cats.retain(|c| seen.insert(c.clone()));
                if cats.is_empty() {
                    empty.push(schema.clone());
                }
            }
            for schema in empty {
                if strict {
                    let (file, line) = origin_of(&origin, "journals", pos);
                    return Err(Error::Invalid(format!(
                        "{file}:{line}: journal `{}` has an empty category list under `{schema}`",
                        journal.id
                    )));
                }
                journal.categories.remove(&schema);
                report.record(Check::EmptyCategoryList, &journal.id);
            }
            if strict {
                if let Some(schema) = single_attribution_violation(&journal, &self.schemas) {
                    let (file, line) = origin_of(&origin, "journals", pos);
                    return Err(Error::Invalid(format!(
                        "{file}:{line}: journal `{}` lists several categories under single-attribution schema `{schema}`",
                        journal.id
                    )));
                }
            }
            journal_index.insert(journal.id.clone(), journals.len());
            journals.push(journal);
        }

        let mut papers = Vec::with_capacity(self.papers.len());
        let mut paper_index = HashMap::new();
        let mut paper_journal = Vec::with_capacity(self.papers.len());
        for (pos, (mut paper, origin)) in self.papers.into_iter().enumerate() {
            if paper_index.contains_key(&paper.id) {
                return Err(Error::DuplicateId { kind: "paper", id: paper.id });
            }
            let Some(&jidx) = journal_index.get(&paper.journal) else {
                if strict {
                    let (file, line) = origin_of(&origin, "papers", pos);
                    return Err(Error::UnresolvedReference {
                        file,
                        line,
                        message: format!("paper `{}` references unknown journal `{}`", paper.id, paper.journal),
                    });
                }
                report.record(Check::UnresolvedJournal, &paper.id);
                continue;
            };
            if self.count_only && paper.citations.is_none() {
                if strict {
                    let (file, line) = origin_of(&origin, "papers", pos);
                    return Err(Error::Invalid(format!(
                        "{file}:{line}: paper `{}` has no citation count and no edge file was given",
                        paper.id
                    )));
                }
                report.record(Check::MissingCitationCount, &paper.id);
                paper.citations = Some(0);
            }
            for author in &mut paper.authors {
                let mut seen = BTreeSet::new();
                author.entities.retain(|e| seen.insert(e.clone()));
            }
            paper_index.insert(paper.id.clone(), papers.len());
            paper_journal.push(jidx);
            papers.push(paper);
        }

        let mut edges = Vec::new();
        let mut seen_pairs = HashMap::new();
        if !self.count_only {
            for (pos, (edge, origin)) in self.edges.into_iter().enumerate() {
                let label = format!("{}->{}", edge.citing, edge.cited);
                if edge.citing == edge.cited {
                    if strict {
                        let (file, line) = origin_of(&origin, "edges", pos);
                        return Err(Error::UnresolvedReference {
                            file,
                            line,
                            message: format!("self-citation edge `{label}`"),
                        });
                    }
                    report.record(Check::SelfLoop, &label);
                    continue;
                }
                let (Some(&citing), Some(&cited)) = (paper_index.get(&edge.citing), paper_index.get(&edge.cited))
                else {
                    if strict {
                        let (file, line) = origin_of(&origin, "edges", pos);
                        let missing = if paper_index.contains_key(&edge.citing) { &edge.cited } else { &edge.citing };
                        return Err(Error::UnresolvedReference {
                            file,
                            line,
                            message: format!("edge `{label}` references unknown paper `{missing}`"),
                        });
                    }
                    report.record(Check::UnresolvedEdgeEndpoint, &label);
                    continue;
                };
                if seen_pairs.insert((citing, cited), edges.len()).is_some() {
                    report.record(Check::DuplicateEdge, &label);
                    continue;
                }
                edges.push(ResolvedEdge { citing, cited, date: edge.date });
            }
        }

        let mut citations = vec![0u64; papers.len()];
        let mut cited_by = vec![Vec::new(); papers.len()];
        if self.count_only {
            for (i, p) in papers.iter().enumerate() {
                citations[i] = p.citations.unwrap_or(0);
            }
        } else {
            for (e, edge) in edges.iter().enumerate() {
                citations[edge.cited] += 1;
                cited_by[edge.cited].push(e);
            }
            for (i, p) in papers.iter().enumerate() {
                if p.citations.is_some_and(|c| c != citations[i]) {
                    report.record(Check::CitationCountMismatch, &p.id);
                }
            }
        }

        Ok(Corpus {
            schemas: self.schemas,
            journals,
            journal_index,
            papers,
            paper_index,
            paper_journal,
            edges,
            citations,
            cited_by,
            has_edges: !self.count_only,
            load_report: report,
        })
    }
}

pub(crate) fn single_attribution_violation(
    journal: &Journal,
    schemas: &BTreeMap<String, SchemaInfo>,
) -> Option<String> {
    journal
        .categories
        .iter()
        .find(|(schema, cats)| cats.len() > 1 && schemas.get(*schema).is_some_and(|s| s.single_attribution))
        .map(|(schema, _)| schema.clone())
}
