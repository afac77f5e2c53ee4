//! Expected-citation baselines and category-normalized citation impact.
//!
//! A paper whose journal carries k categories sits in k cells. Under whole
//! counting it contributes weight 1 and all c citations to each; under
//! fractional counting weight 1/k and c/k citations. The baseline of a cell
//! is observed citations over weight.
//!
//! Per-paper CNCI averages c / e over the paper's k cells; a set's CNCI is the
//! unweighted mean of its papers' values (average of ratios). The legacy
//! ratio of averages divides summed observed citations by summed expectations.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{CellKey, Corpus, PaperIdx};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Counting {
    #[default]
    Whole,
    Fractional,
}

impl fmt::Display for Counting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Counting::Whole => "whole",
            Counting::Fractional => "fractional",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    AverageOfRatios,
    RatioOfAverages,
}

/// Value of c / e when a cell's baseline is zero (and so is c).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroBaseline {
    /// The paper sits exactly at its cell average.
    #[default]
    Unity,
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnciConfig {
    pub counting: Counting,
    pub aggregation: Aggregation,
    /// Whole-count papers but spread each paper's citations evenly over its
    /// fields. Ratio of averages only.
    pub split_citations: bool,
    pub zero_baseline: ZeroBaseline,
}

impl CnciConfig {
    pub fn new(counting: Counting, aggregation: Aggregation) -> Self {
        CnciConfig { counting, aggregation, ..Default::default() }
    }

    pub fn with_split_citations(mut self) -> Self {
        self.split_citations = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.split_citations && self.aggregation != Aggregation::RatioOfAverages {
            return Err(Error::Config("split-citations requires --aggregation roa".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineCell {
    /// Expected citations e of a paper in the cell.
    pub expected: Rational,
    /// Summed paper weight (paper count under whole counting).
    pub weight: Rational,
    /// Summed citation credit.
    pub observed: Rational,
    pub papers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineTable {
    pub schema: String,
    pub counting: Counting,
    pub split_citations: bool,
    pub cells: BTreeMap<CellKey, BaselineCell>,
}

impl BaselineTable {
    pub fn expected(&self, cell: &CellKey) -> Option<&Rational> {
        self.cells.get(cell).map(|c| &c.expected)
    }

    /// Label for the counting convention in exports.
    pub fn convention(&self) -> &'static str {
        match (self.counting, self.split_citations) {
            (Counting::Whole, false) => "whole",
            (Counting::Whole, true) => "whole-split",
            (Counting::Fractional, _) => "fractional",
        }
    }

    /// `schema,field,year,doc_type,counting,expected,weight` with exact
    /// `num/den` values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("schema,field,year,doc_type,counting,expected,weight\n");
        for (key, cell) in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&self.schema),
                csv_field(&key.field),
                key.year,
                csv_field(&key.doc_type.to_string()),
                self.convention(),
                rational::fraction_string(&cell.expected),
                rational::fraction_string(&cell.weight),
            ));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Baselines over the whole corpus.
pub fn compute_baselines(corpus: &Corpus, schema: &str, counting: Counting) -> Result<BaselineTable> {
    let all: Vec<PaperIdx> = (0..corpus.num_papers()).collect();
    compute_baselines_for(corpus, schema, &all, counting, false)
}

/// Baselines over a reference set of papers. With `split_citations` (whole
/// counting only) each paper is counted fully in every field but credits
/// only c/k citations to each.
pub fn compute_baselines_for(
    corpus: &Corpus,
    schema: &str,
    papers: &[PaperIdx],
    counting: Counting,
    split_citations: bool,
) -> Result<BaselineTable> {
    let grouped = corpus.cells_of(schema, papers.iter().copied())?;
    let cells = grouped
        .into_par_iter()
        .map(|(key, members)| {
            let mut weight = rational::int(0);
            let mut observed = rational::int(0);
            for &idx in &members {
                let k = corpus.categories(idx, schema).len() as i64;
                let c = corpus.citations(idx) as i64;
                let (w, q) = contribution(counting, split_citations, c, k);
                weight += w;
                observed += q;
            }
            let expected = &observed / &weight;
            (key, BaselineCell { expected, weight, observed, papers: members.len() })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(BaselineTable { schema: schema.to_string(), counting, split_citations, cells })
}

/// Per-(paper, field) (paper weight, citation credit).
fn contribution(counting: Counting, split_citations: bool, c: i64, k: i64) -> (Rational, Rational) {
    match (counting, split_citations) {
        (Counting::Whole, false) => (rational::int(1), rational::int(c)),
        (Counting::Whole, true) => (rational::int(1), rational::ratio(c, k)),
        (Counting::Fractional, _) => (rational::ratio(1, k), rational::ratio(c, k)),
    }
}

fn paper_cells(corpus: &Corpus, idx: PaperIdx, schema: &str) -> Result<Vec<CellKey>> {
    let fields = corpus.categories(idx, schema);
    if fields.is_empty() {
        return Err(Error::Unclassified(corpus.paper(idx).id.clone()));
    }
    let paper = corpus.paper(idx);
    Ok(fields.iter().map(|f| corpus.cell_key(f, paper)).collect())
}

fn baseline_for<'a>(baselines: &'a BaselineTable, key: &CellKey) -> Result<&'a Rational> {
    baselines.expected(key).ok_or_else(|| Error::MissingBaseline(key.to_string()))
}

/// CNCI of one paper: the mean over its k cells of c / e.
pub fn cnci_paper(corpus: &Corpus, idx: PaperIdx, baselines: &BaselineTable) -> Result<Rational> {
    cnci_paper_with(corpus, idx, baselines, ZeroBaseline::default())
}

pub fn cnci_paper_with(
    corpus: &Corpus,
    idx: PaperIdx,
    baselines: &BaselineTable,
    zero: ZeroBaseline,
) -> Result<Rational> {
    let cells = paper_cells(corpus, idx, &baselines.schema)?;
    let c = corpus.citations(idx);
    let cites = rational::from_u64(c);
    let mut sum = rational::int(0);
    for key in &cells {
        let e = baseline_for(baselines, key)?;
        if e.is_zero() {
            if c > 0 {
                return Err(Error::ZeroBaseline { cell: key.to_string(), citations: c });
            }
            if zero == ZeroBaseline::Unity {
                sum += Rational::one();
            }
        } else {
            sum += &cites / e;
        }
    }
    Ok(sum / rational::int(cells.len() as i64))
}

/// Unweighted mean of per-paper CNCI.
pub fn cnci_set(corpus: &Corpus, papers: &[PaperIdx], baselines: &BaselineTable) -> Result<Rational> {
    cnci_set_with(corpus, papers, baselines, ZeroBaseline::default())
}

pub fn cnci_set_with(
    corpus: &Corpus,
    papers: &[PaperIdx],
    baselines: &BaselineTable,
    zero: ZeroBaseline,
) -> Result<Rational> {
    if papers.is_empty() {
        return Err(Error::Empty("paper set"));
    }
    let values =
        papers.par_iter().map(|&idx| cnci_paper_with(corpus, idx, baselines, zero)).collect::<Result<Vec<_>>>()?;
    let sum = values.into_iter().fold(rational::int(0), |acc, v| acc + v);
    Ok(sum / rational::int(papers.len() as i64))
}

/// Summed observed over summed expected citations.
///
/// Each (paper, field) pair contributes under the table's convention: whole
/// counting adds c observed and e expected; whole counting with split
/// citations adds c/k and e; fractional counting adds c/k and e/k.
pub fn nci_ratio_of_averages(
    corpus: &Corpus,
    papers: &[PaperIdx],
    baselines: &BaselineTable,
    split_citations: bool,
) -> Result<Rational> {
    if papers.is_empty() {
        return Err(Error::Empty("paper set"));
    }
    if baselines.counting == Counting::Whole && baselines.split_citations != split_citations {
        return Err(Error::Config(format!(
            "baselines were built with split_citations={} but the ratio was requested with {split_citations}",
            baselines.split_citations
        )));
    }
    let mut observed = rational::int(0);
    let mut expected = rational::int(0);
    for &idx in papers {
        let cells = paper_cells(corpus, idx, &baselines.schema)?;
        let k = cells.len() as i64;
        let c = corpus.citations(idx) as i64;
        let (w, q) = contribution(baselines.counting, baselines.split_citations, c, k);
        for key in &cells {
            observed += &q;
            expected += &w * baseline_for(baselines, key)?;
        }
    }
    if expected.is_zero() {
        if observed.is_zero() {
            return Ok(Rational::one());
        }
        return Err(Error::ZeroBaseline { cell: "<total>".into(), citations: corpus_sum(corpus, papers) });
    }
    Ok(observed / expected)
}

fn corpus_sum(corpus: &Corpus, papers: &[PaperIdx]) -> u64 {
    papers.iter().map(|&i| corpus.citations(i)).sum()
}

/// Papers classified under `schema`.
pub fn classified_papers(corpus: &Corpus, schema: &str) -> Vec<PaperIdx> {
    (0..corpus.num_papers()).filter(|&i| !corpus.categories(i, schema).is_empty()).collect()
}

/// Indicator of `papers` against baselines computed over the whole corpus.
pub fn evaluate(corpus: &Corpus, schema: &str, papers: &[PaperIdx], config: &CnciConfig) -> Result<Rational> {
    config.validate()?;
    let all: Vec<PaperIdx> = (0..corpus.num_papers()).collect();
    let split = config.split_citations && config.counting == Counting::Whole;
    let baselines = compute_baselines_for(corpus, schema, &all, config.counting, split)?;
    match config.aggregation {
        Aggregation::AverageOfRatios => cnci_set_with(corpus, papers, &baselines, config.zero_baseline),
        Aggregation::RatioOfAverages => nci_ratio_of_averages(corpus, papers, &baselines, split),
    }
}

/// Global indicator: every classified paper against the corpus itself.
pub fn global_cnci(corpus: &Corpus, schema: &str, config: &CnciConfig) -> Result<Rational> {
    evaluate(corpus, schema, &classified_papers(corpus, schema), config)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeCnci {
    pub value: Rational,
    /// Subunit papers that are not part of the reference set.
    pub outside_reference: Vec<String>,
}

/// CNCI of a subunit against baselines built from a reference set rather
/// than the whole corpus (average of ratios).
pub fn relative_cnci(
    corpus: &Corpus,
    subunit: &[PaperIdx],
    reference: &[PaperIdx],
    schema: &str,
    counting: Counting,
) -> Result<RelativeCnci> {
    if subunit.is_empty() {
        return Err(Error::Empty("subunit"));
    }
    let baselines = compute_baselines_for(corpus, schema, reference, counting, false)?;
    let in_reference: HashSet<PaperIdx> = reference.iter().copied().collect();
    let outside_reference =
        subunit.iter().filter(|i| !in_reference.contains(i)).map(|&i| corpus.paper(i).id.clone()).collect();
    let value = cnci_set(corpus, subunit, &baselines)?;
    Ok(RelativeCnci { value, outside_reference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, FIELD_SCHEMA};
    use crate::rational::{int, ratio};

    fn ids(corpus: &Corpus, names: &[&str]) -> Vec<PaperIdx> {
        names.iter().map(|n| corpus.paper_idx(n).unwrap()).collect()
    }

    fn cell(field: &str) -> CellKey {
        CellKey { field: field.into(), year: 2020, doc_type: crate::DocType::Article }
    }

    #[test]
    fn two_fields_whole_baselines() {
        let corpus = fixtures::two_fields(1, 2);
        let b = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(b.expected(&cell("A")), Some(&ratio(3, 2)));
        assert_eq!(b.expected(&cell("B")), Some(&int(2)));
        assert_eq!(b.cells.len(), 2);
    }

    #[test]
    fn two_fields_fractional_baselines() {
        let corpus = fixtures::two_fields(1, 2);
        let b = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Fractional).unwrap();
        assert_eq!(b.expected(&cell("A")), Some(&ratio(4, 3)));
        assert_eq!(b.expected(&cell("B")), Some(&int(2)));
        assert_eq!(b.cells[&cell("A")].weight, ratio(3, 2));
    }

    #[test]
    fn two_fields_paper_cnci() {
        let corpus = fixtures::two_fields(1, 2);
        let [p1, p2] = ids(&corpus, &["P1", "P2"])[..] else { unreachable!() };
        let whole = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(cnci_paper(&corpus, p1, &whole).unwrap(), ratio(2, 3));
        assert_eq!(cnci_paper(&corpus, p2, &whole).unwrap(), ratio(7, 6));
        let frac = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Fractional).unwrap();
        assert_eq!(cnci_paper(&corpus, p1, &frac).unwrap(), ratio(3, 4));
        assert_eq!(cnci_paper(&corpus, p2, &frac).unwrap(), ratio(5, 4));
    }

    #[test]
    fn two_fields_global_values() {
        let world = fixtures::two_fields(1, 2);
        let papers = ids(&world, &["P1", "P2"]);
        let whole = compute_baselines(&world, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(cnci_set(&world, &papers, &whole).unwrap(), ratio(11, 12));
        let frac = compute_baselines(&world, FIELD_SCHEMA, Counting::Fractional).unwrap();
        assert_eq!(cnci_set(&world, &papers, &frac).unwrap(), int(1));

        let swapped = fixtures::two_fields(2, 1);
        let papers = ids(&swapped, &["P1", "P2"]);
        let whole = compute_baselines(&swapped, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(cnci_set(&swapped, &papers, &whole).unwrap(), ratio(13, 12));
    }

    #[test]
    fn two_fields_ratio_of_averages() {
        let world = fixtures::two_fields(1, 2);
        let papers = ids(&world, &["P1", "P2"]);
        let split = compute_baselines_for(&world, FIELD_SCHEMA, &papers, Counting::Whole, true).unwrap();
        assert_eq!(split.expected(&cell("A")), Some(&int(1)));
        assert_eq!(split.expected(&cell("B")), Some(&int(1)));
        assert_eq!(nci_ratio_of_averages(&world, &papers, &split, true).unwrap(), int(1));

        // Brute force, citations counted in full in every field:
        // observed 1 + 2 + 2 = 5, expected 3/2 + 3/2 + 2 = 5.
        let whole = compute_baselines(&world, FIELD_SCHEMA, Counting::Whole).unwrap();
        let observed: u64 =
            papers.iter().map(|&p| world.citations(p) * world.categories(p, FIELD_SCHEMA).len() as u64).sum();
        let mut expected = int(0);
        for &p in &papers {
            for f in world.categories(p, FIELD_SCHEMA) {
                expected += whole.expected(&cell(f)).unwrap();
            }
        }
        assert_eq!((observed, expected.clone()), (5, int(5)));
        assert_eq!(
            nci_ratio_of_averages(&world, &papers, &whole, false).unwrap(),
            rational::from_u64(observed) / expected
        );
        assert!(nci_ratio_of_averages(&world, &papers, &whole, true).is_err());
    }

    #[test]
    fn single_paper_ratio_is_c_over_e() {
        let corpus = fixtures::two_fields(1, 2);
        let p1 = ids(&corpus, &["P1"]);
        let whole = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(nci_ratio_of_averages(&corpus, &p1, &whole, false).unwrap(), ratio(2, 3));
        assert_eq!(cnci_set(&corpus, &p1, &whole).unwrap(), ratio(2, 3));
    }

    #[test]
    fn uncited_cell_and_zero_baseline_rules() {
        let corpus = fixtures::cell_with_counts("esi", "F", 2020, &[0]);
        let b = compute_baselines(&corpus, "esi", Counting::Whole).unwrap();
        let key = CellKey { field: "F".into(), year: 2020, doc_type: crate::DocType::Article };
        assert_eq!(b.expected(&key), Some(&int(0)));
        let idx = corpus.paper_idx("X000").unwrap();
        assert_eq!(cnci_paper(&corpus, idx, &b).unwrap(), int(1));
        assert_eq!(cnci_paper_with(&corpus, idx, &b, ZeroBaseline::Zero).unwrap(), int(0));

        // A cited paper against a zero baseline from a different reference set.
        let cited = fixtures::cell_with_counts("esi", "F", 2020, &[0, 3]);
        let reference = vec![cited.paper_idx("X000").unwrap()];
        let b = compute_baselines_for(&cited, "esi", &reference, Counting::Whole, false).unwrap();
        let err = cnci_paper(&cited, cited.paper_idx("X001").unwrap(), &b).unwrap_err();
        assert!(matches!(err, Error::ZeroBaseline { citations: 3, .. }));
    }

    #[test]
    fn equal_ratio_is_one() {
        let corpus = fixtures::cell_with_counts("esi", "F", 2020, &[4, 4]);
        let b = compute_baselines(&corpus, "esi", Counting::Whole).unwrap();
        assert_eq!(cnci_paper(&corpus, corpus.paper_idx("X000").unwrap(), &b).unwrap(), int(1));
    }

    #[test]
    fn empty_set_and_unclassified() {
        let corpus = fixtures::two_fields(1, 2);
        let b = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert!(matches!(cnci_set(&corpus, &[], &b), Err(Error::Empty(_))));
        let citer = corpus.paper_idx("C0000").unwrap();
        assert!(matches!(cnci_paper(&corpus, citer, &b), Err(Error::Unclassified(_))));
    }

    #[test]
    fn split_requires_roa() {
        let cfg = CnciConfig::new(Counting::Fractional, Aggregation::AverageOfRatios).with_split_citations();
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.to_string(), "invalid configuration: split-citations requires --aggregation roa");
    }

    #[test]
    fn global_cnci_regimes_on_two_fields() {
        let world = fixtures::two_fields(1, 2);
        let g = |cfg: CnciConfig| global_cnci(&world, FIELD_SCHEMA, &cfg).unwrap();
        assert_eq!(g(CnciConfig::new(Counting::Whole, Aggregation::AverageOfRatios)), ratio(11, 12));
        assert_eq!(g(CnciConfig::new(Counting::Fractional, Aggregation::AverageOfRatios)), int(1));
        assert_eq!(g(CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages).with_split_citations()), int(1));
        assert_eq!(g(CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages)), int(1));
        assert_eq!(g(CnciConfig::new(Counting::Fractional, Aggregation::RatioOfAverages)), int(1));
    }

    #[test]
    fn baseline_csv_export() {
        let world = fixtures::two_fields(1, 2);
        let b = compute_baselines(&world, FIELD_SCHEMA, Counting::Fractional).unwrap();
        assert_eq!(
            b.to_csv(),
            "schema,field,year,doc_type,counting,expected,weight\n\
             wos,A,2020,article,fractional,4/3,3/2\n\
             wos,B,2020,article,fractional,2/1,1/2\n"
        );
    }

    #[test]
    fn relative_cnci_against_self_is_one() {
        let corpus = fixtures::relative_reversal();
        let country = corpus.entity_papers(fixtures::REVERSAL_REFERENCE);
        let r = relative_cnci(&corpus, &country, &country, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(r.value, int(1));
        assert!(r.outside_reference.is_empty());
    }

    #[test]
    fn relative_cnci_against_world_matches_paper_cnci() {
        let world = fixtures::two_fields(1, 2);
        let all = classified_papers(&world, FIELD_SCHEMA);
        let p1 = ids(&world, &["P1"]);
        let r = relative_cnci(&world, &p1, &all, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(r.value, ratio(2, 3));
    }

    #[test]
    fn relative_cnci_reports_missing_cells_and_outsiders() {
        let corpus = fixtures::relative_reversal();
        let chem_ref = ids(&corpus, &["R1", "R2"]);
        let med = ids(&corpus, &["R3"]);
        assert!(matches!(
            relative_cnci(&corpus, &med, &chem_ref, FIELD_SCHEMA, Counting::Whole),
            Err(Error::MissingBaseline(_))
        ));
        let w1 = ids(&corpus, &["W1"]);
        let r = relative_cnci(&corpus, &w1, &chem_ref, FIELD_SCHEMA, Counting::Whole).unwrap();
        assert_eq!(r.outside_reference, vec!["W1".to_string()]);
        assert_eq!(r.value, ratio(10, 3));
    }

    #[test]
    fn uniform_scaling_leaves_cnci_unchanged() {
        let base = fixtures::cell_with_counts("esi", "F", 2020, &[1, 2, 5, 0]);
        let scaled = fixtures::cell_with_counts("esi", "F", 2020, &[3, 6, 15, 0]);
        let bb = compute_baselines(&base, "esi", Counting::Whole).unwrap();
        let bs = compute_baselines(&scaled, "esi", Counting::Whole).unwrap();
        let key = CellKey { field: "F".into(), year: 2020, doc_type: crate::DocType::Article };
        assert_eq!(bs.expected(&key).unwrap(), &(bb.expected(&key).unwrap() * int(3)));
        for i in 0..4 {
            let id = format!("X{i:03}");
            let (p, q) = (base.paper_idx(&id).unwrap(), scaled.paper_idx(&id).unwrap());
            assert_eq!(cnci_paper(&base, p, &bb).unwrap(), cnci_paper(&scaled, q, &bs).unwrap());
        }
    }

    #[test]
    fn directional_shift_in_two_field_family() {
        let cfg = CnciConfig::new(Counting::Whole, Aggregation::AverageOfRatios);
        for a in 0..6u64 {
            for b in 0..6u64 {
                if a + b == 0 {
                    continue;
                }
                let world = fixtures::two_fields(a, b);
                let g = global_cnci(&world, FIELD_SCHEMA, &cfg).unwrap();
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => assert!(g < int(1), "a={a} b={b}"),
                    std::cmp::Ordering::Greater => assert!(g > int(1), "a={a} b={b}"),
                    std::cmp::Ordering::Equal => assert_eq!(g, int(1)),
                }
            }
        }
    }

    fn random_corpus(journals: &[(u8, u8)], papers: &[(usize, u64, bool, bool)], single: bool) -> Corpus {
        let fields = ["A", "B", "C"];
        let mut b = Corpus::builder().schema("s", single);
        for (j, &(mask, first)) in journals.iter().enumerate() {
            let cats: Vec<&str> = if single {
                vec![fields[first as usize % 3]]
            } else {
                let mut cats: Vec<&str> = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| fields[i]).collect();
                if cats.is_empty() {
                    cats.push(fields[first as usize % 3]);
                }
                cats
            };
            b.add_journal(crate::Journal::new(format!("J{j}")).with_categories("s", cats));
        }
        for (i, &(j, c, late, review)) in papers.iter().enumerate() {
            let mut p =
                crate::Paper::new(format!("P{i}"), format!("J{}", j % journals.len()), if late { 2020 } else { 2019 })
                    .with_citations(c);
            if review {
                p = p.with_doc_type(crate::DocType::Review);
            }
            b.add_paper(p);
        }
        b.count_only().build(crate::Strictness::Strict).unwrap()
    }

    fn regimes() -> Vec<CnciConfig> {
        vec![
            CnciConfig::new(Counting::Whole, Aggregation::AverageOfRatios),
            CnciConfig::new(Counting::Fractional, Aggregation::AverageOfRatios),
            CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages),
            CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages).with_split_citations(),
            CnciConfig::new(Counting::Fractional, Aggregation::RatioOfAverages),
        ]
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]

        #[test]
        fn global_mean_theorem(
            journals in proptest::collection::vec((0u8..8, 0u8..3), 1..6),
            papers in proptest::collection::vec((0usize..6, 0u64..30, proptest::bool::ANY, proptest::bool::ANY), 1..30),
        ) {
            let corpus = random_corpus(&journals, &papers, false);
            let frac = CnciConfig::new(Counting::Fractional, Aggregation::AverageOfRatios);
            let split = CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages).with_split_citations();
            proptest::prop_assert_eq!(global_cnci(&corpus, "s", &frac).unwrap(), int(1));
            proptest::prop_assert_eq!(global_cnci(&corpus, "s", &split).unwrap(), int(1));
            // Every (year, doc type) slice is itself pinned.
            for year in [2019, 2020] {
                for t in [crate::DocType::Article, crate::DocType::Review] {
                    let slice: Vec<PaperIdx> = (0..corpus.num_papers())
                        .filter(|&i| corpus.paper(i).year == year && corpus.paper(i).doc_type == t)
                        .collect();
                    if !slice.is_empty() {
                        proptest::prop_assert_eq!(evaluate(&corpus, "s", &slice, &frac).unwrap(), int(1));
                    }
                }
            }
        }

        #[test]
        fn single_attribution_pins_every_regime(
            journals in proptest::collection::vec((0u8..8, 0u8..3), 1..6),
            papers in proptest::collection::vec((0usize..6, 0u64..30, proptest::bool::ANY, proptest::bool::ANY), 1..30),
        ) {
            let corpus = random_corpus(&journals, &papers, true);
            let w = compute_baselines(&corpus, "s", Counting::Whole).unwrap();
            let f = compute_baselines(&corpus, "s", Counting::Fractional).unwrap();
            for (key, cell) in &w.cells {
                proptest::prop_assert_eq!(&cell.expected, &f.cells[key].expected);
            }
            for cfg in regimes() {
                proptest::prop_assert_eq!(global_cnci(&corpus, "s", &cfg).unwrap(), int(1));
            }
        }

        #[test]
        fn scaling_citations_preserves_cnci(
            journals in proptest::collection::vec((0u8..8, 0u8..3), 1..5),
            papers in proptest::collection::vec((0usize..5, 0u64..20, proptest::bool::ANY, proptest::bool::ANY), 1..20),
            m in 2u64..5,
        ) {
            let base = random_corpus(&journals, &papers, false);
            let scaled_rows: Vec<_> = papers.iter().map(|&(j, c, l, r)| (j, c * m, l, r)).collect();
            let scaled = random_corpus(&journals, &scaled_rows, false);
            for counting in [Counting::Whole, Counting::Fractional] {
                let bb = compute_baselines(&base, "s", counting).unwrap();
                let bs = compute_baselines(&scaled, "s", counting).unwrap();
                for (key, cell) in &bb.cells {
                    proptest::prop_assert_eq!(&bs.cells[key].expected, &(&cell.expected * rational::from_u64(m)));
                }
                for i in 0..base.num_papers() {
                    proptest::prop_assert_eq!(cnci_paper(&base, i, &bb).unwrap(), cnci_paper(&scaled, i, &bs).unwrap());
                }
            }
        }
    }
}
