use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{CellOutcome, HcpDecision};
use crate::corpus::{Corpus, PaperIdx};
use crate::error::{Error, Result};
use crate::normalization::{csv_field, Counting};
use crate::rational::{self, Exact, Rational};

/// One field of the highly-cited summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub field: String,
    pub total: u64,
    pub expected: u64,
    pub actual: Rational,
    pub surplus: Rational,
    pub real_percent: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcellenceReport {
    pub schema: String,
    pub top_percent: Rational,
    pub rows: Vec<ReportRow>,
}

fn count_string(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        rational::render_decimal(value, 3)
    }
}

fn signed_string(value: &Rational) -> String {
    if value.is_positive() {
        format!("+{}", count_string(value))
    } else {
        count_string(value)
    }
}

impl ReportRow {
    pub fn real_percent_string(&self) -> String {
        rational::render_decimal(&self.real_percent, 3)
    }
}

impl ExcellenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,total,expected,actual,surplus,real_percent\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&r.field),
                r.total,
                r.expected,
                count_string(&r.actual),
                signed_string(&r.surplus),
                r.real_percent_string()
            ));
        }
        out
    }
}

impl Serialize for ExcellenceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            field: &'a str,
            total: u64,
            expected: u64,
            actual: Exact,
            surplus: Exact,
            real_percent: Exact,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            schema: &'a str,
            top_percent: Exact,
            rows: Vec<Row<'a>>,
        }
        Out {
            schema: &self.schema,
            top_percent: Exact::new(&self.top_percent, 4),
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    field: &r.field,
                    total: r.total,
                    expected: r.expected,
                    actual: Exact::new(&r.actual, 3),
                    surplus: Exact::new(&r.surplus, 3),
                    real_percent: Exact::new(&r.real_percent, 3),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Per-field totals: expected = round-half-up(N·p/100), actual = summed
/// decision weights, surplus = actual − expected, real % = actual/N·100.
pub fn hcp_report(schema: &str, outcomes: &[CellOutcome]) -> Result<ExcellenceReport> {
    let top_percent =
        outcomes.first().map(|o| o.threshold.top_percent.clone()).ok_or(Error::Empty("excellence results"))?;
    let mut fields: BTreeMap<&str, (u64, Rational)> = BTreeMap::new();
    for o in outcomes {
        let entry = fields.entry(&o.threshold.cell.field).or_insert((0, Rational::zero()));
        entry.0 += o.threshold.n as u64;
        for d in &o.decisions {
            entry.1 += d.status.weight();
        }
    }
    let rows = fields
        .into_iter()
        .map(|(field, (total, actual))| {
            let n = rational::from_u64(total);
            let expected = rational::round_half_up(&(&top_percent * &n / rational::int(100)));
            let expected_r = Rational::from_integer(expected.clone());
            ReportRow {
                field: field.to_string(),
                total,
                expected: expected.try_into().expect("expected count fits in u64"),
                surplus: &actual - expected_r,
                real_percent: &actual * rational::int(100) / n,
                actual,
            }
        })
        .collect();
    Ok(ExcellenceReport { schema: schema.to_string(), top_percent, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityShare {
    pub entity: String,
    pub counting: Counting,
    pub hcp_weight: Rational,
    pub output_weight: Rational,
    pub share: Rational,
}

impl Serialize for EntityShare {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            entity: &'a str,
            counting: Counting,
            hcp_weight: Exact,
            output_weight: Exact,
            share: Exact,
        }
        Out {
            entity: &self.entity,
            counting: self.counting,
            hcp_weight: Exact::new(&self.hcp_weight, 4),
            output_weight: Exact::new(&self.output_weight, 4),
            share: Exact::new(&self.share, 6),
        }
        .serialize(s)
    }
}

/// Share of an entity's output that is highly cited. A paper decided in
/// several cells keeps its largest weight. Whole counting credits each
/// paper with at least one affiliated author in full; fractional counting
/// uses the author-level attribution.
pub fn entity_hcp_share(
    corpus: &Corpus,
    entity: &str,
    decisions: &[HcpDecision],
    counting: Counting,
) -> Result<EntityShare> {
    let papers = corpus.entity_papers(entity);
    if papers.is_empty() {
        return Err(Error::NoOutput(entity.to_string()));
    }
    let mut status: HashMap<PaperIdx, Rational> = HashMap::new();
    for d in decisions {
        let w = d.status.weight();
        let slot = status.entry(d.paper).or_insert_with(Rational::zero);
        if w > *slot {
            *slot = w;
        }
    }
    let mut hcp_weight = Rational::zero();
    let mut output_weight = Rational::zero();
    for idx in papers {
        let credit = match counting {
            Counting::Whole => rational::int(1),
            Counting::Fractional => corpus.attribution(idx, entity)?,
        };
        if let Some(w) = status.get(&idx) {
            hcp_weight += w * &credit;
        }
        output_weight += credit;
    }
    if output_weight.is_zero() {
        return Err(Error::NoOutput(entity.to_string()));
    }
    let share = &hcp_weight / &output_weight;
    Ok(EntityShare { entity: entity.to_string(), counting, hcp_weight, output_weight, share })
}
