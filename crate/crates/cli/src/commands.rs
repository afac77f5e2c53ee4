use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use biblio_core::corpus::{
    load_corpus, validate, write_jsonl, CellKey, Corpus, CorpusPaths, DocType, PaperIdx, Strictness,
};
use biblio_core::excellence::{
    analyze, entity_hcp_share, hcp_report, CellOutcome, CitationWindow, ClassMethod, ExcellenceConfig, HcpDecision,
    Selection, TiebreakMethod, YearWindow,
};
use biblio_core::normalization::{
    classified_papers, compute_baselines_for, evaluate, relative_cnci, Aggregation, CnciConfig, Counting, ZeroBaseline,
};
use biblio_core::ranking::{
    assign_quartiles, average_percentile, best_quartile, journal_quartiles, journal_ranks, percentile,
    quartile_distribution, quartile_partition, rank_category, DistributionMode, Level,
};
use biblio_core::rational::{self, Exact, Rational};
use biblio_core::synthesis::{
    generate_corpus, monte_carlo_global_cnci, monte_carlo_surplus, surplus_analytic, GenConfig,
};
use biblio_core::Error;

use crate::args::*;

/// A failed invocation: the diagnostic and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_validation() { 2 } else { 3 }, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Percentile(a) => cmd_percentile(a),
        Command::Quartiles(a) => cmd_quartiles(a),
        Command::Baselines(a) => cmd_baselines(a),
        Command::Cnci(a) => cmd_cnci(a),
        Command::RelativeCnci(a) => cmd_relative_cnci(a),
        Command::Hcp(a) => cmd_hcp(a),
        Command::HcpReport(a) => cmd_hcp_report(a),
        Command::EntityShare(a) => cmd_entity_share(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

// ---- plumbing ----

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

fn write_to(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure { message: e.to_string(), code: 3 })
        }
    }
}

fn emit<T: Serialize>(output: &OutputArgs, value: &T, csv: impl FnOnce() -> String) -> Outcome {
    let text = match output.format {
        Format::Json => json(value),
        Format::Csv => csv(),
    };
    write_to(output.out.as_deref(), &text)
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn corpus_paths(args: &CorpusArgs) -> Result<CorpusPaths, Failure> {
    match (&args.corpus, &args.journals, &args.papers) {
        (Some(dir), _, _) => {
            if !dir.is_dir() {
                return Err(Failure::usage(format!("--corpus {} is not a directory", dir.display())));
            }
            Ok(CorpusPaths::in_dir(dir))
        }
        (None, Some(journals), Some(papers)) => {
            Ok(CorpusPaths { journals: journals.clone(), papers: papers.clone(), edges: args.edges.clone() })
        }
        _ => Err(Failure::usage("a corpus is required: pass --corpus DIR, or --journals and --papers")),
    }
}

/// Loads the corpus and resolves the active schema.
fn load(args: &CorpusArgs) -> Result<(Corpus, String), Failure> {
    let strictness = if args.lenient { Strictness::Lenient } else { Strictness::Strict };
    let corpus = load_corpus(&corpus_paths(args)?, strictness)?;
    for finding in corpus.load_report().findings() {
        eprintln!(
            "warning: {} ({} record(s), e.g. {})",
            finding.description,
            finding.count,
            finding.examples.join(", ")
        );
    }
    let schema = match &args.schema {
        Some(name) => {
            corpus.schema(name)?;
            name.clone()
        }
        None => {
            let names: Vec<&String> = corpus.schemas().keys().collect();
            match names.as_slice() {
                [only] => (*only).clone(),
                [] => return Err(Failure::usage("the corpus defines no classification schema")),
                _ => {
                    let list: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                    return Err(Failure::usage(format!(
                        "several schemas ({}); choose one with --schema",
                        list.join(", ")
                    )));
                }
            }
        }
    };
    Ok((corpus, schema))
}

fn counting(arg: CountingArg) -> Counting {
    match arg {
        CountingArg::Whole => Counting::Whole,
        CountingArg::Fractional => Counting::Fractional,
    }
}

fn aggregation_name(a: Aggregation) -> &'static str {
    match a {
        Aggregation::AverageOfRatios => "aor",
        Aggregation::RatioOfAverages => "roa",
    }
}

fn parse_percent(text: &str) -> Result<Rational, Failure> {
    rational::parse_decimal(text)
        .or_else(|| rational::parse_fraction(text))
        .ok_or_else(|| Failure::usage(format!("--top-percent: `{text}` is not a number")))
}

fn parse_window(flag: &str, text: &str) -> Result<(i32, i32), Failure> {
    let bad = || Failure::usage(format!("{flag}: expected FROM..TO, got `{text}`"));
    let (from, to) = text.split_once("..").ok_or_else(bad)?;
    let from = from.trim().parse().map_err(|_| bad())?;
    let to = to.trim().parse().map_err(|_| bad())?;
    Ok((from, to))
}

fn parse_doc_type(text: &Option<String>) -> Result<Option<DocType>, Failure> {
    text.as_deref().map(|t| t.parse::<DocType>().map_err(|e| Failure::usage(format!("--doc-type: {e}")))).transpose()
}

// ---- validate ----

fn cmd_validate(a: ValidateArgs) -> Outcome {
    let strictness = if a.corpus.lenient { Strictness::Lenient } else { Strictness::Strict };
    let corpus = load_corpus(&corpus_paths(&a.corpus)?, strictness)?;
    let report = validate(&corpus);
    emit(&a.output, &report, || {
        let mut out = String::from("check,severity,count,examples\n");
        for f in report.findings() {
            let check = serde_json::to_value(f.check).expect("check serializes");
            let severity = serde_json::to_value(f.severity).expect("severity serializes");
            let _ = writeln!(
                out,
                "{},{},{},{}",
                check.as_str().unwrap_or_default(),
                severity.as_str().unwrap_or_default(),
                f.count,
                csv_field(&f.examples.join(";"))
            );
        }
        out
    })?;
    if report.has_errors() {
        return Err(Failure::usage("corpus violates one or more invariants"));
    }
    Ok(())
}

// ---- ranking ----

#[derive(Serialize)]
struct RankRow {
    journal: String,
    metric: f64,
    rank: u64,
    percentile: Exact,
    quartile: String,
}

#[derive(Serialize)]
struct RankOut {
    schema: String,
    category: String,
    year: i32,
    total: u64,
    entries: Vec<RankRow>,
    excluded: Vec<String>,
    boundary_ties: Vec<Vec<String>>,
}

fn cmd_rank(a: RankArgs) -> Outcome {
    let (corpus, schema) = load(&a.corpus)?;
    let ranked = rank_category(&corpus, &schema, &a.category, a.year)?;
    let assignment = assign_quartiles(&ranked)?;
    let total = ranked.total();
    let entries = ranked
        .entries
        .iter()
        .map(|e| {
            Ok(RankRow {
                journal: e.journal.clone(),
                metric: e.metric,
                rank: e.rank,
                percentile: Exact::new(&percentile(e.rank, total)?, 1),
                quartile: assignment.quartiles[&e.journal].to_string(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    for tie in &assignment.boundary_ties {
        eprintln!("note: tied journals straddle a quartile cut and share the better quartile: {}", tie.join(", "));
    }
    let out = RankOut {
        schema,
        category: ranked.category.clone(),
        year: ranked.year,
        total,
        entries,
        excluded: ranked.excluded.clone(),
        boundary_ties: assignment.boundary_ties.clone(),
    };
    emit(&a.output, &out, || {
        let mut s = String::from("journal,metric,rank,percentile,quartile\n");
        for r in &out.entries {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                csv_field(&r.journal),
                r.metric,
                r.rank,
                r.percentile.decimal,
                r.quartile
            );
        }
        s
    })
}

#[derive(Serialize)]
struct PercentileOut {
    rank: u64,
    total: u64,
    percentile: Exact,
}

#[derive(Serialize)]
struct CategoryPercentile {
    category: String,
    rank: u64,
    total: u64,
    percentile: Exact,
}

#[derive(Serialize)]
struct JournalPercentileOut {
    schema: String,
    journal: String,
    year: i32,
    categories: Vec<CategoryPercentile>,
    average_percentile: Exact,
}

fn cmd_percentile(a: PercentileArgs) -> Outcome {
    match (a.rank, a.total, &a.journal, a.year) {
        (Some(rank), Some(total), None, _) => {
            let out = PercentileOut { rank, total, percentile: Exact::new(&percentile(rank, total)?, 1) };
            emit(&a.output, &out, || format!("rank,total,percentile\n{rank},{total},{}\n", out.percentile.decimal))
        }
        (None, None, Some(journal), Some(year)) => {
            let (corpus, schema) = load(&a.corpus)?;
            let categories = journal_ranks(&corpus, &schema, journal, year)?
                .into_iter()
                .map(|(ranked, rank)| {
                    let total = ranked.total();
                    Ok(CategoryPercentile {
                        category: ranked.category,
                        rank,
                        total,
                        percentile: Exact::new(&percentile(rank, total)?, 1),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let average = average_percentile(&corpus, &schema, journal, year)?;
            let out = JournalPercentileOut {
                schema,
                journal: journal.clone(),
                year,
                categories,
                average_percentile: Exact::new(&average, 1),
            };
            emit(&a.output, &out, || {
                let mut s = String::from("category,rank,total,percentile\n");
                for c in &out.categories {
                    let _ = writeln!(s, "{},{},{},{}", csv_field(&c.category), c.rank, c.total, c.percentile.decimal);
                }
                let _ = writeln!(s, "average,,,{}", out.average_percentile.decimal);
                s
            })
        }
        _ => Err(Failure::usage("pass either --rank and --total, or --journal and --year")),
    }
}

#[derive(Serialize)]
struct JournalQuartileRow {
    category: String,
    quartile: String,
}

#[derive(Serialize)]
struct JournalQuartilesOut {
    schema: String,
    journal: String,
    year: i32,
    categories: Vec<JournalQuartileRow>,
    best: String,
}

fn cmd_quartiles(a: QuartilesArgs) -> Outcome {
    if let Some(n) = a.partition {
        let bounds = quartile_partition(n)?;
        return emit(&a.output, &bounds, || {
            let mut s = String::from("quartile,count,last_rank\n");
            for q in 0..4 {
                let last = if q < 3 { bounds.cuts[q] } else { n };
                let _ = writeln!(s, "Q{},{},{}", q + 1, bounds.counts[q], last);
            }
            s
        });
    }
    let year = a.year.ok_or_else(|| Failure::usage("--year is required"))?;
    let (corpus, schema) = load(&a.corpus)?;
    if let Some(journal) = &a.journal {
        let categories = journal_quartiles(&corpus, &schema, journal, year)?
            .into_iter()
            .map(|(category, q)| JournalQuartileRow { category, quartile: q.to_string() })
            .collect();
        let best = best_quartile(&corpus, &schema, journal, year)?.to_string();
        let out = JournalQuartilesOut { schema, journal: journal.clone(), year, categories, best };
        return emit(&a.output, &out, || {
            let mut s = String::from("category,quartile,best\n");
            for c in &out.categories {
                let _ = writeln!(s, "{},{},{}", csv_field(&c.category), c.quartile, out.best);
            }
            s
        });
    }
    let level = match a.level {
        LevelArg::Journals => Level::Journals,
        LevelArg::Papers => Level::Papers,
    };
    let mode = match a.mode {
        ModeArg::PerCategory => DistributionMode::PerCategory,
        ModeArg::DatabaseBest => DistributionMode::DatabaseBest,
    };
    let report = quartile_distribution(&corpus, &schema, year, level, mode)?;
    if !report.excluded_journals.is_empty() {
        eprintln!("note: {} journal(s) without a {year} metric left out", report.excluded_journals.len());
    }
    emit(&a.output, &report, || report.to_csv())
}

// ---- normalization ----

#[derive(Serialize)]
struct BaselineRow {
    field: String,
    year: i32,
    doc_type: String,
    expected: Exact,
    weight: Exact,
    observed: Exact,
    papers: usize,
}

#[derive(Serialize)]
struct BaselinesOut {
    schema: String,
    convention: &'static str,
    cells: Vec<BaselineRow>,
}

fn cmd_baselines(a: BaselinesArgs) -> Outcome {
    let counting = counting(a.counting);
    if a.split_citations && counting == Counting::Fractional {
        return Err(Failure::usage("--split-citations applies to whole counting only"));
    }
    let (corpus, schema) = load(&a.corpus)?;
    let table =
        compute_baselines_for(&corpus, &schema, &classified_papers(&corpus, &schema), counting, a.split_citations)?;
    let out = BaselinesOut {
        schema: schema.clone(),
        convention: table.convention(),
        cells: table
            .cells
            .iter()
            .map(|(key, cell)| BaselineRow {
                field: key.field.clone(),
                year: key.year,
                doc_type: key.doc_type.to_string(),
                expected: Exact::new(&cell.expected, 4),
                weight: Exact::new(&cell.weight, 4),
                observed: Exact::new(&cell.observed, 4),
                papers: cell.papers,
            })
            .collect(),
    };
    emit(&a.output, &out, || table.to_csv())
}

#[derive(Serialize)]
struct Filters {
    entity: Option<String>,
    year: Option<i32>,
    doc_type: Option<String>,
}

#[derive(Serialize)]
struct CnciOut {
    schema: String,
    counting: Counting,
    aggregation: &'static str,
    split_citations: bool,
    zero_baseline: ZeroBaseline,
    filters: Filters,
    papers: usize,
    cnci: Exact,
}

fn cmd_cnci(a: CnciArgs) -> Outcome {
    let aggregation = match a.aggregation {
        AggregationArg::Aor => Aggregation::AverageOfRatios,
        AggregationArg::Roa => Aggregation::RatioOfAverages,
    };
    let mut config = CnciConfig::new(counting(a.counting), aggregation);
    config.split_citations = a.split_citations;
    if a.zero_baseline_as_zero {
        config.zero_baseline = ZeroBaseline::Zero;
    }
    config.validate()?;
    let doc_type = parse_doc_type(&a.doc_type)?;
    let (corpus, schema) = load(&a.corpus)?;
    let entity: Option<BTreeSet<PaperIdx>> = a.entity.as_deref().map(|e| corpus.entity_papers(e).into_iter().collect());
    let papers: Vec<PaperIdx> = classified_papers(&corpus, &schema)
        .into_iter()
        .filter(|i| entity.as_ref().is_none_or(|set| set.contains(i)))
        .filter(|&i| a.year.is_none_or(|y| corpus.paper(i).year == y))
        .filter(|&i| doc_type.as_ref().is_none_or(|d| corpus.paper(i).doc_type == *d))
        .collect();
    if papers.is_empty() {
        return Err(Error::Empty("paper selection").into());
    }
    let value = evaluate(&corpus, &schema, &papers, &config)?;
    let out = CnciOut {
        schema,
        counting: config.counting,
        aggregation: aggregation_name(aggregation),
        split_citations: config.split_citations,
        zero_baseline: config.zero_baseline,
        filters: Filters { entity: a.entity.clone(), year: a.year, doc_type: doc_type.map(|d| d.to_string()) },
        papers: papers.len(),
        cnci: Exact::new(&value, 4),
    };
    emit(&a.output, &out, || {
        format!(
            "counting,aggregation,split_citations,papers,cnci,cnci_decimal\n{},{},{},{},{},{}\n",
            out.counting, out.aggregation, out.split_citations, out.papers, out.cnci.rational, out.cnci.decimal
        )
    })
}

#[derive(Serialize)]
struct RelativeOut {
    schema: String,
    counting: Counting,
    subunit: String,
    reference: String,
    subunit_cnci: Exact,
    reference_cnci: Exact,
    /// Subunit over reference, both against corpus-wide baselines.
    naive_ratio: Exact,
    /// Subunit against baselines built from the reference papers alone.
    relative_cnci: Exact,
    outside_reference: Vec<String>,
}

fn cmd_relative_cnci(a: RelativeCnciArgs) -> Outcome {
    let (corpus, schema) = load(&a.corpus)?;
    let counting = counting(a.counting);
    let subunit = corpus.entity_papers(&a.subunit);
    let reference = corpus.entity_papers(&a.reference);
    if subunit.is_empty() {
        return Err(Error::NoOutput(a.subunit.clone()).into());
    }
    if reference.is_empty() {
        return Err(Error::NoOutput(a.reference.clone()).into());
    }
    let config = CnciConfig::new(counting, Aggregation::AverageOfRatios);
    let sub = evaluate(&corpus, &schema, &subunit, &config)?;
    let refr = evaluate(&corpus, &schema, &reference, &config)?;
    if refr == rational::int(0) {
        return Err(Failure {
            message: format!("reference `{}` has zero CNCI; the ratio is undefined", a.reference),
            code: 3,
        });
    }
    let rel = relative_cnci(&corpus, &subunit, &reference, &schema, counting)?;
    if !rel.outside_reference.is_empty() {
        eprintln!(
            "warning: {} subunit paper(s) are not in the reference set: {}",
            rel.outside_reference.len(),
            rel.outside_reference.join(", ")
        );
    }
    let out = RelativeOut {
        schema,
        counting,
        subunit: a.subunit.clone(),
        reference: a.reference.clone(),
        subunit_cnci: Exact::new(&sub, 4),
        reference_cnci: Exact::new(&refr, 4),
        naive_ratio: Exact::new(&(&sub / &refr), 4),
        relative_cnci: Exact::new(&rel.value, 4),
        outside_reference: rel.outside_reference.clone(),
    };
    emit(&a.output, &out, || {
        format!(
            "subunit,reference,counting,subunit_cnci,reference_cnci,naive_ratio,relative_cnci\n{},{},{},{},{},{},{}\n",
            csv_field(&out.subunit),
            csv_field(&out.reference),
            out.counting,
            out.subunit_cnci.rational,
            out.reference_cnci.rational,
            out.naive_ratio.rational,
            out.relative_cnci.rational
        )
    })
}

// ---- excellence ----

fn excellence_config(s: &SelectionArgs, corpus: &Corpus, schema: &str) -> Result<ExcellenceConfig, Failure> {
    let window = match &s.citation_window {
        Some(text) => {
            let (from, to) = parse_window("--citation-window", text)?;
            CitationWindow::Years { from, to }
        }
        None => CitationWindow::AllTime,
    };
    let esi_low_threshold = if s.esi_low_threshold {
        true
    } else if s.no_esi_low_threshold {
        false
    } else {
        corpus.schema(schema)?.single_attribution
    };
    let config = ExcellenceConfig { top_percent: parse_percent(&s.top_percent)?, window, esi_low_threshold };
    config.validate()?;
    Ok(config)
}

fn selection(s: &SelectionArgs) -> Result<Selection, Failure> {
    Ok(match s.method {
        MethodArg::Inclusive => Selection::Classify(ClassMethod::Inclusive),
        MethodArg::Exclusive => Selection::Classify(ClassMethod::Exclusive),
        MethodArg::FractionalWs => Selection::Classify(ClassMethod::FractionalWs),
        MethodArg::Quota => {
            let (ef, et) = parse_window("--early-window", &s.early_window)?;
            let (lf, lt) = parse_window("--late-window", &s.late_window)?;
            let chain = s
                .tiebreak
                .iter()
                .map(|t| match t {
                    TiebreakArg::Chronology => TiebreakMethod::Chronology,
                    TiebreakArg::Trajectory => TiebreakMethod::Trajectory {
                        early: YearWindow { from: ef, to: et },
                        late: YearWindow { from: lf, to: lt },
                    },
                    TiebreakArg::CitingExcellence => TiebreakMethod::CitingExcellence,
                })
                .collect::<Vec<_>>();
            for m in &chain {
                m.validate()?;
            }
            Selection::Quota(chain)
        }
    })
}

/// Parses the selection flags, loads the corpus and runs every cell.
fn run_selection(corpus_args: &CorpusArgs, s: &SelectionArgs) -> Result<(Corpus, String, Vec<CellOutcome>), Failure> {
    let selection = selection(s)?;
    let doc_type = parse_doc_type(&s.doc_type)?;
    parse_percent(&s.top_percent)?;
    let (corpus, schema) = load(corpus_args)?;
    let config = excellence_config(s, &corpus, &schema)?;
    let filter =
        |key: &CellKey| s.year.is_none_or(|y| key.year == y) && doc_type.as_ref().is_none_or(|d| key.doc_type == *d);
    let outcomes = analyze(&corpus, &schema, &config, &selection, filter)?;
    if outcomes.is_empty() {
        return Err(Error::Empty("cell selection").into());
    }
    for o in outcomes.iter().filter(|o| o.fallback_used) {
        eprintln!(
            "warning: cell {}: tie-break chain exhausted; borderline papers ordered by paper id",
            o.threshold.cell
        );
    }
    Ok((corpus, schema, outcomes))
}

fn cmd_hcp(a: HcpArgs) -> Outcome {
    let (_, _, outcomes) = run_selection(&a.corpus, &a.selection)?;
    let decisions: Vec<&HcpDecision> =
        outcomes.iter().flat_map(|o| o.decisions.iter()).filter(|d| a.include_none || d.status.is_hcp()).collect();
    let text = match a.output.format {
        Format::Json => decisions.iter().map(|d| d.to_json_line() + "\n").collect::<String>(),
        Format::Csv => {
            let mut s = String::from("paper,cell,status,weight,method\n");
            for d in &decisions {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv_field(&d.paper_id),
                    csv_field(&d.cell.to_string()),
                    d.status.label(),
                    rational::fraction_string(&d.status.weight()),
                    d.method
                );
            }
            s
        }
    };
    write_to(a.output.out.as_deref(), &text)
}

fn cmd_hcp_report(a: HcpArgs) -> Outcome {
    let (_, schema, outcomes) = run_selection(&a.corpus, &a.selection)?;
    let report = hcp_report(&schema, &outcomes)?;
    emit(&a.output, &report, || report.to_csv())
}

fn cmd_entity_share(a: EntityShareArgs) -> Outcome {
    let (corpus, _, outcomes) = run_selection(&a.corpus, &a.selection)?;
    let decisions: Vec<HcpDecision> = outcomes.into_iter().flat_map(|o| o.decisions).collect();
    let share = entity_hcp_share(&corpus, &a.entity, &decisions, counting(a.counting))?;
    emit(&a.output, &share, || {
        format!(
            "entity,counting,hcp_weight,output_weight,share\n{},{},{},{},{}\n",
            csv_field(&share.entity),
            share.counting,
            rational::fraction_string(&share.hcp_weight),
            rational::fraction_string(&share.output_weight),
            rational::fraction_string(&share.share)
        )
    })
}

// ---- simulation ----

#[derive(Serialize)]
struct CorpusSummary {
    seed: u64,
    schema: String,
    journals: usize,
    papers: usize,
    edges: usize,
    files: Vec<String>,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn cmd_simulate(a: SimulateArgs) -> Outcome {
    let config = || -> Result<GenConfig, Failure> {
        let path = a.config.as_ref().ok_or_else(|| Failure::usage("--config is required for this experiment"))?;
        let mut cfg = GenConfig::load(path)?;
        if let Some(seed) = a.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    };
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let out = a.out.as_deref();
    match a.experiment {
        Experiment::Analytic => {
            let (Some(n), Some(total)) = (a.categories, a.journals) else {
                return Err(Failure::usage("--categories and --journals are required"));
            };
            write_to(out, &json(&surplus_analytic(n, total)?))
        }
        Experiment::Corpus => {
            let cfg = config()?;
            let dir = a.out_dir.as_ref().ok_or_else(|| Failure::usage("--out-dir is required"))?;
            fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
            let corpus = generate_corpus(&cfg)?;
            let paths = write_jsonl(&corpus, dir)?;
            let mut files = vec![file_name(&paths.journals), file_name(&paths.papers)];
            files.extend(paths.edges.as_deref().map(file_name));
            let summary = CorpusSummary {
                seed: cfg.seed,
                schema: cfg.schema.clone(),
                journals: corpus.journals().len(),
                papers: corpus.num_papers(),
                edges: corpus.num_edges(),
                files,
            };
            write_to(out, &json(&summary))
        }
        Experiment::Surplus => {
            let mc = monte_carlo_surplus(&config()?, a.trials)?;
            write_trials(a.out_dir.as_deref(), &mc.trials_csv())?;
            if !mc.all_agree() {
                eprintln!("warning: Monte Carlo extras fall outside 3 standard errors of the analytic values");
            }
            write_to(out, &json(&mc))
        }
        Experiment::GlobalCnci => {
            let mc = monte_carlo_global_cnci(&config()?, a.trials)?;
            write_trials(a.out_dir.as_deref(), &mc.trials_csv())?;
            if mc.pin_violations() > 0 {
                eprintln!("warning: {} trial(s) broke a regime that should equal 1", mc.pin_violations());
            }
            write_to(out, &json(&mc))
        }
    }
}

fn write_trials(dir: Option<&Path>, csv: &str) -> Outcome {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    write_to(Some(&dir.join("trials.csv")), csv)
}
