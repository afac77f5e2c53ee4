use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "biblio", version, about = "Rank-based and field-normalized bibliometric indicators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus against every invariant and report findings.
    Validate(ValidateArgs),
    /// Rank the journals of one category by metric.
    Rank(RankArgs),
    /// Percentile of a rank, or a journal's average percentile over its categories.
    Percentile(PercentileArgs),
    /// Quartile distribution of a schema, or one journal's quartiles.
    Quartiles(QuartilesArgs),
    /// Expected-citation baselines per (field, year, doc type) cell.
    Baselines(BaselinesArgs),
    /// Category-normalized citation impact of the corpus or an entity.
    Cnci(CnciArgs),
    /// CNCI of a subunit against baselines of a reference entity.
    RelativeCnci(RelativeCnciArgs),
    /// Highly-cited decisions per paper, one JSON object per line.
    Hcp(HcpArgs),
    /// Per-field summary of expected versus actual highly-cited papers.
    HcpReport(HcpArgs),
    /// Highly-cited share of an entity's output.
    EntityShare(EntityShareArgs),
    /// Synthetic corpora and Monte Carlo experiments.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write results to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Directory holding journals, papers and (optionally) edges as JSONL.
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    /// Journals file (.jsonl or .csv).
    #[arg(long, value_name = "PATH", conflicts_with = "corpus", requires = "papers")]
    pub journals: Option<PathBuf>,
    /// Papers file (.jsonl or .csv).
    #[arg(long, value_name = "PATH", conflicts_with = "corpus", requires = "journals")]
    pub papers: Option<PathBuf>,
    /// Citation edges file; without it papers must carry citation counts.
    #[arg(long, value_name = "PATH", conflicts_with = "corpus")]
    pub edges: Option<PathBuf>,
    /// Drop unresolvable records and report them instead of failing.
    #[arg(long)]
    pub lenient: bool,
    /// Classification schema; may be omitted when the corpus has exactly one.
    #[arg(long)]
    pub schema: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Category to rank.
    #[arg(long)]
    pub category: String,
    /// Metric year.
    #[arg(long)]
    pub year: i32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PercentileArgs {
    /// Rank within the category (1 is best).
    #[arg(long, requires = "total", conflicts_with_all = ["corpus", "journals"])]
    pub rank: Option<u64>,
    /// Number of ranked journals.
    #[arg(long, requires = "rank")]
    pub total: Option<u64>,
    /// Journal whose average percentile is wanted.
    #[arg(long, requires = "year")]
    pub journal: Option<String>,
    /// Metric year.
    #[arg(long)]
    pub year: Option<i32>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Journals,
    Papers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PerCategory,
    DatabaseBest,
}

#[derive(Debug, Args)]
pub struct QuartilesArgs {
    /// Print the floor-cut partition of a category of this size and exit.
    #[arg(long, value_name = "N", conflicts_with_all = ["corpus", "journals"])]
    pub partition: Option<u64>,
    /// Metric year.
    #[arg(long, required_unless_present = "partition")]
    pub year: Option<i32>,
    /// Count journals or papers.
    #[arg(long, value_enum, default_value_t = LevelArg::Journals)]
    pub level: LevelArg,
    /// Count each category separately, or each journal once at its best quartile.
    #[arg(long, value_enum, default_value_t = ModeArg::PerCategory)]
    pub mode: ModeArg,
    /// Report this journal's per-category and best quartile instead.
    #[arg(long)]
    pub journal: Option<String>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountingArg {
    Whole,
    Fractional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    /// Average of ratios.
    Aor,
    /// Ratio of averages.
    Roa,
}

#[derive(Debug, Args)]
pub struct BaselinesArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum, default_value_t = CountingArg::Whole)]
    pub counting: CountingArg,
    /// Whole-count papers but spread their citations over their fields.
    #[arg(long)]
    pub split_citations: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CnciArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum, default_value_t = CountingArg::Whole)]
    pub counting: CountingArg,
    #[arg(long, value_enum, default_value_t = AggregationArg::Aor)]
    pub aggregation: AggregationArg,
    /// Whole-count papers but spread their citations over their fields (roa only).
    #[arg(long)]
    pub split_citations: bool,
    /// Score 0/0 cells as 0 instead of 1.
    #[arg(long)]
    pub zero_baseline_as_zero: bool,
    /// Restrict the scored papers to one entity.
    #[arg(long)]
    pub entity: Option<String>,
    /// Restrict the scored papers to a publication year.
    #[arg(long)]
    pub year: Option<i32>,
    /// Restrict the scored papers to a document type.
    #[arg(long)]
    pub doc_type: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RelativeCnciArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Entity whose papers are scored.
    #[arg(long)]
    pub subunit: String,
    /// Entity whose papers define the baselines.
    #[arg(long)]
    pub reference: String,
    #[arg(long, value_enum, default_value_t = CountingArg::Whole)]
    pub counting: CountingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Inclusive,
    Exclusive,
    FractionalWs,
    /// Exactly the quota, borderline papers ordered by --tiebreak.
    Quota,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TiebreakArg {
    Chronology,
    Trajectory,
    CitingExcellence,
}

#[derive(Debug, Args)]
pub struct SelectionArgs {
    /// Share of each cell designated highly cited, in percent.
    #[arg(long, default_value = "1")]
    pub top_percent: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Inclusive)]
    pub method: MethodArg,
    /// Tie-break chain for --method quota, applied in order.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "chronology")]
    pub tiebreak: Vec<TiebreakArg>,
    /// Early trajectory window, years after publication (FROM..TO).
    #[arg(long, value_name = "FROM..TO", default_value = "0..4")]
    pub early_window: String,
    /// Late trajectory window, years after publication (FROM..TO).
    #[arg(long, value_name = "FROM..TO", default_value = "5..9")]
    pub late_window: String,
    /// Count only citations within these years after publication (FROM..TO).
    #[arg(long, value_name = "FROM..TO")]
    pub citation_window: Option<String>,
    /// No paper is highly cited where the threshold is 2 or less. Default:
    /// on for single-attribution schemas.
    #[arg(long, overrides_with = "no_esi_low_threshold")]
    pub esi_low_threshold: bool,
    /// Disable the low-threshold rule.
    #[arg(long, overrides_with = "esi_low_threshold")]
    pub no_esi_low_threshold: bool,
    /// Restrict to cells of this publication year.
    #[arg(long)]
    pub year: Option<i32>,
    /// Restrict to cells of this document type.
    #[arg(long)]
    pub doc_type: Option<String>,
}

#[derive(Debug, Args)]
pub struct HcpArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Also emit papers that are not highly cited (hcp only).
    #[arg(long)]
    pub include_none: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EntityShareArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Entity (affiliation) identifier.
    #[arg(long)]
    pub entity: String,
    #[arg(long, value_enum, default_value_t = CountingArg::Whole)]
    pub counting: CountingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Generate one corpus into --out-dir.
    Corpus,
    /// Closed-form quartile surplus for --categories and --journals.
    Analytic,
    /// Monte Carlo quartile surplus over category sizes.
    Surplus,
    /// Monte Carlo global CNCI under every counting/aggregation regime.
    GlobalCnci,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Generator configuration (TOML).
    #[arg(long, value_name = "PATH", required_if_eq_any = [("experiment", "corpus"), ("experiment", "surplus"), ("experiment", "global-cnci")])]
    pub config: Option<PathBuf>,
    /// Override the seed of the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Number of categories (analytic).
    #[arg(long, required_if_eq("experiment", "analytic"))]
    pub categories: Option<u64>,
    /// Number of journals (analytic).
    #[arg(long, required_if_eq("experiment", "analytic"))]
    pub journals: Option<u64>,
    /// Directory for the generated corpus or the per-trial CSV.
    #[arg(long, value_name = "DIR", required_if_eq("experiment", "corpus"))]
    pub out_dir: Option<PathBuf>,
    /// Write the summary JSON to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
