use std::collections::BTreeMap;

use chrono::{Datelike, Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Geometric, LogNormal};

use super::config::{CitationModel, CountSpec, GenConfig};
use crate::corpus::{AuthorCredit, CitationEdge, Corpus, DocType, Journal, Paper, PaperDate, SchemaInfo, Strictness};
use crate::error::{Error, Result};

pub const CITER_JOURNAL: &str = "CITERS";

/// Generator for one stream of a seed. Stream 0 is the corpus of the
/// config itself; Monte Carlo trial `i` uses stream `i + 1`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_count<R: Rng>(rng: &mut R, spec: CountSpec) -> u64 {
    match spec {
        CountSpec::Fixed(v) => v,
        CountSpec::Uniform([lo, hi]) => rng.random_range(lo..=hi),
    }
}

struct CitationSampler {
    model: CitationModel,
    lognormal: Option<LogNormal<f64>>,
    exp: Option<Exp<f64>>,
}

impl CitationSampler {
    fn new(model: CitationModel) -> Result<Self> {
        let bad = |e: String| Error::Config(format!("citation model: {e}"));
        Ok(match model {
            CitationModel::Lognormal { mu, sigma } => CitationSampler {
                model,
                lognormal: Some(LogNormal::new(mu, sigma).map_err(|e| bad(e.to_string()))?),
                exp: None,
            },
            CitationModel::Yule { rho } => {
                CitationSampler { model, lognormal: None, exp: Some(Exp::new(rho).map_err(|e| bad(e.to_string()))?) }
            }
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self.model {
            CitationModel::Lognormal { .. } => {
                let x: f64 = self.lognormal.as_ref().expect("lognormal").sample(rng);
                (x.round() - 1.0).max(0.0)
            }
            // Yule–Simon as an exponential mixture of geometrics.
            CitationModel::Yule { .. } => {
                let w: f64 = self.exp.as_ref().expect("exp").sample(rng);
                let p = (-w).exp().clamp(1e-12, 1.0);
                Geometric::new(p).map(|g| g.sample(rng) as f64).unwrap_or(0.0)
            }
        }
    }
}

fn month_start(year: i32, month: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(year, month, 1).expect("valid month")
}

fn random_day_in_year<R: Rng>(rng: &mut R, year: i32) -> NaiveDate {
    let start = month_start(year, 1);
    let len = if month_start(year + 1, 1).signed_duration_since(start).num_days() == 366 { 366 } else { 365 };
    start + Days::new(rng.random_range(0..len))
}

/// Builds a synthetic corpus. Identical configs give identical corpora.
pub fn generate_corpus(config: &GenConfig) -> Result<Corpus> {
    generate_with(config, &mut stream_rng(config.seed, 0))
}

/// Builds a corpus from an explicit generator stream.
pub fn generate_with<R: Rng>(config: &GenConfig, rng: &mut R) -> Result<Corpus> {
    config.validate()?;
    let sampler = CitationSampler::new(config.citation_model)?;
    let doc_types: Vec<(DocType, f64)> =
        config.doc_type_mix.iter().map(|(name, &w)| Ok((name.parse::<DocType>()?, w))).collect::<Result<_>>()?;
    let doc_index = WeightedIndex::new(doc_types.iter().map(|d| d.1)).map_err(|e| Error::Config(e.to_string()))?;
    let categories: Vec<String> = (0..config.num_categories).map(|c| format!("CAT{c:03}")).collect();

    let mut builder = Corpus::builder();
    builder.add_schema(&config.schema, SchemaInfo { single_attribution: config.single_attribution() });
    builder.add_journal(Journal::new(CITER_JOURNAL));

    // Citing papers are keyed by (year, slot) so every edge has its own citer.
    let mut citer_slots: BTreeMap<i32, u64> = BTreeMap::new();

    for (c, primary) in categories.iter().enumerate() {
        let n_journals = draw_count(rng, config.journals_per_category) as usize;
        // Journal metrics, best first, so position doubles as rank.
        let mut metrics: Vec<f64> =
            (0..n_journals).map(|_| (rng.random::<f64>() * 10_000.0).round() / 1000.0).collect();
        metrics.sort_by(|a, b| b.total_cmp(a));
        for (pos, &metric) in metrics.iter().enumerate() {
            let jid = format!("J{c:03}-{pos:03}");
            let mut cats = vec![primary.clone()];
            while cats.len() < config.max_categories.min(config.num_categories)
                && rng.random_bool(config.multi_attribution_prob)
            {
                let others: Vec<&String> = categories.iter().filter(|x| !cats.contains(x)).collect();
                cats.push(others[rng.random_range(0..others.len())].clone());
            }
            let k = cats.len();
            let mut journal = Journal::new(jid.clone()).with_categories(&config.schema, cats);
            for &y in &config.years {
                journal = journal.with_metric(y, metric);
            }
            builder.add_journal(journal);

            let spread = if n_journals > 1 { (n_journals - 1 - pos) as f64 / (n_journals - 1) as f64 } else { 1.0 };
            let base = draw_count(rng, config.papers_per_journal) as f64;
            let n_papers = (base * (1.0 + config.rank_volume * spread)).round() as u64;
            for p in 0..n_papers {
                let pid = format!("{jid}-P{p:04}");
                let year = config.years[rng.random_range(0..config.years.len())];
                let online = random_day_in_year(rng, year);
                let issue_month = rng.random_range(online.month()..=12);
                let mut paper = Paper::new(pid.clone(), jid.clone(), year)
                    .with_doc_type(doc_types[doc_index.sample(rng)].0.clone())
                    .with_online_date(online)
                    .with_pub_date(PaperDate::month(year, issue_month).expect("month"));
                if config.entities > 0 {
                    for a in 0..rng.random_range(1..=3u32) {
                        let entity = format!("E{:02}", rng.random_range(0..config.entities));
                        paper = paper.with_author(AuthorCredit::new(format!("{pid}-a{a}"), [entity]));
                    }
                }
                builder.add_paper(paper);

                let mut cites = sampler.sample(rng);
                if k > 1 {
                    cites *= config.multi_field_boost;
                }
                let cites = (cites.round() as u64).min(config.max_citations);
                for slot in 0..cites {
                    let cy = year + rng.random_range(1..=config.citation_years);
                    let used = citer_slots.entry(cy).or_insert(0);
                    *used = (*used).max(slot + 1);
                    let date = random_day_in_year(rng, cy);
                    builder.add_edge(CitationEdge::new(citer_id(cy, slot), pid.clone()).dated(date));
                }
            }
        }
    }
    for (&year, &slots) in &citer_slots {
        for slot in 0..slots {
            builder.add_paper(Paper::new(citer_id(year, slot), CITER_JOURNAL, year));
        }
    }
    builder.build(Strictness::Strict)
}

fn citer_id(year: i32, slot: u64) -> String {
    format!("CIT-{year}-{slot:04}")
}
