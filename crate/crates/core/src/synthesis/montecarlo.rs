use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::GenConfig;
use super::generate::{generate_with, stream_rng};
use super::surplus::{surplus_analytic_with, SurplusEstimate};
use crate::error::{Error, Result};
use crate::normalization::{global_cnci, Aggregation, CnciConfig, Counting};
use crate::ranking::quartile_partition;
use crate::rational::{self, Exact, Rational};

/// Mean and standard error of a sample; the error is undefined for one
/// observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: Option<f64>,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std_error = (values.len() > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        });
        Estimate { mean, std_error }
    }

    /// Whether `target` lies within mean ± 3·SE. `None` when SE is undefined.
    pub fn covers(&self, target: f64) -> Option<bool> {
        self.std_error.map(|se| (self.mean - target).abs() <= 3.0 * se + 1e-9)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurplusTrial {
    pub trial: u64,
    pub totals: [u64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSurplus {
    pub trials: u64,
    pub num_categories: u64,
    pub totals: [Estimate; 4],
    /// Q2, Q3, Q4 minus Q1.
    pub extras: [Estimate; 3],
    pub analytic: SurplusEstimate,
    /// Per extra: analytic value inside mean ± 3·SE; `None` when undefined.
    pub agrees: [Option<bool>; 3],
    #[serde(skip)]
    pub per_trial: Vec<SurplusTrial>,
}

impl MonteCarloSurplus {
    /// `trial,q1,q2,q3,q4` rows.
    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,q1,q2,q3,q4\n");
        for t in &self.per_trial {
            out.push_str(&format!("{},{},{},{},{}\n", t.trial, t.totals[0], t.totals[1], t.totals[2], t.totals[3]));
        }
        out
    }

    /// False only when some extra is defined and disagrees.
    pub fn all_agree(&self) -> bool {
        self.agrees.iter().all(|a| a.unwrap_or(true))
    }
}

/// Draws every category size from the config in each trial and sums the
/// quartile partitions. Trial `i` uses generator stream `i + 1`.
pub fn monte_carlo_surplus(config: &GenConfig, trials: u64) -> Result<MonteCarloSurplus> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::Config("at least one trial is needed".into()));
    }
    let (lo, hi) = config.journals_per_category.bounds();
    if lo == 0 {
        return Err(Error::Config("category sizes must be at least 1 for the surplus experiment".into()));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(config.seed, trial + 1);
            let mut totals = [0u64; 4];
            for _ in 0..config.num_categories {
                let n = rng.random_range(lo..=hi);
                let b = quartile_partition(n)?;
                for (t, c) in totals.iter_mut().zip(b.counts) {
                    *t += c;
                }
            }
            Ok(SurplusTrial { trial, totals })
        })
        .collect::<Result<Vec<_>>>()?;

    let column =
        |f: &dyn Fn(&SurplusTrial) -> f64| -> Estimate { Estimate::of(&per_trial.iter().map(f).collect::<Vec<_>>()) };
    let totals: [Estimate; 4] = std::array::from_fn(|q| column(&|t| t.totals[q] as f64));
    let extras: [Estimate; 3] = std::array::from_fn(|q| column(&|t| t.totals[q + 1] as f64 - t.totals[0] as f64));

    let n = config.num_categories as u64;
    let expected_total = rational::round_half_up(&(config.journals_per_category.mean() * rational::from_u64(n)));
    let expected_total: u64 = expected_total.try_into().expect("journal count fits");
    let analytic = surplus_analytic_with(n, expected_total, &config.journals_per_category.remainder_probabilities())?;
    let agrees = std::array::from_fn(|q| {
        let target = rational::to_f64(&analytic.expected_extras[q]);
        if extras[q].std_error == Some(0.0) {
            Some((extras[q].mean - target).abs() < 1e-9)
        } else {
            extras[q].covers(target)
        }
    });
    Ok(MonteCarloSurplus { trials, num_categories: n, totals, extras, analytic, agrees, per_trial })
}

/// The counting/aggregation combinations tracked by the global experiment.
pub const REGIMES: [(&str, Counting, Aggregation, bool); 5] = [
    ("whole_aor", Counting::Whole, Aggregation::AverageOfRatios, false),
    ("fractional_aor", Counting::Fractional, Aggregation::AverageOfRatios, false),
    ("whole_roa", Counting::Whole, Aggregation::RatioOfAverages, false),
    ("whole_roa_split", Counting::Whole, Aggregation::RatioOfAverages, true),
    ("fractional_roa", Counting::Fractional, Aggregation::RatioOfAverages, false),
];

/// Regimes that equal 1 on every closed corpus.
pub const PINNED_REGIMES: [&str; 2] = ["fractional_aor", "whole_roa_split"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnciTrial {
    pub trial: u64,
    pub papers: usize,
    /// One value per entry of [`REGIMES`].
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeSummary {
    pub regime: &'static str,
    pub min: Rational,
    pub mean: Rational,
    pub max: Rational,
    /// Trials in which the value differed from 1.
    pub off_unity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloCnci {
    pub trials: u64,
    pub regimes: Vec<RegimeSummary>,
    pub per_trial: Vec<CnciTrial>,
}

impl MonteCarloCnci {
    /// Trials in which a pinned regime strayed from 1.
    pub fn pin_violations(&self) -> u64 {
        self.regimes.iter().filter(|r| PINNED_REGIMES.contains(&r.regime)).map(|r| r.off_unity).sum()
    }

    pub fn regime(&self, name: &str) -> Option<&RegimeSummary> {
        self.regimes.iter().find(|r| r.regime == name)
    }

    /// `trial,papers,<regime>...` with exact values.
    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,papers");
        for (name, ..) in REGIMES {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for t in &self.per_trial {
            out.push_str(&format!("{},{}", t.trial, t.papers));
            for v in &t.values {
                out.push(',');
                out.push_str(&rational::fraction_string(v));
            }
            out.push('\n');
        }
        out
    }
}

impl Serialize for MonteCarloCnci {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Regime<'a> {
            regime: &'a str,
            min: Exact,
            mean: Exact,
            max: Exact,
            off_unity: u64,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            trials: u64,
            pin_violations: u64,
            regimes: Vec<Regime<'a>>,
        }
        Out {
            trials: self.trials,
            pin_violations: self.pin_violations(),
            regimes: self
                .regimes
                .iter()
                .map(|r| Regime {
                    regime: r.regime,
                    min: Exact::new(&r.min, 4),
                    mean: Exact::new(&r.mean, 4),
                    max: Exact::new(&r.max, 4),
                    off_unity: r.off_unity,
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Global indicator of freshly generated corpora under every regime.
pub fn monte_carlo_global_cnci(config: &GenConfig, trials: u64) -> Result<MonteCarloCnci> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::Config("at least one trial is needed".into()));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let corpus = generate_with(config, &mut stream_rng(config.seed, trial + 1))?;
            let papers = crate::normalization::classified_papers(&corpus, &config.schema).len();
            let values = REGIMES
                .iter()
                .map(|&(_, counting, aggregation, split)| {
                    let mut cfg = CnciConfig::new(counting, aggregation);
                    cfg.split_citations = split;
                    global_cnci(&corpus, &config.schema, &cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CnciTrial { trial, papers, values })
        })
        .collect::<Result<Vec<_>>>()?;
    let per_trial: Vec<CnciTrial> = per_trial;
    let regimes = REGIMES
        .iter()
        .enumerate()
        .map(|(i, &(regime, ..))| {
            let values: Vec<&Rational> = per_trial.iter().map(|t| &t.values[i]).collect();
            let sum = values.iter().fold(Rational::zero(), |a, v| a + *v);
            RegimeSummary {
                regime,
                min: (*values.iter().min().expect("trials")).clone(),
                max: (*values.iter().max().expect("trials")).clone(),
                mean: sum / rational::from_u64(trials),
                off_unity: values.iter().filter(|v| !v.is_one()).count() as u64,
            }
        })
        .collect();
    Ok(MonteCarloCnci { trials, regimes, per_trial })
}
