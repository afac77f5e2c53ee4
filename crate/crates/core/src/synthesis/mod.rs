//! Deterministic synthetic corpora and Monte Carlo experiments.

mod config;
mod generate;
mod montecarlo;
mod surplus;

pub use config::{CitationModel, CountSpec, GenConfig};
pub use generate::{generate_corpus, generate_with, stream_rng, CITER_JOURNAL};
pub use montecarlo::{
    monte_carlo_global_cnci, monte_carlo_surplus, CnciTrial, Estimate, MonteCarloCnci, MonteCarloSurplus,
    RegimeSummary, SurplusTrial, PINNED_REGIMES, REGIMES,
};
pub use surplus::{surplus_analytic, surplus_analytic_with, surplus_exact, SurplusEstimate};
