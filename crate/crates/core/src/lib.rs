//! Bibliometric indicator engine.
//!
//! Computes rank-based and field-normalized citation indicators over an
//! immutable publication [`Corpus`]:
//!
//! * [`ranking`]: per-category journal ranks, percentiles, quartile
//!   partitions, best-quartile aggregation and quartile distribution reports.
//! * [`normalization`]: expected-citation baselines per (field, year,
//!   document type) cell and CNCI under whole or fractional counting, with
//!   average-of-ratios or ratio-of-averages aggregation.
//! * [`excellence`]: top-n% thresholds, highly-cited classification,
//!   substantive borderline tie-breaking and exact-quota selection.
//! * [`synthesis`]: seeded synthetic corpora and Monte Carlo experiments.
//!
//! All indicator arithmetic is exact ([`Rational`]); decimal rendering only
//! happens at the output layer.

pub mod corpus;
pub mod error;
pub mod excellence;
pub mod fixtures;
pub mod normalization;
pub mod ranking;
pub mod rational;
pub mod synthesis;

pub use corpus::{
    AuthorCredit, CellKey, CitationEdge, Corpus, CorpusBuilder, DatePrecision, DocType, Journal, LoadReport, Paper,
    PaperDate, PaperIdx, SchemaInfo, Strictness, ValidationReport,
};
pub use error::{Error, Result};
pub use rational::Rational;
