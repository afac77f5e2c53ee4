//! Global indicator of randomly generated closed corpora.

use biblio_core::normalization::{global_cnci, Aggregation, CnciConfig, Counting};
use biblio_core::rational::int;
use biblio_core::synthesis::{generate_corpus, CitationModel, CountSpec, GenConfig};

fn config(seed: u64) -> GenConfig {
    let mut c = GenConfig::new(2 + (seed % 3) as usize, CountSpec::Uniform([1, 4]));
    c.seed = seed;
    c.multi_attribution_prob = [0.0, 0.3, 0.6, 1.0][(seed % 4) as usize];
    c.max_categories = 3;
    c.papers_per_journal = CountSpec::Uniform([1, 3]);
    c.max_citations = 25;
    c.years = vec![2019, 2020];
    c.doc_type_mix = [("article".to_string(), 3.0), ("review".to_string(), 1.0)].into();
    if seed % 2 == 1 {
        c.citation_model = CitationModel::Yule { rho: 1.2 };
    }
    c
}

#[test]
fn fractional_and_split_regimes_are_pinned_on_1000_corpora() {
    let frac = CnciConfig::new(Counting::Fractional, Aggregation::AverageOfRatios);
    let split = CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages).with_split_citations();
    let all = [
        CnciConfig::new(Counting::Whole, Aggregation::AverageOfRatios),
        frac,
        CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages),
        split,
        CnciConfig::new(Counting::Fractional, Aggregation::RatioOfAverages),
    ];
    let mut failures = Vec::new();
    for seed in 0..1000 {
        let cfg = config(seed);
        let corpus = generate_corpus(&cfg).unwrap();
        let checks: &[CnciConfig] = if cfg.single_attribution() { &all } else { &[frac, split] };
        for regime in checks {
            let g = global_cnci(&corpus, &cfg.schema, regime).unwrap();
            if g != int(1) {
                failures.push((seed, *regime, g));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}
