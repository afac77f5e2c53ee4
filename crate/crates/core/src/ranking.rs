//! Journal ranks, percentiles and quartiles within subject categories.
//!
//! Ranks use competition ranking: tied metrics share the smallest position
//! of their block, so a tie block always lands in a single quartile.
//! Percentiles follow `(N - (rank - 1/2)) / N * 100` and are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, PaperIdx};
use crate::error::{Error, Result};
use crate::rational::{self, Exact, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedEntry {
    pub journal: String,
    pub metric: f64,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedCategory {
    pub schema: String,
    pub category: String,
    pub year: i32,
    /// Sorted by metric descending, then journal id.
    pub entries: Vec<RankedEntry>,
    /// Members without a metric for the year; not counted in N.
    pub excluded: Vec<String>,
}

impl RankedCategory {
    pub fn total(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn rank_of(&self, journal: &str) -> Option<u64> {
        self.entries.iter().find(|e| e.journal == journal).map(|e| e.rank)
    }
}

/// Ranks every journal of `category` that has a metric for `year`.
pub fn rank_category(corpus: &Corpus, schema: &str, category: &str, year: i32) -> Result<RankedCategory> {
    corpus.schema(schema)?;
    let members: Vec<_> = corpus
        .journals()
        .iter()
        .filter(|j| j.categories.get(schema).is_some_and(|c| c.iter().any(|c| c == category)))
        .collect();
    if members.is_empty() {
        return Err(Error::Empty("category"));
    }
    let mut excluded = Vec::new();
    let mut scored = Vec::new();
    for j in members {
        match j.metrics.get(&year) {
            Some(&m) => scored.push((j.id.clone(), m)),
            None => excluded.push(j.id.clone()),
        }
    }
    if scored.is_empty() {
        return Err(Error::NoMetrics { category: category.to_string(), year });
    }
    excluded.sort();
    Ok(RankedCategory {
        schema: schema.to_string(),
        category: category.to_string(),
        year,
        entries: competition_rank(scored),
        excluded,
    })
}

/// Sorts descending by metric (ties by id) and assigns shared minimal ranks.
pub fn competition_rank(mut scored: Vec<(String, f64)>) -> Vec<RankedEntry> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut entries: Vec<RankedEntry> = Vec::with_capacity(scored.len());
    for (pos, (journal, metric)) in scored.into_iter().enumerate() {
        let rank = match entries.last() {
            Some(prev) if prev.metric == metric => prev.rank,
            _ => pos as u64 + 1,
        };
        entries.push(RankedEntry { journal, metric, rank });
    }
    entries
}

/// `(N - (rank - 1/2)) / N * 100`, exact.
pub fn percentile(rank: u64, total: u64) -> Result<Rational> {
    if rank == 0 || rank > total {
        return Err(Error::RankOutOfRange { rank, total });
    }
    let (rank, total) = (rank as i64, total as i64);
    Ok(rational::ratio((2 * total - 2 * rank + 1) * 50, total))
}

/// Renders a percentile the way reports show it: one decimal, half-up.
pub fn render_percentile(value: &Rational) -> String {
    rational::render_decimal(value, 1)
}

/// Every (category, rank, N) of a journal under `schema` in `year`.
pub fn journal_ranks(corpus: &Corpus, schema: &str, journal: &str, year: i32) -> Result<Vec<(RankedCategory, u64)>> {
    let j = corpus.journal(journal).ok_or_else(|| Error::Unranked(journal.to_string()))?;
    let mut out = Vec::new();
    for category in j.categories.get(schema).into_iter().flatten() {
        let ranked = match rank_category(corpus, schema, category, year) {
            Ok(r) => r,
            Err(Error::NoMetrics { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(rank) = ranked.rank_of(journal) {
            out.push((ranked, rank));
        }
    }
    if out.is_empty() {
        return Err(Error::Unranked(journal.to_string()));
    }
    Ok(out)
}

/// Unweighted mean of the journal's percentiles over its categories.
pub fn average_percentile(corpus: &Corpus, schema: &str, journal: &str, year: i32) -> Result<Rational> {
    let ranks = journal_ranks(corpus, schema, journal, year)?;
    let mut sum = rational::int(0);
    for (ranked, rank) in &ranks {
        sum += percentile(*rank, ranked.total())?;
    }
    Ok(sum / rational::int(ranks.len() as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quartile {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quartile {
    pub const ALL: [Quartile; 4] = [Quartile::Q1, Quartile::Q2, Quartile::Q3, Quartile::Q4];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Quartile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.index() + 1)
    }
}

/// How categories with fewer than four journals are cut.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TinyCategories {
    /// Floor cuts as-is: a lone journal lands in Q4.
    #[default]
    Verbatim,
    /// Raise the first cut to 1 so the top journal is always Q1.
    Clamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuartileBounds {
    pub total: u64,
    /// Last rank of Q1, Q2 and Q3.
    pub cuts: [u64; 3],
    pub counts: [u64; 4],
}

impl QuartileBounds {
    pub fn quartile_of(&self, rank: u64) -> Quartile {
        match rank {
            r if r <= self.cuts[0] => Quartile::Q1,
            r if r <= self.cuts[1] => Quartile::Q2,
            r if r <= self.cuts[2] => Quartile::Q3,
            _ => Quartile::Q4,
        }
    }
}

/// Q1 = ranks 1..=⌊N/4⌋, Q2 up to ⌊N/2⌋, Q3 up to ⌊3N/4⌋, Q4 the rest.
pub fn quartile_partition(total: u64) -> Result<QuartileBounds> {
    quartile_partition_with(total, TinyCategories::Verbatim)
}

pub fn quartile_partition_with(total: u64, tiny: TinyCategories) -> Result<QuartileBounds> {
    if total == 0 {
        return Err(Error::Empty("category"));
    }
    let mut cuts = [total / 4, total / 2, 3 * total / 4];
    if tiny == TinyCategories::Clamp {
        cuts[0] = cuts[0].max(1);
        cuts[1] = cuts[1].max(cuts[0]);
        cuts[2] = cuts[2].max(cuts[1]);
    }
    let counts = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], total - cuts[2]];
    Ok(QuartileBounds { total, cuts, counts })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuartileAssignment {
    pub bounds: QuartileBounds,
    pub quartiles: BTreeMap<String, Quartile>,
    /// Tie blocks whose positions straddle a cut; they take the quartile of
    /// their shared rank.
    pub boundary_ties: Vec<Vec<String>>,
}

pub fn assign_quartiles(ranked: &RankedCategory) -> Result<QuartileAssignment> {
    assign_quartiles_with(ranked, TinyCategories::Verbatim)
}

pub fn assign_quartiles_with(ranked: &RankedCategory, tiny: TinyCategories) -> Result<QuartileAssignment> {
    let bounds = quartile_partition_with(ranked.total(), tiny)?;
    let quartiles = ranked.entries.iter().map(|e| (e.journal.clone(), bounds.quartile_of(e.rank))).collect();
    let mut boundary_ties = Vec::new();
    let mut start = 0;
    while start < ranked.entries.len() {
        let rank = ranked.entries[start].rank;
        let end = ranked.entries[start..].iter().take_while(|e| e.rank == rank).count() + start;
        let (first, last) = (start as u64 + 1, end as u64);
        if last > first && bounds.quartile_of(first) != bounds.quartile_of(last) {
            boundary_ties.push(ranked.entries[start..end].iter().map(|e| e.journal.clone()).collect());
        }
        start = end;
    }
    Ok(QuartileAssignment { bounds, quartiles, boundary_ties })
}

/// Per-category quartiles of one journal.
pub fn journal_quartiles(corpus: &Corpus, schema: &str, journal: &str, year: i32) -> Result<Vec<(String, Quartile)>> {
    journal_ranks(corpus, schema, journal, year)?
        .into_iter()
        .map(|(ranked, rank)| {
            let bounds = quartile_partition(ranked.total())?;
            Ok((ranked.category, bounds.quartile_of(rank)))
        })
        .collect()
}

/// The best (smallest) quartile a journal reaches in any of its categories.
pub fn best_quartile(corpus: &Corpus, schema: &str, journal: &str, year: i32) -> Result<Quartile> {
    journal_quartiles(corpus, schema, journal, year)?
        .into_iter()
        .map(|(_, q)| q)
        .min()
        .ok_or_else(|| Error::Unranked(journal.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Journals,
    Papers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionMode {
    /// Sum category-level counts; a journal in k categories counts k times.
    PerCategory,
    /// Each journal (or paper) once, at its best quartile.
    DatabaseBest,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionRow {
    pub quartile: Quartile,
    pub count: u64,
    pub share: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionReport {
    pub schema: String,
    pub year: i32,
    pub level: Level,
    pub mode: DistributionMode,
    pub total: u64,
    pub rows: Vec<DistributionRow>,
    /// Journals present in a category but lacking a metric for the year.
    pub excluded_journals: Vec<String>,
    #[serde(skip)]
    pub shares: [Rational; 4],
}

impl DistributionReport {
    pub fn counts(&self) -> [u64; 4] {
        let mut out = [0; 4];
        for row in &self.rows {
            out[row.quartile.index()] = row.count;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quartile,count,share\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.quartile, row.count, row.share.decimal));
        }
        out
    }
}

/// Quartile counts and shares over every category of `schema` in `year`.
pub fn quartile_distribution(
    corpus: &Corpus,
    schema: &str,
    year: i32,
    level: Level,
    mode: DistributionMode,
) -> Result<DistributionReport> {
    corpus.schema(schema)?;
    // journal -> per-category quartiles
    let mut per_journal: BTreeMap<String, Vec<Quartile>> = BTreeMap::new();
    let mut excluded = BTreeSet::new();
    for category in corpus.category_ids(schema) {
        let ranked = match rank_category(corpus, schema, &category, year) {
            Ok(r) => r,
            Err(Error::NoMetrics { .. }) => {
                for j in corpus.journals() {
                    if j.categories.get(schema).is_some_and(|c| c.contains(&category)) {
                        excluded.insert(j.id.clone());
                    }
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        excluded.extend(ranked.excluded.iter().cloned());
        for (journal, q) in assign_quartiles(&ranked)?.quartiles {
            per_journal.entry(journal).or_default().push(q);
        }
    }

    let papers_per_journal: BTreeMap<&str, u64> = match level {
        Level::Journals => BTreeMap::new(),
        Level::Papers => {
            let mut m = BTreeMap::new();
            for idx in 0..corpus.num_papers() as PaperIdx {
                let p = corpus.paper(idx);
                if p.year == year {
                    *m.entry(p.journal.as_str()).or_insert(0) += 1;
                }
            }
            m
        }
    };
    let weight = |journal: &str| match level {
        Level::Journals => 1,
        Level::Papers => papers_per_journal.get(journal).copied().unwrap_or(0),
    };

    let mut counts = [0u64; 4];
    for (journal, quartiles) in &per_journal {
        let w = weight(journal);
        match mode {
            DistributionMode::PerCategory => {
                for q in quartiles {
                    counts[q.index()] += w;
                }
            }
            DistributionMode::DatabaseBest => {
                let best = quartiles.iter().min().expect("ranked journal has a quartile");
                counts[best.index()] += w;
            }
        }
    }
    let total: u64 = counts.iter().sum();
    let shares = counts.map(|c| if total == 0 { rational::int(0) } else { rational::ratio(c as i64, total as i64) });
    let rows = Quartile::ALL
        .iter()
        .map(|&q| DistributionRow { quartile: q, count: counts[q.index()], share: Exact::new(&shares[q.index()], 4) })
        .collect();
    excluded.retain(|j| !per_journal.contains_key(j));
    Ok(DistributionReport {
        schema: schema.to_string(),
        year,
        level,
        mode,
        total,
        rows,
        excluded_journals: excluded.into_iter().collect(),
        shares,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Journal, Paper, Strictness};
    use crate::fixtures::category_with_metrics;

    /// Enumerate ranks 1..=N and bucket each with the floor cuts.
    fn enumerate_counts(n: u64) -> [u64; 4] {
        let mut counts = [0; 4];
        for r in 1..=n {
            let q = if r <= n / 4 {
                0
            } else if r <= n / 2 {
                1
            } else if r <= 3 * n / 4 {
                2
            } else {
                3
            };
            counts[q] += 1;
        }
        counts
    }

    #[test]
    fn partition_small_cases() {
        assert_eq!(enumerate_counts(16), [4, 4, 4, 4]);
        assert_eq!(enumerate_counts(17), [4, 4, 4, 5]);
        assert_eq!(enumerate_counts(18), [4, 5, 4, 5]);
        assert_eq!(enumerate_counts(19), [4, 5, 5, 5]);
        assert_eq!(enumerate_counts(1), [0, 0, 0, 1]);
        for n in 1..200 {
            assert_eq!(quartile_partition(n).unwrap().counts, enumerate_counts(n), "N={n}");
        }
        assert!(quartile_partition(0).is_err());
    }

    #[test]
    fn clamp_puts_lone_journal_in_q1() {
        assert_eq!(quartile_partition_with(1, TinyCategories::Clamp).unwrap().counts, [1, 0, 0, 0]);
        assert_eq!(quartile_partition_with(2, TinyCategories::Clamp).unwrap().counts, [1, 0, 0, 1]);
        assert_eq!(quartile_partition_with(17, TinyCategories::Clamp).unwrap().counts, [4, 4, 4, 5]);
    }

    #[test]
    fn percentile_values() {
        assert_eq!(render_percentile(&percentile(18, 86).unwrap()), "79.7");
        assert_eq!(percentile(1, 1).unwrap(), rational::int(50));
        assert_eq!(percentile(1, 4).unwrap(), rational::ratio(175, 2));
        assert!(percentile(0, 4).is_err());
        assert!(percentile(5, 4).is_err());
    }

    #[test]
    fn rank_18_of_86() {
        // target J17 has the 18th highest metric
        let metrics: Vec<f64> = (0..86).map(|i| 100.0 - i as f64).collect();
        let corpus = category_with_metrics("jcr", "Info Sci", 2020, &metrics);
        let ranked = rank_category(&corpus, "jcr", "Info Sci", 2020).unwrap();
        assert_eq!(ranked.total(), 86);
        assert_eq!(ranked.rank_of("J17"), Some(18));
        let avg = average_percentile(&corpus, "jcr", "J17", 2020).unwrap();
        assert_eq!(render_percentile(&avg), "79.7");
    }

    #[test]
    fn single_journal_category() {
        let corpus = category_with_metrics("jcr", "X", 2020, &[3.0]);
        let ranked = rank_category(&corpus, "jcr", "X", 2020).unwrap();
        assert_eq!((ranked.rank_of("J00"), ranked.total()), (Some(1), 1));
    }

    #[test]
    fn ties_share_minimal_rank() {
        let corpus = category_with_metrics("jcr", "X", 2020, &[2.0, 1.0, 2.0]);
        let ranked = rank_category(&corpus, "jcr", "X", 2020).unwrap();
        let ranks: Vec<(String, u64)> = ranked.entries.iter().map(|e| (e.journal.clone(), e.rank)).collect();
        assert_eq!(ranks, vec![("J00".into(), 1), ("J02".into(), 1), ("J01".into(), 3)]);
    }

    #[test]
    fn metricless_journals_are_excluded() {
        let corpus = Corpus::builder()
            .schema("jcr", false)
            .journal(Journal::new("A").with_categories("jcr", ["X"]).with_metric(2020, 1.0))
            .journal(Journal::new("B").with_categories("jcr", ["X"]))
            .build(Strictness::Strict)
            .unwrap();
        let ranked = rank_category(&corpus, "jcr", "X", 2020).unwrap();
        assert_eq!(ranked.total(), 1);
        assert_eq!(ranked.excluded, vec!["B".to_string()]);
        assert!(matches!(rank_category(&corpus, "jcr", "X", 2019), Err(Error::NoMetrics { .. })));
        assert!(matches!(rank_category(&corpus, "jcr", "Y", 2020), Err(Error::Empty(_))));
    }

    #[test]
    fn quartile_assignment_by_rank() {
        let metrics: Vec<f64> = (0..17).map(|i| 50.0 - i as f64).collect();
        let corpus = category_with_metrics("jcr", "X", 2020, &metrics);
        let a = assign_quartiles(&rank_category(&corpus, "jcr", "X", 2020).unwrap()).unwrap();
        assert_eq!(a.quartiles["J03"], Quartile::Q1); // rank 4
        assert_eq!(a.quartiles["J04"], Quartile::Q2); // rank 5
        assert_eq!(a.quartiles["J12"], Quartile::Q4); // rank 13

        let corpus = category_with_metrics("jcr", "X", 2020, &[4.0, 3.0, 2.0, 1.0]);
        let a = assign_quartiles(&rank_category(&corpus, "jcr", "X", 2020).unwrap()).unwrap();
        let qs: Vec<Quartile> = a.quartiles.values().copied().collect();
        assert_eq!(qs, Quartile::ALL.to_vec());
    }

    #[test]
    fn tie_block_shares_quartile() {
        // ranks (1, 2, 2, 2, 5); cuts 1, 2, 3
        let corpus = category_with_metrics("jcr", "X", 2020, &[9.0, 5.0, 5.0, 5.0, 1.0]);
        let a = assign_quartiles(&rank_category(&corpus, "jcr", "X", 2020).unwrap()).unwrap();
        assert_eq!(a.bounds.cuts, [1, 2, 3]);
        assert_eq!(a.quartiles["J00"], Quartile::Q1);
        for j in ["J01", "J02", "J03"] {
            assert_eq!(a.quartiles[j], Quartile::Q2);
        }
        assert_eq!(a.quartiles["J04"], Quartile::Q4);
        assert_eq!(a.boundary_ties, vec![vec!["J01".to_string(), "J02".into(), "J03".into()]]);
    }

    fn two_category_corpus() -> Corpus {
        // A: J0 > J1 > J2 > J3; B: J3 > K0 > K1 > K2. J3 is Q4 in A, Q1 in B.
        Corpus::builder()
            .schema("jcr", false)
            .journal(Journal::new("J0").with_categories("jcr", ["A"]).with_metric(2020, 4.0))
            .journal(Journal::new("J1").with_categories("jcr", ["A"]).with_metric(2020, 3.0))
            .journal(Journal::new("J2").with_categories("jcr", ["A"]).with_metric(2020, 2.0))
            .journal(Journal::new("J3").with_categories("jcr", ["A", "B"]).with_metric(2020, 1.0))
            .journal(Journal::new("K0").with_categories("jcr", ["B"]).with_metric(2020, 0.5))
            .journal(Journal::new("K1").with_categories("jcr", ["B"]).with_metric(2020, 0.25))
            .journal(Journal::new("K2").with_categories("jcr", ["B"]).with_metric(2020, 0.125))
            .build(Strictness::Strict)
            .unwrap()
    }

    #[test]
    fn best_quartile_takes_minimum() {
        let corpus = two_category_corpus();
        assert_eq!(
            journal_quartiles(&corpus, "jcr", "J3", 2020).unwrap(),
            vec![("A".into(), Quartile::Q4), ("B".into(), Quartile::Q1)]
        );
        assert_eq!(best_quartile(&corpus, "jcr", "J3", 2020).unwrap(), Quartile::Q1);
        assert_eq!(best_quartile(&corpus, "jcr", "J2", 2020).unwrap(), Quartile::Q3);
        assert!(matches!(best_quartile(&corpus, "jcr", "J1", 2019), Err(Error::Unranked(_))));
    }

    #[test]
    fn average_percentile_over_categories() {
        let corpus = two_category_corpus();
        // J3: A rank 4/4 -> 12.5; B rank 1/4 -> 87.5
        assert_eq!(average_percentile(&corpus, "jcr", "J3", 2020).unwrap(), rational::int(50));
    }

    #[test]
    fn average_percentile_three_categories() {
        // 87.5 (rank 1/4), 50.0 (rank 1/1), 79.65.. (rank 18/86) -> 72.4
        let mean =
            (percentile(1, 4).unwrap() + percentile(1, 1).unwrap() + percentile(18, 86).unwrap()) / rational::int(3);
        assert_eq!(render_percentile(&mean), "72.4");
    }

    #[test]
    fn distribution_database_best_counts_once() {
        let corpus = two_category_corpus();
        let per = quartile_distribution(&corpus, "jcr", 2020, Level::Journals, DistributionMode::PerCategory).unwrap();
        assert_eq!(per.counts(), [2, 2, 2, 2]);
        let best =
            quartile_distribution(&corpus, "jcr", 2020, Level::Journals, DistributionMode::DatabaseBest).unwrap();
        assert_eq!(best.counts(), [2, 2, 2, 1]);
        assert_eq!(best.total, 7);
    }

    #[test]
    fn distribution_per_category_doubles_n17() {
        let mut b = Corpus::builder().schema("jcr", false);
        for cat in ["A", "B"] {
            for i in 0..17 {
                b.add_journal(
                    Journal::new(format!("{cat}{i:02}"))
                        .with_categories("jcr", [cat])
                        .with_metric(2020, 100.0 - i as f64),
                );
            }
        }
        let corpus = b.build(Strictness::Strict).unwrap();
        let r = quartile_distribution(&corpus, "jcr", 2020, Level::Journals, DistributionMode::PerCategory).unwrap();
        assert_eq!(r.counts(), [8, 8, 8, 10]);
        assert_eq!(r.total, 34);
        assert!(r.to_csv().starts_with("quartile,count,share\nQ1,8,0.2353\n"));
    }

    #[test]
    fn paper_level_shares_follow_volume() {
        let mut b = Corpus::builder().schema("jcr", false);
        for i in 0..8 {
            b.add_journal(
                Journal::new(format!("J{i}")).with_categories("jcr", ["A"]).with_metric(2020, 10.0 - i as f64),
            );
        }
        let mut corpus_b = b;
        // Q1 journals (J0, J1) publish 10 papers, Q4 (J6, J7) 1 paper, the rest 3.
        for i in 0..8 {
            let n = match i {
                0 | 1 => 10,
                6 | 7 => 1,
                _ => 3,
            };
            for k in 0..n {
                corpus_b.add_paper(Paper::new(format!("P{i}-{k}"), format!("J{i}"), 2020));
            }
        }
        let corpus = corpus_b.build(Strictness::Strict).unwrap();
        let r = quartile_distribution(&corpus, "jcr", 2020, Level::Papers, DistributionMode::PerCategory).unwrap();
        assert_eq!(r.counts(), [20, 6, 6, 2]);
        assert_eq!(r.shares[0], rational::ratio(20, 34));
        assert!(r.shares[0] > rational::ratio(1, 4));
    }

    proptest::proptest! {
        #[test]
        fn percentile_symmetry(total in 1u64..100_000, seed in 0u64..u64::MAX) {
            let rank = seed % total + 1;
            let sum = percentile(rank, total).unwrap() + percentile(total + 1 - rank, total).unwrap();
            proptest::prop_assert_eq!(sum, crate::rational::int(100));
            if rank < total {
                proptest::prop_assert!(percentile(rank, total).unwrap() > percentile(rank + 1, total).unwrap());
            }
        }

        #[test]
        fn partition_counts(total in 1u64..10_000) {
            let b = quartile_partition(total).unwrap();
            proptest::prop_assert_eq!(b.counts.iter().sum::<u64>(), total);
            proptest::prop_assert_eq!(b.counts[0], total / 4);
            proptest::prop_assert_eq!(*b.counts.iter().min().unwrap(), b.counts[0]);
        }
    }
}
