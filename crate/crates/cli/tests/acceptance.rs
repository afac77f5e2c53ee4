//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use biblio_core::corpus::{Corpus, PaperIdx};
use biblio_core::excellence::{
    analyze, provisional_hcp_set, tiebreak_citing_excellence, CellOutcome, ClassMethod, ExcellenceConfig, HcpStatus,
    Selection, TiebreakKey, TiebreakMethod,
};
use biblio_core::fixtures::{self, borderline_id, BORDERLINE_ROWS, ESI_SCHEMA, FIELD_SCHEMA};
use biblio_core::normalization::{
    cnci_paper, compute_baselines, global_cnci, relative_cnci, Aggregation, BaselineTable, CnciConfig, Counting,
};
use biblio_core::ranking::{percentile, quartile_partition, render_percentile};
use biblio_core::rational::{int, ratio, Rational};
use biblio_core::synthesis::{
    generate_corpus, monte_carlo_surplus, stream_rng, surplus_analytic, CountSpec, GenConfig, PINNED_REGIMES, REGIMES,
};
use rand::Rng;

use common::{biblio, on_disk, path};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn expected(table: &BaselineTable, field: &str) -> Rational {
    table.cells.iter().find(|(k, _)| k.field == field).map(|(_, c)| c.expected.clone()).unwrap_or_else(|| int(0))
}

fn paper_cnci(corpus: &Corpus, id: &str, table: &BaselineTable) -> Result<Rational, String> {
    cnci_paper(corpus, corpus.paper_idx(id).ok_or("missing paper")?, table).map_err(e)
}

fn ac1() -> Check {
    let start = Instant::now();
    let corpus = fixtures::two_fields(1, 2);
    let whole = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Whole).map_err(e)?;
    let frac = compute_baselines(&corpus, FIELD_SCHEMA, Counting::Fractional).map_err(e)?;
    ensure((expected(&whole, "A"), expected(&whole, "B")) == (ratio(3, 2), int(2)), || "whole baselines".into())?;
    ensure((expected(&frac, "A"), expected(&frac, "B")) == (ratio(4, 3), int(2)), || "fractional baselines".into())?;
    let per_whole = (paper_cnci(&corpus, "P1", &whole)?, paper_cnci(&corpus, "P2", &whole)?);
    ensure(per_whole == (ratio(2, 3), ratio(7, 6)), || format!("whole per-paper {per_whole:?}"))?;
    let per_frac = (paper_cnci(&corpus, "P1", &frac)?, paper_cnci(&corpus, "P2", &frac)?);
    ensure(per_frac == (ratio(3, 4), ratio(5, 4)), || format!("fractional per-paper {per_frac:?}"))?;

    let aor = |c| CnciConfig::new(c, Aggregation::AverageOfRatios);
    let split = CnciConfig::new(Counting::Whole, Aggregation::RatioOfAverages).with_split_citations();
    let g = |corpus: &Corpus, cfg: &CnciConfig| global_cnci(corpus, FIELD_SCHEMA, cfg).map_err(e);
    ensure(g(&corpus, &aor(Counting::Whole))? == ratio(11, 12), || "whole global".into())?;
    ensure(g(&fixtures::two_fields(2, 1), &aor(Counting::Whole))? == ratio(13, 12), || "swapped global".into())?;
    ensure(g(&corpus, &aor(Counting::Fractional))? == int(1), || "fractional global".into())?;
    ensure(g(&corpus, &split)? == int(1), || "split ratio of averages".into())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("baselines, per-paper and global values exact in {:.2?}", start.elapsed()))
}

fn ac2() -> Check {
    let start = Instant::now();
    let expected = [[4, 4, 4, 4], [4, 4, 4, 5], [4, 5, 4, 5], [4, 5, 5, 5]];
    for (n, want) in (16..=19).zip(expected) {
        let got = quartile_partition(n).map_err(e)?.counts;
        ensure(got == want, || format!("N={n}: {got:?}"))?;
    }
    for n in 1..=10_000u64 {
        let c = quartile_partition(n).map_err(e)?.counts;
        let q = n / 4;
        ensure(c.iter().sum::<u64>() == n, || format!("N={n}: sum"))?;
        ensure(c[0] == q && c.iter().all(|&x| x >= c[0]), || format!("N={n}: Q1 not the minimum"))?;
        let extras = [c[1] - q, c[2] - q, c[3] - q];
        let pattern = match n % 4 {
            0 => [0, 0, 0],
            1 => [0, 0, 1],
            2 => [1, 0, 1],
            _ => [1, 1, 1],
        };
        ensure(extras == pattern, || format!("N={n}: remainder pattern {extras:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("N = 16..19 exact, invariants hold for N = 1..10000 in {:.2?}", start.elapsed()))
}

fn ac3() -> Check {
    let rendered = render_percentile(&percentile(18, 86).map_err(e)?);
    ensure(rendered == "79.7", || format!("percentile(18, 86) = {rendered}"))?;
    let mut rng = stream_rng(2024, 0);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=100_000u64);
        let r = rng.random_range(1..=n);
        let sum = percentile(r, n).map_err(e)? + percentile(n + 1 - r, n).map_err(e)?;
        ensure(sum == int(100), || format!("symmetry fails at r={r}, N={n}"))?;
    }
    Ok("79.7 rendered; symmetry exact on 10000 random (r, N)".into())
}

fn ac4() -> Check {
    let start = Instant::now();
    let s = surplus_analytic(236, 12_100).map_err(e)?;
    ensure(s.extras == [118, 59, 177], || format!("extras {:?}", s.extras))?;
    ensure(s.totals == [2937, 3054, 2996, 3113], || format!("totals {:?}", s.totals))?;
    // The exact deviation is 88/3025 (2.909%); the bound applies at one decimal.
    let deviation: f64 = s.max_deviation_percent().parse().map_err(e)?;
    ensure(deviation <= 2.9, || format!("max deviation {}%", s.max_deviation_percent()))?;
    let mc = monte_carlo_surplus(&GenConfig::new(236, CountSpec::Uniform([20, 59])), 10_000).map_err(e)?;
    ensure(mc.agrees.iter().all(|a| *a == Some(true)), || format!("Monte Carlo extras {:?}", mc.extras))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    let means: Vec<String> = mc.extras.iter().map(|x| format!("{:.1}", x.mean)).collect();
    Ok(format!(
        "extras +118/+59/+177, max deviation {}%, Monte Carlo means {} in {:.2?}",
        s.max_deviation_percent(),
        means.join("/"),
        start.elapsed()
    ))
}

fn weight_sum(outcomes: &[CellOutcome]) -> Rational {
    outcomes.iter().flat_map(|o| &o.decisions).fold(int(0), |a, d| a + d.status.weight())
}

fn run(corpus: &Corpus, method: ClassMethod, low: bool) -> Result<Vec<CellOutcome>, String> {
    let cfg = ExcellenceConfig { esi_low_threshold: low, ..Default::default() };
    analyze(corpus, ESI_SCHEMA, &cfg, &Selection::Classify(method), |_| true).map_err(e)
}

fn ac5() -> Check {
    let hundred = fixtures::hundred_papers();
    let inclusive = run(&hundred, ClassMethod::Inclusive, false)?;
    let full = inclusive[0].decisions.iter().filter(|d| d.status == HcpStatus::Full).count();
    ensure(full == 90, || format!("inclusive gives {full}"))?;
    ensure(weight_sum(&run(&hundred, ClassMethod::Inclusive, true)?) == int(0), || "low-threshold rule".into())?;
    ensure(weight_sum(&run(&hundred, ClassMethod::Exclusive, false)?) == int(0), || "exclusive".into())?;
    for corpus in [hundred, fixtures::hundred_five_papers()] {
        let out = run(&corpus, ClassMethod::FractionalWs, false)?;
        let quota = int(out[0].threshold.quota as i64);
        let sum = weight_sum(&out);
        ensure(sum == quota, || format!("fractional weights sum to {sum}, quota {quota}"))?;
    }
    Ok("inclusive 90 (90.0%), low-threshold 0, exclusive 0, fractional weights equal the quota".into())
}

/// Table rows whose paper ends up highly cited.
fn rows_selected(outcome: &CellOutcome) -> Vec<u8> {
    BORDERLINE_ROWS
        .iter()
        .filter(|row| outcome.decisions.iter().any(|d| d.paper_id == borderline_id(row.no) && d.status.is_hcp()))
        .map(|row| row.no)
        .collect()
}

fn row_of(corpus: &Corpus, idx: PaperIdx) -> u8 {
    corpus.paper(idx).id.trim_start_matches("BL-").parse().unwrap_or(0)
}

fn ac6() -> Check {
    let start = Instant::now();
    let corpus = fixtures::math_2011();
    let cfg = ExcellenceConfig::default();
    let quota = |chain| analyze(&corpus, ESI_SCHEMA, &cfg, &Selection::Quota(chain), |_| true).map_err(e);

    let chrono = quota(vec![TiebreakMethod::Chronology])?;
    let t = &chrono[0].threshold;
    ensure(
        (t.n, t.quota, t.threshold, t.above_count) == (fixtures::MATH_TOTAL, 380, Some(88), fixtures::MATH_ABOVE),
        || format!("threshold {t:?}"),
    )?;
    let rows = rows_selected(&chrono[0]);
    ensure(rows == [1, 2, 3, 4], || format!("chronology selects {rows:?}"))?;
    let rows = rows_selected(&quota(vec![TiebreakMethod::trajectory()])?[0]);
    ensure(rows == [1, 2, 6, 7], || format!("trajectory selects {rows:?}"))?;

    let provisional = provisional_hcp_set(&corpus, ESI_SCHEMA, &cfg).map_err(e)?;
    let borderline: Vec<PaperIdx> =
        BORDERLINE_ROWS.iter().filter_map(|r| corpus.paper_idx(&borderline_id(r.no))).collect();
    let order = tiebreak_citing_excellence(&corpus, &borderline, &provisional).map_err(e)?;
    let head: Vec<(TiebreakKey, Vec<u8>)> = order.groups[..3]
        .iter()
        .map(|g| (g.key.clone(), g.papers.iter().map(|&i| row_of(&corpus, i)).collect()))
        .collect();
    let want = vec![
        (TiebreakKey::Count(11), vec![2]),
        (TiebreakKey::Count(7), vec![4]),
        (TiebreakKey::Count(3), vec![7, 8, 9]),
    ];
    ensure(head == want, || format!("citing-excellence groups {head:?}"))?;
    let alone = quota(vec![TiebreakMethod::CitingExcellence])?;
    ensure(alone[0].fallback_used, || "three-way tie not flagged".into())?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "quota 380 at 88; chronology 1-4, trajectory 1,2,6,7, citing 2 (11), 4 (7), tie 7-9 at 3 flagged in {:.2?}",
        start.elapsed()
    ))
}

fn ac7() -> Check {
    const CORPORA: u64 = 1000;
    let mut failures = Vec::new();
    for seed in 0..CORPORA {
        let mut cfg = GenConfig::new(1 + (seed % 4) as usize, CountSpec::Uniform([1, 4]));
        cfg.seed = seed;
        cfg.multi_attribution_prob = if seed % 5 == 0 { 0.0 } else { 0.5 };
        cfg.max_categories = 3;
        cfg.papers_per_journal = CountSpec::Uniform([1, 3]);
        cfg.max_citations = 30;
        cfg.years = vec![2019, 2020];
        let corpus = generate_corpus(&cfg).map_err(e)?;
        let single = cfg.single_attribution();
        for &(name, counting, aggregation, split) in &REGIMES {
            let mut c = CnciConfig::new(counting, aggregation);
            c.split_citations = split;
            let value = global_cnci(&corpus, &cfg.schema, &c).map_err(e)?;
            let pinned = single || PINNED_REGIMES.contains(&name);
            if pinned && value != int(1) {
                failures.push(format!("seed {seed} {name} = {value}"));
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    Ok(format!("{CORPORA} random corpora, every pinned regime exactly 1"))
}

fn ac8() -> Check {
    let corpus = fixtures::relative_reversal();
    let sub = corpus.entity_papers(fixtures::REVERSAL_SUBUNIT);
    let reference = corpus.entity_papers(fixtures::REVERSAL_REFERENCE);
    let cfg = CnciConfig::new(Counting::Whole, Aggregation::AverageOfRatios);
    let eval =
        |papers: &[PaperIdx]| biblio_core::normalization::evaluate(&corpus, FIELD_SCHEMA, papers, &cfg).map_err(e);
    let naive = eval(&sub)? / eval(&reference)?;
    let relative = relative_cnci(&corpus, &sub, &reference, FIELD_SCHEMA, Counting::Whole).map_err(e)?.value;
    ensure(naive < int(1) && relative > int(1), || format!("naive {naive}, relative {relative}"))?;
    ensure((naive.clone(), relative.clone()) == (ratio(40, 59), ratio(4, 3)), || "exact values".into())?;
    Ok(format!("naive ratio {naive} < 1 while relative CNCI {relative} > 1"))
}

fn ac9() -> Check {
    let two_fields = on_disk(&fixtures::two_fields(1, 2));
    let hundred = on_disk(&fixtures::hundred_papers());
    let reversal = on_disk(&fixtures::relative_reversal());
    let metrics = on_disk(&fixtures::category_with_metrics("wos", "Optics", 2020, &[9.0, 8.0, 8.0, 5.0, 4.0]));
    let work = tempfile::tempdir().map_err(e)?;
    let config = work.path().join("gen.toml");
    std::fs::write(&config, "num_categories = 3\njournals_per_category = { uniform = [2, 5] }\nmulti_attribution_prob = 0.4\nmax_citations = 15\n")
        .map_err(e)?;
    let (f, h, r, m, c) =
        (path(two_fields.path()), path(hundred.path()), path(reversal.path()), path(metrics.path()), path(&config));
    let sim_a = work.path().join("a");
    let sim_b = work.path().join("b");

    let invocations: BTreeMap<&str, Vec<Vec<&str>>> = BTreeMap::from([
        ("validate", vec![vec!["validate", "--corpus", f]]),
        ("rank", vec![vec!["rank", "--corpus", m, "--category", "Optics", "--year", "2020"]]),
        (
            "percentile",
            vec![
                vec!["percentile", "--rank", "18", "--total", "86"],
                vec!["percentile", "--corpus", m, "--journal", "J01", "--year", "2020"],
            ],
        ),
        (
            "quartiles",
            vec![
                vec!["quartiles", "--corpus", m, "--year", "2020", "--format", "csv"],
                vec!["quartiles", "--partition", "19"],
            ],
        ),
        ("baselines", vec![vec!["baselines", "--corpus", f, "--counting", "fractional"]]),
        ("cnci", vec![vec!["cnci", "--corpus", f, "--counting", "fractional", "--aggregation", "aor"]]),
        (
            "relative-cnci",
            vec![vec!["relative-cnci", "--corpus", r, "--subunit", "institute", "--reference", "country"]],
        ),
        (
            "hcp",
            vec![vec![
                "hcp",
                "--corpus",
                h,
                "--method",
                "quota",
                "--tiebreak",
                "chronology,citing-excellence",
                "--include-none",
            ]],
        ),
        ("hcp-report", vec![vec!["hcp-report", "--corpus", h, "--no-esi-low-threshold"]]),
        ("entity-share", vec![vec!["entity-share", "--corpus", h, "--entity", "E1", "--counting", "fractional"]]),
        (
            "simulate",
            vec![
                vec!["simulate", "--experiment", "global-cnci", "--config", c, "--trials", "8"],
                vec!["simulate", "--experiment", "surplus", "--config", c, "--trials", "50"],
                vec!["simulate", "--experiment", "analytic", "--categories", "236", "--journals", "12100"],
            ],
        ),
    ]);
    for (name, runs) in &invocations {
        for args in runs {
            let (a, b) = (biblio(args), biblio(args));
            ensure(a.code == 0, || format!("{name} exited {}: {}", a.code, a.stderr))?;
            ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{name} output differs between runs"))?;
        }
    }
    for dir in [&sim_a, &sim_b] {
        let run = biblio(&["simulate", "--experiment", "corpus", "--config", c, "--out-dir", path(dir)]);
        ensure(run.code == 0, || format!("simulate corpus: {}", run.stderr))?;
    }
    for file in ["journals.jsonl", "papers.jsonl", "edges.jsonl"] {
        let same = std::fs::read(sim_a.join(file)).map_err(e)? == std::fs::read(sim_b.join(file)).map_err(e)?;
        ensure(same, || format!("generated {file} differs"))?;
    }
    let names: Vec<&str> = invocations.keys().copied().collect();
    ensure(names.len() == 11, || "a subcommand is missing".into())?;
    Ok(format!("{} subcommands byte-identical across two runs", names.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 two-field exact values", ac1),
        ("AC2 quartile partitions", ac2),
        ("AC3 percentiles", ac3),
        ("AC4 quartile surplus", ac4),
        ("AC5 threshold classification", ac5),
        ("AC6 borderline tie-breaks", ac6),
        ("AC7 global-mean theorem", ac7),
        ("AC8 relative CNCI reversal", ac8),
        ("AC9 CLI determinism", ac9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of 9 acceptance criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
