//! Small hand-built corpora reproducing the classic worked examples:
//! the two-paper world with one multi-field paper, the 100- and 105-paper
//! threshold cells, the 2011 mathematics cell with nine papers tied at the
//! highly-cited threshold, and a lab-versus-country reversal.
//!
//! Citations are real edges. Citing papers live in a journal without any
//! category so they never enter a cell.

use chrono::NaiveDate;

use crate::corpus::{AuthorCredit, CitationEdge, Corpus, CorpusBuilder, Journal, Paper, PaperDate, Strictness};

pub const FIELD_SCHEMA: &str = "wos";
pub const ESI_SCHEMA: &str = "esi";
pub const CITER_JOURNAL: &str = "CITERS";

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid fixture date")
}

fn citer_id(i: usize) -> String {
    format!("C{i:04}")
}

/// Adds `n` unclassified citing papers published in `year`.
fn add_citers(builder: &mut CorpusBuilder, n: usize, year: i32) {
    for i in 0..n {
        builder.add_paper(Paper::new(citer_id(i), CITER_JOURNAL, year));
    }
}

/// P1 (field A only) and P2 (fields A and B), same year and type, cited
/// `c1` and `c2` times.
pub fn two_fields(c1: u64, c2: u64) -> Corpus {
    let mut b = Corpus::builder()
        .schema(FIELD_SCHEMA, false)
        .journal(Journal::new("JA").with_categories(FIELD_SCHEMA, ["A"]))
        .journal(Journal::new("JAB").with_categories(FIELD_SCHEMA, ["A", "B"]))
        .journal(Journal::new(CITER_JOURNAL))
        .paper(Paper::new("P1", "JA", 2020))
        .paper(Paper::new("P2", "JAB", 2020));
    add_citers(&mut b, c1.max(c2) as usize, 2021);
    for i in 0..c1 as usize {
        b.add_edge(CitationEdge::new(citer_id(i), "P1"));
    }
    for i in 0..c2 as usize {
        b.add_edge(CitationEdge::new(citer_id(i), "P2"));
    }
    b.build(Strictness::Strict).expect("two_fields fixture")
}

/// One (field, year, article) cell whose papers receive the given citation
/// counts. Papers are `X000`, `X001`, ... in input order.
pub fn cell_with_counts(schema: &str, field: &str, year: i32, counts: &[u64]) -> Corpus {
    let mut b = Corpus::builder()
        .schema(schema, true)
        .journal(Journal::new("J").with_categories(schema, [field]))
        .journal(Journal::new(CITER_JOURNAL));
    let max = counts.iter().copied().max().unwrap_or(0) as usize;
    add_citers(&mut b, max, year + 1);
    for (i, &c) in counts.iter().enumerate() {
        let id = format!("X{i:03}");
        b.add_paper(
            Paper::new(id.clone(), "J", year).with_author(AuthorCredit::new(format!("a{i}"), [format!("E{}", i % 3)])),
        );
        for k in 0..c as usize {
            b.add_edge(CitationEdge::new(citer_id(k), id.clone()));
        }
    }
    b.build(Strictness::Strict).expect("cell fixture")
}

/// 100 papers in one cell: 90 cited once, 10 uncited.
pub fn hundred_papers() -> Corpus {
    let counts: Vec<u64> = (0..100).map(|i| u64::from(i < 90)).collect();
    cell_with_counts(ESI_SCHEMA, "F", 2020, &counts)
}

/// 105 papers: 90 uncited, 10 with 10 citations, 5 with 20.
pub fn hundred_five_papers() -> Corpus {
    let mut counts = vec![0u64; 90];
    counts.extend([10; 10]);
    counts.extend([20; 5]);
    cell_with_counts(ESI_SCHEMA, "F", 2020, &counts)
}

/// One of the nine 2011 mathematics papers tied at 88 citations.
#[derive(Clone, Copy, Debug)]
pub struct BorderlineRow {
    pub no: u8,
    pub journal: &'static str,
    pub online: (i32, u32, u32),
    pub issue_month: u32,
    /// Citations dated 2011–2015.
    pub early: u64,
    /// Citations dated 2016–2020.
    pub late: u64,
    /// How many of the citing papers are themselves highly cited.
    pub hcp_citers: u64,
}

pub const BORDERLINE_CITATIONS: u64 = 88;

pub const BORDERLINE_ROWS: [BorderlineRow; 9] = [
    BorderlineRow {
        no: 1,
        journal: "annals-math",
        online: (2011, 11, 1),
        issue_month: 11,
        early: 30,
        late: 58,
        hcp_citers: 2,
    },
    BorderlineRow {
        no: 2,
        journal: "biometrical-j",
        online: (2011, 8, 12),
        issue_month: 11,
        early: 22,
        late: 57,
        hcp_citers: 11,
    },
    BorderlineRow {
        no: 3,
        journal: "publ-rims",
        online: (2011, 7, 13),
        issue_month: 7,
        early: 41,
        late: 45,
        hcp_citers: 1,
    },
    BorderlineRow {
        no: 4,
        journal: "appl-math-comput",
        online: (2011, 5, 20),
        issue_month: 8,
        early: 42,
        late: 44,
        hcp_citers: 7,
    },
    BorderlineRow {
        no: 5,
        journal: "comput-math-appl",
        online: (2011, 3, 26),
        issue_month: 5,
        early: 40,
        late: 38,
        hcp_citers: 2,
    },
    BorderlineRow {
        no: 6,
        journal: "stoch-proc-appl",
        online: (2011, 3, 22),
        issue_month: 7,
        early: 28,
        late: 56,
        hcp_citers: 1,
    },
    BorderlineRow {
        no: 7,
        journal: "comm-pure-appl-math",
        online: (2011, 2, 1),
        issue_month: 5,
        early: 31,
        late: 55,
        hcp_citers: 3,
    },
    BorderlineRow {
        no: 8,
        journal: "appl-math-comput",
        online: (2011, 1, 6),
        issue_month: 3,
        early: 43,
        late: 43,
        hcp_citers: 3,
    },
    BorderlineRow {
        no: 9,
        journal: "stoch-proc-appl",
        online: (2010, 10, 28),
        issue_month: 2,
        early: 45,
        late: 43,
        hcp_citers: 3,
    },
];

pub fn borderline_id(no: u8) -> String {
    format!("BL-{no}")
}

pub const MATH_TOTAL: usize = 38_048;
pub const MATH_ABOVE: usize = 376;
const POOL_PER_YEAR: usize = 30;
const POOL_FIRST_YEAR: i32 = 2011;
const POOL_YEARS: usize = 11;

fn pool_id(year: i32, k: usize) -> String {
    format!("C{year}-{k:02}")
}

fn pool_date(year: i32) -> NaiveDate {
    date(year, 6, 15)
}

fn math_journals(b: &mut CorpusBuilder) {
    let mut names: Vec<&str> = BORDERLINE_ROWS.iter().map(|r| r.journal).collect();
    names.sort_unstable();
    names.dedup();
    for name in names {
        b.add_journal(Journal::new(name).with_categories(ESI_SCHEMA, ["Mathematics"]));
    }
    for j in 0..20 {
        b.add_journal(Journal::new(format!("math-{j:02}")).with_categories(ESI_SCHEMA, ["Mathematics"]));
    }
    b.add_journal(Journal::new(CITER_JOURNAL));
    for year in POOL_FIRST_YEAR..POOL_FIRST_YEAR + POOL_YEARS as i32 {
        for k in 0..POOL_PER_YEAR {
            b.add_paper(Paper::new(pool_id(year, k), CITER_JOURNAL, year));
        }
    }
}

fn borderline_paper(row: &BorderlineRow) -> Paper {
    let (y, m, d) = row.online;
    Paper::new(borderline_id(row.no), row.journal, 2011)
        .with_online_date(date(y, m, d))
        .with_pub_date(PaperDate::month(2011, row.issue_month).expect("month"))
        .with_author(AuthorCredit::new(format!("author-{}", row.no), [format!("inst-{}", row.no)]))
}

/// Dated pool citations for one borderline paper, excluding its citations
/// from highly cited papers (which the caller dates in 2011).
fn borderline_pool_edges(b: &mut CorpusBuilder, row: &BorderlineRow, hcp_in_early: u64) {
    let id = borderline_id(row.no);
    let offset = row.no as usize * 3;
    let mut spread = |count: u64, first: i32, years: usize| {
        for k in 0..count as usize {
            let year = first + (k % years) as i32;
            let slot = (offset + k / years) % POOL_PER_YEAR;
            b.add_edge(CitationEdge::new(pool_id(year, slot), id.clone()).dated(pool_date(year)));
        }
    };
    spread(row.early - hcp_in_early, 2011, 5);
    spread(row.late, 2016, 5);
    spread(BORDERLINE_CITATIONS - row.early - row.late, 2021, 1);
}

/// Only the nine tied papers and their dated citations; no highly cited citers.
pub fn borderline_only() -> Corpus {
    let mut b = Corpus::builder().schema(ESI_SCHEMA, true);
    math_journals(&mut b);
    for row in &BORDERLINE_ROWS {
        b.add_paper(borderline_paper(row));
        borderline_pool_edges(&mut b, row, 0);
    }
    b.build(Strictness::Strict).expect("borderline fixture")
}

/// The full 2011 mathematics article cell: 38,048 papers, 376 above 88
/// citations, the nine tied papers at 88, the rest cited 0–5 times.
pub fn math_2011() -> Corpus {
    let mut b = Corpus::builder().schema(ESI_SCHEMA, true);
    math_journals(&mut b);
    let pool_size = POOL_PER_YEAR * POOL_YEARS;
    let pool_at = |i: usize| {
        let year = POOL_FIRST_YEAR + (i / POOL_PER_YEAR) as i32;
        (pool_id(year, i % POOL_PER_YEAR), year)
    };

    for t in 0..MATH_ABOVE {
        let id = format!("M-top-{t:03}");
        b.add_paper(Paper::new(id.clone(), format!("math-{:02}", t % 20), 2011));
        let c = 89 + (t % 40);
        for j in 0..c {
            let (citer, year) = pool_at((t * 7 + j) % pool_size);
            b.add_edge(CitationEdge::new(citer, id.clone()).dated(pool_date(year)));
        }
    }
    let mut next_top = 0usize;
    for row in &BORDERLINE_ROWS {
        b.add_paper(borderline_paper(row));
        for _ in 0..row.hcp_citers {
            let citer = format!("M-top-{:03}", next_top % MATH_ABOVE);
            next_top += 1;
            b.add_edge(CitationEdge::new(citer, borderline_id(row.no)).dated(date(2011, 12, 15)));
        }
        borderline_pool_edges(&mut b, row, row.hcp_citers);
    }
    let rest = MATH_TOTAL - MATH_ABOVE - BORDERLINE_ROWS.len();
    for i in 0..rest {
        let id = format!("M-{i:05}");
        b.add_paper(Paper::new(id.clone(), format!("math-{:02}", i % 20), 2011));
        for j in 0..i % 6 {
            let (citer, year) = pool_at((i * 13 + j) % pool_size);
            b.add_edge(CitationEdge::new(citer, id.clone()).dated(pool_date(year)));
        }
    }
    b.build(Strictness::Strict).expect("math fixture")
}

pub const REVERSAL_SUBUNIT: &str = "institute";
pub const REVERSAL_REFERENCE: &str = "country";

/// Six papers in two fields. The country is weak in chemistry and strong in
/// medicine; its chemistry institute beats the country's chemistry average
/// while trailing the country's all-field CNCI.
pub fn relative_reversal() -> Corpus {
    let specs: [(&str, &str, u64, &[&str]); 6] = [
        ("W1", "JC", 10, &["abroad"]),
        ("W2", "JC", 10, &["abroad"]),
        ("R1", "JC", 2, &[REVERSAL_REFERENCE]),
        ("R2", "JC", 4, &[REVERSAL_REFERENCE, REVERSAL_SUBUNIT]),
        ("W3", "JM", 1, &["abroad"]),
        ("R3", "JM", 9, &[REVERSAL_REFERENCE]),
    ];
    let mut b = Corpus::builder()
        .schema(FIELD_SCHEMA, false)
        .journal(Journal::new("JC").with_categories(FIELD_SCHEMA, ["Chemistry"]))
        .journal(Journal::new("JM").with_categories(FIELD_SCHEMA, ["Medicine"]))
        .journal(Journal::new(CITER_JOURNAL));
    add_citers(&mut b, 10, 2020);
    for (id, journal, c, entities) in specs {
        b.add_paper(
            Paper::new(id, journal, 2019).with_author(AuthorCredit::new(format!("{id}-a"), entities.iter().copied())),
        );
        for k in 0..c as usize {
            b.add_edge(CitationEdge::new(citer_id(k), id));
        }
    }
    b.build(Strictness::Strict).expect("reversal fixture")
}

/// A category of journals with the given metrics for `year`, ids `J00`, `J01`, ...
pub fn category_with_metrics(schema: &str, category: &str, year: i32, metrics: &[f64]) -> Corpus {
    let mut b = Corpus::builder().schema(schema, false);
    for (i, &m) in metrics.iter().enumerate() {
        b.add_journal(Journal::new(format!("J{i:02}")).with_categories(schema, [category]).with_metric(year, m));
    }
    b.build(Strictness::Strict).expect("category fixture")
}
