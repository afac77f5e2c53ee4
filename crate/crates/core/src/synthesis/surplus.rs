//! How floor-cut quartiles pile surplus journals into Q2–Q4.
//!
//! A category of N = 4q + r journals holds q in Q1 and one extra in Q4 when
//! r ≥ 1, in Q2 when r ≥ 2 and in Q3 when r = 3. Summed over categories the
//! expected extras relative to Q1 are n·P(r ≥ 2), n·P(r = 3), n·P(r ≥ 1).

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ranking::quartile_partition;
use crate::rational::{self, Exact, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurplusEstimate {
    pub num_categories: u64,
    pub total_journals: u64,
    /// Exact expected extras of Q2, Q3, Q4 over Q1.
    pub expected_extras: [Rational; 3],
    /// Extras rounded half-up.
    pub extras: [u64; 3],
    /// Per-quartile totals, rounded so that they sum to the journal count.
    pub totals: [u64; 4],
    /// Largest |total − mean| / mean.
    pub max_deviation: Rational,
}

impl SurplusEstimate {
    pub fn max_deviation_percent(&self) -> String {
        rational::render_decimal(&(&self.max_deviation * rational::int(100)), 1)
    }
}

impl Serialize for SurplusEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            num_categories: u64,
            total_journals: u64,
            expected_extras: Vec<Exact>,
            extras: [u64; 3],
            totals: [u64; 4],
            max_deviation_percent: Exact,
        }
        Out {
            num_categories: self.num_categories,
            total_journals: self.total_journals,
            expected_extras: self.expected_extras.iter().map(|e| Exact::new(e, 4)).collect(),
            extras: self.extras,
            totals: self.totals,
            max_deviation_percent: Exact::new(&(&self.max_deviation * rational::int(100)), 1),
        }
        .serialize(s)
    }
}

/// Extras for uniformly distributed remainders mod 4.
pub fn surplus_analytic(num_categories: u64, total_journals: u64) -> Result<SurplusEstimate> {
    let quarter = rational::ratio(1, 4);
    surplus_analytic_with(num_categories, total_journals, &[quarter.clone(), quarter.clone(), quarter.clone(), quarter])
}

/// Extras for an arbitrary remainder distribution `[P(r=0), .., P(r=3)]`.
pub fn surplus_analytic_with(
    num_categories: u64,
    total_journals: u64,
    remainder_probs: &[Rational; 4],
) -> Result<SurplusEstimate> {
    if num_categories == 0 {
        return Err(Error::Config("at least one category is needed".into()));
    }
    if total_journals < num_categories {
        return Err(Error::Config("fewer journals than categories".into()));
    }
    let sum = remainder_probs.iter().fold(Rational::zero(), |a, p| a + p);
    if sum != rational::int(1) || remainder_probs.iter().any(|p| p.is_negative()) {
        return Err(Error::Config("remainder probabilities must be non-negative and sum to 1".into()));
    }
    let n = rational::from_u64(num_categories);
    let [_, p1, p2, p3] = remainder_probs;
    let expected_extras = [&n * (p2 + p3), &n * p3, &n * (p1 + p2 + p3)];
    let extras = expected_extras.clone().map(|e| rational::round_half_up(&e).to_u64().expect("non-negative"));
    let extra_sum: u64 = extras.iter().sum();
    let q1 = (rational::from_u64(total_journals) - rational::from_u64(extra_sum)) / rational::int(4);
    let exact = [
        q1.clone(),
        &q1 + rational::from_u64(extras[0]),
        &q1 + rational::from_u64(extras[1]),
        &q1 + rational::from_u64(extras[2]),
    ];
    let totals = round_preserving_sum(&exact, total_journals);
    Ok(SurplusEstimate {
        num_categories,
        total_journals,
        expected_extras,
        extras,
        max_deviation: max_deviation(&totals),
        totals,
    })
}

/// The realized partition of concrete category sizes.
pub fn surplus_exact(sizes: &[u64]) -> Result<SurplusEstimate> {
    if sizes.is_empty() {
        return Err(Error::Empty("category list"));
    }
    let mut totals = [0u64; 4];
    for &n in sizes {
        let b = quartile_partition(n)?;
        for (t, c) in totals.iter_mut().zip(b.counts) {
            *t += c;
        }
    }
    let extras = [totals[1] - totals[0], totals[2] - totals[0], totals[3] - totals[0]];
    Ok(SurplusEstimate {
        num_categories: sizes.len() as u64,
        total_journals: totals.iter().sum(),
        expected_extras: extras.map(rational::from_u64),
        extras,
        max_deviation: max_deviation(&totals),
        totals,
    })
}

fn max_deviation(totals: &[u64; 4]) -> Rational {
    let sum: u64 = totals.iter().sum();
    if sum == 0 {
        return Rational::zero();
    }
    let mean = rational::ratio(sum as i64, 4);
    totals.iter().map(|&t| ((rational::from_u64(t) - &mean) / &mean).abs()).max().expect("four totals")
}

/// Largest-remainder rounding. Among equal remainders the units go to the
/// values below the mean first, which pulls the totals together.
fn round_preserving_sum(values: &[Rational; 4], target: u64) -> [u64; 4] {
    let mean = values.iter().fold(Rational::zero(), |a, v| a + v) / rational::int(4);
    let mut out = values.clone().map(|v| v.floor().to_integer().to_u64().unwrap_or(0));
    let missing = target - out.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| {
        let fa = &values[a] - values[a].floor();
        let fb = &values[b] - values[b].floor();
        fb.cmp(&fa).then_with(|| (values[a] >= mean).cmp(&(values[b] >= mean))).then(a.cmp(&b))
    });
    for &i in order.iter().take(missing as usize) {
        out[i] += 1;
    }
    out
}
