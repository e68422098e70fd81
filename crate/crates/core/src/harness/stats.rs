//! Per-method summary statistics and the Mann-Whitney rank-sum test.

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Both samples at most this long get the exact null distribution.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("rank-sum test needs at least two values per sample, got {0} and {1}")]
    TooSmall(usize, usize),
    #[error("sample contains NaN")]
    NotANumber,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSum {
    /// Pairs with `a > b`, ties counting one half.
    pub u: f64,
    /// Two-sided probability under the null of identical distributions.
    pub p: f64,
    /// Whether `p` came from full enumeration rather than the normal
    /// approximation.
    pub exact: bool,
}

/// Midranks (1-based) of `values`, ties sharing the mean of their ranks.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let r = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = r;
        }
        start = end;
    }
    ranks
}

fn u_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for x in a {
        for y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// Tail probabilities `(P[W ≤ w], P[W ≥ w])` of the rank sum of `na` items
/// drawn without replacement from `doubled` (twice the pooled midranks, so
/// every value is an integer).
fn exact_tails(doubled: &[usize], na: usize, w: usize) -> (f64, f64) {
    let max: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled-rank sum s. Counts stay
    // below C(20, 10), well inside exact f64 integers.
    let mut ways = vec![vec![0.0f64; max + 1]; na + 1];
    ways[0][0] = 1.0;
    for &r in doubled {
        for k in (1..=na).rev() {
            let (lo, hi) = ways.split_at_mut(k);
            let prev = &lo[k - 1];
            let cur = &mut hi[0];
            for s in (r..=max).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let dist = &ways[na];
    let total: f64 = dist.iter().sum();
    let below: f64 = dist[..=w].iter().sum();
    let above: f64 = dist[w..].iter().sum();
    (below / total, above / total)
}

/// Two-sided Mann-Whitney rank-sum test.
///
/// With both samples at most [`EXACT_LIMIT`] long the p-value is exact,
/// from the permutation distribution of the tied midranks. Larger samples
/// use the normal approximation with tie-corrected variance and a
/// continuity correction. All-equal data gives `p = 1`.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSum, StatsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatsError::TooSmall(a.len(), b.len()));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(StatsError::NotANumber);
    }
    let (na, nb) = (a.len(), b.len());
    let u = u_statistic(a, b);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let exact = na <= EXACT_LIMIT && nb <= EXACT_LIMIT;
    if pooled.iter().all(|&v| v == pooled[0]) {
        return Ok(RankSum { u, p: 1.0, exact });
    }
    let ranks = midranks(&pooled);
    if exact {
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r) as usize).collect();
        let w: usize = doubled[..na].iter().sum();
        let (below, above) = exact_tails(&doubled, na, w);
        let p = (2.0 * below.min(above)).min(1.0);
        return Ok(RankSum { u, p, exact });
    }
    let n = (na + nb) as f64;
    let mut ties = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    for group in sorted.chunk_by(|x, y| x == y) {
        let t = group.len() as f64;
        ties += t * t * t - t;
    }
    let (fa, fb) = (na as f64, nb as f64);
    let mean = fa * fb / 2.0;
    let var = fa * fb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let std_normal = Normal::standard();
    let p = (2.0 * std_normal.sf(z)).min(1.0);
    Ok(RankSum { u, p, exact })
}

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: String,
    pub runs: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    /// Set when a statistic is degenerate, e.g. a single-run group.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub rows: Vec<MethodSummary>,
    /// `p_values[i][j]` compares rows `i` and `j`; `None` when a group is
    /// too small to test.
    pub p_values: Vec<Vec<Option<f64>>>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

/// Max, min, mean, median and sample std of one non-empty group.
pub fn describe(method: &str, values: &[f64]) -> MethodSummary {
    assert!(!values.is_empty(), "group `{method}` has no runs");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (std, warning) = if values.len() < 2 {
        (0.0, Some("single run: std reported as 0".to_string()))
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        ((ss / (n - 1.0)).sqrt(), None)
    };
    MethodSummary {
        method: method.to_string(),
        runs: values.len(),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        mean,
        median: median(values),
        std,
        warning,
    }
}

/// Summary rows in input order plus every pairwise rank-sum p-value.
pub fn summarize(groups: &[(String, Vec<f64>)]) -> SummaryTable {
    let rows = groups.iter().map(|(m, v)| describe(m, v)).collect();
    let p_values = groups
        .iter()
        .map(|(_, a)| {
            groups
                .iter()
                .map(|(_, b)| rank_sum_test(a, b).ok().map(|r| r.p))
                .collect()
        })
        .collect();
    SummaryTable { rows, p_values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binomial(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    /// Enumerates every way of labelling `na` of the pooled values as
    /// sample a and counts how often the rank sum is at least as extreme.
    fn brute_force(a: &[f64], b: &[f64]) -> (f64, f64) {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let ranks = midranks(&pooled);
        let n = pooled.len();
        let w: f64 = ranks[..a.len()].iter().sum();
        let (mut below, mut above, mut total) = (0u64, 0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != a.len() {
                continue;
            }
            let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            total += 1;
            below += u64::from(s <= w);
            above += u64::from(s >= w);
        }
        let p = (2.0 * (below as f64 / total as f64).min(above as f64 / total as f64)).min(1.0);
        let mut u = 0.0;
        for x in a {
            for y in b {
                u += if x > y { 1.0 } else if x == y { 0.5 } else { 0.0 };
            }
        }
        (u, p)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn exact_test_matches_enumeration(
            a in proptest::collection::vec(0i32..6, 2..=7),
            b in proptest::collection::vec(0i32..6, 2..=7),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let r = rank_sum_test(&a, &b).unwrap();
            let (u, p) = brute_force(&a, &b);
            prop_assert_eq!(r.u, u);
            prop_assert!((r.p - p).abs() <= 1e-12, "{} vs {}", r.p, p);
        }

        #[test]
        fn swapping_samples_mirrors_u(
            a in proptest::collection::vec(-50.0f64..50.0, 2..15),
            b in proptest::collection::vec(-50.0f64..50.0, 2..15),
        ) {
            let ab = rank_sum_test(&a, &b).unwrap();
            let ba = rank_sum_test(&b, &a).unwrap();
            prop_assert_eq!(ab.u + ba.u, (a.len() * b.len()) as f64);
            prop_assert!((ab.p - ba.p).abs() < 1e-12);
            prop_assert!(ab.p > 0.0 && ab.p <= 1.0);
        }
    }

    #[test]
    fn separated_samples_hit_the_smallest_exact_p() {
        let a: Vec<f64> = (1..=10).map(f64::from).collect();
        let b: Vec<f64> = (11..=20).map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        assert_eq!(r.u, 0.0);
        assert!(r.exact);
        let want = 2.0 / binomial(20, 10);
        assert!((r.p - want).abs() < 1e-18);
        assert!((r.p - 1.0825e-5).abs() < 1e-9);
    }

    #[test]
    fn identical_and_degenerate_samples_give_one() {
        let a = [3.0, 1.0, 4.0, 1.0, 5.0];
        assert_eq!(rank_sum_test(&a, &a).unwrap().p, 1.0);
        assert_eq!(rank_sum_test(&[1.0, 2.0], &[1.0, 2.0]).unwrap().p, 1.0);
        assert_eq!(rank_sum_test(&[7.0; 12], &[7.0; 15]).unwrap().p, 1.0);
        assert_eq!(rank_sum_test(&[1.0], &[2.0, 3.0]), Err(StatsError::TooSmall(1, 2)));
        assert_eq!(rank_sum_test(&[1.0, f64::NAN], &[2.0, 3.0]), Err(StatsError::NotANumber));
    }

    #[test]
    fn large_samples_use_corrected_normal_approximation() {
        let a: Vec<f64> = (0..12).map(f64::from).collect();
        let b: Vec<f64> = (6..18).map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        assert!(!r.exact);
        // Overlap 6..12 gives 6 ties of size two; U = 6·0.5 + 15 pairs above.
        assert_eq!(r.u, 18.0);
        let var: f64 = 144.0 / 12.0 * (25.0 - 36.0 / (24.0 * 23.0));
        let z = ((18.0f64 - 72.0).abs() - 0.5) / var.sqrt();
        let want = 2.0 * Normal::standard().sf(z);
        assert!((r.p - want).abs() < 1e-15);
    }

    #[test]
    fn describe_small_group() {
        let s = describe("x", &[4.0, 1.0, 3.0, 2.0]);
        assert_eq!((s.max, s.min, s.mean, s.median), (4.0, 1.0, 2.5, 2.5));
        assert!((s.std - 1.290_994_448_735_805_6).abs() < 1e-12);
        assert!(s.warning.is_none());
        let one = describe("y", &[9.0]);
        assert_eq!(one.std, 0.0);
        assert!(one.warning.is_some());
    }

    #[test]
    fn ten_run_groups_match_hand_computation() {
        let a = [10.0, 12.0, 9.0, 15.0, 11.0, 13.0, 10.0, 14.0, 8.0, 18.0];
        let s = describe("a", &a);
        // Sum 120, mean 12; squared deviations 4+0+9+9+1+1+4+4+16+36 = 84.
        assert_eq!(s.mean, 12.0);
        assert_eq!(s.median, 11.5);
        assert!((s.std - (84.0f64 / 9.0).sqrt()).abs() < 1e-12);
        let b: Vec<f64> = a.iter().map(|v| v + 100.0).collect();
        let t = summarize(&[("a".into(), a.to_vec()), ("b".into(), b)]);
        assert_eq!(t.rows.len(), 2);
        let p = t.p_values[0][1].unwrap();
        assert!((p - 2.0 / binomial(20, 10)).abs() < 1e-18);
        assert_eq!(t.p_values[0][1], t.p_values[1][0]);
        assert_eq!(t.p_values[0][0], Some(1.0));
    }
}
