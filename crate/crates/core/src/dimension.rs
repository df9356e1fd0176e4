//! Dimension estimates: dyadic box counting on covers of `Λ(x)`, the local
//! dimension scan, word counts of the subshift avoiding `0^k`, and the
//! parameters `γ_j`.

use log::warn;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::coding::GreedyExpansion;
use crate::error::{Error, Result};
use crate::exact_arith::{pow2, solve_lambda, to_f64, Bracket, Code, Rational};
use crate::lambda_set::{cover, CoverLevel};

/// Box counts of a window of the deepest cover level and the fitted slope.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub window: (Rational, Rational),
    /// `(t, count)`: boxes of size `2^-t` meeting the clipped cover.
    pub grid_levels: Vec<(u32, u64)>,
    pub slope: f64,
    /// True when the fitted slope left `[0, 1]` and was clamped.
    pub clamped: bool,
    /// `log m / (−log λ)` at the window centre, when requested.
    pub theoretical: Option<f64>,
}

/// `log m / (−log λ)`.
pub fn theoretical_dimension(m: u32, lambda: f64) -> f64 {
    f64::from(m).ln() / -lambda.ln()
}

fn floor_scaled(r: &Rational, t: u32) -> BigInt {
    (r * pow2(i64::from(t))).floor().to_integer()
}

/// Least-squares slope of `y` against `x`.
fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Counts dyadic boxes (anchored at 0) of sizes `2^-1 … 2^-grid_depth`
/// meeting the deepest given cover level inside `window`, and fits the
/// slope over the finest `⌈grid_depth/2⌉` sizes. Interval endpoints are
/// taken at their outer bracket bounds.
pub fn box_dimension(
    levels: &[CoverLevel],
    window: (&Rational, &Rational),
    grid_depth: u32,
) -> Result<DimensionEstimate> {
    let deepest = levels.last().ok_or_else(|| Error::Domain("no cover levels given".into()))?;
    if grid_depth == 0 {
        return Err(Error::Domain("grid depth must be at least 1".into()));
    }
    let (wa, wb) = window;
    let clipped: Vec<(Rational, Rational)> = deepest
        .intervals
        .iter()
        .filter_map(|j| {
            let (a, b) = j.outer();
            let lo = a.max(wa).clone();
            let hi = b.min(wb).clone();
            (lo <= hi).then_some((lo, hi))
        })
        .collect();
    if clipped.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut grid_levels = Vec::with_capacity(grid_depth as usize);
    for t in 1..=grid_depth {
        // Intervals are sorted and disjoint, so box ranges only overlap
        // with their predecessor.
        let mut count = BigInt::zero();
        let mut last: Option<BigInt> = None;
        for (lo, hi) in &clipped {
            let mut first = floor_scaled(lo, t);
            let end = floor_scaled(hi, t);
            if let Some(prev) = &last {
                if first <= *prev {
                    first = prev + 1;
                }
            }
            if first <= end {
                count += &end - &first + 1;
                last = Some(end);
            }
        }
        grid_levels.push((t, count.to_u64().expect("box count fits in u64")));
    }
    let fit_from = grid_depth - grid_depth.div_ceil(2) + 1;
    let points: Vec<(f64, f64)> = grid_levels
        .iter()
        .filter(|(t, _)| *t >= fit_from)
        .map(|&(t, c)| (f64::from(t) * std::f64::consts::LN_2, (c as f64).ln()))
        .collect();
    let raw = fit_slope(&points);
    let clamped = !(0.0..=1.0).contains(&raw);
    if clamped {
        warn!("box-counting slope {raw} left [0, 1] and was clamped");
    }
    Ok(DimensionEstimate {
        window: (wa.clone(), wb.clone()),
        grid_levels,
        slope: raw.clamp(0.0, 1.0),
        clamped,
        theoretical: None,
    })
}

/// One row of a local dimension scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub delta: Rational,
    pub estimate: DimensionEstimate,
    pub theoretical: f64,
}

/// Box-counting estimates on `(λ − δ, λ + δ)` for each `δ`, where `λ` is
/// the midpoint of `center`, next to `log m / (−log λ)`. The cover is
/// solved to a width well below the finest box.
pub fn local_dimension_scan(
    center: &Bracket,
    deltas: &[Rational],
    depth: usize,
    grid_depth: u32,
) -> Result<Vec<ScanRow>> {
    let (x, m) = (center.x(), center.m());
    let tol = pow2(-(i64::from(grid_depth) + 16));
    let level = cover(x, m, depth, &tol)?;
    let mid = center.midpoint();
    let theoretical = theoretical_dimension(m, to_f64(&mid));
    let levels = [level];
    deltas
        .iter()
        .map(|d| {
            if *d <= Rational::zero() {
                return Err(Error::Domain(format!("window half-width {d} must be positive")));
            }
            let mut estimate = box_dimension(&levels, (&(&mid - d), &(&mid + d)), grid_depth)?;
            estimate.theoretical = Some(theoretical);
            Ok(ScanRow { delta: d.clone(), estimate, theoretical })
        })
        .collect()
}

/// Number of length-`n` words over `m` letters avoiding `0^k`, with a
/// growth-rate estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SftCount {
    pub count: BigUint,
    /// `(count(n) / count(n − r))^(1/r)` with `r = max(1, ⌊n/2⌋)`.
    pub growth: f64,
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 960 {
        v.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (v >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Counts for lengths `0..=n` by dynamic programming over the length of
/// the trailing run of zeros.
pub fn sft_counts(m: u32, k: usize, n: usize) -> Result<Vec<BigUint>> {
    if m < 2 || k == 0 {
        return Err(Error::Domain(format!("need m >= 2 and k >= 1, got m = {m}, k = {k}")));
    }
    let mut state = vec![BigUint::zero(); k];
    state[0] = BigUint::from(1u8);
    let mut out = vec![BigUint::from(1u8)];
    for _ in 0..n {
        let total: BigUint = state.iter().sum();
        let mut next = vec![BigUint::zero(); k];
        next[0] = &total * (m - 1);
        next[1..].clone_from_slice(&state[..k - 1]);
        state = next;
        out.push(state.iter().sum());
    }
    Ok(out)
}

pub fn sft_count(m: u32, k: usize, n: usize) -> Result<SftCount> {
    if n == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    let counts = sft_counts(m, k, n)?;
    let r = (n / 2).max(1);
    let (a, b) = (&counts[n], &counts[n - r]);
    let growth = if a.is_zero() { 0.0 } else { ((ln_big(a) - ln_big(b)) / r as f64).exp() };
    Ok(SftCount { count: a.clone(), growth })
}

/// `γ_j`, solving `π_λ(x₁…x_{n_j−1}(x_{n_j}+1)(m−1)^∞) = x`.
pub fn gamma_j(x: &Rational, m: u32, j: usize, tol: &Rational) -> Result<Bracket> {
    if j == 0 {
        return Err(Error::Domain("j starts at 1".into()));
    }
    let g = GreedyExpansion::new(x, m)?;
    let n_j = g.defect_index(j);
    let mut word = g.prefix(n_j);
    word[n_j - 1] += 1;
    solve_lambda(x, &Code::max_tail(m, word)?, tol)
}

/// `((k−1) log m + log(m−1)) / (−k log γ)`.
pub fn dim_lower_value(k: usize, m: u32, gamma: f64) -> f64 {
    let k = k as f64;
    ((k - 1.0) * f64::from(m).ln() + f64::from(m - 1).ln()) / (-k * gamma.ln())
}

/// [`dim_lower_value`] over a bracket of `γ`; the formula increases with
/// `γ`, so the result is `(value at lo, value at hi)`.
pub fn dim_lower_formula(k: usize, m: u32, gamma: &Bracket) -> (f64, f64) {
    (dim_lower_value(k, m, to_f64(gamma.lo())), dim_lower_value(k, m, to_f64(gamma.hi())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{default_tol, ratio};
    use crate::lambda_set::cover_levels;

    fn brute(m: u32, k: usize, n: usize) -> u64 {
        let total = (m as u64).pow(n as u32);
        (0..total)
            .filter(|&v| {
                let mut run = 0;
                let mut v = v;
                for _ in 0..n {
                    if v % m as u64 == 0 {
                        run += 1;
                        if run >= k {
                            return false;
                        }
                    } else {
                        run = 0;
                    }
                    v /= m as u64;
                }
                true
            })
            .count() as u64
    }

    #[test]
    fn sft_examples() {
        assert_eq!(sft_count(2, 2, 3).unwrap().count, BigUint::from(5u8));
        assert_eq!(sft_count(2, 1, 4).unwrap().count, BigUint::from(1u8));
        for (m, k, n) in [(3, 2, 5), (2, 3, 9), (3, 3, 7)] {
            assert_eq!(sft_count(m, k, n).unwrap().count, BigUint::from(brute(m, k, n)));
        }
    }

    #[test]
    fn sft_growth_is_golden_for_two_letters() {
        let g = sft_count(2, 2, 60).unwrap().growth;
        assert!((g - 1.618034).abs() < 1e-4);
        assert!(sft_count(2, 1, 10).unwrap().growth == 1.0);
    }

    #[test]
    fn gamma_examples() {
        let x = ratio(1, 2);
        let g1 = gamma_j(&x, 2, 1, &default_tol()).unwrap();
        assert!(g1.is_exact());
        assert_eq!(*g1.lo(), ratio(1, 3));
        let g2 = gamma_j(&x, 2, 2, &default_tol()).unwrap();
        assert!((to_f64(&g2.midpoint()) - 0.396608).abs() < 5e-7);
    }

    #[test]
    fn formula_limit() {
        let gamma = 0.4f64;
        let limit = theoretical_dimension(3, gamma);
        assert!((dim_lower_value(1000, 3, gamma) - limit).abs() < 1e-3);
        assert!(dim_lower_value(5, 3, gamma) < limit);
    }

    #[test]
    fn theoretical_examples() {
        assert!((theoretical_dimension(2, 1.0 / 3.0) - 0.6309).abs() < 1e-4);
        assert!((theoretical_dimension(2, 0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_counts_are_monotone() {
        let levels = cover_levels(&ratio(1, 2), 2, 8, &ratio(1, 1 << 30)).unwrap();
        let e = box_dimension(&levels, (&ratio(1, 3), &ratio(1, 2)), 10).unwrap();
        assert!(e.grid_levels.windows(2).all(|p| p[0].1 <= p[1].1));
        assert!(e.slope > 0.0 && e.slope <= 1.0);
    }

    #[test]
    fn single_point_window_has_zero_slope() {
        let levels = cover_levels(&ratio(1, 2), 2, 6, &default_tol()).unwrap();
        let p = ratio(1, 3);
        let e = box_dimension(&levels, (&p, &p), 12).unwrap();
        assert!(e.grid_levels.iter().all(|&(_, c)| c == 1));
        assert_eq!(e.slope, 0.0);
    }

    #[test]
    fn window_outside_cover_is_empty() {
        let levels = cover_levels(&ratio(1, 2), 2, 4, &default_tol()).unwrap();
        let r = box_dimension(&levels, (&ratio(37, 100), &ratio(38, 100)), 8);
        assert_eq!(r, Err(Error::EmptyWindow));
    }
}
