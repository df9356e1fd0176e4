//! Digit-level machinery: greedy m-adic expansions, unique codings for
//! `λ < 1/m`, and exact membership testing `x ∈ K_λ`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{inv_m, Code, Rational, Tail, Word};

/// Default cap on the number of distinct remainders tracked by
/// [`membership`].
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// The greedy (lexicographically largest) base-m expansion of `x ∈ (0,1)`.
///
/// Digits are produced on demand. The stream is shared behind a lock so
/// that concurrent readers extend it in a single, deterministic order.
#[derive(Debug)]
pub struct GreedyExpansion {
    x: Rational,
    m: u32,
    state: Mutex<GreedyState>,
}

#[derive(Debug, Clone)]
struct GreedyState {
    digits: Word,
    /// Current remainder is `rem / x.denom()`.
    rem: BigInt,
}

impl Clone for GreedyExpansion {
    fn clone(&self) -> Self {
        let state = self.state.lock().expect("greedy state poisoned").clone();
        GreedyExpansion { x: self.x.clone(), m: self.m, state: Mutex::new(state) }
    }
}

impl GreedyExpansion {
    pub fn new(x: &Rational, m: u32) -> Result<Self> {
        if !x.is_positive() || *x >= Rational::one() {
            return Err(Error::Domain(format!("x = {x} must lie in (0, 1)")));
        }
        if !(2..=256).contains(&m) {
            return Err(Error::Domain(format!("alphabet size m = {m} must lie in [2, 256]")));
        }
        Ok(GreedyExpansion {
            x: x.clone(),
            m,
            state: Mutex::new(GreedyState { digits: Vec::new(), rem: x.numer().clone() }),
        })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn extend_to(&self, n: usize) -> std::sync::MutexGuard<'_, GreedyState> {
        let mut st = self.state.lock().expect("greedy state poisoned");
        let q = self.x.denom();
        while st.digits.len() < n {
            let scaled = &st.rem * self.m;
            let (d, r) = scaled.div_rem(q);
            // d < m because the remainder stays in [0, 1).
            let d: u8 = u8::try_from(&d).expect("digit fits in u8");
            st.digits.push(d);
            st.rem = r;
        }
        st
    }

    /// Digit `x_i` for 1-based `i`.
    pub fn digit(&self, i: usize) -> u8 {
        assert!(i >= 1, "digits are 1-indexed");
        self.extend_to(i).digits[i - 1]
    }

    /// `x_1 … x_n`.
    pub fn prefix(&self, n: usize) -> Word {
        self.extend_to(n).digits[..n].to_vec()
    }

    /// Remainder after `n` digits, `m^n x − Σ x_i m^(n−i)`, in `[0, 1)`.
    pub fn remainder(&self, n: usize) -> Rational {
        let st = self.extend_to(n);
        if st.digits.len() == n {
            return Rational::new(st.rem.clone(), self.x.denom().clone());
        }
        drop(st);
        // Replay: the stored remainder is for a longer prefix.
        let mut r = self.x.clone();
        let m = Rational::from_integer(BigInt::from(self.m));
        for &d in &self.prefix(n) {
            r = r * &m - Rational::from_integer(BigInt::from(d));
        }
        r
    }

    /// True when the expansion is `x_1 … x_n 0^∞`.
    pub fn terminates_after(&self, n: usize) -> bool {
        self.remainder(n).is_zero()
    }

    fn first_position(&self, pred: impl Fn(u8) -> bool) -> usize {
        let mut i = 1;
        while !pred(self.digit(i)) {
            i += 1;
        }
        i
    }

    /// Smallest `ℓ` with `x_ℓ < m − 1`.
    pub fn first_defect(&self) -> usize {
        let top = (self.m - 1) as u8;
        self.first_position(|d| d < top)
    }

    /// Smallest `ℓ` with `x_ℓ > 0`.
    pub fn first_nonzero(&self) -> usize {
        self.first_position(|d| d > 0)
    }

    /// The first `count` positions `n_1 < n_2 < …` with `x_{n_j} < m − 1`.
    pub fn defect_indices(&self, count: usize) -> Vec<usize> {
        let top = (self.m - 1) as u8;
        let mut out = Vec::with_capacity(count);
        let mut i = 0;
        while out.len() < count {
            i += 1;
            if self.digit(i) < top {
                out.push(i);
            }
        }
        out
    }

    /// `n_j` for 1-based `j`.
    pub fn defect_index(&self, j: usize) -> usize {
        assert!(j >= 1, "defect indices are 1-indexed");
        self.defect_indices(j)[j - 1]
    }

    /// Lexicographic order of `code` against the greedy stream.
    pub fn cmp_code(&self, code: &Code) -> Option<Ordering> {
        let n = code.prefix().len();
        for (i, &d) in code.prefix().iter().enumerate() {
            let g = self.digit(i + 1);
            if d != g {
                return Some(d.cmp(&g));
            }
        }
        match code.tail() {
            // The greedy tail is 0^∞ exactly when the remainder vanishes.
            Tail::Zero => Some(if self.terminates_after(n) { Ordering::Equal } else { Ordering::Less }),
            // A greedy expansion never ends in (m−1)^∞.
            Tail::Max => Some(Ordering::Greater),
            Tail::Truncated => {
                let (lo, hi) = code.completions();
                let a = self.cmp_code(&lo)?;
                let b = self.cmp_code(&hi)?;
                (a == b).then_some(a)
            }
        }
    }
}

/// Outcome of running the digit extraction for a fixed λ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodingOutcome {
    /// All requested digits were extracted.
    Digits { digits: Word },
    /// No digit fitted at 1-based `step`; `digits` holds the earlier ones.
    NotMember { step: usize, digits: Word },
}

fn hull_width(lambda: &Rational, m: u32) -> Rational {
    Rational::from_integer(BigInt::from(m - 1)) * lambda / (Rational::one() - lambda)
}

fn check_coding_inputs(x: &Rational, lambda: &Rational, m: u32) -> Result<Rational> {
    if !(2..=256).contains(&m) {
        return Err(Error::Domain(format!("alphabet size m = {m} must lie in [2, 256]")));
    }
    if !lambda.is_positive() || *lambda > inv_m(m) {
        return Err(Error::Domain(format!("lambda = {lambda} must lie in (0, 1/{m}]")));
    }
    let h = hull_width(lambda, m);
    if x.is_negative() || *x > h {
        return Err(Error::HullViolation(format!("x = {x} lies outside the hull [0, {h}] of K_{lambda}")));
    }
    Ok(h)
}

/// One step of the extraction: the digit `d` with `y/λ − d ∈ [0, H]`
/// (the largest such digit when `λ = 1/m`), and the new remainder.
fn next_digit(y: &Rational, lambda: &Rational, h: &Rational, m: u32) -> Option<(u8, Rational)> {
    let z = y / lambda;
    let fl = z.floor().to_integer();
    let d = fl.min(BigInt::from(m - 1));
    let rest = z - Rational::from_integer(d.clone());
    (rest <= *h).then(|| (u8::try_from(&d).expect("digit fits in u8"), rest))
}

/// The unique coding of `x` in `K_λ`, up to `n` digits.
pub fn unique_coding(x: &Rational, lambda: &Rational, m: u32, n: usize) -> Result<CodingOutcome> {
    let h = check_coding_inputs(x, lambda, m)?;
    let mut y = x.clone();
    let mut digits = Vec::with_capacity(n);
    for step in 1..=n {
        match next_digit(&y, lambda, &h, m) {
            Some((d, rest)) => {
                digits.push(d);
                y = rest;
            }
            None => return Ok(CodingOutcome::NotMember { step, digits }),
        }
    }
    Ok(CodingOutcome::Digits { digits })
}

/// Verdict of [`membership`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// The coding is `preperiod (period)^∞`; certified by a repeated
    /// remainder.
    Member { preperiod: Word, period: Word },
    /// The remainder fell into a gap at 1-based `step`.
    NotMember { step: usize },
    /// Neither happened within `depth` steps (or the state cap).
    Undetermined { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub verdict: Verdict,
    pub extracted_digits: Word,
}

impl MembershipResult {
    /// Exact value of the eventually periodic coding of a `Member` verdict
    /// at `λ`; `None` for other verdicts.
    pub fn reconstruct(&self, lambda: &Rational) -> Option<Rational> {
        let Verdict::Member { preperiod, period } = &self.verdict else {
            return None;
        };
        let series = |w: &[u8]| {
            let mut acc = Rational::zero();
            let mut pow = Rational::one();
            for &d in w {
                pow *= lambda;
                acc += &pow * Rational::from_integer(BigInt::from(d));
            }
            (acc, pow)
        };
        let (pre, pre_pow) = series(preperiod);
        let (per, per_pow) = series(period);
        Some(pre + pre_pow * per / (Rational::one() - per_pow))
    }
}

/// Decides `x ∈ K_λ` by exact digit extraction with remainder-cycle
/// detection, using [`DEFAULT_STATE_CAP`].
pub fn membership(x: &Rational, lambda: &Rational, m: u32, max_steps: usize) -> Result<MembershipResult> {
    membership_capped(x, lambda, m, max_steps, DEFAULT_STATE_CAP)
}

/// [`membership`] with an explicit cap on the remainder table.
pub fn membership_capped(
    x: &Rational,
    lambda: &Rational,
    m: u32,
    max_steps: usize,
    state_cap: usize,
) -> Result<MembershipResult> {
    let h = check_coding_inputs(x, lambda, m)?;
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut y = x.clone();
    seen.insert(y.clone(), 0);
    let mut digits = Vec::new();
    for step in 1..=max_steps {
        let Some((d, rest)) = next_digit(&y, lambda, &h, m) else {
            return Ok(MembershipResult { verdict: Verdict::NotMember { step }, extracted_digits: digits });
        };
        digits.push(d);
        y = rest;
        if let Some(&start) = seen.get(&y) {
            return Ok(MembershipResult {
                verdict: Verdict::Member { preperiod: digits[..start].to_vec(), period: digits[start..].to_vec() },
                extracted_digits: digits,
            });
        }
        if seen.len() >= state_cap {
            return Ok(MembershipResult { verdict: Verdict::Undetermined { depth: step }, extracted_digits: digits });
        }
        seen.insert(y.clone(), step);
    }
    Ok(MembershipResult { verdict: Verdict::Undetermined { depth: max_steps }, extracted_digits: digits })
}

/// Lexicographic order on the streams of two codes; `None` when a
/// truncated code straddles the other.
pub fn lex_compare(a: &Code, b: &Code) -> Option<Ordering> {
    a.lex_cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{eval_pi, ratio};

    #[test]
    fn greedy_examples() {
        let g = GreedyExpansion::new(&ratio(1, 2), 2).unwrap();
        assert_eq!(g.prefix(4), vec![1, 0, 0, 0]);
        let g = GreedyExpansion::new(&ratio(3, 4), 2).unwrap();
        assert_eq!(g.prefix(4), vec![1, 1, 0, 0]);
        let g = GreedyExpansion::new(&ratio(1, 3), 2).unwrap();
        assert_eq!(g.prefix(6), vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn terminating_form_is_lexicographically_largest() {
        // 1/2 = 0.1000…₂ = 0.0111…₂; the greedy stream picks the former.
        let g = GreedyExpansion::new(&ratio(1, 2), 2).unwrap();
        let alt = Code::max_tail(2, vec![0]).unwrap();
        assert_eq!(g.cmp_code(&alt), Some(Ordering::Less));
        assert_eq!(g.cmp_code(&Code::zero_tail(2, vec![1]).unwrap()), Some(Ordering::Equal));
    }

    #[test]
    fn derived_indices() {
        let g = GreedyExpansion::new(&ratio(1, 2), 2).unwrap();
        assert_eq!(g.first_defect(), 2);
        assert_eq!(g.first_nonzero(), 1);
        assert_eq!(g.defect_indices(4), vec![2, 3, 4, 5]);
        let g = GreedyExpansion::new(&ratio(3, 7), 3).unwrap();
        // 3/7 = 0.102120102120…₃
        assert_eq!(g.prefix(6), vec![1, 0, 2, 1, 2, 0]);
        assert_eq!(g.defect_indices(4), vec![1, 2, 4, 6]);
        assert_eq!(g.first_nonzero(), 1);
    }

    #[test]
    fn rejects_points_outside_unit_interval() {
        assert!(GreedyExpansion::new(&ratio(0, 1), 2).is_err());
        assert!(GreedyExpansion::new(&ratio(1, 1), 2).is_err());
        assert!(GreedyExpansion::new(&ratio(3, 2), 2).is_err());
    }

    #[test]
    fn coding_examples() {
        let l = ratio(1, 4);
        assert_eq!(unique_coding(&ratio(1, 3), &l, 2, 3).unwrap(), CodingOutcome::Digits { digits: vec![1, 1, 1] });
        assert_eq!(unique_coding(&ratio(1, 4), &l, 2, 3).unwrap(), CodingOutcome::Digits { digits: vec![1, 0, 0] });
        assert_eq!(
            unique_coding(&ratio(1, 5), &l, 2, 3).unwrap(),
            CodingOutcome::NotMember { step: 1, digits: vec![] }
        );
    }

    #[test]
    fn level_one_gap_oracle() {
        // K_{1/4}(1) = [0, 1/12] ∪ [1/4, 1/3]; 1/5 sits in the gap.
        let l = ratio(1, 4);
        let h = hull_width(&l, 2);
        let pieces: Vec<(Rational, Rational)> =
            (0..2).map(|d| (ratio(d, 1) * &l, ratio(d, 1) * &l + &l * &h)).collect();
        assert_eq!(pieces[0].1, ratio(1, 12));
        let x = ratio(1, 5);
        assert!(pieces.iter().all(|(a, b)| x < *a || x > *b));
    }

    #[test]
    fn coding_hull_violation() {
        assert!(matches!(unique_coding(&ratio(1, 2), &ratio(1, 4), 2, 3), Err(Error::HullViolation(_))));
    }

    #[test]
    fn membership_examples() {
        let r = membership(&ratio(1, 3), &ratio(1, 4), 2, 64).unwrap();
        assert_eq!(r.verdict, Verdict::Member { preperiod: vec![], period: vec![1] });
        assert_eq!(r.reconstruct(&ratio(1, 4)).unwrap(), ratio(1, 3));
        let r = membership(&ratio(1, 5), &ratio(1, 4), 2, 64).unwrap();
        assert_eq!(r.verdict, Verdict::NotMember { step: 1 });
        let r = membership(&ratio(1, 4), &ratio(1, 4), 2, 64).unwrap();
        assert_eq!(r.verdict, Verdict::Member { preperiod: vec![1], period: vec![0] });
    }

    #[test]
    fn membership_at_one_over_m_is_always_member() {
        for (p, q) in [(1, 2), (1, 3), (5, 7), (99, 100)] {
            let x = ratio(p, q);
            let r = membership(&x, &ratio(1, 2), 2, 256).unwrap();
            assert!(matches!(r.verdict, Verdict::Member { .. }), "{x}");
            assert_eq!(r.reconstruct(&ratio(1, 2)).unwrap(), x);
        }
    }

    #[test]
    fn membership_agrees_with_level_enumeration() {
        // Brute force: x ∈ K_λ(n) iff some word of length n has x in its piece.
        let (m, l) = (2u32, ratio(2, 5));
        let h = hull_width(&l, m);
        for (p, q) in [(1, 2), (1, 7), (3, 10), (2, 9), (5, 8)] {
            let x = ratio(p, q);
            let r = membership(&x, &l, m, 8).unwrap();
            for n in 1..=8usize {
                let covered = (0..1i64 << n).any(|w| {
                    let word: Vec<u8> = (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as u8).collect();
                    let left = eval_pi(&Code::zero_tail(m, word).unwrap(), &l).unwrap();
                    let right = &left + num_traits::pow::pow(l.clone(), n) * &h;
                    x >= left && x <= right
                });
                let expected = match r.verdict {
                    Verdict::NotMember { step } => n < step,
                    _ => true,
                };
                assert_eq!(covered, expected, "x = {x}, n = {n}");
            }
        }
    }

    #[test]
    fn state_cap_yields_undetermined() {
        let r = membership_capped(&ratio(1, 3), &ratio(1, 2), 2, 64, 1).unwrap();
        assert!(matches!(r.verdict, Verdict::Undetermined { .. }));
    }

    #[test]
    fn consistency_with_series_bounds() {
        let (x, l) = (ratio(5, 17), ratio(3, 10));
        let r = membership(&x, &l, 3, 12).unwrap();
        let n = r.extracted_digits.len();
        let d = r.extracted_digits.clone();
        if n > 0 {
            let lo = eval_pi(&Code::zero_tail(3, d.clone()).unwrap(), &l).unwrap();
            let hi = eval_pi(&Code::max_tail(3, d).unwrap(), &l).unwrap();
            assert!(lo <= x && x <= hi);
        }
    }
}
