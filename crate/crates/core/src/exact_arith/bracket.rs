use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::code::{Code, Tail};
use super::{inv_m, log2_ceil_recip, pow2, Rational};
use crate::error::{Error, Result};

/// Refinement cap used by [`compare_brackets`].
pub const DEFAULT_REFINE_CAP: usize = 4096;

/// Default bracket width, `2^-64`.
pub fn default_tol() -> Rational {
    pow2(-64)
}

/// Exact value of `π_λ(code) = Σ dᵢ λⁱ`, with the `(m-1)`-tail summed in
/// closed form.
pub fn eval_pi(code: &Code, lambda: &Rational) -> Result<Rational> {
    check_lambda(lambda, code.m())?;
    let mut acc = Rational::zero();
    let mut pow = Rational::one();
    for &d in code.prefix() {
        pow *= lambda;
        if d != 0 {
            acc += &pow * Rational::from_integer(BigInt::from(d));
        }
    }
    match code.tail() {
        Tail::Zero => Ok(acc),
        Tail::Max => {
            let tail = &pow * lambda * Rational::from_integer(BigInt::from(code.m() - 1)) / (Rational::one() - lambda);
            Ok(acc + tail)
        }
        Tail::Truncated => Err(Error::Domain(format!("code {code} is truncated and has no exact value"))),
    }
}

fn check_lambda(lambda: &Rational, m: u32) -> Result<()> {
    if !lambda.is_positive() || *lambda > inv_m(m) {
        return Err(Error::Domain(format!("lambda = {lambda} must lie in (0, 1/{m}]")));
    }
    Ok(())
}

/// Sign of `π_λ(code) − x` for `λ ∈ [0, 1)`, decided with integer
/// arithmetic only. `code` must have an explicit tail.
pub(crate) fn pi_cmp(code: &Code, lambda: &Rational, x: &Rational) -> Ordering {
    let (a, b) = (lambda.numer(), lambda.denom());
    let (p, q) = (x.numer(), x.denom());
    // s = Σ dᵢ aⁱ b^(n-i), so that the prefix sum equals s / bⁿ.
    let mut s = BigInt::zero();
    let mut apow = BigInt::one();
    let mut bpow = BigInt::one();
    for &d in code.prefix() {
        apow *= a;
        bpow *= b;
        s *= b;
        if d != 0 {
            s += &apow * d;
        }
    }
    match code.tail() {
        Tail::Zero => (q * s).cmp(&(p * bpow)),
        Tail::Max => {
            let gap = b - a;
            let num = s * &gap + apow * a * (code.m() - 1);
            let den = bpow * gap;
            (q * num).cmp(&(p * den))
        }
        Tail::Truncated => panic!("pi_cmp on a truncated code"),
    }
}

/// A pair of exact rationals `[lo, hi]` certified to contain one parameter.
///
/// A bracket either encloses the unique root of `π_λ(code) = x` (then
/// `π_lo(code) ≤ x ≤ π_hi(code)` holds exactly), or is pinned to a known
/// rational value with `lo == hi` and no code. Roots that happen to be
/// rational and are hit during bisection also collapse to `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    lo: Rational,
    hi: Rational,
    code: Option<Code>,
    x: Rational,
    m: u32,
}

impl Bracket {
    /// A degenerate bracket holding a known exact parameter value.
    pub fn pinned(x: Rational, m: u32, value: Rational) -> Bracket {
        Bracket { lo: value.clone(), hi: value, code: None, x, m }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn code(&self) -> Option<&Code> {
        self.code.as_ref()
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// True when the parameter value is known exactly.
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Same `x`, same `m` and the same (explicit) code: the brackets name
    /// the same parameter.
    pub fn same_root(&self, other: &Bracket) -> bool {
        self.code.is_some() && self.code == other.code && self.x == other.x && self.m == other.m
    }

    /// Narrows the bracket to width at most `tol`.
    pub fn refine(&self, tol: &Rational) -> Bracket {
        if self.is_exact() || self.width() <= *tol {
            return self.clone();
        }
        let code = self.code.as_ref().expect("non-degenerate brackets carry a code");
        bisect(code, &self.x, self.lo.clone(), self.hi.clone(), tol)
    }

    /// Exact order of the bracketed parameter against a rational.
    pub fn cmp_value(&self, v: &Rational) -> Ordering {
        if self.is_exact() {
            return self.lo.cmp(v);
        }
        if *v < self.lo {
            return Ordering::Greater;
        }
        if *v > self.hi {
            return Ordering::Less;
        }
        let code = self.code.as_ref().expect("non-degenerate brackets carry a code");
        // π is increasing in λ: π_v > x means the root lies below v.
        pi_cmp(code, v, &self.x).reverse()
    }
}

/// Certified bracket of width `≤ tol` around the unique `λ ∈ (0, 1/m]`
/// with `π_λ(code) = x`.
pub fn solve_lambda(x: &Rational, code: &Code, tol: &Rational) -> Result<Bracket> {
    check_solve_inputs(x, code, tol)?;
    let m = code.m();
    let (lo, hi) = super::hull_of(x, m);
    // Every coding evaluates to at most x at the hull minimum.
    match pi_cmp(code, &lo, x) {
        Ordering::Equal => return Ok(exact(code, x, lo)),
        Ordering::Greater => unreachable!("π_λ(code) ≤ π_λ((m-1)^∞) = x at the hull minimum"),
        Ordering::Less => {}
    }
    match pi_cmp(code, &hi, x) {
        Ordering::Less => {
            Err(Error::NoRoot(format!("π_(1/{m})({code}) < x = {x}; the coding does not occur for λ ≤ 1/{m}")))
        }
        Ordering::Equal => Ok(exact(code, x, hi)),
        Ordering::Greater => Ok(bisect(code, x, lo, hi, tol)),
    }
}

/// Like [`solve_lambda`], but starts from `[lo, hi]` when that range is
/// already known to bracket the root.
pub(crate) fn solve_lambda_within(
    x: &Rational,
    code: &Code,
    tol: &Rational,
    lo: &Rational,
    hi: &Rational,
) -> Result<Bracket> {
    check_solve_inputs(x, code, tol)?;
    if !lo.is_positive() || lo >= hi || *hi > inv_m(code.m()) {
        return solve_lambda(x, code, tol);
    }
    let at_lo = pi_cmp(code, lo, x);
    let at_hi = pi_cmp(code, hi, x);
    match (at_lo, at_hi) {
        (Ordering::Equal, _) => Ok(exact(code, x, lo.clone())),
        (_, Ordering::Equal) => Ok(exact(code, x, hi.clone())),
        (Ordering::Less, Ordering::Greater) => Ok(bisect(code, x, lo.clone(), hi.clone(), tol)),
        _ => solve_lambda(x, code, tol),
    }
}

fn check_solve_inputs(x: &Rational, code: &Code, tol: &Rational) -> Result<()> {
    if !x.is_positive() || *x >= Rational::one() {
        return Err(Error::Domain(format!("x = {x} must lie in (0, 1)")));
    }
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if code.tail() == Tail::Truncated {
        return Err(Error::Domain(format!("code {code} is truncated")));
    }
    if code.is_zero_stream() {
        return Err(Error::NoRoot("the all-zero coding only represents 0".into()));
    }
    Ok(())
}

fn exact(code: &Code, x: &Rational, value: Rational) -> Bracket {
    Bracket { lo: value.clone(), hi: value, code: Some(code.clone()), x: x.clone(), m: code.m() }
}

/// Bisection on `[lo, hi]` with `π_lo ≤ x ≤ π_hi`. Each split point is a
/// dyadic rational close to the midpoint (inside the middle third), which
/// keeps denominators at powers of two.
fn bisect(code: &Code, x: &Rational, mut lo: Rational, mut hi: Rational, tol: &Rational) -> Bracket {
    while &hi - &lo > *tol {
        let mid = split_point(&lo, &hi);
        match pi_cmp(code, &mid, x) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return exact(code, x, mid),
        }
    }
    Bracket { lo, hi, code: Some(code.clone()), x: x.clone(), m: code.m() }
}

fn split_point(lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    // 2^-k ≤ width/6, so rounding the midpoint to k bits moves it by at
    // most width/12.
    let k = log2_ceil_recip(&(width / Rational::from_integer(BigInt::from(6))));
    let two_k = BigInt::one() << k;
    let mid = (lo + hi) * Rational::new(two_k.clone(), BigInt::from(2));
    let rounded = (mid + Rational::new(BigInt::one(), BigInt::from(2))).floor();
    Rational::new(rounded.to_integer(), two_k)
}

/// Certified order of two bracketed parameters, refining both until they
/// separate. Identical codes for the same `x` compare `Equal` without any
/// numerics.
pub fn compare_brackets(a: &Bracket, b: &Bracket) -> Result<Ordering> {
    compare_brackets_capped(a, b, DEFAULT_REFINE_CAP)
}

/// [`compare_brackets`] with an explicit refinement cap.
pub fn compare_brackets_capped(a: &Bracket, b: &Bracket, cap: usize) -> Result<Ordering> {
    if a.same_root(b) {
        return Ok(Ordering::Equal);
    }
    let mut a = a.clone();
    let mut b = b.clone();
    for step in 0..=cap {
        if a.hi < b.lo {
            return Ok(Ordering::Less);
        }
        if b.hi < a.lo {
            return Ok(Ordering::Greater);
        }
        match (a.is_exact(), b.is_exact()) {
            (true, true) => return Ok(a.lo.cmp(&b.lo)),
            (true, false) => return Ok(b.cmp_value(&a.lo).reverse()),
            (false, true) => return Ok(a.cmp_value(&b.lo)),
            (false, false) => {}
        }
        if step == cap {
            break;
        }
        let half = |br: &Bracket| br.refine(&(br.width() / Rational::from_integer(BigInt::from(2))));
        a = half(&a);
        b = half(&b);
    }
    Err(Error::PrecisionExhausted { steps: cap })
}
