//! Thick Cantor subsets `E_k(x) ⊂ Λ(x)`, their thickness estimates, and
//! the search for interleaved pairs `E_i(x)`, `E_j(y)`.
//!
//! `E_k(x)` lives inside the hull `I_k = I_{j,b}`, whose endpoints have codes
//! `x₁…x_{n_j−1} b (m−1)^∞` and `x₁…x_{n_j−1} b 0^∞` where `n_j` is the
//! `j`-th position with `x_{n_j} < m − 1` and `b > x_{n_j}`. Its level-`n`
//! basic intervals `I_k(w)` append every word `w` of length `n`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{pow::pow, One, Signed, Zero};
use rayon::prelude::*;

use crate::coding::GreedyExpansion;
use crate::error::{Error, Result};
use crate::exact_arith::{
    compare_brackets, eval_pi, hull_of, inv_m, solve_lambda_within, Bracket, Code, Rational, Tail, Word,
    DEFAULT_REFINE_CAP,
};
use crate::lambda_set::BasicInterval;

/// Witness search depth used when none is given.
pub const DEFAULT_WITNESS_DEPTH: usize = 6;

/// Number of levels scanned for the thickness of each set in a pair search.
pub const DEFAULT_THICKNESS_DEPTH: usize = 3;

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// One thick subset `E_k(x)` together with its hull `I_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EkSystem {
    x: Rational,
    m: u32,
    k: usize,
    j: usize,
    b: u8,
    n_j: usize,
    first_nonzero: usize,
    hull: BasicInterval,
}

fn solve_word(
    x: &Rational,
    m: u32,
    word: Word,
    tail: Tail,
    tol: &Rational,
    hint: (&Rational, &Rational),
) -> Result<Bracket> {
    let code = Code::new(m, word, tail)?;
    solve_lambda_within(x, &code, tol, hint.0, hint.1)
}

impl EkSystem {
    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Position of this hull in the increasing enumeration, from 1.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Defect index `j` with `I_k = I_{j,b}`.
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn b(&self) -> u8 {
        self.b
    }

    /// `n_j`, the position of the replaced digit.
    pub fn n_j(&self) -> usize {
        self.n_j
    }

    /// Smallest `ℓ` with `x_ℓ > 0`.
    pub fn first_nonzero(&self) -> usize {
        self.first_nonzero
    }

    pub fn hull(&self) -> &BasicInterval {
        &self.hull
    }

    /// `x₁…x_{n_j−1} b`.
    pub fn prefix(&self) -> &[u8] {
        self.hull.word()
    }

    /// The word `w` of a basic interval of this system, without the prefix.
    pub fn relative_word<'a>(&self, interval: &'a BasicInterval) -> &'a [u8] {
        &interval.word()[self.prefix().len()..]
    }

    /// `I_k(w)`; the empty word gives the hull.
    pub fn basic_interval(&self, w: &[u8], tol: &Rational) -> Result<BasicInterval> {
        if let Some(&d) = w.iter().find(|&&d| u32::from(d) >= self.m) {
            return Err(Error::Domain(format!("digit {d} is not below m = {}", self.m)));
        }
        let mut word = self.prefix().to_vec();
        word.extend_from_slice(w);
        let hint = self.hull.outer();
        let top = (self.m - 1) as u8;
        // Endpoint codes that reduce to the hull's own codes reuse its brackets.
        let left = if w.iter().all(|&d| d == top) {
            self.hull.left().clone()
        } else {
            solve_word(&self.x, self.m, word.clone(), Tail::Max, tol, hint)?
        };
        let right = if w.iter().all(|&d| d == 0) {
            self.hull.right().clone()
        } else {
            solve_word(&self.x, self.m, word.clone(), Tail::Zero, tol, hint)?
        };
        Ok(BasicInterval::from_parts(word, left, right))
    }

    fn children(&self, parent: &BasicInterval, tol: &Rational) -> Result<Vec<BasicInterval>> {
        let top = (self.m - 1) as u8;
        let hint = parent.outer();
        (0..=top)
            .rev()
            .map(|d| {
                let mut word = parent.word().to_vec();
                word.push(d);
                let left = if d == top {
                    parent.left().clone()
                } else {
                    solve_word(&self.x, self.m, word.clone(), Tail::Max, tol, hint)?
                };
                let right = if d == 0 {
                    parent.right().clone()
                } else {
                    solve_word(&self.x, self.m, word.clone(), Tail::Zero, tol, hint)?
                };
                Ok(BasicInterval::from_parts(word, left, right))
            })
            .collect()
    }

    /// Levels `0..=depth` of basic intervals, each sorted by increasing λ.
    pub fn levels(&self, depth: usize, tol: &Rational) -> Result<Vec<Vec<BasicInterval>>> {
        let mut out = vec![vec![self.hull.clone()]];
        for _ in 0..depth {
            let prev = out.last().expect("non-empty");
            let next: Vec<Vec<BasicInterval>> =
                prev.par_iter().map(|p| self.children(p, tol)).collect::<Result<_>>()?;
            out.push(next.into_iter().flatten().collect());
        }
        Ok(out)
    }
}

/// The first `count` hulls `I_1 < I_2 < …`, with the strict order of all
/// endpoints verified by bracket comparison.
pub fn ek_hulls(x: &Rational, m: u32, count: usize, tol: &Rational) -> Result<Vec<EkSystem>> {
    let g = GreedyExpansion::new(x, m)?;
    let top = (m - 1) as u8;
    let defects = g.defect_indices(count);
    let mut specs = Vec::with_capacity(count);
    'outer: for (i, &n_j) in defects.iter().enumerate() {
        for b in (g.digit(n_j) + 1..=top).rev() {
            if specs.len() == count {
                break 'outer;
            }
            let mut word = g.prefix(n_j - 1);
            word.push(b);
            specs.push((i + 1, b, n_j, word));
        }
    }
    let first_nonzero = g.first_nonzero();
    let (lo, hi) = hull_of(x, m);
    let systems: Vec<EkSystem> = specs
        .into_par_iter()
        .enumerate()
        .map(|(idx, (j, b, n_j, word))| {
            let left = solve_word(x, m, word.clone(), Tail::Max, tol, (&lo, &hi))?;
            let right = solve_word(x, m, word.clone(), Tail::Zero, tol, (&lo, &hi))?;
            Ok(EkSystem {
                x: x.clone(),
                m,
                k: idx + 1,
                j,
                b,
                n_j,
                first_nonzero,
                hull: BasicInterval::from_parts(word, left, right),
            })
        })
        .collect::<Result<_>>()?;
    for s in &systems {
        if compare_brackets(s.hull.left(), s.hull.right())? != Ordering::Less {
            return Err(Error::Domain(format!("hull I_{} is degenerate", s.k)));
        }
    }
    for pair in systems.windows(2) {
        if compare_brackets(pair[0].hull.right(), pair[1].hull.left())? != Ordering::Less {
            return Err(Error::Domain(format!("hulls I_{} and I_{} overlap", pair[0].k, pair[1].k)));
        }
    }
    Ok(systems)
}

/// `I_k(w)` for the `k`-th system of `x`.
pub fn ek_basic_interval(x: &Rational, m: u32, k: usize, w: &[u8], tol: &Rational) -> Result<BasicInterval> {
    if k == 0 {
        return Err(Error::Domain("k starts at 1".into()));
    }
    let sys = ek_hulls(x, m, k, tol)?.pop().expect("k systems");
    sys.basic_interval(w, tol)
}

/// Certified enclosure `[lo, hi]` of a ratio of lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioBounds {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatioBounds {
    /// `num / den` from enclosures of both; `den.0` must be positive.
    pub fn of(num: (Rational, Rational), den: (Rational, Rational)) -> Self {
        let num_lo = if num.0.is_negative() { Rational::zero() } else { num.0 };
        RatioBounds { lo: num_lo / &den.1, hi: num.1 / &den.0 }
    }

    pub fn min(&self, other: &RatioBounds) -> RatioBounds {
        RatioBounds { lo: (&self.lo).min(&other.lo).clone(), hi: (&self.hi).min(&other.hi).clone() }
    }
}

/// Refines `a` and `b` until `a.hi < b.lo`. Returns `false` when the cap
/// is reached first.
fn separate(a: &mut Bracket, b: &mut Bracket) -> bool {
    let two = int(2);
    for _ in 0..DEFAULT_REFINE_CAP {
        if a.hi() < b.lo() {
            return true;
        }
        if a.is_exact() && b.is_exact() {
            return false;
        }
        if !a.is_exact() {
            *a = a.refine(&(a.width() / &two));
        }
        if !b.is_exact() {
            *b = b.refine(&(b.width() / &two));
        }
    }
    a.hi() < b.lo()
}

/// Two neighbouring basic intervals `I_k(w⁺) = [λ₁, λ₂]` and
/// `I_k(w) = [λ₃, λ₄]` of one level, with the gap `(λ₂, λ₃)` between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacentPair {
    pub level: usize,
    pub w_plus: Word,
    pub w: Word,
    pub l1: Bracket,
    pub l2: Bracket,
    pub l3: Bracket,
    pub l4: Bracket,
}

impl AdjacentPair {
    pub fn gap_bounds(&self) -> (Rational, Rational) {
        (self.l3.lo() - self.l2.hi(), self.l3.hi() - self.l2.lo())
    }

    /// `|I_k(w⁺)| / |G_k(w)|`.
    pub fn left_ratio(&self) -> RatioBounds {
        RatioBounds::of((self.l2.lo() - self.l1.hi(), self.l2.hi() - self.l1.lo()), self.gap_bounds())
    }

    /// `|I_k(w)| / |G_k(w)|`.
    pub fn right_ratio(&self) -> RatioBounds {
        RatioBounds::of((self.l4.lo() - self.l3.hi(), self.l4.hi() - self.l3.lo()), self.gap_bounds())
    }
}

/// All sibling pairs `(w⁺, w)` at levels `1..=depth`, with brackets refined
/// until every length and gap has a positive lower bound.
pub fn adjacent_pairs(sys: &EkSystem, depth: usize, tol: &Rational) -> Result<Vec<AdjacentPair>> {
    let levels = sys.levels(depth, tol)?;
    let plen = sys.prefix().len();
    let mut out = Vec::new();
    for (n, level) in levels.iter().enumerate().skip(1) {
        let pairs: Vec<AdjacentPair> = level
            .par_windows(2)
            .filter(|p| p[0].word()[..p[0].word().len() - 1] == p[1].word()[..p[1].word().len() - 1])
            .map(|p| {
                let (plus, w) = (&p[0], &p[1]);
                let mut pair = AdjacentPair {
                    level: n,
                    w_plus: plus.word()[plen..].to_vec(),
                    w: w.word()[plen..].to_vec(),
                    l1: plus.left().clone(),
                    l2: plus.right().clone(),
                    l3: w.left().clone(),
                    l4: w.right().clone(),
                };
                let ok = separate(&mut pair.l1, &mut pair.l2)
                    && separate(&mut pair.l2, &mut pair.l3)
                    && separate(&mut pair.l3, &mut pair.l4);
                if ok {
                    Ok(pair)
                } else {
                    Err(Error::PrecisionExhaustedAt { k: sys.k, level: n, steps: DEFAULT_REFINE_CAP })
                }
            })
            .collect::<Result<_>>()?;
        out.extend(pairs);
    }
    Ok(out)
}

/// Which estimate a reported dimension bound was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimBasis {
    /// The certified lower bound valid for all levels.
    Certified,
    /// The finite-depth minimum (no certified bound applies).
    Empirical,
}

/// Smallest certified ratio found at one level, and the pair attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMin {
    pub level: usize,
    pub min_lower: Rational,
    pub w_plus: Word,
    pub w: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessReport {
    pub k: usize,
    pub j: usize,
    pub b: u8,
    pub n_j: usize,
    pub depth: usize,
    pub per_level_min: Vec<LevelMin>,
    /// Minimum over the scanned levels; the true infimum can only be
    /// smaller.
    pub tau_empirical: Rational,
    /// Smallest analytic bound over the scanned pairs, when `n_j > ℓ`.
    pub tau_analytic_lower: Option<Rational>,
    /// Lower bound on the thickness valid at every level, when `n_j > ℓ`.
    pub newhouse_lower: Option<Rational>,
    pub dim_lower: f64,
    pub dim_lower_basis: DimBasis,
}

/// `log 2 / log(2 + 1/τ)`.
pub fn dim_lower_from_thickness(tau: f64) -> f64 {
    std::f64::consts::LN_2 / (2.0 + 1.0 / tau).ln()
}

fn analytic_bounds(sys: &EkSystem, pair: &AdjacentPair) -> Option<(Rational, Rational)> {
    let (n_j, ell) = (sys.n_j, sys.first_nonzero);
    if n_j <= ell {
        return None;
    }
    let one = Rational::one();
    let m = int(sys.m);
    let denom = &m * pow(pair.l3.hi().clone(), n_j - ell);
    let a = (&one - pair.l1.hi()) * (&one - pair.l3.hi()) * pow(pair.l2.lo().clone(), ell) / &denom;
    let b = pow(&one - pair.l3.hi(), 2) * pow(pair.l4.lo().clone(), ell) / &denom;
    Some((a, b))
}

/// Lower bound on the thickness of `E_k(x)` from the hull alone, when
/// `n_j > ℓ`: every analytic pair bound is at least
/// `(1 − q_k)² p_k^ℓ / (m q_k^(n_j−ℓ))`.
pub fn certified_thickness_lower(sys: &EkSystem) -> Option<Rational> {
    let (n_j, ell) = (sys.n_j, sys.first_nonzero);
    if n_j <= ell {
        return None;
    }
    let (p, q) = (sys.hull.left().lo(), sys.hull.right().hi());
    let one = Rational::one();
    Some(pow(&one - q, 2) * pow(p.clone(), ell) / (int(sys.m) * pow(q.clone(), n_j - ell)))
}

/// Thickness report for one system over levels `1..=depth`.
pub fn tau_report(sys: &EkSystem, depth: usize, tol: &Rational) -> Result<ThicknessReport> {
    if depth == 0 {
        return Err(Error::Domain("thickness depth must be at least 1".into()));
    }
    let pairs = adjacent_pairs(sys, depth, tol)?;
    let mut per_level_min: Vec<LevelMin> = Vec::new();
    let mut analytic: Option<Rational> = None;
    for pair in &pairs {
        let r = pair.left_ratio().lo.min(pair.right_ratio().lo);
        match per_level_min.last_mut() {
            Some(lm) if lm.level == pair.level => {
                if r < lm.min_lower {
                    *lm = LevelMin { level: pair.level, min_lower: r, w_plus: pair.w_plus.clone(), w: pair.w.clone() };
                }
            }
            _ => per_level_min.push(LevelMin {
                level: pair.level,
                min_lower: r,
                w_plus: pair.w_plus.clone(),
                w: pair.w.clone(),
            }),
        }
        if let Some((a, b)) = analytic_bounds(sys, pair) {
            let v = a.min(b);
            analytic = Some(match analytic {
                Some(cur) if cur <= v => cur,
                _ => v,
            });
        }
    }
    let tau_empirical =
        per_level_min.iter().map(|l| l.min_lower.clone()).min().expect("depth >= 1 gives at least one pair");
    let newhouse_lower = certified_thickness_lower(sys);
    let (basis_value, dim_lower_basis) = match &newhouse_lower {
        Some(t) if t.is_positive() => (t.clone(), DimBasis::Certified),
        _ => (tau_empirical.clone(), DimBasis::Empirical),
    };
    Ok(ThicknessReport {
        k: sys.k,
        j: sys.j,
        b: sys.b,
        n_j: sys.n_j,
        depth,
        per_level_min,
        tau_empirical,
        tau_analytic_lower: analytic,
        newhouse_lower,
        dim_lower: dim_lower_from_thickness(crate::exact_arith::to_f64(&basis_value)),
        dim_lower_basis,
    })
}

/// Thickness report for `E_k(x)`.
pub fn tau_estimate(x: &Rational, m: u32, k: usize, depth: usize, tol: &Rational) -> Result<ThicknessReport> {
    if k == 0 {
        return Err(Error::Domain("k starts at 1".into()));
    }
    let sys = ek_hulls(x, m, k, tol)?.pop().expect("k systems");
    tau_report(&sys, depth, tol)
}

/// `θ_k = min(|I_k|/|G_k|, |I_{k+1}|/|G_k|)` with `G_k = (q_k, p_{k+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaValue {
    pub k: usize,
    pub left_ratio: RatioBounds,
    pub right_ratio: RatioBounds,
}

impl ThetaValue {
    pub fn value(&self) -> RatioBounds {
        self.left_ratio.min(&self.right_ratio)
    }
}

/// `θ_k` for every consecutive pair of the given hulls.
pub fn theta_from_hulls(systems: &[EkSystem]) -> Result<Vec<ThetaValue>> {
    systems
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].hull(), w[1].hull());
            let (mut p1, mut q1, mut p2, mut q2) =
                (a.left().clone(), a.right().clone(), b.left().clone(), b.right().clone());
            if !(separate(&mut p1, &mut q1) && separate(&mut q1, &mut p2) && separate(&mut p2, &mut q2)) {
                return Err(Error::PrecisionExhaustedAt { k: w[0].k, level: 0, steps: DEFAULT_REFINE_CAP });
            }
            let gap = (p2.lo() - q1.hi(), p2.hi() - q1.lo());
            Ok(ThetaValue {
                k: w[0].k,
                left_ratio: RatioBounds::of((q1.lo() - p1.hi(), q1.hi() - p1.lo()), gap.clone()),
                right_ratio: RatioBounds::of((q2.lo() - p2.hi(), q2.hi() - p2.lo()), gap),
            })
        })
        .collect()
}

/// `θ_1, …, θ_count`.
pub fn theta_sequence(x: &Rational, m: u32, count: usize, tol: &Rational) -> Result<Vec<ThetaValue>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    theta_from_hulls(&ek_hulls(x, m, count + 1, tol)?)
}

/// Outcome of checking an inequality between bracketed quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    /// Holds for every value in the brackets.
    Holds,
    /// The enclosures of the two sides overlap; this happens when the
    /// inequality is attained with equality.
    Tight,
    /// Fails for every value in the brackets.
    Fails,
}

impl BoundCheck {
    /// `lhs ≥ rhs` from enclosures `(lo, hi)` of both sides.
    fn at_least(lhs: (Rational, Rational), rhs: (Rational, Rational)) -> Self {
        if lhs.0 >= rhs.1 {
            BoundCheck::Holds
        } else if lhs.1 < rhs.0 {
            BoundCheck::Fails
        } else {
            BoundCheck::Tight
        }
    }
}

/// `λ₂ − λ₁ ≥ (1 − λ₁) λ₂^(n_j+n+1)` and `λ₄ − λ₃ ≥ (1 − λ₃) λ₄^(n_j+n+1)`.
/// Both are equalities when the prefix and the word (`w⁺` or `w`) consist
/// of the digit `m − 1` only.
pub fn interval_length_checks(sys: &EkSystem, pair: &AdjacentPair) -> [BoundCheck; 2] {
    let e = sys.n_j + pair.level + 1;
    let one = Rational::one();
    let side = |a: &Bracket, b: &Bracket| {
        BoundCheck::at_least(
            (b.lo() - a.hi(), b.hi() - a.lo()),
            ((&one - a.hi()) * pow(b.lo().clone(), e), (&one - a.lo()) * pow(b.hi().clone(), e)),
        )
    };
    [side(&pair.l1, &pair.l2), side(&pair.l3, &pair.l4)]
}

/// `λ₃ − λ₂ ≤ m λ₃^(n_j−ℓ) / (1 − λ₃) · λ₂^(n_j−ℓ+n+1)`; `None` when
/// `n_j ≤ ℓ` and the bound does not apply.
pub fn gap_bound_check(sys: &EkSystem, pair: &AdjacentPair) -> Option<BoundCheck> {
    let (n_j, ell) = (sys.n_j, sys.first_nonzero);
    if n_j <= ell {
        return None;
    }
    let e = n_j - ell;
    let rhs = |l2: &Rational, l3: &Rational| {
        int(sys.m) * pow(l3.clone(), e) / (Rational::one() - l3) * pow(l2.clone(), e + pair.level + 1)
    };
    Some(BoundCheck::at_least(
        (rhs(pair.l2.lo(), pair.l3.lo()), rhs(pair.l2.hi(), pair.l3.hi())),
        (pair.l3.lo() - pair.l2.hi(), pair.l3.hi() - pair.l2.lo()),
    ))
}

/// `(1 − m q) x / ((m − 1) q)`: for parameters `λ₁, λ₂ ≤ q` of `x`, the
/// codings evaluated at `q` differ by more than this times `|λ₁ − λ₂|`.
pub fn expansion_constant(x: &Rational, m: u32, q: &Rational) -> Rational {
    (Rational::one() - int(m) * q) * x / (int(m - 1) * q)
}

/// Checks the coding expansion bound for two bracketed parameters of the
/// same `x`, both at most `q`. The distance `|λ₁ − λ₂|` is replaced by its
/// upper enclosure.
pub fn coding_expansion_holds(q: &Rational, a: &Bracket, b: &Bracket) -> Result<bool> {
    let (ca, cb) = match (a.code(), b.code()) {
        (Some(ca), Some(cb)) => (ca, cb),
        _ => return Err(Error::Domain("both parameters need a coding".into())),
    };
    let (x, m) = (a.x(), a.m());
    let (hull_lo, _) = hull_of(x, m);
    if *q <= hull_lo || *q >= inv_m(m) || a.hi() > q || b.hi() > q {
        return Err(Error::Domain(format!("q = {q} must exceed both parameters and lie in the open hull")));
    }
    let diff = (eval_pi(ca, q)? - eval_pi(cb, q)?).abs();
    let dist = a.hi().max(b.hi()) - a.lo().min(b.lo());
    Ok(diff > expansion_constant(x, m, q) * dist)
}

/// Hull length growth `|I_{k+1}| / |I_k|` against `(2m)^(ℓ+1)/(m−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullGrowth {
    pub bound: Rational,
    /// Ratio enclosures for `k = 1, 2, …`.
    pub ratios: Vec<RatioBounds>,
    /// Largest `k` whose ratio is not certified below the bound (0 if none).
    pub threshold_index: usize,
}

pub fn hull_growth(systems: &[EkSystem]) -> Result<HullGrowth> {
    let Some(first) = systems.first() else {
        return Err(Error::Domain("no hulls given".into()));
    };
    let m = first.m;
    let bound = pow(int(2 * m), first.first_nonzero + 1) / int(m - 1);
    let mut ratios = Vec::new();
    let mut threshold_index = 0;
    for (i, w) in systems.windows(2).enumerate() {
        let mut lens = Vec::new();
        for s in w {
            let (mut p, mut q) = (s.hull.left().clone(), s.hull.right().clone());
            if !separate(&mut p, &mut q) {
                return Err(Error::PrecisionExhaustedAt { k: s.k, level: 0, steps: DEFAULT_REFINE_CAP });
            }
            lens.push((q.lo() - p.hi(), q.hi() - p.lo()));
        }
        let r = RatioBounds::of(lens[1].clone(), lens[0].clone());
        if r.hi >= bound {
            threshold_index = i + 1;
        }
        ratios.push(r);
    }
    Ok(HullGrowth { bound, ratios, threshold_index })
}

/// Which endpoint of a basic interval serves as a witness point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An endpoint of a basic interval of one set, lying in the hull of the
/// other. Endpoints of basic intervals belong to the Cantor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Word,
    pub side: Side,
    pub point: Bracket,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterleavePair {
    pub i: usize,
    pub j: usize,
    /// Point of `E_i(x)` inside the hull of `E_j(y)`.
    pub witness_x: Witness,
    /// Point of `E_j(y)` inside the hull of `E_i(x)`.
    pub witness_y: Witness,
    pub tau_x: Rational,
    pub tau_y: Rational,
    /// `min(tau_x, tau_y)` from the finite-depth thickness estimates.
    pub tau_min: Rational,
    pub meets_threshold: bool,
    /// Minimum of the certified lower bounds, when both exist.
    pub certified_tau_min: Option<Rational>,
}

/// `t > 1 + √2`, decided exactly.
pub fn exceeds_interleave_threshold(t: &Rational) -> bool {
    let s = t - Rational::one();
    s.is_positive() && &s * &s > int(2)
}

/// Certified `point ∈ hull`; `None` when precision ran out.
fn inside(point: &Bracket, hull: &BasicInterval) -> Option<bool> {
    let lo = compare_brackets(point, hull.left()).ok()?;
    let hi = compare_brackets(point, hull.right()).ok()?;
    Some(lo != Ordering::Less && hi != Ordering::Greater)
}

/// Certified disjointness of two basic intervals.
fn disjoint(a: &BasicInterval, b: &BasicInterval) -> bool {
    matches!(compare_brackets(a.right(), b.left()), Ok(Ordering::Less))
        || matches!(compare_brackets(b.right(), a.left()), Ok(Ordering::Less))
}

/// Depth-first search over the basic intervals of `sys` (down to `depth`)
/// for an endpoint inside `target`.
pub fn find_witness(sys: &EkSystem, target: &BasicInterval, depth: usize, tol: &Rational) -> Result<Option<Witness>> {
    let mut stack = vec![sys.hull.clone()];
    while let Some(node) = stack.pop() {
        if disjoint(&node, target) {
            continue;
        }
        for (side, point) in [(Side::Left, node.left()), (Side::Right, node.right())] {
            if inside(point, target) == Some(true) {
                return Ok(Some(Witness { word: sys.relative_word(&node).to_vec(), side, point: point.clone() }));
            }
        }
        if sys.relative_word(&node).len() < depth {
            let mut kids = sys.children(&node, tol)?;
            kids.reverse();
            stack.extend(kids);
        }
    }
    Ok(None)
}

/// Certified interleaved pairs `(i, j) ∈ [1, kmax]²`, sorted by `(i, j)`.
pub fn find_interleaved_pairs(
    x: &Rational,
    y: &Rational,
    m: u32,
    kmax: usize,
    depth: usize,
    tol: &Rational,
) -> Result<Vec<InterleavePair>> {
    find_interleaved_pairs_with(x, y, m, kmax, depth, DEFAULT_THICKNESS_DEPTH, tol)
}

/// [`find_interleaved_pairs`] with an explicit thickness scan depth.
pub fn find_interleaved_pairs_with(
    x: &Rational,
    y: &Rational,
    m: u32,
    kmax: usize,
    depth: usize,
    thickness_depth: usize,
    tol: &Rational,
) -> Result<Vec<InterleavePair>> {
    if kmax == 0 {
        GreedyExpansion::new(x, m)?;
        GreedyExpansion::new(y, m)?;
        return Ok(Vec::new());
    }
    let sx = ek_hulls(x, m, kmax, tol)?;
    let sy = ek_hulls(y, m, kmax, tol)?;
    let candidates: Vec<(usize, usize)> = (0..kmax)
        .flat_map(|i| (0..kmax).map(move |j| (i, j)))
        .filter(|&(i, j)| !disjoint(sx[i].hull(), sy[j].hull()))
        .collect();
    let found: Vec<Option<(usize, usize, Witness, Witness)>> = candidates
        .par_iter()
        .map(|&(i, j)| {
            let Some(wx) = find_witness(&sx[i], sy[j].hull(), depth, tol)? else {
                return Ok(None);
            };
            let Some(wy) = find_witness(&sy[j], sx[i].hull(), depth, tol)? else {
                return Ok(None);
            };
            Ok(Some((i, j, wx, wy)))
        })
        .collect::<Result<_>>()?;
    let found: Vec<_> = found.into_iter().flatten().collect();
    let mut needed: Vec<(bool, usize)> = found.iter().flat_map(|(i, j, _, _)| [(true, *i), (false, *j)]).collect();
    needed.sort_unstable();
    needed.dedup();
    let reports: Vec<((bool, usize), ThicknessReport)> = needed
        .par_iter()
        .map(|&(is_x, idx)| {
            let sys = if is_x { &sx[idx] } else { &sy[idx] };
            Ok(((is_x, idx), tau_report(sys, thickness_depth, tol)?))
        })
        .collect::<Result<_>>()?;
    let report = |key: (bool, usize)| &reports.iter().find(|(k, _)| *k == key).expect("computed").1;
    Ok(found
        .into_iter()
        .map(|(i, j, witness_x, witness_y)| {
            let (rx, ry) = (report((true, i)), report((false, j)));
            let tau_min = (&rx.tau_empirical).min(&ry.tau_empirical).clone();
            let certified_tau_min = match (&rx.newhouse_lower, &ry.newhouse_lower) {
                (Some(a), Some(b)) => Some(a.min(b).clone()),
                _ => None,
            };
            InterleavePair {
                i: i + 1,
                j: j + 1,
                witness_x,
                witness_y,
                tau_x: rx.tau_empirical.clone(),
                tau_y: ry.tau_empirical.clone(),
                meets_threshold: exceeds_interleave_threshold(&tau_min),
                tau_min,
                certified_tau_min,
            }
        })
        .collect())
}

/// Dimension figure for `E_i(x) ∩ E_j(y)` from a pair's thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionReport {
    pub i: usize,
    pub j: usize,
    pub tau_min: Rational,
    pub threshold_met: bool,
    /// `log 2 / log(2 + 1/√τ)`; the intersection carries a Cantor subset of
    /// thickness of order `√τ`, so this is an order-of figure rather than a
    /// certified bound.
    pub dim_lower: Option<f64>,
    pub order_of: bool,
}

pub fn intersection_report(pair: &InterleavePair) -> IntersectionReport {
    intersection_report_for(pair.i, pair.j, &pair.tau_min)
}

/// [`intersection_report`] from the raw thickness value.
pub fn intersection_report_for(i: usize, j: usize, tau_min: &Rational) -> IntersectionReport {
    let threshold_met = exceeds_interleave_threshold(tau_min);
    let dim_lower = threshold_met.then(|| dim_lower_from_thickness(crate::exact_arith::to_f64(tau_min).sqrt()));
    IntersectionReport { i, j, tau_min: tau_min.clone(), threshold_met, dim_lower, order_of: true }
}
