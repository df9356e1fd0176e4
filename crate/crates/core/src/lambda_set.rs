//! Nested interval covers of `Λ(x)`: admissible words, their basic
//! intervals `J_w = [p_w, q_w]`, and the gaps between neighbours.

use std::cmp::Ordering;

use log::warn;
use rayon::prelude::*;

use crate::coding::GreedyExpansion;
use crate::error::{Error, Result};
use crate::exact_arith::{
    compare_brackets, format_word, hull_of, inv_m, solve_lambda_within, Bracket, Code, Rational, Tail, Word,
};

/// Parameters whose coding starts with `word`: `left` solves
/// `π_λ(word (m−1)^∞) = x` and `right` solves `π_λ(word 0^∞) = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicInterval {
    word: Word,
    left: Bracket,
    right: Bracket,
}

impl BasicInterval {
    pub(crate) fn from_parts(word: Word, left: Bracket, right: Bracket) -> Self {
        BasicInterval { word, left, right }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn left(&self) -> &Bracket {
        &self.left
    }

    pub fn right(&self) -> &Bracket {
        &self.right
    }

    /// Outer enclosure `[left.lo, right.hi]`.
    pub fn outer(&self) -> (&Rational, &Rational) {
        (self.left.lo(), self.right.hi())
    }

    /// Certified enclosure of the length `q_w − p_w`.
    pub fn length_bounds(&self) -> (Rational, Rational) {
        (self.right.lo() - self.left.hi(), self.right.hi() - self.left.lo())
    }
}

/// The open interval between two neighbouring basic intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub lower: Bracket,
    pub upper: Bracket,
}

impl Gap {
    /// Certified enclosure of the gap length.
    pub fn length_bounds(&self) -> (Rational, Rational) {
        (self.upper.lo() - self.lower.hi(), self.upper.hi() - self.lower.lo())
    }
}

/// All basic intervals of one level, sorted by increasing λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverLevel {
    pub x: Rational,
    pub m: u32,
    pub depth: usize,
    pub intervals: Vec<BasicInterval>,
    pub gaps: Vec<Gap>,
    pub hull: (Rational, Rational),
}

fn is_greedy_prefix(g: &GreedyExpansion, w: &[u8]) -> bool {
    w.is_empty() || g.prefix(w.len()) == w
}

/// `A_n(x)` in increasing lexicographic order: empty below the first
/// position where the greedy expansion drops under `m − 1`, and otherwise
/// every length-`n` word not below `x₁…x_n`.
pub fn admissible_words(x: &Rational, m: u32, n: usize) -> Result<Vec<Word>> {
    let g = GreedyExpansion::new(x, m)?;
    let ell = g.first_defect();
    if n < ell {
        return Ok(Vec::new());
    }
    let mut level: Vec<Word> = vec![g.prefix(ell - 1)];
    for len in ell..=n {
        level = level
            .into_iter()
            .flat_map(|w| {
                let lo = if is_greedy_prefix(&g, &w) { g.digit(len) } else { 0 };
                (lo..m as u8).map(move |d| {
                    let mut c = w.clone();
                    c.push(d);
                    c
                })
            })
            .collect();
    }
    Ok(level)
}

/// True when `w` belongs to `A_{|w|}(x)`.
pub fn is_admissible(g: &GreedyExpansion, w: &[u8]) -> bool {
    w.len() >= g.first_defect() && w >= g.prefix(w.len()).as_slice()
}

fn endpoint(
    x: &Rational,
    m: u32,
    word: &[u8],
    tail: Tail,
    tol: &Rational,
    hint: (&Rational, &Rational),
) -> Result<Bracket> {
    let code = Code::new(m, word.to_vec(), tail)?;
    match solve_lambda_within(x, &code, tol, hint.0, hint.1) {
        // Only the greedy prefix itself can miss: its zero completion lies
        // below x for every λ ≤ 1/m, and its parameters accumulate at 1/m.
        Err(Error::NoRoot(_)) if tail == Tail::Zero => Ok(Bracket::pinned(x.clone(), m, inv_m(m))),
        other => other,
    }
}

/// `J_w` with both endpoints solved to width at most `tol`.
pub fn basic_interval(x: &Rational, m: u32, w: &[u8], tol: &Rational) -> Result<BasicInterval> {
    let g = GreedyExpansion::new(x, m)?;
    if !is_admissible(&g, w) {
        return Err(Error::NotAdmissible(format_word(m, w)));
    }
    let (lo, hi) = hull_of(x, m);
    Ok(BasicInterval {
        word: w.to_vec(),
        left: endpoint(x, m, w, Tail::Max, tol, (&lo, &hi))?,
        right: endpoint(x, m, w, Tail::Zero, tol, (&lo, &hi))?,
    })
}

fn children(g: &GreedyExpansion, parent: &BasicInterval, tol: &Rational) -> Result<Vec<BasicInterval>> {
    let (x, m) = (g.x(), g.m());
    let n = parent.word.len();
    let first = if is_greedy_prefix(g, &parent.word) { g.digit(n + 1) } else { 0 };
    let top = (m - 1) as u8;
    let hint = parent.outer();
    let mut out = Vec::new();
    for d in (first..=top).rev() {
        let mut word = parent.word.clone();
        word.push(d);
        let left = if d == top { parent.left.clone() } else { endpoint(x, m, &word, Tail::Max, tol, hint)? };
        let right = if d == 0 { parent.right.clone() } else { endpoint(x, m, &word, Tail::Zero, tol, hint)? };
        out.push(BasicInterval { word, left, right });
    }
    if out.is_empty() {
        warn!("word {} has no admissible children", format_word(m, &parent.word));
    }
    Ok(out)
}

fn gaps_of(intervals: &[BasicInterval]) -> Result<Vec<Gap>> {
    intervals
        .windows(2)
        .map(|pair| {
            let (a, b) = (&pair[0], &pair[1]);
            if compare_brackets(&a.right, &b.left)? != Ordering::Less {
                return Err(Error::Domain(format!(
                    "basic intervals {} and {} are not separated",
                    format_word(a.left.m(), &a.word),
                    format_word(b.left.m(), &b.word)
                )));
            }
            Ok(Gap { lower: a.right.clone(), upper: b.left.clone() })
        })
        .collect()
}

fn level(g: &GreedyExpansion, depth: usize, intervals: Vec<BasicInterval>) -> Result<CoverLevel> {
    let gaps = gaps_of(&intervals)?;
    Ok(CoverLevel { x: g.x().clone(), m: g.m(), depth, intervals, gaps, hull: hull_of(g.x(), g.m()) })
}

/// Every cover level from the first non-empty one up to `depth`.
///
/// Children are expanded in parallel; the output does not depend on the
/// number of worker threads.
pub fn cover_levels(x: &Rational, m: u32, depth: usize, tol: &Rational) -> Result<Vec<CoverLevel>> {
    let g = GreedyExpansion::new(x, m)?;
    let ell = g.first_defect();
    if depth < ell {
        return Err(Error::Domain(format!("depth {depth} is below the first cover level {ell}")));
    }
    let (lo, hi) = hull_of(x, m);
    let mut current: Vec<BasicInterval> = admissible_words(x, m, ell)?
        .into_iter()
        .rev()
        .map(|w| {
            Ok(BasicInterval {
                left: endpoint(x, m, &w, Tail::Max, tol, (&lo, &hi))?,
                right: endpoint(x, m, &w, Tail::Zero, tol, (&lo, &hi))?,
                word: w,
            })
        })
        .collect::<Result<_>>()?;
    let mut levels = Vec::with_capacity(depth + 1 - ell);
    for n in ell..=depth {
        if n > ell {
            let next: Vec<Vec<BasicInterval>> =
                current.par_iter().map(|p| children(&g, p, tol)).collect::<Result<_>>()?;
            current = next.into_iter().flatten().collect();
        }
        // Parents arrive in decreasing word order and children are emitted
        // from the largest digit down, so λ is already increasing.
        debug_assert!(current.windows(2).all(|p| p[0].word > p[1].word));
        levels.push(level(&g, n, current.clone())?);
    }
    Ok(levels)
}

/// The cover at a single `depth`.
pub fn cover(x: &Rational, m: u32, depth: usize, tol: &Rational) -> Result<CoverLevel> {
    Ok(cover_levels(x, m, depth, tol)?.pop().expect("at least one level"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{default_tol, eval_pi, ratio, to_f64};

    fn words(v: &[&str]) -> Vec<Word> {
        v.iter().map(|s| crate::exact_arith::parse_word(s).unwrap()).collect()
    }

    fn mid(b: &Bracket) -> f64 {
        to_f64(&b.midpoint())
    }

    #[test]
    fn admissible_examples() {
        let x = ratio(1, 2);
        assert!(admissible_words(&x, 2, 1).unwrap().is_empty());
        assert_eq!(admissible_words(&x, 2, 2).unwrap(), words(&["10", "11"]));
        assert_eq!(admissible_words(&x, 2, 3).unwrap(), words(&["100", "101", "110", "111"]));
    }

    #[test]
    fn admissible_brute_force_agreement() {
        for (p, q, m) in [(1, 3, 2), (3, 7, 3), (8, 9, 3), (2, 5, 2)] {
            let x = ratio(p, q);
            let g = GreedyExpansion::new(&x, m).unwrap();
            for n in 1..=5usize {
                let mut all = vec![vec![]];
                for _ in 0..n {
                    all = all
                        .into_iter()
                        .flat_map(|w: Word| (0..m as u8).map(move |d| [w.clone(), vec![d]].concat()))
                        .collect();
                }
                let expected: Vec<Word> = all.into_iter().filter(|w| is_admissible(&g, w)).collect();
                assert_eq!(admissible_words(&x, m, n).unwrap(), expected, "x={x} m={m} n={n}");
            }
        }
    }

    #[test]
    fn basic_interval_examples() {
        let x = ratio(1, 2);
        let j = basic_interval(&x, 2, &[1, 1], &default_tol()).unwrap();
        assert_eq!(*j.left().lo(), ratio(1, 3));
        assert!((mid(j.right()) - 0.366025).abs() < 5e-7);
        let j = basic_interval(&x, 2, &[1, 0], &default_tol()).unwrap();
        assert!((mid(j.left()) - 0.396608).abs() < 5e-7);
        assert_eq!(*j.right().hi(), ratio(1, 2));
        let j = basic_interval(&x, 2, &[1, 1, 0], &default_tol()).unwrap();
        assert!((mid(j.left()) - 0.352201).abs() < 5e-7);
        assert!(matches!(basic_interval(&x, 2, &[0, 1], &default_tol()), Err(Error::NotAdmissible(_))));
        assert!(matches!(basic_interval(&x, 2, &[1], &default_tol()), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn cover_depth_three_matches_construction() {
        let c = cover(&ratio(1, 2), 2, 3, &default_tol()).unwrap();
        let got: Vec<(f64, f64)> = c.intervals.iter().map(|j| (mid(j.left()), mid(j.right()))).collect();
        let want = [(1.0 / 3.0, 0.342508), (0.352201, 0.366025), (0.396608, 0.423854), (0.435958, 0.5)];
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w.0).abs() < 5e-6 && (g.1 - w.1).abs() < 5e-6, "{g:?} vs {w:?}");
        }
        assert_eq!(c.gaps.len(), 3);
    }

    #[test]
    fn depth_two_has_one_gap() {
        let c = cover(&ratio(1, 2), 2, 2, &default_tol()).unwrap();
        assert_eq!(c.intervals.len(), 2);
        assert_eq!(c.gaps.len(), 1);
        assert!((mid(&c.gaps[0].lower) - 0.366025).abs() < 5e-7);
        assert!((mid(&c.gaps[0].upper) - 0.396608).abs() < 5e-7);
    }

    #[test]
    fn depth_below_first_level_is_rejected() {
        assert!(cover(&ratio(1, 2), 2, 1, &default_tol()).is_err());
        // 7/8 = 0.111₂: the first level is 4.
        assert!(cover(&ratio(7, 8), 2, 3, &default_tol()).is_err());
        assert_eq!(cover(&ratio(7, 8), 2, 4, &default_tol()).unwrap().intervals.len(), 2);
    }

    #[test]
    fn non_terminating_point_pins_the_top_endpoint() {
        let x = ratio(1, 3);
        let c = cover(&x, 2, 4, &default_tol()).unwrap();
        let last = c.intervals.last().unwrap();
        assert_eq!(last.word(), &[0, 1, 0, 1]);
        assert!(last.right().is_exact());
        assert_eq!(*last.right().lo(), ratio(1, 2));
        assert!(last.right().code().is_none());
    }

    #[test]
    fn children_nest_and_share_endpoints() {
        let levels = cover_levels(&ratio(3, 7), 3, 5, &default_tol()).unwrap();
        for pair in levels.windows(2) {
            let (parent, child) = (&pair[0], &pair[1]);
            for c in &child.intervals {
                let owner: Vec<_> = parent.intervals.iter().filter(|p| c.word().starts_with(p.word())).collect();
                assert_eq!(owner.len(), 1);
                let p = owner[0];
                assert_ne!(compare_brackets(c.left(), p.left()).unwrap(), Ordering::Less);
                assert_ne!(compare_brackets(c.right(), p.right()).unwrap(), Ordering::Greater);
                match c.word().last() {
                    Some(0) => assert_eq!(c.right(), p.right()),
                    Some(2) => assert_eq!(c.left(), p.left()),
                    _ => {}
                }
            }
            let total = |lv: &CoverLevel, upper: bool| -> Rational {
                lv.intervals
                    .iter()
                    .map(|j| {
                        let (lo, hi) = j.length_bounds();
                        if upper {
                            hi
                        } else {
                            lo
                        }
                    })
                    .sum()
            };
            assert!(total(child, true) < total(parent, false));
        }
    }

    #[test]
    fn endpoints_reproduce_x() {
        let x = ratio(2, 5);
        let c = cover(&x, 2, 6, &default_tol()).unwrap();
        for j in &c.intervals {
            for b in [j.left(), j.right()] {
                if let Some(code) = b.code() {
                    assert!(eval_pi(code, b.lo()).unwrap() <= x);
                    assert!(eval_pi(code, b.hi()).unwrap() >= x);
                }
            }
        }
    }

    #[test]
    fn cover_is_independent_of_thread_count() {
        let x = ratio(5, 11);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| cover(&x, 3, 6, &ratio(1, 1 << 30)).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
