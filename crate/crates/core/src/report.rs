//! Serialisable views of results and their JSON, CSV, SVG and text
//! renderings. Approximate values are bracket midpoints (or certified
//! bounds rounded toward −∞) printed with a fixed number of digits.

use std::fmt::Write as _;

use serde::Serialize;

use crate::coding::{MembershipResult, Verdict};
use crate::dimension::ScanRow;
use crate::exact_arith::{
    format_decimal, format_decimal_down, format_rational, format_word, parse_rational, Bracket, Rational,
};
use crate::lambda_set::CoverLevel;
use crate::thickness::{DimBasis, InterleavePair, IntersectionReport, Side, ThicknessReport};

/// Output format of every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

/// Width in SVG user units that the hull is mapped onto.
pub const SVG_HULL_WIDTH: f64 = 1000.0;
const SVG_MARGIN: f64 = 20.0;
const SVG_ROW: f64 = 30.0;
const SVG_BAR: f64 = 6.0;

fn dec(r: &Rational, digits: usize) -> String {
    format_decimal(r, digits)
}

fn mid(b: &Bracket, digits: usize) -> String {
    format_decimal(&b.midpoint(), digits)
}

fn json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("views serialise");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalView {
    pub word: String,
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelView {
    pub level: usize,
    pub intervals: Vec<IntervalView>,
    pub gaps: Vec<[String; 2]>,
}

/// Rendered cover levels of one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverView {
    pub x: Rational,
    pub m: u32,
    pub depth: usize,
    pub digits: usize,
    pub hull: (Rational, Rational),
    pub levels: Vec<LevelView>,
}

#[derive(Serialize)]
struct CoverJson<'a> {
    x: String,
    m: u32,
    depth: usize,
    digits: usize,
    hull: [String; 2],
    intervals: &'a [IntervalView],
    gaps: &'a [[String; 2]],
}

impl CoverView {
    pub fn from_levels(levels: &[CoverLevel], digits: usize) -> Self {
        let last = levels.last().expect("at least one level");
        CoverView {
            x: last.x.clone(),
            m: last.m,
            depth: last.depth,
            digits,
            hull: last.hull.clone(),
            levels: levels
                .iter()
                .map(|lv| LevelView {
                    level: lv.depth,
                    intervals: lv
                        .intervals
                        .iter()
                        .map(|j| IntervalView {
                            word: format_word(lv.m, j.word()),
                            lo: mid(j.left(), digits),
                            hi: mid(j.right(), digits),
                        })
                        .collect(),
                    gaps: lv.gaps.iter().map(|g| [mid(&g.lower, digits), mid(&g.upper, digits)]).collect(),
                })
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Svg => self.svg(),
            Format::Text => self.text(),
        }
    }

    /// The deepest level as JSON.
    pub fn json(&self) -> String {
        let last = self.levels.last().expect("at least one level");
        json_string(&CoverJson {
            x: format_rational(&self.x),
            m: self.m,
            depth: self.depth,
            digits: self.digits,
            hull: [format_rational(&self.hull.0), format_rational(&self.hull.1)],
            intervals: &last.intervals,
            gaps: &last.gaps,
        })
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("level,word,lo,hi\n");
        for lv in &self.levels {
            for j in &lv.intervals {
                let _ = writeln!(out, "{},{},{},{}", lv.level, j.word, j.lo, j.hi);
            }
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "x = {}, m = {}, hull = [{}, {}]\n",
            format_rational(&self.x),
            self.m,
            format_rational(&self.hull.0),
            format_rational(&self.hull.1)
        );
        for lv in &self.levels {
            let _ = writeln!(out, "level {} ({} intervals)", lv.level, lv.intervals.len());
            for j in &lv.intervals {
                let _ = writeln!(out, "  {:<w$}  [{}, {}]", j.word, j.lo, j.hi, w = lv.level);
            }
        }
        out
    }

    /// Hull bar on top, then one row of bars per level. The hull maps onto
    /// [`SVG_HULL_WIDTH`] units; bar positions come from the rendered
    /// decimals, so they match the printed values exactly.
    pub fn svg(&self) -> String {
        let (h0, h1) = (&self.hull.0, &self.hull.1);
        let span = h1 - h0;
        let coord = |s: &str| -> f64 {
            if span == Rational::from_integer(0.into()) {
                return SVG_MARGIN;
            }
            let v = parse_rational(s).expect("rendered decimals parse");
            SVG_MARGIN + crate::exact_arith::to_f64(&((v - h0) / &span)) * SVG_HULL_WIDTH
        };
        let rows = self.levels.len() + 1;
        let width = SVG_HULL_WIDTH + 2.0 * SVG_MARGIN + 80.0;
        let height = SVG_ROW * rows as f64 + SVG_MARGIN;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
        );
        let _ = writeln!(
            out,
            r#"  <desc>Parameter set of x = {} for m = {}; hull [{}, {}] mapped to {SVG_HULL_WIDTH:.0} units</desc>"#,
            format_rational(&self.x),
            self.m,
            format_rational(h0),
            format_rational(h1)
        );
        let bar = |out: &mut String, y: f64, class: &str, word: &str, lo: &str, hi: &str| {
            let (a, b) = (coord(lo), coord(hi));
            let _ = writeln!(
                out,
                r#"    <rect class="{class}" x="{a:.3}" y="{y:.1}" width="{:.3}" height="{SVG_BAR:.1}" data-word="{word}" data-lo="{lo}" data-hi="{hi}"/>"#,
                (b - a).max(0.0)
            );
        };
        let text_x = SVG_MARGIN + SVG_HULL_WIDTH + 10.0;
        let y0 = SVG_MARGIN;
        let _ = writeln!(out, r#"  <g class="row" data-row="hull">"#);
        bar(&mut out, y0, "hull", "", &dec(h0, self.digits), &dec(h1, self.digits));
        let _ = writeln!(out, r#"    <text x="{text_x:.1}" y="{:.1}" font-size="10">hull</text>"#, y0 + SVG_BAR);
        let _ = writeln!(out, "  </g>");
        for (i, lv) in self.levels.iter().enumerate() {
            let y = y0 + SVG_ROW * (i + 1) as f64;
            let _ = writeln!(out, r#"  <g class="row" data-row="{}">"#, lv.level);
            for j in &lv.intervals {
                bar(&mut out, y, "interval", &j.word, &j.lo, &j.hi);
            }
            let _ = writeln!(
                out,
                r#"    <text x="{text_x:.1}" y="{:.1}" font-size="10">n = {}</text>"#,
                y + SVG_BAR,
                lv.level
            );
            let _ = writeln!(out, "  </g>");
        }
        out.push_str("</svg>\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelMinView {
    pub level: usize,
    pub min_lower: String,
    pub w_plus: String,
    pub w: String,
}

/// One thickness report in printable form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThicknessView {
    pub k: usize,
    pub j: usize,
    pub b: u8,
    pub n_j: usize,
    pub depth: usize,
    pub digits: usize,
    pub per_level_min: Vec<LevelMinView>,
    pub tau_empirical: String,
    /// The finite-depth minimum can only overestimate the infimum.
    pub tau_empirical_is_upper_estimate: bool,
    pub tau_analytic_lower: Option<String>,
    pub newhouse_lower: Option<String>,
    pub dim_lower: String,
    pub dim_lower_basis: &'static str,
}

impl ThicknessView {
    pub fn new(r: &ThicknessReport, m: u32, digits: usize) -> Self {
        ThicknessView {
            k: r.k,
            j: r.j,
            b: r.b,
            n_j: r.n_j,
            depth: r.depth,
            digits,
            per_level_min: r
                .per_level_min
                .iter()
                .map(|l| LevelMinView {
                    level: l.level,
                    min_lower: format_decimal_down(&l.min_lower, digits),
                    w_plus: format_word(m, &l.w_plus),
                    w: format_word(m, &l.w),
                })
                .collect(),
            tau_empirical: format_decimal_down(&r.tau_empirical, digits),
            tau_empirical_is_upper_estimate: true,
            tau_analytic_lower: r.tau_analytic_lower.as_ref().map(|t| format_decimal_down(t, digits)),
            newhouse_lower: r.newhouse_lower.as_ref().map(|t| format_decimal_down(t, digits)),
            dim_lower: format!("{:.*}", digits, r.dim_lower),
            dim_lower_basis: match r.dim_lower_basis {
                DimBasis::Certified => "certified",
                DimBasis::Empirical => "empirical",
            },
        }
    }
}

#[derive(Serialize)]
struct ThicknessJson<'a> {
    x: String,
    m: u32,
    reports: &'a [ThicknessView],
}

pub fn render_thickness(x: &Rational, m: u32, views: &[ThicknessView], format: Format) -> String {
    let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
    match format {
        Format::Json => json_string(&ThicknessJson { x: format_rational(x), m, reports: views }),
        Format::Csv => {
            let mut out = String::from("k,j,b,n_j,depth,tau_empirical,tau_analytic_lower,newhouse_lower,dim_lower\n");
            for v in views {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    v.k,
                    v.j,
                    v.b,
                    v.n_j,
                    v.depth,
                    v.tau_empirical,
                    v.tau_analytic_lower.clone().unwrap_or_default(),
                    v.newhouse_lower.clone().unwrap_or_default(),
                    v.dim_lower
                );
            }
            out
        }
        Format::Text | Format::Svg => {
            let mut out =
                format!("{:>4}  {:>16}  {:>20}  {:>10}\n", "k", "tau_empirical", "tau_analytic_lower", "dim_lower");
            for v in views {
                let _ = writeln!(
                    out,
                    "{:>4}  {:>16}  {:>20}  {:>10}",
                    v.k,
                    v.tau_empirical,
                    opt(&v.tau_analytic_lower),
                    v.dim_lower
                );
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessView {
    pub word: String,
    pub side: &'static str,
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionView {
    pub threshold_met: bool,
    pub dim_lower: Option<String>,
    pub order_of: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairView {
    pub i: usize,
    pub j: usize,
    pub witness_x: WitnessView,
    pub witness_y: WitnessView,
    pub tau_x: String,
    pub tau_y: String,
    pub tau_min: String,
    pub meets_threshold: bool,
    pub certified_tau_min: Option<String>,
    pub report: IntersectionView,
}

impl PairView {
    pub fn new(pair: &InterleavePair, report: &IntersectionReport, m: u32, digits: usize) -> Self {
        let witness = |w: &crate::thickness::Witness| WitnessView {
            word: format_word(m, &w.word),
            side: match w.side {
                Side::Left => "left",
                Side::Right => "right",
            },
            lo: format_rational(w.point.lo()),
            hi: format_rational(w.point.hi()),
        };
        PairView {
            i: pair.i,
            j: pair.j,
            witness_x: witness(&pair.witness_x),
            witness_y: witness(&pair.witness_y),
            tau_x: format_decimal_down(&pair.tau_x, digits),
            tau_y: format_decimal_down(&pair.tau_y, digits),
            tau_min: format_decimal_down(&pair.tau_min, digits),
            meets_threshold: pair.meets_threshold,
            certified_tau_min: pair.certified_tau_min.as_ref().map(|t| format_decimal_down(t, digits)),
            report: IntersectionView {
                threshold_met: report.threshold_met,
                dim_lower: report.dim_lower.map(|d| format!("{d:.digits$}")),
                order_of: report.order_of,
            },
        }
    }
}

#[derive(Serialize)]
struct IntersectJson<'a> {
    x: String,
    y: String,
    m: u32,
    kmax: usize,
    depth: usize,
    digits: usize,
    pairs: &'a [PairView],
    best_dim_lower: Option<String>,
}

/// Everything `intersect` prints.
pub struct IntersectView<'a> {
    pub x: &'a Rational,
    pub y: &'a Rational,
    pub m: u32,
    pub kmax: usize,
    pub depth: usize,
    pub digits: usize,
    pub pairs: Vec<PairView>,
    pub best_dim_lower: Option<f64>,
}

impl IntersectView<'_> {
    fn best(&self) -> Option<String> {
        self.best_dim_lower.map(|d| format!("{d:.*}", self.digits))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(&IntersectJson {
                x: format_rational(self.x),
                y: format_rational(self.y),
                m: self.m,
                kmax: self.kmax,
                depth: self.depth,
                digits: self.digits,
                pairs: &self.pairs,
                best_dim_lower: self.best(),
            }),
            Format::Csv => {
                let mut out = String::from("i,j,tau_x,tau_y,tau_min,meets_threshold,dim_lower\n");
                for p in &self.pairs {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        p.i,
                        p.j,
                        p.tau_x,
                        p.tau_y,
                        p.tau_min,
                        p.meets_threshold,
                        p.report.dim_lower.clone().unwrap_or_default()
                    );
                }
                out
            }
            Format::Text | Format::Svg => {
                let mut out =
                    format!("{:>4}  {:>4}  {:>14}  {:>9}  {:>10}\n", "i", "j", "tau_min", "threshold", "dim_lower");
                for p in &self.pairs {
                    let _ = writeln!(
                        out,
                        "{:>4}  {:>4}  {:>14}  {:>9}  {:>10}",
                        p.i,
                        p.j,
                        p.tau_min,
                        if p.meets_threshold { "met" } else { "not met" },
                        p.report.dim_lower.clone().unwrap_or_else(|| "-".into())
                    );
                }
                let _ = writeln!(
                    out,
                    "{} interleaved pair(s); best dim_lower (order of): {}",
                    self.pairs.len(),
                    self.best().unwrap_or_else(|| "none".into())
                );
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridLevelView {
    pub t: u32,
    pub size: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRowView {
    pub delta: String,
    pub window: [String; 2],
    pub slope: String,
    pub clamped: bool,
    pub theoretical: String,
    pub grid_levels: Vec<GridLevelView>,
}

impl ScanRowView {
    pub fn new(row: &ScanRow, digits: usize) -> Self {
        ScanRowView {
            delta: format_rational(&row.delta),
            window: [format_rational(&row.estimate.window.0), format_rational(&row.estimate.window.1)],
            slope: format!("{:.*}", digits, row.estimate.slope),
            clamped: row.estimate.clamped,
            theoretical: format!("{:.*}", digits, row.theoretical),
            grid_levels: row
                .estimate
                .grid_levels
                .iter()
                .map(|&(t, count)| GridLevelView { t, size: format!("2^-{t}"), count })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct DimensionJson<'a> {
    x: String,
    m: u32,
    at: &'a str,
    center: String,
    depth: usize,
    grid_depth: u32,
    digits: usize,
    rows: &'a [ScanRowView],
}

/// Everything `dimension` prints.
pub struct DimensionView<'a> {
    pub x: &'a Rational,
    pub m: u32,
    pub at: &'a str,
    pub center: &'a Bracket,
    pub depth: usize,
    pub grid_depth: u32,
    pub digits: usize,
    pub rows: Vec<ScanRowView>,
}

impl DimensionView<'_> {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(&DimensionJson {
                x: format_rational(self.x),
                m: self.m,
                at: self.at,
                center: mid(self.center, self.digits),
                depth: self.depth,
                grid_depth: self.grid_depth,
                digits: self.digits,
                rows: &self.rows,
            }),
            Format::Csv => {
                let mut out = String::from("delta,t,size,count\n");
                for r in &self.rows {
                    for g in &r.grid_levels {
                        let _ = writeln!(out, "{},{},{},{}", r.delta, g.t, g.size, g.count);
                    }
                }
                out
            }
            Format::Text | Format::Svg => {
                let mut out = format!(
                    "center {} ({}), depth {}, grid depth {}\n{:>12}  {:>10}  {:>12}\n",
                    mid(self.center, self.digits),
                    self.at,
                    self.depth,
                    self.grid_depth,
                    "delta",
                    "slope",
                    "theoretical"
                );
                for r in &self.rows {
                    let _ = writeln!(out, "{:>12}  {:>10}  {:>12}", r.delta, r.slope, r.theoretical);
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
struct MembershipJson {
    x: String,
    lambda: String,
    m: u32,
    max_steps: usize,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preperiod: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<String>,
    extracted_digits: String,
}

pub fn render_membership(
    x: &Rational,
    lambda: &Rational,
    m: u32,
    max_steps: usize,
    r: &MembershipResult,
    format: Format,
) -> String {
    let word = |w: &[u8]| format_word(m, w);
    let (verdict, step, preperiod, period) = match &r.verdict {
        Verdict::Member { preperiod, period } => ("member", None, Some(word(preperiod)), Some(word(period))),
        Verdict::NotMember { step } => ("not_member", Some(*step), None, None),
        Verdict::Undetermined { depth } => ("undetermined", Some(*depth), None, None),
    };
    match format {
        Format::Json => json_string(&MembershipJson {
            x: format_rational(x),
            lambda: format_rational(lambda),
            m,
            max_steps,
            verdict,
            step,
            preperiod,
            period,
            extracted_digits: word(&r.extracted_digits),
        }),
        Format::Csv => format!(
            "verdict,step,preperiod,period,extracted_digits\n{verdict},{},{},{},{}\n",
            step.map(|s| s.to_string()).unwrap_or_default(),
            preperiod.unwrap_or_default(),
            period.unwrap_or_default(),
            word(&r.extracted_digits)
        ),
        Format::Text | Format::Svg => match &r.verdict {
            Verdict::Member { .. } => {
                format!("member: coding {}({})^inf\n", preperiod.unwrap_or_default(), period.unwrap_or_default())
            }
            Verdict::NotMember { step } => format!("not a member: no digit fits at step {step}\n"),
            Verdict::Undetermined { depth } => format!("undetermined after {depth} steps\n"),
        },
    }
}
