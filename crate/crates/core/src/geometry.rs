//! Geometric patterns equivalent to a relation hierarchy.
//!
//! The level-0 function is the step function taking `s_i·δ` on
//! `(t_{i-1}, t_i)` with `t_i = ε·i`. Each higher level `Ψ^[l+1]` is the
//! antiderivative of `Ψ^[l]` vanishing at `t_0`. Over a level-`l` block the
//! region under `Ψ^[l]` is one pattern with width `W_l = 2^l·ε`, height
//! `H_l = S_{l-1}` and area `S_l = W_l·H_l/2`. Everything except arc length is
//! exact rational arithmetic.

use std::fmt::Write as _;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::relations::{build_hierarchy, IntegerAssignment, SignSequence};

pub type Rational = BigRational;

/// Default absolute tolerance for arc-length quadrature.
pub const DEFAULT_ARC_TOL: f64 = 1e-9;

/// Abscissa unit `ε`, ordinate unit `δ`, and the number of unit intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    epsilon: Rational,
    delta: Rational,
    len: usize,
}

impl GridSpec {
    pub fn new(epsilon: Rational, delta: Rational, len: usize) -> Result<Self> {
        if !epsilon.is_positive() || !delta.is_positive() {
            return Err(Error::invalid("epsilon and delta must be positive"));
        }
        if len == 0 {
            return Err(Error::invalid("grid needs at least one interval"));
        }
        Ok(GridSpec { epsilon, delta, len })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `t_i = ε·i`.
    pub fn t(&self, i: usize) -> Rational {
        &self.epsilon * Rational::from_integer(BigInt::from(i))
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        (0..=self.len).map(|i| self.t(i)).collect()
    }
}

/// Piecewise polynomial with exact rational coefficients.
///
/// Coefficients of piece `i` are in ascending powers of the local variable
/// `u = t - t_i`, where `t_i` is the left breakpoint of the piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Vec<Rational>>,
}

fn horner(coeffs: &[Rational], u: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * u + c)
}

fn horner_f64(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().expect("rational is representable as f64")
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Vec<Rational>>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::invalid("need n+1 breakpoints for n pieces, n >= 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<Rational>] {
        &self.pieces
    }

    pub fn domain(&self) -> Range<Rational> {
        self.breakpoints[0].clone()..self.breakpoints[self.breakpoints.len() - 1].clone()
    }

    /// Highest degree with a nonzero coefficient over all pieces.
    pub fn degree(&self) -> usize {
        self.pieces
            .iter()
            .filter_map(|c| c.iter().rposition(|x| !x.is_zero()))
            .max()
            .unwrap_or(0)
    }

    /// Piece containing `t`; breakpoints belong to the piece on their right,
    /// except the final one.
    fn piece_index(&self, t: &Rational) -> Option<usize> {
        let last = self.breakpoints.len() - 1;
        if t < &self.breakpoints[0] || t > &self.breakpoints[last] {
            return None;
        }
        let idx = self.breakpoints.partition_point(|b| b <= t);
        Some(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let i = self.piece_index(t)?;
        Some(horner(&self.pieces[i], &(t - &self.breakpoints[i])))
    }

    /// Value at the right end of piece `i`.
    fn right_value(&self, i: usize) -> Rational {
        let h = &self.breakpoints[i + 1] - &self.breakpoints[i];
        horner(&self.pieces[i], &h)
    }

    pub fn derivative(&self) -> PiecewisePoly {
        let pieces = self
            .pieces
            .iter()
            .map(|c| {
                let d: Vec<Rational> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, x)| x * Rational::from_integer(BigInt::from(k)))
                    .collect();
                if d.is_empty() {
                    vec![Rational::zero()]
                } else {
                    d
                }
            })
            .collect();
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// Continuous antiderivative `F` with `F(start) = 0`.
    pub fn integrate_once(&self, start: &Rational) -> Result<PiecewisePoly> {
        if self.piece_index(start).is_none() {
            return Err(Error::invalid("integration start lies outside the domain"));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut left_value = Rational::zero();
        for (i, c) in self.pieces.iter().enumerate() {
            let mut anti = Vec::with_capacity(c.len() + 1);
            anti.push(left_value.clone());
            anti.extend(
                c.iter()
                    .enumerate()
                    .map(|(k, x)| x / Rational::from_integer(BigInt::from(k + 1))),
            );
            let h = &self.breakpoints[i + 1] - &self.breakpoints[i];
            left_value = horner(&anti, &h);
            pieces.push(anti);
        }
        let mut f = PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces,
        };
        let offset = f.eval(start).expect("start is inside the domain");
        if !offset.is_zero() {
            for c in &mut f.pieces {
                c[0] -= &offset;
            }
        }
        Ok(f)
    }

    /// Exact `∫ f` over `[a, b]`.
    pub fn integral(&self, range: Range<Rational>) -> Result<Rational> {
        if range.start > range.end {
            return Err(Error::invalid("integration range is reversed"));
        }
        let f = self.integrate_once(&self.breakpoints[0])?;
        let at = |t: &Rational| {
            f.eval(t)
                .ok_or_else(|| Error::invalid("integration range lies outside the domain"))
        };
        Ok(at(&range.end)? - at(&range.start)?)
    }

    /// Largest jump across interior breakpoints (zero for continuous functions).
    pub fn max_jump(&self) -> Rational {
        (0..self.pieces.len() - 1)
            .map(|i| (self.right_value(i) - &self.pieces[i + 1][0]).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let bps: Vec<f64> = self.breakpoints.iter().map(to_f64).collect();
        let i = bps
            .partition_point(|b| *b <= t)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        let c: Vec<f64> = self.pieces[i].iter().map(to_f64).collect();
        horner_f64(&c, t - bps[i])
    }
}

/// Level-0 function: `s_i·δ` on `(t_{i-1}, t_i)`.
pub fn step_function(signs: &SignSequence, grid: &GridSpec) -> Result<PiecewisePoly> {
    if signs.len() != grid.len() {
        return Err(Error::invalid(format!(
            "{} signs on a grid of {} intervals",
            signs.len(),
            grid.len()
        )));
    }
    let pieces = signs
        .as_slice()
        .iter()
        .map(|&s| vec![grid.delta() * Rational::from_integer(BigInt::from(s))])
        .collect();
    PiecewisePoly::new(grid.breakpoints(), pieces)
}

/// Exact shape metrics of one pattern plus its numeric boundary length.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternMetrics {
    pub level: usize,
    /// Index range of unit intervals covered.
    pub block: Range<usize>,
    pub width: Rational,
    pub height: Rational,
    pub area: Rational,
    pub arc_length: f64,
}

/// `Ψ^[0] ..= Ψ^[top]` together with per-block metrics at every level.
#[derive(Clone, Debug)]
pub struct PatternStack {
    pub grid: GridSpec,
    pub signs: SignSequence,
    /// `functions[l]` is `Ψ^[l]`.
    pub functions: Vec<PiecewisePoly>,
    /// `metrics[l]` lists the level-`l` patterns in block order.
    pub metrics: Vec<Vec<PatternMetrics>>,
}

impl PatternStack {
    pub fn top_level(&self) -> usize {
        self.functions.len() - 1
    }
}

/// Builds `Ψ^[0..=levels]`. Fails if `levels` exceeds the structural level of
/// the sign sequence.
pub fn build_pattern_stack(signs: &SignSequence, grid: &GridSpec, levels: usize) -> Result<PatternStack> {
    build_pattern_stack_with_tol(signs, grid, levels, DEFAULT_ARC_TOL)
}

pub fn build_pattern_stack_with_tol(
    signs: &SignSequence,
    grid: &GridSpec,
    levels: usize,
    arc_tol: f64,
) -> Result<PatternStack> {
    let structural = build_hierarchy(signs, &IntegerAssignment::descending(signs.len()))?.structural_level;
    if levels > structural {
        return Err(Error::LevelUnreachable {
            requested: levels,
            structural,
        });
    }
    let mut functions = vec![step_function(signs, grid)?];
    for _ in 0..levels {
        let next = functions.last().unwrap().integrate_once(&grid.t(0))?;
        functions.push(next);
    }

    let mut metrics = Vec::with_capacity(levels + 1);
    metrics.push(
        (0..grid.len())
            .map(|i| PatternMetrics {
                level: 0,
                block: i..i + 1,
                width: grid.epsilon().clone(),
                height: grid.delta().clone(),
                area: grid.delta() * grid.epsilon(),
                arc_length: to_f64(grid.epsilon()),
            })
            .collect::<Vec<_>>(),
    );
    for (level, psi) in functions.iter().enumerate().skip(1) {
        let size = 1usize << level;
        let mut row = Vec::with_capacity(grid.len() / size);
        for lo in (0..grid.len()).step_by(size) {
            let hi = lo + size;
            let (a, b) = (grid.t(lo), grid.t(hi));
            let mid = grid.t(lo + size / 2);
            let height = psi.eval(&mid).expect("midpoint in domain").abs();
            let area = psi.integral(a.clone()..b.clone())?.abs();
            let arc_length = arc_length(psi, a.clone()..b.clone(), arc_tol)?;
            row.push(PatternMetrics {
                level,
                block: lo..hi,
                width: b - a,
                height,
                area,
                arc_length,
            });
        }
        metrics.push(row);
    }
    Ok(PatternStack {
        grid: grid.clone(),
        signs: signs.clone(),
        functions,
        metrics,
    })
}

/// Parameters of the coarse-grained grid replacing a level-4 pattern by an
/// enlarged level-1 one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormalizedParams {
    pub epsilon_prime: Rational,
    pub delta_prime: Rational,
}

/// `ε' = 8ε`, `δ' = ε³δ`.
pub fn renormalize(grid: &GridSpec) -> RenormalizedParams {
    let eps = grid.epsilon();
    RenormalizedParams {
        epsilon_prime: eps * Rational::from_integer(BigInt::from(8)),
        delta_prime: eps * eps * eps * grid.delta(),
    }
}

/// The level-1 pattern function on the renormalized grid. Its integral over
/// `[0, 2ε']` equals the integral of `Ψ^[4]` over the base level-4 block.
pub fn renormalized_level1(signs: &SignSequence, grid: &GridSpec) -> Result<PiecewisePoly> {
    if signs.len() != 2 {
        return Err(Error::invalid("renormalized level-1 pattern takes exactly two signs"));
    }
    let params = renormalize(grid);
    let coarse = GridSpec::new(params.epsilon_prime, params.delta_prime, 2)?;
    step_function(signs, &coarse)?.integrate_once(&coarse.t(0))
}

/// Arc length of the graph of `f` over `range`, by adaptive Simpson on each
/// polynomial piece. The absolute error budget `tol` is shared between pieces
/// in proportion to their length.
pub fn arc_length(f: &PiecewisePoly, range: Range<Rational>, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if range.start >= range.end {
        return Err(Error::invalid("arc length over an empty range"));
    }
    let dom = f.domain();
    if range.start < dom.start || range.end > dom.end {
        return Err(Error::invalid("arc length range lies outside the domain"));
    }
    let (a, b) = (to_f64(&range.start), to_f64(&range.end));
    let total = b - a;
    let mut length = 0.0;
    for (i, coeffs) in f.pieces.iter().enumerate() {
        let lo = std::cmp::max(&f.breakpoints[i], &range.start);
        let hi = std::cmp::min(&f.breakpoints[i + 1], &range.end);
        if lo >= hi {
            continue;
        }
        let origin = to_f64(&f.breakpoints[i]);
        let slope: Vec<f64> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * to_f64(c))
            .collect();
        let integrand = |t: f64| {
            let d = horner_f64(&slope, t - origin);
            (1.0 + d * d).sqrt()
        };
        let (x0, x1) = (to_f64(lo), to_f64(hi));
        length += adaptive_simpson(&integrand, x0, x1, tol * (x1 - x0) / total, 50);
    }
    Ok(length)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// CSV rows `(level, block, W, H, S, arc_length)` with exact values as `p/q`.
pub fn metrics_csv(stack: &PatternStack) -> String {
    let mut out = String::from("level,block,width,height,area,arc_length\n");
    for row in &stack.metrics {
        for m in row {
            let _ = writeln!(
                out,
                "{},{}:{},{},{},{},{:.9}",
                m.level,
                m.block.start,
                m.block.end,
                rational_to_string(&m.width),
                rational_to_string(&m.height),
                rational_to_string(&m.area),
                m.arc_length
            );
        }
    }
    out
}

/// Layout of the SVG rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub panel_height: f64,
    pub margin: f64,
    pub samples_per_interval: usize,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800.0,
            panel_height: 120.0,
            margin: 40.0,
            samples_per_interval: 32,
        }
    }
}

/// Affine map from data coordinates of one level to SVG pixels:
/// `x = x0 + sx·t`, `y = y0 - sy·Ψ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PanelTransform {
    pub x0: f64,
    pub sx: f64,
    pub y0: f64,
    pub sy: f64,
}

impl PanelTransform {
    pub fn to_px(&self, t: f64, value: f64) -> (f64, f64) {
        (self.x0 + self.sx * t, self.y0 - self.sy * value)
    }

    pub fn from_px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) / self.sx, (self.y0 - y) / self.sy)
    }
}

/// Sample abscissae of one level: `samples_per_interval` points per unit
/// interval plus the final breakpoint.
pub fn sample_points(grid: &GridSpec, samples_per_interval: usize) -> Vec<Rational> {
    let step = grid.epsilon() / Rational::from_integer(BigInt::from(samples_per_interval));
    let mut ts: Vec<Rational> = (0..grid.len() * samples_per_interval)
        .map(|j| &step * Rational::from_integer(BigInt::from(j)))
        .collect();
    ts.push(grid.t(grid.len()));
    ts
}

/// Panel transforms, one per level, for a given stack and layout.
pub fn panel_transforms(stack: &PatternStack, options: &SvgOptions) -> Vec<PanelTransform> {
    let span = to_f64(&stack.grid.t(stack.grid.len()));
    let plot_width = options.width - 2.0 * options.margin;
    let samples = sample_points(&stack.grid, options.samples_per_interval);
    stack
        .functions
        .iter()
        .enumerate()
        .map(|(level, psi)| {
            let peak = samples
                .iter()
                .map(|t| to_f64(&psi.eval(t).unwrap()).abs())
                .fold(0.0f64, f64::max);
            let peak = if peak > 0.0 { peak } else { 1.0 };
            let top = options.margin + level as f64 * (options.panel_height + options.margin);
            PanelTransform {
                x0: options.margin,
                sx: plot_width / span,
                y0: top + options.panel_height / 2.0,
                sy: 0.45 * options.panel_height / peak,
            }
        })
        .collect()
}

/// SVG 1.1 document with one `<g>` layer per level, each holding a polyline
/// sampled from the exact function.
pub fn render_svg(stack: &PatternStack, options: &SvgOptions) -> String {
    let levels = stack.functions.len();
    let height = options.margin + levels as f64 * (options.panel_height + options.margin);
    let transforms = panel_transforms(stack, options);
    let samples = sample_points(&stack.grid, options.samples_per_interval);
    let span = to_f64(&stack.grid.t(stack.grid.len()));

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        options.width, height, options.width, height
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        options.width, height
    );
    for (level, (psi, tf)) in stack.functions.iter().zip(&transforms).enumerate() {
        let _ = writeln!(svg, r#"<g id="level-{level}" class="level">"#);
        let (ax0, ay) = tf.to_px(0.0, 0.0);
        let (ax1, _) = tf.to_px(span, 0.0);
        let _ = writeln!(
            svg,
            r##"<line x1="{ax0}" y1="{ay}" x2="{ax1}" y2="{ay}" stroke="#999999" stroke-width="0.5"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">l = {level}</text>"#,
            4.0,
            tf.y0 - options.panel_height / 2.0 + 12.0
        );
        let mut points = String::new();
        for (k, t) in samples.iter().enumerate() {
            let value = to_f64(&psi.eval(t).unwrap());
            let (x, y) = tf.to_px(to_f64(t), value);
            if k > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{x},{y}");
        }
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="#1f4e9e" stroke-width="1" points="{points}"/>"##
        );
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}
