//! Convex analysis on uniform one-dimensional grids.
//!
//! Grid functions carry `f64::INFINITY` as an explicit sentinel outside their
//! effective domain, which is always a contiguous index range.

use std::io::{Read, Write};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};

/// Uniform grid `lo + i·spacing`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return range(format!(
                "grid endpoints must satisfy lo < hi, got [{lo}, {hi}]"
            ));
        }
        if n < 2 {
            return range(format!("grid needs at least 2 points, got {n}"));
        }
        Ok(Self { lo, hi, n })
    }

    /// Grid on `[lo, hi]` whose spacing is exactly `h` (up to rounding of the count).
    pub fn with_spacing(lo: f64, hi: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return range(format!("spacing must be positive, got {h}"));
        }
        let cells = ((hi - lo) / h).round() as usize;
        Self::new(lo, hi, cells.max(1) + 1)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let k = ((x - self.lo) / self.spacing()).round();
        k.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Samples of an extended-real function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Interface(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let mut first = None;
        let mut last = None;
        for (i, v) in values.iter().enumerate() {
            if v.is_nan() || *v == f64::NEG_INFINITY {
                return Err(Error::Domain(format!(
                    "value {v} at node {i} is not allowed"
                )));
            }
            if v.is_finite() {
                first.get_or_insert(i);
                last = Some(i);
            }
        }
        if let (Some(a), Some(b)) = (first, last) {
            if values[a..=b].iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain(
                    "finite values must form a contiguous range".into(),
                ));
            }
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Index range of finite values, `None` when the effective domain is empty.
    pub fn domain(&self) -> Option<RangeInclusive<usize>> {
        let a = self.values.iter().position(|v| v.is_finite())?;
        let b = self.values.iter().rposition(|v| v.is_finite())?;
        Some(a..=b)
    }

    pub fn finite_count(&self) -> usize {
        self.domain().map_or(0, |d| d.end() - d.start() + 1)
    }

    /// Sup norm over the effective domain (0 when empty).
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute slope between adjacent finite nodes.
    pub fn max_slope(&self) -> f64 {
        let h = self.grid.spacing();
        self.values
            .windows(2)
            .filter(|w| w[0].is_finite() && w[1].is_finite())
            .fold(0.0, |m, w| m.max((w[1] - w[0]).abs() / h))
    }

    /// Linear interpolation; `+∞` outside the effective domain.
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.grid.spacing();
        let s = (x - self.grid.lo) / h;
        if s < -1e-12 || s > (self.grid.n - 1) as f64 + 1e-12 {
            return f64::INFINITY;
        }
        let s = s.clamp(0.0, (self.grid.n - 1) as f64);
        let i = (s.floor() as usize).min(self.grid.n - 2);
        let w = s - i as f64;
        let (a, b) = (self.values[i], self.values[i + 1]);
        if w == 0.0 {
            a
        } else if w == 1.0 {
            b
        } else {
            a + w * (b - a)
        }
    }

    /// Discrete convexity test on the effective domain: every second difference ≥ −tol.
    pub fn is_convex(&self, tol: f64) -> bool {
        min_second_difference(&self.values) >= -tol
    }

    /// Write as CSV with header `x,value`; `+∞` becomes `inf`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "value"])?;
        for (x, v) in self.grid.points().iter().zip(&self.values) {
            out.write_record([x.to_string(), fmt_ext(*v)])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["x", "value"] {
            return Err(Error::Parse(format!(
                "expected header x,value, got {header:?}"
            )));
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            xs.push(parse_ext(&rec[0])?);
            vs.push(parse_ext(&rec[1])?);
        }
        let grid = grid_from_points(&xs)?;
        Self::new(grid, vs)
    }
}

pub(crate) fn fmt_ext(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

pub(crate) fn parse_ext(s: &str) -> Result<f64> {
    let s = s.trim();
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

/// Recover a uniform grid from listed nodes, rejecting non-uniform spacing.
pub(crate) fn grid_from_points(xs: &[f64]) -> Result<Grid1D> {
    if xs.len() < 2 {
        return Err(Error::Parse("need at least two grid rows".into()));
    }
    let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len())?;
    let tol = 1e-9 * grid.spacing();
    for (i, x) in xs.iter().enumerate() {
        if (grid.point(i) - x).abs() > tol {
            return Err(Error::Parse(format!("non-uniform grid at row {i}")));
        }
    }
    Ok(grid)
}

/// Smallest second difference `v[i+1] − 2v[i] + v[i−1]` over finite triples.
pub(crate) fn min_second_difference(v: &[f64]) -> f64 {
    v.windows(3)
        .filter(|w| w.iter().all(|x| x.is_finite()))
        .fold(f64::INFINITY, |m, w| m.min(w[2] - 2.0 * w[1] + w[0]))
}

/// Lower convex hull of equispaced samples `ys`, evaluated back at every index.
///
/// Collinear middle points are kept, so hull vertices keep their exact values.
pub(crate) fn lower_hull_equispaced(ys: &[f64]) -> Vec<f64> {
    let n = ys.len();
    if n <= 2 {
        return ys.to_vec();
    }
    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            // cross((o,ys[o]), (a,ys[a]), (k,ys[k])) with integer abscissae
            let cross = (a - o) as f64 * (ys[k] - ys[o]) - (ys[a] - ys[o]) * (k - o) as f64;
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = vec![0.0; n];
    for seg in hull.windows(2) {
        let (i, j) = (seg[0], seg[1]);
        out[i] = ys[i];
        let d = (j - i) as f64;
        for (k, o) in out.iter_mut().enumerate().take(j).skip(i + 1) {
            let w = (k - i) as f64 / d;
            *o = ys[i] + w * (ys[j] - ys[i]);
        }
    }
    out[n - 1] = ys[n - 1];
    out
}

/// Greatest convex minorant on the effective domain, `+∞` outside it.
pub fn convex_envelope(f: &GridFunction) -> Result<GridFunction> {
    let dom = match f.domain() {
        Some(d) if d.end() > d.start() => d,
        _ => {
            return Err(Error::Degenerate(
                "convex envelope needs at least 2 finite values".into(),
            ))
        }
    };
    let mut values = vec![f64::INFINITY; f.grid.len()];
    let hull = lower_hull_equispaced(&f.values[dom.clone()]);
    values[dom].copy_from_slice(&hull);
    GridFunction::new(f.grid, values)
}

/// Discrete Legendre–Fenchel transform `p ↦ max_x (p·x − f(x))`, exhaustive O(n·m).
pub fn legendre(f: &GridFunction, dual: &Grid1D) -> Result<GridFunction> {
    let dom = f
        .domain()
        .ok_or_else(|| Error::Degenerate("legendre of a function with empty domain".into()))?;
    let xs: Vec<f64> = dom.clone().map(|i| f.grid.point(i)).collect();
    let fs = &f.values[dom];
    let values = dual
        .points()
        .into_iter()
        .map(|p| {
            xs.iter()
                .zip(fs)
                .fold(f64::NEG_INFINITY, |m, (x, v)| m.max(p * x - v))
        })
        .collect();
    GridFunction::new(*dual, values)
}

/// Legendre transform of a convex input in O(n + m) by walking slopes and dual nodes together.
///
/// Fails with a contract error unless `f` passes the convexity test at `tol`.
pub fn legendre_convex(f: &GridFunction, dual: &Grid1D, tol: f64) -> Result<GridFunction> {
    let dom = f
        .domain()
        .ok_or_else(|| Error::Degenerate("legendre of a function with empty domain".into()))?;
    if !f.is_convex(tol) {
        return Err(Error::Contract(
            "legendre_convex input is not convex".into(),
        ));
    }
    let xs: Vec<f64> = dom.clone().map(|i| f.grid.point(i)).collect();
    let fs = &f.values[dom];
    let mut i = 0;
    let values = dual
        .points()
        .into_iter()
        .map(|p| {
            // p·x − f(x) is concave along the nodes; advance while it still increases
            while i + 1 < xs.len() && p * xs[i + 1] - fs[i + 1] >= p * xs[i] - fs[i] {
                i += 1;
            }
            while i > 0 && p * xs[i - 1] - fs[i - 1] > p * xs[i] - fs[i] {
                i -= 1;
            }
            p * xs[i] - fs[i]
        })
        .collect();
    GridFunction::new(*dual, values)
}

/// `q ↦ max_r (r·q − g(r))` for a radial profile on `[0, L]` and dual grid on `[0, R]`.
pub fn monotone_conjugate(profile: &GridFunction, dual: &Grid1D) -> Result<GridFunction> {
    if profile.grid.lo() < 0.0 || dual.lo() < 0.0 {
        return range("monotone conjugate needs profile and dual grids inside [0, ∞)");
    }
    legendre(profile, dual)
}

fn lp_accumulate(acc: &mut f64, v: f64, p: f64, h: f64) {
    if p.is_infinite() {
        *acc = acc.max(v.abs());
    } else {
        *acc += v.abs().powf(p) * h;
    }
}

fn lp_finish(acc: f64, p: f64) -> f64 {
    if p.is_infinite() {
        acc
    } else {
        acc.powf(1.0 / p)
    }
}

/// `sup_{|h| ≤ t} ‖f(·+h) + f(·−h) − 2f‖_{L^p}` over grid-representable shifts.
///
/// The norm uses a left-endpoint Riemann sum over nodes where all three values
/// are finite. Restricting `h` to multiples of the spacing biases the result
/// downward by at most `Lip(f)·spacing`.
pub fn second_difference_modulus(f: &GridFunction, t: f64, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return range(format!("norm exponent must be in [1, ∞], got {p}"));
    }
    if !(t > 0.0) {
        return range(format!("shift bound must be positive, got {t}"));
    }
    let g = &f.grid;
    let half = 0.5 * (g.hi() - g.lo());
    if t > half * (1.0 + 1e-12) {
        return range(format!(
            "shift bound {t} exceeds the domain half-length {half}"
        ));
    }
    let h = g.spacing();
    let kmax = ((t / h) + 1e-9).floor() as usize;
    let v = &f.values;
    let mut best: f64 = 0.0;
    for k in 1..=kmax.min((g.len() - 1) / 2) {
        let mut acc = 0.0;
        for i in k..g.len() - k {
            let (a, b, c) = (v[i - k], v[i], v[i + k]);
            if a.is_finite() && b.is_finite() && c.is_finite() {
                lp_accumulate(&mut acc, a + c - 2.0 * b, p, h);
            }
        }
        best = best.max(lp_finish(acc, p));
    }
    Ok(best)
}

/// Relative Cauchy-tail tolerance below which a dyadic Besov sum counts as converged.
pub const BESOV_TAIL_TOL: f64 = 1e-2;

/// Dyadic second-difference Besov sum with its convergence diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct BesovEstimate {
    /// `ℓ^q` norm of the resolved terms.
    pub value: f64,
    /// `(k, 2^{ks}·modulus(2^{-k}))` for each resolved level.
    pub terms: Vec<(u32, f64)>,
    /// Running partial sums of `term^q` (running max for `q = ∞`).
    pub partial_sums: Vec<f64>,
    /// Geometric extrapolation of the omitted tail of `Σ term^q`.
    pub tail: f64,
    pub diverges: bool,
}

/// Besov seminorm `(Σ_k (2^{ks}·ω₂(f, 2^{-k})_p)^q)^{1/q}` over `k = 0..=n_levels`.
///
/// Levels with `2^{-k}` below the grid spacing carry no information and are
/// skipped. Divergence is flagged when the last ratio of consecutive terms is
/// at least 1 or the extrapolated tail exceeds [`BESOV_TAIL_TOL`] of the sum.
pub fn besov_seminorm(
    f: &GridFunction,
    s: f64,
    p: f64,
    q: f64,
    n_levels: u32,
) -> Result<BesovEstimate> {
    if !(s > 0.0 && s < 2.0) {
        return range(format!("smoothness must lie in (0, 2), got {s}"));
    }
    if n_levels < 1 {
        return range("need at least one dyadic level");
    }
    if !(q >= 1.0) {
        return range(format!("summation exponent must be in [1, ∞], got {q}"));
    }
    let g = &f.grid;
    let half = 0.5 * (g.hi() - g.lo());
    let mut terms = Vec::new();
    for k in 0..=n_levels {
        let t = 0.5f64.powi(k as i32);
        if t > half * (1.0 + 1e-12) {
            continue;
        }
        if t < g.spacing() * (1.0 - 1e-9) {
            break;
        }
        let m = second_difference_modulus(f, t, p)?;
        terms.push((k, m * 2f64.powf(k as f64 * s)));
    }
    if terms.is_empty() {
        return range("no dyadic level is resolved by the grid");
    }
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for &(_, a) in &terms {
        if q.is_infinite() {
            acc = f64::max(acc, a);
        } else {
            acc += a.powf(q);
        }
        partial_sums.push(acc);
    }
    let last = terms[terms.len() - 1].1;
    let ratio = if terms.len() >= 2 {
        let prev = terms[terms.len() - 2].1;
        if prev > 0.0 {
            last / prev
        } else if last > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        0.0
    };
    let (tail, diverges) = if q.is_infinite() {
        (0.0, ratio > 1.0 + 1e-9)
    } else {
        let r = ratio.powf(q);
        if r >= 1.0 - 1e-9 {
            (f64::INFINITY, last > 0.0)
        } else {
            let tail = last.powf(q) * r / (1.0 - r);
            (tail, acc > 0.0 && tail > BESOV_TAIL_TOL * acc)
        }
    };
    Ok(BesovEstimate {
        value: lp_finish(acc, q),
        terms,
        partial_sums,
        tail,
        diverges,
    })
}

/// `‖f‖_∞ + t·ω₂(f, t^{-1/2})_∞`, a two-sided proxy for `K(t, f, C^{1,1}, C)`.
///
/// The lower equivalence constant is `1/5`; the upper one is universal but not
/// quantified, so callers should compare growth rates only.
pub fn k_c11_estimate(f: &GridFunction, t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return range(format!("K-functional argument must be ≥ 1, got {t}"));
    }
    let g = &f.grid;
    let half = 0.5 * (g.hi() - g.lo());
    let shift = t.powf(-0.5).min(half);
    Ok(f.sup_norm() + t * second_difference_modulus(f, shift, f64::INFINITY)?)
}

/// Whether a profile samples `K(2^n)` or `K(2^{-n})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KOrientation {
    LargeArgument,
    SmallArgument,
}

/// Dyadic table of K-functional upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KProfile {
    orientation: KOrientation,
    entries: Vec<(u32, f64)>,
}

impl KProfile {
    pub fn new(orientation: KOrientation, entries: Vec<(u32, f64)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Domain(
                "profile levels must be strictly increasing".into(),
            ));
        }
        if let Some((n, v)) = entries.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Domain(format!("level {n} has invalid bound {v}")));
        }
        Ok(Self {
            orientation,
            entries,
        })
    }

    pub fn orientation(&self) -> KOrientation {
        self.orientation
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn get(&self, level: u32) -> Option<f64> {
        self.entries.iter().find(|(n, _)| *n == level).map(|e| e.1)
    }

    /// The K-functional argument `2^{±n}` of a level.
    pub fn argument(&self, level: u32) -> f64 {
        match self.orientation {
            KOrientation::LargeArgument => 2f64.powi(level as i32),
            KOrientation::SmallArgument => 0.5f64.powi(level as i32),
        }
    }

    /// Whether the bounds are nondecreasing in the argument, up to a relative tolerance.
    pub fn is_monotone(&self, rel_tol: f64) -> bool {
        self.entries.windows(2).all(|w| {
            let (a, b) = (w[0].1, w[1].1);
            let slack = rel_tol * a.max(b);
            match self.orientation {
                KOrientation::LargeArgument => b >= a - slack,
                KOrientation::SmallArgument => b <= a + slack,
            }
        })
    }

    /// Largest `K(2s) / (2(K(s) + K(s)))` over adjacent levels; at most 1 for a quasi-subadditive profile.
    pub fn subadditivity_ratio(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.entries.windows(2) {
            if w[1].0 != w[0].0 + 1 {
                continue;
            }
            let (small, large) = match self.orientation {
                KOrientation::LargeArgument => (w[0].1, w[1].1),
                KOrientation::SmallArgument => (w[1].1, w[0].1),
            };
            if small > 0.0 {
                worst = worst.max(large / (4.0 * small));
            } else if large > 0.0 {
                worst = f64::INFINITY;
            }
        }
        worst
    }

    /// Least-squares slope of `log₂ K` against the level over `levels`, skipping zero entries.
    pub fn fitted_exponent(&self, levels: RangeInclusive<u32>) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .entries
            .iter()
            .filter(|(n, v)| levels.contains(n) && *v > 0.0)
            .map(|(n, v)| (*n as f64, v.log2()))
            .unzip();
        (xs.len() >= 2).then(|| crate::stats::linear_fit(&xs, &ys).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid1D::new(lo, hi, n).unwrap(), f).unwrap()
    }

    fn brute_hull(xs: &[f64], ys: &[f64]) -> Vec<f64> {
        // minimum over all chords through pairs bracketing each node
        (0..xs.len())
            .map(|k| {
                let mut best = ys[k];
                for i in 0..=k {
                    for j in k..xs.len() {
                        if i == j {
                            continue;
                        }
                        let w = (xs[k] - xs[i]) / (xs[j] - xs[i]);
                        best = best.min(ys[i] + w * (ys[j] - ys[i]));
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn grid_points_are_exact_at_ends() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid1D::new(1.0, 1.0, 3).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn rejects_holes_in_domain() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let inf = f64::INFINITY;
        assert!(GridFunction::new(g, vec![inf, 1.0, inf, 2.0]).is_err());
        assert!(GridFunction::new(g, vec![inf, 1.0, 2.0, inf]).is_ok());
        assert!(GridFunction::new(g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn envelope_of_convex_is_identity() {
        let f = gf(-2.0, 2.0, 81, |x| x * x + x.abs());
        assert_eq!(convex_envelope(&f).unwrap(), f);
    }

    #[test]
    fn envelope_of_double_well() {
        let f = gf(-2.0, 2.0, 81, |x| (x - 1.0).abs().min((x + 1.0).abs()));
        let env = convex_envelope(&f).unwrap();
        let xs = f.grid().points();
        let oracle = brute_hull(&xs, f.values());
        for (i, x) in xs.iter().enumerate() {
            let expect = (x.abs() - 1.0).max(0.0);
            assert!((env.values()[i] - expect).abs() < 1e-12);
            assert!((env.values()[i] - oracle[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_of_tooth_profile() {
        // radial φ(|r|) = 4(|r|−1) − 2√|r|: flat at its minimum −4.25 for |r| ≤ 1/16
        let f = gf(-1.0, 1.0, 2049, |r| {
            4.0 * (r.abs() - 1.0) - 2.0 * r.abs().sqrt()
        });
        let env = convex_envelope(&f).unwrap();
        for (i, r) in f.grid().points().into_iter().enumerate() {
            let e = env.values()[i];
            if r.abs() <= 1.0 / 16.0 {
                assert!((e + 4.25).abs() < 1e-12, "r={r} e={e}");
            } else {
                assert!((e - f.values()[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn envelope_keeps_infinite_outside() {
        let inf = f64::INFINITY;
        let g = Grid1D::new(0.0, 1.0, 6).unwrap();
        let f = GridFunction::new(g, vec![inf, 1.0, 3.0, 0.0, inf, inf]).unwrap();
        let env = convex_envelope(&f).unwrap();
        assert_eq!(env.values(), &[inf, 1.0, 0.5, 0.0, inf, inf]);
        let single = GridFunction::new(g, vec![inf, 1.0, inf, inf, inf, inf]).unwrap();
        assert!(matches!(
            convex_envelope(&single),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn legendre_examples() {
        let dual = Grid1D::new(-1.0, 1.0, 41).unwrap();
        let f = gf(-2.0, 2.0, 161, |x| 0.5 * x * x);
        let c = legendre(&f, &dual).unwrap();
        for (p, v) in dual.points().iter().zip(c.values()) {
            assert!((v - 0.5 * p * p).abs() < 1e-12);
        }
        let f = gf(-2.0, 2.0, 161, f64::abs);
        let c = legendre(&f, &dual).unwrap();
        assert!(c.values().iter().all(|v| v.abs() < 1e-12));
        // |x| ∨ 1 on [−3, 3]: conjugate |p| − 1 on the unit dual interval
        let f = gf(-3.0, 3.0, 241, |x| x.abs().max(1.0));
        let c = legendre(&f, &dual).unwrap();
        for (p, v) in dual.points().iter().zip(c.values()) {
            assert!((v - (p.abs() - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_empty_domain_is_degenerate() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        let f = GridFunction::new(g, vec![f64::INFINITY; 3]).unwrap();
        assert!(matches!(legendre(&f, &g), Err(Error::Degenerate(_))));
    }

    #[test]
    fn monotone_conjugate_examples() {
        let dual = Grid1D::new(0.0, 3.0, 31).unwrap();
        let zero = gf(0.0, 1.0, 11, |_| 0.0);
        let c = monotone_conjugate(&zero, &dual).unwrap();
        for (q, v) in dual.points().iter().zip(c.values()) {
            assert!((v - q).abs() < 1e-12);
        }
        let aff = gf(0.0, 1.0, 11, |r| r - 1.0);
        let c = monotone_conjugate(&aff, &dual).unwrap();
        for (q, v) in dual.points().iter().zip(c.values()) {
            assert!((v - q.max(1.0)).abs() < 1e-12);
        }
        let dual = Grid1D::new(0.0, 2.0, 21).unwrap();
        let quad = gf(0.0, 2.0, 201, |r| 0.5 * r * r);
        let c = monotone_conjugate(&quad, &dual).unwrap();
        for (q, v) in dual.points().iter().zip(c.values()) {
            assert!((v - 0.5 * q * q).abs() < 1e-12);
        }
        let neg = Grid1D::new(-1.0, 1.0, 3).unwrap();
        assert!(monotone_conjugate(&quad, &neg).is_err());
    }

    #[test]
    fn modulus_examples() {
        let aff = gf(-1.0, 1.0, 201, |x| 3.0 * x - 1.0);
        assert!(second_difference_modulus(&aff, 0.5, f64::INFINITY).unwrap() < 1e-12);
        let quad = gf(-2.0, 2.0, 401, |x| 0.5 * x * x);
        for t in [0.01, 0.25, 1.0] {
            let m = second_difference_modulus(&quad, t, f64::INFINITY).unwrap();
            assert!((m - t * t).abs() < 1e-10, "t={t} m={m}");
        }
        let abs = gf(-1.0, 1.0, 201, f64::abs);
        for t in [0.1, 0.5] {
            let m = second_difference_modulus(&abs, t, f64::INFINITY).unwrap();
            assert!((m - 2.0 * t).abs() < 1e-12);
        }
        assert!(matches!(
            second_difference_modulus(&abs, 1.5, 1.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn modulus_l1_of_abs() {
        // Δ²_h|x| is a tent of height 2h and half-width h, so its L¹ norm is 2h²
        let abs = gf(-1.0, 1.0, 2001, f64::abs);
        let m = second_difference_modulus(&abs, 0.25, 1.0).unwrap();
        assert!((m - 2.0 * 0.0625).abs() < 1e-9, "{m}");
    }

    #[test]
    fn besov_examples() {
        let aff = gf(-2.0, 2.0, 4097, |x| x + 2.0);
        let b = besov_seminorm(&aff, 1.0, f64::INFINITY, 1.0, 10).unwrap();
        assert!(b.value < 1e-9 && !b.diverges);

        let quad = gf(-2.0, 2.0, 4 * 1024 + 1, |x| 0.5 * x * x);
        let b = besov_seminorm(&quad, 1.0, f64::INFINITY, 1.0, 10).unwrap();
        let oracle: f64 = (0..=10).map(|k| 0.5f64.powi(k)).sum();
        assert!((b.value - oracle).abs() < 1e-9);
        assert!((oracle + b.tail - 2.0).abs() < 1e-9);
        assert!(!b.diverges);

        let abs = gf(-2.0, 2.0, 4 * 1024 + 1, f64::abs);
        let b = besov_seminorm(&abs, 1.0, f64::INFINITY, 1.0, 10).unwrap();
        assert!(b.terms.iter().all(|(_, a)| (a - 2.0).abs() < 1e-9));
        assert!(b.diverges);
        let b = besov_seminorm(&abs, 1.0, f64::INFINITY, f64::INFINITY, 10).unwrap();
        assert!(!b.diverges && (b.value - 2.0).abs() < 1e-9);

        assert!(besov_seminorm(&abs, 2.0, 1.0, 1.0, 4).is_err());
    }

    #[test]
    fn besov_skips_unresolved_levels() {
        let quad = gf(-2.0, 2.0, 17, |x| 0.5 * x * x);
        let b = besov_seminorm(&quad, 1.0, f64::INFINITY, 1.0, 10).unwrap();
        assert_eq!(b.terms.last().unwrap().0, 2);
    }

    #[test]
    fn k_c11_examples() {
        let aff = gf(-1.0, 1.0, 201, |x| 0.5 * x + 0.25);
        for t in [1.0, 4.0, 100.0] {
            assert!((k_c11_estimate(&aff, t).unwrap() - 0.75).abs() < 1e-12);
        }
        let quad = gf(-1.0, 1.0, 201, |x| 0.5 * x * x);
        assert!((k_c11_estimate(&quad, 4.0).unwrap() - 1.5).abs() < 1e-12);
        assert!(matches!(k_c11_estimate(&quad, 0.5), Err(Error::Range(_))));
        let abs = gf(-1.0, 1.0, 4097, |x| x.abs().sqrt());
        let vals: Vec<f64> = (0..12)
            .map(|n| k_c11_estimate(&abs, 2f64.powi(n)).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn kprofile_helpers() {
        let p = KProfile::new(
            KOrientation::LargeArgument,
            (0..8).map(|n| (n, 2f64.powf(0.5 * n as f64))).collect(),
        )
        .unwrap();
        assert!(p.is_monotone(0.0));
        assert!((p.fitted_exponent(0..=7).unwrap() - 0.5).abs() < 1e-12);
        assert!(p.subadditivity_ratio() <= 1.0);
        assert_eq!(p.argument(3), 8.0);
        assert!(KProfile::new(KOrientation::SmallArgument, vec![(0, -1.0)]).is_err());
        assert!(KProfile::new(KOrientation::SmallArgument, vec![(1, 1.0), (1, 0.5)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid1D::new(-1.0, 2.0, 7).unwrap();
        let inf = f64::INFINITY;
        let f = GridFunction::new(g, vec![inf, 0.1, 1.0 / 3.0, -2.5, 1e-17, inf, inf]).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value\n-1,inf\n"));
        let back = GridFunction::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    fn random_fn() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(0.0f64..3.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn envelope_matches_brute_force((ys, _) in random_fn()) {
            let g = Grid1D::new(-1.0, 1.0, ys.len()).unwrap();
            let f = GridFunction::new(g, ys.clone()).unwrap();
            let env = convex_envelope(&f).unwrap();
            let oracle = brute_hull(&g.points(), &ys);
            for (a, b) in env.values().iter().zip(&oracle) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            prop_assert!(env.is_convex(1e-9));
            let again = convex_envelope(&env).unwrap();
            for (a, b) in again.values().iter().zip(env.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn envelope_is_monotone((ys, bump) in random_fn()) {
            let g = Grid1D::new(0.0, 2.0, ys.len()).unwrap();
            let f = GridFunction::new(g, ys.clone()).unwrap();
            let h = GridFunction::new(g, ys.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
            let ef = convex_envelope(&f).unwrap();
            let eh = convex_envelope(&h).unwrap();
            for (a, b) in ef.values().iter().zip(eh.values()) {
                prop_assert!(a <= &(b + 1e-12));
            }
        }

        #[test]
        fn convex_merge_agrees_with_exhaustive((ys, _) in random_fn(), lo in -4.0f64..0.0, w in 0.5f64..8.0) {
            let g = Grid1D::new(-1.0, 1.0, ys.len()).unwrap();
            let env = convex_envelope(&GridFunction::new(g, ys).unwrap()).unwrap();
            let dual = Grid1D::new(lo, lo + w, 57).unwrap();
            let a = legendre(&env, &dual).unwrap();
            let b = legendre_convex(&env, &dual, 1e-9).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }

        #[test]
        fn legendre_is_order_reversing_and_nonexpansive((ys, bump) in random_fn()) {
            let g = Grid1D::new(-1.0, 1.0, ys.len()).unwrap();
            let f = GridFunction::new(g, ys.clone()).unwrap();
            let h = GridFunction::new(g, ys.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
            let dual = Grid1D::new(-3.0, 3.0, 61).unwrap();
            let cf = legendre(&f, &dual).unwrap();
            let ch = legendre(&h, &dual).unwrap();
            let gap = bump.iter().fold(0.0f64, |m, b| m.max(*b));
            for (a, b) in cf.values().iter().zip(ch.values()) {
                prop_assert!(a >= b);
                prop_assert!(a - b <= gap + 1e-12);
            }
        }
    }
}
