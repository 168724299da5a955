//! Difference-of-convex calculus in one dimension and K-functional diagnostics
//! for Hamiltonians between `DC(B_L)` and `C(B_L)`.
//!
//! DC norms are infima over decompositions and are never computed exactly;
//! every norm reported here is the sup-norm sum of an explicit decomposition,
//! hence an upper bound.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{range, Error, Result};
use crate::grid_convex::{
    fmt_ext, grid_from_points, min_second_difference, parse_ext, Grid1D, GridFunction,
    KOrientation, KProfile,
};
use crate::par::Exec;

/// Relative tolerance of the discrete convexity certificate for DC parts.
pub const CONVEXITY_TOL: f64 = 1e-12;

fn scale(v: &[f64]) -> f64 {
    v.iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// `f = part_plus − part_minus` with both parts convex on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DCFunction1D {
    plus: GridFunction,
    minus: GridFunction,
    norm_upper: f64,
}

impl DCFunction1D {
    /// Validates grids and convexity; the norm bound is the sup-norm sum of the parts.
    pub fn new(plus: GridFunction, minus: GridFunction) -> Result<Self> {
        if plus.grid() != minus.grid() {
            return Err(Error::Interface("DC parts live on different grids".into()));
        }
        for (name, part) in [("plus", &plus), ("minus", &minus)] {
            if part.finite_count() != part.grid().len() {
                return Err(Error::Domain(format!(
                    "{name} part must be finite at every node"
                )));
            }
            let tol = CONVEXITY_TOL * scale(part.values());
            if min_second_difference(part.values()) < -tol {
                return Err(Error::Contract(format!("{name} part is not convex")));
            }
        }
        let norm_upper = plus.sup_norm() + minus.sup_norm();
        Ok(Self {
            plus,
            minus,
            norm_upper,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        self.plus.grid()
    }

    pub fn part_plus(&self) -> &GridFunction {
        &self.plus
    }

    pub fn part_minus(&self) -> &GridFunction {
        &self.minus
    }

    pub fn norm_upper(&self) -> f64 {
        self.norm_upper
    }

    /// The represented function `part_plus − part_minus` at the nodes.
    pub fn values(&self) -> Vec<f64> {
        self.plus
            .values()
            .iter()
            .zip(self.minus.values())
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "part_plus", "part_minus"])?;
        for (i, x) in self.grid().points().iter().enumerate() {
            out.write_record([
                x.to_string(),
                fmt_ext(self.plus.values()[i]),
                fmt_ext(self.minus.values()[i]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["x", "part_plus", "part_minus"] {
            return Err(Error::Parse(format!(
                "expected header x,part_plus,part_minus, got {header:?}"
            )));
        }
        let (mut xs, mut ps, mut ms) = (Vec::new(), Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            xs.push(parse_ext(&rec[0])?);
            ps.push(parse_ext(&rec[1])?);
            ms.push(parse_ext(&rec[2])?);
        }
        let grid = grid_from_points(&xs)?;
        Self::new(GridFunction::new(grid, ps)?, GridFunction::new(grid, ms)?)
    }
}

/// Best common affine shift `ℓ = s·x + c` for the pair `(a + ℓ, b + ℓ)`.
///
/// For a fixed slope the optimal intercept is explicit: with half-ranges `hr`
/// and midpoints `mid`, the cost is `hr_a + hr_b + |mid_a − mid_b|`. That cost
/// is convex in the slope, which is then found by golden-section search.
#[derive(Debug, Clone, Copy)]
struct AffineShift {
    slope: f64,
    intercept: f64,
    cost: f64,
}

fn range_of(v: &[f64], xs: &[f64], s: f64) -> (f64, f64) {
    v.iter()
        .zip(xs)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (y, x)| {
            let z = y + s * x;
            (lo.min(z), hi.max(z))
        })
}

fn shift_for_slope(a: &[f64], b: &[f64], xs: &[f64], s: f64) -> AffineShift {
    let (alo, ahi) = range_of(a, xs, s);
    let (blo, bhi) = range_of(b, xs, s);
    let (ma, mb) = (0.5 * (alo + ahi), 0.5 * (blo + bhi));
    // any intercept in [−max(ma,mb), −min(ma,mb)] is optimal; take the one closest to 0
    let intercept = 0.0f64.clamp(-ma.max(mb), -ma.min(mb));
    let cost = 0.5 * (ahi - alo) + 0.5 * (bhi - blo) + (ma - mb).abs();
    AffineShift {
        slope: s,
        intercept,
        cost,
    }
}

fn best_affine_shift(a: &[f64], b: &[f64], xs: &[f64]) -> AffineShift {
    let h = xs[1] - xs[0];
    let max_slope = |v: &[f64]| {
        v.windows(2)
            .fold(0.0f64, |m, w| m.max((w[1] - w[0]).abs() / h))
    };
    let bound = max_slope(a) + max_slope(b);
    let zero = shift_for_slope(a, b, xs, 0.0);
    if bound == 0.0 {
        return zero;
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (-bound, bound);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = shift_for_slope(a, b, xs, x1).cost;
    let mut f2 = shift_for_slope(a, b, xs, x2).cost;
    for _ in 0..64 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = shift_for_slope(a, b, xs, x1).cost;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = shift_for_slope(a, b, xs, x2).cost;
        }
    }
    let found = shift_for_slope(a, b, xs, 0.5 * (lo + hi));
    // prefer the unshifted slope on ties so exact decompositions stay untouched
    if zero.cost <= found.cost * (1.0 + 1e-12) {
        zero
    } else {
        found
    }
}

fn apply_shift(v: &[f64], xs: &[f64], t: AffineShift) -> Vec<f64> {
    v.iter()
        .zip(xs)
        .map(|(y, x)| y + t.slope * x + t.intercept)
        .collect()
}

fn cumulate(d: impl Iterator<Item = f64>, n: usize) -> Vec<f64> {
    // values with v[0] = v[1] = 0 and prescribed second differences at interior nodes
    let mut v = vec![0.0; n];
    for (i, di) in d.enumerate() {
        let k = i + 1;
        v[k + 1] = 2.0 * v[k] - v[k - 1] + di;
    }
    v
}

/// Splits `f` along the signs of its second differences into convex parts.
///
/// The negative masses are summed twice into the minus part; the plus part is
/// then `f + minus`, so `plus − minus` reproduces `f` up to one rounding per
/// node. A common affine function is added to both parts to shrink the sum of
/// their sup norms.
pub fn dc_split(f: &GridFunction) -> Result<DCFunction1D> {
    let v = f.values();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(
            "dc_split needs finite values at every node".into(),
        ));
    }
    let n = v.len();
    let xs = f.grid().points();
    let second = |i: usize| v[i + 1] - 2.0 * v[i] + v[i - 1];
    // second differences within rounding noise of zero are not negative mass
    let noise = 8.0 * f64::EPSILON * scale(v);
    let minus = if n >= 3 {
        cumulate(
            (1..n - 1).map(|i| {
                let d = -second(i);
                if d > noise {
                    d
                } else {
                    0.0
                }
            }),
            n,
        )
    } else {
        vec![0.0; n]
    };
    let plus: Vec<f64> = v.iter().zip(&minus).map(|(a, b)| a + b).collect();
    let shift = best_affine_shift(&plus, &minus, &xs);
    let minus = apply_shift(&minus, &xs, shift);
    let plus: Vec<f64> = v.iter().zip(&minus).map(|(a, b)| a + b).collect();
    DCFunction1D::new(
        GridFunction::new(*f.grid(), plus)?,
        GridFunction::new(*f.grid(), minus)?,
    )
}

/// Sup-norm sum of the parts, optionally after the best common affine shift.
pub fn dc_norm_upper(f: &DCFunction1D, optimize_affine: bool) -> f64 {
    if !optimize_affine {
        return f.norm_upper;
    }
    let xs = f.grid().points();
    let shift = best_affine_shift(f.plus.values(), f.minus.values(), &xs);
    let a = apply_shift(f.plus.values(), &xs, shift);
    let b = apply_shift(f.minus.values(), &xs, shift);
    f.norm_upper.min(sup(&a) + sup(&b))
}

fn same_grid(f: &DCFunction1D, g: &DCFunction1D) -> Result<()> {
    if f.grid() != g.grid() {
        return Err(Error::Interface(
            "DC functions live on different grids".into(),
        ));
    }
    Ok(())
}

fn combine(
    f: &DCFunction1D,
    g: &DCFunction1D,
    op: impl Fn(f64, f64, f64, f64) -> (f64, f64),
) -> Result<DCFunction1D> {
    same_grid(f, g)?;
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for i in 0..f.grid().len() {
        let (p, m) = op(
            f.plus.values()[i],
            f.minus.values()[i],
            g.plus.values()[i],
            g.minus.values()[i],
        );
        plus.push(p);
        minus.push(m);
    }
    DCFunction1D::new(
        GridFunction::new(*f.grid(), plus)?,
        GridFunction::new(*f.grid(), minus)?,
    )
}

/// `max{f, g} = max{f₁ + g₂, f₂ + g₁} − (f₂ + g₂)`; the norm bound at most doubles.
pub fn dc_max(f: &DCFunction1D, g: &DCFunction1D) -> Result<DCFunction1D> {
    combine(f, g, |f1, f2, g1, g2| ((f1 + g2).max(f2 + g1), f2 + g2))
}

/// `min{f, g} = (f₁ + g₁) − max{f₁ + g₂, f₂ + g₁}`.
pub fn dc_min(f: &DCFunction1D, g: &DCFunction1D) -> Result<DCFunction1D> {
    combine(f, g, |f1, f2, g1, g2| (f1 + g1, (f1 + g2).max(f2 + g1)))
}

/// `|p|^β` sampled on a grid.
pub fn power_values(grid: &Grid1D, beta: f64) -> Vec<f64> {
    grid.points().iter().map(|p| p.abs().powf(beta)).collect()
}

/// `H_{β,δ}(p) = |p|^β ∨ δ^β` sampled on a grid.
pub fn truncated_power_values(grid: &Grid1D, beta: f64, delta: f64) -> Vec<f64> {
    let floor = delta.powf(beta);
    grid.points()
        .iter()
        .map(|p| p.abs().powf(beta).max(floor))
        .collect()
}

/// DC representation of `H_{β,δ}` on `[−L, L]` with `n` nodes, and its sup distance `δ^β` to `|p|^β`.
///
/// The plus part is `βδ^{β−1}(|p| − δ)_+`, whose slope matches the one-sided
/// derivative of `|p|^β` at `δ`, so `plus − H_{β,δ}` is convex.
pub fn power_dc_truncation(beta: f64, delta: f64, l: f64, n: usize) -> Result<(DCFunction1D, f64)> {
    if !(beta > 0.0 && beta < 1.0) {
        return range(format!("exponent must lie in (0, 1), got {beta}"));
    }
    if !(delta > 0.0) {
        return range(format!("truncation level must be positive, got {delta}"));
    }
    if delta > l {
        return range(format!("truncation level {delta} exceeds the radius {l}"));
    }
    let grid = Grid1D::new(-l, l, n)?;
    let floor = delta.powf(beta);
    let (plus, minus): (Vec<f64>, Vec<f64>) = if delta == l {
        (vec![floor; n], vec![0.0; n])
    } else {
        let k = beta * delta.powf(beta - 1.0);
        grid.points()
            .iter()
            .map(|p| {
                let a = k * (p.abs() - delta).max(0.0);
                (a, a - p.abs().powf(beta).max(floor))
            })
            .unzip()
    };
    let dc = DCFunction1D::new(
        GridFunction::new(grid, plus)?,
        GridFunction::new(grid, minus)?,
    )?;
    Ok((dc, floor))
}

/// Candidate families used to bound `K(2ⁿ, f, DC, C)` from above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationFamily {
    /// `f` itself, `0`, and `f` smoothed at every resolved scale `2^{−k/2}·width`.
    Mollified,
    /// The mollified family plus `H_{β,δ}` at `δ = 2^{−j}L`.
    MollifiedAndPower { beta: f64 },
}

/// Smooth grid values with a cubic B-spline kernel (four box passes of `2r+1` nodes).
///
/// Values beyond the ends are extended linearly, which keeps affine data fixed.
pub fn mollify_values(v: &[f64], r: usize) -> Vec<f64> {
    let n = v.len();
    if r == 0 || n < 2 {
        return v.to_vec();
    }
    let pad = 4 * r;
    let (sl, sr) = (v[1] - v[0], v[n - 1] - v[n - 2]);
    let mut cur: Vec<f64> = (0..n + 2 * pad)
        .map(|j| {
            if j < pad {
                v[0] - sl * (pad - j) as f64
            } else if j >= n + pad {
                v[n - 1] + sr * (j + 1 - n - pad) as f64
            } else {
                v[j - pad]
            }
        })
        .collect();
    let w = (2 * r + 1) as f64;
    for _ in 0..4 {
        let mut prefix = vec![0.0; cur.len() + 1];
        for (i, x) in cur.iter().enumerate() {
            prefix[i + 1] = prefix[i] + x;
        }
        let mut next = cur.clone();
        for (i, o) in next.iter_mut().enumerate().take(cur.len() - r).skip(r) {
            *o = (prefix[i + r + 1] - prefix[i - r]) / w;
        }
        cur = next;
    }
    cur[pad..pad + n].to_vec()
}

/// `(norm bound, sup error)` of one candidate approximation `g ≈ f`.
fn candidate_cost(f: &GridFunction, g: &GridFunction) -> Result<(f64, f64)> {
    let err = f
        .values()
        .iter()
        .zip(g.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok((dc_norm_upper(&dc_split(g)?, true), err))
}

/// Upper bounds for `K(2ⁿ, f, DC(B_L), C(B_L))`, `n = 0..=n_max`.
///
/// Each candidate `g` contributes `‖g‖_DC + 2ⁿ‖f − g‖_∞`; the profile is the
/// pointwise minimum, so enlarging the candidate set never raises an entry.
pub fn k_dc_profile(
    f: &GridFunction,
    l: f64,
    n_max: u32,
    family: TruncationFamily,
) -> Result<KProfile> {
    if n_max < 1 {
        return range("profile needs n_max ≥ 1");
    }
    let costs = k_dc_candidates(f, l, family, Exec::default())?;
    KProfile::new(
        KOrientation::LargeArgument,
        profile_from_costs(&costs, n_max),
    )
}

pub(crate) fn profile_from_costs(costs: &[(f64, f64)], n_max: u32) -> Vec<(u32, f64)> {
    (0..=n_max)
        .map(|n| {
            let t = 2f64.powi(n as i32);
            (
                n,
                costs
                    .iter()
                    .fold(f64::INFINITY, |m, (d, e)| m.min(d + t * e)),
            )
        })
        .collect()
}

/// `(norm, error)` pairs for every candidate of the family, computed with `exec`.
pub fn k_dc_candidates(
    f: &GridFunction,
    l: f64,

    family: TruncationFamily,
    exec: Exec,
) -> Result<Vec<(f64, f64)>> {
    if f.finite_count() != f.grid().len() {
        return Err(Error::Domain(
            "K-profile needs finite values at every node".into(),
        ));
    }
    let grid = *f.grid();
    let width = grid.hi() - grid.lo();
    let h = grid.spacing();
    enum Cand {
        Itself,
        Zero,
        Smooth(usize),
        Power(f64, f64),
    }
    let mut cands = vec![Cand::Itself, Cand::Zero];
    // smoothing scales 2^{-k/2}·width down to the grid resolution, whatever n_max is
    let mut last_r = 0;
    for k in 0.. {
        let delta = 0.5f64.powf(0.5 * k as f64) * width;
        let r = (delta / (8.0 * h)).round() as usize;
        if r == 0 {
            break;
        }
        if r != last_r && 8 * r < grid.len() {
            cands.push(Cand::Smooth(r));
            last_r = r;
        }
    }
    if let TruncationFamily::MollifiedAndPower { beta } = family {
        if !(beta > 0.0 && beta < 1.0) {
            return range(format!("exponent must lie in (0, 1), got {beta}"));
        }
        let mut delta = l;
        while delta >= h {
            cands.push(Cand::Power(beta, delta));
            delta *= 0.5;
        }
    }
    exec.try_map(cands.len(), |i| match cands[i] {
        Cand::Itself => Ok((dc_norm_upper(&dc_split(f)?, true), 0.0)),
        Cand::Zero => Ok((0.0, f.sup_norm())),
        Cand::Smooth(r) => {
            let g = GridFunction::new(grid, mollify_values(f.values(), r))?;
            candidate_cost(f, &g)
        }
        Cand::Power(beta, delta) => {
            let g = GridFunction::new(grid, truncated_power_values(&grid, beta, delta))?;
            candidate_cost(f, &g)
        }
    })
}

/// Tail level below which a membership sum counts as converged.
pub const MEMBERSHIP_TAIL_TOL: f64 = 1e-3;

/// Partial sums of `Σ 2^{−nα} K̂(2ⁿ)` with convergence diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipSums {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Geometric extrapolation of the remaining tail from the last two terms.
    pub tail_estimate: f64,
    pub converged: bool,
    /// Least-squares slope of `log₂ term_n` over the last ten levels, reported when terms grow.
    pub divergence_exponent: Option<f64>,
}

/// Evidence for `f ∈ ℋ_{α,1}` from the K-profile upper bounds.
///
/// A converging sum certifies membership; a growing one is evidence only,
/// since the profile is an upper bound.
pub fn h_membership_partial_sums(
    f: &GridFunction,
    alpha: f64,
    l: f64,
    n: u32,
) -> Result<MembershipSums> {
    h_membership_partial_sums_with(f, alpha, l, n, TruncationFamily::Mollified)
}

/// [`h_membership_partial_sums`] with an explicit candidate family.
pub fn h_membership_partial_sums_with(
    f: &GridFunction,
    alpha: f64,
    l: f64,
    n: u32,
    family: TruncationFamily,
) -> Result<MembershipSums> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return range(format!(
            "interpolation exponent must lie in (0, 1), got {alpha}"
        ));
    }
    if n < 2 {
        return range("need at least three levels");
    }
    let profile = k_dc_profile(f, l, n, family)?;
    Ok(membership_from_profile(&profile, alpha))
}

pub(crate) fn membership_from_profile(profile: &KProfile, alpha: f64) -> MembershipSums {
    let terms: Vec<f64> = profile
        .entries()
        .iter()
        .map(|(k, v)| 2f64.powf(-alpha * *k as f64) * v)
        .collect();
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = terms
        .iter()
        .map(|t| {
            acc += t;
            acc
        })
        .collect();
    let m = terms.len();
    let (last, prev) = (terms[m - 1], terms[m - 2]);
    let ratio = if prev > 0.0 { last / prev } else { 0.0 };
    let tail_estimate = if ratio >= 1.0 {
        f64::INFINITY
    } else {
        last * ratio / (1.0 - ratio)
    };
    let converged = tail_estimate < MEMBERSHIP_TAIL_TOL;
    let divergence_exponent = if ratio >= 1.0 || !converged {
        let lo = m.saturating_sub(10);
        let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..m)
            .filter(|&k| terms[k] > 0.0)
            .map(|k| (profile.entries()[k].0 as f64, terms[k].log2()))
            .unzip();
        (xs.len() >= 2).then(|| crate::stats::linear_fit(&xs, &ys).0)
    } else {
        None
    };
    MembershipSums {
        terms,
        partial_sums,
        tail_estimate,
        converged,
        divergence_exponent,
    }
}

/// Hamiltonian sampled on a grid, either as a radial profile `H(|p|)` on
/// `[0, L]` or as a general 1-D function on `[−L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian1D {
    profile: GridFunction,
    radial: bool,
    convex_flag: bool,
    lipschitz_bound: f64,
    min_value: f64,
}

impl Hamiltonian1D {
    /// Radial profile on `[0, L]`.
    pub fn radial(profile: GridFunction) -> Result<Self> {
        if profile.grid().lo() != 0.0 {
            return Err(Error::Domain("radial profile must start at r = 0".into()));
        }
        Self::build(profile, true)
    }

    /// General 1-D Hamiltonian on its grid.
    pub fn general(profile: GridFunction) -> Result<Self> {
        Self::build(profile, false)
    }

    pub fn radial_from_fn(l: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::radial(GridFunction::from_fn(Grid1D::new(0.0, l, n)?, f)?)
    }

    pub fn general_from_fn(l: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::general(GridFunction::from_fn(Grid1D::new(-l, l, n)?, f)?)
    }

    fn build(profile: GridFunction, radial: bool) -> Result<Self> {
        if profile.finite_count() != profile.grid().len() {
            return Err(Error::Domain(
                "Hamiltonian must be finite on its grid".into(),
            ));
        }
        let v = profile.values();
        let tol = CONVEXITY_TOL * scale(v);
        let mut convex_flag = min_second_difference(v) >= -tol;
        if radial && v.len() >= 2 {
            // the even extension stays convex only if the profile starts nondecreasing
            convex_flag &= v[1] - v[0] >= -tol;
        }
        let lipschitz_bound = profile.max_slope();
        let min_value = v.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self {
            profile,
            radial,
            convex_flag,
            lipschitz_bound,
            min_value,
        })
    }

    pub fn profile(&self) -> &GridFunction {
        &self.profile
    }

    pub fn is_radial(&self) -> bool {
        self.radial
    }

    pub fn convex_flag(&self) -> bool {
        self.convex_flag
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// Slope radius `L` of the sampled domain.
    pub fn radius(&self) -> f64 {
        self.profile.grid().hi()
    }

    /// Piecewise-linear evaluation, extended by the boundary slopes outside the grid.
    pub fn eval(&self, p: f64) -> f64 {
        let x = if self.radial { p.abs() } else { p };
        let g = self.profile.grid();
        let v = self.profile.values();
        let n = v.len();
        let h = g.spacing();
        if x <= g.lo() {
            v[0] + (x - g.lo()) * (v[1] - v[0]) / h
        } else if x >= g.hi() {
            v[n - 1] + (x - g.hi()) * (v[n - 1] - v[n - 2]) / h
        } else {
            self.profile.eval(x)
        }
    }

    /// Same profile shifted by a constant.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let v = self.profile.values().iter().map(|x| x + c).collect();
        Self::build(GridFunction::new(*self.profile.grid(), v)?, self.radial)
    }

    /// Same profile multiplied by a constant.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let v = self.profile.values().iter().map(|x| x * c).collect();
        Self::build(GridFunction::new(*self.profile.grid(), v)?, self.radial)
    }
}
