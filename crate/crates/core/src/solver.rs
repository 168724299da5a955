//! Solution engines for `du = H(Du)·dW`.
//!
//! * Conjugate engine: for radial convex data the Legendre transform evolves
//!   by `u*(·, t) ← conv(u*(·, s) − (W(t) − W(s))·H)` on each monotone piece of
//!   the path, which is exact for any continuous `H` and either sign of the
//!   increment.
//! * Finite differences: monotone Lax–Friedrichs in one space dimension.
//! * Closed forms for the sawtooth-driven problem.

use serde::Serialize;

use crate::dc_toolkit::{DCFunction1D, Hamiltonian1D};
use crate::error::{contract, range, Error, Result};
use crate::grid_convex::{lower_hull_equispaced, monotone_conjugate, Grid1D, GridFunction};
use crate::paths::{merged_times, PiecewiseLinearPath};

/// Relative tolerance of the convexity checks on inputs.
const INPUT_TOL: f64 = 1e-10;

/// Radial conjugate `r ↦ u*(r, t)` on a dual grid `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateState {
    values: GridFunction,
    time: f64,
}

impl ConjugateState {
    /// Wraps conjugate values on `[0, L]`; they must be convex along the even extension.
    pub fn new(values: GridFunction, time: f64) -> Result<Self> {
        if values.grid().lo() != 0.0 {
            return Err(Error::Domain("dual grid must start at 0".into()));
        }
        let dom = values
            .domain()
            .ok_or_else(|| Error::Degenerate("conjugate state with empty domain".into()))?;
        if *dom.start() != 0 {
            return Err(Error::Domain("conjugate must be finite at r = 0".into()));
        }
        Ok(Self { values, time })
    }

    pub fn dual_grid(&self) -> &Grid1D {
        self.values.grid()
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Gradient bound `L`, the right end of the dual grid.
    pub fn slope_bound(&self) -> f64 {
        self.dual_grid().hi()
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// `u(x) = max_r (r|x| − u*(r))` at each requested point.
    pub fn eval_primal(&self, xs: &[f64]) -> Vec<f64> {
        eval_primal(self, xs)
    }

    /// Primal values on a spatial grid.
    pub fn primal_on(&self, grid: &Grid1D) -> Result<GridFunction> {
        GridFunction::new(*grid, eval_primal(self, &grid.points()))
    }
}

fn scale(v: &[f64]) -> f64 {
    v.iter()
        .filter(|x| x.is_finite())
        .fold(1.0f64, |m, x| m.max(x.abs()))
}

/// Checks that a radial profile on `[0, R]` gives a convex function of `|x|`.
fn check_radial_convex(profile: &GridFunction) -> Result<()> {
    if profile.grid().lo() != 0.0 {
        return Err(Error::Domain("radial profile must start at r = 0".into()));
    }
    if profile.finite_count() != profile.grid().len() {
        return Err(Error::Domain("radial profile must be finite".into()));
    }
    let v = profile.values();
    let tol = INPUT_TOL * scale(v);
    if !profile.is_convex(tol) || v[1] - v[0] < -tol {
        return contract("initial profile is not convex as a radial function");
    }
    Ok(())
}

/// `u₀*` on the dual grid `[0, L]` for a radial convex profile on `[0, R]`.
///
/// The profile grid must extend far enough that every slope in `[0, L]` is
/// attained on it (e.g. `R ≥ 2` for `x²/2` with `L = 2`); otherwise the
/// result is the conjugate of the truncated profile.
pub fn conjugate_init(u0_profile: &GridFunction, l: f64, dual: &Grid1D) -> Result<ConjugateState> {
    check_radial_convex(u0_profile)?;
    if dual.lo() != 0.0 || (dual.hi() - l).abs() > 1e-12 * l.max(1.0) {
        return range(format!("dual grid must be [0, {l}]"));
    }
    let lip = u0_profile.max_slope();
    if lip > l * (1.0 + 1e-9) + 1e-12 {
        return contract(format!("initial slope bound {lip} exceeds L = {l}"));
    }
    ConjugateState::new(monotone_conjugate(u0_profile, dual)?, 0.0)
}

/// Radial convex envelope: even reflection, 1-D lower hull, restriction to `[0, L]`.
fn radial_envelope(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let end = v.iter().rposition(|x| x.is_finite()).unwrap_or(0);
    let mut mirrored: Vec<f64> = v[1..=end].iter().rev().cloned().collect();
    mirrored.extend_from_slice(&v[..=end]);
    let hull = lower_hull_equispaced(&mirrored);
    let mut out = vec![f64::INFINITY; n];
    out[..=end].copy_from_slice(&hull[end..]);
    out
}

/// `H` at the dual nodes; errors unless `H` is radial.
fn dual_samples(grid: &Grid1D, h: &Hamiltonian1D) -> Result<Vec<f64>> {
    if !h.is_radial() {
        return Err(Error::Interface(
            "the conjugate engine needs a radial Hamiltonian".into(),
        ));
    }
    Ok(grid.points().iter().map(|r| h.eval(*r)).collect())
}

fn step_values(v: &[f64], hv: &[f64], dw: f64) -> Result<Vec<f64>> {
    let shifted: Vec<f64> = v
        .iter()
        .zip(hv)
        .map(|(v, h)| if v.is_finite() { v - dw * h } else { *v })
        .collect();
    if shifted.iter().any(|x| x.is_nan()) {
        return Err(Error::Numerical("non-finite conjugate update".into()));
    }
    Ok(radial_envelope(&shifted))
}

/// `conv(u* − ΔW·H)` on the dual grid.
pub fn hopf_step(state: &ConjugateState, h: &Hamiltonian1D, dw: f64) -> Result<ConjugateState> {
    let grid = *state.dual_grid();
    let hv = dual_samples(&grid, h)?;
    if dw == 0.0 {
        return Ok(state.clone());
    }
    let v = step_values(state.values.values(), &hv, dw)?;
    ConjugateState::new(GridFunction::new(grid, v)?, state.time)
}

/// Solution along `W` sampled at `sample_times`, one state per requested time.
///
/// Consecutive knot increments of the same sign are applied as one step, since
/// the update is exact on every monotone piece of the path.
pub fn hopf_solve(
    u0: &ConjugateState,
    h: &Hamiltonian1D,
    w: &PiecewiseLinearPath,
    sample_times: &[f64],
) -> Result<Vec<ConjugateState>> {
    let mut out: Vec<Option<ConjugateState>> = vec![None; sample_times.len()];
    hopf_visit(u0, h, w, sample_times, |k, state| {
        out[k] = Some(state.clone());
        Ok(())
    })?;
    Ok(out
        .into_iter()
        .map(|s| s.expect("every sample time is visited"))
        .collect())
}

/// Streaming form of [`hopf_solve`]: calls `visit(index, state)` for each
/// sample time in increasing time order instead of storing the states.
pub fn hopf_visit(
    u0: &ConjugateState,
    h: &Hamiltonian1D,
    w: &PiecewiseLinearPath,
    sample_times: &[f64],
    mut visit: impl FnMut(usize, &ConjugateState) -> Result<()>,
) -> Result<()> {
    let t_end = w.horizon();
    if let Some(t) = sample_times.iter().find(|t| !(**t >= 0.0 && **t <= t_end)) {
        return range(format!("sample time {t} outside [0, {t_end}]"));
    }
    let grid = *u0.dual_grid();
    let hv = dual_samples(&grid, h)?;
    let t_max = sample_times.iter().cloned().fold(0.0, f64::max);
    let mut times = merged_times(&[w], t_end);
    times.retain(|t| *t <= t_max);
    times.extend_from_slice(sample_times);
    times.push(0.0);
    times.sort_by(|a, b| a.total_cmp(b));
    times.dedup();
    let mut order: Vec<usize> = (0..sample_times.len()).collect();
    order.sort_by(|a, b| sample_times[*a].total_cmp(&sample_times[*b]));

    let mut v = u0.values.values().to_vec();
    let mut pending = 0.0;
    let mut next = 0;
    for (k, t) in times.iter().enumerate() {
        if k > 0 {
            let dw = w.eval(*t) - w.eval(times[k - 1]);
            if dw * pending < 0.0 {
                v = step_values(&v, &hv, pending)?;
                pending = 0.0;
            }
            pending += dw;
        }
        if next < order.len() && sample_times[order[next]] == *t {
            if pending != 0.0 {
                v = step_values(&v, &hv, pending)?;
                pending = 0.0;
            }
            let state = ConjugateState::new(GridFunction::new(grid, v.clone())?, *t)?;
            while next < order.len() && sample_times[order[next]] == *t {
                visit(order[next], &state)?;
                next += 1;
            }
        }
    }
    Ok(())
}

/// `u(x) = max_r (r|x| − u*(r))` over finite dual nodes.
pub fn eval_primal(state: &ConjugateState, xs: &[f64]) -> Vec<f64> {
    let grid = state.dual_grid();
    let v = state.values.values();
    let end = v.iter().rposition(|x| x.is_finite()).unwrap_or(0);
    let rs: Vec<f64> = (0..=end).map(|i| grid.point(i)).collect();
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|a, b| xs[*a].abs().total_cmp(&xs[*b].abs()));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    // the maximizing node moves right as |x| grows because u* is convex
    for k in order {
        let q = xs[k].abs();
        while i < end && q * rs[i + 1] - v[i + 1] >= q * rs[i] - v[i] {
            i += 1;
        }
        out[k] = q * rs[i] - v[i];
    }
    out
}

fn check_normalized(h: &Hamiltonian1D) -> Result<()> {
    if h.min_value().abs() > 1e-12 * scale(h.profile().values()) {
        return contract(format!(
            "Hamiltonian must have minimum 0, found {}",
            h.min_value()
        ));
    }
    Ok(())
}

/// `S_H(τ)φ` for `H` with `min H = 0`, in conjugate form.
///
/// The conjugate update is exact for convex `φ` whatever the shape of `H`,
/// so only the normalization is enforced.
pub fn s_convex(phi: &ConjugateState, h: &Hamiltonian1D, tau: f64) -> Result<ConjugateState> {
    check_normalized(h)?;
    if !(tau >= 0.0) {
        return range(format!("time argument must be ≥ 0, got {tau}"));
    }
    hopf_step(phi, h, tau)
}

/// Composition order of the operator products in [`envelope_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProductOrder {
    /// `j = 1` applied first.
    ListOrder,
    /// `j = M` applied first.
    Reversed,
}

/// Lower and upper envelopes at time `t` built from running extrema of each path.
///
/// The upper envelope applies `S_{H_j}(W_j^*(t))` with `W_j^*(t) = max_{s≤t} W_j`.
/// The lower envelope moves each conjugate by `+W_{j,*}(t)·H_j` with
/// `W_{j,*}(t) = −min_{s≤t} W_j`, i.e. it runs the flow backwards for that
/// long; this is the sign under which it bounds the solution from below.
pub fn envelope_bounds(
    u0: &ConjugateState,
    pairs: &[(Hamiltonian1D, PiecewiseLinearPath)],
    t: f64,
    x_grid: &Grid1D,
    order: ProductOrder,
) -> Result<(GridFunction, GridFunction)> {
    for (h, _) in pairs {
        check_normalized(h)?;
    }
    let idx: Vec<usize> = match order {
        ProductOrder::ListOrder => (0..pairs.len()).collect(),
        ProductOrder::Reversed => (0..pairs.len()).rev().collect(),
    };
    let mut lower = u0.clone();
    let mut upper = u0.clone();
    for j in idx {
        let (h, w) = &pairs[j];
        let top = w.running_max(t);
        let bottom = -w.running_min(t);
        upper = s_convex(&upper, h, top)?;
        lower = hopf_step(&lower, h, -bottom)?;
    }
    Ok((lower.primal_on(x_grid)?, upper.primal_on(x_grid)?))
}

/// Snapshots of the finite-difference solution.
#[derive(Debug, Clone)]
pub struct FDResult {
    pub x_grid: Grid1D,
    /// `(time, u(·, time))` in the order requested.
    pub snapshots: Vec<(f64, GridFunction)>,
    /// Largest `θ = |σ|·Lip(H)·Δt/Δx` used.
    pub cfl_used: f64,
    pub steps: usize,
}

/// Monotone Lax–Friedrichs scheme along the path `W`.
///
/// On each linear piece of `W` with slope `σ` the step is
/// `u_j += Δt·σ·H((u_{j+1} − u_{j−1})/(2Δx)) + (θ/2)(u_{j+1} − 2u_j + u_{j−1})`
/// with `θ = |σ|·Lip(H)·Δt/Δx ≤ cfl`; `Δt` is chosen per piece so that the
/// steps land on knots and sample times. Ghost values extend `u` linearly
/// with the initial boundary slopes.
pub fn fd_solve(
    u0: &GridFunction,
    h: &Hamiltonian1D,
    w: &PiecewiseLinearPath,
    cfl: f64,
    sample_times: &[f64],
) -> Result<FDResult> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return range(format!("CFL factor must lie in (0, 1], got {cfl}"));
    }
    let grid = *u0.grid();
    let n = grid.len();
    if n < 3 {
        return Err(Error::Degenerate(
            "need at least three spatial nodes".into(),
        ));
    }
    if u0.finite_count() != n {
        return Err(Error::Domain("initial data must be finite".into()));
    }
    let t_end = w.horizon();
    if let Some(t) = sample_times.iter().find(|t| !(**t >= 0.0 && **t <= t_end)) {
        return range(format!("sample time {t} outside [0, {t_end}]"));
    }
    let dx = grid.spacing();
    let lip = h.lipschitz_bound();
    let mut u = u0.values().to_vec();
    let sl = (u[1] - u[0]) / dx;
    let sr = (u[n - 1] - u[n - 2]) / dx;
    let t_max = sample_times.iter().cloned().fold(0.0, f64::max);
    let mut times = merged_times(&[w], t_end);
    times.extend_from_slice(sample_times);
    times.retain(|t| *t <= t_max);
    times.push(0.0);
    times.sort_by(|a, b| a.total_cmp(b));
    times.dedup();

    let mut snaps: Vec<Option<GridFunction>> = vec![None; sample_times.len()];
    let record = |t: f64, u: &[f64], snaps: &mut Vec<Option<GridFunction>>| -> Result<()> {
        for (k, s) in sample_times.iter().enumerate() {
            if *s == t {
                snaps[k] = Some(GridFunction::new(grid, u.to_vec())?);
            }
        }
        Ok(())
    };
    record(0.0, &u, &mut snaps)?;
    let mut steps = 0;
    let mut cfl_used: f64 = 0.0;
    let mut next = vec![0.0; n];
    let mut ext = vec![0.0; n + 2];
    for k in 1..times.len() {
        let (a, b) = (times[k - 1], times[k]);
        let sigma = (w.eval(b) - w.eval(a)) / (b - a);
        if sigma != 0.0 && lip > 0.0 {
            let dt_max = cfl * dx / (sigma.abs() * lip);
            let m = ((b - a) / dt_max).ceil().max(1.0) as usize;
            let dt = (b - a) / m as f64;
            let theta = sigma.abs() * lip * dt / dx;
            cfl_used = cfl_used.max(theta);
            for _ in 0..m {
                ext[0] = u[0] - sl * dx;
                ext[1..=n].copy_from_slice(&u);
                ext[n + 1] = u[n - 1] + sr * dx;
                for j in 0..n {
                    let (um, uc, up) = (ext[j], ext[j + 1], ext[j + 2]);
                    let p = (up - um) / (2.0 * dx);
                    next[j] = uc + dt * sigma * h.eval(p) + 0.5 * theta * (up - 2.0 * uc + um);
                }
                std::mem::swap(&mut u, &mut next);
                steps += 1;
            }
            if u.iter().any(|x| !x.is_finite()) {
                return Err(Error::Numerical(format!("non-finite values at t = {b}")));
            }
        } else if sigma != 0.0 {
            // Lipschitz bound 0 means H is constant
            let c = h.eval(0.0) * sigma * (b - a);
            u.iter_mut().for_each(|x| *x += c);
        }
        record(b, &u, &mut snaps)?;
    }
    Ok(FDResult {
        x_grid: grid,
        snapshots: sample_times
            .iter()
            .cloned()
            .zip(
                snaps
                    .into_iter()
                    .map(|s| s.expect("every sample time is visited")),
            )
            .collect(),
        cfl_used,
        steps,
    })
}

/// Measured path-stability of one Hamiltonian against the two theoretical bounds.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// `sup |u₁ − u₂|` over the spatial grid and the probe times.
    pub sup_difference: f64,
    /// `‖W₁ − W₂‖_∞`.
    pub path_gap: f64,
    /// `norm_upper(H)·‖W₁ − W₂‖_∞`.
    pub dc_bound: f64,
    /// `sup_{|p|≤L} |H(p)|·TV(W₂ − W₁)`.
    pub easy_bound: f64,
    /// `sup_difference / dc_bound` (`None` when the bound is 0).
    pub dc_ratio: Option<f64>,
    pub easy_ratio: Option<f64>,
    /// Whether the conjugate engine was used.
    pub exact_engine: bool,
}

/// Number of equispaced probe times in [`stability_report`].
pub const STABILITY_PROBES: usize = 64;

/// Dual-grid size used by [`stability_report`] for convex symmetric data.
pub const STABILITY_DUAL_NODES: usize = 4097;

fn radial_profile_of(u0: &GridFunction) -> Option<GridFunction> {
    let g = u0.grid();
    let n = g.len();
    if g.lo() != -g.hi() || n % 2 == 0 {
        return None;
    }
    let v = u0.values();
    let tol = 1e-12 * scale(v);
    if (0..n).any(|i| (v[i] - v[n - 1 - i]).abs() > tol) {
        return None;
    }
    let half = Grid1D::new(0.0, g.hi(), n / 2 + 1).ok()?;
    let prof = GridFunction::new(half, v[n / 2..].to_vec()).ok()?;
    check_radial_convex(&prof).ok()?;
    Some(prof)
}

/// Solves with `W₁` and `W₂` and compares the gap with the DC-norm and total-variation bounds.
///
/// Symmetric convex data goes through the conjugate engine; anything else
/// through [`fd_solve`] with CFL 0.9.
pub fn stability_report(
    h: &DCFunction1D,
    w1: &PiecewiseLinearPath,
    w2: &PiecewiseLinearPath,
    u0: &GridFunction,
    l: f64,
) -> Result<StabilityReport> {
    let lip = u0.max_slope();
    if lip > l * (1.0 + 1e-9) {
        return contract(format!("initial slope bound {lip} exceeds L = {l}"));
    }
    let t_end = w1.horizon().min(w2.horizon());
    let probes: Vec<f64> = (0..=STABILITY_PROBES)
        .map(|k| t_end * k as f64 / STABILITY_PROBES as f64)
        .collect();
    let hv = h.values();
    let hg = *h.grid();
    let (sup_difference, exact_engine) = match radial_profile_of(u0) {
        Some(profile) if hg.lo() == -hg.hi() && hg.len() % 2 == 1 => {
            let m = hg.len();
            let radial = Hamiltonian1D::radial(GridFunction::new(
                Grid1D::new(0.0, hg.hi(), m / 2 + 1)?,
                hv[m / 2..].to_vec(),
            )?)?;
            let dual = Grid1D::new(0.0, l, STABILITY_DUAL_NODES)?;
            let init = conjugate_init(&profile, l, &dual)?;
            let s1 = hopf_solve(&init, &radial, w1, &probes)?;
            let s2 = hopf_solve(&init, &radial, w2, &probes)?;
            let xs = u0.grid().points();
            let gap = s1.iter().zip(&s2).fold(0.0f64, |m, (a, b)| {
                a.eval_primal(&xs)
                    .iter()
                    .zip(b.eval_primal(&xs))
                    .fold(m, |m, (p, q)| m.max((p - q).abs()))
            });
            (gap, true)
        }
        _ => {
            let hh = Hamiltonian1D::general(GridFunction::new(hg, hv.clone())?)?;
            let r1 = fd_solve(u0, &hh, w1, 0.9, &probes)?;
            let r2 = fd_solve(u0, &hh, w2, 0.9, &probes)?;
            let gap = r1
                .snapshots
                .iter()
                .zip(&r2.snapshots)
                .fold(0.0f64, |m, (a, b)| {
                    a.1.values()
                        .iter()
                        .zip(b.1.values())
                        .fold(m, |m, (p, q)| m.max((p - q).abs()))
                });
            (gap, false)
        }
    };
    let diff = w2.difference(w1)?;
    let path_gap = diff.sup_norm();
    let h_sup = hg
        .points()
        .iter()
        .zip(&hv)
        .filter(|(p, _)| p.abs() <= l * (1.0 + 1e-12))
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let dc_bound = h.norm_upper() * path_gap;
    let easy_bound = h_sup * diff.total_variation();
    let ratio = |b: f64| (b > 0.0).then(|| sup_difference / b);
    Ok(StabilityReport {
        sup_difference,
        path_gap,
        dc_bound,
        easy_bound,
        dc_ratio: ratio(dc_bound),
        easy_ratio: ratio(easy_bound),
        exact_engine,
    })
}

/// Iterates of `a_{k+1} = a_k + ((1−β)/β)·a_k^{−β/(1−β)}` with bound diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ToothRecursion {
    pub beta: f64,
    /// `a_1, …, a_{k_max}`.
    pub a: Vec<f64>,
    /// `β^{−(1−β)}·k^{1−β} ≤ a_k` for each `k`.
    pub lower_bound_holds: Vec<bool>,
    /// `(b_k − b_1 − β⁻¹(k−1))/ln k` with `b_k = a_k^{1/(1−β)}`, for `k ≥ 2` (index `k − 2`).
    pub upper_statistic: Vec<f64>,
}

pub fn tooth_recursion(a1: f64, beta: f64, k_max: usize) -> Result<ToothRecursion> {
    if !(beta > 0.0 && beta < 1.0) {
        return range(format!("exponent must lie in (0, 1), got {beta}"));
    }
    let floor = beta.powf(-(1.0 - beta));
    if a1 < floor * (1.0 - 1e-12) {
        return contract(format!("a₁ = {a1} is below β^(−(1−β)) = {floor}"));
    }
    let c = (1.0 - beta) / beta;
    let e = -beta / (1.0 - beta);
    let q = 1.0 / (1.0 - beta);
    let mut a = Vec::with_capacity(k_max);
    let mut lower = Vec::with_capacity(k_max);
    let mut stat = Vec::with_capacity(k_max.saturating_sub(1));
    let b1 = a1.powf(q);
    let mut ak = a1;
    for k in 1..=k_max {
        if k > 1 {
            ak += c * ak.powf(e);
        }
        a.push(ak);
        lower.push(floor * (k as f64).powf(1.0 - beta) <= ak);
        if k > 1 {
            let kf = k as f64;
            stat.push((ak.powf(q) - b1 - (kf - 1.0) / beta) / kf.ln());
        }
    }
    Ok(ToothRecursion {
        beta,
        a,
        lower_bound_holds: lower,
        upper_statistic: stat,
    })
}

/// Exact solution of `u_t = β⁻¹|Du|^β·Ẇ` with `W(t) = 1 − |t − 1|` and `u(x, 0) = |x| ∨ a`, for `t ∈ [0, 2]`.
///
/// Both phases reduce to maximizing a concave function of the dual radius:
/// while `W` rises, `r|x| − a(r−1) + (t/β)r^β` over `[0, 1]`; while it falls,
/// the same with `(2−t)/β` over `[r₁, 1]`, against the plateau value
/// `−φ(r₁)` left by the first phase, where `r₁ = min(1, a^{−1/(1−β)})`.
pub fn closedform_tooth_solution(beta: f64, a: f64, x: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) || !(a >= 0.0) {
        return range("closed form needs β in (0, 1) and a ≥ 0");
    }
    if !(0.0..=2.0).contains(&t) {
        return range(format!("closed form covers t in [0, 2], got {t}"));
    }
    let ax = x.abs();
    let q = 1.0 / (1.0 - beta);
    // max over r in [lo, 1] of r·(|x| − a) + a + k·r^β
    let concave_max = |k: f64, lo: f64| -> f64 {
        let g = |r: f64| r * (ax - a) + a + k * r.powf(beta);
        let r = if ax >= a {
            1.0
        } else if k <= 0.0 {
            lo
        } else {
            (k * beta / (a - ax)).powf(q).clamp(lo, 1.0)
        };
        g(r)
    };
    if t <= 1.0 {
        return Ok(concave_max(t / beta, 0.0));
    }
    let r1 = a.powf(-q).min(1.0);
    let c1 = a * (r1 - 1.0) - r1.powf(beta) / beta;
    Ok(concave_max((2.0 - t) / beta, r1).max(-c1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_convex::legendre;
    use crate::paths::teeth;
    use proptest::prelude::*;

    fn profile(r_max: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid1D::new(0.0, r_max, n).unwrap(), f).unwrap()
    }

    fn power_h(beta: f64, l: f64, n: usize) -> Hamiltonian1D {
        Hamiltonian1D::radial_from_fn(l, n, |r| r.powf(beta) / beta).unwrap()
    }

    fn init(u0: impl Fn(f64) -> f64, r_max: f64, l: f64, n: usize) -> ConjugateState {
        let dual = Grid1D::new(0.0, l, n).unwrap();
        conjugate_init(&profile(r_max, 4 * (n - 1) + 1, u0), l, &dual).unwrap()
    }

    #[test]
    fn init_examples() {
        let s = init(|r| r.max(1.0), 4.0, 1.0, 101);
        for (r, v) in s.dual_grid().points().iter().zip(s.values().values()) {
            assert!((v - (r - 1.0)).abs() < 1e-12);
        }
        let s = init(|r| r, 4.0, 1.0, 101);
        assert!(s.values().values().iter().all(|v| v.abs() < 1e-12));
        let s = init(|r| 0.5 * r * r, 2.0, 2.0, 101);
        for (r, v) in s.dual_grid().points().iter().zip(s.values().values()) {
            assert!((v - 0.5 * r * r).abs() < 1e-3);
        }
        let bad = profile(2.0, 41, |r| (r - 1.0).abs());
        let dual = Grid1D::new(0.0, 1.0, 11).unwrap();
        assert!(matches!(
            conjugate_init(&bad, 1.0, &dual),
            Err(Error::Contract(_))
        ));
        let steep = profile(2.0, 41, |r| 3.0 * r);
        assert!(matches!(
            conjugate_init(&steep, 1.0, &dual),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn primal_examples() {
        let dual = Grid1D::new(0.0, 1.0, 101).unwrap();
        let zero = ConjugateState::new(GridFunction::from_fn(dual, |_| 0.0).unwrap(), 0.0).unwrap();
        let xs = [-2.0, -0.3, 0.0, 0.7, 3.0];
        for (x, u) in xs.iter().zip(zero.eval_primal(&xs)) {
            assert_eq!(u, x.abs());
        }
        let s =
            ConjugateState::new(GridFunction::from_fn(dual, |r| r - 1.0).unwrap(), 0.0).unwrap();
        for (x, u) in xs.iter().zip(s.eval_primal(&xs)) {
            assert!((u - x.abs().max(1.0)).abs() < 1e-12);
        }
        let dual = Grid1D::new(0.0, 2.0, 2001).unwrap();
        let s = ConjugateState::new(GridFunction::from_fn(dual, |r| 0.5 * r * r).unwrap(), 0.0)
            .unwrap();
        for x in [-2.0, -1.0, 0.25, 1.5] {
            let u = s.eval_primal(&[x])[0];
            assert!((u - 0.5 * x * x).abs() < 1e-6);
        }
    }

    #[test]
    fn primal_matches_exhaustive_conjugate() {
        let s = init(|r| r.max(1.0), 4.0, 1.0, 257);
        let s = hopf_step(&s, &power_h(0.5, 1.0, 257), 0.7).unwrap();
        let xs: Vec<f64> = (0..=80).map(|i| -4.0 + 0.1 * i as f64).collect();
        let fast = s.eval_primal(&xs);
        let g = Grid1D::new(-4.0, 4.0, 81).unwrap();
        // full-line dual by even reflection, transformed exhaustively
        let n = s.dual_grid().len();
        let mut mirrored: Vec<f64> = s.values().values()[1..].iter().rev().cloned().collect();
        mirrored.extend_from_slice(s.values().values());
        let full = GridFunction::new(Grid1D::new(-1.0, 1.0, 2 * n - 1).unwrap(), mirrored).unwrap();
        let slow = legendre(&full, &g).unwrap();
        for (a, b) in fast.iter().zip(slow.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hopf_step_examples() {
        let s = init(|r| r.max(1.0), 4.0, 1.0, 513);
        let h = power_h(0.5, 1.0, 513);
        assert_eq!(hopf_step(&s, &h, 0.0).unwrap(), s);

        let eik = Hamiltonian1D::radial_from_fn(1.0, 513, |r| r).unwrap();
        let s0 = init(|r| r, 4.0, 1.0, 513);
        let s1 = hopf_step(&s0, &eik, -1.0).unwrap();
        for x in [-3.0, -1.0, -0.5, 0.0, 0.2, 2.5] {
            let u = s1.eval_primal(&[x])[0];
            assert!((u - (x.abs() - 1.0).max(0.0)).abs() < 1e-12, "x={x} u={u}");
        }

        let up = hopf_step(&s, &h, 1.0).unwrap();
        let down = hopf_step(&up, &h, -1.0).unwrap();
        for x in [-3.0, -1.0, 0.0, 1.5, 2.0, 3.0] {
            let u = down.eval_primal(&[x])[0];
            assert!((u - x.abs().max(2.0)).abs() < 1e-3, "x={x} u={u}");
        }
    }

    #[test]
    fn hopf_solve_teeth_formulas() {
        let beta = 0.5;
        let s0 = init(|r| r, 4.0, 1.0, 2049);
        let h = power_h(beta, 1.0, 2049);
        let w = teeth(2.0).unwrap();
        let times = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0];
        let states = hopf_solve(&s0, &h, &w, &times).unwrap();
        let xs: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
        for (t, st) in times.iter().zip(&states) {
            assert_eq!(st.time(), *t);
            for (x, u) in xs.iter().zip(st.eval_primal(&xs)) {
                let exact = closedform_tooth_solution(beta, 0.0, *x, *t).unwrap();
                assert!((u - exact).abs() < 1e-3, "t={t} x={x} u={u} exact={exact}");
            }
        }
        let zero = PiecewiseLinearPath::zero(3.0).unwrap();
        let states = hopf_solve(&s0, &h, &zero, &[3.0, 1.0]).unwrap();
        assert_eq!(states[0].values(), s0.values());
        assert!(matches!(
            hopf_solve(&s0, &h, &w, &[2.5]),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn closed_form_branches() {
        let beta = 0.5;
        for x in [-3.0, -0.5, 0.0, 0.4, 2.0] {
            for t in [0.0, 0.3, 1.0] {
                let u = closedform_tooth_solution(beta, 0.0, x, t).unwrap();
                assert!((u - (x.abs() + t / beta)).abs() < 1e-12);
            }
            let u = closedform_tooth_solution(beta, 0.0, x, 1.5).unwrap();
            assert!((u - (x.abs().max(1.0) + 1.0)).abs() < 1e-12);
            let u = closedform_tooth_solution(beta, 0.0, x, 2.0).unwrap();
            assert!((u - x.abs().max(2.0)).abs() < 1e-12);
        }
        for a in [2.0f64, 3.5, 10.0] {
            let top = a + (1.0 - beta) / beta * a.powf(-beta / (1.0 - beta));
            for x in [0.0, 1.0, a, 20.0] {
                let u = closedform_tooth_solution(beta, a, x, 2.0).unwrap();
                assert!((u - x.abs().max(top)).abs() < 1e-12);
            }
        }
        assert!(closedform_tooth_solution(beta, 1.0, 0.0, 2.5).is_err());
    }

    #[test]
    fn closed_form_matches_engine_for_general_a() {
        let w = teeth(2.0).unwrap();
        let times: Vec<f64> = (0..=16).map(|k| k as f64 / 8.0).collect();
        for (beta, a) in [(0.5, 1.0), (0.5, 3.0), (0.25, 2.0), (0.75, 0.5)] {
            let s0 = init(|r| r.max(a), 2.0 * a + 4.0, 1.0, 4097);
            let h = power_h(beta, 1.0, 4097);
            let states = hopf_solve(&s0, &h, &w, &times).unwrap();
            let xs: Vec<f64> = (0..=30)
                .map(|i| -(a + 3.0) + i as f64 * (2.0 * a + 6.0) / 30.0)
                .collect();
            for (t, st) in times.iter().zip(&states) {
                for (x, u) in xs.iter().zip(st.eval_primal(&xs)) {
                    let exact = closedform_tooth_solution(beta, a, *x, *t).unwrap();
                    assert!(
                        (u - exact).abs() < 2e-3,
                        "β={beta} a={a} t={t} x={x} u={u} exact={exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn s_convex_examples() {
        let s0 = init(|r| r, 4.0, 1.0, 257);
        let lin = Hamiltonian1D::radial_from_fn(1.0, 257, |r| r).unwrap();
        assert_eq!(s_convex(&s0, &lin, 0.0).unwrap(), s0);
        let s1 = s_convex(&s0, &lin, 1.0).unwrap();
        for x in [-2.0, 0.0, 0.5] {
            assert!((s1.eval_primal(&[x])[0] - (x.abs() + 1.0)).abs() < 1e-12);
        }
        // oracle: max of −(r−1) + 2√r over [0, 1] is 2 at r = 1
        let s0 = init(|r| r.max(1.0), 4.0, 1.0, 4097);
        let sq = power_h(0.5, 1.0, 4097);
        let u = s_convex(&s0, &sq, 1.0).unwrap().eval_primal(&[0.0])[0];
        let oracle = (0..=100_000)
            .map(|i| i as f64 / 100_000.0)
            .map(|r| 1.0 - r + 2.0 * r.sqrt())
            .fold(f64::MIN, f64::max);
        assert!((u - oracle).abs() < 1e-9);
        let shifted = lin.shifted(1.0).unwrap();
        assert!(matches!(
            s_convex(&s0, &shifted, 1.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn envelope_examples() {
        let g = Grid1D::new(-3.0, 3.0, 61).unwrap();
        let s0 = init(|r| r.max(1.0), 4.0, 1.0, 2049);
        let mid = g.nearest(0.0);
        let sq = power_h(0.5, 1.0, 2049);
        let tooth = teeth(2.0).unwrap();
        let (lo, hi) = envelope_bounds(
            &s0,
            &[(sq.clone(), tooth.clone())],
            2.0,
            &g,
            ProductOrder::ListOrder,
        )
        .unwrap();
        let exact = hopf_solve(&s0, &sq, &tooth, &[2.0]).unwrap()[0]
            .primal_on(&g)
            .unwrap();
        assert!((lo.values()[mid] - 1.0).abs() < 1e-12);
        assert!((hi.values()[mid] - 2.0).abs() < 1e-9);
        for ((l, u), e) in lo.values().iter().zip(hi.values()).zip(exact.values()) {
            assert!(*l <= e + 1e-9 && *e <= u + 1e-9);
        }
        let quad = Hamiltonian1D::radial_from_fn(1.0, 2049, |r| r * r).unwrap();
        let zero = PiecewiseLinearPath::zero(2.0).unwrap();
        let (lo, hi) = envelope_bounds(
            &s0,
            &[(quad.clone(), zero)],
            1.0,
            &g,
            ProductOrder::ListOrder,
        )
        .unwrap();
        let u0 = s0.primal_on(&g).unwrap();
        assert_eq!(lo, u0);
        assert_eq!(hi, u0);

        // one tooth with H = 2r: running max 1 and running min 0 at t = 2
        let lin = Hamiltonian1D::radial_from_fn(1.0, 2049, |r| 2.0 * r).unwrap();
        let w = teeth(2.0).unwrap();
        let (lo, hi) = envelope_bounds(
            &s0,
            &[(lin.clone(), w.clone())],
            2.0,
            &g,
            ProductOrder::ListOrder,
        )
        .unwrap();
        assert!((lo.values()[mid] - 1.0).abs() < 1e-12);
        assert!((hi.values()[mid] - 2.0).abs() < 1e-12);
        let flat = Hamiltonian1D::radial_from_fn(1.0, 2049, |_| 0.0).unwrap();
        let (lo2, hi2) = envelope_bounds(
            &s0,
            &[(lin, w.clone()), (flat, w)],
            2.0,
            &g,
            ProductOrder::Reversed,
        )
        .unwrap();
        assert_eq!(lo2, lo);
        assert_eq!(hi2, hi);
    }

    #[test]
    fn fd_examples() {
        let g = Grid1D::new(-3.0, 3.0, 601).unwrap();
        let h = Hamiltonian1D::general_from_fn(2.0, 401, f64::abs).unwrap();
        let w = PiecewiseLinearPath::linear(1.0, 1.0).unwrap();
        let u0 = GridFunction::from_fn(g, f64::abs).unwrap();
        let r = fd_solve(&u0, &h, &w, 0.9, &[0.0, 1.0]).unwrap();
        assert_eq!(r.snapshots[0].1, u0);
        assert!(r.cfl_used <= 0.9 + 1e-12);
        let err = g
            .points()
            .iter()
            .zip(r.snapshots[1].1.values())
            .fold(0.0f64, |m, (x, u)| m.max((u - (x.abs() + 1.0)).abs()));
        assert!(err < 5.0 * g.spacing(), "err={err}");

        let u0 = GridFunction::from_fn(g, |x| -x.abs()).unwrap();
        let r = fd_solve(&u0, &h, &w, 0.9, &[1.0]).unwrap();
        let err = g
            .points()
            .iter()
            .zip(r.snapshots[0].1.values())
            .fold(0.0f64, |m, (x, u)| {
                m.max((u + (x.abs() - 1.0).max(0.0)).abs())
            });
        assert!(err < 3.0 * g.spacing().sqrt(), "err={err}");
        assert!(matches!(
            fd_solve(&u0, &h, &w, 1.5, &[1.0]),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn fd_matches_conjugate_engine_on_tooth() {
        let beta = 0.5;
        let w = teeth(2.0).unwrap();
        let h = Hamiltonian1D::general_from_fn(1.5, 97, |p| p.abs().powf(beta) / beta).unwrap();
        let mut errs = Vec::new();
        for n in [401usize, 801, 1601] {
            let g = Grid1D::new(-4.0, 4.0, n).unwrap();
            let u0 = GridFunction::from_fn(g, f64::abs).unwrap();
            let r = fd_solve(&u0, &h, &w, 0.9, &[1.0]).unwrap();
            let e = g
                .points()
                .iter()
                .zip(r.snapshots[0].1.values())
                .fold(0.0f64, |m, (x, u)| {
                    if x.abs() <= 2.0 {
                        m.max((u - (x.abs() + 2.0)).abs())
                    } else {
                        m
                    }
                });
            errs.push(e);
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 0.8, "order {order} from {errs:?}");
    }

    #[test]
    fn recursion_examples() {
        let r = tooth_recursion(2.0, 0.5, 4).unwrap();
        assert!((r.a[1] - 2.5).abs() < 1e-15);
        assert!((r.a[2] - 2.9).abs() < 1e-15);
        let a4 = 2.9 + 1.0 / 2.9;
        assert!((r.a[3] - a4).abs() < 1e-15 && (a4 - 3.2448).abs() < 1e-4);
        let r = tooth_recursion(2f64.sqrt(), 0.5, 2).unwrap();
        assert!((r.a[1] - (2f64.sqrt() + 1.0 / 2f64.sqrt())).abs() < 1e-15);
        assert!(r.a[1] >= 2.0);
        assert!(matches!(
            tooth_recursion(1.0, 0.5, 3),
            Err(Error::Contract(_))
        ));
        let r = tooth_recursion(2.0, 0.5, 100_000).unwrap();
        assert!(r.lower_bound_holds.iter().all(|b| *b));
    }

    #[test]
    fn stability_examples() {
        let (h, _) = crate::dc_toolkit::power_dc_truncation(0.5, 0.25, 1.0, 401).unwrap();
        let g = Grid1D::new(-3.0, 3.0, 121).unwrap();
        let u0 = GridFunction::from_fn(g, |x| x.abs().max(1.0)).unwrap();
        let w = teeth(2.0).unwrap().scaled(0.25).unwrap();
        let rep = stability_report(&h, &w, &w, &u0, 1.0).unwrap();
        assert_eq!(rep.sup_difference, 0.0);
        assert!(rep.exact_engine);
        let zero = PiecewiseLinearPath::zero(2.0).unwrap();
        let a = stability_report(&h, &w, &zero, &u0, 1.0).unwrap();
        let w2 = teeth(2.0).unwrap().scaled(0.5).unwrap();
        let b = stability_report(&h, &w2, &zero, &u0, 1.0).unwrap();
        assert!((b.dc_bound - 2.0 * a.dc_bound).abs() < 1e-12);
        assert!(a.sup_difference > 0.0 && a.sup_difference <= a.easy_bound + 1e-9);
        // asymmetric data goes through the finite-difference engine
        let u1 = GridFunction::from_fn(g, |x| (x - 0.5).abs().max(1.0)).unwrap();
        let c = stability_report(&h, &w, &zero, &u1, 1.0).unwrap();
        assert!(!c.exact_engine && c.sup_difference > 0.0);
    }

    fn random_state() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, 65)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugate_engine_contracts(a in random_state(), b in random_state(), dw in -1.5f64..1.5, c in -2.0f64..2.0) {
            let dual = Grid1D::new(0.0, 1.0, 65).unwrap();
            let mk = |v: &Vec<f64>| {
                let env = radial_envelope(v);
                ConjugateState::new(GridFunction::new(dual, env).unwrap(), 0.0).unwrap()
            };
            let (sa, sb) = (mk(&a), mk(&b));
            let h = power_h(0.5, 1.0, 65);
            let xs: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
            let ua0 = sa.eval_primal(&xs);
            let ub0 = sb.eval_primal(&xs);
            let ua = hopf_step(&sa, &h, dw).unwrap().eval_primal(&xs);
            let ub = hopf_step(&sb, &h, dw).unwrap().eval_primal(&xs);
            let gap0 = ua0.iter().zip(&ub0).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            let gap = ua.iter().zip(&ub).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            // the primal sup over x ∈ ℝ bounds the probe gap, and equals the dual sup gap
            let dual_gap = sa.values().values().iter().zip(sb.values().values())
                .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            prop_assert!(gap0 <= dual_gap + 1e-12);
            prop_assert!(gap <= dual_gap + 1e-12);
            // adding a constant to u shifts u* by −c
            let shifted = ConjugateState::new(
                GridFunction::new(dual, sa.values().values().iter().map(|v| v - c).collect()).unwrap(), 0.0).unwrap();
            let us = hopf_step(&shifted, &h, dw).unwrap().eval_primal(&xs);
            for (p, q) in us.iter().zip(&ua) {
                prop_assert!((p - (q + c)).abs() < 1e-10);
            }
        }
    }
}
