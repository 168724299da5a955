//! Sawtooth-driven experiments, engine cross-validation and path stability.

use rand::Rng;

use super::{
    config_error, param, param_list, run_exec, run_seed, Assertion, Relation, RunArtifact,
    Scenario, Table,
};
use crate::dc_toolkit::{power_dc_truncation, Hamiltonian1D};
use crate::error::Result;
use crate::expcli::Config;
use crate::grid_convex::{Grid1D, GridFunction};
use crate::paths::{brownian, merged_times, scale_path, teeth, PiecewiseLinearPath};
use crate::solver::{
    closedform_tooth_solution, conjugate_init, envelope_bounds, fd_solve, hopf_solve, hopf_visit,
    stability_report, ConjugateState, ProductOrder,
};
use crate::stats::linear_fit;

/// Nodes per unit length of the radial profiles fed to [`conjugate_init`].
const PROFILE_DENSITY: f64 = 1024.0;

/// Conjugate of `|x| ∨ a` on `[0, 1]`.
pub(crate) fn cone_state(a: f64, dual_nodes: usize) -> Result<ConjugateState> {
    let r_max = a.ceil() + 1.0;
    let profile = GridFunction::from_fn(
        Grid1D::new(0.0, r_max, (r_max * PROFILE_DENSITY) as usize + 1)?,
        |r| r.max(a),
    )?;
    conjugate_init(&profile, 1.0, &Grid1D::new(0.0, 1.0, dual_nodes)?)
}

/// `r ↦ c·r^β` sampled on the unit dual grid.
pub(crate) fn power_radial(beta: f64, coef: f64, nodes: usize) -> Result<Hamiltonian1D> {
    Hamiltonian1D::radial_from_fn(1.0, nodes, |r| coef * r.powf(beta))
}

/// `t ↦ amp·2^{−nα}·teeth(2ⁿt)` on `[0, T]`.
pub(crate) fn scaled_teeth(
    n: u32,
    alpha: f64,
    amp: f64,
    horizon: f64,
) -> Result<PiecewiseLinearPath> {
    let span = 2f64.powi(n as i32) * horizon;
    scale_path(&teeth(2.0 * (span / 2.0).ceil())?, n, alpha, amp, horizon)
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
}

fn u_at_origin(
    s0: &ConjugateState,
    h: &Hamiltonian1D,
    w: &PiecewiseLinearPath,
    t: f64,
) -> Result<f64> {
    Ok(hopf_solve(s0, h, w, &[t])?[0].eval_primal(&[0.0])[0])
}

pub fn run_blowup(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Blowup;
    let alpha: f64 = param(cfg, sc, "alpha")?;
    let beta: f64 = param(cfg, sc, "beta")?;
    let n_list: Vec<u32> = param_list(cfg, sc, "n_list")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let dual_nodes: usize = param(cfg, sc, "dual_nodes")?;
    let tol: f64 = param(cfg, sc, "tolerance")?;
    if !(alpha > 0.0 && beta > 0.0 && beta < 1.0) || alpha + beta >= 1.0 {
        return config_error(format!(
            "blowup needs α, β > 0 with α + β < 1, got α = {alpha}, β = {beta}"
        ));
    }
    if n_list.len() < 2 || !(horizon > 0.0) {
        return config_error("blowup needs at least two levels and T > 0");
    }
    let exec = run_exec(cfg)?;
    let h = power_radial(beta, 1.0, dual_nodes)?;
    let s0 = cone_state(0.0, dual_nodes)?;
    let jobs: Vec<(u32, f64)> = [horizon, 2.0 * horizon]
        .iter()
        .flat_map(|t| n_list.iter().map(move |n| (*n, *t)))
        .collect();
    let values = exec.try_map(jobs.len(), |i| {
        let (n, t) = jobs[i];
        u_at_origin(&s0, &h, &scaled_teeth(n, alpha, 1.0 / beta, t)?, t)
    })?;
    let (first, doubled) = values.split_at(n_list.len());
    let ns: Vec<f64> = n_list.iter().map(|n| *n as f64).collect();
    let logs = |v: &[f64]| v.iter().map(|u| u.log2()).collect::<Vec<_>>();
    let (slope, intercept) = linear_fit(&ns, &logs(first));
    let (slope2, _) = linear_fit(&ns, &logs(doubled));

    let mut art = RunArtifact::new(sc.name());
    let mut t = Table::new("blowup", &["n", "u_T", "log2_u_T", "u_2T", "log2_u_2T"]);
    for (i, n) in ns.iter().enumerate() {
        t.push_nums(&[*n, first[i], first[i].log2(), doubled[i], doubled[i].log2()]);
    }
    art.tables.push(t);
    let expected = 1.0 - alpha - beta;
    art.assert(Assertion::new(
        "growth_exponent",
        "log2 u_n(0,T) grows in n with slope 1 - alpha - beta",
        slope,
        expected,
        tol,
        Relation::Within,
    ));
    art.assert(Assertion::new(
        "horizon_invariance",
        "doubling T leaves the fitted slope unchanged",
        slope2,
        slope,
        tol,
        Relation::Within,
    ));
    art.metric("slope", slope);
    art.metric("intercept", intercept);
    art.metric("slope_doubled_horizon", slope2);
    Ok(art)
}

pub fn run_limit(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Limit;
    let alpha: f64 = param(cfg, sc, "alpha")?;
    let c0: f64 = param(cfg, sc, "c0")?;
    let n_list: Vec<u32> = param_list(cfg, sc, "n_list")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let probe_count: usize = param(cfg, sc, "probe_times")?;
    let x_max: f64 = param(cfg, sc, "x_max")?;
    let x_nodes: usize = param(cfg, sc, "x_nodes")?;
    let dual_nodes: usize = param(cfg, sc, "dual_nodes")?;
    let threshold: f64 = param(cfg, sc, "threshold")?;
    if !(alpha > 0.0 && alpha < 1.0) || !(c0 > 0.0) {
        return config_error(format!(
            "limit needs α in (0, 1) and c0 > 0, got α = {alpha}, c0 = {c0}"
        ));
    }
    if n_list.is_empty() || probe_count < 1 {
        return config_error("limit needs at least one level and one probe time");
    }
    let exec = run_exec(cfg)?;
    let beta = 1.0 - alpha;
    let lambda = |c: f64| 2f64.powf(alpha) * (1.0 - alpha).powf(alpha) * c;
    let h = power_radial(beta, 1.0, dual_nodes)?;
    let s0 = cone_state(0.0, dual_nodes)?;
    let xs = Grid1D::new(-x_max, x_max, x_nodes)?.points();
    let probes: Vec<f64> = (0..=probe_count)
        .map(|k| horizon * k as f64 / probe_count as f64)
        .collect();
    let limit = |c: f64, x: f64, t: f64| x.abs().max(c * t.powf(alpha));
    let cone_from = c0 * horizon.powf(alpha);

    // (probe error, error over all knot times, cone error, u(0, T))
    let rows = exec.try_map(n_list.len(), |i| -> Result<[f64; 4]> {
        let w = scaled_teeth(n_list[i], alpha, lambda(c0) / beta, horizon)?;
        let (mut e_probe, mut cone) = (0.0f64, 0.0f64);
        let mut origin = 0.0;
        hopf_visit(&s0, &h, &w, &probes, |_, st| {
            let u = st.eval_primal(&xs);
            for (x, v) in xs.iter().zip(&u) {
                e_probe = e_probe.max((v - limit(c0, *x, st.time())).abs());
                if x.abs() >= cone_from {
                    cone = cone.max((v - x.abs()).abs());
                }
            }
            if st.time() == horizon {
                origin = st.eval_primal(&[0.0])[0];
            }
            Ok(())
        })?;
        let knots = merged_times(&[&w], horizon);
        let mut e_all = 0.0f64;
        hopf_visit(&s0, &h, &w, &knots, |_, st| {
            let u = st.eval_primal(&xs);
            for (x, v) in xs.iter().zip(&u) {
                e_all = e_all.max((v - limit(c0, *x, st.time())).abs());
            }
            Ok(())
        })?;
        Ok([e_probe, e_all, cone, origin])
    })?;
    let n_last = *n_list.last().expect("nonempty");
    let doubled = u_at_origin(
        &s0,
        &h,
        &scaled_teeth(n_last, alpha, lambda(2.0 * c0) / beta, horizon)?,
        horizon,
    )?;

    let mut art = RunArtifact::new(sc.name());
    let mut t = Table::new(
        "limit",
        &[
            "n",
            "error_probe_times",
            "error_all_knots",
            "cone_error",
            "u_0_T",
        ],
    );
    for (n, r) in n_list.iter().zip(&rows) {
        t.push_nums(&[*n as f64, r[0], r[1], r[2], r[3]]);
    }
    art.tables.push(t);
    let errs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let decreasing = errs.windows(2).all(|p| p[1] < p[0]);
    art.assert(Assertion::holds(
        "error_strictly_decreasing",
        "sup error to |x| v c0 t^alpha at the probe times decreases along the levels",
        decreasing,
    ));
    let last = rows.last().expect("nonempty");
    art.assert(Assertion::new(
        "final_error",
        "sup error at the last level is below the threshold",
        last[0],
        threshold,
        0.0,
        Relation::AtMost,
    ));
    art.assert(Assertion::new(
        "cone_region",
        "u_n is close to |x| where |x| >= c0 T^alpha",
        last[2],
        threshold,
        0.0,
        Relation::AtMost,
    ));
    art.assert(Assertion::new(
        "plateau_scaling",
        "doubling c0 doubles the plateau u_n(0, T)",
        doubled / last[3],
        2.0,
        0.1,
        Relation::Within,
    ));
    art.metric("errors", &errs);
    art.metric(
        "errors_all_knots",
        rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
    );
    art.metric("amplitude_lambda", lambda(c0));
    art.metric("plateau_doubled_c0", doubled);
    Ok(art)
}

/// Sampled `H_PL(p) = c·|p|^β` in both general and radial form, on the same nodes.
fn sampled_power(beta: f64, radius: f64, nodes: usize) -> Result<(Hamiltonian1D, Hamiltonian1D)> {
    if nodes % 2 == 0 {
        return config_error("h_nodes must be odd so that p = 0 is a node");
    }
    let general = Hamiltonian1D::general_from_fn(radius, nodes, |p| p.abs().powf(beta) / beta)?;
    let radial = Hamiltonian1D::radial(GridFunction::new(
        Grid1D::new(0.0, radius, nodes / 2 + 1)?,
        general.profile().values()[nodes / 2..].to_vec(),
    )?)?;
    Ok((general, radial))
}

pub fn run_crossval(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Crossval;
    let resolutions: Vec<usize> = param_list(cfg, sc, "resolutions")?;
    let beta: f64 = param(cfg, sc, "beta")?;
    let a_list: Vec<f64> = param_list(cfg, sc, "a_list")?;
    let times: Vec<f64> = param_list(cfg, sc, "times")?;
    let check_times: Vec<f64> = param_list(cfg, sc, "check_times")?;
    let x_max: f64 = param(cfg, sc, "x_max")?;
    let window: f64 = param(cfg, sc, "window")?;
    let dual_nodes: usize = param(cfg, sc, "dual_nodes")?;
    let h_radius: f64 = param(cfg, sc, "h_radius")?;
    let h_nodes: usize = param(cfg, sc, "h_nodes")?;
    let cfl: f64 = param(cfg, sc, "cfl")?;
    let min_order: f64 = param(cfg, sc, "min_order")?;
    if resolutions.len() < 2 || !(beta > 0.0 && beta < 1.0) {
        return config_error("crossval needs two or more resolutions and β in (0, 1)");
    }
    if let Some(t) = check_times.iter().find(|t| !times.contains(t)) {
        return config_error(format!("check time {t} is not among the sample times"));
    }
    if times.iter().any(|t| !(0.0..=2.0).contains(t)) {
        return config_error("crossval times must lie in [0, 2]");
    }
    let exec = run_exec(cfg)?;
    let w = teeth(2.0)?;
    let (h_fd, h_pl) = sampled_power(beta, h_radius, h_nodes)?;
    let h_exact = power_radial(beta, 1.0 / beta, dual_nodes)?;
    let dual_h = 1.0 / (dual_nodes - 1) as f64;

    let mut art = RunArtifact::new(sc.name());
    let mut table = Table::new(
        "crossval",
        &[
            "a",
            "x_nodes",
            "dx",
            "t",
            "fd_vs_conjugate",
            "fd_vs_closed_form",
            "sandwich_violation",
            "sandwich_tolerance",
        ],
    );
    for a in &a_list {
        let s0 = cone_state(*a, dual_nodes)?;
        let reference = hopf_solve(&s0, &h_pl, &w, &times)?;
        let closed = |x: f64, t: f64| closedform_tooth_solution(beta, *a, x, t);
        // per resolution: per time (fd vs conjugate, fd vs closed form, sandwich violation)
        let per_res = exec.try_map(resolutions.len(), |i| -> Result<(f64, Vec<[f64; 3]>)> {
            let grid = Grid1D::new(-x_max, x_max, resolutions[i])?;
            let u0 = GridFunction::from_fn(grid, |x| x.abs().max(*a))?;
            let fd = fd_solve(&u0, &h_fd, &w, cfl, &times)?;
            let xs = grid.points();
            let inside: Vec<usize> = (0..xs.len()).filter(|j| xs[*j].abs() <= window).collect();
            let tol = 2.0 * (h_fd.lipschitz_bound() * grid.spacing()).max(window * dual_h);
            let mut out = Vec::new();
            for (k, (t, snap)) in fd.snapshots.iter().enumerate() {
                let conj = reference[k].eval_primal(&xs);
                let (lo, hi) = envelope_bounds(
                    &s0,
                    &[(h_pl.clone(), w.clone())],
                    *t,
                    &grid,
                    ProductOrder::ListOrder,
                )?;
                let (mut e_ref, mut e_cf, mut viol) = (0.0f64, 0.0f64, 0.0f64);
                for j in &inside {
                    let u = snap.values()[*j];
                    e_ref = e_ref.max((u - conj[*j]).abs());
                    e_cf = e_cf.max((u - closed(xs[*j], *t)?).abs());
                    for v in [u, conj[*j]] {
                        viol = viol.max(lo.values()[*j] - v).max(v - hi.values()[*j]);
                    }
                }
                out.push([e_ref, e_cf, viol]);
            }
            Ok((tol, out))
        })?;
        for (i, (tol, rows)) in per_res.iter().enumerate() {
            let dx = 2.0 * x_max / (resolutions[i] - 1) as f64;
            for (k, r) in rows.iter().enumerate() {
                table.push_nums(&[
                    *a,
                    resolutions[i] as f64,
                    dx,
                    times[k],
                    r[0],
                    r[1],
                    r[2],
                    *tol,
                ]);
            }
        }
        let worst = per_res
            .iter()
            .map(|(tol, rows)| rows.iter().map(|r| r[2] / tol).fold(0.0f64, f64::max))
            .fold(0.0f64, f64::max);
        art.assert(Assertion::new(
            &format!("sandwich_a{a}"),
            "both engines lie between the running-extremum envelopes (violation / tolerance)",
            worst,
            1.0,
            0.0,
            Relation::AtMost,
        ));
        let dx_ratio =
            (resolutions[resolutions.len() - 1] - 1) as f64 / (resolutions[0] - 1) as f64;
        for t in &check_times {
            let k = times.iter().position(|s| s == t).expect("validated");
            let errs: Vec<f64> = per_res.iter().map(|(_, rows)| rows[k][0]).collect();
            let order = (errs[0] / errs[errs.len() - 1]).log2() / dx_ratio.log2();
            art.assert(Assertion::new(
                &format!("order_a{a}_t{t}"),
                "finite differences converge to the conjugate engine at the expected order",
                order,
                min_order,
                0.0,
                Relation::AtLeast,
            ));
            art.assert(Assertion::holds(
                &format!("monotone_a{a}_t{t}"),
                "finite-difference error decreases under every refinement",
                errs.windows(2).all(|p| p[1] < p[0]),
            ));
            if *a == 0.0 {
                let cf: Vec<f64> = per_res.iter().map(|(_, rows)| rows[k][1]).collect();
                let worst_ratio = cf
                    .windows(2)
                    .map(|p| (p[0] / p[1] - 2.0).abs())
                    .fold(0.0f64, f64::max);
                art.assert(Assertion::new(
                    &format!("halving_closed_form_t{t}"),
                    "error to the closed form halves per refinement (deviation of the ratio from 2)",
                    worst_ratio,
                    0.0,
                    0.4,
                    Relation::AtMost,
                ));
            }
        }
        if times.contains(&2.0) {
            let st = &hopf_solve(&s0, &h_exact, &w, &[2.0])?[0];
            let xs = Grid1D::new(-window, window, 401)?.points();
            let u = st.eval_primal(&xs);
            let mut err = 0.0f64;
            for (x, v) in xs.iter().zip(&u) {
                err = err.max((v - closed(*x, 2.0)?).abs());
            }
            art.assert(Assertion::new(
                &format!("conjugate_closed_form_a{a}"),
                "conjugate engine matches the closed form at t = 2 within two dual spacings",
                err,
                2.0 * dual_h,
                0.0,
                Relation::AtMost,
            ));
        }
        // zero path reproduces the initial data
        let zero = PiecewiseLinearPath::zero(2.0)?;
        let grid = Grid1D::new(-x_max, x_max, resolutions[0])?;
        let u0 = GridFunction::from_fn(grid, |x| x.abs().max(*a))?;
        let fd = fd_solve(&u0, &h_fd, &zero, cfl, &[2.0])?;
        art.assert(Assertion::holds(
            &format!("zero_path_fd_a{a}"),
            "finite differences keep u0 along the zero path",
            fd.snapshots[0].1 == u0,
        ));
        let st = &hopf_solve(&s0, &h_pl, &zero, &[2.0])?[0];
        let gap = sup_gap(&st.eval_primal(&grid.points()), u0.values());
        art.assert(Assertion::new(
            &format!("zero_path_conjugate_a{a}"),
            "conjugate engine keeps u0 along the zero path",
            gap,
            0.0,
            1e-12 * (x_max + a),
            Relation::AtMost,
        ));
    }
    art.tables.push(table);
    art.metric("fd_hamiltonian_lipschitz", h_fd.lipschitz_bound());
    Ok(art)
}

pub fn run_stability(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Stability;
    let trials: usize = param(cfg, sc, "trials")?;
    let eps_exp: Vec<i32> = param_list(cfg, sc, "eps_exponents")?;
    let beta: f64 = param(cfg, sc, "beta")?;
    let delta: f64 = param(cfg, sc, "delta")?;
    let radius: f64 = param(cfg, sc, "radius")?;
    let h_nodes: usize = param(cfg, sc, "h_nodes")?;
    let x_max: f64 = param(cfg, sc, "x_max")?;
    let x_nodes: usize = param(cfg, sc, "x_nodes")?;
    let path_steps: usize = param(cfg, sc, "path_steps")?;
    let ratio_bound: f64 = param(cfg, sc, "ratio_bound")?;
    let variation_max: f64 = param(cfg, sc, "variation_max")?;
    if trials < 10 {
        return config_error(format!("stability needs at least 10 trials, got {trials}"));
    }
    if eps_exp.is_empty() {
        return config_error("stability needs a nonempty ε sweep");
    }
    let exec = run_exec(cfg)?;
    let seed = run_seed(cfg)?;
    let grid = Grid1D::new(-x_max, x_max, x_nodes)?;
    let (h, _) = power_dc_truncation(beta, delta, radius, h_nodes)?;
    let u0 = GridFunction::from_fn(grid, |x| x.abs().max(1.0))?;
    let w2 = PiecewiseLinearPath::zero(2.0)?;
    let sweep = exec.try_map(eps_exp.len(), |i| {
        let eps = 0.5f64.powi(eps_exp[i]);
        stability_report(&h, &teeth(2.0)?.scaled(eps)?, &w2, &u0, radius)
    })?;
    let trial_reports = exec.try_map(trials, |i| {
        let s = seed.derive(0x57ab, i as u64);
        let mut rng = s.rng();
        let b: f64 = rng.random_range(0.3..0.8);
        let d: f64 = rng.random_range(0.1..0.5);
        let c: f64 = rng.random_range(-0.5..0.5);
        let a0: f64 = rng.random_range(0.0..1.0);
        let scale: f64 = rng.random_range(0.05..0.5);
        let (hh, _) = power_dc_truncation(b, d, radius, h_nodes)?;
        let p1 = brownian(2.0, path_steps, s.derive(1, 0))?.scaled(scale)?;
        let p2 = brownian(2.0, path_steps, s.derive(2, 0))?.scaled(scale)?;
        let init = GridFunction::from_fn(grid, |x| (x - c).abs().max(a0))?;
        Ok::<_, crate::Error>((
            [b, d, scale],
            stability_report(&hh, &p1, &p2, &init, radius)?,
        ))
    })?;

    let mut art = RunArtifact::new(sc.name());
    let mut t = Table::new(
        "stability",
        &[
            "kind",
            "index",
            "scale",
            "beta",
            "delta",
            "sup_difference",
            "path_gap",
            "dc_bound",
            "easy_bound",
            "dc_ratio",
            "easy_ratio",
            "exact_engine",
        ],
    );
    let opt = |r: Option<f64>| r.map_or("".to_string(), |v| v.to_string());
    for (i, r) in sweep.iter().enumerate() {
        t.push(vec![
            "sweep".into(),
            i.to_string(),
            0.5f64.powi(eps_exp[i]).to_string(),
            beta.to_string(),
            delta.to_string(),
            r.sup_difference.to_string(),
            r.path_gap.to_string(),
            r.dc_bound.to_string(),
            r.easy_bound.to_string(),
            opt(r.dc_ratio),
            opt(r.easy_ratio),
            r.exact_engine.to_string(),
        ]);
    }
    for (i, (p, r)) in trial_reports.iter().enumerate() {
        t.push(vec![
            "trial".into(),
            i.to_string(),
            p[2].to_string(),
            p[0].to_string(),
            p[1].to_string(),
            r.sup_difference.to_string(),
            r.path_gap.to_string(),
            r.dc_bound.to_string(),
            r.easy_bound.to_string(),
            opt(r.dc_ratio),
            opt(r.easy_ratio),
            r.exact_engine.to_string(),
        ]);
    }
    art.tables.push(t);

    let ratios: Vec<f64> = sweep.iter().filter_map(|r| r.dc_ratio).collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    art.assert(Assertion::new(
        "sweep_ratio_variation",
        "max/min of sup|u1-u2| / (DC norm * path gap) over the epsilon sweep",
        hi / lo,
        variation_max,
        0.0,
        Relation::AtMost,
    ));
    let all: Vec<f64> = ratios
        .iter()
        .cloned()
        .chain(trial_reports.iter().filter_map(|(_, r)| r.dc_ratio))
        .collect();
    let max_ratio = all.iter().cloned().fold(0.0f64, f64::max);
    art.assert(Assertion::new(
        "ratio_bounded",
        "sup|u1-u2| / (DC norm * path gap) stays below the recorded constant",
        max_ratio,
        ratio_bound,
        0.0,
        Relation::AtMost,
    ));
    let easy = sweep
        .iter()
        .chain(trial_reports.iter().map(|(_, r)| r))
        .filter_map(|r| r.easy_ratio)
        .fold(0.0f64, f64::max);
    art.assert(Assertion::new(
        "easy_bound_respected",
        "sup|u1-u2| <= sup|H| * total variation of W1 - W2",
        easy,
        1.0,
        1e-9,
        Relation::AtMost,
    ));
    let identical = stability_report(
        &h,
        &teeth(2.0)?.scaled(0.25)?,
        &teeth(2.0)?.scaled(0.25)?,
        &u0,
        radius,
    )?;
    art.assert(Assertion::new(
        "identical_paths",
        "identical paths give identical solutions",
        identical.sup_difference,
        0.0,
        0.0,
        Relation::AtMost,
    ));
    art.metric("sweep_ratios", &ratios);
    art.metric("max_ratio", max_ratio);
    art.metric("max_easy_ratio", easy);
    Ok(art)
}
