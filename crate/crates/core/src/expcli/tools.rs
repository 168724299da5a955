//! Single-object runs: one solve, one path, one Hamiltonian.

use serde_json::json;

use super::deterministic::cone_state;
use super::{
    config_error, param, param_list, run_seed, Assertion, Relation, RunArtifact, Scenario, Table,
};
use crate::dc_toolkit::{
    dc_max, dc_split, k_dc_candidates, membership_from_profile, power_dc_truncation, power_values,
    profile_from_costs, Hamiltonian1D, TruncationFamily,
};
use crate::error::Result;
use crate::expcli::{run_exec, Config};
use crate::grid_convex::{Grid1D, GridFunction, KOrientation, KProfile};
use crate::paths::{
    brownian, count_n, holder_seminorm, k_path_profile, p_alpha_from_profile, p_variation,
    scale_path, scaled_random_walk, teeth, PiecewiseLinearPath, RngSeed,
};
use crate::solver::{closedform_tooth_solution, fd_solve, hopf_solve};

fn build_path(
    kind: &str,
    cfg: &Config,
    sc: Scenario,
    horizon: f64,
    seed: RngSeed,
) -> Result<PiecewiseLinearPath> {
    match kind {
        "teeth" => teeth(horizon),
        "zero" => PiecewiseLinearPath::zero(horizon),
        "linear" => PiecewiseLinearPath::linear(param(cfg, sc, "slope")?, horizon),
        "brownian" => brownian(horizon, param(cfg, sc, "steps")?, seed),
        "walk" => scaled_random_walk(param(cfg, sc, "walk_n")?, horizon, seed),
        "scaled_teeth" => {
            let n: u32 = param(cfg, sc, "n")?;
            let span = 2f64.powi(n as i32) * horizon;
            scale_path(
                &teeth(2.0 * (span / 2.0).ceil())?,
                n,
                param(cfg, sc, "alpha")?,
                param(cfg, sc, "amp")?,
                horizon,
            )
        }
        other => config_error(format!("unknown path kind {other:?}")),
    }
}

pub fn run_solve(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Solve;
    let engine: String = param(cfg, sc, "engine")?;
    let beta: f64 = param(cfg, sc, "beta")?;
    let coef: f64 = param(cfg, sc, "coef")?;
    let delta: f64 = param(cfg, sc, "delta")?;
    let a: f64 = param(cfg, sc, "a")?;
    let path_kind: String = param(cfg, sc, "path")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let times: Vec<f64> = param_list(cfg, sc, "sample_times")?;
    let x_min: f64 = param(cfg, sc, "x_min")?;
    let x_max: f64 = param(cfg, sc, "x_max")?;
    let x_nodes: usize = param(cfg, sc, "x_nodes")?;
    let dual_nodes: usize = param(cfg, sc, "dual_nodes")?;
    let h_radius: f64 = param(cfg, sc, "h_radius")?;
    let h_nodes: usize = param(cfg, sc, "h_nodes")?;
    let cfl: f64 = param(cfg, sc, "cfl")?;
    let tol: f64 = param(cfg, sc, "tolerance")?;
    if !(beta > 0.0 && beta <= 1.0) || !(delta >= 0.0) || !(a >= 0.0) {
        return config_error("solve needs β in (0, 1], δ ≥ 0 and a ≥ 0");
    }
    let seed = run_seed(cfg)?;
    let w = build_path(&path_kind, cfg, sc, horizon, seed)?;
    let grid = Grid1D::new(x_min, x_max, x_nodes)?;
    let u0 = GridFunction::from_fn(grid, |x| x.abs().max(a))?;
    let floor = delta.powf(beta);
    let hfun = |p: f64| coef * p.abs().powf(beta).max(floor);

    let (snapshots, meta) = match engine.as_str() {
        "hopf" => {
            let h = Hamiltonian1D::radial_from_fn(1.0, dual_nodes, hfun)?;
            let s0 = cone_state(a, dual_nodes)?;
            let states = hopf_solve(&s0, &h, &w, &times)?;
            let snaps: Vec<(f64, GridFunction)> = states
                .iter()
                .map(|s| Ok((s.time(), s.primal_on(&grid)?)))
                .collect::<Result<_>>()?;
            (
                snaps,
                json!({"engine": "hopf", "dual_grid": Grid1D::new(0.0, 1.0, dual_nodes)?}),
            )
        }
        "fd" => {
            let h = Hamiltonian1D::general_from_fn(h_radius, h_nodes, hfun)?;
            let r = fd_solve(&u0, &h, &w, cfl, &times)?;
            let meta = json!({
                "engine": "fd",
                "cfl": cfl,
                "cfl_used": r.cfl_used,
                "steps": r.steps,
                "hamiltonian_grid": h.profile().grid(),
            });
            (r.snapshots, meta)
        }
        other => return config_error(format!("unknown engine {other:?}")),
    };

    let mut art = RunArtifact::new(sc.name());
    let mut files = Vec::new();
    for (k, (t, snap)) in snapshots.iter().enumerate() {
        let mut table = Table::new(&format!("snapshot_{k}"), &["x", "u"]);
        for (x, u) in grid.points().iter().zip(snap.values()) {
            table.push_nums(&[*x, *u]);
        }
        files.push(json!({"t": t, "file": table.file_name()}));
        art.tables.push(table);
    }
    let mut pt = Table::new("path", &["t", "w"]);
    for (t, v) in w.times().iter().zip(w.values()) {
        pt.push_nums(&[*t, *v]);
    }
    art.tables.push(pt);
    art.sidecars.push((
        "snapshots.json".into(),
        json!({
            "x_grid": grid,
            "run": meta,
            "seed": seed.seed,
            "stream": seed.stream,
            "path_kind": path_kind,
            "path_hash": format!("{:016x}", w.content_hash()),
            "snapshots": files,
        }),
    ));

    let lip0 = u0.max_slope();
    let grad = snapshots
        .iter()
        .map(|(_, s)| s.max_slope())
        .fold(0.0f64, f64::max);
    art.assert(Assertion::new(
        "gradient_bound",
        "Lipschitz constant of every snapshot is at most that of u0",
        grad,
        lip0,
        1e-9,
        Relation::AtMost,
    ));
    if let Some((_, s)) = snapshots.iter().find(|(t, _)| *t == 0.0) {
        let gap = s
            .values()
            .iter()
            .zip(u0.values())
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        art.assert(Assertion::new(
            "initial_snapshot",
            "the snapshot at t = 0 is the initial data",
            gap,
            0.0,
            1e-12 * (1.0 + u0.sup_norm()),
            Relation::AtMost,
        ));
    }
    let exact_case = engine == "hopf"
        && path_kind == "teeth"
        && delta == 0.0
        && beta < 1.0
        && (coef * beta - 1.0).abs() < 1e-12;
    if exact_case {
        let mut err = 0.0f64;
        for (t, s) in snapshots.iter().filter(|(t, _)| *t <= 2.0) {
            for (x, u) in grid.points().iter().zip(s.values()) {
                err = err.max((u - closedform_tooth_solution(beta, a, *x, *t)?).abs());
            }
        }
        art.assert(Assertion::new(
            "closed_form",
            "conjugate engine matches the exact sawtooth solution on [0, 2]",
            err,
            0.0,
            tol,
            Relation::AtMost,
        ));
    }
    art.metric("path_hash", format!("{:016x}", w.content_hash()));
    Ok(art)
}

pub fn run_paths(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Paths;
    let kind: String = param(cfg, sc, "kind")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let deltas: Vec<f64> = param_list(cfg, sc, "deltas")?;
    let p: f64 = param(cfg, sc, "p")?;
    let holder_alpha: f64 = param(cfg, sc, "holder_alpha")?;
    let n_max: u32 = param(cfg, sc, "n_max")?;
    let seed = run_seed(cfg)?;
    let w = build_path(&kind, cfg, sc, horizon, seed)?;
    let again = build_path(&kind, cfg, sc, horizon, seed)?;

    let mut art = RunArtifact::new(sc.name());
    let mut pt = Table::new("path", &["t", "w"]);
    for (t, v) in w.times().iter().zip(w.values()) {
        pt.push_nums(&[*t, *v]);
    }
    art.tables.push(pt);

    let mut sorted = deltas.clone();
    sorted.sort_by(f64::total_cmp);
    let mut ct = Table::new("counts", &["delta", "count"]);
    let mut counts = Vec::new();
    for d in &sorted {
        let c = count_n(&w, *d)?;
        ct.push_nums(&[*d, c as f64]);
        counts.push(c);
    }
    art.tables.push(ct);
    let profile = k_path_profile(&w, n_max)?;
    let mut kt = Table::new("k_profile", &["n", "k"]);
    for (n, k) in profile.entries() {
        kt.push_nums(&[*n as f64, *k]);
    }
    art.tables.push(kt);

    art.assert(Assertion::holds(
        "starts_at_origin",
        "the path starts at (0, 0)",
        w.times()[0] == 0.0 && w.values()[0] == 0.0,
    ));
    art.assert(Assertion::holds(
        "counts_monotone",
        "the oscillation count does not increase with delta",
        counts.windows(2).all(|c| c[1] <= c[0]),
    ));
    art.assert(Assertion::holds(
        "profile_monotone",
        "the path K-profile is monotone in its argument",
        profile.is_monotone(1e-12),
    ));
    art.assert(Assertion::holds(
        "seed_reproducible",
        "regenerating with the same seed gives the same path",
        w.content_hash() == again.content_hash(),
    ));
    art.metric("path_hash", format!("{:016x}", w.content_hash()));
    art.metric("knots", w.knot_count());
    art.metric("sup_norm", w.sup_norm());
    art.metric("total_variation", w.total_variation());
    art.metric("p_variation", p_variation(&w, p)?);
    art.metric("holder_seminorm", holder_seminorm(&w, holder_alpha)?);
    art.metric(
        "p_half_inf_norm",
        p_alpha_from_profile(&profile, 0.5, f64::INFINITY),
    );
    Ok(art)
}

pub fn run_norms(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Norms;
    let beta: f64 = param(cfg, sc, "beta")?;
    let delta: f64 = param(cfg, sc, "delta")?;
    let radius: f64 = param(cfg, sc, "radius")?;
    let nodes: usize = param(cfg, sc, "nodes")?;
    let alphas: Vec<f64> = param_list(cfg, sc, "alphas")?;
    let n_levels: Vec<u32> = param_list(cfg, sc, "n_levels")?;
    let fit: Vec<u32> = param_list(cfg, sc, "fit_levels")?;
    let rel_tol: f64 = param(cfg, sc, "exponent_rel_tol")?;
    if alphas.len() != n_levels.len() {
        return config_error("alphas and n_levels must have the same length");
    }
    if fit.len() != 2 || fit[0] >= fit[1] {
        return config_error("fit_levels must be two increasing levels");
    }
    if !(beta > 0.0 && beta < 1.0) {
        return config_error(format!("norms needs β in (0, 1), got {beta}"));
    }
    let exec = run_exec(cfg)?;
    let grid = Grid1D::new(-radius, radius, nodes)?;
    let (trunc, floor) = power_dc_truncation(beta, delta, radius, nodes)?;
    let pure = GridFunction::new(grid, power_values(&grid, beta))?;

    let mut art = RunArtifact::new(sc.name());
    let mut dc = Table::new("dc_parts", &["x", "part_plus", "part_minus"]);
    for ((x, p), m) in grid
        .points()
        .iter()
        .zip(trunc.part_plus().values())
        .zip(trunc.part_minus().values())
    {
        dc.push_nums(&[*x, *p, *m]);
    }
    art.tables.push(dc);

    let sup_err = trunc
        .values()
        .iter()
        .zip(pure.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    art.assert(Assertion::new(
        "truncation_error",
        "sup |H_beta,delta - |p|^beta| equals delta^beta",
        sup_err,
        floor,
        1e-12,
        Relation::Within,
    ));
    let split = dc_split(&pure)?;
    let residual = split
        .values()
        .iter()
        .zip(pure.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    art.assert(Assertion::new(
        "split_reconstruction",
        "part_plus - part_minus reproduces |p|^beta",
        residual,
        0.0,
        1e-10,
        Relation::AtMost,
    ));
    let mx = dc_max(&trunc, &split)?;
    art.assert(Assertion::new(
        "max_norm_bound",
        "the DC norm of a maximum is at most twice the sum of the norms",
        mx.norm_upper(),
        2.0 * (trunc.norm_upper() + split.norm_upper()),
        0.0,
        Relation::AtMost,
    ));

    let top = *n_levels.iter().max().unwrap_or(&fit[1]).max(&fit[1]);
    let costs = k_dc_candidates(&pure, radius, TruncationFamily::Mollified, exec)?;
    let full = KProfile::new(KOrientation::LargeArgument, profile_from_costs(&costs, top))?;
    let mut kt = Table::new("k_profile", &["n", "k"]);
    for (n, k) in full.entries() {
        kt.push_nums(&[*n as f64, *k]);
    }
    art.tables.push(kt);
    let slope = full.fitted_exponent(fit[0]..=fit[1]);
    art.metric("k_profile_exponent", slope);

    let mut mt = Table::new("membership", &["alpha", "n", "term", "partial_sum"]);
    for (alpha, n) in alphas.iter().zip(&n_levels) {
        let profile = KProfile::new(KOrientation::LargeArgument, profile_from_costs(&costs, *n))?;
        let sums = membership_from_profile(&profile, *alpha);
        for (k, (t, s)) in sums.terms.iter().zip(&sums.partial_sums).enumerate() {
            mt.push_nums(&[*alpha, k as f64, *t, *s]);
        }
        let gap = 1.0 - alpha - beta;
        if gap < 0.0 {
            art.assert(Assertion::new(
                &format!("converges_alpha{alpha}"),
                "membership sum converges when alpha + beta > 1 (tail estimate)",
                sums.tail_estimate,
                crate::dc_toolkit::MEMBERSHIP_TAIL_TOL,
                0.0,
                Relation::AtMost,
            ));
        } else if gap > 0.0 {
            art.assert(Assertion::new(
                &format!("diverges_alpha{alpha}"),
                "membership terms grow like 2^(n(1 - alpha - beta)) when alpha + beta < 1",
                sums.divergence_exponent.unwrap_or(0.0),
                gap,
                rel_tol * gap,
                Relation::Within,
            ));
        }
        art.metric(&format!("membership_alpha{alpha}"), &sums);
    }
    art.tables.push(mt);
    Ok(art)
}
