//! Monte Carlo studies: Brownian oscillation statistics and random-walk ensembles.

use rand::Rng;

use super::deterministic::cone_state;
use super::{
    config_error, param, param_list, run_exec, run_seed, Assertion, Relation, RunArtifact,
    Scenario, Table,
};
use crate::dc_toolkit::Hamiltonian1D;
use crate::error::Result;
use crate::expcli::Config;
use crate::paths::{
    brownian, count_n, k_path_profile, p_alpha_from_profile, scaled_walk_from_steps,
    walk_exit_count, walk_positions, walk_steps, RngSeed,
};
use crate::solver::hopf_solve;
use crate::stats::{mean, quantile_sorted, std_error, variance};

const TAG_PATHS: u64 = 0xb0;
const TAG_WALKS: u64 = 0xb1;
const TAG_EPOCHS: u64 = 0xb2;
const TAG_ENSEMBLE: u64 = 0xc0;

/// `P(K^M(t) > λt/M²)` upper bound for the walk exit count.
pub fn exit_count_tail_bound(m: f64, t: f64, lambda: f64) -> f64 {
    let m2 = m * m;
    2.0 * lambda * (m2 - 1.0) * t / (3.0 * ((lambda - 1.0) * t - m2).powi(2))
}

/// Steps until a fresh walk first moves `m` away from its start.
fn exit_epoch(rng: &mut impl Rng, m: i64) -> usize {
    let (mut z, mut k) = (0i64, 0usize);
    while z.abs() < m {
        z += if rng.random::<bool>() { 1 } else { -1 };
        k += 1;
    }
    k
}

/// `K^M(t)` on a walk long enough to determine it.
fn exit_count(seed: RngSeed, m: u64, t: f64) -> Result<usize> {
    let mut len = (t as usize) + 16 * (m * m) as usize;
    loop {
        match walk_exit_count(&walk_positions(&walk_steps(len, seed)), m, t) {
            Err(crate::Error::Range(_)) => len *= 2,
            other => return other,
        }
    }
}

pub fn run_brownian_study(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Brownian;
    let samples: usize = param(cfg, sc, "samples")?;
    let steps_log2: u32 = param(cfg, sc, "steps_log2")?;
    let n_levels: u32 = param(cfg, sc, "n_levels")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let p95_max: f64 = param(cfg, sc, "p95_max")?;
    let walks: usize = param(cfg, sc, "walks")?;
    let m: u64 = param(cfg, sc, "m")?;
    let t_walk: f64 = param(cfg, sc, "t_walk")?;
    let lambda: f64 = param(cfg, sc, "lambda")?;
    let epochs: usize = param(cfg, sc, "epochs")?;
    if samples < 50 {
        return config_error(format!("brownian needs at least 50 samples, got {samples}"));
    }
    if n_levels < 2 || m < 1 || walks < 2 || epochs < 2 {
        return config_error(
            "brownian needs n_levels >= 2, m >= 1 and at least two walks and epochs",
        );
    }
    if (lambda - 1.0) * t_walk <= (m * m) as f64 {
        return config_error("tail bound needs (lambda - 1) t > M^2");
    }
    let exec = run_exec(cfg)?;
    let seed = run_seed(cfg)?;

    // sup_{2≤n≤N} 2^{−n}·count_N(2^{−n/2}) and the 𝒫_{1/2,∞} estimate per path
    let stats = exec.try_map(samples, |i| -> Result<[f64; 2]> {
        let w = brownian(
            horizon,
            1usize << steps_log2,
            seed.derive(TAG_PATHS, i as u64),
        )?;
        let mut sup = 0.0f64;
        for n in 2..=n_levels {
            let c = count_n(&w, 2f64.powf(-(n as f64) / 2.0))?;
            sup = sup.max(c as f64 * 2f64.powi(-(n as i32)));
        }
        let profile = k_path_profile(&w, n_levels)?;
        Ok([sup, p_alpha_from_profile(&profile, 0.5, f64::INFINITY)])
    })?;
    let counts = exec.try_map(walks, |i| {
        exit_count(seed.derive(TAG_WALKS, i as u64), m, t_walk)
    })?;
    let taus = exec.map(epochs, |i| {
        exit_epoch(&mut seed.derive(TAG_EPOCHS, i as u64).rng(), m as i64) as f64
    });

    let mut art = RunArtifact::new(sc.name());
    let mut per_path = Table::new(
        "brownian_paths",
        &["index", "count_statistic", "p_half_inf_norm"],
    );
    for (i, s) in stats.iter().enumerate() {
        per_path.push_nums(&[i as f64, s[0], s[1]]);
    }
    art.tables.push(per_path);
    let qs = [0.05, 0.25, 0.5, 0.75, 0.95];
    let mut quant = Table::new(
        "brownian_quantiles",
        &["statistic", "q05", "q25", "q50", "q75", "q95"],
    );
    let mut p95 = 0.0;
    for (k, name) in ["count_statistic", "p_half_inf_norm"].iter().enumerate() {
        let mut v: Vec<f64> = stats.iter().map(|s| s[k]).collect();
        v.sort_by(f64::total_cmp);
        let row: Vec<f64> = qs.iter().map(|q| quantile_sorted(&v, *q)).collect();
        if k == 0 {
            p95 = row[4];
        }
        let mut cells = vec![name.to_string()];
        cells.extend(row.iter().map(|x| x.to_string()));
        quant.push(cells);
    }
    art.tables.push(quant);

    let threshold = lambda * t_walk / (m * m) as f64;
    let exceed = counts.iter().filter(|k| **k as f64 > threshold).count();
    let freq = exceed as f64 / walks as f64;
    let bound = exit_count_tail_bound(m as f64, t_walk, lambda);
    let se = (bound * (1.0 - bound) / walks as f64).sqrt();
    let mut tail = Table::new("exit_counts", &["walk", "count"]);
    for (i, k) in counts.iter().enumerate() {
        tail.push_nums(&[i as f64, *k as f64]);
    }
    art.tables.push(tail);
    let m2 = (m * m) as f64;
    let tau_mean = mean(&taus);
    let tau_se = std_error(&taus);

    art.assert(Assertion::new(
        "count_statistic_p95",
        "95th percentile of sup_n 2^-n N(2^-n/2, W) over Brownian paths is finite and moderate",
        p95,
        p95_max,
        0.0,
        Relation::AtMost,
    ));
    art.assert(Assertion::new(
        "exit_count_tail",
        "empirical P(K^M(t) > lambda t / M^2) stays below the analytic bound",
        freq,
        bound,
        3.0 * se,
        Relation::AtMost,
    ));
    art.assert(Assertion::new(
        "exit_epoch_mean",
        "mean time between exit epochs equals M^2",
        tau_mean,
        m2,
        3.0 * tau_se,
        Relation::Within,
    ));
    art.metric("tail_frequency", freq);
    art.metric("tail_bound", bound);
    art.metric("tail_standard_error", se);
    art.metric("epoch_mean", tau_mean);
    art.metric("epoch_standard_error", tau_se);
    art.metric("epoch_variance", variance(&taus));
    art.metric("epoch_variance_theory", 2.0 / 3.0 * m2 * (m2 - 1.0));
    art.metric("count_statistic_p95", p95);
    Ok(art)
}

struct Ensemble {
    /// `values[probe][sample]`, sorted.
    values: Vec<Vec<f64>>,
}

impl Ensemble {
    fn from_rows(rows: &[Vec<f64>], probes: usize) -> Self {
        let values = (0..probes)
            .map(|j| {
                let mut v: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect();
        Self { values }
    }
}

pub fn run_walk_convergence(cfg: &Config) -> Result<RunArtifact> {
    let sc = Scenario::Walks;
    let n_list: Vec<u32> = param_list(cfg, sc, "n_list")?;
    let samples: usize = param(cfg, sc, "samples")?;
    let x_probes: Vec<f64> = param_list(cfg, sc, "x_probes")?;
    let beta: f64 = param(cfg, sc, "beta")?;
    let delta: f64 = param(cfg, sc, "delta")?;
    let horizon: f64 = param(cfg, sc, "horizon")?;
    let dual_nodes: usize = param(cfg, sc, "dual_nodes")?;
    let qs: Vec<f64> = param_list(cfg, sc, "quantiles")?;
    if n_list.len() < 2 || samples < 2 || x_probes.is_empty() {
        return config_error("walks needs two or more levels, two or more samples and a probe");
    }
    if !(beta > 0.0 && beta < 1.0 && delta > 0.0) {
        return config_error("walks needs β in (0, 1) and δ > 0");
    }
    let exec = run_exec(cfg)?;
    let seed = run_seed(cfg)?;
    let floor = delta.powf(beta);
    let h = Hamiltonian1D::radial_from_fn(1.0, dual_nodes, |r| r.powf(beta).max(floor))?;
    let s0 = cone_state(0.0, dual_nodes)?;

    let mut art = RunArtifact::new(sc.name());
    let mut header = vec!["n", "x", "ensemble", "mean", "variance"];
    let qnames: Vec<String> = qs.iter().map(|q| format!("q{q}")).collect();
    header.extend(qnames.iter().map(String::as_str));
    let mut table = Table::new("walk_ensembles", &header);
    let mut gaps = Vec::new();
    let mut last_mean_z = 0.0f64;
    for n in &n_list {
        let steps = (*n as f64 * *n as f64 * horizon).ceil() as usize;
        // each sample draws one Brownian interpolant on the walk's time grid and
        // the walk whose steps are the signs of its increments
        let rows = exec.try_map(samples, |i| -> Result<(Vec<f64>, Vec<f64>)> {
            let s = seed.derive(TAG_ENSEMBLE + *n as u64, i as u64);
            let b = brownian(horizon, steps, s)?;
            let signs: Vec<i8> = b
                .values()
                .windows(2)
                .map(|p| if p[1] >= p[0] { 1 } else { -1 })
                .collect();
            let walk = scaled_walk_from_steps(&signs, *n, horizon)?;
            let uw = hopf_solve(&s0, &h, &walk, &[horizon])?[0].eval_primal(&x_probes);
            let ub = hopf_solve(&s0, &h, &b, &[horizon])?[0].eval_primal(&x_probes);
            Ok((uw, ub))
        })?;
        let walk_rows: Vec<Vec<f64>> = rows.iter().map(|r| r.0.clone()).collect();
        let bm_rows: Vec<Vec<f64>> = rows.iter().map(|r| r.1.clone()).collect();
        let ew = Ensemble::from_rows(&walk_rows, x_probes.len());
        let eb = Ensemble::from_rows(&bm_rows, x_probes.len());
        let mut gap = 0.0f64;
        let mut mean_z = 0.0f64;
        for (j, x) in x_probes.iter().enumerate() {
            for (name, e) in [("walk", &ew), ("brownian", &eb)] {
                let v = &e.values[j];
                let mut cells = vec![
                    n.to_string(),
                    x.to_string(),
                    name.to_string(),
                    mean(v).to_string(),
                    variance(v).to_string(),
                ];
                cells.extend(qs.iter().map(|q| quantile_sorted(v, *q).to_string()));
                table.push(cells);
            }
            for q in &qs {
                gap = gap.max(
                    (quantile_sorted(&ew.values[j], *q) - quantile_sorted(&eb.values[j], *q)).abs(),
                );
            }
            let pooled =
                (std_error(&ew.values[j]).powi(2) + std_error(&eb.values[j]).powi(2)).sqrt();
            let z =
                (mean(&ew.values[j]) - mean(&eb.values[j])).abs() / pooled.max(f64::MIN_POSITIVE);
            mean_z = mean_z.max(z);
        }
        gaps.push(gap);
        last_mean_z = mean_z;
    }
    art.tables.push(table);
    let mut gt = Table::new("walk_gaps", &["n", "max_quantile_gap"]);
    for (n, g) in n_list.iter().zip(&gaps) {
        gt.push_nums(&[*n as f64, *g]);
    }
    art.tables.push(gt);
    art.assert(Assertion::new(
        "quantile_gap_decreases",
        "quantile discrepancy between walk and Brownian ensembles at the last level is below the first",
        gaps[gaps.len() - 1],
        gaps[0],
        0.0,
        Relation::AtMost,
    ));
    art.assert(Assertion::new(
        "mean_gap_last_level",
        "ensemble means agree within 3 pooled standard errors at the last level",
        last_mean_z,
        3.0,
        0.0,
        Relation::AtMost,
    ));
    let zero = scaled_walk_from_steps(
        &vec![0; n_list[0] as usize * n_list[0] as usize],
        n_list[0],
        1.0,
    )?;
    let u = hopf_solve(&s0, &h, &zero, &[1.0])?[0].eval_primal(&x_probes);
    let exact = x_probes.iter().zip(&u).all(|(x, v)| *v == x.abs());
    art.assert(Assertion::holds(
        "zero_walk",
        "the zero walk leaves u0 = |x| unchanged",
        exact,
    ));
    art.metric("quantile_gaps", &gaps);
    Ok(art)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bound_value() {
        let b = exit_count_tail_bound(10.0, 1e4, 2.0);
        // 2·2·99·10⁴ / (3·(10⁴ − 100)²)
        let direct = 3_960_000.0 / (3.0 * 9900.0f64 * 9900.0);
        assert!((b - direct).abs() < 1e-15);
        assert!((b - 0.013468).abs() < 1e-6);
    }

    #[test]
    fn exit_epochs_have_mean_m_squared() {
        let s = RngSeed::new(3, 0);
        let taus: Vec<f64> = (0..4000)
            .map(|i| exit_epoch(&mut s.derive(1, i).rng(), 4) as f64)
            .collect();
        assert!((mean(&taus) - 16.0).abs() < 4.0 * std_error(&taus));
    }
}
