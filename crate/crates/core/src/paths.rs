//! Driving paths and their regularity functionals.
//!
//! All oscillation and variation computations work directly on the knots of
//! piecewise-linear paths, so they carry no sampling error.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};
use crate::grid_convex::{KOrientation, KProfile};

/// Continuous path, affine between strictly increasing knots, starting at `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Interface("times and values differ in length".into()));
        }
        if times.len() < 2 {
            return Err(Error::Domain("a path needs at least two knots".into()));
        }
        if times[0] != 0.0 || values[0] != 0.0 {
            return Err(Error::Domain("a path must start at (0, 0)".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Domain(
                "knot times must be finite and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("path values must be finite".into()));
        }
        Ok(Self { times, values })
    }

    /// The zero path on `[0, T]`.
    pub fn zero(horizon: f64) -> Result<Self> {
        Self::new(vec![0.0, horizon], vec![0.0, 0.0])
    }

    /// Straight line `t ↦ slope·t` on `[0, T]`.
    pub fn linear(slope: f64, horizon: f64) -> Result<Self> {
        Self::new(vec![0.0, horizon], vec![0.0, slope * horizon])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn knot_count(&self) -> usize {
        self.times.len()
    }

    /// Index of the segment `[t_i, t_{i+1}]` containing `t` (clamped).
    fn segment(&self, t: f64) -> usize {
        let k = self.times.partition_point(|s| *s <= t);
        k.clamp(1, self.times.len() - 1) - 1
    }

    /// Value at `t`, clamped to the horizon.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon());
        let i = self.segment(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (w0, w1) = (self.values[i], self.values[i + 1]);
        if t == t0 {
            w0
        } else if t == t1 {
            w1
        } else {
            w0 + (w1 - w0) * (t - t0) / (t1 - t0)
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn total_variation(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// `max_{0≤s≤t} W(s)`.
    pub fn running_max(&self, t: f64) -> f64 {
        self.running(t, f64::max)
    }

    /// `min_{0≤s≤t} W(s)`.
    pub fn running_min(&self, t: f64) -> f64 {
        self.running(t, f64::min)
    }

    fn running(&self, t: f64, pick: fn(f64, f64) -> f64) -> f64 {
        let t = t.clamp(0.0, self.horizon());
        let mut acc = self.values[0];
        for (s, v) in self.times.iter().zip(&self.values) {
            if *s > t {
                break;
            }
            acc = pick(acc, *v);
        }
        pick(acc, self.eval(t))
    }

    /// `c·W`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.times.clone(),
            self.values.iter().map(|v| c * v).collect(),
        )
    }

    /// Restriction to `[0, t]`.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= self.horizon()) {
            return range(format!(
                "truncation time {t} outside (0, {}]",
                self.horizon()
            ));
        }
        let mut times: Vec<f64> = self.times.iter().cloned().filter(|s| *s < t).collect();
        let mut values: Vec<f64> = self.values[..times.len()].to_vec();
        times.push(t);
        values.push(self.eval(t));
        Self::new(times, values)
    }

    /// Pointwise `self − other` on the common horizon, knots merged.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        let t_end = self.horizon().min(other.horizon());
        let times = merged_times(&[self, other], t_end);
        let values = times
            .iter()
            .map(|t| self.eval(*t) - other.eval(*t))
            .collect();
        Self::new(times, values)
    }

    /// 64-bit FNV-1a hash of the knot bit patterns, recorded in run metadata.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for x in self.times.iter().chain(&self.values) {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }

    /// CSV with header `t,w`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "w"])?;
        for (t, v) in self.times.iter().zip(&self.values) {
            out.write_record([t.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["t", "w"] {
            return Err(Error::Parse(format!("expected header t,w, got {header:?}")));
        }
        let (mut ts, mut ws) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
            };
            ts.push(num(&rec[0])?);
            ws.push(num(&rec[1])?);
        }
        Self::new(ts, ws)
    }
}

/// Sorted union of the knot times of several paths, restricted to `[0, t_end]`.
pub fn merged_times(paths: &[&PiecewiseLinearPath], t_end: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = paths
        .iter()
        .flat_map(|p| p.times.iter().cloned())
        .filter(|t| *t < t_end)
        .collect();
    ts.push(t_end);
    ts.sort_by(|a, b| a.total_cmp(b));
    ts.dedup();
    ts
}

/// `sup_t |a(t) − b(t)|` on the common horizon, exact for piecewise-linear paths.
pub fn sup_distance(a: &PiecewiseLinearPath, b: &PiecewiseLinearPath) -> f64 {
    let t_end = a.horizon().min(b.horizon());
    merged_times(&[a, b], t_end)
        .iter()
        .fold(0.0f64, |m, t| m.max((a.eval(*t) - b.eval(*t)).abs()))
}

/// Ordered breakpoints `0 = t₀ < … < t_N = T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints[0] != 0.0 {
            return Err(Error::Domain(
                "a partition starts at 0 and has an end point".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Number of intervals.
    pub fn count(&self) -> usize {
        self.breakpoints.len() - 1
    }
}

/// Seed and stream of a counter-based ChaCha8 generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }

    /// Independent seed for item `index` of the ensemble labelled `tag`.
    pub fn derive(&self, tag: u64, index: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(tag ^ self.stream.rotate_left(17))),
            stream: index,
        }
    }
}

/// Sawtooth with unit slopes: 1 at odd integers, 0 at even ones.
pub fn teeth(duration: f64) -> Result<PiecewiseLinearPath> {
    let k = (duration / 2.0).round();
    if !(duration > 0.0) || (duration - 2.0 * k).abs() > 1e-12 * duration.max(1.0) {
        return range(format!(
            "teeth duration must be a positive even integer, got {duration}"
        ));
    }
    let n = 2 * k as usize;
    let times = (0..=n).map(|i| i as f64).collect();
    let values = (0..=n).map(|i| (i % 2) as f64).collect();
    PiecewiseLinearPath::new(times, values)
}

/// `t ↦ amp·2^{−nα}·W(2ⁿt)` on `[0, T]`; `W` must be defined on `[0, 2ⁿT]`.
pub fn scale_path(
    w: &PiecewiseLinearPath,
    n: u32,
    alpha: f64,
    amp: f64,
    horizon: f64,
) -> Result<PiecewiseLinearPath> {
    if !(alpha > 0.0 && alpha < 1.0) || !(amp > 0.0) || !(horizon > 0.0) {
        return range("scale_path needs α in (0,1), amp > 0 and T > 0");
    }
    let speed = 2f64.powi(n as i32);
    let src_end = speed * horizon;
    if src_end > w.horizon() * (1.0 + 1e-12) {
        return range(format!(
            "source path ends at {} but {src_end} is needed",
            w.horizon()
        ));
    }
    let factor = amp * 2f64.powf(-(n as f64) * alpha);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (t, v) in w.times.iter().zip(&w.values) {
        if *t >= src_end {
            break;
        }
        times.push(t / speed);
        values.push(factor * v);
    }
    times.push(horizon);
    values.push(factor * w.eval(src_end));
    PiecewiseLinearPath::new(times, values)
}

/// Brownian motion sampled at `steps + 1` equispaced times and interpolated linearly.
pub fn brownian(horizon: f64, steps: usize, seed: RngSeed) -> Result<PiecewiseLinearPath> {
    if steps < 1 || !(horizon > 0.0) {
        return range("brownian needs steps ≥ 1 and T > 0");
    }
    let mut rng = seed.rng();
    let sd = (horizon / steps as f64).sqrt();
    let mut values = Vec::with_capacity(steps + 1);
    let mut w = 0.0;
    values.push(w);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        values.push(w);
    }
    let times = (0..=steps)
        .map(|i| {
            if i == steps {
                horizon
            } else {
                horizon * i as f64 / steps as f64
            }
        })
        .collect();
    PiecewiseLinearPath::new(times, values)
}

/// `len` fair ±1 steps.
pub fn walk_steps(len: usize, seed: RngSeed) -> Vec<i8> {
    let mut rng = seed.rng();
    (0..len)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect()
}

/// Positions `ζ(0) = 0, ζ(1), …` of a walk with the given steps.
pub fn walk_positions(steps: &[i8]) -> Vec<i64> {
    let mut pos = Vec::with_capacity(steps.len() + 1);
    let mut z = 0i64;
    pos.push(z);
    for s in steps {
        z += *s as i64;
        pos.push(z);
    }
    pos
}

/// `W_n(t) = ζ(n²t)/n` on `[0, T]` for a simple random walk `ζ`.
pub fn scaled_random_walk(n: u32, horizon: f64, seed: RngSeed) -> Result<PiecewiseLinearPath> {
    let needed = (n as f64 * n as f64 * horizon).ceil() as usize;
    scaled_walk_from_steps(&walk_steps(needed, seed), n, horizon)
}

/// [`scaled_random_walk`] for explicit steps in `{−1, 0, 1}`; zero steps give flat pieces.
pub fn scaled_walk_from_steps(steps: &[i8], n: u32, horizon: f64) -> Result<PiecewiseLinearPath> {
    if n < 1 || !(horizon > 0.0) {
        return range("scaled walk needs n ≥ 1 and T > 0");
    }
    let n2 = n as f64 * n as f64;
    let needed = (n2 * horizon).ceil() as usize;
    if steps.len() < needed {
        return range(format!(
            "{} steps given but {needed} are needed",
            steps.len()
        ));
    }
    let pos = walk_positions(&steps[..needed]);
    let mut times: Vec<f64> = (0..needed).map(|k| k as f64 / n2).collect();
    let mut values: Vec<f64> = pos[..needed].iter().map(|z| *z as f64 / n as f64).collect();
    let t_last = needed as f64 / n2;
    let frac = (horizon - times[needed - 1]) / (t_last - times[needed - 1]);
    let z_end = pos[needed - 1] as f64 + frac * (pos[needed] - pos[needed - 1]) as f64;
    times.push(horizon);
    values.push(z_end / n as f64);
    PiecewiseLinearPath::new(times, values)
}

const MOLLIFIER_NODES: usize = 32;

/// Smoothed path of width `δ`, resampled every `δ/8`.
///
/// The kernel is a bump on `[−δ/2, δ/2]` whose width shrinks linearly to zero
/// within `δ/2` of either end, so the result still starts at `(0, 0)` and ends
/// at `W(T)`. Each quadrature node composes `W` with a nondecreasing time
/// change, hence total variation cannot grow; symmetric weights keep affine
/// paths fixed; the error is at most the modulus of continuity at `δ/2`.
pub fn mollify(w: &PiecewiseLinearPath, delta: f64) -> Result<PiecewiseLinearPath> {
    let t_end = w.horizon();
    if !(delta > 0.0) || delta >= 0.5 * t_end {
        return range(format!("mollifier width must lie in (0, T/2), got {delta}"));
    }
    let half = 0.5 * delta;
    let nodes: Vec<(f64, f64)> = {
        let raw: Vec<(f64, f64)> = (0..MOLLIFIER_NODES)
            .map(|i| {
                let s = -1.0 + (2.0 * i as f64 + 1.0) / MOLLIFIER_NODES as f64;
                (s, (-1.0 / (1.0 - s * s)).exp())
            })
            .collect();
        let total: f64 = raw.iter().map(|(_, k)| k).sum();
        raw.into_iter().map(|(s, k)| (s, k / total)).collect()
    };
    let steps = (8.0 * t_end / delta).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = if i == steps {
            t_end
        } else {
            t_end * i as f64 / steps as f64
        };
        let m = (t / half).min((t_end - t) / half).min(1.0).max(0.0);
        let v = if m == 0.0 {
            w.eval(t)
        } else {
            // pair ±s so that affine paths are reproduced exactly
            let mut acc = 0.0;
            for j in 0..MOLLIFIER_NODES / 2 {
                let (s, k) = nodes[MOLLIFIER_NODES - 1 - j];
                acc += k * (w.eval(t - s * half * m) + w.eval(t + s * half * m));
            }
            acc
        };
        times.push(t);
        values.push(if i == 0 { 0.0 } else { v });
    }
    PiecewiseLinearPath::new(times, values)
}

/// Greedy oscillation partition with maximal intervals.
///
/// Each breakpoint is the last time before the oscillation since the previous
/// one exceeds `δ`; crossing times are solved exactly on the linear pieces.
/// Every interval but the last has oscillation exactly `δ`, and the count is
/// the minimal `N(δ, W)`.
pub fn greedy_oscillation_partition(w: &PiecewiseLinearPath, delta: f64) -> Result<Partition> {
    let mut bps = vec![0.0];
    greedy_scan(w, delta, Some(&mut bps))?;
    let t_end = w.horizon();
    if *bps.last().unwrap() < t_end {
        bps.push(t_end);
    }
    Partition::new(bps)
}

/// Number of intervals of [`greedy_oscillation_partition`].
///
/// Runs of crossings inside one linear piece are counted without visiting
/// them, so the cost is linear in the number of knots for every `δ`.
pub fn count_n(w: &PiecewiseLinearPath, delta: f64) -> Result<usize> {
    let (breaks, last) = greedy_scan(w, delta, None)?;
    Ok(breaks + usize::from(last < w.horizon()))
}

/// Interior breakpoints of the greedy partition and the last one (0 if none).
/// Breakpoint times are pushed onto `record` when given.
fn greedy_scan(
    w: &PiecewiseLinearPath,
    delta: f64,
    mut record: Option<&mut Vec<f64>>,
) -> Result<(usize, f64)> {
    if !(delta > 0.0) {
        return range(format!(
            "oscillation threshold must be positive, got {delta}"
        ));
    }
    let mut count = 0usize;
    let mut last = 0.0f64;
    let (mut lo, mut hi) = (w.values[0], w.values[0]);
    for i in 0..w.times.len() - 1 {
        let (ta, wa) = (w.times[i], w.values[i]);
        let (tb, wb) = (w.times[i + 1], w.values[i + 1]);
        let dir = if wb > wa {
            1.0
        } else if wb < wa {
            -1.0
        } else {
            continue;
        };
        // the interval ends once the oscillation exceeds δ, not when it first equals δ
        let reached = |level: f64| dir * (wb - level) > 0.0;
        let cross = |level: f64| (ta + (level - wa) / (wb - wa) * (tb - ta)).min(tb);
        let first = if dir > 0.0 { lo + delta } else { hi - delta };
        if reached(first) {
            let t = cross(first);
            // t ≤ last: the threshold is met where the previous interval ended
            if t > last {
                count += 1;
                last = t;
                if let Some(r) = record.as_deref_mut() {
                    r.push(t);
                }
                let mut k = ((wb - first).abs() / delta).floor() as usize;
                while k > 0 && !reached(first + dir * k as f64 * delta) {
                    k -= 1;
                }
                while reached(first + dir * (k + 1) as f64 * delta) {
                    k += 1;
                }
                if t >= tb {
                    k = 0;
                }
                match record.as_deref_mut() {
                    Some(r) => {
                        for m in 1..=k {
                            let t = cross(first + dir * m as f64 * delta);
                            if t > last {
                                r.push(t);
                                count += 1;
                                last = t;
                            }
                        }
                    }
                    None if k > 0 => {
                        count += k;
                        last = cross(first + dir * k as f64 * delta);
                    }
                    None => {}
                }
                lo = first + dir * k as f64 * delta;
                hi = lo;
            }
        }
        lo = lo.min(wb);
        hi = hi.max(wb);
    }
    Ok((count, last))
}

/// Oscillation partition at threshold `2^{−n/2}`.
pub fn bm_refinement_partition(w: &PiecewiseLinearPath, n: u32) -> Result<Partition> {
    greedy_oscillation_partition(w, 2f64.powf(-0.5 * n as f64))
}

/// Indices of the endpoints and strict local extrema of the knot values.
fn turning_points(v: &[f64]) -> Vec<usize> {
    let mut idx = vec![0];
    let mut dir = 0.0f64;
    for i in 1..v.len() {
        let d = v[i] - v[i - 1];
        if d == 0.0 {
            continue;
        }
        if dir != 0.0 && d.signum() != dir {
            idx.push(i - 1);
        }
        dir = d.signum();
    }
    if *idx.last().unwrap() != v.len() - 1 {
        idx.push(v.len() - 1);
    }
    idx.dedup();
    idx
}

/// `sup_P (Σ|W(t_i) − W(t_{i−1})|^p)^{1/p}` by dynamic programming over turning points.
pub fn p_variation(w: &PiecewiseLinearPath, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return range(format!("variation exponent must be ≥ 1, got {p}"));
    }
    let idx = turning_points(&w.values);
    let v: Vec<f64> = idx.iter().map(|i| w.values[*i]).collect();
    let mut best = vec![0.0f64; v.len()];
    for j in 1..v.len() {
        best[j] = (0..j)
            .map(|i| best[i] + (v[j] - v[i]).abs().powf(p))
            .fold(0.0, f64::max);
    }
    Ok(best[v.len() - 1].powf(1.0 / p))
}

/// `sup_{s≠t} |W(s) − W(t)|/|s − t|^α`.
///
/// For fixed `s` the ratio is quasiconvex in `t` on each linear piece, so the
/// supremum is attained at a pair of knots.
pub fn holder_seminorm(w: &PiecewiseLinearPath, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return range(format!("Hölder exponent must lie in (0, 1], got {alpha}"));
    }
    let (t, v) = (&w.times, &w.values);
    let mut best = 0.0f64;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            best = best.max((v[j] - v[i]).abs() / (t[j] - t[i]).powf(alpha));
        }
    }
    Ok(best)
}

/// Number of δ levels in the sweep of [`k_path_profile`].
pub const PATH_DELTA_LEVELS: u32 = 20;

/// Upper bounds for `K(2⁻ⁿ, W, C₀, W^{1,1})`, `n = 0..=n_max`.
///
/// Each entry is the minimum of `‖W‖_∞`, `2⁻ⁿ·TV(W)` and
/// `δ + 2⁻ⁿ·N(δ, W)·δ` over `δ = 2^{−j}‖W‖_∞`, `j = 0..=20`.
pub fn k_path_profile(w: &PiecewiseLinearPath, n_max: u32) -> Result<KProfile> {
    let sup = w.sup_norm();
    let tv = w.total_variation();
    let mut sweep = Vec::new();
    if sup > 0.0 {
        for j in 0..=PATH_DELTA_LEVELS {
            let delta = sup * 0.5f64.powi(j as i32);
            sweep.push((delta, count_n(w, delta)? as f64));
        }
    }
    let entries = (0..=n_max)
        .map(|n| {
            let s = 0.5f64.powi(n as i32);
            let swept = sweep
                .iter()
                .fold(f64::INFINITY, |m, (d, c)| m.min(d + s * c * d));
            (n, sup.min(s * tv).min(swept))
        })
        .collect();
    KProfile::new(KOrientation::SmallArgument, entries)
}

/// `sup_n` (`p = ∞`) or `ℓ^p` norm of `2^{nα}·K̂(2⁻ⁿ)` over `n ≤ n_max`.
pub fn p_alpha_norm(w: &PiecewiseLinearPath, alpha: f64, p: f64, n_max: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return range(format!(
            "interpolation exponent must lie in (0, 1), got {alpha}"
        ));
    }
    if !(p >= 1.0) {
        return range(format!("summation exponent must be in [1, ∞], got {p}"));
    }
    let profile = k_path_profile(w, n_max)?;
    Ok(p_alpha_from_profile(&profile, alpha, p))
}

pub(crate) fn p_alpha_from_profile(profile: &KProfile, alpha: f64, p: f64) -> f64 {
    let terms = profile
        .entries()
        .iter()
        .map(|(n, k)| 2f64.powf(alpha * *n as f64) * k);
    if p.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// First-exit epochs `τ_k` of `±M` moves for integer positions `ζ(0) = 0, ζ(1), …`.
///
/// Returns the epochs found before the walk ends.
pub fn walk_exit_times(positions: &[i64], m: u64) -> Vec<usize> {
    let m = m as i64;
    let mut out = Vec::new();
    let mut anchor = positions[0];
    for (k, z) in positions.iter().enumerate().skip(1) {
        if (z - anchor).abs() == m {
            out.push(k);
            anchor = *z;
        }
    }
    out
}

/// `K^M(t) = inf{k : τ_k ≥ t}` for the walk with the given positions.
///
/// Since consecutive epochs are at least `M` apart, the answer is known as
/// soon as `τ_{k−1} + M ≥ t`; a range error is raised when the walk ends
/// before that point.
pub fn walk_exit_count(positions: &[i64], m: u64, t: f64) -> Result<usize> {
    if m < 1 {
        return range("exit size must be ≥ 1");
    }
    if t <= 0.0 {
        return Ok(0);
    }
    let mi = m as i64;
    let mut anchor_time = 0usize;
    let mut anchor = positions[0];
    let mut k = 1;
    let mut i = 1;
    loop {
        if (anchor_time + m as usize) as f64 >= t {
            return Ok(k);
        }
        // find τ_k
        loop {
            if i >= positions.len() {
                return range(format!(
                    "walk of {} steps ends before K^M({t}) is determined",
                    positions.len() - 1
                ));
            }
            if (positions[i] - anchor).abs() == mi {
                break;
            }
            i += 1;
        }
        if i as f64 >= t {
            return Ok(k);
        }
        anchor_time = i;
        anchor = positions[i];
        k += 1;
        i += 1;
    }
}

/// `∫₀^{T−h} |W(t+h) − W(t)| dt`, integrated exactly piece by piece.
pub fn path_l1_modulus(w: &PiecewiseLinearPath, h: f64) -> Result<f64> {
    let t_end = w.horizon();
    if !(h > 0.0 && h < t_end) {
        return range(format!("shift must lie in (0, T), got {h}"));
    }
    let upper = t_end - h;
    let mut cuts: Vec<f64> = w
        .times
        .iter()
        .flat_map(|t| [*t, t - h])
        .filter(|t| *t > 0.0 && *t < upper)
        .collect();
    cuts.push(0.0);
    cuts.push(upper);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    let g = |t: f64| w.eval(t + h) - w.eval(t);
    let mut total = 0.0;
    for c in cuts.windows(2) {
        let (a, b) = (c[0], c[1]);
        let (ga, gb) = (g(a), g(b));
        let len = b - a;
        total += if ga * gb >= 0.0 {
            0.5 * len * (ga.abs() + gb.abs())
        } else {
            // linear with a sign change: two triangles
            0.5 * len * (ga * ga + gb * gb) / (ga.abs() + gb.abs())
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;
    use proptest::prelude::*;

    fn path(ts: &[f64], ws: &[f64]) -> PiecewiseLinearPath {
        PiecewiseLinearPath::new(ts.to_vec(), ws.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PiecewiseLinearPath::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(PiecewiseLinearPath::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(PiecewiseLinearPath::new(vec![0.0], vec![0.0]).is_err());
        assert!(Partition::new(vec![0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn teeth_examples() {
        let w = teeth(2.0).unwrap();
        assert_eq!(w.times(), &[0.0, 1.0, 2.0]);
        assert_eq!(w.values(), &[0.0, 1.0, 0.0]);
        assert_eq!(w.eval(0.5), 0.5);
        assert_eq!(teeth(10.0).unwrap().total_variation(), 10.0);
        assert!(matches!(teeth(3.0), Err(Error::Range(_))));
    }

    #[test]
    fn scale_examples() {
        let w = teeth(8.0).unwrap();
        let s = scale_path(&w, 0, 0.5, 2.0, 8.0).unwrap();
        assert_eq!(s.values(), w.scaled(2.0).unwrap().values());
        let s = scale_path(&w, 2, 0.5, 2.0, 1.0).unwrap();
        assert_eq!(s.eval(0.25), 1.0);
        assert_eq!(s.sup_norm(), 2.0 * 0.5 * w.sup_norm());
        assert!(matches!(
            scale_path(&w, 4, 0.5, 2.0, 1.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn brownian_is_deterministic() {
        let a = brownian(1.0, 100, RngSeed::new(7, 3)).unwrap();
        let b = brownian(1.0, 100, RngSeed::new(7, 3)).unwrap();
        let c = brownian(1.0, 100, RngSeed::new(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.values()[0], 0.0);
        assert_eq!(a.horizon(), 1.0);
    }

    #[test]
    fn brownian_terminal_variance() {
        let base = RngSeed::new(11, 0);
        let ends: Vec<f64> = (0..10_000)
            .map(|i| {
                *brownian(2.0, 8, base.derive(1, i))
                    .unwrap()
                    .values()
                    .last()
                    .unwrap()
            })
            .collect();
        assert!((stats::variance(&ends) / 2.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn walk_examples() {
        let steps = walk_steps(9, RngSeed::new(1, 1));
        let w1 = scaled_walk_from_steps(&steps, 1, 9.0).unwrap();
        let pos = walk_positions(&steps);
        for (k, z) in pos.iter().enumerate() {
            assert_eq!(w1.eval(k as f64), *z as f64);
        }
        let w = scaled_random_walk(5, 1.0, RngSeed::new(2, 0)).unwrap();
        for k in 1..=25 {
            let d = w.eval(k as f64 / 25.0) - w.eval((k - 1) as f64 / 25.0);
            assert!((d.abs() - 0.2).abs() < 1e-12);
        }
        let flat = scaled_walk_from_steps(&[0; 16], 4, 1.0).unwrap();
        assert_eq!(flat.sup_norm(), 0.0);
    }

    #[test]
    fn walk_terminal_mean() {
        let base = RngSeed::new(5, 0);
        let ends: Vec<f64> = (0..10_000)
            .map(|i| {
                *scaled_random_walk(4, 1.0, base.derive(2, i))
                    .unwrap()
                    .values()
                    .last()
                    .unwrap()
            })
            .collect();
        assert!(stats::mean(&ends).abs() < 3.0 * stats::std_error(&ends));
    }

    #[test]
    fn walk_with_fractional_horizon() {
        let w = scaled_walk_from_steps(&[1, 1, 1], 1, 2.5).unwrap();
        assert_eq!(w.horizon(), 2.5);
        assert_eq!(w.eval(2.5), 2.5);
    }

    #[test]
    fn mollify_affine_and_endpoints() {
        let w = PiecewiseLinearPath::linear(0.7, 4.0).unwrap();
        let m = mollify(&w, 0.5).unwrap();
        assert!(sup_distance(&w, &m) < 1e-12);
        let b = brownian(1.0, 512, RngSeed::new(3, 0)).unwrap();
        let m = mollify(&b, 0.1).unwrap();
        assert_eq!(m.values()[0], 0.0);
        assert_eq!(m.eval(1.0), b.eval(1.0));
        assert!(matches!(mollify(&b, 0.5), Err(Error::Range(_))));
    }

    #[test]
    fn mollify_converges_and_keeps_variation() {
        for w in [
            teeth(4.0).unwrap(),
            brownian(4.0, 2048, RngSeed::new(9, 9)).unwrap(),
        ] {
            let mut prev = f64::INFINITY;
            for k in 2..9 {
                let delta = 0.5f64.powi(k);
                let m = mollify(&w, delta).unwrap();
                let d = sup_distance(&w, &m);
                assert!(d <= prev * (1.0 + 1e-9), "k={k} d={d} prev={prev}");
                assert!(m.total_variation() <= w.total_variation() * (1.0 + 1e-12));
                prev = d;
            }
            assert!(prev < 0.2);
        }
    }

    #[test]
    fn greedy_examples() {
        let w = teeth(2.0).unwrap();
        let p = greedy_oscillation_partition(&w, 0.5).unwrap();
        // [0.5, 1.5] has oscillation exactly 0.5 and is kept whole
        assert_eq!(p.breakpoints(), &[0.0, 0.5, 1.5, 2.0]);
        let p = greedy_oscillation_partition(&w, 1.0).unwrap();
        assert_eq!(p.breakpoints(), &[0.0, 2.0]);
        let line = PiecewiseLinearPath::linear(1.0, 1.0).unwrap();
        let p = greedy_oscillation_partition(&line, 0.25).unwrap();
        assert_eq!(p.breakpoints(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(count_n(&w, 0.5).unwrap(), 3);
        assert_eq!(count_n(&w, 0.25).unwrap(), 7);
        assert_eq!(count_n(&w, 2.0).unwrap(), 1);
        assert_eq!(
            bm_refinement_partition(&w, 2).unwrap(),
            greedy_oscillation_partition(&w, 0.5).unwrap()
        );
    }

    #[test]
    fn greedy_intervals_have_exact_oscillation() {
        let w = brownian(1.0, 1000, RngSeed::new(4, 2)).unwrap();
        let delta = 0.125;
        let p = bm_refinement_partition(&w, 6).unwrap();
        let b = p.breakpoints();
        for k in 0..b.len() - 2 {
            let mut ts: Vec<f64> = w
                .times()
                .iter()
                .cloned()
                .filter(|t| *t > b[k] && *t < b[k + 1])
                .collect();
            ts.push(b[k]);
            ts.push(b[k + 1]);
            let vals: Vec<f64> = ts.iter().map(|t| w.eval(*t)).collect();
            let osc = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - vals.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!((osc - delta).abs() < 1e-12, "k={k} osc={osc}");
        }
    }

    #[test]
    fn variation_examples() {
        let w = teeth(2.0).unwrap();
        assert!((p_variation(&w, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((p_variation(&w, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let seg = PiecewiseLinearPath::linear(1.0, 1.0).unwrap();
        for p in [1.0, 1.5, 3.0] {
            assert!((p_variation(&seg, p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn holder_examples() {
        let w = teeth(6.0).unwrap();
        assert!((holder_seminorm(&w, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((holder_seminorm(&w, 0.5).unwrap() - 1.0).abs() < 1e-12);
        // dense brute force over pairs agrees
        let ts: Vec<f64> = (0..=600).map(|i| i as f64 / 100.0).collect();
        let mut brute = 0.0f64;
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                brute = brute.max((w.eval(ts[j]) - w.eval(ts[i])).abs() / (ts[j] - ts[i]).sqrt());
            }
        }
        assert!((brute - 1.0).abs() < 1e-12);
        let s = w.scaled(3.0).unwrap();
        assert!((holder_seminorm(&s, 0.5).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn k_profile_examples() {
        let w = teeth(2.0).unwrap();
        let p = k_path_profile(&w, 12).unwrap();
        assert!((p.get(3).unwrap() - 0.25).abs() < 1e-15);
        assert!(p.entries().iter().all(|(_, v)| *v <= w.sup_norm()));
        assert!(p.is_monotone(0.0));
        let z = PiecewiseLinearPath::zero(1.0).unwrap();
        assert!(k_path_profile(&z, 5)
            .unwrap()
            .entries()
            .iter()
            .all(|(_, v)| *v == 0.0));
        assert_eq!(p_alpha_norm(&z, 0.5, f64::INFINITY, 5).unwrap(), 0.0);
        let norm = p_alpha_norm(&w, 0.5, f64::INFINITY, 12).unwrap();
        assert!((norm - 2f64.sqrt()).abs() < 1e-12);
        let b = brownian(1.0, 4096, RngSeed::new(8, 1)).unwrap();
        let a1 = p_alpha_norm(&b, 0.3, f64::INFINITY, 12).unwrap();
        let a2 = p_alpha_norm(&b, 0.6, f64::INFINITY, 12).unwrap();
        assert!(a1 <= a2);
    }

    #[test]
    fn exit_count_examples() {
        let pos = walk_positions(&[1, 1, -1, 1, 1]);
        assert_eq!(walk_exit_times(&pos, 2), vec![2]);
        assert_eq!(walk_exit_count(&pos, 2, 3.0).unwrap(), 2);
        let pos = walk_positions(&walk_steps(50, RngSeed::new(1, 0)));
        for t in [0.5, 1.0, 7.2, 30.0] {
            assert_eq!(walk_exit_count(&pos, 1, t).unwrap(), t.ceil() as usize);
        }
        let short = walk_positions(&[1, -1, 1, -1]);
        assert!(matches!(
            walk_exit_count(&short, 2, 10.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn exit_epoch_mean() {
        let m = 4u64;
        let pos = walk_positions(&walk_steps(400_000, RngSeed::new(21, 0)));
        let taus = walk_exit_times(&pos, m);
        let diffs: Vec<f64> = std::iter::once(taus[0])
            .chain(taus.windows(2).map(|w| w[1] - w[0]))
            .take(10_000)
            .map(|d| d as f64)
            .collect();
        assert_eq!(diffs.len(), 10_000);
        let se = stats::std_error(&diffs);
        assert!((stats::mean(&diffs) - 16.0).abs() < 3.0 * se);
    }

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
        let left = (c - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + c)) + f(c));
        let right = (b - c) / 6.0 * (f(c) + 4.0 * f(0.5 * (c + b)) + f(b));
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right
        } else {
            simpson(f, a, c, tol / 2.0, depth - 1) + simpson(f, c, b, tol / 2.0, depth - 1)
        }
    }

    #[test]
    fn l1_modulus_examples() {
        let z = PiecewiseLinearPath::zero(2.0).unwrap();
        assert_eq!(path_l1_modulus(&z, 0.5).unwrap(), 0.0);
        let line = PiecewiseLinearPath::linear(1.0, 1.0).unwrap();
        let h = 0.3;
        assert!((path_l1_modulus(&line, h).unwrap() - h * (1.0 - h)).abs() < 1e-15);
        let w = teeth(2.0).unwrap();
        let f = |t: f64| (w.eval(t + 0.5) - w.eval(t)).abs();
        let oracle = simpson(&f, 0.0, 1.5, 1e-10, 30);
        assert!((path_l1_modulus(&w, 0.5).unwrap() - oracle).abs() < 1e-6);
        assert!(matches!(path_l1_modulus(&w, 2.0), Err(Error::Range(_))));
    }

    #[test]
    fn csv_round_trip() {
        let w = brownian(1.0, 20, RngSeed::new(1, 2)).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"t,w\n0,0\n"));
        assert_eq!(PiecewiseLinearPath::read_csv(buf.as_slice()).unwrap(), w);
    }

    #[test]
    fn running_extrema() {
        let w = path(&[0.0, 1.0, 2.0, 3.0], &[0.0, 2.0, -1.0, 0.5]);
        assert_eq!(w.running_max(0.5), 1.0);
        assert_eq!(w.running_max(3.0), 2.0);
        assert_eq!(w.running_min(1.5), 0.0);
        assert_eq!(w.running_min(2.5), -1.0);
    }

    fn random_path() -> impl Strategy<Value = PiecewiseLinearPath> {
        prop::collection::vec((0.05f64..1.0, -1.0f64..1.0), 1..12).prop_map(|steps| {
            let mut ts = vec![0.0];
            let mut ws = vec![0.0];
            for (dt, dw) in steps {
                ts.push(ts.last().unwrap() + dt);
                ws.push(ws.last().unwrap() + dw);
            }
            PiecewiseLinearPath::new(ts, ws).unwrap()
        })
    }

    proptest! {
        #[test]
        fn count_is_monotone_and_bounded(w in random_path(), d in 0.01f64..1.0) {
            let c1 = count_n(&w, d).unwrap();
            let c2 = count_n(&w, 2.0 * d).unwrap();
            prop_assert!(c2 <= c1);
            prop_assert!(c1 as f64 * d <= w.total_variation() + d + 1e-12);
        }

        #[test]
        fn count_matches_partition(w in random_path(), d in 0.001f64..1.0) {
            let part = greedy_oscillation_partition(&w, d).unwrap();
            prop_assert_eq!(count_n(&w, d).unwrap(), part.count());
        }

        #[test]
        fn profile_is_quasi_subadditive(w in random_path()) {
            let p = k_path_profile(&w, 12).unwrap();
            prop_assert!(p.is_monotone(0.0));
            prop_assert!(p.subadditivity_ratio() <= 1.0 + 1e-12);
            prop_assert!(p.entries().iter().all(|(_, v)| *v <= w.sup_norm()));
        }

        #[test]
        fn variation_controls_counts(w in random_path(), p in 1.0f64..4.0) {
            let v = p_variation(&w, p).unwrap();
            prop_assume!(v > 1e-9);
            let unit = w.scaled(1.0 / v).unwrap();
            for n in 0..8u32 {
                // slack keeps exact ties from splitting on rounding
                let c = count_n(&unit, 2f64.powf(-(n as f64) / p) * (1.0 + 1e-9)).unwrap();
                prop_assert!(c as f64 <= 2f64.powi(n as i32) + 1e-9, "n={} c={}", n, c);
            }
        }

        #[test]
        fn holder_bounds_variation(w in random_path(), p in 1.0f64..4.0) {
            let v = p_variation(&w, p).unwrap();
            let h = holder_seminorm(&w, 1.0 / p).unwrap();
            prop_assert!(v <= h * w.horizon().powf(1.0 / p) * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn variation_dp_matches_all_knot_subsets(w in random_path(), p in 1.0f64..3.0) {
            let v = w.values();
            let k = v.len();
            let mut brute = 0.0f64;
            for mask in 0u32..(1 << (k - 2)) {
                let mut idx = vec![0];
                idx.extend((1..k - 1).filter(|i| mask >> (i - 1) & 1 == 1));
                idx.push(k - 1);
                let s: f64 = idx.windows(2).map(|w| (v[w[1]] - v[w[0]]).abs().powf(p)).sum();
                brute = brute.max(s);
            }
            prop_assert!((p_variation(&w, p).unwrap() - brute.powf(1.0 / p)).abs() < 1e-9);
        }
    }
}
