//! Correlated Brownian paths, bridges, and first-quadrant excursions.
//!
//! All paths are discretized on a uniform grid of spacing `step`. The two
//! coordinates `(L, R)` have per-unit-time covariance `[[1, c], [c, 1]]`
//! with `c = -cos(pi * gamma^2 / 4)`, so `gamma = sqrt(2)` gives independent
//! coordinates and the correlation sweeps (-1, 1) as `gamma` sweeps (0, 2).
//!
//! Conditioned excursions (sphere and disk topologies) are produced exactly
//! at grid resolution: a coordinate bridging 0 -> 0 is made nonnegative by a
//! Vervaat rotation at its argmin, which maps the discrete Gaussian bridge
//! law onto the nonnegative-conditioned law with no rejection (increments of
//! a Gaussian bridge are exchangeable, and exactly one cyclic rotation of a
//! bridge with a unique minimum is nonnegative). The remaining coordinate is
//! then accepted or rejected on its floor event, which conditions the joint
//! law exactly. Whole-path rejection without the rotation has acceptance
//! probability decaying like n^{-3/2} and is unusable at the grid sizes this
//! crate targets.
//!
//! Besides the grid samples, every path carries one infimum per cell and
//! per coordinate, drawn from the conditional law of a Brownian bridge
//! minimum given the cell's endpoint values (floored for conditioned
//! topologies). The map construction consumes these infima, not the grid
//! minima: grid minima tie exactly at every local minimum of the sampled
//! values (the two flanking cells share the minimizing sample), and under
//! the `<=` adjacency rule such ties produce crossing chords that destroy
//! the planar structure. Bridge-minimum sampling is the exact continuum law
//! of each coordinate at cell resolution and makes all infima almost surely
//! distinct. The two coordinates' infima within a cell are drawn
//! conditionally independently given the endpoints, which is exact whenever
//! the coordinates are independent (gamma = sqrt 2).

use crate::error::Error;
use crate::rng::Streams;
use crate::Result;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Which surface the path drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Topology {
    Plane,
    Sphere,
    Disk,
}

impl Topology {
    pub fn as_u8(self) -> u8 {
        match self {
            Topology::Plane => 0,
            Topology::Sphere => 1,
            Topology::Disk => 2,
        }
    }

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Topology::Plane),
            1 => Ok(Topology::Sphere),
            2 => Ok(Topology::Disk),
            _ => Err(Error::Format(format!("unknown topology code {v}"))),
        }
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::Plane => write!(f, "plane"),
            Topology::Sphere => write!(f, "sphere"),
            Topology::Disk => write!(f, "disk"),
        }
    }
}

/// A discretized correlated Brownian path.
///
/// `l` and `r` hold the coordinate values at the grid times; both have
/// `n_cells() + 1` entries. Grid times are `grid_origin + i * step`; for the
/// sphere and disk the origin is 0 and the last time is exactly
/// `total_time`, for the plane the grid is `step * (Z + index_shift)`
/// intersected with the simulation window.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    pub gamma: f64,
    pub step: f64,
    pub topology: Topology,
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    /// Duration covered: the disk area parameter, 1 for the sphere, the
    /// window length for the plane.
    pub total_time: f64,
    /// Disk boundary-length parameter; 0 for other topologies.
    pub boundary_length: f64,
    /// Uniform grid offset in units of `step` (plane only, else 0).
    pub index_shift: f64,
    pub seed: u64,
    /// Time of the first grid sample (0 except for plane windows).
    pub grid_origin: f64,
    /// Per-cell infima of `L` (length `n_cells`), bridging the grid samples.
    pub cell_inf_l: Vec<f64>,
    /// Per-cell infima of `R`.
    pub cell_inf_r: Vec<f64>,
}

impl BrownianPath {
    /// Number of grid cells (vertices of the derived map).
    pub fn n_cells(&self) -> usize {
        self.l.len() - 1
    }

    /// Time of grid sample `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.grid_origin + self.step * i as f64
    }

    /// The correlation `-cos(pi * gamma^2 / 4)` of the increments.
    pub fn correlation(&self) -> f64 {
        increment_correlation(self.gamma)
    }

    /// Floor tolerance used by the conditioned samplers.
    pub fn floor_tol(&self) -> f64 {
        floor_tol(self.step)
    }

    /// Keep every `stride`-th grid sample; coarse cell infima are the minima
    /// of the fine infima they cover, so the two resolutions stay exactly
    /// coupled. Used for two-resolution experiments.
    pub fn downsample(&self, stride: usize) -> Result<BrownianPath> {
        if stride == 0 || self.n_cells() % stride != 0 {
            return Err(Error::Domain(format!(
                "downsample stride {stride} must divide the cell count {}",
                self.n_cells()
            )));
        }
        let take = |v: &[f64]| v.iter().step_by(stride).copied().collect::<Vec<_>>();
        let combine = |v: &[f64]| {
            v.chunks(stride)
                .map(|c| c.iter().copied().fold(f64::INFINITY, f64::min))
                .collect::<Vec<_>>()
        };
        Ok(BrownianPath {
            step: self.step * stride as f64,
            l: take(&self.l),
            r: take(&self.r),
            cell_inf_l: combine(&self.cell_inf_l),
            cell_inf_r: combine(&self.cell_inf_r),
            ..self.clone()
        })
    }

    /// Replace the cell infima by the pairwise grid minima. Synthetic and
    /// degenerate paths (tie stress cases) use this; sampled paths carry
    /// bridge-minimum infima instead.
    pub fn attach_grid_infima(&mut self) {
        self.cell_inf_l = self.l.windows(2).map(|w| w[0].min(w[1])).collect();
        self.cell_inf_r = self.r.windows(2).map(|w| w[0].min(w[1])).collect();
    }

    /// Draw the cell infima from the conditional bridge-minimum law given
    /// the grid samples, floored for conditioned topologies. Deterministic
    /// in the stored seed, so a reloaded path rebuilds the same map.
    pub fn attach_sampled_infima(&mut self) {
        let mut rng = Streams::new(self.seed).stream(INFIMA_STREAM);
        let floor = match self.topology {
            Topology::Plane => None,
            _ => Some(-self.floor_tol()),
        };
        let n = self.n_cells();
        let mut il = Vec::with_capacity(n);
        let mut ir = Vec::with_capacity(n);
        for k in 0..n {
            let u1: f64 = rng.gen_range(0.0..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            il.push(bridge_minimum(self.l[k], self.l[k + 1], self.step, floor, u1));
            ir.push(bridge_minimum(self.r[k], self.r[k + 1], self.step, floor, u2));
        }
        self.cell_inf_l = il;
        self.cell_inf_r = ir;
    }
}

/// Stream id reserved for the infimum draws (attempt streams stay low).
const INFIMA_STREAM: u64 = 0x4000_0000_0000_0000;

/// Inverse-CDF sample of the minimum of a Brownian bridge from `a` to `b`
/// over duration `dt` (unit diffusivity), optionally conditioned to stay
/// at or above `floor`. The CDF is `P[min <= m] = exp(-2(a-m)(b-m)/dt)` for
/// `m <= min(a, b)`.
fn bridge_minimum(a: f64, b: f64, dt: f64, floor: Option<f64>, u: f64) -> f64 {
    let target = match floor {
        Some(f) => {
            let f0 = (-2.0 * (a - f) * (b - f) / dt).exp();
            f0 + u * (1.0 - f0)
        }
        None => u,
    };
    // Solve (a - m)(b - m) = q with the root below min(a, b).
    let q = -0.5 * dt * target.ln();
    0.5 * ((a + b) - ((a - b) * (a - b) + 4.0 * q).sqrt())
}

/// Attempt statistics from a rejection sampler.
#[derive(Debug, Clone, Copy)]
pub struct SampleStats {
    pub attempts: u64,
}

pub const DEFAULT_ATTEMPT_BUDGET: u64 = 10_000_000;

pub fn increment_correlation(gamma: f64) -> f64 {
    -(std::f64::consts::PI * gamma * gamma / 4.0).cos()
}

fn floor_tol(step: f64) -> f64 {
    1e-8 * step.sqrt()
}

fn check_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in the open interval (0, 2), got {gamma}"
        )));
    }
    Ok(increment_correlation(gamma))
}

/// Cholesky factor `A` (lower triangular) with `A A^T = [[1, c], [c, 1]]`,
/// `c = -cos(pi gamma^2 / 4)`. Colors i.i.d. standard Gaussian increments.
pub fn covariance_factor(gamma: f64) -> Result<[[f64; 2]; 2]> {
    let c = check_gamma(gamma)?;
    Ok([[1.0, 0.0], [c, (1.0 - c * c).sqrt()]])
}

/// One correlated Gaussian increment pair with per-step variance `dt`.
#[inline]
fn draw_increment<R: Rng>(rng: &mut R, chol: &[[f64; 2]; 2], sqrt_dt: f64) -> (f64, f64) {
    let g0: f64 = rng.sample(StandardNormal);
    let g1: f64 = rng.sample(StandardNormal);
    (
        sqrt_dt * chol[0][0] * g0,
        sqrt_dt * (chol[1][0] * g0 + chol[1][1] * g1),
    )
}

/// Exact discrete Gaussian bridge pair on `n` steps of size `dt`, from
/// `(0, 0)` to `(end_l, end_r)`: a forward walk minus the linear interpolant
/// of its terminal error. Endpoints are set exactly.
fn correlated_bridge<R: Rng>(
    n: usize,
    dt: f64,
    chol: &[[f64; 2]; 2],
    end_l: f64,
    end_r: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let sqrt_dt = dt.sqrt();
    let mut l = Vec::with_capacity(n + 1);
    let mut r = Vec::with_capacity(n + 1);
    l.push(0.0);
    r.push(0.0);
    let (mut sl, mut sr) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let (dl, dr) = draw_increment(rng, chol, sqrt_dt);
        sl += dl;
        sr += dr;
        l.push(sl);
        r.push(sr);
    }
    let (err_l, err_r) = (sl - end_l, sr - end_r);
    let inv_n = 1.0 / n as f64;
    for k in 1..n {
        let f = k as f64 * inv_n;
        l[k] -= f * err_l;
        r[k] -= f * err_r;
    }
    l[n] = end_l;
    r[n] = end_r;
    (l, r)
}

/// Index of the minimum value (first occurrence).
fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}

/// Cyclically rotate a bridge's increments so the rotation index becomes
/// time 0. `end` is the bridge's terminal value (added on wrap-around).
/// Endpoints of the result are set exactly to `0` and `end`.
fn rotate_bridge(v: &[f64], m: usize, end: f64) -> Vec<f64> {
    let n = v.len() - 1;
    if m == 0 {
        return v.to_vec();
    }
    let base = v[m];
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n - m {
        out.push(v[m + k] - base);
    }
    for j in 1..=m {
        out.push(end + v[j] - base);
    }
    out[0] = 0.0;
    out[n] = end;
    out
}

/// Vervaat-rotate a single 0 -> 0 bridge at its argmin.
fn vervaat_single(v: &[f64]) -> Vec<f64> {
    let n = v.len() - 1;
    let m = argmin(v);
    rotate_bridge(v, if m == n { 0 } else { m }, 0.0)
}

/// Vervaat-rotate a bridge pair at the argmin of one coordinate.
/// The rotated coordinate becomes nonnegative; the joint law is the bridge
/// pair conditioned on that coordinate staying >= 0.
fn vervaat_pair(
    l: &[f64],
    r: &[f64],
    end_l: f64,
    end_r: f64,
    rotate_on_r: bool,
) -> (Vec<f64>, Vec<f64>) {
    let m = if rotate_on_r { argmin(r) } else { argmin(l) };
    let n = l.len() - 1;
    let m = if m == n { 0 } else { m };
    (rotate_bridge(l, m, end_l), rotate_bridge(r, m, end_r))
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Sample an unconditioned correlated path on the grid
/// `step * (Z + theta)` intersected with `[t_min, t_max]`, anchored so the
/// grid point nearest 0 has value exactly `(0, 0)`. `theta` is drawn
/// uniformly on `[0, 1)` from the seed.
pub fn sample_plane(
    gamma: f64,
    step: f64,
    window: (f64, f64),
    seed: u64,
) -> Result<BrownianPath> {
    let chol = covariance_factor(gamma)?;
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let (t_min, t_max) = window;
    if !(t_min < 0.0 && 0.0 < t_max) {
        return Err(Error::Domain(format!(
            "window must straddle 0: t_min < 0 < t_max, got [{t_min}, {t_max}]"
        )));
    }
    let streams = Streams::new(seed);
    let theta: f64 = streams.stream(0).gen_range(0.0..1.0);
    let k_min = (t_min / step - theta).ceil() as i64;
    let k_max = (t_max / step - theta).floor() as i64;
    if k_max - k_min < 1 {
        return Err(Error::Domain(format!(
            "window [{t_min}, {t_max}] holds fewer than 2 grid points at step {step}"
        )));
    }
    let n_pts = (k_max - k_min + 1) as usize;
    let sqrt_dt = step.sqrt();
    let mut rng = streams.stream(1);
    let mut l = Vec::with_capacity(n_pts);
    let mut r = Vec::with_capacity(n_pts);
    let (mut sl, mut sr) = (0.0f64, 0.0f64);
    l.push(0.0);
    r.push(0.0);
    for _ in 1..n_pts {
        let (dl, dr) = draw_increment(&mut rng, &chol, sqrt_dt);
        sl += dl;
        sr += dr;
        l.push(sl);
        r.push(sr);
    }
    // Re-anchor at the grid point nearest 0.
    let grid_origin = step * (k_min as f64 + theta);
    let mut anchor = 0usize;
    for i in 0..n_pts {
        if (grid_origin + step * i as f64).abs() < (grid_origin + step * anchor as f64).abs() {
            anchor = i;
        }
    }
    let (al, ar) = (l[anchor], r[anchor]);
    for i in 0..n_pts {
        l[i] -= al;
        r[i] -= ar;
    }
    l[anchor] = 0.0;
    r[anchor] = 0.0;
    let mut path = BrownianPath {
        gamma,
        step,
        topology: Topology::Plane,
        l,
        r,
        total_time: t_max - t_min,
        boundary_length: 0.0,
        index_shift: theta,
        seed,
        grid_origin,
        cell_inf_l: Vec::new(),
        cell_inf_r: Vec::new(),
    };
    path.attach_sampled_infima();
    Ok(path)
}

/// Grid size for a conditioned path: `step` is snapped to the nearest exact
/// divisor of the duration so that endpoints land on the grid.
fn grid_cells(total: f64, step: f64) -> Result<usize> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let n = (total / step).round() as i64;
    if n < 2 {
        return Err(Error::Domain(format!(
            "step {step} leaves fewer than 2 cells over duration {total}"
        )));
    }
    Ok(n as usize)
}

/// Correlated excursion pair on `[0, 1]` from `(0,0)` to `(0,0)` with both
/// coordinates `>= -floor_tol` at every grid point. Exact at grid
/// resolution; see the module docs for the Vervaat construction.
pub fn sample_sphere_excursion(gamma: f64, step: f64, seed: u64) -> Result<BrownianPath> {
    sample_sphere_excursion_with_stats(gamma, step, seed, DEFAULT_ATTEMPT_BUDGET).map(|(p, _)| p)
}

pub fn sample_sphere_excursion_with_stats(
    gamma: f64,
    step: f64,
    seed: u64,
    budget: u64,
) -> Result<(BrownianPath, SampleStats)> {
    let chol = covariance_factor(gamma)?;
    if step > 1e-2 {
        return Err(Error::Domain(format!(
            "sphere excursions require step <= 1e-2, got {step}"
        )));
    }
    let n = grid_cells(1.0, step)?;
    let dt = 1.0 / n as f64;
    let tol = floor_tol(dt);
    let streams = Streams::new(seed);
    let c = chol[1][0];

    let path = |l: Vec<f64>, r: Vec<f64>| {
        let mut p = BrownianPath {
            gamma,
            step: dt,
            topology: Topology::Sphere,
            l,
            r,
            total_time: 1.0,
            boundary_length: 0.0,
            index_shift: 0.0,
            seed,
            grid_origin: 0.0,
            cell_inf_l: Vec::new(),
            cell_inf_r: Vec::new(),
        };
        p.attach_sampled_infima();
        p
    };

    if c.abs() < 1e-14 {
        // Independent coordinates: Vervaat each separately, no rejection.
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let (l, _) = correlated_bridge(n, dt, &id, 0.0, 0.0, &mut streams.stream(1));
        let (r, _) = correlated_bridge(n, dt, &id, 0.0, 0.0, &mut streams.stream(2));
        let l = vervaat_single(&l);
        let r = vervaat_single(&r);
        return Ok((path(l, r), SampleStats { attempts: 1 }));
    }

    for attempt in 0..budget {
        let mut rng = streams.stream(attempt + 1);
        let (l, r) = correlated_bridge(n, dt, &chol, 0.0, 0.0, &mut rng);
        let (l, r) = vervaat_pair(&l, &r, 0.0, 0.0, false);
        if min_of(&r) >= -tol {
            return Ok((path(l, r), SampleStats { attempts: attempt + 1 }));
        }
    }
    Err(Error::SamplingBudget {
        attempts: budget,
        context: format!("sphere excursion gamma={gamma} step={dt}"),
    })
}

/// Correlated excursion pair on `[0, area]` from `(0,0)` to
/// `(boundary, 0)`, both coordinates `>= -floor_tol` everywhere. The pair is
/// Vervaat-rotated at the argmin of `R` (making `R` nonnegative exactly) and
/// accepted on the floor event for `L`.
pub fn sample_disk_excursion(
    gamma: f64,
    step: f64,
    area: f64,
    boundary: f64,
    seed: u64,
) -> Result<BrownianPath> {
    sample_disk_excursion_with_stats(gamma, step, area, boundary, seed, DEFAULT_ATTEMPT_BUDGET)
        .map(|(p, _)| p)
}

pub fn sample_disk_excursion_with_stats(
    gamma: f64,
    step: f64,
    area: f64,
    boundary: f64,
    seed: u64,
    budget: u64,
) -> Result<(BrownianPath, SampleStats)> {
    let chol = covariance_factor(gamma)?;
    if !(area > 0.0) {
        return Err(Error::Domain(format!("disk area must be positive, got {area}")));
    }
    if !(boundary > 0.0) {
        return Err(Error::Domain(format!(
            "disk boundary length must be positive, got {boundary}"
        )));
    }
    let n = grid_cells(area, step)?;
    let dt = area / n as f64;
    let tol = floor_tol(dt);
    let streams = Streams::new(seed);

    for attempt in 0..budget {
        let mut rng = streams.stream(attempt + 1);
        let (l, r) = correlated_bridge(n, dt, &chol, boundary, 0.0, &mut rng);
        let (l, r) = vervaat_pair(&l, &r, boundary, 0.0, true);
        if min_of(&l) >= -tol {
            let mut p = BrownianPath {
                gamma,
                step: dt,
                topology: Topology::Disk,
                l,
                r,
                total_time: area,
                boundary_length: boundary,
                index_shift: 0.0,
                seed,
                grid_origin: 0.0,
                cell_inf_l: Vec::new(),
                cell_inf_r: Vec::new(),
            };
            p.attach_sampled_infima();
            return Ok((p, SampleStats { attempts: attempt + 1 }));
        }
    }
    Err(Error::SamplingBudget {
        attempts: budget,
        context: format!("disk excursion gamma={gamma} step={dt} area={area} boundary={boundary}"),
    })
}

/// Brute-force conditioned pair by whole-path rejection. Test oracle for the
/// Vervaat construction; acceptance decays too fast for production sizes.
#[doc(hidden)]
pub fn rejection_excursion_oracle(
    gamma: f64,
    n: usize,
    dt: f64,
    end_l: f64,
    end_r: f64,
    seed: u64,
    budget: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let chol = covariance_factor(gamma)?;
    let tol = floor_tol(dt);
    let streams = Streams::new(seed);
    for attempt in 0..budget {
        let mut rng = streams.stream(attempt + 1);
        let (l, r) = correlated_bridge(n, dt, &chol, end_l, end_r, &mut rng);
        if min_of(&l) >= -tol && min_of(&r) >= -tol {
            return Ok((l, r));
        }
    }
    Err(Error::SamplingBudget { attempts: budget, context: "oracle".into() })
}
