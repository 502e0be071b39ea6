//! Curves and metrics modulo time reparameterization.
//!
//! `cmp_distance` is the discrete Fréchet distance between the vertex
//! samples of two polylines: the exact discretization of the
//! inf-over-increasing-homeomorphisms sup-distance for curves sampled at
//! their vertices. `cmp_distance_loc` is its exponentially weighted local
//! version for curves started near the origin: the integrand at radius `r`
//! compares the curves stopped at their first exits from the ball of radius
//! `r`, capped at 1 and weighted by `e^{-r}`.

use crate::error::Error;
use crate::Result;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Walk,
    SpaceFilling,
    Brownian,
    Synthetic,
}

/// A time-stamped polyline in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedCurve {
    pub points: Vec<Complex64>,
    pub times: Vec<f64>,
    pub kind: CurveKind,
}

impl EmbeddedCurve {
    pub fn new(points: Vec<Complex64>, times: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if points.len() != times.len() {
            return Err(Error::Domain(format!(
                "points ({}) and times ({}) differ in length",
                points.len(),
                times.len()
            )));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("times must be nondecreasing".into()));
        }
        Ok(Self { points, times, kind })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Drop repeated time stamps (keeping the first point of each run), so
    /// times are strictly increasing.
    pub fn dedup_times(&self) -> EmbeddedCurve {
        let mut points = Vec::with_capacity(self.len());
        let mut times = Vec::with_capacity(self.len());
        for (p, t) in self.points.iter().zip(&self.times) {
            if times.last().map_or(true, |&last: &f64| *t > last) {
                points.push(*p);
                times.push(*t);
            }
        }
        EmbeddedCurve { points, times, kind: self.kind }
    }

    /// Uniform subsample down to at most `max_points` vertices, always
    /// keeping the first and last.
    pub fn subsample(&self, max_points: usize) -> EmbeddedCurve {
        assert!(max_points >= 2);
        if self.len() <= max_points {
            return self.clone();
        }
        let stride = (self.len() + max_points - 1) / max_points;
        let mut points = Vec::new();
        let mut times = Vec::new();
        let mut i = 0;
        while i < self.len() {
            points.push(self.points[i]);
            times.push(self.times[i]);
            i += stride;
        }
        if *times.last().unwrap() != *self.times.last().unwrap() {
            points.push(*self.points.last().unwrap());
            times.push(*self.times.last().unwrap());
        }
        EmbeddedCurve { points, times, kind: self.kind }
    }

    /// Prefix up to (and including) the first point outside the open ball
    /// of radius `r` around the origin; the whole curve if it never leaves.
    pub fn stopped_at_exit(&self, r: f64) -> EmbeddedCurve {
        let mut end = self.len();
        for (i, p) in self.points.iter().enumerate() {
            if p.norm() > r {
                end = i + 1;
                break;
            }
        }
        EmbeddedCurve {
            points: self.points[..end].to_vec(),
            times: self.times[..end].to_vec(),
            kind: self.kind,
        }
    }
}

/// Guard for the Fréchet dynamic program.
pub const CMP_SIZE_GUARD: u64 = 100_000_000;

/// Discrete Fréchet distance between the vertex samples of two polylines:
/// minimum over monotone couplings of the maximum pointwise distance.
pub fn cmp_distance(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<f64> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::Domain("curves must be nonempty".into()));
    }
    let (n, m) = (c1.len(), c2.len());
    if (n as u64) * (m as u64) > CMP_SIZE_GUARD {
        return Err(Error::SizeGuard(format!(
            "Fréchet table {n} x {m} exceeds {CMP_SIZE_GUARD}"
        )));
    }
    let d = |i: usize, j: usize| (c1.points[i] - c2.points[j]).norm();
    // Row-rolling DP over the monotone coupling lattice.
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    prev[0] = d(0, 0);
    for j in 1..m {
        prev[j] = prev[j - 1].max(d(0, j));
    }
    for i in 1..n {
        cur[0] = prev[0].max(d(i, 0));
        for j in 1..m {
            let best = prev[j].min(prev[j - 1]).min(cur[j - 1]);
            cur[j] = best.max(d(i, j));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m - 1])
}

/// Local version for curves started near 0: trapezoid rule on `r_grid` of
/// `e^{-r} * (1 ∧ frechet(stopped curves))`. Grid points beyond the radius
/// where both curves are exhausted contribute a constant integrand; the
/// integral is truncated at the last grid point.
pub fn cmp_distance_loc(c1: &EmbeddedCurve, c2: &EmbeddedCurve, r_grid: &[f64]) -> Result<f64> {
    if r_grid.is_empty() {
        return Err(Error::Domain("r grid must be nonempty".into()));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("r grid must be strictly increasing".into()));
    }
    let reach1 = c1.points.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let reach2 = c2.points.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let exhausted = reach1.max(reach2);
    let mut full_value: Option<f64> = None;
    let mut integrand = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let v = if r >= exhausted {
            if full_value.is_none() {
                full_value = Some(cmp_distance(c1, c2)?.min(1.0));
            }
            full_value.unwrap()
        } else {
            cmp_distance(&c1.stopped_at_exit(r), &c2.stopped_at_exit(r))?.min(1.0)
        };
        integrand.push((-r).exp() * v);
    }
    let mut acc = 0.0;
    for k in 1..r_grid.len() {
        acc += 0.5 * (integrand[k - 1] + integrand[k]) * (r_grid[k] - r_grid[k - 1]);
    }
    Ok(acc)
}

/// Evenly spaced grid for the local metric.
pub fn default_r_grid(r_max: f64, step: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut r = 1.0;
    while r <= r_max + 1e-12 {
        grid.push(r);
        r += step;
    }
    grid
}
