//! Simple random walks on the map and their embedded curves.
//!
//! A step from `x` picks an incident edge with probability
//! `mult / deg(x)`, so a double edge is twice as likely as a simple one.
//! The walk kernel expands multiplicities into a flat slot array for O(1)
//! steps, which matters for the Monte Carlo experiments.

use crate::curve::{CurveKind, EmbeddedCurve};
use crate::embed::TutteEmbedding;
use crate::error::Error;
use crate::map::MatedCrtMap;
use crate::rng::Streams;
use crate::stats::circle_ks_uniform;
use crate::Result;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

/// Hard cap on steps per walk.
pub const DEFAULT_STEP_CAP: u64 = 100_000_000;

/// When to stop a walk.
#[derive(Debug, Clone, Copy)]
pub enum StopRule<'a> {
    /// Stop on the first visit to a boundary vertex (disk maps).
    Boundary,
    /// Stop after exactly this many steps.
    StepCount(u64),
    /// Stop when the embedded position leaves the ball of this radius
    /// around the origin (a step onto an unembedded vertex also stops).
    ExitRadius { embedding: &'a TutteEmbedding, radius: f64 },
}

/// Precomputed transition table: one slot per edge side (double edges get
/// two slots), uniform choice over slots.
pub struct WalkKernel {
    slots: Vec<u32>,
    offsets: Vec<u64>,
    boundary: Vec<bool>,
}

impl WalkKernel {
    pub fn new(map: &MatedCrtMap) -> Self {
        let n = map.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut slots = Vec::new();
        offsets.push(0u64);
        for v in 0..n as u32 {
            let (nb, ml, _) = map.adj(v);
            for (&w, &m) in nb.iter().zip(ml) {
                for _ in 0..m {
                    slots.push(w);
                }
            }
            offsets.push(slots.len() as u64);
        }
        WalkKernel { slots, offsets, boundary: map.boundary_mask() }
    }

    #[inline]
    fn step<R: Rng>(&self, v: u32, rng: &mut R) -> u32 {
        let a = self.offsets[v as usize];
        let b = self.offsets[v as usize + 1];
        self.slots[rng.gen_range(a..b) as usize]
    }

    /// Run one walk; the returned sequence includes the start and the
    /// stopping vertex.
    pub fn walk<R: Rng>(
        &self,
        start: u32,
        stop: &StopRule,
        cap: u64,
        rng: &mut R,
    ) -> Result<Vec<u32>> {
        let stopped = |v: u32, steps: u64| -> bool {
            match stop {
                StopRule::Boundary => self.boundary[v as usize],
                StopRule::StepCount(k) => steps >= *k,
                StopRule::ExitRadius { embedding, radius } => {
                    match embedding.position(v) {
                        Some(z) => z.norm() > *radius,
                        None => true,
                    }
                }
            }
        };
        if let StopRule::Boundary = stop {
            if !self.boundary.iter().any(|&b| b) {
                return Err(Error::Domain("boundary stop rule on a map without boundary".into()));
            }
        }
        let mut seq = vec![start];
        let mut v = start;
        let mut steps = 0u64;
        while !stopped(v, steps) {
            if steps >= cap {
                return Err(Error::WalkBudget(cap));
            }
            v = self.step(v, rng);
            steps += 1;
            seq.push(v);
        }
        Ok(seq)
    }

    /// Terminal vertex only; avoids building the sequence.
    pub fn walk_endpoint<R: Rng>(
        &self,
        start: u32,
        stop: &StopRule,
        cap: u64,
        rng: &mut R,
    ) -> Result<(u32, u64)> {
        if let StopRule::Boundary = stop {
            if !self.boundary.iter().any(|&b| b) {
                return Err(Error::Domain("boundary stop rule on a map without boundary".into()));
            }
        }
        let mut v = start;
        let mut steps = 0u64;
        loop {
            let done = match stop {
                StopRule::Boundary => self.boundary[v as usize],
                StopRule::StepCount(k) => steps >= *k,
                StopRule::ExitRadius { embedding, radius } => match embedding.position(v) {
                    Some(z) => z.norm() > *radius,
                    None => true,
                },
            };
            if done {
                return Ok((v, steps));
            }
            if steps >= cap {
                return Err(Error::WalkBudget(cap));
            }
            v = self.step(v, rng);
            steps += 1;
        }
    }
}

/// Simple random walk from `start` under the given stop rule.
pub fn simulate_walk(
    map: &MatedCrtMap,
    start: u32,
    stop: &StopRule,
    seed: u64,
) -> Result<Vec<u32>> {
    if start as usize >= map.n() {
        return Err(Error::Domain(format!("start vertex {start} out of range")));
    }
    let kernel = WalkKernel::new(map);
    kernel.walk(start, stop, DEFAULT_STEP_CAP, &mut Streams::new(seed).stream(0))
}

/// Embed a walk: positions from the embedding, times = step index.
pub fn embed_walk(walk: &[u32], emb: &TutteEmbedding) -> Result<EmbeddedCurve> {
    let mut points = Vec::with_capacity(walk.len());
    for &v in walk {
        match emb.position(v) {
            Some(z) => points.push(z),
            None => {
                return Err(Error::Domain(format!("walk visits unembedded vertex {v}")));
            }
        }
    }
    EmbeddedCurve::new(points, (0..walk.len()).map(|i| i as f64).collect(), CurveKind::Walk)
}

/// Truncate a walk at its first unembedded vertex.
pub fn truncate_to_embedded(walk: &[u32], emb: &TutteEmbedding) -> Vec<u32> {
    let end = walk
        .iter()
        .position(|&v| !emb.embedded[v as usize])
        .unwrap_or(walk.len());
    walk[..end.max(1)].to_vec()
}

/// Result of the exit-law experiment.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExitLawReport {
    pub walks: u64,
    /// Rotation-minimized KS statistic of the embedded exit angles against
    /// the closed-form disk harmonic measure seen from the start position.
    pub ks: f64,
    /// Uniformized exit samples in [0, 1) (harmonic-measure CDF values).
    pub samples: Vec<f64>,
    pub start_position: (f64, f64),
    pub mean_steps: f64,
}

/// Harmonic-measure CDF value of an exit angle seen from `z0` in the unit
/// disk: the Möbius map fixing the disk and sending `z0` to 0 turns
/// harmonic measure into the uniform law on the circle.
pub fn harmonic_measure_u(z0: Complex64, angle: f64) -> f64 {
    let w = Complex64::from_polar(1.0, angle);
    let t = (w - z0) / (Complex64::new(1.0, 0.0) - z0.conj() * w);
    (t.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0)
}

/// Run `walks` absorbing walks from `start` and compare the embedded exit
/// angles with the disk harmonic measure from the embedded start position.
/// Walks fan out across threads on per-walk RNG streams.
pub fn exit_law_vs_harmonic_measure(
    map: &MatedCrtMap,
    emb: &TutteEmbedding,
    start: u32,
    walks: u64,
    seed: u64,
) -> Result<ExitLawReport> {
    if map.topology != crate::brownian::Topology::Disk {
        return Err(Error::Domain("exit-law experiment requires a disk map".into()));
    }
    let mask = map.boundary_mask();
    if mask[start as usize] {
        return Err(Error::Domain("start vertex lies on the boundary".into()));
    }
    let kernel = WalkKernel::new(map);
    let streams = Streams::new(seed);
    let z0 = emb
        .position(start)
        .ok_or_else(|| Error::Domain("start vertex is not embedded".into()))?;
    let results: Vec<(f64, u64)> = (0..walks)
        .into_par_iter()
        .map(|k| {
            let mut rng = streams.stream(k);
            let (exit, steps) = kernel
                .walk_endpoint(start, &StopRule::Boundary, DEFAULT_STEP_CAP, &mut rng)
                .expect("absorbing walk on a finite disk map terminates");
            let angle = emb.positions[exit as usize].arg();
            (harmonic_measure_u(z0, angle), steps)
        })
        .collect();
    let samples: Vec<f64> = results.iter().map(|&(u, _)| u).collect();
    let mean_steps =
        results.iter().map(|&(_, s)| s as f64).sum::<f64>() / walks.max(1) as f64;
    let ks = circle_ks_uniform(&samples);
    Ok(ExitLawReport {
        walks,
        ks,
        samples,
        start_position: (z0.re, z0.im),
        mean_steps,
    })
}

/// Independent 2D Brownian reference curve with per-step mean squared
/// displacement `msd` (each coordinate gets variance `msd / 2` per step).
pub fn brownian_reference(steps: usize, msd: f64, seed: u64) -> EmbeddedCurve {
    use rand_distr::StandardNormal;
    let mut rng = Streams::new(seed).stream(0);
    let sd = (msd / 2.0).sqrt();
    let mut points = Vec::with_capacity(steps + 1);
    let mut z = Complex64::new(0.0, 0.0);
    points.push(z);
    for _ in 0..steps {
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        z += Complex64::new(sd * dx, sd * dy);
        points.push(z);
    }
    EmbeddedCurve {
        points,
        times: (0..=steps).map(|i| i as f64).collect(),
        kind: CurveKind::Brownian,
    }
}

/// Mean squared step displacement of an embedded curve.
pub fn mean_square_step(curve: &EmbeddedCurve) -> f64 {
    if curve.len() < 2 {
        return 0.0;
    }
    let n = curve.len() - 1;
    curve
        .points
        .windows(2)
        .map(|w| (w[1] - w[0]).norm_sqr())
        .sum::<f64>()
        / n as f64
}
