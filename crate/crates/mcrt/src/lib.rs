//! Simulation and analysis toolkit for mated-CRT random planar maps.
//!
//! The pipeline, end to end:
//!
//! 1. [`brownian`] — sample a correlated two-dimensional Brownian path
//!    (plane), or a conditioned excursion staying in the first quadrant
//!    (sphere, disk), discretized on a uniform grid.
//! 2. [`map`] — turn the path into a multigraph: one vertex per grid cell,
//!    edges where the running-infimum adjacency condition holds in either
//!    coordinate, double edges where it holds in both. Construction is a
//!    linear-time monotone-stack sweep with a quadratic brute-force oracle
//!    for verification.
//! 3. [`rotation`] — the planar rotation system implied by the arc diagram
//!    (one coordinate drawn above the time axis, one below), face tracing,
//!    and Euler characteristic.
//! 4. [`harmonic`] — discrete Dirichlet problems on the map (conjugate
//!    gradients on the multiplicity-weighted graph Laplacian) and random-walk
//!    boundary hitting probabilities.
//! 5. [`embed`] — Tutte (harmonic) embeddings: boundary vertices on the unit
//!    circle by hitting probability, interior vertices by harmonic extension;
//!    disk, plane-window, and sphere-window variants with their pinning
//!    normalizations.
//! 6. [`walk`], [`curve`] — simple random walks on the map, their embedded
//!    polylines, and metrics on curves modulo time reparameterization
//!    (discrete Fréchet and its exponentially weighted local version).
//! 7. [`diag`], [`repro`] — checkable functionals (Dirichlet energy, degree
//!    tails, face diameters, two-scale measure consistency) and the
//!    batch verification suite behind `mcrt repro`.
//!
//! File formats, CSV/SVG export, and the CLI configuration live in [`io`]
//! and [`config`].

pub mod brownian;
pub mod config;
pub mod curve;
pub mod diag;
pub mod embed;
pub mod error;
pub mod harmonic;
pub mod io;
pub mod map;
pub mod repro;
pub mod rng;
pub mod rotation;
pub mod stats;
pub mod walk;

pub use brownian::{BrownianPath, Topology};
pub use curve::{CurveKind, EmbeddedCurve};
pub use embed::TutteEmbedding;
pub use error::Error;
pub use harmonic::HarmonicField;
pub use map::MatedCrtMap;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Initialize the global rayon pool, honoring the `MCRT_THREADS` env var.
///
/// Calling this more than once is fine; only the first call wins.
pub fn init_threads() {
    if let Ok(v) = std::env::var("MCRT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
