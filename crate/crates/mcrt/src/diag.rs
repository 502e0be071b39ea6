//! Checkable functionals: Dirichlet energy, degree-tail fits, face
//! diameters, and two-scale measure consistency.

use crate::brownian::BrownianPath;
use crate::embed::{embed_disk, vertex_measure, EmbedOptions, TutteEmbedding};
use crate::error::Error;
use crate::map::{build_map, MatedCrtMap};
use crate::rotation::RotationFaces;
use crate::stats::linear_fit;
use crate::Result;
use num_complex::Complex64;
use serde::Serialize;

/// Sum over unoriented edges (double edges counted twice) of squared value
/// differences.
pub fn dirichlet_energy(map: &MatedCrtMap, f: &[f64]) -> Result<f64> {
    if f.len() != map.n() {
        return Err(Error::Domain(format!(
            "function length {} does not match vertex count {}",
            f.len(),
            map.n()
        )));
    }
    let mut acc = 0.0;
    for u in 0..map.n() as u32 {
        let (nb, ml, _) = map.adj(u);
        for (&v, &m) in nb.iter().zip(ml) {
            if u < v {
                let d = f[u as usize] - f[v as usize];
                acc += m as f64 * d * d;
            }
        }
    }
    Ok(acc)
}

/// Complex-valued energy: the coordinate energies summed.
pub fn dirichlet_energy_complex(map: &MatedCrtMap, f: &[Complex64]) -> Result<f64> {
    let re: Vec<f64> = f.iter().map(|z| z.re).collect();
    let im: Vec<f64> = f.iter().map(|z| z.im).collect();
    Ok(dirichlet_energy(map, &re)? + dirichlet_energy(map, &im)?)
}

/// Exponential-tail fit of a degree histogram.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailFit {
    /// Prefactor `c0` (exp of the fitted intercept).
    pub c0: f64,
    /// Decay rate `c1` (minus the fitted slope); positive for decaying tails.
    pub c1: f64,
    pub r2: f64,
    /// Number of histogram points used.
    pub points: usize,
}

/// Least-squares line through `(k, log tail(k))` for `k` from 5 up to the
/// largest degree whose tail still holds at least 30 samples.
pub fn degree_tail_fit(histogram: &[u64]) -> Result<TailFit> {
    let total: u64 = histogram.iter().sum();
    if total < 10_000 {
        return Err(Error::Statistics(format!(
            "tail fit needs a histogram of at least 1e4 vertices, got {total}"
        )));
    }
    // tail(k) = #{deg > k} / total
    let kmax = histogram.len();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut above: u64 = total;
    for k in 0..kmax {
        above -= histogram[k];
        if k >= 5 {
            if above < 30 {
                break;
            }
            xs.push(k as f64);
            ys.push((above as f64 / total as f64).ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Statistics(format!(
            "degenerate degree tail: only {} usable points in [5, ..]",
            xs.len()
        )));
    }
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    Ok(TailFit { c0: intercept.exp(), c1: -slope, r2, points: xs.len() })
}

/// Maximum Euclidean diameter of embedded interior faces. Faces touching an
/// unembedded vertex are skipped and counted.
pub fn max_face_diameter(emb: &TutteEmbedding, faces: &RotationFaces) -> (f64, usize) {
    let mut best: f64 = 0.0;
    let mut skipped = 0usize;
    for (id, _) in faces.faces.iter().enumerate() {
        if id == faces.outer_face {
            continue;
        }
        let vs = faces.face_vertices(id);
        if vs.iter().any(|&v| !emb.embedded[v as usize]) {
            skipped += 1;
            continue;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let d = (emb.positions[vs[i] as usize] - emb.positions[vs[j] as usize]).norm();
                best = best.max(d);
            }
        }
    }
    (best, skipped)
}

/// Prokhorov-style proxy distance between two finite point measures in
/// `[-1, 1]^2`: the smallest `r` on `{0} ∪ log grid` such that over a
/// dyadic family of axis-aligned boxes, `mu1(B) <= mu2(B^{+r}) + r` and
/// vice versa, with box masses resolved on a `2^levels` bin grid. An
/// upper-bound proxy for the box family, capped at 1.
pub fn prokhorov_proxy(mu1: &[(Complex64, f64)], mu2: &[(Complex64, f64)], levels: u32) -> f64 {
    let size = 1usize << levels;
    let bin = |mu: &[(Complex64, f64)]| -> Vec<f64> {
        // summed-area table over the fine grid, padded by one row/col
        let mut g = vec![0.0f64; (size + 1) * (size + 1)];
        for &(z, w) in mu {
            let x = (((z.re + 1.0) / 2.0) * size as f64).floor().clamp(0.0, size as f64 - 1.0)
                as usize;
            let y = (((z.im + 1.0) / 2.0) * size as f64).floor().clamp(0.0, size as f64 - 1.0)
                as usize;
            g[(y + 1) * (size + 1) + (x + 1)] += w;
        }
        for y in 1..=size {
            for x in 1..=size {
                g[y * (size + 1) + x] +=
                    g[(y - 1) * (size + 1) + x] + g[y * (size + 1) + x - 1]
                        - g[(y - 1) * (size + 1) + x - 1];
            }
        }
        g
    };
    let s1 = bin(mu1);
    let s2 = bin(mu2);
    // mass of [x0, x1) x [y0, y1) in bin units, clamped
    let query = |s: &[f64], x0: i64, y0: i64, x1: i64, y1: i64| -> f64 {
        let cx = |v: i64| v.clamp(0, size as i64) as usize;
        let (x0, y0, x1, y1) = (cx(x0), cx(y0), cx(x1), cx(y1));
        if x1 <= x0 || y1 <= y0 {
            return 0.0;
        }
        s[y1 * (size + 1) + x1] - s[y0 * (size + 1) + x1] - s[y1 * (size + 1) + x0]
            + s[y0 * (size + 1) + x0]
    };
    // Dyadic boxes at all levels.
    let mut boxes = Vec::new();
    let mut cells = 1usize;
    while cells <= size {
        let w = (size / cells) as i64;
        for by in 0..cells {
            for bx in 0..cells {
                boxes.push((bx as i64 * w, by as i64 * w, (bx as i64 + 1) * w, (by as i64 + 1) * w));
            }
        }
        cells *= 2;
    }
    let bin_units = |r: f64| -> i64 { (r / 2.0 * size as f64).ceil() as i64 };
    let ok = |r: f64| -> bool {
        let pad = bin_units(r);
        for &(x0, y0, x1, y1) in &boxes {
            let a1 = query(&s1, x0, y0, x1, y1);
            let b2 = query(&s2, x0 - pad, y0 - pad, x1 + pad, y1 + pad);
            if a1 > b2 + r + 1e-12 {
                return false;
            }
            let a2 = query(&s2, x0, y0, x1, y1);
            let b1 = query(&s1, x0 - pad, y0 - pad, x1 + pad, y1 + pad);
            if a2 > b1 + r + 1e-12 {
                return false;
            }
        }
        true
    };
    if ok(0.0) {
        return 0.0;
    }
    // log grid of candidate radii
    let mut r = 1e-4;
    while r < 1.0 {
        if ok(r) {
            return r;
        }
        r *= 1.2;
    }
    1.0
}

/// Prokhorov-proxy distance between the disk Tutte measures of the same
/// excursion at two grid resolutions (`coarse_ratio` in {2, 4, 8}).
pub fn two_scale_consistency(
    fine_path: &BrownianPath,
    coarse_ratio: usize,
    seed: u64,
    opts: &EmbedOptions,
) -> Result<f64> {
    if ![1, 2, 4, 8].contains(&coarse_ratio) {
        return Err(Error::Domain(format!(
            "coarse/fine ratio must be one of 1, 2, 4, 8, got {coarse_ratio}"
        )));
    }
    let coarse_path = fine_path.downsample(coarse_ratio)?;
    let fine = build_map(fine_path)?;
    let coarse = build_map(&coarse_path)?;
    let fine_emb = embed_disk(&fine, fine_path, seed, opts)?;
    let coarse_emb = embed_disk(&coarse, &coarse_path, seed, opts)?;
    let mu1 = vertex_measure(&fine_emb);
    let mu2 = vertex_measure(&coarse_emb);
    Ok(prokhorov_proxy(&mu1, &mu2, 7))
}

/// Full diagnostics of one map + embedding.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub edges: u64,
    pub boundary_size: usize,
    pub euler_characteristic: i64,
    pub interior_faces_all_triangles: bool,
    pub mean_interior_degree: f64,
    pub embedding_energy: f64,
    pub mean_value_residual: f64,
    pub max_face_diameter: f64,
    pub faces_skipped: usize,
    pub degree_tail: Option<TailFit>,
    pub pass: DiagnosticsPass,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsPass {
    pub euler_is_two: bool,
    pub triangles: bool,
    pub harmonic: bool,
    pub all: bool,
}

/// Assemble the per-map diagnostics used by the `diag` subcommand.
pub fn diagnostics_report(
    map: &MatedCrtMap,
    emb: &TutteEmbedding,
    faces: &RotationFaces,
) -> Result<DiagnosticsReport> {
    let triangles = faces.interior_face_degrees().iter().all(|&d| d == 3);
    let energy = dirichlet_energy_complex(map, &emb.positions)?;
    let (diam, skipped) = max_face_diameter(emb, faces);
    let tail = degree_tail_fit(&map.degree_histogram()).ok();
    let euler_is_two = faces.euler_characteristic == 2;
    let harmonic = emb.mean_value_residual <= 1e-8;
    let pass = DiagnosticsPass {
        euler_is_two,
        triangles,
        harmonic,
        all: euler_is_two && triangles && harmonic,
    };
    Ok(DiagnosticsReport {
        n: map.n(),
        edges: map.edge_count(),
        boundary_size: map.boundary_order.len(),
        euler_characteristic: faces.euler_characteristic,
        interior_faces_all_triangles: triangles,
        mean_interior_degree: map.mean_interior_degree(),
        embedding_energy: energy,
        mean_value_residual: emb.mean_value_residual,
        max_face_diameter: diam,
        faces_skipped: skipped,
        degree_tail: tail,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::{sample_disk_excursion, Topology};
    use crate::harmonic::laplacian_apply;
    use crate::map::{build_map, from_edge_records, EdgeRec, Side};
    use crate::rotation::rotation_system_and_faces;

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn energy_basics() {
        let single = from_edge_records(
            Topology::Plane,
            0.5,
            vec![0.5, 1.0],
            &[EdgeRec { u: 0, v: 1, side: Side::L }],
            Vec::new(),
        );
        assert_eq!(dirichlet_energy(&single, &[3.0, 3.0]).unwrap(), 0.0);
        assert_eq!(dirichlet_energy(&single, &[0.0, 1.0]).unwrap(), 1.0);
        let double = from_edge_records(
            Topology::Plane,
            0.5,
            vec![0.5, 1.0],
            &[EdgeRec { u: 0, v: 1, side: Side::Both }],
            Vec::new(),
        );
        assert_eq!(dirichlet_energy(&double, &[0.0, 1.0]).unwrap(), 2.0);
        assert!(dirichlet_energy(&double, &[1.0]).is_err());
    }

    #[test]
    fn energy_equals_quadratic_form() {
        let p = sample_disk_excursion(1.3, 1.0 / 250.0, 1.0, 1.0, 17).unwrap();
        let m = build_map(&p).unwrap();
        use rand::Rng;
        let mut rng = crate::rng::Streams::new(5).stream(0);
        let f: Vec<f64> = (0..m.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let e = dirichlet_energy(&m, &f).unwrap();
        let lf = laplacian_apply(&m, &f).unwrap();
        let quad: f64 = f.iter().zip(&lf).map(|(a, b)| a * b).sum();
        assert!((e - quad).abs() <= 1e-12 * e.max(1.0), "{e} vs {quad}");
    }

    #[test]
    fn tail_fit_recovers_geometric_rate() {
        // Geometric(p) degrees: P[deg > k] = (1-p)^k, so the decay rate is
        // -ln(1-p); recovered within 5%.
        use rand::Rng;
        let p = 0.35f64;
        let mut rng = crate::rng::Streams::new(42).stream(0);
        let mut hist = vec![0u64; 0];
        for _ in 0..200_000 {
            let mut d = 1usize;
            while rng.gen_range(0.0..1.0) > p {
                d += 1;
            }
            if d >= hist.len() {
                hist.resize(d + 1, 0);
            }
            hist[d] += 1;
        }
        let fit = degree_tail_fit(&hist).unwrap();
        let expect = -(1.0 - p).ln();
        assert!(
            (fit.c1 - expect).abs() <= 0.05 * expect,
            "rate {} vs {expect}",
            fit.c1
        );
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn tail_fit_guards() {
        // Too few samples.
        assert!(degree_tail_fit(&[5, 5]).is_err());
        // Degenerate all-equal degrees: no usable tail points.
        let mut hist = vec![0u64; 7];
        hist[6] = 20_000;
        assert!(degree_tail_fit(&hist).is_err());
    }

    #[test]
    fn face_diameter_triangle_and_scaling() {
        let p = sample_disk_excursion(SQRT_2, 1.0 / 300.0, 1.0, 1.0, 23).unwrap();
        let m = build_map(&p).unwrap();
        let faces = rotation_system_and_faces(&m).unwrap();
        let emb = embed_disk(&m, &p, 1, &crate::embed::EmbedOptions::default()).unwrap();
        let (d, skipped) = max_face_diameter(&emb, &faces);
        assert_eq!(skipped, 0);
        assert!(d > 0.0 && d < 2.0);
        // Halving all positions exactly halves the diameter.
        let mut half = emb.clone();
        for z in &mut half.positions {
            *z *= 0.5;
        }
        let (d2, _) = max_face_diameter(&half, &faces);
        assert_eq!(d2, 0.5 * d);
    }

    #[test]
    fn unit_triangle_diameter() {
        // Hand-built triangle with a unit side.
        let mut path = BrownianPath {
            gamma: SQRT_2,
            step: 1.0 / 3.0,
            topology: Topology::Disk,
            l: vec![0.0, 5.0, 4.0, 1.0],
            r: vec![0.0, 5.0, 0.5, 0.0],
            total_time: 1.0,
            boundary_length: 1.0,
            index_shift: 0.0,
            seed: 0,
            grid_origin: 0.0,
            cell_inf_l: Vec::new(),
            cell_inf_r: Vec::new(),
        };
        path.attach_grid_infima();
        let m = build_map(&path).unwrap();
        let faces = rotation_system_and_faces(&m).unwrap();
        let emb = embed_disk(&m, &path, 3, &crate::embed::EmbedOptions::default()).unwrap();
        // Positions are -1, 0, 1: the largest interior face diameter is 2
        // (the triangle through both boundary vertices), but each face is a
        // triangle on {-1, 0, 1}.
        let (d, _) = max_face_diameter(&emb, &faces);
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn prokhorov_proxy_identity_and_bounds() {
        let mu: Vec<(Complex64, f64)> = (0..100)
            .map(|k| {
                let a = k as f64 / 100.0 * std::f64::consts::TAU;
                (Complex64::from_polar(0.7, a), 0.01)
            })
            .collect();
        assert_eq!(prokhorov_proxy(&mu, &mu, 7), 0.0);
        // Far-apart point masses: proxy saturates near 1.
        let a = vec![(Complex64::new(-0.9, -0.9), 1.0)];
        let b = vec![(Complex64::new(0.9, 0.9), 1.0)];
        let d = prokhorov_proxy(&a, &b, 7);
        assert!(d > 0.5);
        assert!(d <= 1.0);
        // A small shift gives a small distance.
        let c = vec![(Complex64::new(-0.88, -0.9), 1.0)];
        let d2 = prokhorov_proxy(&a, &c, 7);
        assert!(d2 < 0.1, "{d2}");
        assert!(d2 > 0.0);
    }

    #[test]
    fn two_scale_zero_at_equal_resolution() {
        let p = sample_disk_excursion(SQRT_2, 1.0 / 128.0, 1.0, 1.0, 31).unwrap();
        let d = two_scale_consistency(&p, 1, 7, &crate::embed::EmbedOptions::default()).unwrap();
        assert_eq!(d, 0.0);
        let d2 = two_scale_consistency(&p, 2, 7, &crate::embed::EmbedOptions::default()).unwrap();
        assert!(d2 <= 1.0);
        assert!(two_scale_consistency(&p, 3, 7, &crate::embed::EmbedOptions::default()).is_err());
    }

    #[test]
    fn harmonic_coordinates_minimize_energy() {
        // Perturbing any interior vertex strictly increases the energy.
        let p = sample_disk_excursion(SQRT_2, 1.0 / 200.0, 1.0, 1.0, 3).unwrap();
        let m = build_map(&p).unwrap();
        let emb = embed_disk(&m, &p, 2, &crate::embed::EmbedOptions::default()).unwrap();
        let re: Vec<f64> = emb.positions.iter().map(|z| z.re).collect();
        let base = dirichlet_energy(&m, &re).unwrap();
        let mask = m.boundary_mask();
        use rand::Rng;
        let mut rng = crate::rng::Streams::new(77).stream(0);
        let interior: Vec<usize> = (0..m.n()).filter(|&v| !mask[v]).collect();
        for _ in 0..100 {
            let v = interior[rng.gen_range(0..interior.len())];
            let delta: f64 = rng.gen_range(0.01..0.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let mut f = re.clone();
            f[v] += delta;
            let e = dirichlet_energy(&m, &f).unwrap();
            assert!(e > base, "perturbation at {v} lowered energy: {e} <= {base}");
        }
    }

    use crate::brownian::BrownianPath;
}
