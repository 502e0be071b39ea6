//! Discrete Dirichlet problems on the map.
//!
//! The Laplacian is multiplicity-weighted: `(Lv)(x) = sum_y mult(x,y) (v(x)
//! - v(y))`, so a double edge counts twice, matching the simple-random-walk
//! convention on multigraphs. Interior systems are solved with conjugate
//! gradients (optionally Jacobi-preconditioned) to an infinity-norm residual
//! tolerance.

use crate::error::Error;
use crate::map::MatedCrtMap;
use crate::Result;

/// Options for the conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Infinity-norm residual target (absolute).
    pub tol: f64,
    /// Iteration cap; `None` means `ceil(20 sqrt(n_interior))`.
    pub max_iter: Option<usize>,
    /// Jacobi (degree) preconditioning.
    pub jacobi: bool,
    /// Warm start for the interior values (full-length vector).
    pub initial_guess: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: None, jacobi: false, initial_guess: None }
    }
}

/// Per-vertex values of a discrete harmonic function with solve telemetry.
#[derive(Debug, Clone)]
pub struct HarmonicField {
    pub values: Vec<f64>,
    pub boundary_mask: Vec<bool>,
    /// Infinity norm of the final interior residual `b - A x`.
    pub residual_inf_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `(Lv)(x) = sum over neighbors y of mult(x,y) * (v(x) - v(y))`.
pub fn laplacian_apply(map: &MatedCrtMap, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != map.n() {
        return Err(Error::Domain(format!(
            "vector length {} does not match vertex count {}",
            v.len(),
            map.n()
        )));
    }
    let mut out = vec![0.0; map.n()];
    for x in 0..map.n() as u32 {
        let (nb, ml, _) = map.adj(x);
        let mut acc = 0.0;
        for (&y, &m) in nb.iter().zip(ml) {
            acc += m as f64 * (v[x as usize] - v[y as usize]);
        }
        out[x as usize] = acc;
    }
    Ok(out)
}

/// Solve the Dirichlet problem: prescribed values on `boundary`, discrete
/// harmonic on the rest. Non-convergence within the iteration cap is
/// reported on the returned field, not as an error; an interior component
/// with no boundary contact is a structural error.
pub fn solve_dirichlet(
    map: &MatedCrtMap,
    boundary: &[u32],
    boundary_values: &[f64],
    opts: &SolveOptions,
) -> Result<HarmonicField> {
    let n = map.n();
    if boundary.is_empty() {
        return Err(Error::Domain("boundary set must be nonempty".into()));
    }
    if boundary.len() != boundary_values.len() {
        return Err(Error::Domain(format!(
            "boundary set ({}) and values ({}) differ in length",
            boundary.len(),
            boundary_values.len()
        )));
    }
    let mut mask = vec![false; n];
    let mut values = vec![0.0; n];
    for (&b, &g) in boundary.iter().zip(boundary_values) {
        mask[b as usize] = true;
        values[b as usize] = g;
    }

    // Every interior vertex must reach the boundary.
    let mut reached = mask.clone();
    let mut queue: Vec<u32> = boundary.to_vec();
    while let Some(v) = queue.pop() {
        let (nb, _, _) = map.adj(v);
        for &w in nb {
            if !reached[w as usize] {
                reached[w as usize] = true;
                queue.push(w);
            }
        }
    }
    if reached.iter().any(|&r| !r) {
        return Err(Error::Structural(
            "an interior component has no path to the boundary set".into(),
        ));
    }

    // Constant boundary data extends to the constant.
    let g0 = boundary_values[0];
    if boundary_values.iter().all(|&g| g == g0) {
        let values = vec![g0; n];
        return Ok(HarmonicField {
            values,
            boundary_mask: mask,
            residual_inf_norm: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    // Index the interior.
    let mut idx = vec![u32::MAX; n];
    let mut interior: Vec<u32> = Vec::new();
    for v in 0..n as u32 {
        if !mask[v as usize] {
            idx[v as usize] = interior.len() as u32;
            interior.push(v);
        }
    }
    let ni = interior.len();
    if ni == 0 {
        return Ok(HarmonicField {
            values,
            boundary_mask: mask,
            residual_inf_norm: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    // b_i = sum over boundary neighbors of mult * g.
    let mut b = vec![0.0; ni];
    let mut diag = vec![0.0; ni];
    for (i, &v) in interior.iter().enumerate() {
        let (nb, ml, _) = map.adj(v);
        let mut acc = 0.0;
        let mut d = 0.0;
        for (&w, &m) in nb.iter().zip(ml) {
            d += m as f64;
            if mask[w as usize] {
                acc += m as f64 * values[w as usize];
            }
        }
        b[i] = acc;
        diag[i] = d;
    }

    // A x = diag(x) - sum over interior neighbors.
    let apply = |x: &[f64], out: &mut [f64]| {
        for (i, &v) in interior.iter().enumerate() {
            let (nb, ml, _) = map.adj(v);
            let mut acc = diag[i] * x[i];
            for (&w, &m) in nb.iter().zip(ml) {
                let j = idx[w as usize];
                if j != u32::MAX {
                    acc -= m as f64 * x[j as usize];
                }
            }
            out[i] = acc;
        }
    };

    let max_iter = opts
        .max_iter
        .unwrap_or_else(|| (20.0 * (ni as f64).sqrt()).ceil() as usize);

    let mut x = vec![0.0; ni];
    if let Some(guess) = &opts.initial_guess {
        if guess.len() != n {
            return Err(Error::Domain("initial guess must have full vertex length".into()));
        }
        for (i, &v) in interior.iter().enumerate() {
            x[i] = guess[v as usize];
        }
    }

    let mut r = vec![0.0; ni];
    apply(&x, &mut r);
    for i in 0..ni {
        r[i] = b[i] - r[i];
    }
    let precond = |r: &[f64], z: &mut [f64]| {
        if opts.jacobi {
            for i in 0..r.len() {
                z[i] = r[i] / diag[i];
            }
        } else {
            z.copy_from_slice(r);
        }
    };
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |a, &x| a.max(x.abs()));

    let mut z = vec![0.0; ni];
    precond(&r, &mut z);
    let mut p = z.clone();
    let mut rho: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut q = vec![0.0; ni];
    let mut iterations = 0;
    let mut converged = inf(&r) <= opts.tol;

    while !converged && iterations < max_iter {
        if rho == 0.0 {
            break;
        }
        apply(&p, &mut q);
        let pq: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
        if pq <= 0.0 {
            return Err(Error::Internal("CG lost positive definiteness".into()));
        }
        let alpha = rho / pq;
        for i in 0..ni {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        iterations += 1;
        if inf(&r) <= opts.tol {
            break;
        }
        precond(&r, &mut z);
        let rho_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rho_next / rho;
        rho = rho_next;
        for i in 0..ni {
            p[i] = z[i] + beta * p[i];
        }
    }

    // True residual, not the recurrence's drifted copy.
    apply(&x, &mut q);
    let mut res: f64 = 0.0;
    for i in 0..ni {
        res = res.max((b[i] - q[i]).abs());
    }
    converged = res <= opts.tol;

    for (i, &v) in interior.iter().enumerate() {
        values[v as usize] = x[i];
    }
    Ok(HarmonicField { values, boundary_mask: mask, residual_inf_norm: res, iterations, converged })
}

/// Maximum over interior vertices of the mean-value defect
/// `|v(x) - weighted mean of neighbors|`.
pub fn mean_value_residual(map: &MatedCrtMap, values: &[f64], boundary_mask: &[bool]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..map.n() as u32 {
        if boundary_mask[x as usize] {
            continue;
        }
        let (nb, ml, _) = map.adj(x);
        let mut acc = 0.0;
        let mut d = 0.0;
        for (&y, &m) in nb.iter().zip(ml) {
            acc += m as f64 * values[y as usize];
            d += m as f64;
        }
        worst = worst.max((values[x as usize] - acc / d).abs());
    }
    worst
}

/// Boundary hitting probabilities of the walk from `root`.
#[derive(Debug, Clone)]
pub struct HittingProbabilities {
    /// Exit mass per boundary vertex, aligned with the given order;
    /// nonnegative, sums to 1.
    pub exit_mass: Vec<f64>,
    /// Running totals along the order; the last entry is exactly 1.
    pub cumulative: Vec<f64>,
    /// The potential: 1 at the root, 0 on the boundary, harmonic elsewhere.
    pub field: HarmonicField,
}

/// Exit distribution of the simple random walk from `root` over the ordered
/// boundary. Solves for the potential that is 1 at the root and 0 on the
/// boundary; the walk exits through a boundary edge `(u, y)` with
/// probability proportional to `mult(u, y) * potential(u)`.
pub fn hitting_probabilities(
    map: &MatedCrtMap,
    root: u32,
    boundary_order: &[u32],
    opts: &SolveOptions,
) -> Result<HittingProbabilities> {
    if boundary_order.is_empty() {
        return Err(Error::Domain("boundary order must be nonempty".into()));
    }
    if boundary_order.contains(&root) {
        return Err(Error::Domain(format!("root {root} lies on the boundary")));
    }
    let mut bset: Vec<u32> = boundary_order.to_vec();
    bset.push(root);
    let mut vals = vec![0.0; bset.len()];
    *vals.last_mut().unwrap() = 1.0;
    let field = solve_dirichlet(map, &bset, &vals, opts)?;

    let mut mass: Vec<f64> = boundary_order
        .iter()
        .map(|&y| {
            let (nb, ml, _) = map.adj(y);
            let mut acc = 0.0;
            for (&u, &m) in nb.iter().zip(ml) {
                // Boundary neighbors carry potential 0 and drop out.
                acc += m as f64 * field.values[u as usize];
            }
            acc.max(0.0)
        })
        .collect();
    let total: f64 = mass.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Internal("zero total exit mass".into()));
    }
    for m in &mut mass {
        *m /= total;
    }
    let mut cumulative = Vec::with_capacity(mass.len());
    let mut acc = 0.0;
    for &m in &mass {
        acc += m;
        cumulative.push(acc);
    }
    *cumulative.last_mut().unwrap() = 1.0;
    Ok(HittingProbabilities { exit_mass: mass, cumulative, field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::{sample_disk_excursion, Topology};
    use crate::map::{build_map, from_edge_records, EdgeRec, Side};

    fn chain(n: usize) -> MatedCrtMap {
        let edges: Vec<EdgeRec> = (0..n as u32 - 1)
            .map(|k| EdgeRec { u: k, v: k + 1, side: Side::Consecutive })
            .collect();
        let times = (0..n).map(|k| (k + 1) as f64 / n as f64).collect();
        from_edge_records(Topology::Plane, 1.0 / n as f64, times, &edges, Vec::new())
    }

    fn star(m: usize) -> MatedCrtMap {
        // Center is vertex 0, leaves 1..=m.
        let edges: Vec<EdgeRec> =
            (1..=m as u32).map(|k| EdgeRec { u: 0, v: k, side: Side::L }).collect();
        let n = m + 1;
        let times = (0..n).map(|k| (k + 1) as f64 / n as f64).collect();
        from_edge_records(Topology::Plane, 1.0 / n as f64, times, &edges, Vec::new())
    }

    fn double_edge_pair() -> MatedCrtMap {
        let edges = vec![EdgeRec { u: 0, v: 1, side: Side::Both }];
        from_edge_records(Topology::Plane, 0.5, vec![0.5, 1.0], &edges, Vec::new())
    }

    #[test]
    fn laplacian_basics() {
        let m = chain(2);
        assert_eq!(laplacian_apply(&m, &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(laplacian_apply(&m, &[1.0, 0.0]).unwrap(), vec![1.0, -1.0]);
        let d = double_edge_pair();
        assert_eq!(laplacian_apply(&d, &[1.0, 0.0]).unwrap(), vec![2.0, -2.0]);
        assert!(laplacian_apply(&d, &[1.0]).is_err());
    }

    #[test]
    fn constant_boundary_is_immediate() {
        let p = sample_disk_excursion(1.0, 1.0 / 300.0, 1.0, 1.0, 2).unwrap();
        let m = build_map(&p).unwrap();
        let b = m.boundary_order.clone();
        let vals = vec![2.5; b.len()];
        let f = solve_dirichlet(&m, &b, &vals, &SolveOptions::default()).unwrap();
        assert_eq!(f.iterations, 0);
        assert!(f.converged);
        assert!(f.values.iter().all(|&v| v == 2.5));
        assert_eq!(f.residual_inf_norm, 0.0);
    }

    #[test]
    fn path_graph_midpoint() {
        let m = chain(3);
        let f = solve_dirichlet(&m, &[0, 2], &[0.0, 1.0], &SolveOptions::default()).unwrap();
        assert!((f.values[1] - 0.5).abs() < 1e-12);
        assert!(f.converged);
    }

    #[test]
    fn hitting_path_and_star() {
        let m = chain(3);
        let h = hitting_probabilities(&m, 1, &[0, 2], &SolveOptions::default()).unwrap();
        assert!((h.exit_mass[0] - 0.5).abs() < 1e-12);
        assert!((h.cumulative[0] - 0.5).abs() < 1e-12);
        assert_eq!(h.cumulative[1], 1.0);

        let m = star(5);
        let bd: Vec<u32> = (1..=5).collect();
        let h = hitting_probabilities(&m, 0, &bd, &SolveOptions::default()).unwrap();
        for k in 0..5 {
            assert!((h.exit_mass[k] - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn hitting_rejects_boundary_root() {
        let m = chain(3);
        assert!(hitting_probabilities(&m, 0, &[0, 2], &SolveOptions::default()).is_err());
    }

    #[test]
    fn disconnected_interior_is_structural_error() {
        // Two components; boundary only touches the first.
        let edges = vec![
            EdgeRec { u: 0, v: 1, side: Side::Consecutive },
            EdgeRec { u: 2, v: 3, side: Side::Consecutive },
        ];
        let m = from_edge_records(
            Topology::Plane,
            0.25,
            vec![0.25, 0.5, 0.75, 1.0],
            &edges,
            Vec::new(),
        );
        let r = solve_dirichlet(&m, &[0], &[1.0], &SolveOptions::default());
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    use crate::repro::dense_dirichlet_oracle as dense_dirichlet;

    #[test]
    fn cg_matches_dense_oracle() {
        for seed in 0..10 {
            let p = sample_disk_excursion(1.4, 1.0 / 150.0, 1.0, 1.0, seed).unwrap();
            let m = build_map(&p).unwrap();
            let b = m.boundary_order.clone();
            let vals: Vec<f64> =
                b.iter().enumerate().map(|(k, _)| (k as f64 * 0.7).sin()).collect();
            let f = solve_dirichlet(&m, &b, &vals, &SolveOptions::default()).unwrap();
            assert!(f.converged, "seed {seed}");
            let dense = dense_dirichlet(&m, &b, &vals);
            let err = f
                .values
                .iter()
                .zip(&dense)
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            assert!(err <= 1e-8, "seed {seed}: disagreement {err}");
            // Mean-value property and maximum principle.
            assert!(mean_value_residual(&m, &f.values, &f.boundary_mask) <= 1e-8);
            let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
            for (v, &bd) in f.values.iter().zip(&f.boundary_mask) {
                if !bd {
                    assert!(*v >= lo - 1e-9 && *v <= hi + 1e-9);
                }
            }
        }
    }

    #[test]
    fn jacobi_and_plain_agree() {
        let p = sample_disk_excursion(0.9, 1.0 / 200.0, 1.0, 1.0, 4).unwrap();
        let m = build_map(&p).unwrap();
        let b = m.boundary_order.clone();
        let vals: Vec<f64> = b.iter().enumerate().map(|(k, _)| (k % 3) as f64).collect();
        let plain = solve_dirichlet(&m, &b, &vals, &SolveOptions::default()).unwrap();
        let jac = solve_dirichlet(
            &m,
            &b,
            &vals,
            &SolveOptions { jacobi: true, ..Default::default() },
        )
        .unwrap();
        let err = plain
            .values
            .iter()
            .zip(&jac.values)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-8);
    }

    #[test]
    fn linearity_of_the_solve() {
        let p = sample_disk_excursion(1.1, 1.0 / 180.0, 1.0, 1.0, 8).unwrap();
        let m = build_map(&p).unwrap();
        let b = m.boundary_order.clone();
        let g1: Vec<f64> = b.iter().enumerate().map(|(k, _)| (k as f64).cos()).collect();
        let g2: Vec<f64> = b.iter().enumerate().map(|(k, _)| (0.3 * k as f64).sin()).collect();
        let (a_c, b_c) = (1.7, -0.4);
        let combo: Vec<f64> = g1.iter().zip(&g2).map(|(x, y)| a_c * x + b_c * y).collect();
        let opts = SolveOptions::default();
        let f1 = solve_dirichlet(&m, &b, &g1, &opts).unwrap();
        let f2 = solve_dirichlet(&m, &b, &g2, &opts).unwrap();
        let fc = solve_dirichlet(&m, &b, &combo, &opts).unwrap();
        let err = fc
            .values
            .iter()
            .enumerate()
            .fold(0.0f64, |acc, (i, &v)| acc.max((v - (a_c * f1.values[i] + b_c * f2.values[i])).abs()));
        assert!(err <= 10.0 * opts.tol * (1.0 + a_c.abs() + b_c.abs()), "linearity defect {err}");
    }

    #[test]
    fn exit_masses_nonnegative_sum_one() {
        for seed in [1, 6] {
            let p = sample_disk_excursion(1.5, 1.0 / 400.0, 1.0, 1.0, seed).unwrap();
            let m = build_map(&p).unwrap();
            let mask = m.boundary_mask();
            let root = (0..m.n() as u32).find(|&v| !mask[v as usize]).unwrap();
            let h =
                hitting_probabilities(&m, root, &m.boundary_order, &SolveOptions::default()).unwrap();
            assert!(h.exit_mass.iter().all(|&x| x >= 0.0));
            assert!((h.exit_mass.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
            assert!(h.cumulative.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        }
    }
}
