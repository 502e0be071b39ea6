//! Tutte (harmonic) embeddings of mated-CRT maps.
//!
//! Disk: the boundary cycle goes to the unit circle at angles `2 pi p(y)`,
//! where `p` is the cumulative exit distribution of the walk from a root
//! cell drawn uniformly in time; the interior is the discrete harmonic
//! extension, one Dirichlet solve per coordinate.
//!
//! Plane and sphere have no boundary, so a window of the time line is cut
//! out: `I` is the grid inside the window, its inner boundary `dI` holds the
//! vertices with a neighbor outside, and the embedded set `V` is the
//! component of `I \ dI` containing the root together with the attached
//! boundary vertices `dV`. The cycle order of `dV` comes from the outer
//! face of the induced submap, anchored at the chronologically last
//! boundary vertex; a final complex affine map pins two marked vertices to
//! 0 and 1. Vertices outside `V` are reported as not embedded.

use crate::brownian::{BrownianPath, Topology};
use crate::error::Error;
use crate::harmonic::{
    hitting_probabilities, mean_value_residual, solve_dirichlet, SolveOptions,
};
use crate::map::MatedCrtMap;
use crate::rng::Streams;
use crate::rotation::rotation_system_and_faces;
use crate::curve::{CurveKind, EmbeddedCurve};
use crate::Result;
use num_complex::Complex64;
use rand::Rng;

/// Options for embedding construction.
#[derive(Debug, Clone)]
pub struct EmbedOptions {
    pub solve: SolveOptions,
    /// Retry budget for mark draws that land in degenerate positions.
    pub retries: usize,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        Self { solve: SolveOptions::default(), retries: 100 }
    }
}

/// A computed Tutte embedding.
#[derive(Debug, Clone)]
pub struct TutteEmbedding {
    pub topology: Topology,
    /// Per-vertex positions; meaningful where `embedded` is set.
    pub positions: Vec<Complex64>,
    pub embedded: Vec<bool>,
    /// The circle cycle, in the order used for the hitting probabilities.
    pub boundary_cycle: Vec<u32>,
    /// Cumulative hitting probabilities along `boundary_cycle`.
    pub p_cumulative: Vec<f64>,
    /// Root vertex (the cell containing the uniform time draw; the shifted
    /// origin cell for the plane).
    pub root: u32,
    /// Extra marked vertices: the unit-time cell for the plane; the second
    /// uniform mark and the first cell for the sphere.
    pub marks: Vec<u32>,
    /// Complex affine normalization `z -> a z + b` applied after the
    /// harmonic extension (identity for the disk).
    pub normalization: (Complex64, Complex64),
    /// Largest solver residual among the Dirichlet solves involved.
    pub residual: f64,
    /// Max mean-value defect over embedded interior vertices, per
    /// coordinate.
    pub mean_value_residual: f64,
    pub seed: u64,
}

impl TutteEmbedding {
    pub fn n_embedded(&self) -> usize {
        self.embedded.iter().filter(|&&e| e).count()
    }

    pub fn position(&self, v: u32) -> Option<Complex64> {
        if self.embedded[v as usize] {
            Some(self.positions[v as usize])
        } else {
            None
        }
    }
}

/// Component ids over the vertices where `allowed` holds, plus the id of
/// the largest component. Returns `u32::MAX` for disallowed vertices.
fn components_of(map: &MatedCrtMap, allowed: &[bool]) -> (Vec<u32>, u32) {
    let n = map.n();
    let mut id = vec![u32::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    for s in 0..n {
        if !allowed[s] || id[s] != u32::MAX {
            continue;
        }
        let this = sizes.len() as u32;
        let mut size = 0usize;
        let mut stack = vec![s as u32];
        id[s] = this;
        while let Some(v) = stack.pop() {
            size += 1;
            let (nb, _, _) = map.adj(v);
            for &w in nb {
                if allowed[w as usize] && id[w as usize] == u32::MAX {
                    id[w as usize] = this;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    let largest = sizes
        .iter()
        .enumerate()
        .max_by_key(|(_, &s)| s)
        .map(|(i, _)| i as u32)
        .unwrap_or(u32::MAX);
    (id, largest)
}

/// The cell whose time interval contains `t`.
fn cell_of_time(path: &BrownianPath, t: f64) -> u32 {
    let n = path.n_cells() as i64;
    let k = (t / path.step).ceil() as i64 - 1;
    k.clamp(0, n - 1) as u32
}

/// Unit-circle placement of cumulative probabilities.
fn circle_points(p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut re = Vec::with_capacity(p.len());
    let mut im = Vec::with_capacity(p.len());
    for &q in p {
        let ang = 2.0 * std::f64::consts::PI * q;
        re.push(ang.cos());
        im.push(ang.sin());
    }
    (re, im)
}

/// Tutte embedding of a disk map into the closed unit disk.
pub fn embed_disk(
    map: &MatedCrtMap,
    path: &BrownianPath,
    seed: u64,
    opts: &EmbedOptions,
) -> Result<TutteEmbedding> {
    if map.topology != Topology::Disk {
        return Err(Error::Domain(format!(
            "disk embedding requires disk topology, got {}",
            map.topology
        )));
    }
    if map.boundary_order.is_empty() {
        return Err(Error::Domain("disk map has an empty boundary".into()));
    }
    let mask = map.boundary_mask();
    // The interior can hold small pockets enclosed by boundary cells, whose
    // walks only ever see their own little arc; the root draw retries until
    // it lands in the bulk (largest) interior component.
    let interior: Vec<bool> = mask.iter().map(|&b| !b).collect();
    let (comp, bulk) = components_of(map, &interior);
    let streams = Streams::new(seed);
    let mut tdraw = streams.stream(0);
    let mut root = None;
    for _ in 0..=opts.retries {
        let t: f64 = tdraw.gen_range(0.0..path.total_time);
        let cell = cell_of_time(path, t);
        if comp[cell as usize] == bulk {
            root = Some(cell);
            break;
        }
    }
    let root = root.ok_or_else(|| {
        Error::Domain(
            "root draw kept missing the bulk interior component; no usable root found".into(),
        )
    })?;

    let hp = hitting_probabilities(map, root, &map.boundary_order, &opts.solve)?;
    let (bre, bim) = circle_points(&hp.cumulative);
    let fre = solve_dirichlet(map, &map.boundary_order, &bre, &opts.solve)?;
    let fim = solve_dirichlet(map, &map.boundary_order, &bim, &opts.solve)?;

    let positions: Vec<Complex64> = fre
        .values
        .iter()
        .zip(&fim.values)
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    let mv = mean_value_residual(map, &fre.values, &mask)
        .max(mean_value_residual(map, &fim.values, &mask));
    Ok(TutteEmbedding {
        topology: Topology::Disk,
        positions,
        embedded: vec![true; map.n()],
        boundary_cycle: map.boundary_order.clone(),
        p_cumulative: hp.cumulative,
        root,
        marks: Vec::new(),
        normalization: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        residual: hp.field.residual_inf_norm.max(fre.residual_inf_norm).max(fim.residual_inf_norm),
        mean_value_residual: mv,
        seed,
    })
}

/// Window decomposition shared by the plane and sphere embeddings.
#[derive(Debug, Clone)]
pub struct WindowCut {
    /// Grid vertices inside the window (`I`).
    pub in_window: Vec<bool>,
    /// Vertices of `I` with a neighbor outside (`dI`).
    pub inner_boundary: Vec<bool>,
    /// Component of `I \ dI` containing the root (the embedded interior).
    pub component: Vec<bool>,
    /// Vertices of `dI` adjacent to the component (`dV`).
    pub attached_boundary: Vec<bool>,
}

impl WindowCut {
    /// Fraction of `I \ dI` captured by the component.
    pub fn component_fraction(&self) -> f64 {
        let denom = self
            .in_window
            .iter()
            .zip(&self.inner_boundary)
            .filter(|(&i, &b)| i && !b)
            .count();
        let num = self.component.iter().filter(|&&c| c).count();
        if denom == 0 {
            return 0.0;
        }
        num as f64 / denom as f64
    }
}

/// Cut a window out of the map and grow the root's component.
pub fn window_cut(map: &MatedCrtMap, in_window: Vec<bool>, root: u32) -> Result<WindowCut> {
    let n = map.n();
    let mut inner_boundary = vec![false; n];
    for v in 0..n as u32 {
        if !in_window[v as usize] {
            continue;
        }
        let (nb, _, _) = map.adj(v);
        if nb.iter().any(|&w| !in_window[w as usize]) {
            inner_boundary[v as usize] = true;
        }
    }
    let mut component = vec![false; n];
    if !in_window[root as usize] || inner_boundary[root as usize] {
        // The component is empty when the root touches the window boundary
        // (the embedding layer treats this as horizon-too-small).
        return Ok(WindowCut { in_window, inner_boundary, component, attached_boundary: vec![false; n] });
    }
    component[root as usize] = true;
    let mut queue = vec![root];
    while let Some(v) = queue.pop() {
        let (nb, _, _) = map.adj(v);
        for &w in nb {
            let wi = w as usize;
            if in_window[wi] && !inner_boundary[wi] && !component[wi] {
                component[wi] = true;
                queue.push(w);
            }
        }
    }
    let mut attached_boundary = vec![false; n];
    for v in 0..n as u32 {
        if inner_boundary[v as usize] {
            let (nb, _, _) = map.adj(v);
            if nb.iter().any(|&w| component[w as usize]) {
                attached_boundary[v as usize] = true;
            }
        }
    }
    Ok(WindowCut { in_window, inner_boundary, component, attached_boundary })
}

/// Boundary cycle of the embedded set `V = component ∪ dV`, counterclockwise
/// and anchored so the chronologically last `dV` vertex comes last.
fn window_boundary_cycle(map: &MatedCrtMap, cut: &WindowCut) -> Result<(crate::map::Submap, Vec<u32>)> {
    let keep: Vec<bool> = cut
        .component
        .iter()
        .zip(&cut.attached_boundary)
        .map(|(&c, &b)| c || b)
        .collect();
    let sub = map.induced_submap(&keep);
    let rf = rotation_system_and_faces(&sub.map)?;
    let cycle_all = rf.outer_cycle();
    let mut cycle: Vec<u32> = cycle_all
        .into_iter()
        .filter(|&v_new| cut.attached_boundary[sub.to_old[v_new as usize] as usize])
        .collect();
    let expect = cut.attached_boundary.iter().filter(|&&b| b).count();
    if cycle.len() != expect {
        return Err(Error::Internal(format!(
            "outer face covers {} of {} window-boundary vertices",
            cycle.len(),
            expect
        )));
    }
    // Anchor: rotate so the largest original index (latest cell) is last.
    let anchor = (0..cycle.len())
        .max_by_key(|&k| sub.to_old[cycle[k] as usize])
        .ok_or_else(|| Error::Internal("empty window boundary".into()))?;
    let len = cycle.len();
    cycle.rotate_left((anchor + 1) % len);
    Ok((sub, cycle))
}

/// Tutte embedding of a plane map through a window of half-width `horizon`,
/// pinned so the shifted-origin cell goes to 0 and the cell one time unit
/// later goes to 1.
pub fn embed_plane(
    map: &MatedCrtMap,
    path: &BrownianPath,
    horizon: f64,
    seed: u64,
    opts: &EmbedOptions,
) -> Result<TutteEmbedding> {
    if map.topology != Topology::Plane {
        return Err(Error::Domain(format!(
            "plane embedding requires plane topology, got {}",
            map.topology
        )));
    }
    if !(horizon > 0.0) {
        return Err(Error::Domain("horizon must be positive".into()));
    }
    let n = map.n();
    if !(map.vertex_times[0] < -horizon && map.vertex_times[n - 1] > horizon) {
        return Err(Error::Domain(format!(
            "simulation window [{}, {}] must strictly contain [-{horizon}, {horizon}]",
            map.vertex_times[0],
            map.vertex_times[n - 1]
        )));
    }
    // Root: the grid vertex at time step * index_shift (the cell whose
    // right endpoint is the shifted origin).
    let eps = map.step;
    let origin_time = eps * path.index_shift;
    let root = time_index(map, origin_time)?;
    let mark = time_index(map, eps * (1.0 / eps).floor() + origin_time)?;

    let in_window: Vec<bool> =
        map.vertex_times.iter().map(|&t| t.abs() <= horizon).collect();
    let cut = window_cut(map, in_window, root)?;
    if cut.component.iter().all(|&c| !c) {
        return Err(Error::Domain(
            "the root cell touches the window boundary; enlarge the horizon".into(),
        ));
    }

    // The conditioning event: the whole unit time segment from the root
    // must be embedded.
    for v in root..=mark {
        if !(cut.component[v as usize] || cut.attached_boundary[v as usize]) {
            return Err(Error::Domain(format!(
                "unit time segment leaves the embedded component at cell {v}; enlarge the horizon"
            )));
        }
    }

    let (sub, cycle_new) = window_boundary_cycle(map, &cut)?;
    let root_new = sub.to_new[root as usize];
    let hp = hitting_probabilities(&sub.map, root_new, &cycle_new, &opts.solve)?;
    let (bre, bim) = circle_points(&hp.cumulative);
    let fre = solve_dirichlet(&sub.map, &cycle_new, &bre, &opts.solve)?;
    let fim = solve_dirichlet(&sub.map, &cycle_new, &bim, &opts.solve)?;

    finish_window_embedding(
        map, &sub, &cut, cycle_new, hp.cumulative, fre, fim, root, mark, root, vec![mark], seed,
        hp.field.residual_inf_norm,
    )
}

/// Tutte embedding of a sphere map through the window `[delta, 1 - delta]`,
/// pinned so two independently drawn cells go to 0 and 1; the first cell
/// (playing infinity) stays outside the embedded set.
pub fn embed_sphere(
    map: &MatedCrtMap,
    path: &BrownianPath,
    delta: f64,
    seed: u64,
    opts: &EmbedOptions,
) -> Result<TutteEmbedding> {
    if map.topology != Topology::Sphere {
        return Err(Error::Domain(format!(
            "sphere embedding requires sphere topology, got {}",
            map.topology
        )));
    }
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::Domain(format!("delta must lie in (0, 1/4), got {delta}")));
    }
    if map.step >= delta {
        return Err(Error::Domain(format!(
            "delta {delta} must exceed the step {} so the poles stay outside the window",
            map.step
        )));
    }
    let in_window: Vec<bool> =
        map.vertex_times.iter().map(|&t| t >= delta && t <= 1.0 - delta).collect();
    // Interior of the window, its components, and the bulk component: the
    // first mark retries until it lands in the bulk, mirroring the disk
    // root rule.
    let mut window_interior = in_window.clone();
    for v in 0..map.n() as u32 {
        if in_window[v as usize] {
            let (nb, _, _) = map.adj(v);
            if nb.iter().any(|&w| !in_window[w as usize]) {
                window_interior[v as usize] = false;
            }
        }
    }
    let (comp, bulk) = components_of(map, &window_interior);

    let streams = Streams::new(seed);
    let mut tdraw = streams.stream(0);
    let mut found = None;
    for _ in 0..=opts.retries {
        let t: f64 = tdraw.gen_range(0.0..1.0);
        let x = cell_of_time(path, t);
        if bulk != u32::MAX && comp[x as usize] == bulk {
            let cut = window_cut(map, in_window.clone(), x)?;
            found = Some((x, cut));
            break;
        }
    }
    let (root, cut) =
        found.ok_or_else(|| Error::Domain("mark draws kept leaving the window component".into()))?;

    let mut t2draw = streams.stream(1);
    let mut mark = None;
    for _ in 0..=opts.retries {
        let t: f64 = t2draw.gen_range(0.0..1.0);
        let x = cell_of_time(path, t);
        if x != root && cut.component[x as usize] {
            mark = Some(x);
            break;
        }
    }
    let mark = mark.ok_or_else(|| {
        Error::Domain("second mark kept landing outside the embedded component".into())
    })?;

    let (sub, cycle_new) = window_boundary_cycle(map, &cut)?;
    // Hitting probabilities are seen from the first cell, which lies in the
    // exterior of the window: solve on the full map with the cycle absorbing.
    let pole: u32 = 0;
    let cycle_old: Vec<u32> = cycle_new.iter().map(|&v| sub.to_old[v as usize]).collect();
    debug_assert!(!cycle_old.contains(&pole));
    let hp = hitting_probabilities(map, pole, &cycle_old, &opts.solve)?;
    let (bre, bim) = circle_points(&hp.cumulative);
    let fre = solve_dirichlet(&sub.map, &cycle_new, &bre, &opts.solve)?;
    let fim = solve_dirichlet(&sub.map, &cycle_new, &bim, &opts.solve)?;

    finish_window_embedding(
        map, &sub, &cut, cycle_new, hp.cumulative, fre, fim, root, mark, root,
        vec![mark, pole], seed, hp.field.residual_inf_norm,
    )
}

fn time_index(map: &MatedCrtMap, t: f64) -> Result<u32> {
    let eps = map.step;
    let k = ((t - map.vertex_times[0]) / eps).round() as i64;
    if k < 0 || k as usize >= map.n() || (map.vertex_times[k as usize] - t).abs() > eps / 2.0 {
        return Err(Error::Domain(format!("time {t} has no grid vertex in the window")));
    }
    Ok(k as u32)
}

#[allow(clippy::too_many_arguments)]
fn finish_window_embedding(
    map: &MatedCrtMap,
    sub: &crate::map::Submap,
    cut: &WindowCut,
    cycle_new: Vec<u32>,
    p_cumulative: Vec<f64>,
    fre: crate::harmonic::HarmonicField,
    fim: crate::harmonic::HarmonicField,
    pin_zero: u32,
    pin_one: u32,
    root: u32,
    marks: Vec<u32>,
    seed: u64,
    psi_residual: f64,
) -> Result<TutteEmbedding> {
    let n = map.n();
    let psi = |v_old: u32| -> Complex64 {
        let v_new = sub.to_new[v_old as usize] as usize;
        Complex64::new(fre.values[v_new], fim.values[v_new])
    };
    let z0 = psi(pin_zero);
    let z1 = psi(pin_one);
    let denom = z1 - z0;
    if denom.norm() == 0.0 {
        return Err(Error::Domain("pinning vertices coincide in the pre-normalized embedding".into()));
    }
    let mut positions = vec![Complex64::new(0.0, 0.0); n];
    let mut embedded = vec![false; n];
    for (v_new, &v_old) in sub.to_old.iter().enumerate() {
        let z = Complex64::new(fre.values[v_new], fim.values[v_new]);
        // (z - z0) / (z1 - z0): exact 0 and 1 at the pinned vertices.
        positions[v_old as usize] = (z - z0) / denom;
        embedded[v_old as usize] = true;
    }
    let mv = mean_value_residual(&sub.map, &fre.values, &fre.boundary_mask)
        .max(mean_value_residual(&sub.map, &fim.values, &fim.boundary_mask));
    let cycle_old: Vec<u32> = cycle_new.iter().map(|&v| sub.to_old[v as usize]).collect();
    let _ = cut;
    Ok(TutteEmbedding {
        topology: map.topology,
        positions,
        embedded,
        boundary_cycle: cycle_old,
        p_cumulative,
        root,
        marks,
        normalization: (Complex64::new(1.0, 0.0) / denom, -z0 / denom),
        residual: psi_residual.max(fre.residual_inf_norm).max(fim.residual_inf_norm),
        mean_value_residual: mv,
        seed,
    })
}

/// The empirical measure of the embedding: mass `1/n_embedded` at each
/// embedded position.
pub fn vertex_measure(emb: &TutteEmbedding) -> Vec<(Complex64, f64)> {
    let n = emb.n_embedded();
    let mass = 1.0 / n as f64;
    emb.embedded
        .iter()
        .enumerate()
        .filter(|(_, &e)| e)
        .map(|(v, _)| (emb.positions[v], mass))
        .collect()
}

/// The space-filling polyline: embedded vertices in time order, stamped by
/// cell index over total cells.
pub fn space_filling_polyline(emb: &TutteEmbedding) -> EmbeddedCurve {
    let n = emb.embedded.len();
    let mut points = Vec::new();
    let mut times = Vec::new();
    for v in 0..n {
        if emb.embedded[v] {
            points.push(emb.positions[v]);
            times.push(v as f64 / n as f64);
        }
    }
    EmbeddedCurve { points, times, kind: CurveKind::SpaceFilling }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::{
        sample_disk_excursion, sample_plane, sample_sphere_excursion, BrownianPath,
    };
    use crate::map::{build_map, Side};
    use crate::stats::median;

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn toy_disk_embedding_by_hand() {
        // Three cells: boundary {0, 2}, interior {1}; edges 0-1, 1-2
        // (consecutive) and a double edge {0, 2}. Exit masses from 1 split
        // evenly, so the boundary lands at -1 and +1 and the interior at 0.
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
        assert_eq!(m.boundary_order, vec![0, 2]);
        let recs = m.edge_records();
        assert!(recs.contains(&crate::map::EdgeRec { u: 0, v: 2, side: Side::Both }));
        let emb = embed_disk(&m, &path, 3, &EmbedOptions::default()).unwrap();
        assert_eq!(emb.root, 1);
        // p = (1/2, 1) -> positions -1 and +1.
        assert!((emb.p_cumulative[0] - 0.5).abs() < 1e-12);
        assert_eq!(emb.p_cumulative[1], 1.0);
        assert!((emb.positions[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((emb.positions[2] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(emb.positions[1].norm() < 1e-12);
    }

    #[test]
    fn disk_boundary_on_circle_interior_inside() {
        for seed in [0u64, 5] {
            let p = sample_disk_excursion(SQRT_2, 1.0 / 600.0, 1.0, 1.0, seed).unwrap();
            let m = build_map(&p).unwrap();
            let emb = embed_disk(&m, &p, seed ^ 77, &EmbedOptions::default()).unwrap();
            // Last boundary vertex pinned at angle 2 pi (= 1 + 0i).
            let yk = *m.boundary_order.last().unwrap();
            assert!((emb.positions[yk as usize] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let mask = m.boundary_mask();
            for v in 0..m.n() {
                let r = emb.positions[v].norm();
                if mask[v] {
                    assert!((r - 1.0).abs() < 1e-12, "boundary off circle: {r}");
                } else {
                    assert!(r < 1.0 + 1e-9, "interior escaped the disk: {r}");
                }
            }
            // Nondecreasing boundary angles, strictly increasing across
            // every vertex with positive exit mass (boundary ear-chains and
            // enclosed interior pockets legitimately carry zero mass, and
            // the cumulative hitting probability plateaus there).
            assert!(
                emb.p_cumulative.windows(2).all(|w| w[0] <= w[1]),
                "boundary angles decrease (seed {seed})"
            );
            let increments: Vec<f64> = std::iter::once(emb.p_cumulative[0])
                .chain(emb.p_cumulative.windows(2).map(|w| w[1] - w[0]))
                .collect();
            let positive = increments.iter().filter(|&&x| x > 0.0).count();
            assert!(positive * 5 >= increments.len(), "almost all boundary mass vanished (seed {seed})");
            assert!(emb.mean_value_residual <= 1e-8);
            // The root ends up near the center.
            assert!(emb.positions[emb.root as usize].norm() < 0.5);
        }
    }

    #[test]
    fn disk_determinism() {
        let p = sample_disk_excursion(1.2, 1.0 / 300.0, 1.0, 1.0, 9).unwrap();
        let m = build_map(&p).unwrap();
        let a = embed_disk(&m, &p, 1, &EmbedOptions::default()).unwrap();
        let b = embed_disk(&m, &p, 1, &EmbedOptions::default()).unwrap();
        assert_eq!(a.positions, b.positions);
        assert_eq!(a.root, b.root);
    }

    #[test]
    fn plane_pinning_exact() {
        let eps = 1.0 / 400.0;
        let p = sample_plane(SQRT_2, eps, (-4.0, 4.0), 31).unwrap();
        let m = build_map(&p).unwrap();
        let emb = embed_plane(&m, &p, 2.0, 31, &EmbedOptions::default()).unwrap();
        let root = emb.root as usize;
        let mark = emb.marks[0] as usize;
        assert_eq!(emb.positions[root], Complex64::new(0.0, 0.0));
        assert_eq!(emb.positions[mark], Complex64::new(1.0, 0.0));
        // Root cell sits at time ~ eps * theta, mark one unit later.
        assert!((m.vertex_times[root] - eps * p.index_shift).abs() < eps);
        assert!((m.vertex_times[mark] - m.vertex_times[root] - 1.0).abs() < 2.0 * eps);
        assert!(emb.mean_value_residual <= 1e-8);
        // Not everything in the window is embedded, but the component is.
        assert!(emb.n_embedded() > 0);
        assert!(!emb.embedded[0], "window edge cells must stay unembedded");
    }

    #[test]
    fn plane_window_too_small_is_an_error() {
        let eps = 1.0 / 200.0;
        let p = sample_plane(SQRT_2, eps, (-1.5, 1.5), 8).unwrap();
        let m = build_map(&p).unwrap();
        assert!(embed_plane(&m, &p, 1.5, 8, &EmbedOptions::default()).is_err());
        assert!(embed_plane(&m, &p, 0.3, 8, &EmbedOptions::default()).is_err());
    }

    #[test]
    fn plane_component_matches_flood_fill_oracle() {
        for seed in 0..8 {
            let eps = 1.0 / 120.0;
            let p = sample_plane(1.1, eps, (-1.2, 1.2), seed).unwrap();
            let m = build_map(&p).unwrap();
            let horizon = 0.8;
            let in_window: Vec<bool> =
                m.vertex_times.iter().map(|&t| t.abs() <= horizon).collect();
            let root = time_index(&m, eps * p.index_shift).unwrap();
            let cut = window_cut(&m, in_window.clone(), root).unwrap();
            if cut.component.iter().all(|&c| !c) {
                continue; // root on the window boundary: skip seed
            }
            // Independent recursive flood fill.
            let mut reach = vec![false; m.n()];
            fn fill(m: &MatedCrtMap, allowed: &dyn Fn(u32) -> bool, v: u32, out: &mut [bool]) {
                if out[v as usize] || !allowed(v) {
                    return;
                }
                out[v as usize] = true;
                let (nb, _, _) = m.adj(v);
                for &w in nb {
                    fill(m, allowed, w, out);
                }
            }
            let iw = in_window.clone();
            let ib = cut.inner_boundary.clone();
            fill(&m, &move |v| iw[v as usize] && !ib[v as usize], root, &mut reach);
            assert_eq!(reach, cut.component, "seed {seed}");
        }
    }

    #[test]
    fn plane_component_fraction_grows_as_grid_refines() {
        // At gamma <= sqrt(2) the captured fraction of the window interior
        // approaches 1 as the grid refines (medians over seeds).
        let horizon = 1.0;
        let mut medians = Vec::new();
        for eps in [1e-2, 1e-3, 1e-4] {
            let mut fr = Vec::new();
            for seed in 0..10u64 {
                let p = sample_plane(SQRT_2, eps, (-2.0, 2.0), 100 + seed).unwrap();
                let m = build_map(&p).unwrap();
                let root = time_index(&m, eps * p.index_shift).unwrap();
                let in_window: Vec<bool> =
                    m.vertex_times.iter().map(|&t| t.abs() <= horizon).collect();
                let cut = window_cut(&m, in_window, root).unwrap();
                // An empty component (root on the window boundary) captures
                // nothing of the window interior.
                fr.push(cut.component_fraction());
            }
            medians.push(median(&fr));
        }
        assert!(
            medians[1] >= medians[0] - 1e-9 && medians[2] >= medians[1] - 1e-9,
            "fractions not improving: {medians:?}"
        );
        assert!(medians[2] >= 0.95, "fine-grid fraction too small: {medians:?}");
    }

    #[test]
    fn sphere_pinning_and_circle() {
        let p = sample_sphere_excursion(SQRT_2, 1.0 / 2000.0, 3).unwrap();
        let m = build_map(&p).unwrap();
        let emb = embed_sphere(&m, &p, 0.05, 3, &EmbedOptions::default()).unwrap();
        let root = emb.root as usize;
        let mark = emb.marks[0] as usize;
        assert_eq!(emb.positions[root], Complex64::new(0.0, 0.0));
        assert_eq!(emb.positions[mark], Complex64::new(1.0, 0.0));
        // The pole cell is not embedded.
        assert_eq!(emb.marks[1], 0);
        assert!(!emb.embedded[0]);
        // Boundary cycle positions lie on the unit circle before the affine
        // map: undo it and check moduli.
        let (a, b) = emb.normalization;
        for &y in &emb.boundary_cycle {
            let pre = (emb.positions[y as usize] - b) / a;
            assert!((pre.norm() - 1.0).abs() < 1e-9);
        }
        assert!(emb.mean_value_residual <= 1e-8);
    }

    #[test]
    fn sphere_window_nonempty_frequency() {
        // V^{eps,delta} nonempty (and marks placeable) in >= 95% of seeds at
        // eps = 1e-4, delta = 0.05.
        let mut ok = 0;
        let total = 20;
        for seed in 0..total {
            let p = sample_sphere_excursion(SQRT_2, 1e-4, 500 + seed).unwrap();
            let m = build_map(&p).unwrap();
            if embed_sphere(&m, &p, 0.05, seed, &EmbedOptions::default()).is_ok() {
                ok += 1;
            }
        }
        assert!(ok * 100 >= 95 * total, "only {ok}/{total} windows embeddable");
    }

    #[test]
    fn measure_and_polyline() {
        let p = sample_disk_excursion(SQRT_2, 1.0 / 500.0, 1.0, 1.0, 6).unwrap();
        let m = build_map(&p).unwrap();
        let emb = embed_disk(&m, &p, 6, &EmbedOptions::default()).unwrap();
        let mu = vertex_measure(&emb);
        let total: f64 = mu.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(mu.iter().all(|(z, _)| z.norm() <= 1.0 + 1e-9));

        let curve = space_filling_polyline(&emb);
        assert_eq!(curve.len(), emb.n_embedded());
        // Consecutive polyline points are adjacent cells in the map.
        for w in 0..curve.len() - 1 {
            let (nb, _, _) = m.adj(w as u32);
            assert!(nb.contains(&(w as u32 + 1)));
        }
        // Times strictly increase.
        assert!(curve.times.windows(2).all(|t| t[1] > t[0]));
    }
}
