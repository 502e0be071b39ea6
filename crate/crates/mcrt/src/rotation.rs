//! Planar map structure: rotation system, face tracing, Euler characteristic.
//!
//! The map is drawn as an arc diagram: vertices on the time axis in cell
//! order, consecutive-cell edges as segments on the axis, L-witnessed edges
//! as nested arcs above the axis, R-witnessed edges as nested arcs below
//! (double edges contribute one arc on each side). Arcs sharing an endpoint
//! are nested by interval containment, which fixes the counterclockwise
//! edge order at a vertex `x`:
//!
//! ```text
//! successor segment,
//! L-arcs to the right (innermost first),
//! L-arcs to the left (outermost first),
//! predecessor segment,
//! R-arcs to the left (innermost first),
//! R-arcs to the right (outermost first).
//! ```
//!
//! Faces are traced by next-edge-after-reversal walking; with this
//! convention interior faces come out counterclockwise and the unbounded
//! face of the drawing is the one attached to the rightward-opening corner
//! at the latest vertex.

use crate::error::Error;
use crate::map::{MatedCrtMap, Side};
use crate::Result;

/// An edge copy of the drawing: double edges split into an L and an R copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCopy {
    pub u: u32,
    pub v: u32,
    pub side: Side,
}

/// Rotation system plus traced faces.
///
/// Dart `2c` points `u -> v` of copy `c`, dart `2c + 1` points back.
#[derive(Debug, Clone)]
pub struct RotationFaces {
    pub copies: Vec<EdgeCopy>,
    /// Concatenated per-vertex rotation lists (dart ids), CCW order.
    rotation: Vec<u32>,
    rot_offsets: Vec<u32>,
    /// Position of each dart inside its tail's rotation list.
    pos: Vec<u32>,
    /// Faces as dart cycles; `face_vertices` gives the tail sequence.
    pub faces: Vec<Vec<u32>>,
    pub face_of_dart: Vec<u32>,
    /// Index of the unbounded face of the drawing (the boundary face for
    /// disk maps, the endpoint bigon for sphere maps).
    pub outer_face: usize,
    /// V - E + F with edges counted with multiplicity.
    pub euler_characteristic: i64,
}

impl RotationFaces {
    pub fn dart_tail(&self, d: u32) -> u32 {
        let c = self.copies[(d / 2) as usize];
        if d % 2 == 0 {
            c.u
        } else {
            c.v
        }
    }

    pub fn dart_head(&self, d: u32) -> u32 {
        self.dart_tail(d ^ 1)
    }

    /// Rotation list (CCW) at a vertex.
    pub fn rotation_at(&self, v: u32) -> &[u32] {
        &self.rotation
            [self.rot_offsets[v as usize] as usize..self.rot_offsets[v as usize + 1] as usize]
    }

    /// Vertices along a face walk (tail of each dart).
    pub fn face_vertices(&self, face: usize) -> Vec<u32> {
        self.faces[face].iter().map(|&d| self.dart_tail(d)).collect()
    }

    /// Degrees (number of sides) of all faces except the outer one.
    pub fn interior_face_degrees(&self) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.outer_face)
            .map(|(_, f)| f.len())
            .collect()
    }

    /// First-visit vertex order around the outer face, rotated to start at
    /// the smallest vertex. The walk direction matches the disk convention:
    /// boundary vertices appear in increasing time order.
    pub fn outer_cycle(&self) -> Vec<u32> {
        let mut seen = std::collections::HashSet::new();
        let mut walk = Vec::new();
        for &d in &self.faces[self.outer_face] {
            let t = self.dart_tail(d);
            if seen.insert(t) {
                walk.push(t);
            }
        }
        if let Some(at) = walk.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i) {
            walk.rotate_left(at);
        }
        walk
    }
}

/// Build the rotation system and trace all faces.
pub fn rotation_system_and_faces(map: &MatedCrtMap) -> Result<RotationFaces> {
    let n = map.n();
    if n == 0 {
        return Err(Error::Domain("empty map".into()));
    }
    // Expand to edge copies.
    let mut copies = Vec::new();
    for e in map.edge_records() {
        match e.side {
            Side::Both => {
                copies.push(EdgeCopy { u: e.u, v: e.v, side: Side::L });
                copies.push(EdgeCopy { u: e.u, v: e.v, side: Side::R });
            }
            s => copies.push(EdgeCopy { u: e.u, v: e.v, side: s }),
        }
    }
    let n_darts = copies.len() * 2;

    // Gather darts per tail vertex.
    let mut deg = vec![0u32; n + 1];
    for c in &copies {
        deg[c.u as usize + 1] += 1;
        deg[c.v as usize + 1] += 1;
    }
    for i in 0..n {
        deg[i + 1] += deg[i];
    }
    let rot_offsets = deg;
    let mut rotation = vec![0u32; n_darts];
    let mut cursor: Vec<u32> = rot_offsets[..n].to_vec();
    for (ci, c) in copies.iter().enumerate() {
        for (tail, d) in [(c.u, 2 * ci as u32), (c.v, 2 * ci as u32 + 1)] {
            rotation[cursor[tail as usize] as usize] = d;
            cursor[tail as usize] += 1;
        }
    }

    // Sort each vertex's darts into CCW order.
    let sort_key = |tail: u32, d: u32| -> (u8, i64) {
        let c = &copies[(d / 2) as usize];
        let other = if d % 2 == 0 { c.v } else { c.u };
        let right = other > tail;
        match (c.side, right) {
            (Side::Consecutive, true) => (0, 0),
            (Side::L, true) => (1, other as i64),
            (Side::L, false) => (2, other as i64),
            (Side::Consecutive, false) => (3, 0),
            (Side::R, false) => (4, -(other as i64)),
            (Side::R, true) => (5, -(other as i64)),
            (Side::Both, _) => unreachable!("copies never carry Side::Both"),
        }
    };
    for v in 0..n {
        let (a, b) = (rot_offsets[v] as usize, rot_offsets[v + 1] as usize);
        rotation[a..b].sort_unstable_by_key(|&d| sort_key(v as u32, d));
    }
    let mut pos = vec![0u32; n_darts];
    for v in 0..n {
        let a = rot_offsets[v] as usize;
        let b = rot_offsets[v + 1] as usize;
        for (k, &d) in rotation[a..b].iter().enumerate() {
            pos[d as usize] = k as u32;
        }
    }

    let mut rf = RotationFaces {
        copies,
        rotation,
        rot_offsets,
        pos,
        faces: Vec::new(),
        face_of_dart: vec![u32::MAX; n_darts],
        outer_face: 0,
        euler_characteristic: 0,
    };

    // Trace faces: next dart = predecessor of the reversal in the rotation
    // at the head vertex.
    let next_face_dart = |rf: &RotationFaces, d: u32| -> u32 {
        let head = rf.dart_head(d);
        let list = rf.rotation_at(head);
        let p = rf.pos[(d ^ 1) as usize] as usize;
        list[(p + list.len() - 1) % list.len()]
    };
    for start in 0..n_darts as u32 {
        if rf.face_of_dart[start as usize] != u32::MAX {
            continue;
        }
        let face_id = rf.faces.len() as u32;
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            if rf.face_of_dart[d as usize] != u32::MAX {
                return Err(Error::Internal(format!(
                    "face tracing revisited dart {d} from a different face"
                )));
            }
            rf.face_of_dart[d as usize] = face_id;
            walk.push(d);
            d = next_face_dart(&rf, d);
            if d == start {
                break;
            }
        }
        rf.faces.push(walk);
    }

    // The unbounded face owns the rightward-opening corner at the latest
    // vertex: the corner after the last dart in its rotation list.
    let x_max = (n - 1) as u32;
    let last = *rf
        .rotation_at(x_max)
        .last()
        .ok_or_else(|| Error::Internal("latest vertex has no incident darts".into()))?;
    rf.outer_face = rf.face_of_dart[last as usize] as usize;

    let e = rf.copies.len() as i64;
    rf.euler_characteristic = n as i64 - e + rf.faces.len() as i64;
    Ok(rf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::{
        sample_disk_excursion, sample_plane, sample_sphere_excursion, BrownianPath, Topology,
    };
    use crate::map::build_map;

    fn synthetic(l: Vec<f64>, r: Vec<f64>, topology: Topology) -> BrownianPath {
        let n = l.len() - 1;
        let mut p = BrownianPath {
            gamma: std::f64::consts::SQRT_2,
            step: 1.0 / n as f64,
            topology,
            l,
            r,
            total_time: 1.0,
            boundary_length: 1.0,
            index_shift: 0.0,
            seed: 0,
            grid_origin: 0.0,
            cell_inf_l: Vec::new(),
            cell_inf_r: Vec::new(),
        };
        p.attach_grid_infima();
        p
    }

    #[test]
    fn three_cell_map_has_one_interior_triangle() {
        // Chain 0-1-2 plus a single L-arc {0,2}: one interior triangular
        // face, Euler characteristic 2.
        let p = synthetic(vec![0.0, 5.0, 4.0, 1.0], vec![3.0, 4.0, 0.0, 4.0], Topology::Plane);
        let m = build_map(&p).unwrap();
        assert_eq!(m.edge_count(), 3);
        let rf = rotation_system_and_faces(&m).unwrap();
        assert_eq!(rf.faces.len(), 2);
        assert_eq!(rf.euler_characteristic, 2);
        let interior = rf.interior_face_degrees();
        assert_eq!(interior, vec![3]);
        // Outer cycle in the walk direction that gives disk boundaries in
        // ascending time order; on this toy map that reads (0, 2, 1).
        assert_eq!(rf.outer_cycle(), vec![0, 2, 1]);
    }

    #[test]
    fn sphere_maps_euler_two() {
        for seed in 0..8 {
            let p = sample_sphere_excursion(1.2, 1.0 / 300.0, seed).unwrap();
            let m = build_map(&p).unwrap();
            let rf = rotation_system_and_faces(&m).unwrap();
            assert_eq!(rf.euler_characteristic, 2, "seed {seed}");
            assert!(rf.interior_face_degrees().iter().all(|&d| d == 3), "seed {seed}");
        }
    }

    #[test]
    fn plane_window_euler_two() {
        for seed in 0..6 {
            let p = sample_plane(1.5, 1.0 / 250.0, (-0.6, 0.6), seed).unwrap();
            let m = build_map(&p).unwrap();
            let rf = rotation_system_and_faces(&m).unwrap();
            assert_eq!(rf.euler_characteristic, 2, "seed {seed}");
            assert!(rf.interior_face_degrees().iter().all(|&d| d == 3), "seed {seed}");
        }
    }

    #[test]
    fn disk_outer_face_is_the_boundary_cycle() {
        for seed in 0..10 {
            let p = sample_disk_excursion(std::f64::consts::SQRT_2, 1.0 / 200.0, 1.0, 1.0, seed)
                .unwrap();
            let m = build_map(&p).unwrap();
            let rf = rotation_system_and_faces(&m).unwrap();
            assert_eq!(rf.euler_characteristic, 2, "seed {seed}");
            assert!(rf.interior_face_degrees().iter().all(|&d| d == 3), "seed {seed}");
            let outer = rf.outer_cycle();
            let boundary = m.boundary_order.clone();
            assert_eq!(outer.len(), boundary.len(), "seed {seed}");
            // Same cycle up to rotation, same orientation.
            let anchor = boundary[0];
            let at = outer.iter().position(|&v| v == anchor).expect("anchor on outer face");
            let rotated: Vec<u32> =
                (0..outer.len()).map(|k| outer[(at + k) % outer.len()]).collect();
            assert_eq!(rotated, boundary, "seed {seed}");
        }
    }

    #[test]
    fn every_dart_in_exactly_one_face() {
        let p = sample_disk_excursion(1.0, 1.0 / 150.0, 1.0, 1.0, 3).unwrap();
        let m = build_map(&p).unwrap();
        let rf = rotation_system_and_faces(&m).unwrap();
        let mut counts = vec![0u32; rf.copies.len() * 2];
        for f in &rf.faces {
            for &d in f {
                counts[d as usize] += 1;
            }
        }
        assert!(counts.iter().all(|&c| c == 1));
        let total_sides: usize = rf.faces.iter().map(|f| f.len()).sum();
        assert_eq!(total_sides, 2 * rf.copies.len());
    }
}
