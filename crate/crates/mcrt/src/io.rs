//! File formats: binary path and map files, CSV exports, SVG figures.
//!
//! Path file (little endian): magic `MCRTPATH`, version u32, gamma f64,
//! step f64, topology u8, n u64, theta f64, a f64, l f64, seed u64, then
//! `n` pairs of f64 `(L_i, R_i)` at the grid samples. The `a` field holds
//! the duration for sphere/disk paths and the grid origin for plane paths
//! (a plane window is reconstructed as `origin + step * i`).
//!
//! Map file (little endian): magic `MCRTMAP0`, n u64, topology u8,
//! step f64, then CSR offsets (`n + 1` u64), entries
//! (neighbor u32, mult u8, side u8), boundary count u64 and boundary
//! vertex list u32.

use crate::brownian::{BrownianPath, Topology};
use crate::curve::EmbeddedCurve;
use crate::embed::TutteEmbedding;
use crate::error::Error;
use crate::map::{MatedCrtMap, Side};
use crate::Result;
use std::io::{Read, Write};
use std::path::Path;

const PATH_MAGIC: &[u8; 8] = b"MCRTPATH";
const MAP_MAGIC: &[u8; 8] = b"MCRTMAP0";
const PATH_VERSION: u32 = 1;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}
fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}
fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, at: 0 }
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.buf.len() {
            return Err(Error::Format("unexpected end of file".into()));
        }
        let s = &self.buf[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Serialize a path to the binary format.
pub fn path_to_bytes(p: &BrownianPath) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + 16 * p.l.len());
    out.extend_from_slice(PATH_MAGIC);
    put_u32(&mut out, PATH_VERSION);
    put_f64(&mut out, p.gamma);
    put_f64(&mut out, p.step);
    out.push(p.topology.as_u8());
    put_u64(&mut out, p.l.len() as u64);
    put_f64(&mut out, p.index_shift);
    let a = match p.topology {
        Topology::Plane => p.grid_origin,
        _ => p.total_time,
    };
    put_f64(&mut out, a);
    put_f64(&mut out, p.boundary_length);
    put_u64(&mut out, p.seed);
    for (l, r) in p.l.iter().zip(&p.r) {
        put_f64(&mut out, *l);
        put_f64(&mut out, *r);
    }
    out
}

pub fn path_from_bytes(buf: &[u8]) -> Result<BrownianPath> {
    let mut rd = Reader::new(buf);
    if rd.take(8)? != PATH_MAGIC {
        return Err(Error::Format("bad path magic".into()));
    }
    let version = rd.u32()?;
    if version != PATH_VERSION {
        return Err(Error::Format(format!("unsupported path version {version}")));
    }
    let gamma = rd.f64()?;
    let step = rd.f64()?;
    let topology = Topology::from_u8(rd.u8()?)?;
    let n = rd.u64()? as usize;
    let index_shift = rd.f64()?;
    let a = rd.f64()?;
    let boundary_length = rd.f64()?;
    let seed = rd.u64()?;
    let mut l = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for _ in 0..n {
        l.push(rd.f64()?);
        r.push(rd.f64()?);
    }
    let (grid_origin, total_time) = match topology {
        Topology::Plane => (a, step * (n.max(1) - 1) as f64),
        _ => (0.0, a),
    };
    let mut path = BrownianPath {
        gamma,
        step,
        topology,
        l,
        r,
        total_time,
        boundary_length,
        index_shift,
        seed,
        grid_origin,
        cell_inf_l: Vec::new(),
        cell_inf_r: Vec::new(),
    };
    // The infima are a deterministic function of (seed, samples), so a
    // reloaded path rebuilds exactly the same map.
    path.attach_sampled_infima();
    Ok(path)
}

pub fn write_path(path: &BrownianPath, file: &Path) -> Result<()> {
    let mut f = std::fs::File::create(file)?;
    f.write_all(&path_to_bytes(path))?;
    Ok(())
}

pub fn read_path(file: &Path) -> Result<BrownianPath> {
    let mut buf = Vec::new();
    std::fs::File::open(file)?.read_to_end(&mut buf)?;
    path_from_bytes(&buf)
}

/// Serialize a map to the binary format.
pub fn map_to_bytes(m: &MatedCrtMap) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAP_MAGIC);
    put_u64(&mut out, m.n() as u64);
    out.push(m.topology.as_u8());
    put_f64(&mut out, m.step);
    for &o in &m.offsets {
        put_u64(&mut out, o);
    }
    for i in 0..m.neighbors.len() {
        put_u32(&mut out, m.neighbors[i]);
        out.push(m.mult[i]);
        out.push(m.side[i].as_u8());
    }
    put_u64(&mut out, m.boundary_order.len() as u64);
    for &b in &m.boundary_order {
        put_u32(&mut out, b);
    }
    out
}

pub fn map_from_bytes(buf: &[u8]) -> Result<MatedCrtMap> {
    let mut rd = Reader::new(buf);
    if rd.take(8)? != MAP_MAGIC {
        return Err(Error::Format("bad map magic".into()));
    }
    let n = rd.u64()? as usize;
    let topology = Topology::from_u8(rd.u8()?)?;
    let step = rd.f64()?;
    let mut offsets = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        offsets.push(rd.u64()?);
    }
    let entries = *offsets.last().unwrap_or(&0) as usize;
    let mut neighbors = Vec::with_capacity(entries);
    let mut mult = Vec::with_capacity(entries);
    let mut side = Vec::with_capacity(entries);
    for _ in 0..entries {
        neighbors.push(rd.u32()?);
        mult.push(rd.u8()?);
        side.push(Side::from_u8(rd.u8()?)?);
    }
    let nb = rd.u64()? as usize;
    let mut boundary_order = Vec::with_capacity(nb);
    for _ in 0..nb {
        boundary_order.push(rd.u32()?);
    }
    // Vertex times are reconstructed from the grid; plane maps loaded from
    // file sit on an unshifted grid starting at one step.
    Ok(MatedCrtMap {
        topology,
        step,
        vertex_times: (1..=n).map(|k| step * k as f64).collect(),
        offsets,
        neighbors,
        mult,
        side,
        boundary_order,
    })
}

pub fn write_map(m: &MatedCrtMap, file: &Path) -> Result<()> {
    let mut f = std::fs::File::create(file)?;
    f.write_all(&map_to_bytes(m))?;
    Ok(())
}

pub fn read_map(file: &Path) -> Result<MatedCrtMap> {
    let mut buf = Vec::new();
    std::fs::File::open(file)?.read_to_end(&mut buf)?;
    map_from_bytes(&buf)
}

/// `t,L,R` per grid sample.
pub fn path_csv(p: &BrownianPath) -> String {
    let mut s = String::from("t,L,R\n");
    for (i, (l, r)) in p.l.iter().zip(&p.r).enumerate() {
        s.push_str(&format!("{:.12},{:.12},{:.12}\n", p.time(i), l, r));
    }
    s
}

/// `u,v,mult,side` per undirected edge.
pub fn edge_list_csv(m: &MatedCrtMap) -> String {
    let mut s = String::from("u,v,mult,side\n");
    for e in m.edge_records() {
        let side = match e.side {
            Side::L => "L",
            Side::R => "R",
            Side::Both => "Both",
            Side::Consecutive => "Consecutive",
        };
        s.push_str(&format!("{},{},{},{}\n", e.u, e.v, e.mult(), side));
    }
    s
}

/// `degree,count`.
pub fn degree_histogram_csv(m: &MatedCrtMap) -> String {
    let mut s = String::from("degree,count\n");
    for (d, &c) in m.degree_histogram().iter().enumerate() {
        if c > 0 {
            s.push_str(&format!("{d},{c}\n"));
        }
    }
    s
}

/// `vertex,time,x,y,boundary_flag,embedded_flag`.
pub fn embedding_csv(m: &MatedCrtMap, emb: &TutteEmbedding) -> String {
    let mask = m.boundary_mask();
    let mut s = String::from("vertex,time,x,y,boundary_flag,embedded_flag\n");
    for v in 0..m.n() {
        let z = emb.positions[v];
        s.push_str(&format!(
            "{},{:.12},{:.12},{:.12},{},{}\n",
            v,
            m.vertex_times[v],
            z.re,
            z.im,
            mask[v] as u8,
            emb.embedded[v] as u8
        ));
    }
    s
}

/// `t,x,y` per curve vertex.
pub fn curve_csv(c: &EmbeddedCurve) -> String {
    let mut s = String::from("t,x,y\n");
    for (t, z) in c.times.iter().zip(&c.points) {
        s.push_str(&format!("{:.12},{:.12},{:.12}\n", t, z.re, z.im));
    }
    s
}

pub fn curve_from_csv(text: &str) -> Result<EmbeddedCurve> {
    let mut points = Vec::new();
    let mut times = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if k == 0 || line.is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let mut next = || -> Result<f64> {
            it.next()
                .ok_or_else(|| Error::Format(format!("short row {k}")))?
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("row {k}: {e}")))
        };
        let t = next()?;
        let x = next()?;
        let y = next()?;
        times.push(t);
        points.push(num_complex::Complex64::new(x, y));
    }
    EmbeddedCurve::new(points, times, crate::curve::CurveKind::Synthetic)
}

/// SVG options for embedding figures.
#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub size: u32,
    /// Color vertices and edges by cell time.
    pub color_by_time: bool,
    /// Draw edges (off for very large maps).
    pub draw_edges: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { size: 1000, color_by_time: false, draw_edges: true }
    }
}

/// Render an embedding: vertices as disks scaled by log-degree, edges as
/// straight segments. Output is deterministic for golden-file tests.
pub fn embedding_svg(m: &MatedCrtMap, emb: &TutteEmbedding, opts: &SvgOptions) -> String {
    let size = opts.size as f64;
    // Fit the embedded points into the canvas with a small margin.
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in 0..m.n() {
        if emb.embedded[v] {
            let z = emb.positions[v];
            lo_x = lo_x.min(z.re);
            hi_x = hi_x.max(z.re);
            lo_y = lo_y.min(z.im);
            hi_y = hi_y.max(z.im);
        }
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let pad = 0.03 * span;
    let scale = size / (span + 2.0 * pad);
    let tx = |z: num_complex::Complex64| -> (f64, f64) {
        ((z.re - lo_x + pad) * scale, size - (z.im - lo_y + pad) * scale)
    };
    let n = m.n() as f64;
    let color = |v: usize| -> String {
        if opts.color_by_time {
            let hue = 300.0 * (v as f64) / n;
            format!("hsl({hue:.1},85%,45%)")
        } else {
            "#1f4e79".to_string()
        }
    };
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
        opts.size
    ));
    s.push_str(&format!(
        "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
        opts.size
    ));
    if opts.draw_edges {
        s.push_str("<g stroke=\"#9aa7b0\" stroke-width=\"0.3\" stroke-opacity=\"0.6\">\n");
        for e in m.edge_records() {
            if emb.embedded[e.u as usize] && emb.embedded[e.v as usize] {
                let (x1, y1) = tx(emb.positions[e.u as usize]);
                let (x2, y2) = tx(emb.positions[e.v as usize]);
                s.push_str(&format!(
                    "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>\n"
                ));
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g stroke=\"none\">\n");
    let r_base = 0.35 * scale * m.step.sqrt().max(1.0 / n.sqrt());
    for v in 0..m.n() {
        if !emb.embedded[v] {
            continue;
        }
        let (x, y) = tx(emb.positions[v]);
        let r = r_base * (1.0 + (m.degree(v as u32) as f64).ln());
        s.push_str(&format!(
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.3}\" fill=\"{}\"/>\n",
            color(v)
        ));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Render a curve as a polyline over a light backdrop of the embedding.
pub fn curve_svg(c: &EmbeddedCurve, size: u32) -> String {
    let size_f = size as f64;
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in &c.points {
        lo_x = lo_x.min(z.re);
        hi_x = hi_x.max(z.re);
        lo_y = lo_y.min(z.im);
        hi_y = hi_y.max(z.im);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let pad = 0.03 * span;
    let scale = size_f / (span + 2.0 * pad);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n<polyline fill=\"none\" stroke=\"#b03030\" stroke-width=\"0.6\" points=\"",
        size
    ));
    for z in &c.points {
        let x = (z.re - lo_x + pad) * scale;
        let y = size_f - (z.im - lo_y + pad) * scale;
        s.push_str(&format!("{x:.3},{y:.3} "));
    }
    s.push_str("\"/>\n</svg>\n");
    s
}
