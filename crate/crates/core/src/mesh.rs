//! Simplicial meshes of star-shaped 2-D domains about the chart origin.
//!
//! The level-0 mesh is a hexagonal disk template (rings of 6j vertices)
//! mapped radially onto the domain: template point at fraction f and angle
//! theta lands at chart radius f * rho(theta). Refinement splits every
//! triangle into four; midpoints of boundary edges are re-projected onto the
//! exact radial profile so boundary curvature converges.

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spaceform::SpaceFormModel;

/// Number of rings in the level-0 template.
const BASE_RINGS: usize = 6;
/// Dense sampling used to bound rho from below/above.
const PROFILE_SCAN: usize = 4096;

/// Truncated Fourier radial profile
/// rho(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta), k <= 8.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub a0: f64,
    pub cos_coeffs: [f64; 8],
    pub sin_coeffs: [f64; 8],
}

impl RadialProfile {
    pub fn circle(radius: f64) -> Self {
        RadialProfile {
            a0: radius,
            cos_coeffs: [0.0; 8],
            sin_coeffs: [0.0; 8],
        }
    }

    pub fn new(a0: f64, cos_coeffs: [f64; 8], sin_coeffs: [f64; 8]) -> Self {
        RadialProfile {
            a0,
            cos_coeffs,
            sin_coeffs,
        }
    }

    /// Fourier fit of the polar radius of an ellipse with semi-axes a, b
    /// (even cosine harmonics up to k = 8; truncation error ~ q^5 with
    /// q = ((a-b)/(a+b))^2, far below discretization error for mild aspect
    /// ratios).
    pub fn ellipse(a: f64, b: f64) -> Self {
        let n = 4096;
        let rho = |t: f64| {
            let c = t.cos();
            let s = t.sin();
            a * b / (b * b * c * c + a * a * s * s).sqrt()
        };
        let mut a0 = 0.0;
        let mut cos_coeffs = [0.0; 8];
        for i in 0..n {
            let t = TAU * i as f64 / n as f64;
            let r = rho(t);
            a0 += r;
            for (k, ck) in cos_coeffs.iter_mut().enumerate() {
                *ck += 2.0 * r * (((k + 1) as f64) * t).cos();
            }
        }
        a0 /= n as f64;
        for ck in cos_coeffs.iter_mut() {
            *ck /= n as f64;
        }
        RadialProfile::new(a0, cos_coeffs, [0.0; 8])
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut r = self.a0;
        for k in 0..8 {
            let kk = (k + 1) as f64;
            r += self.cos_coeffs[k] * (kk * theta).cos() + self.sin_coeffs[k] * (kk * theta).sin();
        }
        r
    }

    pub fn d1(&self, theta: f64) -> f64 {
        let mut r = 0.0;
        for k in 0..8 {
            let kk = (k + 1) as f64;
            r += kk * (self.sin_coeffs[k] * (kk * theta).cos() - self.cos_coeffs[k] * (kk * theta).sin());
        }
        r
    }

    pub fn d2(&self, theta: f64) -> f64 {
        let mut r = 0.0;
        for k in 0..8 {
            let kk = (k + 1) as f64;
            r -= kk * kk
                * (self.cos_coeffs[k] * (kk * theta).cos() + self.sin_coeffs[k] * (kk * theta).sin());
        }
        r
    }

    /// (min, argmin, max) of rho over a dense scan.
    fn scan(&self) -> (f64, f64, f64) {
        let mut min = f64::INFINITY;
        let mut arg = 0.0;
        let mut max = f64::NEG_INFINITY;
        for i in 0..PROFILE_SCAN {
            let t = TAU * i as f64 / PROFILE_SCAN as f64;
            let r = self.eval(t);
            if r < min {
                min = r;
                arg = t;
            }
            max = max.max(r);
        }
        (min, arg, max)
    }

    /// Point on the boundary curve at angle theta.
    pub fn point(&self, theta: f64) -> [f64; 2] {
        let r = self.eval(theta);
        [r * theta.cos(), r * theta.sin()]
    }

    /// Flat curvature of the boundary curve (outward-normal convention;
    /// positive for convex domains).
    pub fn flat_curvature(&self, theta: f64) -> f64 {
        let r = self.eval(theta);
        let r1 = self.d1(theta);
        let r2 = self.d2(theta);
        (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1).powf(1.5)
    }

    /// Flat unit tangent (counterclockwise) and outward unit normal at theta.
    pub fn frame(&self, theta: f64) -> ([f64; 2], [f64; 2]) {
        let r = self.eval(theta);
        let r1 = self.d1(theta);
        let (st, ct) = theta.sin_cos();
        let tx = r1 * ct - r * st;
        let ty = r1 * st + r * ct;
        let len = (tx * tx + ty * ty).sqrt();
        let t = [tx / len, ty / len];
        ([t[0], t[1]], [t[1], -t[0]])
    }
}

/// Star-shaped domain specification.
#[derive(Debug, Clone)]
pub struct StarDomainSpec {
    pub dim: usize,
    pub profile: RadialProfile,
    /// Refinement level; target mesh size ~ 2^-level * base size.
    pub level: u32,
}

/// Triangle mesh with an explicit, consistently oriented boundary loop.
#[derive(Debug, Clone)]
pub struct DomainMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise triangles.
    pub cells: Vec<[usize; 3]>,
    /// Boundary vertices in counterclockwise order.
    pub boundary_loop: Vec<usize>,
    /// Exact profile angle of each boundary-loop vertex.
    pub boundary_theta: Vec<f64>,
    /// vertex index -> position in boundary_loop.
    pub boundary_pos: Vec<Option<u32>>,
    pub profile: RadialProfile,
    pub level: u32,
    /// Largest metric edge length.
    pub h_max: f64,
}

/// Metric length of the chord from a to b (3-point Gauss along the segment).
pub fn metric_edge_length(model: &SpaceFormModel, a: [f64; 2], b: [f64; 2]) -> f64 {
    const T: [f64; 3] = [0.112701665379258, 0.5, 0.887298334620742];
    const W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    let flat = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let mut acc = 0.0;
    for q in 0..3 {
        let p = [a[0] + T[q] * (b[0] - a[0]), a[1] + T[q] * (b[1] - a[1])];
        acc += W[q] * model.lambda(&p);
    }
    flat * acc
}

fn flat_area(v: &[[f64; 2]], c: [usize; 3]) -> f64 {
    let [a, b, d] = [v[c[0]], v[c[1]], v[c[2]]];
    0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]))
}

impl DomainMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Boundary facets as index pairs (start, end), counterclockwise.
    pub fn boundary_facets(&self) -> Vec<[usize; 2]> {
        let n = self.boundary_loop.len();
        (0..n)
            .map(|i| [self.boundary_loop[i], self.boundary_loop[(i + 1) % n]])
            .collect()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_pos[v].is_some()
    }

    pub fn flat_cell_area(&self, cell: usize) -> f64 {
        flat_area(&self.vertices, self.cells[cell])
    }

    fn compute_h_max(&mut self, model: &SpaceFormModel) {
        let mut h = 0.0f64;
        for c in &self.cells {
            for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
                if a < b {
                    h = h.max(metric_edge_length(model, self.vertices[a], self.vertices[b]));
                }
            }
        }
        self.h_max = h;
    }

    /// Smallest metric edge length (used by the quasi-uniformity check).
    pub fn h_min(&self, model: &SpaceFormModel) -> f64 {
        let mut h = f64::INFINITY;
        for c in &self.cells {
            for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
                if a < b {
                    h = h.min(metric_edge_length(model, self.vertices[a], self.vertices[b]));
                }
            }
        }
        h
    }

    /// Structural invariants: positive areas, single closed boundary loop,
    /// each boundary facet in exactly one cell, outward flat normals.
    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            if flat_area(&self.vertices, *c) <= 0.0 {
                return Err(Error::UnsupportedConfiguration(format!(
                    "cell {i} has non-positive area"
                )));
            }
        }
        // Edge -> incident cell count and one representative.
        let mut edge_cells: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (ci, c) in self.cells.iter().enumerate() {
            for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
                let key = (a.min(b), a.max(b));
                let e = edge_cells.entry(key).or_insert((0, ci));
                e.0 += 1;
                e.1 = ci;
            }
        }
        let n = self.boundary_loop.len();
        if n < 3 {
            return Err(Error::UnsupportedConfiguration("boundary loop too short".into()));
        }
        for i in 0..n {
            let a = self.boundary_loop[i];
            let b = self.boundary_loop[(i + 1) % n];
            let key = (a.min(b), a.max(b));
            let Some(&(count, cell)) = edge_cells.get(&key) else {
                return Err(Error::UnsupportedConfiguration(format!(
                    "boundary facet {i} is not a mesh edge"
                )));
            };
            if count != 1 {
                return Err(Error::UnsupportedConfiguration(format!(
                    "boundary facet {i} belongs to {count} cells"
                )));
            }
            // Outward normal test against the adjacent cell centroid.
            let pa = self.vertices[a];
            let pb = self.vertices[b];
            let t = [pb[0] - pa[0], pb[1] - pa[1]];
            let nrm = [t[1], -t[0]];
            let fc = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            let cc = self.cells[cell];
            let cen = [
                (self.vertices[cc[0]][0] + self.vertices[cc[1]][0] + self.vertices[cc[2]][0]) / 3.0,
                (self.vertices[cc[0]][1] + self.vertices[cc[1]][1] + self.vertices[cc[2]][1]) / 3.0,
            ];
            if (fc[0] - cen[0]) * nrm[0] + (fc[1] - cen[1]) * nrm[1] <= 0.0 {
                return Err(Error::UnsupportedConfiguration(format!(
                    "boundary facet {i} normal points inward"
                )));
            }
        }
        // Interior edges must have exactly two incident cells.
        let boundary_keys: std::collections::HashSet<(usize, usize)> = self
            .boundary_facets()
            .iter()
            .map(|f| (f[0].min(f[1]), f[0].max(f[1])))
            .collect();
        for (key, (count, _)) in &edge_cells {
            if !boundary_keys.contains(key) && *count != 2 {
                return Err(Error::UnsupportedConfiguration(format!(
                    "interior edge {key:?} has {count} incident cells"
                )));
            }
        }
        Ok(())
    }

    /// Plain-text dump: vertex table, cell table, boundary facet table.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("mesh v1\n");
        out.push_str(&format!("vertices {}\n", self.vertices.len()));
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("{i} {:.17e} {:.17e}\n", v[0], v[1]));
        }
        out.push_str(&format!("cells {}\n", self.cells.len()));
        for (i, c) in self.cells.iter().enumerate() {
            out.push_str(&format!("{i} {} {} {}\n", c[0], c[1], c[2]));
        }
        out.push_str(&format!("boundary {}\n", self.boundary_loop.len()));
        let n = self.boundary_loop.len();
        for i in 0..n {
            out.push_str(&format!(
                "{i} {} {} {:.17e}\n",
                self.boundary_loop[i],
                self.boundary_loop[(i + 1) % n],
                self.boundary_theta[i]
            ));
        }
        out
    }
}

fn ring_base(j: usize) -> usize {
    // 1 + sum_{i<j} 6i
    1 + 3 * j * (j - 1)
}

/// Build the mesh of a star-shaped domain at the requested resolution level.
pub fn build_mesh(spec: &StarDomainSpec, model: &SpaceFormModel) -> Result<DomainMesh> {
    if spec.dim != 2 {
        return Err(Error::UnsupportedConfiguration(format!(
            "mesh generation supports dim = 2 only (requested {})",
            spec.dim
        )));
    }
    let (min_rho, arg_min, max_rho) = spec.profile.scan();
    if min_rho <= 0.0 {
        return Err(Error::InvalidProfile {
            min_rho,
            theta: arg_min,
        });
    }
    let chart = model.chart_radius();
    if max_rho >= chart {
        return Err(Error::ProfileExceedsChart {
            max_rho,
            chart_radius: chart,
        });
    }

    let m = BASE_RINGS;
    let mut vertices: Vec<[f64; 2]> = Vec::with_capacity(1 + 3 * m * (m + 1));
    vertices.push([0.0, 0.0]);
    for j in 1..=m {
        let f = j as f64 / m as f64;
        for k in 0..6 * j {
            let theta = TAU * k as f64 / (6 * j) as f64;
            let r = f * spec.profile.eval(theta);
            vertices.push([r * theta.cos(), r * theta.sin()]);
        }
    }

    let mut cells: Vec<[usize; 3]> = Vec::with_capacity(6 * m * m);
    for j in 1..=m {
        let outer = ring_base(j);
        let outer_len = 6 * j;
        if j == 1 {
            for k in 0..6 {
                cells.push([outer + k, outer + (k + 1) % 6, 0]);
            }
            continue;
        }
        let inner = ring_base(j - 1);
        let inner_len = 6 * (j - 1);
        for s in 0..6 {
            let o = |t: usize| outer + (s * j + t) % outer_len;
            let i = |t: usize| inner + (s * (j - 1) + t) % inner_len;
            for t in 0..j - 1 {
                cells.push([o(t), o(t + 1), i(t)]);
                cells.push([o(t + 1), i(t + 1), i(t)]);
            }
            cells.push([o(j - 1), o(j), i(j - 1)]);
        }
    }

    let boundary_loop: Vec<usize> = (0..6 * m).map(|k| ring_base(m) + k).collect();
    let boundary_theta: Vec<f64> = (0..6 * m).map(|k| TAU * k as f64 / (6 * m) as f64).collect();
    let mut boundary_pos = vec![None; vertices.len()];
    for (pos, &v) in boundary_loop.iter().enumerate() {
        boundary_pos[v] = Some(pos as u32);
    }

    let mut mesh = DomainMesh {
        vertices,
        cells,
        boundary_loop,
        boundary_theta,
        boundary_pos,
        profile: spec.profile.clone(),
        level: 0,
        h_max: 0.0,
    };
    mesh.compute_h_max(model);
    debug_assert!(mesh.validate().is_ok());
    let mut out = mesh;
    for _ in 0..spec.level {
        out = refine(&out, model);
    }
    Ok(out)
}

/// Regular 4-way refinement with boundary midpoints re-projected onto the
/// exact radial profile.
pub fn refine(mesh: &DomainMesh, model: &SpaceFormModel) -> DomainMesh {
    let mut vertices = mesh.vertices.clone();
    let n_old = mesh.boundary_loop.len();

    // Angles of boundary vertices by vertex index, for midpoint projection.
    let theta_of: HashMap<usize, f64> = mesh
        .boundary_loop
        .iter()
        .zip(mesh.boundary_theta.iter())
        .map(|(&v, &t)| (v, t))
        .collect();
    let boundary_edges: HashMap<(usize, usize), (f64, f64)> = (0..n_old)
        .map(|i| {
            let a = mesh.boundary_loop[i];
            let b = mesh.boundary_loop[(i + 1) % n_old];
            let ta = theta_of[&a];
            let mut tb = theta_of[&b];
            if tb <= ta {
                tb += TAU;
            }
            ((a.min(b), a.max(b)), (ta, tb))
        })
        .collect();

    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut boundary_mid_theta: HashMap<(usize, usize), f64> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = midpoint.get(&key) {
            return v;
        }
        let p = if let Some(&(ta, tb)) = boundary_edges.get(&key) {
            let tm = 0.5 * (ta + tb);
            boundary_mid_theta.insert(key, tm.rem_euclid(TAU));
            mesh.profile.point(tm)
        } else {
            let pa = vertices[a];
            let pb = vertices[b];
            [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0]
        };
        vertices.push(p);
        let v = vertices.len() - 1;
        midpoint.insert(key, v);
        v
    };

    let mut cells = Vec::with_capacity(4 * mesh.cells.len());
    for c in &mesh.cells {
        let [a, b, d] = *c;
        let mab = mid(a, b, &mut vertices);
        let mbd = mid(b, d, &mut vertices);
        let mda = mid(d, a, &mut vertices);
        cells.push([a, mab, mda]);
        cells.push([b, mbd, mab]);
        cells.push([d, mda, mbd]);
        cells.push([mab, mbd, mda]);
    }

    let mut boundary_loop = Vec::with_capacity(2 * n_old);
    let mut boundary_theta = Vec::with_capacity(2 * n_old);
    for i in 0..n_old {
        let a = mesh.boundary_loop[i];
        let b = mesh.boundary_loop[(i + 1) % n_old];
        let key = (a.min(b), a.max(b));
        boundary_loop.push(a);
        boundary_theta.push(mesh.boundary_theta[i]);
        boundary_loop.push(midpoint[&key]);
        boundary_theta.push(boundary_mid_theta[&key]);
    }
    let mut boundary_pos = vec![None; vertices.len()];
    for (pos, &v) in boundary_loop.iter().enumerate() {
        boundary_pos[v] = Some(pos as u32);
    }

    let mut out = DomainMesh {
        vertices,
        cells,
        boundary_loop,
        boundary_theta,
        boundary_pos,
        profile: mesh.profile.clone(),
        level: mesh.level + 1,
        h_max: 0.0,
    };
    out.compute_h_max(model);
    debug_assert!(out.validate().is_ok());
    out
}
