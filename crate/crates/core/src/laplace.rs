//! P1 finite-element forms for the Laplace-Beltrami operator on conformal
//! 2-D metrics.
//!
//! Stiffness entries are the conformally invariant flat Dirichlet form
//! int lambda^(n-2) grad phi_i . grad phi_j dx (exact for n = 2); mass
//! entries are int lambda^n phi_i phi_j dx with the 3-midpoint rule. The
//! weak operator is -Laplace + c0.

use std::collections::HashMap;

use crate::mesh::DomainMesh;
use crate::spaceform::SpaceFormModel;

/// Symmetric sparse matrix in CSR layout (full storage).
#[derive(Debug, Clone)]
pub struct SparseSym {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SparseSym {
    fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        // Deterministic merge: bucket per row, sort by column, accumulate.
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in &mut rows {
            r.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < r.len() {
                let col = r[k].0;
                let mut acc = 0.0;
                while k < r.len() && r[k].0 == col {
                    acc += r[k].1;
                    k += 1;
                }
                cols.push(col);
                vals.push(acc);
            }
            row_ptr.push(cols.len());
        }
        SparseSym {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[i] = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] == i {
                    d[i] = self.vals[k];
                }
            }
        }
        d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            if self.cols[k] == j {
                return self.vals[k];
            }
        }
        0.0
    }

    /// Restrict to the given (sorted) index subset.
    pub fn restrict(&self, keep: &[usize]) -> SparseSym {
        let mut renumber: HashMap<usize, usize> = HashMap::with_capacity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            renumber.insert(old, new);
        }
        let mut triplets = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for k in self.row_ptr[old_i]..self.row_ptr[old_i + 1] {
                if let Some(&new_j) = renumber.get(&self.cols[k]) {
                    triplets.push((new_i, new_j, self.vals[k]));
                }
            }
        }
        SparseSym::from_triplets(keep.len(), &triplets)
    }

    /// A + alpha B (requires equal dimensions; sparsity is merged).
    pub fn add_scaled(&self, other: &SparseSym, alpha: f64) -> SparseSym {
        assert_eq!(self.n, other.n);
        let mut triplets = Vec::new();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                triplets.push((i, self.cols[k], self.vals[k]));
            }
            for k in other.row_ptr[i]..other.row_ptr[i + 1] {
                triplets.push((i, other.cols[k], alpha * other.vals[k]));
            }
        }
        SparseSym::from_triplets(self.n, &triplets)
    }
}

/// Assembled stiffness and metric mass forms for -Laplace + c0.
#[derive(Debug, Clone)]
pub struct AssembledForms {
    pub stiffness: SparseSym,
    pub mass: SparseSym,
    pub c0: f64,
}

impl AssembledForms {
    /// The operator matrix S + c0 M.
    pub fn system(&self) -> SparseSym {
        self.stiffness.add_scaled(&self.mass, self.c0)
    }
}

/// Assemble the Laplace-Beltrami bilinear form and metric mass form.
pub fn assemble_laplace_beltrami(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    c0: f64,
) -> AssembledForms {
    let nv = mesh.vertex_count();
    let n = model.dim as i32;
    let mut st = Vec::with_capacity(9 * mesh.cell_count());
    let mut ma = Vec::with_capacity(9 * mesh.cell_count());
    for (ci, c) in mesh.cells.iter().enumerate() {
        let area = mesh.flat_cell_area(ci);
        let [a, b, d] = [mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]];
        let rot = |p: [f64; 2], q: [f64; 2]| [-(q[1] - p[1]), q[0] - p[0]];
        let grads = [rot(b, d), rot(d, a), rot(a, b)];
        // Edge midpoints opposite to each local vertex; P1 hats take values
        // (1/2, 1/2, 0) patterns there.
        let mids = [
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0],
            [(b[0] + d[0]) / 2.0, (b[1] + d[1]) / 2.0],
            [(d[0] + a[0]) / 2.0, (d[1] + a[1]) / 2.0],
        ];
        let w: Vec<f64> = mids
            .iter()
            .map(|m| area / 3.0 * model.lambda(m).powi(n))
            .collect();
        // lambda^(n-2) factor of the stiffness integrand at midpoints.
        let wst: Vec<f64> = mids
            .iter()
            .map(|m| area / 3.0 * model.lambda(m).powi(n - 2))
            .collect();
        let phi = |local: usize, q: usize| -> f64 {
            // hat of local vertex at edge-midpoint q (edges: 01, 12, 20)
            const TABLE: [[f64; 3]; 3] = [[0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.0, 0.5, 0.5]];
            TABLE[local][q]
        };
        for i in 0..3 {
            for j in 0..3 {
                let gdot =
                    (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]) / (4.0 * area * area);
                let s: f64 = (0..3).map(|q| wst[q] * gdot).sum();
                let m: f64 = (0..3).map(|q| w[q] * phi(i, q) * phi(j, q)).sum();
                st.push((c[i], c[j], s));
                ma.push((c[i], c[j], m));
            }
        }
    }
    AssembledForms {
        stiffness: SparseSym::from_triplets(nv, &st),
        mass: SparseSym::from_triplets(nv, &ma),
        c0,
    }
}
