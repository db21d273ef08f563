//! Dense and sparse symmetric eigensolvers used across the crate.
//!
//! Dense problems go through nalgebra. The sparse path is a thick-restart
//! Lanczos iteration with full reorthogonalization, which is all the
//! two-particle grids here need.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Eigenvalues and (column) eigenvectors of a dense symmetric matrix,
/// sorted ascending.
pub fn eigh_sorted(mat: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("matrix contains non-finite entries".into()));
    }
    let n = mat.nrows();
    let se = mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// Symmetric sparse matrix in CSR form. Only the operations Lanczos needs.
#[derive(Debug, Clone)]
pub struct CsrSym {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrSym {
    /// Assemble from per-row triplets; duplicate columns are summed.
    pub fn from_rows(dim: usize, mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < row.len() {
                let col = row[k].0;
                let mut v = 0.0;
                while k < row.len() && row[k].0 == col {
                    v += row[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    col_idx.push(col);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrSym { dim, row_ptr, col_idx, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col_idx[k])] = self.vals[k];
            }
        }
        m
    }
}

/// Options for [`lowest_eigenvalues`].
#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Number of eigenvalues wanted, from the bottom of the spectrum.
    pub n_wanted: usize,
    /// Maximum Krylov basis size before a thick restart.
    pub max_basis: usize,
    /// Residual tolerance relative to the spectral scale.
    pub tol: f64,
    /// Maximum number of restart cycles.
    pub max_restarts: usize,
    /// Below this dimension the matrix is densified and solved directly.
    pub dense_cutoff: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { n_wanted: 6, max_basis: 200, tol: 1e-10, max_restarts: 80, dense_cutoff: 1400 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Deterministic pseudo-random unit vector (SplitMix64 stream).
fn start_vector(dim: usize, salt: u64) -> Vec<f64> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ salt;
    let mut v = Vec::with_capacity(dim);
    for _ in 0..dim {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        v.push((z as f64 / u64::MAX as f64) - 0.5);
    }
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Lowest eigenvalues of a symmetric sparse matrix by thick-restart Lanczos
/// with full reorthogonalization.
///
/// Returns the `n_wanted` smallest eigenvalues, ascending. Deterministic:
/// the start vector is a fixed pseudo-random stream.
pub fn lowest_eigenvalues(h: &CsrSym, opts: &LanczosOptions) -> Result<Vec<f64>> {
    let dim = h.dim;
    if opts.n_wanted == 0 {
        return Ok(Vec::new());
    }
    if dim <= opts.dense_cutoff || dim <= opts.n_wanted + 2 {
        let (vals, _) = eigh_sorted(&h.to_dense())?;
        return Ok(vals.into_iter().take(opts.n_wanted.min(dim)).collect());
    }
    let m = opts.max_basis.clamp(2 * opts.n_wanted + 12, dim);
    let keep = (2 * opts.n_wanted + 8).min(m / 2);

    let mut basis: Vec<Vec<f64>> = vec![start_vector(dim, 0)];
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut theta_seed: Vec<f64> = Vec::new(); // kept Ritz values after a restart
    let mut scale_est: f64 = 1.0;

    for cycle in 0..opts.max_restarts {
        // Re-seed the projected matrix: kept Ritz values on the diagonal.
        t.fill(0.0);
        for (i, &th) in theta_seed.iter().enumerate() {
            t[(i, i)] = th;
        }

        // Expand the basis to m vectors. Column j of T is (re)computed from
        // explicit projections, which doubles as full reorthogonalization.
        let mut j = basis.len() - 1;
        let (mut wlast, beta_last) = loop {
            let mut w = vec![0.0; dim];
            h.matvec(&basis[j], &mut w);
            let norm_before = norm(&w);
            for i in 0..=j {
                let c = dot(&basis[i], &w);
                t[(i, j)] = c;
                t[(j, i)] = c;
                axpy(-c, &basis[i], &mut w);
            }
            // Second Gram-Schmidt pass when the first one cancelled heavily.
            if norm(&w) < 0.5 * norm_before {
                for i in 0..=j {
                    let c = dot(&basis[i], &w);
                    t[(i, j)] += c;
                    t[(j, i)] = t[(i, j)];
                    axpy(-c, &basis[i], &mut w);
                }
            }
            let beta = norm(&w);
            if j + 1 >= m {
                break (w, beta);
            }
            if beta < 1e-13 * scale_est {
                // Invariant subspace: inject a fresh deterministic direction.
                let mut f = start_vector(dim, (cycle as u64 + 1) * 7919 + j as u64);
                for v in basis.iter() {
                    let c = dot(v, &f);
                    axpy(-c, v, &mut f);
                }
                let nf = norm(&f);
                if nf < 1e-8 {
                    break (w, 0.0);
                }
                f.iter_mut().for_each(|x| *x /= nf);
                basis.push(f);
            } else {
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
            }
            j += 1;
        };

        let cur = basis.len();
        let tview = t.view((0, 0), (cur, cur)).into_owned();
        let (theta, s) = eigh_sorted(&tview)?;
        scale_est = theta.iter().fold(scale_est, |acc: f64, &v| acc.max(v.abs()));
        let n_check = opts.n_wanted.min(cur);
        let converged =
            (0..n_check).all(|i| beta_last * s[(cur - 1, i)].abs() <= opts.tol * scale_est);
        if converged {
            return Ok(theta.into_iter().take(opts.n_wanted).collect());
        }

        // Thick restart: keep the lowest Ritz vectors plus the residual.
        let k = keep.min(cur - 1);
        let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
        for col in 0..k {
            let mut y = vec![0.0; dim];
            for (i, v) in basis.iter().enumerate() {
                axpy(s[(i, col)], v, &mut y);
            }
            new_basis.push(y);
        }
        for i in 0..new_basis.len() {
            for jj in 0..i {
                let (head, tail) = new_basis.split_at_mut(i);
                let c = dot(&head[jj], &tail[0]);
                axpy(-c, &head[jj], &mut tail[0]);
            }
            let n = norm(&new_basis[i]);
            new_basis[i].iter_mut().for_each(|x| *x /= n);
        }
        theta_seed = theta[..k].to_vec();
        if beta_last > 1e-13 * scale_est {
            wlast.iter_mut().for_each(|x| *x /= beta_last);
            for v in new_basis.iter() {
                let c = dot(v, &wlast);
                axpy(-c, v, &mut wlast);
            }
            let nw = norm(&wlast);
            if nw > 1e-8 {
                wlast.iter_mut().for_each(|x| *x /= nw);
                new_basis.push(wlast);
            }
        }
        if new_basis.len() == k {
            // Residual vanished; continue from a fresh orthogonal direction.
            let mut f = start_vector(dim, 0xabcd + cycle as u64);
            for v in new_basis.iter() {
                let c = dot(v, &f);
                axpy(-c, v, &mut f);
            }
            let nf = norm(&f);
            f.iter_mut().for_each(|x| *x /= nf);
            new_basis.push(f);
        }
        basis = new_basis;
    }
    Err(Error::Eigensolver(format!(
        "Lanczos did not converge within {} restarts (basis {})",
        opts.max_restarts, m
    )))
}
