use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use super::PauliHamiltonian;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Largest register accepted by [`eigensolve_dense`] (a 4096×4096 complex matrix).
pub const DENSE_MAX_QUBITS: usize = 12;

/// Register size up to which [`ground_energy`] diagonalizes densely.
const GROUND_DENSE_MAX_QUBITS: usize = 8;

/// Eigenpairs sorted by ascending eigenvalue; column `i` of `eigenvectors`
/// belongs to `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl EigenDecomposition {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `U D U†`, only meaningful for a full spectrum.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let u = &self.eigenvectors;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)),
        ));
        u * d * u.adjoint()
    }

    fn sorted(values: Vec<f64>, vectors: DMatrix<Complex64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);
        EigenDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Full spectrum by dense Hermitian diagonalization.
pub fn eigensolve_dense(h: &PauliHamiltonian) -> Result<EigenDecomposition> {
    if h.n() > DENSE_MAX_QUBITS {
        return Err(Error::TooLarge {
            qubits: h.n(),
            limit: DENSE_MAX_QUBITS,
        });
    }
    let eig = SymmetricEigen::new(h.to_dense());
    Ok(EigenDecomposition::sorted(
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Number of lowest eigenpairs.
    pub k: usize,
    /// Residual target, relative to `Σ|c|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed of the random starting vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            k: 1,
            tol: 1e-10,
            max_iter: 300,
            seed: 0x5eed,
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for u in basis {
            let c = dot(u, w);
            w.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn random_unit(dim: usize, rng: &mut impl Rng, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    orthogonalize(&mut v, basis);
    let nv = norm(&v);
    if nv < 1e-10 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nv);
    Some(v)
}

/// Eigenpairs of the tridiagonal Lanczos matrix, ascending.
fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Lowest `k` eigenpairs by Lanczos iteration with full reorthogonalization.
///
/// The Hamiltonian is applied term-wise to state vectors; no matrix is formed.
/// Converged when every requested Ritz pair has `‖Hv − Ev‖ ≤ tol · Σ|c|`.
pub fn eigensolve_lanczos(h: &PauliHamiltonian, opts: LanczosOptions) -> Result<EigenDecomposition> {
    let dim = h.dim();
    if opts.k == 0 || opts.k > dim {
        return Err(Error::Config(format!(
            "requested {} eigenpairs of a {dim}-dimensional space",
            opts.k
        )));
    }
    if h.is_empty() {
        // the zero operator: every vector is an eigenvector
        let eigenvectors = DMatrix::from_fn(dim, opts.k, |r, c| {
            Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
        });
        return Ok(EigenDecomposition {
            eigenvalues: vec![0.0; opts.k],
            eigenvectors,
        });
    }
    let scale = h.norm_bound();
    let threshold = opts.tol * scale;
    let max_iter = opts.max_iter.min(dim).max(opts.k);
    let mut rng = rng_from_seed(opts.seed);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut v = random_unit(dim, &mut rng, &basis).expect("nonzero random start vector");
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut best_residual = f64::INFINITY;

    loop {
        h.apply_into(&v, &mut w)?;
        let alpha = dot(&v, &w).re;
        basis.push(std::mem::take(&mut v));
        alphas.push(alpha);
        orthogonalize(&mut w, &basis);
        let beta = norm(&w);
        let m = basis.len();
        let breakdown = beta <= 1e-12 * scale;

        if m >= opts.k && (breakdown || m.is_multiple_of(4) || m == max_iter) {
            let (values, vectors) = tridiagonal_eigen(&alphas, &betas);
            let estimate = (0..opts.k)
                .map(|i| (beta * vectors[(m - 1, i)]).abs())
                .fold(0.0, f64::max);
            if estimate <= threshold || breakdown {
                let result = ritz_pairs(h, &basis, &values, &vectors, opts.k)?;
                let residual = result.1;
                best_residual = best_residual.min(residual);
                if residual <= threshold {
                    return Ok(result.0);
                }
            } else {
                best_residual = best_residual.min(estimate);
            }
        }
        if m >= max_iter {
            return Err(Error::Convergence {
                iterations: m,
                residual: best_residual,
            });
        }
        if breakdown {
            // invariant subspace exhausted; continue in its complement
            match random_unit(dim, &mut rng, &basis) {
                Some(fresh) => {
                    v = fresh;
                    betas.push(0.0);
                }
                None => {
                    return Err(Error::Convergence {
                        iterations: m,
                        residual: best_residual,
                    })
                }
            }
        } else {
            betas.push(beta);
            v = w.iter().map(|x| x / beta).collect();
        }
    }
}

fn ritz_pairs(
    h: &PauliHamiltonian,
    basis: &[Vec<Complex64>],
    values: &[f64],
    vectors: &DMatrix<f64>,
    k: usize,
) -> Result<(EigenDecomposition, f64)> {
    let dim = h.dim();
    let mut eigenvectors = DMatrix::<Complex64>::zeros(dim, k);
    let mut worst = 0.0f64;
    for i in 0..k {
        let mut y = vec![Complex64::new(0.0, 0.0); dim];
        for (j, u) in basis.iter().enumerate() {
            let s = vectors[(j, i)];
            y.iter_mut().zip(u).for_each(|(a, b)| *a += b * s);
        }
        let ny = norm(&y);
        y.iter_mut().for_each(|a| *a /= ny);
        let hy = h.apply(&y)?;
        let r = hy
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b * values[i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
        for (r_idx, a) in y.into_iter().enumerate() {
            eigenvectors[(r_idx, i)] = a;
        }
    }
    Ok((
        EigenDecomposition {
            eigenvalues: values[..k].to_vec(),
            eigenvectors,
        },
        worst,
    ))
}

/// Exact ground-state energy: dense diagonalization for small registers,
/// Lanczos otherwise.
pub fn ground_energy(h: &PauliHamiltonian) -> Result<f64> {
    if h.n() <= GROUND_DENSE_MAX_QUBITS {
        let values = h.to_dense().symmetric_eigenvalues();
        Ok(values.iter().copied().fold(f64::INFINITY, f64::min))
    } else {
        Ok(eigensolve_lanczos(h, LanczosOptions::default())?.ground_energy())
    }
}
