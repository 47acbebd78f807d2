use crate::error::{Error, Result};

/// Adam with bias-corrected moments. Moments mirror the shapes of the tensors
/// passed to the first [`AdamState::new`] call.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl AdamState {
    /// Defaults `β₁ = 0.9`, `β₂ = 0.999`, `ε = 1e−8`.
    pub fn new(lr: f64, shapes: &[usize]) -> Self {
        Self::with_betas(lr, 0.9, 0.999, 1e-8, shapes)
    }

    pub fn with_betas(lr: f64, beta1: f64, beta2: f64, eps: f64, shapes: &[usize]) -> Self {
        AdamState {
            lr,
            beta1,
            beta2,
            eps,
            step: 0,
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    pub fn for_tensors(lr: f64, tensors: &[&[f64]]) -> Self {
        let shapes: Vec<usize> = tensors.iter().map(|t| t.len()).collect();
        Self::new(lr, &shapes)
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    /// One descent step: `p ← p − α m̂ / (√v̂ + ε)`.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::dim("adam tensor count", self.m.len(), params.len().max(grads.len())));
        }
        for (i, (p, g)) in params.iter().zip(grads).enumerate() {
            if p.len() != self.m[i].len() || g.len() != self.m[i].len() {
                return Err(Error::dim(format!("adam tensor {i}"), self.m[i].len(), p.len()));
            }
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        for (i, (p, g)) in params.iter_mut().zip(grads).enumerate() {
            let (m, v) = (&mut self.m[i], &mut self.v[i]);
            for k in 0..p.len() {
                m[k] = self.beta1 * m[k] + (1.0 - self.beta1) * g[k];
                v[k] = self.beta2 * v[k] + (1.0 - self.beta2) * g[k] * g[k];
                let m_hat = m[k] / c1;
                let v_hat = v[k] / c2;
                p[k] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
        Ok(())
    }

    /// Single-tensor convenience wrapper.
    pub fn step_vec(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        self.step(&mut [params], &[grads])
    }
}
