//! The learner network `h_W(φ) → θ`: a dense MLP whose backward pass accepts
//! the circuit gradient `dl/dθ` as its upstream signal.

mod adam;
mod checkpoint;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub use adam::AdamState;
pub use checkpoint::{load_checkpoint, parse_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_HEADER};

/// Width of the two hidden layers of the standard learner.
pub const HIDDEN_WIDTH: usize = 256;

const LEAKY_SLOPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// `max(z, 0.01 z)`
    LeakyRelu,
    Tanh,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::LeakyRelu => {
                if z > 0.0 {
                    z
                } else {
                    LEAKY_SLOPE * z
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Identity => z,
        }
    }

    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::LeakyRelu => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Tanh => 1.0 - z.tanh().powi(2),
            Activation::Identity => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Activation::LeakyRelu => "leaky-relu",
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leaky-relu" => Ok(Activation::LeakyRelu),
            "tanh" => Ok(Activation::Tanh),
            "identity" => Ok(Activation::Identity),
            other => Err(Error::Config(format!("unknown activation \"{other}\""))),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Map applied to the last pre-activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputScaling {
    /// `π·tanh(z)`, keeping every angle inside (−π, π).
    TanhPi,
    Linear,
}

impl OutputScaling {
    fn apply(self, z: f64) -> f64 {
        match self {
            OutputScaling::TanhPi => PI * z.tanh(),
            OutputScaling::Linear => z,
        }
    }

    fn derivative(self, z: f64) -> f64 {
        match self {
            OutputScaling::TanhPi => PI * (1.0 - z.tanh().powi(2)),
            OutputScaling::Linear => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            OutputScaling::TanhPi => "tanh-pi",
            OutputScaling::Linear => "linear",
        }
    }
}

impl FromStr for OutputScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanh-pi" => Ok(OutputScaling::TanhPi),
            "linear" => Ok(OutputScaling::Linear),
            other => Err(Error::Config(format!("unknown output scaling \"{other}\""))),
        }
    }
}

impl fmt::Display for OutputScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Affine map `z = W a + b` with `W` stored row-major as `outputs × inputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Dense {
            inputs,
            outputs,
            weight: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    fn affine(&self, a: &[f64]) -> Vec<f64> {
        self.weight
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(a).map(|(w, x)| w * x).sum::<f64>() + b)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerNet {
    layers: Vec<Dense>,
    hidden: Activation,
    output: OutputScaling,
}

/// Gradients with the same tensor layout as [`LearnerNet::tensors`].
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerGrads {
    pub tensors: Vec<Vec<f64>>,
}

impl LearnerGrads {
    pub fn zeros_like(net: &LearnerNet) -> Self {
        LearnerGrads {
            tensors: net.tensors().iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &LearnerGrads) {
        for (a, b) in self.tensors.iter_mut().zip(&other.tensors) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }

    pub fn norm(&self) -> f64 {
        self.tensors.iter().flatten().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn as_slices(&self) -> Vec<&[f64]> {
        self.tensors.iter().map(Vec::as_slice).collect()
    }
}

impl LearnerNet {
    /// Network from explicit layers; consecutive widths must chain.
    pub fn from_layers(layers: Vec<Dense>, hidden: Activation, output: OutputScaling) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("a learner needs at least one layer".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.weight.len() != l.inputs * l.outputs || l.bias.len() != l.outputs {
                return Err(Error::Format(format!("layer {i} tensor shapes are inconsistent")));
            }
            if i > 0 && layers[i - 1].outputs != l.inputs {
                return Err(Error::dim(format!("layer {i} input width"), layers[i - 1].outputs, l.inputs));
            }
        }
        Ok(LearnerNet { layers, hidden, output })
    }

    /// All-zero weights with the given widths `[d_in, …, P]`.
    pub fn zeros(sizes: &[usize], hidden: Activation, output: OutputScaling) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::Config(format!("invalid layer sizes {sizes:?}")));
        }
        let layers = sizes.windows(2).map(|w| Dense::zeros(w[0], w[1])).collect();
        Self::from_layers(layers, hidden, output)
    }

    /// Weights and biases drawn from `U[−1/√fan_in, 1/√fan_in]`.
    pub fn random(sizes: &[usize], hidden: Activation, output: OutputScaling, seed: u64) -> Result<Self> {
        let mut net = Self::zeros(sizes, hidden, output)?;
        let mut rng = rng_from_seed(seed);
        for layer in &mut net.layers {
            let bound = 1.0 / (layer.inputs as f64).sqrt();
            for w in layer.weight.iter_mut().chain(layer.bias.iter_mut()) {
                *w = rng.random_range(-bound..=bound);
            }
        }
        Ok(net)
    }

    /// `[d_in, 256, 256, P]` with leaky-ReLU hidden units and `π·tanh` output.
    pub fn standard(d_in: usize, num_params: usize, seed: u64) -> Result<Self> {
        Self::random(
            &[d_in, HIDDEN_WIDTH, HIDDEN_WIDTH, num_params],
            Activation::LeakyRelu,
            OutputScaling::TanhPi,
            seed,
        )
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.outputs)
    }

    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.input_dim())
            .chain(self.layers.iter().map(|l| l.outputs))
            .collect()
    }

    pub fn hidden(&self) -> Activation {
        self.hidden
    }

    pub fn output_scaling(&self) -> OutputScaling {
        self.output
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    /// Tensors in the order `w0, b0, w1, b1, …`.
    pub fn tensors(&self) -> Vec<&[f64]> {
        self.layers
            .iter()
            .flat_map(|l| [l.weight.as_slice(), l.bias.as_slice()])
            .collect()
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers
            .iter_mut()
            .flat_map(|l| [l.weight.as_mut_slice(), l.bias.as_mut_slice()])
            .collect()
    }

    pub fn num_weights(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    fn check_input(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.input_dim() {
            return Err(Error::dim("learner input", self.input_dim(), phi.len()));
        }
        Ok(())
    }

    /// Pre-activations of every layer.
    fn trace(&self, phi: &[f64]) -> Vec<Vec<f64>> {
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut a = phi.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.affine(&a);
            if i + 1 < self.layers.len() {
                a = z.iter().map(|&v| self.hidden.apply(v)).collect();
            }
            pre.push(z);
        }
        pre
    }

    pub fn forward(&self, phi: &[f64]) -> Result<Vec<f64>> {
        self.check_input(phi)?;
        let pre = self.trace(phi);
        let theta: Vec<f64> = pre
            .last()
            .expect("at least one layer")
            .iter()
            .map(|&z| self.output.apply(z))
            .collect();
        if let Some(bad) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite(format!("learner output {bad} is not finite")));
        }
        Ok(theta)
    }

    /// Gradient of `upstream · h_W(φ)` with respect to every weight.
    pub fn backward(&self, phi: &[f64], upstream: &[f64]) -> Result<LearnerGrads> {
        self.check_input(phi)?;
        if upstream.len() != self.output_dim() {
            return Err(Error::dim("upstream gradient", self.output_dim(), upstream.len()));
        }
        let pre = self.trace(phi);
        let depth = self.layers.len();
        let mut grads = vec![Vec::new(); 2 * depth];
        let mut delta: Vec<f64> = upstream
            .iter()
            .zip(&pre[depth - 1])
            .map(|(u, &z)| u * self.output.derivative(z))
            .collect();
        for i in (0..depth).rev() {
            let layer = &self.layers[i];
            let input: Vec<f64> = if i == 0 {
                phi.to_vec()
            } else {
                pre[i - 1].iter().map(|&z| self.hidden.apply(z)).collect()
            };
            let mut dw = vec![0.0; layer.weight.len()];
            for (row, d) in dw.chunks_exact_mut(layer.inputs).zip(&delta) {
                row.iter_mut().zip(&input).for_each(|(g, x)| *g = d * x);
            }
            grads[2 * i] = dw;
            grads[2 * i + 1] = delta.clone();
            if i > 0 {
                let mut back = vec![0.0; layer.inputs];
                for (row, d) in layer.weight.chunks_exact(layer.inputs).zip(&delta) {
                    back.iter_mut().zip(row).for_each(|(b, w)| *b += w * d);
                }
                delta = back
                    .iter()
                    .zip(&pre[i - 1])
                    .map(|(b, &z)| b * self.hidden.derivative(z))
                    .collect();
            }
        }
        Ok(LearnerGrads { tensors: grads })
    }

    /// Applies one optimizer step with the given gradients.
    pub fn apply_gradients(&mut self, adam: &mut AdamState, grads: &LearnerGrads) -> Result<()> {
        let g = grads.as_slices();
        let mut params = self.tensors_mut();
        adam.step(&mut params, &g)
    }
}
