//! Dense ReLU network with sigmoid outputs, and Adam.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::TrainError;

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
}

/// Parameter gradients, shaped like the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Forward-pass values kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Cache {
    inputs: Vec<Array2<f64>>,
    logits: Array2<f64>,
}

impl Cache {
    /// Output pre-activations, one row per example.
    pub fn logits(&self) -> &Array2<f64> {
        &self.logits
    }

    pub fn probs(&self) -> Array2<f64> {
        self.logits.mapv(sigmoid)
    }
}

/// Plain serializable form of an [`Mlp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub widths: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Mlp {
    /// Glorot-uniform weights, zero biases.
    pub fn new<R: Rng>(widths: &[usize], rng: &mut R) -> Result<Self, TrainError> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(TrainError::Config(format!("bad layer widths {widths:?}")));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in widths.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push(Array2::from_shape_fn((fan_in, fan_out), |_| {
                rng.random_range(-bound..bound)
            }));
            biases.push(Array1::zeros(fan_out));
        }
        Ok(Mlp { weights, biases })
    }

    pub fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.weights[0].nrows()];
        w.extend(self.weights.iter().map(|m| m.ncols()));
        w
    }

    pub fn input_width(&self) -> usize {
        self.weights[0].nrows()
    }

    pub fn output_width(&self) -> usize {
        self.weights.last().unwrap().ncols()
    }

    pub fn forward(&self, x: &Array2<f64>) -> Result<Cache, TrainError> {
        if x.ncols() != self.input_width() {
            return Err(TrainError::Shape(format!(
                "input has {} columns, network expects {}",
                x.ncols(),
                self.input_width()
            )));
        }
        let last = self.weights.len() - 1;
        let mut inputs = Vec::with_capacity(self.weights.len());
        let mut a = x.clone();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let z = a.dot(w) + b;
            inputs.push(a);
            if l == last {
                return Ok(Cache { inputs, logits: z });
            }
            a = z.mapv(|v| v.max(0.0));
        }
        unreachable!()
    }

    /// Output probabilities for a batch.
    pub fn predict(&self, x: &Array2<f64>) -> Result<Array2<f64>, TrainError> {
        Ok(self.forward(x)?.probs())
    }

    /// Backpropagates `d_logits` (loss gradient w.r.t. output pre-activations).
    /// Returns parameter gradients and the gradient w.r.t. the input batch.
    pub fn backward(&self, cache: &Cache, d_logits: &Array2<f64>) -> (Gradients, Array2<f64>) {
        let n = self.weights.len();
        let mut gw = vec![Array2::zeros((0, 0)); n];
        let mut gb = vec![Array1::zeros(0); n];
        let mut d = d_logits.clone();
        for l in (0..n).rev() {
            let a = &cache.inputs[l];
            gw[l] = a.t().dot(&d);
            gb[l] = d.sum_axis(Axis(0));
            let mut d_prev = d.dot(&self.weights[l].t());
            if l > 0 {
                // inputs[l] is relu(z) so a zero entry means the unit was inactive
                d_prev.zip_mut_with(a, |g, &act| {
                    if act <= 0.0 {
                        *g = 0.0;
                    }
                });
            }
            d = d_prev;
        }
        (
            Gradients {
                weights: gw,
                biases: gb,
            },
            d,
        )
    }

    pub fn param_count(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Mutable access to every parameter in a fixed order: each layer's
    /// weights row-major, then its biases.
    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights
            .iter_mut()
            .zip(self.biases.iter_mut())
            .flat_map(|(w, b)| w.iter_mut().chain(b.iter_mut()))
    }

    pub fn to_params(&self) -> MlpParams {
        MlpParams {
            widths: self.widths(),
            weights: self
                .weights
                .iter()
                .map(|w| w.iter().copied().collect())
                .collect(),
            biases: self.biases.iter().map(|b| b.to_vec()).collect(),
        }
    }

    pub fn from_params(p: &MlpParams) -> Result<Self, TrainError> {
        let layers = p.widths.len().saturating_sub(1);
        if layers == 0 || p.weights.len() != layers || p.biases.len() != layers {
            return Err(TrainError::Shape(
                "parameter lists do not match widths".into(),
            ));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..layers {
            let shape = (p.widths[l], p.widths[l + 1]);
            let w = Array2::from_shape_vec(shape, p.weights[l].clone())
                .map_err(|e| TrainError::Shape(format!("layer {l} weights: {e}")))?;
            if p.biases[l].len() != shape.1 {
                return Err(TrainError::Shape(format!("layer {l} biases")));
            }
            weights.push(w);
            biases.push(Array1::from(p.biases[l].clone()));
        }
        Ok(Mlp { weights, biases })
    }
}

impl Gradients {
    pub fn flat(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .flat_map(|(w, b)| w.iter().chain(b.iter()).copied())
            .collect()
    }
}

/// Adam with the usual defaults (β₁ 0.9, β₂ 0.999, ε 1e-8).
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: i32,
    m: Gradients,
    v: Gradients,
}

impl Adam {
    pub fn new(model: &Mlp, lr: f64) -> Self {
        let zeros = Gradients {
            weights: model
                .weights
                .iter()
                .map(|w| Array2::zeros(w.raw_dim()))
                .collect(),
            biases: model
                .biases
                .iter()
                .map(|b| Array1::zeros(b.raw_dim()))
                .collect(),
        };
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    pub fn step(&mut self, model: &mut Mlp, g: &Gradients) {
        self.t += 1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let lr_t = self.lr * (1.0 - b2.powi(self.t)).sqrt() / (1.0 - b1.powi(self.t));
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr_t * *m / (v.sqrt() + eps);
        };
        for l in 0..model.weights.len() {
            ndarray::Zip::from(&mut model.weights[l])
                .and(&g.weights[l])
                .and(&mut self.m.weights[l])
                .and(&mut self.v.weights[l])
                .for_each(|p, &g, m, v| update(p, g, m, v));
            ndarray::Zip::from(&mut model.biases[l])
                .and(&g.biases[l])
                .and(&mut self.m.biases[l])
                .and(&mut self.v.biases[l])
                .for_each(|p, &g, m, v| update(p, g, m, v));
        }
    }
}
