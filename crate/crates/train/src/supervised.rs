//! Constrained supervised training: cross-entropy plus weighted semantic loss
//! and an optional entropy penalty.

use ndarray::{Array2, Axis};
use nesy_core::queries::{evaluate, full_entropy, full_entropy_gradient};
use nesy_core::{Assignment, Circuit, ProbVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::{Dataset, Task};
use crate::mlp::{softplus, Adam, Gradients, Mlp};
use crate::TrainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMode {
    None,
    /// Entropy of the unconstrained output distribution.
    Full,
    /// Entropy of the output distribution restricted to the constraint.
    Nesy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainConfig {
    pub seed: u64,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub hidden: Vec<usize>,
    pub lambda_sl: f64,
    pub lambda_ent: f64,
    pub entropy: EntropyMode,
    /// Epochs over which both λ weights rise linearly from 0; 0 disables.
    pub warmup: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            epochs: 60,
            batch_size: 32,
            learning_rate: 1e-3,
            hidden: vec![128, 128],
            lambda_sl: 0.0,
            lambda_ent: 0.0,
            entropy: EntropyMode::None,
            warmup: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<(), TrainError> {
        if self.lambda_sl < 0.0
            || self.lambda_ent < 0.0
            || !self.lambda_sl.is_finite()
            || !self.lambda_ent.is_finite()
        {
            return Err(TrainError::Config(
                "loss weights must be finite and non-negative".into(),
            ));
        }
        if self.batch_size == 0 || self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(TrainError::Config(
                "batch size and learning rate must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Multiplier on both λ weights during a 1-based epoch.
    pub fn warmup_factor(&self, epoch: usize) -> f64 {
        if self.warmup == 0 {
            1.0
        } else {
            (epoch as f64 / self.warmup as f64).min(1.0)
        }
    }
}

/// Percentages: exact-match examples, matching output bits, and decoded
/// outputs that satisfy their example's constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub coherent: f64,
    pub incoherent: f64,
    pub constraint: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    #[serde(flatten)]
    pub val: Metrics,
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub history: Vec<EpochRecord>,
    pub test: Metrics,
    pub model: Mlp,
}

fn check_shapes(model: &Mlp, data: &Dataset, circuits: &[Circuit]) -> Result<(), TrainError> {
    if data.inputs.ncols() != model.input_width() || data.labels.ncols() != model.output_width() {
        return Err(TrainError::Shape(format!(
            "data is {}->{}, model is {}->{}",
            data.inputs.ncols(),
            data.labels.ncols(),
            model.input_width(),
            model.output_width()
        )));
    }
    for &c in &data.constraint {
        let circuit = circuits
            .get(c)
            .ok_or_else(|| TrainError::Shape(format!("constraint index {c} has no circuit")))?;
        if circuit.var_count() != model.output_width() {
            return Err(TrainError::Shape(format!(
                "circuit over {} variables, model outputs {}",
                circuit.var_count(),
                model.output_width()
            )));
        }
    }
    Ok(())
}

pub fn decode(probs: &[f64]) -> Assignment {
    Assignment::new(probs.iter().map(|&p| p > 0.5).collect())
}

pub fn evaluate_metrics(
    model: &Mlp,
    data: &Dataset,
    circuits: &[Circuit],
) -> Result<Metrics, TrainError> {
    check_shapes(model, data, circuits)?;
    score_predictions(&model.predict(&data.inputs)?, data, circuits)
}

/// Metrics for a matrix of predicted probabilities, one row per example.
pub fn score_predictions(
    probs: &Array2<f64>,
    data: &Dataset,
    circuits: &[Circuit],
) -> Result<Metrics, TrainError> {
    if probs.dim() != data.labels.dim() {
        return Err(TrainError::Shape(
            "predictions and labels differ in shape".into(),
        ));
    }
    if data.is_empty() {
        return Ok(Metrics {
            coherent: 0.0,
            incoherent: 0.0,
            constraint: 0.0,
        });
    }
    let (mut exact, mut bits, mut valid) = (0usize, 0usize, 0usize);
    for ((p, y), &c) in probs
        .rows()
        .into_iter()
        .zip(data.labels.rows())
        .zip(&data.constraint)
    {
        let decoded = decode(&p.to_vec());
        let matching = decoded
            .bits()
            .iter()
            .zip(y)
            .filter(|(&d, &y)| d == (y > 0.5))
            .count();
        bits += matching;
        exact += usize::from(matching == y.len());
        valid += usize::from(circuits[c].eval(&decoded)?);
    }
    let n = data.len() as f64;
    Ok(Metrics {
        coherent: 100.0 * exact as f64 / n,
        incoherent: 100.0 * bits as f64 / (n * data.labels.ncols() as f64),
        constraint: 100.0 * valid as f64 / n,
    })
}

/// Mean loss over a batch and its gradient w.r.t. the model parameters.
pub fn batch_loss_and_grad(
    model: &Mlp,
    cfg: &TrainConfig,
    inputs: &Array2<f64>,
    labels: &Array2<f64>,
    constraint: &[usize],
    circuits: &[Circuit],
) -> Result<(f64, Gradients), TrainError> {
    let cache = model.forward(inputs)?;
    let logits = cache.logits();
    let b = inputs.nrows() as f64;
    let mut loss = 0.0;
    let mut d_logits = Array2::zeros(logits.raw_dim());
    for (i, (z, y)) in logits.rows().into_iter().zip(labels.rows()).enumerate() {
        let p: Vec<f64> = z.iter().map(|&z| crate::mlp::sigmoid(z)).collect();
        for j in 0..p.len() {
            loss += softplus(z[j]) - y[j] * z[j];
            d_logits[[i, j]] = p[j] - y[j];
        }
        let needs_circuit =
            cfg.lambda_sl > 0.0 || (cfg.lambda_ent > 0.0 && cfg.entropy == EntropyMode::Nesy);
        let pv = ProbVector::new(&p)?;
        // loss gradient w.r.t. probabilities from the constraint terms
        let mut d_p = vec![0.0; p.len()];
        if needs_circuit {
            let trace = evaluate(&circuits[constraint[i]], &pv)?;
            if cfg.lambda_sl > 0.0 {
                loss += cfg.lambda_sl * trace.semantic_loss();
                for (d, g) in d_p.iter_mut().zip(trace.semantic_loss_gradient()?) {
                    *d += cfg.lambda_sl * g;
                }
            }
            if cfg.lambda_ent > 0.0 && cfg.entropy == EntropyMode::Nesy {
                loss += cfg.lambda_ent * trace.entropy()?;
                for (d, g) in d_p.iter_mut().zip(trace.entropy_gradient()?) {
                    *d += cfg.lambda_ent * g;
                }
            }
        }
        if cfg.lambda_ent > 0.0 && cfg.entropy == EntropyMode::Full {
            loss += cfg.lambda_ent * full_entropy(&pv);
            for (d, g) in d_p.iter_mut().zip(full_entropy_gradient(&pv)) {
                *d += cfg.lambda_ent * g;
            }
        }
        for j in 0..p.len() {
            d_logits[[i, j]] += d_p[j] * p[j] * (1.0 - p[j]);
        }
    }
    d_logits /= b;
    let (grads, _) = model.backward(&cache, &d_logits);
    Ok((loss / b, grads))
}

/// Trains from scratch; returns per-epoch validation metrics and final test
/// metrics. Deterministic for a given config.
pub fn train_supervised(cfg: &TrainConfig, task: &Task) -> Result<TrainReport, TrainError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut widths = vec![task.train.inputs.ncols()];
    widths.extend(&cfg.hidden);
    widths.push(task.train.labels.ncols());
    let mut model = Mlp::new(&widths, &mut rng)?;
    for d in [&task.train, &task.val, &task.test] {
        check_shapes(&model, d, &task.circuits)?;
    }
    let mut opt = Adam::new(&model, cfg.learning_rate);
    let mut order: Vec<usize> = (0..task.train.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    for epoch in 1..=cfg.epochs {
        let factor = cfg.warmup_factor(epoch);
        let step_cfg = TrainConfig {
            lambda_sl: cfg.lambda_sl * factor,
            lambda_ent: cfg.lambda_ent * factor,
            ..cfg.clone()
        };
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let inputs = task.train.inputs.select(Axis(0), chunk);
            let labels = task.train.labels.select(Axis(0), chunk);
            let constraint: Vec<usize> = chunk.iter().map(|&i| task.train.constraint[i]).collect();
            let (loss, grads) = batch_loss_and_grad(
                &model,
                &step_cfg,
                &inputs,
                &labels,
                &constraint,
                &task.circuits,
            )?;
            total += loss * chunk.len() as f64;
            opt.step(&mut model, &grads);
        }
        history.push(EpochRecord {
            epoch,
            train_loss: total / task.train.len().max(1) as f64,
            val: evaluate_metrics(&model, &task.val, &task.circuits)?,
        });
    }
    let test = evaluate_metrics(&model, &task.test, &task.circuits)?;
    Ok(TrainReport {
        history,
        test,
        model,
    })
}
