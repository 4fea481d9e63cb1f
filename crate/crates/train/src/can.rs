//! Toy constrained GAN over tile grids.
//!
//! The generator maps noise (plus optional code bits) to per-variable
//! probabilities over the one-hot tile layout. The discriminator sees those
//! probabilities for fakes and one-hot grids for real data. The generator
//! minimizes the non-saturating GAN loss plus `λ(t) · -ln(mean_b wmc(θ_b))`,
//! with λ held at zero for a bootstrap phase and then ramped linearly.

use ndarray::{Array2, Axis};
use nesy_core::constraints::TileRule;
use nesy_core::queries::evaluate;
use nesy_core::{Assignment, Circuit, Formula, ProbVector};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::sample_rows;
use crate::mlp::{sigmoid, Adam, Mlp, MlpParams};
use crate::TrainError;

/// Largest search space [`valid_tilings`] will enumerate.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

/// Every tiling that satisfies `rule`, as row-major tile ids, in
/// lexicographic order.
pub fn valid_tilings(
    rows: usize,
    cols: usize,
    rule: &TileRule,
) -> Result<Vec<Vec<usize>>, TrainError> {
    let cells = rows * cols;
    let v = rule.vocab();
    let space = (v as u64)
        .checked_pow(cells as u32)
        .filter(|&s| s <= ENUMERATION_LIMIT);
    if space.is_none() {
        return Err(TrainError::Config(format!(
            "{v}^{cells} tilings is too many to enumerate"
        )));
    }
    let mut out = Vec::new();
    let mut tiles = vec![0usize; cells];
    loop {
        if rule.holds(rows, cols, &tiles) {
            out.push(tiles.clone());
        }
        // odometer increment, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tiles[i] += 1;
            if tiles[i] < v {
                break;
            }
            tiles[i] = 0;
        }
    }
}

pub fn one_hot(tiles: &[usize], vocab: usize) -> Vec<bool> {
    tiles
        .iter()
        .flat_map(|&t| (0..vocab).map(move |i| i == t))
        .collect()
}

/// Code bits with their prior; code `i` switches part `i` of a conditional
/// constraint on or off.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioning {
    pub parts: Vec<Formula>,
    pub prior: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanConfig {
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub latent_dim: usize,
    pub gen_hidden: Vec<usize>,
    pub disc_hidden: Vec<usize>,
    pub batch_size: usize,
    pub epochs: usize,
    pub steps_per_epoch: usize,
    pub lr_gen: f64,
    pub lr_disc: f64,
    /// Epochs with λ = 0.
    pub bootstrap: usize,
    /// Epochs over which λ rises linearly to `lambda_max`.
    pub ramp: usize,
    pub lambda_max: f64,
    pub data_size: usize,
    pub eval_samples: usize,
    pub conditioning: Option<Conditioning>,
}

impl Default for CanConfig {
    fn default() -> Self {
        CanConfig {
            seed: 0,
            rows: 3,
            cols: 3,
            latent_dim: 16,
            gen_hidden: vec![64],
            disc_hidden: vec![64],
            batch_size: 64,
            epochs: 40,
            steps_per_epoch: 25,
            lr_gen: 1e-3,
            lr_disc: 1e-3,
            bootstrap: 10,
            ramp: 10,
            lambda_max: 2.0,
            data_size: 1000,
            eval_samples: 200,
            conditioning: None,
        }
    }
}

impl CanConfig {
    /// λ for a 0-based epoch.
    pub fn lambda_at(&self, epoch: usize) -> f64 {
        if epoch < self.bootstrap {
            0.0
        } else if self.ramp == 0 {
            self.lambda_max
        } else {
            self.lambda_max * ((epoch - self.bootstrap + 1) as f64 / self.ramp as f64).min(1.0)
        }
    }

    fn validate(&self) -> Result<(), TrainError> {
        if !self.lambda_max.is_finite() || self.lambda_max < 0.0 {
            return Err(TrainError::Config(
                "lambda_max must be finite and non-negative".into(),
            ));
        }
        if self.batch_size == 0
            || self.latent_dim == 0
            || self.data_size == 0
            || self.eval_samples < 2
        {
            return Err(TrainError::Config(
                "batch size, latent size and data size must be positive; at least two evaluation samples".into(),
            ));
        }
        if let Some(c) = &self.conditioning {
            if c.parts.is_empty()
                || c.parts.len() != c.prior.len()
                || c.prior.iter().any(|p| !(0.0..=1.0).contains(p))
            {
                return Err(TrainError::Config(
                    "conditioning needs one prior in [0, 1] per part".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    net: Mlp,
    latent_dim: usize,
    code_dim: usize,
    rows: usize,
    cols: usize,
    vocab: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub schema: u32,
    pub latent_dim: usize,
    pub code_dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub vocab: usize,
    pub net: MlpParams,
}

impl Generator {
    pub fn new(
        net: Mlp,
        latent_dim: usize,
        code_dim: usize,
        rows: usize,
        cols: usize,
        vocab: usize,
    ) -> Result<Self, TrainError> {
        if net.input_width() != latent_dim + code_dim || net.output_width() != rows * cols * vocab {
            return Err(TrainError::Shape(format!(
                "generator network is {:?}, expected {} inputs and {} outputs",
                net.widths(),
                latent_dim + code_dim,
                rows * cols * vocab
            )));
        }
        Ok(Generator {
            net,
            latent_dim,
            code_dim,
            rows,
            cols,
            vocab,
        })
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }

    pub fn output_width(&self) -> usize {
        self.rows * self.cols * self.vocab
    }

    pub fn code_dim(&self) -> usize {
        self.code_dim
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.vocab)
    }

    fn noise<R: Rng>(&self, n: usize, codes: &Array2<f64>, rng: &mut R) -> Array2<f64> {
        let mut z = Array2::zeros((n, self.latent_dim + self.code_dim));
        for i in 0..n {
            for j in 0..self.latent_dim {
                z[[i, j]] = StandardNormal.sample(rng);
            }
            for j in 0..self.code_dim {
                z[[i, self.latent_dim + j]] = codes[[i, j]];
            }
        }
        z
    }

    pub fn to_file(&self) -> GeneratorFile {
        GeneratorFile {
            schema: 1,
            latent_dim: self.latent_dim,
            code_dim: self.code_dim,
            rows: self.rows,
            cols: self.cols,
            vocab: self.vocab,
            net: self.net.to_params(),
        }
    }

    pub fn from_file(f: &GeneratorFile) -> Result<Self, TrainError> {
        if f.schema != 1 {
            return Err(TrainError::Config(format!(
                "unsupported generator schema {}",
                f.schema
            )));
        }
        Generator::new(
            Mlp::from_params(&f.net)?,
            f.latent_dim,
            f.code_dim,
            f.rows,
            f.cols,
            f.vocab,
        )
    }
}

/// Draws a bit per variable, then picks each cell's tile among the drawn
/// ones (or among all tiles when none was drawn), uniformly at random.
pub fn decode_tiles<R: Rng>(theta: &[f64], vocab: usize, rng: &mut R) -> Vec<usize> {
    theta
        .chunks(vocab)
        .map(|cell| {
            let drawn: Vec<usize> = (0..vocab)
                .filter(|&t| rng.random_bool(cell[t].clamp(0.0, 1.0)))
                .collect();
            if drawn.is_empty() {
                rng.random_range(0..vocab)
            } else {
                *drawn.choose(rng).unwrap()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Score {
    /// Percentage of samples satisfying the constraint.
    pub validity: f64,
    /// Mean pairwise L1 distance between one-hot samples over the variable count.
    pub diversity: f64,
    /// Mean number of non-empty cells per sample.
    pub pipe_tiles: f64,
    #[serde(skip)]
    pub samples: Vec<Vec<usize>>,
}

/// Scores already decoded tilings against `circuit`.
pub fn score_tilings(
    samples: Vec<Vec<usize>>,
    vocab: usize,
    circuit: &Circuit,
) -> Result<Score, TrainError> {
    let n = samples.len();
    if n == 0 {
        return Err(TrainError::Config("no samples to score".into()));
    }
    let mut valid = 0;
    for s in &samples {
        valid += usize::from(circuit.eval(&Assignment::new(one_hot(s, vocab)))?);
    }
    let vars = (samples[0].len() * vocab) as f64;
    let mut dist = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            // differing tiles flip two one-hot bits
            dist += 2 * samples[i]
                .iter()
                .zip(&samples[j])
                .filter(|(a, b)| a != b)
                .count();
        }
    }
    let pairs = (n * (n - 1) / 2).max(1) as f64;
    let pipe_tiles = samples
        .iter()
        .map(|s| s.iter().filter(|&&t| t != 0).count())
        .sum::<usize>() as f64
        / n as f64;
    Ok(Score {
        validity: 100.0 * valid as f64 / n as f64,
        diversity: dist as f64 / pairs / vars,
        pipe_tiles,
        samples,
    })
}

/// Samples `n` structures from the generator with the given code bits.
pub fn sample_and_score(
    gen: &Generator,
    n: usize,
    seed: u64,
    circuit: &Circuit,
    code: &[f64],
) -> Result<Score, TrainError> {
    if code.len() != gen.code_dim {
        return Err(TrainError::Shape(format!(
            "generator takes {} code bits, got {}",
            gen.code_dim,
            code.len()
        )));
    }
    if circuit.var_count() != gen.output_width() {
        return Err(TrainError::Shape(format!(
            "circuit over {} variables, generator outputs {}",
            circuit.var_count(),
            gen.output_width()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = Array2::from_shape_fn((n, gen.code_dim), |(_, j)| code[j]);
    let z = gen.noise(n, &codes, &mut rng);
    let theta = gen.net.predict(&z)?;
    let samples = theta
        .rows()
        .into_iter()
        .map(|row| decode_tiles(&row.to_vec(), gen.vocab, &mut rng))
        .collect();
    score_tilings(samples, gen.vocab, circuit)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanEpochRecord {
    pub epoch: usize,
    pub lambda: f64,
    pub validity: f64,
    pub diversity: f64,
    pub pipe_tiles: f64,
    /// Mean over the epoch's generator steps of `-ln(mean_b wmc)`.
    pub semantic_loss: f64,
}

#[derive(Debug, Clone)]
pub struct CanReport {
    pub history: Vec<CanEpochRecord>,
    pub generator: Generator,
    /// Mean non-empty cells per training grid.
    pub data_pipe_tiles: f64,
}

/// Generator SL term for a batch: `-ln(mean_b wmc_b)` and its gradient
/// w.r.t. each row of `theta`. `codes` are appended to each row before the
/// circuit is queried; their gradient is dropped.
pub fn batch_semantic_loss(
    circuit: &Circuit,
    theta: &Array2<f64>,
    codes: &Array2<f64>,
) -> Result<(f64, Array2<f64>), TrainError> {
    let b = theta.nrows();
    let width = theta.ncols();
    let mut log_w = Vec::with_capacity(b);
    let mut grads = Vec::with_capacity(b);
    for (row, code) in theta.rows().into_iter().zip(codes.rows()) {
        let mut p = row.to_vec();
        p.extend(code.iter());
        let trace = evaluate(circuit, &ProbVector::new(&p)?)?;
        log_w.push(trace.log_wmc());
        grads.push(trace.semantic_loss_gradient().ok());
    }
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut d = Array2::zeros((b, width));
    if max == f64::NEG_INFINITY {
        return Ok((f64::INFINITY, d));
    }
    let total: f64 = log_w.iter().map(|&l| (l - max).exp()).sum();
    let loss = -(max + total.ln() - (b as f64).ln());
    for (i, g) in grads.iter().enumerate() {
        if let Some(g) = g {
            // softmax weight of example i in the mean
            let w = (log_w[i] - max).exp() / total;
            for j in 0..width {
                d[[i, j]] = w * g[j];
            }
        }
    }
    Ok((loss, d))
}

pub fn train_can(
    cfg: &CanConfig,
    rule: &TileRule,
    circuit: &Circuit,
) -> Result<CanReport, TrainError> {
    cfg.validate()?;
    let vocab = rule.vocab();
    let width = cfg.rows * cfg.cols * vocab;
    let code_dim = cfg.conditioning.as_ref().map_or(0, |c| c.parts.len());
    if circuit.var_count() != width + code_dim {
        return Err(TrainError::Shape(format!(
            "circuit over {} variables, expected {}",
            circuit.var_count(),
            width + code_dim
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let valid = valid_tilings(cfg.rows, cfg.cols, rule)?;
    let data: Vec<&Vec<usize>> = (0..cfg.data_size)
        .map(|_| valid.choose(&mut rng).unwrap())
        .collect();
    let data_pipe_tiles = data
        .iter()
        .map(|t| t.iter().filter(|&&x| x != 0).count())
        .sum::<usize>() as f64
        / data.len() as f64;
    let real_rows = Array2::from_shape_fn((data.len(), width), |(i, j)| {
        f64::from(u8::from(one_hot(data[i], vocab)[j]))
    });

    let mut gw = vec![cfg.latent_dim + code_dim];
    gw.extend(&cfg.gen_hidden);
    gw.push(width);
    let mut dw = vec![width];
    dw.extend(&cfg.disc_hidden);
    dw.push(1);
    let mut gen = Generator::new(
        Mlp::new(&gw, &mut rng)?,
        cfg.latent_dim,
        code_dim,
        cfg.rows,
        cfg.cols,
        vocab,
    )?;
    let mut disc = Mlp::new(&dw, &mut rng)?;
    let mut opt_g = Adam::new(&gen.net, cfg.lr_gen);
    let mut opt_d = Adam::new(&disc, cfg.lr_disc);
    let b = cfg.batch_size;
    let bf = b as f64;
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let lambda = cfg.lambda_at(epoch);
        let mut sl_sum = 0.0;
        for _ in 0..cfg.steps_per_epoch {
            let codes = match &cfg.conditioning {
                Some(c) => Array2::from_shape_fn((b, code_dim), |(_, j)| {
                    f64::from(u8::from(rng.random_bool(c.prior[j])))
                }),
                None => Array2::zeros((b, 0)),
            };

            // discriminator step
            let real = real_rows.select(Axis(0), &sample_rows(data.len(), b, &mut rng));
            let z = gen.noise(b, &codes, &mut rng);
            let g_cache = gen.net.forward(&z)?;
            let theta = g_cache.probs();
            let d_real = disc.forward(&real)?;
            let d_fake = disc.forward(&theta)?;
            let (mut grads, _) =
                disc.backward(&d_real, &d_real.logits().mapv(|l| (sigmoid(l) - 1.0) / bf));
            let (fake_grads, _) =
                disc.backward(&d_fake, &d_fake.logits().mapv(|l| sigmoid(l) / bf));
            for (a, f) in grads.weights.iter_mut().zip(&fake_grads.weights) {
                *a += f;
            }
            for (a, f) in grads.biases.iter_mut().zip(&fake_grads.biases) {
                *a += f;
            }
            opt_d.step(&mut disc, &grads);

            // generator step: non-saturating loss through the updated discriminator
            let d_fake = disc.forward(&theta)?;
            let (_, mut d_theta) =
                disc.backward(&d_fake, &d_fake.logits().mapv(|l| (sigmoid(l) - 1.0) / bf));
            let (sl, d_sl) = batch_semantic_loss(circuit, &theta, &codes)?;
            sl_sum += sl;
            if lambda > 0.0 {
                d_theta.scaled_add(lambda, &d_sl);
            }
            let d_logits = d_theta * theta.mapv(|p| p * (1.0 - p));
            let (g_grads, _) = gen.net.backward(&g_cache, &d_logits);
            opt_g.step(&mut gen.net, &g_grads);
        }

        let eval_code: Vec<f64> = match &cfg.conditioning {
            Some(c) => c
                .prior
                .iter()
                .map(|&p| f64::from(u8::from(p >= 0.5)))
                .collect(),
            None => Vec::new(),
        };
        let score = if code_dim == 0 {
            sample_and_score(
                &gen,
                cfg.eval_samples,
                cfg.seed ^ (epoch as u64 + 1) << 32,
                circuit,
                &eval_code,
            )?
        } else {
            sample_conditioned(
                &gen,
                cfg.eval_samples,
                cfg.seed ^ (epoch as u64 + 1) << 32,
                circuit,
                &eval_code,
            )?
        };
        history.push(CanEpochRecord {
            epoch: epoch + 1,
            lambda,
            validity: score.validity,
            diversity: score.diversity,
            pipe_tiles: score.pipe_tiles,
            semantic_loss: sl_sum / cfg.steps_per_epoch.max(1) as f64,
        });
    }
    Ok(CanReport {
        history,
        generator: gen,
        data_pipe_tiles,
    })
}

/// Like [`sample_and_score`], but validity is judged by the conditional
/// circuit with the code bits fixed.
pub fn sample_conditioned(
    gen: &Generator,
    n: usize,
    seed: u64,
    circuit: &Circuit,
    code: &[f64],
) -> Result<Score, TrainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = Array2::from_shape_fn((n, gen.code_dim), |(_, j)| code[j]);
    let z = gen.noise(n, &codes, &mut rng);
    let theta = gen.net.predict(&z)?;
    let samples: Vec<Vec<usize>> = theta
        .rows()
        .into_iter()
        .map(|row| decode_tiles(&row.to_vec(), gen.vocab, &mut rng))
        .collect();
    let mut valid = 0;
    for s in &samples {
        let mut bits = one_hot(s, gen.vocab);
        bits.extend(code.iter().map(|&c| c > 0.5));
        valid += usize::from(circuit.eval(&Assignment::new(bits))?);
    }
    // diversity and pipe counts do not depend on the code bits
    let mut score = score_tilings(
        samples,
        gen.vocab,
        &Circuit::constant(true, gen.output_width()),
    )?;
    score.validity = 100.0 * valid as f64 / n as f64;
    Ok(score)
}
