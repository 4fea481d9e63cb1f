//! Synthetic datasets: grid shortest paths and partial preference rankings.

use std::collections::{BTreeMap, VecDeque};

use ndarray::Array2;
use nesy_core::constraints::{simple_path, total_order, GridSpec};
use nesy_core::{compile, Circuit};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::TrainError;

/// Examples as dense 0/1 matrices. `constraint[i]` indexes the circuit that
/// example `i`'s output must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub inputs: Array2<f64>,
    pub labels: Array2<f64>,
    pub constraint: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn from_rows(rows: &[(Vec<bool>, Vec<bool>, usize)]) -> Dataset {
        let width = |f: fn(&(Vec<bool>, Vec<bool>, usize)) -> usize| rows.first().map_or(0, f);
        let (ni, nl) = (width(|r| r.0.len()), width(|r| r.1.len()));
        let as_f = |b: bool| if b { 1.0 } else { 0.0 };
        Dataset {
            inputs: Array2::from_shape_fn((rows.len(), ni), |(i, j)| as_f(rows[i].0[j])),
            labels: Array2::from_shape_fn((rows.len(), nl), |(i, j)| as_f(rows[i].1[j])),
            constraint: rows.iter().map(|r| r.2).collect(),
        }
    }

    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            inputs: self.inputs.select(ndarray::Axis(0), idx),
            labels: self.labels.select(ndarray::Axis(0), idx),
            constraint: idx.iter().map(|&i| self.constraint[i]).collect(),
        }
    }
}

/// Train/validation/test splits plus the compiled output constraints.
#[derive(Debug, Clone)]
pub struct Task {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Dataset,
    pub circuits: Vec<Circuit>,
}

/// Shuffles with `seed` and cuts 60/20/20.
pub fn split(data: &Dataset, seed: u64) -> (Dataset, Dataset, Dataset) {
    let mut idx: Vec<usize> = (0..data.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let a = data.len() * 6 / 10;
    let b = data.len() * 8 / 10;
    (
        data.select(&idx[..a]),
        data.select(&idx[a..b]),
        data.select(&idx[b..]),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridExample {
    pub source: usize,
    pub target: usize,
    /// Edges kept in this example's subgraph.
    pub present: Vec<bool>,
    /// Label: edges on the chosen shortest path.
    pub path: Vec<bool>,
}

impl GridExample {
    /// Node indicators for source and target, then subgraph edges.
    pub fn input_bits(&self, g: &GridSpec) -> Vec<bool> {
        let mut bits = vec![false; g.node_count()];
        bits[self.source] = true;
        bits[self.target] = true;
        bits.extend(&self.present);
        bits
    }
}

/// Shortest `s`-`t` path in the subgraph of `present` edges, as an edge-id
/// sequence from `s`. Among shortest paths the lexicographically smallest
/// edge-id sequence wins.
pub fn shortest_path(g: &GridSpec, present: &[bool], s: usize, t: usize) -> Option<Vec<usize>> {
    let adjacency: Vec<Vec<(usize, usize)>> = (0..g.node_count())
        .map(|v| {
            g.incident(v)
                .into_iter()
                .filter(|&(e, _)| present[e])
                .collect()
        })
        .collect();
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        for &(_, v) in &adjacency[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if dist[s] == usize::MAX {
        return None;
    }
    // greedy smallest edge id that stays on a shortest path
    let mut path = Vec::new();
    let mut u = s;
    while u != t {
        let &(e, v) = adjacency[u]
            .iter()
            .filter(|&&(_, v)| dist[v] + 1 == dist[u])
            .min()
            .unwrap();
        path.push(e);
        u = v;
    }
    Some(path)
}

fn components(g: &GridSpec, present: &[bool]) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.node_count()];
    for start in 0..g.node_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = start;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for (e, v) in g.incident(u) {
                if present[e] && comp[v] == usize::MAX {
                    comp[v] = start;
                    stack.push(v);
                }
            }
        }
    }
    comp
}

/// Smallest component a source/target may come from.
pub const MIN_COMPONENT: usize = 5;

/// Each example removes a third of the edges at random, keeps nodes in
/// components of at least [`MIN_COMPONENT`] nodes, and draws a source and
/// target uniformly from those nodes until they share a component.
pub fn gen_grid_dataset(g: &GridSpec, n: usize, seed: u64) -> Result<Vec<GridExample>, TrainError> {
    if g.node_count() < MIN_COMPONENT {
        return Err(TrainError::Config(format!(
            "grid needs at least {MIN_COMPONENT} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.edge_count();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        let mut present = vec![true; m];
        for &e in &order[..m / 3] {
            present[e] = false;
        }
        let comp = components(g, &present);
        let mut sizes = BTreeMap::new();
        for &c in &comp {
            *sizes.entry(c).or_insert(0usize) += 1;
        }
        let eligible: Vec<usize> = (0..g.node_count())
            .filter(|&v| sizes[&comp[v]] >= MIN_COMPONENT)
            .collect();
        if eligible.is_empty() {
            continue;
        }
        let (s, t) = loop {
            let s = *eligible.choose(&mut rng).unwrap();
            let t = *eligible.choose(&mut rng).unwrap();
            if s != t && comp[s] == comp[t] {
                break (s.min(t), s.max(t));
            }
        };
        let edges = shortest_path(g, &present, s, t).expect("same component");
        let mut path = vec![false; m];
        for e in edges {
            path[e] = true;
        }
        out.push(GridExample {
            source: s,
            target: t,
            present,
            path,
        });
    }
    Ok(out)
}

/// Grid task: one compiled simple-path circuit per source/target pair seen.
pub fn grid_task(
    g: &GridSpec,
    n: usize,
    seed: u64,
) -> Result<(Task, Vec<GridExample>), TrainError> {
    let examples = gen_grid_dataset(g, n, seed)?;
    let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut circuits = Vec::new();
    let mut rows = Vec::with_capacity(n);
    for ex in &examples {
        let key = (ex.source, ex.target);
        let id = match pair_index.get(&key) {
            Some(&id) => id,
            None => {
                let (c, _) = compile(&simple_path(g, ex.source, ex.target)?)?;
                circuits.push(c);
                pair_index.insert(key, circuits.len() - 1);
                circuits.len() - 1
            }
        };
        rows.push((ex.input_bits(g), ex.path.clone(), id));
    }
    let (train, val, test) = split(&Dataset::from_rows(&rows), seed);
    Ok((
        Task {
            train,
            val,
            test,
            circuits,
        },
        examples,
    ))
}

/// Item counts for the ranking task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreferenceSpec {
    pub observed: usize,
    pub predicted: usize,
    pub factors: usize,
}

impl Default for PreferenceSpec {
    fn default() -> Self {
        PreferenceSpec {
            observed: 6,
            predicted: 4,
            factors: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceExample {
    pub utilities: Vec<f64>,
    /// Row-major permutation matrix over the observed items: bit `i*k + j`
    /// says observed item `i` is at position `j` (0 = most preferred).
    pub observed: Vec<bool>,
    /// Same layout over the predicted items.
    pub label: Vec<bool>,
}

fn rank_matrix(utilities: &[f64]) -> Vec<bool> {
    let k = utilities.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| utilities[b].total_cmp(&utilities[a]));
    let mut bits = vec![false; k * k];
    for (pos, &item) in order.iter().enumerate() {
        bits[item * k + pos] = true;
    }
    bits
}

/// Latent-factor users: item vectors are drawn once, each user draws a taste
/// vector, and utilities are dot products plus small noise. The first
/// `observed` items form the input ranking; the rest are to be ranked.
pub fn gen_preference_dataset(
    spec: PreferenceSpec,
    n_users: usize,
    seed: u64,
) -> Result<Vec<PreferenceExample>, TrainError> {
    if spec.predicted == 0 || spec.predicted > 5 || spec.observed == 0 || spec.factors == 0 {
        return Err(TrainError::Config(
            "preference task needs 1..=5 predicted items and at least one observed item".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_items = spec.observed + spec.predicted;
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let items: Vec<Vec<f64>> = (0..n_items)
        .map(|_| (0..spec.factors).map(|_| normal()).collect())
        .collect();
    let mut out = Vec::with_capacity(n_users);
    for _ in 0..n_users {
        let taste: Vec<f64> = (0..spec.factors).map(|_| normal()).collect();
        let utilities: Vec<f64> = items
            .iter()
            .map(|v| v.iter().zip(&taste).map(|(a, b)| a * b).sum::<f64>() + 0.1 * normal())
            .collect();
        out.push(PreferenceExample {
            observed: rank_matrix(&utilities[..spec.observed]),
            label: rank_matrix(&utilities[spec.observed..]),
            utilities,
        });
    }
    Ok(out)
}

pub fn preference_task(
    spec: PreferenceSpec,
    n_users: usize,
    seed: u64,
) -> Result<(Task, Vec<PreferenceExample>), TrainError> {
    let examples = gen_preference_dataset(spec, n_users, seed)?;
    let (circuit, _) = compile(&total_order(spec.predicted)?)?;
    let rows: Vec<_> = examples
        .iter()
        .map(|e| (e.observed.clone(), e.label.clone(), 0))
        .collect();
    let (train, val, test) = split(&Dataset::from_rows(&rows), seed);
    Ok((
        Task {
            train,
            val,
            test,
            circuits: vec![circuit],
        },
        examples,
    ))
}

/// Samples `n` rows uniformly with replacement.
pub fn sample_rows<R: Rng>(len: usize, n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..len)).collect()
}
