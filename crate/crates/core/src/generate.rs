//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Pairing-model draws before giving up on a simple regular graph.
const PAIRING_TRIES: usize = 100_000;
/// Resamples before giving up on a connected `G(n, p)` draw.
const CONNECTED_TRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Gnp {
        p: f64,
    },
    Regular {
        d: usize,
    },
    /// `K_{1,n−1}` centred on vertex 0.
    Star,
    Cycle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    /// Every weight is 1.
    #[default]
    Uniform,
    /// I.i.d. `Exp(1)`.
    Exp,
}

fn edges_for(model: Model, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    match model {
        Model::Gnp { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Infeasible(format!(
                    "edge probability {p} not in [0, 1]"
                )));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Ok(edges)
        }
        Model::Regular { d } => random_regular_edges(n, d, rng),
        Model::Star => Ok((1..n).map(|v| (0, v)).collect()),
        Model::Cycle => {
            if n < 3 {
                return Err(Error::Infeasible(format!(
                    "a cycle needs at least 3 vertices, got {n}"
                )));
            }
            Ok((0..n).map(|v| (v, (v + 1) % n)).collect())
        }
    }
}

/// Uniform simple `d`-regular graph by the pairing model with rejection.
fn random_regular_edges(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if (n * d) % 2 == 1 {
        return Err(Error::Infeasible(format!("n·d = {} is odd", n * d)));
    }
    if d >= n && d > 0 {
        return Err(Error::Infeasible(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut seen = std::collections::HashSet::new();
    'draw: for _ in 0..PAIRING_TRIES {
        points.shuffle(rng);
        seen.clear();
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'draw;
            }
            edges.push((u, v));
        }
        return Ok(edges);
    }
    Err(Error::Infeasible(format!(
        "no simple {d}-regular graph on {n} vertices after {PAIRING_TRIES} pairings"
    )))
}

fn weigh(
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Weights,
    rng: &mut ChaCha8Rng,
) -> Result<WeightedGraph> {
    WeightedGraph::new(
        n,
        edges.into_iter().map(|(u, v)| {
            let w = match weights {
                Weights::Uniform => 1.0,
                Weights::Exp => rng.sample(Exp1),
            };
            (u, v, w)
        }),
    )
}

pub fn random_graph(n: usize, model: Model, weights: Weights, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = edges_for(model, n, &mut rng)?;
    weigh(n, edges, weights, &mut rng)
}

/// `G(n, p)` conditioned on being connected, by resampling.
pub fn connected_gnp(n: usize, p: f64, weights: Weights, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CONNECTED_TRIES {
        let edges = edges_for(Model::Gnp { p }, n, &mut rng)?;
        let g = weigh(n, edges, weights, &mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Infeasible(format!(
        "no connected G({n}, {p}) draw after {CONNECTED_TRIES} tries"
    )))
}
