//! The Max Cut semidefinite relaxation and its roundings.
//!
//! The SDP `max Σ (w_ij/2)(1 − M_ij)` over `M ⪰ 0, diag(M) = 1` is solved in
//! factored form `M = VᵀV` with unit columns `v_i ∈ R^r`, by cyclic exact
//! coordinate updates `v_i ← −normalize(Σ_j w_ij v_j)`. Each update maximizes
//! the objective in `v_i` with the others fixed, so the objective never
//! decreases. With `r > √(2n)` this factorization has no spurious local
//! optima for generic instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::opt_upper_bound;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::states::{cut_value, product_energy};

/// Hyperplane rounding guarantee relative to the SDP value.
pub const GW_RATIO: f64 = 0.8785;
/// Rank-3 rounding guarantee relative to the best product state.
pub const RANK3_RATIO: f64 = 0.956;
/// `0.5 · RANK3_RATIO`: product states reach half of `OPT`.
pub const RANK3_OPT_RATIO: f64 = 0.478;

pub const DEFAULT_ATTEMPTS: usize = 200;

const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SdpOptions {
    /// Embedding rank; `None` picks `min(n, ⌈√(2n)⌉ + 1)`.
    pub rank: Option<usize>,
    /// Stop once a sweep changes the objective by less than `tol` (relative).
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            rank: None,
            tol: 1e-13,
            max_sweeps: 50_000,
            seed: 1,
        }
    }
}

pub fn auto_rank(n: usize) -> usize {
    let r = (2.0 * n as f64).sqrt().ceil() as usize + 1;
    r.min(n).max(1)
}

/// A feasible point of the SDP in factored form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramSolution {
    pub rank: usize,
    pub vectors: Vec<Vec<f64>>,
    pub objective: f64,
    /// Largest `‖(I − v_i v_iᵀ) Σ_j w_ij v_j‖` over vertices.
    pub residual: f64,
    pub converged: bool,
    pub sweeps: usize,
}

impl GramSolution {
    /// Solver objective padded by a stationarity-based margin, for use where
    /// a value no smaller than `SDP(G)` is needed.
    pub fn objective_upper_estimate(&self, g: &WeightedGraph) -> f64 {
        self.objective + g.n() as f64 * self.residual + 1e-9 * g.total_weight().max(1.0)
    }
}

/// Stopping rule for [`coordinate_ascent`].
#[derive(Clone, Copy, Debug)]
pub enum Stop {
    /// Relative objective change per sweep.
    ObjectiveChange(f64),
    /// Largest projected gradient norm.
    Gradient(f64),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neighbor_sum(g: &WeightedGraph, vectors: &[Vec<f64>], i: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for &(j, k) in g.neighbors(i) {
        let w = g.edge(k).w;
        out.iter_mut()
            .zip(&vectors[j])
            .for_each(|(o, v)| *o += w * v);
    }
}

fn objective_of(g: &WeightedGraph, vectors: &[Vec<f64>]) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.w / 2.0 * (1.0 - dot(&vectors[e.u], &vectors[e.v])))
        .sum()
}

/// `Σ_e (w_e/2)(1 − v_u·v_v)` for unit vectors.
pub fn sdp_objective(g: &WeightedGraph, vectors: &[Vec<f64>]) -> Result<f64> {
    if vectors.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: vectors.len(),
        });
    }
    for (index, v) in vectors.iter().enumerate() {
        let norm = dot(v, v).sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { index, norm });
        }
    }
    Ok(objective_of(g, vectors))
}

/// Largest projected-gradient norm over vertices.
pub fn stationarity_residual(g: &WeightedGraph, vectors: &[Vec<f64>]) -> f64 {
    let r = vectors.first().map_or(0, Vec::len);
    let mut s = vec![0.0; r];
    (0..g.n())
        .map(|i| {
            neighbor_sum(g, vectors, i, &mut s);
            let along = dot(&s, &vectors[i]);
            s.iter()
                .zip(&vectors[i])
                .map(|(a, b)| (a - along * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Cyclic exact coordinate updates on unit vectors, in place.
///
/// Returns `(sweeps, converged)`. Vertices whose neighbor sum vanishes keep
/// their vector.
pub fn coordinate_ascent(
    g: &WeightedGraph,
    vectors: &mut [Vec<f64>],
    stop: Stop,
    max_sweeps: usize,
) -> (usize, bool) {
    let r = vectors.first().map_or(0, Vec::len);
    let mut s = vec![0.0; r];
    let mut prev = objective_of(g, vectors);
    for sweep in 1..=max_sweeps {
        for i in 0..g.n() {
            neighbor_sum(g, vectors, i, &mut s);
            let norm = dot(&s, &s).sqrt();
            if norm > 1e-300 {
                vectors[i]
                    .iter_mut()
                    .zip(&s)
                    .for_each(|(v, x)| *v = -x / norm);
            }
        }
        let obj = objective_of(g, vectors);
        debug_assert!(
            obj >= prev - 1e-12 * prev.abs().max(1.0),
            "objective decreased from {prev} to {obj}"
        );
        let done = match stop {
            Stop::ObjectiveChange(tol) => (obj - prev).abs() <= tol * obj.abs().max(1.0),
            Stop::Gradient(tol) => stationarity_residual(g, vectors) <= tol,
        };
        prev = obj;
        if done {
            return (sweep, true);
        }
    }
    (max_sweeps, false)
}

/// `count` random unit vectors in `R^rank`.
pub fn random_unit_vectors(rng: &mut impl Rng, count: usize, rank: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..rank).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dot(&v, &v).sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// Solves the Max Cut SDP by low-rank coordinate ascent from a seeded
/// random start.
///
/// Hitting `max_sweeps` is not an error: the last iterate is returned with
/// `converged = false`.
pub fn solve_maxcut_sdp(g: &WeightedGraph, opts: &SdpOptions) -> Result<GramSolution> {
    let rank = opts.rank.unwrap_or_else(|| auto_rank(g.n()));
    if rank == 0 {
        return Err(Error::Infeasible("SDP rank must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut vectors = random_unit_vectors(&mut rng, g.n(), rank);
    let (sweeps, converged) = coordinate_ascent(
        g,
        &mut vectors,
        Stop::ObjectiveChange(opts.tol),
        opts.max_sweeps,
    );
    Ok(GramSolution {
        rank,
        objective: objective_of(g, &vectors),
        residual: stationarity_residual(g, &vectors),
        vectors,
        converged,
        sweeps,
    })
}

/// The rounded object; its value is always recomputed from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RoundedState {
    Cut { z: Vec<u8> },
    Product { bloch: Vec<[f64; 3]> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundingOutcome {
    pub state: RoundedState,
    pub value: f64,
    pub attempts: usize,
    /// Value the best attempt had to reach.
    pub threshold: f64,
    pub failed: bool,
}

fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// Keeps the highest value, earliest attempt on ties.
fn best_of<T: Send>(results: Vec<(usize, f64, T)>) -> Option<(usize, f64, T)> {
    results.into_iter().reduce(|a, b| {
        if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
            b
        } else {
            a
        }
    })
}

/// Best of `attempts` random-hyperplane cuts `z_i = [g·v_i < 0]`.
///
/// `failed` is set when the best cut is below `0.8785 · sol.objective`.
pub fn gw_round(
    g: &WeightedGraph,
    sol: &GramSolution,
    seed: u64,
    attempts: usize,
) -> Result<RoundingOutcome> {
    let attempts = attempts.max(1);
    let results: Vec<(usize, f64, Vec<u8>)> = (0..attempts)
        .into_par_iter()
        .map(|a| {
            let mut rng = attempt_rng(seed, a);
            let normal: Vec<f64> = (0..sol.rank).map(|_| rng.sample(StandardNormal)).collect();
            let z: Vec<u8> = sol
                .vectors
                .iter()
                .map(|v| u8::from(dot(&normal, v) < 0.0))
                .collect();
            let value = cut_value(g, &z).expect("one bit per vertex");
            (a, value, z)
        })
        .collect();
    let (_, _, z) = best_of(results).expect("at least one attempt");
    let value = cut_value(g, &z)?;
    let threshold = GW_RATIO * sol.objective;
    Ok(RoundingOutcome {
        state: RoundedState::Cut { z },
        value,
        attempts,
        threshold,
        failed: value < threshold,
    })
}

/// Best of `attempts` Gaussian projections `v_i ← normalize(Z u_i)` with
/// `Z ∈ R^{3×r}` i.i.d. standard normal.
///
/// `PROD(G)` is not computable here, so `failed` compares against
/// `0.478 ×` the best efficiently computable upper bound on `OPT(G)`.
pub fn rank3_round(
    g: &WeightedGraph,
    sol: &GramSolution,
    seed: u64,
    attempts: usize,
) -> Result<RoundingOutcome> {
    let attempts = attempts.max(1);
    let results: Vec<(usize, f64, Vec<[f64; 3]>)> = (0..attempts)
        .into_par_iter()
        .map(|a| {
            let mut rng = attempt_rng(seed, a);
            let bloch = loop {
                let proj: Vec<[f64; 3]> = (0..sol.rank)
                    .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
                    .collect();
                let mapped: Option<Vec<[f64; 3]>> = sol
                    .vectors
                    .iter()
                    .map(|u| {
                        let mut v = [0.0; 3];
                        for (col, &x) in proj.iter().zip(u) {
                            v.iter_mut().zip(col).for_each(|(vi, ci)| *vi += ci * x);
                        }
                        let norm = dot(&v, &v).sqrt();
                        (norm > 1e-12).then(|| v.map(|c| c / norm))
                    })
                    .collect();
                if let Some(m) = mapped {
                    break m;
                }
            };
            let value = product_energy(g, &bloch).expect("normalized");
            (a, value, bloch)
        })
        .collect();
    let (_, _, bloch) = best_of(results).expect("at least one attempt");
    let value = product_energy(g, &bloch)?;
    let bound = opt_upper_bound(g, Some(sol.objective_upper_estimate(g)))?;
    let threshold = RANK3_OPT_RATIO * bound.best;
    Ok(RoundingOutcome {
        state: RoundedState::Product { bloch },
        value,
        attempts,
        threshold,
        failed: value < threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use std::f64::consts::PI;

    fn solve(g: &WeightedGraph) -> GramSolution {
        solve_maxcut_sdp(g, &SdpOptions::default()).unwrap()
    }

    /// Grid search over planar angle assignments, vertex 0 pinned at angle 0.
    fn planar_grid_optimum(g: &WeightedGraph, steps: usize) -> f64 {
        let free = g.n() - 1;
        let mut best: f64 = 0.0;
        let mut idx = vec![0usize; free];
        loop {
            let mut vs = vec![vec![1.0, 0.0]];
            vs.extend(idx.iter().map(|&k| {
                let a = 2.0 * PI * k as f64 / steps as f64;
                vec![a.cos(), a.sin()]
            }));
            best = best.max(sdp_objective(g, &vs).unwrap());
            let mut p = 0;
            loop {
                if p == free {
                    return best;
                }
                idx[p] += 1;
                if idx[p] < steps {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn auto_rank_rule() {
        assert_eq!(auto_rank(2), 2);
        assert_eq!(auto_rank(4), 4);
        assert_eq!(auto_rank(20), 8);
        assert_eq!(auto_rank(1), 1);
    }

    #[test]
    fn single_edge_is_antipodal() {
        let sol = solve(&single_edge(1.0));
        assert!((sol.objective - 1.0).abs() < 1e-10);
        assert!((dot(&sol.vectors[0], &sol.vectors[1]) + 1.0).abs() < 1e-10);
        assert!(sol.converged);
    }

    #[test]
    fn triangle_reaches_120_degrees() {
        let g = triangle();
        let sol = solve(&g);
        assert!((sol.objective - 2.25).abs() < 1e-8);
        let grid = planar_grid_optimum(&g, 360);
        assert!((grid - 2.25).abs() < 1e-9);
        for e in g.edges() {
            assert!((dot(&sol.vectors[e.u], &sol.vectors[e.v]) + 0.5).abs() < 1e-5);
        }
    }

    #[test]
    fn k4_reaches_tetrahedron() {
        let g = complete(4);
        let sol = solve(&g);
        assert!((sol.objective - 4.0).abs() < 1e-8);
        // two antipodal pairs in the plane also reach it
        assert!((planar_grid_optimum(&g, 72) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn vectors_stay_unit_and_objective_bounded() {
        let g = WeightedGraph::new(
            5,
            [
                (0, 1, 2.0),
                (1, 2, 0.5),
                (2, 3, 1.0),
                (3, 4, 3.0),
                (0, 4, 1.0),
            ],
        )
        .unwrap();
        let sol = solve(&g);
        assert!(sdp_objective(&g, &sol.vectors).is_ok());
        assert!(sol.objective <= 2.0 * g.total_weight());
        assert!(sol.residual < 1e-5);
    }

    #[test]
    fn objective_never_decreases_across_sweeps() {
        let g = complete(7);
        let mut prev = 0.0;
        for sweeps in 1..30 {
            let opts = SdpOptions {
                max_sweeps: sweeps,
                tol: 0.0,
                ..Default::default()
            };
            let obj = solve_maxcut_sdp(&g, &opts).unwrap().objective;
            assert!(obj >= prev - 1e-14, "sweep {sweeps}: {obj} < {prev}");
            prev = obj;
        }
    }

    #[test]
    fn max_sweeps_exhaustion_is_flagged() {
        let opts = SdpOptions {
            max_sweeps: 1,
            tol: 0.0,
            ..Default::default()
        };
        let sol = solve_maxcut_sdp(&complete(6), &opts).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.sweeps, 1);
    }

    #[test]
    fn objective_rejects_non_unit_vectors() {
        let vs = vec![vec![1.0, 0.0], vec![0.5, 0.0]];
        assert!(matches!(
            sdp_objective(&single_edge(1.0), &vs),
            Err(Error::NotUnit { index: 1, .. })
        ));
        let same = vec![vec![0.0, 1.0]; 3];
        assert_eq!(sdp_objective(&triangle(), &same).unwrap(), 0.0);
    }

    #[test]
    fn gw_on_edge_and_triangle() {
        let g = single_edge(1.0);
        let out = gw_round(&g, &solve(&g), 7, 10).unwrap();
        assert_eq!(out.value, 1.0);
        assert!(!out.failed);

        let g = triangle();
        let out = gw_round(&g, &solve(&g), 7, 50).unwrap();
        assert_eq!(out.value, 2.0);
        assert!(!out.failed);
        let RoundedState::Cut { z } = &out.state else {
            panic!("cut expected")
        };
        assert_eq!(cut_value(&g, z).unwrap(), out.value);
    }

    #[test]
    fn gw_degenerate_vectors_fail() {
        let g = triangle();
        let sol = GramSolution {
            rank: 2,
            vectors: vec![vec![1.0, 0.0]; 3],
            objective: 2.25,
            residual: 0.0,
            converged: true,
            sweeps: 0,
        };
        let out = gw_round(&g, &sol, 1, 20).unwrap();
        assert_eq!(out.value, 0.0);
        assert!(out.failed);
    }

    #[test]
    fn rounding_is_deterministic_per_seed() {
        let g = complete(6);
        let sol = solve(&g);
        let a = rank3_round(&g, &sol, 11, 30).unwrap();
        let b = rank3_round(&g, &sol, 11, 30).unwrap();
        assert_eq!(a.state, b.state);
    }

    #[test]
    fn rank3_on_edge_triangle_and_zero_weights() {
        let g = single_edge(1.0);
        let out = rank3_round(&g, &solve(&g), 3, 10).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);

        let g = triangle();
        let out = rank3_round(&g, &solve(&g), 3, 50).unwrap();
        assert!(out.value >= 2.1, "{}", out.value);
        assert!(!out.failed);

        let g = WeightedGraph::new(3, [(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        let out = rank3_round(&g, &solve(&g), 3, 10).unwrap();
        assert_eq!(out.value, 0.0);
    }
}
