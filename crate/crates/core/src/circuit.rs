//! Commuting-gate variational circuits seeded by a cut.
//!
//! Starting from `|z⟩`, apply `exp(iθ P(j)P(k))` on every edge with
//! `P(j) = X` when `z_j = 1` and `Y` otherwise. The gates commute, so an
//! edge coloring with `Δ + 1` colors gives a circuit of that depth. The
//! energy of each edge depends only on whether `z` cuts it, its endpoint
//! degrees and its triangle count.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{proper_edge_coloring, triangles_per_edge, CutPartition, WeightedGraph};
use crate::oracle::{apply_pauli_rotation, Pauli, StateVector};
use crate::sdp::{gw_round, solve_maxcut_sdp, GramSolution, RoundedState, SdpOptions, GW_RATIO};
use crate::states::cut_value;

const GOLDEN_TOL: f64 = 1e-10;

fn check_inputs(di: usize, dj: usize, t: usize) -> Result<()> {
    if di == 0 || dj == 0 || t + 1 > di.min(dj) {
        return Err(Error::TriangleCount { t, di, dj });
    }
    Ok(())
}

/// `⟨2h_ij⟩` on a cut edge:
/// `1 + sin2θ cos^{di−1}2θ + sin2θ cos^{dj−1}2θ + ((1 + cos^T 4θ)/2) cos^{di+dj−2−2T}2θ`.
pub fn edge_energy_sat(theta: f64, di: usize, dj: usize, t: usize) -> Result<f64> {
    check_inputs(di, dj, t)?;
    let (s, c) = (2.0 * theta).sin_cos();
    let c4 = (4.0 * theta).cos();
    let powc = |k: usize| c.powi(k as i32);
    Ok(1.0
        + s * powc(di - 1)
        + s * powc(dj - 1)
        + (1.0 + c4.powi(t as i32)) / 2.0 * powc(di + dj - 2 - 2 * t))
}

/// `⟨2h_ij⟩` on an uncut edge: `1 − cos^{di+dj−2−2T}(2θ)`.
pub fn edge_energy_unsat(theta: f64, di: usize, dj: usize, t: usize) -> Result<f64> {
    check_inputs(di, dj, t)?;
    Ok(1.0 - (2.0 * theta).cos().powi((di + dj - 2 - 2 * t) as i32))
}

/// Per-edge data the closed forms need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEnergyInputs {
    pub sat: bool,
    pub di: usize,
    pub dj: usize,
    pub t: usize,
}

impl EdgeEnergyInputs {
    /// `⟨2h_ij⟩` at angle `theta`.
    pub fn doubled_energy(&self, theta: f64) -> f64 {
        let f = if self.sat {
            edge_energy_sat
        } else {
            edge_energy_unsat
        };
        f(theta, self.di, self.dj, self.t).expect("inputs validated at construction")
    }
}

pub fn edge_inputs(g: &WeightedGraph, z: &[u8]) -> Result<Vec<EdgeEnergyInputs>> {
    let cut = CutPartition::new(g, z)?;
    let tri = triangles_per_edge(g);
    g.edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let inputs = EdgeEnergyInputs {
                sat: cut.is_sat(g, k),
                di: g.degree(e.u),
                dj: g.degree(e.v),
                t: tri[k],
            };
            check_inputs(inputs.di, inputs.dj, inputs.t)?;
            Ok(inputs)
        })
        .collect()
}

fn total_energy(g: &WeightedGraph, inputs: &[EdgeEnergyInputs], theta: f64) -> f64 {
    g.edges()
        .iter()
        .zip(inputs)
        .map(|(e, x)| e.w * x.doubled_energy(theta) / 2.0)
        .sum()
}

/// `⟨φ(θ)|H_G|φ(θ)⟩` in closed form.
pub fn circuit_energy(g: &WeightedGraph, z: &[u8], theta: f64) -> Result<f64> {
    let inputs = edge_inputs(g, z)?;
    let value = total_energy(g, &inputs, theta);
    if let Some(d) = g.regular_degree().filter(|&d| d > 0) {
        let floor = envelope(theta, d) / 2.0 * cut_value(g, z)?;
        debug_assert!(
            value >= floor - 1e-9 * g.total_weight().max(1.0),
            "energy {value} below the regular-graph floor {floor}"
        );
    }
    Ok(value)
}

/// `F(θ, d) = 1 + 2 cos^{d−1}(2θ) sin(2θ) + cos^{2d−2}(2θ)`, the cut-edge
/// energy floor in a `d`-regular graph.
pub fn envelope(theta: f64, d: usize) -> f64 {
    let (s, c) = (2.0 * theta).sin_cos();
    1.0 + 2.0 * c.powi(d as i32 - 1) * s + c.powi(2 * d as i32 - 2)
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > GOLDEN_TOL {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    let mid = (lo + hi) / 2.0;
    // endpoints can win when the maximizer sits on the boundary
    [lo, mid, hi]
        .into_iter()
        .fold((lo, f(lo)), |best, x| {
            let v = f(x);
            if v > best.1 {
                (x, v)
            } else {
                best
            }
        })
        .0
}

/// `(θ*, F(θ*, d))` with `θ*` the maximizer of `F(·, d)` on `[0, π/4]`.
pub fn theta_star(d: usize) -> (f64, f64) {
    let t = golden_max(|t| envelope(t, d), 0.0, FRAC_PI_4);
    (t, envelope(t, d))
}

/// `0.8785 · F(θ*(d), d) / 2`: the guaranteed ratio to `SDP(G)` for a
/// `d`-regular graph when the cut meets the hyperplane-rounding bound.
pub fn guarantee_ratio(d: usize) -> f64 {
    GW_RATIO * theta_star(d).1 / 2.0
}

/// Best `θ` for the exact closed-form energy: a uniform grid over one period
/// `[−π/2, π/2)` refined by golden section around the best grid point.
pub fn optimize_theta(g: &WeightedGraph, z: &[u8], grid: usize) -> Result<(f64, f64)> {
    let inputs = edge_inputs(g, z)?;
    let grid = grid.max(8);
    let h = std::f64::consts::PI / grid as f64;
    let f = |t: f64| total_energy(g, &inputs, t);
    let (mut best_t, mut best_v) = (0.0, f(0.0));
    for k in 0..grid {
        let t = -FRAC_PI_2 + k as f64 * h;
        let v = f(t);
        if v > best_v {
            (best_t, best_v) = (t, v);
        }
    }
    let refined = golden_max(f, best_t - h, best_t + h);
    let v = f(refined);
    Ok(if v > best_v {
        (refined, v)
    } else {
        (best_t, best_v)
    })
}

/// Depth-`(Δ+1)` layered form of `V(θ)`; every gate is `exp(iθ P(u)P(v))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationalCircuit {
    pub z: Vec<u8>,
    pub theta: f64,
    pub pauli: Vec<Pauli>,
    /// Vertex-disjoint edges per layer.
    pub layers: Vec<Vec<(usize, usize)>>,
}

impl VariationalCircuit {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Runs the layers on `|z⟩`.
    pub fn simulate(&self) -> StateVector {
        let mut psi = StateVector::basis(&self.z);
        for layer in &self.layers {
            for &(u, v) in layer {
                apply_pauli_rotation(&mut psi, (u, self.pauli[u]), (v, self.pauli[v]), self.theta);
            }
        }
        psi
    }
}

pub fn build_circuit(g: &WeightedGraph, z: &[u8], theta: f64) -> Result<VariationalCircuit> {
    CutPartition::new(g, z)?;
    let colors = proper_edge_coloring(g);
    let depth = colors.iter().copied().max().map_or(0, |c| c + 1);
    let mut layers = vec![Vec::new(); depth];
    for (e, &c) in g.edges().iter().zip(&colors) {
        layers[c].push((e.u, e.v));
    }
    Ok(VariationalCircuit {
        z: z.to_vec(),
        theta,
        pauli: z.iter().map(|&b| Pauli::for_bit(b)).collect(),
        layers,
    })
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    pub attempts: usize,
    pub sdp: SdpOptions,
    /// Grid size for the θ search on non-regular graphs.
    pub theta_grid: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            attempts: crate::sdp::DEFAULT_ATTEMPTS,
            sdp: SdpOptions::default(),
            theta_grid: 2048,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineOutcome {
    pub circuit: VariationalCircuit,
    /// Closed-form energy of the circuit's output state.
    pub energy: f64,
    pub cut: f64,
    pub sdp_objective: f64,
    /// `energy / sdp_objective`.
    pub ratio: f64,
    pub gw_failed: bool,
    pub regular_degree: Option<usize>,
    /// `G(k)` for `k`-regular input with `k ∈ {3, 4}`.
    pub guarantee: Option<f64>,
    /// `Some(ratio ≥ guarantee)` when a guarantee applies and the cut met
    /// its threshold.
    pub guarantee_met: Option<bool>,
    pub warning: Option<String>,
}

/// SDP, hyperplane rounding, then the circuit at `θ*(k)` for `k`-regular
/// graphs (or the best closed-form `θ` otherwise).
pub fn shallow_circuit_pipeline(
    g: &WeightedGraph,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome> {
    let sdp = solve_maxcut_sdp(g, &opts.sdp)?;
    shallow_circuit_from_sdp(g, &sdp, opts)
}

pub fn shallow_circuit_from_sdp(
    g: &WeightedGraph,
    sdp: &GramSolution,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome> {
    let gw = gw_round(g, sdp, opts.seed, opts.attempts)?;
    let RoundedState::Cut { z } = gw.state else {
        unreachable!("hyperplane rounding yields a cut")
    };
    let regular = g.regular_degree().filter(|&d| d > 0);
    let (theta, warning) = match regular {
        Some(k) if k == 3 || k == 4 => (theta_star(k).0, None),
        Some(k) => (
            theta_star(k).0,
            Some(format!(
                "{k}-regular graph: ratio guarantee only holds for degree 3 or 4"
            )),
        ),
        None => (
            optimize_theta(g, &z, opts.theta_grid)?.0,
            Some("irregular graph: no ratio guarantee".to_string()),
        ),
    };
    let circuit = build_circuit(g, &z, theta)?;
    let energy = circuit_energy(g, &z, theta)?;
    let ratio = if sdp.objective > 0.0 {
        energy / sdp.objective
    } else {
        f64::NAN
    };
    let guarantee = regular.filter(|k| *k == 3 || *k == 4).map(guarantee_ratio);
    let guarantee_met = guarantee
        .filter(|_| !gw.failed)
        .map(|gk| ratio >= gk - 1e-9);
    Ok(PipelineOutcome {
        circuit,
        energy,
        cut: gw.value,
        sdp_objective: sdp.objective,
        ratio,
        gw_failed: gw.failed,
        regular_degree: regular,
        guarantee,
        guarantee_met,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::ExactOracle;
    use std::f64::consts::PI;

    #[test]
    fn theta_zero_reduces_to_basis_values() {
        for (di, dj) in [(1, 1), (3, 4), (5, 2)] {
            for t in 0..di.min(dj) {
                assert_eq!(edge_energy_sat(0.0, di, dj, t).unwrap(), 2.0);
                assert_eq!(edge_energy_unsat(0.0, di, dj, t).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn zero_exponent_unsat_edge_is_dark() {
        // di + dj − 2 − 2T = 0
        for theta in [0.1, 0.5, 1.3] {
            assert_eq!(edge_energy_unsat(theta, 1, 1, 0).unwrap(), 0.0);
            assert_eq!(edge_energy_unsat(theta, 3, 3, 2).unwrap(), 0.0);
        }
    }

    #[test]
    fn out_of_range_triangles_rejected() {
        assert!(edge_energy_sat(0.1, 2, 3, 2).is_err());
        assert!(edge_energy_unsat(0.1, 0, 3, 0).is_err());
    }

    #[test]
    fn single_edge_matches_simulation_on_a_sweep() {
        let g = single_edge(1.0);
        let o = ExactOracle::default();
        for k in 0..100 {
            let theta = -PI / 2.0 + PI * k as f64 / 100.0;
            let psi = o.simulate_variational_state(&g, &[0, 1], theta).unwrap();
            let exact = o.energy(&g, &psi).unwrap();
            let closed = circuit_energy(&g, &[0, 1], theta).unwrap();
            assert!((exact - closed).abs() < 1e-12);
        }
        // the best angle gives the singlet
        let (t, v) = optimize_theta(&g, &[0, 1], 256).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!((t - PI / 4.0).abs() < 1e-6);
    }

    #[test]
    fn triangle_edges_use_triangle_terms() {
        let g = triangle();
        let o = ExactOracle::default();
        for theta in [0.05, 0.3, 0.77, 1.4, -0.6] {
            let psi = o.simulate_variational_state(&g, &[0, 1, 0], theta).unwrap();
            let exact = o.energy(&g, &psi).unwrap();
            let closed = circuit_energy(&g, &[0, 1, 0], theta).unwrap();
            assert!((exact - closed).abs() < 1e-12, "θ={theta}");
        }
    }

    #[test]
    fn more_triangles_never_hurt_cut_edges() {
        for d in 2..7 {
            for k in 0..=1000 {
                let theta = FRAC_PI_4 * k as f64 / 1000.0;
                let base = edge_energy_sat(theta, d, d, 0).unwrap();
                for t in 1..d {
                    assert!(edge_energy_sat(theta, d, d, t).unwrap() >= base - 1e-15);
                }
            }
        }
    }

    #[test]
    fn envelope_is_triangle_free_sat_energy() {
        for d in 1..8 {
            for theta in [0.0, 0.1, 0.2, 0.4, 0.7] {
                let a = edge_energy_sat(theta, d, d, 0).unwrap();
                assert!((a - envelope(theta, d)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unsat_is_nonnegative() {
        for di in 1..6 {
            for dj in 1..6 {
                for t in 0..di.min(dj) {
                    for k in 0..200 {
                        let theta = -PI + 2.0 * PI * k as f64 / 200.0;
                        assert!(edge_energy_unsat(theta, di, dj, t).unwrap() >= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn optimum_angles() {
        for d in 1..10 {
            assert_eq!(envelope(0.0, d), 2.0);
            let (t, f) = theta_star(d);
            // dense grid fallback
            let grid = (0..=20_000)
                .map(|k| envelope(FRAC_PI_4 * k as f64 / 20_000.0, d))
                .fold(f64::MIN, f64::max);
            assert!(f >= grid - 1e-9, "d={d}: {f} < {grid}");
            assert!((0.0..=FRAC_PI_4).contains(&t));
        }
        // 0.8785 F*/2 ≈ 1.047 and 1.001
        assert!((theta_star(3).1 - 2.3836).abs() < 1e-3);
        assert!((guarantee_ratio(3) - 1.047).abs() < 1e-3);
        assert!((guarantee_ratio(4) - 1.001).abs() < 1e-3);
        for d in 1..=20 {
            assert!(guarantee_ratio(d) >= GW_RATIO);
        }
    }

    #[test]
    fn circuit_depths() {
        let m = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(build_circuit(&m, &[0, 1, 0, 1], 0.2).unwrap().depth(), 1);
        let c = build_circuit(&triangle(), &[0, 1, 0], 0.2).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.gate_count(), 3);
        let k4 = complete(4);
        let c = build_circuit(&k4, &[0, 1, 0, 1], 0.2).unwrap();
        assert!(c.depth() <= 4);
        for layer in &c.layers {
            let mut vs: Vec<usize> = layer.iter().flat_map(|&(u, v)| [u, v]).collect();
            vs.sort_unstable();
            vs.dedup();
            assert_eq!(vs.len(), 2 * layer.len());
        }
    }

    #[test]
    fn layered_circuit_reproduces_simulation() {
        let g = complete(5);
        let z = [0, 1, 1, 0, 1];
        let c = build_circuit(&g, &z, 0.37).unwrap();
        let a = c.simulate();
        let b = ExactOracle::default()
            .simulate_variational_state(&g, &z, 0.37)
            .unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn pipeline_on_k4() {
        let g = complete(4);
        let out = shallow_circuit_pipeline(&g, &PipelineOptions::default()).unwrap();
        assert_eq!(out.cut, 4.0);
        assert!(!out.gw_failed);
        let floor = theta_star(3).1 / 2.0 * 4.0;
        assert!(out.energy >= floor - 1e-9);
        assert!(out.ratio >= 1.19);
        assert_eq!(out.guarantee_met, Some(true));
        let psi = out.circuit.simulate();
        let exact = ExactOracle::default().energy(&g, &psi).unwrap();
        assert!((exact - out.energy).abs() < 1e-10);
    }

    #[test]
    fn pipeline_warns_outside_guarantee() {
        let g = WeightedGraph::unweighted(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let out = shallow_circuit_pipeline(&g, &PipelineOptions::default()).unwrap();
        assert_eq!(out.regular_degree, Some(2));
        assert!(out.warning.is_some());
        assert_eq!(out.guarantee, None);
        assert_eq!(out.guarantee_met, None);
    }
}
