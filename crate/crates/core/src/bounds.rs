//! Efficiently computable upper bounds on `OPT(G) = ‖H_G‖`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sum_of_max_incident_weights, WeightedGraph};

/// `max w + Σ w`, the norm bound for a star with the given edge weights.
pub fn star_bound(weights: &[f64]) -> f64 {
    let max = weights.iter().copied().fold(0.0, f64::max);
    max + weights.iter().sum::<f64>()
}

/// Weighted Laplacian: weighted degree on the diagonal, `−w_e` off it.
pub fn graph_laplacian(g: &WeightedGraph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for e in g.edges() {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// `3 · sdp_value − W`.
///
/// The computational-basis part of `H_G` has top eigenvalue
/// `MC(G) − W/2 ≤ SDP(G) − W/2`, and `OPT(G) ≤ W/2 + 3(MC(G) − W/2)`.
/// `sdp_value` must be at least the true SDP optimum.
pub fn sdp_combined_bound(g: &WeightedGraph, sdp_value: f64) -> Result<f64> {
    let w = g.total_weight();
    if sdp_value < w / 2.0 - 1e-12 * w.max(1.0) {
        return Err(Error::Infeasible(format!(
            "SDP value {sdp_value} is below W/2 = {}",
            w / 2.0
        )));
    }
    Ok(3.0 * sdp_value - w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `2W`.
    pub trivial: f64,
    /// `W + (1/2) Σ_v max_{e∼v} w_e`.
    pub degree_sum: f64,
    pub sdp_combined: Option<f64>,
    /// Smallest of the above.
    pub best: f64,
}

/// All upper bounds on `OPT(G)`; the SDP-based one only when `sdp_value`
/// is given.
pub fn opt_upper_bound(g: &WeightedGraph, sdp_value: Option<f64>) -> Result<BoundReport> {
    let w = g.total_weight();
    let trivial = 2.0 * w;
    let degree_sum = w + 0.5 * sum_of_max_incident_weights(g);
    let sdp_combined = sdp_value.map(|s| sdp_combined_bound(g, s)).transpose()?;
    let best = sdp_combined
        .into_iter()
        .fold(trivial.min(degree_sum), f64::min);
    Ok(BoundReport {
        trivial,
        degree_sum,
        sdp_combined,
        best,
    })
}
