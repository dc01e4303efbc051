//! Run reports for the command-line harness.
//!
//! A report is plain data: every value is recomputed from the state object
//! it describes, and the text rendering only projects the JSON fields.

use std::fmt::Write as _;
use std::time::Instant;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{opt_upper_bound, BoundReport};
use crate::circuit::{
    circuit_energy, guarantee_ratio, shallow_circuit_from_sdp, theta_star, PipelineOptions,
    VariationalCircuit,
};
use crate::error::Result;
use crate::generate::{connected_gnp, Weights};
use crate::graph::{match_forest_decompose, WeightedGraph};
use crate::oracle::{brute_force_maxcut, ExactOracle, BRUTE_FORCE_MAX_VERTICES};
use crate::sdp::{gw_round, rank3_round, solve_maxcut_sdp, GramSolution, RoundedState, SdpOptions};
use crate::states::{
    best_few_qubit_candidate, match_singlet_state, product_local_search, tree_coloring_state,
    StatePayload,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest `n` for which the exact oracle runs when left on auto.
pub const AUTO_ORACLE_MAX_VERTICES: usize = 16;

/// Ratio the few-qubit candidates are guaranteed against `OPT`.
pub const FEW_QUBIT_RATIO: f64 = 0.53;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Best random-hyperplane cut of the SDP vectors.
    GwCut,
    /// Best rank-3 Gaussian projection of the SDP vectors.
    Rank3Product,
    /// 2-coloring of a spanning tree.
    TreeColoring,
    /// Singlets on the heaviest-edge matching.
    MatchSinglet,
    /// Best of the tree-coloring-style, match-singlet and rank-3 candidates.
    FewQubit,
    /// Multi-start product-state local search.
    ProductSearch,
    /// Commuting-gate variational circuit seeded by the hyperplane cut.
    Circuit,
    /// Exact Max Cut by enumeration.
    BestBasis,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::GwCut,
        Algorithm::Rank3Product,
        Algorithm::TreeColoring,
        Algorithm::MatchSinglet,
        Algorithm::FewQubit,
        Algorithm::ProductSearch,
        Algorithm::Circuit,
        Algorithm::BestBasis,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::GwCut => "gw-cut",
            Algorithm::Rank3Product => "rank3-product",
            Algorithm::TreeColoring => "tree-coloring",
            Algorithm::MatchSinglet => "match-singlet",
            Algorithm::FewQubit => "few-qubit",
            Algorithm::ProductSearch => "product-search",
            Algorithm::Circuit => "circuit",
            Algorithm::BestBasis => "best-basis",
        }
    }

    fn needs_sdp(self) -> bool {
        matches!(
            self,
            Algorithm::GwCut | Algorithm::Rank3Product | Algorithm::FewQubit | Algorithm::Circuit
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// On when `n ≤ 16`.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub attempts: usize,
    pub theta_grid: usize,
    pub oracle: OracleMode,
    pub rank: Option<usize>,
    pub tol: f64,
    pub product_starts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let sdp = SdpOptions::default();
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            seed: 1,
            attempts: crate::sdp::DEFAULT_ATTEMPTS,
            theta_grid: PipelineOptions::default().theta_grid,
            oracle: OracleMode::Auto,
            rank: sdp.rank,
            tol: sdp.tol,
            product_starts: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub total_weight: f64,
    /// `"k-regular"` or `"irregular"`.
    pub regularity: String,
    pub connected: bool,
}

impl GraphSummary {
    pub fn of(g: &WeightedGraph) -> Self {
        Self {
            n: g.n(),
            edges: g.num_edges(),
            total_weight: g.total_weight(),
            regularity: match g.regular_degree() {
                Some(d) => format!("{d}-regular"),
                None => "irregular".into(),
            },
            connected: g.is_connected(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpSummary {
    pub objective: f64,
    pub rank: usize,
    pub residual: f64,
    pub converged: bool,
    pub sweeps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgorithmState {
    State(StatePayload),
    Circuit(VariationalCircuit),
}

impl AlgorithmState {
    pub fn energy(&self, g: &WeightedGraph) -> Result<f64> {
        match self {
            AlgorithmState::State(s) => s.energy(g),
            AlgorithmState::Circuit(c) => circuit_energy(g, &c.z, c.theta),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmEntry {
    pub label: String,
    pub value: f64,
    /// `value / bounds.best`.
    pub ratio_upper: Option<f64>,
    /// `value / opt`.
    pub ratio_opt: Option<f64>,
    pub wall_ms: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub state: AlgorithmState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    Failed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    fn new(check: &str, status: Status, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            status,
            detail: detail.into(),
        }
    }

    fn from_bool(check: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Passed } else { Status::Failed };
        Self::new(check, status, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub graph: GraphSummary,
    pub seed: u64,
    pub sdp: Option<SdpSummary>,
    pub bounds: BoundReport,
    pub opt: Option<f64>,
    pub algorithms: Vec<AlgorithmEntry>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl RunReport {
    /// Recomputes every value from its state and every ratio from the
    /// current denominators.
    pub fn recompute(&mut self, g: &WeightedGraph) -> Result<()> {
        for e in &mut self.algorithms {
            e.value = e.state.energy(g)?;
            e.ratio_upper = ratio(e.value, Some(self.bounds.best));
            e.ratio_opt = ratio(e.value, self.opt);
        }
        Ok(())
    }

    pub fn entry(&self, label: &str) -> Option<&AlgorithmEntry> {
        self.algorithms.iter().find(|e| e.label == label)
    }

    pub fn any_failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Failed)
    }

    /// Process exit code: 2 when a guarantee check failed.
    pub fn exit_code(&self) -> i32 {
        if self.any_failed() {
            2
        } else {
            0
        }
    }
}

fn ratio(value: f64, denom: Option<f64>) -> Option<f64> {
    denom.filter(|d| *d > 0.0).map(|d| value / d)
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

fn tol_for(g: &WeightedGraph) -> f64 {
    1e-9 * g.total_weight().max(1.0)
}

/// Runs the requested algorithms on `g`.
pub fn run_solve(g: &WeightedGraph, opts: &SolveOptions) -> Result<RunReport> {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for &a in &opts.algorithms {
        if !algorithms.contains(&a) {
            algorithms.push(a);
        }
    }
    let mut warnings = Vec::new();
    let sdp_opts = SdpOptions {
        rank: opts.rank,
        tol: opts.tol,
        seed: opts.seed,
        ..SdpOptions::default()
    };
    let sdp: Option<GramSolution> = if algorithms.iter().any(|a| a.needs_sdp()) {
        let sol = solve_maxcut_sdp(g, &sdp_opts)?;
        if !sol.converged {
            warnings.push(format!(
                "SDP solver stopped after {} sweeps without converging",
                sol.sweeps
            ));
        }
        Some(sol)
    } else {
        None
    };
    let bounds = opt_upper_bound(g, sdp.as_ref().map(|s| s.objective_upper_estimate(g)))?;

    let run_oracle = match opts.oracle {
        OracleMode::On => true,
        OracleMode::Off => false,
        OracleMode::Auto => g.n() <= AUTO_ORACLE_MAX_VERTICES,
    };
    let opt = if run_oracle {
        Some(
            ExactOracle {
                seed: opts.seed,
                ..ExactOracle::default()
            }
            .opt(g)?,
        )
    } else {
        None
    };

    let mut entries = Vec::new();
    let mut verdicts = Vec::new();
    let entry = |label: &str, state: AlgorithmState, wall_ms: f64, notes: Vec<String>| {
        Ok::<_, crate::Error>(AlgorithmEntry {
            label: label.into(),
            value: state.energy(g)?,
            ratio_upper: None,
            ratio_opt: None,
            wall_ms,
            seed: opts.seed,
            notes,
            state,
        })
    };

    for &alg in &algorithms {
        let seed = opts.seed;
        match alg {
            Algorithm::GwCut => {
                let sol = sdp.as_ref().expect("SDP solved");
                let (out, ms) = timed(|| gw_round(g, sol, seed, opts.attempts))?;
                let RoundedState::Cut { z } = out.state else {
                    unreachable!()
                };
                let mut notes = Vec::new();
                if out.failed {
                    notes.push(format!("cut below threshold {:.6}", out.threshold));
                }
                entries.push(entry(
                    alg.label(),
                    AlgorithmState::State(StatePayload::Basis { bits: z }),
                    ms,
                    notes,
                )?);
            }
            Algorithm::Rank3Product => {
                let sol = sdp.as_ref().expect("SDP solved");
                let (out, ms) = timed(|| rank3_round(g, sol, seed, opts.attempts))?;
                let RoundedState::Product { bloch } = out.state else {
                    unreachable!()
                };
                let mut notes = Vec::new();
                if out.failed {
                    notes.push(format!("value below threshold {:.6}", out.threshold));
                }
                entries.push(entry(
                    alg.label(),
                    AlgorithmState::State(StatePayload::Product { bloch }),
                    ms,
                    notes,
                )?);
            }
            Algorithm::TreeColoring => {
                let ((bits, _), ms) = timed(|| tree_coloring_state(g))?;
                entries.push(entry(
                    alg.label(),
                    AlgorithmState::State(StatePayload::Basis { bits }),
                    ms,
                    vec![],
                )?);
            }
            Algorithm::MatchSinglet => {
                let ((state, _), ms) = timed(|| match_singlet_state(g))?;
                let d = match_forest_decompose(g);
                let payload = StatePayload::PairProduct {
                    pairs: state.pairs().to_vec(),
                    bits: state.bits().to_vec(),
                };
                let e = entry(alg.label(), AlgorithmState::State(payload), ms, vec![])?;
                let floor = 1.5 * d.m + 0.5 * g.total_weight();
                verdicts.push(Verdict::from_bool(
                    "match-singlet-floor",
                    e.value >= floor - 1e-12 * g.total_weight().max(1.0),
                    format!("{:.9} vs (3/2)m + W/2 = {floor:.9}", e.value),
                ));
                entries.push(e);
            }
            Algorithm::FewQubit => {
                let sol = sdp.as_ref().expect("SDP solved");
                let (out, ms) = timed(|| best_few_qubit_candidate(g, sol, seed, opts.attempts))?;
                let mut notes = vec![format!("best: {}", out.best.label.as_str())];
                if out.rounding_failed() {
                    notes.push("rank-3 rounding flagged; product candidate dropped".into());
                }
                let e = entry(
                    alg.label(),
                    AlgorithmState::State(out.best.payload.clone()),
                    ms,
                    notes,
                )?;
                verdicts.push(match opt {
                    Some(o) if !out.rounding_failed() && o > 0.0 => Verdict::from_bool(
                        "few-qubit-ratio",
                        e.value / o >= FEW_QUBIT_RATIO - 1e-12,
                        format!("{:.6} of OPT, needs {FEW_QUBIT_RATIO}", e.value / o),
                    ),
                    _ => Verdict::new(
                        "few-qubit-ratio",
                        Status::NotApplicable,
                        "needs the exact oracle and an unflagged rank-3 rounding",
                    ),
                });
                entries.push(e);
            }
            Algorithm::ProductSearch => {
                let starts = opts.product_starts;
                let ((state, _), ms) = timed(|| product_local_search(g, starts, seed))?;
                let payload = StatePayload::Product {
                    bloch: state.bloch().to_vec(),
                };
                entries.push(entry(
                    alg.label(),
                    AlgorithmState::State(payload),
                    ms,
                    vec![],
                )?);
            }
            Algorithm::Circuit => {
                let sol = sdp.as_ref().expect("SDP solved");
                let popts = PipelineOptions {
                    seed,
                    attempts: opts.attempts,
                    sdp: sdp_opts.clone(),
                    theta_grid: opts.theta_grid,
                };
                let (out, ms) = timed(|| shallow_circuit_from_sdp(g, sol, &popts))?;
                let mut notes = vec![format!(
                    "theta = {:.10}, depth {}",
                    out.circuit.theta,
                    out.circuit.depth()
                )];
                if out.gw_failed {
                    notes.push("base cut below the hyperplane-rounding threshold".into());
                }
                if let Some(w) = &out.warning {
                    warnings.push(w.clone());
                }
                let e = entry(alg.label(), AlgorithmState::Circuit(out.circuit), ms, notes)?;
                verdicts.push(match (out.guarantee, out.gw_failed) {
                    (Some(gk), false) => Verdict::from_bool(
                        "circuit-ratio",
                        e.value / sol.objective >= gk - 1e-9,
                        format!("{:.6} of SDP, needs G = {gk:.6}", e.value / sol.objective),
                    ),
                    _ => Verdict::new(
                        "circuit-ratio",
                        Status::NotApplicable,
                        "needs a 3- or 4-regular graph and an unflagged base cut",
                    ),
                });
                entries.push(e);
            }
            Algorithm::BestBasis => {
                if g.n() > BRUTE_FORCE_MAX_VERTICES {
                    warnings.push(format!(
                        "best-basis skipped: enumeration capped at {BRUTE_FORCE_MAX_VERTICES} vertices"
                    ));
                    continue;
                }
                let ((_, bits), ms) = timed(|| brute_force_maxcut(g))?;
                let e = entry(
                    alg.label(),
                    AlgorithmState::State(StatePayload::Basis { bits }),
                    ms,
                    vec![],
                )?;
                verdicts.push(basis_floor_verdict(g, e.value, opt));
                entries.push(e);
            }
        }
    }

    if let Some(sol) = &sdp {
        let w = g.total_weight();
        verdicts.push(Verdict::from_bool(
            "sdp-range",
            sol.objective <= 2.0 * w + tol_for(g) && sol.objective >= w / 2.0 - tol_for(g),
            format!(
                "{:.9} in [W/2, 2W] = [{:.9}, {:.9}]",
                sol.objective,
                w / 2.0,
                2.0 * w
            ),
        ));
    }
    if let Some(o) = opt {
        verdicts.push(Verdict::from_bool(
            "upper-bound",
            o <= bounds.best + tol_for(g),
            format!("OPT {o:.9} vs bound {:.9}", bounds.best),
        ));
        let over: Vec<&str> = entries
            .iter()
            .filter(|e| e.value > o + tol_for(g))
            .map(|e| e.label.as_str())
            .collect();
        verdicts.push(Verdict::from_bool(
            "values-below-opt",
            over.is_empty(),
            if over.is_empty() {
                "all values ≤ OPT".to_string()
            } else {
                format!("above OPT: {}", over.join(", "))
            },
        ));
    }

    let mut report = RunReport {
        schema: SCHEMA_VERSION,
        graph: GraphSummary::of(g),
        seed: opts.seed,
        sdp: sdp.map(|s| SdpSummary {
            objective: s.objective,
            rank: s.rank,
            residual: s.residual,
            converged: s.converged,
            sweeps: s.sweeps,
        }),
        bounds,
        opt,
        algorithms: entries,
        verdicts,
        warnings,
    };
    report.recompute(g)?;
    Ok(report)
}

/// `1/3 + (2/3)·|E|/(2|E| + |V|)`.
pub fn basis_floor(g: &WeightedGraph) -> f64 {
    let e = g.num_edges() as f64;
    1.0 / 3.0 + (2.0 / 3.0) * e / (2.0 * e + g.n() as f64)
}

fn basis_floor_verdict(g: &WeightedGraph, basis: f64, opt: Option<f64>) -> Verdict {
    let unweighted = g.edges().iter().all(|e| e.w == 1.0);
    match opt {
        Some(o) if g.is_connected() && unweighted && g.num_edges() > 0 => {
            let floor = basis_floor(g);
            Verdict::from_bool(
                "basis-floor",
                basis / o >= floor - 1e-9,
                format!("{:.6} of OPT, needs {floor:.6}", basis / o),
            )
        }
        _ => Verdict::new(
            "basis-floor",
            Status::NotApplicable,
            "needs a connected unweighted graph and the exact oracle",
        ),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.6}"))
}

pub fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    let g = &r.graph;
    let _ = writeln!(
        s,
        "graph: n={} |E|={} W={} {}{}",
        g.n,
        g.edges,
        g.total_weight,
        g.regularity,
        if g.connected { "" } else { " disconnected" }
    );
    let _ = writeln!(s, "seed: {}", r.seed);
    if let Some(sdp) = &r.sdp {
        let _ = writeln!(
            s,
            "sdp: {:.9} (rank {}, residual {:.2e}, {} sweeps{})",
            sdp.objective,
            sdp.rank,
            sdp.residual,
            sdp.sweeps,
            if sdp.converged { "" } else { ", not converged" }
        );
    }
    let b = &r.bounds;
    let _ = writeln!(
        s,
        "bounds: trivial {:.6}, degree-sum {:.6}, sdp-combined {}, best {:.6}",
        b.trivial,
        b.degree_sum,
        fmt_opt(b.sdp_combined),
        b.best
    );
    let _ = writeln!(s, "opt: {}", fmt_opt(r.opt));
    let _ = writeln!(
        s,
        "{:<16} {:>14} {:>10} {:>10} {:>10}",
        "algorithm", "value", "/bound", "/opt", "ms"
    );
    for e in &r.algorithms {
        let _ = writeln!(
            s,
            "{:<16} {:>14.9} {:>10} {:>10} {:>10.2}",
            e.label,
            e.value,
            fmt_opt(e.ratio_upper),
            fmt_opt(e.ratio_opt),
            e.wall_ms
        );
        for n in &e.notes {
            let _ = writeln!(s, "    {n}");
        }
    }
    for v in &r.verdicts {
        let status = match v.status {
            Status::Passed => "passed",
            Status::Failed => "FAILED",
            Status::NotApplicable => "n/a",
        };
        let _ = writeln!(s, "check {:<20} {:<7} {}", v.check, status, v.detail);
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Reproduction {
    GValues,
    Prod2Minmax,
    BasisFloor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeGuarantee {
    pub d: usize,
    pub theta_star: f64,
    pub f_star: f64,
    pub g: f64,
}

pub fn degree_guarantee(d: usize) -> DegreeGuarantee {
    let (theta_star, f_star) = theta_star(d);
    DegreeGuarantee {
        d,
        theta_star,
        f_star,
        g: guarantee_ratio(d),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxResult {
    pub weakened: bool,
    pub step: f64,
    pub min: f64,
    pub argmin: (f64, f64),
    pub points: usize,
}

/// `max{2y, 3x + 1, (4 + x + y)/3} / (2 + x + y)`, or with the rank-3
/// losses `max{2y, 3x + 0.98, 0.956(4 + x + y)/3} / (2 + x + y)`.
pub fn minmax_objective(x: f64, y: f64, weakened: bool) -> f64 {
    let (shift, scale) = if weakened { (0.98, 0.956) } else { (1.0, 1.0) };
    let top = (2.0 * y)
        .max(3.0 * x + shift)
        .max(scale * (4.0 + x + y) / 3.0);
    top / (2.0 + x + y)
}

/// Minimum of [`minmax_objective`] over the grid `0 ≤ x ≤ y ≤ 1`.
pub fn minmax_grid(step: f64, weakened: bool) -> MinMaxResult {
    let k = (1.0 / step).round() as usize;
    // lowest value, then lexicographically smallest point
    let better = |a: (f64, (f64, f64)), b: (f64, (f64, f64))| {
        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let none = (f64::INFINITY, (0.0, 0.0));
    let (min, argmin) = (0..=k)
        .into_par_iter()
        .map(|j| {
            let y = j as f64 / k as f64;
            (0..=j)
                .map(|i| {
                    let x = i as f64 / k as f64;
                    (minmax_objective(x, y, weakened), (x, y))
                })
                .fold(none, better)
        })
        .reduce(|| none, better);
    let points = (k + 1) * (k + 2) / 2;
    MinMaxResult {
        weakened,
        step,
        min,
        argmin,
        points,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFloorInstance {
    pub seed: u64,
    pub n: usize,
    pub edges: usize,
    pub basis: f64,
    pub opt: f64,
    pub ratio: f64,
    pub floor: f64,
    pub passed: bool,
}

/// Best cut over `OPT` against [`basis_floor`] on random connected
/// unweighted graphs with `3 ≤ n ≤ max_n`.
pub fn basis_floor_batch(count: usize, max_n: usize, seed: u64) -> Result<Vec<BasisFloorInstance>> {
    let max_n = max_n.max(3);
    (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let inst_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k);
            let mut rng = ChaCha8Rng::seed_from_u64(inst_seed);
            let n = rng.random_range(3..=max_n);
            let p = rng.random_range(0.15..0.9);
            let g = connected_gnp(n, p, Weights::Uniform, inst_seed)?;
            let (basis, _) = brute_force_maxcut(&g)?;
            let opt = ExactOracle::default().opt(&g)?;
            let floor = basis_floor(&g);
            Ok(BasisFloorInstance {
                seed: inst_seed,
                n,
                edges: g.num_edges(),
                basis,
                opt,
                ratio: basis / opt,
                floor,
                passed: basis / opt >= floor - 1e-9,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub schema: u32,
    pub which: Reproduction,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degrees: Option<Vec<DegreeGuarantee>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minmax: Option<Vec<MinMaxResult>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis_floor: Option<Vec<BasisFloorInstance>>,
    pub verdicts: Vec<Verdict>,
}

impl ReproduceReport {
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.status == Status::Failed) {
            2
        } else {
            0
        }
    }
}

pub const MINMAX_STEP: f64 = 1e-3;

pub fn run_reproduce(which: Reproduction, seed: u64, count: usize) -> Result<ReproduceReport> {
    let mut report = ReproduceReport {
        schema: SCHEMA_VERSION,
        which,
        degrees: None,
        minmax: None,
        basis_floor: None,
        verdicts: Vec::new(),
    };
    match which {
        Reproduction::GValues => {
            let degs = vec![degree_guarantee(3), degree_guarantee(4)];
            for (d, lo, hi) in [(&degs[0], 1.046, 1.048), (&degs[1], 1.000, 1.002)] {
                report.verdicts.push(Verdict::from_bool(
                    &format!("G({})", d.d),
                    (lo..=hi).contains(&d.g),
                    format!("{:.7} in [{lo}, {hi}]", d.g),
                ));
            }
            report.degrees = Some(degs);
        }
        Reproduction::Prod2Minmax => {
            let plain = minmax_grid(MINMAX_STEP, false);
            let weak = minmax_grid(MINMAX_STEP, true);
            report.verdicts.push(Verdict::from_bool(
                "minmax",
                plain.min >= 0.55 - 1e-12,
                format!("{:.6} ≥ 0.55", plain.min),
            ));
            report.verdicts.push(Verdict::from_bool(
                "minmax-weakened",
                weak.min >= 0.53,
                format!("{:.6} ≥ 0.53", weak.min),
            ));
            report.minmax = Some(vec![plain, weak]);
        }
        Reproduction::BasisFloor => {
            let batch = basis_floor_batch(count, 12, seed)?;
            let bad = batch.iter().filter(|b| !b.passed).count();
            let worst = batch
                .iter()
                .map(|b| b.ratio - b.floor)
                .fold(f64::INFINITY, f64::min);
            report.verdicts.push(Verdict::from_bool(
                "basis-floor",
                bad == 0,
                format!(
                    "{} of {} instances pass, smallest margin {worst:.6}",
                    batch.len() - bad,
                    batch.len()
                ),
            ));
            report.basis_floor = Some(batch);
        }
    }
    Ok(report)
}

pub fn render_reproduce_text(r: &ReproduceReport) -> String {
    let mut s = String::new();
    for d in r.degrees.iter().flatten() {
        let _ = writeln!(
            s,
            "d={}: theta* = {:.10}, F* = {:.10}, G = {:.10}",
            d.d, d.theta_star, d.f_star, d.g
        );
    }
    for m in r.minmax.iter().flatten() {
        let _ = writeln!(
            s,
            "{}: min {:.9} at (x, y) = ({:.3}, {:.3}) over {} points",
            if m.weakened { "weakened" } else { "plain" },
            m.min,
            m.argmin.0,
            m.argmin.1,
            m.points
        );
    }
    if let Some(b) = &r.basis_floor {
        let _ = writeln!(s, "{} instances", b.len());
    }
    for v in &r.verdicts {
        let status = if v.status == Status::Failed {
            "FAILED"
        } else {
            "passed"
        };
        let _ = writeln!(s, "check {:<16} {:<7} {}", v.check, status, v.detail);
    }
    s
}
