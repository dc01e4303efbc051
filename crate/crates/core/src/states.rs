//! Product states and tensor products of one- and two-qubit states.
//!
//! Every energy here is a closed form: `Σ (w/2)(1 − v_i·v_j)` for product
//! states, the cut value for basis states, and a per-edge table for singlet
//! pairings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    match_forest_decompose, spanning_forest, two_color_forest, MatchForestDecomposition,
    WeightedGraph,
};
use crate::sdp::{
    coordinate_ascent, random_unit_vectors, rank3_round, GramSolution, RoundedState,
    RoundingOutcome, Stop,
};

const UNIT_TOL: f64 = 1e-9;

/// One unit Bloch vector per qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductStateAssignment {
    bloch: Vec<[f64; 3]>,
}

impl ProductStateAssignment {
    pub fn new(bloch: Vec<[f64; 3]>) -> Result<Self> {
        check_unit(&bloch)?;
        Ok(Self { bloch })
    }

    /// `±ẑ` for bits `0/1`.
    pub fn from_bits(z: &[u8]) -> Self {
        let bloch = z
            .iter()
            .map(|&b| [0.0, 0.0, if b == 0 { 1.0 } else { -1.0 }])
            .collect();
        Self { bloch }
    }

    pub fn bloch(&self) -> &[[f64; 3]] {
        &self.bloch
    }
}

fn check_unit(bloch: &[[f64; 3]]) -> Result<()> {
    for (index, v) in bloch.iter().enumerate() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { index, norm });
        }
    }
    Ok(())
}

/// `Σ_e (w_e/2)(1 − v_u·v_v)`.
pub fn product_energy(g: &WeightedGraph, bloch: &[[f64; 3]]) -> Result<f64> {
    if bloch.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: bloch.len(),
        });
    }
    check_unit(bloch)?;
    Ok(g.edges()
        .iter()
        .map(|e| {
            let (a, b) = (bloch[e.u], bloch[e.v]);
            e.w / 2.0 * (1.0 - (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]))
        })
        .sum())
}

/// Total weight of edges whose endpoints get different bits.
pub fn cut_value(g: &WeightedGraph, z: &[u8]) -> Result<f64> {
    if z.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: z.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .filter(|e| z[e.u] != z[e.v])
        .map(|e| e.w)
        .sum())
}

/// 2-coloring of a spanning forest and its cut value (`≥ |V| − c` unweighted
/// with `c` components).
pub fn tree_coloring_state(g: &WeightedGraph) -> Result<(Vec<u8>, f64)> {
    let tree = spanning_forest(g);
    let z = two_color_forest(g, &tree)?;
    let value = cut_value(g, &z)?;
    Ok((z, value))
}

/// Singlets on disjoint vertex pairs and basis bits elsewhere.
///
/// `bits` has one entry per vertex; entries of paired vertices are stored as
/// 0 and carry no meaning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairProductState {
    pairs: Vec<(usize, usize)>,
    bits: Vec<u8>,
}

impl PairProductState {
    pub fn new(pairs: Vec<(usize, usize)>, mut bits: Vec<u8>) -> Result<Self> {
        let n = bits.len();
        let mut used = vec![false; n];
        for &(a, b) in &pairs {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        got: v + 1,
                    });
                }
                if used[v] {
                    return Err(Error::OverlappingPairs(v));
                }
                used[v] = true;
            }
        }
        for (v, b) in bits.iter_mut().enumerate() {
            if used[v] {
                *b = 0;
            }
        }
        Ok(Self { pairs, bits })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    fn partners(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.n()];
        for &(a, b) in &self.pairs {
            p[a] = Some(b);
            p[b] = Some(a);
        }
        p
    }
}

/// Closed-form energy of a pair-product state: each edge contributes `2w`
/// if it is a singlet pair, `w/2` if it touches a pair otherwise
/// (the singlet marginal is maximally mixed), and the cut value between
/// unpaired vertices.
pub fn pair_product_energy(g: &WeightedGraph, s: &PairProductState) -> Result<f64> {
    if s.n() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: s.n(),
        });
    }
    let partner = s.partners();
    Ok(g.edges()
        .iter()
        .map(|e| {
            let factor = match (partner[e.u], partner[e.v]) {
                (Some(p), _) if p == e.v => 2.0,
                (Some(_), _) | (_, Some(_)) => 0.5,
                (None, None) if s.bits[e.u] != s.bits[e.v] => 1.0,
                _ => 0.0,
            };
            factor * e.w
        })
        .sum())
}

/// Greedy single-flip local search on the subgraph induced by `free`,
/// starting from `bits`. Ends at a cut with at least half the induced weight.
fn local_cut_search(g: &WeightedGraph, free: &[bool], bits: &mut [u8]) {
    loop {
        let mut improved = false;
        for v in (0..g.n()).filter(|&v| free[v]) {
            let (mut same, mut across) = (0.0, 0.0);
            for &(u, k) in g.neighbors(v) {
                if !free[u] {
                    continue;
                }
                if bits[u] == bits[v] {
                    same += g.edge(k).w;
                } else {
                    across += g.edge(k).w;
                }
            }
            if same - across > 0.0 {
                bits[v] ^= 1;
                improved = true;
            }
        }
        if !improved {
            return;
        }
    }
}

/// Singlets on the matching `M` of [`match_forest_decompose`], with the bits
/// on unmatched vertices set by local search on their induced subgraph.
///
/// The value is at least `(3/2)m + W/2`.
pub fn match_singlet_state(g: &WeightedGraph) -> Result<(PairProductState, f64)> {
    let d = match_forest_decompose(g);
    match_singlet_state_from(g, &d)
}

fn match_singlet_state_from(
    g: &WeightedGraph,
    d: &MatchForestDecomposition,
) -> Result<(PairProductState, f64)> {
    let pairs: Vec<(usize, usize)> = d
        .matching
        .iter()
        .map(|&k| (g.edge(k).u, g.edge(k).v))
        .collect();
    let mut free = vec![false; g.n()];
    for &v in &d.unmatched {
        free[v] = true;
    }
    let mut bits = two_color_forest(g, &d.forest)?;
    local_cut_search(g, &free, &mut bits);
    let state = PairProductState::new(pairs, bits)?;
    let value = pair_product_energy(g, &state)?;
    Ok((state, value))
}

/// Coordinate-ascent local search over product states from `starts` seeded
/// random starts, each run until the projected gradient is below `1e-8`.
pub fn product_local_search(
    g: &WeightedGraph,
    starts: usize,
    seed: u64,
) -> Result<(ProductStateAssignment, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inits: Vec<Vec<[f64; 3]>> = (0..starts.max(1))
        .map(|_| {
            random_unit_vectors(&mut rng, g.n(), 3)
                .into_iter()
                .map(|v| [v[0], v[1], v[2]])
                .collect()
        })
        .collect();
    product_local_search_from(g, &inits)
}

/// Runs the product-state local search from each given start and keeps the
/// best result.
pub fn product_local_search_from(
    g: &WeightedGraph,
    starts: &[Vec<[f64; 3]>],
) -> Result<(ProductStateAssignment, f64)> {
    let mut best: Option<(ProductStateAssignment, f64)> = None;
    for start in starts {
        let mut vs: Vec<Vec<f64>> = start.iter().map(|v| v.to_vec()).collect();
        coordinate_ascent(g, &mut vs, Stop::Gradient(1e-8), 20_000);
        let bloch: Vec<[f64; 3]> = vs.into_iter().map(|v| [v[0], v[1], v[2]]).collect();
        let value = product_energy(g, &bloch)?;
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((ProductStateAssignment::new(bloch)?, value));
        }
    }
    best.ok_or_else(|| Error::Infeasible("no starting points".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateLabel {
    TreeColoring,
    MatchSinglet,
    Rank3Product,
    BestBasis,
}

impl CandidateLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateLabel::TreeColoring => "tree-coloring",
            CandidateLabel::MatchSinglet => "match-singlet",
            CandidateLabel::Rank3Product => "rank3-product",
            CandidateLabel::BestBasis => "best-basis",
        }
    }
}

/// A candidate state in a form its energy can be recomputed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StatePayload {
    Basis {
        bits: Vec<u8>,
    },
    PairProduct {
        pairs: Vec<(usize, usize)>,
        bits: Vec<u8>,
    },
    Product {
        bloch: Vec<[f64; 3]>,
    },
}

impl StatePayload {
    pub fn energy(&self, g: &WeightedGraph) -> Result<f64> {
        match self {
            StatePayload::Basis { bits } => cut_value(g, bits),
            StatePayload::PairProduct { pairs, bits } => {
                pair_product_energy(g, &PairProductState::new(pairs.clone(), bits.clone())?)
            }
            StatePayload::Product { bloch } => product_energy(g, bloch),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateReport {
    pub label: CandidateLabel,
    pub energy: f64,
    pub payload: StatePayload,
}

impl CandidateReport {
    /// Builds a report with the energy evaluated from `payload`.
    pub fn new(g: &WeightedGraph, label: CandidateLabel, payload: StatePayload) -> Result<Self> {
        Ok(Self {
            label,
            energy: payload.energy(g)?,
            payload,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FewQubitOutcome {
    pub best: CandidateReport,
    pub candidates: Vec<CandidateReport>,
    pub decomposition: MatchForestDecomposition,
    pub rounding: RoundingOutcome,
}

impl FewQubitOutcome {
    pub fn rounding_failed(&self) -> bool {
        self.rounding.failed
    }
}

/// Best of the forest 2-coloring, the matching-singlet state and the rank-3
/// rounded product state.
///
/// A flagged rank-3 rounding drops the product candidate; the other two are
/// still evaluated.
pub fn best_few_qubit_candidate(
    g: &WeightedGraph,
    sdp: &GramSolution,
    seed: u64,
    attempts: usize,
) -> Result<FewQubitOutcome> {
    let decomposition = match_forest_decompose(g);
    let forest_bits = two_color_forest(g, &decomposition.forest)?;
    let (pairs, _) = match_singlet_state_from(g, &decomposition)?;
    let rounding = rank3_round(g, sdp, seed, attempts)?;

    let mut candidates = vec![
        CandidateReport::new(
            g,
            CandidateLabel::TreeColoring,
            StatePayload::Basis { bits: forest_bits },
        )?,
        CandidateReport::new(
            g,
            CandidateLabel::MatchSinglet,
            StatePayload::PairProduct {
                pairs: pairs.pairs().to_vec(),
                bits: pairs.bits().to_vec(),
            },
        )?,
    ];
    if !rounding.failed {
        if let RoundedState::Product { bloch } = &rounding.state {
            candidates.push(CandidateReport::new(
                g,
                CandidateLabel::Rank3Product,
                StatePayload::Product {
                    bloch: bloch.clone(),
                },
            )?);
        }
    }
    let best = candidates
        .iter()
        .cloned()
        .reduce(|a, b| if b.energy > a.energy { b } else { a })
        .expect("at least two candidates");
    Ok(FewQubitOutcome {
        best,
        candidates,
        decomposition,
        rounding,
    })
}
