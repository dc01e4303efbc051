//! Exact state-vector evaluation for small instances.
//!
//! Amplitude index bit `j` is qubit `j`, with `|0⟩` the `+Z` eigenstate.
//! Each edge term acts as `h_ij = I − SWAP_ij`, so `H_G ψ` is computed by
//! bit-pair updates without ever forming a dense matrix.

use std::ops::{AddAssign, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{proper_edge_coloring, WeightedGraph};
use crate::states::cut_value;

pub const DEFAULT_MAX_QUBITS: usize = 20;
pub const BRUTE_FORCE_MAX_VERTICES: usize = 24;

const NORM_TOL: f64 = 1e-10;
const PARALLEL_DIM: usize = 1 << 12;

/// A pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates length `2^n` and unit norm.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let s = Self { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    fn unchecked(n: usize, amps: Vec<Complex64>) -> Self {
        Self { n, amps }
    }

    /// The computational basis state `|z⟩`.
    pub fn basis(z: &[u8]) -> Self {
        let n = z.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[bits_to_index(z)] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// Tensor product of single-qubit states with the given Bloch vectors.
    pub fn product(bloch: &[[f64; 3]]) -> Self {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for v in bloch {
            let polar = v[2].clamp(-1.0, 1.0).acos();
            let azimuth = v[1].atan2(v[0]);
            let q = [
                Complex64::new((polar / 2.0).cos(), 0.0),
                Complex64::from_polar((polar / 2.0).sin(), azimuth),
            ];
            let len = amps.len();
            let mut next = Vec::with_capacity(2 * len);
            next.extend(amps.iter().map(|&a| a * q[0]));
            next.extend(amps.iter().map(|&a| a * q[1]));
            amps = next;
        }
        Self {
            n: bloch.len(),
            amps,
        }
    }

    /// Singlets `(|0_a 1_b⟩ − |1_a 0_b⟩)/√2` on each pair, `|bits[v]⟩` on
    /// every other vertex. Pairs must be vertex-disjoint.
    pub fn pair_product(pairs: &[(usize, usize)], bits: &[u8]) -> Self {
        let n = bits.len();
        let mut base = bits.to_vec();
        for &(a, b) in pairs {
            base[a] = 0;
            base[b] = 0;
        }
        let base = bits_to_index(&base);
        let scale = std::f64::consts::FRAC_1_SQRT_2.powi(pairs.len() as i32);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for choice in 0u64..(1 << pairs.len()) {
            let mut idx = base;
            let mut sign = 1.0;
            for (p, &(a, b)) in pairs.iter().enumerate() {
                if choice >> p & 1 == 0 {
                    idx |= 1 << b;
                } else {
                    idx |= 1 << a;
                    sign = -sign;
                }
            }
            amps[idx] = Complex64::new(sign * scale, 0.0);
        }
        Self { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn bits_to_index(z: &[u8]) -> usize {
    z.iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | ((b as usize & 1) << j))
}

/// Single-qubit Pauli used by the variational gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Pauli {
    X,
    Y,
}

impl Pauli {
    /// `X` on bit 1, `Y` on bit 0.
    pub fn for_bit(b: u8) -> Self {
        if b == 1 {
            Pauli::X
        } else {
            Pauli::Y
        }
    }

    /// Phase of `⟨o|P|1−o⟩` for output bit `o`.
    fn phase(self, out_bit: usize) -> Complex64 {
        match (self, out_bit) {
            (Pauli::X, _) => Complex64::new(1.0, 0.0),
            (Pauli::Y, 1) => Complex64::new(0.0, 1.0),
            (Pauli::Y, _) => Complex64::new(0.0, -1.0),
        }
    }
}

/// Applies `exp(iθ P_j P_k)` in place.
pub fn apply_pauli_rotation(
    psi: &mut StateVector,
    (j, pj): (usize, Pauli),
    (k, pk): (usize, Pauli),
    theta: f64,
) {
    let (c, s) = (theta.cos(), theta.sin());
    let i_s = Complex64::new(0.0, s);
    let mask = (1 << j) | (1 << k);
    let phase = |b: usize| pj.phase(b >> j & 1) * pk.phase(b >> k & 1);
    for b in 0..psi.amps.len() {
        if b >> j & 1 == 1 {
            continue;
        }
        let partner = b ^ mask;
        let (x, y) = (psi.amps[b], psi.amps[partner]);
        psi.amps[b] = x * c + i_s * phase(b) * y;
        psi.amps[partner] = y * c + i_s * phase(partner) * x;
    }
}

/// Edge data in bit-mask form for the Hamiltonian kernel.
struct EdgeMasks(Vec<(usize, usize, f64)>);

impl EdgeMasks {
    fn new(g: &WeightedGraph) -> Self {
        Self(
            g.edges()
                .iter()
                .filter(|e| e.w != 0.0)
                .map(|e| (e.u, e.v, e.w))
                .collect(),
        )
    }

    /// `out = Σ_e w_e (I − SWAP_e) x`.
    fn apply<T>(&self, x: &[T], out: &mut [T])
    where
        T: Copy + Default + Send + Sync + Sub<Output = T> + Mul<f64, Output = T> + AddAssign,
    {
        let row = |b: usize, slot: &mut T| {
            let mut acc = T::default();
            for &(u, v, w) in &self.0 {
                if (b >> u ^ b >> v) & 1 == 1 {
                    acc += (x[b] - x[b ^ (1 << u | 1 << v)]) * w;
                }
            }
            *slot = acc;
        };
        if out.len() >= PARALLEL_DIM {
            out.par_iter_mut().enumerate().for_each(|(b, s)| row(b, s));
        } else {
            out.iter_mut().enumerate().for_each(|(b, s)| row(b, s));
        }
    }
}

/// Result of the largest-eigenvalue computation.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖H x − λ x‖` of the returned unit vector.
    pub residual: f64,
    pub matvecs: usize,
}

/// Exact evaluator with a qubit cap.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    pub max_qubits: usize,
    /// Lanczos restarts before giving up.
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for ExactOracle {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_QUBITS,
            max_restarts: 200,
            seed: 0x5eed_0ac1e,
        }
    }
}

impl ExactOracle {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_qubits {
            return Err(Error::TooManyQubits {
                qubits: n,
                cap: self.max_qubits,
            });
        }
        Ok(())
    }

    fn check_state(&self, g: &WeightedGraph, psi: &StateVector) -> Result<()> {
        self.check(g.n())?;
        if psi.n != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                got: psi.n,
            });
        }
        Ok(())
    }

    /// `H_G ψ`, unnormalized.
    pub fn apply_hamiltonian(&self, g: &WeightedGraph, psi: &StateVector) -> Result<StateVector> {
        self.check_state(g, psi)?;
        let mut out = vec![Complex64::default(); psi.amps.len()];
        EdgeMasks::new(g).apply(&psi.amps, &mut out);
        Ok(StateVector::unchecked(psi.n, out))
    }

    /// `⟨ψ|H_G|ψ⟩` for a normalized `ψ`.
    pub fn energy(&self, g: &WeightedGraph, psi: &StateVector) -> Result<f64> {
        self.check_state(g, psi)?;
        let norm = psi.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let h_psi = self.apply_hamiltonian(g, psi)?;
        let e = psi.inner(&h_psi);
        assert!(
            e.im.abs() <= 1e-10 * g.total_weight().max(1.0),
            "⟨ψ|H|ψ⟩ has imaginary part {}",
            e.im
        );
        Ok(e.re)
    }

    /// `OPT(G) = ‖H_G‖` by restarted Lanczos, certified by `residual ≤ tol`.
    ///
    /// `H_G` is real symmetric and PSD, so the top of the spectrum is its norm.
    pub fn max_eigenvalue(&self, g: &WeightedGraph, tol: f64) -> Result<Eigenpair> {
        self.check(g.n())?;
        let dim = 1usize << g.n();
        let masks = EdgeMasks::new(g);
        let krylov = dim.min(if dim <= 1 << 16 { 40 } else { 16 });
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        normalize(&mut x);

        let mut hx = vec![0.0; dim];
        let mut matvecs = 0;
        let mut residual = f64::INFINITY;
        for _ in 0..self.max_restarts {
            let (value, next, used) = lanczos_cycle(&masks, &x, krylov);
            matvecs += used;
            x = next;
            masks.apply(&x, &mut hx);
            matvecs += 1;
            let rayleigh = dot(&x, &hx);
            residual = hx
                .iter()
                .zip(&x)
                .map(|(h, v)| (h - rayleigh * v).powi(2))
                .sum::<f64>()
                .sqrt();
            debug_assert!(value <= rayleigh + 1e-8 * rayleigh.abs().max(1.0));
            if residual <= tol {
                return Ok(Eigenpair {
                    value: rayleigh,
                    vector: x,
                    residual,
                    matvecs,
                });
            }
        }
        Err(Error::NoConvergence {
            iterations: matvecs,
            residual,
        })
    }

    /// `OPT(G)` with a default residual tolerance.
    pub fn opt(&self, g: &WeightedGraph) -> Result<f64> {
        let tol = 1e-10 * g.total_weight().max(1.0);
        Ok(self.max_eigenvalue(g, tol)?.value)
    }

    /// `Π_{jk∈E} exp(iθ P(j)P(k)) |z⟩` with `P(j) = X` if `z_j = 1` else `Y`,
    /// applied one edge-color layer at a time.
    pub fn simulate_variational_state(
        &self,
        g: &WeightedGraph,
        z: &[u8],
        theta: f64,
    ) -> Result<StateVector> {
        self.check(g.n())?;
        if z.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                got: z.len(),
            });
        }
        let colors = proper_edge_coloring(g);
        let layers = colors.iter().copied().max().map_or(0, |c| c + 1);
        let mut psi = StateVector::basis(z);
        for layer in 0..layers {
            for (k, e) in g.edges().iter().enumerate() {
                if colors[k] == layer {
                    apply_pauli_rotation(
                        &mut psi,
                        (e.u, Pauli::for_bit(z[e.u])),
                        (e.v, Pauli::for_bit(z[e.v])),
                        theta,
                    );
                }
            }
        }
        Ok(psi)
    }

    /// `MC(G)` and a maximizing bit string by Gray-code enumeration.
    pub fn brute_force_maxcut(&self, g: &WeightedGraph) -> Result<(f64, Vec<u8>)> {
        brute_force_maxcut(g)
    }
}

/// Exhaustive Max Cut for `n ≤ 24`. The last vertex is pinned to 0.
pub fn brute_force_maxcut(g: &WeightedGraph) -> Result<(f64, Vec<u8>)> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooManyQubits {
            qubits: n,
            cap: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let mut z = vec![0u8; n];
    let mut best_z = z.clone();
    let (mut cut, mut best) = (0.0, 0.0);
    for step in 1u64..(1 << (n - 1)) {
        let v = step.trailing_zeros() as usize;
        let delta: f64 = g
            .neighbors(v)
            .iter()
            .map(|&(y, k)| {
                let w = g.edge(k).w;
                if z[y] == z[v] {
                    w
                } else {
                    -w
                }
            })
            .sum();
        z[v] ^= 1;
        cut += delta;
        if cut > best {
            best = cut;
            best_z.copy_from_slice(&z);
        }
    }
    let value = cut_value(g, &best_z)?;
    Ok((value, best_z))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

/// One Lanczos cycle from unit `start` with full reorthogonalization.
/// Returns the top Ritz value, its unit Ritz vector and the matvec count.
fn lanczos_cycle(masks: &EdgeMasks, start: &[f64], krylov: usize) -> (f64, Vec<f64>, usize) {
    let dim = start.len();
    let mut basis: Vec<Vec<f64>> = vec![start.to_vec()];
    let mut alpha = Vec::with_capacity(krylov);
    let mut beta: Vec<f64> = Vec::with_capacity(krylov);
    let mut w = vec![0.0; dim];
    for j in 0..krylov {
        masks.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let b = dot(&w, &w).sqrt();
        if j + 1 == krylov || b <= 1e-13 * a.abs().max(1.0) {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|v| v / b).collect());
    }
    let m = alpha.len();
    let tri = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(tri);
    let top = (0..m)
        .max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .unwrap();
    let mut ritz = vec![0.0; dim];
    for (i, q) in basis.iter().enumerate().take(m) {
        let s = eig.eigenvectors[(i, top)];
        ritz.iter_mut().zip(q).for_each(|(r, qi)| *r += s * qi);
    }
    normalize(&mut ritz);
    (eig.eigenvalues[top], ritz, m)
}
