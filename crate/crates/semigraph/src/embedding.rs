//! Complex-vector algebra and the diagonal Hermitian bilinear score.
//!
//! Every loss term and every prediction in this crate reduces to one of two
//! real-valued scores: `Re(conj(v_i)^T W v_j)` with a unit-modulus diagonal
//! phase matrix `W`, or the phase-free `Re(conj(v_i)^T u_c)`. Depending on
//! the phase angles, the bilinear score ranges from fully symmetric (all
//! angles 0) to fully antisymmetric (all angles pi/2).

use rand::distributions::Uniform;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// A complex vector stored as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVec {
    pub fn zeros(dim: usize) -> Self {
        ComplexVec {
            re: vec![0.0; dim],
            im: vec![0.0; dim],
        }
    }

    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Self {
        assert_eq!(re.len(), im.len(), "re and im must have the same length");
        ComplexVec { re, im }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.re.len()
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().chain(self.im.iter()).all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.re
            .iter()
            .chain(self.im.iter())
            .fold(0.0_f64, |m, &x| m.max(x.abs()))
    }
}

/// Unit-modulus diagonal phase matrix, stored as its angles.
///
/// Entry `k` of the matrix is `cos(theta_k) + i sin(theta_k)`, so
/// `|W(k,k)| = 1` holds by construction for every reachable value; the
/// constraint never needs projection or monitoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalPhase {
    pub theta: Vec<f64>,
}

impl DiagonalPhase {
    pub fn zeros(dim: usize) -> Self {
        DiagonalPhase { theta: vec![0.0; dim] }
    }

    pub fn new(theta: Vec<f64>) -> Self {
        DiagonalPhase { theta }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// `(cos, sin)` of angle `k`. The cosine leg is evaluated as
    /// `sin(pi/2 - theta)` so that a stored quarter-turn angle yields an
    /// exact 0 coefficient and a stored zero angle yields exactly (1, 0);
    /// the symmetry/antisymmetry identities then hold bit-for-bit.
    #[inline]
    pub fn cos_sin(&self, k: usize) -> (f64, f64) {
        let theta = self.theta[k];
        ((FRAC_PI_2 - theta).sin(), theta.sin())
    }
}

/// All trainable parameters: node and context vectors for the formation and
/// dissolution relations, plus one phase vector per relation.
///
/// One writer (the trainer) or many readers, never both at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingState {
    pub v_f: Vec<ComplexVec>,
    pub v_d: Vec<ComplexVec>,
    pub u_f: Vec<ComplexVec>,
    pub u_d: Vec<ComplexVec>,
    pub theta_f: DiagonalPhase,
    pub theta_d: DiagonalPhase,
    pub dim: usize,
    /// Seed the state was initialized from, recorded for the model file.
    pub seed: u64,
}

impl EmbeddingState {
    pub fn num_nodes(&self) -> usize {
        self.v_f.len()
    }

    /// Largest parameter magnitude across all six blocks.
    pub fn max_abs(&self) -> f64 {
        let vec_max = self
            .v_f
            .iter()
            .chain(&self.v_d)
            .chain(&self.u_f)
            .chain(&self.u_d)
            .fold(0.0_f64, |m, v| m.max(v.max_abs()));
        self.theta_f
            .theta
            .iter()
            .chain(&self.theta_d.theta)
            .fold(vec_max, |m, &x| m.max(x.abs()))
    }
}

/// The real Hermitian dot product of the phase-rotated left vector with the
/// right vector, `Re(conj(W vi)^T vj)`, for a diagonal unit-modulus `W`.
///
/// With `vi_k = a + ib` and `vj_k = c + id` this expands to
/// `sum_k cos(theta_k) (ac + bd) + sin(theta_k) (ad - bc)`: a symmetric
/// part scaled by the cosine and an antisymmetric part scaled by the sine.
/// Which side carries the rotation is a sign convention on the learned
/// angles; the conjugate-right form is this expression with `-theta`.
pub fn hermitian_score(vi: &ComplexVec, phase: &DiagonalPhase, vj: &ComplexVec) -> f64 {
    let d = vi.dim();
    assert_eq!(d, vj.dim(), "vector dimension mismatch");
    assert_eq!(d, phase.dim(), "phase dimension mismatch");
    let mut score = 0.0;
    for k in 0..d {
        let (cos, sin) = phase.cos_sin(k);
        let (a, b) = (vi.re[k], vi.im[k]);
        let (c, dd) = (vj.re[k], vj.im[k]);
        score += cos * (a * c + b * dd) + sin * (a * dd - b * c);
    }
    score
}

/// `Re(conj(vi)^T uc)`: the Skipgram context score. Equals
/// [`hermitian_score`] with every angle at zero.
pub fn context_score(vi: &ComplexVec, uc: &ComplexVec) -> f64 {
    let d = vi.dim();
    assert_eq!(d, uc.dim(), "vector dimension mismatch");
    let mut score = 0.0;
    for k in 0..d {
        score += vi.re[k] * uc.re[k] + vi.im[k] * uc.im[k];
    }
    score
}

/// Logistic sigmoid `1 / (1 + e^{-x})` in the branch-free stable form
/// `(1 + tanh(x/2)) / 2`; no overflow for any finite input.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    0.5 * (1.0 + (0.5 * x).tanh())
}

/// `log(sigmoid(x))` evaluated in log-sum-exp form; stays finite and
/// accurate deep into both tails.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Fresh state with vector entries i.i.d. uniform on `[-0.5/d, 0.5/d]` and
/// angles uniform on `[0, 2pi)`; deterministic given the seed.
///
/// The `1/(2d)` scale keeps initial scores around unit size so the sigmoids
/// start unsaturated.
pub fn init_state(num_nodes: usize, dim: usize, seed: u64) -> EmbeddingState {
    assert!(num_nodes >= 1, "need at least one node");
    assert!(dim >= 1, "embedding dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.5 / dim as f64;
    let entry = Uniform::new_inclusive(-half, half);
    let angle = Uniform::new(0.0, std::f64::consts::TAU);

    let block = |rng: &mut ChaCha8Rng| -> Vec<ComplexVec> {
        (0..num_nodes)
            .map(|_| {
                let re = (0..dim).map(|_| entry.sample(rng)).collect();
                let im = (0..dim).map(|_| entry.sample(rng)).collect();
                ComplexVec { re, im }
            })
            .collect()
    };

    let v_f = block(&mut rng);
    let v_d = block(&mut rng);
    let u_f = block(&mut rng);
    let u_d = block(&mut rng);
    let theta_f = DiagonalPhase::new((0..dim).map(|_| angle.sample(&mut rng)).collect());
    let theta_d = DiagonalPhase::new((0..dim).map(|_| angle.sample(&mut rng)).collect());
    EmbeddingState {
        v_f,
        v_d,
        u_f,
        u_d,
        theta_f,
        theta_d,
        dim,
        seed,
    }
}
