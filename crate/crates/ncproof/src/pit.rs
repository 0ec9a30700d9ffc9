//! Identity testing for noncommutative formulas.
//!
//! The normative backend expands to canonical form and is unconditionally
//! correct (possibly exponential, guarded by the term cap). The
//! random-matrix backend evaluates at random d×d matrices over a large
//! prime field with d exceeding half the syntactic degree; a nonzero
//! polynomial of degree < 2d is not an identity of d×d matrices, so it
//! errs only on the nonzero side, with negligible probability. It is used
//! by tests and the CLI, never by the proof checkers.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::ExpandError;
use crate::field::{FieldElem, FieldSpec};
use crate::formula::Formula;
use crate::order::VarId;

/// 2^61 − 1, a Mersenne prime; large enough for any desk-scale degree.
pub const MATRIX_MODULUS: u64 = (1 << 61) - 1;

const MAX_MATRIX_DIM: u64 = 256;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PitBackend {
    /// Exact expansion, the backend the checkers rely on.
    Expand,
    /// Probabilistic evaluation at random matrices, seeded for
    /// reproducibility.
    RandomMatrix { seed: u64 },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PitError {
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error("matrix backend needs dimension {0} > {MAX_MATRIX_DIM}")]
    DegreeTooLarge(u64),
    #[error("matrix backend does not support {0}")]
    UnsupportedField(String),
}

/// True iff `f` computes the zero polynomial.
pub fn is_zero(
    f: &Arc<Formula>,
    field: FieldSpec,
    backend: PitBackend,
    cap: usize,
) -> Result<bool, PitError> {
    match backend {
        PitBackend::Expand => Ok(f.expand_capped(field, cap)?.is_zero()),
        PitBackend::RandomMatrix { seed } => matrix_is_zero(f, field, seed),
    }
}

/// True iff `f` and `g` compute the same noncommutative polynomial.
pub fn equal(
    f: &Arc<Formula>,
    g: &Arc<Formula>,
    field: FieldSpec,
    backend: PitBackend,
    cap: usize,
) -> Result<bool, PitError> {
    let diff = Formula::minus(field, Arc::clone(f), Arc::clone(g));
    is_zero(&diff, field, backend, cap)
}

// ---------------------------------------------------------------------
// Random-matrix evaluation over GF(2^61 - 1)
// ---------------------------------------------------------------------

fn mod_p(x: u128) -> u64 {
    (x % MATRIX_MODULUS as u128) as u64
}

#[derive(Clone, Debug)]
struct Mat {
    dim: usize,
    data: Vec<u64>,
}

impl Mat {
    fn scalar(dim: usize, c: u64) -> Mat {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c;
        }
        Mat { dim, data }
    }

    fn random(dim: usize, rng: &mut impl Rng) -> Mat {
        Mat {
            dim,
            data: (0..dim * dim)
                .map(|_| rng.gen_range(0..MATRIX_MODULUS))
                .collect(),
        }
    }

    fn add(&self, other: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| mod_p(*a as u128 + *b as u128))
                .collect(),
        }
    }

    fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut data = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let cur = data[i * d + j] as u128;
                    data[i * d + j] = mod_p(cur + a * other.data[k * d + j] as u128);
                }
            }
        }
        Mat { dim: d, data }
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

/// Maps a coefficient into GF(2^61 − 1). Rational coefficients reduce
/// numerator and denominator mod p; elements of a different prime field
/// are rejected.
fn to_mod_p(c: &FieldElem) -> Result<u64, PitError> {
    match c {
        FieldElem::Rat(r) => {
            let p = num_bigint::BigInt::from(MATRIX_MODULUS);
            let num = r.numer().mod_floor(&p).to_u64().expect("reduced mod p");
            let den = r.denom().mod_floor(&p).to_u64().expect("reduced mod p");
            if den == 0 {
                return Err(PitError::UnsupportedField(
                    "denominator divisible by matrix modulus".into(),
                ));
            }
            let inv = crate::field::pow_mod(den, MATRIX_MODULUS - 2, MATRIX_MODULUS);
            Ok(mod_p(num as u128 * inv as u128))
        }
        FieldElem::Fp { val, modulus } => {
            if *modulus == MATRIX_MODULUS {
                Ok(*val)
            } else {
                Err(PitError::UnsupportedField(format!(
                    "GF {modulus} (matrix backend needs Q or GF {MATRIX_MODULUS})"
                )))
            }
        }
    }
}

fn matrix_is_zero(f: &Arc<Formula>, field: FieldSpec, seed: u64) -> Result<bool, PitError> {
    if let FieldSpec::Prime(p) = field {
        if p != MATRIX_MODULUS {
            return Err(PitError::UnsupportedField(format!("GF {p}")));
        }
    }
    let deg = f.syntactic_degree();
    let dim64 = deg / 2 + 1;
    if dim64 > MAX_MATRIX_DIM {
        return Err(PitError::DegreeTooLarge(dim64));
    }
    let dim = dim64 as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment: HashMap<VarId, Mat> = HashMap::new();
    for v in f.syntactic_vars() {
        assignment.insert(v, Mat::random(dim, &mut rng));
    }
    let result = eval_mat(f, dim, &assignment)?;
    Ok(result.is_zero())
}

fn eval_mat(f: &Formula, dim: usize, assignment: &HashMap<VarId, Mat>) -> Result<Mat, PitError> {
    match f {
        Formula::Var(v) => Ok(assignment[v].clone()),
        Formula::Const(c) => Ok(Mat::scalar(dim, to_mod_p(c)?)),
        Formula::Plus(a, b) => Ok(eval_mat(a, dim, assignment)?.add(&eval_mat(b, dim, assignment)?)),
        Formula::Times(a, b) => Ok(eval_mat(a, dim, assignment)?.mul(&eval_mat(b, dim, assignment)?)),
    }
}
