//! Shared harness: seeded generators for formulas and ordered formulas,
//! an independent row-reduction rank oracle, and tree-path utilities.
#![allow(dead_code)] // each test binary uses its own subset

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ncproof::field::{FieldElem, FieldSpec};
use ncproof::formula::{Dir, Formula, Path};
use ncproof::rank::NisanMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula with at most `leaves` leaves (so at most 2·leaves − 1
/// nodes), variables drawn from 1..=nvars.
pub fn random_formula(
    r: &mut ChaCha8Rng,
    nvars: u32,
    leaves: u32,
    field: FieldSpec,
) -> Arc<Formula> {
    if leaves <= 1 || r.gen_bool(0.2) {
        if r.gen_bool(0.75) {
            Formula::var(r.gen_range(1..=nvars))
        } else {
            Formula::int(field, r.gen_range(-3..=3))
        }
    } else {
        let left = r.gen_range(1..leaves);
        let a = random_formula(r, nvars, left, field);
        let b = random_formula(r, nvars, leaves - left, field);
        if r.gen_bool(0.5) {
            Formula::plus(a, b)
        } else {
            Formula::times(a, b)
        }
    }
}

/// Random formula computing a non-constant polynomial.
pub fn random_nonconstant(
    r: &mut ChaCha8Rng,
    nvars: u32,
    leaves: u32,
    field: FieldSpec,
) -> Arc<Formula> {
    loop {
        let f = random_formula(r, nvars, leaves, field);
        if let Ok(p) = f.expand(field) {
            if !p.is_constant() {
                return f;
            }
        }
    }
}

/// Random syntactic ordered formula (default order) whose variables lie
/// in lo..=hi: product gates split the variable range at a pivot.
pub fn random_ordered(
    r: &mut ChaCha8Rng,
    lo: u32,
    hi: u32,
    leaves: u32,
    field: FieldSpec,
) -> Arc<Formula> {
    if leaves <= 1 || r.gen_bool(0.2) {
        if r.gen_bool(0.8) {
            Formula::var(r.gen_range(lo..=hi))
        } else {
            Formula::int(field, r.gen_range(-2..=3))
        }
    } else {
        let left = r.gen_range(1..leaves);
        if r.gen_bool(0.5) {
            let a = random_ordered(r, lo, hi, left, field);
            let b = random_ordered(r, lo, hi, leaves - left, field);
            Formula::plus(a, b)
        } else {
            let mid = r.gen_range(lo..=hi);
            let a = random_ordered(r, lo, mid, left, field);
            let b = random_ordered(r, mid, hi, leaves - left, field);
            Formula::times(a, b)
        }
    }
}

/// Splices a genuinely unordered product into an ordered formula: the
/// sum gains a word x_j·x_i with j ≻ i that nothing can cancel.
pub fn inject_violation(
    r: &mut ChaCha8Rng,
    ordered: Arc<Formula>,
    hi: u32,
    field: FieldSpec,
) -> Arc<Formula> {
    let j = r.gen_range(2..=hi);
    let i = r.gen_range(1..j);
    let coeff = *[1i64, 2, -1].choose(r).unwrap();
    let bad = Formula::times(
        Formula::int(field, coeff),
        Formula::times(Formula::var(j), Formula::var(i)),
    );
    if r.gen_bool(0.5) {
        Formula::plus(ordered, bad)
    } else {
        Formula::plus(bad, ordered)
    }
}

/// Paths to every constant leaf.
pub fn const_paths(f: &Formula) -> Vec<Path> {
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut |node, path| {
        if matches!(node, Formula::Const(_)) {
            out.push(path.to_vec());
        }
    });
    out
}

/// Paths to every product gate.
pub fn times_paths(f: &Formula) -> Vec<Path> {
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut |node, path| {
        if matches!(node, Formula::Times(..)) {
            out.push(path.to_vec());
        }
    });
    out
}

fn walk(f: &Formula, path: &mut Path, visit: &mut impl FnMut(&Formula, &[Dir])) {
    visit(f, path);
    match f {
        Formula::Plus(a, b) | Formula::Times(a, b) => {
            path.push(Dir::L);
            walk(a, path, visit);
            path.pop();
            path.push(Dir::R);
            walk(b, path, visit);
            path.pop();
        }
        _ => {}
    }
}

/// Textbook Gaussian elimination over the rationals; deliberately
/// independent of the library's Bareiss-with-preprocessing pipeline.
pub fn naive_rational_rank(matrix: &NisanMatrix) -> u64 {
    let mut rows: Vec<Vec<BigRational>> = (0..matrix.nrows())
        .map(|i| {
            (0..matrix.ncols())
                .map(|j| match matrix.entry(i, j) {
                    FieldElem::Rat(r) => r,
                    other => panic!("rational oracle got {other:?}"),
                })
                .collect()
        })
        .collect();
    let nr = rows.len();
    if nr == 0 {
        return 0;
    }
    let nc = rows[0].len();
    let mut rank = 0u64;
    let mut top = 0usize;
    for col in 0..nc {
        let Some(pivot) = (top..nr).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(top, pivot);
        for r in top + 1..nr {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &rows[top][col];
            for c in col..nc {
                let sub = &rows[top][c] * &factor;
                rows[r][c] = &rows[r][c] - sub;
            }
        }
        rank += 1;
        top += 1;
        if top == nr {
            break;
        }
    }
    rank
}
