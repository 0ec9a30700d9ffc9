//! Ordered polynomials and formulas: the syntactic-ordered predicate, the
//! recognition/canonicalization algorithm, and order-preserving
//! multiplication by a variable.

use std::sync::Arc;

use thiserror::Error;

use crate::cpoly::CPoly;
use crate::error::AlgebraError;
use crate::field::FieldSpec;
use crate::formula::{Dir, Formula, Path};
use crate::ncpoly::NCPoly;
use crate::order::{Order, VarId};
use crate::pit::{self, PitBackend, PitError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OrderedError {
    #[error("formula is not a syntactic ordered formula")]
    NotSyntacticOrdered,
    #[error("barred variable {0} has no place in an ordered formula")]
    BarredVariable(VarId),
    #[error(transparent)]
    Pit(#[from] PitError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of the recognition algorithm: either a syntactic ordered
/// formula of the same size computing the same polynomial, or a witness
/// that no such formula exists.
#[derive(Clone, Debug)]
pub enum OrderedVerdict {
    Canonical(Arc<Formula>),
    NotOrdered(OrderWitness),
}

/// A product gate whose left polynomial genuinely contains `left_var`
/// while its right polynomial genuinely contains `right_var`, with
/// `left_var ≻ right_var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub path: Path,
    pub left_var: u32,
    pub right_var: u32,
}

/// True iff every word of `p` is ≼-nondecreasing.
pub fn is_ordered_poly(p: &NCPoly, ord: &Order) -> bool {
    p.is_ordered(ord)
}

/// True iff at every product gate the variables syntactically occurring
/// on the left are ≼ those occurring on the right. Gates with a
/// variable-free side pass. Barred leaves disqualify the formula.
pub fn is_syntactic_ordered(f: &Formula, ord: &Order) -> bool {
    fn span(f: &Formula, ord: &Order) -> Option<(Option<(u32, u32)>, bool)> {
        // returns ((min position, max position) of syntactic vars, ok)
        match f {
            Formula::Var(v) => {
                if v.barred {
                    None
                } else {
                    let p = ord.position(v.index);
                    Some((Some((p, p)), true))
                }
            }
            Formula::Const(_) => Some((None, true)),
            Formula::Plus(a, b) | Formula::Times(a, b) => {
                let (sa, oka) = span(a, ord)?;
                let (sb, okb) = span(b, ord)?;
                if !(oka && okb) {
                    return Some((None, false));
                }
                if let Formula::Times(..) = f {
                    if let (Some((_, amax)), Some((bmin, _))) = (sa, sb) {
                        if amax > bmin {
                            return Some((None, false));
                        }
                    }
                }
                let merged = match (sa, sb) {
                    (None, s) | (s, None) => s,
                    (Some((lo1, hi1)), Some((lo2, hi2))) => {
                        Some((lo1.min(lo2), hi1.max(hi2)))
                    }
                };
                Some((merged, true))
            }
        }
    }
    matches!(span(f, ord), Some((_, true)))
}

/// Finds a product gate violating the ≼-split, together with the
/// extremal variable pair witnessing it.
fn find_violation(f: &Formula, ord: &Order, path: &mut Path) -> Option<(Path, u32, u32)> {
    match f {
        Formula::Var(_) | Formula::Const(_) => None,
        Formula::Plus(a, b) => {
            path.push(Dir::L);
            if let Some(hit) = find_violation(a, ord, path) {
                return Some(hit);
            }
            path.pop();
            path.push(Dir::R);
            let hit = find_violation(b, ord, path);
            path.pop();
            hit
        }
        Formula::Times(a, b) => {
            let left_max = a
                .syntactic_vars()
                .iter()
                .filter(|v| !v.barred)
                .map(|v| v.index)
                .max_by_key(|&i| ord.position(i));
            let right_min = b
                .syntactic_vars()
                .iter()
                .filter(|v| !v.barred)
                .map(|v| v.index)
                .min_by_key(|&i| ord.position(i));
            if let (Some(xi), Some(xj)) = (left_max, right_min) {
                if ord.position(xi) > ord.position(xj) {
                    return Some((path.clone(), xi, xj));
                }
            }
            path.push(Dir::L);
            if let Some(hit) = find_violation(a, ord, path) {
                return Some(hit);
            }
            path.pop();
            path.push(Dir::R);
            let hit = find_violation(b, ord, path);
            path.pop();
            hit
        }
    }
}

/// The recognition algorithm: repeatedly locate a violating product gate,
/// test by PIT whether the offending variable actually occurs in the
/// polynomial of its side, substitute 0 for variables that do not occur,
/// and reject once both variables genuinely occur. A `Canonical` result
/// has the same node count as the input and computes the same polynomial.
pub fn recognize(
    f: &Arc<Formula>,
    field: FieldSpec,
    ord: &Order,
    cap: usize,
) -> Result<OrderedVerdict, OrderedError> {
    if let Some(v) = f.syntactic_vars().iter().find(|v| v.barred) {
        return Err(OrderedError::BarredVariable(*v));
    }
    let mut cur = Arc::clone(f);
    loop {
        let hit = find_violation(&cur, ord, &mut Vec::new());
        let Some((path, xi, xj)) = hit else {
            return Ok(OrderedVerdict::Canonical(cur));
        };
        let gate = cur.subtree(&path).expect("violation path");
        let (f1, f2) = match gate {
            Formula::Times(a, b) => (Arc::clone(a), Arc::clone(b)),
            _ => unreachable!("violations sit at product gates"),
        };
        let f1_zeroed = f1.substitute_zero(VarId::plain(xi), field);
        if pit::equal(&f1, &f1_zeroed, field, PitBackend::Expand, cap)? {
            let mut left_path = path.clone();
            left_path.push(Dir::L);
            cur = cur.replace_subtree(&left_path, f1_zeroed).expect("path");
            continue;
        }
        let f2_zeroed = f2.substitute_zero(VarId::plain(xj), field);
        if pit::equal(&f2, &f2_zeroed, field, PitBackend::Expand, cap)? {
            let mut right_path = path.clone();
            right_path.push(Dir::R);
            cur = cur.replace_subtree(&right_path, f2_zeroed).expect("path");
            continue;
        }
        return Ok(OrderedVerdict::NotOrdered(OrderWitness {
            path,
            left_var: xi,
            right_var: xj,
        }));
    }
}

/// Order-preserving multiplication: given a syntactic ordered formula
/// computing ⟦f⟧, builds a syntactic ordered formula computing ⟦x_r·f⟧.
pub fn multiply_by_var(
    f: &Arc<Formula>,
    r: u32,
    field: FieldSpec,
    ord: &Order,
) -> Result<Arc<Formula>, OrderedError> {
    if let Some(v) = f.syntactic_vars().iter().find(|v| v.barred) {
        return Err(OrderedError::BarredVariable(*v));
    }
    if !is_syntactic_ordered(f, ord) {
        return Err(OrderedError::NotSyntacticOrdered);
    }
    Ok(multiply_rec(f, r, field, ord))
}

fn multiply_rec(f: &Arc<Formula>, r: u32, field: FieldSpec, ord: &Order) -> Arc<Formula> {
    let xr = Formula::var(r);
    match f.as_ref() {
        Formula::Const(_) => Formula::times(Arc::clone(f), xr),
        Formula::Var(v) => {
            // ties resolve to x_r on the left
            if ord.le(r, v.index) {
                Formula::times(xr, Arc::clone(f))
            } else {
                Formula::times(Arc::clone(f), xr)
            }
        }
        Formula::Plus(a, b) => Formula::plus(
            multiply_rec(a, r, field, ord),
            multiply_rec(b, r, field, ord),
        ),
        Formula::Times(a, b) => {
            let right_vars = b.syntactic_vars();
            let goes_left = right_vars.iter().all(|v| ord.le(r, v.index));
            if goes_left {
                Formula::times(multiply_rec(a, r, field, ord), Arc::clone(b))
            } else {
                Formula::times(Arc::clone(a), multiply_rec(b, r, field, ord))
            }
        }
    }
}

fn right_comb(letters: &[u32]) -> Arc<Formula> {
    let mut iter = letters.iter().rev();
    let last = *iter.next().expect("nonempty word");
    let mut acc = Formula::var(last);
    for &l in iter {
        acc = Formula::times(Formula::var(l), acc);
    }
    acc
}

/// Renders a commutative polynomial as a syntactic ordered sum of
/// monomials: each monomial becomes a coefficient head times the
/// right-comb ≼-sorted product of its letters.
pub fn ordered_sum_of_monomials(
    p: &CPoly,
    ord: &Order,
) -> Result<Arc<Formula>, AlgebraError> {
    let field = p.field();
    let mut sum: Option<Arc<Formula>> = None;
    for (m, c) in p.terms() {
        let word = m.sorted_word(ord)?;
        let term = if word.is_empty() {
            Formula::constant(c.clone())
        } else {
            let letters: Vec<u32> = word.0.iter().map(|v| v.index).collect();
            Formula::times(Formula::constant(c.clone()), right_comb(&letters))
        };
        sum = Some(match sum {
            None => term,
            Some(s) => Formula::plus(s, term),
        });
    }
    Ok(sum.unwrap_or_else(|| Formula::constant(field.zero())))
}

/// Renders `p` (which may contain barred variables) as a syntactic
/// ordered formula computing ⟦τ(p)⟧: per monomial, a product of factors
/// x_i and (1 − x_i) sorted by ≼, without expanding the τ image.
pub fn tau_ordered_formula(p: &CPoly, ord: &Order) -> Arc<Formula> {
    let field = p.field();
    let mut sum: Option<Arc<Formula>> = None;
    for (m, c) in p.terms() {
        let mut indices: Vec<(u32, bool)> = Vec::new();
        for (v, e) in m.factors() {
            for _ in 0..*e {
                indices.push((v.index, v.barred));
            }
        }
        indices.sort_by_key(|(i, _)| ord.position(*i));
        let term = if indices.is_empty() {
            Formula::constant(c.clone())
        } else {
            let factors: Vec<Arc<Formula>> = indices
                .iter()
                .map(|(i, barred)| {
                    if *barred {
                        Formula::minus(field, Formula::int(field, 1), Formula::var(*i))
                    } else {
                        Formula::var(*i)
                    }
                })
                .collect();
            let mut iter = factors.into_iter().rev();
            let mut acc = iter.next().expect("nonempty");
            for f in iter {
                acc = Formula::times(f, acc);
            }
            Formula::times(Formula::constant(c.clone()), acc)
        };
        sum = Some(match sum {
            None => term,
            Some(s) => Formula::plus(s, term),
        });
    }
    sum.unwrap_or_else(|| Formula::constant(field.zero()))
}
