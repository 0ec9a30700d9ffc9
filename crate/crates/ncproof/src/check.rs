//! Per-system proof checking.
//!
//! PC and PCR compare expanded commutative polynomials. NFPC and OFPC
//! verify rules semantically through noncommutative identity testing;
//! OFPC additionally canonicalizes every line through the ordered-formula
//! recognition algorithm and checks products with the order-preserving
//! multiplication algorithm. F-PC is purely syntactic: inference rules
//! build exact trees, rewrite steps replace one addressed subtree.

use std::fmt;
use std::sync::Arc;

use crate::cpoly::CPoly;
use crate::error::ExpandError;
use crate::field::FieldSpec;
use crate::formula::{Formula, DEFAULT_EXPAND_CAP};
use crate::order::VarId;
use crate::ordered::{multiply_by_var, recognize, OrderedError, OrderedVerdict};
use crate::pit::{self, PitBackend};
use crate::proof::{
    Justification, Proof, ProofSystem, RewriteDir, RewriteRule,
};

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub expand_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            expand_cap: DEFAULT_EXPAND_CAP,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckLoc {
    Input(usize),
    Line(usize),
}

impl fmt::Display for CheckLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckLoc::Input(j) => write!(f, "input {j}"),
            CheckLoc::Line(i) => write!(f, "line {i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckFailure {
    pub loc: CheckLoc,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub accepted: bool,
    /// Accepted and the final line computes the constant 1.
    pub is_refutation: bool,
    pub failures: Vec<CheckFailure>,
    /// PC/PCR: total monomials over all lines. Others: total formula size.
    pub size: u64,
    /// Maximal degree of a line (PC/PCR only).
    pub degree: Option<u32>,
}

/// Checks a structurally valid proof; `Err` means the proof is malformed
/// (exit status 2 territory), `Ok` carries accept/reject with reasons.
pub fn check(proof: &Proof, opts: &CheckOptions) -> Result<CheckReport, String> {
    proof.validate()?;
    match proof.system {
        ProofSystem::PC | ProofSystem::PCR => Ok(check_commutative(proof, opts)),
        ProofSystem::NFPC => Ok(check_nfpc(proof, opts)),
        ProofSystem::OFPC => Ok(check_ofpc(proof, opts)),
        ProofSystem::FPC => Ok(check_fpc(proof)),
    }
}

fn cap_reason(e: &ExpandError) -> String {
    format!("rejected: {e}")
}

// ---------------------------------------------------------------------
// PC / PCR: semantic equality of expanded commutative polynomials
// ---------------------------------------------------------------------

fn expand_commutative(
    f: &Arc<Formula>,
    field: FieldSpec,
    cap: usize,
) -> Result<CPoly, ExpandError> {
    Ok(f.expand_capped(field, cap)?.erase_order())
}

fn pc_bool_axiom(field: FieldSpec, i: u32) -> CPoly {
    // x_i(1 - x_i) = x_i - x_i^2
    let x = CPoly::var(field, VarId::plain(i));
    x.sub(&x.mul(&x).unwrap()).unwrap()
}

fn pcr_barbool_axiom(field: FieldSpec, i: u32) -> CPoly {
    let x = CPoly::var(field, VarId::plain(i));
    let xb = CPoly::var(field, VarId::barred(i));
    x.mul(&xb).unwrap()
}

fn pcr_compl_axiom(field: FieldSpec, i: u32) -> CPoly {
    let x = CPoly::var(field, VarId::plain(i));
    let xb = CPoly::var(field, VarId::barred(i));
    x.add(&xb).unwrap().sub(&CPoly::one(field)).unwrap()
}

fn check_commutative(proof: &Proof, opts: &CheckOptions) -> CheckReport {
    let field = proof.field;
    let cap = opts.expand_cap;
    let mut failures = Vec::new();

    let mut input_polys: Vec<Option<CPoly>> = Vec::new();
    for (j, f) in proof.inputs.iter().enumerate() {
        match expand_commutative(f, field, cap) {
            Ok(p) => input_polys.push(Some(p)),
            Err(e) => {
                failures.push(CheckFailure {
                    loc: CheckLoc::Input(j + 1),
                    reason: cap_reason(&e),
                });
                input_polys.push(None);
            }
        }
    }

    let mut line_polys: Vec<Option<CPoly>> = Vec::new();
    for (i, line) in proof.lines.iter().enumerate() {
        match expand_commutative(&line.formula, field, cap) {
            Ok(p) => line_polys.push(Some(p)),
            Err(e) => {
                failures.push(CheckFailure {
                    loc: CheckLoc::Line(i + 1),
                    reason: cap_reason(&e),
                });
                line_polys.push(None);
            }
        }
    }

    for (i, line) in proof.lines.iter().enumerate() {
        let idx = i + 1;
        let Some(actual) = &line_polys[i] else {
            continue;
        };
        let mut fail = |reason: String| {
            failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason,
            })
        };
        let premise = |j: usize| -> Result<&CPoly, String> {
            line_polys[j - 1]
                .as_ref()
                .ok_or_else(|| format!("premise line {j} unavailable"))
        };
        let expected: Result<CPoly, String> = match &line.just {
            Justification::Input(j) => input_polys[j - 1]
                .clone()
                .ok_or_else(|| format!("input {j} unavailable")),
            Justification::BoolAxiom(v) => Ok(pc_bool_axiom(field, *v)),
            Justification::BarBoolAxiom(v) => Ok(pcr_barbool_axiom(field, *v)),
            Justification::ComplAxiom(v) => Ok(pcr_compl_axiom(field, *v)),
            Justification::Add { j, k, a, b } => premise(*j).and_then(|pj| {
                let pk = premise(*k)?;
                CPoly::linear_combination(pj, pk, a, b).map_err(|e| e.to_string())
            }),
            Justification::Mul { j, var } => premise(*j).and_then(|pj| {
                CPoly::var(field, *var).mul(pj).map_err(|e| e.to_string())
            }),
            _ => unreachable!("validated justifications"),
        };
        match expected {
            Ok(e) if &e == actual => {}
            Ok(_) => fail(format!("line does not match `{}`", line.just)),
            Err(msg) => fail(msg),
        }
    }

    let size = line_polys
        .iter()
        .flatten()
        .map(|p| p.num_terms() as u64)
        .sum();
    let degree = line_polys.iter().flatten().map(|p| p.degree()).max();
    let accepted = failures.is_empty();
    let is_refutation = accepted
        && line_polys
            .last()
            .and_then(|p| p.as_ref())
            .map(|p| *p == CPoly::one(field))
            .unwrap_or(false);
    CheckReport {
        accepted,
        is_refutation,
        failures,
        size,
        degree: Some(degree.unwrap_or(0)),
    }
}

// ---------------------------------------------------------------------
// NFPC: any formula per line, rules verified by PIT
// ---------------------------------------------------------------------

/// The Boolean axiom x_i·(1 − x_i) as a formula; also the exact tree of
/// the F-PC axiom.
pub fn bool_axiom_formula(field: FieldSpec, i: u32) -> Arc<Formula> {
    Formula::times(
        Formula::var(i),
        Formula::minus(field, Formula::int(field, 1), Formula::var(i)),
    )
}

/// The NFPC commutator axiom x_i·x_j − x_j·x_i.
pub fn comm_axiom_formula(field: FieldSpec, i: u32, j: u32) -> Arc<Formula> {
    Formula::minus(
        field,
        Formula::times(Formula::var(i), Formula::var(j)),
        Formula::times(Formula::var(j), Formula::var(i)),
    )
}

/// The exact F-PC addition tree a·F + b·G.
pub fn add_combination(
    field: FieldSpec,
    a: &crate::field::FieldElem,
    fj: &Arc<Formula>,
    b: &crate::field::FieldElem,
    fk: &Arc<Formula>,
) -> Arc<Formula> {
    let _ = field;
    Formula::plus(
        Formula::times(Formula::constant(a.clone()), Arc::clone(fj)),
        Formula::times(Formula::constant(b.clone()), Arc::clone(fk)),
    )
}

fn check_nfpc(proof: &Proof, opts: &CheckOptions) -> CheckReport {
    let field = proof.field;
    let cap = opts.expand_cap;
    let mut failures = Vec::new();

    for (i, line) in proof.lines.iter().enumerate() {
        let idx = i + 1;
        let expected: Arc<Formula> = match &line.just {
            Justification::Input(j) => Arc::clone(&proof.inputs[*j - 1]),
            Justification::BoolAxiom(v) => bool_axiom_formula(field, *v),
            Justification::CommAxiom(v, w) => comm_axiom_formula(field, *v, *w),
            Justification::Add { j, k, a, b } => add_combination(
                field,
                a,
                &proof.lines[*j - 1].formula,
                b,
                &proof.lines[*k - 1].formula,
            ),
            Justification::MulLeft { j, var } => Formula::times(
                Formula::var(*var),
                Arc::clone(&proof.lines[*j - 1].formula),
            ),
            Justification::MulRight { j, var } => Formula::times(
                Arc::clone(&proof.lines[*j - 1].formula),
                Formula::var(*var),
            ),
            Justification::Copy(j) => Arc::clone(&proof.lines[*j - 1].formula),
            _ => unreachable!("validated justifications"),
        };
        match pit::equal(&line.formula, &expected, field, PitBackend::Expand, cap) {
            Ok(true) => {}
            Ok(false) => failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason: format!("line does not compute `{}`", line.just),
            }),
            Err(e) => failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason: format!("rejected: {e}"),
            }),
        }
    }

    let size = proof.lines.iter().map(|l| l.formula.size()).sum();
    let accepted = failures.is_empty();
    let is_refutation = accepted && last_line_is_one(proof, cap);
    CheckReport {
        accepted,
        is_refutation,
        failures,
        size,
        degree: None,
    }
}

fn last_line_is_one(proof: &Proof, cap: usize) -> bool {
    let last = &proof.lines.last().expect("nonempty").formula;
    pit::equal(
        last,
        &Formula::int(proof.field, 1),
        proof.field,
        PitBackend::Expand,
        cap,
    )
    .unwrap_or(false)
}

// ---------------------------------------------------------------------
// OFPC: ordered lines, PIT-verified PC rules
// ---------------------------------------------------------------------

fn check_ofpc(proof: &Proof, opts: &CheckOptions) -> CheckReport {
    let field = proof.field;
    let ord = &proof.order;
    let cap = opts.expand_cap;
    let mut failures = Vec::new();

    // step 1: every formula must be an ordered formula
    for (j, f) in proof.inputs.iter().enumerate() {
        match recognize(f, field, ord, cap) {
            Ok(OrderedVerdict::Canonical(_)) => {}
            Ok(OrderedVerdict::NotOrdered(w)) => failures.push(CheckFailure {
                loc: CheckLoc::Input(j + 1),
                reason: format!(
                    "not an ordered formula: x{} ≻ x{} at gate {}",
                    w.left_var,
                    w.right_var,
                    crate::formula::path_to_string(&w.path)
                ),
            }),
            Err(e) => failures.push(CheckFailure {
                loc: CheckLoc::Input(j + 1),
                reason: format!("rejected: {e}"),
            }),
        }
    }
    let mut canons: Vec<Option<Arc<Formula>>> = Vec::new();
    for (i, line) in proof.lines.iter().enumerate() {
        match recognize(&line.formula, field, ord, cap) {
            Ok(OrderedVerdict::Canonical(g)) => canons.push(Some(g)),
            Ok(OrderedVerdict::NotOrdered(w)) => {
                failures.push(CheckFailure {
                    loc: CheckLoc::Line(i + 1),
                    reason: format!(
                        "not an ordered formula: x{} ≻ x{} at gate {}",
                        w.left_var,
                        w.right_var,
                        crate::formula::path_to_string(&w.path)
                    ),
                });
                canons.push(None);
            }
            Err(e) => {
                failures.push(CheckFailure {
                    loc: CheckLoc::Line(i + 1),
                    reason: format!("rejected: {e}"),
                });
                canons.push(None);
            }
        }
    }

    // step 3: rule verification through PIT
    for (i, line) in proof.lines.iter().enumerate() {
        let idx = i + 1;
        if canons[i].is_none() {
            continue;
        }
        let expected: Result<Arc<Formula>, String> = match &line.just {
            Justification::Input(j) => Ok(Arc::clone(&proof.inputs[*j - 1])),
            Justification::BoolAxiom(v) => Ok(bool_axiom_formula(field, *v)),
            Justification::Add { j, k, a, b } => Ok(add_combination(
                field,
                a,
                &proof.lines[*j - 1].formula,
                b,
                &proof.lines[*k - 1].formula,
            )),
            Justification::Mul { j, var } => match &canons[*j - 1] {
                None => Err(format!("premise line {j} rejected")),
                Some(canon) => multiply_by_var(canon, var.index, field, ord)
                    .map_err(|e: OrderedError| e.to_string()),
            },
            _ => unreachable!("validated justifications"),
        };
        match expected {
            Err(msg) => failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason: msg,
            }),
            Ok(expected) => {
                match pit::equal(&line.formula, &expected, field, PitBackend::Expand, cap) {
                    Ok(true) => {}
                    Ok(false) => failures.push(CheckFailure {
                        loc: CheckLoc::Line(idx),
                        reason: format!("line does not compute `{}`", line.just),
                    }),
                    Err(e) => failures.push(CheckFailure {
                        loc: CheckLoc::Line(idx),
                        reason: format!("rejected: {e}"),
                    }),
                }
            }
        }
    }

    let size = proof.lines.iter().map(|l| l.formula.size()).sum();
    let accepted = failures.is_empty();
    let is_refutation = accepted && last_line_is_one(proof, cap);
    CheckReport {
        accepted,
        is_refutation,
        failures,
        size,
        degree: None,
    }
}

// ---------------------------------------------------------------------
// F-PC: exact trees and rewrite rules
// ---------------------------------------------------------------------

fn check_fpc(proof: &Proof) -> CheckReport {
    let field = proof.field;
    let mut failures = Vec::new();

    for (i, line) in proof.lines.iter().enumerate() {
        let idx = i + 1;
        let ok: Result<bool, String> = match &line.just {
            Justification::Input(j) => Ok(line.formula == proof.inputs[*j - 1]),
            Justification::BoolAxiom(v) => Ok(line.formula == bool_axiom_formula(field, *v)),
            Justification::Add { j, k, a, b } => Ok(line.formula
                == add_combination(
                    field,
                    a,
                    &proof.lines[*j - 1].formula,
                    b,
                    &proof.lines[*k - 1].formula,
                )),
            Justification::Mul { j, var } => Ok(line.formula
                == Formula::times(
                    Formula::var(var.index),
                    Arc::clone(&proof.lines[*j - 1].formula),
                )),
            Justification::Rewrite { j, rule, path, dir } => {
                check_rewrite(&proof.lines[*j - 1].formula, &line.formula, *rule, path, *dir, field)
            }
            _ => unreachable!("validated justifications"),
        };
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason: format!("line is not the exact tree of `{}`", line.just),
            }),
            Err(msg) => failures.push(CheckFailure {
                loc: CheckLoc::Line(idx),
                reason: msg,
            }),
        }
    }

    let size = proof.lines.iter().map(|l| l.formula.size()).sum();
    let accepted = failures.is_empty();
    let is_refutation = accepted
        && *proof.lines.last().expect("nonempty").formula
            == Formula::Const(field.one());
    CheckReport {
        accepted,
        is_refutation,
        failures,
        size,
        degree: None,
    }
}

fn check_rewrite(
    premise: &Arc<Formula>,
    line: &Arc<Formula>,
    rule: RewriteRule,
    path: &[crate::formula::Dir],
    dir: RewriteDir,
    field: FieldSpec,
) -> Result<bool, String> {
    let sub_new = line
        .subtree(path)
        .ok_or_else(|| "rewrite path missing in line".to_string())?;
    let sub_old = premise
        .subtree(path)
        .ok_or_else(|| "rewrite path missing in premise".to_string())?;
    // the trees must agree outside the addressed subtree
    let grafted = premise
        .replace_subtree(path, Arc::new(sub_new.clone()))
        .expect("path was resolvable");
    if grafted != *line {
        return Ok(false);
    }
    let (lhs, rhs) = match dir {
        RewriteDir::Fwd => (sub_old, sub_new),
        RewriteDir::Bwd => (sub_new, sub_old),
    };
    Ok(rule_pattern(rule, lhs, rhs, field))
}

/// Matches lhs → rhs against the printed orientation of a rewrite rule.
fn rule_pattern(rule: RewriteRule, lhs: &Formula, rhs: &Formula, field: FieldSpec) -> bool {
    let zero = Formula::Const(field.zero());
    let one = Formula::Const(field.one());
    match rule {
        RewriteRule::Zero => match lhs {
            Formula::Times(c, _) => **c == zero && *rhs == zero,
            _ => false,
        },
        RewriteRule::Unit => match lhs {
            Formula::Times(c, f) => **c == one && rhs == f.as_ref(),
            _ => false,
        },
        RewriteRule::Scalar => match (lhs.eval_const(field), rhs) {
            (Some(alpha), Formula::Const(c)) => alpha == *c,
            _ => false,
        },
        RewriteRule::CommPlus => match (lhs, rhs) {
            (Formula::Plus(f, g), Formula::Plus(g2, f2)) => f == f2 && g == g2,
            _ => false,
        },
        RewriteRule::CommTimes => match (lhs, rhs) {
            (Formula::Times(f, g), Formula::Times(g2, f2)) => f == f2 && g == g2,
            _ => false,
        },
        RewriteRule::AssocPlus => match (lhs, rhs) {
            (Formula::Plus(f, gh), Formula::Plus(fg, h)) => match (gh.as_ref(), fg.as_ref()) {
                (Formula::Plus(g, h2), Formula::Plus(f2, g2)) => {
                    f == f2 && g == g2 && h2 == h
                }
                _ => false,
            },
            _ => false,
        },
        RewriteRule::AssocTimes => match (lhs, rhs) {
            (Formula::Times(f, gh), Formula::Times(fg, h)) => match (gh.as_ref(), fg.as_ref()) {
                (Formula::Times(g, h2), Formula::Times(f2, g2)) => {
                    f == f2 && g == g2 && h2 == h
                }
                _ => false,
            },
            _ => false,
        },
        RewriteRule::Dist => match (lhs, rhs) {
            (Formula::Times(f, gh), Formula::Plus(fg, fh)) => {
                match (gh.as_ref(), fg.as_ref(), fh.as_ref()) {
                    (Formula::Plus(g, h), Formula::Times(f2, g2), Formula::Times(f3, h2)) => {
                        f == f2 && f == f3 && g == g2 && h == h2
                    }
                    _ => false,
                }
            }
            _ => false,
        },
    }
}

// ---------------------------------------------------------------------
// 0/1 soundness sweep
// ---------------------------------------------------------------------

/// Exhaustively confirms over all 2^n Boolean points that every common
/// root of the inputs annihilates every proof line. Intended for small n.
pub fn soundness_sweep(proof: &Proof) -> Result<(), String> {
    let n = proof.nvars;
    assert!(n <= 24, "sweep is exponential in nvars");
    let field = proof.field;
    for bits in 0u64..(1 << n) {
        let assign = |i: u32| bits >> (i - 1) & 1 == 1;
        let on_inputs = proof
            .inputs
            .iter()
            .all(|f| f.eval_01(field, &assign).is_zero());
        if !on_inputs {
            continue;
        }
        for (i, line) in proof.lines.iter().enumerate() {
            if !line.formula.eval_01(field, &assign).is_zero() {
                return Err(format!(
                    "line {} does not vanish on common root {bits:b}",
                    i + 1
                ));
            }
        }
    }
    Ok(())
}

/// Searches all 2^n Boolean points for one where every polynomial in
/// `polys` vanishes. Returns the satisfying assignment if any.
pub fn find_common_root(polys: &[CPoly], nvars: u32) -> Option<Vec<bool>> {
    assert!(nvars <= 24, "sweep is exponential in nvars");
    for bits in 0u64..(1 << nvars) {
        let assign: Vec<bool> = (0..nvars).map(|i| bits >> i & 1 == 1).collect();
        let all_zero = polys.iter().all(|p| {
            p.eval(&|i| {
                if assign[i as usize - 1] {
                    p.field().one()
                } else {
                    p.field().zero()
                }
            })
            .is_zero()
        });
        if all_zero {
            return Some(assign);
        }
    }
    None
}
