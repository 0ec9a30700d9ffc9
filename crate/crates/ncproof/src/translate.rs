//! Executable proof translations: PCR → OFPC via the τ substitution and
//! the barred-product gadget, and F-PC → NFPC where the polynomial-ring
//! rewrites are free and commutations expand into commutator derivations
//! substituted in context.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::check::{check, CheckOptions};
use crate::cpoly::{tau_substitute, CPoly};
use crate::error::ExpandError;
use crate::field::{FieldElem, FieldSpec};
use crate::formula::Formula;
use crate::order::VarId;
use crate::ordered::tau_ordered_formula;
use crate::proof::{
    Justification, Proof, ProofLine, ProofSystem, RewriteRule,
};

/// Fixed constant of the size law `size_out ≤ C·n·size_in` for the
/// PCR → OFPC translation.
pub const PCR_TO_OFPC_SIZE_CONSTANT: u64 = 32;

#[derive(Error, Debug, Clone)]
pub enum TranslateError {
    #[error("source proof rejected: {0}")]
    SourceRejected(String),
    #[error("source proof is a {0} proof, expected {1}")]
    WrongSystem(ProofSystem, ProofSystem),
    #[error("commutator operands must compute non-constant polynomials")]
    ConstantOperand,
    #[error("context error: {0}")]
    BadContext(String),
    #[error("the final line vanishes under τ; nothing to translate")]
    VanishingTheorem,
    #[error(transparent)]
    Expand(#[from] ExpandError),
}

#[derive(Clone, Debug)]
pub struct TranslationReport {
    pub output: Proof,
    pub size_in: u64,
    pub size_out: u64,
    /// Output size attributed to each source line, as a multiple of that
    /// line's own size contribution.
    pub per_line_expansion: Vec<f64>,
}

// ---------------------------------------------------------------------
// NFPC fragment builder
// ---------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

struct NfpcBuilder {
    field: FieldSpec,
    inputs: Vec<Arc<Formula>>,
    lines: Vec<ProofLine>,
    cap: usize,
    comm_memo: HashMap<(Arc<Formula>, Arc<Formula>), usize>,
}

impl NfpcBuilder {
    fn new(field: FieldSpec, inputs: Vec<Arc<Formula>>, cap: usize) -> NfpcBuilder {
        NfpcBuilder {
            field,
            inputs,
            lines: Vec::new(),
            cap,
            comm_memo: HashMap::new(),
        }
    }

    fn push(&mut self, formula: Arc<Formula>, just: Justification) -> usize {
        self.lines.push(ProofLine { formula, just });
        self.lines.len()
    }

    fn formula(&self, idx: usize) -> &Arc<Formula> {
        &self.lines[idx - 1].formula
    }

    fn is_constant(&self, f: &Arc<Formula>) -> Result<Option<FieldElem>, TranslateError> {
        let p = f.expand_capped(self.field, self.cap)?;
        Ok(p.is_constant().then(|| p.coeff(&crate::ncpoly::Word::unit())))
    }

    /// Derives line_p·b (or b·line_p) by structural recursion on `b`.
    /// The final emitted line carries `out` when given, otherwise the
    /// natural product tree.
    fn mul_by_formula(
        &mut self,
        p: usize,
        b: &Arc<Formula>,
        side: Side,
        out: Option<Arc<Formula>>,
    ) -> usize {
        let natural = |builder: &Self, b: &Arc<Formula>| match side {
            Side::Right => Formula::times(Arc::clone(builder.formula(p)), Arc::clone(b)),
            Side::Left => Formula::times(Arc::clone(b), Arc::clone(builder.formula(p))),
        };
        match b.as_ref() {
            Formula::Var(v) => {
                let formula = out.unwrap_or_else(|| natural(self, b));
                let just = match side {
                    Side::Right => Justification::MulRight { j: p, var: v.index },
                    Side::Left => Justification::MulLeft { j: p, var: v.index },
                };
                self.push(formula, just)
            }
            Formula::Const(c) => {
                let formula = out.unwrap_or_else(|| natural(self, b));
                // constants commute with everything: p·c = c·p
                self.push(
                    formula,
                    Justification::Add {
                        j: p,
                        k: p,
                        a: c.clone(),
                        b: self.field.zero(),
                    },
                )
            }
            Formula::Plus(b1, b2) => {
                let m1 = self.mul_by_formula(p, b1, side, None);
                let m2 = self.mul_by_formula(p, b2, side, None);
                let formula = out.unwrap_or_else(|| natural(self, b));
                self.push(
                    formula,
                    Justification::Add {
                        j: m1,
                        k: m2,
                        a: self.field.one(),
                        b: self.field.one(),
                    },
                )
            }
            Formula::Times(b1, b2) => {
                // p·(b1·b2) = (p·b1)·b2 and (b1·b2)·p = b1·(b2·p)
                let (first, second) = match side {
                    Side::Right => (b1, b2),
                    Side::Left => (b2, b1),
                };
                let m1 = self.mul_by_formula(p, first, side, None);
                let formula = out.unwrap_or_else(|| natural(self, b));
                self.mul_by_formula(m1, second, side, Some(formula))
            }
        }
    }

    /// The canonical commutator formula f·g − g·f.
    fn comm_target(&self, f: &Arc<Formula>, g: &Arc<Formula>) -> Arc<Formula> {
        Formula::minus(
            self.field,
            Formula::times(Arc::clone(f), Arc::clone(g)),
            Formula::times(Arc::clone(g), Arc::clone(f)),
        )
    }

    /// Emits a derivation of f·g − g·f for non-constant f and g, by
    /// recursion on |f|+|g|. Fragments for repeated operand pairs are
    /// reused.
    fn commutator(
        &mut self,
        f: &Arc<Formula>,
        g: &Arc<Formula>,
    ) -> Result<usize, TranslateError> {
        if let Some(&idx) = self.comm_memo.get(&(Arc::clone(f), Arc::clone(g))) {
            return Ok(idx);
        }
        let target = self.comm_target(f, g);
        let one = self.field.one();
        let idx = if f.size() == 1 && g.size() == 1 {
            // non-constant leaves are variables
            let (Formula::Var(vf), Formula::Var(vg)) = (f.as_ref(), g.as_ref()) else {
                return Err(TranslateError::ConstantOperand);
            };
            if vf.index == vg.index {
                // x·x − x·x = 0: cancel any axiom against itself
                let ax = self.push(
                    crate::check::bool_axiom_formula(self.field, vf.index),
                    Justification::BoolAxiom(vf.index),
                );
                self.push(
                    target,
                    Justification::Add {
                        j: ax,
                        k: ax,
                        a: one.clone(),
                        b: one.neg(),
                    },
                )
            } else {
                self.push(target, Justification::CommAxiom(vf.index, vg.index))
            }
        } else if f.size() == 1 {
            // swap the recursion and negate
            let swapped = self.commutator(g, f)?;
            self.push(
                target,
                Justification::Add {
                    j: swapped,
                    k: swapped,
                    a: one.neg(),
                    b: self.field.zero(),
                },
            )
        } else {
            match f.as_ref() {
                Formula::Plus(f1, f2) => {
                    // fg − gf = (f1·g − g·f1) + (f2·g − g·f2); a constant
                    // summand contributes zero
                    let c1 = match self.is_constant(f1)? {
                        Some(_) => None,
                        None => Some(self.commutator(f1, g)?),
                    };
                    let c2 = match self.is_constant(f2)? {
                        Some(_) => None,
                        None => Some(self.commutator(f2, g)?),
                    };
                    match (c1, c2) {
                        (Some(a), Some(b)) => self.push(
                            target,
                            Justification::Add {
                                j: a,
                                k: b,
                                a: one.clone(),
                                b: one.clone(),
                            },
                        ),
                        (Some(a), None) | (None, Some(a)) => {
                            self.push(target, Justification::Copy(a))
                        }
                        (None, None) => return Err(TranslateError::ConstantOperand),
                    }
                }
                Formula::Times(f1, f2) => {
                    match (self.is_constant(f1)?, self.is_constant(f2)?) {
                        (Some(c), None) => {
                            // (c·f2)·g − g·(c·f2) = c·(f2·g − g·f2)
                            let d = self.commutator(f2, g)?;
                            self.push(
                                target,
                                Justification::Add {
                                    j: d,
                                    k: d,
                                    a: c,
                                    b: self.field.zero(),
                                },
                            )
                        }
                        (None, Some(c)) => {
                            let d = self.commutator(f1, g)?;
                            self.push(
                                target,
                                Justification::Add {
                                    j: d,
                                    k: d,
                                    a: c,
                                    b: self.field.zero(),
                                },
                            )
                        }
                        (None, None) => {
                            // fg − f1·g·f2 from f1·(f2g − gf2),
                            // f1·g·f2 − gf from (f1g − gf1)·f2
                            let c2 = self.commutator(f2, g)?;
                            let e = self.mul_by_formula(c2, f1, Side::Left, None);
                            let c1 = self.commutator(f1, g)?;
                            let r = self.mul_by_formula(c1, f2, Side::Right, None);
                            self.push(
                                target,
                                Justification::Add {
                                    j: e,
                                    k: r,
                                    a: one.clone(),
                                    b: one.clone(),
                                },
                            )
                        }
                        (Some(_), Some(_)) => return Err(TranslateError::ConstantOperand),
                    }
                }
                _ => unreachable!("size > 1 is a gate"),
            }
        };
        self.comm_memo
            .insert((Arc::clone(f), Arc::clone(g)), idx);
        Ok(idx)
    }

    /// From a line proving h − h2, derives A[h/z] − A[h2/z] by structural
    /// induction on the context. Plus contexts are free, product contexts
    /// multiply the inductive line by the sibling subformula.
    fn substitute_ctx(
        &mut self,
        a: &Arc<Formula>,
        z: VarId,
        h: &Arc<Formula>,
        h2: &Arc<Formula>,
        given: usize,
    ) -> usize {
        match a.as_ref() {
            Formula::Var(v) if *v == z => given,
            Formula::Plus(a1, a2) => {
                let (inner, _sibling) = if a1.count_var(z) == 1 {
                    (a1, a2)
                } else {
                    (a2, a1)
                };
                let l = self.substitute_ctx(inner, z, h, h2, given);
                let formula = Formula::minus(
                    self.field,
                    a.substitute_leaf(z, h),
                    a.substitute_leaf(z, h2),
                );
                self.push(formula, Justification::Copy(l))
            }
            Formula::Times(a1, a2) => {
                let formula = Formula::minus(
                    self.field,
                    a.substitute_leaf(z, h),
                    a.substitute_leaf(z, h2),
                );
                if a1.count_var(z) == 1 {
                    let l = self.substitute_ctx(a1, z, h, h2, given);
                    self.mul_by_formula(l, a2, Side::Right, Some(formula))
                } else {
                    let l = self.substitute_ctx(a2, z, h, h2, given);
                    self.mul_by_formula(l, a1, Side::Left, Some(formula))
                }
            }
            _ => unreachable!("z occurs exactly once in the context"),
        }
    }
}

/// Builds an NFPC derivation of the formula f·g − g·f from axioms alone
/// (Boolean and commutator axioms). Both operands must compute
/// non-constant polynomials.
pub fn commutator_proof(
    f: &Arc<Formula>,
    g: &Arc<Formula>,
    field: FieldSpec,
    cap: usize,
) -> Result<Proof, TranslateError> {
    for side in [f, g] {
        if side.has_barred() {
            return Err(TranslateError::BadContext(
                "barred variables not allowed".into(),
            ));
        }
    }
    let mut b = NfpcBuilder::new(field, Vec::new(), cap);
    if b.is_constant(f)?.is_some() || b.is_constant(g)?.is_some() {
        return Err(TranslateError::ConstantOperand);
    }
    b.commutator(f, g)?;
    let nvars = f.max_var_index().max(g.max_var_index());
    Ok(Proof {
        system: ProofSystem::NFPC,
        field,
        nvars,
        order: Default::default(),
        inputs: b.inputs,
        lines: b.lines,
    })
}

/// Builds an NFPC derivation of A[h/z] − A[h2/z] from the single input
/// h − h2. `z` must occur exactly once in `a`.
pub fn substitute_in_context(
    a: &Arc<Formula>,
    z: VarId,
    h: &Arc<Formula>,
    h2: &Arc<Formula>,
    field: FieldSpec,
    cap: usize,
) -> Result<Proof, TranslateError> {
    match a.count_var(z) {
        0 => return Err(TranslateError::BadContext(format!("{z} absent from context"))),
        1 => {}
        n => {
            return Err(TranslateError::BadContext(format!(
                "{z} occurs {n} times in context"
            )))
        }
    }
    if z.barred || a.has_barred() || h.has_barred() || h2.has_barred() {
        return Err(TranslateError::BadContext(
            "barred variables not allowed".into(),
        ));
    }
    let given_formula = Formula::minus(field, Arc::clone(h), Arc::clone(h2));
    let mut b = NfpcBuilder::new(field, vec![Arc::clone(&given_formula)], cap);
    let given = b.push(given_formula, Justification::Input(1));
    let last = b.substitute_ctx(a, z, h, h2, given);
    // the base context returns the input line; restate the target then
    let target = Formula::minus(field, a.substitute_leaf(z, h), a.substitute_leaf(z, h2));
    if b.formula(last) != &target {
        b.push(target, Justification::Copy(last));
    }
    let nvars = [a, h, h2]
        .iter()
        .map(|f| f.max_var_index())
        .max()
        .unwrap_or(0);
    Ok(Proof {
        system: ProofSystem::NFPC,
        field,
        nvars,
        order: Default::default(),
        inputs: b.inputs,
        lines: b.lines,
    })
}

/// Translates an accepted F-PC proof into an NFPC proof line by line:
/// additions and products map one-to-one, polynomial-ring rewrites
/// become restatements of their premise, and product commutations expand
/// into commutator fragments substituted in context.
pub fn fpc_to_nfpc(
    proof: &Proof,
    opts: &CheckOptions,
) -> Result<TranslationReport, TranslateError> {
    if proof.system != ProofSystem::FPC {
        return Err(TranslateError::WrongSystem(proof.system, ProofSystem::FPC));
    }
    let report = check(proof, opts).map_err(TranslateError::SourceRejected)?;
    if !report.accepted {
        return Err(TranslateError::SourceRejected(format!(
            "{} failures, first: {} {}",
            report.failures.len(),
            report.failures[0].loc,
            report.failures[0].reason
        )));
    }

    let field = proof.field;
    let mut b = NfpcBuilder::new(field, proof.inputs.clone(), opts.expand_cap);
    let mut map: Vec<usize> = Vec::with_capacity(proof.lines.len());
    let mut per_line = Vec::with_capacity(proof.lines.len());
    let z = VarId::plain(proof.nvars + 1);

    for line in &proof.lines {
        let before = b.lines.iter().map(|l| l.formula.size()).sum::<u64>();
        let formula = Arc::clone(&line.formula);
        let new_idx = match &line.just {
            Justification::Input(j) => b.push(formula, Justification::Input(*j)),
            Justification::BoolAxiom(v) => b.push(formula, Justification::BoolAxiom(*v)),
            Justification::Add { j, k, a: ca, b: cb } => {
                let (j, k) = (map[*j - 1], map[*k - 1]);
                b.push(
                    formula,
                    Justification::Add {
                        j,
                        k,
                        a: ca.clone(),
                        b: cb.clone(),
                    },
                )
            }
            Justification::Mul { j, var } => b.push(
                formula,
                Justification::MulLeft {
                    j: map[*j - 1],
                    var: var.index,
                },
            ),
            Justification::Rewrite { j, rule, path, .. } => {
                let prem = &proof.lines[*j - 1].formula;
                let prem_idx = map[*j - 1];
                if *rule != RewriteRule::CommTimes {
                    // associativity, distributivity, zero, unit, scalar
                    // and comm+ do not change the computed polynomial
                    b.push(formula, Justification::Copy(prem_idx))
                } else {
                    let Some(Formula::Times(f, g)) = prem.subtree(path) else {
                        unreachable!("checker verified the rewrite site");
                    };
                    let (f, g) = (Arc::clone(f), Arc::clone(g));
                    if b.is_constant(&f)?.is_some() || b.is_constant(&g)?.is_some() {
                        // a constant factor commutes outright
                        b.push(formula, Justification::Copy(prem_idx))
                    } else {
                        let comm = b.commutator(&f, &g)?;
                        let h = Formula::times(Arc::clone(&f), Arc::clone(&g));
                        let h2 = Formula::times(g, f);
                        let ctx = prem
                            .replace_subtree(path, Arc::new(Formula::Var(z)))
                            .expect("checked path");
                        let diff = b.substitute_ctx(&ctx, z, &h, &h2, comm);
                        // p_i = p_j − (A[fg/z] − A[gf/z])
                        b.push(
                            formula,
                            Justification::Add {
                                j: prem_idx,
                                k: diff,
                                a: field.one(),
                                b: field.from_i64(-1),
                            },
                        )
                    }
                }
            }
            _ => unreachable!("validated F-PC justifications"),
        };
        map.push(new_idx);
        let after = b.lines.iter().map(|l| l.formula.size()).sum::<u64>();
        per_line.push((after - before) as f64 / line.formula.size() as f64);
    }

    let output = Proof {
        system: ProofSystem::NFPC,
        field,
        nvars: proof.nvars,
        order: proof.order.clone(),
        inputs: b.inputs,
        lines: b.lines,
    };
    let size_out = output.lines.iter().map(|l| l.formula.size()).sum();
    Ok(TranslationReport {
        output,
        size_in: report.size,
        size_out,
        per_line_expansion: per_line,
    })
}

/// Translates an accepted PCR proof into an OFPC proof of the τ-image:
/// barred products expand into the product/addition gadget, τ-vanishing
/// lines are dropped, and every surviving line is rendered as an ordered
/// sum of factored monomial products.
pub fn pcr_to_ofpc(
    proof: &Proof,
    opts: &CheckOptions,
) -> Result<TranslationReport, TranslateError> {
    if proof.system != ProofSystem::PCR {
        return Err(TranslateError::WrongSystem(proof.system, ProofSystem::PCR));
    }
    let report = check(proof, opts).map_err(TranslateError::SourceRejected)?;
    if !report.accepted {
        return Err(TranslateError::SourceRejected(format!(
            "{} failures, first: {} {}",
            report.failures.len(),
            report.failures[0].loc,
            report.failures[0].reason
        )));
    }

    let field = proof.field;
    let ord = &proof.order;
    let cap = opts.expand_cap;

    let cpoly_of = |f: &Arc<Formula>| -> Result<CPoly, TranslateError> {
        Ok(f.expand_capped(field, cap)?.erase_order())
    };

    let inputs: Vec<Arc<Formula>> = proof
        .inputs
        .iter()
        .map(|f| Ok(tau_ordered_formula(&tau_substitute(&cpoly_of(f)?), ord)))
        .collect::<Result<_, TranslateError>>()?;

    let mut lines: Vec<ProofLine> = Vec::new();
    // source line -> output line (None when the τ-image vanished)
    let mut map: Vec<Option<usize>> = Vec::with_capacity(proof.lines.len());
    let mut per_line = Vec::with_capacity(proof.lines.len());

    for line in &proof.lines {
        let before: u64 = lines.iter().map(|l| l.formula.size()).sum();
        let src_poly = cpoly_of(&line.formula)?;
        let tau_poly = tau_substitute(&src_poly);
        if tau_poly.is_zero() {
            map.push(None);
            per_line.push(0.0);
            continue;
        }
        let rendered = tau_ordered_formula(&src_poly, ord);

        let just = match &line.just {
            Justification::Input(j) => Some(Justification::Input(*j)),
            Justification::BoolAxiom(v) => Some(Justification::BoolAxiom(*v)),
            // x_i·x̄_i maps to the Boolean axiom x_i(1 − x_i)
            Justification::BarBoolAxiom(v) => Some(Justification::BoolAxiom(*v)),
            Justification::ComplAxiom(_) => unreachable!("τ-image vanished above"),
            Justification::Add { j, k, a, b } => match (map[*j - 1], map[*k - 1]) {
                (Some(j2), Some(k2)) => Some(Justification::Add {
                    j: j2,
                    k: k2,
                    a: a.clone(),
                    b: b.clone(),
                }),
                (Some(j2), None) => Some(Justification::Add {
                    j: j2,
                    k: j2,
                    a: a.clone(),
                    b: field.zero(),
                }),
                (None, Some(k2)) => Some(Justification::Add {
                    j: k2,
                    k: k2,
                    a: b.clone(),
                    b: field.zero(),
                }),
                (None, None) => unreachable!("sum of vanished lines vanishes"),
            },
            Justification::Mul { j, var } => {
                let j2 = map[*j - 1].expect("product of a vanished line vanishes");
                if !var.barred {
                    Some(Justification::Mul {
                        j: j2,
                        var: *var,
                    })
                } else {
                    // gadget: derive x_i·p, then (1 − x_i)·p = p − x_i·p
                    let src_prem = cpoly_of(&proof.lines[*j - 1].formula)?;
                    let xi = CPoly::var(field, VarId::plain(var.index));
                    let mid_poly = xi.mul(&src_prem).expect("same field");
                    let mid_formula = tau_ordered_formula(&mid_poly, ord);
                    lines.push(ProofLine {
                        formula: mid_formula,
                        just: Justification::Mul {
                            j: j2,
                            var: VarId::plain(var.index),
                        },
                    });
                    let mid = lines.len();
                    Some(Justification::Add {
                        j: j2,
                        k: mid,
                        a: field.one(),
                        b: field.from_i64(-1),
                    })
                }
            }
            _ => unreachable!("validated PCR justifications"),
        };
        if let Some(just) = just {
            lines.push(ProofLine {
                formula: rendered,
                just,
            });
            map.push(Some(lines.len()));
        }
        let after: u64 = lines.iter().map(|l| l.formula.size()).sum();
        per_line.push((after - before) as f64 / (src_poly.num_terms().max(1)) as f64);
    }

    if map.last().map(|m| m.is_none()).unwrap_or(true) {
        return Err(TranslateError::VanishingTheorem);
    }

    let output = Proof {
        system: ProofSystem::OFPC,
        field,
        nvars: proof.nvars,
        order: proof.order.clone(),
        inputs,
        lines,
    };
    let size_out = output.lines.iter().map(|l| l.formula.size()).sum();
    Ok(TranslationReport {
        output,
        size_in: report.size,
        size_out,
        per_line_expansion: per_line,
    })
}

impl TranslationReport {
    /// Whether `size_out ≤ C·n·size_in` holds for the fixed constant.
    pub fn satisfies_size_law(&self, nvars: u32) -> bool {
        self.size_out <= PCR_TO_OFPC_SIZE_CONSTANT * nvars as u64 * self.size_in
    }
}
