//! Acceptance suite. Each test covers one numbered criterion and prints
//! one `criterion N: PASS` line with the measured quantities (visible
//! under `cargo test -- --nocapture`).

mod common;

use std::sync::Arc;
use std::time::Instant;

use rand::Rng as _;
use rand::seq::SliceRandom as _;

use common::*;
use ncproof::check::{check, soundness_sweep, CheckLoc, CheckOptions, CheckReport};
use ncproof::cpoly::{embed, multilinearize, tau_substitute, CPoly};
use ncproof::field::FieldSpec;
use ncproof::formula::{Dir, Formula, DEFAULT_EXPAND_CAP};
use ncproof::instances::gen_fphp;
use ncproof::ncpoly::NCPoly;
use ncproof::order::{Order, VarId};
use ncproof::ordered::{recognize, OrderedVerdict};
use ncproof::pit::{self, PitBackend};
use ncproof::proof::{parse_proof, Justification, Proof, ProofSystem};
use ncproof::rank::{binomial, hard_poly, nisan_bound, permutation_submatrix};
use ncproof::translate::{
    commutator_proof, fpc_to_nfpc, pcr_to_ofpc, PCR_TO_OFPC_SIZE_CONSTANT,
};

const Q: FieldSpec = FieldSpec::Rationals;
const CAP: usize = DEFAULT_EXPAND_CAP;

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn fixture(name: &str) -> Proof {
    let src = match name {
        "pc_trivial" => include_str!("fixtures/pc_trivial.proof"),
        "pc_fphp21" => include_str!("fixtures/pc_fphp21.proof"),
        "pcr_fphp21" => include_str!("fixtures/pcr_fphp21.proof"),
        "pcr_bars" => include_str!("fixtures/pcr_bars.proof"),
        "nfpc_trivial" => include_str!("fixtures/nfpc_trivial.proof"),
        "nfpc_comm" => include_str!("fixtures/nfpc_comm.proof"),
        "nfpc_products" => include_str!("fixtures/nfpc_products.proof"),
        "ofpc_fphp21" => include_str!("fixtures/ofpc_fphp21.proof"),
        "fpc_allrules" => include_str!("fixtures/fpc_allrules.proof"),
        "fpc_comm" => include_str!("fixtures/fpc_comm.proof"),
        other => panic!("no fixture {other}"),
    };
    parse_proof(src).unwrap()
}

fn hard_embedded(d: u32) -> NCPoly {
    let ord = Order::default_order();
    embed(&hard_poly(d, 2 * d, &ord).unwrap(), &ord).unwrap()
}

#[test]
fn criterion_01_hard_rank_identity() {
    let ord = Order::default_order();
    let mut d10_elapsed = None;
    for d in 1..=10u32 {
        let start = Instant::now();
        let mut submatrix_total = 0u64;
        let full = nisan_bound(&hard_embedded(d)).unwrap();
        for k in 0..=d as usize {
            let sub = permutation_submatrix(d, k, &ord).unwrap();
            assert!(sub.is_permutation_matrix(), "A_{k} of HARD_{d}");
            let r = sub.rank();
            assert_eq!(r, binomial(d as u64, k as u64), "rank(A_{k}) at d={d}");
            assert!(r <= full.per_k[k], "submatrix rank exceeds full rank");
            submatrix_total += r;
        }
        assert_eq!(submatrix_total, 1u64 << d, "Σ C({d},k) = 2^{d}");
        assert!(full.total >= 1u64 << d, "full rank total below 2^{d}");
        if d == 10 {
            d10_elapsed = Some(start.elapsed());
        }
    }
    // exact totals at small degree, frozen from the independent
    // row-reduction oracle
    let expected_totals = [(1u32, 2u64), (2, 5), (3, 10)];
    for (d, total) in expected_totals {
        let report = nisan_bound(&hard_embedded(d)).unwrap();
        assert_eq!(report.total, total, "exact total at d={d}");
        let oracle_total: u64 = (0..=d as usize)
            .map(|k| {
                naive_rational_rank(&ncproof::rank::nisan_matrix(&hard_embedded(d), k).unwrap())
            })
            .sum();
        assert_eq!(oracle_total, total, "oracle disagrees at d={d}");
    }
    let elapsed = d10_elapsed.unwrap();
    assert!(elapsed.as_secs_f64() < 10.0, "d=10 took {elapsed:?}");
    println!("criterion 1: PASS — A_k ranks = C(d,k), Σ = 2^d for d ≤ 10; full totals ≥ 2^d; d=10 in {elapsed:?}");
}

#[test]
fn criterion_02_hard_expansion_oracle() {
    let ord = Order::default_order();
    for d in 1..=12u32 {
        let nc = hard_embedded(d);
        assert_eq!(nc.num_terms(), 1 << d, "2^{d} monomials");
        assert!(nc.terms().all(|(_, c)| c.is_one()), "all coefficients 1");
        assert!(nc.is_ordered(&ord), "every word ≼-nondecreasing");
        assert!(nc.is_homogeneous());
        assert_eq!(nc.degree(), Some(d as usize));
    }
    println!("criterion 2: PASS — ⟦HARD_d⟧ exact for d ≤ 12");
}

#[test]
fn criterion_03_checker_soundness_sweep() {
    let refutations = [
        "pc_trivial",
        "pc_fphp21",
        "pcr_fphp21",
        "pcr_bars",
        "nfpc_trivial",
        "nfpc_comm",
        "ofpc_fphp21",
    ];
    for name in refutations {
        let start = Instant::now();
        let proof = fixture(name);
        assert!(proof.nvars <= 12);
        let report = check(&proof, &opts()).unwrap();
        assert!(report.accepted && report.is_refutation, "{name}");
        soundness_sweep(&proof).unwrap_or_else(|e| panic!("{name}: {e}"));
        // the inputs must have no common 0/1 root
        let field = proof.field;
        let unsat = (0u64..(1 << proof.nvars)).all(|bits| {
            proof
                .inputs
                .iter()
                .any(|f| !f.eval_01(field, &|i| bits >> (i - 1) & 1 == 1).is_zero())
        });
        assert!(unsat, "{name}: inputs have a common root");
        let t = start.elapsed();
        assert!(t.as_secs_f64() < 5.0, "{name} took {t:?}");
    }
    // non-refutation fixtures still satisfy the per-line vanishing
    for name in ["nfpc_products", "fpc_allrules", "fpc_comm"] {
        soundness_sweep(&fixture(name)).unwrap();
    }
    println!("criterion 3: PASS — all accepted fixtures vanish on common roots; inputs unsatisfiable");
}

#[test]
fn criterion_04_pcr_to_ofpc_translation() {
    // the PCR fixture must really be a refutation of gen_fphp(2,1)
    let fphp = gen_fphp(2, 1).unwrap();
    let pcr = fixture("pcr_fphp21");
    let input_polys: Vec<CPoly> = pcr
        .inputs
        .iter()
        .map(|f| f.expand(Q).unwrap().erase_order())
        .collect();
    assert_eq!(input_polys, fphp.polys, "fixture inputs = gen_fphp(2,1)");

    for name in ["pcr_fphp21", "pcr_bars"] {
        let proof = fixture(name);
        let report = pcr_to_ofpc(&proof, &opts()).unwrap();
        let out = check(&report.output, &opts()).unwrap();
        assert!(out.accepted, "{name}: {:?}", out.failures);
        assert!(out.is_refutation, "{name}");
        let n = proof.nvars as u64;
        assert!(
            report.size_out <= PCR_TO_OFPC_SIZE_CONSTANT * n * report.size_in,
            "{name}: size law violated: {} > {}·{}·{}",
            report.size_out,
            PCR_TO_OFPC_SIZE_CONSTANT,
            n,
            report.size_in
        );
    }

    // the minimal {x̄1, x1} refutation from the module examples
    let minimal = parse_proof(
        "system: PCR\nfield: Q\nvars: 1\n\
         input 1: X1\ninput 2: x1\n\
         line 1: X1 ; input 1\n\
         line 2: x1 ; input 2\n\
         line 3: (+ X1 x1) ; add 1 2 1 1\n\
         line 4: (+ (+ x1 X1) -1) ; compl 1\n\
         line 5: 1 ; add 3 4 1 -1\n",
    )
    .unwrap();
    let report = pcr_to_ofpc(&minimal, &opts()).unwrap();
    let out = check(&report.output, &opts()).unwrap();
    assert!(out.accepted && out.is_refutation);
    assert!(report.size_out <= PCR_TO_OFPC_SIZE_CONSTANT * report.size_in);
    println!(
        "criterion 4: PASS — PCR→OFPC accepted for FPHP(2,1) and {{x̄1, x1}}, size law C = {PCR_TO_OFPC_SIZE_CONSTANT}"
    );
}

#[test]
fn criterion_05_commutator_machinery() {
    let start = Instant::now();
    let mut r = rng(2205);
    let mut max_ratio = 0.0f64;
    for trial in 0..200 {
        let leaves_f = r.gen_range(1..=10);
        let leaves_g = r.gen_range(1..=10);
        let f = random_nonconstant(&mut r, 4, leaves_f, Q);
        let g = random_nonconstant(&mut r, 4, leaves_g, Q);
        let s = f.size() + g.size();
        assert!(s <= 40);
        let proof = commutator_proof(&f, &g, Q, CAP).unwrap();
        let report = check(&proof, &opts()).unwrap();
        assert!(report.accepted, "trial {trial}: {:?}", report.failures);
        let target = Formula::minus(
            Q,
            Formula::times(Arc::clone(&f), Arc::clone(&g)),
            Formula::times(Arc::clone(&g), Arc::clone(&f)),
        );
        let last = &proof.lines.last().unwrap().formula;
        assert!(
            pit::equal(last, &target, Q, PitBackend::Expand, CAP).unwrap(),
            "trial {trial}: final line is not the commutator"
        );
        let bound = s * s * s + 50;
        assert!(
            report.size <= bound,
            "trial {trial}: fragment size {} over ceiling {bound}",
            report.size
        );
        max_ratio = max_ratio.max(report.size as f64 / bound as f64);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 5: PASS — 200 commutator fragments verified; worst size ratio {max_ratio:.3} of the cubic ceiling; {elapsed:?}"
    );
}

#[test]
fn criterion_06_ordered_recognition() {
    let ord = Order::default_order();
    let mut r = rng(2206);
    for trial in 0..500 {
        let f = random_ordered(&mut r, 1, 6, 8, Q);
        match recognize(&f, Q, &ord, CAP).unwrap() {
            OrderedVerdict::Canonical(g) => {
                assert_eq!(g, f, "trial {trial}: syntactic input must be unchanged");
                assert_eq!(g.size(), f.size());
                assert!(pit::equal(&g, &f, Q, PitBackend::Expand, CAP).unwrap());
            }
            OrderedVerdict::NotOrdered(w) => {
                panic!("trial {trial}: ordered formula rejected: {w:?}")
            }
        }
    }
    for trial in 0..500 {
        let base = random_ordered(&mut r, 1, 6, 8, Q);
        let bad = inject_violation(&mut r, base, 6, Q);
        match recognize(&bad, Q, &ord, CAP).unwrap() {
            OrderedVerdict::Canonical(_) => {
                panic!("trial {trial}: semantically unordered formula canonicalized")
            }
            OrderedVerdict::NotOrdered(w) => {
                // witness validity: the gate exists, the pair really
                // violates ≼, and both variables survive in the gate's
                // polynomials
                let gate = bad.subtree(&w.path).expect("witness path resolves");
                let Formula::Times(left, right) = gate else {
                    panic!("trial {trial}: witness path is not a product gate");
                };
                assert!(ord.position(w.left_var) > ord.position(w.right_var));
                let lp = left.expand(Q).unwrap();
                let rp = right.expand(Q).unwrap();
                let occurs = |p: &NCPoly, v: u32| {
                    p.terms()
                        .any(|(word, _)| word.0.contains(&VarId::plain(v)))
                };
                assert!(occurs(&lp, w.left_var), "trial {trial}: left certificate");
                assert!(occurs(&rp, w.right_var), "trial {trial}: right certificate");
            }
        }
    }
    println!("criterion 6: PASS — 500 ordered canonicalized unchanged, 500 violations rejected with valid witnesses");
}

/// A random walk of polynomial-preserving tree rewrites (valid in the
/// free algebra): plus commutation, reassociation, unit wrapping.
fn nc_preserving_shuffle(
    r: &mut rand_chacha::ChaCha8Rng,
    f: &Arc<Formula>,
) -> Arc<Formula> {
    let mut cur = Arc::clone(f);
    for _ in 0..6 {
        let paths = {
            let mut all = times_paths(&cur);
            all.extend(plus_paths(&cur));
            all.push(Vec::new());
            all
        };
        let path = paths.choose(r).unwrap().clone();
        let Some(node) = cur.subtree(&path) else { continue };
        let replacement: Option<Arc<Formula>> = match (r.gen_range(0..4), node) {
            (0, Formula::Plus(a, b)) => Some(Formula::plus(Arc::clone(b), Arc::clone(a))),
            (1, Formula::Plus(a, bc)) => match bc.as_ref() {
                Formula::Plus(b, c) => Some(Formula::plus(
                    Formula::plus(Arc::clone(a), Arc::clone(b)),
                    Arc::clone(c),
                )),
                _ => None,
            },
            (2, Formula::Times(a, bc)) => match bc.as_ref() {
                Formula::Times(b, c) => Some(Formula::times(
                    Formula::times(Arc::clone(a), Arc::clone(b)),
                    Arc::clone(c),
                )),
                _ => None,
            },
            (3, node) => Some(Formula::times(
                Formula::int(Q, 1),
                Arc::new(node.clone()),
            )),
            _ => None,
        };
        if let Some(new) = replacement {
            cur = cur.replace_subtree(&path, new).unwrap();
        }
    }
    cur
}

fn plus_paths(f: &Formula) -> Vec<Vec<Dir>> {
    fn walk(f: &Formula, path: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        if let Formula::Plus(a, b) | Formula::Times(a, b) = f {
            if matches!(f, Formula::Plus(..)) {
                out.push(path.clone());
            }
            path.push(Dir::L);
            walk(a, path, out);
            path.pop();
            path.push(Dir::R);
            walk(b, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_07_pit_backend_agreement() {
    let start = Instant::now();
    let mut r = rng(2207);
    let mut equal_count = 0;
    for trial in 0..1000 {
        let f = random_formula(&mut r, 6, 15, Q);
        assert!(f.size() <= 30);
        let g = if trial % 2 == 0 {
            nc_preserving_shuffle(&mut r, &f)
        } else {
            random_formula(&mut r, 6, 15, Q)
        };
        let exact = pit::equal(&f, &g, Q, PitBackend::Expand, CAP).unwrap();
        let seed = 0x9e3779b9u64.wrapping_mul(trial as u64 + 1);
        let probabilistic =
            pit::equal(&f, &g, Q, PitBackend::RandomMatrix { seed }, 0).unwrap();
        assert_eq!(exact, probabilistic, "trial {trial}: backends disagree");
        equal_count += usize::from(exact);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    assert!(equal_count >= 500, "shuffles must produce equal pairs");
    println!(
        "criterion 7: PASS — 1000 pairs, zero backend disagreements ({equal_count} equal pairs); {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// criterion 8: mutation rejection
// ---------------------------------------------------------------------

/// Whether the checker rejects with a failure pinned at `line`.
fn rejected_at(proof: &Proof, line: usize) -> bool {
    match check(proof, &opts()) {
        Ok(CheckReport {
            accepted: false,
            failures,
            ..
        }) => failures.iter().any(|f| f.loc == CheckLoc::Line(line)),
        _ => false,
    }
}

fn line_poly(proof: &Proof, i: usize) -> NCPoly {
    proof.lines[i].formula.expand(proof.field).unwrap()
}

/// All coefficient-flip mutants with a semantic (or for F-PC, syntactic)
/// single-point change at one line.
fn coeff_flip_mutants(proof: &Proof) -> Vec<(Proof, usize)> {
    let mut out = Vec::new();
    for i in 0..proof.lines.len() {
        for path in const_paths(&proof.lines[i].formula) {
            let Some(Formula::Const(c)) = proof.lines[i].formula.subtree(&path) else {
                continue;
            };
            let flipped = c.add(&proof.field.one());
            let new_formula = proof.lines[i]
                .formula
                .replace_subtree(&path, Formula::constant(flipped))
                .unwrap();
            if proof.system != ProofSystem::FPC {
                // guarantee the mutation changes the line's polynomial
                let before = line_poly(proof, i);
                let after = new_formula.expand(proof.field).unwrap();
                if before == after {
                    continue;
                }
            }
            let mut mutant = proof.clone();
            mutant.lines[i].formula = new_formula;
            out.push((mutant, i + 1));
        }
    }
    out
}

/// All premise-renumbering mutants pointing a justification at an
/// earlier line that cannot justify it: a renumbering can accidentally
/// hit another legal derivation (a zero `add` coefficient accepts any
/// premise; two different premises may rewrite to the same line), so
/// each operator requires a statically sufficient breaking condition.
fn premise_renumber_mutants(proof: &Proof) -> Vec<(Proof, usize)> {
    let differs = |a: usize, b: usize| -> bool {
        if proof.system == ProofSystem::FPC {
            proof.lines[a].formula != proof.lines[b].formula
        } else {
            line_poly(proof, a) != line_poly(proof, b)
        }
    };
    let mut out = Vec::new();
    for i in 0..proof.lines.len() {
        let premises = proof.lines[i].just.premises();
        for (slot, &j) in premises.iter().enumerate() {
            for j2 in 1..=i {
                if j2 == j {
                    continue;
                }
                let breaking = match &proof.lines[i].just {
                    // a zero coefficient multiplies the premise away
                    Justification::Add { a, b, .. } => {
                        let coeff = if slot == 0 { a } else { b };
                        !coeff.is_zero() && differs(j - 1, j2 - 1)
                    }
                    // the rewrite context must visibly mismatch; equal
                    // contexts can legitimately re-derive the line
                    Justification::Rewrite { path, .. } => {
                        match proof.lines[i].formula.subtree(path) {
                            Some(sub) => proof.lines[j2 - 1]
                                .formula
                                .replace_subtree(path, Arc::new(sub.clone()))
                                .map(|grafted| grafted != proof.lines[i].formula)
                                .unwrap_or(true),
                            None => true,
                        }
                    }
                    _ => differs(j - 1, j2 - 1),
                };
                if !breaking {
                    continue;
                }
                let mut mutant = proof.clone();
                let just = &mut mutant.lines[i].just;
                match just {
                    Justification::Add { j, k, .. } => {
                        if slot == 0 {
                            *j = j2
                        } else {
                            *k = j2
                        }
                    }
                    Justification::Mul { j, .. }
                    | Justification::MulLeft { j, .. }
                    | Justification::MulRight { j, .. }
                    | Justification::Rewrite { j, .. }
                    | Justification::Copy(j) => *j = j2,
                    _ => unreachable!("premises() was nonempty"),
                }
                out.push((mutant, i + 1));
            }
        }
    }
    out
}

/// Mutations inside the justification itself: rule coefficients, product
/// variables, axiom indices, input indices. Each carries its sufficient
/// breaking condition.
fn justification_tweak_mutants(proof: &Proof) -> Vec<(Proof, usize)> {
    let n = proof.nvars;
    let is_fpc = proof.system == ProofSystem::FPC;
    let nonzero = |j: usize| !line_poly(proof, j - 1).is_zero();
    let input_differs = |a: usize, b: usize| {
        if is_fpc {
            proof.inputs[a] != proof.inputs[b]
        } else {
            proof.inputs[a].expand(proof.field).unwrap()
                != proof.inputs[b].expand(proof.field).unwrap()
        }
    };
    let mut out: Vec<(Proof, usize)> = Vec::new();
    let mut push = |i: usize, just: Justification| {
        let mut mutant = proof.clone();
        mutant.lines[i].just = just;
        out.push((mutant, i + 1));
    };
    for (i, line) in proof.lines.iter().enumerate() {
        match &line.just {
            Justification::Add { j, k, a, b } => {
                let bump = proof.field.one();
                if is_fpc || nonzero(*j) {
                    push(
                        i,
                        Justification::Add {
                            j: *j,
                            k: *k,
                            a: a.add(&bump),
                            b: b.clone(),
                        },
                    );
                }
                if is_fpc || nonzero(*k) {
                    push(
                        i,
                        Justification::Add {
                            j: *j,
                            k: *k,
                            a: a.clone(),
                            b: b.add(&bump),
                        },
                    );
                }
            }
            Justification::Mul { j, var } => {
                for v in 1..=n {
                    if v == var.index && !var.barred {
                        continue;
                    }
                    if is_fpc || nonzero(*j) {
                        push(
                            i,
                            Justification::Mul {
                                j: *j,
                                var: VarId::plain(v),
                            },
                        );
                    }
                }
            }
            Justification::MulLeft { j, var } => {
                for v in (1..=n).filter(|v| v != var) {
                    if nonzero(*j) {
                        push(i, Justification::MulLeft { j: *j, var: v });
                    }
                }
            }
            Justification::MulRight { j, var } => {
                for v in (1..=n).filter(|v| v != var) {
                    if nonzero(*j) {
                        push(i, Justification::MulRight { j: *j, var: v });
                    }
                }
            }
            Justification::BoolAxiom(v) => {
                for v2 in (1..=n).filter(|x| x != v) {
                    push(i, Justification::BoolAxiom(v2));
                }
            }
            Justification::BarBoolAxiom(v) => {
                for v2 in (1..=n).filter(|x| x != v) {
                    push(i, Justification::BarBoolAxiom(v2));
                }
            }
            Justification::ComplAxiom(v) => {
                for v2 in (1..=n).filter(|x| x != v) {
                    push(i, Justification::ComplAxiom(v2));
                }
            }
            Justification::CommAxiom(v, w) => {
                for v2 in (1..=n).filter(|x| x != v && x != w) {
                    push(i, Justification::CommAxiom(v2, *w));
                }
            }
            Justification::Input(j) => {
                for j2 in 1..=proof.inputs.len() {
                    if j2 != *j && input_differs(*j - 1, j2 - 1) {
                        push(i, Justification::Input(j2));
                    }
                }
            }
            Justification::Rewrite { .. } | Justification::Copy(_) => {}
        }
    }
    out
}

/// OFPC-only: swap the operands of a product gate so the line computes a
/// polynomial outside 𝒢.
fn operand_swap_mutants(proof: &Proof) -> Vec<(Proof, usize)> {
    let ord = &proof.order;
    let mut out = Vec::new();
    for i in 0..proof.lines.len() {
        for path in times_paths(&proof.lines[i].formula) {
            let Some(Formula::Times(a, b)) = proof.lines[i].formula.subtree(&path) else {
                continue;
            };
            let swapped = proof.lines[i]
                .formula
                .replace_subtree(&path, Formula::times(Arc::clone(b), Arc::clone(a)))
                .unwrap();
            // keep only swaps that land outside the ordered fragment
            let poly = swapped.expand(proof.field).unwrap();
            if poly.is_ordered(ord) {
                continue;
            }
            let mut mutant = proof.clone();
            mutant.lines[i].formula = swapped;
            out.push((mutant, i + 1));
        }
    }
    out
}

#[test]
fn criterion_08_mutation_rejection() {
    let mut sources: Vec<(String, Proof)> = [
        "pc_trivial",
        "pc_fphp21",
        "pcr_fphp21",
        "pcr_bars",
        "nfpc_trivial",
        "nfpc_comm",
        "nfpc_products",
        "ofpc_fphp21",
        "fpc_allrules",
        "fpc_comm",
    ]
    .into_iter()
    .map(|n| (n.to_string(), fixture(n)))
    .collect();
    // generated proofs widen the net: a translated OFPC refutation and a
    // translated NFPC proof with a commutator fragment
    let ofpc = pcr_to_ofpc(&fixture("pcr_fphp21"), &opts()).unwrap().output;
    sources.push(("pcr_fphp21→OFPC".into(), ofpc));
    let ofpc_bars = pcr_to_ofpc(&fixture("pcr_bars"), &opts()).unwrap().output;
    sources.push(("pcr_bars→OFPC".into(), ofpc_bars));
    let nfpc = fpc_to_nfpc(&fixture("fpc_comm"), &opts()).unwrap().output;
    sources.push(("fpc_comm→NFPC".into(), nfpc));
    // commutator fragments are justification-dense NFPC proofs
    let mut r = rng(2208);
    for seed_trial in 0..2 {
        let f = random_nonconstant(&mut r, 3, 6, Q);
        let g = random_nonconstant(&mut r, 3, 6, Q);
        let frag = commutator_proof(&f, &g, Q, CAP).unwrap();
        sources.push((format!("commutator fragment {seed_trial}"), frag));
    }

    let mut total = 0usize;
    let mut per_system = std::collections::BTreeMap::<String, usize>::new();
    for (name, proof) in &sources {
        assert!(
            check(proof, &opts()).unwrap().accepted,
            "source {name} must be accepted"
        );
        let mut mutants = coeff_flip_mutants(proof);
        mutants.extend(premise_renumber_mutants(proof));
        mutants.extend(justification_tweak_mutants(proof));
        if proof.system == ProofSystem::OFPC {
            mutants.extend(operand_swap_mutants(proof));
        }
        for (mutant, line) in mutants {
            assert!(
                rejected_at(&mutant, line),
                "{name}: mutant at line {line} not rejected there"
            );
            total += 1;
            *per_system.entry(proof.system.to_string()).or_default() += 1;
        }
    }
    assert!(total >= 500, "only {total} mutants");
    assert_eq!(per_system.len(), 5, "all five systems covered: {per_system:?}");
    println!(
        "criterion 8: PASS — {total} single-point mutants rejected at the mutated line {per_system:?}"
    );
}

#[test]
fn criterion_09_fpc_to_nfpc() {
    // every rewrite rule appears in the fixture
    let allrules = fixture("fpc_allrules");
    let mut seen = std::collections::BTreeSet::new();
    for line in &allrules.lines {
        if let Justification::Rewrite { rule, .. } = &line.just {
            seen.insert(rule.name());
        }
    }
    assert_eq!(
        seen.into_iter().collect::<Vec<_>>(),
        vec!["assoc*", "assoc+", "comm*", "comm+", "dist", "scalar", "unit", "zero"],
    );

    let report = fpc_to_nfpc(&allrules, &opts()).unwrap();
    let out = check(&report.output, &opts()).unwrap();
    assert!(out.accepted, "{:?}", out.failures);
    assert!(out.is_refutation);
    // all rewrites in this fixture are free (its comm* sites have a
    // constant operand), so the line count is preserved exactly
    assert_eq!(report.output.lines.len(), allrules.lines.len());
    let copies = report
        .output
        .lines
        .iter()
        .filter(|l| matches!(l.just, Justification::Copy(_)))
        .count();
    let rewrites = allrules
        .lines
        .iter()
        .filter(|l| matches!(l.just, Justification::Rewrite { .. }))
        .count();
    assert_eq!(copies, rewrites);

    // a genuine commutation expands into a verified fragment
    let comm = fixture("fpc_comm");
    let report = fpc_to_nfpc(&comm, &opts()).unwrap();
    let out = check(&report.output, &opts()).unwrap();
    assert!(out.accepted, "{:?}", out.failures);
    assert!(report.output.lines.len() > comm.lines.len());
    println!(
        "criterion 9: PASS — all 8 rewrite rules translate; free rewrites add zero lines; genuine comm* expands and verifies"
    );
}

#[test]
fn criterion_10_multilinearization_and_tau() {
    let mut r = rng(2210);
    for _ in 0..1000 {
        let f = random_formula(&mut r, 5, 8, Q);
        let p = f.expand(Q).unwrap().erase_order();
        let ml = multilinearize(&p);
        assert_eq!(multilinearize(&ml), ml);
        assert!(ml.degree() <= p.degree());
    }
    for i in 1..=4u32 {
        let x = CPoly::var(Q, VarId::plain(i));
        let xb = CPoly::var(Q, VarId::barred(i));
        // τ(x_i·x̄_i) = x_i − x_i²
        let barbool = x.mul(&xb).unwrap();
        let expect = x.sub(&x.mul(&x).unwrap()).unwrap();
        assert_eq!(tau_substitute(&barbool), expect);
        // τ(x_i + x̄_i − 1) = 0
        let compl = x.add(&xb).unwrap().sub(&CPoly::one(Q)).unwrap();
        assert!(tau_substitute(&compl).is_zero());
    }
    println!("criterion 10: PASS — ML idempotent on 1000 random polynomials; τ axiom identities exact");
}
