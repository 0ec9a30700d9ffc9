//! Invariant suites: ring laws, embedding round trips, expansion
//! homomorphisms, homogeneous-component bounds, ordered-formula
//! properties, and checker monotonicity.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{random_formula, random_nonconstant, random_ordered, rng};
use ncproof::check::{check, CheckOptions};
use ncproof::cpoly::{embed, multilinearize, CPoly};
use ncproof::field::FieldSpec;
use ncproof::formula::{homogeneous_component, parse_formula, Formula, DEFAULT_EXPAND_CAP};
use ncproof::ncpoly::{NCPoly, Word};
use ncproof::order::{Order, VarId};
use ncproof::ordered::{is_syntactic_ordered, multiply_by_var, ordered_sum_of_monomials};
use ncproof::pit::{self, PitBackend};
use ncproof::proof::{parse_proof, ProofSystem};
use ncproof::rank::nisan_matrix;
use rand::Rng as _;

const Q: FieldSpec = FieldSpec::Rationals;
const CAP: usize = DEFAULT_EXPAND_CAP;

fn formula_strategy(nvars: u32) -> impl Strategy<Value = Arc<Formula>> {
    let leaf = prop_oneof![
        3 => (1..=nvars).prop_map(Formula::var),
        1 => (-3i64..=3).prop_map(|c| Formula::int(Q, c)),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::plus(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::times(a, b)),
        ]
    })
}

fn ncpoly_strategy(nvars: u32, max_terms: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(1..=nvars, 0..5),
            (-4i64..=4).prop_filter("nonzero", |c| *c != 0),
        ),
        0..max_terms,
    )
    .prop_map(|terms| {
        let mut acc = NCPoly::zero(Q);
        for (letters, c) in terms {
            let w = Word(letters.into_iter().map(VarId::plain).collect());
            acc = acc.add(&NCPoly::monomial(Q.from_i64(c), w)).unwrap();
        }
        acc
    })
}

fn cpoly_strategy(nvars: u32, max_terms: usize) -> impl Strategy<Value = CPoly> {
    prop::collection::vec(
        (
            prop::collection::vec((1..=nvars, 1u32..=3), 0..4),
            -4i64..=4,
        ),
        0..max_terms,
    )
    .prop_map(|terms| {
        let mut acc = CPoly::zero(Q);
        for (factors, c) in terms {
            let mut m = CPoly::constant(Q.from_i64(c));
            for (v, e) in factors {
                m = m.mul(&CPoly::var(Q, VarId::plain(v)).pow(e).unwrap()).unwrap();
            }
            acc = acc.add(&m).unwrap();
        }
        acc
    })
}

proptest! {
    #[test]
    fn ncpoly_ring_laws(
        a in ncpoly_strategy(6, 8),
        b in ncpoly_strategy(6, 8),
        c in ncpoly_strategy(6, 8),
    ) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);

        let dist = a.mul(&b.add(&c).unwrap()).unwrap();
        let expanded = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&dist, &expanded);

        prop_assert_eq!(&a.mul(&NCPoly::one(Q)).unwrap(), &a);
        prop_assert_eq!(&NCPoly::one(Q).mul(&a).unwrap(), &a);
    }

    #[test]
    fn print_parse_roundtrip(f in formula_strategy(6)) {
        let text = f.to_string();
        let parsed = parse_formula(&text, Q, None).unwrap();
        prop_assert_eq!(&parsed, &f);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn embedding_round_trips_and_preserves_degree(p in cpoly_strategy(5, 6)) {
        let ord = Order::default_order();
        let nc = embed(&p, &ord).unwrap();
        prop_assert_eq!(&nc.erase_order(), &p);
        prop_assert_eq!(nc.degree().unwrap_or(0) as u32, p.degree());
        prop_assert!(nc.is_ordered(&ord));
    }

    #[test]
    fn multilinearize_is_idempotent_and_additive(
        p in cpoly_strategy(5, 6),
        q in cpoly_strategy(5, 6),
    ) {
        let ml = multilinearize(&p);
        prop_assert_eq!(&multilinearize(&ml), &ml);
        let sum = multilinearize(&p.add(&q).unwrap());
        let split = ml.add(&multilinearize(&q)).unwrap();
        prop_assert_eq!(&sum, &split);
    }

    #[test]
    fn expand_is_a_homomorphism(
        f in formula_strategy(4),
        g in formula_strategy(4),
    ) {
        let plus = Formula::plus(Arc::clone(&f), Arc::clone(&g)).expand(Q).unwrap();
        let pf = f.expand(Q).unwrap();
        let pg = g.expand(Q).unwrap();
        prop_assert_eq!(&plus, &pf.add(&pg).unwrap());
        let times = Formula::times(f, g).expand(Q).unwrap();
        prop_assert_eq!(&times, &pf.mul(&pg).unwrap());
    }

    #[test]
    fn homogeneous_components_sum_and_stay_small(f in formula_strategy(4)) {
        let full = f.expand(Q).unwrap();
        let deg = full.degree().unwrap_or(0);
        let mut sum = NCPoly::zero(Q);
        for k in 0..=deg {
            let part = homogeneous_component(&f, k, Q);
            sum = sum.add(&part.expand(Q).unwrap()).unwrap();
            let bound = f.size() * (k as u64 + 1) * (k as u64 + 1);
            prop_assert!(part.size() <= bound,
                "size {} over bound {bound}", part.size());
            prop_assert!(part.expand(Q).unwrap().is_homogeneous());
        }
        prop_assert_eq!(&sum, &full);
    }
}

#[test]
fn pit_equal_is_an_equivalence_at_spot_checks() {
    let f = parse_formula("(* (+ x1 x2) x3)", Q, None).unwrap();
    let g = parse_formula("(+ (* x1 x3) (* x2 x3))", Q, None).unwrap();
    let h = parse_formula("(+ (* x2 x3) (* x1 x3))", Q, None).unwrap();
    let eq = |a: &Arc<Formula>, b: &Arc<Formula>| {
        pit::equal(a, b, Q, PitBackend::Expand, CAP).unwrap()
    };
    assert!(eq(&f, &f));
    assert!(eq(&f, &g) && eq(&g, &f));
    assert!(eq(&f, &g) && eq(&g, &h) && eq(&f, &h));
}

#[test]
fn multiply_by_var_matches_embedding_on_500_random_ordered_formulas() {
    let mut r = rng(1101);
    let ord = Order::default_order();
    for _ in 0..500 {
        let f = random_ordered(&mut r, 1, 5, 6, Q);
        let var = r.gen_range(1..=5);
        let out = multiply_by_var(&f, var, Q, &ord).unwrap();
        assert!(is_syntactic_ordered(&out, &ord));
        let expect = embed(
            &CPoly::var(Q, VarId::plain(var))
                .mul(&f.expand(Q).unwrap().erase_order())
                .unwrap(),
            &ord,
        )
        .unwrap();
        assert_eq!(out.expand(Q).unwrap(), expect);
    }
}

#[test]
fn syntactic_ordered_implies_ordered_polynomials_everywhere() {
    fn subformulas(f: &Arc<Formula>, out: &mut Vec<Arc<Formula>>) {
        out.push(Arc::clone(f));
        if let Formula::Plus(a, b) | Formula::Times(a, b) = f.as_ref() {
            subformulas(a, out);
            subformulas(b, out);
        }
    }
    let mut r = rng(1102);
    let ord = Order::default_order();
    for _ in 0..200 {
        let f = random_ordered(&mut r, 1, 5, 7, Q);
        assert!(is_syntactic_ordered(&f, &ord));
        let mut subs = Vec::new();
        subformulas(&f, &mut subs);
        for sub in subs {
            assert!(sub.expand(Q).unwrap().is_ordered(&ord));
        }
    }
}

#[test]
fn ordered_sum_of_monomials_is_ordered_and_faithful() {
    let mut r = rng(1103);
    let ord = Order::default_order();
    for _ in 0..200 {
        let f = random_formula(&mut r, 5, 6, Q);
        let p = f.expand(Q).unwrap().erase_order();
        let rendered = ordered_sum_of_monomials(&p, &ord).unwrap();
        assert!(is_syntactic_ordered(&rendered, &ord));
        assert_eq!(rendered.expand(Q).unwrap(), embed(&p, &ord).unwrap());
    }
}

#[test]
fn nisan_entries_agree_with_coefficient_lookup() {
    let mut r = rng(1104);
    let mut checked = 0;
    while checked < 1000 {
        let f = random_formula(&mut r, 4, 5, Q);
        let full = f.expand(Q).unwrap();
        let d = full.degree().unwrap_or(0);
        let hom = full.homogeneous_part(d);
        if hom.is_zero() {
            continue;
        }
        let k = r.gen_range(0..=d);
        let m = nisan_matrix(&hom, k).unwrap();
        for _ in 0..5 {
            let i = r.gen_range(0..m.nrows());
            let j = r.gen_range(0..m.ncols());
            let word = m.rows[i].concat(&m.cols[j]);
            assert_eq!(m.entry(i, j), hom.coeff(&word));
            checked += 1;
        }
    }
}

#[test]
fn nfpc_acceptance_survives_pit_equal_rewrites() {
    let src = include_str!("fixtures/nfpc_comm.proof");
    let proof = parse_proof(src).unwrap();
    let opts = CheckOptions::default();
    assert!(check(&proof, &opts).unwrap().accepted);
    // rewrite each line in turn as 1·line (a different formula computing
    // the same polynomial); the system is semantic, so nothing changes
    for i in 0..proof.lines.len() {
        let mut variant = proof.clone();
        variant.lines[i].formula = Formula::times(
            Formula::int(Q, 1),
            Arc::clone(&variant.lines[i].formula),
        );
        let report = check(&variant, &opts).unwrap();
        assert!(report.accepted, "line {}: {:?}", i + 1, report.failures);
    }
}

#[test]
fn every_accepted_pc_proof_relabels_into_pcr() {
    for src in [
        include_str!("fixtures/pc_trivial.proof"),
        include_str!("fixtures/pc_fphp21.proof"),
    ] {
        let mut proof = parse_proof(src).unwrap();
        assert_eq!(proof.system, ProofSystem::PC);
        let opts = CheckOptions::default();
        assert!(check(&proof, &opts).unwrap().accepted);
        proof.system = ProofSystem::PCR;
        assert!(check(&proof, &opts).unwrap().accepted);
    }
}

#[test]
fn random_commutator_fragments_stay_small_in_memoized_form() {
    // repeated subtrees should be derived once
    let mut r = rng(1105);
    for _ in 0..20 {
        let shared = random_nonconstant(&mut r, 3, 3, Q);
        let f = Formula::plus(Arc::clone(&shared), Arc::clone(&shared));
        let g = random_nonconstant(&mut r, 3, 3, Q);
        let proof = ncproof::translate::commutator_proof(&f, &g, Q, CAP).unwrap();
        let report = check(&proof, &CheckOptions::default()).unwrap();
        assert!(report.accepted);
    }
}
