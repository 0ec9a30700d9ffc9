//! Sparse noncommutative polynomials: canonical maps from words to nonzero
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::cpoly::{CPoly, Monomial};
use crate::error::{AlgebraError, ExpandError};
use crate::field::{FieldElem, FieldSpec};
use crate::order::{Order, VarId};

/// A monomial of the free algebra: a finite sequence of variables.
/// The empty word is the unit monomial. Words order by length first and
/// then letterwise, which fixes a deterministic iteration order for every
/// polynomial independent of any variable order ≼.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<VarId>);

impl Word {
    pub fn unit() -> Word {
        Word(Vec::new())
    }

    pub fn single(v: VarId) -> Word {
        Word(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// True iff letters are ≼-nondecreasing. Barred letters are never part
    /// of the image of ⟦·⟧, so any bar disqualifies the word.
    pub fn is_nondecreasing(&self, ord: &Order) -> bool {
        if self.0.iter().any(|v| v.barred) {
            return false;
        }
        self.0
            .windows(2)
            .all(|w| ord.le(w[0].index, w[1].index))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An element of 𝔽⟨x_1,…,x_n⟩ in canonical form: no zero coefficients,
/// at most one entry per word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCPoly {
    field: FieldSpec,
    terms: BTreeMap<Word, FieldElem>,
}

impl NCPoly {
    pub fn zero(field: FieldSpec) -> NCPoly {
        NCPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> NCPoly {
        let field = c.field();
        let mut p = NCPoly::zero(field);
        if !c.is_zero() {
            p.terms.insert(Word::unit(), c);
        }
        p
    }

    pub fn one(field: FieldSpec) -> NCPoly {
        NCPoly::constant(field.one())
    }

    pub fn var(field: FieldSpec, v: VarId) -> NCPoly {
        NCPoly::monomial(field.one(), Word::single(v))
    }

    pub fn monomial(c: FieldElem, w: Word) -> NCPoly {
        let field = c.field();
        let mut p = NCPoly::zero(field);
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> FieldElem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElem)> {
        self.terms.iter()
    }

    /// True iff the polynomial is a constant (zero or unit-word only).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|w| w.is_empty())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(|w| w.len());
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    }

    fn check_field(&self, other: &NCPoly) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    fn add_term(terms: &mut BTreeMap<Word, FieldElem>, w: Word, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// a·p + b·q.
    pub fn linear_combination(
        p: &NCPoly,
        q: &NCPoly,
        a: &FieldElem,
        b: &FieldElem,
    ) -> Result<NCPoly, AlgebraError> {
        p.check_field(q)?;
        if a.field() != p.field || b.field() != p.field {
            return Err(AlgebraError::FieldMismatch(
                p.field.to_string(),
                a.field().to_string(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (w, c) in &p.terms {
            Self::add_term(&mut terms, w.clone(), a.mul(c));
        }
        for (w, c) in &q.terms {
            Self::add_term(&mut terms, w.clone(), b.mul(c));
        }
        Ok(NCPoly {
            field: p.field,
            terms,
        })
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly, AlgebraError> {
        NCPoly::linear_combination(self, other, &self.field.one(), &self.field.one())
    }

    /// Word-concatenation convolution. The two operands never commute:
    /// `x1 * x2` and `x2 * x1` are different polynomials.
    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.mul_capped(other, usize::MAX)
            .map_err(|e| match e {
                ExpandError::Algebra(a) => a,
                ExpandError::CapExceeded(_) => unreachable!("uncapped"),
            })
    }

    /// Like `mul` but aborts once the accumulating term map outgrows `cap`.
    pub fn mul_capped(&self, other: &NCPoly, cap: usize) -> Result<NCPoly, ExpandError> {
        self.check_field(other)?;
        let mut terms = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                Self::add_term(&mut terms, w1.concat(w2), c1.mul(c2));
                if terms.len() > cap {
                    return Err(ExpandError::CapExceeded(cap));
                }
            }
        }
        Ok(NCPoly {
            field: self.field,
            terms,
        })
    }

    pub fn scale(&self, a: &FieldElem) -> NCPoly {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            Self::add_term(&mut terms, w.clone(), a.mul(c));
        }
        NCPoly {
            field: self.field,
            terms,
        }
    }

    /// Forgets word order: collapses each word to a commutative monomial.
    pub fn erase_order(&self) -> CPoly {
        let mut out = CPoly::zero(self.field);
        for (w, c) in &self.terms {
            out.add_term(Monomial::from_vars(w.0.iter().copied()), c.clone());
        }
        out
    }

    /// The degree-k homogeneous part.
    pub fn homogeneous_part(&self, k: usize) -> NCPoly {
        NCPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// True iff every word is ≼-nondecreasing, i.e. the polynomial lies in
    /// the image 𝒢 of the embedding ⟦·⟧.
    pub fn is_ordered(&self, ord: &Order) -> bool {
        self.terms.keys().all(|w| w.is_nondecreasing(ord))
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c} : {w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn x(i: u32) -> VarId {
        VarId::plain(i)
    }

    #[test]
    fn disjoint_words_add() {
        let p = NCPoly::monomial(q().one(), Word(vec![x(1), x(2)]));
        let qq = NCPoly::monomial(q().one(), Word(vec![x(2), x(1)]));
        let r =
            NCPoly::linear_combination(&p, &qq, &q().one(), &q().from_i64(-1)).unwrap();
        assert_eq!(r.num_terms(), 2);
        assert_eq!(r.coeff(&Word(vec![x(2), x(1)])), q().from_i64(-1));
    }

    #[test]
    fn cancellation_to_zero() {
        let p = NCPoly::var(q(), x(1));
        let r = NCPoly::linear_combination(&p, &p, &q().one(), &q().from_i64(-1)).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.num_terms(), 0);
    }

    #[test]
    fn gf5_coefficients_cancel() {
        let f = FieldSpec::prime(5).unwrap();
        let p = NCPoly::monomial(f.one(), Word(vec![x(1), x(2)]));
        let r = NCPoly::linear_combination(&p, &p, &f.from_i64(2), &f.from_i64(3)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn products_do_not_commute() {
        let a = NCPoly::var(q(), x(1));
        let b = NCPoly::var(q(), x(2));
        assert_ne!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn product_distributes_and_has_unit() {
        let sum = NCPoly::var(q(), x(1)).add(&NCPoly::var(q(), x(2))).unwrap();
        let prod = sum.mul(&NCPoly::var(q(), x(3))).unwrap();
        assert_eq!(prod.num_terms(), 2);
        assert_eq!(prod.coeff(&Word(vec![x(1), x(3)])), q().one());
        assert_eq!(prod.coeff(&Word(vec![x(2), x(3)])), q().one());
        assert_eq!(sum.mul(&NCPoly::one(q())).unwrap(), sum);
    }

    #[test]
    fn field_mismatch_rejected() {
        let p = NCPoly::var(q(), x(1));
        let r = NCPoly::var(FieldSpec::prime(7).unwrap(), x(1));
        assert!(p.add(&r).is_err());
        assert!(p.mul(&r).is_err());
    }

    #[test]
    fn cap_trips_on_large_products() {
        let mut sum = NCPoly::zero(q());
        for i in 1..=5 {
            sum = sum.add(&NCPoly::var(q(), x(i))).unwrap();
        }
        let err = sum.mul_capped(&sum, 10).unwrap_err();
        assert!(matches!(err, ExpandError::CapExceeded(10)));
    }
}
