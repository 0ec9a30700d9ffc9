//! Sparse commutative polynomials, the embedding ⟦·⟧ into the free algebra,
//! multilinearization, and the τ substitution x̄_i ↦ 1 − x_i.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::AlgebraError;
use crate::field::{FieldElem, FieldSpec};
use crate::ncpoly::{NCPoly, Word};
use crate::order::{Order, VarId};

/// A commutative monomial: variables with multiplicity, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_vars(vars: impl IntoIterator<Item = VarId>) -> Monomial {
        let mut m = BTreeMap::new();
        for v in vars {
            *m.entry(v).or_insert(0u32) += 1;
        }
        Monomial(m.into_iter().collect())
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m: BTreeMap<VarId, u32> = self.0.iter().copied().collect();
        for (v, e) in &other.0 {
            *m.entry(*v).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|(_, e)| *e == 1)
    }

    /// Drops every exponent to 1.
    pub fn multilinearized(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, _)| (*v, 1)).collect())
    }

    pub fn has_barred(&self) -> bool {
        self.0.iter().any(|(v, _)| v.barred)
    }

    /// The unique ≼-sorted word with the same letters (with multiplicity).
    pub fn sorted_word(&self, ord: &Order) -> Result<Word, AlgebraError> {
        let mut indices = Vec::new();
        for (v, e) in &self.0 {
            if v.barred {
                return Err(AlgebraError::BarredVariable(*v));
            }
            for _ in 0..*e {
                indices.push(v.index);
            }
        }
        ord.sort_indices(&mut indices);
        Ok(Word(indices.into_iter().map(VarId::plain).collect()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An element of 𝔽[x_1,…,x_n] (possibly with barred variables) in
/// canonical sparse form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CPoly {
    field: FieldSpec,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl CPoly {
    pub fn zero(field: FieldSpec) -> CPoly {
        CPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> CPoly {
        let field = c.field();
        let mut p = CPoly::zero(field);
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn one(field: FieldSpec) -> CPoly {
        CPoly::constant(field.one())
    }

    pub fn var(field: FieldSpec, v: VarId) -> CPoly {
        let mut p = CPoly::zero(field);
        p.add_term(Monomial::var(v), field.one());
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

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.is_empty())
    }

    pub fn has_barred(&self) -> bool {
        self.terms.keys().any(|m| m.has_barred())
    }

    pub fn max_var_index(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.index))
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    fn check_field(&self, other: &CPoly) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn linear_combination(
        p: &CPoly,
        q: &CPoly,
        a: &FieldElem,
        b: &FieldElem,
    ) -> Result<CPoly, AlgebraError> {
        p.check_field(q)?;
        let mut out = CPoly::zero(p.field);
        for (m, c) in &p.terms {
            out.add_term(m.clone(), a.mul(c));
        }
        for (m, c) in &q.terms {
            out.add_term(m.clone(), b.mul(c));
        }
        Ok(out)
    }

    pub fn add(&self, other: &CPoly) -> Result<CPoly, AlgebraError> {
        CPoly::linear_combination(self, other, &self.field.one(), &self.field.one())
    }

    pub fn sub(&self, other: &CPoly) -> Result<CPoly, AlgebraError> {
        CPoly::linear_combination(self, other, &self.field.one(), &self.field.from_i64(-1))
    }

    pub fn mul(&self, other: &CPoly) -> Result<CPoly, AlgebraError> {
        self.check_field(other)?;
        let mut out = CPoly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, a: &FieldElem) -> CPoly {
        let mut out = CPoly::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<CPoly, AlgebraError> {
        let mut acc = CPoly::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluates at a point given as values per variable. Barred variables
    /// take the complement 1 − value(x_i).
    pub fn eval(&self, value: &dyn Fn(u32) -> FieldElem) -> FieldElem {
        let one = self.field.one();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in &m.0 {
                let base = if v.barred {
                    one.sub(&value(v.index))
                } else {
                    value(v.index)
                };
                for _ in 0..*e {
                    term = term.mul(&base);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The embedding ⟦·⟧: each commutative monomial becomes the unique word
/// whose letters respect ≼. Injective and degree-preserving.
pub fn embed(f: &CPoly, ord: &Order) -> Result<NCPoly, AlgebraError> {
    let mut out = NCPoly::zero(f.field());
    for (m, c) in f.terms() {
        let w = m.sorted_word(ord)?;
        let term = NCPoly::monomial(c.clone(), w);
        out = out.add(&term)?;
    }
    Ok(out)
}

/// ML(q): the unique multilinear polynomial equal to q modulo the ideal
/// generated by all x_i² − x_i.
pub fn multilinearize(q: &CPoly) -> CPoly {
    let mut out = CPoly::zero(q.field());
    for (m, c) in q.terms() {
        out.add_term(m.multilinearized(), c.clone());
    }
    out
}

/// τ: replaces every x̄_i by 1 − x_i, fully expanded.
pub fn tau_substitute(p: &CPoly) -> CPoly {
    let field = p.field();
    let one = CPoly::one(field);
    let mut out = CPoly::zero(field);
    for (m, c) in p.terms() {
        let mut term = CPoly::constant(c.clone());
        for (v, e) in m.factors() {
            let factor = if v.barred {
                one.sub(&CPoly::var(field, VarId::plain(v.index))).unwrap()
            } else {
                CPoly::var(field, *v)
            };
            for _ in 0..*e {
                term = term.mul(&factor).unwrap();
            }
        }
        out = out.add(&term).unwrap();
    }
    out
}

/// Substitutes x_i ↦ f_i into every polynomial of `qs`. The f_i must be
/// over pairwise disjoint variable sets.
pub fn substitute_family(qs: &[CPoly], fs: &[CPoly]) -> Result<Vec<CPoly>, AlgebraError> {
    for (i, fi) in fs.iter().enumerate() {
        for (j, fj) in fs.iter().enumerate().skip(i + 1) {
            if !fi.variables().is_disjoint(&fj.variables()) {
                return Err(AlgebraError::NonDisjoint(i + 1, j + 1));
            }
        }
    }
    let mut out = Vec::with_capacity(qs.len());
    for q in qs {
        if q.has_barred() {
            let v = q
                .variables()
                .into_iter()
                .find(|v| v.barred)
                .expect("has_barred");
            return Err(AlgebraError::BarredVariable(v));
        }
        let need = q.max_var_index() as usize;
        if need > fs.len() {
            return Err(AlgebraError::MissingSubstitute(need));
        }
        let field = q.field();
        let mut acc = CPoly::zero(field);
        for (m, c) in q.terms() {
            let mut term = CPoly::constant(c.clone());
            for (v, e) in m.factors() {
                let f = &fs[v.index as usize - 1];
                term = term.mul(&f.pow(*e)?)?;
            }
            acc = acc.add(&term)?;
        }
        out.push(acc);
    }
    Ok(out)
}
