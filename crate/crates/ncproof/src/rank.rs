//! Nisan's partial-derivative matrices M_k(f), their exact ranks, and the
//! HARD_d family whose ordered embedding forces formula size 2^d.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cpoly::CPoly;
use crate::field::{FieldElem, FieldSpec};
use crate::ncpoly::{NCPoly, Word};
use crate::order::{Order, VarId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("k = {0} exceeds the degree {1}")]
    BadK(usize, usize),
    #[error("need at least {0} variables, have {1}")]
    TooFewVars(u32, u32),
    #[error("the order must keep x_1 ≺ … ≺ x_{0} on the first 2d variables")]
    InvalidOrder(u32),
}

/// The support-indexed matrix M_k(f): rows are the distinct degree-k
/// prefixes of f's words, columns the distinct degree-(d−k) suffixes, and
/// the entry at (M, N) is the coefficient of M·N in f. Rows and columns
/// omitted from the full n^k × n^{d−k} grid are identically zero, so the
/// rank is unaffected.
#[derive(Clone, Debug)]
pub struct NisanMatrix {
    pub k: usize,
    pub rows: Vec<Word>,
    pub cols: Vec<Word>,
    field: FieldSpec,
    entries: BTreeMap<(usize, usize), FieldElem>,
}

impl NisanMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient lookup by words; zero for off-support pairs.
    pub fn entry_by_words(&self, m: &Word, n: &Word) -> FieldElem {
        let i = self.rows.iter().position(|w| w == m);
        let j = self.cols.iter().position(|w| w == n);
        match (i, j) {
            (Some(i), Some(j)) => self.entry(i, j),
            _ => self.field.zero(),
        }
    }

    pub fn is_permutation_matrix(&self) -> bool {
        if self.rows.len() != self.cols.len()
            || self.entries.len() != self.rows.len()
            || !self.entries.values().all(|c| c.is_one())
        {
            return false;
        }
        let mut row_seen = vec![false; self.rows.len()];
        let mut col_seen = vec![false; self.cols.len()];
        for (i, j) in self.entries.keys() {
            if row_seen[*i] || col_seen[*j] {
                return false;
            }
            row_seen[*i] = true;
            col_seen[*j] = true;
        }
        true
    }

    /// Exact rank over the coefficient field: structural elimination of
    /// singleton rows and columns, then fraction-free (Bareiss)
    /// elimination over the integers for ℚ, or modular elimination for
    /// GF(p), on the remaining dense core.
    pub fn rank(&self) -> u64 {
        let mut row_support: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut col_support: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, j) in self.entries.keys() {
            row_support.entry(*i).or_default().push(*j);
            col_support.entry(*j).or_default().push(*i);
        }
        let mut rank = 0u64;

        // Pivoting on a row (column) with a single nonzero entry removes
        // that row and column without creating any fill-in.
        loop {
            let single_row = row_support
                .iter()
                .find(|(_, cols)| cols.len() == 1)
                .map(|(&r, cols)| (r, cols[0]));
            let pivot = single_row.or_else(|| {
                col_support
                    .iter()
                    .find(|(_, rows)| rows.len() == 1)
                    .map(|(&c, rows)| (rows[0], c))
            });
            let Some((r, c)) = pivot else { break };
            rank += 1;
            let dead_cols = row_support.remove(&r).unwrap_or_default();
            for dc in dead_cols {
                if let Some(rows) = col_support.get_mut(&dc) {
                    rows.retain(|&x| x != r);
                }
            }
            let dead_rows = col_support.remove(&c).unwrap_or_default();
            for dr in dead_rows {
                if let Some(cols) = row_support.get_mut(&dr) {
                    cols.retain(|&x| x != c);
                }
            }
            row_support.retain(|_, cols| !cols.is_empty());
            col_support.retain(|_, rows| !rows.is_empty());
        }

        if row_support.is_empty() {
            return rank;
        }

        // dense core
        let live_rows: Vec<usize> = row_support.keys().copied().collect();
        let live_cols: Vec<usize> = col_support.keys().copied().collect();
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let dense: Vec<Vec<FieldElem>> = live_rows
            .iter()
            .map(|&r| {
                let mut row = vec![self.field.zero(); live_cols.len()];
                for &c in &row_support[&r] {
                    row[col_pos[&c]] = self.entry(r, c);
                }
                row
            })
            .collect();
        rank + dense_rank(dense, self.field)
    }
}

fn dense_rank(rows: Vec<Vec<FieldElem>>, field: FieldSpec) -> u64 {
    match field {
        FieldSpec::Rationals => {
            // clear denominators row by row; scaling preserves rank
            let cleared: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|row| {
                    let mut lcm = BigInt::one();
                    for e in row {
                        if let FieldElem::Rat(r) = e {
                            lcm = lcm.lcm(r.denom());
                        }
                    }
                    row.iter()
                        .map(|e| match e {
                            FieldElem::Rat(r) => r.numer() * (&lcm / r.denom()),
                            _ => unreachable!("rational matrix"),
                        })
                        .collect()
                })
                .collect();
            bareiss_rank(cleared)
        }
        FieldSpec::Prime(p) => {
            let rows: Vec<Vec<u64>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| match e {
                            FieldElem::Fp { val, .. } => *val,
                            _ => unreachable!("modular matrix"),
                        })
                        .collect()
                })
                .collect();
            modular_rank(rows, p)
        }
    }
}

/// Fraction-free Gaussian elimination; every division is exact by the
/// Sylvester identity.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> u64 {
    let nr = m.len();
    if nr == 0 {
        return 0;
    }
    let nc = m[0].len();
    let mut rank = 0u64;
    let mut row = 0usize;
    let mut prev = BigInt::one();
    for col in 0..nc {
        let Some(pivot_row) = (row..nr).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        for r in row + 1..nr {
            for c in col + 1..nc {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
        if row == nr {
            break;
        }
    }
    rank
}

fn modular_rank(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let nr = m.len();
    if nr == 0 {
        return 0;
    }
    let nc = m[0].len();
    let mut rank = 0u64;
    let mut row = 0usize;
    for col in 0..nc {
        let Some(pivot_row) = (row..nr).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(row, pivot_row);
        let inv = crate::field::pow_mod(m[row][col], p - 2, p);
        for r in row + 1..nr {
            if m[r][col] == 0 {
                continue;
            }
            let factor = (m[r][col] as u128 * inv as u128 % p as u128) as u64;
            for c in col..nc {
                let sub = m[row][c] as u128 * factor as u128 % p as u128;
                m[r][c] = ((m[r][c] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        rank += 1;
        row += 1;
        if row == nr {
            break;
        }
    }
    rank
}

/// Builds M_k(f) for a homogeneous f of degree d.
pub fn nisan_matrix(f: &NCPoly, k: usize) -> Result<NisanMatrix, RankError> {
    if !f.is_homogeneous() {
        return Err(RankError::NonHomogeneous);
    }
    let d = f.degree().unwrap_or(0);
    if k > d {
        return Err(RankError::BadK(k, d));
    }
    let mut rows: Vec<Word> = Vec::new();
    let mut cols: Vec<Word> = Vec::new();
    let mut pairs: Vec<(Word, Word, FieldElem)> = Vec::new();
    for (w, c) in f.terms() {
        let prefix = Word(w.0[..k].to_vec());
        let suffix = Word(w.0[k..].to_vec());
        rows.push(prefix.clone());
        cols.push(suffix.clone());
        pairs.push((prefix, suffix, c.clone()));
    }
    rows.sort();
    rows.dedup();
    cols.sort();
    cols.dedup();
    let row_index: BTreeMap<&Word, usize> = rows.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let col_index: BTreeMap<&Word, usize> = cols.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let entries = pairs
        .iter()
        .map(|(m, n, c)| ((row_index[m], col_index[n]), c.clone()))
        .collect();
    Ok(NisanMatrix {
        k,
        rows,
        cols,
        field: f.field(),
        entries,
    })
}

/// Per-k ranks of the Nisan matrices and their sum: a lower bound on the
/// size of any noncommutative formula computing f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub degree: usize,
    pub per_k: Vec<u64>,
    pub total: u64,
}

pub fn nisan_bound(f: &NCPoly) -> Result<RankReport, RankError> {
    if !f.is_homogeneous() {
        return Err(RankError::NonHomogeneous);
    }
    let d = f.degree().unwrap_or(0);
    let per_k: Vec<u64> = (0..=d)
        .map(|k| nisan_matrix(f, k).map(|m| m.rank()))
        .collect::<Result<_, _>>()?;
    Ok(RankReport {
        degree: d,
        per_k: per_k.clone(),
        total: per_k.iter().sum(),
    })
}

/// HARD_d = Π_{i=1}^d (y_i + z_i) with y_i = x_i and z_i = x_{d+i}:
/// a homogeneous multilinear polynomial of degree d with 2^d monomials.
pub fn hard_poly(d: u32, nvars: u32, ord: &Order) -> Result<CPoly, RankError> {
    if nvars < 2 * d {
        return Err(RankError::TooFewVars(2 * d, nvars));
    }
    for i in 1..=2 * d {
        if ord.position(i) != i {
            return Err(RankError::InvalidOrder(2 * d));
        }
    }
    let field = FieldSpec::Rationals;
    let mut acc = CPoly::one(field);
    for i in 1..=d {
        let pair = CPoly::var(field, VarId::plain(i))
            .add(&CPoly::var(field, VarId::plain(d + i)))
            .expect("same field");
        acc = acc.mul(&pair).expect("same field");
    }
    Ok(acc)
}

fn subsets_of_size(lo: u32, hi: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u32, hi: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=hi {
            if (hi - v + 1) as usize + cur.len() < size {
                break;
            }
            cur.push(v);
            rec(v + 1, hi, size, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, size, &mut cur, &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The A_k submatrix of M_k(⟦HARD_d⟧): rows are the ≼-sorted degree-k
/// multilinear words over the y variables, columns the degree-(d−k)
/// words over the z variables. Row y_{i_1}…y_{i_k} carries a single 1,
/// at the column of the complementary z-word.
pub fn permutation_submatrix(
    d: u32,
    k: usize,
    ord: &Order,
) -> Result<NisanMatrix, RankError> {
    if k > d as usize {
        return Err(RankError::BadK(k, d as usize));
    }
    let hard = hard_poly(d, 2 * d, ord)?;
    let nc = crate::cpoly::embed(&hard, ord).expect("no bars");
    let rows: Vec<Word> = subsets_of_size(1, d, k)
        .into_iter()
        .map(|s| Word(s.into_iter().map(VarId::plain).collect()))
        .collect();
    let cols: Vec<Word> = subsets_of_size(d + 1, 2 * d, d as usize - k)
        .into_iter()
        .map(|s| Word(s.into_iter().map(VarId::plain).collect()))
        .collect();
    let mut entries = BTreeMap::new();
    for (i, m) in rows.iter().enumerate() {
        for (j, n) in cols.iter().enumerate() {
            let c = nc.coeff(&m.concat(n));
            if !c.is_zero() {
                entries.insert((i, j), c);
            }
        }
    }
    Ok(NisanMatrix {
        k,
        rows,
        cols,
        field: nc.field(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpoly::embed;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn x(i: u32) -> VarId {
        VarId::plain(i)
    }

    fn hard_nc(d: u32) -> NCPoly {
        let ord = Order::default_order();
        embed(&hard_poly(d, 2 * d, &ord).unwrap(), &ord).unwrap()
    }

    #[test]
    fn single_word_matrix() {
        let f = NCPoly::monomial(q().one(), Word(vec![x(1), x(2)]));
        let m = nisan_matrix(&f, 1).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 1));
        assert!(m.entry(0, 0).is_one());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn k0_has_the_empty_prefix() {
        let f = hard_nc(2);
        let m = nisan_matrix(&f, 0).unwrap();
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.rows[0], Word::unit());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn hard2_middle_matrix_by_hand() {
        // words x1x2, x1x4, x2x3, x3x4: rows {x1,x2,x3}, rank 3
        let m = nisan_matrix(&hard_nc(2), 1).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 3));
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn nisan_bound_examples() {
        // HARD_1 = x1 + x2
        let r = nisan_bound(&hard_nc(1)).unwrap();
        assert_eq!(r.per_k, vec![1, 1]);
        assert_eq!(r.total, 2);

        let r = nisan_bound(&hard_nc(2)).unwrap();
        assert_eq!(r.per_k, vec![1, 3, 1]);
        assert_eq!(r.total, 5);

        // a single word of degree d has all ranks 1
        let f = NCPoly::monomial(q().one(), Word(vec![x(1), x(2), x(1)]));
        let r = nisan_bound(&f).unwrap();
        assert_eq!(r.per_k, vec![1, 1, 1, 1]);
    }

    #[test]
    fn nisan_bound_rejects_inhomogeneous() {
        let f = NCPoly::var(q(), x(1))
            .add(&NCPoly::monomial(q().one(), Word(vec![x(1), x(2)])))
            .unwrap();
        assert_eq!(nisan_bound(&f), Err(RankError::NonHomogeneous));
    }

    #[test]
    fn hard_poly_shape() {
        let ord = Order::default_order();
        let h1 = hard_poly(1, 2, &ord).unwrap();
        let expect = CPoly::var(q(), x(1)).add(&CPoly::var(q(), x(2))).unwrap();
        assert_eq!(h1, expect);
        assert_eq!(hard_poly(3, 6, &ord).unwrap().num_terms(), 8);
        assert_eq!(hard_poly(2, 3, &ord), Err(RankError::TooFewVars(4, 3)));
        let twisted = Order::from_positions(vec![2, 1]).unwrap();
        assert_eq!(hard_poly(1, 2, &twisted), Err(RankError::InvalidOrder(2)));
    }

    #[test]
    fn permutation_submatrix_examples() {
        let ord = Order::default_order();
        // d=2, k=1: row y1 hits column z2, row y2 hits column z1
        let a = permutation_submatrix(2, 1, &ord).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (2, 2));
        assert!(a.entry(0, 1).is_one());
        assert!(a.entry(1, 0).is_one());
        assert!(a.entry(0, 0).is_zero());
        assert!(a.is_permutation_matrix());
        assert_eq!(a.rank(), 2);

        let a = permutation_submatrix(3, 0, &ord).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (1, 1));
        assert_eq!(a.rank(), 1);

        let a = permutation_submatrix(3, 2, &ord).unwrap();
        assert!(a.is_permutation_matrix());
        assert_eq!(a.rank(), 3);
    }

    #[test]
    fn submatrix_entries_match_full_matrix() {
        let ord = Order::default_order();
        let full = nisan_matrix(&hard_nc(3), 1).unwrap();
        let sub = permutation_submatrix(3, 1, &ord).unwrap();
        for (i, m) in sub.rows.iter().enumerate() {
            for (j, n) in sub.cols.iter().enumerate() {
                assert_eq!(sub.entry(i, j), full.entry_by_words(m, n));
            }
        }
    }

    #[test]
    fn modular_ranks_match_rational_ranks_on_hard() {
        let f5 = FieldSpec::prime(5).unwrap();
        for d in 1..=4u32 {
            let over_q = nisan_bound(&hard_nc(d)).unwrap();
            // rebuild the same polynomial over GF(5)
            let ordd = Order::default_order();
            let hard = hard_poly(d, 2 * d, &ordd).unwrap();
            let mut modular = NCPoly::zero(f5);
            for (m, _) in hard.terms() {
                let w = m.sorted_word(&ordd).unwrap();
                modular = modular.add(&NCPoly::monomial(f5.one(), w)).unwrap();
            }
            let over_5 = nisan_bound(&modular).unwrap();
            assert_eq!(over_q.per_k, over_5.per_k, "d={d}");
        }
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
