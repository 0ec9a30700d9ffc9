//! The noncommutative formula AST: binary plus/times gates with ordered
//! children over variable and constant leaves. Subtraction and scalar
//! multiples are encoded through `Const` leaves and `Times`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{ExpandError, ParseError};
use crate::field::{FieldElem, FieldSpec};
use crate::ncpoly::NCPoly;
use crate::order::VarId;

/// Default cap on the number of terms an expansion may produce.
/// Overridable per call and, in the CLI, via `NCPROOF_EXPAND_CAP`.
pub const DEFAULT_EXPAND_CAP: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    L,
    R,
}

/// A path from the root of a formula, one direction per gate.
pub type Path = Vec<Dir>;

pub fn parse_path(s: &str) -> Option<Path> {
    if s == "." {
        return Some(Vec::new());
    }
    s.chars()
        .map(|c| match c {
            'L' => Some(Dir::L),
            'R' => Some(Dir::R),
            _ => None,
        })
        .collect()
}

pub fn path_to_string(p: &[Dir]) -> String {
    if p.is_empty() {
        return ".".to_string();
    }
    p.iter()
        .map(|d| match d {
            Dir::L => 'L',
            Dir::R => 'R',
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Var(VarId),
    Const(FieldElem),
    Plus(Arc<Formula>, Arc<Formula>),
    Times(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(i: u32) -> Arc<Formula> {
        Arc::new(Formula::Var(VarId::plain(i)))
    }

    pub fn barred_var(i: u32) -> Arc<Formula> {
        Arc::new(Formula::Var(VarId::barred(i)))
    }

    pub fn constant(c: FieldElem) -> Arc<Formula> {
        Arc::new(Formula::Const(c))
    }

    pub fn int(field: FieldSpec, n: i64) -> Arc<Formula> {
        Formula::constant(field.from_i64(n))
    }

    pub fn plus(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Formula::Plus(a, b))
    }

    pub fn times(a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Formula::Times(a, b))
    }

    /// a − b, encoded as a + (−1)·b.
    pub fn minus(field: FieldSpec, a: Arc<Formula>, b: Arc<Formula>) -> Arc<Formula> {
        Formula::plus(a, Formula::times(Formula::int(field, -1), b))
    }

    /// Total number of nodes in the underlying tree, leaves included.
    pub fn size(&self) -> u64 {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Plus(a, b) | Formula::Times(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Edge count of the longest root-to-leaf path.
    pub fn depth(&self) -> u64 {
        match self {
            Formula::Var(_) | Formula::Const(_) => 0,
            Formula::Plus(a, b) | Formula::Times(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Upper bound on the degree of the computed polynomial.
    pub fn syntactic_degree(&self) -> u64 {
        match self {
            Formula::Var(_) => 1,
            Formula::Const(_) => 0,
            Formula::Plus(a, b) => a.syntactic_degree().max(b.syntactic_degree()),
            Formula::Times(a, b) => a.syntactic_degree().saturating_add(b.syntactic_degree()),
        }
    }

    /// Variables appearing as leaves, regardless of cancellation.
    pub fn syntactic_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Const(_) => {}
            Formula::Plus(a, b) | Formula::Times(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn has_barred(&self) -> bool {
        self.syntactic_vars().iter().any(|v| v.barred)
    }

    pub fn max_var_index(&self) -> u32 {
        self.syntactic_vars()
            .iter()
            .map(|v| v.index)
            .max()
            .unwrap_or(0)
    }

    /// The noncommutative polynomial computed by the formula, with the
    /// default term cap.
    pub fn expand(&self, field: FieldSpec) -> Result<NCPoly, ExpandError> {
        self.expand_capped(field, DEFAULT_EXPAND_CAP)
    }

    pub fn expand_capped(&self, field: FieldSpec, cap: usize) -> Result<NCPoly, ExpandError> {
        match self {
            Formula::Var(v) => Ok(NCPoly::var(field, *v)),
            Formula::Const(c) => {
                if c.field() != field {
                    return Err(crate::error::AlgebraError::FieldMismatch(
                        field.to_string(),
                        c.field().to_string(),
                    )
                    .into());
                }
                Ok(NCPoly::constant(c.clone()))
            }
            Formula::Plus(a, b) => {
                let pa = a.expand_capped(field, cap)?;
                let pb = b.expand_capped(field, cap)?;
                let s = pa.add(&pb)?;
                if s.num_terms() > cap {
                    return Err(ExpandError::CapExceeded(cap));
                }
                Ok(s)
            }
            Formula::Times(a, b) => {
                let pa = a.expand_capped(field, cap)?;
                let pb = b.expand_capped(field, cap)?;
                pa.mul_capped(&pb, cap)
            }
        }
    }

    /// Evaluates at a 0/1 point; barred leaves take 1 − x_i.
    pub fn eval_01(&self, field: FieldSpec, assign: &dyn Fn(u32) -> bool) -> FieldElem {
        match self {
            Formula::Var(v) => {
                let bit = assign(v.index);
                let set = bit != v.barred;
                if set {
                    field.one()
                } else {
                    field.zero()
                }
            }
            Formula::Const(c) => c.clone(),
            Formula::Plus(a, b) => a.eval_01(field, assign).add(&b.eval_01(field, assign)),
            Formula::Times(a, b) => a.eval_01(field, assign).mul(&b.eval_01(field, assign)),
        }
    }

    /// Folds a variable-free formula to its constant value; `None` if any
    /// variable leaf is present.
    pub fn eval_const(&self, field: FieldSpec) -> Option<FieldElem> {
        match self {
            Formula::Var(_) => None,
            Formula::Const(c) => Some(c.clone()),
            Formula::Plus(a, b) => Some(a.eval_const(field)?.add(&b.eval_const(field)?)),
            Formula::Times(a, b) => Some(a.eval_const(field)?.mul(&b.eval_const(field)?)),
        }
    }

    /// Replaces every leaf equal to `v` by the constant 0.
    pub fn substitute_zero(self: &Arc<Formula>, v: VarId, field: FieldSpec) -> Arc<Formula> {
        match self.as_ref() {
            Formula::Var(u) if *u == v => Formula::constant(field.zero()),
            Formula::Var(_) | Formula::Const(_) => Arc::clone(self),
            Formula::Plus(a, b) => {
                let (na, nb) = (a.substitute_zero(v, field), b.substitute_zero(v, field));
                if Arc::ptr_eq(&na, a) && Arc::ptr_eq(&nb, b) {
                    Arc::clone(self)
                } else {
                    Formula::plus(na, nb)
                }
            }
            Formula::Times(a, b) => {
                let (na, nb) = (a.substitute_zero(v, field), b.substitute_zero(v, field));
                if Arc::ptr_eq(&na, a) && Arc::ptr_eq(&nb, b) {
                    Arc::clone(self)
                } else {
                    Formula::times(na, nb)
                }
            }
        }
    }

    pub fn subtree(&self, path: &[Dir]) -> Option<&Formula> {
        let mut cur = self;
        for d in path {
            cur = match (cur, d) {
                (Formula::Plus(a, _), Dir::L) | (Formula::Times(a, _), Dir::L) => a,
                (Formula::Plus(_, b), Dir::R) | (Formula::Times(_, b), Dir::R) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Rebuilds the tree with `new` grafted at `path`.
    pub fn replace_subtree(
        self: &Arc<Formula>,
        path: &[Dir],
        new: Arc<Formula>,
    ) -> Option<Arc<Formula>> {
        match path.split_first() {
            None => Some(new),
            Some((d, rest)) => match (self.as_ref(), d) {
                (Formula::Plus(a, b), Dir::L) => {
                    Some(Formula::plus(a.replace_subtree(rest, new)?, Arc::clone(b)))
                }
                (Formula::Plus(a, b), Dir::R) => {
                    Some(Formula::plus(Arc::clone(a), b.replace_subtree(rest, new)?))
                }
                (Formula::Times(a, b), Dir::L) => {
                    Some(Formula::times(a.replace_subtree(rest, new)?, Arc::clone(b)))
                }
                (Formula::Times(a, b), Dir::R) => {
                    Some(Formula::times(Arc::clone(a), b.replace_subtree(rest, new)?))
                }
                _ => None,
            },
        }
    }

    /// Counts occurrences of the leaf `v`.
    pub fn count_var(&self, v: VarId) -> usize {
        match self {
            Formula::Var(u) => usize::from(*u == v),
            Formula::Const(_) => 0,
            Formula::Plus(a, b) | Formula::Times(a, b) => a.count_var(v) + b.count_var(v),
        }
    }

    /// Replaces the unique leaf `v` by `new`; caller must ensure uniqueness.
    pub fn substitute_leaf(self: &Arc<Formula>, v: VarId, new: &Arc<Formula>) -> Arc<Formula> {
        match self.as_ref() {
            Formula::Var(u) if *u == v => Arc::clone(new),
            Formula::Var(_) | Formula::Const(_) => Arc::clone(self),
            Formula::Plus(a, b) => {
                Formula::plus(a.substitute_leaf(v, new), b.substitute_leaf(v, new))
            }
            Formula::Times(a, b) => {
                Formula::times(a.substitute_leaf(v, new), b.substitute_leaf(v, new))
            }
        }
    }
}

/// Builds a formula computing exactly the degree-k homogeneous part of
/// `f`. Plus gates split into plus gates and product gates into sums of
/// component products, so ordered inputs stay ordered.
pub fn homogeneous_component(f: &Arc<Formula>, k: usize, field: FieldSpec) -> Arc<Formula> {
    component_table(f, k, field)
        .into_iter()
        .nth(k)
        .flatten()
        .unwrap_or_else(|| Formula::constant(field.zero()))
}

/// Components 0..=k of `f`; `None` marks an identically absent component.
fn component_table(f: &Arc<Formula>, k: usize, field: FieldSpec) -> Vec<Option<Arc<Formula>>> {
    let mut table = vec![None; k + 1];
    match f.as_ref() {
        Formula::Var(_) => {
            if k >= 1 {
                table[1] = Some(Arc::clone(f));
            }
        }
        Formula::Const(_) => {
            table[0] = Some(Arc::clone(f));
        }
        Formula::Plus(a, b) => {
            let ta = component_table(a, k, field);
            let tb = component_table(b, k, field);
            for (i, slot) in table.iter_mut().enumerate() {
                *slot = match (&ta[i], &tb[i]) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(Arc::clone(x)),
                    (Some(x), Some(y)) => Some(Formula::plus(Arc::clone(x), Arc::clone(y))),
                };
            }
        }
        Formula::Times(a, b) => {
            let ta = component_table(a, k, field);
            let tb = component_table(b, k, field);
            for (deg, slot) in table.iter_mut().enumerate() {
                let mut sum: Option<Arc<Formula>> = None;
                for i in 0..=deg {
                    if let (Some(x), Some(y)) = (&ta[i], &tb[deg - i]) {
                        let prod = Formula::times(Arc::clone(x), Arc::clone(y));
                        sum = Some(match sum {
                            None => prod,
                            Some(s) => Formula::plus(s, prod),
                        });
                    }
                }
                *slot = sum;
            }
        }
    }
    table
}

// ---------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------

enum Token<'a> {
    LParen(usize),
    RParen(usize),
    Atom(usize, &'a str),
}

impl Token<'_> {
    fn pos(&self) -> usize {
        match self {
            Token::LParen(p) | Token::RParen(p) | Token::Atom(p, _) => *p,
        }
    }
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                tokens.push(Token::LParen(i));
                i += 1;
            }
            b')' => {
                tokens.push(Token::RParen(i));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && bytes[i] != b'('
                    && bytes[i] != b')'
                {
                    i += 1;
                }
                tokens.push(Token::Atom(start, &src[start..i]));
            }
        }
    }
    tokens
}

/// Parses the S-expression grammar
/// `formula := var | const | "(" "+" formula formula ")" | "(" "*" formula formula ")"`.
/// `nvars`, when given, bounds legal variable indices.
pub fn parse_formula(
    src: &str,
    field: FieldSpec,
    nvars: Option<u32>,
) -> Result<Arc<Formula>, ParseError> {
    let tokens = tokenize(src);
    let mut idx = 0;
    let f = parse_node(&tokens, &mut idx, src.len(), field, nvars)?;
    if idx != tokens.len() {
        return Err(ParseError::syntax(
            tokens[idx].pos(),
            "trailing input after formula",
        ));
    }
    Ok(f)
}

fn parse_node(
    tokens: &[Token<'_>],
    idx: &mut usize,
    end: usize,
    field: FieldSpec,
    nvars: Option<u32>,
) -> Result<Arc<Formula>, ParseError> {
    let tok = tokens
        .get(*idx)
        .ok_or_else(|| ParseError::syntax(end, "unexpected end of input"))?;
    match tok {
        Token::RParen(p) => Err(ParseError::syntax(*p, "unexpected `)`")),
        Token::Atom(p, s) => {
            *idx += 1;
            parse_atom(s, *p, field, nvars)
        }
        Token::LParen(_) => {
            *idx += 1;
            let op = match tokens.get(*idx) {
                Some(Token::Atom(_, s @ ("+" | "*"))) => *s,
                Some(t) => {
                    return Err(ParseError::syntax(t.pos(), "expected `+` or `*`"));
                }
                None => return Err(ParseError::syntax(end, "unexpected end of input")),
            };
            *idx += 1;
            let a = parse_node(tokens, idx, end, field, nvars)?;
            let b = parse_node(tokens, idx, end, field, nvars)?;
            match tokens.get(*idx) {
                Some(Token::RParen(_)) => {
                    *idx += 1;
                }
                Some(t) => return Err(ParseError::syntax(t.pos(), "expected `)`")),
                None => return Err(ParseError::syntax(end, "unexpected end of input")),
            }
            Ok(if op == "+" {
                Formula::plus(a, b)
            } else {
                Formula::times(a, b)
            })
        }
    }
}

fn parse_atom(
    s: &str,
    pos: usize,
    field: FieldSpec,
    nvars: Option<u32>,
) -> Result<Arc<Formula>, ParseError> {
    let bar = s.starts_with('X');
    if bar || s.starts_with('x') {
        let index: u32 = s[1..]
            .parse()
            .map_err(|_| ParseError::syntax(pos, format!("bad variable `{s}`")))?;
        if index == 0 {
            return Err(ParseError::syntax(pos, "variable indices start at 1"));
        }
        if let Some(n) = nvars {
            if index > n {
                return Err(ParseError::syntax(
                    pos,
                    format!("unknown variable index {index} (vars: {n})"),
                ));
            }
        }
        return Ok(Arc::new(Formula::Var(VarId {
            index,
            barred: bar,
        })));
    }
    let c = field
        .parse_elem(s)
        .map_err(|e| ParseError::syntax(pos, e.to_string()))?;
    Ok(Formula::constant(c))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Const(c) => write!(f, "{c}"),
            Formula::Plus(a, b) => write!(f, "(+ {a} {b})"),
            Formula::Times(a, b) => write!(f, "(* {a} {b})"),
        }
    }
}
