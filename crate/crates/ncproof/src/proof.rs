//! The proof object and its line-oriented file format.
//!
//! ```text
//! system: PC|PCR|FPC|NFPC|OFPC
//! field: Q | GF <p>
//! vars: <n>
//! order: default | <space-separated positions of x_1..x_n>
//! input <j>: <formula>
//! line <i>: <formula> ; <justification>
//! ```
//!
//! Justifications: `input j` | `bool i` | `comm i j` | `barbool i` |
//! `compl i` | `add j k a b` | `mul j r` | `mulL j r` | `mulR j r` |
//! `rw j <rule> <LR-path|.> <fwd|bwd>` | `copy j`. `#` starts a comment.

use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;
use crate::field::{FieldElem, FieldSpec};
use crate::formula::{parse_path, path_to_string, parse_formula, Formula, Path};
use crate::order::{Order, VarId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ProofSystem {
    PC,
    PCR,
    FPC,
    NFPC,
    OFPC,
}

impl ProofSystem {
    pub fn from_str_opt(s: &str) -> Option<ProofSystem> {
        match s {
            "PC" => Some(ProofSystem::PC),
            "PCR" => Some(ProofSystem::PCR),
            "FPC" => Some(ProofSystem::FPC),
            "NFPC" => Some(ProofSystem::NFPC),
            "OFPC" => Some(ProofSystem::OFPC),
            _ => None,
        }
    }
}

impl fmt::Display for ProofSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProofSystem::PC => "PC",
            ProofSystem::PCR => "PCR",
            ProofSystem::FPC => "FPC",
            ProofSystem::NFPC => "NFPC",
            ProofSystem::OFPC => "OFPC",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RewriteRule {
    Zero,
    Unit,
    Scalar,
    CommPlus,
    CommTimes,
    AssocPlus,
    AssocTimes,
    Dist,
}

impl RewriteRule {
    pub fn name(&self) -> &'static str {
        match self {
            RewriteRule::Zero => "zero",
            RewriteRule::Unit => "unit",
            RewriteRule::Scalar => "scalar",
            RewriteRule::CommPlus => "comm+",
            RewriteRule::CommTimes => "comm*",
            RewriteRule::AssocPlus => "assoc+",
            RewriteRule::AssocTimes => "assoc*",
            RewriteRule::Dist => "dist",
        }
    }

    pub fn from_name(s: &str) -> Option<RewriteRule> {
        match s {
            "zero" => Some(RewriteRule::Zero),
            "unit" => Some(RewriteRule::Unit),
            "scalar" => Some(RewriteRule::Scalar),
            "comm+" => Some(RewriteRule::CommPlus),
            "comm*" => Some(RewriteRule::CommTimes),
            "assoc+" => Some(RewriteRule::AssocPlus),
            "assoc*" => Some(RewriteRule::AssocTimes),
            "dist" => Some(RewriteRule::Dist),
            _ => None,
        }
    }

    pub const ALL: [RewriteRule; 8] = [
        RewriteRule::Zero,
        RewriteRule::Unit,
        RewriteRule::Scalar,
        RewriteRule::CommPlus,
        RewriteRule::CommTimes,
        RewriteRule::AssocPlus,
        RewriteRule::AssocTimes,
        RewriteRule::Dist,
    ];
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RewriteDir {
    Fwd,
    Bwd,
}

/// How a proof line claims to follow from earlier material. Premise
/// indices are 1-based and must be strictly smaller than the line's own
/// index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Input(usize),
    /// x_i·(1 − x_i)
    BoolAxiom(u32),
    /// x_i·x_j − x_j·x_i, NFPC only
    CommAxiom(u32, u32),
    /// x_i·x̄_i, PCR only
    BarBoolAxiom(u32),
    /// x_i + x̄_i − 1, PCR only
    ComplAxiom(u32),
    Add {
        j: usize,
        k: usize,
        a: FieldElem,
        b: FieldElem,
    },
    /// x_r·p (left product; the variable may be barred in PCR)
    Mul { j: usize, var: VarId },
    /// NFPC left product x_r·p
    MulLeft { j: usize, var: u32 },
    /// NFPC right product p·x_r
    MulRight { j: usize, var: u32 },
    /// F-PC rewrite of the subtree of line j at `path`
    Rewrite {
        j: usize,
        rule: RewriteRule,
        path: Path,
        dir: RewriteDir,
    },
    /// NFPC sugar: a pit-equal restatement of line j
    Copy(usize),
}

impl Justification {
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Input(_)
            | Justification::BoolAxiom(_)
            | Justification::CommAxiom(..)
            | Justification::BarBoolAxiom(_)
            | Justification::ComplAxiom(_) => vec![],
            Justification::Add { j, k, .. } => vec![*j, *k],
            Justification::Mul { j, .. }
            | Justification::MulLeft { j, .. }
            | Justification::MulRight { j, .. }
            | Justification::Rewrite { j, .. }
            | Justification::Copy(j) => vec![*j],
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Input(j) => write!(f, "input {j}"),
            Justification::BoolAxiom(i) => write!(f, "bool {i}"),
            Justification::CommAxiom(i, j) => write!(f, "comm {i} {j}"),
            Justification::BarBoolAxiom(i) => write!(f, "barbool {i}"),
            Justification::ComplAxiom(i) => write!(f, "compl {i}"),
            Justification::Add { j, k, a, b } => write!(f, "add {j} {k} {a} {b}"),
            Justification::Mul { j, var } => write!(f, "mul {j} {var}"),
            Justification::MulLeft { j, var } => write!(f, "mulL {j} x{var}"),
            Justification::MulRight { j, var } => write!(f, "mulR {j} x{var}"),
            Justification::Rewrite { j, rule, path, dir } => write!(
                f,
                "rw {j} {} {} {}",
                rule.name(),
                path_to_string(path),
                match dir {
                    RewriteDir::Fwd => "fwd",
                    RewriteDir::Bwd => "bwd",
                }
            ),
            Justification::Copy(j) => write!(f, "copy {j}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub formula: Arc<Formula>,
    pub just: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Proof {
    pub system: ProofSystem,
    pub field: FieldSpec,
    pub nvars: u32,
    pub order: Order,
    pub inputs: Vec<Arc<Formula>>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    /// Structural validation: premise/index ranges, per-system rule and
    /// variable legality. Semantic checking lives in `check`.
    pub fn validate(&self) -> Result<(), String> {
        if self.lines.is_empty() {
            return Err("proof has no lines".into());
        }
        let n = self.nvars;
        let sys = self.system;
        let bars_allowed = sys == ProofSystem::PCR;
        for (pos, f) in self.inputs.iter().enumerate() {
            if !bars_allowed && f.has_barred() {
                return Err(format!("input {}: barred variable in a {sys} proof", pos + 1));
            }
            if f.max_var_index() > n {
                return Err(format!("input {}: variable beyond vars {n}", pos + 1));
            }
        }
        for (pos, line) in self.lines.iter().enumerate() {
            let idx = pos + 1;
            let fail = |msg: String| Err(format!("line {idx}: {msg}"));
            if !bars_allowed && line.formula.has_barred() {
                return fail(format!("barred variable in a {sys} proof"));
            }
            if line.formula.max_var_index() > n {
                return fail(format!("variable beyond vars {n}"));
            }
            for p in line.just.premises() {
                if p == 0 || p >= idx {
                    return fail(format!("premise {p} is not an earlier line"));
                }
            }
            let var_ok = |i: u32| i >= 1 && i <= n;
            let sys_ok = match &line.just {
                Justification::Input(j) => {
                    if *j == 0 || *j > self.inputs.len() {
                        return fail(format!("input index {j} out of range"));
                    }
                    true
                }
                Justification::BoolAxiom(i) => {
                    if !var_ok(*i) {
                        return fail(format!("axiom variable x{i} out of range"));
                    }
                    true
                }
                Justification::CommAxiom(i, j) => {
                    if !var_ok(*i) || !var_ok(*j) {
                        return fail("axiom variable out of range".into());
                    }
                    if i == j {
                        return fail("comm axiom needs two distinct variables".into());
                    }
                    sys == ProofSystem::NFPC
                }
                Justification::BarBoolAxiom(i) | Justification::ComplAxiom(i) => {
                    if !var_ok(*i) {
                        return fail(format!("axiom variable x{i} out of range"));
                    }
                    sys == ProofSystem::PCR
                }
                Justification::Add { a, b, .. } => {
                    if a.field() != self.field || b.field() != self.field {
                        return fail("coefficient from the wrong field".into());
                    }
                    true
                }
                Justification::Mul { var, .. } => {
                    if !var_ok(var.index) {
                        return fail(format!("product variable {var} out of range"));
                    }
                    if var.barred && sys != ProofSystem::PCR {
                        return fail("barred product variable outside PCR".into());
                    }
                    matches!(
                        sys,
                        ProofSystem::PC | ProofSystem::PCR | ProofSystem::FPC | ProofSystem::OFPC
                    )
                }
                Justification::MulLeft { var, .. } | Justification::MulRight { var, .. } => {
                    if !var_ok(*var) {
                        return fail(format!("product variable x{var} out of range"));
                    }
                    sys == ProofSystem::NFPC
                }
                Justification::Rewrite { .. } => sys == ProofSystem::FPC,
                Justification::Copy(_) => sys == ProofSystem::NFPC,
            };
            if !sys_ok {
                return fail(format!("justification `{}` not available in {sys}", line.just));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("system: {}\n", self.system));
        out.push_str(&format!("field: {}\n", self.field));
        out.push_str(&format!("vars: {}\n", self.nvars));
        out.push_str(&format!("order: {}\n", self.order));
        for (i, f) in self.inputs.iter().enumerate() {
            out.push_str(&format!("input {}: {}\n", i + 1, f));
        }
        for (i, line) in self.lines.iter().enumerate() {
            out.push_str(&format!("line {}: {} ; {}\n", i + 1, line.formula, line.just));
        }
        out
    }
}

fn parse_var_token(tok: &str) -> Option<VarId> {
    if let Ok(i) = tok.parse::<u32>() {
        return (i >= 1).then(|| VarId::plain(i));
    }
    let barred = tok.starts_with('X');
    if barred || tok.starts_with('x') {
        let i: u32 = tok[1..].parse().ok()?;
        return (i >= 1).then_some(VarId { index: i, barred });
    }
    None
}

fn parse_justification(
    text: &str,
    field: FieldSpec,
    lineno: usize,
) -> Result<Justification, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let err = |msg: String| Err(ParseError::at(lineno, msg));
    let index = |s: &str| -> Result<usize, ParseError> {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| ParseError::at(lineno, format!("bad index `{s}`")))
    };
    let var32 = |s: &str| -> Result<u32, ParseError> {
        s.parse::<u32>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| ParseError::at(lineno, format!("bad variable index `{s}`")))
    };
    match toks.as_slice() {
        ["input", j] => Ok(Justification::Input(index(j)?)),
        ["bool", i] => Ok(Justification::BoolAxiom(var32(i)?)),
        ["comm", i, j] => Ok(Justification::CommAxiom(var32(i)?, var32(j)?)),
        ["barbool", i] => Ok(Justification::BarBoolAxiom(var32(i)?)),
        ["compl", i] => Ok(Justification::ComplAxiom(var32(i)?)),
        ["add", j, k, a, b] => Ok(Justification::Add {
            j: index(j)?,
            k: index(k)?,
            a: field
                .parse_elem(a)
                .map_err(|e| ParseError::at(lineno, e.to_string()))?,
            b: field
                .parse_elem(b)
                .map_err(|e| ParseError::at(lineno, e.to_string()))?,
        }),
        ["mul", j, r] => Ok(Justification::Mul {
            j: index(j)?,
            var: parse_var_token(r)
                .ok_or_else(|| ParseError::at(lineno, format!("bad variable `{r}`")))?,
        }),
        ["mulL", j, r] => Ok(Justification::MulLeft {
            j: index(j)?,
            var: parse_var_token(r)
                .filter(|v| !v.barred)
                .map(|v| v.index)
                .ok_or_else(|| ParseError::at(lineno, format!("bad variable `{r}`")))?,
        }),
        ["mulR", j, r] => Ok(Justification::MulRight {
            j: index(j)?,
            var: parse_var_token(r)
                .filter(|v| !v.barred)
                .map(|v| v.index)
                .ok_or_else(|| ParseError::at(lineno, format!("bad variable `{r}`")))?,
        }),
        ["rw", j, rule, path, dir] => {
            let rule = RewriteRule::from_name(rule)
                .ok_or_else(|| ParseError::at(lineno, format!("unknown rewrite rule `{rule}`")))?;
            let path = parse_path(path)
                .ok_or_else(|| ParseError::at(lineno, format!("bad path `{path}`")))?;
            let dir = match *dir {
                "fwd" => RewriteDir::Fwd,
                "bwd" => RewriteDir::Bwd,
                other => return err(format!("bad direction `{other}`")),
            };
            Ok(Justification::Rewrite {
                j: index(j)?,
                rule,
                path,
                dir,
            })
        }
        ["copy", j] => Ok(Justification::Copy(index(j)?)),
        _ => err(format!("cannot parse justification `{text}`")),
    }
}

/// Parses a proof file. Structural validation is included, so a returned
/// proof is ready for semantic checking.
pub fn parse_proof(src: &str) -> Result<Proof, ParseError> {
    let proof = parse_proof_document(src)?;
    proof.validate().map_err(|m| ParseError::at(0, m))?;
    Ok(proof)
}

/// Parses headers, inputs and lines without structural validation.
/// Axiom files (inputs only, no lines) are legal here.
pub fn parse_proof_document(src: &str) -> Result<Proof, ParseError> {
    let mut system = None;
    let mut field = None;
    let mut nvars = None;
    let mut order = None;
    let mut inputs: Vec<Arc<Formula>> = Vec::new();
    let mut lines: Vec<ProofLine> = Vec::new();

    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let text = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if text.is_empty() {
            continue;
        }
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| ParseError::at(lineno, "expected `key: value`"))?;
        let head = head.trim();
        let rest = rest.trim();
        match head {
            "system" => {
                system = Some(ProofSystem::from_str_opt(rest).ok_or_else(|| {
                    ParseError::at(lineno, format!("unknown system `{rest}`"))
                })?);
            }
            "field" => {
                field = Some(if rest == "Q" {
                    FieldSpec::Rationals
                } else if let Some(p) = rest.strip_prefix("GF") {
                    let p: u64 = p
                        .trim()
                        .parse()
                        .map_err(|_| ParseError::at(lineno, format!("bad modulus `{rest}`")))?;
                    FieldSpec::prime(p).map_err(|e| ParseError::at(lineno, e.to_string()))?
                } else {
                    return Err(ParseError::at(lineno, format!("unknown field `{rest}`")));
                });
            }
            "vars" => {
                nvars = Some(
                    rest.parse::<u32>()
                        .map_err(|_| ParseError::at(lineno, format!("bad vars `{rest}`")))?,
                );
            }
            "order" => {
                let n = nvars.ok_or_else(|| ParseError::at(lineno, "order before vars"))?;
                order = Some(if rest == "default" {
                    Order::default_order()
                } else {
                    let positions: Option<Vec<u32>> =
                        rest.split_whitespace().map(|t| t.parse().ok()).collect();
                    let positions = positions
                        .ok_or_else(|| ParseError::at(lineno, "bad order positions"))?;
                    if positions.len() != n as usize {
                        return Err(ParseError::at(
                            lineno,
                            format!("order needs {n} positions"),
                        ));
                    }
                    Order::from_positions(positions)
                        .ok_or_else(|| ParseError::at(lineno, "order is not a permutation"))?
                });
            }
            _ if head.starts_with("input") => {
                let (f, n) = (
                    field.ok_or_else(|| ParseError::at(lineno, "input before field"))?,
                    nvars.ok_or_else(|| ParseError::at(lineno, "input before vars"))?,
                );
                let j: usize = head["input".len()..]
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::at(lineno, "bad input index"))?;
                if j != inputs.len() + 1 {
                    return Err(ParseError::at(
                        lineno,
                        format!("expected input {}", inputs.len() + 1),
                    ));
                }
                let formula = parse_formula(rest, f, Some(n))
                    .map_err(|e| ParseError::at(lineno, e.to_string()))?;
                inputs.push(formula);
            }
            _ if head.starts_with("line") => {
                let (f, n) = (
                    field.ok_or_else(|| ParseError::at(lineno, "line before field"))?,
                    nvars.ok_or_else(|| ParseError::at(lineno, "line before vars"))?,
                );
                let i: usize = head["line".len()..]
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::at(lineno, "bad line index"))?;
                if i != lines.len() + 1 {
                    return Err(ParseError::at(
                        lineno,
                        format!("expected line {}", lines.len() + 1),
                    ));
                }
                let (ftext, jtext) = rest
                    .split_once(';')
                    .ok_or_else(|| ParseError::at(lineno, "missing `; justification`"))?;
                let formula = parse_formula(ftext.trim(), f, Some(n))
                    .map_err(|e| ParseError::at(lineno, e.to_string()))?;
                let just = parse_justification(jtext.trim(), f, lineno)?;
                lines.push(ProofLine { formula, just });
            }
            other => {
                return Err(ParseError::at(lineno, format!("unknown key `{other}`")));
            }
        }
    }

    Ok(Proof {
        system: system.ok_or_else(|| ParseError::at(0, "missing system header"))?,
        field: field.ok_or_else(|| ParseError::at(0, "missing field header"))?,
        nvars: nvars.ok_or_else(|| ParseError::at(0, "missing vars header"))?,
        order: order.unwrap_or_default(),
        inputs,
        lines,
    })
}
