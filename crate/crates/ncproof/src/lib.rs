//! Workbench for algebraic propositional proof systems over noncommutative
//! and ordered formulas: polynomial arithmetic, formula identity testing,
//! proof checking for PC / PCR / F-PC / NFPC / OFPC, executable proof
//! translations, and Nisan partial-derivative-matrix rank bounds.

pub mod check;
pub mod cli;
pub mod cpoly;
pub mod error;
pub mod field;
pub mod formula;
pub mod instances;
pub mod ncpoly;
pub mod order;
pub mod ordered;
pub mod pit;
pub mod proof;
pub mod rank;
pub mod translate;

pub use cpoly::{embed, multilinearize, substitute_family, tau_substitute, CPoly, Monomial};
pub use error::{AlgebraError, ExpandError, ParseError};
pub use field::{FieldElem, FieldSpec};
pub use formula::{homogeneous_component, parse_formula, Formula, DEFAULT_EXPAND_CAP};
pub use ncpoly::{NCPoly, Word};
pub use order::{Order, VarId};
