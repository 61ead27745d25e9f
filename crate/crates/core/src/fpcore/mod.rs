//! Finitely presented groups: coset enumeration, subgroup presentations,
//! Tietze simplification, abelianization, and homomorphism counts.

mod abelian;
mod coset;
mod finite;
mod homs;
mod schreier;
mod tietze;

pub use abelian::{abelianization, exponent_sum_rows, smith_invariants, AbelianInvariants};
pub use coset::{coset_table_from_hom, todd_coxeter, CosetTable, CosetTableExport};
pub use finite::{default_panel, FiniteGroup, CAYLEY_LIMIT};
pub use homs::{fingerprint, fingerprint_with, hom_count, hom_count_with, Fingerprint, DEFAULT_HOM_GUARD};
pub use schreier::{reidemeister_schreier, SchreierRewriter};
pub use tietze::{tietze_simplify, Simplified, TietzeOptions};


use thiserror::Error;

use crate::words::WordError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("coset enumeration exceeded the limit of {0} cosets")]
    LimitExceeded(usize),
    #[error("relator {index} ({relator}) is not satisfied by the images")]
    RelatorViolation { index: usize, relator: String },
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("word {0} does not lie in the subgroup")]
    NotInSubgroup(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("unknown group descriptor {0:?}")]
    BadDescriptor(String),
    #[error(transparent)]
    Word(#[from] WordError),
}
