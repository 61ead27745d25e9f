//! Exact-arithmetic toolkit for the Bianchi group `PSL_2(Z[i])`, its
//! principal congruence subgroups, and the link groups they define.
//!
//! The modules build on each other bottom-up: [`quadint`] and [`matgroup`]
//! provide the arithmetic, [`words`] the presentations, [`congruence`] the
//! subgroup `Gamma(alpha)`, [`fpcore`] the finitely presented group
//! machinery, and [`fillpipe`] the Dehn filling computation.

pub mod congruence;
pub mod covers;
pub mod fillpipe;
pub mod fpcore;
pub mod geombounds;
pub mod matgroup;
pub mod par;
pub mod perm;
pub mod quadint;
pub mod words;

pub use matgroup::{GaussMat, ProjMat};
pub use perm::{GroupElem, Perm};
pub use quadint::QuadInt;
pub use words::{Presentation, Word};
