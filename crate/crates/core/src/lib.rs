//! Permutation groups, conjugacy classes, exact character tables and
//! string C-group representations.

pub mod catalog;
pub mod characters;
pub mod conjugacy;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod io;
pub mod perm;
pub mod stringc;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{ChainOptions, PermGroup, SearchBudget};
pub use perm::Permutation;
