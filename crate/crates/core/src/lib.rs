//! Transfer ideals in the character rings of finite abelian p-groups.
//!
//! The ring `Z[A*]` of virtual characters of a finite abelian p-group `A`
//! models its p-adic K-theory. The ideal `I_tr` generated by transfers from
//! proper subgroups is encoded as an integer lattice, and the quotient
//! `Z[A*] / I_tr` is classified with exact Smith normal forms. For rank at
//! least two the quotient is a nonzero F_p-algebra, so it has p-torsion; for
//! cyclic groups it is free.
//!
//! Modules, bottom up:
//! - [`groups`]: groups, duals, subgroup lattices, surjections onto `(Z/p)^2`.
//! - [`intlin`]: Hermite/Smith normal forms and quotient structure.
//! - [`charring`]: `Z[S*]` with restriction and transfer.
//! - [`classfun`]: cyclotomic integers, class functions, the character map.
//! - [`ideals`]: transfer ideals, quotient reports, torsion checks.
//! - [`transchromatic`]: per-tuple ideals over `A^(n-1)` and the verdict.
//! - [`exec`]: sequential or rayon-parallel evaluation of batches.

pub mod charring;
pub mod classfun;
pub mod error;
pub mod exec;
pub mod groups;
pub mod ideals;
pub mod intlin;
pub mod transchromatic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use groups::{FiniteAbelianPGroup, Subgroup, Surjection};
pub use intlin::QuotientStructure;
