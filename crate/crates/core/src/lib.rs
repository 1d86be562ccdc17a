//! Exact experiments on quadratic residues in prime fields: residue tables,
//! set algebra over F_p, packing numbers, energies, character sums, and a
//! sweep harness that checks inequalities instance by instance.

pub mod bounds;
pub mod charsum;
pub mod energy;
pub mod field;
pub mod fpset;
pub mod gaps;
pub mod harness;
pub mod report;
pub mod shifted;
pub mod structure;

pub use field::{Class, FieldError, PrimeContext};
pub use fpset::{FpSet, Run, RunList, SetError};
pub use report::BoundCheck;
