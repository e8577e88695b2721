//! Todd–Coxeter coset enumeration (HLT and Felsch) and the
//! `SL₂(ℤ/rℤ)` family cross-check.

mod corollary;
mod enumerate;
mod table;

pub use corollary::{verify_corollary, CorollaryReport};
pub use enumerate::{todd_coxeter, EnumLimits, EnumOptions, EnumOutcome, EnumStats, EnumStatus, LimitKind, Strategy};
pub use table::CosetTable;
