//! Computational toolkit around `SL₂(ℤ[1/m])`: exact arithmetic over
//! ℤ[1/m], finitely presented groups, abelianization by Smith normal form,
//! Todd–Coxeter coset enumeration, matrix-group oracles and constructive
//! factorization into generators.

pub mod abelian;
pub mod campaign;
pub mod coset;
pub mod decompose;
pub mod error;
pub mod exact;
pub mod fp;
pub mod matgroups;
pub mod text;

pub use error::{Error, Result};
pub use exact::{MFraction, Mat2M, ResidueMat2};
pub use fp::{Generator, Presentation, Word};
