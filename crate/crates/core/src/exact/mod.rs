//! Exact arithmetic in ℤ[1/m] and 2×2 matrices over ℤ[1/m] and ℤ/rℤ.

mod mat2;
mod mfraction;
mod residue;

pub use mat2::{mat_a, mat_b, mat_q, mat_u, Mat2M};
pub use mfraction::{EuclideanNorm, MFraction};
pub use residue::{mod_inverse, reduce_fraction, reduce_mod_r, ResidueMat2};
