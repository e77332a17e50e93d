//! Exact computations for braided vector spaces and the tensor, quantum
//! shuffle and Nichols algebras they generate: word-length and weight
//! filtrations, bar-complex homology with filtration spectral sequences,
//! and Hurwitz-space cohomology data for group/conjugacy-class inputs.

pub mod algebra;
#[cfg(feature = "cli")]
pub mod cli;
pub mod braided;
pub mod combinat;
pub mod error;
pub mod filtration;
pub mod homology;
pub mod hurwitz;
pub mod input;
pub mod linalg;
pub mod modular;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{FieldDesc, Scalar, Q};

/// Maps over a slice, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}
