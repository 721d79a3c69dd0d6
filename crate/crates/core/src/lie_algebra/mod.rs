//! Exact arithmetic for the symmetry algebra `g = ⟨D, G, Pt, Px, Pv⟩ ⊕ ⟨W(Ω)⟩`.

mod adjoint;
mod aut;
mod linalg;
mod parse;
mod poly;
pub mod sample;
mod subspace;
mod two_d;
mod vector;

pub use adjoint::{adjoint_push, canonicalize_1d, replay, Canonical1D, Canonicalization, Family1D, GroupElement, WMap};
pub use aut::{AutMatrix, AutParams};
pub use poly::{q, qr, QPoly, Q};
pub use subspace::{megaideal_closure, nilradical_check, radical_check, standard, Subspace, WPart};
pub use two_d::{verify_2d_list, FamilyCheck, FAMILY_COUNT};
pub use vector::{basis_bracket, commutator, Basis, GVector};

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    /// Malformed algebra expression.
    #[error("cannot parse {input:?} at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("{0} is not closed under the bracket")]
    NotSubalgebra(String),
    /// Input outside the exactly supported range.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid automorphism matrix: {0}")]
    InvalidAutMatrix(String),
    #[error("dilation parameter must be nonzero")]
    ZeroDilation,
    #[error("invalid W reparametrization: {0}")]
    InvalidReparam(String),
    /// Non-affine reparametrization applied to an omega it cannot transport exactly.
    #[error("cannot transport W({omega}) by {map}")]
    UnsupportedTransport { omega: String, map: String },
    #[error("zero vector spans no subalgebra")]
    ZeroVector,
}

/// Fixed-point formatting of a rational, e.g. `-3/2`.
pub fn format_q(c: &Q) -> String {
    poly::fmt_q(c)
}
