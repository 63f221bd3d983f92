//! Exact computer algebra for annihilators of neat even elements.
//!
//! The crate builds two finite-dimensional algebras over an exact field
//! (the rationals or GF(p)):
//!
//! * the squarefree quotient algebra `A = F[x1..xs] / (x1^2, .., xs^2)`,
//!   whose monomials are subsets of `{1..s}`;
//! * the exterior algebra `E(V)` on a block-decomposed space
//!   `V = V1 + .. + Vs` with even block sizes, into which `A` embeds by
//!   sending each generator to the full blade of its block.
//!
//! On top of those sit generator-family enumeration, exact dense linear
//! algebra (RREF, kernels, span arithmetic), and a verification engine that
//! computes annihilators of the neat element `mu = x1 + .. + xs`, compares
//! them with generated ideals, and certifies minimal generating sets via the
//! local-ring quotient `I/(m*I)`.

pub mod engine;
pub mod exterior;
pub mod generators;
pub mod linalg;
pub mod parse;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod squarefree;

pub use exterior::{Blade, BlockShape, EElement};
pub use linalg::{ScalarMatrix, SubspaceBasis};
pub use scalar::{Field, FieldElem, ScalarError};
pub use squarefree::{AElement, SqfMonomial};
