//! Exact computations around Frobenius nonclassical hypersurfaces and
//! curves over finite fields.

pub mod counting;
pub mod curve;
pub mod error;
pub mod gf;
pub mod hypersurface;
pub mod mpoly;
pub mod projective;
pub mod separated;
pub mod series;
pub mod veronese;

pub use error::{Error, Result};
pub use gf::{make_field, parse_field, Embedding, FieldElement, FieldSpec};
pub use mpoly::{parse_poly, parse_rational, Monomial, MultiPoly};
