//! Exact projective geometry of hypersurfaces over finite fields.

pub mod bitslice;
pub mod bounds;
pub mod field;
pub mod geometry;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod projgeom;
pub mod search;

pub use field::{Elem, Field, FieldError};
pub use geometry::Hypersurface;
pub use monomial::Monomial;
pub use poly::{MultiPoly, PolyError, Projectivity};
pub use projgeom::{LinearSubspace, ProjPoint};
