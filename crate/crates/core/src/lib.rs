//! Exact difference calculus over commutative unital rings.
//!
//! The crate provides difference quotient maps and their singular extensions
//! for polynomial maps, divided differences of curves, the scalar-extension
//! rings attached to fixed multi-time parameters, Carnot-group difference
//! quotients, and exact integral verifications — all in arbitrary-precision
//! arithmetic over rings built at runtime from a small descriptor language.

pub mod analytic;
pub mod carnot;
pub mod diffquot;
pub mod divdiff;
pub mod parse;
pub mod polymap;
pub mod rings;
pub mod sampling;
pub mod scalarext;
pub mod verify;

pub use polymap::{EvalMap, FnMap, Poly, PolyError, PolyMap};
pub use rings::{Ring, RingElement, RingError, RingSpec};
