//! Counting rational points of bounded height on Fano complete intersections
//! and del Pezzo models over `F_q(t)` by exhaustively enumerating the
//! `F_q`-points of the morphism spaces `Mor_e(P^1, X)`, together with the
//! pointwise line geometry (Fano fibres, Eckardt points, line types) and
//! exact degree-bound certificates that the counts are checked against.

pub mod certify;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod matrix;
pub mod morspace;
pub mod report;
pub mod variety;

pub use field::{Embedding, Field, FieldError, FqElem};
pub use forms::{MultiForm, UniPoly};
pub use variety::VarietySpec;
