//! Projective planes over two-dimensional algebras over finite fields,
//! their Veronesean embeddings in PG(8,q), and mechanical checkers for the
//! axioms those embeddings satisfy.

pub mod bits;
pub mod gf;
pub mod projgeom;
pub mod quadalg;
pub mod report;
pub mod ringplane;
pub mod vsets;
pub mod axiomlab;
