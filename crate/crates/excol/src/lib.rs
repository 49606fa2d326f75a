//! Computational workbench for quiver algebras with ordered vertices,
//! exceptional collections of modules, and their geometric realizations.

pub mod collections;
pub mod field;
pub mod linalg;
pub mod module;
pub mod ncplane;
pub mod poly;
pub mod quiver;
pub mod realize;
pub mod surface;
