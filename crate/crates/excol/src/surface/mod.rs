//! Exact sheaf-cohomology workbench on P^1 x P^1 and P^2: line bundles,
//! fiber sheaves, kernels of explicit surjections and extensions with
//! explicit classes, with Ext computations by long-exact-sequence
//! bookkeeping and explicit connecting maps.

pub mod bipoly;
pub mod build;
pub mod coh;
pub mod p2;
pub mod parse;

pub use bipoly::{parse_form, BiPoly, Mono};
pub use build::{
    build, build_atom, build_f_from, build_f_general, build_f_seeded, build_u, ext_pair,
    golden_phi, o, rhom_module, twist, BuiltSheaf, RHomReport, Recipe,
};
pub use coh::{coh_map, Sheaf};
pub use p2::{p2_f_mu, P2Report};
pub use parse::parse_recipe;

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum SurfaceError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("map is degenerate (fails a surjectivity precondition)")]
    DegenerateMap,
    #[error("recipe combination not supported by the LES engine")]
    UnsupportedRecipeDepth,
    #[error("cohomology is not concentrated in degree zero")]
    NotDegreeZero,
    #[error("module does not match the expected isomorphism type")]
    ModuleMismatch,
    #[error("tensor map drops rank at a point of the plane")]
    NotNondegenerate,
    #[error("elimination inconclusive up to degree {0}")]
    Inconclusive(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
