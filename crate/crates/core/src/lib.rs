//! Phased matroids over the complex numbers: phases and hypersums,
//! phirotopes, canonical forms, and realizability of uniform phirotopes.

pub mod canonical;
pub mod cli;
pub mod cmatrix;
pub mod error;
pub mod json;
pub mod phase;
pub mod phirotope;
pub mod realize;
pub mod subsets;

pub use canonical::{
    canonical_spanning_forest, canonicalize, entry_phase, is_essentially_oriented, minor_phase, shuffle_sign,
    AssociatedBipartiteGraph, CanonicalizationResult, SpanningForest,
};
pub use cmatrix::{ComplexMatrix, Entry};
pub use error::{Error, Result};
pub use phase::{hypersum, triangle_solve, zero_in_hypersum, HypersumSet, Phase, Tolerance, TriangleEquation};
pub use phirotope::{GpViolation, Phirotope, Rephasing, UnderlyingMatroid};
pub use realize::{
    decide_realizability, normalize_to_tree, rank2_norm, reconstruct, verify, NonRealizability, RealizabilityVerdict,
    UnsupportedReason, Witness,
};
