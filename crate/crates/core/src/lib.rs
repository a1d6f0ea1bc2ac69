//! Quantum orthogonal groups: FRT relations, quantum group actions, exterior
//! fibers and Laplacian spectra.

pub mod field;
pub mod linalg;
pub mod frt;
pub mod ncpoly;
pub mod rewrite;
pub mod lemma;
pub mod cartan;
pub mod action;
pub mod rep;
pub mod verify;
pub mod exterior;
pub mod orbit;
pub mod spectrum;
