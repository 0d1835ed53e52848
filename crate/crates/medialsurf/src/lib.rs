//! Parametric skeletal modeling of voxel volumes.
//!
//! `medialsurf` turns a binary voxel volume into a compact skeletal
//! representation (medial spheres organized as a simplicial complex) and
//! reconstructs a smooth, watertight surface mesh from it via convolution
//! surfaces. The stages are exposed as independent, composable operations:
//!
//! 1. [`grid`] — voxel lattices, exact Euclidean distance transforms,
//!    distance-field regularization, discrete Laplacians, overlap metrics.
//! 2. [`mat`] — medial-axis candidate extraction from a distance field
//!    (crisp and sigmoid-relaxed ridge criteria), pruning, radius editing.
//! 3. [`skeleton`] — the weighted alpha complex (power-diagram nerve) over
//!    the medial spheres, edge-collapse simplification, leaf interface
//!    detection, and connectivity-based clustering.
//! 4. [`convsurf`] — an analytic convolution field over the skeleton:
//!    kernel, segment/triangle quadrature, field and gradient evaluation.
//! 5. [`mesher`] — field sampling, oriented point cloud extraction and
//!    refinement, marching-cubes meshing, watertightness checks and
//!    voxelization.
//! 6. [`losses`] — differentiable field losses (soft Dice, stochastic
//!    distance, Laplacian, ridge-weighted) with closed-form gradients and a
//!    finite-difference checker.
//!
//! File I/O (MetaImage volumes, PLY/OBJ meshes, JSON skeletons) lives in
//! [`io`], synthetic test shapes in [`phantom`], and the end-to-end chain in
//! [`pipeline`]. Each major capability has a runnable example under
//! `examples/`; the `medialsurf` binary wraps the same operations as batch
//! subcommands.

pub mod config;
pub mod convsurf;
pub mod error;
pub mod grid;
pub mod io;
pub mod losses;
pub mod mat;
pub mod mesher;
pub mod phantom;
pub mod pipeline;
pub mod skeleton;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
