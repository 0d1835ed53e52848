//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimensions mismatch: {0:?} vs {1:?}")]
    DimsMismatch([usize; 3], [usize; 3]),

    #[error("grid spacing is anisotropic beyond {tolerance:.1}% ({spacing:?}); resample first")]
    Anisotropic { spacing: [f64; 3], tolerance: f64 },

    #[error("no background reference: mask has no zero voxel, distance is undefined")]
    NoBackground,

    #[error("mask is empty (no foreground voxel)")]
    EmptyMask,

    #[error("medial cloud is empty")]
    EmptyCloud,

    #[error("skeleton complex has no edges")]
    NoEdges,

    #[error("skeleton complex is disconnected")]
    Disconnected,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("ground-truth bin {bin} exceeds the {k} available distance classes")]
    BinOutOfRange { bin: usize, k: usize },

    #[error("axis {0} has fewer than 3 voxels; stencil is undefined")]
    DegenerateAxis(usize),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("kernel radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
