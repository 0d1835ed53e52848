//! File formats: MetaImage volumes, PLY/OBJ meshes, JSON skeletons.

mod mhd;
mod mesh;

pub use mesh::{
    write_cloud_ply, write_mesh_obj, write_mesh_ply, Provenance,
};
pub use mhd::{read_mhd, write_mhd, ElementType};

use crate::mat::{MedialCloud, MedialSphere};
use crate::skeleton::{FlowInterface, SkeletonComplex};
use crate::{Error, Result};
use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct CloudJson {
    spheres: Vec<[f64; 4]>,
}

/// Write a medial cloud as `{"spheres": [[x,y,z,r], ...]}` (mm).
pub fn write_cloud_json(path: impl AsRef<Path>, cloud: &MedialCloud) -> Result<()> {
    let doc = CloudJson {
        spheres: cloud
            .spheres()
            .iter()
            .map(|s| [s.center.x, s.center.y, s.center.z, s.radius])
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn read_cloud_json(path: impl AsRef<Path>) -> Result<MedialCloud> {
    let text = std::fs::read_to_string(&path)?;
    let doc: CloudJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.as_ref().display().to_string(),
        message: e.to_string(),
    })?;
    let spheres = doc
        .spheres
        .iter()
        .map(|&[x, y, z, r]| MedialSphere::new(Point3::new(x, y, z), r))
        .collect::<Result<Vec<_>>>()?;
    MedialCloud::new(spheres)
}

#[derive(Serialize, Deserialize)]
struct SkeletonJson {
    vertices: Vec<[f64; 4]>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

/// Write a skeleton complex as JSON (vertices as `[x,y,z,r]`).
pub fn write_skeleton_json(path: impl AsRef<Path>, complex: &SkeletonComplex) -> Result<()> {
    let doc = SkeletonJson {
        vertices: complex
            .vertices()
            .iter()
            .map(|s| [s.center.x, s.center.y, s.center.z, s.radius])
            .collect(),
        edges: complex.edges().iter().map(|&(i, j)| [i, j]).collect(),
        triangles: complex
            .triangles()
            .iter()
            .map(|&(i, j, k)| [i, j, k])
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn read_skeleton_json(path: impl AsRef<Path>) -> Result<SkeletonComplex> {
    let text = std::fs::read_to_string(&path)?;
    let doc: SkeletonJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.as_ref().display().to_string(),
        message: e.to_string(),
    })?;
    let vertices = doc
        .vertices
        .iter()
        .map(|&[x, y, z, r]| MedialSphere::new(Point3::new(x, y, z), r))
        .collect::<Result<Vec<_>>>()?;
    SkeletonComplex::new(
        vertices,
        doc.edges.iter().map(|&[i, j]| (i, j)).collect(),
        doc.triangles.iter().map(|&[i, j, k]| (i, j, k)).collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct InterfaceJson {
    center: [f64; 3],
    normal: [f64; 3],
    radius: f64,
    leaf_vertex: usize,
}

/// Write flow interfaces as a JSON list of `{center, normal, radius, leaf_vertex}`.
pub fn write_interfaces_json(path: impl AsRef<Path>, interfaces: &[FlowInterface]) -> Result<()> {
    let doc: Vec<InterfaceJson> = interfaces
        .iter()
        .map(|f| InterfaceJson {
            center: [f.center.x, f.center.y, f.center.z],
            normal: [f.normal.x, f.normal.y, f.normal.z],
            radius: f.radius,
            leaf_vertex: f.leaf_vertex,
        })
        .collect();
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn read_interfaces_json(path: impl AsRef<Path>) -> Result<Vec<FlowInterface>> {
    let text = std::fs::read_to_string(&path)?;
    let doc: Vec<InterfaceJson> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.as_ref().display().to_string(),
        message: e.to_string(),
    })?;
    Ok(doc
        .iter()
        .map(|f| FlowInterface {
            center: Point3::new(f.center[0], f.center[1], f.center[2]),
            normal: Vector3::new(f.normal[0], f.normal[1], f.normal[2]),
            radius: f.radius,
            leaf_vertex: f.leaf_vertex,
        })
        .collect())
}
