//! Voxel lattices, exact distance transforms, and volume metrics.
//!
//! A [`VoxelGrid`] is an axis-aligned scalar lattice with physical spacing.
//! [`BinaryMask`] and [`UdfField`] are validated views of the same carrier:
//! masks hold exactly 0/1, distance fields hold non-negative integers in
//! voxel units (quantized Euclidean distance to the nearest background voxel
//! center, background itself at 0).

use crate::{Error, Result};
use nalgebra::Point3;
use rayon::prelude::*;

/// Offsets of the 26-connected neighborhood (all nonzero offsets in {-1,0,1}^3).
pub const NEIGHBORS_26: [[i64; 3]; 26] = {
    let mut out = [[0i64; 3]; 26];
    let mut n = 0;
    let mut dz = -1i64;
    while dz <= 1 {
        let mut dy = -1i64;
        while dy <= 1 {
            let mut dx = -1i64;
            while dx <= 1 {
                if dx != 0 || dy != 0 || dz != 0 {
                    out[n] = [dx, dy, dz];
                    n += 1;
                }
                dx += 1;
            }
            dy += 1;
        }
        dz += 1;
    }
    out
};

/// Offsets of the 6-connected (face) neighborhood.
pub const NEIGHBORS_6: [[i64; 3]; 6] = [
    [-1, 0, 0],
    [1, 0, 0],
    [0, -1, 0],
    [0, 1, 0],
    [0, 0, -1],
    [0, 0, 1],
];

/// Relative spacing deviation accepted as "isotropic".
pub const ISOTROPY_TOLERANCE: f64 = 0.01;

/// An axis-aligned 3D scalar lattice with physical spacing.
///
/// Data is stored x-fastest: `index = x + nx * (y + ny * z)`. Voxel `(0,0,0)`
/// has its center at `origin`; voxel `v` is centered at
/// `origin + v * spacing` (component-wise).
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    data: Vec<f64>,
}

impl VoxelGrid {
    /// Zero-filled grid.
    pub fn zeros(dims: [usize; 3], spacing: [f64; 3], origin: [f64; 3]) -> Result<Self> {
        Self::from_data(
            dims,
            spacing,
            origin,
            vec![0.0; dims[0] * dims[1] * dims[2]],
        )
    }

    pub fn from_data(
        dims: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        data: Vec<f64>,
    ) -> Result<Self> {
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidGrid(format!("zero dimension in {dims:?}")));
        }
        if spacing.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvalidGrid(format!(
                "non-positive spacing in {spacing:?}"
            )));
        }
        let n = dims[0] * dims[1] * dims[2];
        if data.len() != n {
            return Err(Error::InvalidGrid(format!(
                "data length {} does not match dims {dims:?} (expected {n})",
                data.len()
            )));
        }
        Ok(Self {
            dims,
            spacing,
            origin,
            data,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.dims[0] && y < self.dims[1] && z < self.dims[2]);
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[self.index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: f64) {
        let i = self.index(x, y, z);
        self.data[i] = v;
    }

    /// Voxel coordinates of a flat index.
    #[inline]
    pub fn coords(&self, index: usize) -> [usize; 3] {
        let x = index % self.dims[0];
        let y = (index / self.dims[0]) % self.dims[1];
        let z = index / (self.dims[0] * self.dims[1]);
        [x, y, z]
    }

    /// World-space center of voxel `v` (mm).
    #[inline]
    pub fn world(&self, v: [usize; 3]) -> Point3<f64> {
        Point3::new(
            self.origin[0] + v[0] as f64 * self.spacing[0],
            self.origin[1] + v[1] as f64 * self.spacing[1],
            self.origin[2] + v[2] as f64 * self.spacing[2],
        )
    }

    /// Same dims, spacing and origin as `other`.
    pub fn same_layout(&self, other: &VoxelGrid) -> bool {
        self.dims == other.dims && self.spacing == other.spacing && self.origin == other.origin
    }

    pub fn check_same_dims(&self, other: &VoxelGrid) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch(self.dims, other.dims));
        }
        Ok(())
    }

    /// Errors unless spacing is isotropic within [`ISOTROPY_TOLERANCE`].
    pub fn check_isotropic(&self) -> Result<()> {
        let mn = self.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
        let mx = self.spacing.iter().cloned().fold(0.0f64, f64::max);
        if mx / mn > 1.0 + ISOTROPY_TOLERANCE {
            return Err(Error::Anisotropic {
                spacing: self.spacing,
                tolerance: ISOTROPY_TOLERANCE * 100.0,
            });
        }
        Ok(())
    }

    /// Grid with the same layout, data produced by `f(index, value)`.
    pub fn map(&self, f: impl Fn(usize, f64) -> f64 + Sync) -> VoxelGrid {
        let mut out = self.clone();
        out.data
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, v)| *v = f(i, *v));
        out
    }
}

/// A [`VoxelGrid`] whose values are exactly 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask(VoxelGrid);

impl BinaryMask {
    pub fn from_grid(grid: VoxelGrid) -> Result<Self> {
        if grid.data.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidGrid(
                "mask values must be exactly 0 or 1".into(),
            ));
        }
        Ok(Self(grid))
    }

    /// Build from a predicate over voxel coordinates.
    pub fn from_fn(
        dims: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        f: impl Fn([usize; 3]) -> bool,
    ) -> Result<Self> {
        let mut g = VoxelGrid::zeros(dims, spacing, origin)?;
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    if f([x, y, z]) {
                        g.set(x, y, z, 1.0);
                    }
                }
            }
        }
        Ok(Self(g))
    }

    pub fn grid(&self) -> &VoxelGrid {
        &self.0
    }

    pub fn into_grid(self) -> VoxelGrid {
        self.0
    }

    pub fn count_foreground(&self) -> usize {
        self.0.data.iter().filter(|&&v| v == 1.0).count()
    }
}

/// A [`VoxelGrid`] of non-negative integer distances in voxel units.
#[derive(Debug, Clone, PartialEq)]
pub struct UdfField(VoxelGrid);

impl UdfField {
    pub fn from_grid(grid: VoxelGrid) -> Result<Self> {
        if grid
            .data
            .iter()
            .any(|&v| !(v >= 0.0) || v.fract() != 0.0 || !v.is_finite())
        {
            return Err(Error::InvalidGrid(
                "distance field values must be non-negative integers".into(),
            ));
        }
        Ok(Self(grid))
    }

    pub fn grid(&self) -> &VoxelGrid {
        &self.0
    }

    pub fn into_grid(self) -> VoxelGrid {
        self.0
    }

    /// Largest distance value present.
    pub fn max_value(&self) -> u32 {
        self.0.data.iter().cloned().fold(0.0f64, f64::max) as u32
    }

    /// Number of distance classes needed to represent this field (max + 1).
    pub fn num_bins(&self) -> usize {
        self.max_value() as usize + 1
    }

    /// Every voxel with value k > 0 has a 26-neighbor with value exactly k - 1.
    pub fn satisfies_descent(&self) -> bool {
        let g = &self.0;
        let [nx, ny, nz] = g.dims;
        for z in 0..nz {
            for y in 0..ny {
                for x in 0..nx {
                    let u = g.at(x, y, z);
                    if u <= 0.0 {
                        continue;
                    }
                    let mut ok = false;
                    for d in NEIGHBORS_26 {
                        let (qx, qy, qz) = (
                            x as i64 + d[0],
                            y as i64 + d[1],
                            z as i64 + d[2],
                        );
                        if qx < 0 || qy < 0 || qz < 0 {
                            continue;
                        }
                        let (qx, qy, qz) = (qx as usize, qy as usize, qz as usize);
                        if qx >= nx || qy >= ny || qz >= nz {
                            continue;
                        }
                        if g.at(qx, qy, qz) == u - 1.0 {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Exact Euclidean distance transform
// ---------------------------------------------------------------------------

const INF: f64 = 1e30;

/// One-dimensional squared distance transform (lower envelope of parabolas).
fn dt_1d(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n]; // parabola sites
    let mut z = vec![0.0f64; n + 1]; // envelope boundaries
    let mut k = 0usize;
    z[0] = -INF;
    z[1] = INF;
    for q in 1..n {
        if f[q] >= INF {
            continue;
        }
        loop {
            let p = v[k];
            if f[p] >= INF {
                // seed: no finite parabola yet
                if k == 0 {
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
                k -= 1;
                continue;
            }
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = INF;
                break;
            }
        }
    }
    // handle the case where f[0] is the only candidate or all INF
    if f[v[0]] >= INF {
        for o in out.iter_mut() {
            *o = INF;
        }
        return;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        out[q] = d * d + f[p];
    }
}

/// Squared Euclidean distance (voxel units) to the nearest zero-marked site.
///
/// `seed` holds 0 at sites and `INF`-like values elsewhere; separable
/// three-pass transform, exact for integer lattices.
fn edt_squared(mask: &BinaryMask) -> Vec<f64> {
    let g = mask.grid();
    let [nx, ny, nz] = g.dims();
    let mut d: Vec<f64> = g
        .data()
        .iter()
        .map(|&v| if v == 0.0 { 0.0 } else { INF })
        .collect();

    // x pass
    d.par_chunks_mut(nx).for_each(|row| {
        let f = row.to_vec();
        dt_1d(&f, row);
    });

    // y pass
    let mut d2 = vec![0.0f64; d.len()];
    d2.par_chunks_mut(nx * ny)
        .zip(d.par_chunks(nx * ny))
        .for_each(|(slab_out, slab_in)| {
            let mut f = vec![0.0f64; ny];
            let mut o = vec![0.0f64; ny];
            for x in 0..nx {
                for y in 0..ny {
                    f[y] = slab_in[x + nx * y];
                }
                dt_1d(&f, &mut o);
                for y in 0..ny {
                    slab_out[x + nx * y] = o[y];
                }
            }
        });

    // z pass: columns are strided, gather/scatter per (x, y), parallel over y
    let plane = nx * ny;
    let mut out = vec![0.0f64; d.len()];
    let d2ref = &d2;
    let cols: Vec<Vec<f64>> = (0..ny)
        .into_par_iter()
        .map(|y| {
            let mut colbuf = vec![0.0f64; nz * nx];
            let mut f = vec![0.0f64; nz];
            let mut o = vec![0.0f64; nz];
            for x in 0..nx {
                for z in 0..nz {
                    f[z] = d2ref[x + nx * y + plane * z];
                }
                dt_1d(&f, &mut o);
                for z in 0..nz {
                    colbuf[x * nz + z] = o[z];
                }
            }
            colbuf
        })
        .collect();
    for y in 0..ny {
        for x in 0..nx {
            for z in 0..nz {
                out[x + nx * y + plane * z] = cols[y][x * nz + z];
            }
        }
    }
    out
}

/// Quantized unsigned distance field of a mask.
///
/// Foreground voxels get `floor(d + 0.5)` where `d` is the exact Euclidean
/// distance (voxel units) to the nearest background voxel center; background
/// stays 0. Requires near-isotropic spacing; an all-foreground mask has no
/// background reference and errors.
pub fn compute_udf(mask: &BinaryMask) -> Result<UdfField> {
    mask.grid().check_isotropic()?;
    let any_bg = mask.grid().data().iter().any(|&v| v == 0.0);
    let any_fg = mask.grid().data().iter().any(|&v| v == 1.0);
    if any_fg && !any_bg {
        return Err(Error::NoBackground);
    }
    if !any_fg {
        return Ok(UdfField(VoxelGrid::zeros(
            mask.grid().dims(),
            mask.grid().spacing(),
            mask.grid().origin(),
        )?));
    }
    let sq = edt_squared(mask);
    let mut out = mask.grid().clone();
    out.data_mut()
        .par_iter_mut()
        .zip(sq.par_iter())
        .for_each(|(v, &d2)| {
            *v = if *v == 0.0 {
                0.0
            } else {
                (d2.sqrt() + 0.5).floor()
            };
        });
    Ok(UdfField(out))
}

/// Elementwise product of a distance field with a mask.
pub fn mask_udf(udf: &UdfField, mask: &BinaryMask) -> Result<UdfField> {
    udf.grid().check_same_dims(mask.grid())?;
    let mut out = udf.grid().clone();
    out.data_mut()
        .iter_mut()
        .zip(mask.grid().data())
        .for_each(|(u, &m)| *u *= m);
    Ok(UdfField(out))
}

/// Maximum number of repair sweeps before giving up (degenerate inputs with
/// no background never stabilize).
fn regularize_sweep_cap(udf: &UdfField) -> usize {
    let [nx, ny, nz] = udf.grid().dims();
    udf.max_value() as usize + nx + ny + nz + 8
}

/// Restores local coherence of a distance field.
///
/// A well-formed quantized distance field descends by exactly one somewhere
/// in each voxel's 26-neighborhood. Voxels violating that premise (no
/// neighbor at `u - 1`) are recomputed as `min(neighbors) + 1`; synchronous
/// sweeps repeat until a fixed point. Fields already satisfying the descent
/// invariant pass through unchanged, and the operation is idempotent.
pub fn regularize_udf(udf: &UdfField) -> UdfField {
    let g = udf.grid();
    let [nx, ny, nz] = g.dims();
    let mut cur = g.data().to_vec();
    let mut next = cur.clone();
    let cap = regularize_sweep_cap(udf);

    for _ in 0..cap {
        let mut changed = false;
        for z in 0..nz {
            for y in 0..ny {
                for x in 0..nx {
                    let i = x + nx * (y + ny * z);
                    let u = cur[i];
                    if u <= 0.0 {
                        next[i] = 0.0;
                        continue;
                    }
                    let mut min_n = f64::INFINITY;
                    let mut has_step = false;
                    for d in NEIGHBORS_26 {
                        let (qx, qy, qz) =
                            (x as i64 + d[0], y as i64 + d[1], z as i64 + d[2]);
                        if qx < 0
                            || qy < 0
                            || qz < 0
                            || qx >= nx as i64
                            || qy >= ny as i64
                            || qz >= nz as i64
                        {
                            continue;
                        }
                        let w = cur[qx as usize + nx * (qy as usize + ny * qz as usize)];
                        if w < min_n {
                            min_n = w;
                        }
                        if w == u - 1.0 {
                            has_step = true;
                        }
                    }
                    if has_step || min_n.is_infinite() {
                        next[i] = u;
                    } else {
                        next[i] = min_n + 1.0;
                        changed = true;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        if !changed {
            break;
        }
    }

    UdfField(
        VoxelGrid::from_data(g.dims(), g.spacing(), g.origin(), cur)
            .expect("layout preserved"),
    )
}

/// 7-point finite-difference Laplacian with replicate (clamp) boundary.
///
/// Values are in field units per voxel squared; every axis needs at least
/// 3 voxels.
pub fn laplacian(field: &VoxelGrid) -> Result<VoxelGrid> {
    let [nx, ny, nz] = field.dims();
    for (axis, &n) in [nx, ny, nz].iter().enumerate() {
        if n < 3 {
            return Err(Error::DegenerateAxis(axis));
        }
    }
    let data = field.data();
    let mut out = field.clone();
    let idx = |x: usize, y: usize, z: usize| x + nx * (y + ny * z);
    out.data_mut()
        .par_iter_mut()
        .enumerate()
        .for_each(|(i, o)| {
            let x = i % nx;
            let y = (i / nx) % ny;
            let z = i / (nx * ny);
            let c = data[i];
            let xp = data[idx(if x + 1 < nx { x + 1 } else { x }, y, z)];
            let xm = data[idx(x.saturating_sub(1), y, z)];
            let yp = data[idx(x, if y + 1 < ny { y + 1 } else { y }, z)];
            let ym = data[idx(x, y.saturating_sub(1), z)];
            let zp = data[idx(x, y, if z + 1 < nz { z + 1 } else { z })];
            let zm = data[idx(x, y, z.saturating_sub(1))];
            *o = xp + xm + yp + ym + zp + zm - 6.0 * c;
        });
    Ok(out)
}

/// Dice overlap coefficient, `2|A∩B| / (|A|+|B|)`; 1 when both masks are empty.
pub fn dice(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    a.grid().check_same_dims(b.grid())?;
    let mut inter = 0usize;
    let mut total = 0usize;
    for (&x, &y) in a.grid().data().iter().zip(b.grid().data()) {
        if x == 1.0 && y == 1.0 {
            inter += 1;
        }
        total += (x == 1.0) as usize + (y == 1.0) as usize;
    }
    if total == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * inter as f64 / total as f64)
}

/// Foreground voxels with a background (or out-of-grid) face neighbor.
fn surface_voxels(mask: &BinaryMask) -> Vec<[usize; 3]> {
    let g = mask.grid();
    let [nx, ny, nz] = g.dims();
    let mut out = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if g.at(x, y, z) != 1.0 {
                    continue;
                }
                let mut boundary = false;
                for d in NEIGHBORS_6 {
                    let (qx, qy, qz) = (x as i64 + d[0], y as i64 + d[1], z as i64 + d[2]);
                    if qx < 0
                        || qy < 0
                        || qz < 0
                        || qx >= nx as i64
                        || qy >= ny as i64
                        || qz >= nz as i64
                        || g.at(qx as usize, qy as usize, qz as usize) == 0.0
                    {
                        boundary = true;
                        break;
                    }
                }
                if boundary {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Symmetric Hausdorff distance between foreground surface voxel sets, in mm.
pub fn hausdorff(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    a.grid().check_same_dims(b.grid())?;
    if a.count_foreground() == 0 || b.count_foreground() == 0 {
        return Err(Error::EmptyMask);
    }
    let sa = surface_voxels(a);
    let sb = surface_voxels(b);
    let sp = a.grid().spacing();
    let d2 = |p: &[usize; 3], q: &[usize; 3]| {
        let dx = (p[0] as f64 - q[0] as f64) * sp[0];
        let dy = (p[1] as f64 - q[1] as f64) * sp[1];
        let dz = (p[2] as f64 - q[2] as f64) * sp[2];
        dx * dx + dy * dy + dz * dz
    };
    let directed = |from: &[[usize; 3]], to: &[[usize; 3]]| -> f64 {
        from.par_iter()
            .map(|p| {
                to.iter()
                    .map(|q| d2(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    Ok(directed(&sa, &sb).max(directed(&sb, &sa)).sqrt())
}

/// Nearest-neighbor resample onto an isotropic lattice with the given spacing.
///
/// Preprocessing step for volumes whose stored spacing is anisotropic; the
/// physical extent is preserved, values are taken from the nearest source
/// voxel center.
pub fn resample_nearest(grid: &VoxelGrid, new_spacing: f64) -> Result<VoxelGrid> {
    if !(new_spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target spacing must be positive, got {new_spacing}"
        )));
    }
    let [nx, ny, nz] = grid.dims();
    let sp = grid.spacing();
    let extent = [
        nx as f64 * sp[0],
        ny as f64 * sp[1],
        nz as f64 * sp[2],
    ];
    let ndims = [
        (extent[0] / new_spacing).round().max(1.0) as usize,
        (extent[1] / new_spacing).round().max(1.0) as usize,
        (extent[2] / new_spacing).round().max(1.0) as usize,
    ];
    let mut out = VoxelGrid::zeros(ndims, [new_spacing; 3], grid.origin())?;
    for z in 0..ndims[2] {
        for y in 0..ndims[1] {
            for x in 0..ndims[0] {
                let sx = ((x as f64 * new_spacing / sp[0]).round() as usize).min(nx - 1);
                let sy = ((y as f64 * new_spacing / sp[1]).round() as usize).min(ny - 1);
                let sz = ((z as f64 * new_spacing / sp[2]).round() as usize).min(nz - 1);
                out.set(x, y, z, grid.at(sx, sy, sz));
            }
        }
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mask_from(dims: [usize; 3], ones: &[[usize; 3]]) -> BinaryMask {
        let mut g = unit_grid(dims);
        for &[x, y, z] in ones {
            g.set(x, y, z, 1.0);
        }
        BinaryMask::from_grid(g).unwrap()
    }

    #[test]
    fn udf_all_zero_mask_is_all_zero() {
        let m = mask_from([4, 4, 4], &[]);
        let u = compute_udf(&m).unwrap();
        assert!(u.grid().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn udf_single_voxel() {
        let m = mask_from([3, 3, 3], &[[1, 1, 1]]);
        let u = compute_udf(&m).unwrap();
        for z in 0..3 {
            for y in 0..3 {
                for x in 0..3 {
                    let expect = if [x, y, z] == [1, 1, 1] { 1.0 } else { 0.0 };
                    assert_eq!(u.grid().at(x, y, z), expect);
                }
            }
        }
    }

    #[test]
    fn udf_centered_cube() {
        // solid 7x7x7 cube in a 9x9x9 grid: center is 4 voxels from background
        let m = BinaryMask::from_fn([9, 9, 9], [1.0; 3], [0.0; 3], |[x, y, z]| {
            (1..=7).contains(&x) && (1..=7).contains(&y) && (1..=7).contains(&z)
        })
        .unwrap();
        let u = compute_udf(&m).unwrap();
        assert_eq!(u.grid().at(4, 4, 4), 4.0);
        let oracle = brute_force_udf(&m).unwrap();
        assert_eq!(u.grid().data(), oracle.grid().data());
    }

    #[test]
    fn udf_all_foreground_errors() {
        let m = BinaryMask::from_fn([3, 3, 3], [1.0; 3], [0.0; 3], |_| true).unwrap();
        assert!(matches!(compute_udf(&m), Err(Error::NoBackground)));
    }

    #[test]
    fn udf_rejects_anisotropic_spacing() {
        let g = VoxelGrid::zeros([4, 4, 4], [1.0, 1.0, 2.0], [0.0; 3]).unwrap();
        let m = BinaryMask::from_grid(g).unwrap();
        assert!(matches!(compute_udf(&m), Err(Error::Anisotropic { .. })));
    }

    #[test]
    fn udf_matches_brute_force_on_random_masks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let dims = [
                rng.gen_range(3..=12),
                rng.gen_range(3..=12),
                rng.gen_range(3..=12),
            ];
            let m = random_mask(&mut rng, dims, 0.6);
            match (compute_udf(&m), brute_force_udf(&m)) {
                (Ok(a), Some(b)) => assert_eq!(a.grid().data(), b.grid().data()),
                (Err(Error::NoBackground), None) => {}
                (a, b) => panic!("disagreement: {a:?} vs {}", b.is_some()),
            }
        }
    }

    #[test]
    fn udf_translation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // random blob in the interior, then shifted by one voxel in x
        let dims = [10, 9, 8];
        let mut base = vec![];
        for _ in 0..30 {
            base.push([
                rng.gen_range(2..6usize),
                rng.gen_range(2..6usize),
                rng.gen_range(2..5usize),
            ]);
        }
        let shifted: Vec<[usize; 3]> =
            base.iter().map(|&[x, y, z]| [x + 1, y, z]).collect();
        let u0 = compute_udf(&mask_from(dims, &base)).unwrap();
        let u1 = compute_udf(&mask_from(dims, &shifted)).unwrap();
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] - 1 {
                    assert_eq!(u0.grid().at(x, y, z), u1.grid().at(x + 1, y, z));
                }
            }
        }
    }

    #[test]
    fn mask_udf_identity_annihilator_and_pointwise() {
        let m = mask_from([4, 4, 4], &[[1, 1, 1], [2, 1, 1]]);
        let u = compute_udf(&m).unwrap();
        let ones = BinaryMask::from_fn([4, 4, 4], [1.0; 3], [0.0; 3], |_| true).unwrap();
        let zeros = mask_from([4, 4, 4], &[]);
        assert_eq!(mask_udf(&u, &ones).unwrap().grid().data(), u.grid().data());
        assert!(mask_udf(&u, &zeros)
            .unwrap()
            .grid()
            .data()
            .iter()
            .all(|&v| v == 0.0));
        // single voxel zeroed out
        let mut hole = ones.into_grid();
        hole.set(1, 1, 1, 0.0);
        let hole = BinaryMask::from_grid(hole).unwrap();
        let masked = mask_udf(&u, &hole).unwrap();
        assert_eq!(masked.grid().at(1, 1, 1), 0.0);
        assert_eq!(masked.grid().at(2, 1, 1), u.grid().at(2, 1, 1));
    }

    fn udf_from_values(dims: [usize; 3], vals: &[f64]) -> UdfField {
        let g = VoxelGrid::from_data(dims, [1.0; 3], [0.0; 3], vals.to_vec()).unwrap();
        UdfField::from_grid(g).unwrap()
    }

    #[test]
    fn regularize_spike_profile_1d() {
        let u = udf_from_values([5, 1, 1], &[0.0, 1.0, 5.0, 1.0, 0.0]);
        let r = regularize_udf(&u);
        assert_eq!(r.grid().data(), &[0.0, 1.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn regularize_keeps_descent_satisfying_fields() {
        let m = BinaryMask::from_fn([9, 9, 9], [1.0; 3], [0.0; 3], |[x, y, z]| {
            let d = [x, y, z]
                .iter()
                .map(|&c| (c as f64 - 4.0) * (c as f64 - 4.0))
                .sum::<f64>();
            d <= 16.0
        })
        .unwrap();
        let u = compute_udf(&m).unwrap();
        assert!(u.satisfies_descent());
        let r = regularize_udf(&u);
        assert_eq!(r.grid().data(), u.grid().data());
    }

    #[test]
    fn regularize_idempotent_and_descent_on_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let dims = [
                rng.gen_range(3..=8),
                rng.gen_range(3..=8),
                rng.gen_range(3..=8),
            ];
            let mut g = unit_grid(dims);
            for v in g.data_mut() {
                *v = if rng.gen_bool(0.3) {
                    0.0
                } else {
                    rng.gen_range(0..6) as f64
                };
            }
            let u = UdfField::from_grid(g).unwrap();
            let r = regularize_udf(&u);
            assert!(r.satisfies_descent(), "descent violated");
            let rr = regularize_udf(&r);
            assert_eq!(rr.grid().data(), r.grid().data(), "not idempotent");
        }
    }

    #[test]
    fn laplacian_constant_is_zero() {
        let mut g = unit_grid([5, 5, 5]);
        for v in g.data_mut() {
            *v = 3.25;
        }
        let l = laplacian(&g).unwrap();
        assert!(l.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_of_quadratic_is_six_in_interior() {
        let mut g = unit_grid([6, 6, 6]);
        for z in 0..6 {
            for y in 0..6 {
                for x in 0..6 {
                    g.set(x, y, z, (x * x + y * y + z * z) as f64);
                }
            }
        }
        let l = laplacian(&g).unwrap();
        for z in 1..5 {
            for y in 1..5 {
                for x in 1..5 {
                    assert_eq!(l.at(x, y, z), 6.0);
                }
            }
        }
    }

    #[test]
    fn laplacian_of_affine_is_zero_in_interior() {
        let mut g = unit_grid([5, 6, 7]);
        for z in 0..7 {
            for y in 0..6 {
                for x in 0..5 {
                    g.set(x, y, z, 2.0 * x as f64 - 3.0 * y as f64 + 0.5 * z as f64 + 1.0);
                }
            }
        }
        let l = laplacian(&g).unwrap();
        for z in 1..6 {
            for y in 1..5 {
                for x in 1..4 {
                    assert_eq!(l.at(x, y, z), 0.0);
                }
            }
        }
    }

    #[test]
    fn laplacian_matches_direct_stencil_on_random_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut g = unit_grid([6, 6, 6]);
        for v in g.data_mut() {
            *v = rng.gen_range(-2.0..2.0);
        }
        let l = laplacian(&g).unwrap();
        for z in 1..5 {
            for y in 1..5 {
                for x in 1..5 {
                    let expect = g.at(x + 1, y, z)
                        + g.at(x - 1, y, z)
                        + g.at(x, y + 1, z)
                        + g.at(x, y - 1, z)
                        + g.at(x, y, z + 1)
                        + g.at(x, y, z - 1)
                        - 6.0 * g.at(x, y, z);
                    assert!((l.at(x, y, z) - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn laplacian_degenerate_axis_errors() {
        let g = unit_grid([5, 2, 5]);
        assert!(matches!(laplacian(&g), Err(Error::DegenerateAxis(1))));
    }

    #[test]
    fn dice_examples() {
        let a = BinaryMask::from_fn([6, 6, 6], [1.0; 3], [0.0; 3], |[x, y, z]| {
            x < 2 && y < 2 && z < 2
        })
        .unwrap();
        assert_eq!(dice(&a, &a).unwrap(), 1.0);
        let b = BinaryMask::from_fn([6, 6, 6], [1.0; 3], [0.0; 3], |[x, y, z]| {
            x >= 4 && y >= 4 && z >= 4
        })
        .unwrap();
        assert_eq!(dice(&a, &b).unwrap(), 0.0);
        // 8-voxel cube against itself shifted so 4 voxels overlap
        let c = BinaryMask::from_fn([6, 6, 6], [1.0; 3], [0.0; 3], |[x, y, z]| {
            (1..3).contains(&x) && (1..3).contains(&y) && (2..4).contains(&z)
        })
        .unwrap();
        let d = BinaryMask::from_fn([6, 6, 6], [1.0; 3], [0.0; 3], |[x, y, z]| {
            (1..3).contains(&x) && (1..3).contains(&y) && (3..5).contains(&z)
        })
        .unwrap();
        assert_eq!(dice(&c, &d).unwrap(), 0.5);
        // both empty: convention 1
        let e = mask_from([6, 6, 6], &[]);
        assert_eq!(dice(&e, &e).unwrap(), 1.0);
    }

    #[test]
    fn hausdorff_examples() {
        let a = mask_from([8, 3, 3], &[[1, 1, 1]]);
        let b = mask_from([8, 3, 3], &[[4, 1, 1]]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&a, &b).unwrap(), 3.0);
        let empty = mask_from([8, 3, 3], &[]);
        assert!(matches!(hausdorff(&a, &empty), Err(Error::EmptyMask)));
    }

    #[test]
    fn hausdorff_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let dims = [7, 7, 7];
            let a = random_mask(&mut rng, dims, 0.3);
            let b = random_mask(&mut rng, dims, 0.3);
            if a.count_foreground() == 0 || b.count_foreground() == 0 {
                continue;
            }
            let h = hausdorff(&a, &b).unwrap();
            let sa = surface_voxels(&a);
            let sb = surface_voxels(&b);
            let mut expect = 0.0f64;
            for (from, to) in [(&sa, &sb), (&sb, &sa)] {
                for p in from.iter() {
                    let mut best = f64::INFINITY;
                    for q in to.iter() {
                        let d = (0..3)
                            .map(|i| (p[i] as f64 - q[i] as f64).powi(2))
                            .sum::<f64>();
                        best = best.min(d);
                    }
                    expect = expect.max(best);
                }
            }
            assert!((h - expect.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_preserves_extent() {
        let mut g = VoxelGrid::zeros([10, 10, 5], [1.0, 1.0, 2.0], [0.0; 3]).unwrap();
        for z in 0..5 {
            g.set(5, 5, z, 1.0);
        }
        let r = resample_nearest(&g, 1.0).unwrap();
        assert_eq!(r.dims(), [10, 10, 10]);
        assert!(r.check_isotropic().is_ok());
        assert_eq!(r.at(5, 5, 4), 1.0);
    }
}
