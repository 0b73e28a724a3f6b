//! Geometric moments of point clouds and voxel grids: raw, central, and
//! scale-normalized.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::NamedInvariant;
use crate::variable::{MomentIndex, Variable};

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct WeightedPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl WeightedPoint {
    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self { x, y, z, w }
    }

    pub const fn unit(x: f64, y: f64, z: f64) -> Self {
        Self::new(x, y, z, 1.0)
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Weighted atoms. Rotations act on these exactly, which makes them the
/// primary input for invariance checks.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct PointCloud {
    pub points: Vec<WeightedPoint>,
}

impl PointCloud {
    pub fn new(points: Vec<WeightedPoint>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w).sum()
    }
}

impl FromIterator<WeightedPoint> for PointCloud {
    fn from_iter<T: IntoIterator<Item = WeightedPoint>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Dense density samples on a regular grid. `origin` is the center of the
/// cell `(0, 0, 0)`; `values` run with `x` fastest, then `y`, then `z`.
#[derive(Clone, PartialEq, Debug)]
pub struct VoxelGrid {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    values: Vec<f64>,
}

impl VoxelGrid {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], origin: [f64; 3], values: Vec<f64>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidGrid(format!("dimensions {dims:?} must be positive")));
        }
        if spacing.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidGrid(format!("spacing {spacing:?} must be positive")));
        }
        let n = dims[0] * dims[1] * dims[2];
        if values.len() != n {
            return Err(Error::InvalidGrid(format!("expected {n} values, got {}", values.len())));
        }
        Ok(Self { dims, spacing, origin, values })
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

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// One atom per cell at the cell center, carrying `value · dx·dy·dz`.
    /// Moments of this cloud are the midpoint-rule moments of the grid.
    pub fn to_point_cloud(&self) -> PointCloud {
        let [nx, ny, _] = self.dims;
        let [dx, dy, dz] = self.spacing;
        let cell = dx * dy * dz;
        self.values
            .iter()
            .enumerate()
            .map(|(n, v)| {
                let (i, j, k) = (n % nx, (n / nx) % ny, n / (nx * ny));
                WeightedPoint::new(
                    self.origin[0] + i as f64 * dx,
                    self.origin[1] + j as f64 * dy,
                    self.origin[2] + k as f64 * dz,
                    v * cell,
                )
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MomentKind {
    Raw,
    Central,
    Normalized,
}

impl MomentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::Raw => "raw",
            MomentKind::Central => "central",
            MomentKind::Normalized => "normalized",
        }
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for MomentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(MomentKind::Raw),
            "central" => Ok(MomentKind::Central),
            "normalized" => Ok(MomentKind::Normalized),
            other => Err(Error::Parse { offset: 0, message: format!("unknown moment kind `{other}`") }),
        }
    }
}

/// Moments `(p, q, r) → value` up to a maximum total order. Normalized
/// tensors hold only orders ≥ 2.
#[derive(Clone, PartialEq, Debug)]
pub struct MomentTensor {
    pub max_order: u32,
    pub kind: MomentKind,
    pub entries: BTreeMap<MomentIndex, f64>,
}

impl MomentTensor {
    pub fn get(&self, p: u32, q: u32, r: u32) -> Option<f64> {
        self.entries.get(&MomentIndex::new(p, q, r)).copied()
    }

    fn expect_kind(&self, kind: MomentKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongTensorKind { expected: kind.as_str(), found: self.kind.as_str() });
        }
        Ok(())
    }

    fn mass(&self) -> Result<f64> {
        let m = self.get(0, 0, 0).unwrap_or(0.0);
        if m > 0.0 {
            Ok(m)
        } else {
            Err(Error::NonPositiveMass)
        }
    }
}

/// All indices with `0 ≤ p+q+r ≤ max_order`, grouped by order.
fn indices_up_to(max_order: u32) -> Vec<MomentIndex> {
    (0..=max_order).flat_map(MomentIndex::of_order).collect()
}

const LEAF: usize = 16;

/// Power sums over `points` for every index, by pairwise (tree) summation.
fn pairwise_sums(points: &[WeightedPoint], indices: &[MomentIndex], max_order: u32) -> Vec<f64> {
    if points.len() <= LEAF {
        let mut acc = vec![0.0; indices.len()];
        let n = max_order as usize + 1;
        let mut pw = [vec![1.0; n], vec![1.0; n], vec![1.0; n]];
        for pt in points {
            for (axis, c) in pt.coords().into_iter().enumerate() {
                for e in 1..n {
                    pw[axis][e] = pw[axis][e - 1] * c;
                }
            }
            for (a, idx) in acc.iter_mut().zip(indices) {
                *a += pt.w * pw[0][idx.j as usize] * pw[1][idx.k as usize] * pw[2][idx.l as usize];
            }
        }
        return acc;
    }
    let (lo, hi) = points.split_at(points.len() / 2);
    let mut a = pairwise_sums(lo, indices, max_order);
    let b = pairwise_sums(hi, indices, max_order);
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// `m_pqr = Σ w·x^p·y^q·z^r` for all `p+q+r ≤ max_order`.
pub fn raw_moments(cloud: &PointCloud, max_order: u32) -> Result<MomentTensor> {
    if max_order < 2 {
        return Err(Error::MaxOrderTooSmall(max_order));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyData);
    }
    let indices = indices_up_to(max_order);
    let sums = pairwise_sums(&cloud.points, &indices, max_order);
    Ok(MomentTensor { max_order, kind: MomentKind::Raw, entries: indices.into_iter().zip(sums).collect() })
}

/// Midpoint-rule moments of a voxel grid.
pub fn raw_moments_grid(grid: &VoxelGrid, max_order: u32) -> Result<MomentTensor> {
    raw_moments(&grid.to_point_cloud(), max_order)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central moments about the centroid by binomial expansion of the raw
/// moments.
pub fn central_moments(raw: &MomentTensor) -> Result<MomentTensor> {
    raw.expect_kind(MomentKind::Raw)?;
    let m000 = raw.mass()?;
    let c = [raw.get(1, 0, 0).unwrap_or(0.0) / m000, raw.get(0, 1, 0).unwrap_or(0.0) / m000, raw.get(0, 0, 1).unwrap_or(0.0) / m000];
    let n = raw.max_order as usize + 1;
    let mut neg_pow = [vec![1.0; n], vec![1.0; n], vec![1.0; n]];
    for axis in 0..3 {
        for e in 1..n {
            neg_pow[axis][e] = neg_pow[axis][e - 1] * -c[axis];
        }
    }
    let mut entries = BTreeMap::new();
    for idx in indices_up_to(raw.max_order) {
        let value = match idx.order() {
            0 => m000,
            1 => 0.0,
            _ => {
                let mut sum = 0.0;
                for a in 0..=idx.j {
                    for b in 0..=idx.k {
                        for d in 0..=idx.l {
                            let m = raw.get(a, b, d).expect("raw tensor holds every lower index");
                            sum += binomial(idx.j, a)
                                * binomial(idx.k, b)
                                * binomial(idx.l, d)
                                * neg_pow[0][(idx.j - a) as usize]
                                * neg_pow[1][(idx.k - b) as usize]
                                * neg_pow[2][(idx.l - d) as usize]
                                * m;
                        }
                    }
                }
                sum
            }
        };
        entries.insert(idx, value);
    }
    Ok(MomentTensor { max_order: raw.max_order, kind: MomentKind::Central, entries })
}

/// `η_pqr = μ_pqr / μ_000^(1 + (p+q+r)/3)` for `2 ≤ p+q+r`.
pub fn normalized_moments(central: &MomentTensor) -> Result<MomentTensor> {
    central.expect_kind(MomentKind::Central)?;
    let mu000 = central.mass()?;
    let entries = central
        .entries
        .iter()
        .filter(|(idx, _)| idx.order() >= 2)
        .map(|(idx, mu)| (*idx, mu / libm::pow(mu000, 1.0 + idx.order() as f64 / 3.0)))
        .collect();
    Ok(MomentTensor { max_order: central.max_order, kind: MomentKind::Normalized, entries })
}

/// Normalized moments of a cloud. The cloud is first recentered on its
/// weighted mean so the binomial shift only corrects rounding residue; this
/// avoids the cancellation a far-off centroid would cause.
pub fn normalized_from_cloud(cloud: &PointCloud, max_order: u32) -> Result<MomentTensor> {
    let first = raw_moments(cloud, 2)?;
    let m = first.mass()?;
    let c = [first.get(1, 0, 0).unwrap_or(0.0) / m, first.get(0, 1, 0).unwrap_or(0.0) / m, first.get(0, 0, 1).unwrap_or(0.0) / m];
    let centered: PointCloud =
        cloud.points.iter().map(|p| WeightedPoint::new(p.x - c[0], p.y - c[1], p.z - c[2], p.w)).collect();
    normalized_moments(&central_moments(&raw_moments(&centered, max_order)?)?)
}

/// Value of an invariant with `a_{j,k,l}` (or `η_{j,k,l}`) replaced by the
/// normalized moments. The imaginary part must be below
/// `1e-12·(1 + |re|)` and is discarded.
pub fn evaluate_invariant(inv: &NamedInvariant, eta: &MomentTensor) -> Result<f64> {
    eta.expect_kind(MomentKind::Normalized)?;
    if inv.order > eta.max_order {
        return Err(Error::InsufficientOrder { needed: inv.order, available: eta.max_order });
    }
    let z = inv.polynomial.eval(|v: &Variable| match v {
        Variable::Moment(m) | Variable::Eta(m) => eta.entries.get(m).map(|x| Complex64::new(*x, 0.0)),
        Variable::Template(..) => None,
    })?;
    if libm::fabs(z.im) >= 1e-12 * (1.0 + libm::fabs(z.re)) {
        return Err(Error::NonRealValue(z.im));
    }
    Ok(z.re)
}
