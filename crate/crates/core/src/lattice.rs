//! Cubic lattices, their reciprocal lattices, high-symmetry paths and the
//! light-cone classifier.
//!
//! Vertex labels of the cubic Brillouin zone (side `2π/a`):
//!
//! | label | coordinates (units of π/a) |
//! |-------|----------------------------|
//! | Γ     | (0, 0, 0)                  |
//! | X     | (1, 0, 0)                  |
//! | Z     | (0, 0, 1)                  |
//! | M     | (1, 1, 0)                  |
//! | R     | (0, 1, 1)                  |
//! | A     | (1, 1, 1)                  |
//!
//! The surface lattice of the (100) cut uses Γ, Y = (0,1,0), Z = (0,0,1) and
//! M = (0,1,1). Any label may be prefixed with `-` to negate it; `G` and
//! `Gamma` are accepted for Γ.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Bcc,
    Cub,
    Surface,
}

/// Direct and reciprocal bases plus the sublattice displacements of a
/// (possibly non-Bravais) lattice that is periodic in 3 or 2 dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    kind: LatticeKind,
    direct: Vec<Vec3>,
    reciprocal: Vec<Vec3>,
    sublattices: Vec<Vec3>,
}

impl LatticeGeometry {
    /// Body-centred cubic array as two interpenetrating simple-cubic
    /// sublattices displaced by `a(1,1,1)/2`.
    pub fn bcc() -> Self {
        Self::cubic(
            LatticeKind::Bcc,
            vec![Vec3::zeros(), Vec3::new(0.5, 0.5, 0.5)],
        )
    }

    /// Simple cubic (Bravais) array.
    pub fn cub() -> Self {
        Self::cubic(LatticeKind::Cub, vec![Vec3::zeros()])
    }

    fn cubic(kind: LatticeKind, sublattices: Vec<Vec3>) -> Self {
        let direct = vec![Vec3::x(), Vec3::y(), Vec3::z()];
        let reciprocal = reciprocal_3d(&direct);
        Self {
            kind,
            direct,
            reciprocal,
            sublattices,
        }
    }

    /// Lattice periodic along two in-plane vectors, with sites carrying full
    /// 3D positions (the out-of-plane coordinate is free).
    pub fn surface(a1: Vec3, a2: Vec3, sites: Vec<Vec3>) -> Result<Self> {
        let normal = a1.cross(&a2);
        if normal.norm() < 1e-12 {
            return Err(Error::Domain(
                "surface lattice vectors are collinear".into(),
            ));
        }
        if sites.is_empty() {
            return Err(Error::Domain(
                "surface lattice needs at least one site".into(),
            ));
        }
        let n = normal.normalize();
        let direct = vec![a1, a2];
        let full = reciprocal_3d(&[a1, a2, n]);
        Ok(Self {
            kind: LatticeKind::Surface,
            direct,
            reciprocal: vec![full[0], full[1]],
            sublattices: sites,
        })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn direct_basis(&self) -> &[Vec3] {
        &self.direct
    }

    pub fn reciprocal_basis(&self) -> &[Vec3] {
        &self.reciprocal
    }

    pub fn sublattice_displacements(&self) -> &[Vec3] {
        &self.sublattices
    }

    pub fn num_sublattices(&self) -> usize {
        self.sublattices.len()
    }

    /// Dimension of the Bloch matrix, three polarizations per sublattice.
    pub fn num_orbitals(&self) -> usize {
        3 * self.sublattices.len()
    }

    pub fn periodic_dimension(&self) -> usize {
        self.direct.len()
    }

    /// Unit normal of a surface lattice.
    pub fn normal(&self) -> Option<Vec3> {
        (self.direct.len() == 2).then(|| self.direct[0].cross(&self.direct[1]).normalize())
    }

    /// Unit-cell volume (bulk) or area (surface).
    pub fn cell_measure(&self) -> f64 {
        match self.direct.len() {
            3 => self.direct[0]
                .dot(&self.direct[1].cross(&self.direct[2]))
                .abs(),
            _ => self.direct[0].cross(&self.direct[1]).norm(),
        }
    }

    /// Coordinates of `k` in the reciprocal basis (units of `b_i`). Any
    /// out-of-plane component is ignored for surface lattices.
    pub fn reduced_k(&self, k: &Vec3) -> Vec<f64> {
        self.direct.iter().map(|a| a.dot(k) / (2.0 * PI)).collect()
    }

    /// Translate `k` by a reciprocal vector into the zone with reduced
    /// coordinates in `[-1/2, 1/2)`; for surface lattices the out-of-plane
    /// component is dropped.
    pub fn reduce_k(&self, k: &Vec3) -> Vec3 {
        let k = self.project_in_plane(k);
        let mut out = k;
        for (f, b) in self.reduced_k(&k).iter().zip(&self.reciprocal) {
            let shift = (f + 0.5).floor();
            out -= b * shift;
        }
        out
    }

    /// Remove the out-of-plane component (identity for bulk lattices).
    pub fn project_in_plane(&self, k: &Vec3) -> Vec3 {
        match self.normal() {
            Some(n) => k - n * n.dot(k),
            None => *k,
        }
    }

    /// Light-cone test `|k| < k₀` (in-plane norm for surface lattices).
    pub fn in_light_cone(&self, k: &Vec3, k0a: f64) -> bool {
        in_light_cone(&self.project_in_plane(k), k0a)
    }

    /// Named high-symmetry vertices of this lattice's zone.
    pub fn vertices(&self) -> Vec<(&'static str, Vec3)> {
        match self.kind {
            LatticeKind::Surface => vec![
                ("Γ", Vec3::zeros()),
                ("Y", Vec3::new(0.0, PI, 0.0)),
                ("Z", Vec3::new(0.0, 0.0, PI)),
                ("M", Vec3::new(0.0, PI, PI)),
            ],
            _ => vec![
                ("Γ", Vec3::zeros()),
                ("X", Vec3::new(PI, 0.0, 0.0)),
                ("Z", Vec3::new(0.0, 0.0, PI)),
                ("M", Vec3::new(PI, PI, 0.0)),
                ("R", Vec3::new(0.0, PI, PI)),
                ("A", Vec3::new(PI, PI, PI)),
            ],
        }
    }

    /// Look up a vertex label (`-` prefix negates).
    pub fn vertex(&self, label: &str) -> Result<Vec3> {
        let (sign, name) = match label.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, label),
        };
        let name = match name {
            "G" | "Gamma" | "GAMMA" => "Γ",
            other => other,
        };
        self.vertices()
            .into_iter()
            .find(|(l, _)| *l == name)
            .map(|(_, v)| v * sign)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

fn reciprocal_3d(direct: &[Vec3]) -> Vec<Vec3> {
    let m = Matrix3::from_columns(&[direct[0], direct[1], direct[2]]);
    let inv_t = m
        .try_inverse()
        .expect("degenerate direct basis")
        .transpose();
    (0..3).map(|i| inv_t.column(i) * (2.0 * PI)).collect()
}

/// Light-cone classifier with `ω ≈ ω₀`: inside iff `|k| < k₀`. The boundary
/// `|k| = k₀` counts as outside.
pub fn in_light_cone(k: &Vec3, k0a: f64) -> bool {
    k.norm() < k0a
}

/// A piecewise-linear path through named zone vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KPath {
    pub vertices: Vec<(String, Vec3)>,
    pub samples_per_segment: usize,
    pub points: Vec<Vec3>,
    /// Cumulative arc length, same length as `points`.
    pub arc_length: Vec<f64>,
    /// Index into `points` of each vertex.
    pub vertex_index: Vec<usize>,
}

impl KPath {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Equidistant sampling of the path `labels[0] → labels[1] → …` with
/// `samples` points per segment (endpoints included). Shared vertices appear
/// once; zero-length segments collapse.
pub fn high_symmetry_path(
    lattice: &LatticeGeometry,
    labels: &[impl AsRef<str>],
    samples: usize,
) -> Result<KPath> {
    if labels.is_empty() {
        return Err(Error::Domain("path needs at least one label".into()));
    }
    if samples < 2 && labels.len() > 1 {
        return Err(Error::Domain("need at least 2 samples per segment".into()));
    }
    let vertices = labels
        .iter()
        .map(|l| {
            lattice
                .vertex(l.as_ref())
                .map(|v| (l.as_ref().to_string(), v))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = vec![vertices[0].1];
    let mut arc_length = vec![0.0];
    let mut vertex_index = vec![0];
    for pair in vertices.windows(2) {
        let (start, end) = (pair[0].1, pair[1].1);
        let length = (end - start).norm();
        if length > 1e-14 {
            let s0 = *arc_length.last().unwrap();
            for i in 1..samples {
                let t = i as f64 / (samples - 1) as f64;
                points.push(start + (end - start) * t);
                arc_length.push(s0 + length * t);
            }
        }
        vertex_index.push(points.len() - 1);
    }
    Ok(KPath {
        vertices,
        samples_per_segment: samples,
        points,
        arc_length,
        vertex_index,
    })
}
