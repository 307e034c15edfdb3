//! CSV and JSON emitters. Every document starts with a metadata block:
//! `#`-prefixed `key: value` lines in CSV, a `meta` object in JSON.
//!
//! Floats are written in shortest round-trip form, so identical results give
//! byte-identical files.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::PhaseDiagram;
use crate::slab::{FermiArcs, SlabModel};
use crate::spectral::{BandTable, DosHistogram, EquifrequencyContour};
use crate::weyl::WeylNode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub code_version: String,
    pub schema_version: u32,
    pub command: String,
    /// Hex SHA-256 of the configuration document as read.
    pub config_sha256: String,
    /// Resolved run parameters.
    pub params: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &str, config_sha256: &str, params: serde_json::Value) -> Self {
        Self {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config_sha256: config_sha256.to_string(),
            params,
        }
    }

    fn header(&self) -> String {
        format!(
            "# code_version: {}\n# schema_version: {}\n# command: {}\n# config_sha256: {}\n# params: {}\n",
            self.code_version, self.schema_version, self.command, self.config_sha256, self.params
        )
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: &'a Metadata,
    data: &'a T,
}

pub fn json_document<T: Serialize>(meta: &Metadata, data: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { meta, data })
        .map_err(|e| Error::Domain(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn table(
    meta: &Metadata,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(meta.header().into_bytes());
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Domain(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per (k-point, band): `s, band, omega, gamma, in_light_cone`.
pub fn bands_csv(meta: &Metadata, bands: &BandTable) -> Result<String> {
    let rows = bands.samples.iter().flat_map(|s| {
        (0..s.frequencies.len()).map(move |b| {
            vec![
                num(s.s),
                b.to_string(),
                num(s.frequencies[b]),
                num(s.decay_rates[b]),
                s.in_light_cone.to_string(),
            ]
        })
    });
    table(
        meta,
        &["s", "band", "omega", "gamma", "in_light_cone"],
        rows,
    )
}

pub fn dos_csv(meta: &Metadata, dos: &DosHistogram) -> Result<String> {
    let rows = dos
        .bin_centers()
        .into_iter()
        .zip(dos.density())
        .map(|(c, d)| vec![num(c), num(d)]);
    table(meta, &["bin_center", "density"], rows)
}

/// Bulk contours carry no polarization weights; those columns stay empty.
pub fn contours_csv(meta: &Metadata, contours: &[EquifrequencyContour]) -> Result<String> {
    let mut rows = Vec::new();
    let mut id = 0usize;
    for c in contours {
        for line in &c.lines {
            for k in &line.points {
                rows.push(vec![
                    id.to_string(),
                    num(c.frequency),
                    num(k.x),
                    num(k.y),
                    num(k.z),
                    line.band.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            id += 1;
        }
    }
    table(
        meta,
        &[
            "contour_id",
            "omega",
            "kx",
            "ky",
            "kz",
            "band",
            "W_x",
            "W_y",
            "W_z",
        ],
        rows,
    )
}

pub fn phase_csv(meta: &Metadata, diagram: &PhaseDiagram) -> Result<String> {
    let rows = diagram.cells.iter().map(|c| {
        vec![
            num(c.a_over_lambda),
            num(c.mu_b),
            opt(c.omega_w),
            opt(c.dos_window_count),
            opt(c.in_light_cone),
            opt(c.isolated),
            opt(c.spoiler.clone()),
        ]
    });
    table(
        meta,
        &[
            "a_over_lambda",
            "muB",
            "omega_W",
            "dos_window_count",
            "in_light_cone",
            "isolated",
            "spoiler",
        ],
        rows,
    )
}

/// Surface-zone momenta in units of π/a, unwrapped along each curve.
pub fn arcs_csv(meta: &Metadata, arcs: &FermiArcs) -> Result<String> {
    let mut rows = Vec::new();
    for (id, c) in arcs.curves.iter().enumerate() {
        for v in &c.vertices {
            rows.push(vec![
                id.to_string(),
                num(v.k[0]),
                num(v.k[1]),
                v.facet.label().to_string(),
                c.closed.to_string(),
                num(v.weights[0]),
                num(v.weights[1]),
                num(v.weights[2]),
            ]);
        }
    }
    table(
        meta,
        &[
            "contour_id",
            "ky",
            "kz",
            "facet",
            "closed",
            "W_x",
            "W_y",
            "W_z",
        ],
        rows,
    )
}

pub fn slab_sites_csv(meta: &Metadata, slab: &SlabModel) -> Result<String> {
    let rows = slab
        .sites
        .iter()
        .enumerate()
        .map(|(i, r)| vec![i.to_string(), num(r.x), num(r.y), num(r.z)]);
    table(meta, &["site", "x", "y", "z"], rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeRecord {
    pub a_over_lambda: f64,
    #[serde(rename = "muB_over_gamma_tilde")]
    pub mu_b_over_gamma_tilde: f64,
    pub k_w: [f64; 3],
    pub omega_w: f64,
    pub chirality: Option<i32>,
    pub residual_gap: f64,
    pub in_light_cone: bool,
    pub isolated: Option<bool>,
}

impl NodeRecord {
    pub fn new(a_over_lambda: f64, mu_b: f64, node: &WeylNode) -> Self {
        Self {
            a_over_lambda,
            mu_b_over_gamma_tilde: mu_b,
            k_w: node.k_position,
            omega_w: node.weyl_frequency,
            chirality: node.chirality,
            residual_gap: node.residual_gap,
            in_light_cone: node.in_light_cone,
            isolated: node.isolated,
        }
    }
}
