//! JSON exchange formats.
//!
//! * Polygon: array of `[x, y]` vertices covering one half of the boundary;
//!   the other half is implied by symmetry.
//! * Body: `{"dim": n, "vertices": [[...]], "facets": [[...]]}` with either
//!   list optional. A vector `v` stands for the pair `±v`.

use serde::{Deserialize, Serialize};

use crate::alpha::{AlphaSearchResult, TowerResult};
use crate::bodynd::BodyND;
use crate::error::{Error, Result};
use crate::geometry2d::Vec2;
use crate::localize::{Leaf, SphericalNeedle};
use crate::Polygon;

fn malformed(e: serde_json::Error) -> Error {
    Error::Malformed(e.to_string())
}

pub fn polygon_from_json(text: &str) -> Result<Polygon> {
    let pts: Vec<[f64; 2]> = serde_json::from_str(text).map_err(malformed)?;
    let pts: Vec<Vec2<f64>> = pts.iter().map(|p| Vec2::new(p[0], p[1])).collect();
    Polygon::from_points(&pts)
}

fn half_vertices(p: &Polygon) -> Vec<[f64; 2]> {
    p.half_vertices().iter().map(|v| [v.x, v.y]).collect()
}

pub fn polygon_to_json(p: &Polygon) -> String {
    serde_json::to_string(&half_vertices(p)).expect("finite coordinates serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BodyFile {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<Vec<f64>>>,
}

pub fn body_from_json(text: &str) -> Result<BodyND> {
    let f: BodyFile = serde_json::from_str(text).map_err(malformed)?;
    match (f.vertices, f.facets) {
        (Some(v), Some(a)) => BodyND::from_both(f.dim, &v, &a),
        (Some(v), None) => BodyND::from_vertices(f.dim, &v),
        (None, Some(a)) => BodyND::from_facets(f.dim, &a),
        (None, None) => Err(Error::Malformed("body needs vertices or facets".into())),
    }
}

/// Polytope as a body file; balls have no finite description and fail.
pub fn body_to_json(k: &BodyND) -> Result<String> {
    if k.is_ball().is_some() {
        return Err(Error::InvalidParameter("balls have no vertex or facet list".into()));
    }
    let f = BodyFile {
        dim: k.dim(),
        vertices: k.vertices().map(|v| v.to_vecs()),
        facets: k.facets().map(|a| a.to_vecs()),
    };
    Ok(serde_json::to_string(&f).expect("finite coordinates serialize"))
}

/// Interval witness `[start, start + length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalReport {
    pub start: f64,
    pub length: f64,
}

/// Alpha computation: value, witnesses and search trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    pub n: u32,
    pub alpha_hat: f64,
    /// Anchored-interval value, when the tower was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    pub theta: f64,
    pub interval: IntervalReport,
    /// Half of the witness body's vertices.
    pub body: Vec<[f64; 2]>,
    pub trace: Vec<(usize, f64)>,
    pub lower_floor: f64,
}

impl AlphaReport {
    pub fn from_tower(n: u32, body: &Polygon, t: &TowerResult) -> Self {
        Self {
            n,
            alpha_hat: t.alpha.value,
            alpha1: Some(t.alpha1.value),
            theta: t.alpha.theta,
            interval: IntervalReport { start: t.alpha.interval.start(), length: t.alpha.interval.length() },
            body: half_vertices(body),
            trace: Vec::new(),
            lower_floor: crate::alpha::lemma_floor(n),
        }
    }

    pub fn from_search(r: &AlphaSearchResult) -> Self {
        Self {
            n: r.n,
            alpha_hat: r.alpha_hat,
            alpha1: None,
            theta: r.argmax_theta,
            interval: IntervalReport { start: r.argmin_interval.start(), length: r.argmin_interval.length() },
            body: half_vertices(&r.argmin_body),
            trace: r.search_trace.clone(),
            lower_floor: crate::alpha::lemma_floor(r.n),
        }
    }
}

/// Needle endpoints and density parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeedleReport {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub k: u32,
    pub t0: f64,
    pub norm_constant: f64,
}

impl From<&SphericalNeedle> for NeedleReport {
    fn from(n: &SphericalNeedle) -> Self {
        Self {
            start: n.arc.start.clone(),
            end: n.arc.end.clone(),
            k: n.density.k,
            t0: n.density.t0,
            norm_constant: n.density.norm_constant,
        }
    }
}

/// Partition dump: leaves with cut normals and masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionDump<'a> {
    pub leaves: &'a [Leaf],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub needle: Option<NeedleReport>,
}
