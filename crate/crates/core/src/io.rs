//! JSON forms of bodies, domains and fields, and the binary grid-field format.
//!
//! Bodies: `{"polytope": [[x, y], ...]}`, `{"ellipsoid": [[row], ...]}` (the
//! matrix `A` of `A B`), `{"support": {"grid_n": m, "values": [...]}}`.
//! Domains: `{"domain": {"grid_n": m, "rays": [[[a, b], ...], ...]}}`.
//! Radial fields: `{"profile": {...}, "gauge": <body>, "R": radius}`.
//! Grid fields: a header `{"box": [[lo, hi], ...], "shape": [...], "data": "file"}`
//! next to a file of little-endian `f64` node values, axis 0 slowest.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::fields::{GridField, RadialField, RadialFieldSpec, ScalarField};
use crate::geometry::{ConvexBody, Polytope, SphereGrid};
use crate::moment::MomentBody;
use crate::star::CompactDomain;

/// Anything `moment-body` accepts.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Body(ConvexBody),
    Domain(CompactDomain),
    Field(ScalarField),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportJson {
    grid_n: usize,
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainJson {
    grid_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    rays: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridHeader {
    #[serde(rename = "box")]
    pub bounds: Vec<(f64, f64)>,
    pub shape: Vec<usize>,
    pub data: String,
}

fn single_key(v: &Value) -> Result<(&str, &Value)> {
    match v.as_object() {
        Some(m) if m.len() == 1 => {
            let (k, v) = m.iter().next().expect("one entry");
            Ok((k.as_str(), v))
        }
        _ => invalid("expected an object with exactly one key"),
    }
}

fn grid_for(grid_n: usize, len: usize, dim: Option<usize>) -> Result<std::sync::Arc<SphereGrid>> {
    let dims: Vec<usize> = dim.map_or(vec![2, 3], |d| vec![d]);
    for d in dims {
        let g = SphereGrid::with_resolution(d, grid_n)?;
        if g.len() == len {
            return Ok(g);
        }
    }
    invalid(format!("{len} values do not match a sphere grid with grid_n = {grid_n}"))
}

pub fn body_from_json(v: &Value) -> Result<ConvexBody> {
    let (key, inner) = single_key(v)?;
    match key {
        "polytope" => {
            let pts: Vec<Vec<f64>> = serde_json::from_value(inner.clone())?;
            ConvexBody::polytope(&pts)
        }
        "ellipsoid" => {
            let rows: Vec<Vec<f64>> = serde_json::from_value(inner.clone())?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return invalid("ellipsoid matrix must be square");
            }
            ConvexBody::ellipsoid(DMatrix::from_row_iterator(n, n, rows.into_iter().flatten()))
        }
        "support" => {
            let s: SupportJson = serde_json::from_value(inner.clone())?;
            let grid = grid_for(s.grid_n, s.values.len(), s.dim)?;
            ConvexBody::sampled(grid, s.values)
        }
        other => invalid(format!("unknown body kind '{other}'")),
    }
}

pub fn body_to_json(k: &ConvexBody) -> Value {
    match k {
        ConvexBody::Polytope(Polytope::Planar(p)) => json!({"polytope": p.vertices()}),
        ConvexBody::Polytope(Polytope::Solid(p)) => json!({"polytope": p.vertices()}),
        ConvexBody::Ellipsoid(e) => {
            let m = e.matrix();
            let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
            json!({"ellipsoid": rows})
        }
        ConvexBody::Sampled(s) => json!({"support": SupportJson {
            grid_n: s.grid().resolution(),
            values: s.values().to_vec(),
            dim: (s.dim() != 2).then_some(s.dim()),
        }}),
    }
}

pub fn domain_from_json(v: &Value) -> Result<CompactDomain> {
    let (key, inner) = single_key(v)?;
    if key != "domain" {
        return invalid(format!("expected a domain, got '{key}'"));
    }
    let d: DomainJson = serde_json::from_value(inner.clone())?;
    let grid = grid_for(d.grid_n, d.rays.len(), d.dim)?;
    CompactDomain::new(grid, d.rays)
}

pub fn domain_to_json(m: &CompactDomain) -> Value {
    json!({"domain": DomainJson {
        grid_n: m.grid().resolution(),
        dim: (m.dim() != 2).then_some(m.dim()),
        rays: m.rays().to_vec(),
    }})
}

pub fn radial_field_from_json(v: &Value) -> Result<RadialField> {
    let spec: RadialFieldSpec = serde_json::from_value(v.clone())?;
    let gauge = body_from_json(&spec.gauge)?;
    let profile = match spec.truncation {
        Some(r) => spec.profile.truncated(r),
        None => spec.profile,
    };
    RadialField::new(profile, gauge)
}

pub fn radial_field_to_json(f: &RadialField) -> Value {
    json!({"profile": f.profile(), "gauge": body_to_json(f.gauge())})
}

/// Reads a grid field from its header; the data path is relative to the header.
pub fn read_grid_field(header_path: &Path) -> Result<GridField> {
    let header: GridHeader = serde_json::from_str(&fs::read_to_string(header_path)?)?;
    grid_field_from_header(&header, header_path.parent().unwrap_or(Path::new(".")))
}

fn grid_field_from_header(header: &GridHeader, dir: &Path) -> Result<GridField> {
    let bytes = fs::read(dir.join(&header.data))?;
    if bytes.len() % 8 != 0 {
        return invalid("grid data length is not a multiple of 8 bytes");
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let lo = header.bounds.iter().map(|b| b.0).collect();
    let hi = header.bounds.iter().map(|b| b.1).collect();
    GridField::new(lo, hi, header.shape.clone(), values)
}

/// Writes `<stem>.json` and `<stem>.bin` for the given header path.
pub fn write_grid_field(header_path: &Path, g: &GridField) -> Result<()> {
    let data: PathBuf = header_path.with_extension("bin");
    let name = data
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::InvalidArgument("grid field path has no file name".into()))?
        .to_string();
    let header = GridHeader {
        bounds: g.lo().iter().zip(g.hi()).map(|(a, b)| (*a, b)).collect(),
        shape: g.shape().to_vec(),
        data: name,
    };
    let bytes: Vec<u8> = g.values().iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(&data, bytes)?;
    fs::write(header_path, serde_json::to_string_pretty(&header)?)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// A body, domain, radial field or grid-field header, told apart by their keys.
pub fn read_input(path: &Path) -> Result<Input> {
    let v = read_json(path)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidArgument("input must be a JSON object".into()))?;
    if obj.contains_key("box") {
        let header: GridHeader = serde_json::from_value(v.clone())?;
        let g = grid_field_from_header(&header, path.parent().unwrap_or(Path::new(".")))?;
        return Ok(Input::Field(g.into()));
    }
    if obj.contains_key("profile") {
        return Ok(Input::Field(radial_field_from_json(&v)?.into()));
    }
    if obj.contains_key("domain") {
        return Ok(Input::Domain(domain_from_json(&v)?));
    }
    Ok(Input::Body(body_from_json(&v)?))
}

pub fn read_body(path: &Path) -> Result<ConvexBody> {
    body_from_json(&read_json(path)?)
}

/// The support body with its source and exponent.
pub fn moment_body_to_json(m: &MomentBody) -> Value {
    let mut v = body_to_json(&m.to_body());
    let obj = v.as_object_mut().expect("body JSON is an object");
    obj.insert("source".into(), json!(m.source));
    obj.insert("p".into(), json!(m.p));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Profile;

    #[test]
    fn bodies_round_trip() {
        let grid = SphereGrid::circle(64).unwrap();
        let bodies = [
            ConvexBody::polygon(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -0.5]]).unwrap(),
            ConvexBody::ellipsoid(nalgebra::dmatrix![2.0, 0.5; 0.0, 1.0]).unwrap(),
            ConvexBody::sampled(grid.clone(), vec![1.0; 64]).unwrap(),
            ConvexBody::cube(3, 1.0).unwrap(),
        ];
        for k in bodies {
            let back = body_from_json(&body_to_json(&k)).unwrap();
            assert_eq!(back.kind(), k.kind());
            assert!((back.volume() - k.volume()).abs() < 1e-12 * k.volume());
        }
    }

    #[test]
    fn domain_round_trip() {
        let grid = SphereGrid::circle(16).unwrap();
        let m = CompactDomain::new(grid, vec![vec![(0.0, 1.0), (1.5, 2.0)]; 16]).unwrap();
        assert_eq!(domain_from_json(&domain_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn radial_field_with_truncation() {
        let v = json!({"profile": {"name": "layer_g", "p": 1.0, "lambda": 0.9}, "gauge": {"ellipsoid": [[1.0, 0.0], [0.0, 1.0]]}, "R": 20.0});
        let f = radial_field_from_json(&v).unwrap();
        assert_eq!(f.value(&[21.0, 0.0]), 0.0);
        assert!(f.value(&[19.0, 0.0]) > 0.0);
        let v = json!({"profile": {"name": "cone"}, "gauge": {"ellipsoid": [[1.0, 0.0], [0.0, 1.0]]}});
        assert_eq!(radial_field_from_json(&v).unwrap().profile(), &Profile::Cone);
    }

    #[test]
    fn unknown_kinds_are_rejected() {
        assert!(body_from_json(&json!({"sphere": 1})).is_err());
        assert!(body_from_json(&json!({"polytope": [[0.0, 0.0]], "extra": 1})).is_err());
        assert!(body_from_json(&json!({"support": {"grid_n": 8, "values": vec![1.0; 8], "bogus": 1}})).is_err());
    }

    #[test]
    fn grid_field_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let g = GridField::on_cube(2, 1.0, 9, |x| (1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1])).unwrap();
        write_grid_field(&path, &g).unwrap();
        match read_input(&path).unwrap() {
            Input::Field(ScalarField::Grid(back)) => assert_eq!(back, g),
            other => panic!("unexpected input {other:?}"),
        }
    }
}
