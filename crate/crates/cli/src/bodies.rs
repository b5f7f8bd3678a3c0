//! Body arguments: builtin names or `PolytopeFile` JSON documents.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use mqi_core::geometry::{
    build_test_body, regular_polygon, regular_simplex, segment, standard_simplex, unit_cube, unit_square, Body,
    Polytope, TestBody, Vec3,
};
use mqi_core::rng::instance_seed;

use crate::error::CliError;

/// `{"vertices": [[x, y, z], ...], "name": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<[f64; 3]>,
}

impl PolytopeFile {
    pub fn of(p: &Polytope, name: Option<&str>) -> PolytopeFile {
        PolytopeFile {
            name: name.map(str::to_string),
            vertices: p.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
        }
    }

    /// Validate field by field so errors can name the offending entry.
    pub fn parse(text: &str) -> Result<PolytopeFile, CliError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid JSON: {e}")))?;
        let obj = doc.as_object().ok_or_else(|| CliError::input("top level must be an object"))?;
        if let Some(key) = obj.keys().find(|k| *k != "vertices" && *k != "name") {
            return Err(CliError::input(format!("unknown field `{key}`")));
        }
        let name = match obj.get("name") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(CliError::input("field `name` must be a string")),
        };
        let list = obj
            .get("vertices")
            .ok_or_else(|| CliError::input("missing field `vertices`"))?
            .as_array()
            .ok_or_else(|| CliError::input("field `vertices` must be an array"))?;
        if list.is_empty() {
            return Err(CliError::input("field `vertices` is empty"));
        }
        let mut vertices = Vec::with_capacity(list.len());
        for (i, v) in list.iter().enumerate() {
            let coords = v
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| CliError::input(format!("vertices[{i}] must be an array of 3 numbers")))?;
            let mut p = [0.0; 3];
            for (j, c) in coords.iter().enumerate() {
                p[j] = c
                    .as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::input(format!("vertices[{i}][{j}] must be a finite number")))?;
            }
            vertices.push(p);
        }
        Ok(PolytopeFile { name, vertices })
    }

    pub fn read(path: &Path) -> Result<PolytopeFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        PolytopeFile::parse(&text).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn polytope(&self) -> Result<Polytope, CliError> {
        let pts: Vec<Vec3> = self.vertices.iter().map(|v| Vec3::new(v[0], v[1], v[2])).collect();
        Ok(Polytope::from_points(&pts)?)
    }
}

pub const BUILTINS: &str =
    "cube, simplex, regular-simplex, ball, ball@LEVEL, shear:ALPHA, trunc:DELTA, segment, square, hexagon, polygon:M, random:N";

fn number<T: std::str::FromStr>(spec: &str, arg: &str) -> Result<T, CliError> {
    arg.parse().map_err(|_| CliError::input(format!("bad parameter in body `{spec}`")))
}

/// Resolve a builtin name or a file path. `slot` and `seed` make `random:N`
/// reproducible and distinct between slots.
pub fn resolve(spec: &str, slot: &str, seed: u64) -> Result<Body, CliError> {
    let (head, arg) = match spec.split_once([':', '@']) {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let poly = match (head, arg) {
        ("cube", None) => unit_cube(),
        ("simplex", None) => standard_simplex(),
        ("regular-simplex", None) => regular_simplex(),
        ("ball", None) => return Ok(Body::unit_ball()),
        ("ball", Some(a)) => {
            let level: usize = number(spec, a)?;
            if level > 6 {
                return Err(CliError::input(format!("ball level {level} is too fine (at most 6)")));
            }
            build_test_body(&TestBody::ApproximateBall { level })?
        }
        ("shear", Some(a)) => {
            let amount: f64 = number(spec, a)?;
            build_test_body(&TestBody::Shear { base: unit_cube(), axis: Vec3::x(), height: Vec3::z(), amount })?
        }
        ("trunc", Some(a)) => {
            let depth: f64 = number(spec, a)?;
            if !(depth > 0.0 && depth < 1.0) {
                return Err(CliError::input(format!("truncation depth must lie in (0, 1), got {depth}")));
            }
            build_test_body(&TestBody::TruncateVertex {
                base: unit_cube(),
                vertex: Vec3::new(1.0, 1.0, 1.0),
                depth,
                vertex_only: false,
            })?
        }
        ("segment", None) => segment(Vec3::zeros(), Vec3::x()),
        ("square", None) => unit_square(),
        ("hexagon", None) => regular_polygon(6, 1.0)?,
        ("polygon", Some(a)) => regular_polygon(number(spec, a)?, 1.0)?,
        ("random", Some(a)) => {
            let count: usize = number(spec, a)?;
            build_test_body(&TestBody::RandomHull { count, seed: instance_seed(seed, slot, 0) })?
        }
        _ => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(CliError::input(format!("`{spec}` is neither a builtin ({BUILTINS}) nor a file")));
            }
            PolytopeFile::read(path)?.polytope()?
        }
    };
    Ok(Body::from(poly))
}

pub fn require_polytope(body: Body, slot: &str) -> Result<Polytope, CliError> {
    match body {
        Body::Polytope(p) => Ok(p),
        _ => Err(CliError::input(format!("--{slot}: the ball is not a polytope; use ball@LEVEL"))),
    }
}

pub fn require_full(p: &Polytope, slot: &str) -> Result<(), CliError> {
    if p.is_full_dimensional() {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "--{slot}: affine dimension {}, this command needs a full-dimensional body",
            p.dim()
        )))
    }
}
