//! Line-oriented `.crh` fixture files: a hypersurface with optional curves,
//! map candidates, and auxiliary algebraic-function relations.
//!
//! ```text
//! # comment
//! name = sphere2
//! N = 2
//! rho = z2 + conj(z2) + z1*conj(z1)
//! point = 0, 0, 0, 0            # re,im pairs, one pair per coordinate
//! curve = t, 0                  # optional, repeatable
//! map = z1, 0, z2               # optional, repeatable
//! aux u: u^3 + u - z1*conj(z1)  # optional auxiliary relation
//! target = other.crh            # optional default target for map checking
//! ```
//!
//! Rationals are exact (`1/2`, never `0.5`).

use crate::arena::VariableArena;
use crate::contact::HoloCurve;
use crate::hypersurface::HypersurfaceSpec;
use crate::mapcheck::{AuxRelation, PolyMap};
use crate::num::GaussianRational;
use crate::parse::{parse_expression, split_top_level};
use crate::poly::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FixtureError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FixtureError {
    FixtureError { line, message: message.into() }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub spec: HypersurfaceSpec,
    /// Arena extended with any auxiliary variables (maps live here).
    pub extended_arena: Arc<VariableArena>,
    pub aux: Vec<AuxRelation>,
    pub curves: Vec<HoloCurve>,
    pub maps: Vec<PolyMap>,
    pub target: Option<String>,
    /// Raw bytes, for input digests.
    pub source: Vec<u8>,
}

fn parse_rational(text: &str, line: usize) -> Result<BigRational, FixtureError> {
    let t = text.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| err(line, format!("bad rational `{text}` (use p or p/q)")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| err(line, format!("bad rational `{text}`")))?;
    if d == BigInt::from(0) {
        return Err(err(line, format!("zero denominator in `{text}`")));
    }
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Parse fixture text into a validated hypersurface plus attachments.
pub fn parse_fixture(text: &str) -> Result<Fixture, FixtureError> {
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut rho_line: Option<(usize, String)> = None;
    let mut point_line: Option<(usize, String)> = None;
    let mut curve_lines: Vec<(usize, String)> = Vec::new();
    let mut map_lines: Vec<(usize, String)> = Vec::new();
    let mut aux_lines: Vec<(usize, String, String)> = Vec::new();
    let mut target: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("aux ") {
            let (var, rel) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, "aux line needs `aux <name>: <relation>`"))?;
            aux_lines.push((line_no, var.trim().to_string(), rel.trim().to_string()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim().to_string();
        match key {
            "name" => name = Some(value),
            "N" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| err(line_no, format!("bad dimension `{value}`")))?;
                if n == 0 {
                    return Err(err(line_no, "dimension must be positive"));
                }
                dim = Some(n);
            }
            "rho" => rho_line = Some((line_no, value)),
            "point" => point_line = Some((line_no, value)),
            "curve" => curve_lines.push((line_no, value)),
            "map" => map_lines.push((line_no, value)),
            "target" => target = Some(value),
            other => return Err(err(line_no, format!("unknown key `{other}`"))),
        }
    }

    let dim = dim.ok_or_else(|| err(0, "missing `N = <dimension>`"))?;
    let (rho_ln, rho_text) = rho_line.ok_or_else(|| err(0, "missing `rho = <expression>`"))?;
    let arena = VariableArena::complex_space(dim);

    let rho = parse_expression(&rho_text, &arena).map_err(|e| err(rho_ln, e.to_string()))?;

    let point = match point_line {
        None => vec![GaussianRational::zero(); dim],
        Some((ln, text)) => {
            let parts = split_top_level(&text);
            if parts.len() != 2 * dim {
                return Err(err(
                    ln,
                    format!("point needs {} rationals (re,im per coordinate), got {}", 2 * dim, parts.len()),
                ));
            }
            let mut coords = Vec::with_capacity(dim);
            for k in 0..dim {
                let re = parse_rational(&parts[2 * k], ln)?;
                let im = parse_rational(&parts[2 * k + 1], ln)?;
                coords.push(GaussianRational::new(re, im));
            }
            coords
        }
    };

    let spec = HypersurfaceSpec::validate(rho, point, name.clone())
        .map_err(|e| err(rho_ln, e.to_string()))?;

    // Extended arena with auxiliary variables, for maps and certificates.
    let aux_names: Vec<String> = aux_lines.iter().map(|(_, n, _)| n.clone()).collect();
    let aux_refs: Vec<&str> = aux_names.iter().map(|s| s.as_str()).collect();
    let extended_arena = if aux_refs.is_empty() {
        arena.clone()
    } else {
        arena.extend_aux(&aux_refs)
    };
    let mut aux = Vec::new();
    for (ln, var_name, rel_text) in &aux_lines {
        let var = extended_arena
            .lookup(var_name)
            .ok_or_else(|| err(*ln, format!("aux variable `{var_name}` not registered")))?;
        let relation =
            parse_expression(rel_text, &extended_arena).map_err(|e| err(*ln, e.to_string()))?;
        if !relation.involves(var) {
            return Err(err(*ln, format!("relation does not involve `{var_name}`")));
        }
        aux.push(AuxRelation { var, relation });
    }

    let mut curves = Vec::new();
    for (ln, text) in &curve_lines {
        let parts = split_top_level(text);
        if parts.len() != dim {
            return Err(err(*ln, format!("curve needs {dim} components, got {}", parts.len())));
        }
        let refs: Vec<&str> = parts.iter().map(|s| s.as_str()).collect();
        let curve = HoloCurve::from_exprs(&refs).map_err(|e| err(*ln, e.to_string()))?;
        curves.push(curve);
    }

    let mut maps = Vec::new();
    for (ln, text) in &map_lines {
        let parts = split_top_level(text);
        let mut comps: Vec<Polynomial> = Vec::with_capacity(parts.len());
        for part in &parts {
            comps.push(
                parse_expression(part, &extended_arena).map_err(|e| err(*ln, e.to_string()))?,
            );
        }
        let pm = PolyMap::new(comps, aux.clone()).map_err(|e| err(*ln, e.to_string()))?;
        maps.push(pm);
    }

    Ok(Fixture {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        spec,
        extended_arena,
        aux,
        curves,
        maps,
        target,
        source: text.as_bytes().to_vec(),
    })
}

/// Load a fixture from disk.
pub fn load_fixture(path: &std::path::Path) -> Result<Fixture, FixtureError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(0, format!("cannot read {}: {e}", path.display())))?;
    parse_fixture(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "\
# the unit sphere in its affine realization
name = sphere2
N = 2
rho = z2 + conj(z2) + z1*conj(z1)
point = 0, 0, 0, 0
curve = t, 0
map = z1, 0, z2
";
        let f = parse_fixture(text).unwrap();
        assert_eq!(f.name, "sphere2");
        assert_eq!(f.spec.dim(), 2);
        assert_eq!(f.curves.len(), 1);
        assert_eq!(f.maps.len(), 1);
        assert_eq!(f.maps[0].target_dim(), 3);
    }

    #[test]
    fn errors_cite_line_numbers() {
        let text = "N = 2\nrho = z9\n";
        let e = parse_fixture(text).unwrap_err();
        assert_eq!(e.line, 2);
        let text = "N = 2\nrho = i*z1\n";
        let e = parse_fixture(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("not real"));
        let text = "N = 2\nrho = z2 + conj(z2) + z1*conj(z1)\npoint = 1, 0, 0, 0\n";
        let e = parse_fixture(text).unwrap_err();
        assert!(e.message.contains("base point"));
    }

    #[test]
    fn off_origin_rational_point() {
        let text = "\
N = 2
rho = z2 + conj(z2) + z1*conj(z1)
point = 1, 0, -1/2, 0
";
        let f = parse_fixture(text).unwrap();
        assert_eq!(f.spec.base_point()[1], GaussianRational::ratio(-1, 2));
    }

    #[test]
    fn aux_relation_parses() {
        let text = "\
N = 2
rho = z2 + conj(z2) + z1*conj(z1)
aux u: u^3 + u - z1*conj(z1)
map = z1, 0, z2
";
        let f = parse_fixture(text).unwrap();
        assert_eq!(f.aux.len(), 1);
        assert_eq!(f.extended_arena.len(), 5);
        assert_eq!(f.maps[0].aux().len(), 1);
    }
}
