//! JSON file formats for rings, modules, groups and cochains, and their
//! resolution against the builtin registry.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cohomology::{cyclic_3cocycle, Circle, Cochain};
use crate::group::FiniteGroup;
use crate::ring::{FusionRing, Mult, RawRing};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {0}: {1}")]
    Read(String, std::io::Error),
    #[error("cannot parse {0}: {1}")]
    Parse(String, serde_json::Error),
    #[error("unknown builtin {0}")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Invalid(String),
}

/// Ring file: `{"labels": [...], "dual": [...], "tensor": [[i,j,k,N],...]}`
/// with omitted entries zero; `unit` optional (default 0).
#[derive(Debug, Serialize, Deserialize)]
pub struct RingFile {
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    pub tensor: Vec<(usize, usize, usize, Mult)>,
    #[serde(default)]
    pub unit: usize,
}

impl From<RingFile> for RawRing {
    fn from(f: RingFile) -> RawRing {
        RawRing {
            labels: f.labels,
            dual: f.dual,
            tensor: f.tensor,
            unit: f.unit,
        }
    }
}

pub fn ring_to_file(ring: &FusionRing) -> RingFile {
    RingFile {
        labels: ring.labels().to_vec(),
        dual: ring.duals().to_vec(),
        tensor: ring
            .tensor_entries()
            .map(|((i, j, k), n)| (i, j, k, n))
            .collect(),
        unit: 0,
    }
}

/// Module file: `{"ring": path-or-inline-or-builtin, "mlabels": [...],
/// "action": [[i,j,k,A],...]}`.
#[derive(Debug, Deserialize)]
pub struct ModuleFile {
    pub ring: Value,
    pub mlabels: Vec<String>,
    pub action: Vec<(usize, usize, usize, Mult)>,
}

/// Group file: `{"order": n, "table": [[...]]}` or
/// `{"points": m, "perm_gens": [[...]]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFile {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
    },
    Permutations {
        points: usize,
        perm_gens: Vec<Vec<usize>>,
    },
}

/// Cochain file: explicit values or a named formula.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CochainFile {
    Formula { formula: CochainFormula },
    Values {
        group: Value,
        degree: usize,
        values: Vec<Vec<Value>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type")]
pub enum CochainFormula {
    #[serde(rename = "cyclic3")]
    Cyclic3 { n: usize, q: i64 },
    #[serde(rename = "zero")]
    Zero { group: Value, degree: usize },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, IoError> {
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| IoError::Read(path.to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| IoError::Parse(path.to_string(), e))
}

/// Resolve `builtin:NAME`, a builtin name, or a file path to a ring.
pub fn load_ring(spec: &str) -> Result<FusionRing, IoError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return crate::builtins::ring(name).ok_or_else(|| IoError::UnknownBuiltin(name.into()));
    }
    if let Some(ring) = crate::builtins::ring(spec) {
        return Ok(ring);
    }
    let file: RingFile = read_json(spec)?;
    FusionRing::validate(&file.into()).map_err(|e| IoError::Invalid(e.to_string()))
}

/// Resolve a builtin group name or a group file path.
pub fn load_group(spec: &str) -> Result<FiniteGroup, IoError> {
    let name = spec.strip_prefix("builtin:").unwrap_or(spec);
    if let Some(g) = crate::builtins::group(name) {
        return Ok(g);
    }
    let file: GroupFile = read_json(spec)?;
    group_from_file(file)
}

pub fn group_from_file(file: GroupFile) -> Result<FiniteGroup, IoError> {
    match file {
        GroupFile::Table { order, table } => {
            if table.len() != order {
                return Err(IoError::Invalid("table size disagrees with order".into()));
            }
            FiniteGroup::from_table(table).map_err(|e| IoError::Invalid(e.to_string()))
        }
        GroupFile::Permutations { points, perm_gens } => {
            FiniteGroup::from_permutations(points, &perm_gens)
                .map_err(|e| IoError::Invalid(e.to_string()))
        }
    }
}

fn group_from_value(v: &Value) -> Result<FiniteGroup, IoError> {
    match v {
        Value::String(s) => load_group(s),
        _ => {
            let file: GroupFile = serde_json::from_value(v.clone())
                .map_err(|e| IoError::Parse("inline group".into(), e))?;
            group_from_file(file)
        }
    }
}

fn parse_circle(v: &Value) -> Result<Circle, IoError> {
    match v {
        Value::String(s) => {
            let (num, den) = s
                .split_once('/')
                .ok_or_else(|| IoError::Invalid(format!("bad rational {s}")))?;
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| IoError::Invalid(format!("bad rational {s}")))?;
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|_| IoError::Invalid(format!("bad rational {s}")))?;
            if den == 0 {
                return Err(IoError::Invalid("zero denominator".into()));
            }
            Ok(Circle::new(num, den))
        }
        Value::Number(n) if n.as_i64() == Some(0) => Ok(Circle::zero()),
        _ => Err(IoError::Invalid(format!("bad rational value {v}"))),
    }
}

/// Resolve a cochain spec: `zero:GROUP:DEGREE`, `cyclic3:N:Q`, or a file.
pub fn load_cochain(spec: &str) -> Result<Cochain, IoError> {
    if let Some(rest) = spec.strip_prefix("zero:") {
        let (gname, deg) = rest
            .rsplit_once(':')
            .ok_or_else(|| IoError::Invalid("expected zero:GROUP:DEGREE".into()))?;
        let degree: usize = deg
            .parse()
            .map_err(|_| IoError::Invalid("bad degree".into()))?;
        let g = load_group(gname)?;
        return Ok(Cochain::zero(Arc::new(g), degree));
    }
    if let Some(rest) = spec.strip_prefix("cyclic3:") {
        let (n, q) = rest
            .split_once(':')
            .ok_or_else(|| IoError::Invalid("expected cyclic3:N:Q".into()))?;
        let n: usize = n.parse().map_err(|_| IoError::Invalid("bad n".into()))?;
        let q: i64 = q.parse().map_err(|_| IoError::Invalid("bad q".into()))?;
        return Ok(cyclic_3cocycle(n, q));
    }
    let file: CochainFile = read_json(spec)?;
    cochain_from_file(file)
}

pub fn cochain_from_file(file: CochainFile) -> Result<Cochain, IoError> {
    match file {
        CochainFile::Formula { formula } => match formula {
            CochainFormula::Cyclic3 { n, q } => Ok(cyclic_3cocycle(n, q)),
            CochainFormula::Zero { group, degree } => {
                let g = group_from_value(&group)?;
                Ok(Cochain::zero(Arc::new(g), degree))
            }
        },
        CochainFile::Values {
            group,
            degree,
            values,
        } => {
            let g = Arc::new(group_from_value(&group)?);
            if degree == 0 || degree > 4 {
                return Err(IoError::Invalid(format!("unsupported degree {degree}")));
            }
            let mut f = Cochain::zero(g.clone(), degree);
            for row in values {
                if row.len() != degree + 1 {
                    return Err(IoError::Invalid(
                        "each value row must be [g1,...,gk, \"p/q\"]".into(),
                    ));
                }
                let args: Vec<usize> = row[..degree]
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .map(|x| x as usize)
                            .filter(|&x| x < g.order())
                            .ok_or_else(|| IoError::Invalid(format!("bad group element {v}")))
                    })
                    .collect::<Result<_, _>>()?;
                f.set(&args, parse_circle(&row[degree])?);
            }
            Ok(f)
        }
    }
}

/// Parse a subgroup spec: comma-separated element list, closed under the
/// group operation by generation.
pub fn parse_subgroup(g: &FiniteGroup, spec: &str) -> Result<crate::group::Subgroup, IoError> {
    let gens: Vec<usize> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| IoError::Invalid(format!("bad element {s}")))
        })
        .collect::<Result<_, _>>()?;
    for &x in &gens {
        if x >= g.order() {
            return Err(IoError::Invalid(format!("element {x} out of range")));
        }
    }
    Ok(g.subgroup_generated(&gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_ring_resolution() {
        assert_eq!(load_ring("builtin:ising").unwrap().rank(), 3);
        assert_eq!(load_ring("vecS3").unwrap().rank(), 6);
        assert!(load_ring("builtin:nosuch").is_err());
    }

    #[test]
    fn ring_file_roundtrip() {
        let ring = crate::ring::small::ising();
        let file = ring_to_file(&ring);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: RingFile = serde_json::from_str(&text).unwrap();
        let back = FusionRing::validate(&parsed.into()).unwrap();
        assert_eq!(ring, back);
    }

    #[test]
    fn cochain_formula_spec() {
        let w = load_cochain("cyclic3:4:1").unwrap();
        assert_eq!(w.degree, 3);
        assert_eq!(w.group.order(), 4);
        let z = load_cochain("zero:S3:3").unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn subgroup_spec_closure() {
        let g = FiniteGroup::cyclic(6);
        let s = parse_subgroup(&g, "2").unwrap();
        assert_eq!(s.elements, vec![0, 2, 4]);
    }

    #[test]
    fn cochain_values_file() {
        let json = serde_json::json!({
            "group": "C2",
            "degree": 3,
            "values": [[1, 1, 1, "1/2"]]
        });
        let file: CochainFile = serde_json::from_value(json).unwrap();
        let f = cochain_from_file(file).unwrap();
        assert_eq!(f.get(&[1, 1, 1]), Circle::new(1, 2));
        assert!(crate::cohomology::is_cocycle(&f).unwrap());
    }
}
