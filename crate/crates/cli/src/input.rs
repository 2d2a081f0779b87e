use std::path::Path;

use explab::classify::{DegreeMode, DEFAULT_DEGREE_CAP};
use explab::lie::{galilean, milne, phase_space, LieAlgebra};

use crate::Failure;

fn parse_param(spec: &str, prefix: &str) -> Option<Result<usize, Failure>> {
    let rest = spec.strip_prefix(prefix)?;
    Some(
        rest.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Failure::Input(format!("{spec:?}: expected a positive integer after {prefix:?}"))),
    )
}

/// `galilean`, `milne:m`, `phase-space:n`, or a path to a JSON spec file.
pub fn algebra(spec: &str) -> Result<LieAlgebra, Failure> {
    if spec == "galilean" {
        return Ok(galilean());
    }
    if let Some(m) = parse_param(spec, "milne:") {
        return milne(m?).map_err(|e| Failure::Input(e.to_string()));
    }
    if let Some(n) = parse_param(spec, "phase-space:") {
        return phase_space(n?).map_err(|e| Failure::Input(e.to_string()));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::Input(format!(
            "{spec:?} is neither a built-in algebra (galilean, milne:m, phase-space:n) nor a file"
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
    LieAlgebra::from_json_str(&text).map_err(|e| Failure::Input(format!("{spec}: {e}")))
}

pub fn degree(spec: &str) -> Result<DegreeMode, Failure> {
    if spec == "auto" {
        return Ok(DegreeMode::Auto { cap: DEFAULT_DEGREE_CAP });
    }
    spec.parse::<usize>()
        .map(DegreeMode::Fixed)
        .map_err(|_| Failure::Input(format!("degree must be \"auto\" or a non-negative integer, got {spec:?}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Suite {
    Galilean,
    Milne(usize),
    Bundle,
    Schrodinger,
    HGroup,
}

pub fn suite(spec: &str) -> Result<Suite, Failure> {
    match spec {
        "galilean" => Ok(Suite::Galilean),
        "bundle" => Ok(Suite::Bundle),
        "schrodinger" => Ok(Suite::Schrodinger),
        "h-group" => Ok(Suite::HGroup),
        _ => match parse_param(spec, "milne:") {
            Some(m) => Ok(Suite::Milne(m?)),
            None => Err(Failure::Input(format!(
                "unknown suite {spec:?}; expected galilean, milne:m, bundle, schrodinger or h-group"
            ))),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupSpec {
    Galilean,
    Milne(usize),
}

pub fn group(spec: &str) -> Result<GroupSpec, Failure> {
    if spec == "galilean" {
        return Ok(GroupSpec::Galilean);
    }
    match parse_param(spec, "milne:") {
        Some(m) => Ok(GroupSpec::Milne(m?)),
        None => Err(Failure::Input(format!("unknown group {spec:?}; expected galilean or milne:m"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSpec {
    GalileanMass(f64),
    MilneSchrodinger(f64),
}

pub fn theta(spec: &str) -> Result<ThetaSpec, Failure> {
    let (name, mass) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Input(format!("theta {spec:?} needs a mass, e.g. galilean-mass:1")))?;
    let mass: f64 = mass
        .parse()
        .ok()
        .filter(|m: &f64| m.is_finite() && *m > 0.0)
        .ok_or_else(|| Failure::Input(format!("theta {spec:?}: mass must be a positive number")))?;
    match name {
        "galilean-mass" => Ok(ThetaSpec::GalileanMass(mass)),
        "milne-schrodinger" => Ok(ThetaSpec::MilneSchrodinger(mass)),
        _ => Err(Failure::Input(format!(
            "unknown theta {name:?}; expected galilean-mass or milne-schrodinger"
        ))),
    }
}

pub fn pair(spec: &str) -> Result<(String, String), Failure> {
    match spec.split(',').map(str::trim).collect::<Vec<_>>()[..] {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(Failure::Input(format!("pair must look like \"b1,d1\", got {spec:?}"))),
    }
}

pub fn event(spec: &str) -> Result<[f64; 4], Failure> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("event must be \"x1,x2,x3,t\", got {spec:?}")))?;
    parts
        .try_into()
        .map_err(|_| Failure::Input(format!("event must have four components, got {spec:?}")))
}
