//! JSON documents read and written by the command-line tool. Writers emit a
//! canonical layout (two-space pretty printing, trailing newline) so that
//! reading and re-writing a canonical file reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{ChainComplex, ChainMap, ComplexError, OmegaComplex};
use crate::f2::{F2Matrix, F2Vector};
use crate::morse::{
    build_morse_complex, continuation_map, pushforward_map, CellComplex, CellularMap, MorseData, MorseError,
};
use crate::omega::{Exponent, OmegaElement, OmegaMatrix};
use crate::wang::{build_wang, WangComplex, WangError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Wang(#[from] WangError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    Z2,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeRange {
    pub min: i32,
    pub max: i32,
}

/// Rows of 0/1 entries, or rows of exponent lists for the T-ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntries {
    Z2(Vec<Vec<u8>>),
    Omega(Vec<Vec<Vec<Exponent>>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub ring: Ring,
    pub degrees: DegreeRange,
    pub generators: BTreeMap<i32, Vec<String>>,
    /// `boundary[k]` maps degree `k` to degree `k - 1`; missing means zero.
    #[serde(default)]
    pub boundary: BTreeMap<i32, MatrixEntries>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyComplex {
    Z2(ChainComplex),
    Omega(OmegaComplex),
}

fn z2_rows(m: &F2Matrix) -> Vec<Vec<u8>> {
    m.to_rows()
}

fn z2_matrix(rows: &[Vec<u8>], shape: (usize, usize), what: &str) -> Result<F2Matrix, FormatError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(FormatError::Invalid(format!(
            "{what}: expected a {}x{} matrix",
            shape.0, shape.1
        )));
    }
    if rows.iter().flatten().any(|&b| b > 1) {
        return Err(FormatError::Invalid(format!("{what}: Z2 entries must be 0 or 1")));
    }
    Ok(F2Matrix::from_rows_with_cols(rows, shape.1))
}

fn omega_matrix(e: &MatrixEntries, shape: (usize, usize), what: &str) -> Result<OmegaMatrix, FormatError> {
    let mut m = OmegaMatrix::zeros(shape.0, shape.1);
    match e {
        MatrixEntries::Z2(rows) if rows.iter().all(|r| r.is_empty()) => {
            if rows.len() != shape.0 || shape.1 != 0 && shape.0 != 0 {
                return Err(FormatError::Invalid(format!(
                    "{what}: expected a {}x{} matrix",
                    shape.0, shape.1
                )));
            }
        }
        MatrixEntries::Z2(_) => {
            return Err(FormatError::Invalid(format!(
                "{what}: T-ring entries must be arrays of exponents"
            )));
        }
        MatrixEntries::Omega(rows) => {
            if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
                return Err(FormatError::Invalid(format!(
                    "{what}: expected a {}x{} matrix",
                    shape.0, shape.1
                )));
            }
            for (r, row) in rows.iter().enumerate() {
                for (c, exps) in row.iter().enumerate() {
                    let el = OmegaElement::from_exponents(exps.iter().cloned());
                    if el.len() != exps.len() {
                        return Err(FormatError::Invalid(format!(
                            "{what}: repeated exponent in entry ({r}, {c})"
                        )));
                    }
                    m.set(r, c, el);
                }
            }
        }
    }
    Ok(m)
}

fn omega_rows(m: &OmegaMatrix) -> Vec<Vec<Vec<Exponent>>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m.get(r, c).exponents().cloned().collect())
                .collect()
        })
        .collect()
}

impl ComplexDoc {
    pub fn from_z2(c: &ChainComplex) -> Self {
        Self {
            ring: Ring::Z2,
            degrees: DegreeRange {
                min: c.min_degree(),
                max: c.max_degree(),
            },
            generators: c.degrees().map(|k| (k, c.labels(k).to_vec())).collect(),
            boundary: c
                .degrees()
                .skip(1)
                .map(|k| (k, MatrixEntries::Z2(z2_rows(&c.boundary(k)))))
                .collect(),
        }
    }

    pub fn from_omega(c: &OmegaComplex) -> Self {
        Self {
            ring: Ring::Omega,
            degrees: DegreeRange {
                min: c.min_degree(),
                max: c.max_degree(),
            },
            generators: c.degrees().map(|k| (k, c.labels(k).to_vec())).collect(),
            boundary: c
                .degrees()
                .skip(1)
                .map(|k| (k, MatrixEntries::Omega(omega_rows(&c.boundary(k)))))
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<AnyComplex, FormatError> {
        let DegreeRange { min, max } = self.degrees;
        if max < min {
            return Err(FormatError::Invalid(format!("degree range {min}..{max} is empty")));
        }
        if let Some(k) = self.generators.keys().find(|&&k| k < min || k > max) {
            return Err(FormatError::Invalid(format!(
                "generators given for degree {k} outside {min}..{max}"
            )));
        }
        let generators: Vec<Vec<String>> = (min..=max)
            .map(|k| self.generators.get(&k).cloned().unwrap_or_default())
            .collect();
        let dim = |k: i32| {
            if k < min || k > max {
                0
            } else {
                generators[(k - min) as usize].len()
            }
        };
        match self.ring {
            Ring::Z2 => {
                let mut mats = BTreeMap::new();
                for (&k, e) in &self.boundary {
                    let MatrixEntries::Z2(rows) = e else {
                        return Err(FormatError::Invalid(format!("boundary {k}: Z2 entries must be 0 or 1")));
                    };
                    mats.insert(k, z2_matrix(rows, (dim(k - 1), dim(k)), &format!("boundary {k}"))?);
                }
                Ok(AnyComplex::Z2(ChainComplex::new(min, generators, mats)?))
            }
            Ring::Omega => {
                let mut mats = BTreeMap::new();
                for (&k, e) in &self.boundary {
                    mats.insert(k, omega_matrix(e, (dim(k - 1), dim(k)), &format!("boundary {k}"))?);
                }
                Ok(AnyComplex::Omega(OmegaComplex::new(min, generators, mats)?))
            }
        }
    }

    pub fn to_z2(&self) -> Result<ChainComplex, FormatError> {
        match self.to_complex()? {
            AnyComplex::Z2(c) => Ok(c),
            AnyComplex::Omega(c) => Ok(c.constant_part()?),
        }
    }
}

/// A cell complex with Z2 incidences and a matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    /// Labels per dimension, starting at 0.
    pub cells: Vec<Vec<String>>,
    /// `[coface, face]` pairs; a pair listed twice cancels.
    pub incidence: Vec<[String; 2]>,
    /// `[face, coface]` pairs.
    #[serde(default)]
    pub matching: Vec<[String; 2]>,
}

impl CellDoc {
    pub fn from_morse_data(d: &MorseData) -> Self {
        Self {
            cells: d.complex().cells().to_vec(),
            incidence: d.complex().incidence_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            matching: d.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_morse_data(&self) -> Result<MorseData, FormatError> {
        let incidence: Vec<(String, String)> = self.incidence.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        let complex = CellComplex::new(self.cells.clone(), &incidence)?;
        let pairs: Vec<(String, String)> = self.matching.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        Ok(MorseData::new(complex, &pairs)?)
    }
}

/// Either a cell complex with matching (read through its Morse complex) or
/// an explicit chain complex; told apart by the `cells` key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Cellular(CellDoc),
    Chain(ComplexDoc),
}

fn has_cells(v: &serde_json::Value) -> bool {
    v.get("cells").is_some()
}

impl<'de> Deserialize<'de> for ComplexInput {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let r = if has_cells(&v) {
            serde_json::from_value(v).map(ComplexInput::Cellular)
        } else {
            serde_json::from_value(v).map(ComplexInput::Chain)
        };
        r.map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for MapInput {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let r = if has_cells(&v) {
            serde_json::from_value(v).map(MapInput::Cells)
        } else {
            serde_json::from_value(v).map(MapInput::Matrices)
        };
        r.map_err(serde::de::Error::custom)
    }
}

/// A complex ready for use, with its matching when it came from cells.
#[derive(Debug, Clone)]
pub struct ResolvedComplex {
    pub complex: ChainComplex,
    pub morse: Option<MorseData>,
}

impl ComplexInput {
    pub fn resolve(&self) -> Result<ResolvedComplex, FormatError> {
        match self {
            ComplexInput::Cellular(doc) => {
                let d = doc.to_morse_data()?;
                let m = build_morse_complex(&d)?;
                Ok(ResolvedComplex {
                    complex: m.complex,
                    morse: Some(d),
                })
            }
            ComplexInput::Chain(doc) => Ok(ResolvedComplex {
                complex: doc.to_z2()?,
                morse: None,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapDoc {
    pub shift: i32,
    /// `matrices[k]` maps source degree `k` to target degree `k + shift`.
    pub matrices: BTreeMap<i32, Vec<Vec<u8>>>,
}

impl ChainMapDoc {
    pub fn from_map(f: &ChainMap) -> Self {
        Self {
            shift: f.shift(),
            matrices: f.matrices().iter().map(|(&k, m)| (k, m.to_rows())).collect(),
        }
    }

    pub fn to_map(&self, source: &ChainComplex, target: &ChainComplex) -> Result<ChainMap, FormatError> {
        let mut mats = BTreeMap::new();
        for (&k, rows) in &self.matrices {
            if !source.degrees().contains(&k) {
                return Err(FormatError::Invalid(format!(
                    "map matrix given for degree {k} outside the source"
                )));
            }
            let shape = (target.dim(k + self.shift), source.dim(k));
            mats.insert(k, z2_matrix(rows, shape, &format!("map degree {k}"))?);
        }
        Ok(ChainMap::new(source.clone(), target.clone(), self.shift, mats)?)
    }
}

/// A cellular automorphism by cell labels; unmentioned cells are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismDoc {
    pub cells: BTreeMap<String, String>,
}

/// Told apart by the `cells` key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MapInput {
    Matrices(ChainMapDoc),
    Cells(AutomorphismDoc),
}

impl MapInput {
    /// The map `source → target`. A cellular automorphism needs both ends
    /// given as cells on one complex; it is pushed through the source
    /// matching and carried to the target matching by continuation.
    pub fn resolve(&self, source: &ResolvedComplex, target: &ResolvedComplex) -> Result<ChainMap, FormatError> {
        match self {
            MapInput::Matrices(doc) => doc.to_map(&source.complex, &target.complex),
            MapInput::Cells(doc) => {
                let (Some(ds), Some(dt)) = (&source.morse, &target.morse) else {
                    return Err(FormatError::Invalid(
                        "a cellular automorphism needs both complexes given as cells".to_string(),
                    ));
                };
                let auto = CellularMap::from_labels(ds.complex(), &doc.cells)?;
                let pushed = pushforward_map(ds, &auto)?;
                let carry = continuation_map(ds, dt)?;
                Ok(carry.after(&pushed)?)
            }
        }
    }
}

/// Inputs of a Wang cone: `phi, phi_g : plus → minus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WangDoc {
    pub minus: ComplexInput,
    pub plus: ComplexInput,
    pub phi: MapInput,
    pub phi_g: MapInput,
}

impl WangDoc {
    pub fn resolve(&self) -> Result<WangComplex, FormatError> {
        let minus = self.minus.resolve()?;
        let plus = self.plus.resolve()?;
        let phi = self.phi.resolve(&plus, &minus)?;
        let phi_g = self.phi_g.resolve(&plus, &minus)?;
        Ok(build_wang(minus.complex, plus.complex, phi, phi_g)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    pub degree: i32,
    pub chain: Vec<String>,
}

impl CycleDoc {
    pub fn to_chain(&self, c: &ChainComplex) -> Result<F2Vector, FormatError> {
        for l in &self.chain {
            if c.find(l).map(|(k, _)| k) != Some(self.degree) {
                return Err(FormatError::Invalid(format!(
                    "`{l}` is not a degree-{} generator",
                    self.degree
                )));
            }
        }
        c.chain_from_labels(self.degree, &self.chain)
            .ok_or_else(|| FormatError::Invalid("chain labels do not resolve".to_string()))
    }
}
