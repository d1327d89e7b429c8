//! JSON frame files.
//!
//! ```json
//! {"field":"real","n":2,"m":3,"vectors":[[1.0,0.0],[0.0,1.0],[1.0,1.0]]}
//! ```
//!
//! Complex entries are two-element `[re, im]` arrays.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Frame;
use crate::error::Error;
use crate::linalg::{Field, Scalar, Tolerance};

/// One vector entry on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub fn encode_vector<T: Scalar>(v: &[T]) -> Vec<Entry> {
    v.iter()
        .map(|&x| match T::FIELD {
            Field::Real => Entry::Real(x.re()),
            Field::Complex => Entry::Complex([x.re(), x.im()]),
        })
        .collect()
}

pub fn decode_vector<T: Scalar>(v: &[Entry]) -> Result<Vec<T>, Error> {
    v.iter()
        .map(|e| {
            let (re, im) = match *e {
                Entry::Real(re) => (re, 0.0),
                Entry::Complex([re, im]) => {
                    if T::FIELD == Field::Real {
                        return Err(Error::Parse(format!(
                            "complex entry [{re}, {im}] in a real vector"
                        )));
                    }
                    (re, im)
                }
            };
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse("non-finite entry".into()));
            }
            T::from_parts(re, im).ok_or_else(|| Error::Parse("entry outside the field".into()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub field: Field,
    pub n: usize,
    pub m: usize,
    pub vectors: Vec<Vec<Entry>>,
}

/// A frame over a field chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFrame {
    Real(Frame<f64>),
    Complex(Frame<Complex64>),
}

impl From<Frame<f64>> for AnyFrame {
    fn from(f: Frame<f64>) -> Self {
        AnyFrame::Real(f)
    }
}

impl From<Frame<Complex64>> for AnyFrame {
    fn from(f: Frame<Complex64>) -> Self {
        AnyFrame::Complex(f)
    }
}

impl AnyFrame {
    pub fn field(&self) -> Field {
        match self {
            AnyFrame::Real(_) => Field::Real,
            AnyFrame::Complex(_) => Field::Complex,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyFrame::Real(f) => f.dim(),
            AnyFrame::Complex(f) => f.dim(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyFrame::Real(f) => f.len(),
            AnyFrame::Complex(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_file(&self) -> FrameFile {
        fn build<T: Scalar>(f: &Frame<T>) -> FrameFile {
            FrameFile {
                field: T::FIELD,
                n: f.dim(),
                m: f.len(),
                vectors: f.vectors().iter().map(|v| encode_vector(v)).collect(),
            }
        }
        match self {
            AnyFrame::Real(f) => build(f),
            AnyFrame::Complex(f) => build(f),
        }
    }

    pub fn from_file(file: &FrameFile, tol: &Tolerance) -> Result<Self, Error> {
        fn build<T: Scalar>(file: &FrameFile, tol: &Tolerance) -> Result<Frame<T>, Error> {
            let vectors = file
                .vectors
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if v.len() != file.n {
                        return Err(Error::Parse(format!(
                            "vector {} has length {}, expected n = {}",
                            i + 1,
                            v.len(),
                            file.n
                        )));
                    }
                    decode_vector(v).map_err(|e| Error::Parse(format!("vector {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Frame::with_tolerance(file.n, vectors, tol)
        }
        if file.vectors.len() != file.m {
            return Err(Error::Parse(format!(
                "header says m = {} but {} vectors are listed",
                file.m,
                file.vectors.len()
            )));
        }
        Ok(match file.field {
            Field::Real => AnyFrame::Real(build(file, tol)?),
            Field::Complex => AnyFrame::Complex(build(file, tol)?),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("frame serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, tol: &Tolerance) -> Result<Self, Error> {
        let file: FrameFile = serde_json::from_str(text)?;
        Self::from_file(&file, tol)
    }

    pub fn read(path: &Path, tol: &Tolerance) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, tol)
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
