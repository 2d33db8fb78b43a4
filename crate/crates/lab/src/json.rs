//! JSON encodings shared by scenarios, instance files and reports.
//!
//! Complex numbers are `[re, im]` pairs, matrices nested row arrays, algebra
//! elements lists of blocks and module vectors flat coordinate lists.

use std::fmt;

use finsler::algebra::AlgElement;
use finsler::linalg::{CMatrix, Complex64};
use finsler::modules::ModVec;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, LabResult};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

pub fn complex(z: Complex64) -> Complex {
    [z.re, z.im]
}

pub fn to_complex(z: &Complex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn matrix(m: &CMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| complex(m[(i, j)])).collect())
        .collect()
}

/// `cols` is used only when `m` has no rows.
pub fn to_matrix(m: &Matrix, cols: usize) -> LabResult<CMatrix> {
    let width = m.first().map_or(cols, Vec::len);
    if let Some(i) = m.iter().position(|row| row.len() != width) {
        return Err(LabError::Invalid(format!(
            "matrix row {i} has {} entries, expected {width}",
            m[i].len()
        )));
    }
    let data = m.iter().flatten().map(to_complex).collect();
    Ok(CMatrix::new(m.len(), width, data)?)
}

pub fn element(a: &AlgElement) -> Vec<Matrix> {
    a.blocks().iter().map(matrix).collect()
}

pub fn vector(v: &ModVec) -> Vec<Complex> {
    v.as_slice().iter().copied().map(complex).collect()
}

pub fn to_vector(v: &[Complex]) -> ModVec {
    ModVec::new(v.iter().map(to_complex).collect())
}

/// A real number that may be infinite or NaN: finite values are JSON
/// numbers, the others the strings `"inf"`, `"-inf"` and `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extended(pub f64);

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Extended;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"a number or one of "inf", "-inf", "nan""#)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Extended, E> {
                Ok(Extended(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Extended, E> {
                Ok(Extended(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Extended, E> {
                Ok(Extended(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Extended, E> {
                match v {
                    "inf" => Ok(Extended(f64::INFINITY)),
                    "-inf" => Ok(Extended(f64::NEG_INFINITY)),
                    "nan" => Ok(Extended(f64::NAN)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_round_trip() {
        for x in [1.5, f64::INFINITY, f64::NEG_INFINITY] {
            let s = serde_json::to_string(&Extended(x)).unwrap();
            assert_eq!(serde_json::from_str::<Extended>(&s).unwrap().0, x);
        }
        assert_eq!(
            serde_json::to_string(&Extended(f64::INFINITY)).unwrap(),
            "\"inf\""
        );
        assert!(serde_json::from_str::<Extended>("\"nan\"")
            .unwrap()
            .0
            .is_nan());
        assert!(serde_json::from_str::<Extended>("\"big\"").is_err());
    }

    #[test]
    fn matrices_keep_their_shape() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(to_matrix(&matrix(&m), 0).unwrap(), m);
        assert_eq!(to_matrix(&vec![], 3).unwrap().shape(), (0, 3));
        assert!(to_matrix(&vec![vec![[0.0, 0.0]], vec![]], 0).is_err());
    }
}
