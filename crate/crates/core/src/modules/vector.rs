use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, CMatrix};

/// Coordinates of a module vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModVec(Vec<Complex64>);

impl ModVec {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(self.0.iter().map(|&c| c * z).collect())
    }

    /// `self += z * other`.
    pub fn axpy(&mut self, z: Complex64, other: &ModVec) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a += z * b;
        }
    }

    /// Euclidean norm of the coordinates; unrelated to the module norm.
    pub fn coord_norm(&self) -> f64 {
        vec_norm(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &ModVec) -> ModVec {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    /// Split after the first `at` coordinates.
    pub fn split_at(&self, at: usize) -> (ModVec, ModVec) {
        let (a, b) = self.0.split_at(at);
        (Self(a.to_vec()), Self(b.to_vec()))
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() == expected {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected,
                got: self.len(),
            })
        }
    }

    /// `m * self` for a linear map between coordinate spaces.
    pub fn mapped(&self, m: &CMatrix) -> Result<ModVec> {
        self.check_len(m.cols())?;
        Ok(Self(m.apply(&self.0)))
    }
}

impl Index<usize> for ModVec {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &ModVec {
    type Output = ModVec;

    fn add(self, rhs: &ModVec) -> ModVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        ModVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ModVec {
    type Output = ModVec;

    fn sub(self, rhs: &ModVec) -> ModVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        ModVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ModVec {
    type Output = ModVec;

    fn neg(self) -> ModVec {
        ModVec(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<Complex64>> for ModVec {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}
