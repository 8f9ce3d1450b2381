//! The reflection representation σᵢ(x) = x − B(x, eᵢ)eᵢ with
//! B(eᵢ, eⱼ) = −2cos(π/mᵢⱼ).

use super::types::CoxeterSystem;
use super::word::Word;
use crate::error::{Error, Result};
use crate::exact::{Matrix, QInt, QuadField, UniPoly, ZMat};

/// Bilinear form of a matrix-mode system over `Z[ω]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionRep {
    pub n: usize,
    pub field: QuadField,
    /// Row-major `B(e_i, e_j)`.
    bform: Vec<QInt>,
    /// Per generator, the `(j, B_ij)` with `B_ij ≠ 0`.
    sparse: Vec<Vec<(usize, QInt)>>,
}

/// The coefficient field, or an error for bonds outside {2,3,4,5}.
pub fn field_of(sys: &CoxeterSystem) -> Result<QuadField> {
    let n = sys.rank();
    let (mut four, mut five) = (false, false);
    for i in 0..n {
        for j in 0..n {
            match sys.m(i, j) {
                1..=3 => {}
                4 => four = true,
                5 => five = true,
                _ => return Err(Error::NotMatrixMode(sys.type_spec())),
            }
        }
    }
    match (four, five) {
        (true, true) => Err(Error::FieldMismatch(2, 5)),
        (true, false) => Ok(QuadField::Sqrt2),
        (false, true) => Ok(QuadField::Sqrt5),
        (false, false) => Ok(QuadField::Rational),
    }
}

impl ReflectionRep {
    pub fn new(sys: &CoxeterSystem) -> Result<ReflectionRep> {
        let field = field_of(sys)?;
        let n = sys.rank();
        let mut bform = vec![QInt::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                bform[i * n + j] = match sys.m(i, j) {
                    1 => QInt::int(2),
                    2 => QInt::ZERO,
                    3 => QInt::int(-1),
                    // −√2 and −φ are both −ω in their rings
                    _ => QInt::new(0, -1),
                };
            }
        }
        let sparse = (0..n)
            .map(|i| (0..n).filter(|&j| !bform[i * n + j].is_zero()).map(|j| (j, bform[i * n + j])).collect())
            .collect();
        Ok(ReflectionRep { n, field, bform, sparse })
    }

    pub fn bilinear(&self, i: usize, j: usize) -> QInt {
        self.bform[i * self.n + j]
    }

    pub fn generator(&self, i: usize) -> ZMat {
        let mut m = ZMat::identity(self.n, self.field);
        self.mul_right(&mut m, i).expect("generator entries are small");
        m
    }

    pub fn generators(&self) -> Vec<ZMat> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    /// Generators as exact scalar matrices.
    pub fn generator_matrices(&self) -> Vec<Matrix> {
        self.generators().iter().map(|g| zmat_to_matrix(g)).collect()
    }

    /// `m ← m·σ_i`: column j loses `B_ij` times column i.
    pub fn mul_right(&self, m: &mut ZMat, i: usize) -> Result<()> {
        let n = self.n;
        for r in 0..n {
            let x = m.data[r * n + i];
            if x.is_zero() {
                continue;
            }
            for &(j, b) in &self.sparse[i] {
                let cell = &mut m.data[r * n + j];
                *cell = cell.sub(x.mul(b, self.field)?)?;
            }
        }
        Ok(())
    }

    /// `m ← σ_i·m`: row i loses `Σ_j B_ij` times row j.
    pub fn mul_left(&self, m: &mut ZMat, i: usize) -> Result<()> {
        let n = self.n;
        let mut row = vec![QInt::ZERO; n];
        for &(j, b) in &self.sparse[i] {
            for (c, acc) in row.iter_mut().enumerate() {
                let x = m.data[j * n + c];
                if !x.is_zero() {
                    *acc = acc.add(x.mul(b, self.field)?)?;
                }
            }
        }
        for (c, d) in row.into_iter().enumerate() {
            let cell = &mut m.data[i * n + c];
            *cell = cell.sub(d)?;
        }
        Ok(())
    }

    pub fn word_matrix(&self, w: &Word) -> Result<ZMat> {
        let mut m = ZMat::identity(self.n, self.field);
        for &l in w.letters() {
            self.mul_right(&mut m, l as usize)?;
        }
        Ok(m)
    }

    /// `p_g(λ) = det(λI − ρ(g))` for the element of `w`.
    pub fn word_char_poly(&self, w: &Word) -> Result<UniPoly> {
        let m = self.word_matrix(w)?;
        Ok(qint_poly(&m.char_poly()?, self.field))
    }
}

pub fn zmat_to_matrix(m: &ZMat) -> Matrix {
    Matrix::new(m.n, m.n, m.data.iter().map(|x| x.to_scalar(m.field)).collect())
        .expect("square data")
}

pub fn qint_poly(c: &[QInt], field: QuadField) -> UniPoly {
    UniPoly::new(c.iter().map(|x| x.to_scalar(field)).collect())
}
