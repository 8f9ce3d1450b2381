//! Dense matrices over [`QuadScalar`].

use std::fmt;

use super::poly::UniPoly;
use super::quad::QuadScalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<QuadScalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<QuadScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<QuadScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| QuadScalar::from_int(x)).collect()).collect(),
        )
        .expect("rectangular integer rows")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![QuadScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = QuadScalar::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadScalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Entries in row-major order.
    pub fn data(&self) -> &[QuadScalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[QuadScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn try_mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].try_add(&x.try_mul(y)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, o: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch("matrix sum shapes differ".into()));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &QuadScalar) -> Result<Matrix> {
        let data = self.data.iter().map(|a| a.try_mul(k)).collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<QuadScalar> {
        let n = self.require_square()?;
        (0..n).try_fold(QuadScalar::zero(), |acc, i| acc.try_add(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn pow(&self, e: u32) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(n);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Gauss–Jordan elimination, mirroring every row operation on `partner`.
    /// Returns the determinant, or `None` when the matrix is singular.
    fn eliminate(&self, partner: Option<&mut Matrix>) -> Result<Option<QuadScalar>> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut inv = partner;
        let mut det = QuadScalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(None);
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    if let Some(m) = inv.as_deref_mut() {
                        m.data.swap(p * n + j, col * n + j);
                    }
                }
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det = det.try_mul(&piv)?;
            let piv_inv = piv.try_inv()?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].try_mul(&piv_inv)?;
                if let Some(m) = inv.as_deref_mut() {
                    m.data[col * n + j] = m.data[col * n + j].try_mul(&piv_inv)?;
                }
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let t = a.get(col, j).try_mul(&f)?;
                    a.data[r * n + j] = a.data[r * n + j].try_sub(&t)?;
                    if let Some(m) = inv.as_deref_mut() {
                        let t = m.get(col, j).try_mul(&f)?;
                        m.data[r * n + j] = m.data[r * n + j].try_sub(&t)?;
                    }
                }
            }
        }
        Ok(Some(det))
    }

    pub fn det(&self) -> Result<QuadScalar> {
        Ok(self.eliminate(None)?.unwrap_or_else(QuadScalar::zero))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut inv = Matrix::identity(n);
        match self.eliminate(Some(&mut inv))? {
            Some(_) => Ok(inv),
            None => Err(Error::DivisionByZero),
        }
    }

    /// `det(λI − M)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Result<UniPoly> {
        let n = self.require_square()?;
        let mut coeffs = vec![QuadScalar::zero(); n + 1];
        coeffs[n] = QuadScalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.try_mul(&m)?;
            for i in 0..n {
                let idx = i * n + i;
                next.data[idx] = next.data[idx].try_add(&coeffs[n - k + 1])?;
            }
            let t = self.try_mul(&next)?.trace()?;
            coeffs[n - k] = (-t).try_div(&QuadScalar::from_int(k as i64))?;
            m = next;
        }
        Ok(UniPoly::new(coeffs))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_char_poly() {
        let p = Matrix::identity(2).char_poly().unwrap();
        assert_eq!(p, UniPoly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn a2_coxeter_element() {
        let s1 = Matrix::from_ints(&[&[-1, 1], &[0, 1]]);
        let s2 = Matrix::from_ints(&[&[1, 0], &[1, -1]]);
        let w = s1.try_mul(&s2).unwrap();
        assert_eq!(w, Matrix::from_ints(&[&[0, -1], &[1, -1]]));
        assert_eq!(w.char_poly().unwrap(), UniPoly::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn reflection_char_poly() {
        // σ1 for A3: eigenvalues −1, 1, 1
        let s = Matrix::from_ints(&[&[-1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let expect = UniPoly::from_ints(&[1, 1])
            .try_mul(&UniPoly::from_ints(&[-1, 1]).pow(2).unwrap())
            .unwrap();
        assert_eq!(s.char_poly().unwrap(), expect);
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det().unwrap(), QuadScalar::one());
        assert!(m.try_mul(&m.inverse().unwrap()).unwrap().is_identity());
        let sing = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(sing.det().unwrap().is_zero());
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn non_square_rejected() {
        let m = Matrix::zeros(2, 3);
        assert!(matches!(m.char_poly(), Err(Error::NotSquare { rows: 2, cols: 3 })));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-3i64..4, -2i64..3), n * n).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(a, b)| QuadScalar::from_int(a).try_add(&QuadScalar::phi().scale_int(b)).unwrap())
                .collect();
            Matrix::new(n, n, data).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn conjugation_invariance(m in arb_matrix(3), p in arb_matrix(3)) {
            prop_assume!(!p.det().unwrap().is_zero());
            let conj = p.try_mul(&m).unwrap().try_mul(&p.inverse().unwrap()).unwrap();
            prop_assert_eq!(conj.char_poly().unwrap(), m.char_poly().unwrap());
        }

        #[test]
        fn constant_term_is_signed_det(m in arb_matrix(4)) {
            let p = m.char_poly().unwrap();
            let c0 = p.eval(&QuadScalar::zero()).unwrap();
            prop_assert_eq!(c0, m.det().unwrap());
            let m3 = Matrix::new(3, 3, m.data[..9].to_vec()).unwrap();
            let c0 = m3.char_poly().unwrap().eval(&QuadScalar::zero()).unwrap();
            prop_assert_eq!(c0, -m3.det().unwrap());
        }
    }
}
