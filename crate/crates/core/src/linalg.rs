//! Small dense square matrices over a generic [`Scalar`].

use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T = Rational> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(values: Vec<T>) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        Ok(Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// `qᵀ M q` for an integer vector.
    pub fn quadratic_form(&self, q: &[i64]) -> Result<T> {
        let v: Vec<T> = q.iter().map(|&x| T::from_int(x)).collect();
        let mv = self.mul_vec(&v)?;
        Ok(v.into_iter()
            .zip(mv)
            .fold(T::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Gram matrix `AᵀA` of the generator matrix whose columns are the lattice basis.
    pub fn gram(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            (0..n).fold(T::zero(), |acc, k| {
                acc + self[(k, i)].clone() * self[(k, j)].clone()
            })
        })
    }

    /// Inverse by Gauss–Jordan elimination with largest-magnitude pivots.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&r, &s| {
                    a[(r, col)]
                        .abs()
                        .partial_cmp(&a[(s, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / p.clone();
                inv[(col, j)] = inv[(col, j)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    /// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`, by
    /// Bareiss fraction-free elimination without pivoting. Once a zero
    /// pivot appears the remaining minors are computed directly.
    pub fn leading_principal_minors(&self) -> Vec<T> {
        let n = self.n;
        let mut m = self.clone();
        let mut minors = Vec::with_capacity(n);
        let mut prev = T::one();
        for k in 0..n {
            let pivot = m[(k, k)].clone();
            minors.push(pivot.clone());
            if pivot.is_zero() {
                for size in k + 2..=n {
                    minors.push(self.leading_block(size).determinant());
                }
                return minors;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[(i, j)] = (pivot.clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone())
                        / prev.clone();
                }
            }
            prev = pivot;
        }
        minors
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> T {
        let n = self.n;
        let mut m = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[(i, j)] = (m[(k, k)].clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone())
                        / prev.clone();
                }
            }
            prev = m[(k, k)].clone();
        }
        let det = if n == 0 {
            T::one()
        } else {
            m[(n - 1, n - 1)].clone()
        };
        if negate {
            -det
        } else {
            det
        }
    }

    /// Sylvester's criterion: symmetric with all leading principal minors positive.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .leading_principal_minors()
                .iter()
                .all(|m| m.is_positive())
    }

    fn leading_block(&self, size: usize) -> Self {
        Self::from_fn(size, |i, j| self[(i, j)].clone())
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        for j in 0..self.n {
            self.data.swap(r * self.n + j, s * self.n + j);
        }
    }
}

/// Gram matrix `G = AᵀA` of a nonsingular generator matrix `A`.
pub fn gram_from_generators<T: Scalar>(generators: &Matrix<T>) -> Result<Matrix<T>> {
    if generators.determinant().is_zero() {
        return Err(Error::Singular);
    }
    Ok(generators.gram())
}

/// `Q = G⁻¹`, exact for rational input.
pub fn inverse_exact<T: Scalar>(gram: &Matrix<T>) -> Result<Matrix<T>> {
    gram.inverse()
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Scalar + fmt::Display> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for row in self.rows() {
            let strings: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| crate::scalar::parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::from_rows(rows).map_err(D::Error::custom)
    }
}

impl FromStr for Matrix<Rational> {
    type Err = Error;

    /// Rows separated by `;`, entries by `,`: `"1,0;0,1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(crate::scalar::parse_rational)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_generators() {
        let a = Matrix::<Rational>::identity(4);
        let g = gram_from_generators(&a).unwrap();
        assert_eq!(g, Matrix::identity(4));
        assert_eq!(inverse_exact(&g).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn diagonal_generators() {
        let a = Matrix::diagonal(vec![int(2), int(1), int(1), int(1)]);
        let q = inverse_exact(&gram_from_generators(&a).unwrap()).unwrap();
        assert_eq!(
            q,
            Matrix::diagonal(vec![rational(1, 4), int(1), int(1), int(1)])
        );
    }

    #[test]
    fn singular_input() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(gram_from_generators(&a), Err(Error::Singular));
        assert_eq!(a.inverse(), Err(Error::Singular));
        assert_eq!(a.determinant(), int(0));
    }

    #[test]
    fn multiply_back_gives_identity() {
        let g = Matrix::from_rows(vec![
            vec![int(2), rational(1, 2), int(0)],
            vec![rational(1, 2), int(3), rational(-1, 3)],
            vec![int(0), rational(-1, 3), rational(5, 4)],
        ])
        .unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, Matrix::identity(3));
        assert_eq!(&inv * &g, Matrix::identity(3));
    }

    #[test]
    fn minors_and_definiteness() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(a.leading_principal_minors(), vec![int(2), int(3), int(4)]);
        assert!(a.is_positive_definite());
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(b.leading_principal_minors(), vec![int(0), int(-1)]);
        assert!(!b.is_positive_definite());
        let c = m(&[&[1, 2], &[3, 1]]);
        assert!(!c.is_positive_definite());
    }

    #[test]
    fn determinant_needs_pivoting() {
        let a = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(a.determinant(), int(-3));
    }

    #[test]
    fn json_and_text() {
        let a = Matrix::from_rows(vec![
            vec![int(1), rational(1, 2)],
            vec![rational(1, 2), int(3)],
        ])
        .unwrap();
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"[["1","1/2"],["1/2","3"]]"#);
        let back: Matrix = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
        assert_eq!("1,1/2;1/2,3".parse::<Matrix>().unwrap(), a);
        assert!("1,2;3".parse::<Matrix>().is_err());
    }

    #[test]
    fn float_instance() {
        let a = Matrix::<f64>::from_rows(vec![vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let inv = a.inverse().unwrap();
        let prod = &a * &inv;
        assert!((prod[(0, 0)] - 1.0).abs() < 1e-12 && prod[(0, 1)].abs() < 1e-12);
        assert!(a.is_positive_definite());
        assert!((a.determinant() - 11.0).abs() < 1e-12);
    }
}
