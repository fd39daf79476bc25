//! Quadratic forms of flat tori and the Conway–Sloane pair `Q⁺`, `Q⁻`.
//!
//! A flat torus `T = R^n / A Z^n` is determined by `Q = (AᵀA)⁻¹`; its
//! Laplace eigenvalues are `4π² qᵀQq` for `q ∈ Z^n`. The Conway–Sloane
//! family is a pair of symbolic 4×4 matrices whose entries are linear
//! forms in four positive parameters `a, b, c, d`.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::LazyLock;

use num_traits::Signed;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{LinearForm, VARIABLES};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};
use crate::Rational;

/// Four strictly positive rational parameters `(a, b, c, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamTuple {
    values: [Rational; 4],
}

impl ParamTuple {
    pub fn new(values: [Rational; 4]) -> Result<Self> {
        for (v, name) in values.iter().zip(VARIABLES) {
            if !v.is_positive() {
                return Err(Error::NonPositiveParameter {
                    name,
                    value: v.to_string(),
                });
            }
        }
        Ok(ParamTuple { values })
    }

    pub fn from_ints(values: [i64; 4]) -> Result<Self> {
        Self::new(values.map(scalar::int))
    }

    pub fn values(&self) -> &[Rational; 4] {
        &self.values
    }

    pub fn all_distinct(&self) -> bool {
        let v = &self.values;
        (0..4).all(|i| (0..i).all(|j| v[i] != v[j]))
    }

    pub fn has_equal_pair(&self) -> bool {
        !self.all_distinct()
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.values;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for ParamTuple {
    type Err = Error;

    /// Comma-separated rationals, e.g. `1,2,3,4` or `1/2,1,3/2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::ParseParams {
                input: s.to_string(),
                reason: format!("expected 4 comma-separated values, found {}", parts.len()),
            });
        }
        let mut values: [Rational; 4] = Default::default();
        for (slot, part) in values.iter_mut().zip(parts) {
            *slot = scalar::parse_rational(part)?;
        }
        Self::new(values)
    }
}

impl Serialize for ParamTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        scalar::serde_rational::array4::serialize(&self.values, s)
    }
}

/// Which member of the isospectral pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn other(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Precondition(format!(
                "sign must be '+' or '-', got {s:?}"
            ))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Integer vector `q` indexing an eigenfunction `exp(2πi qᵀy)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(components: Vec<i64>) -> Self {
        LatticeVector(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `Σ|qᵢ|`.
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn negated(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for LatticeVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Symmetric 4×4 matrix of linear forms in `a, b, c, d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix<T = Rational> {
    entries: [[LinearForm<T>; 4]; 4],
}

impl<T: Scalar> SymMatrix<T> {
    pub fn new(entries: [[LinearForm<T>; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(SymMatrix { entries })
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &LinearForm<T> {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[[LinearForm<T>; 4]; 4] {
        &self.entries
    }

    /// Numeric matrix at the point `(a, b, c, d)`.
    pub fn evaluate_at(&self, point: &[T; 4]) -> Matrix<T> {
        Matrix::from_fn(4, |i, j| self.entries[i][j].eval_at(point))
    }

    /// `UᵀSU` for a numeric 4×4 matrix `U`.
    pub fn congruence(&self, u: &Matrix<T>) -> Result<Self> {
        if u.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: u.dim(),
            });
        }
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = LinearForm::zero();
                for k in 0..4 {
                    for l in 0..4 {
                        let w = u[(k, i)].clone() * u[(l, j)].clone();
                        if !w.is_zero() {
                            acc.add_scaled(&w, &self.entries[k][l]);
                        }
                    }
                }
                acc
            })
        });
        SymMatrix::new(entries)
    }

    /// `qᵀQq` as a linear form in the parameters.
    pub fn quad_form(&self, q: &[i64]) -> Result<LinearForm<T>> {
        if q.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: q.len(),
            });
        }
        let mut acc = LinearForm::zero();
        for i in 0..4 {
            if q[i] == 0 {
                continue;
            }
            // diagonal once, off-diagonal pairs doubled
            acc.add_scaled(&T::from_int(q[i] * q[i]), &self.entries[i][i]);
            for j in i + 1..4 {
                if q[j] != 0 {
                    acc.add_scaled(&T::from_int(2 * q[i] * q[j]), &self.entries[i][j]);
                }
            }
        }
        Ok(acc)
    }
}

impl SymMatrix<Rational> {
    pub fn evaluate(&self, p: &ParamTuple) -> Matrix<Rational> {
        self.evaluate_at(p.values())
    }
}

impl<T: Scalar + fmt::Display> Serialize for SymMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for row in &self.entries {
            let strings: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

/// `Q⁺(a,b,c,d)`: `1/12` times the integer coefficient table below.
pub fn make_q_plus() -> SymMatrix {
    const TABLE: [[[i64; 4]; 4]; 4] = [
        [[9, 1, 1, 1], [3, -3, -1, 1], [3, 1, -3, -1], [3, -1, 1, -3]],
        [[3, -3, -1, 1], [1, 9, 1, 1], [1, -3, 3, -1], [1, 3, -1, -3]],
        [[3, 1, -3, -1], [1, -3, 3, -1], [1, 1, 9, 1], [1, -1, -3, 3]],
        [[3, -1, 1, -3], [1, 3, -1, -3], [1, -1, -3, 3], [1, 1, 1, 9]],
    ];
    let twelfth = scalar::rational(1, 12);
    let entries = TABLE.map(|row| row.map(|c| LinearForm::from_ints(c).scale(&twelfth)));
    SymMatrix::new(entries).expect("Q+ table is symmetric")
}

/// `U = (1/2)·[[-1,1,1,1],[-1,-1,-1,1],[-1,1,-1,-1],[-1,-1,1,-1]]`.
pub fn make_u() -> Matrix {
    const SIGNS: [[i64; 4]; 4] = [
        [-1, 1, 1, 1],
        [-1, -1, -1, 1],
        [-1, 1, -1, -1],
        [-1, -1, 1, -1],
    ];
    Matrix::from_fn(4, |i, j| scalar::rational(SIGNS[i][j], 2))
}

/// `Q⁻ = UᵀQ⁺U`, computed symbolically.
pub fn make_q_minus() -> SymMatrix {
    make_q_plus().congruence(&make_u()).expect("U is 4x4")
}

static Q_PLUS: LazyLock<SymMatrix> = LazyLock::new(make_q_plus);
static Q_MINUS: LazyLock<SymMatrix> = LazyLock::new(make_q_minus);

pub fn q_plus() -> &'static SymMatrix {
    &Q_PLUS
}

pub fn q_minus() -> &'static SymMatrix {
    &Q_MINUS
}

pub fn conway_sloane(sign: Sign) -> &'static SymMatrix {
    match sign {
        Sign::Plus => q_plus(),
        Sign::Minus => q_minus(),
    }
}

/// `qᵀQq` for a 4-vector, without the `4π²` factor.
pub fn quad_form(q_matrix: &SymMatrix, q: &LatticeVector) -> Result<LinearForm> {
    q_matrix.quad_form(q)
}
