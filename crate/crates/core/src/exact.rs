//! Linear forms `c_a·a + c_b·b + c_c·c + c_d·d` in the four torus parameters.
//!
//! A form is its coefficient tuple; no common factor is pulled out, so
//! `(1/3)(4,25,1,0)` and `(4/3,25/3,1/3,0)` are the same value. The
//! derived ordering is lexicographic on `(c_a, c_b, c_c, c_d)`, which
//! gives a strict total order for sets of forms.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::torus::ParamTuple;
use crate::Rational;

/// Variable names in coefficient order.
pub const VARIABLES: [char; 4] = ['a', 'b', 'c', 'd'];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm<T = Rational> {
    coeffs: [T; 4],
}

impl<T: Scalar> LinearForm<T> {
    pub fn new(coeffs: [T; 4]) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero() -> Self {
        LinearForm {
            coeffs: [T::zero(), T::zero(), T::zero(), T::zero()],
        }
    }

    /// The form picking out parameter `index` (0 = a, ..., 3 = d).
    pub fn variable(index: usize) -> Self {
        let mut f = Self::zero();
        f.coeffs[index] = T::one();
        f
    }

    pub fn from_ints(coeffs: [i64; 4]) -> Self {
        LinearForm {
            coeffs: coeffs.map(T::from_int),
        }
    }

    pub fn coeffs(&self) -> &[T; 4] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> [T; 4] {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &T) -> Self {
        LinearForm {
            coeffs: self.coeffs.clone().map(|c| c * r.clone()),
        }
    }

    /// Evaluates at `(a, b, c, d)` without any positivity check.
    pub fn eval_at(&self, point: &[T; 4]) -> T {
        self.coeffs
            .iter()
            .zip(point)
            .fold(T::zero(), |acc, (c, x)| acc + c.clone() * x.clone())
    }

    pub fn coefficient_sum(&self) -> T {
        self.coeffs.iter().cloned().fold(T::zero(), |a, c| a + c)
    }

    pub fn add_scaled(&mut self, r: &T, other: &Self) {
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c = c.clone() + r.clone() * o.clone();
        }
    }
}

impl LinearForm<Rational> {
    /// Exact value at a positive parameter tuple.
    pub fn eval(&self, p: &ParamTuple) -> Rational {
        self.eval_at(p.values())
    }

    /// Positive `g` with `self / g` a primitive integer vector (zero for the zero form).
    pub fn content(&self) -> Rational {
        scalar::content(&self.coeffs)
    }

    /// Splits the form as `g · (n_a, n_b, n_c, n_d)` with primitive integers `n`.
    pub fn factored(&self) -> (Rational, [BigInt; 4]) {
        let g = self.content();
        if g.is_zero() {
            return (g, std::array::from_fn(|_| BigInt::zero()));
        }
        let ints = std::array::from_fn(|i| (&self.coeffs[i] / &g).to_integer());
        (g, ints)
    }

    /// Human-oriented rendering that pulls out the content, e.g. `(1/3)(4a + 25b + c)`.
    pub fn display_factored(&self) -> Factored<'_> {
        Factored(self)
    }
}

pub fn compare_total<T: Ord>(x: &LinearForm<T>, y: &LinearForm<T>) -> std::cmp::Ordering {
    x.cmp(y)
}

impl<T: Scalar> Add for LinearForm<T> {
    type Output = LinearForm<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Add<&LinearForm<T>> for &LinearForm<T> {
    type Output = LinearForm<T>;
    fn add(self, rhs: &LinearForm<T>) -> LinearForm<T> {
        LinearForm {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()),
        }
    }
}

impl<T: Scalar> Sub<&LinearForm<T>> for &LinearForm<T> {
    type Output = LinearForm<T>;
    fn sub(self, rhs: &LinearForm<T>) -> LinearForm<T> {
        LinearForm {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()),
        }
    }
}

impl<T: Scalar> Sub for LinearForm<T> {
    type Output = LinearForm<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for LinearForm<T> {
    type Output = LinearForm<T>;
    fn neg(self) -> Self {
        LinearForm {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl<T: Scalar> Sum for LinearForm<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Canonical text `c_a*a + c_b*b + c_c*c + c_d*d`, zero terms omitted,
/// `0` for the zero form.
impl<T: Scalar + fmt::Display> fmt::Display for LinearForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(VARIABLES) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{v}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<T: Scalar + FromStr> FromStr for LinearForm<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::ParseForm {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut form = Self::zero();
        if s == "0" {
            return Ok(form);
        }
        let mut last: Option<usize> = None;
        for term in s.split(" + ") {
            let (coef, var) = term
                .rsplit_once('*')
                .ok_or_else(|| fail("term without '*'"))?;
            let idx = match var {
                "a" => 0,
                "b" => 1,
                "c" => 2,
                "d" => 3,
                _ => return Err(fail("unknown variable")),
            };
            if last.is_some_and(|l| l >= idx) {
                return Err(fail("variables out of order or repeated"));
            }
            last = Some(idx);
            let c: T = coef.parse().map_err(|_| fail("bad coefficient"))?;
            if c.is_zero() {
                return Err(fail("explicit zero coefficient"));
            }
            form.coeffs[idx] = c;
        }
        Ok(form)
    }
}

impl<T: Scalar + fmt::Display> Serialize for LinearForm<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// See [`LinearForm::display_factored`].
pub struct Factored<'a>(&'a LinearForm<Rational>);

impl fmt::Display for Factored<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, ints) = self.0.factored();
        if g.is_zero() {
            return f.write_str("0");
        }
        if !g.is_one() {
            write!(f, "({g})")?;
        }
        f.write_str("(")?;
        let mut first = true;
        for (n, v) in ints.iter().zip(VARIABLES) {
            if n.is_zero() {
                continue;
            }
            let mag = n.abs();
            let sign = if n.is_negative() { "-" } else { "+" };
            match (first, n.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            if mag == BigInt::from(1) {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}{v}")?;
            }
            first = false;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn lf(c: [i64; 4]) -> LinearForm {
        LinearForm::from_ints(c)
    }

    fn p(v: [i64; 4]) -> ParamTuple {
        ParamTuple::new(v.map(int)).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(lf([1, 0, 0, 0]) + lf([0, 1, 0, 0]), lf([1, 1, 0, 0]));
        let l = lf([3, -2, 7, 1]);
        assert_eq!(l.clone() + LinearForm::zero(), l);

        // hand expansion: (9+3)/12 = 1, (1-3)/12 = -1/6, (1-1)/12 = 0, (1+1)/12 = 1/6
        let twelfth = rational(1, 12);
        let x = lf([9, 1, 1, 1]).scale(&twelfth);
        let y = lf([3, -3, -1, 1]).scale(&twelfth);
        assert_eq!(
            x + y,
            LinearForm::new([int(1), rational(-1, 6), int(0), rational(1, 6)])
        );
    }

    #[test]
    fn scale_examples() {
        assert_eq!(lf([1, 1, 0, 0]).scale(&int(2)), lf([2, 2, 0, 0]));
        assert!(lf([5, -1, 2, 9]).scale(&int(0)).is_zero());
        assert_eq!(
            lf([4, 25, 1, 0]).scale(&rational(1, 3)),
            LinearForm::new([rational(4, 3), rational(25, 3), rational(1, 3), int(0)])
        );
    }

    #[test]
    fn eval_examples() {
        assert_eq!(lf([4, 25, 1, 0]).eval(&p([1, 1, 1, 1])), int(30));
        assert_eq!(lf([0, 1, 4, 25]).eval(&p([1, 2, 3, 4])), int(114));
        assert_eq!(LinearForm::zero().eval(&p([3, 1, 4, 1])), int(0));
    }

    #[test]
    fn eval_rejects_non_positive_tuple() {
        assert!(ParamTuple::new([int(1), int(0), int(2), int(3)]).is_err());
        assert!(ParamTuple::new([int(1), int(2), int(-2), int(3)]).is_err());
    }

    #[test]
    fn total_order_examples() {
        use std::cmp::Ordering::*;
        assert_eq!(compare_total(&lf([1, 0, 0, 0]), &lf([0, 1, 0, 0])), Greater);
        let l = lf([2, 7, 1, 8]);
        assert_eq!(compare_total(&l, &l.clone()), Equal);
        let third = rational(1, 3);
        assert_eq!(
            compare_total(
                &lf([4, 25, 1, 0]).scale(&third),
                &lf([4, 25, 0, 1]).scale(&third)
            ),
            Greater
        );
    }

    #[test]
    fn text_format() {
        let f = lf([4, 25, 1, 0]).scale(&rational(1, 3));
        assert_eq!(f.to_string(), "4/3*a + 25/3*b + 1/3*c");
        assert_eq!(LinearForm::<Rational>::zero().to_string(), "0");
        assert_eq!(lf([0, -3, 0, 1]).to_string(), "-3*b + 1*d");
        for s in [
            "4/3*a + 25/3*b + 1/3*c",
            "0",
            "-3*b + 1*d",
            "1/12*a + -1/4*c",
        ] {
            let parsed: LinearForm = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert!("1*b + 1*a".parse::<LinearForm>().is_err());
        assert!("1*a + 2*a".parse::<LinearForm>().is_err());
        assert!("0*a".parse::<LinearForm>().is_err());
        assert!("3*e".parse::<LinearForm>().is_err());
        assert!("3a".parse::<LinearForm>().is_err());
        assert!("".parse::<LinearForm>().is_err());
    }

    #[test]
    fn factored_rendering() {
        let f = lf([4, 25, 1, 0]).scale(&rational(1, 3));
        assert_eq!(f.display_factored().to_string(), "(1/3)(4a + 25b + c)");
        let g = lf([3, -3, -1, 1]).scale(&rational(1, 12));
        assert_eq!(g.display_factored().to_string(), "(1/12)(3a - 3b - c + d)");
        assert_eq!(
            lf([0, 1, 4, 25]).display_factored().to_string(),
            "(b + 4c + 25d)"
        );
        assert_eq!(
            lf([0, 2, 4, 0]).display_factored().to_string(),
            "(2)(b + 2c)"
        );
    }

    #[test]
    fn float_forms_work_too() {
        let f = LinearForm::<f64>::new([0.5, 1.0, 0.0, 2.0]);
        assert_eq!(f.eval_at(&[2.0, 1.0, 7.0, 1.0]), 4.0);
        assert_eq!(f.to_string(), "0.5*a + 1*b + 2*d");
    }
}
