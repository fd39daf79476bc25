//! Lattice enumeration, spectra with multiplicities and nodal sequences.
//!
//! Eigenvalues are the exact rationals `qᵀQq` (the `4π²` factor is
//! implied). Enumeration of `{q ≠ 0 : qᵀQq ≤ Λ}` uses the box
//! `|qᵢ| ≤ ⌈√(Λ·(Q⁻¹)ᵢᵢ)⌉`, which contains every solution, and then
//! filters exactly in integer arithmetic on a scaled copy of `Q`.

use std::fmt;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{self, serde_rational};
use crate::torus::{conway_sloane, LatticeVector, ParamTuple, Sign};
use crate::Rational;

/// Upper limit on the number of box points visited by one enumeration.
pub const ENUMERATION_LIMIT: u128 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodalPart {
    Re,
    Im,
}

impl NodalPart {
    pub const BOTH: [NodalPart; 2] = [NodalPart::Re, NodalPart::Im];

    pub fn name(self) -> &'static str {
        match self {
            NodalPart::Re => "re",
            NodalPart::Im => "im",
        }
    }
}

impl fmt::Display for NodalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for NodalPart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Closed-form nodal count: `2Σ|qᵢ|` for the sine part, `2Σ|qᵢ| + 1` for the cosine part.
pub fn nodal_count(q: &[i64], part: NodalPart) -> Result<u64> {
    let m: u64 = q.iter().map(|x| x.unsigned_abs()).sum();
    match part {
        NodalPart::Im if m == 0 => Err(Error::DegenerateEigenfunction),
        NodalPart::Im => Ok(2 * m),
        NodalPart::Re => Ok(2 * m + 1),
    }
}

/// All integer vectors of dimension `dim` with `Σ|qᵢ| = m`, in lexicographic order.
pub fn enumerate_l1_sphere(dim: usize, m: u64) -> Vec<LatticeVector> {
    fn rec(dim: usize, remaining: i64, prefix: &mut Vec<i64>, out: &mut Vec<LatticeVector>) {
        if dim == 1 {
            if remaining == 0 {
                prefix.push(0);
                out.push(LatticeVector::new(prefix.clone()));
                prefix.pop();
            } else {
                for x in [-remaining, remaining] {
                    prefix.push(x);
                    out.push(LatticeVector::new(prefix.clone()));
                    prefix.pop();
                }
            }
            return;
        }
        for x in -remaining..=remaining {
            prefix.push(x);
            rec(dim - 1, remaining - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    rec(dim, m as i64, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// `V_m`: integer 4-vectors with `Σ|qᵢ| = m`, lexicographically ordered.
pub fn enumerate_v_m(m: u64) -> Result<Vec<LatticeVector>> {
    if m == 0 {
        return Err(Error::Precondition("V_m needs m >= 1".into()));
    }
    Ok(enumerate_l1_sphere(4, m))
}

/// `Q` scaled by the lcm `D` of its denominators, so that `qᵀQq = qᵀMq / D`.
struct ScaledForm {
    n: usize,
    entries: Vec<i128>,
    denom: BigInt,
}

impl ScaledForm {
    fn new(q: &Matrix<Rational>) -> Result<Self> {
        let n = q.dim();
        let denom = scalar::common_denominator(q.rows().flatten());
        let mut entries = Vec::with_capacity(n * n);
        for row in q.rows() {
            for v in row {
                let scaled = (v * Rational::from_integer(denom.clone())).to_integer();
                entries.push(scaled.to_i64().ok_or(Error::Overflow)? as i128);
            }
        }
        Ok(ScaledForm { n, entries, denom })
    }

    #[inline]
    fn value(&self, q: &[i64]) -> i128 {
        let n = self.n;
        let mut acc = 0i128;
        for i in 0..n {
            let qi = q[i] as i128;
            if qi == 0 {
                continue;
            }
            let row = &self.entries[i * n..(i + 1) * n];
            let mut s = 0i128;
            for j in 0..n {
                s += row[j] * q[j] as i128;
            }
            acc += qi * s;
        }
        acc
    }
}

fn validate_form(q: &Matrix<Rational>, cutoff: &Rational) -> Result<()> {
    if !cutoff.is_positive() {
        return Err(Error::NonPositiveCutoff(cutoff.to_string()));
    }
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// Per-coordinate bounds `⌈√(Λ·Γᵢᵢ)⌉` with `Γ = Q⁻¹`.
pub fn coordinate_bounds(q: &Matrix<Rational>, cutoff: &Rational) -> Result<Vec<i64>> {
    validate_form(q, cutoff)?;
    let gamma = q.inverse()?;
    (0..q.dim())
        .map(|i| {
            scalar::ceil_sqrt(&(cutoff * &gamma[(i, i)]))
                .to_i64()
                .ok_or(Error::Overflow)
        })
        .collect()
}

/// Every `q ≠ 0` with `qᵀQq ≤ cutoff`, paired with `qᵀQq · D`; returns `D` as well.
fn enumerate_scaled(
    q: &Matrix<Rational>,
    cutoff: &Rational,
) -> Result<(Vec<(LatticeVector, i128)>, BigInt)> {
    let bounds = coordinate_bounds(q, cutoff)?;
    let n = q.dim();
    if n == 0 {
        return Ok((Vec::new(), BigInt::from(1)));
    }
    let cells = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(2 * b as u128 + 1))
        .unwrap_or(u128::MAX);
    if cells > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            cells,
            limit: ENUMERATION_LIMIT,
        });
    }
    let form = ScaledForm::new(q)?;
    // |qᵀMq| ≤ Σ|Mᵢⱼ|·Bᵢ·Bⱼ must fit in i128
    let worst: BigInt = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| BigInt::from(form.entries[i * n + j].abs()) * bounds[i] * bounds[j])
        .sum();
    if worst.to_i128().is_none() {
        return Err(Error::Overflow);
    }
    let threshold = (cutoff * Rational::from_integer(form.denom.clone()))
        .floor()
        .to_integer()
        .to_i128()
        .ok_or(Error::Overflow)?;

    let first: Vec<i64> = (-bounds[0]..=bounds[0]).collect();
    let chunks: Vec<Vec<(LatticeVector, i128)>> = first
        .into_par_iter()
        .map(|x0| {
            let mut found = Vec::new();
            let mut q = vec![0i64; n];
            q[0] = x0;
            for (k, b) in bounds.iter().enumerate().skip(1) {
                q[k] = -b;
            }
            loop {
                let v = form.value(&q);
                if v <= threshold && q.iter().any(|&x| x != 0) {
                    found.push((LatticeVector::new(q.clone()), v));
                }
                // odometer over coordinates 1..n, last coordinate fastest
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        return found;
                    }
                    if q[k] < bounds[k] {
                        q[k] += 1;
                        break;
                    }
                    q[k] = -bounds[k];
                    k -= 1;
                }
            }
        })
        .collect();
    Ok((chunks.into_iter().flatten().collect(), form.denom))
}

/// Exactly the set `{q ≠ 0 : qᵀQq ≤ cutoff}`, lexicographically ordered.
pub fn enumerate_ball(q: &Matrix<Rational>, cutoff: &Rational) -> Result<Vec<LatticeVector>> {
    let (found, _) = enumerate_scaled(q, cutoff)?;
    let out: Vec<LatticeVector> = found.into_iter().map(|(v, _)| v).collect();
    debug_assert!(out.iter().all(|v| {
        let value = q.quadratic_form(v).expect("dimension checked");
        value <= *cutoff && !value.is_zero()
    }));
    Ok(out)
}

/// One distinct eigenvalue with its representing vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumLine {
    pub eigenvalue: Rational,
    /// Lexicographically sorted.
    pub reps: Vec<LatticeVector>,
    /// `(ν_im, ν_re)` per representing vector, sorted as a multiset.
    pub nodal_pairs: Vec<(u64, u64)>,
}

impl SpectrumLine {
    pub fn from_reps(eigenvalue: Rational, mut reps: Vec<LatticeVector>) -> Result<Self> {
        reps.sort();
        let mut nodal_pairs = reps
            .iter()
            .map(|q| {
                Ok((
                    nodal_count(q, NodalPart::Im)?,
                    nodal_count(q, NodalPart::Re)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        nodal_pairs.sort_unstable();
        Ok(SpectrumLine {
            eigenvalue,
            reps,
            nodal_pairs,
        })
    }

    pub fn degeneracy(&self) -> usize {
        self.reps.len()
    }

    /// Re-checks the line invariants from the representing vectors alone.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |detail: String| Error::IsospectralityViolation {
            eigenvalue: self.eigenvalue.to_string(),
            detail,
        };
        if self.reps.len() != self.nodal_pairs.len() {
            return Err(fail("reps and nodal pairs differ in length".into()));
        }
        for q in &self.reps {
            if self.reps.binary_search(&q.negated()).is_err() {
                return Err(fail(format!("{q} present but not its negative")));
            }
        }
        let mut expected: Vec<(u64, u64)> = self
            .reps
            .iter()
            .map(|q| (2 * q.l1_norm(), 2 * q.l1_norm() + 1))
            .collect();
        expected.sort_unstable();
        if expected != self.nodal_pairs {
            return Err(fail("nodal pairs not recomputable from reps".into()));
        }
        Ok(())
    }
}

impl Serialize for SpectrumLine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumLine", 4)?;
        st.serialize_field("eigenvalue", &self.eigenvalue.to_string())?;
        st.serialize_field("degeneracy", &self.degeneracy())?;
        st.serialize_field("reps", &self.reps)?;
        st.serialize_field("nodal_pairs", &self.nodal_pairs)?;
        st.end()
    }
}

/// Distinct nonzero eigenvalues `≤ cutoff` of the torus `T(Q)`, increasing.
pub fn spectrum_lines(q: &Matrix<Rational>, cutoff: &Rational) -> Result<Vec<SpectrumLine>> {
    let (mut found, denom) = enumerate_scaled(q, cutoff)?;
    found.par_sort_unstable_by(|(u, x), (v, y)| x.cmp(y).then_with(|| u.cmp(v)));
    let mut lines = Vec::new();
    let mut start = 0;
    while start < found.len() {
        let value = found[start].1;
        let end = start
            + found[start..]
                .iter()
                .take_while(|(_, v)| *v == value)
                .count();
        let reps = found[start..end].iter().map(|(q, _)| q.clone()).collect();
        let eigenvalue = Rational::new(BigInt::from(value), denom.clone());
        lines.push(SpectrumLine::from_reps(eigenvalue, reps)?);
        start = end;
    }
    Ok(lines)
}

/// Spectrum of `T^sign(p)` up to `cutoff`, with nodal data per eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodalSequence {
    pub params: ParamTuple,
    pub sign: Sign,
    #[serde(with = "serde_rational")]
    pub cutoff: Rational,
    pub lines: Vec<SpectrumLine>,
}

impl NodalSequence {
    pub fn check_invariants(&self) -> Result<()> {
        for pair in self.lines.windows(2) {
            if pair[0].eigenvalue >= pair[1].eigenvalue {
                return Err(Error::IsospectralityViolation {
                    eigenvalue: pair[1].eigenvalue.to_string(),
                    detail: "eigenvalues not strictly increasing".into(),
                });
            }
        }
        for line in &self.lines {
            if !line.eigenvalue.is_positive() || line.eigenvalue > self.cutoff {
                return Err(Error::IsospectralityViolation {
                    eigenvalue: line.eigenvalue.to_string(),
                    detail: "eigenvalue outside (0, cutoff]".into(),
                });
            }
            line.check_invariants()?;
        }
        Ok(())
    }

    pub fn total_degeneracy(&self) -> usize {
        self.lines.iter().map(SpectrumLine::degeneracy).sum()
    }

    /// Flat CSV: one row per (eigenvalue, representing vector).
    /// With `approx`, a display-only column `laplace_approx` = 4π²·eigenvalue is added.
    pub fn write_csv<W: Write>(&self, mut w: W, approx: bool) -> io::Result<()> {
        let dim = self.lines.first().map_or(4, |l| l.reps[0].dim());
        write!(w, "eigenvalue,degeneracy")?;
        for i in 1..=dim {
            write!(w, ",q{i}")?;
        }
        write!(w, ",nu_im,nu_re")?;
        if approx {
            write!(w, ",laplace_approx")?;
        }
        writeln!(w)?;
        for line in &self.lines {
            let lambda = 4.0 * std::f64::consts::PI.powi(2) * scalar::to_f64(&line.eigenvalue);
            for q in &line.reps {
                write!(w, "{},{}", line.eigenvalue, line.degeneracy())?;
                for x in q.iter() {
                    write!(w, ",{x}")?;
                }
                let m = q.l1_norm();
                write!(w, ",{},{}", 2 * m, 2 * m + 1)?;
                if approx {
                    write!(w, ",{lambda:.6}")?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

pub fn build_spectrum(sign: Sign, p: &ParamTuple, cutoff: &Rational) -> Result<NodalSequence> {
    let q = conway_sloane(sign).evaluate(p);
    let lines = spectrum_lines(&q, cutoff)?;
    Ok(NodalSequence {
        params: p.clone(),
        sign,
        cutoff: cutoff.clone(),
        lines,
    })
}

/// Smallest cutoff at which `T^sign(p)` has at least `min_lines` distinct nonzero eigenvalues.
pub fn cutoff_for_lines(sign: Sign, p: &ParamTuple, min_lines: usize) -> Result<Rational> {
    if min_lines == 0 {
        return Err(Error::Precondition("min_lines must be positive".into()));
    }
    let q = conway_sloane(sign).evaluate(p);
    let mut cutoff = (0..4).map(|i| q[(i, i)].clone()).min().expect("4x4");
    loop {
        let lines = spectrum_lines(&q, &cutoff)?;
        if lines.len() >= min_lines {
            return Ok(lines[min_lines - 1].eigenvalue.clone());
        }
        cutoff *= Rational::from_integer(2.into());
    }
}

/// First position where the nodal data of `T⁺` and `T⁻` disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodalDifference {
    /// 1-based position in the increasing spectrum.
    pub index: usize,
    #[serde(with = "serde_rational")]
    pub eigenvalue: Rational,
    pub degeneracy: usize,
    pub plus_pairs: Vec<(u64, u64)>,
    pub minus_pairs: Vec<(u64, u64)>,
}

/// Compares two sequences line by line. They must agree as eigenvalue
/// multisets; otherwise an isospectrality violation is returned.
pub fn compare_sequences(
    plus: &NodalSequence,
    minus: &NodalSequence,
) -> Result<Option<NodalDifference>> {
    if plus.lines.len() != minus.lines.len() {
        let k = plus.lines.len().min(minus.lines.len());
        let at = plus
            .lines
            .get(k)
            .or(minus.lines.get(k))
            .map(|l| l.eigenvalue.to_string())
            .unwrap_or_default();
        return Err(Error::IsospectralityViolation {
            eigenvalue: at,
            detail: format!(
                "{} distinct eigenvalues for T+ but {} for T-",
                plus.lines.len(),
                minus.lines.len()
            ),
        });
    }
    let mut first = None;
    for (i, (lp, lm)) in plus.lines.iter().zip(&minus.lines).enumerate() {
        if lp.eigenvalue != lm.eigenvalue || lp.degeneracy() != lm.degeneracy() {
            return Err(Error::IsospectralityViolation {
                eigenvalue: lp.eigenvalue.clone().min(lm.eigenvalue.clone()).to_string(),
                detail: format!(
                    "line {}: T+ has {} x{}, T- has {} x{}",
                    i + 1,
                    lp.eigenvalue,
                    lp.degeneracy(),
                    lm.eigenvalue,
                    lm.degeneracy()
                ),
            });
        }
        if first.is_none() && lp.nodal_pairs != lm.nodal_pairs {
            first = Some(NodalDifference {
                index: i + 1,
                eigenvalue: lp.eigenvalue.clone(),
                degeneracy: lp.degeneracy(),
                plus_pairs: lp.nodal_pairs.clone(),
                minus_pairs: lm.nodal_pairs.clone(),
            });
        }
    }
    Ok(first)
}

/// Smallest eigenvalue `≤ max_cutoff` at which the nodal-pair multisets
/// of `T⁺(p)` and `T⁻(p)` differ, or `None`.
pub fn first_nodal_difference(
    p: &ParamTuple,
    max_cutoff: &Rational,
) -> Result<Option<NodalDifference>> {
    let (plus, minus) = rayon::join(
        || build_spectrum(Sign::Plus, p, max_cutoff),
        || build_spectrum(Sign::Minus, p, max_cutoff),
    );
    compare_sequences(&plus?, &minus?)
}
