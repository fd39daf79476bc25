//! Mechanical check that the nodal sequences of `T⁺(a,b,c,d)` and
//! `T⁻(a,b,c,d)` differ whenever `a, b, c, d` are pairwise distinct.
//!
//! `E_m^±` is the set of linear forms `qᵀQ^±q` over `q ∈ V_m`
//! (`Σ|qᵢ| = m`). Every eigenvalue in `E_m` carries a representing vector
//! with nodal counts `2m` and `2m + 1`, so `E_m⁺ ≠ E_m⁻` for some `m`
//! separates the two nodal sequences. The sets agree for `m ≤ 3`; at
//! `m = 4` they differ by 24 forms on each side, which split by
//! permutation parity over the coefficient patterns `(1,4,9,16)` and
//! `(0,1,4,25)`. Ordering the parameters `a < b < c < d`, the form
//! `(b + 4c + 25d)/3` dominates every other form of the difference lists,
//! which is certified here by rewriting each difference in gap variables.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::LinearForm;
use crate::scalar::{self, serde_rational};
use crate::spectral::{self, enumerate_v_m, NodalDifference};
use crate::torus::{conway_sloane, LatticeVector, ParamTuple, Sign};
use crate::Rational;

/// Coefficient patterns of the `m = 4` difference lists.
pub const DIFFERENCE_BASES: [[i64; 4]; 2] = [[1, 4, 9, 16], [0, 1, 4, 25]];

pub const GOLDEN_PLUS_ONLY: &str = include_str!("../golden/e4_plus_only.txt");
pub const GOLDEN_MINUS_ONLY: &str = include_str!("../golden/e4_minus_only.txt");

/// `(b + 4c + 25d)/3`.
pub fn unique_max_target() -> LinearForm {
    LinearForm::from_ints([0, 1, 4, 25]).scale(&scalar::rational(1, 3))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenvalueSet {
    pub m: u64,
    pub sign: Sign,
    pub forms: BTreeSet<LinearForm>,
}

/// `qᵀQ^±q` for every `q ∈ V_m`, grouped by form. Fails if a form's
/// coefficient sum differs from `|q|²` (Q^±(1,1,1,1) is the identity).
pub fn forms_with_witnesses(
    sign: Sign,
    m: u64,
) -> Result<BTreeMap<LinearForm, Vec<LatticeVector>>> {
    let q_matrix = conway_sloane(sign);
    let mut out: BTreeMap<LinearForm, Vec<LatticeVector>> = BTreeMap::new();
    for q in enumerate_v_m(m)? {
        let form = q_matrix.quad_form(&q)?;
        let norm2: i64 = q.iter().map(|x| x * x).sum();
        if form.coefficient_sum() != scalar::int(norm2) {
            return Err(Error::Invariant(format!(
                "coefficient sum of {form} is {} but |q|^2 = {norm2} for q = {q}",
                form.coefficient_sum()
            )));
        }
        out.entry(form).or_default().push(q);
    }
    Ok(out)
}

pub fn build_e(sign: Sign, m: u64) -> Result<EigenvalueSet> {
    let forms = forms_with_witnesses(sign, m)?.into_keys().collect();
    Ok(EigenvalueSet { m, sign, forms })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EComparison {
    pub m: u64,
    pub equal: bool,
    pub only_plus: BTreeSet<LinearForm>,
    pub only_minus: BTreeSet<LinearForm>,
    pub common: BTreeSet<LinearForm>,
}

pub fn compare_sets(plus: &EigenvalueSet, minus: &EigenvalueSet) -> EComparison {
    let only_plus: BTreeSet<_> = plus.forms.difference(&minus.forms).cloned().collect();
    let only_minus: BTreeSet<_> = minus.forms.difference(&plus.forms).cloned().collect();
    let common = plus.forms.intersection(&minus.forms).cloned().collect();
    EComparison {
        m: plus.m,
        equal: only_plus.is_empty() && only_minus.is_empty(),
        only_plus,
        only_minus,
        common,
    }
}

pub fn compare_e(m: u64) -> Result<EComparison> {
    let (plus, minus) = rayon::join(|| build_e(Sign::Plus, m), || build_e(Sign::Minus, m));
    Ok(compare_sets(&plus?, &minus?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Parity of a permutation of `0..n` given as an image list.
pub fn permutation_parity(perm: &[usize]) -> Parity {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn primitive(coeffs: &[Rational; 4]) -> [Rational; 4] {
    let g = scalar::content(coeffs);
    if g.is_zero() {
        return coeffs.clone();
    }
    coeffs.clone().map(|c| c / &g)
}

fn sorted(mut v: [Rational; 4]) -> [Rational; 4] {
    v.sort();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityClassification {
    /// Sorted primitive coefficient pattern; the identity assignment is even.
    #[serde(with = "scalar::serde_rational::array4")]
    pub base: [Rational; 4],
    pub even_members: BTreeSet<LinearForm>,
    pub odd_members: BTreeSet<LinearForm>,
}

/// Splits `diff` by coefficient pattern and permutation parity.
///
/// Each form is scaled to a primitive integer vector and matched against
/// the (sorted, primitive) bases; its parity is that of the permutation
/// carrying the sorted base onto its coefficient tuple. A form matching no
/// base is an error.
pub fn classify_parity(
    diff: &BTreeSet<LinearForm>,
    bases: &[[Rational; 4]],
) -> Result<Vec<ParityClassification>> {
    let mut out: Vec<ParityClassification> = Vec::with_capacity(bases.len());
    for base in bases {
        let b = sorted(primitive(base));
        if b.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!(
                "base pattern {:?} has repeated entries; parity is not defined",
                b.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        out.push(ParityClassification {
            base: b,
            even_members: BTreeSet::new(),
            odd_members: BTreeSet::new(),
        });
    }
    for form in diff {
        let normalized = primitive(form.coeffs());
        let key = sorted(normalized.clone());
        let class =
            out.iter_mut()
                .find(|c| c.base == key)
                .ok_or_else(|| Error::Classification {
                    form: form.to_string(),
                    reason: "coefficients are not a permutation of any base pattern".into(),
                })?;
        let perm: Vec<usize> = normalized
            .iter()
            .map(|c| {
                class
                    .base
                    .iter()
                    .position(|b| b == c)
                    .expect("same multiset")
            })
            .collect();
        match permutation_parity(&perm) {
            Parity::Even => class.even_members.insert(form.clone()),
            Parity::Odd => class.odd_members.insert(form.clone()),
        };
    }
    Ok(out)
}

pub fn difference_bases() -> Vec<[Rational; 4]> {
    DIFFERENCE_BASES
        .iter()
        .map(|b| b.map(scalar::int))
        .collect()
}

/// Parity layout of one base pattern across `only_plus` and `only_minus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseParity {
    #[serde(with = "scalar::serde_rational::array4")]
    pub base: [Rational; 4],
    pub plus_even: usize,
    pub plus_odd: usize,
    pub minus_even: usize,
    pub minus_odd: usize,
    /// Parity class held by `only_plus`, when it holds exactly one full class.
    pub plus_class: Option<Parity>,
    /// `only_plus` is one full parity class (12 forms) and `only_minus` the other.
    pub split: bool,
}

pub fn parity_layout(cmp: &EComparison) -> Result<Vec<BaseParity>> {
    let bases = difference_bases();
    let plus = classify_parity(&cmp.only_plus, &bases)?;
    let minus = classify_parity(&cmp.only_minus, &bases)?;
    Ok(plus
        .into_iter()
        .zip(minus)
        .map(|(p, m)| {
            let (pe, po) = (p.even_members.len(), p.odd_members.len());
            let (me, mo) = (m.even_members.len(), m.odd_members.len());
            let plus_class = match (pe, po) {
                (12, 0) => Some(Parity::Even),
                (0, 12) => Some(Parity::Odd),
                _ => None,
            };
            let split = match plus_class {
                Some(Parity::Even) => (me, mo) == (0, 12),
                Some(Parity::Odd) => (me, mo) == (12, 0),
                None => false,
            };
            BaseParity {
                base: p.base,
                plus_even: pe,
                plus_odd: po,
                minus_even: me,
                minus_odd: mo,
                plus_class,
                split,
            }
        })
        .collect())
}

/// Coefficients of a form after substituting `b = a + g₁`, `c = a + g₁ + g₂`,
/// `d = a + g₁ + g₂ + g₃`; returned in the order `(a, g₁, g₂, g₃)`.
pub fn gap_coefficients(form: &LinearForm) -> [Rational; 4] {
    let [ca, cb, cc, cd] = form.coeffs();
    let g3 = cd.clone();
    let g2 = cc + &g3;
    let g1 = cb + &g2;
    let a = ca + &g1;
    [a, g1, g2, g3]
}

/// Strictly positive for every `0 < a < b < c < d`: all gap coefficients
/// non-negative and at least one positive.
pub fn is_strictly_positive_on_ordered(form: &LinearForm) -> bool {
    let g = gap_coefficients(form);
    g.iter().all(|c| !c.is_negative()) && g.iter().any(|c| c.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub competitor: LinearForm,
    /// `target - competitor` in `(a, g₁, g₂, g₃)`.
    #[serde(with = "scalar::serde_rational::array4")]
    pub gap_coefficients: [Rational; 4],
    pub dominated: bool,
    pub in_common: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateScope {
    FullUnion,
    SymmetricDifference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniqueMaxCertificate {
    pub target: LinearForm,
    pub target_in: Sign,
    /// Every element of `E₄⁺ ∪ E₄⁻` other than the target.
    pub competitors: Vec<Dominance>,
    /// Common-part competitors the target does not dominate.
    pub flagged: Vec<LinearForm>,
    pub scope: CertificateScope,
}

impl UniqueMaxCertificate {
    pub fn full_union_holds(&self) -> bool {
        self.flagged.is_empty()
    }

    pub fn symmetric_difference_competitors(&self) -> impl Iterator<Item = &Dominance> {
        self.competitors.iter().filter(|d| !d.in_common)
    }
}

/// Certifies that `target` lies in exactly one of the two sets and
/// strictly exceeds every other element for all `0 < a < b < c < d`.
///
/// Competitors from the common part that are not dominated are flagged and
/// the certificate falls back to the symmetric difference, which still
/// separates the sets. A non-dominated competitor in the symmetric
/// difference is a certificate failure.
pub fn certify_unique_max(
    plus: &EigenvalueSet,
    minus: &EigenvalueSet,
    target: &LinearForm,
) -> Result<UniqueMaxCertificate> {
    let target_in = match (plus.forms.contains(target), minus.forms.contains(target)) {
        (true, false) => Sign::Plus,
        (false, true) => Sign::Minus,
        (true, true) => {
            return Err(Error::CertificateFailure(format!(
                "{target} lies in both sets"
            )))
        }
        (false, false) => {
            return Err(Error::CertificateFailure(format!(
                "{target} lies in neither set"
            )))
        }
    };
    let union: BTreeSet<&LinearForm> = plus.forms.iter().chain(&minus.forms).collect();
    let competitors: Vec<Dominance> = union
        .into_iter()
        .filter(|f| *f != target)
        .map(|f| {
            let diff = target - f;
            Dominance {
                competitor: f.clone(),
                gap_coefficients: gap_coefficients(&diff),
                dominated: is_strictly_positive_on_ordered(&diff),
                in_common: plus.forms.contains(f) && minus.forms.contains(f),
            }
        })
        .collect();
    if let Some(bad) = competitors.iter().find(|d| !d.dominated && !d.in_common) {
        return Err(Error::CertificateFailure(format!(
            "{} is not dominated by {target}: gap coefficients {:?}",
            bad.competitor,
            bad.gap_coefficients
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    let flagged: Vec<LinearForm> = competitors
        .iter()
        .filter(|d| !d.dominated)
        .map(|d| d.competitor.clone())
        .collect();
    let scope = if flagged.is_empty() {
        CertificateScope::FullUnion
    } else {
        CertificateScope::SymmetricDifference
    };
    Ok(UniqueMaxCertificate {
        target: target.clone(),
        target_in,
        competitors,
        flagged,
        scope,
    })
}

/// Evaluates the difference lists at `p` and checks that `target` is their strict maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericMaxCheck {
    pub params: ParamTuple,
    #[serde(with = "serde_rational")]
    pub target_value: Rational,
    #[serde(with = "serde_rational")]
    pub runner_up_value: Rational,
    pub runner_up: LinearForm,
    pub strict: bool,
}

pub fn numeric_max_check(
    cmp: &EComparison,
    target: &LinearForm,
    p: &ParamTuple,
) -> Result<NumericMaxCheck> {
    let target_value = target.eval(p);
    let (runner_up, runner_up_value) = cmp
        .only_plus
        .iter()
        .chain(&cmp.only_minus)
        .filter(|f| *f != target)
        .map(|f| (f.clone(), f.eval(p)))
        .max_by(|x, y| x.1.cmp(&y.1))
        .ok_or_else(|| Error::Precondition("difference lists are empty".into()))?;
    Ok(NumericMaxCheck {
        params: p.clone(),
        strict: target_value > runner_up_value,
        target_value,
        runner_up_value,
        runner_up,
    })
}

/// Reference lists of `E₄⁺ ∖ E₄⁻` and `E₄⁻ ∖ E₄⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenLists {
    pub plus_only: BTreeSet<LinearForm>,
    pub minus_only: BTreeSet<LinearForm>,
}

impl GoldenLists {
    pub fn shipped() -> Self {
        Self::parse(GOLDEN_PLUS_ONLY, GOLDEN_MINUS_ONLY).expect("shipped golden lists parse")
    }

    /// One canonical form per line; blank lines and `#` comments are ignored.
    pub fn parse(plus_text: &str, minus_text: &str) -> Result<Self> {
        fn parse_list(text: &str) -> Result<BTreeSet<LinearForm>> {
            let mut set = BTreeSet::new();
            for line in text.lines().map(str::trim) {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let form: LinearForm = line.parse()?;
                if !set.insert(form) {
                    return Err(Error::Golden(format!("duplicate entry {line:?}")));
                }
            }
            Ok(set)
        }
        Ok(GoldenLists {
            plus_only: parse_list(plus_text)?,
            minus_only: parse_list(minus_text)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenCheck {
    pub matches: bool,
    pub missing_plus: Vec<LinearForm>,
    pub unexpected_plus: Vec<LinearForm>,
    pub missing_minus: Vec<LinearForm>,
    pub unexpected_minus: Vec<LinearForm>,
}

pub fn check_golden(cmp: &EComparison, golden: &GoldenLists) -> GoldenCheck {
    let diff = |a: &BTreeSet<LinearForm>, b: &BTreeSet<LinearForm>| -> Vec<LinearForm> {
        a.difference(b).cloned().collect()
    };
    let missing_plus = diff(&golden.plus_only, &cmp.only_plus);
    let unexpected_plus = diff(&cmp.only_plus, &golden.plus_only);
    let missing_minus = diff(&golden.minus_only, &cmp.only_minus);
    let unexpected_minus = diff(&cmp.only_minus, &golden.minus_only);
    GoldenCheck {
        matches: missing_plus.is_empty()
            && unexpected_plus.is_empty()
            && missing_minus.is_empty()
            && unexpected_minus.is_empty(),
        missing_plus,
        unexpected_plus,
        missing_minus,
        unexpected_minus,
    }
}

/// Random check that `lf_eval(F, p)` equals `qᵀQ(p)q` evaluated numerically for a witness `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub seed: u64,
    pub points: usize,
    pub checks: usize,
    pub mismatches: Vec<String>,
}

pub fn check_evaluation_consistency(
    max_m: u64,
    seed: u64,
    points: usize,
) -> Result<ConsistencyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples: Vec<ParamTuple> = (0..points)
        .map(|_| {
            ParamTuple::new(std::array::from_fn(|_| {
                scalar::rational(rng.gen_range(1..=60), rng.gen_range(1..=12))
            }))
        })
        .collect::<Result<_>>()?;
    let mut checks = 0;
    let mut mismatches = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let matrices: Vec<_> = tuples
            .iter()
            .map(|p| conway_sloane(sign).evaluate(p))
            .collect();
        for m in 1..=max_m {
            for (form, witnesses) in forms_with_witnesses(sign, m)? {
                let q = &witnesses[0];
                for (p, mat) in tuples.iter().zip(&matrices) {
                    checks += 1;
                    if form.eval(p) != mat.quadratic_form(q)? {
                        mismatches.push(format!("sign {sign}, m {m}, {form} at ({p}), q = {q}"));
                    }
                }
            }
        }
    }
    Ok(ConsistencyReport {
        seed,
        points,
        checks,
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub m: u64,
    pub equal: bool,
    pub plus_size: usize,
    pub minus_size: usize,
    pub common_size: usize,
    pub only_plus: BTreeSet<LinearForm>,
    pub only_minus: BTreeSet<LinearForm>,
    /// Levels above 4 are reported for exploration only.
    pub exploratory: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub max_m: u64,
    pub levels: Vec<LevelReport>,
    pub golden: GoldenCheck,
    pub parity: Vec<BaseParity>,
    /// Whether `only_plus` holds the even class for every base pattern.
    pub plus_even_for_all_bases: bool,
    pub certificate: Option<UniqueMaxCertificate>,
    pub numeric_check: Option<NumericMaxCheck>,
    pub consistency: Option<ConsistencyReport>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub golden: GoldenLists,
    /// Seed for the random evaluation-consistency sweep; `None` skips it.
    pub seed: Option<u64>,
    pub consistency_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            golden: GoldenLists::shipped(),
            seed: None,
            consistency_points: 8,
        }
    }
}

pub fn verify_theorem(max_m: u64) -> Result<TheoremReport> {
    verify_theorem_with(max_m, &VerifyOptions::default())
}

pub fn verify_theorem_with(max_m: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    if max_m < 4 {
        return Err(Error::Precondition(format!(
            "verify_theorem needs max_m >= 4, got {max_m}"
        )));
    }
    let sets: Vec<(EigenvalueSet, EigenvalueSet)> = (1..=max_m)
        .into_par_iter()
        .map(|m| Ok((build_e(Sign::Plus, m)?, build_e(Sign::Minus, m)?)))
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let mut levels = Vec::new();
    let mut m4 = None;
    for (plus, minus) in &sets {
        let cmp = compare_sets(plus, minus);
        if cmp.m <= 3 && !cmp.equal {
            failures.push(format!(
                "E_{m}+ != E_{m}-: only plus {:?}, only minus {:?}",
                cmp.only_plus
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
                cmp.only_minus
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
                m = cmp.m
            ));
        }
        levels.push(LevelReport {
            m: cmp.m,
            equal: cmp.equal,
            plus_size: plus.forms.len(),
            minus_size: minus.forms.len(),
            common_size: cmp.common.len(),
            only_plus: cmp.only_plus.clone(),
            only_minus: cmp.only_minus.clone(),
            exploratory: cmp.m > 4,
        });
        if cmp.m == 4 {
            m4 = Some((plus, minus, cmp));
        }
    }
    let (plus4, minus4, cmp4) = m4.expect("max_m >= 4");

    let golden = check_golden(&cmp4, &opts.golden);
    if !golden.matches {
        for f in &golden.missing_plus {
            failures.push(format!("golden form {f} missing from E_4+ \\ E_4-"));
        }
        for f in &golden.unexpected_plus {
            failures.push(format!(
                "form {f} in E_4+ \\ E_4- is not in the golden list"
            ));
        }
        for f in &golden.missing_minus {
            failures.push(format!("golden form {f} missing from E_4- \\ E_4+"));
        }
        for f in &golden.unexpected_minus {
            failures.push(format!(
                "form {f} in E_4- \\ E_4+ is not in the golden list"
            ));
        }
    }

    let parity = match parity_layout(&cmp4) {
        Ok(p) => p,
        Err(e) => {
            failures.push(e.to_string());
            Vec::new()
        }
    };
    for bp in &parity {
        if !bp.split {
            failures.push(format!(
                "base {:?}: difference lists are not opposite parity classes (plus {}/{}, minus {}/{})",
                bp.base.iter().map(ToString::to_string).collect::<Vec<_>>(),
                bp.plus_even,
                bp.plus_odd,
                bp.minus_even,
                bp.minus_odd
            ));
        }
    }
    let plus_even_for_all_bases =
        !parity.is_empty() && parity.iter().all(|bp| bp.plus_class == Some(Parity::Even));
    for bp in parity
        .iter()
        .filter(|bp| bp.plus_class == Some(Parity::Odd))
    {
        notes.push(format!(
            "base {:?}: E_4+ \\ E_4- holds the odd permutations of the sorted assignment",
            bp.base.iter().map(ToString::to_string).collect::<Vec<_>>()
        ));
    }

    let target = unique_max_target();
    let certificate = match certify_unique_max(plus4, minus4, &target) {
        Ok(c) => {
            if !c.full_union_holds() {
                notes.push(format!(
                    "{} common form(s) of E_4+ and E_4- exceed {target} on a<b<c<d: {}; \
                     maximum certified over the symmetric difference instead",
                    c.flagged.len(),
                    c.flagged
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("; ")
                ));
            }
            Some(c)
        }
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };

    let sample = ParamTuple::from_ints([1, 2, 3, 4])?;
    let numeric_check = match numeric_max_check(&cmp4, &target, &sample) {
        Ok(n) => {
            if !n.strict {
                failures.push(format!(
                    "at ({sample}) {} = {} is not below {target} = {}",
                    n.runner_up, n.runner_up_value, n.target_value
                ));
            }
            Some(n)
        }
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };

    let consistency = match opts.seed {
        Some(seed) => {
            let r = check_evaluation_consistency(max_m, seed, opts.consistency_points)?;
            failures.extend(r.mismatches.iter().cloned());
            Some(r)
        }
        None => None,
    };

    let verdict = if failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(TheoremReport {
        max_m,
        levels,
        golden,
        parity,
        plus_even_for_all_bases,
        certificate,
        numeric_check,
        consistency,
        notes,
        failures,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub params: ParamTuple,
    #[serde(with = "serde_rational")]
    pub cutoff: Rational,
    pub lines_compared: usize,
    pub difference: Option<NodalDifference>,
    pub consistent: bool,
}

/// For a tuple with two equal parameters the tori are isometric, so no
/// nodal difference may appear below `cutoff`.
pub fn check_isometric_degenerate(p: &ParamTuple, cutoff: &Rational) -> Result<IsometryReport> {
    if p.all_distinct() {
        return Err(Error::Precondition(format!(
            "({p}) has pairwise distinct entries; the isometry check needs two equal ones"
        )));
    }
    let (plus, minus) = rayon::join(
        || spectral::build_spectrum(Sign::Plus, p, cutoff),
        || spectral::build_spectrum(Sign::Minus, p, cutoff),
    );
    let (plus, minus) = (plus?, minus?);
    let difference = spectral::compare_sequences(&plus, &minus)?;
    Ok(IsometryReport {
        params: p.clone(),
        cutoff: cutoff.clone(),
        lines_compared: plus.lines.len(),
        consistent: difference.is_none(),
        difference,
    })
}
