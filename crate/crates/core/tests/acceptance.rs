//! Acceptance checks, one test per criterion.
//!
//! Each test prints a single `criterion N: PASS|FAIL` line with the
//! measured values, then asserts. Run with `--nocapture` to see the lines
//! and `--no-fail-fast` to see all of them.
//!
//! Criteria 3 and 4 are stated more strongly than the mathematics allows
//! and fail by design; the `_holds_as_computed` tests next to them pin
//! what is actually true.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use nodaltorus::oracle::{
    validate_formula, validate_formula_with, GridPolicy, NodalFormula, RowVerdict,
};
use nodaltorus::scalar::{format_rational, int, parse_rational, rational};
use nodaltorus::spectral::{
    build_spectrum, compare_sequences, cutoff_for_lines, enumerate_ball, first_nodal_difference,
};
use nodaltorus::theorem::{
    build_e, certify_unique_max, check_golden, check_isometric_degenerate, compare_e,
    numeric_max_check, parity_layout, unique_max_target, verify_theorem_with, CertificateScope,
    GoldenLists, Parity, Verdict, VerifyOptions, GOLDEN_MINUS_ONLY, GOLDEN_PLUS_ONLY,
};
use nodaltorus::torus::{make_u, q_minus, q_plus};
use nodaltorus::{LinearForm, Matrix, ParamTuple, Rational, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{brute_ball, gershgorin_gap};

const SEED: u64 = 0x5eed_2024;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id}: {verdict} {name}: {detail}");
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

fn tuple(s: &str) -> ParamTuple {
    s.parse().unwrap()
}

const DISTINCT: [&str; 3] = ["1,2,3,4", "2,3,5,7", "1/2,1,3/2,2"];
const ISOMETRIC: [&str; 3] = ["1,1,2,3", "2,3,3,5", "1,2,2,2"];

#[test]
fn criterion_01_e_sets_agree_below_four() {
    let start = Instant::now();
    let equal: Vec<bool> = (1..=3).map(|m| compare_e(m).unwrap().equal).collect();
    let elapsed = start.elapsed();
    let pass = equal.iter().all(|&e| e) && within(elapsed, 1);
    report(
        1,
        "E_m+ = E_m- for m = 1,2,3",
        pass,
        &format!("equal = {equal:?}, {elapsed:.2?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_m4_golden_lists() {
    let start = Instant::now();
    let cmp = compare_e(4).unwrap();
    let golden = check_golden(&cmp, &GoldenLists::shipped());
    let elapsed = start.elapsed();
    let pass = cmp.only_plus.len() == 24
        && cmp.only_minus.len() == 24
        && golden.matches
        && within(elapsed, 1);
    report(
        2,
        "m = 4 difference lists match the golden files",
        pass,
        &format!(
            "|only+| = {}, |only-| = {}, golden match = {}, {elapsed:.2?}",
            cmp.only_plus.len(),
            cmp.only_minus.len(),
            golden.matches
        ),
    );
    assert!(pass, "{golden:?}");
}

#[test]
fn criterion_03_parity_structure() {
    let cmp = compare_e(4).unwrap();
    let layout = parity_layout(&cmp).unwrap();
    let pass = layout
        .iter()
        .all(|b| b.plus_even == 12 && b.plus_odd == 0 && b.minus_even == 0 && b.minus_odd == 12);
    let detail: Vec<String> = layout
        .iter()
        .map(|b| {
            let base: Vec<String> = b.base.iter().map(ToString::to_string).collect();
            format!(
                "({}) only+ even/odd {}/{}, only- even/odd {}/{}",
                base.join(","),
                b.plus_even,
                b.plus_odd,
                b.minus_even,
                b.minus_odd
            )
        })
        .collect();
    report(
        3,
        "only+ = even permutations, only- = odd, for both bases",
        pass,
        &detail.join("; "),
    );
    if !pass {
        println!(
            "criterion 3 analysis: both bases split 12/12 by parity, but for (0,1,4,25) the even \
             class sits in only-; e.g. (b + 4c + 25d)/3 is the identity assignment and belongs to E4-"
        );
    }
    assert!(pass);
}

#[test]
fn criterion_03_parity_holds_as_computed() {
    let layout = parity_layout(&compare_e(4).unwrap()).unwrap();
    assert!(layout.iter().all(|b| b.split));
    assert_eq!(layout[0].base, [1, 4, 9, 16].map(int));
    assert_eq!(layout[0].plus_class, Some(Parity::Even));
    assert_eq!(layout[1].base, [0, 1, 4, 25].map(int));
    assert_eq!(layout[1].plus_class, Some(Parity::Odd));
    let target = unique_max_target();
    assert!(build_e(Sign::Minus, 4).unwrap().forms.contains(&target));
}

#[test]
fn criterion_04_unique_maximum() {
    let start = Instant::now();
    let plus = build_e(Sign::Plus, 4).unwrap();
    let minus = build_e(Sign::Minus, 4).unwrap();
    let cmp = compare_e(4).unwrap();
    let target = unique_max_target();
    let cert = certify_unique_max(&plus, &minus, &target).unwrap();
    let numeric =
        numeric_max_check(&cmp, &target, &ParamTuple::from_ints([1, 2, 3, 4]).unwrap()).unwrap();
    let elapsed = start.elapsed();
    // the lists are printed with the factor 1/3 pulled out, so 114 is three times the value
    let pass = cert.full_union_holds()
        && numeric.strict
        && numeric.target_value.clone() * int(3) == int(114)
        && within(elapsed, 1);
    report(
        4,
        "(b + 4c + 25d)/3 dominates every other form of E4+ and E4-",
        pass,
        &format!(
            "{} competitors, {} not dominated, numeric max {} = 114/3 vs runner-up {} ({}), {elapsed:.2?}",
            cert.competitors.len(),
            cert.flagged.len(),
            numeric.target_value,
            numeric.runner_up_value,
            numeric.runner_up.display_factored()
        ),
    );
    if !pass {
        let shown: Vec<String> = cert
            .flagged
            .iter()
            .take(3)
            .map(|f| f.display_factored().to_string())
            .collect();
        println!(
            "criterion 4 analysis: forms common to both sets, e.g. {}, exceed the target for all \
             a < b < c < d; the target still dominates all {} other forms of the symmetric difference",
            shown.join(", "),
            cert.symmetric_difference_competitors().count()
        );
    }
    assert!(pass);
}

#[test]
fn criterion_04_unique_maximum_holds_as_computed() {
    let plus = build_e(Sign::Plus, 4).unwrap();
    let minus = build_e(Sign::Minus, 4).unwrap();
    let cert = certify_unique_max(&plus, &minus, &unique_max_target()).unwrap();
    assert_eq!(cert.target_in, Sign::Minus);
    assert_eq!(cert.scope, CertificateScope::SymmetricDifference);
    let sym: Vec<_> = cert.symmetric_difference_competitors().collect();
    assert_eq!(sym.len(), 47);
    assert!(sym.iter().all(|d| d.dominated));
    let common_max = LinearForm::from_ints([1, 1, 1, 9]).scale(&rational(4, 3));
    assert!(cert.flagged.contains(&common_max));

    let numeric = numeric_max_check(
        &compare_e(4).unwrap(),
        &unique_max_target(),
        &ParamTuple::from_ints([1, 2, 3, 4]).unwrap(),
    )
    .unwrap();
    assert_eq!(numeric.target_value, rational(114, 3));
    assert!(numeric.strict);
}

#[test]
fn criterion_05_nodal_formula_validation() {
    let start = Instant::now();
    let report_ = validate_formula(3, &GridPolicy::default()).unwrap();
    let elapsed = start.elapsed();
    let pass = report_.rows.len() == 2 * (4 + 16 + 44) && report_.passed() && within(elapsed, 60);
    report(
        5,
        "slab = flood fill = closed form for |q|_1 <= 3",
        pass,
        &format!(
            "{} cases, {} mismatches, {elapsed:.2?}",
            report_.rows.len(),
            report_.mismatches
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_06_isospectrality() {
    let mut all = true;
    let mut parts = Vec::new();
    // 30th distinct eigenvalue from an independent brute-force enumeration
    let pinned = ["19/2", "59/4", "19/4"];
    for (s, expect) in DISTINCT.iter().zip(pinned) {
        let p = tuple(s);
        let start = Instant::now();
        let cutoff = cutoff_for_lines(Sign::Plus, &p, 30).unwrap();
        let plus = build_spectrum(Sign::Plus, &p, &cutoff).unwrap();
        let minus = build_spectrum(Sign::Minus, &p, &cutoff).unwrap();
        let same = compare_sequences(&plus, &minus).is_ok();
        let elapsed = start.elapsed();
        let ok = same
            && plus.lines.len() >= 30
            && cutoff == parse_rational(expect).unwrap()
            && within(elapsed, 30);
        all &= ok;
        parts.push(format!(
            "({s}) {} lines up to {cutoff}, spectra agree = {same}, {elapsed:.2?}",
            plus.lines.len()
        ));
    }
    report(
        6,
        "T+ and T- have the same spectrum with multiplicities",
        all,
        &parts.join("; "),
    );
    assert!(all);
}

#[test]
fn criterion_07_distinguishing() {
    let cmp = compare_e(4).unwrap();
    let difference: BTreeSet<&LinearForm> = cmp.only_plus.iter().chain(&cmp.only_minus).collect();
    // (index, eigenvalue) of the first nodal difference, from an independent brute-force run
    let pinned = [(37, "12"), (49, "67/3"), (37, "6")];
    let max_cutoff = int(30);
    let mut all = true;
    let mut parts = Vec::new();
    for (s, (index, value)) in DISTINCT.iter().zip(pinned) {
        let p = tuple(s);
        let start = Instant::now();
        let d = first_nodal_difference(&p, &max_cutoff).unwrap();
        let elapsed = start.elapsed();
        let ok = match &d {
            Some(d) => {
                let witness = difference.iter().find(|f| f.eval(&p) == d.eigenvalue);
                parts.push(format!(
                    "({s}) line {} at {} = {}, {elapsed:.2?}",
                    d.index,
                    d.eigenvalue,
                    witness.map_or("no m = 4 form".to_string(), |f| f
                        .display_factored()
                        .to_string())
                ));
                witness.is_some()
                    && d.index == index
                    && d.eigenvalue == parse_rational(value).unwrap()
                    && within(elapsed, 30)
            }
            None => {
                parts.push(format!("({s}) no difference up to {max_cutoff}"));
                false
            }
        };
        all &= ok;
    }
    report(
        7,
        "first nodal difference sits at an m = 4 difference form",
        all,
        &parts.join("; "),
    );
    assert!(all);
}

#[test]
fn criterion_08_isometric_tuples() {
    // 20th distinct eigenvalue from an independent brute-force enumeration
    let pinned = ["20/3", "149/12", "35/3"];
    let mut all = true;
    let mut parts = Vec::new();
    for (s, expect) in ISOMETRIC.iter().zip(pinned) {
        let p = tuple(s);
        let start = Instant::now();
        let cutoff = cutoff_for_lines(Sign::Plus, &p, 20).unwrap();
        let r = check_isometric_degenerate(&p, &cutoff).unwrap();
        let elapsed = start.elapsed();
        let ok = r.consistent
            && r.lines_compared >= 20
            && cutoff == parse_rational(expect).unwrap()
            && within(elapsed, 30);
        all &= ok;
        parts.push(format!(
            "({s}) {} lines up to {cutoff}, difference = {}, {elapsed:.2?}",
            r.lines_compared,
            r.difference
                .as_ref()
                .map_or("none".to_string(), |d| d.eigenvalue.to_string())
        ));
    }
    report(
        8,
        "no nodal difference for tuples with an equal pair",
        all,
        &parts.join("; "),
    );
    assert!(all);
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rational(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_q(rng: &mut ChaCha8Rng, range: i64) -> [i64; 4] {
    std::array::from_fn(|_| rng.gen_range(-range..=range))
}

fn random_dominant(rng: &mut ChaCha8Rng) -> Matrix {
    let dim = rng.gen_range(2..=4);
    let mut rows = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let v = random_rational(rng, 6, 4);
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    for i in 0..dim {
        let off: Rational = (0..dim).filter(|&j| j != i).map(|j| rows[i][j].abs()).sum();
        rows[i][i] = off + rational(rng.gen_range(1..=8), rng.gen_range(1..=3));
    }
    Matrix::from_rows(rows).unwrap()
}

#[test]
fn criterion_09_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let u = make_u();

    let mut even_fail = 0;
    let mut congruence_fail = 0;
    for _ in 0..500 {
        let q = random_q(&mut rng, 7);
        let neg = q.map(|x| -x);
        for s in [q_plus(), q_minus()] {
            if s.quad_form(&q).unwrap() != s.quad_form(&neg).unwrap() {
                even_fail += 1;
            }
        }
        let q2 = random_q(&mut rng, 5).map(|x| 2 * x);
        let uq: Vec<i64> = u
            .mul_vec(&q2.map(int))
            .unwrap()
            .iter()
            .map(|x| x.to_integer().to_i64().unwrap())
            .collect();
        if q_minus().quad_form(&q2).unwrap() != q_plus().quad_form(&uq).unwrap() {
            congruence_fail += 1;
        }
    }

    let mut ball_fail = 0;
    for _ in 0..50 {
        let q = random_dominant(&mut rng);
        let cutoff = rational(rng.gen_range(1..=30), rng.gen_range(1..=3));
        let bound = nodaltorus::scalar::ceil_sqrt(&(&cutoff / gershgorin_gap(&q)))
            .to_i64()
            .unwrap();
        let got: BTreeSet<Vec<i64>> = enumerate_ball(&q, &cutoff)
            .unwrap()
            .into_iter()
            .map(|v| v.into_inner())
            .collect();
        if got != brute_ball(&q, &cutoff, bound) {
            ball_fail += 1;
        }
    }

    let mut round_trip_fail = 0;
    for _ in 0..1000 {
        let r = random_rational(&mut rng, 1_000_000, 10_000);
        if parse_rational(&format_rational(&r)).ok() != Some(r) {
            round_trip_fail += 1;
        }
        let f = LinearForm::new(std::array::from_fn(|_| random_rational(&mut rng, 500, 36)));
        if f.to_string().parse::<LinearForm>().ok() != Some(f) {
            round_trip_fail += 1;
        }
    }

    let pass = even_fail == 0 && congruence_fail == 0 && ball_fail == 0 && round_trip_fail == 0;
    report(
        9,
        "evenness, congruence on 2Z^4, ball vs brute force, round-trips",
        pass,
        &format!(
            "seed {SEED:#x}: evenness {even_fail}/1000, congruence {congruence_fail}/500, \
             ball {ball_fail}/50, round-trip {round_trip_fail}/2000 failures"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_mutations_are_caught() {
    let mutated_formula =
        validate_formula_with(2, &GridPolicy::default(), NodalFormula::DropPlusOne).unwrap();
    let re_rows = mutated_formula
        .rows
        .iter()
        .filter(|r| r.part == nodaltorus::NodalPart::Re);
    let every_re_flagged = re_rows.clone().all(|r| r.verdict == RowVerdict::Mismatch);
    let formula_caught = !mutated_formula.passed() && every_re_flagged;

    let first = GOLDEN_MINUS_ONLY
        .lines()
        .find(|l| l.contains("25/3*d"))
        .expect("golden list has the target");
    let mutated_text = GOLDEN_MINUS_ONLY.replacen(first, &first.replace("25/3*d", "26/3*d"), 1);
    let golden = GoldenLists::parse(GOLDEN_PLUS_ONLY, &mutated_text).unwrap();
    let opts = VerifyOptions {
        golden,
        ..VerifyOptions::default()
    };
    let verdict = verify_theorem_with(4, &opts).unwrap().verdict;
    let golden_caught = verdict == Verdict::Fail;

    let pass = formula_caught && golden_caught;
    report(
        10,
        "dropped +1 and a mutated golden form are both detected",
        pass,
        &format!(
            "formula mutation: {} mismatches over {} re rows; golden mutation ({first} -> 26/3*d): verdict {verdict:?}",
            mutated_formula.mismatches,
            re_rows.count()
        ),
    );
    assert!(pass);
}
