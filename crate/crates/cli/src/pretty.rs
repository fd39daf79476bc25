//! Human-readable rendering. Eigenvalues carry their `4π²` factor here,
//! with the content of a form pulled out: `(4π²/3)(4a + 25b + c)`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use nodaltorus::oracle::{RowVerdict, ValidationReport};
use nodaltorus::spectral::NodalDifference;
use nodaltorus::theorem::TheoremReport;
use nodaltorus::{scalar, LinearForm, NodalSequence, ParamTuple, Rational};
use num_traits::{One, Zero};

/// `4π²·r` as a decimal string, display only.
pub fn approx_string(r: &Rational) -> String {
    format!(
        "{:.6}",
        4.0 * std::f64::consts::PI.powi(2) * scalar::to_f64(r)
    )
}

fn pi_prefix(g: &Rational) -> String {
    let k = g * Rational::from_integer(4.into());
    match (k.numer().is_one(), k.denom().is_one()) {
        (_, true) => format!("{}π²", k.numer()),
        (true, false) => format!("(π²/{})", k.denom()),
        (false, false) => format!("({}π²/{})", k.numer(), k.denom()),
    }
}

/// `4π²·r` with the factor folded in, e.g. `48π²` or `(268π²/3)`.
pub fn eigenvalue(r: &Rational) -> String {
    pi_prefix(r)
}

/// A form with `4π²` and its content pulled out.
pub fn form(f: &LinearForm) -> String {
    let (g, ints) = f.factored();
    if g.is_zero() {
        return "0".into();
    }
    let primitive = LinearForm::new(ints.map(Rational::from_integer));
    format!("{}{}", pi_prefix(&g), primitive.display_factored())
}

fn pair_counts(pairs: &[(u64, u64)]) -> BTreeMap<(u64, u64), usize> {
    let mut out = BTreeMap::new();
    for p in pairs {
        *out.entry(*p).or_insert(0) += 1;
    }
    out
}

fn pairs_summary(pairs: &[(u64, u64)]) -> String {
    pair_counts(pairs)
        .iter()
        .map(|((im, re), n)| format!("({im},{re})x{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn spectrum(w: &mut dyn Write, seq: &NodalSequence, approx: bool) -> io::Result<()> {
    writeln!(
        w,
        "T{}({}) up to {}: {} distinct eigenvalues, {} vectors",
        seq.sign,
        seq.params,
        eigenvalue(&seq.cutoff),
        seq.lines.len(),
        seq.total_degeneracy()
    )?;
    for (i, line) in seq.lines.iter().enumerate() {
        let decimal = if approx {
            format!("  ~{}", approx_string(&line.eigenvalue))
        } else {
            String::new()
        };
        writeln!(
            w,
            "{:>4}  {:<8} {:<14} x{:<4} nodal (im,re): {}{decimal}",
            i + 1,
            line.eigenvalue.to_string(),
            eigenvalue(&line.eigenvalue),
            line.degeneracy(),
            pairs_summary(&line.nodal_pairs)
        )?;
    }
    Ok(())
}

pub fn compare(
    w: &mut dyn Write,
    p: &ParamTuple,
    cutoff: &Rational,
    lines: usize,
    difference: Option<&NodalDifference>,
) -> io::Result<()> {
    match difference {
        Some(d) => {
            writeln!(
                w,
                "({p}): nodal sequences differ at eigenvalue #{} = {} = 4π²·{} (degeneracy {})",
                d.index,
                eigenvalue(&d.eigenvalue),
                d.eigenvalue,
                d.degeneracy
            )?;
            writeln!(w, "  T+ nodal (im,re): {}", pairs_summary(&d.plus_pairs))?;
            writeln!(w, "  T- nodal (im,re): {}", pairs_summary(&d.minus_pairs))
        }
        None => writeln!(
            w,
            "({p}): none below cutoff {} ({lines} distinct eigenvalues compared)",
            eigenvalue(cutoff)
        ),
    }
}

/// One row per nodal pair occurring in the first differing line.
pub fn compare_csv(w: &mut dyn Write, difference: Option<&NodalDifference>) -> io::Result<()> {
    writeln!(
        w,
        "index,eigenvalue,degeneracy,nu_im,nu_re,plus_count,minus_count"
    )?;
    let Some(d) = difference else {
        return Ok(());
    };
    let plus = pair_counts(&d.plus_pairs);
    let minus = pair_counts(&d.minus_pairs);
    let keys: std::collections::BTreeSet<_> = plus.keys().chain(minus.keys()).collect();
    for (im, re) in keys {
        writeln!(
            w,
            "{},{},{},{im},{re},{},{}",
            d.index,
            d.eigenvalue,
            d.degeneracy,
            plus.get(&(*im, *re)).unwrap_or(&0),
            minus.get(&(*im, *re)).unwrap_or(&0)
        )?;
    }
    Ok(())
}

pub fn theorem(w: &mut dyn Write, r: &TheoremReport) -> io::Result<()> {
    writeln!(w, "verdict: {:?}", r.verdict)?;
    for level in &r.levels {
        let tag = if level.exploratory {
            " (exploratory)"
        } else {
            ""
        };
        writeln!(
            w,
            "m = {}: |E+| = {}, |E-| = {}, common {}, equal = {}{tag}",
            level.m, level.plus_size, level.minus_size, level.common_size, level.equal
        )?;
    }
    if let Some(level) = r.levels.iter().find(|l| l.m == 4) {
        for (sign, list) in [("+", &level.only_plus), ("-", &level.only_minus)] {
            writeln!(w, "E_4{sign} only ({}):", list.len())?;
            for f in list {
                writeln!(w, "  {}", form(f))?;
            }
        }
    }
    writeln!(w, "golden lists match: {}", r.golden.matches)?;
    for bp in &r.parity {
        let base: Vec<String> = bp.base.iter().map(ToString::to_string).collect();
        writeln!(
            w,
            "parity ({}): E+ only even/odd {}/{}, E- only even/odd {}/{}",
            base.join(","),
            bp.plus_even,
            bp.plus_odd,
            bp.minus_even,
            bp.minus_odd
        )?;
    }
    if let Some(c) = &r.certificate {
        writeln!(
            w,
            "maximum {} in E{} only, certified over {:?}; {} competitor(s) not dominated",
            form(&c.target),
            c.target_in,
            c.scope,
            c.flagged.len()
        )?;
    }
    if let Some(n) = &r.numeric_check {
        writeln!(
            w,
            "at ({}): {} vs runner-up {} = {}",
            n.params,
            eigenvalue(&n.target_value),
            form(&n.runner_up),
            eigenvalue(&n.runner_up_value)
        )?;
    }
    for note in &r.notes {
        writeln!(w, "note: {note}")?;
    }
    for f in &r.failures {
        writeln!(w, "failure: {f}")?;
    }
    Ok(())
}

pub fn theorem_csv(w: &mut dyn Write, r: &TheoremReport) -> io::Result<()> {
    writeln!(
        w,
        "m,equal,plus_size,minus_size,common_size,only_plus,only_minus,exploratory"
    )?;
    for l in &r.levels {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            l.m,
            l.equal,
            l.plus_size,
            l.minus_size,
            l.common_size,
            l.only_plus.len(),
            l.only_minus.len(),
            l.exploratory
        )?;
    }
    Ok(())
}

pub fn validation(w: &mut dyn Write, r: &ValidationReport) -> io::Result<()> {
    writeln!(
        w,
        "{:<16} {:<4} {:>7} {:>5} {:>9}  verdict",
        "q", "part", "formula", "slab", "floodfill"
    )?;
    for row in &r.rows {
        let flood = row
            .floodfill
            .map_or_else(|| "-".to_string(), |c| c.to_string());
        let verdict = match row.verdict {
            RowVerdict::Match => "match",
            RowVerdict::Mismatch => "MISMATCH",
        };
        writeln!(
            w,
            "{:<16} {:<4} {:>7} {:>5} {:>9}  {verdict}",
            row.q.to_string(),
            row.part.to_string(),
            row.formula,
            row.slab,
            flood
        )?;
    }
    writeln!(w, "{} cases, {} mismatches", r.rows.len(), r.mismatches)
}
