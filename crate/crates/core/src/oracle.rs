//! Independent nodal-domain counters for the eigenfunctions
//! `cos(2π qᵀy)` and `sin(2π qᵀy)`, counted in the open unit cube without
//! identifying opposite faces.
//!
//! [`slab_count`] uses the fact that the zero set is a family of parallel
//! hyperplanes. [`floodfill_count`] knows nothing about hyperplanes: it
//! samples signs at cell centers of an `N^n` grid and counts connected
//! components under face adjacency. Signs are decided exactly: `cos(2πt)`
//! and `sin(2πt)` change sign only at multiples of `1/4`, so the position
//! of the rational `t` in that lattice fixes the sign.

use std::io::{self, Write};

use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar;
use crate::spectral::{enumerate_v_m, nodal_count, NodalPart};
use crate::torus::LatticeVector;
use crate::Rational;

/// Largest grid the flood fill will allocate.
pub const MAX_GRID_CELLS: u128 = 1 << 26;

/// A regular grid on `(0,1)^n` with cell centers at `(kᵢ + oᵢ)/N`.
///
/// The offsets `oᵢ` may differ per axis. A uniform offset cannot move the
/// centers off the zero set when `Σ qᵢ = 0`, since it cancels out of `qᵀy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
    offsets: Vec<Rational>,
}

impl GridSpec {
    pub fn new(dim: usize, resolution: usize, offset: Rational) -> Result<Self> {
        Self::with_offsets(resolution, vec![offset; dim])
    }

    pub fn with_offsets(resolution: usize, offsets: Vec<Rational>) -> Result<Self> {
        let dim = offsets.len();
        if dim == 0 {
            return Err(Error::Precondition(
                "grid dimension must be positive".into(),
            ));
        }
        if resolution < 2 {
            return Err(Error::Precondition(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        if let Some(o) = offsets
            .iter()
            .find(|o| !o.is_positive() || **o >= Rational::one())
        {
            return Err(Error::Precondition(format!(
                "grid offset must lie in (0,1), got {o}"
            )));
        }
        let cells = (resolution as u128).checked_pow(dim as u32);
        match cells {
            Some(c) if c <= MAX_GRID_CELLS => {}
            _ => {
                return Err(Error::EnumerationTooLarge {
                    cells: cells.unwrap_or(u128::MAX),
                    limit: MAX_GRID_CELLS,
                })
            }
        }
        Ok(GridSpec {
            resolution,
            offsets,
        })
    }

    /// Cell centers at `(k + 1/2)/N`.
    pub fn centered(dim: usize, resolution: usize) -> Result<Self> {
        Self::new(dim, resolution, scalar::rational(1, 2))
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn cells(&self) -> usize {
        self.resolution.pow(self.dim() as u32)
    }

    fn offsets_label(&self) -> String {
        let parts: Vec<String> = self.offsets.iter().map(ToString::to_string).collect();
        parts.join(",")
    }
}

fn l1(q: &[i64]) -> u64 {
    q.iter().map(|x| x.unsigned_abs()).sum()
}

fn require_nonzero(q: &[i64]) -> Result<()> {
    if q.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("q must be nonzero".into()));
    }
    Ok(())
}

/// Nodal domains of `cos(2π qᵀy)` (re) or `sin(2π qᵀy)` (im) on `(0,1)^n`.
///
/// `qᵀy` ranges over the open interval `(Σ min(qᵢ,0), Σ max(qᵢ,0))`. Each
/// zero level inside it is a hyperplane cutting the cube, so the count is
/// one more than the number of interior levels.
pub fn slab_count(q: &[i64], part: NodalPart) -> Result<u64> {
    require_nonzero(q)?;
    let lo: i128 = q.iter().map(|&x| x.min(0) as i128).sum();
    let hi: i128 = q.iter().map(|&x| x.max(0) as i128).sum();
    // levels in units of 1/4: cos vanishes at odd multiples, sin at even ones
    let residue = match part {
        NodalPart::Re => 1,
        NodalPart::Im => 0,
    };
    let count = count_residue_in_open(4 * lo, 4 * hi, residue, 2);
    Ok(count as u64 + 1)
}

/// Number of integers `j` with `lo < j < hi` and `j ≡ residue (mod modulus)`.
fn count_residue_in_open(lo: i128, hi: i128, residue: i128, modulus: i128) -> i128 {
    if hi - lo < 2 {
        return 0;
    }
    let upto = |x: i128| (x - residue).div_euclid(modulus);
    upto(hi - 1) - upto(lo)
}

/// Exact sign test for `cos(2πt)` / `sin(2πt)` at `t = (s + Σ qᵢoᵢ)/N`,
/// `s = Σ qᵢkᵢ`. With `r` the common denominator of the offsets and
/// `P = r·Σ qᵢoᵢ`, the quarter-period coordinate is `4t = 4(r·s + P)/(r·N)`.
struct SignRule {
    scale: i128,
    shift: i128,
    period: i128,
}

impl SignRule {
    fn new(q: &[i64], part: NodalPart, grid: &GridSpec) -> Result<Self> {
        let r = scalar::common_denominator(&grid.offsets);
        let r_big = Rational::from_integer(r.clone());
        let weighted: Rational = q
            .iter()
            .zip(&grid.offsets)
            .map(|(&x, o)| o * scalar::int(x))
            .sum();
        let big_p = (weighted * r_big).to_integer();
        let p = big_p.to_i128().ok_or(Error::Overflow)?;
        let r = r.to_i128().ok_or(Error::Overflow)?;
        let d = r
            .checked_mul(grid.resolution as i128)
            .ok_or(Error::Overflow)?;
        // cos(πu/2) is sin(π(u+1)/2): shift the cosine onto the sine lattice
        let phase = match part {
            NodalPart::Re => d,
            NodalPart::Im => 0,
        };
        let shift = p
            .checked_mul(4)
            .and_then(|x| x.checked_add(phase))
            .ok_or(Error::Overflow)?;
        Ok(SignRule {
            scale: r.checked_mul(4).ok_or(Error::Overflow)?,
            shift,
            period: d.checked_mul(2).ok_or(Error::Overflow)?,
        })
    }

    /// `Some(true)` for positive, `Some(false)` for negative, `None` on the zero set.
    fn sign(&self, s: i128) -> Option<bool> {
        let v = self.scale * s + self.shift;
        let (k, rem) = (v.div_euclid(self.period), v.rem_euclid(self.period));
        if rem == 0 {
            None
        } else {
            Some(k.rem_euclid(2) == 0)
        }
    }
}

/// Connected components of same-sign grid cells under face adjacency.
///
/// The grid must satisfy `N ≥ 8·Σ|qᵢ|`, so that every slab between
/// consecutive zero levels is several cells thick. A cell center lying on
/// the zero set is reported as [`Error::GridDegenerate`]; pick another offset.
pub fn floodfill_count(q: &[i64], part: NodalPart, grid: &GridSpec) -> Result<u64> {
    require_nonzero(q)?;
    if q.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            found: q.len(),
        });
    }
    let m = l1(q);
    let required = 8 * m as usize;
    if grid.resolution < required {
        return Err(Error::ResolutionTooCoarse {
            resolution: grid.resolution,
            l1: m,
            required,
        });
    }
    let rule = SignRule::new(q, part, grid)?;
    let n = grid.resolution;
    let dim = grid.dim();
    let cells = grid.cells();

    let mut positive = vec![false; cells];
    let mut digits = vec![0usize; dim];
    let mut s: i128 = 0;
    for (idx, slot) in positive.iter_mut().enumerate() {
        match rule.sign(s) {
            Some(sign) => *slot = sign,
            None => {
                return Err(Error::GridDegenerate {
                    q: q.to_vec(),
                    offset: grid.offsets_label(),
                })
            }
        }
        if idx + 1 == cells {
            break;
        }
        // odometer with the last axis fastest, keeping s = Σ qᵢkᵢ current
        let mut axis = dim - 1;
        loop {
            if digits[axis] + 1 < n {
                digits[axis] += 1;
                s += q[axis] as i128;
                break;
            }
            s -= q[axis] as i128 * (n as i128 - 1);
            digits[axis] = 0;
            axis -= 1;
        }
    }

    let strides: Vec<usize> = (0..dim).map(|i| n.pow((dim - 1 - i) as u32)).collect();
    let mut visited = vec![0u64; cells.div_ceil(64)];
    let is_visited = |v: &[u64], i: usize| v[i / 64] >> (i % 64) & 1 == 1;
    let mut components = 0u64;
    let mut stack: Vec<usize> = Vec::new();
    for start in 0..cells {
        if is_visited(&visited, start) {
            continue;
        }
        components += 1;
        let sign = positive[start];
        visited[start / 64] |= 1 << (start % 64);
        stack.push(start);
        while let Some(cell) = stack.pop() {
            for &stride in &strides {
                let coord = cell / stride % n;
                let mut visit = |next: usize| {
                    if !is_visited(&visited, next) && positive[next] == sign {
                        visited[next / 64] |= 1 << (next % 64);
                        stack.push(next);
                    }
                };
                if coord > 0 {
                    visit(cell - stride);
                }
                if coord + 1 < n {
                    visit(cell + stride);
                }
            }
        }
    }
    Ok(components)
}

/// Drops the coordinates with `qᵢ = 0`; the eigenfunction is constant along them.
pub fn drop_zero_coordinates(q: &[i64]) -> LatticeVector {
    LatticeVector::new(q.iter().copied().filter(|&x| x != 0).collect())
}

/// Grid resolution `N = per_l1·Σ|qᵢ|` clamped to `[min, max]`, plus the
/// offsets tried in turn when a cell center hits the zero set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridPolicy {
    pub per_l1: usize,
    pub min: usize,
    pub max: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            per_l1: 8,
            min: 16,
            max: 64,
        }
    }
}

impl GridPolicy {
    pub fn resolution(&self, l1: u64) -> usize {
        (self.per_l1 * l1 as usize).clamp(self.min, self.max)
    }

    /// Offset vectors tried in turn: centered, then `1/2 ± 1/(4N)` on every
    /// axis, then staggered offsets `1/2 + pᵢ/(16·N·pₙ)` with distinct primes `pᵢ`.
    pub fn offsets(&self, dim: usize, resolution: usize) -> Vec<Vec<Rational>> {
        const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        let n = resolution as i64;
        let half = scalar::rational(1, 2);
        let mut out = vec![
            vec![half.clone(); dim],
            vec![&half + scalar::rational(1, 4 * n); dim],
            vec![&half - scalar::rational(1, 4 * n); dim],
        ];
        for shift in 0..2 {
            let denom = 16 * n * PRIMES[PRIMES.len() - 1 - shift];
            out.push(
                (0..dim)
                    .map(|i| &half + scalar::rational(PRIMES[(i + shift) % PRIMES.len()], denom))
                    .collect(),
            );
        }
        out
    }

    /// Flood fill in the dimension of `q`, retrying offsets on degeneracy.
    /// Returns the count and the grid that produced it.
    pub fn floodfill(&self, q: &[i64], part: NodalPart) -> Result<(u64, GridSpec)> {
        let resolution = self.resolution(l1(q));
        let mut last = None;
        for offsets in self.offsets(q.len(), resolution) {
            let grid = GridSpec::with_offsets(resolution, offsets)?;
            match floodfill_count(q, part, &grid) {
                Ok(c) => return Ok((c, grid)),
                Err(e @ Error::GridDegenerate { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one offset"))
    }
}

/// Formula under test; `DropPlusOne` is a deliberate mutation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodalFormula {
    #[default]
    Closed,
    DropPlusOne,
}

impl NodalFormula {
    pub fn count(self, q: &[i64], part: NodalPart) -> Result<u64> {
        let c = nodal_count(q, part)?;
        Ok(match (self, part) {
            (NodalFormula::DropPlusOne, NodalPart::Re) => c - 1,
            _ => c,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVerdict {
    Match,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationRow {
    pub q: LatticeVector,
    pub part: NodalPart,
    pub formula: u64,
    pub slab: u64,
    pub floodfill: Option<u64>,
    pub resolution: usize,
    #[serde(serialize_with = "serialize_offsets")]
    pub offsets: Option<Vec<Rational>>,
    pub error: Option<String>,
    pub verdict: RowVerdict,
}

fn serialize_offsets<S: Serializer>(
    r: &Option<Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_seq(r.iter().map(ToString::to_string)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub max_m: u64,
    pub formula: NodalFormula,
    pub policy: GridPolicy,
    pub rows: Vec<ValidationRow>,
    pub mismatches: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    /// Header `q1,q2,q3,q4,part,formula,slab,floodfill,verdict`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "q1,q2,q3,q4,part,formula,slab,floodfill,verdict")?;
        for row in &self.rows {
            let q: Vec<String> = row.q.iter().map(ToString::to_string).collect();
            let flood = row.floodfill.map(|c| c.to_string()).unwrap_or_default();
            let verdict = match row.verdict {
                RowVerdict::Match => "match",
                RowVerdict::Mismatch => "mismatch",
            };
            writeln!(
                w,
                "{},{},{},{},{},{}",
                q.join(","),
                row.part,
                row.formula,
                row.slab,
                flood,
                verdict
            )?;
        }
        Ok(())
    }
}

/// Representatives of `V_m` up to `q ∼ -q`: first nonzero entry positive.
pub fn sign_representatives(m: u64) -> Result<Vec<LatticeVector>> {
    Ok(enumerate_v_m(m)?
        .into_iter()
        .filter(|q| q.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect())
}

fn validate_one(
    q: &LatticeVector,
    part: NodalPart,
    policy: &GridPolicy,
    formula: NodalFormula,
) -> Result<ValidationRow> {
    let expected = formula.count(q, part)?;
    let slab = slab_count(q, part)?;
    let resolution = policy.resolution(q.l1_norm());
    let (floodfill, offsets, error) = match policy.floodfill(q, part) {
        Ok((c, grid)) => (Some(c), Some(grid.offsets), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let verdict = if floodfill == Some(slab) && slab == expected {
        RowVerdict::Match
    } else {
        RowVerdict::Mismatch
    };
    Ok(ValidationRow {
        q: q.clone(),
        part,
        formula: expected,
        slab,
        floodfill,
        resolution,
        offsets,
        error,
        verdict,
    })
}

/// Checks `slab_count = floodfill_count = ν(q)` for every `q` with
/// `1 ≤ Σ|qᵢ| ≤ max_m` (one of each pair `±q`) and both parts.
pub fn validate_formula(max_m: u64, policy: &GridPolicy) -> Result<ValidationReport> {
    validate_formula_with(max_m, policy, NodalFormula::Closed)
}

pub fn validate_formula_with(
    max_m: u64,
    policy: &GridPolicy,
    formula: NodalFormula,
) -> Result<ValidationReport> {
    if max_m == 0 {
        return Err(Error::Precondition("max_m must be at least 1".into()));
    }
    let mut cases = Vec::new();
    for m in 1..=max_m {
        for q in sign_representatives(m)? {
            for part in NodalPart::BOTH {
                cases.push((q.clone(), part));
            }
        }
    }
    let rows = cases
        .par_iter()
        .map(|(q, part)| validate_one(q, *part, policy, formula))
        .collect::<Result<Vec<_>>>()?;
    let mismatches = rows
        .iter()
        .filter(|r| r.verdict == RowVerdict::Mismatch)
        .count();
    Ok(ValidationReport {
        max_m,
        formula,
        policy: policy.clone(),
        rows,
        mismatches,
    })
}
