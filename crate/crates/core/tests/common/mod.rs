//! Brute-force reference searches shared by the integration tests.

use std::collections::BTreeSet;

use nodaltorus::{Matrix, Rational};
use num_traits::{Signed, ToPrimitive};

/// `min_i (Qᵢᵢ − Σ_{j≠i} |Qᵢⱼ|)`, a lower bound for the smallest eigenvalue.
pub fn gershgorin_gap(q: &Matrix) -> Rational {
    (0..q.dim())
        .map(|i| {
            q[(i, i)].clone()
                - (0..q.dim())
                    .filter(|&j| j != i)
                    .map(|j| q[(i, j)].abs())
                    .sum::<Rational>()
        })
        .min()
        .unwrap()
}

/// Box search with the form scaled to integers, so the test oracle stays fast.
pub fn brute_ball(q: &Matrix, cutoff: &Rational, bound: i64) -> BTreeSet<Vec<i64>> {
    let n = q.dim();
    let denom = nodaltorus::scalar::common_denominator(q.rows().flatten());
    let scale = Rational::from_integer(denom);
    let m: Vec<i128> = q
        .rows()
        .flatten()
        .map(|x| (x * &scale).to_integer().to_i128().unwrap())
        .collect();
    let limit = (cutoff * &scale).floor().to_integer().to_i128().unwrap();
    let mut out = BTreeSet::new();
    let mut v = vec![-bound; n];
    loop {
        let value: i128 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * v[i] as i128 * v[j] as i128)
            .sum();
        if v.iter().any(|&x| x != 0) && value <= limit {
            out.insert(v.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if v[k] < bound {
                v[k] += 1;
                break;
            }
            v[k] = -bound;
        }
    }
}
