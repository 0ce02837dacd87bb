//! Lower bound on the minimal data storage limit, in exact rationals:
//! the closed form min((floor(sqrt(m))+1)/m, 1/floor(sqrt(m))) and the
//! brute-force max over b of f_m(b) = min((b+1)/m, 1/b) that validates it.

use num_rational::Ratio;

pub type Frac = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub m: u64,
    pub floor_sqrt_m: u64,
    pub bound: Frac,
    pub argmax_b: u64,
    pub f_values: Option<Vec<Frac>>,
}

/// f_m(b) = min((b+1)/m, 1/b).
pub fn f_value(m: u64, b: u64) -> Frac {
    Frac::new(b + 1, m).min(Frac::new(1, b))
}

/// Closed-form lower bound on L_min(m). The argmax reported matches the
/// brute-force tie-break toward smaller b: at perfect squares both
/// sqrt(m) and sqrt(m)-1 attain the bound.
pub fn lower_bound(m: u64) -> BoundReport {
    assert!(m >= 1, "machine count must be at least 1");
    let s = m.isqrt();
    let bound = Frac::new(s + 1, m).min(Frac::new(1, s));
    let argmax_b = if s > 1 && s * s == m { s - 1 } else { s };
    BoundReport { m, floor_sqrt_m: s, bound, argmax_b, f_values: None }
}

/// Brute-force bound: evaluates f_m(b) for every b in [1..m] and returns
/// the maximum, ties broken toward smaller b. The scan counts how many b
/// fall on the increasing branch (b+1)/m, i.e. satisfy b(b+1) <= m; the
/// maximum of the increasing branch sits at its last b and the maximum of
/// the decreasing branch 1/b at its first. f64 products are exact here
/// (below 2^53) and let the scan vectorize.
pub fn lower_bound_bruteforce(m: u64) -> BoundReport {
    assert!(m >= 1, "machine count must be at least 1");
    let mf = m as f64;
    let low_branch: u64 = (1..=m).map(|b| (((b as f64) * (b as f64 + 1.0)) <= mf) as u64).sum();
    let (bound, argmax_b) = if low_branch == 0 {
        // every b is on the 1/b branch; the max is at b = 1
        (Frac::new(1, 1), 1)
    } else {
        let a = Frac::new(low_branch + 1, m); // f_m(low_branch)
        let c = Frac::new(1, low_branch + 1); // f_m(low_branch + 1)
        if a >= c {
            (a, low_branch)
        } else {
            (c, low_branch + 1)
        }
    };
    BoundReport { m, floor_sqrt_m: m.isqrt(), bound, argmax_b, f_values: None }
}

/// Brute force with the full f_m(b) table attached, for display.
pub fn lower_bound_bruteforce_with_table(m: u64) -> BoundReport {
    let mut report = lower_bound_bruteforce(m);
    report.f_values = Some((1..=m).map(|b| f_value(m, b)).collect());
    report
}
