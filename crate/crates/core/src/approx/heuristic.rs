//! Rules for when the normal approximation of `k` is acceptable.

/// Single-sample rule: `1.4 N^0.67 <= A <= 1.13 N^1.19`, `N > 5`, `A > 5`.
pub fn heuristic_single(n: u32, a: u32) -> bool {
    if n <= 5 || a <= 5 {
        return false;
    }
    let (n, a) = (n as f64, a as f64);
    1.4 * n.powf(0.67) <= a && a <= 1.13 * n.powf(1.19)
}

/// Per-category rule: `1.4 N_s^0.67 <= a_bar <= 1.13 (N_s - 8)^1.19`.
///
/// `a_bar` is the expected number of draws landing in the category. For
/// `N_s <= 8` the upper bound is not defined and the rule rejects.
pub fn heuristic_category(n_s: u32, a_bar: f64) -> bool {
    if n_s <= 8 || !a_bar.is_finite() {
        return false;
    }
    let n = n_s as f64;
    1.4 * n.powf(0.67) <= a_bar && a_bar <= 1.13 * (n - 8.0).powf(1.19)
}

/// Integer interval of `A` accepted by [`heuristic_single`] at this `N`.
pub fn single_acceptance_interval(n: u32) -> Option<(u32, u32)> {
    if n <= 5 {
        return None;
    }
    let nf = n as f64;
    let mut lo = (1.4 * nf.powf(0.67)).ceil().max(6.0) as u32;
    let mut hi = (1.13 * nf.powf(1.19)).floor() as u32;
    // Nudge across rounding at the edges so both ends are accepted.
    while lo <= hi && !heuristic_single(n, lo) {
        lo += 1;
    }
    while hi >= lo && !heuristic_single(n, hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}
