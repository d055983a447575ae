//! Integer-order Bessel functions `J_n` and exponentially scaled `I_n`.
//!
//! Small arguments (`|x| <= 12`) use the power series. Larger arguments use
//! Miller's backward recurrence normalized by the generating-function sums
//!
//! ```text
//! J_0(x) + 2 sum_k J_2k(x) = 1
//! I_0(x) + 2 sum_k I_k(x)  = e^x
//! ```
//!
//! These stay independent of the quadrature path in [`crate::infinite`].

/// Arguments up to this magnitude use the power series.
pub const SERIES_LIMIT: f64 = 12.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// Bessel function of the first kind `J_n(x)`.
pub fn bessel_j(order: i64, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let mut sign = if order < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    let x = x.abs();
    let value = if x == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else if x <= SERIES_LIMIT {
        j_series(n, x)
    } else {
        j_miller(n, x)
    };
    sign * value
}

/// `e^{-x} I_n(x)` for `x >= 0`.
pub fn bessel_i_scaled(order: i64, x: f64) -> f64 {
    assert!(x >= 0.0, "scaled I_n needs a non-negative argument, got {x}");
    let n = order.unsigned_abs() as usize;
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        (-x).exp() * i_series(n, x)
    } else {
        i_miller_scaled(n, x)
    }
}

/// Modified Bessel function `I_n(x)` for `x >= 0`. Overflows for large `x`;
/// prefer [`bessel_i_scaled`].
pub fn bessel_i(order: i64, x: f64) -> f64 {
    bessel_i_scaled(order, x) * x.exp()
}

/// `(x/2)^n / n!` built up multiplicatively so it cannot overflow early.
fn leading_term(n: usize, half: f64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * half / i as f64)
}

fn j_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = leading_term(n, half);
    let mut sum = term;
    for k in 1..500 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k as f64 > half {
            break;
        }
    }
    sum
}

fn i_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = leading_term(n, half);
    let mut sum = term;
    for k in 1..500 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

fn even_at_least(v: f64) -> usize {
    let k = v.ceil() as usize;
    k + (k % 2)
}

fn j_miller(n: usize, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let start = even_at_least(top + 40.0 + (40.0 * top).sqrt());
    let two_over_x = 2.0 / x;

    // Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from an arbitrary seed.
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        // `current` now holds the unnormalized J_{k-1}.
        if k - 1 == n {
            wanted = current;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            wanted *= RESCALE_BY;
        }
    }
    norm += current;
    wanted / norm
}

fn i_miller_scaled(n: usize, x: f64) -> f64 {
    let start = even_at_least(n as f64 + 40.0 + 12.0 * x.sqrt());
    let two_over_x = 2.0 / x;

    // Backward recurrence I_{k-1} = (2k/x) I_k + I_{k+1}; all terms positive.
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * current + above;
        above = current;
        current = below;
        if k - 1 == n {
            wanted = current;
        }
        if k - 1 > 0 {
            norm += 2.0 * current;
        }
        if current > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            wanted *= RESCALE_BY;
        }
    }
    norm += current;
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    // (n, x, J_n(x), e^{-x} I_n(x)) from 40-digit arbitrary precision.
    const REFERENCE: &[(i64, f64, f64, f64)] = &[
        (0, 0.5, 0.93846980724081290423, 0.64503527044915006811),
        (1, 2.0, 0.5767248077568733872, 0.21526928924893765916),
        (3, 5.0, 0.36483123061366699446, 0.069610742279333228684),
        (0, 12.0, 0.047689310796833536624, 0.11642622121344044298),
        (5, 12.0, -0.073470963101658581266, 0.039898134610896546063),
        (0, 12.5, 0.14688405470042110231, 0.11402192946228890093),
        (10, 20.0, 0.18648255802394508321, 0.0072968964849783254963),
        (30, 10.0, 1.5510960782574670069e-12, 3.535551211760517793e-16),
        (2, 50.0, -0.059712800794258820511, 0.054321901691738376544),
        (0, 200.0, -0.015437439930565091592, 0.02822715994911191567),
        (40, 200.0, -0.031932993297986605204, 0.00051871730383517681218),
        (100, 90.0, 0.0026021305819963289288, 1.9125803266234321195e-24),
        (30, 40.0, -0.10408594976564972693, 1.1585067161207774272e-6),
        (7, 0.2, 1.9816482028036030785e-11, 1.6264974906188823495e-11),
    ];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn matches_reference_values() {
        for &(n, x, j, i) in REFERENCE {
            let got_j = bessel_j(n, x);
            // Series cancellation near x = 12 limits J to an absolute error.
            assert!(
                rel(got_j, j) < 1e-10 || (got_j - j).abs() < 1e-12,
                "J_{n}({x}) = {got_j}, want {j}"
            );
            let got_i = bessel_i_scaled(n, x);
            assert!(rel(got_i, i) < 1e-10, "e^-x I_{n}({x}) = {got_i}, want {i}");
        }
    }

    #[test]
    fn symmetries_and_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
        assert_eq!(bessel_j(-3, 7.5), -bessel_j(3, 7.5));
        assert_eq!(bessel_j(-4, 7.5), bessel_j(4, 7.5));
        assert_eq!(bessel_j(3, -7.5), -bessel_j(3, 7.5));
        assert_eq!(bessel_i_scaled(-5, 30.0), bessel_i_scaled(5, 30.0));
    }

    #[test]
    fn series_and_recurrence_agree_at_the_seam() {
        for n in 0..40 {
            let a = j_series(n, SERIES_LIMIT);
            let b = j_miller(n, SERIES_LIMIT);
            assert!((a - b).abs() < 1e-12, "J_{n}: {a} vs {b}");
            let a = (-SERIES_LIMIT).exp() * i_series(n, SERIES_LIMIT);
            let b = i_miller_scaled(n, SERIES_LIMIT);
            assert!(rel(a, b) < 1e-12, "I_{n}: {a} vs {b}");
        }
    }

    #[test]
    fn generating_sums() {
        for x in [0.3, 4.0, 11.0, 13.0, 60.0, 150.0] {
            let j: f64 = (-300..=300).map(|k| bessel_j(k, x).powi(2)).sum();
            assert!((j - 1.0).abs() < 1e-12, "sum J_k^2 at {x} = {j}");
            let i: f64 = (-300..=300).map(|k| bessel_i_scaled(k, x)).sum();
            assert!((i - 1.0).abs() < 1e-12, "sum e^-x I_k at {x} = {i}");
        }
    }

    #[test]
    fn first_zero_of_j0() {
        let z = 2.404825557695772768621632;
        assert!(bessel_j(0, z).abs() < 1e-15);
    }
}
