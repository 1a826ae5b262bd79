//! Chebyshev polynomials of the second kind, their derivatives, and the
//! positive zeros of both.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChebKind {
    U,
    UPrime,
}

/// Positive zeros of `U_n` or `U'_n`, strictly descending, together with
/// the half-angle map `x -> 1 - 2x^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebRootList {
    pub kind: ChebKind,
    pub n: usize,
    values: Vec<f64>,
}

impl ChebRootList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `1 - 2 x^2` for every stored zero, recomputed on each call. These are
    /// the cosines `β_j` (for `U`) or `γ_j` (for `U'`) of the factorizations.
    pub fn mapped(&self) -> Vec<f64> {
        self.values.iter().map(|x| 1.0 - 2.0 * x * x).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `U_n(x)` from the three-term recurrence.
pub fn cheb_u(n: usize, x: f64) -> f64 {
    u_and_derivative(n, x).0
}

/// `U'_n(x)` from the differentiated recurrence
/// `U'_{k+1} = 2 U_k + 2x U'_k - U'_{k-1}`, which is regular at `x = ±1`.
pub fn cheb_u_prime(n: usize, x: f64) -> f64 {
    u_and_derivative(n, x).1
}

fn u_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut u_prev, mut u) = (1.0, 2.0 * x);
    let (mut d_prev, mut d) = (0.0, 2.0);
    if n == 0 {
        return (1.0, 0.0);
    }
    for _ in 1..n {
        let u_next = 2.0 * x * u - u_prev;
        let d_next = 2.0 * u + 2.0 * x * d - d_prev;
        u_prev = u;
        u = u_next;
        d_prev = d;
        d = d_next;
    }
    (u, d)
}

/// Positive zeros `cos(jπ/(n+1))` of `U_n`, descending.
pub fn positive_roots_u(n: usize) -> ChebRootList {
    let values = (1..=n / 2)
        .map(|j| (j as f64 * PI / (n as f64 + 1.0)).cos())
        .collect();
    ChebRootList {
        kind: ChebKind::U,
        n,
        values,
    }
}

/// Positive zeros of `U'_n`, descending.
///
/// Each zero is isolated between consecutive zeros of `U_n` and refined by
/// Newton's method, falling back to bisection whenever a step leaves the
/// bracket.
pub fn positive_roots_u_prime(n: usize) -> Result<ChebRootList> {
    if n < 2 {
        return Ok(ChebRootList {
            kind: ChebKind::UPrime,
            n,
            values: Vec::new(),
        });
    }
    // zeros of U_n, descending: x_1 > x_2 > ... > x_n
    let nodes: Vec<f64> = (1..=n)
        .map(|j| (j as f64 * PI / (n as f64 + 1.0)).cos())
        .collect();
    let count = (n - 1) / 2;
    let mut values = Vec::with_capacity(count);
    for index in 0..count {
        let (hi, lo) = (nodes[index], nodes[index + 1]);
        values.push(bracketed_zero(n, lo, hi, index)?);
    }
    Ok(ChebRootList {
        kind: ChebKind::UPrime,
        n,
        values,
    })
}

/// Scale used for zero tests of `U'_n`: its maximum `U'_n(1)` on `[-1, 1]`.
pub fn u_prime_scale(n: usize) -> f64 {
    let n = n as f64;
    n * (n + 1.0) * (n + 2.0) / 3.0
}

fn bracketed_zero(n: usize, mut lo: f64, mut hi: f64, index: usize) -> Result<f64> {
    let mut f_lo = cheb_u_prime(n, lo);
    let f_hi = cheb_u_prime(n, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { n, index });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_CAP {
        let d = cheb_u_prime(n, x);
        if d == 0.0 {
            return Ok(x);
        }
        if d.signum() == f_lo.signum() {
            lo = x;
            f_lo = d;
        } else {
            hi = x;
        }
        let second = u_second_derivative(n, x);
        let newton = if second != 0.0 { x - d / second } else { f64::NAN };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
        if hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
    }
    Ok(x)
}

/// `U''_n(x)` from the ODE `(1 - x^2) U'' - 3x U' + n(n+2) U = 0`, valid
/// away from `x = ±1` (all brackets lie strictly inside).
fn u_second_derivative(n: usize, x: f64) -> f64 {
    let (u, d) = u_and_derivative(n, x);
    let nf = n as f64;
    (3.0 * x * d - nf * (nf + 2.0) * u) / (1.0 - x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// U'_k from neighbouring U values, an independent route to the derivative.
    fn u_prime_closed_form(k: usize, x: f64) -> f64 {
        ((k as f64 + 2.0) * cheb_u(k - 1, x) - k as f64 * cheb_u(k + 1, x)) / (2.0 * (1.0 - x * x))
    }

    fn central_difference(n: usize, x: f64) -> f64 {
        let h = 1e-5;
        (cheb_u(n, x + h) - cheb_u(n, x - h)) / (2.0 * h)
    }

    #[test]
    fn u_examples() {
        assert_eq!(cheb_u(0, 0.37), 1.0);
        assert!(cheb_u(2, 0.5).abs() < 1e-15);
        assert_eq!(cheb_u(3, 1.0), 4.0);
    }

    #[test]
    fn u_matches_sine_ratio() {
        for n in 0..30 {
            for &t in &[0.1, 0.7, 1.3, 2.9] {
                let expected = ((n as f64 + 1.0) * t).sin() / t.sin();
                assert_relative_eq!(cheb_u(n, t.cos()), expected, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn u_prime_examples() {
        // oracle: finite differences of cheb_u
        assert_relative_eq!(central_difference(3, 0.0), -4.0, epsilon = 1e-8);
        assert_relative_eq!(central_difference(3, 1.0), 20.0, epsilon = 1e-7);
        assert_relative_eq!(central_difference(2, 0.25), 2.0, epsilon = 1e-8);

        assert_eq!(cheb_u_prime(3, 0.0), -4.0);
        assert_eq!(cheb_u_prime(3, 1.0), 20.0);
        assert_eq!(cheb_u_prime(2, 0.25), 2.0);
    }

    #[test]
    fn u_prime_endpoints_follow_limit_formula() {
        for n in 1..40usize {
            let limit = u_prime_scale(n);
            let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(cheb_u_prime(n, 1.0), limit);
            assert_eq!(cheb_u_prime(n, -1.0), sign * limit);
        }
    }

    #[test]
    fn u_prime_agrees_with_closed_form_inside_interval() {
        for k in 1..40usize {
            for i in 1..50 {
                let x = -0.98 + 1.96 * i as f64 / 50.0;
                assert_relative_eq!(
                    cheb_u_prime(k, x),
                    u_prime_closed_form(k, x),
                    epsilon = 1e-9 * u_prime_scale(k),
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn positive_roots_u_examples() {
        assert_eq!(positive_roots_u(2).values().len(), 1);
        assert_relative_eq!(positive_roots_u(2).values()[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(positive_roots_u(3).values()[0], 2f64.sqrt() / 2.0, epsilon = 1e-15);
        let nine = positive_roots_u(9);
        assert_eq!(nine.len(), 4);
        for (j, &v) in nine.values().iter().enumerate() {
            assert_relative_eq!(v, ((j + 1) as f64 * PI / 10.0).cos(), epsilon = 1e-15);
        }
        for n in 1..60 {
            assert_eq!(positive_roots_u(n).len(), n / 2);
        }
    }

    #[test]
    fn positive_roots_u_prime_examples() {
        let three = positive_roots_u_prime(3).unwrap();
        assert_eq!(three.len(), 1);
        assert_relative_eq!(three.values()[0], 1.0 / 6f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(three.mapped()[0], 2.0 / 3.0, epsilon = 1e-15);

        assert!(positive_roots_u_prime(2).unwrap().is_empty());

        // 2 arcsin(ν_j) = arccos(1 - 2ν_j^2); reversed to ascend
        let nine = positive_roots_u_prime(9).unwrap();
        let angles: Vec<f64> = nine.values().iter().rev().map(|v| 2.0 * v.asin()).collect();
        let table = [0.3173, 0.9527, 1.5911, 2.2398];
        for (a, t) in angles.iter().zip(table) {
            assert!((a - t) >= 0.0 && (a - t) < 1e-4, "{a} vs {t}");
        }
    }

    #[test]
    fn u_prime_zeros_are_accurate_and_ordered() {
        for n in 2..=120 {
            let list = positive_roots_u_prime(n).unwrap();
            assert_eq!(list.len(), (n - 1) / 2);
            let vals = list.values();
            assert!(vals.windows(2).all(|w| w[0] > w[1]));
            assert!(vals.iter().all(|&v| v > 0.0 && v < 1.0));
            for &v in vals {
                assert!(cheb_u_prime(n, v).abs() <= 1e-12 * u_prime_scale(n), "n={n} v={v}");
            }
        }
    }

    #[test]
    fn zeros_interlace() {
        for n in 2..=100 {
            let u = positive_roots_u(n);
            let d = positive_roots_u_prime(n).unwrap();
            let (u, d) = (u.values(), d.values());
            for w in u.windows(2) {
                let inside = d.iter().filter(|&&x| x < w[0] && x > w[1]).count();
                assert_eq!(inside, 1, "n={n}");
            }
        }
    }

    #[test]
    fn derivative_is_even_for_odd_big_n() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for big_n in (5..40).step_by(2) {
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-1.5..1.5);
                let a = cheb_u_prime(big_n - 2, x);
                let b = cheb_u_prime(big_n - 2, -x);
                assert_relative_eq!(a, b, epsilon = 1e-300, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn leading_behaviour() {
        let x = 1e3_f64;
        for n in 1..12usize {
            let lead_u = (2.0 * x).powi(n as i32);
            assert_relative_eq!(cheb_u(n, x) / lead_u, 1.0, epsilon = 1e-3);
            let lead_d = n as f64 * 2f64.powi(n as i32) * x.powi(n as i32 - 1);
            assert_relative_eq!(cheb_u_prime(n, x) / lead_d, 1.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn product_representation() {
        // U'_n(cos θ) = 2^n n Π (cos^2 θ - ν_j^2) for odd n
        for n in (3..40).step_by(2) {
            let nus = positive_roots_u_prime(n).unwrap();
            for i in 1..64 {
                let theta = PI * i as f64 / 64.0;
                let c2 = theta.cos().powi(2);
                let prod: f64 = nus.values().iter().map(|v| c2 - v * v).product();
                let rhs = 2f64.powi(n as i32) * n as f64 * prod;
                let lhs = cheb_u_prime(n, theta.cos());
                assert_relative_eq!(lhs, rhs, epsilon = 1e-8 * u_prime_scale(n), max_relative = 1e-8);
            }
        }
    }
}
