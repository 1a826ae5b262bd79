//! Suffridge-class machinery and the univalent polynomial families built
//! from the quadrinomial `1 + N/(N-2)(z + z^{N-1}) + z^N`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{positive_roots_u, positive_roots_u_prime};
use crate::error::{Error, Result};
use crate::poly::RealPoly;
use crate::quadrinomial::{FactoredForm, LinearFactor};
use crate::roots::{classify_roots, find_roots, RootSet, SolverOptions};

/// Zeros of a kernel polynomial must stay outside `|z| < 1 - MEMBERSHIP_TOL`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A polynomial `z + Σ_{j>=2} a_j z^j` of declared degree bound `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPoly {
    poly: RealPoly,
    n: usize,
}

impl NormalizedPoly {
    pub fn new(poly: RealPoly, n: usize) -> Result<Self> {
        if poly.coeff(0) != 0.0 || poly.coeff(1) != 1.0 {
            return Err(Error::InvalidArgument(
                "normalized polynomial needs a_0 = 0 and a_1 = 1".into(),
            ));
        }
        if poly.degree() > n {
            return Err(Error::InvalidArgument(format!(
                "degree {} exceeds declared bound {n}",
                poly.degree()
            )));
        }
        Ok(Self { poly, n })
    }

    /// Builds `z + Σ tail[i] z^{i+2}` with degree bound `n`.
    pub fn from_tail(tail: &[f64], n: usize) -> Result<Self> {
        let mut c = vec![0.0, 1.0];
        c.extend_from_slice(tail);
        Self::new(RealPoly::new(c), n)
    }

    pub fn poly(&self) -> &RealPoly {
        &self.poly
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }
}

/// `f*(z) = ((n+1)/n) f(z) - (1/n) z f'(z)`, computed coefficient-wise as
/// `a_j -> (1 - (j-1)/n) a_j`.
pub fn suffridge_transform(f: &NormalizedPoly, n: usize) -> Result<NormalizedPoly> {
    if n == 0 || f.poly.degree() > n {
        return Err(Error::InvalidArgument(format!(
            "transform order {n} must be positive and at least the degree {}",
            f.poly.degree()
        )));
    }
    let nf = n as f64;
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &a)| if j <= 1 { a } else { (1.0 - (j as f64 - 1.0) / nf) * a })
        .collect();
    NormalizedPoly::new(RealPoly::new(coeffs), n)
}

/// `1 + Σ_{j=2}^n a_j (sin jα / sin α) z^{j-1}` with `α = kπ/(n+1)`.
pub fn suffridge_kernel(f: &NormalizedPoly, n: usize, k: usize) -> RealPoly {
    let alpha = k as f64 * PI / (n as f64 + 1.0);
    let mut c = vec![1.0];
    for j in 2..=f.poly.degree() {
        // sin(jkπ/(n+1)) vanishes exactly when (n+1) divides jk
        let ratio = if (j * k).is_multiple_of(n + 1) {
            0.0
        } else {
            (j as f64 * alpha).sin() / alpha.sin()
        };
        c.push(f.poly.coeff(j) * ratio);
    }
    RealPoly::new(c)
}

/// Whether none of the kernels `k = 1..=n` has a zero in the open disk.
pub fn suffridge_membership(f: &NormalizedPoly, n: usize) -> Result<bool> {
    if f.poly.degree() > n {
        return Err(Error::InvalidArgument(format!(
            "degree {} exceeds n = {n}",
            f.poly.degree()
        )));
    }
    for k in 1..=n {
        let kernel = suffridge_kernel(f, n, k);
        if kernel.degree() == 0 {
            continue;
        }
        let rs = find_roots(&kernel, &SolverOptions::default())?;
        if rs.roots.iter().any(|r| r.value.norm() < 1.0 - MEMBERSHIP_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_{j=1}^n z^j`.
pub fn geometric(n: usize) -> Result<NormalizedPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("geometric polynomial needs n >= 1".into()));
    }
    NormalizedPoly::new(RealPoly::new((0..=n).map(|j| if j == 0 { 0.0 } else { 1.0 }).collect()), n)
}

/// Fejér polynomial `σ_n(z) = Σ_{j=1}^n (1 - (j-1)/n) z^j`.
pub fn fejer(n: usize) -> Result<NormalizedPoly> {
    suffridge_transform(&geometric(n)?, n)
}

/// `σ'_N` as `Π[1 + z² + 2γ̃_j z]` (N odd) or `(1+z) Π[1 + z² + 2γ̃_j z]`
/// (N even), with `γ̃_j = 1 - 2ν̃_j²` over positive zeros of `U'_N`.
pub fn fejer_derivative_factored(n: usize) -> Result<FactoredForm> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Fejér factorization needs N >= 2, got {n}")));
    }
    let gammas = positive_roots_u_prime(n)?.mapped();
    Ok(plus_quadratics(n, gammas))
}

/// `(1 - z)^3 σ'_N(z) = 1 - ((N+2)/N) z + ((N+2)/N) z^{N+1} - z^{N+2}`.
pub fn fejer_closed_form_numerator(n: usize) -> RealPoly {
    let r = (n as f64 + 2.0) / n as f64;
    let mut c = vec![0.0; n + 3];
    c[0] = 1.0;
    c[1] = -r;
    c[n + 1] = r;
    c[n + 2] = -1.0;
    RealPoly::new(c)
}

/// Alexander's polynomial `w_N(z) = Σ_{j=1}^N z^j / j`.
pub fn alexander(n: usize) -> Result<NormalizedPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("Alexander polynomial needs N >= 1".into()));
    }
    let c = (0..=n).map(|j| if j == 0 { 0.0 } else { 1.0 / j as f64 }).collect();
    NormalizedPoly::new(RealPoly::new(c), n)
}

/// `w'_N` with `β̃_j = 1 - 2μ̃_j²` over positive zeros of `U_{N-1}`; the
/// parity split matches [`fejer_derivative_factored`].
pub fn alexander_derivative_factored(n: usize) -> Result<FactoredForm> {
    if n == 0 {
        return Err(Error::InvalidArgument("Alexander polynomial needs N >= 1".into()));
    }
    let betas = positive_roots_u(n - 1).mapped();
    Ok(plus_quadratics(n, betas))
}

/// `(1+z)^{[N even]} Π [1 + z² + 2 c_j z]`.
fn plus_quadratics(n: usize, cosines: Vec<f64>) -> FactoredForm {
    let linear = if n.is_multiple_of(2) {
        vec![LinearFactor {
            root: -1.0,
            multiplicity: 1,
        }]
    } else {
        Vec::new()
    };
    FactoredForm {
        linear,
        quadratics: cosines.into_iter().map(|c| -c).collect(),
        scale: 1.0,
    }
}

fn require_odd(what: &'static str, n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::ParityMismatch {
            what,
            expected: "odd",
            n: n as u32,
        });
    }
    if n < 5 {
        return Err(Error::InvalidArgument(format!("{what} needs N >= 5, got {n}")));
    }
    Ok(())
}

fn require_even(what: &'static str, n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::ParityMismatch {
            what,
            expected: "even",
            n: n as u32,
        });
    }
    if n < 6 {
        return Err(Error::InvalidArgument(format!("{what} needs N >= 6, got {n}")));
    }
    Ok(())
}

/// Weight `1 - 2(j-1)/(N-2)` shared by every sum below.
fn weight(n: usize, j: usize) -> f64 {
    1.0 - 2.0 * (j as f64 - 1.0) / (n as f64 - 2.0)
}

fn alternating(j: usize) -> f64 {
    if j % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `z p(z) / (1+z)^2` for `p = 1 + N/(N-2)(z + z^{N-1}) + z^N`, N odd,
/// in coefficient form `Σ_{j=1}^{(N-1)/2} (-1)^{j-1} w_j (z^j + z^{N-j})`.
pub fn tilde_p(n: usize) -> Result<NormalizedPoly> {
    require_odd("tilde_p", n)?;
    let mut c = vec![0.0; n];
    for j in 1..=(n - 1) / 2 {
        let v = alternating(j) * weight(n, j);
        c[j] += v;
        c[n - j] += v;
    }
    NormalizedPoly::new(RealPoly::new(c), n - 1)
}

/// The univalent family: `s = 0` is `F`, the Suffridge transform of
/// [`tilde_p`]; `s = 1..=4` are `F_N^{(s)}` as displayed sums. `s <= 2`
/// takes odd N, `s >= 3` even N.
pub fn f_family(s: u8, n: usize) -> Result<NormalizedPoly> {
    let (upper, sign_far, alternate) = match s {
        0 => {
            require_odd("F", n)?;
            ((n - 1) / 2, 1.0, true)
        }
        1 | 2 => {
            require_odd("F_N^(1), F_N^(2)", n)?;
            ((n - 1) / 2, if s == 1 { -1.0 } else { 1.0 }, false)
        }
        3 | 4 => {
            require_even("F_N^(3), F_N^(4)", n)?;
            ((n - 2) / 2, if s == 3 { -1.0 } else { 1.0 }, false)
        }
        _ => return Err(Error::InvalidArgument(format!("family index s must be 0..=4, got {s}"))),
    };
    let nf = n as f64;
    let mut c = vec![0.0; n];
    for j in 1..=upper {
        let jf = j as f64;
        let v = weight(n, j) * if alternate { alternating(j) } else { 1.0 };
        c[j] += v * (nf - jf) / (nf - 1.0);
        c[n - j] += sign_far * v * jf / (nf - 1.0);
    }
    NormalizedPoly::new(RealPoly::new(c), n - 1)
}

/// `φ_k(z) = (1 - (-1)^k z^{N+2}) + (2N/(N-2)) cos α_k (z - (-1)^k z^{N+1})
/// + ((N+2)/(N-2)) (z² - (-1)^k z^N)` with `α_k = kπ/N`.
pub fn phi_k(n: usize, k: usize) -> Result<RealPoly> {
    require_odd("phi_k", n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k must be in 1..={n}, got {k}")));
    }
    let nf = n as f64;
    let alpha = k as f64 * PI / nf;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lin = 2.0 * nf / (nf - 2.0) * alpha.cos();
    let quad = (nf + 2.0) / (nf - 2.0);
    let mut c = vec![0.0; n + 3];
    c[0] = 1.0;
    c[n + 2] = -sign;
    c[1] = lin;
    c[n + 1] = -sign * lin;
    c[2] = quad;
    c[n] = -sign * quad;
    Ok(RealPoly::new(c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiVerdict {
    pub k: usize,
    pub worst_deviation: f64,
    pub on_circle: bool,
}

/// Root check of every `φ_k`, `k = 1..=N`.
pub fn phi_verdicts(n: usize, circle_tol: f64) -> Result<Vec<PhiVerdict>> {
    (1..=n)
        .map(|k| {
            let rs = find_roots(&phi_k(n, k)?, &SolverOptions::default())?;
            let counts = classify_roots(&rs, circle_tol);
            Ok(PhiVerdict {
                k,
                worst_deviation: rs.worst_circle_deviation(),
                on_circle: counts.on_circle == rs.total,
            })
        })
        .collect()
}

/// `W(z) = (N-1)(N-2)(1 + z^{N+2}) + 2(N-2)(N+2)(z + z^{N+1})
/// + (N+1)(N+2)(z² + z^N)`, satisfying `F' (N-1)(N-2)(1+z)^4 = W`.
pub fn quasi_extremal_w(n: usize) -> Result<RealPoly> {
    require_odd("W", n)?;
    let nf = n as f64;
    let mut c = vec![0.0; n + 3];
    let (e, l, q) = (
        (nf - 1.0) * (nf - 2.0),
        2.0 * (nf - 2.0) * (nf + 2.0),
        (nf + 1.0) * (nf + 2.0),
    );
    c[0] = e;
    c[n + 2] = e;
    c[1] = l;
    c[n + 1] = l;
    c[2] = q;
    c[n] = q;
    Ok(RealPoly::new(c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WChecks {
    #[serde(rename = "N")]
    pub n: usize,
    /// `|W^{(k)}(-1)| / |W|_∞` for `k = 0..=5`.
    pub derivatives_at_minus_one: Vec<f64>,
    /// The first five entries are `<= 1e-8` and the sixth `> 1e-3`.
    pub order_five_zero: bool,
    /// Roots of `W / (1+z)^5`.
    pub deflated_roots: RootSet,
    pub deflated_on_circle: bool,
    /// `|F' (N-1)(N-2)(1+z)^4 - W|_∞`.
    pub derivative_identity_deviation: f64,
}

pub fn w_checks(n: usize, circle_tol: f64) -> Result<WChecks> {
    let w = quasi_extremal_w(n)?;
    let scale = w.norm_inf();
    let derivatives_at_minus_one: Vec<f64> = (0..=5)
        .map(|k| w.nth_derivative(k).eval_real(-1.0).abs() / scale)
        .collect();
    let order_five_zero =
        derivatives_at_minus_one[..5].iter().all(|&d| d <= 1e-8) && derivatives_at_minus_one[5] > 1e-3;

    let deflated = w.deflate(-1.0, 5)?;
    let deflated_roots = find_roots(&deflated, &SolverOptions::default())?;
    let deflated_on_circle = classify_roots(&deflated_roots, circle_tol).on_circle == deflated_roots.total;

    let nf = n as f64;
    let f_prime = f_family(0, n)?.poly().derivative();
    let lhs = &f_prime.scale((nf - 1.0) * (nf - 2.0)) * &RealPoly::linear_power(-1.0, 4);
    Ok(WChecks {
        n,
        derivatives_at_minus_one,
        order_five_zero,
        deflated_roots,
        deflated_on_circle,
        derivative_identity_deviation: lhs.max_abs_diff(&w),
    })
}
