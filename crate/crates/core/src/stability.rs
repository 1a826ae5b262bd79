//! Stability domain of the trinomial `z^n + a z^{n-1} + b` and Cohn's
//! unit-circle criterion.

use std::f64::consts::PI;
use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RealPoly;
use crate::quadrinomial::{Family, QuadSpec};
use crate::roots::{find_roots, RootSet, SolverOptions};

/// Roots must satisfy `|z| < 1 - STRICTNESS_TOL` to count as inside the
/// open disk.
pub const STRICTNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveLabel {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveLabel::I => "I",
            CurveLabel::II => "II",
            CurveLabel::III => "III",
            CurveLabel::IV => "IV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Curve parameter; absent for the straight segments I and II.
    pub t: Option<f64>,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: CurveLabel,
    pub points: Vec<CurvePoint>,
}

/// Sampled boundary of the stability domain for one trinomial degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub n: usize,
    pub curves: Vec<Curve>,
    /// Parameter range `[(n-1)π/n, π]` of curves III and IV; the right end
    /// is the analytic limit point.
    pub t_range: (f64, f64),
}

impl CurveSet {
    pub fn curve(&self, label: CurveLabel) -> &Curve {
        self.curves
            .iter()
            .find(|c| c.label == label)
            .expect("every CurveSet carries all four curves")
    }

    /// Writes `curve,t,a,b` rows; `t` is empty for curves I and II.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row {
            curve: String,
            t: Option<f64>,
            a: f64,
            b: f64,
        }
        let mut w = csv::Writer::from_writer(out);
        for c in &self.curves {
            for p in &c.points {
                w.serialize(Row {
                    curve: c.label.to_string(),
                    t: p.t,
                    a: p.a,
                    b: p.b,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `z^n + a z^{n-1} + b`.
pub fn trinomial(n: usize, a: f64, b: f64) -> RealPoly {
    let mut c = vec![0.0; n + 1];
    c[0] = b;
    c[n - 1] += a;
    c[n] = 1.0;
    RealPoly::new(c)
}

/// Whether all zeros of `z^n + a z^{n-1} + b` lie in the open unit disk.
pub fn trinomial_in_disk(n: usize, a: f64, b: f64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("trinomial degree must be at least 2, got {n}")));
    }
    let rs = find_roots(&trinomial(n, a, b), &SolverOptions::default())?;
    Ok(rs.max_modulus() < 1.0 - STRICTNESS_TOL)
}

fn sign_pow(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Point of curve III at parameter `t`.
pub fn curve_iii(n: usize, t: f64) -> (f64, f64) {
    let nf = n as f64;
    let d = ((nf - 1.0) * t).sin();
    (-(nf * t).sin() / d, t.sin() / d)
}

/// Point of curve IV at parameter `t`.
pub fn curve_iv(n: usize, t: f64) -> (f64, f64) {
    let nf = n as f64;
    let d = ((nf - 1.0) * t).sin();
    ((nf * t).sin() / d, sign_pow(n) * t.sin() / d)
}

/// The `t -> π` limits of curves III and IV:
/// `(n/(n-1), (-1)^n/(n-1))` and `(-n/(n-1), 1/(n-1))`.
pub fn corner_points(n: usize) -> ((f64, f64), (f64, f64)) {
    let nf = n as f64;
    let r = nf / (nf - 1.0);
    let inv = 1.0 / (nf - 1.0);
    ((r, sign_pow(n) * inv), (-r, inv))
}

/// Samples the four boundary curves.
///
/// I and II get `samples` evenly spaced points over their closed `a`
/// ranges. III and IV get `samples` points `t_k = t_0 + k(π - t_0)/samples`
/// with `t_0 = (n-1)π/n`, followed by the analytic limit point at `t = π`.
pub fn stability_boundary(n: usize, samples: usize) -> Result<CurveSet> {
    if n < 2 || samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "stability_boundary needs n >= 2 and samples >= 2, got n = {n}, samples = {samples}"
        )));
    }
    let nf = n as f64;
    let amax = nf / (nf - 1.0);
    let line = |label, lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| Curve {
        label,
        points: (0..samples)
            .map(|k| {
                let a = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
                CurvePoint { t: None, a, b: f(a) }
            })
            .collect(),
    };
    let curve_i = line(CurveLabel::I, -amax, 0.0, &|a| -a - 1.0);
    let curve_ii = line(CurveLabel::II, 0.0, amax, &|a| sign_pow(n) * (a - 1.0));

    let t0 = (nf - 1.0) * PI / nf;
    let (c3, c4) = corner_points(n);
    let param = |label, f: fn(usize, f64) -> (f64, f64), limit: (f64, f64)| {
        let mut points: Vec<CurvePoint> = (0..samples)
            .map(|k| {
                let t = t0 + (PI - t0) * k as f64 / samples as f64;
                let (a, b) = f(n, t);
                CurvePoint { t: Some(t), a, b }
            })
            .collect();
        points.push(CurvePoint {
            t: Some(PI),
            a: limit.0,
            b: limit.1,
        });
        Curve { label, points }
    };
    let curve_iii_pts = param(CurveLabel::III, curve_iii, c3);
    let curve_iv_pts = param(CurveLabel::IV, curve_iv, c4);

    Ok(CurveSet {
        n,
        curves: vec![curve_i, curve_ii, curve_iii_pts, curve_iv_pts],
        t_range: (t0, PI),
    })
}

/// Trinomial `(n, a, b)` with `p'(z)/N = z^n + a z^{n-1} + b` for family P
/// (`n = N - 1`, `a = κn/(n+1)`, `b = κ/(n+1)`), and the reflected line
/// `b = -a/n` for family Q.
pub fn quadrinomial_derivative_line(spec: &QuadSpec) -> (usize, f64, f64) {
    let n = spec.n as usize - 1;
    let nf = n as f64;
    let k = spec.kappa.value();
    let a = k * nf / (nf + 1.0);
    let b = k / (nf + 1.0);
    match spec.family {
        Family::P => (n, a, b),
        Family::Q => (n, a, -b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohnVerdict {
    pub on_circle: bool,
    /// `+1` or `-1` for self-reciprocal input, absent otherwise.
    pub reciprocity: Option<i8>,
    /// Zeros of `P'`; empty when `P` is not self-reciprocal or `P'` is constant.
    pub derivative_roots: Option<RootSet>,
}

/// Cohn's criterion: all zeros of `p` are on the unit circle iff `p` is
/// self-reciprocal and every zero of `p'` has `|z| <= 1 + tol`.
///
/// The reciprocity check uses the absolute tolerance `tol · (1 + |p|_∞)`.
pub fn cohn_on_circle(p: &RealPoly, tol: f64) -> Result<bool> {
    Ok(cohn_verdict(p, tol)?.on_circle)
}

pub fn cohn_verdict(p: &RealPoly, tol: f64) -> Result<CohnVerdict> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow { degree: p.degree(), min: 1 });
    }
    let Some(rec) = p.self_reciprocal_sign(tol * (1.0 + p.norm_inf())) else {
        return Ok(CohnVerdict {
            on_circle: false,
            reciprocity: None,
            derivative_roots: None,
        });
    };
    let d = p.derivative();
    if d.degree() == 0 {
        return Ok(CohnVerdict {
            on_circle: true,
            reciprocity: Some(rec.sign()),
            derivative_roots: None,
        });
    }
    let rs = find_roots(&d, &SolverOptions::default())?;
    Ok(CohnVerdict {
        on_circle: rs.max_modulus() <= 1.0 + tol,
        reciprocity: Some(rec.sign()),
        derivative_roots: Some(rs),
    })
}
