//! The quadrinomials `p(z) = 1 + κ(z + z^{N-1}) + z^N` and
//! `q(z) = 1 + κ(z - z^{N-1}) - z^N`: unit-circle criteria, limit-case
//! factorizations through Chebyshev zeros, and cusp angles.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{positive_roots_u, positive_roots_u_prime};
use crate::error::{Error, Result};
use crate::kappa::Kappa;
use crate::poly::RealPoly;
use crate::roots::{classify_roots, find_roots, Root, RootSet, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "p")]
    P,
    #[serde(rename = "q")]
    Q,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "p",
            Family::Q => "q",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "P" => Ok(Family::P),
            "q" | "Q" => Ok(Family::Q),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub family: Family,
    pub kappa: Kappa,
    #[serde(rename = "N")]
    pub n: u32,
}

impl QuadSpec {
    pub fn new(family: Family, kappa: impl Into<Kappa>, n: u32) -> Result<Self> {
        let kappa = kappa.into();
        if n < 3 {
            return Err(Error::InvalidArgument(format!("N must be at least 3, got {n}")));
        }
        if !kappa.is_finite() {
            return Err(Error::InvalidArgument("kappa must be finite".into()));
        }
        Ok(Self { family, kappa, n })
    }

    pub fn p(kappa: impl Into<Kappa>, n: u32) -> Result<Self> {
        Self::new(Family::P, kappa, n)
    }

    pub fn q(kappa: impl Into<Kappa>, n: u32) -> Result<Self> {
        Self::new(Family::Q, kappa, n)
    }
}

/// `(1 - root z)^multiplicity` with `root = ±1`, i.e. `(1 ∓ z)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFactor {
    pub root: f64,
    pub multiplicity: u32,
}

/// `scale · Π (1 - root z)^m · Π (1 + z^2 - 2 c z)`.
///
/// A factor `1 + z^2 + 2cz` is stored as `-c`. Every `|c| <= 1`, so the
/// quadratic factors have their zeros `c ± i sqrt(1 - c^2)` on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoredForm {
    pub linear: Vec<LinearFactor>,
    pub quadratics: Vec<f64>,
    pub scale: f64,
}

impl FactoredForm {
    pub fn degree(&self) -> usize {
        self.linear.iter().map(|l| l.multiplicity as usize).sum::<usize>() + 2 * self.quadratics.len()
    }

    /// Multiplies the factors out in Leja order of their zeros, which keeps
    /// intermediate coefficients small when many zeros crowd together.
    pub fn expand(&self) -> RealPoly {
        let mut factors: Vec<(RealPoly, Vec<Complex64>)> = Vec::with_capacity(self.degree());
        for l in &self.linear {
            for _ in 0..l.multiplicity {
                factors.push((RealPoly::linear_power(l.root, 1), vec![Complex64::new(1.0 / l.root, 0.0)]));
            }
        }
        for &c in &self.quadratics {
            let z = Complex64::new(c, (1.0 - c * c).max(0.0).sqrt());
            factors.push((RealPoly::circle_quadratic(c), vec![z, z.conj()]));
        }

        let mut acc = RealPoly::one().scale(self.scale);
        let mut chosen: Vec<Complex64> = Vec::new();
        while !factors.is_empty() {
            let score = |zs: &[Complex64]| -> f64 {
                zs.iter()
                    .map(|z| chosen.iter().map(|w| (z - w).norm().ln()).sum::<f64>())
                    .sum()
            };
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for (i, (_, zs)) in factors.iter().enumerate() {
                let s = score(zs);
                if s > best_score {
                    best = i;
                    best_score = s;
                }
            }
            let (poly, zs) = factors.swap_remove(best);
            acc = &acc * &poly;
            chosen.extend(zs);
        }
        acc
    }

    /// Zeros of the factored form with multiplicity, read off the factors.
    pub fn roots(&self) -> RootSet {
        let mut roots: Vec<Root> = self
            .linear
            .iter()
            .map(|l| Root {
                value: Complex64::new(1.0 / l.root, 0.0),
                multiplicity: l.multiplicity,
                residual: 0.0,
            })
            .collect();
        for &c in &self.quadratics {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for im in [s, -s] {
                roots.push(Root {
                    value: Complex64::new(c, im),
                    multiplicity: 1,
                    residual: 0.0,
                });
            }
        }
        RootSet {
            roots,
            total: self.degree(),
        }
    }
}

pub fn build_quadrinomial(spec: &QuadSpec) -> RealPoly {
    let n = spec.n as usize;
    let k = spec.kappa.value();
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    c[1] += k;
    match spec.family {
        Family::P => {
            c[n - 1] += k;
            c[n] = 1.0;
        }
        Family::Q => {
            c[n - 1] -= k;
            c[n] = -1.0;
        }
    }
    RealPoly::new(c)
}

/// Exact closed interval of κ for which all zeros lie on the unit circle.
pub fn kappa_limits_exact(family: Family, n: u32) -> (Rational64, Rational64) {
    let one = Rational64::from_integer(1);
    let ratio = Rational64::new(n as i64, n as i64 - 2);
    let odd = n % 2 == 1;
    match family {
        Family::P => (-one, if odd { ratio } else { one }),
        Family::Q => (-ratio, if odd { one } else { ratio }),
    }
}

pub fn kappa_limits(family: Family, n: u32) -> (f64, f64) {
    let (lo, hi) = kappa_limits_exact(family, n);
    let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    (f(lo), f(hi))
}

/// Whether every zero of the quadrinomial lies on the unit circle, decided
/// by the closed κ interval.
pub fn circle_criterion(spec: &QuadSpec) -> bool {
    match spec.kappa {
        Kappa::Exact(k) => {
            let (lo, hi) = kappa_limits_exact(spec.family, spec.n);
            lo <= k && k <= hi
        }
        Kappa::Float(k) => {
            let (lo, hi) = kappa_limits(spec.family, spec.n);
            lo <= k && k <= hi
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub predicted: bool,
    pub observed: bool,
    pub worst_deviation: f64,
}

/// Roots of the quadrinomial. Exact limit cases first divide out the
/// `(1 ± z)^m` factors their factorization predicts.
pub fn quadrinomial_roots(spec: &QuadSpec, opts: &SolverOptions) -> Result<RootSet> {
    let p = build_quadrinomial(spec);
    let Ok(form) = factorize_limit_case(spec) else {
        return find_roots(&p, opts);
    };
    let mut reduced = p.clone();
    let mut known = Vec::new();
    for l in &form.linear {
        reduced = reduced.deflate(1.0 / l.root, l.multiplicity)?;
        known.push(Root {
            value: Complex64::new(1.0 / l.root, 0.0),
            multiplicity: l.multiplicity,
            residual: 0.0,
        });
    }
    let mut roots = if reduced.degree() >= 1 {
        find_roots(&reduced, opts)?.roots
    } else {
        Vec::new()
    };
    roots.extend(known);
    Ok(RootSet {
        roots,
        total: p.degree(),
    })
}

/// Brute-force cross-check of [`circle_criterion`] against computed roots.
pub fn verify_criterion(spec: &QuadSpec, circle_tol: f64) -> Result<CriterionCheck> {
    let rs = quadrinomial_roots(spec, &SolverOptions::default())?;
    let counts = classify_roots(&rs, circle_tol);
    Ok(CriterionCheck {
        predicted: circle_criterion(spec),
        observed: counts.on_circle == rs.total,
        worst_deviation: rs.worst_circle_deviation(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: Family,
    #[serde(rename = "N")]
    pub n: u32,
    pub kappa: f64,
    pub check: CriterionCheck,
}

/// Runs [`verify_criterion`] over `grid` evenly spaced κ values spanning
/// `[lo - 0.5, hi + 0.5]` for each `N`, skipping κ within `exclusion` of
/// an interval endpoint.
pub fn criterion_sweep(
    family: Family,
    ns: impl IntoIterator<Item = u32>,
    grid: usize,
    circle_tol: f64,
    exclusion: f64,
) -> Result<Vec<SweepRecord>> {
    let mut jobs = Vec::new();
    for n in ns {
        let (lo, hi) = kappa_limits(family, n);
        let (start, end) = (lo - 0.5, hi + 0.5);
        for i in 0..grid {
            let kappa = start + (end - start) * i as f64 / (grid - 1) as f64;
            if (kappa - lo).abs() <= exclusion || (kappa - hi).abs() <= exclusion {
                continue;
            }
            jobs.push((n, kappa));
        }
    }
    jobs.into_par_iter()
        .map(|(n, kappa)| {
            let spec = QuadSpec::new(family, kappa, n)?;
            Ok(SweepRecord {
                family,
                n,
                kappa,
                check: verify_criterion(&spec, circle_tol)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cosines {
    /// `1 - 2μ^2` over positive zeros of `U_{N-2}`.
    Beta,
    /// `1 - 2ν^2` over positive zeros of `U'_{N-2}`.
    Gamma,
}

/// The closed-form factorization at a limit value of κ.
///
/// Tabulated cases (family, κ, parity of N):
///
/// | family | κ         | N    | form                                  |
/// |--------|-----------|------|---------------------------------------|
/// | p      | -1        | odd  | (1+z)(1-z)^2 Π[1+z²+2βz]              |
/// | p      | -1        | even | (1-z)^2 Π[1+z²+2βz]                   |
/// | p      | 1         | even | (1+z)^2 Π[1+z²-2βz]                   |
/// | p      | N/(N-2)   | odd  | (1+z)^3 Π[1+z²-2γz]                   |
/// | q      | -N/(N-2)  | odd  | (1-z)^3 Π[1+z²+2γz]                   |
/// | q      | -N/(N-2)  | even | (1+z)(1-z)^3 Π[1+z²+2γz]              |
/// | q      | N/(N-2)   | even | (1-z)(1+z)^3 Π[1+z²-2γz]              |
/// | q      | 1         | odd  | (1-z)(1+z)^2 Π[1+z²+2βz]              |
///
/// κ must be exact; float κ never matches.
pub fn factorize_limit_case(spec: &QuadSpec) -> Result<FactoredForm> {
    let not_limit = || Error::NotALimitCase {
        family: spec.family,
        kappa: spec.kappa,
        n: spec.n,
    };
    let k = spec.kappa.as_exact().ok_or_else(not_limit)?;
    let n = spec.n;
    let odd = n % 2 == 1;
    let one = Rational64::from_integer(1);
    let ratio = Rational64::new(n as i64, n as i64 - 2);

    // (linear factors as (root, multiplicity), which cosines, sign applied to them)
    let (linear, cosines, sign): (&[(f64, u32)], Cosines, f64) = match spec.family {
        Family::P if k == -one && odd => (&[(-1.0, 1), (1.0, 2)], Cosines::Beta, -1.0),
        Family::P if k == -one => (&[(1.0, 2)], Cosines::Beta, -1.0),
        Family::P if k == one && !odd => (&[(-1.0, 2)], Cosines::Beta, 1.0),
        Family::P if k == ratio && odd => (&[(-1.0, 3)], Cosines::Gamma, 1.0),
        Family::Q if k == -ratio && odd => (&[(1.0, 3)], Cosines::Gamma, -1.0),
        Family::Q if k == -ratio => (&[(-1.0, 1), (1.0, 3)], Cosines::Gamma, -1.0),
        Family::Q if k == ratio && !odd => (&[(1.0, 1), (-1.0, 3)], Cosines::Gamma, 1.0),
        Family::Q if k == one && odd => (&[(1.0, 1), (-1.0, 2)], Cosines::Beta, -1.0),
        _ => return Err(not_limit()),
    };

    let cheb_degree = n as usize - 2;
    let values = match cosines {
        Cosines::Beta => positive_roots_u(cheb_degree).mapped(),
        Cosines::Gamma => positive_roots_u_prime(cheb_degree)?.mapped(),
    };
    Ok(FactoredForm {
        linear: linear
            .iter()
            .map(|&(root, multiplicity)| LinearFactor { root, multiplicity })
            .collect(),
        quadratics: values.into_iter().map(|c| sign * c).collect(),
        scale: 1.0,
    })
}

/// Largest coefficient deviation between the expanded factorization and the
/// quadrinomial itself.
pub fn verify_factorization(spec: &QuadSpec) -> Result<f64> {
    let form = factorize_limit_case(spec)?;
    Ok(form.expand().max_abs_diff(&build_quadrinomial(spec)))
}

/// `arccos γ_j` for the factorization at `κ = N/(N-2)`, ascending.
///
/// These are the arguments of the zeros `γ_j ± i sqrt(1 - γ_j^2)` of `p`
/// in the upper half plane.
pub fn cusp_angles(n: u32) -> Result<Vec<f64>> {
    if n.is_multiple_of(2) {
        return Err(Error::ParityMismatch {
            what: "cusp_angles",
            expected: "odd",
            n,
        });
    }
    if n < 5 {
        return Err(Error::InvalidArgument(format!("cusp_angles needs N >= 5, got {n}")));
    }
    let gammas = positive_roots_u_prime(n as usize - 2)?.mapped();
    let mut angles: Vec<f64> = gammas.into_iter().map(f64::acos).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(angles)
}
