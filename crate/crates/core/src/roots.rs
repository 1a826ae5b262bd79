//! Simultaneous root finding (Aberth–Ehrlich) with Newton polishing and
//! merging of numerically multiple roots.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RealPoly;

pub type ComplexValue = Complex64;

/// Default `circle_tol` for [`classify_roots`].
pub const CIRCLE_TOL: f64 = 1e-8;
/// Floor applied to `circle_tol` for roots of multiplicity above one.
pub const MULTIPLE_ROOT_CIRCLE_TOL: f64 = 1e-5;

const POLISH_STEPS: usize = 8;
/// Slack factor on the conditioning radius of a numerical multiple root.
const CLUSTER_SLACK: f64 = 10.0;
/// Roots farther apart than this (relative to their modulus) are never
/// considered for merging.
const CLUSTER_SEARCH: f64 = 0.1;
/// Largest relative imaginary part a conjugate-free root may be snapped from.
const SNAP_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Bound on the recorded residual `|p(z)| / Σ|a_j||z|^j` of every root.
    pub residual_bound: f64,
    /// Roots closer than this (scaled by `max(1, |z|)`) are always merged.
    pub cluster_radius: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            residual_bound: 1e-12,
            cluster_radius: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    #[serde(with = "complex_fields")]
    pub value: ComplexValue,
    pub multiplicity: u32,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Degree of the source polynomial, i.e. the sum of multiplicities.
    pub total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircleCounts {
    pub on_circle: usize,
    pub inside: usize,
    pub outside: usize,
}

impl CircleCounts {
    pub fn total(&self) -> usize {
        self.on_circle + self.inside + self.outside
    }
}

impl RootSet {
    pub fn worst_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// Largest `| |z| - 1 |` over all roots.
    pub fn worst_circle_deviation(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| (r.value.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.value.norm()).fold(0.0, f64::max)
    }

    /// Multiplicity recorded for the root closest to `z` within `radius`.
    pub fn multiplicity_near(&self, z: ComplexValue, radius: f64) -> u32 {
        self.roots
            .iter()
            .filter(|r| (r.value - z).norm() <= radius)
            .map(|r| r.multiplicity)
            .sum()
    }

    /// Expands `Π (z - root)^m` and returns its real part.
    pub fn monic_polynomial(&self) -> RealPoly {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
                for (j, &c) in acc.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * r.value;
                }
                acc = next;
            }
        }
        RealPoly::new(acc.iter().map(|c| c.re).collect())
    }
}

/// All roots of `p` counted with multiplicity.
pub fn find_roots(p: &RealPoly, opts: &SolverOptions) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::DegreeTooLow { degree, min: 1 });
    }

    // Exact roots at the origin come from vanishing low-order coefficients.
    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let reduced = RealPoly::new(p.coeffs()[zeros..].to_vec());

    let mut roots = Vec::with_capacity(degree);
    if zeros > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zeros as u32,
            residual: 0.0,
        });
    }

    match reduced.degree() {
        0 => {}
        1 => {
            let c = reduced.coeffs();
            let z = Complex64::new(-c[0] / c[1], 0.0);
            roots.push(Root {
                value: z,
                multiplicity: 1,
                residual: residual(p, z),
            });
        }
        _ => {
            let (approx, iterations, converged) = aberth(&reduced, opts.max_iterations);
            let polished: Vec<Complex64> = approx.iter().map(|&z| polish(&reduced, z)).collect();
            if !converged {
                let worst = polished.iter().map(|&z| residual(p, z)).fold(0.0, f64::max);
                if worst > opts.residual_bound {
                    let best = RootSet {
                        roots: polished
                            .iter()
                            .map(|&z| Root {
                                value: z,
                                multiplicity: 1,
                                residual: residual(p, z),
                            })
                            .collect(),
                        total: reduced.degree(),
                    };
                    return Err(Error::NoConvergence {
                        iterations,
                        worst_residual: worst,
                        best: Box::new(best),
                    });
                }
            }
            let clusters = cluster(&reduced, &polished, opts);
            let clusters = snap_unpaired_to_real(clusters);
            roots.extend(clusters.into_iter().map(|(z, m)| Root {
                value: z,
                multiplicity: m,
                residual: residual(p, z),
            }));
        }
    }

    roots.sort_by(|a, b| {
        let key = |r: &Root| (r.value.arg(), r.value.norm());
        key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
    });

    let set = RootSet {
        roots,
        total: degree,
    };
    let worst = set.worst_residual();
    if worst > opts.residual_bound {
        return Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            worst_residual: worst,
            best: Box::new(set),
        });
    }
    Ok(set)
}

/// Counts roots (with multiplicity) on, inside and outside the unit circle.
///
/// Roots of multiplicity above one use `max(circle_tol, 1e-5)`, since their
/// attainable accuracy is limited.
pub fn classify_roots(rs: &RootSet, circle_tol: f64) -> CircleCounts {
    let mut counts = CircleCounts::default();
    for r in &rs.roots {
        let tol = if r.multiplicity > 1 {
            circle_tol.max(MULTIPLE_ROOT_CIRCLE_TOL)
        } else {
            circle_tol
        };
        let dev = r.value.norm() - 1.0;
        let m = r.multiplicity as usize;
        if dev.abs() <= tol {
            counts.on_circle += m;
        } else if dev < 0.0 {
            counts.inside += m;
        } else {
            counts.outside += m;
        }
    }
    counts
}

/// Backward-error style residual `|p(z)| / Σ|a_j||z|^j`.
fn residual(p: &RealPoly, z: Complex64) -> f64 {
    let scale = p.eval_scale(z);
    if scale == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / scale
    }
}

/// `p(z)` and `p'(z)` in one Horner pass.
fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// outside the unit disk to avoid overflow. `None` when `p'(z)` vanishes.
fn newton_ratio(coeffs: &[f64], reversed: &[f64], z: Complex64) -> Option<Complex64> {
    if z.norm() <= 1.0 {
        let (v, d) = eval_with_derivative(coeffs, z);
        if v == Complex64::new(0.0, 0.0) {
            return Some(v);
        }
        if d.norm() == 0.0 {
            return None;
        }
        Some(v / d)
    } else {
        // p(z) = z^n r(1/z)  =>  p/p' = z / (n - w r'(w)/r(w)),  w = 1/z
        let n = (coeffs.len() - 1) as f64;
        let w = z.inv();
        let (v, d) = eval_with_derivative(reversed, w);
        if v == Complex64::new(0.0, 0.0) {
            return Some(v);
        }
        let denom = n - w * d / v;
        if denom.norm() == 0.0 {
            return None;
        }
        Some(z / denom)
    }
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(j, log|a_j|)`.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| (j, c.abs().ln()))
        .collect();

    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let sigma = 0.7;
    let mut guesses = Vec::with_capacity(n);
    for (edge, pair) in hull.windows(2).enumerate() {
        let (k0, y0) = pair[0];
        let (k1, y1) = pair[1];
        let m = k1 - k0;
        let radius = ((y0 - y1) / m as f64).exp();
        for i in 0..m {
            let theta = 2.0 * PI * i as f64 / m as f64 + 2.0 * PI * edge as f64 / n as f64 + sigma;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

/// Returns the iterates, the iteration count, and whether every root met the
/// stopping rule.
fn aberth(p: &RealPoly, max_iterations: usize) -> (Vec<Complex64>, usize, bool) {
    let coeffs = p.coeffs();
    let reversed: Vec<f64> = coeffs.iter().rev().copied().collect();
    let n = coeffs.len() - 1;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for iter in 0..max_iterations {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let ratio = match newton_ratio(coeffs, &reversed, zi) {
                Some(r) => r,
                None => {
                    // stationary point: nudge off it
                    z[i] = zi + Complex64::from_polar(1e-8 * zi.norm().max(1.0), 1.0 + i as f64);
                    continue;
                }
            };
            if ratio == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let delta = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] = zi - delta;

            let val = p.eval(z[i]).norm();
            if delta.norm() <= 4.0 * eps * z[i].norm() || val <= 4.0 * n as f64 * eps * p.eval_scale(z[i]) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return (z, iter + 1, true);
        }
    }
    (z, max_iterations, false)
}

/// Newton steps that are kept only while they shrink `|p(z)|`.
fn polish(p: &RealPoly, z0: Complex64) -> Complex64 {
    let coeffs = p.coeffs();
    let reversed: Vec<f64> = coeffs.iter().rev().copied().collect();
    let mut z = z0;
    let mut val = p.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        if val == 0.0 {
            break;
        }
        let Some(ratio) = newton_ratio(coeffs, &reversed, z) else {
            break;
        };
        let next = z - ratio;
        let next_val = p.eval(next).norm();
        if next_val < val {
            z = next;
            val = next_val;
        } else {
            break;
        }
    }
    z
}

/// Taylor coefficients `p^{(k)}(c)/k!` for `k = 0..=order`.
fn taylor(coeffs: &[f64], c: Complex64, order: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // synthetic division by (z - c): remainder is the next Taylor coefficient
        let n = work.len() - 1;
        let mut carry = Complex64::new(0.0, 0.0);
        let mut quotient = vec![Complex64::new(0.0, 0.0); n];
        for k in (1..=n).rev() {
            carry = work[k] + c * carry;
            quotient[k - 1] = carry;
        }
        out.push(work[0] + c * carry);
        work = quotient;
    }
    out
}

struct Cluster {
    members: Vec<Complex64>,
}

impl Cluster {
    fn centroid(&self) -> Complex64 {
        self.members.iter().sum::<Complex64>() / self.members.len() as f64
    }

    fn spread(&self, c: Complex64) -> f64 {
        self.members.iter().map(|z| (z - c).norm()).fold(0.0, f64::max)
    }
}

/// Merges roots that are indistinguishable from one multiple root.
///
/// A candidate group of `m` roots with centroid `c` merges if its spread is
/// below the hard clustering radius, or below the conditioning radius
/// `(η Σ|a_j||c|^j / |p^{(m)}(c)/m!|)^{1/m}` of an `m`-fold root at `c`.
fn cluster(p: &RealPoly, roots: &[Complex64], opts: &SolverOptions) -> Vec<(Complex64, u32)> {
    let mut clusters: Vec<Cluster> = roots.iter().map(|&z| Cluster { members: vec![z] }).collect();

    loop {
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..clusters.len() {
            let ci = clusters[i].centroid();
            for j in (i + 1)..clusters.len() {
                let d = (ci - clusters[j].centroid()).norm();
                if d <= CLUSTER_SEARCH * ci.norm().max(1.0) {
                    candidates.push((d, i, j));
                }
            }
        }
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

        let merge = candidates.into_iter().find(|&(_, i, j)| {
            let mut members = clusters[i].members.clone();
            members.extend_from_slice(&clusters[j].members);
            let merged = Cluster { members };
            let c = merged.centroid();
            let spread = merged.spread(c);
            if spread <= opts.cluster_radius * c.norm().max(1.0) {
                return true;
            }
            let m = merged.members.len();
            let t = taylor(p.coeffs(), c, m);
            let lead = t[m].norm();
            if lead == 0.0 {
                return true;
            }
            let radius = (opts.residual_bound * p.eval_scale(c) / lead).powf(1.0 / m as f64);
            spread <= CLUSTER_SLACK * radius
        });

        match merge {
            Some((_, i, j)) => {
                let absorbed = clusters.swap_remove(j);
                clusters[i].members.extend(absorbed.members);
            }
            None => break,
        }
    }

    clusters
        .into_iter()
        .map(|cl| {
            let m = cl.members.len();
            let c = cl.centroid();
            let c = if m > 1 { polish_multiple(p, c, m) } else { c };
            (c, m as u32)
        })
        .collect()
}

/// An `m`-fold root is a simple root of `p^{(m-1)}`; refine the centroid by
/// Newton on that derivative, keeping steps that shrink `|p|`.
fn polish_multiple(p: &RealPoly, c0: Complex64, m: usize) -> Complex64 {
    let mut c = c0;
    let mut val = p.eval(c).norm();
    for _ in 0..POLISH_STEPS {
        let t = taylor(p.coeffs(), c, m);
        if t[m].norm() == 0.0 {
            break;
        }
        let next = c - t[m - 1] / (t[m] * m as f64);
        let next_val = p.eval(next).norm();
        if next_val < val {
            c = next;
            val = next_val;
        } else {
            break;
        }
    }
    c
}

/// Non-real roots of a real polynomial come in conjugate pairs; a root just
/// off the real axis with no conjugate partner is real.
fn snap_unpaired_to_real(mut roots: Vec<(Complex64, u32)>) -> Vec<(Complex64, u32)> {
    for i in 0..roots.len() {
        let (z, m) = roots[i];
        if z.im == 0.0 || z.im.abs() > SNAP_LIMIT * z.norm().max(1.0) {
            continue;
        }
        let partner = roots.iter().enumerate().any(|(j, &(w, mw))| {
            j != i && mw == m && (w - z.conj()).norm() <= 2.0 * z.im.abs() + f64::EPSILON
        });
        if !partner {
            roots[i].0 = Complex64::new(z.re, 0.0);
        }
    }
    roots
}

pub(crate) mod complex_fields {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(c: &[f64]) -> RealPoly {
        RealPoly::new(c.to_vec())
    }

    fn solve(c: &[f64]) -> RootSet {
        find_roots(&p(c), &SolverOptions::default()).unwrap()
    }

    fn has_root(rs: &RootSet, z: Complex64, m: u32) -> bool {
        rs.roots
            .iter()
            .any(|r| (r.value - z).norm() < 1e-6 && r.multiplicity == m)
    }

    #[test]
    fn quadratic_unit_roots() {
        let rs = solve(&[1.0, 0.0, 1.0]);
        assert_eq!(rs.total, 2);
        assert!(has_root(&rs, Complex64::i(), 1));
        assert!(has_root(&rs, -Complex64::i(), 1));
    }

    #[test]
    fn double_root_at_minus_one_is_merged() {
        // (1+z)(1+z^3) = (1+z)^2 (1 - z + z^2)
        let rs = solve(&[1.0, 1.0, 0.0, 1.0, 1.0]);
        assert!(has_root(&rs, Complex64::new(-1.0, 0.0), 2));
        let third = Complex64::from_polar(1.0, PI / 3.0);
        assert!(has_root(&rs, third, 1));
        assert!(has_root(&rs, third.conj(), 1));
        assert_eq!(rs.roots.len(), 3);
    }

    #[test]
    fn triple_root_of_the_n5_quadrinomial() {
        let k = 5.0 / 3.0;
        let rs = solve(&[1.0, k, 0.0, 0.0, k, 1.0]);
        assert!(has_root(&rs, Complex64::new(-1.0, 0.0), 3));
        let q = Complex64::new(2.0 / 3.0, 5f64.sqrt() / 3.0);
        assert!(has_root(&rs, q, 1));
        assert!(has_root(&rs, q.conj(), 1));
        let minus_one = rs.roots.iter().find(|r| r.multiplicity == 3).unwrap();
        assert_eq!(minus_one.value.im, 0.0);
    }

    #[test]
    fn zero_roots_are_extracted_exactly() {
        // z^3 - z^2 = z^2 (z - 1)
        let rs = solve(&[0.0, 0.0, -1.0, 1.0]);
        assert!(has_root(&rs, Complex64::new(0.0, 0.0), 2));
        assert!(has_root(&rs, Complex64::new(1.0, 0.0), 1));
    }

    #[test]
    fn rejects_constants_and_zero() {
        assert!(matches!(find_roots(&RealPoly::zero(), &SolverOptions::default()), Err(Error::ZeroPolynomial)));
        assert!(matches!(
            find_roots(&p(&[3.0]), &SolverOptions::default()),
            Err(Error::DegreeTooLow { degree: 0, min: 1 })
        ));
    }

    #[test]
    fn unreachable_bound_reports_best_iterate() {
        let opts = SolverOptions {
            max_iterations: 1,
            residual_bound: 1e-30,
            ..SolverOptions::default()
        };
        let mut c = vec![0.0; 31];
        c[0] = -1.0;
        c[7] = 3.5;
        c[30] = 1.0;
        match find_roots(&p(&c), &opts) {
            Err(Error::NoConvergence { best, worst_residual, .. }) => {
                assert_eq!(best.roots.len(), 30);
                assert!(worst_residual > opts.residual_bound);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn classify_examples() {
        let rs = solve(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            classify_roots(&rs, CIRCLE_TOL),
            CircleCounts { on_circle: 4, inside: 0, outside: 0 }
        );
        let rs = solve(&[-4.0, 0.0, 1.0]);
        let counts = classify_roots(&rs, CIRCLE_TOL);
        assert_eq!(counts, CircleCounts { on_circle: 0, inside: 0, outside: 2 });
    }

    #[test]
    fn classify_buckets_by_modulus() {
        // (z - 1/2)(z - 2)(z^2 + 1)
        let base = &p(&[-0.5, 1.0]) * &p(&[-2.0, 1.0]);
        let rs = find_roots(&(&base * &p(&[1.0, 0.0, 1.0])), &SolverOptions::default()).unwrap();
        assert_eq!(
            classify_roots(&rs, CIRCLE_TOL),
            CircleCounts { on_circle: 2, inside: 1, outside: 1 }
        );
    }

    #[test]
    fn overlapping_scale_polynomial() {
        // roots spread over several orders of magnitude
        let mut acc = RealPoly::one();
        for r in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            acc = &acc * &p(&[-r, 1.0]);
        }
        let rs = find_roots(&acc, &SolverOptions::default()).unwrap();
        for r in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            assert!(rs.roots.iter().any(|x| ((x.value.re - r) / r).abs() < 1e-10));
        }
    }

    #[test]
    fn taylor_coefficients_match_derivatives() {
        let q = p(&[1.0, -2.0, 0.5, 3.0, 1.0]);
        let c = Complex64::new(0.3, -0.7);
        let t = taylor(q.coeffs(), c, 4);
        let mut fact = 1.0;
        for (k, tk) in t.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let d = q.nth_derivative(k).eval(c) / fact;
            assert_abs_diff_eq!(tk.re, d.re, epsilon = 1e-12);
            assert_abs_diff_eq!(tk.im, d.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn reconstruction_from_roots() {
        let q = p(&[2.0, -1.0, 0.0, 3.0, 0.5, 1.0]);
        let rs = find_roots(&q, &SolverOptions::default()).unwrap();
        let rebuilt = rs.monic_polynomial();
        assert!(rebuilt.max_abs_diff(&q.scale(1.0 / q.leading())) < 1e-12);
    }

    #[test]
    fn root_serializes_with_named_parts() {
        let r = Root {
            value: Complex64::new(1.5, -2.0),
            multiplicity: 2,
            residual: 0.0,
        };
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"value\":{\"re\":1.5,\"im\":-2.0}"), "{json}");
        let back: Root = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
