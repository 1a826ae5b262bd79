//! Argument model, command execution and output rendering for `quadri`.
//!
//! Every command produces a [`Report`] whose payload is plain JSON. Text and
//! CSV output are rendered from that payload alone, so `--json` output always
//! carries everything the human-readable form shows.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use quadri_core::quadrinomial::{kappa_limits, quadrinomial_roots, verify_criterion, verify_factorization};
use quadri_core::roots::CIRCLE_TOL;
use quadri_core::stability::{cohn_verdict, stability_boundary};
use quadri_core::univalent::{
    alexander, alexander_derivative_factored, f_family, fejer, fejer_derivative_factored, phi_verdicts,
    w_checks,
};
use quadri_core::{
    boundary_image, classify_roots, cusp_angles, factorize_limit_case, simple_curve_scan, BoundaryImage,
    CurveSet, FactoredForm, Family, Kappa, QuadSpec, RealPoly, RootSet, SolverOptions,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] quadri_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot render payload: {0}")]
    Payload(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quadri", version, about = "Quadrinomials with zeros on the unit circle")]
pub struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub family: Family,
    /// INT, INT/INT (exact) or a decimal float.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Kappa,
    #[arg(long = "N")]
    pub n: u32,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadSpec, CliError> {
        Ok(QuadSpec::new(self.family, self.kappa, self.n)?)
    }

    fn params(&self) -> Params {
        params([
            ("family", self.family.to_string()),
            ("kappa", self.kappa.to_string()),
            ("N", self.n.to_string()),
        ])
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Zeros of the quadrinomial with circle classification.
    Roots(QuadArgs),
    /// Predicted versus observed "all zeros on the circle".
    Criterion {
        #[command(flatten)]
        quad: QuadArgs,
        /// Circle tolerance for the observed classification.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Chebyshev factorization of a limit case.
    Factor(QuadArgs),
    /// Angles of the cusps of the odd-N boundary curve.
    Cusps {
        #[arg(long = "N")]
        n: u32,
    },
    /// Stability domain boundary of z^n + a z^(n-1) + b, as CSV.
    Stability {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Cohn's test for all zeros on the unit circle.
    Cohn {
        /// Coefficients c0,c1,... in ascending order.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<f64>,
        #[arg(long, default_value_t = CIRCLE_TOL)]
        tol: f64,
    },
    /// Factored derivative of the Fejér polynomial.
    Fejer {
        #[arg(long = "N")]
        n: usize,
    },
    /// Factored derivative of Alexander's polynomial.
    Alexander {
        #[arg(long = "N")]
        n: usize,
    },
    /// Univalent family member with its supporting checks.
    Univalent {
        /// 0 for F, 1..=4 for the F_N^(s) variants.
        #[arg(long)]
        s: u8,
        #[arg(long = "N")]
        n: usize,
        /// Sample the boundary image at RES points and scan it.
        #[arg(long, value_name = "RES")]
        boundary: Option<usize>,
    },
}

pub type Params = BTreeMap<String, String>;

fn params<const K: usize>(pairs: [(&str, String); K]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Command result before formatting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Params,
    pub payload: Value,
}

/// The `--json` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: String,
    #[serde(flatten)]
    pub report: Report,
}

impl From<Report> for Envelope {
    fn from(report: Report) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION.to_string(),
            report,
        }
    }
}

fn report(command: &str, params: Params, payload: Value) -> Report {
    Report {
        command: command.to_string(),
        params,
        payload,
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Roots(q) => {
            let rs = quadrinomial_roots(&q.spec()?, &SolverOptions::default())?;
            let counts = classify_roots(&rs, CIRCLE_TOL);
            Ok(report("roots", q.params(), json!({ "roots": rs, "counts": counts })))
        }
        Command::Criterion { quad, tol } => {
            let spec = quad.spec()?;
            let check = verify_criterion(&spec, *tol)?;
            let (lo, hi) = kappa_limits(spec.family, spec.n);
            let mut p = quad.params();
            p.insert("tol".into(), tol.to_string());
            Ok(report(
                "criterion",
                p,
                json!({
                    "predicted": check.predicted,
                    "observed": check.observed,
                    "worst_deviation": check.worst_deviation,
                    "kappa_interval": [lo, hi],
                }),
            ))
        }
        Command::Factor(q) => {
            let spec = q.spec()?;
            let form = factorize_limit_case(&spec)?;
            let deviation = verify_factorization(&spec)?;
            Ok(report("factor", q.params(), json!({ "form": form, "deviation": deviation })))
        }
        Command::Cusps { n } => {
            let angles = cusp_angles(*n)?;
            let differences: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
            Ok(report(
                "cusps",
                params([("N", n.to_string())]),
                json!({ "angles": angles, "differences": differences }),
            ))
        }
        Command::Stability { n, samples } => {
            let set = stability_boundary(*n, *samples)?;
            Ok(report(
                "stability",
                params([("n", n.to_string()), ("samples", samples.to_string())]),
                serde_json::to_value(set)?,
            ))
        }
        Command::Cohn { coeffs, tol } => {
            let p = RealPoly::try_new(coeffs.clone())?;
            let verdict = cohn_verdict(&p, *tol)?;
            let joined = coeffs.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            Ok(report(
                "cohn",
                params([("coeffs", joined), ("tol", tol.to_string())]),
                serde_json::to_value(verdict)?,
            ))
        }
        Command::Fejer { n } => {
            let form = fejer_derivative_factored(*n)?;
            let deviation = form.expand().max_abs_diff(&fejer(*n)?.poly().derivative());
            Ok(report("fejer", params([("N", n.to_string())]), json!({ "form": form, "deviation": deviation })))
        }
        Command::Alexander { n } => {
            let form = alexander_derivative_factored(*n)?;
            let deviation = form.expand().max_abs_diff(&alexander(*n)?.poly().derivative());
            Ok(report(
                "alexander",
                params([("N", n.to_string())]),
                json!({ "form": form, "deviation": deviation }),
            ))
        }
        Command::Univalent { s, n, boundary } => {
            let f = f_family(*s, *n)?;
            let mut p = params([("s", s.to_string()), ("N", n.to_string())]);
            let mut payload = json!({ "coeffs": f.coeffs() });
            if *s == 0 {
                payload["phi"] = serde_json::to_value(phi_verdicts(*n, 1e-5)?)?;
                payload["w"] = serde_json::to_value(w_checks(*n, 1e-5)?)?;
            }
            if let Some(res) = boundary {
                p.insert("boundary".into(), res.to_string());
                let img = boundary_image(f.poly(), *res)?;
                payload["simple"] = json!(simple_curve_scan(&img));
                payload["boundary"] = serde_json::to_value(img)?;
            }
            Ok(report("univalent", p, payload))
        }
    }
}

/// Human-readable output, built from the payload only.
pub fn render_text(report: &Report) -> Result<String, CliError> {
    let p = &report.payload;
    let mut out = String::new();
    match report.command.as_str() {
        "roots" => {
            let rs: RootSet = serde_json::from_value(p["roots"].clone())?;
            let c = &p["counts"];
            writeln!(
                out,
                "degree {}: {} on circle, {} inside, {} outside",
                rs.total, c["on_circle"], c["inside"], c["outside"]
            )
            .unwrap();
            write_roots(&mut out, &rs);
        }
        "criterion" => {
            writeln!(out, "predicted {}", p["predicted"]).unwrap();
            writeln!(out, "observed {}", p["observed"]).unwrap();
            writeln!(out, "worst deviation {}", num(&p["worst_deviation"])).unwrap();
            let iv = &p["kappa_interval"];
            writeln!(out, "kappa interval [{}, {}]", num(&iv[0]), num(&iv[1])).unwrap();
        }
        "factor" | "fejer" | "alexander" => {
            let form: FactoredForm = serde_json::from_value(p["form"].clone())?;
            write_form(&mut out, &form);
            writeln!(out, "deviation {}", num(&p["deviation"])).unwrap();
        }
        "cusps" => {
            let angles = floats(&p["angles"]);
            let diffs = floats(&p["differences"]);
            writeln!(out, "j angle difference").unwrap();
            for (j, a) in angles.iter().enumerate() {
                match j.checked_sub(1).and_then(|i| diffs.get(i)) {
                    Some(d) => writeln!(out, "{} {a} {d}", j + 1).unwrap(),
                    None => writeln!(out, "{} {a}", j + 1).unwrap(),
                }
            }
        }
        "stability" => {
            let set: CurveSet = serde_json::from_value(p.clone())?;
            let mut buf = Vec::new();
            set.write_csv(&mut buf).map_err(|e| CliError::Csv(e.to_string()))?;
            out.push_str(&String::from_utf8_lossy(&buf));
        }
        "cohn" => {
            writeln!(out, "on circle {}", p["on_circle"]).unwrap();
            match p["reciprocity"].as_i64() {
                Some(r) => writeln!(out, "self-reciprocal with sign {r:+}").unwrap(),
                None => writeln!(out, "not self-reciprocal").unwrap(),
            }
            if !p["derivative_roots"].is_null() {
                let rs: RootSet = serde_json::from_value(p["derivative_roots"].clone())?;
                writeln!(out, "derivative zeros (max modulus {}):", fmt_f64(rs.max_modulus())).unwrap();
                write_roots(&mut out, &rs);
            }
        }
        "univalent" => {
            let coeffs = floats(&p["coeffs"]);
            let joined = coeffs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
            writeln!(out, "coefficients {joined}").unwrap();
            if let Some(phi) = p["phi"].as_array() {
                writeln!(out, "k phi_on_circle worst_deviation").unwrap();
                for v in phi {
                    writeln!(out, "{} {} {}", v["k"], v["on_circle"], num(&v["worst_deviation"])).unwrap();
                }
            }
            if p["w"].is_object() {
                let w = &p["w"];
                let derivs = floats(&w["derivatives_at_minus_one"]);
                let joined = derivs.iter().map(|&d| fmt_f64(d)).collect::<Vec<_>>().join(" ");
                writeln!(out, "W derivatives at -1 (relative) {joined}").unwrap();
                writeln!(out, "W zero of order five at -1 {}", w["order_five_zero"]).unwrap();
                writeln!(out, "W deflated zeros on circle {}", w["deflated_on_circle"]).unwrap();
                writeln!(out, "F' identity deviation {}", num(&w["derivative_identity_deviation"])).unwrap();
            }
            if p["boundary"].is_object() {
                let img: BoundaryImage = serde_json::from_value(p["boundary"].clone())?;
                writeln!(out, "boundary simple {}", p["simple"]).unwrap();
                let mut buf = Vec::new();
                img.write_csv(&mut buf).map_err(|e| CliError::Csv(e.to_string()))?;
                out.push_str(&String::from_utf8_lossy(&buf));
            }
        }
        other => writeln!(out, "{}", serde_json::to_string_pretty(&json!({ other: p }))?).unwrap(),
    }
    Ok(out)
}

pub fn render_json(report: &Report) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Envelope::from(report.clone()))?;
    s.push('\n');
    Ok(s)
}

/// Shortest round-trip form, in exponent notation for tiny or huge values.
fn fmt_f64(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn num(v: &Value) -> String {
    v.as_f64().map_or_else(|| v.to_string(), fmt_f64)
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_f64).collect())
        .unwrap_or_default()
}

fn write_roots(out: &mut String, rs: &RootSet) {
    writeln!(out, "re im multiplicity residual").unwrap();
    for r in &rs.roots {
        writeln!(
            out,
            "{} {} {} {}",
            fmt_f64(r.value.re),
            fmt_f64(r.value.im),
            r.multiplicity,
            fmt_f64(r.residual)
        )
        .unwrap();
    }
}

fn write_form(out: &mut String, form: &FactoredForm) {
    writeln!(out, "scale {}", form.scale).unwrap();
    for l in &form.linear {
        let sign = if l.root > 0.0 { "-" } else { "+" };
        writeln!(out, "linear (1 {sign} z)^{}", l.multiplicity).unwrap();
    }
    for c in &form.quadratics {
        writeln!(out, "quadratic 1 + z^2 - 2cz, c = {c}").unwrap();
    }
}
