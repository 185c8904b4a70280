//! Single-point analysis report and its machine-readable renderings.
//!
//! Output formatting is byte-deterministic: floats go through [`fmt_f64`]
//! (shortest round-trip representation, truncated to 12 significant digits)
//! and JSON/CSV field order is fixed by hand, never by a map iteration.

use crate::discord::{geometric_discord_closed, geometric_discord_oracle};
use crate::family::{build_sigma, FamilyParams};
use crate::purify::{purify, verify_purification};
use crate::tangle::{tangle_report, TangleReport};
use crate::Result;

/// Shortest round-trip decimal representation, truncated to 12 significant
/// digits so golden files do not pick up platform-dependent tails.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let rounded = if sig_digits(&format!("{x}")) <= 12 {
        x
    } else {
        format!("{x:.11e}").parse().expect("formatted float parses")
    };
    // decimal notation buries tiny residuals under dozens of zeros
    if rounded != 0.0 && (rounded.abs() < 1e-4 || rounded.abs() >= 1e15) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn sig_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect::<String>()
        .trim_start_matches('0')
        .len()
}

/// Options for [`analyze_point`].
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    /// Also run the brute-force measurement sweep.
    pub oracle: bool,
    pub oracle_grid: usize,
    /// Classification tolerance.
    pub tol: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { oracle: false, oracle_grid: 128, tol: 1e-9 }
    }
}

/// Everything the pipeline produces for one parameter point.
#[derive(Clone, Debug)]
pub struct PointReport {
    pub params: FamilyParams,
    pub overlap: f64,
    pub discord: f64,
    pub discord_oracle: Option<f64>,
    pub tangle: TangleReport,
    pub purification_residual: f64,
}

/// Run the full pipeline: mixed state, discord (closed form, optionally the
/// brute-force sweep), purification, tangle and both classifications.
///
/// Requires unit Bloch vectors; mixed branches have no purification and the
/// error says so.
pub fn analyze_point(params: &FamilyParams, opts: &AnalyzeOptions) -> Result<PointReport> {
    let sigma = build_sigma(params)?;
    let discord = geometric_discord_closed(params)?.discord;
    let discord_oracle = if opts.oracle {
        Some(geometric_discord_oracle(&sigma, opts.oracle_grid)?)
    } else {
        None
    };
    let state = purify(params)?;
    let purification_residual = verify_purification(&state);
    let tangle = tangle_report(params, opts.tol)?;
    Ok(PointReport {
        params: *params,
        overlap: params.overlap(),
        discord,
        discord_oracle,
        tangle,
        purification_residual,
    })
}

fn json_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_f64(x),
        None => "null".to_string(),
    }
}

fn json_vec3(v: [f64; 3]) -> String {
    format!("[{}, {}, {}]", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]))
}

impl PointReport {
    /// Render as a JSON object with fixed key order.
    pub fn to_json(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!(
            "  \"params\": {{\"p\": {}, \"alpha\": {}, \"n\": {}, \"r\": {}, \"s\": {}}},\n",
            fmt_f64(p.p),
            fmt_f64(p.alpha),
            p.n,
            json_vec3(p.r),
            json_vec3(p.s)
        ));
        out.push_str(&format!("  \"overlap\": {},\n", fmt_f64(self.overlap)));
        out.push_str(&format!("  \"discord\": {},\n", fmt_f64(self.discord)));
        out.push_str(&format!("  \"discord_oracle\": {},\n", json_opt(self.discord_oracle)));
        out.push_str(&format!("  \"tau3_general\": {},\n", fmt_f64(self.tangle.tau3_general)));
        out.push_str(&format!("  \"tau3_closed\": {},\n", json_opt(self.tangle.tau3_closed)));
        out.push_str(&format!("  \"delta\": {},\n", json_opt(self.tangle.delta)));
        out.push_str(&format!("  \"paper_label\": \"{}\",\n", self.tangle.paper_label));
        out.push_str(&format!("  \"slocc_label\": \"{}\",\n", self.tangle.slocc_label));
        out.push_str(&format!(
            "  \"purification_residual\": {}\n",
            fmt_f64(self.purification_residual)
        ));
        out.push('}');
        out
    }

    /// Plain-text rendering for terminal use.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut lines = vec![
            format!(
                "params:                p={} alpha={} n={} r=({}, {}, {}) s=({}, {}, {})",
                fmt_f64(p.p),
                fmt_f64(p.alpha),
                p.n,
                fmt_f64(p.r[0]),
                fmt_f64(p.r[1]),
                fmt_f64(p.r[2]),
                fmt_f64(p.s[0]),
                fmt_f64(p.s[1]),
                fmt_f64(p.s[2])
            ),
            format!("overlap:               {}", fmt_f64(self.overlap)),
            format!("discord:               {}", fmt_f64(self.discord)),
        ];
        if let Some(o) = self.discord_oracle {
            lines.push(format!("discord (oracle):      {}", fmt_f64(o)));
        }
        lines.push(format!("tau3 (general):        {}", fmt_f64(self.tangle.tau3_general)));
        if let Some(t) = self.tangle.tau3_closed {
            lines.push(format!("tau3 (closed):         {}", fmt_f64(t)));
        }
        if let Some(d) = self.tangle.delta {
            lines.push(format!("delta:                 {}", fmt_f64(d)));
        }
        lines.push(format!("label:                 {}", self.tangle.paper_label));
        lines.push(format!("SLOCC class:           {}", self.tangle.slocc_label));
        lines.push(format!(
            "purification residual: {}",
            fmt_f64(self.purification_residual)
        ));
        lines.join("\n")
    }
}
