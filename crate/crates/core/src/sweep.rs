//! Parameter sweeps over `(p, α)` grids, rendered as deterministic CSV.
//!
//! Grid points are independent and get evaluated in parallel; rows are
//! buffered and emitted in row-major axis order regardless of completion
//! order, so identical inputs give byte-identical output.

use std::str::FromStr;

use rayon::prelude::*;

use crate::discord::geometric_discord_closed;
use crate::family::FamilyParams;
use crate::report::fmt_f64;
use crate::tangle::tangle_report;
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "p,alpha,n,rx,ry,rz,sx,sy,sz,overlap,discord,tau3,paper_label,slocc_label";

/// Which family parameter an axis varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    P,
    Alpha,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepAxis::P),
            "alpha" => Ok(SweepAxis::Alpha),
            other => Err(Error::InvalidSweep(format!(
                "unknown axis {other:?} (expected p or alpha)"
            ))),
        }
    }
}

/// One sweep axis: `name:min:max:steps`.
#[derive(Clone, Copy, Debug)]
pub struct AxisSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn value_at(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "steps = {} (need at least 2)",
                self.steps
            )));
        }
        if self.min >= self.max {
            return Err(Error::InvalidSweep(format!(
                "empty range [{}, {}]",
                self.min, self.max
            )));
        }
        if self.min < 0.0 || self.max > 1.0 {
            return Err(Error::InvalidSweep(format!(
                "range [{}, {}] leaves [0, 1]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidSweep(format!(
                "axis spec {s:?} is not name:min:max:steps"
            )));
        }
        let axis = parts[0].parse()?;
        let parse_f = |t: &str| -> Result<f64> {
            t.parse()
                .map_err(|_| Error::InvalidSweep(format!("bad number {t:?} in axis spec {s:?}")))
        };
        let steps = parts[3]
            .parse()
            .map_err(|_| Error::InvalidSweep(format!("bad step count {:?}", parts[3])))?;
        Ok(AxisSpec { axis, min: parse_f(parts[1])?, max: parse_f(parts[2])?, steps })
    }
}

/// Which columns get filled (deselected outputs stay as empty cells under
/// the fixed header).
#[derive(Clone, Copy, Debug)]
pub struct OutputSet {
    pub discord: bool,
    pub tau3: bool,
    pub paper_label: bool,
    pub slocc_label: bool,
}

impl Default for OutputSet {
    fn default() -> Self {
        Self { discord: true, tau3: true, paper_label: true, slocc_label: true }
    }
}

impl FromStr for OutputSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set =
            OutputSet { discord: false, tau3: false, paper_label: false, slocc_label: false };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "discord" => set.discord = true,
                "tau3" => set.tau3 = true,
                "paper_label" => set.paper_label = true,
                "slocc_label" => set.slocc_label = true,
                other => {
                    return Err(Error::InvalidSweep(format!("unknown output {other:?}")));
                }
            }
        }
        Ok(set)
    }
}

/// A validated two-axis sweep over family parameters.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    /// Values for the non-swept parameters (swept fields are overwritten at
    /// every grid point).
    pub base: FamilyParams,
    pub outputs: OutputSet,
    pub tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        self.axis2.validate()?;
        if self.axis1.axis == self.axis2.axis {
            return Err(Error::InvalidSweep("axis1 and axis2 vary the same parameter".into()));
        }
        Ok(())
    }
}

fn params_at(spec: &SweepSpec, i: usize, j: usize) -> Result<FamilyParams> {
    let mut p = spec.base;
    for (axis, v) in [
        (spec.axis1.axis, spec.axis1.value_at(i)),
        (spec.axis2.axis, spec.axis2.value_at(j)),
    ] {
        match axis {
            SweepAxis::P => p.p = v,
            SweepAxis::Alpha => p.alpha = v,
        }
    }
    FamilyParams::new(p.p, p.alpha, p.n, p.r, p.s)
}

fn csv_row(spec: &SweepSpec, params: &FamilyParams) -> Result<String> {
    let breakdown = geometric_discord_closed(params)?;
    let tr = tangle_report(params, spec.tol)?;
    let out = &spec.outputs;
    let cell = |on: bool, v: String| if on { v } else { String::new() };
    Ok([
        fmt_f64(params.p),
        fmt_f64(params.alpha),
        params.n.to_string(),
        fmt_f64(params.r[0]),
        fmt_f64(params.r[1]),
        fmt_f64(params.r[2]),
        fmt_f64(params.s[0]),
        fmt_f64(params.s[1]),
        fmt_f64(params.s[2]),
        fmt_f64(params.overlap()),
        cell(out.discord, fmt_f64(breakdown.discord)),
        cell(out.tau3, fmt_f64(tr.tau3_general)),
        cell(out.paper_label, tr.paper_label.to_string()),
        cell(out.slocc_label, tr.slocc_label.to_string()),
    ]
    .join(","))
}

/// Evaluate the grid and render the CSV, header included, one row per grid
/// point in row-major `(axis1, axis2)` order.
pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    spec.validate()?;
    let (n1, n2) = (spec.axis1.steps, spec.axis2.steps);
    let rows: Vec<Result<String>> = (0..n1 * n2)
        .into_par_iter()
        .map(|flat| {
            let params = params_at(spec, flat / n2, flat % n2)?;
            csv_row(spec, &params)
        })
        .collect();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

/// Parse a flat `key = value` config file: one pair per line, `#` comments
/// and blank lines ignored. Later occurrences of a key win.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidSweep(format!(
                "config line {}: {raw:?} is not key = value",
                lineno + 1
            )));
        };
        pairs.push((key.trim().replace('_', "-"), value.trim().to_string()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::PaperLabel;

    fn base_params() -> FamilyParams {
        FamilyParams::new(0.25, 0.3, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap()
    }

    fn spec_2x2() -> SweepSpec {
        SweepSpec {
            axis1: "p:0.25:0.75:2".parse().unwrap(),
            axis2: "alpha:0.3:0.7:2".parse().unwrap(),
            base: base_params(),
            outputs: OutputSet::default(),
            tol: 1e-9,
        }
    }

    #[test]
    fn axis_spec_parses() {
        let a: AxisSpec = "p:0.1:0.9:5".parse().unwrap();
        assert_eq!(a.axis, SweepAxis::P);
        assert_eq!(a.steps, 5);
        assert!((a.value_at(0) - 0.1).abs() < 1e-15);
        assert!((a.value_at(4) - 0.9).abs() < 1e-15);
        assert!("q:0:1:5".parse::<AxisSpec>().is_err());
        assert!("p:0:1".parse::<AxisSpec>().is_err());
    }

    #[test]
    fn single_step_axis_rejected() {
        let mut spec = spec_2x2();
        spec.axis1.steps = 1;
        assert!(matches!(run_sweep(&spec), Err(Error::InvalidSweep(_))));
    }

    #[test]
    fn duplicate_axes_rejected() {
        let mut spec = spec_2x2();
        spec.axis2 = "p:0.1:0.2:2".parse().unwrap();
        assert!(matches!(run_sweep(&spec), Err(Error::InvalidSweep(_))));
    }

    #[test]
    fn two_by_two_sweep_labels() {
        let csv = run_sweep(&spec_2x2()).unwrap();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        // no alpha = 1/sqrt(2) grid hit, so all four points are GHZ-type
        for row in &lines[1..] {
            assert!(row.ends_with(",GHZType,GHZClass"), "row {row}");
        }
        // row-major order: p varies slowest
        let first: Vec<&str> = lines[1].split(',').collect();
        let last: Vec<&str> = lines[4].split(',').collect();
        assert_eq!((first[0], first[1]), ("0.25", "0.3"));
        assert_eq!((last[0], last[1]), ("0.75", "0.7"));
    }

    #[test]
    fn equal_bloch_vectors_sweep_is_w_type() {
        let mut spec = spec_2x2();
        spec.base.s = spec.base.r;
        let csv = run_sweep(&spec).unwrap();
        for row in csv.trim_end().lines().skip(1) {
            let cells: Vec<&str> = row.split(',').collect();
            assert_eq!(cells[11], "0", "tau3 cell: {row}");
            assert_eq!(cells[12], PaperLabel::WType.to_string(), "{row}");
        }
    }

    #[test]
    fn output_subset_leaves_cells_empty() {
        let mut spec = spec_2x2();
        spec.outputs = "discord,paper_label".parse().unwrap();
        let csv = run_sweep(&spec).unwrap();
        for row in csv.trim_end().lines().skip(1) {
            let cells: Vec<&str> = row.split(',').collect();
            assert!(!cells[10].is_empty());
            assert!(cells[11].is_empty());
            assert!(!cells[12].is_empty());
            assert!(cells[13].is_empty());
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = run_sweep(&spec_2x2()).unwrap();
        let b = run_sweep(&spec_2x2()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_parsing() {
        let pairs = parse_config(
            "# comment\n\naxis1 = p:0.1:0.9:3\nr = 0,0,1\ns_theta = 1.5\n",
        )
        .unwrap();
        assert_eq!(
            pairs,
            vec![
                ("axis1".to_string(), "p:0.1:0.9:3".to_string()),
                ("r".to_string(), "0,0,1".to_string()),
                ("s-theta".to_string(), "1.5".to_string()),
            ]
        );
        assert!(parse_config("no equals sign").is_err());
    }
}
