use std::io::Write;

use anyhow::Result;
use noon_steering::sampling::SteeringEstimate;
use noon_steering::stats::Which;
use noon_steering::steering::{SteeringReport, SweepRow, ThresholdMode};
use serde::Serialize;

pub const REPORT_HEADER: [&str; 11] = [
    "N",
    "phi",
    "eta_a",
    "eta_b",
    "criterion",
    "var_number",
    "var_quadN",
    "commutator",
    "E",
    "violated",
    "error",
];

/// Seventeen significant digits, enough to round-trip any double.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

/// One evaluated point in the report schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub phi: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub criterion: Which,
    pub var_number: Option<f64>,
    #[serde(rename = "var_quadN")]
    pub var_quad_n: Option<f64>,
    pub commutator: Option<f64>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    pub violated: Option<bool>,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn from_report(r: &SteeringReport) -> Self {
        Self {
            n: r.n,
            phi: r.phi,
            eta_a: r.channel.eta_a,
            eta_b: r.channel.eta_b,
            criterion: r.which,
            var_number: Some(r.var_number),
            var_quad_n: Some(r.var_quadrature_n),
            commutator: Some(r.commutator_modulus),
            e: Some(r.e),
            violated: Some(r.violated),
            error: None,
        }
    }

    pub fn from_sweep(row: &SweepRow) -> Self {
        match &row.outcome {
            Ok(r) => Self::from_report(r),
            Err(e) => Self {
                n: row.n,
                phi: row.phi,
                eta_a: row.eta_a,
                eta_b: row.eta_b,
                criterion: row.which,
                var_number: None,
                var_quad_n: None,
                commutator: None,
                e: None,
                violated: None,
                error: Some(e.to_string()),
            },
        }
    }

    fn record(&self) -> [String; 11] {
        [
            self.n.to_string(),
            sci(self.phi),
            sci(self.eta_a),
            sci(self.eta_b),
            self.criterion.to_string(),
            opt_sci(self.var_number),
            opt_sci(self.var_quad_n),
            opt_sci(self.commutator),
            opt_sci(self.e),
            self.violated.map(|v| v.to_string()).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_report_table<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    writeln!(out, "{:>2} {:>9} {:>7} {:>7} {:>1} {:>10} {:>5}", "N", "phi", "eta_a", "eta_b", "c", "E", "viol")?;
    for r in rows {
        let e = match (&r.e, &r.error) {
            (Some(e), _) => format!("{e:10.6}"),
            (None, Some(msg)) => format!("error: {msg}"),
            (None, None) => String::new(),
        };
        let v = r.violated.map(|v| if v { "yes" } else { "no" }).unwrap_or("-");
        writeln!(
            out,
            "{:>2} {:>9.6} {:>7.4} {:>7.4} {:>1} {e} {v:>5}",
            r.n, r.phi, r.eta_a, r.eta_b, r.criterion
        )?;
    }
    Ok(())
}

pub fn write_report_text<W: Write>(r: &SteeringReport, protocol_rhs: Option<f64>, mut out: W) -> Result<()> {
    writeln!(
        out,
        "N = {}, phi = {:.6}, eta_a = {}, eta_b = {}, criterion = {}",
        r.n, r.phi, r.channel.eta_a, r.channel.eta_b, r.which
    )?;
    writeln!(out, "var_number   = {:.10}", r.var_number)?;
    writeln!(out, "var_quadN    = {:.10}", r.var_quadrature_n)?;
    writeln!(out, "commutator   = {:.10}", r.commutator_modulus)?;
    if let Some(rhs) = protocol_rhs {
        writeln!(out, "protocol_rhs = {rhs:.10}")?;
    }
    writeln!(out, "E = {:.6}", r.e)?;
    writeln!(out, "violated = {}", r.violated)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub phi: f64,
    pub criterion: Which,
    pub mode: &'static str,
    pub eta_fixed: Option<f64>,
    pub eta_star: f64,
}

impl ThresholdRow {
    pub const HEADER: [&'static str; 6] = ["N", "phi", "criterion", "mode", "eta_fixed", "eta_star"];

    pub fn new(n: usize, phi: f64, criterion: Which, mode: ThresholdMode, eta_star: f64) -> Self {
        let (mode, eta_fixed) = match mode {
            ThresholdMode::Symmetric => ("symmetric", None),
            ThresholdMode::FixEtaA(v) => ("fix_eta_a", Some(v)),
            ThresholdMode::FixEtaB(v) => ("fix_eta_b", Some(v)),
        };
        Self {
            n,
            phi,
            criterion,
            mode,
            eta_fixed,
            eta_star,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::HEADER)?;
        w.write_record([
            self.n.to_string(),
            sci(self.phi),
            self.criterion.to_string(),
            self.mode.to_string(),
            opt_sci(self.eta_fixed),
            sci(self.eta_star),
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let fixed = match self.eta_fixed {
            Some(v) => format!(" ({} = {v})", &self.mode[4..]),
            None => String::new(),
        };
        writeln!(
            out,
            "N = {}, phi = {:.6}, criterion = {}, mode = {}{fixed}",
            self.n, self.phi, self.criterion, self.mode
        )?;
        writeln!(out, "eta* = {:.6}", self.eta_star)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub phi: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub criterion: Which,
    pub shots: u64,
    pub seed: u64,
    pub bins: usize,
    #[serde(rename = "E_hat")]
    pub e_hat: f64,
    #[serde(rename = "E_stderr")]
    pub e_stderr: f64,
    pub var_number: f64,
    pub var_number_stderr: f64,
    #[serde(rename = "var_quadN")]
    pub var_quad_n: f64,
    #[serde(rename = "var_quadN_stderr")]
    pub var_quad_n_stderr: f64,
    pub commutator: f64,
    pub commutator_stderr: f64,
}

impl SampleRow {
    pub const HEADER: [&'static str; 16] = [
        "N",
        "phi",
        "eta_a",
        "eta_b",
        "criterion",
        "shots",
        "seed",
        "bins",
        "E_hat",
        "E_stderr",
        "var_number",
        "var_number_stderr",
        "var_quadN",
        "var_quadN_stderr",
        "commutator",
        "commutator_stderr",
    ];

    pub fn new(n: usize, phi: f64, eta: (f64, f64), criterion: Which, seed: u64, e: &SteeringEstimate) -> Self {
        Self {
            n,
            phi,
            eta_a: eta.0,
            eta_b: eta.1,
            criterion,
            shots: e.shots,
            seed,
            bins: e.bins,
            e_hat: e.e_hat,
            e_stderr: e.stderr,
            var_number: e.var_number.value,
            var_number_stderr: e.var_number.stderr,
            var_quad_n: e.var_quadrature_n.value,
            var_quad_n_stderr: e.var_quadrature_n.stderr,
            commutator: e.commutator_modulus.value,
            commutator_stderr: e.commutator_modulus.stderr,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::HEADER)?;
        w.write_record([
            self.n.to_string(),
            sci(self.phi),
            sci(self.eta_a),
            sci(self.eta_b),
            self.criterion.to_string(),
            self.shots.to_string(),
            self.seed.to_string(),
            self.bins.to_string(),
            sci(self.e_hat),
            sci(self.e_stderr),
            sci(self.var_number),
            sci(self.var_number_stderr),
            sci(self.var_quad_n),
            sci(self.var_quad_n_stderr),
            sci(self.commutator),
            sci(self.commutator_stderr),
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "N = {}, phi = {:.6}, eta_a = {}, eta_b = {}, criterion = {}",
            self.n, self.phi, self.eta_a, self.eta_b, self.criterion
        )?;
        writeln!(out, "shots = {}, seed = {}, x-bins = {}", self.shots, self.seed, self.bins)?;
        writeln!(out, "var_number = {:.6} ± {:.6}", self.var_number, self.var_number_stderr)?;
        writeln!(out, "var_quadN  = {:.6} ± {:.6}", self.var_quad_n, self.var_quad_n_stderr)?;
        writeln!(out, "commutator = {:.6} ± {:.6}", self.commutator, self.commutator_stderr)?;
        writeln!(out, "E_hat = {:.6} ± {:.6}", self.e_hat, self.e_stderr)?;
        Ok(())
    }
}
