use std::io::{self, Write};

use super::sampler::{Outcome, ShotRecord};

pub const SHOT_LOG_HEADER: &str = "setting,outcome_a,outcome_b";

fn format_outcome(o: Outcome) -> String {
    match o {
        Outcome::Count(k) => k.to_string(),
        Outcome::Real(v) => format!("{v:.8e}"),
    }
}

/// Writes one `setting,outcome_a,outcome_b` line per shot; reals carry nine
/// significant digits.
pub fn write_shot_log<W: Write>(records: &[ShotRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{SHOT_LOG_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{}",
            r.setting.label(),
            format_outcome(r.outcome_a),
            format_outcome(r.outcome_b)
        )?;
    }
    out.flush()
}
