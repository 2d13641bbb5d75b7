use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use noon_steering::stats::Which;
use noon_steering::steering::{EtaGrid, PhiRule, SweepGrid, ThresholdMode};
use serde::{Deserialize, Serialize};

/// NOON phase as typed on the command line.
///
/// Symbolic multiples of π stay symbolic until evaluated, so `pi/2` maps to
/// exactly the same double every time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Phase {
    /// `num·π / den`.
    PiFraction { num: i32, den: u32 },
    Radians(f64),
}

impl Phase {
    pub fn radians(self) -> f64 {
        match self {
            Phase::PiFraction { num, den } => num as f64 * PI / den as f64,
            Phase::Radians(r) => r,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Phase::PiFraction { num, den } => {
                match num {
                    1 => write!(f, "pi")?,
                    -1 => write!(f, "-pi")?,
                    _ => write!(f, "{num}pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
            Phase::Radians(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let text = s.trim().to_ascii_lowercase();
        let bad = || format!("invalid phase {s:?}: expected radians or a multiple of pi such as pi/2, 3pi/4");
        let Some((head, tail)) = text.split_once("pi") else {
            let r: f64 = text.parse().map_err(|_| bad())?;
            return if r.is_finite() { Ok(Phase::Radians(r)) } else { Err(bad()) };
        };
        let head = head.strip_suffix('*').unwrap_or(head).trim();
        let num = match head {
            "" | "+" => 1,
            "-" => -1,
            h => h.parse().map_err(|_| bad())?,
        };
        let den = match tail.trim() {
            "" => 1,
            t => t.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
        };
        if den == 0 {
            return Err(bad());
        }
        Ok(Phase::PiFraction { num, den })
    }
}

impl From<Phase> for String {
    fn from(p: Phase) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Phase {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Sweep,
    Threshold,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Named figure grids. Bump the version suffix if a grid ever changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// v1: N = 1..5, η_a = η_b from 0.80 to 1.00 step 0.005, φ = 0 for odd N and π/2 for even N.
    Fig1,
    /// v1: N = 2, (η_a, η_b) over [0.80, 1.00]² step 0.005, φ = π/2.
    Fig2,
}

impl Preset {
    pub fn orders(self) -> Vec<usize> {
        match self {
            Preset::Fig1 => (1..=5).collect(),
            Preset::Fig2 => vec![2],
        }
    }

    pub fn grid(self) -> SweepGrid {
        let eta = EtaGrid {
            start: 0.8,
            stop: 1.0,
            step: 0.005,
        };
        match self {
            Preset::Fig1 => SweepGrid::Symmetric { eta },
            Preset::Fig2 => SweepGrid::Full { eta_a: eta, eta_b: eta },
        }
    }
}

/// Everything one invocation needs, independent of how it was parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub orders: Vec<usize>,
    /// `None` picks 0 for odd N and π/2 for even N.
    pub phi: Option<Phase>,
    pub eta_a: f64,
    pub eta_b: f64,
    pub criterion: Which,
    pub shots: u64,
    pub seed: u64,
    pub bins: usize,
    pub grid: Option<SweepGrid>,
    pub threshold: ThresholdMode,
    pub output: Option<PathBuf>,
    pub shot_log: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub const DEFAULT_SHOTS: u64 = 1_000_000;
    pub const DEFAULT_BINS: usize = 40;

    pub fn new(command: Command, orders: Vec<usize>) -> Self {
        Self {
            command,
            orders,
            phi: None,
            eta_a: 1.0,
            eta_b: 1.0,
            criterion: Which::P,
            shots: Self::DEFAULT_SHOTS,
            seed: 0,
            bins: Self::DEFAULT_BINS,
            grid: None,
            threshold: ThresholdMode::Symmetric,
            output: None,
            shot_log: None,
            format: match command {
                Command::Sweep => Format::Csv,
                _ => Format::Text,
            },
        }
    }

    pub fn phi_rule(&self) -> PhiRule {
        match self.phi {
            Some(p) => PhiRule::Fixed(p.radians()),
            None => PhiRule::Default,
        }
    }

    /// Primary order for the single-point commands.
    pub fn order(&self) -> usize {
        self.orders.first().copied().unwrap_or(1)
    }

    /// Rebases relative output paths onto `dir`.
    pub fn with_out_dir(mut self, dir: Option<&Path>) -> Self {
        if let Some(dir) = dir {
            let rebase = |p: PathBuf| if p.is_relative() { dir.join(p) } else { p };
            self.output = self.output.map(rebase);
            self.shot_log = self.shot_log.map(rebase);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn phase_literals() {
        assert_eq!("0".parse::<Phase>().unwrap().radians(), 0.0);
        assert_eq!("pi/2".parse::<Phase>().unwrap().radians(), FRAC_PI_2);
        assert_eq!("PI/4".parse::<Phase>().unwrap().radians(), FRAC_PI_4);
        assert_eq!("3*pi/4".parse::<Phase>().unwrap(), Phase::PiFraction { num: 3, den: 4 });
        assert_eq!("-pi".parse::<Phase>().unwrap(), Phase::PiFraction { num: -1, den: 1 });
        assert_eq!("1.25".parse::<Phase>().unwrap(), Phase::Radians(1.25));
        for bad in ["", "pi/0", "pi2", "x", "nan", "inf", "pi/-2"] {
            assert!(bad.parse::<Phase>().is_err(), "{bad}");
        }
    }

    fn phase() -> impl Strategy<Value = Phase> {
        prop_oneof![
            (-8i32..=8, 1u32..=16).prop_map(|(num, den)| Phase::PiFraction { num, den }),
            (-1e6f64..1e6).prop_map(Phase::Radians),
        ]
    }

    fn eta_grid() -> impl Strategy<Value = EtaGrid> {
        (0.0f64..0.5, 0.5f64..=1.0, 1e-3f64..0.1).prop_map(|(start, stop, step)| EtaGrid { start, stop, step })
    }

    fn config() -> impl Strategy<Value = RunConfig> {
        let grid = prop_oneof![
            Just(None),
            eta_grid().prop_map(|eta| Some(SweepGrid::Symmetric { eta })),
            (eta_grid(), eta_grid()).prop_map(|(eta_a, eta_b)| Some(SweepGrid::Full { eta_a, eta_b })),
        ];
        let mode = prop_oneof![
            Just(ThresholdMode::Symmetric),
            (0.0f64..=1.0).prop_map(ThresholdMode::FixEtaA),
            (0.0f64..=1.0).prop_map(ThresholdMode::FixEtaB),
        ];
        let command = prop_oneof![
            Just(Command::Eval),
            Just(Command::Sweep),
            Just(Command::Threshold),
            Just(Command::Sample),
        ];
        let format = prop_oneof![Just(Format::Csv), Just(Format::Json), Just(Format::Text)];
        let which = prop_oneof![Just(Which::X), Just(Which::P)];
        let path = proptest::option::of("[a-z]{1,8}(/[a-z]{1,8})?\\.csv".prop_map(PathBuf::from));
        (
            (command, proptest::collection::vec(1usize..=8, 1..6), proptest::option::of(phase())),
            (0.0f64..=1.0, 0.0f64..=1.0, which, any::<u64>(), any::<u64>(), 1usize..200),
            (grid, mode, path.clone(), path, format),
        )
            .prop_map(
                |((command, orders, phi), (eta_a, eta_b, criterion, shots, seed, bins), (grid, threshold, output, shot_log, format))| {
                    RunConfig {
                        command,
                        orders,
                        phi,
                        eta_a,
                        eta_b,
                        criterion,
                        shots,
                        seed,
                        bins,
                        grid,
                        threshold,
                        output,
                        shot_log,
                        format,
                    }
                },
            )
    }

    proptest! {
        #[test]
        fn phase_text_round_trip(p in phase()) {
            prop_assert_eq!(p.to_string().parse::<Phase>().unwrap(), p);
        }

        #[test]
        fn config_json_round_trip(c in config()) {
            let text = serde_json::to_string(&c).unwrap();
            let back: RunConfig = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn out_dir_rebases_relative_paths_only() {
        let mut c = RunConfig::new(Command::Sample, vec![1]);
        c.output = Some("a.csv".into());
        c.shot_log = Some("/tmp/log.csv".into());
        let c = c.with_out_dir(Some(Path::new("/data")));
        assert_eq!(c.output.unwrap(), PathBuf::from("/data/a.csv"));
        assert_eq!(c.shot_log.unwrap(), PathBuf::from("/tmp/log.csv"));
    }
}
