//! Command-line front end: argument model, dispatch and table output.

pub mod figures;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use pdmosc::coherent::{CoherentKind, CoherentState, DEFAULT_TAIL_TOLERANCE};
use pdmosc::massmap::{MassProfile, ProfileKind};
use pdmosc::table::Table;
use pdmosc::verify::report::RECORD_HEADER;
use pdmosc::verify::run_suite;
use pdmosc::verify::suite::{check_ids, SuiteConfig};
use pdmosc::xspace::{catalog_filtered, PdmSystem, PotentialId};
use pdmosc::yspace::SingularParams;
use pdmosc::{Error, Result};

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "pdmosc", version, about = "Position-dependent-mass singular oscillators and their coherent states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the potential catalog, optionally filtered by family or id.
    Catalog {
        /// Family (MDNT, MINT, linear) or potential id.
        filter: Option<String>,
    },
    /// Energy levels E_n = 4n + 2 + √(1 + 2g0) as `n,energy`.
    Spectrum {
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        g0: f64,
        /// Level or inclusive range of levels, e.g. `3` or `0..3`.
        #[arg(long, default_value = "0..3")]
        n: LevelRange,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Potential V(x) as `x,value`.
    Potential {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wave function ψ_n(x) as `x,value`.
    Wavefunction {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Emit |ψ_n|² instead of ψ_n.
        #[arg(long)]
        density: bool,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherent state as `x,re,im,abs2`, or its coefficients as `n,re,im`.
    Coherent {
        #[command(flatten)]
        system: SystemArgs,
        /// glauber, bg (Barut–Girardello) or perelomov.
        #[arg(long, default_value = "bg")]
        kind: CoherentKind,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        z: ComplexArg,
        /// Bound on the discarded weight of the Fock expansion.
        #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
        tolerance: f64,
        /// Emit the Fock coefficients instead of the wave function.
        #[arg(long)]
        coefficients: bool,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Figure tables: 1 potentials, 2 wave functions, 3 probability densities.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Directory receiving `figureN.csv`; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks (all by default).
    Verify {
        /// Check ids; `all` or nothing selects every check.
        checks: Vec<String>,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        g0: f64,
        /// Points of the residual grids.
        #[arg(long, default_value_t = 4000)]
        points: usize,
        /// Highest quantum number in the residual checks.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Tolerance applied to every selected check.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Print `check_id,residual,tolerance,passed` records.
        #[arg(long)]
        records: bool,
        /// List the check ids and exit.
        #[arg(long)]
        list: bool,
        /// File receiving the records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Potential id: V1..V7, sing (constant mass) or linear.
    #[arg(long, default_value = "V5")]
    pub profile: String,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub g0: f64,
    /// Mass profile record replacing the default one, e.g. "kind=regular lambda=2".
    #[arg(long)]
    pub mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Order n of the MDNT family.
    #[arg(long)]
    pub mdnt_order: Option<u32>,
}

impl SystemArgs {
    pub fn build(&self) -> Result<PdmSystem> {
        let id: PotentialId = self.profile.parse()?;
        let base = PdmSystem::with_defaults(id, self.g0)?;
        let mut profile = match &self.mass {
            Some(rec) => rec.parse::<MassProfile>()?,
            None => *base.profile(),
        };
        if self.x0.is_some() || self.lambda.is_some() || self.mdnt_order.is_some() {
            let x0 = self.x0.unwrap_or(profile.x0());
            let lambda = self.lambda.unwrap_or(profile.lambda());
            if self.mdnt_order.is_some() && !matches!(profile.kind(), ProfileKind::MdntN(_)) {
                return Err(Error::Usage("--mdnt-order applies to the mdnt profile only".into()));
            }
            profile = match profile.kind() {
                ProfileKind::Mdnt0 => MassProfile::mdnt0(x0, lambda),
                ProfileKind::MdntN(k) => MassProfile::mdnt_n(self.mdnt_order.unwrap_or(k), x0, lambda)?,
                ProfileKind::Exponential => MassProfile::exponential(x0, lambda),
                ProfileKind::Regular if self.x0.is_none() => MassProfile::regular(lambda),
                ProfileKind::Regular => return Err(Error::Usage("the regular profile has no x0".into())),
                ProfileKind::ConstantMass => {
                    return Err(Error::Usage("the constant-mass profile has no x0 or lambda".into()))
                }
            };
        }
        PdmSystem::new(profile, base.params().copied(), id)
    }
}

/// `n` or `a..b` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad level {t:?}: {e}"));
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if first > last {
            return Err(format!("empty level range {s:?}"));
        }
        Ok(Self { first, last })
    }
}

/// `min,max,points`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + span * i as f64 / last })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("grid must be min,max,points, got {s:?}"));
        };
        let min = a.parse::<f64>().map_err(|e| format!("bad grid min {a:?}: {e}"))?;
        let max = b.parse::<f64>().map_err(|e| format!("bad grid max {b:?}: {e}"))?;
        let points = n.parse::<usize>().map_err(|e| format!("bad point count {n:?}: {e}"))?;
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(format!("grid needs finite min < max, got {min}, {max}"));
        }
        if points < 2 {
            return Err("grid needs at least 2 points".into());
        }
        Ok(Self { min, max, points })
    }
}

/// `re,im` or `re`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let z = match s.split_once(',') {
            Some((re, im)) => Complex64::new(num(re)?, num(im)?),
            None => Complex64::new(num(s)?, 0.0),
        };
        Ok(Self(z))
    }
}

/// The given grid, or 601 points spaced like the system's residual grid
/// over where ψ_0..ψ_n are not negligible.
fn sample_points(grid: Option<GridSpec>, system: &PdmSystem, n: usize) -> Result<Vec<f64>> {
    match grid {
        Some(g) => Ok(g.points()),
        None => Ok(system.residual_grid(n, 601)?.points()),
    }
}

fn emit(table: &Table, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => table.write_file(path),
        None => table.write_to(stdout).map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn stdout_error(source: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source }
}

/// `x,value` for f on the grid; the lower domain edge maps to `edge`.
fn sample_table(
    xs: Vec<f64>,
    lower: f64,
    edge: impl Fn() -> Result<f64>,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<Table> {
    let rows =
        xs.into_iter().map(|x| Ok(vec![x, if x == lower { edge()? } else { f(x)? }])).collect::<Result<Vec<_>>>()?;
    Ok(Table::new(vec!["x".into(), "value".into()], rows))
}

/// Runs one command, writing to `stdout`; returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Catalog { filter } => {
            for e in catalog_filtered(filter.as_deref()) {
                writeln!(
                    stdout,
                    "{:<6} {:<6}  m(x) = {}\n{:14}s(x) = {}\n{:14}domain {}\n{:14}V(x) = {}",
                    e.id.name(),
                    e.family,
                    e.mass,
                    "",
                    e.bijection,
                    "",
                    e.domain,
                    "",
                    e.potential
                )
                .map_err(stdout_error)?;
            }
        }
        Command::Spectrum { g0, n, out } => {
            let p = SingularParams::new(g0)?;
            let rows = (n.first..=n.last).map(|k| vec![k as f64, p.energy(k)]).collect();
            emit(&Table::new(vec!["n".into(), "energy".into()], rows), out.as_deref(), stdout)?;
        }
        Command::Potential { system, grid, out } => {
            let sys = system.build()?;
            let table =
                sample_table(sample_points(grid, &sys, 3)?, sys.x_lower(), || Ok(f64::INFINITY), |x| sys.potential(x))?;
            emit(&table, out.as_deref(), stdout)?;
        }
        Command::Wavefunction { system, n, density, grid, out } => {
            let sys = system.build()?;
            let xs = sample_points(grid, &sys, n)?;
            let value = |v: f64| if density { v * v } else { v };
            let table =
                sample_table(xs, sys.x_lower(), || sys.boundary_value(n).map(value), |x| sys.psi_n(n, x).map(value))?;
            emit(&table, out.as_deref(), stdout)?;
        }
        Command::Coherent { system, kind, z, tolerance, coefficients, grid, out } => {
            let sys = system.build()?;
            let cs = CoherentState::build(kind, &sys, z.0, tolerance)?;
            let table = if coefficients {
                cs.coefficient_table()
            } else {
                let xs: Vec<f64> =
                    sample_points(grid, &sys, cs.truncation())?.into_iter().filter(|&x| x > sys.x_lower()).collect();
                cs.evaluation_table(&xs)?
            };
            emit(&table, out.as_deref(), stdout)?;
        }
        Command::Figure { which, out } => {
            let table = figures::figure(which)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
                    table.write_file(&dir.join(format!("figure{which}.csv")))?;
                }
                None => emit(&table, None, stdout)?,
            }
        }
        Command::Verify { checks, g0, points, n, tolerance, records, list, out } => {
            if list {
                for id in check_ids() {
                    writeln!(stdout, "{id}").map_err(stdout_error)?;
                }
                return Ok(EXIT_OK);
            }
            let selection = if checks.is_empty() { vec!["all".to_string()] } else { checks };
            let mut config = SuiteConfig { g0, points, nmax: n, ..SuiteConfig::default() };
            if let Some(t) = tolerance {
                let ids: Vec<&str> = if selection.iter().any(|s| s == "all") {
                    check_ids()
                } else {
                    selection.iter().map(|s| s.as_str()).collect()
                };
                for id in ids {
                    config.tolerances.insert(id.to_string(), t);
                }
            }
            let reports = run_suite(&selection, &config)?;
            let mut lines = vec![RECORD_HEADER.to_string()];
            lines.extend(reports.iter().map(|r| r.to_record()));
            if records {
                for l in &lines {
                    writeln!(stdout, "{l}").map_err(stdout_error)?;
                }
            } else {
                for r in &reports {
                    writeln!(stdout, "{r}").map_err(stdout_error)?;
                }
                let passed = reports.iter().filter(|r| r.passed).count();
                writeln!(stdout, "{passed}/{} checks passed", reports.len()).map_err(stdout_error)?;
            }
            if let Some(path) = out {
                let mut text = lines.join("\n");
                text.push('\n');
                std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(EXIT_VERIFICATION_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!("0..3".parse::<LevelRange>().unwrap(), LevelRange { first: 0, last: 3 });
        assert_eq!("2".parse::<LevelRange>().unwrap(), LevelRange { first: 2, last: 2 });
        assert!("3..1".parse::<LevelRange>().is_err());
        let g: GridSpec = "0,4,401".parse().unwrap();
        let pts = g.points();
        assert_eq!((pts.len(), pts[0], pts[400]), (401, 0.0, 4.0));
        assert_eq!(pts[100], 1.0);
        assert!("0,4".parse::<GridSpec>().is_err());
        assert!("4,0,10".parse::<GridSpec>().is_err());
        assert_eq!("-1.5,2".parse::<ComplexArg>().unwrap().0, Complex64::new(-1.5, 2.0));
        assert_eq!("3".parse::<ComplexArg>().unwrap().0, Complex64::new(3.0, 0.0));
    }

    #[test]
    fn system_overrides() {
        let args = |profile: &str| SystemArgs {
            profile: profile.into(),
            g0: 2.0,
            mass: None,
            x0: None,
            lambda: None,
            mdnt_order: None,
        };
        let sys = SystemArgs { lambda: Some(2.0), ..args("V3") }.build().unwrap();
        assert_eq!(sys.profile().lambda(), 2.0);
        let sys = SystemArgs { mdnt_order: Some(3), ..args("V2") }.build().unwrap();
        assert_eq!(sys.profile().kind(), ProfileKind::MdntN(3));
        assert!(SystemArgs { x0: Some(1.0), ..args("V3") }.build().is_err());
        assert!(SystemArgs { mdnt_order: Some(3), ..args("V1") }.build().is_err());
        assert!(SystemArgs { x0: Some(2.0), ..args("V5") }.build().is_err());
        let lin = SystemArgs { mass: Some("kind=constant".into()), ..args("linear") }.build().unwrap();
        assert_eq!(lin.profile().kind(), ProfileKind::ConstantMass);
        assert!(args("V9").build().is_err());
    }
}
