//! Command-line front end: simulate raw data, focus it, measure and plot
//! the result, and check the analytic spectrum against quadrature.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use bisar::focuser::{
    focus_gc, focus_monostatic_mismatch, focus_tandem, focus_tandem_unchecked, focus_ti, focus_ti_unchecked, output_grid,
    BlockSpec, FocusedImage, GcOptions,
};
use bisar::io::{read_image, read_raw, read_toml, write_image, write_raw, write_toml};
use bisar::oracle::{backproject, validity_report, OracleReport};
use bisar::plot::{brightest, render, DEFAULT_DYNAMIC_RANGE_DB};
use bisar::rawsim::{auto_grid, range_compress, simulate};
use bisar::report::{analyze, FocusReport};
use bisar::scenario::{Mode, ScenarioConfig};
use bisar::Error;

#[derive(Parser)]
#[command(name = "bisar", version, about = "Bistatic SAR point-target simulation and focusing")]
struct Cli {
    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate raw data for a scenario.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Apply the scenario's reduced desk-scale settings.
        #[arg(long)]
        desk: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Focus a raw data file and report the declared targets.
    Focus {
        raw: PathBuf,
        /// tandem, ti, gc, mono or backprojection; defaults to the scenario's.
        #[arg(long)]
        mode: Option<Mode>,
        /// Block tiling as RANGExAZIMUTH, e.g. 4x1.
        #[arg(long, value_parser = parse_blocks)]
        blocks: Option<BlockSpec>,
        /// General case only: skip the azimuth and range-walk compensation.
        #[arg(long)]
        stage1_only: bool,
        /// Run the tandem or TI processor even if the geometry violates it.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the target report; defaults next to the image.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Measure the declared targets in a focused image.
    Analyze {
        image: PathBuf,
        /// Report path; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the analytic spectrum with quadrature, optionally over a
    /// sweep of the bistatic grade.
    ValidateLbf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        desk: bool,
        /// Index of the target to evaluate.
        #[arg(long, default_value_t = 0)]
        target: usize,
        /// `a2=v1,v2,...` or `a0=v1,v2,...`.
        #[arg(long)]
        sweep: Option<String>,
        /// Fix the target's a0 (the other grade is swept or taken as is).
        #[arg(long, allow_hyphen_values = true)]
        a0: Option<f64>,
        /// Fix the target's a2.
        #[arg(long)]
        a2: Option<f64>,
        /// Aperture stretch that moves window-edge ripple out of the band.
        #[arg(long, default_value_t = 3.0)]
        stretch: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a focused image as PGM with the target peaks marked.
    Plot {
        image: PathBuf,
        /// Take the peak markers from this report instead of measuring.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Displayed dynamic range, dB.
        #[arg(long, default_value_t = DEFAULT_DYNAMIC_RANGE_DB)]
        db: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_blocks(s: &str) -> Result<BlockSpec, String> {
    let (r, a) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected RANGExAZIMUTH, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().ok().filter(|&n| n > 0);
    match (n(r), n(a)) {
        (Some(r), Some(a)) => Ok(BlockSpec::new(r, a)),
        _ => Err(format!("block counts must be positive integers, got {s:?}")),
    }
}

/// Process exit code of a library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidScale(_) => 2,
        Error::TandemAssumptionViolated(_) | Error::TIAssumptionViolated(_) => 3,
        Error::Io(_) | Error::Format(_) => 5,
        Error::ZeroVelocity
        | Error::DegenerateRange { .. }
        | Error::EmptyOverlap
        | Error::NoStationaryPoint { .. }
        | Error::WindowOverrun { .. }
        | Error::BlockTooNarrow { .. }
        | Error::RegressionIllConditioned { .. }
        | Error::NoPeakFound { .. }
        | Error::NoGroundPoint { .. } => 4,
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn appended(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> bisar::Result<()> {
    match out {
        Some(p) => write_toml(p, value),
        None => {
            print!("{}", toml::to_string(value).map_err(|e| Error::Format(e.to_string()))?);
            Ok(())
        }
    }
}

fn cmd_simulate(config: &Path, desk: bool, out: Option<PathBuf>) -> bisar::Result<()> {
    let mut cfg = ScenarioConfig::load(config)?;
    if desk {
        cfg = cfg.with_desk();
    }
    cfg.desk = None;
    let scene = cfg.scene()?;
    let geom = cfg.geometry();
    let grid = auto_grid(&geom, &scene, &cfg.radar, &cfg.aperture)?;
    let raw = simulate(&geom, &scene, &cfg.radar, &cfg.aperture, &grid)?;
    let path = out.or_else(|| cfg.output.raw.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(format!("{}.raw", cfg.name)));
    write_raw(&path, &raw, &cfg)?;
    eprintln!("wrote {} ({} x {} samples)", path.display(), raw.n_azimuth(), raw.n_range());
    Ok(())
}

struct FocusArgs {
    mode: Option<Mode>,
    blocks: Option<BlockSpec>,
    stage1_only: bool,
    force: bool,
}

fn run_processor(raw_path: &Path, args: &FocusArgs) -> bisar::Result<(FocusedImage, ScenarioConfig)> {
    let (raw, header) = read_raw(raw_path)?;
    let cfg = header.scenario;
    let ctx = cfg.context();
    let mode = args.mode.unwrap_or(cfg.focus.mode);
    let blocks = args.blocks.or(cfg.focus.blocks.map(|[r, a]| BlockSpec::new(r, a)));
    if args.stage1_only && mode != Mode::Gc {
        return Err(Error::Config("--stage1-only applies to the gc processor only".into()));
    }
    let img = match mode {
        Mode::Tandem if args.force => focus_tandem_unchecked(&raw, &ctx)?,
        Mode::Tandem => focus_tandem(&raw, &ctx)?,
        Mode::Ti => {
            let spec = blocks.unwrap_or(BlockSpec::new(1, 1));
            if spec.az_blocks != 1 {
                return Err(Error::Config("the ti processor tiles range only; use --blocks Nx1".into()));
            }
            if args.force {
                focus_ti_unchecked(&raw, &ctx, spec.range_blocks)?
            } else {
                focus_ti(&raw, &ctx, spec.range_blocks)?
            }
        }
        Mode::Gc => focus_gc(&raw, &ctx, GcOptions { blocks, stage1_only: args.stage1_only || cfg.focus.stage1_only })?,
        Mode::Mono => focus_monostatic_mismatch(&raw, &ctx)?,
        Mode::Backprojection => {
            let grid = output_grid(&raw, &ctx)?;
            backproject(&range_compress(&raw, &cfg.radar), &ctx, &grid)?
        }
    };
    Ok((img, cfg))
}

fn cmd_focus(raw_path: &Path, args: FocusArgs, out: Option<PathBuf>, report: Option<PathBuf>) -> bisar::Result<()> {
    let (img, cfg) = run_processor(raw_path, &args)?;
    let path = out.or_else(|| cfg.output.image.as_ref().map(PathBuf::from)).unwrap_or_else(|| with_extension(raw_path, "img"));
    write_image(&path, &img, &cfg)?;
    // measure the stored (single-precision) samples so the report matches
    // a later `analyze` of the same file
    let (stored, _) = read_image(&path)?;
    let rep = analyze(&stored, &cfg)?;
    let rpath = report.or_else(|| cfg.output.report.as_ref().map(PathBuf::from)).unwrap_or_else(|| appended(&path, ".report.toml"));
    write_toml(&rpath, &rep)?;
    eprintln!("wrote {} and {}", path.display(), rpath.display());
    for o in &rep.offsets {
        eprintln!("{} -> {}: range {:.2} m, azimuth {:.2} m", o.from, o.to, o.range, o.azimuth);
    }
    Ok(())
}

fn cmd_analyze(image: &Path, out: Option<PathBuf>) -> bisar::Result<()> {
    let (img, header) = read_image(image)?;
    emit(&analyze(&img, &header.scenario)?, out.as_deref())
}

/// Grade sweep result. The trend passes when the error rises strictly with
/// the distance of the swept parameter from its monostatic value.
#[derive(Serialize)]
struct SweepReport {
    parameter: String,
    values: Vec<f64>,
    rms_phase_error: Vec<f64>,
    trend: String,
    reports: Vec<OracleReport>,
}

#[derive(Clone, Copy, PartialEq)]
enum Grade {
    A0,
    A2,
}

fn parse_sweep(s: &str) -> bisar::Result<(Grade, Vec<f64>)> {
    let (name, list) = s.split_once('=').ok_or_else(|| Error::Config(format!("sweep must look like a2=1,2,3, got {s:?}")))?;
    let grade = match name.trim() {
        "a0" => Grade::A0,
        "a2" => Grade::A2,
        other => return Err(Error::Config(format!("unknown sweep parameter {other:?}, expected a0 or a2"))),
    };
    let values = list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Config(format!("bad sweep value {t:?}"))))
        .collect::<bisar::Result<Vec<f64>>>()?;
    if values.is_empty() {
        return Err(Error::Config("sweep has no values".into()));
    }
    Ok((grade, values))
}

fn cmd_validate_lbf(
    config: &Path,
    desk: bool,
    target: usize,
    fixed: (Option<f64>, Option<f64>),
    sweep: Option<&str>,
    stretch: f64,
    out: Option<PathBuf>,
) -> bisar::Result<()> {
    let mut cfg = ScenarioConfig::load(config)?;
    if desk {
        cfg = cfg.with_desk();
    }
    if fixed.0.is_some() || fixed.1.is_some() {
        cfg = cfg.with_bistatic_grade(target, fixed.0, fixed.1)?;
    }
    let one = |c: &ScenarioConfig| -> bisar::Result<OracleReport> {
        let p = c
            .scene()?
            .targets
            .get(target)
            .ok_or_else(|| Error::Config(format!("no target {target}")))?
            .position;
        validity_report(&c.geometry(), p, &c.radar, &c.aperture, stretch)
    };
    let Some(sweep) = sweep else {
        return emit(&one(&cfg)?, out.as_deref());
    };
    let (grade, values) = parse_sweep(sweep)?;
    let reports = values
        .iter()
        .map(|&v| {
            let c = match grade {
                Grade::A0 => cfg.with_bistatic_grade(target, Some(v), None)?,
                Grade::A2 => cfg.with_bistatic_grade(target, None, Some(v))?,
            };
            one(&c)
        })
        .collect::<bisar::Result<Vec<_>>>()?;
    let rms: Vec<f64> = reports.iter().map(|r| r.rms_phase_error).collect();
    let distance = |v: f64| match grade {
        Grade::A0 => v.abs(),
        Grade::A2 => (v - 1.0).abs(),
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| distance(values[a]).total_cmp(&distance(values[b])));
    let monotone = order.windows(2).all(|w| rms[w[1]] > rms[w[0]]);
    let trend = if values.len() < 2 { "n/a" } else if monotone { "PASS" } else { "FAIL" };
    eprintln!("{sweep}: rms phase error {rms:?}, monotone trend {trend}");
    let report = SweepReport {
        parameter: match grade {
            Grade::A0 => "a0".into(),
            Grade::A2 => "a2".into(),
        },
        values,
        rms_phase_error: rms,
        trend: trend.into(),
        reports,
    };
    emit(&report, out.as_deref())
}

fn cmd_plot(image: &Path, report: Option<PathBuf>, db: f64, out: Option<PathBuf>) -> bisar::Result<()> {
    if !(db > 0.0 && db.is_finite()) {
        return Err(Error::InvalidParameter(format!("dynamic range must be positive, got {db}")));
    }
    let (img, header) = read_image(image)?;
    let mag = img.magnitude();
    let mut markers = match report {
        Some(p) => read_toml::<FocusReport>(&p)?.peak_cells(),
        None => analyze(&img, &header.scenario)?.peak_cells(),
    };
    if markers.is_empty() {
        markers.extend(brightest(&mag));
    }
    let pgm = render(&mag, db, &markers).to_pgm();
    let path = out.unwrap_or_else(|| with_extension(image, "pgm"));
    std::fs::write(&path, pgm).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {} ({} markers)", path.display(), markers.len());
    Ok(())
}

fn run(cli: Cli) -> bisar::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    match cli.command {
        Command::Simulate { config, desk, out } => cmd_simulate(&config, desk, out),
        Command::Focus { raw, mode, blocks, stage1_only, force, out, report } => {
            cmd_focus(&raw, FocusArgs { mode, blocks, stage1_only, force }, out, report)
        }
        Command::Analyze { image, out } => cmd_analyze(&image, out),
        Command::ValidateLbf { config, desk, target, sweep, a0, a2, stretch, out } => {
            cmd_validate_lbf(&config, desk, target, (a0, a2), sweep.as_deref(), stretch, out)
        }
        Command::Plot { image, report, db, out } => cmd_plot(&image, report, db, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_parse() {
        assert_eq!(parse_blocks("4x1").unwrap(), BlockSpec::new(4, 1));
        assert_eq!(parse_blocks("2X3").unwrap(), BlockSpec::new(2, 3));
        assert!(parse_blocks("0x1").is_err());
        assert!(parse_blocks("4").is_err());
    }

    #[test]
    fn sweeps_parse_and_empty_is_rejected() {
        let (g, v) = parse_sweep("a2=1, 1.5,2").unwrap();
        assert!(g == Grade::A2 && v == vec![1.0, 1.5, 2.0]);
        assert!(matches!(parse_sweep("a2="), Err(Error::Config(_))));
        assert!(matches!(parse_sweep("a3=1"), Err(Error::Config(_))));
        assert!(matches!(parse_sweep("a0=x"), Err(Error::Config(_))));
    }

    #[test]
    fn exit_codes_are_distinct_per_class() {
        let codes = [
            exit_code(&Error::Config(String::new())),
            exit_code(&Error::TandemAssumptionViolated(String::new())),
            exit_code(&Error::EmptyOverlap),
            exit_code(&Error::Io(String::new())),
        ];
        assert_eq!(codes, [2, 3, 4, 5]);
    }
}
