//! `nassgeo`: encode images as NASS states, transform them with synthesized
//! circuits, decode them again and check circuits against the oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nassgeo::io::{read_image, write_image};
use nassgeo::testimage::{test_image, DEFAULT_SEED};
use nassgeo::verify::builtin_specs;
use nassgeo::{
    count_gates, parse_pipeline, Circuit, ColorPalette, CostModel, GateCountReport, ImageGeometry, NassState, Stage,
    TransformSpec, VerifyOptions,
};

const AFTER_HELP: &str = "\
Two-axis images are raster files (PNG, or PPM P3/P6): axis 1 indexes rows
and axis 2 indexes columns, so geometry 7x7 is a 128x128 picture and
`flip:1` (axis 1 fixed) mirrors the columns left to right. Other geometries
use a JSON lattice {geometry, palette_id, pixels}.

Transform specs: flip:<j>  lflip:<x>,<j>,<h>,<m>  rot:<x>,<y>,<pi/2|pi|3pi/2>
trans:<x>  swap:(<v_1,..,v_k>),(<v_1,..,v_k>). Join stages with ';' and
append ^<k> to repeat a stage k times.

Exit codes: 0 success, 1 verification failure, 2 input error.";

#[derive(Parser)]
#[command(name = "nassgeo", version, about = "Geometric transformations of NASS-encoded images", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an image file into a JSON state dump.
    Encode {
        /// Image file (PNG, PPM, or JSON lattice).
        input: PathBuf,
        #[arg(long)]
        geometry: ImageGeometry,
        #[command(flatten)]
        palette: PaletteArg,
        /// Where to write the state dump.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a transform pipeline on a state dump.
    Transform {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write per-stage gate counts as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decode a state dump into an image file.
    Decode {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        palette: PaletteArg,
        /// Output path; `.png` writes PNG, `.json` a lattice, anything else PPM.
        #[arg(long)]
        out: PathBuf,
        /// Write plain-text PPM (P3) instead of binary (P6).
        #[arg(long)]
        ascii: bool,
    },
    /// Compare synthesized circuits with the classical oracle.
    Verify {
        #[arg(long)]
        geometry: ImageGeometry,
        /// Specs to check; every built-in transform of the geometry if omitted.
        #[arg(long)]
        pipeline: Option<String>,
        /// Widths up to this are checked on all basis states, wider ones by sampling.
        #[arg(long, default_value_t = 12)]
        exhaustive_limit: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16.0)]
        cost_alpha: f64,
        /// Check this circuit JSON against the single spec instead of the built circuit.
        #[arg(long, hide = true)]
        circuit: Option<PathBuf>,
    },
    /// Print gate counts of a pipeline without running it.
    Count {
        #[arg(long)]
        geometry: ImageGeometry,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Also print every gate.
        #[arg(long)]
        gates: bool,
    },
    /// Write the deterministic gray test picture.
    Sample {
        #[arg(long, default_value = "7x7")]
        geometry: ImageGeometry,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PaletteArg {
    /// gray256, rgb24 or file:<path> (one colour per line); append +empty
    /// to add the empty colour.
    #[arg(long, default_value = "gray256")]
    palette: String,
}

impl PaletteArg {
    fn load(&self) -> Result<ColorPalette> {
        let (base, empty) = match self.palette.strip_suffix("+empty") {
            Some(b) => (b, true),
            None => (self.palette.as_str(), false),
        };
        let p = match base.strip_prefix("file:") {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading palette {path}"))?;
                ColorPalette::parse_list(&text)?
            }
            None => ColorPalette::from_id(base)?,
        };
        Ok(if empty { p.with_empty() } else { p })
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    pipeline: String,
    /// Run the whole pipeline this many times.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    /// Cost of a multi-controlled X with c ≥ 2 controls is alpha·(c+1).
    #[arg(long, default_value_t = 16.0)]
    cost_alpha: f64,
}

impl PipelineArgs {
    fn stages(&self) -> Result<Vec<Stage>> {
        if self.repeat == 0 {
            bail!("--repeat must be at least 1");
        }
        let once = parse_pipeline(&self.pipeline)?;
        Ok((0..self.repeat).flat_map(|_| once.clone()).collect())
    }

    fn cost(&self) -> Result<CostModel> {
        if !(self.cost_alpha.is_finite() && self.cost_alpha >= 0.0) {
            bail!("--cost-alpha must be a non-negative number");
        }
        Ok(CostModel::new(self.cost_alpha))
    }
}

struct BuiltStage {
    stage: Stage,
    circuit: Circuit,
    counts: GateCountReport,
}

fn build_stages(geometry: &ImageGeometry, args: &PipelineArgs) -> Result<Vec<BuiltStage>> {
    let model = args.cost()?;
    args.stages()?
        .into_iter()
        .map(|stage| {
            let circuit = stage.spec.build(geometry).with_context(|| format!("stage {stage}"))?;
            let counts = count_gates(&circuit, &model);
            Ok(BuiltStage { stage, circuit, counts })
        })
        .collect()
}

fn total_counts(built: &[BuiltStage]) -> GateCountReport {
    let mut total = GateCountReport::default();
    for b in built {
        for _ in 0..b.stage.repeat {
            total.accumulate(&b.counts);
        }
    }
    total
}

fn stage_report(built: &[BuiltStage]) -> serde_json::Value {
    let stages: Vec<_> = built
        .iter()
        .map(|b| json!({ "spec": b.stage.spec.to_string(), "repeat": b.stage.repeat, "counts": b.counts }))
        .collect();
    json!({ "stages": stages, "total": total_counts(built) })
}

fn print_stages(built: &[BuiltStage]) {
    for (i, b) in built.iter().enumerate() {
        println!("stage {}: {} x{}: {}", i + 1, b.stage.spec, b.stage.repeat, b.counts);
    }
}

fn read_state(path: &Path) -> Result<NassState> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    NassState::from_json(&text).with_context(|| format!("parsing state dump {}", path.display()))
}

fn write_state(path: &Path, state: &NassState) -> Result<()> {
    fs::write(path, state.to_json()?).with_context(|| format!("writing {}", path.display()))
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    VerifyFailed,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Encode { input, geometry, palette, out } => {
            let palette = palette.load()?;
            let image =
                read_image(&input, &geometry, &palette).with_context(|| format!("reading {}", input.display()))?;
            let state = NassState::encode(&image, &palette)?;
            write_state(&out, &state)?;
            println!("qubits {} amplitudes {} norm {:.15}", geometry.qubits(), geometry.len(), state.state().norm());
        }
        Command::Transform { state, pipeline, out, report } => {
            let mut s = read_state(&state)?;
            let built = build_stages(s.geometry(), &pipeline)?;
            for b in &built {
                for _ in 0..b.stage.repeat {
                    s.apply(&b.circuit)?;
                }
            }
            print_stages(&built);
            write_state(&out, &s)?;
            if let Some(path) = report {
                fs::write(&path, serde_json::to_string_pretty(&stage_report(&built))?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Decode { state, palette, out, ascii } => {
            let palette = palette.load()?;
            let s = read_state(&state)?;
            let image = s.decode(&palette)?;
            write_image(&out, &image, &palette, ascii).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Verify { geometry, pipeline, exhaustive_limit, samples, seed, cost_alpha, circuit } => {
            let options = VerifyOptions { exhaustive_limit, samples, seed, cost: CostModel::new(cost_alpha) };
            let specs: Vec<TransformSpec> = match &pipeline {
                Some(p) => parse_pipeline(p)?.into_iter().map(|s| s.spec).collect(),
                None => builtin_specs(&geometry),
            };
            let fixture = match &circuit {
                Some(path) => {
                    if specs.len() != 1 {
                        bail!("--circuit needs exactly one spec in --pipeline");
                    }
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let c: Circuit = serde_json::from_str(&text).context("parsing circuit")?;
                    c.validate()?;
                    Some(c)
                }
                None => None,
            };
            let mut failures = 0;
            for spec in &specs {
                let report = match &fixture {
                    Some(c) => nassgeo::verify_circuit(&geometry, spec, c, &options)?,
                    None => nassgeo::verify_spec(&geometry, spec, &options)?,
                };
                println!("{report}");
                failures += usize::from(!report.passed());
            }
            println!("{} of {} checks passed", specs.len() - failures, specs.len());
            if failures > 0 {
                return Ok(Outcome::VerifyFailed);
            }
        }
        Command::Count { geometry, pipeline, json, gates } => {
            let built = build_stages(&geometry, &pipeline)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&stage_report(&built))?);
            } else {
                print_stages(&built);
                println!("total: {}", total_counts(&built));
            }
            if gates {
                for b in &built {
                    print!("{}", b.circuit);
                }
            }
        }
        Command::Sample { geometry, seed, out } => {
            let image = test_image(&geometry, seed)?;
            write_image(&out, &image, &ColorPalette::gray256(), false)
                .with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
