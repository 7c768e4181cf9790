// SPDX-License-Identifier: Apache-2.0

//! `qmb`: evaluate estimation bounds at a point, over a grid, or for a figure preset.

mod config;

use std::collections::BTreeMap;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmb_core::geometry::SingularPolicy;
use qmb_core::sweep::parse::{parse_assignment, parse_axis, parse_outputs, parse_weight};
use qmb_core::sweep::{write_rows, AngleSearch};
use qmb_core::{emit, figure_preset, run_point, run_sweep, Error, ModelId, OutputFormat, Result, SweepSpec};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "qmb", version, about = "Multiparameter quantum estimation bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a single fully specified point
    Compute(Common),
    /// Evaluate a grid spanned by one or more --axis flags
    Sweep(Common),
    /// Run a named figure preset (fig1, fig2, fig3a, fig3b, fig4, fig5)
    Preset {
        name: String,
        #[command(flatten)]
        common: Common,
        /// Evaluate fig1 at the given model constants instead of maximizing
        #[arg(long)]
        no_optimize: bool,
        /// Grid points per angle for the fig1 search
        #[arg(long)]
        grid_points: Option<usize>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// tunable_qubit, su2_qubit or su2_qutrit
    #[arg(long)]
    model: Option<String>,
    /// Fix a parameter, e.g. `--set theta=pi/4` (repeatable)
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Grid axis `name=start:stop:count[:log]` (repeatable)
    #[arg(long = "axis", value_name = "SPEC")]
    axis: Vec<String>,
    /// identity, qfim, omega, diag:v1,v2,... or full:a,b;c,d
    #[arg(long)]
    weight: Option<String>,
    /// Comma-separated subset of c_sld,c_rld,c_t,c_r,c_h,R,T,gap_h,gap_t,gap_r (or gaps, all)
    #[arg(long)]
    outputs: Option<String>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pseudo-invert a singular QFIM instead of flagging the point
    #[arg(long)]
    pseudo_inverse: bool,
    /// Worker threads
    #[arg(long, env = "QMB_THREADS")]
    threads: Option<usize>,
    /// Holevo simplex iteration budget
    #[arg(long)]
    max_iter: Option<usize>,
    /// Holevo restart rounds
    #[arg(long)]
    restarts: Option<usize>,
    /// key = value file with the same options; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidConfig(format!("`{key}` has invalid value `{v}`")))
}

/// Flag values merged over the config file.
struct Resolved {
    common: Common,
    file: ConfigFile,
}

impl Resolved {
    fn new(common: Common) -> Result<Self> {
        let file = match &common.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(Self { common, file })
    }

    fn scalar(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).map(str::to_string))
    }

    fn number<T: std::str::FromStr + Copy>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key).map(|v| parse_num(key, v)).transpose(),
        }
    }

    fn assignments(&self) -> Result<BTreeMap<String, f64>> {
        self.file
            .all("set")
            .iter()
            .chain(&self.common.set)
            .map(|s| parse_assignment(s))
            .collect()
    }

    fn axes(&self) -> Vec<String> {
        self.file
            .all("axis")
            .into_iter()
            .chain(self.common.axis.iter().cloned())
            .collect()
    }

    fn format(&self) -> Result<OutputFormat> {
        self.scalar(&self.common.format, "format")
            .map_or(Ok(OutputFormat::Csv), |f| f.parse())
    }

    fn out(&self) -> Option<PathBuf> {
        self.common
            .out
            .clone()
            .or_else(|| self.file.get("out").map(PathBuf::from))
    }

    /// Applies weight, outputs, seed and solver settings onto `spec`.
    fn apply(&self, spec: &mut SweepSpec) -> Result<()> {
        if let Some(w) = self.scalar(&self.common.weight, "weight") {
            spec.weight = parse_weight(&w)?;
        }
        if let Some(o) = self.scalar(&self.common.outputs, "outputs") {
            spec.outputs = parse_outputs(&o)?;
        }
        if let Some(s) = self.number(self.common.seed, "seed")? {
            spec.seed = s;
        }
        if let Some(t) = self.number(self.common.threads, "threads")? {
            spec.threads = Some(t);
        }
        if let Some(m) = self.number(self.common.max_iter, "max-iter")? {
            spec.options.holevo.max_iter = m;
        }
        if let Some(r) = self.number(self.common.restarts, "restarts")? {
            spec.options.holevo.restarts = r;
        }
        if self.common.pseudo_inverse || self.file.flag("pseudo-inverse")? {
            spec.options.singular = SingularPolicy::PseudoInverse;
        }
        for a in self.axes() {
            spec.set_axis(parse_axis(&a)?);
        }
        Ok(())
    }

    fn base_spec(&self) -> Result<SweepSpec> {
        let model: ModelId = self
            .scalar(&self.common.model, "model")
            .ok_or_else(|| Error::InvalidConfig("--model is required".into()))?
            .parse()?;
        let mut spec = SweepSpec::new(model);
        for (k, v) in self.assignments()? {
            spec.set_fixed(&k, v);
        }
        self.apply(&mut spec)?;
        Ok(spec)
    }
}

fn write(rows: &[qmb_core::ResultRow], r: &Resolved) -> Result<()> {
    let format = r.format()?;
    match r.out() {
        Some(path) => emit(rows, format, &path),
        None => write_rows(rows, format, BufWriter::new(io::stdout().lock()), "<stdout>"),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute(common) => {
            let r = Resolved::new(common)?;
            let spec = r.base_spec()?;
            if !spec.axes.is_empty() {
                return Err(Error::InvalidSpec("compute takes no --axis; use sweep".into()));
            }
            let row = run_point(&spec)?;
            write(&[row], &r)
        }
        Command::Sweep(common) => {
            let r = Resolved::new(common)?;
            let spec = r.base_spec()?;
            if spec.axes.is_empty() {
                return Err(Error::InvalidSpec("sweep needs at least one --axis".into()));
            }
            let rows = run_sweep(&spec)?;
            write(&rows, &r)
        }
        Command::Preset {
            name,
            common,
            no_optimize,
            grid_points,
        } => {
            let r = Resolved::new(common)?;
            let mut spec = figure_preset(&name, &r.assignments()?)?;
            r.apply(&mut spec)?;
            if no_optimize || r.file.flag("no-optimize")? {
                spec.optimize = None;
            } else if let Some(n) = r.number(grid_points, "grid-points")? {
                spec.optimize = Some(AngleSearch {
                    grid_points: n,
                    ..spec.optimize.unwrap_or_default()
                });
            }
            let rows = run_sweep(&spec)?;
            write(&rows, &r)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
