//! `homeo1`: verify plane maps against the C¹-homeomorphism properties,
//! probe induced direction maps, build interpolating closed curves and
//! render map galleries.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use homeo1::Point2;

use commands::{ConstructArgs, GalleryArgs, EXIT_USAGE};
use config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "homeo1", version, about = "Finite-resolution checks for plane maps preserving C1 curves")]
struct Cli {
    /// JSON run configuration; flags take precedence over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Resolution override, repeatable: tail_length, tail_ratio,
    /// dir_tolerance, slope_tolerance, h_max, h_levels.
    #[arg(long = "resolution", value_name = "KEY=VALUE", global = true, num_args = 1..)]
    resolution: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MapArg {
    /// Catalog map: identity, rot:<deg>, G, H, Hinv, Q, W, P:<n>, corner_shear.
    #[arg(long)]
    map: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a map and write the JSON report.
    Verify {
        #[command(flatten)]
        map: MapArg,
        /// `default` or a battery JSON file.
        #[arg(long)]
        battery: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the induced direction map at a point as CSV.
    Induced {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point2,
        /// Number of input directions.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and validate a closed C1 curve through a sequence CSV.
    Construct {
        /// Sequence CSV (`x,y,theta` rows and a `limit,x,y,theta` trailer).
        input: PathBuf,
        /// Number of points to interpolate.
        #[arg(long)]
        want: Option<usize>,
        /// Number of curve samples written.
        #[arg(long)]
        samples: Option<usize>,
        /// Curve CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Render the images of a grid and of a pencil of lines as SVG.
    Gallery {
        #[command(flatten)]
        map: MapArg,
        /// Half-width of the square region.
        #[arg(long)]
        region: Option<f64>,
        /// Grid lines per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Samples per line.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("`{s}` is not x,y"))?;
    let coord = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
    let p = Point2::new(coord(x)?, coord(y)?);
    if p.is_finite() {
        Ok(p)
    } else {
        Err(format!("`{s}` is not a finite point"))
    }
}

fn run(cli: Cli) -> Result<u8> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let r = config::resolution(&file, &cli.resolution)?;
    match cli.command {
        Command::Verify { map, battery, out } => {
            let f = commands::load_map(&map.map)?;
            let b = config::battery(battery.as_deref(), &file)?;
            commands::verify(&f, &b, &r, out.as_deref())
        }
        Command::Induced { map, point, samples, out } => {
            let f = commands::load_map(&map.map)?;
            let samples = samples.or(file.samples).unwrap_or(36);
            commands::induced(&f, point, samples, &r, out.as_deref())
        }
        Command::Construct { input, want, samples, out, svg } => {
            let want = want.or(file.want).unwrap_or(8);
            if want == 0 {
                return Err(anyhow!("--want must be positive"));
            }
            let args = ConstructArgs {
                input: &input,
                want,
                samples: samples.or(file.samples).unwrap_or(1024),
                out: out.as_deref(),
                svg: svg.as_deref(),
            };
            commands::construct(&args, &r)
        }
        Command::Gallery { map, region, grid, samples, out } => {
            let f = commands::load_map(&map.map)?;
            let region = region.or(file.region).unwrap_or(1.0);
            if !(region > 0.0 && region.is_finite()) {
                return Err(anyhow!("--region must be positive"));
            }
            let args = GalleryArgs {
                region,
                grid: grid.or(file.grid).unwrap_or(11).max(1),
                samples: samples.or(file.samples).unwrap_or(201),
                out: out.as_deref(),
            };
            commands::gallery(&f, &args)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
