use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use homeo1::induced::induced_map_profile;
use homeo1::interpolation::{construct_closed_c1, validate_construction};
use homeo1::io::{curve_samples, read_sequence_csv, write_curve_csv, write_profile_csv, ProfileRow, SvgDocument};
use homeo1::maps::by_name;
use homeo1::verifier::classify;
use homeo1::{Error, PlaneMap, Point2, ProjDir, ResolutionParams, Status};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Output file, or standard output when no path is given.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    let mut w = sink(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn load_map(name: &str) -> Result<PlaneMap> {
    Ok(by_name(name)?)
}

pub fn verify(f: &PlaneMap, battery: &homeo1::verifier::Battery, r: &ResolutionParams, out: Option<&Path>) -> Result<u8> {
    let report = classify(f, battery, r);
    write_text(out, &report.to_json())?;
    let overall = report.overall();
    eprintln!(
        "{}: a={} b={} c={} overall={}",
        report.map,
        report.a.status.as_str(),
        report.b.status.as_str(),
        report.c.status.as_str(),
        overall.as_str()
    );
    Ok(exit_code(overall))
}

pub fn induced(f: &PlaneMap, point: Point2, samples: usize, r: &ResolutionParams, out: Option<&Path>) -> Result<u8> {
    let profile = induced_map_profile(f, point, samples, r)?;
    let rows: Vec<ProfileRow> = profile.iter().map(ProfileRow::from).collect();
    write_profile_csv(sink(out)?, &rows)?;
    Ok(EXIT_PASS)
}

pub struct ConstructArgs<'a> {
    pub input: &'a Path,
    pub want: usize,
    pub samples: usize,
    pub out: Option<&'a Path>,
    pub svg: Option<&'a Path>,
}

pub fn construct(args: &ConstructArgs, r: &ResolutionParams) -> Result<u8> {
    let file = File::open(args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let seq = read_sequence_csv(file)?;
    let cc = match construct_closed_c1(&seq, args.want, r) {
        Ok(cc) => cc,
        Err(e @ (Error::NotConvergent(_) | Error::InsufficientPoints { .. } | Error::DegenerateSequence { .. })) => {
            let code = match e {
                Error::NotConvergent(_) => "NOT_CONVERGENT",
                _ => "INSUFFICIENT_POINTS",
            };
            eprintln!("{code}: {e}");
            return Ok(EXIT_FAIL);
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = validate_construction(&cc, r);
    let curve = cc.curve()?;
    write_curve_csv(sink(args.out)?, &curve_samples(&curve, args.samples, r))?;
    if let Some(path) = args.svg {
        let mut doc = SvgDocument::new(format!("closed C1 curve through {} points", cc.ns.sources.len()));
        doc.note(format!("validation: {}", verdict.status.as_str()));
        doc.polyline("curve", curve.sample(args.samples).into_iter().map(|(_, p)| p).collect());
        for src in &cc.ns.sources {
            doc.marker(src.p);
        }
        write_text(Some(path), &doc.render())?;
    }
    eprintln!("validation: {}", verdict.status.as_str());
    if let Some(w) = &verdict.witness {
        eprintln!("witness: {w}");
    }
    Ok(exit_code(verdict.status))
}

pub struct GalleryArgs<'a> {
    pub region: f64,
    pub grid: usize,
    pub samples: usize,
    pub out: Option<&'a Path>,
}

const PENCIL_LINES: usize = 12;

/// Images of a coordinate grid over `[-region, region]²` and of a pencil of
/// lines through the origin.
pub fn gallery(f: &PlaneMap, args: &GalleryArgs) -> Result<u8> {
    let (region, n) = (args.region, args.samples.max(2));
    let ticks: Vec<f64> = (0..n).map(|i| -region + 2.0 * region * i as f64 / (n - 1) as f64).collect();
    let image = |pts: Vec<Point2>| pts.into_iter().map(|p| f.forward(p)).collect::<Vec<_>>();

    let mut doc = SvgDocument::new(format!("image of a grid and a line pencil under {}", f.name()));
    doc.note(format!("map={} region={region} grid={}", f.name(), args.grid));
    for i in 0..args.grid {
        let c = if args.grid == 1 { 0.0 } else { -region + 2.0 * region * i as f64 / (args.grid - 1) as f64 };
        doc.polyline("grid", image(ticks.iter().map(|&t| Point2::new(c, t)).collect()));
        doc.polyline("grid", image(ticks.iter().map(|&t| Point2::new(t, c)).collect()));
    }
    for k in 0..PENCIL_LINES {
        let u = ProjDir::new(std::f64::consts::PI * k as f64 / PENCIL_LINES as f64).unit();
        doc.polyline("pencil", image(ticks.iter().map(|&t| u * t).collect()));
    }
    write_text(args.out, &doc.render())?;
    Ok(EXIT_PASS)
}
