//! Induced maps on tangent lines, estimated by pushing straight lines
//! through a point forward and reading off the image tangent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{image_curve, line_through, tangent_at, SlopeEstimate};
use crate::error::{Error, Result};
use crate::maps::PlaneMap;
use crate::projgeom::{cyclic_order, proj_distance, CyclicOrder, Point2, ProjDir, ResolutionParams};
use crate::tail::assess_convergence;
use crate::verdict::Verdict;

/// A point of the projective tangent bundle: a base point with a line through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTPoint {
    pub p: Point2,
    pub dir: ProjDir,
}

impl PTPoint {
    pub fn new(p: Point2, dir: ProjDir) -> Self {
        PTPoint { p, dir }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirMapSample {
    pub input_dir: ProjDir,
    pub output: SlopeEstimate,
}

/// Tangent direction at `f(p)` of the image of the line through `p` with
/// direction `d`.
pub fn induced_dir(f: &PlaneMap, p: Point2, d: ProjDir, r: &ResolutionParams) -> SlopeEstimate {
    tangent_at(&image_curve(f, &line_through(p, d)), 0.0, r)
}

pub fn induced_map_profile(
    f: &PlaneMap,
    p: Point2,
    n_samples: usize,
    r: &ResolutionParams,
) -> Result<Vec<DirMapSample>> {
    if n_samples < 3 {
        return Err(Error::InvalidArgument(format!(
            "a profile needs at least 3 directions, got {n_samples}"
        )));
    }
    Ok((0..n_samples)
        .into_par_iter()
        .map(|i| {
            let input_dir = ProjDir::new(std::f64::consts::PI * i as f64 / n_samples as f64);
            DirMapSample { input_dir, output: induced_dir(f, p, input_dir, r) }
        })
        .collect())
}

fn output_dirs(profile: &[DirMapSample]) -> Result<Vec<ProjDir>> {
    profile
        .iter()
        .enumerate()
        .map(|(index, s)| s.output.dir.filter(|_| s.output.exists).ok_or(Error::MissingTangent { index }))
        .collect()
}

/// Sample-resolution test that a profile is a homeomorphism of the direction
/// circle: outputs distinct, and every consecutive triple keeps one cyclic
/// orientation.
pub fn homeo_surrogate(profile: &[DirMapSample], r: &ResolutionParams) -> Result<Verdict> {
    let out = output_dirs(profile)?;
    let n = out.len();
    if n < 3 {
        return Err(Error::InvalidArgument("profile has fewer than 3 samples".into()));
    }
    let separation = r.dir_tolerance / 10.0;
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let gap = proj_distance(out[i], out[j]);
            min_gap = min_gap.min(gap);
            if gap <= separation {
                return Ok(Verdict::fail(
                    r,
                    format!(
                        "inputs {} and {} both map to {}",
                        profile[i].input_dir, profile[j].input_dir, out[i]
                    ),
                )
                .with_residual("min_output_gap", gap));
            }
        }
    }
    let orders: Vec<CyclicOrder> = (0..n)
        .map(|i| cyclic_order(out[i], out[(i + 1) % n], out[(i + 2) % n]))
        .collect();
    let first = orders[0];
    if let Some(i) = orders.iter().position(|&o| o != first || o == CyclicOrder::Degenerate) {
        return Ok(Verdict::fail(
            r,
            format!("cyclic order flips at the triple starting with input {}", profile[i].input_dir),
        )
        .with_residual("min_output_gap", min_gap));
    }
    let orientation = if first == CyclicOrder::Ccw { "orientation:CCW" } else { "orientation:CW" };
    Ok(Verdict::pass(r).with_residual("min_output_gap", min_gap).with_flag(orientation))
}

pub fn cyclic_triple_preserved(
    f: &PlaneMap,
    p: Point2,
    [a, b, c]: [ProjDir; 3],
    r: &ResolutionParams,
) -> Result<Verdict> {
    let input = cyclic_order(a, b, c);
    if input == CyclicOrder::Degenerate {
        return Err(Error::InvalidArgument("triple directions must be distinct".into()));
    }
    let samples: Vec<DirMapSample> = [a, b, c]
        .into_iter()
        .map(|d| DirMapSample { input_dir: d, output: induced_dir(f, p, d, r) })
        .collect();
    let out = output_dirs(&samples)?;
    let image = cyclic_order(out[0], out[1], out[2]);
    let expected = if f.orientation_preserving() { input } else { input.reversed() };
    Ok(if image == expected {
        Verdict::pass(r)
    } else {
        Verdict::fail(r, format!("triple ({a}, {b}, {c}) at {p} has image order {image:?}, expected {expected:?}"))
    })
}

/// Looks for a discontinuity of the induced bundle map along a sequence
/// converging to `limit`.
pub fn bundle_continuity_probe(
    f: &PlaneMap,
    seq: &[PTPoint],
    limit: PTPoint,
    r: &ResolutionParams,
) -> Result<Verdict> {
    let dist: Vec<f64> = seq.iter().map(|e| e.p.dist(limit.p)).collect();
    if seq.len() < 3 || dist.contains(&0.0) || dist.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadWitness(
            "probe points must approach the limit point monotonically".into(),
        ));
    }
    let lim = induced_dir(f, limit.p, limit.dir, r);
    let Some(lim_dir) = lim.dir.filter(|_| lim.exists) else {
        return Ok(Verdict::inconclusive(r, "no induced direction at the limit"));
    };
    let outputs: Vec<SlopeEstimate> =
        seq.par_iter().map(|e| induced_dir(f, e.p, e.dir, r)).collect();
    if let Some(i) = outputs.iter().position(|o| !o.exists) {
        return Ok(Verdict::inconclusive(r, format!("no induced direction at probe entry {i}")));
    }
    let start = seq.len().saturating_sub(r.tail_length);
    let dev: Vec<f64> = outputs[start..]
        .iter()
        .map(|o| proj_distance(o.dir.expect("exists"), lim_dir))
        .collect();
    let fit = assess_convergence(&dev, &dist[start..], r.dir_tolerance);
    let last = outputs.last().and_then(|o| o.dir).expect("exists");
    let v = if fit.converges {
        Verdict::pass(r)
    } else {
        Verdict::fail(
            r,
            format!(
                "outputs near {} stay at {} while the limit output is {}",
                seq.last().expect("nonempty").p,
                last,
                lim_dir
            ),
        )
    };
    Ok(v.with_residual("tail_envelope", fit.tail_envelope)
        .with_residual("decay_exponent", fit.exponent.unwrap_or(f64::NAN))
        .with_residual("limit_output", lim_dir.theta())
        .with_residual("last_output", last.theta()))
}
