use rayon::prelude::*;

use super::battery::Battery;
use crate::curves::{c1_surrogate, image_curve};
use crate::error::Result;
use crate::induced::{homeo_surrogate, induced_map_profile};
use crate::maps::PlaneMap;
use crate::projgeom::ResolutionParams;
use crate::sequences::property_c_check;
use crate::verdict::{Status, Verdict};

/// Folds per-item verdicts in battery order: the first FAIL wins and names
/// its item; otherwise the first INCONCLUSIVE; otherwise PASS.
fn first_failure(items: &[(String, Verdict)], r: &ResolutionParams) -> Verdict {
    if let Some((name, v)) = items.iter().find(|(_, v)| v.status == Status::Fail) {
        let mut out = Verdict::fail(r, name.clone()).with_reason(v.witness.clone().unwrap_or_default());
        out.residuals = v.residuals.clone();
        out.flags = v.flags.clone();
        return out;
    }
    if let Some((name, v)) = items.iter().find(|(_, v)| v.status == Status::Inconclusive) {
        return Verdict::inconclusive(r, format!("{name}: {}", v.reason.clone().unwrap_or_default()));
    }
    Verdict::pass(r)
}

fn residuals<'a>(items: &'a [(String, Verdict)], name: &'a str) -> impl Iterator<Item = f64> + 'a {
    items.iter().filter_map(move |(_, v)| v.residual(name)).filter(|x| x.is_finite())
}

/// Property (a): the image of every battery curve passes the C¹ surrogate
/// at each of its probe parameters.
pub fn check_property_a(f: &PlaneMap, b: &Battery, r: &ResolutionParams) -> Verdict {
    let jobs: Vec<(usize, f64)> = b
        .curves
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.probes.iter().map(move |&t| (i, t)))
        .collect();
    let images: Vec<_> = b.curves.iter().map(|c| image_curve(f, &c.curve)).collect();
    let results: Vec<Verdict> = jobs.par_iter().map(|&(i, t)| c1_surrogate(&images[i], t, r)).collect();
    let items: Vec<(String, Verdict)> = jobs
        .iter()
        .zip(results)
        .map(|(&(i, _), v)| (b.curves[i].name.clone(), v))
        .collect();
    let v = first_failure(&items, r);
    if v.is_pass() {
        v.with_residual("worst_tail_envelope", residuals(&items, "tail_envelope").fold(0.0, f64::max))
    } else {
        v
    }
}

/// Property (b): the induced direction map at every battery point passes the
/// homeomorphism surrogate.
pub fn check_property_b(f: &PlaneMap, b: &Battery, r: &ResolutionParams) -> Verdict {
    let results: Vec<Result<Verdict>> = b
        .points
        .par_iter()
        .map(|&p| induced_map_profile(f, p, b.directions, r).and_then(|prof| homeo_surrogate(&prof, r)))
        .collect();
    let items: Vec<(String, Verdict)> = b
        .points
        .iter()
        .zip(results)
        .map(|(p, res)| {
            let v = match res {
                Ok(v) => v,
                Err(e) => Verdict::inconclusive(r, e.to_string()),
            };
            (p.to_string(), v)
        })
        .collect();
    let v = first_failure(&items, r);
    if v.is_pass() {
        v.with_residual("min_output_gap", residuals(&items, "min_output_gap").fold(f64::INFINITY, f64::min))
    } else {
        v
    }
}

/// Property (c): delegates to [`property_c_check`] on the battery sequences.
pub fn check_property_c(f: &PlaneMap, b: &Battery, r: &ResolutionParams) -> Result<Verdict> {
    property_c_check(f, &b.sequences, r)
}
