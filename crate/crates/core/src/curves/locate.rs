use super::ParamCurve;
use crate::projgeom::Point2;

const COARSE_SAMPLES: usize = 4096;
const CANDIDATES: usize = 8;

/// Parameter of the point of `c` closest to `p`, with the distance. Dense
/// sampling picks candidate basins, golden-section search refines each.
pub fn nearest_parameter(c: &ParamCurve, p: Point2) -> (f64, f64) {
    let samples = c.sample(COARSE_SAMPLES);
    let dist: Vec<f64> = samples.iter().map(|(_, q)| q.dist(p)).collect();

    let mut minima: Vec<usize> = (0..dist.len())
        .filter(|&i| {
            let left = i == 0 || dist[i - 1] >= dist[i];
            let right = i + 1 == dist.len() || dist[i + 1] >= dist[i];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
    minima.truncate(CANDIDATES);

    let mut best = (samples[0].0, dist[0]);
    for i in minima {
        let lo = samples[i.saturating_sub(1)].0;
        let hi = samples[(i + 1).min(samples.len() - 1)].0;
        let t = golden_min(|t| c.eval(t).dist(p), lo, hi);
        for cand in [t, samples[i].0] {
            let d = c.eval(cand).dist(p);
            if d < best.1 {
                best = (cand, d);
            }
        }
    }
    snap_dyadic(c, p, best)
}

/// Replaces `t` by the coarsest dyadic rational that is at least as close,
/// so exact parameters such as 0 are recovered.
fn snap_dyadic(c: &ParamCurve, p: Point2, (t, d): (f64, f64)) -> (f64, f64) {
    let (a, b) = c.domain();
    for bits in 0..60 {
        let scale = 2f64.powi(bits);
        let s = (t * scale).round() / scale;
        if (a..=b).contains(&s) {
            let ds = c.eval(s).dist(p);
            if ds <= d {
                return (s, ds);
            }
        }
    }
    (t, d)
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
