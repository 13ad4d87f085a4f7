use crate::error::{Error, Result};

/// Solves `f(x) = target` for increasing `f` on a bracket containing the
/// root, bisecting until the bracket cannot shrink in floating point.
/// The bracket is widened geometrically up to 60 times if needed.
pub fn solve_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut widen = 0;
    while !(f(lo) <= target && f(hi) >= target) {
        if widen == 60 {
            return Err(Error::RootNotBracketed { target });
        }
        let span = (hi - lo).max(1e-300);
        if f(lo) > target {
            lo -= span;
        }
        if f(hi) < target {
            hi += span;
        }
        widen += 1;
    }
    Ok(bisect(f, target, lo, hi))
}

fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (f(hi) - target).abs() < (f(lo) - target).abs() {
        hi
    } else {
        lo
    }
}
