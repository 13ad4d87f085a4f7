//! Finitary stand-ins for limits of deviation sequences.
//!
//! A deviation sequence `d_j` (for instance the angle between a chord and a
//! target line) measured at scales `s_j` shrinking to zero is judged
//! convergent when its upper envelope is already below tolerance over the
//! last quarter of the tail, or when the envelope decays at least like a
//! fixed power `s^MIN_DECAY_EXPONENT` of the scale.

/// Smallest log-log slope of envelope against scale accepted as decay.
pub const MIN_DECAY_EXPONENT: f64 = 0.5;

/// Suffix maxima: `out[j] = max_{i ≥ j} d[i]`.
pub fn upper_envelope(d: &[f64]) -> Vec<f64> {
    let mut out = d.to_vec();
    for j in (0..out.len().saturating_sub(1)).rev() {
        out[j] = out[j].max(out[j + 1]);
    }
    out
}

/// Running minima: `out[j] = min_{i ≤ j} d[i]`, the closest approach so far.
pub fn running_min(d: &[f64]) -> Vec<f64> {
    let mut out = d.to_vec();
    for j in 1..out.len() {
        out[j] = out[j].min(out[j - 1]);
    }
    out
}

/// Index where the last quarter of a sequence of length `n` begins.
pub fn last_quarter_start(n: usize) -> usize {
    (3 * n) / 4
}

/// Least-squares slope of `ln(envelope)` against `ln(scale)`, using the
/// entries where both are positive. `None` with fewer than three usable
/// entries or no spread in scale.
pub fn decay_exponent(envelope: &[f64], scale: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = envelope
        .iter()
        .zip(scale)
        .filter(|(e, s)| **e > 0.0 && **s > 0.0 && e.is_finite() && s.is_finite())
        .map(|(e, s)| (s.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-300 {
        return None;
    }
    Some(sxy / sxx)
}

/// Summary of a deviation tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// Upper envelope at the start of the last quarter.
    pub tail_envelope: f64,
    /// Decay exponent of the upper envelope, when defined.
    pub exponent: Option<f64>,
    pub converges: bool,
}

/// Applies the convergence rule to `deviations` measured at `scales`.
pub fn assess_convergence(deviations: &[f64], scales: &[f64], tolerance: f64) -> TailFit {
    let env = upper_envelope(deviations);
    let tail_envelope = env.get(last_quarter_start(env.len())).copied().unwrap_or(f64::INFINITY);
    let exponent = decay_exponent(&env, scales);
    let decays = exponent.is_some_and(|e| e >= MIN_DECAY_EXPONENT);
    TailFit {
        tail_envelope,
        exponent,
        converges: tail_envelope < tolerance || decays,
    }
}
