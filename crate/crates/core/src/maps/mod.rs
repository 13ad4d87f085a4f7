//! Invertible plane maps with exact or numerically inverted evaluators.

pub mod bumps;
mod catalog;
pub mod roots;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::projgeom::Point2;

pub use catalog::{
    corner_shear, identity, map_g, map_h, map_hinv, map_p, map_q, map_w, p_support_balls, q_inverse,
    rho, rotation, MAX_P_BUMPS,
};

pub type PointFn = Arc<dyn Fn(Point2) -> Point2 + Send + Sync>;

#[derive(Clone)]
pub struct PlaneMap {
    name: String,
    forward: PointFn,
    inverse: PointFn,
    known_nondiff_points: Vec<Point2>,
    orientation_preserving: bool,
}

impl fmt::Debug for PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneMap")
            .field("name", &self.name)
            .field("known_nondiff_points", &self.known_nondiff_points)
            .field("orientation_preserving", &self.orientation_preserving)
            .finish()
    }
}

impl PlaneMap {
    pub fn new(
        name: impl Into<String>,
        forward: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
        inverse: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
    ) -> Self {
        PlaneMap {
            name: name.into(),
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            known_nondiff_points: Vec::new(),
            orientation_preserving: true,
        }
    }

    pub fn with_nondiff_points(mut self, points: Vec<Point2>) -> Self {
        self.known_nondiff_points = points;
        self
    }

    pub fn with_orientation(mut self, preserving: bool) -> Self {
        self.orientation_preserving = preserving;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn forward(&self, p: Point2) -> Point2 {
        (self.forward)(p)
    }

    pub fn inverse(&self, p: Point2) -> Point2 {
        (self.inverse)(p)
    }

    pub fn known_nondiff_points(&self) -> &[Point2] {
        &self.known_nondiff_points
    }

    pub fn orientation_preserving(&self) -> bool {
        self.orientation_preserving
    }
}

/// `f ∘ g`: apply `g`, then `f`.
pub fn compose(f: &PlaneMap, g: &PlaneMap) -> PlaneMap {
    let (f1, g1, f2, g2) = (f.clone(), g.clone(), f.clone(), g.clone());
    let mut points: Vec<Point2> = g.known_nondiff_points.clone();
    points.extend(f.known_nondiff_points.iter().map(|&p| g.inverse(p)));
    PlaneMap::new(
        format!("{}∘{}", f.name, g.name),
        move |p| f1.forward(g1.forward(p)),
        move |p| g2.inverse(f2.inverse(p)),
    )
    .with_nondiff_points(points)
    .with_orientation(f.orientation_preserving == g.orientation_preserving)
}

pub fn invert(f: &PlaneMap) -> PlaneMap {
    PlaneMap {
        name: format!("inv({})", f.name),
        forward: f.inverse.clone(),
        inverse: f.forward.clone(),
        known_nondiff_points: f.known_nondiff_points.iter().map(|&p| f.forward(p)).collect(),
        orientation_preserving: f.orientation_preserving,
    }
}

/// Resolves a catalog name: `identity`, `rot:<deg>`, `G`, `H`, `Hinv`, `Q`,
/// `W`, `P:<n_max>`, `corner_shear`.
pub fn by_name(name: &str) -> Result<PlaneMap> {
    let unknown = || Error::UnknownMap(name.to_string());
    match name {
        "identity" => Ok(identity()),
        "G" => Ok(map_g()),
        "H" => Ok(map_h()),
        "Hinv" => Ok(map_hinv()),
        "Q" => map_q(),
        "W" => Ok(map_w()),
        "corner_shear" => Ok(corner_shear()),
        _ => {
            if let Some(deg) = name.strip_prefix("rot:") {
                let deg: f64 = deg.parse().map_err(|_| unknown())?;
                if !deg.is_finite() {
                    return Err(unknown());
                }
                Ok(rotation(deg))
            } else if let Some(n) = name.strip_prefix("P:") {
                let n: u32 = n.parse().map_err(|_| unknown())?;
                map_p(n)
            } else {
                Err(unknown())
            }
        }
    }
}

#[cfg(test)]
mod tests;
