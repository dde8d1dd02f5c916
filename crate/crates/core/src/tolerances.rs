//! Numerical tolerances and resolutions shared by the global solvers.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Solutions closer than this (domain metric) are merged.
    pub dedup_radius: f64,
    /// Candidates with two entries closer than this are treated as lying
    /// on the fat diagonal and discarded.
    pub tube_radius: f64,
    /// Residual bound for reported points.
    pub residual: f64,
    /// Residual bound for interior samples of traced arcs.
    pub arc_residual: f64,
    /// Samples per period for curve searches.
    pub curve_grid: usize,
    /// Samples per axis for surface searches.
    pub surface_grid: usize,
    pub immersion_margin: f64,
    pub transversality_margin: f64,
    pub fold_margin: f64,
    pub cusp_margin: f64,
    pub gap_margin: f64,
    /// Initial and maximal predictor step of the arc tracer.
    pub step: f64,
    pub min_step: f64,
    pub max_arclength: f64,
    /// Separation at which a traced arc is declared to have collided.
    pub collision_radius: f64,
    /// Separation of the seeds placed next to a collision point.
    pub seed_separation: f64,
    /// How close a collision endpoint must come to its lower-level point.
    pub endpoint_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            dedup_radius: 1e-6,
            tube_radius: 1e-3,
            residual: 1e-10,
            arc_residual: 1e-8,
            curve_grid: 2048,
            surface_grid: 96,
            immersion_margin: 1e-3,
            transversality_margin: 1e-3,
            fold_margin: 1e-3,
            cusp_margin: 1e-3,
            gap_margin: 1e-3,
            step: 1e-2,
            min_step: 1e-7,
            max_arclength: 200.0,
            collision_radius: 1e-2,
            seed_separation: 2e-2,
            endpoint_match: 5e-2,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 17] = [
        "dedup_radius",
        "tube_radius",
        "residual",
        "arc_residual",
        "curve_grid",
        "surface_grid",
        "immersion_margin",
        "transversality_margin",
        "fold_margin",
        "cusp_margin",
        "gap_margin",
        "step",
        "min_step",
        "max_arclength",
        "collision_radius",
        "seed_separation",
        "endpoint_match",
    ];

    /// Override one field by name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = || -> Result<f64> {
            let v = crate::poly::parse_rational(value)
                .map(|q| crate::poly::rat_to_f64(&q))
                .or_else(|| value.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("tolerance `{key}`: not a number: {value}")))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Config(format!("tolerance `{key}` must be positive")))
            }
        };
        let int = || -> Result<usize> {
            value
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 8)
                .ok_or_else(|| Error::Config(format!("tolerance `{key}` must be an integer >= 8")))
        };
        match key {
            "dedup_radius" => self.dedup_radius = float()?,
            "tube_radius" => self.tube_radius = float()?,
            "residual" => self.residual = float()?,
            "arc_residual" => self.arc_residual = float()?,
            "curve_grid" => self.curve_grid = int()?,
            "surface_grid" => self.surface_grid = int()?,
            "immersion_margin" => self.immersion_margin = float()?,
            "transversality_margin" => self.transversality_margin = float()?,
            "fold_margin" => self.fold_margin = float()?,
            "cusp_margin" => self.cusp_margin = float()?,
            "gap_margin" => self.gap_margin = float()?,
            "step" => self.step = float()?,
            "min_step" => self.min_step = float()?,
            "max_arclength" => self.max_arclength = float()?,
            "collision_radius" => self.collision_radius = float()?,
            "seed_separation" => self.seed_separation = float()?,
            "endpoint_match" => self.endpoint_match = float()?,
            _ => return Err(Error::Config(format!("unknown tolerance `{key}`"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.set("tube_radius", "1/500").unwrap();
        assert_eq!(t.tube_radius, 0.002);
        t.set("curve_grid", "4096").unwrap();
        assert_eq!(t.curve_grid, 4096);
        assert!(t.set("bogus", "1").is_err());
        assert!(t.set("residual", "-1").is_err());
        for key in Tolerances::KEYS {
            let v = if key.ends_with("grid") { "64" } else { "0.5" };
            t.set(key, v).unwrap();
        }
    }
}
