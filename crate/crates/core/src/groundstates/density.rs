//! Probability densities on rectangular grids.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{distances, CartesianPoint};
use crate::model::ModelError;

/// Cells closer than this to a center are flagged instead of evaluated.
const CENTER_CELL_EPS: f64 = 1e-12;

/// Anything with a probability density `|Ψ|²`.
pub trait Density: Sync {
    fn density(&self, p: CartesianPoint) -> Result<f64, ModelError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x1: (f64, f64), x2: (f64, f64), nx: usize, ny: usize) -> Result<Self, ModelError> {
        let g = GridSpec {
            x1_min: x1.0,
            x1_max: x1.1,
            x2_min: x2.0,
            x2_max: x2.1,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = [self.x1_min, self.x1_max, self.x2_min, self.x2_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.x1_min >= self.x1_max || self.x2_min >= self.x2_max {
            return Err(ModelError::InvalidParams("grid bounds must be finite and ordered".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(ModelError::InvalidParams("grid needs nx, ny >= 2".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x1_max - self.x1_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.x2_max - self.x2_min) / (self.ny - 1) as f64
    }

    /// Grid node `(i, j)`; `i` runs along `x1`, `j` along `x2`. Nodes of a
    /// symmetric range are exact mirror images of each other.
    pub fn point(&self, i: usize, j: usize) -> CartesianPoint {
        let lerp = |lo: f64, hi: f64, k: usize, n: usize| {
            let m = (n - 1) as f64;
            (lo * (m - k as f64) + hi * k as f64) / m
        };
        CartesianPoint::new(
            lerp(self.x1_min, self.x1_max, i, self.nx),
            lerp(self.x2_min, self.x2_max, j, self.ny),
        )
    }
}

/// Row-major densities: row `j` holds the `nx` values at `x2 = x2_min + j dy`.
/// Flagged cells hold `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub center_flags: Vec<bool>,
    pub normalized: bool,
}

impl DensityGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx + i]
    }

    /// Riemann sum of the unflagged cells.
    pub fn riemann_sum(&self) -> f64 {
        let cell = self.spec.dx() * self.spec.dy();
        self.values
            .iter()
            .zip(&self.center_flags)
            .filter(|(_, &f)| !f)
            .map(|(v, _)| v * cell)
            .sum()
    }
}

/// Evaluates `|Ψ|²` on the grid, dividing by `norm` when given.
pub fn density_grid(
    state: &dyn Density,
    spec: &GridSpec,
    norm: Option<f64>,
) -> Result<DensityGrid, ModelError> {
    spec.validate()?;
    if let Some(n) = norm {
        if !(n.is_finite() && n > 0.0) {
            return Err(ModelError::Domain(format!("norm {n} is not a positive finite number")));
        }
    }
    let rows: Vec<Result<Vec<(f64, bool)>, ModelError>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            (0..spec.nx)
                .map(|i| {
                    let p = spec.point(i, j);
                    let (r1, r2) = distances(p);
                    if r1 < CENTER_CELL_EPS || r2 < CENTER_CELL_EPS {
                        return Ok((f64::NAN, true));
                    }
                    let d = state.density(p)?;
                    Ok((norm.map_or(d, |n| d / n), false))
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    let mut center_flags = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        for (v, f) in row? {
            values.push(v);
            center_flags.push(f);
        }
    }
    Ok(DensityGrid {
        spec: *spec,
        values,
        center_flags,
        normalized: norm.is_some(),
    })
}
