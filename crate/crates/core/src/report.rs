use serde::{Deserialize, Serialize};

/// Pointwise residuals of an identity checked on a grid of angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sup: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Size of the left-hand side on the grid, for judging relative error.
    pub scale: f64,
}

impl ResidualReport {
    pub fn new(grid: Vec<f64>, residuals: Vec<f64>, tolerance: f64, scale: f64) -> Self {
        let sup = residuals.iter().copied().fold(0.0, f64::max);
        let sup = if residuals.iter().any(|r| r.is_nan()) { f64::NAN } else { sup };
        ResidualReport { grid, residuals, sup, tolerance, pass: sup <= tolerance, scale }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,residual\n");
        for (t, r) in self.grid.iter().zip(&self.residuals) {
            s.push_str(&format!("{t:.16e},{r:.16e}\n"));
        }
        s
    }
}

/// `n` equispaced angles on `[start, start + 2π)`, shifted by half a step.
pub fn offset_grid(start: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| start + (j as f64 + 0.5) * h).collect()
}
