//! Binary PGM (P5) rendering of density grids.
//!
//! The palette runs from white at zero density to black at the grid
//! maximum. Image row 0 is `z_min`.

use crate::wavefield::FieldGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mapping {
    /// `g = (v/v_max)^(1/gamma)`
    Linear,
    /// `g = ln(1 + (v/v_max)·10^gamma) / ln(1 + 10^gamma)`
    Log,
}

pub fn render_pgm(grid: &FieldGrid<f64>, mapping: Mapping, gamma: f64) -> Vec<u8> {
    let spec = grid.spec;
    let header = format!("P5\n{} {}\n255\n", spec.nx, spec.nz);
    let mut out = Vec::with_capacity(header.len() + grid.samples.len());
    out.extend_from_slice(header.as_bytes());
    let vmax = grid.max();
    let log_scale = 10f64.powf(gamma);
    let log_norm = log_scale.ln_1p();
    out.extend(grid.samples.iter().map(|&v| {
        let g = if vmax > 0.0 {
            let r = (v / vmax).clamp(0.0, 1.0);
            match mapping {
                Mapping::Linear => r.powf(1.0 / gamma),
                Mapping::Log => (r * log_scale).ln_1p() / log_norm,
            }
        } else {
            0.0
        };
        let g = if g.is_finite() { g.clamp(0.0, 1.0) } else { 0.0 };
        255 - (g * 255.0).round() as u8
    }));
    out
}
