//! Covering numbers and the entropy integral on refined lattices.

use ballfield::continuity::{ball_grid, covering_number, entropy_integral, geometric_schedule};
use ballfield::kernels::{KernelSpec, QuadratureConfig};

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let schedule = geometric_schedule(2.0, 0.05, 64)?;
    for per_axis in [5, 9, 17] {
        let (h, grid) = ball_grid(&[0.0, 0.0], &[1.0, 1.0], per_axis, &[0.2, 0.3, 0.4])?;
        let r = entropy_integral(&KernelSpec::White, &grid, &schedule, &q)?;
        let n_half = covering_number(&KernelSpec::White, &grid, 0.5 * r.diameter, &q)?;
        println!(
            "spacing {h:.4}: {} balls, diameter {:.3}, N(diam/2) = {n_half}, J ≈ {:.4} (lower limit {})",
            r.n_points, r.diameter, r.j_estimate, r.lower_limit
        );
    }
    Ok(())
}
