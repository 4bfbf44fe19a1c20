//! Covariance kernels on a small ball configuration.

use ballfield::kernels::{eval_kernel_detailed, kernel_matrix, KernelSpec, QuadratureConfig, SpectralMultiplier};
use ballfield::rng::RandomBalls;

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let balls = RandomBalls::cube(2, 5, -1.0, 1.0, 0.1, 0.5, 7).generate()?;
    let specs = [
        KernelSpec::W,
        KernelSpec::White,
        KernelSpec::FreeField { mass: 1.0 },
        KernelSpec::Spectral(SpectralMultiplier { floor: 0.2, weight: 1.0, mass: 1.0, exponent: 1.0 }),
    ];
    for spec in &specs {
        let m = kernel_matrix(spec, &balls, &q)?;
        println!("{spec}: min eigenvalue {:.3e}, max error estimate {:.1e}", m.min_eigenvalue(), m.max_error_estimate);
        for i in 0..m.order() {
            let row: Vec<String> = (0..m.order()).map(|j| format!("{:9.4}", m.get(i, j))).collect();
            println!("  {}", row.join(" "));
        }
    }

    let e = eval_kernel_detailed(&specs[2], &balls[0], &balls[1], &q)?;
    println!(
        "single entry {:.12} ± {:.1e} (truncated at ρ = {:?}, tail {:.1e})",
        e.value, e.error_estimate, e.truncation_radius, e.tail_bound
    );
    Ok(())
}
