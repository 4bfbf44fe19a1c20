//! Reflection positivity three ways: kernel matrix, Gaussian closed form
//! and Monte Carlo for a transformed field.

use ballfield::axioms::{rp_gaussian_check, rp_kernel_check, rp_monte_carlo_check, with_reflections, Functional};
use ballfield::gaussian::sample;
use ballfield::kernels::{KernelSpec, QuadratureConfig};
use ballfield::rng::RandomBalls;
use ballfield::transform::{apply_transform, Transform};

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let spec = KernelSpec::free_field();
    let balls = RandomBalls { dim: 2, count: 5, lo: vec![0.6, -1.0], hi: vec![2.0, 1.0], radius_min: 0.1, radius_max: 0.5, seed: 3 }
        .generate()?;
    let functionals = vec![
        Functional::new(vec![(0, 1.0), (1, -0.5)]),
        Functional::new(vec![(2, 0.8), (3, 0.4)]),
        Functional::single(4, 1.2),
    ];

    let k = rp_kernel_check(&spec, &balls, &q)?;
    println!("kernel: min eig {:.3e} tol {:.1e} pass {}", k.min_eigenvalue, k.tolerance, k.pass);
    let g = rp_gaussian_check(&spec, &balls, &functionals, &q)?;
    println!("gaussian: min eig {:.3e} tol {:.1e} pass {}", g.min_eigenvalue, g.tolerance, g.pass);

    let batch = sample(&spec, &with_reflections(&balls), 20_000, 9, &q)?;
    let tanh = apply_transform(&Transform::Tanh, &batch)?;
    let mc = rp_monte_carlo_check(&tanh, &functionals, 200, 1)?;
    println!("tanh monte carlo: min eig {:.3e} se {:.1e} pass {}", mc.min_eigenvalue, mc.stderr.unwrap_or(0.0), mc.pass);
    Ok(())
}
