//! Pointwise transforms of a sampled field and the empirical
//! characteristic functional.

use ballfield::axioms::Functional;
use ballfield::geometry::Ball;
use ballfield::kernels::{KernelSpec, QuadratureConfig};
use ballfield::transform::{empirical_char_functional, sample_transformed, Transform};

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    // radius 1/sqrt(π) in 2-d gives unit variance for white noise
    let b = Ball::new(vec![0.0, 0.0], 1.0 / std::f64::consts::PI.sqrt())?;
    for phi in [Transform::Identity, Transform::Tanh, Transform::Power { p: 3 }, Transform::Clip { bound: 0.5 }] {
        let batch = sample_transformed(&KernelSpec::White, &phi, &[b.clone()], 100_000, 5, &q)?;
        let n = batch.n_samples as f64;
        let mean = batch.values.iter().sum::<f64>() / n;
        let second = batch.values.iter().map(|v| v * v).sum::<f64>() / n;
        let cf = empirical_char_functional(&batch, &[Functional::single(0, 1.0)], 100, 2)?[0];
        println!(
            "{:>10}: mean {mean:+.4} second moment {second:.4} E exp(iX) = {:.4}{:+.4}i ± {:.4}",
            phi.label(),
            cf.re,
            cf.im,
            cf.stderr
        );
    }
    Ok(())
}
