//! Ratios of canonical pseudo-metrics. A multiplier with a positive floor
//! stays comparable to white noise; the free field does not near the
//! diagonal, where its ratio falls like sqrt(δ).

use ballfield::axioms::metric_equivalence;
use ballfield::geometry::Ball;
use ballfield::kernels::{pseudo_metric, KernelSpec, QuadratureConfig, SpectralMultiplier};
use ballfield::rng::RandomBalls;

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let floored = KernelSpec::Spectral(SpectralMultiplier { floor: 0.25, weight: 1.0, mass: 1.0, exponent: 1.0 });
    let pts = RandomBalls::cube(2, 400, -1.0, 1.0, 0.1, 2.0, 5).generate()?;
    let pairs: Vec<(Ball, Ball)> = pts.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    for spec in [KernelSpec::free_field(), floored] {
        let r = metric_equivalence(&spec, &KernelSpec::White, &pairs, &q)?;
        println!("{spec} / white over {} random pairs: [{:.4}, {:.4}]", r.pairs, r.min_ratio, r.max_ratio);
    }

    let a = Ball::new(vec![0.0, 0.0], 0.25)?;
    for k in 1..=5 {
        let delta = 10f64.powi(-k);
        let b = Ball::new(vec![delta, 0.0], 0.25)?;
        let ratio = pseudo_metric(&KernelSpec::free_field(), &a, &b, &q)? / pseudo_metric(&KernelSpec::White, &a, &b, &q)?;
        println!("δ = {delta:.0e}: free field / white = {ratio:.4e}, / sqrt(δ) = {:.4}", ratio / delta.sqrt());
    }
    Ok(())
}
