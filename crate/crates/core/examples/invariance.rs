//! Euclidean invariance of the kernels and the pushforward law.

use ballfield::axioms::invariance_check;
use ballfield::geometry::{apply_motion, Ball, EuclideanMotion};
use ballfield::kernels::{kernel_matrix, pushforward_kernel, KernelSpec, QuadratureConfig};
use ballfield::rng::RandomBalls;
use rand::SeedableRng;

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let balls = RandomBalls::cube(3, 8, -1.0, 1.0, 0.1, 0.5, 2).generate()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let motions: Vec<EuclideanMotion> = (0..10).map(|_| EuclideanMotion::random(3, 2.0, &mut rng)).collect();
    for spec in [KernelSpec::W, KernelSpec::White, KernelSpec::free_field()] {
        let r = invariance_check(&spec, &motions, &balls, &q)?;
        println!("{spec}: max |K(g·b, g·b') − K(b, b')| = {:.2e} over {} pairs", r.max_deviation, r.pairs);
    }

    let scale = |b: &Ball| Ball::new(b.center().iter().map(|x| 2.0 * x).collect(), 2.0 * b.radius()).unwrap();
    let pushed = kernel_matrix(&pushforward_kernel(&KernelSpec::White, scale), &balls, &q)?;
    let images: Vec<Ball> = balls.iter().map(scale).collect();
    let direct = kernel_matrix(&KernelSpec::White, &images, &q)?;
    println!("pushforward equals kernel on images: {}", pushed.entries() == direct.entries());
    let moved: Vec<Ball> = balls.iter().map(|b| apply_motion(&motions[0], b).unwrap()).collect();
    println!("moved configuration has {} balls", moved.len());
    Ok(())
}
