//! Ball volumes, lens volumes, rigid motions and index regions.

use ballfield::geometry::{apply_motion, ball_volume, intersection_volume, region_contains_ball, Ball, EuclideanMotion, Region};
use rand::SeedableRng;

fn main() -> ballfield::Result<()> {
    for d in 1..=5 {
        println!("V_{d}(1) = {:.6}", ball_volume(d, 1.0)?);
    }

    let a = Ball::new(vec![0.0, 0.0, 0.0], 1.0)?;
    let b = Ball::new(vec![1.0, 0.0, 0.0], 1.0)?;
    println!("unit balls at distance 1 in 3-d overlap in {:.6} (5π/12)", intersection_volume(&a, &b)?);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let g = EuclideanMotion::random(3, 2.0, &mut rng);
    let (ga, gb) = (apply_motion(&g, &a)?, apply_motion(&g, &b)?);
    println!("after a random motion: {:.6}", intersection_volume(&ga, &gb)?);

    // θ negates the time coordinate
    let c = Ball::new(vec![1.5, 0.3], 0.5)?;
    println!("θ{:?} = {:?}", c.center(), c.reflect_time().center());
    let half = Region::positive_time();
    println!("in t > 0: {} (radius {} vs time {})", region_contains_ball(&half, &c), c.radius(), c.time());
    Ok(())
}
