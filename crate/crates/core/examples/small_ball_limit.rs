//! Shrinking balls: the free-field kernel approaches the Yukawa Green
//! function while white noise decorrelates.

use ballfield::geometry::Ball;
use ballfield::kernels::{eval_kernel_detailed, KernelSpec, QuadratureConfig};

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let green = (-1.0f64).exp() / (4.0 * std::f64::consts::PI);
    println!("{:>10} {:>14} {:>12} {:>10}", "r", "free field", "rel error", "white");
    for k in 1..=6 {
        let r = 0.5f64.powi(k);
        let x = Ball::new(vec![0.0, 0.0, 0.0], r)?;
        let y = Ball::new(vec![1.0, 0.0, 0.0], r)?;
        let ff = eval_kernel_detailed(&KernelSpec::free_field(), &x, &y, &q)?;
        let w = eval_kernel_detailed(&KernelSpec::White, &x, &y, &q)?;
        println!("{r:>10.6} {:>14.10} {:>12.3e} {:>10}", ff.value, (ff.value - green).abs() / green, w.value);
    }
    println!("limit e^-1/(4π) = {green:.10}");
    Ok(())
}
