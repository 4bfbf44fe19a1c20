//! Draw a Gaussian batch, compare its covariance with the kernel and
//! round-trip it through the binary container.

use ballfield::gaussian::{empirical_covariance, sample};
use ballfield::io::{read_batch_bin, write_batch_bin};
use ballfield::kernels::{kernel_matrix, KernelSpec, QuadratureConfig};
use ballfield::rng::RandomBalls;

fn main() -> ballfield::Result<()> {
    let q = QuadratureConfig::default();
    let spec = KernelSpec::free_field();
    let balls = RandomBalls::cube(2, 4, -1.0, 1.0, 0.2, 0.5, 1).generate()?;
    let batch = sample(&spec, &balls, 50_000, 42, &q)?;
    let c = kernel_matrix(&spec, &balls, &q)?;
    let e = empirical_covariance(&batch)?;
    for i in 0..4 {
        for j in 0..=i {
            println!("C[{i},{j}] kernel {:.5} sample {:.5}", c.get(i, j), e.get(i, j));
        }
    }

    let mut buf = Vec::new();
    write_batch_bin(&mut buf, &batch)?;
    let (header, values) = read_batch_bin(&mut buf.as_slice())?;
    println!("{} bytes, values identical after reload: {}", buf.len(), values == batch.values);
    println!("header: {header:?}");
    println!("rng: {}", batch.rng_algorithm);
    Ok(())
}
