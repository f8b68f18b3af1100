use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::oracle::pow10;

/// Identifies the generator and float construction in output metadata.
pub const PRNG_ID: &str = "chacha20 (rand_chacha 0.9, seed_from_u64); u = (next_u64 >> 11) * 2^-53";

/// `size` draws from Uniform[0, 1), optionally shifted by `10^shift_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DatasetSpec {
    pub size: usize,
    pub shift_exponent: Option<i32>,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(size: usize, shift_exponent: Option<i32>, seed: u64) -> Self {
        DatasetSpec {
            size,
            shift_exponent,
            seed,
        }
    }
}

/// Deterministic in `spec` on every platform. The shift is added in double
/// precision, so the oracle sees exactly the values the algorithms see.
pub fn generate(spec: &DatasetSpec) -> Vec<f64> {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let offset = spec.shift_exponent.map(pow10);
    (0..spec.size)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * SCALE;
            match offset {
                Some(s) => u + s,
                None => u,
            }
        })
        .collect()
}

/// Writes one value per line at 17 significant digits, after `#`
/// metadata lines.
pub fn write_dataset<W: Write + ?Sized>(w: &mut W, metadata: &[String], data: &[f64]) -> io::Result<()> {
    for m in metadata {
        writeln!(w, "# {m}")?;
    }
    for x in data {
        writeln!(w, "{x:.16e}")?;
    }
    Ok(())
}

/// Parses a dataset file. Blank lines and `#` comments are skipped.
pub fn read_dataset(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| Error::domain(format!("line {}: cannot parse '{l}' as a number", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = DatasetSpec::new(3, None, 42);
        let a: Vec<u64> = generate(&spec).iter().map(|x| x.to_bits()).collect();
        let b: Vec<u64> = generate(&spec).iter().map(|x| x.to_bits()).collect();
        assert_eq!(a, b);
        assert_ne!(generate(&DatasetSpec::new(3, None, 43)), generate(&spec));
    }

    #[test]
    fn frozen_first_draws() {
        // Pinned so a generator change is caught.
        let xs = generate(&DatasetSpec::new(3, None, 42));
        let bits: Vec<u64> = xs.iter().map(|x| x.to_bits()).collect();
        assert_eq!(bits, FROZEN_SEED42);
    }

    const FROZEN_SEED42: [u64; 3] = [4602805363978991273, 4601061104681534936, 4591712652534772064];

    #[test]
    fn file_round_trip() {
        let data = generate(&DatasetSpec::new(50, Some(7), 3));
        let mut buf = Vec::new();
        write_dataset(&mut buf, &["varlab test".into()], &data).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# varlab test\n"));
        assert_eq!(read_dataset(&text).unwrap(), data);
        assert!(read_dataset("1.0\nabc\n").is_err());
    }

    #[test]
    fn shifted_range() {
        let xs = generate(&DatasetSpec::new(1000, Some(8), 7));
        assert!(xs.iter().all(|&x| (1e8..1e8 + 1.0).contains(&x)));
        let ys = generate(&DatasetSpec::new(1000, None, 7));
        assert!(ys.iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn uniform_sample_variance_near_one_twelfth() {
        // Var(s²) for U(0,1) is (μ₄ − σ⁴(n−3)/(n−1))/n with μ₄ = 1/80,
        // σ² = 1/12; three standard errors at n = 10⁴ is about 2.2e-4.
        let n = 10_000.0;
        let var_s2: f64 = (1.0 / 80.0 - (1.0 / 144.0) * (n - 3.0) / (n - 1.0)) / n;
        for seed in 0..5 {
            let xs = generate(&DatasetSpec::new(10_000, None, seed));
            let v = crate::accumulators::two_pass(&xs).unwrap().sample_variance;
            assert!((v - 1.0 / 12.0).abs() < 3.0 * var_s2.sqrt(), "seed {seed}: {v}");
        }
    }
}
