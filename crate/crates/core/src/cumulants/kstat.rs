//! Unbiased k-statistics of a sample.

/// Mean and central moment sums m₂, m₃ (divided by N).
fn central(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    (mean, m2 / n, m3 / n)
}

/// (k₁, k₂, k₃) with k₂ = N/(N−1)·m₂ and k₃ = N²/((N−1)(N−2))·m₃.
pub fn k_statistics(xs: &[f64]) -> [f64; 3] {
    let n = xs.len() as f64;
    let (mean, m2, m3) = central(xs);
    [mean, n / (n - 1.0) * m2, n * n / ((n - 1.0) * (n - 2.0)) * m3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sample() {
        let k = k_statistics(&[0.0, 1.0, 1.0, 2.0, 2.0, 3.0]);
        assert!((k[0] - 1.5).abs() < 1e-15);
        // m₂ = 11/12, k₂ = 6/5 · 11/12 = 11/10
        assert!((k[1] - 1.1).abs() < 1e-14);
        assert!(k[2].abs() < 1e-14);
    }
}
