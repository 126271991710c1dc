use num_bigint::BigInt;

use crate::combinatorics::{p_rho, Partition};
use crate::error::invalid;
use crate::models::ThomaParameter;
use crate::rational::Q;
use crate::Result;

/// t(k, ω) = Σ α_i^k + (−1)^{k−1} Σ β_i^k, with t(1, ω) = 1.
pub fn thoma_moment(k: usize, omega: &ThomaParameter) -> Q {
    omega.moment(k)
}

/// t(ρ, ω) = ∏ t(ρ_i, ω).
pub fn t_rho(rho: &Partition, omega: &ThomaParameter) -> Q {
    omega.moment_rho(rho)
}

/// t(ρ, Ω(λ)) = p_ρ(λ) / |λ|^|ρ|.
pub fn partition_density(rho: &Partition, lambda: &Partition) -> Result<Q> {
    let n = lambda.size();
    if n == 0 {
        return invalid("density in the empty partition");
    }
    Ok(p_rho(rho, lambda) / Q::from_integer(BigInt::from(n).pow(rho.size() as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::p_k;
    use crate::models::embed_partition;
    use crate::rational::q;

    #[test]
    fn moment_of_embedding() {
        for s in ["5,4,2", "1", "3,3,1", "6,2,2,1,1"] {
            let lambda: Partition = s.parse().unwrap();
            let n = Q::from_integer(BigInt::from(lambda.size()));
            let w = embed_partition(&lambda).unwrap();
            for k in 1..6 {
                let expect = p_k(k, &lambda) / crate::rational::pow_q(&n, k as i32);
                assert_eq!(thoma_moment(k, &w), expect);
            }
            let rho: Partition = "3,2".parse().unwrap();
            assert_eq!(partition_density(&rho, &lambda).unwrap(), t_rho(&rho, &w));
        }
    }

    #[test]
    fn small_values() {
        let w = ThomaParameter::new(vec![q(1, 2)], vec![q(1, 3)]).unwrap();
        assert_eq!(thoma_moment(2, &w), q(5, 36));
        assert_eq!(thoma_moment(1, &ThomaParameter::plancherel()), q(1, 1));
    }
}
