//! Quantum factorials, Gaussian binomials and the motives of `GL_d` and Grassmannians.

use super::{MotiveError, MotivicWeight};

/// `[d]_L! = (L^d - 1)(L^(d-1) - 1)...(L - 1)`; `1` for `d = 0`.
pub fn q_factorial(d: u32) -> MotivicWeight {
    (1..=d).map(MotivicWeight::quantum).product()
}

/// Gaussian binomial `[d choose k]_L`.
pub fn q_binomial(d: u32, k: u32) -> Result<MotivicWeight, MotiveError> {
    if k > d {
        return Err(MotiveError::Domain(format!("q-binomial ({d} choose {k}) with {k} > {d}")));
    }
    // q-Pascal: [n, k] = [n-1, k-1] + L^k [n-1, k]; stays polynomial throughout
    let mut row = vec![MotivicWeight::one()];
    for n in 1..=d {
        let mut next = Vec::with_capacity(n as usize + 1);
        for j in 0..=n {
            let left = if j >= 1 { row[j as usize - 1].clone() } else { MotivicWeight::zero() };
            let right = if j < n {
                &MotivicWeight::l_pow(j as i64) * &row[j as usize]
            } else {
                MotivicWeight::zero()
            };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row.swap_remove(k as usize))
}

fn binom2(n: u32) -> i64 {
    let n = n as i64;
    n * (n - 1) / 2
}

/// `[GL_d] = prod_i L^(d_i choose 2) [d_i]_L!`.
pub fn gl_motive(d: &[u32]) -> MotivicWeight {
    d.iter()
        .map(|&di| &MotivicWeight::l_pow(binom2(di)) * &q_factorial(di))
        .product()
}

/// `[Gr_{d', d}] = prod_i [d_i choose d'_i]_L`.
pub fn grassmannian_motive(dprime: &[u32], d: &[u32]) -> Result<MotivicWeight, MotiveError> {
    if dprime.len() != d.len() {
        return Err(MotiveError::Domain(format!(
            "dimension vectors of different lengths {} and {}",
            dprime.len(),
            d.len()
        )));
    }
    dprime.iter().zip(d).map(|(&k, &n)| q_binomial(n, k)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> MotivicWeight {
        MotivicWeight::lefschetz()
    }

    #[test]
    fn factorial_values() {
        assert!(q_factorial(0).is_one());
        assert_eq!(q_factorial(2), &MotivicWeight::quantum(2) * &MotivicWeight::quantum(1));
        assert_eq!(q_factorial(3).eval_int(2).unwrap(), 21.into());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(q_binomial(2, 1).unwrap(), &l() + &MotivicWeight::one());
        for d in 0..6 {
            assert!(q_binomial(d, 0).unwrap().is_one());
        }
        assert!(q_binomial(1, 2).is_err());
        // agrees with the factorial quotient
        let quotient = q_factorial(5)
            .checked_div(&(&q_factorial(2) * &q_factorial(3)))
            .unwrap();
        assert_eq!(q_binomial(5, 2).unwrap(), quotient);
    }

    #[test]
    fn binomial_symmetry() {
        for d in 0..=8 {
            for k in 0..=d {
                assert_eq!(q_binomial(d, k).unwrap(), q_binomial(d, d - k).unwrap());
            }
        }
    }

    #[test]
    fn gl_and_grassmannian() {
        let m1 = &l() - &MotivicWeight::one();
        assert_eq!(gl_motive(&[1, 1]), &m1 * &m1);
        assert!(gl_motive(&[0, 0]).is_one());
        assert_eq!(grassmannian_motive(&[1], &[2]).unwrap(), &l() + &MotivicWeight::one());
        assert!(grassmannian_motive(&[0, 1], &[2, 1]).unwrap().is_one());
        assert!(grassmannian_motive(&[3], &[2]).is_err());
        assert!(grassmannian_motive(&[1], &[2, 1]).is_err());
    }
}
