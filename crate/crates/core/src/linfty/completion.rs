//! Cyclic completion `L + L*[-3]` of an algebra concentrated in degrees 0..2.

use super::{koszul_antisym_sign, CyclicLInfty, GradedBasis, LInftyError, Q};
use num_traits::One;
use std::collections::BTreeMap;

/// Builds the completion: natural pairing between `L` and `L*`, products on
/// `L`-inputs unchanged, zero on two or more dual inputs, and products with
/// one dual input determined by total graded antisymmetry of
/// `kappa(mu_k(a_1..a_k), a_{k+1})`.
///
/// The basis of the result lists `L` first, then the duals `b*` in the same
/// order; `b*` has degree `3 - |b|`.
pub fn cyclic_completion(alg: &CyclicLInfty) -> Result<CyclicLInfty, LInftyError> {
    if alg.has_pairing() || alg.max_degree() > 2 {
        return Err(LInftyError::NotCompletable);
    }
    let n = alg.dim() as u32;
    let mut basis = alg.basis.clone();
    let mut extra = GradedBasis::new();
    for i in 0..alg.dim() {
        extra.push(
            format!("{}*", alg.basis.labels[i]),
            3 - alg.basis.degrees[i],
            alg.basis.bigrading[i].map(|(s, t)| (t, s)),
        );
    }
    basis.labels.extend(extra.labels);
    basis.degrees.extend(extra.degrees);
    basis.bigrading.extend(extra.bigrading);

    let mut out = CyclicLInfty::new(basis, alg.k_max());
    let degrees = out.basis.degrees.clone();
    for k in 1..=alg.k_max() {
        for (key, val) in alg.products(k) {
            for (&c, v) in val {
                out.add_product(key, c, v.clone())?;
                // T(key, c*) = v; move one input to the last slot and c* into the inputs
                let full: Vec<u32> = key.iter().copied().chain(std::iter::once(n + c)).collect();
                let full_deg: Vec<u8> = full.iter().map(|&b| degrees[b as usize]).collect();
                for j in 0..k {
                    if j > 0 && key[j] == key[j - 1] {
                        continue;
                    }
                    let mut perm: Vec<usize> = (0..=k).filter(|&i| i != j).collect();
                    perm.push(j);
                    let sign = koszul_antisym_sign(&full_deg, &perm);
                    let inputs: Vec<u32> = perm[..k].iter().map(|&i| full[i]).collect();
                    out.add_product(&inputs, n + key[j], v * Q::from_integer(sign.into()))?;
                }
            }
        }
    }
    let mut pairing = BTreeMap::new();
    for b in 0..n {
        pairing.insert((b, n + b), Q::one());
        pairing.insert((n + b, b), Q::one());
    }
    out.set_pairing(pairing);
    Ok(out)
}
