//! Coefficients of `ln Z(λ) = Σ_n λ^n ζ(n)/n`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combination::ZetaCombination;
use crate::composition::Composition;

/// Entries `1..=nmax`; the first is the formal `ζ(1)/1` and carries the
/// regularized flag.
pub fn lnz_coefficients(nmax: u32) -> Vec<ZetaCombination> {
    (1..=nmax)
        .map(|n| {
            ZetaCombination::zeta(Composition::single(n))
                .scale(&BigRational::new(BigInt::from(1), BigInt::from(n)))
        })
        .collect()
}
