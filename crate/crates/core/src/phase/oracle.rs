//! Slow fixed-point evaluation of frac(ξ_n) used to validate the fast paths.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{Family, PhaseFamily, FIXED_BITS, MAX_INDEX};
use crate::error::{Error, Result};

/// frac(ξ_n) with 128 fractional bits of working precision.
///
/// α is held as `floor(α·2^128)` and √n as `floor(√n·2^128)` (Newton integer
/// square root on `n·2^256`). The product carries an error below
/// `(α + √n + 1)·2^-128 < 2^-100` for `n <= 2^40`; the final conversion
/// truncates to 53 bits so the result never rounds up to 1.
pub fn frac_phase_oracle(family: &PhaseFamily, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if n > MAX_INDEX {
        return Err(Error::PrecisionRangeExceeded { n, limit: MAX_INDEX });
    }
    let scaled = match &family.0 {
        Family::SqrtLinear { alpha } => {
            let root = isqrt_refined(BigInt::from(n) << (2 * FIXED_BITS));
            (alpha.fixed_point() * root) >> FIXED_BITS
        }
        Family::Linear { alpha } => alpha.fixed_point() * BigInt::from(n),
        Family::Power { .. } => return Err(Error::UnsupportedFamily("Power")),
        Family::Custom { .. } => return Err(Error::UnsupportedFamily("Custom")),
    };
    let modulus = BigInt::one() << FIXED_BITS;
    let frac = scaled.mod_floor(&modulus);
    let top = (frac >> (FIXED_BITS - 53)).to_u64().expect("53-bit value");
    Ok(top as f64 * (-53f64).exp2())
}

/// Integer square root, checked against `s² <= x < (s+1)²`.
fn isqrt_refined(x: BigInt) -> BigInt {
    let mut s = x.sqrt();
    while &s * &s > x {
        s -= 1;
    }
    loop {
        let next = &s + 1;
        if &next * &next <= x {
            s = next;
        } else {
            break;
        }
    }
    s
}
