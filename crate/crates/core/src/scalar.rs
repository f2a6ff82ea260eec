//! Exact integer scalars.
//!
//! Every matrix routine in this crate is generic over [`Scalar`]. The trait is
//! implemented for [`BigInt`] (the default, and the only choice that never
//! overflows) and for the fixed-width `i64` and `i128`, which are faster on
//! inputs known to stay small. Fixed-width arithmetic is overflow-checked: an
//! overflowing step panics instead of wrapping.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Ord
    + std::hash::Hash
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    /// Number of bits in `|self|` (zero has bit length 0).
    fn bit_len(&self) -> u64;

    fn to_bigint(&self) -> BigInt;

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar type")
    }

    fn add_exact(&self, other: &Self) -> Self {
        self.checked_add(other)
            .expect("integer overflow in addition")
    }

    fn sub_exact(&self, other: &Self) -> Self {
        self.checked_sub(other)
            .expect("integer overflow in subtraction")
    }

    fn mul_exact(&self, other: &Self) -> Self {
        self.checked_mul(other)
            .expect("integer overflow in multiplication")
    }

    /// `self - q * other`, the elementary reduction step.
    fn sub_mul_exact(&self, q: &Self, other: &Self) -> Self {
        self.sub_exact(&q.mul_exact(other))
    }
}

impl Scalar for BigInt {
    fn bit_len(&self) -> u64 {
        self.bits()
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn add_exact(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_exact(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_exact(&self, other: &Self) -> Self {
        self * other
    }

    fn sub_mul_exact(&self, q: &Self, other: &Self) -> Self {
        self - q * other
    }
}

macro_rules! impl_fixed_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                fn bit_len(&self) -> u64 {
                    u64::from(<$t>::BITS - self.unsigned_abs().leading_zeros())
                }

                fn to_bigint(&self) -> BigInt {
                    BigInt::from(*self)
                }
            }
        )*
    };
}

impl_fixed_scalar!(i64, i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths_agree_across_types() {
        for v in [-300i64, -1, 0, 1, 2, 255, 256, i64::MAX] {
            assert_eq!(v.bit_len(), BigInt::from(v).bits(), "{v}");
            assert_eq!((v as i128).bit_len(), BigInt::from(v).bits(), "{v}");
        }
        assert_eq!(i64::MIN.bit_len(), 64);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn fixed_width_overflow_panics() {
        let _ = i64::MAX.add_exact(&1);
    }
}
