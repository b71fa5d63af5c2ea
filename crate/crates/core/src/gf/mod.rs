//! Exact arithmetic in the prime field F_p.
//!
//! `Prime` is a checked modulus and carries the raw residue arithmetic used
//! throughout the crate; `Fp` wraps a single residue together with its
//! modulus for ergonomic scalar work. Residues are always stored as their
//! canonical representative in `[0, p)`, so `-1` prints as `p - 1`.

mod poly;
pub mod hompoly;

pub use hompoly::HomPoly;
pub use poly::{irreducibles_of_degree, irreducibles_up_to, poly_factor, Poly};

use crate::error::{Error, Result};
use std::fmt;

/// Guard for `irreducibles_up_to`: refuse when p^d exceeds this.
pub const DEFAULT_ENUM_LIMIT: u128 = 1_000_000;

/// A checked prime modulus. `2` is admitted for raw arithmetic only;
/// classification entry points reject it separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Classification requires odd characteristic.
    pub fn require_odd(self) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::UnsupportedCharacteristic)
        }
    }

    pub fn same_as(self, other: Prime) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.0, other.0))
        }
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        // p < 2^31, residues < p, so the product fits in u64.
        (a * b) % self.0
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u64) -> Result<u64> {
        if a % self.0 == 0 {
            return Err(Error::Singular);
        }
        Ok(self.pow(a, self.0 - 2))
    }

    /// Inverse of 2; classification code needs halving throughout.
    pub fn half(self, a: u64) -> Result<u64> {
        self.require_odd()?;
        let inv2 = self.inv(2)?;
        Ok(self.mul(a, inv2))
    }

    pub fn elem(self, value: u64) -> Fp {
        Fp {
            value: value % self.0,
            p: self,
        }
    }
}

/// A single residue in `[0, p)` together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: Prime,
}

impl Fp {
    pub fn new(value: u64, p: Prime) -> Self {
        p.elem(value)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Fp> {
        Ok(Fp {
            value: self.p.inv(self.value)?,
            p: self.p,
        })
    }

    pub fn pow(self, exp: u64) -> Fp {
        Fp {
            value: self.p.pow(self.value, exp),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! fp_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl std::ops::$trait for Fp {
            type Output = Fp;
            fn $method(self, rhs: Fp) -> Fp {
                assert_eq!(self.p, rhs.p, "mixed moduli");
                Fp {
                    value: self.p.$op(self.value, rhs.value),
                    p: self.p,
                }
            }
        }
    };
}

fp_binop!(Add, add, add);
fp_binop!(Sub, sub, sub);
fp_binop!(Mul, mul, mul);

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}
