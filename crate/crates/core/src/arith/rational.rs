use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. `BigRational` keeps numerator and denominator coprime
/// with a positive denominator, and zero as `0/1`.
pub type RationalScalar = BigRational;

/// p-adic valuation of a rational: a finite integer, or `Infinity` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// The prime `p` fixing the valuation on ℚ; the local ring is ℤ localized at `p`
/// and `p` itself is the uniformizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationContext {
    prime: u64,
    prime_big: BigInt,
}

impl ValuationContext {
    pub fn new(prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        Ok(ValuationContext {
            prime,
            prime_big: BigInt::from(prime),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn prime_big(&self) -> &BigInt {
        &self.prime_big
    }

    fn int_valuation(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let mut v = 0;
        let mut m = n.clone();
        loop {
            let (q, r) = m.div_rem(&self.prime_big);
            if !r.is_zero() {
                return v;
            }
            m = q;
            v += 1;
        }
    }

    pub fn valuation(&self, x: &RationalScalar) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinity;
        }
        Valuation::Finite(self.int_valuation(x.numer()) - self.int_valuation(x.denom()))
    }

    /// Valuation of a value known to be nonzero.
    pub fn val(&self, x: &RationalScalar) -> i64 {
        self.valuation(x)
            .finite()
            .expect("valuation of zero requested")
    }

    /// `p^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> RationalScalar {
        let base = num_traits::pow(self.prime_big.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }

    /// The unit `u` with `x = p^v(x) · u`.
    pub fn unit_part(&self, x: &RationalScalar) -> RationalScalar {
        x / self.pow(self.val(x))
    }

    pub fn is_integral(&self, x: &RationalScalar) -> bool {
        self.valuation(x) >= Valuation::Finite(0)
    }

    /// Canonical representative of the coset `x + p^a ℤ_(p)`.
    ///
    /// The representative has the form `m / p^e` with `0 <= m < p^(a+e)`, where
    /// `e = max(0, -a, -v(x))`. Any larger `e` yields the same rational.
    pub fn residue(&self, x: &RationalScalar, a: i64) -> RationalScalar {
        if x.is_zero() {
            return RationalScalar::zero();
        }
        let e = 0.max(-a).max(-self.val(x));
        let y = x * self.pow(e);
        let modulus = num_traits::pow(self.prime_big.clone(), (a + e) as usize);
        if modulus.is_one() {
            return RationalScalar::zero();
        }
        // y = num/den with den prime to p, so den is invertible mod p^(a+e).
        let den_inv = mod_inverse(y.denom(), &modulus);
        let m = (y.numer() * den_inv).mod_floor(&modulus);
        BigRational::new(m, num_traits::pow(self.prime_big.clone(), e as usize))
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one() || g.gcd == -BigInt::one());
    (g.x * g.gcd.signum()).mod_floor(m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parses `"a"` or `"a/b"` (optional sign, decimal digits).
pub fn parse_rational(s: &str) -> Result<RationalScalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn format_rational(x: &RationalScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_from_i64(n: i64) -> RationalScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_from_frac(n: i64, d: i64) -> RationalScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &RationalScalar) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
