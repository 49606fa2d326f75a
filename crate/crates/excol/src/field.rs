//! Ground-field scalars: exact rationals by default, with an optional
//! prime-field mode selected at the CLI boundary.
//!
//! A [`Scalar`] carries its field along with it. Rational scalars coerce
//! into `F_p` when combined with a prime-field scalar, so constants such
//! as `Scalar::one()` work in either mode. Mixing two different primes
//! panics; that is a caller bug, not an input error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec, String> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Q);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| format!("bad prime in field spec `{s}`"))?;
            if p < 2 || !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            return Ok(FieldSpec::Fp(p));
        }
        Err(format!("unknown field spec `{s}` (expected `q` or `fp:<p>`)"))
    }

    pub fn convert(&self, s: &Scalar) -> Scalar {
        match self {
            FieldSpec::Q => s.clone(),
            FieldSpec::Fp(p) => match s {
                Scalar::Q(r) => rational_mod_p(r, *p),
                Scalar::Fp { v, p: q } => {
                    assert_eq!(p, q, "mixed prime fields");
                    Scalar::Fp { v: *v, p: *q }
                }
            },
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_p(n: &BigInt, p: u64) -> u64 {
    let pp = BigInt::from(p);
    let mut r = n % &pp;
    if r.is_negative() {
        r += &pp;
    }
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn rational_mod_p(r: &BigRational, p: u64) -> Scalar {
    let den = mod_p(r.denom(), p);
    let den_inv = inv_mod(den, p).expect("denominator divisible by the field characteristic");
    let num = mod_p(r.numer(), p);
    Scalar::Fp { v: mulmod(num, den_inv, p), p }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // extended Euclid
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    let mut t = t % p as i128;
    if t < 0 {
        t += p as i128;
    }
    Some(t as u64)
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Q(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Q(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Scalar {
        Scalar::Q(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(n: i64, d: i64) -> Scalar {
        assert!(d != 0);
        Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rat(r: BigRational) -> Scalar {
        Scalar::Q(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    /// Coerce `self` and `rhs` into a common field.
    fn unify(&self, rhs: &Scalar) -> (Scalar, Scalar) {
        match (self, rhs) {
            (Scalar::Q(_), Scalar::Q(_)) => (self.clone(), rhs.clone()),
            (Scalar::Fp { p, .. }, Scalar::Q(r)) => (self.clone(), rational_mod_p(r, *p)),
            (Scalar::Q(r), Scalar::Fp { p, .. }) => (rational_mod_p(r, *p), rhs.clone()),
            (Scalar::Fp { p: p1, .. }, Scalar::Fp { p: p2, .. }) => {
                assert_eq!(p1, p2, "mixed prime fields");
                (self.clone(), rhs.clone())
            }
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match self.unify(rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: (a + b) % p, p },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match self.unify(rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: mulmod(a, b, p), p },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r.clone()),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(r.recip()))
                }
            }
            Scalar::Fp { v, p } => inv_mod(*v, *p).map(|v| Scalar::Fp { v, p: *p }),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv().expect("division by zero"))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Parse a rational literal like `3`, `-3`, or `3/2`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let a = Scalar::from_frac(1, 2);
        let b = Scalar::from_frac(1, 3);
        assert_eq!(a.add(&b), Scalar::from_frac(5, 6));
        assert_eq!(a.mul(&b), Scalar::from_frac(1, 6));
        assert_eq!(a.inv().unwrap(), Scalar::from_i64(2));
    }

    #[test]
    fn fp_coercion() {
        let spec = FieldSpec::parse("fp:7").unwrap();
        let a = spec.convert(&Scalar::from_frac(1, 2)); // 1/2 = 4 mod 7
        assert_eq!(a, Scalar::Fp { v: 4, p: 7 });
        assert_eq!(a.add(&Scalar::one()), Scalar::Fp { v: 5, p: 7 });
        assert_eq!(a.mul(&Scalar::from_i64(2)), Scalar::Fp { v: 1, p: 7 });
    }

    #[test]
    fn field_spec_rejects_composite() {
        assert!(FieldSpec::parse("fp:6").is_err());
        assert!(FieldSpec::parse("fp:2").is_ok());
        assert!(FieldSpec::parse("q").is_ok());
    }

    #[test]
    fn parse_rational_literals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-4").unwrap(), BigRational::from_integer((-4).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
