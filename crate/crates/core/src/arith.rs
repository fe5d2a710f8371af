//! Exact numeric substrate: big rationals, prime-field scalars, binomial and
//! multinomial coefficients.
//!
//! Nothing in this crate uses floating point. Rationals are `num_rational`
//! values, always reduced, and print as `num/den` (or `num` when the
//! denominator is one).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// `C(n, k)`, zero when `k` is out of range.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(Σ parts)! / ∏ parts!`, computed as a product of binomials.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &part in parts {
        total += part;
        acc *= binomial(total, part as i64);
    }
    acc
}

/// Exact power; `x^0 = 1` for every `x`, including zero.
pub fn rational_power(base: &BigRational, exp: u32) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    Pow::pow(base, exp)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(value.into())
}

pub fn uint_to_rational(value: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(value.clone()))
}

pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let trimmed = text.trim();
    let invalid = || Error::InvalidScalar(text.to_string());
    match trimmed.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| invalid())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| invalid())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(trimmed).map_err(|_| invalid())?,
        )),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `GF(p)` for a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldScalar {
    residue: u64,
    modulus: u64,
}

impl PrimeFieldScalar {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            residue: value.rem_euclid(modulus as i64) as u64,
            modulus,
        })
    }

    /// Image of a rational under `Z_(p) -> GF(p)`; fails when `p` divides the
    /// denominator.
    pub fn from_rational(value: &BigRational, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let p = BigInt::from(modulus);
        let num = value.numer().mod_floor(&p).to_u64().expect("residue fits");
        let den = value.denom().mod_floor(&p).to_u64().expect("residue fits");
        let den = Self {
            residue: den,
            modulus,
        };
        let inv = den.inverse().ok_or(Error::DivisionByZero)?;
        Ok(Self {
            residue: num,
            modulus,
        } * inv)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self {
            residue: 1 % self.modulus,
            modulus: self.modulus,
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Fermat inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        integer(self.residue)
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus >= 1 << 32 || !is_prime(modulus) {
        return Err(Error::InvalidModulus(modulus));
    }
    Ok(())
}

impl std::ops::Add for PrimeFieldScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            residue: (self.residue + rhs.residue) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for PrimeFieldScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            residue: (self.residue + self.modulus - rhs.residue) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for PrimeFieldScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            residue: self.residue * rhs.residue % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for PrimeFieldScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            residue: (self.modulus - self.residue) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for PrimeFieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

impl FromStr for PrimeFieldScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (value, modulus) = s
            .split_once("mod")
            .ok_or_else(|| Error::InvalidScalar(s.to_string()))?;
        let modulus: u64 = modulus
            .trim()
            .parse()
            .map_err(|_| Error::InvalidScalar(s.to_string()))?;
        Self::from_rational(&parse_rational(value)?, modulus)
    }
}

/// The scalar field a subspace lives over.
///
/// Matrix entries are stored as `BigRational` in both cases; over `GF(p)` they
/// are integers in `[0, p)` and every operation reduces mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        check_modulus(p)?;
        Ok(Field::Prime(p))
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Brings an arbitrary rational into this field's storage form.
    pub fn element(&self, value: &BigRational) -> Result<BigRational> {
        match *self {
            Field::Rational => Ok(value.clone()),
            Field::Prime(p) => Ok(PrimeFieldScalar::from_rational(value, p)?.to_rational()),
        }
    }

    fn fp(&self, value: &BigRational, p: u64) -> PrimeFieldScalar {
        debug_assert!(value.is_integer() && !value.is_negative());
        PrimeFieldScalar {
            residue: value.numer().to_u64().expect("stored residue") % p,
            modulus: p,
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match *self {
            Field::Rational => a + b,
            Field::Prime(p) => (self.fp(a, p) + self.fp(b, p)).to_rational(),
        }
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match *self {
            Field::Rational => a - b,
            Field::Prime(p) => (self.fp(a, p) - self.fp(b, p)).to_rational(),
        }
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        match *self {
            Field::Rational => a * b,
            Field::Prime(p) => (self.fp(a, p) * self.fp(b, p)).to_rational(),
        }
    }

    pub fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match *self {
            Field::Rational => Ok(a.recip()),
            Field::Prime(p) => Ok(self
                .fp(a, p)
                .inverse()
                .ok_or(Error::DivisionByZero)?
                .to_rational()),
        }
    }

    /// Accepts `a`, `a/b`, and (over `GF(p)`) `r mod p`.
    pub fn parse_scalar(&self, text: &str) -> Result<BigRational> {
        match *self {
            Field::Rational => parse_rational(text),
            Field::Prime(p) => {
                if text.contains("mod") {
                    let s: PrimeFieldScalar = text.parse()?;
                    if s.modulus != p {
                        return Err(Error::InvalidScalar(text.to_string()));
                    }
                    Ok(s.to_rational())
                } else {
                    self.element(&parse_rational(text)?)
                }
            }
        }
    }

    pub fn format_scalar(&self, value: &BigRational) -> String {
        match *self {
            Field::Rational => format_rational(value),
            Field::Prime(p) => self.fp(value, p).to_string(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "gf({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "rational" || s == "q" {
            return Ok(Field::Rational);
        }
        let inner = s
            .strip_prefix("gf(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
        let p: u64 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }
}

/// Positive rationals `p_1..p_d` summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityVector {
    entries: Vec<BigRational>,
}

impl ProbabilityVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidProbability("no entries".into()));
        }
        if let Some(bad) = entries.iter().find(|p| !p.is_positive()) {
            return Err(Error::InvalidProbability(format!(
                "entry {bad} is not positive"
            )));
        }
        let total: BigRational = entries.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self { entries })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidProbability("no entries".into()));
        }
        Self::new(vec![rational(1, d as i64); d])
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `∏_ℓ p_ℓ^{sizes[ℓ]}`.
    pub fn monomial(&self, sizes: &[usize]) -> BigRational {
        self.entries
            .iter()
            .zip(sizes)
            .map(|(p, &a)| rational_power(p, a as u32))
            .product()
    }
}

impl FromStr for ProbabilityVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for ProbabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle, row by row, as an independent reference.
    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row
    }

    fn factorial(n: u64) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(30, 15), BigUint::from(155_117_520u64));
        assert_eq!(pascal_row(30)[15], BigUint::from(155_117_520u64));
        assert_eq!(binomial(3, -1), BigUint::zero());
        assert_eq!(binomial(3, 4), BigUint::zero());
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..40u64 {
            let row = pascal_row(n as usize);
            for k in 0..=n {
                assert_eq!(binomial(n, k as i64), row[k as usize]);
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[7]), BigUint::one());
        assert_eq!(multinomial(&[]), BigUint::one());
        let oracle = factorial(6) / (factorial(2) * factorial(2) * factorial(2));
        assert_eq!(oracle, BigUint::from(90u32));
        assert_eq!(multinomial(&[2, 2, 2]), oracle);
    }

    #[test]
    fn power_examples() {
        assert_eq!(rational_power(&rational(1, 2), 3), rational(1, 8));
        assert_eq!(rational_power(&rational(2, 3), 0), BigRational::one());
        assert_eq!(rational_power(&rational(1, 3), 2), rational(1, 9));
        assert_eq!(rational_power(&BigRational::zero(), 0), BigRational::one());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rational(6, 3)), "2");
        assert_eq!(format_rational(&rational(-2, 4)), "-1/2");
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rational(2, 3));
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn prime_field_ops() {
        let a = PrimeFieldScalar::new(3, 7).unwrap();
        let b = PrimeFieldScalar::new(-2, 7).unwrap();
        assert_eq!(b.residue(), 5);
        assert_eq!((a + b).residue(), 1);
        assert_eq!((a * b).residue(), 1);
        assert_eq!(a.inverse().unwrap(), b);
        assert!(PrimeFieldScalar::new(0, 7).unwrap().inverse().is_none());
        assert_eq!(a.to_string(), "3 mod 7");
        assert_eq!("3 mod 7".parse::<PrimeFieldScalar>().unwrap(), a);
        assert_eq!(
            PrimeFieldScalar::from_rational(&rational(1, 2), 7).unwrap().residue(),
            4
        );
        assert!(PrimeFieldScalar::new(1, 8).is_err());
        assert!(PrimeFieldScalar::from_rational(&rational(1, 7), 7).is_err());
    }

    #[test]
    fn field_parse_and_format() {
        assert_eq!("rational".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("GF(2)".parse::<Field>().unwrap(), Field::Prime(2));
        assert!("gf(4)".parse::<Field>().is_err());
        let f = Field::Prime(5);
        assert_eq!(f.parse_scalar("-1").unwrap(), integer(4));
        assert_eq!(f.parse_scalar("2 mod 5").unwrap(), integer(2));
        assert!(f.parse_scalar("2 mod 3").is_err());
        assert_eq!(f.format_scalar(&integer(4)), "4 mod 5");
    }

    #[test]
    fn probability_vectors() {
        let p: ProbabilityVector = "1/2,1/4,1/4".parse().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.monomial(&[1, 1, 0]), rational(1, 8));
        assert!("1/2,1/4".parse::<ProbabilityVector>().is_err());
        assert!("1,0".parse::<ProbabilityVector>().is_err());
        assert!("3/2,-1/2".parse::<ProbabilityVector>().is_err());
        assert_eq!(p.to_string(), "1/2,1/4,1/4");
        assert_eq!(ProbabilityVector::uniform(3).unwrap().entries()[0], rational(1, 3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rational() -> impl Strategy<Value = BigRational> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| rational(n, d))
        }

        proptest! {
            #[test]
            fn binomial_symmetry(n in 0u64..60, k in 0u64..60) {
                prop_assume!(k <= n);
                prop_assert_eq!(binomial(n, k as i64), binomial(n, (n - k) as i64));
            }

            #[test]
            fn binomial_row_sum(n in 0u64..64) {
                let total: BigUint = (0..=n).map(|k| binomial(n, k as i64)).sum();
                prop_assert_eq!(total, BigUint::one() << n);
            }

            #[test]
            fn multinomial_order_free(parts in proptest::collection::vec(0u64..6, 0..5)) {
                let total: u64 = parts.iter().sum();
                let oracle = factorial(total)
                    / parts.iter().map(|&p| factorial(p)).product::<BigUint>();
                let mut reversed = parts.clone();
                reversed.reverse();
                prop_assert_eq!(multinomial(&parts), oracle.clone());
                prop_assert_eq!(multinomial(&reversed), oracle);
            }

            #[test]
            fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
                prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            }

            #[test]
            fn rational_string_round_trip(a in small_rational()) {
                prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
            }
        }
    }
}
