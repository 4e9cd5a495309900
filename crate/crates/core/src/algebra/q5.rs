//! Exact scalars of the real quadratic field `Q(sqrt5)`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"-3"`, `"7/12"`, `"-0.125"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let s = src.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(joined.parse::<BigInt>().ok()?);
    let scale = exp - frac.len() as i32;
    let ten = int(10);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// The rational with the shortest decimal expansion that round-trips to `x`.
/// Returns `None` for non-finite input.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x:e}"))
}

/// Square root of a non-negative rational when it is itself rational.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// `rat + irr * sqrt5` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q5Scalar {
    pub rat: Rational,
    pub irr: Rational,
}

impl Q5Scalar {
    pub fn new(rat: Rational, irr: Rational) -> Self {
        Q5Scalar { rat, irr }
    }

    pub fn from_rational(rat: Rational) -> Self {
        Q5Scalar { rat, irr: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `sqrt5` itself.
    pub fn sqrt5() -> Self {
        Q5Scalar { rat: Rational::zero(), irr: Rational::one() }
    }

    /// The golden ratio `(1 + sqrt5) / 2`.
    pub fn tau() -> Self {
        Q5Scalar { rat: ratio(1, 2), irr: ratio(1, 2) }
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// Galois conjugate `rat - irr * sqrt5`.
    pub fn conjugate(&self) -> Self {
        Q5Scalar { rat: self.rat.clone(), irr: -&self.irr }
    }

    /// Field norm `rat^2 - 5 irr^2`; zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - int(5) * &self.irr * &self.irr
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Q5Scalar { rat: &self.rat / &n, irr: -&self.irr / &n })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    /// Exact sign of the real number `rat + irr * sqrt5`.
    pub fn signum(&self) -> i32 {
        let sr = sign_of(&self.rat);
        let si = sign_of(&self.irr);
        if sr == 0 || si == 0 || sr == si {
            return if sr != 0 { sr } else { si };
        }
        // Opposite signs: compare rat^2 with 5 irr^2.
        let lhs = &self.rat * &self.rat;
        let rhs = int(5) * &self.irr * &self.irr;
        if lhs > rhs {
            sr
        } else {
            si
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Q5Scalar {
        Q5Scalar::new(&self.rat * q, &self.irr * q)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.irr.is_zero() {
            return r;
        }
        r + self.irr.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Q5Scalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn sign_of(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl Zero for Q5Scalar {
    fn zero() -> Self {
        Q5Scalar { rat: Rational::zero(), irr: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }
}

impl One for Q5Scalar {
    fn one() -> Self {
        Q5Scalar { rat: Rational::one(), irr: Rational::zero() }
    }
}

impl From<i64> for Q5Scalar {
    fn from(n: i64) -> Self {
        Q5Scalar::from_int(n)
    }
}

impl From<Rational> for Q5Scalar {
    fn from(q: Rational) -> Self {
        Q5Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Q5Scalar> for &Q5Scalar {
    type Output = Q5Scalar;
    fn add(self, rhs: &'a Q5Scalar) -> Q5Scalar {
        Q5Scalar { rat: &self.rat + &rhs.rat, irr: &self.irr + &rhs.irr }
    }
}

impl<'a> Sub<&'a Q5Scalar> for &Q5Scalar {
    type Output = Q5Scalar;
    fn sub(self, rhs: &'a Q5Scalar) -> Q5Scalar {
        Q5Scalar { rat: &self.rat - &rhs.rat, irr: &self.irr - &rhs.irr }
    }
}

impl<'a> Mul<&'a Q5Scalar> for &Q5Scalar {
    type Output = Q5Scalar;
    fn mul(self, rhs: &'a Q5Scalar) -> Q5Scalar {
        if self.irr.is_zero() && rhs.irr.is_zero() {
            return Q5Scalar::from_rational(&self.rat * &rhs.rat);
        }
        Q5Scalar {
            rat: &self.rat * &rhs.rat + int(5) * &self.irr * &rhs.irr,
            irr: &self.rat * &rhs.irr + &self.irr * &rhs.rat,
        }
    }
}

impl Neg for &Q5Scalar {
    type Output = Q5Scalar;
    fn neg(self) -> Q5Scalar {
        Q5Scalar { rat: -&self.rat, irr: -&self.irr }
    }
}

impl Neg for Q5Scalar {
    type Output = Q5Scalar;
    fn neg(self) -> Q5Scalar {
        Q5Scalar { rat: -self.rat, irr: -self.irr }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Q5Scalar> for Q5Scalar {
            type Output = Q5Scalar;
            fn $m(self, rhs: Q5Scalar) -> Q5Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Q5Scalar> for Q5Scalar {
            type Output = Q5Scalar;
            fn $m(self, rhs: &'a Q5Scalar) -> Q5Scalar { (&self).$m(rhs) }
        }
        impl $tr<Q5Scalar> for &Q5Scalar {
            type Output = Q5Scalar;
            fn $m(self, rhs: Q5Scalar) -> Q5Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Q5Scalar> for Q5Scalar {
    fn add_assign(&mut self, rhs: &Q5Scalar) {
        self.rat += &rhs.rat;
        self.irr += &rhs.irr;
    }
}

impl SubAssign<&Q5Scalar> for Q5Scalar {
    fn sub_assign(&mut self, rhs: &Q5Scalar) {
        self.rat -= &rhs.rat;
        self.irr -= &rhs.irr;
    }
}

impl MulAssign<&Q5Scalar> for Q5Scalar {
    fn mul_assign(&mut self, rhs: &Q5Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Q5Scalar {
    fn sum<I: Iterator<Item = Q5Scalar>>(iter: I) -> Self {
        iter.fold(Q5Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for Q5Scalar {
    fn product<I: Iterator<Item = Q5Scalar>>(iter: I) -> Self {
        iter.fold(Q5Scalar::one(), |acc, x| &acc * &x)
    }
}

/// Writes `r`, `s*sqrt5` or `r+s*sqrt5` (with `sqrt5`/`-sqrt5` for `s = +-1`).
impl fmt::Display for Q5Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let irr_part = |s: &Rational| -> String {
            if s.is_one() {
                "sqrt5".to_string()
            } else if (-s).is_one() {
                "-sqrt5".to_string()
            } else {
                format!("{s}*sqrt5")
            }
        };
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}", irr_part(&self.irr)),
            (false, false) => {
                let s = irr_part(&self.irr);
                if s.starts_with('-') {
                    write!(f, "{}{}", self.rat, s)
                } else {
                    write!(f, "{}+{}", self.rat, s)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_identities() {
        let tau = Q5Scalar::tau();
        assert_eq!(&tau * &tau, Q5Scalar::new(ratio(3, 2), ratio(1, 2)));
        assert_eq!(&tau * &tau, &tau + &Q5Scalar::one());
        let s5 = Q5Scalar::sqrt5();
        assert_eq!(&s5 * &s5, Q5Scalar::from_int(5));
        let one_minus_tau = &Q5Scalar::one() - &tau;
        assert_eq!(&tau + &one_minus_tau, Q5Scalar::one());
    }

    #[test]
    fn division() {
        let tau = Q5Scalar::tau();
        let inv = tau.inv().unwrap();
        assert_eq!(inv, &tau - &Q5Scalar::one());
        assert_eq!(Q5Scalar::zero().inv(), Err(AlgebraError::DivisionByZero));
        assert!(tau.checked_div(&Q5Scalar::zero()).is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(Q5Scalar::tau().signum(), 1);
        assert_eq!((&Q5Scalar::one() - &Q5Scalar::tau()).signum(), -1);
        assert_eq!(Q5Scalar::new(int(-3), int(1)).signum(), -1);
        assert_eq!(Q5Scalar::new(int(-2), int(1)).signum(), 1);
        assert_eq!(Q5Scalar::new(int(3), int(-2)).signum(), -1);
        assert_eq!(Q5Scalar::zero().signum(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(Q5Scalar::tau().to_string(), "1/2+1/2*sqrt5");
        assert_eq!(Q5Scalar::sqrt5().to_string(), "sqrt5");
        assert_eq!((-Q5Scalar::sqrt5()).to_string(), "-sqrt5");
        assert_eq!(Q5Scalar::new(int(1), ratio(-2, 5)).to_string(), "1-2/5*sqrt5");
        assert_eq!(Q5Scalar::from_int(-7).to_string(), "-7");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-0.125"), Some(ratio(-1, 8)));
        assert_eq!(parse_rational("7/12"), Some(ratio(7, 12)));
        assert_eq!(parse_rational("1.5e-3"), Some(ratio(3, 2000)));
        assert_eq!(parse_rational("2E2"), Some(int(200)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_from_f64(-0.1), Some(ratio(-1, 10)));
        assert_eq!(rational_from_f64(f64::NAN), None);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(-4)), None);
    }

    #[test]
    fn float_conversion() {
        assert!((Q5Scalar::tau().to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    }
}
