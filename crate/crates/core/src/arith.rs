//! Exact rational and Gaussian-rational arithmetic.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! reduced form with a positive denominator (zero is `0/1`). [`Gaussian`]
//! pairs two of them as `re + im·i`.
//!
//! All angle reasoning goes through [`cross`]: two nonzero complex numbers
//! lie on a common line through the origin iff their cross product is zero,
//! so no angle is ever computed numerically.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in canonical form.
pub type Rational = BigRational;

/// Shorthand for the integer `n` as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den` as a [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn lcm_of_denominators<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// An element of Q(i): `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn zero() -> Self {
        Gaussian::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Gaussian::new(Rational::one(), Rational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Gaussian::new(Rational::zero(), Rational::one())
    }

    pub fn from_rational(re: Rational) -> Self {
        Gaussian::new(re, Rational::zero())
    }

    pub fn from_int(re: i64) -> Self {
        Gaussian::from_rational(rat(re))
    }

    /// `re + im·i` from two integers.
    pub fn from_ints(re: i64, im: i64) -> Self {
        Gaussian::new(rat(re), rat(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// The vectorization `(Re z, Im z)`.
    pub fn vect(&self) -> (&Rational, &Rational) {
        (&self.re, &self.im)
    }

    pub fn scale(&self, k: &Rational) -> Gaussian {
        Gaussian::new(&self.re * k, &self.im * k)
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian::new(self.re.clone(), -&self.im)
    }
}

impl<'a> Add<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &'a Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: &'a Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &'a Gaussian) -> Gaussian {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Gaussian::new(re, im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        &self * &rhs
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-&self.re, -&self.im)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        -&self
    }
}

impl AddAssign<&Gaussian> for Gaussian {
    fn add_assign(&mut self, rhs: &Gaussian) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Gaussian> for Gaussian {
    fn sub_assign(&mut self, rhs: &Gaussian) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl std::iter::Sum for Gaussian {
    fn sum<I: Iterator<Item = Gaussian>>(iter: I) -> Gaussian {
        iter.fold(Gaussian::zero(), |mut acc, z| {
            acc += &z;
            acc
        })
    }
}

/// `Re(z1)·Im(z2) − Im(z1)·Re(z2)`: the signed area spanned by the two
/// vectorizations.
pub fn cross(z1: &Gaussian, z2: &Gaussian) -> Rational {
    &z1.re * &z2.im - &z1.im * &z2.re
}

/// True iff `z1` and `z2` are real multiples of each other. Zero lies on
/// every line.
pub fn same_line(z1: &Gaussian, z2: &Gaussian) -> bool {
    z1.is_zero() || z2.is_zero() || cross(z1, z2).is_zero()
}

/// `i·v`, whose vectorization `(−Im v, Re v)` is perpendicular to `v`'s.
pub fn perp(v: &Gaussian) -> Gaussian {
    Gaussian::new(-&v.im, v.re.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the zero vector does not define a line")]
pub struct ZeroLineError;

/// Which side of the line through `v` the point `lambda` lies on.
///
/// Returns the sign of `vect(lambda)·vect(perp(v))`, which equals the sign
/// of `cross(v, lambda)`: `0` on the line, `+1` in the half-plane `perp(v)`
/// points into, `-1` in the other one.
pub fn half_plane_sign(lambda: &Gaussian, v: &Gaussian) -> Result<i8, ZeroLineError> {
    if v.is_zero() {
        return Err(ZeroLineError);
    }
    let c = cross(v, lambda);
    Ok(if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid Gaussian rational literal {text:?} at position {position}: {reason}")]
pub struct ParseGaussianError {
    pub text: String,
    pub position: usize,
    pub reason: &'static str,
}

struct Scanner<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn fail(&self, reason: &'static str) -> ParseGaussianError {
        ParseGaussianError {
            text: self.text.to_string(),
            position: self.pos,
            reason,
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(self.text[start..self.pos].parse().expect("ascii digits"))
        }
    }

    /// `digits ["/" digits-nonzero]`, sign already consumed.
    fn unsigned_rational(&mut self) -> Result<Option<Rational>, ParseGaussianError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if !self.eat(b'/') {
            return Ok(Some(Rational::from_integer(num)));
        }
        let den_pos = self.pos;
        let den = self
            .digits()
            .ok_or_else(|| self.fail("expected denominator digits"))?;
        if den.is_zero() {
            self.pos = den_pos;
            return Err(self.fail("zero denominator"));
        }
        Ok(Some(Rational::new(num, den)))
    }
}

enum Term {
    Real(Rational),
    Imag(Rational),
}

/// One `["-"] rational` or `["-"] [rational] "i"` term.
fn term(s: &mut Scanner<'_>) -> Result<Term, ParseGaussianError> {
    let negative = s.eat(b'-');
    let value = s.unsigned_rational()?;
    let imag = s.eat(b'i');
    let value = match (value, imag) {
        (Some(q), _) => q,
        (None, true) => Rational::one(),
        (None, false) => return Err(s.fail("expected digits or 'i'")),
    };
    let value = if negative { -value } else { value };
    Ok(if imag {
        Term::Imag(value)
    } else {
        Term::Real(value)
    })
}

/// Parse a literal of the form `real`, `imag`, or `real(+|-)imag`, e.g.
/// `"0"`, `"-3/4"`, `"-i"`, `"2/3+5i"`, `"1-7/2i"`.
pub fn parse_gaussian(text: &str) -> Result<Gaussian, ParseGaussianError> {
    let mut s = Scanner {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let z = match term(&mut s)? {
        Term::Imag(im) => Gaussian::new(Rational::zero(), im),
        Term::Real(re) => {
            let negate = match s.peek() {
                None => return Ok(Gaussian::from_rational(re)),
                Some(b'+') => false,
                Some(b'-') => true,
                Some(_) => return Err(s.fail("expected '+', '-' or end of literal")),
            };
            s.pos += 1;
            match term(&mut s)? {
                Term::Imag(im) => Gaussian::new(re, if negate { -im } else { im }),
                Term::Real(_) => return Err(s.fail("expected imaginary part ending in 'i'")),
            }
        }
    };
    if s.pos != text.len() {
        return Err(s.fail("unexpected trailing characters"));
    }
    Ok(z)
}

impl FromStr for Gaussian {
    type Err = ParseGaussianError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gaussian(s)
    }
}

fn format_magnitude_imag(q: &Rational) -> String {
    if q.is_one() {
        "i".to_string()
    } else {
        format!("{q}i")
    }
}

/// Canonical literal for `z`; `parse_gaussian(&format_gaussian(z)) == z`.
pub fn format_gaussian(z: &Gaussian) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    let imag = format_magnitude_imag(&z.im.abs());
    if z.re.is_zero() {
        if z.im.is_negative() {
            format!("-{imag}")
        } else {
            imag
        }
    } else {
        format!("{}{sign}{imag}", z.re)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_gaussian(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gaussian {
        parse_gaussian(s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&g("1/2+1/2i") + &g("1/2-1/2i"), Gaussian::one());
        let z = g("-5/7+3i");
        assert_eq!(&z + &Gaussian::zero(), z);
        // 1/3 + 1/6 = 1/2, 2 + 1/3 = 7/3
        assert_eq!(
            &g("1/3+2i") + &g("1/6+1/3i"),
            Gaussian::new(ratio(1, 2), ratio(7, 3))
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&Gaussian::i() * &Gaussian::i(), Gaussian::from_int(-1));
        let z = g("2/9-4i");
        assert_eq!(&z * &Gaussian::one(), z);
        // (1/2 + i)(2 - i) = 1 - i/2 + 2i + 1 = 2 + 3/2 i
        assert_eq!(&g("1/2+i") * &g("2-i"), Gaussian::new(rat(2), ratio(3, 2)));
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(&Gaussian::one(), &Gaussian::i()), rat(1));
        let z = g("3/5-2i");
        assert!(cross(&z, &z).is_zero());
        assert_eq!(cross(&g("2+i"), &g("-1+3i")), rat(7));
    }

    #[test]
    fn same_line_examples() {
        assert!(same_line(&g("1+i"), &g("-2-2i")));
        assert!(same_line(&Gaussian::zero(), &g("3-i")));
        assert!(same_line(&g("3-i"), &Gaussian::zero()));
        assert!(!same_line(&Gaussian::one(), &Gaussian::i()));
    }

    #[test]
    fn perp_examples() {
        assert_eq!(perp(&Gaussian::one()), Gaussian::i());
        assert_eq!(perp(&Gaussian::i()), Gaussian::from_int(-1));
        assert_eq!(perp(&g("3/2-i")), g("1+3/2i"));
        let v = g("3/2-i");
        let p = perp(&v);
        assert!((&v.re * &p.re + &v.im * &p.im).is_zero());
    }

    #[test]
    fn half_plane_examples() {
        let v = g("2-3i");
        assert_eq!(half_plane_sign(&v.scale(&ratio(-7, 3)), &v), Ok(0));
        assert_eq!(half_plane_sign(&Gaussian::i(), &Gaussian::one()), Ok(1));
        assert_eq!(half_plane_sign(&g("1-i"), &g("1+i")), Ok(-1));
        assert_eq!(
            half_plane_sign(&Gaussian::one(), &Gaussian::zero()),
            Err(ZeroLineError)
        );
    }

    #[test]
    fn parse_examples() {
        assert_eq!(g("0"), Gaussian::zero());
        assert_eq!(g("-3/4+2i"), Gaussian::new(ratio(-3, 4), rat(2)));
        assert_eq!(g("i"), Gaussian::i());
        assert_eq!(g("-i"), -Gaussian::i());
        assert_eq!(g("2/3+5i"), Gaussian::new(ratio(2, 3), rat(5)));
        assert_eq!(g("1-7/2i"), Gaussian::new(rat(1), ratio(-7, 2)));
        assert_eq!(g("4/6"), Gaussian::from_rational(ratio(2, 3)));
        assert_eq!(g("-2-i"), Gaussian::from_ints(-2, -1));
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_gaussian("1//2").unwrap_err();
        assert_eq!(e.position, 2);
        assert_eq!(parse_gaussian("").unwrap_err().position, 0);
        assert_eq!(parse_gaussian("1/0").unwrap_err().position, 2);
        assert_eq!(parse_gaussian("3i+1").unwrap_err().position, 2);
        assert_eq!(parse_gaussian("1+2").unwrap_err().position, 3);
        assert!(parse_gaussian("1 + i").is_err());
        assert!(parse_gaussian("ii").is_err());
        assert!(parse_gaussian("--1").is_err());
        assert!(parse_gaussian("1.5").is_err());
    }

    #[test]
    fn format_is_canonical() {
        for (s, want) in [
            ("0", "0"),
            ("-0", "0"),
            ("2/4", "1/2"),
            ("1i", "i"),
            ("-1i", "-i"),
            ("0+3i", "3i"),
            ("5-1i", "5-i"),
            ("-3/4+2/6i", "-3/4+1/3i"),
        ] {
            assert_eq!(format_gaussian(&g(s)), want);
        }
    }
}
