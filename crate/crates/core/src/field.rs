//! Exact scalars: arbitrary-precision rationals and residues modulo a prime `p >= 5`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field descriptor shared by every scalar taking part in one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Prime field `GF(p)`. Characteristics 2 and 3 are refused.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 || p == 3 {
            return Err(Error::BadFieldChar(p));
        }
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(Box::new(BigRational::zero())),
            Field::Prime(p) => Scalar::Mod { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(Box::new(BigRational::from_integer(n.into()))),
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self {
            Field::Rational => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(Box::new(BigRational::new(num.clone(), den.clone()))))
            }
            Field::Prime(p) => {
                let reduce = |n: &BigInt| -> u32 {
                    n.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits in u32")
                };
                let n = Scalar::Mod { value: reduce(num), modulus: p };
                let d = Scalar::Mod { value: reduce(den), modulus: p };
                Ok(&n * &d.inv()?)
            }
        }
    }

    /// Number of elements for a prime field, `None` over the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p as u64),
        }
    }

    /// All elements of a prime field in residue order.
    pub fn elements(self) -> Vec<Scalar> {
        match self {
            Field::Rational => Vec::new(),
            Field::Prime(p) => (0..p).map(|value| Scalar::Mod { value, modulus: p }).collect(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator (guaranteed by
/// `BigRational`). Residues lie in `[0, p)`.
///
/// The arithmetic operators panic when the operands live in different fields;
/// the `try_*` methods report `FieldMismatch` instead.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(Box<BigRational>),
    Mod { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn try_eq(&self, other: &Scalar) -> Result<bool> {
        self.check_same(other)?;
        Ok(self == other)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(Box::new(r.recip())),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self * &other.inv()?)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Residue order in `GF(p)`, numeric order over the rationals. Mixed fields are
/// ordered by their descriptors so sorting never panics.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                p.cmp(q).then(a.cmp(b))
            }
            _ => self.field().cmp(&other.field()),
        }
    }
}

#[inline]
fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    #[inline]
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                let s = *a as u64 + *b as u64;
                let p64 = *p as u64;
                Scalar::Mod {
                    value: if s >= p64 { (s - p64) as u32 } else { s as u32 },
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(a.as_ref() + b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    #[inline]
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod {
                    value: if a >= b { a - b } else { (*a as u64 + *p as u64 - *b as u64) as u32 },
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(a.as_ref() - b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    #[inline]
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(a.as_ref() * b.as_ref())),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    #[inline]
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Rational(a) => Scalar::Rational(Box::new(-a.as_ref())),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    #[inline]
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    #[inline]
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

/// `"2/3"`, `"-5"` for rationals and the bare residue for `GF(p)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// Transport encoding: `"2/3"` over the rationals, `"4 mod 7"` over `GF(7)`.
    pub fn to_wire(&self) -> String {
        match self {
            Scalar::Rational(_) => self.to_string(),
            Scalar::Mod { value, modulus } => format!("{value} mod {modulus}"),
        }
    }

    /// Whether the rational is negative; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}
