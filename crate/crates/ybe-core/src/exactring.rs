//! Laurent polynomials in q with rational exponents and arbitrary-precision
//! rational coefficients.
//!
//! A [`Scalar`] is a finite map exponent -> coefficient kept in canonical
//! form: no zero coefficients are ever stored, so structural equality is
//! mathematical equality. Exponents are arbitrary rationals; the sl(n)
//! pipeline checks denominators after assembly rather than constraining the
//! ring itself.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand for small rational constants.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Laurent polynomial in q: finite sum of c * q^e with rational c, e.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<Rat, Rat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::monomial(Rat::one(), Rat::zero())
    }

    /// c * q^e; the zero coefficient yields the zero Scalar.
    pub fn monomial(coeff: Rat, exp: Rat) -> Self {
        let mut s = Scalar::default();
        if !coeff.is_zero() {
            s.terms.insert(exp, coeff);
        }
        s
    }

    /// q^e.
    pub fn qpow(exp: Rat) -> Self {
        Scalar::monomial(Rat::one(), exp)
    }

    /// q.
    pub fn q() -> Self {
        Scalar::qpow(Rat::one())
    }

    /// q̂ = q - q⁻¹.
    pub fn qhat() -> Self {
        Scalar::q() - Scalar::qpow(-Rat::one())
    }

    /// Constant polynomial.
    pub fn from_rat(c: Rat) -> Self {
        Scalar::monomial(c, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.terms.iter()
    }

    /// The constant term's coefficient if the Scalar is a constant (or zero).
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.is_zero() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn add_term(&mut self, exp: Rat, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    /// Substitute q -> q⁻¹ (negates every exponent).
    pub fn invert_q(&self) -> Scalar {
        let mut out = Scalar::default();
        for (e, c) in &self.terms {
            out.terms.insert(-e.clone(), c.clone());
        }
        out
    }

    /// Value at q = 1: the sum of all coefficients.
    pub fn eval_at_one(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c)
    }

    /// d/dh at h = 0 under q = e^h: sum of coeff * exp over all terms.
    pub fn d_dh_at_zero(&self) -> Rat {
        self.terms
            .iter()
            .fold(Rat::zero(), |acc, (e, c)| acc + c * e)
    }

    /// Largest denominator appearing among exponents (1 for constants/zero).
    pub fn exponent_denom_lcm(&self) -> BigInt {
        self.terms.keys().fold(BigInt::one(), |acc, e| {
            num::integer::lcm(acc, e.denom().clone())
        })
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = Scalar::default();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest exponent first reads like the usual q, q̂ displays
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if e.is_zero() {
                write!(f, "{}", fmt_rat(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rat(&mag))?;
                }
                if e.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^({})", fmt_rat(e))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn bigint_number(i: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&i.to_string()).expect("integer literal")
}

fn number_bigint(n: &serde_json::Number) -> Result<BigInt, String> {
    BigInt::from_str(&n.to_string()).map_err(|_| format!("not an integer: {}", n))
}

/// JSON form: array of [coeff_num, coeff_den, exp_num, exp_den], ascending by
/// exponent. Canonical and bit-exact for arbitrary-size integers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let quad = [
                bigint_number(c.numer()),
                bigint_number(c.denom()),
                bigint_number(e.numer()),
                bigint_number(e.denom()),
            ];
            seq.serialize_element(&quad)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<[serde_json::Number; 4]> = Vec::deserialize(deserializer)?;
        let mut out = Scalar::default();
        for quad in &raw {
            let ints: Vec<BigInt> = quad
                .iter()
                .map(number_bigint)
                .collect::<Result<_, _>>()
                .map_err(D::Error::custom)?;
            if ints[1].is_zero() || ints[3].is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let coeff = Rat::new(ints[0].clone(), ints[1].clone());
            let exp = Rat::new(ints[2].clone(), ints[3].clone());
            out.add_term(exp, coeff);
        }
        Ok(out)
    }
}
