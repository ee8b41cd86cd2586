//! Exact base-field scalars: the rationals or a prime field `F_p`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field a curve is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// `F_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `"rational"` or `"prime:<p>"`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" {
            return Ok(Field::Rational);
        }
        if let Some(rest) = s.strip_prefix("prime:") {
            let p: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad prime modulus in field spec {s:?}")))?;
            return Field::prime(p);
        }
        Err(Error::Input(format!("unknown field spec {s:?}")))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldScalar::Mod {
                r: (v as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldScalar> {
        match self {
            Field::Rational => Ok(FieldScalar::Rat(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &m) + &m) % &m;
                    u64::try_from(r).expect("residue fits in u64")
                };
                let num = FieldScalar::Mod { r: reduce(q.numer()), p: *p };
                let den = FieldScalar::Mod { r: reduce(q.denom()), p: *p };
                num.div(&den)
            }
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"` into this field.
    pub fn parse_scalar(&self, s: &str) -> Result<FieldScalar> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }

    /// Every element of a prime field, in residue order. Empty for the rationals.
    pub fn elements(&self) -> Vec<FieldScalar> {
        match self {
            Field::Rational => Vec::new(),
            Field::Prime(p) => (0..*p).map(|r| FieldScalar::Mod { r, p: *p }).collect(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse {s:?} as an exact rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of `Q` (lowest terms, positive denominator) or of `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldScalar {
    Rat(BigRational),
    Mod { r: u64, p: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rat(_) => Field::Rational,
            FieldScalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rat(q) => q.is_zero(),
            FieldScalar::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rat(q) => q.is_one(),
            FieldScalar::Mod { r, .. } => *r == 1,
        }
    }

    fn check(&self, other: &FieldScalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::Field(format!(
                "mixed fields {} and {}",
                self.field(),
                other.field()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &FieldScalar) -> Result<FieldScalar> {
        self.check(o)?;
        Ok(match (self, o) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a + b),
            (FieldScalar::Mod { r: a, p }, FieldScalar::Mod { r: b, .. }) => FieldScalar::Mod {
                r: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> FieldScalar {
        match self {
            FieldScalar::Rat(a) => FieldScalar::Rat(-a),
            FieldScalar::Mod { r, p } => FieldScalar::Mod { r: (p - r) % p, p: *p },
        }
    }

    pub fn sub(&self, o: &FieldScalar) -> Result<FieldScalar> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldScalar) -> Result<FieldScalar> {
        self.check(o)?;
        Ok(match (self, o) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a * b),
            (FieldScalar::Mod { r: a, p }, FieldScalar::Mod { r: b, .. }) => FieldScalar::Mod {
                r: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::Field("division by zero".into()));
        }
        Ok(match self {
            FieldScalar::Rat(a) => FieldScalar::Rat(a.recip()),
            FieldScalar::Mod { r, p } => FieldScalar::Mod { r: pow_mod(*r, p - 2, *p), p: *p },
        })
    }

    pub fn div(&self, o: &FieldScalar) -> Result<FieldScalar> {
        self.mul(&o.inv()?)
    }

    pub fn scale(&self, k: i64) -> Result<FieldScalar> {
        self.mul(&self.field().from_i64(k))
    }

    pub fn square(&self) -> FieldScalar {
        self.mul(self).expect("same field")
    }

    /// Stable string form: `"n"` / `"n/d"` for rationals, the residue for `F_p`.
    pub fn to_exact_string(&self) -> String {
        match self {
            FieldScalar::Rat(q) => rational_string(q),
            FieldScalar::Mod { r, .. } => r.to_string(),
        }
    }

    /// Square roots in the field (brute force over `F_p`, exact over `Q`).
    pub fn sqrt_all(&self) -> Vec<FieldScalar> {
        match self {
            FieldScalar::Mod { r, p } => {
                let mut out: Vec<FieldScalar> = (0..*p)
                    .filter(|y| (*y as u128 * *y as u128 % *p as u128) as u64 == *r)
                    .map(|y| FieldScalar::Mod { r: y, p: *p })
                    .collect();
                out.sort();
                out
            }
            FieldScalar::Rat(q) => {
                if q.is_negative() {
                    return Vec::new();
                }
                let (n, d) = (q.numer(), q.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    let root = BigRational::new(sn, sd);
                    if root.is_zero() {
                        vec![FieldScalar::Rat(root)]
                    } else {
                        let mut v = vec![FieldScalar::Rat(-root.clone()), FieldScalar::Rat(root)];
                        v.sort();
                        v
                    }
                } else {
                    Vec::new()
                }
            }
        }
    }
}

pub(crate) fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A fixed total order used only for canonical sorting; it carries no
/// arithmetic meaning for `F_p`.
impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => a.cmp(b),
            (FieldScalar::Mod { r: a, p: pa }, FieldScalar::Mod { r: b, p: pb }) => {
                (pa, a).cmp(&(pb, b))
            }
            (FieldScalar::Rat(_), FieldScalar::Mod { .. }) => Ordering::Less,
            (FieldScalar::Mod { .. }, FieldScalar::Rat(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational.parse_scalar("6/-4").unwrap();
        assert_eq!(q.to_exact_string(), "-3/2");
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(101).unwrap();
        let a = f.from_i64(37);
        let b = a.inv().unwrap();
        assert!(a.mul(&b).unwrap().is_one());
        assert_eq!(f.from_i64(-1).to_exact_string(), "100");
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(11).unwrap();
        let half = f.parse_scalar("1/2").unwrap();
        assert_eq!(half.scale(2).unwrap(), f.one());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(Field::prime(91).is_err());
        assert!(Field::parse("prime:15").is_err());
        assert_eq!(Field::parse("prime:101").unwrap(), Field::Prime(101));
    }

    #[test]
    fn mixed_fields_error() {
        let a = Field::Rational.one();
        let b = Field::Prime(7).one();
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn square_roots() {
        let f = Field::Rational;
        let r = f.parse_scalar("9/4").unwrap().sqrt_all();
        assert_eq!(r.len(), 2);
        assert!(f.from_i64(2).sqrt_all().is_empty());
        let g = Field::Prime(11);
        assert_eq!(g.from_i64(4).sqrt_all().len(), 2);
    }
}
