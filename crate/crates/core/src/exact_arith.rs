//! Exact slope arithmetic: negative continued fractions, Rolfsen twists and
//! the set of unknot surgery slopes yielding a fixed lens space.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Exact rational number. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let p: BigInt = a.trim().parse().map_err(|_| bad())?;
            let q: BigInt = b.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A reduced slope `p/q` on a torus, with `q >= 0`. Infinity is `1/0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Builds the reduced slope `p/q`. Rejects `0/0`.
    pub fn new(p: BigInt, q: BigInt) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return domain("0/0 is not a slope");
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn infinity() -> Self {
        Slope { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn int(n: i64) -> Self {
        Slope { p: BigInt::from(n), q: BigInt::one() }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Slope::new(BigInt::from(p), BigInt::from(q)).expect("nonzero slope vector")
    }

    pub fn from_rational(r: &Rational) -> Self {
        Slope { p: r.numer().clone(), q: r.denom().clone() }
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        &self.p
    }

    pub fn denom(&self) -> &BigInt {
        &self.q
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinite()).then(|| Rational::new(self.p.clone(), self.q.clone()))
    }

    /// Applies the integer matrix `[[a, b], [c, d]]` to the vector `(p, q)`.
    pub fn transform(&self, m: &[BigInt; 4]) -> Slope {
        let p = &m[0] * &self.p + &m[1] * &self.q;
        let q = &m[2] * &self.p + &m[3] * &self.q;
        Slope::new(p, q).expect("unimodular image of a primitive vector")
    }

    /// `|p q' - p' q|`, the geometric intersection number of the two curves.
    pub fn intersection(&self, other: &Slope) -> BigInt {
        (&self.p * &other.q - &other.p * &self.q).abs()
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => (&self.p * &other.q).cmp(&(&other.p * &self.q)),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.q.is_one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Slope::infinity());
        }
        Ok(Slope::from_rational(&parse_rational(t)?))
    }
}

impl From<Rational> for Slope {
    fn from(r: Rational) -> Self {
        Slope::from_rational(&r)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Coefficients `[c1, ..., cn]` with every `ci <= -2`, evaluating to
/// `c1 - 1/(c2 - 1/(... - 1/cn))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NegContinuedFraction {
    coeffs: Vec<BigInt>,
}

impl NegContinuedFraction {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("empty continued fraction");
        }
        let minus_two = BigInt::from(-2);
        if let Some(c) = coeffs.iter().find(|c| **c > minus_two) {
            return domain(format!("coefficient {c} exceeds -2"));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Expands `r < -1` into its negative continued fraction.
pub fn neg_cf_expand(r: &Rational) -> Result<NegContinuedFraction> {
    if *r >= -Rational::one() {
        return domain(format!("{r} is not < -1"));
    }
    Ok(NegContinuedFraction { coeffs: cf_digits(r) })
}

/// Digits `[c1, c2, ...]` of any finite `r`: `c1 = floor(r)` is an arbitrary
/// integer and every later digit is `<= -2`.
pub(crate) fn cf_digits(r: &Rational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = r.clone();
    loop {
        if x.is_integer() {
            out.push(x.to_integer());
            return out;
        }
        let c = x.floor();
        out.push(c.to_integer());
        x = -(x - c).recip();
    }
}

/// Evaluates a negative continued fraction.
pub fn neg_cf_value(cf: &NegContinuedFraction) -> Rational {
    eval_digits(cf.coeffs())
}

pub(crate) fn eval_digits(digits: &[BigInt]) -> Rational {
    let mut it = digits.iter().rev();
    let mut v = Rational::from_integer(it.next().expect("nonempty digits").clone());
    for c in it {
        v = Rational::from_integer(c.clone()) - v.recip();
    }
    v
}

/// `q^{-1} mod p` in `[1, p-1]`, or `None` when `gcd(q, p) != 1`.
/// For `p = 1` every residue is zero and the inverse is `0`.
pub fn mod_inverse(q: &BigInt, p: &BigInt) -> Option<BigInt> {
    assert!(p.is_positive(), "modulus must be positive");
    if p.is_one() {
        return Some(BigInt::zero());
    }
    let e = q.mod_floor(p).extended_gcd(p);
    e.gcd.is_one().then(|| e.x.mod_floor(p))
}

fn check_twistable(r: &Slope) -> Result<()> {
    if r.is_infinite() || r.is_zero() {
        return domain(format!("slope {r} has no Rolfsen orbit (0 and inf excluded)"));
    }
    Ok(())
}

/// `p/q -> p/(q + n p)`.
pub fn rolfsen_twist(r: &Slope, n: &BigInt) -> Result<Slope> {
    check_twistable(r)?;
    Slope::new(r.p.clone(), &r.q + n * &r.p)
}

/// The unique member of the Rolfsen orbit of `r` that is `<= -1`.
pub fn canonical_slope(r: &Slope) -> Result<Rational> {
    check_twistable(r)?;
    let (p, q) = lens_parameters(r)?;
    let den = if q.is_zero() { p.clone() } else { q };
    Ok(Rational::new(-p, den))
}

/// Lens parameters `(p, q mod p)` of surgery on the unknot with slope `r`,
/// normalized so that `r` is in the orbit of `-p/q`. `p = 1` gives `(1, 0)`.
pub fn lens_parameters(r: &Slope) -> Result<(BigInt, BigInt)> {
    check_twistable(r)?;
    let p = r.p.abs();
    let q = if r.p.is_negative() { r.q.clone() } else { -r.q.clone() };
    let qm = q.mod_floor(&p);
    Ok((p, qm))
}

/// All `-p/q'` with `q' in {q + n p} ∪ {qbar + n p}`, `0 < |q'| <= den_bound`,
/// sorted by value. Requires `-p/q <= -1` in lowest terms.
pub fn cs_set(p: &BigInt, q: &BigInt, den_bound: &BigInt) -> Result<Vec<Slope>> {
    if !p.is_positive() || !q.is_positive() || q > p || !p.gcd(q).is_one() {
        return domain(format!("-{p}/{q} is not a canonical slope <= -1"));
    }
    let qbar = mod_inverse(q, p).expect("coprime");
    let mut out = Vec::new();
    for start in [q.clone(), qbar] {
        let r = start.mod_floor(p);
        // Every q' congruent to r modulo p with |q'| <= den_bound.
        let lo = -den_bound;
        let mut k = (&lo - &r).div_ceil(p);
        loop {
            let qq = &r + &k * p;
            if &qq > den_bound {
                break;
            }
            if !qq.is_zero() {
                out.push(Slope::new(-p.clone(), qq)?);
            }
            k += 1;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Orientation-preserving diffeomorphism test for `L(p, q)` and `L(p', q')`.
pub fn same_lens_space(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    let (p, q) = a;
    let (p2, q2) = b;
    if p != p2 {
        return false;
    }
    if p.is_zero() || p.is_one() {
        return true;
    }
    let (q, q2) = (q.mod_floor(p), q2.mod_floor(p));
    q == q2 || (&q * &q2).mod_floor(p).is_one()
}
