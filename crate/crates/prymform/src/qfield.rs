//! Exact arithmetic in a real quadratic field `Q(√D)`, planar vectors over it,
//! and the exact orientation and in-circle predicates used by every geometric
//! routine in the crate.
//!
//! A [`QuadNum`] stores `a + b·√D` with arbitrary-precision rational `a`, `b`.
//! When `D` is a perfect square the irrational part is folded into `a` at
//! construction, so `Q(√9)` and `Q(√16)` are plain rational arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Returns true when `d` is a perfect square (0 and 1 included).
pub fn is_square(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

/// An element `a + b·√D` of a real quadratic field.
///
/// Values whose discriminant is a perfect square always have `b = 0` and mix
/// freely with values of any discriminant. Mixing two different non-square
/// discriminants in one expression panics: every surface lives over a single
/// field, so such a mix is a programming error.
#[derive(Clone)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    disc: u64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadNum {
    /// Builds `a + b·√disc`, folding `b` into `a` when `disc` is a square.
    pub fn new(a: BigRational, b: BigRational, disc: u64) -> Self {
        if is_square(disc) {
            let r = BigRational::from_integer(BigInt::from(disc.sqrt()));
            QuadNum { a: a + b * r, b: BigRational::zero(), disc }
        } else {
            QuadNum { a, b, disc }
        }
    }

    /// The rational number `r`, usable in any field.
    pub fn rational(r: BigRational) -> Self {
        QuadNum { a: r, b: BigRational::zero(), disc: 1 }
    }

    /// The integer `n`, usable in any field.
    pub fn from_int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// The fraction `num/den`, usable in any field. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√disc` as an element of `Q(√disc)`.
    pub fn sqrt_disc(disc: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), disc)
    }

    /// `(p + q·√disc) / r` for integers, a convenience for prototype data.
    pub fn from_parts(p: i64, q: i64, r: i64, disc: u64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(p), BigInt::from(r)),
            BigRational::new(BigInt::from(q), BigInt::from(r)),
            disc,
        )
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Rational part `a`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Irrational coefficient `b`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// The discriminant this value was built over.
    pub fn disc(&self) -> u64 {
        self.disc
    }

    /// Re-tags a value with a field discriminant. Only legal when the value is
    /// rational or already lives in that field.
    pub fn in_field(&self, disc: u64) -> Self {
        if self.disc == disc {
            return self.clone();
        }
        assert!(self.b.is_zero(), "cannot move an irrational value to another field");
        QuadNum::new(self.a.clone(), BigRational::zero(), disc)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of `a + b·√D` in `{-1, 0, 1}`.
    pub fn sign(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with D·b².
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * rat(self.disc as i64);
        let c = match a2.cmp(&db2) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => 0,
        };
        if sa > 0 {
            c
        } else {
            -c
        }
    }

    /// Galois conjugate `a − b·√D`.
    pub fn conjugate(&self) -> Self {
        QuadNum { a: self.a.clone(), b: -self.b.clone(), disc: self.disc }
    }

    /// Field norm `x·conj(x) = a² − D·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.disc as i64)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in QuadNum");
        let c = self.conjugate();
        QuadNum { a: c.a / &n, b: c.b / &n, disc: self.disc }
    }

    /// A dyadic interval `[lo, hi]` with `hi − lo ≤ 2^{-bits}` certainly
    /// containing the value. Exact dyadic values return a degenerate interval.
    pub fn approx(&self, bits: u32) -> (BigRational, BigRational) {
        let bits = bits.max(1);
        let m = bits + 2;
        let scale = BigInt::one() << m;
        if self.b.is_zero() && (scale.clone() % self.a.denom()).is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (lo, hi) = if self.b.is_zero() {
            (self.a.clone(), self.a.clone())
        } else {
            let bceil = self.b.abs().ceil().to_integer();
            let k = bits as u64 + 1 + bceil.bits();
            let shifted = BigInt::from(self.disc) << (2 * k);
            let r = shifted.sqrt();
            let den = BigInt::one() << k;
            let s_lo = BigRational::new(r.clone(), den.clone());
            let s_hi = BigRational::new(r + 1, den);
            if self.b.is_positive() {
                (&self.a + &self.b * s_lo, &self.a + &self.b * s_hi)
            } else {
                (&self.a + &self.b * s_hi, &self.a + &self.b * s_lo)
            }
        };
        let sc = BigRational::from_integer(scale.clone());
        let lo_d = BigRational::new((lo * &sc).floor().to_integer(), scale.clone());
        let hi_d = BigRational::new((hi * &sc).ceil().to_integer(), scale);
        (lo_d, hi_d)
    }

    /// Nearest `f64` (from a 60-bit enclosure); for display and layout only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.approx(60);
        let mid = (lo + hi) / rat(2);
        mid.numer().to_f64().unwrap_or(f64::NAN) / mid.denom().to_f64().unwrap_or(f64::NAN)
    }

    /// Exact floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let mut bits = 16;
        loop {
            let (lo, hi) = self.approx(bits);
            let fl = lo.floor().to_integer();
            if fl == hi.floor().to_integer() && hi.floor() != hi {
                return fl;
            }
            if fl == hi.floor().to_integer() {
                // hi is an integer boundary; decide exactly.
                let cand = QuadNum::rational(BigRational::from_integer(hi.to_integer()));
                return if (self.clone() - cand).sign() >= 0 { hi.to_integer() } else { fl };
            }
            bits *= 2;
        }
    }

    /// Exact ceiling as an integer.
    pub fn ceil(&self) -> BigInt {
        -((-self.clone()).floor())
    }

    fn pick_disc(&self, other: &QuadNum) -> u64 {
        if self.disc == other.disc || is_square(other.disc) {
            self.disc
        } else if is_square(self.disc) {
            other.disc
        } else {
            panic!("mixing Q(√{}) and Q(√{}) in one expression", self.disc, other.disc)
        }
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadNum::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Compact human-readable form, e.g. `3/2+1/2√17`.
    pub fn to_plain(&self) -> String {
        if self.b.is_zero() {
            return format!("{}", self.a);
        }
        if self.a.is_zero() {
            return format!("{}√{}", self.b, self.disc);
        }
        let sep = if self.b.is_negative() { "" } else { "+" };
        format!("{}{}{}√{}", self.a, sep, self.b, self.disc)
    }
}

fn sgn(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_plain())
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_plain())
    }
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for QuadNum {}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl std::hash::Hash for QuadNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, o: &QuadNum) -> QuadNum {
        let disc = self.pick_disc(o);
        QuadNum { a: &self.a + &o.a, b: &self.b + &o.b, disc }
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, o: &QuadNum) -> QuadNum {
        let disc = self.pick_disc(o);
        QuadNum { a: &self.a - &o.a, b: &self.b - &o.b, disc }
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, o: &QuadNum) -> QuadNum {
        let disc = self.pick_disc(o);
        if self.b.is_zero() {
            return QuadNum { a: &self.a * &o.a, b: &self.a * &o.b, disc };
        }
        if o.b.is_zero() {
            return QuadNum { a: &self.a * &o.a, b: &self.b * &o.a, disc };
        }
        let d = rat(disc as i64);
        QuadNum {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            disc,
        }
    }
}

impl<'a> Div<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn div(self, o: &QuadNum) -> QuadNum {
        if o.b.is_zero() {
            assert!(!o.a.is_zero(), "division by zero in QuadNum");
            let disc = self.pick_disc(o);
            return QuadNum { a: &self.a / &o.a, b: &self.b / &o.a, disc };
        }
        self * &o.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, o: QuadNum) -> QuadNum {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, o: &QuadNum) -> QuadNum {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, o: QuadNum) -> QuadNum {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -self.a, b: -self.b, disc: self.disc }
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -self.clone()
    }
}

impl AddAssign<&QuadNum> for QuadNum {
    fn add_assign(&mut self, o: &QuadNum) {
        *self = &*self + o;
    }
}

impl SubAssign<&QuadNum> for QuadNum {
    fn sub_assign(&mut self, o: &QuadNum) {
        *self = &*self - o;
    }
}

impl MulAssign<&QuadNum> for QuadNum {
    fn mul_assign(&mut self, o: &QuadNum) {
        *self = &*self * o;
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl From<BigRational> for QuadNum {
    fn from(r: BigRational) -> Self {
        QuadNum::rational(r)
    }
}

/// JSON integer that falls back to a decimal string beyond the `i64` range.
fn big_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn big_from_json(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("non-integer number {n}")),
        serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
        other => Err(format!("expected integer, found {other}")),
    }
}

fn rat_to_json(r: &BigRational) -> serde_json::Value {
    serde_json::Value::Array(vec![big_to_json(r.numer()), big_to_json(r.denom())])
}

fn rat_from_json(v: &serde_json::Value) -> Result<BigRational, String> {
    let arr = v.as_array().ok_or("fraction must be [num, den]")?;
    if arr.len() != 2 {
        return Err("fraction must be [num, den]".into());
    }
    let num = big_from_json(&arr[0])?;
    let den = big_from_json(&arr[1])?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    if den.is_negative() {
        return Err("denominator must be positive".into());
    }
    if !num.gcd(&den).is_one() {
        return Err("fraction must be gcd-reduced".into());
    }
    Ok(BigRational::new(num, den))
}

impl QuadNum {
    /// `{"a":[num,den],"b":[num,den],"D":int}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert("a".into(), rat_to_json(&self.a));
        m.insert("b".into(), rat_to_json(&self.b));
        m.insert("D".into(), serde_json::Value::from(self.disc));
        serde_json::Value::Object(m)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let o = v.as_object().ok_or("QuadNum must be an object")?;
        let a = rat_from_json(o.get("a").ok_or("missing a")?)?;
        let b = rat_from_json(o.get("b").ok_or("missing b")?)?;
        let d = o.get("D").and_then(|d| d.as_u64()).ok_or("missing or invalid D")?;
        if is_square(d) && !b.is_zero() {
            return Err("b must be 0 for a square discriminant".into());
        }
        Ok(QuadNum { a, b, disc: d })
    }
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        QuadNum::from_json(&v).map_err(de::Error::custom)
    }
}

/// A planar vector with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Vec2 {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Vec2 { x, y }
    }

    /// Integer vector.
    pub fn ints(x: i64, y: i64) -> Self {
        Vec2::new(QuadNum::from_int(x), QuadNum::from_int(y))
    }

    pub fn zero() -> Self {
        Vec2::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `self.x * o.y − self.y * o.x`.
    pub fn cross(&self, o: &Vec2) -> QuadNum {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> QuadNum {
        &self.x * &o.x + &self.y * &o.y
    }

    /// Squared Euclidean length.
    pub fn norm2(&self) -> QuadNum {
        self.dot(self)
    }

    pub fn scale(&self, k: &QuadNum) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    /// True when `o` is a positive multiple of `self` (both nonzero).
    pub fn same_direction(&self, o: &Vec2) -> bool {
        self.cross(o).is_zero() && self.dot(o).sign() > 0
    }

    /// Re-tags both coordinates with a field.
    pub fn in_field(&self, disc: u64) -> Vec2 {
        Vec2::new(self.x.in_field(disc), self.y.in_field(disc))
    }

    /// Half-plane class used for exact angular ordering: 0 for directions in
    /// `[0, π)`, 1 for `[π, 2π)`.
    fn half(&self) -> u8 {
        let sy = self.y.sign();
        if sy > 0 || (sy == 0 && self.x.sign() > 0) {
            0
        } else {
            1
        }
    }

    /// Compares the polar angles of two nonzero vectors in `[0, 2π)`.
    pub fn angle_cmp(&self, o: &Vec2) -> Ordering {
        let (h1, h2) = (self.half(), o.half());
        if h1 != h2 {
            return h1.cmp(&h2);
        }
        match self.cross(o).sign() {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Compares the ccw angles of `u` and `v` measured from `base`, in `[0, 2π)`.
    pub fn angle_from_cmp(base: &Vec2, u: &Vec2, v: &Vec2) -> Ordering {
        let rot = |w: &Vec2| Vec2::new(base.dot(w), base.cross(w));
        rot(u).angle_cmp(&rot(v))
    }

    /// Lexicographic total order on exact coordinates.
    pub fn lex_cmp(&self, o: &Vec2) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }
}

impl<'a> Add<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        &self + &o
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        &self - &o
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

/// Orientation of the triangle `(a, b, c)`: `1` counterclockwise, `-1`
/// clockwise, `0` collinear.
pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i32 {
    (b - a).cross(&(c - a)).sign()
}

/// In-circle predicate for a counterclockwise triangle `(a, b, c)`: `1` when
/// `d` lies strictly inside its circumcircle, `0` on it, `-1` outside.
pub fn incircle(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> i32 {
    let ad = a - d;
    let bd = b - d;
    let cd = c - d;
    let la = ad.norm2();
    let lb = bd.norm2();
    let lc = cd.norm2();
    let det = &la * &bd.cross(&cd) - &lb * &ad.cross(&cd) + &lc * &ad.cross(&bd);
    det.sign()
}

/// Squared distance from the origin to the closed segment `[p, q]`.
pub fn dist2_origin_segment(p: &Vec2, q: &Vec2) -> QuadNum {
    let d = q - p;
    let dd = d.norm2();
    if dd.is_zero() {
        return p.norm2();
    }
    // Parameter of the orthogonal projection: t = −p·d / |d|².
    let t_num = -p.dot(&d);
    if t_num.sign() <= 0 {
        return p.norm2();
    }
    if (&t_num - &dd).sign() >= 0 {
        return q.norm2();
    }
    let c = p.cross(&d);
    &(&c * &c) / &dd
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, r: i64, d: u64) -> QuadNum {
        QuadNum::from_parts(p, r, 1, d)
    }

    #[test]
    fn square_discriminant_folds() {
        let x = QuadNum::from_parts(-1, 1, 1, 9);
        assert!(x.b().is_zero());
        assert_eq!(x, QuadNum::from_int(2));
        assert_eq!(x.sign(), 1);
    }

    #[test]
    fn sign_examples() {
        assert_eq!(q(0, 0, 8).sign(), 0);
        assert_eq!(q(3, -1, 8).sign(), 1);
        assert_eq!(q(-3, 1, 8).sign(), -1);
        assert_eq!(q(2, -1, 8).sign(), -1);
    }

    #[test]
    fn sign_matches_interval_oracle() {
        // 3 − √8 ≈ 0.1716: the 64-bit enclosure must be strictly positive.
        let x = q(3, -1, 8);
        let (lo, _) = x.approx(64);
        assert!(lo > BigRational::zero());
    }

    #[test]
    fn conjugate_and_norm() {
        let lam = QuadNum::from_parts(1, 1, 2, 17);
        let c = lam.conjugate();
        assert_eq!(c, QuadNum::from_parts(1, -1, 2, 17));
        assert_eq!(&lam * &c, QuadNum::from_int(-4));
        assert_eq!(QuadNum::from_int(5).conjugate(), QuadNum::from_int(5));
    }

    #[test]
    fn approx_examples() {
        let (lo, hi) = QuadNum::sqrt_disc(8).approx(10);
        assert!(lo >= BigRational::new(2827.into(), 1000.into()));
        assert!(hi <= BigRational::new(2829.into(), 1000.into()));
        let (lo, hi) = QuadNum::zero().approx(1);
        assert!(lo.is_zero() && hi.is_zero());
        let one = QuadNum::from_parts(-2, 1, 1, 9);
        let (lo, hi) = one.approx(4);
        assert!(lo.is_one() && hi.is_one());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(QuadNum::sqrt_disc(8).floor(), BigInt::from(2));
        assert_eq!(QuadNum::sqrt_disc(8).ceil(), BigInt::from(3));
        assert_eq!(QuadNum::from_int(3).floor(), BigInt::from(3));
        assert_eq!((-QuadNum::sqrt_disc(2)).floor(), BigInt::from(-2));
    }

    #[test]
    fn json_round_trip() {
        let x = QuadNum::from_parts(3, -7, 4, 17);
        let s = serde_json::to_string(&x).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, serde_json::json!({"a":[3,4],"b":[-7,4],"D":17}));
        let y: QuadNum = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.disc(), 17);
        assert!(serde_json::from_str::<QuadNum>(r#"{"a":[2,4],"b":[0,1],"D":17}"#).is_err());
    }

    #[test]
    fn predicates() {
        let a = Vec2::ints(0, 0);
        let b = Vec2::ints(1, 0);
        let c = Vec2::ints(0, 1);
        assert_eq!(orient(&a, &b, &c), 1);
        assert_eq!(incircle(&a, &b, &c, &Vec2::ints(1, 1)), 0);
        assert_eq!(incircle(&a, &b, &c, &Vec2::new(QuadNum::frac(1, 2), QuadNum::frac(1, 2))), 1);
        assert_eq!(incircle(&a, &b, &c, &Vec2::ints(2, 2)), -1);
    }

    #[test]
    fn angle_order() {
        let e = Vec2::ints(1, 0);
        let n = Vec2::ints(0, 1);
        let w = Vec2::ints(-1, 0);
        let s = Vec2::ints(0, -1);
        assert_eq!(e.angle_cmp(&n), Ordering::Less);
        assert_eq!(n.angle_cmp(&w), Ordering::Less);
        assert_eq!(w.angle_cmp(&s), Ordering::Less);
        assert_eq!(Vec2::angle_from_cmp(&n, &e, &w), Ordering::Greater);
    }

    fn arb_q(d: u64) -> impl Strategy<Value = QuadNum> {
        (-20i64..20, -20i64..20, 1i64..6, 1i64..6).prop_map(move |(p, r, s, t)| {
            QuadNum::new(
                BigRational::new(p.into(), s.into()),
                BigRational::new(r.into(), t.into()),
                d,
            )
        })
    }

    fn arb_pair() -> impl Strategy<Value = (QuadNum, QuadNum, QuadNum)> {
        prop_oneof![Just(8u64), Just(9), Just(12), Just(16), Just(17)]
            .prop_flat_map(|d| (arb_q(d), arb_q(d), arb_q(d)))
    }

    proptest! {
        #[test]
        fn field_axioms((x, y, z) in arb_pair()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
            prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            if super::is_square(x.disc()) {
                prop_assert!(x.b().is_zero());
            }
        }

        #[test]
        fn approx_contains_value((x, _y, _z) in arb_pair(), bits in 1u32..80) {
            let (lo, hi) = x.approx(bits);
            let width = &hi - &lo;
            prop_assert!(width <= BigRational::new(BigInt::one(), BigInt::one() << bits));
            prop_assert!((&x - &QuadNum::rational(lo)).sign() >= 0);
            prop_assert!((&QuadNum::rational(hi) - &x).sign() >= 0);
        }
    }
}
