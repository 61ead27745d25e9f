//! Exact arithmetic in the ring of integers `O_d` of `Q(sqrt(-d))`, plus
//! residue rings `Z[i]/(alpha)` with canonical Hermite-normal-form
//! representatives.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadIntError {
    #[error("ring parameter mismatch: d = {0} vs d = {1}")]
    RingMismatch(u64, u64),
    #[error("ring parameter d = {0} is not a square-free positive integer")]
    BadParameter(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("residue rings are only supported for d = 1 (got d = {0})")]
    UnsupportedRing(u64),
    #[error("cannot parse Gaussian integer {0:?}")]
    Parse(String),
}

/// An element `x + y*omega` of `O_d`, where `omega = sqrt(-d)` when
/// `d != 3 (mod 4)` and `omega = (1 + sqrt(-d))/2` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    d: u64,
    x: BigInt,
    y: BigInt,
}

fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadInt {
    pub fn new(d: u64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self, QuadIntError> {
        if !is_squarefree(d) {
            return Err(QuadIntError::BadParameter(d));
        }
        Ok(QuadInt { d, x: x.into(), y: y.into() })
    }

    /// The Gaussian integer `x + y i`.
    pub fn gaussian(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { d: 1, x: x.into(), y: y.into() }
    }

    pub fn zero(d: u64) -> Self {
        QuadInt { d, x: BigInt::zero(), y: BigInt::zero() }
    }

    pub fn one(d: u64) -> Self {
        QuadInt { d, x: BigInt::one(), y: BigInt::zero() }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    fn omega_is_half(&self) -> bool {
        self.d % 4 == 3
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn check(&self, other: &Self) -> Result<(), QuadIntError> {
        if self.d != other.d {
            Err(QuadIntError::RingMismatch(self.d, other.d))
        } else {
            Ok(())
        }
    }

    /// `|q|^2`, always a non-negative ordinary integer.
    pub fn norm(&self) -> BigInt {
        let d = BigInt::from(self.d);
        if self.omega_is_half() {
            // x^2 + xy + (1+d)/4 y^2
            let c = (BigInt::one() + d) / 4;
            &self.x * &self.x + &self.x * &self.y + c * &self.y * &self.y
        } else {
            &self.x * &self.x + d * &self.y * &self.y
        }
    }

    pub fn conj(&self) -> Self {
        if self.omega_is_half() {
            QuadInt { d: self.d, x: &self.x + &self.y, y: -&self.y }
        } else {
            QuadInt { d: self.d, x: self.x.clone(), y: -&self.y }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuadIntError> {
        self.check(other)?;
        Ok(QuadInt { d: self.d, x: &self.x + &other.x, y: &self.y + &other.y })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuadIntError> {
        self.check(other)?;
        Ok(QuadInt { d: self.d, x: &self.x - &other.x, y: &self.y - &other.y })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QuadIntError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let xx = &self.x * &other.x;
        let yy = &self.y * &other.y;
        let cross = &self.x * &other.y + &self.y * &other.x;
        if self.omega_is_half() {
            // omega^2 = omega - (1+d)/4
            let c = BigInt::from((1 + self.d) / 4);
            QuadInt { d: self.d, x: xx - c * &yy, y: cross + yy }
        } else {
            QuadInt { d: self.d, x: xx - BigInt::from(self.d) * yy, y: cross }
        }
    }

    /// Returns `r` with `q * r == p` if `q` divides `p`, `None` otherwise.
    pub fn divide_exact(&self, q: &Self) -> Result<Option<Self>, QuadIntError> {
        self.check(q)?;
        if q.is_zero() {
            return Err(QuadIntError::DivisionByZero);
        }
        // p * conj(q) = r * norm(q); solve coordinate-wise.
        let num = self.mul_unchecked(&q.conj());
        let n = q.norm();
        let (qx, rx) = num.x.div_rem(&n);
        let (qy, ry) = num.y.div_rem(&n);
        if rx.is_zero() && ry.is_zero() {
            Ok(Some(QuadInt { d: self.d, x: qx, y: qy }))
        } else {
            Ok(None)
        }
    }

    pub fn divides(&self, p: &Self) -> Result<bool, QuadIntError> {
        Ok(p.divide_exact(self)?.is_some())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Value as a complex float (omega evaluated numerically).
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let s = (self.d as f64).sqrt();
        if self.omega_is_half() {
            num_complex::Complex64::new(x + y / 2.0, y * s / 2.0)
        } else {
            num_complex::Complex64::new(x, y * s)
        }
    }

    /// Sign convention used for projective canonicalisation: negative iff
    /// `x < 0`, or `x == 0` and `y < 0`.
    pub fn is_negative(&self) -> bool {
        self.x.is_negative() || (self.x.is_zero() && self.y.is_negative())
    }

    pub fn reduce(&self, modulus: &Arc<GaussianModulus>) -> Result<Residue, QuadIntError> {
        modulus.reduce(self)
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "ring parameter mismatch");
        QuadInt { d: self.d, x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "ring parameter mismatch");
        QuadInt { d: self.d, x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl std::ops::Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "ring parameter mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { d: self.d, x: -&self.x, y: -&self.y }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { d: self.d, x: -self.x, y: -self.y }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = if self.d == 1 { "i".to_string() } else { "w".to_string() };
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let ypart = if self.y.is_one() {
            unit.clone()
        } else if self.y == -BigInt::one() {
            format!("-{unit}")
        } else {
            format!("{}{unit}", self.y)
        };
        if self.x.is_zero() {
            write!(f, "{ypart}")
        } else if self.y.is_negative() {
            write!(f, "{}{ypart}", self.x)
        } else {
            write!(f, "{}+{ypart}", self.x)
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{self}")
        } else {
            write!(f, "{self} (d={})", self.d)
        }
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` and so on.
impl FromStr for QuadInt {
    type Err = QuadIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QuadIntError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let parse_int = |p: &str| -> Result<BigInt, QuadIntError> {
            match p {
                "" | "+" => Ok(BigInt::one()),
                "-" => Ok(-BigInt::one()),
                _ => {
                    let digits = p.strip_prefix('+').unwrap_or(p);
                    BigInt::from_str(digits).map_err(|_| err())
                }
            }
        };
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i)
                .last();
            let (re, im) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("", body),
            };
            if im.chars().any(|c| !(c.is_ascii_digit() || c == '+' || c == '-')) {
                return Err(err());
            }
            let x = if re.is_empty() { BigInt::zero() } else { BigInt::from_str(re.strip_prefix('+').unwrap_or(re)).map_err(|_| err())? };
            let y = parse_int(im)?;
            Ok(QuadInt::gaussian(x, y))
        } else {
            let x = BigInt::from_str(t.strip_prefix('+').unwrap_or(&t)).map_err(|_| err())?;
            Ok(QuadInt::gaussian(x, 0))
        }
    }
}

/// The ideal `alpha * Z[i]` together with the Hermite normal form of its
/// lattice: rows `(p, q)` and `(0, s)` with `p * s = norm(alpha)` and
/// `0 <= q < s`.
#[derive(Debug, Clone)]
pub struct GaussianModulus {
    alpha: QuadInt,
    p: BigInt,
    q: BigInt,
    s: BigInt,
}

impl PartialEq for GaussianModulus {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.s == other.s
    }
}

impl Eq for GaussianModulus {}

impl GaussianModulus {
    pub fn new(alpha: &QuadInt) -> Result<Arc<Self>, QuadIntError> {
        if alpha.d != 1 {
            return Err(QuadIntError::UnsupportedRing(alpha.d));
        }
        if alpha.is_zero() {
            return Err(QuadIntError::DivisionByZero);
        }
        let (a, b) = (&alpha.x, &alpha.y);
        // rows (a, b) and (-b, a) span alpha * Z[i]
        let eg = a.extended_gcd(&-b);
        let (mut g, mut u, mut v) = (eg.gcd, eg.x, eg.y);
        if g.is_negative() {
            g = -g;
            u = -u;
            v = -v;
        }
        let n = alpha.norm();
        let s = &n / &g;
        let q = (&u * b + &v * a).mod_floor(&s);
        Ok(Arc::new(GaussianModulus { alpha: alpha.clone(), p: g, q, s }))
    }

    pub fn alpha(&self) -> &QuadInt {
        &self.alpha
    }

    /// Number of residue classes, `norm(alpha)`.
    pub fn order(&self) -> BigInt {
        &self.p * &self.s
    }

    fn canonical(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let k = x.div_floor(&self.p);
        let x1 = x - &k * &self.p;
        let y1 = y - &k * &self.q;
        (x1, y1.mod_floor(&self.s))
    }

    pub fn reduce(self: &Arc<Self>, q: &QuadInt) -> Result<Residue, QuadIntError> {
        if q.d != 1 {
            return Err(QuadIntError::UnsupportedRing(q.d));
        }
        let (x, y) = self.canonical(&q.x, &q.y);
        Ok(Residue { modulus: Arc::clone(self), x, y })
    }

    /// All residues, in canonical order.
    pub fn residues(self: &Arc<Self>) -> Vec<Residue> {
        let p = self.p.to_i64().expect("modulus too large to enumerate");
        let s = self.s.to_i64().expect("modulus too large to enumerate");
        let mut out = Vec::with_capacity((p * s) as usize);
        for x in 0..p {
            for y in 0..s {
                out.push(Residue { modulus: Arc::clone(self), x: x.into(), y: y.into() });
            }
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> Residue {
        Residue { modulus: Arc::clone(self), x: BigInt::zero(), y: BigInt::zero() }
    }

    pub fn one(self: &Arc<Self>) -> Residue {
        self.reduce(&QuadInt::gaussian(1, 0)).expect("d = 1")
    }
}

/// An element of `Z[i]/(alpha)` in canonical lattice form.
#[derive(Clone)]
pub struct Residue {
    modulus: Arc<GaussianModulus>,
    x: BigInt,
    y: BigInt,
}

impl PartialEq for Residue {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.modulus == other.modulus
    }
}

impl Eq for Residue {}

impl Hash for Residue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Residue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Residue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.x, &self.y).cmp(&(&other.x, &other.y))
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", QuadInt::gaussian(self.x.clone(), self.y.clone()), self.modulus.alpha)
    }
}

impl Residue {
    pub fn modulus(&self) -> &Arc<GaussianModulus> {
        &self.modulus
    }

    pub fn rep(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    pub fn lift(&self) -> QuadInt {
        QuadInt::gaussian(self.x.clone(), self.y.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn make(&self, x: BigInt, y: BigInt) -> Residue {
        let (x, y) = self.modulus.canonical(&x, &y);
        Residue { modulus: Arc::clone(&self.modulus), x, y }
    }

    pub fn add(&self, o: &Residue) -> Residue {
        debug_assert!(self.modulus == o.modulus);
        self.make(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Residue) -> Residue {
        debug_assert!(self.modulus == o.modulus);
        self.make(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn mul(&self, o: &Residue) -> Residue {
        debug_assert!(self.modulus == o.modulus);
        self.make(&self.x * &o.x - &self.y * &o.y, &self.x * &o.y + &self.y * &o.x)
    }

    pub fn neg(&self) -> Residue {
        self.make(-&self.x, -&self.y)
    }

    /// Canonical sign rule for residues: `r` is negative when its
    /// representative is lexicographically larger than that of `-r`.
    pub fn is_negative(&self) -> bool {
        let n = self.neg();
        (&self.x, &self.y) > (&n.x, &n.y)
    }
}

/// A ring isomorphism `Z[i]/(alpha) -> F_p`, as the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMap {
    pub prime: u64,
    pub image_of_i: u64,
}

impl FieldMap {
    pub fn apply(&self, q: &QuadInt) -> u64 {
        let p = BigInt::from(self.prime);
        let v = (&q.x + &q.y * BigInt::from(self.image_of_i)).mod_floor(&p);
        v.to_u64().expect("reduced below p")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// When `Z[i]/(alpha)` is the prime field `F_p` (`norm(alpha) = p` prime),
/// returns the isomorphism; otherwise `None`.
pub fn field_map(modulus: &QuadInt) -> Option<FieldMap> {
    if modulus.d != 1 || modulus.is_zero() {
        return None;
    }
    let p = modulus.norm().to_u64()?;
    if !is_prime(p) {
        return None;
    }
    // alpha = a + b i with p = a^2 + b^2 prime, so b is a unit mod p
    // (or p = 2). Then i = -a / b in F_p.
    let pb = BigInt::from(p);
    let a = modulus.x.mod_floor(&pb).to_u64()?;
    let b = modulus.y.mod_floor(&pb).to_u64()?;
    if b == 0 {
        return None;
    }
    let binv = modpow(b, p - 2, p);
    let i_img = ((p - a) % p) * binv % p;
    let map = FieldMap { prime: p, image_of_i: i_img };
    debug_assert_eq!((i_img * i_img + 1) % p, 0);
    Some(map)
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64, y: i64) -> QuadInt {
        QuadInt::gaussian(x, y)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(g(3, 2).mul(&g(3, -2)).unwrap(), g(13, 0));
        assert_eq!(g(3, 2).mul(&g(-1, 1)).unwrap(), g(-5, 1));
        assert_eq!(g(3, 2).mul(&g(1, 0)).unwrap(), g(3, 2));
        let w = QuadInt::new(3, 1, 1).unwrap();
        assert_eq!(g(1, 1).mul(&w), Err(QuadIntError::RingMismatch(1, 3)));
    }

    #[test]
    fn norms() {
        assert_eq!(g(3, 2).norm(), BigInt::from(13));
        assert_eq!(g(0, 0).norm(), BigInt::zero());
        assert_eq!(g(1, 1).norm(), BigInt::from(2));
        // omega = (1 + sqrt(-3))/2 has norm 1
        assert_eq!(QuadInt::new(3, 0, 1).unwrap().norm(), BigInt::one());
        assert_eq!(QuadInt::new(2, 1, 1).unwrap().norm(), BigInt::from(3));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadInt::new(4, 1, 0).is_err());
        assert!(QuadInt::new(0, 1, 0).is_err());
    }

    #[test]
    fn divide_exact_examples() {
        assert_eq!(g(-5, 1).divide_exact(&g(3, 2)).unwrap(), Some(g(-1, 1)));
        assert_eq!(g(13, 0).divide_exact(&g(3, 2)).unwrap(), Some(g(3, -2)));
        assert_eq!(g(1, 0).divide_exact(&g(3, 2)).unwrap(), None);
        assert_eq!(g(1, 0).divide_exact(&g(0, 0)), Err(QuadIntError::DivisionByZero));
    }

    #[test]
    fn reduce_examples() {
        let m = GaussianModulus::new(&g(3, 2)).unwrap();
        assert!(m.reduce(&g(13, 0)).unwrap().is_zero());
        assert_eq!(m.reduce(&g(0, 1)).unwrap(), m.reduce(&g(5, 0)).unwrap());
        assert!(m.reduce(&g(-5, 1)).unwrap().is_zero());
        assert_eq!(m.order(), BigInt::from(13));
        let w = QuadInt::new(2, 1, 1).unwrap();
        assert_eq!(GaussianModulus::new(&w).unwrap_err(), QuadIntError::UnsupportedRing(2));
    }

    #[test]
    fn field_maps() {
        let f = field_map(&g(3, 2)).unwrap();
        assert_eq!(f, FieldMap { prime: 13, image_of_i: 5 });
        let f2 = field_map(&g(1, 1)).unwrap();
        assert_eq!(f2.prime, 2);
        assert_eq!(f2.apply(&g(0, 1)), 1);
        assert!(field_map(&g(2, 0)).is_none());
        // consistency with reduce on a grid
        let m = GaussianModulus::new(&g(3, 2)).unwrap();
        for x in -7..7 {
            for y in -7..7 {
                for x2 in -3..3 {
                    let a = g(x, y);
                    let b = g(x2, 1);
                    let same = m.reduce(&a).unwrap() == m.reduce(&b).unwrap();
                    assert_eq!(same, f.apply(&a) == f.apply(&b));
                }
            }
        }
    }

    #[test]
    fn parse_gaussian() {
        for (s, v) in [
            ("3+2i", g(3, 2)),
            ("-5+i", g(-5, 1)),
            ("3-2i", g(3, -2)),
            ("7", g(7, 0)),
            ("-2i", g(0, -2)),
            ("i", g(0, 1)),
            ("-i", g(0, -1)),
            (" 1 + i ", g(1, 1)),
        ] {
            assert_eq!(s.parse::<QuadInt>().unwrap(), v, "{s}");
        }
        for bad in ["", "3+", "x", "3+2j", "2ii"] {
            assert!(bad.parse::<QuadInt>().is_err(), "{bad}");
        }
        for v in [g(3, 2), g(-5, 1), g(0, -1), g(4, 0), g(0, 7), g(-2, -3)] {
            assert_eq!(v.to_string().parse::<QuadInt>().unwrap(), v);
        }
    }

    #[test]
    fn residue_count_matches_norm() {
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                let a = g(x, y);
                if a.is_zero() || a.norm() > BigInt::from(200) {
                    continue;
                }
                let m = GaussianModulus::new(&a).unwrap();
                // the box [0, n) x [0, n) contains a full set of classes mod
                // n Z[i], which is contained in alpha Z[i]
                let n = a.norm().to_i64().unwrap();
                let mut seen = std::collections::HashSet::new();
                for u in 0..n {
                    for v in 0..n {
                        let r = m.reduce(&g(u, v)).unwrap();
                        seen.insert((r.rep().0.clone(), r.rep().1.clone()));
                    }
                }
                assert_eq!(seen.len() as i64, n, "alpha = {a}");
                assert_eq!(m.residues().len() as i64, n);
            }
        }
    }
}
