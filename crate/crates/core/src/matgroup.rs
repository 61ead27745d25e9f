//! Projective 2x2 determinant-one matrices over `Z[i]` and over residue
//! rings, trace classification, and complex translation length.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use serde::Serialize;
use thiserror::Error;

use crate::quadint::{GaussianModulus, QuadInt, QuadIntError, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("determinant is not 1")]
    NotUnimodular,
    #[error("ring mismatch between matrix entries")]
    RingMismatch,
    #[error("element is not loxodromic ({0:?})")]
    NotLoxodromic(IsomKind),
    #[error("enumeration guard exceeded: {needed} > {limit} matrices to scan")]
    GuardExceeded { needed: u128, limit: u128 },
    #[error(transparent)]
    Ring(#[from] QuadIntError),
}

/// Commutative ring operations needed by [`ProjMat`].
pub trait RingElem: Clone + Eq + Hash + Ord + fmt::Debug + Send + Sync {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Sign used to pick one of `{M, -M}`; exactly one of `e`, `-e` is
    /// negative unless `e == -e`.
    fn is_negative(&self) -> bool;
    fn same_ring(&self, o: &Self) -> bool;
}

impl RingElem for QuadInt {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        QuadInt::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        QuadInt::zero(self.d())
    }
    fn one_like(&self) -> Self {
        QuadInt::one(self.d())
    }
    fn is_negative(&self) -> bool {
        QuadInt::is_negative(self)
    }
    fn same_ring(&self, o: &Self) -> bool {
        self.d() == o.d()
    }
}

impl RingElem for Residue {
    fn add(&self, o: &Self) -> Self {
        Residue::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Residue::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Residue::mul(self, o)
    }
    fn neg(&self) -> Self {
        Residue::neg(self)
    }
    fn is_zero(&self) -> bool {
        Residue::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.modulus().zero()
    }
    fn one_like(&self) -> Self {
        self.modulus().one()
    }
    fn is_negative(&self) -> bool {
        Residue::is_negative(self)
    }
    fn same_ring(&self, o: &Self) -> bool {
        self.modulus() == o.modulus()
    }
}

/// A sign class `{M, -M}` of a determinant-one matrix `[[a, b], [c, d]]`,
/// stored by its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMat<R> {
    e: [R; 4],
}

pub type GaussMat = ProjMat<QuadInt>;
pub type ResidueMat = ProjMat<Residue>;

impl<R: RingElem> ProjMat<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Result<Self, MatError> {
        if !(a.same_ring(&b) && a.same_ring(&c) && a.same_ring(&d)) {
            return Err(MatError::RingMismatch);
        }
        let det = a.mul(&d).sub(&b.mul(&c));
        if det != a.one_like() {
            return Err(MatError::NotUnimodular);
        }
        Ok(Self::from_entries([a, b, c, d]))
    }

    fn from_entries(e: [R; 4]) -> Self {
        let flip = e.iter().find(|x| **x != x.neg()).is_some_and(|x| x.is_negative());
        if flip {
            let [a, b, c, d] = e;
            ProjMat { e: [a.neg(), b.neg(), c.neg(), d.neg()] }
        } else {
            ProjMat { e }
        }
    }

    pub fn identity_like(x: &R) -> Self {
        Self::from_entries([x.one_like(), x.zero_like(), x.zero_like(), x.one_like()])
    }

    pub fn identity(&self) -> Self {
        Self::identity_like(&self.e[0])
    }

    pub fn entries(&self) -> &[R; 4] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.e;
        b.is_zero() && c.is_zero() && a == d && (*a == a.one_like() || *a == a.one_like().neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, MatError> {
        if !self.e[0].same_ring(&o.e[0]) {
            return Err(MatError::RingMismatch);
        }
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        Self::from_entries([
            a.mul(p).add(&b.mul(r)),
            a.mul(q).add(&b.mul(s)),
            c.mul(p).add(&d.mul(r)),
            c.mul(q).add(&d.mul(s)),
        ])
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.e;
        Self::from_entries([d.clone(), b.neg(), c.neg(), a.clone()])
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Trace of the stored representative; the class only determines it up
    /// to sign.
    pub fn trace(&self) -> R {
        self.e[0].add(&self.e[3])
    }
}

impl<R: fmt::Debug> fmt::Debug for ProjMat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±[[{:?}, {:?}], [{:?}, {:?}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

impl GaussMat {
    pub fn gaussian(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Result<Self, MatError> {
        let g = |p: (i64, i64)| QuadInt::gaussian(p.0, p.1);
        Self::new(g(a), g(b), g(c), g(d))
    }

    pub fn to_complex(&self) -> [Complex64; 4] {
        [0, 1, 2, 3].map(|k| self.e[k].to_complex())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsomKind {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomClass {
    pub kind: IsomKind,
    pub trace: QuadInt,
}

/// Classifies a matrix over `O_d`. Parabolic means trace exactly `±2`
/// with `M != ±I`; elliptic means a real trace strictly inside `(-2, 2)`.
pub fn classify(m: &GaussMat) -> IsomClass {
    let trace = m.trace();
    // the trace is real exactly when its omega-coordinate vanishes
    let real = trace.y().is_zero();
    let kind = if m.is_identity() {
        IsomKind::Identity
    } else if real && trace.x().magnitude() == &BigUint::from(2u8) {
        IsomKind::Parabolic
    } else if real && trace.x().magnitude() < &BigUint::from(2u8) {
        IsomKind::Elliptic
    } else {
        IsomKind::Loxodromic
    };
    IsomClass { kind, trace }
}

/// Complex translation length `ell0 + i*theta` with
/// `2 cosh((ell0 + i theta)/2) = ±tr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexLength {
    pub ell0: f64,
    pub theta: f64,
}

impl ComplexLength {
    pub fn from_trace(tr: Complex64) -> Self {
        let half = (tr / 2.0).acosh();
        // acosh is defined up to sign; take the branch with positive real part
        let half = if half.re < 0.0 { -half } else { half };
        let ell0 = 2.0 * half.re;
        let mut theta = 2.0 * half.im;
        // theta is only meaningful mod 2 pi once the sign of the trace is
        // forgotten
        while theta <= -PI {
            theta += 2.0 * PI;
        }
        while theta > PI {
            theta -= 2.0 * PI;
        }
        ComplexLength { ell0, theta }
    }

    /// `2 cosh(l/2)`, equal to the trace up to sign.
    pub fn trace(&self) -> Complex64 {
        (Complex64::new(self.ell0, self.theta) / 2.0).cosh() * 2.0
    }
}

pub fn complex_length(m: &GaussMat) -> Result<ComplexLength, MatError> {
    let class = classify(m);
    if class.kind != IsomKind::Loxodromic {
        return Err(MatError::NotLoxodromic(class.kind));
    }
    Ok(ComplexLength::from_trace(class.trace.to_complex()))
}

pub fn reduce_mat(m: &GaussMat, modulus: &Arc<GaussianModulus>) -> Result<ResidueMat, MatError> {
    let [a, b, c, d] = m.entries();
    Ok(ProjMat::from_entries([
        modulus.reduce(a)?,
        modulus.reduce(b)?,
        modulus.reduce(c)?,
        modulus.reduce(d)?,
    ]))
}

/// Largest number of entry tuples [`enumerate_image`] will scan.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// The finite group `PSL_2(Z[i]/(alpha))`, as a list of sign classes with
/// an index lookup. Element 0 is the identity.
#[derive(Clone)]
pub struct FiniteImage {
    modulus: Arc<GaussianModulus>,
    elements: Vec<ResidueMat>,
    index: HashMap<ResidueMat, usize>,
}

impl fmt::Debug for FiniteImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteImage")
            .field("alpha", self.modulus.alpha())
            .field("order", &self.elements.len())
            .finish()
    }
}

impl FiniteImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn modulus(&self) -> &Arc<GaussianModulus> {
        &self.modulus
    }

    pub fn elements(&self) -> &[ResidueMat] {
        &self.elements
    }

    pub fn index_of(&self, m: &ResidueMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i].mul_unchecked(&self.elements[j]);
        self.index[&p]
    }

    pub fn identity(&self) -> ResidueMat {
        ProjMat::identity_like(&self.modulus.one())
    }

    /// Order of the subgroup generated by `gens`, by closure.
    pub fn subgroup_order(&self, gens: &[ResidueMat]) -> usize {
        let id = self.identity();
        let mut seen = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.mul_unchecked(g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len()
    }
}

/// Enumerates every sign class of determinant-one matrices over
/// `Z[i]/(alpha)` by scanning all entry tuples.
pub fn enumerate_image(alpha: &QuadInt) -> Result<FiniteImage, MatError> {
    let modulus = GaussianModulus::new(alpha)?;
    let n = modulus.order().to_u128().unwrap_or(u128::MAX);
    let needed = n.saturating_pow(4);
    if needed > ENUMERATION_GUARD {
        return Err(MatError::GuardExceeded { needed, limit: ENUMERATION_GUARD });
    }
    let res = modulus.residues();
    let one = modulus.one();
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    let id = ProjMat::identity_like(&one);
    index.insert(id.clone(), 0);
    elements.push(id);
    // precompute products to keep the scan cheap
    let k = res.len();
    let mut prod = vec![0usize; k * k];
    let pos: HashMap<Residue, usize> = res.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    for i in 0..k {
        for j in 0..k {
            prod[i * k + j] = pos[&res[i].mul(&res[j])];
        }
    }
    let one_idx = pos[&one];
    let mut diff = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            diff[i * k + j] = pos[&res[i].sub(&res[j])];
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let bc = prod[b * k + c];
                for d in 0..k {
                    if diff[prod[a * k + d] * k + bc] != one_idx {
                        continue;
                    }
                    let m = ProjMat::from_entries([res[a].clone(), res[b].clone(), res[c].clone(), res[d].clone()]);
                    if !index.contains_key(&m) {
                        index.insert(m.clone(), elements.len());
                        elements.push(m);
                    }
                }
            }
        }
    }
    Ok(FiniteImage { modulus, elements, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64, y: i64) -> QuadInt {
        QuadInt::gaussian(x, y)
    }

    fn t() -> GaussMat {
        GaussMat::gaussian((1, 0), (1, 0), (0, 0), (1, 0)).unwrap()
    }

    fn u() -> GaussMat {
        GaussMat::gaussian((1, 0), (0, 1), (0, 0), (1, 0)).unwrap()
    }

    #[test]
    fn rejects_bad_determinant() {
        assert_eq!(GaussMat::gaussian((2, 0), (0, 0), (0, 0), (1, 0)).unwrap_err(), MatError::NotUnimodular);
    }

    #[test]
    fn mat_mul_examples() {
        assert!(t().mul(&t().inverse()).unwrap().is_identity());
        assert_eq!(t().mul(&u()).unwrap(), u().mul(&t()).unwrap());
        let minus_i = GaussMat::gaussian((-1, 0), (0, 0), (0, 0), (-1, 0)).unwrap();
        assert_eq!(t().mul(&minus_i).unwrap(), t());
        assert!(minus_i.is_identity());
    }

    #[test]
    fn sign_canonical() {
        let m = GaussMat::gaussian((0, 0), (-1, 0), (1, 0), (0, 0)).unwrap();
        // first nonzero entry is b
        assert_eq!(m.entries()[1], g(1, 0));
        let l = GaussMat::gaussian((0, -1), (0, 0), (0, 0), (0, 1)).unwrap();
        assert_eq!(l.entries()[0], g(0, 1));
    }

    #[test]
    fn classify_examples() {
        let p = GaussMat::gaussian((1, 0), (13, 0), (0, 0), (1, 0)).unwrap();
        assert_eq!(classify(&p).kind, IsomKind::Parabolic);
        let a = GaussMat::gaussian((0, 0), (-1, 0), (1, 0), (0, 0)).unwrap();
        assert_eq!(classify(&a).kind, IsomKind::Elliptic);
        let h = GaussMat::gaussian((2, 0), (1, 0), (1, 0), (1, 0)).unwrap();
        assert_eq!(classify(&h).kind, IsomKind::Loxodromic);
        assert_eq!(classify(&t().identity()).kind, IsomKind::Identity);
        // trace 2i: |tr| = 2 but not parabolic
        let m = GaussMat::gaussian((0, 1), (1, 0), (0, 0), (0, 1));
        assert!(m.is_err());
        let m = GaussMat::gaussian((0, 1), (1, 0), (-2, 0), (0, 1)).unwrap();
        assert_eq!(m.trace(), g(0, 2));
        assert_eq!(classify(&m).kind, IsomKind::Loxodromic);
    }

    #[test]
    fn complex_length_examples() {
        let h = GaussMat::gaussian((2, 0), (1, 0), (1, 0), (1, 0)).unwrap();
        let cl = complex_length(&h).unwrap();
        assert!((cl.ell0 - 2.0 * 1.5f64.acosh()).abs() < 1e-12);
        assert!((cl.ell0 - 1.9248473002384139).abs() < 1e-12);
        assert_eq!(cl.theta, 0.0);
        let back = cl.trace();
        assert!((back - Complex64::new(3.0, 0.0)).norm() < 1e-12 * 3.0);
        assert!(matches!(complex_length(&t()), Err(MatError::NotLoxodromic(IsomKind::Parabolic))));
    }

    #[test]
    fn complex_length_of_trace_2i() {
        let m = GaussMat::gaussian((0, 1), (1, 0), (-2, 0), (0, 1)).unwrap();
        let cl = complex_length(&m).unwrap();
        assert!((cl.ell0 - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        assert!((cl.theta.abs() - PI).abs() < 1e-12);
        let back = cl.trace();
        let tr = Complex64::new(0.0, 2.0);
        assert!((back - tr).norm().min((back + tr).norm()) < 1e-12);
    }

    #[test]
    fn reduce_mat_examples() {
        let m = GaussianModulus::new(&g(3, 2)).unwrap();
        assert!(reduce_mat(&t().pow(13), &m).unwrap().is_identity());
        assert!(reduce_mat(&t().identity(), &m).unwrap().is_identity());
        assert!(!reduce_mat(&t(), &m).unwrap().is_identity());
        let x = t().pow(3).mul(&u()).unwrap();
        let y = u().pow(-2).mul(&t()).unwrap();
        assert_eq!(
            reduce_mat(&x.mul(&y).unwrap(), &m).unwrap(),
            reduce_mat(&x, &m).unwrap().mul(&reduce_mat(&y, &m).unwrap()).unwrap()
        );
    }

    #[test]
    fn enumerate_image_orders() {
        assert_eq!(enumerate_image(&g(1, 1)).unwrap().order(), 6);
        assert_eq!(enumerate_image(&g(3, 2)).unwrap().order(), 1092);
        assert_eq!(enumerate_image(&g(1, 0)).unwrap().order(), 1);
        assert_eq!(enumerate_image(&g(0, 1)).unwrap().order(), 1);
        // Z[i]/(2) is not a field
        let two = enumerate_image(&g(2, 0)).unwrap();
        assert!(two.order() > 1);
        assert!(matches!(enumerate_image(&g(6, 0)), Err(MatError::GuardExceeded { .. })));
    }
}
