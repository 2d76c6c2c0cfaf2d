//! The coefficient ring of finite formal sums `Σ a_λ T^λ` with `a_λ ∈ Z2`
//! and exact rational exponents, together with its filtration projections.
//!
//! Coefficients are bits, so an element is just its support: the set of
//! exponents carrying a one. Addition is symmetric difference and the
//! product is the convolution of supports with mod-2 cancellation.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::f2::{F2Matrix, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaParseError {
    #[error("invalid rational `{0}` (expected p or p/q)")]
    Rational(String),
    #[error("invalid term `{0}` (expected 1*T^(p/q))")]
    Term(String),
}

/// An exact rational exponent (an energy or symplectic area).
///
/// Values whose reduced numerator and denominator fit in `i64` are kept
/// inline; anything larger falls back to a big rational. The form is
/// canonical, so derived equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, positive denominator.
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut a, mut b) = (a as u64, b as u64);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        return a as i128;
    }
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i128
}

impl Exponent {
    pub fn zero() -> Self {
        Self(Repr::Small(0, 1))
    }

    /// Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_i128(numer as i128, denom as i128)
    }

    pub fn integer(n: i64) -> Self {
        Self(Repr::Small(n, 1))
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Self(Repr::Small(n, d)),
            _ => Self(Repr::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d))))),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Self(Repr::Small(n, d)),
            _ => Self(Repr::Big(Box::new(r))),
        }
    }

    /// Rounds `value` to the nearest multiple of `1/denominator`.
    ///
    /// Returns `None` for non-finite input or a zero denominator.
    pub fn snap(value: f64, denominator: u64) -> Option<Self> {
        if !value.is_finite() || denominator == 0 {
            return None;
        }
        let scaled = (value * denominator as f64).round();
        let numer = BigInt::from(scaled as i128);
        Some(Self::from_rational(BigRational::new(numer, BigInt::from(denominator))))
    }

    pub fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exponent {
    type Err = OmegaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t.contains(char::is_whitespace) {
            return Err(OmegaParseError::Rational(s.to_string()));
        }
        if let Some((_, d)) = t.split_once('/') {
            if d.trim_start_matches('+').chars().all(|c| c == '0') {
                return Err(OmegaParseError::Rational(s.to_string()));
            }
        }
        BigRational::from_str(t)
            .map(Self::from_rational)
            .map_err(|_| OmegaParseError::Rational(s.to_string()))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) if b == d => {
                Exponent::from_i128(*a as i128 + *c as i128, *b as i128)
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Exponent::from_i128(a * d + c * b, b * d)
            }
            _ => Exponent::from_rational(self.to_rational() + rhs.to_rational()),
        }
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        match &self.0 {
            Repr::Small(n, d) if *n != i64::MIN => Exponent(Repr::Small(-n, *d)),
            _ => Exponent::from_rational(-self.to_rational()),
        }
    }
}

/// An element of the ring: the set of exponents with coefficient one.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaElement {
    terms: BTreeSet<Exponent>,
}

impl OmegaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Exponent::zero())
    }

    /// `T^λ`.
    pub fn monomial(exponent: Exponent) -> Self {
        Self {
            terms: BTreeSet::from([exponent]),
        }
    }

    /// Sums `T^λ` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = Exponent>>(exponents: I) -> Self {
        let mut out = Self::zero();
        for e in exponents {
            out.toggle(e);
        }
        out
    }

    /// Sums `T^λ` over `exps`, consuming it; pairs cancel.
    fn from_unsorted(mut exps: Vec<Exponent>) -> Self {
        exps.sort_unstable();
        let mut kept = Vec::with_capacity(exps.len());
        let mut it = exps.into_iter().peekable();
        while let Some(e) = it.next() {
            let mut odd = true;
            while it.peek() == Some(&e) {
                it.next();
                odd = !odd;
            }
            if odd {
                kept.push(e);
            }
        }
        Self {
            terms: kept.into_iter().collect(),
        }
    }

    fn push_products(&self, rhs: &OmegaElement, acc: &mut Vec<Exponent>) {
        for a in &self.terms {
            for b in &rhs.terms {
                acc.push(a + b);
            }
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &Exponent) -> bool {
        self.terms.contains(exponent)
    }

    /// Adds `T^λ` in place.
    pub fn toggle(&mut self, exponent: Exponent) {
        if !self.terms.remove(&exponent) {
            self.terms.insert(exponent);
        }
    }

    pub fn add_assign(&mut self, other: &OmegaElement) {
        for e in &other.terms {
            self.toggle(e.clone());
        }
    }

    /// Multiplies by `T^shift`.
    pub fn shift(&self, shift: &Exponent) -> OmegaElement {
        Self {
            terms: self.terms.iter().map(|e| e + shift).collect(),
        }
    }

    /// `Π+`: the terms with exponent `λ >= 0`.
    pub fn proj_nonneg(&self) -> OmegaElement {
        Self {
            terms: self.terms.iter().filter(|e| !e.is_negative()).cloned().collect(),
        }
    }

    /// `Π-`: the terms with exponent `λ <= 0`.
    pub fn proj_nonpos(&self) -> OmegaElement {
        Self {
            terms: self.terms.iter().filter(|e| !e.is_positive()).cloned().collect(),
        }
    }

    /// The `T^0` coefficient.
    pub fn constant_term(&self) -> bool {
        self.terms.contains(&Exponent::zero())
    }

    pub fn min_exponent(&self) -> Option<&Exponent> {
        self.terms.first()
    }

    pub fn max_exponent(&self) -> Option<&Exponent> {
        self.terms.last()
    }
}

impl Add for &OmegaElement {
    type Output = OmegaElement;
    fn add(self, rhs: &OmegaElement) -> OmegaElement {
        OmegaElement {
            terms: self.terms.symmetric_difference(&rhs.terms).cloned().collect(),
        }
    }
}

impl Add for OmegaElement {
    type Output = OmegaElement;
    fn add(self, rhs: OmegaElement) -> OmegaElement {
        &self + &rhs
    }
}

impl Mul for &OmegaElement {
    type Output = OmegaElement;
    fn mul(self, rhs: &OmegaElement) -> OmegaElement {
        let mut acc = Vec::with_capacity(self.len() * rhs.len());
        self.push_products(rhs, &mut acc);
        OmegaElement::from_unsorted(acc)
    }
}

impl Mul for OmegaElement {
    type Output = OmegaElement;
    fn mul(self, rhs: OmegaElement) -> OmegaElement {
        &self * &rhs
    }
}

impl fmt::Display for OmegaElement {
    /// Renders `1*T^(p/q) + 1*T^(r/s)` in ascending exponent order, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, e) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "1*T^({e})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OmegaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for OmegaElement {
    type Err = OmegaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            let body = term
                .strip_prefix("1*T^(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| OmegaParseError::Term(term.to_string()))?;
            out.toggle(body.parse()?);
        }
        Ok(out)
    }
}

/// A dense matrix with entries in the ring.
#[derive(Clone, PartialEq, Eq)]
pub struct OmegaMatrix {
    rows: usize,
    cols: usize,
    data: Vec<OmegaElement>,
}

impl OmegaMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![OmegaElement::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_f2(&F2Matrix::identity(n))
    }

    /// Extension of scalars: every one becomes `T^0`.
    pub fn from_f2(m: &F2Matrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for (r, c) in m.nonzero_entries() {
            out.set(r, c, OmegaElement::one());
        }
        out
    }

    /// `T^λ · m` for a matrix over F2.
    pub fn monomial_times(m: &F2Matrix, exponent: &Exponent) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for (r, c) in m.nonzero_entries() {
            out.set(r, c, OmegaElement::monomial(exponent.clone()));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &OmegaElement {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: OmegaElement) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = value;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut OmegaElement {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(OmegaElement::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &OmegaElement)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(|(i, e)| (i / self.cols.max(1), i % self.cols.max(1), e))
    }

    pub fn add(&self, other: &OmegaMatrix) -> Result<OmegaMatrix, ShapeError> {
        if self.shape() != other.shape() {
            return Err(ShapeError {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(OmegaMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn compose(&self, other: &OmegaMatrix) -> Result<OmegaMatrix, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError {
                op: "compose",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut acc: Vec<Vec<Exponent>> = vec![Vec::new(); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        a.push_products(b, &mut acc[r * other.cols + c]);
                    }
                }
            }
        }
        let data = acc.into_iter().map(OmegaElement::from_unsorted).collect();
        Ok(OmegaMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// The first nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, OmegaElement)> {
        self.entries()
            .find(|(_, _, e)| !e.is_zero())
            .map(|(r, c, e)| (r, c, e.clone()))
    }

    pub fn map_entries(&self, f: impl Fn(&OmegaElement) -> OmegaElement) -> OmegaMatrix {
        OmegaMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn proj_nonneg(&self) -> OmegaMatrix {
        self.map_entries(OmegaElement::proj_nonneg)
    }

    pub fn proj_nonpos(&self) -> OmegaMatrix {
        self.map_entries(OmegaElement::proj_nonpos)
    }

    /// All exponents occurring in any entry.
    pub fn exponent_support(&self) -> BTreeSet<Exponent> {
        self.data.iter().flat_map(|e| e.exponents().cloned()).collect()
    }

    /// The F2 matrix of `T^λ` coefficients.
    pub fn slice(&self, exponent: &Exponent) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows, self.cols);
        for (r, c, e) in self.entries() {
            if e.coefficient(exponent) {
                out.set(r, c, true);
            }
        }
        out
    }

    /// `Some(m)` when every entry is `0` or `T^0`.
    pub fn as_constant(&self) -> Option<F2Matrix> {
        let zero = Exponent::zero();
        let mut out = F2Matrix::zeros(self.rows, self.cols);
        for (r, c, e) in self.entries() {
            match e.len() {
                0 => {}
                1 if e.coefficient(&zero) => out.set(r, c, true),
                _ => return None,
            }
        }
        Some(out)
    }
}

impl fmt::Debug for OmegaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn t(n: i64, d: i64) -> OmegaElement {
        OmegaElement::monomial(q(n, d))
    }

    #[test]
    fn addition_examples() {
        assert!((&t(1, 1) + &t(1, 1)).is_zero());
        assert_eq!(&t(0, 1) + &OmegaElement::zero(), t(0, 1));
        let lhs = &t(1, 2) + &t(2, 1);
        let rhs = &t(2, 1) + &t(-1, 1);
        assert_eq!(&lhs + &rhs, &t(-1, 1) + &t(1, 2));
    }

    #[test]
    fn exponents_leave_the_inline_range_exactly() {
        let big = q(i64::MAX, 1);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        assert!(sum > big);
        assert_eq!(&sum + &-&big, big);
        let min = q(i64::MIN, 1);
        assert_eq!(&-&min + &min, Exponent::zero());
        assert_eq!(
            &q(1, i64::MAX) + &q(1, i64::MAX - 1),
            "18446744073709551613/85070591730234615838173535747377725442"
                .parse()
                .unwrap()
        );
        assert_eq!(q(6, -4), q(-3, 2));
        assert_eq!("4/6".parse::<Exponent>().unwrap(), q(2, 3));
    }

    proptest! {
        #[test]
        fn inline_and_big_arithmetic_agree(a in any::<i64>(), b in 1i64.., c in any::<i64>(), d in 1i64..) {
            let (x, y) = (q(a, b), q(c, d));
            let exact = x.to_rational() + y.to_rational();
            prop_assert_eq!(&x + &y, Exponent::from_rational(exact));
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
        }
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&t(2, 3) * &t(1, 3), t(1, 1));
        assert_eq!(&(&t(1, 1) + &t(-1, 1)) * &t(1, 1), &t(2, 1) + &t(0, 1));
        let x = &t(0, 1) + &t(1, 1);
        // cross terms 2*T^1 cancel
        assert_eq!(&x * &x, &t(0, 1) + &t(2, 1));
    }

    #[test]
    fn projection_examples() {
        let x = OmegaElement::from_exponents([q(-2, 1), q(0, 1), q(3, 1)]);
        assert_eq!(x.proj_nonneg(), &t(0, 1) + &t(3, 1));
        assert_eq!(x.proj_nonpos(), &t(-2, 1) + &t(0, 1));
        assert!(OmegaElement::zero().proj_nonneg().is_zero());
        assert!(t(-1, 3).proj_nonneg().is_zero());
        assert_eq!(t(0, 1).proj_nonpos(), t(0, 1));
        assert!(t(5, 1).proj_nonpos().is_zero());
    }

    #[test]
    fn rendering_round_trips() {
        let x = OmegaElement::from_exponents([q(1, 2), q(-1, 1), q(0, 1)]);
        let s = x.to_string();
        assert_eq!(s, "1*T^(-1) + 1*T^(0) + 1*T^(1/2)");
        assert_eq!(s.parse::<OmegaElement>().unwrap(), x);
        assert_eq!(OmegaElement::zero().to_string(), "0");
        assert!("T^2".parse::<OmegaElement>().is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("-3/6".parse::<Exponent>().unwrap(), q(-1, 2));
        assert_eq!("7".parse::<Exponent>().unwrap(), q(7, 1));
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("".parse::<Exponent>().is_err());
        assert_eq!(Exponent::snap(1.0 / 3.0, 1_000_000).unwrap(), q(333_333, 1_000_000));
        assert_eq!(Exponent::snap(0.5, 1_000_000).unwrap(), q(1, 2));
        assert!(Exponent::snap(f64::NAN, 10).is_none());
    }

    fn arb_exponent() -> impl Strategy<Value = Exponent> {
        (-20i64..20, 1i64..7).prop_map(|(n, d)| Exponent::new(n, d))
    }

    fn arb_element() -> impl Strategy<Value = OmegaElement> {
        proptest::collection::vec(arb_exponent(), 0..6).prop_map(OmegaElement::from_exponents)
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_element(), y in arb_element(), z in arb_element()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &OmegaElement::zero(), x.clone());
            prop_assert_eq!(&x * &OmegaElement::one(), x.clone());
            prop_assert!((&x * &OmegaElement::zero()).is_zero());
            prop_assert!((&x + &x).is_zero());
        }

        #[test]
        fn projections(x in arb_element(), y in arb_element()) {
            let zero_part = OmegaElement::from_bit(x.constant_term());
            prop_assert_eq!(&x.proj_nonneg() + &x.proj_nonpos(), &x + &zero_part);
            prop_assert_eq!(x.proj_nonneg().proj_nonneg(), x.proj_nonneg());
            prop_assert_eq!(x.proj_nonpos().proj_nonpos(), x.proj_nonpos());
            prop_assert_eq!((&x + &y).proj_nonneg(), &x.proj_nonneg() + &y.proj_nonneg());
            prop_assert_eq!((&x + &y).proj_nonpos(), &x.proj_nonpos() + &y.proj_nonpos());
        }

        #[test]
        fn display_parse_round_trip(x in arb_element()) {
            prop_assert_eq!(x.to_string().parse::<OmegaElement>().unwrap(), x);
        }
    }
}
