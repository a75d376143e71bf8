//! Exact complex-rational scalars and dense square matrices.
//!
//! Every operator in this crate has entries in the Gaussian rationals, so all
//! comparisons are exact. Integer overflow panics (the workspace forces
//! `overflow-checks` on in every profile) instead of silently wrapping.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num::complex::Complex;
use num::rational::Rational64;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("cannot parse `{0}` as an exact complex number")]
    Parse(String),
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("division by zero")]
    DivisionByZero,
}

/// A complex number with rational real and imaginary parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex(Complex<Rational64>);

impl ExactComplex {
    pub const fn from_parts(re: Rational64, im: Rational64) -> Self {
        ExactComplex(Complex::new(re, im))
    }

    pub fn new(re: i64, im: i64) -> Self {
        Self::from_parts(Rational64::from_integer(re), Rational64::from_integer(im))
    }

    pub fn real(re: Rational64) -> Self {
        Self::from_parts(re, Rational64::zero())
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn re(&self) -> Rational64 {
        self.0.re
    }

    pub fn im(&self) -> Rational64 {
        self.0.im
    }

    pub fn conj(&self) -> Self {
        ExactComplex(self.0.conj())
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> Rational64 {
        self.0.norm_sqr()
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sqr().is_one()
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(ExactComplex(self.0 / rhs.0))
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        ExactComplex(Complex::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        ExactComplex(Complex::one())
    }
}

impl From<i64> for ExactComplex {
    fn from(v: i64) -> Self {
        Self::new(v, 0)
    }
}

impl From<Rational64> for ExactComplex {
    fn from(v: Rational64) -> Self {
        Self::real(v)
    }
}

impl Add for ExactComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ExactComplex(self.0 + rhs.0)
    }
}

impl AddAssign for ExactComplex {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0 + rhs.0;
    }
}

impl Sub for ExactComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ExactComplex(self.0 - rhs.0)
    }
}

impl Mul for ExactComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // skip the general product for the overwhelmingly common unit entries
        if self.0.im.is_zero() && rhs.0.im.is_zero() {
            return Self::real(self.0.re * rhs.0.re);
        }
        ExactComplex(self.0 * rhs.0)
    }
}

impl Neg for ExactComplex {
    type Output = Self;
    fn neg(self) -> Self {
        ExactComplex(-self.0)
    }
}

fn fmt_rational(r: &Rational64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical form `a/b+c/d i` (integers print without a denominator).
impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.0.re, f)?;
        f.write_str(if self.0.im.is_negative() { "-" } else { "+" })?;
        fmt_rational(&self.0.im.abs(), f)?;
        f.write_str(" i")
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<Rational64, ArithError> {
    let s = s.strip_prefix('+').unwrap_or(s);
    Rational64::from_str(s).map_err(|_| ArithError::Parse(whole.to_string()))
}

fn parse_imaginary(coeff: &str, whole: &str) -> Result<Rational64, ArithError> {
    match coeff {
        "" | "+" => Ok(Rational64::one()),
        "-" => Ok(-Rational64::one()),
        c => parse_rational(c, whole),
    }
}

/// Accepts the canonical form plus the shorthands `3/4`, `2 i`, `-i`.
impl FromStr for ExactComplex {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ArithError::Parse(s.to_string()));
        }
        let Some(body) = compact.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&compact, s)?));
        };
        let split = body
            .char_indices()
            .filter(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx)
            .next_back();
        match split {
            Some(idx) => {
                let re = parse_rational(&body[..idx], s)?;
                let im = parse_imaginary(&body[idx..], s)?;
                Ok(Self::from_parts(re, im))
            }
            None => Ok(Self::from_parts(
                Rational64::zero(),
                parse_imaginary(body, s)?,
            )),
        }
    }
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of comparing `a` against `±b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMatch {
    /// `a = b` only.
    Plus,
    /// `a = -b` only.
    Minus,
    /// Both hold, which forces `a = b = 0`.
    Both,
    Neither,
}

/// Dense `n × n` matrix over [`ExactComplex`], row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMatrix {
    n: usize,
    data: Vec<ExactComplex>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix side length must be positive");
        CMatrix {
            n,
            data: vec![ExactComplex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ExactComplex::one())
    }

    pub fn scalar(n: usize, value: ExactComplex) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = value;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExactComplex) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactComplex>>) -> Result<Self, ArithError> {
        let n = rows.len();
        if n == 0 {
            return Err(ArithError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != n {
                return Err(ArithError::NotSquare {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
            data.extend(entries);
        }
        Ok(CMatrix { n, data })
    }

    /// Convenience constructor from integer `(re, im)` pairs.
    pub fn from_int_rows(rows: &[&[(i64, i64)]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| ExactComplex::new(a, b)).collect())
            .collect();
        Self::from_rows(rows).expect("integer literal matrix must be square")
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> ExactComplex {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExactComplex) {
        self.data[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExactComplex]> {
        self.data.chunks(self.n)
    }

    pub fn entries(&self) -> &[ExactComplex] {
        &self.data
    }

    fn map(&self, f: impl Fn(ExactComplex) -> ExactComplex) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: ExactComplex) -> Self {
        self.map(|z| z * c)
    }

    pub fn conj_entrywise(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        kron(self, rhs)
    }

    /// `self` when `on`, the identity otherwise; spells out `A^{0|1}` exponents.
    pub fn pow01(&self, on: bool) -> CMatrix {
        if on {
            self.clone()
        } else {
            Self::identity(self.n)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar(ExactComplex::one())
    }

    pub fn is_scalar(&self, value: ExactComplex) -> bool {
        self.rows().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &z)| if i == j { z == value } else { z.is_zero() })
        })
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.get(i, j) == self.get(j, i).conj()))
    }

    pub fn is_unitary(&self) -> bool {
        (self * &self.dagger()).is_identity()
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|z| !z.is_zero()).count()
    }

    pub fn commutator(&self, rhs: &CMatrix) -> CMatrix {
        &(self * rhs) - &(rhs * self)
    }

    pub fn anticommutator(&self, rhs: &CMatrix) -> CMatrix {
        &(self * rhs) + &(rhs * self)
    }

    /// Decides which of `self = other`, `self = -other` hold.
    pub fn sign_match(&self, other: &CMatrix) -> SignMatch {
        assert_eq!(self.n, other.n, "sign_match on matrices of different size");
        let mut plus = true;
        let mut minus = true;
        for (&a, &b) in self.data.iter().zip(&other.data) {
            plus &= a == b;
            minus &= a == -b;
            if !plus && !minus {
                return SignMatch::Neither;
            }
        }
        match (plus, minus) {
            (true, true) => SignMatch::Both,
            (true, false) => SignMatch::Plus,
            (false, true) => SignMatch::Minus,
            (false, false) => SignMatch::Neither,
        }
    }

    /// The scalar `λ` with `self = λ·other`, if one exists.
    pub fn proportionality(&self, other: &CMatrix) -> Option<ExactComplex> {
        assert_eq!(
            self.n, other.n,
            "proportionality on matrices of different size"
        );
        let pivot = other.data.iter().position(|z| !z.is_zero());
        let Some(pivot) = pivot else {
            return self.is_zero().then(ExactComplex::one);
        };
        let lambda = self.data[pivot].checked_div(&other.data[pivot]).ok()?;
        (*self == other.scale(lambda)).then_some(lambda)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = ExactComplex;
    fn index(&self, (i, j): (usize, usize)) -> &ExactComplex {
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    // Operators here are mostly signed permutation matrices, so zeros are
    // skipped on both sides.
    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix product of mismatched sizes");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(&rhs.data[k * n..(k + 1) * n]) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix sum of mismatched sizes");
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix difference of mismatched sizes");
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

/// Kronecker product; block `(p, q)` of the result is `a[p, q] · b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.n, b.n);
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for p in 0..na {
        for q in 0..na {
            let s = a.get(p, q);
            if s.is_zero() {
                continue;
            }
            for r in 0..nb {
                for c in 0..nb {
                    out.data[(p * nb + r) * n + q * nb + c] = s * b.get(r, c);
                }
            }
        }
    }
    out
}

/// Left-to-right Kronecker product of a non-empty list.
pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let (first, rest) = factors
        .split_first()
        .expect("kron_all needs at least one factor");
    rest.iter().fold((*first).clone(), |acc, m| kron(&acc, m))
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.dagger()
}

pub fn conj_entrywise(a: &CMatrix) -> CMatrix {
    a.conj_entrywise()
}

/// Pauli matrix `σ_k` for `k ∈ 0..4` with `σ_0 = I`.
pub fn pauli(k: usize) -> CMatrix {
    match k {
        0 => CMatrix::identity(2),
        1 => CMatrix::from_int_rows(&[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]]),
        2 => CMatrix::from_int_rows(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]]),
        3 => CMatrix::from_int_rows(&[&[(1, 0), (0, 0)], &[(0, 0), (-1, 0)]]),
        _ => panic!("pauli index {k} out of range"),
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.n))?;
        for row in self.rows() {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<ExactComplex>>::deserialize(deserializer)?;
        CMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_blocks() {
        let s1 = pauli(1);
        let s3 = pauli(3);
        let k = kron(&s1, &s3);
        assert_eq!(k.n(), 4);
        for p in 0..2 {
            for q in 0..2 {
                for r in 0..2 {
                    for col in 0..2 {
                        let expected = s1.get(p, q) * s3.get(r, col);
                        assert_eq!(k.get(2 * p + r, 2 * q + col), expected);
                    }
                }
            }
        }
        // blocks [[0, σ₃], [σ₃, 0]]
        assert!(k.get(0, 0).is_zero() && k.get(0, 2) == c(1, 0) && k.get(1, 3) == c(-1, 0));
    }

    #[test]
    fn dagger_and_conj_on_paulis() {
        assert_eq!(dagger(&CMatrix::identity(3)), CMatrix::identity(3));
        assert_eq!(dagger(&pauli(2)), pauli(2));
        assert_eq!(conj_entrywise(&pauli(2)), -&pauli(2));
        assert_eq!(conj_entrywise(&pauli(1)), pauli(1));
        let i_id = CMatrix::scalar(2, ExactComplex::i());
        assert_eq!(
            conj_entrywise(&i_id),
            CMatrix::scalar(2, -ExactComplex::i())
        );
    }

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (pauli(1), pauli(2), pauli(3));
        assert_eq!(&s1 * &s2, s3.scale(ExactComplex::i()));
        assert!(s1.anticommutator(&s2).is_zero());
        for k in 0..4 {
            assert!((&pauli(k) * &pauli(k)).is_identity());
            assert!(pauli(k).is_hermitian());
        }
    }

    #[test]
    fn display_and_parse() {
        let z = ExactComplex::from_parts(q(1, 2), q(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4 i");
        assert_eq!(z.to_string().parse::<ExactComplex>().unwrap(), z);
        assert_eq!(c(0, 0).to_string(), "0+0 i");
        assert_eq!("i".parse::<ExactComplex>().unwrap(), c(0, 1));
        assert_eq!("-i".parse::<ExactComplex>().unwrap(), c(0, -1));
        assert_eq!(
            "-2/3".parse::<ExactComplex>().unwrap(),
            ExactComplex::real(q(-2, 3))
        );
        assert_eq!(" 5 - 2 i ".parse::<ExactComplex>().unwrap(), c(5, -2));
        assert_eq!(
            "-1-1/2 i".parse::<ExactComplex>().unwrap(),
            ExactComplex::from_parts(q(-1, 1), q(-1, 2))
        );
        assert_eq!(
            "7/2 i".parse::<ExactComplex>().unwrap(),
            ExactComplex::from_parts(q(0, 1), q(7, 2))
        );
        assert!("".parse::<ExactComplex>().is_err());
        assert!("1/0".parse::<ExactComplex>().is_err());
        assert!("abc".parse::<ExactComplex>().is_err());
        assert!("1+2j".parse::<ExactComplex>().is_err());
    }

    #[test]
    fn division() {
        let z = c(1, 1);
        assert_eq!(z.checked_div(&z).unwrap(), ExactComplex::one());
        assert_eq!(
            z.checked_div(&ExactComplex::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(c(0, 1).checked_div(&c(0, 1)).unwrap(), ExactComplex::one());
    }

    #[test]
    fn sign_match_cases() {
        let s1 = pauli(1);
        assert_eq!(s1.sign_match(&s1), SignMatch::Plus);
        assert_eq!(s1.sign_match(&-&s1), SignMatch::Minus);
        assert_eq!(s1.sign_match(&pauli(3)), SignMatch::Neither);
        let z = CMatrix::zeros(2);
        assert_eq!(z.sign_match(&z), SignMatch::Both);
    }

    #[test]
    fn proportionality_finds_phase() {
        let s2 = pauli(2);
        let scaled = s2.scale(c(0, -1));
        assert_eq!(scaled.proportionality(&s2), Some(c(0, -1)));
        assert_eq!(pauli(1).proportionality(&s2), None);
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err = CMatrix::from_rows(vec![vec![c(1, 0)], vec![c(1, 0), c(0, 0)]]).unwrap_err();
        assert!(matches!(err, ArithError::NotSquare { row: 0, .. }));
        assert_eq!(CMatrix::from_rows(vec![]), Err(ArithError::Empty));
    }

    #[test]
    fn json_round_trip() {
        let m = pauli(2).scale(ExactComplex::from_parts(q(1, 2), q(0, 1)));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[["0+0 i","0-1/2 i"],["0+1/2 i","0+0 i"]]"#);
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn exact() -> impl Strategy<Value = ExactComplex> {
            (-50i64..50, 1i64..12, -50i64..50, 1i64..12).prop_map(|(a, b, c, d)| {
                ExactComplex::from_parts(Rational64::new(a, b), Rational64::new(c, d))
            })
        }

        fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
            proptest::collection::vec(exact(), n * n)
                .prop_map(move |v| CMatrix::from_fn(n, |i, j| v[i * n + j]))
        }

        proptest! {
            #[test]
            fn display_parse_round_trip(z in exact()) {
                prop_assert_eq!(z.to_string().parse::<ExactComplex>().unwrap(), z);
            }

            #[test]
            fn field_laws(a in exact(), b in exact(), c in exact()) {
                prop_assert_eq!(a * (b + c), a * b + a * c);
                prop_assert_eq!((a * b).conj(), a.conj() * b.conj());
                if !b.is_zero() {
                    prop_assert_eq!(a.checked_div(&b).unwrap() * b, a);
                }
            }

            #[test]
            fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
                prop_assert_eq!(&a.kron(&b) * &c.kron(&d), (&a * &c).kron(&(&b * &d)));
                prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
            }
        }
    }
}
