//! The KO-dimension sign calculus.
//!
//! A real structure `J` on a triple fixes three signs through
//! `J² = εI`, `JD = ε′DJ` and `Jγ = ε″γJ`. Each even KO-dimension admits an
//! upper (`ε′ = ε″`) and a lower (`ε′ = -ε″`) sign set related by `J ↦ γJ`.
//! Odd triples have no grading; their `ε″` is an assigned label with
//! `ε″_{n+1,L} = ε″_{n,U}`, which makes graded products of any parity close
//! on upper and lower classes separately.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// `(1 - s)/2`: whether a `γ^{(1-ε)/2}` factor is present.
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// `(-1)^{b}` for a boolean exponent.
    pub fn parity_of(b: bool) -> Sign {
        if b {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::parity_of(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("sign must be ±1, got {v}")))
    }
}

/// The sign triple `{ε, ε′, ε″}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KOSigns {
    pub eps: Sign,
    pub eps_prime: Sign,
    pub eps_dprime: Sign,
}

impl KOSigns {
    pub const fn new(eps: Sign, eps_prime: Sign, eps_dprime: Sign) -> Self {
        KOSigns {
            eps,
            eps_prime,
            eps_dprime,
        }
    }

    /// Panics unless every value is `±1`.
    pub fn from_values(eps: i64, eps_prime: i64, eps_dprime: i64) -> Self {
        let s = |v| Sign::from_value(v).unwrap_or_else(|| panic!("sign must be ±1, got {v}"));
        KOSigns::new(s(eps), s(eps_prime), s(eps_dprime))
    }

    /// All 8 sign triples, `+` before `-`, `ε` most significant.
    pub fn all() -> impl Iterator<Item = KOSigns> {
        (0..8u8).map(|code| {
            let bit = |k: u8| Sign::parity_of(code & (4 >> k) != 0);
            KOSigns::new(bit(0), bit(1), bit(2))
        })
    }

    pub fn variant(&self) -> Variant {
        if self.eps_prime == self.eps_dprime {
            Variant::Upper
        } else {
            Variant::Lower
        }
    }
}

impl fmt::Display for KOSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.eps, self.eps_prime, self.eps_dprime)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_dim(dim: u8) -> Parity {
        if dim % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    Upper,
    Lower,
}

impl Variant {
    pub fn other(self) -> Variant {
        match self {
            Variant::Upper => Variant::Lower,
            Variant::Lower => Variant::Upper,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Variant::Upper => 'U',
            Variant::Lower => 'L',
        }
    }
}

/// A KO class `n_U` or `n_L`, `n` taken mod 8.
///
/// Ordering is upper classes first, then by dimension, matching the row
/// order of the product table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KOClass {
    variant: Variant,
    dim: u8,
}

impl KOClass {
    pub fn new(dim: i64, variant: Variant) -> Self {
        KOClass {
            variant,
            dim: dim.rem_euclid(8) as u8,
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn parity(&self) -> Parity {
        Parity::of_dim(self.dim)
    }

    /// The 16 classes in table order.
    pub fn all() -> impl Iterator<Item = KOClass> {
        [Variant::Upper, Variant::Lower]
            .into_iter()
            .flat_map(|v| (0..8).map(move |d| KOClass::new(d, v)))
    }

    /// Table index in `0..16`.
    pub fn index(&self) -> usize {
        let base = match self.variant {
            Variant::Upper => 0,
            Variant::Lower => 8,
        };
        base + self.dim as usize
    }

    pub fn with_variant(&self, variant: Variant) -> KOClass {
        KOClass { variant, ..*self }
    }
}

impl fmt::Display for KOClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.dim, self.variant.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a KO class (expected e.g. `2_U` or `7_L`)")]
pub struct ParseClassError(String);

impl FromStr for KOClass {
    type Err = ParseClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseClassError(s.to_string());
        let t = s.trim();
        let (dim, var) = t.split_at(t.len().checked_sub(1).ok_or_else(err)?);
        let dim = dim.strip_suffix('_').unwrap_or(dim);
        let dim: u8 = dim.parse().map_err(|_| err())?;
        if dim >= 8 {
            return Err(err());
        }
        let variant = match var {
            "U" | "u" => Variant::Upper,
            "L" | "l" => Variant::Lower,
            _ => return Err(err()),
        };
        Ok(KOClass::new(dim as i64, variant))
    }
}

impl Serialize for KOClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KOClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

const P: Sign = Sign::Plus;
const M: Sign = Sign::Minus;

/// The complete mod-8 table, upper classes `0..8` then lower classes `0..8`.
/// Odd `ε″` entries are the assigned labels.
pub const KO_TABLE: [KOSigns; 16] = [
    KOSigns::new(P, P, P), // 0_U
    KOSigns::new(P, M, M), // 1_U
    KOSigns::new(P, M, M), // 2_U
    KOSigns::new(M, P, P), // 3_U
    KOSigns::new(M, P, P), // 4_U
    KOSigns::new(M, M, M), // 5_U
    KOSigns::new(M, M, M), // 6_U
    KOSigns::new(P, P, P), // 7_U
    KOSigns::new(P, M, P), // 0_L
    KOSigns::new(P, M, P), // 1_L
    KOSigns::new(M, P, M), // 2_L
    KOSigns::new(M, P, M), // 3_L
    KOSigns::new(M, M, P), // 4_L
    KOSigns::new(M, M, P), // 5_L
    KOSigns::new(P, P, M), // 6_L
    KOSigns::new(P, P, M), // 7_L
];

pub fn signs_of_class(c: KOClass) -> KOSigns {
    KO_TABLE[c.index()]
}

/// Inverse of [`signs_of_class`]; total because the 16 `(signs, parity)`
/// pairs are distinct.
pub fn classify(s: KOSigns, p: Parity) -> KOClass {
    KOClass::all()
        .find(|c| c.parity() == p && signs_of_class(*c) == s)
        .expect("every (signs, parity) pair names exactly one KO class")
}

/// `J ↦ γJ`: `{ε, ε′, ε″} ↦ {ε″ε, -ε′, ε″}`.
pub fn flip_variant(s: KOSigns) -> KOSigns {
    KOSigns::new(s.eps_dprime * s.eps, -s.eps_prime, s.eps_dprime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiracChoice {
    /// `D_i ⊗ I + γ_i ⊗ D_j`
    D,
    /// `D_i ⊗ γ_j + I ⊗ D_j`
    DTilde,
}

impl fmt::Display for DiracChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiracChoice::D => "D",
            DiracChoice::DTilde => "Dtilde",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum SignError {
    /// The two expressions for the product `ε′` disagree: the factors mix
    /// upper and lower real structures.
    #[error("variant mismatch: the two product ε′ expressions give {left} and {right}")]
    VariantMismatch { left: Sign, right: Sign },
    /// The traditional product's `ε′` constraint cannot be met.
    #[error("undefined traditional product (choice {choice}): ε′ must equal both {required} and {available}")]
    UndefinedProduct {
        choice: DiracChoice,
        required: Sign,
        available: Sign,
    },
    #[error("factor parities do not match the predictor ({0})")]
    ParityMismatch(&'static str),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

fn consistent(left: Sign, right: Sign) -> Result<Sign, SignError> {
    if left == right {
        Ok(left)
    } else {
        Err(SignError::VariantMismatch { left, right })
    }
}

fn graded_even_rule(si: KOSigns, sj: KOSigns) -> Result<KOSigns, SignError> {
    let kozul = Sign::parity_of(si.eps_dprime.is_minus() && sj.eps_dprime.is_minus());
    let eps_prime = consistent(si.eps_prime * sj.eps_dprime, si.eps_dprime * sj.eps_prime)?;
    Ok(KOSigns::new(
        kozul * si.eps * sj.eps,
        eps_prime,
        si.eps_dprime * sj.eps_dprime,
    ))
}

/// Product signs of two even triples:
/// `ε = (-1)^{(1-ε″_i)(1-ε″_j)/4} ε_i ε_j`, `ε′ = ε′_i ε″_j = ε″_i ε′_j`,
/// `ε″ = ε″_i ε″_j`. Independent of the Kozul convention.
pub fn predict_even_even(si: KOSigns, sj: KOSigns) -> Result<KOSigns, SignError> {
    graded_even_rule(si, sj)
}

/// Even × odd (either order): the even–even rule with the odd factor's
/// assigned `ε″` label. The result is odd and carries `ε″_i ε″_j` as label.
pub fn predict_even_odd(si: KOSigns, sj: KOSigns) -> Result<KOSigns, SignError> {
    graded_even_rule(si, sj)
}

/// Odd × odd: `ε = (-1)^{(1+ε″_i)(1+ε″_j)/4} ε_i ε_j`,
/// `ε′ = -ε′_i ε″_j = -ε″_i ε′_j`, `ε″ = -ε″_i ε″_j`.
pub fn predict_odd_odd(si: KOSigns, sj: KOSigns) -> Result<KOSigns, SignError> {
    let kozul = Sign::parity_of(!si.eps_dprime.is_minus() && !sj.eps_dprime.is_minus());
    let eps_prime = consistent(
        -(si.eps_prime * sj.eps_dprime),
        -(si.eps_dprime * sj.eps_prime),
    )?;
    Ok(KOSigns::new(
        kozul * si.eps * sj.eps,
        eps_prime,
        -(si.eps_dprime * sj.eps_dprime),
    ))
}

/// Parity of a graded product.
pub fn product_parity(pi: Parity, pj: Parity) -> Parity {
    if pi == pj {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Dispatches to the parity-appropriate predictor.
pub fn predict_product(
    (si, pi): (KOSigns, Parity),
    (sj, pj): (KOSigns, Parity),
) -> Result<(KOSigns, Parity), SignError> {
    let signs = match (pi, pj) {
        (Parity::Even, Parity::Even) => predict_even_even(si, sj)?,
        (Parity::Odd, Parity::Odd) => predict_odd_odd(si, sj)?,
        _ => predict_even_odd(si, sj)?,
    };
    Ok((signs, product_parity(pi, pj)))
}

/// Predicted class of the graded product of two classes.
pub fn predict_class(ci: KOClass, cj: KOClass) -> Result<KOClass, SignError> {
    let (signs, parity) = predict_product(
        (signs_of_class(ci), ci.parity()),
        (signs_of_class(cj), cj.parity()),
    )?;
    Ok(classify(signs, parity))
}

/// Product signs under the traditional (ungraded) prescription with
/// `J = J_i ⊗ J_j`. Choice `D` needs `ε′_i = ε″_i ε′_j`; choice `D̃` needs
/// `ε′_i ε″_j = ε′_j`.
pub fn traditional_predict(
    si: KOSigns,
    sj: KOSigns,
    choice: DiracChoice,
) -> Result<KOSigns, SignError> {
    let (required, available) = match choice {
        DiracChoice::D => (si.eps_prime, si.eps_dprime * sj.eps_prime),
        DiracChoice::DTilde => (sj.eps_prime, si.eps_prime * sj.eps_dprime),
    };
    if required != available {
        return Err(SignError::UndefinedProduct {
            choice,
            required,
            available,
        });
    }
    Ok(KOSigns::new(
        si.eps * sj.eps,
        required,
        si.eps_dprime * sj.eps_dprime,
    ))
}

/// The class Table-1-style presentations use for an even dimension: the
/// member of the upper/lower pair with `ε′ = +1`.
pub fn classic_class(dim: u8) -> KOClass {
    assert!(
        dim % 2 == 0,
        "classic classes are defined for even dimensions only"
    );
    [Variant::Upper, Variant::Lower]
        .into_iter()
        .map(|v| KOClass::new(dim as i64, v))
        .find(|c| signs_of_class(*c).eps_prime == Sign::Plus)
        .expect("each even dimension has exactly one ε′ = +1 sign set")
}

/// One column of the traditional 8-column table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicColumn {
    pub dim: u8,
    pub eps: Sign,
    pub eps_prime: Sign,
    pub eps_dprime: Option<Sign>,
    /// The class these signs correspond to (even dimensions only).
    pub class: Option<KOClass>,
}

pub fn classic_table() -> Vec<ClassicColumn> {
    (0..8u8)
        .map(|dim| {
            if dim % 2 == 0 {
                let class = classic_class(dim);
                let s = signs_of_class(class);
                ClassicColumn {
                    dim,
                    eps: s.eps,
                    eps_prime: s.eps_prime,
                    eps_dprime: Some(s.eps_dprime),
                    class: Some(class),
                }
            } else {
                let s = signs_of_class(KOClass::new(dim as i64, Variant::Upper));
                ClassicColumn {
                    dim,
                    eps: s.eps,
                    eps_prime: s.eps_prime,
                    eps_dprime: None,
                    class: None,
                }
            }
        })
        .collect()
}

/// One column of the 12-column table that lists both even real structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendedColumn {
    pub dim: u8,
    pub eps: Sign,
    pub eps_prime: Sign,
    pub eps_dprime: Option<Sign>,
    pub variant: Option<Variant>,
}

/// Even dimensions grouped by `ε′ = -1` then `ε′ = +1`, then the odd ones.
pub fn extended_table() -> Vec<ExtendedColumn> {
    let mut cols = Vec::with_capacity(12);
    for eps_prime in [Sign::Minus, Sign::Plus] {
        for dim in (0..8u8).step_by(2) {
            let class = [Variant::Upper, Variant::Lower]
                .into_iter()
                .map(|v| KOClass::new(dim as i64, v))
                .find(|c| signs_of_class(*c).eps_prime == eps_prime)
                .expect("each even dimension has one sign set per ε′ value");
            let s = signs_of_class(class);
            cols.push(ExtendedColumn {
                dim,
                eps: s.eps,
                eps_prime: s.eps_prime,
                eps_dprime: Some(s.eps_dprime),
                variant: Some(class.variant()),
            });
        }
    }
    for dim in (1..8u8).step_by(2) {
        let s = signs_of_class(KOClass::new(dim as i64, Variant::Upper));
        cols.push(ExtendedColumn {
            dim,
            eps: s.eps,
            eps_prime: s.eps_prime,
            eps_dprime: None,
            variant: None,
        });
    }
    cols
}

/// One column of the complete 16-class table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompleteColumn {
    pub dim: u8,
    pub upper: KOSigns,
    pub lower: KOSigns,
}

pub fn complete_table() -> Vec<CompleteColumn> {
    (0..8u8)
        .map(|dim| CompleteColumn {
            dim,
            upper: signs_of_class(KOClass::new(dim as i64, Variant::Upper)),
            lower: signs_of_class(KOClass::new(dim as i64, Variant::Lower)),
        })
        .collect()
}

/// 16×16 grid of predicted graded products in [`KOClass::all`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable {
    cells: Vec<Result<KOClass, SignError>>,
}

impl ProductTable {
    pub fn get(&self, row: KOClass, col: KOClass) -> &Result<KOClass, SignError> {
        &self.cells[row.index() * 16 + col.index()]
    }

    pub fn rows(&self) -> impl Iterator<Item = (KOClass, &[Result<KOClass, SignError>])> {
        KOClass::all().zip(self.cells.chunks(16))
    }
}

pub fn product_table() -> ProductTable {
    let cells = KOClass::all()
        .flat_map(|r| KOClass::all().map(move |c| predict_class(r, c)))
        .collect();
    ProductTable { cells }
}

/// Record of the three-step derivation of the complete table from products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MnemonicDerivation {
    /// Step 1: the 8 even sign triples paired under `J ↦ γJ`.
    pub flip_pairs: Vec<[KOSigns; 2]>,
    /// Step 2: indices of pairs closed under the even product (exactly one).
    pub self_closed: Vec<usize>,
    pub dim0_pair: usize,
    pub dim4_pair: usize,
    /// Step 3: upper/lower assignments of the dim-0 pair that survive the
    /// `{ε, ε′}` chain (before applying `ε′_U = ε″_U`).
    pub chain_consistent_assignments: usize,
    /// Derived signs in [`KOClass::all`] order.
    pub table: Vec<(KOClass, KOSigns)>,
}

impl MnemonicDerivation {
    pub fn matches_stored_table(&self) -> bool {
        self.table.len() == 16 && self.table.iter().all(|(c, s)| signs_of_class(*c) == *s)
    }
}

fn inconsistency(msg: impl Into<String>) -> SignError {
    SignError::InternalInconsistency(msg.into())
}

fn eps_pair(s: &KOSigns) -> (Sign, Sign) {
    (s.eps, s.eps_prime)
}

/// Runs the `{ε, ε′}` chain from a chosen `(0_U, 0_L)`:
/// `{ε,ε′}_{2n,L} = {ε,ε′}_{2n+1} = {ε,ε′}_{2n+2,U}`.
/// Returns the 8 even assignments (indexed by dim/2, `[U, L]`) when the
/// chain closes consistently.
fn run_chain(
    zero: [KOSigns; 2],
    four_pair: [KOSigns; 2],
    free: &[KOSigns],
) -> Option<[[KOSigns; 2]; 4]> {
    let mut even = [[zero[0], zero[1]]; 4];
    for step in 1..4usize {
        let odd = eps_pair(&even[step - 1][1]);
        let pool: Vec<KOSigns> = if step == 2 {
            four_pair.to_vec()
        } else {
            free.to_vec()
        };
        let mut hits = pool.iter().filter(|s| eps_pair(s) == odd);
        let upper = *hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        even[step] = [upper, flip_variant(upper)];
    }
    (eps_pair(&even[3][1]) == eps_pair(&even[0][0])).then_some(even)
}

/// Derives the complete table from the sign calculus alone.
pub fn derive_table_mnemonic() -> Result<MnemonicDerivation, SignError> {
    // Step 1
    let mut flip_pairs: Vec<[KOSigns; 2]> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in KOSigns::all() {
        if seen.contains(&s) {
            continue;
        }
        let partner = flip_variant(s);
        if partner == s || flip_variant(partner) != s {
            return Err(inconsistency(format!(
                "flip is not a fixed-point-free involution at {s}"
            )));
        }
        seen.insert(s);
        seen.insert(partner);
        flip_pairs.push([s, partner]);
    }
    if flip_pairs.len() != 4 {
        return Err(inconsistency(format!(
            "expected 4 flip pairs, found {}",
            flip_pairs.len()
        )));
    }

    // Step 2
    let squares_into = |pair: &[KOSigns; 2], target: &[KOSigns; 2]| -> bool {
        pair.iter().all(|&x| {
            let defined: Vec<KOSigns> = pair
                .iter()
                .filter_map(|&y| predict_even_even(x, y).ok())
                .collect();
            !defined.is_empty() && defined.iter().all(|p| target.contains(p))
        })
    };
    let self_closed: Vec<usize> = (0..4)
        .filter(|&k| squares_into(&flip_pairs[k], &flip_pairs[k]))
        .collect();
    let [dim0_pair] = self_closed[..] else {
        return Err(inconsistency(format!(
            "expected one self-closed pair, found {}",
            self_closed.len()
        )));
    };
    let fours: Vec<usize> = (0..4)
        .filter(|&k| k != dim0_pair && squares_into(&flip_pairs[k], &flip_pairs[dim0_pair]))
        .collect();
    let [dim4_pair] = fours[..] else {
        return Err(inconsistency(format!(
            "expected one pair squaring to dim 0, found {}",
            fours.len()
        )));
    };

    // Step 3
    let free: Vec<KOSigns> = (0..4)
        .filter(|&k| k != dim0_pair && k != dim4_pair)
        .flat_map(|k| flip_pairs[k])
        .collect();
    let [a, b] = flip_pairs[dim0_pair];
    let chains: Vec<[[KOSigns; 2]; 4]> = [[a, b], [b, a]]
        .into_iter()
        .filter_map(|zero| run_chain(zero, flip_pairs[dim4_pair], &free))
        .collect();
    let chain_consistent_assignments = chains.len();
    let resolved: Vec<&[[KOSigns; 2]; 4]> = chains
        .iter()
        .filter(|even| even.iter().all(|[u, _]| u.eps_prime == u.eps_dprime))
        .collect();
    let [even] = resolved[..] else {
        return Err(inconsistency(format!(
            "expected one upper/lower assignment with ε′_U = ε″_U, found {}",
            resolved.len()
        )));
    };

    let mut upper = [KOSigns::new(P, P, P); 8];
    let mut lower = upper;
    for (k, [u, l]) in even.iter().enumerate() {
        upper[2 * k] = *u;
        lower[2 * k] = *l;
    }
    for k in 0..4 {
        let odd = 2 * k + 1;
        let (eps, eps_prime) = eps_pair(&lower[2 * k]);
        // ε″_{n+1,L} = ε″_{n,U}; the upper label is the other sign
        let label_lower = upper[2 * k].eps_dprime;
        lower[odd] = KOSigns::new(eps, eps_prime, label_lower);
        upper[odd] = KOSigns::new(eps, eps_prime, -label_lower);
        if upper[odd].variant() != Variant::Upper {
            return Err(inconsistency(format!(
                "odd label for {odd}_U breaks ε′_U = ε″_U"
            )));
        }
    }

    let table = KOClass::all()
        .map(|c| {
            let s = match c.variant() {
                Variant::Upper => upper[c.dim() as usize],
                Variant::Lower => lower[c.dim() as usize],
            };
            (c, s)
        })
        .collect();
    Ok(MnemonicDerivation {
        flip_pairs,
        self_closed,
        dim0_pair,
        dim4_pair,
        chain_consistent_assignments,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> KOClass {
        s.parse().unwrap()
    }

    fn s(a: i64, b: i64, c: i64) -> KOSigns {
        KOSigns::from_values(a, b, c)
    }

    #[test]
    fn table_lookups() {
        assert_eq!(signs_of_class(k("0_U")), s(1, 1, 1));
        assert_eq!(signs_of_class(k("2_L")), s(-1, 1, -1));
        assert_eq!(signs_of_class(k("1_U")), s(1, -1, -1));
        assert_eq!(classify(s(1, 1, 1), Parity::Even), k("0_U"));
        assert_eq!(classify(s(-1, -1, 1), Parity::Even), k("4_L"));
        assert_eq!(classify(s(1, 1, -1), Parity::Odd), k("7_L"));
    }

    #[test]
    fn table_is_a_bijection() {
        let pairs: BTreeSet<(KOSigns, Parity)> = KOClass::all()
            .map(|c| (signs_of_class(c), c.parity()))
            .collect();
        assert_eq!(pairs.len(), 16);
        for c in KOClass::all() {
            assert_eq!(classify(signs_of_class(c), c.parity()), c);
            assert_eq!(signs_of_class(c).variant(), c.variant(), "{c}");
        }
        for p in [Parity::Even, Parity::Odd] {
            for sgn in KOSigns::all() {
                assert_eq!(signs_of_class(classify(sgn, p)), sgn);
            }
        }
    }

    #[test]
    fn odd_classes_share_eps_pair() {
        for d in (1..8).step_by(2) {
            let u = signs_of_class(KOClass::new(d, Variant::Upper));
            let l = signs_of_class(KOClass::new(d, Variant::Lower));
            assert_eq!((u.eps, u.eps_prime), (l.eps, l.eps_prime));
            assert_eq!(u.eps_dprime, -l.eps_dprime);
        }
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip_variant(s(1, -1, -1)), s(-1, 1, -1));
        assert_eq!(flip_variant(s(1, 1, 1)), s(1, -1, 1));
        for sgn in KOSigns::all() {
            assert_eq!(flip_variant(flip_variant(sgn)), sgn);
        }
        for d in (0..8).step_by(2) {
            let u = KOClass::new(d, Variant::Upper);
            assert_eq!(
                flip_variant(signs_of_class(u)),
                signs_of_class(u.with_variant(Variant::Lower))
            );
        }
    }

    #[test]
    fn even_even_examples() {
        assert_eq!(
            predict_even_even(s(1, -1, -1), s(-1, -1, -1)),
            Ok(s(1, 1, 1))
        );
        assert_eq!(predict_even_even(s(1, 1, 1), s(1, 1, 1)), Ok(s(1, 1, 1)));
        // 2_U × 2_L: ε′_i ε″_j = (-1)(-1) = +1, ε″_i ε′_j = (-1)(+1) = -1
        assert_eq!(
            predict_even_even(signs_of_class(k("2_U")), signs_of_class(k("2_L"))),
            Err(SignError::VariantMismatch {
                left: Sign::Plus,
                right: Sign::Minus
            })
        );
    }

    #[test]
    fn even_odd_examples() {
        let r = predict_even_odd(signs_of_class(k("0_U")), signs_of_class(k("1_U"))).unwrap();
        assert_eq!(r, s(1, -1, -1));
        assert_eq!(classify(r, Parity::Odd), k("1_U"));
        let r = predict_even_odd(signs_of_class(k("2_U")), signs_of_class(k("1_U"))).unwrap();
        assert_eq!(r, s(-1, 1, 1));
        assert_eq!(classify(r, Parity::Odd), k("3_U"));
        assert!(matches!(
            predict_even_odd(signs_of_class(k("0_U")), signs_of_class(k("1_L"))),
            Err(SignError::VariantMismatch { .. })
        ));
    }

    #[test]
    fn odd_odd_examples() {
        let r = predict_odd_odd(signs_of_class(k("1_U")), signs_of_class(k("1_U"))).unwrap();
        assert_eq!(r, s(1, -1, -1));
        assert_eq!(classify(r, Parity::Even), k("2_U"));
        let r = predict_odd_odd(signs_of_class(k("7_L")), signs_of_class(k("1_L"))).unwrap();
        assert_eq!(classify(r, Parity::Even), k("0_L"));
        assert!(predict_odd_odd(signs_of_class(k("1_U")), signs_of_class(k("1_L"))).is_err());
    }

    #[test]
    fn traditional_examples() {
        let four = signs_of_class(classic_class(4));
        let two = signs_of_class(classic_class(2));
        let zero = signs_of_class(classic_class(0));
        assert_eq!(four, s(-1, 1, 1));
        assert_eq!(
            traditional_predict(four, four, DiracChoice::D),
            Ok(s(1, 1, 1))
        );
        assert_eq!(
            traditional_predict(two, two, DiracChoice::D),
            Err(SignError::UndefinedProduct {
                choice: DiracChoice::D,
                required: Sign::Plus,
                available: Sign::Minus
            })
        );
        assert_eq!(
            traditional_predict(zero, two, DiracChoice::D),
            Ok(s(-1, 1, -1))
        );
        // asymmetry: 0 × 2 works, 2 × 0 does not
        assert!(traditional_predict(two, zero, DiracChoice::D).is_err());
    }

    #[test]
    fn product_table_examples() {
        let t = product_table();
        assert_eq!(t.get(k("3_U"), k("6_U")), &Ok(k("1_U")));
        assert_eq!(t.get(k("5_L"), k("7_L")), &Ok(k("4_L")));
        assert!(matches!(
            t.get(k("0_U"), k("0_L")),
            Err(SignError::VariantMismatch { .. })
        ));
    }

    #[test]
    fn mnemonic_reproduces_table() {
        let m = derive_table_mnemonic().unwrap();
        assert_eq!(m.flip_pairs.len(), 4);
        assert_eq!(m.self_closed.len(), 1);
        assert!(m.flip_pairs[m.dim0_pair].contains(&s(1, 1, 1)));
        assert!(m.flip_pairs[m.dim4_pair].contains(&s(-1, 1, 1)));
        assert!(m.matches_stored_table());
        // the {ε, ε′} chain alone also admits the mirror assignment
        assert_eq!(m.chain_consistent_assignments, 2);
    }

    #[test]
    fn class_parsing() {
        assert_eq!(k("2_U"), KOClass::new(2, Variant::Upper));
        assert_eq!(
            "7l".parse::<KOClass>().unwrap(),
            KOClass::new(7, Variant::Lower)
        );
        assert!("8_U".parse::<KOClass>().is_err());
        assert!("2_X".parse::<KOClass>().is_err());
        assert!("".parse::<KOClass>().is_err());
        assert!("_U".parse::<KOClass>().is_err());
        assert_eq!(KOClass::new(-1, Variant::Upper).to_string(), "7_U");
    }

    #[test]
    fn classic_and_extended_layout() {
        let classic = classic_table();
        assert_eq!(classic.len(), 8);
        assert_eq!(classic[4].class, Some(k("4_U")));
        assert_eq!(classic[2].class, Some(k("2_L")));
        let ext = extended_table();
        assert_eq!(ext.len(), 12);
        assert!(ext[..4].iter().all(|c| c.eps_prime == Sign::Minus));
        assert!(ext[4..8].iter().all(|c| c.eps_prime == Sign::Plus));
        assert!(ext[8..].iter().all(|c| c.variant.is_none()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn class() -> impl Strategy<Value = KOClass> {
            (0i64..8, prop::bool::ANY).prop_map(|(d, up)| {
                KOClass::new(d, if up { Variant::Upper } else { Variant::Lower })
            })
        }

        proptest! {
            #[test]
            fn same_variant_dimensions_add(a in class(), b in class()) {
                let b = b.with_variant(a.variant());
                let c = predict_class(a, b).unwrap();
                prop_assert_eq!(c.dim(), (a.dim() + b.dim()) % 8);
                prop_assert_eq!(c.variant(), a.variant());
            }

            #[test]
            fn mixed_variants_mismatch(a in class(), b in class()) {
                let b = b.with_variant(a.variant().other());
                let is_mismatch = matches!(predict_class(a, b), Err(SignError::VariantMismatch { .. }));
                prop_assert!(is_mismatch);
            }

            #[test]
            fn predictors_are_symmetric(a in class(), b in class()) {
                prop_assert_eq!(predict_class(a, b).ok(), predict_class(b, a).ok());
            }

            #[test]
            fn flip_commutes_with_even_products(a in 0i64..4, b in 0i64..4, up in prop::bool::ANY) {
                let v = if up { Variant::Upper } else { Variant::Lower };
                let (sa, sb) = (signs_of_class(KOClass::new(2 * a, v)), signs_of_class(KOClass::new(2 * b, v)));
                let flipped = predict_even_even(flip_variant(sa), flip_variant(sb)).unwrap();
                prop_assert_eq!(flip_variant(predict_even_even(sa, sb).unwrap()), flipped);
            }
        }
    }

    #[test]
    fn sign_level_associativity() {
        for v in [Variant::Upper, Variant::Lower] {
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        let [a, b, c] = [a, b, c].map(|d| KOClass::new(d, v));
                        let left = predict_class(predict_class(a, b).unwrap(), c);
                        let right = predict_class(a, predict_class(b, c).unwrap());
                        assert_eq!(left, right, "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn traditional_asymmetry_witness() {
        let pairs: Vec<(KOSigns, KOSigns)> = (0..8u8)
            .step_by(2)
            .flat_map(|a| {
                (0..8u8)
                    .step_by(2)
                    .map(move |b| (classic_class(a), classic_class(b)))
            })
            .map(|(a, b)| (signs_of_class(a), signs_of_class(b)))
            .collect();
        assert!(pairs.iter().any(|&(a, b)| {
            traditional_predict(a, b, DiracChoice::D).is_ok()
                && traditional_predict(b, a, DiracChoice::D).is_err()
        }));
    }
}
