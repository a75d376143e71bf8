//! Finite-basis star differential graded algebras and their graded tensor
//! products.
//!
//! An algebra is given by structure constants over a homogeneous basis, an
//! antilinear star and a linear differential, both as matrices whose
//! column `j` is the image of basis element `j`. Every axiom is checked
//! exhaustively on the basis.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{CMatrix, ExactComplex};
use crate::kosigns::Sign;
use crate::products::KozulConvention;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum DgaError {
    #[error("factors admit no common sign s in d[a*] = s·d[a]* (left {left:?}, right {right:?})")]
    SignMismatch { left: Vec<Sign>, right: Vec<Sign> },
    #[error("factor `{algebra}` fails the {axiom} axiom")]
    InvalidFactor { algebra: String, axiom: String },
    #[error("malformed algebra: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
}

/// One nonzero structure constant: `e_left · e_right ∋ coeff · e_result`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEntry {
    pub left: usize,
    pub right: usize,
    pub result: usize,
    pub coeff: ExactComplex,
}

/// Coefficients over the basis of some [`StarDGA`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedElement {
    pub coeffs: Vec<ExactComplex>,
}

impl GradedElement {
    pub fn zero(n: usize) -> Self {
        GradedElement {
            coeffs: vec![ExactComplex::zero(); n],
        }
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut e = GradedElement::zero(n);
        e.coeffs[k] = ExactComplex::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: ExactComplex) -> Self {
        GradedElement {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &GradedElement) -> Self {
        GradedElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GradedElement) -> Self {
        self.add(&other.scale(ExactComplex::from(-1)))
    }

    fn terms(&self) -> impl Iterator<Item = (usize, ExactComplex)> + '_ {
        self.coeffs
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StarDgaDoc", into = "StarDgaDoc")]
pub struct StarDGA {
    name: String,
    basis: Vec<BasisElement>,
    unit: usize,
    /// `table[i * n + j]` is `e_i · e_j`.
    table: Vec<Vec<(usize, ExactComplex)>>,
    star: CMatrix,
    diff: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct StarDgaDoc {
    name: String,
    basis: Vec<BasisElement>,
    unit: usize,
    mult: Vec<MultEntry>,
    star: CMatrix,
    diff: CMatrix,
}

impl TryFrom<StarDgaDoc> for StarDGA {
    type Error = DgaError;

    fn try_from(doc: StarDgaDoc) -> Result<Self, DgaError> {
        StarDGA::new(doc.name, doc.basis, doc.unit, doc.mult, doc.star, doc.diff)
    }
}

impl From<StarDGA> for StarDgaDoc {
    fn from(a: StarDGA) -> Self {
        let n = a.dim();
        let mult = a
            .table
            .iter()
            .enumerate()
            .flat_map(|(ij, terms)| {
                terms.iter().map(move |&(result, coeff)| MultEntry {
                    left: ij / n,
                    right: ij % n,
                    result,
                    coeff,
                })
            })
            .collect();
        StarDgaDoc {
            name: a.name,
            basis: a.basis,
            unit: a.unit,
            mult,
            star: a.star,
            diff: a.diff,
        }
    }
}

impl StarDGA {
    pub fn new(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        unit: usize,
        mult: Vec<MultEntry>,
        star: CMatrix,
        diff: CMatrix,
    ) -> Result<Self, DgaError> {
        let n = basis.len();
        let bad = |msg: String| Err(DgaError::Malformed(msg));
        if n == 0 || unit >= n {
            return bad(format!("unit index {unit} outside a basis of size {n}"));
        }
        if star.n() != n || diff.n() != n {
            return bad(format!("star/diff must be {n}×{n}"));
        }
        let mut table = vec![Vec::new(); n * n];
        for e in mult {
            if e.left >= n || e.right >= n || e.result >= n {
                return bad(format!(
                    "structure constant ({}, {}, {}) out of range",
                    e.left, e.right, e.result
                ));
            }
            if !e.coeff.is_zero() {
                let cell: &mut Vec<(usize, ExactComplex)> = &mut table[e.left * n + e.right];
                match cell.iter_mut().find(|(k, _)| *k == e.result) {
                    Some((_, c)) => *c += e.coeff,
                    None => cell.push((e.result, e.coeff)),
                }
            }
        }
        for cell in &mut table {
            cell.retain(|(_, c)| !c.is_zero());
            cell.sort_by_key(|(k, _)| *k);
        }
        Ok(StarDGA {
            name: name.into(),
            basis,
            unit,
            table,
            star,
            diff,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, k: usize) -> i32 {
        self.basis[k].degree
    }

    pub fn star_matrix(&self) -> &CMatrix {
        &self.star
    }

    pub fn diff_matrix(&self) -> &CMatrix {
        &self.diff
    }

    pub fn e(&self, k: usize) -> GradedElement {
        GradedElement::basis(self.dim(), k)
    }

    /// Index of the basis element with this label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, a: &GradedElement) -> Option<i32> {
        let mut degs = a.terms().map(|(k, _)| self.degree(k));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let n = self.dim();
        let mut out = GradedElement::zero(n);
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                for &(k, c) in &self.table[i * n + j] {
                    out.coeffs[k] += x * y * c;
                }
            }
        }
        out
    }

    /// Antilinear: `(Σ cₖ eₖ)* = Σ conj(cₖ) eₖ*`.
    pub fn star(&self, a: &GradedElement) -> GradedElement {
        let n = self.dim();
        let mut out = GradedElement::zero(n);
        for (k, c) in a.terms() {
            for r in 0..n {
                out.coeffs[r] += self.star.get(r, k) * c.conj();
            }
        }
        out
    }

    pub fn d(&self, a: &GradedElement) -> GradedElement {
        let n = self.dim();
        let mut out = GradedElement::zero(n);
        for (k, c) in a.terms() {
            for r in 0..n {
                out.coeffs[r] += self.diff.get(r, k) * c;
            }
        }
        out
    }

    /// Returns a copy with a replaced structure constant `e_i · e_j`.
    pub fn with_product(&self, i: usize, j: usize, value: GradedElement) -> StarDGA {
        let n = self.dim();
        let mut out = self.clone();
        out.table[i * n + j] = value.terms().collect();
        out
    }

    /// Returns a copy with `e_k* = value`.
    pub fn with_star(&self, k: usize, value: &GradedElement) -> StarDGA {
        let mut out = self.clone();
        for (r, &c) in value.coeffs.iter().enumerate() {
            out.star.set(r, k, c);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebras always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, DgaError> {
        serde_json::from_str(s).map_err(|e| DgaError::Malformed(e.to_string()))
    }
}

fn parity_sign(exp: i32) -> ExactComplex {
    if exp.rem_euclid(2) == 0 {
        ExactComplex::one()
    } else {
        ExactComplex::from(-1)
    }
}

/// Outcome of one axiom over all basis tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl AxiomResult {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult {
            checked: self.checked,
            violations: self.violations,
            first_violation: self.first,
        }
    }
}

/// Axiom-by-axiom validation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgaReport {
    pub algebra: String,
    pub basis_size: usize,
    pub axioms: BTreeMap<String, AxiomResult>,
    /// Signs `s` for which `d[a*] = s·d[a]*` holds on every basis element.
    pub admissible_signs: Vec<Sign>,
}

impl DgaReport {
    pub fn is_valid(&self) -> bool {
        self.axioms.values().all(AxiomResult::holds) && !self.admissible_signs.is_empty()
    }

    /// `s` when exactly one sign is admissible.
    pub fn global_sign(&self) -> Option<Sign> {
        match self.admissible_signs[..] {
            [s] => Some(s),
            _ => None,
        }
    }

    pub fn first_failure(&self) -> Option<&str> {
        if let Some((name, _)) = self.axioms.iter().find(|(_, r)| !r.holds()) {
            return Some(name);
        }
        self.admissible_signs
            .is_empty()
            .then_some("d_star_compatibility")
    }
}

/// Checks grading, unit, associativity, the star axioms, `d² = 0`, the
/// graded Leibniz rule and `d[a*] = ±d[a]*` on all basis tuples.
pub fn validate_dga(a: &StarDGA) -> DgaReport {
    let n = a.dim();
    let label = |k: usize| a.basis[k].label.clone();
    let deg = |k: usize| a.degree(k);
    let e = |k: usize| a.e(k);
    let homogeneous_of = |x: &GradedElement, d: i32| x.terms().all(|(k, _)| a.degree(k) == d);
    let mut axioms = BTreeMap::new();

    let mut t = Tally::default();
    t.check(deg(a.unit) == 0, || {
        format!("unit {} has degree {}", label(a.unit), deg(a.unit))
    });
    for i in 0..n {
        t.check(
            a.mul(&e(a.unit), &e(i)) == e(i) && a.mul(&e(i), &e(a.unit)) == e(i),
            || format!("1·{0} or {0}·1 ≠ {0}", label(i)),
        );
    }
    axioms.insert("unit".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        for j in 0..n {
            let p = a.mul(&e(i), &e(j));
            t.check(homogeneous_of(&p, deg(i) + deg(j)), || {
                format!(
                    "{}·{} leaves degree {}",
                    label(i),
                    label(j),
                    deg(i) + deg(j)
                )
            });
        }
    }
    axioms.insert("degree_additivity".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        for j in 0..n {
            let ij = a.mul(&e(i), &e(j));
            for k in 0..n {
                let left = a.mul(&ij, &e(k));
                let right = a.mul(&e(i), &a.mul(&e(j), &e(k)));
                t.check(left == right, || {
                    format!("({}·{})·{} ≠ {0}·({1}·{2})", label(i), label(j), label(k))
                });
            }
        }
    }
    axioms.insert("associativity".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        t.check(homogeneous_of(&a.star(&e(i)), deg(i)), || {
            format!("{}* changes degree", label(i))
        });
    }
    axioms.insert("star_preserves_degree".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        t.check(a.star(&a.star(&e(i))) == e(i), || {
            format!("({}*)* ≠ {0}", label(i))
        });
    }
    axioms.insert("star_involutive".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        for j in 0..n {
            let lhs = a.star(&a.mul(&e(i), &e(j)));
            let rhs = a
                .mul(&a.star(&e(j)), &a.star(&e(i)))
                .scale(parity_sign(deg(i) * deg(j)));
            t.check(lhs == rhs, || {
                format!("({0}·{1})* ≠ ±{1}*·{0}*", label(i), label(j))
            });
        }
    }
    axioms.insert("star_antimultiplicative".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        t.check(homogeneous_of(&a.d(&e(i)), deg(i) + 1), || {
            format!("d{} is not of degree {}", label(i), deg(i) + 1)
        });
    }
    axioms.insert("d_raises_degree".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        t.check(a.d(&a.d(&e(i))).is_zero(), || format!("d²{} ≠ 0", label(i)));
    }
    axioms.insert("d_squared_zero".to_string(), t.finish());

    let mut t = Tally::default();
    for i in 0..n {
        for j in 0..n {
            let lhs = a.d(&a.mul(&e(i), &e(j)));
            let rhs = a
                .mul(&a.d(&e(i)), &e(j))
                .add(&a.mul(&e(i), &a.d(&e(j))).scale(parity_sign(deg(i))));
            t.check(lhs == rhs, || {
                format!("Leibniz fails on {}·{}", label(i), label(j))
            });
        }
    }
    axioms.insert("leibniz".to_string(), t.finish());

    let admissible_signs = [Sign::Plus, Sign::Minus]
        .into_iter()
        .filter(|s| {
            let s = ExactComplex::from(s.value() as i64);
            (0..n).all(|i| a.d(&a.star(&e(i))) == a.star(&a.d(&e(i))).scale(s))
        })
        .collect();

    DgaReport {
        algebra: a.name.clone(),
        basis_size: n,
        axioms,
        admissible_signs,
    }
}

/// Graded tensor product `A′ ⊗ A″`. Basis element `(i, j)` has index
/// `i·dim(A″) + j`, so `(A ⊗ B) ⊗ C` and `A ⊗ (B ⊗ C)` share indices.
///
/// First convention: `(a₁′⊗a₁″)(a₂′⊗a₂″) = (-1)^{|a₁″||a₂′|} a₁′a₂′ ⊗ a₁″a₂″`,
/// `d(a′⊗a″) = da′⊗a″ + (-1)^{|a′|} a′⊗da″`. Second convention:
/// sign `(-1)^{|a₁′||a₂″|}` and `d(a′⊗a″) = (-1)^{|a″|} da′⊗a″ + a′⊗da″`.
/// The star is `*′ ⊗ *″` in both.
pub fn dga_tensor(a: &StarDGA, b: &StarDGA, k: KozulConvention) -> Result<StarDGA, DgaError> {
    for x in [a, b] {
        let rep = validate_dga(x);
        if let Some(axiom) = rep
            .axioms
            .iter()
            .find(|(_, r)| !r.holds())
            .map(|(name, _)| name)
        {
            return Err(DgaError::InvalidFactor {
                algebra: x.name.clone(),
                axiom: axiom.clone(),
            });
        }
    }
    let (ra, rb) = (validate_dga(a), validate_dga(b));
    if !ra
        .admissible_signs
        .iter()
        .any(|s| rb.admissible_signs.contains(s))
    {
        return Err(DgaError::SignMismatch {
            left: ra.admissible_signs,
            right: rb.admissible_signs,
        });
    }

    let (na, nb) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| i * nb + j;
    let basis: Vec<BasisElement> = (0..na)
        .flat_map(|i| {
            (0..nb).map(move |j| BasisElement {
                label: format!("{}⊗{}", a.basis[i].label, b.basis[j].label),
                degree: a.degree(i) + b.degree(j),
            })
        })
        .collect();

    let mut mult = Vec::new();
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let sign = match k {
                        KozulConvention::First => parity_sign(b.degree(j1) * a.degree(i2)),
                        KozulConvention::Second => parity_sign(a.degree(i1) * b.degree(j2)),
                    };
                    for &(ka, ca) in &a.table[i1 * na + i2] {
                        for &(kb, cb) in &b.table[j1 * nb + j2] {
                            mult.push(MultEntry {
                                left: idx(i1, j1),
                                right: idx(i2, j2),
                                result: idx(ka, kb),
                                coeff: sign * ca * cb,
                            });
                        }
                    }
                }
            }
        }
    }

    let star = a.star.kron(&b.star);
    let (ia, ib) = (CMatrix::identity(na), CMatrix::identity(nb));
    let sign_diag = |alg: &StarDGA| {
        let mut m = CMatrix::identity(alg.dim());
        for q in 0..alg.dim() {
            m.set(q, q, parity_sign(alg.degree(q)));
        }
        m
    };
    let diff = match k {
        KozulConvention::First => &a.diff.kron(&ib) + &sign_diag(a).kron(&b.diff),
        KozulConvention::Second => &a.diff.kron(&sign_diag(b)) + &ia.kron(&b.diff),
    };
    StarDGA::new(
        format!("{}⊗{}", a.name, b.name),
        basis,
        idx(a.unit, b.unit),
        mult,
        star,
        diff,
    )
}

fn basis_of(entries: &[(&str, i32)]) -> Vec<BasisElement> {
    entries
        .iter()
        .map(|&(label, degree)| BasisElement {
            label: label.to_string(),
            degree,
        })
        .collect()
}

fn unit_products(n: usize, unit: usize) -> Vec<MultEntry> {
    (0..n)
        .flat_map(|k| {
            let one = ExactComplex::one();
            let left = MultEntry {
                left: unit,
                right: k,
                result: k,
                coeff: one,
            };
            let right = MultEntry {
                left: k,
                right: unit,
                result: k,
                coeff: one,
            };
            if k == unit {
                vec![left]
            } else {
                vec![left, right]
            }
        })
        .collect()
}

/// `{1, x, dx}` with all products of `x` and `dx` zero, `d(x) = dx` and a
/// star fixing the basis. Valid with `s = +1`.
pub fn exterior_example() -> StarDGA {
    let mut diff = CMatrix::zeros(3);
    diff.set(2, 1, ExactComplex::one());
    StarDGA::new(
        "exterior",
        basis_of(&[("1", 0), ("x", 0), ("dx", 1)]),
        0,
        unit_products(3, 0),
        CMatrix::identity(3),
        diff,
    )
    .expect("the exterior example is well formed")
}

/// `{1, θ}` with `θ` odd, `θ² = 0`, `θ* = iθ` and `d = 0`. Both signs `s`
/// are admissible.
pub fn odd_line_example() -> StarDGA {
    let mut star = CMatrix::identity(2);
    star.set(1, 1, ExactComplex::i());
    StarDGA::new(
        "odd_line",
        basis_of(&[("1", 0), ("θ", 1)]),
        0,
        unit_products(2, 0),
        star,
        CMatrix::zeros(2),
    )
    .expect("the odd line example is well formed")
}

/// The one-element algebra `C`.
pub fn trivial_example() -> StarDGA {
    StarDGA::new(
        "C",
        basis_of(&[("1", 0)]),
        0,
        unit_products(1, 0),
        CMatrix::identity(1),
        CMatrix::zeros(1),
    )
    .expect("the trivial algebra is well formed")
}

impl fmt::Display for StarDGA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .basis
            .iter()
            .map(|b| format!("{}:{}", b.label, b.degree))
            .collect();
        write!(f, "{} {{{}}}", self.name, labels.join(", "))
    }
}
