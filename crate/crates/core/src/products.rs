//! Operator-level products of real spectral triples.
//!
//! Graded products are built in resolved (ungraded) form: the Kozul signs
//! reappear as grading insertions in `D` and `J`. Odd × odd products live
//! on `H_i ⊗ H_j ⊗ C²`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{pauli, CMatrix, ExactComplex};
use crate::kosigns::{
    predict_product, traditional_predict, DiracChoice, KOClass, KOSigns, Parity, Sign, SignError,
};
use crate::triples::{
    classify_triple, extract_signs, validate, AntiUnitary, Classification, RealSpectralTriple,
    Relation, TripleError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KozulConvention {
    /// `D = D_i ⊗ I + γ_i ⊗ D_j`, `J = J_i γ_i^{(1-ε″_j)/2} ⊗ J_j`
    First,
    /// `D̃ = D_i ⊗ γ_j + I ⊗ D_j`, `J̃ = J_i ⊗ J_j γ_j^{(1-ε″_i)/2}`
    Second,
}

impl fmt::Display for KozulConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KozulConvention::First => "first",
            KozulConvention::Second => "second",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "choice", rename_all = "lowercase")]
pub enum Prescription {
    Graded(KozulConvention),
    Traditional(DiracChoice),
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum ProductError {
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error("the {convention} convention is not defined for a {first:?} × {second:?} product")]
    UnsupportedConvention {
        convention: KozulConvention,
        first: Parity,
        second: Parity,
    },
    #[error("D_{{i,j}} needs γ_i, but the first factor is odd")]
    OddFirstFactor,
    #[error("D̃_{{i,j}} needs γ_j, but the second factor is odd")]
    OddSecondFactor,
    #[error("undefined product (choice {choice}): {relation} fails; ε′ would need to be both {required} and {available}")]
    UndefinedProduct {
        choice: DiracChoice,
        relation: Relation,
        required: Sign,
        available: Sign,
    },
    #[error("operator signs {extracted:?} disagree with the sign calculus {predicted:?}")]
    PredictionMismatch {
        predicted: Option<KOSigns>,
        extracted: Option<KOSigns>,
    },
}

/// Outcome of a product, with named pass/fail checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub pair: [KOClass; 2],
    pub prescription: Prescription,
    pub predicted: KOSigns,
    pub extracted: KOSigns,
    pub class: KOClass,
    pub hilbert_dim: usize,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip)]
    pub result: RealSpectralTriple,
}

impl ProductReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

fn factor_signs(t: &RealSpectralTriple) -> Result<(KOClass, KOSigns), ProductError> {
    let class = validate(t)?;
    let signs = extract_signs(t)?
        .definite()
        .expect("validate rejects indeterminate signs");
    Ok((class, signs))
}

fn algebra_product(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    extra: Option<&CMatrix>,
) -> Vec<CMatrix> {
    ti.algebra_gens
        .iter()
        .flat_map(|a| {
            tj.algebra_gens.iter().map(move |b| {
                let ab = a.kron(b);
                match extra {
                    Some(e) => ab.kron(e),
                    None => ab,
                }
            })
        })
        .collect()
}

/// Linear part of `J ∘ γ^{on}`.
fn with_grading(j: &AntiUnitary, gamma: &CMatrix, on: bool) -> CMatrix {
    if on {
        j.then_linear(gamma).linear_part().clone()
    } else {
        j.linear_part().clone()
    }
}

fn is_minus(s: Sign) -> bool {
    s == Sign::Minus
}

/// Builds the graded product operators without checking that the factors
/// share a variant. `ε″` of each factor is read off its operators (or its
/// label when odd).
pub fn graded_operators(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    k: KozulConvention,
) -> Result<RealSpectralTriple, ProductError> {
    let ei = extract_signs(ti)?.eps_dprime;
    let ej = extract_signs(tj)?.eps_dprime;
    let (ni, nj) = (ti.hilbert_dim, tj.hilbert_dim);
    let (ii, ij) = (CMatrix::identity(ni), CMatrix::identity(nj));
    let (mi, mj) = (&ti.real_structure, &tj.real_structure);
    let label = ei * ej;

    let triple = match (ti.gamma(), tj.gamma(), k) {
        (Some(gi), Some(gj), KozulConvention::First) => RealSpectralTriple::even(
            algebra_product(ti, tj, None),
            &ti.dirac.kron(&ij) + &gi.kron(&tj.dirac),
            with_grading(mi, gi, is_minus(ej)).kron(mj.linear_part()),
            gi.kron(gj),
        ),
        (Some(gi), Some(gj), KozulConvention::Second) => RealSpectralTriple::even(
            algebra_product(ti, tj, None),
            &ti.dirac.kron(gj) + &ii.kron(&tj.dirac),
            mi.linear_part().kron(&with_grading(mj, gj, is_minus(ei))),
            gi.kron(gj),
        ),
        (Some(gi), None, KozulConvention::First) => RealSpectralTriple::odd(
            algebra_product(ti, tj, None),
            &ti.dirac.kron(&ij) + &gi.kron(&tj.dirac),
            with_grading(mi, gi, is_minus(ej)).kron(mj.linear_part()),
            label,
        ),
        (None, Some(gj), KozulConvention::Second) => RealSpectralTriple::odd(
            algebra_product(ti, tj, None),
            &ti.dirac.kron(gj) + &ii.kron(&tj.dirac),
            mi.linear_part().kron(&with_grading(mj, gj, is_minus(ei))),
            label,
        ),
        (None, None, _) => {
            let (s1, s2, s3) = (pauli(1), pauli(2), pauli(3));
            let i_s2 = s2.scale(ExactComplex::i());
            let tail = &s1.pow01(is_minus(ei)) * &i_s2.pow01(!is_minus(ej));
            let e2 = CMatrix::identity(2);
            RealSpectralTriple::even(
                algebra_product(ti, tj, Some(&e2)),
                &ti.dirac.kron(&ij).kron(&s1) + &ii.kron(&tj.dirac).kron(&s2),
                mi.linear_part().kron(mj.linear_part()).kron(&tail),
                ii.kron(&ij).kron(&s3),
            )
        }
        (gi, gj, convention) => {
            return Err(ProductError::UnsupportedConvention {
                convention,
                first: parity_of(gi),
                second: parity_of(gj),
            })
        }
    };
    Ok(triple)
}

fn parity_of(g: Option<&CMatrix>) -> Parity {
    if g.is_some() {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// The convention used for a parity pair when none is requested: odd-first
/// products only exist in the second convention.
pub fn default_convention(pi: Parity, pj: Parity) -> KozulConvention {
    match (pi, pj) {
        (Parity::Odd, Parity::Even) => KozulConvention::Second,
        _ => KozulConvention::First,
    }
}

/// Graded product `T_i × T_j`. Mixed upper/lower factors are rejected with
/// [`SignError::VariantMismatch`].
pub fn graded_product(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    k: KozulConvention,
) -> Result<ProductReport, ProductError> {
    let (ci, si) = factor_signs(ti)?;
    let (cj, sj) = factor_signs(tj)?;
    let (predicted, parity) = predict_product((si, ti.parity()), (sj, tj.parity()))?;
    let result = graded_operators(ti, tj, k)?;
    let class = validate(&result)?;
    let extracted = extract_signs(&result)?
        .definite()
        .expect("validate rejects indeterminate signs");
    let mut checks = BTreeMap::new();
    checks.insert("validates".to_string(), true);
    checks.insert("signs_agree".to_string(), extracted == predicted);
    checks.insert("parity".to_string(), result.parity() == parity);
    checks.insert(
        "dimension_adds".to_string(),
        class.dim() == (ci.dim() + cj.dim()) % 8 && class.variant() == ci.variant(),
    );
    if ti.parity() == Parity::Even && tj.parity() == Parity::Even {
        checks.insert(
            "dirac_square".to_string(),
            dirac_square_holds(ti, tj, &result),
        );
    }
    if ti.parity() == Parity::Odd && tj.parity() == Parity::Odd {
        let g = result.gamma().expect("odd × odd products are even");
        checks.insert(
            "dirac_anticommutes_grading".to_string(),
            result.dirac.anticommutator(g).is_zero(),
        );
    }
    Ok(ProductReport {
        pair: [ci, cj],
        prescription: Prescription::Graded(k),
        predicted,
        extracted,
        class,
        hilbert_dim: result.hilbert_dim,
        checks,
        result,
    })
}

/// The traditional product: `J = J_i ⊗ J_j` with no grading insertions.
pub fn traditional_product(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    choice: DiracChoice,
) -> Result<ProductReport, ProductError> {
    let (ii, ij) = (
        CMatrix::identity(ti.hilbert_dim),
        CMatrix::identity(tj.hilbert_dim),
    );
    let dirac = match choice {
        DiracChoice::D => {
            let gi = ti.gamma().ok_or(ProductError::OddFirstFactor)?;
            &ti.dirac.kron(&ij) + &gi.kron(&tj.dirac)
        }
        DiracChoice::DTilde => {
            let gj = tj.gamma().ok_or(ProductError::OddSecondFactor)?;
            &ti.dirac.kron(gj) + &ii.kron(&tj.dirac)
        }
    };
    let (ci, si) = factor_signs(ti)?;
    let (cj, sj) = factor_signs(tj)?;
    let j = ti
        .real_structure
        .linear_part()
        .kron(tj.real_structure.linear_part());
    let algebra = algebra_product(ti, tj, None);
    let result = match (ti.gamma(), tj.gamma()) {
        (Some(gi), Some(gj)) => RealSpectralTriple::even(algebra, dirac, j, gi.kron(gj)),
        _ => RealSpectralTriple::odd(algebra, dirac, j, si.eps_dprime * sj.eps_dprime),
    };
    let predicted = traditional_predict(si, sj, choice);
    let class = match classify_triple(&result) {
        Err(TripleError::NotASignRelation(relation)) => {
            let (required, available) = match predicted {
                Err(SignError::UndefinedProduct {
                    required,
                    available,
                    ..
                }) => (required, available),
                _ => {
                    return Err(ProductError::PredictionMismatch {
                        predicted: predicted.ok(),
                        extracted: None,
                    })
                }
            };
            return Err(ProductError::UndefinedProduct {
                choice,
                relation,
                required,
                available,
            });
        }
        Err(e) => return Err(e.into()),
        Ok(Classification::Ambiguous(_)) => return Err(TripleError::Ambiguous([ci, cj]).into()),
        Ok(Classification::Definite(c)) => c,
    };
    let extracted = extract_signs(&result)?
        .definite()
        .expect("definite classification has definite signs");
    let predicted = predicted.map_err(|_| ProductError::PredictionMismatch {
        predicted: None,
        extracted: Some(extracted),
    })?;
    let mut checks = BTreeMap::new();
    checks.insert("validates".to_string(), true);
    checks.insert("signs_agree".to_string(), extracted == predicted);
    Ok(ProductReport {
        pair: [ci, cj],
        prescription: Prescription::Traditional(choice),
        predicted,
        extracted,
        class,
        hilbert_dim: result.hilbert_dim,
        checks,
        result,
    })
}

/// `U = ½(I ⊗ I + γ_i ⊗ I + I ⊗ γ_j - γ_i ⊗ γ_j)`.
pub fn product_unitary(gamma_i: &CMatrix, gamma_j: &CMatrix) -> CMatrix {
    let ii = CMatrix::identity(gamma_i.n());
    let ij = CMatrix::identity(gamma_j.n());
    let sum = &(&ii.kron(&ij) + &gamma_i.kron(&ij)) + &(&ii.kron(gamma_j) - &gamma_i.kron(gamma_j));
    sum.scale(ExactComplex::real(num::Rational64::new(1, 2)))
}

/// How `U` relates the two Kozul conventions of an even × even product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub pair: [KOClass; 2],
    pub unitary: bool,
    /// `U D U† = D̃`
    pub dirac_maps: bool,
    /// `U γ U† = γ`
    pub grading_invariant: bool,
    /// `U π(a) U† = π(a)` for every generator.
    pub algebra_invariant: bool,
    /// `λ` with `U J U† = λ J̃`, if any.
    pub j_factor: Option<ExactComplex>,
    /// `(-1)^{(1-ε″_i)(1-ε″_j)/4}`.
    pub predicted_j_sign: Sign,
}

impl EquivalenceReport {
    /// `U J U† = J̃` literally.
    pub fn j_maps_exactly(&self) -> bool {
        self.j_factor == Some(ExactComplex::from(1))
    }

    /// `U J U†` equals `J̃` times the predicted sign.
    pub fn j_maps_up_to_predicted_sign(&self) -> bool {
        self.j_factor == Some(ExactComplex::from(self.predicted_j_sign.value() as i64))
    }

    pub fn holds(&self) -> bool {
        self.unitary
            && self.dirac_maps
            && self.grading_invariant
            && self.algebra_invariant
            && self.j_maps_up_to_predicted_sign()
    }
}

/// Compares the two conventions' products of two even triples through `U`.
/// Where `U J U† = -J̃`, the unitary `iU` maps `J` to `J̃` exactly while
/// acting identically on `D`, `γ` and the algebra.
pub fn check_convention_equivalence(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
) -> Result<EquivalenceReport, ProductError> {
    let (Some(gi), Some(gj)) = (ti.gamma(), tj.gamma()) else {
        return Err(TripleError::OddTriple.into());
    };
    let first = graded_product(ti, tj, KozulConvention::First)?;
    let second = graded_product(ti, tj, KozulConvention::Second)?;
    let (a, b) = (&first.result, &second.result);
    let u = product_unitary(gi, gj);
    let ud = u.dagger();
    let conj = |x: &CMatrix| &(&u * x) * &ud;
    let ga = a.gamma().expect("even × even is even");
    let mapped_j = a.real_structure.conjugate_by(&u);
    let si = extract_signs(ti)?.eps_dprime;
    let sj = extract_signs(tj)?.eps_dprime;
    Ok(EquivalenceReport {
        pair: first.pair,
        unitary: u.is_unitary(),
        dirac_maps: conj(&a.dirac) == b.dirac,
        grading_invariant: conj(ga) == *ga,
        algebra_invariant: a.algebra_gens.iter().all(|g| conj(g) == *g),
        j_factor: mapped_j
            .linear_part()
            .proportionality(b.real_structure.linear_part()),
        predicted_j_sign: Sign::parity_of(is_minus(si) && is_minus(sj)),
    })
}

fn dirac_square_holds(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    product: &RealSpectralTriple,
) -> bool {
    let ii = CMatrix::identity(ti.hilbert_dim);
    let ij = CMatrix::identity(tj.hilbert_dim);
    let lhs = &product.dirac * &product.dirac;
    let rhs = &(&ti.dirac * &ti.dirac).kron(&ij) + &ii.kron(&(&tj.dirac * &tj.dirac));
    lhs == rhs
}

/// `D_{i,j}² = D_i² ⊗ I + I ⊗ D_j²` for an even × even product.
pub fn check_dirac_square(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    report: &ProductReport,
) -> bool {
    ti.parity() == Parity::Even
        && tj.parity() == Parity::Even
        && dirac_square_holds(ti, tj, &report.result)
}

/// Operator-level comparison of `(T_i × T_j) × T_k` with `T_i × (T_j × T_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub classes: [KOClass; 3],
    pub class: KOClass,
    pub dirac_equal: bool,
    pub grading_equal: bool,
    pub algebra_equal: bool,
    /// `λ` with `J_left = λ J_right`, if any.
    pub j_factor: Option<ExactComplex>,
}

impl AssociativityReport {
    pub fn holds(&self) -> bool {
        self.dirac_equal
            && self.grading_equal
            && self.algebra_equal
            && self.j_factor.is_some_and(|l| l.is_unit())
    }
}

pub fn check_operator_associativity(
    ti: &RealSpectralTriple,
    tj: &RealSpectralTriple,
    tk: &RealSpectralTriple,
    k: KozulConvention,
) -> Result<AssociativityReport, ProductError> {
    let ij = graded_product(ti, tj, k)?;
    let left = graded_product(&ij.result, tk, k)?;
    let jk = graded_product(tj, tk, k)?;
    let right = graded_product(ti, &jk.result, k)?;
    let (l, r) = (&left.result, &right.result);
    Ok(AssociativityReport {
        classes: [ij.pair[0], ij.pair[1], jk.pair[1]],
        class: left.class,
        dirac_equal: l.dirac == r.dirac && left.class == right.class,
        grading_equal: l.grading == r.grading,
        algebra_equal: l.algebra_gens == r.algebra_gens,
        j_factor: l
            .real_structure
            .linear_part()
            .proportionality(r.real_structure.linear_part()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exemplars::build_exemplar;
    use crate::kosigns::{classic_class, KOSigns};

    fn ex(s: &str) -> RealSpectralTriple {
        build_exemplar(s.parse().unwrap()).unwrap().triple
    }

    fn class(s: &str) -> KOClass {
        s.parse().unwrap()
    }

    #[test]
    fn two_times_six_upper() {
        let r = graded_product(&ex("2_U"), &ex("6_U"), KozulConvention::First).unwrap();
        assert_eq!(r.class, class("0_U"));
        assert_eq!(r.extracted, KOSigns::from_values(1, 1, 1));
        assert!(r.all_checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn one_times_one_upper() {
        let t = ex("1_U");
        let r = graded_product(&t, &t, KozulConvention::First).unwrap();
        assert_eq!(r.class, class("2_U"));
        assert_eq!(r.hilbert_dim, t.hilbert_dim * t.hilbert_dim * 2);
        assert!(r.all_checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn mixed_variants_rejected() {
        let r = graded_product(&ex("0_U"), &ex("0_L"), KozulConvention::First);
        assert!(matches!(
            r,
            Err(ProductError::Sign(SignError::VariantMismatch { .. }))
        ));
    }

    #[test]
    fn mixed_variant_operators_have_no_eps_prime() {
        let t = graded_operators(&ex("2_U"), &ex("2_L"), KozulConvention::First).unwrap();
        assert_eq!(
            extract_signs(&t).unwrap_err(),
            TripleError::NotASignRelation(Relation::JDirac)
        );
    }

    #[test]
    fn mixed_parity_convention_dispatch() {
        let (even, odd) = (ex("2_U"), ex("1_U"));
        assert!(graded_product(&even, &odd, KozulConvention::First).is_ok());
        assert!(graded_product(&odd, &even, KozulConvention::Second).is_ok());
        assert!(matches!(
            graded_product(&even, &odd, KozulConvention::Second),
            Err(ProductError::UnsupportedConvention { .. })
        ));
        let r = graded_product(&odd, &even, KozulConvention::Second).unwrap();
        assert_eq!(r.class, class("3_U"));
        assert_eq!(r.result.parity(), Parity::Odd);
    }

    #[test]
    fn traditional_examples() {
        let four = ex(&classic_class(4).to_string());
        let two = ex(&classic_class(2).to_string());
        let r = traditional_product(&four, &four, DiracChoice::D).unwrap();
        assert_eq!(r.class, classic_class(0));
        match traditional_product(&two, &two, DiracChoice::D) {
            Err(ProductError::UndefinedProduct {
                relation,
                required,
                available,
                ..
            }) => {
                assert_eq!(relation, Relation::JDirac);
                assert_eq!((required, available), (Sign::Plus, Sign::Minus));
            }
            other => panic!("expected an undefined product, got {other:?}"),
        }
        assert_eq!(
            traditional_product(&ex("1_U"), &two, DiracChoice::D).unwrap_err(),
            ProductError::OddFirstFactor
        );
        assert_eq!(
            traditional_product(&two, &ex("1_U"), DiracChoice::DTilde).unwrap_err(),
            ProductError::OddSecondFactor
        );
    }

    #[test]
    fn unitary_examples() {
        let s3 = pauli(3);
        let u = product_unitary(&s3, &s3);
        let expect = CMatrix::from_int_rows(&[
            &[(1, 0), (0, 0), (0, 0), (0, 0)],
            &[(0, 0), (1, 0), (0, 0), (0, 0)],
            &[(0, 0), (0, 0), (1, 0), (0, 0)],
            &[(0, 0), (0, 0), (0, 0), (-1, 0)],
        ]);
        assert_eq!(u, expect);
        assert!(product_unitary(&s3.kron(&CMatrix::identity(2)), &s3).is_unitary());
        let e = CMatrix::identity(2);
        assert!(product_unitary(&e, &e).is_identity());
    }

    #[test]
    fn convention_equivalence_examples() {
        for (a, b) in [("0_U", "0_U"), ("2_U", "2_U"), ("4_L", "6_L")] {
            let rep = check_convention_equivalence(&ex(a), &ex(b)).unwrap();
            assert!(rep.holds(), "{a} × {b}: {rep:?}");
        }
        // both factors with ε″ = -1: U J U† = -J̃
        let rep = check_convention_equivalence(&ex("2_U"), &ex("2_U")).unwrap();
        assert_eq!(rep.predicted_j_sign, Sign::Minus);
        assert!(!rep.j_maps_exactly());
    }

    #[test]
    fn dirac_square_examples() {
        for (a, b) in [("0_U", "0_U"), ("2_U", "4_U"), ("6_L", "6_L")] {
            let (ta, tb) = (ex(a), ex(b));
            let r = graded_product(&ta, &tb, KozulConvention::First).unwrap();
            assert!(check_dirac_square(&ta, &tb, &r), "{a} × {b}");
        }
    }

    #[test]
    fn conventions_agree_on_signs() {
        for (a, b) in [("2_U", "4_U"), ("6_L", "2_L"), ("1_L", "3_L")] {
            let first = graded_product(&ex(a), &ex(b), KozulConvention::First).unwrap();
            let second = graded_product(&ex(a), &ex(b), KozulConvention::Second).unwrap();
            assert_eq!(first.extracted, second.extracted);
        }
    }

    #[test]
    fn small_associativity() {
        let rep = check_operator_associativity(
            &ex("0_U"),
            &ex("6_U"),
            &ex("4_U"),
            KozulConvention::First,
        )
        .unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.class, class("2_U"));
    }
}
