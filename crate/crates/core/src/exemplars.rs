//! Minimal finite triples realizing every KO class.
//!
//! At fixed momentum a Dirac operator `D = Σ pₐγᵃ` built from `d` Clifford
//! generators has KO-dimension `-d mod 8`, so class `n` uses
//! `d = (8 - n) mod 8` generators. Class 0 uses `C²` with `D = σ₁`,
//! `γ = σ₃`. The real structure is the first Pauli string (times `1` or
//! `i`) that produces the target signs.

use std::collections::BTreeMap;

use num::{Rational64, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{pauli, CMatrix, ExactComplex};
use crate::kosigns::{signs_of_class, KOClass, Parity};
use crate::pauli::{Phase, PhasedPauli};
use crate::triples::{extract_signs, AntiUnitary, GradingData, RealSpectralTriple};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum ExemplarError {
    #[error("no Pauli-string real structure realizes {0}")]
    NoRealStructureFound(KOClass),
    #[error("expected {expected} Dirac coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("Dirac coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("zero momentum leaves ε′ indeterminate")]
    ZeroMomentum,
}

/// Hermitian generators with `γᵃγᵇ + γᵇγᵃ = 2δᵃᵇ I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordRep {
    pub d: usize,
    pub gammas: Vec<CMatrix>,
}

impl CliffordRep {
    pub fn side(&self) -> usize {
        self.gammas[0].n()
    }

    /// Exact check of hermiticity and the anticommutation relations.
    pub fn relations_hold(&self) -> bool {
        let n = self.side();
        let two = CMatrix::scalar(n, ExactComplex::from(2));
        let zero = CMatrix::zeros(n);
        self.gammas.iter().enumerate().all(|(a, ga)| {
            ga.is_hermitian()
                && self.gammas.iter().enumerate().all(|(b, gb)| {
                    ga.anticommutator(gb) == if a == b { two.clone() } else { zero.clone() }
                })
        })
    }
}

/// `{σ₁, σ₂}` on `C²`, then `{γᵃ ⊗ σ₃} ∪ {I ⊗ σ₁, I ⊗ σ₂}`; odd `d`
/// appends the chirality of the first `d - 1`. `d = 1` is `{σ₁}` on `C²`.
pub fn clifford_gammas(d: usize) -> CliffordRep {
    assert!(
        d >= 1,
        "a Clifford representation needs at least one generator"
    );
    if d == 1 {
        return CliffordRep {
            d,
            gammas: vec![pauli(1)],
        };
    }
    if d % 2 == 1 {
        let mut rep = clifford_gammas(d - 1);
        let (chi, _) = chirality(&rep.gammas);
        rep.gammas.push(chi);
        rep.d = d;
        return rep;
    }
    let mut gammas = vec![pauli(1), pauli(2)];
    for _ in 1..d / 2 {
        let eye = CMatrix::identity(gammas[0].n());
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| g.kron(&pauli(3))).collect();
        next.push(eye.kron(&pauli(1)));
        next.push(eye.kron(&pauli(2)));
        gammas = next;
    }
    CliffordRep { d, gammas }
}

/// `c · γ¹⋯γ^{2k}` with the phase `c ∈ {1, i}` that makes it a hermitian
/// involution.
pub fn chirality(gammas: &[CMatrix]) -> (CMatrix, Phase) {
    assert!(
        !gammas.is_empty() && gammas.len() % 2 == 0,
        "chirality needs an even number of generators"
    );
    let product = gammas[1..]
        .iter()
        .fold(gammas[0].clone(), |acc, g| &acc * g);
    for phase in Phase::ALL {
        let chi = product.scale(phase.value());
        if chi.is_hermitian() && (&chi * &chi).is_identity() {
            return (chi, phase);
        }
    }
    unreachable!("a product of anticommuting hermitian involutions squares to ±I")
}

/// Number of Clifford generators used for a class of the given dimension.
pub fn generator_count(dim: u8) -> usize {
    (8 - dim as usize % 8) % 8
}

/// A catalog entry with its construction metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exemplar {
    pub class: KOClass,
    pub generators: usize,
    pub coefficients: Vec<String>,
    pub chirality_phase: Option<String>,
    pub real_structure: String,
    pub triple: RealSpectralTriple,
}

/// Dirac operator, optional grading and chirality phase for a class.
fn dirac_and_grading(
    c: KOClass,
    coeffs: &[Rational64],
) -> Result<(CMatrix, Option<CMatrix>, Option<Phase>), ExemplarError> {
    let d = generator_count(c.dim());
    let expected = d.max(1);
    if coeffs.len() != expected {
        return Err(ExemplarError::CoefficientCount {
            expected,
            found: coeffs.len(),
        });
    }
    if coeffs.iter().any(|p| p.is_zero()) {
        return Err(ExemplarError::ZeroCoefficient);
    }
    if d == 0 {
        return Ok((pauli(1).scale(coeffs[0].into()), Some(pauli(3)), None));
    }
    let rep = clifford_gammas(d);
    let n = rep.side();
    let dirac = rep
        .gammas
        .iter()
        .zip(coeffs)
        .fold(CMatrix::zeros(n), |acc, (g, p)| {
            &acc + &g.scale((*p).into())
        });
    match c.parity() {
        Parity::Even => {
            let (chi, phase) = chirality(&rep.gammas);
            Ok((dirac, Some(chi), Some(phase)))
        }
        Parity::Odd => Ok((dirac, None, None)),
    }
}

/// First `phase · string` real structure giving the target signs.
fn search_real_structure(
    c: KOClass,
    dirac: &CMatrix,
    grading: Option<&CMatrix>,
) -> Option<(PhasedPauli, RealSpectralTriple)> {
    let target = signs_of_class(c);
    let n = dirac.n();
    let qubits = n.trailing_zeros() as usize;
    PhasedPauli::candidates(qubits).find_map(|cand| {
        let m = cand.matrix();
        let t = match grading {
            Some(g) => {
                RealSpectralTriple::even(vec![CMatrix::identity(n)], dirac.clone(), m, g.clone())
            }
            None => RealSpectralTriple::odd(
                vec![CMatrix::identity(n)],
                dirac.clone(),
                m,
                target.eps_dprime,
            ),
        };
        let signs = extract_signs(&t).ok()?.definite()?;
        (signs == target).then_some((cand, t))
    })
}

/// Exemplar with Dirac coefficients `p = (1, 2, …, d)`.
pub fn build_exemplar(c: KOClass) -> Result<Exemplar, ExemplarError> {
    let d = generator_count(c.dim()).max(1);
    let coeffs: Vec<Rational64> = (1..=d as i64).map(Rational64::from_integer).collect();
    build_exemplar_with(c, &coeffs)
}

pub fn build_exemplar_with(c: KOClass, coeffs: &[Rational64]) -> Result<Exemplar, ExemplarError> {
    let (dirac, grading, phase) = dirac_and_grading(c, coeffs)?;
    let (cand, triple) = search_real_structure(c, &dirac, grading.as_ref())
        .ok_or(ExemplarError::NoRealStructureFound(c))?;
    Ok(Exemplar {
        class: c,
        generators: generator_count(c.dim()),
        coefficients: coeffs.iter().map(|p| p.to_string()).collect(),
        chirality_phase: phase.map(|p| p.to_string()),
        real_structure: cand.to_string(),
        triple,
    })
}

/// One exemplar per KO class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExemplarCatalog {
    pub entries: BTreeMap<KOClass, Exemplar>,
}

impl ExemplarCatalog {
    pub fn build() -> Result<Self, ExemplarError> {
        let entries = KOClass::all()
            .map(|c| build_exemplar(c).map(|e| (c, e)))
            .collect::<Result<_, _>>()?;
        Ok(ExemplarCatalog { entries })
    }

    pub fn get(&self, c: KOClass) -> &RealSpectralTriple {
        &self.entries[&c].triple
    }
}

/// Hermitian Euclidean gammas on `C⁴`: `γ⁰ = σ₁ ⊗ I`, `γʲ = -σ₂ ⊗ σⱼ`.
pub fn dirac_gammas_4d() -> [CMatrix; 4] {
    let eye = CMatrix::identity(2);
    let minus_s2 = -&pauli(2);
    [
        pauli(1).kron(&eye),
        minus_s2.kron(&pauli(1)),
        minus_s2.kron(&pauli(2)),
        minus_s2.kron(&pauli(3)),
    ]
}

fn slashed_momentum(p: &[Rational64; 4]) -> Result<CMatrix, ExemplarError> {
    if p.iter().all(Zero::is_zero) {
        return Err(ExemplarError::ZeroMomentum);
    }
    let g = dirac_gammas_4d();
    Ok(g.iter().zip(p).fold(CMatrix::zeros(4), |acc, (g, p)| {
        &acc + &g.scale((*p).into())
    }))
}

/// `J = γ⁰γ² ∘ cc` and `γ = γ⁰γ¹γ²γ³` on `C⁴`.
fn charge_conjugation_and_chirality() -> (CMatrix, CMatrix) {
    let g = dirac_gammas_4d();
    let (chi, phase) = chirality(&g);
    debug_assert_eq!(phase, Phase::One);
    (&g[0] * &g[2], chi)
}

/// The flat Dirac operator at momentum `p` acting on one mode, `D = Σ pₐγᵃ`.
///
/// A single Fourier mode is not preserved by `J`, which maps momentum `p`
/// to `-p`; on this truncation `ε′` comes out as `-1`.
pub fn flat_dirac_4d_single_mode(p: [Rational64; 4]) -> Result<RealSpectralTriple, ExemplarError> {
    let dirac = slashed_momentum(&p)?;
    let (j, chi) = charge_conjugation_and_chirality();
    Ok(RealSpectralTriple::even(
        vec![CMatrix::identity(4)],
        dirac,
        j,
        chi,
    ))
}

/// The flat Dirac operator on the mode pair `{p, -p}`, which `J` exchanges:
/// `H = C⁴ ⊗ C²`, `D = p̸ ⊗ σ₃`, `J = γ⁰γ² ⊗ σ₁ ∘ cc`, `γ = γ⁰γ¹γ²γ³ ⊗ I`.
pub fn flat_dirac_4d(p: [Rational64; 4]) -> Result<RealSpectralTriple, ExemplarError> {
    let slashed = slashed_momentum(&p)?;
    let (j, chi) = charge_conjugation_and_chirality();
    let eye = CMatrix::identity(2);
    Ok(RealSpectralTriple {
        hilbert_dim: 8,
        algebra_gens: vec![CMatrix::identity(8)],
        dirac: slashed.kron(&pauli(3)),
        real_structure: AntiUnitary::new(j.kron(&pauli(1))),
        grading: GradingData::NonTrivial {
            matrix: chi.kron(&eye),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kosigns::{KOSigns, Variant};
    use crate::triples::{flip_real_structure, validate};

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn clifford_small_cases() {
        assert_eq!(clifford_gammas(2).gammas, vec![pauli(1), pauli(2)]);
        let three = clifford_gammas(3);
        assert_eq!(three.gammas[2], -&pauli(3));
        assert!(three.relations_hold());
        let five = clifford_gammas(5);
        assert_eq!(five.side(), 4);
        assert_eq!(five.gammas.len(), 5);
        assert!(five.relations_hold());
    }

    #[test]
    fn clifford_relations_up_to_eight() {
        for d in 1..=8 {
            let rep = clifford_gammas(d);
            assert_eq!(rep.gammas.len(), d);
            assert_eq!(rep.side(), 1 << (d / 2).max(1));
            assert!(rep.relations_hold(), "d = {d}");
        }
    }

    #[test]
    fn chirality_phases() {
        let phase = |d| chirality(&clifford_gammas(d).gammas).1;
        assert_eq!(phase(2), Phase::I);
        assert_eq!(phase(4), Phase::One);
        assert_eq!(phase(6), Phase::I);
        assert_eq!(phase(8), Phase::One);
    }

    #[test]
    fn every_class_has_an_exemplar() {
        for c in KOClass::all() {
            let e = build_exemplar(c).unwrap();
            assert_eq!(validate(&e.triple), Ok(c), "{c} via {}", e.real_structure);
        }
    }

    #[test]
    fn exemplar_sizes() {
        let sizes: Vec<usize> = (0..8)
            .map(|d| {
                build_exemplar(KOClass::new(d, Variant::Upper))
                    .unwrap()
                    .triple
                    .hilbert_dim
            })
            .collect();
        assert_eq!(sizes, [2, 8, 8, 4, 4, 2, 2, 2]);
    }

    #[test]
    fn four_upper_matches_flat_space_signs() {
        let e = build_exemplar("4_U".parse().unwrap()).unwrap();
        let s = extract_signs(&e.triple).unwrap().definite().unwrap();
        assert_eq!(s, KOSigns::from_values(-1, 1, 1));
    }

    #[test]
    fn one_upper_is_odd_with_label() {
        let e = build_exemplar("1_U".parse().unwrap()).unwrap();
        assert_eq!(e.triple.parity(), Parity::Odd);
        let s = extract_signs(&e.triple).unwrap().definite().unwrap();
        assert_eq!(s, KOSigns::from_values(1, -1, -1));
    }

    #[test]
    fn flip_closure() {
        for d in (0..8).step_by(2) {
            let up = build_exemplar(KOClass::new(d, Variant::Upper)).unwrap();
            let flipped = flip_real_structure(&up.triple).unwrap();
            assert_eq!(validate(&flipped), Ok(KOClass::new(d, Variant::Lower)));
        }
    }

    #[test]
    fn coefficients_do_not_matter() {
        for c in KOClass::all() {
            let base = build_exemplar(c).unwrap();
            let d = base.coefficients.len() as i64;
            let alt: Vec<Rational64> = (0..d).map(|k| Rational64::new(2 * k + 3, 7)).collect();
            let other = build_exemplar_with(c, &alt).unwrap();
            let same_j = RealSpectralTriple {
                dirac: other.triple.dirac.clone(),
                ..base.triple.clone()
            };
            assert_eq!(
                extract_signs(&same_j).unwrap(),
                extract_signs(&base.triple).unwrap(),
                "{c}"
            );
        }
    }

    #[test]
    fn coefficient_errors() {
        let c = "3_U".parse().unwrap();
        assert_eq!(
            build_exemplar_with(c, &[r(1)]),
            Err(ExemplarError::CoefficientCount {
                expected: 5,
                found: 1
            })
        );
        assert_eq!(
            build_exemplar_with(c, &[r(1), r(0), r(2), r(3), r(4)]),
            Err(ExemplarError::ZeroCoefficient)
        );
    }

    #[test]
    fn flat_dirac_gammas() {
        let rep = CliffordRep {
            d: 4,
            gammas: dirac_gammas_4d().to_vec(),
        };
        assert!(rep.relations_hold());
        let (j, chi) = charge_conjugation_and_chirality();
        assert_eq!(j, j.conj_entrywise());
        assert_eq!(chi, pauli(3).kron(&CMatrix::identity(2)));
    }

    #[test]
    fn flat_dirac_signs() {
        let expect = KOSigns::from_values(-1, 1, 1);
        for p in [
            [r(1), r(2), r(3), r(4)],
            [r(1), r(0), r(0), r(0)],
            [Rational64::new(-1, 3), r(0), r(5), Rational64::new(2, 7)],
        ] {
            let t = flat_dirac_4d(p).unwrap();
            assert_eq!(extract_signs(&t).unwrap().definite(), Some(expect));
            assert_eq!(validate(&t), Ok("4_U".parse().unwrap()));
        }
        assert_eq!(flat_dirac_4d([r(0); 4]), Err(ExemplarError::ZeroMomentum));
    }

    #[test]
    fn single_mode_truncation_flips_eps_prime() {
        let t = flat_dirac_4d_single_mode([r(1), r(2), r(3), r(4)]).unwrap();
        let s = extract_signs(&t).unwrap().definite().unwrap();
        assert_eq!(s, KOSigns::from_values(-1, -1, 1));
    }
}
