//! Finite real spectral triples `{A, H, D, J, γ}`: data model, structural
//! validation, sign extraction and the upper/lower flip.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{CMatrix, ExactComplex, SignMatch};
use crate::kosigns::{classify, KOClass, KOSigns, Parity, Sign};

/// An antiunitary `J = M ∘ cc`: entrywise conjugation followed by the
/// unitary `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AntiUnitary {
    linear_part: CMatrix,
}

impl AntiUnitary {
    /// Unitarity is checked by [`validate`], not here.
    pub fn new(linear_part: CMatrix) -> Self {
        AntiUnitary { linear_part }
    }

    pub fn linear_part(&self) -> &CMatrix {
        &self.linear_part
    }

    pub fn dim(&self) -> usize {
        self.linear_part.n()
    }

    pub fn apply(&self, v: &[ExactComplex]) -> Vec<ExactComplex> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length does not match operator size");
        (0..n)
            .map(|i| {
                (0..n).fold(ExactComplex::from(0), |acc, k| {
                    acc + self.linear_part.get(i, k) * v[k].conj()
                })
            })
            .collect()
    }

    /// `self ∘ other`, a linear map: `M₁ · conj(M₂)`.
    pub fn compose(&self, other: &AntiUnitary) -> CMatrix {
        &self.linear_part * &other.linear_part.conj_entrywise()
    }

    /// `self ∘ A` for a linear `A`: linear part `M · conj(A)`.
    pub fn then_linear(&self, a: &CMatrix) -> AntiUnitary {
        AntiUnitary::new(&self.linear_part * &a.conj_entrywise())
    }

    /// `A ∘ self`: linear part `A · M`.
    pub fn after_linear(&self, a: &CMatrix) -> AntiUnitary {
        AntiUnitary::new(a * &self.linear_part)
    }

    /// `U J U†`: linear part `U · M · conj(U†) = U · M · Uᵀ`.
    pub fn conjugate_by(&self, u: &CMatrix) -> AntiUnitary {
        AntiUnitary::new(&(u * &self.linear_part) * &u.transpose())
    }

    /// `J₁ ⊗ J₂` with a single conjugation.
    pub fn kron(&self, other: &AntiUnitary) -> AntiUnitary {
        AntiUnitary::new(self.linear_part.kron(&other.linear_part))
    }

    pub fn scale(&self, c: ExactComplex) -> AntiUnitary {
        AntiUnitary::new(self.linear_part.scale(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GradingData {
    NonTrivial {
        matrix: CMatrix,
    },
    /// Odd triple; only the assigned `ε″` label is kept.
    Trivial {
        eps_dprime_label: Sign,
    },
}

impl GradingData {
    pub fn parity(&self) -> Parity {
        match self {
            GradingData::NonTrivial { .. } => Parity::Even,
            GradingData::Trivial { .. } => Parity::Odd,
        }
    }

    pub fn matrix(&self) -> Option<&CMatrix> {
        match self {
            GradingData::NonTrivial { matrix } => Some(matrix),
            GradingData::Trivial { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSpectralTriple {
    pub hilbert_dim: usize,
    pub algebra_gens: Vec<CMatrix>,
    pub dirac: CMatrix,
    pub real_structure: AntiUnitary,
    pub grading: GradingData,
}

impl RealSpectralTriple {
    pub fn even(algebra_gens: Vec<CMatrix>, dirac: CMatrix, j: CMatrix, gamma: CMatrix) -> Self {
        RealSpectralTriple {
            hilbert_dim: dirac.n(),
            algebra_gens,
            dirac,
            real_structure: AntiUnitary::new(j),
            grading: GradingData::NonTrivial { matrix: gamma },
        }
    }

    pub fn odd(algebra_gens: Vec<CMatrix>, dirac: CMatrix, j: CMatrix, label: Sign) -> Self {
        RealSpectralTriple {
            hilbert_dim: dirac.n(),
            algebra_gens,
            dirac,
            real_structure: AntiUnitary::new(j),
            grading: GradingData::Trivial {
                eps_dprime_label: label,
            },
        }
    }

    pub fn parity(&self) -> Parity {
        self.grading.parity()
    }

    pub fn gamma(&self) -> Option<&CMatrix> {
        self.grading.matrix()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("triples always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, TripleError> {
        serde_json::from_str(s).map_err(|e| TripleError::Json(e.to_string()))
    }
}

/// A structural invariant of a real spectral triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Invariant {
    HilbertDimPositive,
    SizeMatches {
        what: String,
        found: usize,
    },
    DiracHermitian,
    AlgebraGeneratorHermitian {
        index: usize,
    },
    RealStructureUnitary,
    GradingHermitian,
    GradingInvolution,
    /// `γ = ±I` is not an honest grading.
    GradingNotScalar,
    GradingCommutesWithAlgebra {
        index: usize,
    },
    DiracAnticommutesWithGrading,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::HilbertDimPositive => write!(f, "hilbert_dim > 0"),
            Invariant::SizeMatches { what, found } => {
                write!(f, "{what} has size {found}, not hilbert_dim")
            }
            Invariant::DiracHermitian => write!(f, "D = D†"),
            Invariant::AlgebraGeneratorHermitian { index } => {
                write!(f, "algebra generator {index} hermitian")
            }
            Invariant::RealStructureUnitary => write!(f, "J linear part unitary"),
            Invariant::GradingHermitian => write!(f, "γ = γ†"),
            Invariant::GradingInvolution => write!(f, "γ² = I"),
            Invariant::GradingNotScalar => write!(f, "γ ≠ ±I"),
            Invariant::GradingCommutesWithAlgebra { index } => write!(f, "[π(a_{index}), γ] = 0"),
            Invariant::DiracAnticommutesWithGrading => write!(f, "{{D, γ}} = 0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `J² = εI`
    JSquared,
    /// `JD = ε′DJ`
    JDirac,
    /// `Jγ = ε″γJ`
    JGrading,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::JSquared => "J² = ±I",
            Relation::JDirac => "JD = ±DJ",
            Relation::JGrading => "Jγ = ±γJ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum TripleError {
    #[error("structural violation: {0}")]
    StructuralViolation(Invariant),
    #[error("not a sign relation: {0} holds with neither sign")]
    NotASignRelation(Relation),
    #[error("signs {signs} with parity {parity:?} match no KO class")]
    NoClass { signs: KOSigns, parity: Parity },
    #[error("ε′ is indeterminate (D = 0); candidate classes {0:?}")]
    Ambiguous([KOClass; 2]),
    #[error("operation needs an even triple")]
    OddTriple,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed triple document: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignReading {
    Definite(Sign),
    /// Both signs hold (`D = 0`).
    Indeterminate,
}

impl SignReading {
    pub fn definite(self) -> Option<Sign> {
        match self {
            SignReading::Definite(s) => Some(s),
            SignReading::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtractedSigns {
    pub eps: Sign,
    pub eps_prime: SignReading,
    pub eps_dprime: Sign,
    pub parity: Parity,
}

impl ExtractedSigns {
    pub fn definite(&self) -> Option<KOSigns> {
        Some(KOSigns::new(
            self.eps,
            self.eps_prime.definite()?,
            self.eps_dprime,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Definite(KOClass),
    Ambiguous([KOClass; 2]),
}

fn read_sign(m: SignMatch, relation: Relation) -> Result<SignReading, TripleError> {
    match m {
        SignMatch::Plus => Ok(SignReading::Definite(Sign::Plus)),
        SignMatch::Minus => Ok(SignReading::Definite(Sign::Minus)),
        SignMatch::Both => Ok(SignReading::Indeterminate),
        SignMatch::Neither => Err(TripleError::NotASignRelation(relation)),
    }
}

fn definite(r: SignReading, relation: Relation) -> Result<Sign, TripleError> {
    // both signs can only hold for a zero operator, which J² and γ never are
    r.definite().ok_or(TripleError::NotASignRelation(relation))
}

/// Reads `ε, ε′, ε″` off `M conj(M) = εI`, `M conj(D) = ε′DM` and
/// `M conj(γ) = ε″γM`. Assumes sizes agree.
pub fn extract_signs(t: &RealSpectralTriple) -> Result<ExtractedSigns, TripleError> {
    let m = t.real_structure.linear_part();
    let n = m.n();
    let j2 = t.real_structure.compose(&t.real_structure);
    let eps = definite(
        read_sign(j2.sign_match(&CMatrix::identity(n)), Relation::JSquared)?,
        Relation::JSquared,
    )?;
    let jd = t.real_structure.then_linear(&t.dirac);
    let dj = &t.dirac * m;
    let eps_prime = read_sign(jd.linear_part().sign_match(&dj), Relation::JDirac)?;
    let eps_dprime = match &t.grading {
        GradingData::NonTrivial { matrix } => {
            let jg = t.real_structure.then_linear(matrix);
            let gj = matrix * m;
            definite(
                read_sign(jg.linear_part().sign_match(&gj), Relation::JGrading)?,
                Relation::JGrading,
            )?
        }
        GradingData::Trivial { eps_dprime_label } => *eps_dprime_label,
    };
    Ok(ExtractedSigns {
        eps,
        eps_prime,
        eps_dprime,
        parity: t.parity(),
    })
}

/// Checks every structural invariant, returning the first that fails.
pub fn check_structure(t: &RealSpectralTriple) -> Result<(), TripleError> {
    let violation = |inv| Err(TripleError::StructuralViolation(inv));
    let n = t.hilbert_dim;
    if n == 0 {
        return violation(Invariant::HilbertDimPositive);
    }
    let mut sized: Vec<(String, usize)> = vec![
        ("dirac".into(), t.dirac.n()),
        ("real_structure".into(), t.real_structure.dim()),
    ];
    sized.extend(
        t.algebra_gens
            .iter()
            .enumerate()
            .map(|(k, a)| (format!("algebra_gens[{k}]"), a.n())),
    );
    if let Some(g) = t.gamma() {
        sized.push(("grading".into(), g.n()));
    }
    if let Some((what, found)) = sized.into_iter().find(|(_, size)| *size != n) {
        return violation(Invariant::SizeMatches { what, found });
    }
    if !t.dirac.is_hermitian() {
        return violation(Invariant::DiracHermitian);
    }
    if let Some(index) = t.algebra_gens.iter().position(|a| !a.is_hermitian()) {
        return violation(Invariant::AlgebraGeneratorHermitian { index });
    }
    if !t.real_structure.linear_part().is_unitary() {
        return violation(Invariant::RealStructureUnitary);
    }
    if let Some(g) = t.gamma() {
        if !g.is_hermitian() {
            return violation(Invariant::GradingHermitian);
        }
        if !(g * g).is_identity() {
            return violation(Invariant::GradingInvolution);
        }
        if g.is_scalar(ExactComplex::from(1)) || g.is_scalar(ExactComplex::from(-1)) {
            return violation(Invariant::GradingNotScalar);
        }
        if let Some(index) = t
            .algebra_gens
            .iter()
            .position(|a| !a.commutator(g).is_zero())
        {
            return violation(Invariant::GradingCommutesWithAlgebra { index });
        }
        if !t.dirac.anticommutator(g).is_zero() {
            return violation(Invariant::DiracAnticommutesWithGrading);
        }
    }
    Ok(())
}

/// Structural checks, sign extraction and table lookup, keeping an
/// indeterminate `ε′` as an ambiguity.
pub fn classify_triple(t: &RealSpectralTriple) -> Result<Classification, TripleError> {
    check_structure(t)?;
    let e = extract_signs(t)?;
    let lookup = |eps_prime| classify(KOSigns::new(e.eps, eps_prime, e.eps_dprime), e.parity);
    Ok(match e.eps_prime {
        SignReading::Definite(s) => Classification::Definite(lookup(s)),
        SignReading::Indeterminate => {
            Classification::Ambiguous([lookup(Sign::Plus), lookup(Sign::Minus)])
        }
    })
}

/// The KO class of a triple; an indeterminate `ε′` is an error.
pub fn validate(t: &RealSpectralTriple) -> Result<KOClass, TripleError> {
    match classify_triple(t)? {
        Classification::Definite(c) => Ok(c),
        Classification::Ambiguous(cands) => Err(TripleError::Ambiguous(cands)),
    }
}

/// `J ↦ γJ`.
pub fn flip_real_structure(t: &RealSpectralTriple) -> Result<RealSpectralTriple, TripleError> {
    let g = t.gamma().ok_or(TripleError::OddTriple)?;
    Ok(RealSpectralTriple {
        real_structure: t.real_structure.after_linear(g),
        ..t.clone()
    })
}
