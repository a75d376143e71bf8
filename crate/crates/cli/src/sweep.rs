//! Exhaustive and sampled product checks over the exemplar catalog.

use kotriple_core::exemplars::ExemplarCatalog;
use kotriple_core::kosigns::{
    classic_class, predict_class, traditional_predict, DiracChoice, KOClass, Parity, SignError,
    Variant,
};
use kotriple_core::products::{
    check_convention_equivalence, check_operator_associativity, default_convention, graded_product,
    traditional_product, EquivalenceReport, KozulConvention, ProductError,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Seed for the sampled associativity triples.
pub const ASSOCIATIVITY_SEED: u64 = 0x6b6f_7472;

fn run<T, R, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

/// Conventions exercised for a parity pair.
pub fn conventions_for(a: KOClass, b: KOClass) -> Vec<KozulConvention> {
    if a.parity() == b.parity() {
        vec![KozulConvention::First, KozulConvention::Second]
    } else {
        vec![default_convention(a.parity(), b.parity())]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedCase {
    pub pair: [KOClass; 2],
    pub convention: KozulConvention,
    /// Table entry, `None` for mixed variants.
    pub expected: Option<KOClass>,
    pub class: Option<KOClass>,
    pub variant_mismatch: bool,
    pub checks_pass: bool,
    pub error: Option<String>,
}

impl GradedCase {
    pub fn ok(&self) -> bool {
        match self.expected {
            Some(c) => self.class == Some(c) && self.checks_pass,
            None => self.variant_mismatch,
        }
    }
}

pub fn graded_cases(cat: &ExemplarCatalog, parallel: bool) -> Vec<GradedCase> {
    let jobs: Vec<(KOClass, KOClass, KozulConvention)> = KOClass::all()
        .flat_map(|a| KOClass::all().map(move |b| (a, b)))
        .flat_map(|(a, b)| conventions_for(a, b).into_iter().map(move |k| (a, b, k)))
        .collect();
    let mut cases = run(jobs, parallel, |(a, b, k)| {
        let expected = predict_class(a, b).ok();
        let r = graded_product(cat.get(a), cat.get(b), k);
        GradedCase {
            pair: [a, b],
            convention: k,
            expected,
            class: r.as_ref().ok().map(|r| r.class),
            variant_mismatch: matches!(
                r,
                Err(ProductError::Sign(SignError::VariantMismatch { .. }))
            ),
            checks_pass: r.as_ref().is_ok_and(|r| r.all_checks_pass()),
            error: r.err().map(|e| e.to_string()),
        }
    });
    cases.sort_by_key(|c| (c.pair, c.convention));
    cases
}

pub fn even_same_variant_pairs() -> Vec<(KOClass, KOClass)> {
    let evens: Vec<KOClass> = KOClass::all()
        .filter(|c| c.parity() == Parity::Even)
        .collect();
    evens
        .iter()
        .flat_map(|&a| {
            evens
                .iter()
                .filter(move |b| b.variant() == a.variant())
                .map(move |&b| (a, b))
        })
        .collect()
}

pub fn equivalence_cases(
    cat: &ExemplarCatalog,
    parallel: bool,
) -> Vec<Result<EquivalenceReport, ProductError>> {
    let mut out = run(even_same_variant_pairs(), parallel, |(a, b)| {
        check_convention_equivalence(cat.get(a), cat.get(b))
    });
    out.sort_by_key(|r| r.as_ref().map(|r| r.pair).ok());
    out
}

/// Exemplar carrying the traditional signs of a dimension: the `ε′ = +1`
/// class for even dimensions, the upper class for odd ones.
pub fn classic_exemplar_class(dim: u8) -> KOClass {
    if dim % 2 == 0 {
        classic_class(dim)
    } else {
        KOClass::new(dim as i64, Variant::Upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraditionalCase {
    pub dims: [u8; 2],
    pub choice: DiracChoice,
    /// `None` when the choice needs a grading the factor lacks.
    pub predicted_defined: Option<bool>,
    pub outcome: TraditionalOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraditionalOutcome {
    Defined(KOClass),
    Undefined,
    MissingGrading,
    Other(String),
}

impl TraditionalCase {
    pub fn ok(&self) -> bool {
        matches!(
            (self.predicted_defined, &self.outcome),
            (Some(true), TraditionalOutcome::Defined(_))
                | (Some(false), TraditionalOutcome::Undefined)
                | (None, TraditionalOutcome::MissingGrading)
        )
    }
}

/// Every ordered pair of traditional-sign exemplars under both Dirac choices.
pub fn traditional_cases(cat: &ExemplarCatalog) -> Vec<TraditionalCase> {
    let mut out = Vec::new();
    for choice in [DiracChoice::D, DiracChoice::DTilde] {
        for a in 0..8u8 {
            for b in 0..8u8 {
                let (ca, cb) = (classic_exemplar_class(a), classic_exemplar_class(b));
                let needs_even = match choice {
                    DiracChoice::D => ca,
                    DiracChoice::DTilde => cb,
                };
                let predicted_defined = (needs_even.parity() == Parity::Even).then(|| {
                    let s = |c| kotriple_core::kosigns::signs_of_class(c);
                    traditional_predict(s(ca), s(cb), choice).is_ok()
                });
                let outcome = match traditional_product(cat.get(ca), cat.get(cb), choice) {
                    Ok(r) if r.all_checks_pass() => TraditionalOutcome::Defined(r.class),
                    Ok(r) => TraditionalOutcome::Other(format!("checks failed: {:?}", r.checks)),
                    Err(ProductError::UndefinedProduct { .. }) => TraditionalOutcome::Undefined,
                    Err(ProductError::OddFirstFactor | ProductError::OddSecondFactor) => {
                        TraditionalOutcome::MissingGrading
                    }
                    Err(e) => TraditionalOutcome::Other(e.to_string()),
                };
                out.push(TraditionalCase {
                    dims: [a, b],
                    choice,
                    predicted_defined,
                    outcome,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityCase {
    pub classes: [KOClass; 3],
    pub holds: bool,
    pub detail: String,
}

/// `count` distinct same-variant even triples drawn with a fixed seed.
pub fn sample_even_triples(count: usize, seed: u64) -> Vec<[KOClass; 3]> {
    let mut all: Vec<[KOClass; 3]> = Vec::new();
    for v in [Variant::Upper, Variant::Lower] {
        for a in (0..8).step_by(2) {
            for b in (0..8).step_by(2) {
                for c in (0..8).step_by(2) {
                    all.push([a, b, c].map(|d| KOClass::new(d, v)));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    all.truncate(count);
    all
}

pub fn associativity_cases(
    cat: &ExemplarCatalog,
    triples: Vec<[KOClass; 3]>,
    parallel: bool,
) -> Vec<AssociativityCase> {
    let mut out = run(triples, parallel, |t| {
        let [a, b, c] = t;
        match check_operator_associativity(
            cat.get(a),
            cat.get(b),
            cat.get(c),
            KozulConvention::First,
        ) {
            Ok(r) => AssociativityCase {
                classes: t,
                holds: r.holds(),
                detail: format!(
                    "class {}, J factor {}",
                    r.class,
                    r.j_factor
                        .map(|z| z.to_string())
                        .unwrap_or_else(|| "none".into())
                ),
            },
            Err(e) => AssociativityCase {
                classes: t,
                holds: false,
                detail: e.to_string(),
            },
        }
    });
    out.sort_by_key(|c| c.classes);
    out
}
