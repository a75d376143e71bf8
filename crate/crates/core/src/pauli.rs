//! Pauli strings with a phase in `{1, i}`: the candidate space for real
//! structure searches.

use std::fmt;

use crate::arith::{kron_all, pauli, CMatrix, ExactComplex};
use num::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        pauli(self as usize)
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Global phase `1` or `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    One,
    I,
}

impl Phase {
    pub const ALL: [Phase; 2] = [Phase::One, Phase::I];

    pub fn value(self) -> ExactComplex {
        match self {
            Phase::One => ExactComplex::one(),
            Phase::I => ExactComplex::i(),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::One => "1",
            Phase::I => "i",
        })
    }
}

/// Tensor product of single-qubit Paulis, leftmost factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        assert!(
            !factors.is_empty(),
            "a Pauli string needs at least one factor"
        );
        PauliString(factors)
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> CMatrix {
        let mats: Vec<CMatrix> = self.0.iter().map(|p| p.matrix()).collect();
        let refs: Vec<&CMatrix> = mats.iter().collect();
        kron_all(&refs)
    }

    /// All `4^k` strings in lexicographic order `I < X < Y < Z`.
    pub fn enumerate(k: usize) -> impl Iterator<Item = PauliString> {
        assert!(k > 0, "Pauli strings need at least one factor");
        (0..4usize.pow(k as u32)).map(move |mut code| {
            let mut factors = vec![Pauli::I; k];
            for slot in factors.iter_mut().rev() {
                *slot = Pauli::ALL[code % 4];
                code /= 4;
            }
            PauliString(factors)
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

/// `phase · string`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn matrix(&self) -> CMatrix {
        self.string.matrix().scale(self.phase.value())
    }

    /// Candidate order used by searches: strings lexicographically, phase `1`
    /// before `i` for each string.
    pub fn candidates(k: usize) -> impl Iterator<Item = PhasedPauli> {
        PauliString::enumerate(k).flat_map(|string| {
            Phase::ALL.into_iter().map(move |phase| PhasedPauli {
                phase,
                string: string.clone(),
            })
        })
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            Phase::One => write!(f, "{}", self.string),
            Phase::I => write!(f, "i·{}", self.string),
        }
    }
}
