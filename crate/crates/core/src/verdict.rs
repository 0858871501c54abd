use crate::graph::{VertexSet, Word};
use crate::lattice::LatticeElement;

/// A decision plus, in the direction that admits one, a certificate that
/// can be re-checked from the raw definitions (see [`crate::witness`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails() -> Self {
        Verdict {
            holds: false,
            witness: None,
        }
    }

    pub fn with_witness(holds: bool, witness: Witness) -> Self {
        Verdict {
            holds,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// 𝓛(set·E^{n|word|}) = {wordⁿ} for every n ≥ 1.
    Disagree { set: VertexSet, word: Word },
    /// The closure element `stem · cycle^ω` has no prefix whose range is
    /// covered by the relative ranges of `atom`.
    Cofinal {
        atom: VertexSet,
        stem: Word,
        cycle: Word,
    },
    /// (word, set) is a cycle without an exit.
    CycleNoExit { word: Word, set: VertexSet },
    /// A proper nonempty hereditary saturated family, listed in full.
    ProperHereditarySaturated {
        support: LatticeElement,
        members: Vec<LatticeElement>,
    },
    /// No member D of the lattice has r(D, word) = r(word).
    DomainFail { word: Word },
    /// r(left, word) ∩ r(right, word) ≠ r(left ∩ right, word).
    NotWeaklyLeftResolving {
        left: VertexSet,
        right: VertexSet,
        word: Word,
    },
}
