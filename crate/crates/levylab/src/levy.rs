//! The Lévy-hierarchy class lattice: Δ₀ and the Σₙ/Πₙ/Δₙ levels above it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Kind of a hierarchy class at a given level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    Sigma,
    Pi,
    Delta,
}

/// A point in the Δ₀/Σₙ/Πₙ/Δₙ lattice.
///
/// Level 0 is canonicalized to `Delta0`: the three level-0 classes coincide,
/// so the constructors never produce `Sigma`/`Pi` at level 0. `Delta` at level
/// n ≥ 1 records that both a Σₙ and a Πₙ derivation exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevyClass {
    kind: ClassKind,
    level: u32,
}

/// Classification above this level is refused rather than risking unbounded
/// growth on adversarial inputs; no realistic formula comes near it.
pub const LEVEL_CAP: u32 = 32;

impl LevyClass {
    pub const DELTA0: LevyClass = LevyClass {
        kind: ClassKind::Delta,
        level: 0,
    };

    /// Builds a class, canonicalizing every level-0 kind to Δ₀.
    pub fn new(kind: ClassKind, level: u32) -> LevyClass {
        if level == 0 {
            LevyClass::DELTA0
        } else {
            LevyClass { kind, level }
        }
    }

    pub fn sigma(level: u32) -> LevyClass {
        LevyClass::new(ClassKind::Sigma, level)
    }

    pub fn pi(level: u32) -> LevyClass {
        LevyClass::new(ClassKind::Pi, level)
    }

    pub fn delta(level: u32) -> LevyClass {
        LevyClass::new(ClassKind::Delta, level)
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The dual class: Σₙ ↔ Πₙ, Δₙ ↔ Δₙ.
    pub fn dual(&self) -> LevyClass {
        match self.kind {
            ClassKind::Sigma => LevyClass::pi(self.level),
            ClassKind::Pi => LevyClass::sigma(self.level),
            ClassKind::Delta => *self,
        }
    }

    /// Containment order of the hierarchy: Δₙ ⊆ Σₙ, Δₙ ⊆ Πₙ, Σₙ ∪ Πₙ ⊆ Δₙ₊₁.
    pub fn leq(&self, other: &LevyClass) -> bool {
        use ClassKind::*;
        if self.level < other.level {
            return true;
        }
        if self.level > other.level {
            return false;
        }
        match (self.kind, other.kind) {
            (a, b) if a == b => true,
            (Delta, _) => true,
            _ => false,
        }
    }

    /// Least upper bound. The only incomparable pairs are (Σₙ, Πₙ), whose
    /// join is Δₙ₊₁, the least class containing both.
    pub fn join(&self, other: &LevyClass) -> LevyClass {
        if self.leq(other) {
            *other
        } else if other.leq(self) {
            *self
        } else {
            debug_assert_eq!(self.level, other.level);
            LevyClass::delta(self.level + 1)
        }
    }

    /// Least m ≥ 1 such that `self` ⊆ Σ_m.
    pub fn sigma_envelope_level(&self) -> u32 {
        match self.kind {
            ClassKind::Pi if self.level >= 1 => self.level + 1,
            _ => self.level.max(1),
        }
    }

    /// Least m ≥ 1 such that `self` ⊆ Π_m.
    pub fn pi_envelope_level(&self) -> u32 {
        match self.kind {
            ClassKind::Sigma if self.level >= 1 => self.level + 1,
            _ => self.level.max(1),
        }
    }

    /// Class of ∃x φ when φ is in `self`.
    pub fn lift_exists(&self) -> LevyClass {
        LevyClass::sigma(self.sigma_envelope_level())
    }

    /// Class of ∀x φ when φ is in `self`.
    pub fn lift_forall(&self) -> LevyClass {
        LevyClass::pi(self.pi_envelope_level())
    }
}

impl fmt::Display for LevyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ClassKind::Sigma => "Sigma",
            ClassKind::Pi => "Pi",
            ClassKind::Delta => "Delta",
        };
        write!(f, "{}{}", name, self.level)
    }
}

/// Error for unrecognized class spellings such as `Sigma` without a level.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized Levy class `{0}`")]
pub struct ParseClassError(pub String);

impl FromStr for LevyClass {
    type Err = ParseClassError;

    /// Parses the stable rendering: `Delta0`, `Sigma1`, `Pi2`, `Delta2`, ...
    fn from_str(s: &str) -> Result<LevyClass, ParseClassError> {
        let (kind, rest) = if let Some(rest) = s.strip_prefix("Sigma") {
            (ClassKind::Sigma, rest)
        } else if let Some(rest) = s.strip_prefix("Pi") {
            (ClassKind::Pi, rest)
        } else if let Some(rest) = s.strip_prefix("Delta") {
            (ClassKind::Delta, rest)
        } else {
            return Err(ParseClassError(s.to_string()));
        };
        let level: u32 = rest.parse().map_err(|_| ParseClassError(s.to_string()))?;
        if level == 0 && kind != ClassKind::Delta {
            // Sigma0/Pi0 are spelled Delta0 in the stable format.
            return Err(ParseClassError(s.to_string()));
        }
        Ok(LevyClass::new(kind, level))
    }
}
