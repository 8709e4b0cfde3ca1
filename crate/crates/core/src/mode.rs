//! Angular-momentum labels: the level `j`, projections `m`, and the
//! creation/annihilation generators indexed by them.
//!
//! Projections are stored doubled (`twice_m`) so that half-integer values are
//! exact.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// A single `j`-level carrying `2j + 1` modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JLevel {
    twice_j: u32,
}

impl JLevel {
    pub const fn new(twice_j: u32) -> Self {
        JLevel { twice_j }
    }

    pub const fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub const fn mode_count(self) -> usize {
        self.twice_j as usize + 1
    }

    /// Modes in ascending projection order, `-j, -j+1, …, j`.
    pub fn modes(self) -> impl DoubleEndedIterator<Item = ModeIndex> + Clone {
        let tj = self.twice_j as i32;
        (0..=self.twice_j as i32).map(move |k| ModeIndex::from_twice(2 * k - tj))
    }

    pub fn contains(self, mode: ModeIndex) -> bool {
        let tj = self.twice_j as i32;
        mode.twice_m.abs() <= tj && (mode.twice_m - tj).rem_euclid(2) == 0
    }

    pub fn check(self, mode: ModeIndex) -> Result<ModeIndex, Error> {
        if self.contains(mode) {
            Ok(mode)
        } else {
            Err(Error::ModeOutOfRange { mode, level: self })
        }
    }

    /// Zero-based position of `mode` in ascending order.
    pub fn position(self, mode: ModeIndex) -> usize {
        debug_assert!(self.contains(mode));
        ((mode.twice_m + self.twice_j as i32) / 2) as usize
    }

    pub fn mode_at(self, position: usize) -> ModeIndex {
        ModeIndex::from_twice(2 * position as i32 - self.twice_j as i32)
    }
}

impl fmt::Display for JLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_half(f, self.twice_j as i32)
    }
}

/// Projection quantum number `m`, stored as `2m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    twice_m: i32,
}

impl ModeIndex {
    pub const fn from_twice(twice_m: i32) -> Self {
        ModeIndex { twice_m }
    }

    /// Integer projection `m`.
    pub const fn integer(m: i32) -> Self {
        ModeIndex { twice_m: 2 * m }
    }

    pub const fn twice_m(self) -> i32 {
        self.twice_m
    }

    /// Shift by `delta` units of projection (`±1` for the ladder operators).
    pub const fn shifted(self, delta: i32) -> Self {
        ModeIndex {
            twice_m: self.twice_m + 2 * delta,
        }
    }
}

fn write_half(f: &mut fmt::Formatter<'_>, twice: i32) -> fmt::Result {
    if twice % 2 == 0 {
        write!(f, "{}", twice / 2)
    } else {
        write!(f, "{}/2", twice)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_half(f, self.twice_m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Creation,
    Annihilation,
}

/// `b†_m` or `b_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub mode: ModeIndex,
}

impl Generator {
    pub const fn creation(mode: ModeIndex) -> Self {
        Generator {
            kind: GeneratorKind::Creation,
            mode,
        }
    }

    pub const fn annihilation(mode: ModeIndex) -> Self {
        Generator {
            kind: GeneratorKind::Annihilation,
            mode,
        }
    }

    pub const fn is_creation(self) -> bool {
        matches!(self.kind, GeneratorKind::Creation)
    }

    pub const fn adjoint(self) -> Self {
        let kind = match self.kind {
            GeneratorKind::Creation => GeneratorKind::Annihilation,
            GeneratorKind::Annihilation => GeneratorKind::Creation,
        };
        Generator {
            kind,
            mode: self.mode,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::Creation => write!(f, "bd({})", self.mode),
            GeneratorKind::Annihilation => write!(f, "b({})", self.mode),
        }
    }
}

/// Ordered mode sequence `(j₁, …, jₙ)`, read as `b†_{j₁}⋯b†_{jₙ}|0⟩` when it
/// labels a Fock state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<ModeIndex>);

impl Word {
    pub fn new(modes: Vec<ModeIndex>) -> Self {
        Word(modes)
    }

    pub fn from_twice(twice: &[i32]) -> Self {
        Word(twice.iter().map(|&t| ModeIndex::from_twice(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.0
    }

    /// Multiset of modes, sorted ascending.
    pub fn content(&self) -> Vec<ModeIndex> {
        let mut c = self.0.clone();
        c.sort_unstable();
        c
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", m)?;
        }
        f.write_str(")")
    }
}
