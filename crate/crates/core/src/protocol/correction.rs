use crate::gates::Pauli;

use super::BobOutcome;

/// Bob's correction for every combination of Alice's bits and his outcome.
///
/// The standard table is keyed on the measured bits: `m2` selects between
/// the identity/phase-flip family (`m2 = 0`) and the bit-flip family
/// (`m2 = 1`), and each 2×2 block lists ports `a`, `b` against x-spin 0, 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrectionTable {
    entries: [Pauli; 16],
}

use Pauli::{I, X, Y, Z};

impl CorrectionTable {
    /// Index order: m2, ma, path, spin (most significant first).
    pub const STANDARD: CorrectionTable = CorrectionTable {
        entries: [
            // m2 = 0, ma = 0: a0 a1 b0 b1
            I, Z, Z, I, //
            // m2 = 0, ma = 1
            Z, I, I, Z, //
            // m2 = 1, ma = 0
            X, Y, Y, X, //
            // m2 = 1, ma = 1
            Y, X, X, Y,
        ],
    };

    fn index(m2: u8, ma: u8, bob: BobOutcome) -> usize {
        ((m2 as usize & 1) << 3)
            | ((ma as usize & 1) << 2)
            | ((bob.path_bit as usize & 1) << 1)
            | (bob.spin_bit as usize & 1)
    }

    pub fn lookup(&self, m2: u8, ma: u8, bob: BobOutcome) -> Pauli {
        self.entries[Self::index(m2, ma, bob)]
    }

    /// Copy of the table with one entry replaced.
    pub fn with_entry(mut self, m2: u8, ma: u8, bob: BobOutcome, pauli: Pauli) -> Self {
        self.entries[Self::index(m2, ma, bob)] = pauli;
        self
    }
}

impl Default for CorrectionTable {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Table lookup in the standard correction table.
pub fn correction_for(m2: u8, ma: u8, bob: BobOutcome) -> Pauli {
    CorrectionTable::STANDARD.lookup(m2, ma, bob)
}

/// Closed form of the table: with `p = path ⊕ spin ⊕ ma`, `m2` picks the
/// family and `p` picks whether a phase flip is folded in.
pub fn correction_by_parity(m2: u8, ma: u8, bob: BobOutcome) -> Pauli {
    let parity = (bob.path_bit ^ bob.spin_bit ^ ma) & 1;
    match (m2 & 1, parity) {
        (0, 0) => I,
        (0, _) => Z,
        (_, 0) => X,
        _ => Y,
    }
}
