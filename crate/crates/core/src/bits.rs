//! The power set of a single bit: four detector states, their Boolean
//! algebra, the question/answer bracket and the 256 bit operators.

use std::fmt;

/// State of one elementary signal detector.
///
/// The numeric encoding is fixed: `|0)` ground, `|1)` signal, `|2)` faulty
/// (the full set `{0,1}`), `|3)` empty (the detector does not exist).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum PBitState {
    Ground = 0,
    Signal = 1,
    Faulty = 2,
    Empty = 3,
}

impl PBitState {
    pub const ALL: [PBitState; 4] = [
        PBitState::Ground,
        PBitState::Signal,
        PBitState::Faulty,
        PBitState::Empty,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        PBitState::ALL.get(i).copied()
    }

    /// Ground or signal: a working detector.
    pub fn is_normal(self) -> bool {
        matches!(self, PBitState::Ground | PBitState::Signal)
    }

    // Subset of {0, 1} as a two-bit mask: bit 0 holds element 0, bit 1 element 1.
    fn mask(self) -> u8 {
        match self {
            PBitState::Ground => 0b01,
            PBitState::Signal => 0b10,
            PBitState::Faulty => 0b11,
            PBitState::Empty => 0b00,
        }
    }

    fn from_mask(m: u8) -> Self {
        match m & 0b11 {
            0b01 => PBitState::Ground,
            0b10 => PBitState::Signal,
            0b11 => PBitState::Faulty,
            _ => PBitState::Empty,
        }
    }

    pub fn union(self, other: Self) -> Self {
        Self::from_mask(self.mask() | other.mask())
    }

    pub fn intersect(self, other: Self) -> Self {
        Self::from_mask(self.mask() & other.mask())
    }

    pub fn complement(self) -> Self {
        Self::from_mask(!self.mask())
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PBitState::Ground => "0",
            PBitState::Signal => "1",
            PBitState::Faulty => "B",
            PBitState::Empty => "∅",
        }
    }
}

impl fmt::Display for PBitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{})", self.symbol())
    }
}

/// The dual `(i|`: asks whether a detector is in state `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Question(pub PBitState);

impl Question {
    pub fn bracket(self, s: PBitState) -> u8 {
        u8::from(self.0 == s)
    }
}

/// `(q|s) = δ_qs`.
pub fn bracket(q: Question, s: PBitState) -> u8 {
    q.bracket(s)
}

/// A total map from the four states to themselves, stored as its image table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitOp {
    image: [PBitState; 4],
}

use PBitState::{Empty as E, Faulty as F, Ground as G, Signal as S};

impl BitOp {
    pub const I: BitOp = BitOp {
        image: [G, S, F, E],
    };
    /// Annihilator: everything to `|∅)`.
    pub const Z: BitOp = BitOp {
        image: [E, E, E, E],
    };
    pub const P0: BitOp = BitOp {
        image: [G, E, E, E],
    };
    pub const P1: BitOp = BitOp {
        image: [E, S, E, E],
    };
    /// Signal annihilation.
    pub const A: BitOp = BitOp {
        image: [E, G, E, E],
    };
    /// Signal creation.
    pub const A_BAR: BitOp = BitOp {
        image: [S, E, E, E],
    };
    /// Construction: everything to ground.
    pub const C: BitOp = BitOp {
        image: [G, G, G, G],
    };
    /// Decommissioning: existing detectors become faulty, debris remains.
    pub const D: BitOp = BitOp {
        image: [F, F, F, E],
    };

    pub const NAMED: [(&'static str, BitOp); 8] = [
        ("I", BitOp::I),
        ("Z", BitOp::Z),
        ("P0", BitOp::P0),
        ("P1", BitOp::P1),
        ("A", BitOp::A),
        ("Ā", BitOp::A_BAR),
        ("C", BitOp::C),
        ("D", BitOp::D),
    ];

    pub fn from_image(image: [PBitState; 4]) -> Self {
        BitOp { image }
    }

    pub fn image(&self) -> [PBitState; 4] {
        self.image
    }

    /// Base-4 code: `image[j]` is digit `j`. Ranges over `0..256`.
    pub fn code(&self) -> u8 {
        self.image
            .iter()
            .rev()
            .fold(0u8, |acc, s| acc * 4 + s.index() as u8)
    }

    pub fn from_code(code: u8) -> Self {
        let mut image = [E; 4];
        let mut c = code;
        for slot in image.iter_mut() {
            *slot = PBitState::from_index((c % 4) as usize).unwrap();
            c /= 4;
        }
        BitOp { image }
    }

    pub fn apply(&self, s: PBitState) -> PBitState {
        self.image[s.index()]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &BitOp) -> BitOp {
        BitOp {
            image: first.image.map(|s| self.apply(s)),
        }
    }

    pub fn matrix(&self) -> BitMatrix {
        let mut m = [[0u8; 4]; 4];
        for (col, s) in self.image.iter().enumerate() {
            m[s.index()][col] = 1;
        }
        BitMatrix(m)
    }

    pub fn name(&self) -> Option<&'static str> {
        BitOp::NAMED
            .iter()
            .find(|(_, op)| op == self)
            .map(|(n, _)| *n)
    }
}

impl fmt::Debug for BitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "BitOp#{}", self.code()),
        }
    }
}

impl fmt::Display for BitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn apply(op: BitOp, s: PBitState) -> PBitState {
    op.apply(s)
}

/// `compose(o2, o1)` is the product `O2 O1`: `o1` acts first.
pub fn compose(o2: BitOp, o1: BitOp) -> BitOp {
    o2.after(&o1)
}

/// All 4^4 bit operators, in code order.
pub fn enumerate_bitops() -> Vec<BitOp> {
    (0..=255u8).map(BitOp::from_code).collect()
}

/// 4×4 column-stochastic 0/1 matrix; column `j` is the image of `|j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix(pub [[u8; 4]; 4]);

impl BitMatrix {
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        let mut out = [[0u8; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        BitMatrix(out)
    }

    /// Exactly one 1 per column.
    pub fn is_deterministic(&self) -> bool {
        (0..4).all(|c| {
            let col: Vec<u8> = (0..4).map(|r| self.0[r][c]).collect();
            col.iter().all(|&x| x <= 1) && col.iter().map(|&x| x as u32).sum::<u32>() == 1
        })
    }

    pub fn to_bitop(&self) -> Option<BitOp> {
        if !self.is_deterministic() {
            return None;
        }
        let mut image = [E; 4];
        for (c, slot) in image.iter_mut().enumerate() {
            let r = (0..4).find(|&r| self.0[r][c] == 1)?;
            *slot = PBitState::from_index(r)?;
        }
        Some(BitOp { image })
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            writeln!(f, "[{} {} {} {}]", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

/// The four basic bit operators in table order.
pub const BASIC_FOUR: [BitOp; 4] = [BitOp::P0, BitOp::P1, BitOp::A, BitOp::A_BAR];

/// Product table `row · column` for the given operators.
pub fn product_table(ops: &[BitOp]) -> Vec<Vec<BitOp>> {
    ops.iter()
        .map(|row| ops.iter().map(|col| compose(*row, *col)).collect())
        .collect()
}

/// Aligned text grid of the product table, row operator on the left.
pub fn render_product_table(ops: &[BitOp]) -> String {
    let label = |op: &BitOp| op.to_string();
    let table = product_table(ops);
    let width = table
        .iter()
        .flatten()
        .chain(ops.iter())
        .map(|op| label(op).chars().count())
        .max()
        .unwrap_or(1)
        .max(1);
    let pad = |s: String| format!("{s:>width$}");
    let mut out = String::new();
    out.push_str(&pad(String::new()));
    out.push_str(" |");
    for op in ops {
        out.push(' ');
        out.push_str(&pad(label(op)));
    }
    out.push('\n');
    out.push_str(&"-".repeat(width + 2 + ops.len() * (width + 1)));
    out.push('\n');
    for (op, row) in ops.iter().zip(&table) {
        out.push_str(&pad(label(op)));
        out.push_str(" |");
        for cell in row {
            out.push(' ');
            out.push_str(&pad(label(cell)));
        }
        out.push('\n');
    }
    out
}

/// Qubit operators as 2×2 integer matrices, for comparison with the bit table.
pub mod qubit {
    pub type Mat2 = [[i64; 2]; 2];

    pub const P0: Mat2 = [[1, 0], [0, 0]];
    pub const P1: Mat2 = [[0, 0], [0, 1]];
    /// `|0⟩⟨1|`
    pub const A: Mat2 = [[0, 1], [0, 0]];
    /// `|1⟩⟨0|`
    pub const A_DAG: Mat2 = [[0, 0], [1, 0]];
    pub const ZERO: Mat2 = [[0, 0], [0, 0]];

    pub const BASIC_FOUR: [Mat2; 4] = [P0, P1, A, A_DAG];

    pub fn mul(x: &Mat2, y: &Mat2) -> Mat2 {
        let mut out = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = x[r][0] * y[0][c] + x[r][1] * y[1][c];
            }
        }
        out
    }

    /// Product table over the basic four; entries are indices into
    /// `BASIC_FOUR`, or `None` for the zero operator.
    pub fn table() -> [[Option<usize>; 4]; 4] {
        let mut t = [[None; 4]; 4];
        for (r, x) in BASIC_FOUR.iter().enumerate() {
            for (c, y) in BASIC_FOUR.iter().enumerate() {
                let p = mul(x, y);
                t[r][c] = if p == ZERO {
                    None
                } else {
                    Some(
                        BASIC_FOUR
                            .iter()
                            .position(|m| *m == p)
                            .expect("closed table"),
                    )
                };
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_operator_actions() {
        assert_eq!(apply(BitOp::A, S), G);
        assert_eq!(apply(BitOp::C, E), G);
        assert_eq!(apply(BitOp::I, F), F);
        assert_eq!(apply(BitOp::A_BAR, S), E);
        assert_eq!(apply(BitOp::D, E), E);
        assert_eq!(apply(BitOp::D, S), F);
    }

    #[test]
    fn compositions() {
        assert_eq!(compose(BitOp::A, BitOp::A_BAR), BitOp::P0);
        assert_eq!(compose(BitOp::A_BAR, BitOp::A), BitOp::P1);
        assert_eq!(compose(BitOp::A_BAR, BitOp::A_BAR), BitOp::Z);
        assert_eq!(compose(BitOp::A, BitOp::A), BitOp::Z);
        assert_eq!(compose(BitOp::P0, BitOp::P1), BitOp::Z);
        assert_eq!(compose(BitOp::P1, BitOp::P0), BitOp::Z);
        for op in [BitOp::P0, BitOp::P1, BitOp::C, BitOp::D] {
            assert_eq!(compose(op, op), op, "{op} should be idempotent");
        }
    }

    #[test]
    fn matrices_match_expected_forms() {
        assert_eq!(BitOp::Z.matrix().0, [[0; 4], [0; 4], [0; 4], [1; 4]]);
        assert_eq!(
            BitOp::P1.matrix().0,
            [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [1, 0, 1, 1]]
        );
        assert_eq!(
            BitOp::D.matrix().0,
            [[0, 0, 0, 0], [0, 0, 0, 0], [1, 1, 1, 0], [0, 0, 0, 1]]
        );
        assert_eq!(BitOp::C.matrix().0, [[1; 4], [0; 4], [0; 4], [0; 4]]);
    }

    #[test]
    fn bracket_rule() {
        assert_eq!(bracket(Question(G), G), 1);
        assert_eq!(bracket(Question(E), E), 1);
        assert_eq!(bracket(Question(S), E), 0);
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(G.union(S), F);
        assert_eq!(E.complement(), F);
        assert_eq!(F.complement(), E);
        assert_eq!(G.complement(), S);
        assert_eq!(G.intersect(S), E);
    }

    #[test]
    fn code_roundtrip() {
        for c in 0..=255u8 {
            assert_eq!(BitOp::from_code(c).code(), c);
        }
        assert_eq!(BitOp::matrix(&BitOp::A).to_bitop(), Some(BitOp::A));
    }

    #[test]
    fn rendered_table_layout() {
        let t = render_product_table(&BASIC_FOUR);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(
            lines[2].split_whitespace().collect::<Vec<_>>(),
            ["P0", "|", "P0", "Z", "A", "Z"]
        );
        assert_eq!(
            lines[5].split_whitespace().collect::<Vec<_>>(),
            ["Ā", "|", "Ā", "Z", "P1", "Z"]
        );
    }
}
