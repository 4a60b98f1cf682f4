//! Single-particle mode labels and their canonical order.
//!
//! A mode is a `(side, path, spin)` triple. The canonical order is
//! lexicographic on the triple with `1 < 2`, `A < B < C < D` and `up < down`,
//! and every mode has a dense index in `0..NUM_MODES` that follows it.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Total number of single-particle modes (2 sides x 4 paths x 2 spins).
pub const NUM_MODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    A,
    B,
    C,
    D,
}

/// Spin projection along z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Side {
    pub const ALL: [Side; 2] = [Side::One, Side::Two];

    pub fn index(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl Path {
    pub const ALL: [Path; 4] = [Path::A, Path::B, Path::C, Path::D];
    pub const INPUTS: [Path; 2] = [Path::A, Path::B];
    pub const OUTPUTS: [Path; 2] = [Path::C, Path::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_input(self) -> bool {
        matches!(self, Path::A | Path::B)
    }

    fn letter(self) -> char {
        match self {
            Path::A => 'A',
            Path::B => 'B',
            Path::C => 'C',
            Path::D => 'D',
        }
    }
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Twice the z projection, so that sums stay integral.
    pub fn twice_sz(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub side: Side,
    pub path: Path,
    pub spin: Spin,
}

impl ModeLabel {
    pub const fn new(side: Side, path: Path, spin: Spin) -> Self {
        Self { side, path, spin }
    }

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self.side.index() * 8 + self.path.index() * 2 + self.spin.index()
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < NUM_MODES, "mode index {index} out of range");
        let side = Side::ALL[index / 8];
        let path = Path::ALL[(index % 8) / 2];
        let spin = Spin::ALL[index % 2];
        Self { side, path, spin }
    }

    /// All sixteen modes in canonical order.
    pub fn all() -> impl Iterator<Item = ModeLabel> {
        (0..NUM_MODES).map(ModeLabel::from_index)
    }

    pub fn with_path(self, path: Path) -> Self {
        Self { path, ..self }
    }

    pub fn with_spin(self, spin: Spin) -> Self {
        Self { spin, ..self }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spin = match self.spin {
            Spin::Up => "up",
            Spin::Down => "dn",
        };
        write!(f, "{}{}{}", self.path.letter(), self.side.number(), spin)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Parses labels such as `C1up` or `D2dn`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidModeLabel(s.to_string());
        let mut chars = s.chars();
        let path = match chars.next().ok_or_else(bad)? {
            'A' => Path::A,
            'B' => Path::B,
            'C' => Path::C,
            'D' => Path::D,
            _ => return Err(bad()),
        };
        let side = match chars.next().ok_or_else(bad)? {
            '1' => Side::One,
            '2' => Side::Two,
            _ => return Err(bad()),
        };
        let spin = match chars.as_str() {
            "up" => Spin::Up,
            "dn" => Spin::Down,
            _ => return Err(bad()),
        };
        Ok(ModeLabel::new(side, path, spin))
    }
}

/// A set of modes, stored as a bitmask over canonical indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ModeSet(u16);

impl ModeSet {
    pub const fn empty() -> Self {
        ModeSet(0)
    }

    pub fn contains(self, mode: ModeLabel) -> bool {
        self.0 & (1 << mode.index()) != 0
    }

    pub fn insert(&mut self, mode: ModeLabel) {
        self.0 |= 1 << mode.index();
    }

    pub fn remove(&mut self, mode: ModeLabel) {
        self.0 &= !(1 << mode.index());
    }

    pub fn union(self, other: ModeSet) -> ModeSet {
        ModeSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: ModeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in canonical order.
    pub fn iter(self) -> impl Iterator<Item = ModeLabel> {
        (0..NUM_MODES)
            .filter(move |&i| self.0 & (1 << i) != 0)
            .map(ModeLabel::from_index)
    }

    /// The eight modes `{A, B} x {1, 2} x {up, down}`.
    pub fn inputs() -> ModeSet {
        ModeLabel::all().filter(|m| m.path.is_input()).collect()
    }

    /// The eight modes `{C, D} x {1, 2} x {up, down}`.
    pub fn outputs() -> ModeSet {
        ModeLabel::all().filter(|m| !m.path.is_input()).collect()
    }
}

impl FromIterator<ModeLabel> for ModeSet {
    fn from_iter<I: IntoIterator<Item = ModeLabel>>(iter: I) -> Self {
        let mut set = ModeSet::empty();
        for m in iter {
            set.insert(m);
        }
        set
    }
}

impl fmt::Display for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_follows_lexicographic_order() {
        let mut sorted: Vec<ModeLabel> = ModeLabel::all().collect();
        sorted.sort();
        for (i, m) in sorted.iter().enumerate() {
            assert_eq!(m.index(), i);
            assert_eq!(ModeLabel::from_index(i), *m);
        }
        assert_eq!(
            ModeLabel::from_index(0),
            ModeLabel::new(Side::One, Path::A, Spin::Up)
        );
        assert_eq!(
            ModeLabel::from_index(15),
            ModeLabel::new(Side::Two, Path::D, Spin::Down)
        );
    }

    #[test]
    fn label_text_round_trips() {
        for m in ModeLabel::all() {
            assert_eq!(m.to_string().parse::<ModeLabel>().unwrap(), m);
        }
        assert!("E1up".parse::<ModeLabel>().is_err());
        assert!("C3up".parse::<ModeLabel>().is_err());
        assert!("C1x".parse::<ModeLabel>().is_err());
    }

    #[test]
    fn input_and_output_sets_partition_all_modes() {
        let (i, o) = (ModeSet::inputs(), ModeSet::outputs());
        assert_eq!(i.len(), 8);
        assert_eq!(o.len(), 8);
        assert_eq!(i.union(o).len(), NUM_MODES);
        assert!(i.iter().all(|m| !o.contains(m)));
    }
}
