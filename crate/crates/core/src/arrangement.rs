//! Triangular arrangements whose inner lines have root-of-unity slopes.
//!
//! Coordinates: the vertices are `P1 = (0:0:1)`, `P2 = (1:0:0)`, `P3 = (0:1:0)`.
//! Inner lines of family A are `x = ζ^α y` (through `P1`), family B `y = ζ^β z`
//! (through `P2`), family C `z = ζ^γ x` (through `P3`). Side X is `x = 0`
//! (through `P1`, `P3`), Y is `y = 0` (through `P1`, `P2`) and Z is `z = 0`
//! (through `P2`, `P3`). One line of each family meets in a point exactly when
//! `α + β + γ ≡ 0 (mod n)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{HomForm3, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
    Z,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::X, Side::Y, Side::Z];

    fn bit(self) -> u8 {
        1 << self as u8
    }

    /// The linear form defining the side.
    pub fn covector(self) -> [u64; 3] {
        let mut v = [0; 3];
        v[self as usize] = 1;
        v
    }

    /// The two vertices joined by this side.
    pub fn vertices(self) -> [Vertex; 2] {
        match self {
            Side::X => [Vertex::P1, Vertex::P3],
            Side::Y => [Vertex::P1, Vertex::P2],
            Side::Z => [Vertex::P2, Vertex::P3],
        }
    }
}

/// A subset of `{X, Y, Z}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sides(u8);

impl Sides {
    pub const NONE: Sides = Sides(0);
    pub const ALL: Sides = Sides(7);

    pub fn contains(self, s: Side) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn with(self, s: Side) -> Sides {
        Sides(self.0 | s.bit())
    }

    pub fn without(self, s: Side) -> Sides {
        Sides(self.0 & !s.bit())
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Side> {
        Side::ALL.into_iter().filter(move |&s| self.contains(s))
    }

    /// All eight subsets, indexed by bitmask.
    pub fn all_subsets() -> impl Iterator<Item = Sides> {
        (0..8).map(Sides)
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

impl FromIterator<Side> for Sides {
    fn from_iter<I: IntoIterator<Item = Side>>(iter: I) -> Self {
        iter.into_iter().fold(Sides::NONE, Sides::with)
    }
}

impl fmt::Display for Sides {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|s| format!("{s:?}")).collect();
        if s.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&s)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn vertex(self) -> Vertex {
        match self {
            Family::A => Vertex::P1,
            Family::B => Vertex::P2,
            Family::C => Vertex::P3,
        }
    }

    /// The side through the two vertices other than this family's own.
    pub fn opposite_side(self) -> Side {
        match self {
            Family::A => Side::Z,
            Family::B => Side::X,
            Family::C => Side::Y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    P1,
    P2,
    P3,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::P1, Vertex::P2, Vertex::P3];

    pub fn family(self) -> Family {
        match self {
            Vertex::P1 => Family::A,
            Vertex::P2 => Family::B,
            Vertex::P3 => Family::C,
        }
    }

    pub fn sides(self) -> [Side; 2] {
        match self {
            Vertex::P1 => [Side::X, Side::Y],
            Vertex::P2 => [Side::Y, Side::Z],
            Vertex::P3 => [Side::X, Side::Z],
        }
    }

    pub fn coords(self) -> [u64; 3] {
        match self {
            Vertex::P1 => [0, 0, 1],
            Vertex::P2 => [1, 0, 0],
            Vertex::P3 => [0, 1, 0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Line {
    Inner(Family, u64),
    Side(Side),
}

impl Line {
    pub fn family(self) -> Option<Family> {
        match self {
            Line::Inner(f, _) => Some(f),
            Line::Side(_) => None,
        }
    }

    pub fn exponent(self) -> Option<u64> {
        match self {
            Line::Inner(_, e) => Some(e),
            Line::Side(_) => None,
        }
    }

    /// Linear form of the line over `field`, given a root of unity `zeta` of the
    /// arrangement's order inside it.
    pub fn covector(self, field: &PrimeField, zeta: u64) -> [u64; 3] {
        let zp = field.zp();
        match self {
            Line::Side(s) => s.covector(),
            Line::Inner(f, e) => {
                let c = zp.neg(zp.pow(zeta, e));
                match f {
                    Family::A => [1, c, 0],
                    Family::B => [0, 1, c],
                    Family::C => [c, 0, 1],
                }
            }
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Inner(fam, e) => write!(f, "{fam:?}{e}"),
            Line::Side(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrSignature {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    #[serde(with = "sides_serde")]
    pub sides: Sides,
}

impl TrSignature {
    pub fn abc(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }
}

/// Inner lines only, without the validity requirements of [`Rua`]
/// (complements of sub-arrangements can be tiny or concurrent).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InnerLines {
    pub n: u64,
    pub exps: [Vec<u64>; 3],
}

impl InnerLines {
    pub fn line_count(&self) -> usize {
        self.exps.iter().map(Vec::len).sum()
    }

    pub fn lines(&self) -> Vec<Line> {
        Family::ALL
            .iter()
            .flat_map(|&f| self.exps[f.index()].iter().map(move |&e| Line::Inner(f, e)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RuaFile", into = "RuaFile")]
pub struct Rua {
    n: u64,
    exps: [Vec<u64>; 3],
    sides: Sides,
}

/// On-disk form of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuaFile {
    pub modulus: u64,
    pub ea: Vec<u64>,
    pub eb: Vec<u64>,
    pub ec: Vec<u64>,
    pub sides: Vec<Side>,
}

impl TryFrom<RuaFile> for Rua {
    type Error = Error;

    fn try_from(f: RuaFile) -> Result<Rua> {
        make_rua(f.modulus, f.ea, f.eb, f.ec, f.sides.into_iter().collect())
    }
}

impl From<Rua> for RuaFile {
    fn from(r: Rua) -> RuaFile {
        let [ea, eb, ec] = r.exps;
        RuaFile {
            modulus: r.n,
            ea,
            eb,
            ec,
            sides: r.sides.iter().collect(),
        }
    }
}

pub(crate) mod sides_serde {
    use super::{Side, Sides};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: &Sides, ser: S) -> Result<S::Ok, S::Error> {
        s.iter().collect::<Vec<Side>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Sides, D::Error> {
        Ok(Vec::<Side>::deserialize(de)?.into_iter().collect())
    }
}

fn validate_family(family: char, n: u64, mut e: Vec<u64>) -> Result<Vec<u64>> {
    if let Some(&bad) = e.iter().find(|&&x| x >= n) {
        return Err(Error::ExponentOutOfRange {
            exponent: bad,
            modulus: n,
        });
    }
    e.sort_unstable();
    if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateExponent {
            family,
            exponent: w[0],
        });
    }
    Ok(e)
}

/// Validated constructor: exponents are sorted, must be residues mod `n`
/// without repetition, and the lines must not all pass through one point.
pub fn make_rua(n: u64, ea: Vec<u64>, eb: Vec<u64>, ec: Vec<u64>, sides: Sides) -> Result<Rua> {
    if n == 0 {
        return Err(Error::InvalidSignature("modulus must be positive".into()));
    }
    let exps = [
        validate_family('A', n, ea)?,
        validate_family('B', n, eb)?,
        validate_family('C', n, ec)?,
    ];
    let r = Rua { n, exps, sides };
    let count = r.line_count();
    if count < 3 {
        return Err(Error::EmptyArrangement(format!("only {count} lines")));
    }
    if let Some(v) = Vertex::ALL.into_iter().find(|&v| r.vertex_multiplicity(v) == count) {
        return Err(Error::EmptyArrangement(format!("all lines pass through {v:?}")));
    }
    if count == 3 && sides.is_empty() && r.exps.iter().all(|e| e.len() == 1) {
        let s = r.exps.iter().map(|e| e[0]).sum::<u64>();
        if s % n == 0 {
            return Err(Error::EmptyArrangement("three concurrent inner lines".into()));
        }
    }
    Ok(r)
}

impl Rua {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ea(&self) -> &[u64] {
        &self.exps[0]
    }

    pub fn eb(&self) -> &[u64] {
        &self.exps[1]
    }

    pub fn ec(&self) -> &[u64] {
        &self.exps[2]
    }

    pub fn exps(&self) -> &[Vec<u64>; 3] {
        &self.exps
    }

    pub fn family(&self, f: Family) -> &[u64] {
        &self.exps[f.index()]
    }

    pub fn sides(&self) -> Sides {
        self.sides
    }

    pub fn has_all_sides(&self) -> bool {
        self.sides == Sides::ALL
    }

    pub fn line_count(&self) -> usize {
        self.exps.iter().map(Vec::len).sum::<usize>() + self.sides.len()
    }

    /// Lines in canonical order: family A, B, C by ascending exponent, then sides X, Y, Z.
    pub fn lines(&self) -> Vec<Line> {
        Family::ALL
            .iter()
            .flat_map(|&f| self.exps[f.index()].iter().map(move |&e| Line::Inner(f, e)))
            .chain(self.sides.iter().map(Line::Side))
            .collect()
    }

    pub fn contains(&self, l: Line) -> bool {
        match l {
            Line::Side(s) => self.sides.contains(s),
            Line::Inner(f, e) => self.exps[f.index()].binary_search(&e).is_ok(),
        }
    }

    /// Number of lines of the arrangement through a vertex.
    pub fn vertex_multiplicity(&self, v: Vertex) -> usize {
        self.exps[v.family().index()].len()
            + v.sides().iter().filter(|&&s| self.sides.contains(s)).count()
    }

    pub fn inner(&self) -> InnerLines {
        InnerLines {
            n: self.n,
            exps: self.exps.clone(),
        }
    }

    /// Root of unity of order `n` inside a field whose order is a multiple of `n`.
    pub fn zeta_in(&self, field: &PrimeField) -> Result<u64> {
        field.root_of_order(self.n).ok_or(Error::ModulusMismatch {
            arrangement: self.n,
            field: field.n(),
        })
    }

    /// Line forms over `field`, in [`Rua::lines`] order.
    pub fn line_forms(&self, field: &PrimeField) -> Result<Vec<[u64; 3]>> {
        let zeta = self.zeta_in(field)?;
        Ok(self.lines().into_iter().map(|l| l.covector(field, zeta)).collect())
    }

    /// Same inner lines, different sides. Fails if the result is degenerate.
    pub fn with_sides(&self, sides: Sides) -> Result<Rua> {
        make_rua(self.n, self.exps[0].clone(), self.exps[1].clone(), self.exps[2].clone(), sides)
    }
}

impl fmt::Display for Rua {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} A{:?} B{:?} C{:?} sides={}",
            self.n, self.exps[0], self.exps[1], self.exps[2], self.sides
        )
    }
}

/// The full monomial arrangement `xyz(x^N-y^N)(y^N-z^N)(z^N-x^N)`.
pub fn full_monomial(big_n: u64) -> Rua {
    assert!(big_n >= 1, "full monomial arrangement needs N >= 1");
    let all: Vec<u64> = (0..big_n).collect();
    make_rua(big_n, all.clone(), all.clone(), all, Sides::ALL).expect("full monomial arrangement is valid")
}

pub fn delete_lines(a: &Rua, lines: &[Line]) -> Result<Rua> {
    let mut exps = a.exps.clone();
    let mut sides = a.sides;
    for &l in lines {
        if !a.contains(l) {
            return Err(Error::LineNotPresent(l.to_string()));
        }
        match l {
            Line::Side(s) => sides = sides.without(s),
            Line::Inner(f, e) => exps[f.index()].retain(|&x| x != e),
        }
    }
    let [ea, eb, ec] = exps;
    make_rua(a.n, ea, eb, ec, sides)
}

/// Exponents of `a` rescaled into `Z/big_n`.
pub fn rescaled(a: &Rua, big_n: u64) -> Result<[Vec<u64>; 3]> {
    if big_n == 0 || big_n % a.n != 0 {
        return Err(Error::NotEmbeddable { n: a.n, target: big_n });
    }
    let k = big_n / a.n;
    Ok(a.exps.clone().map(|v| v.into_iter().map(|e| e * k).collect()))
}

/// Inner lines of `full_monomial(big_n)` missing from `a` once its exponents are
/// rescaled by `big_n / n`. Sides never belong to the complement.
pub fn complement_in(a: &Rua, big_n: u64) -> Result<InnerLines> {
    let r = rescaled(a, big_n)?;
    let exps = r.map(|v| (0..big_n).filter(|e| v.binary_search(e).is_err()).collect());
    Ok(InnerLines { n: big_n, exps })
}

/// Product of all line forms over `field`.
pub fn concrete_equation(a: &Rua, field: &PrimeField) -> Result<HomForm3> {
    let zp = field.zp();
    Ok(a
        .line_forms(field)?
        .into_iter()
        .fold(HomForm3::constant(zp, 1), |acc, l| acc.mul(&HomForm3::linear(zp, l))))
}

pub fn tr_signature(a: &Rua) -> TrSignature {
    TrSignature {
        a: a.exps[0].len() + 1,
        b: a.exps[1].len() + 1,
        c: a.exps[2].len() + 1,
        sides: a.sides,
    }
}
