//! Element arithmetic for free groups `F_d` and the wreath group
//! `F_2^{⊕ℤ} ⋊ ℤ`.
//!
//! Free-group words are kept freely reduced at all times. Wreath elements are
//! pairs `(f, n)` where `f` is a finitely supported map from `ℤ` to reduced
//! `F_2` words and `n` is the shift; positions with the identity word are
//! simply absent from the map.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One letter of the symmetric generating set: generator `index` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    index: u16,
    inverse: bool,
}

/// Letters used to print wreath-group generator words: `s` is the shift,
/// `a` and `b` act on the lamp at the current position.
pub const WREATH_ALPHABET: [char; 3] = ['s', 'a', 'b'];

impl Generator {
    pub const fn new(index: usize, inverse: bool) -> Self {
        Generator {
            index: index as u16,
            inverse,
        }
    }

    pub const fn positive(index: usize) -> Self {
        Self::new(index, false)
    }

    pub const fn negative(index: usize) -> Self {
        Self::new(index, true)
    }

    /// Builds a generator from an index and a sign of `+1` or `-1`.
    pub fn with_sign(index: usize, sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Self::positive(index)),
            -1 => Ok(Self::negative(index)),
            _ => Err(Error::invalid(format!(
                "generator sign must be ±1, got {sign}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Generator {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// Position of this letter in the ordering `x_0, x_0⁻¹, x_1, x_1⁻¹, …`.
    /// The inverse letter always sits at `slot ^ 1`.
    pub fn slot(self) -> usize {
        2 * self.index as usize + self.inverse as usize
    }

    pub fn from_slot(slot: usize) -> Self {
        Self::new(slot / 2, slot % 2 == 1)
    }

    /// The full symmetric set `S` for rank `d`, in slot order (`2d` letters).
    pub fn symmetric_set(rank: usize) -> impl Iterator<Item = Generator> {
        (0..2 * rank).map(Generator::from_slot)
    }

    /// `a, b, c, …` for positive letters; upper case for inverses.
    pub fn to_char(self) -> char {
        let c = (b'a' + self.index as u8) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Ok(Self::positive((c as u8 - b'a') as usize))
        } else if c.is_ascii_uppercase() {
            Ok(Self::negative((c as u8 - b'A') as usize))
        } else {
            Err(Error::parse(format!("not a generator letter: {c:?}")))
        }
    }

    /// Prints the letter using a custom alphabet (e.g. [`WREATH_ALPHABET`]).
    pub fn to_char_in(self, alphabet: &[char]) -> char {
        let c = alphabet[self.index as usize];
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char_in(c: char, alphabet: &[char]) -> Result<Self> {
        let lower = c.to_ascii_lowercase();
        let index = alphabet
            .iter()
            .position(|&a| a == lower)
            .ok_or_else(|| Error::parse(format!("letter {c:?} not in alphabet {alphabet:?}")))?;
        Ok(Self::new(index, c.is_ascii_uppercase()))
    }
}

/// Parses a string of letters over `alphabet` into a raw (unreduced) letter sequence.
pub fn parse_letters_in(s: &str, alphabet: &[char]) -> Result<Vec<Generator>> {
    let s = s.trim();
    if s.is_empty() || s == "1" || s == "ε" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| Generator::from_char_in(c, alphabet))
        .collect()
}

/// A freely reduced word in a free group.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Generator>,
}

impl Word {
    pub fn identity() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn generator(g: Generator) -> Self {
        Word { letters: vec![g] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Generator>>(letters: I) -> Self {
        let mut w = Word::identity();
        for g in letters {
            w.push(g);
        }
        w
    }

    /// Right-multiplies by a single letter, cancelling if possible.
    pub fn push(&mut self, g: Generator) {
        if self.letters.last() == Some(&g.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(g);
        }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Generator> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Generator> {
        self.letters.last().copied()
    }

    pub fn pop(&mut self) -> Option<Generator> {
        self.letters.pop()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &g in &other.letters {
            out.push(g);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// Smallest rank the word lives in.
    pub fn min_rank(&self) -> usize {
        self.letters
            .iter()
            .map(|g| g.index() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.letters.iter().find(|g| g.index() >= rank) {
            Some(g) => Err(Error::GeneratorOutOfRange {
                index: g.index(),
                rank,
            }),
            None => Ok(()),
        }
    }

    /// `w^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.multiply(self))
    }

    /// Prints with a custom alphabet; the identity prints as `1`.
    pub fn to_string_in(&self, alphabet: &[char]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|g| g.to_char_in(alphabet))
            .collect()
    }
}

/// Reduces `letters` as a word of `F_rank`, rejecting out-of-range generators.
pub fn reduce_word(letters: &[Generator], rank: usize) -> Result<Word> {
    if let Some(g) = letters.iter().find(|g| g.index() >= rank) {
        return Err(Error::GeneratorOutOfRange {
            index: g.index(),
            rank,
        });
    }
    Ok(Word::reduce(letters.iter().copied()))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for g in &self.letters {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" || s == "ε" {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(Generator::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element `(f, n)` of `F_2^{⊕ℤ} ⋊ ℤ`.
///
/// Multiplication: `(f, n)·(g, m) = (f · shift_n(g), n + m)` with
/// `shift_n(g)(k) = g(k − n)`. Generators: `s = (∅, 1)`, `a = ({0 ↦ a}, 0)`,
/// `b = ({0 ↦ b}, 0)`, indexed 0, 1, 2 respectively.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    support: BTreeMap<i64, Word>,
    shift: i64,
}

pub const WREATH_RANK: usize = 3;

impl WreathElement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Validates that lamp words are nontrivial words over `F_2`.
    pub fn new(support: BTreeMap<i64, Word>, shift: i64) -> Result<Self> {
        for (pos, w) in &support {
            if w.is_identity() {
                return Err(Error::invalid(format!(
                    "identity lamp stored at position {pos}"
                )));
            }
            w.check_rank(2)?;
        }
        Ok(WreathElement { support, shift })
    }

    pub fn support(&self) -> &BTreeMap<i64, Word> {
        &self.support
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn lamp(&self, position: i64) -> Word {
        self.support.get(&position).cloned().unwrap_or_default()
    }

    pub fn generator(g: Generator) -> Result<Self> {
        let mut e = Self::identity();
        e.right_mul_generator(g)?;
        Ok(e)
    }

    /// Evaluates a word over `{s, a, b}`.
    pub fn from_letters(letters: &[Generator]) -> Result<Self> {
        let mut e = Self::identity();
        for &g in letters {
            e.right_mul_generator(g)?;
        }
        Ok(e)
    }

    /// In-place right multiplication by `s^{±1}`, `a^{±1}` or `b^{±1}`.
    pub fn right_mul_generator(&mut self, g: Generator) -> Result<()> {
        match g.index() {
            0 => self.shift += g.sign() as i64,
            1 | 2 => {
                let lamp_letter = Generator::new(g.index() - 1, g.is_inverse());
                let entry = self.support.entry(self.shift).or_default();
                entry.push(lamp_letter);
                if entry.is_identity() {
                    self.support.remove(&self.shift);
                }
            }
            i => {
                return Err(Error::GeneratorOutOfRange {
                    index: i,
                    rank: WREATH_RANK,
                })
            }
        }
        Ok(())
    }

    pub fn multiply(&self, other: &WreathElement) -> WreathElement {
        let mut support = self.support.clone();
        for (&k, w) in &other.support {
            let pos = k + self.shift;
            let entry = support.entry(pos).or_default();
            *entry = entry.multiply(w);
            if entry.is_identity() {
                support.remove(&pos);
            }
        }
        WreathElement {
            support,
            shift: self.shift + other.shift,
        }
    }

    /// `(f, n)⁻¹ = (shift_{−n}(f⁻¹), −n)`.
    pub fn inverse(&self) -> WreathElement {
        let support = self
            .support
            .iter()
            .map(|(&k, w)| (k - self.shift, w.inverse()))
            .collect();
        WreathElement {
            support,
            shift: -self.shift,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.support.is_empty()
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (pos, w)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{pos}:{w}")?;
        }
        write!(f, "; {})", self.shift)
    }
}

impl fmt::Debug for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wreath{self}")
    }
}

impl FromStr for WreathElement {
    type Err = Error;

    /// Parses `"(pos:word, ...; shift)"`, e.g. `"(0:a, 1:b; 1)"` or `"(; 0)"`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(format!("wreath element must be parenthesised: {s:?}")))?;
        let (lamps, shift) = inner
            .rsplit_once(';')
            .ok_or_else(|| Error::parse(format!("missing ';' before shift in {s:?}")))?;
        let shift: i64 = shift
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad shift in {s:?}")))?;
        let mut support = BTreeMap::new();
        for item in lamps.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (pos, word) = item
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("bad lamp entry {item:?}")))?;
            let pos: i64 = pos
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad position in {item:?}")))?;
            let word: Word = word.parse()?;
            if !word.is_identity() && support.insert(pos, word).is_some() {
                return Err(Error::parse(format!("duplicate position {pos}")));
            }
        }
        WreathElement::new(support, shift)
    }
}

/// Group law shared by both families.
pub trait GroupElement: Clone + Eq + Hash + fmt::Debug {
    fn identity() -> Self;
    fn multiply(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl GroupElement for Word {
    fn identity() -> Self {
        Word::identity()
    }
    fn multiply(&self, other: &Self) -> Self {
        Word::multiply(self, other)
    }
    fn inverse(&self) -> Self {
        Word::inverse(self)
    }
}

impl GroupElement for WreathElement {
    fn identity() -> Self {
        WreathElement::identity()
    }
    fn multiply(&self, other: &Self) -> Self {
        WreathElement::multiply(self, other)
    }
    fn inverse(&self) -> Self {
        WreathElement::inverse(self)
    }
}

/// An element of either family, for call sites that only learn the family at run time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Free(Word),
    Wreath(WreathElement),
}

impl Element {
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Free(x), Element::Free(y)) => Ok(Element::Free(x.multiply(y))),
            (Element::Wreath(x), Element::Wreath(y)) => Ok(Element::Wreath(x.multiply(y))),
            _ => Err(Error::FamilyMismatch(
                "free word times wreath element".into(),
            )),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Free(x) => Element::Free(x.inverse()),
            Element::Wreath(x) => Element::Wreath(x.inverse()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Free(w) => write!(f, "{w}"),
            Element::Wreath(w) => write!(f, "{w}"),
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('(') {
            Ok(Element::Wreath(s.parse()?))
        } else {
            Ok(Element::Free(s.parse()?))
        }
    }
}
