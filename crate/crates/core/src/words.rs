//! Words and polynomials in the free algebra `𝔥 = Q<x,y>`.
//!
//! Words are bit-packed (`x = 0`, `y = 1`, first letter most significant)
//! and ordered by weight, then lexicographically with `x < y`. Polynomials
//! keep their terms in that order, which makes every printed or serialized
//! polynomial deterministic.
//!
//! Subspaces used throughout: `𝔥¹ = Q + 𝔥y` and `𝔥⁰ = Q + x𝔥y`. The word
//! `z_k = x^(k-1) y` corresponds to the index entry `k`, so admissible
//! indices `(k₁,…,k_r)` with `k₁ ≥ 2` are exactly the words in `x𝔥y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{coeff_prefix, to_pq, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    fn from_bit(b: u64) -> Self {
        if b == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }

    pub fn swap(self) -> Self {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

/// Longest representable word.
pub const MAX_WEIGHT: usize = 63;

/// A word over `{x, y}`. The empty word is `1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    // field order matters for the derived ordering: weight first
    len: u8,
    bits: u64,
}

impl Word {
    pub const fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    pub fn letter(l: Letter) -> Self {
        Word { len: 1, bits: l.bit() }
    }

    pub fn x() -> Self {
        Word::letter(Letter::X)
    }

    pub fn y() -> Self {
        Word::letter(Letter::Y)
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        letters.into_iter().fold(Word::empty(), |w, l| w.push(l))
    }

    /// `z_k = x^(k-1) y`.
    pub fn z(k: u32) -> Self {
        assert!(k >= 1, "z_k needs k >= 1");
        let mut w = Word::empty();
        for _ in 1..k {
            w = w.push(Letter::X);
        }
        w.push(Letter::Y)
    }

    pub fn weight(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0 = leftmost).
    pub fn at(&self, i: usize) -> Letter {
        assert!(i < self.weight());
        Letter::from_bit((self.bits >> (self.len as usize - 1 - i)) & 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.weight()).map(move |i| self.at(i))
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| Letter::from_bit(self.bits & 1))
    }

    /// Appends a letter on the right.
    pub fn push(self, l: Letter) -> Self {
        assert!((self.len as usize) < MAX_WEIGHT, "word longer than {MAX_WEIGHT} letters");
        Word { len: self.len + 1, bits: (self.bits << 1) | l.bit() }
    }

    /// Prepends a letter on the left.
    pub fn prepend(self, l: Letter) -> Self {
        assert!((self.len as usize) < MAX_WEIGHT, "word longer than {MAX_WEIGHT} letters");
        Word { len: self.len + 1, bits: self.bits | (l.bit() << self.len) }
    }

    pub fn concat(self, other: Word) -> Self {
        let len = self.len as usize + other.len as usize;
        assert!(len <= MAX_WEIGHT, "word longer than {MAX_WEIGHT} letters");
        let bits = if other.len == 0 { self.bits } else { (self.bits << other.len) | other.bits };
        Word { len: len as u8, bits }
    }

    /// Splits off the last letter: `w = prefix · last`.
    pub fn split_last(&self) -> Option<(Word, Letter)> {
        let l = self.last()?;
        Some((Word { len: self.len - 1, bits: self.bits >> 1 }, l))
    }

    /// Splits off the first letter: `w = first · suffix`.
    pub fn split_first(&self) -> Option<(Letter, Word)> {
        let l = self.first()?;
        let len = self.len - 1;
        let mask = if len == 0 { 0 } else { (1u64 << len) - 1 };
        Some((l, Word { len, bits: self.bits & mask }))
    }

    /// Prefix of length `n` and the remaining suffix.
    pub fn split_at(&self, n: usize) -> (Word, Word) {
        assert!(n <= self.weight());
        let rest = self.weight() - n;
        let mask = if rest == 0 { 0 } else { (1u64 << rest) - 1 };
        (Word { len: n as u8, bits: self.bits >> rest }, Word { len: rest as u8, bits: self.bits & mask })
    }

    pub fn ends_with_y(&self) -> bool {
        self.last() == Some(Letter::Y)
    }

    pub fn starts_with_x(&self) -> bool {
        self.first() == Some(Letter::X)
    }

    /// In `x𝔥y`: starts with `x`, ends with `y`.
    pub fn is_admissible(&self) -> bool {
        self.starts_with_x() && self.ends_with_y()
    }

    /// In `𝔥¹`: empty or ends with `y`.
    pub fn in_h1(&self) -> bool {
        self.is_empty() || self.ends_with_y()
    }

    /// In `𝔥⁰`: empty or admissible.
    pub fn in_h0(&self) -> bool {
        self.is_empty() || self.is_admissible()
    }

    /// `τ` on a word: reverse and swap `x ↔ y`.
    pub fn dual(&self) -> Word {
        Word::from_letters(self.letters().collect::<Vec<_>>().into_iter().rev().map(Letter::swap))
    }

    /// For a word ending in `y`: `w = z_k · rest`, returns `(k, rest)`.
    pub fn split_first_z(&self) -> Option<(u32, Word)> {
        let i = self.letters().position(|l| l == Letter::Y)?;
        Some((i as u32 + 1, self.split_at(i + 1).1))
    }

    /// All words of the given weight, in ascending order.
    pub fn all_of_weight(n: usize) -> impl Iterator<Item = Word> {
        assert!(n <= MAX_WEIGHT);
        (0..(1u64 << n)).map(move |bits| Word { len: n as u8, bits })
    }

    /// Admissible words (`x𝔥y`) of the given weight, ascending.
    pub fn admissible_of_weight(n: usize) -> impl Iterator<Item = Word> {
        Word::all_of_weight(n).filter(Word::is_admissible)
    }

    /// Words of `𝔥y` (nonempty, ending in `y`) of the given weight, ascending.
    pub fn ending_in_y_of_weight(n: usize) -> impl Iterator<Item = Word> {
        Word::all_of_weight(n).filter(Word::ends_with_y)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            f.write_str(match l {
                Letter::X => "x",
                Letter::Y => "y",
            })?;
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
        if s == "1" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(Error::parse(0, "empty word (use \"1\")"));
        }
        let mut w = Word::empty();
        for (i, ch) in s.chars().enumerate() {
            let l = match ch {
                'x' => Letter::X,
                'y' => Letter::Y,
                _ => return Err(Error::parse(i, format!("unexpected character {ch:?}"))),
            };
            if w.weight() == MAX_WEIGHT {
                return Err(Error::parse(i, format!("word longer than {MAX_WEIGHT} letters")));
            }
            w = w.push(l);
        }
        Ok(w)
    }
}

/// A finite `Q`-linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Word, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Poly::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Poly::term(Q::one(), w)
    }

    pub fn term(c: Q, w: Word) -> Self {
        let mut p = Poly::zero();
        p.add_term(w, c);
        p
    }

    pub fn x() -> Self {
        Poly::from_word(Word::x())
    }

    pub fn y() -> Self {
        Poly::from_word(Word::y())
    }

    /// `z = x + y`.
    pub fn z() -> Self {
        Poly::x() + Poly::y()
    }

    pub fn parse_word(s: &str) -> Result<Self> {
        Ok(Poly::from_word(s.parse()?))
    }

    /// Builds a polynomial from `(coefficient, word)` pairs; used heavily in tests.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (i64, &'a str)>) -> Self {
        let mut p = Poly::zero();
        for (c, w) in terms {
            p.add_term(w.parse().expect("valid word"), Q::from_integer(c.into()));
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(*w, d * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(w, d)| (*w, d * c)).collect() }
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn get(&self, w: &Word) -> Option<&Q> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    /// Smallest word with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&Word, &Q)> {
        self.terms.iter().next()
    }

    /// Weight of every term, if all terms share one. `Some(None)` style
    /// ambiguity is avoided: the zero polynomial reports `None`.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn in_h1(&self) -> bool {
        self.words().all(Word::in_h1)
    }

    pub fn in_h0(&self) -> bool {
        self.words().all(Word::in_h0)
    }

    /// Every word lies in `x𝔥y`.
    pub fn in_x_h_y(&self) -> bool {
        self.words().all(Word::is_admissible)
    }

    /// Applies a word-level linear map term by term.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// Concatenation product.
    pub fn concat(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (v, c) in &self.terms {
            for (w, d) in &other.terms {
                out.add_term(v.concat(*w), c * d);
            }
        }
        out
    }

    /// `(coefficient "p/q", word)` pairs in ascending word order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(w, c)| (to_pq(c), w.to_string())).collect()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Poly> {
        let mut p = Poly::zero();
        for (c, w) in pairs {
            p.add_term(w.as_ref().parse()?, crate::rational::parse_pq(c.as_ref())?);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if w.is_empty() {
                write!(f, "{}", if abs.is_integer() { abs.numer().to_string() } else { format!("{}/{}", abs.numer(), abs.denom()) })?;
            } else {
                write!(f, "{}{}", coeff_prefix(&abs), w)?;
            }
        }
        Ok(())
    }
}

impl From<Word> for Poly {
    fn from(w: Word) -> Self {
        Poly::from_word(w)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self.add_scaled(&rhs, &Q::one());
        self
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self.add_scaled(&rhs, &-Q::one());
        self
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.concat(rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.concat(&rhs)
    }
}

/// A linear operator on `𝔥`, given by its action on words.
pub trait WordOperator {
    fn apply_word(&self, w: &Word) -> Poly;

    fn apply(&self, p: &Poly) -> Poly {
        p.map_words(|w| self.apply_word(w))
    }
}

impl<F: Fn(&Word) -> Poly> WordOperator for F {
    fn apply_word(&self, w: &Word) -> Poly {
        self(w)
    }
}

/// `R_p`: right concatenation by `p`.
#[derive(Clone, Debug)]
pub struct RightConcat(pub Poly);

/// `L_p`: left concatenation by `p`.
#[derive(Clone, Debug)]
pub struct LeftConcat(pub Poly);

impl WordOperator for RightConcat {
    fn apply_word(&self, w: &Word) -> Poly {
        Poly::from_word(*w).concat(&self.0)
    }
}

impl WordOperator for LeftConcat {
    fn apply_word(&self, w: &Word) -> Poly {
        self.0.concat(&Poly::from_word(*w))
    }
}

pub fn r_op(p: Poly) -> RightConcat {
    RightConcat(p)
}

pub fn l_op(p: Poly) -> LeftConcat {
    LeftConcat(p)
}

/// `R_y^{-1}` on `𝔥y`: strips the final `y` of every word.
pub fn r_y_inverse(p: &Poly) -> Result<Poly> {
    let mut out = Poly::zero();
    for (w, c) in p.iter() {
        match w.split_last() {
            Some((prefix, Letter::Y)) => out.add_term(prefix, c.clone()),
            _ => return Err(Error::domain(format!("R_y^-1: word {w} does not end in y"))),
        }
    }
    Ok(out)
}

/// `L_x^{-1}` on `x𝔥`: strips the leading `x` of every word.
pub fn l_x_inverse(p: &Poly) -> Result<Poly> {
    let mut out = Poly::zero();
    for (w, c) in p.iter() {
        match w.split_first() {
            Some((Letter::X, suffix)) => out.add_term(suffix, c.clone()),
            _ => return Err(Error::domain(format!("L_x^-1: word {w} does not start with x"))),
        }
    }
    Ok(out)
}

fn phi_word(w: &Word) -> Poly {
    // x -> x + y, y -> -y, multiplicatively
    let mut acc: Vec<(Word, bool)> = vec![(Word::empty(), false)];
    for l in w.letters() {
        acc = match l {
            Letter::X => acc
                .into_iter()
                .flat_map(|(v, neg)| [(v.push(Letter::X), neg), (v.push(Letter::Y), neg)])
                .collect(),
            Letter::Y => acc.into_iter().map(|(v, neg)| (v.push(Letter::Y), !neg)).collect(),
        };
    }
    let mut out = Poly::zero();
    for (v, neg) in acc {
        out.add_term(v, if neg { -Q::one() } else { Q::one() });
    }
    out
}

/// The automorphism `φ`: `x ↦ x + y`, `y ↦ -y`.
pub fn phi_auto(p: &Poly) -> Poly {
    p.map_words(phi_word)
}

/// The anti-automorphism `τ`: `x ↔ y`, reversing words.
pub fn tau_anti(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in p.iter() {
        out.add_term(w.dual(), c.clone());
    }
    out
}

/// `χ_x = τ L_x φ`.
pub fn chi_x(p: &Poly) -> Poly {
    let shifted = Poly::x().concat(&phi_auto(p));
    tau_anti(&shifted)
}

/// `χ_x^{-1} = φ τ R_y^{-1}`, defined on `𝔥y`.
pub fn chi_x_inverse(p: &Poly) -> Result<Poly> {
    Ok(phi_auto(&tau_anti(&r_y_inverse(p)?)))
}

/// An index `(k₁,…,k_r)` of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MzvIndex {
    parts: Vec<u32>,
}

impl MzvIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("an index has at least one entry"));
        }
        if parts.contains(&0) {
            return Err(Error::domain("index entries must be positive"));
        }
        Ok(MzvIndex { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_admissible(&self) -> bool {
        self.parts[0] >= 2
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&k| k as usize).sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn to_word(&self) -> Word {
        self.parts.iter().fold(Word::empty(), |w, &k| w.concat(Word::z(k)))
    }

    /// Defined on nonempty words ending in `y`.
    pub fn from_word(w: &Word) -> Result<Self> {
        if !w.ends_with_y() {
            return Err(Error::domain(format!("word {w} does not end in y")));
        }
        let mut parts = Vec::new();
        let mut rest = *w;
        while let Some((k, r)) = rest.split_first_z() {
            parts.push(k);
            rest = r;
        }
        Ok(MzvIndex { parts })
    }

    /// All admissible indices of the given weight, in word order.
    pub fn admissible_of_weight(n: usize) -> Vec<MzvIndex> {
        Word::admissible_of_weight(n).map(|w| MzvIndex::from_word(&w).expect("admissible")).collect()
    }
}

pub fn index_to_word(i: &MzvIndex) -> Word {
    i.to_word()
}

pub fn word_to_index(w: &Word) -> Result<MzvIndex> {
    MzvIndex::from_word(w)
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MzvIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut pos = 0;
        for piece in s.split(',') {
            let k: u32 = piece
                .trim()
                .parse()
                .map_err(|_| Error::parse(pos, format!("bad index entry {piece:?}")))?;
            parts.push(k);
            pos += piece.len() + 1;
        }
        MzvIndex::new(parts)
    }
}

impl TryFrom<String> for MzvIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MzvIndex> for String {
    fn from(i: MzvIndex) -> String {
        i.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn p(terms: &[(i64, &str)]) -> Poly {
        Poly::from_terms(terms.iter().copied())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_basics() {
        let v = w("xyy");
        assert_eq!(v.weight(), 3);
        assert_eq!(v.to_string(), "xyy");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(w("1"), Word::empty());
        assert_eq!(v.split_last(), Some((w("xy"), Letter::Y)));
        assert_eq!(v.split_first(), Some((Letter::X, w("yy"))));
        assert_eq!(Word::y().prepend(Letter::X), w("xy"));
        assert_eq!(w("xx").concat(w("yxy")), w("xxyxy"));
        assert_eq!(w("xyx").split_at(1), (w("x"), w("yx")));
        assert!(w("xy") < w("yx"));
        assert!(w("yy") < w("xxx"));
        assert!(matches!("xz".parse::<Word>(), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(&Poly::x() * &Poly::y(), p(&[(1, "xy")]));
        let v = p(&[(3, "xy"), (-1, "y")]);
        assert_eq!(&Poly::one() * &v, v);
        assert_eq!(&Poly::z() * &Poly::y(), p(&[(1, "xy"), (1, "yy")]));
    }

    #[test]
    fn concat_operators() {
        assert_eq!(r_op(Poly::x()).apply(&p(&[(1, "xy")])), p(&[(1, "xyx")]));
        assert_eq!(r_op(Poly::z()).apply(&p(&[(1, "y")])), p(&[(1, "yx"), (1, "yy")]));
        assert_eq!(l_op(Poly::x()).apply(&Poly::one()), p(&[(1, "x")]));
    }

    #[test]
    fn partial_inverses() {
        assert_eq!(r_y_inverse(&p(&[(1, "xy")])).unwrap(), p(&[(1, "x")]));
        assert_eq!(r_y_inverse(&p(&[(2, "xyy"), (-1, "xxy")])).unwrap(), p(&[(2, "xy"), (-1, "xx")]));
        assert!(matches!(r_y_inverse(&p(&[(1, "x")])), Err(Error::Domain(_))));
        assert_eq!(l_x_inverse(&p(&[(1, "xy")])).unwrap(), p(&[(1, "y")]));
        assert_eq!(l_x_inverse(&p(&[(1, "xxy"), (-1, "xyy")])).unwrap(), p(&[(1, "xy"), (-1, "yy")]));
        assert!(matches!(l_x_inverse(&p(&[(1, "y")])), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_and_tau_examples() {
        assert_eq!(phi_auto(&Poly::x()), p(&[(1, "x"), (1, "y")]));
        assert_eq!(phi_auto(&p(&[(1, "xy")])), p(&[(-1, "xy"), (-1, "yy")]));
        assert_eq!(tau_anti(&p(&[(1, "xxy")])), p(&[(1, "xyy")]));
        assert_eq!(tau_anti(&p(&[(1, "xy")])), p(&[(1, "xy")]));
        assert_eq!(phi_auto(&Poly::one()), Poly::one());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_x(&Poly::y()), p(&[(-1, "xy")]));
        assert_eq!(chi_x_inverse(&p(&[(-1, "xy")])).unwrap(), Poly::y());
        let yy = p(&[(1, "yy")]);
        assert_eq!(chi_x_inverse(&chi_x(&yy)).unwrap(), yy);
        assert!(chi_x_inverse(&Poly::x()).is_err());
    }

    #[test]
    fn chi_maps_hy_onto_xhy() {
        for n in 1..=7 {
            let images: Vec<Poly> = Word::ending_in_y_of_weight(n).map(|v| chi_x(&Poly::from_word(v))).collect();
            assert_eq!(images.len(), 1 << (n - 1));
            for im in &images {
                assert!(im.in_x_h_y());
                assert_eq!(im.homogeneous_weight(), Some(n + 1));
            }
            // χ_x is injective (it has a left inverse); equal dimensions give a bijection.
            assert_eq!(Word::admissible_of_weight(n + 1).count(), images.len());
            for (v, im) in Word::ending_in_y_of_weight(n).zip(&images) {
                assert_eq!(chi_x_inverse(im).unwrap(), Poly::from_word(v));
            }
        }
    }

    #[test]
    fn index_word_examples() {
        let i: MzvIndex = "2,1".parse().unwrap();
        assert_eq!(i.to_word(), w("xyy"));
        assert_eq!(MzvIndex::new(vec![3]).unwrap().to_word(), w("xxy"));
        assert_eq!(word_to_index(&w("xyxy")).unwrap().parts(), &[2, 2]);
        assert!(word_to_index(&w("xyx")).is_err());
        assert!(MzvIndex::new(vec![]).is_err());
        assert!(!MzvIndex::new(vec![1, 2]).unwrap().is_admissible());
    }

    #[test]
    fn index_roundtrip_all_admissible() {
        for n in 2..=8 {
            let idx = MzvIndex::admissible_of_weight(n);
            assert_eq!(idx.len(), 1 << (n - 2));
            for i in idx {
                assert!(i.is_admissible());
                assert_eq!(i.weight(), n);
                let word = index_to_word(&i);
                assert!(word.is_admissible());
                assert_eq!(word_to_index(&word).unwrap(), i);
                assert_eq!(i.to_string().parse::<MzvIndex>().unwrap(), i);
            }
        }
    }

    #[test]
    fn display_and_pairs() {
        let v = p(&[(1, "xyy"), (-1, "xxy")]);
        assert_eq!(v.to_string(), "-xxy + xyy");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::from_pairs(&v.to_pairs()).unwrap(), v);
        let half = Poly::term(crate::rational::q_frac(1, 2), w("xy"));
        assert_eq!(half.to_string(), "(1/2)xy");
        assert_eq!(Poly::term(q(3), Word::empty()).to_string(), "3");
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, 0..=max)
            .prop_map(|bits| Word::from_letters(bits.into_iter().map(|b| if b { Letter::Y } else { Letter::X })))
    }

    fn arb_poly(max: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-5i64..=5, arb_word(max)), 0..6).prop_map(|terms| {
            let mut p = Poly::zero();
            for (c, w) in terms {
                p.add_term(w, q(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn phi_tau_involutions(v in arb_poly(8)) {
            prop_assert_eq!(phi_auto(&phi_auto(&v)), v.clone());
            prop_assert_eq!(tau_anti(&tau_anti(&v)), v);
        }

        #[test]
        fn phi_multiplicative_tau_antimultiplicative(a in arb_word(5), b in arb_word(5)) {
            let (pa, pb) = (Poly::from_word(a), Poly::from_word(b));
            prop_assert_eq!(phi_auto(&(&pa * &pb)), &phi_auto(&pa) * &phi_auto(&pb));
            prop_assert_eq!(tau_anti(&(&pa * &pb)), &tau_anti(&pb) * &tau_anti(&pa));
        }

        #[test]
        fn r_y_inverse_undoes_r_y(v in arb_poly(8)) {
            let shifted = r_op(Poly::y()).apply(&v);
            prop_assert_eq!(r_y_inverse(&shifted).unwrap(), v);
        }

        #[test]
        fn concat_associative(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn pairs_roundtrip(v in arb_poly(8)) {
            prop_assert_eq!(Poly::from_pairs(&v.to_pairs()).unwrap(), v);
        }
    }
}
