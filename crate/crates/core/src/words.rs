//! Words over small alphabets, compositions, {2,3}-words, and the canonical
//! enumerations and total orders used by the rest of the crate.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Longest representable word: 4 bits per letter plus a sentinel bit in a
/// u128.
pub const MAX_WORD_LEN: usize = 31;
pub const MAX_ALPHABET: usize = 16;

/// Alphabet of at most 16 named letters. A letter's code is its index in the
/// listing, and the canonical letter order is the listing order, so the
/// default binary alphabet `0,1` orders words lexicographically with 0 < 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn binary() -> Self {
        Alphabet {
            letters: vec!["0".into(), "1".into()],
        }
    }

    pub fn new(letters: Vec<String>) -> Result<Self> {
        if letters.is_empty() || letters.len() > MAX_ALPHABET {
            return Err(Error::Invalid(format!(
                "alphabet must have between 1 and {MAX_ALPHABET} letters"
            )));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::Invalid("empty letter name".into()));
            }
            if letters[..i].contains(l) {
                return Err(Error::Invalid(format!("duplicate letter {l:?}")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Parse a comma-separated letter listing such as `-1,0,1`.
    pub fn parse_list(s: &str) -> Result<Self> {
        Alphabet::new(s.split(',').map(|x| x.trim().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_name(&self, code: u8) -> &str {
        &self.letters[code as usize]
    }

    pub fn code_of(&self, name: &str) -> Option<u8> {
        self.letters.iter().position(|l| l == name).map(|i| i as u8)
    }

    /// Parse a word by greedy longest-match tokenization from the left; the
    /// empty string is the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let mut codes = Vec::new();
        let mut pos = 0;
        while pos < s.len() {
            let rest = &s[pos..];
            let hit = self
                .letters
                .iter()
                .enumerate()
                .filter(|(_, l)| rest.starts_with(l.as_str()))
                .max_by_key(|(_, l)| l.len());
            match hit {
                Some((code, l)) => {
                    codes.push(code as u8);
                    pos += l.len();
                }
                None => {
                    return Err(Error::WordParse {
                        input: s.to_string(),
                        offset: pos,
                        msg: "no letter of the alphabet matches here".into(),
                    })
                }
            }
            if codes.len() > MAX_WORD_LEN {
                return Err(Error::WordParse {
                    input: s.to_string(),
                    offset: pos,
                    msg: format!("word longer than {MAX_WORD_LEN} letters"),
                });
            }
        }
        Ok(Word::from_letters(&codes))
    }

    pub fn render_word(&self, w: Word) -> String {
        w.iter_letters()
            .map(|c| self.letter_name(c))
            .collect::<Vec<_>>()
            .concat()
    }
}

/// A packed word: 4 bits per letter code, first letter in the most
/// significant nibble, with a sentinel bit just above the top letter. The
/// derived ordering is by length, then lexicographic by letter code, which
/// for a fixed weight is exactly the canonical word order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(u128);

impl Word {
    pub const EMPTY: Word = Word(1);

    pub fn from_letters(codes: &[u8]) -> Word {
        assert!(codes.len() <= MAX_WORD_LEN, "word too long");
        let mut v: u128 = 1;
        for &c in codes {
            debug_assert!(c < 16, "letter code out of range");
            v = (v << 4) | c as u128;
        }
        Word(v)
    }

    pub fn len(self) -> usize {
        ((127 - self.0.leading_zeros()) / 4) as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 1
    }

    /// Letter at position `i`, counting from the first letter.
    pub fn letter(self, i: usize) -> u8 {
        let len = self.len();
        debug_assert!(i < len);
        ((self.0 >> (4 * (len - 1 - i))) & 0xF) as u8
    }

    pub fn first(self) -> u8 {
        self.letter(0)
    }

    pub fn last(self) -> u8 {
        debug_assert!(!self.is_empty());
        (self.0 & 0xF) as u8
    }

    /// The word with its first letter removed.
    pub fn tail(self) -> Word {
        debug_assert!(!self.is_empty());
        let shift = 4 * (self.len() - 1);
        let bits = self.0 & ((1u128 << shift) - 1);
        Word((1u128 << shift) | bits)
    }

    /// The word with its last letter removed.
    pub fn drop_last(self) -> Word {
        debug_assert!(!self.is_empty());
        Word(self.0 >> 4)
    }

    pub fn append(self, code: u8) -> Word {
        debug_assert!(code < 16);
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word((self.0 << 4) | code as u128)
    }

    pub fn prepend(self, code: u8) -> Word {
        debug_assert!(code < 16);
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        let len = self.len();
        let bits = self.0 ^ (1u128 << (4 * len));
        Word((1u128 << (4 * len + 4)) | (code as u128) << (4 * len) | bits)
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(self.len() + other.len() <= MAX_WORD_LEN, "word too long");
        let shift = 4 * other.len();
        let other_bits = other.0 ^ (1u128 << shift);
        Word((self.0 << shift) | other_bits)
    }

    pub fn letters(self) -> Vec<u8> {
        self.iter_letters().collect()
    }

    pub fn iter_letters(self) -> impl Iterator<Item = u8> {
        let len = self.len();
        (0..len).map(move |i| self.letter(i))
    }

    pub fn reverse(self) -> Word {
        let mut v: u128 = 1;
        let mut bits = self.0;
        for _ in 0..self.len() {
            v = (v << 4) | (bits & 0xF);
            bits >>= 4;
        }
        Word(v)
    }

    pub fn count_of(self, code: u8) -> usize {
        self.iter_letters().filter(|&c| c == code).count()
    }

    // Binary-alphabet helpers (codes 0 and 1).

    pub fn is_binary(self) -> bool {
        self.iter_letters().all(|c| c <= 1)
    }

    /// Flip 0 ↔ 1.
    pub fn complement01(self) -> Word {
        debug_assert!(self.is_binary());
        let len = self.len();
        let mask = if len == 0 {
            0
        } else {
            // 0x111…1 with one nibble per letter
            let mut m: u128 = 0;
            for _ in 0..len {
                m = (m << 4) | 1;
            }
            m
        };
        Word(self.0 ^ mask)
    }

    /// Reverse-complement; an involution on admissible words.
    pub fn dual01(self) -> Word {
        self.reverse().complement01()
    }

    /// Number of letters 1; for admissible words this is the depth.
    pub fn depth01(self) -> usize {
        self.count_of(1)
    }

    pub fn is_admissible01(self) -> bool {
        self.len() >= 2 && self.first() == 1 && self.last() == 0
    }

    /// Render assuming the binary alphabet (used by error messages and the
    /// relation-file format, which are binary by construction).
    pub fn to_binary_string(self) -> String {
        Alphabet::binary().render_word(self)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for c in self.iter_letters() {
            write!(f, "{c:x}")?;
        }
        Ok(())
    }
}

/// A composition: finite sequence of positive integers. Convergent when the
/// last part is at least 2. Derived ordering is lexicographic on parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Invalid("composition parts must be positive".into()));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn is_convergent(&self) -> bool {
        self.0.last().map_or(false, |&p| p >= 2)
    }

    /// The word 1 0^{k₁−1} 1 0^{k₂−1} ⋯ over the binary alphabet.
    pub fn to_word(&self) -> Word {
        let mut w = Word::EMPTY;
        for &p in &self.0 {
            w = w.append(1);
            for _ in 1..p {
                w = w.append(0);
            }
        }
        w
    }

    /// Inverse of [`Composition::to_word`]; the word must start with 1.
    pub fn from_word(w: Word) -> Result<Self> {
        if w.is_empty() || w.first() != 1 {
            return Err(Error::NotInitialOne(w.to_binary_string()));
        }
        let mut parts = Vec::new();
        for c in w.iter_letters() {
            match c {
                1 => parts.push(1),
                0 => *parts.last_mut().unwrap() += 1,
                _ => {
                    return Err(Error::Invalid(
                        "composition words must be over the binary alphabet".into(),
                    ))
                }
            }
        }
        Ok(Composition(parts))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if inner.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("bad composition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// A word over the alphabet {2,3}; its weight is the sum of its entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TwoThreeWord(Vec<u8>);

impl TwoThreeWord {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("{2,3}-word must be non-empty".into()));
        }
        if entries.iter().any(|&e| e != 2 && e != 3) {
            return Err(Error::Invalid("{2,3}-word entries must be 2 or 3".into()));
        }
        Ok(TwoThreeWord(entries))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Number of letters 2.
    pub fn twos(&self) -> usize {
        self.0.iter().filter(|&&e| e == 2).count()
    }

    /// Number of letters 3.
    pub fn threes(&self) -> usize {
        self.0.iter().filter(|&&e| e == 3).count()
    }

    /// Accepts both `23` and `2,3`.
    pub fn parse(s: &str) -> Result<Self> {
        let cleaned = s.replace(',', "");
        let entries: Vec<u8> = cleaned
            .bytes()
            .enumerate()
            .map(|(i, b)| match b {
                b'2' => Ok(2),
                b'3' => Ok(3),
                _ => Err(Error::WordParse {
                    input: s.to_string(),
                    offset: i,
                    msg: "expected 2 or 3".into(),
                }),
            })
            .collect::<Result<_>>()?;
        TwoThreeWord::new(entries)
    }

    /// `(2,3)`-style form used in labels like `B(2,3)`.
    pub fn comma_form(&self) -> String {
        self.0
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Substituted letter words: 2 ↦ 10 and 3 ↦ 100 or 110.
    pub fn letter_words(&self, dialect: Dialect) -> Vec<Word> {
        self.0
            .iter()
            .map(|&e| {
                if e == 2 {
                    Word::from_letters(&[1, 0])
                } else {
                    dialect.three_word()
                }
            })
            .collect()
    }

    /// Concatenation of the substituted letter words.
    pub fn cat(&self, dialect: Dialect) -> Word {
        self.letter_words(dialect)
            .into_iter()
            .fold(Word::EMPTY, Word::concat)
    }
}

impl fmt::Display for TwoThreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for TwoThreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .trim()
            .chars()
            .map(|c| match c {
                '2' => Ok(2),
                '3' => Ok(3),
                _ => Err(Error::Invalid(format!(
                    "bad {{2,3}}-word {s:?}: unexpected character {c:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        TwoThreeWord::new(entries)
    }
}

/// The two substitutions taking {2,3}-words into binary words.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Dialect {
    /// 2 ↦ 10, 3 ↦ 100
    D100,
    /// 2 ↦ 10, 3 ↦ 110
    D110,
}

impl Dialect {
    pub fn three_word(self) -> Word {
        match self {
            Dialect::D100 => Word::from_letters(&[1, 0, 0]),
            Dialect::D110 => Word::from_letters(&[1, 1, 0]),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::D100 => "100",
            Dialect::D110 => "110",
        }
    }
}

impl FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "100" => Ok(Dialect::D100),
            "110" => Ok(Dialect::D110),
            other => Err(Error::Invalid(format!(
                "unknown dialect {other:?}; expected 100 or 110"
            ))),
        }
    }
}

/// All 2^{n−2} admissible words (start 1, end 0) of weight n, in canonical
/// (lexicographic, 0 < 1) order.
pub fn admissible_words(n: usize) -> Result<Vec<Word>> {
    if n < 2 {
        return Err(Error::WeightTooSmall { min: 2, got: n });
    }
    let mid = n - 2;
    let count = 1usize << mid;
    let mut out = Vec::with_capacity(count);
    for bits in 0..count {
        let mut w = Word::EMPTY.append(1);
        for i in (0..mid).rev() {
            w = w.append(((bits >> i) & 1) as u8);
        }
        out.push(w.append(0));
    }
    Ok(out)
}

/// All {2,3}-words with `k` letters 2 and `l` letters 3, lexicographically
/// with 2 < 3.
pub fn words_with_bidegree(k: usize, l: usize) -> Vec<TwoThreeWord> {
    fn go(k: usize, l: usize, acc: &mut Vec<u8>, out: &mut Vec<TwoThreeWord>) {
        if k == 0 && l == 0 {
            out.push(TwoThreeWord(acc.clone()));
            return;
        }
        if k > 0 {
            acc.push(2);
            go(k - 1, l, acc, out);
            acc.pop();
        }
        if l > 0 {
            acc.push(3);
            go(k, l - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k + l > 0 {
        go(k, l, &mut Vec::new(), &mut out);
    }
    out
}

/// All {2,3}-words of weight n: bidegrees ordered by decreasing number of
/// letters 2, lexicographic within each bidegree.
pub fn two_three_words(n: usize) -> Vec<TwoThreeWord> {
    let mut out = Vec::new();
    for k in (0..=n / 2).rev() {
        let rem = n - 2 * k;
        if rem % 3 == 0 {
            out.extend(words_with_bidegree(k, rem / 3));
        }
    }
    out
}

/// Coefficients of 1 / (1 − x² − x³) through degree `max_n` (inclusive).
pub fn padovan_dims(max_n: usize) -> Vec<u64> {
    let mut p = vec![0u64; max_n + 1];
    p[0] = 1;
    for n in 2..=max_n {
        p[n] = p[n - 2] + if n >= 3 { p[n - 3] } else { 0 };
    }
    p
}
