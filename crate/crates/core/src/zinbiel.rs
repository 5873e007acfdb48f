//! The free zinbiel (half-shuffle) algebra on words: the products ≺ and ⧢,
//! right combs, good-shuffle enumeration, and the parametric two-generator
//! expansions.

use crate::arith::{Coeff, CoeffKind, Rat, RatPoly};
use crate::error::{Error, Result};
use crate::words::{Alphabet, TwoThreeWord, Word, MAX_WORD_LEN};
use std::collections::BTreeMap;

/// Formal linear combination of words with coefficients in `R`. Zero
/// coefficients are never stored; iteration is in canonical word order.
#[derive(Clone, PartialEq, Debug)]
pub struct LinComb<R: Coeff> {
    terms: BTreeMap<Word, R>,
}

impl<R: Coeff> Default for LinComb<R> {
    fn default() -> Self {
        LinComb::new()
    }
}

impl<R: Coeff> LinComb<R> {
    pub fn new() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }

    pub fn single(w: Word, c: R) -> Self {
        let mut x = LinComb::new();
        x.add_term(w, c);
        x
    }

    pub fn unit_word(w: Word) -> Self {
        LinComb::single(w, R::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, R)>>(it: I) -> Self {
        let mut x = LinComb::new();
        for (w, c) in it {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, w: Word, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coeff(&self, w: Word) -> Option<&R> {
        self.terms.get(&w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign_ref(&mut self, rhs: &Self) {
        for (w, c) in rhs.iter() {
            self.add_term(*w, c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, rhs: &Self) {
        for (w, c) in rhs.iter() {
            self.add_term(*w, c.neg_ref());
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return LinComb::new();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (*w, x.mul_ref(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LinComb {
            terms: self.terms.iter().map(|(w, x)| (*w, x.neg_ref())).collect(),
        }
    }

    /// Common length of all words, `None` for the zero combination, error if
    /// mixed.
    pub fn weight(&self) -> Result<Option<usize>> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Ok(None),
            Some(w) => w.len(),
        };
        if it.all(|w| w.len() == first) {
            Ok(Some(first))
        } else {
            Err(Error::Inhomogeneous)
        }
    }

    pub fn greatest(&self) -> Option<(&Word, &R)> {
        self.terms.iter().next_back()
    }

    /// Apply a word map, merging coefficients of collided images.
    pub fn map_words<F: FnMut(Word) -> Word>(&self, mut f: F) -> Self {
        let mut out = LinComb::new();
        for (w, c) in self.iter() {
            out.add_term(f(*w), c.clone());
        }
        out
    }

    /// Render in canonical order, e.g. `1010 + 2·1100`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        render_terms(
            self.iter()
                .map(|(w, c)| (c.kind(), alphabet.render_word(*w))),
            "·",
        )
    }
}

/// Shared term-list renderer: `dot` separates a non-unit coefficient from
/// the basis symbol (`"·"` for words, `""` for ζ-terms).
pub fn render_terms<I: Iterator<Item = (CoeffKind, String)>>(terms: I, dot: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    for (kind, sym) in terms {
        let (body, negative) = match kind {
            CoeffKind::One => (sym, false),
            CoeffKind::MinusOne => (sym, true),
            CoeffKind::Atom { text, negative } => (format!("{text}{dot}{sym}"), negative),
            CoeffKind::Composite(text) => (format!("({text}){dot}{sym}"), false),
        };
        if first {
            if negative {
                out.push('-');
            }
            first = false;
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Multiplicities of all shuffles of two plain words.
pub fn shuffle_words(a: Word, b: Word) -> BTreeMap<Word, i64> {
    fn go(prefix: Word, a: Word, b: Word, out: &mut BTreeMap<Word, i64>) {
        if a.is_empty() {
            *out.entry(prefix.concat(b)).or_insert(0) += 1;
            return;
        }
        if b.is_empty() {
            *out.entry(prefix.concat(a)).or_insert(0) += 1;
            return;
        }
        go(prefix.append(a.first()), a.tail(), b, out);
        go(prefix.append(b.first()), a, b.tail(), out);
    }
    let mut out = BTreeMap::new();
    go(Word::EMPTY, a, b, &mut out);
    out
}

fn check_product_length(a: Word, b: Word) -> Result<()> {
    if a.len() + b.len() > MAX_WORD_LEN {
        return Err(Error::Invalid(format!(
            "product weight {} exceeds the supported maximum {MAX_WORD_LEN}",
            a.len() + b.len()
        )));
    }
    Ok(())
}

/// Half-shuffle x ≺ y: all shuffles of each pair of words keeping the left
/// word's first letter first. The left operand must not contain the empty
/// word.
pub fn half_shuffle<R: Coeff>(x: &LinComb<R>, y: &LinComb<R>) -> Result<LinComb<R>> {
    let mut out = LinComb::new();
    for (wx, cx) in x.iter() {
        if wx.is_empty() {
            return Err(Error::EmptyLeftOperand);
        }
        let head = wx.first();
        let tail = wx.tail();
        for (wy, cy) in y.iter() {
            check_product_length(*wx, *wy)?;
            let c = cx.mul_ref(cy);
            for (w, m) in shuffle_words(tail, *wy) {
                out.add_term(w.prepend(head), c.mul_ref(&R::from_int(m)));
            }
        }
    }
    Ok(out)
}

/// Full shuffle product; commutative and associative, with the empty word as
/// unit.
pub fn shuffle<R: Coeff>(x: &LinComb<R>, y: &LinComb<R>) -> Result<LinComb<R>> {
    let mut out = LinComb::new();
    for (wx, cx) in x.iter() {
        for (wy, cy) in y.iter() {
            check_product_length(*wx, *wy)?;
            let c = cx.mul_ref(cy);
            for (w, m) in shuffle_words(*wx, *wy) {
                out.add_term(w, c.mul_ref(&R::from_int(m)));
            }
        }
    }
    Ok(out)
}

/// Right comb K(a₁,…,aₙ) = a₁ ≺ K(a₂,…,aₙ), with K(aₙ) = aₙ.
pub fn comb_k<R: Coeff>(args: &[&LinComb<R>]) -> Result<LinComb<R>> {
    let (last, init) = args.split_last().ok_or(Error::EmptyArguments)?;
    let mut acc = (*last).clone();
    for a in init.iter().rev() {
        acc = half_shuffle(*a, &acc)?;
    }
    Ok(acc)
}

/// One interleaving of several source words whose first letters stay in
/// source order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoodShuffle {
    pub sources: Vec<Word>,
    /// `assignment[i][j]` = output position of letter `j` of source `i`.
    pub assignment: Vec<Vec<usize>>,
}

/// Exhaustive, duplicate-free enumeration of the good-shuffles of the given
/// non-empty source words, paired with their output words.
pub fn good_shuffles(sources: &[Word]) -> Result<Vec<(Word, GoodShuffle)>> {
    if sources.iter().any(|w| w.is_empty()) {
        return Err(Error::Invalid("good-shuffle sources must be non-empty".into()));
    }
    let total: usize = sources.iter().map(|w| w.len()).sum();
    if total > MAX_WORD_LEN {
        return Err(Error::Invalid(format!(
            "total weight {total} exceeds the supported maximum {MAX_WORD_LEN}"
        )));
    }
    let mut out = Vec::new();
    let mut pos = vec![0usize; sources.len()];
    let mut assignment: Vec<Vec<usize>> = sources.iter().map(|w| vec![0; w.len()]).collect();

    fn go(
        sources: &[Word],
        pos: &mut [usize],
        assignment: &mut [Vec<usize>],
        word: Word,
        filled: usize,
        total: usize,
        out: &mut Vec<(Word, GoodShuffle)>,
    ) {
        if filled == total {
            out.push((
                word,
                GoodShuffle {
                    sources: sources.to_vec(),
                    assignment: assignment.to_vec(),
                },
            ));
            return;
        }
        for i in 0..sources.len() {
            if pos[i] == sources[i].len() {
                continue;
            }
            // a source may start only after every earlier source has started
            if pos[i] == 0 && (0..i).any(|j| pos[j] == 0) {
                break;
            }
            let letter = sources[i].letter(pos[i]);
            assignment[i][pos[i]] = filled;
            pos[i] += 1;
            go(
                sources,
                pos,
                assignment,
                word.append(letter),
                filled + 1,
                total,
                out,
            );
            pos[i] -= 1;
        }
    }

    go(
        sources,
        &mut pos,
        &mut assignment,
        Word::EMPTY,
        0,
        total,
        &mut out,
    );
    Ok(out)
}

/// The two generators of the parametric subalgebra: z₂ = 10 and
/// z₃ = u·100 + v·110.
#[derive(Clone, PartialEq, Debug)]
pub struct Generators<R: Coeff> {
    pub z2: LinComb<R>,
    pub z3: LinComb<R>,
}

impl<R: Coeff> Generators<R> {
    pub fn with_uv(u: R, v: R) -> Result<Self> {
        if u.is_zero() && v.is_zero() {
            return Err(Error::Invalid("generator parameters (u, v) = (0, 0)".into()));
        }
        let w10 = Word::from_letters(&[1, 0]);
        let w100 = Word::from_letters(&[1, 0, 0]);
        let w110 = Word::from_letters(&[1, 1, 0]);
        Ok(Generators {
            z2: LinComb::unit_word(w10),
            z3: LinComb::from_terms([(w100, u), (w110, v)]),
        })
    }
}

impl Generators<RatPoly> {
    /// u left formal, v = 1 − u.
    pub fn symbolic() -> Self {
        Generators::with_uv(RatPoly::var(), RatPoly::from_ints(&[1, -1])).unwrap()
    }
}

impl Generators<Rat> {
    /// Rational point u, v = 1 − u.
    pub fn at_point(u: &Rat) -> Self {
        let v = Rat::one().sub_ref(u);
        Generators::with_uv(u.clone(), v).expect("u and 1 - u cannot both vanish")
    }

    /// The projective point u + v = 0, represented by (1, −1).
    pub fn degenerate() -> Self {
        Generators::with_uv(Rat::one(), Rat::one().neg_ref()).unwrap()
    }
}

/// Representative of the reverse-complement pair {w, dual(w)}: the one of
/// smaller depth (number of letters 1), ties broken by word order.
pub fn dual_representative(w: Word) -> Word {
    let d = w.dual01();
    let (dw, dd) = (w.depth01(), d.depth01());
    if dd < dw || (dd == dw && d < w) {
        d
    } else {
        w
    }
}

/// Identify every admissible word with its reverse-complement dual, folding
/// coefficients onto the canonical representative of each pair.
pub fn fold_duality<R: Coeff>(x: &LinComb<R>) -> LinComb<R> {
    x.map_words(dual_representative)
}

/// Expansion of the right comb over a {2,3}-word in the given generators,
/// with dual words identified. Coefficients stay polynomial of degree at
/// most the number of letters 3.
pub fn expand_two_three<R: Coeff>(
    w: &TwoThreeWord,
    gens: &Generators<R>,
) -> Result<LinComb<R>> {
    let args: Vec<&LinComb<R>> = w
        .entries()
        .iter()
        .map(|&e| if e == 2 { &gens.z2 } else { &gens.z3 })
        .collect();
    let raw = comb_k(&args)?;
    debug_assert!(raw.iter().all(|(word, _)| word.is_admissible01()));
    Ok(fold_duality(&raw))
}
