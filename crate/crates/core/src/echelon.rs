//! Exact row echelonization of relation spaces over the admissible words of
//! a fixed weight, and reduction of arbitrary combinations modulo those
//! relations.

use crate::arith::{Coeff, Rat};
use crate::error::{Error, Result};
use crate::words::{admissible_words, Word};
use crate::zinbiel::LinComb;
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::BTreeMap;
use std::fmt;

/// Which word is eliminated first when a relation row is echelonized.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordOrder {
    /// Pivot on the greatest word in canonical order.
    Standard,
    /// Pivot on the least word instead.
    Reversed,
}

impl WordOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            WordOrder::Standard => "standard",
            WordOrder::Reversed => "reversed",
        }
    }

    /// Comparison with the pivot candidate ranked greatest.
    fn cmp_words(self, a: Word, b: Word) -> std::cmp::Ordering {
        match self {
            WordOrder::Standard => a.cmp(&b),
            WordOrder::Reversed => b.cmp(&a),
        }
    }
}

impl fmt::Display for WordOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WordOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(WordOrder::Standard),
            "reversed" => Ok(WordOrder::Reversed),
            other => Err(Error::Invalid(format!("unknown word order `{other}`"))),
        }
    }
}

/// A monic relation row: terms sorted pivot-first (descending in the active
/// order), pivot coefficient 1.
type Row = Vec<(Word, Rat)>;

/// Working representation during elimination: integer coefficients with the
/// content divided out. Monic normalization waits until the very end so the
/// hot loop never touches rational arithmetic.
type IRow = Vec<(Word, BigInt)>;

fn irow_from_lincomb(order: WordOrder, x: &LinComb<Rat>) -> IRow {
    let mut denom = BigInt::from(1);
    for (_, c) in x.iter() {
        denom = denom.lcm(c.denom());
    }
    let mut row: IRow = x
        .iter()
        .map(|(w, c)| (*w, c.numer() * (&denom / c.denom())))
        .collect();
    row.sort_by(|a, b| order.cmp_words(b.0, a.0));
    strip_content(&mut row);
    row
}

fn strip_content(row: &mut IRow) {
    use num_traits::{One, Zero};
    let mut content = BigInt::zero();
    for (_, c) in row.iter() {
        content = content.gcd(c);
        if content.is_one() {
            return;
        }
    }
    if content > BigInt::from(1) {
        for (_, c) in row.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// acc := lead(other)·acc − acc[at]·other, cancelling the word at `at`.
/// `other` is pivot-first with its pivot equal to `acc[at].0`, so the merge
/// only touches positions at and beyond.
fn cross_eliminate(order: WordOrder, acc: &IRow, at: usize, other: &IRow) -> IRow {
    use num_traits::Zero;
    let scale_acc = &other[0].1;
    let scale_other = &acc[at].1;
    let mut out = Vec::with_capacity(acc.len() + other.len());
    for (w, c) in &acc[..at] {
        out.push((*w, c * scale_acc));
    }
    let (mut i, mut j) = (at + 1, 1);
    while i < acc.len() && j < other.len() {
        match order.cmp_words(acc[i].0, other[j].0) {
            std::cmp::Ordering::Greater => {
                out.push((acc[i].0, &acc[i].1 * scale_acc));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((other[j].0, -(&other[j].1 * scale_other)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &acc[i].1 * scale_acc - &other[j].1 * scale_other;
                if !v.is_zero() {
                    out.push((acc[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    for (w, c) in &acc[i..] {
        out.push((*w, c * scale_acc));
    }
    for (w, c) in &other[j..] {
        out.push((*w, -(c * scale_other)));
    }
    let mut out = out;
    strip_content(&mut out);
    out
}

/// Incremental Gaussian elimination keyed by pivot word.
pub struct EchelonBuilder {
    order: WordOrder,
    rows: BTreeMap<Word, IRow>,
}

impl EchelonBuilder {
    pub fn new(order: WordOrder) -> Self {
        EchelonBuilder {
            order,
            rows: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> WordOrder {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a relation; returns whether it increased the rank.
    pub fn insert(&mut self, x: &LinComb<Rat>) -> bool {
        self.insert_irow(irow_from_lincomb(self.order, x))
    }

    fn insert_irow(&mut self, mut row: IRow) -> bool {
        loop {
            let Some((pivot, _)) = row.first() else {
                return false;
            };
            match self.rows.get(pivot) {
                Some(existing) => {
                    row = cross_eliminate(self.order, &row, 0, existing);
                }
                None => {
                    self.rows.insert(*pivot, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitute to fully reduced form and pin down the quotient basis
    /// among the admissible words of `weight`.
    pub fn finish(self, weight: usize) -> Result<EchelonSpace> {
        let order = self.order;
        let mut reduced: BTreeMap<Word, IRow> = BTreeMap::new();
        // ascending pivot order: every word below a pivot is either a lesser
        // pivot (already reduced) or a basis word
        let pivots_ascending: Vec<Word> = match order {
            WordOrder::Standard => self.rows.keys().copied().collect(),
            WordOrder::Reversed => self.rows.keys().rev().copied().collect(),
        };
        for pivot in pivots_ascending {
            let mut acc = self.rows[&pivot].clone();
            // tail entries only ever move left or vanish: a reduced row's
            // tail contains no pivot words, so each substitution settles the
            // position it was applied at
            let mut i = 1;
            while i < acc.len() {
                match reduced.get(&acc[i].0) {
                    Some(other) => acc = cross_eliminate(order, &acc, i, other),
                    None => i += 1,
                }
            }
            reduced.insert(pivot, acc);
        }
        let all = admissible_words(weight)?;
        for row in reduced.values() {
            for (w, _) in row {
                if !all.contains(w) {
                    return Err(Error::Inadmissible(format!("{w:?}")));
                }
            }
        }
        let mut basis: Vec<Word> = all
            .iter()
            .copied()
            .filter(|w| !reduced.contains_key(w))
            .collect();
        if order == WordOrder::Reversed {
            basis.reverse();
        }
        let mut rows: Vec<Row> = reduced
            .into_values()
            .map(|r| {
                let lead = r[0].1.clone();
                r.into_iter()
                    .map(|(w, c)| (w, Rat::new(c, lead.clone())))
                    .collect()
            })
            .collect();
        rows.sort_by(|a, b| order.cmp_words(b[0].0, a[0].0));
        let pivot_index = rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        Ok(EchelonSpace {
            weight,
            order,
            rows,
            pivot_index,
            basis,
        })
    }
}

/// Word-sized modular elimination used to spot redundant rows before they
/// reach exact arithmetic. A row that is dependent modulo the prime is only
/// *probably* dependent, so callers must verify the skipped rows against the
/// exact result afterwards; a row that is independent modulo the prime is
/// always exactly independent.
mod modp {
    use super::{IRow, Word, WordOrder};
    use num_traits::ToPrimitive;

    pub const P: u64 = (1 << 61) - 1;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (P - b)
        }
    }

    pub fn inv(a: u64) -> u64 {
        // Fermat: a^(P-2)
        let mut base = a;
        let mut e = P - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn row_mod_p(row: &IRow) -> Vec<(Word, u64)> {
        let p = num_bigint::BigInt::from(P);
        row.iter()
            .filter_map(|(w, c)| {
                let mut r = c % &p;
                if r.sign() == num_bigint::Sign::Minus {
                    r += &p;
                }
                let v = r.to_u64().expect("residue fits in u64");
                (v != 0).then_some((*w, v))
            })
            .collect()
    }

    pub struct Elim {
        order: WordOrder,
        rows: std::collections::BTreeMap<Word, Vec<(Word, u64)>>,
    }

    impl Elim {
        pub fn new(order: WordOrder) -> Self {
            Elim {
                order,
                rows: std::collections::BTreeMap::new(),
            }
        }

        /// Insert a residue row; returns whether it increased the rank.
        pub fn insert(&mut self, mut row: Vec<(Word, u64)>) -> bool {
            loop {
                let Some(&(pivot, lead)) = row.first() else {
                    return false;
                };
                match self.rows.get(&pivot) {
                    Some(existing) => {
                        row = Self::subtract(self.order, &row, existing, lead);
                    }
                    None => {
                        let s = inv(lead);
                        for (_, c) in row.iter_mut() {
                            *c = mul(*c, s);
                        }
                        self.rows.insert(pivot, row);
                        return true;
                    }
                }
            }
        }

        fn subtract(
            order: WordOrder,
            row: &[(Word, u64)],
            other: &[(Word, u64)],
            scale: u64,
        ) -> Vec<(Word, u64)> {
            let mut out = Vec::with_capacity(row.len() + other.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < other.len() {
                match order.cmp_words(row[i].0, other[j].0) {
                    std::cmp::Ordering::Greater => {
                        out.push(row[i]);
                        i += 1;
                    }
                    std::cmp::Ordering::Less => {
                        out.push((other[j].0, sub(0, mul(other[j].1, scale))));
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        let v = sub(row[i].1, mul(other[j].1, scale));
                        if v != 0 {
                            out.push((row[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            out.extend_from_slice(&row[i..]);
            for &(w, c) in &other[j..] {
                out.push((w, sub(0, mul(c, scale))));
            }
            out
        }
    }
}

/// Fully reduced row echelon form of a homogeneous relation space, together
/// with the induced basis of the quotient.
#[derive(Clone, PartialEq, Debug)]
pub struct EchelonSpace {
    weight: usize,
    order: WordOrder,
    rows: Vec<Row>,
    pivot_index: BTreeMap<Word, usize>,
    /// Non-pivot admissible words, ascending in the active order.
    basis: Vec<Word>,
}

impl EchelonSpace {
    /// Echelonize a batch of relations. Rows that a word-sized modular
    /// elimination marks as redundant skip exact arithmetic entirely; they
    /// are verified against the finished space afterwards (and folded in on
    /// the off chance the modular picture lied), so the result is exact and
    /// identical to the row-by-row build.
    pub fn from_lincombs(
        weight: usize,
        order: WordOrder,
        rels: &[LinComb<Rat>],
    ) -> Result<Self> {
        let irows: Vec<IRow> = rels
            .iter()
            .map(|r| irow_from_lincomb(order, r))
            .collect();
        let mut prefilter = modp::Elim::new(order);
        let mut skipped = Vec::new();
        let mut b = EchelonBuilder::new(order);
        for (i, row) in irows.iter().enumerate() {
            if prefilter.insert(modp::row_mod_p(row)) {
                b.insert_irow(row.clone());
            } else {
                skipped.push(i);
            }
        }
        let mut space = b.finish(weight)?;
        loop {
            let mut missed = Vec::new();
            for &i in &skipped {
                if !space.reduce(&rels[i])?.is_zero() {
                    missed.push(i);
                }
            }
            if missed.is_empty() {
                return Ok(space);
            }
            skipped.retain(|i| !missed.contains(i));
            let mut b = EchelonBuilder::new(order);
            for row in space.rows {
                b.insert_irow(irow_from_lincomb(
                    order,
                    &LinComb::from_terms(row.into_iter()),
                ));
            }
            for i in missed {
                b.insert_irow(irows[i].clone());
            }
            space = b.finish(weight)?;
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn order(&self) -> WordOrder {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Dimension of the quotient.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(Word, Rat)]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn is_pivot(&self, w: Word) -> bool {
        self.pivot_index.contains_key(&w)
    }

    /// Rewrite a homogeneous combination of admissible words as a
    /// combination of basis words. Coefficients may live in any ring with a
    /// rational action.
    pub fn reduce<R: Coeff>(&self, x: &LinComb<R>) -> Result<LinComb<R>> {
        if let Some(wt) = x.weight()? {
            if wt != self.weight {
                return Err(Error::WeightMismatch {
                    expected: self.weight,
                    actual: wt,
                });
            }
        }
        let mut hits: BTreeMap<usize, R> = BTreeMap::new();
        let mut out = LinComb::new();
        for (w, c) in x.iter() {
            if !w.is_admissible01() {
                return Err(Error::Inadmissible(format!("{w:?}")));
            }
            match self.pivot_index.get(w) {
                Some(&i) => {
                    hits.entry(i)
                        .and_modify(|v| *v = v.add_ref(c))
                        .or_insert_with(|| c.clone());
                }
                None => out.add_term(*w, c.clone()),
            }
        }
        // rows are fully reduced: their non-pivot words are all basis words,
        // so one pass suffices
        for (i, c) in hits {
            for (w, r) in self.rows[i].iter().skip(1) {
                out.add_term(*w, c.mul_rat(&r.neg_ref()));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, RatPoly};
    use crate::words::Alphabet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn lc(pairs: &[(&str, i64)]) -> LinComb<Rat> {
        LinComb::from_terms(pairs.iter().map(|&(s, c)| (w(s), rat_int(c))))
    }

    #[test]
    fn single_relation() {
        // weight 3: admissible words 100 < 110; relation 110 - 100
        let space = EchelonSpace::from_lincombs(
            3,
            WordOrder::Standard,
            &[lc(&[("110", 1), ("100", -1)])],
        )
        .unwrap();
        assert_eq!(space.rank(), 1);
        assert_eq!(space.dimension(), 1);
        assert_eq!(space.basis(), &[w("100")]);
        let r = space.reduce(&lc(&[("110", 2), ("100", 5)])).unwrap();
        assert_eq!(r, lc(&[("100", 7)]));
    }

    #[test]
    fn reversed_pivots() {
        // same relation, reversed order: pivot is now 100, basis {110}
        let space = EchelonSpace::from_lincombs(
            3,
            WordOrder::Reversed,
            &[lc(&[("110", 1), ("100", -1)])],
        )
        .unwrap();
        assert_eq!(space.basis(), &[w("110")]);
        let r = space.reduce(&lc(&[("100", 3)])).unwrap();
        assert_eq!(r, lc(&[("110", 3)]));
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let mut b = EchelonBuilder::new(WordOrder::Standard);
        let r1 = lc(&[("1100", 1), ("1010", -2)]);
        let r2 = lc(&[("1100", 3), ("1010", -6)]);
        assert!(b.insert(&r1));
        assert!(!b.insert(&r2));
        assert!(!b.insert(&LinComb::new()));
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn full_reduction_across_pivots() {
        // rows that eliminate into each other: x=11100, y=11010, z=11000
        let rels = [
            lc(&[("11100", 1), ("11010", 1), ("11000", 1)]),
            lc(&[("11010", 1), ("11000", -1)]),
        ];
        let space = EchelonSpace::from_lincombs(5, WordOrder::Standard, &rels).unwrap();
        assert_eq!(space.rank(), 2);
        // fully reduced: the 11100 row must not mention the pivot 11010
        let top: Vec<_> = space.rows().next().unwrap().to_vec();
        assert_eq!(top[0].0, w("11100"));
        assert!(top.iter().all(|(word, _)| *word != w("11010")));
        // 11100 = -11010 - 11000 = 11000 - 11000... check via reduce
        let r = space.reduce(&lc(&[("11100", 1)])).unwrap();
        assert_eq!(r, lc(&[("11000", -2)]));
        let r = space.reduce(&lc(&[("11010", 1)])).unwrap();
        assert_eq!(r, lc(&[("11000", 1)]));
    }

    #[test]
    fn reduce_is_projection_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xec8e);
        let weight = 6;
        let words = admissible_words(weight).unwrap();
        let random_comb = |rng: &mut ChaCha8Rng| {
            let mut x = LinComb::new();
            for _ in 0..4 {
                let w = words[rng.gen_range(0..words.len())];
                x.add_term(w, rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4)));
            }
            x
        };
        let rels: Vec<LinComb<Rat>> = (0..5).map(|_| random_comb(&mut rng)).collect();
        let space = EchelonSpace::from_lincombs(weight, WordOrder::Standard, &rels).unwrap();
        for _ in 0..50 {
            let x = random_comb(&mut rng);
            let y = random_comb(&mut rng);
            let rx = space.reduce(&x).unwrap();
            // idempotent
            assert_eq!(space.reduce(&rx).unwrap(), rx);
            // result supported on the basis
            assert!(rx.iter().all(|(word, _)| !space.is_pivot(*word)));
            // linear
            let mut xy = x.clone();
            xy.add_assign_ref(&y);
            let mut sum = rx.clone();
            sum.add_assign_ref(&space.reduce(&y).unwrap());
            assert_eq!(space.reduce(&xy).unwrap(), sum);
            // relations reduce to zero
            for r in &rels {
                assert!(space.reduce(r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rank_matches_dense_elimination() {
        // cross-check sparse rank against naive dense Gaussian elimination
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        let weight = 5;
        let words = admissible_words(weight).unwrap();
        for _ in 0..20 {
            let rels: Vec<LinComb<Rat>> = (0..6)
                .map(|_| {
                    let mut x = LinComb::new();
                    for _ in 0..3 {
                        let w = words[rng.gen_range(0..words.len())];
                        x.add_term(w, rat_int(rng.gen_range(-3i64..=3)));
                    }
                    x
                })
                .collect();
            let mut dense: Vec<Vec<Rat>> = rels
                .iter()
                .map(|r| {
                    words
                        .iter()
                        .map(|w| r.coeff(*w).cloned().unwrap_or_else(Rat::zero))
                        .collect()
                })
                .collect();
            let mut dense_rank = 0;
            for col in 0..words.len() {
                if let Some(p) = (dense_rank..dense.len()).find(|&r| !dense[r][col].is_zero()) {
                    dense.swap(dense_rank, p);
                    let lead = dense[dense_rank][col].clone();
                    for r in 0..dense.len() {
                        if r != dense_rank && !dense[r][col].is_zero() {
                            let f = dense[r][col].clone() / lead.clone();
                            for c in 0..words.len() {
                                let sub = dense[dense_rank][c].clone() * f.clone();
                                dense[r][c] -= sub;
                            }
                        }
                    }
                    dense_rank += 1;
                }
            }
            let space =
                EchelonSpace::from_lincombs(weight, WordOrder::Standard, &rels).unwrap();
            assert_eq!(space.rank(), dense_rank);
            assert_eq!(space.dimension(), words.len() - dense_rank);
        }
    }

    #[test]
    fn reduce_polynomial_coefficients() {
        let space = EchelonSpace::from_lincombs(
            3,
            WordOrder::Standard,
            &[lc(&[("110", 2), ("100", -3)])],
        )
        .unwrap();
        let x = LinComb::from_terms([(w("110"), RatPoly::var())]);
        let r = space.reduce(&x).unwrap();
        // 110 ↦ (3/2)·100, so u·110 ↦ (3/2)u·100
        let expected = LinComb::from_terms([(
            w("100"),
            RatPoly::var().scale(&rat(3, 2)),
        )]);
        assert_eq!(r, expected);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        let space = EchelonSpace::from_lincombs(3, WordOrder::Standard, &[]).unwrap();
        assert!(space.reduce(&lc(&[("1100", 1)])).is_err());
        // 010 is inadmissible
        let bad = LinComb::from_terms([(Word::from_letters(&[0, 1, 0]), rat_int(1))]);
        assert!(space.reduce(&bad).is_err());
        // zero reduces to zero with no weight check
        assert!(space.reduce(&LinComb::<Rat>::new()).unwrap().is_zero());
    }
}
