//! Freeness certificates: occurrence matrices of comb expansions over
//! {2,3}-words, their triangularity, the diagonal block formula, and generic
//! rank probes for arbitrary generator sets.

use crate::arith::Rat;
use crate::echelon::{EchelonBuilder, WordOrder};
use crate::error::Result;
use crate::words::{words_with_bidegree, Alphabet, Dialect, TwoThreeWord};
use crate::zinbiel::{comb_k, LinComb};
use rayon::prelude::*;
use serde::Serialize;

/// The matrix pairing comb expansions with concatenation words over all
/// {2,3}-words of one bidegree: `entries[i][j]` is the multiplicity of
/// `cat(words[i])` in the expansion of `K(words[j])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OccurrenceMatrix {
    pub twos: usize,
    pub threes: usize,
    pub dialect: Dialect,
    /// The index set S in lex order (2 before 3).
    pub words: Vec<TwoThreeWord>,
    pub entries: Vec<Vec<i64>>,
}

/// Expansion of K(w) without any duality identification: the letters of `w`
/// mapped through the dialect, combed right-to-left.
pub fn raw_comb(w: &TwoThreeWord, dialect: Dialect) -> Result<LinComb<i64>> {
    let letters: Vec<LinComb<i64>> = w
        .letter_words(dialect)
        .into_iter()
        .map(LinComb::unit_word)
        .collect();
    let refs: Vec<&LinComb<i64>> = letters.iter().collect();
    comb_k(&refs)
}

pub fn occurrence_matrix(
    twos: usize,
    threes: usize,
    dialect: Dialect,
) -> Result<OccurrenceMatrix> {
    let words = words_with_bidegree(twos, threes);
    let cats: Vec<_> = words.iter().map(|w| w.cat(dialect)).collect();
    let columns: Vec<Vec<i64>> = words
        .par_iter()
        .map(|w| {
            let k = raw_comb(w, dialect)?;
            Ok(cats
                .iter()
                .map(|c| k.coeff(*c).copied().unwrap_or(0))
                .collect())
        })
        .collect::<Result<_>>()?;
    let n = words.len();
    let entries = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i]).collect())
        .collect();
    Ok(OccurrenceMatrix {
        twos,
        threes,
        dialect,
        words,
        entries,
    })
}

/// Predicted diagonal entry for the 110 dialect: the product of the lengths
/// of the blocks "3 2 … 2" in `w`, ignoring any initial run of 2s.
pub fn diagonal_formula(w: &TwoThreeWord) -> i64 {
    let mut product = 1i64;
    let mut current = 0i64;
    for &e in w.entries() {
        if e == 3 {
            if current > 0 {
                product *= current;
            }
            current = 1;
        } else if current > 0 {
            current += 1;
        }
    }
    if current > 0 {
        product *= current;
    }
    product
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Upper,
    Lower,
}

/// Outcome of a triangularity check; on failure, the first offending pair of
/// index words row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriangularReport {
    pub ok: bool,
    pub counterexample: Option<(TwoThreeWord, TwoThreeWord)>,
}

/// Check that every entry on the wrong side of the diagonal vanishes and
/// that the diagonal matches its predicted value: all 1s for the 100
/// dialect, `diagonal_formula` for 110.
pub fn verify_triangular(m: &OccurrenceMatrix, orientation: Orientation) -> TriangularReport {
    let n = m.words.len();
    for i in 0..n {
        for j in 0..n {
            let v = m.entries[i][j];
            let expected_zero = match orientation {
                Orientation::Upper => i > j,
                Orientation::Lower => i < j,
            };
            let bad = if expected_zero {
                v != 0
            } else if i == j {
                match m.dialect {
                    Dialect::D100 => v != 1,
                    Dialect::D110 => v != diagonal_formula(&m.words[i]),
                }
            } else {
                false
            };
            if bad {
                return TriangularReport {
                    ok: false,
                    counterexample: Some((m.words[i].clone(), m.words[j].clone())),
                };
            }
        }
    }
    TriangularReport {
        ok: true,
        counterexample: None,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProbeWeight {
    pub weight: usize,
    /// Number of generator sequences of this total weight: the dimension of
    /// the free zinbiel algebra on the generator set in this degree.
    pub expected: usize,
    pub rank: usize,
    pub deficiency: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProbeReport {
    pub generators: Vec<String>,
    pub per_weight: Vec<ProbeWeight>,
}

/// Rank probe: for each total weight up to `max_weight`, echelonize the comb
/// expansions of every sequence of generators of that weight and compare the
/// rank with the sequence count. Generators must each be weight-homogeneous
/// and nonzero.
pub fn freeness_probe(
    alphabet: &Alphabet,
    gens: &[LinComb<Rat>],
    max_weight: usize,
) -> Result<ProbeReport> {
    let mut weights = Vec::with_capacity(gens.len());
    for g in gens {
        match g.weight()? {
            Some(w) if w > 0 => weights.push(w),
            _ => {
                return Err(crate::error::Error::Invalid(
                    "probe generators must be nonzero with positive weight".into(),
                ))
            }
        }
    }
    let min_weight = weights.iter().copied().min().unwrap_or(1);
    let mut per_weight = Vec::new();
    for n in min_weight..=max_weight {
        let mut sequences: Vec<Vec<usize>> = Vec::new();
        let mut stack = Vec::new();
        enumerate_sequences(&weights, n, &mut stack, &mut sequences);
        let combs: Vec<LinComb<Rat>> = sequences
            .par_iter()
            .map(|seq| {
                let args: Vec<&LinComb<Rat>> = seq.iter().map(|&i| &gens[i]).collect();
                comb_k(&args)
            })
            .collect::<Result<_>>()?;
        let mut builder = EchelonBuilder::new(WordOrder::Standard);
        for c in &combs {
            builder.insert(c);
        }
        let rank = builder.rank();
        per_weight.push(ProbeWeight {
            weight: n,
            expected: sequences.len(),
            rank,
            deficiency: sequences.len() - rank,
        });
    }
    Ok(ProbeReport {
        generators: gens.iter().map(|g| g.render(alphabet)).collect(),
        per_weight,
    })
}

fn enumerate_sequences(
    weights: &[usize],
    remaining: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        if !stack.is_empty() {
            out.push(stack.clone());
        }
        return;
    }
    for (i, &w) in weights.iter().enumerate() {
        if w <= remaining {
            stack.push(i);
            enumerate_sequences(weights, remaining - w, stack, out);
            stack.pop();
        }
    }
}
