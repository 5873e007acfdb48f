//! The parametric subalgebra composed with the relation quotient: B-tables,
//! transition matrices over ℚ[u] (v = 1 − u), the singular polynomials each
//! weight contributes, and image dimensions at the degenerate point
//! (u, v) = (1, −1).

use crate::arith::{complex_roots, det_poly_matrix, poly_gcd, Coeff, IntPoly, Rat, RatPoly};
use crate::echelon::{EchelonBuilder, WordOrder};
use crate::error::{Error, Result};
use crate::relations::{echelonize, Level};
use crate::words::{padovan_dims, two_three_words, Composition, TwoThreeWord, Word};
use crate::zinbiel::{expand_two_three, render_terms, Generators, LinComb};
use rayon::prelude::*;
use std::path::Path;

/// One `B(w)` line: the expansion of a {2,3}-word written over compositions.
#[derive(Clone, PartialEq, Debug)]
pub struct BRow {
    pub word: TwoThreeWord,
    /// Ascending by composition; coefficients polynomial in u.
    pub terms: Vec<(Composition, RatPoly)>,
}

impl BRow {
    pub fn render(&self) -> String {
        let rhs = render_terms(
            self.terms.iter().map(|(c, p)| (p.kind(), format!("ζ{c}"))),
            "",
        );
        format!("B({}) = {}", self.word.comma_form(), rhs)
    }
}

/// Expansions of every {2,3}-word of weight `n`, written in ζ-notation.
/// No relations are applied.
pub fn b_table(n: usize) -> Result<Vec<BRow>> {
    if n < 2 {
        return Err(Error::WeightTooSmall { min: 2, got: n });
    }
    let gens = Generators::symbolic();
    two_three_words(n)
        .into_iter()
        .map(|word| {
            let expansion = expand_two_three(&word, &gens)?;
            let mut terms: Vec<(Composition, RatPoly)> = expansion
                .iter()
                .map(|(w, c)| Ok((Composition::from_word(*w)?, c.clone())))
                .collect::<Result<_>>()?;
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            Ok(BRow { word, terms })
        })
        .collect()
}

/// Matrix of the quotient map restricted to weight `n`: row `i` holds the
/// image of the `i`-th {2,3}-word expressed on the quotient basis.
#[derive(Clone, PartialEq, Debug)]
pub struct TransitionMatrix {
    pub weight: usize,
    pub level: Level,
    pub row_words: Vec<TwoThreeWord>,
    pub basis: Vec<Word>,
    pub entries: Vec<Vec<RatPoly>>,
}

pub fn transition_matrix(n: usize, level: Level, cache: Option<&Path>) -> Result<TransitionMatrix> {
    transition_matrix_ordered(n, level, WordOrder::Standard, cache)
}

/// As `transition_matrix`, but with an explicit pivot order — changing the
/// order changes the quotient basis, which must only move the determinant by
/// a nonzero rational.
pub fn transition_matrix_ordered(
    n: usize,
    level: Level,
    order: WordOrder,
    cache: Option<&Path>,
) -> Result<TransitionMatrix> {
    let space = echelonize(n, level, order, cache)?;
    let expected = padovan_dims(n)[n] as usize;
    if space.dimension() != expected {
        return Err(Error::DimensionMismatch {
            weight: n,
            level: level.to_string(),
            expected,
            actual: space.dimension(),
        });
    }
    let gens = Generators::symbolic();
    let row_words = two_three_words(n);
    let basis: Vec<Word> = space.basis().to_vec();
    let entries: Vec<Vec<RatPoly>> = row_words
        .par_iter()
        .map(|w| -> Result<Vec<RatPoly>> {
            let reduced = space.reduce(&expand_two_three(w, &gens)?)?;
            Ok(basis
                .iter()
                .map(|b| reduced.coeff(*b).cloned().unwrap_or_else(RatPoly::zero))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(TransitionMatrix {
        weight: n,
        level,
        row_words,
        basis,
        entries,
    })
}

/// Exact determinant of the transition matrix. Each generator z₃ contributes
/// at most one power of u per letter 3, which bounds the interpolation degree.
pub fn raw_determinant(m: &TransitionMatrix) -> Result<RatPoly> {
    let bound: usize = m.row_words.iter().map(|w| w.threes()).sum();
    det_poly_matrix(&m.entries, bound)
}

/// What a weight contributes to the singular locus: the raw determinant, the
/// factor seen here for the first time (squarefree, primitive, positive
/// leading coefficient), and whatever was inherited from earlier weights.
#[derive(Clone, Debug)]
pub struct SingularReport {
    pub weight: usize,
    pub raw_det: RatPoly,
    pub new_factor: Option<IntPoly>,
    /// (earlier weight, primitive part of the factor stripped against it)
    pub stripped: Vec<(usize, IntPoly)>,
}

pub fn singular_polynomials(
    max_n: usize,
    level: Level,
    cache: Option<&Path>,
) -> Result<Vec<SingularReport>> {
    if max_n < 2 {
        return Err(Error::WeightTooSmall { min: 2, got: max_n });
    }
    let mut reports: Vec<SingularReport> = Vec::new();
    for n in 2..=max_n {
        let m = transition_matrix(n, level, cache)?;
        let det = raw_determinant(&m)?;
        if det.is_zero() {
            return Err(Error::Invalid(format!(
                "transition determinant vanishes identically at weight {n}"
            )));
        }
        let mut rem = det.clone();
        let mut stripped = Vec::new();
        for earlier in &reports {
            let mut taken = RatPoly::one();
            loop {
                let g = poly_gcd(&rem, &earlier.raw_det);
                if g.degree().map_or(true, |d| d == 0) {
                    break;
                }
                rem = rem.div_exact(&g);
                taken = taken.mul(&g);
            }
            if taken.degree().map_or(false, |d| d >= 1) {
                stripped.push((earlier.weight, taken.primitive_part()?));
            }
        }
        let new_factor = match rem.degree() {
            Some(d) if d >= 1 => Some(rem.squarefree_primitive()?),
            _ => None,
        };
        reports.push(SingularReport {
            weight: n,
            raw_det: det,
            new_factor,
            stripped,
        });
    }
    Ok(reports)
}

/// Evaluation of one new factor at one parameter value.
#[derive(Clone, PartialEq, Debug)]
pub struct PointCheck {
    pub weight: usize,
    pub point: Rat,
    pub nonzero: bool,
}

pub fn check_nonsingular_points(reports: &[SingularReport], points: &[Rat]) -> Vec<PointCheck> {
    let mut out = Vec::new();
    for r in reports {
        let Some(f) = &r.new_factor else { continue };
        for p in points {
            out.push(PointCheck {
                weight: r.weight,
                point: p.clone(),
                nonzero: !f.eval_rat(p).is_zero(),
            });
        }
    }
    out
}

/// Rank of the weight-`n` image when the generators degenerate to
/// (u, v) = (1, −1), for each n ≤ max_n.
pub fn degenerate_image_dims(
    max_n: usize,
    level: Level,
    cache: Option<&Path>,
) -> Result<Vec<(usize, usize)>> {
    if max_n < 2 {
        return Err(Error::WeightTooSmall { min: 2, got: max_n });
    }
    let gens = Generators::degenerate();
    let mut out = Vec::new();
    for n in 2..=max_n {
        let space = echelonize(n, level, WordOrder::Standard, cache)?;
        let expected = padovan_dims(n)[n] as usize;
        if space.dimension() != expected {
            return Err(Error::DimensionMismatch {
                weight: n,
                level: level.to_string(),
                expected,
                actual: space.dimension(),
            });
        }
        let images: Vec<LinComb<Rat>> = two_three_words(n)
            .par_iter()
            .map(|w| space.reduce(&expand_two_three(w, &gens)?))
            .collect::<Result<_>>()?;
        let mut builder = EchelonBuilder::new(WordOrder::Standard);
        for x in &images {
            builder.insert(x);
        }
        out.push((n, builder.rank()));
    }
    Ok(out)
}

/// CSV of the new factors: `weight,polynomial` with coefficients ascending.
pub fn singular_csv(reports: &[SingularReport]) -> String {
    let mut s = String::from("weight,polynomial\n");
    for r in reports {
        if let Some(f) = &r.new_factor {
            s.push_str(&format!("{},\"[{}]\"\n", r.weight, f.coeff_strings().join(",")));
        }
    }
    s
}

/// CSV of the roots of the new factors: `weight,re,im`.
pub fn roots_csv(reports: &[SingularReport]) -> Result<String> {
    let mut s = String::from("weight,re,im\n");
    for r in reports {
        let Some(f) = &r.new_factor else { continue };
        if f.degree().map_or(true, |d| d == 0) {
            continue;
        }
        for z in complex_roots(f, 1e-12)? {
            s.push_str(&format!("{},{:.12},{:.12}\n", r.weight, z.re, z.im));
        }
    }
    Ok(s)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn export_singular_csv(reports: &[SingularReport], path: &Path) -> Result<()> {
    write_file(path, &singular_csv(reports))
}

pub fn export_roots_csv(reports: &[SingularReport], path: &Path) -> Result<()> {
    write_file(path, &roots_csv(reports)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::words::Alphabet;
    use crate::zinbiel::shuffle;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn poly(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn b_table_weight_five_golden() {
        let t = b_table(5).unwrap();
        assert_eq!(t.len(), 2);
        let by_word: std::collections::BTreeMap<String, &BRow> =
            t.iter().map(|r| (r.word.to_string(), r)).collect();
        let b23 = by_word["23"];
        assert_eq!(
            b23.terms,
            vec![
                (comp(&[1, 4]), poly(&[2, 1])),
                (comp(&[2, 3]), poly(&[1])),
                (comp(&[3, 2]), poly(&[1, -1])),
            ]
        );
        let b32 = by_word["32"];
        assert_eq!(
            b32.terms,
            vec![
                (comp(&[1, 4]), poly(&[4, -1])),
                (comp(&[2, 3]), poly(&[2])),
                (comp(&[3, 2]), poly(&[0, 1])),
            ]
        );
        assert_eq!(
            b23.render(),
            "B(2,3) = (u + 2)ζ(1,4) + ζ(2,3) + (-u + 1)ζ(3,2)"
        );
        assert_eq!(b32.render(), "B(3,2) = (-u + 4)ζ(1,4) + 2ζ(2,3) + uζ(3,2)");
    }

    #[test]
    fn b_table_low_weights() {
        let t2 = b_table(2).unwrap();
        assert_eq!(t2.len(), 1);
        assert_eq!(t2[0].render(), "B(2) = ζ(2)");
        let t3 = b_table(3).unwrap();
        assert_eq!(t3.len(), 1);
        assert_eq!(t3[0].render(), "B(3) = ζ(3)");
        let t4 = b_table(4).unwrap();
        assert_eq!(t4.len(), 1);
        assert_eq!(t4[0].render(), "B(2,2) = 2ζ(1,3) + ζ(2,2)");
        assert!(b_table(1).is_err());
    }

    #[test]
    fn small_transition_matrices() {
        for n in [2usize, 3] {
            let m = transition_matrix(n, Level::FdsHoffman, None).unwrap();
            assert_eq!(m.entries.len(), 1);
            assert_eq!(m.entries[0].len(), 1);
            let e = &m.entries[0][0];
            assert!(e.is_constant() && !e.is_zero(), "weight {n}: {e}");
        }
        for n in [2usize, 3, 4] {
            let m = transition_matrix(n, Level::FdsHoffman, None).unwrap();
            let d = raw_determinant(&m).unwrap();
            assert!(d.is_constant() && !d.is_zero(), "weight {n}: {d}");
        }
    }

    #[test]
    fn weak_backend_is_rejected() {
        match transition_matrix(4, Level::Fds, None) {
            Err(Error::DimensionMismatch {
                weight, expected, ..
            }) => {
                assert_eq!(weight, 4);
                assert_eq!(expected, 1);
            }
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn singular_factors_through_weight_seven() {
        let reports = singular_polynomials(7, Level::FdsHoffman, None).unwrap();
        assert_eq!(reports.len(), 6);
        for r in &reports {
            match r.weight {
                5 => assert_eq!(r.new_factor, Some(IntPoly::from_ints(&[-6, 5]))),
                7 => assert_eq!(r.new_factor, Some(IntPoly::from_ints(&[51, 14]))),
                _ => assert_eq!(r.new_factor, None, "weight {}", r.weight),
            }
        }
        // nothing inherited reappears in a later new factor
        let five = poly(&[-6, 5]);
        let seven = poly(&[51, 14]);
        assert_eq!(poly_gcd(&five, &seven).degree(), Some(0));
    }

    #[test]
    fn reversed_pivots_move_determinant_by_a_constant() {
        for n in 4..=7 {
            let std = raw_determinant(
                &transition_matrix_ordered(n, Level::FdsHoffman, WordOrder::Standard, None)
                    .unwrap(),
            )
            .unwrap();
            let rev = raw_determinant(
                &transition_matrix_ordered(n, Level::FdsHoffman, WordOrder::Reversed, None)
                    .unwrap(),
            )
            .unwrap();
            if std.is_constant() {
                assert!(rev.is_constant(), "weight {n}");
                continue;
            }
            let a = std.primitive_part().unwrap();
            let b = rev.primitive_part().unwrap();
            assert_eq!(a, b, "weight {n}");
        }
    }

    #[test]
    fn multiplicativity_witness() {
        let s2 = echelonize(2, Level::FdsHoffman, WordOrder::Standard, None).unwrap();
        let s3 = echelonize(3, Level::FdsHoffman, WordOrder::Standard, None).unwrap();
        let s5 = echelonize(5, Level::FdsHoffman, WordOrder::Standard, None).unwrap();
        let gens = Generators::symbolic();
        let two = TwoThreeWord::parse("2").unwrap();
        let three = TwoThreeWord::parse("3").unwrap();
        let b2 = s2.reduce(&expand_two_three(&two, &gens).unwrap()).unwrap();
        let b3 = s3.reduce(&expand_two_three(&three, &gens).unwrap()).unwrap();
        let mut prod = s5.reduce(&shuffle(&b2, &b3).unwrap()).unwrap();
        for w in ["23", "32"] {
            let w = TwoThreeWord::parse(w).unwrap();
            let r = s5.reduce(&expand_two_three(&w, &gens).unwrap()).unwrap();
            prod.sub_assign_ref(&r);
        }
        assert!(prod.is_zero(), "left over: {}", prod.render(&Alphabet::binary()));
    }

    #[test]
    fn degenerate_dims_match_shifted_series() {
        let dims = degenerate_image_dims(8, Level::FdsHoffman, None).unwrap();
        let got: Vec<usize> = dims.iter().map(|&(_, r)| r).collect();
        assert_eq!(got, vec![1, 0, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn point_checks() {
        let reports = singular_polynomials(5, Level::FdsHoffman, None).unwrap();
        let checks = check_nonsingular_points(
            &reports,
            &[rat_int(0), rat_int(1), rat(6, 5)],
        );
        assert_eq!(checks.len(), 3);
        assert!(checks[0].nonzero && checks[1].nonzero);
        assert!(!checks[2].nonzero, "6/5 must be a root at weight 5");
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(singular_csv(&[]), "weight,polynomial\n");
        assert_eq!(roots_csv(&[]).unwrap(), "weight,re,im\n");
        let reports = singular_polynomials(5, Level::FdsHoffman, None).unwrap();
        assert_eq!(
            singular_csv(&reports),
            "weight,polynomial\n5,\"[-6,5]\"\n"
        );
        let roots = roots_csv(&reports).unwrap();
        let mut lines = roots.lines();
        assert_eq!(lines.next(), Some("weight,re,im"));
        assert_eq!(lines.next(), Some("5,1.200000000000,0.000000000000"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn csv_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let reports = singular_polynomials(5, Level::FdsHoffman, None).unwrap();
        let spath = dir.path().join("singular.csv");
        let rpath = dir.path().join("roots.csv");
        export_singular_csv(&reports, &spath).unwrap();
        export_roots_csv(&reports, &rpath).unwrap();
        assert_eq!(std::fs::read_to_string(&spath).unwrap(), singular_csv(&reports));
        assert!(std::fs::read_to_string(&rpath).unwrap().starts_with("weight,re,im\n"));
    }
}
