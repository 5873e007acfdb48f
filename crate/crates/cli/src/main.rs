//! zmzv: exact zinbiel-algebra computations — half-shuffle expansions,
//! freeness certificates, double-shuffle quotients, and the singular locus
//! of the two-generator parametric family.

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use zmzv_core::arith::{complex_roots, parse_rat, Coeff, Rat};
use zmzv_core::echelon::{EchelonSpace, WordOrder};
use zmzv_core::error::{Error, Result};
use zmzv_core::freeness::{freeness_probe, occurrence_matrix, verify_triangular, Orientation};
use zmzv_core::quotient::{
    b_table, check_nonsingular_points, degenerate_image_dims, export_roots_csv,
    export_singular_csv, singular_polynomials,
};
use zmzv_core::relations::{echelonize, quotient_dims, Level, RelationFile};
use zmzv_core::words::{Alphabet, Composition, Dialect, TwoThreeWord};
use zmzv_core::zinbiel::{
    expand_two_three, half_shuffle, render_terms, shuffle, Generators, LinComb,
};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_level(s: &str) -> std::result::Result<Level, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "zmzv",
    version,
    about = "Exact zinbiel-algebra engine: expansions, freeness certificates, quotient tables"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Relation backend: fds, fds_hoffman, or eds_T
    #[arg(long, global = true, value_parser = parse_level, default_value = "fds_hoffman")]
    level: Level,

    /// Cache directory for echelonized relation spaces
    /// (default: $ZMZV_CACHE, then ./.zmzv-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for randomized property runs; every command here is
    /// deterministic, the flag is accepted for interface stability
    #[arg(long, global = true, default_value_t = 24601)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a {2,3}-word into its ζ-line
    Expand {
        /// The word, e.g. 23 or 2,3
        word: String,
        /// "symbolic" or a rational value for u (v = 1 − u)
        #[arg(long, default_value = "symbolic", conflicts_with = "degenerate", allow_hyphen_values = true)]
        u: String,
        /// Expand at the degenerate point (u, v) = (1, −1)
        #[arg(long)]
        degenerate: bool,
    },
    /// Half-shuffle product of two words
    Hs {
        a: String,
        b: String,
        /// Comma-separated alphabet letters (default 0,1)
        #[arg(long, allow_hyphen_values = true)]
        alphabet: Option<String>,
    },
    /// Shuffle product of two words
    Shuffle {
        a: String,
        b: String,
        /// Comma-separated alphabet letters (default 0,1)
        #[arg(long, allow_hyphen_values = true)]
        alphabet: Option<String>,
    },
    /// Triangularity certificates for one dialect, or a generic rank probe
    #[command(group(ArgGroup::new("mode").required(true).args(["dialect", "gens"])))]
    Freeness {
        /// Occurrence-matrix dialect: 100 or 110
        #[arg(long)]
        dialect: Option<String>,
        /// Comma-separated generator words for the rank probe
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
        /// Comma-separated alphabet letters (default 0,1)
        #[arg(long, allow_hyphen_values = true)]
        alphabet: Option<String>,
        /// Max k+ℓ (dialect mode) or max total weight (probe mode)
        #[arg(long)]
        max: usize,
    },
    /// Quotient dimensions per weight against the reference sequence
    Dims {
        #[arg(long)]
        max: usize,
    },
    /// ζ-lines of every {2,3}-word of weight 2..=max
    Btable {
        #[arg(long)]
        max: usize,
    },
    /// New singular-determinant factors per weight
    Singular {
        #[arg(long)]
        max: usize,
        /// Write the new factors as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the roots of the new factors as CSV
        #[arg(long)]
        roots_csv: Option<PathBuf>,
        /// Comma-separated rational points to test against every new factor
        #[arg(long, allow_hyphen_values = true)]
        check_points: Option<String>,
    },
    /// Image ranks at the degenerate point (u, v) = (1, −1)
    Degenerate {
        #[arg(long)]
        max: usize,
    },
    /// Write one weight's echelonized relation space to a JSON file
    RelationsExport {
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild a relation space from a file; optionally reduce a word by it
    RelationsImport {
        #[arg(long)]
        file: PathBuf,
        /// Admissible word to reduce onto the file's quotient basis
        #[arg(long)]
        reduce: Option<String>,
    },
    /// Roots of the new singular factors
    Roots {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // build_global fails only if a pool already exists; nothing here
        // builds one earlier
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if cli.format == Format::Json {
                println!("{}", serde_json::json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("ZMZV_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".zmzv-cache"))
}

fn parse_alphabet(letters: &Option<String>) -> Result<Alphabet> {
    match letters {
        Some(s) => Alphabet::parse_list(s),
        None => Ok(Alphabet::binary()),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let _ = cli.seed;
    match &cli.cmd {
        Cmd::Expand { word, u, degenerate } => cmd_expand(cli, word, u, *degenerate),
        Cmd::Hs { a, b, alphabet } => cmd_product(cli, a, b, alphabet, true),
        Cmd::Shuffle { a, b, alphabet } => cmd_product(cli, a, b, alphabet, false),
        Cmd::Freeness {
            dialect,
            gens,
            alphabet,
            max,
        } => cmd_freeness(cli, dialect, gens, alphabet, *max),
        Cmd::Dims { max } => cmd_dims(cli, *max),
        Cmd::Btable { max } => cmd_btable(cli, *max),
        Cmd::Singular {
            max,
            csv,
            roots_csv,
            check_points,
        } => cmd_singular(cli, *max, csv, roots_csv, check_points),
        Cmd::Degenerate { max } => cmd_degenerate(cli, *max),
        Cmd::RelationsExport { weight, out } => cmd_export(cli, *weight, out),
        Cmd::RelationsImport { file, reduce } => cmd_import(cli, file, reduce),
        Cmd::Roots { max, csv } => cmd_roots(cli, *max, csv),
    }
}

fn zeta_terms<R: Coeff>(x: &LinComb<R>) -> Result<Vec<(Composition, R)>> {
    let mut terms: Vec<(Composition, R)> = x
        .iter()
        .map(|(w, c)| Ok((Composition::from_word(*w)?, c.clone())))
        .collect::<Result<_>>()?;
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(terms)
}

fn zeta_line<R: Coeff>(label: &TwoThreeWord, terms: &[(Composition, R)]) -> String {
    let rhs = render_terms(
        terms.iter().map(|(c, p)| (p.kind(), format!("ζ{c}"))),
        "",
    );
    format!("B({}) = {rhs}", label.comma_form())
}

fn print_expansion<R: Coeff>(cli: &Cli, w: &TwoThreeWord, x: &LinComb<R>) -> Result<u8> {
    let terms = zeta_terms(x)?;
    let line = zeta_line(w, &terms);
    match cli.format {
        Format::Text => println!("{line}"),
        Format::Json => {
            let terms: Vec<_> = terms
                .iter()
                .map(|(c, p)| {
                    serde_json::json!({
                        "composition": c.parts(),
                        "coefficient": p.to_string(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "word": w.comma_form(),
                    "rendered": line,
                    "terms": terms,
                })
            );
        }
    }
    Ok(0)
}

fn cmd_expand(cli: &Cli, word: &str, u: &str, degenerate: bool) -> Result<u8> {
    let w = TwoThreeWord::parse(word)?;
    if degenerate {
        let gens = Generators::degenerate();
        print_expansion(cli, &w, &expand_two_three(&w, &gens)?)
    } else if u == "symbolic" {
        let gens = Generators::symbolic();
        print_expansion(cli, &w, &expand_two_three(&w, &gens)?)
    } else {
        let gens = Generators::at_point(&parse_rat(u)?);
        print_expansion(cli, &w, &expand_two_three(&w, &gens)?)
    }
}

fn cmd_product(
    cli: &Cli,
    a: &str,
    b: &str,
    alphabet: &Option<String>,
    half: bool,
) -> Result<u8> {
    let alphabet = parse_alphabet(alphabet)?;
    let x = LinComb::<Rat>::unit_word(alphabet.parse_word(a)?);
    let y = LinComb::<Rat>::unit_word(alphabet.parse_word(b)?);
    let prod = if half {
        half_shuffle(&x, &y)?
    } else {
        shuffle(&x, &y)?
    };
    match cli.format {
        Format::Text => println!("{}", prod.render(&alphabet)),
        Format::Json => {
            let terms: Vec<_> = prod
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "word": alphabet.render_word(*w),
                        "coefficient": c.to_string(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "rendered": prod.render(&alphabet),
                    "terms": terms,
                })
            );
        }
    }
    Ok(0)
}

fn cmd_freeness(
    cli: &Cli,
    dialect: &Option<String>,
    gens: &Option<String>,
    alphabet: &Option<String>,
    max: usize,
) -> Result<u8> {
    if let Some(d) = dialect {
        let d: Dialect = d.parse()?;
        let orientation = match d {
            Dialect::D100 => Orientation::Upper,
            Dialect::D110 => Orientation::Lower,
        };
        let mut rows = Vec::new();
        let mut ok = true;
        for s in 1..=max {
            for threes in 0..=s {
                let twos = s - threes;
                let m = occurrence_matrix(twos, threes, d)?;
                let rep = verify_triangular(&m, orientation);
                ok &= rep.ok;
                rows.push((twos, threes, rep));
            }
        }
        match cli.format {
            Format::Text => {
                println!("dialect {}, max k+ℓ = {max}", d.as_str());
                if ok {
                    match d {
                        Dialect::D100 => println!("triangular: upper, diagonal: all 1"),
                        Dialect::D110 => println!("triangular: lower, diagonal: block products"),
                    }
                } else {
                    for (twos, threes, rep) in &rows {
                        if let Some((w, wp)) = &rep.counterexample {
                            println!("FAIL bidegree ({twos},{threes}): entry ({w}, {wp})");
                        }
                    }
                }
            }
            Format::Json => {
                let bidegrees: Vec<_> = rows
                    .iter()
                    .map(|(twos, threes, rep)| {
                        serde_json::json!({
                            "twos": twos,
                            "threes": threes,
                            "ok": rep.ok,
                            "counterexample": rep
                                .counterexample
                                .as_ref()
                                .map(|(w, wp)| vec![w.to_string(), wp.to_string()]),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "dialect": d.as_str(),
                        "max": max,
                        "orientation": match orientation {
                            Orientation::Upper => "upper",
                            Orientation::Lower => "lower",
                        },
                        "ok": ok,
                        "bidegrees": bidegrees,
                    })
                );
            }
        }
        Ok(if ok { 0 } else { 1 })
    } else {
        let alphabet = parse_alphabet(alphabet)?;
        let gens: Vec<LinComb<Rat>> = gens
            .as_deref()
            .unwrap()
            .split(',')
            .map(|s| Ok(LinComb::unit_word(alphabet.parse_word(s.trim())?)))
            .collect::<Result<_>>()?;
        let report = freeness_probe(&alphabet, &gens, max)?;
        match cli.format {
            Format::Text => {
                println!("generators: {}", report.generators.join(", "));
                println!("{:<7} {:<9} {:<5} {}", "weight", "expected", "rank", "deficiency");
                for row in &report.per_weight {
                    println!(
                        "{:<7} {:<9} {:<5} {}",
                        row.weight, row.expected, row.rank, row.deficiency
                    );
                }
            }
            Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
        }
        Ok(0)
    }
}

fn cmd_dims(cli: &Cli, max: usize) -> Result<u8> {
    let cache = cache_dir(cli);
    let rows = quotient_dims(max, cli.level, Some(&cache))?;
    let ok = rows.iter().all(|r| r.pass);
    match cli.format {
        Format::Text => {
            println!("relation backend: {}", cli.level);
            println!("{:<7} {:<5} {:<9} {}", "weight", "dim", "expected", "status");
            for r in &rows {
                let mut status = if r.pass { "PASS" } else { "FAIL" }.to_string();
                if r.escalated {
                    status.push_str(" (escalated to eds_T)");
                }
                println!("{:<7} {:<5} {:<9} {}", r.weight, r.dim, r.expected, status);
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::json!({ "backend": cli.level.as_str(), "rows": rows })
        ),
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_btable(cli: &Cli, max: usize) -> Result<u8> {
    if max < 2 {
        return Err(Error::WeightTooSmall { min: 2, got: max });
    }
    let mut rows = Vec::new();
    for n in 2..=max {
        rows.extend(b_table(n)?);
    }
    match cli.format {
        Format::Text => {
            for row in &rows {
                println!("{}", row.render());
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    let terms: Vec<_> = row
                        .terms
                        .iter()
                        .map(|(c, p)| {
                            serde_json::json!({
                                "composition": c.parts(),
                                "coefficient": p.to_string(),
                            })
                        })
                        .collect();
                    serde_json::json!({
                        "word": row.word.comma_form(),
                        "weight": row.word.weight(),
                        "rendered": row.render(),
                        "terms": terms,
                    })
                })
                .collect();
            println!("{}", serde_json::json!({ "rows": rows }));
        }
    }
    Ok(0)
}

fn cmd_singular(
    cli: &Cli,
    max: usize,
    csv: &Option<PathBuf>,
    roots_csv: &Option<PathBuf>,
    check_points: &Option<String>,
) -> Result<u8> {
    let cache = cache_dir(cli);
    let reports = singular_polynomials(max, cli.level, Some(&cache))?;
    let points: Vec<Rat> = match check_points {
        Some(s) => s.split(',').map(|p| parse_rat(p.trim())).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let checks = check_nonsingular_points(&reports, &points);
    let ok = checks.iter().all(|c| c.nonzero);
    if let Some(path) = csv {
        export_singular_csv(&reports, path)?;
    }
    if let Some(path) = roots_csv {
        export_roots_csv(&reports, path)?;
    }
    match cli.format {
        Format::Text => {
            println!("relation backend: {}", cli.level);
            for r in &reports {
                match &r.new_factor {
                    Some(f) => println!("weight {}: {f}", r.weight),
                    None => println!("weight {}: no new factor", r.weight),
                }
            }
            for p in &points {
                let zeros: Vec<String> = checks
                    .iter()
                    .filter(|c| c.point == *p && !c.nonzero)
                    .map(|c| c.weight.to_string())
                    .collect();
                if zeros.is_empty() {
                    println!("check u = {p}: nonzero for all new factors");
                } else {
                    println!("check u = {p}: ZERO at weight {}", zeros.join(", "));
                }
            }
        }
        Format::Json => {
            let weights: Vec<_> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "weight": r.weight,
                        "new_factor": r.new_factor.as_ref().map(|f| {
                            serde_json::json!({
                                "coefficients": f.coeff_strings(),
                                "display": f.to_string(),
                            })
                        }),
                        "stripped": r
                            .stripped
                            .iter()
                            .map(|(w, f)| {
                                serde_json::json!({
                                    "weight": w,
                                    "factor": f.coeff_strings(),
                                })
                            })
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let checks: Vec<_> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "point": c.point.to_string(),
                        "weight": c.weight,
                        "nonzero": c.nonzero,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "backend": cli.level.as_str(),
                    "weights": weights,
                    "checks": checks,
                })
            );
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_degenerate(cli: &Cli, max: usize) -> Result<u8> {
    let cache = cache_dir(cli);
    let rows = degenerate_image_dims(max, cli.level, Some(&cache))?;
    match cli.format {
        Format::Text => {
            println!("relation backend: {}", cli.level);
            println!("{:<7} {}", "weight", "rank");
            for (n, rank) in &rows {
                println!("{:<7} {}", n, rank);
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(n, rank)| serde_json::json!({ "weight": n, "rank": rank }))
                .collect();
            println!(
                "{}",
                serde_json::json!({ "backend": cli.level.as_str(), "rows": rows })
            );
        }
    }
    Ok(0)
}

fn cmd_export(cli: &Cli, weight: usize, out: &PathBuf) -> Result<u8> {
    let cache = cache_dir(cli);
    let space = echelonize(weight, cli.level, WordOrder::Standard, Some(&cache))?;
    let file = RelationFile::from_space(&space);
    file.save(out)?;
    match cli.format {
        Format::Text => println!(
            "wrote weight-{weight} relation space to {} (rank {}, dimension {})",
            out.display(),
            space.rank(),
            space.dimension()
        ),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "weight": weight,
                "rank": space.rank(),
                "dimension": space.dimension(),
                "path": out.display().to_string(),
            })
        ),
    }
    Ok(0)
}

fn cmd_import(cli: &Cli, file: &PathBuf, reduce: &Option<String>) -> Result<u8> {
    let parsed = RelationFile::load(file)?;
    let rows = parsed.to_lincombs()?;
    let space = EchelonSpace::from_lincombs(parsed.weight, WordOrder::Standard, &rows)?;
    let alphabet = Alphabet::binary();
    let basis: Vec<String> = space
        .basis()
        .iter()
        .map(|w| alphabet.render_word(*w))
        .collect();
    let reduced = match reduce {
        Some(word) => {
            let w = alphabet.parse_word(word)?;
            Some((word.clone(), space.reduce(&LinComb::<Rat>::unit_word(w))?))
        }
        None => None,
    };
    match cli.format {
        Format::Text => {
            println!(
                "weight {}: rank {}, dimension {}",
                space.weight(),
                space.rank(),
                space.dimension()
            );
            println!("basis: {}", basis.join(", "));
            if let Some((word, red)) = &reduced {
                println!("{word} ≡ {}", red.render(&alphabet));
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "weight": space.weight(),
                    "rank": space.rank(),
                    "dimension": space.dimension(),
                    "basis": basis,
                    "reduced": reduced.as_ref().map(|(word, red)| {
                        serde_json::json!({
                            "word": word,
                            "rendered": red.render(&alphabet),
                            "terms": red
                                .iter()
                                .map(|(w, c)| {
                                    serde_json::json!({
                                        "word": alphabet.render_word(*w),
                                        "coefficient": c.to_string(),
                                    })
                                })
                                .collect::<Vec<_>>(),
                        })
                    }),
                })
            );
        }
    }
    Ok(0)
}

fn cmd_roots(cli: &Cli, max: usize, csv: &Option<PathBuf>) -> Result<u8> {
    let cache = cache_dir(cli);
    let reports = singular_polynomials(max, cli.level, Some(&cache))?;
    if let Some(path) = csv {
        export_roots_csv(&reports, path)?;
    }
    let mut roots = Vec::new();
    for r in &reports {
        let Some(f) = &r.new_factor else { continue };
        if f.degree().map_or(true, |d| d == 0) {
            continue;
        }
        for z in complex_roots(f, 1e-12)? {
            roots.push((r.weight, z.re, z.im));
        }
    }
    match cli.format {
        Format::Text => {
            println!("relation backend: {}", cli.level);
            println!("{:<7} {:<16} {}", "weight", "re", "im");
            for (w, re, im) in &roots {
                println!("{:<7} {:<16} {}", w, format!("{re:.12}"), format!("{im:.12}"));
            }
        }
        Format::Json => {
            let rows: Vec<_> = roots
                .iter()
                .map(|(w, re, im)| serde_json::json!({ "weight": w, "re": re, "im": im }))
                .collect();
            println!(
                "{}",
                serde_json::json!({ "backend": cli.level.as_str(), "roots": rows })
            );
        }
    }
    Ok(0)
}
