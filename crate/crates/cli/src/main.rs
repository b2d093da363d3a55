//! `meandrics`: command-line front end for the exact computations in `meandrics-core`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{json, Value};

use meandrics_core::algebra::{parse_rational, LaurentN};
use meandrics_core::exponents::{exponent_point, table_two};
use meandrics_core::hirota::{genus_zero_system, omega_polynomials_detailed, z_series, zndetf_oracle};
use meandrics_core::limits::{WorkLimit, DEFAULT_MAX_WORK, MAX_WORK_ENV};
use meandrics_core::matrix_one::{
    finite_n_free_energy, planar_free_energy, planar_moments, planar_r_series, quartic_critical, EvenPotential,
};
use meandrics_core::meander::{
    genus_meander_polynomials, meander_polynomial, semimeander_polynomial, semimeander_table_partial,
    SemiMeanderTable,
};
use meandrics_core::multiseries::MultiSeries;
use meandrics_core::planar_words::{meander_poly_via_words, semimeander_poly_via_words};
use meandrics_core::seqfit::{fit_power_law, fit_power_law_rational};
use meandrics_core::temperley_lieb::{
    meander_determinant_at, meander_determinant_direct, meander_determinant_formula, meander_determinant_formula_at,
};
use meandrics_core::wick::{connected_free_energy, gaussian_average, PropagatorTable, StarSystem};
use meandrics_core::Error;

#[derive(Parser, Debug)]
#[command(name = "meandrics", version, about = "Exact meander and matrix-model combinatorics")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Work budget for enumerations.
    #[arg(long, global = true, env = MAX_WORK_ENV, default_value_t = DEFAULT_MAX_WORK)]
    max_work: u64,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meander polynomials m_{2n}(q) by number of road components.
    Meander(MeanderArgs),
    /// Semi-meander polynomials and the component-count table.
    Semimeander(SemiArgs),
    /// Semi-meander counts by order and number of components.
    Table1(Table1Args),
    /// Meander (Gram) determinant of the Temperley-Lieb arch basis.
    TlDet(TlArgs),
    /// Meander sums through planar averages of matrix words.
    Words(WordsArgs),
    /// Gaussian averages and connected free energies over fatgraph pairings.
    Wick(WickArgs),
    /// One-matrix model: planar and finite-N solutions.
    Onematrix(OneMatrixArgs),
    /// Configuration exponents from the KPZ relation.
    Exponents(ExponentArgs),
    /// Tricolored triangulations through the Hirota recursion.
    Hirota(HirotaArgs),
    /// Power-law fits of integer sequences.
    Fit(FitArgs),
}

#[derive(Args, Debug)]
struct MeanderArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Split all-genus meanders by genus.
    #[arg(long)]
    genus: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SemiAction {
    Poly,
    Table1,
}

#[derive(Args, Debug)]
struct SemiArgs {
    #[arg(value_enum, default_value_t = SemiAction::Poly)]
    action: SemiAction,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Also split the counts by winding.
    #[arg(long)]
    winding: bool,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[arg(long)]
    n_max: usize,
    #[arg(long)]
    winding: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TlMode {
    Direct,
    Formula,
    Both,
}

#[derive(Args, Debug)]
struct TlArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = TlMode::Both)]
    mode: TlMode,
    /// Evaluate at this rational value instead of returning the polynomial.
    #[arg(long)]
    q: Option<String>,
}

#[derive(Args, Debug)]
struct WordsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    q: usize,
    /// Semi-meanders instead of meanders.
    #[arg(long)]
    semi: bool,
}

#[derive(Args, Debug)]
struct WickArgs {
    /// Star system as JSON, e.g. `[[1,1,1,1]]`.
    #[arg(long, conflicts_with = "valencies")]
    stars: Option<String>,
    /// Propagator table as JSON, e.g. `{"entries": [["1"]]}`.
    #[arg(long)]
    propagator: Option<String>,
    /// Valencies of the one-matrix couplings for the connected free energy.
    #[arg(long, value_delimiter = ',')]
    valencies: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    order: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OneAction {
    F0,
    R,
    Moments,
    Finite,
    Critical,
}

#[derive(Args, Debug)]
struct OneMatrixArgs {
    #[arg(value_enum, default_value_t = OneAction::F0)]
    action: OneAction,
    /// Valencies of the even couplings.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    valencies: Vec<u32>,
    #[arg(long, default_value_t = 6)]
    order: u32,
    /// Matrix size for `finite`, moment index for `moments`.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[arg(long)]
    table2: bool,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum HirotaAction {
    /// The polynomial ω_m(a, b, n).
    Omega {
        #[arg(long)]
        m: usize,
    },
    /// Genus-zero free energy in t at fixed vertex weights.
    F0 {
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
        #[arg(long)]
        x3: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Z_n(a, b) as a series in s = t/N.
    Z {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Also evaluate the direct determinant expansion.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args, Debug)]
struct HirotaArgs {
    #[command(subcommand)]
    action: HirotaAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Builtin {
    /// m_{2n}(1) = catalan(n)^2.
    CatalanSquared,
    /// One-component semi-meanders.
    Semimeander,
    /// Planar quartic map coefficients f_{0,n}.
    QuarticMaps,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// CSV file of terms (last column), or `-` for standard input.
    #[arg(long, conflicts_with = "sequence")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    sequence: Option<Builtin>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    /// Write the sequence instead of fitting it.
    #[arg(long)]
    emit: bool,
}

/// Failure with its process exit code, and any output produced before it.
struct Failure {
    code: u8,
    message: String,
    partial: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => 3,
            Error::Consistency(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            partial: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
        partial: None,
    }
}

type Out = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match WorkLimit::new(cli.max_work) {
        Ok(limit) => pool.install(|| run(&cli, &limit)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(text) => match emit(&cli, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(f) => {
            if let Some(text) = &f.partial {
                if let Err(e) = emit(&cli, text) {
                    eprintln!("error: {e}");
                }
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli, limit: &WorkLimit) -> Out {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Meander(a) => meander(a, fmt(Format::Csv), limit),
        Command::Semimeander(a) => match a.action {
            SemiAction::Poly => semimeander(a, fmt(Format::Csv), limit),
            SemiAction::Table1 => {
                let n_max = a.n_max.or(a.n).ok_or_else(|| invalid("table1 needs --n-max"))?;
                table1(n_max, a.winding, fmt(Format::Csv), limit)
            }
        },
        Command::Table1(a) => table1(a.n_max, a.winding, fmt(Format::Csv), limit),
        Command::TlDet(a) => tl_det(a, fmt(Format::Csv), limit),
        Command::Words(a) => words(a, fmt(Format::Csv), limit),
        Command::Wick(a) => wick(a, fmt(Format::Json), limit),
        Command::Onematrix(a) => onematrix(a, fmt(Format::Csv)),
        Command::Exponents(a) => exponents(a, cli.format),
        Command::Hirota(a) => hirota(&a.action, cli.format),
        Command::Fit(a) => fit(a, fmt(Format::Json), limit),
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

/// `x` rounded to 15 significant digits.
fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

fn fmt_f64(x: f64) -> String {
    round15(x).to_string()
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round15(n.as_f64().expect("float"))),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn rational_cells(r: &BigRational) -> String {
    format!("{},{}", r.numer(), r.denom())
}

fn rational_json(r: &BigRational) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

fn laurent_json(p: &LaurentN) -> Value {
    Value::Array(p.to_triples().into_iter().map(|(e, n, d)| json!([e, n, d])).collect())
}

fn parse_q(s: &str) -> std::result::Result<BigRational, Failure> {
    parse_rational(s).ok_or_else(|| invalid(format!("cannot parse {s:?} as a rational number")))
}

fn orders(n: Option<usize>, n_max: Option<usize>) -> std::result::Result<Vec<usize>, Failure> {
    match (n, n_max) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(m)) => Ok((1..=m).collect()),
        (Some(_), Some(_)) => Err(invalid("give either --n or --n-max, not both")),
        (None, None) => Err(invalid("missing --n or --n-max")),
    }
}

fn polynomial_rows(
    ns: &[usize],
    fmt: Format,
    f: impl Fn(usize) -> meandrics_core::Result<meandrics_core::meander::ComponentPolynomial>,
) -> Out {
    let mut csv = String::from("n,k,count\n");
    let mut rows = Vec::new();
    for &n in ns {
        let p = f(n)?;
        let mut coeffs = serde_json::Map::new();
        for (k, c) in p.coeffs() {
            writeln!(csv, "{n},{k},{c}").unwrap();
            coeffs.insert(k.to_string(), json!(c.to_string()));
        }
        rows.push(json!({"n": n, "coefficients": coeffs, "total": p.total().to_string()}));
    }
    Ok(match fmt {
        Format::Csv => csv,
        Format::Json => json_text(&Value::Array(rows)),
    })
}

fn meander(a: &MeanderArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let ns = orders(a.n, a.n_max)?;
    if !a.genus {
        return polynomial_rows(&ns, fmt, |n| meander_polynomial(n, limit));
    }
    let mut csv = String::from("n,g,k,count\n");
    let mut rows = Vec::new();
    for &n in &ns {
        for (g, p) in genus_meander_polynomials(n, limit)? {
            let mut coeffs = serde_json::Map::new();
            for (k, c) in p.coeffs() {
                writeln!(csv, "{n},{g},{k},{c}").unwrap();
                coeffs.insert(k.to_string(), json!(c.to_string()));
            }
            rows.push(json!({"n": n, "genus": g, "coefficients": coeffs}));
        }
    }
    Ok(match fmt {
        Format::Csv => csv,
        Format::Json => json_text(&Value::Array(rows)),
    })
}

fn semimeander(a: &SemiArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let ns = orders(a.n, a.n_max)?;
    polynomial_rows(&ns, fmt, |n| semimeander_polynomial(n, limit))
}

fn table_text(t: &SemiMeanderTable, rows_upto: usize, winding: bool, fmt: Format) -> String {
    match (fmt, winding) {
        (Format::Csv, true) => {
            let mut s = String::from("n,k,w,count\n");
            for (n, k, w, c) in t.rows().filter(|r| r.0 <= rows_upto) {
                writeln!(s, "{n},{k},{w},{c}").unwrap();
            }
            s
        }
        (Format::Csv, false) => {
            let mut s = String::from("n,k,count\n");
            for n in 1..=rows_upto {
                for k in 1..=n {
                    writeln!(s, "{n},{k},{}", t.by_components(n, k)).unwrap();
                }
            }
            s
        }
        (Format::Json, _) => {
            let rows: Vec<Value> = (1..=rows_upto)
                .map(|n| {
                    let counts: Vec<String> = (1..=n).map(|k| t.by_components(n, k).to_string()).collect();
                    let mut row = json!({"n": n, "by_components": counts, "total": t.total(n).to_string()});
                    if winding {
                        let w: Vec<Value> = t
                            .rows()
                            .filter(|r| r.0 == n)
                            .map(|(_, k, w, c)| json!([k, w, c.to_string()]))
                            .collect();
                        row["by_components_and_winding"] = Value::Array(w);
                    }
                    row
                })
                .collect();
            json_text(&Value::Array(rows))
        }
    }
}

fn table1(n_max: usize, winding: bool, fmt: Format, limit: &WorkLimit) -> Out {
    if n_max == 0 {
        return Err(invalid("--n-max must be at least 1"));
    }
    let (table, err) = semimeander_table_partial(n_max, limit);
    match err {
        None => Ok(table_text(&table, n_max, winding, fmt)),
        Some(e) => {
            let mut f: Failure = e.into();
            let complete = table.n_max();
            if complete > 0 {
                f.partial = Some(table_text(&table, complete, winding, fmt));
                f.message = format!("{}; rows up to n = {complete} are complete", f.message);
            }
            Err(f)
        }
    }
}

fn tl_det(a: &TlArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let modes: Vec<&str> = match a.mode {
        TlMode::Direct => vec!["direct"],
        TlMode::Formula => vec!["formula"],
        TlMode::Both => vec!["direct", "formula"],
    };
    let mut csv = String::from("mode,determinant\n");
    let mut obj = serde_json::Map::new();
    obj.insert("n".into(), json!(a.n));
    if let Some(qs) = &a.q {
        let q = parse_q(qs)?;
        obj.insert("q".into(), json!(q.to_string()));
        for mode in modes {
            let d = match mode {
                "direct" => meander_determinant_at(a.n, &q, limit)?,
                _ => meander_determinant_formula_at(a.n, &q)?,
            };
            writeln!(csv, "{mode},{d}").unwrap();
            obj.insert(mode.into(), json!(d.to_string()));
        }
    } else {
        for mode in modes {
            let d = match mode {
                "direct" => meander_determinant_direct(a.n, limit)?,
                _ => meander_determinant_formula(a.n)?,
            };
            writeln!(csv, "{mode},{}", d.display_with("q")).unwrap();
            obj.insert(mode.into(), laurent_json(&d));
        }
    }
    Ok(match fmt {
        Format::Csv => csv,
        Format::Json => json_text(&Value::Object(obj)),
    })
}

fn words(a: &WordsArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let ns = orders(a.n, a.n_max)?;
    let mut csv = String::from("n,q,words,arches\n");
    let mut rows = Vec::new();
    let q = BigInt::from(a.q);
    for n in ns {
        let (via_words, via_arches) = if a.semi {
            (semimeander_poly_via_words(n, a.q, limit)?, semimeander_polynomial(n, limit)?.eval(&q))
        } else {
            (meander_poly_via_words(n, a.q, limit)?, meander_polynomial(n, limit)?.eval(&q))
        };
        writeln!(csv, "{n},{},{via_words},{via_arches}", a.q).unwrap();
        rows.push(json!({"n": n, "q": a.q, "words": via_words.to_string(), "arches": via_arches.to_string()}));
    }
    Ok(match fmt {
        Format::Csv => csv,
        Format::Json => json_text(&Value::Array(rows)),
    })
}

fn wick(a: &WickArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let p = match &a.propagator {
        Some(text) => PropagatorTable::from_json(text)?,
        None => PropagatorTable::single(),
    };
    if let Some(text) = &a.stars {
        let stars: Vec<Vec<usize>> =
            serde_json::from_str(text).map_err(|e| invalid(format!("bad --stars JSON: {e}")))?;
        let avg = gaussian_average(&StarSystem::new(stars), &p, limit)?;
        return Ok(match fmt {
            Format::Json => json_text(&json!({"average": laurent_json(&avg), "text": avg.display_with("N")})),
            Format::Csv => {
                let mut s = String::from("n_power,numerator,denominator\n");
                for (e, n, d) in avg.to_triples() {
                    writeln!(s, "{e},{n},{d}").unwrap();
                }
                s
            }
        });
    }
    if a.valencies.is_empty() {
        return Err(invalid("give --stars or --valencies"));
    }
    let f = connected_free_energy(&a.valencies, &p, a.order, limit)?;
    let mut csv = String::from("exponents,n_power,numerator,denominator\n");
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        for (np, n, d) in c.to_triples() {
            writeln!(csv, "{key},{np},{n},{d}").unwrap();
        }
        terms.push(json!({"exponents": e, "coefficient": laurent_json(c), "text": c.display_with("N")}));
    }
    Ok(match fmt {
        Format::Csv => csv,
        Format::Json => json_text(&json!({"valencies": a.valencies, "order": a.order, "terms": terms})),
    })
}

fn series_rows(s: &MultiSeries<BigRational>, fmt: Format, extra: Value) -> String {
    match fmt {
        Format::Csv => {
            let mut out = String::from("exponents,numerator,denominator\n");
            for (e, c) in s.terms() {
                let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                writeln!(out, "{key},{}", rational_cells(c)).unwrap();
            }
            out
        }
        Format::Json => {
            let terms: Vec<Value> = s
                .terms()
                .map(|(e, c)| json!({"exponents": e, "coefficient": rational_json(c)}))
                .collect();
            let mut v = extra;
            v["terms"] = Value::Array(terms);
            json_text(&v)
        }
    }
}

fn onematrix(a: &OneMatrixArgs, fmt: Format) -> Out {
    let pot = EvenPotential::new(a.valencies.clone())?;
    let meta = json!({"valencies": a.valencies, "order": a.order});
    match a.action {
        OneAction::F0 => {
            let f0 = planar_free_energy(&pot, a.order)?;
            if pot.nvars() == 1 && fmt == Format::Csv {
                let mut s = String::from("n,numerator,denominator\n");
                for k in 1..=a.order {
                    writeln!(s, "{k},{}", rational_cells(&f0.coeff(&[k]))).unwrap();
                }
                return Ok(s);
            }
            Ok(series_rows(&f0, fmt, meta))
        }
        OneAction::R => Ok(series_rows(planar_r_series(&pot, a.order).u(), fmt, meta)),
        OneAction::Moments => {
            let n = a.n.ok_or_else(|| invalid("moments need --n"))?;
            Ok(series_rows(&planar_moments(&pot, n as u32, a.order), fmt, meta))
        }
        OneAction::Finite => {
            let n = a.n.ok_or_else(|| invalid("finite-N free energy needs --n"))?;
            Ok(series_rows(&finite_n_free_energy(&pot, n, a.order)?, fmt, meta))
        }
        OneAction::Critical => {
            if a.valencies != [4] {
                return Err(invalid("critical analysis is available for the quartic potential only"));
            }
            let qc = quartic_critical(a.order)?;
            let fit = if qc.coefficients.len() >= 6 {
                let f = fit_power_law_rational(&qc.coefficients, 1)?;
                json!({"growth": f.r_estimate, "exponent": f.alpha_estimate})
            } else {
                Value::Null
            };
            let v = json!({
                "g_c": qc.g_c.to_string(),
                "singular_exponent": qc.singular_exponent.to_string(),
                "coefficients": qc.coefficients.iter().map(rational_json).collect::<Vec<_>>(),
                "fit": fit,
            });
            Ok(match fmt {
                Format::Json => json_text(&round_floats(v)),
                Format::Csv => {
                    let mut s = String::from("n,numerator,denominator\n");
                    for (i, c) in qc.coefficients.iter().enumerate() {
                        writeln!(s, "{},{}", i + 1, rational_cells(c)).unwrap();
                    }
                    s
                }
            })
        }
    }
}

fn exponents(a: &ExponentArgs, fmt: Option<Format>) -> Out {
    if a.table2 {
        let rows = table_two();
        return Ok(match fmt.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut s = String::from("q,f,R_q1,R_q1_exact,alpha_q1,alpha_q1_exact,R_q_estimate\n");
                for r in rows {
                    writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        r.q_exact,
                        r.f_exact,
                        fmt_f64(r.r_q1),
                        r.r_q1_exact,
                        fmt_f64(r.alpha_q1),
                        r.alpha_q1_exact,
                        r.r_q_estimate
                    )
                    .unwrap();
                }
                s
            }
            Format::Json => json_text(&round_floats(serde_json::to_value(rows).expect("serialisable"))),
        });
    }
    let (q, p) = match (a.q, a.p) {
        (Some(q), Some(p)) => (q, p),
        _ => return Err(invalid("give --table2 or both --q and --p")),
    };
    let rec = exponent_point(q, p)?;
    let v = round_floats(serde_json::to_value(&rec).expect("serialisable"));
    Ok(match fmt.unwrap_or(Format::Json) {
        Format::Json => json_text(&v),
        Format::Csv => {
            let obj = v.as_object().expect("record");
            let keys: Vec<&String> = obj.keys().collect();
            let vals: Vec<String> = obj
                .values()
                .map(|x| if x.is_null() { String::new() } else { x.to_string() })
                .collect();
            format!("{}\n{}\n", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","), vals.join(","))
        }
    })
}

fn hirota(action: &HirotaAction, fmt: Option<Format>) -> Out {
    match action {
        HirotaAction::Omega { m } => {
            if *m == 0 {
                return Err(invalid("--m must be at least 1"));
            }
            let fits = omega_polynomials_detailed(*m)?;
            let fit = &fits[m - 1];
            if fit.bound_raised {
                eprintln!("warning: ω_{m} needed per-variable degree {}", fit.degree_bound);
            }
            let poly = &fit.polynomial;
            Ok(match fmt {
                None => format!("{poly}\n"),
                Some(Format::Csv) => {
                    let mut s = String::from("a,b,n,numerator,denominator\n");
                    for (&(i, j, k), c) in &poly.coeffs {
                        writeln!(s, "{i},{j},{k},{}", rational_cells(c)).unwrap();
                    }
                    s
                }
                Some(Format::Json) => json_text(&json!({
                    "m": m,
                    "polynomial": poly.to_string(),
                    "terms": poly.coeffs.iter().map(|(&(i, j, k), c)| json!([i, j, k, c.numer().to_string(), c.denom().to_string()])).collect::<Vec<_>>(),
                    "degree_bound": fit.degree_bound,
                })),
            })
        }
        HirotaAction::F0 { x1, x2, x3, order } => {
            let x = [parse_q(x1)?, parse_q(x2)?, parse_q(x3)?];
            let g = genus_zero_system([&x[0], &x[1], &x[2]], *order)?;
            let coeffs: Vec<BigRational> = (1..=*order).map(|m| g.f0.coeff(m).clone()).collect();
            Ok(match fmt.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("m,numerator,denominator\n");
                    for (i, c) in coeffs.iter().enumerate() {
                        writeln!(s, "{},{}", i + 1, rational_cells(c)).unwrap();
                    }
                    s
                }
                Format::Json => json_text(&json!({
                    "x": x.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "relation": "(t d/dt)^2 f0 = F1 F2 F3 / t^2",
                    "f0": coeffs.iter().map(rational_json).collect::<Vec<_>>(),
                })),
            })
        }
        HirotaAction::Z { n, a, b, order, check } => {
            let (a, b) = (parse_q(a)?, parse_q(b)?);
            let z = z_series(*n, &a, &b, *order)?;
            if *check {
                let direct = zndetf_oracle(*n, &a, &b, *order)?;
                if direct != z {
                    return Err(Error::Consistency("recursion and determinant expansion disagree".into()).into());
                }
            }
            Ok(match fmt.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("k,numerator,denominator\n");
                    for (k, c) in z.coeffs().iter().enumerate() {
                        writeln!(s, "{k},{}", rational_cells(c)).unwrap();
                    }
                    s
                }
                Format::Json => json_text(&json!({
                    "n": n, "a": a.to_string(), "b": b.to_string(),
                    "coefficients": z.coeffs().iter().map(rational_json).collect::<Vec<_>>(),
                })),
            })
        }
    }
}

fn read_sequence(path: &PathBuf) -> std::result::Result<Vec<BigRational>, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| invalid(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cell = line.rsplit(',').next().unwrap_or(line).trim();
        match parse_rational(cell) {
            Some(v) => out.push(v),
            None if i == 0 => continue,
            None => return Err(invalid(format!("line {}: {cell:?} is not a number", i + 1))),
        }
    }
    Ok(out)
}

fn builtin_sequence(b: Builtin, n_max: usize, limit: &WorkLimit) -> std::result::Result<(Vec<BigRational>, usize), Failure> {
    let int = |x: BigUint| BigRational::from_integer(x.into());
    Ok(match b {
        Builtin::CatalanSquared => ((1..=n_max as u64).map(|n| int(meandrics_core::arch::catalan(n).pow(2))).collect(), 2),
        Builtin::Semimeander => {
            let t = meandrics_core::meander::semimeander_table(n_max, limit)?;
            // Orders 2, 4, ...: one-component counts oscillate with the parity of n.
            ((2..=n_max).step_by(2).map(|n| int(BigUint::from(t.by_components(n, 1)))).collect(), 2)
        }
        Builtin::QuarticMaps => (quartic_critical(n_max as u32)?.coefficients, 1),
    })
}

fn fit(a: &FitArgs, fmt: Format, limit: &WorkLimit) -> Out {
    let (seq, default_stride) = match (&a.input, a.sequence) {
        (Some(path), None) => (read_sequence(path)?, 1),
        (None, Some(b)) => builtin_sequence(b, a.n_max.ok_or_else(|| invalid("builtin sequences need --n-max"))?, limit)?,
        _ => return Err(invalid("give --input or --sequence")),
    };
    let stride = a.stride.unwrap_or(default_stride);
    if a.emit {
        let mut s = String::from("index,value\n");
        for (i, v) in seq.iter().enumerate() {
            writeln!(s, "{},{v}", i + 1).unwrap();
        }
        return Ok(s);
    }
    let result = if seq.iter().all(|v| v.is_integer()) {
        let ints: Vec<BigUint> = seq
            .iter()
            .map(|v| v.to_integer().to_biguint().ok_or_else(|| invalid("terms must be positive")))
            .collect::<std::result::Result<_, _>>()?;
        fit_power_law(&ints, stride)?
    } else {
        fit_power_law_rational(&seq, stride)?
    };
    let v = round_floats(serde_json::to_value(&result).expect("serialisable"));
    Ok(match fmt {
        Format::Json => json_text(&v),
        Format::Csv => {
            let mut s = String::from("index,raw_r,raw_alpha\n");
            for (i, (r, al)) in result.raw_r.iter().zip(&result.raw_alpha).enumerate() {
                writeln!(s, "{},{},{}", i + result.window.0, fmt_f64(*r), fmt_f64(*al)).unwrap();
            }
            writeln!(s, "estimate,{},{}", fmt_f64(result.r_estimate), fmt_f64(result.alpha_estimate)).unwrap();
            s
        }
    })
}
