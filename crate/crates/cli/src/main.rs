mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use coxsig::conjugacy::enumerate_classes;
use coxsig::coxeter::{apply_labeling, cache, CoxeterSystem, Word, DEFAULT_CAP};
use coxsig::cuspdata::{self, CuspidalDatum, SamplingOptions};
use coxsig::cuspidal::{algorithm_a, FlagOptions, Mode};
use coxsig::exact::{MultiPoly, TermJson};
use coxsig::iss::{iss_for, report_for_signatures, verify_ism, IssJson, IssReport};
use coxsig::repr::{catalog_for, d_poly, d_tilde, parse_poly, rep_from_spec, restrict_poly, verify_main_theorem};
use coxsig::signatures::{
    brute_force_signature_vector, signature_vector_with_budget, BRUTE_FORCE_LIMIT, DEFAULT_BUDGET, EXTENDED_BUDGET,
};

use output::{pmatrix, Doc, Format};

#[derive(Parser)]
#[command(name = "coxsig", version, about = "Signature vectors, independent signature sequences and characteristic polynomials of finite Coxeter groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for parallel counting and candidate scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Allow the long-running cases (E6 ISS, very large candidate sets).
    #[arg(long, global = true)]
    extended: bool,
    /// Cuspidal data file (defaults to the one shipped with the library).
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Put elapsed time into the output instead of standard error.
    #[arg(long, global = true)]
    timing: bool,
    /// Generator numbering: table2, example73 or perm:p1,p2,...
    #[arg(long, global = true, default_value = "table2")]
    labeling: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type information and Coxeter matrix.
    Group { type_spec: String },
    /// Conjugacy classes of the enumerated group.
    Classes { type_spec: String },
    /// The signature vector V_alpha.
    Sigvec {
        type_spec: String,
        /// Comma-separated letter counts, e.g. 2,4,3.
        #[arg(long)]
        alpha: String,
        /// Classify every word instead of running the counting DP.
        #[arg(long)]
        brute: bool,
    },
    /// A lower triangular ISS with its matrix.
    Iss {
        type_spec: String,
        /// Use this signature list ("a,b;c,d;...") instead of constructing one.
        #[arg(long)]
        signatures: Option<String>,
    },
    /// d(S, rho) for a built-in or file representation.
    Dpoly {
        type_spec: String,
        /// reflection, sign, trivial, young:3,1, dihedral:rho1 or file:<path>.
        #[arg(long)]
        rep: String,
        /// Fix x0 = 1.
        #[arg(long)]
        tilde: bool,
    },
    /// Split a polynomial into catalog factors.
    Decompose {
        type_spec: String,
        /// File with polynomial text or JSON terms.
        #[arg(long)]
        poly: PathBuf,
    },
    /// Restrict a representation of Sn to Sm through its polynomial.
    Restrict {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        rep: String,
    },
    /// Flag for a tie word against a cuspidal class.
    Cuspcheck {
        type_spec: String,
        #[arg(long)]
        word: String,
        /// Geck-Pfeiffer index of the target class.
        #[arg(long)]
        target: usize,
        #[arg(long, default_value = "auto")]
        mode: Mode,
        /// Progress file for extended runs.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Recompute an ISS and check the polynomial catalog.
    Verify {
        type_spec: String,
        /// Verify this ISS report (JSON) instead of constructing one.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Random direct sums to decompose.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Generate the cuspidal data file.
    Cuspdata {
        #[arg(long, default_value = "H3,H4,F4,E6,E7,E8")]
        types: String,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((doc, ok)) => match doc.render(cli.format) {
            Ok(text) => {
                print!("{text}");
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// The rendered result and whether it reports success.
fn run(cli: &Cli) -> Result<(Doc, bool)> {
    match &cli.command {
        Command::Group { type_spec } => group(&system(type_spec, &cli.labeling)?),
        Command::Classes { type_spec } => classes(&system(type_spec, &cli.labeling)?),
        Command::Sigvec { type_spec, alpha, brute } => sigvec(&system(type_spec, &cli.labeling)?, alpha, *brute),
        Command::Iss { type_spec, signatures } => {
            iss(&system(type_spec, &cli.labeling)?, signatures.as_deref(), cli.extended)
        }
        Command::Dpoly { type_spec, rep, tilde } => dpoly(&system(type_spec, &cli.labeling)?, rep, *tilde),
        Command::Decompose { type_spec, poly } => decompose(&system(type_spec, &cli.labeling)?, poly),
        Command::Restrict { from, to, rep } => restrict(from, to, rep),
        Command::Cuspcheck { type_spec, word, target, mode, checkpoint } => {
            cuspcheck(cli, &system(type_spec, "table2")?, word, *target, *mode, checkpoint.clone())
        }
        Command::Verify { type_spec, report, samples, seed } => {
            verify(&system(type_spec, &cli.labeling)?, report.as_deref(), *samples, *seed, cli.extended)
        }
        Command::Cuspdata { types, out } => cuspdata_cmd(types, out.as_deref()),
    }
}

/// Parse a type spec, accepting `Sn` for `A(n-1)`, then apply the labeling.
fn system(spec: &str, labeling: &str) -> Result<CoxeterSystem> {
    let atoms: Vec<String> = spec
        .split('x')
        .map(|a| {
            let a = a.trim();
            match a.strip_prefix('S').map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 2 => Ok(format!("A{}", n - 1)),
                Some(_) => Err(anyhow!("symmetric group alias {a:?} needs n >= 2")),
                None => Ok(a.to_string()),
            }
        })
        .collect::<Result<_>>()?;
    let sys = CoxeterSystem::parse(&atoms.join("x"))?;
    Ok(apply_labeling(&sys, labeling)?)
}

fn parse_alpha(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().with_context(|| format!("bad signature entry {p:?}")))
        .collect()
}

fn group(sys: &CoxeterSystem) -> Result<(Doc, bool)> {
    let matrix: Vec<Vec<u32>> = sys.matrix().to_vec();
    let value = json!({
        "type": sys.type_spec(),
        "rank": sys.rank(),
        "order": sys.order().to_string(),
        "longest_length": sys.longest_length(),
        "cache_key": cache::cache_key(sys),
        "coxeter_matrix": matrix,
    });
    let rows = matrix.iter().map(|r| r.iter().map(u32::to_string).collect()).collect::<Vec<Vec<String>>>();
    let latex = pmatrix(&rows);
    Ok((Doc::new(&value)?.table(&[], rows).latex(latex), true))
}

#[derive(Serialize)]
struct ClassRow {
    id: usize,
    name: String,
    size: usize,
    min_length: usize,
    cuspidal: bool,
    char_poly: Option<String>,
}

fn classes(sys: &CoxeterSystem) -> Result<(Doc, bool)> {
    let (_, classes) = enumerate_classes(sys)?;
    let rows: Vec<ClassRow> = (0..classes.len())
        .map(|c| ClassRow {
            id: c,
            name: classes.name(c),
            size: classes.size(c),
            min_length: classes.min_length(c),
            cuspidal: classes.is_cuspidal(c),
            char_poly: classes.char_poly(c).map(|p| p.to_string()),
        })
        .collect();
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.clone(),
                r.size.to_string(),
                r.min_length.to_string(),
                r.cuspidal.to_string(),
                r.char_poly.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let value = json!({ "type": sys.type_spec(), "classes": rows });
    Ok((Doc::new(&value)?.table(&["id", "name", "size", "min_length", "cuspidal", "char_poly"], table), true))
}

fn sigvec(sys: &CoxeterSystem, alpha: &str, brute: bool) -> Result<(Doc, bool)> {
    let alpha = parse_alpha(alpha)?;
    let (t, classes) = enumerate_classes(sys)?;
    let v = if brute {
        brute_force_signature_vector(&t, &classes, &alpha, BRUTE_FORCE_LIMIT)?
    } else {
        signature_vector_with_budget(&t, &classes, &alpha, DEFAULT_BUDGET)?
    };
    let names = classes.names();
    let entries: Vec<String> = v.entries.iter().map(|x| x.to_string()).collect();
    let value = json!({
        "type": sys.type_spec(),
        "alpha": alpha,
        "classes": names,
        "vector": entries,
        "total": v.total().to_string(),
    });
    let latex = format!("({})", entries.join(", "));
    let rows = names.iter().zip(&entries).map(|(n, e)| vec![n.clone(), e.clone()]).collect();
    Ok((Doc::new(&value)?.table(&["class", "count"], rows).latex(latex), true))
}

fn report_doc(r: &IssReport) -> Result<Doc> {
    let j = r.to_json();
    let mut header = vec!["signature".to_string()];
    header.extend(j.class_order.iter().cloned());
    let rows: Vec<Vec<String>> = j
        .signatures
        .iter()
        .zip(&j.matrix)
        .map(|(s, row)| {
            let mut out = vec![s.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")];
            out.extend(row.iter().cloned());
            out
        })
        .collect();
    let latex = pmatrix(&j.matrix);
    let mut d = Doc::new(&j)?.latex(latex);
    d.header = header;
    d.rows = rows;
    Ok(d)
}

fn iss(sys: &CoxeterSystem, signatures: Option<&str>, extended: bool) -> Result<(Doc, bool)> {
    let report = match signatures {
        Some(text) => {
            let alphas = text.split(';').map(parse_alpha).collect::<Result<Vec<_>>>()?;
            let (t, classes) = enumerate_classes(sys)?;
            report_for_signatures(sys, &t, &classes, &alphas)?
        }
        None => iss_for(sys, extended)?,
    };
    let ok = report.triangular && report.diagonal_nonzero;
    Ok((report_doc(&report)?, ok))
}

fn poly_doc(value: serde_json::Value, p: &MultiPoly) -> Result<Doc> {
    let rows = p
        .terms()
        .map(|(e, c)| {
            let mut r: Vec<String> = e.iter().map(u32::to_string).collect();
            r.push(c.to_string());
            r
        })
        .collect();
    let mut header: Vec<String> = (0..p.arity()).map(|i| format!("x{i}")).collect();
    header.push("coeff".into());
    let mut d = Doc::new(&value)?.latex(p.to_latex());
    d.header = header;
    d.rows = rows;
    Ok(d)
}

fn dpoly(sys: &CoxeterSystem, spec: &str, tilde: bool) -> Result<(Doc, bool)> {
    let rep = rep_from_spec(sys, spec)?;
    let p = if tilde { d_tilde(&rep)? } else { d_poly(&rep)? };
    let value = json!({
        "type": sys.type_spec(),
        "rep": rep.name,
        "degree": rep.degree,
        "tilde": tilde,
        "poly": p.to_string(),
        "terms": p.to_json(),
    });
    Ok((poly_doc(value, &p)?, true))
}

fn read_poly(path: &Path, arity: usize) -> Result<MultiPoly> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let terms: Vec<TermJson> = serde_json::from_str(trimmed)?;
        return Ok(MultiPoly::from_json(&terms)?);
    }
    if trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(trimmed)?;
        let terms: Vec<TermJson> = serde_json::from_value(v.get("terms").cloned().ok_or_else(|| anyhow!("no \"terms\" field"))?)?;
        return Ok(MultiPoly::from_json(&terms)?);
    }
    Ok(parse_poly(trimmed, arity)?)
}

fn multiset_json(parts: &[(String, u32)]) -> serde_json::Value {
    json!(parts.iter().map(|(n, k)| json!({"name": n, "multiplicity": k})).collect::<Vec<_>>())
}

fn decompose(sys: &CoxeterSystem, path: &Path) -> Result<(Doc, bool)> {
    let p = read_poly(path, sys.rank() + 1)?;
    let catalog = catalog_for(sys)?;
    let parts = catalog.decompose(&p)?;
    let value = json!({
        "type": sys.type_spec(),
        "catalog_complete": catalog.complete,
        "components": multiset_json(&parts),
    });
    let rows = parts.iter().map(|(n, k)| vec![n.clone(), k.to_string()]).collect();
    Ok((Doc::new(&value)?.table(&["name", "multiplicity"], rows), true))
}

fn symmetric_degree(spec: &str) -> Result<usize> {
    spec.strip_prefix('S')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| anyhow!("expected Sn, got {spec:?}"))
}

fn restrict(from: &str, to: &str, spec: &str) -> Result<(Doc, bool)> {
    let (n, m) = (symmetric_degree(from)?, symmetric_degree(to)?);
    if m >= n {
        bail!("restriction needs m < n");
    }
    let big = system(from, "table2")?;
    let rep = rep_from_spec(&big, spec)?;
    let q = restrict_poly(&d_poly(&rep)?, m)?;
    let parts = if m >= 2 { Some(catalog_for(&system(to, "table2")?)?.decompose(&q)?) } else { None };
    let value = json!({
        "from": from,
        "to": to,
        "rep": rep.name,
        "restricted": q.to_string(),
        "terms": q.to_json(),
        "decomposition": parts.as_ref().map(|p| multiset_json(p)),
    });
    Ok((poly_doc(value, &q)?, true))
}

fn load_data(cli: &Cli, sys: &CoxeterSystem) -> Result<Vec<CuspidalDatum>> {
    let spec = sys.type_spec();
    let path = cli.data.clone().unwrap_or_else(cuspdata::default_data_path);
    if path.exists() {
        if let Some(d) = cuspdata::load(&path)?.remove(&spec) {
            return Ok(d);
        }
    } else if cli.data.is_some() {
        bail!("data file {} not found", path.display());
    }
    if sys.order() <= DEFAULT_CAP {
        let (t, classes) = enumerate_classes(sys)?;
        return Ok(cuspdata::from_classes(sys, &t, &classes)?);
    }
    bail!("no cuspidal data for {spec} in {}; generate it with `coxsig cuspdata`", path.display())
}

fn cuspcheck(
    cli: &Cli,
    sys: &CoxeterSystem,
    word: &str,
    target: usize,
    mode: Mode,
    checkpoint: Option<PathBuf>,
) -> Result<(Doc, bool)> {
    if cli.labeling != "table2" {
        bail!("cuspcheck uses the standard numbering only");
    }
    let data = load_data(cli, sys)?;
    let datum = data
        .iter()
        .find(|d| d.gp_index == target)
        .ok_or_else(|| anyhow!("{} has no cuspidal class {target}", sys.type_spec()))?;
    let w = Word::parse(word, sys.rank())?;
    let opts = FlagOptions { mode, extended: cli.extended, checkpoint, ..FlagOptions::default() };
    let start = Instant::now();
    let rep = algorithm_a(sys, &w, datum, &opts, None)?;
    let elapsed = start.elapsed();
    let mut value = json!({
        "type": sys.type_spec(),
        "word": word,
        "target": target,
        "mode": rep.mode,
        "flag": rep.flag,
        "candidates_checked": rep.candidates_checked.to_string().parse::<u64>().unwrap_or(u64::MAX),
        "total": rep.total.to_string(),
    });
    if cli.timing {
        value["elapsed"] = json!(elapsed.as_secs_f64());
    } else {
        eprintln!("elapsed: {:.3}s", elapsed.as_secs_f64());
    }
    let rows = vec![vec![rep.flag.to_string(), rep.candidates_checked.to_string(), rep.total.to_string()]];
    Ok((Doc::new(&value)?.table(&["flag", "candidates_checked", "total"], rows), true))
}

fn verify(sys: &CoxeterSystem, report: Option<&Path>, samples: usize, seed: u64, extended: bool) -> Result<(Doc, bool)> {
    let r = match report {
        Some(path) => {
            let j: IssJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            IssReport::from_json(&j)?
        }
        None => iss_for(sys, extended)?,
    };
    let (t, classes) = enumerate_classes(sys)?;
    let budget = if extended { EXTENDED_BUDGET } else { DEFAULT_BUDGET };
    let verdict = verify_ism(&r, &t, &classes, budget)?;
    let catalog = catalog_for(sys)?;
    let main = verify_main_theorem(sys, &catalog, samples, seed, false)?;
    let ok = verdict.passed() && main.passed();
    let value = json!({ "type": sys.type_spec(), "passed": ok, "ism": verdict, "main_theorem": main });
    let rows = vec![
        vec!["ism".into(), verdict.passed().to_string(), verdict.failures.join("; ")],
        vec!["main_theorem".into(), main.passed().to_string(), main.sums_failed.join("; ")],
    ];
    Ok((Doc::new(&value)?.table(&["check", "passed", "detail"], rows), ok))
}

fn cuspdata_cmd(types: &str, out: Option<&Path>) -> Result<(Doc, bool)> {
    let mut all = Vec::new();
    for spec in types.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let sys = CoxeterSystem::parse(spec)?;
        let start = Instant::now();
        let data = if sys.order() <= DEFAULT_CAP {
            let (t, classes) = enumerate_classes(&sys)?;
            cuspdata::from_classes(&sys, &t, &classes)?
        } else {
            let mut d = cuspdata::derive_by_sampling(&sys, &SamplingOptions::for_type(spec))?;
            // sampled types are identified by polynomial; keep the words as witnesses
            d.iter_mut().for_each(|x| x.type_spec = spec.to_string());
            d
        };
        eprintln!("{spec}: {} cuspidal classes in {:.1}s", data.len(), start.elapsed().as_secs_f64());
        all.push(data);
    }
    let text = cuspdata::to_json(&all)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(path) = out {
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok((Doc::new(&value)?, true))
}
