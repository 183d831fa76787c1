//! Command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::builders::{build, parse_edge_list};
use crate::config::{incidence_configuration, Configuration};
use crate::engine::{explain, CountConfig, Engine, Options, Subject};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::oracle::{self, check_congruence, count_points, count_points_poly, crt_reconstruct, Exec, PointCounts};
use crate::table;

#[derive(Parser, Debug)]
#[command(name = "grothmodt", version, about = "Classes of configuration hypersurface complements modulo the torus class")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// [Y] and [Y°] mod T from the rule engine
    Class(ClassArgs),
    /// Point counts over prime fields
    Count(CountArgs),
    /// Engine value checked against point counts
    Verify(VerifyArgs),
    /// Recompute the overview table of examples
    Table(TableArgs),
    /// Search for a nexus or fat nexus
    Fatnexus(InputArgs),
    /// Bases, connectivity and element structure
    Matroid(MatroidArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Builder expression such as `C 5`, `K 3 3` or `octahedron`
    #[arg(long)]
    pub builder: Option<String>,
    /// Edge list file: `u v [label]` per line
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Matrix JSON file: {"rows": [[..]], "labels": [..]}
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Work with the dual matroid
    #[arg(long)]
    pub dual: bool,
    /// Print the derivation
    #[arg(long)]
    pub trace: bool,
    /// Never fall back to point counts
    #[arg(long)]
    pub no_count: bool,
    /// Work budget per prime for the point-count fallback
    #[arg(long, default_value_t = crate::engine::count::DEFAULT_COUNT_BUDGET)]
    pub count_budget: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub primes: Vec<u32>,
    /// Evaluations allowed per count
    #[arg(long, env = "GROTHMODT_BUDGET", default_value_t = oracle::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Reconstruct |n| <= bound from the residues
    #[arg(long, default_value_t = 50)]
    pub bound: i64,
    /// Replace the coefficient of the first basis monomial before counting
    #[arg(long, allow_negative_numbers = true)]
    pub perturb: Option<i64>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Largest family size
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct MatroidArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub dual: bool,
}

#[derive(Deserialize)]
struct MatrixFile {
    rows: Vec<Vec<i64>>,
    labels: Option<Vec<String>>,
}

enum Input {
    Graph(Multigraph),
    Config(Configuration),
}

impl Input {
    fn load(src: &Source) -> Result<Input> {
        if let Some(b) = &src.builder {
            return Ok(Input::Graph(build(b)?));
        }
        if let Some(path) = &src.edges {
            return Ok(Input::Graph(parse_edge_list(&read(path)?)?));
        }
        let path = src.matrix.as_ref().expect("clap requires one source");
        let m: MatrixFile = serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let n = m.rows.first().map_or(0, Vec::len);
        let labels = m.labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        Ok(Input::Config(Configuration::new(m.rows, labels)?))
    }

    fn subject(&self) -> Result<Subject> {
        match self {
            Input::Graph(g) => {
                if !g.has_non_loop_edge() {
                    return Err(Error::LoopsOnly);
                }
                Subject::from_graph(g)
            }
            Input::Config(w) => Subject::from_configuration(w),
        }
    }

    fn configuration(&self) -> Configuration {
        match self {
            Input::Graph(g) => incidence_configuration(g),
            Input::Config(w) => w.clone(),
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let out = match cli.command {
        Command::Class(a) => class(a),
        Command::Count(a) => count(a),
        Command::Verify(a) => verify(a),
        Command::Table(a) => table_cmd(a),
        Command::Fatnexus(a) => fatnexus(a),
        Command::Matroid(a) => matroid(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn class(a: ClassArgs) -> Result<u8> {
    let input = Input::load(&a.input.source)?;
    let mut s = input.subject()?;
    if a.dual {
        s = s.dual();
    }
    let count = (!a.no_count).then(|| CountConfig { budget: a.count_budget, ..CountConfig::default() });
    let mut engine = Engine::new(Options { count, ..Options::default() });
    let res = engine.analyze(&s);
    if a.input.json {
        let mut v = res.to_json(a.trace);
        v["size"] = json!(s.matroid().size());
        v["rank"] = json!(s.matroid().rank());
        v["point_count_fallbacks"] = json!(engine.count_fallbacks());
        print_json(&v);
    } else {
        println!("n = {}  r = {}", s.matroid().size(), s.matroid().rank());
        println!("Y  = {}", res.y.result);
        println!("Y° = {}", res.ytorus.result);
        if engine.count_fallbacks() > 0 {
            println!("({} value(s) reconstructed from point counts, see trace)", engine.count_fallbacks());
        }
        if a.trace {
            println!("\n{}", explain(&res.y));
            println!("{}", explain(&res.ytorus));
        }
    }
    Ok(0)
}

fn counts_for(w: &Configuration, primes: &[u32], budget: u64, exec: Exec) -> Result<Vec<PointCounts>> {
    primes.iter().map(|&p| count_points(w, p, budget, exec)).collect()
}

fn count(a: CountArgs) -> Result<u8> {
    let w = Input::load(&a.input.source)?.configuration();
    let exec = if a.sequential { Exec::Sequential } else { Exec::default() };
    let counts = counts_for(&w, &a.oracle.primes, a.oracle.budget, exec)?;
    if a.input.json {
        print_json(&json!(counts));
    } else {
        println!("{:>4} {:>14} {:>14} {:>14} {:>14} {:>10}", "p", "|P|", "|X|", "|Y|", "|Y°|", "|Y| mod p-1");
        for c in &counts {
            let m = c.n_y % (c.p as u64 - 1);
            println!("{:>4} {:>14} {:>14} {:>14} {:>14} {:>10}", c.p, c.n_projective, c.n_x, c.n_y, c.n_ytorus, m);
        }
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let input = Input::load(&a.input.source)?;
    let s = input.subject()?;
    let mut engine = Engine::default();
    let res = engine.analyze(&s);
    let w = input.configuration();
    let mut counts = Vec::new();
    match a.perturb {
        None => counts = counts_for(&w, &a.oracle.primes, a.oracle.budget, Exec::default())?,
        Some(c) => {
            let poly = w.polynomial()?;
            let first = poly.terms().first().map(|t| t.0).unwrap_or(0);
            let poly = poly.with_coefficient(first, c as i128);
            for &p in &a.oracle.primes {
                counts.push(count_points_poly(&poly, p, a.oracle.budget, Exec::default())?);
            }
        }
    }
    let checks = |claimed: Option<i64>, torus: bool| -> Vec<Value> {
        counts
            .iter()
            .map(|c| {
                let shown = if torus { PointCounts { n_y: c.n_ytorus, ..*c } } else { *c };
                match claimed {
                    Some(n) => json!(check_congruence(&shown, n)),
                    None => json!({ "p": c.p, "modulus": c.p - 1, "observed": shown.n_y % (c.p as u64 - 1) }),
                }
            })
            .collect()
    };
    let y_checks = checks(res.y.result.known(), false);
    let t_checks = checks(res.ytorus.result.known(), true);
    let failed = y_checks.iter().chain(&t_checks).any(|c| c["ok"] == json!(false));
    let residues: Vec<(u64, i64)> =
        counts.iter().map(|c| (c.p as u64 - 1, (c.n_y % (c.p as u64 - 1)) as i64)).collect();
    let crt = match crt_reconstruct(&residues, a.bound) {
        Ok(Some(n)) => json!(n),
        Ok(None) => json!("none within bound"),
        Err(Error::CrtAmbiguous(c)) => json!({ "ambiguous": c }),
        Err(e) => json!(e.to_string()),
    };
    let verdict = if failed { "FAIL" } else { "PASS" };
    if a.input.json {
        print_json(&json!({
            "engine": res.to_json(false),
            "Y": y_checks,
            "Ytorus": t_checks,
            "crt": crt,
            "bound": a.bound,
            "verdict": verdict,
        }));
    } else {
        println!("engine: Y = {}  Y° = {}", res.y.result, res.ytorus.result);
        println!("{:>4} {:>8} {:>12} {:>12} {:>12} {:>12}", "p", "mod", "|Y| res", "Y claim", "|Y°| res", "Y° claim");
        for (yc, tc) in y_checks.iter().zip(&t_checks) {
            let cell = |c: &Value, key: &str| c.get(key).map_or("-".to_string(), |v| v.to_string());
            println!(
                "{:>4} {:>8} {:>12} {:>12} {:>12} {:>12}",
                cell(yc, "p"),
                cell(yc, "modulus"),
                cell(yc, "observed"),
                cell(yc, "claimed"),
                cell(tc, "observed"),
                cell(tc, "claimed")
            );
        }
        println!("CRT of |Y| residues within |n| <= {}: {}", a.bound, crt);
        println!("{verdict} (congruences are necessary conditions only)");
    }
    Ok(u8::from(failed))
}

fn table_cmd(a: TableArgs) -> Result<u8> {
    let rows = table::rows(a.max_n);
    let opts = Options::default();
    #[cfg(feature = "parallel")]
    let results: Vec<Result<table::RowResult>> = {
        use rayon::prelude::*;
        rows.par_iter().map(|r| table::evaluate(r, &opts)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<table::RowResult>> = rows.iter().map(|r| table::evaluate(r, &opts)).collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let all_ok = results.iter().all(|r| r.ok);
    if a.json {
        print_json(&json!({ "rows": results, "ok": all_ok }));
    } else {
        let cell = |v: Option<i64>| v.map_or("unknown".to_string(), |n| n.to_string());
        println!(
            "{:<18} {:>3} {:>3} {:>9} {:>9} {:>9} {:>9} {:>5} {:>8}",
            "graph", "r", "n", "Y° exp", "Y° got", "Y exp", "Y got", "", "ms"
        );
        for r in &results {
            let exp_t = r.row.ytorus.map_or("?".to_string(), |n| n.to_string());
            println!(
                "{:<18} {:>3} {:>3} {:>9} {:>9} {:>9} {:>9} {:>5} {:>8}",
                r.row.builder,
                r.rank,
                r.edges,
                exp_t,
                cell(r.ytorus),
                r.row.y,
                cell(r.y),
                if r.ok { "ok" } else { "DIFF" },
                r.millis
            );
        }
    }
    Ok(u8::from(!all_ok))
}

fn fatnexus(a: InputArgs) -> Result<u8> {
    let Input::Graph(g) = Input::load(&a.source)? else {
        return Err(Error::Invalid("fatnexus needs a graph".into()));
    };
    let h = g.simplify()?;
    let names = |vs: &[usize]| vs.iter().map(|&v| h.vertices()[v].clone()).collect::<Vec<_>>();
    let nexi = names(&h.find_nexi());
    let witness = h.find_fat_nexus();
    if a.json {
        let w = witness.as_ref().map(|w| {
            json!({ "apex": h.vertices()[w.apex], "part1": names(&w.part1), "part2": names(&w.part2) })
        });
        print_json(&json!({ "nexi": nexi, "fat_nexus": w }));
    } else {
        println!("nexi: {}", if nexi.is_empty() { "none".to_string() } else { nexi.join(" ") });
        match witness {
            Some(w) => println!(
                "fat nexus: {}  parts {{{}}} {{{}}}",
                h.vertices()[w.apex],
                names(&w.part1).join(","),
                names(&w.part2).join(",")
            ),
            None => println!("fat nexus: none"),
        }
    }
    Ok(0)
}

fn matroid(a: MatroidArgs) -> Result<u8> {
    let s = Input::load(&a.input.source)?.subject()?;
    let m = if a.dual { s.matroid().dual() } else { s.matroid().clone() };
    let labels = |mask| oracle::mask_labels(&m, mask);
    let components: Vec<Vec<String>> = m.components().into_iter().map(labels).collect();
    let uniform = m.uniform_signature().map(|(r, n)| format!("U_{{{r},{n}}}"));
    if a.input.json {
        print_json(&json!({
            "size": m.size(),
            "rank": m.rank(),
            "labels": m.labels(),
            "bases": m.labeled_bases(),
            "loops": labels(m.loops()),
            "coloops": labels(m.coloops()),
            "components": components,
            "connected": m.is_connected(),
            "uniform": uniform,
        }));
    } else {
        println!("n = {}  r = {}  bases = {}", m.size(), m.rank(), m.basis_count());
        println!("connected: {}  uniform: {}", m.is_connected(), uniform.as_deref().unwrap_or("no"));
        println!("loops: {:?}  coloops: {:?}", labels(m.loops()), labels(m.coloops()));
        println!("components: {components:?}");
        for b in m.labeled_bases() {
            println!("  {{{}}}", b.join(","));
        }
    }
    Ok(0)
}
