mod model;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use serde_json::{json, Value};

use f1kit_core::counting::{
    bigint_json, compare_counts, torification_poly, vanishing_order_and_limit, BruteKind, IntPolynomial,
};
use f1kit_core::group::{check_action, check_group_axioms, f1_points_group, sigma_check, GroupModel};
use f1kit_core::monoid::{hom_count, FgAbelianGroup};
use f1kit_core::reductive::{check_quotient, ParabolicType};
use f1kit_core::scheme::{check_weak, from_monoid, from_torification, rank_part, RankScheme, StrongMorphismRk};
use f1kit_core::spectrum::{point_count_poly, spec, SpecSummary};
use f1kit_core::{BigInt, Error};

use model::{LoadError, Model, Selector, GRAMMAR};

#[derive(Parser)]
#[command(name = "f1kit", about = "F1-geometry kit: monoid spectra, torified models, group objects and counting")]
struct Cli {
    /// Render a plain-text table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prime spectrum of a monoid model.
    Spec {
        #[arg(long, help = GRAMMAR)]
        model: Selector,
    },
    /// F1-points or H-points of a model.
    Points {
        #[arg(long, help = GRAMMAR)]
        model: Selector,
        /// `f1`, or `h:<m1,m2,...>` for the finite group Z/m1 × Z/m2 × ...
        #[arg(long, default_value = "f1")]
        over: String,
    },
    /// Counting polynomial of a model.
    Count {
        #[arg(long, help = GRAMMAR)]
        model: Selector,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        eval: Vec<i64>,
        /// Report the vanishing order at q = 1 and the normalized limit.
        #[arg(long)]
        limit: bool,
    },
    /// Run check suites: group, sigma, action, quotient:k, strongweak.
    Check {
        #[arg(long, help = GRAMMAR)]
        model: Selector,
        #[arg(long, value_delimiter = ',', required = true)]
        suite: Vec<String>,
    },
    /// Compare the counting polynomial against brute-force enumeration.
    Oracle {
        #[arg(long, help = GRAMMAR)]
        model: Selector,
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [2u64, 3])]
        q: Vec<u64>,
    },
}

/// JSON result and whether every check in it passed.
struct Outcome {
    value: Value,
    pass: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, pass: true }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(m) => Failure::Usage(m),
            LoadError::Core(e) => Failure::Core(e),
        }
    }
}

fn group_model(m: Model, what: &str) -> Result<GroupModel, Failure> {
    match m {
        Model::Group(g) => Ok(g),
        _ => Err(Failure::Usage(format!("{what} needs a group model (gl, parabolic, torus, const, ext, additive)"))),
    }
}

fn counting_poly(m: &Model) -> Result<IntPolynomial, Failure> {
    Ok(match m {
        Model::Group(g) => torification_poly(&g.cells),
        Model::Scheme(x) => torification_poly(&x.cells),
        Model::Monoid(m) => point_count_poly(m)?,
    })
}

fn poly_json(p: &IntPolynomial) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

fn run_spec(sel: &Selector) -> Result<Outcome, Failure> {
    match sel.build()? {
        Model::Monoid(m) => Ok(Outcome::ok(serde_json::to_value(SpecSummary::of(&spec(&m)?)).expect("serializable"))),
        _ => Err(Failure::Usage("spec needs a monoid:<file> model".into())),
    }
}

fn parse_torsion(spec: &str) -> Result<FgAbelianGroup, Failure> {
    let orders = if spec.trim().is_empty() {
        Vec::new()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("bad torsion order {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    if orders.contains(&0) {
        return Err(Failure::Usage("torsion orders must be positive".into()));
    }
    Ok(FgAbelianGroup::from_cyclic_factors(0, &orders))
}

fn run_points(sel: &Selector, over: &str) -> Result<Outcome, Failure> {
    let rk: RankScheme = match sel.build()? {
        Model::Group(g) => rank_part(&from_torification(g.cells)),
        Model::Scheme(x) => rank_part(&x),
        Model::Monoid(m) => rank_part(&from_monoid(&m)?),
    };
    if over == "f1" {
        return Ok(Outcome::ok(json!({"count": rk.len(), "labels": rk.labels()})));
    }
    let Some(torsion) = over.strip_prefix("h:") else {
        return Err(Failure::Usage(format!("--over expects f1 or h:<torsion>, got {over:?}")));
    };
    let h = parse_torsion(torsion)?;
    let mut total = BigInt::default();
    let mut labels = Vec::new();
    for c in rk.components() {
        let n = BigInt::from(hom_count(&c.stalk, &h)?);
        labels.push(json!([c.label, bigint_json(&n)]));
        total += n;
    }
    Ok(Outcome::ok(json!({"count": bigint_json(&total), "labels": labels})))
}

fn run_count(sel: &Selector, evals: &[i64], limit: bool) -> Result<Outcome, Failure> {
    let p = counting_poly(&sel.build()?)?;
    let mut out = serde_json::Map::new();
    out.insert("poly_q".into(), poly_json(&p));
    out.insert("poly_qminus1".into(), serde_json::to_value(p.to_q_minus_one_basis().iter().map(bigint_json).collect::<Vec<_>>()).expect("json"));
    if limit {
        let l = vanishing_order_and_limit(&p)?;
        out.insert("rho".into(), json!(l.rho));
        out.insert("limit".into(), bigint_json(&l.limit));
    }
    let evals: BTreeMap<String, Value> = evals.iter().map(|&q| (q.to_string(), bigint_json(&p.eval_i64(q)))).collect();
    out.insert("evals".into(), serde_json::to_value(evals).expect("json"));
    Ok(Outcome::ok(Value::Object(out)))
}

fn report_value<T: serde::Serialize>(r: &T) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn run_suite(sel: &Selector, suite: &str) -> Result<Outcome, Failure> {
    match suite {
        "group" => {
            let g = group_model(sel.build()?, "group")?;
            let r = check_group_axioms(&g);
            let mut v = report_value(&r);
            if r.pass {
                let w = f1_points_group(&g)?;
                v["f1_points_group_order"] = json!(w.order());
            }
            v["kind"] = report_value(&g.kind);
            Ok(Outcome { pass: r.pass, value: v })
        }
        "sigma" => {
            let g = group_model(sel.build()?, "sigma")?;
            let r = sigma_check(&g)?;
            Ok(Outcome { pass: r.pass, value: report_value(&r) })
        }
        "action" => {
            let g = group_model(sel.build()?, "action")?;
            let mut r = check_action(&g, &g.rank_scheme, &g.mu())?;
            r.absorb(check_action(&g, &g.rank_scheme, &g.projection_action(&g.rank_scheme))?);
            Ok(Outcome { pass: r.pass, value: report_value(&r) })
        }
        "strongweak" => {
            let (weak, expect_strong) = match sel.build()? {
                Model::Group(g) => {
                    let strong = g.kind == f1kit_core::group::ModelKind::Strong;
                    (g.mu(), strong)
                }
                Model::Scheme(x) => (StrongMorphismRk::identity(&rank_part(&x)).to_weak(), true),
                Model::Monoid(m) => (StrongMorphismRk::identity(&rank_part(&from_monoid(&m)?)).to_weak(), true),
            };
            let r = check_weak(&weak)?;
            let pass = r.weak.pass && r.strong == expect_strong;
            let mut v = report_value(&r.weak);
            v["suite"] = json!("strongweak");
            v["pass"] = json!(pass);
            v["strong"] = json!(r.strong);
            Ok(Outcome { pass, value: v })
        }
        s => {
            let Some(k) = s.strip_prefix("quotient:") else {
                return Err(Failure::Usage(format!("unknown suite {s:?}; expected group, sigma, action, quotient:k, strongweak")));
            };
            let k: usize = k.parse().map_err(|_| Failure::Usage(format!("bad quotient index {k:?}")))?;
            let Selector::Gl(n) = sel else {
                return Err(Failure::Usage("quotient:k needs a gl:n model".into()));
            };
            let r = check_quotient(k, *n)?;
            let mut v = report_value(&r);
            v["suite"] = json!("quotient");
            Ok(Outcome { pass: r.pass, value: v })
        }
    }
}

fn run_check(sel: &Selector, suites: &[String]) -> Result<Outcome, Failure> {
    let outcomes = suites.iter().map(|s| run_suite(sel, s)).collect::<Result<Vec<_>, _>>()?;
    let pass = outcomes.iter().all(|o| o.pass);
    let value = match &outcomes[..] {
        [one] => one.value.clone(),
        many => Value::Array(many.iter().map(|o| o.value.clone()).collect()),
    };
    Ok(Outcome { value, pass })
}

fn run_oracle(sel: &Selector, qs: &[u64]) -> Result<Outcome, Failure> {
    let kind = match sel {
        Selector::Gl(n) => BruteKind::Gl { n: *n },
        Selector::Grassmannian(k, n) => BruteKind::Subspaces { k: *k, n: *n },
        Selector::Parabolic(_, parts) => BruteKind::BlockTriangular { composition: ParabolicType::new(parts.clone())?.composition().to_vec() },
        Selector::Monoid(_) => match sel.build()? {
            Model::Monoid(m) => BruteKind::MonoidHoms(m),
            _ => unreachable!("monoid selector builds a monoid"),
        },
        _ => return Err(Failure::Usage("oracle supports gl, parabolic, gr and monoid models".into())),
    };
    let p = counting_poly(&sel.build()?)?;
    let r = compare_counts(&p, &kind, qs)?;
    Ok(Outcome { pass: r.pass, value: report_value(&r) })
}

/// One `path<TAB>value` line per JSON leaf.
fn render_pretty(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                render_pretty(x, &if path.is_empty() { k.clone() } else { format!("{path}.{k}") }, out);
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                render_pretty(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => {
            out.push_str(if path.is_empty() { "value" } else { path });
            out.push('\t');
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
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
    let result = match &cli.command {
        Command::Spec { model } => run_spec(model),
        Command::Points { model, over } => run_points(model, over),
        Command::Count { model, eval, limit } => run_count(model, eval, *limit),
        Command::Check { model, suite } => run_check(model, suite),
        Command::Oracle { model, q } => run_oracle(model, q),
    };
    match result {
        Ok(o) => {
            let mut s = String::new();
            if cli.pretty {
                render_pretty(&o.value, "", &mut s);
            } else {
                s = format!("{}\n", o.value);
            }
            let _ = std::io::stdout().lock().write_all(s.as_bytes());
            ExitCode::from(if o.pass { 0 } else { 1 })
        }
        Err(f) => {
            let msg = match f {
                Failure::Usage(m) => m,
                Failure::Core(e) => e.to_string(),
            };
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            eprintln!("model selectors: {GRAMMAR}");
            ExitCode::from(2)
        }
    }
}
