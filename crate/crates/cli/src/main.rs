use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use conwon::context::Context;
use conwon::formula::{parse_formula, render_pretty, Dialect, Formula, FormulaError};
use conwon::lewis_v::{self, FlatReport, SatResult, VModel};
use conwon::proof::{check_proof, Proof, System};
use conwon::search::{find_countermodel, Bounds, Countermodel};
use conwon::semantics::{default_label, eval_traced, extension};
use conwon::{fixtures, io, reduction, Model, WorldSet};

#[derive(Parser)]
#[command(name = "conwon", version, about = "Conditional weak ontic necessity: evaluation, reduction, countermodels and proofs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Human, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form and classification.
    Parse {
        formula: String,
        /// Defaults to `v` when the text contains `|>`, otherwise `conwon`.
        #[arg(long)]
        dialect: Option<Dialect>,
    },
    /// Evaluate a ConWON formula at a world of a contextualized model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        context: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
        /// Show every conditional update and expected state.
        #[arg(long)]
        trace: bool,
    },
    /// Print the hierarchy and expected state of a context.
    Expected {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        context: PathBuf,
    },
    /// Update a context with the default |alpha| and print the result.
    Update {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        context: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Rewrite a ConWON formula into an equivalent flat formula.
    Reduce {
        #[arg(long)]
        formula: String,
    },
    /// Search small models for a countermodel.
    Falsify {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 5)]
        max_context_len: usize,
        /// Refuse searches with more (valuation, context) pairs than this.
        #[arg(long)]
        max_candidates: Option<u128>,
    },
    /// Compare bounded satisfiability of a flat formula in ConWON and V.
    CompareV {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 5)]
        max_context_len: usize,
    },
    /// Check a JSON proof file.
    CheckProof {
        file: PathBuf,
        /// Overrides the file's "system" field.
        #[arg(long)]
        system: Option<System>,
    },
    /// Bundled worked examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    /// List example names.
    List,
    /// Run one example.
    Run {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(fixtures::NAMES))]
        name: String,
    },
}

/// Formula text plus the parse error, rendered with a caret under the offending column.
#[derive(Debug)]
struct FormulaInputError {
    text: String,
    error: FormulaError,
}

impl std::fmt::Display for FormulaInputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)?;
        if let Some(offset) = self.error.offset() {
            let col = self.text[..offset.min(self.text.len())].chars().count();
            write!(f, "\n  {}\n  {}^", self.text, " ".repeat(col))?;
        }
        Ok(())
    }
}

impl std::error::Error for FormulaInputError {}

fn guess_dialect(text: &str) -> Dialect {
    if text.contains("|>") || text.contains('▷') {
        Dialect::V
    } else {
        Dialect::ConWon
    }
}

fn parse(text: &str, dialect: Dialect) -> Result<Formula> {
    parse_formula(text, dialect).map_err(|error| FormulaInputError { text: text.to_string(), error }.into())
}

fn load_model(path: &Path) -> Result<Model> {
    let text = io::read_file(path)?;
    io::model_from_json(&text).with_context(|| format!("{}", path.display()))
}

fn load_context(path: &Path, model: &Model) -> Result<Context> {
    let text = io::read_file(path)?;
    io::context_from_json(&text, model).with_context(|| format!("{}", path.display()))
}

fn world(model: &Model, name: &str) -> Result<usize> {
    match model.world_index(name) {
        Some(w) => Ok(w),
        None => bail!("unknown world '{name}' (model has {})", model.worlds().join(", ")),
    }
}

fn names(model: &Model, s: WorldSet) -> Vec<String> {
    model.names(s).into_iter().map(String::from).collect()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn describe_context(model: &Model, c: &Context) -> Vec<String> {
    let mut lines = Vec::new();
    match c {
        Context::Ordered(o) => {
            for (name, &d) in o.defaults() {
                lines.push(format!("default {name} = {}", model.show(d)));
            }
            let levels: Vec<String> = o
                .hierarchy()
                .levels
                .iter()
                .map(|l| format!("{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(", ")))
                .collect();
            lines.push(format!("hierarchy ({})", levels.join(", ")));
        }
        Context::Sequence(s) => {
            let items: Vec<String> = s.defaults().iter().map(|&d| model.show(d)).collect();
            lines.push(format!("context ({})", items.join(", ")));
        }
    }
    let detail = c.expected_detail(model.universe());
    let inter: Vec<String> = detail.level_intersections.iter().map(|&d| model.show(d)).collect();
    lines.push(format!("level intersections ({})", inter.join(", ")));
    lines.push(format!("longest consistent prefix {} -> expected {}", detail.prefix_len, model.show(detail.expected)));
    lines
}

fn context_json(model: &Model, c: &Context) -> Value {
    let detail = c.expected_detail(model.universe());
    json!({
        "context": io::context_to_value(c, model),
        "hierarchy": c.hierarchy().map(|h| h.levels.iter().map(|l| l.iter().cloned().collect::<Vec<_>>()).collect::<Vec<_>>()),
        "level_intersections": detail.level_intersections.iter().map(|&d| names(model, d)).collect::<Vec<_>>(),
        "prefix_len": detail.prefix_len,
        "expected": names(model, detail.expected),
    })
}

fn countermodel_json(cm: &Countermodel) -> Value {
    json!({
        "model": io::model_to_value(&cm.model),
        "context": io::context_to_value(&Context::Sequence(cm.context.clone()), &cm.model),
        "world": cm.model.world_name(cm.world),
    })
}

fn print_countermodel(cm: &Countermodel) {
    println!("worlds: {}", cm.model.worlds().join(", "));
    for (atom, &s) in cm.model.valuation() {
        println!("  {atom} = {}", cm.model.show(s));
    }
    let items: Vec<String> = cm.context.defaults().iter().map(|&d| cm.model.show(d)).collect();
    println!("context: ({})", items.join(", "));
    println!("world: {}", cm.model.world_name(cm.world));
}

fn eval_at(model: &Model, context: &Context, w: usize, f: &Formula, trace: bool, output: Output) -> Result<bool> {
    let (value, t) = eval_traced(model, context, w, f)?;
    match output {
        Output::Json => print_json(&json!({
            "formula": render_pretty(f),
            "world": model.world_name(w),
            "value": value,
            "trace": if trace { serde_json::to_value(t.summaries(model))? } else { Value::Null },
        })),
        Output::Human => {
            if trace {
                print!("{}", t.render(model));
            }
            println!("{value}");
        }
    }
    Ok(value)
}

fn sat_json(r: &SatResult) -> Value {
    json!({
        "conwon": r.conwon.as_ref().map(countermodel_json),
        "v": r.v.as_ref().map(|(ps, w)| json!({"model": io::pseudo_sphere_to_value(ps), "world": ps.model.world_name(*w)})),
        "transports": r.transports,
    })
}

fn flat_json(r: &FlatReport) -> Value {
    json!({
        "conwon_formula": render_pretty(&r.conwon_formula),
        "v_formula": render_pretty(&r.v_formula),
        "satisfiable": sat_json(&r.satisfiable),
        "falsifiable": sat_json(&r.falsifiable),
        "agree": r.agree(),
        "transports_ok": r.transports_ok(),
    })
}

fn print_flat(r: &FlatReport) {
    println!("conwon: {}", render_pretty(&r.conwon_formula));
    println!("v:      {}", render_pretty(&r.v_formula));
    let yn = |b: bool| if b { "yes" } else { "no" };
    println!(
        "satisfiable:  conwon {}, v {}",
        yn(r.satisfiable.conwon.is_some()),
        yn(r.satisfiable.v.is_some())
    );
    println!("valid up to bound:  conwon {}, v {}", yn(r.valid_conwon()), yn(r.valid_v()));
    for t in r.satisfiable.transports.iter().chain(&r.falsifiable.transports) {
        println!("transport {} at {}: {}", t.direction, t.world, if t.holds { "re-verified" } else { "FAILED" });
    }
    println!("{}", if r.agree() && r.transports_ok() { "agree" } else { "DISAGREE" });
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = cli.output;
    match cli.command {
        Command::Parse { formula, dialect } => {
            let dialect = dialect.unwrap_or_else(|| guess_dialect(&formula));
            let f = parse(&formula, dialect)?;
            let c = f.classify();
            match out {
                Output::Json => print_json(&json!({
                    "formula": render_pretty(&f),
                    "core": conwon::render(&f),
                    "dialect": dialect,
                    "classification": c,
                })),
                Output::Human => {
                    println!("{}", render_pretty(&f));
                    println!("core: {}", conwon::render(&f));
                    println!(
                        "propositional: {}, closed: {}, flat: {}, modal depth: {}",
                        c.is_propositional, c.is_closed, c.is_flat, c.modal_depth
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { model, context, world: name, formula, trace } => {
            let m = load_model(&model)?;
            let c = load_context(&context, &m)?;
            let w = world(&m, &name)?;
            let f = parse(&formula, Dialect::ConWon)?;
            Ok(verdict(eval_at(&m, &c, w, &f, trace, out)?))
        }
        Command::Expected { model, context } => {
            let m = load_model(&model)?;
            let c = load_context(&context, &m)?;
            match out {
                Output::Json => print_json(&context_json(&m, &c)),
                Output::Human => describe_context(&m, &c).iter().for_each(|l| println!("{l}")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Update { model, context, alpha } => {
            let m = load_model(&model)?;
            let c = load_context(&context, &m)?;
            let a = parse(&alpha, Dialect::ConWon)?;
            let ext = extension(&m, &a)?;
            let updated = c.update(&default_label(&a), ext);
            match out {
                Output::Json => print_json(&io::context_to_value(&updated, &m)),
                Output::Human => describe_context(&m, &updated).iter().for_each(|l| println!("{l}")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { formula } => {
            let f = parse(&formula, Dialect::ConWon)?;
            let g = reduction::sigma(&f)?;
            match out {
                Output::Json => print_json(&json!({
                    "input": render_pretty(&f),
                    "output": render_pretty(&g),
                    "modal_depth": g.modal_depth(),
                    "size": g.size(),
                })),
                Output::Human => println!("{}", render_pretty(&g)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Falsify { formula, max_worlds, max_context_len, max_candidates } => {
            let f = parse(&formula, Dialect::ConWon)?;
            let mut bounds = Bounds::new(max_worlds, max_context_len);
            if let Some(cap) = max_candidates {
                bounds.max_candidates = cap;
            }
            let found = find_countermodel(&f, &bounds)?;
            match out {
                Output::Json => print_json(&json!({
                    "formula": render_pretty(&f),
                    "bounds": bounds,
                    "countermodel": found.as_ref().map(countermodel_json),
                })),
                Output::Human => match &found {
                    Some(cm) => {
                        println!("countermodel found");
                        print_countermodel(cm);
                    }
                    None => println!("no countermodel with at most {max_worlds} worlds and context length {max_context_len}"),
                },
            }
            Ok(verdict(found.is_none()))
        }
        Command::CompareV { formula, max_worlds, max_context_len } => {
            let f = parse(&formula, guess_dialect(&formula))?;
            let report = lewis_v::flat_equivalence_check(&f, &Bounds::new(max_worlds, max_context_len))?;
            match out {
                Output::Json => print_json(&flat_json(&report)),
                Output::Human => print_flat(&report),
            }
            Ok(verdict(report.agree() && report.transports_ok()))
        }
        Command::CheckProof { file, system } => {
            let text = io::read_file(&file)?;
            let proof = Proof::from_json(&text, system).with_context(|| format!("{}", file.display()))?;
            let report = check_proof(&proof);
            match out {
                Output::Json => print_json(&serde_json::to_value(&report)?),
                Output::Human => {
                    for d in &report.diagnostics {
                        println!("step {}: {}", d.step, d.message);
                    }
                    match (&report.conclusion, report.accepted) {
                        (Some(c), true) => println!("accepted ({}): {c}", report.system),
                        _ => println!("rejected ({})", report.system),
                    }
                }
            }
            Ok(verdict(report.accepted))
        }
        Command::Examples { action: ExamplesAction::List } => {
            match out {
                Output::Json => print_json(&json!(fixtures::NAMES)),
                Output::Human => fixtures::NAMES.iter().for_each(|n| println!("{n}")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { action: ExamplesAction::Run { name } } => run_example(&name, out),
    }
}

fn run_example(name: &str, out: Output) -> Result<ExitCode> {
    match name {
        "tiger" | "reagan" => {
            let ex = if name == "tiger" { fixtures::tiger() } else { fixtures::reagan() };
            let w = world(&ex.model, ex.world)?;
            if out == Output::Human {
                println!("{} at {}", render_pretty(&ex.formulas[0]), ex.world);
            }
            Ok(verdict(eval_at(&ex.model, &ex.context, w, &ex.formulas[0], true, out)?))
        }
        "nonmono" => {
            let ex = fixtures::nonmono();
            let w = world(&ex.model, ex.world)?;
            let mut values = Vec::new();
            for f in &ex.formulas {
                let (v, _) = eval_traced(&ex.model, &ex.context, w, f)?;
                values.push((render_pretty(f), v));
            }
            let mono = conwon::formula::implies(ex.formulas[0].clone(), ex.formulas[1].clone());
            let found = find_countermodel(&mono, &Bounds::new(2, 3))?;
            match out {
                Output::Json => print_json(&json!({
                    "world": ex.world,
                    "values": values,
                    "monotonicity": render_pretty(&mono),
                    "countermodel": found.as_ref().map(countermodel_json),
                })),
                Output::Human => {
                    for (f, v) in &values {
                        println!("{f} at {}: {v}", ex.world);
                    }
                    println!("{}:", render_pretty(&mono));
                    match &found {
                        Some(cm) => print_countermodel(cm),
                        None => println!("no countermodel within (2, 3)"),
                    }
                }
            }
            Ok(verdict(found.is_none()))
        }
        "fact16" => {
            let m = VModel::Relational(fixtures::fact_relational());
            let f = parse(fixtures::FACT_V_FORMULA, Dialect::V)?;
            let w = world(m.model(), "w1")?;
            let v_value = m.eval(w, &f)?;
            let g = parse(fixtures::FACT_CONWON_FORMULA, Dialect::ConWon)?;
            let found = find_countermodel(&g, &Bounds::new(3, 5))?;
            match out {
                Output::Json => print_json(&json!({
                    "v_formula": render_pretty(&f),
                    "v_value_at_w1": v_value,
                    "conwon_formula": render_pretty(&g),
                    "conwon_countermodel": found.as_ref().map(countermodel_json),
                })),
                Output::Human => {
                    println!("relational model: worlds w1, w2; p at w1; q at w1, w2; w2 < w1 from both worlds");
                    println!("{} at w1: {v_value}", render_pretty(&f));
                    match &found {
                        Some(cm) => {
                            println!("{}: countermodel found", render_pretty(&g));
                            print_countermodel(cm);
                        }
                        None => println!("{}: no countermodel within (3, 5)", render_pretty(&g)),
                    }
                }
            }
            Ok(verdict(v_value))
        }
        "figure1" => {
            let ex = fixtures::figure1();
            match out {
                Output::Json => print_json(&json!({
                    "model": io::model_to_value(&ex.model),
                    "expected": context_json(&ex.model, &ex.context),
                })),
                Output::Human => describe_context(&ex.model, &ex.context).iter().for_each(|l| println!("{l}")),
            }
            Ok(ExitCode::SUCCESS)
        }
        other => bail!("unknown example '{other}'"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
