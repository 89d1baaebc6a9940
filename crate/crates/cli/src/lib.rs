//! Command dispatch for `dreg`. Every verb builds a [`Report`]; `run` turns
//! it into text or JSON and an exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dreg_core::algebra::{Budget, Point};
use dreg_core::corpus::{self, CORPUS};
use dreg_core::dmod::{bernstein_check, characteristic_variety, is_holonomic, kashiwara_regular_at};
use dreg_core::parse::{infer_nvars, parse_chart, parse_point, parse_system, parse_univar, parse_weyl};
use dreg_core::polelattice::{
    pole_filtration_annihilator, pole_goodness, prop21_inclusion, theorem_backward_for_operator,
    theorem_forward_filtration, NCChart,
};
use dreg_core::regularity::{
    fuchs_regular_at, newton_polygon, regular_on_projective_line, theta_regular_at, UnivarOperator, Verdict,
};
use dreg_core::systems::{default_max_steps, regular_system_report, saturate_lattice, ConnectionSystem, Saturation};
use dreg_core::weyl::{characteristic_ideal, variable_names};
use dreg_core::Error;

pub const SCHEMA: &str = "dreg-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_CONTRADICTION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dreg", version, about = "Regular singularities of differential operators, systems and D-modules")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,

    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,

    /// Cap on S-pairs per Groebner run and on saturation steps.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Inline expression (`;` separates generators).
    pub expr: Option<String>,
    /// Read the input from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Order test on monic coefficients, at one point or over the whole line.
    Fuchs {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        point: Option<String>,
    },
    /// θ-form test.
    Theta {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "0")]
        point: String,
    },
    /// Newton polygon and its slopes.
    Newton {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "0")]
        point: String,
    },
    /// Graded annihilator test on the cyclic filtration.
    Kashiwara {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "0")]
        point: String,
    },
    /// Fuchs and Kashiwara verdicts side by side; disagreement exits with 3.
    Compare {
        #[command(flatten)]
        input: Input,
        /// Defaults to every rational singular point and infinity.
        #[arg(long)]
        point: Option<String>,
    },
    /// Characteristic variety of `A_n / (generators)`.
    Charvar {
        #[command(flatten)]
        input: Input,
        /// Variable names, e.g. `x,y`; inferred from the input if omitted.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Dimension checks: Bernstein inequality and holonomicity.
    Holonomic {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Graded annihilator of the pole filtration on a chart, or the
    /// inclusion check for a logarithmic lattice given with `--file`.
    Polelattice {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        d: Option<usize>,
        /// Symbol degree bound N.
        #[arg(long = "bound", short = 'N', default_value_t = 6)]
        bound: usize,
        /// Goodness is checked for levels 0..=goodness.
        #[arg(long, default_value_t = 3)]
        goodness: usize,
    },
    /// Forward direction for a `.chart` lattice, backward direction for an operator.
    Theorem {
        #[command(flatten)]
        input: Input,
        #[arg(long = "bound", short = 'N', default_value_t = 4)]
        bound: usize,
        #[arg(long, default_value = "0")]
        point: String,
        /// Pole order of the ∂-action (defaults to the observed one).
        #[arg(long)]
        s: Option<i64>,
    },
    /// Cyclic vector, Fuchs test and lattice saturation for a system; an
    /// inline operator is turned into its companion system.
    System {
        #[command(flatten)]
        input: Input,
        /// Only saturate at this point.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Runs the built-in named operators against their recorded verdicts.
    Corpus {
        /// Restrict to one entry.
        name: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(Error::Contradiction(_)) => EXIT_CONTRADICTION,
            _ => EXIT_INPUT,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_BUDGET => "budget_exceeded",
            EXIT_CONTRADICTION => "contradiction",
            _ => "input",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }
}

type Res<T> = Result<T, CliError>;

#[derive(Serialize, Debug, Clone)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub verdicts: Vec<Value>,
    pub certificates: Vec<Value>,
    pub transcripts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdicts: Vec::new(),
            certificates: Vec::new(),
            transcripts: Vec::new(),
            error: None,
        }
    }

    fn input(&mut self, k: &str, v: impl Serialize) {
        self.inputs.insert(k.into(), to_value(v));
    }

    fn cert(&mut self, v: impl Serialize) {
        self.certificates.push(to_value(v));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dreg {}\n", self.command);
        for (k, v) in &self.inputs {
            out += &format!("  {k}: {}\n", scalar(v));
        }
        for v in &self.verdicts {
            match v {
                Value::Object(m) => {
                    let cells: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                    out += &format!("{}\n", cells.join("  "));
                }
                other => out += &format!("{}\n", scalar(other)),
            }
        }
        for t in &self.transcripts {
            out += &format!("# {t}\n");
        }
        if let Some(e) = &self.error {
            out += &format!("error ({}): {}\n", e.kind, e.message);
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

/// Result of one invocation: what goes to stdout and stderr, and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (report, code) = execute(&cli);
    let stdout = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let stderr = report.error.as_ref().map_or(String::new(), |e| format!("dreg: {}\n", e.message));
    Outcome { code, stdout, stderr }
}

/// Runs a parsed command. A failing analysis still yields a report, with
/// `error` set.
pub fn execute(cli: &Cli) -> (Report, i32) {
    let mut report = Report::new(verb_name(&cli.verb));
    if let Some(b) = cli.budget {
        report.input("budget", b);
    }
    match dispatch(cli, &mut report) {
        Ok(code) => (report, code),
        Err(e) => {
            let code = e.exit_code();
            report.error = Some(ErrorInfo {
                kind: e.kind(),
                message: e.message(),
            });
            (report, code)
        }
    }
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Fuchs { .. } => "fuchs",
        Verb::Theta { .. } => "theta",
        Verb::Newton { .. } => "newton",
        Verb::Kashiwara { .. } => "kashiwara",
        Verb::Compare { .. } => "compare",
        Verb::Charvar { .. } => "charvar",
        Verb::Holonomic { .. } => "holonomic",
        Verb::Polelattice { .. } => "polelattice",
        Verb::Theorem { .. } => "theorem",
        Verb::System { .. } => "system",
        Verb::Corpus { .. } => "corpus",
    }
}

fn read_input(input: &Input, report: &mut Report) -> Res<String> {
    match (&input.expr, &input.file) {
        (Some(e), None) => {
            report.input("expr", e);
            Ok(e.clone())
        }
        (None, Some(f)) => {
            report.input("file", f.display().to_string());
            std::fs::read_to_string(f).map_err(|e| CliError::Input(format!("cannot read {}: {e}", f.display())))
        }
        (Some(_), Some(_)) => Err(CliError::Input("give either an expression or --file, not both".into())),
        (None, None) => Err(CliError::Input("missing input: give an expression or --file".into())),
    }
}

fn operator(input: &Input, report: &mut Report) -> Res<UnivarOperator> {
    let text = read_input(input, report)?;
    let p = parse_univar(&text)?;
    if p.is_zero() {
        return Err(CliError::Core(Error::ZeroElement("zero operator")));
    }
    report.input("operator", p.to_string());
    Ok(p)
}

fn point(text: &str, report: &mut Report) -> Res<Point> {
    let p = parse_point(text)?;
    report.input("point", &p);
    Ok(p)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Regular => "regular",
        Verdict::Irregular => "irregular",
    }
}

fn regular_str(b: bool) -> &'static str {
    verdict_str(Verdict::from_bool(b))
}

fn budget(cli: &Cli) -> Budget {
    cli.budget.map_or_else(Budget::default, Budget::with_pairs)
}

fn nvars_from(vars: &Option<String>, text: &str, report: &mut Report) -> Res<usize> {
    let n = match vars {
        None => infer_nvars(text)?,
        Some(v) => {
            let names: Vec<&str> = v.split(',').map(str::trim).collect();
            let expected = variable_names(names.len());
            if names.iter().zip(&expected).any(|(a, b)| a != b) {
                return Err(CliError::Input(format!(
                    "variables must be named {} in this order",
                    expected.join(",")
                )));
            }
            names.len()
        }
    };
    report.input("vars", variable_names(n));
    Ok(n)
}

fn dispatch(cli: &Cli, report: &mut Report) -> Res<i32> {
    match &cli.verb {
        Verb::Fuchs { input, point: pt } => {
            let p = operator(input, report)?;
            match pt {
                Some(t) => {
                    let pt = point(t, report)?;
                    let c = fuchs_regular_at(&p, &pt)?;
                    report.verdicts.push(json!({"point": pt, "fuchs": verdict_str(c.verdict)}));
                    report.cert(c);
                }
                None => {
                    let r = regular_on_projective_line(&p)?;
                    for c in &r.certificates {
                        report.verdicts.push(json!({"point": c.point, "fuchs": verdict_str(c.verdict)}));
                    }
                    for u in &r.untested {
                        report.transcripts.push(format!("untested factor {}: {}", u.factor, u.reason));
                    }
                    report.verdicts.push(json!({"global": r.verdict}));
                    report.cert(r);
                }
            }
        }
        Verb::Theta { input, point: pt } => {
            let p = operator(input, report)?;
            let pt = point(pt, report)?;
            let w = theta_regular_at(&p, &pt)?;
            report.verdicts.push(json!({"point": pt, "theta": regular_str(w.regular)}));
            report.cert(w);
        }
        Verb::Newton { input, point: pt } => {
            let p = operator(input, report)?;
            let pt = point(pt, report)?;
            let np = newton_polygon(&p, &pt)?;
            let slopes = to_value(&np)["slopes"].clone();
            report.verdicts.push(json!({"point": pt, "newton": regular_str(np.is_regular()), "slopes": slopes}));
            report.cert(np);
        }
        Verb::Kashiwara { input, point: pt } => {
            let p = operator(input, report)?;
            let pt = point(pt, report)?;
            let k = kashiwara_regular_at(&p, &pt)?;
            report.verdicts.push(json!({"point": pt, "kashiwara": regular_str(k.regular)}));
            report.cert(k);
        }
        Verb::Compare { input, point: pt } => {
            let p = operator(input, report)?;
            let points = match pt {
                Some(t) => vec![point(t, report)?],
                None => regular_on_projective_line(&p)?.singular_points,
            };
            let mut disagreements = 0;
            for pt in points {
                let f = fuchs_regular_at(&p, &pt)?;
                let k = kashiwara_regular_at(&p, &pt)?;
                let agree = f.verdict.is_regular() == k.regular;
                if !agree {
                    disagreements += 1;
                }
                report.verdicts.push(json!({
                    "point": pt,
                    "fuchs": verdict_str(f.verdict),
                    "kashiwara": regular_str(k.regular),
                    "agree": agree,
                }));
                report.cert(json!({"fuchs": f, "kashiwara": k}));
            }
            if disagreements > 0 {
                report.transcripts.push(format!("{disagreements} point(s) where the two tests disagree"));
                return Ok(EXIT_CONTRADICTION);
            }
        }
        Verb::Charvar { input, vars } | Verb::Holonomic { input, vars } => {
            let text = read_input(input, report)?;
            let n = nvars_from(vars, &text, report)?;
            let gens = parse_weyl(&text, n)?;
            report.input("generators", gens.iter().map(|g| g.to_string()).collect::<Vec<_>>());
            let b = budget(cli);
            let ideal = characteristic_ideal(&gens, &b)?;
            report
                .transcripts
                .push(format!("characteristic ideal from a Weyl Groebner basis: {ideal}"));
            if matches!(cli.verb, Verb::Charvar { .. }) {
                let cv = characteristic_variety(ideal, &b)?;
                for c in &cv.components {
                    let mut v = to_value(c);
                    v["component"] = v["kind"].take();
                    v.as_object_mut().unwrap().remove("kind");
                    report.verdicts.push(v);
                }
                let holonomic = cv.is_holonomic(&b)?;
                report.verdicts.push(json!({
                    "components": cv.components.len(),
                    "dimension": cv.dimension,
                    "holonomic": holonomic,
                    "verified": cv.verified,
                }));
                report.cert(cv);
            } else {
                let dim = ideal.dimension(&b)?;
                let holonomic = is_holonomic(&ideal, n, &b)?;
                let bernstein = bernstein_check(&ideal, n, &b)?;
                report.verdicts.push(json!({
                    "n": n,
                    "dimension": dim,
                    "bernstein": bernstein,
                    "holonomic": holonomic,
                }));
                report.cert(json!({"characteristic_ideal": ideal.render_gens()}));
                if !bernstein {
                    return Err(CliError::Core(Error::Contradiction(format!(
                        "dimension {dim} below n = {n}"
                    ))));
                }
            }
        }
        Verb::Polelattice { file, n, r, d, bound, goodness } => match file {
            Some(f) => {
                report.input("file", f.display().to_string());
                report.input("bound", bound);
                let text = std::fs::read_to_string(f)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", f.display())))?;
                let lattice = parse_chart(&text)?;
                report.input("chart", lattice.chart);
                let rep = prop21_inclusion(&lattice, *bound)?;
                report.verdicts.push(json!({
                    "inclusion": if rep.holds { "holds" } else { "fails" },
                    "method": rep.method,
                    "violations": rep.violations.len(),
                }));
                report.cert(rep);
            }
            None => {
                let chart = NCChart::with_shift(*n, *r, d.unwrap_or(*r))?;
                report.input("chart", chart);
                report.input("bound", bound);
                let ann = pole_filtration_annihilator(&chart, *bound, &budget(cli))?;
                let levels = pole_goodness(&chart, *goodness);
                let first_good = levels.iter().find(|l| l.good).map(|l| l.j);
                report.verdicts.push(json!({
                    "annihilator": ann.ideal.render_gens(),
                    "equals_theta": ann.equals_theta,
                    "radical": dreg_core::polelattice::theta_xz_is_radical(&chart)?,
                    "good_from": first_good,
                }));
                report.cert(ann);
                report.cert(levels);
            }
        },
        Verb::Theorem { input, bound, point: pt, s } => {
            let chart_file = input.file.as_ref().is_some_and(|f| f.extension().is_some_and(|e| e == "chart"));
            if chart_file {
                let text = read_input(input, report)?;
                let lattice = parse_chart(&text)?;
                report.input("chart", lattice.chart);
                report.input("bound", bound);
                let rep = theorem_forward_filtration(&lattice, *bound)?;
                report.verdicts.push(json!({
                    "direction": "forward",
                    "stable": rep.stable,
                    "radical": rep.radical,
                    "inclusion": rep.prop21.as_ref().map(|p| p.holds),
                    "annihilator_is_theta": rep.annihilator_is_theta,
                }));
                report.cert(rep);
            } else {
                let p = operator(input, report)?;
                let pt = point(pt, report)?;
                if let Some(s) = s {
                    report.input("s", s);
                }
                let rep = theorem_backward_for_operator(&p, &pt, *s)?;
                report.verdicts.push(json!({
                    "direction": "backward",
                    "point": pt,
                    "s": rep.s,
                    "power_stable": rep.power_stable,
                    "theta_stable": rep.theta_stable,
                    "verdict": rep.verdict,
                }));
                report.cert(rep);
            }
        }
        Verb::System { input, point: pt, max_steps } => {
            let sys = match (&input.expr, &input.file) {
                (Some(_), None) => {
                    let p = operator(input, report)?;
                    ConnectionSystem::companion(&p)?
                }
                _ => parse_system(&read_input(input, report)?)?,
            };
            report.input("system", &sys);
            let cap = |d: usize| -> usize {
                let d = max_steps.unwrap_or(d);
                cli.budget.map_or(d, |b| d.min(b))
            };
            match pt {
                Some(t) => {
                    let pt = point(t, report)?;
                    let steps = cap(default_max_steps(&sys, &pt));
                    let sat = saturate_lattice(&sys, &pt, Some(steps));
                    report.verdicts.push(json!({"point": pt, "saturation": saturation_str(&sat)}));
                    report.cert(sat);
                }
                None => {
                    let rep = regular_system_report(&sys)?;
                    report.transcripts.push(format!("cyclic vector operator: {}", rep.cyclic_vector.operator));
                    for pr in &rep.points {
                        report.verdicts.push(json!({
                            "point": pr.point,
                            "fuchs": verdict_str(pr.fuchs),
                            "saturation": saturation_str(&pr.saturation),
                        }));
                    }
                    for u in &rep.untested {
                        report.transcripts.push(format!("untested factor {}: {}", u.factor, u.reason));
                    }
                    report.verdicts.push(json!({"global": rep.verdict}));
                    report.cert(rep);
                }
            }
        }
        Verb::Corpus { name } => {
            let entries: Vec<_> = match name {
                Some(n) => {
                    report.input("name", n);
                    vec![corpus::find(n).ok_or_else(|| CliError::Input(format!("no corpus entry `{n}`")))?]
                }
                None => CORPUS.iter().collect(),
            };
            let mut mismatches = 0;
            for e in entries {
                let p = e.operator();
                for (pt, expected) in e.expected() {
                    let f = fuchs_regular_at(&p, &pt)?.verdict;
                    let k = Verdict::from_bool(kashiwara_regular_at(&p, &pt)?.regular);
                    let ok = f == expected && k == expected;
                    if !ok {
                        mismatches += 1;
                    }
                    report.verdicts.push(json!({
                        "name": e.name,
                        "operator": p.to_string(),
                        "point": pt,
                        "expected": verdict_str(expected),
                        "fuchs": verdict_str(f),
                        "kashiwara": verdict_str(k),
                        "agree": f == k,
                        "matches": ok,
                    }));
                }
            }
            if mismatches > 0 {
                report.transcripts.push(format!("{mismatches} corpus point(s) off their recorded verdict"));
                return Ok(EXIT_CONTRADICTION);
            }
        }
    }
    Ok(EXIT_OK)
}

fn saturation_str(s: &Saturation) -> &'static str {
    match s {
        Saturation::Stabilized { .. } => "stabilized",
        Saturation::ExceededBound { .. } => "exceeded_bound",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(CliError::Input("x".into()).exit_code(), EXIT_INPUT);
        let b = Error::BudgetExceeded { what: "S-pairs", limit: 1 };
        assert_eq!(CliError::Core(b).exit_code(), EXIT_BUDGET);
        assert_eq!(CliError::Core(Error::Contradiction("x".into())).exit_code(), EXIT_CONTRADICTION);
    }

    #[test]
    fn text_format_lists_verdicts() {
        let o = run(["dreg", "--format", "text", "fuchs", "d^2 - x"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("point=inf  fuchs=irregular") || o.stdout.contains("fuchs=irregular  point=inf"), "{}", o.stdout);
    }

    #[test]
    fn usage_errors_exit_one() {
        let o = run(["dreg", "frobnicate"]);
        assert_eq!(o.code, EXIT_INPUT);
        let o = run(["dreg", "fuchs"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stdout.contains("\"kind\": \"input\""));
    }
}
