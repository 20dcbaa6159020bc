//! `lucas-series`: command-line front end for the lucas-dirichlet library.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Complex;

use lucas_dirichlet::additive::AdditiveTuple;
use lucas_dirichlet::characters::{
    character_by_label, common_modulus, enumerate_characters, DirichletCharacter,
};
use lucas_dirichlet::continuation::{
    additive_l_cont, dirichlet_l_cont, shifted_zeta_cont, TruncationPolicy,
};
use lucas_dirichlet::error::{Error, Result};
use lucas_dirichlet::lucas::{LucasParams, LucasSequenceCache};
use lucas_dirichlet::numeric::MultiComplexPoint;
use lucas_dirichlet::poles::{enumerate_poles_additive, enumerate_poles_zeta, PoleBounds, Window};
use lucas_dirichlet::rational::parse_rational;
use lucas_dirichlet::residues::{
    residue_additive_inner, residue_additive_last, residue_dirichlet_inner, residue_dirichlet_last,
    residue_shifted, ResidueOptions,
};
use lucas_dirichlet::series::{
    direct_additive_l, direct_dirichlet_l, direct_shifted_zeta, in_domain, ShiftSpec,
};
use lucas_dirichlet::special::{
    galois_audit, special_additive_exact, special_l_exact, special_zeta_exact,
    symmetrized_special_zeta, NegIntPoint,
};
use lucas_dirichlet::verify::{run_suite, Suite, SuiteOptions};

use output::{Emit, Format};

const EXIT_EVAL: u8 = 1;
const EXIT_SUITE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "lucas-series",
    version,
    about = "Multiple Lucas Dirichlet series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shifted (or, with q = 1, plain) multiple Lucas zeta function.
    EvalZeta(EvalZeta),
    /// Multiple Lucas L-function of Dirichlet characters.
    #[command(name = "eval-L")]
    EvalL(EvalL),
    /// Multiple Lucas L-function of additive characters.
    EvalAdditive(EvalAdditive),
    /// Pole hyperplanes in a window.
    Poles(Poles),
    /// Residue along one pole hyperplane, closed form and contour check.
    Residue(ResidueCmd),
    /// Exact value at a tuple of negative integers.
    Special(Special),
    /// Dirichlet characters modulo q.
    Characters(Characters),
    /// Run identity suites.
    Verify(Verify),
}

#[derive(Args)]
struct ParamArgs {
    /// Lucas parameter P (rational).
    #[arg(long = "P", value_name = "P", allow_hyphen_values = true)]
    big_p: String,
    /// Lucas parameter Q (rational, non-zero).
    #[arg(long = "Q", value_name = "Q", allow_hyphen_values = true)]
    big_q: String,
}

impl ParamArgs {
    fn params(&self) -> Result<LucasParams> {
        LucasParams::new(parse_rational(&self.big_p)?, parse_rational(&self.big_q)?)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Working precision in bits.
    #[arg(long, env = "LUCAS_PREC", default_value_t = 128, value_parser = clap::value_parser!(u32).range(32..))]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct PolicyArgs {
    /// Absolute target accuracy.
    #[arg(long, default_value_t = 1e-20)]
    eps: f64,
    #[arg(long, default_value_t = 16)]
    initial_cutoff: usize,
    #[arg(long, default_value_t = 2)]
    growth: usize,
    #[arg(long, default_value_t = 4096)]
    max_cutoff: usize,
    /// Minimum distance to a pole hyperplane.
    #[arg(long, default_value_t = 1e-6)]
    pole_guard: f64,
}

impl PolicyArgs {
    fn policy(&self) -> Result<TruncationPolicy> {
        let policy = TruncationPolicy {
            initial_cutoff: self.initial_cutoff,
            growth: self.growth,
            max_cutoff: self.max_cutoff,
            epsilon: self.eps,
            pole_guard: self.pole_guard,
        };
        policy.validate()?;
        Ok(policy)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Direct summation when the point is well inside the convergence
    /// domain, continuation otherwise.
    Auto,
    Direct,
    Continued,
}

/// Exactly one function family: shifted zeta, Dirichlet or additive.
#[derive(Args)]
#[group(required = false, multiple = true)]
struct FamilyArgs {
    /// Modulus of the shifted zeta function.
    #[arg(long = "q", conflicts_with_all = ["chars", "f"])]
    modulus: Option<u64>,
    /// Residues r_1, …, r_d in [1, q].
    #[arg(long, value_delimiter = ',', requires = "modulus")]
    r: Vec<u64>,
    /// Character labels `q:index` or `q:quadratic`.
    #[arg(long, value_delimiter = ',', conflicts_with = "f")]
    chars: Vec<String>,
    /// Additive character values f_i(1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Vec<String>,
}

enum Family {
    Shifted(ShiftSpec),
    Dirichlet(Vec<DirichletCharacter>),
    Additive(AdditiveTuple),
}

impl FamilyArgs {
    fn family(&self, prec: u32) -> Result<Family> {
        if !self.chars.is_empty() {
            let chars = self
                .chars
                .iter()
                .map(|l| character_by_label(l))
                .collect::<Result<Vec<_>>>()?;
            common_modulus(&chars)?;
            return Ok(Family::Dirichlet(chars));
        }
        if !self.f.is_empty() {
            let items: Vec<&str> = self.f.iter().map(String::as_str).collect();
            return Ok(Family::Additive(AdditiveTuple::parse(&items, prec)?));
        }
        match self.modulus {
            Some(q) if !self.r.is_empty() => {
                Ok(Family::Shifted(ShiftSpec::new(q, self.r.clone())?))
            }
            _ => Err(Error::InvalidArgument(
                "give --q with --r, --chars, or --f".into(),
            )),
        }
    }
}

fn family_depth(f: &Family) -> usize {
    match f {
        Family::Shifted(s) => s.depth(),
        Family::Dirichlet(c) => c.len(),
        Family::Additive(t) => t.depth(),
    }
}

fn parse_point(items: &[String], prec: u32) -> Result<MultiComplexPoint> {
    let items: Vec<&str> = items.iter().map(String::as_str).collect();
    MultiComplexPoint::parse(&items, prec)
}

#[derive(Args)]
struct EvalZeta {
    #[command(flatten)]
    params: ParamArgs,
    /// Modulus q; q = 1 with all r_i = 1 is the plain multiple zeta function.
    #[arg(long = "q", default_value_t = 1)]
    modulus: u64,
    /// Residues r_i; defaults to all ones.
    #[arg(long, value_delimiter = ',')]
    r: Vec<u64>,
    /// Point s_1, …, s_d as complex literals such as `2`, `0.5-1.5i`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    s: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[command(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EvalL {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    chars: Vec<String>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    s: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[command(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EvalAdditive {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    f: Vec<String>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    s: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[command(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Poles {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    family: FamilyArgs,
    /// Suffix index j of the hyperplane s_j + ⋯ + s_d.
    #[arg(long, default_value_t = 1)]
    j: usize,
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    #[arg(long, default_value_t = 2)]
    n_max: i64,
    /// Window `re_min,re_max,im_min,im_max`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-10.0, 1.0, -20.0, 20.0])]
    window: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ResidueCmd {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    family: FamilyArgs,
    /// Suffix index j; defaults to d.
    #[arg(long)]
    j: Option<usize>,
    /// Total index k' of the pole.
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    n: i64,
    /// The point; `s_j` is solved from the hyperplane equation. For j = d
    /// the first d − 1 coordinates suffice.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    s: Vec<String>,
    #[arg(long, default_value_t = 0.05)]
    max_radius: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Special {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    family: FamilyArgs,
    /// m_1, …, m_d for the point s = −m.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Characters {
    #[arg(long = "q")]
    modulus: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Verify {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

/// Either an evaluation error or a completed identity suite that failed.
enum Failure {
    Eval(Error),
    Suite(Emit),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Eval(e)
    }
}

fn use_direct(method: Method, s: &MultiComplexPoint) -> bool {
    match method {
        Method::Direct => true,
        Method::Continued => false,
        Method::Auto => in_domain(s, 0.25),
    }
}

fn eval_zeta(a: &EvalZeta) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let s = parse_point(&a.s, prec)?;
    let r = if a.r.is_empty() {
        vec![1; s.depth()]
    } else {
        a.r.clone()
    };
    let shift = ShiftSpec::new(a.modulus, r)?;
    let direct = use_direct(a.method, &s);
    let result = if direct {
        direct_shifted_zeta(
            &LucasSequenceCache::new(lp.clone()),
            &shift,
            &s,
            a.policy.eps,
            prec,
        )?
    } else {
        shifted_zeta_cont(&lp, &shift, &s, &a.policy.policy()?, prec)?
    };
    let inputs = output::inputs(&[
        ("P", a.params.big_p.clone()),
        ("Q", a.params.big_q.clone()),
        ("q", shift.q().to_string()),
        ("r", output::join(shift.residues())),
        ("s", a.s.join(",")),
    ]);
    Ok(output::evaluation(
        "eval-zeta",
        &lp,
        inputs,
        direct,
        &s,
        &result,
        prec,
    ))
}

fn eval_l(a: &EvalL) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let s = parse_point(&a.s, prec)?;
    let chars = a
        .chars
        .iter()
        .map(|l| character_by_label(l))
        .collect::<Result<Vec<_>>>()?;
    let direct = use_direct(a.method, &s);
    let result = if direct {
        direct_dirichlet_l(
            &LucasSequenceCache::new(lp.clone()),
            &chars,
            &s,
            a.policy.eps,
            prec,
        )?
    } else {
        dirichlet_l_cont(&lp, &chars, &s, &a.policy.policy()?, prec)?
    };
    let inputs = output::inputs(&[
        ("P", a.params.big_p.clone()),
        ("Q", a.params.big_q.clone()),
        ("chars", a.chars.join(",")),
        ("s", a.s.join(",")),
    ]);
    Ok(output::evaluation(
        "eval-L", &lp, inputs, direct, &s, &result, prec,
    ))
}

fn eval_additive(a: &EvalAdditive) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let s = parse_point(&a.s, prec)?;
    let items: Vec<&str> = a.f.iter().map(String::as_str).collect();
    let f = AdditiveTuple::parse(&items, prec)?;
    let direct = use_direct(a.method, &s);
    let result = if direct {
        direct_additive_l(
            &LucasSequenceCache::new(lp.clone()),
            &f,
            &s,
            a.policy.eps,
            prec,
        )?
    } else {
        additive_l_cont(&lp, &f, &s, &a.policy.policy()?, prec)?
    };
    let inputs = output::inputs(&[
        ("P", a.params.big_p.clone()),
        ("Q", a.params.big_q.clone()),
        ("f", a.f.join(",")),
        ("s", a.s.join(",")),
    ]);
    Ok(output::evaluation(
        "eval-additive",
        &lp,
        inputs,
        direct,
        &s,
        &result,
        prec,
    ))
}

fn poles(a: &Poles) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let family = a.family.family(prec)?;
    let bounds = PoleBounds {
        k_max: a.k_max,
        n_max: a.n_max,
    };
    let [re_min, re_max, im_min, im_max] = a.window[..] else {
        return Err(Error::InvalidArgument(
            "--window takes re_min,re_max,im_min,im_max".into(),
        ));
    };
    let window = Window::new(re_min, re_max, im_min, im_max);
    let d = family_depth(&family);
    let found = match &family {
        Family::Shifted(shift) => {
            enumerate_poles_zeta(&lp, shift.q(), d, a.j, bounds, window, prec)?
        }
        Family::Dirichlet(chars) => {
            enumerate_poles_zeta(&lp, chars[0].modulus(), d, a.j, bounds, window, prec)?
        }
        Family::Additive(f) => enumerate_poles_additive(&lp, f, a.j, bounds, window, prec)?,
    };
    Ok(output::poles(&found, prec))
}

fn residue(a: &ResidueCmd) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let family = a.family.family(prec)?;
    let d = family_depth(&family);
    let j = a.j.unwrap_or(d);
    let mut coords: Vec<Complex> = parse_point_or_empty(&a.s, prec)?;
    if j == d && coords.len() + 1 == d {
        coords.push(Complex::new(prec));
    }
    if coords.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "--s needs {d} coordinates ({} for j = d), got {}",
            d - 1,
            a.s.len()
        )));
    }
    let point = MultiComplexPoint::new(coords)?;
    let mut opts = ResidueOptions::new(prec);
    opts.max_radius = a.max_radius;
    let partial = &point.coords()[..d - 1];
    let value = match &family {
        Family::Shifted(shift) => residue_shifted(&lp, shift, j, a.k, a.n, &point, &opts)?,
        Family::Dirichlet(chars) if j == d => {
            residue_dirichlet_last(&lp, chars, partial, a.k, a.n, &opts)?
        }
        Family::Dirichlet(chars) => {
            residue_dirichlet_inner(&lp, chars, j, a.k, a.n, &point, &opts)?
        }
        Family::Additive(f) if j == d => residue_additive_last(&lp, f, partial, a.k, a.n, &opts)?,
        Family::Additive(f) => residue_additive_inner(&lp, f, j, a.k, a.n, &point, &opts)?,
    };
    Ok(output::residue(j, a.k, a.n, &value, prec))
}

fn parse_point_or_empty(items: &[String], prec: u32) -> Result<Vec<Complex>> {
    if items.is_empty() {
        return Ok(Vec::new());
    }
    Ok(parse_point(items, prec)?.coords().to_vec())
}

fn special(a: &Special) -> Result<Emit> {
    let lp = a.params.params()?;
    let prec = a.out.prec;
    let family = a.family.family(prec)?;
    let m = NegIntPoint::new(a.m.clone())?;
    let (result, galois_ok) = match &family {
        Family::Shifted(shift) => {
            let result = special_zeta_exact(&lp, shift, &m)?;
            let galois = if result.singular {
                None
            } else {
                let (_, terms) = symmetrized_special_zeta(&lp, shift, &m)?;
                Some(galois_audit(&terms, &m))
            };
            (result, galois)
        }
        Family::Dirichlet(chars) => (special_l_exact(&lp, chars, &m)?, None),
        Family::Additive(f) => (special_additive_exact(&lp, f, &m)?, None),
    };
    Ok(output::special(&m, &result, galois_ok, prec))
}

fn characters(a: &Characters) -> Result<Emit> {
    if a.modulus < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    Ok(output::characters(&enumerate_characters(a.modulus)))
}

fn verify(a: &Verify) -> std::result::Result<Emit, Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<_>>>()?
    };
    let opts = SuiteOptions {
        prec: a.out.prec,
        max_depth: a.max_depth,
        seed: a.seed,
        samples: a.samples,
    };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &opts)).collect();
    eprint!("{}", output::summary_table(&reports));
    let passed = reports.iter().all(|r| r.passed());
    let emit = output::verify(&reports);
    if passed {
        Ok(emit)
    } else {
        Err(Failure::Suite(emit))
    }
}

fn run(cli: &Cli) -> (std::result::Result<Emit, Failure>, Format) {
    let eval = |r: Result<Emit>| r.map_err(Failure::from);
    match &cli.command {
        Command::EvalZeta(a) => (eval(eval_zeta(a)), a.out.format),
        Command::EvalL(a) => (eval(eval_l(a)), a.out.format),
        Command::EvalAdditive(a) => (eval(eval_additive(a)), a.out.format),
        Command::Poles(a) => (eval(poles(a)), a.out.format),
        Command::Residue(a) => (eval(residue(a)), a.out.format),
        Command::Special(a) => (eval(special(a)), a.out.format),
        Command::Characters(a) => (eval(characters(a)), a.out.format),
        Command::Verify(a) => (verify(a), a.out.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", output::usage_error(&e.to_string()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (result, format) = run(&cli);
    match result {
        Ok(emit) => {
            print!("{}", emit.render(format));
            ExitCode::SUCCESS
        }
        Err(Failure::Suite(emit)) => {
            print!("{}", emit.render(format));
            ExitCode::from(EXIT_SUITE)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("{}", output::error(&e));
            ExitCode::from(EXIT_EVAL)
        }
    }
}
