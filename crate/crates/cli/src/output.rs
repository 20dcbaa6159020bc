//! JSON and CSV rendering of command results.

use clap::ValueEnum;
use rug::{Complex, Float, Rational};
use serde::Serialize;

use lucas_dirichlet::characters::DirichletCharacter;
use lucas_dirichlet::error::Error;
use lucas_dirichlet::lucas::LucasParams;
use lucas_dirichlet::numeric::{format_float, MultiComplexPoint};
use lucas_dirichlet::poles::{PoleHyperplane, PoleVariant};
use lucas_dirichlet::rational::format_rational;
use lucas_dirichlet::residues::ResidueValue;
use lucas_dirichlet::series::EvalResult;
use lucas_dirichlet::special::{NegIntPoint, SpecialValueResult};
use lucas_dirichlet::verify::SuiteReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One CSV line; the column set is shared by every subcommand.
#[derive(Serialize)]
pub struct Row {
    target: String,
    inputs: String,
    value_re: String,
    value_im: String,
    bound: String,
    status: String,
}

/// A rendered JSON document plus its CSV rows.
pub struct Emit {
    json: String,
    rows: Vec<Row>,
}

impl Emit {
    fn new<T: Serialize>(doc: &T, rows: Vec<Row>) -> Self {
        let json = serde_json::to_string_pretty(doc).expect("plain data serializes");
        Emit { json, rows }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if self.rows.is_empty() {
                    w.write_record([
                        "target", "inputs", "value_re", "value_im", "bound", "status",
                    ])
                    .expect("in-memory write");
                }
                for row in &self.rows {
                    w.serialize(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
        }
    }
}

/// A complex number as decimal strings that re-parse exactly at `prec` bits.
#[derive(Serialize)]
pub struct ComplexOut {
    re: String,
    im: String,
    prec: u32,
}

fn complex_out(z: &Complex, prec: u32) -> ComplexOut {
    ComplexOut {
        re: format_float(&Float::with_val(prec, z.real())),
        im: format_float(&Float::with_val(prec, z.imag())),
        prec,
    }
}

fn row(target: &str, inputs: &str, value: Option<&ComplexOut>, bound: String, status: &str) -> Row {
    Row {
        target: target.into(),
        inputs: inputs.into(),
        value_re: value.map(|v| v.re.clone()).unwrap_or_default(),
        value_im: value.map(|v| v.im.clone()).unwrap_or_default(),
        bound,
        status: status.into(),
    }
}

pub fn inputs(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct EvalReport {
    target: String,
    method: &'static str,
    #[serde(rename = "P")]
    big_p: String,
    #[serde(rename = "Q")]
    big_q: String,
    inputs: String,
    s: Vec<ComplexOut>,
    value: ComplexOut,
    truncation_tail_bound: f64,
    rounding_bound: f64,
    error_bound: f64,
    terms_used: usize,
}

pub fn evaluation(
    target: &str,
    params: &LucasParams,
    inputs: String,
    direct: bool,
    s: &MultiComplexPoint,
    result: &EvalResult,
    prec: u32,
) -> Emit {
    let doc = EvalReport {
        target: target.into(),
        method: if direct { "direct" } else { "continued" },
        big_p: format_rational(params.p()),
        big_q: format_rational(params.q()),
        inputs,
        s: s.coords().iter().map(|z| complex_out(z, prec)).collect(),
        value: complex_out(&result.value, prec),
        truncation_tail_bound: result.truncation_tail_bound,
        rounding_bound: result.rounding_bound,
        error_bound: result.error_bound(),
        terms_used: result.terms_used,
    };
    let r = row(
        target,
        &doc.inputs,
        Some(&doc.value),
        format!("{:e}", doc.error_bound),
        "ok",
    );
    Emit::new(&doc, vec![r])
}

#[derive(Serialize)]
struct HyperplaneOut {
    variant: PoleVariant,
    j: usize,
    k_sum: usize,
    multi_index_count: u64,
    n: i64,
    ell: u64,
    location: ComplexOut,
}

#[derive(Serialize)]
struct PolesReport {
    target: &'static str,
    count: usize,
    hyperplanes: Vec<HyperplaneOut>,
}

pub fn poles(found: &[PoleHyperplane], prec: u32) -> Emit {
    let hyperplanes: Vec<HyperplaneOut> = found
        .iter()
        .map(|h| HyperplaneOut {
            variant: h.variant,
            j: h.j,
            k_sum: h.k_sum,
            multi_index_count: h.multi_index_count,
            n: h.n,
            ell: h.ell,
            location: complex_out(&h.location, prec),
        })
        .collect();
    let rows = hyperplanes
        .iter()
        .map(|h| {
            let inputs = format!("j={};k={};n={};l={}", h.j, h.k_sum, h.n, h.ell);
            row("pole", &inputs, Some(&h.location), String::new(), "ok")
        })
        .collect();
    let doc = PolesReport {
        target: "poles",
        count: hyperplanes.len(),
        hyperplanes,
    };
    Emit::new(&doc, rows)
}

#[derive(Serialize)]
struct ResidueReport {
    target: &'static str,
    j: usize,
    k: usize,
    n: i64,
    location: ComplexOut,
    closed_form: ComplexOut,
    numeric_check: ComplexOut,
    rel_error: f64,
    radius: f64,
    nodes: usize,
}

pub fn residue(j: usize, k: usize, n: i64, v: &ResidueValue, prec: u32) -> Emit {
    let doc = ResidueReport {
        target: "residue",
        j,
        k,
        n,
        location: complex_out(&v.location, prec),
        closed_form: complex_out(&v.closed_form, prec),
        numeric_check: complex_out(&v.numeric_check, prec),
        rel_error: v.rel_error,
        radius: v.radius,
        nodes: v.nodes,
    };
    let inputs = format!("j={j};k={k};n={n}");
    let r = row(
        "residue",
        &inputs,
        Some(&doc.closed_form),
        format!("{:e}", v.rel_error),
        "ok",
    );
    Emit::new(&doc, vec![r])
}

#[derive(Serialize)]
struct SpecialReport {
    target: &'static str,
    m: Vec<u32>,
    /// `num/den` when rational, otherwise `a + b*sqrt(N)`.
    value: Option<String>,
    rational: bool,
    singular: bool,
    /// No denominator of the finite sum vanishes.
    holomorphic: bool,
    /// The parity criterion, where one applies.
    predicate_holomorphic: Option<bool>,
    galois_ok: Option<bool>,
    square_discriminant: bool,
    numeric: Option<ComplexOut>,
}

pub fn special(
    m: &NegIntPoint,
    r: &SpecialValueResult,
    galois_ok: Option<bool>,
    prec: u32,
) -> Emit {
    let value = r.value.as_ref().map(|v| {
        if v.is_rational() {
            format_rational(v.rational_part())
        } else {
            v.to_string()
        }
    });
    let numeric = r.value.as_ref().map(|v| {
        let x = v.to_real(prec + 16).0;
        complex_out(&Complex::with_val(prec, (x, 0)), prec)
    });
    let doc = SpecialReport {
        target: "special",
        m: m.values().to_vec(),
        value,
        rational: r.is_rational,
        singular: r.singular,
        holomorphic: !r.singular,
        predicate_holomorphic: r.predicate_holomorphic,
        galois_ok,
        square_discriminant: r.square_discriminant,
        numeric,
    };
    let inputs = format!(
        "m={}",
        join(&m.values().iter().map(|&v| v as u64).collect::<Vec<_>>())
    );
    let status = if r.singular { "singular" } else { "ok" };
    let rw = row(
        "special",
        &inputs,
        doc.numeric.as_ref(),
        String::new(),
        status,
    );
    Emit::new(&doc, vec![rw])
}

#[derive(Serialize)]
struct CharacterOut {
    label: String,
    index: usize,
    modulus: u64,
    principal: bool,
    real: bool,
    primitive: bool,
    /// `χ(n)` for `n = 0, …, q − 1`: `0`, `1`, `-1`, or `e(a/b)` for
    /// `exp(2πi·a/b)`.
    values: Vec<String>,
}

fn value_string(chi: &DirichletCharacter, n: u64) -> String {
    match chi.value_exponent(n as i64) {
        None => "0".into(),
        Some(v) => {
            let t = Rational::from((v, chi.value_order()));
            if t == 0 {
                "1".into()
            } else if t == Rational::from((1, 2)) {
                "-1".into()
            } else {
                format!("e({}/{})", t.numer(), t.denom())
            }
        }
    }
}

pub fn characters(chars: &[DirichletCharacter]) -> Emit {
    let list: Vec<CharacterOut> = chars
        .iter()
        .map(|c| CharacterOut {
            label: c.label(),
            index: c.index(),
            modulus: c.modulus(),
            principal: c.is_principal(),
            real: c.is_real(),
            primitive: c.is_primitive(),
            values: (0..c.modulus()).map(|n| value_string(c, n)).collect(),
        })
        .collect();
    let rows = list
        .iter()
        .map(|c| {
            row(
                "character",
                &c.label,
                None,
                String::new(),
                &c.values.join(" "),
            )
        })
        .collect();
    Emit::new(&list, rows)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    target: &'static str,
    passed: bool,
    suites: &'a [SuiteReport],
}

pub fn verify(reports: &[SuiteReport]) -> Emit {
    let doc = VerifyReport {
        target: "verify",
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    };
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(|c| Row {
                target: r.suite.clone(),
                inputs: c.name.clone(),
                value_re: c.metric.map(|m| format!("{m:e}")).unwrap_or_default(),
                value_im: String::new(),
                bound: String::new(),
                status: if c.passed { "pass" } else { "fail" }.into(),
            })
        })
        .collect();
    Emit::new(&doc, rows)
}

pub fn summary_table(reports: &[SuiteReport]) -> String {
    let mut out = format!(
        "{:<16} {:>7} {:>7} {:>12}  status\n",
        "suite", "checks", "failed", "max metric"
    );
    for r in reports {
        let metric = r
            .max_metric()
            .map(|m| format!("{m:.3e}"))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<16} {:>7} {:>7} {:>12}  {}\n",
            r.suite,
            r.checks.len(),
            r.failures().count(),
            metric,
            if r.passed() { "pass" } else { "FAIL" }
        ));
    }
    out
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
}

pub fn error(e: &Error) -> String {
    serde_json::to_string(&Diagnostic {
        error: e.kind(),
        message: e.to_string(),
    })
    .expect("plain data serializes")
}

pub fn usage_error(message: &str) -> String {
    serde_json::to_string(&Diagnostic {
        error: "usage",
        message: message.trim_end().to_string(),
    })
    .expect("plain data serializes")
}
