//! The `kotriple` command line: tables, the mnemonic derivation, exemplars,
//! products, sweeps and the DGA checks.

pub mod render;
pub mod report;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use kotriple_core::dga::{
    dga_tensor, exterior_example, odd_line_example, trivial_example, validate_dga, DgaError,
    StarDGA,
};
use kotriple_core::exemplars::{build_exemplar, ExemplarCatalog};
use kotriple_core::kosigns::{
    classic_table, complete_table, derive_table_mnemonic, extended_table, DiracChoice, KOClass,
    Sign,
};
use kotriple_core::products::{
    default_convention, graded_product, traditional_product, KozulConvention, ProductError,
};
use kotriple_core::ExactComplex;
use serde_json::json;

pub use report::RunReport;

#[derive(Debug, Parser)]
#[command(
    name = "kotriple",
    version,
    about = "KO-dimension signs and graded products of finite real spectral triples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Classic,
    Extended,
    Complete,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    First,
    Second,
}

impl From<ConventionArg> for KozulConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::First => KozulConvention::First,
            ConventionArg::Second => KozulConvention::Second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiracArg {
    #[value(name = "D")]
    D,
    #[value(name = "Dtilde")]
    DTilde,
}

impl From<DiracArg> for DiracChoice {
    fn from(c: DiracArg) -> Self {
        match c {
            DiracArg::D => DiracChoice::D,
            DiracArg::DTilde => DiracChoice::DTilde,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a sign table or the graded product table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        #[arg(long)]
        json: bool,
    },
    /// Derive the complete table from the product rules.
    Mnemonic {
        #[arg(long)]
        json: bool,
    },
    /// Multiply the exemplars of two classes.
    Product {
        class_i: KOClass,
        class_j: KOClass,
        #[arg(long, value_enum, conflicts_with = "traditional")]
        convention: Option<ConventionArg>,
        /// Use the ungraded product with J = J_i ⊗ J_j.
        #[arg(long)]
        traditional: bool,
        #[arg(long, value_enum, requires = "traditional", default_value = "D")]
        dirac: DiracArg,
        #[arg(long)]
        json: bool,
        /// Write the product triple as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every product, equivalence and associativity sample.
    Sweep {
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Validate the example *-DGAs and their graded tensor products.
    DgaCheck {
        #[arg(long)]
        json: bool,
    },
    /// Build the exemplar triple of a class.
    Exemplar {
        class: KOClass,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn usage(msg: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: msg,
            code: 2,
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Outcome> {
    std::fs::write(path, contents)
        .map_err(|e| Outcome::usage(format!("cannot write {}: {e}\n", path.display())))
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Table { which, json } => cmd_table(which, json),
        Command::Mnemonic { json } => cmd_mnemonic(json),
        Command::Product {
            class_i,
            class_j,
            convention,
            traditional,
            dirac,
            json,
            out,
        } => {
            let prescription = if traditional {
                Err(dirac.into())
            } else {
                Ok(convention.map(Into::into))
            };
            cmd_product(class_i, class_j, prescription, json, out.as_ref())
        }
        Command::Sweep { parallel, json } => {
            let r = cmd_sweep(parallel);
            let text = if json {
                r.to_json() + "\n"
            } else {
                r.render_text()
            };
            Outcome::with_code(text, r.exit_status)
        }
        Command::DgaCheck { json } => {
            let r = cmd_dga_check();
            let text = if json {
                r.to_json() + "\n"
            } else {
                r.render_text()
            };
            Outcome::with_code(text, r.exit_status)
        }
        Command::Exemplar { class, out } => cmd_exemplar(class, out.as_ref()),
    }
}

pub fn cmd_table(which: TableKind, json: bool) -> Outcome {
    let text = match (which, json) {
        (TableKind::Classic, false) => render::classic_text(),
        (TableKind::Extended, false) => render::extended_text(),
        (TableKind::Complete, false) => render::complete_text(),
        (TableKind::Product, false) => render::product_text(),
        (TableKind::Classic, true) => pretty(&classic_table()),
        (TableKind::Extended, true) => pretty(&extended_table()),
        (TableKind::Complete, true) => pretty(&complete_table()),
        (TableKind::Product, true) => pretty(&render::product_rows()),
    };
    Outcome::ok(text)
}

pub fn cmd_mnemonic(json: bool) -> Outcome {
    match derive_table_mnemonic() {
        Ok(m) => {
            let matches = m.matches_stored_table();
            let mut text = if json {
                pretty(&m)
            } else {
                render::mnemonic_text(&m)
            };
            if !json {
                text.push_str(if matches {
                    "derived table equals the stored table\n"
                } else {
                    "derived table DIFFERS from the stored table\n"
                });
            }
            Outcome::with_code(text, if matches { 0 } else { 1 })
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: 1,
        },
    }
}

/// `Ok(convention)` for a graded product (default by parity when `None`),
/// `Err(choice)` for the traditional one.
pub type ProductRequest = Result<Option<KozulConvention>, DiracChoice>;

pub fn cmd_product(
    ci: KOClass,
    cj: KOClass,
    request: ProductRequest,
    json: bool,
    out: Option<&PathBuf>,
) -> Outcome {
    let build = |c| build_exemplar(c).map(|e| e.triple);
    let (ti, tj) = match (build(ci), build(cj)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return Outcome::with_code(String::new(), 1).with_stderr(e.to_string())
        }
    };
    let (label, result) = match request {
        Ok(conv) => {
            let k = conv.unwrap_or_else(|| default_convention(ci.parity(), cj.parity()));
            (
                format!("graded, {k} convention"),
                graded_product(&ti, &tj, k),
            )
        }
        Err(choice) => (
            format!("traditional, choice {choice}"),
            traditional_product(&ti, &tj, choice),
        ),
    };
    match result {
        Ok(r) => {
            if let Some(path) = out {
                if let Err(o) = write_file(path, &r.result.to_json()) {
                    return o;
                }
            }
            let code = if r.all_checks_pass() { 0 } else { 1 };
            if json {
                return Outcome::with_code(pretty(&r), code);
            }
            let mut text = format!("product {ci} × {cj} ({label})\n");
            text += &format!("  hilbert dim  {}\n", r.hilbert_dim);
            text += &format!("  predicted    {}\n", r.predicted);
            text += &format!("  extracted    {}\n", r.extracted);
            text += &format!("  class        {}\n", r.class);
            for (name, ok) in &r.checks {
                text += &format!("  {:<5} {name}\n", if *ok { "ok" } else { "FAIL" });
            }
            Outcome::with_code(text, code)
        }
        Err(e) => {
            let code = match e {
                ProductError::UnsupportedConvention { .. } => 2,
                _ => 1,
            };
            let text = if json {
                pretty(&json!({ "pair": [ci, cj], "error": e }))
            } else {
                format!("product {ci} × {cj} ({label})\n  {e}\n{}", explain(&e))
            };
            Outcome::with_code(text, code)
        }
    }
}

fn explain(e: &ProductError) -> String {
    match e {
        ProductError::UndefinedProduct { relation, .. } => format!(
            "  the product real structure satisfies neither sign of {relation}, so the product has no KO-dimension\n"
        ),
        ProductError::Sign(kotriple_core::SignError::VariantMismatch { .. }) => {
            "  an upper and a lower real structure cannot be combined: the product has no KO-dimension\n".to_string()
        }
        _ => String::new(),
    }
}

impl Outcome {
    fn with_stderr(mut self, msg: String) -> Self {
        self.stderr = msg + "\n";
        self
    }
}

pub fn cmd_sweep(parallel: bool) -> RunReport {
    let mut r = RunReport::new(format!(
        "sweep{}",
        if parallel { " --parallel" } else { "" }
    ));
    let cat = match ExemplarCatalog::build() {
        Ok(c) => c,
        Err(e) => {
            r.check("exemplar_catalog", false, e.to_string());
            return r;
        }
    };
    r.check("exemplar_catalog", true, "16 classes");

    let cases = sweep::graded_cases(&cat, parallel);
    let (same, mixed): (Vec<_>, Vec<_>) = cases.iter().partition(|c| c.expected.is_some());
    let pairs = |v: &[&sweep::GradedCase]| {
        let mut p: Vec<_> = v.iter().map(|c| c.pair).collect();
        p.dedup();
        p.len()
    };
    r.count("graded_same_variant_pairs", pairs(&same));
    r.count("graded_same_variant_runs", same.len());
    r.count("graded_mixed_variant_pairs", pairs(&mixed));
    let bad: Vec<String> = cases
        .iter()
        .filter(|c| !c.ok())
        .map(|c| format!("{}×{}", c.pair[0], c.pair[1]))
        .collect();
    r.check(
        "graded_products",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} runs match the product table", cases.len())
        } else {
            format!("mismatches: {}", bad.join(", "))
        },
    );
    let dirac_sq = same
        .iter()
        .filter(|c| {
            c.pair[0].parity() == kotriple_core::Parity::Even
                && c.pair[1].parity() == kotriple_core::Parity::Even
        })
        .count();
    r.count("dirac_square_checks", dirac_sq);

    let eq = sweep::equivalence_cases(&cat, parallel);
    let holds = eq
        .iter()
        .filter(|e| e.as_ref().is_ok_and(|e| e.holds()))
        .count();
    let literal = eq
        .iter()
        .filter(|e| e.as_ref().is_ok_and(|e| e.j_maps_exactly()))
        .count();
    r.count("equivalence_pairs", eq.len());
    r.check(
        "convention_equivalence",
        holds == eq.len(),
        format!(
            "{holds}/{} pairs; U J U† = J̃ literally on {literal}, = -J̃ on the rest",
            eq.len()
        ),
    );

    let trad = sweep::traditional_cases(&cat);
    let trad_ok = trad.iter().filter(|c| c.ok()).count();
    let defined = trad
        .iter()
        .filter(|c| matches!(c.outcome, sweep::TraditionalOutcome::Defined(_)))
        .count();
    r.count("traditional_cases", trad.len());
    r.count("traditional_defined", defined);
    r.check(
        "traditional_failure_matrix",
        trad_ok == trad.len(),
        format!("{trad_ok}/{} cases follow the ε′ constraint", trad.len()),
    );

    let triples = sweep::sample_even_triples(32, sweep::ASSOCIATIVITY_SEED);
    let assoc = sweep::associativity_cases(&cat, triples, parallel);
    let assoc_ok = assoc.iter().filter(|c| c.holds).count();
    r.count("associativity_samples", assoc.len());
    r.check(
        "operator_associativity",
        assoc_ok == assoc.len(),
        format!(
            "{assoc_ok}/{} even triples: D, γ equal, J equal up to a unit",
            assoc.len()
        ),
    );
    r
}

fn dga_line(r: &mut RunReport, name: &str, a: &StarDGA, expect_sign: Option<Sign>) {
    let rep = validate_dga(a);
    let sign_ok = expect_sign.map_or(true, |s| rep.global_sign() == Some(s));
    let signs: Vec<String> = rep.admissible_signs.iter().map(|s| s.to_string()).collect();
    r.check(
        name,
        rep.is_valid() && sign_ok,
        format!(
            "{} basis elements, s ∈ {{{}}}{}",
            rep.basis_size,
            signs.join(", "),
            rep.first_failure()
                .map(|f| format!(", fails {f}"))
                .unwrap_or_default()
        ),
    );
}

pub fn cmd_dga_check() -> RunReport {
    let mut r = RunReport::new("dga-check");
    let ext = exterior_example();
    let line = odd_line_example();
    let minus = ext.with_star(2, &ext.e(2).scale(ExactComplex::from(-1)));
    dga_line(&mut r, "exterior", &ext, Some(Sign::Plus));
    dga_line(&mut r, "exterior_negated_star", &minus, Some(Sign::Minus));
    dga_line(&mut r, "odd_line", &line, None);
    let mut tensors = 0;
    for k in [KozulConvention::First, KozulConvention::Second] {
        for (name, a, b) in [
            ("exterior⊗exterior", &ext, &ext),
            ("exterior⊗odd_line", &ext, &line),
            ("odd_line⊗odd_line", &line, &line),
            ("odd_line⊗negated", &line, &minus),
            ("exterior⊗C", &ext, &trivial_example()),
        ] {
            match dga_tensor(a, b, k) {
                Ok(p) => dga_line(&mut r, &format!("{name} ({k})"), &p, None),
                Err(e) => r.check(format!("{name} ({k})"), false, e.to_string()),
            }
            tensors += 1;
        }
        let left = dga_tensor(&ext, &line, k).and_then(|ab| dga_tensor(&ab, &ext, k));
        let right = dga_tensor(&line, &ext, k).and_then(|bc| dga_tensor(&ext, &bc, k));
        match (left, right) {
            (Ok(l), Ok(rt)) => {
                dga_line(
                    &mut r,
                    &format!("(exterior⊗odd_line)⊗exterior ({k})"),
                    &l,
                    None,
                );
                r.check(
                    format!("reassociation ({k})"),
                    l == rt.clone_with_name(l.name()),
                    format!("{} basis elements, identical structure constants", l.dim()),
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                r.check(format!("reassociation ({k})"), false, e.to_string())
            }
        }
        tensors += 2;
    }
    let mismatch = matches!(
        dga_tensor(&ext, &minus, KozulConvention::First),
        Err(DgaError::SignMismatch { .. })
    );
    r.check(
        "sign_mismatch_rejected",
        mismatch,
        "s = +1 with s = -1 factor",
    );
    r.count("tensor_products", tensors);
    r
}

trait Renamed {
    fn clone_with_name(&self, name: &str) -> StarDGA;
}

impl Renamed for StarDGA {
    fn clone_with_name(&self, name: &str) -> StarDGA {
        let mut doc: serde_json::Value = serde_json::to_value(self).expect("algebras serialize");
        doc["name"] = json!(name);
        serde_json::from_value(doc).expect("renaming keeps the algebra well formed")
    }
}

pub fn cmd_exemplar(class: KOClass, out: Option<&PathBuf>) -> Outcome {
    match build_exemplar(class) {
        Ok(e) => {
            let doc = e.triple.to_json();
            let meta = format!(
                "exemplar {}: {} Clifford generators, coefficients ({}), chirality phase {}, J = {} ∘ cc, Hilbert dim {}\n",
                e.class,
                e.generators,
                e.coefficients.join(", "),
                e.chirality_phase.as_deref().unwrap_or("-"),
                e.real_structure,
                e.triple.hilbert_dim
            );
            match out {
                Some(path) => match write_file(path, &doc) {
                    Ok(()) => Outcome::ok(meta),
                    Err(o) => o,
                },
                None => Outcome::ok(meta + &doc + "\n"),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: 1,
        },
    }
}
