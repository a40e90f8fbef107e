//! Command line front end.
//!
//! Exit codes: 0 and 1 carry the mathematical outcome of the command, 2
//! means malformed input, 3 means an internal cross-check failed or the
//! cochain budget was exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::cmod::{
    canonical_bimodule, kernel_comp_sequence, random_bimodule, random_left_module, random_short_exact_sequence,
    regular_left_module, sign_module, trivial_left_module, Bimodule, BimoduleDoc, LeftModule, LeftModuleDoc, SesDoc,
    ShortExactSeq,
};
use crate::cohomology::{
    hm_cohomology, les_analysis, obstruction_cocycle, CohomologyResult, DEFAULT_BUDGET, DEFAULT_MAX_DEGREE,
};
use crate::error::{Error, Result};
use crate::exactalg::FieldSpec;
use crate::lincat::{linearize, CategoryDoc, FinLinCat, FiniteCatPresentation, PresentationDoc};
use crate::separability::{
    cross_check, delta_predict, maschke_predict, module_section, reduce_family, separability_system, verify_family,
    zelinsky_report, SeparabilityFamily, VerificationReport,
};

const RANDOM_DIM_CAP: usize = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sepcat",
    version,
    about = "Separability and Hochschild-Mitchell cohomology of finite linear categories"
)]
struct Cli {
    /// Also write the report as JSON to this file.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a category, presentation, module, bimodule or exact sequence file.
    Validate {
        file: PathBuf,
        /// Category over which FILE is a module, bimodule or exact sequence.
        #[arg(long, value_name = "CAT")]
        category: Option<PathBuf>,
    },
    /// Linearize a finite category presentation over a field.
    Linearize {
        pres: PathBuf,
        #[arg(long, value_name = "Q|Fp:P")]
        field: String,
        #[arg(short = 'o', long = "output", value_name = "OUT")]
        output: PathBuf,
    },
    /// Solve for or verify a separability family.
    Separability {
        #[command(subcommand)]
        action: SeparabilityAction,
    },
    /// Groupoid criterion, cross-checked against the solver.
    Maschke {
        pres: PathBuf,
        #[arg(long, value_name = "Q|Fp:P")]
        field: String,
        #[arg(long, value_name = "OUT")]
        certificate_out: Option<PathBuf>,
    },
    /// Delta-category criterion, cross-checked against the solver.
    Delta {
        pres: PathBuf,
        #[arg(long, value_name = "Q|Fp:P", default_value = "Q")]
        field: String,
        #[arg(long, value_name = "OUT")]
        certificate_out: Option<PathBuf>,
    },
    /// Cohomology dimensions from the bar complex.
    Cohomology {
        file: PathBuf,
        /// FILE, or one of canonical, kernel-comp, random.
        #[arg(long, value_name = "FILE|canonical|kernel-comp|random")]
        bimodule: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Splitting obstruction of the composition map.
    Obstruction {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Long exact sequence of a short exact sequence of bimodules.
    Les {
        file: PathBuf,
        /// FILE, or one of kernel-comp, random.
        #[arg(long, value_name = "FILE|kernel-comp|random")]
        ses: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Left module constructions.
    Module {
        #[command(subcommand)]
        action: ModuleAction,
    },
    /// Embedding of hom spaces into spans of the family's left factors.
    Zelinsky {
        file: PathBuf,
        #[arg(long, value_name = "CERT")]
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum SeparabilityAction {
    /// Solve for a family; exit 0 if separable, 1 if not.
    Check {
        file: PathBuf,
        #[arg(long, value_name = "OUT")]
        certificate_out: Option<PathBuf>,
    },
    /// Verify a certificate; exit 0 if valid, 1 if residuals remain.
    Verify {
        file: PathBuf,
        #[arg(long, value_name = "CERT")]
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ModuleAction {
    /// Build the section of the evaluation map for a module.
    Split {
        file: PathBuf,
        /// FILE, or one of regular, sign, trivial, random.
        #[arg(long, value_name = "FILE|regular|sign|trivial|random")]
        module: String,
        #[arg(long, value_name = "CERT")]
        certificate: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code, printing to the process's standard streams.
pub fn run(args: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            outcome.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let kind = match e {
                Error::CrossCheck(_) => "internal check failed",
                Error::BudgetExceeded { .. } => "resource limit",
                _ => "error",
            };
            let _ = writeln!(err, "{kind}: {e}");
            code
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CrossCheck(_) | Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

struct Outcome {
    code: i32,
    text: String,
}

pub fn parse_field(text: &str) -> Result<FieldSpec> {
    let t = text.trim();
    if t == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let p = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| Error::Format(format!("unknown field {text:?}, expected Q or Fp:P")))?;
    let p: u64 = p
        .parse()
        .map_err(|_| Error::Format(format!("bad characteristic in {text:?}")))?;
    FieldSpec::prime(p)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn check_output(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(Error::Format(format!(
            "output directory {} does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    std::fs::write(path, body).map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &serde_json::to_string_pretty(value)?)
}

fn load_category(path: &Path) -> Result<FinLinCat> {
    let doc: CategoryDoc = parse(path)?;
    let c = FinLinCat::from_doc(&doc)?;
    c.require_valid()?;
    Ok(c)
}

fn load_presentation(path: &Path) -> Result<FiniteCatPresentation> {
    let doc: PresentationDoc = parse(path)?;
    let p = FiniteCatPresentation::from_doc(&doc)?;
    p.check()?;
    Ok(p)
}

fn load_family(c: &FinLinCat, path: &Path) -> Result<SeparabilityFamily> {
    SeparabilityFamily::from_json(c, &read(path)?).map_err(|e| match e {
        Error::Json(j) => Error::Format(format!("{}: {j}", path.display())),
        e => e,
    })
}

fn load_bimodule(c: &FinLinCat, spec: &str, seed: u64) -> Result<Bimodule> {
    let m = match spec {
        "canonical" => canonical_bimodule(c),
        "kernel-comp" => kernel_comp_sequence(c)?.m,
        "random" => random_bimodule(c, seed, RANDOM_DIM_CAP)?,
        path => Bimodule::from_doc(c, &parse::<BimoduleDoc>(Path::new(path))?)?,
    };
    m.require_valid(c)?;
    Ok(m)
}

fn load_ses(c: &FinLinCat, spec: &str, seed: u64) -> Result<ShortExactSeq> {
    let s = match spec {
        "kernel-comp" => kernel_comp_sequence(c)?,
        "random" => random_short_exact_sequence(c, seed, 2 * RANDOM_DIM_CAP)?,
        path => ShortExactSeq::from_doc(c, &parse::<SesDoc>(Path::new(path))?)?,
    };
    s.require_valid(c)?;
    Ok(s)
}

fn load_module(c: &FinLinCat, spec: &str, seed: u64) -> Result<LeftModule> {
    let m = match spec {
        "regular" => regular_left_module(c),
        "sign" => sign_module(c).ok_or_else(|| Error::InvalidModule("this category has no sign module".into()))?,
        "trivial" => {
            trivial_left_module(c).ok_or_else(|| Error::InvalidModule("this category has no trivial module".into()))?
        }
        "random" => random_left_module(c, seed, RANDOM_DIM_CAP)?,
        path => LeftModule::from_doc(c, &parse::<LeftModuleDoc>(Path::new(path))?)?,
    };
    m.require_valid(c)?;
    Ok(m)
}

fn describe_family(c: &FinLinCat, fam: &SeparabilityFamily) -> String {
    let mut s = String::new();
    for block in fam.to_certificate(c) {
        let terms: Vec<String> = block
            .terms
            .iter()
            .map(|t| format!("{} {}⊗{}", t.coeff, t.u, t.v))
            .collect();
        let _ = writeln!(s, "  a_{}^{} = {}", block.x, block.y, terms.join(" + "));
    }
    s
}

fn verification_json(r: &VerificationReport) -> serde_json::Value {
    json!({
        "ok": r.ok(),
        "unit_checked": r.unit_checked,
        "naturality_checked": r.naturality_checked,
        "unit_failures": r.unit_failures.iter().map(|f| json!({
            "x": f.x,
            "residual": f.residual,
        })).collect::<Vec<_>>(),
        "naturality_failures": r.naturality_failures.iter().map(|f| json!({
            "f": f.f,
            "y": f.y,
            "residual": f.residual.to_text(),
        })).collect::<Vec<_>>(),
    })
}

fn cohomology_table(r: &CohomologyResult) -> String {
    let mut s = format!(
        "{:>3} {:>12} {:>8} {:>8} {:>6}\n",
        "n", "dim_cochain", "rank_d", "dim_ker", "dim_H"
    );
    for d in &r.degrees {
        let _ = writeln!(
            s,
            "{:>3} {:>12} {:>8} {:>8} {:>6}",
            d.n, d.dim_cochain, d.rank_d, d.dim_ker, d.dim_h
        );
    }
    s
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let mut outputs: Vec<&Path> = cli.json.iter().map(PathBuf::as_path).collect();
    match &cli.command {
        Command::Linearize { output, .. } => outputs.push(output),
        Command::Separability {
            action:
                SeparabilityAction::Check {
                    certificate_out: Some(p),
                    ..
                },
        }
        | Command::Maschke {
            certificate_out: Some(p),
            ..
        }
        | Command::Delta {
            certificate_out: Some(p),
            ..
        } => outputs.push(p),
        _ => {}
    }
    for p in outputs {
        check_output(p)?;
    }

    let json_out = cli.json.as_deref();
    let emit = |value: &serde_json::Value| -> Result<()> {
        match json_out {
            Some(p) => write_json(p, value),
            None => Ok(()),
        }
    };

    match &cli.command {
        Command::Validate { file, category } => {
            let (kind, report) = match category {
                None => match parse::<CategoryDoc>(file) {
                    Ok(doc) => ("category", FinLinCat::from_doc(&doc)?.validate()),
                    Err(cat_err) => match parse::<PresentationDoc>(file) {
                        Ok(doc) => {
                            let p = FiniteCatPresentation::from_doc(&doc)?;
                            let mut r = crate::lincat::ValidationReport::default();
                            if let Err(e) = p.check() {
                                r.push(e.to_string());
                            }
                            ("presentation", r)
                        }
                        Err(_) => return Err(cat_err),
                    },
                },
                Some(cat) => {
                    let c = load_category(cat)?;
                    let text = read(file)?;
                    if let Ok(doc) = serde_json::from_str::<BimoduleDoc>(&text) {
                        ("bimodule", Bimodule::from_doc(&c, &doc)?.validate(&c))
                    } else if let Ok(doc) = serde_json::from_str::<LeftModuleDoc>(&text) {
                        ("left module", LeftModule::from_doc(&c, &doc)?.validate(&c))
                    } else {
                        let doc: SesDoc = serde_json::from_str(&text).map_err(|e| {
                            Error::Format(format!("{}: not a module, bimodule or sequence: {e}", file.display()))
                        })?;
                        ("exact sequence", ShortExactSeq::from_doc(&c, &doc)?.validate(&c))
                    }
                }
            };
            let mut text = format!("{kind}: {}\n", if report.ok() { "ok" } else { "violations found" });
            for v in &report.violations {
                let _ = writeln!(text, "  {v}");
            }
            emit(&json!({"kind": kind, "ok": report.ok(), "violations": report.violations}))?;
            Ok(Outcome {
                code: if report.ok() { 0 } else { 1 },
                text,
            })
        }

        Command::Linearize { pres, field, output } => {
            let k = parse_field(field)?;
            let p = load_presentation(pres)?;
            let c = linearize(&p, k)?;
            write_text(output, &c.to_json())?;
            emit(&json!({"objects": c.object_count(), "total_dim": c.total_dim(), "field": k.to_string()}))?;
            Ok(Outcome {
                code: 0,
                text: format!(
                    "linearized {} objects, {} basis morphisms over {k} into {}\n",
                    c.object_count(),
                    c.total_dim(),
                    output.display()
                ),
            })
        }

        Command::Separability { action } => match action {
            SeparabilityAction::Check { file, certificate_out } => {
                let c = load_category(file)?;
                let sys = separability_system(&c)?;
                let fam = sys.solve(&c)?;
                let rank = sys.rank();
                let mut text = format!(
                    "unknowns {}, equations {}, rank {}\n",
                    sys.unknowns(),
                    sys.equations(),
                    rank
                );
                let solution_dim = fam.as_ref().map(|_| sys.unknowns() - rank);
                if let Some(fam) = &fam {
                    let report = verify_family(&c, fam)?;
                    if !report.ok() {
                        return Err(Error::CrossCheck(format!(
                            "solver output fails verification:\n{report}"
                        )));
                    }
                    let _ = writeln!(
                        text,
                        "separable: yes (solution space dimension {})",
                        sys.unknowns() - rank
                    );
                    text.push_str(&describe_family(&c, fam));
                    if let Some(p) = certificate_out {
                        write_text(p, &fam.to_json(&c))?;
                    }
                } else {
                    text.push_str("separable: no (the system is infeasible)\n");
                }
                emit(&json!({
                    "separable": fam.is_some(),
                    "unknowns": sys.unknowns(),
                    "equations": sys.equations(),
                    "rank": rank,
                    "solution_dim": solution_dim,
                    "zero_blocks": fam.as_ref().map(|f| f.zero_blocks().iter()
                        .map(|&(x, y)| vec![c.object_name(x).to_string(), c.object_name(y).to_string()])
                        .collect::<Vec<_>>()),
                }))?;
                Ok(Outcome {
                    code: if fam.is_some() { 0 } else { 1 },
                    text,
                })
            }
            SeparabilityAction::Verify { file, certificate } => {
                let c = load_category(file)?;
                let fam = load_family(&c, certificate)?;
                let report = verify_family(&c, &fam)?;
                emit(&verification_json(&report))?;
                Ok(Outcome {
                    code: if report.ok() { 0 } else { 1 },
                    text: format!(
                        "{}certificate: {}\n",
                        report,
                        if report.ok() { "valid" } else { "invalid" }
                    ),
                })
            }
        },

        Command::Maschke {
            pres,
            field,
            certificate_out,
        } => {
            let k = parse_field(field)?;
            let p = load_presentation(pres)?;
            let verdict = maschke_predict(&p, k)?;
            let c = linearize(&p, k)?;
            cross_check(&c, verdict.separable, verdict.certificate.as_ref())?;
            let mut text = format!("separable over {k}: {}\n", if verdict.separable { "yes" } else { "no" });
            if let Some((x, y, size)) = &verdict.witness {
                let _ = writeln!(text, "  |hom({x}, {y})| = {size} is not invertible");
            }
            if let Some(fam) = &verdict.certificate {
                text.push_str(&describe_family(&c, fam));
                if let Some(p) = certificate_out {
                    write_text(p, &fam.to_json(&c))?;
                }
            }
            text.push_str("solver agrees\n");
            emit(&json!({
                "separable": verdict.separable,
                "witness": verdict.witness.as_ref().map(|(x, y, n)| json!({"x": x, "y": y, "size": n})),
                "solver_agrees": true,
            }))?;
            Ok(Outcome {
                code: if verdict.separable { 0 } else { 1 },
                text,
            })
        }

        Command::Delta {
            pres,
            field,
            certificate_out,
        } => {
            let k = parse_field(field)?;
            let p = load_presentation(pres)?;
            let verdict = delta_predict(&p)?;
            let c = linearize(&p, k)?;
            let cert = verdict.certificate(&c);
            cross_check(&c, verdict.separable, cert.as_ref())?;
            let mut text = format!("separable over {k}: {}\n", if verdict.separable { "yes" } else { "no" });
            if let Some(m) = &verdict.witness {
                let _ = writeln!(text, "  not discrete: {m} is not an identity");
            }
            if let Some(fam) = &cert {
                text.push_str(&describe_family(&c, fam));
                if let Some(p) = certificate_out {
                    write_text(p, &fam.to_json(&c))?;
                }
            }
            text.push_str("solver agrees\n");
            emit(&json!({"separable": verdict.separable, "witness": verdict.witness, "solver_agrees": true}))?;
            Ok(Outcome {
                code: if verdict.separable { 0 } else { 1 },
                text,
            })
        }

        Command::Cohomology {
            file,
            bimodule,
            max_degree,
            seed,
            budget,
        } => {
            let c = load_category(file)?;
            let m = load_bimodule(&c, bimodule, *seed)?;
            match hm_cohomology(&c, &m, *max_degree, *budget) {
                Ok(r) => {
                    emit(&serde_json::to_value(&r)?)?;
                    Ok(Outcome {
                        code: 0,
                        text: cohomology_table(&r),
                    })
                }
                Err(e @ Error::BudgetExceeded { .. }) => {
                    emit(&serde_json::to_value(CohomologyResult::exceeded())?)?;
                    Err(e)
                }
                Err(e) => Err(e),
            }
        }

        Command::Obstruction { file, budget } => {
            let c = load_category(file)?;
            let o = obstruction_cocycle(&c, *budget)?;
            emit(&serde_json::to_value(&o)?)?;
            let text = format!(
                "cocycle: {} coordinates, {}\ncoboundary: {}\n",
                o.cocycle.len(),
                if o.is_zero { "zero" } else { "nonzero" },
                if o.is_coboundary {
                    "yes (composition splits)"
                } else {
                    "no (composition does not split)"
                }
            );
            Ok(Outcome {
                code: if o.is_coboundary { 0 } else { 1 },
                text,
            })
        }

        Command::Les {
            file,
            ses,
            max_degree,
            seed,
            budget,
        } => {
            let c = load_category(file)?;
            let s = load_ses(&c, ses, *seed)?;
            let r = les_analysis(&c, &s, *max_degree, *budget)?;
            emit(&serde_json::to_value(&r)?)?;
            let mut text = format!(
                "{:>3} {:>8} {:>8} {:>8} {:>7} {:>7} {:>7}\n",
                "n", "H^n(M)", "H^n(N)", "H^n(P)", "rank_i", "rank_q", "rank_δ"
            );
            for d in &r.degrees {
                let _ = writeln!(
                    text,
                    "{:>3} {:>8} {:>8} {:>8} {:>7} {:>7} {:>7}",
                    d.n, d.dim_h_m, d.dim_h_n, d.dim_h_p, d.rank_i, d.rank_q, d.rank_connecting
                );
            }
            for p in &r.positions {
                let _ = writeln!(
                    text,
                    "  {:<8} incoming rank {:>3}, kernel dim {:>3}: {}",
                    p.position,
                    p.incoming_rank,
                    p.kernel_dim,
                    if p.exact { "exact" } else { "NOT exact" }
                );
            }
            if !r.all_exact() {
                return Err(Error::CrossCheck(format!(
                    "long exact sequence fails to be exact:\n{text}"
                )));
            }
            Ok(Outcome { code: 0, text })
        }

        Command::Module {
            action:
                ModuleAction::Split {
                    file,
                    module,
                    certificate,
                    seed,
                },
        } => {
            let c = load_category(file)?;
            let fam = load_family(&c, certificate)?;
            let red = reduce_family(&c, &fam)?;
            let m = load_module(&c, module, *seed)?;
            let s = module_section(&c, &red, &m)?;
            emit(&json!({
                "section_ok": s.section_ok,
                "linear_ok": s.linear_ok,
                "failures": s.failures,
                "module_dims": m.dims(),
            }))?;
            let mut text = format!("section_ok: {}\nlinear_ok: {}\n", s.section_ok, s.linear_ok);
            for f in &s.failures {
                let _ = writeln!(text, "  {f}");
            }
            if !(s.section_ok && s.linear_ok) {
                return Err(Error::CrossCheck(format!("module section fails:\n{text}")));
            }
            Ok(Outcome { code: 0, text })
        }

        Command::Zelinsky { file, certificate } => {
            let c = load_category(file)?;
            let fam = load_family(&c, certificate)?;
            let red = reduce_family(&c, &fam)?;
            let z = zelinsky_report(&c, &red)?;
            emit(&serde_json::to_value(&z)?)?;
            let mut text = format!(
                "{:>8} {:>8} {:>8} {:>6} {:>6} {}\n",
                "x", "z", "dim_hom", "rank", "bound", "injective"
            );
            for p in &z.pairs {
                let _ = writeln!(
                    text,
                    "{:>8} {:>8} {:>8} {:>6} {:>6} {}",
                    p.x, p.z, p.hom_dim, p.rank, p.bound, p.injective
                );
            }
            if !z.all_injective() {
                return Err(Error::CrossCheck(format!("embedding check fails:\n{text}")));
            }
            Ok(Outcome { code: 0, text })
        }
    }
}
