use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use starq_core::io::{self, LoadedStar, ObstructionReportJson};
use starq_core::opo::{opo_arrangement, parse_term};
use starq_core::poisson::{ExplicitModel, PoissonMode, PoissonModel, SymbolicModel};
use starq_core::star::{
    assemble_rhs, construct, obstruction, opo_audit, ordered_experiment, BuildOptions, ExperimentOptions,
    ObstructionReport, OrderedExperiment, StarProduct,
};
use starq_core::verify::{
    jacobi_residual, symbolic_jacobi_residual, verify_levels, PoissonVector, VerificationReport, VerifyOptions,
};
use starq_core::{Coefficient, Polynomial, StarError};

use crate::cli::{
    ConstructArgs, ExportArgs, Format, JacobiArgs, ObstructionArgs, OpoCheckArgs, PotentialArgs, VerifyArgs,
};
use crate::output::{emit, write_atomic};

pub const OK: u8 = 0;
pub const VERIFY_FAILED: u8 = 1;
pub const NEGATIVE: u8 = 3;

/// Audit searches unordered spans only up to this many factors.
const AUDIT_FULL_SEARCH: usize = 3;

enum Potentials {
    Symbolic,
    Explicit { phi: Polynomial, psi: Option<Polynomial> },
}

fn read_expr(src: &str) -> Result<String> {
    match src.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)
            .with_context(|| format!("reading {path}"))
            .map_err(|e| StarError::Config(format!("{e:#}")))?
            .trim()
            .to_string()),
        None => Ok(src.to_string()),
    }
}

fn parse_poly(src: &str) -> Result<Polynomial> {
    Ok(Polynomial::parse(&read_expr(src)?)?)
}

fn potentials(args: &PotentialArgs) -> Result<Potentials> {
    let mode: PoissonMode = args.mode.into();
    let phi_sym = args.phi == "sym";
    let psi_sym = args.psi.as_deref() == Some("sym");
    match (mode, phi_sym, &args.psi) {
        (PoissonMode::NablaPhi, _, Some(_)) => {
            Err(StarError::Config("--psi is only used with --mode psi-nabla-phi".into()).into())
        }
        (PoissonMode::PsiNablaPhi, _, None) => Err(StarError::Config("--mode psi-nabla-phi needs --psi".into()).into()),
        (_, true, _) if args.psi.is_none() || psi_sym => Ok(Potentials::Symbolic),
        (_, false, _) if !psi_sym => Ok(Potentials::Explicit {
            phi: parse_poly(&args.phi)?,
            psi: args.psi.as_deref().map(parse_poly).transpose()?,
        }),
        _ => Err(StarError::Config("phi and psi must both be symbolic or both explicit".into()).into()),
    }
}

fn level_summary<C: Coefficient>(star: &StarProduct<C>, out: &mut String) {
    for (k, l) in star.levels.iter().enumerate() {
        let (terms, monomials) = l.size();
        let _ = writeln!(out, "M_{k}: {terms} slot pairs, {monomials} coefficient monomials");
    }
}

fn report_line<C: Coefficient>(r: &ObstructionReport<C>) -> String {
    let how = if r.parity_path { " (parity)" } else { "" };
    let shortcut = match &r.shortcut {
        Some(s) if *s == r.ar => ", shortcut agrees",
        Some(_) => ", shortcut DIFFERS",
        None => "",
    };
    if r.is_zero {
        format!("AR_{} = 0{how}{shortcut}", r.k)
    } else {
        let size = r.coordinate_witness.size();
        let value = if size <= 8 {
            r.coordinate_witness.to_string()
        } else {
            format!("a polynomial with {size} monomials")
        };
        format!("AR_{} != 0: {} terms, value on (x1,x2,x3) is {value}{shortcut}", r.k, r.ar.len())
    }
}

fn reports_json<C: Coefficient>(reports: &[ObstructionReport<C>]) -> Vec<ObstructionReportJson> {
    reports.iter().map(ObstructionReportJson::from_report).collect()
}

fn run_construct<M: PoissonModel>(model: &M, args: &ConstructArgs) -> Result<u8> {
    let options = BuildOptions::new(args.order).gauge(args.gauge.into());
    let built = construct(model, &options);
    let star = &built.star;
    let mut reports = json!({ "obstructionReports": reports_json(&star.reports) });
    let mut text = String::new();
    level_summary(star, &mut text);
    for r in &star.reports {
        let _ = writeln!(text, "{}", report_line(r));
    }
    if let Some(e) = &built.failure {
        reports["failure"] = Value::String(e.to_string());
    } else if args.audit {
        let audit = opo_audit(star, model, AUDIT_FULL_SEARCH)?;
        for a in &audit {
            let _ = writeln!(
                text,
                "audit M_{}: {:?}{}",
                a.k,
                a.status,
                match a.opo_reselectable {
                    Some(true) => ", ordered re-selection exists",
                    Some(false) => ", no ordered re-selection",
                    None => "",
                }
            );
        }
        reports["audit"] = serde_json::to_value(&audit)?;
    }
    if let Some(path) = &args.reports {
        write_atomic(path, &serde_json::to_string_pretty(&reports)?)?;
    }
    if let Some(e) = built.failure {
        print!("{text}");
        return Err(e.into());
    }
    let body = match args.format {
        Format::Json => io::to_string(star)?,
        Format::Latex => latex(star),
        Format::Text => text.clone(),
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, &io::to_string(star)?)?;
            if args.format != Format::Json {
                print!("{body}");
            }
        }
        None => print!("{body}"),
    }
    Ok(OK)
}

fn experiment_json<C: Coefficient>(e: &OrderedExperiment<C>) -> Value {
    json!({
        "m2Unknowns": e.m2_unknowns,
        "m3Unknowns": e.m3_unknowns,
        "quadraticVanishes": e.quadratic_vanishes,
        "m2Unique": e.m2_unique,
        "rank": e.rank,
        "augmentedRank": e.augmented_rank,
        "scalarRows": e.scalar_rows,
        "feasible": e.feasible,
        "refutation": e.solution,
        "unrestrictedM3Feasible": e.unrestricted_m3_feasible,
        "unrestrictedM3Ordered": e.unrestricted_m3_ordered,
        "ar4": e.unrestricted_ar4.as_ref().map(ObstructionReportJson::from_report),
        "withUnordered": e.with_unordered,
    })
}

fn experiment_text<C: Coefficient>(label: &str, e: &OrderedExperiment<C>) -> String {
    let mut s = format!(
        "{label}: ordered system {} (rank {}, augmented rank {}, {} + {} unknowns)\n",
        if e.feasible { "FEASIBLE" } else { "infeasible" },
        e.rank,
        e.augmented_rank,
        e.m2_unknowns,
        e.m3_unknowns
    );
    let _ = writeln!(
        s,
        "{label}: unrestricted delta M_3 = R_3 {}",
        if e.unrestricted_m3_feasible { "feasible" } else { "infeasible" }
    );
    if let Some(r) = &e.unrestricted_ar4 {
        let _ = writeln!(s, "{label}: {}", report_line(r));
    }
    if let Some(w) = e.with_unordered {
        let _ = writeln!(
            s,
            "{label}: with unordered terms in M_3 {}",
            if w { "feasible" } else { "infeasible" }
        );
    }
    if let Some(sol) = &e.solution {
        let _ = writeln!(s, "{label}: refutation M_2 = {}", sol.m2);
        let _ = writeln!(s, "{label}: refutation M_3 = {}", sol.m3);
    }
    s
}

/// The ordered-operator restriction concerns universal formulas, so the
/// verdict comes from the system with symbolic potentials; explicit
/// potentials add a specialized run for comparison.
fn run_opo_restrict(args: &ConstructArgs, pots: &Potentials) -> Result<u8> {
    if args.order < 4 {
        return Err(StarError::Config("--opo-restrict tests AR_4 and needs --order 4 or more".into()).into());
    }
    let mode: PoissonMode = args.potential.mode.into();
    let options = ExperimentOptions {
        include_unordered: args.with_unordered,
        check_grading: true,
    };
    let jet = args.jet_order.unwrap_or(2 * args.order + 1);
    let universal = ordered_experiment(&SymbolicModel::new(mode).with_jet_order(jet), &options)?;
    let mut text = experiment_text("symbolic", &universal);
    let mut report = json!({ "mode": mode.to_string(), "symbolic": experiment_json(&universal) });
    if let Potentials::Explicit { phi, psi } = pots {
        let model = ExplicitModel::new(mode, phi.clone(), psi.clone())?;
        let explicit = ordered_experiment(&model, &options)?;
        text.push_str(&experiment_text("explicit", &explicit));
        report["explicit"] = experiment_json(&explicit);
    }
    if let Some(path) = &args.reports {
        write_atomic(path, &serde_json::to_string_pretty(&report)?)?;
    }
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        _ => print!("{text}"),
    }
    Ok(if universal.feasible { OK } else { NEGATIVE })
}

pub fn construct_cmd(args: &ConstructArgs) -> Result<u8> {
    if args.order == 0 {
        return Err(StarError::Config("--order must be at least 1".into()).into());
    }
    let jet = args.jet_order.unwrap_or(2 * args.order + 1);
    if jet < args.order + 1 {
        return Err(StarError::Config(format!("--jet-order {jet} is below order + 1 = {}", args.order + 1)).into());
    }
    let pots = potentials(&args.potential)?;
    if args.opo_restrict {
        return run_opo_restrict(args, &pots);
    }
    let mode: PoissonMode = args.potential.mode.into();
    match pots {
        Potentials::Symbolic => run_construct(&SymbolicModel::new(mode).with_jet_order(jet), args),
        Potentials::Explicit { phi, psi } => run_construct(&ExplicitModel::new(mode, phi, psi)?, args),
    }
}

fn print_verification(report: &VerificationReport, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
        _ => {
            for c in &report.checks {
                match &c.witness {
                    None if c.pass => println!("{}: pass ({} cases)", c.name, c.cases),
                    None => println!("{}: FAIL: {}", c.name, c.residual),
                    Some(w) => println!(
                        "{}: FAIL at nu^{} on ({}): residual {}",
                        c.name,
                        c.order.map_or("?".into(), |o| o.to_string()),
                        w.join(", "),
                        c.residual
                    ),
                }
            }
            println!("{}", if report.pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(())
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<u8> {
    if args.degree == 0 {
        return Err(StarError::Config("--degree must be at least 1".into()).into());
    }
    let star = match io::load(&args.file)? {
        LoadedStar::Explicit(s) => s,
        LoadedStar::Symbolic(s) => {
            let phi = args.phi.as_deref().ok_or_else(|| {
                StarError::Config("the star product is symbolic; pass --phi (and --psi) to specialize it".into())
            })?;
            let psi = args.psi.as_deref().map(parse_poly).transpose()?;
            s.specialize(&parse_poly(phi)?, psi.as_ref())?
        }
    };
    let vector = match &star.source {
        starq_core::poisson::PotentialSource::Explicit { phi, psi } => Some(match psi {
            Some(psi) => PoissonVector::scaled_gradient(psi, phi),
            None => PoissonVector::gradient(phi),
        }),
        starq_core::poisson::PotentialSource::Symbolic => None,
    };
    let options = VerifyOptions {
        degree: args.degree,
        targeted: !args.no_targeted,
    };
    let report = verify_levels(&star.levels, vector.as_ref(), &options)?;
    if let Some(path) = &args.report {
        write_atomic(path, &serde_json::to_string_pretty(&report)?)?;
    }
    print_verification(&report, args.format)?;
    Ok(if report.pass { OK } else { VERIFY_FAILED })
}

pub fn jacobi_cmd(args: &JacobiArgs) -> Result<u8> {
    let residual = match (&args.p, args.phi.as_deref(), args.psi.as_deref()) {
        (Some(p), _, _) => jacobi_residual(&PoissonVector::parse(&read_expr(p)?)?).to_string(),
        (None, Some("sym"), None) => symbolic_jacobi_residual(PoissonMode::NablaPhi).to_string(),
        (None, Some("sym"), Some("sym")) => symbolic_jacobi_residual(PoissonMode::PsiNablaPhi).to_string(),
        (None, Some(phi), psi) => {
            let phi = parse_poly(phi)?;
            let v = match psi {
                Some(psi) => PoissonVector::scaled_gradient(&parse_poly(psi)?, &phi),
                None => PoissonVector::gradient(&phi),
            };
            jacobi_residual(&v).to_string()
        }
        (None, None, _) => return Err(StarError::Config("pass --P or --phi".into()).into()),
    };
    println!("residual: {residual}");
    Ok(if residual == "0" { OK } else { NEGATIVE })
}

fn obstruction_at<M: PoissonModel>(model: &M, args: &ObstructionArgs) -> Result<u8> {
    let options = BuildOptions::new(args.k - 1).gauge(args.gauge.into());
    let star = starq_core::star::build_star(model, &options)?;
    let r = assemble_rhs(&star.levels, args.k)?;
    let report = obstruction(&r, args.k, Some(&star.levels))?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&ObstructionReportJson::from_report(&report))?
        ),
        Format::Latex => println!("{}", report.ar.to_latex()),
        Format::Text => println!("{}", report_line(&report)),
    }
    Ok(if report.is_zero { OK } else { NEGATIVE })
}

pub fn obstruction_cmd(args: &ObstructionArgs) -> Result<u8> {
    if args.k < 2 {
        println!("AR_{} = 0 (empty sum)", args.k);
        return Ok(OK);
    }
    let mode: PoissonMode = args.potential.mode.into();
    match potentials(&args.potential)? {
        Potentials::Symbolic => obstruction_at(&SymbolicModel::new(mode), args),
        Potentials::Explicit { phi, psi } => obstruction_at(&ExplicitModel::new(mode, phi, psi)?, args),
    }
}

pub fn opo_check_cmd(args: &OpoCheckArgs) -> Result<u8> {
    let term = parse_term(&args.term)?;
    let arrangement = opo_arrangement(&term);
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "term": term.to_string(),
                "opo": arrangement.is_some(),
                "arrangement": arrangement.as_ref().map(|a| a.0.clone()),
                "graph": term.to_json(),
            }))?
        ),
        _ => match &arrangement {
            Some(a) => println!("OPO (factor order {:?}): {}", a.0, term.arranged(a)),
            None => println!("NOT OPO"),
        },
    }
    Ok(if arrangement.is_some() { OK } else { NEGATIVE })
}

fn latex<C: Coefficient>(star: &StarProduct<C>) -> String {
    let mut s = String::from("\\begin{align*}\n");
    for (k, l) in star.levels.iter().enumerate() {
        let _ = writeln!(s, "M_{{{k}}}(f_0,f_1) &= {} \\\\", l.to_latex());
    }
    s.push_str("\\end{align*}\n");
    s
}

pub fn export_latex_cmd(args: &ExportArgs) -> Result<u8> {
    let body = match io::load(&args.file)? {
        LoadedStar::Symbolic(s) => latex(&s),
        LoadedStar::Explicit(s) => latex(&s),
    };
    emit(args.out.as_deref(), &body)?;
    Ok(OK)
}
