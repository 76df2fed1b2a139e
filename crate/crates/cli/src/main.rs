mod args;
mod error;
mod io;
mod manifest;
mod series;

use std::fs;
use std::io::Write;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use sft_core::algebra::normalize;
use sft_core::hierarchy::{self, DegreeFilter};
use sft_core::hurwitz::{self, BranchingContext, BranchingProfile, FactorizationSpec};
use sft_core::json::{format_rational, rational_string, DElementJson, PolynomialTerm, WeylJson};
use sft_core::poisson::bracket_coefficient;
use sft_core::weyl::{self, DElement, WeylElement};
use sft_core::{OrbitModel, Rational, Side};

use args::{Cli, Command, ExportKind, Format, Gen, Global, Hurwitz, RhoArgs, SideArg, Weyl};
use error::CliError;
use io::{polynomial_json, polynomial_table, read_boundary, read_model, read_polynomial, read_weyl, table, term, to_json};
use manifest::{sha256_hex, RunManifest};

/// Rendered result plus whether the checked property held.
struct Outcome {
    body: String,
    failure: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, failure: None }
    }

    fn check(body: String, passed: bool, what: &str) -> Self {
        Outcome { body, failure: (!passed).then(|| what.to_string()) }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome, started) {
            Ok(()) => match outcome.failure {
                None => 0,
                Some(what) => {
                    eprintln!("sft: {what}");
                    1
                }
            },
            Err(e) => report(&e),
        },
        Err(e) => report(&e),
    };
    std::process::exit(code);
}

fn report(e: &CliError) -> i32 {
    eprintln!("sft: {}", e.message());
    e.exit_code()
}

fn emit(cli: &Cli, outcome: &Outcome, started: Instant) -> Result<(), CliError> {
    let g = &cli.global;
    match &g.out {
        Some(path) => fs::write(path, &outcome.body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    if let Some(path) = &g.manifest {
        let model = read_model(g.model.as_deref())?;
        let argv: Vec<String> = std::env::args().skip(1).collect();
        let m = RunManifest {
            command: argv.iter().take_while(|a| !a.starts_with('-')).cloned().collect::<Vec<_>>().join(" "),
            flags: argv,
            model_hash: sha256_hex(model.to_json_string().as_bytes()),
            cutoffs: cutoffs(&cli.command),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: started.elapsed().as_millis(),
            result_digest: sha256_hex(outcome.body.as_bytes()),
        };
        fs::write(path, to_json(&m)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cutoffs(command: &Command) -> Vec<u32> {
    match command {
        Command::Gen(Gen::Kdv { cutoff, .. } | Gen::Filtered { cutoff, .. }) => vec![*cutoff],
        Command::Verify { window, .. } => vec![*window],
        Command::SignSearch { window, bound, .. } => vec![*window, *bound],
        Command::Hurwitz(Hurwitz::Bh { cutoff, .. }) => vec![*cutoff],
        Command::Hurwitz(Hurwitz::Rho(r)) | Command::Rho(r) => vec![r.cutoff],
        _ => Vec::new(),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", g.jobs.unwrap_or(0))))?;
    pool.install(|| dispatch(&cli.command, g))
}

fn parse_filter(s: &str) -> Result<DegreeFilter, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn dispatch(command: &Command, g: &Global) -> Result<Outcome, CliError> {
    let model = read_model(g.model.as_deref())?;
    match command {
        Command::Gen(Gen::Kdv { j, cutoff }) => {
            if *cutoff == 0 {
                return Err(CliError::Usage("cutoff must be at least 1".into()));
            }
            Ok(Outcome::ok(render_polynomial(&hierarchy::kdv(*j, *cutoff), g.format)))
        }
        Command::Gen(Gen::Filtered { j, cutoff, filter }) => {
            let spec = hierarchy::HierarchySpec { model, j: *j, cutoff: *cutoff, filter: parse_filter(&filter.filter)? };
            let p = spec.generate()?;
            let (target, circle) = spec.degree_report();
            if spec.filter == DegreeFilter::Target && spec.model.m == 1 && target != circle {
                eprintln!("sft: note: target degree {target} differs from the circle degree {circle}; try --filter none");
            }
            Ok(Outcome::ok(render_polynomial(&p, g.format)))
        }
        Command::Bracket { f, g: gp } => {
            let f = read_polynomial(f, &model)?;
            let h = read_polynomial(gp, &model)?;
            let b = sft_core::poisson::try_bracket(&f, &h)?;
            Ok(Outcome::ok(render_polynomial(&b, g.format)))
        }
        Command::BracketCoeff { target, f, g: gs, filter } => {
            let indices: Vec<i32> = serde_json::from_str(&target.replace('\u{2212}', "-"))
                .map_err(|e| CliError::Usage(format!("target {target:?}: {e}")))?;
            let vars = indices.iter().map(|&k| model.variable(k)).collect::<Result<Vec<_>, _>>()?;
            let window = indices.iter().map(|k| k.unsigned_abs()).max().unwrap_or(1).max(1);
            let filter = parse_filter(&filter.filter)?;
            let ctx = BranchingContext::default();
            let fs = series::parse_series(f, &model, filter, window, &ctx)?;
            let gs = series::parse_series(gs, &model, filter, window, &ctx)?;
            let value = match normalize(&vars)? {
                None => Rational::from_integer(0.into()),
                Some((m, s)) => {
                    let c = bracket_coefficient(&m, &fs, &gs, &model)?;
                    if s < 0 {
                        -c
                    } else {
                        c
                    }
                }
            };
            #[derive(Serialize)]
            struct Out {
                target: Vec<i32>,
                #[serde(with = "rational_string")]
                coefficient: Rational,
            }
            Ok(Outcome::ok(match g.format {
                Format::Json => to_json(&Out { target: indices, coefficient: value }),
                Format::Text => format!("{}\n", format_rational(&value)),
            }))
        }
        Command::Verify { f, g: gs, window, filter } => {
            let filter = parse_filter(&filter.filter)?;
            let ctx = BranchingContext::default();
            let fs = series::parse_series(f, &model, filter, *window, &ctx)?;
            let gs = series::parse_series(gs, &model, filter, *window, &ctx)?;
            let r = hierarchy::verify_commute(&fs, &gs, &model, *window)?;
            #[derive(Serialize)]
            struct Out {
                window: u32,
                targets_checked: usize,
                residuals: Vec<PolynomialTerm>,
            }
            let out = Out {
                window: r.window,
                targets_checked: r.targets_checked,
                residuals: r.residuals.iter().map(|(m, c)| term(m, c)).collect(),
            };
            let body = match g.format {
                Format::Json => to_json(&out),
                Format::Text => format!(
                    "window {}  targets {}  residuals {}\n{}",
                    r.window,
                    r.targets_checked,
                    r.residuals.len(),
                    if r.passes() {
                        String::new()
                    } else {
                        table(r.residuals.iter().map(|(m, c)| (format_rational(c), m.to_string())))
                    }
                ),
            };
            Ok(Outcome::check(body, r.passes(), &format!("{} residual(s) found", r.residuals.len())))
        }
        Command::SignSearch { j, k, window, bound, filter } => {
            let r = hierarchy::sign_search(&model, *j, *k, *window, *bound, parse_filter(&filter.filter)?)?;
            #[derive(Serialize)]
            struct Out<'a> {
                free_indices: &'a [i32],
                tried: usize,
                passing: &'a [std::collections::BTreeMap<i32, i8>],
            }
            let body = match g.format {
                Format::Json => {
                    to_json(&Out { free_indices: &r.free_indices, tried: r.tried, passing: &r.passing })
                }
                Format::Text => {
                    let mut s = format!("tried {}  passing {}\n", r.tried, r.passing.len());
                    for a in &r.passing {
                        let row: Vec<String> = a.iter().map(|(k, e)| format!("{k}:{}", if *e > 0 { '+' } else { '-' })).collect();
                        s.push_str(&row.join(" "));
                        s.push('\n');
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Hurwitz(h) => hurwitz_command(h, g),
        Command::Rho(r) => rho_command(r, g),
        Command::Weyl(w) => weyl_command(w, &model, g),
        Command::Export { kind, input } => export_command(*kind, input, &model, g),
    }
}

fn render_polynomial(p: &sft_core::Polynomial, format: Format) -> String {
    match format {
        Format::Json => polynomial_json(p),
        Format::Text => polynomial_table(p),
    }
}

fn parse_profile(s: &str) -> Result<Vec<u32>, CliError> {
    hurwitz::parse_parts(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn hurwitz_command(h: &Hurwitz, g: &Global) -> Result<Outcome, CliError> {
    match h {
        Hurwitz::Count { d, lp, lm, nu, connected, max_degree } => {
            let spec = FactorizationSpec::new(*d, parse_profile(lp)?, parse_profile(lm)?, parse_profile(nu)?, *connected)?;
            let count = hurwitz::count_bounded(&spec, max_degree.unwrap_or(hurwitz::DEFAULT_MAX_DEGREE))?;
            #[derive(Serialize)]
            struct Out<'a> {
                spec: &'a FactorizationSpec,
                #[serde(with = "rational_string")]
                count: Rational,
                genus: Option<u32>,
            }
            let genus = hurwitz::genus(&spec).ok();
            Ok(Outcome::ok(match g.format {
                Format::Json => to_json(&Out { spec: &spec, count: count.clone(), genus }),
                Format::Text => format!(
                    "count {}  genus {}\n",
                    format_rational(&count),
                    genus.map_or("-".to_string(), |x| x.to_string())
                ),
            }))
        }
        Hurwitz::Bh { mu, cutoff } => {
            let mu = BranchingProfile::new(parse_profile(mu)?)?;
            let p = hurwitz::branching_hamiltonian(&mu, *cutoff, &BranchingContext::default())?;
            Ok(Outcome::ok(render_polynomial(&p, g.format)))
        }
        Hurwitz::Rho(r) => rho_command(r, g),
    }
}

fn rho_command(r: &RhoArgs, g: &Global) -> Result<Outcome, CliError> {
    let profiles: Option<Vec<BranchingProfile>> = if r.bare {
        Some(Vec::new())
    } else if r.profiles.is_empty() {
        None
    } else {
        Some(r.profiles.iter().map(|p| Ok(BranchingProfile::new(parse_profile(p)?)?)).collect::<Result<_, CliError>>()?)
    };
    let sol = hurwitz::solve_rho(r.j, r.cutoff, profiles.as_deref(), &BranchingContext::default())?;
    Ok(Outcome::ok(match g.format {
        Format::Json => to_json(&sol),
        Format::Text => {
            let mut rows = vec![(format_rational(&sol.leading), format!("h_({})", r.j + 1))];
            rows.extend(sol.rho.iter().map(|e| (format_rational(&e.value), format!("h_({})", e.mu))));
            table(rows)
        }
    }))
}

fn weyl_table(w: &WeylElement) -> String {
    table(w.terms().map(|(k, c)| (format_rational(c), k.to_string())))
}

fn render_weyl(w: &WeylElement, format: Format) -> String {
    match format {
        Format::Json => to_json(&WeylJson::from_element(w, None)),
        Format::Text => weyl_table(w),
    }
}

fn render_boundary(x: &DElement, format: Format) -> String {
    match format {
        Format::Json => to_json(&DElementJson::from_element(x)),
        Format::Text => table(x.terms().map(|(k, c)| (format_rational(c), k.to_string()))),
    }
}

fn weyl_command(w: &Weyl, model: &OrbitModel, g: &Global) -> Result<Outcome, CliError> {
    let ends = |e: &args::Ends| -> Result<OrbitModel, CliError> {
        match &e.model_plus {
            Some(p) => read_model(Some(p)),
            None => Ok(model.clone()),
        }
    };
    match w {
        Weyl::Star(b) | Weyl::Commutator(b) => {
            let f = read_weyl(&b.f, model)?;
            let h = read_weyl(&b.g, model)?;
            let r = if matches!(w, Weyl::Star(_)) {
                weyl::try_star(&f, &h, b.order)?
            } else {
                weyl::try_commutator(&f, &h, b.order)?
            };
            Ok(Outcome::ok(render_weyl(&r, g.format)))
        }
        Weyl::Master { h, order } => {
            let report = weyl::check_master(&read_weyl(h, model)?, *order)?;
            Ok(Outcome::check(render_weyl(&report.residual, g.format), report.passes(), "[H, H] does not vanish"))
        }
        Weyl::Action { h, side, x, order, ends: e } => {
            let plus = ends(e)?;
            let (side, alphabet) = match side {
                SideArg::Left => (Side::Left, model),
                SideArg::Right => (Side::Right, &plus),
            };
            let h = read_weyl(h, alphabet)?;
            let x = read_boundary(x, model, &plus)?;
            Ok(Outcome::ok(render_boundary(&weyl::apply_action(&h, side, &x, *order)?, g.format)))
        }
        Weyl::Differential { g: gp, cobordism: c } => {
            let plus = ends(&c.ends)?;
            let (f, hm, hp) = cobordism_inputs(c, model, &plus)?;
            let x = read_boundary(gp, model, &plus)?;
            let d = weyl::cobordism_differential(&x, &f, &hm, &hp, c.order)?;
            Ok(Outcome::ok(render_boundary(&d, g.format)))
        }
        Weyl::Residual { cobordism: c } => {
            let plus = ends(&c.ends)?;
            let (f, hm, hp) = cobordism_inputs(c, model, &plus)?;
            let r = weyl::master_residual(&f, &hm, &hp, c.order)?;
            let passed = r.is_zero();
            Ok(Outcome::check(render_boundary(&r, g.format), passed, "master equation residual does not vanish"))
        }
    }
}

fn cobordism_inputs(
    c: &args::Cobordism,
    minus: &OrbitModel,
    plus: &OrbitModel,
) -> Result<(DElement, WeylElement, WeylElement), CliError> {
    let f = match &c.potential {
        Some(p) => read_boundary(p, minus, plus)?,
        None => DElement::zero(),
    };
    Ok((f, read_weyl(&c.h_minus, minus)?, read_weyl(&c.h_plus, plus)?))
}

fn export_command(kind: ExportKind, input: &std::path::Path, model: &OrbitModel, g: &Global) -> Result<Outcome, CliError> {
    let body = match kind {
        ExportKind::Model => {
            let m = read_model(Some(input))?;
            match g.format {
                Format::Json => format!("{}\n", m.to_json_string()),
                Format::Text => {
                    let hbar = m.hbar_grading();
                    let rows = (1..=m.max_iterate().unwrap_or(6).min(6)).map(|n| {
                        let bad = m.is_bad(n).unwrap_or(false);
                        let grading = m.grading(n as i32).map_or("-".into(), |x| x.to_string());
                        (format!("{n}"), format!("cz {}  |q| {grading}{}", m.cz(n).unwrap_or(0), if bad { "  bad" } else { "" }))
                    });
                    format!("m {}  |hbar| {hbar}\n{}", m.m, table(rows))
                }
            }
        }
        ExportKind::Polynomial => render_polynomial(&read_polynomial(input, model)?, g.format),
        ExportKind::Weyl => {
            let text = fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let form: WeylJson = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let w = form.to_element(model).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            match g.format {
                Format::Json => to_json(&WeylJson::from_element(&w, form.alphabet.as_deref())),
                Format::Text => weyl_table(&w),
            }
        }
        ExportKind::Boundary => render_boundary(&read_boundary(input, model, model)?, g.format),
    };
    Ok(Outcome::ok(body))
}
