use std::fmt::Write as _;

use serde_json::{json, Value};
use shiftlab_core::admissible::{count_admissible_with, CountMethod};
use shiftlab_core::certificate::{parse_certificates, Certificate};
use shiftlab_core::entropy::{
    cyclic_microstate_count, entropy_series, independence_density, transfer_matrix_entropy,
    violation_budget,
};
use shiftlab_core::format::{
    format_pattern, format_window, parse_pattern, parse_spec, parse_window, parse_window_list,
    serialize_spec,
};
use shiftlab_core::tmp::{
    check_memory_set, find_interchangeable_pair, homoclinic_search, strong_tmp_scan,
    HomoclinicOutcome, MarginSide, PairOutcome, SpliceProblem,
};
use shiftlab_core::{zoo, Error, FiniteSubset, GroupSpec, Pattern, SearchConfig, SubshiftSpec};

use crate::report::{csv_field, report, verdict_json, verdict_status, Finished, Output, Status};
use crate::{Command, Format, Method, Side, SpecArg, ZooAction};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, already located.
    Input(String),
    Core(Error),
    /// A check that ran to completion and failed.
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load_spec(arg: &SpecArg) -> Result<SubshiftSpec> {
    if let Some(name) = arg.spec.strip_prefix("zoo:") {
        return zoo::get(name).map(|e| e.spec).ok_or_else(|| {
            CliError::Input(format!("no zoo entry `{name}`; see `shiftlab zoo list`"))
        });
    }
    let text = std::fs::read_to_string(&arg.spec)
        .map_err(|e| CliError::Input(format!("{}: {e}", arg.spec)))?;
    parse_spec(&text).map_err(|e| match e {
        Error::Parse { line, message } => {
            CliError::Input(format!("{}:{line}: {message}", arg.spec))
        }
        other => CliError::Input(format!("{}: {other}", arg.spec)),
    })
}

fn window(spec: &SubshiftSpec, s: &str) -> Result<FiniteSubset> {
    Ok(parse_window(spec.group(), s)?)
}

fn json_output(
    command: Value,
    spec: &SubshiftSpec,
    level: Option<String>,
    results: Value,
    cfg: &SearchConfig,
) -> Output {
    Output::Json(report(command, Some(spec), level, results, cfg.budget))
}

pub fn run(cmd: &Command, cfg: &SearchConfig) -> Result<Finished> {
    match cmd {
        Command::Count {
            spec,
            window: w,
            level,
            method,
        } => {
            let s = load_spec(spec)?;
            let f = window(&s, w)?;
            let m = match method {
                Method::Auto => CountMethod::Auto,
                Method::Search => CountMethod::Search,
            };
            let count = count_admissible_with(&s, &f, *level, m, cfg)?;
            let command = json!({ "name": "count", "spec": spec.spec, "window": w, "level": level.to_string() });
            let results =
                json!({ "window": format_window(&f), "size": f.len(), "count": count.to_string() });
            Ok(Finished {
                output: json_output(command, &s, Some(level.to_string()), results, cfg),
                certificates: Vec::new(),
                status: Status::Success,
            })
        }
        Command::Entropy {
            spec,
            windows,
            level,
            oracle,
            format,
        } => {
            let s = load_spec(spec)?;
            let (labels, ws): (Vec<String>, Vec<FiniteSubset>) =
                parse_window_list(s.group(), windows)?.into_iter().unzip();
            let series = entropy_series(&s, &ws, *level, cfg)?;
            let oracle = if *oracle {
                if s.group() != &(GroupSpec::Lattice { dim: 1 }) {
                    return Err(CliError::Input("--oracle needs a subshift over Z".into()));
                }
                Some(transfer_matrix_entropy(&s, 1)?)
            } else {
                None
            };
            let output = match format {
                Format::Csv => {
                    let mut out = String::from("window,size,count,rate");
                    if oracle.is_some() {
                        out.push_str(",oracle");
                    }
                    out.push('\n');
                    for (label, e) in labels.iter().zip(&series.entries) {
                        write!(
                            out,
                            "{},{},{},{}",
                            csv_field(label),
                            e.size,
                            e.count,
                            e.rate
                        )
                        .expect("string write");
                        if let Some(h) = oracle {
                            write!(out, ",{h}").expect("string write");
                        }
                        out.push('\n');
                    }
                    Output::Text(out)
                }
                Format::Json => {
                    let rows: Vec<Value> = series
                        .entries
                        .iter()
                        .zip(&labels)
                        .map(|(e, label)| {
                            json!({
                                "window": label,
                                "size": e.size,
                                "count": e.count.to_string(),
                                "rate": e.rate,
                            })
                        })
                        .collect();
                    let command = json!({ "name": "entropy", "spec": spec.spec, "windows": windows, "level": level.to_string() });
                    let results =
                        json!({ "folner": series.folner, "series": rows, "oracle": oracle });
                    json_output(command, &s, Some(level.to_string()), results, cfg)
                }
            };
            Ok(Finished {
                output,
                certificates: Vec::new(),
                status: Status::Success,
            })
        }
        Command::Tmp {
            spec,
            inner,
            outer,
            window: w,
            margin,
            scan,
            growth,
            side,
            level,
        } => {
            let s = load_spec(spec)?;
            if let Some(m) = margin {
                let f = window(&s, m)?;
                let supports = scan
                    .iter()
                    .map(|a| window(&s, a))
                    .collect::<Result<Vec<_>>>()?;
                let side = match side {
                    Side::Right => MarginSide::Right,
                    Side::Left => MarginSide::Left,
                };
                let rep = strong_tmp_scan(&s, &f, &supports, *growth, *level, side, cfg)?;
                let entries: Vec<Value> = rep
                    .entries
                    .iter()
                    .map(|e| {
                        json!({
                            "inner": format_window(&e.problem.inner),
                            "outer": format_window(&e.problem.outer),
                            "window": format_window(&e.problem.window),
                            "result": verdict_json(&s, &e.verdict),
                        })
                    })
                    .collect();
                let status = rep
                    .entries
                    .iter()
                    .map(|e| verdict_status(&e.verdict))
                    .max()
                    .unwrap_or(Status::Success);
                let certificates = rep
                    .entries
                    .iter()
                    .filter_map(|e| e.verdict.counterexample())
                    .map(|c| Certificate::counterexample(&s, c))
                    .collect();
                let command = json!({
                    "name": "tmp", "spec": spec.spec, "margin": m, "scan": scan,
                    "growth": growth, "side": format!("{side:?}").to_lowercase(), "level": level.to_string(),
                });
                let results = json!({ "all_hold": rep.all_hold(), "entries": entries });
                return Ok(Finished {
                    output: json_output(command, &s, Some(level.to_string()), results, cfg),
                    certificates,
                    status,
                });
            }
            let (Some(a), Some(b), Some(wd)) = (inner, outer, w) else {
                return Err(CliError::Input(
                    "tmp needs --A, --B and --window, or --margin with --scan".into(),
                ));
            };
            let prob = SpliceProblem::new(window(&s, a)?, window(&s, b)?, window(&s, wd)?, *level)?;
            let v = check_memory_set(&s, &prob, cfg)?;
            let certificates = v
                .counterexample()
                .map(|c| Certificate::counterexample(&s, c))
                .into_iter()
                .collect();
            let command = json!({ "name": "tmp", "spec": spec.spec, "A": a, "B": b, "window": wd, "level": level.to_string() });
            Ok(Finished {
                output: json_output(
                    command,
                    &s,
                    Some(level.to_string()),
                    verdict_json(&s, &v),
                    cfg,
                ),
                certificates,
                status: verdict_status(&v),
            })
        }
        Command::Asym {
            spec,
            inner,
            window: w,
            level,
        } => {
            let s = load_spec(spec)?;
            let a = window(&s, inner)?;
            let wd = window(&s, w)?;
            let outcome = find_interchangeable_pair(&s, &a, &wd, *level, cfg)?;
            let command = json!({ "name": "asym", "spec": spec.spec, "A": inner, "window": w, "level": level.to_string() });
            let (results, certificates, status) = match &outcome {
                PairOutcome::Witness(wit) => (
                    json!({
                        "outcome": "witness",
                        "p": format_pattern(&s, &wit.p),
                        "q": format_pattern(&s, &wit.q),
                        "context": format_pattern(&s, &wit.context),
                    }),
                    vec![Certificate::pair(&s, wit)],
                    Status::Success,
                ),
                PairOutcome::NoneUpToScale { .. } => (
                    json!({ "outcome": "none-up-to-scale", "inner": format_window(&a), "window": format_window(&wd) }),
                    Vec::new(),
                    Status::NoneUpToScale,
                ),
            };
            Ok(Finished {
                output: json_output(command, &s, Some(level.to_string()), results, cfg),
                certificates,
                status,
            })
        }
        Command::Homoclinic {
            spec,
            background,
            radius,
            margin,
        } => {
            let s = load_spec(spec)?;
            let b = s.alphabet().symbol(background).ok_or_else(|| {
                CliError::Input(format!("unknown background symbol `{background}`"))
            })?;
            let outcome = homoclinic_search(&s, b, *radius, *margin, cfg)?;
            let command = json!({ "name": "homoclinic", "spec": spec.spec, "background": background, "radius": radius, "margin": margin });
            let (results, certificates, status) = match &outcome {
                HomoclinicOutcome::Witness(w) => (
                    json!({ "outcome": "witness", "margin": w.margin, "pattern": format_pattern(&s, &nonbackground(&w.pattern, b)) }),
                    vec![Certificate::homoclinic(&s, w)],
                    Status::Success,
                ),
                HomoclinicOutcome::NoneUpToScale { margin, .. } => (
                    json!({ "outcome": "none-up-to-scale", "margin": margin }),
                    Vec::new(),
                    Status::NoneUpToScale,
                ),
            };
            Ok(Finished {
                output: json_output(command, &s, Some("local:margin".into()), results, cfg),
                certificates,
                status,
            })
        }
        Command::Indep {
            spec,
            cylinder,
            ambient,
            level,
        } => {
            let s = load_spec(spec)?;
            let cylinders: Vec<Pattern> = if cylinder.is_empty() {
                let e = s.group().identity();
                (0..s.alphabet().len())
                    .map(|k| Pattern::from_pairs([(e.clone(), k as _)]))
                    .collect::<shiftlab_core::Result<_>>()?
            } else {
                cylinder
                    .iter()
                    .map(|c| parse_pattern(&s, c))
                    .collect::<shiftlab_core::Result<_>>()?
            };
            let amb = window(&s, ambient)?;
            let rep = independence_density(&s, &cylinders, &amb, *level, cfg)?;
            let command = json!({
                "name": "indep", "spec": spec.spec,
                "cylinders": cylinders.iter().map(|c| format_pattern(&s, c)).collect::<Vec<_>>(),
                "ambient": ambient, "level": level.to_string(),
            });
            let results = json!({
                "best": format_window(&rep.best),
                "size": rep.best.len(),
                "ambient_size": amb.len(),
                "density": rep.density,
                "complete": rep.complete,
            });
            let status = if rep.complete {
                Status::Success
            } else {
                Status::Budget
            };
            Ok(Finished {
                output: json_output(command, &s, Some(level.to_string()), results, cfg),
                certificates: vec![Certificate::independence(&s, &rep)],
                status,
            })
        }
        Command::Microstates {
            spec,
            n,
            beta,
            delta,
        } => {
            let s = load_spec(spec)?;
            let beta = match (beta, delta) {
                (Some(b), _) => *b,
                (None, Some(d)) => violation_budget(*d, *n),
                (None, None) => 0,
            };
            let m = cyclic_microstate_count(&s, *n, beta, cfg)?;
            let command = json!({ "name": "microstates", "spec": spec.spec, "n": n, "beta": beta });
            let results =
                json!({ "n": m.n, "beta": m.beta, "count": m.count.to_string(), "rate": m.rate() });
            Ok(Finished {
                output: json_output(command, &s, None, results, cfg),
                certificates: Vec::new(),
                status: Status::Success,
            })
        }
        Command::Verify { file } => verify(file, cfg),
        Command::Zoo { action } => run_zoo(action, cfg),
    }
}

fn nonbackground(p: &Pattern, b: shiftlab_core::Symbol) -> Pattern {
    Pattern::from_pairs(
        p.iter()
            .filter(|&(_, s)| s != b)
            .map(|(g, s)| (g.clone(), s)),
    )
    .expect("subpattern")
}

fn verify(file: &std::path::Path, cfg: &SearchConfig) -> Result<Finished> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let certs = parse_certificates(&text).map_err(|e| match e {
        Error::Parse { line, message } => {
            CliError::Failed(format!("{}:{line}: {message}", file.display()))
        }
        other => CliError::Failed(format!("{}: {other}", file.display())),
    })?;
    if certs.is_empty() {
        return Err(CliError::Failed(format!(
            "{}: no certificates",
            file.display()
        )));
    }
    let mut rows = Vec::new();
    let mut rejected = 0;
    for (i, c) in certs.iter().enumerate() {
        let (status, reason) = match c.verify(cfg) {
            Ok(()) => ("ok", Value::Null),
            Err(e) => {
                rejected += 1;
                ("rejected", Value::String(e.to_string()))
            }
        };
        rows.push(json!({ "line": i + 1, "kind": c.kind, "spec_hash": c.spec_hash, "status": status, "reason": reason }));
    }
    let command = json!({ "name": "verify", "file": file.display().to_string() });
    let out = report(
        command,
        None,
        None,
        json!({ "certificates": rows, "rejected": rejected }),
        cfg.budget,
    );
    if rejected > 0 {
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("JSON value")
        );
        return Err(CliError::Failed(format!(
            "{rejected} of {} certificates rejected",
            certs.len()
        )));
    }
    Ok(Finished {
        output: Output::Json(out),
        certificates: Vec::new(),
        status: Status::Success,
    })
}

fn run_zoo(action: &ZooAction, cfg: &SearchConfig) -> Result<Finished> {
    match action {
        ZooAction::List => {
            let mut out = String::new();
            for e in zoo::entries() {
                writeln!(out, "{}\t{}\t{}", e.name, e.spec.group(), e.summary)
                    .expect("string write");
            }
            Ok(Finished::text(out))
        }
        ZooAction::Dump { name } => {
            let e =
                zoo::get(name).ok_or_else(|| CliError::Input(format!("no zoo entry `{name}`")))?;
            Ok(Finished::text(serialize_spec(&e.spec)))
        }
        ZooAction::Check { name } => {
            let entries: Vec<_> =
                match name {
                    Some(n) => vec![zoo::get(n)
                        .ok_or_else(|| CliError::Input(format!("no zoo entry `{n}`")))?],
                    None => zoo::entries(),
                };
            let mut out = String::new();
            let mut failed = 0;
            for e in &entries {
                for c in &e.checks {
                    let (ok, detail) = match c.run(&e.spec, cfg) {
                        Ok(o) => (o.passed, o.detail),
                        Err(err) => (false, err.to_string()),
                    };
                    failed += usize::from(!ok);
                    let tag = if ok { "PASS" } else { "FAIL" };
                    writeln!(
                        out,
                        "{tag} {} [{:?}] {}: {detail}",
                        e.name, c.source, c.note
                    )
                    .expect("string write");
                }
            }
            if failed > 0 {
                print!("{out}");
                return Err(CliError::Failed(format!("{failed} zoo checks failed")));
            }
            Ok(Finished::text(out))
        }
    }
}
