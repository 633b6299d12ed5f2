//! One function per subcommand, each producing an [`Output`].

use ergo_core::json::{
    self, certificate_to_json, dyadic_to_json, element_to_json, escape_time_to_json, int_to_json,
    set_to_json, tower_element_to_json, Element,
};
use ergo_core::*;
use serde_json::{json, Value};

use crate::input::{parse_element, parse_odometer_element, parse_set};
use crate::output::{Cell, Output};
use crate::verify::run_verify;
use crate::{CliError, Command};

/// Runs `cmd`; the status is 1 when a result fails its own verification.
pub fn execute(cmd: &Command) -> Result<(Output, i32), CliError> {
    let ok = |out: Output| Ok((out, 0));
    match cmd {
        Command::Verify { suite, seed, scale } => {
            let report = run_verify(*suite, *seed, *scale);
            let status = report.exit_status;
            Ok((verify_output(&report), status))
        }
        Command::Index { element } => {
            let u = parse_odometer_element(element)?;
            let mut out = Output::new(json!({ "index": int_to_json(&u.index()) }), &["index"]);
            out.row(vec![u.index().into()]);
            ok(out)
        }
        Command::Compose { u, v } => match (parse_element(u)?, parse_element(v)?) {
            (Element::Odometer(u), Element::Odometer(v)) => ok(odometer_output(&u.compose(&v))),
            (Element::Tower(u), Element::Tower(v)) => ok(tower_output(&u.compose(&v)?)),
            _ => Err(CliError::Usage("cannot compose elements of different systems".into())),
        },
        Command::Inverse { element } => match parse_element(element)? {
            Element::Odometer(u) => ok(odometer_output(&u.inverse())),
            Element::Tower(u) => ok(tower_output(&u.inverse())),
        },
        Command::Induce { element, set } => {
            let u = parse_odometer_element(element)?;
            let a = parse_set(set)?;
            ok(induce_output(&induce(&u, &a)?))
        }
        Command::Decompose { element } => {
            let p = decompose_pnp(&parse_odometer_element(element)?);
            let parts = [("periodic", &p.periodic), ("positive", &p.positive), ("negative", &p.negative)];
            let mut out = Output::new(
                json!({
                    "periodic": element_to_json(&p.periodic),
                    "positive": element_to_json(&p.positive),
                    "negative": element_to_json(&p.negative),
                }),
                &["part", "prefix", "cocycle"],
            );
            for (name, e) in parts {
                for (s, n) in e.cocycle().iter().enumerate() {
                    out.row(vec![name.into(), s.into(), n.into()]);
                }
            }
            ok(out)
        }
        Command::FactorPositive { element } => {
            certificate_output(&factor_positive(&parse_odometer_element(element)?)?)
        }
        Command::NormalForm { element } => {
            certificate_output(&normal_form(&parse_odometer_element(element)?)?)
        }
        Command::FactorInvolutions { element } => certificate_output(
            &factor_periodic_into_involutions(&parse_odometer_element(element)?)?,
        ),
        Command::Ncycle {
            set,
            n,
            max_extra_depth,
        } => {
            if *n < 2 {
                return Err(CliError::Usage("--n must be at least 2".into()));
            }
            let a = parse_set(set)?;
            let v = ncycle_support_test(&a, *n, *max_extra_depth)?;
            let mut out = Output::new(
                json!({
                    "set": set_to_json(&a),
                    "m": n,
                    "cylinders": a.len(),
                    "found": v.found,
                    "closed_form": v.closed_form,
                    "witness": v.witness.as_ref().map(set_to_json),
                    "witness_depth": v.witness_depth,
                }),
                &["m", "cylinders", "found", "closed_form", "witness"],
            );
            let witness = v.witness.as_ref().map_or(String::new(), |b| b.to_string());
            out.row(vec![(*n).into(), a.len().into(), v.found.into(), v.closed_form.into(), witness.into()]);
            ok(out)
        }
        Command::Escape { set } => {
            let e = escape_time(&parse_set(set)?)?;
            let integral = match &e.integral {
                EscapeIntegral::Finite(v) => v.to_string(),
                EscapeIntegral::Infinite => "infinite".into(),
            };
            let mut out = Output::new(escape_time_to_json(&e), &["prefix", "tau"])
                .comment(format!("depth {}, integral {integral}", e.depth));
            for &(s, tau) in &e.table {
                let tau = tau.map_or(Cell::from("infinite"), Cell::from);
                out.row(vec![s.into(), tau]);
            }
            ok(out)
        }
        Command::EscapeFamily { max_m } => {
            if *max_m == 0 {
                return Err(CliError::Usage("--max-m must be at least 1".into()));
            }
            let rows = escape_tower_family(*max_m)?;
            let values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "m": r.m,
                        "depth": r.depth,
                        "measure": dyadic_to_json(&r.measure),
                        "integral": dyadic_to_json(&r.integral),
                    })
                })
                .collect();
            let mut out = Output::new(json!({ "rows": values }), &["m", "depth", "measure", "integral"]);
            for r in &rows {
                out.row(vec![r.m.into(), r.depth.into(), (&r.measure).into(), (&r.integral).into()]);
            }
            ok(out)
        }
        Command::Counterexample { max_n, n: Some(n) } => {
            let _ = max_n;
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            ok(tower_output(&counterexample_element(*n)?))
        }
        Command::Counterexample { max_n, n: None } => {
            if *max_n == 0 {
                return Err(CliError::Usage("--max-n must be at least 1".into()));
            }
            ok(counterexample_output(&counterexample_report(*max_n)?))
        }
        Command::Random {
            depth,
            max_shift,
            seed,
        } => ok(odometer_output(&random_element(*depth, *max_shift, *seed)?)),
    }
}

fn odometer_output(u: &FullGroupElement) -> Output {
    let mut out = Output::new(element_to_json(u), &["prefix", "cocycle"]);
    for (s, n) in u.cocycle().iter().enumerate() {
        out.row(vec![s.into(), n.into()]);
    }
    out
}

fn tower_output(u: &TowerElement) -> Output {
    let mut out = Output::new(tower_element_to_json(u), &["tower", "level", "shift"])
        .comment("moved levels only");
    for t in 0..u.system().towers().len() {
        for (&level, &shift) in u.moved_levels(t) {
            out.row(vec![t.into(), level.into(), shift.into()]);
        }
    }
    out
}

fn induce_output(r: &InducedResult) -> Output {
    let times: Vec<Value> = r
        .return_times
        .iter()
        .map(|&(s, t)| json!({ "prefix": s, "return_time": t }))
        .collect();
    let mut out = Output::new(
        json!({
            "element": element_to_json(&r.element),
            "depth": r.depth,
            "return_times": times,
            "return_time_integral": dyadic_to_json(&r.return_time_integral()),
            "meets_every_nontrivial_orbit": r.meets_every_nontrivial_orbit,
        }),
        &["prefix", "return_time"],
    )
    .comment(format!(
        "depth {}, return-time integral {}, meets every nontrivial orbit: {}",
        r.depth,
        r.return_time_integral(),
        r.meets_every_nontrivial_orbit
    ));
    for &(s, t) in &r.return_times {
        out.row(vec![s.into(), t.into()]);
    }
    out
}

fn certificate_output(c: &FactorizationCertificate) -> Result<(Output, i32), CliError> {
    let mut out = Output::new(certificate_to_json(c), &["position", "kind", "factor"])
        .comment(format!("verified: {}", c.verified));
    for (i, f) in c.word.iter().enumerate() {
        let value = json::factor_to_json(f);
        let detail = value
            .get("set")
            .or_else(|| value.get("element"))
            .or_else(|| value.get("exponent"))
            .map_or(String::new(), Value::to_string);
        out.row(vec![i.into(), f.kind().into(), detail.into()]);
    }
    Ok((out, if c.verified { 0 } else { 1 }))
}

fn counterexample_output(report: &CounterexampleReport) -> Output {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| json!({ "n": r.n, "d_T": dyadic_to_json(&r.d_t), "d_TA": dyadic_to_json(&r.d_ta) }))
        .collect();
    let mut out = Output::new(
        json!({
            "mass_deficit": dyadic_to_json(&report.mass_deficit),
            "rows": rows,
            "glued": {
                "d_T": dyadic_to_json(&report.glued_d_t),
                "d_TA": dyadic_to_json(&report.glued_d_ta),
            },
        }),
        &["n", "d_T", "d_TA"],
    )
    .comment(format!("mass deficit {}", report.mass_deficit));
    for r in &report.rows {
        out.row(vec![r.n.into(), (&r.d_t).into(), (&r.d_ta).into()]);
    }
    out
}

fn verify_output(report: &crate::RunReport) -> Output {
    let mut out = Output::new(
        report.to_json(),
        &["suite", "seed", "cases", "failures", "wall_time_ms", "exit_status"],
    );
    for f in report.failures.iter().take(20) {
        out = out.comment(format!("FAIL {} {}: {}", f.suite, f.check, f.input));
    }
    out.row(vec![
        report.suite.into(),
        report.seed.into(),
        report.cases.into(),
        report.failures.len().into(),
        (report.wall_time.as_millis() as u64).into(),
        i64::from(report.exit_status).into(),
    ]);
    out
}
