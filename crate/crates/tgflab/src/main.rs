mod args;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};
use tgflab_core::formulas::{
    corrected_formula, family_formula, quartered_display, quartered_formula, quartered_shifted,
    Display,
};
use tgflab_core::kuo::{
    cells_of, face_quads, kuo_balanced_sides, kuo_unbalanced_sides, recurrence_sides, KuoError,
    Recurrence,
};
use tgflab_core::matchgen::{
    dual_graph, matching_gf, matching_gf_profile, tiling_count, weighted_count_at_one,
};
use tgflab_core::{build_region, Family, LaurentQ, Region, RegionSpec, WeightScheme};

use args::{
    Cli, Command, DisplayArg, Engine, FormulaArgs, KuoArgs, Method, Out, ReciprocityArgs,
    RenderArgs, TgfArgs, VerifyArgs,
};

/// Rendered output and whether every check in it passed.
struct Report {
    body: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Tgf(a) => cmd_tgf(&a),
        Command::Formula(a) => cmd_formula(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Reciprocity(a) => cmd_reciprocity(&a),
        Command::Kuo(a) => cmd_kuo(&a),
        Command::Render(a) => cmd_render(&a),
    };
    match result {
        Ok(report) => {
            print!("{}", report.body);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("TGFLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("TGFLAB_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn region(spec: &RegionSpec, scheme: Option<WeightScheme>) -> Result<Region, String> {
    let r = build_region(spec).map_err(|e| e.to_string())?;
    Ok(match scheme {
        Some(s) => r.with_scheme(s),
        None => r,
    })
}

fn enumerate(r: &Region, engine: Engine) -> LaurentQ {
    match engine {
        Engine::Profile => matching_gf_profile(r),
        Engine::Backtrack => matching_gf(&dual_graph(r)),
    }
}

fn closed_form(spec: &RegionSpec, corrected: bool) -> Result<LaurentQ, String> {
    let f = if corrected {
        corrected_formula(spec)
    } else {
        family_formula(spec)
    };
    f.map_err(|e| e.to_string())
}

fn csv_body(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_tgf(a: &TgfArgs) -> Result<Report, String> {
    let spec = a.spec.spec()?;
    let r = region(&spec, a.scheme)?;
    let (enumerated, formula) = match a.method {
        Method::Enumerate => (Some(enumerate(&r, a.engine)), None),
        Method::Formula => (None, Some(closed_form(&spec, a.corrected))),
        Method::Both => {
            let (e, f) = rayon::join(
                || enumerate(&r, a.engine),
                || closed_form(&spec, a.corrected),
            );
            (Some(e), Some(f))
        }
    };
    let difference = match (&enumerated, &formula) {
        (Some(e), Some(Ok(f))) => Some(e - f),
        _ => None,
    };
    let equal = difference.as_ref().map(|d| d.num_terms() == 0);
    let ok = match (&formula, equal) {
        (Some(Err(_)), _) => false,
        (_, Some(eq)) => eq,
        _ => true,
    };
    let scheme = r.scheme().name();
    let body = match a.out {
        Out::Text => {
            let mut s = format!("spec: {spec}\nscheme: {scheme}\ncells: {}\n", r.len());
            if let Some(e) = &enumerated {
                s += &format!("enumerate: {e}\n");
            }
            match &formula {
                Some(Ok(f)) => s += &format!("formula: {f}\n"),
                Some(Err(msg)) => s += &format!("formula: error: {msg}\n"),
                None => {}
            }
            if let Some(d) = &difference {
                s += &format!("difference: {d}\n");
            }
            if let Some(eq) = equal {
                s += if eq {
                    "result: equal\n"
                } else {
                    "result: MISMATCH\n"
                };
            }
            s
        }
        Out::Json => {
            let mut v = json!({
                "spec": spec,
                "scheme": scheme,
                "cells": r.len(),
            });
            if let Some(e) = &enumerated {
                v["enumerate"] = json!(e);
            }
            match &formula {
                Some(Ok(f)) => v["formula"] = json!(f),
                Some(Err(msg)) => v["formula_error"] = json!(msg),
                None => {}
            }
            if let Some(d) = &difference {
                v["difference"] = json!(d);
            }
            if let Some(eq) = equal {
                v["equal"] = json!(eq);
            }
            json_body(&v)
        }
        Out::Csv => {
            let opt = |p: &Option<LaurentQ>| p.as_ref().map(|p| p.to_string()).unwrap_or_default();
            let f = match &formula {
                Some(Ok(f)) => f.to_string(),
                Some(Err(msg)) => format!("error: {msg}"),
                None => String::new(),
            };
            let row = vec![
                spec.to_string(),
                scheme.to_string(),
                r.len().to_string(),
                opt(&enumerated),
                f,
                opt(&difference),
                equal.map(|e| e.to_string()).unwrap_or_default(),
            ];
            csv_body(
                &[
                    "spec",
                    "scheme",
                    "cells",
                    "enumerate",
                    "formula",
                    "difference",
                    "equal",
                ],
                &[row],
            )
        }
    };
    Ok(Report { body, ok })
}

fn cmd_formula(a: &FormulaArgs) -> Result<Report, String> {
    let spec = a.spec.spec()?;
    let f = match (a.display, spec.family.quartered_kind()) {
        (Some(d), Some(kind)) => {
            let d = match d {
                DisplayArg::Factorial => Display::Factorial,
                DisplayArg::Ratios => Display::Ratios,
            };
            quartered_display(kind, &spec.s, d).map_err(|e| e.to_string())
        }
        (Some(_), None) => {
            return Err(format!(
                "invalid parameters: --display applies to quartered families, not {}",
                spec.family
            ))
        }
        (None, _) => closed_form(&spec, a.corrected),
    };
    let (ok, text, value) = match &f {
        Ok(p) => (true, p.to_string(), json!(p)),
        Err(msg) => (false, format!("error: {msg}"), Value::Null),
    };
    let body = match a.out {
        Out::Text => format!("spec: {spec}\nformula: {text}\n"),
        Out::Json => {
            let mut v = json!({ "spec": spec, "formula": value });
            if let Err(msg) = &f {
                v["formula_error"] = json!(msg);
            }
            json_body(&v)
        }
        Out::Csv => csv_body(&["spec", "formula"], &[vec![spec.to_string(), text]]),
    };
    Ok(Report { body, ok })
}

struct Case {
    spec: RegionSpec,
    cells: usize,
    equal: bool,
    formula_error: Option<String>,
    palindromic: bool,
    at_one: bool,
    enumerate_ms: f64,
    formula_ms: f64,
}

impl Case {
    fn pass(&self) -> bool {
        self.equal && self.palindromic && self.at_one
    }

    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(msg) = &self.formula_error {
            out.push(format!("formula error: {msg}"));
        } else if !self.equal {
            out.push("formula differs from enumeration".into());
        }
        if !self.palindromic {
            out.push("not palindromic".into());
        }
        if !self.at_one {
            out.push("value at q=1 differs from weighted count".into());
        }
        out
    }
}

fn run_case(spec: &RegionSpec, a: &VerifyArgs) -> Result<Case, String> {
    let r = region(spec, a.scheme)?;
    let t0 = Instant::now();
    let m = enumerate(&r, a.engine);
    let enumerate_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let f = closed_form(spec, a.corrected);
    let formula_ms = t1.elapsed().as_secs_f64() * 1e3;
    let direct = match r.scheme() {
        WeightScheme::Symmetric => num::BigRational::from_integer(tiling_count(&r).into()),
        _ => weighted_count_at_one(&r),
    };
    Ok(Case {
        spec: spec.clone(),
        cells: r.len(),
        equal: f.as_ref().is_ok_and(|f| *f == m),
        formula_error: f.err(),
        palindromic: m.is_palindromic(),
        at_one: m.eval_at_one() == direct,
        enumerate_ms,
        formula_ms,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Report, String> {
    let specs = sweep::verify_grid(a)?;
    let cases: Vec<Case> = specs
        .par_iter()
        .map(|s| run_case(s, a))
        .collect::<Result<_, _>>()?;
    let passed = cases.iter().filter(|c| c.pass()).count();
    let failed = cases.len() - passed;
    let ms = |v: f64| format!("{v:.3}");
    let body = match a.out {
        Out::Text => {
            let mut s = String::new();
            for c in &cases {
                s += &format!("{} {} cells={}", pass(c.pass()), c.spec, c.cells);
                if a.timings {
                    s += &format!(
                        " enumerate_ms={} formula_ms={}",
                        ms(c.enumerate_ms),
                        ms(c.formula_ms)
                    );
                }
                s.push('\n');
            }
            s += &format!(
                "cases: {}, passed: {passed}, failed: {failed}\n",
                cases.len()
            );
            for c in cases.iter().filter(|c| !c.pass()) {
                s += &format!("failure: {}: {}\n", c.spec, c.problems().join("; "));
            }
            s
        }
        Out::Json => {
            let rows: Vec<Value> = cases
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "spec": c.spec,
                        "label": c.spec.to_string(),
                        "cells": c.cells,
                        "equal": c.equal,
                        "palindromic": c.palindromic,
                        "at_one": c.at_one,
                        "pass": c.pass(),
                    });
                    if let Some(msg) = &c.formula_error {
                        v["formula_error"] = json!(msg);
                    }
                    if a.timings {
                        v["enumerate_ms"] = json!(c.enumerate_ms);
                        v["formula_ms"] = json!(c.formula_ms);
                    }
                    v
                })
                .collect();
            json_body(&json!({
                "cases": rows,
                "summary": { "cases": cases.len(), "passed": passed, "failed": failed },
            }))
        }
        Out::Csv => {
            let mut header = vec![
                "family",
                "spec",
                "cells",
                "equal",
                "palindromic",
                "at_one",
                "pass",
            ];
            if a.timings {
                header.extend(["enumerate_ms", "formula_ms"]);
            }
            let rows: Vec<Vec<String>> = cases
                .iter()
                .map(|c| {
                    let mut row = vec![
                        c.spec.family.to_string(),
                        c.spec.to_string(),
                        c.cells.to_string(),
                        c.equal.to_string(),
                        c.palindromic.to_string(),
                        c.at_one.to_string(),
                        c.pass().to_string(),
                    ];
                    if a.timings {
                        row.extend([ms(c.enumerate_ms), ms(c.formula_ms)]);
                    }
                    row
                })
                .collect();
            csv_body(&header, &rows)
        }
    };
    Ok(Report {
        body,
        ok: failed == 0,
    })
}

fn cmd_reciprocity(a: &ReciprocityArgs) -> Result<Report, String> {
    let s = &a.s.0;
    let bases: Vec<u8> = match a.family {
        None => vec![1, 2],
        Some(Family::R1) => vec![1],
        Some(Family::R2) => vec![2],
        Some(f) => {
            return Err(format!(
                "invalid parameters: reciprocity starts from r1 or r2, not {f}"
            ))
        }
    };
    let x =
        a.x.unwrap_or_else(|| (s.last().copied().unwrap_or(0) - s.len() as i64).max(0));
    let mut rows = Vec::new();
    for base in bases {
        let target = RegionSpec::quartered(base + 2, x, s);
        target.validate().map_err(|e| e.to_string())?;
        let shifted = quartered_shifted(base, s, Display::Factorial).map_err(|e| e.to_string())?;
        let printed = quartered_formula(base + 2, x, s).map_err(|e| e.to_string())?;
        let equal = shifted == printed;
        rows.push((format!("{base}->{}", base + 2), shifted, printed, equal));
    }
    let ok = rows.iter().all(|r| r.3);
    let body = match a.out {
        Out::Text => {
            let list: Vec<String> = s.iter().map(|k| k.to_string()).collect();
            let mut out = format!("x: {x}\ns: ({})\n", list.join(","));
            for (pair, shifted, printed, equal) in &rows {
                out += &format!(
                    "{} {pair}\n  shifted: {shifted}\n  target:  {printed}\n",
                    pass(*equal)
                );
            }
            out
        }
        Out::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(pair, shifted, printed, equal)| {
                    json!({ "pair": pair, "shifted": shifted, "target": printed, "equal": equal })
                })
                .collect();
            json_body(&json!({ "x": x, "s": s, "pairs": v }))
        }
        Out::Csv => {
            let v: Vec<Vec<String>> = rows
                .iter()
                .map(|(pair, shifted, printed, equal)| {
                    vec![
                        pair.clone(),
                        shifted.to_string(),
                        printed.to_string(),
                        equal.to_string(),
                    ]
                })
                .collect();
            csv_body(&["pair", "shifted", "target", "equal"], &v)
        }
    };
    Ok(Report { body, ok })
}

struct KuoRow {
    check: String,
    subject: String,
    pass: bool,
}

fn recurrence_rows(
    which: Recurrence,
    specs: &[RegionSpec],
    strict: bool,
) -> Result<Vec<KuoRow>, String> {
    let results: Vec<_> = specs
        .par_iter()
        .map(|spec| (spec, recurrence_sides(which, spec)))
        .collect();
    let mut rows = Vec::new();
    for (spec, res) in results {
        match res {
            Ok((l, r)) => rows.push(KuoRow {
                check: which.to_string(),
                subject: spec.to_string(),
                pass: l == r,
            }),
            Err(KuoError::Precondition(msg)) if strict => {
                return Err(format!("invalid parameters: {which}: {msg}"))
            }
            Err(KuoError::Precondition(_)) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(rows)
}

fn identity_rows(spec: &RegionSpec) -> Result<Vec<KuoRow>, String> {
    let r = region(spec, None)?;
    let g = dual_graph(&r);
    let (nu, nd) = (g.up_vertices.len(), g.down_vertices.len());
    let balanced = if nu == nd {
        true
    } else if nu.abs_diff(nd) == 1 {
        false
    } else {
        return Err(format!(
            "invalid parameters: {spec} has {nu} up and {nd} down triangles"
        ));
    };
    let quads = face_quads(&g, balanced);
    let rows = quads
        .par_iter()
        .map(|q| {
            let sides = if balanced {
                kuo_balanced_sides(&g, q[0], q[1], q[2], q[3])
            } else {
                kuo_unbalanced_sides(&g, q[0], q[1], q[2], q[3])
            };
            let cells: Vec<String> = cells_of(&g, q).iter().map(|t| t.to_string()).collect();
            KuoRow {
                check: if balanced { "balanced" } else { "unbalanced" }.to_string(),
                subject: cells.join(" "),
                pass: matches!(sides, Ok((l, r)) if l == r),
            }
        })
        .collect();
    Ok(rows)
}

fn cmd_kuo(a: &KuoArgs) -> Result<Report, String> {
    let rows = match a.which {
        Some(which) if a.spec.has_parameters() => {
            let spec = a.spec.spec_for(Some(which.family()))?;
            recurrence_rows(which, &[spec], true)?
        }
        Some(which) => recurrence_rows(which, &sweep::recurrence_grid(which), false)?,
        None if a.spec.family.is_some() => identity_rows(&a.spec.spec()?)?,
        None => {
            let mut rows = Vec::new();
            for which in Recurrence::ALL {
                rows.extend(recurrence_rows(
                    which,
                    &sweep::recurrence_grid(which),
                    false,
                )?);
            }
            rows
        }
    };
    let passed = rows.iter().filter(|r| r.pass).count();
    let failed = rows.len() - passed;
    let body = match a.out {
        Out::Text => {
            let mut s = String::new();
            for r in &rows {
                s += &format!("{} {} {}\n", pass(r.pass), r.check, r.subject);
            }
            s += &format!(
                "checks: {}, passed: {passed}, failed: {failed}\n",
                rows.len()
            );
            s
        }
        Out::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "check": r.check, "subject": r.subject, "pass": r.pass }))
                .collect();
            json_body(&json!({
                "rows": v,
                "summary": { "checks": rows.len(), "passed": passed, "failed": failed },
            }))
        }
        Out::Csv => {
            let v: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.check.clone(), r.subject.clone(), r.pass.to_string()])
                .collect();
            csv_body(&["check", "subject", "pass"], &v)
        }
    };
    Ok(Report {
        body,
        ok: failed == 0,
    })
}

fn cmd_render(a: &RenderArgs) -> Result<Report, String> {
    let spec = a.spec.spec()?;
    let r = region(&spec, a.scheme)?;
    let picture = r.render();
    let body = match a.out {
        Out::Text => picture,
        Out::Json => json_body(&json!({
            "spec": spec,
            "scheme": r.scheme().name(),
            "cells": r.len(),
            "picture": picture,
        })),
        Out::Csv => csv_body(
            &["spec", "scheme", "cells", "picture"],
            &[vec![
                spec.to_string(),
                r.scheme().name().to_string(),
                r.len().to_string(),
                picture,
            ]],
        ),
    };
    Ok(Report { body, ok: true })
}
