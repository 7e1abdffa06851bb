use std::path::PathBuf;

use hurwitz_core::hurwitz::{
    connected_series, disconnected_series_character, hurwitz_number, HurwitzRequest, Method, ORACLE_CAP,
};
use hurwitz_core::partitions::{
    enumerate_partitions, load_character_cache, precompute_characters, save_character_cache,
};
use hurwitz_core::polycheck::{admissible_residues, verify_quasipolynomiality};
use hurwitz_core::spectral::{check_bergman02, check_case_identities, check_f01, check_xi, check_xi_derivative};
use hurwitz_core::{BigRational, Error, HurwitzKind, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{CacheAction, Cli, Command, MethodArg};

const CACHE_FILE: &str = "characters.txt";

/// Everything a command produces before rendering.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Vec<Value>,
    pub passed: bool,
}

fn cache_path(cli: &Cli) -> PathBuf {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("HURWITZ_CACHE_DIR").map(PathBuf::from))
        .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("hurwitz")))
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("hurwitz")))
        .unwrap_or_else(|| PathBuf::from(".hurwitz-cache"));
    dir.join(CACHE_FILE)
}

fn q(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn run(cli: &Cli) -> Result<Report> {
    let cache = cache_path(cli);
    if !matches!(cli.command, Command::Cache { .. }) {
        load_character_cache(&cache)?;
    }
    match &cli.command {
        Command::Compute { kind, r, g, mu, method, disconnected } => compute(*kind, *r, *g, mu, *method, !disconnected),
        Command::Series { kind, r, mu, order, disconnected } => series(*kind, *r, mu, *order, !disconnected),
        Command::VerifyQuasipoly { kind, r, g, n, residues, grid_base, holdouts } => {
            verify_quasipoly(*kind, *r, *g, *n, residues.as_deref(), *grid_base, *holdouts)
        }
        Command::Xi { kind, r, i, order, p } => xi(*kind, *r, *i, *order, *p),
        Command::UnstableCheck { kind, r, order } => unstable_check(*kind, *r, *order),
        Command::CrossValidate { kind, r, max_degree, max_b } => cross_validate(*kind, *r, *max_degree, *max_b),
        Command::Cache { action } => cache_command(*action, &cache),
    }
}

fn compute(kind: HurwitzKind, r: usize, g: i64, mu: &[usize], method: MethodArg, connected: bool) -> Result<Report> {
    let methods: Vec<Method> = match method {
        MethodArg::Character => vec![Method::Character],
        MethodArg::Fock => vec![Method::Fock],
        MethodArg::Oracle => vec![Method::Oracle],
        MethodArg::All => Method::ALL.to_vec(),
    };
    let d: usize = mu.iter().sum();
    let mut results = Vec::new();
    let mut values = Vec::new();
    for m in methods {
        if m == Method::Oracle && d > ORACLE_CAP && method == MethodArg::All {
            results.push(json!({
                "method": m.to_string(),
                "mu": mu,
                "value": Value::Null,
                "note": format!("skipped: degree {d} exceeds the oracle cap {ORACLE_CAP}"),
            }));
            continue;
        }
        let req = HurwitzRequest { kind, r, g, mu: mu.to_vec(), connected, method: m };
        let value = hurwitz_number(&req)?;
        results.push(json!({ "method": m.to_string(), "mu": mu, "value": q(&value.value), "note": value.note }));
        values.push(value.value);
    }
    let passed = values.windows(2).all(|w| w[0] == w[1]);
    let params = json!({
        "kind": kind.to_string(), "r": r, "g": g, "mu": mu,
        "method": format!("{method:?}").to_lowercase(), "connected": connected,
    });
    Ok(Report { command: "compute", params, results, passed })
}

fn series(kind: HurwitzKind, r: usize, mu: &[usize], order: i64, connected: bool) -> Result<Report> {
    let block = |s: &[usize], o: i64| disconnected_series_character(kind, r, s, o);
    let s = if connected { connected_series(mu, order, block)? } else { block(mu, order)? };
    let d = mu.iter().sum::<usize>() as i64;
    let n = mu.len() as i64;
    let results = (0..order)
        .map(|b| {
            // b = 2g - 2 + n + d/r
            let twice_g = (d % r as i64 == 0).then(|| b + 2 - n - d / r as i64);
            let g = twice_g.filter(|t| t % 2 == 0 && *t >= 0).map(|t| t / 2);
            Ok(json!({ "b": b, "g": g, "value": q(&s.coeff1(b)?) }))
        })
        .collect::<Result<_>>()?;
    let params = json!({ "kind": kind.to_string(), "r": r, "mu": mu, "order": order, "connected": connected });
    Ok(Report { command: "series", params, results, passed: true })
}

fn verify_quasipoly(
    kind: HurwitzKind,
    r: usize,
    g: i64,
    n: usize,
    residues: Option<&[usize]>,
    grid_base: i64,
    holdouts: usize,
) -> Result<Report> {
    let classes = match residues {
        Some(e) => vec![e.to_vec()],
        None => admissible_residues(r, n),
    };
    let mut results = Vec::new();
    let mut passed = true;
    for eta in &classes {
        let report = verify_quasipolynomiality(kind, r, g, n, eta, grid_base, holdouts)?;
        passed &= report.status.is_pass();
        results.push(serde_json::to_value(&report).map_err(|e| Error::Invalid(e.to_string()))?);
    }
    let params = json!({
        "kind": kind.to_string(), "r": r, "g": g, "n": n, "residues": residues,
        "grid_base": grid_base, "holdouts": holdouts,
    });
    Ok(Report { command: "verify-quasipoly", params, results, passed })
}

fn xi(kind: HurwitzKind, r: usize, i: Option<usize>, order: i64, p: u32) -> Result<Report> {
    let indices: Vec<usize> = match i {
        Some(i) => vec![i],
        None => (0..r).collect(),
    };
    let mut results = Vec::new();
    let mut passed = true;
    for i in indices {
        let report = if p == 0 { check_xi(kind, r, i, order)? } else { check_xi_derivative(kind, r, i, p, order)? };
        passed &= report.status.is_pass();
        for row in &report.rows {
            results.push(json!({
                "i": i, "exponent": row.exponent, "series": q(&row.actual), "closed": q(&row.expected),
                "match": row.matches(),
            }));
        }
    }
    let params = json!({ "kind": kind.to_string(), "r": r, "i": i, "order": order, "p": p });
    Ok(Report { command: "xi", params, results, passed })
}

fn unstable_check(kind: HurwitzKind, r: usize, order: i64) -> Result<Report> {
    let mut results = Vec::new();
    let f01 = check_f01(kind, r, order)?;
    let mut passed = f01.status.is_pass();
    for row in &f01.rows {
        results.push(json!({
            "check": "f01", "exponent": row.exponent, "closed": q(&row.expected), "curve": q(&row.actual),
            "match": row.matches(),
        }));
    }
    if kind == HurwitzKind::Monotone {
        let bergman = check_bergman02(r, order)?;
        passed &= bergman.status.is_pass();
        for row in &bergman.rows {
            results.push(json!({
                "check": "bergman02", "mu": [row.mu1, row.mu2], "closed": q(&row.closed), "curve": q(&row.series),
                "match": row.series == row.closed,
            }));
        }
        for total in 2..=order {
            if total % r as i64 != 0 {
                continue;
            }
            for mu1 in 1..total {
                let case = check_case_identities(r, mu1, total - mu1)?;
                passed &= case.status.is_pass();
                results.push(json!({
                    "check": format!("case_{}", case.case), "mu": [mu1, total - mu1], "closed": q(&case.rhs),
                    "curve": q(&case.lhs), "match": case.status.is_pass(),
                }));
            }
        }
    }
    let params = json!({ "kind": kind.to_string(), "r": r, "order": order });
    Ok(Report { command: "unstable-check", params, results, passed })
}

fn cross_validate(kind: Option<HurwitzKind>, r: Option<usize>, max_degree: usize, max_b: i64) -> Result<Report> {
    let kinds: Vec<HurwitzKind> = kind.map_or(HurwitzKind::ALL.to_vec(), |k| vec![k]);
    let rs: Vec<usize> = r.map_or(vec![1, 2, 3], |r| vec![r]);
    let mut jobs = Vec::new();
    for &kind in &kinds {
        for &r in &rs {
            for d in (r..=max_degree).step_by(r.max(1)) {
                for lambda in enumerate_partitions(d) {
                    let mu = lambda.parts().to_vec();
                    let n = mu.len() as i64;
                    let mut g = 0;
                    while 2 * g - 2 + n + (d / r) as i64 <= max_b {
                        jobs.push((kind, r, mu.clone(), g));
                        g += 1;
                    }
                }
            }
        }
    }
    let rows: Vec<(Value, bool)> = jobs
        .par_iter()
        .map(|(kind, r, mu, g)| -> Result<(Value, bool)> {
            let number = |method| {
                let req = HurwitzRequest { kind: *kind, r: *r, g: *g, mu: mu.clone(), connected: true, method };
                hurwitz_number(&req).map(|v| v.value)
            };
            let character = number(Method::Character)?;
            let fock = number(Method::Fock)?;
            let oracle = if mu.iter().sum::<usize>() <= ORACLE_CAP { Some(number(Method::Oracle)?) } else { None };
            let agree = fock == character && oracle.as_ref().is_none_or(|o| *o == character);
            let row = json!({
                "kind": kind.to_string(), "r": r, "mu": mu, "g": g,
                "character": q(&character), "fock": q(&fock), "oracle": oracle.as_ref().map(q), "agree": agree,
            });
            Ok((row, agree))
        })
        .collect::<Result<_>>()?;
    let passed = rows.iter().all(|(_, ok)| *ok);
    let results = rows.into_iter().map(|(v, _)| v).collect();
    let params = json!({
        "kind": kind.map(|k| k.to_string()), "r": r, "max_degree": max_degree, "max_b": max_b,
    });
    Ok(Report { command: "cross-validate", params, results, passed })
}

fn cache_command(action: CacheAction, path: &std::path::Path) -> Result<Report> {
    let shown = path.display().to_string();
    let (params, result) = match action {
        CacheAction::Build { max_degree } => {
            load_character_cache(path)?;
            precompute_characters(max_degree);
            let records = save_character_cache(path, max_degree)?;
            (json!({ "action": "build", "max_degree": max_degree }), json!({ "path": shown, "records": records }))
        }
        CacheAction::Info => {
            let exists = path.exists();
            let records = load_character_cache(path)?;
            (json!({ "action": "info" }), json!({ "path": shown, "exists": exists, "records": records }))
        }
        CacheAction::Clear => {
            let removed = match std::fs::remove_file(path) {
                Ok(()) => true,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => false,
                Err(e) => return Err(Error::Cache(e.to_string())),
            };
            (json!({ "action": "clear" }), json!({ "path": shown, "removed": removed }))
        }
    };
    Ok(Report { command: "cache", params, results: vec![result], passed: true })
}
