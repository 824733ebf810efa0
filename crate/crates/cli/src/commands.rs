use std::fmt::Write as _;

use permcover_core::exposure::explain as explain_exposure;
use permcover_core::formulas::{self, dn_bounds};
use permcover_core::group::{make_dihedral, FactorProfile, GroupCode};
use permcover_core::solver::{
    lmin_reduction_check, radius_auto, radius_bruteforce, radius_restricted, relabel_extrema, SolverConfig,
};
use permcover_core::witness::{self, verify_witness, WitnessBundle};
use permcover_core::{CodeDescriptor, Error, Permutation, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::{
    Context, ExplainArgs, ExtremaArgs, Family, FormulaArgs, Output, Query, RadiusArgs, Table1Args, WitnessArgs,
};

const TABLE1_LIMIT: usize = 20;

fn json_only<T: Serialize>(v: &T) -> Result<Output> {
    Ok(Output {
        json: serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))?,
        csv: None,
    })
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required")))
}

fn parse_code(text: &str) -> Result<GroupCode> {
    let desc: CodeDescriptor =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("code descriptor: {e}")))?;
    GroupCode::build(&desc)
}

fn config(ctx: &Context) -> SolverConfig {
    SolverConfig {
        threads: ctx.threads,
        ..SolverConfig::default()
    }
}

pub fn formulas(a: &FormulaArgs) -> Result<Output> {
    let n = || need(a.n, "n");
    let pq = || Ok::<_, Error>((need(a.p, "p")?, need(a.q, "q")?));
    let value = match a.query {
        Query::RCyclic => json!(formulas::r_cyclic(n()?)?),
        Query::LmaxCyclic => json!(formulas::lmax_cyclic(n()?)?),
        Query::RPq => {
            let (p, q) = pq()?;
            json!(formulas::r_pq(p, q)?)
        }
        Query::LmaxPq => {
            let (p, q) = pq()?;
            json!(formulas::lmax_pq(p, q)?)
        }
        Query::RProduct => json!(formulas::r_product(&FactorProfile::new(a.parts.clone())?)?),
        Query::LmaxProduct => json!(formulas::lmax_product(&FactorProfile::new(a.parts.clone())?)?),
        Query::DnBounds => json!(dn_bounds(n()?)?),
        Query::DnWeakLower => json!(formulas::dn_weak_lower(n()?)?),
        Query::LminCyclicLower => json!(formulas::lmin_cyclic_lower(n()?)?),
        Query::LminPqLower => {
            let (p, q) = pq()?;
            json!(formulas::lmin_pq_lower(p, q)?)
        }
    };
    Ok(Output { json: value, csv: None })
}

pub fn witness(a: &WitnessArgs, ctx: &Context) -> Result<Output> {
    let bundle = match (&a.verify, a.family) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let bundle: WitnessBundle =
                serde_json::from_str(&text).map_err(|e| Error::MalformedBundle(e.to_string()))?;
            let report = verify_witness(&bundle)?;
            if !report.verified {
                return Err(Error::VerificationFailed(format!(
                    "{} of {} codewords within distance {}",
                    report.failures().count(),
                    report.code_size,
                    bundle.r0
                )));
            }
            WitnessBundle {
                verified: true,
                ..bundle
            }
        }
        (None, Some(Family::Pq)) => witness::witness_pq(need(a.p, "p")?, need(a.q, "q")?)?,
        (None, Some(Family::Lmax)) => witness::witness_lmax(need(a.p, "p")?, need(a.q, "q")?)?,
        (None, Some(Family::Dn)) => witness::witness_dn(need(a.n, "n")?)?,
        (None, Some(Family::DnRefined)) => witness::witness_dn_refined(need(a.n, "n")?)?,
        (None, None) => return Err(Error::InvalidParameter("--family or --verify is required".into())),
    };
    if a.recomplete == 0 {
        return json_only(&bundle);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut completions = Vec::with_capacity(a.recomplete);
    for _ in 0..a.recomplete {
        let re = bundle.recomplete(&mut rng)?;
        if !re.verified {
            return Err(Error::VerificationFailed(format!("random completion {} is covered", re.completed)));
        }
        completions.push(re.completed);
    }
    let mut json = serde_json::to_value(&bundle).map_err(|e| Error::Parse(e.to_string()))?;
    json["recompletions"] = json!(completions);
    Ok(Output { json, csv: None })
}

pub fn radius(a: &RadiusArgs, ctx: &Context) -> Result<Output> {
    let code = parse_code(&a.code)?;
    let cfg = SolverConfig {
        cap_override: a.cap_override,
        ..config(ctx)
    };
    let res = match (a.rtilde, a.force_bruteforce) {
        (Some(rt), _) => radius_restricted(&code, rt, &cfg)?,
        (None, true) => radius_bruteforce(&code, &cfg)?,
        (None, false) => radius_auto(&code, &cfg)?,
    };
    let mut out = json_only(&res)?;
    out.json["code"] = json!(code.descriptor().to_string());
    let mut csv = String::from("code,value,status\n");
    let status = out.json["status"].as_str().unwrap_or_default().to_string();
    let _ = writeln!(csv, "\"{}\",{},{}", code.descriptor(), res.value, status);
    out.csv = Some(csv);
    Ok(out)
}

#[derive(Serialize)]
struct Row {
    n: usize,
    r: usize,
    annotation: char,
    status: String,
}

pub fn table1(a: &Table1Args, ctx: &Context) -> Result<Output> {
    if a.from < 3 || a.from > a.to {
        return Err(Error::InvalidParameter(format!("bad range {}..={}", a.from, a.to)));
    }
    if a.to > TABLE1_LIMIT && !a.force {
        return Err(Error::DegreeCap {
            n: a.to,
            cap: TABLE1_LIMIT,
        });
    }
    let cfg = config(ctx);
    let mut rows = Vec::new();
    for n in a.from..=a.to {
        let res = radius_auto(&make_dihedral(n)?, &cfg)?;
        let bounds = dn_bounds(n)?;
        let annotation = bounds.annotate(res.value).ok_or_else(|| {
            Error::VerificationFailed(format!(
                "r(D_{n}) = {} lies outside [{}, {}]",
                res.value, bounds.lower, bounds.upper
            ))
        })?;
        rows.push(Row {
            n,
            r: res.value,
            annotation,
            status: serde_json::to_value(res.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        });
    }
    let mut csv = String::from("n,r,annotation\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.n, r.r, r.annotation);
    }
    Ok(Output {
        json: json!({ "rows": rows }),
        csv: Some(csv),
    })
}

pub fn explain(a: &ExplainArgs) -> Result<Output> {
    let code = parse_code(&a.code)?;
    let f: Permutation = a.perm.parse()?;
    json_only(&explain_exposure(&f, &code, a.r)?)
}

pub fn extrema(a: &ExtremaArgs, ctx: &Context) -> Result<Output> {
    let cfg = SolverConfig {
        cap_override: a.cap_override,
        normalizer_quotient: !a.no_quotient,
        ..config(ctx)
    };
    match a.reduction[..] {
        [] => {}
        [p, q] => return json_only(&lmin_reduction_check(p, q, &cfg)?),
        _ => return Err(Error::InvalidParameter("--reduction takes p,q".into())),
    }
    let text = a
        .code
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("--code or --reduction is required".into()))?;
    json_only(&relabel_extrema(&parse_code(text)?, &cfg)?)
}
