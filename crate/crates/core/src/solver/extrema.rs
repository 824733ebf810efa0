use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::bruteforce::scan_code;
use super::{check_cap, SolverConfig};
use crate::error::{Error, Result};
use crate::group::{make_cyclic, make_product, next_permutation, relabel, FactorProfile, GroupCode};
use crate::perm::{distance_to_code, PartialPlacement, Permutation};

/// Largest and smallest covering radius over all relabelings `C^π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelabelExtrema {
    pub n: usize,
    pub base: String,
    pub lmax: usize,
    pub lmin: usize,
    /// First conjugator (lexicographic) attaining `lmax`.
    pub argmax: Permutation,
    pub argmin: Permutation,
    pub distinct_codes: usize,
    pub conjugators_examined: usize,
}

fn all_perms(n: usize) -> Vec<Permutation> {
    let mut v: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation::new(v.clone()).expect("valid"));
        if !next_permutation(&mut v) {
            break;
        }
    }
    out
}

/// Distinct relabelings of `code`, each with the first conjugator producing it.
/// Without the quotient every conjugator is kept.
fn relabelings(code: &GroupCode, quotient: bool) -> Result<(Vec<(Permutation, GroupCode)>, usize)> {
    let perms = all_perms(code.degree());
    let examined = perms.len();
    let mut seen: HashMap<Vec<Permutation>, ()> = HashMap::new();
    let mut out = Vec::new();
    for pi in perms {
        let c = relabel(code, &pi)?;
        if quotient && seen.insert(c.elements().to_vec(), ()).is_some() {
            continue;
        }
        out.push((pi, c));
    }
    Ok((out, examined))
}

/// `L_max(C)` and `L_min(C)` over all `π ∈ Sₙ`, each radius by brute force.
pub fn relabel_extrema(code: &GroupCode, config: &SolverConfig) -> Result<RelabelExtrema> {
    let n = code.degree();
    check_cap(n, config.extrema_cap, config)?;
    if code.is_empty() {
        return Err(Error::EmptyCode);
    }
    let (codes, examined) = relabelings(code, config.normalizer_quotient)?;
    let radii: Vec<usize> = config.run(|| codes.par_iter().map(|(_, c)| scan_code(c).0).collect());
    let mut hi = 0;
    let mut lo = 0;
    for (k, &r) in radii.iter().enumerate() {
        if r > radii[hi] {
            hi = k;
        }
        if r < radii[lo] {
            lo = k;
        }
    }
    Ok(RelabelExtrema {
        n,
        base: code.descriptor().to_string(),
        lmax: radii[hi],
        lmin: radii[lo],
        argmax: codes[hi].0.clone(),
        argmin: codes[lo].0.clone(),
        distinct_codes: codes.len(),
        conjugators_examined: examined,
    })
}

/// Exhaustive check that `L_min(G_{p,q}) ≥ L_min(G_p)`, by lifting a far
/// permutation for the restriction of each relabeled code to the image of the
/// first block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub p: usize,
    pub q: usize,
    pub lmin_p: usize,
    pub lmin_pq: usize,
    pub conjugators_checked: usize,
    /// Conjugators whose lifted permutation fell short of `lmin_p`.
    pub failures: Vec<Permutation>,
    pub holds: bool,
}

pub fn lmin_reduction_check(p: usize, q: usize, config: &SolverConfig) -> Result<ReductionCheck> {
    if p < 1 || q < 1 || q > p {
        return Err(Error::InvalidProfile(format!("need 1 <= q <= p, got p={p} q={q}")));
    }
    let n = p + q;
    check_cap(n, config.extrema_cap, config)?;
    let gp = make_cyclic(p)?;
    let gpq = make_product(&FactorProfile::new(vec![p, q])?);
    let lmin_p = relabel_extrema(&gp, config)?.lmin;
    let lmin_pq = relabel_extrema(&gpq, config)?.lmin;

    let mut far: HashMap<Permutation, Permutation> = HashMap::new();
    let mut failures = Vec::new();
    let perms = all_perms(n);
    for pi in &perms {
        let mut h: Vec<usize> = (1..=p).map(|i| pi.get(i)).collect();
        h.sort_unstable();
        let rank = |x: usize| h.binary_search(&x).expect("in H") + 1;
        let pi_bar = Permutation::new((1..=p).map(|i| rank(pi.get(i))).collect())?;
        let f_bar = match far.get(&pi_bar) {
            Some(f) => f.clone(),
            None => {
                let f = scan_code(&relabel(&gp, &pi_bar)?).1;
                far.insert(pi_bar.clone(), f.clone());
                f
            }
        };
        let mut placement = PartialPlacement::new(n);
        for i in 1..=p {
            placement.assign(pi.get(i), h[f_bar.get(pi_bar.get(i)) - 1])?;
        }
        let f0 = placement.complete();
        if distance_to_code(&f0, &relabel(&gpq, pi)?)? < lmin_p {
            failures.push(pi.clone());
        }
    }
    Ok(ReductionCheck {
        p,
        q,
        lmin_p,
        lmin_pq,
        conjugators_checked: perms.len(),
        holds: failures.is_empty() && lmin_pq >= lmin_p,
        failures,
    })
}
