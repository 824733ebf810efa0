use std::time::Instant;

use rayon::prelude::*;

use super::{check_cap, RadiusResult, RadiusStatus, SolverConfig, SolverStats};
use crate::error::{Error, Result};
use crate::group::{next_permutation, GroupCode};
use crate::perm::Permutation;

/// Best `(distance, permutation)` within one shard of `Sₙ` (all permutations
/// with a fixed first image), in lexicographic order.
fn scan_shard(n: usize, first: u8, code: &[u8]) -> (usize, Vec<u8>, u64) {
    let m = code.len() / n;
    let mut f: Vec<u8> = std::iter::once(first)
        .chain((1..=n as u8).filter(|&v| v != first))
        .collect();
    let mut best = 0usize;
    let mut best_f = f.clone();
    let mut seen = false;
    let mut count = 0u64;
    loop {
        count += 1;
        // f beats `best` iff every codeword differs from it by more than `best`
        let beats = !seen
            || (0..m).all(|g| {
                let row = &code[g * n..(g + 1) * n];
                f.iter().zip(row).any(|(a, b)| a.abs_diff(*b) as usize > best)
            });
        if beats {
            best = (0..m)
                .map(|g| {
                    let row = &code[g * n..(g + 1) * n];
                    f.iter().zip(row).map(|(a, b)| a.abs_diff(*b) as usize).max().unwrap_or(0)
                })
                .min()
                .unwrap_or(0);
            best_f.copy_from_slice(&f);
            seen = true;
        }
        if !next_permutation(&mut f[1..]) {
            break;
        }
    }
    (best, best_f, count)
}

/// Sequential scan of all of `Sₙ`: `(value, witness, candidates)`.
pub(crate) fn scan_code(code: &GroupCode) -> (usize, Permutation, u64) {
    let n = code.degree();
    let flat = flatten(code);
    let mut out: Option<(usize, Vec<u8>, u64)> = None;
    let mut total = 0;
    for first in 1..=n as u8 {
        let shard = scan_shard(n, first, &flat);
        total += shard.2;
        if out.as_ref().is_none_or(|o| shard.0 > o.0) {
            out = Some(shard);
        }
    }
    let (v, f, _) = out.expect("n >= 1");
    (v, Permutation::from_raw(f.iter().map(|&x| x as u32).collect()), total)
}

fn flatten(code: &GroupCode) -> Vec<u8> {
    code.elements()
        .iter()
        .flat_map(|g| g.as_slice().iter().map(|&x| x as u8))
        .collect()
}

/// `r(C) = max_f d(f, C)` by scanning all of `Sₙ`. The witness is the
/// lexicographically smallest maximiser.
pub fn radius_bruteforce(code: &GroupCode, config: &SolverConfig) -> Result<RadiusResult> {
    let start = Instant::now();
    let n = code.degree();
    check_cap(n, config.bruteforce_cap, config)?;
    if code.is_empty() {
        return Err(Error::EmptyCode);
    }
    if n > u8::MAX as usize {
        return Err(Error::DegreeCap { n, cap: u8::MAX as usize });
    }
    let flat = flatten(code);
    let shards: Vec<(usize, Vec<u8>, u64)> = config.run(|| {
        (1..=n as u8)
            .into_par_iter()
            .map(|first| scan_shard(n, first, &flat))
            .collect()
    });
    let mut value = 0;
    let mut witness: Option<&Vec<u8>> = None;
    for (v, f, _) in &shards {
        if witness.is_none() || *v > value {
            value = *v;
            witness = Some(f);
        }
    }
    let witness = witness.map(|f| Permutation::from_raw(f.iter().map(|&x| x as u32).collect()));
    Ok(RadiusResult {
        value,
        status: RadiusStatus::ExactBruteforce,
        rtilde: None,
        witness,
        stats: SolverStats {
            candidates: shards.iter().map(|s| s.2).sum(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            probes: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, make_dihedral, make_symmetric};
    use crate::perm::distance_to_code;

    #[test]
    fn small_cyclic_values() {
        let cfg = SolverConfig::default();
        let got: Vec<usize> = (1..=7)
            .map(|n| radius_bruteforce(&make_cyclic(n).unwrap(), &cfg).unwrap().value)
            .collect();
        assert_eq!(got, vec![0, 0, 1, 2, 3, 3, 4]);
    }

    #[test]
    fn witness_is_first_maximiser() {
        let code = make_dihedral(5).unwrap();
        let res = radius_bruteforce(&code, &SolverConfig::default()).unwrap();
        let w = res.witness.unwrap();
        assert_eq!(distance_to_code(&w, &code).unwrap(), res.value);
        let mut v: Vec<usize> = (1..=5).collect();
        loop {
            let f = Permutation::new(v.clone()).unwrap();
            if f == w {
                break;
            }
            assert!(distance_to_code(&f, &code).unwrap() < res.value);
            if !next_permutation(&mut v) {
                panic!("witness not reached");
            }
        }
    }

    #[test]
    fn symmetric_group_has_radius_zero() {
        let res = radius_bruteforce(&make_symmetric(4).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(res.value, 0);
        assert_eq!(res.witness.unwrap(), Permutation::identity(4));
    }

    #[test]
    fn cap_is_enforced() {
        let code = make_cyclic(10).unwrap();
        assert!(matches!(
            radius_bruteforce(&code, &SolverConfig::default()),
            Err(Error::DegreeCap { n: 10, cap: 9 })
        ));
    }
}
