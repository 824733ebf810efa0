//! Explicit exposed permutations certifying lower bounds on covering radii.
//!
//! Each builder fixes the values of a permutation on a few selected positions
//! (a [`PartialPlacement`]) using a triangular-number schedule `λ`, fills the
//! remaining positions with the deterministic completion rule, and verifies
//! exposure by scanning every codeword. Exposure is carried by the placed
//! positions alone, so any completion works; [`WitnessBundle::recomplete`]
//! re-checks that with random completions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{d, dn_weak_k, dn_weak_lower, least_pronic_cover, least_pronic_index_at_least, lmax_pq, r_pq};
use crate::group::{mod_star, CodeDescriptor, GroupCode};
use crate::perm::{chebyshev, PartialPlacement, Permutation};

/// One entry `λ(i)` of a location schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub i: usize,
    pub lambda: usize,
}

/// Construction parameters recorded alongside a witness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaTrace {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// The cut-off index `I`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<usize>,
    pub lambda: Vec<LambdaEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_prime: Option<usize>,
    /// Which repair rule produced `λ′` (1: no collision, 2: shifted by one).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair_case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl LambdaTrace {
    pub fn get(&self, i: usize) -> Option<usize> {
        self.lambda.iter().find(|e| e.i == i).map(|e| e.lambda)
    }
}

/// A witness permutation together with the code it is exposed by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub family: String,
    pub code: CodeDescriptor,
    pub r0: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Permutation>,
    pub placement: PartialPlacement,
    pub completed: Permutation,
    pub trace: LambdaTrace,
    pub verified: bool,
}

/// Outcome of checking `d(completed, g) > r0` for every codeword `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verified: bool,
    pub code_size: usize,
    pub entries: Vec<ExposureEntry>,
}

/// For one codeword: the first position where it is exposed, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExposureEntry {
    pub element: Permutation,
    pub position: Option<usize>,
    pub distance: usize,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ExposureEntry> {
        self.entries.iter().filter(|e| e.position.is_none())
    }
}

/// Checks the bundle against its code by direct distance scan.
pub fn verify_witness(bundle: &WitnessBundle) -> Result<VerificationReport> {
    let code = GroupCode::build(&bundle.code)?;
    let n = code.degree();
    if bundle.completed.degree() != n || bundle.placement.degree() != n {
        return Err(Error::MalformedBundle(format!(
            "degrees differ: code {n}, completed {}, placement {}",
            bundle.completed.degree(),
            bundle.placement.degree()
        )));
    }
    if !bundle.placement.is_extended_by(&bundle.completed) {
        return Err(Error::MalformedBundle(
            "completed permutation does not extend the placement".into(),
        ));
    }
    match (&bundle.conjugator, &bundle.code) {
        (None, _) => {}
        (Some(pi), CodeDescriptor::Relabeled { pi: code_pi, .. }) if pi == code_pi => {}
        _ => {
            return Err(Error::MalformedBundle(
                "conjugator does not match the code descriptor".into(),
            ))
        }
    }
    Ok(scan(&bundle.completed, &code, bundle.r0))
}

fn scan(f: &Permutation, code: &GroupCode, r0: usize) -> VerificationReport {
    let entries: Vec<ExposureEntry> = code
        .elements()
        .iter()
        .map(|g| ExposureEntry {
            element: g.clone(),
            position: f
                .as_slice()
                .iter()
                .zip(g.as_slice())
                .position(|(&a, &b)| a.abs_diff(b) as usize > r0)
                .map(|i| i + 1),
            distance: chebyshev(f.as_slice(), g.as_slice()) as usize,
        })
        .collect();
    VerificationReport {
        verified: entries.iter().all(|e| e.position.is_some()),
        code_size: code.len(),
        entries,
    }
}

impl WitnessBundle {
    /// Same placement, remaining positions filled at random; `verified` is
    /// recomputed.
    pub fn recomplete<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<WitnessBundle> {
        let mut out = self.clone();
        out.completed = self.placement.complete_random(rng);
        out.verified = verify_witness(&out)?.verified;
        Ok(out)
    }
}

fn finish(
    family: &str,
    code: CodeDescriptor,
    r0: usize,
    conjugator: Option<Permutation>,
    placement: PartialPlacement,
    trace: LambdaTrace,
) -> Result<WitnessBundle> {
    let completed = placement.complete();
    let mut bundle = WitnessBundle {
        family: family.to_string(),
        code,
        r0,
        conjugator,
        placement,
        completed,
        trace,
        verified: false,
    };
    let report = verify_witness(&bundle)?;
    if !report.verified {
        let first = report.failures().next().unwrap();
        return Err(Error::VerificationFailed(format!(
            "{} witness for {} at r0={}: codeword {} is within distance {} of {}",
            family, bundle.code, r0, first.element, first.distance, bundle.completed
        )));
    }
    bundle.verified = true;
    Ok(bundle)
}

fn place(pl: &mut PartialPlacement, position: usize, value: usize) -> Result<()> {
    pl.assign(position, value).map_err(|e| {
        Error::VerificationFailed(format!("location schedule is not injective: {e}"))
    })
}

/// Witness that `r(G_{p,q}) > r_pq(p,q) − 1`.
///
/// For `q ≥ 3`, with `k = p+q−r0`, the schedule is `λ(1) = q`,
/// `λ(i) = k(i−1) − C(i,2)` on `[2,k]`; `I` is the last `i` with `λ(i) < q` and
/// the witness maps `p+λ(i) ↦ i` for `i ∈ [I]`. For `q ≤ 2` any `f` with
/// `f(1) = p+q`, `f(p+q) = 1` is `(p−1)`-exposed.
pub fn witness_pq(p: usize, q: usize) -> Result<WitnessBundle> {
    let r = r_pq(p, q)?;
    let n = p + q;
    let code = CodeDescriptor::product(&[p, q])?;
    let mut pl = PartialPlacement::new(n);
    if q < 3 {
        place(&mut pl, 1, n)?;
        if n > 1 {
            place(&mut pl, n, 1)?;
        }
        return finish("pq-trivial", code, p - 1, None, pl, LambdaTrace::default());
    }
    let r0 = r - 1;
    let k = n - r0;
    let lambda = |i: usize| if i == 1 { q } else { k * (i - 1) - d(i) };
    let cut = (2..=k).filter(|&i| lambda(i) < q).max().unwrap();
    let mut trace = LambdaTrace {
        k: Some(k),
        cut: Some(cut),
        ..Default::default()
    };
    for i in 1..=k {
        trace.lambda.push(LambdaEntry { i, lambda: lambda(i) });
    }
    for i in 1..=cut {
        place(&mut pl, p + lambda(i), i)?;
    }
    finish("pq", code, r0, None, pl, trace)
}

/// Witness pair `(π, f₀)` showing `L_max(G_{p,q}) > lmax_pq(p,q) − 1`, `q ≥ 3`.
pub fn witness_lmax(p: usize, q: usize) -> Result<WitnessBundle> {
    if q < 3 || p < q {
        return Err(Error::InvalidParameter(format!(
            "witness_lmax needs p >= q >= 3, got p={p}, q={q}"
        )));
    }
    let n = p + q;
    let r0 = lmax_pq(p, q)? - 1;
    let mut pi = PartialPlacement::new(n);
    let mut f0 = PartialPlacement::new(n);
    let mut trace = LambdaTrace::default();

    if q <= 5 {
        trace.variant = Some(format!("q={q}"));
        place(&mut pi, p + 1, 1)?;
        place(&mut pi, p + 2, 2)?;
        for i in 3..=q {
            place(&mut pi, p + i, p + i)?;
        }
        let pairs: &[(usize, usize)] = match q {
            3 => &[(1, p + 3), (2, p + 2)],
            4 => &[(1, 1), (2, p + 4), (p + 3, 2)],
            _ => &[(1, 1), (2, p + 5), (p + 3, 2), (p + 5, p + 4)],
        };
        for &(pos, val) in pairs {
            place(&mut f0, pos, val)?;
        }
    } else {
        let k = least_pronic_cover(q as u64) as usize;
        trace.k = Some(k);
        if q == k * (k + 1) {
            trace.variant = Some("q=k(k+1)".into());
            place(&mut pi, p + 1, 2)?;
            place(&mut pi, p + 2, 1)?;
            for i in p + 3..=p + k {
                place(&mut pi, i, i - p)?;
            }
            for i in p + k + 1..=n {
                place(&mut pi, i, i)?;
            }
            let in_r = |i: usize| (1..=k).contains(&i) || (p + k + 1..=n).contains(&i);
            place(&mut f0, 1, 1)?;
            place(&mut f0, 2, n)?;
            let three = (1..=n)
                .find(|&i| in_r(i) && i % p == 3 % p)
                .expect("R meets every residue class at most once");
            place(&mut f0, three, n + 1 - k)?;
            for l in 0..=k - 2 {
                let i = d(l + 1) + p + 2 + k;
                debug_assert!(in_r(i));
                trace.lambda.push(LambdaEntry { i: k - l, lambda: i });
                place(&mut f0, i, k - l)?;
            }
            for l in 1..=k - 2 {
                let i = n - k + 2 - d(l + 1);
                debug_assert!(in_r(i));
                trace.lambda.push(LambdaEntry { i: n - k + 1 + l, lambda: i });
                place(&mut f0, i, n - k + 1 + l)?;
            }
        } else {
            trace.variant = Some("q!=k(k+1)".into());
            for i in p + 1..=p + k {
                place(&mut pi, i, i - p)?;
            }
            for i in p + k + 1..=n {
                place(&mut pi, i, i)?;
            }
            let pi_of = |x: usize| if x <= p + k { x - p } else { x };
            let cut = (1..=k)
                .find(|&l| k * k + k - 1 - d(l + 1) < q)
                .expect("I <= k");
            trace.cut = Some(cut);
            for l in 1..=k {
                let i = pi_of(p + d(l + 1));
                trace.lambda.push(LambdaEntry { i: n - k + l, lambda: i });
                place(&mut f0, i, n - k + l)?;
            }
            for l in cut..=k {
                let i = pi_of(p + k * k + k - 1 - d(l + 1));
                trace.lambda.push(LambdaEntry { i: k - l + 1, lambda: i });
                place(&mut f0, i, k - l + 1)?;
            }
        }
    }
    let pi = pi.complete();
    let code = CodeDescriptor::relabeled(CodeDescriptor::product(&[p, q])?, pi.clone());
    finish("lmax", code, r0, Some(pi), f0, trace)
}

/// Witness that `r(Dₙ) ≥ n − ⌈(√(4n+13)+1)/2⌉`, `n ≥ 10`.
///
/// `k` is the least integer with `k(k−1) ≥ n+3`, `d_t = C(t,2)`, and
/// `λ(i) = d_k − d_{k−i+1} + 1` on `[k−1]`, `λ(i) = d_k + d_{i−n+k} − 2` on
/// `[n−k+2, n]`. `I` is the last `i` of the second range with `λ(i) ≤ n`; the
/// value `I+1` goes to `λ′ = λ(I+1) ⊡ n`, shifted up by one if that location is
/// already taken.
pub fn witness_dn(n: usize) -> Result<WitnessBundle> {
    let r0 = dn_weak_lower(n)? - 1;
    let k = dn_weak_k(n);
    debug_assert_eq!(k, n - r0 - 1);
    let dk = d(k);
    let lambda = |i: usize| {
        if i < k {
            dk - d(k - i + 1) + 1
        } else {
            dk + d(i + k - n) - 2
        }
    };
    let low: Vec<usize> = (1..k).collect();
    let high: Vec<usize> = (n - k + 2..=n).collect();
    let cut = *high.iter().filter(|&&i| lambda(i) <= n).max().unwrap();
    debug_assert!(cut < n);

    let mut trace = LambdaTrace {
        k: Some(k),
        cut: Some(cut),
        ..Default::default()
    };
    for &i in low.iter().chain(&high) {
        trace.lambda.push(LambdaEntry { i, lambda: lambda(i) });
    }

    let mut pl = PartialPlacement::new(n);
    for &i in low.iter().chain(high.iter().filter(|&&i| i <= cut)) {
        place(&mut pl, lambda(i), i)?;
    }
    let next = lambda(cut + 1);
    let wrapped = mod_star(next as i64, n);
    let (lambda_prime, case) = if pl.get(wrapped).is_none() {
        (wrapped, 1)
    } else {
        (mod_star(next as i64 + 1, n), 2)
    };
    trace.lambda_prime = Some(lambda_prime);
    trace.repair_case = Some(case);
    place(&mut pl, lambda_prime, cut + 1)?;
    finish("dn", CodeDescriptor::dihedral(n), r0, None, pl, trace)
}

/// Witness that `r(Dₙ) ≥ n − m` for `n ∈ {m(m−1)−2, m(m−1)−1, m(m−1)}`,
/// `m > 5`. Smaller `m` are covered by exact search and rejected here.
pub fn witness_dn_refined(n: usize) -> Result<WitnessBundle> {
    let m = least_pronic_index_at_least(n as u64) as usize;
    let offset = m * m.saturating_sub(1) - n;
    if m < 2 || offset > 2 {
        return Err(Error::NotRefinedForm { n });
    }
    if m <= 5 {
        return Err(Error::RefinedFallback { n, m });
    }
    let dm = d(m);
    let mut entries: Vec<(usize, usize)> = vec![(1, n - 1)];
    let variant = match offset {
        2 => {
            for i in 2..m {
                entries.push((i, dm - d(m - i + 1) + 1));
            }
            entries.push((m, dm - d(m - 1)));
            for i in n - m + 2..=n {
                entries.push((i, dm + d(i + m - n) - 2));
            }
            "n=m(m-1)-2"
        }
        _ => {
            for i in 2..=m - 2 {
                entries.push((i, dm - d(m - i + 1)));
            }
            entries.push((m - 1, dm - d(2) + 1));
            entries.push((m, dm - d(3) + 1));
            entries.push((n - m + 1, dm + d(3) - 2));
            entries.push((n - m + 2, dm + d(2) - 2));
            if offset == 1 {
                for i in n - m + 3..=n {
                    entries.push((i, dm + d(i + m - n) - 1));
                }
                "n=m(m-1)-1"
            } else {
                for i in n - m + 3..=n - 2 {
                    entries.push((i, dm + d(i + m - n) - 1));
                }
                entries.push((n - 1, dm + d(m - 1)));
                entries.push((n, n));
                "n=m(m-1)"
            }
        }
    };
    let mut trace = LambdaTrace {
        m: Some(m),
        variant: Some(variant.into()),
        ..Default::default()
    };
    let mut pl = PartialPlacement::new(n);
    for &(i, lambda) in &entries {
        trace.lambda.push(LambdaEntry { i, lambda });
        place(&mut pl, lambda, i)?;
    }
    finish("dn-refined", CodeDescriptor::dihedral(n), n - m - 1, None, pl, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_5_3() {
        let b = witness_pq(5, 3).unwrap();
        assert!(b.verified);
        assert_eq!(b.r0, r_pq(5, 3).unwrap() - 1);
        assert_eq!(b.placement.get(8), Some(1));
        assert_eq!(b.placement.get(7), Some(2));
    }

    #[test]
    fn pq_trivial_branch() {
        for (p, q) in [(4, 1), (4, 2), (1, 1), (2, 2)] {
            let b = witness_pq(p, q).unwrap();
            assert_eq!(b.family, "pq-trivial");
            assert_eq!(b.r0, p - 1);
            assert_eq!(b.completed.get(1), p + q);
            assert_eq!(b.completed.get(p + q), 1);
        }
    }

    #[test]
    fn pq_lambda_trace() {
        let b = witness_pq(8, 6).unwrap();
        let k = b.trace.k.unwrap();
        assert_eq!(b.trace.get(2), Some(k - 1));
        for i in 2..k {
            assert!(b.trace.get(i + 1).unwrap() > b.trace.get(i).unwrap());
        }
    }

    #[test]
    fn lmax_small_q_constraints() {
        let b = witness_lmax(7, 3).unwrap();
        let pi = b.conjugator.clone().unwrap();
        assert_eq!((pi.get(8), pi.get(9), pi.get(10)), (1, 2, 10));
        assert_eq!(b.completed.get(1), 10);
        assert_eq!(b.completed.get(2), 9);

        let b = witness_lmax(8, 6).unwrap();
        let p = 8;
        assert_eq!(b.completed.get(1), 1);
        assert_eq!(b.completed.get(2), p + 6);
        assert_eq!(b.completed.get(p + 3), p + 5);
        assert_eq!(b.completed.get(p + 4), 2);
        assert!(witness_lmax(7, 7).unwrap().verified);
        assert!(witness_lmax(5, 2).is_err());
    }

    #[test]
    fn dn_examples() {
        let b = witness_dn(12).unwrap();
        assert!(b.verified);
        assert_eq!(b.r0, 6);
        let b = witness_dn(10).unwrap();
        assert_eq!(b.trace.k, Some(5));
        assert_eq!(b.trace.get(1), Some(1));
        let b = witness_dn(30).unwrap();
        let k = b.trace.k.unwrap();
        let dk = d(k);
        assert_eq!(b.trace.get(k - 1), Some(dk));
        assert!(dk <= 30);
        assert_eq!(b.trace.get(30), Some(2 * dk - 2));
        assert!(2 * dk - 2 >= 31);
        assert!(witness_dn(9).is_err());
    }

    #[test]
    fn refined_examples() {
        assert!(witness_dn_refined(30).unwrap().verified);
        assert!(witness_dn_refined(29).unwrap().verified);
        assert!(witness_dn_refined(28).unwrap().verified);
        assert!(matches!(
            witness_dn_refined(20),
            Err(Error::RefinedFallback { m: 5, .. })
        ));
        assert!(matches!(witness_dn_refined(31), Err(Error::NotRefinedForm { .. })));
    }

    #[test]
    fn verify_rejects_tampering() {
        let b = witness_dn(12).unwrap();
        let mut big = b.clone();
        big.r0 += 20;
        assert!(!verify_witness(&big).unwrap().verified);

        let code = GroupCode::build(&b.code).unwrap();
        let mut member = b.clone();
        member.completed = code.elements()[3].clone();
        member.placement = PartialPlacement::new(12);
        member.r0 = 0;
        assert!(!verify_witness(&member).unwrap().verified);

        let mut broken = b.clone();
        broken.completed = Permutation::identity(12);
        assert!(matches!(verify_witness(&broken), Err(Error::MalformedBundle(_))));
    }
}
