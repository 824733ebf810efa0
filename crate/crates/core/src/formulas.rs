//! Closed-form covering radii and bounds.
//!
//! Every floor or ceiling of a square-root expression is evaluated as an
//! integer predicate (for example `⌈(√(4q+1)−1)/2⌉` is the least `k` with
//! `k² + k ≥ q`), so boundary cases such as `q = k(k+1)` are exact. The only
//! floating-point formula is [`lmin_cyclic_lower`], which contains a logarithm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FactorProfile;

/// `⌊√x⌋`.
#[inline]
pub fn isqrt(x: u64) -> u64 {
    x.isqrt()
}

#[inline]
fn binom2(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

/// Largest `k ≥ 1` with `k(k−1) ≤ n`; equals `⌊(√(4n+1)+1)/2⌋`.
pub fn largest_pronic_index(n: u64) -> u64 {
    let mut k = isqrt(4 * n + 1).div_ceil(2);
    debug_assert!(k * (k - 1) <= n && (k + 1) * k > n);
    // the closed form is exact; the loops only guard the invariant
    while k * (k - 1) > n {
        k -= 1;
    }
    while (k + 1) * k <= n {
        k += 1;
    }
    k
}

/// Least `k ≥ 0` with `k(k+1) ≥ q`; equals `⌈(√(4q+1)−1)/2⌉`.
pub fn least_pronic_cover(q: u64) -> u64 {
    let mut k = isqrt(4 * q + 1).saturating_sub(1) / 2;
    while k * (k + 1) < q {
        k += 1;
    }
    while k > 0 && (k - 1) * k >= q {
        k -= 1;
    }
    k
}

/// Largest `k ≥ 1` with `k(k−1)/2 < q` (`q ≥ 1`); equals `⌈√(2q+1/4) − 1/2⌉`.
pub fn largest_sub_triangular(q: u64) -> u64 {
    debug_assert!(q >= 1);
    // k(k-1) < 2q  <=>  k(k-1) <= 2q-1
    largest_pronic_index(2 * q - 1)
}

/// Least `k` with `k(k−1) ≥ m`; equals `⌈(√(4m+1)+1)/2⌉`.
pub fn least_pronic_index_at_least(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    // k(k-1) >= m  <=>  not ((k)(k-1) <= m-1)
    largest_pronic_index(m - 1) + 1
}

/// `r(Gₙ) = n − ⌊(√(4n+1)+1)/2⌋`.
pub fn r_cyclic(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { what: "r_cyclic", n, min: 1 });
    }
    Ok(n - largest_pronic_index(n as u64) as usize)
}

/// `L_max(Gₙ) = n − ⌈(√(4n+1)−1)/2⌉`.
pub fn lmax_cyclic(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { what: "lmax_cyclic", n, min: 1 });
    }
    Ok(n - least_pronic_cover(n as u64) as usize)
}

fn check_pq(p: usize, q: usize) -> Result<()> {
    if q < 1 || p < q {
        return Err(Error::InvalidParameter(format!(
            "need p >= q >= 1, got p={p}, q={q}"
        )));
    }
    Ok(())
}

/// `r(G_{p,q}) = p + ⌊(√(q+1/8) − √2/2)² − 1/8⌋`, evaluated as
/// `p + q − max{k : k(k−1)/2 < q}`.
pub fn r_pq(p: usize, q: usize) -> Result<usize> {
    check_pq(p, q)?;
    Ok(p + q - largest_sub_triangular(q as u64) as usize)
}

/// `L_max(G_{p,q})`: `p` for `q ≤ 2`, else `p + q − ⌈(√(4q+1)−1)/2⌉`.
pub fn lmax_pq(p: usize, q: usize) -> Result<usize> {
    check_pq(p, q)?;
    if q <= 2 {
        Ok(p)
    } else {
        Ok(p + q - least_pronic_cover(q as u64) as usize)
    }
}

/// `r(G_{p₁,…,p_k}) = n − p_k + ⌊(√(p_k+1/8) − √2/2)² − 1/8⌋` for `k ≥ 2`.
///
/// A single-factor profile is rejected: the expression does not reduce to
/// `r(G_n)` there and no value is asserted for it.
pub fn r_product(profile: &FactorProfile) -> Result<usize> {
    if profile.len() < 2 {
        return Err(Error::InvalidProfile(
            "r_product needs at least two factors".into(),
        ));
    }
    let n = profile.degree();
    Ok(n - largest_sub_triangular(profile.smallest() as u64) as usize)
}

/// `L_max(G_{p₁,…,p_k})`: `n − ⌈(√(4p_k+1)−1)/2⌉` if `p_k ≥ 3`, else `n − p_k`.
pub fn lmax_product(profile: &FactorProfile) -> Result<usize> {
    let n = profile.degree();
    let pk = profile.smallest();
    if pk >= 3 {
        Ok(n - least_pronic_cover(pk as u64) as usize)
    } else {
        Ok(n - pk)
    }
}

/// Interval for `r(Dₙ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsInterval {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    /// Set when the lower end was raised to 0 from a negative value.
    pub clamped: bool,
}

impl BoundsInterval {
    pub fn width(&self) -> usize {
        self.upper - self.lower
    }

    pub fn contains(&self, v: usize) -> bool {
        (self.lower..=self.upper).contains(&v)
    }

    /// `'e'` when `v` meets both ends, `'u'` / `'l'` for one end, `None` when
    /// `v` lies outside the interval.
    pub fn annotate(&self, v: usize) -> Option<char> {
        match (v == self.lower, v == self.upper) {
            (true, true) => Some('e'),
            (false, true) => Some('u'),
            (true, false) => Some('l'),
            _ => None,
        }
    }
}

/// `n − ⌊(√(4n+1)+1)/2⌋ − 1 ≤ r(Dₙ) ≤ n − ⌊(√(4n+1)+1)/2⌋`, collapsing to
/// the exact value `n − m` when `n = m(m−1)`.
pub fn dn_bounds(n: usize) -> Result<BoundsInterval> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { what: "dn_bounds", n, min: 3 });
    }
    let m = largest_pronic_index(n as u64) as usize;
    let upper = n - m;
    if m * (m - 1) == n {
        return Ok(BoundsInterval {
            lower: upper,
            upper,
            exact: Some(n - m),
            clamped: false,
        });
    }
    Ok(BoundsInterval {
        lower: upper.saturating_sub(1),
        upper,
        exact: None,
        clamped: upper == 0,
    })
}

/// `r(Dₙ) ≥ n − ⌈(√(4n+13)+1)/2⌉` for `n ≥ 10`.
pub fn dn_weak_lower(n: usize) -> Result<usize> {
    if n < 10 {
        return Err(Error::DegreeTooSmall { what: "dn_weak_lower", n, min: 10 });
    }
    Ok(n - dn_weak_k(n))
}

/// `k = ⌈(√(4n+13)+1)/2⌉`, the least `k` with `k(k−1) ≥ n + 3`.
pub fn dn_weak_k(n: usize) -> usize {
    least_pronic_index_at_least(n as u64 + 3) as usize
}

/// `C(t, 2)`.
pub fn d(t: usize) -> usize {
    binom2(t as u64) as usize
}

/// A lower bound that may have been clamped to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClampedBound {
    pub value: usize,
    pub raw: i64,
    pub clamped: bool,
}

/// `L_min(Gₙ) ≥ n − ⌈√(2n ln n + 2n)⌉`, clamped at 0.
///
/// Fails with [`Error::FloatBoundary`] if the ceiling changes under a one-ulp
/// perturbation of the square root.
pub fn lmin_cyclic_lower(n: usize) -> Result<ClampedBound> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { what: "lmin_cyclic_lower", n, min: 2 });
    }
    let x = n as f64;
    let s = (2.0 * x * x.ln() + 2.0 * x).sqrt();
    let c = s.ceil();
    if s.next_up().ceil() != c || s.next_down().ceil() != c {
        return Err(Error::FloatBoundary { n });
    }
    let raw = n as i64 - c as i64;
    Ok(ClampedBound {
        value: raw.max(0) as usize,
        raw,
        clamped: raw < 0,
    })
}

/// `L_min(G_{p,q}) ≥ L_min(G_p) ≥ p − ⌈√(2p ln p + 2p)⌉`.
pub fn lmin_pq_lower(p: usize, q: usize) -> Result<ClampedBound> {
    check_pq(p, q)?;
    lmin_cyclic_lower(p)
}
