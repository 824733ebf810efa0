//! Exact covering-radius computation.
//!
//! * [`radius_bruteforce`] scans all of `Sₙ`; it is the oracle for everything
//!   else and is capped at small degrees.
//! * [`radius_restricted`] works with the window sets `B = [n−r̃−1]` and
//!   `T = [r̃+2, n]`: two permutations that put the values of `B ∪ T` in the
//!   same positions are either both `r̃`-exposed with equal distance to the
//!   code, or both `r̃`-covered. So only placements of `B ∪ T` matter.
//! * [`radius_auto`] drives the restricted search from a known lower bound and
//!   retries downward when the guess was too high.
//! * [`relabel_extrema`] and [`lmin_reduction_check`] search over conjugators.
//!
//! The restricted search is not specific to dihedral codes; it only uses the
//! metric, so it accepts any enumerated code.

mod bruteforce;
mod extrema;
mod restricted;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{dn_bounds, r_product};
use crate::group::{CodeDescriptor, GroupCode};
use crate::perm::Permutation;

pub use bruteforce::radius_bruteforce;
pub use extrema::{lmin_reduction_check, relabel_extrema, ReductionCheck, RelabelExtrema};
pub use restricted::{exposed_at, radius_restricted, radius_restricted_exhaustive, ExposureHit};

/// Default degree cap for [`radius_bruteforce`].
pub const DEFAULT_BRUTEFORCE_CAP: usize = 9;
/// Default degree cap for [`relabel_extrema`].
pub const DEFAULT_EXTREMA_CAP: usize = 7;
/// Position sets are 64-bit masks.
pub const MAX_RESTRICTED_DEGREE: usize = 64;

/// Knobs shared by the solvers.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub bruteforce_cap: usize,
    pub extrema_cap: usize,
    /// Ignore the degree caps.
    pub cap_override: bool,
    /// Collapse conjugators that produce the same code (same coset of the
    /// normaliser) in [`relabel_extrema`].
    pub normalizer_quotient: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            threads: None,
            bruteforce_cap: DEFAULT_BRUTEFORCE_CAP,
            extrema_cap: DEFAULT_EXTREMA_CAP,
            cap_override: false,
            normalizer_quotient: true,
        }
    }
}

impl SolverConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub(crate) fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool")
                .install(job),
            None => job(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusStatus {
    ExactBruteforce,
    ExactRestricted,
    InvalidRestricted,
    BoundOnly,
}

/// One exposure query made by the restricted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelProbe {
    pub threshold: usize,
    pub exposed: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Permutations (brute force) or search nodes (restricted) examined.
    pub candidates: u64,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub probes: Vec<LevelProbe>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub value: usize,
    pub status: RadiusStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtilde: Option<usize>,
    pub witness: Option<Permutation>,
    pub stats: SolverStats,
}

impl RadiusResult {
    pub fn is_exact(&self) -> bool {
        matches!(
            self.status,
            RadiusStatus::ExactBruteforce | RadiusStatus::ExactRestricted
        )
    }
}

pub(crate) fn check_cap(n: usize, cap: usize, config: &SolverConfig) -> Result<()> {
    if n > cap && !config.cap_override {
        return Err(Error::DegreeCap { n, cap });
    }
    Ok(())
}

/// Smallest `r̃` with disjoint windows: `r̃ > (n−3)/2`.
pub fn min_admissible_rtilde(n: usize) -> usize {
    (n.saturating_sub(1)) / 2
}

/// Starting guess for [`radius_auto`]: a proven lower bound where one exists.
pub fn initial_rtilde(code: &GroupCode) -> usize {
    let n = code.degree();
    let generic = (n.saturating_sub(1)) / 2 + 1;
    match code.descriptor() {
        CodeDescriptor::Dihedral { n } => dn_bounds(*n).map(|b| b.lower).unwrap_or(generic),
        CodeDescriptor::Product { parts } if parts.len() >= 2 => {
            r_product(parts).unwrap_or(generic)
        }
        _ => generic,
    }
}

/// Exact radius: restricted search from the best known lower bound, retrying
/// with a smaller `r̃` whenever the search reports the guess invalid, and
/// falling back to brute force once the windows would overlap.
pub fn radius_auto(code: &GroupCode, config: &SolverConfig) -> Result<RadiusResult> {
    let start = Instant::now();
    let n = code.degree();
    if code.is_empty() {
        return Err(Error::EmptyCode);
    }
    let mut rtilde = initial_rtilde(code).min(n.saturating_sub(2));
    let mut probes = Vec::new();
    let mut candidates = 0;
    loop {
        if n < 3 || rtilde < min_admissible_rtilde(n) || n > MAX_RESTRICTED_DEGREE {
            let mut res = radius_bruteforce(code, config)?;
            res.stats.candidates += candidates;
            probes.append(&mut res.stats.probes);
            res.stats.probes = probes;
            res.stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            return Ok(res);
        }
        let mut res = radius_restricted(code, rtilde, config)?;
        candidates += res.stats.candidates;
        probes.append(&mut res.stats.probes);
        if res.status == RadiusStatus::ExactRestricted {
            res.stats.candidates = candidates;
            res.stats.probes = probes;
            res.stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            return Ok(res);
        }
        // exposure is monotone in r, so any smaller r̃ is still sound
        rtilde = (rtilde - 1).min(res.value);
    }
}
