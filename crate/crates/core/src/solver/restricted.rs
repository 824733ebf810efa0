use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{check_cap, LevelProbe, RadiusResult, RadiusStatus, SolverConfig, SolverStats, MAX_RESTRICTED_DEGREE};
use crate::error::{Error, Result};
use crate::exposure::window_sets;
use crate::group::{next_permutation, GroupCode};
use crate::perm::{chebyshev, distance_to_code, PartialPlacement, Permutation};

/// A permutation found `threshold`-exposed, with its exact distance to the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureHit {
    pub witness: Permutation,
    pub distance: usize,
}

/// Precomputed exposure tables for one code and threshold `s`.
///
/// Values are the members of `B ∪ T` at radius `s`, indexed `a`; positions are
/// 0-based bit indices; codewords are bit indices into `words`-long masks.
struct ExposureProblem {
    n: usize,
    values: Vec<usize>,
    words: usize,
    /// `[(a * n + i) * words + w]`: codewords exposed when value `a` sits at `i`.
    elem_masks: Vec<u64>,
    /// `[g * nv + a]`: positions where value `a` exposes codeword `g`.
    pos_masks: Vec<u64>,
    full: Vec<u64>,
}

impl ExposureProblem {
    fn new(code: &GroupCode, s: usize) -> Self {
        let n = code.degree();
        let values: Vec<usize> = (1..=n).filter(|&v| v + s < n || v >= s + 2).collect();
        let nv = values.len();
        let m = code.len();
        let words = m.div_ceil(64).max(1);
        let mut elem_masks = vec![0u64; nv * n * words];
        let mut pos_masks = vec![0u64; m * nv];
        for (e, g) in code.elements().iter().enumerate() {
            for (i, &x) in g.as_slice().iter().enumerate() {
                for (a, &v) in values.iter().enumerate() {
                    if (v as u32).abs_diff(x) as usize > s {
                        elem_masks[(a * n + i) * words + e / 64] |= 1 << (e % 64);
                        pos_masks[e * nv + a] |= 1 << i;
                    }
                }
            }
        }
        let mut full = vec![0u64; words];
        for e in 0..m {
            full[e / 64] |= 1 << (e % 64);
        }
        Self {
            n,
            values,
            words,
            elem_masks,
            pos_masks,
            full,
        }
    }

    fn frame_len(&self) -> usize {
        self.words + self.values.len()
    }

    fn root(&self) -> Task {
        let all_positions = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut frame = self.full.clone();
        frame.extend(std::iter::repeat_n(all_positions, self.values.len()));
        Task {
            frame,
            free_values: if self.values.len() == 64 {
                u64::MAX
            } else {
                (1u64 << self.values.len()) - 1
            },
            placed: Vec::new(),
        }
    }

    /// Child of `parent` with value index `a` at 0-based position `i`.
    fn place_into(&self, parent: &[u64], child: &mut [u64], a: usize, i: usize) {
        let w = self.words;
        let em = &self.elem_masks[(a * self.n + i) * w..][..w];
        for k in 0..w {
            child[k] = parent[k] & !em[k];
        }
        let clear = !(1u64 << i);
        for b in 0..self.values.len() {
            child[w + b] = parent[w + b] & clear;
        }
        child[w + a] = 0;
    }

    fn place(&self, task: &Task, a: usize, i: usize) -> Task {
        let mut frame = vec![0u64; task.frame.len()];
        self.place_into(&task.frame, &mut frame, a, i);
        let mut placed = task.placed.clone();
        placed.push((i + 1, self.values[a]));
        Task {
            frame,
            free_values: task.free_values & !(1 << a),
            placed,
        }
    }
}

#[derive(Clone)]
struct Task {
    frame: Vec<u64>,
    free_values: u64,
    placed: Vec<(usize, usize)>,
}

#[inline]
fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(b)
        }
    })
}

enum NodeCheck {
    Solved,
    Dead,
    Branch(usize),
}

/// Depth-first search for a placement of window values that exposes every
/// codeword. Branches on how the most constrained uncovered codeword gets
/// exposed; a pair that has been fully explored is forbidden in later
/// siblings, so each placement set is visited once.
struct Searcher<'a> {
    prob: &'a ExposureProblem,
    stack: Vec<u64>,
    free_values: Vec<u64>,
    placed: Vec<(usize, usize)>,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(prob: &'a ExposureProblem, task: &Task) -> Self {
        let fl = prob.frame_len();
        let depth = prob.values.len() + 2;
        let mut stack = vec![0u64; fl * depth];
        stack[..fl].copy_from_slice(&task.frame);
        let mut free_values = vec![0u64; depth];
        free_values[0] = task.free_values;
        Self {
            prob,
            stack,
            free_values,
            placed: task.placed.clone(),
            nodes: 0,
        }
    }

    fn check(prob: &ExposureProblem, frame: &[u64], fv: u64) -> NodeCheck {
        let w = prob.words;
        let nv = prob.values.len();
        let uncovered = &frame[..w];
        let remaining: u32 = uncovered.iter().map(|x| x.count_ones()).sum();
        if remaining == 0 {
            return NodeCheck::Solved;
        }
        if fv == 0 {
            return NodeCheck::Dead;
        }
        // each free value lands in one position: sum of per-value best gains
        let mut capacity = 0u32;
        for a in bits(fv) {
            let mut best = 0;
            for i in bits(frame[w + a]) {
                let em = &prob.elem_masks[(a * prob.n + i) * w..][..w];
                let c: u32 = em
                    .iter()
                    .zip(uncovered)
                    .map(|(x, y)| (x & y).count_ones())
                    .sum();
                best = best.max(c);
            }
            capacity += best;
        }
        if capacity < remaining {
            return NodeCheck::Dead;
        }
        let mut best_g = usize::MAX;
        let mut best_opts = u32::MAX;
        for (k, &word) in uncovered.iter().enumerate() {
            for b in bits(word) {
                let g = k * 64 + b;
                let row = &prob.pos_masks[g * nv..][..nv];
                let opts: u32 = bits(fv).map(|a| (row[a] & frame[w + a]).count_ones()).sum();
                if opts < best_opts {
                    best_opts = opts;
                    best_g = g;
                    if opts == 0 {
                        return NodeCheck::Dead;
                    }
                }
            }
        }
        NodeCheck::Branch(best_g)
    }

    fn dfs(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        let prob = self.prob;
        let fl = prob.frame_len();
        let w = prob.words;
        let nv = prob.values.len();
        let base = depth * fl;
        let fv = self.free_values[depth];
        let g = match Self::check(prob, &self.stack[base..base + fl], fv) {
            NodeCheck::Solved => return true,
            NodeCheck::Dead => return false,
            NodeCheck::Branch(g) => g,
        };
        for a in bits(fv) {
            let mut cand = prob.pos_masks[g * nv + a] & self.stack[base + w + a];
            while cand != 0 {
                let i = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let (parent, child) = self.stack.split_at_mut(base + fl);
                prob.place_into(&parent[base..], &mut child[..fl], a, i);
                self.free_values[depth + 1] = fv & !(1 << a);
                self.placed.push((i + 1, prob.values[a]));
                if self.dfs(depth + 1) {
                    return true;
                }
                self.placed.pop();
                self.stack[base + w + a] &= !(1u64 << i);
            }
        }
        false
    }
}

/// One-level expansion of a task into its branch children (with the sibling
/// exclusions applied cumulatively). Solved tasks are returned unchanged.
fn expand(prob: &ExposureProblem, task: Task) -> Vec<Task> {
    let w = prob.words;
    let nv = prob.values.len();
    let g = match Searcher::check(prob, &task.frame, task.free_values) {
        NodeCheck::Solved => return vec![task],
        NodeCheck::Dead => return Vec::new(),
        NodeCheck::Branch(g) => g,
    };
    let mut cur = task;
    let mut out = Vec::new();
    for a in bits(cur.free_values) {
        let cand = prob.pos_masks[g * nv + a] & cur.frame[w + a];
        for i in bits(cand) {
            out.push(prob.place(&cur, a, i));
            cur.frame[w + a] &= !(1u64 << i);
        }
    }
    out
}

fn position_orbits(n: usize, elements: &[&Permutation]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    for g in elements {
        for (i, &v) in g.as_slice().iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, v as usize - 1));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Root tasks after symmetry reduction. Right multiplication by a codeword
/// preserves `d(·, C)`, so the smallest window value may be fixed to one
/// position per orbit of `C`, and the largest to one position per orbit of
/// that position's stabiliser.
fn root_tasks(prob: &ExposureProblem, code: &GroupCode) -> Vec<Task> {
    let n = prob.n;
    let nv = prob.values.len();
    let root = prob.root();
    if nv == 0 {
        return vec![root];
    }
    let all: Vec<&Permutation> = code.elements().iter().collect();
    let orbit = position_orbits(n, &all);
    let mut tasks = Vec::new();
    for p0 in (0..n).filter(|&i| orbit[i] == i) {
        let first = prob.place(&root, 0, p0);
        if nv == 1 {
            tasks.push(first);
            continue;
        }
        let stab: Vec<&Permutation> = code
            .elements()
            .iter()
            .filter(|g| g.get(p0 + 1) == p0 + 1)
            .collect();
        let sub = position_orbits(n, &stab);
        for p1 in (0..n).filter(|&i| i != p0 && sub[i] == i) {
            tasks.push(prob.place(&first, nv - 1, p1));
        }
    }
    tasks
}

/// Searches for a permutation with `d(f, C) > s`. Returns the deterministic
/// completion of the first exposing placement in search order (independent of
/// the thread count) and the number of search nodes.
pub fn exposed_at(code: &GroupCode, s: usize, config: &SolverConfig) -> Result<(Option<ExposureHit>, u64)> {
    let n = code.degree();
    if n > MAX_RESTRICTED_DEGREE {
        return Err(Error::DegreeCap {
            n,
            cap: MAX_RESTRICTED_DEGREE,
        });
    }
    if code.is_empty() {
        return Err(Error::EmptyCode);
    }
    let prob = ExposureProblem::new(code, s);
    let mut tasks = root_tasks(&prob, code);
    let threads = config
        .threads
        .unwrap_or_else(rayon::current_num_threads)
        .max(1);
    if threads > 1 {
        for _ in 0..2 {
            if tasks.len() >= 16 * threads {
                break;
            }
            tasks = tasks.into_iter().flat_map(|t| expand(&prob, t)).collect();
        }
    }
    let nodes = AtomicU64::new(0);
    let found = config.run(|| {
        tasks.par_iter().find_map_first(|task| {
            let mut s = Searcher::new(&prob, task);
            let ok = s.dfs(0);
            nodes.fetch_add(s.nodes, Ordering::Relaxed);
            ok.then_some(s.placed)
        })
    });
    let hit = match found {
        Some(placed) => {
            let mut pl = PartialPlacement::new(n);
            for (pos, val) in placed {
                pl.assign(pos, val)?;
            }
            let witness = pl.complete();
            let distance = distance_to_code(&witness, code)?;
            debug_assert!(distance > s);
            Some(ExposureHit { witness, distance })
        }
        None => None,
    };
    Ok((hit, nodes.into_inner()))
}

/// Restricted search with guess `r̃` (requires disjoint windows,
/// `(n−3)/2 < r̃ < n−1`).
///
/// Each class of permutations sharing the positions of `B ∪ T` is represented
/// by its farthest member, so the returned value is the largest `d(f, C)` over
/// all `f`. If some class is `r̃`-exposed the value is found by raising the
/// threshold until no placement is exposed any more; otherwise it is found by
/// lowering it. The status is `exact-restricted` iff `value ≥ r̃`; below that
/// the guess `r̃` was not a lower bound and the caller should retry lower.
pub fn radius_restricted(code: &GroupCode, rtilde: usize, config: &SolverConfig) -> Result<RadiusResult> {
    let start = Instant::now();
    let n = code.degree();
    if rtilde + 1 >= n {
        return Err(Error::InvalidParameter(format!(
            "r~={rtilde} leaves empty windows for n={n}; need r~ < n-1"
        )));
    }
    if window_sets(n, rtilde)?.overlapping() {
        return Err(Error::WindowsOverlap { n, radius: rtilde });
    }
    let mut probes = Vec::new();
    let mut probe = |s: usize| -> Result<Option<ExposureHit>> {
        let (hit, nodes) = exposed_at(code, s, config)?;
        probes.push(LevelProbe {
            threshold: s,
            exposed: hit.is_some(),
            nodes,
        });
        Ok(hit)
    };

    let (value, witness) = match probe(rtilde)? {
        Some(mut best) => {
            while let Some(hit) = probe(best.distance)? {
                best = hit;
            }
            (best.distance, best.witness)
        }
        None => {
            let mut t = rtilde;
            loop {
                if t == 0 {
                    break (0, Permutation::identity(n));
                }
                if let Some(hit) = probe(t - 1)? {
                    debug_assert_eq!(hit.distance, t);
                    break (hit.distance, hit.witness);
                }
                t -= 1;
            }
        }
    };
    let candidates = probes.iter().map(|p| p.nodes).sum();
    Ok(RadiusResult {
        value,
        status: if value >= rtilde {
            RadiusStatus::ExactRestricted
        } else {
            RadiusStatus::InvalidRestricted
        },
        rtilde: Some(rtilde),
        witness: Some(witness),
        stats: SolverStats {
            candidates,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            probes,
        },
    })
}

/// Literal form of the restricted search for small degrees: every injective
/// placement of `B ∪ T` is completed by the deterministic rule and its distance
/// to the code taken; the value is the maximum. Used as a cross-check.
pub fn radius_restricted_exhaustive(code: &GroupCode, rtilde: usize, config: &SolverConfig) -> Result<RadiusResult> {
    let start = Instant::now();
    let n = code.degree();
    check_cap(n, 8, config)?;
    let windows = window_sets(n, rtilde)?;
    if windows.overlapping() {
        return Err(Error::WindowsOverlap { n, radius: rtilde });
    }
    let values = windows.union();
    let k = values.len();
    let mut best: Option<(usize, Permutation)> = None;
    let mut candidates = 0u64;
    // choose k positions (combinations), then order them (permutations)
    let mut combo: Vec<usize> = (1..=k).collect();
    loop {
        let mut order = combo.clone();
        loop {
            let mut pl = PartialPlacement::new(n);
            for (&pos, &val) in order.iter().zip(&values) {
                pl.assign(pos, val)?;
            }
            let f = pl.complete();
            let dist = code
                .elements()
                .iter()
                .map(|g| chebyshev(f.as_slice(), g.as_slice()) as usize)
                .min()
                .ok_or(Error::EmptyCode)?;
            candidates += 1;
            if best.as_ref().is_none_or(|(b, _)| dist > *b) {
                best = Some((dist, f));
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    let (value, witness) = best.unwrap_or((0, Permutation::identity(n)));
    Ok(RadiusResult {
        value,
        status: if value >= rtilde {
            RadiusStatus::ExactRestricted
        } else {
            RadiusStatus::InvalidRestricted
        },
        rtilde: Some(rtilde),
        witness: Some(witness),
        stats: SolverStats {
            candidates,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            probes: Vec::new(),
        },
    })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - 1 - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
