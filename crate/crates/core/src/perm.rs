//! Permutations of `{1..n}` in one-line notation and the l∞ (Chebyshev) metric.
//!
//! Every value that crosses the public API is 1-based: `f.get(1)` is the image
//! of the first position, and the text form `[2,3,1]` lists `f(1), f(2), f(3)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::GroupCode;

/// A bijection on `{1..n}`, stored as its one-line image sequence.
///
/// The derived ordering is lexicographic on the one-line form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from 1-based one-line images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Self {
            images: images.into_iter().map(|v| v as u32).collect(),
        })
    }

    /// Caller guarantees `images` is a 1-based bijection.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(Self::new(images.iter().map(|&v| v as usize).collect()).is_ok());
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw((1..=n as u32).collect())
    }

    /// The reversal `[n, n-1, ..., 1]`.
    pub fn reversal(n: usize) -> Self {
        Self::from_raw((1..=n as u32).rev().collect())
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)` on `{1..n}`. Fixed points may
    /// be omitted; `()` or the empty string is the identity.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut images: Vec<u32> = (1..=n as u32).collect();
        let mut touched = vec![false; n + 1];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = rest
                .find(')')
                .filter(|_| rest.starts_with('('))
                .ok_or_else(|| Error::Parse(format!("malformed cycle notation: {text:?}")))?;
            let body = &rest[1..body_end];
            rest = rest[body_end + 1..].trim_start();
            let cycle = parse_list(body)?;
            for &v in &cycle {
                if v == 0 || v > n {
                    return Err(Error::Parse(format!("cycle entry {v} outside 1..={n}")));
                }
                if std::mem::replace(&mut touched[v], true) {
                    return Err(Error::Parse(format!("{v} appears in more than one cycle")));
                }
            }
            for (k, &v) in cycle.iter().enumerate() {
                images[v - 1] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    /// One-line images, 1-based values.
    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.images
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_degrees(self, other)?;
        Ok(Self::from_raw(
            other.images.iter().map(|&v| self.images[v as usize - 1]).collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self::from_raw(inv)
    }

    /// Position holding `value`.
    pub fn position_of(&self, value: usize) -> usize {
        self.images.iter().position(|&v| v as usize == value).unwrap() + 1
    }

    /// `h ∘ g ∘ h⁻¹`; maps each cycle `(a, b, ...)` of `g` to `(h(a), h(b), ...)`.
    pub fn conjugate(h: &Self, g: &Self) -> Result<Self> {
        check_degrees(h, g)?;
        let mut out = vec![0u32; g.images.len()];
        for (i, &gi) in g.images.iter().enumerate() {
            out[h.images[i] as usize - 1] = h.images[gi as usize - 1];
        }
        Ok(Self::from_raw(out))
    }

    /// Sorted multiset of cycle lengths (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize - 1;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }
}

fn check_degrees(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    Ok(())
}

fn parse_list(body: &str) -> Result<Vec<usize>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer {:?}", t.trim())))
        })
        .collect()
}

/// Chebyshev distance of two equal-length one-line slices.
#[inline]
pub(crate) fn chebyshev(a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).max().unwrap_or(0)
}

/// `max_i |f(i) - g(i)|`.
pub fn linf_distance(f: &Permutation, g: &Permutation) -> Result<usize> {
    check_degrees(f, g)?;
    Ok(chebyshev(&f.images, &g.images) as usize)
}

/// `min_{g ∈ C} d(f, g)`.
pub fn distance_to_code(f: &Permutation, code: &GroupCode) -> Result<usize> {
    if f.degree() != code.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: code.degree(),
        });
    }
    code.elements()
        .iter()
        .map(|g| chebyshev(&f.images, g.as_slice()) as usize)
        .min()
        .ok_or(Error::EmptyCode)
}

/// True iff `d(f, C) > r`.
pub fn is_r_exposed(f: &Permutation, code: &GroupCode, r: usize) -> Result<bool> {
    if f.degree() != code.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: code.degree(),
        });
    }
    let r = r as u32;
    Ok(code
        .elements()
        .iter()
        .all(|g| chebyshev(&f.images, g.as_slice()) > r))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the bracketed one-line form `[2,3,1]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [a,b,...], got {s:?}")))?;
        Self::new(parse_list(body)?)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An injective partial map position → value on `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPlacement {
    n: usize,
    by_position: BTreeMap<usize, usize>,
    used_values: Vec<bool>,
}

impl PartialPlacement {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            by_position: BTreeMap::new(),
            used_values: vec![false; n + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.by_position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_position.is_empty()
    }

    /// Assigns `value` to `position`; rejects anything that breaks injectivity.
    pub fn assign(&mut self, position: usize, value: usize) -> Result<()> {
        let n = self.n;
        if !(1..=n).contains(&position) || !(1..=n).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "placement {position}->{value} outside 1..={n}"
            )));
        }
        if let Some(old) = self.by_position.get(&position) {
            return Err(Error::InvalidParameter(format!(
                "position {position} already holds {old}"
            )));
        }
        if self.used_values[value] {
            return Err(Error::InvalidParameter(format!("value {value} already placed")));
        }
        self.by_position.insert(position, value);
        self.used_values[value] = true;
        Ok(())
    }

    pub fn get(&self, position: usize) -> Option<usize> {
        self.by_position.get(&position).copied()
    }

    pub fn contains_value(&self, value: usize) -> bool {
        self.used_values.get(value).copied().unwrap_or(false)
    }

    /// `(position, value)` pairs in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_position.iter().map(|(&p, &v)| (p, v))
    }

    fn free_positions_and_values(&self) -> (Vec<usize>, Vec<usize>) {
        let positions = (1..=self.n)
            .filter(|p| !self.by_position.contains_key(p))
            .collect();
        let values = (1..=self.n).filter(|&v| !self.used_values[v]).collect();
        (positions, values)
    }

    /// Deterministic completion: unassigned positions, in increasing order,
    /// receive the unused values in increasing order.
    pub fn complete(&self) -> Permutation {
        let (positions, values) = self.free_positions_and_values();
        self.fill(&positions, &values)
    }

    /// Completion with the unused values shuffled.
    pub fn complete_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let (positions, mut values) = self.free_positions_and_values();
        values.shuffle(rng);
        self.fill(&positions, &values)
    }

    fn fill(&self, positions: &[usize], values: &[usize]) -> Permutation {
        let mut images = vec![0u32; self.n];
        for (&p, &v) in &self.by_position {
            images[p - 1] = v as u32;
        }
        for (&p, &v) in positions.iter().zip(values) {
            images[p - 1] = v as u32;
        }
        Permutation::from_raw(images)
    }

    /// True iff `f` agrees with every assignment.
    pub fn is_extended_by(&self, f: &Permutation) -> bool {
        f.degree() == self.n && self.iter().all(|(p, v)| f.get(p) == v)
    }
}

impl Serialize for PartialPlacement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            position: usize,
            value: usize,
        }
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            assignments: Vec<Entry>,
        }
        Repr {
            n: self.n,
            assignments: self
                .iter()
                .map(|(position, value)| Entry { position, value })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialPlacement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            position: usize,
            value: usize,
        }
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            assignments: Vec<Entry>,
        }
        let repr = Repr::deserialize(d)?;
        let mut out = PartialPlacement::new(repr.n);
        for e in repr.assignments {
            out.assign(e.position, e.value)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("[2,1,3]").compose(&p("[3,2,1]")).unwrap(), p("[3,1,2]"));
        assert_eq!(
            Permutation::identity(4).compose(&p("[4,3,2,1]")).unwrap(),
            p("[4,3,2,1]")
        );
        // square of a 3-cycle, pointwise
        let c = p("[2,3,1]");
        let sq: Vec<usize> = (1..=3).map(|i| c.get(c.get(i))).collect();
        assert_eq!(c.compose(&c).unwrap().to_vec(), sq);
        assert_eq!(sq, vec![3, 1, 2]);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        assert!(matches!(
            p("[1,2]").compose(&p("[1,2,3]")),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("[2,3,1]").inverse(), p("[3,1,2]"));
        assert_eq!(Permutation::identity(5).inverse(), Permutation::identity(5));
        assert_eq!(p("[4,3,2,1]").inverse(), p("[4,3,2,1]"));
    }

    #[test]
    fn conjugate_examples() {
        let g = p("[2,3,1]");
        assert_eq!(Permutation::conjugate(&Permutation::identity(3), &g).unwrap(), g);
        // (1,2,3) relabelled by h = [2,1,3] is the cycle (2,1,3)
        let h = p("[2,1,3]");
        let expected = Permutation::from_cycles(3, "(2,1,3)").unwrap();
        assert_eq!(expected, p("[3,1,2]"));
        assert_eq!(Permutation::conjugate(&h, &g).unwrap(), expected);
        let back = Permutation::conjugate(
            &h,
            &Permutation::conjugate(&h.inverse(), &g).unwrap(),
        )
        .unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(linf_distance(&p("[1,2,3]"), &p("[3,2,1]")).unwrap(), 2);
        assert_eq!(linf_distance(&p("[3,1,2]"), &p("[3,1,2]")).unwrap(), 0);
        for n in 1..10 {
            let d = linf_distance(&Permutation::identity(n), &Permutation::reversal(n)).unwrap();
            assert_eq!(d, n - 1);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("[0,1]".parse::<Permutation>().is_err());
        assert!("1,2".parse::<Permutation>().is_err());
        assert!("[]".parse::<Permutation>().is_err());
        assert!(Permutation::from_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Permutation::from_cycles(3, "(1,4)").is_err());
        assert!(Permutation::from_cycles(3, "1,2").is_err());
    }

    #[test]
    fn cycles_with_omitted_fixed_points() {
        let f = Permutation::from_cycles(5, "(1,2)(4,5)").unwrap();
        assert_eq!(f, p("[2,1,3,5,4]"));
        assert_eq!(f.cycle_type(), vec![1, 2, 2]);
        assert!(Permutation::from_cycles(4, "").unwrap().is_identity());
        assert!(Permutation::from_cycles(4, "()").unwrap().is_identity());
    }

    #[test]
    fn text_form_round_trips() {
        let f = p("[3,1,4,2]");
        assert_eq!(f.to_string(), "[3,1,4,2]");
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "\"[3,1,4,2]\"");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), f);
    }

    #[test]
    fn placement_completion_rule() {
        let mut pl = PartialPlacement::new(5);
        pl.assign(2, 5).unwrap();
        pl.assign(4, 1).unwrap();
        assert!(pl.assign(2, 3).is_err());
        assert!(pl.assign(3, 5).is_err());
        assert!(pl.assign(6, 2).is_err());
        let f = pl.complete();
        assert_eq!(f, p("[2,5,3,1,4]"));
        assert!(pl.is_extended_by(&f));
        let json = serde_json::to_string(&pl).unwrap();
        assert_eq!(serde_json::from_str::<PartialPlacement>(&json).unwrap(), pl);
    }
}
