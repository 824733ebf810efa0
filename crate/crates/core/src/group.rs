//! The enumerated group codes: cyclic `Gₙ`, dihedral `Dₙ`, block-rotation
//! products `G_{p₁,…,p_k}`, the whole of `Sₙ`, explicit element lists, and
//! relabelings `πCπ⁻¹` of any of them.
//!
//! Codes are fully materialised and their elements kept in lexicographic
//! one-line order.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Non-increasing sequence of positive block sizes `p₁ ≥ p₂ ≥ … ≥ p_k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FactorProfile {
    parts: Vec<usize>,
}

impl FactorProfile {
    /// Rejects empty, zero-containing or increasing input. Unsorted input is
    /// an error rather than being sorted silently.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidProfile("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidProfile(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidProfile(format!(
                "parts must be non-increasing, got {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of factors `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degree `n = Σ pᵢ`.
    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The smallest part `p_k`.
    pub fn smallest(&self) -> usize {
        *self.parts.last().unwrap()
    }

    /// Order of the product group, `∏ pᵢ`.
    pub fn order(&self) -> usize {
        self.parts.iter().product()
    }
}

impl TryFrom<Vec<usize>> for FactorProfile {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<FactorProfile> for Vec<usize> {
    fn from(p: FactorProfile) -> Self {
        p.parts
    }
}

/// JSON-facing description of a code; [`GroupCode::build`] materialises it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeDescriptor {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Product { parts: FactorProfile },
    Symmetric { n: usize },
    Explicit { n: usize, elements: Vec<Permutation> },
    Relabeled { base: Box<CodeDescriptor>, pi: Permutation },
}

impl CodeDescriptor {
    pub fn cyclic(n: usize) -> Self {
        Self::Cyclic { n }
    }

    pub fn dihedral(n: usize) -> Self {
        Self::Dihedral { n }
    }

    pub fn product(parts: &[usize]) -> Result<Self> {
        Ok(Self::Product {
            parts: FactorProfile::new(parts.to_vec())?,
        })
    }

    pub fn relabeled(base: CodeDescriptor, pi: Permutation) -> Self {
        Self::Relabeled {
            base: Box::new(base),
            pi,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Cyclic { .. } => "cyclic",
            Self::Dihedral { .. } => "dihedral",
            Self::Product { .. } => "product",
            Self::Symmetric { .. } => "symmetric",
            Self::Explicit { .. } => "explicit",
            Self::Relabeled { .. } => "relabeled",
        }
    }

    /// The descriptor with all relabeling layers stripped.
    pub fn root(&self) -> &CodeDescriptor {
        match self {
            Self::Relabeled { base, .. } => base.root(),
            other => other,
        }
    }
}

impl fmt::Display for CodeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cyclic { n } => write!(f, "G_{n}"),
            Self::Dihedral { n } => write!(f, "D_{n}"),
            Self::Product { parts } => {
                let s: Vec<String> = parts.parts().iter().map(|p| p.to_string()).collect();
                write!(f, "G_{{{}}}", s.join(","))
            }
            Self::Symmetric { n } => write!(f, "S_{n}"),
            Self::Explicit { n, elements } => write!(f, "explicit({n}, |C|={})", elements.len()),
            Self::Relabeled { base, pi } => write!(f, "({base})^{pi}"),
        }
    }
}

/// A block of a rotation-product code: its locations listed in rotation order,
/// so `locations[0]` is the anchor (`π(1)`, `π(p+1)`, … for a relabeled code).
/// The block is also the value set its elements map it onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub locations: Vec<usize>,
}

impl Block {
    pub fn anchor(&self) -> usize {
        self.locations[0]
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    /// The location (= value) set in increasing order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut s = self.locations.clone();
        s.sort_unstable();
        s
    }

    pub fn contains(&self, x: usize) -> bool {
        self.locations.contains(&x)
    }
}

/// An enumerated permutation group, materialised in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCode {
    n: usize,
    descriptor: CodeDescriptor,
    elements: Vec<Permutation>,
    blocks: Option<Vec<Block>>,
}

impl GroupCode {
    /// Materialises a descriptor.
    pub fn build(desc: &CodeDescriptor) -> Result<Self> {
        match desc {
            CodeDescriptor::Cyclic { n } => make_cyclic(*n),
            CodeDescriptor::Dihedral { n } => make_dihedral(*n),
            CodeDescriptor::Product { parts } => Ok(make_product(parts)),
            CodeDescriptor::Symmetric { n } => make_symmetric(*n),
            CodeDescriptor::Explicit { n, elements } => from_elements(*n, elements.clone()),
            CodeDescriptor::Relabeled { base, pi } => relabel(&Self::build(base)?, pi),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn descriptor(&self) -> &CodeDescriptor {
        &self.descriptor
    }

    pub fn kind_name(&self) -> &'static str {
        self.descriptor.kind_name()
    }

    pub fn contains(&self, f: &Permutation) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    /// Rotation blocks for cyclic and product codes and their relabelings.
    /// Every element maps each block onto itself by a rotation.
    pub fn block_structure(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    /// Block (location set, value set) pairs of a product or relabeled-product
    /// code.
    pub fn blocks(&self) -> Result<&[Block]> {
        match self.descriptor.root() {
            CodeDescriptor::Product { .. } => Ok(self.blocks.as_deref().unwrap()),
            _ => Err(Error::WrongKind {
                op: "blocks",
                kind: self.descriptor.to_string(),
            }),
        }
    }

    /// `(p, q)` for a two-factor product code or its relabeling.
    pub fn pq_type(&self) -> Option<(usize, usize)> {
        match self.descriptor.root() {
            CodeDescriptor::Product { parts } if parts.len() == 2 => {
                Some((parts.parts()[0], parts.parts()[1]))
            }
            _ => None,
        }
    }

    pub fn is_relabeled(&self) -> bool {
        matches!(self.descriptor, CodeDescriptor::Relabeled { .. })
    }
}

fn finish(n: usize, descriptor: CodeDescriptor, mut elements: Vec<Permutation>, blocks: Option<Vec<Block>>) -> GroupCode {
    elements.sort_unstable();
    elements.dedup();
    GroupCode {
        n,
        descriptor,
        elements,
        blocks,
    }
}

/// `m ⊡ n`: the representative of `m` modulo `n` in `[1, n]`.
#[inline]
pub fn mod_star(m: i64, n: usize) -> usize {
    let n = n as i64;
    ((m - 1).rem_euclid(n) + 1) as usize
}

/// `Gₙ = ⟨(1,2,…,n)⟩`; element `t` maps `i ↦ (i+t) ⊡ n`.
pub fn make_cyclic(n: usize) -> Result<GroupCode> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { what: "cyclic code", n, min: 1 });
    }
    let elements = (0..n)
        .map(|t| {
            Permutation::from_raw((1..=n).map(|i| mod_star((i + t) as i64, n) as u32).collect())
        })
        .collect();
    let blocks = vec![Block {
        locations: (1..=n).collect(),
    }];
    Ok(finish(n, CodeDescriptor::cyclic(n), elements, Some(blocks)))
}

/// Rotation `A_i = [(i-1) ⊡ n, (i-2) ⊡ n, …, i ⊡ n]`, i.e. `j ↦ (i-j) ⊡ n`.
pub fn dihedral_a(n: usize, i: usize) -> Permutation {
    Permutation::from_raw((1..=n).map(|j| mod_star(i as i64 - j as i64, n) as u32).collect())
}

/// `B_i = [(n-i+2) ⊡ n, (n-i+3) ⊡ n, …, (n-i+1) ⊡ n]`, i.e. `j ↦ (n-i+1+j) ⊡ n`.
pub fn dihedral_b(n: usize, i: usize) -> Permutation {
    Permutation::from_raw(
        (1..=n)
            .map(|j| mod_star((n + j + 1) as i64 - i as i64, n) as u32)
            .collect(),
    )
}

/// `Dₙ = {A_i} ∪ {B_i}`, `2n` elements.
pub fn make_dihedral(n: usize) -> Result<GroupCode> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { what: "dihedral code", n, min: 3 });
    }
    let elements = (1..=n)
        .flat_map(|i| [dihedral_a(n, i), dihedral_b(n, i)])
        .collect();
    Ok(finish(n, CodeDescriptor::dihedral(n), elements, None))
}

/// `G_{p₁} ⊗ … ⊗ G_{p_k}`: independent rotations of consecutive blocks.
pub fn make_product(profile: &FactorProfile) -> GroupCode {
    let n = profile.degree();
    let mut blocks = Vec::with_capacity(profile.len());
    let mut start = 0;
    for &p in profile.parts() {
        blocks.push(Block {
            locations: (start + 1..=start + p).collect(),
        });
        start += p;
    }
    let mut elements = Vec::with_capacity(profile.order());
    let mut shifts = vec![0usize; profile.len()];
    loop {
        let mut images = vec![0u32; n];
        for (block, &t) in blocks.iter().zip(&shifts) {
            let p = block.len();
            let base = block.locations[0];
            for o in 0..p {
                images[base - 1 + o] = (base + (o + t) % p) as u32;
            }
        }
        elements.push(Permutation::from_raw(images));
        // odometer over the shift vector
        let mut b = 0;
        loop {
            if b == shifts.len() {
                return finish(
                    n,
                    CodeDescriptor::Product {
                        parts: profile.clone(),
                    },
                    elements,
                    Some(blocks),
                );
            }
            shifts[b] += 1;
            if shifts[b] < profile.parts()[b] {
                break;
            }
            shifts[b] = 0;
            b += 1;
        }
    }
}

/// The whole symmetric group `Sₙ` as a code (`n ≤ 9`).
pub fn make_symmetric(n: usize) -> Result<GroupCode> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { what: "symmetric code", n, min: 1 });
    }
    if n > 9 {
        return Err(Error::DegreeCap { n, cap: 9 });
    }
    let mut elements = Vec::new();
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    loop {
        elements.push(Permutation::from_raw(cur.clone()));
        if !next_permutation(&mut cur) {
            break;
        }
    }
    Ok(finish(n, CodeDescriptor::Symmetric { n }, elements, None))
}

/// A code given by its element list; the list must be a group.
pub fn from_elements(n: usize, elements: Vec<Permutation>) -> Result<GroupCode> {
    if elements.iter().any(|g| g.degree() != n) {
        return Err(Error::InvalidParameter(format!(
            "all elements must have degree {n}"
        )));
    }
    audit_group(n, &elements)?;
    Ok(finish(
        n,
        CodeDescriptor::Explicit {
            n,
            elements: elements.clone(),
        },
        elements,
        None,
    ))
}

/// `C^π = {π g π⁻¹ : g ∈ C}`.
pub fn relabel(code: &GroupCode, pi: &Permutation) -> Result<GroupCode> {
    if pi.degree() != code.n {
        return Err(Error::DegreeMismatch {
            left: code.n,
            right: pi.degree(),
        });
    }
    let elements = code
        .elements
        .iter()
        .map(|g| Permutation::conjugate(pi, g))
        .collect::<Result<Vec<_>>>()?;
    let blocks = code.blocks.as_ref().map(|bs| {
        bs.iter()
            .map(|b| Block {
                locations: b.locations.iter().map(|&x| pi.get(x)).collect(),
            })
            .collect()
    });
    Ok(finish(
        code.n,
        CodeDescriptor::relabeled(code.descriptor.clone(), pi.clone()),
        elements,
        blocks,
    ))
}

/// Closure, identity and inverse check over an element list.
pub fn audit_group(n: usize, elements: &[Permutation]) -> Result<()> {
    if elements.is_empty() {
        return Err(Error::EmptyCode);
    }
    let set: HashSet<&Permutation> = elements.iter().collect();
    if !set.contains(&Permutation::identity(n)) {
        return Err(Error::NotAGroup("identity missing".into()));
    }
    for f in elements {
        if !set.contains(&f.inverse()) {
            return Err(Error::NotAGroup(format!("inverse of {f} missing")));
        }
        for g in elements {
            let fg = f.compose(g)?;
            if !set.contains(&fg) {
                return Err(Error::NotAGroup(format!("{f}∘{g} = {fg} missing")));
            }
        }
    }
    Ok(())
}

/// Subgroup generated by `generators`, sorted. Breadth-first closure.
pub fn generate_closure(n: usize, generators: &[Permutation]) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(f) = queue.pop_front() {
        for g in generators {
            let h = g.compose(&f)?;
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Advances `a` to its lexicographic successor; false when `a` was the last.
pub(crate) fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(code: &GroupCode) -> Vec<String> {
        code.elements().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn cyclic_examples() {
        let g3 = make_cyclic(3).unwrap();
        assert_eq!(set(&g3), vec!["[1,2,3]", "[2,3,1]", "[3,1,2]"]);
        assert_eq!(set(&make_cyclic(1).unwrap()), vec!["[1]"]);
        let g7 = make_cyclic(7).unwrap();
        assert_eq!(g7.len(), 7);
        audit_group(7, g7.elements()).unwrap();
        assert!(make_cyclic(0).is_err());
    }

    #[test]
    fn dihedral_small_cases() {
        let d3 = make_dihedral(3).unwrap();
        assert_eq!(d3.elements(), make_symmetric(3).unwrap().elements());
        let d4 = make_dihedral(4).unwrap();
        assert_eq!(d4.len(), 8);
        assert!(d4.contains(&p("[4,3,2,1]")));
        // A_i, B_i expanded by hand for n = 4
        let expected = [
            "[4,3,2,1]", "[1,4,3,2]", "[2,1,4,3]", "[3,2,1,4]", // A_1..A_4
            "[1,2,3,4]", "[4,1,2,3]", "[3,4,1,2]", "[2,3,4,1]", // B_1..B_4
        ];
        for e in expected {
            assert!(d4.contains(&p(e)), "{e}");
        }
        assert!(make_dihedral(2).is_err());
    }

    #[test]
    fn dihedral_matches_generator_closure() {
        for n in 3..=20 {
            let rot = Permutation::from_cycles(
                n,
                &format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(",")),
            )
            .unwrap();
            // ∏_{i=1}^{⌊n/2⌋} (i, n-i); pairs with i = n-i are fixed points
            let mut cycles = String::new();
            for i in 1..=n / 2 {
                if i != n - i {
                    cycles.push_str(&format!("({},{})", i, n - i));
                }
            }
            let refl = Permutation::from_cycles(n, &cycles).unwrap();
            let closure = generate_closure(n, &[rot, refl]).unwrap();
            assert_eq!(closure.as_slice(), make_dihedral(n).unwrap().elements(), "n={n}");
        }
    }

    #[test]
    fn product_examples() {
        let prof = FactorProfile::new(vec![2, 2]).unwrap();
        let c = make_product(&prof);
        let mut expected = vec![
            Permutation::identity(4),
            Permutation::from_cycles(4, "(1,2)").unwrap(),
            Permutation::from_cycles(4, "(3,4)").unwrap(),
            Permutation::from_cycles(4, "(1,2)(3,4)").unwrap(),
        ];
        expected.sort();
        assert_eq!(c.elements(), expected.as_slice());
        assert_eq!(make_product(&FactorProfile::new(vec![3, 2, 2]).unwrap()).len(), 12);

        // (p,1) is G_p with p+1 fixed
        let c = make_product(&FactorProfile::new(vec![5, 1]).unwrap());
        let g5 = make_cyclic(5).unwrap();
        for (a, b) in c.elements().iter().zip(g5.elements()) {
            assert_eq!(&a.as_slice()[..5], b.as_slice());
            assert_eq!(a.get(6), 6);
        }
    }

    #[test]
    fn profile_rejects_unsorted() {
        assert!(FactorProfile::new(vec![2, 3]).is_err());
        assert!(FactorProfile::new(vec![]).is_err());
        assert!(FactorProfile::new(vec![3, 0]).is_err());
        assert!(serde_json::from_str::<CodeDescriptor>(r#"{"kind":"product","parts":[1,4]}"#).is_err());
    }

    #[test]
    fn relabel_examples() {
        let g3 = make_cyclic(3).unwrap();
        let same = relabel(&g3, &Permutation::identity(3)).unwrap();
        assert_eq!(same.elements(), g3.elements());
        assert_eq!(same.kind_name(), "relabeled");

        let h = p("[2,1,3]");
        let r = relabel(&g3, &h).unwrap();
        let expected: Vec<Permutation> = {
            let mut v: Vec<_> = g3
                .elements()
                .iter()
                .map(|g| h.compose(g).unwrap().compose(&h.inverse()).unwrap())
                .collect();
            v.sort();
            v
        };
        assert_eq!(r.elements(), expected.as_slice());
        // the relabelled generator is the cycle (2,1,3)
        assert!(r.contains(&Permutation::from_cycles(3, "(2,1,3)").unwrap()));
        let back = relabel(&r, &h.inverse()).unwrap();
        assert_eq!(back.elements(), g3.elements());
    }

    #[test]
    fn blocks_of_product_codes() {
        let c = make_product(&FactorProfile::new(vec![4, 3]).unwrap());
        let b = c.blocks().unwrap();
        assert_eq!(b[0].sorted(), vec![1, 2, 3, 4]);
        assert_eq!(b[1].sorted(), vec![5, 6, 7]);
        let r = relabel(&c, &Permutation::reversal(7)).unwrap();
        let b = r.blocks().unwrap();
        assert_eq!(b[0].sorted(), vec![4, 5, 6, 7]);
        assert_eq!(b[1].sorted(), vec![1, 2, 3]);
        assert!(make_dihedral(5).unwrap().blocks().is_err());
    }

    #[test]
    fn descriptor_json() {
        let d: CodeDescriptor = serde_json::from_str(r#"{"kind":"dihedral","n":12}"#).unwrap();
        assert_eq!(d, CodeDescriptor::dihedral(12));
        let d: CodeDescriptor = serde_json::from_str(
            r#"{"kind":"relabeled","base":{"kind":"product","parts":[5,3]},"pi":"[8,7,6,5,4,3,2,1]"}"#,
        )
        .unwrap();
        let code = GroupCode::build(&d).unwrap();
        assert_eq!(code.len(), 15);
        assert_eq!(code.pq_type(), Some((5, 3)));
        let back: CodeDescriptor =
            serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn explicit_codes_are_audited() {
        let ok = from_elements(3, make_cyclic(3).unwrap().elements().to_vec()).unwrap();
        assert_eq!(ok.len(), 3);
        assert!(matches!(
            from_elements(3, vec![Permutation::identity(3), p("[2,3,1]")]),
            Err(Error::NotAGroup(_))
        ));
    }

    #[test]
    fn mod_star_convention() {
        assert_eq!(mod_star(0, 5), 5);
        assert_eq!(mod_star(5, 5), 5);
        assert_eq!(mod_star(6, 5), 1);
        assert_eq!(mod_star(-1, 5), 4);
    }
}
