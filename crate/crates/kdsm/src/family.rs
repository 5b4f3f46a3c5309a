//! Weight-sorted element orderings and the restricted constraint family.
//!
//! For a weight vector w, the elements are ordered by descending weight
//! into prefixes `S_0 ⊂ S_1 ⊂ … ⊂ S_n`. The family collects every set of
//! the form `S_i Δ T` with `|T| <= k-2`; the dual of the optimization
//! problem over P(f) always has an optimal solution supported inside it,
//! which is what makes the solvers polynomial in n^k.

use num_traits::Signed;

use crate::error::Error;
use crate::rational::Rational;
use crate::subset::{subsets_up_to_size, Subset};

/// A descending-weight ordering of the ground set, with its prefix chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementOrder {
    /// perm[pos] = 0-based element at sorted position pos.
    perm: Vec<usize>,
    /// prefixes[i] = set of the first i elements; prefixes[0] is empty.
    prefixes: Vec<Subset>,
}

impl ElementOrder {
    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// The 0-based element at sorted position `pos` (0-based).
    pub fn element_at(&self, pos: usize) -> usize {
        self.perm[pos]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The chain S_0, S_1, …, S_n.
    pub fn prefixes(&self) -> &[Subset] {
        &self.prefixes
    }

    /// An explicit ordering, used by generators and tests.
    pub fn from_perm(perm: Vec<usize>) -> Result<ElementOrder, Error> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &e in &perm {
            if e >= n || seen[e] {
                return Err(Error::Format(format!("invalid permutation {perm:?}")));
            }
            seen[e] = true;
        }
        let prefixes = build_prefixes(&perm);
        Ok(ElementOrder { perm, prefixes })
    }
}

fn build_prefixes(perm: &[usize]) -> Vec<Subset> {
    let mut prefixes = Vec::with_capacity(perm.len() + 1);
    let mut cur = Subset::EMPTY;
    prefixes.push(cur);
    for &e in perm {
        cur = cur.insert(e);
        prefixes.push(cur);
    }
    prefixes
}

/// Sorts elements by descending weight; ties broken by ascending element
/// index. Rejects negative weights.
pub fn sort_elements(w: &[Rational]) -> Result<ElementOrder, Error> {
    if let Some(i) = w.iter().position(|x| x.is_negative()) {
        return Err(Error::NegativeWeight(i));
    }
    let mut perm: Vec<usize> = (0..w.len()).collect();
    perm.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    let prefixes = build_prefixes(&perm);
    Ok(ElementOrder { perm, prefixes })
}

/// The deduplicated family {S_i Δ T : 0 <= i <= n, |T| <= k-2} for one
/// ordering, stored sorted by mask for reproducible constraint indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintFamily {
    ordering: ElementOrder,
    k: usize,
    members: Vec<Subset>,
}

impl ConstraintFamily {
    pub fn ordering(&self) -> &ElementOrder {
        &self.ordering
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sorted, deduplicated member masks.
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }
}

/// Enumerates the family for an ordering and distance parameter k.
pub fn build_family(ordering: &ElementOrder, k: usize) -> Result<ConstraintFamily, Error> {
    let n = ordering.n();
    if k < 2 || k > n {
        return Err(Error::DistanceOutOfRange { k, n });
    }
    let mut members: Vec<Subset> = Vec::new();
    for t in subsets_up_to_size(n, k - 2) {
        for prefix in ordering.prefixes() {
            members.push(prefix.symmetric_difference(t));
        }
    }
    members.sort_unstable();
    members.dedup();
    debug_assert!(members.len() as u128 <= family_size_bound(n, k));
    Ok(ConstraintFamily { ordering: ordering.clone(), k, members })
}

/// The enumeration bound (n+1) * sum over i <= k-2 of C(n, i).
///
/// Callers may also compare against the looser 2 n^k.
pub fn family_size_bound(n: usize, k: usize) -> u128 {
    let mut sum: u128 = 0;
    for i in 0..=(k.saturating_sub(2)) {
        sum += binomial(n as u128, i as u128);
    }
    (n as u128 + 1) * sum
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
