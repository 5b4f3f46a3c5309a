//! Bitmask subsets of a small ground set.
//!
//! Element `i` (1-based) of the ground set corresponds to bit `i-1`, so masks
//! give O(1) union, intersection and symmetric difference, and the natural
//! `u64` order yields a canonical tie-breaking order on subsets.

use std::fmt;

use crate::error::Error;

/// A subset of a ground set with at most 64 elements, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// Full set on `n` elements.
    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= 63);
        Subset((1u64 << n) - 1)
    }

    /// Singleton {element}, 0-based index.
    pub fn singleton(element: usize) -> Subset {
        Subset(1u64 << element)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: usize) -> bool {
        self.0 & (1u64 << element) != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn symmetric_difference(self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn insert(self, element: usize) -> Subset {
        Subset(self.0 | (1u64 << element))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Iterates the 0-based element indices of the subset, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// All 2^n subsets of an n-element ground set, in mask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    debug_assert!(n <= 30, "exhaustive subset enumeration capped at n=30");
    (0u64..(1u64 << n)).map(Subset)
}

/// All subsets of exactly `size` elements, in mask order (Gosper's hack).
pub fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = Subset> {
    debug_assert!(n <= 62);
    let full = (1u64 << n) - 1;
    let mut cur = if size > n {
        None
    } else if size == 0 {
        Some(0u64)
    } else {
        Some((1u64 << size) - 1)
    };
    std::iter::from_fn(move || {
        let v = cur?;
        cur = if size == 0 {
            None
        } else {
            let t = v | (v - 1);
            let next = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            if next <= full {
                Some(next)
            } else {
                None
            }
        };
        Some(Subset(v))
    })
}

/// All subsets of at most `max_size` elements, ascending size, mask order within a size.
pub fn subsets_up_to_size(n: usize, max_size: usize) -> impl Iterator<Item = Subset> {
    (0..=max_size.min(n)).flat_map(move |s| subsets_of_size(n, s))
}

/// The ground set S: its size and optional element labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    /// Unlabelled ground set of `n >= 1` elements.
    pub fn new(n: usize) -> Result<GroundSet, Error> {
        if n == 0 || n > 30 {
            return Err(Error::GroundSetSize(n));
        }
        Ok(GroundSet { n, labels: None })
    }

    /// Ground set with one distinct label per element.
    pub fn with_labels(labels: Vec<String>) -> Result<GroundSet, Error> {
        let mut g = GroundSet::new(labels.len())?;
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::DuplicateLabel(a.clone()));
            }
        }
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of a 0-based element; falls back to its 1-based index.
    pub fn label(&self, element: usize) -> String {
        match &self.labels {
            Some(ls) => ls[element].clone(),
            None => (element + 1).to_string(),
        }
    }

    /// Renders a subset as the sorted list of its element labels.
    pub fn render(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.label(i)).collect()
    }
}
