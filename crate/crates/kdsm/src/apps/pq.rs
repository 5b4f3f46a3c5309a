//! p/q-submodularity: every q distinct subsets must induce at least p
//! pairs satisfying the submodular inequality.
//!
//! The tractability threshold is p >= C(q-1,2)+1, where the function is
//! (2q-3)-distant submodular; below the threshold even the simple
//! indicator functions defeat every evaluation-oracle algorithm.

use crate::error::Error;
use crate::set_function::SetFunction;
use crate::subset::{all_subsets, Subset};

pub use crate::set_function::indicator as gen_indicator;

/// Distance parameter implied by tractable (p, q): 2q - 3.
///
/// Errors outside q >= 3, p <= C(q,2), and below the tractability
/// threshold p >= C(q-1,2)+1, where minimization needs exponentially many
/// oracle calls.
pub fn pq_to_distant(p: u64, q: u64) -> Result<u64, Error> {
    if q < 3 || p == 0 || p > q * (q - 1) / 2 {
        return Err(Error::BadPqParameters { p, q });
    }
    let threshold = (q - 1) * (q - 2) / 2 + 1;
    if p < threshold {
        return Err(Error::IntractableRegime { p, q });
    }
    Ok(2 * q - 3)
}

/// Verdict of the exhaustive p/q-submodularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PqVerdict {
    Holds,
    /// A q-tuple with fewer than p good pairs.
    Failure { tuple: Vec<Subset>, good_pairs: usize },
}

impl PqVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PqVerdict::Holds)
    }
}

/// Checks p/q-submodularity by enumerating all q-tuples of distinct
/// subsets; guarded to n <= 6 and q <= 4.
pub fn is_pq_submodular(f: &SetFunction, p: u64, q: u64) -> Result<PqVerdict, Error> {
    let n = f.n();
    if n > 6 {
        return Err(Error::InstanceTooLarge { n, guard: 6 });
    }
    if !(2..=4).contains(&q) || p == 0 || p > q * (q - 1) / 2 {
        return Err(Error::BadPqParameters { p, q });
    }
    let size = 1usize << n;
    // Precompute the pairwise submodular-inequality table once.
    let values: Vec<_> = all_subsets(n).map(|s| f.eval(s)).collect();
    let mut good = vec![vec![false; size]; size];
    for a in 0..size {
        for b in a..size {
            let sa = Subset(a as u64);
            let sb = Subset(b as u64);
            let lhs = &values[a] + &values[b];
            let rhs = &values[sa.union(sb).bits() as usize]
                + &values[sa.intersection(sb).bits() as usize];
            let ok = lhs >= rhs;
            good[a][b] = ok;
            good[b][a] = ok;
        }
    }
    let mut tuple = vec![0usize; q as usize];
    let verdict = search_tuples(&good, size, &mut tuple, 0, 0, p);
    Ok(verdict)
}

fn search_tuples(
    good: &[Vec<bool>],
    size: usize,
    tuple: &mut [usize],
    depth: usize,
    start: usize,
    p: u64,
) -> PqVerdict {
    if depth == tuple.len() {
        let mut count = 0u64;
        for i in 0..tuple.len() {
            for j in (i + 1)..tuple.len() {
                if good[tuple[i]][tuple[j]] {
                    count += 1;
                }
            }
        }
        if count < p {
            return PqVerdict::Failure {
                tuple: tuple.iter().map(|&m| Subset(m as u64)).collect(),
                good_pairs: count as usize,
            };
        }
        return PqVerdict::Holds;
    }
    for m in start..size {
        tuple[depth] = m;
        if let failure @ PqVerdict::Failure { .. } =
            search_tuples(good, size, tuple, depth + 1, m + 1, p)
        {
            return failure;
        }
    }
    PqVerdict::Holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::set_function::{is_k_distant, uniform_rank};

    #[test]
    fn distance_parameter_values() {
        assert_eq!(pq_to_distant(2, 3).unwrap(), 3);
        assert_eq!(pq_to_distant(4, 4).unwrap(), 5);
        assert!(matches!(pq_to_distant(1, 3), Err(Error::IntractableRegime { p: 1, q: 3 })));
        assert!(matches!(pq_to_distant(3, 4), Err(Error::IntractableRegime { .. })));
        assert!(matches!(pq_to_distant(7, 4), Err(Error::BadPqParameters { .. })));
        assert!(matches!(pq_to_distant(1, 2), Err(Error::BadPqParameters { .. })));
    }

    #[test]
    fn submodular_functions_pass_every_pq() {
        let f = uniform_rank(3, 2).unwrap();
        for q in 2..=4u64 {
            for p in 1..=(q * (q - 1) / 2) {
                assert!(is_pq_submodular(&f, p, q).unwrap().holds(), "p={p}, q={q}");
            }
        }
    }

    #[test]
    fn proper_indicator_thresholds() {
        // f_T with a proper nonempty T is p/q-submodular exactly up to
        // p = C(q-1,2).
        let f = gen_indicator(Subset(0b011), 3).unwrap();
        assert!(is_pq_submodular(&f, 1, 3).unwrap().holds());
        assert!(!is_pq_submodular(&f, 2, 3).unwrap().holds());
        match is_pq_submodular(&f, 3, 3).unwrap() {
            PqVerdict::Failure { tuple, good_pairs } => {
                assert!(good_pairs < 3);
                assert_eq!(tuple.len(), 3);
            }
            PqVerdict::Holds => panic!("expected a witness triple"),
        }
        assert!(is_pq_submodular(&f, 3, 4).unwrap().holds());
        assert!(!is_pq_submodular(&f, 4, 4).unwrap().holds());
    }

    #[test]
    fn indicator_of_full_set_is_submodular() {
        let f = gen_indicator(Subset::full(3), 3).unwrap();
        assert!(is_k_distant(&f, 2).unwrap().holds());
        assert!(is_pq_submodular(&f, 3, 3).unwrap().holds());
    }

    #[test]
    fn empty_indicator_normalizes_to_a_constant() {
        let f = gen_indicator(Subset::EMPTY, 3).unwrap();
        assert_eq!(f.eval(Subset::EMPTY), rat(-1));
        assert_eq!(f.eval(Subset::full(3)), rat(0));
    }

    #[test]
    fn guard_rejects_large_instances() {
        let f = uniform_rank(7, 2).unwrap();
        assert!(matches!(
            is_pq_submodular(&f, 1, 3),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
