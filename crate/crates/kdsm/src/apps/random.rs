//! Seeded random k-distant instances for tests and benchmarks.
//!
//! Every strategy is deterministic in its seed and returns a function
//! that passes the exhaustive distance check, either by construction
//! (cut, min-rank, clique, shifted-indicator instances ride on proved
//! closure properties) or by rejection sampling against the checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apps::clique::{gen_clique_function, Graph};
use crate::apps::cut::{check_cut_condition, gen_cut_function, WeightedCompleteGraph};
use crate::apps::matroid::{min_rank_function, Matroid};
use crate::error::Error;
use crate::rational::{rat, Rational};
use crate::set_function::{
    indicator, is_k_distant, normalize, scale, shift_nonempty, subtract_modular, SetFunction,
};
use crate::subset::Subset;

/// Instance-generation strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Concave-in-cardinality base plus sparse noise, gated by the checker.
    Rejection,
    /// Cut function of a complete graph with a few negative edges.
    Cut,
    /// Minimum rank of a matroid pair, minus a random modular function.
    MinRank,
    /// Clique-detection function of a random graph.
    Clique,
    /// Scaled full-set indicator, shifted and minus a random modular part.
    IndicatorShifted,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Rejection,
        Strategy::Cut,
        Strategy::MinRank,
        Strategy::Clique,
        Strategy::IndicatorShifted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Rejection => "rejection",
            Strategy::Cut => "cut",
            Strategy::MinRank => "minrank",
            Strategy::Clique => "clique",
            Strategy::IndicatorShifted => "indicator_shifted",
        }
    }

    pub fn parse(s: &str) -> Result<Strategy, Error> {
        Strategy::ALL
            .iter()
            .copied()
            .find(|st| st.name() == s || (s == "indicator-shifted" && *st == Strategy::IndicatorShifted))
            .ok_or_else(|| Error::UnsupportedStrategy(format!("unknown strategy {s:?}")))
    }

    /// Whether the strategy can produce a (n, k) instance at all.
    pub fn supports(&self, n: usize, k: usize) -> bool {
        if k < 2 || k > n {
            return false;
        }
        match self {
            Strategy::Rejection => n <= 6,
            Strategy::Cut => n >= 3,
            Strategy::MinRank => n >= 4,
            Strategy::Clique => k >= 3,
            Strategy::IndicatorShifted => true,
        }
    }
}

/// Deterministic seeded generation of a k-distant instance.
pub fn gen_random_kdistant(
    n: usize,
    k: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<SetFunction, Error> {
    if !strategy.supports(n, k) {
        return Err(Error::UnsupportedStrategy(format!(
            "{} cannot produce n={n}, k={k}",
            strategy.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32 ^ (k as u64) << 16);
    match strategy {
        Strategy::Rejection => gen_rejection(n, k, &mut rng),
        Strategy::Cut => gen_cut(n, k, &mut rng),
        Strategy::MinRank => gen_minrank(n, k, &mut rng),
        Strategy::Clique => gen_clique(n, k, &mut rng),
        Strategy::IndicatorShifted => gen_indicator_shifted(n, k, &mut rng),
    }
}

const REJECTION_BUDGET: usize = 2000;

fn gen_rejection(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<SetFunction, Error> {
    let size = 1usize << n;
    for _ in 0..REJECTION_BUDGET {
        // Concave base in the cardinality keeps most pairs slack; sparse
        // noise makes the checker earn its keep.
        let modular: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let mut values: Vec<i64> = (0..size)
            .map(|mask| {
                let s = Subset(mask as u64);
                let card = s.len() as i64;
                let base = 2 * card * (n as i64 - card);
                base + s.iter().map(|i| modular[i]).sum::<i64>()
            })
            .collect();
        let amplitude = 2 * k as i64;
        for _ in 0..6.min(size / 4) {
            let mask = rng.gen_range(1..size);
            let noise = rng.gen_range(-amplitude..=amplitude);
            values[mask] += noise;
        }
        values[0] = 0;
        let f = SetFunction::from_ints(n, k, &values)?;
        if is_k_distant(&f, k)?.holds() {
            return Ok(f);
        }
    }
    Err(Error::RejectionBudgetExhausted { tries: REJECTION_BUDGET })
}

fn gen_cut(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<SetFunction, Error> {
    // 2*kc - 1 <= k, so the declared target k is honest.
    let kc = ((k + 1) / 2).clamp(1, n - 1);
    let edge_count = n * (n - 1) / 2;
    for _ in 0..200 {
        let mut weights: Vec<Rational> =
            (0..edge_count).map(|_| rat(rng.gen_range(1..=4))).collect();
        if kc > 1 {
            for _ in 0..rng.gen_range(0..=2) {
                let e = rng.gen_range(0..edge_count);
                weights[e] = rat(rng.gen_range(-2..=-1));
            }
        }
        let g = WeightedCompleteGraph::new(n, weights)?;
        if check_cut_condition(&g, kc).is_ok() {
            return gen_cut_function(&g, kc)?.with_declared_k(k);
        }
    }
    // All-positive weights always satisfy the condition.
    let weights: Vec<Rational> = (0..edge_count).map(|_| rat(rng.gen_range(1..=4))).collect();
    let g = WeightedCompleteGraph::new(n, weights)?;
    gen_cut_function(&g, kc)?.with_declared_k(k)
}

fn gen_minrank(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<SetFunction, Error> {
    // A sparse paving pair gives a 4-distant minimum; below k = 4 fall
    // back to a uniform pair, whose minimum rank is plainly submodular.
    let rmin = if k >= 4 {
        let r = (n / 2).clamp(2, n - 1);
        let m1 = random_sparse_paving(n, r, rng)?;
        let m2 = random_sparse_paving(n, r, rng)?;
        min_rank_function(&m1, &m2, k)?
    } else {
        let r = rng.gen_range(1..n);
        let m = Matroid::uniform(n, r)?;
        min_rank_function(&m, &m, k)?
    };
    let modular: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=1))).collect();
    let shifted = subtract_modular(&rmin.to_dense()?, &modular)?;
    let (f0, _) = normalize(&shifted);
    Ok(f0)
}

/// A random rank-r sparse paving matroid on n elements: a handful of
/// random r-sets kept only when pairwise intersections stay within r-2.
pub fn random_sparse_paving(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Result<Matroid, Error> {
    let mut forbidden: Vec<Subset> = Vec::new();
    let want = rng.gen_range(1..=3usize);
    'outer: for _ in 0..40 {
        if forbidden.len() >= want {
            break;
        }
        let mut set = Subset::EMPTY;
        while set.len() < r {
            set = set.insert(rng.gen_range(0..n));
        }
        for existing in &forbidden {
            if existing.intersection(set).len() + 2 > r {
                continue 'outer;
            }
        }
        forbidden.push(set);
    }
    Matroid::sparse_paving(n, r, forbidden)
}

fn gen_clique(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<SetFunction, Error> {
    let kc = (k - 1) / 2; // 2*kc + 1 <= k <= n
    let graph = random_graph(n, rng);
    gen_clique_function(&graph, kc)?.with_declared_k(k)
}

/// Erdos-Renyi-style graph with edge probability 1/2.
pub fn random_graph(nv: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 1..=nv {
        for b in (a + 1)..=nv {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(nv, &edges).expect("generated edges are valid")
}

fn gen_indicator_shifted(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<SetFunction, Error> {
    let base = indicator(Subset::full(n), n)?;
    let scaled = scale(&base, &rat(rng.gen_range(1..=3)))?;
    let shifted = shift_nonempty(&scaled, &rat(rng.gen_range(0..=2)))?;
    let modular: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
    let f = subtract_modular(&shifted, &modular)?;
    debug_assert!(f.is_normalized());
    f.with_declared_k(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_strategies_pass_the_checker_on_small_instances() {
        for strategy in Strategy::ALL {
            for (n, k) in [(4, 3), (5, 3), (6, 4), (5, 5)] {
                if !strategy.supports(n, k) {
                    continue;
                }
                let f = gen_random_kdistant(n, k, 7, strategy).unwrap();
                assert_eq!(f.n(), n);
                assert_eq!(f.declared_k(), k);
                assert!(
                    is_k_distant(&f, k).unwrap().holds(),
                    "{} failed the gate at n={n}, k={k}",
                    strategy.name()
                );
            }
        }
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        for strategy in Strategy::ALL {
            let a = gen_random_kdistant(5, 3, 42, strategy);
            let b = gen_random_kdistant(5, 3, 42, strategy);
            match (a, b) {
                (Ok(fa), Ok(fb)) => {
                    for s in crate::subset::all_subsets(5) {
                        assert_eq!(fa.eval(s), fb.eval(s), "{}", strategy.name());
                    }
                }
                (Err(_), Err(_)) => {}
                _ => panic!("nondeterministic outcome for {}", strategy.name()),
            }
        }
    }

    #[test]
    fn unsupported_combinations_are_rejected() {
        assert!(matches!(
            gen_random_kdistant(8, 3, 1, Strategy::Rejection),
            Err(Error::UnsupportedStrategy(_))
        ));
        assert!(matches!(
            gen_random_kdistant(6, 2, 1, Strategy::Clique),
            Err(Error::UnsupportedStrategy(_))
        ));
        assert!(matches!(
            gen_random_kdistant(4, 5, 1, Strategy::IndicatorShifted),
            Err(Error::UnsupportedStrategy(_))
        ));
    }

    #[test]
    fn clique_strategy_produces_clique_instances() {
        let f = gen_random_kdistant(7, 7, 2, Strategy::Clique).unwrap();
        assert_eq!(f.declared_k(), 7);
        assert!(is_k_distant(&f, 7).unwrap().holds());
    }
}
