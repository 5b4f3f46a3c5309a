//! Matroids given by rank oracles, the minimum rank function of a pair,
//! and weighted matroid intersection through the minimum rank oracle.
//!
//! The intersection solver only ever evaluates min(r1, r2): it runs a
//! cutting-plane loop whose separation step minimizes the integer-scaled
//! function r_min - x over all subsets with the distance-k minimizer.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::minimizer::{minimize, MinimizeOptions};
use crate::ratlp::{solve_standard_form, LpStatus, StandardFormLp};
use crate::rational::{lcm_denominator, rat, Rational};
use crate::set_function::SetFunction;
use crate::subset::{all_subsets, GroundSet, Subset};

/// Matroid validity (and the near-uniform hypothesis) is checked
/// exhaustively at construction up to this ground-set size.
pub const MATROID_CHECK_GUARD: usize = 14;

#[derive(Clone, Debug)]
enum MatroidKind {
    Uniform,
    SparsePaving { forbidden: Vec<Subset> },
    NearUniform { k: usize, ranks: Arc<Vec<usize>> },
}

/// A matroid on {1..n} represented by its rank oracle.
#[derive(Clone, Debug)]
pub struct Matroid {
    n: usize,
    r: usize,
    kind: MatroidKind,
}

impl Matroid {
    /// U_{r,n}: rank(X) = min(|X|, r).
    pub fn uniform(n: usize, r: usize) -> Result<Matroid, Error> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::InvalidMatroid(format!("uniform with n={n}, r={r}")));
        }
        Ok(Matroid { n, r, kind: MatroidKind::Uniform })
    }

    /// Sparse paving matroid of rank r: every r-set is a basis except the
    /// listed ones, which must pairwise intersect in at most r-2 elements.
    pub fn sparse_paving(n: usize, r: usize, forbidden: Vec<Subset>) -> Result<Matroid, Error> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::InvalidMatroid(format!("sparse paving with n={n}, r={r}")));
        }
        for (i, a) in forbidden.iter().enumerate() {
            if a.len() != r {
                return Err(Error::InvalidMatroid(format!(
                    "forbidden set {a:?} does not have exactly {r} elements"
                )));
            }
            if !a.is_subset_of(Subset::full(n)) {
                return Err(Error::InvalidMatroid(format!("forbidden set {a:?} exceeds the ground set")));
            }
            for b in &forbidden[..i] {
                if *a == *b || a.intersection(*b).len() + 2 > r {
                    return Err(Error::InvalidMatroid(format!(
                        "forbidden sets {a:?} and {b:?} intersect in more than r-2 elements"
                    )));
                }
            }
        }
        let mut forbidden = forbidden;
        forbidden.sort_unstable();
        let m = Matroid { n, r, kind: MatroidKind::SparsePaving { forbidden } };
        m.validate_if_small()?;
        Ok(m)
    }

    /// Matroid from an explicit rank table, declared near-uniform with
    /// parameter k. The table is validated exhaustively, so the ground set
    /// must stay within [`MATROID_CHECK_GUARD`].
    pub fn near_uniform(n: usize, r: usize, k: usize, ranks: Vec<usize>) -> Result<Matroid, Error> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::InvalidMatroid(format!("near uniform with n={n}, r={r}")));
        }
        if n > MATROID_CHECK_GUARD {
            return Err(Error::InstanceTooLarge { n, guard: MATROID_CHECK_GUARD });
        }
        if ranks.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: ranks.len() });
        }
        if ranks[(Subset::full(n)).bits() as usize] != r {
            return Err(Error::InvalidMatroid("table rank of the full set differs from r".into()));
        }
        let m = Matroid { n, r, kind: MatroidKind::NearUniform { k, ranks: Arc::new(ranks) } };
        m.validate_if_small()?;
        m.check_near_uniform(k)?;
        Ok(m)
    }

    /// Truncation to a smaller rank; stays a matroid.
    pub fn truncate(&self, new_r: usize, declared_k: usize) -> Result<Matroid, Error> {
        if new_r == 0 || new_r > self.r {
            return Err(Error::InvalidMatroid(format!("truncation to rank {new_r}")));
        }
        if self.n > MATROID_CHECK_GUARD {
            return Err(Error::InstanceTooLarge { n: self.n, guard: MATROID_CHECK_GUARD });
        }
        let ranks: Vec<usize> = all_subsets(self.n)
            .map(|s| self.rank(s).min(new_r))
            .collect();
        Matroid::near_uniform(self.n, new_r, declared_k, ranks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank_of_ground_set(&self) -> usize {
        self.r
    }

    /// The declared near-uniformity parameter for table-backed matroids.
    pub fn declared_near_uniform_k(&self) -> Option<usize> {
        match &self.kind {
            MatroidKind::NearUniform { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn rank(&self, x: Subset) -> usize {
        match &self.kind {
            MatroidKind::Uniform => x.len().min(self.r),
            MatroidKind::SparsePaving { forbidden } => {
                if x.len() == self.r && forbidden.binary_search(&x).is_ok() {
                    self.r - 1
                } else {
                    x.len().min(self.r)
                }
            }
            MatroidKind::NearUniform { ranks, .. } => ranks[x.bits() as usize],
        }
    }

    pub fn is_independent(&self, x: Subset) -> bool {
        self.rank(x) == x.len()
    }

    /// Exhaustive rank-axiom check: monotone, unit increase, and locally
    /// submodular (which implies submodularity for integer-valued ranks).
    fn validate_if_small(&self) -> Result<(), Error> {
        if self.n > MATROID_CHECK_GUARD {
            return Ok(());
        }
        if self.rank(Subset::EMPTY) != 0 {
            return Err(Error::InvalidMatroid("rank of the empty set is not zero".into()));
        }
        for x in all_subsets(self.n) {
            let rx = self.rank(x);
            if rx > x.len() {
                return Err(Error::InvalidMatroid(format!("rank({x:?}) exceeds |{x:?}|")));
            }
            for e in 0..self.n {
                if x.contains(e) {
                    continue;
                }
                let rxe = self.rank(x.insert(e));
                if rxe < rx || rxe > rx + 1 {
                    return Err(Error::InvalidMatroid(format!(
                        "rank is not monotone with unit increase at {x:?} + element {}",
                        e + 1
                    )));
                }
                for g in (e + 1)..self.n {
                    if x.contains(g) {
                        continue;
                    }
                    let rxg = self.rank(x.insert(g));
                    let rxeg = self.rank(x.insert(e).insert(g));
                    if rxe + rxg < rxeg + rx {
                        return Err(Error::InvalidMatroid(format!(
                            "rank is not submodular at {x:?} with elements {} and {}",
                            e + 1,
                            g + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks r(X) = |X| for |X| <= r-k and r(X) = r for |X| >= r+k.
    pub fn check_near_uniform(&self, k: usize) -> Result<(), Error> {
        if self.n > MATROID_CHECK_GUARD {
            return Err(Error::InstanceTooLarge { n: self.n, guard: MATROID_CHECK_GUARD });
        }
        for x in all_subsets(self.n) {
            let rx = self.rank(x);
            if x.len() + k <= self.r && rx != x.len() {
                return Err(Error::HypothesisViolated { matroid: 0, set: x });
            }
            if x.len() >= self.r + k && rx != self.r {
                return Err(Error::HypothesisViolated { matroid: 0, set: x });
            }
        }
        Ok(())
    }
}

/// A matroid pair with equal rank, its minimum rank function, and the
/// near-uniformity parameter under which the pair was validated.
#[derive(Clone, Debug)]
pub struct MinRankInstance {
    pub m1: Matroid,
    pub m2: Matroid,
    /// min(r1, r2), declared 4k-distant submodular.
    pub rmin: SetFunction,
    pub k: usize,
}

/// Builds the minimum-rank instance after checking the hypothesis: both
/// matroids near-uniform with parameter k and equal ranks. The resulting
/// function is declared 4k-distant.
pub fn build_min_rank(m1: &Matroid, m2: &Matroid, k: usize) -> Result<MinRankInstance, Error> {
    if m1.n() != m2.n() {
        return Err(Error::DimensionMismatch { expected: m1.n(), got: m2.n() });
    }
    let n = m1.n();
    if m1.rank_of_ground_set() != m2.rank_of_ground_set() {
        return Err(Error::RankMismatch {
            r1: m1.rank_of_ground_set(),
            r2: m2.rank_of_ground_set(),
        });
    }
    if k == 0 || k > m1.rank_of_ground_set() {
        return Err(Error::InvalidMatroid(format!("near-uniform parameter k={k}")));
    }
    if 4 * k > n {
        return Err(Error::DistanceOutOfRange { k: 4 * k, n });
    }
    m1.check_near_uniform(k)?;
    m2.check_near_uniform(k)
        .map_err(|e| match e {
            Error::HypothesisViolated { set, .. } => Error::HypothesisViolated { matroid: 1, set },
            other => other,
        })?;
    let rmin = min_rank_function(m1, m2, 4 * k)?;
    Ok(MinRankInstance { m1: m1.clone(), m2: m2.clone(), rmin, k })
}

/// min(r1, r2) as a generator-backed set function with a declared
/// distance parameter.
pub fn min_rank_function(m1: &Matroid, m2: &Matroid, declared_k: usize) -> Result<SetFunction, Error> {
    let ground = GroundSet::new(m1.n())?;
    let a = m1.clone();
    let b = m2.clone();
    SetFunction::from_oracle(ground, declared_k, move |s| {
        rat(a.rank(s).min(b.rank(s)) as i64)
    })
}

/// Outcome of the weighted intersection solver.
#[derive(Clone, Debug)]
pub struct IntersectionResult {
    pub weight: i64,
    pub common_independent: Subset,
    pub x: Vec<Rational>,
    /// Constraint sets added by separation, in discovery order.
    pub cuts: Vec<Subset>,
    pub separation_calls: usize,
}

/// Maximum-weight common independent set through the minimum rank oracle.
///
/// Cutting-plane loop: solve the working relaxation exactly, separate by
/// minimizing the integer-scaled function r_min - x* with the distance-k
/// minimizer, add the violated set, repeat. Terminal vertices are 0/1 by
/// matroid-intersection integrality; anything else signals an invalid
/// matroid pair.
pub fn solve_weighted_matroid_intersection(
    inst: &MinRankInstance,
    w: &[i64],
) -> Result<IntersectionResult, Error> {
    let n = inst.m1.n();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let distance = 4 * inst.k;
    // Working constraints: singletons up front, cuts appended as found.
    let mut working: Vec<Subset> = (0..n).map(Subset::singleton).collect();
    let mut cuts = Vec::new();
    let mut separation_calls = 0usize;
    loop {
        let x = solve_working_relaxation(&inst.rmin, &working, w)?;

        // Separate: min over T of rmin(T) - x(T), scaled to integers.
        let scale_factor = Rational::from_integer(lcm_denominator(&x));
        let scaled_x: Vec<Rational> = x.iter().map(|v| v * &scale_factor).collect();
        let rmin = inst.rmin.clone();
        let sf = scale_factor.clone();
        let g = SetFunction::from_oracle(GroundSet::new(n)?, distance, move |s| {
            let mut acc = rmin.eval(s) * &sf;
            for i in s.iter() {
                acc -= &scaled_x[i];
            }
            acc
        })?;
        separation_calls += 1;
        let res = minimize(&g, distance, &MinimizeOptions::default())?;
        if !res.min_value.is_negative() {
            // x is feasible for every subset constraint: terminal.
            let mut support = Subset::EMPTY;
            for (i, v) in x.iter().enumerate() {
                if v.is_one() {
                    // Independence is downward closed, so elements of
                    // nonpositive weight can be dropped at no cost.
                    if w[i] > 0 {
                        support = support.insert(i);
                    }
                } else if !v.is_zero() {
                    return Err(Error::InternalConsistency(format!(
                        "terminal vertex is not integral at element {}",
                        i + 1
                    )));
                }
            }
            if !inst.m1.is_independent(support) || !inst.m2.is_independent(support) {
                return Err(Error::InternalConsistency(
                    "terminal support is not independent in both matroids".into(),
                ));
            }
            let weight: i64 = support.iter().map(|i| w[i]).sum();
            return Ok(IntersectionResult {
                weight,
                common_independent: support,
                x,
                cuts,
                separation_calls,
            });
        }
        let t = res.argmin;
        if working.contains(&t) {
            return Err(Error::InternalConsistency(format!(
                "separation returned the already-present constraint {t:?}"
            )));
        }
        working.push(t);
        cuts.push(t);
    }
}

/// Solves max w'x s.t. x >= 0 and x(T) <= rmin(T) for T in the working
/// set, returning the optimal vertex. Goes through the dual standard form
/// so the vertex is read off the simplex multipliers.
fn solve_working_relaxation(
    rmin: &SetFunction,
    working: &[Subset],
    w: &[i64],
) -> Result<Vec<Rational>, Error> {
    let n = w.len();
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(working.len() + n);
    let mut costs: Vec<Rational> = Vec::with_capacity(working.len() + n);
    for t in working {
        columns.push(
            (0..n)
                .map(|i| if t.contains(i) { Rational::one() } else { Rational::zero() })
                .collect(),
        );
        costs.push(rmin.eval(*t));
    }
    for i in 0..n {
        // Surplus columns for A'y >= w.
        let mut col = vec![Rational::zero(); n];
        col[i] = -Rational::one();
        columns.push(col);
        costs.push(Rational::zero());
    }
    let b: Vec<Rational> = w.iter().map(|&v| rat(v)).collect();
    let lp = StandardFormLp::new(columns, b, costs)?;
    let sol = solve_standard_form(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::InternalConsistency(format!(
            "working relaxation ended {:?} (it is always feasible and bounded)",
            sol.status
        )));
    }
    Ok(sol.multipliers)
}
