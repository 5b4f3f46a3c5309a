//! Set functions on small ground sets and the distance-k submodularity
//! toolkit: verification, normalization, value bounds, and the shift
//! transforms used by the separation machinery.
//!
//! A function is k-distant submodular when
//! `f(X) + f(Y) >= f(X | Y) + f(X & Y)` holds for every pair with
//! `|X ^ Y| >= k`. Values of 1 and 2 for k both recover ordinary
//! submodularity.

use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{rat, Rational};
use crate::subset::{all_subsets, subsets_up_to_size, GroundSet, Subset};

/// Default size guard for exhaustive pair enumeration.
pub const EXHAUSTIVE_GUARD: usize = 14;

/// Dense tables are required up to this size; beyond it only oracle
/// backing is practical.
pub const DENSE_LIMIT: usize = 20;

type OracleFn = dyn Fn(Subset) -> Rational + Send + Sync;

enum Backing {
    /// Table of 2^n values indexed by mask.
    Dense(Arc<Vec<Rational>>),
    /// Evaluator with a bounded, internally synchronized memo table.
    Oracle {
        eval: Arc<OracleFn>,
        memo: Mutex<std::collections::HashMap<u64, Rational>>,
        memo_budget: usize,
    },
}

impl Clone for Backing {
    fn clone(&self) -> Self {
        match self {
            Backing::Dense(v) => Backing::Dense(v.clone()),
            Backing::Oracle { eval, memo, memo_budget } => Backing::Oracle {
                eval: eval.clone(),
                memo: Mutex::new(memo.lock().unwrap().clone()),
                memo_budget: *memo_budget,
            },
        }
    }
}

/// A set function f: 2^S -> Q with a declared distance parameter k.
///
/// Values are immutable after construction; evaluation is total and
/// deterministic on all 2^n masks. The declared k is a promise used by the
/// solvers, not a verified fact — see [`is_k_distant`] for verification.
#[derive(Clone)]
pub struct SetFunction {
    ground: GroundSet,
    k: usize,
    backing: Backing,
}

impl std::fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SetFunction")
            .field("n", &self.ground.len())
            .field("k", &self.k)
            .field(
                "backing",
                &match self.backing {
                    Backing::Dense(_) => "dense",
                    Backing::Oracle { .. } => "oracle",
                },
            )
            .finish()
    }
}

impl SetFunction {
    /// Dense-table function; `values[mask]` is f of that mask.
    pub fn from_dense(ground: GroundSet, k: usize, values: Vec<Rational>) -> Result<Self, Error> {
        let n = ground.len();
        check_k(k, n)?;
        if n > DENSE_LIMIT {
            return Err(Error::InstanceTooLarge { n, guard: DENSE_LIMIT });
        }
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: values.len() });
        }
        Ok(SetFunction { ground, k, backing: Backing::Dense(Arc::new(values)) })
    }

    /// Generator-backed function with the default memo budget.
    pub fn from_oracle<F>(ground: GroundSet, k: usize, eval: F) -> Result<Self, Error>
    where
        F: Fn(Subset) -> Rational + Send + Sync + 'static,
    {
        Self::from_oracle_with_budget(ground, k, eval, 1 << 16)
    }

    /// Generator-backed function with an explicit memoization cap.
    pub fn from_oracle_with_budget<F>(
        ground: GroundSet,
        k: usize,
        eval: F,
        memo_budget: usize,
    ) -> Result<Self, Error>
    where
        F: Fn(Subset) -> Rational + Send + Sync + 'static,
    {
        check_k(k, ground.len())?;
        Ok(SetFunction {
            ground,
            k,
            backing: Backing::Oracle {
                eval: Arc::new(eval),
                memo: Mutex::new(std::collections::HashMap::new()),
                memo_budget,
            },
        })
    }

    /// Convenience: dense function from integer values on an unlabelled set.
    pub fn from_ints(n: usize, k: usize, values: &[i64]) -> Result<Self, Error> {
        Self::from_dense(GroundSet::new(n)?, k, values.iter().map(|&v| rat(v)).collect())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    /// The declared distance parameter.
    pub fn declared_k(&self) -> usize {
        self.k
    }

    /// Same function with a different declared distance parameter.
    pub fn with_declared_k(&self, k: usize) -> Result<Self, Error> {
        check_k(k, self.n())?;
        let mut out = self.clone();
        out.k = k;
        Ok(out)
    }

    /// Evaluates f on a subset.
    pub fn eval(&self, s: Subset) -> Rational {
        match &self.backing {
            Backing::Dense(v) => v[s.bits() as usize].clone(),
            Backing::Oracle { eval, memo, memo_budget } => {
                if let Some(v) = memo.lock().unwrap().get(&s.bits()) {
                    return v.clone();
                }
                let v = eval(s);
                let mut guard = memo.lock().unwrap();
                if guard.len() < *memo_budget {
                    guard.insert(s.bits(), v.clone());
                }
                v
            }
        }
    }

    /// Direct access to the dense table, if this function has one.
    pub fn dense_values(&self) -> Option<&[Rational]> {
        match &self.backing {
            Backing::Dense(v) => Some(v),
            Backing::Oracle { .. } => None,
        }
    }

    /// Materializes the function into a dense table (n <= DENSE_LIMIT).
    pub fn to_dense(&self) -> Result<Self, Error> {
        if self.n() > DENSE_LIMIT {
            return Err(Error::InstanceTooLarge { n: self.n(), guard: DENSE_LIMIT });
        }
        match &self.backing {
            Backing::Dense(_) => Ok(self.clone()),
            Backing::Oracle { .. } => {
                let values = all_subsets(self.n()).map(|s| self.eval(s)).collect();
                SetFunction::from_dense(self.ground.clone(), self.k, values)
            }
        }
    }

    /// True when f(empty) = 0.
    pub fn is_normalized(&self) -> bool {
        self.eval(Subset::EMPTY).is_zero()
    }

    /// Integer fast path: the whole table as i128s when every value is an
    /// integer that fits. Exact, only a representation change.
    fn as_i128_table(&self) -> Option<Vec<i128>> {
        let values = self.dense_values()?;
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            if !v.is_integer() {
                return None;
            }
            out.push(i128::try_from(v.numer()).ok()?);
        }
        Some(out)
    }
}

fn check_k(k: usize, n: usize) -> Result<(), Error> {
    if k < 2 || k > n {
        return Err(Error::DistanceOutOfRange { k, n });
    }
    Ok(())
}

/// Outcome of exhaustive k-distance verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KDistantVerdict {
    Holds,
    /// The lexicographically smallest violating pair (by mask, X < Y).
    Violation { x: Subset, y: Subset },
}

impl KDistantVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, KDistantVerdict::Holds)
    }
}

/// Checks the k-distant submodular inequality over every unordered pair
/// with `|X ^ Y| >= k`, under the default size guard.
pub fn is_k_distant(f: &SetFunction, k: usize) -> Result<KDistantVerdict, Error> {
    is_k_distant_with_guard(f, k, EXHAUSTIVE_GUARD)
}

/// As [`is_k_distant`], with an explicit size guard override.
pub fn is_k_distant_with_guard(
    f: &SetFunction,
    k: usize,
    guard: usize,
) -> Result<KDistantVerdict, Error> {
    let n = f.n();
    if k < 2 {
        return Err(Error::DistanceOutOfRange { k, n });
    }
    if n > guard {
        return Err(Error::InstanceTooLarge { n, guard });
    }
    if let Some(table) = f.as_i128_table() {
        return Ok(check_pairs(n, k, |s| table[s.bits() as usize]));
    }
    let dense = f.to_dense()?;
    let values = dense.dense_values().expect("dense after materialization");
    Ok(check_pairs(n, k, |s| values[s.bits() as usize].clone()))
}

fn check_pairs<T, G>(n: usize, k: usize, value: G) -> KDistantVerdict
where
    T: std::ops::Add<Output = T> + PartialOrd,
    G: Fn(Subset) -> T,
{
    let size = 1u64 << n;
    // Ordered pairs x < y only; the inequality is symmetric. Scanning in
    // mask order makes the reported violation deterministic.
    for x in 0..size {
        let sx = Subset(x);
        for y in (x + 1)..size {
            let sy = Subset(y);
            if sx.symmetric_difference(sy).len() < k {
                continue;
            }
            let lhs = value(sx) + value(sy);
            let rhs = value(sx.union(sy)) + value(sx.intersection(sy));
            if lhs < rhs {
                return KDistantVerdict::Violation { x: sx, y: sy };
            }
        }
    }
    KDistantVerdict::Holds
}

/// Subtracts f(empty) everywhere; returns the normalized function and the
/// offset needed to undo the shift.
pub fn normalize(f: &SetFunction) -> (SetFunction, Rational) {
    let offset = f.eval(Subset::EMPTY);
    if offset.is_zero() {
        return (f.clone(), offset);
    }
    (add_constant(f, &(-offset.clone())), offset)
}

/// Adds a constant to every value (the inverse of [`normalize`]).
pub fn add_constant(f: &SetFunction, c: &Rational) -> SetFunction {
    map_function(f, {
        let c = c.clone();
        move |_, v| v + &c
    })
}

/// Bounds on the values of a normalized k-distant function, derived from
/// the small-set sum M = sum over |T| <= k of |f(T)|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueBounds {
    /// Sum of |f(T)| over all T with |T| <= k.
    pub small_set_sum: Rational,
    /// f(S) - M; no value of f lies below this.
    pub lower: Rational,
    /// M; no value of f lies above this.
    pub upper: Rational,
    /// max(M, |f(S) - M|): a bound on |f| over all subsets.
    pub abs_bound: Rational,
}

/// Computes the value bounds for a normalized function; requires k <= n.
///
/// The bounds are guaranteed to contain every value of f whenever f really
/// is k-distant submodular.
pub fn value_bounds(f: &SetFunction, k: usize) -> Result<ValueBounds, Error> {
    let n = f.n();
    check_k(k, n)?;
    if !f.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut m = Rational::zero();
    for t in subsets_up_to_size(n, k) {
        m += f.eval(t).abs();
    }
    let f_full = f.eval(f.ground().full_set());
    let lower = &f_full - &m;
    let abs_bound = m.clone().max(lower.abs());
    Ok(ValueBounds { lower, upper: m.clone(), abs_bound, small_set_sum: m })
}

/// Adds `c >= 0` to every value except f(empty).
///
/// Preserves k-distance: unions and intersections gain at most as much as
/// the left side (the only asymmetric case is a disjoint pair, where the
/// left side gains 2c and the right side at most c).
pub fn shift_nonempty(f: &SetFunction, c: &Rational) -> Result<SetFunction, Error> {
    if c.is_negative() {
        return Err(Error::NegativeShift);
    }
    if !f.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let c = c.clone();
    Ok(map_function(f, move |s, v| if s.is_empty() { v } else { v + &c }))
}

/// Subtracts the modular function x(T) = sum of x over T.
pub fn subtract_modular(f: &SetFunction, x: &[Rational]) -> Result<SetFunction, Error> {
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: x.len() });
    }
    let x = x.to_vec();
    Ok(map_function(f, move |s, v| {
        let mut out = v;
        for i in s.iter() {
            out -= &x[i];
        }
        out
    }))
}

/// Multiplies every value by a positive integer scale.
pub fn scale(f: &SetFunction, factor: &Rational) -> Result<SetFunction, Error> {
    if !factor.is_positive() {
        return Err(Error::ZeroValueBound);
    }
    let factor = factor.clone();
    Ok(map_function(f, move |_, v| v * &factor))
}

fn map_function<G>(f: &SetFunction, map: G) -> SetFunction
where
    G: Fn(Subset, Rational) -> Rational + Send + Sync + 'static,
{
    match &f.backing {
        Backing::Dense(values) => {
            let mapped = values
                .iter()
                .enumerate()
                .map(|(mask, v)| map(Subset(mask as u64), v.clone()))
                .collect();
            SetFunction {
                ground: f.ground.clone(),
                k: f.k,
                backing: Backing::Dense(Arc::new(mapped)),
            }
        }
        Backing::Oracle { memo_budget, .. } => {
            let inner = f.clone();
            let budget = *memo_budget;
            SetFunction {
                ground: f.ground.clone(),
                k: f.k,
                backing: Backing::Oracle {
                    eval: Arc::new(move |s| map(s, inner.eval(s))),
                    memo: Mutex::new(std::collections::HashMap::new()),
                    memo_budget: budget,
                },
            }
        }
    }
}

/// The indicator-style function that is -1 on T and 0 elsewhere.
pub fn indicator(t: Subset, n: usize) -> Result<SetFunction, Error> {
    let ground = GroundSet::new(n)?;
    if !t.is_subset_of(ground.full_set()) {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let values = all_subsets(n)
        .map(|s| if s == t { rat(-1) } else { rat(0) })
        .collect();
    SetFunction::from_dense(ground, 2, values)
}

/// Rank function of the uniform matroid U_{r,n} as a dense set function.
pub fn uniform_rank(n: usize, r: usize) -> Result<SetFunction, Error> {
    let ground = GroundSet::new(n)?;
    let values = all_subsets(n).map(|s| rat(s.len().min(r) as i64)).collect();
    SetFunction::from_dense(ground, 2, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn zero_fn(n: usize) -> SetFunction {
        SetFunction::from_ints(n, 2, &vec![0; 1 << n]).unwrap()
    }

    #[test]
    fn zero_function_is_two_distant() {
        let f = zero_fn(3);
        assert_eq!(is_k_distant(&f, 2).unwrap(), KDistantVerdict::Holds);
    }

    #[test]
    fn proper_indicator_violates_at_distance_two_and_three() {
        // f is -1 exactly on {a,b} inside {a,b,c}. The first violating pair
        // in mask order is ({a,b}, {c}): -1 + 0 < f(S) + f(empty) = 0.
        let f = indicator(Subset(0b011), 3).unwrap();
        assert_eq!(
            is_k_distant(&f, 2).unwrap(),
            KDistantVerdict::Violation { x: Subset(0b011), y: Subset(0b100) }
        );
        assert_eq!(
            is_k_distant(&f, 3).unwrap(),
            KDistantVerdict::Violation { x: Subset(0b011), y: Subset(0b100) }
        );
    }

    #[test]
    fn uniform_matroid_rank_is_submodular() {
        let f = uniform_rank(3, 2).unwrap();
        assert!(is_k_distant(&f, 2).unwrap().holds());
    }

    #[test]
    fn guard_rejects_large_instances() {
        let f = zero_fn(4);
        assert_eq!(
            is_k_distant_with_guard(&f, 2, 3),
            Err(Error::InstanceTooLarge { n: 4, guard: 3 })
        );
    }

    #[test]
    fn normalize_constant_function() {
        let f = SetFunction::from_ints(2, 2, &[5, 5, 5, 5]).unwrap();
        let (f0, offset) = normalize(&f);
        assert_eq!(offset, rat(5));
        assert!(all_subsets(2).all(|s| f0.eval(s).is_zero()));
    }

    #[test]
    fn normalize_is_identity_on_normalized_input() {
        let f = SetFunction::from_ints(2, 2, &[0, 1, 2, 3]).unwrap();
        let (f0, offset) = normalize(&f);
        assert_eq!(offset, rat(0));
        assert!(all_subsets(2).all(|s| f0.eval(s) == f.eval(s)));
    }

    #[test]
    fn normalize_shifted_full_indicator() {
        // f_S + 3 normalizes back to f_S with offset 3.
        let base = indicator(Subset::full(3), 3).unwrap();
        let f = add_constant(&base, &rat(3));
        let (f0, offset) = normalize(&f);
        assert_eq!(offset, rat(3));
        assert_eq!(f0.eval(Subset::full(3)), rat(-1));
        assert_eq!(f0.eval(Subset(0b001)), rat(0));
        // Round trip restores f exactly.
        let back = add_constant(&f0, &offset);
        assert!(all_subsets(3).all(|s| back.eval(s) == f.eval(s)));
    }

    #[test]
    fn bounds_for_full_indicator() {
        let f = indicator(Subset::full(3), 3).unwrap();
        let b = value_bounds(&f, 2).unwrap();
        assert_eq!(b.small_set_sum, rat(0));
        assert_eq!(b.lower, rat(-1));
        assert_eq!(b.upper, rat(0));
        assert_eq!(b.abs_bound, rat(1));
        // Exhaustive minimum attains the lower bound.
        let min = all_subsets(3).map(|s| f.eval(s)).min().unwrap();
        assert_eq!(min, b.lower);
    }

    #[test]
    fn bounds_for_zero_function() {
        let f = zero_fn(3);
        let b = value_bounds(&f, 3).unwrap();
        assert_eq!((b.small_set_sum, b.lower, b.upper), (rat(0), rat(0), rat(0)));
    }

    #[test]
    fn bounds_for_uniform_rank() {
        let f = uniform_rank(3, 2).unwrap();
        let b = value_bounds(&f, 2).unwrap();
        assert_eq!(b.small_set_sum, rat(9));
        assert_eq!(b.lower, rat(-7));
        assert_eq!(b.upper, rat(9));
        for s in all_subsets(3) {
            let v = f.eval(s);
            assert!(b.lower <= v && v <= b.upper);
        }
    }

    #[test]
    fn bounds_reject_k_above_n() {
        let f = zero_fn(3);
        assert!(matches!(value_bounds(&f, 4), Err(Error::DistanceOutOfRange { .. })));
    }

    #[test]
    fn nonempty_shift_examples() {
        let g = shift_nonempty(&zero_fn(3), &rat(1)).unwrap();
        assert_eq!(g.eval(Subset::EMPTY), rat(0));
        assert!(all_subsets(3).skip(1).all(|s| g.eval(s) == rat(1)));

        let f = indicator(Subset::full(3), 3).unwrap();
        let g = shift_nonempty(&f, &rat(1)).unwrap();
        assert_eq!(g.eval(Subset::full(3)), rat(0));
        let min = all_subsets(3).map(|s| g.eval(s)).min().unwrap();
        assert_eq!(min, rat(0));

        let g = shift_nonempty(&f, &ratio(1, 2)).unwrap();
        let min = all_subsets(3).map(|s| g.eval(s)).min().unwrap();
        assert_eq!(min, ratio(-1, 2));

        assert!(matches!(shift_nonempty(&f, &rat(-1)), Err(Error::NegativeShift)));
    }

    #[test]
    fn modular_subtraction_examples() {
        let f = uniform_rank(3, 2).unwrap();
        let g = subtract_modular(&f, &[rat(0), rat(0), rat(0)]).unwrap();
        assert!(all_subsets(3).all(|s| g.eval(s) == f.eval(s)));

        let g = subtract_modular(&f, &[rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(g.eval(Subset(0b001)), rat(0));
        assert_eq!(g.eval(Subset::full(3)), rat(-1));

        let g = subtract_modular(&zero_fn(3), &[rat(1), rat(0), rat(0)]).unwrap();
        assert_eq!(g.eval(Subset(0b001)), rat(-1));
        assert_eq!(g.eval(Subset(0b010)), rat(0));

        assert!(matches!(
            subtract_modular(&f, &[rat(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn oracle_backing_memoizes_and_matches_dense() {
        let ground = GroundSet::new(4).unwrap();
        let f = SetFunction::from_oracle(ground, 2, |s| rat(s.len() as i64)).unwrap();
        let d = f.to_dense().unwrap();
        for s in all_subsets(4) {
            assert_eq!(f.eval(s), d.eval(s));
        }
    }
}
