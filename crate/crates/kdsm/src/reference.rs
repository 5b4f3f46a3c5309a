//! Brute-force reference oracles.
//!
//! These anchor the fast solvers in tests and behind `--verify` flags:
//! the full-constraint LP over all 2^n subsets, exhaustive set-function
//! minimization, and exhaustive common-independent-set search. They share
//! the exact simplex engine, so a disagreement with the fast path isolates
//! family/perturbation bugs rather than arithmetic ones.

use crate::apps::matroid::Matroid;
use crate::error::Error;
use crate::family::sort_elements;
use crate::ratlp::{solve_with_starting_basis, LpStatus, StandardFormLp};
use crate::rational::{rat, Rational};
use crate::set_function::SetFunction;
use crate::subset::{all_subsets, Subset};

/// Size guard for the full-constraint LP (2^n columns through the simplex).
pub const FULL_LP_GUARD: usize = 12;

/// Size guard for exhaustive scans.
pub const SCAN_GUARD: usize = 24;

/// Optimum of the unrestricted program max w'x over P(f).
#[derive(Clone, Debug)]
pub struct FullLpOracleResult {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Constraints tight at the reported vertex (the optimal dual basis).
    pub tight: Vec<Subset>,
}

/// Solves max w'x over all 2^n constraints x(T) <= f(T) exactly.
///
/// Requires a normalized f (so the empty-set constraint is not already
/// infeasible) and n at most [`FULL_LP_GUARD`].
pub fn bruteforce_maximize_full(
    f: &SetFunction,
    w: &[Rational],
) -> Result<FullLpOracleResult, Error> {
    let n = f.n();
    if n > FULL_LP_GUARD {
        return Err(Error::InstanceTooLarge { n, guard: FULL_LP_GUARD });
    }
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let ordering = sort_elements(w)?; // rejects negative weights
    if !f.is_normalized() {
        return Err(Error::NotNormalized);
    }

    // Solve the dual: min sum y_T f(T) over all columns chi_T with
    // sum y_T chi_T = w, y >= 0. The primal vertex falls out of the
    // multipliers of the optimal basis. Columns are indexed by mask, so
    // the always-feasible chain-prefix basis is just the prefix masks.
    let subsets: Vec<Subset> = all_subsets(n).collect();
    let columns: Vec<Vec<Rational>> = subsets
        .iter()
        .map(|t| {
            (0..n)
                .map(|i| if t.contains(i) { rat(1) } else { rat(0) })
                .collect()
        })
        .collect();
    let c: Vec<Rational> = subsets.iter().map(|t| f.eval(*t)).collect();
    let lp = StandardFormLp::new(columns, w.to_vec(), c)?;
    let chain: Vec<usize> = ordering.prefixes()[1..]
        .iter()
        .map(|p| p.bits() as usize)
        .collect();
    let sol = solve_with_starting_basis(&lp, &chain)?;
    if sol.status != LpStatus::Optimal {
        // The chain decomposition of any sorted w >= 0 is always feasible
        // and f normalized rules out negative rays, so this cannot happen
        // on well-formed input.
        return Err(Error::InternalConsistency(format!(
            "full-constraint dual ended {:?}",
            sol.status
        )));
    }
    let x = sol.multipliers.clone();
    let tight: Vec<Subset> = sol
        .basis
        .iter()
        .filter(|&&j| j < subsets.len())
        .map(|&j| subsets[j])
        .collect();
    for t in &subsets {
        let xt: Rational = t.iter().map(|i| x[i].clone()).sum();
        if xt > f.eval(*t) {
            return Err(Error::InternalConsistency(format!(
                "recovered point violates x({t:?}) <= f({t:?})"
            )));
        }
    }
    let value: Rational = w.iter().zip(&x).map(|(a, b)| a * b).sum();
    if value != sol.objective {
        return Err(Error::InternalConsistency(
            "strong duality failed in the reference oracle".into(),
        ));
    }
    Ok(FullLpOracleResult { value, x, tight })
}

/// Exhaustive minimization; ties broken by smallest mask.
pub fn bruteforce_minimize(f: &SetFunction) -> Result<(Rational, Subset), Error> {
    let n = f.n();
    if n > SCAN_GUARD {
        return Err(Error::InstanceTooLarge { n, guard: SCAN_GUARD });
    }
    let mut best_val = f.eval(Subset::EMPTY);
    let mut best_set = Subset::EMPTY;
    for s in all_subsets(n) {
        let v = f.eval(s);
        if v < best_val {
            best_val = v;
            best_set = s;
        }
    }
    Ok((best_val, best_set))
}

/// Exhaustive maximum-weight common independent set; ties broken by
/// smallest mask. The empty set always competes with weight zero.
pub fn bruteforce_common_independent(
    m1: &Matroid,
    m2: &Matroid,
    w: &[i64],
) -> Result<(i64, Subset), Error> {
    let n = m1.n();
    if n != m2.n() {
        return Err(Error::DimensionMismatch { expected: n, got: m2.n() });
    }
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    if n > 8 {
        return Err(Error::InstanceTooLarge { n, guard: 8 });
    }
    let mut best = (0i64, Subset::EMPTY);
    for s in all_subsets(n) {
        if !m1.is_independent(s) || !m2.is_independent(s) {
            continue;
        }
        let weight: i64 = s.iter().map(|i| w[i]).sum();
        if weight > best.0 {
            best = (weight, s);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_function::{indicator, subtract_modular, uniform_rank, SetFunction};

    #[test]
    fn zero_function_maximum_is_zero() {
        let f = SetFunction::from_ints(2, 2, &[0, 0, 0, 0]).unwrap();
        let res = bruteforce_maximize_full(&f, &[rat(1), rat(1)]).unwrap();
        assert_eq!(res.value, rat(0));
    }

    #[test]
    fn uniform_rank_maximum_matches_greedy_value() {
        let f = uniform_rank(3, 2).unwrap();
        let res = bruteforce_maximize_full(&f, &[rat(3), rat(2), rat(1)]).unwrap();
        assert_eq!(res.value, rat(5));
    }

    #[test]
    fn zero_weights_give_zero_value() {
        let f = uniform_rank(3, 2).unwrap();
        let res = bruteforce_maximize_full(&f, &[rat(0), rat(0), rat(0)]).unwrap();
        assert_eq!(res.value, rat(0));
    }

    #[test]
    fn minimize_examples() {
        let f = SetFunction::from_ints(3, 2, &[0; 8]).unwrap();
        assert_eq!(bruteforce_minimize(&f).unwrap(), (rat(0), Subset::EMPTY));

        let f = indicator(Subset(0b011), 3).unwrap();
        assert_eq!(bruteforce_minimize(&f).unwrap(), (rat(-1), Subset(0b011)));

        let f = uniform_rank(3, 2).unwrap();
        let g = subtract_modular(&f, &[rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(bruteforce_minimize(&g).unwrap(), (rat(-1), Subset(0b111)));
    }
}
