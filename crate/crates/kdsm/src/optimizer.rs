//! Linear maximization of w'x over P(f) for k-distant submodular f.
//!
//! The pipeline sorts elements by weight, perturbs tied weights by an
//! exactly computed epsilon so the order becomes strict, restricts the
//! dual to the constraint family of the ordering, solves it with the
//! exact simplex, and reads the primal vertex off the optimal basis. For
//! a genuinely k-distant function the vertex is feasible for all 2^n
//! constraints and optimal for the original weights; the returned dual
//! vector certifies the value exactly.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::family::{build_family, sort_elements, ConstraintFamily, ElementOrder};
use crate::ratlp::{
    primal_from_dual_basis, solve_with_starting_basis, LpStatus,
    StandardFormLp,
};
use crate::rational::{lcm_denominator, max_denominator, rat, Rational};
use crate::set_function::{normalize, scale, value_bounds, SetFunction};
use crate::subset::Subset;

/// The exact perturbation magnitude and the bounds it was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationParams {
    /// Bound on the denominators of the weight entries in lowest terms.
    pub weight_denominator_bound: BigUint,
    /// Bound on the absolute values of the function.
    pub value_bound: Rational,
    pub epsilon: Rational,
}

/// epsilon = 1/(4 n^2) * (1/n!)^3 * (1/Bw)^n * (1/Bf), exactly.
///
/// Errors when Bf = 0: the function is then identically zero by its value
/// bounds and callers handle that case directly.
pub fn perturbation_epsilon(n: usize, bw: &BigUint, bf: &Rational) -> Result<Rational, Error> {
    if bf.is_zero() {
        return Err(Error::ZeroValueBound);
    }
    debug_assert!(n >= 1 && !bw.is_zero());
    let mut factorial = BigInt::one();
    for i in 2..=n {
        factorial *= BigInt::from(i);
    }
    let mut denom = BigInt::from(4) * BigInt::from(n * n);
    denom *= factorial.pow(3);
    denom *= BigInt::from(bw.clone()).pow(n as u32);
    let base = Rational::new(BigInt::one(), denom);
    Ok(base / bf.abs())
}

/// Perturbation parameters for a weight vector and value bound.
pub fn perturbation_params(w: &[Rational], bf: &Rational) -> Result<PerturbationParams, Error> {
    let bw = max_denominator(w);
    let epsilon = perturbation_epsilon(w.len(), &bw, bf)?;
    Ok(PerturbationParams {
        weight_denominator_bound: bw,
        value_bound: bf.clone(),
        epsilon,
    })
}

/// Breaks weight ties along the ordering: position i (1-based) gains
/// eps * (n - i) exactly when its weight equals the next one. The result
/// is strictly decreasing along the ordering.
pub fn perturb_weights(
    w: &[Rational],
    ordering: &ElementOrder,
    eps: &Rational,
) -> Result<Vec<Rational>, Error> {
    let n = w.len();
    if ordering.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: ordering.n() });
    }
    let mut out = w.to_vec();
    for pos in 0..n.saturating_sub(1) {
        let here = ordering.element_at(pos);
        let next = ordering.element_at(pos + 1);
        debug_assert!(w[here] >= w[next], "weights not sorted along the ordering");
        if w[here] == w[next] {
            out[here] = &w[here] + eps * rat((n - pos - 1) as i64);
        }
    }
    for pos in 0..n.saturating_sub(1) {
        let here = ordering.element_at(pos);
        let next = ordering.element_at(pos + 1);
        if out[here] <= out[next] {
            return Err(Error::InternalConsistency(
                "perturbed weights are not strictly decreasing".into(),
            ));
        }
    }
    Ok(out)
}

/// Result of maximizing w'x over P(f).
#[derive(Clone, Debug)]
pub struct OptResult {
    /// The optimal vertex, one coordinate per element.
    pub x: Vec<Rational>,
    /// Dual certificate for the original weights: positive entries only,
    /// supported inside the constraint family.
    pub y: BTreeMap<Subset, Rational>,
    /// w'x = sum of y_T f(T), exactly.
    pub value: Rational,
    pub family: ConstraintFamily,
    pub perturbed_w: Vec<Rational>,
    pub lp_pivots: usize,
}

/// Maximizes w'x over P(f) = {x : x(T) <= f(T) for all T}.
///
/// `f` is normalized internally, so the optimum reported is the one for
/// f - f(empty); the declared distance parameter `k` is trusted, not
/// re-verified. When the declaration is wrong the exact certificate
/// identities usually cannot be satisfied and an internal-consistency
/// error surfaces instead of a silently wrong answer.
pub fn maximize_over_pf(f: &SetFunction, k: usize, w: &[Rational]) -> Result<OptResult, Error> {
    let n = f.n();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let (f0, _) = normalize(f);
    let (f_scaled, denom) = integer_scaled(&f0)?;
    let mut oracle = SupportOracle::with_scaled(f_scaled, k, denom)?;
    let eval = oracle.query(w)?;

    // Re-solve with the unperturbed weights for the certificate; its
    // support stays inside the family for any nonnegative w.
    let lp = oracle.assemble_lp(&eval.family, w.to_vec());
    let sol = solve_with_starting_basis(&lp, &eval.basis)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::InternalConsistency(format!(
            "certificate program ended {:?}",
            sol.status
        )));
    }
    let mut y = BTreeMap::new();
    for (j, member) in eval.family.members().iter().enumerate() {
        if sol.y[j].is_positive() {
            y.insert(*member, sol.y[j].clone());
        }
    }
    // Strong duality for the original weights ties the two solves together:
    // sum y_T f(T) must equal w'x*.
    let dual_value = &sol.objective / &oracle.denominator;
    if dual_value != eval.value {
        return Err(Error::InternalConsistency(
            "dual certificate does not match the primal value; \
             the declared distance parameter is likely invalid"
                .into(),
        ));
    }
    Ok(OptResult {
        x: eval.x,
        y,
        value: eval.value,
        family: eval.family,
        perturbed_w: eval.perturbed_w,
        lp_pivots: eval.pivots + sol.pivots,
    })
}

/// One oracle answer: the maximum value, a maximizing vertex, and the
/// support of an optimal dual solution.
#[derive(Clone, Debug)]
pub struct OracleEval {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Family members carrying positive dual weight in the perturbed solve.
    pub dual_support: Vec<Subset>,
    pub family: ConstraintFamily,
    pub perturbed_w: Vec<Rational>,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

/// Cached per-ordering constraint data: the LP matrix depends only on
/// the ordering and the costs only on f, so repeated queries that share
/// an ordering reuse both and warm-start from the last optimal basis.
struct CachedOrdering {
    family: ConstraintFamily,
    columns: Arc<Vec<Vec<Rational>>>,
    costs: Arc<Vec<Rational>>,
    basis: Option<Vec<usize>>,
}

/// Reusable evaluator of h(w) = max w'x over P(f) for a fixed normalized
/// function. Computes the value bound once and warm-starts the simplex
/// across queries that share an element ordering.
pub struct SupportOracle {
    f: SetFunction,
    k: usize,
    /// Positive integer by which the values were scaled to integers.
    denominator: Rational,
    value_bound: Rational,
    cache: HashMap<Vec<usize>, CachedOrdering>,
}

impl SupportOracle {
    /// Builds an oracle for a normalized function.
    pub fn new(f: &SetFunction, k: usize) -> Result<Self, Error> {
        if !f.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let (f_scaled, denom) = integer_scaled(f)?;
        Self::with_scaled(f_scaled, k, denom)
    }

    fn with_scaled(f: SetFunction, k: usize, denominator: Rational) -> Result<Self, Error> {
        let bounds = value_bounds(&f, k)?;
        // Using max(bound, 1) keeps the perturbation sound also when the
        // scaled bound is below one (f identically zero, say).
        let value_bound = bounds.abs_bound.max(Rational::one());
        Ok(SupportOracle { f, k, denominator, value_bound, cache: HashMap::new() })
    }

    pub(crate) fn assemble_lp(&self, family: &ConstraintFamily, b: Vec<Rational>) -> StandardFormLp {
        let (columns, costs) = self.family_matrix(family);
        StandardFormLp::from_shared(columns, b, costs)
            .expect("family matrix dimensions are consistent by construction")
    }

    fn family_matrix(
        &self,
        family: &ConstraintFamily,
    ) -> (Arc<Vec<Vec<Rational>>>, Arc<Vec<Rational>>) {
        if let Some(cached) = self.cache.get(family.ordering().perm()) {
            if cached.family.k() == family.k() {
                return (cached.columns.clone(), cached.costs.clone());
            }
        }
        let n = self.f.n();
        let columns: Vec<Vec<Rational>> = family
            .members()
            .iter()
            .map(|t| {
                (0..n)
                    .map(|i| if t.contains(i) { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        let costs: Vec<Rational> = family.members().iter().map(|t| self.f.eval(*t)).collect();
        (Arc::new(columns), Arc::new(costs))
    }

    /// Evaluates h(w) exactly and returns a maximizing vertex of P(f)
    /// together with the dual support.
    pub fn query(&mut self, w: &[Rational]) -> Result<OracleEval, Error> {
        let n = self.f.n();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
        let ordering = sort_elements(w)?;
        let bw = max_denominator(w);
        let eps = perturbation_epsilon(n, &bw, &self.value_bound)?;
        let w_eps = perturb_weights(w, &ordering, &eps)?;

        if !self.cache.contains_key(ordering.perm()) {
            if self.cache.len() >= 256 {
                self.cache.clear();
            }
            let family = build_family(&ordering, self.k)?;
            let (columns, costs) = self.family_matrix(&family);
            self.cache.insert(
                ordering.perm().to_vec(),
                CachedOrdering { family, columns, costs, basis: None },
            );
        }
        let cached = self.cache.get(ordering.perm()).expect("just inserted");
        let family = cached.family.clone();
        let lp = StandardFormLp::from_shared(
            cached.columns.clone(),
            w_eps.clone(),
            cached.costs.clone(),
        )?;
        // The chain-prefix basis is always primal feasible for weights
        // sorted along this ordering (the greedy decomposition), so even
        // a cold solve skips phase 1.
        let basis = match &cached.basis {
            Some(basis) => basis.clone(),
            None => chain_basis(&family),
        };
        let sol = solve_with_starting_basis(&lp, &basis)?;
        if sol.status != LpStatus::Optimal {
            // The chain decomposition of sorted nonnegative weights is
            // always feasible and normalization rules out negative rays.
            return Err(Error::InternalConsistency(format!(
                "support-restricted program ended {:?}",
                sol.status
            )));
        }
        if sol.basis.iter().any(|&j| j >= family.len()) {
            return Err(Error::InternalConsistency(
                "artificial column left in an optimal basis of a full-rank program".into(),
            ));
        }
        let x_scaled = primal_from_dual_basis(&family, &self.f, &sol.basis)?;
        debug_assert_eq!(x_scaled, sol.multipliers);
        debug_assert!(family.members().iter().all(|t| {
            let xt: Rational = t.iter().map(|i| x_scaled[i].clone()).sum();
            xt <= self.f.eval(*t)
        }));

        let x: Vec<Rational> = x_scaled.iter().map(|v| v / &self.denominator).collect();
        let value: Rational = w.iter().zip(&x).map(|(a, b)| a * b).sum();
        let dual_support: Vec<Subset> = family
            .members()
            .iter()
            .zip(&sol.y)
            .filter(|(_, yv)| yv.is_positive())
            .map(|(t, _)| *t)
            .collect();
        if let Some(cached) = self.cache.get_mut(ordering.perm()) {
            cached.basis = Some(sol.basis.clone());
        }
        Ok(OracleEval {
            x,
            value,
            dual_support,
            family,
            perturbed_w: w_eps,
            basis: sol.basis,
            pivots: sol.pivots,
        })
    }
}

/// Indices of the nonempty chain prefixes inside the sorted member list.
fn chain_basis(family: &ConstraintFamily) -> Vec<usize> {
    family
        .ordering()
        .prefixes()
        .iter()
        .skip(1)
        .map(|p| {
            family
                .members()
                .binary_search(p)
                .expect("prefix chain is always part of the family")
        })
        .collect()
}

/// Scales a normalized function to integer values. Dense tables are
/// scaled by the lcm of their denominators; oracle-backed functions must
/// already be integer-valued on every evaluated point.
fn integer_scaled(f0: &SetFunction) -> Result<(SetFunction, Rational), Error> {
    if let Some(values) = f0.dense_values() {
        let lcm = lcm_denominator(values);
        if lcm.is_one() {
            return Ok((f0.clone(), Rational::one()));
        }
        let factor = Rational::from_integer(lcm);
        return Ok((scale(f0, &factor)?, factor));
    }
    Ok((f0.clone(), Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::reference::bruteforce_maximize_full;
    use crate::set_function::{indicator, subtract_modular, uniform_rank};
    use crate::subset::all_subsets;

    #[test]
    fn epsilon_values() {
        // Independent re-derivation: build the four factors separately.
        let factors = |n: u32, bw: i64, bf: i64| {
            let f1 = ratio(1, 4 * (n * n) as i64);
            let fact: i64 = (1..=n as i64).product();
            let f2 = ratio(1, fact).pow(3);
            let f3 = ratio(1, bw).pow(n as i32);
            let f4 = ratio(1, bf);
            f1 * f2 * f3 * f4
        };
        let eps = perturbation_epsilon(2, &BigUint::from(1u32), &rat(1)).unwrap();
        assert_eq!(eps, ratio(1, 128));
        assert_eq!(eps, factors(2, 1, 1));

        let eps = perturbation_epsilon(3, &BigUint::from(2u32), &rat(5)).unwrap();
        assert_eq!(eps, ratio(1, 311040));
        assert_eq!(eps, factors(3, 2, 5));

        let eps = perturbation_epsilon(1, &BigUint::from(1u32), &rat(1)).unwrap();
        assert_eq!(eps, ratio(1, 4));

        assert!(matches!(
            perturbation_epsilon(3, &BigUint::from(1u32), &rat(0)),
            Err(Error::ZeroValueBound)
        ));
    }

    #[test]
    fn perturbation_cases() {
        let eps = ratio(1, 1000);
        let w = vec![rat(2), rat(2), rat(1)];
        let ord = sort_elements(&w).unwrap();
        let we = perturb_weights(&w, &ord, &eps).unwrap();
        assert_eq!(we, vec![rat(2) + &eps * rat(2), rat(2), rat(1)]);

        let w = vec![rat(1), rat(1), rat(1)];
        let ord = sort_elements(&w).unwrap();
        let we = perturb_weights(&w, &ord, &eps).unwrap();
        assert_eq!(we, vec![rat(1) + &eps * rat(2), rat(1) + &eps, rat(1)]);

        let w = vec![rat(3), rat(2), rat(1)];
        let ord = sort_elements(&w).unwrap();
        assert_eq!(perturb_weights(&w, &ord, &eps).unwrap(), w);
    }

    #[test]
    fn zero_function_maximum() {
        let f = SetFunction::from_ints(2, 2, &[0, 0, 0, 0]).unwrap();
        let res = maximize_over_pf(&f, 2, &[rat(1), rat(1)]).unwrap();
        assert_eq!(res.x, vec![rat(0), rat(0)]);
        assert_eq!(res.value, rat(0));
    }

    #[test]
    fn uniform_rank_greedy_vertex() {
        let f = uniform_rank(3, 2).unwrap();
        let res = maximize_over_pf(&f, 2, &[rat(3), rat(2), rat(1)]).unwrap();
        assert_eq!(res.x, vec![rat(1), rat(1), rat(0)]);
        assert_eq!(res.value, rat(5));
        let reference = bruteforce_maximize_full(&f, &[rat(3), rat(2), rat(1)]).unwrap();
        assert_eq!(reference.value, res.value);
    }

    #[test]
    fn rank_minus_modular_instance() {
        // Pinned by the full-constraint oracle before asserting here.
        let f = uniform_rank(3, 2).unwrap();
        let g = subtract_modular(&f, &[rat(1), rat(0), rat(0)]).unwrap();
        let w = vec![rat(3), rat(2), rat(1)];
        let reference = bruteforce_maximize_full(&g, &w).unwrap();
        assert_eq!(reference.value, rat(2));
        let res = maximize_over_pf(&g, 2, &w).unwrap();
        assert_eq!(res.value, rat(2));
        assert_eq!(res.x, vec![rat(0), rat(1), rat(0)]);
    }

    #[test]
    fn certificate_identities_hold() {
        let f = uniform_rank(4, 2).unwrap();
        let w = vec![rat(2), rat(2), rat(1), rat(0)];
        let res = maximize_over_pf(&f, 2, &w).unwrap();
        // support inside the family
        for t in res.y.keys() {
            assert!(res.family.contains(*t));
        }
        // sum y_T chi_T = w
        for i in 0..4 {
            let covered: Rational = res
                .y
                .iter()
                .filter(|(t, _)| t.contains(i))
                .map(|(_, v)| v.clone())
                .sum();
            assert_eq!(covered, w[i]);
        }
        // strong duality
        let dual: Rational = res.y.iter().map(|(t, v)| v * f.eval(*t)).sum();
        assert_eq!(dual, res.value);
        // feasibility over every subset
        for t in all_subsets(4) {
            let xt: Rational = t.iter().map(|i| res.x[i].clone()).sum();
            assert!(xt <= f.eval(t));
        }
    }

    #[test]
    fn fractional_values_are_scaled_exactly() {
        let f = SetFunction::from_dense(
            crate::subset::GroundSet::new(2).unwrap(),
            2,
            vec![rat(0), ratio(1, 2), ratio(1, 3), ratio(1, 2)],
        )
        .unwrap();
        let w = vec![rat(1), rat(1)];
        let res = maximize_over_pf(&f, 2, &w).unwrap();
        let reference = bruteforce_maximize_full(&f, &w).unwrap();
        assert_eq!(res.value, reference.value);
        assert_eq!(res.value, ratio(1, 2));
    }

    #[test]
    fn indicator_of_full_set_maximum() {
        let f = indicator(Subset::full(3), 3).unwrap();
        let w = vec![rat(1), rat(1), rat(1)];
        let res = maximize_over_pf(&f, 2, &w).unwrap();
        let reference = bruteforce_maximize_full(&f, &w).unwrap();
        assert_eq!(res.value, reference.value);
        assert_eq!(res.value, rat(-1));
    }
}
