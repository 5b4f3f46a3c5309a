//! Cut functions of complete graphs with possibly negative edge weights.
//!
//! When every set of at least k edges incident to a common vertex has a
//! nonnegative weight sum, the cut function of the weighted complete
//! graph is (2k-1)-distant submodular.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;
use crate::set_function::SetFunction;
use crate::subset::{all_subsets, GroundSet, Subset};

/// A complete graph on `nv` vertices with rational edge weights.
#[derive(Clone, Debug)]
pub struct WeightedCompleteGraph {
    nv: usize,
    /// weights[edge_index(u, v)] for u < v (0-based vertices).
    weights: Vec<Rational>,
}

impl WeightedCompleteGraph {
    /// Builds from a weight per unordered pair, listed as
    /// (0,1), (0,2), ..., (0,nv-1), (1,2), ... in that order.
    pub fn new(nv: usize, weights: Vec<Rational>) -> Result<Self, Error> {
        if nv < 2 || nv > 30 {
            return Err(Error::GroundSetSize(nv));
        }
        let expected = nv * (nv - 1) / 2;
        if weights.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: weights.len() });
        }
        Ok(WeightedCompleteGraph { nv, weights })
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    fn edge_index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < v && v < self.nv);
        // Row-major upper triangle.
        u * self.nv - u * (u + 1) / 2 + (v - u - 1)
    }

    pub fn weight(&self, u: usize, v: usize) -> &Rational {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        &self.weights[self.edge_index(a, b)]
    }

    /// Weights of the edges incident to `v`.
    pub fn incident_weights(&self, v: usize) -> Vec<Rational> {
        (0..self.nv)
            .filter(|&u| u != v)
            .map(|u| self.weight(u, v).clone())
            .collect()
    }

    /// Total weight of edges crossing the (t, complement) partition.
    pub fn cut_value(&self, t: Subset) -> Rational {
        let mut acc = Rational::zero();
        for u in 0..self.nv {
            if !t.contains(u) {
                continue;
            }
            for v in 0..self.nv {
                if v == u || t.contains(v) {
                    continue;
                }
                acc += self.weight(u, v);
            }
        }
        acc
    }
}

/// Checks that for every vertex, every incident edge set of size >= k has
/// a nonnegative weight sum.
///
/// The minimal such sum takes the k smallest incident weights plus all
/// remaining negative ones, so the check is a sort per vertex.
pub fn check_cut_condition(g: &WeightedCompleteGraph, k: usize) -> Result<(), Error> {
    if k == 0 || k > g.nv() - 1 {
        return Err(Error::DistanceOutOfRange { k, n: g.nv() - 1 });
    }
    for v in 0..g.nv() {
        let mut incident = g.incident_weights(v);
        incident.sort();
        let mut worst: Rational = incident[..k].iter().sum();
        for w in &incident[k..] {
            if w.is_negative() {
                worst += w;
            }
        }
        if worst.is_negative() {
            return Err(Error::CutConditionViolated { vertex: v + 1, edge_set_size: k });
        }
    }
    Ok(())
}

/// Builds the cut function of the weighted complete graph, declared
/// (2k-1)-distant (stored as 2 when k = 1, the plain submodular case).
/// Fails when the weight condition for this k does not hold.
pub fn gen_cut_function(g: &WeightedCompleteGraph, k: usize) -> Result<SetFunction, Error> {
    check_cut_condition(g, k)?;
    let nv = g.nv();
    let declared = (2 * k - 1).max(2);
    let values: Vec<Rational> = all_subsets(nv).map(|t| g.cut_value(t)).collect();
    SetFunction::from_dense(GroundSet::new(nv)?, declared, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::set_function::is_k_distant;

    #[test]
    fn unit_triangle_cut() {
        let g = WeightedCompleteGraph::new(3, vec![rat(1), rat(1), rat(1)]).unwrap();
        let f = gen_cut_function(&g, 1).unwrap();
        assert_eq!(f.declared_k(), 2);
        for v in 0..3 {
            assert_eq!(f.eval(Subset::singleton(v)), rat(2));
        }
        assert_eq!(f.eval(Subset::EMPTY), rat(0));
        assert_eq!(f.eval(Subset::full(3)), rat(0));
        assert!(is_k_distant(&f, 2).unwrap().holds());
    }

    #[test]
    fn one_negative_edge_on_k4() {
        // Edge order: (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
        let weights = vec![rat(-1), rat(1), rat(1), rat(1), rat(1), rat(1)];
        let g = WeightedCompleteGraph::new(4, weights).unwrap();
        // Worst pair at an endpoint of the negative edge sums to 0.
        check_cut_condition(&g, 2).unwrap();
        let f = gen_cut_function(&g, 2).unwrap();
        assert_eq!(f.declared_k(), 3);
        assert!(is_k_distant(&f, 3).unwrap().holds());
    }

    #[test]
    fn negative_edge_fails_singleton_condition() {
        let g = WeightedCompleteGraph::new(3, vec![rat(-1), rat(1), rat(1)]).unwrap();
        assert!(matches!(
            check_cut_condition(&g, 1),
            Err(Error::CutConditionViolated { vertex: 1, .. })
        ));
        assert!(gen_cut_function(&g, 1).is_err());
    }

    #[test]
    fn cut_values_are_symmetric() {
        let weights = vec![rat(2), rat(-1), rat(3), rat(1), rat(0), rat(4)];
        let g = WeightedCompleteGraph::new(4, weights).unwrap();
        for t in all_subsets(4) {
            let complement = Subset::full(4).difference(t);
            assert_eq!(g.cut_value(t), g.cut_value(complement));
        }
    }
}
