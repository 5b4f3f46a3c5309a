//! Exact two-phase simplex for standard-form linear programs over
//! rationals, plus primal recovery from a dual basis.
//!
//! The solver minimizes c'y subject to Ay = b, y >= 0 with Bland's
//! anti-cycling rule, so termination is guaranteed and every reported
//! solution satisfies its constraints with exact rational equality.
//! Rationals are reduced after every arithmetic step, which keeps the
//! bit-length of tableau entries under control.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::family::ConstraintFamily;
use crate::rational::Rational;
use crate::set_function::SetFunction;

/// min c'y subject to Ay = b, y >= 0, with A stored column-major.
///
/// Columns and costs are shared so that repeated solves against the same
/// constraint matrix (with fresh right-hand sides) cost no copies.
#[derive(Clone, Debug)]
pub struct StandardFormLp {
    columns: Arc<Vec<Vec<Rational>>>,
    /// Right-hand side, length m.
    pub b: Vec<Rational>,
    c: Arc<Vec<Rational>>,
}

impl StandardFormLp {
    pub fn new(
        columns: Vec<Vec<Rational>>,
        b: Vec<Rational>,
        c: Vec<Rational>,
    ) -> Result<Self, Error> {
        Self::from_shared(Arc::new(columns), b, Arc::new(c))
    }

    pub fn from_shared(
        columns: Arc<Vec<Vec<Rational>>>,
        b: Vec<Rational>,
        c: Arc<Vec<Rational>>,
    ) -> Result<Self, Error> {
        let m = b.len();
        if columns.len() != c.len() {
            return Err(Error::LpShape(format!(
                "{} columns but {} objective entries",
                columns.len(),
                c.len()
            )));
        }
        if let Some(col) = columns.iter().find(|col| col.len() != m) {
            return Err(Error::LpShape(format!(
                "column of height {} in an LP with {m} rows",
                col.len()
            )));
        }
        Ok(StandardFormLp { columns, b, c })
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Rational>] {
        &self.columns
    }

    pub fn cost(&self) -> &[Rational] {
        &self.c
    }
}

/// Solver outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A basic solution of a standard-form LP.
///
/// When `status` is `Optimal`: `y >= 0`, `Ay = b` exactly, nonbasic entries
/// of `y` are zero, and `basis` lists the m basic column indices (entries
/// `>= cols()` denote artificials stuck on redundant rows). `multipliers`
/// holds the simplex multipliers of the optimal basis, i.e. the
/// complementary solution of the dual of the standard form.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub y: Vec<Rational>,
    pub basis: Vec<usize>,
    pub objective: Rational,
    pub multipliers: Vec<Rational>,
    /// For infeasible programs: pi with pi'A <= 0 componentwise and pi'b > 0.
    pub farkas: Option<Vec<Rational>>,
    pub pivots: usize,
}

struct Simplex<'a> {
    lp: &'a StandardFormLp,
    m: usize,
    d: usize,
    /// Row sign flips making b nonnegative for phase 1.
    flip: Vec<bool>,
    /// Basic column per row; artificial for row i is column d + i.
    basis: Vec<usize>,
    /// Inverse of the (flipped) basis matrix, row-major.
    binv: Vec<Vec<Rational>>,
    /// Current basic values, always >= 0.
    xb: Vec<Rational>,
    pivots: usize,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a StandardFormLp) -> Self {
        let m = lp.rows();
        let flip: Vec<bool> = lp.b.iter().map(|v| v.is_negative()).collect();
        let xb: Vec<Rational> = lp
            .b
            .iter()
            .zip(&flip)
            .map(|(v, f)| if *f { -v.clone() } else { v.clone() })
            .collect();
        let binv = identity(m);
        Simplex {
            lp,
            m,
            d: lp.cols(),
            flip,
            basis: (0..m).map(|i| lp.cols() + i).collect(),
            binv,
            xb,
            pivots: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.d
    }

    /// u = B^-1 A_j for a structural column.
    fn solve_column(&self, j: usize) -> Vec<Rational> {
        let col = &self.lp.columns[j];
        (0..self.m)
            .map(|i| {
                let mut acc = Rational::zero();
                for (r, a) in col.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let a = if self.flip[r] { -a.clone() } else { a.clone() };
                    acc += &self.binv[i][r] * a;
                }
                acc
            })
            .collect()
    }

    /// lambda = cost_B' B^-1 for the given per-column cost function.
    fn multipliers<C>(&self, cost: C) -> Vec<Rational>
    where
        C: Fn(usize) -> Rational,
    {
        let mut lambda = vec![Rational::zero(); self.m];
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = cost(bj);
            if cb.is_zero() {
                continue;
            }
            for r in 0..self.m {
                if !self.binv[i][r].is_zero() {
                    lambda[r] += &cb * &self.binv[i][r];
                }
            }
        }
        lambda
    }

    /// Reduced cost of structural column j given multipliers.
    fn reduced_cost(&self, j: usize, cost_j: &Rational, lambda: &[Rational]) -> Rational {
        let mut acc = cost_j.clone();
        for (r, a) in self.lp.columns[j].iter().enumerate() {
            if a.is_zero() || lambda[r].is_zero() {
                continue;
            }
            let a = if self.flip[r] { -a.clone() } else { a.clone() };
            acc -= &lambda[r] * a;
        }
        acc
    }

    /// One simplex phase under Bland's rule. `Ok(true)` means an optimal
    /// basis was reached, `Ok(false)` means the phase is unbounded.
    fn run_phase<C>(&mut self, cost: C, forbid_artificial_growth: bool) -> Result<bool, Error>
    where
        C: Fn(usize) -> Rational + Copy,
    {
        loop {
            let lambda = self.multipliers(cost);
            // Bland: first structural nonbasic column with negative reduced cost.
            let mut entering = None;
            for j in 0..self.d {
                if self.basis.contains(&j) {
                    continue;
                }
                let r = self.reduced_cost(j, &cost(j), &lambda);
                if r.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(true);
            };
            let u = self.solve_column(j);

            // Artificials stuck on redundant rows must stay at zero; any
            // pivot that would move one is redirected to evict it instead.
            let mut leaving: Option<usize> = None;
            if forbid_artificial_growth {
                leaving = (0..self.m)
                    .find(|&i| self.is_artificial(self.basis[i]) && !u[i].is_zero());
                if let Some(i) = leaving {
                    debug_assert!(self.xb[i].is_zero());
                }
            }
            if leaving.is_none() {
                let mut best: Option<(Rational, usize)> = None;
                for i in 0..self.m {
                    if !u[i].is_positive() {
                        continue;
                    }
                    let ratio = &self.xb[i] / &u[i];
                    let better = match &best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
                leaving = best.map(|(_, i)| i);
            }
            let Some(r) = leaving else {
                return Ok(false); // unbounded in this phase
            };
            self.pivot(r, j, &u);
        }
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rational]) {
        let pivot = u[r].clone();
        for col in 0..self.m {
            self.binv[r][col] /= &pivot;
        }
        self.xb[r] /= &pivot;
        for i in 0..self.m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let factor = u[i].clone();
            for col in 0..self.m {
                if !self.binv[r][col].is_zero() {
                    let delta = &factor * &self.binv[r][col];
                    self.binv[i][col] -= delta;
                }
            }
            if !self.xb[r].is_zero() {
                let delta = &factor * &self.xb[r];
                self.xb[i] -= delta;
            }
        }
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Pivots structural columns into rows still held by artificials at
    /// level zero. Rows that cannot be cleared are redundant.
    fn evict_artificials(&mut self) {
        for r in 0..self.m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            debug_assert!(self.xb[r].is_zero());
            for j in 0..self.d {
                if self.basis.contains(&j) {
                    continue;
                }
                let u = self.solve_column(j);
                if !u[r].is_zero() {
                    self.pivot(r, j, &u);
                    break;
                }
            }
        }
    }

    fn unflip(&self, v: Vec<Rational>) -> Vec<Rational> {
        v.into_iter()
            .zip(&self.flip)
            .map(|(x, f)| if *f { -x } else { x })
            .collect()
    }
}

fn identity(m: usize) -> Vec<Vec<Rational>> {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

/// Solves a standard-form LP from scratch.
pub fn solve_standard_form(lp: &StandardFormLp) -> Result<LpSolution, Error> {
    let mut s = Simplex::new(lp);

    // Phase 1: minimize the sum of artificials.
    let phase1_cost = |j: usize| {
        if j >= lp.cols() {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    let optimal = s.run_phase(phase1_cost, false)?;
    debug_assert!(optimal, "phase 1 is bounded below by zero");
    let infeas: Rational = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(j, _)| **j >= lp.cols())
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        let lambda = s.multipliers(phase1_cost);
        let farkas = s.unflip(lambda);
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            y: vec![Rational::zero(); lp.cols()],
            basis: s.basis.clone(),
            objective: Rational::zero(),
            multipliers: vec![Rational::zero(); lp.rows()],
            farkas: Some(farkas),
            pivots: s.pivots,
        });
    }
    s.evict_artificials();
    finish_phase2(lp, s)
}

/// Solves starting from a known structural basis; falls back to a cold
/// solve when the basis is singular or not primal feasible.
pub fn solve_with_starting_basis(
    lp: &StandardFormLp,
    basis: &[usize],
) -> Result<LpSolution, Error> {
    let mut distinct = basis.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() == lp.rows() && basis.iter().all(|&j| j < lp.cols()) {
        if let Some(s) = warm_state(lp, basis) {
            if s.xb.iter().all(|v| !v.is_negative()) {
                return finish_phase2(lp, s);
            }
        }
    }
    solve_standard_form(lp)
}

fn warm_state<'a>(lp: &'a StandardFormLp, basis: &[usize]) -> Option<Simplex<'a>> {
    let m = lp.rows();
    // Invert the basis matrix by Gauss-Jordan on [B | I].
    let mut mat: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|&j| lp.columns[j][r].clone()).collect();
            row.extend((0..m).map(|c| {
                if c == r {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..m {
        let pivot_row = (col..m).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot_row);
        let pivot = mat[col][col].clone();
        for v in &mut mat[col] {
            *v /= &pivot;
        }
        for r in 0..m {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..2 * m {
                let delta = &factor * &mat[col][c];
                mat[r][c] -= delta;
            }
        }
    }
    // binv rows must be indexed by basis position.
    let binv: Vec<Vec<Rational>> = mat.iter().map(|row| row[m..].to_vec()).collect();
    let xb: Vec<Rational> = (0..m)
        .map(|i| {
            let mut acc = Rational::zero();
            for r in 0..m {
                if !binv[i][r].is_zero() && !lp.b[r].is_zero() {
                    acc += &binv[i][r] * &lp.b[r];
                }
            }
            acc
        })
        .collect();
    Some(Simplex {
        lp,
        m,
        d: lp.cols(),
        flip: vec![false; m],
        basis: basis.to_vec(),
        binv,
        xb,
        pivots: 0,
    })
}

fn finish_phase2(lp: &StandardFormLp, mut s: Simplex<'_>) -> Result<LpSolution, Error> {
    let cost = |j: usize| {
        if j < lp.cols() {
            lp.c[j].clone()
        } else {
            Rational::zero()
        }
    };
    let optimal = s.run_phase(cost, true)?;
    if !optimal {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            y: vec![Rational::zero(); lp.cols()],
            basis: s.basis.clone(),
            objective: Rational::zero(),
            multipliers: vec![Rational::zero(); lp.rows()],
            farkas: None,
            pivots: s.pivots,
        });
    }
    let mut y = vec![Rational::zero(); lp.cols()];
    let mut objective = Rational::zero();
    for (i, &j) in s.basis.iter().enumerate() {
        if j < lp.cols() {
            objective += &lp.c[j] * &s.xb[i];
            y[j] = s.xb[i].clone();
        }
    }
    let multipliers = s.unflip(s.multipliers(cost));
    debug_assert!(verify_equalities(lp, &y));
    Ok(LpSolution {
        status: LpStatus::Optimal,
        y,
        basis: s.basis.clone(),
        objective,
        multipliers,
        farkas: None,
        pivots: s.pivots,
    })
}

fn verify_equalities(lp: &StandardFormLp, y: &[Rational]) -> bool {
    for r in 0..lp.rows() {
        let mut acc = Rational::zero();
        for (j, col) in lp.columns.iter().enumerate() {
            if !y[j].is_zero() && !col[r].is_zero() {
                acc += &y[j] * &col[r];
            }
        }
        if acc != lp.b[r] {
            return false;
        }
    }
    true
}

/// Solves an n x n linear system by Gaussian elimination; `None` if singular.
pub fn solve_linear_system(
    mut mat: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = mat[col][col].clone();
        for v in &mut mat[col] {
            *v /= &pivot;
        }
        rhs[col] /= &pivot;
        for r in 0..n {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in col..n {
                let delta = &factor * &mat[col][c];
                mat[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

/// Recovers the primal vertex determined by n tight family constraints:
/// the unique x with x(T) = f(T) for every basis member T.
pub fn primal_from_dual_basis(
    family: &ConstraintFamily,
    f: &SetFunction,
    basis: &[usize],
) -> Result<Vec<Rational>, Error> {
    let n = family.ordering().n();
    if basis.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: basis.len() });
    }
    let mut mat = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for &idx in basis {
        let member = *family
            .members()
            .get(idx)
            .ok_or(Error::DimensionMismatch { expected: family.len(), got: idx })?;
        let row: Vec<Rational> = (0..n)
            .map(|i| {
                if member.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        mat.push(row);
        rhs.push(f.eval(member));
    }
    solve_linear_system(mat, rhs).ok_or(Error::SingularBasis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_family, sort_elements};
    use crate::rational::{rat, ratio};
    use crate::set_function::uniform_rank;

    fn lp(cols: Vec<Vec<i64>>, b: Vec<i64>, c: Vec<i64>) -> StandardFormLp {
        StandardFormLp::new(
            cols.into_iter()
                .map(|col| col.into_iter().map(rat).collect())
                .collect(),
            b.into_iter().map(rat).collect(),
            c.into_iter().map(rat).collect(),
        )
        .unwrap()
    }

    /// Independent oracle: enumerate all bases, keep the best feasible
    /// basic solution. Only for small feasible bounded programs.
    fn enumerate_optimum(lp: &StandardFormLp) -> Option<(Rational, Vec<Rational>)> {
        let m = lp.rows();
        let d = lp.cols();
        let mut best: Option<(Rational, Vec<Rational>)> = None;
        let mut basis: Vec<usize> = (0..m).collect();
        loop {
            let mut mat = vec![vec![Rational::zero(); m]; m];
            for (pos, &j) in basis.iter().enumerate() {
                for r in 0..m {
                    mat[r][pos] = lp.columns[j][r].clone();
                }
            }
            if let Some(xb) = solve_linear_system(mat, lp.b.clone()) {
                if xb.iter().all(|v| !v.is_negative()) {
                    let mut y = vec![Rational::zero(); d];
                    let mut obj = Rational::zero();
                    for (pos, &j) in basis.iter().enumerate() {
                        obj += &lp.c[j] * &xb[pos];
                        y[j] = xb[pos].clone();
                    }
                    if best.as_ref().map_or(true, |(b, _)| obj < *b) {
                        best = Some((obj, y));
                    }
                }
            }
            // next m-combination of 0..d
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if basis[i] != i + d - m {
                    basis[i] += 1;
                    for t in i + 1..m {
                        basis[t] = basis[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn trivial_equality() {
        let p = lp(vec![vec![1]], vec![1], vec![1]);
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.y, vec![rat(1)]);
        assert_eq!(sol.objective, rat(1));
    }

    #[test]
    fn unbounded_zero_row() {
        let p = lp(vec![vec![0]], vec![0], vec![-1]);
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_with_farkas() {
        // 0*y = 1 has a one-line refutation.
        let p = lp(vec![vec![0]], vec![1], vec![0]);
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let pi = sol.farkas.unwrap();
        let pib: Rational = pi.iter().zip(&p.b).map(|(a, b)| a * b).sum();
        assert!(pib.is_positive());
    }

    #[test]
    fn farkas_certificate_on_negative_rhs() {
        // y1 + y2 = -1, y >= 0 is infeasible.
        let p = lp(vec![vec![1], vec![1]], vec![-1], vec![0, 0]);
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let pi = sol.farkas.unwrap();
        for col in p.columns() {
            let pia: Rational = pi.iter().zip(col).map(|(a, b)| a * b).sum();
            assert!(!pia.is_positive());
        }
        let pib: Rational = pi.iter().zip(&p.b).map(|(a, b)| a * b).sum();
        assert!(pib.is_positive());
    }

    #[test]
    fn dual_of_chain_for_uniform_rank() {
        // Restricted dual for the rank of U_{2,3} with w = (3,2,1):
        // chain columns only, optimal y = (1,1,1) on the chain, value 5.
        let f = uniform_rank(3, 2).unwrap();
        let w = vec![rat(3), rat(2), rat(1)];
        let ord = sort_elements(&w).unwrap();
        let fam = build_family(&ord, 2).unwrap();
        let columns: Vec<Vec<Rational>> = fam
            .members()
            .iter()
            .map(|t| {
                (0..3)
                    .map(|i| if t.contains(i) { rat(1) } else { rat(0) })
                    .collect()
            })
            .collect();
        let c: Vec<Rational> = fam.members().iter().map(|t| f.eval(*t)).collect();
        let p = StandardFormLp::new(columns, w, c).unwrap();
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, rat(5));
        // members are sorted by mask: {}, {1}, {1,2}, {1,2,3}
        assert_eq!(sol.y[1], rat(1));
        assert_eq!(sol.y[2], rat(1));
        assert_eq!(sol.y[3], rat(1));
        let (obj, _) = enumerate_optimum(&p).unwrap();
        assert_eq!(obj, rat(5));
    }

    #[test]
    fn beale_cycling_instance_terminates_under_bland() {
        // A classic example that cycles under most-negative pivoting.
        let columns = vec![
            vec![ratio(1, 4), ratio(1, 2), rat(0)],
            vec![rat(-60), rat(-90), rat(0)],
            vec![ratio(-1, 25), ratio(-1, 50), rat(1)],
            vec![rat(9), rat(3), rat(0)],
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(1), rat(0)],
            vec![rat(0), rat(0), rat(1)],
        ];
        let b = vec![rat(0), rat(0), rat(1)];
        let c = vec![
            ratio(-3, 4),
            rat(150),
            ratio(-1, 50),
            rat(6),
            rat(0),
            rat(0),
            rat(0),
        ];
        let p = StandardFormLp::new(columns, b, c).unwrap();
        let sol = solve_standard_form(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        let (obj, _) = enumerate_optimum(&p).unwrap();
        assert_eq!(sol.objective, obj);
        assert_eq!(obj, ratio(-1, 20));
    }

    #[test]
    fn matches_basis_enumeration_on_random_programs() {
        // Deterministic pseudo-random small LPs, checked against the
        // exhaustive basis oracle.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 7) as i64 - 2
        };
        for _ in 0..25 {
            let m = 2;
            let d = 5;
            let columns: Vec<Vec<i64>> =
                (0..d).map(|_| (0..m).map(|_| next()).collect()).collect();
            let b: Vec<i64> = (0..m).map(|_| next().abs()).collect();
            let c: Vec<i64> = (0..d).map(|_| next()).collect();
            let p = lp(columns, b, c);
            let sol = solve_standard_form(&p).unwrap();
            match sol.status {
                LpStatus::Optimal => {
                    // weak duality against the multipliers: lambda' b = objective
                    let lb: Rational =
                        sol.multipliers.iter().zip(&p.b).map(|(a, b)| a * b).sum();
                    assert_eq!(lb, sol.objective);
                    if let Some((obj, _)) = enumerate_optimum(&p) {
                        assert_eq!(obj, sol.objective);
                    }
                }
                LpStatus::Infeasible => {
                    let pi = sol.farkas.as_ref().unwrap();
                    for col in p.columns() {
                        let pia: Rational = pi.iter().zip(col).map(|(a, b)| a * b).sum();
                        assert!(!pia.is_positive());
                    }
                    let pib: Rational = pi.iter().zip(&p.b).map(|(a, b)| a * b).sum();
                    assert!(pib.is_positive());
                }
                LpStatus::Unbounded => {}
            }
        }
    }

    #[test]
    fn warm_start_agrees_with_cold_start() {
        let f = uniform_rank(3, 2).unwrap();
        let w = vec![rat(3), rat(2), rat(1)];
        let ord = sort_elements(&w).unwrap();
        let fam = build_family(&ord, 3).unwrap();
        let columns: Vec<Vec<Rational>> = fam
            .members()
            .iter()
            .map(|t| {
                (0..3)
                    .map(|i| if t.contains(i) { rat(1) } else { rat(0) })
                    .collect()
            })
            .collect();
        let c: Vec<Rational> = fam.members().iter().map(|t| f.eval(*t)).collect();
        let p = StandardFormLp::new(columns, w.clone(), c).unwrap();
        let cold = solve_standard_form(&p).unwrap();
        let warm = solve_with_starting_basis(&p, &cold.basis).unwrap();
        assert_eq!(warm.status, LpStatus::Optimal);
        assert_eq!(warm.objective, cold.objective);
        assert_eq!(warm.pivots, 0);
        // A nonsense basis falls back to the cold path.
        let fallback = solve_with_starting_basis(&p, &[0, 0, 0]).unwrap();
        assert_eq!(fallback.objective, cold.objective);
    }

    #[test]
    fn primal_recovery_from_chain_basis() {
        let f = uniform_rank(3, 2).unwrap();
        let ord = sort_elements(&[rat(3), rat(2), rat(1)]).unwrap();
        let fam = build_family(&ord, 2).unwrap();
        // members sorted by mask: [{}, {1}, {1,2}, {1,2,3}]
        let x = primal_from_dual_basis(&fam, &f, &[1, 2, 3]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1), rat(0)]);
        // A basis containing the empty set has a zero row.
        assert_eq!(
            primal_from_dual_basis(&fam, &f, &[0, 1, 2]),
            Err(Error::SingularBasis)
        );
    }
}
