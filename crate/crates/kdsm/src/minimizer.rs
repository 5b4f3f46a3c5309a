//! Minimization of integer-valued k-distant submodular functions.
//!
//! The driver is the classic reduction: shifting all nonempty values up
//! by an integer c preserves k-distance, and the minimum of f is -c* for
//! the smallest shift c* that makes the function nonnegative. Deciding
//! nonnegativity is a membership question — is the origin inside P(g)? —
//! answered through the linear optimization oracle over P(g).
//!
//! The membership test runs a central-cut ellipsoid over the weight box
//! [0,1]^n with the optimizer as subgradient oracle. Three exact
//! short-circuits do almost all of the work in practice:
//!
//! * every constraint-family member is evaluated before each oracle call,
//!   so negative values sitting inside a family are found immediately;
//! * any oracle answer whose dual support carries a negative value, or
//!   whose value is negative, yields a self-certifying witness;
//! * the returned vertices are pooled, and a convex combination of pool
//!   vertices that is componentwise nonnegative is an exact proof that
//!   the origin lies in P(g): the search stops with a certified
//!   "nonnegative" long before the iteration budget.
//!
//! When the pool cannot certify yet, its infeasibility certificate is a
//! separating weight vector; querying the oracle there either finds a
//! witness or contributes a genuinely new vertex, so the loop terminates
//! for every input. Only the budget-exhaustion path (reached when all
//! short-circuits stay silent for the full budget) returns an
//! uncertified "nonnegative".

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::family::{build_family, sort_elements};
use crate::optimizer::SupportOracle;
use crate::rational::{rat, round_to_dyadic, Rational};
use crate::ratlp::{solve_standard_form, solve_with_starting_basis, LpStatus, StandardFormLp};
use crate::reference::{bruteforce_minimize, SCAN_GUARD};
use crate::set_function::{normalize, shift_nonempty, value_bounds, SetFunction};
use crate::subset::Subset;

/// Dyadic precision (bits) of rounded ellipsoid centers and shapes.
const ELLIPSOID_PRECISION: u32 = 64;

/// Answer of the membership test "is 0 in P(g)?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub kind: MembershipKind,
    pub oracle_calls: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipKind {
    /// No negative value found; exact when a certificate was reached,
    /// budget-trusted otherwise.
    Nonnegative,
    /// A set with g(witness) < 0, verified by direct evaluation.
    Witness { set: Subset, value: Rational },
}

impl MembershipVerdict {
    fn nonnegative(oracle_calls: usize) -> Self {
        MembershipVerdict { kind: MembershipKind::Nonnegative, oracle_calls }
    }

    /// Witnesses are self-certifying: construction re-evaluates g.
    fn witness(g: &SetFunction, set: Subset, oracle_calls: usize) -> Result<Self, Error> {
        let value = g.eval(set);
        if !value.is_negative() {
            return Err(Error::InternalConsistency(format!(
                "claimed witness {set:?} has nonnegative value {value}"
            )));
        }
        Ok(MembershipVerdict {
            kind: MembershipKind::Witness { set, value },
            oracle_calls,
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(self.kind, MembershipKind::Nonnegative)
    }
}

/// Tuning knobs for the membership search.
#[derive(Clone, Debug, Default)]
pub struct MembershipOptions {
    /// Ellipsoid iteration budget; default is the volume-argument bound,
    /// overridable here or through the KDSM_BUDGET environment variable.
    pub budget: Option<usize>,
    /// Cross-check the verdict against exhaustive evaluation (n <= 24)
    /// and fail loudly on disagreement.
    pub verify: bool,
}

/// The default iteration budget from the ellipsoid volume argument: the
/// target set {h <= -1/2} contains a ball of radius about 1/(4 n Xmax)
/// near a minimizer's indicator vector, with Xmax = n! * Bg the Cramer
/// bound on vertex coordinates. Deliberately generous; the short-circuits
/// make the typical search terminate far earlier.
pub fn default_budget(n: usize, bg: &Rational) -> usize {
    let bg_f = bg.to_f64().unwrap_or(1.0).max(1.0);
    let mut factorial = 1f64;
    for i in 2..=n {
        factorial *= i as f64;
    }
    let xmax = (factorial * bg_f).max(1.0);
    let inner = (n as f64) * std::f64::consts::LN_2 + (8.0 * (n * n) as f64 * xmax).ln();
    (8.0 * (n as f64) * ((n + 1) as f64) * inner).ceil() as usize
}

fn budget_from_env() -> Option<usize> {
    std::env::var("KDSM_BUDGET").ok()?.trim().parse().ok()
}

/// State of the central-cut ellipsoid: E = {w : (w-c)' P^-1 (w-c) <= 1}.
#[derive(Clone, Debug)]
pub struct EllipsoidState {
    pub center: Vec<Rational>,
    /// Symmetric positive definite shape matrix P.
    pub shape: Vec<Vec<Rational>>,
    pub iteration: usize,
}

impl EllipsoidState {
    /// The ball around the center of [0,1]^n that contains the whole box.
    pub fn initial_box(n: usize) -> EllipsoidState {
        let center = vec![Rational::new(BigInt::one(), BigInt::from(2)); n];
        let radius_sq = Rational::new(BigInt::from(n), BigInt::from(4)) + Rational::one();
        let shape = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { radius_sq.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        EllipsoidState { center, shape, iteration: 0 }
    }

    /// First violated facet of the box, as an outward cut normal.
    pub fn violated_box_facet(&self) -> Option<Vec<Rational>> {
        let n = self.center.len();
        for i in 0..n {
            if self.center[i].is_negative() {
                let mut a = vec![Rational::zero(); n];
                a[i] = -Rational::one();
                return Some(a);
            }
            if self.center[i] > Rational::one() {
                let mut a = vec![Rational::zero(); n];
                a[i] = Rational::one();
                return Some(a);
            }
        }
        None
    }

    /// Central cut: keep {w : a'w <= a'center}, shrink, round outward.
    ///
    /// The sqrt in the center update is approximated by a nearby rational
    /// and every entry is rounded to a fixed dyadic grid; the shape is
    /// inflated slightly so the half-ellipsoid stays covered.
    pub fn cut(&mut self, a: &[Rational]) -> Result<(), Error> {
        let n = self.center.len();
        if a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.len() });
        }
        let pa: Vec<Rational> = (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..n {
                    if !a[j].is_zero() && !self.shape[i][j].is_zero() {
                        acc += &self.shape[i][j] * &a[j];
                    }
                }
                acc
            })
            .collect();
        let q: Rational = a.iter().zip(&pa).map(|(x, y)| x * y).sum();
        if !q.is_positive() {
            return Err(Error::InternalConsistency(
                "cut direction has nonpositive ellipsoid norm".into(),
            ));
        }
        // sqrt(q) in [s/den, (s+1)/den]; the overestimate keeps the step short.
        let sqrt_hi = {
            let scaled = q.numer() * q.denom();
            let s = scaled.sqrt();
            Rational::new(s + BigInt::one(), q.denom().clone())
        };
        let np1 = rat((n + 1) as i64);
        for i in 0..n {
            let step = &pa[i] / (&np1 * &sqrt_hi);
            let moved = &self.center[i] - step;
            self.center[i] = round_to_dyadic(&moved, ELLIPSOID_PRECISION);
        }

        let n_sq = rat((n * n) as i64);
        let grow = &n_sq / (&n_sq - Rational::one());
        let two_np1 = rat(2 * (n + 1) as i64);
        // Multiplicative slack absorbs the sqrt approximation and the
        // dyadic rounding; additive diagonal slack keeps the matrix SPD.
        let inflate = Rational::one() + Rational::new(BigInt::one(), BigInt::from(8 * n * n));
        let diag_slack = Rational::new(
            BigInt::from(n),
            BigInt::one() << (ELLIPSOID_PRECISION - 4),
        );
        for i in 0..n {
            for j in 0..n {
                let rank1 = &pa[i] * &pa[j] / &q;
                let updated = (&self.shape[i][j] - rank1 * rat(2) / &two_np1) * &grow * &inflate;
                let mut rounded = round_to_dyadic(&updated, ELLIPSOID_PRECISION);
                if i == j {
                    rounded += &diag_slack;
                }
                self.shape[i][j] = rounded;
            }
        }
        // Re-symmetrize after rounding.
        for i in 0..n {
            for j in 0..i {
                let avg = (&self.shape[i][j] + &self.shape[j][i]) / rat(2);
                self.shape[i][j] = avg.clone();
                self.shape[j][i] = avg;
            }
        }
        self.iteration += 1;
        Ok(())
    }

    /// Exact SPD check via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.center.len();
        let mut mat = self.shape.clone();
        for col in 0..n {
            if !mat[col][col].is_positive() {
                return false;
            }
            let pivot = mat[col][col].clone();
            for r in (col + 1)..n {
                if mat[r][col].is_zero() {
                    continue;
                }
                let factor = &mat[r][col] / &pivot;
                for c in col..n {
                    let delta = &factor * &mat[col][c];
                    mat[r][c] -= delta;
                }
            }
        }
        true
    }
}

/// Decides whether min g >= 0 (over a normalized, integer-valued,
/// declared k-distant g) or returns a witness with g(witness) < 0.
///
/// `bg` must bound max |g|; it sizes the default iteration budget.
pub fn membership_zero(
    g: &SetFunction,
    k: usize,
    bg: &Rational,
    opts: &MembershipOptions,
) -> Result<MembershipVerdict, Error> {
    if !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if let Some(values) = g.dense_values() {
        if let Some(bad) = values.iter().position(|v| !v.is_integer()) {
            return Err(Error::NotIntegerValued(Subset(bad as u64)));
        }
    }
    let verdict = membership_search(g, k, bg, opts)?;
    if opts.verify && g.n() <= SCAN_GUARD {
        let (min, argmin) = bruteforce_minimize(g)?;
        let agree = match &verdict.kind {
            MembershipKind::Nonnegative => !min.is_negative(),
            MembershipKind::Witness { .. } => min.is_negative(),
        };
        if !agree {
            return Err(Error::InternalConsistency(format!(
                "membership verdict {:?} disagrees with exhaustive minimum {min} at {argmin:?}",
                verdict.kind
            )));
        }
    }
    Ok(verdict)
}

/// A jitter small enough that cutting through the true center with a
/// subgradient taken at the jittered point stays sound: eta below
/// 1/(4 n^2 Xmax) keeps |jitter' x*| under 1/4, while the target set
/// needs slack 1/2.
fn detie_step(n: usize, bg: &Rational) -> Rational {
    let bg_f = bg.to_f64().unwrap_or(1.0).max(1.0);
    let mut factorial = 1f64;
    for i in 2..=n {
        factorial *= i as f64;
    }
    let xmax = (factorial * bg_f).max(1.0);
    let exponent = (4.0 * (n * n) as f64 * xmax).log2().ceil() as u32 + 2;
    Rational::new(BigInt::one(), BigInt::one() << exponent.clamp(16, 512))
}

/// Strictifies the descending order of `w` by adding eta * (n - 1 - pos)
/// along its canonical ordering. The bonus reinforces the existing order,
/// so the result has no ties for any positive eta.
fn detie(w: &[Rational], eta: &Rational) -> Result<Vec<Rational>, Error> {
    let ordering = sort_elements(w)?;
    let n = w.len();
    let mut out = w.to_vec();
    for pos in 0..n {
        let elem = ordering.element_at(pos);
        if pos + 1 < n {
            out[elem] += eta * rat((n - 1 - pos) as i64);
        }
    }
    Ok(out)
}

fn membership_search(
    g: &SetFunction,
    k: usize,
    bg: &Rational,
    opts: &MembershipOptions,
) -> Result<MembershipVerdict, Error> {
    let n = g.n();
    let budget = opts
        .budget
        .or_else(budget_from_env)
        .unwrap_or_else(|| default_budget(n, bg));
    let eta = detie_step(n, bg);
    let mut oracle = SupportOracle::new(g, k)?;
    let mut ellipsoid = EllipsoidState::initial_box(n);
    let mut pool: Vec<Vec<Rational>> = Vec::new();
    let mut calls = 0usize;

    while ellipsoid.iteration < budget {
        if let Some(facet) = ellipsoid.violated_box_facet() {
            ellipsoid.cut(&facet)?;
            continue;
        }
        let w_center = detie(&ellipsoid.center, &eta)?;
        log::trace!(
            "ellipsoid iteration {}: querying center, pool size {}",
            ellipsoid.iteration,
            pool.len()
        );
        match probe(g, k, &mut oracle, &w_center, &mut calls)? {
            Probe::Witness(t) => return MembershipVerdict::witness(g, t, calls),
            Probe::NonnegativeVertex => return Ok(MembershipVerdict::nonnegative(calls)),
            Probe::Vertex(x) => {
                let subgradient = x.clone();
                push_vertex(&mut pool, x);
                match certify_or_separate(&pool)? {
                    Pool::Certified => return Ok(MembershipVerdict::nonnegative(calls)),
                    Pool::Separator(w_sep) => {
                        // Keep the jittered point only while it still
                        // strictly separates the pool.
                        let w_sep = {
                            let jittered = detie(&w_sep, &eta)?;
                            if strictly_separates(&jittered, &pool) {
                                jittered
                            } else {
                                w_sep
                            }
                        };
                        match probe(g, k, &mut oracle, &w_sep, &mut calls)? {
                            Probe::Witness(t) => return MembershipVerdict::witness(g, t, calls),
                            Probe::NonnegativeVertex => {
                                return Ok(MembershipVerdict::nonnegative(calls))
                            }
                            Probe::Vertex(x) => {
                                push_vertex(&mut pool, x);
                                if let Pool::Certified = certify_or_separate(&pool)? {
                                    return Ok(MembershipVerdict::nonnegative(calls));
                                }
                            }
                        }
                    }
                }
                ellipsoid.cut(&subgradient)?;
            }
        }
    }
    log::debug!("membership budget of {budget} iterations exhausted without a witness");
    Ok(MembershipVerdict::nonnegative(calls))
}

enum Probe {
    Witness(Subset),
    /// The oracle's vertex is itself componentwise nonnegative, hence a
    /// point of P(g) proving 0 in P(g).
    NonnegativeVertex,
    Vertex(Vec<Rational>),
}

/// One oracle query with every witness short-circuit applied.
fn probe(
    g: &SetFunction,
    k: usize,
    oracle: &mut SupportOracle,
    w: &[Rational],
    calls: &mut usize,
) -> Result<Probe, Error> {
    // Family pre-scan: negative values inside the constraint family for
    // this ordering are witnesses without any LP work.
    let ordering = sort_elements(w)?;
    let family = build_family(&ordering, k)?;
    for t in family.members() {
        if g.eval(*t).is_negative() {
            return Ok(Probe::Witness(*t));
        }
    }
    let eval = oracle.query(w)?;
    *calls += 1;
    for t in &eval.dual_support {
        if g.eval(*t).is_negative() {
            return Ok(Probe::Witness(*t));
        }
    }
    if eval.value.is_negative() {
        // h(w) < 0, yet the perturbed support was clean: the unperturbed
        // dual optimum sums to h(w) < 0 and must expose a negative set.
        let lp = oracle.assemble_lp(&eval.family, w.to_vec());
        let sol = solve_with_starting_basis(&lp, &eval.basis)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::InternalConsistency(format!(
                "witness hunt program ended {:?}",
                sol.status
            )));
        }
        for (j, t) in eval.family.members().iter().enumerate() {
            if sol.y[j].is_positive() && g.eval(*t).is_negative() {
                return Ok(Probe::Witness(*t));
            }
        }
        return Err(Error::InternalConsistency(
            "negative maximum without a negative set in the dual support".into(),
        ));
    }
    if eval.x.iter().all(|v| !v.is_negative()) {
        return Ok(Probe::NonnegativeVertex);
    }
    Ok(Probe::Vertex(eval.x))
}

fn push_vertex(pool: &mut Vec<Vec<Rational>>, x: Vec<Rational>) {
    if !pool.contains(&x) {
        pool.push(x);
    }
}

enum Pool {
    Certified,
    Separator(Vec<Rational>),
}

/// True when every pool vertex has a strictly negative inner product
/// with the candidate weights.
fn strictly_separates(cand: &[Rational], pool: &[Vec<Rational>]) -> bool {
    pool.iter().all(|x| {
        let dot: Rational = cand.iter().zip(x).map(|(a, b)| a * b).sum();
        dot.is_negative()
    })
}

/// Either finds a convex combination of pool vertices that is
/// componentwise nonnegative (an exact certificate of 0 in P(g)) or a
/// nonnegative weight vector under which every pool vertex is strictly
/// negative (the next query direction).
fn certify_or_separate(pool: &[Vec<Rational>]) -> Result<Pool, Error> {
    let n = pool[0].len();
    let rows = n + 1;
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(pool.len() + n);
    for x in pool {
        let mut col: Vec<Rational> = x.clone();
        col.push(Rational::one());
        columns.push(col);
    }
    for i in 0..n {
        let mut col = vec![Rational::zero(); rows];
        col[i] = -Rational::one();
        columns.push(col);
    }
    let mut b = vec![Rational::zero(); rows];
    b[n] = Rational::one();
    let c = vec![Rational::zero(); columns.len()];
    let lp = StandardFormLp::new(columns, b, c)?;
    let sol = solve_standard_form(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(Pool::Certified),
        LpStatus::Infeasible => {
            let pi = sol.farkas.ok_or_else(|| {
                Error::InternalConsistency("infeasible program without a certificate".into())
            })?;
            let mut w: Vec<Rational> = pi[..n].to_vec();
            debug_assert!(w.iter().all(|v| !v.is_negative()));
            // Normalize to the box by a power of two and round; fall back
            // to the exact vector if rounding breaks strict separation.
            if let Some(max) = w.iter().cloned().max() {
                if max.is_positive() {
                    let bits = (max.to_f64().unwrap_or(1.0).log2().ceil()) as i64;
                    let scale = if bits >= 0 {
                        Rational::new(BigInt::one(), BigInt::one() << bits.unsigned_abs() as u32)
                    } else {
                        Rational::from_integer(BigInt::one() << bits.unsigned_abs() as u32)
                    };
                    for v in &mut w {
                        *v *= &scale;
                    }
                }
            }
            let rounded: Vec<Rational> = w
                .iter()
                .map(|v| {
                    let r = round_to_dyadic(v, 48);
                    if r.is_negative() {
                        Rational::zero()
                    } else {
                        r
                    }
                })
                .collect();
            if strictly_separates(&rounded, pool) {
                Ok(Pool::Separator(rounded))
            } else if strictly_separates(&w, pool) {
                Ok(Pool::Separator(w))
            } else {
                Err(Error::InternalConsistency(
                    "infeasibility certificate does not separate the vertex pool".into(),
                ))
            }
        }
        LpStatus::Unbounded => Err(Error::InternalConsistency(
            "feasibility program reported unbounded".into(),
        )),
    }
}

/// One binary-search step of [`minimize`].
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub shift: Rational,
    pub verdict: MembershipKind,
}

/// Result of minimizing an integer-valued k-distant function.
#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub min_value: Rational,
    pub argmin: Subset,
    pub trace: Vec<TraceStep>,
    /// f(empty), subtracted during normalization and added back here.
    pub offset: Rational,
    pub oracle_calls: usize,
}

/// Options forwarded to the membership search.
pub type MinimizeOptions = MembershipOptions;

/// Finds an exact minimizer of an integer-valued, declared k-distant
/// function by binary search over nonempty shifts.
///
/// A wrong declaration cannot produce a wrong witness (witnesses are
/// re-evaluated), but it can make a "nonnegative" verdict wrong; the
/// `verify` option cross-checks exhaustively for n <= 24.
pub fn minimize(
    f: &SetFunction,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult, Error> {
    let n = f.n();
    if k < 2 || k > n {
        return Err(Error::DistanceOutOfRange { k, n });
    }
    if let Some(values) = f.dense_values() {
        if let Some(bad) = values.iter().position(|v| !v.is_integer()) {
            return Err(Error::NotIntegerValued(Subset(bad as u64)));
        }
    }
    let (f0, offset) = normalize(f);
    let bounds = value_bounds(&f0, k)?;
    // min f0 >= f0(S) - M, so the smallest nonnegative-making shift is at
    // most max(0, M - f0(S)).
    let hi_rat = (&bounds.small_set_sum - f0.eval(f0.ground().full_set())).max(Rational::zero());
    if !hi_rat.is_integer() {
        return Err(Error::NotIntegerValued(Subset::EMPTY));
    }
    let mut lo = BigInt::zero();
    let mut hi = hi_rat.to_integer();
    let bg = &bounds.abs_bound + &hi_rat;
    let mut trace = Vec::new();
    let mut oracle_calls = 0usize;
    let mut witnesses: Vec<(BigInt, Subset)> = Vec::new();

    while lo < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        let shift = Rational::from_integer(mid.clone());
        let g = shift_nonempty(&f0, &shift)?;
        let verdict = membership_zero(&g, k, &bg, opts)?;
        oracle_calls += verdict.oracle_calls;
        log::debug!("shift {mid}: {:?}", verdict.kind);
        trace.push(TraceStep { shift: shift.clone(), verdict: verdict.kind.clone() });
        match verdict.kind {
            MembershipKind::Nonnegative => hi = mid,
            MembershipKind::Witness { set, .. } => {
                witnesses.push((mid.clone(), set));
                lo = mid + 1;
            }
        }
    }
    let smallest_shift = lo;
    if smallest_shift.is_zero() {
        return Ok(MinimizeResult {
            min_value: offset.clone(),
            argmin: Subset::EMPTY,
            trace,
            offset,
            oracle_calls,
        });
    }
    let below = &smallest_shift - BigInt::one();
    let argmin = match witnesses.iter().find(|(c, _)| *c == below) {
        Some((_, t)) => *t,
        None => {
            let shift = Rational::from_integer(below);
            let g = shift_nonempty(&f0, &shift)?;
            let verdict = membership_zero(&g, k, &bg, opts)?;
            oracle_calls += verdict.oracle_calls;
            trace.push(TraceStep { shift, verdict: verdict.kind.clone() });
            match verdict.kind {
                MembershipKind::Witness { set, .. } => set,
                MembershipKind::Nonnegative => {
                    return Err(Error::InternalConsistency(
                        "membership flipped verdicts across adjacent shifts".into(),
                    ))
                }
            }
        }
    };
    let min_value_normalized = f0.eval(argmin);
    if min_value_normalized != -Rational::from_integer(smallest_shift) {
        return Err(Error::InternalConsistency(format!(
            "witness value {min_value_normalized} does not match the binary search; \
             the declared distance parameter is likely invalid"
        )));
    }
    let result = MinimizeResult {
        min_value: &min_value_normalized + &offset,
        argmin,
        trace,
        offset,
        oracle_calls,
    };
    if opts.verify && n <= SCAN_GUARD {
        let (min, _) = bruteforce_minimize(f)?;
        if min != result.min_value {
            return Err(Error::InternalConsistency(format!(
                "minimize returned {} but the exhaustive minimum is {min}",
                result.min_value
            )));
        }
    }
    Ok(result)
}
