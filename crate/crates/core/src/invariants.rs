//! The infinitesimal method: a differential function is invariant exactly
//! when every prolonged generator annihilates it. Built on that test are
//! generic orbit dimensions, the counting sequences `i_n, j_n, s_n, h_n`,
//! functional independence, invariant differential operators and a linear
//! ansatz search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{linalg, Monomial, Polynomial, Rational, RationalExpr};
use crate::calculus::{total_derivative, ProlongedVectorField, VectorField};
use crate::error::{Error, Result};
use crate::jetspace::{dim_jet, q_n, JetSpace, JetVar};

/// Groups of at least this dimension are limited to
/// [`LARGE_GROUP_MAX_ORDER`] unless large orders are enabled.
///
/// For reference, the eight `sl3` generators prolonged to order 8 have
/// polynomial coefficients of at most 9 terms, the largest being the `u_(8)`
/// coefficient of `xu∂x + u²∂u`; growth is polynomial in the order but the sampled
/// rank computations and any ansatz search over such orders get expensive.
pub const LARGE_GROUP_DIM: usize = 8;
pub const LARGE_GROUP_MAX_ORDER: usize = 12;

/// A finite list of generators spanning the Lie algebra of an action on
/// `R^p x R^q`.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    name: String,
    p: usize,
    q: usize,
    generators: Vec<VectorField>,
    allow_large_orders: bool,
}

impl LieAlgebraBasis {
    pub fn new(name: impl Into<String>, p: usize, q: usize, generators: Vec<VectorField>) -> Result<Self> {
        if generators.iter().any(|g| (g.p(), g.q()) != (p, q)) {
            return Err(Error::DimensionMismatch { p, q });
        }
        Ok(LieAlgebraBasis {
            name: name.into(),
            p,
            q,
            generators,
            allow_large_orders: false,
        })
    }

    /// Projective action `x -> (ax+b)/(cx+d)` on the independent variable:
    /// `∂x, x∂x, x²∂x`.
    pub fn sl2() -> Self {
        let x = || RationalExpr::var(JetVar::x());
        let field = |xi: RationalExpr| VectorField::new(1, 1, vec![xi], vec![RationalExpr::zero()]).expect("valid field");
        let generators = vec![field(RationalExpr::one()), field(x()), field(&x() * &x())];
        LieAlgebraBasis::new("sl2", 1, 1, generators).expect("consistent preset")
    }

    /// Projective action of SL(3) on the plane `(x, u)`.
    pub fn sl3() -> Self {
        let x = RationalExpr::var(JetVar::x());
        let u = RationalExpr::var(JetVar::u(0));
        let (zero, one) = (RationalExpr::zero(), RationalExpr::one());
        let field = |xi: &RationalExpr, phi: &RationalExpr| {
            VectorField::new(1, 1, vec![xi.clone()], vec![phi.clone()]).expect("valid field")
        };
        let generators = vec![
            field(&one, &zero),
            field(&zero, &one),
            field(&x, &zero),
            field(&zero, &u),
            field(&zero, &x),
            field(&u, &zero),
            field(&(&x * &x), &(&x * &u)),
            field(&(&x * &u), &(&u * &u)),
        ];
        LieAlgebraBasis::new("sl3", 1, 1, generators).expect("consistent preset")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "sl2" => Some(LieAlgebraBasis::sl2()),
            "sl3" => Some(LieAlgebraBasis::sl3()),
            _ => None,
        }
    }

    pub const PRESETS: [&'static str; 2] = ["sl2", "sl3"];

    pub fn with_large_orders(mut self, allow: bool) -> Self {
        self.allow_large_orders = allow;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    /// `r`, the number of generators.
    pub fn group_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn space(&self, n: usize) -> JetSpace {
        JetSpace::new(self.p, self.q, n)
    }

    fn check_order(&self, n: usize) -> Result<()> {
        let r = self.group_dim();
        if r >= LARGE_GROUP_DIM && n > LARGE_GROUP_MAX_ORDER && !self.allow_large_orders {
            return Err(Error::OrderLimit {
                n,
                limit: LARGE_GROUP_MAX_ORDER,
                r,
            });
        }
        Ok(())
    }

    pub fn prolong(&self, n: usize) -> Result<Vec<ProlongedVectorField>> {
        self.check_order(n)?;
        Ok(self.generators.iter().map(|g| g.prolong(n)).collect())
    }

    /// Structure constants `c[a][b][k]` with `[v_a, v_b] = Σ_k c[a][b][k] v_k`,
    /// or [`Error::NotClosed`] for the first pair whose bracket leaves the span.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        let r = self.group_dim();
        let mut constants = vec![vec![vec![Rational::zero(); r]; r]; r];
        for a in 0..r {
            for b in 0..r {
                let target = self.generators[a].bracket(&self.generators[b])?;
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for comp in 0..self.p + self.q {
                    let pick = |v: &VectorField| {
                        if comp < self.p {
                            v.xi()[comp].clone()
                        } else {
                            v.phi()[comp - self.p].clone()
                        }
                    };
                    let mut exprs: Vec<RationalExpr> = self.generators.iter().map(pick).collect();
                    exprs.push(pick(&target));
                    let numerators = over_common_denominator(&exprs);
                    let (target_num, basis_nums) = numerators.split_last().expect("target present");
                    let monomials: BTreeSet<&Monomial> = numerators.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
                    for m in monomials {
                        rows.push(basis_nums.iter().map(|p| p.coefficient(m)).collect());
                        rhs.push(target_num.coefficient(m));
                    }
                }
                let solution = if r == 0 {
                    rhs.iter().all(Zero::is_zero).then(Vec::new)
                } else {
                    linalg::solve(&rows, &rhs)
                };
                constants[a][b] = solution.ok_or(Error::NotClosed { a, b })?;
            }
        }
        Ok(constants)
    }
}

/// Numerators of `exprs` rewritten over one common denominator (the product
/// of their distinct denominators).
fn over_common_denominator(exprs: &[RationalExpr]) -> Vec<Polynomial> {
    let mut distinct: Vec<&Polynomial> = Vec::new();
    for e in exprs {
        if !distinct.contains(&e.denominator()) {
            distinct.push(e.denominator());
        }
    }
    exprs
        .iter()
        .map(|e| {
            distinct
                .iter()
                .filter(|d| **d != e.denominator())
                .fold(e.numerator().clone(), |acc, d| &acc * d)
        })
        .collect()
}

/// Per-generator residuals `v_k^(n)(I)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVerdict {
    pub residuals: Vec<RationalExpr>,
}

impl InvariantVerdict {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(RationalExpr::is_zero)
    }

    /// `(zero-based generator index, residual)` for every generator that
    /// does not annihilate the candidate.
    pub fn failures(&self) -> impl Iterator<Item = (usize, &RationalExpr)> {
        self.residuals.iter().enumerate().filter(|(_, r)| !r.is_zero())
    }
}

/// Applies every prolonged generator to `candidate`; exact.
pub fn is_invariant(basis: &LieAlgebraBasis, n: usize, candidate: &RationalExpr) -> Result<InvariantVerdict> {
    let needed = candidate.order();
    if needed > n {
        return Err(Error::OrderTooHigh { needed, available: n });
    }
    let residuals = basis
        .prolong(n)?
        .iter()
        .map(|w| w.apply(candidate))
        .collect::<Result<_>>()?;
    Ok(InvariantVerdict { residuals })
}

/// Random generic points for exact rank estimation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    /// Attempts per sample before giving up on singular points.
    pub retry_cap: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            samples: 5,
            seed: 0,
            retry_cap: 100,
        }
    }
}

type Point = BTreeMap<JetVar, Rational>;

/// Coordinates are `a/b` with `a` in `[-50, 50]` and `b` in `[1, 10]`;
/// derivative coordinates of order at least one are never zero.
fn sample_point(space: &JetSpace, rng: &mut impl Rng) -> Point {
    space
        .vars()
        .into_iter()
        .map(|v| {
            let nonzero = v.order() >= 1;
            let num = loop {
                let a: i64 = rng.gen_range(-50..=50);
                if !(nonzero && a == 0) {
                    break a;
                }
            };
            let den: i64 = rng.gen_range(1..=10);
            (v, Rational::new(num.into(), den.into()))
        })
        .collect()
}

/// Maximal rank over samples, with the rank seen at each sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEstimate {
    pub rank: usize,
    pub per_sample: Vec<usize>,
}

impl RankEstimate {
    pub fn is_stable(&self) -> bool {
        self.per_sample.iter().all(|&r| r == self.rank)
    }
}

#[derive(Clone, Copy)]
enum Purpose {
    Orbit = 1,
    Jacobian = 2,
}

fn sampled_rank(
    matrix: &[Vec<Arc<RationalExpr>>],
    space: &JetSpace,
    sampling: &Sampling,
    purpose: Purpose,
) -> Result<RankEstimate> {
    let samples = sampling.samples.max(1);
    let per_sample = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            rng.set_stream(((purpose as u64) << 56) ^ ((space.n as u64) << 24) ^ s as u64);
            for _ in 0..sampling.retry_cap.max(1) {
                let point = sample_point(space, &mut rng);
                let lookup = |v: &JetVar| point.get(v).cloned();
                let evaluated: Result<Vec<Vec<Rational>>> = matrix
                    .iter()
                    .map(|row| row.iter().map(|e| e.evaluate(&lookup)).collect())
                    .collect();
                match evaluated {
                    Ok(values) => return Ok(linalg::rank(&values)),
                    Err(Error::SingularPoint) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::SamplingExhausted(sampling.retry_cap))
        })
        .collect::<Result<Vec<usize>>>()?;
    let rank = per_sample.iter().copied().max().unwrap_or(0);
    Ok(RankEstimate { rank, per_sample })
}

fn orbit_rank(fields: &[ProlongedVectorField], space: &JetSpace, sampling: &Sampling) -> Result<RankEstimate> {
    let vars = space.vars();
    let matrix = fields
        .iter()
        .map(|w| vars.iter().map(|v| w.coefficient(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    sampled_rank(&matrix, space, sampling, Purpose::Orbit)
}

/// `s_n`: the generic rank of the `r x dim J^(n)` matrix of prolonged
/// generator coefficients.
pub fn generic_orbit_dim(basis: &LieAlgebraBasis, n: usize, sampling: &Sampling) -> Result<usize> {
    let fields = basis.prolong(n)?;
    Ok(orbit_rank(&fields, &basis.space(n), sampling)?.rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub n: usize,
    #[serde(rename = "dimJ")]
    pub dim_jet: usize,
    pub s: usize,
    pub h: usize,
    pub i: usize,
    pub j: i64,
    pub q_n: Option<usize>,
}

/// A violated counting law, or an unstable rank sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportFlag {
    InvariantsDecrease { n: usize },
    InvariantsJumpPastNewCoordinates { n: usize },
    OrbitShrinks { n: usize },
    OrbitJumpPastNewCoordinates { n: usize },
    OrbitExceedsGroup { n: usize },
    UnstableSampling { n: usize, ranks: Vec<usize> },
}

impl ReportFlag {
    /// Whether this flag records a broken counting inequality (as opposed to
    /// a sampling diagnostic).
    pub fn is_inequality(&self) -> bool {
        !matches!(self, ReportFlag::UnstableSampling { .. })
    }
}

impl fmt::Display for ReportFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportFlag::InvariantsDecrease { n } => write!(f, "n={n}: i_n < i_(n-1)"),
            ReportFlag::InvariantsJumpPastNewCoordinates { n } => write!(f, "n={n}: i_n > i_(n-1) + q_n"),
            ReportFlag::OrbitShrinks { n } => write!(f, "n={n}: s_n < s_(n-1)"),
            ReportFlag::OrbitJumpPastNewCoordinates { n } => write!(f, "n={n}: s_n > s_(n-1) + q_n"),
            ReportFlag::OrbitExceedsGroup { n } => write!(f, "n={n}: s_n exceeds the group dimension"),
            ReportFlag::UnstableSampling { n, ranks } => {
                write!(f, "n={n}: sampled ranks disagree {ranks:?}")
            }
        }
    }
}

/// Per-order table of `dim J^(n), s_n, h_n, i_n, j_n, q_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub group: String,
    #[serde(skip)]
    pub group_dim: usize,
    pub rows: Vec<DimensionRow>,
    #[serde(skip)]
    pub flags: Vec<ReportFlag>,
}

impl DimensionReport {
    pub fn has_inequality_violation(&self) -> bool {
        self.flags.iter().any(ReportFlag::is_inequality)
    }

    pub fn column(&self, pick: impl Fn(&DimensionRow) -> i64) -> Vec<i64> {
        self.rows.iter().map(pick).collect()
    }
}

pub fn dimension_report(basis: &LieAlgebraBasis, n_max: usize, sampling: &Sampling) -> Result<DimensionReport> {
    let fields = basis.prolong(n_max)?;
    let r = basis.group_dim();
    let (p, q) = (basis.p(), basis.q());
    let mut rows: Vec<DimensionRow> = Vec::with_capacity(n_max + 1);
    let mut flags = Vec::new();
    for n in 0..=n_max {
        let estimate = orbit_rank(&fields, &basis.space(n), sampling)?;
        if !estimate.is_stable() {
            flags.push(ReportFlag::UnstableSampling {
                n,
                ranks: estimate.per_sample.clone(),
            });
        }
        let dim = dim_jet(p, q, n);
        let s = estimate.rank;
        let i = dim - s;
        let prev_i = rows.last().map_or(0, |row| row.i);
        let row = DimensionRow {
            n,
            dim_jet: dim,
            s,
            h: r - s,
            i,
            j: i as i64 - prev_i as i64,
            q_n: (n >= 1).then(|| q_n(p, q, n)),
        };
        if s > r {
            flags.push(ReportFlag::OrbitExceedsGroup { n });
        }
        if let (Some(prev), Some(qn)) = (rows.last(), row.q_n) {
            if row.i < prev.i {
                flags.push(ReportFlag::InvariantsDecrease { n });
            }
            if row.i > prev.i + qn {
                flags.push(ReportFlag::InvariantsJumpPastNewCoordinates { n });
            }
            if row.s < prev.s {
                flags.push(ReportFlag::OrbitShrinks { n });
            }
            if row.s > prev.s + qn {
                flags.push(ReportFlag::OrbitJumpPastNewCoordinates { n });
            }
        }
        rows.push(row);
    }
    Ok(DimensionReport {
        group: basis.name().to_string(),
        group_dim: r,
        rows,
        flags,
    })
}

fn check_orders(exprs: &[RationalExpr], space: &JetSpace) -> Result<()> {
    for e in exprs {
        if e.order() > space.n {
            return Err(Error::OrderTooHigh {
                needed: e.order(),
                available: space.n,
            });
        }
        if !e.vars().iter().all(|v| space.contains(v)) {
            return Err(Error::DimensionMismatch { p: space.p, q: space.q });
        }
    }
    Ok(())
}

fn jacobian(exprs: &[RationalExpr], space: &JetSpace) -> Vec<Vec<Arc<RationalExpr>>> {
    let vars = space.vars();
    exprs
        .iter()
        .map(|e| vars.iter().map(|v| Arc::new(e.partial_derive(v))).collect())
        .collect()
}

/// Generic rank of the Jacobian `∂I_a/∂z` over all coordinates `z` of the
/// space; the functions are independent iff this equals their number.
pub fn functional_independence(exprs: &[RationalExpr], space: &JetSpace, sampling: &Sampling) -> Result<usize> {
    check_orders(exprs, space)?;
    if exprs.is_empty() {
        return Ok(0);
    }
    Ok(sampled_rank(&jacobian(exprs, space), space, sampling, Purpose::Jacobian)?.rank)
}

/// `dx ∧ du^(n-1) ∧ dI_1 ∧ ... ∧ dI_k ≠ 0` on `J^(n)`.
pub fn strict_independence(exprs: &[RationalExpr], space: &JetSpace, sampling: &Sampling) -> Result<bool> {
    check_orders(exprs, space)?;
    let vars = space.vars();
    let lower: Vec<&JetVar> = vars
        .iter()
        .filter(|v| v.is_independent() || v.order() < space.n)
        .collect();
    let mut matrix = jacobian(exprs, space);
    for l in &lower {
        matrix.push(
            vars.iter()
                .map(|v| Arc::new(if v == *l { RationalExpr::one() } else { RationalExpr::zero() }))
                .collect(),
        );
    }
    let target = exprs.len() + lower.len();
    Ok(sampled_rank(&matrix, space, sampling, Purpose::Jacobian)?.rank == target)
}

fn check_one_independent(e: &RationalExpr) -> Result<()> {
    let ok = e.vars().iter().all(|v| match v {
        JetVar::Independent(i) => *i == 0,
        JetVar::Dependent { index, .. } => index.dim() == 1,
    });
    if ok {
        Ok(())
    } else {
        Err(Error::NotOneIndependent)
    }
}

/// `dJ/dI = D_x J / D_x I` for a single independent variable.
pub fn invariant_diff_op(i: &RationalExpr, j: &RationalExpr) -> Result<RationalExpr> {
    check_one_independent(i)?;
    check_one_independent(j)?;
    let di = total_derivative(i, 0);
    if di.is_zero() {
        return Err(Error::DegenerateOperator);
    }
    total_derivative(j, 0).div(&di)
}

/// `[D J, D² J, ..., D^k J]` with `D = (D_x I)^(-1) D_x`.
pub fn iterate_diff_op(i: &RationalExpr, j: &RationalExpr, k: usize) -> Result<Vec<RationalExpr>> {
    let mut out = Vec::with_capacity(k);
    let mut current = j.clone();
    for _ in 0..k {
        current = invariant_diff_op(i, &current)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// All monomials in `vars` of total degree at most `max_degree`.
fn monomials_up_to(vars: &[JetVar], max_degree: u32) -> Vec<Monomial> {
    fn go(vars: &[JetVar], left: u32, acc: &mut Vec<(JetVar, u32)>, out: &mut Vec<Monomial>) {
        let Some((first, rest)) = vars.split_first() else {
            out.push(Monomial::from_factors(acc.iter().cloned()));
            return;
        };
        for e in 0..=left {
            acc.push((first.clone(), e));
            go(rest, left - e, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(vars, max_degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Invariants of the form `P / m` with `P` a polynomial of total degree at
/// most `max_degree` in the coordinates of `J^(n)` and `m` a fixed monomial.
///
/// The annihilation conditions are linear in the coefficients of `P`; the
/// result is a basis of their solution space, each `P` scaled to leading
/// coefficient one. When `m = 1` the constant solution is left out.
pub fn search_invariants(
    basis: &LieAlgebraBasis,
    n: usize,
    denominator: &Monomial,
    max_degree: u32,
) -> Result<Vec<RationalExpr>> {
    let space = basis.space(n);
    let den = RationalExpr::monomial(denominator.clone());
    check_orders(std::slice::from_ref(&den), &space)?;
    let fields = basis.prolong(n)?;
    let ansatz: Vec<Monomial> = monomials_up_to(&space.vars(), max_degree)
        .into_iter()
        .filter(|m| !(denominator.is_one() && m.is_one()))
        .collect();
    if ansatz.is_empty() {
        return Ok(Vec::new());
    }
    let candidates: Vec<RationalExpr> = ansatz
        .iter()
        .map(|m| RationalExpr::monomial(m.clone()).div(&den))
        .collect::<Result<_>>()?;

    let blocks = fields
        .par_iter()
        .map(|w| -> Result<Vec<Vec<Rational>>> {
            let images = candidates.iter().map(|c| w.apply(c)).collect::<Result<Vec<_>>>()?;
            let numerators = over_common_denominator(&images);
            let monomials: BTreeSet<&Monomial> = numerators.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
            Ok(monomials
                .into_iter()
                .map(|m| numerators.iter().map(|p| p.coefficient(m)).collect())
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Rational>> = blocks.into_iter().flatten().collect();

    linalg::nullspace(&rows, ansatz.len())
        .into_iter()
        .map(|coeffs| {
            let p = Polynomial::from_terms(ansatz.iter().cloned().zip(coeffs));
            let lead = p.leading_coefficient();
            let p = p.scale(&lead.recip());
            RationalExpr::new(p, Polynomial::term(Rational::one(), denominator.clone()))
        })
        .collect()
}
