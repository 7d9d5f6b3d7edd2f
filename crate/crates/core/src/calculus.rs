//! Vector fields on the total space, total derivatives, and prolongation to
//! jet space.

use std::collections::HashMap;
use std::sync::{Arc, PoisonError, RwLock};

use crate::algebra::{Polynomial, Rational, RationalExpr};
use crate::error::{Error, Result};
use crate::jetspace::{enumerate_vars, JetSpace, JetVar, MultiIndex};

/// `v = Σ ξ^i(x,u) ∂/∂x^i + Σ φ^a(x,u) ∂/∂u^a` on `E = R^p x R^q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    p: usize,
    q: usize,
    xi: Vec<RationalExpr>,
    phi: Vec<RationalExpr>,
}

impl VectorField {
    /// Checks that every component is a function of `(x, u)` only.
    pub fn new(p: usize, q: usize, xi: Vec<RationalExpr>, phi: Vec<RationalExpr>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidField("need p, q >= 1".into()));
        }
        if xi.len() != p || phi.len() != q {
            return Err(Error::InvalidField(format!(
                "expected {p} independent and {q} dependent components, got {} and {}",
                xi.len(),
                phi.len()
            )));
        }
        let base = JetSpace::new(p, q, 0);
        for e in xi.iter().chain(&phi) {
            if let Some(bad) = e.vars().into_iter().find(|v| !base.contains(v)) {
                return Err(Error::InvalidField(format!(
                    "component {} depends on {}, which is not a coordinate of the total space",
                    e.display_in(&base),
                    bad
                )));
            }
        }
        Ok(VectorField { p, q, xi, phi })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        VectorField {
            p,
            q,
            xi: vec![RationalExpr::zero(); p],
            phi: vec![RationalExpr::zero(); q],
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn xi(&self) -> &[RationalExpr] {
        &self.xi
    }

    pub fn phi(&self) -> &[RationalExpr] {
        &self.phi
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().chain(&self.phi).all(RationalExpr::is_zero)
    }

    /// Coordinate functions of `E` paired with the field's components.
    fn components(&self) -> impl Iterator<Item = (JetVar, &RationalExpr)> {
        let p = self.p;
        let xs = self.xi.iter().enumerate().map(|(i, e)| (JetVar::Independent(i), e));
        let us = self
            .phi
            .iter()
            .enumerate()
            .map(move |(a, e)| (JetVar::dependent(a, MultiIndex::zero(p)), e));
        xs.chain(us)
    }

    /// `v(f)` for a function on the total space.
    pub fn apply(&self, f: &RationalExpr) -> RationalExpr {
        self.components()
            .filter(|(_, c)| !c.is_zero())
            .map(|(z, c)| c * &f.partial_derive(&z))
            .sum()
    }

    /// `Q^a = φ^a − Σ_i ξ^i u^a_i`.
    pub fn characteristic(&self) -> Vec<RationalExpr> {
        (0..self.q)
            .map(|a| {
                let correction: RationalExpr = (0..self.p)
                    .map(|i| {
                        let ua_i = JetVar::dependent(a, MultiIndex::zero(self.p).incremented(i));
                        &self.xi[i] * &RationalExpr::var(ua_i)
                    })
                    .sum();
                &self.phi[a] - &correction
            })
            .collect()
    }

    /// Componentwise `[v, w]^k = v(w^k) − w(v^k)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check_same_shape(other)?;
        let comp = |a: &RationalExpr, b: &RationalExpr| &self.apply(b) - &other.apply(a);
        Ok(VectorField {
            p: self.p,
            q: self.q,
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| comp(a, b)).collect(),
            phi: self.phi.iter().zip(&other.phi).map(|(a, b)| comp(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField {
            p: self.p,
            q: self.q,
            xi: self.xi.iter().map(|e| e.scale(c)).collect(),
            phi: self.phi.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.check_same_shape(other)?;
        Ok(VectorField {
            p: self.p,
            q: self.q,
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
            phi: self.phi.iter().zip(&other.phi).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_same_shape(&self, other: &VectorField) -> Result<()> {
        if (self.p, self.q) != (other.p, other.q) {
            return Err(Error::DimensionMismatch { p: self.p, q: self.q });
        }
        Ok(())
    }

    /// `n`-th prolongation from the characteristic:
    /// `φ^J_a = D_J Q^a + Σ_i ξ^i u^a_{J,i}`.
    pub fn prolong(&self, n: usize) -> ProlongedVectorField {
        ProlongedVectorField::new(self.clone(), n, Rule::Characteristic)
    }

    /// `n`-th prolongation by the recursion
    /// `φ^{J,i}_a = D_i φ^J_a − Σ_k D_i(ξ^k) u^a_{J,k}`.
    pub fn prolong_recursive(&self, n: usize) -> ProlongedVectorField {
        ProlongedVectorField::new(self.clone(), n, Rule::Recursive)
    }
}

/// Total derivative `D_i` of a polynomial differential function.
fn total_derivative_poly(f: &Polynomial, i: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for v in f.vars() {
        let df = f.derive(&v);
        match &v {
            JetVar::Independent(k) if *k == i => out = &out + &df,
            JetVar::Independent(_) => {}
            JetVar::Dependent { .. } => {
                let next = v.incremented(i).expect("dependent coordinate");
                out = &out + &(&df * &Polynomial::var(next));
            }
        }
    }
    out
}

/// `D_i F = ∂F/∂x^i + Σ_{a,J} u^a_{J,i} ∂F/∂u^a_J`, with `i` zero-based.
///
/// Panics if `F` mentions a derivative coordinate with fewer than `i + 1`
/// independent directions.
pub fn total_derivative(f: &RationalExpr, i: usize) -> RationalExpr {
    let dn = total_derivative_poly(f.numerator(), i);
    if f.is_polynomial() {
        return RationalExpr::from(dn);
    }
    let den = f.denominator();
    let dd = total_derivative_poly(den, i);
    let num = &(&dn * den) - &(f.numerator() * &dd);
    RationalExpr::new(num, den.pow(2)).expect("square of a nonzero denominator")
}

/// `D_J F`, applying the `D_i` factors in increasing `i`.
pub fn total_derivative_multi(f: &RationalExpr, index: &MultiIndex) -> RationalExpr {
    let mut out = f.clone();
    for (i, &count) in index.counts().iter().enumerate() {
        for _ in 0..count {
            out = total_derivative(&out, i);
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rule {
    Characteristic,
    Recursive,
}

/// `v^(n) = Σ ξ^i ∂/∂x^i + Σ φ^J_a ∂/∂u^a_J` on `J^(n)`.
///
/// Coefficients are computed on first request and cached; the cache is
/// shared-read, and concurrent first requests for the same coordinate compute
/// identical values, of which the first stored wins.
#[derive(Debug)]
pub struct ProlongedVectorField {
    base: VectorField,
    order: usize,
    rule: Rule,
    characteristic: Vec<RationalExpr>,
    coefficients: RwLock<HashMap<JetVar, Arc<RationalExpr>>>,
    // D_J Q^a, keyed by (a, J)
    characteristic_derivatives: RwLock<HashMap<(usize, MultiIndex), Arc<RationalExpr>>>,
}

impl ProlongedVectorField {
    fn new(base: VectorField, order: usize, rule: Rule) -> Self {
        let characteristic = base.characteristic();
        let seeded: HashMap<JetVar, Arc<RationalExpr>> = base
            .components()
            .map(|(z, c)| (z, Arc::new(c.clone())))
            .collect();
        ProlongedVectorField {
            base,
            order,
            rule,
            characteristic,
            coefficients: RwLock::new(seeded),
            characteristic_derivatives: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &VectorField {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn space(&self) -> JetSpace {
        JetSpace::new(self.base.p, self.base.q, self.order)
    }

    /// The coefficient of `∂/∂var`.
    pub fn coefficient(&self, var: &JetVar) -> Result<Arc<RationalExpr>> {
        let space = self.space();
        if !space.with_order(usize::MAX).contains(var) {
            return Err(Error::DimensionMismatch { p: space.p, q: space.q });
        }
        if var.order() > self.order {
            return Err(Error::OrderTooHigh {
                needed: var.order(),
                available: self.order,
            });
        }
        if let Some(c) = self.coefficients.read().unwrap_or_else(PoisonError::into_inner).get(var) {
            return Ok(Arc::clone(c));
        }
        let JetVar::Dependent { component, index } = var else {
            unreachable!("independent coefficients are seeded at construction");
        };
        let computed = Arc::new(match self.rule {
            Rule::Characteristic => self.by_characteristic(*component, index),
            Rule::Recursive => self.by_recursion(*component, index)?,
        });
        let mut cache = self.coefficients.write().unwrap_or_else(PoisonError::into_inner);
        Ok(Arc::clone(cache.entry(var.clone()).or_insert(computed)))
    }

    fn characteristic_derivative(&self, component: usize, index: &MultiIndex) -> Arc<RationalExpr> {
        let key = (component, index.clone());
        if let Some(d) = self
            .characteristic_derivatives
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .get(&key)
        {
            return Arc::clone(d);
        }
        let value = match index.split_last() {
            None => self.characteristic[component].clone(),
            Some((prev, i)) => total_derivative(&self.characteristic_derivative(component, &prev), i),
        };
        let mut cache = self
            .characteristic_derivatives
            .write()
            .unwrap_or_else(PoisonError::into_inner);
        Arc::clone(cache.entry(key).or_insert_with(|| Arc::new(value)))
    }

    fn by_characteristic(&self, component: usize, index: &MultiIndex) -> RationalExpr {
        let djq = self.characteristic_derivative(component, index);
        let correction: RationalExpr = self
            .base
            .xi
            .iter()
            .enumerate()
            .filter(|(_, xi)| !xi.is_zero())
            .map(|(i, xi)| xi * &RationalExpr::var(JetVar::dependent(component, index.incremented(i))))
            .sum();
        &*djq + &correction
    }

    fn by_recursion(&self, component: usize, index: &MultiIndex) -> Result<RationalExpr> {
        let (prev, i) = index
            .split_last()
            .expect("order-zero coefficients are seeded at construction");
        let lower = self.coefficient(&JetVar::dependent(component, prev.clone()))?;
        let correction: RationalExpr = self
            .base
            .xi
            .iter()
            .enumerate()
            .map(|(k, xi)| {
                &total_derivative(xi, i) * &RationalExpr::var(JetVar::dependent(component, prev.incremented(k)))
            })
            .sum();
        Ok(&total_derivative(&lower, i) - &correction)
    }

    /// All coefficients of `J^(n)`, in the global variable order.
    pub fn coefficients(&self) -> Result<Vec<(JetVar, Arc<RationalExpr>)>> {
        enumerate_vars(&self.space())
            .into_iter()
            .map(|v| self.coefficient(&v).map(|c| (v, c)))
            .collect()
    }

    /// `v^(n)(F) = Σ ξ^i ∂F/∂x^i + Σ φ^J_a ∂F/∂u^a_J`.
    pub fn apply(&self, f: &RationalExpr) -> Result<RationalExpr> {
        let needed = f.order();
        if needed > self.order {
            return Err(Error::OrderTooHigh {
                needed,
                available: self.order,
            });
        }
        let mut terms = Vec::new();
        for z in f.vars() {
            let c = self.coefficient(&z)?;
            if !c.is_zero() {
                terms.push(&*c * &f.partial_derive(&z));
            }
        }
        Ok(terms.into_iter().sum())
    }
}

/// Coefficient of `∂/∂var` in the commutator `[v, w] = v∘w − w∘v` of two
/// prolonged fields, i.e. `v(w^var) − w(v^var)`.
pub fn commutator_coefficient(
    v: &ProlongedVectorField,
    w: &ProlongedVectorField,
    var: &JetVar,
) -> Result<RationalExpr> {
    Ok(&v.apply(&*w.coefficient(var)?)? - &w.apply(&*v.coefficient(var)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn x() -> RationalExpr {
        RationalExpr::var(JetVar::x())
    }
    fn u(k: u32) -> RationalExpr {
        RationalExpr::var(JetVar::u(k))
    }
    fn c(k: i64) -> RationalExpr {
        RationalExpr::integer(k)
    }
    fn field(xi: RationalExpr, phi: RationalExpr) -> VectorField {
        VectorField::new(1, 1, vec![xi], vec![phi]).unwrap()
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(field(&x() * &x(), c(0)).characteristic(), vec![-(&(&x() * &x()) * &u(1))]);
        assert_eq!(field(c(0), c(1)).characteristic(), vec![c(1)]);
        let v8 = field(&x() * &u(0), &u(0) * &u(0));
        assert_eq!(v8.characteristic(), vec![&(&u(0) * &u(0)) - &(&(&x() * &u(0)) * &u(1))]);
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&(&x() * &u(1)), 0), &u(1) + &(&x() * &u(2)));
        assert_eq!(total_derivative(&x(), 0), c(1));
        assert_eq!(total_derivative(&(&u(0) * &u(0)), 0), &c(2) * &(&u(0) * &u(1)));
        let q = u(1).div(&u(0)).unwrap();
        let expected = &u(2).div(&u(0)).unwrap() - &(&u(1) * &u(1)).div(&(&u(0) * &u(0))).unwrap();
        assert!(total_derivative(&q, 0).equals(&expected));
    }

    #[test]
    fn total_derivatives_commute_in_two_variables() {
        let space = JetSpace::new(2, 1, 3);
        let vars = space.vars();
        let f = &(&RationalExpr::var(vars[0].clone()) * &RationalExpr::var(vars[3].clone()).pow_int(2).unwrap())
            + &(&RationalExpr::var(vars[2].clone()) * &RationalExpr::var(vars[1].clone()));
        let d01 = total_derivative(&total_derivative(&f, 0), 1);
        let d10 = total_derivative(&total_derivative(&f, 1), 0);
        assert_eq!(d01, d10);
    }

    #[test]
    fn prolonged_scaling_and_projective_coefficients() {
        let v2 = field(x(), c(0)).prolong(6);
        let v3 = field(&x() * &x(), c(0)).prolong(6);
        for n in 1..=6u32 {
            let got = v2.coefficient(&JetVar::u(n)).unwrap();
            assert_eq!(*got, -(&c(n as i64) * &u(n)));
            let n_i = n as i64;
            let expected = -(&(&c(n_i * (n_i - 1)) * &u(n - 1)) + &(&(&c(2 * n_i) * &x()) * &u(n)));
            assert_eq!(*v3.coefficient(&JetVar::u(n)).unwrap(), expected);
        }
        let v6 = field(u(0), c(0)).prolong(1);
        assert_eq!(*v6.coefficient(&JetVar::u(1)).unwrap(), -(&u(1) * &u(1)));
    }

    #[test]
    fn order_zero_restriction_is_the_field() {
        let v = field(&x() * &u(0), &u(0) * &u(0));
        for w in [v.prolong(0), v.prolong_recursive(0), v.prolong(3)] {
            assert_eq!(*w.coefficient(&JetVar::x()).unwrap(), v.xi()[0]);
            assert_eq!(*w.coefficient(&JetVar::u(0)).unwrap(), v.phi()[0]);
        }
    }

    #[test]
    fn apply_examples() {
        let v1 = field(c(1), c(0)).prolong(4);
        assert!(v1.apply(&u(0)).unwrap().is_zero());
        let v2 = field(x(), c(0)).prolong(3);
        assert_eq!(v2.apply(&u(1)).unwrap(), -u(1));
        assert_eq!(
            v2.apply(&u(4)),
            Err(Error::OrderTooHigh { needed: 4, available: 3 })
        );
    }

    #[test]
    fn bracket_examples() {
        let d = field(c(1), c(0));
        let e = field(x(), c(0));
        let p = field(&x() * &x(), c(0));
        assert_eq!(d.bracket(&e).unwrap(), d);
        assert_eq!(e.bracket(&p).unwrap(), p);
        assert!(p.bracket(&p).unwrap().is_zero());
        let other = VectorField::zero(2, 1);
        assert!(d.bracket(&other).is_err());
    }

    #[test]
    fn rejects_fields_with_derivatives() {
        assert!(matches!(
            VectorField::new(1, 1, vec![u(1)], vec![c(0)]),
            Err(Error::InvalidField(_))
        ));
        assert!(VectorField::new(1, 1, vec![], vec![c(0)]).is_err());
    }

    #[test]
    fn linearity_of_prolongation() {
        let v = field(&x() * &u(0), &u(0) * &u(0));
        let w = field(&x() * &x(), &x() * &u(0));
        let (a, b) = (rational(3, 2), rational(-5, 7));
        let combo = v.scale(&a).add(&w.scale(&b)).unwrap().prolong(4);
        let (pv, pw) = (v.prolong(4), w.prolong(4));
        for z in combo.space().vars() {
            let lhs = combo.coefficient(&z).unwrap();
            let rhs = &pv.coefficient(&z).unwrap().scale(&a) + &pw.coefficient(&z).unwrap().scale(&b);
            assert!(lhs.equals(&rhs), "mismatch at {z}");
        }
    }

    #[test]
    fn concurrent_coefficient_requests_agree() {
        let v = field(&x() * &u(0), &u(0) * &u(0)).prolong(6);
        let values: Vec<Arc<RationalExpr>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|_| s.spawn(|| v.coefficient(&JetVar::u(6)).unwrap())).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}
