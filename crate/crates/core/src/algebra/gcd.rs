//! Multivariate polynomial gcd by recursive primitive pseudo-remainder
//! sequences. Results are primitive with a positive leading coefficient.

use num_traits::One;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use crate::jetspace::JetVar;

pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return normalized(b);
    }
    if b.is_zero() {
        return normalized(a);
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Polynomial::one();
    }
    let mono = a.monomial_content().gcd(&b.monomial_content());
    let a = a.div_monomial(&a.monomial_content());
    let b = b.div_monomial(&b.monomial_content());
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return normalized(&Polynomial::one().mul_term(&mono, &One::one()));
    }

    let (va, vb) = (a.vars(), b.vars());
    // a variable present in only one operand cannot occur in the gcd
    if let Some(v) = va.symmetric_difference(&vb).next() {
        let (with, without) = if va.contains(v) { (&a, &b) } else { (&b, &a) };
        let g = fold_gcd(without.clone(), to_univariate(with, v));
        return normalized(&g.mul_term(&mono, &One::one()));
    }
    let main = va
        .iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v).min(b.degree_in(v))))
        .expect("non-constant polynomial has a variable")
        .clone();
    let ua = to_univariate(&a, &main);
    let ub = to_univariate(&b, &main);
    let g = from_univariate(&univariate_gcd(ua, ub), &main);
    normalized(&g.mul_term(&mono, &One::one()))
}

/// gcd of `start` and every polynomial in `others`, smallest first, stopping
/// as soon as it reaches one.
fn fold_gcd(start: Polynomial, mut others: Vec<Polynomial>) -> Polynomial {
    others.retain(|p| !p.is_zero());
    others.sort_by_key(Polynomial::len);
    let mut g = start;
    for c in &others {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

fn normalized(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    p.primitive().1
}

type Univariate = Vec<Polynomial>;

fn to_univariate(p: &Polynomial, v: &JetVar) -> Univariate {
    let mut coeffs = vec![Polynomial::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let e = m.exponent(v);
        let rest = Monomial::from_factors(m.factors().iter().filter(|(w, _)| w != v).cloned());
        let slot = &mut coeffs[e as usize];
        *slot = &*slot + &Polynomial::term(c.clone(), rest);
    }
    coeffs
}

fn from_univariate(u: &Univariate, v: &JetVar) -> Polynomial {
    let mut out = Polynomial::zero();
    for (e, c) in u.iter().enumerate() {
        out = &out + &c.mul_term(&Monomial::power(v.clone(), e as u32), &One::one());
    }
    out
}

fn trim(u: &mut Univariate) {
    while u.len() > 1 && u.last().is_some_and(Polynomial::is_zero) {
        u.pop();
    }
}

fn is_zero(u: &Univariate) -> bool {
    u.iter().all(Polynomial::is_zero)
}

fn content(u: &Univariate) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = u.iter().filter(|p| !p.is_zero()).cloned().collect();
    if coeffs.is_empty() {
        return Polynomial::zero();
    }
    coeffs.sort_by_key(Polynomial::len);
    let first = coeffs.remove(0);
    normalized(&fold_gcd(first, coeffs))
}

fn primitive_part(u: &Univariate) -> Univariate {
    let c = content(u);
    if c.is_zero() {
        return u.clone();
    }
    u.iter()
        .map(|p| p.div_exact(&c).expect("content divides every coefficient"))
        .collect()
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero, trimmed).
fn pseudo_remainder(a: &Univariate, b: &Univariate) -> Univariate {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    trim(&mut r);
    while !is_zero(&r) && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Univariate = r.iter().map(|c| c * lb).collect();
        for (k, bc) in b.iter().enumerate() {
            let slot = &mut next[k + shift];
            *slot = &*slot - &(bc * &lr);
        }
        debug_assert!(next[dr].is_zero());
        next.pop();
        r = next;
        trim(&mut r);
    }
    r
}

fn univariate_gcd(a: Univariate, b: Univariate) -> Univariate {
    let c = gcd(&content(&a), &content(&b));
    let (mut a, mut b) = (primitive_part(&a), primitive_part(&b));
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            // b is a nonzero element of the coefficient ring: primitive gcd is 1
            if !b[0].is_zero() {
                b = vec![Polynomial::one()];
            } else {
                b = a;
            }
            break;
        }
        let r = pseudo_remainder(&a, &b);
        if is_zero(&r) {
            break;
        }
        a = b;
        b = primitive_part(&r);
    }
    let mut g = primitive_part(&b);
    for coeff in g.iter_mut() {
        *coeff = &*coeff * &c;
    }
    if g.iter().all(|p| p.is_zero()) {
        return vec![Polynomial::zero()];
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn x() -> Polynomial {
        Polynomial::var(JetVar::x())
    }
    fn u(k: u32) -> Polynomial {
        Polynomial::var(JetVar::u(k))
    }
    fn c(k: i64) -> Polynomial {
        Polynomial::from(k)
    }

    #[test]
    fn univariate_common_factor() {
        let a = &(&x() - &c(1)) * &(&x() + &c(2));
        let b = &(&x() - &c(1)) * &(&x() + &c(3));
        assert_eq!(gcd(&a, &b), &x() - &c(1));
    }

    #[test]
    fn multivariate_common_factor() {
        let f = &(&x() * &u(1)) + &u(2).scale(&Rational::from_integer(3.into()));
        let g1 = &(&u(0) + &c(1)) * &u(1);
        let g2 = &(&x() - &u(3)).pow(2) + &c(7);
        let a = &f * &g1;
        let b = &f * &g2;
        let g = gcd(&a, &b);
        assert_eq!(g, f.primitive().1);
    }

    #[test]
    fn coprime_and_monomial_parts() {
        assert!(gcd(&(&x() + &c(1)), &(&x() - &c(1))).is_one());
        let a = &(&u(1).pow(3) * &x()) + &u(1).pow(2);
        let b = u(1).pow(4);
        assert_eq!(gcd(&a, &b), u(1).pow(2));
        assert_eq!(gcd(&Polynomial::zero(), &x().scale(&Rational::from_integer((-2).into()))), x());
    }
}
