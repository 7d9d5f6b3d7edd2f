use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::Rational;
use crate::error::{Error, Result};
use crate::jetspace::{JetSpace, JetVar};

/// Above this many terms (numerator plus denominator) normalization also
/// cancels the full polynomial gcd. Below it only monomial and scalar
/// content are removed.
pub const GCD_TERM_THRESHOLD: usize = 200;

/// Exact rational function `num / den` in jet coordinates.
///
/// `den` is never zero; it is primitive over the integers with a positive
/// leading coefficient, and it shares no monomial factor with `num`. The
/// zero expression is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr::from(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalExpr::from(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalExpr::from(Polynomial::constant(c))
    }

    pub fn integer(c: i64) -> Self {
        RationalExpr::from(Polynomial::from(c))
    }

    pub fn var(v: JetVar) -> Self {
        RationalExpr::from(Polynomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        RationalExpr::from(Polynomial::term(Rational::one(), m))
    }

    /// `num / den`, normalized.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalExpr::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        if let Some(c) = den.as_constant() {
            return RationalExpr {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        let shared = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if shared.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&shared), den.div_monomial(&shared))
        };
        if num.len() + den.len() > GCD_TERM_THRESHOLD {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides the numerator");
                den = den.div_exact(&g).expect("gcd divides the denominator");
            }
        }
        if let Some(c) = den.as_constant() {
            return RationalExpr {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        let (content, den) = den.primitive();
        RationalExpr {
            num: num.scale(&content.recip()),
            den,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if the expression is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Value equality, decided by cross-multiplication.
    pub fn equals(&self, other: &RationalExpr) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn vars(&self) -> BTreeSet<JetVar> {
        let mut vars = self.num.vars();
        vars.extend(self.den.vars());
        vars
    }

    /// Highest derivative order of any variable; `0` for functions of `(x, u)`.
    pub fn order(&self) -> usize {
        self.num.order().max(self.den.order())
    }

    pub fn recip(&self) -> Result<RationalExpr> {
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalExpr) -> Result<RationalExpr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalExpr::normalize(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn pow_int(&self, k: i64) -> Result<RationalExpr> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(RationalExpr::normalize(base.num.pow(e), base.den.pow(e)))
    }

    pub fn scale(&self, c: &Rational) -> RationalExpr {
        if c.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Formal partial derivative with every other variable held fixed.
    pub fn partial_derive(&self, v: &JetVar) -> RationalExpr {
        let dn = self.num.derive(v);
        let dd = self.den.derive(v);
        if dd.is_zero() {
            return RationalExpr::normalize(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RationalExpr::normalize(num, self.den.pow(2))
    }

    pub fn evaluate(&self, point: &impl Fn(&JetVar) -> Option<Rational>) -> Result<Rational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::SingularPoint);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    /// Evaluates with values looked up in a map.
    pub fn evaluate_at(&self, point: &std::collections::BTreeMap<JetVar, Rational>) -> Result<Rational> {
        self.evaluate(&|v| point.get(v).cloned())
    }

    /// Printer that names variables for the given jet space.
    pub fn display_in<'a>(&'a self, space: &JetSpace) -> impl fmt::Display + 'a {
        let (p, q) = (space.p, space.q);
        DisplayIn { expr: self, p, q }
    }

    fn write_with(&self, f: &mut impl fmt::Write, name: &impl Fn(&JetVar) -> String) -> fmt::Result {
        if self.den.is_one() {
            return self.num.write_with(f, name);
        }
        let wrap_num = self.num.len() > 1 || self.num.leading_coefficient() < Rational::zero();
        if wrap_num {
            f.write_str("(")?;
        }
        self.num.write_with(f, name)?;
        if wrap_num {
            f.write_str(")")?;
        }
        f.write_str("/(")?;
        self.den.write_with(f, name)?;
        f.write_str(")")
    }
}

struct DisplayIn<'a> {
    expr: &'a RationalExpr,
    p: usize,
    q: usize,
}

impl fmt::Display for DisplayIn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write_with(f, &|v| v.name(self.p, self.q))
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|v| v.to_string())
    }
}

impl From<Polynomial> for RationalExpr {
    fn from(num: Polynomial) -> Self {
        RationalExpr {
            num,
            den: Polynomial::one(),
        }
    }
}

impl From<Rational> for RationalExpr {
    fn from(c: Rational) -> Self {
        RationalExpr::constant(c)
    }
}

impl From<i64> for RationalExpr {
    fn from(c: i64) -> Self {
        RationalExpr::integer(c)
    }
}

impl From<JetVar> for RationalExpr {
    fn from(v: JetVar) -> Self {
        RationalExpr::var(v)
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalExpr::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalExpr::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalExpr::from(&self.num * &rhs.num);
        }
        RationalExpr::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl std::iter::Sum for RationalExpr {
    fn sum<I: Iterator<Item = RationalExpr>>(iter: I) -> Self {
        iter.fold(RationalExpr::zero(), |acc, e| &acc + &e)
    }
}
