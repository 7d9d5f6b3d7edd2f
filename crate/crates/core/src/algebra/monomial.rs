use std::cmp::Ordering;
use std::fmt;

use crate::jetspace::JetVar;

/// Power product of jet coordinates. Factors are kept sorted by the global
/// variable order and never carry a zero exponent; the empty product is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn power(v: JetVar, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: vec![(v, e)],
        }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (JetVar, u32)>) -> Self {
        let mut raw: Vec<(JetVar, u32)> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(raw.len());
        for (v, e) in raw {
            match merged.last_mut() {
                Some((last, le)) if *last == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|k| self.factors[k].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &JetVar> {
        self.factors.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for (v, e) in &self.factors {
            let d = if j < other.factors.len() && other.factors[j].0 == *v {
                j += 1;
                other.factors[j - 1].1
            } else {
                0
            };
            if d > *e {
                return None;
            }
            if d < *e {
                out.push((v.clone(), e - d));
            }
        }
        (j == other.factors.len()).then_some(Monomial { factors: out })
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1.min(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial { factors: out }
    }

    /// `∂/∂v` of the power product: the lowered monomial and the exponent
    /// that comes down, or `None` if `v` does not occur.
    pub fn derive(&self, v: &JetVar) -> Option<(Monomial, u32)> {
        let k = self.factors.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.factors[k].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(k);
        } else {
            factors[k].1 -= 1;
        }
        Some((Monomial { factors }, e))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|(v, e)| (v.clone(), e * k)).collect(),
        }
    }

    pub(crate) fn write_with(
        &self,
        f: &mut impl fmt::Write,
        name: &impl Fn(&JetVar) -> String,
    ) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(&name(v))?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Graded lexicographic order; earlier variables in the global order weigh
/// more, so `x > u > u1 > ...` among monomials of equal degree.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.factors, &other.factors);
            for (fa, fb) in a.iter().zip(b) {
                match fa.0.cmp(&fb.0) {
                    // `fa.0` is absent from `other`.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match fa.1.cmp(&fb.1) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|v| v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &[(u32, u32)]) -> Monomial {
        // u_(k)^e factors; k = u32::MAX stands for x
        Monomial::from_factors(f.iter().map(|&(k, e)| {
            let v = if k == u32::MAX { JetVar::x() } else { JetVar::u(k) };
            (v, e)
        }))
    }

    #[test]
    fn grlex_order() {
        const X: u32 = u32::MAX;
        // degree first
        assert!(m(&[(3, 2)]) > m(&[(X, 1)]));
        // x > u > u1 at equal degree
        assert!(m(&[(X, 1)]) > m(&[(0, 1)]));
        assert!(m(&[(0, 1)]) > m(&[(1, 1)]));
        assert!(m(&[(X, 1), (2, 1)]) > m(&[(0, 2)]));
        assert!(m(&[(1, 1), (3, 1)]) > m(&[(2, 2)]));
        assert!(m(&[(1, 2)]) > m(&[(1, 1), (3, 1)]));
        assert_eq!(m(&[]).cmp(&Monomial::one()), Ordering::Equal);
    }

    #[test]
    fn mul_div_gcd() {
        let a = m(&[(0, 2), (1, 1)]);
        let b = m(&[(1, 3)]);
        let ab = a.mul(&b);
        assert_eq!(ab, m(&[(0, 2), (1, 4)]));
        assert_eq!(ab.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(a.gcd(&b), m(&[(1, 1)]));
        assert_eq!(Monomial::from_factors([(JetVar::u(1), 1), (JetVar::u(1), 2)]), m(&[(1, 3)]));
    }

    #[test]
    fn derive_lowers_exponent() {
        let a = m(&[(0, 2), (1, 1)]);
        assert_eq!(a.derive(&JetVar::u(0)), Some((m(&[(0, 1), (1, 1)]), 2)));
        assert_eq!(a.derive(&JetVar::u(1)), Some((m(&[(0, 2)]), 1)));
        assert_eq!(a.derive(&JetVar::u(2)), None);
    }
}
