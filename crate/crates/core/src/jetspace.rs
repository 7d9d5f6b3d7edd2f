//! Coordinates of the jet space `J^(n)E` for a total space `E = R^p x R^q`.
//!
//! A [`JetVar`] names one coordinate: an independent variable `x^i` or a
//! derivative coordinate `u^a_J`. The total order on [`JetVar`] is the global
//! variable order used by the polynomial kernel: every independent variable
//! precedes every dependent one, and dependents sort by derivative order,
//! then component, then multi-index.

use std::cmp::Ordering;
use std::fmt;

use num_integer::binomial;

/// Symmetric multi-index stored as a count vector: `counts[i]` is the number
/// of derivatives taken in the `i`-th independent direction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    counts: Vec<u32>,
}

impl MultiIndex {
    /// The empty index of length `p`, naming `u^a` itself.
    pub fn zero(p: usize) -> Self {
        MultiIndex { counts: vec![0; p] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex { counts }
    }

    /// Single-direction index of order `k` (the `u_(k)` of a one-variable jet).
    pub fn single(k: u32) -> Self {
        MultiIndex { counts: vec![k] }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of independent directions this index is defined over.
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// `J,i`: the index with slot `i` incremented.
    ///
    /// Panics if `i` is not a valid direction for this index.
    pub fn incremented(&self, i: usize) -> Self {
        assert!(
            i < self.counts.len(),
            "direction {i} out of range for a {}-dimensional multi-index",
            self.counts.len()
        );
        let mut counts = self.counts.clone();
        counts[i] += 1;
        MultiIndex { counts }
    }

    /// Splits a nonzero index as `K + e_i` with `i` the largest direction that
    /// carries a derivative. Applying `D_j` factors in increasing `j` therefore
    /// rebuilds the index, which fixes the evaluation order of `D_J`.
    pub fn split_last(&self) -> Option<(MultiIndex, usize)> {
        let i = self.counts.iter().rposition(|&c| c > 0)?;
        let mut counts = self.counts.clone();
        counts[i] -= 1;
        Some((MultiIndex { counts }, i))
    }

    /// All indices of length `p` and order exactly `k`, sorted by the jet order
    /// (lexicographic on the sorted index sequence `j_1 <= ... <= j_k`).
    pub fn of_order(p: usize, k: usize) -> Vec<MultiIndex> {
        fn fill(slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if slot + 1 == current.len() {
                current[slot] = left;
                out.push(MultiIndex::from_counts(current.clone()));
                return;
            }
            for c in (0..=left).rev() {
                current[slot] = c;
                fill(slot + 1, left - c, current, out);
            }
        }
        let mut out = Vec::new();
        if p == 0 {
            return out;
        }
        fill(0, k as u32, &mut vec![0; p], &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // Same order: more derivatives in an earlier slot sorts first.
        self.order()
            .cmp(&other.order())
            .then_with(|| other.counts.cmp(&self.counts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A coordinate of `J^(n)`. Indices are zero-based; names are one-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum JetVar {
    Independent(usize),
    Dependent { component: usize, index: MultiIndex },
}

impl JetVar {
    pub fn dependent(component: usize, index: MultiIndex) -> Self {
        JetVar::Dependent { component, index }
    }

    /// `x` of a one-variable jet.
    pub fn x() -> Self {
        JetVar::Independent(0)
    }

    /// `u_(k)` of a jet with `p = q = 1`; `u(0)` is `u` itself.
    pub fn u(k: u32) -> Self {
        JetVar::Dependent {
            component: 0,
            index: MultiIndex::single(k),
        }
    }

    /// Derivative order; zero for independent variables.
    pub fn order(&self) -> usize {
        match self {
            JetVar::Independent(_) => 0,
            JetVar::Dependent { index, .. } => index.order(),
        }
    }

    pub fn is_independent(&self) -> bool {
        matches!(self, JetVar::Independent(_))
    }

    /// `u^a_{J,i}` for a dependent coordinate; `None` for independents.
    pub fn incremented(&self, i: usize) -> Option<JetVar> {
        match self {
            JetVar::Independent(_) => None,
            JetVar::Dependent { component, index } => Some(JetVar::Dependent {
                component: *component,
                index: index.incremented(i),
            }),
        }
    }

    /// Writes the coordinate name for a space with `p` independent and `q`
    /// dependent variables.
    pub fn write_name(&self, p: usize, q: usize, f: &mut impl fmt::Write) -> fmt::Result {
        match self {
            JetVar::Independent(i) if p == 1 && *i == 0 => f.write_str("x"),
            JetVar::Independent(i) => write!(f, "x{}", i + 1),
            JetVar::Dependent { component, index } => {
                if p == 1 && q == 1 && index.dim() == 1 && *component == 0 {
                    return match index.order() {
                        0 => f.write_str("u"),
                        k => write!(f, "u{k}"),
                    };
                }
                if q == 1 && *component == 0 {
                    f.write_str("u")?;
                } else {
                    write!(f, "u[{}]", component + 1)?;
                }
                if index.order() > 0 {
                    f.write_str("_(")?;
                    for (k, c) in index.counts().iter().enumerate() {
                        if k > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }

    pub fn name(&self, p: usize, q: usize) -> String {
        let mut s = String::new();
        self.write_name(p, q, &mut s).expect("writing to a String");
        s
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (JetVar::Independent(a), JetVar::Independent(b)) => a.cmp(b),
            (JetVar::Independent(_), JetVar::Dependent { .. }) => Ordering::Less,
            (JetVar::Dependent { .. }, JetVar::Independent(_)) => Ordering::Greater,
            (
                JetVar::Dependent {
                    component: ca,
                    index: ja,
                },
                JetVar::Dependent {
                    component: cb,
                    index: jb,
                },
            ) => ja
                .order()
                .cmp(&jb.order())
                .then_with(|| ca.cmp(cb))
                .then_with(|| ja.cmp(jb)),
        }
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Names for a context-free print: the `p = q = 1` shorthand where it applies.
impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = match self {
            JetVar::Independent(i) => (if *i == 0 { 1 } else { i + 1 }, 1),
            JetVar::Dependent { component, index } => (index.dim(), component + 1),
        };
        self.write_name(p, q, f)
    }
}

/// `J^(n)E` for `E = R^p x R^q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct JetSpace {
    pub p: usize,
    pub q: usize,
    pub n: usize,
}

impl JetSpace {
    pub fn new(p: usize, q: usize, n: usize) -> Self {
        assert!(p >= 1 && q >= 1, "a total space needs p, q >= 1");
        JetSpace { p, q, n }
    }

    /// The same total space at another order.
    pub fn with_order(self, n: usize) -> Self {
        JetSpace { n, ..self }
    }

    pub fn dim(&self) -> usize {
        dim_jet(self.p, self.q, self.n)
    }

    /// Coordinates sorted by the global variable order.
    pub fn vars(&self) -> Vec<JetVar> {
        enumerate_vars(self)
    }

    /// Whether `var` is a coordinate of this space.
    pub fn contains(&self, var: &JetVar) -> bool {
        match var {
            JetVar::Independent(i) => *i < self.p,
            JetVar::Dependent { component, index } => {
                *component < self.q && index.dim() == self.p && index.order() <= self.n
            }
        }
    }

    pub fn name(&self, var: &JetVar) -> String {
        var.name(self.p, self.q)
    }
}

/// `dim J^(n) = p + q * C(p+n, n)`.
pub fn dim_jet(p: usize, q: usize, n: usize) -> usize {
    p + q * binomial(p + n, n)
}

/// Number of derivative coordinates of order exactly `n >= 1`:
/// `q * C(p+n-1, n)`.
pub fn q_n(p: usize, q: usize, n: usize) -> usize {
    assert!(n >= 1, "q_n is defined for n >= 1");
    q * binomial(p + n - 1, n)
}

/// All coordinates of `space`, in the global variable order.
pub fn enumerate_vars(space: &JetSpace) -> Vec<JetVar> {
    let mut vars: Vec<JetVar> = (0..space.p).map(JetVar::Independent).collect();
    for k in 0..=space.n {
        let indices = MultiIndex::of_order(space.p, k);
        for component in 0..space.q {
            vars.extend(
                indices
                    .iter()
                    .map(|index| JetVar::dependent(component, index.clone())),
            );
        }
    }
    vars
}
