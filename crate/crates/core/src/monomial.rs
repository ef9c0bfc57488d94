//! Laurent monomials in the variables `Y_{i,p}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::Node;

/// The variable `Y_{node,p}`. Ordered by `(node, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var {
    pub node: Node,
    pub p: i32,
}

impl Var {
    pub fn new(node: Node, p: i32) -> Self {
        Self { node, p }
    }
}

/// A Laurent monomial, stored as factors sorted by `(node, p)` with no zero
/// exponents. The derived ordering is lexicographic on that list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    factors: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `Y_{node,p}`.
    pub fn y(node: Node, p: i32) -> Self {
        Self { factors: vec![(Var::new(node, p), 1)] }
    }

    /// `Y_{node,p}^e`.
    pub fn y_pow(node: Node, p: i32, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self { factors: vec![(Var::new(node, p), e)] }
        }
    }

    /// Collects factors, merging repeated variables.
    pub fn from_factors<I: IntoIterator<Item = (Var, i32)>>(it: I) -> Self {
        let mut v: Vec<(Var, i32)> = it.into_iter().collect();
        v.sort_unstable_by_key(|&(var, _)| var);
        let mut out: Vec<(Var, i32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        Self { factors: out }
    }

    pub fn factors(&self) -> impl ExactSizeIterator<Item = (Var, i32)> + Clone + '_ {
        self.factors.iter().copied()
    }

    pub fn as_slice(&self) -> &[(Var, i32)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, node: Node, p: i32) -> i32 {
        let key = Var::new(node, p);
        self.factors
            .binary_search_by_key(&key, |&(v, _)| v)
            .map(|idx| self.factors[idx].1)
            .unwrap_or(0)
    }

    /// No negative exponents.
    pub fn is_dominant(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e > 0)
    }

    /// No negative powers of `Y_{i,*}`.
    pub fn is_i_dominant(&self, i: Node) -> bool {
        self.factors.iter().all(|&(v, e)| v.node != i || e > 0)
    }

    pub fn has_node(&self, i: Node) -> bool {
        self.factors.iter().any(|&(v, _)| v.node == i)
    }

    /// Factors at node `i`.
    pub fn i_part(&self, i: Node) -> Monomial {
        Self { factors: self.factors.iter().copied().filter(|&(v, _)| v.node == i).collect() }
    }

    /// Factors away from node `i`.
    pub fn without_node(&self, i: Node) -> Monomial {
        Self { factors: self.factors.iter().copied().filter(|&(v, _)| v.node != i).collect() }
    }

    /// Smallest and largest spectral index, or `None` for the unit.
    pub fn p_range(&self) -> Option<(i32, i32)> {
        let mut it = self.factors.iter().map(|&(v, _)| v.p);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), p| (lo.min(p), hi.max(p))))
    }

    pub fn max_node(&self) -> Option<Node> {
        self.factors.last().map(|&(v, _)| v.node)
    }

    /// Sum of exponents.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn inverse(&self) -> Monomial {
        Self { factors: self.factors.iter().map(|&(v, e)| (v, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Self::one();
        }
        Self { factors: self.factors.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    fn merge(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(v, e)| (v, sign * e)));
        Monomial { factors: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        self.merge(other, -1)
    }

    /// Adds `dp` to every spectral index.
    pub fn shifted(&self, dp: i32) -> Monomial {
        Self { factors: self.factors.iter().map(|&(v, e)| (Var::new(v.node, v.p + dp), e)).collect() }
    }

    /// Applies a node relabeling; factors whose node maps to `None` are dropped.
    pub fn map_nodes<F: Fn(Node) -> Option<Node>>(&self, f: F) -> Monomial {
        Self::from_factors(self.factors.iter().filter_map(|&(v, e)| f(v.node).map(|n| (Var::new(n, v.p), e))))
    }

    /// Splits a dominant monomial into its fundamental factors `Y_{i,p}`,
    /// ordered by `p` descending, ties by node ascending.
    pub fn fundamental_factors(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for &(v, e) in &self.factors {
            for _ in 0..e.max(0) {
                out.push(v);
            }
        }
        out.sort_by(|a, b| b.p.cmp(&a.p).then(a.node.cmp(&b.node)));
        out
    }
}

/// Renders as `Y[1,0]Y[2,3]^-1`; the unit renders as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for &(v, e) in &self.factors {
            write!(f, "Y[{},{}]", v.node, v.p)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_and_arithmetic() {
        let m = Monomial::from_factors([(Var::new(2, 3), -1), (Var::new(1, 0), 1), (Var::new(2, 3), 1)]);
        assert_eq!(m, Monomial::y(1, 0));
        let a = Monomial::y(1, 0).mul(&Monomial::y(1, 2));
        assert_eq!(a.div(&Monomial::y(1, 2)), Monomial::y(1, 0));
        assert_eq!(a.mul(&a.inverse()), Monomial::one());
        assert_eq!(a.pow(2).exponent(1, 2), 2);
        assert_eq!(a.shifted(3), Monomial::y(1, 3).mul(&Monomial::y(1, 5)));
    }

    #[test]
    fn dominance() {
        let m = Monomial::from_factors([(Var::new(1, 0), 1), (Var::new(2, 3), -1)]);
        assert!(!m.is_dominant());
        assert!(m.is_i_dominant(1));
        assert!(!m.is_i_dominant(2));
        assert!(Monomial::one().is_dominant());
    }

    #[test]
    fn display() {
        let m = Monomial::from_factors([(Var::new(2, 3), -1), (Var::new(1, 0), 1)]);
        assert_eq!(m.to_string(), "Y[1,0]Y[2,3]^-1");
        assert_eq!(Monomial::one().to_string(), "1");
    }

    #[test]
    fn fundamental_factor_order() {
        let m = Monomial::from_factors([(Var::new(2, 0), 1), (Var::new(1, 0), 1), (Var::new(1, 4), 2)]);
        let f = m.fundamental_factors();
        assert_eq!(f, vec![Var::new(1, 4), Var::new(1, 4), Var::new(1, 0), Var::new(2, 0)]);
    }
}
