//! Simple-root monomials `A_{i,p}` and the Nakajima partial order.

use std::collections::BTreeMap;

use crate::cartan::{CartanData, Node};
use crate::monomial::{Monomial, Var};

/// `A_{i,p}`: `Y_{i,p-d_i} Y_{i,p+d_i}` times the inverse neighbour factors
/// (`Y_{j,p}^{-1}` when `c_ji = -1`, `Y_{j,p-1}^{-1} Y_{j,p+1}^{-1}` when `c_ji = -2`).
pub fn a_monomial(cartan: &CartanData, i: Node, p: i32) -> Monomial {
    let di = cartan.d(i);
    let mut f = vec![(Var::new(i, p - di), 1), (Var::new(i, p + di), 1)];
    for (j, cji) in cartan.neighbours(i) {
        match cji {
            -1 => f.push((Var::new(j, p), -1)),
            -2 => {
                f.push((Var::new(j, p - 1), -1));
                f.push((Var::new(j, p + 1), -1));
            }
            -3 => {
                f.push((Var::new(j, p - 2), -1));
                f.push((Var::new(j, p), -1));
                f.push((Var::new(j, p + 2), -1));
            }
            other => unreachable!("unexpected Cartan entry {other}"),
        }
    }
    Monomial::from_factors(f)
}

/// Exponents `x_{i,p} > 0` with `m' m^{-1} = prod A_{i,p}^{x_{i,p}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(Node, i32, u32)>,
}

impl Factorization {
    /// Number of `A` factors counted with multiplicity.
    pub fn depth(&self) -> u64 {
        self.factors.iter().map(|&(_, _, x)| x as u64).sum()
    }

    pub fn product(&self, cartan: &CartanData) -> Monomial {
        self.factors
            .iter()
            .fold(Monomial::one(), |acc, &(i, p, x)| acc.mul(&a_monomial(cartan, i, p).pow(x as i32)))
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.factors.iter().map(|&(i, _, _)| i)
    }
}

/// Writes `v` as a product of nonnegative powers of `A_{i,p}`, `i` in
/// `restrict` when given. Returns `None` if no such product exists.
///
/// Works top-down in the spectral index: the largest index `s` in the residual
/// can only come from `A_{i,s-d_i}`, which fixes its exponent.
pub fn factorize(cartan: &CartanData, v: &Monomial, restrict: Option<&[Node]>) -> Option<Factorization> {
    let (lo, _) = match v.p_range() {
        None => return Some(Factorization::default()),
        Some(r) => r,
    };
    let mut residual: BTreeMap<(i32, Node), i32> = v.factors().map(|(var, e)| ((var.p, var.node), e)).collect();
    let mut out = Vec::new();
    while let Some((&(s, _), _)) = residual.iter().next_back() {
        let top: Vec<(Node, i32)> = residual.range((s, 0)..=(s, Node::MAX)).map(|(&(_, n), &e)| (n, e)).collect();
        for (i, e) in top {
            if e < 0 {
                return None;
            }
            if i as usize > cartan.rank() || restrict.is_some_and(|r| !r.contains(&i)) {
                return None;
            }
            let di = cartan.d(i);
            if s - 2 * di < lo {
                return None;
            }
            let q = s - di;
            for (var, a) in a_monomial(cartan, i, q).factors() {
                let slot = residual.entry((var.p, var.node)).or_insert(0);
                *slot -= a * e;
                if *slot == 0 {
                    residual.remove(&(var.p, var.node));
                }
            }
            out.push((i, q, e as u32));
        }
        debug_assert!(residual.range((s, 0)..=(s, Node::MAX)).next().is_none());
    }
    out.sort_unstable();
    Some(Factorization { factors: out })
}

/// `m <= m'` in the Nakajima order (over `restrict` when given), with the
/// factorization of `m' m^{-1}` on success.
pub fn nakajima_factorization(
    cartan: &CartanData,
    m: &Monomial,
    m_prime: &Monomial,
    restrict: Option<&[Node]>,
) -> Option<Factorization> {
    factorize(cartan, &m_prime.div(m), restrict)
}

/// `m <= m'` in the Nakajima order, optionally restricted to a node subset.
pub fn nakajima_leq(cartan: &CartanData, m: &Monomial, m_prime: &Monomial, restrict: Option<&[Node]>) -> bool {
    nakajima_factorization(cartan, m, m_prime, restrict).is_some()
}

/// Number of `A` factors in `top m^{-1}`, if `m <= top`.
pub fn depth_below(cartan: &CartanData, m: &Monomial, top: &Monomial) -> Option<u64> {
    nakajima_factorization(cartan, m, top, None).map(|f| f.depth())
}
