//! Standard basis `E_t(m)`, the bar-invariant canonical basis `chi_{q,t}`,
//! `chi_q` and dimensions.

use std::collections::{BTreeSet, HashMap};

use crate::engine::{normalizing_shift, Engine};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Var};
use crate::order::{depth_below, nakajima_leq};
use crate::tfm::f_t;
use crate::torus::{pair_span, PointedElement, TorusElement};

fn check_dominant(engine: &Engine, m: &Monomial) -> Result<()> {
    for (v, _) in m.factors() {
        engine.cartan().check_node(v.node)?;
    }
    if !m.is_dominant() {
        return Err(Error::NotDominant(m.to_string()));
    }
    Ok(())
}

/// `E_t` of the given ordered list of fundamentals: the normalized twisted
/// product of their `F_t`. The order is the caller's choice; `e_t` uses
/// descending spectral index.
pub fn e_t_ordered(engine: &Engine, factors: &[Var]) -> Result<PointedElement> {
    let ty = engine.lie_type();
    let mut acc = TorusElement::one(ty);
    let mut top = Monomial::one();
    for v in factors {
        let f = f_t(engine, &Monomial::y(v.node, v.p))?;
        let snap = engine.gamma().snapshot(pair_span(&acc, f.body()));
        acc = acc.star_with(f.body(), &snap);
        top = top.mul(f.top());
    }
    // t^{gamma(m)} with gamma(m) = -1/2 sum_{a<b} gamma(Y_a, Y_b), in half-units.
    let mut half = 0i64;
    let g = engine.gamma();
    for (a, va) in factors.iter().enumerate() {
        for vb in &factors[a + 1..] {
            half -= g.gamma_pair(&Monomial::y(va.node, va.p), &Monomial::y(vb.node, vb.p))?;
        }
    }
    let out = acc.t_shifted(half as i32);
    assert!(out.coeff(&top).is_one(), "top coefficient of E_t({top}) is {}", out.coeff(&top));
    Ok(PointedElement::new_unchecked(top, out))
}

/// `E_t(m)`, memoized per engine.
pub fn e_t(engine: &Engine, m: &Monomial) -> Result<PointedElement> {
    check_dominant(engine, m)?;
    let shift = normalizing_shift(m);
    let normalized = m.shifted(shift);
    let base = engine.et_cached(&normalized, || e_t_ordered(engine, &normalized.fundamental_factors()))?;
    Ok(base.shifted(-shift))
}

/// Everything the canonical-basis solve produced.
#[derive(Clone, Debug)]
pub struct KlResult {
    pub chi: PointedElement,
    /// Dominant monomials below the top, in solve order (top first).
    pub basis: Vec<Monomial>,
    /// `Q_{m,m'}` for every `m'` in `basis` (`Q_{m,m} = 1`).
    pub q: Vec<HalfLaurent>,
}

impl KlResult {
    /// Largest `t^{-1}` degree among the off-diagonal `Q`.
    pub fn max_q_degree(&self) -> i32 {
        self.q.iter().skip(1).filter_map(|c| c.min_exponent()).map(|k| -k / 2).max().unwrap_or(0)
    }
}

/// The dominant monomials reachable from `m` through the supports of `E_t`,
/// sorted by (depth below `m`, monomial).
fn dominant_closure(engine: &Engine, m: &Monomial) -> Result<(Vec<Monomial>, HashMap<Monomial, PointedElement>)> {
    let mut seen: BTreeSet<Monomial> = BTreeSet::from([m.clone()]);
    let mut queue = vec![m.clone()];
    let mut e: HashMap<Monomial, PointedElement> = HashMap::new();
    while let Some(cur) = queue.pop() {
        let ecur = e_t(engine, &cur)?;
        for x in ecur.body().dominant_monomials() {
            if seen.insert(x.clone()) {
                if seen.len() > engine.cap() {
                    return Err(Error::CapExceeded(engine.cap()));
                }
                queue.push(x.clone());
            }
        }
        e.insert(cur, ecur);
    }
    let cartan = engine.cartan();
    let mut keyed: Vec<(u64, Monomial)> = seen
        .into_iter()
        .map(|x| (depth_below(cartan, &x, m).expect("dominant monomial above the top"), x))
        .collect();
    keyed.sort();
    Ok((keyed.into_iter().map(|(_, x)| x).collect(), e))
}

/// Solves for the bar-invariant `chi = E_t(m) + sum Q_{m,m'} E_t(m')` with
/// `Q_{m,m'} in t^{-1} Z[t^{-1}]`.
pub fn chi_qt_detailed(engine: &Engine, m: &Monomial) -> Result<KlResult> {
    check_dominant(engine, m)?;
    let (basis, e) = dominant_closure(engine, m)?;
    let n = basis.len();

    // bar(E_t(b_j)) = sum_{l >= j} a[j][l] E_t(b_l)
    let mut a: Vec<Vec<(usize, HalfLaurent)>> = vec![Vec::new(); n];
    for j in 0..n {
        let mut x = e[&basis[j]].body().bar();
        for l in j..n {
            let c = x.coeff(&basis[l]);
            if c.is_zero() {
                continue;
            }
            x.add_scaled(e[&basis[l]].body(), &-&c);
            a[j].push((l, c));
        }
        if !x.is_empty() {
            return Err(Error::NoSolution(format!(
                "bar(E_t({})) is not spanned by standard elements below it; residual has {} terms",
                basis[j],
                x.len()
            )));
        }
        if a[j].first().map(|(l, c)| (*l, c.is_one())) != Some((j, true)) {
            return Err(Error::NoSolution(format!("bar matrix diagonal at {} is not 1", basis[j])));
        }
    }

    // Q_l - bar(Q_l) = sum_{j < l} bar(Q_j) a[j][l]
    let mut rhs: Vec<HalfLaurent> = vec![HalfLaurent::zero(); n];
    let mut q: Vec<HalfLaurent> = vec![HalfLaurent::zero(); n];
    q[0] = HalfLaurent::one();
    for l in 0..n {
        if l > 0 {
            let r = &rhs[l];
            if r.constant_term() != 0 || r.bar() != -r {
                return Err(Error::NonPolynomialQ {
                    monomial: basis[l].to_string(),
                    detail: format!("right-hand side {r} is not anti-symmetric under bar"),
                });
            }
            let ql = r.negative_part();
            if !ql.in_t_inverse_z_t_inverse() {
                return Err(Error::NonPolynomialQ { monomial: basis[l].to_string(), detail: format!("Q = {ql}") });
            }
            q[l] = ql;
        }
        let qbar = q[l].bar();
        if qbar.is_zero() {
            continue;
        }
        for (k, c) in &a[l] {
            if *k > l {
                rhs[*k] += &(&qbar * c);
            }
        }
    }

    let mut chi = TorusElement::zero(engine.lie_type());
    for (b, c) in basis.iter().zip(&q) {
        chi.add_scaled(e[b].body(), c);
    }
    if !chi.is_bar_invariant() {
        return Err(Error::NoSolution(format!("solution for {m} is not bar-invariant")));
    }
    let chi = PointedElement::new(engine.cartan(), m.clone(), chi)?;
    Ok(KlResult { chi, basis, q })
}

/// `chi_{q,t}(L(m))`.
pub fn chi_qt(engine: &Engine, m: &Monomial) -> Result<PointedElement> {
    Ok(chi_qt_detailed(engine, m)?.chi)
}

/// `chi_q(L(m))`: `chi_{q,t}` at `t = 1`; every coefficient must be positive.
pub fn chi_q(engine: &Engine, m: &Monomial) -> Result<TorusElement> {
    let chi = chi_qt(engine, m)?;
    for (mono, c) in chi.body().iter() {
        let v = c.ev_t1();
        if v <= 0 {
            return Err(Error::NonPositiveCoefficient { monomial: mono.to_string(), coeff: v });
        }
    }
    Ok(chi.body().ev_t1())
}

/// Dimension of `L(m)`: the coefficient sum of `chi_q`.
pub fn dim_simple(engine: &Engine, m: &Monomial) -> Result<i64> {
    Ok(chi_q(engine, m)?.coefficient_sum())
}

/// True when every monomial other than `top` lies strictly below it.
pub fn strictly_below_top(engine: &Engine, x: &PointedElement) -> bool {
    x.body().monomials().all(|m| m == x.top() || nakajima_leq(engine.cartan(), m, x.top(), None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{Family, LieType, Node};

    fn engine(f: Family, n: usize) -> Engine {
        Engine::new(LieType::new(f, n).unwrap()).unwrap()
    }

    fn mono(f: &[(Node, i32, i32)]) -> Monomial {
        Monomial::from_factors(f.iter().map(|&(i, p, e)| (Var::new(i, p), e)))
    }

    #[test]
    fn e_t_rank_one() {
        let a1 = engine(Family::A, 1);
        let ty = a1.lie_type();
        let m = mono(&[(1, 0, 1), (1, 2, 1)]);
        let e = e_t(&a1, &m).unwrap();
        let expect = TorusElement::from_terms(
            ty,
            [
                (m.clone(), HalfLaurent::one()),
                (mono(&[(1, 0, 1), (1, 4, -1)]), HalfLaurent::one()),
                (mono(&[(1, 2, -1), (1, 4, -1)]), HalfLaurent::one()),
                (Monomial::one(), HalfLaurent::t_half_power(-2)),
            ],
        );
        assert_eq!(e.body(), &expect);

        let sq = e_t(&a1, &mono(&[(1, 0, 2)])).unwrap();
        assert_eq!(sq.coeff(&mono(&[(1, 0, 1), (1, 2, -1)])), HalfLaurent::from_pairs([(2, 1), (-2, 1)]));
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn chi_qt_rank_one() {
        let a1 = engine(Family::A, 1);
        let m = mono(&[(1, 0, 1), (1, 2, 1)]);
        let r = chi_qt_detailed(&a1, &m).unwrap();
        assert_eq!(r.basis, vec![m.clone(), Monomial::one()]);
        assert_eq!(r.q[1], HalfLaurent::term(-2, -1));
        let diff = e_t(&a1, &m).unwrap().body().sub(r.chi.body()).unwrap();
        assert_eq!(diff, TorusElement::term(a1.lie_type(), Monomial::one(), HalfLaurent::t_half_power(-2)));
        assert_eq!(chi_qt(&a1, &Monomial::one()).unwrap().body(), &TorusElement::one(a1.lie_type()));
        assert_eq!(dim_simple(&a1, &Monomial::one()).unwrap(), 1);
    }

    #[test]
    fn dims() {
        let a3 = engine(Family::A, 3);
        let d: Vec<i64> = (1..=3).map(|i| dim_simple(&a3, &Monomial::y(i, 0)).unwrap()).collect();
        assert_eq!(d, vec![4, 6, 4]);
        let a1 = engine(Family::A, 1);
        assert_eq!(dim_simple(&a1, &mono(&[(1, 0, 2)])).unwrap(), 4);
        assert_eq!(chi_q(&a1, &mono(&[(1, 0, 1), (1, 2, 1)])).unwrap().len(), 3);
    }
}
