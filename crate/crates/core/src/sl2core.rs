//! Rank-one blocks `F_{i,t}(m)`.
//!
//! `F_{i,t}(m)` is the unique `m`-pointed element of the subalgebra generated
//! by `Y_{i,p}(1 + A_{i,p+d_i}^{-1})` and the `Y_{j,s}^{+-1}`, `j != i`, whose
//! only `i`-dominant monomial is `m`. It is built from the generators: the
//! normalized twisted product of `Y_{i,p} + Y_{i,p} A_{i,p+d_i}^{-1}` over the
//! fundamental factors of the `i`-part (descending `p`), minus `F_{i,t}` of
//! every lower `i`-dominant monomial that product contains.
//!
//! Factors away from node `i` pair trivially with every `A_{i,*}`, so they
//! only contribute an overall power of `t` that the normalization removes;
//! the work is done on the `i`-part alone and memoized up to shift.

use std::collections::BTreeMap;

use crate::cartan::{CartanData, Node};
use crate::engine::{normalizing_shift, Engine};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Var};
use crate::order::{a_monomial, factorize};
use crate::torus::{pair_span, PointedElement, TorusElement};

/// The string `Y_{i,start} Y_{i,start+2d_i} ... ` of `len` factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringBlock {
    pub node: Node,
    pub start: i32,
    pub len: u32,
}

impl StringBlock {
    pub fn end(&self, d: i32) -> i32 {
        self.start + 2 * (self.len as i32 - 1) * d
    }

    pub fn monomial(&self, d: i32) -> Monomial {
        Monomial::from_factors((0..self.len as i32).map(|k| (Var::new(self.node, self.start + 2 * k * d), 1)))
    }

    /// The `len + 1` monomials of the block's character, top first.
    pub fn expansion(&self, cartan: &CartanData) -> Vec<Monomial> {
        let d = cartan.d(self.node);
        let k = self.len as i32;
        let mut cur = self.monomial(d);
        let mut out = vec![cur.clone()];
        for j in 1..=k {
            let q = self.start + (2 * (k - j) + 1) * d;
            cur = cur.div(&a_monomial(cartan, self.node, q));
            out.push(cur.clone());
        }
        out
    }
}

/// Two strings at the same node are in general position when their union is
/// not a longer string, or one contains the other.
pub fn in_general_position(a: &StringBlock, b: &StringBlock, d: i32) -> bool {
    if a.node != b.node || (a.start - b.start).rem_euclid(2 * d) != 0 {
        return true;
    }
    let (a0, a1, b0, b1) = (a.start, a.end(d), b.start, b.end(d));
    if (a0 <= b0 && b1 <= a1) || (b0 <= a0 && a1 <= b1) {
        return true;
    }
    // Disjoint with a gap of at least one missing step, otherwise the union is a string.
    a1 + 2 * d < b0 || b1 + 2 * d < a0
}

fn check_i_dominant(cartan: &CartanData, m: &Monomial, i: Node) -> Result<()> {
    cartan.check_node(i)?;
    if !m.is_i_dominant(i) {
        return Err(Error::NotIDominant { monomial: m.to_string(), node: i });
    }
    Ok(())
}

/// Splits the `i`-part of `m` into maximal strings, extracted greedily from the
/// highest index down. Output is sorted by `(start, len)`.
pub fn string_decompose(cartan: &CartanData, m: &Monomial, i: Node) -> Result<Vec<StringBlock>> {
    check_i_dominant(cartan, m, i)?;
    let d = cartan.d(i);
    let mut mult: BTreeMap<i32, u32> = m.factors().filter(|(v, _)| v.node == i).map(|(v, e)| (v.p, e as u32)).collect();
    let mut out = Vec::new();
    while let Some((&top, _)) = mult.iter().next_back() {
        let mut p = top;
        let mut len = 0;
        while let Some(c) = mult.get_mut(&p) {
            *c -= 1;
            if *c == 0 {
                mult.remove(&p);
            }
            len += 1;
            p -= 2 * d;
        }
        out.push(StringBlock { node: i, start: p + 2 * d, len });
    }
    out.sort_unstable();
    Ok(out)
}

/// `Y_{i,p} + Y_{i,p} A_{i,p+d_i}^{-1}`.
fn generator(cartan: &CartanData, i: Node, p: i32) -> [Monomial; 2] {
    let y = Monomial::y(i, p);
    let low = y.div(&a_monomial(cartan, i, p + cartan.d(i)));
    [y, low]
}

/// `F_{i,t}` of a monomial supported on node `i` only.
fn f_it_pure(engine: &Engine, mi: &Monomial, i: Node) -> Result<TorusElement> {
    let cartan = engine.cartan();
    let ty = engine.lie_type();
    let mut acc = TorusElement::one(ty);
    for v in mi.fundamental_factors() {
        let gen = TorusElement::from_terms(ty, generator(cartan, i, v.p).into_iter().map(|m| (m, HalfLaurent::one())));
        let snap = engine.gamma().snapshot(pair_span(&acc, &gen));
        acc = acc.star_with(&gen, &snap);
    }
    let top = acc.coeff(mi);
    let shift = match top.terms() {
        [(k, 1)] => -k,
        _ => panic!("top coefficient of a rank-one product is {top}"),
    };
    let standard = acc.t_shifted(shift);
    let mut out = standard.clone();
    for (m, c) in standard.iter() {
        if m == mi || !m.is_i_dominant(i) {
            continue;
        }
        let lower = f_it_body(engine, m, i)?;
        out.add_scaled(&lower, &-c);
    }
    if cfg!(debug_assertions) {
        for (m, c) in out.iter() {
            assert!(m == mi || !m.is_i_dominant(i), "{m} is a second {i}-dominant monomial of F({mi})");
            assert!(factorize(cartan, &mi.div(m), Some(&[i])).is_some(), "{m} is not below {mi} along node {i}");
            assert!(c.has_integer_powers(), "coefficient {c} of {m} in F({mi}) has half-integer powers");
        }
    }
    Ok(out)
}

/// Memoized body of `F_{i,t}(m)`.
pub(crate) fn f_it_body(engine: &Engine, m: &Monomial, i: Node) -> Result<TorusElement> {
    check_i_dominant(engine.cartan(), m, i)?;
    let mi = m.i_part(i);
    if mi.is_one() {
        return Ok(TorusElement::monomial(engine.lie_type(), m.clone()));
    }
    let shift = normalizing_shift(&mi);
    let normalized = mi.shifted(shift);
    let base = engine.fit_cached(i, &normalized, || f_it_pure(engine, &normalized, i))?;
    Ok(base.shifted(-shift).mul_monomial(&m.without_node(i)))
}

/// The unique `m`-pointed element of the rank-one subring at node `i` whose
/// only `i`-dominant monomial is `m`.
pub fn f_it(engine: &Engine, m: &Monomial, i: Node) -> Result<PointedElement> {
    let body = f_it_body(engine, m, i)?;
    Ok(PointedElement::new_unchecked(m.clone(), body))
}

/// The same object at `t = 1`, built with commutative products and integer
/// coefficients. Independent of the quantum torus.
pub fn f_i_classical(cartan: &CartanData, m: &Monomial, i: Node) -> Result<BTreeMap<Monomial, i64>> {
    check_i_dominant(cartan, m, i)?;
    let mi = m.i_part(i);
    let mut acc: BTreeMap<Monomial, i64> = BTreeMap::from([(m.without_node(i), 1)]);
    for v in mi.fundamental_factors() {
        let gen = generator(cartan, i, v.p);
        let mut next: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (m1, c1) in &acc {
            for m2 in &gen {
                *next.entry(m1.mul(m2)).or_insert(0) += c1;
            }
        }
        acc = next;
    }
    let standard = acc.clone();
    for (x, c) in &standard {
        if x == m || !x.is_i_dominant(i) {
            continue;
        }
        for (y, d) in f_i_classical(cartan, x, i)? {
            *acc.entry(y).or_insert(0) -= c * d;
        }
    }
    acc.retain(|_, c| *c != 0);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{Family, LieType};
    use crate::torus::star_product;

    fn engine(f: Family, n: usize) -> Engine {
        Engine::new(LieType::new(f, n).unwrap()).unwrap()
    }

    fn mono(f: &[(Node, i32, i32)]) -> Monomial {
        Monomial::from_factors(f.iter().map(|&(i, p, e)| (Var::new(i, p), e)))
    }

    fn sb(start: i32, len: u32) -> StringBlock {
        StringBlock { node: 1, start, len }
    }

    #[test]
    fn decompose_examples() {
        let e = engine(Family::A, 1);
        let c = e.cartan();
        assert_eq!(string_decompose(c, &mono(&[(1, 0, 1), (1, 2, 1)]), 1).unwrap(), vec![sb(0, 2)]);
        assert_eq!(string_decompose(c, &mono(&[(1, 0, 1), (1, 4, 1)]), 1).unwrap(), vec![sb(0, 1), sb(4, 1)]);
        assert_eq!(string_decompose(c, &mono(&[(1, 0, 2)]), 1).unwrap(), vec![sb(0, 1), sb(0, 1)]);
        assert!(matches!(
            string_decompose(c, &mono(&[(1, 0, -1)]), 1),
            Err(Error::NotIDominant { node: 1, .. })
        ));
    }

    #[test]
    fn general_position() {
        assert!(in_general_position(&sb(0, 1), &sb(4, 1), 1));
        assert!(!in_general_position(&sb(0, 1), &sb(2, 1), 1));
        assert!(in_general_position(&sb(0, 3), &sb(2, 1), 1));
        assert!(!in_general_position(&sb(0, 2), &sb(2, 2), 1));
        assert!(in_general_position(&sb(0, 1), &sb(1, 1), 1));
    }

    #[test]
    fn f_it_examples() {
        let e = engine(Family::A, 1);
        let ty = e.lie_type();
        let f = f_it(&e, &Monomial::y(1, 0), 1).unwrap();
        let expect = TorusElement::from_terms(
            ty,
            [(Monomial::y(1, 0), HalfLaurent::one()), (mono(&[(1, 2, -1)]), HalfLaurent::one())],
        );
        assert_eq!(f.body(), &expect);

        let sq = f_it(&e, &mono(&[(1, 0, 2)]), 1).unwrap();
        let expect = TorusElement::from_terms(
            ty,
            [
                (mono(&[(1, 0, 2)]), HalfLaurent::one()),
                (mono(&[(1, 0, 1), (1, 2, -1)]), HalfLaurent::from_pairs([(2, 1), (-2, 1)])),
                (mono(&[(1, 2, -2)]), HalfLaurent::one()),
            ],
        );
        assert_eq!(sq.body(), &expect);

        let kr = f_it(&e, &mono(&[(1, 0, 1), (1, 2, 1)]), 1).unwrap();
        assert_eq!(kr.len(), 3);
        assert!(kr.body().iter().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn spectator_matches_literal_product() {
        let e = engine(Family::A, 2);
        let ty = e.lie_type();
        let m = mono(&[(1, 0, 1), (2, 5, 1)]);
        let got = f_it(&e, &m, 1).unwrap();
        let spectator = TorusElement::monomial(ty, Monomial::y(2, 5));
        let block = TorusElement::from_terms(
            ty,
            [(Monomial::y(1, 0), HalfLaurent::one()), (mono(&[(1, 2, -1), (2, 1, 1)]), HalfLaurent::one())],
        );
        let lit = star_product(e.gamma(), &spectator, &block).unwrap();
        let top = lit.coeff(&m).terms()[0].0;
        assert_eq!(got.body(), &lit.t_shifted(-top));
        assert!(got.body().iter().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn classical_agrees_at_t1() {
        let e = engine(Family::B, 3);
        for m in [
            mono(&[(2, 0, 2), (2, 4, 1), (1, 3, -1)]),
            mono(&[(3, 0, 1), (3, 2, 1), (3, 4, 1)]),
            mono(&[(1, 0, 1), (1, 2, 1), (1, 2, 1)]),
        ] {
            let i = m.factors().find(|(_, e)| *e > 0).unwrap().0.node;
            let t = f_it(&e, &m, i).unwrap().body().ev_t1();
            let c = f_i_classical(e.cartan(), &m, i).unwrap();
            let c = TorusElement::from_terms(e.lie_type(), c.into_iter().map(|(m, k)| (m, HalfLaurent::constant(k))));
            assert_eq!(t, c);
        }
    }

    #[test]
    fn strings_expand_with_unit_coefficients() {
        for (f, n, i) in [(Family::A, 1, 1), (Family::B, 2, 2), (Family::C, 3, 1)] {
            let e = engine(f, n);
            let d = e.cartan().d(i);
            for len in 1..=4 {
                let b = StringBlock { node: i, start: 3, len };
                let got = f_it(&e, &b.monomial(d), i).unwrap();
                let expect =
                    TorusElement::from_terms(e.lie_type(), b.expansion(e.cartan()).into_iter().map(|m| (m, HalfLaurent::one())));
                assert_eq!(got.body(), &expect, "{f:?}{n} node {i} length {len}");
            }
        }
    }

    #[test]
    fn nested_strings_strip_lower_dominant_terms() {
        let e = engine(Family::A, 1);
        let m = mono(&[(1, 0, 2), (1, 2, 1)]);
        let f = f_it(&e, &m, 1).unwrap();
        assert!(f.body().monomials().all(|x| x == &m || !x.is_i_dominant(1)));
        // At t = 1 this is chi(L(Y0 Y2)) chi(L(Y0)) - chi(L(Y0)).
        let at1 = f.body().ev_t1();
        assert_eq!(at1.coefficient_sum(), 6 - 2);
        assert_eq!(at1.coeff(&mono(&[(1, 2, -1)])), HalfLaurent::constant(-1));
    }
}
