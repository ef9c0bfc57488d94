//! The quantum torus: finite sums of monomials with coefficients in
//! `Z[t^{1/2}, t^{-1/2}]`, the twisted product `m * m' = t^{gamma(m,m')/2} m m'`,
//! the bar anti-involution and the specialization at `t = 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{CartanData, GammaSnapshot, GammaTable, LieType};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::Monomial;
use crate::order::nakajima_leq;

/// A finite sum `sum c_m m` over one Cartan datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    ty: LieType,
    terms: BTreeMap<Monomial, HalfLaurent>,
}

impl TorusElement {
    pub fn zero(ty: LieType) -> Self {
        Self { ty, terms: BTreeMap::new() }
    }

    pub fn one(ty: LieType) -> Self {
        Self::monomial(ty, Monomial::one())
    }

    pub fn monomial(ty: LieType, m: Monomial) -> Self {
        Self::term(ty, m, HalfLaurent::one())
    }

    pub fn term(ty: LieType, m: Monomial, c: HalfLaurent) -> Self {
        let mut out = Self::zero(ty);
        out.add_term(m, &c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, HalfLaurent)>>(ty: LieType, it: I) -> Self {
        let mut out = Self::zero(ty);
        for (m, c) in it {
            out.add_term(m, &c);
        }
        out
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, HalfLaurent> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, HalfLaurent> {
        self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &HalfLaurent)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> HalfLaurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// `self += c * m`.
    pub fn add_term(&mut self, m: Monomial, c: &HalfLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += t^{half/2} c * m`.
    pub fn add_term_shifted(&mut self, m: Monomial, c: &HalfLaurent, half: i32) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.shifted(half));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_scaled_shifted(c, half);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &TorusElement) -> Result<()> {
        if self.ty != other.ty {
            return Err(Error::Mismatch(format!("{} vs {}", self.ty, other.ty)));
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &TorusElement, c: &HalfLaurent) {
        debug_assert_eq!(self.ty, other.ty);
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(a * c));
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: &HalfLaurent) -> TorusElement {
        TorusElement::from_terms(self.ty, self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    /// Multiplies by `t^{half/2}`.
    pub fn t_shifted(&self, half: i32) -> TorusElement {
        Self { ty: self.ty, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shifted(half))).collect() }
    }

    /// Multiplies every monomial by `m` in the commutative ring.
    pub fn mul_monomial(&self, m: &Monomial) -> TorusElement {
        Self { ty: self.ty, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Adds `dp` to every spectral index.
    pub fn shifted(&self, dp: i32) -> TorusElement {
        if dp == 0 {
            return self.clone();
        }
        Self { ty: self.ty, terms: self.terms.iter().map(|(k, c)| (k.shifted(dp), c.clone())).collect() }
    }

    /// Negates every `t^{1/2}` exponent; monomials are fixed.
    pub fn bar(&self) -> TorusElement {
        Self { ty: self.ty, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.bar())).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(HalfLaurent::is_bar_invariant)
    }

    /// Collapses every coefficient to its value at `t^{1/2} = 1`.
    pub fn ev_t1(&self) -> TorusElement {
        TorusElement::from_terms(
            self.ty,
            self.terms.iter().map(|(m, c)| (m.clone(), HalfLaurent::constant(c.ev_t1()))),
        )
    }

    /// True when no coefficient depends on `t`.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(HalfLaurent::is_constant)
    }

    /// Sum of `ev_t1` of all coefficients.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().map(HalfLaurent::ev_t1).sum()
    }

    /// Monomials of the support that are dominant.
    pub fn dominant_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys().filter(|m| m.is_dominant())
    }

    /// Smallest and largest spectral index over the support.
    pub fn p_range(&self) -> Option<(i32, i32)> {
        self.terms.keys().filter_map(Monomial::p_range).reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
    }

    /// Commutative product in `Y`, coefficients multiplied as polynomials.
    pub fn commutative_product(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_same(other)?;
        let mut out = TorusElement::zero(self.ty);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub(crate) fn star_with(&self, other: &TorusElement, snap: &GammaSnapshot) -> TorusElement {
        let mut out = TorusElement::zero(self.ty);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let half = snap.pair(m1, m2) as i32;
                let c = c1 * c2;
                out.add_term_shifted(m1.mul(m2), &c, half);
            }
        }
        out
    }
}

/// Spectral spread needed to pair every monomial of `x` with every monomial of `y`.
pub(crate) fn pair_span(x: &TorusElement, y: &TorusElement) -> i32 {
    match (x.p_range(), y.p_range()) {
        (Some((lo1, hi1)), Some((lo2, hi2))) => (hi1 - lo2).abs().max((hi2 - lo1).abs()),
        _ => 0,
    }
}

/// `x * y` in the quantum torus.
pub fn star_product(g: &GammaTable, x: &TorusElement, y: &TorusElement) -> Result<TorusElement> {
    x.check_same(y)?;
    if x.ty != g.lie_type() {
        return Err(Error::Mismatch(format!("{} vs {}", x.ty, g.lie_type())));
    }
    let snap = g.snapshot(pair_span(x, y));
    Ok(x.star_with(y, &snap))
}

pub fn bar(x: &TorusElement) -> TorusElement {
    x.bar()
}

pub fn ev_t1(x: &TorusElement) -> TorusElement {
    x.ev_t1()
}

/// Debug-style rendering in monomial order; the CLI has its own layout.
impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

/// An element with a designated top monomial of coefficient exactly 1, all
/// other monomials strictly below it in the Nakajima order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedElement {
    top: Monomial,
    body: TorusElement,
}

impl PointedElement {
    /// Validates the pointedness conditions.
    pub fn new(cartan: &CartanData, top: Monomial, body: TorusElement) -> Result<Self> {
        if body.lie_type() != cartan.lie_type() {
            return Err(Error::Mismatch(format!("{} vs {}", body.lie_type(), cartan.lie_type())));
        }
        check_pointed(cartan, &top, &body)?;
        Ok(Self { top, body })
    }

    /// Skips validation; callers guarantee the invariant by construction and
    /// tests re-check it.
    pub(crate) fn new_unchecked(top: Monomial, body: TorusElement) -> Self {
        debug_assert!(body.coeff(&top).is_one());
        Self { top, body }
    }

    pub fn monomial(ty: LieType, m: Monomial) -> Self {
        Self { body: TorusElement::monomial(ty, m.clone()), top: m }
    }

    pub fn top(&self) -> &Monomial {
        &self.top
    }

    pub fn body(&self) -> &TorusElement {
        &self.body
    }

    pub fn into_body(self) -> TorusElement {
        self.body
    }

    pub fn lie_type(&self) -> LieType {
        self.body.lie_type()
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> HalfLaurent {
        self.body.coeff(m)
    }

    pub fn bar(&self) -> PointedElement {
        Self { top: self.top.clone(), body: self.body.bar() }
    }

    pub fn ev_t1(&self) -> PointedElement {
        Self { top: self.top.clone(), body: self.body.ev_t1() }
    }

    pub fn shifted(&self, dp: i32) -> PointedElement {
        Self { top: self.top.shifted(dp), body: self.body.shifted(dp) }
    }

    /// Re-runs the pointedness check.
    pub fn validate(&self, cartan: &CartanData) -> Result<()> {
        check_pointed(cartan, &self.top, &self.body)
    }
}

fn check_pointed(cartan: &CartanData, top: &Monomial, body: &TorusElement) -> Result<()> {
    let c = body.coeff(top);
    if !c.is_one() {
        return Err(Error::NotPointed(format!("coefficient of top {top} is {c}")));
    }
    for m in body.monomials() {
        if m != top && !nakajima_leq(cartan, m, top, None) {
            return Err(Error::NotPointed(format!("{m} is not below {top}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Family;

    fn a1() -> GammaTable {
        GammaTable::for_type(LieType::new(Family::A, 1).unwrap()).unwrap()
    }

    #[test]
    fn star_examples() {
        let g = a1();
        let ty = g.lie_type();
        let y0 = TorusElement::monomial(ty, Monomial::y(1, 0));
        let y2 = TorusElement::monomial(ty, Monomial::y(1, 2));
        let prod = Monomial::y(1, 0).mul(&Monomial::y(1, 2));
        let p = star_product(&g, &y0, &y2).unwrap();
        assert_eq!(p, TorusElement::term(ty, prod.clone(), HalfLaurent::t_half_power(-2)));
        let q = star_product(&g, &y2, &y0).unwrap();
        assert_eq!(q, TorusElement::term(ty, prod, HalfLaurent::t_half_power(2)));
        assert_eq!(p.bar(), q);
        assert_eq!(star_product(&g, &y0, &TorusElement::one(ty)).unwrap(), y0);
        assert_eq!(star_product(&g, &y0, &y0).unwrap(), TorusElement::monomial(ty, Monomial::y_pow(1, 0, 2)));
    }

    #[test]
    fn mismatch_is_reported() {
        let g = a1();
        let other = TorusElement::one(LieType::new(Family::A, 2).unwrap());
        assert!(matches!(star_product(&g, &other, &other), Err(Error::Mismatch(_))));
    }

    #[test]
    fn ev_t1_collapses() {
        let ty = LieType::new(Family::A, 1).unwrap();
        let c = HalfLaurent::from_pairs([(2, 1), (-2, 1)]);
        let x = TorusElement::term(ty, Monomial::y(1, 0), c);
        assert_eq!(x.ev_t1(), TorusElement::term(ty, Monomial::y(1, 0), HalfLaurent::constant(2)));
    }

    #[test]
    fn pointed_validation() {
        let g = a1();
        let ty = g.lie_type();
        let body = TorusElement::from_terms(
            ty,
            [(Monomial::y(1, 0), HalfLaurent::one()), (Monomial::y_pow(1, 2, -1), HalfLaurent::one())],
        );
        assert!(PointedElement::new(g.cartan(), Monomial::y(1, 0), body.clone()).is_ok());
        assert!(matches!(
            PointedElement::new(g.cartan(), Monomial::y_pow(1, 2, -1), body),
            Err(Error::NotPointed(_))
        ));
    }
}
