//! Order-2 diagram automorphisms of types A and D, the folding map onto the
//! orbit variables `Y_{[i,p]}`, twisted q-characters of simple modules and
//! twisted freezing.
//!
//! Nodes are stored with the same `1..=n` labels as the untwisted side. For
//! type A the signed labels (`-l..=l`, skipping 0 for even rank) are a
//! presentation choice handled by [`FoldingDatum::label`] and
//! [`FoldingDatum::from_label`]. On the skeletal rings folding is a pure
//! relabeling `Y_{i,p} -> Y_{[i,p]}`; the sign `omega = -1` only appears when
//! orbit variables are unfolded, as the `eps` component of [`UVar`].

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{CartanData, Family, LieType, Node};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::freeze::DiagramInclusion;
use crate::kl::chi_q;
use crate::monomial::{Monomial, Var};
use crate::order::factorize;
use crate::torus::TorusElement;

/// An order-2 automorphism `sigma` of a type A or D diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingDatum {
    cartan: CartanData,
    sigma: Vec<Node>,
}

impl FoldingDatum {
    pub fn new(ty: LieType) -> Result<Self> {
        let n = ty.rank;
        let sigma: Vec<Node> = match ty.family {
            Family::A if n >= 2 => (1..=n).map(|i| (n + 1 - i) as Node).collect(),
            Family::D if n >= 4 => (1..=n).map(|i| match i { 1 => 2, 2 => 1, k => k as Node }).collect(),
            _ => return Err(Error::UnsupportedFolding(format!("{ty}"))),
        };
        let cartan = CartanData::new(ty)?;
        let fd = Self { cartan, sigma };
        for i in fd.cartan.nodes() {
            debug_assert_eq!(fd.sigma(fd.sigma(i)), i);
            for j in fd.cartan.nodes() {
                debug_assert_eq!(fd.cartan.c(fd.sigma(i), fd.sigma(j)), fd.cartan.c(i, j));
            }
        }
        Ok(fd)
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn lie_type(&self) -> LieType {
        self.cartan.lie_type()
    }

    pub fn order(&self) -> u32 {
        2
    }

    pub fn sigma(&self, i: Node) -> Node {
        self.sigma[i as usize - 1]
    }

    /// Signed label of node `i` (type A), or `i` itself (type D).
    pub fn label(&self, i: Node) -> i64 {
        let n = self.cartan.rank() as i64;
        let i = i as i64;
        match self.cartan.lie_type().family {
            Family::A if n % 2 == 1 => i - (n + 1) / 2,
            Family::A => {
                let l = n / 2;
                if i <= l {
                    i - l - 1
                } else {
                    i - l
                }
            }
            _ => i,
        }
    }

    /// Inverse of [`FoldingDatum::label`].
    pub fn from_label(&self, label: i64) -> Result<Node> {
        self.cartan
            .nodes()
            .find(|&i| self.label(i) == label)
            .ok_or_else(|| Error::InvalidNode { node: label, ty: format!("{} (signed labels)", self.lie_type()) })
    }
}

/// A finite sum of orbit monomials `Y_{[i,p]}` with integer coefficients.
/// Orbit monomials reuse [`Monomial`], read in the variables `Y_{[i,p]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedElement {
    ty: LieType,
    terms: BTreeMap<Monomial, i64>,
}

impl TwistedElement {
    pub fn zero(ty: LieType) -> Self {
        Self { ty, terms: BTreeMap::new() }
    }

    pub fn monomial(ty: LieType, m: Monomial) -> Self {
        Self { ty, terms: BTreeMap::from([(m, 1)]) }
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        let slot = self.terms.entry(m.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Commutative product.
    pub fn mul(&self, other: &TwistedElement) -> TwistedElement {
        let mut out = TwistedElement::zero(self.ty);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

/// `A_{[i,p]} = Y_{[i,p-1]} Y_{[i,p+1]} prod_{c_ji = -1} Y_{[j,p]}^{-1}`.
pub fn a_twisted(fd: &FoldingDatum, i: Node, p: i32) -> Monomial {
    let mut f = vec![(Var::new(i, p - 1), 1), (Var::new(i, p + 1), 1)];
    f.extend(fd.cartan.neighbours(i).filter(|&(_, c)| c == -1).map(|(j, _)| (Var::new(j, p), -1)));
    Monomial::from_factors(f)
}

/// `m <=^sigma m'`, optionally through `A_{[i,p]}` with `i` in `restrict` only.
pub fn twisted_leq(fd: &FoldingDatum, m: &Monomial, m_prime: &Monomial, restrict: Option<&[Node]>) -> bool {
    // The orbit simple roots have the same shape as the untwisted ones in
    // simply-laced type, so the greedy factorization applies verbatim.
    factorize(&fd.cartan, &m_prime.div(m), restrict).is_some()
}

/// `phi^sigma`: relabels `Y_{i,p}` as `Y_{[i,p]}`; coefficients must be constant.
pub fn fold_phi(fd: &FoldingDatum, x: &TorusElement) -> Result<TwistedElement> {
    if x.lie_type() != fd.lie_type() {
        return Err(Error::Mismatch(format!("{} vs {}", x.lie_type(), fd.lie_type())));
    }
    let mut out = TwistedElement::zero(fd.lie_type());
    for (m, c) in x.iter() {
        if !c.is_constant() {
            return Err(Error::NonConstantCoefficient(m.to_string()));
        }
        out.add_term(m.clone(), c.constant_term());
    }
    Ok(out)
}

/// An `m`-pointed twisted element: `m` has coefficient 1 and every other
/// monomial is strictly below it in `<=^sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPointed {
    top: Monomial,
    body: TwistedElement,
}

impl TwistedPointed {
    pub fn new(fd: &FoldingDatum, top: Monomial, body: TwistedElement) -> Result<Self> {
        if body.lie_type() != fd.lie_type() {
            return Err(Error::Mismatch(format!("{} vs {}", body.lie_type(), fd.lie_type())));
        }
        if body.coeff(&top) != 1 {
            return Err(Error::NotPointed(format!("coefficient of top {top} is {}", body.coeff(&top))));
        }
        for m in body.terms.keys() {
            if m != &top && !twisted_leq(fd, m, &top, None) {
                return Err(Error::NotPointed(format!("{m} is not below {top}")));
            }
        }
        Ok(Self { top, body })
    }

    pub fn top(&self) -> &Monomial {
        &self.top
    }

    pub fn body(&self) -> &TwistedElement {
        &self.body
    }
}

/// `phi^sigma(chi_q(L(m)))`, the twisted q-character of `L^sigma(phi^sigma(m))`.
pub fn chi_q_twisted(fd: &FoldingDatum, engine: &Engine, m: &Monomial) -> Result<TwistedPointed> {
    if engine.lie_type() != fd.lie_type() {
        return Err(Error::Mismatch(format!("{} vs {}", engine.lie_type(), fd.lie_type())));
    }
    let body = fold_phi(fd, &chi_q(engine, m)?)?;
    TwistedPointed::new(fd, m.clone(), body)
}

/// The unfolded variable `Y_{i, (-1)^eps q^p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UVar {
    pub node: Node,
    pub p: i32,
    pub eps: u8,
}

/// Laurent monomial in unfolded variables, sorted with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnfoldedMonomial {
    factors: Vec<(UVar, i32)>,
}

impl UnfoldedMonomial {
    pub fn from_factors<I: IntoIterator<Item = (UVar, i32)>>(it: I) -> Self {
        let mut acc: BTreeMap<UVar, i32> = BTreeMap::new();
        for (v, e) in it {
            *acc.entry(v).or_insert(0) += e;
        }
        Self { factors: acc.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn factors(&self) -> &[(UVar, i32)] {
        &self.factors
    }

    /// `(i,p,eps) -> (sigma(i), p, eps+1)`.
    pub fn sigma(&self, fd: &FoldingDatum) -> UnfoldedMonomial {
        Self::from_factors(
            self.factors
                .iter()
                .map(|&(v, e)| (UVar { node: fd.sigma(v.node), p: v.p, eps: (v.eps + 1) % 2 }, e)),
        )
    }
}

impl fmt::Display for UnfoldedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for &(v, e) in &self.factors {
            write!(f, "Y[{},{},{}]", v.node, v.p, v.eps)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub type UnfoldedElement = BTreeMap<UnfoldedMonomial, i64>;

/// Substitutes `Y_{[i,p]} -> Y_{(sigma(i),p,1)} Y_{(i,p,0)}`.
pub fn unfold_monomial(fd: &FoldingDatum, m: &Monomial) -> UnfoldedMonomial {
    UnfoldedMonomial::from_factors(m.factors().flat_map(|(v, e)| {
        [
            (UVar { node: fd.sigma(v.node), p: v.p, eps: 1 }, e),
            (UVar { node: v.node, p: v.p, eps: 0 }, e),
        ]
    }))
}

pub fn unfold_expand(fd: &FoldingDatum, x: &TwistedElement) -> UnfoldedElement {
    let mut out = UnfoldedElement::new();
    for (m, c) in &x.terms {
        *out.entry(unfold_monomial(fd, m)).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Applies the sigma action termwise.
pub fn sigma_act(fd: &FoldingDatum, x: &UnfoldedElement) -> UnfoldedElement {
    x.iter().map(|(m, c)| (m.sigma(fd), *c)).collect()
}

pub fn is_sigma_invariant(fd: &FoldingDatum, x: &UnfoldedElement) -> bool {
    &sigma_act(fd, x) == x
}

/// An inclusion of diagrams compatible with the automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedInclusion {
    inner: DiagramInclusion,
    small: FoldingDatum,
    big: FoldingDatum,
}

impl TwistedInclusion {
    /// Checks that `embed` intertwines the two automorphisms.
    pub fn new(small: FoldingDatum, big: FoldingDatum, embed: Vec<Node>) -> Result<Self> {
        let inner = DiagramInclusion::new(small.cartan.clone(), big.cartan.clone(), embed)?;
        for i in small.cartan.nodes() {
            if big.sigma(inner.embed(i)) != inner.embed(small.sigma(i)) {
                return Err(Error::IncompatibleInclusion(format!(
                    "node {i}: sigma~(embed(i)) = {} but embed(sigma(i)) = {}",
                    big.sigma(inner.embed(i)),
                    inner.embed(small.sigma(i))
                )));
            }
        }
        Ok(Self { inner, small, big })
    }

    /// The natural inclusion: signed labels for type A (same rank parity),
    /// identity on `1..=n` for type D.
    pub fn standard(small: LieType, big: LieType) -> Result<Self> {
        if small.family != big.family || small.rank >= big.rank {
            return Err(Error::InvalidInclusion(format!("{small} is not a smaller rank of {big}")));
        }
        let sfd = FoldingDatum::new(small)?;
        let bfd = FoldingDatum::new(big)?;
        let embed = match small.family {
            Family::A => {
                if small.rank % 2 != big.rank % 2 {
                    return Err(Error::IncompatibleInclusion(format!("{small} and {big} differ in rank parity")));
                }
                sfd.cartan.nodes().map(|i| bfd.from_label(sfd.label(i))).collect::<Result<Vec<_>>>()?
            }
            _ => sfd.cartan.nodes().collect(),
        };
        Self::new(sfd, bfd, embed)
    }

    pub fn untwisted(&self) -> &DiagramInclusion {
        &self.inner
    }

    pub fn small(&self) -> &FoldingDatum {
        &self.small
    }

    pub fn big(&self) -> &FoldingDatum {
        &self.big
    }
}

/// `res^sigma_I` on orbit variables.
pub fn twisted_res(inc: &TwistedInclusion, x: &TwistedElement) -> Result<TwistedElement> {
    if x.lie_type() != inc.big.lie_type() {
        return Err(Error::Mismatch(format!("{} vs {}", x.lie_type(), inc.big.lie_type())));
    }
    let mut out = TwistedElement::zero(inc.small.lie_type());
    for (m, c) in &x.terms {
        out.add_term(inc.inner.res_monomial(m), *c);
    }
    Ok(out)
}

/// Twisted freezing: keep the terms `<=^sigma_I` below the top, then restrict.
pub fn twisted_freeze(inc: &TwistedInclusion, y: &TwistedPointed) -> Result<TwistedPointed> {
    let y = TwistedPointed::new(&inc.big, y.top.clone(), y.body.clone())?;
    let mut kept = TwistedElement::zero(inc.big.lie_type());
    for (m, c) in &y.body.terms {
        if twisted_leq(&inc.big, m, &y.top, Some(inc.inner.image())) {
            kept.add_term(m.clone(), *c);
        }
    }
    let body = twisted_res(inc, &kept)?;
    TwistedPointed::new(&inc.small, inc.inner.res_monomial(&y.top), body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kl::dim_simple;
    use crate::order::a_monomial;

    fn ty(f: Family, n: usize) -> LieType {
        LieType::new(f, n).unwrap()
    }

    #[test]
    fn labels_and_sigma() {
        let a3 = FoldingDatum::new(ty(Family::A, 3)).unwrap();
        assert_eq!((1..=3).map(|i| a3.label(i)).collect::<Vec<_>>(), vec![-1, 0, 1]);
        assert_eq!((1..=3).map(|i| a3.sigma(i)).collect::<Vec<_>>(), vec![3, 2, 1]);
        let a4 = FoldingDatum::new(ty(Family::A, 4)).unwrap();
        assert_eq!((1..=4).map(|i| a4.label(i)).collect::<Vec<_>>(), vec![-2, -1, 1, 2]);
        for i in 1..=4 {
            assert_eq!(a4.label(a4.sigma(i)), -a4.label(i));
            assert_eq!(a4.from_label(a4.label(i)).unwrap(), i);
        }
        assert!(a4.from_label(0).is_err());
        let d5 = FoldingDatum::new(ty(Family::D, 5)).unwrap();
        assert_eq!((1..=5).map(|i| d5.sigma(i)).collect::<Vec<_>>(), vec![2, 1, 3, 4, 5]);
        assert!(matches!(FoldingDatum::new(ty(Family::B, 3)), Err(Error::UnsupportedFolding(_))));
        assert!(matches!(FoldingDatum::new(ty(Family::A, 1)), Err(Error::UnsupportedFolding(_))));
    }

    #[test]
    fn folding_simple_roots() {
        for fd in [FoldingDatum::new(ty(Family::A, 4)).unwrap(), FoldingDatum::new(ty(Family::D, 4)).unwrap()] {
            for i in fd.cartan().nodes() {
                assert_eq!(a_twisted(&fd, i, 3), a_monomial(fd.cartan(), i, 3));
            }
        }
    }

    #[test]
    fn unfold_examples() {
        let a3 = FoldingDatum::new(ty(Family::A, 3)).unwrap();
        let mid = unfold_monomial(&a3, &Monomial::y(2, 5));
        assert_eq!(
            mid.factors(),
            &[(UVar { node: 2, p: 5, eps: 0 }, 1), (UVar { node: 2, p: 5, eps: 1 }, 1)]
        );
        let d4 = FoldingDatum::new(ty(Family::D, 4)).unwrap();
        let u = unfold_monomial(&d4, &Monomial::y(1, 0));
        assert_eq!(u.factors(), &[(UVar { node: 1, p: 0, eps: 0 }, 1), (UVar { node: 2, p: 0, eps: 1 }, 1)]);
        assert_eq!(u.sigma(&d4), u);
    }

    #[test]
    fn twisted_characters() {
        let a3 = FoldingDatum::new(ty(Family::A, 3)).unwrap();
        let e = Engine::new(a3.lie_type()).unwrap();
        let m = Monomial::y(a3.from_label(0).unwrap(), 0);
        let x = chi_q_twisted(&a3, &e, &m).unwrap();
        assert_eq!(x.body().len(), 6);
        assert_eq!(x.body().coefficient_sum(), dim_simple(&e, &m).unwrap());
        assert!(is_sigma_invariant(&a3, &unfold_expand(&a3, x.body())));
        assert_eq!(chi_q_twisted(&a3, &e, &Monomial::one()).unwrap().body().len(), 1);

        let d4 = FoldingDatum::new(ty(Family::D, 4)).unwrap();
        let e = Engine::new(d4.lie_type()).unwrap();
        let x = chi_q_twisted(&d4, &e, &Monomial::y(1, 0)).unwrap();
        assert_eq!(x.body().len(), 8);
        assert!(x.body().terms().values().all(|&c| c == 1));
    }

    #[test]
    fn twisted_inclusions() {
        let inc = TwistedInclusion::standard(ty(Family::A, 3), ty(Family::A, 5)).unwrap();
        assert_eq!(inc.untwisted().image(), &[2, 3, 4]);
        assert!(TwistedInclusion::standard(ty(Family::A, 3), ty(Family::A, 4)).is_err());
        let a3 = FoldingDatum::new(ty(Family::A, 3)).unwrap();
        let a5 = FoldingDatum::new(ty(Family::A, 5)).unwrap();
        assert!(matches!(TwistedInclusion::new(a3, a5, vec![1, 2, 3]), Err(Error::IncompatibleInclusion(_))));

        let big = Engine::new(inc.big().lie_type()).unwrap();
        let small = Engine::new(inc.small().lie_type()).unwrap();
        let m = Monomial::y(inc.big().from_label(0).unwrap(), 0);
        let lhs = twisted_freeze(&inc, &chi_q_twisted(inc.big(), &big, &m).unwrap()).unwrap();
        let rhs = chi_q_twisted(inc.small(), &small, &inc.untwisted().res_monomial(&m)).unwrap();
        assert_eq!(lhs, rhs);

        let bare = TwistedPointed::new(inc.big(), Monomial::y(1, 0), TwistedElement::monomial(inc.big().lie_type(), Monomial::y(1, 0)))
            .unwrap();
        assert_eq!(twisted_freeze(&inc, &bare).unwrap().body().len(), 1);
    }
}
