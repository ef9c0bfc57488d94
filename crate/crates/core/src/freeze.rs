//! Diagram inclusions `I` into `I~`, the restriction `res_I` and the freezing
//! operator on pointed elements.
//!
//! Freezing keeps the terms `m'` of an `m`-pointed element with `m' <=_I m`,
//! i.e. `m m'^{-1}` is a product of `A~_{i,p}` with `i` in the image of `I`,
//! and then forgets the variables outside `I`.

use crate::cartan::{CartanData, LieType, Node};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::nakajima_leq;
use crate::torus::{star_product, PointedElement, TorusElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramInclusion {
    small: CartanData,
    big: CartanData,
    /// `embed[i-1]` is the image of small node `i`.
    embed: Vec<Node>,
    /// Big node -> small node, 0 when outside the image.
    back: Vec<Node>,
}

impl DiagramInclusion {
    /// Validates that `embed` is injective and preserves `c_ij` and `d_i`.
    pub fn new(small: CartanData, big: CartanData, embed: Vec<Node>) -> Result<Self> {
        if embed.len() != small.rank() {
            return Err(Error::InvalidInclusion(format!(
                "embedding lists {} nodes for {}",
                embed.len(),
                small.lie_type()
            )));
        }
        let mut back = vec![0; big.rank() + 1];
        for (k, &e) in embed.iter().enumerate() {
            if !big.lie_type().contains(e) {
                return Err(Error::InvalidInclusion(format!("node {e} is not in {}", big.lie_type())));
            }
            if back[e as usize] != 0 {
                return Err(Error::InvalidInclusion(format!("node {e} is hit twice")));
            }
            back[e as usize] = k as Node + 1;
        }
        for i in small.nodes() {
            let ei = embed[i as usize - 1];
            if big.d(ei) != small.d(i) {
                return Err(Error::InvalidInclusion(format!("d differs at node {i}")));
            }
            for j in small.nodes() {
                if big.c(ei, embed[j as usize - 1]) != small.c(i, j) {
                    return Err(Error::InvalidInclusion(format!("c differs at ({i},{j})")));
                }
            }
        }
        Ok(Self { small, big, embed, back })
    }

    /// Identity on labels `1..=n`, the usual inclusion within one family.
    pub fn standard(small: LieType, big: LieType) -> Result<Self> {
        if small.family != big.family || small.rank >= big.rank {
            return Err(Error::InvalidInclusion(format!("{small} is not a smaller rank of {big}")));
        }
        let small = CartanData::new(small)?;
        let big = CartanData::new(big)?;
        let embed = small.nodes().collect();
        Self::new(small, big, embed)
    }

    pub fn small(&self) -> &CartanData {
        &self.small
    }

    pub fn big(&self) -> &CartanData {
        &self.big
    }

    pub fn embed(&self, i: Node) -> Node {
        self.embed[i as usize - 1]
    }

    /// The image of `I` inside `I~`.
    pub fn image(&self) -> &[Node] {
        &self.embed
    }

    /// Small node for a big node, if it is in the image.
    pub fn preimage(&self, big_node: Node) -> Option<Node> {
        match self.back.get(big_node as usize) {
            Some(&0) | None => None,
            Some(&n) => Some(n),
        }
    }

    /// Embeds a small monomial into the big ring.
    pub fn lift(&self, m: &Monomial) -> Monomial {
        m.map_nodes(|i| Some(self.embed(i)))
    }

    pub fn res_monomial(&self, m: &Monomial) -> Monomial {
        m.map_nodes(|i| self.preimage(i))
    }

    fn check_big(&self, ty: LieType) -> Result<()> {
        if ty != self.big.lie_type() {
            return Err(Error::Mismatch(format!("expected {}, got {ty}", self.big.lie_type())));
        }
        Ok(())
    }
}

/// `res_I`: sends `Y~_{i,p}` to `Y_{i,p}` on the image of `I` and to 1 elsewhere.
pub fn res_i(inc: &DiagramInclusion, x: &TorusElement) -> Result<TorusElement> {
    inc.check_big(x.lie_type())?;
    let mut out = TorusElement::zero(inc.small.lie_type());
    for (m, c) in x.iter() {
        out.add_term(inc.res_monomial(m), c);
    }
    Ok(out)
}

/// Terms of `y` lying `<=_I` below its top.
pub fn frozen_support<'a>(inc: &'a DiagramInclusion, y: &'a PointedElement) -> impl Iterator<Item = &'a Monomial> + 'a {
    y.body().monomials().filter(move |m| nakajima_leq(&inc.big, m, y.top(), Some(inc.image())))
}

/// The freezing operator.
pub fn freeze(inc: &DiagramInclusion, y: &PointedElement) -> Result<PointedElement> {
    inc.check_big(y.lie_type())?;
    y.validate(&inc.big)?;
    let mut out = TorusElement::zero(inc.small.lie_type());
    for m in frozen_support(inc, y) {
        out.add_term(inc.res_monomial(m), &y.coeff(m));
    }
    PointedElement::new(&inc.small, inc.res_monomial(y.top()), out)
}

/// `t^{-gamma(m1,m2)/2} y1 * y2`: the product normalized to be `m1 m2`-pointed.
pub fn normalized_product(engine: &Engine, y1: &PointedElement, y2: &PointedElement) -> Result<PointedElement> {
    let g = engine.gamma();
    let half = g.gamma_pair(y1.top(), y2.top())?;
    let body = star_product(g, y1.body(), y2.body())?.t_shifted(-(half as i32));
    PointedElement::new(engine.cartan(), y1.top().mul(y2.top()), body)
}

/// Freezing commutes with normalized products of pointed elements.
pub fn freeze_commutes_with_product(
    inc: &DiagramInclusion,
    small: &Engine,
    big: &Engine,
    y1: &PointedElement,
    y2: &PointedElement,
) -> Result<bool> {
    if small.cartan() != &inc.small || big.cartan() != &inc.big {
        return Err(Error::Mismatch("engines do not match the inclusion".into()));
    }
    let lhs = freeze(inc, &normalized_product(big, y1, y2)?)?;
    let rhs = normalized_product(small, &freeze(inc, y1)?, &freeze(inc, y2)?)?;
    Ok(lhs == rhs)
}
