//! The t-analog Frenkel-Mukhin recursion computing `F_t(m)`.
//!
//! `D(m)` is the closure of `{m}` under taking supports of the rank-one blocks
//! `F_{i,t}(m')` of its `i`-dominant members. It is sorted by a total order
//! extending the Nakajima order. The coefficients are then produced in a
//! single forward pass: when a member `m_u` is reached, its `s(m_u)` is known,
//! and for every node where it is `i`-dominant the difference
//! `s(m_u) - s_i(m_u)` is pushed into `s_i` of the other monomials of
//! `F_{i,t}(m_u)`, all of which come later in the order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use crate::cartan::Node;
use crate::engine::{normalizing_shift, Engine};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::Monomial;
use crate::order::depth_below;
use crate::sl2core::{f_i_classical, f_it_body};
use crate::torus::{PointedElement, TorusElement};

/// Total orders on `D(m)` compatible with the Nakajima order. Both sort by
/// depth below the seed first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TotalOrder {
    /// Depth, then ascending monomial order.
    #[default]
    DepthLex,
    /// Depth, then descending monomial order.
    DepthRevLex,
}

impl TotalOrder {
    fn cmp(self, a: &(u64, Monomial), b: &(u64, Monomial)) -> Ordering {
        a.0.cmp(&b.0).then_with(|| match self {
            TotalOrder::DepthLex => a.1.cmp(&b.1),
            TotalOrder::DepthRevLex => b.1.cmp(&a.1),
        })
    }
}

/// The monomial closure `D(m)`, seed first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    pub seed: Monomial,
    pub members: Vec<Monomial>,
    /// Number of `A^{-1}` factors separating each member from the seed.
    pub depths: Vec<u64>,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.members.iter().position(|x| x == m)
    }
}

fn check_dominant(engine: &Engine, m: &Monomial) -> Result<()> {
    for (v, _) in m.factors() {
        engine.cartan().check_node(v.node)?;
    }
    if !m.is_dominant() {
        return Err(Error::NotDominant(m.to_string()));
    }
    Ok(())
}

/// Nodes at which `m` is `i`-dominant and carries a nontrivial `i`-part.
fn active_nodes(m: &Monomial) -> Vec<Node> {
    let mut nodes: Vec<Node> = m.factors().filter(|(_, e)| *e > 0).map(|(v, _)| v.node).collect();
    nodes.dedup();
    nodes.retain(|&i| m.is_i_dominant(i));
    nodes
}

pub fn dominance_closure(engine: &Engine, m: &Monomial, cap: usize) -> Result<ClosureSet> {
    dominance_closure_with(engine, m, cap, TotalOrder::default())
}

pub fn dominance_closure_with(engine: &Engine, m: &Monomial, cap: usize, order: TotalOrder) -> Result<ClosureSet> {
    check_dominant(engine, m)?;
    let mut seen: HashSet<Monomial> = HashSet::from([m.clone()]);
    let mut queue = vec![m.clone()];
    while let Some(cur) = queue.pop() {
        for i in active_nodes(&cur) {
            let block = f_it_body(engine, &cur, i)?;
            for x in block.monomials() {
                if !seen.contains(x) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    seen.insert(x.clone());
                    queue.push(x.clone());
                }
            }
        }
    }
    let cartan = engine.cartan();
    let mut keyed: Vec<(u64, Monomial)> = seen
        .into_iter()
        .map(|x| {
            let d = depth_below(cartan, &x, m).expect("closure member escaped the cone below the seed");
            (d, x)
        })
        .collect();
    keyed.sort_by(|a, b| order.cmp(a, b));
    debug_assert_eq!(&keyed[0].1, m);
    let (depths, members) = keyed.into_iter().unzip();
    Ok(ClosureSet { seed: m.clone(), members, depths })
}

/// Runs the recursion with coefficients in a generic ring.
fn run_recursion<C, Z, Sub, Block>(
    closure: &ClosureSet,
    one: C,
    is_zero: Z,
    sub: Sub,
    mut block: Block,
) -> Result<Vec<C>>
where
    C: Clone + PartialEq + std::fmt::Display + Default,
    Z: Fn(&C) -> bool,
    Sub: Fn(&C, &C) -> C,
    Block: FnMut(&Monomial, Node, &C, &mut dyn FnMut(&Monomial, &C)) -> Result<()>,
{
    let index: HashMap<&Monomial, usize> = closure.members.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let n = closure.len();
    let mut s: Vec<C> = vec![C::default(); n];
    let mut s_i: Vec<BTreeMap<Node, C>> = vec![BTreeMap::new(); n];
    for k in 0..n {
        let mk = &closure.members[k];
        let sk = if k == 0 {
            one.clone()
        } else if mk.is_dominant() {
            C::default()
        } else {
            let mut value: Option<(Node, C)> = None;
            let mut nodes: Vec<Node> = mk.factors().filter(|(_, e)| *e < 0).map(|(v, _)| v.node).collect();
            nodes.dedup();
            for i in nodes {
                let si = s_i[k].get(&i).cloned().unwrap_or_default();
                match &value {
                    None => value = Some((i, si)),
                    Some((j, prev)) if *prev != si => {
                        return Err(Error::WellDefinednessViolation {
                            monomial: mk.to_string(),
                            detail: format!("s_{j} = {prev} but s_{i} = {si}"),
                        })
                    }
                    Some(_) => {}
                }
            }
            value.map(|(_, v)| v).unwrap_or_default()
        };
        for i in active_nodes(mk) {
            let diff = sub(&sk, &s_i[k].get(&i).cloned().unwrap_or_default());
            if is_zero(&diff) {
                continue;
            }
            let mut push = |target: &Monomial, c: &C| {
                if target == mk {
                    return;
                }
                let idx = *index.get(target).expect("rank-one block left the closure");
                assert!(idx > k, "rank-one block reached an earlier member");
                let slot = s_i[idx].entry(i).or_default();
                *slot = sub(slot, &sub(&C::default(), c));
            };
            block(mk, i, &diff, &mut push)?;
        }
        s[k] = sk;
    }
    Ok(s)
}

/// `F_t(m)` computed along `D(m)` sorted by `order`.
pub fn f_t_with(engine: &Engine, m: &Monomial, cap: usize, order: TotalOrder) -> Result<PointedElement> {
    let closure = dominance_closure_with(engine, m, cap, order)?;
    let s = run_recursion(
        &closure,
        HalfLaurent::one(),
        HalfLaurent::is_zero,
        |a, b| a - b,
        |mk, i, diff, push| {
            for (x, c) in f_it_body(engine, mk, i)?.iter() {
                push(x, &(c * diff));
            }
            Ok(())
        },
    )?;
    let body = TorusElement::from_terms(engine.lie_type(), closure.members.iter().cloned().zip(s));
    Ok(PointedElement::new_unchecked(m.clone(), body))
}

/// `F_t(m)`, memoized per engine.
pub fn f_t(engine: &Engine, m: &Monomial) -> Result<PointedElement> {
    check_dominant(engine, m)?;
    let shift = normalizing_shift(m);
    let normalized = m.shifted(shift);
    let cap = engine.cap();
    let base = engine.ft_cached(&normalized, || f_t_with(engine, &normalized, cap, TotalOrder::default()))?;
    Ok(base.shifted(-shift))
}

/// The recursion at `t = 1` with integer coefficients, using commutative
/// string products for the rank-one blocks. Serves as an independent check
/// on `F_t` for fundamental monomials.
pub fn f_classical(engine: &Engine, m: &Monomial) -> Result<TorusElement> {
    f_classical_with(engine, m, engine.cap())
}

pub fn f_classical_with(engine: &Engine, m: &Monomial, cap: usize) -> Result<TorusElement> {
    let closure = dominance_closure(engine, m, cap)?;
    let cartan = engine.cartan();
    let s = run_recursion(
        &closure,
        Wrapped(1),
        |c| c.0 == 0,
        |a, b| Wrapped(a.0 - b.0),
        |mk, i, diff, push| {
            for (x, c) in f_i_classical(cartan, mk, i)? {
                push(&x, &Wrapped(c * diff.0));
            }
            Ok(())
        },
    )?;
    Ok(TorusElement::from_terms(
        engine.lie_type(),
        closure.members.iter().cloned().zip(s).map(|(x, c)| (x, HalfLaurent::constant(c.0))),
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Wrapped(i64);

impl std::fmt::Display for Wrapped {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
