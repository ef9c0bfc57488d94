//! The acceptance suite: nine exact checks over fixed and seeded random
//! samples, shared by the integration test and the `selftest` subcommand.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cartan::{Family, LieType, Node};
use crate::engine::Engine;
use crate::freeze::{freeze, res_i, DiagramInclusion};
use crate::kl::{chi_q, chi_qt, chi_qt_detailed, dim_simple, e_t, e_t_ordered, strictly_below_top};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Var};
use crate::order::a_monomial;
use crate::tfm::{f_classical, f_t, f_t_with, TotalOrder};
use crate::torus::{PointedElement, TorusElement};
use crate::twisted::{
    chi_q_twisted, fold_phi, is_sigma_invariant, twisted_freeze, twisted_leq, twisted_res, unfold_expand,
    FoldingDatum, TwistedInclusion, TwistedPointed,
};

const SEED: u64 = 0x5eed_0a11;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} criterion {} ({}): {} [{:.2?}]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

type Check = std::result::Result<String, String>;

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "gamma-closed-forms"),
    (2, "fundamental-coherence"),
    (3, "rank-one-kl"),
    (4, "canonical-basis"),
    (5, "standard-basis-well-defined"),
    (6, "freezing"),
    (7, "dimensions"),
    (8, "twisted"),
    (9, "scale"),
];

/// Runs the criteria whose id or name contains `filter` (all when `None`).
pub fn run_all(filter: Option<&str>) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, name)| filter.map_or(true, |f| name.contains(f) || id.to_string() == f))
        .map(|&(id, _)| run_criterion(id))
        .collect()
}

pub fn run_criterion(id: u8) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| match id {
        1 => gamma_closed_forms(),
        2 => fundamental_coherence(),
        3 => rank_one_kl(),
        4 => canonical_basis(),
        5 => standard_basis(),
        6 => freezing(),
        7 => dimensions(),
        8 => twisted_suite(),
        9 => scale(),
        _ => Err(format!("no criterion {id}")),
    }));
    let (passed, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    CriterionReport { id, name, passed, detail, elapsed: start.elapsed() }
}

fn ty(f: Family, n: usize) -> LieType {
    LieType::new(f, n).expect("valid type")
}

fn engine(t: LieType) -> Engine {
    Engine::new(t).expect("classical type")
}

/// Every classical type of rank at most 4.
fn small_types() -> Vec<LieType> {
    let mut v: Vec<LieType> = (1..=4).map(|n| ty(Family::A, n)).collect();
    v.extend((2..=4).map(|n| ty(Family::B, n)));
    v.extend((2..=4).map(|n| ty(Family::C, n)));
    v.push(ty(Family::D, 4));
    v
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{ctx}: {e}")
}

/// Distinct dominant monomials with 1..=`max_factors` fundamental factors on
/// `nodes`, spectral indices in `0..=pmax`.
fn random_dominant(rng: &mut ChaCha8Rng, nodes: &[Node], max_factors: usize, pmax: i32, count: usize) -> Vec<Monomial> {
    let mut out = BTreeSet::new();
    while out.len() < count {
        let k = rng.gen_range(1..=max_factors);
        let m = Monomial::from_factors(
            (0..k).map(|_| (Var::new(*nodes.choose(rng).expect("nodes"), rng.gen_range(0..=pmax)), 1)),
        );
        out.insert(m);
    }
    out.into_iter().collect()
}

fn gamma_closed_forms() -> Check {
    let mut checked = 0usize;
    for t in small_types() {
        let e = engine(t);
        let c = e.cartan();
        let g = e.gamma();
        for i in c.nodes() {
            for j in c.nodes() {
                let dc = c.d(i) * c.c(i, j);
                for u in -24..=24 {
                    let aa = g.gamma_pair(&a_monomial(c, i, u), &a_monomial(c, j, 0)).map_err(err(t))?;
                    let want = 2 * ((u == dc) as i64 - (u == -dc) as i64);
                    ensure(aa == want, || format!("{t}: gamma(A[{i},{u}], A[{j},0]) = {aa}, expected {want}"))?;
                    let ay = g.gamma_pair(&a_monomial(c, i, u), &Monomial::y(j, 0)).map_err(err(t))?;
                    let di = c.d(i);
                    let want = if i == j { 2 * ((u == di) as i64 - (u == -di) as i64) } else { 0 };
                    ensure(ay == want, || format!("{t}: gamma(A[{i},{u}], Y[{j},0]) = {ay}, expected {want}"))?;
                    checked += 2;
                }
            }
        }
    }
    Ok(format!("{checked} values"))
}

fn fundamental_coherence() -> Check {
    let types = small_types();
    let counts: Vec<usize> = types
        .par_iter()
        .map(|&t| -> std::result::Result<usize, String> {
            let e = engine(t);
            let mut n = 0;
            for i in e.cartan().nodes() {
                for p in [0, 3] {
                    let m = Monomial::y(i, p);
                    let ctx = format!("{t} {m}");
                    let ft = f_t(&e, &m).map_err(err(&ctx))?;
                    let et = e_t(&e, &m).map_err(err(&ctx))?;
                    let chi = chi_qt(&e, &m).map_err(err(&ctx))?;
                    ensure(ft == et, || format!("{ctx}: F_t != E_t"))?;
                    ensure(ft == chi, || format!("{ctx}: F_t != chi_qt"))?;
                    let cl = f_classical(&e, &m).map_err(err(&ctx))?;
                    ensure(ft.body().ev_t1() == cl, || format!("{ctx}: ev_t1(F_t) != classical"))?;
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(format!("{} fundamentals over {} types", counts.iter().sum::<usize>(), types.len()))
}

fn rank_one_kl() -> Check {
    let e = engine(ty(Family::A, 1));
    let m = Monomial::y(1, 0).mul(&Monomial::y(1, 2));
    let diff = e_t(&e, &m)
        .map_err(err("E_t"))?
        .body()
        .sub(chi_qt(&e, &m).map_err(err("chi_qt"))?.body())
        .map_err(err("difference"))?;
    let want = e_t(&e, &Monomial::one()).map_err(err("E_t(1)"))?.body().scaled(&HalfLaurent::t_half_power(-2));
    ensure(diff == want, || format!("E_t - chi_qt = {diff}"))?;
    Ok("E_t(m) - chi_qt(m) = t^-1 E_t(1)".into())
}

fn canonical_basis() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut lines = Vec::new();
    for t in [ty(Family::A, 3), ty(Family::B, 3), ty(Family::C, 3), ty(Family::D, 4)] {
        let e = engine(t);
        let nodes: Vec<Node> = e.cartan().nodes().collect();
        let samples = random_dominant(&mut rng, &nodes, 3, 6, 50);
        let max_q: Vec<i32> = samples
            .par_iter()
            .map(|m| -> std::result::Result<i32, String> {
                let ctx = format!("{t} {m}");
                let r = chi_qt_detailed(&e, m).map_err(err(&ctx))?;
                ensure(r.chi.body().is_bar_invariant(), || format!("{ctx}: not bar-invariant"))?;
                ensure(r.chi.coeff(m).is_one(), || format!("{ctx}: top coefficient {}", r.chi.coeff(m)))?;
                ensure(strictly_below_top(&e, &r.chi), || format!("{ctx}: a term is not below the top"))?;
                for (b, q) in r.basis.iter().zip(&r.q).skip(1) {
                    ensure(q.in_t_inverse_z_t_inverse(), || format!("{ctx}: Q at {b} is {q}"))?;
                }
                for (mono, c) in r.chi.body().iter() {
                    let v = c.ev_t1();
                    ensure(v > 0, || format!("{ctx}: coefficient {v} at {mono}"))?;
                }
                Ok(r.max_q_degree())
            })
            .collect::<std::result::Result<_, _>>()?;
        lines.push(format!("{t}: {} samples, max Q degree {}", samples.len(), max_q.iter().max().unwrap_or(&0)));
    }
    Ok(lines.join("; "))
}

/// Three orderings of the factors of `m`, all with non-increasing spectral
/// index: ties by ascending node, by descending node, and shuffled.
fn tie_orderings(rng: &mut ChaCha8Rng, m: &Monomial) -> [Vec<Var>; 3] {
    let base = m.fundamental_factors();
    let mut desc = base.clone();
    desc.sort_by(|a, b| b.p.cmp(&a.p).then(b.node.cmp(&a.node)));
    let mut shuffled = base.clone();
    shuffled.shuffle(rng);
    shuffled.sort_by_key(|v| std::cmp::Reverse(v.p));
    [base, desc, shuffled]
}

fn standard_basis() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut total = 0;
    for t in [ty(Family::A, 3), ty(Family::B, 3), ty(Family::C, 3), ty(Family::D, 4)] {
        let e = engine(t);
        let nodes: Vec<Node> = e.cartan().nodes().collect();
        // Force coincident spectral indices so that the orderings differ.
        let mut samples = BTreeSet::new();
        while samples.len() < 10 {
            let p = rng.gen_range(0..=4);
            let mut f = vec![(Var::new(*nodes.choose(&mut rng).expect("nodes"), p), 1)];
            f.push((Var::new(*nodes.choose(&mut rng).expect("nodes"), p), 1));
            if rng.gen_bool(0.5) {
                f.push((Var::new(*nodes.choose(&mut rng).expect("nodes"), rng.gen_range(0..=4)), 1));
            }
            samples.insert(Monomial::from_factors(f));
        }
        for m in &samples {
            let ctx = format!("{t} {m}");
            let reference = e_t(&e, m).map_err(err(&ctx))?;
            for order in tie_orderings(&mut rng, m) {
                let other = e_t_ordered(&e, &order).map_err(err(&ctx))?;
                ensure(other == reference, || format!("{ctx}: E_t depends on the factor order {order:?}"))?;
            }
            let cap = e.cap();
            let a = f_t_with(&e, m, cap, TotalOrder::DepthLex).map_err(err(&ctx))?;
            let b = f_t_with(&e, m, cap, TotalOrder::DepthRevLex).map_err(err(&ctx))?;
            ensure(a == b, || format!("{ctx}: F_t depends on the total order"))?;
            total += 1;
        }
    }
    Ok(format!("{total} monomials, 3 factor orders and 2 total orders each"))
}

fn freezing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let pairs = [
        (ty(Family::A, 2), ty(Family::A, 4)),
        (ty(Family::B, 2), ty(Family::B, 3)),
        (ty(Family::C, 2), ty(Family::C, 4)),
        (ty(Family::D, 4), ty(Family::D, 5)),
    ];
    let mut lines = Vec::new();
    for (s, b) in pairs {
        let inc = DiagramInclusion::standard(s, b).map_err(err("inclusion"))?;
        let small = engine(s);
        let big = engine(b);
        let nodes: Vec<Node> = big.cartan().nodes().collect();
        let samples = random_dominant(&mut rng, &nodes, 3, 4, 10);
        samples
            .par_iter()
            .map(|m| -> std::result::Result<(), String> {
                let ctx = format!("{b} -> {s}, {m}");
                let r = inc.res_monomial(m);
                let fz = |y: &PointedElement| freeze(&inc, y).map_err(err(&ctx));
                ensure(
                    fz(&f_t(&big, m).map_err(err(&ctx))?)? == f_t(&small, &r).map_err(err(&ctx))?,
                    || format!("{ctx}: freeze(F_t) != F_t(res)"),
                )?;
                ensure(
                    fz(&e_t(&big, m).map_err(err(&ctx))?)? == e_t(&small, &r).map_err(err(&ctx))?,
                    || format!("{ctx}: freeze(E_t) != E_t(res)"),
                )?;
                let chi_big = chi_qt(&big, m).map_err(err(&ctx))?;
                let frozen = fz(&chi_big)?;
                ensure(frozen == chi_qt(&small, &r).map_err(err(&ctx))?, || {
                    format!("{ctx}: freeze(chi_qt) != chi_qt(res)")
                })?;
                let q_big = PointedElement::new(big.cartan(), m.clone(), chi_q(&big, m).map_err(err(&ctx))?)
                    .map_err(err(&ctx))?;
                let q_frozen = fz(&q_big)?;
                ensure(q_frozen.body() == &chi_q(&small, &r).map_err(err(&ctx))?, || {
                    format!("{ctx}: freeze(chi_q) != chi_q(res)")
                })?;
                ensure(frozen.ev_t1() == fz(&chi_big.ev_t1())?, || format!("{ctx}: ev_t1 and freeze do not commute"))?;
                Ok(())
            })
            .collect::<std::result::Result<Vec<()>, _>>()?;
        lines.push(format!("{s} in {b}: {}", samples.len()));
    }
    Ok(lines.join("; "))
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn dimensions() -> Check {
    let a3 = engine(ty(Family::A, 3));
    let got: Vec<i64> = (1..=3).map(|i| dim_simple(&a3, &Monomial::y(i, 0))).collect::<crate::Result<_>>().map_err(err("A_3"))?;
    let want: Vec<i64> = (1..=3).map(|k| binomial(4, k)).collect();
    ensure(got == want, || format!("A_3 fundamental dims {got:?}, expected {want:?}"))?;

    let a1 = engine(ty(Family::A, 1));
    for k in 1..=6 {
        let m = Monomial::from_factors((0..k).map(|j| (Var::new(1, 2 * j), 1)));
        let d = dim_simple(&a1, &m).map_err(err(&m))?;
        ensure(d == k as i64 + 1, || format!("A_1 string {m}: dim {d}, expected {}", k + 1))?;
    }

    let b2 = engine(ty(Family::B, 2));
    let got: BTreeSet<i64> =
        (1..=2).map(|i| dim_simple(&b2, &Monomial::y(i, 0))).collect::<crate::Result<_>>().map_err(err("B_2"))?;
    ensure(got == BTreeSet::from([4, 5]), || format!("B_2 fundamental dims {got:?}"))?;

    for e in [&a3, &b2] {
        for i in e.cartan().nodes() {
            let m = Monomial::y(i, 0);
            let lhs = chi_q(e, &m).map_err(err(&m))?;
            ensure(lhs == f_classical(e, &m).map_err(err(&m))?, || format!("{}: chi_q({m}) != classical", e.lie_type()))?;
        }
    }
    Ok("A_3 (4,6,4); A_1 strings k+1 for k<=6; B_2 {4,5}".into())
}

fn check_twisted_output(fd: &FoldingDatum, e: &Engine, m: &Monomial) -> std::result::Result<TwistedPointed, String> {
    let ctx = format!("{} {m}", fd.lie_type());
    let x = chi_q_twisted(fd, e, m).map_err(err(&ctx))?;
    ensure(is_sigma_invariant(fd, &unfold_expand(fd, x.body())), || format!("{ctx}: unfolding is not sigma-invariant"))?;
    let dim = dim_simple(e, m).map_err(err(&ctx))?;
    ensure(x.body().coefficient_sum() == dim, || format!("{ctx}: folded dimension differs from {dim}"))?;
    ensure(x.body().coeff(m) == 1, || format!("{ctx}: top coefficient is not 1"))?;
    for mono in x.body().terms().keys() {
        ensure(mono == m || twisted_leq(fd, mono, m, None), || format!("{ctx}: {mono} is not below the top"))?;
    }
    Ok(x)
}

fn twisted_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut lines = Vec::new();
    for t in [ty(Family::A, 3), ty(Family::A, 4), ty(Family::D, 4)] {
        let fd = FoldingDatum::new(t).map_err(err(t))?;
        let e = engine(t);
        let nodes: Vec<Node> = e.cartan().nodes().collect();
        let samples = random_dominant(&mut rng, &nodes, 3, 4, 10);
        samples
            .par_iter()
            .map(|m| check_twisted_output(&fd, &e, m).map(|_| ()))
            .collect::<std::result::Result<Vec<()>, _>>()?;
        lines.push(format!("{t}: {}", samples.len()));
    }
    for (s, b) in [(ty(Family::A, 3), ty(Family::A, 5)), (ty(Family::D, 4), ty(Family::D, 5))] {
        let inc = TwistedInclusion::standard(s, b).map_err(err("inclusion"))?;
        let small = engine(s);
        let big = engine(b);
        let nodes: Vec<Node> = big.cartan().nodes().collect();
        let samples = random_dominant(&mut rng, &nodes, 2, 4, 5);
        samples
            .par_iter()
            .map(|m| -> std::result::Result<(), String> {
                let ctx = format!("{b} -> {s}, {m}");
                let q_big: TorusElement = chi_q(&big, m).map_err(err(&ctx))?;
                let folded_big = fold_phi(inc.big(), &q_big).map_err(err(&ctx))?;
                let lhs = twisted_res(&inc, &folded_big).map_err(err(&ctx))?;
                let rhs = fold_phi(inc.small(), &res_i(inc.untwisted(), &q_big).map_err(err(&ctx))?).map_err(err(&ctx))?;
                ensure(lhs == rhs, || format!("{ctx}: res and fold do not commute"))?;

                let tw_big = check_twisted_output(inc.big(), &big, m)?;
                let lhs = twisted_freeze(&inc, &tw_big).map_err(err(&ctx))?;
                let pointed = PointedElement::new(big.cartan(), m.clone(), q_big).map_err(err(&ctx))?;
                let frozen = freeze(inc.untwisted(), &pointed).map_err(err(&ctx))?;
                let rhs = fold_phi(inc.small(), frozen.body()).map_err(err(&ctx))?;
                ensure(lhs.body() == &rhs, || format!("{ctx}: twisted freeze and fold do not commute"))?;

                let r = inc.untwisted().res_monomial(m);
                let want = check_twisted_output(inc.small(), &small, &r)?;
                ensure(lhs == want, || format!("{ctx}: twisted freeze of the big simple is not the small simple"))?;
                Ok(())
            })
            .collect::<std::result::Result<Vec<()>, _>>()?;
        lines.push(format!("{s} in {b}: {}", samples.len()));
    }
    Ok(lines.join("; "))
}

/// The fixed sample for the scale run.
pub fn scale_monomial() -> Monomial {
    Monomial::from_factors([(Var::new(1, 0), 1), (Var::new(2, 3), 1), (Var::new(3, 6), 1), (Var::new(1, 8), 1)])
}

fn scale() -> Check {
    let e = engine(ty(Family::C, 3));
    let m = scale_monomial();
    let start = Instant::now();
    let r = chi_qt_detailed(&e, &m).map_err(err(&m))?;
    Ok(format!(
        "C_3 {m}: {} dominant monomials, {} terms, max Q degree {}, {:.2?}",
        r.basis.len(),
        r.chi.len(),
        r.max_q_degree(),
        start.elapsed()
    ))
}
