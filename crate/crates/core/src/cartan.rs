//! Cartan data for the classical families and the skew pairing on monomials.
//!
//! The pairing comes from the Taylor coefficients at `z = 0` of the inverse
//! deformed Cartan matrix `C(z)^{-1}`. The inverse is computed exactly: the
//! matrix is made polynomial by multiplying with `z^{max d}`, inverted by
//! fraction-free Gauss-Jordan elimination over `Z[z]`, and each entry is then
//! expanded by long division against the z-stripped determinant.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Node label, 1-based as in the usual Dynkin pictures.
pub type Node = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }
}

/// A classical Lie type `X_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if rank < family.min_rank() || rank > Node::MAX as usize {
            return Err(Error::InvalidRank { family: family.letter(), rank });
        }
        Ok(Self { family, rank })
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + Clone {
        1..=self.rank as Node
    }

    pub fn contains(&self, node: Node) -> bool {
        node >= 1 && (node as usize) <= self.rank
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.rank)
    }
}

/// Cartan matrix, minimal symmetrizer, lacing number and dual Coxeter number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    ty: LieType,
    c: Vec<Vec<i32>>,
    d: Vec<i32>,
    lacing: i32,
    dual_coxeter: i32,
}

fn edges(ty: LieType) -> Vec<(usize, usize)> {
    let n = ty.rank;
    match ty.family {
        Family::A | Family::B | Family::C => (1..n).map(|k| (k, k + 1)).collect(),
        Family::D => {
            let mut e = vec![(1, 3), (2, 3)];
            e.extend((3..n).map(|k| (k, k + 1)));
            e
        }
    }
}

/// Builds the Cartan data of a classical type.
pub fn cartan_data(ty: LieType) -> Result<CartanData> {
    let ty = LieType::new(ty.family, ty.rank)?;
    let n = ty.rank;
    let d: Vec<i32> = match ty.family {
        Family::A | Family::D => vec![1; n],
        Family::B => (0..n).map(|k| if k == 0 { 1 } else { 2 }).collect(),
        Family::C => (0..n).map(|k| if k == 0 { 2 } else { 1 }).collect(),
    };
    let mut c = vec![vec![0i32; n]; n];
    for (k, row) in c.iter_mut().enumerate() {
        row[k] = 2;
    }
    for (a, b) in edges(ty) {
        let (i, j) = (a - 1, b - 1);
        // c_ij = -ceil(d_j / d_i)
        c[i][j] = -((d[j] + d[i] - 1) / d[i]);
        c[j][i] = -((d[i] + d[j] - 1) / d[j]);
    }
    let n = n as i32;
    let (lacing, dual_coxeter) = match ty.family {
        Family::A => (1, n + 1),
        Family::B => (2, 2 * n - 1),
        Family::C => (2, n + 1),
        Family::D => (1, 2 * n - 2),
    };
    Ok(CartanData { ty, c, d, lacing, dual_coxeter })
}

impl CartanData {
    pub fn new(ty: LieType) -> Result<Self> {
        cartan_data(ty)
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + Clone {
        self.ty.nodes()
    }

    /// `c_{ij}`, 1-based.
    pub fn c(&self, i: Node, j: Node) -> i32 {
        self.c[i as usize - 1][j as usize - 1]
    }

    /// `d_i`, 1-based.
    pub fn d(&self, i: Node) -> i32 {
        self.d[i as usize - 1]
    }

    pub fn max_d(&self) -> i32 {
        self.d.iter().copied().max().unwrap_or(1)
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.c
    }

    pub fn symmetrizer(&self) -> &[i32] {
        &self.d
    }

    pub fn lacing(&self) -> i32 {
        self.lacing
    }

    pub fn dual_coxeter(&self) -> i32 {
        self.dual_coxeter
    }

    pub fn check_node(&self, node: Node) -> Result<()> {
        if self.ty.contains(node) {
            Ok(())
        } else {
            Err(Error::InvalidNode { node: node as i64, ty: self.ty.to_string() })
        }
    }

    /// Neighbours `j` of `i` together with `c_{ji}`.
    pub fn neighbours(&self, i: Node) -> impl Iterator<Item = (Node, i32)> + '_ {
        self.nodes().filter(move |&j| j != i && self.c(j, i) != 0).map(move |j| (j, self.c(j, i)))
    }
}

// ---------------------------------------------------------------------------
// Dense integer polynomials, index = power of z.

type Poly = Vec<i128>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Exact division in `Z[z]`; panics if the division leaves a remainder,
/// which would mean the elimination lost its fraction-free invariant.
fn poly_div_exact(a: &Poly, b: &Poly) -> Poly {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.is_empty() {
        return Vec::new();
    }
    let mut rem = a.clone();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        panic!("inexact polynomial division");
    }
    let mut q = vec![0i128; rem.len() - db];
    let lead = *b.last().unwrap();
    for k in (0..q.len()).rev() {
        let top = rem[k + db];
        if top == 0 {
            continue;
        }
        assert!(top % lead == 0, "inexact polynomial division");
        let f = top / lead;
        q[k] = f;
        for (j, &bj) in b.iter().enumerate() {
            rem[k + j] -= f * bj;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
    trim(&mut q);
    q
}

/// `C(z)^{-1} = z^shift * numer[i][j] / denom` with `denom(0) = ±1`.
#[derive(Clone, Debug)]
struct DeformedInverse {
    shift: i32,
    numer: Vec<Vec<Poly>>,
    denom: Poly,
}

/// Entry `(i,j)` of `z^{D} C(z)`, D = max d.
fn shifted_deformed_entry(cartan: &CartanData, i: usize, j: usize) -> Poly {
    let big_d = cartan.max_d() as usize;
    let mut p = vec![0i128; 2 * big_d + 1];
    if i == j {
        let di = cartan.d[i] as usize;
        p[big_d + di] += 1;
        p[big_d - di] += 1;
    } else {
        let cij = cartan.c[i][j];
        // (z^{c} - z^{-c}) / (z - z^{-1}) = -(z^{-(m-1)} + z^{-(m-3)} + ... + z^{m-1}), m = -c
        let m = (-cij) as i64;
        let mut e = -(m - 1);
        while e < m {
            p[(big_d as i64 + e) as usize] -= 1;
            e += 2;
        }
    }
    trim(&mut p);
    p
}

impl DeformedInverse {
    fn compute(cartan: &CartanData) -> Result<Self> {
        let n = cartan.rank();
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut row: Vec<Poly> = (0..n).map(|j| shifted_deformed_entry(cartan, i, j)).collect();
                row.extend((0..n).map(|j| if i == j { vec![1] } else { Vec::new() }));
                row
            })
            .collect();
        let original: Vec<Vec<Poly>> = a.iter().map(|row| row[..n].to_vec()).collect();

        let mut prev: Poly = vec![1];
        for k in 0..n {
            if a[k][k].is_empty() {
                let swap = (k + 1..n).find(|&r| !a[r][k].is_empty());
                match swap {
                    Some(r) => a.swap(k, r),
                    None => panic!("deformed Cartan matrix is singular"),
                }
            }
            let pivot_row = a[k].clone();
            let pivot = pivot_row[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let num = poly_sub(&poly_mul(&pivot, &row[j]), &poly_mul(&factor, &pivot_row[j]));
                    row[j] = poly_div_exact(&num, &prev);
                }
                row[k] = Vec::new();
            }
            prev = pivot;
        }
        let det = a[n - 1][n - 1].clone();
        let numer: Vec<Vec<Poly>> = a.iter().map(|row| row[n..].to_vec()).collect();

        // Sanity: every diagonal entry is the same polynomial and M * numer = det * I.
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row[i], det, "fraction-free elimination lost its diagonal");
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc: Poly = Vec::new();
                for (k, numer_row) in numer.iter().enumerate() {
                    let prod = poly_mul(&original[i][k], &numer_row[j]);
                    acc = poly_sub(&acc, &prod.iter().map(|x| -x).collect());
                }
                let expect = if i == j { det.clone() } else { Vec::new() };
                assert_eq!(acc, expect, "adjugate check failed");
            }
        }

        let valuation = det.iter().position(|&x| x != 0).expect("zero determinant");
        let denom: Poly = det[valuation..].to_vec();
        if denom[0].abs() != 1 {
            return Err(Error::NonUnitConstant(denom[0]));
        }
        Ok(Self {
            shift: cartan.max_d() - valuation as i32,
            numer,
            denom,
        })
    }
}

// ---------------------------------------------------------------------------

/// Dense, immutable table of `gamma_ij(u)` for `|u| <= span`.
#[derive(Debug)]
pub struct GammaSnapshot {
    n: usize,
    span: i32,
    data: Vec<i32>,
}

impl GammaSnapshot {
    pub fn span(&self) -> i32 {
        self.span
    }

    #[inline]
    pub fn gamma(&self, i: Node, j: Node, u: i32) -> i64 {
        debug_assert!(u.abs() <= self.span, "gamma snapshot too small for u = {u}");
        let width = (2 * self.span + 1) as usize;
        let idx = ((i as usize - 1) * self.n + (j as usize - 1)) * width + (u + self.span) as usize;
        self.data[idx] as i64
    }

    /// `gamma(m1, m2)`; nodes and spectral spread must fit the snapshot.
    pub fn pair(&self, m1: &Monomial, m2: &Monomial) -> i64 {
        let mut acc = 0i64;
        for (v1, e1) in m1.factors() {
            for (v2, e2) in m2.factors() {
                acc += (e1 as i64) * (e2 as i64) * self.gamma(v1.node, v2.node, v1.p - v2.p);
            }
        }
        acc
    }
}

/// Memoized `c'_{ij}(u)` and `gamma_{ij}(u)` for one Cartan datum.
///
/// Reads behave as if the tables were filled up front: lookups that need a
/// longer series extend it under a write lock, and the dense gamma table is
/// republished as a new immutable snapshot.
#[derive(Debug)]
pub struct GammaTable {
    cartan: Arc<CartanData>,
    inverse: DeformedInverse,
    series: RwLock<Vec<Vec<i64>>>,
    snapshot: RwLock<Arc<GammaSnapshot>>,
}

impl GammaTable {
    pub fn new(cartan: CartanData) -> Result<Self> {
        let inverse = DeformedInverse::compute(&cartan)?;
        let n = cartan.rank();
        let table = Self {
            cartan: Arc::new(cartan),
            inverse,
            series: RwLock::new(vec![Vec::new(); n * n]),
            snapshot: RwLock::new(Arc::new(GammaSnapshot { n, span: -1, data: Vec::new() })),
        };
        table.snapshot(16);
        Ok(table)
    }

    pub fn for_type(ty: LieType) -> Result<Self> {
        Self::new(cartan_data(ty)?)
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn cartan_arc(&self) -> Arc<CartanData> {
        self.cartan.clone()
    }

    pub fn lie_type(&self) -> LieType {
        self.cartan.lie_type()
    }

    fn ensure_series(&self, len: usize) {
        {
            let s = self.series.read();
            if s.iter().all(|v| v.len() >= len) {
                return;
            }
        }
        let mut s = self.series.write();
        let n = self.cartan.rank();
        let denom = &self.inverse.denom;
        let d0 = denom[0];
        for i in 0..n {
            for j in 0..n {
                let coeffs = &mut s[i * n + j];
                let numer = &self.inverse.numer[i][j];
                while coeffs.len() < len {
                    let k = coeffs.len();
                    let mut acc: i128 = numer.get(k).copied().unwrap_or(0);
                    for l in 1..denom.len().min(k + 1) {
                        acc -= denom[l] * coeffs[k - l] as i128;
                    }
                    // d0 = ±1
                    let val = acc * d0;
                    coeffs.push(i64::try_from(val).expect("c' coefficient overflow"));
                }
            }
        }
    }

    /// `c'_{ij}(u)`: the `z^u` Taylor coefficient of `(C(z)^{-1})_{ij}`.
    pub fn cprime_coeff(&self, i: Node, j: Node, u: i32) -> i64 {
        let idx = u - self.inverse.shift;
        if idx < 0 {
            return 0;
        }
        let guard = 2 * self.cartan.max_d() as usize;
        self.ensure_series(idx as usize + 1 + guard);
        let n = self.cartan.rank();
        self.series.read()[(i as usize - 1) * n + (j as usize - 1)][idx as usize]
    }

    /// `gamma_{ij}(u) = c'(u-d_i) - c'(u+d_i) - c'(-u-d_i) + c'(-u+d_i)`.
    pub fn gamma_ij(&self, i: Node, j: Node, u: i32) -> i64 {
        let di = self.cartan.d(i);
        self.cprime_coeff(i, j, u - di) - self.cprime_coeff(i, j, u + di) - self.cprime_coeff(i, j, -u - di)
            + self.cprime_coeff(i, j, -u + di)
    }

    /// A dense gamma table covering at least `|u| <= span`.
    pub fn snapshot(&self, span: i32) -> Arc<GammaSnapshot> {
        {
            let cur = self.snapshot.read();
            if cur.span >= span {
                return cur.clone();
            }
        }
        let mut cur = self.snapshot.write();
        if cur.span >= span {
            return cur.clone();
        }
        let new_span = span.max(2 * cur.span).max(16);
        let n = self.cartan.rank();
        let width = (2 * new_span + 1) as usize;
        let mut data = vec![0i32; n * n * width];
        for i in self.cartan.nodes() {
            for j in self.cartan.nodes() {
                for u in -new_span..=new_span {
                    let idx = ((i as usize - 1) * n + (j as usize - 1)) * width + (u + new_span) as usize;
                    data[idx] = i32::try_from(self.gamma_ij(i, j, u)).expect("gamma overflow");
                }
            }
        }
        let snap = Arc::new(GammaSnapshot { n, span: new_span, data });
        *cur = snap.clone();
        snap
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        for (v, _) in m.factors() {
            if !self.cartan.lie_type().contains(v.node) {
                return Err(Error::Mismatch(format!(
                    "monomial {m} uses node {} outside {}",
                    v.node,
                    self.cartan.lie_type()
                )));
            }
        }
        Ok(())
    }

    /// `gamma(m1, m2)`, extended bilinearly from `gamma(Y_{i,p}, Y_{j,s}) = gamma_ij(p - s)`.
    pub fn gamma_pair(&self, m1: &Monomial, m2: &Monomial) -> Result<i64> {
        self.check_monomial(m1)?;
        self.check_monomial(m2)?;
        let span = spectral_span(m1, m2);
        Ok(self.snapshot(span).pair(m1, m2))
    }
}

/// Largest `|p - s|` over factor pairs of the two monomials.
pub fn spectral_span(m1: &Monomial, m2: &Monomial) -> i32 {
    match (m1.p_range(), m2.p_range()) {
        (Some((lo1, hi1)), Some((lo2, hi2))) => (hi1 - lo2).abs().max((hi2 - lo1).abs()),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: usize) -> LieType {
        LieType::new(f, n).unwrap()
    }

    #[test]
    fn cartan_examples() {
        let a2 = cartan_data(ty(Family::A, 2)).unwrap();
        assert_eq!(a2.matrix(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.symmetrizer(), &[1, 1]);
        assert_eq!((a2.lacing(), a2.dual_coxeter()), (1, 3));

        let b2 = cartan_data(ty(Family::B, 2)).unwrap();
        assert_eq!(b2.matrix(), &[vec![2, -2], vec![-1, 2]]);
        assert_eq!(b2.symmetrizer(), &[1, 2]);
        assert_eq!((b2.lacing(), b2.dual_coxeter()), (2, 3));

        let a1 = cartan_data(ty(Family::A, 1)).unwrap();
        assert_eq!(a1.matrix(), &[vec![2]]);
        assert_eq!((a1.lacing(), a1.dual_coxeter()), (1, 2));
    }

    #[test]
    fn rank_bounds() {
        assert!(matches!(LieType::new(Family::D, 3), Err(Error::InvalidRank { family: 'D', rank: 3 })));
        assert!(matches!(LieType::new(Family::B, 1), Err(Error::InvalidRank { .. })));
        assert!(matches!(LieType::new(Family::A, 0), Err(Error::InvalidRank { .. })));
        assert!(LieType::new(Family::C, 2).is_ok());
    }

    #[test]
    fn cartan_invariants_all_small_types() {
        for fam in [Family::A, Family::B, Family::C, Family::D] {
            for n in fam.min_rank()..=7 {
                let cd = cartan_data(ty(fam, n)).unwrap();
                let nodes: Vec<Node> = cd.nodes().collect();
                for &i in &nodes {
                    assert_eq!(cd.c(i, i), 2);
                    for &j in &nodes {
                        if i != j {
                            assert!([0, -1, -2].contains(&cd.c(i, j)));
                        }
                        assert_eq!(cd.d(i) * cd.c(i, j), cd.d(j) * cd.c(j, i));
                    }
                }
                let n = n as i32;
                let h = match fam {
                    Family::A => n + 1,
                    Family::B => 2 * n - 1,
                    Family::C => n + 1,
                    Family::D => 2 * n - 2,
                };
                assert_eq!(cd.dual_coxeter(), h);
            }
        }
    }

    #[test]
    fn a1_cprime_series() {
        let g = GammaTable::for_type(ty(Family::A, 1)).unwrap();
        // 1/(z + z^-1) = z - z^3 + z^5 - ...
        assert_eq!(g.cprime_coeff(1, 1, 0), 0);
        assert_eq!(g.cprime_coeff(1, 1, 1), 1);
        assert_eq!(g.cprime_coeff(1, 1, 2), 0);
        assert_eq!(g.cprime_coeff(1, 1, 3), -1);
        assert_eq!(g.cprime_coeff(1, 1, 5), 1);
        assert_eq!(g.cprime_coeff(1, 1, -1), 0);
        assert_eq!(g.gamma_ij(1, 1, 2), 2);
        assert_eq!(g.gamma_ij(1, 1, -2), -2);
    }

    #[test]
    fn gamma_pair_rejects_foreign_nodes() {
        let g = GammaTable::for_type(ty(Family::A, 1)).unwrap();
        let m = Monomial::y(2, 0);
        assert!(matches!(g.gamma_pair(&m, &Monomial::y(1, 0)), Err(Error::Mismatch(_))));
    }

    #[test]
    fn snapshot_grows_and_agrees() {
        let g = GammaTable::for_type(ty(Family::C, 3)).unwrap();
        let small = g.snapshot(4);
        let big = g.snapshot(100);
        assert!(big.span() >= 100);
        for i in 1..=3 {
            for j in 1..=3 {
                for u in -4..=4 {
                    assert_eq!(small.gamma(i, j, u), big.gamma(i, j, u));
                    assert_eq!(big.gamma(i, j, u), g.gamma_ij(i, j, u));
                }
            }
        }
    }
}
