//! Laurent polynomials in `t^{1/2}` with integer coefficients.
//!
//! Exponents are stored in half-units: the key `k` stands for `t^{k/2}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An element of `Z[t^{1/2}, t^{-1/2}]`, kept sorted by exponent with no zero
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfLaurent {
    terms: Vec<(i32, i64)>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(0, c)
    }

    /// `c * t^{half/2}`.
    pub fn term(half: i32, c: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(half, c)] }
        }
    }

    /// `t^{half/2}`.
    pub fn t_half_power(half: i32) -> Self {
        Self::term(half, 1)
    }

    /// Builds from arbitrary `(half_exponent, coeff)` pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (i32, i64)>>(pairs: I) -> Self {
        let mut terms: Vec<(i32, i64)> = pairs.into_iter().collect();
        terms.sort_unstable_by_key(|&(k, _)| k);
        let mut out: Vec<(i32, i64)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Self { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.as_slice() == [(0, 1)]
    }

    /// True when the polynomial has no `t` dependence.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|&(k, _)| k == 0)
    }

    /// Constant term (coefficient of `t^0`).
    pub fn constant_term(&self) -> i64 {
        self.coeff(0)
    }

    pub fn coeff(&self, half: i32) -> i64 {
        self.terms
            .binary_search_by_key(&half, |&(k, _)| k)
            .map(|idx| self.terms[idx].1)
            .unwrap_or(0)
    }

    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|&(k, _)| k)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.last().map(|&(k, _)| k)
    }

    /// Multiplies by `t^{half/2}`.
    pub fn shifted(&self, half: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|&(k, c)| (k + half, c)).collect(),
        }
    }

    pub fn scaled(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|&(k, a)| (k, a * c)).collect(),
        }
    }

    /// `t^{1/2} -> t^{-1/2}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|&(k, c)| (-k, c)).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|&(k, c)| self.coeff(-k) == c)
    }

    /// Value at `t^{1/2} = 1`.
    pub fn ev_t1(&self) -> i64 {
        self.terms.iter().map(|&(_, c)| c).sum()
    }

    /// Keeps only the terms with strictly negative exponent.
    pub fn negative_part(&self) -> Self {
        Self {
            terms: self.terms.iter().copied().filter(|&(k, _)| k < 0).collect(),
        }
    }

    /// True for elements of `t^{-1} Z[t^{-1}]` (integer powers only).
    pub fn in_t_inverse_z_t_inverse(&self) -> bool {
        self.terms.iter().all(|&(k, _)| k < 0 && k % 2 == 0)
    }

    /// True when all exponents are integer powers of `t`.
    pub fn has_integer_powers(&self) -> bool {
        self.terms.iter().all(|&(k, _)| k % 2 == 0)
    }

    fn merge(&self, other: &Self, sign: i64) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ka, ca)), Some(&&(kb, cb))) => {
                    if ka < kb {
                        out.push((ka, ca));
                        a.next();
                    } else if kb < ka {
                        out.push((kb, sign * cb));
                        b.next();
                    } else {
                        let c = ca + sign * cb;
                        if c != 0 {
                            out.push((ka, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&t), None) => {
                    out.push(t);
                    a.next();
                }
                (None, Some(&&(kb, cb))) => {
                    out.push((kb, sign * cb));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { terms: out }
    }

    /// `self += c * t^{half/2} * other`, the inner step of torus products.
    pub fn add_scaled_shifted(&mut self, other: &Self, half: i32) {
        if other.terms.len() == 1 && self.terms.len() <= 8 {
            let (k, c) = other.terms[0];
            let k = k + half;
            match self.terms.binary_search_by_key(&k, |&(e, _)| e) {
                Ok(idx) => {
                    self.terms[idx].1 += c;
                    if self.terms[idx].1 == 0 {
                        self.terms.remove(idx);
                    }
                }
                Err(idx) => self.terms.insert(idx, (k, c)),
            }
            return;
        }
        *self = self.merge(&other.shifted(half), 1);
    }
}

impl From<i64> for HalfLaurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        self.merge(rhs, 1)
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        self.merge(rhs, -1)
    }
}

impl Add for HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: HalfLaurent) -> HalfLaurent {
        &self + &rhs
    }
}

impl Sub for HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: HalfLaurent) -> HalfLaurent {
        &self - &rhs
    }
}

impl AddAssign<&HalfLaurent> for HalfLaurent {
    fn add_assign(&mut self, rhs: &HalfLaurent) {
        *self = self.merge(rhs, 1);
    }
}

impl SubAssign<&HalfLaurent> for HalfLaurent {
    fn sub_assign(&mut self, rhs: &HalfLaurent) {
        *self = self.merge(rhs, -1);
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        self.scaled(-1)
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        if self.is_zero() || rhs.is_zero() {
            return HalfLaurent::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        HalfLaurent::from_pairs(
            self.terms
                .iter()
                .flat_map(|&(ka, ca)| rhs.terms.iter().map(move |&(kb, cb)| (ka + kb, ca * cb))),
        )
    }
}

impl Mul for HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: HalfLaurent) -> HalfLaurent {
        &self * &rhs
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, half: i32) -> fmt::Result {
    match half {
        0 => Ok(()),
        2 => write!(f, "t"),
        h if h % 2 == 0 => write!(f, "t^{}", h / 2),
        h => write!(f, "t^({}/2)", h),
    }
}

/// Renders as `t^-1 + 2 + t^(1/2)`; zero renders as `0`.
impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, &(k, c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}*")?;
                }
                fmt_power(f, k)?;
            }
        }
        Ok(())
    }
}
