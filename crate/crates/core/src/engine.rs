//! Shared per-type state: the gamma table and memo caches for the objects the
//! recursions reuse. Every cached object is translation-equivariant in the
//! spectral index, so entries are keyed by the monomial shifted to start at 0.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{CartanData, GammaTable, LieType, Node};
use crate::error::Result;
use crate::monomial::Monomial;
use crate::torus::{PointedElement, TorusElement};

pub const DEFAULT_CAP: usize = 200_000;

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

#[derive(Debug)]
pub struct Engine {
    gamma: GammaTable,
    cap: usize,
    fit: Memo<(Node, Monomial), TorusElement>,
    ft: Memo<Monomial, PointedElement>,
    et: Memo<Monomial, PointedElement>,
}

/// Shift that moves the smallest spectral index of `m` to 0.
pub(crate) fn normalizing_shift(m: &Monomial) -> i32 {
    m.p_range().map(|(lo, _)| -lo).unwrap_or(0)
}

impl Engine {
    pub fn new(ty: LieType) -> Result<Self> {
        Ok(Self::from_gamma(GammaTable::for_type(ty)?))
    }

    pub fn from_gamma(gamma: GammaTable) -> Self {
        Self {
            gamma,
            cap: DEFAULT_CAP,
            fit: RwLock::default(),
            ft: RwLock::default(),
            et: RwLock::default(),
        }
    }

    /// Overrides the closure bound used by the character recursions.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn gamma(&self) -> &GammaTable {
        &self.gamma
    }

    pub fn cartan(&self) -> &CartanData {
        self.gamma.cartan()
    }

    pub fn lie_type(&self) -> LieType {
        self.gamma.lie_type()
    }

    pub(crate) fn fit_cached<F>(&self, i: Node, normalized: &Monomial, compute: F) -> Result<Arc<TorusElement>>
    where
        F: FnOnce() -> Result<TorusElement>,
    {
        let key = (i, normalized.clone());
        if let Some(v) = self.fit.read().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(compute()?);
        Ok(self.fit.write().entry(key).or_insert(v).clone())
    }

    pub(crate) fn ft_cached<F>(&self, normalized: &Monomial, compute: F) -> Result<Arc<PointedElement>>
    where
        F: FnOnce() -> Result<PointedElement>,
    {
        if let Some(v) = self.ft.read().get(normalized) {
            return Ok(v.clone());
        }
        let v = Arc::new(compute()?);
        Ok(self.ft.write().entry(normalized.clone()).or_insert(v).clone())
    }

    pub(crate) fn et_cached<F>(&self, normalized: &Monomial, compute: F) -> Result<Arc<PointedElement>>
    where
        F: FnOnce() -> Result<PointedElement>,
    {
        if let Some(v) = self.et.read().get(normalized) {
            return Ok(v.clone());
        }
        let v = Arc::new(compute()?);
        Ok(self.et.write().entry(normalized.clone()).or_insert(v).clone())
    }
}
