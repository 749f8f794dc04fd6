use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::resolve::{resolve, tor_with, Resolution, ResolveOptions, Side, SweepOrder};
use super::HomAlgError;
use crate::funrep::{LinRep, Variance};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    cat: [u8; 32],
    opposite: bool,
    functor: [u8; 32],
    length: usize,
    order: Vec<usize>,
}

type Slot = Arc<OnceLock<Result<Arc<Resolution>, String>>>;

/// Resolutions keyed by (category hash, functor fingerprint, length, sweep order).
/// Concurrent lookups of one key wait for a single computation; distinct keys
/// proceed independently.
#[derive(Default)]
pub struct ResolutionCache {
    slots: Mutex<FxHashMap<Key, Slot>>,
}

impl ResolutionCache {
    pub fn new() -> ResolutionCache {
        ResolutionCache::default()
    }

    fn key(f: &LinRep, length: usize, opts: &ResolveOptions) -> Key {
        let f = if f.variance() == Variance::Contravariant { f.on_opposite() } else { f.clone() };
        let order = match &opts.order {
            SweepOrder::Ascending => vec![0],
            SweepOrder::Descending => vec![1],
            SweepOrder::Custom(v) => std::iter::once(2).chain(v.iter().copied()).collect(),
        };
        Key { cat: f.cat().content_hash(), opposite: f.cat().is_opposite(), functor: f.fingerprint(), length, order }
    }

    pub fn resolve(&self, f: &LinRep, length: usize, opts: &ResolveOptions) -> Result<Arc<Resolution>, HomAlgError> {
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock");
            slots.entry(Self::key(f, length, opts)).or_default().clone()
        };
        match slot.get_or_init(|| resolve(f, length, opts).map(Arc::new).map_err(|e| e.to_string())) {
            Ok(r) => Ok(r.clone()),
            Err(e) => Err(HomAlgError::Invalid(format!("cached resolution failed: {e}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("cache lock").len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Tor dimensions at a truncation cap, with the convergence flag set when the
/// previous cap gave the same dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorRecord {
    pub computation: String,
    pub cap: usize,
    pub degrees: Vec<usize>,
    pub dims: Vec<usize>,
    pub stable: bool,
}

/// Tor dims at each cap in `caps` (increasing); `build(cap)` yields the pair
/// `(G, F)` on the truncated category. One record per cap.
pub fn tor_across_caps(
    computation: &str,
    caps: &[usize],
    max_degree: usize,
    side: Side,
    opts: &ResolveOptions,
    cache: &ResolutionCache,
    mut build: impl FnMut(usize) -> Result<(LinRep, LinRep), HomAlgError>,
) -> Result<Vec<TorRecord>, HomAlgError> {
    let mut out: Vec<TorRecord> = Vec::with_capacity(caps.len());
    for &cap in caps {
        let (g, f) = build(cap)?;
        let (resolved, other) = match side {
            Side::Right => (f, g),
            Side::Left => (g.on_opposite(), f.on_opposite()),
        };
        let res = cache.resolve(&resolved, max_degree + 1, opts)?;
        let dims = tor_with(&other, &res, max_degree)?.dims;
        let stable = out.last().is_some_and(|p| p.dims == dims);
        out.push(TorRecord { computation: computation.to_string(), cap, degrees: (0..=max_degree).collect(), dims, stable });
    }
    Ok(out)
}
