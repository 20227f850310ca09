//! Memoization caches.
//!
//! [`MemoCache`] is a two-level table: a 64-bit key hash selects a bucket, and
//! the bucket is a list of `(key, value)` pairs compared by equality. The
//! memoized function is fixed at construction, and every stored pair
//! satisfies `value == func(key)`; [`MemoCache::audit`] re-checks that.
//!
//! A cache is single-owner: it is threaded by `&mut` through a lexing
//! session and never shared between sessions.

use alloc::vec::Vec;
use core::hash::{BuildHasher, Hash};

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;

use crate::regex::{Regex, Symbol};
use crate::zipper::{self, Context, Derive, Zipper};

/// Hit/miss counters and the number of stored pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

pub struct MemoCache<K, V, F = fn(&K) -> V, S = FxBuildHasher> {
    table: HashMap<u64, Vec<(K, V)>, FxBuildHasher>,
    func: F,
    key_hasher: S,
    stats: CacheStats,
}

impl<K, V, F> MemoCache<K, V, F>
where
    K: Eq + Hash,
    V: Clone,
    F: Fn(&K) -> V,
{
    pub fn new(func: F) -> Self {
        Self::with_hasher(func, FxBuildHasher)
    }
}

impl<K, V, F, S> MemoCache<K, V, F, S>
where
    K: Eq + Hash,
    V: Clone,
    F: Fn(&K) -> V,
    S: BuildHasher,
{
    pub fn with_hasher(func: F, key_hasher: S) -> Self {
        MemoCache {
            table: HashMap::with_hasher(FxBuildHasher),
            func,
            key_hasher,
            stats: CacheStats::default(),
        }
    }

    /// `func(key)`, computed at most once per distinct key.
    pub fn get_or_compute(&mut self, key: K) -> V {
        let h = self.key_hasher.hash_one(&key);
        if let Some(v) = self.lookup(h, &key) {
            self.stats.hits += 1;
            return v;
        }
        self.stats.misses += 1;
        let v = (self.func)(&key);
        self.store(h, key, v.clone());
        v
    }

    /// Like [`get_or_compute`](Self::get_or_compute), but computes a miss
    /// with `compute` instead of the stored function.
    ///
    /// `compute` must agree with the stored function on `key`; it exists so a
    /// memoized implementation can consult other caches while computing.
    pub(crate) fn get_or_insert_with(&mut self, key: K, compute: impl FnOnce(&K) -> V) -> V {
        let h = self.key_hasher.hash_one(&key);
        if let Some(v) = self.lookup(h, &key) {
            self.stats.hits += 1;
            return v;
        }
        self.stats.misses += 1;
        let v = compute(&key);
        self.store(h, key, v.clone());
        v
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        let h = self.key_hasher.hash_one(key);
        self.table
            .get(&h)?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    fn lookup(&self, h: u64, key: &K) -> Option<V> {
        self.table
            .get(&h)?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    }

    fn store(&mut self, h: u64, key: K, value: V) {
        self.table.entry(h).or_default().push((key, value));
        self.stats.entries += 1;
    }

    pub fn stats(&self) -> CacheStats {
        self.stats
    }

    pub fn len(&self) -> usize {
        self.stats.entries
    }

    pub fn is_empty(&self) -> bool {
        self.stats.entries == 0
    }

    /// Number of occupied 64-bit hash slots.
    pub fn buckets(&self) -> usize {
        self.table.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        self.table.values().flatten().map(|(k, v)| (k, v))
    }

    /// Whether every stored pair satisfies `value == func(key)` and sits in
    /// the bucket of its own hash, with no key stored twice.
    pub fn audit(&self) -> bool
    where
        V: PartialEq,
    {
        self.table.iter().all(|(&h, bucket)| {
            bucket.iter().enumerate().all(|(i, (k, v))| {
                self.key_hasher.hash_one(k) == h
                    && bucket[..i].iter().all(|(other, _)| other != k)
                    && (self.func)(k) == *v
            })
        })
    }
}

/// Key of the memoized upward step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivUpKey<C: Symbol> {
    pub ctx: Context<C>,
    pub symbol: C,
}

/// Key of the memoized downward step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivDownKey<C: Symbol> {
    pub expr: Regex<C>,
    pub ctx: Context<C>,
    pub symbol: C,
}

impl<C: Symbol> Hash for DerivUpKey<C> {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(zipper::key_hash_up(&self.ctx, &self.symbol));
    }
}

impl<C: Symbol> Hash for DerivDownKey<C> {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(zipper::key_hash_down(&self.expr, &self.ctx, &self.symbol));
    }
}

fn up_fn<C: Symbol>(k: &DerivUpKey<C>) -> Zipper<C> {
    zipper::derivation_step_zipper_up(&k.ctx, &k.symbol)
}

fn down_fn<C: Symbol>(k: &DerivDownKey<C>) -> Zipper<C> {
    zipper::derivation_step_zipper_down(&k.expr, &k.ctx, &k.symbol)
}

pub type UpCache<C> = MemoCache<DerivUpKey<C>, Zipper<C>>;
pub type DownCache<C> = MemoCache<DerivDownKey<C>, Zipper<C>>;

/// The up/down cache pair of one lexing session.
///
/// Shared by matching and prefix matching, since both only derive.
pub struct DerivationCache<C: Symbol> {
    pub up: UpCache<C>,
    pub down: DownCache<C>,
}

impl<C: Symbol> Default for DerivationCache<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Symbol> DerivationCache<C> {
    pub fn new() -> Self {
        DerivationCache {
            up: MemoCache::new(up_fn::<C>),
            down: MemoCache::new(down_fn::<C>),
        }
    }

    pub fn step_down(&mut self, expr: &Regex<C>, ctx: &Context<C>, a: &C) -> Zipper<C> {
        self.down.get_or_compute(DerivDownKey {
            expr: expr.clone(),
            ctx: ctx.clone(),
            symbol: a.clone(),
        })
    }

    pub fn step_up(&mut self, ctx: &Context<C>, a: &C) -> Zipper<C> {
        let down = &mut self.down;
        self.up.get_or_insert_with(
            DerivUpKey {
                ctx: ctx.clone(),
                symbol: a.clone(),
            },
            |k| {
                let mut out = Zipper::empty();
                let mut cur = &k.ctx;
                while let Some((head, rest)) = cur.split_first() {
                    let part = down.get_or_compute(DerivDownKey {
                        expr: head.clone(),
                        ctx: rest.clone(),
                        symbol: k.symbol.clone(),
                    });
                    out.extend_from(&part);
                    if !head.nullable() {
                        break;
                    }
                    cur = rest;
                }
                out
            },
        )
    }

    /// Memoized [`zipper::derivation_step_zipper`].
    pub fn step(&mut self, z: &Zipper<C>, a: &C) -> Zipper<C> {
        let mut out = Zipper::empty();
        for ctx in z.as_list() {
            let part = self.step_up(ctx, a);
            out.extend_from(&part);
        }
        out
    }

    pub fn audit(&self) -> bool {
        self.up.audit() && self.down.audit()
    }

    pub fn entries(&self) -> usize {
        self.up.len() + self.down.len()
    }

    /// Combined counters of both caches.
    pub fn stats(&self) -> CacheStats {
        let (u, d) = (self.up.stats(), self.down.stats());
        CacheStats {
            hits: u.hits + d.hits,
            misses: u.misses + d.misses,
            entries: u.entries + d.entries,
        }
    }
}

impl<C: Symbol> Derive<C> for DerivationCache<C> {
    fn derive(&mut self, z: &Zipper<C>, a: &C) -> Zipper<C> {
        self.step(z, a)
    }
}

/// Memoized [`zipper::derivation_step_zipper`] over an explicit cache pair.
pub fn memoized_derivation_step_zipper<C: Symbol>(
    cache: &mut DerivationCache<C>,
    z: &Zipper<C>,
    a: &C,
) -> Zipper<C> {
    cache.step(z, a)
}

/// Cache for the naive derivative step, keyed by `(regex, symbol)`.
pub type NaiveDerivativeCache<C> = MemoCache<(Regex<C>, C), Regex<C>>;

fn naive_fn<C: Symbol>(k: &(Regex<C>, C)) -> Regex<C> {
    k.0.derivative_step(&k.1)
}

pub fn naive_derivative_cache<C: Symbol>() -> NaiveDerivativeCache<C> {
    MemoCache::new(naive_fn::<C>)
}

/// [`Regex::match_r`] with memoized derivative steps.
pub fn match_r_memo<C: Symbol>(cache: &mut NaiveDerivativeCache<C>, r: &Regex<C>, s: &[C]) -> bool {
    let mut cur = r.clone();
    for a in s {
        cur = cache.get_or_compute((cur, a.clone()));
    }
    cur.nullable()
}
