//! Regular expressions over a generic alphabet and Brzozowski derivatives.
//!
//! A [`Regex`] is an immutable, reference-counted tree. Every node caches its
//! structural hash together with its nullability and emptiness flags, so
//! hashing a regex (for memoization) and asking those two questions are O(1).
//! Derivatives are never simplified: the naive matcher is kept as the
//! baseline the zipper engine is measured against.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{BuildHasher, Hash, Hasher};

use hashbrown::HashSet;
use rustc_hash::{FxBuildHasher, FxHasher};

/// An alphabet element.
///
/// Blanket-implemented for every type with decidable equality and a stable
/// hash.
pub trait Symbol: Clone + Eq + Hash + fmt::Debug {}

impl<T: Clone + Eq + Hash + fmt::Debug> Symbol for T {}

/// The six regex constructors.
#[derive(Clone, PartialEq, Eq)]
pub enum RegexKind<C> {
    /// Matches only the empty string.
    EmptyExpr,
    /// Matches nothing.
    EmptyLang,
    /// Matches exactly one symbol.
    Elem(C),
    Union(Regex<C>, Regex<C>),
    Concat(Regex<C>, Regex<C>),
    Star(Regex<C>),
}

struct Node<C> {
    kind: RegexKind<C>,
    hash: u64,
    nullable: bool,
    empty: bool,
}

/// A regular expression.
///
/// Cloning is O(1). Equality is structural, with pointer and hash shortcuts.
pub struct Regex<C>(Arc<Node<C>>);

impl<C> Clone for Regex<C> {
    fn clone(&self) -> Self {
        Regex(Arc::clone(&self.0))
    }
}

pub(crate) fn mix(h: u64, v: u64) -> u64 {
    let mut hasher = FxHasher::default();
    hasher.write_u64(h);
    hasher.write_u64(v);
    hasher.finish()
}

pub(crate) fn hash_symbol<C: Hash>(c: &C) -> u64 {
    FxBuildHasher.hash_one(c)
}

impl<C: Symbol> Regex<C> {
    fn from_kind(kind: RegexKind<C>) -> Self {
        let (hash, nullable, empty) = match &kind {
            RegexKind::EmptyExpr => (0x11, true, false),
            RegexKind::EmptyLang => (0x22, false, true),
            RegexKind::Elem(c) => (mix(0x33, hash_symbol(c)), false, false),
            RegexKind::Union(l, r) => (
                mix(mix(0x44, l.0.hash), r.0.hash),
                l.0.nullable || r.0.nullable,
                l.0.empty && r.0.empty,
            ),
            RegexKind::Concat(l, r) => (
                mix(mix(0x55, l.0.hash), r.0.hash),
                l.0.nullable && r.0.nullable,
                l.0.empty || r.0.empty,
            ),
            RegexKind::Star(inner) => (mix(0x66, inner.0.hash), true, false),
        };
        Regex(Arc::new(Node {
            kind,
            hash,
            nullable,
            empty,
        }))
    }

    /// `ε`, the language `{λ}`.
    pub fn empty_expr() -> Self {
        Self::from_kind(RegexKind::EmptyExpr)
    }

    /// `∅`, the empty language.
    pub fn empty_lang() -> Self {
        Self::from_kind(RegexKind::EmptyLang)
    }

    pub fn elem(c: C) -> Self {
        Self::from_kind(RegexKind::Elem(c))
    }

    pub fn union(left: Self, right: Self) -> Self {
        Self::from_kind(RegexKind::Union(left, right))
    }

    pub fn concat(left: Self, right: Self) -> Self {
        Self::from_kind(RegexKind::Concat(left, right))
    }

    pub fn star(inner: Self) -> Self {
        Self::from_kind(RegexKind::Star(inner))
    }

    /// `r | ε`.
    pub fn opt(r: Self) -> Self {
        Self::union(r, Self::empty_expr())
    }

    /// `r · r*`.
    pub fn plus(r: Self) -> Self {
        Self::concat(r.clone(), Self::star(r))
    }

    /// Right-folded union of single symbols; `∅` when `symbols` is empty.
    pub fn any_of<I: IntoIterator<Item = C>>(symbols: I) -> Self {
        Self::union_all(symbols.into_iter().map(Self::elem))
    }

    /// Right-folded union; `∅` when empty.
    pub fn union_all<I: IntoIterator<Item = Self>>(parts: I) -> Self {
        let parts: Vec<Self> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, r| Self::union(r, acc))
            .unwrap_or_else(Self::empty_lang)
    }

    /// Right-folded concatenation; `ε` when empty.
    pub fn concat_all<I: IntoIterator<Item = Self>>(parts: I) -> Self {
        let parts: Vec<Self> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, r| Self::concat(r, acc))
            .unwrap_or_else(Self::empty_expr)
    }

    /// The word made of `symbols`, in order.
    pub fn word<I: IntoIterator<Item = C>>(symbols: I) -> Self {
        Self::concat_all(symbols.into_iter().map(Self::elem))
    }

    pub fn kind(&self) -> &RegexKind<C> {
        &self.0.kind
    }

    /// Whether `λ ∈ L(self)`.
    pub fn nullable(&self) -> bool {
        self.0.nullable
    }

    /// Whether `L(self) = ∅`.
    pub fn is_empty_language(&self) -> bool {
        self.0.empty
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = alloc::vec![self];
        while let Some(r) = stack.pop() {
            count += 1;
            match r.kind() {
                RegexKind::Union(a, b) | RegexKind::Concat(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                RegexKind::Star(a) => stack.push(a),
                _ => {}
            }
        }
        count
    }

    /// The symbols appearing in `Elem` leaves.
    pub fn used_symbols(&self) -> HashSet<C, FxBuildHasher> {
        let mut out = HashSet::with_hasher(FxBuildHasher);
        let mut stack = alloc::vec![self];
        while let Some(r) = stack.pop() {
            match r.kind() {
                RegexKind::Elem(c) => {
                    out.insert(c.clone());
                }
                RegexKind::Union(a, b) | RegexKind::Concat(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                RegexKind::Star(a) => stack.push(a),
                RegexKind::EmptyExpr | RegexKind::EmptyLang => {}
            }
        }
        out
    }

    /// Number of `Elem` leaves.
    pub fn symbol_leaves(&self) -> usize {
        let mut count = 0;
        let mut stack = alloc::vec![self];
        while let Some(r) = stack.pop() {
            match r.kind() {
                RegexKind::Elem(_) => count += 1,
                RegexKind::Union(a, b) | RegexKind::Concat(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                RegexKind::Star(a) => stack.push(a),
                RegexKind::EmptyExpr | RegexKind::EmptyLang => {}
            }
        }
        count
    }

    /// The Brzozowski derivative `∂_a self`, unsimplified.
    pub fn derivative_step(&self, a: &C) -> Self {
        match self.kind() {
            RegexKind::EmptyExpr | RegexKind::EmptyLang => Self::empty_lang(),
            RegexKind::Elem(b) => {
                if a == b {
                    Self::empty_expr()
                } else {
                    Self::empty_lang()
                }
            }
            RegexKind::Union(l, r) => Self::union(l.derivative_step(a), r.derivative_step(a)),
            RegexKind::Concat(l, r) => {
                let first = Self::concat(l.derivative_step(a), r.clone());
                let second = if l.nullable() {
                    r.derivative_step(a)
                } else {
                    Self::empty_lang()
                };
                Self::union(first, second)
            }
            RegexKind::Star(inner) => Self::concat(inner.derivative_step(a), self.clone()),
        }
    }

    /// Whether `s ∈ L(self)`, by deriving over `s` and testing nullability.
    pub fn match_r(&self, s: &[C]) -> bool {
        let mut cur = self.clone();
        for a in s {
            cur = cur.derivative_step(a);
        }
        cur.nullable()
    }

    /// Longest non-empty prefix of `s` in `L(self)`, with the rest of `s`.
    ///
    /// Returns `(λ, s)` when no non-empty prefix matches. Stops as soon as the
    /// running derivative denotes the empty language.
    pub fn find_longest_match<'a>(&self, s: &'a [C]) -> (&'a [C], &'a [C]) {
        s.split_at(self.longest_match_len(s))
    }

    pub(crate) fn longest_match_len(&self, s: &[C]) -> usize {
        let mut cur = self.clone();
        let mut best = 0;
        for (i, a) in s.iter().enumerate() {
            if cur.is_empty_language() {
                break;
            }
            cur = cur.derivative_step(a);
            if cur.nullable() {
                best = i + 1;
            }
        }
        best
    }

    /// Whether some extension of `s` is in `L(self)`.
    pub fn prefix_match(&self, s: &[C]) -> bool {
        let mut cur = self.clone();
        for a in s {
            if cur.is_empty_language() {
                return false;
            }
            cur = cur.derivative_step(a);
        }
        !cur.is_empty_language()
    }
}

impl Regex<char> {
    /// `[lo-hi]`, the union of every char in the inclusive range.
    pub fn char_range(lo: char, hi: char) -> Self {
        Self::any_of(lo..=hi)
    }

    /// The literal string `s`.
    pub fn literal(s: &str) -> Self {
        Self::word(s.chars())
    }
}

impl<C: PartialEq> PartialEq for Regex<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl<C: Eq> Eq for Regex<C> {}

impl<C> Hash for Regex<C> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl<C: fmt::Debug> fmt::Debug for Regex<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            RegexKind::EmptyExpr => f.write_str("ε"),
            RegexKind::EmptyLang => f.write_str("∅"),
            RegexKind::Elem(c) => write!(f, "{c:?}"),
            RegexKind::Union(l, r) => write!(f, "({l:?} | {r:?})"),
            RegexKind::Concat(l, r) => write!(f, "({l:?} · {r:?})"),
            RegexKind::Star(r) => write!(f, "{r:?}*"),
        }
    }
}

impl<C: fmt::Debug> fmt::Debug for RegexKind<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexKind::EmptyExpr => f.write_str("EmptyExpr"),
            RegexKind::EmptyLang => f.write_str("EmptyLang"),
            RegexKind::Elem(c) => f.debug_tuple("Elem").field(c).finish(),
            RegexKind::Union(l, r) => f.debug_tuple("Union").field(l).field(r).finish(),
            RegexKind::Concat(l, r) => f.debug_tuple("Concat").field(l).field(r).finish(),
            RegexKind::Star(r) => f.debug_tuple("Star").field(r).finish(),
        }
    }
}
