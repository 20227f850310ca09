//! Zipper representation of regexes.
//!
//! A [`Context`] is a pending concatenation `r1 · (r2 · (… · rn))` stored as a
//! persistent cons list, so prepending a continuation during a downward step
//! and dropping the head during an upward step are O(1). A [`Zipper`] is a
//! deduplicated set of contexts denoting their union.
//!
//! Derivation is split in two phases. The upward phase walks a context from
//! its head while the heads are nullable; the downward phase descends into one
//! regex, pushing the parts that remain to be matched onto the context, and
//! returns the contexts left when a matching symbol leaf is reached.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::regex::{hash_symbol, mix, Regex, RegexKind, Symbol};

struct Cell<C> {
    head: Regex<C>,
    tail: Context<C>,
    hash: u64,
    len: usize,
}

/// A sequence of regexes denoting their right-folded concatenation.
///
/// The empty context denotes `ε`.
pub struct Context<C>(Option<Arc<Cell<C>>>);

const EMPTY_CONTEXT_HASH: u64 = 0x9e37_79b9_7f4a_7c15;

impl<C> Clone for Context<C> {
    fn clone(&self) -> Self {
        Context(self.0.clone())
    }
}

impl<C: Symbol> Context<C> {
    pub fn empty() -> Self {
        Context(None)
    }

    /// Builds `Context(exprs[0], exprs[1], …)`.
    pub fn from_exprs<I>(exprs: I) -> Self
    where
        I: IntoIterator<Item = Regex<C>>,
        I::IntoIter: DoubleEndedIterator,
    {
        exprs
            .into_iter()
            .rev()
            .fold(Self::empty(), |ctx, r| ctx.prepend(r))
    }

    pub fn prepend(&self, head: Regex<C>) -> Self {
        let hash = mix(self.structural_hash(), head.structural_hash());
        Context(Some(Arc::new(Cell {
            head,
            tail: self.clone(),
            hash,
            len: self.len() + 1,
        })))
    }

    pub fn split_first(&self) -> Option<(&Regex<C>, &Context<C>)> {
        self.0.as_deref().map(|cell| (&cell.head, &cell.tail))
    }

    pub fn head(&self) -> Option<&Regex<C>> {
        self.split_first().map(|(h, _)| h)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |c| c.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.as_ref().map_or(EMPTY_CONTEXT_HASH, |c| c.hash)
    }

    pub fn iter(&self) -> ContextIter<'_, C> {
        ContextIter { cur: self }
    }

    /// Whether every expression is nullable (true for the empty context).
    pub fn nullable(&self) -> bool {
        self.iter().all(Regex::nullable)
    }

    /// Whether no expression denotes the empty language.
    pub fn has_non_empty_language(&self) -> bool {
        self.iter().all(|r| !r.is_empty_language())
    }

    /// The regex this context denotes: right-folded `Concat`, `ε` if empty.
    pub fn unfocus(&self) -> Regex<C> {
        let exprs: Vec<Regex<C>> = self.iter().cloned().collect();
        let mut iter = exprs.into_iter().rev();
        match iter.next() {
            None => Regex::empty_expr(),
            Some(last) => iter.fold(last, |acc, r| Regex::concat(r, acc)),
        }
    }
}

pub struct ContextIter<'a, C> {
    cur: &'a Context<C>,
}

impl<'a, C> Iterator for ContextIter<'a, C> {
    type Item = &'a Regex<C>;

    fn next(&mut self) -> Option<Self::Item> {
        let cell = self.cur.0.as_deref()?;
        self.cur = &cell.tail;
        Some(&cell.head)
    }
}

impl<C: Symbol> PartialEq for Context<C> {
    fn eq(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self, other);
        loop {
            match (&a.0, &b.0) {
                (None, None) => return true,
                (Some(x), Some(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    if x.hash != y.hash || x.len != y.len || x.head != y.head {
                        return false;
                    }
                    a = &x.tail;
                    b = &y.tail;
                }
                _ => return false,
            }
        }
    }
}

impl<C: Symbol> Eq for Context<C> {}

impl<C: Symbol> Hash for Context<C> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.structural_hash());
    }
}

impl<C: Symbol> fmt::Debug for Context<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Context")?;
        f.debug_list().entries(self.iter()).finish()
    }
}

/// A finite set of contexts denoting their union; the empty set denotes `∅`.
///
/// Contexts keep their insertion order, which makes [`Zipper::unfocus`] a
/// function. Equality is set equality.
#[derive(Clone)]
pub struct Zipper<C> {
    contexts: Vec<Context<C>>,
}

impl<C: Symbol> Zipper<C> {
    pub fn empty() -> Self {
        Zipper {
            contexts: Vec::new(),
        }
    }

    /// The singleton zipper `{Context(r)}`.
    pub fn focus(r: Regex<C>) -> Self {
        Zipper {
            contexts: alloc::vec![Context::empty().prepend(r)],
        }
    }

    pub fn from_contexts<I: IntoIterator<Item = Context<C>>>(contexts: I) -> Self {
        let mut z = Self::empty();
        for c in contexts {
            z.insert(c);
        }
        z
    }

    /// Adds `ctx` unless a structurally equal context is already present.
    pub fn insert(&mut self, ctx: Context<C>) -> bool {
        let h = ctx.structural_hash();
        if self
            .contexts
            .iter()
            .any(|c| c.structural_hash() == h && *c == ctx)
        {
            return false;
        }
        self.contexts.push(ctx);
        true
    }

    pub fn extend_from(&mut self, other: &Zipper<C>) {
        if self.contexts.is_empty() {
            self.contexts.extend(other.contexts.iter().cloned());
            return;
        }
        for c in &other.contexts {
            self.insert(c.clone());
        }
    }

    pub fn as_list(&self) -> &[Context<C>] {
        &self.contexts
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn nullable(&self) -> bool {
        self.contexts.iter().any(Context::nullable)
    }

    pub fn has_non_empty_language(&self) -> bool {
        self.contexts.iter().any(Context::has_non_empty_language)
    }

    /// Regex denoted by the zipper, folding its contexts in insertion order.
    pub fn unfocus(&self) -> Regex<C> {
        unfocus(&self.contexts)
    }
}

impl<C: Symbol> PartialEq for Zipper<C> {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.contexts.iter().all(|c| other.contexts.contains(c))
    }
}

impl<C: Symbol> Eq for Zipper<C> {}

impl<C: Symbol> fmt::Debug for Zipper<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.contexts.iter()).finish()
    }
}

/// Rebuilds a regex from a list of contexts: each context folds to nested
/// `Concat` (`ε` when empty) and the list folds to nested `Union` (`∅` when
/// empty).
pub fn unfocus<C: Symbol>(contexts: &[Context<C>]) -> Regex<C> {
    Regex::union_all(contexts.iter().map(Context::unfocus))
}

pub fn focus<C: Symbol>(r: Regex<C>) -> Zipper<C> {
    Zipper::focus(r)
}

fn down_into<C: Symbol>(expr: &Regex<C>, ctx: &Context<C>, a: &C, out: &mut Zipper<C>) {
    match expr.kind() {
        RegexKind::EmptyExpr | RegexKind::EmptyLang => {}
        RegexKind::Elem(b) => {
            if a == b {
                out.insert(ctx.clone());
            }
        }
        RegexKind::Union(l, r) => {
            down_into(l, ctx, a, out);
            down_into(r, ctx, a, out);
        }
        RegexKind::Concat(l, r) => {
            down_into(l, &ctx.prepend(r.clone()), a, out);
            if l.nullable() {
                down_into(r, ctx, a, out);
            }
        }
        RegexKind::Star(inner) => down_into(inner, &ctx.prepend(expr.clone()), a, out),
    }
}

/// Contexts reached by consuming `a` from `expr` with continuation `ctx`.
pub fn derivation_step_zipper_down<C: Symbol>(expr: &Regex<C>, ctx: &Context<C>, a: &C) -> Zipper<C> {
    let mut out = Zipper::empty();
    down_into(expr, ctx, a, &mut out);
    out
}

/// Derives one context: descends into its head, and keeps climbing past the
/// head while it is nullable.
pub fn derivation_step_zipper_up<C: Symbol>(ctx: &Context<C>, a: &C) -> Zipper<C> {
    let mut out = Zipper::empty();
    up_into(ctx, a, &mut out);
    out
}

fn up_into<C: Symbol>(ctx: &Context<C>, a: &C, out: &mut Zipper<C>) {
    let mut cur = ctx;
    while let Some((head, rest)) = cur.split_first() {
        down_into(head, rest, a, out);
        if !head.nullable() {
            break;
        }
        cur = rest;
    }
}

pub fn derivation_step_zipper<C: Symbol>(z: &Zipper<C>, a: &C) -> Zipper<C> {
    let mut out = Zipper::empty();
    for ctx in z.as_list() {
        up_into(ctx, a, &mut out);
    }
    out
}

/// A strategy for one zipper derivation step.
///
/// [`Unmemoized`] calls [`derivation_step_zipper`] directly;
/// [`crate::memo::DerivationCache`] memoizes the up and down phases.
pub trait Derive<C: Symbol> {
    fn derive(&mut self, z: &Zipper<C>, a: &C) -> Zipper<C>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Unmemoized;

impl<C: Symbol> Derive<C> for Unmemoized {
    fn derive(&mut self, z: &Zipper<C>, a: &C) -> Zipper<C> {
        derivation_step_zipper(z, a)
    }
}

/// Whether `input ∈ L(z)`.
pub fn match_zipper<C: Symbol>(z: &Zipper<C>, input: &[C]) -> bool {
    match_zipper_with(&mut Unmemoized, z, input)
}

pub fn match_zipper_with<C: Symbol, D: Derive<C>>(d: &mut D, z: &Zipper<C>, input: &[C]) -> bool {
    let mut cur = z.clone();
    for a in input {
        if cur.is_empty() {
            return false;
        }
        cur = d.derive(&cur, a);
    }
    cur.nullable()
}

/// Whether some extension of `s` is in `L(z)`.
pub fn prefix_match_zipper<C: Symbol>(z: &Zipper<C>, s: &[C]) -> bool {
    prefix_match_zipper_with(&mut Unmemoized, z, s)
}

pub fn prefix_match_zipper_with<C: Symbol, D: Derive<C>>(d: &mut D, z: &Zipper<C>, s: &[C]) -> bool {
    let mut cur = z.clone();
    for a in s {
        if cur.is_empty() {
            return false;
        }
        cur = d.derive(&cur, a);
    }
    cur.has_non_empty_language()
}

/// Longest non-empty prefix of `s` in `L(z)`, and the rest of `s`.
pub fn find_longest_match_zipper<'a, C: Symbol>(z: &Zipper<C>, s: &'a [C]) -> (&'a [C], &'a [C]) {
    s.split_at(longest_match_len_with(&mut Unmemoized, z, s))
}

/// Length of the longest non-empty prefix of `s` in `L(z)`, `0` if none.
pub fn longest_match_len_with<C: Symbol, D: Derive<C>>(d: &mut D, z: &Zipper<C>, s: &[C]) -> usize {
    let mut cur = z.clone();
    let mut best = 0;
    for (i, a) in s.iter().enumerate() {
        if cur.is_empty() {
            break;
        }
        cur = d.derive(&cur, a);
        if cur.nullable() {
            best = i + 1;
        }
    }
    best
}

impl<C: Symbol> Hash for Zipper<C> {
    // Order-independent, consistent with set equality.
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut acc = 0u64;
        for c in &self.contexts {
            acc = acc.wrapping_add(mix(0x5a, c.structural_hash()));
        }
        state.write_u64(acc);
        state.write_usize(self.contexts.len());
    }
}

pub(crate) fn key_hash_up<C: Symbol>(ctx: &Context<C>, a: &C) -> u64 {
    mix(ctx.structural_hash(), hash_symbol(a))
}

pub(crate) fn key_hash_down<C: Symbol>(expr: &Regex<C>, ctx: &Context<C>, a: &C) -> u64 {
    mix(mix(expr.structural_hash(), ctx.structural_hash()), hash_symbol(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::match_r_spec;
    use alloc::vec;

    type R = Regex<char>;

    fn a() -> R {
        R::elem('a')
    }

    fn b() -> R {
        R::elem('b')
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn words_upto(len: usize) -> Vec<Vec<char>> {
        let mut out = vec![vec![]];
        let mut layer: Vec<Vec<char>> = vec![vec![]];
        for _ in 0..len {
            let next: Vec<Vec<char>> = layer
                .iter()
                .flat_map(|w| {
                    ['a', 'b'].into_iter().map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn same_language(x: &R, y: &R, max_len: usize) -> bool {
        words_upto(max_len).iter().all(|w| match_r_spec(x, w) == match_r_spec(y, w))
    }

    #[test]
    fn focus_examples() {
        let z = Zipper::focus(R::empty_lang());
        assert_eq!(z.as_list(), &[Context::from_exprs([R::empty_lang()])]);
        let r = R::star(R::union(a(), b()));
        assert_eq!(Zipper::focus(r.clone()).unfocus(), r);
    }

    #[test]
    fn unfocus_examples() {
        assert_eq!(unfocus::<char>(&[]), R::empty_lang());
        let (r1, r2, r3, r4) = (a(), b(), R::star(a()), R::empty_expr());
        assert_eq!(
            unfocus(&[Context::from_exprs([r1.clone(), r2.clone()])]),
            R::concat(r1.clone(), r2.clone())
        );
        assert_eq!(
            unfocus(&[
                Context::from_exprs([r1.clone(), r2.clone()]),
                Context::from_exprs([r3.clone(), r4.clone()])
            ]),
            R::union(R::concat(r1, r2), R::concat(r3, r4))
        );
        assert_eq!(Context::<char>::empty().unfocus(), R::empty_expr());
    }

    #[test]
    fn down_examples() {
        let r2 = b();
        let z = derivation_step_zipper_down(&a(), &Context::from_exprs([r2.clone()]), &'a');
        assert_eq!(z, Zipper::from_contexts([Context::from_exprs([r2])]));
        assert!(derivation_step_zipper_down(&b(), &Context::empty(), &'a').is_empty());

        let star = R::star(a());
        let z = derivation_step_zipper_down(&star, &Context::empty(), &'a');
        assert_eq!(z, Zipper::from_contexts([Context::from_exprs([star.clone()])]));
        assert!(same_language(&z.unfocus(), &star.derivative_step(&'a'), 4));
    }

    #[test]
    fn up_examples() {
        assert!(derivation_step_zipper_up(&Context::<char>::empty(), &'a').is_empty());
        let z = derivation_step_zipper_up(&Context::from_exprs([a()]), &'a');
        assert_eq!(z, Zipper::from_contexts([Context::empty()]));
        let ctx = Context::from_exprs([R::star(a()), b()]);
        let z = derivation_step_zipper_up(&ctx, &'b');
        assert_eq!(z, Zipper::from_contexts([Context::empty()]));
        assert!(same_language(
            &z.unfocus(),
            &ctx.unfocus().derivative_step(&'b'),
            4
        ));
    }

    #[test]
    fn step_examples() {
        assert!(derivation_step_zipper(&Zipper::<char>::empty(), &'a').is_empty());
        let z = derivation_step_zipper(&Zipper::focus(a()), &'a');
        assert_eq!(z, Zipper::from_contexts([Context::empty()]));
    }

    #[test]
    fn nullable_examples() {
        assert!(!Zipper::<char>::empty().nullable());
        assert!(Zipper::<char>::from_contexts([Context::empty()]).nullable());
        assert!(Zipper::focus(R::star(R::empty_lang())).nullable());
    }

    #[test]
    fn non_empty_language_examples() {
        assert!(!Zipper::<char>::empty().has_non_empty_language());
        assert!(Zipper::<char>::from_contexts([Context::empty()]).has_non_empty_language());
        let z = Zipper::from_contexts([Context::from_exprs([R::empty_lang(), a()])]);
        assert!(!z.has_non_empty_language());
    }

    #[test]
    fn match_and_prefix_examples() {
        let lower = R::plus(R::char_range('a', 'z'));
        let digits = R::plus(R::char_range('0', '9'));
        let z = Zipper::focus(R::union(lower, digits));
        assert!(!match_zipper(&z, &chars("foo1")));
        assert!(match_zipper(&z, &chars("foo")));
        assert!(prefix_match_zipper(&z, &chars("foob")));
        assert!(!prefix_match_zipper(&z, &chars("foo1")));
        assert!(!match_zipper(&Zipper::empty(), &chars("a")));
        assert!(!prefix_match_zipper(&Zipper::<char>::empty(), &[]));
    }

    #[test]
    fn longest_match_examples() {
        let s: Vec<char> = vec![];
        assert_eq!(find_longest_match_zipper(&Zipper::focus(a()), &s), (&s[..], &s[..]));
        let not_newline = R::any_of((' '..='~').chain(core::iter::once('\t')));
        let comment = R::concat(R::elem('/'), R::concat(R::elem('/'), R::star(not_newline)));
        let s = chars("//ab");
        let (p, rest) = find_longest_match_zipper(&Zipper::focus(comment.clone()), &s);
        assert_eq!((p.len(), rest.len()), (4, 0));
        assert!(match_r_spec(&comment, &s));

        let lower = R::plus(R::char_range('a', 'z'));
        for input in ["foo1bar", "bbb", "", "zz"] {
            let s = chars(input);
            assert_eq!(
                find_longest_match_zipper(&Zipper::focus(lower.clone()), &s),
                lower.find_longest_match(&s)
            );
        }
    }

    #[test]
    fn deduplicates_contexts() {
        // (a | a) produces the same empty context twice
        let z = derivation_step_zipper(&Zipper::focus(R::union(a(), a())), &'a');
        assert_eq!(z.len(), 1);
        let mut z = Zipper::empty();
        assert!(z.insert(Context::from_exprs([a(), b()])));
        assert!(!z.insert(Context::from_exprs([a(), b()])));
    }

    #[test]
    fn long_inputs_run_iteratively() {
        let s: Vec<char> = core::iter::repeat_n('a', 100_000).collect();
        let z = Zipper::focus(R::plus(a()));
        assert!(match_zipper(&z, &s));
        assert_eq!(longest_match_len_with(&mut Unmemoized, &z, &s), 100_000);
    }

    #[test]
    fn set_equality_ignores_order() {
        let c1 = Context::from_exprs([a()]);
        let c2 = Context::from_exprs([b()]);
        let x = Zipper::from_contexts([c1.clone(), c2.clone()]);
        let y = Zipper::from_contexts([c2, c1]);
        assert_eq!(x, y);
        assert_ne!(x.as_list(), y.as_list());
    }
}
