//! Separability of adjacent tokens and sequences that stay printable.
//!
//! Two tokens are separable when no rule matches a prefix of the first
//! token's characters followed by the first character of the second. A
//! sequence in which every adjacent pair is separable, and every token
//! re-lexes to itself on its own, prints to characters that lex back to the
//! same sequence.
//!
//! [`PrintableTokens`] keeps that property as a type invariant. Slicing needs
//! no check, and appending only checks the one new boundary.

use alloc::vec::Vec;

use crate::lexer::{RuleSet, Token, TokenValue};
use crate::memo::DerivationCache;
use crate::regex::Symbol;
use crate::zipper::{prefix_match_zipper_with, Derive};

/// True iff `rel` holds for every adjacent pair of `s`.
pub fn r_path_holds<T>(mut rel: impl FnMut(&T, &T) -> bool, s: &[T]) -> bool {
    s.windows(2).all(|w| rel(&w[0], &w[1]))
}

/// Index `i` of the first pair `(s[i], s[i + 1])` for which `rel` fails.
pub fn first_r_path_violation<T>(mut rel: impl FnMut(&T, &T) -> bool, s: &[T]) -> Option<usize> {
    s.windows(2).position(|w| !rel(&w[0], &w[1]))
}

/// Whether `t1` can be printed directly before `t2`.
pub fn sep_pair<C: Symbol, V: TokenValue, D: Derive<C>>(
    rules: &RuleSet<C, V>,
    t1: &Token<V>,
    t2: &Token<V>,
    d: &mut D,
) -> bool {
    let mut probe = rules.characters(t1);
    match rules.characters(t2).into_iter().next() {
        Some(c) => probe.push(c),
        None => return true,
    }
    !prefix_match_zipper_with(d, rules.union_zipper(), &probe)
}

/// [`sep_pair`] on every adjacent pair.
pub fn sep_seq<C: Symbol, V: TokenValue, D: Derive<C>>(rules: &RuleSet<C, V>, tokens: &[Token<V>], d: &mut D) -> bool {
    r_path_holds(|a, b| sep_pair(rules, a, b, d), tokens)
}

/// Whether lexing `characters(t)` alone gives back exactly `[t]`.
pub fn reproduces_individually<C: Symbol, V: TokenValue, D: Derive<C>>(
    rules: &RuleSet<C, V>,
    t: &Token<V>,
    d: &mut D,
) -> bool {
    let chars = rules.characters(t);
    let (tokens, suffix) = rules.lex_with(&chars, d);
    suffix.is_empty() && tokens.len() == 1 && tokens[0] == *t
}

/// Sufficient condition for separability that needs no lexing: separator and
/// non-separator rules share no symbol, and the tokens alternate between the
/// two classes.
pub fn check_separator_interleaving<C: Symbol, V: TokenValue>(rules: &RuleSet<C, V>, tokens: &[Token<V>]) -> bool {
    let mut sep_symbols = hashbrown::HashSet::with_hasher(rustc_hash::FxBuildHasher);
    let mut other_symbols = hashbrown::HashSet::with_hasher(rustc_hash::FxBuildHasher);
    for rule in rules.rules() {
        let target = if rule.is_separator { &mut sep_symbols } else { &mut other_symbols };
        target.extend(rule.regex.used_symbols());
    }
    sep_symbols.is_disjoint(&other_symbols) && r_path_holds(|a, b| a.is_separator() != b.is_separator(), tokens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NotPrintable {
    #[error("token {index} does not lex back to itself")]
    NotReproducible { index: usize },
    #[error("tokens {index} and {} are not separable", index + 1)]
    NotSeparable { index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AppendError {
    #[error("sequences were built with different rule sets")]
    RuleSetMismatch,
    #[error("last token of the left sequence is not separable from the first of the right")]
    NotSeparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("slice {from}..{to} out of range for {len} tokens")]
pub struct IndexOutOfRange {
    pub from: usize,
    pub to: usize,
    pub len: usize,
}

/// A token sequence that is known to print to characters lexing back to it.
#[derive(Clone)]
pub struct PrintableTokens<C, V> {
    rules: RuleSet<C, V>,
    tokens: Vec<Token<V>>,
}

impl<C: Symbol, V: TokenValue> PrintableTokens<C, V> {
    pub fn empty(rules: RuleSet<C, V>) -> Self {
        PrintableTokens { rules, tokens: Vec::new() }
    }

    /// Checks every token and every boundary; reports the first failure.
    pub fn new<D: Derive<C>>(rules: RuleSet<C, V>, tokens: Vec<Token<V>>, d: &mut D) -> Result<Self, NotPrintable> {
        if let Some(index) = tokens.iter().position(|t| !reproduces_individually(&rules, t, d)) {
            return Err(NotPrintable::NotReproducible { index });
        }
        if let Some(index) = first_r_path_violation(|a, b| sep_pair(&rules, a, b, d), &tokens) {
            return Err(NotPrintable::NotSeparable { index });
        }
        Ok(PrintableTokens { rules, tokens })
    }

    /// [`PrintableTokens::new`] with a fresh cache, failure reduced to `None`.
    pub fn mk_printable_tokens(rules: &RuleSet<C, V>, tokens: Vec<Token<V>>) -> Option<Self> {
        Self::new(rules.clone(), tokens, &mut DerivationCache::new()).ok()
    }

    pub fn rules(&self) -> &RuleSet<C, V> {
        &self.rules
    }

    pub fn tokens(&self) -> &[Token<V>] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<Token<V>> {
        self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Appends `other` after checking only the boundary pair. Leaves `self`
    /// unchanged on failure.
    pub fn append<D: Derive<C>>(&mut self, other: &Self, d: &mut D) -> Result<(), AppendError> {
        if self.rules != other.rules {
            return Err(AppendError::RuleSetMismatch);
        }
        if let (Some(last), Some(first)) = (self.tokens.last(), other.tokens.first()) {
            if !sep_pair(&self.rules, last, first, d) {
                return Err(AppendError::NotSeparable);
            }
        }
        self.tokens.extend_from_slice(&other.tokens);
        Ok(())
    }

    /// Non-mutating [`PrintableTokens::append`].
    pub fn concat<D: Derive<C>>(&self, other: &Self, d: &mut D) -> Result<Self, AppendError> {
        let mut out = self.clone();
        out.append(other, d)?;
        Ok(out)
    }

    /// `tokens[from..to]`, unchecked: every sub-sequence keeps the invariant.
    pub fn slice(&self, from: usize, to: usize) -> Result<Self, IndexOutOfRange> {
        if from > to || to > self.tokens.len() {
            return Err(IndexOutOfRange {
                from,
                to,
                len: self.tokens.len(),
            });
        }
        Ok(PrintableTokens {
            rules: self.rules.clone(),
            tokens: self.tokens[from..to].to_vec(),
        })
    }

    pub fn print(&self) -> Vec<C> {
        self.rules.print(&self.tokens)
    }
}

impl<C: Symbol, V: TokenValue> core::fmt::Debug for PrintableTokens<C, V> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PrintableTokens")
            .field("rules", &self.rules)
            .field("tokens", &self.tokens)
            .finish()
    }
}

impl<C: Symbol, V: TokenValue> PartialEq for PrintableTokens<C, V> {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules && self.tokens == other.tokens
    }
}
