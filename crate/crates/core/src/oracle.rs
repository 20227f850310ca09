//! Reference implementations for testing.
//!
//! Nothing here is used on a runtime path. The matchers decide membership
//! directly from the language equations of each constructor (split
//! enumeration for concatenation and star), without derivatives, so they can
//! check the derivative and zipper engines independently. They are slow.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;

use crate::lexer::{RuleSet, Token, TokenValue};
use crate::regex::{Regex, RegexKind, Symbol};

/// Membership by the constructor equations.
///
/// `Concat` tries every split `s1 ::: s2 = s`. `Star` accepts `λ`, otherwise
/// tries every split whose first piece is non-empty, which keeps the
/// recursion well-founded. Exponential in the worst case.
pub fn match_r_spec<C: Symbol>(r: &Regex<C>, s: &[C]) -> bool {
    match r.kind() {
        RegexKind::EmptyExpr => s.is_empty(),
        RegexKind::EmptyLang => false,
        RegexKind::Elem(a) => s.len() == 1 && s[0] == *a,
        RegexKind::Union(l, r) => match_r_spec(l, s) || match_r_spec(r, s),
        RegexKind::Concat(l, r) => (0..=s.len()).any(|k| match_r_spec(l, &s[..k]) && match_r_spec(r, &s[k..])),
        RegexKind::Star(inner) => {
            s.is_empty() || (1..=s.len()).any(|k| match_r_spec(inner, &s[..k]) && match_r_spec(r, &s[k..]))
        }
    }
}

/// Tabled evaluation of the same equations over one fixed input.
///
/// `ends(r, i)` is the set of `j` such that `input[i..j] ∈ L(r)`, computed
/// by enumerating split points exactly as [`match_r_spec`] does, with results
/// memoized per `(node, i)`. This makes exhaustive prefix audits over inputs
/// of a few hundred symbols affordable.
pub struct SpecMatcher<'a, C> {
    input: &'a [C],
    memo: HashMap<(usize, usize), Vec<u64>, FxBuildHasher>,
    // keeps the nodes behind memo keys alive
    roots: HashMap<usize, Regex<C>, FxBuildHasher>,
    words: usize,
}

impl<'a, C: Symbol> SpecMatcher<'a, C> {
    pub fn new(input: &'a [C]) -> Self {
        SpecMatcher {
            input,
            memo: HashMap::with_hasher(FxBuildHasher),
            roots: HashMap::with_hasher(FxBuildHasher),
            words: (input.len() + 1).div_ceil(64),
        }
    }

    /// Whether `input[i..j] ∈ L(r)`.
    pub fn matches(&mut self, r: &Regex<C>, i: usize, j: usize) -> bool {
        self.roots.entry(r.node_id()).or_insert_with(|| r.clone());
        let set = self.ends(r, i);
        set[j / 64] >> (j % 64) & 1 == 1
    }

    /// Every `j` with `input[i..j] ∈ L(r)`, ascending.
    pub fn match_ends(&mut self, r: &Regex<C>, i: usize) -> Vec<usize> {
        self.roots.entry(r.node_id()).or_insert_with(|| r.clone());
        Self::members(&self.ends(r, i))
    }

    fn singleton(&self, j: usize) -> Vec<u64> {
        let mut set = vec![0; self.words];
        set[j / 64] |= 1 << (j % 64);
        set
    }

    fn members(set: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in set.iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn union_into(acc: &mut [u64], other: &[u64]) {
        for (a, b) in acc.iter_mut().zip(other) {
            *a |= b;
        }
    }

    fn ends(&mut self, r: &Regex<C>, i: usize) -> Vec<u64> {
        // leaves are cheaper to evaluate than to look up
        match r.kind() {
            RegexKind::EmptyExpr => return self.singleton(i),
            RegexKind::EmptyLang => return vec![0; self.words],
            RegexKind::Elem(a) => {
                return if i < self.input.len() && self.input[i] == *a {
                    self.singleton(i + 1)
                } else {
                    vec![0; self.words]
                };
            }
            _ => {}
        }
        let key = (r.node_id(), i);
        if let Some(set) = self.memo.get(&key) {
            return set.clone();
        }
        let set = match r.kind() {
            RegexKind::EmptyExpr | RegexKind::EmptyLang | RegexKind::Elem(_) => unreachable!(),
            RegexKind::Union(l, rr) => {
                let mut set = self.ends(l, i);
                let right = self.ends(rr, i);
                Self::union_into(&mut set, &right);
                set
            }
            RegexKind::Concat(l, rr) => {
                let mut set = vec![0; self.words];
                for k in Self::members(&self.ends(l, i)) {
                    let part = self.ends(rr, k);
                    Self::union_into(&mut set, &part);
                }
                set
            }
            RegexKind::Star(inner) => {
                let mut set = self.singleton(i);
                for k in Self::members(&self.ends(inner, i)) {
                    if k > i {
                        let part = self.ends(r, k);
                        Self::union_into(&mut set, &part);
                    }
                }
                set
            }
        };
        self.memo.insert(key, set.clone());
        set
    }
}

/// Checks a lexer run against the maximal munch statement.
///
/// For every token, starting at its offset `p` in `input`:
///
/// * its characters are `input[p..p + size]` and its own rule matches them,
/// * no rule with a smaller index matches a prefix of `input[p..]` of length
///   `>= size`,
/// * no rule (including its own) matches a strictly longer prefix.
///
/// Also checks that tokens and suffix concatenate back to `input`, and that
/// no rule matches a non-empty prefix of a non-empty suffix. Every prefix is
/// tested with [`SpecMatcher`].
pub fn audit_maximal_munch<C: Symbol, V: TokenValue>(
    rules: &RuleSet<C, V>,
    input: &[C],
    tokens: &[Token<V>],
    suffix: &[C],
) -> bool {
    let mut spec = SpecMatcher::new(input);
    let mut pos = 0;
    for t in tokens {
        let Some(r_idx) = rules.index_of(t.tag()) else {
            return false;
        };
        let chars = rules.characters(t);
        let end = pos + t.size();
        if t.size() == 0 || chars.len() != t.size() || end > input.len() || input[pos..end] != chars[..] {
            return false;
        }
        if !spec.matches(&rules.rules()[r_idx].regex, pos, end) {
            return false;
        }
        for (j, rule) in rules.rules().iter().enumerate() {
            let first_len = if j < r_idx { t.size() } else { t.size() + 1 };
            if spec.match_ends(&rule.regex, pos).iter().any(|&e| e - pos >= first_len) {
                return false;
            }
        }
        pos = end;
    }
    if input[pos..] != *suffix {
        return false;
    }
    if !suffix.is_empty() {
        for rule in rules.rules() {
            if spec.match_ends(&rule.regex, pos).iter().any(|&e| e > pos) {
                return false;
            }
        }
    }
    true
}

/// Every regex with at most `levels` levels over `alphabet`, all six
/// constructors included. Leaves form level 1.
pub fn enumerate_regexes<C: Symbol>(levels: usize, alphabet: &[C]) -> Vec<Regex<C>> {
    if levels == 0 {
        return Vec::new();
    }
    let mut all: Vec<Regex<C>> = vec![Regex::empty_expr(), Regex::empty_lang()];
    all.extend(alphabet.iter().cloned().map(Regex::elem));
    for _ in 1..levels {
        let prev = all.clone();
        let mut next = vec![Regex::empty_expr(), Regex::empty_lang()];
        next.extend(alphabet.iter().cloned().map(Regex::elem));
        for r in &prev {
            next.push(Regex::star(r.clone()));
        }
        for l in &prev {
            for r in &prev {
                next.push(Regex::union(l.clone(), r.clone()));
                next.push(Regex::concat(l.clone(), r.clone()));
            }
        }
        all = next;
    }
    all
}

/// Every word of length `<= max_len` over `alphabet`, shortest first.
pub fn words_upto<C: Clone>(alphabet: &[C], max_len: usize) -> Vec<Vec<C>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for w in start..end {
            for c in alphabet {
                let mut next = out[w].clone();
                next.push(c.clone());
                out.push(next);
            }
        }
        start = end;
    }
    out
}
