//! Rules, tokens and the maximal munch lexer.
//!
//! A [`Rule`] pairs a non-nullable regex with a unique tag, a separator flag
//! and an [`Injection`] turning matched characters into a semantic value and
//! back. Tokens only keep the tag; the [`RuleSet`] resolves it to the
//! injection when the token has to be printed.
//!
//! Lexing takes, at each position, the longest prefix any rule matches and
//! breaks ties by rule order. It stops at the first position where no rule
//! matches a non-empty prefix and returns the rest of the input as suffix.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;

use crate::memo::DerivationCache;
use crate::regex::{Regex, Symbol};
use crate::zipper::{longest_match_len_with, Derive, Zipper};

/// Semantic value carried by a token.
pub trait TokenValue: Clone + Eq + fmt::Debug {}

impl<T: Clone + Eq + fmt::Debug> TokenValue for T {}

/// `transform` with its left inverse `chars_of`.
///
/// Law: `chars_of(transform(s)) == s` for every `s` the owning rule matches.
/// The law is not checked at construction; see [`RuleSet::injection_holds`].
pub struct Injection<C, V> {
    transform: fn(&[C]) -> V,
    chars_of: fn(&V) -> Vec<C>,
}

impl<C, V> Clone for Injection<C, V> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<C, V> Copy for Injection<C, V> {}

impl<C, V> Injection<C, V> {
    pub const fn new(transform: fn(&[C]) -> V, chars_of: fn(&V) -> Vec<C>) -> Self {
        Injection { transform, chars_of }
    }

    pub fn transform(&self, s: &[C]) -> V {
        (self.transform)(s)
    }

    pub fn chars_of(&self, v: &V) -> Vec<C> {
        (self.chars_of)(v)
    }
}

impl<C: Clone> Injection<C, Vec<C>> {
    /// The value is the matched characters themselves.
    pub const fn raw() -> Self {
        Injection::new(<[C]>::to_vec, Vec::clone)
    }
}

impl<C, V> fmt::Debug for Injection<C, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Injection")
    }
}

#[derive(Clone, Debug)]
pub struct Rule<C, V> {
    pub regex: Regex<C>,
    pub tag: Arc<str>,
    pub is_separator: bool,
    pub injection: Injection<C, V>,
}

impl<C: Symbol, V> Rule<C, V> {
    pub fn new(regex: Regex<C>, tag: &str, is_separator: bool, injection: Injection<C, V>) -> Self {
        Rule {
            regex,
            tag: Arc::from(tag),
            is_separator,
            injection,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleSetError {
    #[error("rule `{0}` has a nullable regex")]
    NullableRegex(String),
    #[error("tag `{0}` is used by more than one rule")]
    DuplicateTag(String),
    #[error("a rule set needs at least one rule")]
    EmptyRuleSet,
}

/// A token: semantic value, producing rule's tag and separator flag, and the
/// number of symbols it was lexed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token<V> {
    value: V,
    tag: Arc<str>,
    is_separator: bool,
    size: usize,
}

impl<V> Token<V> {
    pub fn value(&self) -> &V {
        &self.value
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn is_separator(&self) -> bool {
        self.is_separator
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

struct Inner<C, V> {
    rules: Vec<Rule<C, V>>,
    focused: Vec<Zipper<C>>,
    union: Zipper<C>,
    by_tag: HashMap<Arc<str>, usize, FxBuildHasher>,
}

/// A validated, priority-ordered list of rules. Cloning is O(1).
pub struct RuleSet<C, V>(Arc<Inner<C, V>>);

impl<C, V> Clone for RuleSet<C, V> {
    fn clone(&self) -> Self {
        RuleSet(Arc::clone(&self.0))
    }
}

impl<C: Symbol, V> PartialEq for RuleSet<C, V> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.rules.len() == other.0.rules.len()
                && self.0.rules.iter().zip(&other.0.rules).all(|(a, b)| {
                    a.tag == b.tag && a.is_separator == b.is_separator && a.regex == b.regex
                }))
    }
}

impl<C: Symbol, V> fmt::Debug for RuleSet<C, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.rules.iter().map(|r| &r.tag)).finish()
    }
}

impl<C: Symbol, V: TokenValue> RuleSet<C, V> {
    /// Validates `rules`: non-empty, no nullable regex, unique tags.
    pub fn new(rules: Vec<Rule<C, V>>) -> Result<Self, RuleSetError> {
        if rules.is_empty() {
            return Err(RuleSetError::EmptyRuleSet);
        }
        let mut by_tag = HashMap::with_hasher(FxBuildHasher);
        for (i, rule) in rules.iter().enumerate() {
            if rule.regex.nullable() {
                return Err(RuleSetError::NullableRegex(rule.tag.to_string()));
            }
            if by_tag.insert(Arc::clone(&rule.tag), i).is_some() {
                return Err(RuleSetError::DuplicateTag(rule.tag.to_string()));
            }
        }
        let focused = rules.iter().map(|r| Zipper::focus(r.regex.clone())).collect();
        let union = Zipper::focus(Regex::union_all(rules.iter().map(|r| r.regex.clone())));
        Ok(RuleSet(Arc::new(Inner {
            rules,
            focused,
            union,
            by_tag,
        })))
    }

    pub fn rules(&self) -> &[Rule<C, V>] {
        &self.0.rules
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.0.by_tag.get(tag).copied()
    }

    pub fn rule(&self, tag: &str) -> Option<&Rule<C, V>> {
        self.index_of(tag).map(|i| &self.0.rules[i])
    }

    /// Focused union of all rule regexes, in priority order.
    pub fn union_zipper(&self) -> &Zipper<C> {
        &self.0.union
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The characters a token prints as.
    ///
    /// # Panics
    ///
    /// If the token's tag is not in this rule set.
    pub fn characters(&self, t: &Token<V>) -> Vec<C> {
        let rule = self
            .rule(&t.tag)
            .unwrap_or_else(|| panic!("token tag `{}` is not in the rule set", t.tag));
        rule.injection.chars_of(&t.value)
    }

    /// Builds the token rule `tag` produces from `chars`, if that rule
    /// matches all of `chars`.
    pub fn make_token(&self, tag: &str, chars: &[C]) -> Option<Token<V>> {
        let i = self.index_of(tag)?;
        if chars.is_empty() || !crate::zipper::match_zipper(&self.0.focused[i], chars) {
            return None;
        }
        Some(self.token_from(i, chars))
    }

    fn token_from(&self, i: usize, chars: &[C]) -> Token<V> {
        let rule = &self.0.rules[i];
        Token {
            value: rule.injection.transform(chars),
            tag: Arc::clone(&rule.tag),
            is_separator: rule.is_separator,
            size: chars.len(),
        }
    }

    /// Whether the injection of rule `i` gives `s` back.
    pub fn injection_holds(&self, i: usize, s: &[C]) -> bool {
        let inj = &self.0.rules[i].injection;
        inj.chars_of(&inj.transform(s)) == s
    }

    /// Length of the longest non-empty prefix of `input` rule `i` matches.
    pub fn max_prefix_one_rule<D: Derive<C>>(&self, i: usize, input: &[C], d: &mut D) -> Option<usize> {
        match longest_match_len_with(d, &self.0.focused[i], input) {
            0 => None,
            n => Some(n),
        }
    }

    /// `(rule index, length)` of the longest match over all rules; on equal
    /// lengths the lowest index wins.
    pub fn max_prefix<D: Derive<C>>(&self, input: &[C], d: &mut D) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..self.0.rules.len() {
            if let Some(len) = self.max_prefix_one_rule(i, input, d) {
                if best.is_none_or(|(_, b)| len > b) {
                    best = Some((i, len));
                }
            }
        }
        best
    }

    /// Lexes `input` with a fresh derivation cache.
    pub fn lex<'a>(&self, input: &'a [C]) -> (Vec<Token<V>>, &'a [C]) {
        self.lex_with(input, &mut DerivationCache::new())
    }

    pub fn lex_with<'a, D: Derive<C>>(&self, input: &'a [C], d: &mut D) -> (Vec<Token<V>>, &'a [C]) {
        let mut tokens = Vec::new();
        let mut rest = input;
        while let Some((i, len)) = self.max_prefix(rest, d) {
            let (chars, tail) = rest.split_at(len);
            tokens.push(self.token_from(i, chars));
            rest = tail;
        }
        (tokens, rest)
    }

    /// Concatenated characters of `tokens`.
    pub fn print(&self, tokens: &[Token<V>]) -> Vec<C> {
        let mut out = Vec::with_capacity(tokens.iter().map(Token::size).sum());
        for t in tokens {
            out.extend(self.characters(t));
        }
        out
    }

    /// Prints `tokens` with `sep` between every adjacent pair.
    pub fn print_with_sep(&self, tokens: &[Token<V>], sep: &Token<V>) -> Vec<C> {
        let sep_chars = self.characters(sep);
        let mut out = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            if i > 0 {
                out.extend_from_slice(&sep_chars);
            }
            out.extend(self.characters(t));
        }
        out
    }

    /// Prints `tokens`, inserting `sep` before a token only when appending the
    /// token directly would change how the output so far re-lexes.
    ///
    /// Re-lexes the accumulated output for every token, so it is quadratic.
    pub fn print_with_sep_when_needed(&self, tokens: &[Token<V>], sep: &Token<V>) -> Vec<C> {
        let sep_chars = self.characters(sep);
        let mut out: Vec<C> = Vec::new();
        let mut expected: Vec<Token<V>> = Vec::new();
        let mut cache = DerivationCache::new();
        for t in tokens {
            let chars = self.characters(t);
            if expected.is_empty() {
                out.extend(chars);
                expected.push(t.clone());
                continue;
            }
            let mut candidate = out.clone();
            candidate.extend_from_slice(&chars);
            expected.push(t.clone());
            let (lexed, suffix) = self.lex_with(&candidate, &mut cache);
            if suffix.is_empty() && lexed == expected {
                out = candidate;
            } else {
                expected.pop();
                expected.push(sep.clone());
                expected.push(t.clone());
                out.extend_from_slice(&sep_chars);
                out.extend(chars);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{audit_maximal_munch, match_r_spec};
    use alloc::vec;

    type R = Regex<char>;
    type Rules = RuleSet<char, Vec<char>>;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn raw(regex: R, tag: &str, sep: bool) -> Rule<char, Vec<char>> {
        Rule::new(regex, tag, sep, Injection::raw())
    }

    fn words_and_numbers() -> Rules {
        RuleSet::new(vec![
            raw(R::plus(R::char_range('a', 'z')), "word", false),
            raw(R::plus(R::char_range('0', '9')), "number", false),
            raw(R::plus(R::elem(' ')), "ws", true),
        ])
        .unwrap()
    }

    fn int_re() -> R {
        R::concat(
            R::opt(R::elem('-')),
            R::union(
                R::plus(R::elem('0')),
                R::concat(R::char_range('1', '9'), R::star(R::char_range('0', '9'))),
            ),
        )
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Rules::new(vec![]).unwrap_err(), RuleSetError::EmptyRuleSet);
        let err = Rules::new(vec![raw(R::star(R::elem('a')), "as", false)]).unwrap_err();
        assert_eq!(err, RuleSetError::NullableRegex("as".into()));
        let err = Rules::new(vec![
            raw(R::elem(' '), "ws", true),
            raw(R::elem('\t'), "ws", true),
        ])
        .unwrap_err();
        assert_eq!(err, RuleSetError::DuplicateTag("ws".into()));
    }

    #[test]
    fn max_prefix_one_rule_examples() {
        let rules = Rules::new(vec![raw(int_re(), "integerLiteral", false)]).unwrap();
        let input = chars("-12x");
        let mut d = DerivationCache::new();
        assert_eq!(rules.max_prefix_one_rule(0, &input, &mut d), Some(3));
        let oracle = (1..=input.len()).rev().find(|&k| match_r_spec(&int_re(), &input[..k]));
        assert_eq!(oracle, Some(3));
        assert_eq!(rules.max_prefix_one_rule(0, &[], &mut d), None);

        let rules = words_and_numbers();
        assert_eq!(rules.max_prefix_one_rule(0, &chars("foo1"), &mut d), Some(3));
    }

    #[test]
    fn max_prefix_priority_and_munch() {
        let ident = R::plus(R::any_of(('a'..='z').chain(['_', '='])));
        let rules = Rules::new(vec![
            raw(R::literal("val"), "val", false),
            raw(ident, "ident", false),
            raw(R::plus(R::char_range('0', '9')), "number", false),
            raw(R::elem(' '), "ws", true),
        ])
        .unwrap();
        let mut d = DerivationCache::new();
        assert_eq!(rules.max_prefix(&chars("val "), &mut d), Some((0, 3)));
        assert_eq!(rules.max_prefix(&chars("x_=1"), &mut d), Some((1, 3)));
        assert_eq!(rules.max_prefix(&chars("§"), &mut d), None);
        // longer identifier beats the keyword
        assert_eq!(rules.max_prefix(&chars("value"), &mut d), Some((1, 5)));
    }

    #[test]
    fn lex_examples() {
        let rules = words_and_numbers();
        let (tokens, suffix) = rules.lex(&[]);
        assert!(tokens.is_empty() && suffix.is_empty());

        let input = chars("foobar");
        let (tokens, suffix) = rules.lex(&input);
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].size(), 6);
        assert!(suffix.is_empty());

        let input = chars("ab 12!x");
        let (tokens, suffix) = rules.lex(&input);
        assert_eq!(
            tokens.iter().map(Token::tag).collect::<Vec<_>>(),
            ["word", "ws", "number"]
        );
        assert_eq!(suffix, &chars("!x")[..]);
        assert!(audit_maximal_munch(&rules, &input, &tokens, suffix));

        let input = chars("!ab");
        let (tokens, suffix) = rules.lex(&input);
        assert!(tokens.is_empty());
        assert_eq!(suffix, &input[..]);
        assert!(audit_maximal_munch(&rules, &input, &tokens, suffix));
    }

    #[test]
    fn audit_rejects_a_short_token() {
        let rules = words_and_numbers();
        let input = chars("foo");
        let t1 = rules.make_token("word", &chars("fo")).unwrap();
        let t2 = rules.make_token("word", &chars("o")).unwrap();
        assert!(!audit_maximal_munch(&rules, &input, &[t1, t2], &[]));
    }

    #[test]
    fn print_examples() {
        let rules = words_and_numbers();
        assert!(rules.print(&[]).is_empty());
        let foo = rules.make_token("word", &chars("foo")).unwrap();
        let bar = rules.make_token("word", &chars("bar")).unwrap();
        let n123 = rules.make_token("number", &chars("123")).unwrap();
        let space = rules.make_token("ws", &chars(" ")).unwrap();
        assert_eq!(rules.print(&[foo.clone(), bar.clone()]), chars("foobar"));

        let input = chars("abc 42 x");
        let (tokens, suffix) = rules.lex(&input);
        assert!(suffix.is_empty());
        assert_eq!(rules.print(&tokens), input);

        assert!(rules.print_with_sep(&[], &space).is_empty());
        assert_eq!(rules.print_with_sep(core::slice::from_ref(&foo), &space), chars("foo"));
        let printed = rules.print_with_sep(&[foo.clone(), bar.clone()], &space);
        assert_eq!(printed, chars("foo bar"));
        let (relexed, suffix) = rules.lex(&printed);
        assert!(suffix.is_empty());
        assert_eq!(relexed, vec![foo.clone(), space.clone(), bar.clone()]);

        assert_eq!(
            rules.print_with_sep_when_needed(&[foo.clone(), n123.clone()], &space),
            chars("foo123")
        );
        assert_eq!(
            rules.print_with_sep_when_needed(&[foo.clone(), bar.clone()], &space),
            chars("foo bar")
        );
        assert_eq!(rules.print_with_sep_when_needed(&[foo], &space), chars("foo"));
    }

    #[test]
    fn make_token_requires_a_full_match() {
        let rules = words_and_numbers();
        assert!(rules.make_token("word", &chars("ab1")).is_none());
        assert!(rules.make_token("word", &[]).is_none());
        assert!(rules.make_token("nope", &chars("ab")).is_none());
        let t = rules.make_token("number", &chars("07")).unwrap();
        assert_eq!((t.tag(), t.size(), t.is_separator()), ("number", 2, false));
    }

    #[test]
    fn lex_of_a_single_token_reproduces_it() {
        let rules = words_and_numbers();
        let (tokens, _) = rules.lex(&chars("hello 99  world"));
        for t in &tokens {
            let cs = rules.characters(t);
            let (again, suffix) = rules.lex(&cs);
            assert!(suffix.is_empty());
            assert_eq!(again, vec![t.clone()]);
        }
    }
}
