//! Invertible lexing on top of a Brzozowski-derivative regex engine.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`regex`]: the regex algebra, derivatives and the naive matcher,
//! * [`zipper`]: the zipper representation with its up/down derivation,
//! * [`memo`]: memoization caches for derivation steps,
//! * [`lexer`]: rules, tokens with injective semantic values, maximal munch
//!   lexing and printing,
//! * [`separability`]: R-path predicates and [`separability::PrintableTokens`],
//!   a token sequence that always re-lexes to itself once printed,
//! * [`json`]: a JSON rule set and an object-sorting pipeline built on it,
//! * [`oracle`]: slow reference implementations used by the test suites.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod json;
pub mod lexer;
pub mod memo;
pub mod oracle;
pub mod regex;
pub mod separability;
pub mod zipper;

pub use lexer::{Injection, Rule, RuleSet, RuleSetError, Token};
pub use memo::{CacheStats, DerivationCache, MemoCache};
pub use regex::{Regex, RegexKind, Symbol};
pub use separability::PrintableTokens;
pub use zipper::{Context, Derive, Unmemoized, Zipper};
