//! A JSON lexer and the object-sorting pipeline built on [`PrintableTokens`].
//!
//! The pipeline lexes a JSON array of flat objects, slices it into one
//! token sequence per object, sorts the slices by their integer `"id"` field
//! and glues them back together with `append`, so only the new boundaries
//! between slices are checked.
//!
//! String literals are a quote, any printable non-space ASCII symbols other
//! than a quote, and a closing quote. There are no escapes, floats or
//! exponents.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::lexer::{Injection, Rule, RuleSet, RuleSetError, Token};
use crate::memo::DerivationCache;
use crate::regex::Regex;
use crate::separability::{AppendError, NotPrintable, PrintableTokens};
use crate::zipper::Derive;

pub mod tags {
    pub const LBRACE: &str = "lbrace";
    pub const RBRACE: &str = "rbrace";
    pub const LBRACKET: &str = "lbracket";
    pub const RBRACKET: &str = "rbracket";
    pub const COMMA: &str = "comma";
    pub const COLON: &str = "colon";
    pub const TRUE: &str = "true";
    pub const FALSE: &str = "false";
    pub const NULL: &str = "null";
    pub const INTEGER: &str = "integerLiteral";
    pub const STRING: &str = "string";
    pub const WHITESPACE: &str = "whitespace";
}

/// Semantic value of a JSON token. Every variant keeps its source text, which
/// makes the injection trivially invertible: `-0` and `0` have the same
/// integer value but different text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JsonTokenValue {
    Integer { value: BigInt, text: Arc<[char]> },
    Str(Arc<[char]>),
    Punct(Arc<[char]>),
    Keyword(Arc<[char]>),
    Whitespace(Arc<[char]>),
}

impl JsonTokenValue {
    pub fn text(&self) -> &[char] {
        match self {
            JsonTokenValue::Integer { text, .. }
            | JsonTokenValue::Str(text)
            | JsonTokenValue::Punct(text)
            | JsonTokenValue::Keyword(text)
            | JsonTokenValue::Whitespace(text) => text,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            JsonTokenValue::Integer { value, .. } => Some(value),
            _ => None,
        }
    }
}

pub type JsonRules = RuleSet<char, JsonTokenValue>;
pub type JsonToken = Token<JsonTokenValue>;
pub type JsonTokens = PrintableTokens<char, JsonTokenValue>;

/// Base-10 fold of the digits with an optional leading `-`.
pub fn chars_to_bigint(s: &[char]) -> BigInt {
    let (negative, digits) = match s.split_first() {
        Some(('-', rest)) => (true, rest),
        _ => (false, s),
    };
    let mut acc = BigInt::from(0u8);
    for &c in digits {
        let d = c.to_digit(10).expect("integer literal holds only digits");
        acc = acc * 10u8 + d;
    }
    if negative {
        -acc
    } else {
        acc
    }
}

fn text_of(v: &JsonTokenValue) -> Vec<char> {
    v.text().to_vec()
}

fn integer(s: &[char]) -> JsonTokenValue {
    JsonTokenValue::Integer {
        value: chars_to_bigint(s),
        text: s.into(),
    }
}

fn string(s: &[char]) -> JsonTokenValue {
    JsonTokenValue::Str(s.into())
}

fn punct(s: &[char]) -> JsonTokenValue {
    JsonTokenValue::Punct(s.into())
}

fn keyword(s: &[char]) -> JsonTokenValue {
    JsonTokenValue::Keyword(s.into())
}

fn whitespace(s: &[char]) -> JsonTokenValue {
    JsonTokenValue::Whitespace(s.into())
}

/// `opt('-') · ('0'⁺ ∪ [1-9][0-9]*)`
pub fn int_re() -> Regex<char> {
    Regex::concat(
        Regex::opt(Regex::elem('-')),
        Regex::union(
            Regex::plus(Regex::elem('0')),
            Regex::concat(Regex::char_range('1', '9'), Regex::star(Regex::char_range('0', '9'))),
        ),
    )
}

pub fn string_re() -> Regex<char> {
    let body = Regex::any_of(('!'..='~').filter(|&c| c != '"'));
    Regex::concat_all([Regex::elem('"'), Regex::star(body), Regex::elem('"')])
}

pub fn whitespace_re() -> Regex<char> {
    Regex::plus(Regex::any_of([' ', '\t', '\n', '\r']))
}

fn try_json_rules() -> Result<JsonRules, RuleSetError> {
    use tags::*;
    let p = Injection::new(punct, text_of);
    let k = Injection::new(keyword, text_of);
    RuleSet::new(vec![
        Rule::new(Regex::elem('{'), LBRACE, false, p),
        Rule::new(Regex::elem('}'), RBRACE, false, p),
        Rule::new(Regex::elem('['), LBRACKET, false, p),
        Rule::new(Regex::elem(']'), RBRACKET, false, p),
        Rule::new(Regex::elem(','), COMMA, false, p),
        Rule::new(Regex::elem(':'), COLON, false, p),
        Rule::new(Regex::literal("true"), TRUE, false, k),
        Rule::new(Regex::literal("false"), FALSE, false, k),
        Rule::new(Regex::literal("null"), NULL, false, k),
        Rule::new(int_re(), INTEGER, false, Injection::new(integer, text_of)),
        Rule::new(string_re(), STRING, false, Injection::new(string, text_of)),
        Rule::new(whitespace_re(), WHITESPACE, true, Injection::new(whitespace, text_of)),
    ])
}

/// The JSON rules in priority order.
pub fn json_rules() -> JsonRules {
    try_json_rules().expect("JSON rules are valid")
}

pub fn json_lex<'a>(rules: &JsonRules, input: &'a [char]) -> (Vec<JsonToken>, &'a [char]) {
    rules.lex(input)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("token {0} does not fit an array of flat objects")]
    MalformedShape(usize),
    #[error("object {0} has no integer \"id\" field")]
    MissingId(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RebuildError {
    #[error("boundary before part {0} is not separable")]
    BoundaryNotSeparable(usize),
    #[error("{0} objects but {1} ids")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("input cannot be lexed past symbol {0}")]
    Unlexable(usize),
    #[error(transparent)]
    NotPrintable(#[from] NotPrintable),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Rebuild(#[from] RebuildError),
}

/// Result of [`shallow_split_objects`].
#[derive(Clone, Debug)]
pub struct SplitObjects {
    /// Tokens before the first object (or the whole array when it has none).
    pub prefix: JsonTokens,
    pub objects: Vec<JsonTokens>,
    pub ids: Vec<BigInt>,
}

/// Slices `p`, which must lex a JSON array of objects, into one slice per
/// object (braces included) and reads each object's `"id"`.
///
/// Whitespace may appear between any two tokens. Nesting inside an object is
/// tracked by counting braces and brackets; `"id"` is only looked up at the
/// object's top level.
pub fn shallow_split_objects(p: &JsonTokens) -> Result<SplitObjects, SplitError> {
    use tags::*;
    let ts = p.tokens();
    let skip_ws = |mut i: usize| {
        while i < ts.len() && ts[i].tag() == WHITESPACE {
            i += 1;
        }
        i
    };
    let expect = |i: usize, tag: &str| -> Result<usize, SplitError> {
        if i < ts.len() && ts[i].tag() == tag {
            Ok(i + 1)
        } else {
            Err(SplitError::MalformedShape(i))
        }
    };

    let mut i = expect(skip_ws(0), LBRACKET)?;
    i = skip_ws(i);
    let prefix_end = i;
    let mut objects = Vec::new();
    let mut ids = Vec::new();
    if i < ts.len() && ts[i].tag() == RBRACKET {
        i += 1;
    } else {
        loop {
            let start = i;
            expect(i, LBRACE)?;
            let end = object_end(ts, start)?;
            let obj = p.slice(start, end).expect("object bounds are in range");
            let id = object_id(obj.tokens()).ok_or(SplitError::MissingId(objects.len()))?;
            objects.push(obj);
            ids.push(id);
            i = skip_ws(end);
            if i < ts.len() && ts[i].tag() == COMMA {
                i = skip_ws(i + 1);
            } else {
                i = expect(i, RBRACKET)?;
                break;
            }
        }
    }
    if skip_ws(i) != ts.len() {
        return Err(SplitError::MalformedShape(skip_ws(i)));
    }
    Ok(SplitObjects {
        prefix: p.slice(0, prefix_end).expect("prefix bounds are in range"),
        objects,
        ids,
    })
}

/// Index one past the `}` closing the object opened at `start`.
fn object_end(ts: &[JsonToken], start: usize) -> Result<usize, SplitError> {
    let mut depth = 0usize;
    for (i, t) in ts.iter().enumerate().skip(start) {
        match t.tag() {
            tags::LBRACE | tags::LBRACKET => depth += 1,
            tags::RBRACE | tags::RBRACKET => {
                depth -= 1;
                if depth == 0 {
                    return if t.tag() == tags::RBRACE {
                        Ok(i + 1)
                    } else {
                        Err(SplitError::MalformedShape(i))
                    };
                }
            }
            _ => {}
        }
    }
    Err(SplitError::MalformedShape(ts.len()))
}

/// Value of the first top-level `"id": <integer>` entry of an object slice.
fn object_id(obj: &[JsonToken]) -> Option<BigInt> {
    let significant: Vec<(usize, &JsonToken)> = {
        let mut depth = 0usize;
        let mut out = Vec::new();
        for t in obj {
            match t.tag() {
                tags::LBRACE | tags::LBRACKET => depth += 1,
                tags::RBRACE | tags::RBRACKET => depth -= 1,
                tags::WHITESPACE => continue,
                _ => {}
            }
            out.push((depth, t));
        }
        out
    };
    significant.windows(3).find_map(|w| {
        let [(d, key), (_, colon), (_, value)] = w else {
            return None;
        };
        let is_id_key = *d == 1 && key.tag() == tags::STRING && key.value().text() == ['"', 'i', 'd', '"'];
        if is_id_key && colon.tag() == tags::COLON {
            value.value().as_integer().cloned()
        } else {
            None
        }
    })
}

fn single<D: Derive<char>>(rules: &JsonRules, parts: &[(&str, &str)], d: &mut D) -> JsonTokens {
    let tokens = parts
        .iter()
        .map(|(tag, text)| {
            let chars: Vec<char> = text.chars().collect();
            rules.make_token(tag, &chars).expect("fixed token matches its rule")
        })
        .collect();
    PrintableTokens::new(rules.clone(), tokens, d).expect("fixed tokens are printable")
}

/// Stably sorts `objects` by `ids` and joins them into
/// `[` obj₀ `, ` obj₁ … `]` using only boundary-checked appends.
pub fn sort_and_rebuild<D: Derive<char>>(
    rules: &JsonRules,
    objects: &[JsonTokens],
    ids: &[BigInt],
    d: &mut D,
) -> Result<JsonTokens, RebuildError> {
    if objects.len() != ids.len() {
        return Err(RebuildError::LengthMismatch(objects.len(), ids.len()));
    }
    let mut order: Vec<usize> = (0..objects.len()).collect();
    order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));

    let mut out = single(rules, &[(tags::LBRACKET, "[")], d);
    let between = single(rules, &[(tags::COMMA, ","), (tags::WHITESPACE, " ")], d);
    let close = single(rules, &[(tags::RBRACKET, "]")], d);
    let fail = |i: usize| move |_: AppendError| RebuildError::BoundaryNotSeparable(i);
    for (k, &i) in order.iter().enumerate() {
        if k > 0 {
            out.append(&between, d).map_err(fail(k))?;
        }
        out.append(&objects[i], d).map_err(fail(k))?;
    }
    out.append(&close, d).map_err(fail(order.len()))?;
    Ok(out)
}

/// Lex, check, split, sort and rebuild; returns the rebuilt tokens.
pub fn json_sort_tokens(rules: &JsonRules, input: &[char]) -> Result<JsonTokens, PipelineError> {
    let mut d = DerivationCache::new();
    let (tokens, suffix) = rules.lex_with(input, &mut d);
    if !suffix.is_empty() {
        return Err(PipelineError::Unlexable(input.len() - suffix.len()));
    }
    let p = PrintableTokens::new(rules.clone(), tokens, &mut d)?;
    let split = shallow_split_objects(&p)?;
    Ok(sort_and_rebuild(rules, &split.objects, &split.ids, &mut d)?)
}

/// [`json_sort_tokens`], printed.
pub fn json_sort_pipeline(input: &[char]) -> Result<Vec<char>, PipelineError> {
    json_sort_tokens(&json_rules(), input).map(|p| p.print())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{audit_maximal_munch, match_r_spec};
    use crate::separability::check_separator_interleaving;
    use alloc::string::String;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn text(cs: &[char]) -> String {
        cs.iter().collect()
    }

    fn printable(rules: &JsonRules, s: &str) -> JsonTokens {
        let input = chars(s);
        let (tokens, suffix) = rules.lex(&input);
        assert!(suffix.is_empty());
        PrintableTokens::mk_printable_tokens(rules, tokens).unwrap()
    }

    #[test]
    fn rules_are_valid_and_classes_disjoint() {
        let rules = try_json_rules().unwrap();
        let seps: Vec<_> = rules.rules().iter().filter(|r| r.is_separator).map(|r| &*r.tag).collect();
        assert_eq!(seps, [tags::WHITESPACE]);
        assert!(check_separator_interleaving(&rules, &[]));
    }

    #[test]
    fn int_re_accepts_what_the_equations_accept() {
        for s in ["0", "-0", "00", "7", "-120", "1234567890"] {
            assert!(match_r_spec(&int_re(), &chars(s)), "{s}");
        }
        for s in ["", "-", "01", "--1", "1-"] {
            assert!(!match_r_spec(&int_re(), &chars(s)), "{s}");
        }
    }

    #[test]
    fn integer_values() {
        assert_eq!(chars_to_bigint(&chars("-120")), BigInt::from(-120));
        assert_eq!(chars_to_bigint(&chars("000")), BigInt::from(0));
        let big = "123456789012345678901234567890";
        assert_eq!(chars_to_bigint(&chars(big)), big.parse::<BigInt>().unwrap());
        assert_ne!(integer(&chars("-0")), integer(&chars("0")));
    }

    #[test]
    fn lex_examples() {
        let rules = json_rules();
        let input = chars("[1,2]");
        let (tokens, suffix) = json_lex(&rules, &input);
        assert_eq!(tokens.len(), 5);
        assert!(suffix.is_empty());
        assert!(audit_maximal_munch(&rules, &input, &tokens, suffix));

        let (tokens, suffix) = json_lex(&rules, &[]);
        assert!(tokens.is_empty() && suffix.is_empty());

        let input = chars("-0");
        let (tokens, suffix) = json_lex(&rules, &input);
        assert!(suffix.is_empty());
        assert_eq!((tokens.len(), tokens[0].tag(), tokens[0].size()), (1, tags::INTEGER, 2));

        let input = chars("{\"a\": true, \"b\":null}\n");
        let (tokens, suffix) = json_lex(&rules, &input);
        assert!(suffix.is_empty());
        assert!(audit_maximal_munch(&rules, &input, &tokens, suffix));
        let tags: Vec<_> = tokens.iter().map(Token::tag).collect();
        assert_eq!(
            tags,
            [
                "lbrace", "string", "colon", "whitespace", "true", "comma", "whitespace", "string", "colon", "null",
                "rbrace", "whitespace"
            ]
        );
    }

    #[test]
    fn lex_stops_at_unknown_symbols() {
        let rules = json_rules();
        let input = chars("[1.5]");
        let (tokens, suffix) = json_lex(&rules, &input);
        assert_eq!(tokens.len(), 2);
        assert_eq!(text(suffix), ".5]");
        assert!(audit_maximal_munch(&rules, &input, &tokens, suffix));
    }

    #[test]
    fn split_two_objects() {
        let rules = json_rules();
        let p = printable(&rules, "[{\"id\": 2, \"v\": \"x\"}, {\"v\": [1, 2], \"id\":1}]");
        let split = shallow_split_objects(&p).unwrap();
        assert_eq!(split.ids, [BigInt::from(2), BigInt::from(1)]);
        assert_eq!(split.objects.len(), 2);
        // hand-counted: `[` then 12 tokens of the first object
        assert_eq!(split.prefix.len(), 1);
        assert_eq!(split.objects[0].tokens(), &p.tokens()[1..13]);
        assert_eq!(text(&split.objects[0].print()), "{\"id\": 2, \"v\": \"x\"}");
        assert_eq!(text(&split.objects[1].print()), "{\"v\": [1, 2], \"id\":1}");
    }

    #[test]
    fn split_edge_cases() {
        let rules = json_rules();
        let split = shallow_split_objects(&printable(&rules, " [ ] ")).unwrap();
        assert!(split.objects.is_empty() && split.ids.is_empty());

        let err = shallow_split_objects(&printable(&rules, "[{\"a\": 1}]")).unwrap_err();
        assert_eq!(err, SplitError::MissingId(0));
        let err = shallow_split_objects(&printable(&rules, "[{\"x\": {\"id\": 1}}]")).unwrap_err();
        assert_eq!(err, SplitError::MissingId(0));
        // "id" as a value is not a key
        let err = shallow_split_objects(&printable(&rules, "[{\"k\": \"id\", \"j\": 3}]")).unwrap_err();
        assert_eq!(err, SplitError::MissingId(0));

        for bad in ["{\"id\": 1}", "[1]", "[{\"id\": 1}", "[{\"id\": 1}] 2", "[{\"id\": 1} {\"id\": 2}]"] {
            assert!(
                matches!(shallow_split_objects(&printable(&rules, bad)), Err(SplitError::MalformedShape(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn rebuild_swaps_and_wraps() {
        let rules = json_rules();
        let mut d = DerivationCache::new();
        let p = printable(&rules, "[{\"id\":2},{\"id\":1}]");
        let split = shallow_split_objects(&p).unwrap();
        let out = sort_and_rebuild(&rules, &split.objects, &split.ids, &mut d).unwrap();
        assert_eq!(text(&out.print()), "[{\"id\":1}, {\"id\":2}]");
        let again = PrintableTokens::mk_printable_tokens(&rules, out.tokens().to_vec()).unwrap();
        assert_eq!(again, out);

        let p = printable(&rules, "[ {\"id\" : 5 } ]");
        let split = shallow_split_objects(&p).unwrap();
        let out = sort_and_rebuild(&rules, &split.objects, &split.ids, &mut d).unwrap();
        assert_eq!(text(&out.print()), "[{\"id\" : 5 }]");
    }

    #[test]
    fn rebuild_is_stable() {
        let input = "[{\"id\":1,\"n\":\"a\"},{\"id\":0},{\"id\":1,\"n\":\"b\"}]";
        let out = text(&json_sort_pipeline(&chars(input)).unwrap());
        assert_eq!(out, "[{\"id\":0}, {\"id\":1,\"n\":\"a\"}, {\"id\":1,\"n\":\"b\"}]");
    }

    #[test]
    fn pipeline_round_trips_and_is_idempotent() {
        let rules = json_rules();
        let input = chars("[\n  {\"id\": 10, \"ok\": false},\n  {\"id\": -3, \"tags\": [\"a\",\"b\"]}\n]\n");
        let rebuilt = json_sort_tokens(&rules, &input).unwrap();
        let out = rebuilt.print();
        let (relexed, suffix) = rules.lex(&out);
        assert!(suffix.is_empty());
        assert_eq!(relexed, rebuilt.tokens());
        assert_eq!(json_sort_pipeline(&out).unwrap(), out);
    }

    #[test]
    fn already_sorted_input_gets_canonical_spacing() {
        let out = json_sort_pipeline(&chars("[{\"id\":1} ,\n{\"id\":2}]")).unwrap();
        assert_eq!(text(&out), "[{\"id\":1}, {\"id\":2}]");
    }

    #[test]
    fn pipeline_errors() {
        assert_eq!(json_sort_pipeline(&chars("[{\"id\": 1.0}]")), Err(PipelineError::Unlexable(9)));
        assert_eq!(
            json_sort_pipeline(&chars("[{\"id\": 1}{\"id\": 2}]")),
            Err(PipelineError::Split(SplitError::MalformedShape(7)))
        );
        // `1` directly followed by `2` would lex as one integer
        let rules = json_rules();
        let one = rules.make_token(tags::INTEGER, &['1']).unwrap();
        let two = rules.make_token(tags::INTEGER, &['2']).unwrap();
        assert_eq!(
            PrintableTokens::new(rules.clone(), vec![one, two], &mut DerivationCache::new()).unwrap_err(),
            NotPrintable::NotSeparable { index: 0 }
        );
        assert!(json_sort_pipeline(&[]).is_err());
    }
}
