//! Seeded generators for benchmark inputs and fuzzing.

use invlex_core::json::{tags, JsonRules, JsonToken};
use invlex_core::Regex;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type BenchRng = ChaCha8Rng;

pub fn rng(seed: u64) -> BenchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symbols allowed after `//`: printable ASCII and tab.
pub fn comment_body_symbols() -> Vec<char> {
    let mut out: Vec<char> = (' '..='~').collect();
    out.push('\t');
    out
}

/// `/ · / · Σ*` over [`comment_body_symbols`].
pub fn comment_re() -> Regex<char> {
    Regex::concat_all([
        Regex::elem('/'),
        Regex::elem('/'),
        Regex::star(Regex::any_of(comment_body_symbols())),
    ])
}

/// A comment of exactly `n >= 2` symbols that `comment_re` accepts.
pub fn random_comment(rng: &mut impl Rng, n: usize) -> Vec<char> {
    let body = comment_body_symbols();
    let mut out = vec!['/', '/'];
    out.extend((2..n).map(|_| *body.choose(rng).unwrap()));
    out
}

fn pick<'a>(rng: &mut impl Rng, xs: &'a [&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn ws(rng: &mut impl Rng) -> &'static str {
    pick(rng, &["", "", " ", "\n  ", "\t", " "])
}

fn string_body(rng: &mut impl Rng, max: usize) -> String {
    let len = rng.random_range(0..=max);
    (0..len)
        .map(|_| {
            let c = rng.random_range('!'..='~');
            if c == '"' {
                '_'
            } else {
                c
            }
        })
        .collect()
}

fn json_value(rng: &mut impl Rng) -> String {
    match rng.random_range(0..7) {
        0 => rng.random_range(-100_000i64..100_000).to_string(),
        1 | 2 => format!("\"{}\"", string_body(rng, 12)),
        3 => "true".into(),
        4 => "false".into(),
        5 => "null".into(),
        _ => {
            let n = rng.random_range(0..4);
            let items: Vec<String> = (0..n).map(|_| rng.random_range(0..1000).to_string()).collect();
            format!("[{}]", items.join(", "))
        }
    }
}

/// One flat object with an integer `"id"` in `0..id_bound` and up to three
/// other fields, in random order and spacing.
pub fn json_object(rng: &mut impl Rng, id_bound: i64) -> String {
    let fields = rng.random_range(0..4);
    let id_at = rng.random_range(0..=fields);
    let mut out = String::from("{");
    for f in 0..=fields {
        if f > 0 {
            out += ",";
            out += ws(rng);
        }
        if f == id_at {
            let id = rng.random_range(0..id_bound.max(1));
            out += &format!("\"id\":{}{id}", ws(rng));
        } else {
            out += &format!("\"k{f}\":{}{}", ws(rng), json_value(rng));
        }
    }
    out += "}";
    out
}

fn join_objects(rng: &mut impl Rng, objects: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from("[");
    out += ws(rng);
    for (i, obj) in objects.into_iter().enumerate() {
        if i > 0 {
            out += ws(rng);
            out += ",";
            out += ws(rng);
        }
        out += &obj;
    }
    out += ws(rng);
    out += "]\n";
    out
}

/// A JSON array of `objects` flat objects, ids drawn from `0..2 * objects + 1`
/// so some repeat.
pub fn json_array(rng: &mut impl Rng, objects: usize) -> String {
    let bound = objects as i64 * 2 + 1;
    let objs: Vec<String> = (0..objects).map(|_| json_object(rng, bound)).collect();
    join_objects(rng, objs)
}

/// A JSON array of flat objects with at least `min_symbols` characters.
pub fn json_array_of_len(rng: &mut impl Rng, min_symbols: usize) -> String {
    let mut objs = Vec::new();
    let mut len = 3;
    while len < min_symbols {
        let obj = json_object(rng, 1 << 20);
        len += obj.len() + 2;
        objs.push(obj);
    }
    join_objects(rng, objs)
}

/// Characters of a random lexeme the rule `tag` matches.
pub fn random_lexeme(rng: &mut impl Rng, tag: &str) -> String {
    match tag {
        tags::LBRACE => "{".into(),
        tags::RBRACE => "}".into(),
        tags::LBRACKET => "[".into(),
        tags::RBRACKET => "]".into(),
        tags::COMMA => ",".into(),
        tags::COLON => ":".into(),
        tags::TRUE | tags::FALSE | tags::NULL => tag.into(),
        tags::INTEGER => {
            let sign = if rng.random_bool(0.3) { "-" } else { "" };
            if rng.random_bool(0.2) {
                format!("{sign}{}", "0".repeat(rng.random_range(1..3)))
            } else {
                format!("{sign}{}", rng.random_range(1u64..10_000_000))
            }
        }
        tags::STRING => format!("\"{}\"", string_body(rng, 6)),
        tags::WHITESPACE => {
            let n = rng.random_range(1..3);
            (0..n).map(|_| *[' ', '\t', '\n', '\r'].choose(rng).unwrap()).collect()
        }
        _ => panic!("unknown JSON tag `{tag}`"),
    }
}

/// `len` tokens drawn uniformly over the JSON rules. Adjacent tokens may
/// well not be separable.
pub fn random_json_tokens(rng: &mut impl Rng, rules: &JsonRules, len: usize) -> Vec<JsonToken> {
    let tags: Vec<&str> = rules.rules().iter().map(|r| &*r.tag).collect();
    (0..len)
        .map(|_| {
            let tag = *tags.choose(rng).unwrap();
            let chars: Vec<char> = random_lexeme(rng, tag).chars().collect();
            rules.make_token(tag, &chars).expect("lexeme matches its rule")
        })
        .collect()
}

/// Fuzz input of at most `max_len` bytes: raw random bytes, random symbols
/// from a JSON-heavy alphabet, or a valid array with a few bytes mutated.
pub fn fuzz_input(rng: &mut impl Rng, max_len: usize) -> Vec<u8> {
    let len = rng.random_range(0..=max_len);
    match rng.random_range(0..3) {
        0 => (0..len).map(|_| rng.random()).collect(),
        1 => {
            const ALPHABET: &[u8] = b"{}[],:\"- \t\n\r0123456789truefalsnl\\.eE+x";
            let mut s: Vec<u8> = (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect();
            s.truncate(max_len);
            s
        }
        _ => {
            let objects = rng.random_range(0..6);
            let mut s = json_array(rng, objects).into_bytes();
            for _ in 0..rng.random_range(0..3) {
                if !s.is_empty() {
                    let i = rng.random_range(0..s.len());
                    s[i] = rng.random();
                }
            }
            s.truncate(max_len);
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use invlex_core::json::json_rules;
    use invlex_core::zipper::{focus, match_zipper};

    #[test]
    fn comments_match_the_comment_regex() {
        let mut r = rng(7);
        let re = focus(comment_re());
        for n in [2, 5, 60, 120] {
            let c = random_comment(&mut r, n);
            assert_eq!(c.len(), n);
            assert!(match_zipper(&re, &c));
        }
    }

    #[test]
    fn generated_arrays_lex_completely() {
        let rules = json_rules();
        let mut r = rng(1);
        for objects in [0, 1, 5, 40] {
            let s: Vec<char> = json_array(&mut r, objects).chars().collect();
            let (_, suffix) = rules.lex(&s);
            assert!(suffix.is_empty(), "{}", s.iter().collect::<String>());
        }
    }

    #[test]
    fn arrays_reach_the_requested_length() {
        let s = json_array_of_len(&mut rng(2), 5000);
        assert!(s.len() >= 5000 && s.len() < 5200);
    }

    #[test]
    fn same_seed_same_output() {
        assert_eq!(json_array(&mut rng(3), 10), json_array(&mut rng(3), 10));
        assert_eq!(fuzz_input(&mut rng(3), 50), fuzz_input(&mut rng(3), 50));
    }

    #[test]
    fn random_tokens_follow_their_rules() {
        let rules = json_rules();
        let ts = random_json_tokens(&mut rng(9), &rules, 200);
        assert_eq!(ts.len(), 200);
    }
}
