//! In-process benchmark harness.
//!
//! Each (experiment, size, variant) cell is timed as follows: the batch size
//! is doubled until one batch takes at least `min_sample`, `warmup` batches
//! are run and discarded, then `reps` batches are timed. Mean and standard
//! deviation are per call. Before timing, every variant of a cell is run
//! once and its result compared with the others.

use std::fmt;
use std::fs;
use std::hint::black_box;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use invlex_core::json::{json_rules, JsonRules, JsonToken, JsonTokens};
use invlex_core::memo::{match_r_memo, naive_derivative_cache};
use invlex_core::separability::sep_seq;
use invlex_core::zipper::{focus, match_zipper, match_zipper_with};
use invlex_core::{DerivationCache, PrintableTokens, Unmemoized};
use rand::Rng;

use crate::decode::Decoded;
use crate::generate::{comment_re, json_array_of_len, random_comment, rng};

pub const EXPERIMENTS: [&str; 4] = ["regex-comment", "json-lex", "rpath-check", "pt-recombine"];

pub const CSV_HEADER: &str = "experiment,n,variant,mean_ns,stddev_ns,reps";

/// Comments matched per timed call of the regex-comment experiment.
const COMMENTS_PER_SIZE: usize = 8;

/// Slices recombined by the pt-recombine experiment, whatever the size.
pub const RECOMBINE_SLICES: usize = 16;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Sizes to run; `None` picks the experiment's default sweep.
    pub sizes: Option<Vec<usize>>,
    pub reps: usize,
    pub warmup: usize,
    pub seed: u64,
    /// Directory of JSON files used instead of generated inputs by
    /// json-lex and rpath-check.
    pub corpus: Option<PathBuf>,
    pub min_sample: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: None,
            reps: 5,
            warmup: 3,
            seed: 42,
            corpus: None,
            min_sample: Duration::from_millis(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub experiment: String,
    pub n: usize,
    pub variant: String,
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub reps: usize,
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{:.1},{:.1},{}",
            self.experiment, self.n, self.variant, self.mean_ns, self.stddev_ns, self.reps
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("unknown experiment `{0}` (expected one of {list})", list = EXPERIMENTS.join(", "))]
    UnknownExperiment(String),
    #[error("{experiment} n={n}: variant {variant} disagrees with {reference}")]
    Mismatch {
        experiment: &'static str,
        n: usize,
        variant: &'static str,
        reference: &'static str,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// Times `f` as described in the module docs.
pub fn measure<R>(warmup: usize, reps: usize, min_sample: Duration, mut f: impl FnMut() -> R) -> Sample {
    measure_interleaved(warmup, reps, min_sample, 1, |_| f())[0]
}

/// Times `cells` functions, `f(i)` being cell `i`. Warm-up and timed
/// batches go round-robin over the cells, so a slow stretch of the machine
/// is spread across all of them instead of landing on one.
pub fn measure_interleaved<R>(
    warmup: usize,
    reps: usize,
    min_sample: Duration,
    cells: usize,
    mut f: impl FnMut(usize) -> R,
) -> Vec<Sample> {
    let mut run = |cell: usize, batch: usize| {
        let start = Instant::now();
        for _ in 0..batch {
            black_box(f(cell));
        }
        start.elapsed()
    };
    let batches: Vec<usize> = (0..cells)
        .map(|cell| {
            let mut batch = 1;
            while run(cell, batch) < min_sample && batch < 1 << 24 {
                batch *= 2;
            }
            batch
        })
        .collect();
    for _ in 0..warmup {
        for (cell, &batch) in batches.iter().enumerate() {
            run(cell, batch);
        }
    }
    let reps = reps.max(1);
    let mut per_call = vec![Vec::with_capacity(reps); cells];
    for _ in 0..reps {
        for (cell, &batch) in batches.iter().enumerate() {
            per_call[cell].push(run(cell, batch).as_nanos() as f64 / batch as f64);
        }
    }
    per_call
        .iter()
        .map(|xs| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
            } else {
                0.0
            };
            Sample {
                mean_ns: mean,
                stddev_ns: var.sqrt(),
            }
        })
        .collect()
}

pub fn default_sizes(experiment: &str) -> Option<Vec<usize>> {
    Some(match experiment {
        "regex-comment" => (5..=120).step_by(5).collect(),
        "json-lex" => vec![1000, 2000, 4000, 8000, 16000],
        "rpath-check" => vec![1000, 2000, 4000, 8000],
        "pt-recombine" => vec![1000, 2500, 5000, 10000],
        _ => return None,
    })
}

struct Recorder<'a> {
    experiment: &'static str,
    cfg: &'a BenchConfig,
    out: Vec<BenchRecord>,
}

impl Recorder<'_> {
    fn time<R>(&mut self, n: usize, variant: &str, per_call_divisor: usize, f: impl FnMut() -> R) {
        let s = measure(self.cfg.warmup, self.cfg.reps, self.cfg.min_sample, f);
        self.push(n, variant, per_call_divisor, s);
    }

    fn push(&mut self, n: usize, variant: &str, per_call_divisor: usize, s: Sample) {
        let d = per_call_divisor.max(1) as f64;
        self.out.push(BenchRecord {
            experiment: self.experiment.to_string(),
            n,
            variant: variant.to_string(),
            mean_ns: s.mean_ns / d,
            stddev_ns: s.stddev_ns / d,
            reps: self.cfg.reps.max(1),
        });
    }

    fn check(&self, n: usize, variant: &'static str, reference: &'static str, same: bool) -> Result<(), BenchError> {
        if same {
            Ok(())
        } else {
            Err(BenchError::Mismatch {
                experiment: self.experiment,
                n,
                variant,
                reference,
            })
        }
    }
}

/// Runs one experiment and returns its records in run order.
pub fn run(experiment: &str, cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    let name = *EXPERIMENTS
        .iter()
        .find(|e| **e == experiment)
        .ok_or_else(|| BenchError::UnknownExperiment(experiment.to_string()))?;
    let sizes = cfg.sizes.clone().or_else(|| default_sizes(name)).unwrap_or_default();
    let mut rec = Recorder {
        experiment: name,
        cfg,
        out: Vec::new(),
    };
    match name {
        "regex-comment" => regex_comment(&mut rec, &sizes)?,
        "json-lex" => json_lex(&mut rec, &inputs_for(cfg, &sizes)?)?,
        "rpath-check" => rpath_check(&mut rec, cfg, &sizes)?,
        _ => pt_recombine(&mut rec, &sizes)?,
    }
    Ok(rec.out)
}

fn regex_comment(rec: &mut Recorder, sizes: &[usize]) -> Result<(), BenchError> {
    let re = comment_re();
    let z = focus(re.clone());
    let mut zipper_cache = DerivationCache::new();
    let mut r = rng(rec.cfg.seed);
    let mut inputs = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let n = n.max(2);
        let comments: Vec<Vec<char>> = (0..COMMENTS_PER_SIZE).map(|_| random_comment(&mut r, n)).collect();

        // differential check, on the timed inputs plus one that must fail
        let mut probes = comments.clone();
        let mut bad = random_comment(&mut r, n);
        let at = r.random_range(0..n);
        bad[at] = '\n';
        probes.push(bad);
        let expected: Vec<bool> = probes.iter().map(|c| re.match_r(c)).collect();
        if !expected[..COMMENTS_PER_SIZE].iter().all(|&b| b) || expected[COMMENTS_PER_SIZE] {
            return Err(BenchError::Mismatch {
                experiment: rec.experiment,
                n,
                variant: "naive",
                reference: "generator",
            });
        }
        let mut naive_cache = naive_derivative_cache();
        let memo: Vec<bool> = probes.iter().map(|c| match_r_memo(&mut naive_cache, &re, c)).collect();
        rec.check(n, "naive-memo", "naive", memo == expected)?;
        let zip: Vec<bool> = probes.iter().map(|c| match_zipper(&z, c)).collect();
        rec.check(n, "zipper", "naive", zip == expected)?;
        let zmemo: Vec<bool> = probes.iter().map(|c| match_zipper_with(&mut zipper_cache, &z, c)).collect();
        rec.check(n, "zipper-memo", "naive", zmemo == expected)?;
        inputs.push((n, comments));
    }

    // The zipper variants of every size are timed in the same rounds so their
    // growth ratios compare like with like. They go first: the large
    // derivatives the naive variants build and free leave the allocator in a
    // state that slows them unevenly.
    let zipper = measure_interleaved(
        rec.cfg.warmup,
        rec.cfg.reps,
        rec.cfg.min_sample,
        2 * inputs.len(),
        |cell| {
            let comments = &inputs[cell / 2].1;
            if cell % 2 == 0 {
                comments.iter().filter(|c| match_zipper(&z, c)).count()
            } else {
                comments
                    .iter()
                    .filter(|c| match_zipper_with(&mut zipper_cache, &z, c))
                    .count()
            }
        },
    );
    // The naive derivative cache is the one thing here that can outgrow
    // memory, so it lives for one size only.
    for (i, (n, comments)) in inputs.iter().enumerate() {
        let mut naive_cache = naive_derivative_cache();
        let naive = measure_interleaved(rec.cfg.warmup, rec.cfg.reps, rec.cfg.min_sample, 2, |cell| {
            if cell == 0 {
                comments.iter().filter(|c| re.match_r(c)).count()
            } else {
                comments.iter().filter(|c| match_r_memo(&mut naive_cache, &re, c)).count()
            }
        });
        let k = comments.len();
        rec.push(*n, "naive", k, naive[0]);
        rec.push(*n, "naive-memo", k, naive[1]);
        rec.push(*n, "zipper", k, zipper[2 * i]);
        rec.push(*n, "zipper-memo", k, zipper[2 * i + 1]);
    }
    Ok(())
}

/// Generated arrays of at least `n` symbols for each size, or the `.json`
/// files of the corpus directory.
fn inputs_for(cfg: &BenchConfig, sizes: &[usize]) -> Result<Vec<Vec<char>>, BenchError> {
    match &cfg.corpus {
        Some(dir) => read_corpus(dir),
        None => {
            let mut r = rng(cfg.seed);
            Ok(sizes.iter().map(|&n| json_array_of_len(&mut r, n).chars().collect()).collect())
        }
    }
}

/// Decoded `.json` files of `dir`, sorted by file name.
pub fn read_corpus(dir: &Path) -> Result<Vec<Vec<char>>, BenchError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    if paths.is_empty() {
        return Err(BenchError::Input(format!("no .json files in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| Ok(Decoded::new(&fs::read(p)?).chars))
        .collect()
}

fn json_lex(rec: &mut Recorder, inputs: &[Vec<char>]) -> Result<(), BenchError> {
    let rules = json_rules();
    for input in inputs {
        let n = input.len();
        let (plain, plain_suffix) = rules.lex_with(input, &mut Unmemoized);
        let (memo, memo_suffix) = rules.lex(input);
        rec.check(n, "lex-memo", "lex", plain == memo && plain_suffix == memo_suffix)?;
        rec.time(n, "lex", 1, || rules.lex_with(input, &mut Unmemoized).0.len());
        rec.time(n, "lex-memo", 1, || rules.lex(input).0.len());
    }
    Ok(())
}

fn lex_fully(rules: &JsonRules, input: &[char]) -> Result<Vec<JsonToken>, BenchError> {
    let (tokens, suffix) = rules.lex(input);
    if suffix.is_empty() {
        Ok(tokens)
    } else {
        Err(BenchError::Input(format!(
            "input does not lex completely ({} symbols left)",
            suffix.len()
        )))
    }
}

fn rpath_check(rec: &mut Recorder, cfg: &BenchConfig, sizes: &[usize]) -> Result<(), BenchError> {
    let rules = json_rules();
    let sequences = match &cfg.corpus {
        Some(dir) => read_corpus(dir)?
            .iter()
            .map(|input| lex_fully(&rules, input))
            .collect::<Result<Vec<_>, _>>()?,
        None => sizes
            .iter()
            .map(|&n| json_token_sequence(&rules, cfg.seed, n))
            .collect::<Result<Vec<_>, _>>()?,
    };
    for tokens in &sequences {
        let n = tokens.len();
        let mut prefilled = DerivationCache::new();
        rules.lex_with(&rules.print(tokens), &mut prefilled);

        let cold = sep_seq(&rules, tokens, &mut DerivationCache::new());
        let warm = sep_seq(&rules, tokens, &mut prefilled);
        rec.check(n, "rpath-memo", "rpath", cold == warm)?;
        rec.time(n, "rpath", 1, || sep_seq(&rules, tokens, &mut DerivationCache::new()));
        rec.time(n, "rpath-memo", 1, || sep_seq(&rules, tokens, &mut prefilled));
    }
    Ok(())
}

/// The first `n` tokens of a generated JSON array.
pub fn json_token_sequence(rules: &JsonRules, seed: u64, n: usize) -> Result<Vec<JsonToken>, BenchError> {
    let mut r = rng(seed);
    let mut tokens = Vec::new();
    let mut target = n * 4;
    while tokens.len() < n {
        let text: Vec<char> = json_array_of_len(&mut r, target).chars().collect();
        tokens = lex_fully(rules, &text)?;
        target *= 2;
    }
    tokens.truncate(n);
    Ok(tokens)
}

/// A printable JSON token sequence of exactly `n` tokens, cut into
/// `slices` contiguous pieces of near-equal length.
pub fn recombine_input(rules: &JsonRules, seed: u64, n: usize, slices: usize) -> Result<Vec<JsonTokens>, BenchError> {
    let tokens = json_token_sequence(rules, seed, n)?;
    let whole = PrintableTokens::new(rules.clone(), tokens, &mut DerivationCache::new())
        .map_err(|e| BenchError::Input(e.to_string()))?;
    let slices = slices.clamp(1, n.max(1));
    Ok((0..slices)
        .map(|i| {
            whole
                .slice(i * n / slices, (i + 1) * n / slices)
                .expect("slice bounds are in range")
        })
        .collect())
}

fn pt_recombine(rec: &mut Recorder, sizes: &[usize]) -> Result<(), BenchError> {
    let rules = json_rules();
    for &n in sizes {
        let parts = recombine_input(&rules, rec.cfg.seed, n, RECOMBINE_SLICES)?;
        let mut cache = DerivationCache::new();
        let append = |cache: &mut DerivationCache<char>| {
            let mut out = PrintableTokens::empty(rules.clone());
            for p in &parts {
                out.append(p, cache).ok()?;
            }
            Some(out)
        };
        let recheck = |cache: &mut DerivationCache<char>| {
            let mut all: Vec<JsonToken> = Vec::with_capacity(n);
            for p in &parts {
                all.extend_from_slice(p.tokens());
            }
            sep_seq(&rules, &all, cache).then_some(all)
        };
        let appended = append(&mut cache);
        let rechecked = recheck(&mut cache);
        let same = match (&appended, &rechecked) {
            (Some(a), Some(b)) => a.tokens() == b.as_slice(),
            _ => false,
        };
        rec.check(n, "pt-append", "full-recheck", same)?;
        rec.time(n, "pt-append", 1, || append(&mut cache).map(|p| p.len()));
        rec.time(n, "full-recheck", 1, || recheck(&mut cache).map(|v| v.len()));
    }
    Ok(())
}

pub fn write_csv<W: Write>(mut out: W, experiment: &str, cfg: &BenchConfig, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(
        out,
        "# experiment={experiment} seed={} warmup={} reps={}",
        cfg.seed, cfg.warmup, cfg.reps
    )?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{r}")?;
    }
    out.flush()
}

/// Records of a CSV written by [`write_csv`]; comment lines and the header
/// are skipped.
pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty() && *l != CSV_HEADER)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || format!("malformed record `{line}`");
            if f.len() != 6 {
                return Err(bad());
            }
            Ok(BenchRecord {
                experiment: f[0].to_string(),
                n: f[1].parse().map_err(|_| bad())?,
                variant: f[2].to_string(),
                mean_ns: f[3].parse().map_err(|_| bad())?,
                stddev_ns: f[4].parse().map_err(|_| bad())?,
                reps: f[5].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}
