//! File formats, input generators and the benchmark harness behind the
//! `invlex` command line tool.

pub mod bench;
pub mod decode;
pub mod generate;
pub mod tokens;

/// Process exit codes of the `invlex` binary.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    /// Input has a position no rule can lex from.
    pub const UNLEXABLE: u8 = 2;
    /// A round trip that must hold did not (or a benchmark variant disagreed).
    pub const ROUNDTRIP: u8 = 3;
    pub const NOT_PRINTABLE: u8 = 4;
    /// Tokens do not form an array of flat objects with integer ids.
    pub const SHAPE: u8 = 5;
    pub const REBUILD: u8 = 6;
    pub const USAGE: u8 = 64;
}
