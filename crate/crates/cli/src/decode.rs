//! UTF-8 input decoding that remembers where each character came from.

/// Characters of an input plus the byte offset each one starts at.
///
/// Invalid byte sequences decode to U+FFFD, one per maximal invalid run as
/// reported by [`<[u8]>::utf8_chunks`], so decoding never fails.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decoded {
    pub chars: Vec<char>,
    offsets: Vec<usize>,
    byte_len: usize,
    lossy: bool,
}

impl Decoded {
    pub fn new(bytes: &[u8]) -> Self {
        let mut chars = Vec::with_capacity(bytes.len());
        let mut offsets = Vec::with_capacity(bytes.len());
        let mut pos = 0;
        let mut lossy = false;
        for chunk in bytes.utf8_chunks() {
            for (i, c) in chunk.valid().char_indices() {
                chars.push(c);
                offsets.push(pos + i);
            }
            pos += chunk.valid().len();
            if !chunk.invalid().is_empty() {
                chars.push(char::REPLACEMENT_CHARACTER);
                offsets.push(pos);
                pos += chunk.invalid().len();
                lossy = true;
            }
        }
        Decoded {
            chars,
            offsets,
            byte_len: bytes.len(),
            lossy,
        }
    }

    /// Byte offset of character `i`; the input length for `i == chars.len()`.
    pub fn byte_offset(&self, i: usize) -> usize {
        self.offsets.get(i).copied().unwrap_or(self.byte_len)
    }

    /// Whether the input was valid UTF-8.
    pub fn is_lossless(&self) -> bool {
        !self.lossy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_follow_utf8_widths() {
        let d = Decoded::new("aé€😀".as_bytes());
        assert_eq!(d.chars, ['a', 'é', '€', '😀']);
        assert_eq!((0..=4).map(|i| d.byte_offset(i)).collect::<Vec<_>>(), [0, 1, 3, 6, 10]);
    }

    #[test]
    fn invalid_bytes_become_replacement_characters() {
        let d = Decoded::new(b"a\xffb\xe2\x82");
        assert_eq!(d.chars, ['a', '\u{fffd}', 'b', '\u{fffd}']);
        assert_eq!(d.byte_offset(2), 2);
        assert_eq!(d.byte_offset(3), 3);
        assert_eq!(d.byte_offset(4), 5);
        assert!(!d.is_lossless());
        assert!(Decoded::new("x\u{fffd}".as_bytes()).is_lossless());
    }
}
