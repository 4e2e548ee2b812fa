//! The 32-symbol character alphabet and the fixed 5-bit code.

use crate::{Error, Result};

/// 26 lowercase letters, space, and five punctuation marks.
pub const SYMBOLS: [u8; 32] = *b"abcdefghijklmnopqrstuvwxyz .,'?-";

/// How characters outside [`SYMBOLS`] are handled on ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphabetPolicy {
    /// Case-fold, then map anything else outside the alphabet to a space.
    #[default]
    Lenient,
    /// Reject any character outside the alphabet, uppercase included.
    /// Whitespace is still accepted as a word separator.
    Strict,
}

/// Bijection between the 32 symbols and 5-bit indices.
#[derive(Debug, Clone)]
pub struct Alphabet32 {
    index: [Option<u8>; 256],
}

impl Default for Alphabet32 {
    fn default() -> Self {
        Self::new()
    }
}

impl Alphabet32 {
    pub fn new() -> Self {
        let mut index = [None; 256];
        for (i, &s) in SYMBOLS.iter().enumerate() {
            index[s as usize] = Some(i as u8);
        }
        Self { index }
    }

    pub fn contains(&self, byte: u8) -> bool {
        self.index[byte as usize].is_some()
    }

    pub fn code(&self, byte: u8) -> Option<u8> {
        self.index[byte as usize]
    }

    pub fn symbol(&self, code: u8) -> u8 {
        SYMBOLS[(code & 31) as usize]
    }

    /// Packs `text` at 5 bits per character, one bit per `u8` (0 or 1),
    /// most significant bit of each code first.
    pub fn encode(&self, text: &[u8]) -> Result<Vec<u8>> {
        let mut bits = Vec::with_capacity(text.len() * 5);
        for &b in text {
            let code = self.code(b).ok_or_else(|| Error::OutOfAlphabet {
                id: String::new(),
                offending: vec![b as char],
            })?;
            bits.extend((0..5).rev().map(|i| (code >> i) & 1));
        }
        Ok(bits)
    }

    /// Inverse of [`Alphabet32::encode`]. Trailing bits short of a whole
    /// symbol are ignored.
    pub fn decode(&self, bits: &[u8]) -> Vec<u8> {
        bits.chunks_exact(5)
            .map(|c| self.symbol(c.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1))))
            .collect()
    }
}

/// Encodes text with the fixed 5-bit code; see [`Alphabet32::encode`].
pub fn encode_fixed5(text: &[u8], alphabet: &Alphabet32) -> Result<Vec<u8>> {
    alphabet.encode(text)
}

pub fn decode_fixed5(bits: &[u8], alphabet: &Alphabet32) -> Vec<u8> {
    alphabet.decode(bits)
}

/// Normalizes raw text: whitespace runs become one space, leading and
/// trailing whitespace is dropped, and out-of-alphabet characters are either
/// mapped to space (lenient, after case folding) or collected as an error.
pub fn normalize(raw: &str, policy: AlphabetPolicy) -> std::result::Result<Vec<u8>, Vec<char>> {
    let alphabet = Alphabet32::new();
    let mut out = Vec::with_capacity(raw.len());
    let mut offending = Vec::new();
    let push = |out: &mut Vec<u8>, b: u8| {
        if b == b' ' {
            if out.last().is_some_and(|&l| l != b' ') {
                out.push(b' ');
            }
        } else {
            out.push(b);
        }
    };
    for ch in raw.chars() {
        if ch.is_whitespace() {
            push(&mut out, b' ');
            continue;
        }
        match policy {
            AlphabetPolicy::Strict => {
                if ch.is_ascii() && alphabet.contains(ch as u8) {
                    push(&mut out, ch as u8);
                } else if !offending.contains(&ch) {
                    offending.push(ch);
                }
            }
            AlphabetPolicy::Lenient => {
                let mut lower = ch.to_lowercase();
                let folded = match (lower.next(), lower.next()) {
                    (Some(c), None) if c.is_ascii() && alphabet.contains(c as u8) => c as u8,
                    _ => b' ',
                };
                push(&mut out, folded);
            }
        }
    }
    if !offending.is_empty() {
        return Err(offending);
    }
    while out.last() == Some(&b' ') {
        out.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed5_lengths() {
        let a = Alphabet32::new();
        assert_eq!(encode_fixed5(b"abc", &a).unwrap().len(), 15);
        assert!(encode_fixed5(b"", &a).unwrap().is_empty());
        let doc: Vec<u8> = SYMBOLS.iter().cycle().take(1000).copied().collect();
        let bits = encode_fixed5(&doc, &a).unwrap();
        assert_eq!(bits.len(), 5000);
        assert_eq!(decode_fixed5(&bits, &a), doc);
    }

    #[test]
    fn fixed5_rejects_out_of_alphabet() {
        assert!(encode_fixed5(b"ab7", &Alphabet32::new()).is_err());
    }

    #[test]
    fn alphabet_is_a_bijection() {
        let a = Alphabet32::new();
        for code in 0..32u8 {
            assert_eq!(a.code(a.symbol(code)), Some(code));
        }
        assert_eq!((0..=255u8).filter(|&b| a.contains(b)).count(), 32);
    }

    #[test]
    fn lenient_folds_case_and_maps_to_space() {
        assert_eq!(normalize("Hello,  World!\n", AlphabetPolicy::Lenient).unwrap(), b"hello, world");
        assert_eq!(normalize("  x9y  ", AlphabetPolicy::Lenient).unwrap(), b"x y");
    }

    #[test]
    fn strict_lists_offenders() {
        let err = normalize("Hello, World", AlphabetPolicy::Strict).unwrap_err();
        assert_eq!(err, vec!['H', 'W']);
        assert_eq!(normalize("it's a\tdog?", AlphabetPolicy::Strict).unwrap(), b"it's a dog?");
    }
}
