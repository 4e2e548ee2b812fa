//! Compressor-based semantic compression bounds and coded text transmission.
//!
//! The crate has two halves. The first estimates how many bits per character
//! a test corpus needs once a shared knowledge base is available to both ends
//! of a link: real compressors stand in for descriptive complexity, and the
//! normalized conditional complexity (NCC) is the expected extra code length
//! per character of a test sequence given the knowledge base.
//!
//! The second half simulates reliable text transmission: a source coder
//! (fixed 5-bit, Huffman, deflate, or a knowledge-primed context model), a
//! channel code (Reed-Solomon over GF(2^8) or LDPC with belief propagation),
//! BPSK over AWGN, and a parity optimizer that finds the cheapest code meeting
//! a word-error-rate target at each SNR.
//!
//! ```
//! use semcomp::compressor::{measure, CompressorId};
//!
//! let m = measure(CompressorId::Fixed5, b"abc", None).unwrap();
//! assert_eq!(m.output_bits, 15);
//! ```

pub mod channel;
pub mod compressor;
pub mod corpus;
pub mod error;
pub mod fec;
pub mod ncc;
pub mod pipeline;
pub mod seed;

pub use error::{Error, Result};
