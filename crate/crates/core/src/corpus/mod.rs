//! Text corpora: ingest, normalization, splitting, word tokenization and
//! Markov entropy estimation.

mod alphabet;
mod markov;
pub mod synth;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use alphabet::{decode_fixed5, encode_fixed5, normalize, Alphabet32, AlphabetPolicy, SYMBOLS};
pub use markov::{markov_entropy, MarkovModel, DEFAULT_SMOOTHING};

use crate::{Error, Result};

/// Byte that separates documents when a corpus is flattened.
pub const DOCUMENT_SEPARATOR: u8 = 0x00;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: String,
    text: Vec<u8>,
}

impl Document {
    /// Builds a document from raw text, normalizing it under `policy`.
    pub fn new(id: impl Into<String>, raw: &str, policy: AlphabetPolicy) -> Result<Self> {
        let id = id.into();
        let text = normalize(raw, policy).map_err(|offending| Error::OutOfAlphabet {
            id: id.clone(),
            offending,
        })?;
        if text.is_empty() {
            return Err(Error::EmptyInput("document text"));
        }
        Ok(Self { id, text })
    }

    /// Builds a document from arbitrary bytes without normalization. Used for
    /// byte-level experiments (random data, binary payloads); such documents
    /// cannot be carried by the fixed 5-bit code.
    pub fn raw(id: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let text = bytes.into();
        if text.is_empty() {
            return Err(Error::EmptyInput("document text"));
        }
        Ok(Self { id: id.into(), text })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn char_count(&self) -> usize {
        self.text.len()
    }

    pub fn word_count(&self) -> usize {
        tokenize_words(&self.text).len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusRole {
    Knowledge,
    Test,
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    role: CorpusRole,
}

impl Corpus {
    pub fn new(documents: Vec<Document>, role: CorpusRole) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(Self { documents, role })
    }

    /// A corpus with no documents. Only meaningful as an empty knowledge base.
    pub fn empty(role: CorpusRole) -> Self {
        Self { documents: Vec::new(), role }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn role(&self) -> CorpusRole {
        self.role
    }

    pub fn with_role(mut self, role: CorpusRole) -> Self {
        self.role = role;
        self
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn char_count(&self) -> usize {
        self.documents.iter().map(Document::char_count).sum()
    }

    /// Documents in corpus order joined by [`DOCUMENT_SEPARATOR`].
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.char_count() + self.documents.len());
        for (i, d) in self.documents.iter().enumerate() {
            if i > 0 {
                out.push(DOCUMENT_SEPARATOR);
            }
            out.extend_from_slice(&d.text);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    /// One document per `.txt` file in a directory (or a single file).
    #[default]
    PerFile,
    /// One document per non-blank line of a single file.
    PerLine,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub mode: LoadMode,
    pub policy: AlphabetPolicy,
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    String::from_utf8(bytes).map_err(|_| Error::NotUtf8 { path: path.to_path_buf() })
}

/// Reads a corpus from disk. Directories are read as one document per `.txt`
/// file in lexicographic filename order; blank documents are skipped.
pub fn load_corpus(path: impl AsRef<Path>, role: CorpusRole, options: LoadOptions) -> Result<Corpus> {
    let path = path.as_ref();
    let meta = fs::metadata(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut documents = Vec::new();
    let mut add = |id: String, raw: &str| -> Result<()> {
        match Document::new(id, raw, options.policy) {
            Ok(d) => documents.push(d),
            Err(Error::EmptyInput(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(())
    };

    if meta.is_dir() {
        if options.mode == LoadMode::PerLine {
            return Err(Error::InvalidParameter("line mode needs a single file".into()));
        }
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
        for file in files {
            let id = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            add(id, &read_text(&file)?)?;
        }
    } else {
        let text = read_text(path)?;
        match options.mode {
            LoadMode::PerFile => {
                let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                add(id, &text)?;
            }
            LoadMode::PerLine => {
                for (i, line) in text.lines().enumerate() {
                    add(format!("line-{:06}", i + 1), line)?;
                }
            }
        }
    }
    Corpus::new(documents, role)
}

/// Seeded partition into (knowledge base, test set). The test set gets
/// `round(test_fraction * N)` documents clamped to `[1, N-1]`; both halves
/// keep the original corpus order.
pub fn split_corpus(corpus: &Corpus, test_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    let n = corpus.len();
    if n < 2 {
        return Err(Error::TooFewDocuments(n));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("test fraction {test_fraction} not in (0,1)")));
    }
    let n_test = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut is_test = vec![false; n];
    for &i in &order[..n_test] {
        is_test[i] = true;
    }
    let (test, knowledge): (Vec<_>, Vec<_>) = corpus
        .documents
        .iter()
        .cloned()
        .zip(is_test)
        .partition(|(_, t)| *t);
    let strip = |v: Vec<(Document, bool)>| v.into_iter().map(|(d, _)| d).collect();
    Ok((
        Corpus { documents: strip(knowledge), role: CorpusRole::Knowledge },
        Corpus { documents: strip(test), role: CorpusRole::Test },
    ))
}

/// Splits on runs of whitespace; punctuation stays attached to its word.
pub fn tokenize_words(text: &[u8]) -> Vec<&[u8]> {
    text.split(|b| b.is_ascii_whitespace()).filter(|w| !w.is_empty()).collect()
}

/// Character spans `(start, end)` of each word, aligned with [`tokenize_words`].
pub fn word_spans(text: &[u8]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, b) in text.iter().enumerate() {
        match (b.is_ascii_whitespace(), start) {
            (true, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn corpus_of(n: usize) -> Corpus {
        let docs = (0..n).map(|i| Document::new(format!("d{i:02}"), "some text", AlphabetPolicy::Lenient).unwrap());
        Corpus::new(docs.collect(), CorpusRole::Knowledge).unwrap()
    }

    #[test]
    fn loads_directory_in_filename_order() {
        let dir = tempfile::tempdir().unwrap();
        for (name, body) in [("b.txt", "second"), ("a.txt", "first"), ("c.txt", "third"), ("skip.md", "nope")] {
            fs::File::create(dir.path().join(name)).unwrap().write_all(body.as_bytes()).unwrap();
        }
        let c = load_corpus(dir.path(), CorpusRole::Knowledge, LoadOptions::default()).unwrap();
        let ids: Vec<_> = c.documents().iter().map(Document::id).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(c.documents()[0].text(), b"first");
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_corpus(dir.path(), CorpusRole::Test, LoadOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "empty corpus");
    }

    #[test]
    fn strict_mode_reports_offending_characters() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("x.txt"), "Hello, World").unwrap();
        let opts = LoadOptions { policy: AlphabetPolicy::Strict, ..Default::default() };
        match load_corpus(dir.path(), CorpusRole::Test, opts) {
            Err(Error::OutOfAlphabet { offending, .. }) => assert_eq!(offending, vec!['H', 'W']),
            other => panic!("expected alphabet error, got {other:?}"),
        }
    }

    #[test]
    fn line_mode_skips_blank_lines() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("lines.txt");
        fs::write(&file, "one doc\n\n two  doc \n").unwrap();
        let opts = LoadOptions { mode: LoadMode::PerLine, ..Default::default() };
        let c = load_corpus(&file, CorpusRole::Test, opts).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents()[1].text(), b"two doc");
    }

    #[test]
    fn split_sizes_and_clamping() {
        let c = corpus_of(10);
        let (k, t) = split_corpus(&c, 0.2, 7).unwrap();
        assert_eq!((k.len(), t.len()), (8, 2));
        let (k, t) = split_corpus(&c, 0.01, 7).unwrap();
        assert_eq!((k.len(), t.len()), (9, 1));
        let (k, t) = split_corpus(&c, 0.99, 7).unwrap();
        assert_eq!((k.len(), t.len()), (1, 9));
        assert_eq!(split_corpus(&c, 0.2, 7).unwrap(), split_corpus(&c, 0.2, 7).unwrap());
    }

    #[test]
    fn split_needs_two_documents() {
        assert!(matches!(split_corpus(&corpus_of(1), 0.5, 0), Err(Error::TooFewDocuments(1))));
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(tokenize_words(b"the cat sat"), vec![&b"the"[..], b"cat", b"sat"]);
        assert!(tokenize_words(b"").is_empty());
        let words = tokenize_words(b"a  b");
        assert_eq!(words.join(&b' '), b"a b");
        assert_eq!(word_spans(b" ab cd"), vec![(1, 3), (4, 6)]);
    }

    #[test]
    fn serialize_uses_separator() {
        let c = corpus_of(2);
        assert_eq!(c.serialize(), b"some text\0some text");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn split_is_a_partition(n in 2usize..40, frac in 0.01f64..0.99, seed in any::<u64>()) {
                let c = corpus_of(n);
                let (k, t) = split_corpus(&c, frac, seed).unwrap();
                prop_assert_eq!(k.len() + t.len(), n);
                let mut ids: Vec<_> = k.documents().iter().chain(t.documents()).map(|d| d.id().to_owned()).collect();
                ids.sort();
                let mut all: Vec<_> = c.documents().iter().map(|d| d.id().to_owned()).collect();
                all.sort();
                prop_assert_eq!(ids, all);
            }

            #[test]
            fn tokenize_is_idempotent(s in "[a-z .,'?-]{0,80}") {
                let norm = normalize(&s, AlphabetPolicy::Lenient).unwrap();
                let joined = tokenize_words(&norm).join(&b' ');
                prop_assert_eq!(&joined, &norm);
                prop_assert_eq!(tokenize_words(&joined).join(&b' '), joined.clone());
            }
        }
    }
}
