//! Seeded generators for sample corpora.
//!
//! The generators produce English-like prose in three registers (press
//! releases, legislation, fiction) from small grammars with Zipf-weighted
//! vocabularies. They exist so that examples and tests can run without
//! shipping third-party text; real corpora are read with
//! [`load_corpus`](super::load_corpus).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlphabetPolicy, Corpus, CorpusRole, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Genre {
    Press,
    Legislative,
    Novel,
}

impl Genre {
    pub const ALL: [Genre; 3] = [Genre::Press, Genre::Legislative, Genre::Novel];

    pub fn name(self) -> &'static str {
        match self {
            Genre::Press => "press",
            Genre::Legislative => "legislative",
            Genre::Novel => "novel",
        }
    }

    fn grammar(self) -> &'static Grammar {
        match self {
            Genre::Press => &PRESS,
            Genre::Legislative => &LEGISLATIVE,
            Genre::Novel => &NOVEL,
        }
    }
}

struct Grammar {
    templates: &'static [&'static str],
    slots: &'static [(&'static str, &'static [&'static str])],
    sentences_per_paragraph: (usize, usize),
}

const NUMBERS: &[&str] = &[
    "two", "three", "four", "five", "six", "ten", "twelve", "twenty", "forty", "fifty", "one hundred",
    "several", "eight", "nine", "seven", "thirty", "sixty", "eleven", "fifteen", "ninety",
];

const PRESS: Grammar = Grammar {
    templates: &[
        "the {org} announced on {day} that it will {pverb} {num} new {pnoun} in {place}.",
        "according to the {org}, the {pnoun} will {pverb} more than {num} {pnoun} by the end of the year.",
        "{title} {name} said the {adj} {pnoun} would help {group} across {place}.",
        "the {adj} {pnoun} is expected to {pverb} {num} {pnoun} over the next {num} years.",
        "in a statement released on {day}, the {org} said it remains committed to {gerund} {adj} {pnoun}.",
        "\"we are proud to {pverb} this {adj} {pnoun},\" said {title} {name}, {role} of the {org}.",
        "the {org} and the {org} will jointly {pverb} the {pnoun} in {place}.",
        "the announcement follows a {adj} review of {pnoun} by the {org}.",
        "for more information, {group} may contact the {org} press office.",
        "officials in {place} welcomed the decision, calling it a {adj} step for {group}.",
        "the program will be funded by {num} million in {adj} {pnoun}.",
        "the {org} will hold a public meeting in {place} on {day} to discuss the {pnoun}.",
    ],
    slots: &[
        ("org", &["department of health", "city council", "ministry of transport", "national agency", "regional authority", "company", "board of directors", "university", "foundation", "commission", "office of the mayor", "water board"]),
        ("day", &["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"]),
        ("pverb", &["launch", "expand", "support", "deliver", "invest in", "build", "improve", "fund", "review", "introduce", "create", "strengthen", "upgrade", "open"]),
        ("pnoun", &["program", "services", "jobs", "projects", "schools", "roads", "clinics", "facilities", "grants", "initiative", "partnership", "plan", "network", "centers", "homes", "training places", "contracts", "stations"]),
        ("place", &["the north", "the capital", "rural areas", "the eastern region", "the city center", "coastal towns", "the valley", "the southern districts", "local communities", "the harbor"]),
        ("title", &["minister", "director", "chairman", "mayor", "president", "secretary", "spokesperson"]),
        ("name", &["smith", "jones", "brown", "taylor", "wilson", "davies", "evans", "thomas", "roberts", "walker", "wright", "hall", "green"]),
        ("adj", &["new", "major", "important", "national", "local", "significant", "historic", "sustainable", "public", "modern", "regional", "additional", "innovative", "essential"]),
        ("group", &["families", "residents", "businesses", "students", "patients", "workers", "young people", "older people", "farmers", "small firms"]),
        ("gerund", &["improving", "supporting", "delivering", "expanding", "protecting", "building"]),
        ("role", &["head", "chief executive", "chair", "director", "founder"]),
        ("num", NUMBERS),
    ],
    sentences_per_paragraph: (3, 6),
};

const LEGISLATIVE: Grammar = Grammar {
    templates: &[
        "section {num}. the {authority} shall {lverb} the {lnoun} in accordance with subsection {letter}.",
        "no person shall {lverb} any {lnoun} except under a {lnoun} issued by the {authority}.",
        "for the purposes of this {instrument}, {lnoun} means any {lnoun} described in section {num}.",
        "the {authority} may, by order, {lverb} the {lnoun} referred to in paragraph {letter}.",
        "a person who fails to comply with section {num} commits an offence and is liable to a fine.",
        "subject to subsection {letter}, the {authority} shall {lverb} the {lnoun} within {num} days.",
        "this {instrument} shall come into force on the day on which it is made.",
        "nothing in this section shall affect the {lnoun} of the {authority}.",
        "the {authority} shall publish the {lnoun} in such manner as it thinks fit.",
        "where the {authority} is satisfied that the {lnoun} is not required, it may {lverb} the {lnoun}.",
    ],
    slots: &[
        ("authority", &["secretary of state", "minister", "commission", "authority", "court", "council", "board"]),
        ("lverb", &["approve", "revoke", "amend", "register", "issue", "suspend", "publish", "determine", "consider", "vary"]),
        ("lnoun", &["licence", "register", "notice", "application", "order", "regulations", "premises", "scheme", "determination", "certificate", "powers", "duties"]),
        ("instrument", &["act", "part", "order", "schedule", "regulation"]),
        ("letter", &["a", "b", "c", "d", "e", "one", "two", "three"]),
        ("num", NUMBERS),
    ],
    sentences_per_paragraph: (2, 5),
};

const NOVEL: Grammar = Grammar {
    templates: &[
        "{cname} {nverb} {prep} the {nadj} {nnoun}, {gerund} {adv}.",
        "\"{quote},\" said {cname}, {gerund} at the {nnoun}.",
        "the {nnoun} was {nadj} and {nadj}, and {cname} could not {base} what {pronoun} had seen.",
        "it was {time} when {cname} finally {nverb} {prep} the {nnoun}.",
        "{pronoun} {nverb} {adv}, as though the {nnoun} itself might {base}.",
        "{cname} remembered the {nadj} {nnoun} of {pronoun2} childhood, and the {nnoun} by the {nnoun}.",
        "somewhere beyond the {nnoun} a {nanimal} {nsound}, and {cname} {nverb} {prep} the {nnoun}.",
        "\"do you think {pronoun} will {base}?\" asked {cname}.",
        "there was nothing to do but wait, so {cname} {nverb} {prep} the {nnoun} and {nverb} {adv}.",
        "the {nadj} light of {time} fell across the {nnoun}, and for a moment everything was {nadj}.",
        "{cname} and {cname} {nverb} together {prep} the {nadj} {nnoun}, saying nothing.",
        "{pronoun} had never {past} anything so {nadj} in all {pronoun2} life.",
        "the {nanimal} {nsound} again, {adv} this time, and {cname} {nverb}.",
        "when the {nnoun} {nsound}, {cname} knew that something had changed.",
    ],
    slots: &[
        ("cname", &["elizabeth", "thomas", "margaret", "the old man", "the captain", "anna", "william", "the girl", "her mother", "james", "the stranger", "catherine", "robert", "the doctor", "mary", "edward", "the boy", "lucy", "arthur", "the widow", "henry", "jane", "the sailor", "charlotte"]),
        ("nverb", &["walked", "turned", "looked", "ran", "stood", "waited", "crept", "hurried", "paused", "wandered", "stared", "leaned", "climbed", "stumbled", "knelt", "glanced", "drifted", "listened"]),
        ("prep", &["toward", "across", "beneath", "beside", "through", "along", "over", "past", "into", "around", "behind", "near"]),
        ("nadj", &["dark", "silent", "cold", "ancient", "narrow", "golden", "empty", "quiet", "strange", "distant", "broken", "pale", "grey", "warm", "heavy", "bright", "endless", "faded", "hollow", "gentle", "bitter", "lonely", "crooked", "misty"]),
        ("nnoun", &["house", "window", "river", "garden", "door", "forest", "road", "sea", "hill", "fire", "room", "letter", "candle", "bridge", "church", "field", "ship", "wall", "stair", "lamp", "orchard", "moor", "harbor", "well", "gate", "meadow", "chapel", "tower", "cottage", "lane"]),
        ("gerund", &["smiling", "trembling", "looking", "laughing", "whispering", "frowning", "sighing", "nodding", "staring", "weeping"]),
        ("adv", &["slowly", "quietly", "suddenly", "carefully", "softly", "at last", "again", "without a word", "almost", "gently", "sadly", "once more"]),
        ("base", &["understand", "forget", "return", "forgive", "believe", "remember", "explain", "escape", "speak", "stay"]),
        ("past", &["seen", "heard", "known", "felt", "wanted", "feared", "loved", "imagined"]),
        ("pronoun", &["she", "he", "they"]),
        ("pronoun2", &["her", "his", "their"]),
        ("time", &["morning", "evening", "midnight", "dusk", "dawn", "late afternoon", "winter", "the end of summer"]),
        ("nanimal", &["dog", "horse", "owl", "crow", "fox", "cat", "gull", "wolf"]),
        ("nsound", &["barked", "called", "cried", "howled", "stirred", "creaked", "sang", "fell silent"]),
        ("quote", &["i cannot stay here", "it is too late now", "you must go at once", "have you seen him", "we shall see", "i knew it would come to this", "do not be afraid", "where have you been", "it was not my fault", "listen to me", "there is no one left", "come inside, it is cold"]),
    ],
    sentences_per_paragraph: (4, 9),
};

/// Index drawn with probability proportional to 1/(rank+1).
fn zipf(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let h: f64 = (1..=n).map(|r| 1.0 / r as f64).sum();
    let mut u = rng.random::<f64>() * h;
    for r in 0..n {
        u -= 1.0 / (r + 1) as f64;
        if u <= 0.0 {
            return r;
        }
    }
    n - 1
}

fn sentence(grammar: &Grammar, rng: &mut ChaCha8Rng, out: &mut String) {
    let template = grammar.templates[zipf(rng, grammar.templates.len())];
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = open + rest[open..].find('}').expect("unbalanced template");
        let slot = &rest[open + 1..close];
        let words = grammar
            .slots
            .iter()
            .find(|(name, _)| *name == slot)
            .map(|(_, w)| *w)
            .unwrap_or_else(|| panic!("unknown slot {slot}"));
        out.push_str(words[zipf(rng, words.len())]);
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
}

/// Generates roughly `target_chars` characters of `genre` prose. The raw
/// text contains double quotes and line breaks that normalization removes.
pub fn generate_text(genre: Genre, seed: u64, target_chars: usize) -> String {
    let grammar = genre.grammar();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::with_capacity(target_chars + 256);
    while out.len() < target_chars {
        let (lo, hi) = grammar.sentences_per_paragraph;
        for _ in 0..rng.random_range(lo..=hi) {
            sentence(grammar, &mut rng, &mut out);
            out.push(' ');
        }
        out.push('\n');
    }
    out
}

/// A corpus of `docs` documents of about `chars_per_doc` characters each.
pub fn generate_corpus(genre: Genre, seed: u64, docs: usize, chars_per_doc: usize) -> Corpus {
    let documents = (0..docs)
        .map(|i| {
            let raw = generate_text(genre, crate::seed::derive(seed, &[i as u64]), chars_per_doc);
            Document::new(format!("{}-{:04}", genre.name(), i), &raw, AlphabetPolicy::Lenient)
                .expect("generated text is never empty")
        })
        .collect();
    Corpus::new(documents, CorpusRole::Knowledge).expect("generated ids are unique")
}

/// Text from a random first-order Markov chain over a seeded subset of the
/// alphabet, with skewed transition rows.
pub fn markov_text(seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.random_range(2..=12usize);
    let symbols = &super::SYMBOLS[..size];
    let rows: Vec<Vec<f64>> = (0..size)
        .map(|_| {
            let w: Vec<f64> = (0..size).map(|_| rng.random::<f64>().powi(3)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
        .collect();
    let mut state = 0;
    (0..len)
        .map(|_| {
            let mut u = rng.random::<f64>();
            let mut next = size - 1;
            for (j, &p) in rows[state].iter().enumerate() {
                u -= p;
                if u <= 0.0 {
                    next = j;
                    break;
                }
            }
            state = next;
            symbols[next]
        })
        .collect()
}

/// Uniform random bytes.
pub fn random_bytes(seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0u8; len];
    rng.fill(&mut out[..]);
    out
}
