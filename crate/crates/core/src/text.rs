//! Tokenized, sentence-segmented document model.
//!
//! Tokenization is whitespace based. Commas, double quotes and sentence
//! terminators become tokens of their own; a run of terminators (`...`, `?!`)
//! is a single token. Apostrophes stay inside words so that a proper name and
//! its case suffix (`Ali'yi`) remain one token.
//!
//! Every token remembers the whitespace that preceded it, which lets the
//! corpus serializer reproduce the input byte for byte.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

const TERMINATORS: [char; 4] = ['.', '!', '?', '…'];
const QUOTES: [char; 3] = ['"', '“', '”'];

pub fn is_terminator(c: char) -> bool {
    TERMINATORS.contains(&c)
}

pub fn is_quote(c: char) -> bool {
    QUOTES.contains(&c)
}

fn is_split_char(c: char) -> bool {
    c == ',' || is_terminator(c) || is_quote(c)
}

/// True for tokens made only of punctuation (commas, quotes, terminators).
pub fn is_punctuation(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(is_split_char)
}

fn is_terminator_token(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(is_terminator)
}

fn is_quote_token(surface: &str) -> bool {
    let mut chars = surface.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if is_quote(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub index: usize,
    pub sentence_index: usize,
    /// Strictly inside a double-quote span; the quote marks themselves are not.
    pub quoted: bool,
    pub followed_by_comma: bool,
    /// Whitespace between the previous token (or tag) and this token.
    pub leading: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sentence {
    pub index: usize,
    /// Inclusive token range.
    pub first: usize,
    pub last: usize,
}

impl Sentence {
    pub fn contains(&self, token: usize) -> bool {
        self.first <= token && token <= self.last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PronounKind {
    Personal,
    Reflexive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Overtness {
    Overt,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounMention {
    pub id: u32,
    pub kind: PronounKind,
    pub number: Number,
    pub overtness: Overtness,
    /// Overt: the pronoun token. Zero: the token the marker precedes.
    pub position: usize,
    /// Empty for zero pronouns.
    pub surface: String,
    pub gold: Option<BTreeSet<String>>,
    /// Whitespace before a zero marker. Unused for overt pronouns, whose
    /// leading whitespace lives on the token.
    pub leading: String,
}

impl PronounMention {
    pub fn is_zero(&self) -> bool {
        self.overtness == Overtness::Zero
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawToken {
    pub surface: String,
    pub leading: String,
}

/// Incremental tokenizer fed with the plain-text stretches between tags.
#[derive(Debug, Default)]
pub(crate) struct TokenBuilder {
    tokens: Vec<RawToken>,
    pending_ws: String,
    zero_pending: bool,
}

impl TokenBuilder {
    pub fn push_text(&mut self, text: &str) {
        let mut word = String::new();
        for c in text.chars() {
            if c.is_whitespace() {
                self.flush_word(&mut word);
                self.pending_ws.push(c);
            } else if is_split_char(c) {
                self.flush_word(&mut word);
                let glued = self.pending_ws.is_empty() && !self.zero_pending;
                match self.tokens.last_mut() {
                    Some(last) if glued && is_terminator(c) && is_terminator_token(&last.surface) => {
                        last.surface.push(c)
                    }
                    _ => self.push_token(c.to_string()),
                }
            } else {
                word.push(c);
            }
        }
        self.flush_word(&mut word);
    }

    fn flush_word(&mut self, word: &mut String) {
        if !word.is_empty() {
            let surface = std::mem::take(word);
            self.push_token(surface);
        }
    }

    /// Appends a token verbatim (used for the content of overt pronoun tags).
    pub fn push_token(&mut self, surface: String) {
        let leading = std::mem::take(&mut self.pending_ws);
        self.tokens.push(RawToken { surface, leading });
        self.zero_pending = false;
    }

    /// Registers a zero marker; returns (position, leading whitespace).
    pub fn mark_zero(&mut self) -> (usize, String) {
        self.zero_pending = true;
        (self.tokens.len(), std::mem::take(&mut self.pending_ws))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn finish(self) -> (Vec<RawToken>, String) {
        (self.tokens, self.pending_ws)
    }
}

/// Splits plain text into surface tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut builder = TokenBuilder::default();
    builder.push_text(text);
    builder.finish().0.into_iter().map(|t| t.surface).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    tokens: Vec<Token>,
    sentences: Vec<Sentence>,
    pronouns: Vec<PronounMention>,
    trailing: String,
}

impl Document {
    /// Builds a document from plain text without annotations.
    pub fn from_text(text: &str) -> Self {
        let mut builder = TokenBuilder::default();
        builder.push_text(text);
        let (raw, trailing) = builder.finish();
        Self::assemble(raw, Vec::new(), trailing)
    }

    pub(crate) fn assemble(raw: Vec<RawToken>, pronouns: Vec<PronounMention>, trailing: String) -> Self {
        let mut tokens: Vec<Token> = raw
            .into_iter()
            .enumerate()
            .map(|(index, t)| Token {
                surface: t.surface,
                index,
                sentence_index: 0,
                quoted: false,
                followed_by_comma: false,
                leading: t.leading,
            })
            .collect();
        let sentences = segment(&tokens);
        for s in &sentences {
            for t in &mut tokens[s.first..=s.last] {
                t.sentence_index = s.index;
            }
        }
        mark_quotes(&mut tokens, &sentences);
        let mut doc = Document {
            tokens,
            sentences,
            pronouns,
            trailing,
        };
        doc.refresh_commas();
        doc
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn pronouns(&self) -> &[PronounMention] {
        &self.pronouns
    }

    pub fn pronoun(&self, id: u32) -> Option<&PronounMention> {
        self.pronouns.iter().find(|p| p.id == id)
    }

    /// Whitespace after the last token.
    pub fn trailing(&self) -> &str {
        &self.trailing
    }

    pub fn token(&self, index: usize) -> Result<&Token> {
        self.tokens.get(index).ok_or(Error::TokenIndex {
            index,
            len: self.tokens.len(),
        })
    }

    pub fn sentence_of(&self, token: usize) -> Result<usize> {
        self.token(token).map(|t| t.sentence_index)
    }

    /// Number of sentence boundaries between two tokens.
    pub fn sentence_distance(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.sentence_of(a)?.abs_diff(self.sentence_of(b)?))
    }

    /// Sentence holding a pronoun (for zero pronouns, the sentence of the
    /// token the marker precedes).
    pub fn pronoun_sentence(&self, pronoun: &PronounMention) -> usize {
        self.tokens[pronoun.position].sentence_index
    }

    /// First token of a sentence that is neither punctuation nor a quote mark.
    pub fn first_content_token(&self, sentence: usize) -> Option<usize> {
        let s = self.sentences.get(sentence)?;
        (s.first..=s.last).find(|&i| !is_punctuation(&self.tokens[i].surface))
    }

    /// Substitutes names for a pronoun: an overt pronoun token is replaced, a
    /// zero marker is filled. Multiple names are joined with `ve`. The pronoun
    /// leaves the pronoun list; segmentation is preserved and later positions
    /// shift accordingly.
    pub fn replace_pronoun(&mut self, id: u32, names: &[String]) -> Result<()> {
        let k = self
            .pronouns
            .iter()
            .position(|p| p.id == id)
            .ok_or(Error::UnknownPronoun(id))?;
        if names.is_empty() {
            return Ok(());
        }
        let pronoun = self.pronouns.remove(k);
        let q = pronoun.position;
        let sentence = self.tokens[q].sentence_index;
        let quoted = self.tokens[q].quoted;

        let (leading, removed) = match pronoun.overtness {
            Overtness::Overt => (self.tokens[q].leading.clone(), 1),
            Overtness::Zero => {
                if self.tokens[q].leading.is_empty() {
                    self.tokens[q].leading.push(' ');
                }
                (pronoun.leading.clone(), 0)
            }
        };

        let mut surfaces = Vec::with_capacity(names.len() * 2);
        for (i, name) in names.iter().enumerate() {
            if i > 0 {
                surfaces.push("ve".to_string());
            }
            surfaces.push(name.clone());
        }
        let inserted: Vec<Token> = surfaces
            .into_iter()
            .enumerate()
            .map(|(i, surface)| Token {
                surface,
                index: 0,
                sentence_index: sentence,
                quoted,
                followed_by_comma: false,
                leading: if i == 0 { leading.clone() } else { " ".to_string() },
            })
            .collect();
        let added = inserted.len();
        self.tokens.splice(q..q + removed, inserted);
        let delta = added - removed;

        for (i, p) in self.pronouns.iter_mut().enumerate() {
            if p.position > q || (p.position == q && i >= k && removed == 0) {
                p.position += delta;
            }
        }
        for (i, t) in self.tokens.iter_mut().enumerate() {
            t.index = i;
        }
        for s in &mut self.sentences[sentence..] {
            if s.index != sentence {
                s.first += delta;
            }
            s.last += delta;
        }
        self.refresh_commas();
        Ok(())
    }

    fn refresh_commas(&mut self) {
        let n = self.tokens.len();
        for i in 0..n {
            let next_is_comma = i + 1 < n && self.tokens[i + 1].surface == ",";
            self.tokens[i].followed_by_comma = next_is_comma;
        }
    }
}

fn segment(tokens: &[Token]) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let n = tokens.len();
    let mut start = 0;
    let mut i = 0;
    while i < n {
        if is_terminator_token(&tokens[i].surface) {
            let mut end = i;
            while end + 1 < n && is_quote_token(&tokens[end + 1].surface) && tokens[end + 1].leading.is_empty() {
                end += 1;
            }
            sentences.push(Sentence {
                index: sentences.len(),
                first: start,
                last: end,
            });
            start = end + 1;
            i = end + 1;
        } else {
            i += 1;
        }
    }
    if start < n {
        sentences.push(Sentence {
            index: sentences.len(),
            first: start,
            last: n - 1,
        });
    }
    sentences
}

/// Pairs quote marks left to right; an unpaired last mark opens a span that
/// runs to the end of its sentence.
fn mark_quotes(tokens: &mut [Token], sentences: &[Sentence]) {
    let marks: Vec<usize> = tokens
        .iter()
        .filter(|t| is_quote_token(&t.surface))
        .map(|t| t.index)
        .collect();
    for pair in marks.chunks(2) {
        let (open, close) = match *pair {
            [open, close] => (open, close),
            [open] => (open, sentences[tokens[open].sentence_index].last + 1),
            _ => unreachable!(),
        };
        for t in &mut tokens[open + 1..close] {
            t.quoted = true;
        }
    }
}
