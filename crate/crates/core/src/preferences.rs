//! Binary preference features and their weighted score.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Index;
use std::path::Path;

use crate::candidates::{scope_window, name_occurrences, Candidate, Context};
use crate::dictionary::read_utf8;
use crate::error::{Error, Result};
use crate::morph::is_nominative;
use crate::text::{Document, PronounMention};

/// The eight preferences, in serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    /// Pronoun and candidate are both quoted or both unquoted.
    QuotedText,
    /// Candidate lies in the most recent sentence holding any survivor.
    Recency,
    NominativeCase,
    /// Candidate opens its sentence.
    FirstNp,
    /// Candidate carries a copular suffix.
    PredicateNominal,
    /// Candidate's name occurs at least twice in the search scope.
    Repetition,
    /// Candidate is followed by a comma.
    Punctuation,
    /// Zero pronoun whose candidate antecedes an earlier zero pronoun.
    ZeroAntecedent,
}

impl Preference {
    pub const ALL: [Preference; 8] = [
        Preference::QuotedText,
        Preference::Recency,
        Preference::NominativeCase,
        Preference::FirstNp,
        Preference::PredicateNominal,
        Preference::Repetition,
        Preference::Punctuation,
        Preference::ZeroAntecedent,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Preference::QuotedText => "quoted_text",
            Preference::Recency => "recency",
            Preference::NominativeCase => "nominative_case",
            Preference::FirstNp => "first_np",
            Preference::PredicateNominal => "predicate_nominal",
            Preference::Repetition => "repetition",
            Preference::Punctuation => "punctuation",
            Preference::ZeroAntecedent => "zero_antecedent",
        }
    }

    fn from_key(key: &str) -> Option<Self> {
        Preference::ALL.into_iter().find(|p| p.key() == key)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PreferenceVector(pub [bool; 8]);

impl PreferenceVector {
    pub fn set(&mut self, preference: Preference, value: bool) {
        self.0[preference.slot()] = value;
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// `1`/`0` string in preference order.
    pub fn bits(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bits(bits: &str) -> Option<Self> {
        let mut v = [false; 8];
        let chars: Vec<char> = bits.chars().collect();
        if chars.len() != 8 {
            return None;
        }
        for (slot, c) in v.iter_mut().zip(chars) {
            *slot = match c {
                '1' => true,
                '0' => false,
                _ => return None,
            };
        }
        Some(PreferenceVector(v))
    }

    pub fn as_f64(&self) -> [f64; 8] {
        self.0.map(|b| if b { 1.0 } else { 0.0 })
    }
}

impl Index<Preference> for PreferenceVector {
    type Output = bool;

    fn index(&self, preference: Preference) -> &bool {
        &self.0[preference.slot()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceWeights(pub [f64; 8]);

/// Optimized scores shipped as the defaults.
pub const DEFAULT_WEIGHTS: [f64; 8] = [2.20, 2.15, 1.85, 1.40, 1.20, 1.20, 1.15, 1.05];

impl Default for PreferenceWeights {
    fn default() -> Self {
        PreferenceWeights(DEFAULT_WEIGHTS)
    }
}

impl Index<Preference> for PreferenceWeights {
    type Output = f64;

    fn index(&self, preference: Preference) -> &f64 {
        &self.0[preference.slot()]
    }
}

impl PreferenceWeights {
    pub fn uniform(value: f64) -> Self {
        PreferenceWeights([value; 8])
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PreferenceWeights(self.0.map(|w| w * factor))
    }

    /// Parses `name = value` lines; all eight names are required.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut values: [Option<f64>; 8] = [None; 8];
        let mut last_line = 0;
        for (n, line) in text.lines().enumerate() {
            last_line = n + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::data(origin, n + 1, "expected `name = value`"))?;
            let key = key.trim();
            let pref =
                Preference::from_key(key).ok_or_else(|| Error::data(origin, n + 1, format!("unknown preference {key:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::data(origin, n + 1, format!("invalid number {:?}", value.trim())))?;
            if !value.is_finite() {
                return Err(Error::data(origin, n + 1, "weight must be finite"));
            }
            if values[pref.slot()].replace(value).is_some() {
                return Err(Error::data(origin, n + 1, format!("duplicate preference {key:?}")));
            }
        }
        let mut weights = [0.0; 8];
        for (pref, value) in Preference::ALL.into_iter().zip(values) {
            weights[pref.slot()] =
                value.ok_or_else(|| Error::data(origin, last_line, format!("missing preference {:?}", pref.key())))?;
        }
        Ok(PreferenceWeights(weights))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_utf8(path)?, &path.display().to_string())
    }
}

impl fmt::Display for PreferenceWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pref in Preference::ALL {
            let value = format!("{:.6}", self[pref]);
            let value = value.trim_end_matches('0').trim_end_matches('.');
            writeln!(f, "{} = {}", pref.key(), if value == "-" { "0" } else { value })?;
        }
        Ok(())
    }
}

/// Sum of the weights of the satisfied preferences.
pub fn score(vector: &PreferenceVector, weights: &PreferenceWeights) -> f64 {
    vector
        .0
        .iter()
        .zip(weights.0)
        .filter(|(on, _)| **on)
        .map(|(_, w)| w)
        .sum()
}

/// Antecedents chosen for zero pronouns so far in one document pass.
#[derive(Debug, Clone, Default)]
pub struct ResolutionHistory {
    entries: Vec<(BTreeSet<String>, usize)>,
}

impl ResolutionHistory {
    pub fn record(&mut self, antecedent: BTreeSet<String>, sentence: usize) {
        self.entries.push((antecedent, sentence));
    }

    /// Whether `antecedent` resolved a zero pronoun in a sentence before `sentence`.
    pub fn antecedes_before(&self, antecedent: &BTreeSet<String>, sentence: usize) -> bool {
        self.entries.iter().any(|(a, s)| a == antecedent && *s < sentence)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Per-pronoun state shared by the feature computations of its candidates.
pub struct FeatureContext<'a> {
    doc: &'a Document,
    pronoun: &'a PronounMention,
    history: &'a ResolutionHistory,
    pronoun_quoted: bool,
    pronoun_sentence: usize,
    recent_sentence: Option<usize>,
    name_counts: HashMap<String, usize>,
}

impl<'a> FeatureContext<'a> {
    pub fn new(
        doc: &'a Document,
        pronoun: &'a PronounMention,
        survivors: &[Candidate],
        history: &'a ResolutionHistory,
        ctx: &Context,
    ) -> Self {
        let mut name_counts = HashMap::new();
        for occ in name_occurrences(doc, scope_window(doc, pronoun, ctx.scope), ctx) {
            *name_counts.entry(occ.base).or_insert(0) += 1;
        }
        FeatureContext {
            doc,
            pronoun,
            history,
            pronoun_quoted: doc.tokens()[pronoun.position].quoted,
            pronoun_sentence: doc.pronoun_sentence(pronoun),
            recent_sentence: survivors.iter().map(|c| c.sentence_index).max(),
            name_counts,
        }
    }

    pub fn vector(&self, candidate: &Candidate) -> PreferenceVector {
        let tokens = self.doc.tokens();
        let first = &candidate.members[0];
        let mut v = PreferenceVector::default();
        v.set(
            Preference::QuotedText,
            tokens[candidate.anchor].quoted == self.pronoun_quoted,
        );
        v.set(Preference::Recency, Some(candidate.sentence_index) == self.recent_sentence);
        v.set(Preference::NominativeCase, candidate.members.iter().all(is_nominative));
        v.set(
            Preference::FirstNp,
            self.doc.first_content_token(candidate.sentence_index) == Some(first.token_index),
        );
        v.set(Preference::PredicateNominal, candidate.members.iter().any(|m| m.copular_suffix));
        v.set(
            Preference::Repetition,
            candidate
                .members
                .iter()
                .all(|m| self.name_counts.get(&m.base).copied().unwrap_or(0) >= 2),
        );
        v.set(Preference::Punctuation, tokens[candidate.anchor].followed_by_comma);
        v.set(
            Preference::ZeroAntecedent,
            self.pronoun.is_zero() && self.history.antecedes_before(&candidate.bases(), self.pronoun_sentence),
        );
        v
    }
}

/// Preference vector of one surviving candidate.
pub fn feature_vector(
    doc: &Document,
    pronoun: &PronounMention,
    candidate: &Candidate,
    survivors: &[Candidate],
    history: &ResolutionHistory,
    ctx: &Context,
) -> PreferenceVector {
    FeatureContext::new(doc, pronoun, survivors, history, ctx).vector(candidate)
}

/// Index of the highest score; among (relative) ties the last index wins.
/// Callers order candidates from oldest to most recent.
pub fn select_best(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        match best {
            Some(b) if s < scores[b] && !nearly_equal(s, scores[b]) => {}
            _ => best = Some(i),
        }
    }
    best
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}
