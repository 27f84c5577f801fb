//! Candidate location and the hard constraints.
//!
//! Candidates are proper-name occurrences in the pronoun's sentence (left of
//! the pronoun only) and the preceding sentences of the search scope. Names
//! linked by a bare `ve`/`ile` token also form a plural compound candidate.
//! Plural pronouns without any plural candidate fall back to generated sets:
//! all distinct names of one sentence taken together.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::dictionary::NameDictionary;
use crate::morph::{match_name, turkish_lowercase, Lexicon, NameOccurrence};
use crate::text::{Document, Number, PronounKind, PronounMention};

const CONNECTIVES: [&str; 2] = ["ve", "ile"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchScope {
    /// Preceding sentences searched in addition to the pronoun's own.
    pub max_back_sentences: usize,
}

impl Default for SearchScope {
    fn default() -> Self {
        SearchScope { max_back_sentences: 3 }
    }
}

/// Read-only resources shared by every resolution step.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub dictionary: NameDictionary,
    pub lexicon: Lexicon,
    pub scope: SearchScope,
}

impl Context {
    pub fn new(dictionary: NameDictionary) -> Self {
        Context {
            dictionary,
            ..Context::default()
        }
    }

    pub fn with_scope(mut self, max_back_sentences: usize) -> Self {
        self.scope.max_back_sentences = max_back_sentences;
        self
    }

    pub fn with_lexicon(mut self, lexicon: Lexicon) -> Self {
        self.lexicon = lexicon;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateKind {
    Simple,
    /// Names joined by `ve` or `ile` in the text.
    Compound,
    /// Same-sentence names joined by set generation.
    GeneratedSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// Member names in document order.
    pub members: Vec<NameOccurrence>,
    pub kind: CandidateKind,
    pub number: Number,
    /// Token index of the last member.
    pub anchor: usize,
    pub sentence_index: usize,
    /// A simple candidate that is also a member of a compound.
    pub coordinated: bool,
}

impl Candidate {
    fn simple(occurrence: NameOccurrence, sentence_index: usize, coordinated: bool) -> Self {
        let number = if occurrence.plural_suffix {
            Number::Plural
        } else {
            Number::Singular
        };
        Candidate {
            anchor: occurrence.token_index,
            members: vec![occurrence],
            kind: CandidateKind::Simple,
            number,
            sentence_index,
            coordinated,
        }
    }

    fn group(members: Vec<NameOccurrence>, kind: CandidateKind, sentence_index: usize) -> Self {
        Candidate {
            anchor: members.last().map_or(0, |m| m.token_index),
            members,
            kind,
            number: Number::Plural,
            sentence_index,
            coordinated: false,
        }
    }

    pub fn bases(&self) -> BTreeSet<String> {
        self.members.iter().map(|m| m.base.clone()).collect()
    }

    /// Distinct base names in document order.
    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::with_capacity(self.members.len());
        for m in &self.members {
            if !names.contains(&m.base) {
                names.push(m.base.clone());
            }
        }
        names
    }

    pub fn label(&self) -> String {
        self.names().join(" ve ")
    }
}

/// Token range searched for a pronoun: from the first token of the oldest
/// in-scope sentence up to (excluding) the pronoun.
pub fn scope_window(doc: &Document, pronoun: &PronounMention, scope: SearchScope) -> Range<usize> {
    let sentence = doc.pronoun_sentence(pronoun);
    let oldest = sentence.saturating_sub(scope.max_back_sentences);
    doc.sentences()[oldest].first..pronoun.position
}

pub fn name_occurrences(doc: &Document, window: Range<usize>, ctx: &Context) -> Vec<NameOccurrence> {
    doc.tokens()[window]
        .iter()
        .filter_map(|t| match_name(t, &ctx.dictionary, &ctx.lexicon))
        .collect()
}

pub fn extract_candidates(doc: &Document, pronoun: &PronounMention, ctx: &Context) -> Vec<Candidate> {
    let window = scope_window(doc, pronoun, ctx.scope);
    let occurrences = name_occurrences(doc, window, ctx);
    let tokens = doc.tokens();
    let by_token: HashMap<usize, usize> = occurrences
        .iter()
        .enumerate()
        .map(|(i, o)| (o.token_index, i))
        .collect();
    let linked_to_next = |occ: &NameOccurrence| -> Option<usize> {
        let connective = tokens.get(occ.token_index + 1)?;
        if !CONNECTIVES.contains(&turkish_lowercase(&connective.surface).as_str()) {
            return None;
        }
        let next = by_token.get(&(occ.token_index + 2))?;
        (tokens[occ.token_index].sentence_index == tokens[occ.token_index + 2].sentence_index).then_some(*next)
    };

    let mut coordinated = vec![false; occurrences.len()];
    let mut candidates = Vec::new();
    let mut i = 0;
    while i < occurrences.len() {
        let mut chain = vec![i];
        while let Some(next) = linked_to_next(&occurrences[*chain.last().unwrap()]) {
            chain.push(next);
        }
        if chain.len() > 1 {
            for &k in &chain {
                coordinated[k] = true;
            }
            let sentence = tokens[occurrences[i].token_index].sentence_index;
            let members = chain.iter().map(|&k| occurrences[k].clone()).collect();
            candidates.push(Candidate::group(members, CandidateKind::Compound, sentence));
        }
        i = *chain.last().unwrap() + 1;
    }
    for (occ, coordinated) in occurrences.into_iter().zip(coordinated) {
        let sentence = tokens[occ.token_index].sentence_index;
        candidates.push(Candidate::simple(occ, sentence, coordinated));
    }
    sort_by_recency(&mut candidates);
    candidates
}

/// One plural candidate per in-scope sentence that holds at least two
/// distinct singular names.
pub fn generate_sets(doc: &Document, pronoun: &PronounMention, ctx: &Context) -> Vec<Candidate> {
    let window = scope_window(doc, pronoun, ctx.scope);
    let mut per_sentence: Vec<(usize, Vec<NameOccurrence>)> = Vec::new();
    for occ in name_occurrences(doc, window, ctx) {
        if occ.plural_suffix {
            continue;
        }
        let sentence = doc.tokens()[occ.token_index].sentence_index;
        match per_sentence.last_mut() {
            Some((s, names)) if *s == sentence => {
                if !names.iter().any(|n| n.base == occ.base) {
                    names.push(occ);
                }
            }
            _ => per_sentence.push((sentence, vec![occ])),
        }
    }
    per_sentence
        .into_iter()
        .filter(|(_, names)| names.len() >= 2)
        .map(|(sentence, names)| Candidate::group(names, CandidateKind::GeneratedSet, sentence))
        .collect()
}

/// Extraction plus set generation for plural pronouns lacking any plural
/// candidate.
pub fn locate_candidates(doc: &Document, pronoun: &PronounMention, ctx: &Context) -> Vec<Candidate> {
    let mut candidates = extract_candidates(doc, pronoun, ctx);
    if pronoun.number == Number::Plural && !candidates.iter().any(|c| c.number == Number::Plural) {
        candidates.extend(generate_sets(doc, pronoun, ctx));
        sort_by_recency(&mut candidates);
    }
    candidates
}

/// Number agreement, then the personal or reflexive constraint.
///
/// Members of a compound count as part of a plural phrase and never agree
/// with a pronoun on their own. Personal pronouns lose every candidate from
/// their own sentence; reflexives keep only the nearest candidate.
pub fn apply_constraints(doc: &Document, pronoun: &PronounMention, candidates: Vec<Candidate>) -> Vec<Candidate> {
    let mut survivors: Vec<Candidate> = candidates
        .into_iter()
        .filter(|c| c.number == pronoun.number && !c.coordinated)
        .collect();
    match pronoun.kind {
        PronounKind::Personal => {
            let sentence = doc.pronoun_sentence(pronoun);
            survivors.retain(|c| c.sentence_index != sentence);
        }
        PronounKind::Reflexive => {
            let nearest = survivors
                .iter()
                .enumerate()
                .filter(|(_, c)| c.anchor < pronoun.position)
                .max_by_key(|(_, c)| (c.anchor, c.members.len()))
                .map(|(i, _)| i);
            survivors = match nearest {
                Some(i) => vec![survivors.swap_remove(i)],
                None => Vec::new(),
            };
        }
    }
    survivors
}

/// Post-constraint candidates for a pronoun, ordered oldest to most recent.
pub fn surviving_candidates(doc: &Document, pronoun: &PronounMention, ctx: &Context) -> Vec<Candidate> {
    apply_constraints(doc, pronoun, locate_candidates(doc, pronoun, ctx))
}

fn sort_by_recency(candidates: &mut [Candidate]) {
    candidates.sort_by_key(|c| (c.anchor, c.members.len(), c.members[0].token_index));
}
