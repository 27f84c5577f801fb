//! Suffix heuristics standing in for a morphological analyzer.
//!
//! Pronouns are recognized against a closed inflection lexicon. Proper names
//! are recognized against the gazetteer; whatever follows the apostrophe is
//! classified with small suffix tables (case markers, plural, copula).

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::dictionary::{read_utf8, NameDictionary};
use crate::error::{Error, Result};
use crate::text::{Number, PronounKind, Token};

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");

const APOSTROPHES: [char; 2] = ['\'', '’'];

/// Lowercases with Turkish dotted/dotless i rules.
pub fn turkish_lowercase(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'I' => out.push('ı'),
            'İ' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    O,
    Onlar,
    Kendi,
    Kendisi,
    Kendileri,
}

impl Lemma {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma::O => "o",
            Lemma::Onlar => "onlar",
            Lemma::Kendi => "kendi",
            Lemma::Kendisi => "kendisi",
            Lemma::Kendileri => "kendileri",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "o" => Lemma::O,
            "onlar" => Lemma::Onlar,
            "kendi" => Lemma::Kendi,
            "kendisi" => Lemma::Kendisi,
            "kendileri" => Lemma::Kendileri,
            _ => return None,
        })
    }

    pub fn kind(self) -> PronounKind {
        match self {
            Lemma::O | Lemma::Onlar => PronounKind::Personal,
            Lemma::Kendi | Lemma::Kendisi | Lemma::Kendileri => PronounKind::Reflexive,
        }
    }

    pub fn number(self) -> Number {
        match self {
            Lemma::O | Lemma::Kendi | Lemma::Kendisi => Number::Singular,
            Lemma::Onlar | Lemma::Kendileri => Number::Plural,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PronounForm {
    pub lemma: Lemma,
    pub kind: PronounKind,
    pub number: Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Nominative,
    Oblique,
}

/// Breakdown of the material after a proper name's apostrophe.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuffixAnalysis {
    pub plural: bool,
    pub case_marker: Option<String>,
    pub copula: Option<String>,
    /// False when the suffix did not decompose into known pieces.
    pub recognized: bool,
}

impl SuffixAnalysis {
    pub fn case(&self) -> Case {
        if self.recognized && self.case_marker.is_none() && self.copula.is_none() {
            Case::Nominative
        } else {
            Case::Oblique
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    forms: HashMap<String, Lemma>,
    case_markers: HashSet<String>,
    plural: Vec<String>,
    copula: Vec<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse(DEFAULT_LEXICON, "lexicon.txt").expect("built-in lexicon is valid")
    }
}

impl Lexicon {
    /// Parses a sectioned lexicon: `[pronoun:<lemma>]`, `[suffix:case]`,
    /// `[suffix:plural]`, `[suffix:copula]`, one lowercase form per line.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        enum Section {
            Pronoun(Lemma),
            Case,
            Plural,
            Copula,
        }
        let mut forms = HashMap::new();
        let mut case_markers = HashSet::new();
        let mut plural = Vec::new();
        let mut copula = Vec::new();
        let mut section = None;

        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match header.split_once(':') {
                    Some(("pronoun", lemma)) => Section::Pronoun(
                        Lemma::from_name(lemma)
                            .ok_or_else(|| Error::data(origin, n + 1, format!("unknown pronoun lemma {lemma:?}")))?,
                    ),
                    Some(("suffix", "case")) => Section::Case,
                    Some(("suffix", "plural")) => Section::Plural,
                    Some(("suffix", "copula")) => Section::Copula,
                    _ => return Err(Error::data(origin, n + 1, format!("unknown section [{header}]"))),
                });
                continue;
            }
            if line.chars().any(char::is_whitespace) || turkish_lowercase(line) != line {
                return Err(Error::data(origin, n + 1, format!("form {line:?} must be one lowercase word")));
            }
            let form = line.to_string();
            match section {
                None => return Err(Error::data(origin, n + 1, "form outside of any section")),
                Some(Section::Pronoun(lemma)) => {
                    if let Some(prev) = forms.insert(form, lemma) {
                        if prev != lemma {
                            return Err(Error::data(
                                origin,
                                n + 1,
                                format!("form {line:?} listed under both {} and {}", prev.as_str(), lemma.as_str()),
                            ));
                        }
                    }
                }
                Some(Section::Case) => {
                    case_markers.insert(form);
                }
                Some(Section::Plural) => plural.push(form),
                Some(Section::Copula) => copula.push(form),
            }
        }
        // longest match first
        plural.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));
        copula.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));
        Ok(Lexicon {
            forms,
            case_markers,
            plural,
            copula,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_utf8(path)?, &path.display().to_string())
    }

    /// Looks a surface form up in the pronoun lexicon (case-insensitive).
    pub fn classify_pronoun(&self, surface: &str) -> Option<PronounForm> {
        let lemma = *self.forms.get(&turkish_lowercase(surface))?;
        Some(PronounForm {
            lemma,
            kind: lemma.kind(),
            number: lemma.number(),
        })
    }

    pub fn is_pronoun(&self, surface: &str) -> bool {
        self.classify_pronoun(surface).is_some()
    }

    pub fn pronoun_forms(&self) -> impl Iterator<Item = (&str, Lemma)> {
        self.forms.iter().map(|(f, l)| (f.as_str(), *l))
    }

    pub fn analyze_suffix(&self, suffix: &str) -> SuffixAnalysis {
        let suffix = turkish_lowercase(suffix);
        let mut analysis = SuffixAnalysis::default();
        let mut rest = suffix.as_str();
        if let Some(p) = self.plural.iter().find(|p| rest.starts_with(p.as_str())) {
            analysis.plural = true;
            rest = &rest[p.len()..];
        }
        if rest.is_empty() {
            analysis.recognized = true;
        } else if self.case_markers.contains(rest) {
            analysis.case_marker = Some(rest.to_string());
            analysis.recognized = true;
        } else if let Some(cop) = self.copula.iter().find(|c| rest.ends_with(c.as_str())) {
            let head = &rest[..rest.len() - cop.len()];
            if head.is_empty() || self.case_markers.contains(head) {
                analysis.copula = Some(cop.clone());
                analysis.case_marker = (!head.is_empty()).then(|| head.to_string());
                analysis.recognized = true;
            }
        }
        analysis
    }
}

/// A token recognized as a proper person name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameOccurrence {
    /// The matched gazetteer entry.
    pub base: String,
    pub token_index: usize,
    pub case: Case,
    pub plural_suffix: bool,
    pub copular_suffix: bool,
}

/// Splits a token at its first apostrophe into (stem, suffix).
pub fn split_apostrophe(surface: &str) -> (&str, Option<&str>) {
    match surface.find(APOSTROPHES) {
        Some(i) => {
            let apostrophe_len = surface[i..].chars().next().map_or(1, char::len_utf8);
            (&surface[..i], Some(&surface[i + apostrophe_len..]))
        }
        None => (surface, None),
    }
}

/// Matches a token against the gazetteer. The stem up to the apostrophe (or
/// the whole token) must be an exact dictionary entry, and pronoun forms
/// never match.
pub fn match_name(token: &Token, dict: &NameDictionary, lexicon: &Lexicon) -> Option<NameOccurrence> {
    if lexicon.is_pronoun(&token.surface) {
        return None;
    }
    let (stem, suffix) = split_apostrophe(&token.surface);
    if !dict.contains(stem) {
        return None;
    }
    let analysis = suffix.map(|s| lexicon.analyze_suffix(s)).unwrap_or(SuffixAnalysis {
        recognized: true,
        ..SuffixAnalysis::default()
    });
    Some(NameOccurrence {
        base: stem.to_string(),
        token_index: token.index,
        case: analysis.case(),
        plural_suffix: analysis.plural,
        copular_suffix: analysis.copula.is_some(),
    })
}

pub fn is_nominative(occurrence: &NameOccurrence) -> bool {
    occurrence.case == Case::Nominative
}
