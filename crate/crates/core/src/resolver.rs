//! Left-to-right resolution loop and the most-recent-candidate baseline.
//!
//! Each pronoun is resolved against the document as rewritten so far: once a
//! pronoun is resolved its antecedent's base names take its place, so later
//! pronouns see them as ordinary name occurrences.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::candidates::{surviving_candidates, Candidate, Context};
use crate::error::{Error, Result};
use crate::preferences::{score, select_best, FeatureContext, PreferenceVector, PreferenceWeights, ResolutionHistory};
use crate::text::{Document, PronounMention};

/// How the antecedent is picked among surviving candidates.
#[derive(Debug, Clone, Copy)]
pub enum Selection<'w> {
    /// Highest weighted preference score; ties go to the most recent.
    Preferences(&'w PreferenceWeights),
    /// The most recent survivor.
    MostRecent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidate {
    pub candidate: Candidate,
    /// Absent for the baseline, which does not score.
    pub features: Option<PreferenceVector>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Resolved {
        antecedent: BTreeSet<String>,
        score: f64,
        /// Survivors, oldest first.
        trace: Vec<ScoredCandidate>,
        /// Index of the chosen survivor in `trace`.
        chosen: usize,
    },
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub pronoun_id: u32,
    pub outcome: Outcome,
}

impl Resolution {
    pub fn antecedent(&self) -> Option<&BTreeSet<String>> {
        match &self.outcome {
            Outcome::Resolved { antecedent, .. } => Some(antecedent),
            Outcome::Ambiguous => None,
        }
    }

    pub fn chosen(&self) -> Option<&Candidate> {
        match &self.outcome {
            Outcome::Resolved { trace, chosen, .. } => Some(&trace[*chosen].candidate),
            Outcome::Ambiguous => None,
        }
    }

    pub fn decision(&self) -> Decision {
        Decision {
            pronoun_id: self.pronoun_id,
            antecedent: self.antecedent().cloned(),
        }
    }
}

/// What the evaluator needs from a resolution: the pronoun and its
/// antecedent (`None` when ambiguous).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub pronoun_id: u32,
    pub antecedent: Option<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedDocument {
    /// One per input pronoun, in document order.
    pub resolutions: Vec<Resolution>,
    /// Input with every resolved pronoun replaced by its antecedent.
    pub paraphrased: Document,
}

impl ResolvedDocument {
    pub fn decisions(&self) -> Vec<Decision> {
        self.resolutions.iter().map(Resolution::decision).collect()
    }
}

pub fn resolve_pronoun(
    doc: &Document,
    pronoun: &PronounMention,
    ctx: &Context,
    selection: Selection<'_>,
    history: &ResolutionHistory,
) -> Resolution {
    let survivors = surviving_candidates(doc, pronoun, ctx);
    let trace: Vec<ScoredCandidate> = match selection {
        Selection::Preferences(weights) => {
            let features = FeatureContext::new(doc, pronoun, &survivors, history, ctx);
            survivors
                .into_iter()
                .map(|candidate| {
                    let v = features.vector(&candidate);
                    ScoredCandidate {
                        score: score(&v, weights),
                        features: Some(v),
                        candidate,
                    }
                })
                .collect()
        }
        Selection::MostRecent => survivors
            .into_iter()
            .map(|candidate| ScoredCandidate {
                candidate,
                features: None,
                score: 0.0,
            })
            .collect(),
    };
    let chosen = match selection {
        Selection::Preferences(_) => select_best(&trace.iter().map(|s| s.score).collect::<Vec<_>>()),
        Selection::MostRecent => trace
            .iter()
            .enumerate()
            .max_by_key(|(_, s)| s.candidate.anchor)
            .map(|(i, _)| i),
    };
    let outcome = match chosen {
        Some(chosen) => Outcome::Resolved {
            antecedent: trace[chosen].candidate.bases(),
            score: trace[chosen].score,
            trace,
            chosen,
        },
        None => Outcome::Ambiguous,
    };
    Resolution {
        pronoun_id: pronoun.id,
        outcome,
    }
}

/// Resolves every pronoun left to right, replacing each resolved pronoun
/// with its antecedent before moving on.
pub fn run(doc: &Document, ctx: &Context, selection: Selection<'_>) -> ResolvedDocument {
    let mut working = doc.clone();
    let mut history = ResolutionHistory::default();
    let mut resolutions = Vec::with_capacity(doc.pronouns().len());
    let ids: Vec<u32> = doc.pronouns().iter().map(|p| p.id).collect();
    for id in ids {
        let pronoun = working.pronoun(id).expect("pronoun ids are stable").clone();
        let resolution = resolve_pronoun(&working, &pronoun, ctx, selection, &history);
        if let Some(chosen) = resolution.chosen() {
            if pronoun.is_zero() {
                history.record(chosen.bases(), working.pronoun_sentence(&pronoun));
            }
            let names = chosen.names();
            working
                .replace_pronoun(id, &names)
                .expect("pronoun present in working copy");
        }
        resolutions.push(resolution);
    }
    ResolvedDocument {
        resolutions,
        paraphrased: working,
    }
}

pub fn resolve_document(doc: &Document, ctx: &Context, weights: &PreferenceWeights) -> ResolvedDocument {
    run(doc, ctx, Selection::Preferences(weights))
}

pub fn baseline_resolve_document(doc: &Document, ctx: &Context) -> ResolvedDocument {
    run(doc, ctx, Selection::MostRecent)
}

fn join(names: &BTreeSet<String>, sep: &str) -> String {
    names.iter().map(String::as_str).collect::<Vec<_>>().join(sep)
}

/// Renders one tab-separated line per resolution:
/// `id  outcome  antecedent  score  candidates`.
///
/// Candidates are space separated as `Name+Name@anchor:bits:score`; absent
/// fields are written as `-`.
pub fn render_trace(resolutions: &[Resolution]) -> String {
    let mut out = String::new();
    for r in resolutions {
        match &r.outcome {
            Outcome::Ambiguous => {
                let _ = writeln!(out, "{}\tambiguous\t-\t-\t-", r.pronoun_id);
            }
            Outcome::Resolved {
                antecedent,
                score,
                trace,
                ..
            } => {
                let scored = trace.iter().any(|s| s.features.is_some());
                let score = if scored { format!("{score:.2}") } else { "-".into() };
                let candidates: Vec<String> = trace
                    .iter()
                    .map(|s| {
                        let names = s.candidate.names().join("+");
                        match &s.features {
                            Some(v) => format!("{names}@{}:{}:{:.2}", s.candidate.anchor, v.bits(), s.score),
                            None => format!("{names}@{}:-:-", s.candidate.anchor),
                        }
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "{}\tresolved\t{}\t{score}\t{}",
                    r.pronoun_id,
                    join(antecedent, ";"),
                    candidates.join(" ")
                );
            }
        }
    }
    out
}

/// Reads the decisions back out of a rendered trace. Blank lines and `#`
/// comments are ignored.
pub fn parse_trace(text: &str, origin: &str) -> Result<Vec<Decision>> {
    let mut decisions = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::data(origin, n + 1, format!("expected 5 tab-separated fields, found {}", fields.len())));
        }
        let pronoun_id = fields[0]
            .parse()
            .map_err(|_| Error::data(origin, n + 1, format!("invalid pronoun id {:?}", fields[0])))?;
        let antecedent = match fields[1] {
            "ambiguous" => None,
            "resolved" => {
                let names: BTreeSet<String> = fields[2].split(';').map(str::to_string).collect();
                if fields[2] == "-" || names.iter().any(String::is_empty) {
                    return Err(Error::data(origin, n + 1, "resolved record without antecedent"));
                }
                Some(names)
            }
            other => return Err(Error::data(origin, n + 1, format!("unknown outcome {other:?}"))),
        };
        decisions.push(Decision { pronoun_id, antecedent });
    }
    Ok(decisions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_document, serialize_document};
    use crate::morph::Lexicon;
    use crate::preferences::Preference;

    fn ctx() -> Context {
        Context::new(
            ["Ayşe", "Ahmet", "Fatma", "Ali", "Zerrin", "Murat", "Zeynep", "Tekin", "Ayla"]
                .into_iter()
                .collect(),
        )
    }

    fn doc(text: &str) -> Document {
        parse_document(text, &Lexicon::default()).unwrap()
    }

    fn names(r: &Resolution) -> Vec<String> {
        r.antecedent().map(|a| a.iter().cloned().collect()).unwrap_or_default()
    }

    #[test]
    fn recency_picks_murat() {
        let d = doc("Ali oyun oynuyordu. Murat da geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Oyunu sevdi.");
        let r = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        assert_eq!(names(&r.resolutions[0]), ["Murat"]);
    }

    #[test]
    fn punctuation_beats_recency_of_the_baseline() {
        let d = doc("Yolda Tekin, Ali'ye seslendi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Çok yorgundu.");
        let system = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        let baseline = baseline_resolve_document(&d, &ctx());
        assert_eq!(names(&system.resolutions[0]), ["Tekin"]);
        assert_eq!(names(&baseline.resolutions[0]), ["Ali"]);
        let Outcome::Resolved { trace, score, .. } = &system.resolutions[0].outcome else {
            panic!("expected resolution");
        };
        // quoted-text (both unquoted) + recency + nominative + punctuation
        assert!((score - 7.35).abs() < 1e-9);
        assert!((trace[1].score - 4.35).abs() < 1e-9);
        let tekin = trace[0].features.unwrap();
        assert!(tekin[Preference::Punctuation] && !tekin[Preference::FirstNp]);
    }

    #[test]
    fn identical_vectors_tie_to_the_most_recent() {
        let d = doc("Ali ve Murat geldi. Oturdular. Ali koştu. Murat koştu. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Düştü.");
        // Ali and Murat sit in different sentences; same scope, same features
        // except recency, so compare with recency switched off.
        let mut w = PreferenceWeights::default();
        w.0[1] = 0.0;
        let r = resolve_document(&d, &ctx(), &w);
        assert_eq!(names(&r.resolutions[0]), ["Murat"]);
    }

    #[test]
    fn zero_chain_accumulates_history() {
        let d = doc(
            "Ali okuldan çıktı. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Eve yürüdü. \
<zero id=\"2\" kind=\"pers\" num=\"sg\"/> Kapıda durdu. <zero id=\"3\" kind=\"pers\" num=\"sg\"/> Kapıyı çaldı.",
        );
        let r = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        for (i, res) in r.resolutions.iter().enumerate() {
            assert_eq!(names(res), ["Ali"]);
            let chosen = match &res.outcome {
                Outcome::Resolved { trace, chosen, .. } => trace[*chosen].features.unwrap(),
                Outcome::Ambiguous => unreachable!(),
            };
            assert_eq!(chosen[Preference::ZeroAntecedent], i > 0, "pronoun {i}");
        }
        assert_eq!(
            serialize_document(&r.paraphrased),
            "Ali okuldan çıktı. Ali Eve yürüdü. Ali Kapıda durdu. Ali Kapıyı çaldı."
        );
    }

    #[test]
    fn no_pronouns_is_identity() {
        let d = doc("Ali geldi. Murat gitti.\n");
        let r = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        assert!(r.resolutions.is_empty());
        assert_eq!(r.paraphrased, d);
    }

    #[test]
    fn disjoint_reference_is_ambiguous() {
        let text = "Ayşe <pro id=\"1\">onu</pro> gördü.";
        let r = resolve_document(&doc(text), &ctx(), &PreferenceWeights::default());
        assert_eq!(r.resolutions[0].outcome, Outcome::Ambiguous);
        assert_eq!(serialize_document(&r.paraphrased), text);
    }

    #[test]
    fn ambiguous_zero_marker_is_kept() {
        let text = "<zero id=\"1\" kind=\"pers\" num=\"sg\"/> Geldi.";
        let r = baseline_resolve_document(&doc(text), &ctx());
        assert_eq!(r.resolutions[0].outcome, Outcome::Ambiguous);
        assert_eq!(serialize_document(&r.paraphrased), text);
    }

    #[test]
    fn single_survivor_baseline_agrees() {
        let d = doc("Bu çocuk Ali'ydi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Sinirli görünüyordu.");
        let system = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        let baseline = baseline_resolve_document(&d, &ctx());
        assert_eq!(system.decisions(), baseline.decisions());
    }

    #[test]
    fn trace_round_trip() {
        let d = doc("Yolda Tekin, Ali'ye seslendi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Çok yorgundu.");
        let mut r = resolve_document(&d, &ctx(), &PreferenceWeights::default());
        let disjoint = doc("Ayşe <pro id=\"2\">onu</pro> gördü.");
        r.resolutions
            .extend(resolve_document(&disjoint, &ctx(), &PreferenceWeights::default()).resolutions);
        let trace = render_trace(&r.resolutions);
        let lines: Vec<&str> = trace.lines().collect();
        assert_eq!(lines[0], "1\tresolved\tTekin\t7.35\tTekin@1:11100010:7.35 Ali@3:11000000:4.35");
        assert_eq!(lines[1], "2\tambiguous\t-\t-\t-");
        assert_eq!(parse_trace(&trace, "t").unwrap(), r.decisions());

        let b = baseline_resolve_document(&d, &ctx());
        let btrace = render_trace(&b.resolutions);
        assert!(btrace.starts_with("1\tresolved\tAli\t-\tTekin@1:-:- Ali@3:-:-\n"), "{btrace}");
        assert_eq!(parse_trace(&btrace, "t").unwrap(), b.decisions());
    }

    #[test]
    fn trace_parse_errors() {
        assert!(parse_trace("1\tresolved\tAli\n", "t").is_err());
        assert!(parse_trace("x\tambiguous\t-\t-\t-\n", "t").is_err());
        assert!(parse_trace("1\tmaybe\t-\t-\t-\n", "t").is_err());
        assert!(parse_trace("1\tresolved\t-\t-\t-\n", "t").is_err());
    }
}
