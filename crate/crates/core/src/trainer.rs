//! Delta-rule (perceptron) training of the preference weights.
//!
//! Instances are built by walking a gold-annotated corpus with the same
//! candidate pipeline as the resolver. Earlier pronouns are replaced by their
//! gold antecedents, so every instance sees correct context.

use crate::candidates::{surviving_candidates, Context};
use crate::error::{Error, Result};
use crate::preferences::{score, select_best, FeatureContext, PreferenceVector, PreferenceWeights, ResolutionHistory};
use crate::text::Document;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingInstance {
    pub pronoun_id: u32,
    /// Feature vectors of the surviving candidates, oldest first.
    pub features: Vec<PreferenceVector>,
    /// The most recent survivor matching the gold antecedent.
    pub gold: usize,
    /// Every survivor whose names equal the gold antecedent.
    pub correct: Vec<usize>,
}

impl TrainingInstance {
    /// Instance with a single correct survivor.
    pub fn new(pronoun_id: u32, features: Vec<PreferenceVector>, gold: usize) -> Self {
        assert!(gold < features.len(), "gold index out of range");
        TrainingInstance {
            pronoun_id,
            features,
            gold,
            correct: vec![gold],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstanceSet {
    pub instances: Vec<TrainingInstance>,
    /// Pronouns without an `ant` annotation.
    pub unlabeled: usize,
    /// Labeled pronouns whose gold antecedent is not among the survivors
    /// (including pronouns with no survivors at all).
    pub skipped: usize,
}

pub fn build_instances(corpus: &[Document], ctx: &Context) -> Result<InstanceSet> {
    let mut set = InstanceSet::default();
    for doc in corpus {
        if !doc.pronouns().is_empty() && doc.pronouns().iter().all(|p| p.gold.is_none()) {
            return Err(Error::MissingGold);
        }
        let mut working = doc.clone();
        let mut history = ResolutionHistory::default();
        let ids: Vec<u32> = doc.pronouns().iter().map(|p| p.id).collect();
        for id in ids {
            let pronoun = working.pronoun(id).expect("pronoun ids are stable").clone();
            let Some(gold) = pronoun.gold.clone() else {
                set.unlabeled += 1;
                continue;
            };
            let survivors = surviving_candidates(&working, &pronoun, ctx);
            let correct: Vec<usize> = survivors
                .iter()
                .enumerate()
                .filter(|(_, c)| c.bases() == gold)
                .map(|(i, _)| i)
                .collect();
            let mut names: Vec<String> = gold.iter().cloned().collect();
            match correct.last() {
                Some(&last) => {
                    names = survivors[last].names();
                    let features = FeatureContext::new(&working, &pronoun, &survivors, &history, ctx);
                    set.instances.push(TrainingInstance {
                        pronoun_id: id,
                        features: survivors.iter().map(|c| features.vector(c)).collect(),
                        gold: last,
                        correct,
                    });
                }
                None => set.skipped += 1,
            }
            if pronoun.is_zero() {
                history.record(gold, working.pronoun_sentence(&pronoun));
            }
            working.replace_pronoun(id, &names)?;
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub initial: PreferenceWeights,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            max_epochs: 100,
            initial: PreferenceWeights::uniform(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub weights: PreferenceWeights,
    pub epochs: usize,
    /// Misclassified instances during the last epoch.
    pub final_errors: usize,
    pub errors_per_epoch: Vec<usize>,
}

impl TrainReport {
    pub fn converged(&self) -> bool {
        self.final_errors == 0
    }
}

fn predict(features: &[PreferenceVector], weights: &PreferenceWeights) -> Option<usize> {
    select_best(&features.iter().map(|v| score(v, weights)).collect::<Vec<_>>())
}

/// Predicted survivor index under `weights`, with the resolver's tie rule.
pub fn predict_instance(instance: &TrainingInstance, weights: &PreferenceWeights) -> Option<usize> {
    predict(&instance.features, weights)
}

/// Online multiclass perceptron. A misclassified instance moves the weights
/// by `lr * (f_target - f_predicted)`, where the target is the
/// best-scoring correct survivor. Training stops after the first epoch
/// without errors.
pub fn train(instances: &[TrainingInstance], config: &TrainConfig) -> TrainReport {
    let mut weights = config.initial;
    let mut errors_per_epoch = Vec::new();
    for _ in 0..config.max_epochs {
        let mut errors = 0;
        for inst in instances {
            let Some(predicted) = predict(&inst.features, &weights) else {
                continue;
            };
            if inst.correct.contains(&predicted) {
                continue;
            }
            errors += 1;
            let targets: Vec<PreferenceVector> = inst.correct.iter().map(|&i| inst.features[i]).collect();
            let target = targets[predict(&targets, &weights).expect("correct set is non-empty")];
            let (t, p) = (target.as_f64(), inst.features[predicted].as_f64());
            for k in 0..8 {
                weights.0[k] += config.learning_rate * (t[k] - p[k]);
            }
        }
        errors_per_epoch.push(errors);
        if errors == 0 {
            break;
        }
    }
    TrainReport {
        weights,
        epochs: errors_per_epoch.len(),
        final_errors: errors_per_epoch.last().copied().unwrap_or(0),
        errors_per_epoch,
    }
}

/// Instances misclassified by `weights`.
pub fn count_errors(instances: &[TrainingInstance], weights: &PreferenceWeights) -> usize {
    instances
        .iter()
        .filter(|inst| predict(&inst.features, weights).is_some_and(|p| !inst.correct.contains(&p)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_document;
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

    fn v(prefs: &[Preference]) -> PreferenceVector {
        let mut v = PreferenceVector::default();
        for &p in prefs {
            v.set(p, true);
        }
        v
    }

    #[test]
    fn instances_from_a_gold_document() {
        let d = doc(
            "Ayşe okula gitti. Ahmet ve Fatma <pro id=\"1\" ant=\"Ayşe\">onu</pro> gördü. \
<zero id=\"2\" kind=\"pers\" num=\"pl\" ant=\"Ahmet;Fatma\"/> <pro id=\"3\" ant=\"Ayşe\">Ona</pro> el salladılar.",
        );
        let set = build_instances(&[d], &ctx()).unwrap();
        assert_eq!(set.instances.len(), 3);
        assert_eq!(set.skipped, 0);
        // onu: Ayşe is the only survivor
        assert_eq!(set.instances[0].features.len(), 1);
        assert_eq!(set.instances[0].gold, 0);
        // Ona: Ayşe twice (original and the replaced onu), both correct
        assert_eq!(set.instances[2].correct.len(), 2);
    }

    #[test]
    fn pronouns_without_survivors_are_skipped() {
        // the first pronoun has no survivor; the second's gold is not a survivor
        let d = doc("Ayşe <pro id=\"1\" ant=\"Ali\">onu</pro> gördü. <pro id=\"2\" ant=\"Zeynep\">Ona</pro> baktı.");
        let set = build_instances(&[d], &ctx()).unwrap();
        assert!(set.instances.is_empty());
        assert_eq!(set.skipped, 2);
    }

    #[test]
    fn gold_index_is_the_position_of_the_correct_survivor() {
        let d = doc("Ali geldi. Murat geldi. Ayşe geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\" ant=\"Murat\"/> Oturdu.");
        let set = build_instances(&[d], &ctx()).unwrap();
        assert_eq!(set.instances[0].features.len(), 3);
        assert_eq!(set.instances[0].gold, 1);
    }

    #[test]
    fn unannotated_document_is_an_error() {
        let d = doc("Ali geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Oturdu.");
        assert!(matches!(build_instances(&[d], &ctx()), Err(Error::MissingGold)));
    }

    #[test]
    fn single_feature_separable_case() {
        let instances = vec![
            TrainingInstance::new(1, vec![v(&[Preference::Punctuation]), v(&[Preference::Recency])], 0),
            TrainingInstance::new(2, vec![v(&[Preference::Recency]), v(&[Preference::Punctuation])], 1),
        ];
        let report = train(&instances, &TrainConfig::default());
        assert!(report.converged());
        let w = report.weights;
        assert!(w[Preference::Punctuation] > w[Preference::Recency]);
        for p in [Preference::QuotedText, Preference::NominativeCase, Preference::ZeroAntecedent] {
            assert_eq!(w[p], 1.0);
        }
    }

    #[test]
    fn equal_features_never_update() {
        let same = v(&[Preference::Recency]);
        let instances = vec![TrainingInstance::new(1, vec![same, same], 0)];
        let report = train(&instances, &TrainConfig::default());
        assert_eq!(report.weights, PreferenceWeights::uniform(1.0));
        assert_eq!(report.final_errors, 1);
        assert_eq!(report.epochs, 100);
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let instances = vec![TrainingInstance::new(1, vec![v(&[Preference::Punctuation]), v(&[Preference::Recency])], 0)];
        let config = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert_eq!(train(&instances, &config).weights, config.initial);
    }
}
