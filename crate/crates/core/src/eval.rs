//! Per-pronoun recall and precision against gold links.
//!
//! recall = correct / identified, precision = correct / attempted, where
//! identified counts gold-linked pronouns and attempted excludes the ones
//! left ambiguous.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::resolver::Decision;
use crate::text::Document;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub identified: usize,
    pub attempted: usize,
    pub correct: usize,
    pub recall: f64,
    pub precision: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    pub fn from_counts(identified: usize, ambiguous: usize, correct: usize) -> Self {
        assert!(ambiguous <= identified, "more ambiguous pronouns than identified");
        let attempted = identified - ambiguous;
        assert!(correct <= attempted, "more correct resolutions than attempts");
        Metrics {
            identified,
            attempted,
            correct,
            recall: ratio(correct, identified),
            precision: ratio(correct, attempted),
        }
    }

    pub fn ambiguous(&self) -> usize {
        self.identified - self.attempted
    }

    /// Pools the counts of two evaluations.
    pub fn combine(&self, other: &Metrics) -> Metrics {
        Metrics::from_counts(
            self.identified + other.identified,
            self.ambiguous() + other.ambiguous(),
            self.correct + other.correct,
        )
    }

    pub fn to_kv(&self, prefix: &str) -> String {
        format!(
            "{prefix}identified={}\n{prefix}attempted={}\n{prefix}correct={}\n{prefix}recall={:.1}\n{prefix}precision={:.1}\n",
            self.identified,
            self.attempted,
            self.correct,
            self.recall * 100.0,
            self.precision * 100.0
        )
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identified  {:>6}", self.identified)?;
        writeln!(f, "attempted   {:>6}", self.attempted)?;
        writeln!(f, "correct     {:>6}", self.correct)?;
        writeln!(f, "recall      {:>5.1}%", self.recall * 100.0)?;
        writeln!(f, "precision   {:>5.1}%", self.precision * 100.0)
    }
}

/// Scores decisions against the gold links of `gold`. A pronoun counts as
/// correct when its antecedent's name set equals the gold set.
pub fn evaluate(decisions: &[Decision], gold: &Document) -> Result<Metrics> {
    let mut by_id: HashMap<u32, &Decision> = HashMap::with_capacity(decisions.len());
    for d in decisions {
        if gold.pronoun(d.pronoun_id).is_none() {
            return Err(Error::Alignment(format!("pronoun {} is not in the gold document", d.pronoun_id)));
        }
        if by_id.insert(d.pronoun_id, d).is_some() {
            return Err(Error::Alignment(format!("pronoun {} resolved twice", d.pronoun_id)));
        }
    }
    let (mut identified, mut ambiguous, mut correct) = (0, 0, 0);
    for p in gold.pronouns() {
        let Some(gold_names) = &p.gold else { continue };
        let decision = by_id
            .get(&p.id)
            .ok_or_else(|| Error::Alignment(format!("no resolution for pronoun {}", p.id)))?;
        identified += 1;
        match &decision.antecedent {
            None => ambiguous += 1,
            Some(names) if names == gold_names => correct += 1,
            Some(_) => {}
        }
    }
    Ok(Metrics::from_counts(identified, ambiguous, correct))
}

/// Side-by-side system and baseline metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub system: Metrics,
    pub baseline: Metrics,
}

impl Comparison {
    pub fn new(system: Metrics, baseline: Metrics) -> Self {
        Comparison { system, baseline }
    }

    /// System minus baseline, in percentage points.
    pub fn recall_delta(&self) -> f64 {
        (self.system.recall - self.baseline.recall) * 100.0
    }

    pub fn precision_delta(&self) -> f64 {
        (self.system.precision - self.baseline.precision) * 100.0
    }

    pub fn to_kv(&self) -> String {
        format!(
            "{}{}delta.recall={:+.1}\ndelta.precision={:+.1}\n",
            self.baseline.to_kv("baseline."),
            self.system.to_kv("system."),
            self.recall_delta(),
            self.precision_delta()
        )
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>9} {:>9} {:>7}", "", "Baseline", "System", "Delta")?;
        writeln!(
            f,
            "{:<10} {:>8.1}% {:>8.1}% {:>+7.1}",
            "Recall",
            self.baseline.recall * 100.0,
            self.system.recall * 100.0,
            self.recall_delta()
        )?;
        writeln!(
            f,
            "{:<10} {:>8.1}% {:>8.1}% {:>+7.1}",
            "Precision",
            self.baseline.precision * 100.0,
            self.system.precision * 100.0,
            self.precision_delta()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_document;
    use crate::morph::Lexicon;

    fn pct(x: f64) -> f64 {
        x * 100.0
    }

    #[test]
    fn reported_counts_first_experiment() {
        let m = Metrics::from_counts(190, 6, 162);
        assert_eq!(m.attempted, 184);
        assert!((pct(m.recall) - 85.3).abs() <= 0.05);
        assert!((pct(m.precision) - 88.0).abs() <= 0.05);
    }

    #[test]
    fn reported_counts_second_experiment() {
        let m = Metrics::from_counts(205, 39, 151);
        assert!((pct(m.recall) - 73.7).abs() <= 0.05);
        assert!((pct(m.precision) - 91.0).abs() <= 0.05);
    }

    #[test]
    fn all_ambiguous_guards_division() {
        let m = Metrics::from_counts(5, 5, 0);
        assert_eq!((m.recall, m.precision), (0.0, 0.0));
        let empty = Metrics::from_counts(0, 0, 0);
        assert_eq!((empty.recall, empty.precision), (0.0, 0.0));
    }

    fn metrics(recall: f64, precision: f64) -> Metrics {
        Metrics {
            identified: 0,
            attempted: 0,
            correct: 0,
            recall,
            precision,
        }
    }

    #[test]
    fn comparison_deltas() {
        let c = Comparison::new(metrics(0.853, 0.880), metrics(0.684, 0.706));
        assert!((c.recall_delta() - 16.9).abs() < 1e-9);
        assert!((c.precision_delta() - 17.4).abs() < 1e-9);
        let same = Comparison::new(metrics(0.5, 0.6), metrics(0.5, 0.6));
        assert_eq!((same.recall_delta(), same.precision_delta()), (0.0, 0.0));
    }

    #[test]
    fn negative_deltas_are_signed() {
        let c = Comparison::new(Metrics::from_counts(10, 0, 5), Metrics::from_counts(10, 0, 8));
        let table = c.to_string();
        assert!(table.contains("-30.0"), "{table}");
        assert!(c.to_kv().contains("delta.recall=-30.0"));
    }

    #[test]
    fn table_layout() {
        let c = Comparison::new(Metrics::from_counts(190, 6, 162), Metrics::from_counts(190, 6, 130));
        assert_eq!(
            c.to_string(),
            "            Baseline    System   Delta\n\
             Recall         68.4%     85.3%   +16.8\n\
             Precision      70.7%     88.0%   +17.4\n"
        );
    }

    #[test]
    fn evaluation_against_gold() {
        let gold = parse_document(
            "Ali geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\" ant=\"Ali\"/> Oturdu. \
<zero id=\"2\" kind=\"pers\" num=\"pl\" ant=\"Ali;Ayşe\"/> Gittiler. Ayşe <pro id=\"3\">onu</pro> gördü.",
            &Lexicon::default(),
        )
        .unwrap();
        let set = |names: &[&str]| Some(names.iter().map(|s| s.to_string()).collect());
        let decisions = vec![
            Decision { pronoun_id: 1, antecedent: set(&["Ali"]) },
            Decision { pronoun_id: 2, antecedent: set(&["Ayşe", "Ali"]) },
            Decision { pronoun_id: 3, antecedent: None },
        ];
        let m = evaluate(&decisions, &gold).unwrap();
        assert_eq!((m.identified, m.attempted, m.correct), (2, 2, 2));

        let wrong = vec![
            Decision { pronoun_id: 1, antecedent: set(&["Ayşe"]) },
            Decision { pronoun_id: 2, antecedent: None },
        ];
        let m = evaluate(&wrong, &gold).unwrap();
        assert_eq!((m.identified, m.attempted, m.correct), (2, 1, 0));

        assert!(evaluate(&decisions[..1], &gold).is_err());
        let stray = vec![Decision { pronoun_id: 9, antecedent: None }];
        assert!(evaluate(&stray, &gold).is_err());
    }
}
