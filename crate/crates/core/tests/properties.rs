use anafor::{
    baseline_resolve_document, parse_document, parse_trace, render_trace, resolve_document, serialize_document,
    Context, Lexicon, PreferenceWeights,
};
use proptest::prelude::*;

const WORDS: [&str; 12] = [
    "Ali", "Ayşe'ye", "Murat'ı", "Zeynep'ler", "ve", "ile", "geldi", "baktı", ",", "\"", "“", "’",
];

fn piece() -> impl Strategy<Value = String> {
    prop_oneof![
        6 => (0..WORDS.len(), prop_oneof![Just(" "), Just("  "), Just("\n"), Just("")])
            .prop_map(|(w, ws)| format!("{ws}{}", WORDS[w])),
        2 => prop_oneof![Just("."), Just("!"), Just("?!"), Just("…")].prop_map(str::to_string),
        1 => (0..3usize).prop_map(|k| format!(" <pro id=\"ID\">{}</pro>", ["onu", "onlara", "kendisine"][k])),
        1 => any::<bool>().prop_map(|pl| format!(" <zero id=\"ID\" kind=\"pers\" num=\"{}\"/>", if pl { "pl" } else { "sg" })),
    ]
}

fn document() -> impl Strategy<Value = String> {
    prop::collection::vec(piece(), 0..30).prop_map(|pieces| {
        let mut text = String::new();
        let mut id = 0;
        for p in pieces {
            if p.contains("ID") {
                id += 1;
                text.push_str(&p.replace("ID", &id.to_string()));
            } else {
                text.push_str(&p);
            }
        }
        text.push_str(" son.\n");
        text
    })
}

fn ctx() -> Context {
    Context::new(["Ali", "Ayşe", "Murat", "Zeynep"].into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn serialization_reproduces_the_input(text in document()) {
        let doc = parse_document(&text, &Lexicon::default()).unwrap();
        prop_assert_eq!(serialize_document(&doc), text);
    }

    #[test]
    fn rewriting_keeps_sentences_and_removes_resolved_pronouns(text in document()) {
        let doc = parse_document(&text, &Lexicon::default()).unwrap();
        for resolved in [resolve_document(&doc, &ctx(), &PreferenceWeights::default()), baseline_resolve_document(&doc, &ctx())] {
            let out = &resolved.paraphrased;
            prop_assert_eq!(out.sentences().len(), doc.sentences().len());
            let left: Vec<u32> = out.pronouns().iter().map(|p| p.id).collect();
            let ambiguous: Vec<u32> = resolved
                .resolutions
                .iter()
                .filter(|r| r.antecedent().is_none())
                .map(|r| r.pronoun_id)
                .collect();
            prop_assert_eq!(left, ambiguous);
            let again = parse_document(&serialize_document(out), &Lexicon::default()).unwrap();
            prop_assert_eq!(again.pronouns().len(), out.pronouns().len());
        }
    }

    #[test]
    fn traces_parse_back_to_the_same_decisions(text in document()) {
        let doc = parse_document(&text, &Lexicon::default()).unwrap();
        let resolved = resolve_document(&doc, &ctx(), &PreferenceWeights::default());
        let decisions = parse_trace(&render_trace(&resolved.resolutions), "trace").unwrap();
        prop_assert_eq!(decisions, resolved.decisions());
    }

    #[test]
    fn scaling_the_weights_keeps_the_resolutions(text in document(), factor in 0.1f64..10.0) {
        let doc = parse_document(&text, &Lexicon::default()).unwrap();
        let weights = PreferenceWeights::default();
        let a = resolve_document(&doc, &ctx(), &weights).decisions();
        let b = resolve_document(&doc, &ctx(), &weights.scaled(factor)).decisions();
        prop_assert_eq!(a, b);
    }
}
