//! Synthetic annotated narratives for benchmarking.

use anafor::NameDictionary;

pub const NAMES: [&str; 8] = ["Ali", "Ayşe", "Murat", "Zeynep", "Tekin", "Fatma", "Ahmet", "Zerrin"];

const PATTERNS: [&str; 6] = [
    "{a} okula gitti.",
    "Yolda {a}, {b}'ye seslendi.",
    "<zero id=\"{id}\" kind=\"pers\" num=\"sg\" ant=\"{a}\"/> Çok yorgundu.",
    "{b} <pro id=\"{id}\" ant=\"{a}\">onu</pro> gördü.",
    "\"Bugün {a}'yi gördüm\" dedi {b}.",
    "{a} ve {b} parka gitti.",
];

pub fn dictionary() -> NameDictionary {
    NAMES.into_iter().collect()
}

/// Deterministic annotated text of `sentences` sentences.
pub fn narrative(sentences: usize) -> String {
    let mut out = String::new();
    let mut id = 0;
    for i in 0..sentences {
        let a = NAMES[(i * 3) % NAMES.len()];
        let b = NAMES[(i * 5 + 1) % NAMES.len()];
        let pattern = PATTERNS[i % PATTERNS.len()];
        if pattern.contains("{id}") {
            id += 1;
        }
        let sentence = pattern
            .replace("{a}", a)
            .replace("{b}", b)
            .replace("{id}", &id.to_string());
        out.push_str(&sentence);
        out.push(if i % 4 == 3 { '\n' } else { ' ' });
    }
    out
}
