//! Annotated corpus format.
//!
//! Plain text with two inline tags:
//!
//! ```text
//! <pro id="1" ant="Ayşe">onu</pro>                       overt pronoun
//! <zero id="2" kind="pers" num="pl" ant="Ahmet;Fatma"/>  zero pronoun
//! ```
//!
//! `ant` is optional and holds the gold antecedent as `;`-separated base
//! names. Overt pronouns take their kind and number from the pronoun lexicon;
//! zero pronouns declare them. Proper names are not annotated.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::morph::Lexicon;
use crate::text::{is_punctuation, Document, Number, Overtness, PronounKind, PronounMention, TokenBuilder};

struct Tag<'a> {
    name: &'a str,
    attrs: Vec<(&'a str, &'a str, usize)>,
    self_closing: bool,
    start: usize,
    end: usize,
}

struct Scanner<'a> {
    text: &'a str,
}

impl<'a> Scanner<'a> {
    fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&self, mut pos: usize) -> usize {
        while let Some(c) = self.text[pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            pos += c.len_utf8();
        }
        pos
    }

    fn ident_end(&self, pos: usize) -> usize {
        pos + self.text[pos..]
            .find(|c: char| !(c.is_ascii_lowercase() || c == '/'))
            .unwrap_or(self.text.len() - pos)
    }

    /// Parses a tag starting at `start` (which holds `<`).
    fn tag(&self, start: usize) -> Result<Tag<'a>> {
        let text = self.text;
        let name_end = self.ident_end(start + 1);
        let name = &text[start + 1..name_end];
        if name.is_empty() {
            return Err(self.error(start, "stray '<'"));
        }
        let mut attrs = Vec::new();
        let mut pos = name_end;
        loop {
            pos = self.skip_ws(pos);
            let rest = &text[pos..];
            if rest.starts_with("/>") {
                return Ok(Tag {
                    name,
                    attrs,
                    self_closing: true,
                    start,
                    end: pos + 2,
                });
            }
            if rest.starts_with('>') {
                return Ok(Tag {
                    name,
                    attrs,
                    self_closing: false,
                    start,
                    end: pos + 1,
                });
            }
            let key_end = pos + rest.find(|c: char| !c.is_ascii_lowercase()).unwrap_or(rest.len());
            if key_end == pos {
                return Err(self.error(pos, format!("malformed <{name}> tag")));
            }
            let key = &text[pos..key_end];
            if !text[key_end..].starts_with("=\"") {
                return Err(self.error(key_end, format!("attribute {key} needs a quoted value")));
            }
            let value_start = key_end + 2;
            let value_end = text[value_start..]
                .find('"')
                .map(|i| value_start + i)
                .ok_or_else(|| self.error(value_start, "unterminated attribute value"))?;
            if attrs.iter().any(|(k, _, _)| *k == key) {
                return Err(self.error(pos, format!("duplicate attribute {key}")));
            }
            attrs.push((key, &text[value_start..value_end], pos));
            pos = value_end + 1;
        }
    }
}

/// Parses annotated corpus text. Lexicon lookups give overt pronouns their
/// kind and number.
pub fn parse_document(text: &str, lexicon: &Lexicon) -> Result<Document> {
    let scanner = Scanner { text };
    let mut builder = TokenBuilder::default();
    let mut pronouns = Vec::new();
    let mut ids = HashSet::new();
    let mut zero_offsets = Vec::new();
    let mut pos = 0;

    while let Some(rel) = text[pos..].find('<') {
        let lt = pos + rel;
        builder.push_text(&text[pos..lt]);
        let tag = scanner.tag(lt)?;
        let attrs = Attributes::new(&scanner, &tag)?;
        let id = attrs.id()?;
        if !ids.insert(id) {
            return Err(scanner.error(tag.start, format!("duplicate pronoun id {id}")));
        }
        let gold = attrs.gold()?;
        match tag.name {
            "pro" => {
                if tag.self_closing {
                    return Err(scanner.error(tag.start, "<pro> must enclose the pronoun"));
                }
                attrs.only(&["id", "ant"], "overt pronouns take no kind/num attributes")?;
                let close = text[tag.end..]
                    .find("</pro>")
                    .map(|i| tag.end + i)
                    .ok_or_else(|| scanner.error(tag.start, "unclosed <pro> tag"))?;
                let surface = &text[tag.end..close];
                if surface.is_empty()
                    || surface.contains('<')
                    || surface.chars().any(char::is_whitespace)
                    || surface.chars().any(|c| is_punctuation(&c.to_string()))
                {
                    return Err(scanner.error(tag.end, format!("<pro> content {surface:?} is not a single word")));
                }
                let form = lexicon
                    .classify_pronoun(surface)
                    .ok_or_else(|| scanner.error(tag.end, format!("{surface:?} is not a known pronoun form")))?;
                builder.push_token(surface.to_string());
                pronouns.push(PronounMention {
                    id,
                    kind: form.kind,
                    number: form.number,
                    overtness: Overtness::Overt,
                    position: builder.len() - 1,
                    surface: surface.to_string(),
                    gold,
                    leading: String::new(),
                });
                pos = close + "</pro>".len();
            }
            "zero" => {
                if !tag.self_closing {
                    return Err(scanner.error(tag.start, "<zero> must be self-closing"));
                }
                attrs.only(&["id", "kind", "num", "ant"], "unknown attribute")?;
                let kind = match attrs.required("kind")? {
                    ("pers", _) => PronounKind::Personal,
                    ("refl", _) => PronounKind::Reflexive,
                    (v, at) => return Err(scanner.error(at, format!("kind must be pers or refl, got {v:?}"))),
                };
                let number = match attrs.required("num")? {
                    ("sg", _) => Number::Singular,
                    ("pl", _) => Number::Plural,
                    (v, at) => return Err(scanner.error(at, format!("num must be sg or pl, got {v:?}"))),
                };
                let (position, leading) = builder.mark_zero();
                zero_offsets.push((position, tag.start));
                pronouns.push(PronounMention {
                    id,
                    kind,
                    number,
                    overtness: Overtness::Zero,
                    position,
                    surface: String::new(),
                    gold,
                    leading,
                });
                pos = tag.end;
            }
            other => return Err(scanner.error(tag.start, format!("unknown tag <{other}>"))),
        }
    }
    builder.push_text(&text[pos..]);
    let (raw, trailing) = builder.finish();
    if let Some(&(_, offset)) = zero_offsets.iter().find(|(p, _)| *p >= raw.len()) {
        return Err(scanner.error(offset, "zero marker must precede a token"));
    }
    Ok(Document::assemble(raw, pronouns, trailing))
}

struct Attributes<'s, 'a> {
    scanner: &'s Scanner<'a>,
    tag_start: usize,
    attrs: Vec<(&'a str, &'a str, usize)>,
}

impl<'s, 'a> Attributes<'s, 'a> {
    fn new(scanner: &'s Scanner<'a>, tag: &Tag<'a>) -> Result<Self> {
        if !matches!(tag.name, "pro" | "zero") {
            return Err(scanner.error(tag.start, format!("unknown tag <{}>", tag.name)));
        }
        Ok(Attributes {
            scanner,
            tag_start: tag.start,
            attrs: tag.attrs.clone(),
        })
    }

    fn get(&self, key: &str) -> Option<(&'a str, usize)> {
        self.attrs.iter().find(|(k, _, _)| *k == key).map(|&(_, v, at)| (v, at))
    }

    fn required(&self, key: &str) -> Result<(&'a str, usize)> {
        self.get(key)
            .ok_or_else(|| self.scanner.error(self.tag_start, format!("missing attribute {key}")))
    }

    fn only(&self, allowed: &[&str], message: &str) -> Result<()> {
        match self.attrs.iter().find(|(k, _, _)| !allowed.contains(k)) {
            Some(&(k, _, at)) => Err(self.scanner.error(at, format!("{message}: {k}"))),
            None => Ok(()),
        }
    }

    fn id(&self) -> Result<u32> {
        let (value, at) = self.required("id")?;
        value
            .parse()
            .map_err(|_| self.scanner.error(at, format!("id must be a non-negative integer, got {value:?}")))
    }

    fn gold(&self) -> Result<Option<BTreeSet<String>>> {
        let Some((value, at)) = self.get("ant") else {
            return Ok(None);
        };
        let names: BTreeSet<String> = value.split(';').map(|n| n.trim().to_string()).collect();
        if names.iter().any(String::is_empty) {
            return Err(self.scanner.error(at, "ant must list non-empty names"));
        }
        Ok(Some(names))
    }
}

fn join_names(names: &BTreeSet<String>) -> String {
    names.iter().map(String::as_str).collect::<Vec<_>>().join(";")
}

/// Writes a document back in the annotated format. Attributes are emitted in
/// canonical order (`id`, `kind`, `num`, `ant`).
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    let pronouns = doc.pronouns();
    let mut next = 0;
    for token in doc.tokens() {
        while let Some(p) = pronouns.get(next).filter(|p| p.position == token.index && p.is_zero()) {
            out.push_str(&p.leading);
            let kind = match p.kind {
                PronounKind::Personal => "pers",
                PronounKind::Reflexive => "refl",
            };
            let num = match p.number {
                Number::Singular => "sg",
                Number::Plural => "pl",
            };
            let _ = write!(out, "<zero id=\"{}\" kind=\"{kind}\" num=\"{num}\"", p.id);
            if let Some(gold) = &p.gold {
                let _ = write!(out, " ant=\"{}\"", join_names(gold));
            }
            out.push_str("/>");
            next += 1;
        }
        out.push_str(&token.leading);
        match pronouns.get(next).filter(|p| p.position == token.index) {
            Some(p) => {
                let _ = write!(out, "<pro id=\"{}\"", p.id);
                if let Some(gold) = &p.gold {
                    let _ = write!(out, " ant=\"{}\"", join_names(gold));
                }
                let _ = write!(out, ">{}</pro>", token.surface);
                next += 1;
            }
            None => out.push_str(&token.surface),
        }
    }
    out.push_str(doc.trailing());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const NUMBER_AGREEMENT: &str = "Ayşe okula gitti. Ahmet ve Fatma <pro id=\"1\" ant=\"Ayşe\">onu</pro> gördü. \
<zero id=\"2\" kind=\"pers\" num=\"pl\" ant=\"Ahmet;Fatma\"/> <pro id=\"3\" ant=\"Ayşe\">Ona</pro> el salladılar.\n";

    fn parse(text: &str) -> Result<Document> {
        parse_document(text, &Lexicon::default())
    }

    #[test]
    fn overt_pronoun_properties_come_from_the_lexicon() {
        let doc = parse(NUMBER_AGREEMENT).unwrap();
        let onu = &doc.pronouns()[0];
        assert_eq!(onu.kind, PronounKind::Personal);
        assert_eq!(onu.number, Number::Singular);
        assert_eq!(onu.overtness, Overtness::Overt);
        assert_eq!(doc.tokens()[onu.position].surface, "onu");
        assert_eq!(onu.gold.as_ref().unwrap().iter().collect::<Vec<_>>(), ["Ayşe"]);
    }

    #[test]
    fn zero_pronoun_precedes_its_token() {
        let doc = parse(NUMBER_AGREEMENT).unwrap();
        let zero = &doc.pronouns()[1];
        assert_eq!(zero.overtness, Overtness::Zero);
        assert_eq!(zero.number, Number::Plural);
        assert_eq!(zero.kind, PronounKind::Personal);
        assert_eq!(doc.tokens()[zero.position].surface, "Ona");
        assert_eq!(doc.pronouns()[2].position, zero.position);
        assert_eq!(doc.pronoun_sentence(zero), 2);
        assert_eq!(zero.gold.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn empty_document() {
        let doc = parse("").unwrap();
        assert!(doc.tokens().is_empty());
        assert!(doc.pronouns().is_empty());
    }

    #[test]
    fn serialization_is_byte_identical() {
        assert_eq!(serialize_document(&parse(NUMBER_AGREEMENT).unwrap()), NUMBER_AGREEMENT);
        let glued = "x<pro id=\"7\">onu</pro>, \"<zero id=\"8\" kind=\"refl\" num=\"sg\"/>Gel.\"";
        assert_eq!(serialize_document(&parse(glued).unwrap()), glued);
    }

    #[test]
    fn attribute_order_is_canonicalized() {
        let doc = parse("<zero num=\"sg\" ant=\"Ali\" kind=\"pers\" id=\"4\"/> Koştu.").unwrap();
        let out = serialize_document(&doc);
        assert_eq!(out, "<zero id=\"4\" kind=\"pers\" num=\"sg\" ant=\"Ali\"/> Koştu.");
        assert_eq!(parse(&out).unwrap(), doc);
    }

    #[test]
    fn single_zero_tag_serializes_once() {
        let doc = parse("Ali geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Koştu.").unwrap();
        assert_eq!(serialize_document(&doc).matches("<zero").count(), 1);
    }

    #[test]
    fn replaced_pronoun_becomes_a_plain_name() {
        let mut doc = parse(NUMBER_AGREEMENT).unwrap();
        doc.replace_pronoun(1, &["Ayşe".into()]).unwrap();
        doc.replace_pronoun(2, &["Ahmet".into(), "Fatma".into()]).unwrap();
        doc.replace_pronoun(3, &["Ayşe".into()]).unwrap();
        assert_eq!(
            serialize_document(&doc),
            "Ayşe okula gitti. Ahmet ve Fatma Ayşe gördü. Ahmet ve Fatma Ayşe el salladılar.\n"
        );
        assert!(doc.pronouns().is_empty());
        assert_eq!(doc.sentences()[2].first, 10);
        assert_eq!(doc.tokens()[10].sentence_index, 2);
    }

    fn error_at(text: &str) -> (usize, usize, String) {
        match parse(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let (line, column, msg) = error_at("Ali geldi.\nSonra <pro id=\"1\">kitap</pro> aldı.");
        assert_eq!((line, column), (2, 19));
        assert!(msg.contains("not a known pronoun"), "{msg}");

        let (line, column, msg) = error_at("<pro id=\"1\">onu</pro> <pro id=\"1\">ona</pro>");
        assert_eq!((line, column), (1, 23));
        assert!(msg.contains("duplicate"));

        let (_, _, msg) = error_at("<zero id=\"1\" kind=\"pers\" num=\"du\"/> Gel.");
        assert!(msg.contains("num must be"));
        let (_, _, msg) = error_at("<pro id=\"1\" kind=\"pers\">onu</pro>");
        assert!(msg.contains("kind/num"));
        let (_, _, msg) = error_at("<pro id=\"1\">onu");
        assert!(msg.contains("unclosed"));
        let (_, _, msg) = error_at("Ali <b>geldi</b>.");
        assert!(msg.contains("unknown tag"));
        let (_, _, msg) = error_at("Ali geldi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/>");
        assert!(msg.contains("precede"));
        let (_, _, msg) = error_at("<zero id=\"1\" kind=\"pers\"/> Gel.");
        assert!(msg.contains("missing attribute num"));
        let (_, _, msg) = error_at("<pro id=\"1\" ant=\"\">onu</pro>");
        assert!(msg.contains("non-empty"));
        let (_, _, msg) = error_at("a < b");
        assert!(msg.contains("stray"));
    }
}
