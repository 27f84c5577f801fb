//! Proper person-name gazetteer.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameDictionary {
    entries: BTreeSet<String>,
}

impl NameDictionary {
    /// Parses one name per line; blank lines and `#` comments are skipped,
    /// duplicates collapse. Every entry must be a single capitalized word.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = BTreeSet::new();
        for (n, line) in text.lines().enumerate() {
            let name = line.trim();
            if name.is_empty() || name.starts_with('#') {
                continue;
            }
            if name.chars().any(char::is_whitespace) {
                return Err(Error::data(origin, n + 1, format!("name {name:?} contains whitespace")));
            }
            if !name.chars().next().is_some_and(char::is_uppercase) {
                return Err(Error::data(origin, n + 1, format!("name {name:?} is not capitalized")));
            }
            entries.insert(name.to_string());
        }
        Ok(NameDictionary { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = read_utf8(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for NameDictionary {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        NameDictionary {
            entries: iter.into_iter().map(Into::into).collect(),
        }
    }
}

/// Reads a file that must be valid UTF-8, reporting the line of the first
/// invalid byte otherwise.
pub(crate) fn read_utf8(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| {
        let valid = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..valid].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::data(path.display().to_string(), line, "invalid UTF-8")
    })
}
