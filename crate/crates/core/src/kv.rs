//! Minimal `key = value` text format shared by sensor sidecars and noise
//! registries. `#` starts a comment, blank lines are ignored and a line of the
//! form `[name]` opens a new section.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub name: Option<String>,
    pub entries: Vec<(String, String)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str, what: &'static str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::format(what, format!("missing required key `{key}`")))
    }

    pub fn parse_num<T: std::str::FromStr>(&self, key: &str, what: &'static str) -> Result<T> {
        let raw = self.require(key, what)?;
        raw.parse()
            .map_err(|_| Error::format(what, format!("key `{key}` has unparsable value `{raw}`")))
    }
}

/// Parses text into sections. Entries before the first header land in an
/// unnamed leading section, which is always present.
pub fn parse(text: &str, what: &'static str) -> Result<Vec<Section>> {
    let mut sections = vec![Section::default()];
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push(Section {
                name: Some(name.trim().to_string()),
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::format(what, format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::format(what, format!("line {}: empty key", lineno + 1)));
        }
        let value = value.trim().trim_matches('"');
        sections
            .last_mut()
            .expect("at least one section")
            .entries
            .push((key.to_string(), value.to_string()));
    }
    Ok(sections)
}
