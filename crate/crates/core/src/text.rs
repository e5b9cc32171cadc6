//! Name and identifier normalization.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Strips diacritics, lowercases, maps non-alphanumerics to spaces and
/// collapses whitespace.
pub fn fold_person_text(s: &str) -> String {
    let stripped: String = s.nfd().filter(|c| !is_combining_mark(*c)).collect();
    let mapped: String = stripped
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .flat_map(char::to_lowercase)
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Organization-name folding used for registry lookups: lowercase, drop
/// punctuation, collapse whitespace, drop a leading "the".
pub fn fold_org_name(s: &str) -> String {
    let mapped: String = s
        .chars()
        .filter_map(|c| {
            if c.is_alphanumeric() {
                Some(c)
            } else if c.is_whitespace() || matches!(c, '-' | '/' | '–' | '—') {
                Some(' ')
            } else {
                None
            }
        })
        .flat_map(char::to_lowercase)
        .collect();
    let mut words: Vec<&str> = mapped.split_whitespace().collect();
    if words.first() == Some(&"the") {
        words.remove(0);
    }
    words.join(" ")
}

/// A person name split into folded surname and given-name tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PersonName {
    pub surname: String,
    pub given: Vec<String>,
}

impl PersonName {
    /// Understands "Given Family" and "Family, Given". Upper-case runs of up
    /// to three letters ("JH") are read as separate initials.
    pub fn parse(raw: &str) -> PersonName {
        let (family_part, given_part) = match raw.split_once(',') {
            Some((family, given)) => (Some(family), given),
            None => (None, raw),
        };
        let given_tokens = |s: &str| -> Vec<String> {
            let mut out = Vec::new();
            for tok in s.split(|c: char| c.is_whitespace() || c == '.' || c == '-') {
                if tok.is_empty() {
                    continue;
                }
                let letters = tok.chars().count();
                if letters > 1 && letters <= 3 && tok.chars().all(|c| c.is_uppercase()) {
                    out.extend(tok.chars().map(|c| fold_person_text(&c.to_string())));
                } else {
                    let f = fold_person_text(tok);
                    if !f.is_empty() {
                        out.extend(f.split(' ').map(str::to_string));
                    }
                }
            }
            out
        };
        match family_part {
            Some(family) => PersonName {
                surname: fold_person_text(family),
                given: given_tokens(given_part),
            },
            None => {
                let mut tokens = given_tokens(given_part);
                let surname = tokens.pop().unwrap_or_default();
                PersonName { surname, given: tokens }
            }
        }
    }

    /// Same surname and pairwise-compatible given names, where an initial
    /// matches any name starting with that letter.
    pub fn compatible(&self, other: &PersonName) -> bool {
        if self.surname.is_empty() || self.surname != other.surname {
            return false;
        }
        if self.given.is_empty() || other.given.is_empty() {
            return false;
        }
        self.given
            .iter()
            .zip(other.given.iter())
            .all(|(a, b)| token_compatible(a, b))
    }
}

fn token_compatible(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    let single = |s: &str| s.chars().count() == 1;
    match (single(a), single(b)) {
        (true, false) => b.starts_with(a),
        (false, true) => a.starts_with(b),
        _ => false,
    }
}
