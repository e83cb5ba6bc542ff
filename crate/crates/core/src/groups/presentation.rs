use std::collections::HashSet;

use super::{GroupError, Word};

/// A finite presentation: ordered generator names and relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

pub(crate) fn is_valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !is_valid_generator_name(g) {
                return Err(GroupError::InvalidGeneratorName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(GroupError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            for s in r.syllables() {
                if !seen.contains(s.generator.as_str()) {
                    return Err(GroupError::UnknownGenerator(s.generator.clone()));
                }
            }
        }
        Ok(Self {
            generators,
            relators,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Same group with the generator list permuted; `order[i]` is the old
    /// index placed at position `i`.
    pub fn with_generator_order(&self, order: &[usize]) -> Result<Self, GroupError> {
        let generators = order.iter().map(|&i| self.generators[i].clone()).collect();
        Self::new(generators, self.relators.clone())
    }

    /// Serialize in the line-oriented text format:
    ///
    /// ```text
    /// gens: a b c
    /// rel: a^4
    /// rel: b c^-2
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relators {
            out.push_str(&format!("rel: {r}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GroupError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if generators.is_some() {
                    return Err(GroupError::Parse {
                        line: line_no,
                        message: "duplicate gens line".into(),
                    });
                }
                generators = Some(rest.split_whitespace().map(str::to_owned).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                relators.push(parse_word(rest).map_err(|message| GroupError::Parse {
                    line: line_no,
                    message,
                })?);
            } else {
                return Err(GroupError::Parse {
                    line: line_no,
                    message: format!("expected `gens:` or `rel:`, found `{line}`"),
                });
            }
        }
        let generators = generators.ok_or(GroupError::Parse {
            line: 0,
            message: "missing gens line".into(),
        })?;
        Self::new(generators, relators)
    }
}

/// Parse a word written as juxtaposed tokens `name` or `name^k`.
pub fn parse_word(text: &str) -> Result<Word, String> {
    let mut word = Word::identity();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        let (name, exponent) = match token.split_once('^') {
            Some((name, exp)) => {
                let e: i64 = exp
                    .parse()
                    .map_err(|_| format!("bad exponent in `{token}`"))?;
                (name, e)
            }
            None => (token, 1),
        };
        if !is_valid_generator_name(name) {
            return Err(format!("bad generator name `{name}`"));
        }
        word.push(name, exponent);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "gens: a b c\nrel: a^4\nrel: b c^-2\n";
        let p = Presentation::from_text(text).unwrap();
        assert_eq!(p.generators(), ["a", "b", "c"]);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.to_text(), text);
        assert_eq!(Presentation::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_generator() {
        let err = Presentation::from_text("gens: a\nrel: b^2\n").unwrap_err();
        assert!(matches!(err, GroupError::UnknownGenerator(ref g) if g == "b"));
    }

    #[test]
    fn rejects_bad_names_and_exponents() {
        assert!(Presentation::from_text("gens: 1a\n").is_err());
        assert!(Presentation::from_text("gens: a\nrel: a^x\n").is_err());
        assert!(Presentation::from_text("rel: a\n").is_err());
        assert!(Presentation::from_text("gens: a a\n").is_err());
    }

    #[test]
    fn accepts_underscored_names() {
        let p = Presentation::from_text("gens: x_1 Y2\nrel: x_1^3 Y2^-1\n").unwrap();
        assert_eq!(p.generator_index("Y2"), Some(1));
    }
}
