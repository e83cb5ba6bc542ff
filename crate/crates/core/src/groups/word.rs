use std::fmt;

/// One factor `gen^exp` of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: String,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: impl Into<String>, exponent: i64) -> Self {
        Self {
            generator: generator.into(),
            exponent,
        }
    }
}

/// A word in named generators, stored as a sequence of syllables.
///
/// Words are not reduced automatically: concatenation keeps every syllable so
/// that relators can be written exactly as they appear. Call [`reduce`] (or
/// [`Word::reduced`]) to obtain the freely reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        Self::power_of(name, 1)
    }

    pub fn power_of(name: impl Into<String>, exponent: i64) -> Self {
        Self::from_syllables(vec![Syllable::new(name, exponent)])
    }

    pub fn from_syllables(syllables: Vec<Syllable>) -> Self {
        Self { syllables }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn letter_count(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn push(&mut self, generator: impl Into<String>, exponent: i64) {
        self.syllables.push(Syllable::new(generator, exponent));
    }

    /// Concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        Word { syllables }
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator.clone(), -s.exponent))
                .collect(),
        }
    }

    /// `self^k` as a concatenation; negative `k` uses the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut syllables = Vec::with_capacity(base.syllables.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            syllables.extend_from_slice(&base.syllables);
        }
        Word { syllables }
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    pub fn reduced(&self) -> Word {
        reduce(self)
    }

    pub fn is_reduced(&self) -> bool {
        self.syllables.iter().all(|s| s.exponent != 0)
            && self
                .syllables
                .windows(2)
                .all(|w| w[0].generator != w[1].generator)
    }

    /// Generator names in order of first appearance.
    pub fn generators(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for s in &self.syllables {
            if !seen.contains(&s.generator.as_str()) {
                seen.push(&s.generator);
            }
        }
        seen
    }
}

/// Free reduction: merge adjacent syllables in the same generator and drop
/// zero exponents, cascading through cancellations.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Syllable> = Vec::with_capacity(w.syllables.len());
    for s in &w.syllables {
        if s.exponent == 0 {
            continue;
        }
        match out.last_mut() {
            Some(top) if top.generator == s.generator => {
                top.exponent += s.exponent;
                if top.exponent == 0 {
                    out.pop();
                }
            }
            _ => out.push(s.clone()),
        }
    }
    Word { syllables: out }
}

impl fmt::Display for Word {
    /// Text form used by the presentation format: `a^2 b c^-1`. The empty
    /// word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s.exponent == 1 {
                write!(f, "{}", s.generator)?;
            } else {
                write!(f, "{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(parts: &[(&str, i64)]) -> Word {
        Word::from_syllables(parts.iter().map(|&(g, e)| Syllable::new(g, e)).collect())
    }

    #[test]
    fn free_cancellation() {
        assert_eq!(reduce(&w(&[("a", 1), ("b", 1), ("b", -1)])), w(&[("a", 1)]));
    }

    #[test]
    fn empty_stays_empty() {
        assert!(reduce(&Word::identity()).is_empty());
    }

    #[test]
    fn exponents_merge() {
        assert_eq!(reduce(&w(&[("a", 2), ("a", 3)])), w(&[("a", 5)]));
    }

    #[test]
    fn cascading_cancellation() {
        let word = w(&[("a", 1), ("b", 2), ("c", 1), ("c", -1), ("b", -2), ("a", -1)]);
        assert!(reduce(&word).is_empty());
    }

    #[test]
    fn commutator_of_distinct_generators_is_reduced() {
        let c = Word::commutator(&Word::generator("a"), &Word::generator("b"));
        assert_eq!(c.to_string(), "a b a^-1 b^-1");
        assert_eq!(c.reduced(), c);
    }

    #[test]
    fn inverse_and_pow() {
        let x = w(&[("a", 2), ("b", -1)]);
        assert!(x.concat(&x.inverse()).reduced().is_empty());
        assert_eq!(x.pow(2).syllable_count(), 4);
        assert_eq!(x.pow(-1), x.inverse());
        assert!(x.pow(0).is_empty());
    }
}
