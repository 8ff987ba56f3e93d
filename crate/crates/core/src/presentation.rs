//! The `Presentation` value type and structural edits: relator removal,
//! deficiency, fresh generator names.

use crate::word::Word;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A named generator. `index` is its position in the presentation's
/// alphabet; letters refer to generators by this index.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GeneratorId {
    pub index: usize,
    pub name: String,
}

/// True for identifiers matching `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {0} uses generator index {1}, but only {2} generators are declared")]
    UndeclaredGenerator(usize, usize, usize),
    #[error("relator {0} is the empty word")]
    EmptyRelator(usize),
    #[error("relator index {0} out of range ({1} relators)")]
    RelatorIndexOutOfRange(usize, usize),
}

/// A finite presentation: an ordered alphabet of generators and an
/// ordered sequence of freely reduced, nonempty relators.
///
/// Relators are a sequence, not a set: deterministic indexing is what
/// lets reports and the relator/fresh-generator pairing name things.
/// Structural duplicates are permitted; certification reports them
/// as redundant.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<GeneratorId>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new<S: Into<String>>(
        names: Vec<S>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let mut generators = Vec::with_capacity(names.len());
        for (index, name) in names.into_iter().enumerate() {
            let name = name.into();
            if !is_valid_generator_name(&name) {
                return Err(PresentationError::InvalidGeneratorName(name));
            }
            if generators.iter().any(|g: &GeneratorId| g.name == name) {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            generators.push(GeneratorId { index, name });
        }
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator(i));
            }
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(PresentationError::UndeclaredGenerator(i, g, generators.len()));
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Deletes relator `i`, leaving the generators unchanged. This is the
    /// construction of the deleted-relation groups whose infiniteness the
    /// certification pipeline investigates.
    pub fn remove_relator(&self, i: usize) -> Result<Presentation, PresentationError> {
        if i >= self.relators.len() {
            return Err(PresentationError::RelatorIndexOutOfRange(i, self.relators.len()));
        }
        let mut relators = self.relators.clone();
        relators.remove(i);
        Ok(Presentation { generators: self.generators.clone(), relators })
    }

    /// |generators| − |relators|.
    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    /// First unused name among `hint`, `hint1`, `hint2`, ... relative to
    /// this presentation's alphabet. Deterministic.
    pub fn fresh_generator(&self, hint: &str) -> GeneratorId {
        let name = fresh_name(hint, |n| self.generator_index(n).is_some());
        GeneratorId { index: self.generators.len(), name }
    }

    /// Appends a generator; the name must be fresh and valid.
    pub fn push_generator(&mut self, name: String) -> Result<usize, PresentationError> {
        if !is_valid_generator_name(&name) {
            return Err(PresentationError::InvalidGeneratorName(name));
        }
        if self.generator_index(&name).is_some() {
            return Err(PresentationError::DuplicateGenerator(name));
        }
        let index = self.generators.len();
        self.generators.push(GeneratorId { index, name });
        Ok(index)
    }

    /// Appends a nonempty relator over the current alphabet.
    pub fn push_relator(&mut self, relator: Word) -> Result<usize, PresentationError> {
        let i = self.relators.len();
        if relator.is_empty() {
            return Err(PresentationError::EmptyRelator(i));
        }
        if let Some(g) = relator.max_generator() {
            if g >= self.generators.len() {
                return Err(PresentationError::UndeclaredGenerator(i, g, self.generators.len()));
            }
        }
        self.relators.push(relator);
        Ok(i)
    }
}

/// First of `hint`, `hint1`, `hint2`, ... for which `taken` is false.
pub fn fresh_name(hint: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(hint) {
        return hint.to_string();
    }
    for k in 1usize.. {
        let candidate = format!("{hint}{k}");
        if !taken(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}
