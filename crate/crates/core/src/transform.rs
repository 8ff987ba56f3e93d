//! The just-finite construction: replace each relator r of a presentation
//! with the pair of relations r⁻¹·b·r = b², b⁻¹·r·b = r² over a fresh
//! generator b. The two relations force b = 1 and r = 1 (Neumann), so the
//! output presents the same group; deleting either one leaves a group with
//! a structural infiniteness witness.

use crate::presentation::{fresh_name, Presentation};
use crate::word::Word;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("relator must be nonempty")]
    EmptyRelator,
}

/// One input relator paired with its fresh generator and the indices of
/// the two output relators it produced.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RelatorPair {
    /// Index of the relator in the input presentation.
    pub input_relator: usize,
    /// Index of the fresh generator in the output alphabet.
    pub fresh_generator: usize,
    /// Output relator indices `(2i, 2i+1)`: first the b-conjugation
    /// relator r⁻¹·b·r·b⁻², then the r-conjugation relator b⁻¹·r·b·r⁻².
    pub output_relators: (usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TransformRecord {
    pub input: Presentation,
    pub output: Presentation,
    pub pairs: Vec<RelatorPair>,
}

/// The relator forms of the two Neumann relations for relator `r` and
/// fresh generator index `b`: `(r⁻¹·b·r·b⁻², b⁻¹·r·b·r⁻²)`, each freely
/// reduced over the extended alphabet.
///
/// The pair order is fixed: index 2i is the b-conjugation relator (the
/// one whose deletion leaves a surjection onto ℤ), index 2i+1 the
/// r-conjugation relator (the one whose deletion leaves an amalgam).
pub fn neumann_relators(r: &Word, b: usize) -> Result<(Word, Word), TransformError> {
    if r.is_empty() {
        return Err(TransformError::EmptyRelator);
    }
    let bw = Word::generator(b);
    let first = r
        .inverse()
        .multiply(&bw)
        .multiply(r)
        .multiply(&bw.pow(-2));
    let second = bw
        .inverse()
        .multiply(r)
        .multiply(&bw)
        .multiply(&r.pow(-2));
    Ok((first, second))
}

/// Builds the transformed presentation: generators are the input alphabet
/// followed by one fresh generator per relator (name hint `b`), and for
/// each input relator its two Neumann relators in order. Deficiency is
/// preserved: |X|+|R| generators, 2|R| relators.
///
/// The relator substituted into the new relations is the stored freely
/// reduced (not cyclically reduced) word, verbatim.
pub fn just_finite_transform(p: &Presentation) -> TransformRecord {
    let mut names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let mut fresh_indices = Vec::with_capacity(p.relator_count());
    for _ in 0..p.relator_count() {
        let name = fresh_name("b", |n| names.iter().any(|m| m == n));
        fresh_indices.push(names.len());
        names.push(name);
    }

    let mut relators = Vec::with_capacity(2 * p.relator_count());
    let mut pairs = Vec::with_capacity(p.relator_count());
    for (i, r) in p.relators().iter().enumerate() {
        let b = fresh_indices[i];
        let (first, second) = neumann_relators(r, b).expect("presentation relators are nonempty");
        let at = relators.len();
        relators.push(first);
        relators.push(second);
        pairs.push(RelatorPair { input_relator: i, fresh_generator: b, output_relators: (at, at + 1) });
    }

    let output = Presentation::new(names, relators).expect("transform output is structurally valid");
    TransformRecord { input: p.clone(), output, pairs }
}
