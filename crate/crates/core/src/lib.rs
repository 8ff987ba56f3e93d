//! Computational toolkit for finitely presented groups, built around the
//! just-finite presentation construction: replace every relator r by the
//! Neumann pair r⁻¹·b·r = b², b⁻¹·r·b = r² over a fresh generator b.
//! The crate can apply the construction, verify that the output presents
//! the same group, check irredundancy, and certify that deleting any
//! single relator from the output leaves an infinite group — via a
//! surjection onto ℤ, a finite-index subgroup with infinite
//! abelianization, or an amalgam decomposition.
//!
//! Engine modules: Todd–Coxeter coset enumeration, integer Smith normal
//! form, low-index subgroup search, and Reidemeister–Schreier rewriting.

pub mod abelian;
pub mod certify;
pub mod coset;
pub mod presentation;
pub mod subgroup;
pub mod syntax;
pub mod transform;
pub mod word;

pub use abelian::{abelian_invariants, maps_onto_z, AbelianInvariants, IntMatrix};
pub use certify::{
    check_irredundant, certify_case1_amalgam, certify_infinite, just_finite_report,
    verify_presents_same_group, Budget, Certificate, IrredundancyStatus, RelatorVerdict, Report,
    SameGroupVerdict, Summary,
};
pub use coset::{coset_enumerate, group_order, CosetTable, EnumerationOutcome, GroupOrder};
pub use presentation::{GeneratorId, Presentation, PresentationError};
pub use subgroup::{
    find_infinite_abelianization_subgroup, low_index_subgroups, rewrite_subgroup, SubgroupRecord,
};
pub use syntax::{parse_presentation, print_presentation, print_word, ParseError, SourceSpan};
pub use transform::{just_finite_transform, neumann_relators, RelatorPair, TransformRecord};
pub use word::{free_reduce, Letter, Word};
