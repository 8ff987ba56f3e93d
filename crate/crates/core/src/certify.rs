//! The certification pipeline: same-group verification, irredundancy
//! checking, infiniteness certificates, and the full just-finite report.
//!
//! Every `Infinite*` certificate carries a witness that can be
//! re-validated independently; `Unknown` records the exhausted budget and
//! is never silently upgraded.

use crate::abelian::{abelian_invariants, nonzero_in_abelianization};
use crate::coset::{coset_enumerate, group_order, EnumerationOutcome, GroupOrder};
use crate::presentation::Presentation;
use crate::subgroup::{find_infinite_abelianization_subgroup, low_index_subgroups};
use crate::syntax::print_presentation;
use crate::transform::TransformRecord;
use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};
use std::fmt;
use thiserror::Error;

/// Budgets for the semi-decidable parts of the pipeline.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Budget {
    pub max_cosets: usize,
    pub max_index: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_cosets: 100_000, max_index: 8 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("second presentation's generators must extend the first's")]
    AlphabetMismatch,
    #[error("relator index {0} out of range ({1} relators)")]
    RelatorIndexOutOfRange(usize, usize),
}

/// Order of the deleted relator in the deleted-relation group, when the
/// amalgam certificate could pin it down.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RelatorOrder {
    Finite(u64),
    /// The deleted-relation group itself was certified infinite without
    /// completing an enumeration, so the order was not computed.
    UnknownButGroupInfinite,
}

/// Structured evidence of finiteness or infiniteness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// The group was enumerated completely; it is finite of this order.
    /// For a relator-removal check this refutes infiniteness.
    Finite { order: u64 },
    /// The abelianization has free rank ≥ 1: the group surjects onto ℤ.
    InfiniteViaZSurjection { free_rank: usize },
    /// A subgroup of this index has infinite abelianization.
    InfiniteViaSubgroup { index: usize, subgroup_free_rank: usize },
    /// Deleting the r-conjugation relator of pair `relator_index` leaves
    /// an amalgamated free product H ∗⟨r⟩ B' with [B' : ⟨r⟩] = 2^k − 1 ≥ 3
    /// and [H : ⟨r⟩] ≥ 2, hence a nontrivial amalgam.
    InfiniteViaAmalgam {
        relator_index: usize,
        relator_order: RelatorOrder,
        /// 2^k − 1 when the relator order k is finite.
        amalgam_index: Option<BigUint>,
        /// |H| when the deleted-relation group is finite.
        vertex_group_order: Option<u64>,
        /// [H : ⟨r⟩] when computable.
        vertex_subgroup_index: Option<usize>,
        /// When H is infinite, the certificate that established it.
        vertex_group_certificate: Option<Box<Certificate>>,
    },
    Unknown { max_cosets: usize, max_index: usize },
}

impl Certificate {
    pub fn is_infinite(&self) -> bool {
        matches!(
            self,
            Certificate::InfiniteViaZSurjection { .. }
                | Certificate::InfiniteViaSubgroup { .. }
                | Certificate::InfiniteViaAmalgam { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Finite { .. } => "finite",
            Certificate::InfiniteViaZSurjection { .. } => "infinite-z-surjection",
            Certificate::InfiniteViaSubgroup { .. } => "infinite-subgroup",
            Certificate::InfiniteViaAmalgam { .. } => "infinite-amalgam",
            Certificate::Unknown { .. } => "unknown",
        }
    }

    pub fn witness_json(&self) -> Value {
        match self {
            Certificate::Finite { order } => json!({ "order": order }),
            Certificate::InfiniteViaZSurjection { free_rank } => json!({ "free_rank": free_rank }),
            Certificate::InfiniteViaSubgroup { index, subgroup_free_rank } => {
                json!({ "index": index, "subgroup_free_rank": subgroup_free_rank })
            }
            Certificate::InfiniteViaAmalgam {
                relator_index,
                relator_order,
                amalgam_index,
                vertex_group_order,
                vertex_subgroup_index,
                vertex_group_certificate,
            } => {
                let k = match relator_order {
                    RelatorOrder::Finite(k) => json!(k),
                    RelatorOrder::UnknownButGroupInfinite => json!("unknown-but-infinite"),
                };
                json!({
                    "relator_index": relator_index,
                    "relator_order": k,
                    "amalgam_index": amalgam_index.as_ref().map(|v| v.to_string()),
                    "vertex_group_order": vertex_group_order,
                    "vertex_subgroup_index": vertex_subgroup_index,
                    "vertex_group_certificate": vertex_group_certificate.as_ref().map(|c| {
                        json!({ "certificate_kind": c.kind(), "witness": c.witness_json() })
                    }),
                })
            }
            Certificate::Unknown { max_cosets, max_index } => {
                json!({ "max_cosets": max_cosets, "max_index": max_index })
            }
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Finite { order } => write!(f, "finite of order {order}"),
            Certificate::InfiniteViaZSurjection { free_rank } => {
                write!(f, "infinite: surjects onto Z (free rank {free_rank})")
            }
            Certificate::InfiniteViaSubgroup { index, subgroup_free_rank } => write!(
                f,
                "infinite: subgroup of index {index} with free abelian rank {subgroup_free_rank}"
            ),
            Certificate::InfiniteViaAmalgam {
                relator_order, amalgam_index, vertex_group_order, ..
            } => {
                write!(f, "infinite: nontrivial amalgam")?;
                match relator_order {
                    RelatorOrder::Finite(k) => {
                        write!(f, " (k = {k}")?;
                        if let Some(idx) = amalgam_index {
                            write!(f, ", edge index 2^k-1 = {idx}")?;
                        }
                        if let Some(o) = vertex_group_order {
                            write!(f, ", |H| = {o}")?;
                        }
                        write!(f, ")")
                    }
                    RelatorOrder::UnknownButGroupInfinite => {
                        write!(f, " (deleted-relation group certified infinite)")
                    }
                }
            }
            Certificate::Unknown { max_cosets, max_index } => write!(
                f,
                "unknown (budget exhausted: max_cosets = {max_cosets}, max_index = {max_index})"
            ),
        }
    }
}

/// Outcome of comparing a presentation with a candidate presentation of
/// the same group over an extended alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SameGroupVerdict {
    Same,
    Different { reason: String },
    Unknown { max_cosets: usize },
}

/// Verifies that `q` presents the same group as `p`, where `q`'s
/// generator list begins with `p`'s. Establishes a surjection between
/// groups of equal finite order, hence an isomorphism: orders match,
/// every relator of `p` holds in `q`, and every extra generator of `q`
/// is trivial there.
pub fn verify_presents_same_group(
    p: &Presentation,
    q: &Presentation,
    budget: Budget,
) -> Result<SameGroupVerdict, CertifyError> {
    if q.generator_count() < p.generator_count()
        || p.generators()
            .iter()
            .zip(q.generators())
            .any(|(a, b)| a.name != b.name)
    {
        return Err(CertifyError::AlphabetMismatch);
    }
    let order_p = match group_order(p, budget.max_cosets) {
        GroupOrder::Finite(o) => o,
        GroupOrder::Overflow { max_cosets } => return Ok(SameGroupVerdict::Unknown { max_cosets }),
    };
    let (table_q, order_q) = match coset_enumerate(q, &[], budget.max_cosets) {
        EnumerationOutcome::Complete { table, index } => (table, index as u64),
        EnumerationOutcome::Overflow { max_cosets } => {
            return Ok(SameGroupVerdict::Unknown { max_cosets })
        }
    };
    if order_p != order_q {
        return Ok(SameGroupVerdict::Different {
            reason: format!("orders differ: {order_p} vs {order_q}"),
        });
    }
    for (i, r) in p.relators().iter().enumerate() {
        if !table_q.word_acts_trivially(r) {
            return Ok(SameGroupVerdict::Different {
                reason: format!("relator {i} of the first presentation is nontrivial in the second"),
            });
        }
    }
    for g in p.generator_count()..q.generator_count() {
        if !table_q.word_acts_trivially(&crate::word::Word::generator(g)) {
            return Ok(SameGroupVerdict::Different {
                reason: format!("extra generator `{}` is nontrivial", q.generators()[g].name),
            });
        }
    }
    Ok(SameGroupVerdict::Same)
}

/// How one relator's irredundancy was settled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IrredundancyStatus {
    /// r ≠ 1 in ⟨X | R \ {r}⟩, with the witness that showed it.
    CertifiedIrredundant { witness: IrredundancyWitness },
    /// r = 1 already holds without the relator.
    Redundant,
    Unknown { max_cosets: usize, max_index: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IrredundancyWitness {
    /// The deleted-relation group is finite and r acts nontrivially in
    /// its regular representation; `relator_order` is the order of r
    /// there (the k used by the amalgam certificate).
    FiniteQuotient { group_order: u64, relator_order: u64 },
    /// r has nonzero image in the abelianization of the deleted-relation
    /// group (free or torsion coordinate).
    AbelianizationImage,
    /// r acts nontrivially on the cosets of a subgroup of this index.
    FiniteIndexAction { index: usize },
}

impl IrredundancyStatus {
    pub fn status_str(&self) -> &'static str {
        match self {
            IrredundancyStatus::CertifiedIrredundant { .. } => "certified-irredundant",
            IrredundancyStatus::Redundant => "redundant",
            IrredundancyStatus::Unknown { .. } => "unknown",
        }
    }

    pub fn to_json(&self, relator_index: usize) -> Value {
        let witness = match self {
            IrredundancyStatus::CertifiedIrredundant { witness } => match witness {
                IrredundancyWitness::FiniteQuotient { group_order, relator_order } => {
                    json!({ "kind": "finite-quotient", "group_order": group_order, "relator_order": relator_order })
                }
                IrredundancyWitness::AbelianizationImage => {
                    json!({ "kind": "abelianization-image" })
                }
                IrredundancyWitness::FiniteIndexAction { index } => {
                    json!({ "kind": "finite-index-action", "index": index })
                }
            },
            _ => Value::Null,
        };
        json!({ "relator_index": relator_index, "status": self.status_str(), "witness": witness })
    }
}

/// Tests each relator r against H_r = ⟨X | R \ {r}⟩. When H_r enumerates
/// completely, r is redundant iff it acts trivially in the regular
/// representation. When H_r overflows, two fallbacks still certify
/// r ≠ 1 in H_r: a nonzero image in the abelianization of H_r, or a
/// nontrivial action on the cosets of some subgroup of index
/// ≤ max_index.
pub fn check_irredundant(p: &Presentation, budget: Budget) -> Vec<IrredundancyStatus> {
    let mut out = Vec::with_capacity(p.relator_count());
    for i in 0..p.relator_count() {
        let h = p.remove_relator(i).expect("index in range");
        let r = &p.relators()[i];
        // A relator duplicated elsewhere in the list is redundant without
        // any enumeration (words are kept freely reduced, so equality is
        // canonical).
        if h.relators().contains(r) {
            out.push(IrredundancyStatus::Redundant);
            continue;
        }
        let status = match coset_enumerate(&h, &[], budget.max_cosets) {
            EnumerationOutcome::Complete { table, index } => {
                if table.word_acts_trivially(r) {
                    IrredundancyStatus::Redundant
                } else {
                    IrredundancyStatus::CertifiedIrredundant {
                        witness: IrredundancyWitness::FiniteQuotient {
                            group_order: index as u64,
                            relator_order: table.element_order(r),
                        },
                    }
                }
            }
            EnumerationOutcome::Overflow { .. } => {
                if nonzero_in_abelianization(&h, r) {
                    IrredundancyStatus::CertifiedIrredundant {
                        witness: IrredundancyWitness::AbelianizationImage,
                    }
                } else if let Some(rec) = low_index_subgroups(&h, budget.max_index)
                    .into_iter()
                    .find(|rec| !rec.table.permutation_is_identity(r))
                {
                    IrredundancyStatus::CertifiedIrredundant {
                        witness: IrredundancyWitness::FiniteIndexAction { index: rec.index },
                    }
                } else {
                    IrredundancyStatus::Unknown {
                        max_cosets: budget.max_cosets,
                        max_index: budget.max_index,
                    }
                }
            }
        };
        out.push(status);
    }
    out
}

/// Tries, in order of cost and generality: surjection onto ℤ, a
/// finite-index subgroup with infinite abelianization, and a complete
/// enumeration (a finiteness refutation). Never claims infiniteness
/// without a checkable witness.
pub fn certify_infinite(p: &Presentation, budget: Budget) -> Certificate {
    let inv = abelian_invariants(p);
    if inv.free_rank >= 1 {
        return Certificate::InfiniteViaZSurjection { free_rank: inv.free_rank };
    }
    if let Some(rec) = find_infinite_abelianization_subgroup(p, budget.max_index) {
        let free_rank = abelian_invariants(&rec.presentation).free_rank;
        return Certificate::InfiniteViaSubgroup { index: rec.index, subgroup_free_rank: free_rank };
    }
    match group_order(p, budget.max_cosets) {
        GroupOrder::Finite(order) => Certificate::Finite { order },
        GroupOrder::Overflow { max_cosets } => {
            Certificate::Unknown { max_cosets, max_index: budget.max_index }
        }
    }
}

/// Amalgam certificate for deleting the r-conjugation relator (output
/// index 2i+1) of transformed pair `i`. With H = ⟨X | R \ {r}⟩ and k the
/// order of r in H, the remaining group decomposes as H ∗⟨r⟩ B' with
/// [B' : ⟨r⟩] = 2^k − 1; the amalgam is nontrivial when k ≥ 2 and
/// H ≠ ⟨r⟩. When H itself is infinite the decomposition holds with the
/// k = ∞ edge group (Baumslag–Solitar B'), and a certificate for H's
/// infiniteness is attached instead.
pub fn certify_case1_amalgam(
    t: &TransformRecord,
    i: usize,
    budget: Budget,
) -> Result<Certificate, CertifyError> {
    if i >= t.input.relator_count() {
        return Err(CertifyError::RelatorIndexOutOfRange(i, t.input.relator_count()));
    }
    let h = t.input.remove_relator(i).expect("index in range");
    let r = &t.input.relators()[i];
    match coset_enumerate(&h, &[], budget.max_cosets) {
        EnumerationOutcome::Complete { table, index } => {
            let order = index as u64;
            let k = table.element_order(r);
            // [H : ⟨r⟩], re-derived by enumerating the cyclic subgroup.
            let subgroup_index = match coset_enumerate(&h, std::slice::from_ref(r), budget.max_cosets)
            {
                EnumerationOutcome::Complete { index, .. } => index,
                EnumerationOutcome::Overflow { max_cosets } => {
                    return Ok(Certificate::Unknown { max_cosets, max_index: budget.max_index })
                }
            };
            debug_assert_eq!(subgroup_index as u64 * k, order);
            if k >= 2 && subgroup_index >= 2 {
                let amalgam_index = (BigUint::one() << k) - BigUint::one();
                Ok(Certificate::InfiniteViaAmalgam {
                    relator_index: i,
                    relator_order: RelatorOrder::Finite(k),
                    amalgam_index: Some(amalgam_index),
                    vertex_group_order: Some(order),
                    vertex_subgroup_index: Some(subgroup_index),
                    vertex_group_certificate: None,
                })
            } else {
                // k = 1 means the relator was redundant; subgroup_index
                // = 1 is the cyclic escape. Neither supports the amalgam.
                Ok(Certificate::Unknown {
                    max_cosets: budget.max_cosets,
                    max_index: budget.max_index,
                })
            }
        }
        EnumerationOutcome::Overflow { .. } => {
            let inner = certify_infinite(&h, budget);
            if inner.is_infinite() {
                // [H : ⟨r⟩] may still complete even though H is infinite.
                let subgroup_index =
                    match coset_enumerate(&h, std::slice::from_ref(r), budget.max_cosets) {
                        EnumerationOutcome::Complete { index, .. } => Some(index),
                        EnumerationOutcome::Overflow { .. } => None,
                    };
                Ok(Certificate::InfiniteViaAmalgam {
                    relator_index: i,
                    relator_order: RelatorOrder::UnknownButGroupInfinite,
                    amalgam_index: None,
                    vertex_group_order: None,
                    vertex_subgroup_index: subgroup_index,
                    vertex_group_certificate: Some(Box::new(inner)),
                })
            } else {
                Ok(Certificate::Unknown {
                    max_cosets: budget.max_cosets,
                    max_index: budget.max_index,
                })
            }
        }
    }
}

/// Verdict for one relator removal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelatorVerdict {
    pub relator_index: usize,
    pub removed: Presentation,
    pub certificate: Certificate,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Summary {
    JustFinite,
    NotJustFinite { finite_removal: usize },
    Inconclusive { note: String },
}

impl Summary {
    pub fn as_str(&self) -> &'static str {
        match self {
            Summary::JustFinite => "just-finite",
            Summary::NotJustFinite { .. } => "not-just-finite",
            Summary::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Report {
    pub presentation: Presentation,
    pub deficiency: i64,
    /// Irredundancy of the transform input when a record is attached,
    /// otherwise of the reported presentation itself.
    pub irredundancy: Vec<IrredundancyStatus>,
    pub verdicts: Vec<RelatorVerdict>,
    pub summary: Summary,
    pub budget: Budget,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let budget = json!({ "max_cosets": self.budget.max_cosets, "max_index": self.budget.max_index });
        json!({
            "presentation": print_presentation(&self.presentation),
            "deficiency": self.deficiency,
            "irredundancy": self
                .irredundancy
                .iter()
                .enumerate()
                .map(|(i, s)| s.to_json(i))
                .collect::<Vec<_>>(),
            "verdicts": self
                .verdicts
                .iter()
                .map(|v| json!({
                    "relator_index": v.relator_index,
                    "certificate_kind": v.certificate.kind(),
                    "witness": v.certificate.witness_json(),
                    "budget_used": budget,
                }))
                .collect::<Vec<_>>(),
            "summary": self.summary.as_str(),
            "summary_note": match &self.summary {
                Summary::Inconclusive { note } => Value::String(note.clone()),
                Summary::NotJustFinite { finite_removal } =>
                    Value::String(format!("removal {finite_removal} leaves a finite group")),
                Summary::JustFinite => Value::Null,
            },
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "presentation: {}", print_presentation(&self.presentation))?;
        writeln!(f, "deficiency: {}", self.deficiency)?;
        writeln!(f, "irredundancy:")?;
        for (i, s) in self.irredundancy.iter().enumerate() {
            writeln!(f, "  relator {i}: {}", s.status_str())?;
        }
        writeln!(f, "relator removals:")?;
        for v in &self.verdicts {
            writeln!(f, "  relator {}: {}", v.relator_index, v.certificate)?;
        }
        match &self.summary {
            Summary::JustFinite => write!(f, "summary: just-finite"),
            Summary::NotJustFinite { finite_removal } => write!(
                f,
                "summary: not-just-finite (removal {finite_removal} leaves a finite group)"
            ),
            Summary::Inconclusive { note } => write!(f, "summary: inconclusive ({note})"),
        }
    }
}

/// Certifies, relator by relator, that deleting any single relator from
/// `p` leaves an infinite group. When `record` carries the transform that
/// produced `p`, the structural certificates of the construction are
/// used: deleting relator 2i is checked by the direct surjection onto ℤ,
/// deleting relator 2i+1 by the amalgam certificate.
pub fn just_finite_report(
    p: &Presentation,
    record: Option<&TransformRecord>,
    budget: Budget,
) -> Report {
    if let Some(rec) = record {
        debug_assert_eq!(&rec.output, p, "record must match the reported presentation");
    }
    let irredundancy_target = record.map(|r| &r.input).unwrap_or(p);
    let irredundancy = check_irredundant(irredundancy_target, budget);

    let mut verdicts = Vec::with_capacity(p.relator_count());
    for j in 0..p.relator_count() {
        let removed = p.remove_relator(j).expect("index in range");
        let certificate = match record {
            Some(rec) => {
                let pair = rec
                    .pairs
                    .iter()
                    .find(|pair| pair.output_relators.0 == j || pair.output_relators.1 == j);
                match pair {
                    Some(pair) if pair.output_relators.0 == j => {
                        // The b-conjugation relator was removed; the
                        // fresh generator maps onto ℤ.
                        certify_infinite(&removed, budget)
                    }
                    Some(pair) => {
                        let inv = abelian_invariants(&removed);
                        if inv.free_rank >= 1 {
                            Certificate::InfiniteViaZSurjection { free_rank: inv.free_rank }
                        } else {
                            let amalgam =
                                certify_case1_amalgam(rec, pair.input_relator, budget)
                                    .expect("pair index in range");
                            if amalgam.is_infinite() {
                                amalgam
                            } else {
                                certify_infinite(&removed, budget)
                            }
                        }
                    }
                    None => certify_infinite(&removed, budget),
                }
            }
            None => certify_infinite(&removed, budget),
        };
        verdicts.push(RelatorVerdict { relator_index: j, removed, certificate });
    }

    let summary = if let Some(v) = verdicts.iter().find(|v| matches!(v.certificate, Certificate::Finite { .. })) {
        Summary::NotJustFinite { finite_removal: v.relator_index }
    } else if verdicts.iter().all(|v| v.certificate.is_infinite()) {
        let redundant: Vec<usize> = irredundancy
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, IrredundancyStatus::Redundant))
            .map(|(i, _)| i)
            .collect();
        if record.is_some() && !redundant.is_empty() {
            Summary::Inconclusive {
                note: format!(
                    "input relators {redundant:?} are redundant; the construction requires an irredundant input"
                ),
            }
        } else {
            Summary::JustFinite
        }
    } else {
        let unknown: Vec<usize> = verdicts
            .iter()
            .filter(|v| matches!(v.certificate, Certificate::Unknown { .. }))
            .map(|v| v.relator_index)
            .collect();
        Summary::Inconclusive { note: format!("removals {unknown:?} exhausted the budget") }
    };

    Report { presentation: p.clone(), deficiency: p.deficiency(), irredundancy, verdicts, summary, budget }
}
