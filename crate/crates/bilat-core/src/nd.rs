//! The natural deduction system N2Int* and its proof checker.
//!
//! Proof and refutation rules live in one catalog of 26 tags. Four rules
//! (`BotPlus`, `TopMinus`, `OrEPlus`, `AndEMinus`) have a flexible
//! conclusion polarity carried as `result_polarity` on the application
//! node; their minor premises and conclusion must all share it.
//!
//! Assumptions are discharged by label. Label `0` marks an assumption that
//! is never discharged; labels `>= 1` form groups (all leaves with the same
//! label carry the same formula and polarity) and are discharged by exactly
//! one application node, in the child designated by the rule's discharge
//! role.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Polarity};

/// The 26 rule tags of N2Int*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NdRuleTag {
    // Proof rules.
    ImpIPlus,
    ImpEPlus,
    OrI1Plus,
    OrI2Plus,
    OrEPlus,
    AndIPlus,
    AndE1Plus,
    AndE2Plus,
    CoImpIPlus,
    CoImpE1Plus,
    CoImpE2Plus,
    BotPlus,
    TopPlus,
    // Refutation rules.
    CoImpIMinus,
    CoImpEMinus,
    AndI1Minus,
    AndI2Minus,
    AndEMinus,
    OrIMinus,
    OrE1Minus,
    OrE2Minus,
    ImpIMinus,
    ImpE1Minus,
    ImpE2Minus,
    TopMinus,
    BotMinus,
}

impl NdRuleTag {
    pub const ALL: [NdRuleTag; 26] = [
        NdRuleTag::ImpIPlus,
        NdRuleTag::ImpEPlus,
        NdRuleTag::OrI1Plus,
        NdRuleTag::OrI2Plus,
        NdRuleTag::OrEPlus,
        NdRuleTag::AndIPlus,
        NdRuleTag::AndE1Plus,
        NdRuleTag::AndE2Plus,
        NdRuleTag::CoImpIPlus,
        NdRuleTag::CoImpE1Plus,
        NdRuleTag::CoImpE2Plus,
        NdRuleTag::BotPlus,
        NdRuleTag::TopPlus,
        NdRuleTag::CoImpIMinus,
        NdRuleTag::CoImpEMinus,
        NdRuleTag::AndI1Minus,
        NdRuleTag::AndI2Minus,
        NdRuleTag::AndEMinus,
        NdRuleTag::OrIMinus,
        NdRuleTag::OrE1Minus,
        NdRuleTag::OrE2Minus,
        NdRuleTag::ImpIMinus,
        NdRuleTag::ImpE1Minus,
        NdRuleTag::ImpE2Minus,
        NdRuleTag::TopMinus,
        NdRuleTag::BotMinus,
    ];

    /// Flexible conclusion polarity (the dotted-line rules).
    pub fn is_flexible(self) -> bool {
        matches!(
            self,
            NdRuleTag::BotPlus | NdRuleTag::TopMinus | NdRuleTag::OrEPlus | NdRuleTag::AndEMinus
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            NdRuleTag::ImpIPlus => "ImpIPlus",
            NdRuleTag::ImpEPlus => "ImpEPlus",
            NdRuleTag::OrI1Plus => "OrI1Plus",
            NdRuleTag::OrI2Plus => "OrI2Plus",
            NdRuleTag::OrEPlus => "OrEPlus",
            NdRuleTag::AndIPlus => "AndIPlus",
            NdRuleTag::AndE1Plus => "AndE1Plus",
            NdRuleTag::AndE2Plus => "AndE2Plus",
            NdRuleTag::CoImpIPlus => "CoImpIPlus",
            NdRuleTag::CoImpE1Plus => "CoImpE1Plus",
            NdRuleTag::CoImpE2Plus => "CoImpE2Plus",
            NdRuleTag::BotPlus => "BotPlus",
            NdRuleTag::TopPlus => "TopPlus",
            NdRuleTag::CoImpIMinus => "CoImpIMinus",
            NdRuleTag::CoImpEMinus => "CoImpEMinus",
            NdRuleTag::AndI1Minus => "AndI1Minus",
            NdRuleTag::AndI2Minus => "AndI2Minus",
            NdRuleTag::AndEMinus => "AndEMinus",
            NdRuleTag::OrIMinus => "OrIMinus",
            NdRuleTag::OrE1Minus => "OrE1Minus",
            NdRuleTag::OrE2Minus => "OrE2Minus",
            NdRuleTag::ImpIMinus => "ImpIMinus",
            NdRuleTag::ImpE1Minus => "ImpE1Minus",
            NdRuleTag::ImpE2Minus => "ImpE2Minus",
            NdRuleTag::TopMinus => "TopMinus",
            NdRuleTag::BotMinus => "BotMinus",
        }
    }
}

/// A proof object: assumption leaves with labels, applications with a
/// claimed conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NdProof {
    Assume {
        formula: Formula,
        polarity: Polarity,
        #[serde(default)]
        label: u32,
    },
    Apply {
        rule: NdRuleTag,
        conclusion: Formula,
        #[serde(rename = "resultPolarity", default)]
        result_polarity: Option<Polarity>,
        #[serde(default)]
        children: Vec<NdProof>,
        #[serde(default)]
        discharge: Vec<u32>,
    },
}

impl NdProof {
    pub fn assume(formula: Formula, polarity: Polarity, label: u32) -> NdProof {
        NdProof::Assume {
            formula,
            polarity,
            label,
        }
    }

    pub fn apply(
        rule: NdRuleTag,
        conclusion: Formula,
        children: Vec<NdProof>,
        discharge: Vec<u32>,
    ) -> NdProof {
        NdProof::Apply {
            rule,
            conclusion,
            result_polarity: None,
            children,
            discharge,
        }
    }

    pub fn apply_flexible(
        rule: NdRuleTag,
        conclusion: Formula,
        result_polarity: Polarity,
        children: Vec<NdProof>,
        discharge: Vec<u32>,
    ) -> NdProof {
        NdProof::Apply {
            rule,
            conclusion,
            result_polarity: Some(result_polarity),
            children,
            discharge,
        }
    }

    pub fn children(&self) -> &[NdProof] {
        match self {
            NdProof::Assume { .. } => &[],
            NdProof::Apply { children, .. } => children,
        }
    }

    /// All formulas written anywhere in the proof: leaf assumptions and
    /// claimed conclusions. The minimum vocabulary a simulation base must
    /// cover to translate this proof.
    pub fn formulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        fn walk(p: &NdProof, out: &mut BTreeSet<Formula>) {
            match p {
                NdProof::Assume { formula, .. } => {
                    out.insert(formula.clone());
                }
                NdProof::Apply {
                    conclusion,
                    children,
                    ..
                } => {
                    out.insert(conclusion.clone());
                    for c in children {
                        walk(c, out);
                    }
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

/// The judgment a checked proof establishes: open proof-assumptions in
/// `gamma`, open refutation-assumptions in `delta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NdJudgment {
    pub gamma: BTreeSet<Formula>,
    pub delta: BTreeSet<Formula>,
    pub polarity: Polarity,
    pub conclusion: Formula,
}

impl NdJudgment {
    pub fn new(
        gamma: impl IntoIterator<Item = Formula>,
        delta: impl IntoIterator<Item = Formula>,
        polarity: Polarity,
        conclusion: Formula,
    ) -> NdJudgment {
        NdJudgment {
            gamma: gamma.into_iter().collect(),
            delta: delta.into_iter().collect(),
            polarity,
            conclusion,
        }
    }
}

impl fmt::Display for NdJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_set = |s: &BTreeSet<Formula>| {
            let items: Vec<String> = s.iter().map(crate::formula::print_formula).collect();
            format!("[{}]", items.join(", "))
        };
        write!(
            f,
            "{} ; {} |-{} {}",
            fmt_set(&self.gamma),
            fmt_set(&self.delta),
            self.polarity,
            self.conclusion
        )
    }
}

/// Node position from the root, as child indices.
pub type ProofPath = Vec<usize>;

fn path_str(path: &ProofPath) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        format!(
            "root.{}",
            path.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("{rule} at {}: expects {expected} children, got {got}", path_str(path))]
    ArityMismatch {
        path: ProofPath,
        rule: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{rule} at {}: premise {index} has the wrong shape: {detail}", path_str(path))]
    PremiseShapeMismatch {
        path: ProofPath,
        rule: &'static str,
        index: usize,
        detail: String,
    },
    #[error("{rule} at {}: claimed conclusion does not fit: {detail}", path_str(path))]
    ConclusionMismatch {
        path: ProofPath,
        rule: &'static str,
        detail: String,
    },
    #[error("{rule} at {}: premise {index} must conclude with polarity {expected}, got {got}", path_str(path))]
    PolarityMismatch {
        path: ProofPath,
        rule: &'static str,
        index: usize,
        expected: Polarity,
        got: Polarity,
    },
    #[error("{rule} at {}: non-uniform polarities for a flexible rule (result polarity {expected}, premise {index} concludes {got})", path_str(path))]
    MixedDottedLines {
        path: ProofPath,
        rule: &'static str,
        index: usize,
        expected: Polarity,
        got: Polarity,
    },
    #[error("{rule} at {}: illegal discharge of label {label}: {detail}", path_str(path))]
    IllegalDischarge {
        path: ProofPath,
        rule: &'static str,
        label: u32,
        detail: String,
    },
    #[error("label {label} used for distinct assumptions ({first} vs {second})")]
    DuplicateLabelConflict {
        label: u32,
        first: String,
        second: String,
    },
    #[error("{rule} at {}: flexible rule requires resultPolarity", path_str(path))]
    MissingResultPolarity { path: ProofPath, rule: &'static str },
    #[error("{rule} at {}: resultPolarity given for a rule with fixed conclusion polarity", path_str(path))]
    UnexpectedResultPolarity { path: ProofPath, rule: &'static str },
}

/// Open assumptions of a subtree: labeled groups, unlabeled leaves, and the
/// labels some inner node already discharged.
#[derive(Debug, Clone, Default)]
struct Opens {
    labeled: BTreeMap<u32, (Formula, Polarity)>,
    unlabeled: BTreeSet<(Formula, Polarity)>,
    discharged: BTreeSet<u32>,
}

impl Opens {
    fn merge(&mut self, other: Opens) {
        // Group consistency across children was established by the label
        // pre-pass; identical entries simply rejoin their group.
        self.labeled.extend(other.labeled);
        self.unlabeled.extend(other.unlabeled);
        self.discharged.extend(other.discharged);
    }
}

/// Check a proof and return its judgment.
pub fn check_nd(proof: &NdProof) -> Result<NdJudgment, NdError> {
    let mut groups: BTreeMap<u32, (Formula, Polarity)> = BTreeMap::new();
    collect_label_groups(proof, &mut groups)?;
    let mut path = Vec::new();
    let (conclusion, polarity, opens) = check_node(proof, &mut path)?;
    let mut gamma = BTreeSet::new();
    let mut delta = BTreeSet::new();
    for (f, p) in opens.labeled.into_values().chain(opens.unlabeled) {
        match p {
            Polarity::Plus => {
                gamma.insert(f);
            }
            Polarity::Minus => {
                delta.insert(f);
            }
        }
    }
    Ok(NdJudgment {
        gamma,
        delta,
        polarity,
        conclusion,
    })
}

fn collect_label_groups(
    proof: &NdProof,
    groups: &mut BTreeMap<u32, (Formula, Polarity)>,
) -> Result<(), NdError> {
    match proof {
        NdProof::Assume {
            formula,
            polarity,
            label,
        } => {
            if *label == 0 {
                return Ok(());
            }
            match groups.get(label) {
                None => {
                    groups.insert(*label, (formula.clone(), *polarity));
                }
                Some((f, p)) if f == formula && p == polarity => {}
                Some((f, p)) => {
                    return Err(NdError::DuplicateLabelConflict {
                        label: *label,
                        first: format!("{f} ({p})"),
                        second: format!("{formula} ({polarity})"),
                    });
                }
            }
            Ok(())
        }
        NdProof::Apply { children, .. } => {
            for child in children {
                collect_label_groups(child, groups)?;
            }
            Ok(())
        }
    }
}

fn check_node(
    proof: &NdProof,
    path: &mut ProofPath,
) -> Result<(Formula, Polarity, Opens), NdError> {
    match proof {
        NdProof::Assume {
            formula,
            polarity,
            label,
        } => {
            let mut opens = Opens::default();
            if *label == 0 {
                opens.unlabeled.insert((formula.clone(), *polarity));
            } else {
                opens.labeled.insert(*label, (formula.clone(), *polarity));
            }
            Ok((formula.clone(), *polarity, opens))
        }
        NdProof::Apply {
            rule,
            conclusion,
            result_polarity,
            children,
            discharge,
        } => {
            let name = rule.name();
            if rule.is_flexible() && result_polarity.is_none() {
                return Err(NdError::MissingResultPolarity {
                    path: path.clone(),
                    rule: name,
                });
            }
            if !rule.is_flexible() && result_polarity.is_some() {
                return Err(NdError::UnexpectedResultPolarity {
                    path: path.clone(),
                    rule: name,
                });
            }

            let mut kids: Vec<(Formula, Polarity)> = Vec::with_capacity(children.len());
            let mut child_opens: Vec<Opens> = Vec::with_capacity(children.len());
            for (index, child) in children.iter().enumerate() {
                path.push(index);
                let (cf, cp, opens) = check_node(child, path)?;
                path.pop();
                kids.push((cf, cp));
                child_opens.push(opens);
            }

            let outcome = validate_application(*rule, conclusion, *result_polarity, &kids, path)?;

            // Discharge entries align with the rule's roles in order; a 0
            // entry (or a missing one) leaves that role vacuous.
            if discharge.len() > outcome.roles.len() {
                let label = discharge[outcome.roles.len()];
                return Err(NdError::IllegalDischarge {
                    path: path.clone(),
                    rule: name,
                    label,
                    detail: format!(
                        "rule has {} discharge role(s), {} label(s) given",
                        outcome.roles.len(),
                        discharge.len()
                    ),
                });
            }
            for (slot, role) in outcome.roles.iter().enumerate() {
                let label = discharge.get(slot).copied().unwrap_or(0);
                if label == 0 {
                    continue;
                }
                let opens = &mut child_opens[role.child];
                if opens.discharged.contains(&label) {
                    return Err(NdError::IllegalDischarge {
                        path: path.clone(),
                        rule: name,
                        label,
                        detail: "label already discharged deeper in this subtree".to_string(),
                    });
                }
                match opens.labeled.get(&label) {
                    Some((f, p)) if *f == role.formula && *p == role.polarity => {
                        opens.labeled.remove(&label);
                        opens.discharged.insert(label);
                    }
                    Some((f, p)) => {
                        return Err(NdError::IllegalDischarge {
                            path: path.clone(),
                            rule: name,
                            label,
                            detail: format!(
                                "role discharges {} ({}), label is {f} ({p})",
                                role.formula, role.polarity
                            ),
                        });
                    }
                    // Vacuous: the label is not open in the designated child.
                    None => {}
                }
            }

            let mut opens = Opens::default();
            for o in child_opens {
                opens.merge(o);
            }
            Ok((conclusion.clone(), outcome.polarity, opens))
        }
    }
}

/// A discharge role resolved against a concrete application.
struct Role {
    child: usize,
    formula: Formula,
    polarity: Polarity,
}

struct Validated {
    polarity: Polarity,
    roles: Vec<Role>,
}

/// Validate one application given the children's checked conclusions.
fn validate_application(
    tag: NdRuleTag,
    conclusion: &Formula,
    result_polarity: Option<Polarity>,
    kids: &[(Formula, Polarity)],
    path: &ProofPath,
) -> Result<Validated, NdError> {
    use Formula as F;
    use NdRuleTag as T;
    use Polarity::{Minus, Plus};

    let name = tag.name();
    let arity = |n: usize| -> Result<(), NdError> {
        if kids.len() != n {
            Err(NdError::ArityMismatch {
                path: path.clone(),
                rule: name,
                expected: n,
                got: kids.len(),
            })
        } else {
            Ok(())
        }
    };
    let conclusion_err = |detail: String| NdError::ConclusionMismatch {
        path: path.clone(),
        rule: name,
        detail,
    };
    let shape_err = |index: usize, detail: String| NdError::PremiseShapeMismatch {
        path: path.clone(),
        rule: name,
        index,
        detail,
    };
    // Child `index` must conclude exactly `want` with polarity `pol`.
    let need = |index: usize, want: &Formula, pol: Polarity| -> Result<(), NdError> {
        let (f, p) = &kids[index];
        if f != want {
            return Err(shape_err(
                index,
                format!("expected {want}, child concludes {f}"),
            ));
        }
        if *p != pol {
            return Err(NdError::PolarityMismatch {
                path: path.clone(),
                rule: name,
                index,
                expected: pol,
                got: *p,
            });
        }
        Ok(())
    };
    // Minor premise of a flexible rule: formula must equal the conclusion,
    // polarity must equal the result polarity.
    let need_minor = |index: usize, rp: Polarity| -> Result<(), NdError> {
        let (f, p) = &kids[index];
        if f != conclusion {
            return Err(shape_err(
                index,
                format!("minor premise must conclude {conclusion}, child concludes {f}"),
            ));
        }
        if *p != rp {
            return Err(NdError::MixedDottedLines {
                path: path.clone(),
                rule: name,
                index,
                expected: rp,
                got: *p,
            });
        }
        Ok(())
    };
    let split2 = |shape: &str| -> Result<(Formula, Formula), NdError> {
        match (shape, conclusion) {
            ("and", F::And(l, r)) => Ok(((**l).clone(), (**r).clone())),
            ("or", F::Or(l, r)) => Ok(((**l).clone(), (**r).clone())),
            ("imp", F::Imp(l, r)) => Ok(((**l).clone(), (**r).clone())),
            ("coimp", F::CoImp(l, r)) => Ok(((**l).clone(), (**r).clone())),
            _ => Err(conclusion_err(format!(
                "conclusion {conclusion} is not a {shape}"
            ))),
        }
    };
    // Major premise of an elimination: child `index` must conclude a
    // formula of the given shape with the given polarity; returns its parts.
    let major = |index: usize, shape: &str, pol: Polarity| -> Result<(Formula, Formula), NdError> {
        let (f, p) = &kids[index];
        let parts = match (shape, f) {
            ("and", F::And(l, r)) => ((**l).clone(), (**r).clone()),
            ("or", F::Or(l, r)) => ((**l).clone(), (**r).clone()),
            ("imp", F::Imp(l, r)) => ((**l).clone(), (**r).clone()),
            ("coimp", F::CoImp(l, r)) => ((**l).clone(), (**r).clone()),
            _ => {
                return Err(shape_err(
                    index,
                    format!("major premise must be a {shape}, child concludes {f}"),
                ))
            }
        };
        if *p != pol {
            return Err(NdError::PolarityMismatch {
                path: path.clone(),
                rule: name,
                index,
                expected: pol,
                got: *p,
            });
        }
        Ok(parts)
    };
    let conclude = |want: &Formula| -> Result<(), NdError> {
        if conclusion != want {
            return Err(conclusion_err(format!(
                "rule yields {want}, node claims {conclusion}"
            )));
        }
        Ok(())
    };
    let ok = |polarity: Polarity, roles: Vec<Role>| Ok(Validated { polarity, roles });

    match tag {
        T::TopPlus => {
            arity(0)?;
            conclude(&F::Top)?;
            ok(Plus, vec![])
        }
        T::BotMinus => {
            arity(0)?;
            conclude(&F::Bot)?;
            ok(Minus, vec![])
        }
        T::BotPlus => {
            arity(1)?;
            need(0, &F::Bot, Plus)?;
            ok(result_polarity.expect("flexible tag"), vec![])
        }
        T::TopMinus => {
            arity(1)?;
            need(0, &F::Top, Minus)?;
            ok(result_polarity.expect("flexible tag"), vec![])
        }
        T::AndIPlus => {
            arity(2)?;
            let (a, b) = split2("and")?;
            need(0, &a, Plus)?;
            need(1, &b, Plus)?;
            ok(Plus, vec![])
        }
        T::AndE1Plus => {
            arity(1)?;
            let (a, _) = major(0, "and", Plus)?;
            conclude(&a)?;
            ok(Plus, vec![])
        }
        T::AndE2Plus => {
            arity(1)?;
            let (_, b) = major(0, "and", Plus)?;
            conclude(&b)?;
            ok(Plus, vec![])
        }
        T::OrI1Plus => {
            arity(1)?;
            let (a, _) = split2("or")?;
            need(0, &a, Plus)?;
            ok(Plus, vec![])
        }
        T::OrI2Plus => {
            arity(1)?;
            let (_, b) = split2("or")?;
            need(0, &b, Plus)?;
            ok(Plus, vec![])
        }
        T::OrEPlus => {
            arity(3)?;
            let rp = result_polarity.expect("flexible tag");
            let (a, b) = major(0, "or", Plus)?;
            need_minor(1, rp)?;
            need_minor(2, rp)?;
            ok(
                rp,
                vec![
                    Role {
                        child: 1,
                        formula: a,
                        polarity: Plus,
                    },
                    Role {
                        child: 2,
                        formula: b,
                        polarity: Plus,
                    },
                ],
            )
        }
        T::ImpIPlus => {
            arity(1)?;
            let (a, b) = split2("imp")?;
            need(0, &b, Plus)?;
            ok(
                Plus,
                vec![Role {
                    child: 0,
                    formula: a,
                    polarity: Plus,
                }],
            )
        }
        T::ImpEPlus => {
            arity(2)?;
            let (a, b) = major(0, "imp", Plus)?;
            need(1, &a, Plus)?;
            conclude(&b)?;
            ok(Plus, vec![])
        }
        T::CoImpIPlus => {
            arity(2)?;
            let (a, b) = split2("coimp")?;
            need(0, &a, Plus)?;
            need(1, &b, Minus)?;
            ok(Plus, vec![])
        }
        T::CoImpE1Plus => {
            arity(1)?;
            let (a, _) = major(0, "coimp", Plus)?;
            conclude(&a)?;
            ok(Plus, vec![])
        }
        T::CoImpE2Plus => {
            arity(1)?;
            let (_, b) = major(0, "coimp", Plus)?;
            conclude(&b)?;
            ok(Minus, vec![])
        }
        T::CoImpIMinus => {
            arity(1)?;
            let (a, b) = split2("coimp")?;
            need(0, &a, Minus)?;
            ok(
                Minus,
                vec![Role {
                    child: 0,
                    formula: b,
                    polarity: Minus,
                }],
            )
        }
        T::CoImpEMinus => {
            arity(2)?;
            let (a, b) = major(0, "coimp", Minus)?;
            need(1, &b, Minus)?;
            conclude(&a)?;
            ok(Minus, vec![])
        }
        T::AndI1Minus => {
            arity(1)?;
            let (a, _) = split2("and")?;
            need(0, &a, Minus)?;
            ok(Minus, vec![])
        }
        T::AndI2Minus => {
            arity(1)?;
            let (_, b) = split2("and")?;
            need(0, &b, Minus)?;
            ok(Minus, vec![])
        }
        T::AndEMinus => {
            arity(3)?;
            let rp = result_polarity.expect("flexible tag");
            let (a, b) = major(0, "and", Minus)?;
            need_minor(1, rp)?;
            need_minor(2, rp)?;
            ok(
                rp,
                vec![
                    Role {
                        child: 1,
                        formula: a,
                        polarity: Minus,
                    },
                    Role {
                        child: 2,
                        formula: b,
                        polarity: Minus,
                    },
                ],
            )
        }
        T::OrIMinus => {
            arity(2)?;
            let (a, b) = split2("or")?;
            need(0, &a, Minus)?;
            need(1, &b, Minus)?;
            ok(Minus, vec![])
        }
        T::OrE1Minus => {
            arity(1)?;
            let (a, _) = major(0, "or", Minus)?;
            conclude(&a)?;
            ok(Minus, vec![])
        }
        T::OrE2Minus => {
            arity(1)?;
            let (_, b) = major(0, "or", Minus)?;
            conclude(&b)?;
            ok(Minus, vec![])
        }
        T::ImpIMinus => {
            arity(2)?;
            let (a, b) = split2("imp")?;
            need(0, &a, Plus)?;
            need(1, &b, Minus)?;
            ok(Minus, vec![])
        }
        T::ImpE1Minus => {
            arity(1)?;
            let (a, _) = major(0, "imp", Minus)?;
            conclude(&a)?;
            // The refutation of an implication yields a proof of its
            // antecedent.
            ok(Plus, vec![])
        }
        T::ImpE2Minus => {
            arity(1)?;
            let (_, b) = major(0, "imp", Minus)?;
            conclude(&b)?;
            ok(Minus, vec![])
        }
    }
}

// ---------------------------------------------------------------------------
// Catalog

/// Human/machine readable description of one premise slot of a rule schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseSchema {
    /// Shape over the metavariables `phi`, `psi`, `chi`.
    pub shape: String,
    /// `"+"`, `"-"`, or `"*"` for the flexible result polarity.
    pub polarity: String,
    /// What this premise's subproof may discharge, e.g. `"[phi]+"`.
    pub discharges: Option<String>,
}

/// One entry of the rule catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSchema {
    pub tag: NdRuleTag,
    pub premises: Vec<PremiseSchema>,
    pub conclusion: String,
    /// `"+"`, `"-"`, or `"*"`.
    pub conclusion_polarity: String,
    pub flexible: bool,
}

fn prem(shape: &str, polarity: &str, discharges: Option<&str>) -> PremiseSchema {
    PremiseSchema {
        shape: shape.to_string(),
        polarity: polarity.to_string(),
        discharges: discharges.map(str::to_string),
    }
}

fn schema(
    tag: NdRuleTag,
    premises: Vec<PremiseSchema>,
    conclusion: &str,
    conclusion_polarity: &str,
) -> RuleSchema {
    RuleSchema {
        tag,
        premises,
        conclusion: conclusion.to_string(),
        conclusion_polarity: conclusion_polarity.to_string(),
        flexible: tag.is_flexible(),
    }
}

/// The full catalog of 26 rule schemas, in `NdRuleTag::ALL` order.
pub fn nd_rule_catalog() -> Vec<RuleSchema> {
    use NdRuleTag as T;
    vec![
        schema(T::ImpIPlus, vec![prem("psi", "+", Some("[phi]+"))], "phi -> psi", "+"),
        schema(
            T::ImpEPlus,
            vec![prem("phi -> psi", "+", None), prem("phi", "+", None)],
            "psi",
            "+",
        ),
        schema(T::OrI1Plus, vec![prem("phi", "+", None)], "phi | psi", "+"),
        schema(T::OrI2Plus, vec![prem("psi", "+", None)], "phi | psi", "+"),
        schema(
            T::OrEPlus,
            vec![
                prem("phi | psi", "+", None),
                prem("chi", "*", Some("[phi]+")),
                prem("chi", "*", Some("[psi]+")),
            ],
            "chi",
            "*",
        ),
        schema(
            T::AndIPlus,
            vec![prem("phi", "+", None), prem("psi", "+", None)],
            "phi & psi",
            "+",
        ),
        schema(T::AndE1Plus, vec![prem("phi & psi", "+", None)], "phi", "+"),
        schema(T::AndE2Plus, vec![prem("phi & psi", "+", None)], "psi", "+"),
        schema(
            T::CoImpIPlus,
            vec![prem("phi", "+", None), prem("psi", "-", None)],
            "phi <- psi",
            "+",
        ),
        schema(T::CoImpE1Plus, vec![prem("phi <- psi", "+", None)], "phi", "+"),
        schema(T::CoImpE2Plus, vec![prem("phi <- psi", "+", None)], "psi", "-"),
        schema(T::BotPlus, vec![prem("bot", "+", None)], "phi", "*"),
        schema(T::TopPlus, vec![], "top", "+"),
        schema(
            T::CoImpIMinus,
            vec![prem("phi", "-", Some("[psi]-"))],
            "phi <- psi",
            "-",
        ),
        schema(
            T::CoImpEMinus,
            vec![prem("phi <- psi", "-", None), prem("psi", "-", None)],
            "phi",
            "-",
        ),
        schema(T::AndI1Minus, vec![prem("phi", "-", None)], "phi & psi", "-"),
        schema(T::AndI2Minus, vec![prem("psi", "-", None)], "phi & psi", "-"),
        schema(
            T::AndEMinus,
            vec![
                prem("phi & psi", "-", None),
                prem("chi", "*", Some("[phi]-")),
                prem("chi", "*", Some("[psi]-")),
            ],
            "chi",
            "*",
        ),
        schema(
            T::OrIMinus,
            vec![prem("phi", "-", None), prem("psi", "-", None)],
            "phi | psi",
            "-",
        ),
        schema(T::OrE1Minus, vec![prem("phi | psi", "-", None)], "phi", "-"),
        schema(T::OrE2Minus, vec![prem("phi | psi", "-", None)], "psi", "-"),
        schema(
            T::ImpIMinus,
            vec![prem("phi", "+", None), prem("psi", "-", None)],
            "phi -> psi",
            "-",
        ),
        schema(T::ImpE1Minus, vec![prem("phi -> psi", "-", None)], "phi", "+"),
        schema(T::ImpE2Minus, vec![prem("phi -> psi", "-", None)], "psi", "-"),
        schema(T::TopMinus, vec![prem("top", "-", None)], "phi", "*"),
        schema(T::BotMinus, vec![], "bot", "-"),
    ]
}
