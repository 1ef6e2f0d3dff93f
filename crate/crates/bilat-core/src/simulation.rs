//! The completeness construction: a finite atomic base that simulates the
//! natural deduction system rule-for-rule over a fixed formula vocabulary.
//!
//! Every non-atomic formula in the subformula closure of `theta` gets a
//! reserved proxy atom `f_<k>` (k indexes the non-atoms by their printed
//! form); atoms stand for themselves. The simulation base then instantiates
//! one atomic rule per ND rule shape, with the flexible-polarity rules
//! split into two single-polarity families ranging over a finite query
//! universe.
//!
//! Translations preserve tree height exactly: one ND application becomes
//! one atomic rule node and vice versa.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomic::AtomicDeduction;
use crate::base::{AtomicRule, Base, RulePremise};
use crate::formula::{print_formula, Atom, Formula, Polarity};
use crate::nd::{NdProof, NdRuleTag};

/// Injective map from a subformula closure into atoms: atoms map to
/// themselves, non-atoms to reserved `f_<k>` names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicMapping {
    pub map: BTreeMap<Formula, Atom>,
}

impl AtomicMapping {
    pub fn domain(&self) -> impl Iterator<Item = &Formula> {
        self.map.keys()
    }

    pub fn lookup(&self, f: &Formula) -> Option<&Atom> {
        self.map.get(f)
    }

    pub fn preimage(&self, a: &Atom) -> Option<&Formula> {
        self.map.iter().find(|(_, v)| *v == a).map(|(k, _)| k)
    }

    /// All atoms in the image, i.e. the vocabulary of the simulation base
    /// before the schematic query atom is added.
    pub fn image(&self) -> BTreeSet<Atom> {
        self.map.values().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("atom {0} collides with the reserved f_<digits> name space")]
    ReservedAtomName(Atom),
    #[error("query universe is missing the mapped atom {0}")]
    UniverseTooSmall(Atom),
    #[error("formula {0} is outside the mapping domain")]
    FormulaNotMapped(Formula),
    #[error("atom {0} looks reserved (f_<digits>) but is not in the mapping image")]
    NotInMappingImage(Atom),
    #[error("rule {0} is not part of the simulation base")]
    UnknownSimulationRule(String),
    #[error("{rule} expects {expected} children, got {got}")]
    ChildCountMismatch {
        rule: String,
        expected: usize,
        got: usize,
    },
}

fn is_reserved(a: &Atom) -> bool {
    let s = a.name();
    s.strip_prefix("f_")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Map the subformula closure of `theta`: atoms to themselves, non-atoms to
/// `f_<k>` in the lexicographic order of their printed forms.
pub fn build_mapping(theta: &BTreeSet<Formula>) -> Result<AtomicMapping, SimulationError> {
    let closure = crate::formula::subformula_closure(theta);
    let mut map = BTreeMap::new();
    let mut non_atoms: Vec<&Formula> = Vec::new();
    for f in &closure {
        match f.as_atom() {
            Some(a) => {
                if is_reserved(a) {
                    return Err(SimulationError::ReservedAtomName(a.clone()));
                }
                map.insert(f.clone(), a.clone());
            }
            None => non_atoms.push(f),
        }
    }
    non_atoms.sort_by_key(|f| print_formula(f));
    for (k, f) in non_atoms.into_iter().enumerate() {
        let name = Atom::new(format!("f_{k}")).expect("reserved names are valid atoms");
        map.insert(f.clone(), name);
    }
    Ok(AtomicMapping { map })
}

/// What to simulate: the vocabulary `theta` and the finite instantiation
/// range for the schematic query atom of the flexible rule families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub theta: BTreeSet<Formula>,
    #[serde(rename = "queryUniverse")]
    pub query_universe: BTreeSet<Atom>,
}

impl SimulationSpec {
    /// Default universe: every mapped atom plus one fresh query atom.
    pub fn new(theta: impl IntoIterator<Item = Formula>) -> Result<SimulationSpec, SimulationError> {
        let theta: BTreeSet<Formula> = theta.into_iter().collect();
        let mapping = build_mapping(&theta)?;
        let mut query_universe = mapping.image();
        query_universe.insert(fresh_query_atom(&query_universe));
        Ok(SimulationSpec {
            theta,
            query_universe,
        })
    }

    pub fn with_universe(
        theta: impl IntoIterator<Item = Formula>,
        query_universe: impl IntoIterator<Item = Atom>,
    ) -> SimulationSpec {
        SimulationSpec {
            theta: theta.into_iter().collect(),
            query_universe: query_universe.into_iter().collect(),
        }
    }
}

fn fresh_query_atom(taken: &BTreeSet<Atom>) -> Atom {
    let q = Atom::new("q_fresh").unwrap();
    if !taken.contains(&q) {
        return q;
    }
    (0u32..)
        .map(|i| Atom::new(format!("q_fresh{i}")).unwrap())
        .find(|a| !taken.contains(a))
        .unwrap()
}

/// One simulation rule remembered by name: which ND rule it mirrors, at
/// which result polarity, for which principal formula and query instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SimRule {
    pub tag: NdRuleTag,
    pub result_polarity: Option<Polarity>,
    pub principal: Formula,
    pub q: Option<Atom>,
}

/// Names for the fixed-polarity simulation rules. Eliminations are tagged
/// after the major premise's proxy atom, introductions after the
/// conclusion's.
fn sim_rule_name(tag: NdRuleTag, a: &Atom) -> String {
    use NdRuleTag as T;
    match tag {
        T::ImpIPlus | T::CoImpIPlus | T::AndIPlus => format!("I(+),{a}"),
        T::ImpEPlus => format!("E(+),{a}"),
        T::OrI1Plus => format!("I1(+),{a}"),
        T::OrI2Plus => format!("I2(+),{a}"),
        T::AndE1Plus | T::CoImpE1Plus => format!("E1(+),{a}"),
        T::AndE2Plus | T::CoImpE2Plus => format!("E2(+),{a}"),
        T::ImpIMinus | T::CoImpIMinus | T::OrIMinus => format!("I(-),{a}"),
        T::CoImpEMinus => format!("E(-),{a}"),
        T::AndI1Minus => format!("I1(-),{a}"),
        T::AndI2Minus => format!("I2(-),{a}"),
        T::ImpE1Minus | T::OrE1Minus => format!("E1(-),{a}"),
        T::ImpE2Minus | T::OrE2Minus => format!("E2(-),{a}"),
        T::TopPlus => format!("{a}(+)"),
        T::BotMinus => format!("{a}(-)"),
        T::OrEPlus | T::AndEMinus | T::BotPlus | T::TopMinus => {
            unreachable!("flexible families are named by sim_family_name")
        }
    }
}

/// Names for the four flexible families, which need the result polarity.
fn sim_family_name(tag: NdRuleTag, rp: Polarity, a: &Atom, q: &Atom) -> String {
    let i = match rp {
        Polarity::Plus => 1,
        Polarity::Minus => 2,
    };
    match tag {
        NdRuleTag::OrEPlus => format!("E{i}(+),{a},{q}"),
        NdRuleTag::AndEMinus => format!("E{i}(-),{a},{q}"),
        NdRuleTag::BotPlus => format!("{a}(+){i},{q}"),
        NdRuleTag::TopMinus => format!("{a}(-){i},{q}"),
        _ => unreachable!("not a flexible family"),
    }
}

fn rule_name_for(tag: NdRuleTag, rp: Option<Polarity>, a: &Atom, q: Option<&Atom>) -> String {
    if tag.is_flexible() {
        sim_family_name(tag, rp.expect("flexible"), a, q.expect("family rule carries q"))
    } else {
        sim_rule_name(tag, a)
    }
}

pub(crate) fn sim_registry(
    spec: &SimulationSpec,
) -> Result<(Base, AtomicMapping, BTreeMap<String, SimRule>), SimulationError> {
    let mapping = build_mapping(&spec.theta)?;
    for a in mapping.image() {
        if !spec.query_universe.contains(&a) {
            return Err(SimulationError::UniverseTooSmall(a));
        }
    }

    let mut non_atoms: Vec<(&Formula, &Atom)> = mapping
        .map
        .iter()
        .filter(|(f, _)| f.as_atom().is_none())
        .collect();
    non_atoms.sort_by_key(|(f, _)| print_formula(f));

    let mut rules: Vec<AtomicRule> = Vec::new();
    let mut registry: BTreeMap<String, SimRule> = BTreeMap::new();
    let m = |f: &Formula| mapping.lookup(f).expect("closure is mapped").clone();

    for (phi, a) in non_atoms {
        let push = |tag: NdRuleTag,
                        rp: Option<Polarity>,
                        q: Option<&Atom>,
                        premises: Vec<RulePremise>,
                        conclusion: Atom,
                        pol: Polarity,
                        rules: &mut Vec<AtomicRule>,
                        registry: &mut BTreeMap<String, SimRule>| {
            let name = rule_name_for(tag, rp, a, q);
            rules.push(AtomicRule::new(name.clone(), premises, conclusion, pol));
            registry.insert(
                name,
                SimRule {
                    tag,
                    result_polarity: rp,
                    principal: phi.clone(),
                    q: q.cloned(),
                },
            );
        };
        use NdRuleTag as T;
        use Polarity::{Minus, Plus};
        match phi {
            Formula::Imp(x, y) => {
                let (mx, my) = (m(x), m(y));
                push(
                    T::ImpIPlus,
                    None,
                    None,
                    vec![RulePremise::new(my.clone(), Plus).discharging_proofs([mx.clone()])],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::ImpEPlus,
                    None,
                    None,
                    vec![
                        RulePremise::new(a.clone(), Plus),
                        RulePremise::new(mx.clone(), Plus),
                    ],
                    my.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::ImpIMinus,
                    None,
                    None,
                    vec![
                        RulePremise::new(mx.clone(), Plus),
                        RulePremise::new(my.clone(), Minus),
                    ],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::ImpE1Minus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Minus)],
                    mx,
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::ImpE2Minus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Minus)],
                    my,
                    Minus,
                    &mut rules,
                    &mut registry,
                );
            }
            Formula::CoImp(x, y) => {
                let (mx, my) = (m(x), m(y));
                push(
                    T::CoImpIPlus,
                    None,
                    None,
                    vec![
                        RulePremise::new(mx.clone(), Plus),
                        RulePremise::new(my.clone(), Minus),
                    ],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::CoImpE1Plus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Plus)],
                    mx.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::CoImpE2Plus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Plus)],
                    my.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::CoImpIMinus,
                    None,
                    None,
                    vec![RulePremise::new(mx.clone(), Minus).discharging_refutations([my.clone()])],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::CoImpEMinus,
                    None,
                    None,
                    vec![
                        RulePremise::new(a.clone(), Minus),
                        RulePremise::new(my, Minus),
                    ],
                    mx,
                    Minus,
                    &mut rules,
                    &mut registry,
                );
            }
            Formula::And(x, y) => {
                let (mx, my) = (m(x), m(y));
                push(
                    T::AndIPlus,
                    None,
                    None,
                    vec![
                        RulePremise::new(mx.clone(), Plus),
                        RulePremise::new(my.clone(), Plus),
                    ],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::AndE1Plus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Plus)],
                    mx.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::AndE2Plus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Plus)],
                    my.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::AndI1Minus,
                    None,
                    None,
                    vec![RulePremise::new(mx.clone(), Minus)],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::AndI2Minus,
                    None,
                    None,
                    vec![RulePremise::new(my.clone(), Minus)],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                for rp in [Plus, Minus] {
                    for q in &spec.query_universe {
                        push(
                            T::AndEMinus,
                            Some(rp),
                            Some(q),
                            vec![
                                RulePremise::new(a.clone(), Minus),
                                RulePremise::new(q.clone(), rp)
                                    .discharging_refutations([mx.clone()]),
                                RulePremise::new(q.clone(), rp)
                                    .discharging_refutations([my.clone()]),
                            ],
                            q.clone(),
                            rp,
                            &mut rules,
                            &mut registry,
                        );
                    }
                }
            }
            Formula::Or(x, y) => {
                let (mx, my) = (m(x), m(y));
                push(
                    T::OrI1Plus,
                    None,
                    None,
                    vec![RulePremise::new(mx.clone(), Plus)],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::OrI2Plus,
                    None,
                    None,
                    vec![RulePremise::new(my.clone(), Plus)],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                for rp in [Plus, Minus] {
                    for q in &spec.query_universe {
                        push(
                            T::OrEPlus,
                            Some(rp),
                            Some(q),
                            vec![
                                RulePremise::new(a.clone(), Plus),
                                RulePremise::new(q.clone(), rp).discharging_proofs([mx.clone()]),
                                RulePremise::new(q.clone(), rp).discharging_proofs([my.clone()]),
                            ],
                            q.clone(),
                            rp,
                            &mut rules,
                            &mut registry,
                        );
                    }
                }
                push(
                    T::OrIMinus,
                    None,
                    None,
                    vec![
                        RulePremise::new(mx.clone(), Minus),
                        RulePremise::new(my.clone(), Minus),
                    ],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::OrE1Minus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Minus)],
                    mx,
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                push(
                    T::OrE2Minus,
                    None,
                    None,
                    vec![RulePremise::new(a.clone(), Minus)],
                    my,
                    Minus,
                    &mut rules,
                    &mut registry,
                );
            }
            Formula::Top => {
                push(
                    T::TopPlus,
                    None,
                    None,
                    vec![],
                    a.clone(),
                    Plus,
                    &mut rules,
                    &mut registry,
                );
                for rp in [Plus, Minus] {
                    for q in &spec.query_universe {
                        push(
                            T::TopMinus,
                            Some(rp),
                            Some(q),
                            vec![RulePremise::new(a.clone(), Minus)],
                            q.clone(),
                            rp,
                            &mut rules,
                            &mut registry,
                        );
                    }
                }
            }
            Formula::Bot => {
                push(
                    T::BotMinus,
                    None,
                    None,
                    vec![],
                    a.clone(),
                    Minus,
                    &mut rules,
                    &mut registry,
                );
                for rp in [Plus, Minus] {
                    for q in &spec.query_universe {
                        push(
                            T::BotPlus,
                            Some(rp),
                            Some(q),
                            vec![RulePremise::new(a.clone(), Plus)],
                            q.clone(),
                            rp,
                            &mut rules,
                            &mut registry,
                        );
                    }
                }
            }
            Formula::Atom(_) => unreachable!("atoms were filtered out"),
        }
    }

    let base = Base::new(rules).expect("simulation rule names are unique by construction");
    Ok((base, mapping, registry))
}

/// Instantiate the simulation base for `spec`.
pub fn build_simulation_base(spec: &SimulationSpec) -> Result<Base, SimulationError> {
    sim_registry(spec).map(|(base, _, _)| base)
}

fn nd_conclusion(p: &NdProof) -> &Formula {
    match p {
        NdProof::Assume { formula, .. } => formula,
        NdProof::Apply { conclusion, .. } => conclusion,
    }
}

/// Translate an ND proof into an atomic deduction over the simulation base.
/// Labels disappear; discharge is carried by the simulation rules
/// themselves.
pub fn translate_nd_to_atomic(
    p: &NdProof,
    m: &AtomicMapping,
    spec: &SimulationSpec,
) -> Result<AtomicDeduction, SimulationError> {
    let lookup = |f: &Formula| -> Result<Atom, SimulationError> {
        m.lookup(f)
            .cloned()
            .ok_or_else(|| SimulationError::FormulaNotMapped(f.clone()))
    };
    match p {
        NdProof::Assume {
            formula, polarity, ..
        } => Ok(AtomicDeduction::assume(lookup(formula)?, *polarity)),
        NdProof::Apply {
            rule,
            conclusion,
            result_polarity,
            children,
            ..
        } => {
            use NdRuleTag as T;
            // Introductions are named after the conclusion's proxy atom,
            // eliminations after the major premise's.
            let principal = match rule {
                T::ImpIPlus
                | T::CoImpIPlus
                | T::AndIPlus
                | T::OrI1Plus
                | T::OrI2Plus
                | T::ImpIMinus
                | T::CoImpIMinus
                | T::AndI1Minus
                | T::AndI2Minus
                | T::OrIMinus
                | T::TopPlus
                | T::BotMinus => conclusion,
                _ => {
                    let major = children
                        .first()
                        .ok_or_else(|| SimulationError::ChildCountMismatch {
                            rule: rule.name().to_string(),
                            expected: 1,
                            got: 0,
                        })?;
                    nd_conclusion(major)
                }
            };
            let a = lookup(principal)?;
            let q = if rule.is_flexible() {
                let q = lookup(conclusion)?;
                if !spec.query_universe.contains(&q) {
                    return Err(SimulationError::UniverseTooSmall(q));
                }
                Some(q)
            } else {
                None
            };
            let name = rule_name_for(*rule, *result_polarity, &a, q.as_ref());
            let children = children
                .iter()
                .map(|c| translate_nd_to_atomic(c, m, spec))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AtomicDeduction::rule(name, children))
        }
    }
}

/// An open assumption leaf inside a partially built ND proof, addressed by
/// its path of child indices.
struct OpenLeaf {
    formula: Formula,
    polarity: Polarity,
    path: Vec<usize>,
}

fn set_leaf_label(p: &mut NdProof, path: &[usize], label: u32) {
    match path.split_first() {
        None => match p {
            NdProof::Assume { label: slot, .. } => *slot = label,
            NdProof::Apply { .. } => unreachable!("paths end at leaves"),
        },
        Some((&head, rest)) => match p {
            NdProof::Apply { children, .. } => set_leaf_label(&mut children[head], rest, label),
            NdProof::Assume { .. } => unreachable!("path descends past a leaf"),
        },
    }
}

/// Translate an atomic deduction over the simulation base back into an ND
/// proof, re-synthesizing discharge labels: each discharging rule node
/// closes every matching open assumption in the designated child, exactly
/// as the atomic checker does.
pub fn translate_atomic_to_nd(
    d: &AtomicDeduction,
    m: &AtomicMapping,
    spec: &SimulationSpec,
) -> Result<NdProof, SimulationError> {
    let (_, mapping, registry) = sim_registry(spec)?;
    // The caller's mapping must agree with the one `spec` generates; using
    // the generated one keeps the two directions consistent.
    debug_assert_eq!(&mapping, m);
    let mut next_label = 1u32;
    let (proof, _) = to_nd(d, m, &registry, &mut next_label)?;
    Ok(proof)
}

fn preimage_formula(a: &Atom, m: &AtomicMapping) -> Result<Formula, SimulationError> {
    if let Some(f) = m.preimage(a) {
        return Ok(f.clone());
    }
    if is_reserved(a) {
        return Err(SimulationError::NotInMappingImage(a.clone()));
    }
    Ok(Formula::Atom(a.clone()))
}

fn to_nd(
    d: &AtomicDeduction,
    m: &AtomicMapping,
    registry: &BTreeMap<String, SimRule>,
    next_label: &mut u32,
) -> Result<(NdProof, Vec<OpenLeaf>), SimulationError> {
    match d {
        AtomicDeduction::Assume { atom, polarity } => {
            let formula = preimage_formula(atom, m)?;
            let leaf = OpenLeaf {
                formula: formula.clone(),
                polarity: *polarity,
                path: Vec::new(),
            };
            Ok((NdProof::assume(formula, *polarity, 0), vec![leaf]))
        }
        AtomicDeduction::Rule { rule, children } => {
            let sim = registry
                .get(rule)
                .ok_or_else(|| SimulationError::UnknownSimulationRule(rule.clone()))?;
            let mut kid_proofs = Vec::with_capacity(children.len());
            let mut kid_opens: Vec<Vec<OpenLeaf>> = Vec::with_capacity(children.len());
            for c in children {
                let (p, opens) = to_nd(c, m, registry, next_label)?;
                kid_proofs.push(p);
                kid_opens.push(opens);
            }

            use NdRuleTag as T;
            let parts = || -> (Formula, Formula) {
                match &sim.principal {
                    Formula::And(x, y)
                    | Formula::Or(x, y)
                    | Formula::Imp(x, y)
                    | Formula::CoImp(x, y) => ((**x).clone(), (**y).clone()),
                    _ => unreachable!("family principal is binary"),
                }
            };
            let conclusion = match sim.tag {
                T::ImpIPlus | T::CoImpIPlus | T::AndIPlus | T::OrI1Plus | T::OrI2Plus
                | T::ImpIMinus | T::CoImpIMinus | T::AndI1Minus | T::AndI2Minus | T::OrIMinus
                | T::TopPlus | T::BotMinus => sim.principal.clone(),
                T::ImpEPlus | T::ImpE2Minus | T::AndE2Plus | T::CoImpE2Plus | T::OrE2Minus => {
                    parts().1
                }
                T::ImpE1Minus | T::AndE1Plus | T::CoImpE1Plus | T::CoImpEMinus | T::OrE1Minus => {
                    parts().0
                }
                T::OrEPlus | T::AndEMinus | T::BotPlus | T::TopMinus => {
                    preimage_formula(sim.q.as_ref().expect("family rule carries q"), m)?
                }
            };
            let roles: Vec<(usize, Formula, Polarity)> = match sim.tag {
                T::ImpIPlus => vec![(0, parts().0, Polarity::Plus)],
                T::CoImpIMinus => vec![(0, parts().1, Polarity::Minus)],
                T::OrEPlus => {
                    let (x, y) = parts();
                    vec![(1, x, Polarity::Plus), (2, y, Polarity::Plus)]
                }
                T::AndEMinus => {
                    let (x, y) = parts();
                    vec![(1, x, Polarity::Minus), (2, y, Polarity::Minus)]
                }
                _ => vec![],
            };
            if let Some(expected) = roles.iter().map(|(i, _, _)| i + 1).max() {
                if children.len() < expected {
                    return Err(SimulationError::ChildCountMismatch {
                        rule: rule.clone(),
                        expected,
                        got: children.len(),
                    });
                }
            }

            let mut discharge = Vec::new();
            for (child, formula, polarity) in &roles {
                let opens = &mut kid_opens[*child];
                let matching: Vec<usize> = opens
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| &l.formula == formula && l.polarity == *polarity)
                    .map(|(i, _)| i)
                    .collect();
                if matching.is_empty() {
                    discharge.push(0);
                    continue;
                }
                let label = *next_label;
                *next_label += 1;
                for &i in &matching {
                    set_leaf_label(&mut kid_proofs[*child], &opens[i].path, label);
                }
                for i in matching.into_iter().rev() {
                    opens.remove(i);
                }
                discharge.push(label);
            }
            while discharge.last() == Some(&0) {
                discharge.pop();
            }

            let mut opens = Vec::new();
            for (i, kid) in kid_opens.into_iter().enumerate() {
                for mut leaf in kid {
                    leaf.path.insert(0, i);
                    opens.push(leaf);
                }
            }
            let proof = NdProof::Apply {
                rule: sim.tag,
                conclusion,
                result_polarity: sim.result_polarity,
                children: kid_proofs,
                discharge,
            };
            Ok((proof, opens))
        }
    }
}
