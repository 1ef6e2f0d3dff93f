//! Bilateral atomic bases: finite sets of atomic rules. A rule has an
//! ordered list of premises, each premise an atom with a polarity plus two
//! discharge sets (proof-assumptions and refutation-assumptions it may
//! close in the corresponding subdeduction), and an atomic conclusion with
//! a polarity. Axioms are rules without premises.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Atom, Polarity};

/// One premise slot of an atomic rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RulePremise {
    pub atom: Atom,
    pub polarity: Polarity,
    /// Proof-assumptions the subdeduction for this premise may use and have
    /// discharged by the rule application.
    #[serde(rename = "dischargedProofs", default)]
    pub discharged_proofs: BTreeSet<Atom>,
    /// Refutation-assumptions, same discharge regime.
    #[serde(rename = "dischargedRefutations", default)]
    pub discharged_refutations: BTreeSet<Atom>,
}

impl RulePremise {
    pub fn new(atom: Atom, polarity: Polarity) -> RulePremise {
        RulePremise {
            atom,
            polarity,
            discharged_proofs: BTreeSet::new(),
            discharged_refutations: BTreeSet::new(),
        }
    }

    pub fn discharging_proofs<I: IntoIterator<Item = Atom>>(mut self, atoms: I) -> RulePremise {
        self.discharged_proofs.extend(atoms);
        self
    }

    pub fn discharging_refutations<I: IntoIterator<Item = Atom>>(mut self, atoms: I) -> RulePremise {
        self.discharged_refutations.extend(atoms);
        self
    }
}

/// An atomic rule. `name` identifies the rule within its base; structural
/// identity (everything except the name) is what extension and duality
/// care about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomicRule {
    pub name: String,
    #[serde(default)]
    pub premises: Vec<RulePremise>,
    pub conclusion: Atom,
    #[serde(rename = "conclusionPolarity")]
    pub conclusion_polarity: Polarity,
}

impl AtomicRule {
    pub fn new(
        name: impl Into<String>,
        premises: Vec<RulePremise>,
        conclusion: Atom,
        conclusion_polarity: Polarity,
    ) -> AtomicRule {
        AtomicRule {
            name: name.into(),
            premises,
            conclusion,
            conclusion_polarity,
        }
    }

    /// Axiom: a rule with no premises.
    pub fn axiom(name: impl Into<String>, conclusion: Atom, polarity: Polarity) -> AtomicRule {
        AtomicRule::new(name, Vec::new(), conclusion, polarity)
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// The name-blind identity used by `extends` and structural dedup.
    pub fn structure(&self) -> (&[RulePremise], &Atom, Polarity) {
        (&self.premises, &self.conclusion, self.conclusion_polarity)
    }
}

/// A bilateral atomic base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Base {
    pub rules: Vec<AtomicRule>,
}

impl Base {
    pub fn empty() -> Base {
        Base { rules: Vec::new() }
    }

    /// Build a base, rejecting duplicate rule names.
    pub fn new(rules: Vec<AtomicRule>) -> Result<Base, BaseError> {
        let base = Base { rules };
        base.check_names()?;
        Ok(base)
    }

    fn check_names(&self) -> Result<(), BaseError> {
        let mut seen = BTreeSet::new();
        for rule in &self.rules {
            if !seen.insert(rule.name.as_str()) {
                return Err(BaseError::DuplicateRuleName(rule.name.clone()));
            }
        }
        Ok(())
    }

    pub fn rule(&self, name: &str) -> Option<&AtomicRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// All atoms mentioned anywhere in the base: conclusions, premises, and
    /// discharge sets.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            out.insert(rule.conclusion.clone());
            for p in &rule.premises {
                out.insert(p.atom.clone());
                out.extend(p.discharged_proofs.iter().cloned());
                out.extend(p.discharged_refutations.iter().cloned());
            }
        }
        out
    }

    /// A copy with extra rules appended under fresh generated names.
    pub fn extended_with<'a, I>(&self, extra: I) -> Base
    where
        I: IntoIterator<Item = &'a AtomicRule>,
    {
        let mut rules = self.rules.clone();
        let mut taken: BTreeSet<String> = rules.iter().map(|r| r.name.clone()).collect();
        let mut counter = 0usize;
        for rule in extra {
            let mut fresh = rule.clone();
            while taken.contains(&fresh.name) {
                counter += 1;
                fresh.name = format!("ext_{counter}");
            }
            taken.insert(fresh.name.clone());
            rules.push(fresh);
        }
        Base { rules }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_base(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("duplicate rule name {0:?}")]
    DuplicateRuleName(String),
    #[error("malformed base JSON: {0}")]
    Json(String),
}

/// Parse a base from its JSON form, validating rule-name uniqueness.
pub fn parse_base(src: &str) -> Result<Base, BaseError> {
    let base: Base = serde_json::from_str(src).map_err(|e| BaseError::Json(e.to_string()))?;
    base.check_names()?;
    Ok(base)
}

/// Serialize a base to pretty JSON. `parse_base(print_base(b)) == b`.
pub fn print_base(base: &Base) -> String {
    serde_json::to_string_pretty(base).expect("base serialization cannot fail")
}

/// `true` iff every rule of `b` occurs in `c` structurally (names ignored).
/// This is the extension preorder: `c` extends `b`.
pub fn extends(c: &Base, b: &Base) -> bool {
    b.rules
        .iter()
        .all(|rb| c.rules.iter().any(|rc| rc.structure() == rb.structure()))
}

pub(crate) fn toggle_dual_name(name: &str) -> String {
    match name.strip_suffix("^D") {
        Some(stem) => stem.to_string(),
        None => format!("{name}^D"),
    }
}

/// Rule duality: conclusion polarity flips, each premise keeps its atom,
/// flips its polarity, and swaps its two discharge sets. The name gains a
/// `^D` suffix (or loses one, so the transform is involutive on names too).
pub fn dual_rule(rule: &AtomicRule) -> AtomicRule {
    AtomicRule {
        name: toggle_dual_name(&rule.name),
        premises: rule
            .premises
            .iter()
            .map(|p| RulePremise {
                atom: p.atom.clone(),
                polarity: p.polarity.dual(),
                discharged_proofs: p.discharged_refutations.clone(),
                discharged_refutations: p.discharged_proofs.clone(),
            })
            .collect(),
        conclusion: rule.conclusion.clone(),
        conclusion_polarity: rule.conclusion_polarity.dual(),
    }
}

/// Base duality, rule by rule.
pub fn dual_base(base: &Base) -> Base {
    Base {
        rules: base.rules.iter().map(dual_rule).collect(),
    }
}
