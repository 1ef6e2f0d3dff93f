//! Atomic deductions and decidable derivability over a bilateral base.
//!
//! A deduction is a tree of assumption leaves and rule applications. The
//! checker computes the strongest sequent `Gamma_At ; Delta_At |-* p` a
//! deduction establishes: open proof-assumptions on the left of `;`, open
//! refutation-assumptions on the right, the conclusion's polarity as `*`.
//!
//! Derivability is decided twice, on purpose, by two routes that share no
//! search logic: [`Prover`] collects the states reachable from the goal and
//! saturates them (goal-directed, returns witnesses), while
//! [`derivable_fixpoint`] is a brute-force bottom-up least fixpoint over
//! every sequent of a finite atom universe (the test oracle).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base::{toggle_dual_name, AtomicRule, Base};
use crate::formula::{Atom, Polarity};

/// A deduction tree over atomic rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AtomicDeduction {
    Assume {
        atom: Atom,
        polarity: Polarity,
    },
    Rule {
        rule: String,
        #[serde(default)]
        children: Vec<AtomicDeduction>,
    },
}

impl AtomicDeduction {
    pub fn assume(atom: Atom, polarity: Polarity) -> AtomicDeduction {
        AtomicDeduction::Assume { atom, polarity }
    }

    pub fn rule(name: impl Into<String>, children: Vec<AtomicDeduction>) -> AtomicDeduction {
        AtomicDeduction::Rule {
            rule: name.into(),
            children,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            AtomicDeduction::Assume { .. } => 0,
            AtomicDeduction::Rule { children, .. } => {
                1 + children.iter().map(|c| c.depth()).max().unwrap_or(0)
            }
        }
    }
}

/// An atomic sequent `gamma ; delta |-(polarity) conclusion`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomicSequent {
    pub gamma: BTreeSet<Atom>,
    pub delta: BTreeSet<Atom>,
    pub polarity: Polarity,
    pub conclusion: Atom,
}

impl AtomicSequent {
    pub fn new(
        gamma: impl IntoIterator<Item = Atom>,
        delta: impl IntoIterator<Item = Atom>,
        polarity: Polarity,
        conclusion: Atom,
    ) -> AtomicSequent {
        AtomicSequent {
            gamma: gamma.into_iter().collect(),
            delta: delta.into_iter().collect(),
            polarity,
            conclusion,
        }
    }

    /// Closed query: no open assumptions.
    pub fn closed(polarity: Polarity, conclusion: Atom) -> AtomicSequent {
        AtomicSequent::new([], [], polarity, conclusion)
    }
}

impl std::fmt::Display for AtomicSequent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fmt_set = |s: &BTreeSet<Atom>| {
            let names: Vec<&str> = s.iter().map(|a| a.name()).collect();
            format!("[{}]", names.join(", "))
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

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomicError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("rule {rule:?} expects {expected} premises, application has {got} children")]
    ChildCountMismatch {
        rule: String,
        expected: usize,
        got: usize,
    },
    #[error("rule {rule:?} premise {index}: expected atom {expected:?}, child concludes {got:?}")]
    PremiseAtomMismatch {
        rule: String,
        index: usize,
        expected: String,
        got: String,
    },
    #[error("rule {rule:?} premise {index}: expected polarity {expected}, child concludes {got}")]
    PremisePolarityMismatch {
        rule: String,
        index: usize,
        expected: Polarity,
        got: Polarity,
    },
    #[error("universe too small: atom {0:?} occurs in the base or sequent but not in the universe")]
    UniverseTooSmall(String),
}

/// Check a deduction against a base and return the strongest sequent it
/// establishes. A premise's discharge sets remove matching open assumptions
/// in that premise's child only; vacuous discharge is permitted.
pub fn check_atomic(base: &Base, d: &AtomicDeduction) -> Result<AtomicSequent, AtomicError> {
    let (atom, polarity, gamma, delta) = check_node(base, d)?;
    Ok(AtomicSequent {
        gamma,
        delta,
        polarity,
        conclusion: atom,
    })
}

fn check_node(
    base: &Base,
    d: &AtomicDeduction,
) -> Result<(Atom, Polarity, BTreeSet<Atom>, BTreeSet<Atom>), AtomicError> {
    match d {
        AtomicDeduction::Assume { atom, polarity } => {
            let mut gamma = BTreeSet::new();
            let mut delta = BTreeSet::new();
            match polarity {
                Polarity::Plus => {
                    gamma.insert(atom.clone());
                }
                Polarity::Minus => {
                    delta.insert(atom.clone());
                }
            }
            Ok((atom.clone(), *polarity, gamma, delta))
        }
        AtomicDeduction::Rule { rule, children } => {
            let r = base
                .rule(rule)
                .ok_or_else(|| AtomicError::UnknownRule(rule.clone()))?;
            if children.len() != r.premises.len() {
                return Err(AtomicError::ChildCountMismatch {
                    rule: rule.clone(),
                    expected: r.premises.len(),
                    got: children.len(),
                });
            }
            let mut gamma = BTreeSet::new();
            let mut delta = BTreeSet::new();
            for (index, (premise, child)) in r.premises.iter().zip(children).enumerate() {
                let (atom, polarity, cg, cd) = check_node(base, child)?;
                if atom != premise.atom {
                    return Err(AtomicError::PremiseAtomMismatch {
                        rule: rule.clone(),
                        index,
                        expected: premise.atom.name().to_string(),
                        got: atom.name().to_string(),
                    });
                }
                if polarity != premise.polarity {
                    return Err(AtomicError::PremisePolarityMismatch {
                        rule: rule.clone(),
                        index,
                        expected: premise.polarity,
                        got: polarity,
                    });
                }
                gamma.extend(cg.difference(&premise.discharged_proofs).cloned());
                delta.extend(cd.difference(&premise.discharged_refutations).cloned());
            }
            Ok((r.conclusion.clone(), r.conclusion_polarity, gamma, delta))
        }
    }
}

/// Deduction duality: assumption leaves flip polarity, rule applications map
/// to the dual rule. If `check_atomic(b, d)` yields `G ; D |-* p` then
/// `check_atomic(dual_base(b), dual_deduction(d))` yields `D ; G |-*' p`
/// with `*'` the flipped polarity.
pub fn dual_deduction(d: &AtomicDeduction) -> AtomicDeduction {
    match d {
        AtomicDeduction::Assume { atom, polarity } => AtomicDeduction::Assume {
            atom: atom.clone(),
            polarity: polarity.dual(),
        },
        AtomicDeduction::Rule { rule, children } => AtomicDeduction::Rule {
            rule: toggle_dual_name(rule),
            children: children.iter().map(dual_deduction).collect(),
        },
    }
}

// ---------------------------------------------------------------------------
// Goal-directed derivability with witnesses

type State = (BTreeSet<Atom>, BTreeSet<Atom>, Polarity, Atom);

#[derive(Debug, Clone)]
enum Provenance {
    /// Assumption case: the goal atom sits in the matching assumption set.
    Leaf,
    /// Fired by rule index (into the sorted rule list) with these premises.
    Fired(usize, Vec<State>),
}

/// Reusable derivability engine for one base. States reachable from queried
/// goals are collected once and saturated; assumption sets only grow along
/// premise edges, so the space is finite.
pub struct Prover {
    rules: Vec<AtomicRule>,
    /// Truth + provenance for every collected state; `None` = not (yet) derivable.
    table: BTreeMap<State, Option<Provenance>>,
    /// Reverse premise edges: which collected states re-check when this one
    /// turns derivable. May hold duplicates; re-checks are idempotent.
    dependents: BTreeMap<State, Vec<State>>,
}

impl Prover {
    pub fn new(base: &Base) -> Prover {
        let mut rules = base.rules.clone();
        rules.sort_by(|a, b| a.name.cmp(&b.name));
        Prover {
            rules,
            table: BTreeMap::new(),
            dependents: BTreeMap::new(),
        }
    }

    pub fn derivable(&mut self, sequent: &AtomicSequent) -> bool {
        let state = state_of(sequent);
        self.solve(&state);
        self.table.get(&state).is_some_and(Option::is_some)
    }

    /// On success, a deduction whose checked sequent has assumption sets
    /// contained in the query's and the same conclusion and polarity.
    pub fn derive_witness(&mut self, sequent: &AtomicSequent) -> Option<AtomicDeduction> {
        let state = state_of(sequent);
        self.solve(&state);
        self.table.get(&state).cloned().flatten().map(|_| self.build_witness(&state))
    }

    fn solve(&mut self, goal: &State) {
        if self.table.contains_key(goal) {
            // A state's truth depends only on its premise closure, which was
            // fully collected and saturated the first time the state was seen.
            return;
        }
        let added = self.collect(goal.clone());
        self.saturate(added);
    }

    fn collect(&mut self, goal: State) -> Vec<State> {
        let mut queue = vec![goal];
        let mut added = Vec::new();
        while let Some(state) = queue.pop() {
            if self.table.contains_key(&state) {
                continue;
            }
            let leaf = match state.2 {
                Polarity::Plus => state.0.contains(&state.3),
                Polarity::Minus => state.1.contains(&state.3),
            };
            self.table.insert(state.clone(), leaf.then_some(Provenance::Leaf));
            for rule in &self.rules {
                if rule.conclusion != state.3 || rule.conclusion_polarity != state.2 {
                    continue;
                }
                for premise in &rule.premises {
                    let mut gamma = state.0.clone();
                    gamma.extend(premise.discharged_proofs.iter().cloned());
                    let mut delta = state.1.clone();
                    delta.extend(premise.discharged_refutations.iter().cloned());
                    let key = (gamma, delta, premise.polarity, premise.atom.clone());
                    self.dependents.entry(key.clone()).or_default().push(state.clone());
                    queue.push(key);
                }
            }
            added.push(state);
        }
        added
    }

    /// Propagate truth through the newly collected states. Leaves were marked
    /// during collection; each new state gets one initial firing check, and
    /// every None-to-Some transition re-checks the states depending on it.
    fn saturate(&mut self, added: Vec<State>) {
        let mut worklist: VecDeque<State> = added.into();
        while let Some(state) = worklist.pop_front() {
            if self.table[&state].is_some() {
                continue;
            }
            if let Some(prov) = self.find_firing_rule(&state) {
                self.table.insert(state.clone(), Some(prov));
                if let Some(deps) = self.dependents.get(&state) {
                    worklist.extend(deps.iter().cloned());
                }
            }
        }
    }

    fn find_firing_rule(&self, state: &State) -> Option<Provenance> {
        'rules: for (i, rule) in self.rules.iter().enumerate() {
            if rule.conclusion != state.3 || rule.conclusion_polarity != state.2 {
                continue;
            }
            let mut premises = Vec::with_capacity(rule.premises.len());
            for premise in &rule.premises {
                let mut gamma = state.0.clone();
                gamma.extend(premise.discharged_proofs.iter().cloned());
                let mut delta = state.1.clone();
                delta.extend(premise.discharged_refutations.iter().cloned());
                let key = (gamma, delta, premise.polarity, premise.atom.clone());
                if !self.table.get(&key).is_some_and(Option::is_some) {
                    continue 'rules;
                }
                premises.push(key);
            }
            return Some(Provenance::Fired(i, premises));
        }
        None
    }

    fn build_witness(&self, state: &State) -> AtomicDeduction {
        match self.table[state].as_ref().expect("witness of underivable state") {
            Provenance::Leaf => AtomicDeduction::assume(state.3.clone(), state.2),
            Provenance::Fired(rule_index, premises) => AtomicDeduction::rule(
                self.rules[*rule_index].name.clone(),
                premises.iter().map(|p| self.build_witness(p)).collect(),
            ),
        }
    }
}

fn state_of(sequent: &AtomicSequent) -> State {
    (
        sequent.gamma.clone(),
        sequent.delta.clone(),
        sequent.polarity,
        sequent.conclusion.clone(),
    )
}

/// One-shot derivability check.
pub fn derivable(base: &Base, sequent: &AtomicSequent) -> bool {
    Prover::new(base).derivable(sequent)
}

/// One-shot derivability with witness reconstruction.
pub fn derive_witness(base: &Base, sequent: &AtomicSequent) -> Option<AtomicDeduction> {
    Prover::new(base).derive_witness(sequent)
}

// ---------------------------------------------------------------------------
// Bottom-up oracle

/// The completed least fixpoint over every sequent whose assumption sets
/// are subsets of a fixed universe. Build once per base, query many times.
pub struct FixpointTable {
    universe: BTreeSet<Atom>,
    derivable: BTreeSet<State>,
}

impl FixpointTable {
    /// Run the naive bottom-up saturation. Deliberately unclever; this is
    /// the oracle against which [`Prover`] is tested.
    pub fn build(base: &Base, universe: &BTreeSet<Atom>) -> Result<FixpointTable, AtomicError> {
        for atom in base.atoms() {
            if !universe.contains(&atom) {
                return Err(AtomicError::UniverseTooSmall(atom.name().to_string()));
            }
        }

        let atoms: Vec<Atom> = universe.iter().cloned().collect();
        let subsets = all_subsets(&atoms);
        let mut derivable: BTreeSet<State> = BTreeSet::new();
        for gamma in &subsets {
            for delta in &subsets {
                for a in gamma {
                    derivable.insert((gamma.clone(), delta.clone(), Polarity::Plus, a.clone()));
                }
                for a in delta {
                    derivable.insert((gamma.clone(), delta.clone(), Polarity::Minus, a.clone()));
                }
            }
        }

        loop {
            let mut added = false;
            for gamma in &subsets {
                for delta in &subsets {
                    for rule in &base.rules {
                        let key = (
                            gamma.clone(),
                            delta.clone(),
                            rule.conclusion_polarity,
                            rule.conclusion.clone(),
                        );
                        if derivable.contains(&key) {
                            continue;
                        }
                        let all_premises = rule.premises.iter().all(|premise| {
                            let mut g = gamma.clone();
                            g.extend(premise.discharged_proofs.iter().cloned());
                            let mut d = delta.clone();
                            d.extend(premise.discharged_refutations.iter().cloned());
                            derivable.contains(&(g, d, premise.polarity, premise.atom.clone()))
                        });
                        if all_premises {
                            derivable.insert(key);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }

        Ok(FixpointTable {
            universe: universe.clone(),
            derivable,
        })
    }

    pub fn derivable(&self, sequent: &AtomicSequent) -> Result<bool, AtomicError> {
        for atom in sequent
            .gamma
            .iter()
            .chain(sequent.delta.iter())
            .chain(std::iter::once(&sequent.conclusion))
        {
            if !self.universe.contains(atom) {
                return Err(AtomicError::UniverseTooSmall(atom.name().to_string()));
            }
        }
        Ok(self.derivable.contains(&state_of(sequent)))
    }
}

/// Independent bottom-up least fixpoint over every sequent whose assumption
/// sets are subsets of `universe`; one-shot form of [`FixpointTable`].
pub fn derivable_fixpoint(
    base: &Base,
    universe: &BTreeSet<Atom>,
    sequent: &AtomicSequent,
) -> Result<bool, AtomicError> {
    FixpointTable::build(base, universe)?.derivable(sequent)
}

fn all_subsets(atoms: &[Atom]) -> Vec<BTreeSet<Atom>> {
    let mut out = vec![BTreeSet::new()];
    for atom in atoms {
        let mut extended = Vec::with_capacity(out.len());
        for set in &out {
            let mut s = set.clone();
            s.insert(atom.clone());
            extended.push(s);
        }
        out.extend(extended);
    }
    out
}

// ---------------------------------------------------------------------------
// Bounded enumeration of well-formed deductions

/// Enumerate checked deductions over `base` up to `max_depth`, stopping once
/// `cap` trees have been produced. Leaves range over the base's atoms with
/// both polarities; every tree is well formed by construction.
pub fn enumerate_deductions(base: &Base, max_depth: usize, cap: usize) -> Vec<AtomicDeduction> {
    let mut out: Vec<AtomicDeduction> = Vec::new();
    // Per (atom, polarity): deductions grouped by exact depth.
    let mut by_conclusion: BTreeMap<(Atom, Polarity), Vec<Vec<AtomicDeduction>>> = BTreeMap::new();

    for atom in base.atoms() {
        for pol in [Polarity::Plus, Polarity::Minus] {
            let leaf = AtomicDeduction::assume(atom.clone(), pol);
            by_conclusion.insert((atom.clone(), pol), vec![vec![leaf.clone()]]);
            if out.len() < cap {
                out.push(leaf);
            }
        }
    }

    for depth in 1..=max_depth {
        if out.len() >= cap {
            break;
        }
        let mut fresh: BTreeMap<(Atom, Polarity), Vec<AtomicDeduction>> = BTreeMap::new();
        for rule in &base.rules {
            // Children drawn from depths < depth, at least one of depth - 1.
            let pools: Vec<Vec<&AtomicDeduction>> = rule
                .premises
                .iter()
                .map(|premise| {
                    by_conclusion
                        .get(&(premise.atom.clone(), premise.polarity))
                        .map(|layers| layers.iter().flatten().collect())
                        .unwrap_or_default()
                })
                .collect();
            let depth_of = |d: &AtomicDeduction| d.depth();
            let mut combo: Vec<usize> = vec![0; pools.len()];
            if pools.iter().any(|p| p.is_empty()) && !pools.is_empty() {
                continue;
            }
            if pools.is_empty() {
                if depth == 1 {
                    let node = AtomicDeduction::rule(rule.name.clone(), Vec::new());
                    fresh
                        .entry((rule.conclusion.clone(), rule.conclusion_polarity))
                        .or_default()
                        .push(node.clone());
                    if out.len() < cap {
                        out.push(node);
                    }
                }
                continue;
            }
            'combos: loop {
                if out.len() >= cap {
                    break;
                }
                let children: Vec<AtomicDeduction> = combo
                    .iter()
                    .zip(&pools)
                    .map(|(&i, pool)| pool[i].clone())
                    .collect();
                let max_child = children.iter().map(depth_of).max().unwrap_or(0);
                if max_child == depth - 1 {
                    let node = AtomicDeduction::rule(rule.name.clone(), children);
                    fresh
                        .entry((rule.conclusion.clone(), rule.conclusion_polarity))
                        .or_default()
                        .push(node.clone());
                    out.push(node);
                }
                // Advance the mixed-radix counter.
                let mut i = 0;
                loop {
                    if i == combo.len() {
                        break 'combos;
                    }
                    combo[i] += 1;
                    if combo[i] < pools[i].len() {
                        break;
                    }
                    combo[i] = 0;
                    i += 1;
                }
            }
        }
        for (key, items) in fresh {
            by_conclusion.entry(key).or_default().push(items);
        }
    }

    out
}
