//! Three-valued checker for the bilateral support clauses over a finite base.
//!
//! The clauses for `bot`/`top` at the hard polarity and for `or +` / `and -`
//! quantify over every atom and every extension of the base, so support is
//! not decidable in general. The checker therefore answers `Holds` or `Fails`
//! only when it can hand over re-checkable evidence — an exact, lemma-backed
//! reduction to atomic derivability, or a concrete violating extension — and
//! returns `Unknown` otherwise.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::atomic::{derivable, derivable_fixpoint, AtomicSequent};
use crate::base::{dual_base, extends, AtomicRule, Base, RulePremise};
use crate::formula::{dual_formula, Atom, Formula, Polarity};

/// A support question `gamma ; delta |= formula` at `polarity`, relative to
/// `base`. Empty `gamma` and `delta` ask for plain support of `formula`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportQuery {
    pub base: Base,
    #[serde(default)]
    pub gamma: BTreeSet<Formula>,
    #[serde(default)]
    pub delta: BTreeSet<Formula>,
    pub polarity: Polarity,
    pub formula: Formula,
}

impl SupportQuery {
    pub fn plain(base: Base, polarity: Polarity, formula: Formula) -> SupportQuery {
        SupportQuery {
            base,
            gamma: BTreeSet::new(),
            delta: BTreeSet::new(),
            polarity,
            formula,
        }
    }

    /// Every atom mentioned by the base or any formula of the query.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.base.atoms();
        for f in self
            .gamma
            .iter()
            .chain(self.delta.iter())
            .chain(std::iter::once(&self.formula))
        {
            out.extend(f.atoms());
        }
        out
    }
}

/// Finitization of "for every extension C of B": candidate extensions draw
/// at most `max_extra_rules` rules over the atoms of base and query plus
/// `extra_atoms` fresh ones, each rule with at most `max_premises` premises
/// and at most `max_discharge` discharged proofs/refutations per premise.
///
/// `extra_atoms = 0` additionally restricts the atom quantifiers ("for every
/// p in At") to that same finite universe, which makes the `bot +` / `top -`
/// clauses decidable relative to it. Any positive value keeps the intended
/// reading with infinitely many atoms, under which those clauses always fail
/// on a finite base (a fresh atom is never derivable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ExtensionBudget {
    pub extra_atoms: usize,
    pub max_extra_rules: usize,
    pub max_premises: usize,
    pub max_discharge: usize,
    /// Hard cap on clause-body instantiations checked before giving up.
    pub cap: u64,
}

impl Default for ExtensionBudget {
    fn default() -> ExtensionBudget {
        ExtensionBudget {
            extra_atoms: 1,
            max_extra_rules: 2,
            max_premises: 2,
            max_discharge: 1,
            cap: 50_000,
        }
    }
}

/// Which clause family governs `bot +`, `top -`, `or +` and `and -`.
/// `Naive` checks only the proof side of the proof clauses and only the
/// refutation side of the refutation clauses; everything else is shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClauseSet {
    Standard,
    Naive,
}

/// Evidence for a `Holds` verdict. Every leaf is an atomic sequent over the
/// queried base, so the whole tree can be re-checked independently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "camelCase")]
pub enum Justification {
    /// An atom, or an inference with atomic antecedents and consequent:
    /// settled by atomic derivability.
    #[serde(rename_all = "camelCase")]
    AtomicDerivable { sequent: AtomicSequent },
    /// `top +` / `bot -` hold at every base.
    #[serde(rename_all = "camelCase")]
    Constant { clause: String },
    /// A clause that is a finite conjunction of sub-claims: `and +`, `or -`,
    /// `imp -`, `coimp +`, and the constant clauses under a finite universe.
    #[serde(rename_all = "camelCase")]
    AllOf {
        clause: String,
        parts: Vec<Justification>,
    },
    /// `imp +` / `coimp -`: the clause is itself an inference question.
    #[serde(rename_all = "camelCase")]
    Reduction {
        clause: String,
        inner: Box<Justification>,
    },
    /// `or +` / `and -` settled by one decisive operand (the
    /// introduction-rule direction of the soundness proof).
    #[serde(rename_all = "camelCase")]
    Sufficient {
        clause: String,
        side: u8,
        inner: Box<Justification>,
    },
    /// An inference whose consequent already holds at the base itself:
    /// monotonicity closes the quantifier over extensions.
    #[serde(rename_all = "camelCase")]
    Monotone { inner: Box<Justification> },
}

impl Justification {
    /// All atomic sequents this justification rests on.
    pub fn sequents(&self) -> Vec<&AtomicSequent> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a AtomicSequent>) {
        match self {
            Justification::AtomicDerivable { sequent } => out.push(sequent),
            Justification::Constant { .. } => {}
            Justification::AllOf { parts, .. } => {
                for p in parts {
                    p.collect(out);
                }
            }
            Justification::Reduction { inner, .. }
            | Justification::Sufficient { inner, .. }
            | Justification::Monotone { inner } => inner.collect(out),
        }
    }
}

/// Evidence for a `Fails` verdict: a concrete extension (equal to the base
/// whenever no extra rules were needed), the atom instantiating the clause's
/// atom quantifier when it has one, and the sequents whose derivability
/// status at the extension exhibits the violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterWitness {
    pub clause: String,
    pub extension: Base,
    pub atom: Option<Atom>,
    /// Derivable at the extension.
    pub holding: Vec<AtomicSequent>,
    /// Not derivable at the extension.
    pub failing: Vec<AtomicSequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum SupportVerdict {
    #[serde(rename_all = "camelCase")]
    Holds { justification: Justification },
    #[serde(rename_all = "camelCase")]
    Fails { witness: CounterWitness },
    /// No exact path applied and the bounded search found no violation.
    /// `exhausted` records whether the finite search space was fully covered
    /// or the cap cut it short.
    #[serde(rename_all = "camelCase")]
    Unknown {
        budget: ExtensionBudget,
        exhausted: bool,
    },
}

impl SupportVerdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, SupportVerdict::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, SupportVerdict::Fails { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SupportVerdict::Unknown { .. })
    }

    /// Re-check a decisive verdict from scratch against `base`, running every
    /// recorded sequent through the bottom-up fixpoint oracle rather than the
    /// prover that produced it. `Unknown` re-checks trivially.
    pub fn recheck(&self, base: &Base) -> bool {
        match self {
            SupportVerdict::Holds { justification } => justification
                .sequents()
                .iter()
                .all(|s| fixpoint_derivable(base, s)),
            SupportVerdict::Fails { witness } => {
                extends(&witness.extension, base)
                    && witness
                        .holding
                        .iter()
                        .all(|s| fixpoint_derivable(&witness.extension, s))
                    && witness
                        .failing
                        .iter()
                        .all(|s| !fixpoint_derivable(&witness.extension, s))
            }
            SupportVerdict::Unknown { .. } => true,
        }
    }
}

fn fixpoint_derivable(base: &Base, seq: &AtomicSequent) -> bool {
    let mut universe = base.atoms();
    universe.extend(seq.gamma.iter().cloned());
    universe.extend(seq.delta.iter().cloned());
    universe.insert(seq.conclusion.clone());
    derivable_fixpoint(base, &universe, seq).expect("universe covers base and sequent")
}

/// Answer a support query under the given budget and clause family.
pub fn support(query: &SupportQuery, budget: &ExtensionBudget, clauses: ClauseSet) -> SupportVerdict {
    let mut ctx = Ctx::new(query, budget, clauses);
    ctx.eval_inf(
        &query.base,
        &query.gamma,
        &query.delta,
        query.polarity,
        &query.formula,
        1,
    )
}

/// One primal/dual verdict pair. The duality theorem makes a decisive
/// disagreement a bug in the checker, never a fact about the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HarmonyReport {
    pub primal: SupportVerdict,
    pub dual: SupportVerdict,
    pub violation: bool,
}

fn harmony_report(primal: SupportVerdict, dual: SupportVerdict) -> HarmonyReport {
    let violation = matches!(
        (&primal, &dual),
        (SupportVerdict::Holds { .. }, SupportVerdict::Fails { .. })
            | (SupportVerdict::Fails { .. }, SupportVerdict::Holds { .. })
    );
    HarmonyReport {
        primal,
        dual,
        violation,
    }
}

/// Compare plain support of `formula` with support of its dual at the dual
/// polarity over the dual base, under the same budget.
pub fn harmony_check(
    base: &Base,
    polarity: Polarity,
    formula: &Formula,
    budget: &ExtensionBudget,
) -> HarmonyReport {
    let primal = SupportQuery::plain(base.clone(), polarity, formula.clone());
    let dual = SupportQuery::plain(
        dual_base(base),
        polarity.dual(),
        dual_formula(formula),
    );
    harmony_report(
        support(&primal, budget, ClauseSet::Standard),
        support(&dual, budget, ClauseSet::Standard),
    )
}

/// Inference-level harmony: the dual question swaps the two assumption sets
/// and dualizes every formula in them.
pub fn strong_harmony_check(
    base: &Base,
    gamma: &BTreeSet<Formula>,
    delta: &BTreeSet<Formula>,
    polarity: Polarity,
    formula: &Formula,
    budget: &ExtensionBudget,
) -> HarmonyReport {
    let primal = SupportQuery {
        base: base.clone(),
        gamma: gamma.clone(),
        delta: delta.clone(),
        polarity,
        formula: formula.clone(),
    };
    let dual = SupportQuery {
        base: dual_base(base),
        gamma: delta.iter().map(dual_formula).collect(),
        delta: gamma.iter().map(dual_formula).collect(),
        polarity: polarity.dual(),
        formula: dual_formula(formula),
    };
    harmony_report(
        support(&primal, budget, ClauseSet::Standard),
        support(&dual, budget, ClauseSet::Standard),
    )
}

// ---------------------------------------------------------------------------
// Evaluation

struct Ctx<'a> {
    budget: &'a ExtensionBudget,
    clauses: ClauseSet,
    /// Fixed per query: atoms of base and query plus the budgeted fresh ones.
    /// Both the atom quantifiers (under a finite universe) and the rules of
    /// candidate extensions draw from this set.
    universe: Vec<Atom>,
    /// extra_atoms == 0: atom quantifiers range over `universe` only.
    finite_at: bool,
    spent: u64,
}

enum Search {
    Violation(CounterWitness),
    Exhausted,
    Capped,
}

impl<'a> Ctx<'a> {
    fn new(query: &SupportQuery, budget: &'a ExtensionBudget, clauses: ClauseSet) -> Ctx<'a> {
        let mut atoms = query.atoms();
        let mut fresh_index = 0usize;
        for _ in 0..budget.extra_atoms {
            atoms.insert(fresh_atom(&atoms, &mut fresh_index));
        }
        Ctx {
            budget,
            clauses,
            universe: atoms.into_iter().collect(),
            finite_at: budget.extra_atoms == 0,
            spent: 0,
        }
    }

    fn unknown(&self, exhausted: bool) -> SupportVerdict {
        SupportVerdict::Unknown {
            budget: *self.budget,
            exhausted,
        }
    }

    fn eval_inf(
        &mut self,
        base: &Base,
        gamma: &BTreeSet<Formula>,
        delta: &BTreeSet<Formula>,
        polarity: Polarity,
        chi: &Formula,
        fuel: u32,
    ) -> SupportVerdict {
        if gamma.is_empty() && delta.is_empty() {
            return self.eval_plain(base, polarity, chi, fuel);
        }

        // Fully atomic inferences coincide with atomic derivability.
        let atomic_parts = || -> Option<AtomicSequent> {
            let g: Option<Vec<Atom>> = gamma.iter().map(|f| f.as_atom().cloned()).collect();
            let d: Option<Vec<Atom>> = delta.iter().map(|f| f.as_atom().cloned()).collect();
            Some(AtomicSequent::new(
                g?,
                d?,
                polarity,
                chi.as_atom().cloned()?,
            ))
        };
        if let Some(sequent) = atomic_parts() {
            return if derivable(base, &sequent) {
                SupportVerdict::Holds {
                    justification: Justification::AtomicDerivable { sequent },
                }
            } else {
                SupportVerdict::Fails {
                    witness: CounterWitness {
                        clause: clause_name("inf", polarity),
                        extension: base.clone(),
                        atom: None,
                        holding: Vec::new(),
                        failing: vec![sequent],
                    },
                }
            };
        }

        // A consequent that already holds at the base holds at every
        // extension by monotonicity, so the inference holds outright.
        if let SupportVerdict::Holds { justification } = self.eval_plain(base, polarity, chi, 0) {
            return SupportVerdict::Holds {
                justification: Justification::Monotone {
                    inner: Box::new(justification),
                },
            };
        }

        if fuel == 0 {
            return self.unknown(false);
        }

        // Look for an extension where every antecedent decisively holds and
        // the consequent decisively fails.
        let outcome = self.for_each_extension(base, &mut |ctx, ext| {
            if ctx.spent >= ctx.budget.cap {
                return Some(Search::Capped);
            }
            ctx.spent += 1;
            let mut holding = Vec::new();
            for (set, pol) in [(gamma, Polarity::Plus), (delta, Polarity::Minus)] {
                for f in set {
                    match ctx.eval_plain(ext, pol, f, 0) {
                        SupportVerdict::Holds { justification } => {
                            holding.extend(justification.sequents().into_iter().cloned());
                        }
                        _ => return None,
                    }
                }
            }
            match ctx.eval_plain(ext, polarity, chi, 0) {
                SupportVerdict::Fails { witness } => {
                    holding.extend(witness.holding);
                    Some(Search::Violation(CounterWitness {
                        clause: clause_name("inf", polarity),
                        extension: ext.clone(),
                        atom: witness.atom,
                        holding,
                        failing: witness.failing,
                    }))
                }
                _ => None,
            }
        });
        self.finish_search(outcome)
    }

    fn eval_plain(
        &mut self,
        base: &Base,
        polarity: Polarity,
        chi: &Formula,
        fuel: u32,
    ) -> SupportVerdict {
        use Polarity::{Minus, Plus};
        match (chi, polarity) {
            (Formula::Atom(a), _) => {
                let sequent = AtomicSequent::closed(polarity, a.clone());
                if derivable(base, &sequent) {
                    SupportVerdict::Holds {
                        justification: Justification::AtomicDerivable { sequent },
                    }
                } else {
                    SupportVerdict::Fails {
                        witness: CounterWitness {
                            clause: clause_name("at", polarity),
                            extension: base.clone(),
                            atom: Some(a.clone()),
                            holding: Vec::new(),
                            failing: vec![sequent],
                        },
                    }
                }
            }
            (Formula::Top, Plus) => SupportVerdict::Holds {
                justification: Justification::Constant {
                    clause: "top+".into(),
                },
            },
            (Formula::Bot, Minus) => SupportVerdict::Holds {
                justification: Justification::Constant {
                    clause: "bot-".into(),
                },
            },
            (Formula::Bot, Plus) => self.constant_quantified(base, "bot+", Plus),
            (Formula::Top, Minus) => self.constant_quantified(base, "top-", Minus),
            (Formula::And(l, r), Plus) => {
                self.all_of(base, "and+", &[(l, Plus), (r, Plus)], fuel)
            }
            (Formula::Or(l, r), Minus) => {
                self.all_of(base, "or-", &[(l, Minus), (r, Minus)], fuel)
            }
            (Formula::Imp(l, r), Minus) => {
                self.all_of(base, "imp-", &[(l, Plus), (r, Minus)], fuel)
            }
            (Formula::CoImp(l, r), Plus) => {
                self.all_of(base, "coimp+", &[(l, Plus), (r, Minus)], fuel)
            }
            (Formula::Imp(l, r), Plus) => {
                let gamma: BTreeSet<Formula> = std::iter::once((**l).clone()).collect();
                let inner = self.eval_inf(base, &gamma, &BTreeSet::new(), Plus, r, fuel);
                wrap_reduction("imp+", inner)
            }
            (Formula::CoImp(l, r), Minus) => {
                let delta: BTreeSet<Formula> = std::iter::once((**r).clone()).collect();
                let inner = self.eval_inf(base, &BTreeSet::new(), &delta, Minus, l, fuel);
                wrap_reduction("coimp-", inner)
            }
            (Formula::Or(l, r), Plus) => self.quantified_binary(base, chi, l, r, Plus, fuel),
            (Formula::And(l, r), Minus) => self.quantified_binary(base, chi, l, r, Minus, fuel),
        }
    }

    /// `bot +` / `top -`: both demand proofs and refutations of every atom
    /// (the naive variants demand only the matching sign). Decidable over a
    /// finite universe; with fresh atoms available, always refuted by one.
    fn constant_quantified(
        &mut self,
        base: &Base,
        stem: &str,
        naive_sign: Polarity,
    ) -> SupportVerdict {
        let clause = match self.clauses {
            ClauseSet::Standard => stem.to_string(),
            ClauseSet::Naive => format!("naive-{stem}"),
        };
        let signs: &[Polarity] = match self.clauses {
            ClauseSet::Standard => &[Polarity::Plus, Polarity::Minus],
            ClauseSet::Naive => match naive_sign {
                Polarity::Plus => &[Polarity::Plus],
                Polarity::Minus => &[Polarity::Minus],
            },
        };
        if self.finite_at {
            let mut parts = Vec::new();
            for atom in &self.universe {
                for &sign in signs {
                    let sequent = AtomicSequent::closed(sign, atom.clone());
                    if derivable(base, &sequent) {
                        parts.push(Justification::AtomicDerivable { sequent });
                    } else {
                        return SupportVerdict::Fails {
                            witness: CounterWitness {
                                clause,
                                extension: base.clone(),
                                atom: Some(atom.clone()),
                                holding: Vec::new(),
                                failing: vec![sequent],
                            },
                        };
                    }
                }
            }
            SupportVerdict::Holds {
                justification: Justification::AllOf { clause, parts },
            }
        } else {
            // Infinitely many atoms: one fresh for this base settles it.
            let base_atoms = base.atoms();
            let mut idx = 0usize;
            let fresh = fresh_atom(&base_atoms, &mut idx);
            SupportVerdict::Fails {
                witness: CounterWitness {
                    clause,
                    extension: base.clone(),
                    atom: Some(fresh.clone()),
                    holding: Vec::new(),
                    failing: vec![AtomicSequent::closed(signs[0], fresh)],
                },
            }
        }
    }

    /// Finite conjunction of sub-claims. `Fails` beats `Unknown`, and the
    /// first failing part in clause order is the reported witness.
    fn all_of(
        &mut self,
        base: &Base,
        clause: &str,
        parts: &[(&Formula, Polarity)],
        fuel: u32,
    ) -> SupportVerdict {
        let mut justifications = Vec::new();
        let mut pending_unknown: Option<bool> = None;
        for (f, pol) in parts {
            match self.eval_plain(base, *pol, f, fuel) {
                SupportVerdict::Holds { justification } => justifications.push(justification),
                fails @ SupportVerdict::Fails { .. } => return fails,
                SupportVerdict::Unknown { exhausted, .. } => {
                    pending_unknown = Some(pending_unknown.unwrap_or(true) && exhausted);
                }
            }
        }
        match pending_unknown {
            Some(exhausted) => self.unknown(exhausted),
            None => SupportVerdict::Holds {
                justification: Justification::AllOf {
                    clause: clause.to_string(),
                    parts: justifications,
                },
            },
        }
    }

    /// `or +` / `and -`. One decisively supported operand suffices; otherwise
    /// search extensions and atoms for a violated clause body.
    fn quantified_binary(
        &mut self,
        base: &Base,
        whole: &Formula,
        l: &Formula,
        r: &Formula,
        polarity: Polarity,
        fuel: u32,
    ) -> SupportVerdict {
        let stem = if polarity == Polarity::Plus { "or+" } else { "and-" };
        let clause = match self.clauses {
            ClauseSet::Standard => stem.to_string(),
            ClauseSet::Naive => format!("naive-{stem}"),
        };
        for (side, operand) in [(1u8, l), (2u8, r)] {
            if let SupportVerdict::Holds { justification } =
                self.eval_plain(base, polarity, operand, 0)
            {
                return SupportVerdict::Holds {
                    justification: Justification::Sufficient {
                        clause,
                        side,
                        inner: Box::new(justification),
                    },
                };
            }
        }
        if fuel == 0 {
            return self.unknown(false);
        }

        // Clause body at (C, p): the operands jointly entail p, but p is not
        // supported. `or +` places the operands as proof assumptions, `and -`
        // as refutation assumptions. Standard checks the body at both signs;
        // naive only at the sign of the clause itself.
        let signs: &[Polarity] = match self.clauses {
            ClauseSet::Standard => &[Polarity::Plus, Polarity::Minus],
            ClauseSet::Naive => match polarity {
                Polarity::Plus => &[Polarity::Plus],
                Polarity::Minus => &[Polarity::Minus],
            },
        };
        let atoms = self.universe.clone();
        let is_or = polarity == Polarity::Plus;
        let _ = whole;
        let outcome = self.for_each_extension(base, &mut |ctx, ext| {
            for p in &atoms {
                if ctx.spent >= ctx.budget.cap {
                    return Some(Search::Capped);
                }
                ctx.spent += 1;
                let target = Formula::Atom(p.clone());
                'signs: for &sign in signs {
                    let mut holding = Vec::new();
                    for operand in [l, r] {
                        let single: BTreeSet<Formula> =
                            std::iter::once(operand.clone()).collect();
                        let empty = BTreeSet::new();
                        let (g, d) = if is_or {
                            (&single, &empty)
                        } else {
                            (&empty, &single)
                        };
                        match ctx.eval_inf(ext, g, d, sign, &target, 0) {
                            SupportVerdict::Holds { justification } => {
                                holding.extend(justification.sequents().into_iter().cloned());
                            }
                            _ => continue 'signs,
                        }
                    }
                    if let SupportVerdict::Fails { witness } =
                        ctx.eval_plain(ext, sign, &target, 0)
                    {
                        holding.extend(witness.holding);
                        return Some(Search::Violation(CounterWitness {
                            clause: clause.clone(),
                            extension: ext.clone(),
                            atom: Some(p.clone()),
                            holding,
                            failing: witness.failing,
                        }));
                    }
                }
            }
            None
        });
        self.finish_search(outcome)
    }

    fn finish_search(&self, outcome: Search) -> SupportVerdict {
        match outcome {
            Search::Violation(witness) => SupportVerdict::Fails { witness },
            Search::Exhausted => self.unknown(true),
            Search::Capped => self.unknown(false),
        }
    }

    /// Enumerate candidate extensions: the base itself first, then every set
    /// of up to `max_extra_rules` rules from the budget universe, ordered so
    /// that all combinations of low-index (simple) rules come before any
    /// higher-index rule appears.
    fn for_each_extension(
        &mut self,
        base: &Base,
        f: &mut dyn FnMut(&mut Ctx<'a>, &Base) -> Option<Search>,
    ) -> Search {
        let rules = RuleUniverse::new(
            &self.universe,
            self.budget.max_premises,
            self.budget.max_discharge,
        );
        let total = rules.total().min(u64::MAX as u128) as u64;
        let mut combo: Option<Vec<u64>> = Some(Vec::new());
        while let Some(indices) = combo {
            let ext = if indices.is_empty() {
                base.clone()
            } else {
                let extra: Vec<AtomicRule> = indices.iter().map(|&i| rules.rule_at(i)).collect();
                base.extended_with(extra.iter())
            };
            if let Some(result) = f(self, &ext) {
                return result;
            }
            combo = next_combo(indices, total, self.budget.max_extra_rules);
        }
        Search::Exhausted
    }
}

fn wrap_reduction(clause: &str, inner: SupportVerdict) -> SupportVerdict {
    match inner {
        SupportVerdict::Holds { justification } => SupportVerdict::Holds {
            justification: Justification::Reduction {
                clause: clause.to_string(),
                inner: Box::new(justification),
            },
        },
        other => other,
    }
}

fn clause_name(stem: &str, polarity: Polarity) -> String {
    format!("{stem}{polarity}")
}

/// Smallest `x{i}` not contained in `taken`; `next` carries the counter so
/// repeated calls stay distinct.
fn fresh_atom(taken: &BTreeSet<Atom>, next: &mut usize) -> Atom {
    loop {
        let candidate = Atom::new(format!("x{next}")).expect("generated name is valid");
        *next += 1;
        if !taken.contains(&candidate) {
            return candidate;
        }
    }
}

// ---------------------------------------------------------------------------
// Rule universe enumeration

/// Indexable universe of candidate rules over a fixed atom set. Rules are
/// ordered by premise count, then by premise tuple (simple premises first),
/// then by conclusion, so low indices mean structurally small rules.
struct RuleUniverse {
    atoms: Vec<Atom>,
    premises: Vec<RulePremise>,
    max_premises: usize,
}

impl RuleUniverse {
    fn new(atoms: &[Atom], max_premises: usize, max_discharge: usize) -> RuleUniverse {
        RuleUniverse {
            atoms: atoms.to_vec(),
            premises: premise_menu(atoms, max_discharge),
            max_premises,
        }
    }

    fn conclusions(&self) -> u128 {
        self.atoms.len() as u128 * 2
    }

    fn total(&self) -> u128 {
        let np = self.premises.len() as u128;
        let mut total = 0u128;
        let mut block = self.conclusions();
        for _ in 0..=self.max_premises {
            total = total.saturating_add(block);
            block = block.saturating_mul(np);
        }
        total
    }

    fn rule_at(&self, index: u64) -> AtomicRule {
        let nc = self.conclusions();
        let np = self.premises.len() as u128;
        let mut rem = index as u128;
        let mut arity = 0usize;
        loop {
            let block = nc * np.pow(arity as u32);
            if rem < block {
                break;
            }
            rem -= block;
            arity += 1;
        }
        let c = (rem % nc) as usize;
        let mut tuple = rem / nc;
        let mut premises = vec![0usize; arity];
        for slot in (0..arity).rev() {
            premises[slot] = (tuple % np) as usize;
            tuple /= np;
        }
        AtomicRule::new(
            format!("ext{index}"),
            premises.iter().map(|&i| self.premises[i].clone()).collect(),
            self.atoms[c / 2].clone(),
            if c.is_multiple_of(2) {
                Polarity::Plus
            } else {
                Polarity::Minus
            },
        )
    }
}

fn premise_menu(atoms: &[Atom], max_discharge: usize) -> Vec<RulePremise> {
    let sets = discharge_sets(atoms, max_discharge);
    let mut pairs: Vec<(usize, usize)> = (0..sets.len())
        .flat_map(|i| (0..sets.len()).map(move |j| (i, j)))
        .collect();
    pairs.sort_by_key(|&(i, j)| (sets[i].len() + sets[j].len(), i, j));
    let mut menu = Vec::new();
    for (i, j) in pairs {
        for atom in atoms {
            for pol in [Polarity::Plus, Polarity::Minus] {
                menu.push(RulePremise {
                    atom: atom.clone(),
                    polarity: pol,
                    discharged_proofs: sets[i].clone(),
                    discharged_refutations: sets[j].clone(),
                });
            }
        }
    }
    menu
}

/// Subsets of `atoms` of size at most `max`, ordered by size then index-lex.
fn discharge_sets(atoms: &[Atom], max: usize) -> Vec<BTreeSet<Atom>> {
    let mut out = vec![BTreeSet::new()];
    let mut current = Vec::new();
    for size in 1..=max.min(atoms.len()) {
        combos(atoms, 0, size, &mut current, &mut out);
    }
    out
}

fn combos(
    atoms: &[Atom],
    start: usize,
    size: usize,
    current: &mut Vec<Atom>,
    out: &mut Vec<BTreeSet<Atom>>,
) {
    if size == 0 {
        out.push(current.iter().cloned().collect());
        return;
    }
    for i in start..=atoms.len().saturating_sub(size) {
        current.push(atoms[i].clone());
        combos(atoms, i + 1, size - 1, current, out);
        current.pop();
    }
}

/// Successor of an ascending index set in an order that exhausts every
/// combination over indices `0..k` before introducing index `k`: after the
/// empty set come {0}, {1}, {0,1}, {2}, {0,2}, {1,2}, {3}, ... A violating
/// pair of simple rules is therefore reached early even when the full rule
/// universe is astronomically large.
fn next_combo(mut combo: Vec<u64>, n: u64, max_len: usize) -> Option<Vec<u64>> {
    if advance(&mut combo, n, max_len) {
        Some(combo)
    } else {
        None
    }
}

fn advance(s: &mut Vec<u64>, n: u64, max_len: usize) -> bool {
    if s.is_empty() {
        if n == 0 || max_len == 0 {
            return false;
        }
        s.push(0);
        return true;
    }
    let top = *s.last().unwrap();
    let mut prefix: Vec<u64> = s[..s.len() - 1].to_vec();
    if advance(&mut prefix, top, max_len - 1) {
        prefix.push(top);
        *s = prefix;
        return true;
    }
    if top + 1 < n {
        s.clear();
        s.push(top + 1);
        return true;
    }
    false
}
