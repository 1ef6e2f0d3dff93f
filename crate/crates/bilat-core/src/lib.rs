//! Bilateral proof/refutation engine for the propositional logic 2Int.
//!
//! The library treats proofs and refutations as equal citizens throughout:
//!
//! - [`formula`]: the 2Int language (atoms, `bot`, `top`, `&`, `|`, `->`,
//!   `<-`), a parser/printer pair, the duality transform and subformula
//!   closure.
//! - [`base`]: bilateral atomic bases, i.e. finite sets of atomic rules whose
//!   premises may discharge proof- and refutation-assumptions, with JSON
//!   (de)serialization, the extension preorder, and rule/base duality.
//! - [`atomic`]: atomic deductions over a base, the deduction checker, a
//!   decidable derivability search with witness reconstruction, an
//!   independent bottom-up fixpoint oracle, and deduction duality.
//! - [`nd`]: the natural deduction system N2Int* (26 rule tags, four of them
//!   with flexible conclusion polarity) and its proof checker.
//! - [`kripke`]: finite two-sorted Kripke models, the forcing relation, and
//!   bounded countermodel search.
//! - [`simulation`]: the simulation base construction that mirrors N2Int*
//!   inside a purely atomic base, with translations in both directions.
//! - [`support`]: the base-extension support checker (standard and naive
//!   clause sets) with three-valued verdicts, plus harmony checks linking a
//!   base and its dual.

pub mod atomic;
pub mod base;
pub mod formula;
pub mod kripke;
pub mod nd;
pub mod simulation;
pub mod support;

pub use atomic::{check_atomic, derivable, derivable_fixpoint, derive_witness, dual_deduction, enumerate_deductions, AtomicDeduction, AtomicSequent, FixpointTable, Prover};
pub use base::{dual_base, dual_rule, AtomicRule, Base, RulePremise};
pub use formula::{dual_formula, parse_formula, print_formula, Atom, Formula, Polarity};
pub use kripke::{countermodel_search, entails, forces, model_valid, validate_model, KripkeError, KripkeModel, RawModel};
pub use nd::{check_nd, nd_rule_catalog, NdError, NdJudgment, NdProof, NdRuleTag};
pub use simulation::{build_mapping, build_simulation_base, translate_atomic_to_nd, translate_nd_to_atomic, AtomicMapping, SimulationError, SimulationSpec};
pub use support::{harmony_check, strong_harmony_check, support, ClauseSet, CounterWitness, ExtensionBudget, HarmonyReport, Justification, SupportQuery, SupportVerdict};
