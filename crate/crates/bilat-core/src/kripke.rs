//! Finite two-sorted Kripke models: validation, the forcing relation, and
//! bounded countermodel search.
//!
//! A model carries two valuations, `vplus` (verified atoms) and `vminus`
//! (falsified atoms), both monotone along the order. The implication
//! clauses quantify over upper worlds; refuted implication and asserted
//! co-implication are local conjunctions.
//!
//! Countermodel search enumerates preorders up to isomorphism and monotone
//! valuations (one up-set per atom and sign), so every enumerated model is
//! valid by construction. Witnesses are re-verified through [`forces`]
//! before being returned.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Atom, Formula, Polarity};

/// File-facing model: world ids, order pairs `[lower, upper]`, valuations
/// keyed by world. The order need not be closed; closure happens on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModel {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub vplus: BTreeMap<String, BTreeSet<Atom>>,
    #[serde(default)]
    pub vminus: BTreeMap<String, BTreeSet<Atom>>,
}

/// A validated model: order reflexive-transitively closed, valuations
/// monotone. Construct via [`validate_model`] or [`countermodel_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    leq: Vec<Vec<bool>>,
    vplus: Vec<BTreeSet<Atom>>,
    vminus: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// `a <= b` in the closed order (indices into [`Self::worlds`]).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn vplus_at(&self, w: usize) -> &BTreeSet<Atom> {
        &self.vplus[w]
    }

    pub fn vminus_at(&self, w: usize) -> &BTreeSet<Atom> {
        &self.vminus[w]
    }

    /// Back to the file shape; the emitted order is the closure minus the
    /// diagonal.
    pub fn to_raw(&self) -> RawModel {
        let n = self.worlds.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] {
                    order.push((self.worlds[a].clone(), self.worlds[b].clone()));
                }
            }
        }
        RawModel {
            worlds: self.worlds.clone(),
            order,
            vplus: self
                .worlds
                .iter()
                .zip(&self.vplus)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
            vminus: self
                .worlds
                .iter()
                .zip(&self.vminus)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("model has no worlds")]
    EmptyWorlds,
    #[error("duplicate world id {0}")]
    DuplicateWorld(String),
    #[error("unknown world {world} in {context}")]
    UnknownWorld { world: String, context: String },
    #[error("monotonicity violation: {atom} is in v{sign} at {lower} but not at {upper} above it")]
    MonotonicityViolation {
        lower: String,
        upper: String,
        atom: Atom,
        sign: Polarity,
    },
    #[error("max_worlds must be at least 1")]
    ZeroWorldBound,
    #[error("atom universe is missing {0}, which occurs in the query")]
    AtomUniverseTooSmall(Atom),
    #[error("enumeration needs about {estimated} steps, over the ceiling of {ceiling}")]
    EnumerationTooLarge { estimated: u128, ceiling: u64 },
}

/// Close the order under reflexivity and transitivity, then check the two
/// valuations are monotone along it.
pub fn validate_model(raw: &RawModel) -> Result<KripkeModel, KripkeError> {
    if raw.worlds.is_empty() {
        return Err(KripkeError::EmptyWorlds);
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, w) in raw.worlds.iter().enumerate() {
        if index.insert(w, i).is_some() {
            return Err(KripkeError::DuplicateWorld(w.clone()));
        }
    }
    let n = raw.worlds.len();
    let lookup = |name: &str, context: &str| -> Result<usize, KripkeError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| KripkeError::UnknownWorld {
                world: name.to_string(),
                context: context.to_string(),
            })
    };

    let mut leq = vec![vec![false; n]; n];
    for (low, high) in &raw.order {
        leq[lookup(low, "order")?][lookup(high, "order")?] = true;
    }
    reflexive_transitive_closure(&mut leq);

    let mut vplus = vec![BTreeSet::new(); n];
    let mut vminus = vec![BTreeSet::new(); n];
    for (world, atoms) in &raw.vplus {
        vplus[lookup(world, "vplus")?] = atoms.clone();
    }
    for (world, atoms) in &raw.vminus {
        vminus[lookup(world, "vminus")?] = atoms.clone();
    }

    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a][b] {
                continue;
            }
            for (sign, v) in [(Polarity::Plus, &vplus), (Polarity::Minus, &vminus)] {
                if let Some(atom) = v[a].difference(&v[b]).next() {
                    return Err(KripkeError::MonotonicityViolation {
                        lower: raw.worlds[a].clone(),
                        upper: raw.worlds[b].clone(),
                        atom: atom.clone(),
                        sign,
                    });
                }
            }
        }
    }

    Ok(KripkeModel {
        worlds: raw.worlds.clone(),
        leq,
        vplus,
        vminus,
    })
}

#[allow(clippy::needless_range_loop)]
fn reflexive_transitive_closure(m: &mut [Vec<bool>]) {
    let n = m.len();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
}

/// Does world `w` force `f` at the given sign?
pub fn forces(
    m: &KripkeModel,
    world: &str,
    pol: Polarity,
    f: &Formula,
) -> Result<bool, KripkeError> {
    let w = m
        .world_index(world)
        .ok_or_else(|| KripkeError::UnknownWorld {
            world: world.to_string(),
            context: "forces".to_string(),
        })?;
    Ok(forces_idx(m, w, pol, f))
}

pub(crate) fn forces_idx(m: &KripkeModel, w: usize, pol: Polarity, f: &Formula) -> bool {
    use Polarity::{Minus, Plus};
    let n = m.worlds.len();
    let uppers = |w: usize| (0..n).filter(move |&v| m.leq[w][v]);
    match (pol, f) {
        (Plus, Formula::Atom(a)) => m.vplus[w].contains(a),
        (Minus, Formula::Atom(a)) => m.vminus[w].contains(a),
        (Plus, Formula::Bot) => false,
        (Minus, Formula::Bot) => true,
        (Plus, Formula::Top) => true,
        (Minus, Formula::Top) => false,
        (Plus, Formula::And(a, b)) => forces_idx(m, w, Plus, a) && forces_idx(m, w, Plus, b),
        (Minus, Formula::And(a, b)) => forces_idx(m, w, Minus, a) || forces_idx(m, w, Minus, b),
        (Plus, Formula::Or(a, b)) => forces_idx(m, w, Plus, a) || forces_idx(m, w, Plus, b),
        (Minus, Formula::Or(a, b)) => forces_idx(m, w, Minus, a) && forces_idx(m, w, Minus, b),
        (Plus, Formula::Imp(a, b)) => {
            uppers(w).all(|v| !forces_idx(m, v, Plus, a) || forces_idx(m, v, Plus, b))
        }
        (Minus, Formula::Imp(a, b)) => forces_idx(m, w, Plus, a) && forces_idx(m, w, Minus, b),
        (Plus, Formula::CoImp(a, b)) => forces_idx(m, w, Plus, a) && forces_idx(m, w, Minus, b),
        (Minus, Formula::CoImp(a, b)) => {
            uppers(w).all(|v| !forces_idx(m, v, Minus, b) || forces_idx(m, v, Minus, a))
        }
    }
}

/// Every world forces `f` at the given sign.
pub fn model_valid(m: &KripkeModel, pol: Polarity, f: &Formula) -> bool {
    (0..m.worlds.len()).all(|w| forces_idx(m, w, pol, f))
}

/// Every world of `m` that forces all of `gamma` positively and all of
/// `delta` negatively also forces `chi` at `pol`.
pub fn entails(
    m: &KripkeModel,
    gamma: &BTreeSet<Formula>,
    delta: &BTreeSet<Formula>,
    pol: Polarity,
    chi: &Formula,
) -> bool {
    (0..m.worlds.len()).all(|w| {
        let antecedent = gamma.iter().all(|g| forces_idx(m, w, Polarity::Plus, g))
            && delta.iter().all(|d| forces_idx(m, w, Polarity::Minus, d));
        !antecedent || forces_idx(m, w, pol, chi)
    })
}

/// Enumeration budget for [`countermodel_search`], counting relation scans
/// and candidate models.
pub const ENUMERATION_CEILING: u64 = 20_000_000;

/// Search for a validated model and world forcing all of `gamma` (+) and
/// `delta` (−) but not `chi` at `pol`. Models are enumerated smallest
/// first; the first witness in enumeration order is returned.
pub fn countermodel_search(
    gamma: &BTreeSet<Formula>,
    delta: &BTreeSet<Formula>,
    pol: Polarity,
    chi: &Formula,
    max_worlds: usize,
    atom_universe: &BTreeSet<Atom>,
) -> Result<Option<(KripkeModel, String)>, KripkeError> {
    if max_worlds == 0 {
        return Err(KripkeError::ZeroWorldBound);
    }
    for f in gamma.iter().chain(delta.iter()).chain([chi]) {
        for a in f.atoms() {
            if !atom_universe.contains(&a) {
                return Err(KripkeError::AtomUniverseTooSmall(a));
            }
        }
    }

    let atoms: Vec<Atom> = atom_universe.iter().cloned().collect();
    let signed_slots = 2 * atoms.len() as u32;

    // Cost pass: relation scans are 2^(n^2-n) each, candidate models are
    // up_sets^(2·|atoms|) per preorder class.
    let mut estimated: u128 = 0;
    let mut preorders_by_n: Vec<Vec<Vec<Vec<bool>>>> = Vec::new();
    for n in 1..=max_worlds {
        estimated = estimated.saturating_add(1u128 << (n * n - n));
        if estimated > ENUMERATION_CEILING as u128 {
            return Err(KripkeError::EnumerationTooLarge {
                estimated,
                ceiling: ENUMERATION_CEILING,
            });
        }
        let classes = enumerate_preorders(n);
        for mat in &classes {
            let u = up_sets(mat).len() as u128;
            estimated = estimated.saturating_add(u.saturating_pow(signed_slots));
        }
        preorders_by_n.push(classes);
        if estimated > ENUMERATION_CEILING as u128 {
            return Err(KripkeError::EnumerationTooLarge {
                estimated,
                ceiling: ENUMERATION_CEILING,
            });
        }
    }

    for classes in &preorders_by_n {
        for mat in classes {
            if let Some(hit) = search_preorder(mat, &atoms, gamma, delta, pol, chi) {
                return Ok(Some(hit));
            }
        }
    }
    Ok(None)
}

/// Bitmask evaluation of forcing over all worlds of one candidate model.
struct Masks<'a> {
    up: &'a [u32],
    all: u32,
    plus: BTreeMap<&'a Atom, u32>,
    minus: BTreeMap<&'a Atom, u32>,
}

impl Masks<'_> {
    /// Worlds forcing `f` positively and negatively.
    fn eval(&self, f: &Formula) -> (u32, u32) {
        match f {
            Formula::Atom(a) => (
                self.plus.get(a).copied().unwrap_or(0),
                self.minus.get(a).copied().unwrap_or(0),
            ),
            Formula::Bot => (0, self.all),
            Formula::Top => (self.all, 0),
            Formula::And(a, b) => {
                let (pa, ma) = self.eval(a);
                let (pb, mb) = self.eval(b);
                (pa & pb, ma | mb)
            }
            Formula::Or(a, b) => {
                let (pa, ma) = self.eval(a);
                let (pb, mb) = self.eval(b);
                (pa | pb, ma & mb)
            }
            Formula::Imp(a, b) => {
                let (pa, _) = self.eval(a);
                let (pb, mb) = self.eval(b);
                let bad = pa & !pb;
                let plus = self.box_avoiding(bad);
                (plus, pa & mb)
            }
            Formula::CoImp(a, b) => {
                let (pa, ma) = self.eval(a);
                let (_, mb) = self.eval(b);
                let bad = mb & !ma;
                (pa & mb, self.box_avoiding(bad))
            }
        }
    }

    /// Worlds none of whose upper worlds lie in `bad`.
    fn box_avoiding(&self, bad: u32) -> u32 {
        let mut out = 0;
        for (w, up) in self.up.iter().enumerate() {
            if up & bad == 0 {
                out |= 1 << w;
            }
        }
        out
    }
}

fn search_preorder(
    mat: &[Vec<bool>],
    atoms: &[Atom],
    gamma: &BTreeSet<Formula>,
    delta: &BTreeSet<Formula>,
    pol: Polarity,
    chi: &Formula,
) -> Option<(KripkeModel, String)> {
    let n = mat.len();
    let all: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let up: Vec<u32> = (0..n)
        .map(|w| {
            (0..n)
                .filter(|&v| mat[w][v])
                .fold(0u32, |acc, v| acc | (1 << v))
        })
        .collect();
    let upsets = up_sets(mat);

    // One up-set choice per (atom, sign); last slot varies fastest.
    let slots = 2 * atoms.len();
    let mut digits = vec![0usize; slots];
    loop {
        let mut masks = Masks {
            up: &up,
            all,
            plus: BTreeMap::new(),
            minus: BTreeMap::new(),
        };
        for (i, atom) in atoms.iter().enumerate() {
            masks.plus.insert(atom, upsets[digits[2 * i]]);
            masks.minus.insert(atom, upsets[digits[2 * i + 1]]);
        }

        let mut candidates = all;
        for g in gamma {
            candidates &= masks.eval(g).0;
        }
        for d in delta {
            candidates &= masks.eval(d).1;
        }
        let (cp, cm) = masks.eval(chi);
        candidates &= !match pol {
            Polarity::Plus => cp,
            Polarity::Minus => cm,
        } & all;

        if candidates != 0 {
            let w = candidates.trailing_zeros() as usize;
            let model = model_from_masks(mat, atoms, &masks);
            let name = model.worlds[w].clone();
            // Independent re-check through the recursive evaluator.
            let confirmed = gamma.iter().all(|g| forces_idx(&model, w, Polarity::Plus, g))
                && delta.iter().all(|d| forces_idx(&model, w, Polarity::Minus, d))
                && !forces_idx(&model, w, pol, chi);
            assert!(confirmed, "witness failed re-verification");
            return Some((model, name));
        }

        // Advance the mixed-radix counter.
        let mut i = slots;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < upsets.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn model_from_masks(mat: &[Vec<bool>], atoms: &[Atom], masks: &Masks) -> KripkeModel {
    let n = mat.len();
    let in_mask = |mask: u32, w: usize| mask & (1 << w) != 0;
    KripkeModel {
        worlds: (0..n).map(|w| format!("w{w}")).collect(),
        leq: mat.iter().map(|row| row.to_vec()).collect(),
        vplus: (0..n)
            .map(|w| {
                atoms
                    .iter()
                    .filter(|a| in_mask(masks.plus[*a], w))
                    .cloned()
                    .collect()
            })
            .collect(),
        vminus: (0..n)
            .map(|w| {
                atoms
                    .iter()
                    .filter(|a| in_mask(masks.minus[*a], w))
                    .cloned()
                    .collect()
            })
            .collect(),
    }
}

/// All preorders on `n` worlds, one canonical representative per
/// isomorphism class, in ascending order of their canonical encoding.
#[allow(clippy::needless_range_loop)]
fn enumerate_preorders(n: usize) -> Vec<Vec<Vec<bool>>> {
    let perms = permutations(n);
    let encode = |m: &[Vec<bool>]| -> u64 {
        let mut key = 0u64;
        for i in 0..n {
            for j in 0..n {
                if m[i][j] {
                    key |= 1 << (i * n + j);
                }
            }
        }
        key
    };
    let mut canonical: BTreeSet<u64> = BTreeSet::new();
    let off_diag = n * n - n;
    for bits in 0u64..(1 << off_diag) {
        let mut m = vec![vec![false; n]; n];
        let mut k = 0;
        for i in 0..n {
            m[i][i] = true;
            for j in 0..n {
                if i != j {
                    m[i][j] = bits & (1 << k) != 0;
                    k += 1;
                }
            }
        }
        if !is_transitive(&m) {
            continue;
        }
        let mut best = u64::MAX;
        let mut relabeled = vec![vec![false; n]; n];
        for perm in &perms {
            for i in 0..n {
                for j in 0..n {
                    relabeled[i][j] = m[perm[i]][perm[j]];
                }
            }
            best = best.min(encode(&relabeled));
        }
        canonical.insert(best);
    }
    canonical
        .into_iter()
        .map(|key| {
            (0..n)
                .map(|i| (0..n).map(|j| key & (1 << (i * n + j)) != 0).collect())
                .collect()
        })
        .collect()
}

#[allow(clippy::needless_range_loop)]
fn is_transitive(m: &[Vec<bool>]) -> bool {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            if !m[i][j] {
                continue;
            }
            for k in 0..n {
                if m[j][k] && !m[i][k] {
                    return false;
                }
            }
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k.is_multiple_of(2) {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut current, &mut out);
    out
}

/// Upward-closed world sets of a preorder, ascending by mask value.
fn up_sets(mat: &[Vec<bool>]) -> Vec<u32> {
    let n = mat.len();
    let up: Vec<u32> = (0..n)
        .map(|w| {
            (0..n)
                .filter(|&v| mat[w][v])
                .fold(0u32, |acc, v| acc | (1 << v))
        })
        .collect();
    (0u32..(1 << n))
        .filter(|&s| (0..n).all(|w| s & (1 << w) == 0 || up[w] & !s == 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use proptest::prelude::*;

    fn at(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn chain(vplus_upper: &[&str], vminus_upper: &[&str]) -> KripkeModel {
        let raw = RawModel {
            worlds: vec!["a".into(), "b".into()],
            order: vec![("a".into(), "b".into())],
            vplus: [("b".to_string(), vplus_upper.iter().map(|s| at(s)).collect())]
                .into_iter()
                .collect(),
            vminus: [(
                "b".to_string(),
                vminus_upper.iter().map(|s| at(s)).collect(),
            )]
            .into_iter()
            .collect(),
        };
        validate_model(&raw).unwrap()
    }

    #[test]
    fn single_world_empty_model_is_valid() {
        let raw = RawModel {
            worlds: vec!["w".into()],
            order: vec![],
            vplus: BTreeMap::new(),
            vminus: BTreeMap::new(),
        };
        let m = validate_model(&raw).unwrap();
        assert!(m.leq(0, 0));
    }

    #[test]
    fn shrinking_valuation_is_a_monotonicity_violation() {
        let raw = RawModel {
            worlds: vec!["a".into(), "b".into()],
            order: vec![("a".into(), "b".into())],
            vplus: [("a".to_string(), [at("p")].into_iter().collect())]
                .into_iter()
                .collect(),
            vminus: BTreeMap::new(),
        };
        match validate_model(&raw) {
            Err(KripkeError::MonotonicityViolation {
                lower,
                upper,
                atom,
                sign,
            }) => {
                assert_eq!((lower.as_str(), upper.as_str()), ("a", "b"));
                assert_eq!(atom, at("p"));
                assert_eq!(sign, Polarity::Plus);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn growing_valuation_is_fine_and_closure_is_applied() {
        let raw = RawModel {
            worlds: vec!["a".into(), "b".into(), "c".into()],
            order: vec![("a".into(), "b".into()), ("b".into(), "c".into())],
            vplus: [("c".to_string(), [at("p")].into_iter().collect())]
                .into_iter()
                .collect(),
            vminus: BTreeMap::new(),
        };
        let m = validate_model(&raw).unwrap();
        assert!(m.leq(0, 2), "closure must add a <= c");

        // A violation only visible through the closed order.
        let raw_bad = RawModel {
            vplus: [("a".to_string(), [at("p")].into_iter().collect())]
                .into_iter()
                .collect(),
            ..raw
        };
        assert!(matches!(
            validate_model(&raw_bad),
            Err(KripkeError::MonotonicityViolation { upper, .. }) if upper == "b" || upper == "c"
        ));
    }

    #[test]
    fn unknown_worlds_are_rejected_everywhere() {
        let raw = RawModel {
            worlds: vec!["a".into()],
            order: vec![("a".into(), "z".into())],
            vplus: BTreeMap::new(),
            vminus: BTreeMap::new(),
        };
        assert!(matches!(
            validate_model(&raw),
            Err(KripkeError::UnknownWorld { context, .. }) if context == "order"
        ));
        let m = validate_model(&RawModel {
            worlds: vec!["a".into()],
            order: vec![],
            vplus: BTreeMap::new(),
            vminus: BTreeMap::new(),
        })
        .unwrap();
        assert!(matches!(
            forces(&m, "z", Polarity::Plus, &f("top")),
            Err(KripkeError::UnknownWorld { .. })
        ));
    }

    #[test]
    fn constant_clauses() {
        let m = chain(&[], &[]);
        for w in ["a", "b"] {
            assert!(forces(&m, w, Polarity::Minus, &f("bot")).unwrap());
            assert!(forces(&m, w, Polarity::Plus, &f("top")).unwrap());
            assert!(!forces(&m, w, Polarity::Plus, &f("bot")).unwrap());
            assert!(!forces(&m, w, Polarity::Minus, &f("top")).unwrap());
        }
    }

    #[test]
    fn excluded_middle_fails_at_the_root_of_a_chain() {
        let m = chain(&["p"], &[]);
        assert!(!forces(&m, "a", Polarity::Plus, &f("p | (p -> bot)")).unwrap());
        assert!(forces(&m, "b", Polarity::Plus, &f("p | (p -> bot)")).unwrap());
    }

    #[test]
    fn entailment_examples() {
        let m = chain(&["p"], &["q"]);
        let gamma: BTreeSet<Formula> = [f("p")].into_iter().collect();
        assert!(entails(&m, &gamma, &BTreeSet::new(), Polarity::Plus, &f("p")));
        let bots: BTreeSet<Formula> = [f("bot")].into_iter().collect();
        assert!(entails(&m, &bots, &BTreeSet::new(), Polarity::Minus, &f("q")));
        assert!(!model_valid(&m, Polarity::Plus, &f("p")));
        assert!(model_valid(&m, Polarity::Minus, &f("bot")));
    }

    #[test]
    fn model_json_round_trips() {
        let json = r#"{"worlds":["w0","w1"],"order":[["w0","w1"]],"vplus":{"w0":[],"w1":["p"]},"vminus":{"w0":[],"w1":[]}}"#;
        let raw: RawModel = serde_json::from_str(json).unwrap();
        let m = validate_model(&raw).unwrap();
        assert!(m.leq(0, 1) && !m.leq(1, 0));
        assert!(m.vplus_at(1).contains(&at("p")));
        let back = serde_json::to_string(&m.to_raw()).unwrap();
        assert_eq!(back, json);
    }

    #[test]
    fn countermodel_for_excluded_middle() {
        let atoms: BTreeSet<Atom> = [at("p")].into_iter().collect();
        let hit = countermodel_search(
            &BTreeSet::new(),
            &BTreeSet::new(),
            Polarity::Plus,
            &f("p | (p -> bot)"),
            2,
            &atoms,
        )
        .unwrap()
        .expect("a two-world countermodel exists");
        let (m, w) = hit;
        assert_eq!(m.worlds().len(), 2);
        let raw = m.to_raw();
        assert_eq!(raw.order.len(), 1);
        let (lower, upper) = raw.order[0].clone();
        assert_eq!(w, lower);
        assert!(raw.vplus[&upper].contains(&at("p")));
        assert!(raw.vplus[&lower].is_empty());
        assert!(raw.vminus.values().all(|v| v.is_empty()));
    }

    #[test]
    fn countermodel_for_the_dual_of_excluded_middle() {
        let atoms: BTreeSet<Atom> = [at("p")].into_iter().collect();
        let (m, w) = countermodel_search(
            &BTreeSet::new(),
            &BTreeSet::new(),
            Polarity::Minus,
            &f("p & (top <- p)"),
            2,
            &atoms,
        )
        .unwrap()
        .expect("a two-world countermodel exists");
        assert_eq!(m.worlds().len(), 2);
        let raw = m.to_raw();
        let (lower, upper) = raw.order[0].clone();
        assert_eq!(w, lower);
        assert!(raw.vminus[&upper].contains(&at("p")));
        assert!(raw.vplus.values().all(|v| v.is_empty()));
    }

    #[test]
    fn no_countermodel_for_top() {
        let atoms: BTreeSet<Atom> = [at("p")].into_iter().collect();
        for max in 1..=3 {
            assert_eq!(
                countermodel_search(
                    &BTreeSet::new(),
                    &BTreeSet::new(),
                    Polarity::Plus,
                    &f("top"),
                    max,
                    &atoms,
                )
                .unwrap(),
                None
            );
        }
    }

    #[test]
    fn search_guards() {
        let atoms: BTreeSet<Atom> = [at("p")].into_iter().collect();
        assert!(matches!(
            countermodel_search(
                &BTreeSet::new(),
                &BTreeSet::new(),
                Polarity::Plus,
                &f("q"),
                1,
                &atoms
            ),
            Err(KripkeError::AtomUniverseTooSmall(a)) if a == at("q")
        ));
        assert!(matches!(
            countermodel_search(
                &BTreeSet::new(),
                &BTreeSet::new(),
                Polarity::Plus,
                &f("p"),
                0,
                &atoms
            ),
            Err(KripkeError::ZeroWorldBound)
        ));
        let many: BTreeSet<Atom> = (0..8)
            .map(|i| Atom::new(format!("a{i}")).unwrap())
            .collect();
        assert!(matches!(
            countermodel_search(
                &BTreeSet::new(),
                &BTreeSet::new(),
                Polarity::Plus,
                &f("a0"),
                4,
                &many
            ),
            Err(KripkeError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn preorder_isomorphism_class_counts() {
        // Preorders up to isomorphism on 1..4 points.
        assert_eq!(enumerate_preorders(1).len(), 1);
        assert_eq!(enumerate_preorders(2).len(), 3);
        assert_eq!(enumerate_preorders(3).len(), 9);
        assert_eq!(enumerate_preorders(4).len(), 33);
    }

    /// Random validated model: a random order, with valuations saturated
    /// upward so monotonicity holds by construction.
    pub(crate) fn arbitrary_model() -> impl Strategy<Value = KripkeModel> {
        (1usize..4)
            .prop_flat_map(|n| {
                let pairs = proptest::collection::vec((0..n, 0..n), 0..5);
                let seeds =
                    proptest::collection::vec((0..n, any::<bool>(), prop_oneof![Just("p"), Just("q")]), 0..7);
                (Just(n), pairs, seeds)
            })
            .prop_map(|(n, pairs, seeds)| {
                let mut leq = vec![vec![false; n]; n];
                for (a, b) in pairs {
                    leq[a][b] = true;
                }
                reflexive_transitive_closure(&mut leq);
                let mut vplus = vec![BTreeSet::new(); n];
                let mut vminus = vec![BTreeSet::new(); n];
                for (w, plus, atom) in seeds {
                    for v in 0..n {
                        if leq[w][v] {
                            if plus {
                                vplus[v].insert(at(atom));
                            } else {
                                vminus[v].insert(at(atom));
                            }
                        }
                    }
                }
                let raw = RawModel {
                    worlds: (0..n).map(|w| format!("w{w}")).collect(),
                    order: (0..n)
                        .flat_map(|a| (0..n).map(move |b| (a, b)))
                        .filter(|&(a, b)| a != b && leq[a][b])
                        .map(|(a, b)| (format!("w{a}"), format!("w{b}")))
                        .collect(),
                    vplus: (0..n).map(|w| (format!("w{w}"), vplus[w].clone())).collect(),
                    vminus: (0..n).map(|w| (format!("w{w}"), vminus[w].clone())).collect(),
                };
                validate_model(&raw).expect("saturated model is monotone")
            })
    }

    proptest! {
        #[test]
        fn forcing_is_persistent(
            m in arbitrary_model(),
            formula in crate::formula::test_gen::formula_strategy(4),
            plus in any::<bool>(),
        ) {
            let pol = if plus { Polarity::Plus } else { Polarity::Minus };
            let n = m.worlds().len();
            for a in 0..n {
                for b in 0..n {
                    if m.leq(a, b) && forces_idx(&m, a, pol, &formula) {
                        prop_assert!(
                            forces_idx(&m, b, pol, &formula),
                            "persistence broken from {a} to {b}"
                        );
                    }
                }
            }
        }

        #[test]
        fn one_world_arrows_are_material(
            p_plus in any::<bool>(), p_minus in any::<bool>(),
            q_plus in any::<bool>(), q_minus in any::<bool>(),
        ) {
            let mut vplus = BTreeSet::new();
            let mut vminus = BTreeSet::new();
            if p_plus { vplus.insert(at("p")); }
            if q_plus { vplus.insert(at("q")); }
            if p_minus { vminus.insert(at("p")); }
            if q_minus { vminus.insert(at("q")); }
            let raw = RawModel {
                worlds: vec!["w".into()],
                order: vec![],
                vplus: [("w".to_string(), vplus)].into_iter().collect(),
                vminus: [("w".to_string(), vminus)].into_iter().collect(),
            };
            let m = validate_model(&raw).unwrap();
            let imp = forces_idx(&m, 0, Polarity::Plus, &f("p -> q"));
            let material = !forces_idx(&m, 0, Polarity::Plus, &f("p"))
                || forces_idx(&m, 0, Polarity::Plus, &f("q"));
            prop_assert_eq!(imp, material);
            let coimp = forces_idx(&m, 0, Polarity::Minus, &f("p <- q"));
            let comaterial = !forces_idx(&m, 0, Polarity::Minus, &f("q"))
                || forces_idx(&m, 0, Polarity::Minus, &f("p"));
            prop_assert_eq!(coimp, comaterial);
        }

        /// The bitmask evaluator agrees with the recursive one.
        #[test]
        fn mask_evaluator_matches_recursive_forces(
            m in arbitrary_model(),
            formula in crate::formula::test_gen::formula_strategy(4),
        ) {
            let n = m.worlds().len();
            let up: Vec<u32> = (0..n)
                .map(|w| (0..n).filter(|&v| m.leq(w, v)).fold(0u32, |acc, v| acc | (1 << v)))
                .collect();
            let mut plus: BTreeMap<&Atom, u32> = BTreeMap::new();
            let mut minus: BTreeMap<&Atom, u32> = BTreeMap::new();
            let atoms: Vec<Atom> = vec![at("p"), at("q")];
            for a in &atoms {
                let pm = (0..n).filter(|&w| m.vplus_at(w).contains(a)).fold(0u32, |x, w| x | (1 << w));
                let mm = (0..n).filter(|&w| m.vminus_at(w).contains(a)).fold(0u32, |x, w| x | (1 << w));
                plus.insert(a, pm);
                minus.insert(a, mm);
            }
            let all = (1u32 << n) - 1;
            let masks = Masks { up: &up, all, plus, minus };
            let (pm, mm) = masks.eval(&formula);
            for w in 0..n {
                prop_assert_eq!(pm & (1 << w) != 0, forces_idx(&m, w, Polarity::Plus, &formula));
                prop_assert_eq!(mm & (1 << w) != 0, forces_idx(&m, w, Polarity::Minus, &formula));
            }
        }
    }
}
