//! Shared fixtures and seeded generators for the acceptance suite.
//!
//! Everything random flows from one ChaCha seed so failures reproduce
//! exactly; set `BILAT_SEED` to re-roll the population.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use bilat_core::base::{AtomicRule, Base, RulePremise};
use bilat_core::formula::{Atom, Formula, Polarity};
use bilat_core::kripke::RawModel;

pub const DEFAULT_SEED: u64 = 0xB11A7;

pub fn rng() -> ChaCha8Rng {
    let seed = std::env::var("BILAT_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn at(name: &str) -> Atom {
    Atom::new(name).expect("fixture atom")
}

pub fn f(src: &str) -> Formula {
    src.parse().expect("fixture formula")
}

pub fn pol(rng: &mut ChaCha8Rng) -> Polarity {
    if rng.gen_bool(0.5) {
        Polarity::Plus
    } else {
        Polarity::Minus
    }
}

/// The running four-rule example: R1/R2 derive r positively/negatively from
/// a proof of p and a refutation of q, R3 is a proof axiom for p, R4 proves
/// s from a proof of r while discharging refutation-assumptions of q.
pub fn example_base() -> Base {
    Base::new(vec![
        AtomicRule::new(
            "R1",
            vec![
                RulePremise::new(at("p"), Polarity::Plus),
                RulePremise::new(at("q"), Polarity::Minus),
            ],
            at("r"),
            Polarity::Plus,
        ),
        AtomicRule::new(
            "R2",
            vec![
                RulePremise::new(at("p"), Polarity::Plus),
                RulePremise::new(at("q"), Polarity::Minus),
            ],
            at("r"),
            Polarity::Minus,
        ),
        AtomicRule::axiom("R3", at("p"), Polarity::Plus),
        AtomicRule::new(
            "R4",
            vec![RulePremise::new(at("r"), Polarity::Plus).discharging_refutations([at("q")])],
            at("s"),
            Polarity::Plus,
        ),
    ])
    .expect("example base is well formed")
}

const ATOM_POOL: [&str; 4] = ["p", "q", "r", "s"];

pub fn atom_pool(n: usize) -> Vec<Atom> {
    ATOM_POOL[..n].iter().map(|s| at(s)).collect()
}

/// Random base: up to 4 atoms, up to 6 rules of up to 2 premises, each
/// premise discharging at most one assumption.
pub fn random_base(rng: &mut ChaCha8Rng) -> Base {
    let atoms = atom_pool(rng.gen_range(1..=4));
    let n_rules = rng.gen_range(0..=6);
    let mut rules = Vec::with_capacity(n_rules);
    for i in 0..n_rules {
        let n_prem = rng.gen_range(0..=2);
        let mut premises = Vec::with_capacity(n_prem);
        for _ in 0..n_prem {
            let mut premise = RulePremise::new(atoms.choose(rng).unwrap().clone(), pol(rng));
            if rng.gen_bool(0.4) {
                let discharged = atoms.choose(rng).unwrap().clone();
                if rng.gen_bool(0.5) {
                    premise = premise.discharging_proofs([discharged]);
                } else {
                    premise = premise.discharging_refutations([discharged]);
                }
            }
            premises.push(premise);
        }
        rules.push(AtomicRule::new(
            format!("R{i}"),
            premises,
            atoms.choose(rng).unwrap().clone(),
            pol(rng),
        ));
    }
    Base::new(rules).expect("generated base is well formed")
}

/// Random formula of the given maximum connective depth over `atoms`.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[Atom], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::Atom(atoms.choose(rng).unwrap().clone()),
        };
    }
    let l = Box::new(random_formula(rng, atoms, depth - 1));
    let r = Box::new(random_formula(rng, atoms, depth - 1));
    match rng.gen_range(0..4) {
        0 => Formula::And(l, r),
        1 => Formula::Or(l, r),
        2 => Formula::Imp(l, r),
        _ => Formula::CoImp(l, r),
    }
}

/// Random raw model that validates: the order is generated lower-index to
/// higher-index and the valuations are closed upward along it by hand.
#[allow(clippy::needless_range_loop)]
pub fn random_raw_model(rng: &mut ChaCha8Rng, max_worlds: usize, atoms: &[Atom]) -> RawModel {
    let n = rng.gen_range(1..=max_worlds);
    let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut leq = vec![vec![false; n]; n];
    let mut order = Vec::new();
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.4) {
                leq[i][j] = true;
                order.push((worlds[i].clone(), worlds[j].clone()));
            }
        }
    }
    // Transitive closure; edges only point up in index order, one pass per
    // intermediate node suffices.
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    let seed_sets = |rng: &mut ChaCha8Rng| -> Vec<BTreeSet<Atom>> {
        (0..n)
            .map(|_| {
                atoms
                    .iter()
                    .filter(|_| rng.gen_bool(0.3))
                    .cloned()
                    .collect()
            })
            .collect()
    };
    let close_up = |seeds: &[BTreeSet<Atom>]| -> Vec<BTreeSet<Atom>> {
        (0..n)
            .map(|j| {
                let mut v = BTreeSet::new();
                for (i, seed) in seeds.iter().enumerate() {
                    if leq[i][j] {
                        v.extend(seed.iter().cloned());
                    }
                }
                v
            })
            .collect()
    };
    let vplus = close_up(&seed_sets(rng));
    let vminus = close_up(&seed_sets(rng));
    RawModel {
        worlds: worlds.clone(),
        order,
        vplus: worlds.iter().cloned().zip(vplus).collect(),
        vminus: worlds.iter().cloned().zip(vminus).collect(),
    }
}
