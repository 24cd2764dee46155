//! Seeded generators for test and benchmark instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{downset_lattice, AumannModel};
use crate::lattice::{Elem, Lattice};
use crate::space::{check_space_axioms, Scs};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const MAX_ATTEMPTS: usize = 10_000;

/// Draws a random space function table.
///
/// Images of join-irreducibles are chosen monotonically (each at or above
/// the images of the irreducibles below it), the remaining images are the
/// joins forced by S.2, and the result is rejected and redrawn until it
/// passes S.1/S.2. On distributive lattices the first draw always passes.
/// Returns `None` if no valid draw was found within the attempt budget.
pub fn random_space_table<R: Rng + ?Sized>(lattice: &Lattice, rng: &mut R) -> Option<Vec<Elem>> {
    let mut irreducibles = lattice.join_irreducibles();
    irreducibles.sort_by_key(|&j| (lattice.height(j), j));
    for _ in 0..MAX_ATTEMPTS {
        let mut image = vec![lattice.bottom(); lattice.len()];
        for &j in &irreducibles {
            let floor = lattice.join_all(
                irreducibles
                    .iter()
                    .filter(|&&k| lattice.lt(k, j))
                    .map(|&k| image[k.0]),
            );
            let choices: Vec<Elem> = lattice
                .elements()
                .filter(|&x| lattice.leq(floor, x))
                .collect();
            image[j.0] = *choices.choose(rng).expect("floor itself qualifies");
        }
        let table: Vec<Elem> = lattice
            .elements()
            .map(|x| {
                lattice.join_all(
                    irreducibles
                        .iter()
                        .filter(|&&j| lattice.leq(j, x))
                        .map(|&j| image[j.0]),
                )
            })
            .collect();
        if check_space_axioms(lattice, &table)
            .map(|r| r.ok())
            .unwrap_or(false)
        {
            return Some(table);
        }
    }
    None
}

/// An scs with `agents` random space functions named `1..=agents`.
pub fn random_scs<R: Rng + ?Sized>(
    lattice: Arc<Lattice>,
    agents: usize,
    rng: &mut R,
) -> Result<Scs> {
    let tables = (1..=agents)
        .map(|i| {
            let t = random_space_table(&lattice, rng).ok_or(Error::GeneratorExhausted)?;
            Ok((i.to_string(), t))
        })
        .collect::<Result<Vec<_>>>()?;
    Scs::new(lattice, tables)
}

/// A random poset on `points` elements as `(lower, upper)` relations. Each
/// pair `i < j` is related with probability one half; the relation is then
/// closed transitively by the lattice builder.
pub fn random_poset<R: Rng + ?Sized>(points: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut rel = Vec::new();
    for i in 0..points {
        for j in i + 1..points {
            if rng.gen_bool(0.5) {
                rel.push((i, j));
            }
        }
    }
    rel
}

/// Down-set lattice of a random poset with at most `max_points` points.
pub fn random_distributive_lattice<R: Rng + ?Sized>(max_points: usize, rng: &mut R) -> Lattice {
    let points = rng.gen_range(1..=max_points);
    let names: Vec<String> = (0..points).map(|i| format!("x{i}")).collect();
    let rel = random_poset(points, rng);
    downset_lattice(&names, &rel).expect("down-sets of a poset form a lattice")
}

/// Random Aumann model with `1..=max_states` states and `1..=max_agents` agents.
pub fn random_aumann_model<R: Rng + ?Sized>(
    max_states: usize,
    max_agents: usize,
    rng: &mut R,
) -> AumannModel {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let agents = rng.gen_range(1..=max_agents);
    let partitions = (1..=agents)
        .map(|a| {
            let blocks = rng.gen_range(1..=n);
            let mut cells: Vec<Vec<String>> = vec![Vec::new(); blocks];
            // Seed every block with one state so none is empty.
            let mut order = states.clone();
            order.shuffle(rng);
            for (i, s) in order.into_iter().enumerate() {
                let b = if i < blocks {
                    i
                } else {
                    rng.gen_range(0..blocks)
                };
                cells[b].push(s);
            }
            (a.to_string(), cells)
        })
        .collect();
    AumannModel::new(states, partitions).expect("generated partitions are valid")
}
