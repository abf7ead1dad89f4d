//! Simulated annealing over connected sets of fixed size containing an anchor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::Ambient;

/// Budget and schedule for the annealing search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealSchedule {
    pub steps: usize,
    pub restarts: usize,
    pub initial_temperature: f64,
    pub cooling: f64,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            steps: 4000,
            restarts: 4,
            initial_temperature: 0.5,
            cooling: 0.999,
            seed: 0,
        }
    }
}

/// Lowest energy found among connected `size`-sets containing `anchor`, or
/// `None` if the anchor's component has fewer than `size` vertices.
pub(crate) fn anneal<E>(
    ambient: &Ambient<'_>,
    anchor: usize,
    size: usize,
    schedule: &AnnealSchedule,
    energy: E,
) -> Option<(f64, Vec<usize>)>
where
    E: Fn(&[usize], &[bool]) -> f64 + Sync,
{
    let start = breadth_first_prefix(ambient, anchor, size)?;
    (0..schedule.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
            rng.set_stream(r as u64);
            run(ambient, anchor, start.clone(), schedule, &energy, &mut rng)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
}

fn breadth_first_prefix(ambient: &Ambient<'_>, anchor: usize, size: usize) -> Option<Vec<usize>> {
    let mut inside = vec![false; ambient.window().num_vertices()];
    let mut order = vec![anchor];
    inside[anchor] = true;
    let mut head = 0;
    while order.len() < size && head < order.len() {
        let u = order[head];
        head += 1;
        for w in ambient.neighbors(u) {
            if !inside[w] && order.len() < size {
                inside[w] = true;
                order.push(w);
            }
        }
    }
    (order.len() == size).then_some(order)
}

fn run<E>(
    ambient: &Ambient<'_>,
    anchor: usize,
    mut set: Vec<usize>,
    schedule: &AnnealSchedule,
    energy: &E,
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<usize>)
where
    E: Fn(&[usize], &[bool]) -> f64,
{
    let n = ambient.window().num_vertices();
    let mut inside = vec![false; n];
    for &u in &set {
        inside[u] = true;
    }
    let mut current = energy(&set, &inside);
    let mut best = (current, set.clone());
    let mut temperature = schedule.initial_temperature;
    let mut frontier = Vec::new();
    for _ in 0..schedule.steps {
        temperature *= schedule.cooling;
        if set.len() < 2 {
            break;
        }
        frontier.clear();
        for &u in &set {
            for w in ambient.neighbors(u) {
                if !inside[w] {
                    frontier.push(w);
                }
            }
        }
        frontier.sort_unstable();
        frontier.dedup();
        if frontier.is_empty() {
            break;
        }
        let add = frontier[rng.gen_range(0..frontier.len())];
        let slot = rng.gen_range(1..set.len());
        let remove = set[slot];
        debug_assert_ne!(remove, anchor);
        set[slot] = add;
        inside[remove] = false;
        inside[add] = true;
        if !connected(ambient, &set, &inside) {
            set[slot] = remove;
            inside[add] = false;
            inside[remove] = true;
            continue;
        }
        let proposed = energy(&set, &inside);
        let delta = proposed - current;
        let accept =
            delta <= 0.0 || (temperature > 0.0 && rng.gen::<f64>() < (-delta / temperature).exp());
        if accept {
            current = proposed;
            if current < best.0 {
                best = (current, set.clone());
            }
        } else {
            set[slot] = remove;
            inside[add] = false;
            inside[remove] = true;
        }
    }
    best.1.sort_unstable();
    best
}

fn connected(ambient: &Ambient<'_>, set: &[usize], inside: &[bool]) -> bool {
    let mut reached = vec![set[0]];
    let mut marked = std::collections::HashSet::with_capacity(set.len());
    marked.insert(set[0]);
    let mut head = 0;
    while head < reached.len() {
        let u = reached[head];
        head += 1;
        for w in ambient.neighbors(u) {
            if inside[w] && marked.insert(w) {
                reached.push(w);
            }
        }
    }
    reached.len() == set.len()
}
