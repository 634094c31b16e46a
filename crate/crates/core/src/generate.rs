//! Random small systems for property tests and benchmarks.
//!
//! Every generated system passes [`validate`](crate::system::validate).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::system::{Guard, Neuron, Rule, SnpSystem};

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub max_neurons: usize,
    pub max_rules: usize,
    pub max_spikes: u64,
    /// Largest delay on spiking rules; 0 gives delay-free systems.
    pub max_delay: u32,
    pub max_consume: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_neurons: 4,
            max_rules: 6,
            max_spikes: 5,
            max_delay: 0,
            max_consume: 3,
        }
    }
}

fn random_guard<R: Rng>(rng: &mut R, consume: u32) -> Guard {
    let base = consume + rng.gen_range(0..=1);
    let src = match rng.gen_range(0..5) {
        0 | 1 => format!("a^{base}"),
        2 => format!("a^{base}a*"),
        3 => format!("a^{base}(aa)*"),
        _ => format!("a^{base}|a^{}", base + 2),
    };
    Guard::parse(&src).expect("generated guards are well formed")
}

pub fn random_system<R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> SnpSystem {
    let m = rng.gen_range(1..=cfg.max_neurons.max(1));
    let neurons: Vec<Neuron> = (0..m)
        .map(|j| Neuron {
            name: format!("n{}", j + 1),
            spikes: rng.gen_range(0..=cfg.max_spikes),
        })
        .collect();

    let n = rng.gen_range(1..=cfg.max_rules.max(1));
    let mut rules: Vec<Rule> = Vec::new();
    for _ in 0..n {
        let owner = rng.gen_range(0..m);
        let consume = rng.gen_range(1..=cfg.max_consume.max(1));
        if rng.gen_bool(0.2) {
            let clashes = rules
                .iter()
                .any(|r| r.owner == owner && !r.is_forgetting() && r.guard.matches(consume as u64));
            let duplicate = rules.iter().any(|r| r.owner == owner && r.is_forgetting() && r.consume == consume);
            if !clashes && !duplicate {
                rules.push(Rule::forgetting(owner, consume));
            }
            continue;
        }
        let guard = random_guard(rng, consume);
        let forgotten = rules.iter().any(|r| r.owner == owner && r.is_forgetting() && guard.matches(r.consume as u64));
        if forgotten {
            continue;
        }
        let produce = rng.gen_range(1..=consume);
        let delay = if cfg.max_delay > 0 && rng.gen_bool(0.4) { rng.gen_range(1..=cfg.max_delay) } else { 0 };
        rules.push(Rule::spiking(owner, guard, consume, produce, delay));
    }
    // rule order groups rules by neuron
    rules.sort_by_key(|r| r.owner);

    let mut pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    let keep = if pairs.is_empty() { 0 } else { rng.gen_range(0..=pairs.len()) };
    let mut synapses: Vec<(usize, usize)> = pairs.into_iter().take(keep).collect();
    synapses.sort_unstable();

    let output = rng.gen_bool(0.7).then(|| rng.gen_range(0..m));
    SnpSystem::new(neurons, rules, synapses, None, output)
}
