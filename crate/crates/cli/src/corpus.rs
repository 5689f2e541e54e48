//! Seeded random machines for soundness sweeps.

use cwb_core::tm::{MachineBuilder, Move};
use cwb_core::MachineSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SYMBOL_NAMES: [&str; 4] = ["_", "1", "a", "b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub seed: u64,
    pub count: usize,
    /// Non-halting states per machine, drawn from `1..=max_states`.
    pub max_states: usize,
    /// Symbols including the blank, drawn from `2..=max_symbols`.
    pub max_symbols: usize,
}

impl CorpusParams {
    pub fn new(seed: u64, count: usize) -> Self {
        CorpusParams { seed, count, max_states: 4, max_symbols: 3 }
    }
}

/// A machine with states `q0..q{n-1}` plus halting `h`. Each (state, symbol)
/// pair gets a transition with probability 7/8; targets include `h`.
pub fn random_machine(rng: &mut impl Rng, name: &str, states: usize, symbols: usize) -> MachineSpec {
    let mut b = MachineBuilder::new(name, SYMBOL_NAMES[0]);
    for s in &SYMBOL_NAMES[1..symbols] {
        b.symbol(s).expect("valid symbol");
    }
    let state_names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    for q in &state_names {
        b.state(q).expect("valid state");
    }
    b.start("q0").expect("valid state").halt("h").expect("valid state");
    let moves = [Move::Left, Move::Right, Move::Stay];
    for q in &state_names {
        for read in &SYMBOL_NAMES[..symbols] {
            if rng.random_ratio(1, 8) {
                continue;
            }
            let write = SYMBOL_NAMES[rng.random_range(0..symbols)];
            let mv = moves[rng.random_range(0..3)];
            let next = rng.random_range(0..=states);
            let next = state_names.get(next).map_or("h", String::as_str);
            b.rule(q, read, write, mv, next).expect("fresh key");
        }
    }
    b.build().expect("well-formed machine")
}

pub fn corpus(p: CorpusParams) -> Vec<MachineSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    (0..p.count)
        .map(|i| {
            let states = rng.random_range(1..=p.max_states.max(1));
            let symbols = rng.random_range(2..=p.max_symbols.clamp(2, SYMBOL_NAMES.len()));
            random_machine(&mut rng, &format!("R{i:04}"), states, symbols)
        })
        .collect()
}
