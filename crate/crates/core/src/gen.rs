//! Seeded random formulas for sweeps, property tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

/// Deterministic generator used across the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub atoms: Vec<String>,
    pub max_depth: usize,
    pub delta: bool,
    pub constants: bool,
}

impl FormulaGen {
    pub fn new(atoms: &[&str], max_depth: usize, delta: bool) -> Self {
        FormulaGen {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            max_depth,
            delta,
            constants: true,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.sample_depth(rng, self.max_depth)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        if self.constants && rng.gen_ratio(1, 8) {
            if rng.gen_bool(0.5) {
                Formula::Top
            } else {
                Formula::Bot
            }
        } else {
            Formula::var(self.atoms[rng.gen_range(0..self.atoms.len())].clone())
        }
    }

    fn sample_depth<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 5) {
            return self.leaf(rng);
        }
        let d = depth - 1;
        let choices = if self.delta { 6 } else { 5 };
        match rng.gen_range(0..choices) {
            0 => Formula::and(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            1 => Formula::or(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            2 | 3 => Formula::imp(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            4 => Formula::not(self.sample_depth(rng, d)),
            _ => Formula::delta(self.sample_depth(rng, d)),
        }
    }
}
