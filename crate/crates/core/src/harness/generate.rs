//! Seeded random formulas.
//!
//! The generator is pinned to explicit constants so a seed names the same
//! formula in any implementation:
//!
//! * seeding: one SplitMix64 step of the seed (increment
//!   `0x9E3779B97F4A7C15`, multipliers `0xBF58476D1CE4E5B9` and
//!   `0x94D049BB133111EB`, shifts 30/27/31); a zero result is replaced
//!   by `0x9E3779B97F4A7C15`;
//! * stream: xorshift64* with shifts 12/25/27 and output multiplier
//!   `0x2545F4914F6CDD1D`;
//! * `below(n)`: the high 64 bits of the 128-bit product `next() * n`;
//! * a coin flip is the top bit of `next()`.
//!
//! Each clause draws its width with `below(w2 + w3) < w2 ? 2 : 3`, then its
//! variables as `1 + below(num_vars)` with rejection of repeats, each
//! followed immediately by its polarity coin (set means positive).

use thiserror::Error;

use crate::formula::{Clause, FormulaState, Literal};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;
const XORSHIFT_STAR: u64 = 0x2545_F491_4F6C_DD1D;

/// Salt mixed into the seed for the shuffled decision order of a campaign.
pub const FIXED_ORDER_SALT: u64 = 0xA5A5_A5A5_A5A5_A5A5;

/// xorshift64* seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct XorShiftRng {
    state: u64,
}

impl XorShiftRng {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(GOLDEN_GAMMA);
        z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
        z ^= z >> 31;
        XorShiftRng {
            state: if z == 0 { GOLDEN_GAMMA } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_STAR)
    }

    /// Value in `0..n`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as u64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Fisher–Yates, from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenConfig {
    pub seed: u64,
    pub num_vars: u32,
    pub num_clauses: u32,
    /// Relative weights of width-2 and width-3 clauses.
    pub clause_width_weights: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenConfigError {
    #[error("clause width weights are both zero")]
    ZeroWeights,
    #[error("{num_vars} variables cannot fill a clause of width {width}")]
    TooFewVariables { num_vars: u32, width: u32 },
    #[error("clause count must be positive")]
    NoClauses,
}

impl GenConfig {
    pub fn new(seed: u64, num_vars: u32, num_clauses: u32) -> Self {
        GenConfig {
            seed,
            num_vars,
            num_clauses,
            clause_width_weights: (1, 1),
        }
    }

    pub fn validate(&self) -> Result<(), GenConfigError> {
        let (w2, w3) = self.clause_width_weights;
        if w2 == 0 && w3 == 0 {
            return Err(GenConfigError::ZeroWeights);
        }
        if self.num_clauses == 0 {
            return Err(GenConfigError::NoClauses);
        }
        let widest = if w3 > 0 { 3 } else { 2 };
        if self.num_vars < widest {
            return Err(GenConfigError::TooFewVariables {
                num_vars: self.num_vars,
                width: widest,
            });
        }
        Ok(())
    }
}

/// Deterministic formula for `cfg`, with an empty minterm.
pub fn generate(cfg: &GenConfig) -> Result<FormulaState, GenConfigError> {
    cfg.validate()?;
    let (w2, w3) = cfg.clause_width_weights;
    let mut rng = XorShiftRng::new(cfg.seed);
    let mut clauses = Vec::with_capacity(cfg.num_clauses as usize);
    for _ in 0..cfg.num_clauses {
        let width = if rng.below(u64::from(w2) + u64::from(w3)) < u64::from(w2) {
            2
        } else {
            3
        };
        let mut lits: Vec<Literal> = Vec::with_capacity(width);
        while lits.len() < width {
            let var = 1 + rng.below(u64::from(cfg.num_vars)) as u32;
            if lits.iter().any(|l| l.var() == var) {
                continue;
            }
            let positive = rng.coin();
            lits.push(Literal::new(var, positive).expect("ids start at 1"));
        }
        clauses.push(Clause::new(lits).expect("distinct variables, width 2 or 3"));
    }
    Ok(FormulaState::from_clauses(cfg.num_vars, clauses).expect("ids drawn in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Expected values computed by an independent Python transcription of
    // the constants in the module docs.
    #[test]
    fn stream_is_pinned() {
        assert_eq!(XorShiftRng::new(0).state, 0xE220_A839_7B1D_CDAF);
        let mut rng = XorShiftRng::new(0);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(
            first,
            vec![
                0x7BBC_B40D_5506_82D0,
                0xDE7F_E413_D00C_C9FD,
                0xB3C6_3835_3C66_8C91
            ]
        );
    }

    #[test]
    fn formulas_are_pinned() {
        let f = generate(&GenConfig::new(2024, 5, 3)).unwrap();
        let expected = FormulaState::from_signed(5, &[&[4, -1], &[4, 1, 3], &[-4, 1, -3]]).unwrap();
        assert_eq!(f, expected);
        let g = generate(&GenConfig::new(1, 6, 4)).unwrap();
        let expected = FormulaState::from_signed(6, &[&[-6, 2], &[1, -6], &[1, -3], &[1, 2]]).unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = XorShiftRng::new(99);
        for n in 1..50u64 {
            for _ in 0..20 {
                assert!(rng.below(n) < n);
            }
        }
    }

    #[test]
    fn same_config_same_formula() {
        let cfg = GenConfig::new(7, 6, 9);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        assert_ne!(
            generate(&cfg).unwrap(),
            generate(&GenConfig::new(8, 6, 9)).unwrap()
        );
    }

    #[test]
    fn width_weights_are_honoured() {
        let mut cfg = GenConfig::new(3, 4, 40);
        cfg.clause_width_weights = (0, 1);
        assert!(generate(&cfg).unwrap().clauses().iter().all(|c| c.len() == 3));
        cfg.clause_width_weights = (1, 0);
        assert!(generate(&cfg).unwrap().clauses().iter().all(|c| c.len() == 2));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = GenConfig::new(1, 2, 3);
        assert_eq!(
            cfg.validate(),
            Err(GenConfigError::TooFewVariables {
                num_vars: 2,
                width: 3
            })
        );
        cfg.clause_width_weights = (1, 0);
        assert_eq!(cfg.validate(), Ok(()));
        cfg.clause_width_weights = (0, 0);
        assert_eq!(cfg.validate(), Err(GenConfigError::ZeroWeights));
        assert_eq!(GenConfig::new(1, 5, 0).validate(), Err(GenConfigError::NoClauses));
    }
}
