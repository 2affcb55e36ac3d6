use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Kind, Ordinal};

/// Chooses the index `n` used to step from a limit `λ` to `λ[n]`.
pub trait Picker {
    fn pick(&mut self, limit: &Ordinal) -> u64;
}

impl<F: FnMut(&Ordinal) -> u64> Picker for F {
    fn pick(&mut self, limit: &Ordinal) -> u64 {
        self(limit)
    }
}

/// Seeded picker drawing `n` uniformly from `0..=max`.
#[derive(Debug, Clone)]
pub struct UniformPicker {
    rng: ChaCha8Rng,
    max: u64,
}

impl UniformPicker {
    pub fn new(seed: u64, max: u64) -> Self {
        UniformPicker {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max,
        }
    }
}

impl Picker for UniformPicker {
    fn pick(&mut self, _limit: &Ordinal) -> u64 {
        self.rng.gen_range(0..=self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("descent chain longer than {max_len} elements")]
    MaxLenExceeded { max_len: usize },
}

/// One step down: successor to predecessor, limit `λ` to `λ[picker(λ)]`.
/// `None` at zero.
pub fn descent_step(a: &Ordinal, picker: &mut impl Picker) -> Option<Ordinal> {
    match a.classify() {
        Kind::Zero => None,
        Kind::Successor(pred) => Some(pred),
        Kind::Limit => {
            let n = picker.pick(a);
            Some(
                a.fundamental_sequence(n)
                    .expect("limit ordinals have fundamental sequences"),
            )
        }
    }
}

/// The full strictly decreasing chain from `start` down to 0, inclusive.
pub fn descent_walk(
    start: &Ordinal,
    picker: &mut impl Picker,
    max_len: usize,
) -> Result<Vec<Ordinal>, DescentError> {
    let mut chain = vec![start.clone()];
    loop {
        let last = chain.last().expect("nonempty");
        let Some(next) = descent_step(last, picker) else {
            return Ok(chain);
        };
        debug_assert!(next < *last);
        if chain.len() == max_len {
            return Err(DescentError::MaxLenExceeded { max_len });
        }
        chain.push(next);
    }
}
