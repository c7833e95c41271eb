//! Seeded random instance families.
//!
//! Every family is deterministic for a fixed seed. The forced families plant
//! structure that guarantees the decider takes the named branch.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::arith::{ratio, Gaussian};
use crate::instance::Instance;
use crate::matrix::{GeneratorSet, HeisenbergMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Random,
    ForcedTwoLines,
    ForcedCommonLine,
    ForcedCommuting,
    ForcedRedundant,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Random,
        Family::ForcedTwoLines,
        Family::ForcedCommonLine,
        Family::ForcedCommuting,
        Family::ForcedRedundant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::ForcedTwoLines => "forced-two-lines",
            Family::ForcedCommonLine => "forced-common-line",
            Family::ForcedCommuting => "forced-commuting",
            Family::ForcedRedundant => "forced-redundant",
        }
    }

    fn min_dim(self) -> usize {
        match self {
            Family::Random | Family::ForcedCommuting => 2,
            _ => 3,
        }
    }

    fn min_generators(self) -> usize {
        match self {
            Family::ForcedTwoLines => 5,
            Family::ForcedCommonLine => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family `{0}` (expected one of random, forced-two-lines, forced-common-line, forced-commuting, forced-redundant)")]
    UnknownFamily(String),
    #[error("family {family} needs n >= {min}")]
    DimensionTooSmall { family: Family, min: usize },
    #[error("family {family} needs t >= {min}")]
    TooFewGenerators { family: Family, min: usize },
    #[error("max entry must be at least 1")]
    ZeroRange,
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub family: Family,
    pub seed: u64,
    pub n: usize,
    pub t: usize,
    /// Real and imaginary parts of `a`/`b` entries lie in `[-max_entry, max_entry]`.
    pub max_entry: i64,
}

impl GenParams {
    pub fn new(family: Family, seed: u64, n: usize, t: usize) -> Self {
        GenParams {
            family,
            seed,
            n,
            t,
            max_entry: 1,
        }
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    m: i64,
    len: usize,
}

impl Sampler {
    fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.m..=self.m)
    }

    fn gaussian_int(&mut self) -> Gaussian {
        Gaussian::from_ints(self.int(), self.int())
    }

    fn real_int(&mut self) -> Gaussian {
        Gaussian::from_int(self.int())
    }

    /// Corner entries: halves are allowed so that `c - a·b/2` can vanish.
    fn corner(&mut self) -> Gaussian {
        let re = self.rng.gen_range(-2 * self.m..=2 * self.m);
        let im = self.rng.gen_range(-2 * self.m..=2 * self.m);
        Gaussian::new(ratio(re, 2), ratio(im, 2))
    }

    fn vector(&mut self, f: fn(&mut Self) -> Gaussian) -> Vec<Gaussian> {
        (0..self.len).map(|_| f(self)).collect()
    }

    fn nonzero_gaussian_int(&mut self) -> Gaussian {
        loop {
            let z = self.gaussian_int();
            if !z.is_zero() {
                return z;
            }
        }
    }
}

/// Vector with `z` in the first coordinate and zeros elsewhere.
fn first_coord(z: Gaussian, len: usize) -> Vec<Gaussian> {
    let mut v = vec![Gaussian::zero(); len];
    v[0] = z;
    v
}

fn psi(a: Vec<Gaussian>, b: Vec<Gaussian>, c: Gaussian) -> HeisenbergMatrix {
    HeisenbergMatrix::new(a, b, c).expect("equal lengths by construction")
}

pub fn generate(p: &GenParams) -> Result<Instance, GenError> {
    if p.n < p.family.min_dim() {
        return Err(GenError::DimensionTooSmall {
            family: p.family,
            min: p.family.min_dim(),
        });
    }
    if p.t < p.family.min_generators() {
        return Err(GenError::TooFewGenerators {
            family: p.family,
            min: p.family.min_generators(),
        });
    }
    if p.max_entry < 1 {
        return Err(GenError::ZeroRange);
    }
    let mut s = Sampler {
        rng: ChaCha8Rng::seed_from_u64(p.seed),
        m: p.max_entry,
        len: p.n - 2,
    };
    let len = s.len;
    let mut gens = match p.family {
        Family::Random => (0..p.t)
            .map(|_| {
                let a = s.vector(Sampler::gaussian_int);
                let b = s.vector(Sampler::gaussian_int);
                psi(a, b, s.corner())
            })
            .collect::<Vec<_>>(),
        Family::ForcedTwoLines => {
            // Commutators 1 and i; all five are needed for a zero a/b sum.
            let planted = [
                (Gaussian::one(), Gaussian::zero()),
                (Gaussian::zero(), Gaussian::one()),
                (Gaussian::i(), Gaussian::zero()),
                (Gaussian::zero(), Gaussian::from_int(-1)),
                (Gaussian::from_ints(-1, -1), Gaussian::zero()),
            ];
            let mut gens: Vec<HeisenbergMatrix> = planted
                .into_iter()
                .map(|(a, b)| psi(first_coord(a, len), first_coord(b, len), s.corner()))
                .collect();
            while gens.len() < p.t {
                let a = s.vector(Sampler::gaussian_int);
                let b = s.vector(Sampler::gaussian_int);
                gens.push(psi(a, b, s.corner()));
            }
            gens
        }
        Family::ForcedCommonLine => {
            // Real a and b make every commutator real; rotating every a by
            // one direction moves the common line off the real axis. The
            // planted inverse quadruple survives the redundancy pass.
            let dir = s.nonzero_gaussian_int();
            let zero = || vec![Gaussian::zero(); len];
            let mut gens = vec![
                psi(first_coord(dir.clone(), len), zero(), s.corner()),
                psi(first_coord(-dir.clone(), len), zero(), s.corner()),
                psi(zero(), first_coord(Gaussian::one(), len), s.corner()),
                psi(zero(), first_coord(Gaussian::from_int(-1), len), s.corner()),
            ];
            while gens.len() < p.t {
                let a: Vec<Gaussian> = s
                    .vector(Sampler::real_int)
                    .into_iter()
                    .map(|x| &x * &dir)
                    .collect();
                let b = s.vector(Sampler::real_int);
                gens.push(psi(a, b, s.corner()));
            }
            gens
        }
        Family::ForcedCommuting => {
            let mut gens = Vec::with_capacity(p.t);
            while gens.len() < p.t {
                let a = s.vector(Sampler::gaussian_int);
                let c = s.corner();
                let partner_c = if s.rng.gen_bool(0.5) {
                    -c.clone()
                } else {
                    s.corner()
                };
                let neg: Vec<Gaussian> = a.iter().map(|z| -z.clone()).collect();
                gens.push(psi(a, vec![Gaussian::zero(); len], c));
                if gens.len() < p.t {
                    gens.push(psi(neg, vec![Gaussian::zero(); len], partner_c));
                }
            }
            gens
        }
        Family::ForcedRedundant => (0..p.t)
            .map(|_| {
                let mut a = s.vector(Sampler::gaussian_int);
                let lead = s.rng.gen_range(1..=s.m);
                a[0] = Gaussian::from_ints(lead, s.int());
                let b = s.vector(Sampler::gaussian_int);
                psi(a, b, s.corner())
            })
            .collect(),
    };
    gens.shuffle(&mut s.rng);
    let generators = GeneratorSet::new(gens).expect("nonempty, common dimension");
    Ok(Instance {
        generators,
        meta: Some(json!({"family": p.family.as_str(), "seed": p.seed})),
    })
}
