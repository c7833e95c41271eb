//! Test-side oracles. Dense products here use `num_complex` over big
//! rationals and share no arithmetic with the library.

#![allow(dead_code)]

use heisenberg_core::arith::{Gaussian, Rational};
use heisenberg_core::generate::{generate, Family, GenParams};
use heisenberg_core::linsolve::{LinSystem, Relation};
use heisenberg_core::matrix::{GeneratorSet, HeisenbergMatrix};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Cx = Complex<Rational>;
pub type Dense = Vec<Vec<Cx>>;

pub fn cx(z: &Gaussian) -> Cx {
    Complex::new(z.re.clone(), z.im.clone())
}

pub fn gaussian(z: &Cx) -> Gaussian {
    Gaussian::new(z.re.clone(), z.im.clone())
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Cx::one() } else { Cx::zero() })
                .collect()
        })
        .collect()
}

/// Places `a` in the first row, `b` in the last column and `c` in the corner.
pub fn dense(m: &HeisenbergMatrix) -> Dense {
    let n = m.dim();
    let mut d = identity(n);
    for k in 0..n - 2 {
        d[0][k + 1] = cx(&m.a()[k]);
        d[k + 1][n - 1] = cx(&m.b()[k]);
    }
    d[0][n - 1] = cx(m.c());
    d
}

pub fn mul(x: &Dense, y: &Dense) -> Dense {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Cx::zero();
                    for (k, xik) in x[i].iter().enumerate() {
                        if !xik.is_zero() && !y[k][j].is_zero() {
                            acc += xik.clone() * y[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn product<'a>(n: usize, ms: impl IntoIterator<Item = &'a HeisenbergMatrix>) -> Dense {
    ms.into_iter()
        .fold(identity(n), |acc, m| mul(&acc, &dense(m)))
}

pub fn corner(d: &Dense) -> Gaussian {
    gaussian(&d[0][d.len() - 1])
}

/// Identity apart from the corner entry.
pub fn is_omega(d: &Dense) -> bool {
    let n = d.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            (i == 0 && j == n - 1) || d[i][j] == if i == j { Cx::one() } else { Cx::zero() }
        })
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Gaussian rational with numerators in `[-num, num]` and
/// denominators in `1..=den`.
pub fn random_gaussian(rng: &mut impl Rng, num: i64, den: i64) -> Gaussian {
    let mut part = || {
        Rational::new(
            rng.gen_range(-num..=num).into(),
            rng.gen_range(1..=den).into(),
        )
    };
    let re = part();
    Gaussian::new(re, part())
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> HeisenbergMatrix {
    let a = (0..n - 2).map(|_| random_gaussian(rng, 6, 3)).collect();
    let b = (0..n - 2).map(|_| random_gaussian(rng, 6, 3)).collect();
    HeisenbergMatrix::new(a, b, random_gaussian(rng, 6, 3)).unwrap()
}

pub fn random_omega(rng: &mut impl Rng, n: usize) -> HeisenbergMatrix {
    HeisenbergMatrix::new(
        vec![Gaussian::zero(); n - 2],
        vec![Gaussian::zero(); n - 2],
        random_gaussian(rng, 6, 3),
    )
    .unwrap()
}

/// `k` random matrices whose product lies in Ω: the last one cancels the
/// `a` and `b` sums of the others.
pub fn random_omega_word(rng: &mut impl Rng, n: usize, k: usize) -> Vec<HeisenbergMatrix> {
    let mut ms: Vec<HeisenbergMatrix> = (0..k - 1).map(|_| random_matrix(rng, n)).collect();
    let mut a = vec![Gaussian::zero(); n - 2];
    let mut b = vec![Gaussian::zero(); n - 2];
    for m in &ms {
        for p in 0..n - 2 {
            a[p] -= &m.a()[p];
            b[p] -= &m.b()[p];
        }
    }
    ms.push(HeisenbergMatrix::new(a, b, random_gaussian(rng, 6, 3)).unwrap());
    ms
}

pub fn gaussian_strategy() -> impl Strategy<Value = Gaussian> {
    (-12i64..=12, 1i64..=6, -12i64..=12, 1i64..=6).prop_map(|(a, b, c, d)| {
        Gaussian::new(
            Rational::new(a.into(), b.into()),
            Rational::new(c.into(), d.into()),
        )
    })
}

pub fn matrix_strategy(n: usize) -> impl Strategy<Value = HeisenbergMatrix> {
    (
        prop::collection::vec(gaussian_strategy(), n - 2),
        prop::collection::vec(gaussian_strategy(), n - 2),
        gaussian_strategy(),
    )
        .prop_map(|(a, b, c)| HeisenbergMatrix::new(a, b, c).unwrap())
}

/// A small system with integer data, kept alongside its library form so the
/// lattice search can run on machine integers.
#[derive(Clone, Debug)]
pub struct IntSystem {
    pub t: usize,
    pub rows: Vec<(Vec<i64>, Relation, i64)>,
}

impl IntSystem {
    pub fn to_lin(&self) -> LinSystem {
        let mut s = LinSystem::new(self.t);
        for (c, rel, b) in &self.rows {
            s.push(
                c.iter()
                    .map(|&v| Rational::from_integer(v.into()))
                    .collect(),
                *rel,
                Rational::from_integer((*b).into()),
            )
            .unwrap();
        }
        s
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|(c, rel, b)| {
            let lhs: i64 = c.iter().zip(x).map(|(a, v)| a * v).sum();
            match rel {
                Relation::Eq => lhs == *b,
                Relation::Ge => lhs >= *b,
                Relation::Gt => lhs > *b,
            }
        })
    }

    /// First point of `{0..=bound}^t` satisfying every row.
    pub fn lattice_search(&self, bound: i64) -> Option<Vec<i64>> {
        let mut x = vec![0i64; self.t];
        loop {
            if self.holds(&x) {
                return Some(x);
            }
            let mut k = 0;
            loop {
                if k == self.t {
                    return None;
                }
                x[k] += 1;
                if x[k] <= bound {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
        }
    }
}

/// Random system in the solver's supported shape: `=` and `>` rows with zero
/// right-hand side, `≥` rows with right-hand side in `0..=3`.
pub fn random_int_system(rng: &mut impl Rng) -> IntSystem {
    let t = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let rows = (0..m)
        .map(|_| {
            let coeffs: Vec<i64> = (0..t).map(|_| rng.gen_range(-5..=5)).collect();
            match rng.gen_range(0..4) {
                0 | 1 => (coeffs, Relation::Eq, 0),
                2 => (coeffs, Relation::Ge, rng.gen_range(0..=3)),
                _ => (coeffs, Relation::Gt, 0),
            }
        })
        .collect();
    IntSystem { t, rows }
}

pub fn to_i64(x: &[BigInt]) -> Vec<i64> {
    x.iter()
        .map(|v| i64::try_from(v).expect("witness fits in i64"))
        .collect()
}

pub fn h3(a: &str, b: &str, c: &str) -> HeisenbergMatrix {
    let p = |s: &str| s.parse::<Gaussian>().unwrap();
    HeisenbergMatrix::h3(p(a), p(b), p(c))
}

pub fn set(gens: &[(&str, &str, &str)]) -> GeneratorSet {
    GeneratorSet::new(gens.iter().map(|(a, b, c)| h3(a, b, c)).collect()).unwrap()
}

pub struct Curated {
    pub name: &'static str,
    pub gens: GeneratorSet,
    pub identity: bool,
    pub group: Option<bool>,
}

pub fn curated() -> Vec<Curated> {
    vec![
        Curated {
            name: "inverse quadruple in H(3,Z)",
            gens: set(&[
                ("1", "0", "0"),
                ("-1", "0", "0"),
                ("0", "1", "0"),
                ("0", "-1", "0"),
            ]),
            identity: true,
            group: Some(true),
        },
        Curated {
            name: "commuting inverse pair",
            gens: set(&[("1", "0", "1/2"), ("-1", "0", "-1/2")]),
            identity: true,
            group: Some(true),
        },
        Curated {
            name: "commuting pair with invariant 2i",
            gens: set(&[("1", "0", "i"), ("-1", "0", "i")]),
            identity: false,
            group: Some(false),
        },
        Curated {
            name: "single redundant generator",
            gens: set(&[("1", "0", "0")]),
            identity: false,
            group: Some(false),
        },
        Curated {
            name: "identity generator",
            gens: GeneratorSet::new(vec![HeisenbergMatrix::identity(3).unwrap()]).unwrap(),
            identity: true,
            group: Some(true),
        },
        Curated {
            name: "two lines",
            gens: set(&[
                ("1", "0", "0"),
                ("0", "1", "0"),
                ("i", "0", "0"),
                ("0", "-1", "0"),
                ("-1-i", "0", "0"),
            ]),
            identity: true,
            group: Some(true),
        },
        Curated {
            name: "strict half-plane",
            gens: set(&[("1", "0", "i"), ("0", "1", "0"), ("-1", "-1", "0")]),
            identity: false,
            group: Some(false),
        },
        Curated {
            name: "x and y only",
            gens: set(&[("1", "0", "0"), ("0", "1", "0")]),
            identity: false,
            group: Some(false),
        },
        Curated {
            name: "quadruple plus off-line central element",
            gens: set(&[
                ("1", "0", "0"),
                ("-1", "0", "0"),
                ("0", "1", "0"),
                ("0", "-1", "0"),
                ("0", "0", "i"),
            ]),
            identity: true,
            group: Some(false),
        },
    ]
}

/// Seeded random instances with `n ∈ {3, 4}` and `t ≤ 5`, cycling through
/// every generator family.
pub fn random_suite(count: usize) -> Vec<(String, GeneratorSet)> {
    let mut r = rng(0x5eed);
    (0..count)
        .map(|i| {
            let family = Family::ALL[i % Family::ALL.len()];
            let n = 3 + (i / Family::ALL.len()) % 2;
            let min_t = match family {
                Family::ForcedTwoLines => 5,
                Family::ForcedCommonLine => 4,
                _ => 1,
            };
            let t = r.gen_range(min_t..=5);
            let seed = r.gen();
            let inst = generate(&GenParams::new(family, seed, n, t)).unwrap();
            (format!("{family} n={n} t={t} seed={seed}"), inst.generators)
        })
        .collect()
}
