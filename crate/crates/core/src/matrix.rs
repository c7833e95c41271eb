//! Heisenberg matrices in compact `(a, b, c)` form.
//!
//! A matrix of `H(n, Q(i))` is the identity except for the first row tail
//! `a`, the last column head `b` (both of length `n − 2`) and the top-right
//! corner `c`. Products follow
//!
//! ```text
//! (a, b, c)·(a', b', c') = (a + a', b + b', c + c' + aᵀb')
//! ```
//!
//! so the dense `n × n` form is only needed for validation.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{ratio, Gaussian, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("first-row part has length {a_len} but last-column part has length {b_len}")]
    VectorLengthMismatch { a_len: usize, b_len: usize },
    #[error("entry ({row}, {col}) is {found}, expected {expected} for a Heisenberg matrix")]
    NotHeisenberg {
        row: usize,
        col: usize,
        found: String,
        expected: &'static str,
    },
    #[error("dense matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("the product of the given matrices is not in Omega")]
    ProductNotOmega,
    #[error("empty matrix sequence")]
    EmptySequence,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("inversion table: {0}")]
    BadInversionTable(String),
    #[error("Parikh vector has length {got}, expected {expected}")]
    ParikhLength { got: usize, expected: usize },
    #[error("a generator set needs at least one matrix")]
    EmptyGeneratorSet,
    #[error("generator {index} has dimension {found}, expected {expected}")]
    GeneratorDimension {
        index: usize,
        found: usize,
        expected: usize,
    },
}

fn dot(u: &[Gaussian], v: &[Gaussian]) -> Gaussian {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// A Heisenberg matrix stored as `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergMatrix {
    a: Vec<Gaussian>,
    b: Vec<Gaussian>,
    c: Gaussian,
}

impl HeisenbergMatrix {
    pub fn new(a: Vec<Gaussian>, b: Vec<Gaussian>, c: Gaussian) -> Result<Self, MatrixError> {
        if a.len() != b.len() {
            return Err(MatrixError::VectorLengthMismatch {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        Ok(HeisenbergMatrix { a, b, c })
    }

    /// The 3×3 matrix with scalar `a`, `b`, `c`.
    pub fn h3(a: Gaussian, b: Gaussian, c: Gaussian) -> Self {
        HeisenbergMatrix {
            a: vec![a],
            b: vec![b],
            c,
        }
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        if n < 2 {
            return Err(MatrixError::DimensionTooSmall(n));
        }
        Ok(HeisenbergMatrix {
            a: vec![Gaussian::zero(); n - 2],
            b: vec![Gaussian::zero(); n - 2],
            c: Gaussian::zero(),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len() + 2
    }

    pub fn a(&self) -> &[Gaussian] {
        &self.a
    }

    pub fn b(&self) -> &[Gaussian] {
        &self.b
    }

    pub fn c(&self) -> &Gaussian {
        &self.c
    }

    pub fn is_omega(&self) -> bool {
        self.a.iter().chain(&self.b).all(Gaussian::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_omega() && self.c.is_zero()
    }

    fn check_dim(&self, other: &Self) -> Result<(), MatrixError> {
        if self.dim() != other.dim() {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect();
        let mut c = &self.c + &other.c;
        c += &dot(&self.a, &other.b);
        Ok(HeisenbergMatrix { a, b, c })
    }

    /// The scalar `[M, N] = a_Mᵀb_N − a_Nᵀb_M`, i.e. the top-right entry of
    /// `MN − NM` (all other entries of that difference vanish).
    pub fn commutator(&self, other: &Self) -> Result<Gaussian, MatrixError> {
        self.check_dim(other)?;
        Ok(&dot(&self.a, &other.b) - &dot(&other.a, &self.b))
    }

    /// `(−a, −b, −c + aᵀb)`.
    pub fn inverse(&self) -> Self {
        HeisenbergMatrix {
            a: self.a.iter().map(|x| -x).collect(),
            b: self.b.iter().map(|x| -x).collect(),
            c: &dot(&self.a, &self.b) - &self.c,
        }
    }

    /// `M^ℓ = (ℓa, ℓb, ℓc + ℓ(ℓ−1)/2·aᵀb)`.
    pub fn pow(&self, exp: u64) -> Self {
        let l = Rational::from_integer(BigInt::from(exp));
        let tri = Rational::from_integer(BigInt::from(exp) * BigInt::from(exp.saturating_sub(1)))
            * ratio(1, 2);
        HeisenbergMatrix {
            a: self.a.iter().map(|x| x.scale(&l)).collect(),
            b: self.b.iter().map(|x| x.scale(&l)).collect(),
            c: &self.c.scale(&l) + &dot(&self.a, &self.b).scale(&tri),
        }
    }

    /// `c − ½·aᵀb`, this matrix's contribution to a shuffle invariant.
    pub fn invariant_term(&self) -> Gaussian {
        &self.c - &dot(&self.a, &self.b).scale(&ratio(1, 2))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut d = DenseMatrix::identity(n);
        for k in 0..n - 2 {
            d.entries[0][k + 1] = self.a[k].clone();
            d.entries[k + 1][n - 1] = self.b[k].clone();
        }
        if n >= 2 {
            d.entries[0][n - 1] = self.c.clone();
        }
        d
    }

    /// Reads `(a, b, c)` off a dense matrix, rejecting anything outside the
    /// Heisenberg shape. Entry positions in errors are 1-based.
    pub fn from_dense(d: &DenseMatrix) -> Result<Self, MatrixError> {
        let n = d.n;
        if n < 2 {
            return Err(MatrixError::DimensionTooSmall(n));
        }
        for (r, row) in d.entries.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                let free = (r == 0 && col > 0) || (col == n - 1 && r < n - 1);
                if free {
                    continue;
                }
                let (ok, expected) = if r == col {
                    (*z == Gaussian::one(), "1")
                } else {
                    (z.is_zero(), "0")
                };
                if !ok {
                    return Err(MatrixError::NotHeisenberg {
                        row: r + 1,
                        col: col + 1,
                        found: z.to_string(),
                        expected,
                    });
                }
            }
        }
        let a = (1..n - 1).map(|k| d.entries[0][k].clone()).collect();
        let b = (1..n - 1).map(|k| d.entries[k][n - 1].clone()).collect();
        Ok(HeisenbergMatrix {
            a,
            b,
            c: d.entries[0][n - 1].clone(),
        })
    }
}

impl fmt::Display for HeisenbergMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Gaussian]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "([{}], [{}], {})", list(&self.a), list(&self.b), self.c)
    }
}

/// Plain `n × n` matrix over Q(i), used to cross-check the compact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<Vec<Gaussian>>,
}

impl DenseMatrix {
    pub fn new(entries: Vec<Vec<Gaussian>>) -> Result<Self, MatrixError> {
        let n = entries.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare {
                    row: row + 1,
                    len: r.len(),
                    n,
                });
            }
        }
        Ok(DenseMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            Gaussian::one()
                        } else {
                            Gaussian::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        DenseMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Gaussian {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Gaussian>] {
        &self.entries
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "dense dimension mismatch");
        let n = self.n;
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        (0..n)
                            .map(|k| &self.entries[r][k] * &other.entries[k][c])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        DenseMatrix { n, entries }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "dense dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x - y).collect())
            .collect();
        DenseMatrix { n: self.n, entries }
    }
}

/// The finite generator list `G_1, …, G_t` of a semigroup, all of one
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    gens: Vec<HeisenbergMatrix>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<HeisenbergMatrix>) -> Result<Self, MatrixError> {
        let first = gens.first().ok_or(MatrixError::EmptyGeneratorSet)?;
        let n = first.dim();
        for (index, g) in gens.iter().enumerate() {
            if g.dim() != n {
                return Err(MatrixError::GeneratorDimension {
                    index: index + 1,
                    found: g.dim(),
                    expected: n,
                });
            }
        }
        Ok(GeneratorSet { n, gens })
    }

    /// Restriction to `indices` (0-based, kept in the given order). May be
    /// empty, unlike sets built with [`GeneratorSet::new`].
    pub fn subset(&self, indices: &[usize]) -> GeneratorSet {
        GeneratorSet {
            n: self.n,
            gens: indices.iter().map(|&i| self.gens[i].clone()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, i: usize) -> &HeisenbergMatrix {
        &self.gens[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HeisenbergMatrix> {
        self.gens.iter()
    }

    pub fn as_slice(&self) -> &[HeisenbergMatrix] {
        &self.gens
    }

    /// Product of the generators named by `word` (0-based indices).
    pub fn product(&self, word: &[usize]) -> HeisenbergMatrix {
        let mut acc = HeisenbergMatrix::identity(self.n).expect("n >= 2");
        for &w in word {
            acc = acc.multiply(&self.gens[w]).expect("common dimension");
        }
        acc
    }

    /// `Λ_x = Σ x_i (c_i − ½ a_iᵀ b_i)`.
    pub fn shuffle_invariant(&self, parikh: &[BigInt]) -> Result<Gaussian, MatrixError> {
        if parikh.len() != self.len() {
            return Err(MatrixError::ParikhLength {
                got: parikh.len(),
                expected: self.len(),
            });
        }
        Ok(self
            .gens
            .iter()
            .zip(parikh)
            .map(|(g, m)| g.invariant_term().scale(&Rational::from_integer(m.clone())))
            .sum())
    }
}

fn product_of(ms: &[HeisenbergMatrix]) -> Result<HeisenbergMatrix, MatrixError> {
    let (first, rest) = ms.split_first().ok_or(MatrixError::EmptySequence)?;
    rest.iter()
        .try_fold(first.clone(), |acc, m| acc.multiply(m))
}

/// Closed form for the corner of `M_1^ℓ M_2^ℓ ⋯ M_k^ℓ` when `M_1 ⋯ M_k ∈ Ω`:
///
/// ```text
/// ℓ·Σ_i (c_i − ½ a_iᵀb_i) + ℓ²/2 · Σ_{1≤i<j≤k−1} [M_i, M_j]
/// ```
pub fn power_product_top_right(
    ms: &[HeisenbergMatrix],
    power: u64,
) -> Result<Gaussian, MatrixError> {
    if power == 0 {
        return Err(MatrixError::ZeroPower);
    }
    if !product_of(ms)?.is_omega() {
        return Err(MatrixError::ProductNotOmega);
    }
    let k = ms.len();
    let l = Rational::from_integer(BigInt::from(power));
    let linear: Gaussian = ms.iter().map(HeisenbergMatrix::invariant_term).sum();
    let mut quadratic = Gaussian::zero();
    for i in 0..k.saturating_sub(1) {
        for j in i + 1..k - 1 {
            quadratic += &ms[i].commutator(&ms[j])?;
        }
    }
    let half_l2 = &l * &l * ratio(1, 2);
    Ok(&linear.scale(&l) + &quadratic.scale(&half_l2))
}

/// Inversion counts of a shuffle of `M_1^ℓ ⋯ M_k^ℓ`: `get(j, i)` is how many
/// times a copy of `M_j` stands before a copy of `M_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionTable {
    k: usize,
    counts: Vec<u64>,
}

impl InversionTable {
    /// The canonical order, with every `M_i` block before every `M_j` for `i < j`.
    pub fn canonical(k: usize, power: u64) -> Self {
        let mut counts = vec![0; k * k];
        for i in 0..k {
            for j in i + 1..k {
                counts[i * k + j] = power * power;
            }
        }
        InversionTable { k, counts }
    }

    /// Table of a shuffled label sequence in which each of the labels
    /// `0..k` occurs exactly `power` times.
    pub fn from_labels(labels: &[usize], k: usize, power: u64) -> Result<Self, MatrixError> {
        let mut seen = vec![0u64; k];
        let mut counts = vec![0u64; k * k];
        for &lab in labels {
            if lab >= k {
                return Err(MatrixError::BadInversionTable(format!(
                    "label {lab} out of range for k = {k}"
                )));
            }
            for (earlier, &cnt) in seen.iter().enumerate() {
                if earlier != lab {
                    counts[earlier * k + lab] += cnt;
                }
            }
            seen[lab] += 1;
        }
        if seen.iter().any(|&c| c != power) {
            return Err(MatrixError::BadInversionTable(
                "every label must occur exactly `power` times".into(),
            ));
        }
        Ok(InversionTable { k, counts })
    }

    /// Table of the shuffle that places canonical factor `perm[p]` at
    /// position `p`, where canonical factor `q` is a copy of `M_{q / ℓ}`.
    pub fn from_permutation(perm: &[usize], k: usize, power: u64) -> Result<Self, MatrixError> {
        let labels = shuffle_labels(perm, power)?;
        Self::from_labels(&labels, k, power)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of times `M_j` appears before `M_i`.
    pub fn get(&self, j: usize, i: usize) -> u64 {
        self.counts[j * self.k + i]
    }
}

/// Labels of the shuffled factor sequence for a permutation of the `kℓ`
/// canonical factors.
pub fn shuffle_labels(perm: &[usize], power: u64) -> Result<Vec<usize>, MatrixError> {
    if power == 0 {
        return Err(MatrixError::ZeroPower);
    }
    let mut hit = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || hit[p] {
            return Err(MatrixError::BadInversionTable(
                "not a permutation".to_string(),
            ));
        }
        hit[p] = true;
    }
    Ok(perm.iter().map(|&p| p / power as usize).collect())
}

/// Corner of a shuffle of `M_1^ℓ ⋯ M_k^ℓ` given its inversion table:
/// the [`power_product_top_right`] value minus `Σ_{i<j} z_{ji} [M_i, M_j]`.
pub fn shuffled_top_right(
    ms: &[HeisenbergMatrix],
    power: u64,
    inversions: &InversionTable,
) -> Result<Gaussian, MatrixError> {
    let k = ms.len();
    if inversions.k != k {
        return Err(MatrixError::BadInversionTable(format!(
            "table is for {} matrices, got {k}",
            inversions.k
        )));
    }
    let l2 = power * power;
    for i in 0..k {
        if inversions.get(i, i) != 0 {
            return Err(MatrixError::BadInversionTable(
                "diagonal must be zero".into(),
            ));
        }
        for j in i + 1..k {
            let (zij, zji) = (inversions.get(i, j), inversions.get(j, i));
            if zji > l2 || zij + zji != l2 {
                return Err(MatrixError::BadInversionTable(format!(
                    "counts for pair ({}, {}) must lie in [0, ℓ²] and sum to ℓ²",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut value = power_product_top_right(ms, power)?;
    for i in 0..k {
        for j in i + 1..k {
            let z = inversions.get(j, i);
            if z != 0 {
                let zq = Rational::from_integer(BigInt::from(z));
                value -= &ms[i].commutator(&ms[j])?.scale(&zq);
            }
        }
    }
    Ok(value)
}

/// Whether every pair in `ms` commutes.
pub fn pairwise_commuting(ms: &[HeisenbergMatrix]) -> bool {
    ms.iter().enumerate().all(|(i, m)| {
        ms[i + 1..]
            .iter()
            .all(|other| m.commutator(other).map(|z| z.is_zero()).unwrap_or(false))
    })
}

/// Exponent vector helper: `BigInt` Parikh vector from small counts.
pub fn parikh(counts: &[u64]) -> Vec<BigInt> {
    counts.iter().map(|&c| BigInt::from(c)).collect()
}
