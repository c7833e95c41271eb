//! Decision procedures for the identity and group problems.
//!
//! Both procedures work on Parikh vectors: a word over the generators whose
//! product lies in Ω (zero `a` and `b` parts) is characterized by the
//! homogeneous system [`OmegaSystem`], and its top-right corner equals the
//! shuffle invariant `Λ_x` plus a rational combination of commutators.
//!
//! The identity procedure:
//!
//! 1. Drop redundant generators (those with count zero in every Ω-word).
//!    Nothing left means no Ω-word exists, so the identity is unreachable.
//! 2. Classify the commutators among the remaining generators. If two of them
//!    lie on different lines through the origin, the identity is reachable.
//!    All zero means every generator commutes, and the corner of an Ω-word
//!    is exactly `Λ_x`.
//! 3. Otherwise all commutators lie on one line (the γ-line, with
//!    representative `v`). The identity is reachable iff some Ω-word with
//!    `Λ_x` on that line uses a non-commuting pair, or the generators that
//!    can appear in such words (which then pairwise commute) admit an Ω-word
//!    with `Λ_x = 0`.
//!
//! Every step is a nonnegative integer feasibility query answered by
//! [`crate::linsolve`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{cross, same_line, Gaussian, Rational};
use crate::linsolve::{FeasibilityWitness, LinError, LinSystem, Relation};
use crate::matrix::GeneratorSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeciderError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("line representative must be nonzero")]
    ZeroLine,
    #[error("generator index {index} out of range (t = {t})")]
    IndexOutOfRange { index: usize, t: usize },
    #[error("pair ({i}, {j}) needs two distinct generators")]
    SameIndex { i: usize, j: usize },
    #[error("generators {i} and {j} commute")]
    CommutingPair { i: usize, j: usize },
    #[error("generators {i} and {j} do not commute")]
    NonCommutingPair { i: usize, j: usize },
}

/// The `4(n−2) × t` system `Ax = 0` whose nonnegative integer solutions are
/// exactly the Parikh vectors of Ω-words.
///
/// Row blocks, each of length `n − 2`: `Re(a)`, `Im(a)`, `Re(b)`, `Im(b)`.
/// Column `i` comes from generator `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSystem {
    t: usize,
    rows: Vec<Vec<Rational>>,
}

impl OmegaSystem {
    pub fn build(g: &GeneratorSet) -> Self {
        let m = g.dim() - 2;
        let t = g.len();
        let mut rows = Vec::with_capacity(4 * m);
        type Part = fn(&Gaussian) -> &Rational;
        let blocks: [(bool, Part); 4] = [
            (true, |z| &z.re),
            (true, |z| &z.im),
            (false, |z| &z.re),
            (false, |z| &z.im),
        ];
        for (use_a, part) in blocks {
            for k in 0..m {
                rows.push(
                    g.iter()
                        .map(|h| {
                            let v = if use_a { &h.a()[k] } else { &h.b()[k] };
                            part(v).clone()
                        })
                        .collect(),
                );
            }
        }
        OmegaSystem { t, rows }
    }

    pub fn num_vars(&self) -> usize {
        self.t
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `Ax = 0` as a [`LinSystem`], ready for extra rows.
    pub fn to_system(&self) -> LinSystem {
        let mut s = LinSystem::new(self.t);
        for r in &self.rows {
            s.push(r.clone(), Relation::Eq, Rational::zero())
                .expect("row length matches t");
        }
        s
    }
}

/// `[G_i, G_j]` for every ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTable {
    t: usize,
    entries: Vec<Gaussian>,
}

impl CommutatorTable {
    pub fn build(g: &GeneratorSet) -> Self {
        let t = g.len();
        let mut entries = vec![Gaussian::zero(); t * t];
        for i in 0..t {
            for j in i + 1..t {
                let z = g.get(i).commutator(g.get(j)).expect("common dimension");
                entries[j * t + i] = -&z;
                entries[i * t + j] = z;
            }
        }
        CommutatorTable { t, entries }
    }

    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &Gaussian {
        &self.entries[i * self.t + j]
    }
}

/// How the commutators among a set of generators sit in the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AngleClass {
    AllZero,
    /// Every nonzero commutator is a real multiple of `v = [G_i, G_j]` for
    /// the stored `pair`.
    CommonLine {
        v: Gaussian,
        pair: (usize, usize),
    },
    /// `[G_i, G_j]` and `[G_k, G_l]` are nonzero and not on a common line.
    TwoLines {
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl AngleClass {
    /// Classifies the pairs `i < j` drawn from `indices`; the line
    /// representative is the first nonzero commutator in that order.
    pub fn classify(table: &CommutatorTable, indices: &[usize]) -> Self {
        let mut line: Option<(Gaussian, (usize, usize))> = None;
        for (p, &i) in indices.iter().enumerate() {
            for &j in &indices[p + 1..] {
                let z = table.get(i, j);
                if z.is_zero() {
                    continue;
                }
                match &line {
                    None => line = Some((z.clone(), (i, j))),
                    Some((v, pair)) => {
                        if !same_line(v, z) {
                            return AngleClass::TwoLines {
                                first: *pair,
                                second: (i, j),
                            };
                        }
                    }
                }
            }
        }
        match line {
            None => AngleClass::AllZero,
            Some((v, pair)) => AngleClass::CommonLine { v, pair },
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            AngleClass::AllZero => "ALL_ZERO",
            AngleClass::CommonLine { .. } => "COMMON_LINE",
            AngleClass::TwoLines { .. } => "TWO_LINES",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Identity,
    Group,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Identity => "identity",
            Problem::Group => "group",
        }
    }
}

/// The case of the procedure that produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    EmptyAfterRedundancy,
    TwoLines,
    AllZero,
    CommonLineTSystem,
    CommonLineEmptyGammaSet,
    CommonLineCommutingSystem,
    RedundantGenerator,
    AllZeroAllUsed,
    CommonLineGammaSetIncomplete,
    CommonLineNonCommutingPair,
    CommonLineAllUsed,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::EmptyAfterRedundancy => "EMPTY_AFTER_REDUNDANCY",
            Branch::TwoLines => "TWO_LINES",
            Branch::AllZero => "ALL_ZERO",
            Branch::CommonLineTSystem => "COMMON_LINE/T-system",
            Branch::CommonLineEmptyGammaSet => "COMMON_LINE/empty-gamma-set",
            Branch::CommonLineCommutingSystem => "COMMON_LINE/commuting-system",
            Branch::RedundantGenerator => "REDUNDANT_GENERATOR",
            Branch::AllZeroAllUsed => "ALL_ZERO/all-used-system",
            Branch::CommonLineGammaSetIncomplete => "COMMON_LINE/gamma-set-incomplete",
            Branch::CommonLineNonCommutingPair => "COMMON_LINE/non-commuting-pair",
            Branch::CommonLineAllUsed => "COMMON_LINE/all-used-system",
        }
    }

    /// Branches that can only ever carry a positive answer.
    pub fn forces_yes(self) -> bool {
        matches!(
            self,
            Branch::TwoLines | Branch::CommonLineTSystem | Branch::CommonLineNonCommutingPair
        )
    }

    /// Branches that can only ever carry a negative answer.
    pub fn forces_no(self) -> bool {
        matches!(
            self,
            Branch::EmptyAfterRedundancy
                | Branch::CommonLineEmptyGammaSet
                | Branch::RedundantGenerator
                | Branch::CommonLineGammaSetIncomplete
        )
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One feasibility query issued while deciding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemRecord {
    pub id: SystemId,
    pub feasible: bool,
}

/// Which query a [`SystemRecord`] is. Generator indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemId {
    Redundancy(usize),
    GammaUsable(usize),
    HalfPlane { positive: bool },
    TPair(usize, usize),
    Commuting,
    AllUsed,
}

impl fmt::Display for SystemId {
    /// 1-based, as shown to users.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemId::Redundancy(i) => write!(f, "redundancy[{}]", i + 1),
            SystemId::GammaUsable(k) => write!(f, "gamma-usable[{}]", k + 1),
            SystemId::HalfPlane { positive: true } => f.write_str("half-plane[H1]"),
            SystemId::HalfPlane { positive: false } => f.write_str("half-plane[H2]"),
            SystemId::TPair(i, j) => write!(f, "T[{},{}]", i + 1, j + 1),
            SystemId::Commuting => f.write_str("commuting"),
            SystemId::AllUsed => f.write_str("all-used"),
        }
    }
}

/// Record of the steps taken. All indices refer to the input generator set
/// and are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTrace {
    pub removed_redundant: Vec<usize>,
    pub commutators: CommutatorTable,
    pub angle_class: Option<AngleClass>,
    pub gamma_line_rep: Option<Gaussian>,
    pub feasible_tij_pair: Option<(usize, usize)>,
    pub half_plane_occupancy: Option<(bool, bool)>,
    pub gamma_usable_set: Option<Vec<usize>>,
    pub final_system_verdict: Option<bool>,
    /// Parikh vector certifying the last feasible system, indexed like the input.
    pub witness: Option<Vec<BigInt>>,
    pub systems: Vec<SystemRecord>,
}

impl DecisionTrace {
    fn new(commutators: CommutatorTable) -> Self {
        DecisionTrace {
            removed_redundant: Vec::new(),
            commutators,
            angle_class: None,
            gamma_line_rep: None,
            feasible_tij_pair: None,
            half_plane_occupancy: None,
            gamma_usable_set: None,
            final_system_verdict: None,
            witness: None,
            systems: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub problem: Problem,
    pub answer: bool,
    pub branch: Branch,
    pub trace: DecisionTrace,
}

/// Solves `sys` and records the outcome under `id`.
fn query(
    log: &mut Vec<SystemRecord>,
    id: SystemId,
    sys: &LinSystem,
) -> Result<Option<FeasibilityWitness>, DeciderError> {
    let w = sys.integer_feasible()?;
    log.push(SystemRecord {
        id,
        feasible: w.is_some(),
    });
    Ok(w)
}

fn check_index(g: &GeneratorSet, index: usize) -> Result<(), DeciderError> {
    if index >= g.len() {
        return Err(DeciderError::IndexOutOfRange { index, t: g.len() });
    }
    Ok(())
}

/// `z_k = cross(v, c_k − ½ a_kᵀ b_k)`, so that `zᵀx` is the signed distance
/// (up to a positive factor) of `Λ_x` from the line through `v`.
pub fn line_offsets(g: &GeneratorSet, v: &Gaussian) -> Vec<Rational> {
    g.iter().map(|h| cross(v, &h.invariant_term())).collect()
}

/// The real and imaginary parts of `(c_k − ½ a_kᵀ b_k)_k` as two rows.
fn invariant_rows(g: &GeneratorSet) -> [Vec<Rational>; 2] {
    let terms: Vec<Gaussian> = g.iter().map(|h| h.invariant_term()).collect();
    [
        terms.iter().map(|z| z.re.clone()).collect(),
        terms.iter().map(|z| z.im.clone()).collect(),
    ]
}

/// Indices `k` for which `base + {x_k ≥ 1}` is feasible. A witness certifies
/// every index in its support, so covered indices are not queried again.
fn per_index_logged(
    base: &LinSystem,
    t: usize,
    id: fn(usize) -> SystemId,
    log: &mut Vec<SystemRecord>,
) -> Result<Vec<usize>, DeciderError> {
    let mut covered = vec![false; t];
    let cover = |w: &FeasibilityWitness, covered: &mut Vec<bool>| {
        for (c, v) in covered.iter_mut().zip(&w.x) {
            *c |= v.is_positive();
        }
    };
    for k in 0..t {
        if covered[k] {
            continue;
        }
        let mut sys = base.clone();
        sys.push_lower_bound(k, 1);
        if let Some(w) = query(log, id(k), &sys)? {
            cover(&w, &mut covered);
            debug_assert!(covered[k]);
        }
    }
    Ok((0..t).filter(|&k| covered[k]).collect())
}

fn nonredundant_logged(
    g: &GeneratorSet,
    log: &mut Vec<SystemRecord>,
) -> Result<Vec<usize>, DeciderError> {
    per_index_logged(
        &OmegaSystem::build(g).to_system(),
        g.len(),
        SystemId::Redundancy,
        log,
    )
}

/// Indices (0-based) of generators that occur in at least one Ω-word.
///
/// Index `i` is kept iff `Ax = 0, x_i ≥ 1` has a solution in `ℕ^t`. One pass
/// suffices: a redundant index has count zero in every solution, so dropping
/// it does not change any other index's verdict.
pub fn nonredundant_subset(g: &GeneratorSet) -> Result<Vec<usize>, DeciderError> {
    nonredundant_logged(g, &mut Vec::new())
}

fn line_system(g: &GeneratorSet, v: &Gaussian) -> LinSystem {
    let mut sys = OmegaSystem::build(g).to_system();
    sys.push(line_offsets(g, v), Relation::Eq, Rational::zero())
        .expect("row length matches t");
    sys
}

fn tij_logged(
    g: &GeneratorSet,
    v: &Gaussian,
    i: usize,
    j: usize,
    log: &mut Vec<SystemRecord>,
) -> Result<Option<FeasibilityWitness>, DeciderError> {
    if v.is_zero() {
        return Err(DeciderError::ZeroLine);
    }
    check_index(g, i)?;
    check_index(g, j)?;
    if i == j {
        return Err(DeciderError::SameIndex { i, j });
    }
    if g.get(i)
        .commutator(g.get(j))
        .expect("common dimension")
        .is_zero()
    {
        return Err(DeciderError::CommutingPair { i, j });
    }
    let mut sys = line_system(g, v);
    sys.push_lower_bound(i, 1).push_lower_bound(j, 1);
    query(log, SystemId::TPair(i, j), &sys)
}

/// Whether some Ω-word using both `G_i` and `G_j` has its shuffle invariant
/// on the line through `v`. Requires `[G_i, G_j] ≠ 0`; a positive answer
/// means the identity is reachable.
pub fn tij_feasible(
    g: &GeneratorSet,
    v: &Gaussian,
    i: usize,
    j: usize,
) -> Result<bool, DeciderError> {
    Ok(tij_logged(g, v, i, j, &mut Vec::new())?.is_some())
}

fn occupancy_logged(
    g: &GeneratorSet,
    v: &Gaussian,
    log: &mut Vec<SystemRecord>,
) -> Result<(bool, bool), DeciderError> {
    if v.is_zero() {
        return Err(DeciderError::ZeroLine);
    }
    let base = OmegaSystem::build(g).to_system();
    let z = line_offsets(g, v);
    let mut flags = [false; 2];
    for (flag, positive) in flags.iter_mut().zip([true, false]) {
        let row = if positive {
            z.clone()
        } else {
            z.iter().map(|q| -q).collect()
        };
        let mut sys = base.clone();
        sys.push(row, Relation::Gt, Rational::zero())
            .expect("row length matches t");
        *flag = query(log, SystemId::HalfPlane { positive }, &sys)?.is_some();
    }
    Ok((flags[0], flags[1]))
}

/// `(H1 reachable, H2 reachable)`: whether some Ω-word has its shuffle
/// invariant strictly on the `perp(v)` side of the line through `v`, and
/// whether some has it strictly on the other side.
pub fn half_plane_occupancy(g: &GeneratorSet, v: &Gaussian) -> Result<(bool, bool), DeciderError> {
    occupancy_logged(g, v, &mut Vec::new())
}

fn gamma_usable_logged(
    g: &GeneratorSet,
    v: &Gaussian,
    log: &mut Vec<SystemRecord>,
) -> Result<Vec<usize>, DeciderError> {
    if v.is_zero() {
        return Err(DeciderError::ZeroLine);
    }
    per_index_logged(&line_system(g, v), g.len(), SystemId::GammaUsable, log)
}

/// Indices (0-based) of generators that occur in some Ω-word whose shuffle
/// invariant lies on the line through `v`.
pub fn gamma_usable_set(g: &GeneratorSet, v: &Gaussian) -> Result<Vec<usize>, DeciderError> {
    gamma_usable_logged(g, v, &mut Vec::new())
}

fn check_commuting(g: &GeneratorSet) -> Result<(), DeciderError> {
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !g
                .get(i)
                .commutator(g.get(j))
                .expect("common dimension")
                .is_zero()
            {
                return Err(DeciderError::NonCommutingPair { i, j });
            }
        }
    }
    Ok(())
}

/// `(A; Re Λ; Im Λ) x = 0` with extra rows added by the caller.
fn zero_invariant_system(g: &GeneratorSet) -> LinSystem {
    let mut sys = OmegaSystem::build(g).to_system();
    for row in invariant_rows(g) {
        sys.push(row, Relation::Eq, Rational::zero())
            .expect("row length matches t");
    }
    sys
}

fn commuting_logged(
    g: &GeneratorSet,
    log: &mut Vec<SystemRecord>,
) -> Result<Option<FeasibilityWitness>, DeciderError> {
    check_commuting(g)?;
    if g.is_empty() {
        return Ok(None);
    }
    let mut sys = zero_invariant_system(g);
    sys.push(
        vec![Rational::one(); g.len()],
        Relation::Ge,
        Rational::one(),
    )
    .expect("row length matches t");
    query(log, SystemId::Commuting, &sys)
}

/// For pairwise commuting generators: whether the identity is a nonempty
/// product of them, i.e. whether some nonzero Ω Parikh vector has `Λ_x = 0`.
pub fn commuting_case_decide(g: &GeneratorSet) -> Result<bool, DeciderError> {
    Ok(commuting_logged(g, &mut Vec::new())?.is_some())
}

fn all_used_logged(
    g: &GeneratorSet,
    log: &mut Vec<SystemRecord>,
) -> Result<Option<FeasibilityWitness>, DeciderError> {
    let mut sys = zero_invariant_system(g);
    for k in 0..g.len() {
        sys.push_lower_bound(k, 1);
    }
    query(log, SystemId::AllUsed, &sys)
}

fn lift(witness: &FeasibilityWitness, indices: &[usize], t: usize) -> Vec<BigInt> {
    let mut x = vec![BigInt::zero(); t];
    for (v, &i) in witness.x.iter().zip(indices) {
        x[i] = v.clone();
    }
    x
}

fn non_commuting_pairs(table: &CommutatorTable, indices: &[usize]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (p, &i) in indices.iter().enumerate() {
        for &j in &indices[p + 1..] {
            if !table.get(i, j).is_zero() {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Decides whether the identity matrix lies in the semigroup generated by `g`.
///
/// In the common-line case the usable set `C` is computed before any
/// per-pair system. A pair system can only be feasible when both indices
/// are in `C`, and for such a pair it always is (the sum of the two
/// per-index solutions solves it), so only pairs inside `C` are queried.
pub fn decide_identity(g: &GeneratorSet) -> Result<Decision, DeciderError> {
    let t = g.len();
    let mut trace = DecisionTrace::new(CommutatorTable::build(g));
    let retained = nonredundant_logged(g, &mut trace.systems)?;
    trace.removed_redundant = (0..t).filter(|i| !retained.contains(i)).collect();
    let done = |answer, branch, trace| {
        Ok(Decision {
            problem: Problem::Identity,
            answer,
            branch,
            trace,
        })
    };
    if retained.is_empty() {
        return done(false, Branch::EmptyAfterRedundancy, trace);
    }
    let class = AngleClass::classify(&trace.commutators, &retained);
    trace.angle_class = Some(class.clone());
    let sub = g.subset(&retained);
    match class {
        AngleClass::TwoLines { .. } => done(true, Branch::TwoLines, trace),
        AngleClass::AllZero => {
            let w = commuting_logged(&sub, &mut trace.systems)?;
            trace.final_system_verdict = Some(w.is_some());
            trace.witness = w.map(|w| lift(&w, &retained, t));
            let answer = trace.final_system_verdict == Some(true);
            done(answer, Branch::AllZero, trace)
        }
        AngleClass::CommonLine { v, .. } => {
            trace.gamma_line_rep = Some(v.clone());
            trace.half_plane_occupancy = Some(occupancy_logged(&sub, &v, &mut trace.systems)?);
            let usable_local = gamma_usable_logged(&sub, &v, &mut trace.systems)?;
            let usable: Vec<usize> = usable_local.iter().map(|&k| retained[k]).collect();
            trace.gamma_usable_set = Some(usable.clone());

            for (i, j) in non_commuting_pairs(&trace.commutators, &usable) {
                let li = retained.iter().position(|&r| r == i).expect("retained");
                let lj = retained.iter().position(|&r| r == j).expect("retained");
                if let Some(w) = tij_logged(&sub, &v, li, lj, &mut trace.systems)? {
                    trace.feasible_tij_pair = Some((i, j));
                    trace.witness = Some(lift(&w, &retained, t));
                    return done(true, Branch::CommonLineTSystem, trace);
                }
            }
            if usable.is_empty() {
                return done(false, Branch::CommonLineEmptyGammaSet, trace);
            }
            let c_set = sub.subset(&usable_local);
            let w = commuting_logged(&c_set, &mut trace.systems)?;
            trace.final_system_verdict = Some(w.is_some());
            trace.witness = w.map(|w| lift(&w, &usable, t));
            let answer = trace.final_system_verdict == Some(true);
            done(answer, Branch::CommonLineCommutingSystem, trace)
        }
    }
}

/// Decides whether the semigroup generated by `g` is a group, i.e. whether
/// every generator has an inverse inside it.
pub fn decide_group(g: &GeneratorSet) -> Result<Decision, DeciderError> {
    let t = g.len();
    let all: Vec<usize> = (0..t).collect();
    let mut trace = DecisionTrace::new(CommutatorTable::build(g));
    let retained = nonredundant_logged(g, &mut trace.systems)?;
    trace.removed_redundant = (0..t).filter(|i| !retained.contains(i)).collect();
    let done = |answer, branch, trace| {
        Ok(Decision {
            problem: Problem::Group,
            answer,
            branch,
            trace,
        })
    };
    if retained.len() < t {
        return done(false, Branch::RedundantGenerator, trace);
    }
    let class = AngleClass::classify(&trace.commutators, &all);
    trace.angle_class = Some(class.clone());
    match class {
        AngleClass::TwoLines { .. } => done(true, Branch::TwoLines, trace),
        AngleClass::AllZero => {
            let w = all_used_logged(g, &mut trace.systems)?;
            trace.final_system_verdict = Some(w.is_some());
            let answer = w.is_some();
            trace.witness = w.map(|w| w.x);
            done(answer, Branch::AllZeroAllUsed, trace)
        }
        AngleClass::CommonLine { v, .. } => {
            trace.gamma_line_rep = Some(v.clone());
            trace.half_plane_occupancy = Some(occupancy_logged(g, &v, &mut trace.systems)?);
            let usable = gamma_usable_logged(g, &v, &mut trace.systems)?;
            trace.gamma_usable_set = Some(usable.clone());
            if usable.len() < t {
                return done(false, Branch::CommonLineGammaSetIncomplete, trace);
            }
            if let Some(&(i, j)) = non_commuting_pairs(&trace.commutators, &all).first() {
                let w = tij_logged(g, &v, i, j, &mut trace.systems)?;
                trace.feasible_tij_pair = w.as_ref().map(|_| (i, j));
                let answer = w.is_some();
                trace.witness = w.map(|w| w.x);
                // Both indices are usable, so the pair system is feasible.
                debug_assert!(answer);
                return done(answer, Branch::CommonLineNonCommutingPair, trace);
            }
            let w = all_used_logged(g, &mut trace.systems)?;
            trace.final_system_verdict = Some(w.is_some());
            let answer = w.is_some();
            trace.witness = w.map(|w| w.x);
            done(answer, Branch::CommonLineAllUsed, trace)
        }
    }
}
