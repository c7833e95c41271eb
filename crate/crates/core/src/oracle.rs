//! Bounded brute-force exploration of a generated semigroup.
//!
//! Used as ground truth for the decider: breadth-first enumeration of all
//! products of length at most `L`, deduplicated by exact equality of the
//! `(a, b, c)` form. Runs that hit the state budget are reported as
//! inconclusive, never as absence.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arith::Gaussian;
use crate::decider::{Decision, Problem};
use crate::matrix::{GeneratorSet, HeisenbergMatrix};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("maximum word length must be at least 1")]
    ZeroLength,
}

/// Distinct products of words of length `≤ max_len`, each with the first
/// (shortest, then lexicographically least) word found for it.
#[derive(Clone, Debug)]
pub struct ReachSet {
    words: HashMap<HeisenbergMatrix, Vec<usize>>,
    /// `layers[k]` holds the matrices first reached by a word of length `k + 1`.
    layers: Vec<Vec<HeisenbergMatrix>>,
    max_len: usize,
    inconclusive: bool,
}

impl ReachSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// True when the budget stopped the search before length `max_len`.
    pub fn inconclusive(&self) -> bool {
        self.inconclusive
    }

    pub fn witness(&self, m: &HeisenbergMatrix) -> Option<&[usize]> {
        self.words.get(m).map(Vec::as_slice)
    }

    pub fn contains(&self, m: &HeisenbergMatrix) -> bool {
        self.words.contains_key(m)
    }

    pub fn layers(&self) -> &[Vec<HeisenbergMatrix>] {
        &self.layers
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HeisenbergMatrix, &[usize])> {
        self.layers
            .iter()
            .flatten()
            .map(move |m| (m, self.words[m].as_slice()))
    }
}

/// Breadth-first enumeration of `⟨G⟩` up to word length `max_len`, storing at
/// most `budget` distinct matrices.
pub fn enumerate(g: &GeneratorSet, max_len: usize, budget: usize) -> Result<ReachSet, OracleError> {
    if max_len == 0 {
        return Err(OracleError::ZeroLength);
    }
    let mut words: HashMap<HeisenbergMatrix, Vec<usize>> = HashMap::new();
    let mut layers: Vec<Vec<HeisenbergMatrix>> = Vec::new();
    let mut inconclusive = false;
    let mut frontier = vec![(
        HeisenbergMatrix::identity(g.dim()).expect("n >= 2"),
        Vec::new(),
    )];
    'outer: for _ in 0..max_len {
        let mut layer = Vec::new();
        let mut next = Vec::new();
        for (m, word) in &frontier {
            for (k, gen) in g.iter().enumerate() {
                let p = m.multiply(gen).expect("common dimension");
                if words.contains_key(&p) {
                    continue;
                }
                if words.len() >= budget {
                    inconclusive = true;
                    layers.push(layer);
                    break 'outer;
                }
                let mut w: Vec<usize> = word.clone();
                w.push(k);
                words.insert(p.clone(), w.clone());
                layer.push(p.clone());
                next.push((p, w));
            }
        }
        layers.push(layer);
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(ReachSet {
        words,
        layers,
        max_len,
        inconclusive,
    })
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// Exhaustively absent up to the length bound.
    Absent,
    /// Budget exhausted before the bound was reached.
    Inconclusive,
}

impl<T> Search<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

impl ReachSet {
    pub fn search(&self, target: &HeisenbergMatrix) -> Search<Vec<usize>> {
        match self.witness(target) {
            Some(w) => Search::Found(w.to_vec()),
            None if self.inconclusive => Search::Inconclusive,
            None => Search::Absent,
        }
    }
}

/// A shortest nonempty word (0-based indices) whose product is the identity.
pub fn identity_witness(
    g: &GeneratorSet,
    max_len: usize,
    budget: usize,
) -> Result<Search<Vec<usize>>, OracleError> {
    let reach = enumerate(g, max_len, budget)?;
    Ok(reach.search(&HeisenbergMatrix::identity(g.dim()).expect("n >= 2")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWord {
    pub word: Vec<usize>,
    pub top_right: Gaussian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWords {
    pub words: Vec<OmegaWord>,
    pub inconclusive: bool,
}

/// Every word of length `≤ max_len` (not deduplicated by product) whose
/// product lies in Ω, in order of length then lexicographically. `budget`
/// caps the number of words examined.
pub fn omega_witnesses(
    g: &GeneratorSet,
    max_len: usize,
    budget: usize,
) -> Result<OmegaWords, OracleError> {
    if max_len == 0 {
        return Err(OracleError::ZeroLength);
    }
    let mut out = Vec::new();
    let mut examined = 0usize;
    let mut frontier = vec![(
        HeisenbergMatrix::identity(g.dim()).expect("n >= 2"),
        Vec::new(),
    )];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * g.len());
        for (m, word) in &frontier {
            for (k, gen) in g.iter().enumerate() {
                if examined >= budget {
                    return Ok(OmegaWords {
                        words: out,
                        inconclusive: true,
                    });
                }
                examined += 1;
                let p = m.multiply(gen).expect("common dimension");
                let mut w: Vec<usize> = word.clone();
                w.push(k);
                if p.is_omega() {
                    out.push(OmegaWord {
                        word: w.clone(),
                        top_right: p.c().clone(),
                    });
                }
                next.push((p, w));
            }
        }
        frontier = next;
    }
    Ok(OmegaWords {
        words: out,
        inconclusive: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuditVerdict {
    /// The decision says no, but the search found a counterexample.
    Fail,
    /// The decision says yes and the search found a witness.
    PassConfirmed,
    /// The decision says yes and no witness exists up to the bound.
    PassUnconfirmed,
    /// The decision says no and the exhaustive search agrees.
    Pass,
    /// The decision says no, nothing was found, but the budget ran out.
    Inconclusive,
}

impl AuditVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditVerdict::Fail => "FAIL",
            AuditVerdict::PassConfirmed => "PASS-CONFIRMED",
            AuditVerdict::PassUnconfirmed => "PASS-UNCONFIRMED",
            AuditVerdict::Pass => "PASS",
            AuditVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub verdict: AuditVerdict,
    pub max_len: usize,
    pub states: usize,
    /// For identity decisions, an identity word. For group decisions, one
    /// word per generator whose product is that generator's inverse.
    pub witnesses: Vec<Vec<usize>>,
}

/// Checks `decision` against bounded enumeration.
///
/// Identity decisions are checked for an identity word. Group decisions are
/// checked by looking up the inverse of every generator: finding all of them
/// confirms a yes and refutes a no.
pub fn audit(
    g: &GeneratorSet,
    max_len: usize,
    budget: usize,
    decision: &Decision,
) -> Result<AuditReport, OracleError> {
    Ok(audit_reach(g, &enumerate(g, max_len, budget)?, decision))
}

/// As [`audit`], against an enumeration of `g` that is already available.
pub fn audit_reach(g: &GeneratorSet, reach: &ReachSet, decision: &Decision) -> AuditReport {
    let (found, witnesses) = match decision.problem {
        Problem::Identity => {
            let id = HeisenbergMatrix::identity(g.dim()).expect("n >= 2");
            match reach.witness(&id) {
                Some(w) => (true, vec![w.to_vec()]),
                None => (false, Vec::new()),
            }
        }
        Problem::Group => {
            let inverses: Option<Vec<Vec<usize>>> = g
                .iter()
                .map(|m| reach.witness(&m.inverse()).map(<[usize]>::to_vec))
                .collect();
            match inverses {
                Some(ws) => (true, ws),
                None => (false, Vec::new()),
            }
        }
    };
    let verdict = match (decision.answer, found) {
        (false, true) => AuditVerdict::Fail,
        (true, true) => AuditVerdict::PassConfirmed,
        (true, false) => AuditVerdict::PassUnconfirmed,
        (false, false) if reach.inconclusive() => AuditVerdict::Inconclusive,
        (false, false) => AuditVerdict::Pass,
    };
    AuditReport {
        verdict,
        max_len: reach.max_len(),
        states: reach.len(),
        witnesses,
    }
}
