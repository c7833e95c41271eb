//! Exact feasibility of linear systems over the nonnegative integers.
//!
//! Only two system shapes are handled, and both reduce to rational linear
//! programming:
//!
//! * `Ax ≥ b` (plus `Ax = 0` rows) with `b ≥ 0`: a rational solution scaled
//!   by the lcm of its denominators is an integer solution, since scaling by
//!   `r ≥ 1` keeps `r·Ax ≥ r·b ≥ b`.
//! * homogeneous rows `A₁x ≥ 0`, `A₂x > 0`: once each row has integer
//!   coefficients, `A₂x > 0` and `A₂x ≥ 1` agree on integer points, which
//!   brings the system back to the first shape.
//!
//! Variables are always constrained to `x ≥ 0`. Rational feasibility is
//! decided by a dense, fraction-free phase-one simplex with Bland's rule, so
//! it is exact and terminates without any cycling guard.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{lcm_of_denominators, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn lhs_at(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs_at(x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("unsupported system: row {row} {reason}")]
    Unsupported { row: usize, reason: &'static str },
    #[error("internal error: scaled witness fails substitution")]
    WitnessRejected,
}

/// Rows `coeffsᵀx (=|≥|>) rhs` over `x ∈ ℕ^num_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinSystem {
    num_vars: usize,
    rows: Vec<Constraint>,
}

/// A nonnegative integer point satisfying every row of the queried system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub x: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplexStats {
    pub pivots: usize,
    pub rows: usize,
    pub columns: usize,
}

impl LinSystem {
    pub fn new(num_vars: usize) -> Self {
        LinSystem {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn push(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<&mut Self, LinError> {
        if coeffs.len() != self.num_vars {
            return Err(LinError::RowLength {
                row: self.rows.len(),
                got: coeffs.len(),
                expected: self.num_vars,
            });
        }
        self.rows.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self)
    }

    /// Adds `x[var] ≥ bound`.
    pub fn push_lower_bound(&mut self, var: usize, bound: i64) -> &mut Self {
        let mut coeffs = vec![Rational::zero(); self.num_vars];
        coeffs[var] = Rational::one();
        self.rows.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs: Rational::from_integer(bound.into()),
        });
        self
    }

    /// Exact substitution check, including `x ≥ 0`.
    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        let q: Vec<Rational> = x.iter().cloned().map(Rational::from_integer).collect();
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| r.holds_at(&q))
    }

    fn satisfied_by_rational(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| r.holds_at(x))
    }

    /// Scales each row (coefficients and right-hand side) by the lcm of its
    /// coefficient denominators, so every coefficient becomes an integer.
    pub fn clear_denominators(&self) -> LinSystem {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let scale = Rational::from_integer(lcm_of_denominators(&r.coeffs));
                Constraint {
                    coeffs: r.coeffs.iter().map(|a| a * &scale).collect(),
                    relation: r.relation,
                    rhs: &r.rhs * &scale,
                }
            })
            .collect();
        LinSystem {
            num_vars: self.num_vars,
            rows,
        }
    }

    fn check_shape(&self) -> Result<(), LinError> {
        for (row, r) in self.rows.iter().enumerate() {
            let reason = match r.relation {
                Relation::Ge if r.rhs.is_negative() => "is a >= row with negative right-hand side",
                Relation::Gt if !r.rhs.is_zero() => "is a > row with nonzero right-hand side",
                Relation::Eq if !r.rhs.is_zero() => "is an = row with nonzero right-hand side",
                _ => continue,
            };
            return Err(LinError::Unsupported { row, reason });
        }
        Ok(())
    }

    /// Replaces each `> 0` row by `≥ 1`. Only sound for integer coefficients.
    fn strict_rows_to_unit_bounds(mut self) -> LinSystem {
        for r in &mut self.rows {
            if r.relation == Relation::Gt {
                r.relation = Relation::Ge;
                r.rhs = Rational::one();
            }
        }
        self
    }

    /// Decides whether some rational `x ≥ 0` satisfies the system and
    /// returns one if so. Strict rows must be eliminated first.
    pub fn rational_feasible(&self) -> Option<Vec<Rational>> {
        self.rational_feasible_with_stats().0
    }

    pub fn rational_feasible_with_stats(&self) -> (Option<Vec<Rational>>, SimplexStats) {
        assert!(
            self.rows.iter().all(|r| r.relation != Relation::Gt),
            "strict rows must be transformed before rational feasibility"
        );
        let result = Tableau::phase_one(self);
        if let (Some(x), _) = &result {
            debug_assert!(self.satisfied_by_rational(x));
        }
        result
    }

    /// Nonnegative integer feasibility for systems whose `≥` rows have
    /// `rhs ≥ 0` and whose `=` and `>` rows have `rhs = 0`.
    ///
    /// Returns `Ok(None)` when infeasible. A returned witness has been
    /// checked against every row by exact substitution.
    pub fn integer_feasible(&self) -> Result<Option<FeasibilityWitness>, LinError> {
        self.check_shape()?;
        let relaxed = self.clear_denominators().strict_rows_to_unit_bounds();
        let Some(point) = relaxed.rational_feasible() else {
            return Ok(None);
        };
        let scale = lcm_of_denominators(&point);
        let x: Vec<BigInt> = point
            .iter()
            .map(|q| q.numer() * (&scale / q.denom()))
            .collect();
        if !self.satisfied_by(&x) {
            return Err(LinError::WitnessRejected);
        }
        Ok(Some(FeasibilityWitness { x }))
    }
}

impl fmt::Display for LinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let coeffs: Vec<String> = r.coeffs.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}] {} {}", coeffs.join(", "), r.relation, r.rhs)?;
        }
        Ok(())
    }
}

/// Dense phase-one tableau kept fraction-free: every row is scaled to
/// integers up front and pivoting is integer-preserving, so the true entry
/// is the stored integer divided by `denom`, and every stored entry is a
/// minor of the initial matrix. Columns are the structural variables and
/// one surplus per `≥` row. Artificials are not stored: an artificial that
/// leaves the basis never re-enters, so a row only needs to know whether
/// its artificial is still basic.
struct Tableau {
    cells: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    /// Basic variable per row; `ncols + row` denotes that row's artificial.
    basis: Vec<usize>,
    reduced: Vec<BigInt>,
    objective: BigInt,
    denom: BigInt,
}

impl Tableau {
    fn phase_one(sys: &LinSystem) -> (Option<Vec<Rational>>, SimplexStats) {
        let nv = sys.num_vars;
        // Rows `a·x_k ≥ b` with `a > 0` become lower bounds, and the
        // substitution `x = x' + lower` moves them into the other rows'
        // right-hand sides, which keeps the tableau far less degenerate.
        let mut lower = vec![Rational::zero(); nv];
        let mut general = Vec::new();
        for r in &sys.rows {
            let mut nonzero = r.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
            match (r.relation, nonzero.next(), nonzero.next()) {
                (Relation::Ge, Some((k, a)), None) if a.is_positive() => {
                    let bound = &r.rhs / a;
                    if bound > lower[k] {
                        lower[k] = bound;
                    }
                }
                _ => general.push(r),
            }
        }
        let mut kept = Vec::new();
        for r in general {
            let shifted = &r.rhs - r.lhs_at(&lower);
            if r.coeffs.iter().all(Zero::is_zero) {
                let ok = match r.relation {
                    Relation::Eq => shifted.is_zero(),
                    _ => !shifted.is_positive(),
                };
                if !ok {
                    return (None, SimplexStats::default());
                }
                continue;
            }
            kept.push((r, shifted));
        }
        let m = kept.len();
        let surplus = kept
            .iter()
            .filter(|(r, _)| r.relation == Relation::Ge)
            .count();
        let ncols = nv + surplus;

        let mut cells = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut next_surplus = nv;
        for (r, shifted) in &kept {
            let scale = lcm_of_denominators(r.coeffs.iter().chain([shifted]));
            let int = |q: &Rational| q.numer() * (&scale / q.denom());
            let mut row = vec![BigInt::zero(); ncols];
            for (dst, q) in row.iter_mut().zip(&r.coeffs) {
                *dst = int(q);
            }
            if r.relation == Relation::Ge {
                row[next_surplus] = -BigInt::one();
                next_surplus += 1;
            }
            let mut b = int(shifted);
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                b = -b;
            }
            cells.push(row);
            rhs.push(b);
        }

        let mut reduced = vec![BigInt::zero(); ncols];
        for row in &cells {
            for (d, v) in reduced.iter_mut().zip(row) {
                *d -= v;
            }
        }
        let objective = rhs.iter().sum();
        let mut t = Tableau {
            cells,
            rhs,
            basis: (ncols..ncols + m).collect(),
            reduced,
            objective,
            denom: BigInt::one(),
        };
        let pivots = t.run();
        let stats = SimplexStats {
            pivots,
            rows: m,
            columns: ncols,
        };
        if !t.objective.is_zero() {
            return (None, stats);
        }
        let mut x = lower;
        for (r, &var) in t.basis.iter().enumerate() {
            if var < nv {
                x[var] += Rational::new(t.rhs[r].clone(), t.denom.clone());
            }
        }
        (Some(x), stats)
    }

    /// Dantzig's rule (most negative reduced cost) until `DEGENERATE_LIMIT`
    /// consecutive pivots leave the objective unchanged, then Bland's rule
    /// for good. Bland's rule cannot cycle and the objective never
    /// increases, so the switch guarantees termination.
    fn run(&mut self) -> usize {
        const DEGENERATE_LIMIT: usize = 50;
        let mut pivots = 0;
        let mut stalled = 0;
        let mut bland = false;
        loop {
            let col = if bland {
                self.reduced.iter().position(Signed::is_negative)
            } else {
                self.reduced
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.is_negative())
                    .min_by(|(i, a), (j, b)| a.cmp(b).then(i.cmp(j)))
                    .map(|(j, _)| j)
            };
            let Some(col) = col else {
                return pivots;
            };
            let row = self.leaving_row(col);
            let degenerate = self.rhs[row].is_zero();
            self.pivot(row, col);
            pivots += 1;
            if degenerate {
                stalled += 1;
                bland |= stalled >= DEGENERATE_LIMIT;
            } else {
                stalled = 0;
            }
        }
    }

    /// Minimum-ratio row for entering column `col`, ties broken by lowest
    /// basic variable index.
    fn leaving_row(&self, col: usize) -> usize {
        let mut best: Option<usize> = None;
        for r in 0..self.cells.len() {
            if !self.cells[r][col].is_positive() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    // rhs[r]/cells[r][col] against rhs[b]/cells[b][col]
                    let lhs = &self.rhs[r] * &self.cells[b][col];
                    let rhs = &self.rhs[b] * &self.cells[r][col];
                    lhs < rhs || (lhs == rhs && self.basis[r] < self.basis[b])
                }
            };
            if better {
                best = Some(r);
            }
        }
        // Phase one is bounded below by zero, so an improving column always
        // has a positive entry.
        best.expect("phase-one objective is bounded")
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        let d = std::mem::replace(&mut self.denom, p.clone());
        let pivot_row = std::mem::take(&mut self.cells[row]);
        let pivot_rhs = self.rhs[row].clone();
        let update = |v: &mut BigInt, f: &BigInt, pr: &BigInt| {
            let mut next = &p * &*v;
            if !f.is_zero() && !pr.is_zero() {
                next -= f * pr;
            }
            *v = next / &d;
        };
        for (r, cells) in self.cells.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = cells[col].clone();
            for (v, pr) in cells.iter_mut().zip(&pivot_row) {
                update(v, &f, pr);
            }
            update(&mut self.rhs[r], &f, &pivot_rhs);
        }
        let f = self.reduced[col].clone();
        for (v, pr) in self.reduced.iter_mut().zip(&pivot_row) {
            update(v, &f, pr);
        }
        // The objective is `w = objective + Σ reduced_j x_j`, so it moves by
        // `+ reduced[col] · rhs` where constraint rows move by `−`.
        self.objective = (&p * &self.objective + &f * &pivot_rhs) / &d;
        self.cells[row] = pivot_row;
        self.basis[row] = col;
    }
}
