//! Proof search producing closed clausal tableaux.
//!
//! [`prove_connection`] is a goal-directed connection prover with rigid
//! variables, iterative deepening on path length and regularity pruning.
//! [`prove_hyper`] builds positive hyper tableaux by forward chaining over
//! ground instances. [`entails`] wraps the connection prover as a bounded
//! entailment oracle.

mod connection;
mod engine;
mod entail;
mod hyper;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::clausify::ClausalForm;
use crate::logic::Clause;
use crate::tableau::{ClauseMeta, Side};

pub use connection::{prove_connection, StartPolicy};
pub use entail::{entails, entails_with, Entailment, RENAME_THRESHOLD};
pub use hyper::prove_hyper;

/// Resource limits for one proof search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofBudget {
    /// Bound for iterative deepening (path length or term depth).
    pub max_depth: usize,
    pub max_inferences: u64,
    pub timeout_ms: u64,
}

impl Default for ProofBudget {
    fn default() -> Self {
        ProofBudget {
            max_depth: 12,
            max_inferences: 1_000_000,
            timeout_ms: 10_000,
        }
    }
}

impl ProofBudget {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_depth == 0 || self.max_inferences == 0 || self.timeout_ms == 0 {
            return Err("budget limits must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustReason {
    /// The depth bound was reached without a proof.
    DepthLimit,
    InferenceLimit,
    Timeout,
    /// The search space was exhausted without hitting a bound: the clause
    /// set has no proof of the searched kind.
    Saturated,
}

/// Proof search ended without a closed tableau.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("no proof found ({reason:?} after {inferences} inferences)")]
pub struct Exhausted {
    pub reason: ExhaustReason,
    pub inferences: u64,
}

/// Which prover builds the tableau.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProverKind {
    #[default]
    Connection,
    Hyper,
}

/// One input clause with the side and definitional metadata that tableau
/// nodes built from it inherit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputClause {
    pub clause: Clause,
    pub side: Option<Side>,
    pub meta: Option<ClauseMeta>,
}

/// The clauses handed to a prover.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseSet {
    pub clauses: Vec<InputClause>,
}

impl ClauseSet {
    pub fn new() -> ClauseSet {
        ClauseSet::default()
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> ClauseSet {
        let mut s = ClauseSet::new();
        for c in clauses {
            s.push(c, None, None);
        }
        s
    }

    pub fn from_form(form: &ClausalForm) -> ClauseSet {
        let mut s = ClauseSet::new();
        s.extend_form(form);
        s
    }

    /// Red clauses first, then blue ones.
    pub fn two_sided(red: &ClausalForm, blue: &ClausalForm) -> ClauseSet {
        let mut s = ClauseSet::new();
        s.extend_form(&red.clone().with_side(Side::Red));
        s.extend_form(&blue.clone().with_side(Side::Blue));
        s
    }

    pub fn extend_form(&mut self, form: &ClausalForm) {
        for (i, c) in form.clauses.iter().enumerate() {
            let meta = form.meta.get(i).cloned().flatten();
            self.push(c.clone(), form.side, meta);
        }
    }

    pub fn push(&mut self, clause: Clause, side: Option<Side>, meta: Option<ClauseMeta>) {
        self.clauses.push(InputClause { clause, side, meta });
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn plain_clauses(&self) -> Vec<Clause> {
        self.clauses.iter().map(|c| c.clause.clone()).collect()
    }

    pub fn clauses_of(&self, side: Side) -> Vec<Clause> {
        self.clauses
            .iter()
            .filter(|c| c.side == Some(side))
            .map(|c| c.clause.clone())
            .collect()
    }
}

/// Runs the chosen prover.
pub fn prove(
    kind: ProverKind,
    set: &ClauseSet,
    budget: &ProofBudget,
) -> Result<crate::tableau::Tableau, Exhausted> {
    match kind {
        ProverKind::Connection => prove_connection(set, StartPolicy::default(), budget),
        ProverKind::Hyper => prove_hyper(set, budget),
    }
}

/// Inference counter and deadline.
pub(crate) struct Meter {
    pub inferences: u64,
    max: u64,
    deadline: Instant,
}

impl Meter {
    pub fn new(budget: &ProofBudget) -> Meter {
        Meter {
            inferences: 0,
            max: budget.max_inferences,
            deadline: Instant::now() + Duration::from_millis(budget.timeout_ms),
        }
    }

    pub fn tick(&mut self) -> Result<(), ExhaustReason> {
        self.inferences += 1;
        if self.inferences > self.max {
            return Err(ExhaustReason::InferenceLimit);
        }
        if self.inferences.is_multiple_of(512) && Instant::now() > self.deadline {
            return Err(ExhaustReason::Timeout);
        }
        Ok(())
    }

    pub fn exhausted(&self, reason: ExhaustReason) -> Exhausted {
        Exhausted {
            reason,
            inferences: self.inferences,
        }
    }
}

/// Proof search recurses once per goal; give it a roomy stack.
pub(crate) fn with_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, f)
            .expect("failed to spawn prover thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}
