//! Session records and the computations behind each iteration.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use biprom_core::{
    constructive_elicitation, ror_snapshot, DecisionProblem, ElicitationOptions, Error, ModelLevel,
    PreferenceStatement, RorOptions, RorSnapshot,
};

/// One entry of the append-only statement log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum LogEntry {
    Add { iteration: usize, statements: Vec<PreferenceStatement> },
    Retract { iteration: usize, removed: Vec<PreferenceStatement> },
}

/// The statement set in force at one iteration and what it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    pub iteration: usize,
    pub statements: Vec<PreferenceStatement>,
    /// Sizes of the batches making up `statements`, oldest first.
    pub batches: Vec<usize>,
    pub elicitation: Value,
    /// Serialized snapshot, kept verbatim so replays are byte-identical.
    pub snapshot: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub problem: DecisionProblem,
    pub statement_log: Vec<LogEntry>,
    pub iterations: Vec<Iteration>,
    pub created_at: u64,
    pub updated_at: u64,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Why an iteration could not be produced.
#[derive(Debug, Clone)]
pub enum Rejection {
    /// Statements refer to unknown ids or cannot be linearized.
    Invalid(String),
    /// No compatible bicapacity; carries the elicitation report.
    Inconsistent(Value),
    Internal(String),
}

impl From<Error> for Rejection {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) | Error::MalformedModel(_) | Error::Io(_) => Rejection::Internal(e.to_string()),
            _ => Rejection::Invalid(e.to_string()),
        }
    }
}

/// A statement set proposed as the next iteration, already elicited.
#[derive(Debug, Clone)]
pub struct Proposal {
    pub iteration: usize,
    pub statements: Vec<PreferenceStatement>,
    pub batches: Vec<usize>,
    pub elicitation: Value,
    pub entry: LogEntry,
}

fn elicit(
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    eps_threshold: f64,
) -> Result<Value, Rejection> {
    let result = constructive_elicitation(problem, statements, ElicitationOptions { eps_threshold })?;
    let value = serde_json::to_value(&result).map_err(|e| Rejection::Internal(e.to_string()))?;
    if result.level == ModelLevel::Inconsistent {
        let conflict: Vec<&PreferenceStatement> =
            result.infeasibility_hint.iter().flat_map(|h| h.conflict.iter().map(|&i| &statements[i])).collect();
        return Err(Rejection::Inconsistent(json!({
            "elicitation": value,
            "hint": result.infeasibility_hint,
            "conflicting_statements": conflict,
        })));
    }
    Ok(value)
}

impl Session {
    pub fn new(id: String, problem: DecisionProblem, eps_threshold: f64) -> Result<Self, Rejection> {
        let elicitation = elicit(&problem, &[], eps_threshold)?;
        let t = now();
        Ok(Self {
            id,
            problem,
            statement_log: Vec::new(),
            iterations: vec![Iteration {
                iteration: 0,
                statements: Vec::new(),
                batches: Vec::new(),
                elicitation,
                snapshot: None,
            }],
            created_at: t,
            updated_at: t,
        })
    }

    pub fn current(&self) -> &Iteration {
        self.iterations.last().expect("iteration 0 always exists")
    }

    pub fn propose_add(&self, batch: Vec<PreferenceStatement>, eps_threshold: f64) -> Result<Proposal, Rejection> {
        if batch.is_empty() {
            return Err(Rejection::Invalid("the statement batch is empty".into()));
        }
        let cur = self.current();
        let mut statements = cur.statements.clone();
        statements.extend(batch.iter().cloned());
        let mut batches = cur.batches.clone();
        batches.push(batch.len());
        let elicitation = elicit(&self.problem, &statements, eps_threshold)?;
        let iteration = cur.iteration + 1;
        Ok(Proposal {
            iteration,
            statements,
            batches,
            elicitation,
            entry: LogEntry::Add { iteration, statements: batch },
        })
    }

    pub fn propose_retract(&self, eps_threshold: f64) -> Result<Option<Proposal>, Rejection> {
        let cur = self.current();
        let Some(&last) = cur.batches.last() else {
            return Ok(None);
        };
        let keep = cur.statements.len() - last;
        let statements = cur.statements[..keep].to_vec();
        let removed = cur.statements[keep..].to_vec();
        let batches = cur.batches[..cur.batches.len() - 1].to_vec();
        let elicitation = elicit(&self.problem, &statements, eps_threshold)?;
        let iteration = cur.iteration + 1;
        Ok(Some(Proposal {
            iteration,
            statements,
            batches,
            elicitation,
            entry: LogEntry::Retract { iteration, removed },
        }))
    }

    /// Stores a computed proposal as the newest iteration.
    pub fn commit(&mut self, proposal: Proposal, snapshot: String, previous_snapshot: Option<String>) {
        if let Some(prev) = previous_snapshot {
            let slot = &mut self.iterations[proposal.iteration - 1].snapshot;
            if slot.is_none() {
                *slot = Some(prev);
            }
        }
        self.statement_log.push(proposal.entry);
        self.iterations.push(Iteration {
            iteration: proposal.iteration,
            statements: proposal.statements,
            batches: proposal.batches,
            elicitation: proposal.elicitation,
            snapshot: Some(snapshot),
        });
        self.updated_at = now();
    }
}

pub fn encode_snapshot(snapshot: &RorSnapshot) -> Result<String, Rejection> {
    serde_json::to_string(snapshot).map_err(|e| Rejection::Internal(e.to_string()))
}

/// Snapshot of one statement set, with its diff when `previous` is given.
pub fn compute_snapshot(
    problem: &DecisionProblem,
    statements: &[PreferenceStatement],
    iteration: usize,
    previous: Option<&str>,
    options: RorOptions,
) -> Result<String, Rejection> {
    let previous: Option<RorSnapshot> = previous
        .map(serde_json::from_str)
        .transpose()
        .map_err(|e| Rejection::Internal(format!("stored snapshot is unreadable: {e}")))?;
    let snap = ror_snapshot(problem, statements, iteration, previous.as_ref(), options)?;
    encode_snapshot(&snap)
}

/// Snapshot for `proposal` plus, when missing, the snapshot of its
/// predecessor (needed for the diff).
pub fn compute_proposal(
    session: &Session,
    proposal: &Proposal,
    options: RorOptions,
) -> Result<(String, Option<String>), Rejection> {
    let prev = &session.iterations[proposal.iteration - 1];
    let fresh_prev = match &prev.snapshot {
        Some(_) => None,
        None => Some(compute_snapshot(&session.problem, &prev.statements, prev.iteration, None, options)?),
    };
    let prev_json = prev.snapshot.as_deref().or(fresh_prev.as_deref());
    let snapshot = compute_snapshot(&session.problem, &proposal.statements, proposal.iteration, prev_json, options)?;
    Ok((snapshot, fresh_prev))
}
