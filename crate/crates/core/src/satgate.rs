//! One interface over interchangeable SAT engines.
//!
//! [`Backend::Internal`] runs an in-process CDCL solver; [`Backend::Dimacs`]
//! writes the instance to a temporary DIMACS file and runs an external
//! solver binary that follows the SAT-competition output conventions
//! (`s SATISFIABLE` / `s UNSATISFIABLE` / `v ... 0`).

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::time::{Duration, Instant};

use batsat::{lbool, BasicCallbacks, BasicSolver, SolverInterface, SolverOpts};

use crate::encoding::{CnfInstance, Model, Var};
use crate::error::EngineError;

/// Environment variable consulted for the external solver path.
pub const SOLVER_ENV: &str = "DFA_DECOMP_SOLVER";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(Model),
    Unsat,
    Timeout,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, SolveStatus::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match &self.status {
            SolveStatus::Sat(model) => Some(model),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Internal,
    Dimacs(PathBuf),
}

impl Backend {
    /// Solves `cnf` within `budget`. Each call owns its engine instance.
    pub fn solve(&self, cnf: &CnfInstance, budget: Option<Duration>) -> Result<SolveResult, EngineError> {
        let result = match self {
            Backend::Internal => solve_internal(cnf, budget),
            Backend::Dimacs(path) => solve_external(path, cnf, budget)?,
        };
        if let SolveStatus::Sat(model) = &result.status {
            if model.num_vars() != cnf.num_vars() as usize {
                return Err(EngineError::MalformedOutput(format!(
                    "model covers {} variables, instance has {}",
                    model.num_vars(),
                    cnf.num_vars()
                )));
            }
            if let Some(clause) = cnf.first_violated(model) {
                debug_assert!(
                    matches!(self, Backend::Dimacs(_)),
                    "internal engine returned a model that falsifies clause {clause}"
                );
                return Err(EngineError::MalformedOutput(format!("model falsifies clause {clause}")));
            }
        }
        Ok(result)
    }
}

impl FromStr for Backend {
    type Err = EngineError;

    /// `internal`, `dimacs:<path>`, or bare `dimacs` (path from
    /// `DFA_DECOMP_SOLVER`).
    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        match spec.split_once(':') {
            None if spec == "internal" => Ok(Backend::Internal),
            None if spec == "dimacs" => std::env::var_os(SOLVER_ENV)
                .filter(|p| !p.is_empty())
                .map(|p| Backend::Dimacs(PathBuf::from(p)))
                .ok_or(EngineError::NoSolverPath),
            Some(("dimacs", path)) if !path.is_empty() => Ok(Backend::Dimacs(PathBuf::from(path))),
            _ => Err(EngineError::BadSpec(spec.to_string())),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Internal => write!(f, "internal"),
            Backend::Dimacs(path) => write!(f, "dimacs:{}", path.display()),
        }
    }
}

fn solve_internal(cnf: &CnfInstance, budget: Option<Duration>) -> SolveResult {
    let start = Instant::now();
    let deadline = budget.map(|b| start + b);
    let mut callbacks = BasicCallbacks::new();
    if let Some(deadline) = deadline {
        callbacks.set_stop(move || Instant::now() >= deadline);
    }
    let mut solver = BasicSolver::new(SolverOpts::default(), callbacks);
    let vars: Vec<batsat::Var> = (0..cnf.num_vars()).map(|_| solver.new_var_default()).collect();
    let mut ok = true;
    let mut buffer = Vec::new();
    for clause in cnf.clauses() {
        buffer.clear();
        buffer.extend(
            clause
                .iter()
                .map(|l| batsat::Lit::new(vars[l.var().0 as usize - 1], l.is_positive())),
        );
        if !solver.add_clause_reuse(&mut buffer) {
            ok = false;
            break;
        }
    }
    let timed_out = || deadline.is_some_and(|d| Instant::now() >= d);
    let status = if !ok {
        SolveStatus::Unsat
    } else if timed_out() {
        SolveStatus::Timeout
    } else {
        let verdict = solver.solve_limited(&[]);
        if verdict == lbool::TRUE {
            let model = solver.get_model();
            SolveStatus::Sat(Model::from_values(
                vars.iter().map(|v| model[v.idx() as usize] == lbool::TRUE),
            ))
        } else if verdict == lbool::FALSE {
            SolveStatus::Unsat
        } else {
            SolveStatus::Timeout
        }
    };
    SolveResult {
        status,
        stats: SolveStats {
            decisions: solver.num_decisions(),
            conflicts: solver.num_conflicts(),
            wall: start.elapsed(),
        },
    }
}

fn solve_external(path: &Path, cnf: &CnfInstance, budget: Option<Duration>) -> Result<SolveResult, EngineError> {
    let start = Instant::now();
    let mut input = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    cnf.write_dimacs(input.as_file_mut(), std::iter::empty())?;

    let mut child = Command::new(path)
        .arg(input.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| EngineError::Spawn {
            path: path.to_path_buf(),
            source,
        })?;
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = std::thread::spawn(move || {
        let mut text = String::new();
        stdout.read_to_string(&mut text).map(|_| text)
    });

    let deadline = budget.map(|b| start + b);
    let exit = loop {
        if let Some(status) = child.try_wait()? {
            break Some(status);
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            child.kill()?;
            child.wait()?;
            break None;
        }
        std::thread::sleep(Duration::from_millis(2));
    };
    let text = reader
        .join()
        .map_err(|_| EngineError::MalformedOutput("reader thread panicked".into()))??;
    let stats = |wall| SolveStats {
        decisions: 0,
        conflicts: 0,
        wall,
    };
    let Some(exit) = exit else {
        return Ok(SolveResult {
            status: SolveStatus::Timeout,
            stats: stats(start.elapsed()),
        });
    };
    let status = parse_solver_output(&text, cnf.num_vars() as usize).map_err(|e| match e {
        EngineError::MalformedOutput(msg) if !exit.success() && exit.code() != Some(10) && exit.code() != Some(20) => {
            EngineError::Crashed(format!("{exit}; {msg}"))
        }
        other => other,
    })?;
    Ok(SolveResult {
        status,
        stats: stats(start.elapsed()),
    })
}

/// Parses SAT-competition style solver output.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SolveStatus, EngineError> {
    let mut verdict = None;
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for line in text.lines().map(str::trim) {
        if let Some(rest) = line.strip_prefix("s ") {
            verdict = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ") {
            for token in rest.split_whitespace() {
                let lit: i64 = token
                    .parse()
                    .map_err(|_| EngineError::MalformedOutput(format!("bad literal '{token}'")))?;
                if lit == 0 {
                    continue;
                }
                let var = lit.unsigned_abs() as usize;
                if var > num_vars {
                    return Err(EngineError::MalformedOutput(format!(
                        "literal {lit} exceeds {num_vars} variables"
                    )));
                }
                values[var - 1] = Some(lit > 0);
            }
        }
    }
    match verdict.as_deref() {
        Some("SATISFIABLE") => {
            let mut model = Model::new(num_vars);
            for (i, value) in values.into_iter().enumerate() {
                // Unlisted variables are don't-cares; pick false.
                model.set(Var(i as u32 + 1), value.unwrap_or(false));
            }
            Ok(SolveStatus::Sat(model))
        }
        Some("UNSATISFIABLE") => Ok(SolveStatus::Unsat),
        Some("UNKNOWN") => Ok(SolveStatus::Timeout),
        Some(other) => Err(EngineError::MalformedOutput(format!("unknown verdict '{other}'"))),
        None => Err(EngineError::MalformedOutput("no 's' status line".into())),
    }
}
