use std::fmt;
use std::io::{self, Write};
use std::ops::{Not, Range};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn positive(self) -> Lit {
        Lit(self.0 as i32)
    }

    pub fn negative(self) -> Lit {
        Lit(-(self.0 as i32))
    }
}

/// A signed literal in DIMACS convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn from_dimacs(value: i32) -> Self {
        assert!(value != 0, "0 is not a literal");
        Lit(value)
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The rule family a clause was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseFamily {
    /// The APTA root gets color 0 in every DFA.
    RootColor,
    /// Positive example nodes are accepting in every DFA.
    PositiveAccepted,
    /// Negative example nodes are rejecting in at least one DFA.
    NegativeRejected,
    AtLeastOneColor,
    /// Colors of parent and child fix a transition.
    ParentTransition,
    TransitionAtMostOne,
    AtMostOneColor,
    TransitionAtLeastOne,
    /// Parent color plus transition fix the child color.
    ChildColor,
    /// A negative node whose color is rejecting cannot share it with a
    /// positive node.
    NoAcceptRejectMerge,
    SymParentExists,
    SymParentDef,
    SymTransitionDef,
    SymDfsOrder,
    SymMinSymbolDef,
    SymSymbolOrder,
}

impl ClauseFamily {
    pub fn is_symmetry_breaking(self) -> bool {
        matches!(
            self,
            ClauseFamily::SymParentExists
                | ClauseFamily::SymParentDef
                | ClauseFamily::SymTransitionDef
                | ClauseFamily::SymDfsOrder
                | ClauseFamily::SymMinSymbolDef
                | ClauseFamily::SymSymbolOrder
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGroup {
    pub family: ClauseFamily,
    pub clauses: Range<usize>,
}

/// A clause database with provenance per contiguous clause group.
#[derive(Debug, Clone, Default)]
pub struct CnfInstance {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    groups: Vec<ClauseGroup>,
}

impl CnfInstance {
    pub fn new(num_vars: u32) -> Self {
        Self {
            num_vars,
            clauses: Vec::new(),
            groups: Vec::new(),
        }
    }

    /// Starts a provenance group; following clauses belong to `family`.
    pub fn begin(&mut self, family: ClauseFamily) {
        let start = self.clauses.len();
        self.groups.push(ClauseGroup {
            family,
            clauses: start..start,
        });
    }

    pub fn add(&mut self, clause: Vec<Lit>) {
        assert!(!clause.is_empty(), "empty clause");
        debug_assert!(clause.iter().all(|l| l.var().0 >= 1 && l.var().0 <= self.num_vars));
        self.clauses.push(clause);
        let end = self.clauses.len();
        match self.groups.last_mut() {
            Some(group) => group.clauses.end = end,
            None => panic!("clause added outside a group"),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn groups(&self) -> &[ClauseGroup] {
        &self.groups
    }

    /// Number of clauses produced by one family.
    pub fn count(&self, family: ClauseFamily) -> usize {
        self.groups
            .iter()
            .filter(|g| g.family == family)
            .map(|g| g.clauses.len())
            .sum()
    }

    pub fn family_clauses(&self, family: ClauseFamily) -> impl Iterator<Item = &Vec<Lit>> {
        self.groups
            .iter()
            .filter(move |g| g.family == family)
            .flat_map(|g| &self.clauses[g.clauses.clone()])
    }

    /// Index of the first clause `model` falsifies.
    pub fn first_violated(&self, model: &Model) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|&l| model.lit(l)))
    }

    pub fn is_satisfied_by(&self, model: &Model) -> bool {
        model.num_vars() == self.num_vars as usize && self.first_violated(model).is_none()
    }

    /// DIMACS CNF, preceded by the given comment lines (without the `c `).
    pub fn write_dimacs<W: Write>(&self, out: &mut W, comments: impl IntoIterator<Item = String>) -> io::Result<()> {
        for line in comments {
            writeln!(out, "c {line}")?;
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ")?;
            }
            writeln!(out, "0")?;
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = Vec::new();
        self.write_dimacs(&mut out, std::iter::empty())
            .expect("writing to memory cannot fail");
        String::from_utf8(out).expect("DIMACS output is ASCII")
    }
}

/// A total assignment; `values[0]` is unused so variables index directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(num_vars: usize) -> Self {
        Self {
            values: vec![false; num_vars + 1],
        }
    }

    pub fn from_values(values: impl IntoIterator<Item = bool>) -> Self {
        let mut all = vec![false];
        all.extend(values);
        Self { values: all }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[var.0 as usize]
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.values[var.0 as usize] = value;
    }

    pub fn lit(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }
}
