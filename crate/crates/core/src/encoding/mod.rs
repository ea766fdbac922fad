//! CNF encoding of "is there an `(m_1, ..., m_n)`-decomposition consistent
//! with this APTA?" and decoding of satisfying assignments.
//!
//! Every DFA `k` colors every APTA node with one of its `m_k` states. The
//! base rules are the classic graph-coloring encoding for DFA
//! identification, indexed by DFA, with two changes for conjunctions:
//!
//! * a negative node only has to be rejected by *some* DFA, chosen through
//!   the selector family `r[k][v]` (with a single DFA the rule is emitted
//!   directly without selectors);
//! * a negative and a positive node may share a color in DFA `k` unless
//!   that color is rejecting in `k`.
//!
//! With symmetry breaking on, each DFA's states are forced into
//! depth-first discovery order from the initial state, exploring symbols
//! in alphabet order. The parent of state `j` is the largest state `i < j`
//! with a transition into `j`; states strictly between a parent and its
//! child never reach past the child; siblings are ordered by the smallest
//! symbol leading to them.

mod cnf;
mod varmap;

pub use cnf::{ClauseFamily, ClauseGroup, CnfInstance, Lit, Model, Var};
pub use varmap::{VarMap, VarName};

use crate::automata::{Decomposition, Dfa};
use crate::error::EncodeError;
use crate::pareto::SizeTuple;
use crate::sample::Apta;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    pub symmetry_breaking: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            symmetry_breaking: true,
        }
    }
}

/// A CNF instance together with the map that decodes its models.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub cnf: CnfInstance,
    pub varmap: VarMap,
    alphabet: crate::automata::Alphabet,
}

impl Encoding {
    /// DIMACS text with one `c <family> <indices> <var>` line per variable.
    pub fn to_dimacs(&self) -> String {
        let mut out = Vec::new();
        self.cnf
            .write_dimacs(&mut out, self.varmap.comment_lines())
            .expect("writing to memory cannot fail");
        String::from_utf8(out).expect("DIMACS output is ASCII")
    }

    pub fn decode(&self, model: &Model) -> Result<Decomposition, EncodeError> {
        decode(model, &self.varmap, &self.alphabet)
    }
}

pub fn encode(apta: &Apta, sizes: &SizeTuple, options: &EncodeOptions) -> Encoding {
    let sizes = sizes.as_slice();
    let n = sizes.len();
    let num_symbols = apta.alphabet().len();
    let positives: Vec<usize> = apta.accepting().collect();
    let negatives: Vec<usize> = apta.rejecting().collect();
    let map = VarMap::new(
        sizes,
        apta.len(),
        num_symbols,
        negatives.clone(),
        options.symmetry_breaking,
    );
    let mut cnf = CnfInstance::new(map.num_vars());
    // (node, parent, symbol) for every non-root node
    let edges: Vec<(usize, usize, usize)> = apta
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(v, node)| Some((v, node.parent?, node.symbol?.index())))
        .collect();
    let colors = |k: usize| 0..sizes[k];
    let dfas = 0..n;

    cnf.begin(ClauseFamily::RootColor);
    for k in dfas.clone() {
        cnf.add(vec![map.x(k, apta.root(), 0).positive()]);
    }

    cnf.begin(ClauseFamily::PositiveAccepted);
    for &v in &positives {
        for k in dfas.clone() {
            for i in colors(k) {
                cnf.add(vec![map.x(k, v, i).negative(), map.z(k, i).positive()]);
            }
        }
    }

    cnf.begin(ClauseFamily::NegativeRejected);
    if map.has_selectors() {
        for &v in &negatives {
            cnf.add(dfas.clone().map(|k| map.r(k, v).positive()).collect());
        }
        for &v in &negatives {
            for k in dfas.clone() {
                for i in colors(k) {
                    cnf.add(vec![
                        map.r(k, v).negative(),
                        map.x(k, v, i).negative(),
                        map.z(k, i).negative(),
                    ]);
                }
            }
        }
    } else {
        for &v in &negatives {
            for i in colors(0) {
                cnf.add(vec![map.x(0, v, i).negative(), map.z(0, i).negative()]);
            }
        }
    }

    cnf.begin(ClauseFamily::AtLeastOneColor);
    for v in 0..apta.len() {
        for k in dfas.clone() {
            cnf.add(colors(k).map(|i| map.x(k, v, i).positive()).collect());
        }
    }

    cnf.begin(ClauseFamily::ParentTransition);
    for &(v, parent, l) in &edges {
        for k in dfas.clone() {
            for i in colors(k) {
                for j in colors(k) {
                    cnf.add(vec![
                        map.x(k, parent, i).negative(),
                        map.x(k, v, j).negative(),
                        map.y(k, l, i, j).positive(),
                    ]);
                }
            }
        }
    }

    cnf.begin(ClauseFamily::TransitionAtMostOne);
    for l in 0..num_symbols {
        for k in dfas.clone() {
            for i in colors(k) {
                for j in colors(k) {
                    for t in j + 1..sizes[k] {
                        cnf.add(vec![map.y(k, l, i, j).negative(), map.y(k, l, i, t).negative()]);
                    }
                }
            }
        }
    }

    cnf.begin(ClauseFamily::AtMostOneColor);
    for v in 0..apta.len() {
        for k in dfas.clone() {
            for i in colors(k) {
                for j in i + 1..sizes[k] {
                    cnf.add(vec![map.x(k, v, i).negative(), map.x(k, v, j).negative()]);
                }
            }
        }
    }

    cnf.begin(ClauseFamily::TransitionAtLeastOne);
    for l in 0..num_symbols {
        for k in dfas.clone() {
            for i in colors(k) {
                cnf.add(colors(k).map(|j| map.y(k, l, i, j).positive()).collect());
            }
        }
    }

    cnf.begin(ClauseFamily::ChildColor);
    for &(v, parent, l) in &edges {
        for k in dfas.clone() {
            for i in colors(k) {
                for j in colors(k) {
                    cnf.add(vec![
                        map.x(k, parent, i).negative(),
                        map.y(k, l, i, j).negative(),
                        map.x(k, v, j).positive(),
                    ]);
                }
            }
        }
    }

    cnf.begin(ClauseFamily::NoAcceptRejectMerge);
    for &neg in &negatives {
        for &pos in &positives {
            for k in dfas.clone() {
                for i in colors(k) {
                    cnf.add(vec![
                        map.x(k, neg, i).negative(),
                        map.z(k, i).positive(),
                        map.x(k, pos, i).negative(),
                    ]);
                }
            }
        }
    }

    if options.symmetry_breaking {
        encode_symmetry_breaking(&mut cnf, &map, sizes, num_symbols);
    }

    Encoding {
        cnf,
        varmap: map,
        alphabet: apta.alphabet().clone(),
    }
}

fn encode_symmetry_breaking(cnf: &mut CnfInstance, map: &VarMap, sizes: &[usize], num_symbols: usize) {
    cnf.begin(ClauseFamily::SymParentExists);
    for (k, &m) in sizes.iter().enumerate() {
        for j in 1..m {
            cnf.add((0..j).map(|i| map.p(k, j, i).positive()).collect());
        }
    }

    // p[j][i] <=> t[i][j] & !t[i+1][j] & ... & !t[j-1][j]
    cnf.begin(ClauseFamily::SymParentDef);
    for (k, &m) in sizes.iter().enumerate() {
        for j in 0..m {
            for i in 0..j {
                let p = map.p(k, j, i);
                cnf.add(vec![p.negative(), map.t(k, i, j).positive()]);
                for s in i + 1..j {
                    cnf.add(vec![p.negative(), map.t(k, s, j).negative()]);
                }
                let mut back = vec![p.positive(), map.t(k, i, j).negative()];
                back.extend((i + 1..j).map(|s| map.t(k, s, j).positive()));
                cnf.add(back);
            }
        }
    }

    // t[i][j] <=> y[l_1][i][j] | ... | y[l_L][i][j]
    cnf.begin(ClauseFamily::SymTransitionDef);
    for (k, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            for j in i + 1..m {
                let t = map.t(k, i, j);
                let mut forward = vec![t.negative()];
                forward.extend((0..num_symbols).map(|l| map.y(k, l, i, j).positive()));
                cnf.add(forward);
                for l in 0..num_symbols {
                    cnf.add(vec![t.positive(), map.y(k, l, i, j).negative()]);
                }
            }
        }
    }

    // p[j][i] => !t[p][q] for i < p < j < q
    cnf.begin(ClauseFamily::SymDfsOrder);
    for (k, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            for p in i + 1..m {
                for j in p + 1..m {
                    for q in j + 1..m {
                        cnf.add(vec![map.p(k, j, i).negative(), map.t(k, p, q).negative()]);
                    }
                }
            }
        }
    }

    // m[l_r][i][j] <=> y[l_r][i][j] & !y[l_{r-1}][i][j] & ... & !y[l_1][i][j]
    cnf.begin(ClauseFamily::SymMinSymbolDef);
    for (k, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            for j in i + 1..m {
                for r in 0..num_symbols {
                    let m = map.m(k, r, i, j);
                    cnf.add(vec![m.negative(), map.y(k, r, i, j).positive()]);
                    for s in 0..r {
                        cnf.add(vec![m.negative(), map.y(k, s, i, j).negative()]);
                    }
                    let mut back = vec![m.positive(), map.y(k, r, i, j).negative()];
                    back.extend((0..r).map(|s| map.y(k, s, i, j).positive()));
                    cnf.add(back);
                }
            }
        }
    }

    // Siblings j < q of parent i: the smallest symbol into j precedes the
    // smallest symbol into q, i.e. forbid m[l_s][i][j] & m[l_r][i][q], r < s.
    cnf.begin(ClauseFamily::SymSymbolOrder);
    for (k, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            for j in i + 1..m {
                for q in j + 1..m {
                    for r in 0..num_symbols {
                        for s in r + 1..num_symbols {
                            cnf.add(vec![
                                map.p(k, j, i).negative(),
                                map.p(k, q, i).negative(),
                                map.m(k, s, i, j).negative(),
                                map.m(k, r, i, q).negative(),
                            ]);
                        }
                    }
                }
            }
        }
    }
}

/// Reads the decomposition out of a model: state `i` of DFA `k` accepts iff
/// `z[k][i]`, `delta(i, l) = j` iff `y[k][l][i][j]`, and the initial state
/// is the color of the APTA root.
pub fn decode(model: &Model, map: &VarMap, alphabet: &crate::automata::Alphabet) -> Result<Decomposition, EncodeError> {
    if model.num_vars() != map.num_vars() as usize {
        return Err(EncodeError::ModelSize {
            expected: map.num_vars() as usize,
            found: model.num_vars(),
        });
    }
    let mut dfas = Vec::with_capacity(map.num_dfas());
    for (k, &m) in map.sizes().iter().enumerate() {
        let accepting: Vec<bool> = (0..m).map(|i| model.value(map.z(k, i))).collect();
        let mut delta = Vec::with_capacity(m * map.num_symbols());
        for i in 0..m {
            for l in 0..map.num_symbols() {
                let target = (0..m).find(|&j| model.value(map.y(k, l, i, j))).ok_or_else(|| {
                    EncodeError::Internal(format!(
                        "encoding clause 7 violated: DFA {k} state {i} has no target on symbol {l}"
                    ))
                })?;
                delta.push(target);
            }
        }
        let initial = (0..m)
            .find(|&i| model.value(map.x(k, 0, i)))
            .ok_or_else(|| EncodeError::Internal(format!("APTA root has no color in DFA {k}")))?;
        dfas.push(Dfa::from_parts(alphabet.clone(), initial, accepting, delta));
    }
    Decomposition::new(dfas).map_err(|e| EncodeError::Internal(e.to_string()))
}
