use std::fmt;

use super::cnf::Var;

/// Decoded identity of an encoding variable. All indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarName {
    /// APTA node `v` has color `i` in DFA `k`.
    X { k: usize, v: usize, i: usize },
    /// DFA `k` moves from `i` to `j` on symbol `l`.
    Y { k: usize, l: usize, i: usize, j: usize },
    /// State `i` of DFA `k` is accepting.
    Z { k: usize, i: usize },
    /// `i` is the DFS parent of `j` in DFA `k` (`i < j`).
    P { k: usize, j: usize, i: usize },
    /// Some transition leads from `i` to `j` in DFA `k` (`i < j`).
    T { k: usize, i: usize, j: usize },
    /// `l` is the smallest symbol on a transition `i -> j` (`i < j`).
    M { k: usize, l: usize, i: usize, j: usize },
    /// DFA `k` is the one that rejects negative node `v`.
    R { k: usize, v: usize },
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarName::X { k, v, i } => write!(f, "x {k} {v} {i}"),
            VarName::Y { k, l, i, j } => write!(f, "y {k} {l} {i} {j}"),
            VarName::Z { k, i } => write!(f, "z {k} {i}"),
            VarName::P { k, j, i } => write!(f, "p {k} {j} {i}"),
            VarName::T { k, i, j } => write!(f, "t {k} {i} {j}"),
            VarName::M { k, l, i, j } => write!(f, "m {k} {l} {i} {j}"),
            VarName::R { k, v } => write!(f, "r {k} {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Block {
    states: usize,
    pairs: usize,
    x: u32,
    y: u32,
    z: u32,
    p: u32,
    t: u32,
    m: u32,
    r: u32,
    end: u32,
}

/// Dense, injective allocation of the encoding's variable families, with
/// inverse lookup.
///
/// Per DFA the layout is `x | y | z | p | t | m | r`. The `p`, `t`, `m`
/// families exist only with symmetry breaking and only for `i < j`; `r`
/// exists only when there is more than one DFA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    sizes: Vec<usize>,
    num_nodes: usize,
    num_symbols: usize,
    negatives: Vec<usize>,
    negative_slot: Vec<Option<usize>>,
    symmetry: bool,
    blocks: Vec<Block>,
    num_vars: u32,
}

impl VarMap {
    pub fn new(sizes: &[usize], num_nodes: usize, num_symbols: usize, negatives: Vec<usize>, symmetry: bool) -> Self {
        let mut negative_slot = vec![None; num_nodes];
        for (slot, &v) in negatives.iter().enumerate() {
            negative_slot[v] = Some(slot);
        }
        let with_selectors = sizes.len() > 1;
        let mut next = 0u32;
        let mut blocks = Vec::with_capacity(sizes.len());
        for &m in sizes {
            let pairs = m * m.saturating_sub(1) / 2;
            let mut take = |count: usize| {
                let base = next;
                next += count as u32;
                base
            };
            let x = take(num_nodes * m);
            let y = take(num_symbols * m * m);
            let z = take(m);
            let aux = if symmetry { pairs } else { 0 };
            let p = take(aux);
            let t = take(aux);
            let mm = take(num_symbols * aux);
            let r = take(if with_selectors { negatives.len() } else { 0 });
            blocks.push(Block {
                states: m,
                pairs,
                x,
                y,
                z,
                p,
                t,
                m: mm,
                r,
                end: next,
            });
        }
        Self {
            sizes: sizes.to_vec(),
            num_nodes,
            num_symbols,
            negatives,
            negative_slot,
            symmetry,
            blocks,
            num_vars: next,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_dfas(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn symmetry_breaking(&self) -> bool {
        self.symmetry
    }

    pub fn has_selectors(&self) -> bool {
        self.sizes.len() > 1
    }

    pub fn negatives(&self) -> &[usize] {
        &self.negatives
    }

    fn var(base: u32, offset: usize) -> Var {
        Var(base + offset as u32 + 1)
    }

    fn pair(m: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < m);
        i * (2 * m - i - 1) / 2 + (j - i - 1)
    }

    fn unpair(m: usize, mut index: usize) -> (usize, usize) {
        for i in 0..m {
            let row = m - i - 1;
            if index < row {
                return (i, i + 1 + index);
            }
            index -= row;
        }
        unreachable!("pair index out of range")
    }

    pub fn x(&self, k: usize, v: usize, i: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(v < self.num_nodes && i < b.states);
        Self::var(b.x, v * b.states + i)
    }

    pub fn y(&self, k: usize, l: usize, i: usize, j: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(l < self.num_symbols && i < b.states && j < b.states);
        Self::var(b.y, (l * b.states + i) * b.states + j)
    }

    pub fn z(&self, k: usize, i: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(i < b.states);
        Self::var(b.z, i)
    }

    pub fn p(&self, k: usize, j: usize, i: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(self.symmetry);
        Self::var(b.p, Self::pair(b.states, i, j))
    }

    pub fn t(&self, k: usize, i: usize, j: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(self.symmetry);
        Self::var(b.t, Self::pair(b.states, i, j))
    }

    pub fn m(&self, k: usize, l: usize, i: usize, j: usize) -> Var {
        let b = &self.blocks[k];
        debug_assert!(self.symmetry && l < self.num_symbols);
        Self::var(b.m, l * b.pairs + Self::pair(b.states, i, j))
    }

    /// Selector for "DFA `k` rejects negative node `v`".
    pub fn r(&self, k: usize, v: usize) -> Var {
        let b = &self.blocks[k];
        let slot = self.negative_slot[v].expect("r is only defined for negative nodes");
        debug_assert!(self.has_selectors());
        Self::var(b.r, slot)
    }

    /// Inverse lookup. `None` for variables outside the allocation.
    pub fn describe(&self, var: Var) -> Option<VarName> {
        if var.0 == 0 || var.0 > self.num_vars {
            return None;
        }
        let raw = var.0 - 1;
        let k = self.blocks.partition_point(|b| b.end <= raw);
        let b = &self.blocks[k];
        let m = b.states;
        let off = |base: u32| (raw - base) as usize;
        Some(if raw < b.y {
            let o = off(b.x);
            VarName::X { k, v: o / m, i: o % m }
        } else if raw < b.z {
            let o = off(b.y);
            VarName::Y {
                k,
                l: o / (m * m),
                i: (o / m) % m,
                j: o % m,
            }
        } else if raw < b.p {
            VarName::Z { k, i: off(b.z) }
        } else if raw < b.t {
            let (i, j) = Self::unpair(m, off(b.p));
            VarName::P { k, j, i }
        } else if raw < b.m {
            let (i, j) = Self::unpair(m, off(b.t));
            VarName::T { k, i, j }
        } else if raw < b.r {
            let o = off(b.m);
            let (i, j) = Self::unpair(m, o % b.pairs);
            VarName::M {
                k,
                l: o / b.pairs,
                i,
                j,
            }
        } else {
            VarName::R {
                k,
                v: self.negatives[off(b.r)],
            }
        })
    }

    /// DIMACS comment lines `"<family> <indices...> <var>"` for every variable.
    pub fn comment_lines(&self) -> impl Iterator<Item = String> + '_ {
        (1..=self.num_vars).map(move |v| {
            let name = self.describe(Var(v)).expect("allocated variable");
            format!("{name} {v}")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn all_vars(map: &VarMap) -> Vec<(Var, VarName)> {
        let mut out = Vec::new();
        for (k, &m) in map.sizes().iter().enumerate() {
            for v in 0..map.num_nodes() {
                for i in 0..m {
                    out.push((map.x(k, v, i), VarName::X { k, v, i }));
                }
            }
            for l in 0..map.num_symbols() {
                for i in 0..m {
                    for j in 0..m {
                        out.push((map.y(k, l, i, j), VarName::Y { k, l, i, j }));
                    }
                }
            }
            for i in 0..m {
                out.push((map.z(k, i), VarName::Z { k, i }));
            }
            if map.symmetry_breaking() {
                for i in 0..m {
                    for j in i + 1..m {
                        out.push((map.p(k, j, i), VarName::P { k, j, i }));
                        out.push((map.t(k, i, j), VarName::T { k, i, j }));
                        for l in 0..map.num_symbols() {
                            out.push((map.m(k, l, i, j), VarName::M { k, l, i, j }));
                        }
                    }
                }
            }
            if map.has_selectors() {
                for &v in map.negatives() {
                    out.push((map.r(k, v), VarName::R { k, v }));
                }
            }
        }
        out
    }

    #[test]
    fn allocation_is_dense_injective_and_invertible() {
        for (sizes, symmetry) in [
            (vec![1usize], false),
            (vec![3], true),
            (vec![2, 4], true),
            (vec![1, 1, 3], false),
        ] {
            let map = VarMap::new(&sizes, 5, 3, vec![1, 4], symmetry);
            let vars = all_vars(&map);
            let distinct: HashSet<Var> = vars.iter().map(|(v, _)| *v).collect();
            assert_eq!(distinct.len(), vars.len());
            assert_eq!(vars.len(), map.num_vars() as usize);
            assert!(vars.iter().all(|(v, _)| v.0 >= 1 && v.0 <= map.num_vars()));
            for (var, name) in vars {
                assert_eq!(map.describe(var), Some(name));
            }
            assert_eq!(map.describe(Var(0)), None);
            assert_eq!(map.describe(Var(map.num_vars() + 1)), None);
        }
    }

    #[test]
    fn variable_count_formula() {
        let (nodes, symbols, negs) = (7usize, 2usize, 3usize);
        let sizes = [2usize, 3];
        let map = VarMap::new(&sizes, nodes, symbols, vec![1, 2, 5], true);
        let expected: usize = sizes
            .iter()
            .map(|&m| {
                let pairs = m * (m - 1) / 2;
                nodes * m + symbols * m * m + m + 2 * pairs + symbols * pairs + negs
            })
            .sum();
        assert_eq!(map.num_vars() as usize, expected);
    }

    #[test]
    fn comment_lines_follow_the_family_layout() {
        let map = VarMap::new(&[2], 1, 1, vec![], true);
        let lines: Vec<String> = map.comment_lines().collect();
        assert_eq!(
            lines,
            [
                "x 0 0 0 1",
                "x 0 0 1 2",
                "y 0 0 0 0 3",
                "y 0 0 0 1 4",
                "y 0 0 1 0 5",
                "y 0 0 1 1 6",
                "z 0 0 7",
                "z 0 1 8",
                "p 0 1 0 9",
                "t 0 0 1 10",
                "m 0 0 0 1 11",
            ]
        );
    }
}
