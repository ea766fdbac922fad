use std::collections::HashMap;

use super::{Decomposition, Dfa};

/// Intersection of all members, restricted to states reachable from the
/// initial tuple. States are numbered in breadth-first discovery order.
pub fn product(decomp: &Decomposition) -> Dfa {
    let dfas = decomp.dfas();
    let alphabet = decomp.alphabet().clone();
    let width = alphabet.len();

    let start: Vec<usize> = dfas.iter().map(Dfa::initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let current = states[head].clone();
        head += 1;
        for s in alphabet.symbols() {
            let next: Vec<usize> = dfas.iter().zip(&current).map(|(d, &q)| d.next(q, s)).collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            delta.push(id);
        }
    }
    debug_assert_eq!(delta.len(), states.len() * width);
    let accepting = states
        .iter()
        .map(|tuple| dfas.iter().zip(tuple).all(|(d, &q)| d.is_accepting(q)))
        .collect();
    Dfa::from_parts(alphabet, 0, accepting, delta)
}

/// Minimal complete DFA for the same language (Moore partition refinement),
/// canonically numbered.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let dfa = dfa.canonical();
    let n = dfa.num_states();
    let alphabet = dfa.alphabet().clone();

    let mut block: Vec<usize> = (0..n).map(|q| usize::from(dfa.is_accepting(q))).collect();
    let mut num_blocks = block.iter().copied().max().map_or(0, |b| b + 1);
    // Normalize when every state has the same acceptance.
    if block.iter().all(|&b| b == block[0]) {
        block.iter_mut().for_each(|b| *b = 0);
        num_blocks = 1;
    }
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut refined = Vec::with_capacity(n);
        for q in 0..n {
            let mut signature = Vec::with_capacity(alphabet.len() + 1);
            signature.push(block[q]);
            signature.extend(alphabet.symbols().map(|s| block[dfa.next(q, s)]));
            let next_id = ids.len();
            refined.push(*ids.entry(signature).or_insert(next_id));
        }
        let count = ids.len();
        block = refined;
        if count == num_blocks {
            break;
        }
        num_blocks = count;
    }

    let mut representative = vec![usize::MAX; num_blocks];
    for q in 0..n {
        if representative[block[q]] == usize::MAX {
            representative[block[q]] = q;
        }
    }
    let mut delta = Vec::with_capacity(num_blocks * alphabet.len());
    for &q in &representative {
        delta.extend(alphabet.symbols().map(|s| block[dfa.next(q, s)]));
    }
    let accepting = representative.iter().map(|&q| dfa.is_accepting(q)).collect();
    Dfa::from_parts(alphabet, block[dfa.initial()], accepting, delta).canonical()
}

/// Language equivalence by exploring the synchronous product.
pub fn equivalent(a: &Dfa, b: &Dfa) -> bool {
    if a.alphabet() != b.alphabet() {
        return false;
    }
    let mut seen = std::collections::HashSet::from([(a.initial(), b.initial())]);
    let mut stack = vec![(a.initial(), b.initial())];
    while let Some((p, q)) = stack.pop() {
        if a.is_accepting(p) != b.is_accepting(q) {
            return false;
        }
        for s in a.alphabet().symbols() {
            let pair = (a.next(p, s), b.next(q, s));
            if seen.insert(pair) {
                stack.push(pair);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Alphabet, Symbol};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn parity() -> Dfa {
        // even number of a's
        Dfa::from_fn(ab(), 2, 0, [0], |q, s| if s == Symbol(0) { 1 - q } else { q }).unwrap()
    }

    #[test]
    fn minimal_parity_is_a_fixpoint() {
        let m = minimize(&parity());
        assert_eq!(m.num_states(), 2);
        assert!(equivalent(&m, &parity()));
    }

    #[test]
    fn minimize_removes_unreachable_and_merges() {
        // states 0 and 1 are equivalent accepting sinks, 2 is unreachable
        let dfa = Dfa::new(ab(), 3, 0, [0, 1], vec![vec![1, 0], vec![0, 1], vec![2, 0]]).unwrap();
        let m = minimize(&dfa);
        assert_eq!(m.num_states(), 1);
        assert!(m.is_accepting(0));
    }

    #[test]
    fn minimize_empty_language() {
        let dfa = Dfa::new(ab(), 2, 0, [], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m = minimize(&dfa);
        assert_eq!(m.num_states(), 1);
        assert!(!m.is_accepting(0));
    }

    #[test]
    fn product_identities() {
        let p = parity();
        let twice = product(&Decomposition::new(vec![p.clone(), p.clone()]).unwrap());
        assert!(equivalent(&twice, &p));
        assert_eq!(twice.num_states(), 2);
        let with_universal = product(&Decomposition::new(vec![Dfa::universal(ab()), p.clone()]).unwrap());
        assert!(equivalent(&with_universal, &p));
    }

    #[test]
    fn equivalence_detects_difference() {
        let odd = Dfa::from_fn(ab(), 2, 0, [1], |q, s| if s == Symbol(0) { 1 - q } else { q }).unwrap();
        assert!(!equivalent(&odd, &parity()));
    }
}
