//! Builds ordering automata by hand and combines them with the product
//! and minimization operations.

use dfa_decomp::automata::equivalent;
use dfa_decomp::{minimize, product, Alphabet, Decomposition, Dfa};

/// Accepts words in which `before` occurs somewhere before `after`.
fn ordered(alphabet: &Alphabet, before: &str, after: &str) -> Result<Dfa, Box<dyn std::error::Error>> {
    let (b, a) = (alphabet.symbol(before)?, alphabet.symbol(after)?);
    Ok(Dfa::from_fn(alphabet.clone(), 3, 0, [2], |q, s| match q {
        0 if s == b => 1,
        1 if s == a => 2,
        q => q,
    })?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphabet = Alphabet::new(["y", "r", "b", "n"])?;
    let first = ordered(&alphabet, "y", "r")?;
    let second = ordered(&alphabet, "b", "n")?;
    let pair = Decomposition::sorted(vec![first.clone(), second.clone()])?;

    let joint = product(&pair);
    let minimal = minimize(&joint);
    println!(
        "product: {} states, minimized: {}",
        joint.num_states(),
        minimal.num_states()
    );
    assert!(equivalent(&joint, &minimal));

    for text in ["y r b n", "b y n r", "y b r", "r y b n"] {
        let word = alphabet.parse_text(text)?;
        println!(
            "{text:<10} members {}/{}  pair {}  minimized {}",
            pair.acceptance_count(&word)?,
            pair.len(),
            pair.accepts(&word)?,
            minimal.accepts(&word)?
        );
    }
    Ok(())
}
