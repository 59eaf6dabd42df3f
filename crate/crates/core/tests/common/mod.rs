#![allow(dead_code)]

use std::path::PathBuf;

use defcheck::formula::Formula;
use defcheck::seqspace::Sequence;
use defcheck::tuples::{all_tuples, Table};
use defcheck::Structure;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load(name: &str) -> Structure {
    std::fs::read_to_string(fixture(name))
        .unwrap()
        .parse()
        .unwrap()
}

pub fn random_table(rng: &mut TestRng, n: usize, arity: usize, density: f64) -> Vec<Vec<usize>> {
    all_tuples(n, arity)
        .filter(|_| rng.gen_bool(density))
        .collect()
}

/// `n ∈ [1, max_n]`, one or two relations of arity ≤ 2, target arity ≤ 2.
pub fn random_structure(rng: &mut TestRng, max_n: usize) -> Structure {
    let n = rng.gen_range(1..=max_n);
    let mut b = Structure::builder(n);
    let relations = rng.gen_range(1..=2);
    for name in ["P", "Q"].into_iter().take(relations) {
        let arity = rng.gen_range(1..=2);
        let density = rng.gen_range(0.1..0.7);
        let rows = random_table(rng, n, arity, density);
        b = b.relation(name, arity, rows);
    }
    let arity = rng.gen_range(1..=2);
    let density = rng.gen_range(0.1..0.7);
    let rows = random_table(rng, n, arity, density);
    b.target("T", arity, rows).build().unwrap()
}

/// Every structure with `n ≤ 3`, one binary relation and a unary target.
pub fn exhaustive_small() -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let pairs: Vec<Vec<usize>> = all_tuples(n, 2).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let rel: Vec<Vec<usize>> = (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i].clone())
                .collect();
            for tmask in 0u32..(1 << n) {
                let target: Vec<[usize; 1]> = (0..n)
                    .filter(|i| tmask >> i & 1 == 1)
                    .map(|i| [i])
                    .collect();
                out.push(
                    Structure::builder(n)
                        .relation("E", 2, rel.clone())
                        .target("T", 1, target)
                        .build()
                        .unwrap(),
                );
            }
        }
    }
    out
}

/// Random formula with free variables among `x0..x(free-1)` and quantifier
/// rank at most `rank`; atoms range over the full signature.
pub fn random_formula(
    rng: &mut TestRng,
    s: &Structure,
    free: usize,
    rank: usize,
    size: usize,
) -> Formula {
    let symbols: Vec<(String, usize)> = s
        .full_signature()
        .symbols()
        .iter()
        .map(|sym| (sym.name.clone(), sym.arity))
        .collect();
    gen_formula(rng, &symbols, free.max(1), rank, size)
}

fn gen_formula(
    rng: &mut TestRng,
    symbols: &[(String, usize)],
    vars: usize,
    rank: usize,
    size: usize,
) -> Formula {
    let leaf = size <= 1 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => {
                if rng.gen_bool(0.5) {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            1..=3 => Formula::Eq(rng.gen_range(0..vars), rng.gen_range(0..vars)),
            _ => {
                let (name, arity) = symbols.choose(rng).unwrap();
                let args = (0..*arity).map(|_| rng.gen_range(0..vars)).collect();
                Formula::Atom(name.clone(), args)
            }
        };
    }
    let choice = rng.gen_range(0..if rank > 0 { 6 } else { 4 });
    let sub = size - 1;
    match choice {
        0 => Formula::not(gen_formula(rng, symbols, vars, rank, sub)),
        1..=3 => {
            let left = gen_formula(rng, symbols, vars, rank, sub / 2);
            let right = gen_formula(rng, symbols, vars, rank, sub - sub / 2);
            match choice {
                1 => Formula::and(left, right),
                2 => Formula::or(left, right),
                _ => Formula::implies(left, right),
            }
        }
        _ => {
            // quantify either a fresh variable or an existing one
            let v = rng.gen_range(0..=vars);
            let body = gen_formula(rng, symbols, vars.max(v + 1), rank - 1, sub);
            if choice == 4 {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
    }
}

pub fn random_sequence(rng: &mut TestRng, n: usize, k: usize) -> Sequence {
    Sequence::new((0..k).map(|_| rng.gen_range(0..n)).collect())
}

/// Up to `count` pairwise distinct random sequences.
pub fn distinct_sequences(rng: &mut TestRng, n: usize, k: usize, count: usize) -> Vec<Sequence> {
    let mut out: Vec<Sequence> = Vec::new();
    for _ in 0..count * 4 {
        if out.len() == count {
            break;
        }
        let f = random_sequence(rng, n, k);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

pub fn table_of(s: &Structure, name: &str) -> Table {
    s.lookup(name).unwrap().clone()
}
