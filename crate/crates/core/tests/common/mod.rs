//! Shared fixtures for integration tests: seeded random expressions over a
//! three-letter alphabet, and input enumeration.
#![allow(dead_code)]

use lexfst::regex::{oracle_best, OracleVerdict, Relation};
use lexfst::{compile, Ast, Evaluator, Policy, Symbol, Transducer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CROSSED: &str = "(('a':'d0d4') 2 ('b':'d3') 3 | ('a':'d3') 3 'b' 2):'d0'";
pub const TWO_BRANCH: &str = "'':'a' 'a' ('a':'bc') 'c' 7 | ('bd')* 9";

pub struct ExprGen {
    rng: ChaCha8Rng,
}

impl ExprGen {
    pub fn new(seed: u64) -> Self {
        ExprGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn leaf(&mut self) -> Ast {
        match self.rng.gen_range(0..20) {
            0 => Ast::Epsilon,
            1 | 2 => Ast::range('a', 'b'),
            3 | 4 => Ast::range('b', 'c'),
            _ => Ast::symbol(['a', 'b', 'c'][self.rng.gen_range(0..3)]),
        }
    }

    fn out(&mut self) -> String {
        let n = self.rng.gen_range(1..=2);
        (0..n)
            .map(|_| ['x', 'y', 'z'][self.rng.gen_range(0..3)])
            .collect()
    }

    fn weight(&mut self) -> i64 {
        self.rng.gen_range(-4..=6)
    }

    /// A core-only expression tree of depth at most `depth`.
    pub fn expr(&mut self, depth: usize) -> Ast {
        if depth == 0 || self.rng.gen_bool(0.08) {
            return self.leaf();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..12) {
            0..=2 => self.expr(d).union(self.expr(d)),
            3..=5 => self.expr(d).concat(self.expr(d)),
            6 => self.expr(d).star(),
            7 | 8 => {
                let o = self.out();
                self.expr(d).output(&o)
            }
            9 | 10 => {
                let w = self.weight();
                self.expr(d).weight_after(w)
            }
            _ => {
                let w = self.weight();
                Ast::weight_before(w, self.expr(d))
            }
        }
    }
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in alphabet {
                let mut v: Vec<Symbol> = w.clone();
                v.push(Symbol::new(c));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A machine compiled from a random expression, with its source tree.
pub struct Sample {
    pub ast: Ast,
    pub machine: Transducer,
}

/// Draws expressions until `count` of them compile and satisfy `keep`.
pub fn corpus(
    seed: u64,
    depth: usize,
    count: usize,
    keep: impl Fn(&Ast, &Transducer) -> bool,
) -> Vec<Sample> {
    let mut gen = ExprGen::new(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < count * 2000,
            "generator stalled after {} samples",
            out.len()
        );
        let ast = gen.expr(depth);
        let policy = if gen.rng().gen_bool(0.5) {
            Policy::Min
        } else {
            Policy::Max
        };
        if let Ok(machine) = compile(&ast, policy) {
            if keep(&ast, &machine) {
                out.push(Sample { ast, machine });
            }
        }
    }
    out
}

/// Disagreement between machine and oracle on one input, if any.
pub fn compare_with_oracle(
    machine: &Transducer,
    rel: &Relation,
    word: &[Symbol],
) -> Option<String> {
    let got = Evaluator::new(machine).evaluate(word);
    let want = oracle_best(rel, word, machine.policy());
    match (&got, &want) {
        (Ok(None), OracleVerdict::Reject) => None,
        (Ok(Some(a)), OracleVerdict::Output(b)) if a == b => None,
        _ => Some(format!("{got:?} vs oracle {want:?}")),
    }
}
