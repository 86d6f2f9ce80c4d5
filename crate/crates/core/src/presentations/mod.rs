//! Monoid presentations by parameterized relations: the `Pi_n` and `M_n`
//! families, the group tables behind `M_n`, and a line-oriented file format.

mod format;

pub use format::{parse_presentation, render_segments, serialize_presentation};

use thiserror::Error;

use crate::rewriting::{RewriteError, RewriteSystem, Rule};
use crate::words::{Alphabet, ParamPattern, Segment, Template, WordError};

/// Parameter name used internally; `t` in input is mapped to it.
pub const CANONICAL_PARAM: char = 'i';

/// Largest `n` accepted by [`make_mn`].
pub const MAX_MN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invariant { line: usize, message: String },
    #[error("{family} needs {range}, got n = {n}")]
    OutOfRange {
        family: &'static str,
        range: &'static str,
        n: usize,
    },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A named presentation whose relations are already oriented as rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationSchema {
    pub name: String,
    pub alphabet: Alphabet,
    pub param_min: u32,
    pub rules: Vec<Rule>,
}

impl PresentationSchema {
    pub fn to_system(&self) -> Result<RewriteSystem, RewriteError> {
        let sys = RewriteSystem::new(self.alphabet.clone(), self.rules.clone())?;
        sys.require_length_reducing()?;
        Ok(sys)
    }
}

fn block(b: char) -> [Segment; 3] {
    [
        Segment::Const("a".into()),
        Segment::Param(b),
        Segment::Const("c".into()),
    ]
}

/// `Pi_n = < a, b, c | (a b^i c)^n = 1 (i >= 1) >`.
pub fn make_pi(n: usize) -> Result<PresentationSchema, PresentationError> {
    if n < 1 {
        return Err(PresentationError::OutOfRange {
            family: "Pi_n",
            range: "n >= 1",
            n,
        });
    }
    let segments = (0..n).flat_map(|_| block('b')).collect();
    Ok(PresentationSchema {
        name: format!("Pi_{n}"),
        alphabet: Alphabet::new(['a', 'b', 'c'])?,
        param_min: 1,
        rules: vec![Rule::special(ParamPattern::new(segments, 1)?)],
    })
}

/// Multiplication table of the elementary abelian 2-group of order `2^n`.
/// Elements are `0` (identity) and `1..m`, multiplied by XOR of their bit
/// vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
}

impl GroupTable {
    pub fn new(n: usize) -> Result<Self, PresentationError> {
        if !(1..=MAX_MN).contains(&n) {
            return Err(PresentationError::OutOfRange {
                family: "C2^n",
                range: "1 <= n <= 4",
                n,
            });
        }
        Ok(GroupTable { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        1 << self.n
    }

    /// `x_i x_j` as an element index, `None` for the identity.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let k = i ^ j;
        (k != 0).then_some(k)
    }

    /// Relations `x_i x_j = x_k` or `x_i x_j = 1` with `1 <= i <= j < m`.
    pub fn relations(&self) -> Vec<(usize, usize, Option<usize>)> {
        let m = self.order();
        (1..m)
            .flat_map(|i| (i..m).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.product(i, j)))
            .collect()
    }

    fn full(&self, i: usize, j: usize) -> usize {
        self.product(i, j).unwrap_or(0)
    }

    /// Associativity, commutativity and exponent two, checked exhaustively.
    pub fn satisfies_laws(&self) -> bool {
        let m = self.order();
        (0..m).all(|a| {
            self.full(a, a) == 0
                && (0..m).all(|b| {
                    self.full(a, b) == self.full(b, a)
                        && (0..m)
                            .all(|c| self.full(self.full(a, b), c) == self.full(a, self.full(b, c)))
                })
        })
    }
}

/// `M_n`: the relations of the group table of `C2^n` with `x_j` replaced by
/// `a b_j^i c`, over `a, b1, ..., b{m-1}, c`. Both products `x_i x_j` and
/// `x_j x_i` become rules.
pub fn make_mn(n: usize) -> Result<PresentationSchema, PresentationError> {
    let table = GroupTable::new(n).map_err(|_| PresentationError::OutOfRange {
        family: "M_n",
        range: "1 <= n <= 4",
        n,
    })?;
    let m = table.order();
    let mut names = vec!["a".to_string()];
    names.extend((1..m).map(|j| format!("b{j}")));
    names.push("c".to_string());
    let alphabet = Alphabet::from_names(&names)?;
    let b = |j: usize| alphabet.symbol(&format!("b{j}")).expect("declared letter");
    let mut rules = Vec::new();
    for i in 1..m {
        for j in 1..m {
            let lhs: Vec<Segment> = block(b(i)).into_iter().chain(block(b(j))).collect();
            let rhs = match table.product(i, j) {
                Some(k) => Template::new(block(b(k)).to_vec()),
                None => Template::empty(),
            };
            rules.push(Rule::new(ParamPattern::new(lhs, 1)?, rhs));
        }
    }
    Ok(PresentationSchema {
        name: format!("M_{n}"),
        alphabet,
        param_min: 1,
        rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::CompleteSystem;
    use crate::words::Word;

    #[test]
    fn pi_builder() {
        for n in 1..=3 {
            let s = make_pi(n).unwrap();
            assert_eq!(s.rules.len(), 1);
            let (l, r) = s.rules[0].instance(2).unwrap();
            assert_eq!(l, Word::from("abbc".repeat(n).as_str()));
            assert!(r.is_empty());
        }
        assert!(make_pi(0).is_err());
    }

    #[test]
    fn group_table_laws() {
        for n in 1..=4 {
            let t = GroupTable::new(n).unwrap();
            assert!(t.satisfies_laws());
            let m = t.order();
            assert_eq!(t.relations().len(), m * (m - 1) / 2);
        }
        assert!(GroupTable::new(0).is_err());
        assert!(GroupTable::new(5).is_err());
    }

    #[test]
    fn mn_shapes() {
        let m2 = make_mn(2).unwrap();
        assert_eq!(m2.alphabet.len(), 5);
        assert_eq!(m2.rules.len(), 9);
        assert_eq!(GroupTable::new(2).unwrap().relations().len(), 6);
        let b = |j: usize| m2.alphabet.symbol(&format!("b{j}")).unwrap();
        // x1 x2 -> x3 at t = 2
        let x1x2 = Word::from_letters(vec!['a', b(1), 'c', 'a', b(2), 'c']);
        let r = m2
            .rules
            .iter()
            .find(|r| r.instance(1).unwrap().0 == x1x2)
            .unwrap();
        let (l, rhs) = r.instance(2).unwrap();
        assert_eq!(l.len(), 8);
        assert_eq!(rhs, Word::from_letters(vec!['a', b(3), b(3), 'c']));
        assert!(m2.to_system().unwrap().is_length_reducing());
        assert!(make_mn(5).is_err());
    }

    #[test]
    fn m1_is_pi2_renamed() {
        let m1 = make_mn(1).unwrap();
        let pi2 = make_pi(2).unwrap();
        let b1 = m1.alphabet.symbol("b1").unwrap();
        assert_eq!(m1.rules.len(), 1);
        for i in 1..=5 {
            let (l, r) = m1.rules[0].instance(i).unwrap();
            let renamed: Word = l
                .letters()
                .iter()
                .map(|&x| if x == b1 { 'b' } else { x })
                .collect();
            assert_eq!((renamed, r), pi2.rules[0].instance(i).unwrap());
        }
    }

    #[test]
    fn m2_is_complete_up_to_bound() {
        let sys = make_mn(2).unwrap().to_system().unwrap();
        let report = sys.check_local_confluence(4).unwrap();
        assert!(report.unjoinable.is_empty());
        assert!(CompleteSystem::certify(sys, 4).is_ok());
    }
}
