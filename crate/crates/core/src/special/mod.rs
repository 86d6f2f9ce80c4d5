//! Units of monoids given by complete rewriting systems: invertibility
//! witnesses, minimal invertible factorizations, the minimal-word code and
//! the presentation of the group of units it generates.

mod lambda;
mod units;

pub use lambda::{
    check_biprefix, compute_lambda, minimal_factorization, AffixKind, BiprefixReport,
    LambdaElement, MinimalFactorization, MinimalWordSet, Violation,
};
pub use units::{
    classify_units, units_presentation, FactorCount, FiniteGroup, GenTerm, ParamUse, Relator,
    UnitsPresentation, UnitsStructure,
};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::rewriting::{CompleteSystem, RewriteSystem};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error("{word} is not invertible (no witness within bound {bound})")]
    NotInvertible { word: Word, bound: usize },
    #[error("no invertible prefix of {remaining} found within bound {bound}")]
    Inconclusive { remaining: Word, bound: usize },
    #[error("minimal-word set is not a biprefix code: {0}")]
    NotBiprefix(String),
    #[error("rule {rule} at parameter {i} does not decode over the minimal words: {word}")]
    DecodeFailure { rule: usize, i: u32, word: Word },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// Witness words certifying invertibility of a word on one or both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibilityWitness {
    pub side: Side,
    /// `w · right` reduces to the empty word.
    pub right: Option<Word>,
    /// `left · w` reduces to the empty word.
    pub left: Option<Word>,
    pub bound: usize,
}

/// Twice the longest left-hand side instance with parameter at most
/// `i_bound`.
pub fn default_witness_bound(sys: &RewriteSystem, i_bound: u32) -> usize {
    2 * sys
        .rules()
        .iter()
        .map(|r| {
            r.lhs().len_at(if r.is_parametric() {
                i_bound
            } else {
                r.param_min()
            })
        })
        .max()
        .unwrap_or(0)
}

/// Shortest-witness search. States are irreducible words; from a state
/// `s = s0 s1`, appending the rest `q` of a left-hand side instance `s1 q`
/// leads to `nf(s0 r)` at cost `|q|`. The first rewrite that reaches into
/// `s` always has this form, so the search is exact up to `bound`.
struct InverseSearch<'a> {
    sys: &'a CompleteSystem,
    mirrored: bool,
}

impl InverseSearch<'_> {
    fn normalize(&self, w: &Word) -> Word {
        if self.mirrored {
            self.sys.normal_form(&w.reversed()).reversed()
        } else {
            self.sys.normal_form(w)
        }
    }

    fn run(&self, start: &Word, bound: usize) -> Option<Word> {
        let origin = self.normalize(start);
        if origin.is_empty() {
            return Some(Word::empty());
        }
        let max_len = origin.len() + bound;
        let mut by_first: HashMap<char, Vec<(Word, Word)>> = HashMap::new();
        for (_, l, r) in self.sys.system().instances_up_to_len(max_len) {
            let (l, r) = if self.mirrored {
                (l.reversed(), r.reversed())
            } else {
                (l, r)
            };
            by_first.entry(l.letters()[0]).or_default().push((l, r));
        }

        let mut dist: HashMap<Word, usize> = HashMap::new();
        let mut parent: HashMap<Word, (Word, Word)> = HashMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(origin.clone(), 0);
        heap.push(Reverse((0usize, origin)));

        while let Some(Reverse((d, state))) = heap.pop() {
            if dist.get(&state).is_some_and(|&best| best < d) {
                continue;
            }
            if state.is_empty() {
                let mut pieces = Vec::new();
                let mut cur = state;
                while let Some((prev, q)) = parent.get(&cur) {
                    pieces.push(q.clone());
                    cur = prev.clone();
                }
                return Some(
                    pieces
                        .iter()
                        .rev()
                        .fold(Word::empty(), |acc, q| acc.concat(q)),
                );
            }
            let letters = state.letters();
            for k in 0..letters.len() {
                let tail = &letters[k..];
                let Some(candidates) = by_first.get(&tail[0]) else {
                    continue;
                };
                for (l, r) in candidates {
                    if l.len() <= tail.len() || !l.letters().starts_with(tail) {
                        continue;
                    }
                    let cost = d + l.len() - tail.len();
                    if cost > bound {
                        continue;
                    }
                    let next = self.normalize(&state.prefix(k).concat(r));
                    if dist.get(&next).is_some_and(|&best| best <= cost) {
                        continue;
                    }
                    dist.insert(next.clone(), cost);
                    parent.insert(next.clone(), (state.clone(), l.factor(tail.len(), l.len())));
                    heap.push(Reverse((cost, next)));
                }
            }
        }
        None
    }
}

/// Shortest `w'` with `|w'| <= bound` and `w w' = 1`.
pub fn right_inverse(sys: &CompleteSystem, w: &Word, bound: usize) -> Option<Word> {
    let found = InverseSearch {
        sys,
        mirrored: false,
    }
    .run(w, bound)?;
    debug_assert!(sys.normal_form(&w.concat(&found)).is_empty());
    Some(found)
}

/// Shortest `w'` with `|w'| <= bound` and `w' w = 1`.
pub fn left_inverse(sys: &CompleteSystem, w: &Word, bound: usize) -> Option<Word> {
    let found = InverseSearch {
        sys,
        mirrored: true,
    }
    .run(&w.reversed(), bound)?
    .reversed();
    debug_assert!(sys.normal_form(&found.concat(w)).is_empty());
    Some(found)
}

/// Absence means "no witness within `bound`", not a proof of
/// non-invertibility.
pub fn is_right_invertible(
    sys: &CompleteSystem,
    w: &Word,
    bound: usize,
) -> Option<InvertibilityWitness> {
    right_inverse(sys, w, bound).map(|right| InvertibilityWitness {
        side: Side::Right,
        right: Some(right),
        left: None,
        bound,
    })
}

pub fn is_left_invertible(
    sys: &CompleteSystem,
    w: &Word,
    bound: usize,
) -> Option<InvertibilityWitness> {
    left_inverse(sys, w, bound).map(|left| InvertibilityWitness {
        side: Side::Left,
        right: None,
        left: Some(left),
        bound,
    })
}

pub fn is_invertible(sys: &CompleteSystem, w: &Word, bound: usize) -> Option<InvertibilityWitness> {
    let right = right_inverse(sys, w, bound)?;
    let left = left_inverse(sys, w, bound)?;
    Some(InvertibilityWitness {
        side: Side::TwoSided,
        right: Some(right),
        left: Some(left),
        bound,
    })
}
