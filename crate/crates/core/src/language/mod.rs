//! The word problem `{ u # rev(v) : u = v in M }` as a formal language:
//! membership queries, grammars for left-hand-side languages and the slice
//! experiments on `(a b^* c)^n #`.

mod grammar;

pub use grammar::{export_lhs_grammar, grammar_member, CnfGrammar, Grammar, Production, Symbol};

use rayon::prelude::*;
use thiserror::Error;

use crate::presentations::{make_pi, PresentationError};
use crate::rewriting::{CompleteSystem, RewriteError};
use crate::words::{Alphabet, Word, WordError, SEPARATOR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("expected exactly one '{SEPARATOR}' in the query, found {found}")]
    Separator { found: usize },
    #[error(
        "{runs} synchronized parameter runs: {{ x1^i x2^i ... xn^i }} is context-free only for n <= 2"
    )]
    NotContextFree { runs: usize },
    #[error("grammar line {line}: {message}")]
    GrammarSyntax { line: usize, message: String },
    #[error("nonterminal {0} has no production")]
    UndefinedNonterminal(String),
    #[error("slice letter '{0}' is not in the alphabet")]
    MissingLetter(String),
    #[error("exponent bound must be at least 1")]
    EmptySlice,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A word `u # w` over the alphabet and the separator, read as the pair
/// `(u, rev(w))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WpQuery {
    pub raw: String,
    pub u: Word,
    pub v_rev: Word,
}

impl WpQuery {
    pub fn parse(alphabet: &Alphabet, raw: &str) -> Result<Self, LanguageError> {
        let found = raw.matches(SEPARATOR).count();
        if found != 1 {
            return Err(LanguageError::Separator { found });
        }
        let (u, v_rev) = raw.split_once(SEPARATOR).unwrap();
        Ok(WpQuery {
            raw: raw.to_string(),
            u: alphabet.parse_word(u)?,
            v_rev: alphabet.parse_word(v_rev)?,
        })
    }

    /// The query word for the pair `(u, v)`.
    pub fn of_pair(alphabet: &Alphabet, u: &Word, v: &Word) -> Self {
        let v_rev = v.reversed();
        WpQuery {
            raw: format!(
                "{}{SEPARATOR}{}",
                alphabet.render_letters(u.letters()),
                alphabet.render_letters(v_rev.letters())
            ),
            u: u.clone(),
            v_rev,
        }
    }

    pub fn v(&self) -> Word {
        self.v_rev.reversed()
    }
}

pub fn wp_member(sys: &CompleteSystem, q: &WpQuery) -> bool {
    sys.equal_in_monoid(&q.u, &q.v())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceReport {
    pub n: usize,
    pub e_bound: u32,
    pub tested: usize,
    /// Exponent tuples `e` with `a b^e1 c ... a b^en c = 1`, in
    /// lexicographic order.
    pub members: Vec<Vec<u32>>,
    pub expected: Vec<Vec<u32>>,
    pub agreement: bool,
}

fn tuples(n: usize, e_bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                (1..=e_bound).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Tests every `(a b^e1 c) ... (a b^en c) #` with `1 <= ek <= e_bound`,
/// where `a`, `b`, `c` are the given letter names.
pub fn enumerate_slice(
    sys: &CompleteSystem,
    letters: [&str; 3],
    n: usize,
    e_bound: u32,
) -> Result<SliceReport, LanguageError> {
    if e_bound < 1 {
        return Err(LanguageError::EmptySlice);
    }
    let alphabet = sys.system().alphabet();
    let [a, b, c] = letters.map(|name| {
        alphabet
            .symbol(name)
            .ok_or_else(|| LanguageError::MissingLetter(name.to_string()))
    });
    let (a, b, c) = (a?, b?, c?);
    let all = tuples(n, e_bound);
    let members: Vec<Vec<u32>> = all
        .par_iter()
        .filter(|t| {
            let mut w = Vec::new();
            for &e in t.iter() {
                w.push(a);
                w.extend(std::iter::repeat_n(b, e as usize));
                w.push(c);
            }
            sys.normal_form(&Word::from_letters(w)).is_empty()
        })
        .cloned()
        .collect();
    let expected: Vec<Vec<u32>> = all
        .iter()
        .filter(|t| t.windows(2).all(|p| p[0] == p[1]))
        .cloned()
        .collect();
    Ok(SliceReport {
        n,
        e_bound,
        tested: all.len(),
        agreement: members == expected,
        members,
        expected,
    })
}

pub fn enumerate_wp_slice(
    sys: &CompleteSystem,
    n: usize,
    e_bound: u32,
) -> Result<SliceReport, LanguageError> {
    enumerate_slice(sys, ["a", "b", "c"], n, e_bound)
}

/// Whether `Pi_n` has a context-free word problem, with the evidence this
/// crate can produce for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfVerdict {
    pub n: usize,
    pub context_free: bool,
    /// For `n <= 2`: grammar of the defining-word language.
    pub grammar: Option<Grammar>,
    /// For `n > 2`: the slice showing `n` synchronized runs.
    pub slice: Option<SliceReport>,
    /// The verdict is a known theorem; the attachments are bounded evidence.
    pub basis: &'static str,
}

pub fn cf_verdict(n: usize, e_bound: u32) -> Result<CfVerdict, LanguageError> {
    let schema = make_pi(n)?;
    if n <= 2 {
        let grammar = export_lhs_grammar(schema.rules[0].lhs())?;
        return Ok(CfVerdict {
            n,
            context_free: true,
            grammar: Some(grammar),
            slice: None,
            basis: "monadic complete system whose left-hand sides form a context-free language",
        });
    }
    let sys = CompleteSystem::certify(schema.to_system()?, e_bound.max(1))?;
    Ok(CfVerdict {
        n,
        context_free: false,
        grammar: None,
        slice: Some(enumerate_wp_slice(&sys, n, e_bound)?),
        basis: "the slice (a b^* c)^n # of the word problem is the reversal of \
                { (a b^i c)^n }, which is not context-free for n > 2 (pumping lemma)",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::make_mn;
    use crate::rewriting::{RewriteSystem, Rule};
    use crate::words::{ParamPattern, Segment};

    fn pi(n: usize) -> CompleteSystem {
        CompleteSystem::certify(make_pi(n).unwrap().to_system().unwrap(), 6).unwrap()
    }

    #[test]
    fn query_examples() {
        let t2 = pi(2);
        let abc = t2.system().alphabet();
        let member = |raw: &str| wp_member(&t2, &WpQuery::parse(abc, raw).unwrap());
        assert!(member("abcabc#"));
        assert!(member("abc#cba"));
        assert!(!member("a#"));
        assert!(member("#"));
        assert_eq!(
            WpQuery::parse(abc, "ab"),
            Err(LanguageError::Separator { found: 0 })
        );
        assert_eq!(
            WpQuery::parse(abc, "a#b#"),
            Err(LanguageError::Separator { found: 2 })
        );
        assert!(matches!(
            WpQuery::parse(abc, "ax#"),
            Err(LanguageError::Word(WordError::UnknownLetter(_)))
        ));
    }

    #[test]
    fn pair_query_round_trips() {
        let t2 = pi(2);
        let abc = t2.system().alphabet();
        let q = WpQuery::of_pair(abc, &Word::from("ab"), &Word::from("bcc"));
        assert_eq!(q.raw, "ab#ccb");
        assert_eq!(WpQuery::parse(abc, &q.raw).unwrap(), q);
        assert_eq!(q.v(), Word::from("bcc"));
    }

    #[test]
    fn slice_examples() {
        let r = enumerate_wp_slice(&pi(2), 2, 5).unwrap();
        assert_eq!(r.tested, 25);
        assert_eq!(r.members, (1..=5).map(|i| vec![i, i]).collect::<Vec<_>>());
        assert!(r.agreement);
        let r = enumerate_wp_slice(&pi(3), 3, 4).unwrap();
        assert_eq!(
            r.members,
            (1..=4).map(|i| vec![i, i, i]).collect::<Vec<_>>()
        );
        assert!(r.agreement);
    }

    #[test]
    fn slice_of_single_block_system_has_every_tuple() {
        let r = enumerate_wp_slice(&pi(1), 1, 5).unwrap();
        assert_eq!(r.members.len(), 5);
        assert!(r.agreement);
        // Two-block slices over the one-block system: every tuple is a member.
        let r = enumerate_wp_slice(&pi(1), 2, 3).unwrap();
        assert_eq!(r.members.len(), 9);
        assert!(!r.agreement);
    }

    #[test]
    fn slice_needs_the_letters() {
        let sys = RewriteSystem::new(
            Alphabet::new(['x', 'y']).unwrap(),
            vec![Rule::special(
                ParamPattern::new(vec![Segment::Const("xy".into())], 1).unwrap(),
            )],
        )
        .unwrap();
        let sys = CompleteSystem::certify(sys, 1).unwrap();
        assert_eq!(
            enumerate_wp_slice(&sys, 2, 2),
            Err(LanguageError::MissingLetter("a".to_string()))
        );
        assert_eq!(
            enumerate_wp_slice(&pi(2), 2, 0),
            Err(LanguageError::EmptySlice)
        );
    }

    #[test]
    fn mn_slices_run() {
        let sys = CompleteSystem::certify(make_mn(2).unwrap().to_system().unwrap(), 3).unwrap();
        let r = enumerate_slice(&sys, ["a", "b1", "c"], 2, 3).unwrap();
        assert!(r.agreement);
    }

    #[test]
    fn verdicts() {
        for n in [1, 2] {
            let v = cf_verdict(n, 3).unwrap();
            assert!(v.context_free);
            assert!(v.grammar.is_some() && v.slice.is_none());
        }
        let v = cf_verdict(3, 3).unwrap();
        assert!(!v.context_free);
        assert!(v.slice.unwrap().agreement);
        assert!(cf_verdict(0, 3).is_err());
    }
}
