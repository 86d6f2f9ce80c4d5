//! String rewriting over schema rules: one-step reduction, normal forms,
//! critical pairs and bounded local-confluence checking.

mod critical;

pub use critical::{
    CompleteSystem, ConfluenceReport, CriticalPair, OverlapKind, OverlapShape, ParamRelation,
    RuleInstance, UnjoinablePair, Verdict, DEFAULT_I_BOUND,
};

use thiserror::Error;

use crate::words::{Alphabet, ParamPattern, Template, Word, WordError};

/// Default cap on recorded reduction steps.
pub const DEFAULT_TRACE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("rule {rule} is not length-reducing, so termination is not guaranteed")]
    NotLengthReducing { rule: usize },
    #[error("rule {rule} does not have a monadic right-hand side")]
    NotMonadic { rule: usize },
    #[error("instantiation bound {bound} is below the parameter minimum {min}")]
    BoundTooSmall { bound: u32, min: u32 },
    #[error(
        "local confluence refuted at bound {bound}: {unjoinable} unjoinable critical pair(s), \
         first with source {source_word}"
    )]
    NotConfluent {
        bound: u32,
        unjoinable: usize,
        source_word: Word,
    },
    #[error("reduction exceeded {steps} steps on a length-reducing system")]
    StepLimit { steps: usize },
}

/// A schema rule `lhs(i) -> rhs(i)` for every admissible `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    lhs: ParamPattern,
    rhs: Template,
}

impl Rule {
    pub fn new(lhs: ParamPattern, rhs: Template) -> Self {
        Rule { lhs, rhs }
    }

    /// `lhs -> 1`.
    pub fn special(lhs: ParamPattern) -> Self {
        Rule {
            lhs,
            rhs: Template::empty(),
        }
    }

    pub fn lhs(&self) -> &ParamPattern {
        &self.lhs
    }

    pub fn rhs(&self) -> &Template {
        &self.rhs
    }

    pub fn param_min(&self) -> u32 {
        self.lhs.param_min()
    }

    pub fn is_parametric(&self) -> bool {
        self.lhs.param_count() > 0 || self.rhs.param_count() > 0
    }

    pub fn is_special(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn is_monadic(&self) -> bool {
        self.rhs.param_count() == 0 && self.rhs.const_len() <= 1
    }

    /// `|lhs(i)| > |rhs(i)|` for every admissible `i`. Both lengths are
    /// affine in `i`, so checking the smallest value and the slopes suffices.
    pub fn is_length_reducing(&self) -> bool {
        let min = self.param_min();
        self.lhs.param_count() >= self.rhs.param_count()
            && self.lhs.len_at(min) > self.rhs.len_at(min)
    }

    /// Parameter values up to `bound`; a rule without parameters has one
    /// instance.
    pub fn params_up_to(&self, bound: u32) -> std::ops::RangeInclusive<u32> {
        let min = self.param_min();
        if self.is_parametric() {
            min..=bound
        } else {
            min..=min
        }
    }

    pub fn instance(&self, i: u32) -> Result<(Word, Word), WordError> {
        Ok((self.lhs.instantiate(i)?, self.rhs.instantiate(i)))
    }
}

/// One rule application: the rule instance matched at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Redex {
    pub start: usize,
    pub length: usize,
    pub rule: usize,
    pub i: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub redex: Redex,
    pub result: Word,
}

/// A recorded reduction to normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub normal_form: Word,
    pub steps: Vec<Step>,
    pub total_steps: usize,
    pub truncated: bool,
}

/// A finite set of schema rules over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
}

impl RewriteSystem {
    pub fn new(alphabet: Alphabet, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        for rule in &rules {
            for l in rule.lhs.letters().chain(rule.rhs.letters()) {
                if !alphabet.contains(l) {
                    return Err(WordError::UnknownLetter(l.to_string()).into());
                }
            }
        }
        Ok(RewriteSystem { alphabet, rules })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_special(&self) -> bool {
        self.rules.iter().all(Rule::is_special)
    }

    pub fn is_monadic(&self) -> bool {
        self.rules.iter().all(Rule::is_monadic)
    }

    pub fn is_length_reducing(&self) -> bool {
        self.rules.iter().all(Rule::is_length_reducing)
    }

    pub fn max_param_min(&self) -> u32 {
        self.rules.iter().map(Rule::param_min).max().unwrap_or(1)
    }

    pub fn require_length_reducing(&self) -> Result<(), RewriteError> {
        match self.rules.iter().position(|r| !r.is_length_reducing()) {
            Some(rule) => Err(RewriteError::NotLengthReducing { rule }),
            None => Ok(()),
        }
    }

    /// All rule instances whose left-hand side has at most `max_len` letters.
    pub fn instances_up_to_len(&self, max_len: usize) -> Vec<(RuleInstance, Word, Word)> {
        let mut out = Vec::new();
        for (idx, rule) in self.rules.iter().enumerate() {
            let min = rule.param_min();
            let mut i = min;
            loop {
                if rule.lhs.len_at(i) > max_len {
                    break;
                }
                let (l, r) = rule.instance(i).expect("i >= param_min");
                out.push((RuleInstance { rule: idx, i }, l, r));
                if !rule.is_parametric() {
                    break;
                }
                i += 1;
            }
        }
        out
    }

    /// Every redex in `w`, ordered by start, then rule index.
    pub fn redexes(&self, w: &Word) -> Vec<Redex> {
        let letters = w.letters();
        let mut out = Vec::new();
        for start in 0..=letters.len() {
            for (rule, r) in self.rules.iter().enumerate() {
                if let Some(m) = r.lhs.match_at(letters, start) {
                    out.push(Redex {
                        start,
                        length: m.length,
                        rule,
                        i: m.i,
                    });
                }
            }
        }
        out
    }

    fn leftmost_redex(&self, w: &Word) -> Option<Redex> {
        let letters = w.letters();
        for start in 0..letters.len() {
            for (rule, r) in self.rules.iter().enumerate() {
                if let Some(m) = r.lhs.match_at(letters, start) {
                    return Some(Redex {
                        start,
                        length: m.length,
                        rule,
                        i: m.i,
                    });
                }
            }
        }
        None
    }

    /// Replaces the factor covered by `redex` with the rule's right-hand side.
    pub fn apply(&self, w: &Word, redex: &Redex) -> Word {
        let rhs = self.rules[redex.rule].rhs.instantiate(redex.i);
        let letters = w.letters();
        let mut out = Vec::with_capacity(letters.len() - redex.length + rhs.len());
        out.extend_from_slice(&letters[..redex.start]);
        out.extend_from_slice(rhs.letters());
        out.extend_from_slice(&letters[redex.start + redex.length..]);
        Word::from_letters(out)
    }

    /// One rewrite at the leftmost redex (lowest rule index, then smallest
    /// `i`), or `None` if `w` is irreducible.
    pub fn reduce_once(&self, w: &Word) -> Option<Step> {
        let redex = self.leftmost_redex(w)?;
        let result = self.apply(w, &redex);
        Some(Step { redex, result })
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.leftmost_redex(w).is_none()
    }

    /// Leftmost reduction to an irreducible word.
    pub fn normal_form(&self, w: &Word) -> Result<Word, RewriteError> {
        self.require_length_reducing()?;
        let mut current = w.clone();
        // Each step shortens the word, so |w| steps always suffice.
        for _ in 0..=w.len() {
            match self.reduce_once(&current) {
                Some(step) => current = step.result,
                None => return Ok(current),
            }
        }
        Err(RewriteError::StepLimit { steps: w.len() + 1 })
    }

    /// [`normal_form`](Self::normal_form) keeping the first `cap` steps.
    pub fn normal_form_traced(&self, w: &Word, cap: usize) -> Result<Reduction, RewriteError> {
        self.require_length_reducing()?;
        let mut current = w.clone();
        let mut steps = Vec::new();
        let mut total = 0usize;
        while let Some(step) = self.reduce_once(&current) {
            total += 1;
            if total > w.len() {
                return Err(RewriteError::StepLimit { steps: total });
            }
            current = step.result.clone();
            if steps.len() < cap {
                steps.push(step);
            }
        }
        Ok(Reduction {
            normal_form: current,
            truncated: total > steps.len(),
            steps,
            total_steps: total,
        })
    }

    /// Reduces `w` choosing among all current redexes with `choose`, which
    /// receives the candidate count and returns an index. Returns the
    /// irreducible result and the number of steps taken.
    pub fn reduce_with<F>(&self, w: &Word, mut choose: F) -> Result<(Word, usize), RewriteError>
    where
        F: FnMut(usize) -> usize,
    {
        self.require_length_reducing()?;
        let mut current = w.clone();
        let mut steps = 0usize;
        loop {
            let redexes = self.redexes(&current);
            if redexes.is_empty() {
                return Ok((current, steps));
            }
            let pick = choose(redexes.len()).min(redexes.len() - 1);
            current = self.apply(&current, &redexes[pick]);
            steps += 1;
            if steps > w.len() {
                return Err(RewriteError::StepLimit { steps });
            }
        }
    }

    /// Single left-to-right pass keeping an irreducible stack. Whenever a
    /// left-hand side instance becomes a suffix of the stack it is replaced by
    /// the (at most one letter) right-hand side.
    pub fn incremental_normal_form(&self, w: &Word) -> Result<Word, RewriteError> {
        if let Some(rule) = self.rules.iter().position(|r| !r.is_monadic()) {
            return Err(RewriteError::NotMonadic { rule });
        }
        self.require_length_reducing()?;
        let mut stack: Vec<char> = Vec::with_capacity(w.len());
        for &letter in w.letters() {
            stack.push(letter);
            'suffix: loop {
                for rule in &self.rules {
                    if let Some(m) = rule.lhs.match_suffix(&stack) {
                        stack.truncate(m.start);
                        let rhs = rule.rhs.instantiate(m.i);
                        stack.extend_from_slice(rhs.letters());
                        continue 'suffix;
                    }
                }
                break;
            }
        }
        Ok(Word::from_letters(stack))
    }

    /// The system with every rule read right to left.
    pub fn reversed_instances(&self, max_len: usize) -> Vec<(RuleInstance, Word, Word)> {
        self.instances_up_to_len(max_len)
            .into_iter()
            .map(|(inst, l, r)| (inst, l.reversed(), r.reversed()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Segment;
    use proptest::prelude::*;

    fn c(s: &str) -> Segment {
        Segment::Const(Word::from(s))
    }

    pub(crate) fn t2() -> RewriteSystem {
        let lhs = ParamPattern::new(
            vec![
                c("a"),
                Segment::Param('b'),
                c("ca"),
                Segment::Param('b'),
                c("c"),
            ],
            1,
        )
        .unwrap();
        RewriteSystem::new(
            Alphabet::new(['a', 'b', 'c']).unwrap(),
            vec![Rule::special(lhs)],
        )
        .unwrap()
    }

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn classification_flags() {
        let sys = t2();
        assert!(sys.is_special() && sys.is_monadic() && sys.is_length_reducing());
        let growing = Rule::new(
            ParamPattern::constant(w("ab")).unwrap(),
            Template::word(w("abc")),
        );
        assert!(!growing.is_length_reducing());
        // rhs gains two letters per unit of i while lhs gains one.
        let slope = Rule::new(
            ParamPattern::new(vec![c("aaaa"), Segment::Param('b'), c("c")], 1).unwrap(),
            Template::new(vec![Segment::Param('b'), Segment::Param('c')]),
        );
        assert!(!slope.is_length_reducing());
    }

    #[test]
    fn reduce_once_examples() {
        let sys = t2();
        let step = sys.reduce_once(&w("abcabc")).unwrap();
        assert_eq!(step.result, Word::empty());
        assert_eq!(step.redex.i, 1);
        assert!(sys.reduce_once(&w("ababc")).is_none());
        let step = sys.reduce_once(&w("abcabcabc")).unwrap();
        assert_eq!(step.result, w("abc"));
        assert_eq!(step.redex.start, 0);
    }

    #[test]
    fn normal_form_examples() {
        let sys = t2();
        assert_eq!(sys.normal_form(&Word::empty()).unwrap(), Word::empty());
        assert_eq!(sys.normal_form(&w("abbcabbcabc")).unwrap(), w("abc"));
        assert_eq!(sys.normal_form(&w("abcabbc")).unwrap(), w("abcabbc"));
    }

    #[test]
    fn normal_form_rejects_non_length_reducing() {
        let sys = RewriteSystem::new(
            Alphabet::new(['a', 'b', 'c']).unwrap(),
            vec![Rule::new(
                ParamPattern::constant(w("ab")).unwrap(),
                Template::word(w("abc")),
            )],
        )
        .unwrap();
        assert_eq!(
            sys.normal_form(&w("ab")),
            Err(RewriteError::NotLengthReducing { rule: 0 })
        );
    }

    #[test]
    fn system_rejects_foreign_letters() {
        let res = RewriteSystem::new(
            Alphabet::new(['a', 'b']).unwrap(),
            vec![Rule::special(ParamPattern::constant(w("ax")).unwrap())],
        );
        assert!(matches!(
            res,
            Err(RewriteError::Word(WordError::UnknownLetter(_)))
        ));
    }

    #[test]
    fn incremental_examples() {
        let sys = t2();
        assert_eq!(
            sys.incremental_normal_form(&w("abcabcabc")).unwrap(),
            w("abc")
        );
        assert_eq!(
            sys.incremental_normal_form(&w("abbcabbc")).unwrap(),
            Word::empty()
        );
        assert_eq!(
            sys.incremental_normal_form(&Word::empty()).unwrap(),
            Word::empty()
        );
    }

    #[test]
    fn incremental_rejects_non_monadic() {
        let sys = RewriteSystem::new(
            Alphabet::new(['a', 'b', 'c']).unwrap(),
            vec![Rule::new(
                ParamPattern::constant(w("abc")).unwrap(),
                Template::word(w("ab")),
            )],
        )
        .unwrap();
        assert_eq!(
            sys.incremental_normal_form(&w("abc")),
            Err(RewriteError::NotMonadic { rule: 0 })
        );
    }

    #[test]
    fn trace_is_capped() {
        let sys = t2();
        let word = w("abcabc").repeat(5);
        let red = sys.normal_form_traced(&word, 2).unwrap();
        assert_eq!(red.normal_form, Word::empty());
        assert_eq!(red.total_steps, 5);
        assert_eq!(red.steps.len(), 2);
        assert!(red.truncated);
    }

    proptest! {
        #[test]
        fn normal_form_is_idempotent(s in "[abc]{0,20}") {
            let sys = t2();
            let nf = sys.normal_form(&w(&s)).unwrap();
            prop_assert!(sys.is_irreducible(&nf));
            prop_assert_eq!(sys.normal_form(&nf).unwrap(), nf);
        }

        #[test]
        fn special_steps_shrink(s in "(abc|abbc|a|b|c){0,10}") {
            let sys = t2();
            let mut cur = w(&s);
            while let Some(step) = sys.reduce_once(&cur) {
                prop_assert!(step.result.len() < cur.len());
                cur = step.result;
            }
        }

        #[test]
        fn incremental_agrees_with_leftmost(s in "(abc|abbc|abbbc|a|b|c){0,10}") {
            let sys = t2();
            let x = w(&s);
            prop_assert_eq!(sys.incremental_normal_form(&x).unwrap(), sys.normal_form(&x).unwrap());
        }
    }
}
