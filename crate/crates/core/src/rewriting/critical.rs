//! Critical pairs between instantiated rules and the bounded local-confluence
//! check built on them.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::{RewriteError, RewriteSystem};
use crate::words::{generalize, Template, Word};

/// Default largest parameter value instantiated when checking confluence.
pub const DEFAULT_I_BOUND: u32 = 8;

/// A rule together with a parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleInstance {
    pub rule: usize,
    pub i: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverlapKind {
    /// A suffix of the left instance is a proper prefix of the right one.
    ProperOverlap,
    /// The right instance occurs inside the left one.
    Inclusion,
}

/// Two one-step rewrites of the same source word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub source: Word,
    pub left_result: Word,
    pub right_result: Word,
    pub kind: OverlapKind,
    pub left: RuleInstance,
    pub right: RuleInstance,
    /// Overlap length for proper overlaps, match position for inclusions.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnjoinablePair {
    pub pair: CriticalPair,
    pub left_normal: Word,
    pub right_normal: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamRelation {
    Equal,
    Different,
    /// At least one of the two rules has no parameter.
    Unparameterized,
}

/// Critical pairs grouped by the rules involved, with the source words
/// generalized back into a parameterized shape where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapShape {
    pub left_rule: usize,
    pub right_rule: usize,
    pub kind: OverlapKind,
    pub params: ParamRelation,
    pub count: usize,
    pub shape: Option<Template>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LocallyConfluentUpToBound,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub bound: u32,
    pub examined: usize,
    pub unjoinable: Vec<UnjoinablePair>,
    pub verdict: Verdict,
    pub shapes: Vec<OverlapShape>,
    /// Pairs whose two rule instances use different parameter values.
    pub mismatched_params: usize,
}

fn relation(sys: &RewriteSystem, a: RuleInstance, b: RuleInstance) -> ParamRelation {
    let rules = sys.rules();
    if !rules[a.rule].is_parametric() || !rules[b.rule].is_parametric() {
        ParamRelation::Unparameterized
    } else if a.i == b.i {
        ParamRelation::Equal
    } else {
        ParamRelation::Different
    }
}

impl RewriteSystem {
    /// All proper-overlap and inclusion superpositions between rule
    /// instances with parameter at most `i_bound`, deduplicated by source and
    /// result pair.
    pub fn critical_pairs(&self, i_bound: u32) -> Result<Vec<CriticalPair>, RewriteError> {
        let min = self.max_param_min();
        if i_bound < min {
            return Err(RewriteError::BoundTooSmall {
                bound: i_bound,
                min,
            });
        }
        let mut instances = Vec::new();
        for (idx, rule) in self.rules().iter().enumerate() {
            for i in rule.params_up_to(i_bound) {
                let (l, r) = rule.instance(i)?;
                instances.push((RuleInstance { rule: idx, i }, l, r));
            }
        }

        let mut seen: HashSet<(Word, Word, Word)> = HashSet::new();
        let mut out = Vec::new();
        let mut push = |pair: CriticalPair, out: &mut Vec<CriticalPair>| {
            let (x, y) = if pair.left_result <= pair.right_result {
                (pair.left_result.clone(), pair.right_result.clone())
            } else {
                (pair.right_result.clone(), pair.left_result.clone())
            };
            if seen.insert((pair.source.clone(), x, y)) {
                out.push(pair);
            }
        };

        for (a, al, ar) in &instances {
            for (b, bl, br) in &instances {
                let (la, lb) = (al.letters(), bl.letters());
                for k in 1..la.len().min(lb.len()) {
                    if la[la.len() - k..] != lb[..k] {
                        continue;
                    }
                    let tail = bl.factor(k, bl.len());
                    push(
                        CriticalPair {
                            source: al.concat(&tail),
                            left_result: ar.concat(&tail),
                            right_result: al.prefix(al.len() - k).concat(br),
                            kind: OverlapKind::ProperOverlap,
                            left: *a,
                            right: *b,
                            offset: k,
                        },
                        &mut out,
                    );
                }
                if a == b || lb.len() > la.len() {
                    continue;
                }
                for p in 0..=la.len() - lb.len() {
                    if la[p..p + lb.len()] != *lb {
                        continue;
                    }
                    let right = al
                        .prefix(p)
                        .concat(br)
                        .concat(&al.factor(p + lb.len(), al.len()));
                    push(
                        CriticalPair {
                            source: al.clone(),
                            left_result: ar.clone(),
                            right_result: right,
                            kind: OverlapKind::Inclusion,
                            left: *a,
                            right: *b,
                            offset: p,
                        },
                        &mut out,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Tests every critical pair up to `i_bound` for joinability by comparing
    /// normal forms of the two results.
    pub fn check_local_confluence(&self, i_bound: u32) -> Result<ConfluenceReport, RewriteError> {
        self.require_length_reducing()?;
        let pairs = self.critical_pairs(i_bound)?;
        let verdicts: Vec<Option<(Word, Word)>> = pairs
            .par_iter()
            .map(|p| {
                let l = self.normal_form(&p.left_result)?;
                let r = self.normal_form(&p.right_result)?;
                Ok::<_, RewriteError>((l != r).then_some((l, r)))
            })
            .collect::<Result<_, _>>()?;
        let unjoinable: Vec<UnjoinablePair> = pairs
            .iter()
            .zip(verdicts)
            .filter_map(|(p, v)| {
                v.map(|(l, r)| UnjoinablePair {
                    pair: p.clone(),
                    left_normal: l,
                    right_normal: r,
                })
            })
            .collect();
        let mismatched_params = pairs
            .iter()
            .filter(|p| relation(self, p.left, p.right) == ParamRelation::Different)
            .count();
        Ok(ConfluenceReport {
            bound: i_bound,
            examined: pairs.len(),
            verdict: if unjoinable.is_empty() {
                Verdict::LocallyConfluentUpToBound
            } else {
                Verdict::Refuted
            },
            unjoinable,
            shapes: self.overlap_shapes(&pairs),
            mismatched_params,
        })
    }

    fn overlap_shapes(&self, pairs: &[CriticalPair]) -> Vec<OverlapShape> {
        type Key = (usize, usize, OverlapKind, ParamRelation);
        let mut groups: BTreeMap<Key, Vec<&CriticalPair>> = BTreeMap::new();
        for p in pairs {
            let key = (
                p.left.rule,
                p.right.rule,
                p.kind,
                relation(self, p.left, p.right),
            );
            groups.entry(key).or_default().push(p);
        }
        groups
            .into_iter()
            .map(|((left_rule, right_rule, kind, params), members)| {
                let mut values: Vec<u32> = members.iter().map(|p| p.left.i).collect();
                values.sort_unstable();
                values.dedup();
                let shape = if params == ParamRelation::Equal && values.len() == members.len() {
                    let family: Vec<(u32, Word)> = members
                        .iter()
                        .map(|p| (p.left.i, p.source.clone()))
                        .collect();
                    generalize(&family)
                } else if members.len() == 1 {
                    Some(Template::word(members[0].source.clone()))
                } else {
                    None
                };
                OverlapShape {
                    left_rule,
                    right_rule,
                    kind,
                    params,
                    count: members.len(),
                    shape,
                }
            })
            .collect()
    }
}

/// A length-reducing system whose critical pairs were all found joinable up
/// to the recorded bound. Equality queries are only answered through this
/// type.
#[derive(Debug, Clone)]
pub struct CompleteSystem {
    system: RewriteSystem,
    evidence: ConfluenceReport,
}

impl CompleteSystem {
    pub fn certify(system: RewriteSystem, i_bound: u32) -> Result<Self, RewriteError> {
        let evidence = system.check_local_confluence(i_bound)?;
        if let Some(first) = evidence.unjoinable.first() {
            return Err(RewriteError::NotConfluent {
                bound: i_bound,
                unjoinable: evidence.unjoinable.len(),
                source_word: first.pair.source.clone(),
            });
        }
        Ok(CompleteSystem { system, evidence })
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn evidence(&self) -> &ConfluenceReport {
        &self.evidence
    }

    pub fn bound(&self) -> u32 {
        self.evidence.bound
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.system
            .normal_form(w)
            .expect("certified systems are length-reducing")
    }

    /// Decides `u = v` in the presented monoid by comparing normal forms.
    pub fn equal_in_monoid(&self, u: &Word, v: &Word) -> bool {
        u == v || self.normal_form(u) == self.normal_form(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::Rule;
    use crate::words::{Alphabet, ParamPattern, Segment};

    fn c(s: &str) -> Segment {
        Segment::Const(Word::from(s))
    }

    fn t2() -> RewriteSystem {
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

    fn constant_special(words: &[&str]) -> RewriteSystem {
        let rules = words
            .iter()
            .map(|s| Rule::special(ParamPattern::constant(Word::from(*s)).unwrap()))
            .collect();
        RewriteSystem::new(Alphabet::new(['a', 'b', 'c']).unwrap(), rules).unwrap()
    }

    #[test]
    fn t2_overlaps_are_triple_blocks() {
        let pairs = t2().critical_pairs(2).unwrap();
        let sources: Vec<Word> = pairs.iter().map(|p| p.source.clone()).collect();
        assert!(sources.contains(&Word::from("abcabcabc")));
        assert!(sources.contains(&Word::from("abbcabbcabbc")));
        let p = pairs
            .iter()
            .find(|p| p.source == Word::from("abcabcabc"))
            .unwrap();
        assert_eq!(p.left_result, Word::from("abc"));
        assert_eq!(p.right_result, Word::from("abc"));
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn self_overlap_free_rule_has_no_pairs() {
        assert!(constant_special(&["ab"])
            .critical_pairs(1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn refuted_inclusion() {
        let report = constant_special(&["aba", "ab"])
            .check_local_confluence(1)
            .unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        let bad = report
            .unjoinable
            .iter()
            .find(|u| u.pair.source == Word::from("aba"))
            .unwrap();
        let mut nfs = [bad.left_normal.clone(), bad.right_normal.clone()];
        nfs.sort();
        assert_eq!(nfs, [Word::empty(), Word::from("a")]);
    }

    #[test]
    fn bound_below_minimum_is_rejected() {
        let lhs = ParamPattern::new(vec![c("a"), Segment::Param('b'), c("c")], 3).unwrap();
        let sys = RewriteSystem::new(
            Alphabet::new(['a', 'b', 'c']).unwrap(),
            vec![Rule::special(lhs)],
        )
        .unwrap();
        assert_eq!(
            sys.critical_pairs(2),
            Err(RewriteError::BoundTooSmall { bound: 2, min: 3 })
        );
    }

    #[test]
    fn t2_report_shape() {
        let report = t2().check_local_confluence(8).unwrap();
        assert_eq!(report.verdict, Verdict::LocallyConfluentUpToBound);
        assert_eq!(report.examined, 8);
        assert_eq!(report.mismatched_params, 0);
        assert_eq!(report.shapes.len(), 1);
        let shape = report.shapes[0].shape.as_ref().unwrap();
        assert_eq!(shape.to_string(), "a b^i c a b^i c a b^i c");
    }

    #[test]
    fn certification_gates_equality() {
        let err = CompleteSystem::certify(constant_special(&["aba", "ab"]), 1).unwrap_err();
        assert!(matches!(err, RewriteError::NotConfluent { .. }));
        let sys = CompleteSystem::certify(t2(), 8).unwrap();
        assert!(sys.equal_in_monoid(&Word::from("abcabc"), &Word::empty()));
        assert!(!sys.equal_in_monoid(&Word::from("abc"), &Word::from("abbc")));
        assert!(sys.equal_in_monoid(&Word::from("ab"), &Word::from("ab")));
    }
}
