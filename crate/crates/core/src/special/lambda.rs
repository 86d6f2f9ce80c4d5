//! Minimal invertible factors, the code they form, and decoding over it.

use super::{is_invertible, SpecialError};
use crate::rewriting::CompleteSystem;
use crate::words::{generalize, ParamPattern, RunLength, Word};

/// Decomposition of an invertible word into minimal invertible factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalFactorization {
    pub factors: Vec<Word>,
    pub bound: usize,
}

/// Greedy left-to-right factorization: repeatedly split off the shortest
/// non-empty invertible prefix. Invertibility of `w` is checked first.
pub fn minimal_factorization(
    sys: &CompleteSystem,
    w: &Word,
    bound: usize,
) -> Result<MinimalFactorization, SpecialError> {
    if is_invertible(sys, w, bound).is_none() {
        return Err(SpecialError::NotInvertible {
            word: w.clone(),
            bound,
        });
    }
    let mut factors = Vec::new();
    let mut rest = w.clone();
    while !rest.is_empty() {
        let len = (1..=rest.len())
            .find(|&n| is_invertible(sys, &rest.prefix(n), bound).is_some())
            .ok_or_else(|| SpecialError::Inconclusive {
                remaining: rest.clone(),
                bound,
            })?;
        factors.push(rest.prefix(len));
        rest = rest.factor(len, rest.len());
    }
    Ok(MinimalFactorization { factors, bound })
}

/// The set of minimal invertible factors of the defining words, as patterns
/// sharing the rule parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalWordSet {
    pub patterns: Vec<ParamPattern>,
    /// Largest parameter value used for concrete enumeration.
    pub bound: u32,
    pub warnings: Vec<String>,
}

/// One code word occurrence found while decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaElement {
    pub pattern: usize,
    /// `None` for patterns without a parameter.
    pub i: Option<u32>,
    pub word: Word,
}

impl MinimalWordSet {
    pub fn new(patterns: Vec<ParamPattern>, bound: u32) -> Self {
        MinimalWordSet {
            patterns,
            bound,
            warnings: Vec::new(),
        }
    }

    /// Every instance with parameter at most the enumeration bound.
    pub fn instances(&self) -> Vec<LambdaElement> {
        let mut out = Vec::new();
        for (idx, p) in self.patterns.iter().enumerate() {
            if p.is_constant() {
                out.push(LambdaElement {
                    pattern: idx,
                    i: None,
                    word: p.instantiate(p.param_min()).unwrap(),
                });
                continue;
            }
            for i in p.param_min()..=self.bound.max(p.param_min()) {
                out.push(LambdaElement {
                    pattern: idx,
                    i: Some(i),
                    word: p.instantiate(i).unwrap(),
                });
            }
        }
        out
    }

    /// Factorization of `w` over the code, scanning left to right. Assumes
    /// the biprefix property, under which at most one code word starts at
    /// each position.
    pub fn decode(&self, w: &Word) -> Option<Vec<LambdaElement>> {
        let letters = w.letters();
        let mut pos = 0;
        let mut out = Vec::new();
        while pos < letters.len() {
            let (idx, m) = self
                .patterns
                .iter()
                .enumerate()
                .find_map(|(idx, p)| p.match_at(letters, pos).map(|m| (idx, m)))?;
            let p = &self.patterns[idx];
            out.push(LambdaElement {
                pattern: idx,
                i: (!p.is_constant()).then_some(m.i),
                word: w.factor(pos, pos + m.length),
            });
            pos += m.length;
        }
        Some(out)
    }

    pub fn encode(elements: &[LambdaElement]) -> Word {
        elements
            .iter()
            .fold(Word::empty(), |acc, e| acc.concat(&e.word))
    }
}

/// Factorizes every defining word (both sides of every rule, parameter up to
/// `inst_bound`) and generalizes the factor families back into patterns.
///
/// A family is generalized only when at least three consecutive parameter
/// values show the same shape; otherwise its concrete factors are kept and a
/// warning is recorded.
type SideAt<'a> = Box<dyn Fn(u32) -> Word + 'a>;

pub fn compute_lambda(
    sys: &CompleteSystem,
    inst_bound: u32,
    witness_bound: usize,
) -> Result<MinimalWordSet, SpecialError> {
    let mut patterns: Vec<ParamPattern> = Vec::new();
    let mut warnings = Vec::new();
    let add = |p: ParamPattern, patterns: &mut Vec<ParamPattern>| {
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    };

    for (idx, rule) in sys.system().rules().iter().enumerate() {
        let params: Vec<u32> = rule.params_up_to(inst_bound).collect();
        let sides: [(&str, SideAt); 2] = [
            ("left", Box::new(|i| rule.lhs().instantiate(i).unwrap())),
            ("right", Box::new(|i| rule.rhs().instantiate(i))),
        ];
        for (side, word_at) in &sides {
            let mut family: Vec<(u32, Vec<Word>)> = Vec::new();
            for &i in &params {
                let w = word_at(i);
                if w.is_empty() {
                    continue;
                }
                let f = minimal_factorization(sys, &w, witness_bound)?;
                family.push((i, f.factors));
            }
            if family.is_empty() {
                continue;
            }
            if !rule.is_parametric() {
                for factor in &family[0].1 {
                    add(
                        ParamPattern::constant(factor.clone()).unwrap(),
                        &mut patterns,
                    );
                }
                continue;
            }
            let width = family[0].1.len();
            let generalized: Option<Vec<ParamPattern>> =
                if family.iter().all(|(_, f)| f.len() == width) {
                    (0..width)
                        .map(|j| {
                            let column: Vec<(u32, Word)> =
                                family.iter().map(|(i, f)| (*i, f[j].clone())).collect();
                            generalize(&column).and_then(|t| {
                                ParamPattern::new(t.into_segments(), rule.param_min()).ok()
                            })
                        })
                        .collect()
                } else {
                    None
                };
            match generalized {
                Some(ps) => ps.into_iter().for_each(|p| add(p, &mut patterns)),
                None => {
                    warnings.push(format!(
                        "rule {idx} ({side} side): factors do not follow one parameterized \
                         shape over {} value(s); keeping concrete words",
                        family.len()
                    ));
                    for (_, factors) in &family {
                        for factor in factors {
                            add(
                                ParamPattern::constant(factor.clone()).unwrap(),
                                &mut patterns,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(MinimalWordSet {
        patterns,
        bound: inst_bound,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffixKind {
    Prefix,
    Suffix,
}

/// `shorter` is a proper prefix or suffix of `longer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: AffixKind,
    pub shorter: LambdaElement,
    pub longer: LambdaElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiprefixReport {
    /// Verdict of the symbolic check over all parameter values.
    pub holds: bool,
    pub violation: Option<Violation>,
    /// Verdict of the exhaustive check up to the enumeration bound.
    pub exhaustive_holds: bool,
    pub bound: u32,
}

#[derive(Clone, Copy)]
enum Term {
    Const(i64),
    Var(usize),
}

/// Difference constraints `x_u - x_v <= c` over the nodes zero, `i`, `j`.
struct Constraints {
    edges: Vec<(usize, usize, i64)>,
}

impl Constraints {
    fn new() -> Self {
        Constraints { edges: Vec::new() }
    }

    fn split(t: Term) -> (usize, i64) {
        match t {
            Term::Const(n) => (0, n),
            Term::Var(v) => (v, 0),
        }
    }

    /// `a <= b + slack`.
    fn le(&mut self, a: Term, b: Term, slack: i64) {
        let (na, ca) = Self::split(a);
        let (nb, cb) = Self::split(b);
        self.edges.push((nb, na, cb - ca + slack));
    }

    fn eq(&mut self, a: Term, b: Term) {
        self.le(a, b, 0);
        self.le(b, a, 0);
    }

    /// Bellman-Ford from a virtual source; returns `(i, j)` if feasible.
    fn solve(&self) -> Option<(i64, i64)> {
        let mut dist = [0i64; 3];
        for _ in 0..3 {
            for &(u, v, w) in &self.edges {
                if dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                }
            }
        }
        if self.edges.iter().any(|&(u, v, w)| dist[u] + w < dist[v]) {
            return None;
        }
        Some((dist[1] - dist[0], dist[2] - dist[0]))
    }
}

fn run_term(len: RunLength, var: usize) -> Term {
    match len {
        RunLength::Fixed(n) => Term::Const(n as i64),
        RunLength::Param => Term::Var(var),
    }
}

/// Parameter values making an instance of `short` a proper prefix of an
/// instance of `long`, given their run decompositions.
fn proper_prefix_solution(
    short: &[(char, RunLength)],
    short_min: u32,
    long: &[(char, RunLength)],
    long_min: u32,
) -> Option<(i64, i64)> {
    let (r, s) = (short.len(), long.len());
    if r > s || r == 0 {
        return None;
    }
    let mut cs = Constraints::new();
    cs.le(Term::Const(short_min as i64), Term::Var(1), 0);
    cs.le(Term::Const(long_min as i64), Term::Var(2), 0);
    for k in 0..r {
        if short[k].0 != long[k].0 {
            return None;
        }
        let a = run_term(short[k].1, 1);
        let b = run_term(long[k].1, 2);
        if k + 1 < r {
            cs.eq(a, b);
        } else {
            cs.le(a, b, if r < s { 0 } else { -1 });
        }
    }
    cs.solve()
}

/// Checks that no code word is a proper prefix or suffix of another, first
/// symbolically over all parameter values, then by enumerating instances up
/// to the bound.
pub fn check_biprefix(lam: &MinimalWordSet) -> BiprefixReport {
    let mut violation = None;
    'search: for (pi, p) in lam.patterns.iter().enumerate() {
        for (qi, q) in lam.patterns.iter().enumerate() {
            for kind in [AffixKind::Prefix, AffixKind::Suffix] {
                let (mut pr, mut qr) = (p.runs(), q.runs());
                if kind == AffixKind::Suffix {
                    pr.reverse();
                    qr.reverse();
                }
                let Some((i, j)) = proper_prefix_solution(&pr, p.param_min(), &qr, q.param_min())
                else {
                    continue;
                };
                let element = |idx: usize, pat: &ParamPattern, v: i64| LambdaElement {
                    pattern: idx,
                    i: (!pat.is_constant()).then_some(v as u32),
                    word: pat.instantiate(v as u32).unwrap(),
                };
                violation = Some(Violation {
                    kind,
                    shorter: element(pi, p, i),
                    longer: element(qi, q, j),
                });
                break 'search;
            }
        }
    }

    let instances = lam.instances();
    let exhaustive_holds = instances.iter().all(|u| {
        instances.iter().all(|v| {
            u.word.len() >= v.word.len()
                || !(v.word.starts_with(&u.word) || v.word.ends_with(&u.word))
        })
    });
    BiprefixReport {
        holds: violation.is_none(),
        violation,
        exhaustive_holds,
        bound: lam.bound,
    }
}
