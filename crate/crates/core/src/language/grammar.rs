//! Context-free grammars: the text format, export of left-hand-side
//! languages, Chomsky normal form and CYK membership.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::LanguageError;
use crate::words::{Alphabet, ParamPattern, Segment, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    T(char),
    N(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    start: String,
    /// In order of first appearance, start symbol first.
    nonterminals: Vec<String>,
    terminals: BTreeSet<char>,
    productions: Vec<Production>,
}

impl Grammar {
    /// Every nonterminal used on a right-hand side must have a production.
    pub fn new(start: &str, productions: Vec<Production>) -> Result<Self, LanguageError> {
        let defined: BTreeSet<&str> = productions.iter().map(|p| p.lhs.as_str()).collect();
        if !defined.contains(start) {
            return Err(LanguageError::UndefinedNonterminal(start.to_string()));
        }
        let mut nonterminals = vec![start.to_string()];
        let mut terminals = BTreeSet::new();
        let note = |name: &str, list: &mut Vec<String>| {
            if !list.iter().any(|n| n == name) {
                list.push(name.to_string());
            }
        };
        for p in &productions {
            note(&p.lhs, &mut nonterminals);
            for s in &p.rhs {
                match s {
                    Symbol::T(c) => {
                        terminals.insert(*c);
                    }
                    Symbol::N(n) if !defined.contains(n.as_str()) => {
                        return Err(LanguageError::UndefinedNonterminal(n.clone()))
                    }
                    Symbol::N(n) => note(n, &mut nonterminals),
                }
            }
        }
        Ok(Grammar {
            start: start.to_string(),
            nonterminals,
            terminals,
            productions,
        })
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<char> {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Reads `start: S` followed by `NT -> sym ...` lines. Tokens naming a
    /// nonterminal are nonterminals; other tokens must be single letters.
    pub fn parse(text: &str) -> Result<Self, LanguageError> {
        let syntax = |line: usize, message: String| LanguageError::GrammarSyntax { line, message };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let Some(&(first_line, first)) = lines.first() else {
            return Err(syntax(1, "empty grammar".to_string()));
        };
        let start = first
            .strip_prefix("start:")
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| syntax(first_line, "expected 'start: <nonterminal>'".to_string()))?;
        let mut raw = Vec::new();
        for &(line, l) in &lines[1..] {
            let (lhs, rhs) = l
                .split_once("->")
                .ok_or_else(|| syntax(line, format!("expected 'NT -> symbols', found '{l}'")))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(syntax(line, format!("bad nonterminal '{lhs}'")));
            }
            raw.push((
                line,
                lhs.to_string(),
                rhs.split_whitespace().collect::<Vec<_>>(),
            ));
        }
        let names: BTreeSet<&str> = raw.iter().map(|(_, l, _)| l.as_str()).collect();
        let mut productions = Vec::new();
        for (line, lhs, tokens) in &raw {
            let rhs = if tokens.as_slice() == ["EPS"] {
                Vec::new()
            } else {
                tokens
                    .iter()
                    .map(|t| {
                        if names.contains(t) {
                            return Ok(Symbol::N(t.to_string()));
                        }
                        let mut cs = t.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => Ok(Symbol::T(c)),
                            _ => Err(syntax(*line, format!("undefined nonterminal '{t}'"))),
                        }
                    })
                    .collect::<Result<_, _>>()?
            };
            productions.push(Production {
                lhs: lhs.clone(),
                rhs,
            });
        }
        Grammar::new(start, productions)
    }

    /// Text form with terminals written by their names in `alphabet`.
    pub fn render(&self, alphabet: Option<&Alphabet>) -> String {
        let term = |c: char| {
            alphabet
                .and_then(|a| a.name_of(c))
                .map(str::to_string)
                .unwrap_or(c.to_string())
        };
        let mut out = format!("start: {}\n", self.start);
        for name in &self.nonterminals {
            for p in self.productions.iter().filter(|p| &p.lhs == name) {
                let rhs: Vec<String> = p
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::T(c) => term(*c),
                        Symbol::N(n) => n.clone(),
                    })
                    .collect();
                let rhs = if rhs.is_empty() {
                    "EPS".to_string()
                } else {
                    rhs.join(" ")
                };
                out.push_str(&format!("{} -> {}\n", p.lhs, rhs));
            }
        }
        out
    }

    pub fn to_cnf(&self) -> CnfGrammar {
        CnfGrammar::from_grammar(self)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Sym {
    T(char),
    N(usize),
}

/// Chomsky normal form: `A -> B C` and `A -> x`, plus a flag for the empty
/// word.
#[derive(Debug, Clone)]
pub struct CnfGrammar {
    count: usize,
    start: usize,
    start_nullable: bool,
    terminal_rules: HashMap<char, Vec<usize>>,
    binary: Vec<(usize, usize, usize)>,
}

impl CnfGrammar {
    fn from_grammar(g: &Grammar) -> Self {
        let index: HashMap<&str, usize> = g
            .nonterminals
            .iter()
            .enumerate()
            .map(|(k, n)| (n.as_str(), k))
            .collect();
        let mut count = g.nonterminals.len();
        let mut prods: Vec<(usize, Vec<Sym>)> = g
            .productions
            .iter()
            .map(|p| {
                let rhs = p
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::T(c) => Sym::T(*c),
                        Symbol::N(n) => Sym::N(index[n.as_str()]),
                    })
                    .collect();
                (index[p.lhs.as_str()], rhs)
            })
            .collect();

        let mut nullable = vec![false; count];
        loop {
            let mut changed = false;
            for (a, rhs) in &prods {
                if !nullable[*a] && rhs.iter().all(|s| matches!(s, Sym::N(b) if nullable[*b])) {
                    nullable[*a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let start_nullable = nullable[0];

        // Drop nullable occurrences in every combination.
        let mut expanded: BTreeSet<(usize, Vec<Sym>)> = BTreeSet::new();
        for (a, rhs) in &prods {
            let mut variants: Vec<Vec<Sym>> = vec![Vec::new()];
            for s in rhs {
                let keep: Vec<Vec<Sym>> = variants
                    .iter()
                    .map(|v| {
                        let mut v = v.clone();
                        v.push(*s);
                        v
                    })
                    .collect();
                if matches!(s, Sym::N(b) if nullable[*b]) {
                    variants.extend(keep);
                } else {
                    variants = keep;
                }
            }
            expanded.extend(
                variants
                    .into_iter()
                    .filter(|v| !v.is_empty())
                    .map(|v| (*a, v)),
            );
        }
        prods = expanded.into_iter().collect();

        // Replace unit chains A -> B by B's non-unit productions.
        let mut unit: Vec<BTreeSet<usize>> = (0..count).map(|a| BTreeSet::from([a])).collect();
        loop {
            let mut changed = false;
            for (a, rhs) in &prods {
                if let [Sym::N(b)] = rhs.as_slice() {
                    let reach: Vec<usize> = unit[*b].iter().copied().collect();
                    for r in reach {
                        changed |= unit[*a].insert(r);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut direct: BTreeSet<(usize, Vec<Sym>)> = BTreeSet::new();
        for (a, reach) in unit.iter().enumerate() {
            for (b, rhs) in &prods {
                if reach.contains(b) && !matches!(rhs.as_slice(), [Sym::N(_)]) {
                    direct.insert((a, rhs.clone()));
                }
            }
        }

        let mut terminal_rules: HashMap<char, Vec<usize>> = HashMap::new();
        let mut lifted: HashMap<char, usize> = HashMap::new();
        let mut binary = Vec::new();
        for (a, rhs) in direct {
            if let [Sym::T(c)] = rhs.as_slice() {
                terminal_rules.entry(*c).or_default().push(a);
                continue;
            }
            let mut ids: Vec<usize> = rhs
                .iter()
                .map(|s| match *s {
                    Sym::N(b) => b,
                    Sym::T(c) => *lifted.entry(c).or_insert_with(|| {
                        count += 1;
                        terminal_rules.entry(c).or_default().push(count - 1);
                        count - 1
                    }),
                })
                .collect();
            let mut head = a;
            while ids.len() > 2 {
                let first = ids.remove(0);
                count += 1;
                binary.push((head, first, count - 1));
                head = count - 1;
            }
            binary.push((head, ids[0], ids[1]));
        }
        for heads in terminal_rules.values_mut() {
            heads.sort_unstable();
            heads.dedup();
        }
        binary.sort_unstable();
        binary.dedup();
        CnfGrammar {
            count,
            start: 0,
            start_nullable,
            terminal_rules,
            binary,
        }
    }

    /// CYK over bitsets of nonterminals.
    pub fn accepts(&self, w: &[char]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.start_nullable;
        }
        let stride = self.count.div_ceil(64);
        let cell = |len: usize, i: usize| ((len - 1) * n + i) * stride;
        let mut table = vec![0u64; n * n * stride];
        let has = |t: &[u64], base: usize, a: usize| t[base + a / 64] >> (a % 64) & 1 == 1;
        for (i, c) in w.iter().enumerate() {
            let base = cell(1, i);
            for &a in self.terminal_rules.get(c).map(Vec::as_slice).unwrap_or(&[]) {
                table[base + a / 64] |= 1 << (a % 64);
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let target = cell(len, i);
                for k in 1..len {
                    let (left, right) = (cell(k, i), cell(len - k, i + k));
                    if table[left..left + stride].iter().all(|&x| x == 0)
                        || table[right..right + stride].iter().all(|&x| x == 0)
                    {
                        continue;
                    }
                    for &(a, b, c) in &self.binary {
                        if has(&table, left, b) && has(&table, right, c) {
                            table[target + a / 64] |= 1 << (a % 64);
                        }
                    }
                }
            }
        }
        has(&table, cell(n, 0), self.start)
    }
}

pub fn grammar_member(g: &Grammar, w: &Word) -> bool {
    g.to_cnf().accepts(w.letters())
}

fn terminals(w: &Word) -> Vec<Symbol> {
    w.letters().iter().map(|&c| Symbol::T(c)).collect()
}

fn nonterminal_name(base: char, letters: &BTreeSet<char>) -> String {
    if letters.contains(&base) {
        format!("{base}'")
    } else {
        base.to_string()
    }
}

/// Grammar for `{ p(i) : i >= min }`. Two parameterized runs are grown in
/// lockstep by one center nonterminal; three or more synchronized runs are
/// not context-free and are refused.
pub fn export_lhs_grammar(p: &ParamPattern) -> Result<Grammar, LanguageError> {
    let letters: BTreeSet<char> = p.letters().collect();
    let s = nonterminal_name('S', &letters);
    let min = p.param_min() as usize;
    let mut consts: Vec<Word> = vec![Word::empty()];
    let mut runs: Vec<char> = Vec::new();
    for seg in p.segments() {
        match seg {
            Segment::Const(w) => {
                let last = consts.last_mut().unwrap();
                *last = last.concat(w);
            }
            Segment::Param(x) => {
                runs.push(*x);
                consts.push(Word::empty());
            }
        }
    }
    let prod = |lhs: &str, rhs: Vec<Symbol>| Production {
        lhs: lhs.to_string(),
        rhs,
    };
    let productions = match runs.as_slice() {
        [] => vec![prod(&s, terminals(&consts[0]))],
        [x] => {
            let r = nonterminal_name('R', &letters);
            let base = Word::from_letters(vec![*x; min]);
            let mut top = terminals(&consts[0]);
            top.push(Symbol::N(r.clone()));
            top.extend(terminals(&consts[1]));
            vec![
                prod(&s, top),
                prod(&r, vec![Symbol::T(*x), Symbol::N(r.clone())]),
                prod(&r, terminals(&base)),
            ]
        }
        [x, y] => {
            let m = nonterminal_name('M', &letters);
            let mut top = terminals(&consts[0]);
            top.push(Symbol::N(m.clone()));
            top.extend(terminals(&consts[2]));
            let center = Word::from_letters(vec![*x; min])
                .concat(&consts[1])
                .concat(&Word::from_letters(vec![*y; min]));
            vec![
                prod(&s, top),
                prod(&m, vec![Symbol::T(*x), Symbol::N(m.clone()), Symbol::T(*y)]),
                prod(&m, terminals(&center)),
            ]
        }
        more => return Err(LanguageError::NotContextFree { runs: more.len() }),
    };
    Grammar::new(&s, productions)
}
