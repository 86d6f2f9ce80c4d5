//! The presentation file format:
//!
//! ```text
//! monoid: Pi_2
//! alphabet: a b c
//! param: i >= 1
//! rule: (a b^i c)^2 -> 1
//! ```
//!
//! `;` starts a comment. A rule is `lhs -> rhs`, or `u = v`, which is
//! oriented so the longer side is rewritten. `1` is the empty word, `x^i` a
//! parameterized run and `(...)^k` a k-fold repetition.

use super::{PresentationError, PresentationSchema, CANONICAL_PARAM};
use crate::rewriting::Rule;
use crate::words::{Alphabet, ParamPattern, Segment, Template, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exponent {
    Count(usize),
    Param(char),
}

struct ExprParser<'a> {
    alphabet: &'a Alphabet,
    text: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn exponent(&mut self) -> Result<Option<Exponent>, String> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let text: &str = self.text;
        let rest = &text[self.pos..];
        let digits = rest.chars().take_while(char::is_ascii_digit).count();
        if digits > 0 {
            self.pos += digits;
            return rest[..digits]
                .parse()
                .map(|k| Some(Exponent::Count(k)))
                .map_err(|_| format!("exponent {} is too large", &rest[..digits]));
        }
        let ident: String = rest.chars().take_while(char::is_ascii_alphabetic).collect();
        let mut chars = ident.chars();
        match (chars.next(), chars.next()) {
            (Some(p), None) => {
                self.pos += 1;
                Ok(Some(Exponent::Param(p)))
            }
            _ => Err(format!(
                "expected an integer or a parameter after '^' at '{rest}'"
            )),
        }
    }

    /// Parses a sequence up to `)` or the end; letters carry their exponent.
    fn sequence(&mut self, nested: bool) -> Result<Vec<(char, Exponent)>, String> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            let Some(ch) = self.peek() else {
                return if nested {
                    Err("unclosed '('".to_string())
                } else {
                    Ok(items)
                };
            };
            if ch == ')' {
                if !nested {
                    return Err("unmatched ')'".to_string());
                }
                self.pos += 1;
                return Ok(items);
            }
            if ch == '(' {
                self.pos += 1;
                let inner = self.sequence(true)?;
                match self.exponent()? {
                    None | Some(Exponent::Count(1)) => items.extend(inner),
                    Some(Exponent::Count(k)) => {
                        for _ in 0..k {
                            items.extend(inner.iter().copied());
                        }
                    }
                    Some(Exponent::Param(p)) => {
                        return Err(format!("a parenthesized group cannot be raised to {p}"))
                    }
                }
                continue;
            }
            if let Some((letter, used)) = self.alphabet.longest_name_at(self.rest()) {
                self.pos += used;
                match self.exponent()? {
                    None => items.push((letter, Exponent::Count(1))),
                    Some(e) => items.push((letter, e)),
                }
                continue;
            }
            if ch == '1' {
                self.pos += 1;
                if let Some(Exponent::Param(p)) = self.exponent()? {
                    return Err(format!("1 cannot be raised to {p}"));
                }
                continue;
            }
            return Err(format!("unknown letter at '{}'", self.rest()));
        }
    }
}

/// Parses one side of a rule into segments and the parameter names used.
fn parse_side(alphabet: &Alphabet, text: &str) -> Result<(Vec<Segment>, Vec<char>), String> {
    let items = ExprParser {
        alphabet,
        text,
        pos: 0,
    }
    .sequence(false)?;
    let mut segments = Vec::new();
    let mut params = Vec::new();
    for (letter, e) in items {
        match e {
            Exponent::Count(k) => {
                segments.push(Segment::Const(Word::from_letters(vec![letter; k])))
            }
            Exponent::Param(p) => {
                if !params.contains(&p) {
                    params.push(p);
                }
                segments.push(Segment::Param(letter));
            }
        }
    }
    // Template normalization merges constants and drops empty blocks.
    Ok((Template::new(segments).into_segments(), params))
}

/// `(constant letters, parameterized runs)`: the length at `i` is `c + k i`.
fn shape(segments: &[Segment]) -> (usize, usize) {
    segments.iter().fold((0, 0), |(c, k), s| match s {
        Segment::Const(w) => (c + w.len(), k),
        Segment::Param(_) => (c, k + 1),
    })
}

fn longer_everywhere(a: &[Segment], b: &[Segment], min: u32) -> bool {
    let ((ca, ka), (cb, kb)) = (shape(a), shape(b));
    ka >= kb && ca + ka * min as usize > cb + kb * min as usize
}

fn parse_param_line(value: &str) -> Result<(char, u32), String> {
    let bad = || format!("expected 'i >= <min>' or 't >= <min>', found '{value}'");
    let (name, min) = value.split_once(">=").ok_or_else(bad)?;
    let name = match name.trim() {
        "i" => 'i',
        "t" => 't',
        _ => return Err(bad()),
    };
    let min: u32 = min.trim().parse().map_err(|_| bad())?;
    if min < 1 {
        return Err("the parameter minimum must be at least 1".to_string());
    }
    Ok((name, min))
}

pub fn parse_presentation(text: &str) -> Result<PresentationSchema, PresentationError> {
    let syntax = |line: usize, message: String| PresentationError::Syntax { line, message };
    let invariant = |line: usize, message: String| PresentationError::Invariant { line, message };

    let mut name: Option<String> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut param: Option<(char, u32)> = None;
    let mut rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("expected 'key: value', found '{content}'")))?;
        let value = value.trim();
        match key.trim() {
            "monoid" => {
                if name.replace(value.to_string()).is_some() {
                    return Err(syntax(line, "duplicate 'monoid' line".to_string()));
                }
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax(line, "duplicate 'alphabet' line".to_string()));
                }
                let names: Vec<&str> = value.split_whitespace().collect();
                alphabet =
                    Some(Alphabet::from_names(&names).map_err(|e| syntax(line, e.to_string()))?);
            }
            "param" => {
                if !rules.is_empty() {
                    return Err(syntax(line, "'param' must precede the rules".to_string()));
                }
                if param
                    .replace(parse_param_line(value).map_err(|m| syntax(line, m))?)
                    .is_some()
                {
                    return Err(syntax(line, "duplicate 'param' line".to_string()));
                }
            }
            "rule" => {
                let alphabet = alphabet
                    .as_ref()
                    .ok_or_else(|| syntax(line, "'alphabet' must precede the rules".to_string()))?;
                let (declared, min) = param.unwrap_or((CANONICAL_PARAM, 1));
                let (left, right, directed) = if let Some((l, r)) = value.split_once("->") {
                    (l, r, true)
                } else if let Some((l, r)) = value.split_once('=') {
                    (l, r, false)
                } else {
                    return Err(syntax(line, "a rule needs '->' or '='".to_string()));
                };
                let (l, lp) = parse_side(alphabet, left).map_err(|m| syntax(line, m))?;
                let (r, rp) = parse_side(alphabet, right).map_err(|m| syntax(line, m))?;
                for p in lp.iter().chain(&rp) {
                    if *p != declared {
                        return Err(invariant(
                            line,
                            format!(
                                "parameter '{p}' is not the declared parameter '{declared}'; \
                                 only one shared parameter is allowed"
                            ),
                        ));
                    }
                }
                let (lhs, rhs) = if directed || longer_everywhere(&l, &r, min) {
                    (l, r)
                } else if longer_everywhere(&r, &l, min) {
                    (r, l)
                } else {
                    return Err(invariant(
                        line,
                        "neither side is longer for every parameter value".to_string(),
                    ));
                };
                if lhs.is_empty() {
                    return Err(invariant(line, "left-hand side is empty".to_string()));
                }
                let pattern =
                    ParamPattern::new(lhs, min).map_err(|e| invariant(line, e.to_string()))?;
                let rule = Rule::new(pattern, Template::new(rhs));
                if !rule.is_length_reducing() {
                    return Err(invariant(line, "rule is not length-reducing".to_string()));
                }
                rules.push(rule);
            }
            other => return Err(syntax(line, format!("unknown key '{other}'"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| syntax(0, "missing 'alphabet' line".to_string()))?;
    Ok(PresentationSchema {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        alphabet,
        param_min: param.map_or(1, |(_, m)| m),
        rules,
    })
}

/// Renders segments with letter names, folding a whole-word period into
/// `(...)^k`; the empty sequence is `1`.
pub fn render_segments(alphabet: &Alphabet, segments: &[Segment]) -> String {
    let mut tokens: Vec<(char, bool)> = Vec::new();
    for s in segments {
        match s {
            Segment::Const(w) => tokens.extend(w.letters().iter().map(|&l| (l, false))),
            Segment::Param(x) => tokens.push((*x, true)),
        }
    }
    if tokens.is_empty() {
        return "1".to_string();
    }
    let name = |&(l, param): &(char, bool)| {
        let base = alphabet
            .name_of(l)
            .map(str::to_string)
            .unwrap_or(l.to_string());
        if param {
            format!("{base}^{CANONICAL_PARAM}")
        } else {
            base
        }
    };
    let n = tokens.len();
    let period = (1..n)
        .filter(|&p| n.is_multiple_of(p))
        .find(|&p| (p..n).all(|k| tokens[k] == tokens[k - p]));
    match period {
        Some(1) => format!("{}^{n}", name(&tokens[0])),
        Some(p) => {
            let block: Vec<String> = tokens[..p].iter().map(name).collect();
            format!("({})^{}", block.join(" "), n / p)
        }
        None => tokens.iter().map(name).collect::<Vec<_>>().join(" "),
    }
}

pub fn serialize_presentation(schema: &PresentationSchema) -> String {
    let mut out = format!(
        "monoid: {}\nalphabet: {}\nparam: {CANONICAL_PARAM} >= {}\n",
        schema.name,
        schema.alphabet.names().join(" "),
        schema.param_min
    );
    for rule in &schema.rules {
        out.push_str(&format!(
            "rule: {} -> {}\n",
            render_segments(&schema.alphabet, rule.lhs().segments()),
            render_segments(&schema.alphabet, rule.rhs().segments())
        ));
    }
    out
}
