//! Alphabets, words and the prefix/suffix combinatorics used throughout the
//! crate.
//!
//! Letters are single `char`s. Alphabets may carry longer display names
//! (`b1`, `b2`, ...) which are mapped onto otherwise unused symbols, so word
//! algebra never has to deal with multi-character letters.

mod pattern;

pub use pattern::{generalize, ParamPattern, PatternMatch, RunLength, Segment, Template};

use std::fmt;

use thiserror::Error;

/// Separator between the two halves of a word-problem query.
pub const SEPARATOR: char = '#';

/// Characters that cannot be letters or appear inside letter names.
const RESERVED: &[char] = &['#', '(', ')', '^', ';', '-', '>', '=', ':', ',', '"'];

/// Symbols handed out to letters whose display name is longer than one char.
const SYMBOL_POOL: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZdefghjklmnopqrsuvwxyz";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("letter `{0}` is declared more than once")]
    DuplicateLetter(String),
    #[error("`{0}` cannot be used as a letter name")]
    InvalidLetterName(String),
    #[error("alphabet has too many multi-character letter names")]
    SymbolPoolExhausted,
    #[error("`{0}` is not a letter of the alphabet")]
    UnknownLetter(String),
    #[error("operation requires a non-empty word")]
    EmptyWord,
    #[error("the two words must differ")]
    EqualWords,
    #[error("parameter value {value} is below the minimum {min}")]
    BelowParamMin { value: u32, min: u32 },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
}

/// A finite, ordered set of letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || RESERVED.contains(&c))
        && !name.chars().all(|c| c.is_ascii_digit())
}

impl Alphabet {
    /// Alphabet whose letters are their own names.
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self, WordError> {
        let names: Vec<String> = letters.into_iter().map(String::from).collect();
        Self::from_names(&names)
    }

    /// Alphabet from display names. Single-character names stand for
    /// themselves; longer names are assigned unused symbols in declaration
    /// order.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, WordError> {
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut letters: Vec<Option<char>> = Vec::with_capacity(names.len());
        let mut owned = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(WordError::InvalidLetterName(name.to_string()));
            }
            if owned.iter().any(|n: &String| n == name) {
                return Err(WordError::DuplicateLetter(name.to_string()));
            }
            let mut chars = name.chars();
            let single = match (chars.next(), chars.next()) {
                (Some(c), None) => Some(c),
                _ => None,
            };
            letters.push(single);
            owned.push(name.to_string());
        }
        let taken: Vec<char> = letters.iter().flatten().copied().collect();
        let mut pool = SYMBOL_POOL.chars().filter(|c| !taken.contains(c));
        let letters = letters
            .into_iter()
            .map(|l| match l {
                Some(c) => Ok(c),
                None => pool.next().ok_or(WordError::SymbolPoolExhausted),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Alphabet {
            letters,
            names: owned,
        })
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: char) -> bool {
        self.letters.contains(&letter)
    }

    pub fn name_of(&self, letter: char) -> Option<&str> {
        let idx = self.letters.iter().position(|&l| l == letter)?;
        Some(&self.names[idx])
    }

    pub fn symbol(&self, name: &str) -> Option<char> {
        let idx = self.names.iter().position(|n| n == name)?;
        Some(self.letters[idx])
    }

    /// True when every letter is displayed as itself.
    pub fn plain(&self) -> bool {
        self.names.iter().zip(&self.letters).all(|(n, &l)| {
            let mut c = n.chars();
            c.next() == Some(l) && c.next().is_none()
        })
    }

    /// Longest letter name that starts `text`, with its byte length.
    pub fn longest_name_at(&self, text: &str) -> Option<(char, usize)> {
        self.names
            .iter()
            .zip(&self.letters)
            .filter(|(n, _)| text.starts_with(n.as_str()))
            .max_by_key(|(n, _)| n.len())
            .map(|(n, &l)| (l, n.len()))
    }

    /// Checks that every letter of `word` belongs to the alphabet.
    pub fn check(&self, word: &Word) -> Result<(), WordError> {
        match word.letters().iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(WordError::UnknownLetter(l.to_string())),
            None => Ok(()),
        }
    }

    /// Parses a word written with letter names. `""` and `"1"` denote the
    /// empty word; whitespace between letters is ignored.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for chunk in trimmed.split_whitespace() {
            let mut rest = chunk;
            while !rest.is_empty() {
                let (letter, used) = self.longest_name_at(rest).ok_or_else(|| {
                    WordError::UnknownLetter(rest.chars().next().unwrap().to_string())
                })?;
                letters.push(letter);
                rest = &rest[used..];
            }
        }
        Ok(Word(letters))
    }

    /// Renders a word with letter names; the empty word is `1`.
    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        self.render_letters(word.letters())
    }

    /// Like [`render`](Self::render) but the empty word renders as `""`.
    pub fn render_letters(&self, letters: &[char]) -> String {
        let name = |l: &char| {
            self.name_of(*l)
                .map(str::to_string)
                .unwrap_or(l.to_string())
        };
        if self.plain() {
            letters.iter().map(name).collect()
        } else {
            letters.iter().map(name).collect::<Vec<_>>().join(" ")
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

/// A finite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<char>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<char> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// First `len` letters.
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// Last `len` letters.
    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.len() - len..].to_vec())
    }

    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    pub fn push(&mut self, letter: char) {
        self.0.push(letter);
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl From<Vec<char>> for Word {
    fn from(v: Vec<char>) -> Self {
        Word(v)
    }
}

impl FromIterator<char> for Word {
    fn from_iter<I: IntoIterator<Item = char>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Non-empty prefixes of `w`, shortest first.
pub fn prefixes(w: &Word) -> Vec<Word> {
    (1..=w.len()).map(|n| w.prefix(n)).collect()
}

/// Non-empty suffixes of `w`, shortest first.
pub fn suffixes(w: &Word) -> Vec<Word> {
    (1..=w.len()).map(|n| w.suffix(n)).collect()
}

/// Words that are both a non-empty prefix of `u` and a suffix of `v`,
/// shortest first. No preconditions.
pub fn prefix_suffix_intersection(u: &Word, v: &Word) -> Vec<Word> {
    let max = u.len().min(v.len());
    (1..=max)
        .filter(|&n| u.letters()[..n] == v.letters()[v.len() - n..])
        .map(|n| u.prefix(n))
        .collect()
}

/// `Pre(u) ∩ Suf(v)`: the overlaps of `u` and `v`, where `v` is read first.
pub fn overlaps(u: &Word, v: &Word) -> Result<Vec<Word>, WordError> {
    if u.is_empty() || v.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if u == v {
        return Err(WordError::EqualWords);
    }
    Ok(prefix_suffix_intersection(u, v))
}

/// A word is self-overlap free when its only border is the word itself.
pub fn self_overlap_free(w: &Word) -> Result<bool, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    Ok((1..w.len()).all(|n| w.letters()[..n] != w.letters()[w.len() - n..]))
}
