//! Parameterized words such as `(a b^i c)^2`, where every `^i` run shares one
//! integer parameter.

use std::fmt;

use super::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    /// A fixed, non-empty block of letters.
    Const(Word),
    /// The given letter repeated `i` times.
    Param(char),
}

impl Segment {
    fn first_letter(&self) -> char {
        match self {
            Segment::Const(w) => w.letters()[0],
            Segment::Param(x) => *x,
        }
    }

    fn last_letter(&self) -> char {
        match self {
            Segment::Const(w) => *w.letters().last().unwrap(),
            Segment::Param(x) => *x,
        }
    }
}

/// Merges adjacent constant blocks and drops empty ones.
fn normalize(segments: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for seg in segments {
        match seg {
            Segment::Const(w) if w.is_empty() => {}
            Segment::Const(w) => {
                if let Some(Segment::Const(prev)) = out.last_mut() {
                    *prev = prev.concat(&w);
                } else {
                    out.push(Segment::Const(w));
                }
            }
            p => out.push(p),
        }
    }
    out
}

fn instantiate_segments(segments: &[Segment], i: u32) -> Word {
    let mut letters = Vec::new();
    for seg in segments {
        match seg {
            Segment::Const(w) => letters.extend_from_slice(w.letters()),
            Segment::Param(x) => letters.extend(std::iter::repeat_n(*x, i as usize)),
        }
    }
    Word::from_letters(letters)
}

fn fmt_segments(segments: &[Segment], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if segments.is_empty() {
        return write!(f, "1");
    }
    let mut first = true;
    for seg in segments {
        match seg {
            Segment::Const(w) => {
                for l in w.letters() {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{l}")?;
                    first = false;
                }
            }
            Segment::Param(x) => {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}^i")?;
                first = false;
            }
        }
    }
    Ok(())
}

/// Length of a maximal run of one letter inside an instantiated pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunLength {
    Fixed(usize),
    Param,
}

fn segment_runs(segments: &[Segment]) -> Vec<(char, RunLength)> {
    let mut runs: Vec<(char, RunLength)> = Vec::new();
    for seg in segments {
        match seg {
            Segment::Const(w) => {
                for &l in w.letters() {
                    match runs.last_mut() {
                        Some((x, RunLength::Fixed(n))) if *x == l => *n += 1,
                        _ => runs.push((l, RunLength::Fixed(1))),
                    }
                }
            }
            Segment::Param(x) => runs.push((*x, RunLength::Param)),
        }
    }
    runs
}

/// Matches `segments` against `host` starting at `anchor`, reading rightwards,
/// or ending at `anchor`, reading leftwards when `backward` is set.
///
/// The first parameter run met fixes `i` to the full run length unless it is
/// the final segment in reading order, in which case the smallest admissible
/// `i` is taken. Returns `(i, matched length)`.
fn match_directed(
    segments: &[Segment],
    host: &[char],
    anchor: usize,
    backward: bool,
    min: u32,
) -> Option<(u32, usize)> {
    let get = |k: usize| -> Option<char> {
        if backward {
            (k < anchor).then(|| host[anchor - 1 - k])
        } else {
            host.get(anchor + k).copied()
        }
    };
    let n = segments.len();
    let mut off = 0usize;
    let mut param: Option<u32> = None;
    for step in 0..n {
        let seg = if backward {
            &segments[n - 1 - step]
        } else {
            &segments[step]
        };
        match seg {
            Segment::Const(w) => {
                let letters = w.letters();
                for k in 0..letters.len() {
                    let l = if backward {
                        letters[letters.len() - 1 - k]
                    } else {
                        letters[k]
                    };
                    if get(off) != Some(l) {
                        return None;
                    }
                    off += 1;
                }
            }
            Segment::Param(x) => match param {
                Some(i) => {
                    for _ in 0..i {
                        if get(off) != Some(*x) {
                            return None;
                        }
                        off += 1;
                    }
                }
                None => {
                    let mut run = 0usize;
                    while get(off + run) == Some(*x) {
                        run += 1;
                    }
                    let value = if step == n - 1 { min as usize } else { run };
                    if value == 0 || value < min as usize || value > run {
                        return None;
                    }
                    param = Some(value as u32);
                    off += value;
                }
            },
        }
    }
    Some((param.unwrap_or(min), off))
}

/// An occurrence of a pattern instance inside a host word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternMatch {
    pub start: usize,
    pub i: u32,
    pub length: usize,
}

/// A rule left-hand side with one shared integer parameter `i >= param_min`.
///
/// Every parameter run is flanked by letters different from its own, and the
/// first parameter run is not the last segment, so a match at a fixed start
/// position determines `i` uniquely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamPattern {
    segments: Vec<Segment>,
    param_min: u32,
}

impl ParamPattern {
    pub fn new(segments: Vec<Segment>, param_min: u32) -> Result<Self, WordError> {
        let segments = normalize(segments);
        if segments.is_empty() {
            return Err(WordError::InvalidPattern("pattern is empty".into()));
        }
        if param_min < 1 {
            return Err(WordError::InvalidPattern(
                "parameter minimum must be at least 1".into(),
            ));
        }
        for (idx, seg) in segments.iter().enumerate() {
            let Segment::Param(x) = seg else { continue };
            if idx > 0 && segments[idx - 1].last_letter() == *x {
                return Err(WordError::InvalidPattern(format!(
                    "run {x}^i is preceded by {x}, so its length is ambiguous"
                )));
            }
            if idx + 1 < segments.len() && segments[idx + 1].first_letter() == *x {
                return Err(WordError::InvalidPattern(format!(
                    "run {x}^i is followed by {x}, so its length is ambiguous"
                )));
            }
        }
        let first_param = segments.iter().position(|s| matches!(s, Segment::Param(_)));
        if first_param == Some(segments.len() - 1) {
            return Err(WordError::InvalidPattern(
                "the parameter is only determined by a trailing run, so matches are ambiguous"
                    .into(),
            ));
        }
        Ok(ParamPattern {
            segments,
            param_min,
        })
    }

    /// A pattern without parameter runs.
    pub fn constant(word: Word) -> Result<Self, WordError> {
        Self::new(vec![Segment::Const(word)], 1)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn param_min(&self) -> u32 {
        self.param_min
    }

    pub fn param_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Param(_)))
            .count()
    }

    pub fn is_constant(&self) -> bool {
        self.param_count() == 0
    }

    /// Number of fixed letters.
    pub fn const_len(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Const(w) => w.len(),
                Segment::Param(_) => 0,
            })
            .sum()
    }

    pub fn len_at(&self, i: u32) -> usize {
        self.const_len() + self.param_count() * i as usize
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.segments.iter().flat_map(|s| match s {
            Segment::Const(w) => w.letters().to_vec(),
            Segment::Param(x) => vec![*x],
        })
    }

    pub fn instantiate(&self, i: u32) -> Result<Word, WordError> {
        if i < self.param_min {
            return Err(WordError::BelowParamMin {
                value: i,
                min: self.param_min,
            });
        }
        Ok(instantiate_segments(&self.segments, i))
    }

    /// Maximal runs of the instantiated pattern.
    pub fn runs(&self) -> Vec<(char, RunLength)> {
        segment_runs(&self.segments)
    }

    /// The match starting at `start`, if any.
    pub fn match_at(&self, host: &[char], start: usize) -> Option<PatternMatch> {
        match_directed(&self.segments, host, start, false, self.param_min)
            .map(|(i, length)| PatternMatch { start, i, length })
    }

    /// All matches in `host`, ordered by start position.
    pub fn find_matches(&self, host: &Word) -> Vec<PatternMatch> {
        let letters = host.letters();
        (0..=letters.len())
            .filter_map(|s| self.match_at(letters, s))
            .collect()
    }

    /// A match ending exactly at the end of `host`. When several exist the one
    /// with the smallest parameter is returned.
    pub fn match_suffix(&self, host: &[char]) -> Option<PatternMatch> {
        match_directed(&self.segments, host, host.len(), true, self.param_min).map(|(i, length)| {
            PatternMatch {
                start: host.len() - length,
                i,
                length,
            }
        })
    }

    pub fn as_template(&self) -> Template {
        Template {
            segments: self.segments.clone(),
        }
    }
}

impl fmt::Display for ParamPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_segments(&self.segments, f)
    }
}

/// A parameterized word used on the right-hand side of rules. Unlike
/// [`ParamPattern`] it may be empty and is never matched against.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Template {
    segments: Vec<Segment>,
}

impl Template {
    pub fn new(segments: Vec<Segment>) -> Self {
        Template {
            segments: normalize(segments),
        }
    }

    pub fn empty() -> Self {
        Template::default()
    }

    pub fn word(word: Word) -> Self {
        Template::new(vec![Segment::Const(word)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn param_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Param(_)))
            .count()
    }

    pub fn const_len(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Const(w) => w.len(),
                Segment::Param(_) => 0,
            })
            .sum()
    }

    pub fn len_at(&self, i: u32) -> usize {
        self.const_len() + self.param_count() * i as usize
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.segments.iter().flat_map(|s| match s {
            Segment::Const(w) => w.letters().to_vec(),
            Segment::Param(x) => vec![*x],
        })
    }

    pub fn instantiate(&self, i: u32) -> Word {
        instantiate_segments(&self.segments, i)
    }

    pub fn runs(&self) -> Vec<(char, RunLength)> {
        segment_runs(&self.segments)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_segments(&self.segments, f)
    }
}

fn run_lengths(w: &Word) -> Vec<(char, usize)> {
    let mut runs: Vec<(char, usize)> = Vec::new();
    for &l in w.letters() {
        match runs.last_mut() {
            Some((x, n)) if *x == l => *n += 1,
            _ => runs.push((l, 1)),
        }
    }
    runs
}

/// Generalizes a family of words indexed by consecutive parameter values into
/// a single [`Template`]: every maximal run must either keep a fixed length or
/// have length equal to the parameter.
///
/// Needs at least three consecutive values; returns `None` otherwise or when
/// the words do not share one shape.
pub fn generalize(family: &[(u32, Word)]) -> Option<Template> {
    if family.len() < 3 {
        return None;
    }
    let mut sorted: Vec<&(u32, Word)> = family.iter().collect();
    sorted.sort_by_key(|(i, _)| *i);
    if sorted.windows(2).any(|p| p[1].0 != p[0].0 + 1) {
        return None;
    }
    let shapes: Vec<(u32, Vec<(char, usize)>)> =
        sorted.iter().map(|(i, w)| (*i, run_lengths(w))).collect();
    let (_, base) = &shapes[0];
    if shapes
        .iter()
        .any(|(_, runs)| runs.len() != base.len() || runs.iter().zip(base).any(|(a, b)| a.0 != b.0))
    {
        return None;
    }
    let mut segments = Vec::with_capacity(base.len());
    for (idx, &(letter, len0)) in base.iter().enumerate() {
        if shapes.iter().all(|(_, runs)| runs[idx].1 == len0) {
            segments.push(Segment::Const(Word::from_letters(vec![letter; len0])));
        } else if shapes.iter().all(|(i, runs)| runs[idx].1 == *i as usize) {
            segments.push(Segment::Param(letter));
        } else {
            return None;
        }
    }
    Some(Template::new(segments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(s: &str) -> Segment {
        Segment::Const(Word::from(s))
    }

    fn abc_squared() -> ParamPattern {
        ParamPattern::new(
            vec![
                c("a"),
                Segment::Param('b'),
                c("ca"),
                Segment::Param('b'),
                c("c"),
            ],
            1,
        )
        .unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let p = abc_squared();
        assert_eq!(p.instantiate(1).unwrap(), Word::from("abcabc"));
        assert_eq!(p.instantiate(2).unwrap(), Word::from("abbcabbc"));
        assert_eq!(
            p.instantiate(0),
            Err(WordError::BelowParamMin { value: 0, min: 1 })
        );
        let k = ParamPattern::constant(Word::from("ab")).unwrap();
        assert_eq!(k.instantiate(7).unwrap(), Word::from("ab"));
    }

    #[test]
    fn find_match_examples() {
        let p = abc_squared();
        assert_eq!(
            p.find_matches(&Word::from("abcabc")),
            vec![PatternMatch {
                start: 0,
                i: 1,
                length: 6
            }]
        );
        assert!(p.find_matches(&Word::from("abcabbc")).is_empty());
        assert_eq!(
            p.find_matches(&Word::from("aabcabcc")),
            vec![PatternMatch {
                start: 1,
                i: 1,
                length: 6
            }]
        );
    }

    #[test]
    fn boundary_ambiguity_rejected() {
        assert!(ParamPattern::new(vec![c("b"), Segment::Param('b')], 1).is_err());
        assert!(ParamPattern::new(vec![Segment::Param('b'), c("bc")], 1).is_err());
        assert!(ParamPattern::new(vec![c("a"), Segment::Param('b')], 1).is_err());
        // a^i b^i c^i: the leading run fixes i.
        assert!(ParamPattern::new(
            vec![
                Segment::Param('a'),
                Segment::Param('b'),
                Segment::Param('c')
            ],
            1
        )
        .is_ok());
        assert!(ParamPattern::new(vec![], 1).is_err());
        assert!(ParamPattern::new(vec![c("ab")], 0).is_err());
    }

    #[test]
    fn suffix_match_takes_smallest_parameter() {
        let p = ParamPattern::new(vec![Segment::Param('b'), c("c")], 1).unwrap();
        let m = p.match_suffix(&['a', 'b', 'b', 'b', 'c']).unwrap();
        assert_eq!((m.start, m.i, m.length), (3, 1, 2));
        let q = abc_squared();
        let m = q
            .match_suffix(&"xabbcabbc".chars().collect::<Vec<_>>())
            .unwrap();
        assert_eq!((m.start, m.i, m.length), (1, 2, 8));
        assert!(q
            .match_suffix(&"abbcabc".chars().collect::<Vec<_>>())
            .is_none());
    }

    #[test]
    fn generalize_recovers_run_shape() {
        let fam: Vec<(u32, Word)> = (1..=4)
            .map(|i| (i, abc_squared().instantiate(i).unwrap()))
            .collect();
        let t = generalize(&fam).unwrap();
        assert_eq!(t.segments(), abc_squared().segments());
        assert!(generalize(&fam[..2]).is_none());
        let gappy = vec![fam[0].clone(), fam[1].clone(), fam[3].clone()];
        assert!(generalize(&gappy).is_none());
        let doubled: Vec<(u32, Word)> = (1..=3)
            .map(|i| (i, Word::from_letters(vec!['b'; 2 * i as usize])))
            .collect();
        assert!(generalize(&doubled).is_none());
    }

    #[test]
    fn runs_of_pattern() {
        let runs = abc_squared().runs();
        assert_eq!(runs.len(), 6);
        assert_eq!(runs[1], ('b', RunLength::Param));
        assert_eq!(runs[2], ('c', RunLength::Fixed(1)));
    }

    proptest! {
        #[test]
        fn instance_contains_full_span_match(i in 1u32..12, reps in 1usize..4) {
            let mut segs = Vec::new();
            for _ in 0..reps {
                segs.extend([c("a"), Segment::Param('b'), c("c")]);
            }
            let p = ParamPattern::new(segs, 1).unwrap();
            let word = p.instantiate(i).unwrap();
            let full = PatternMatch { start: 0, i, length: word.len() };
            prop_assert!(p.find_matches(&word).contains(&full));
        }

        #[test]
        fn matches_reproduce_host_factor(host in "[abc]{0,16}") {
            let p = abc_squared();
            let w = Word::from(host.as_str());
            for m in p.find_matches(&w) {
                prop_assert_eq!(
                    p.instantiate(m.i).unwrap(),
                    w.factor(m.start, m.start + m.length)
                );
            }
        }
    }
}
