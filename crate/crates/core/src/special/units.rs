//! Presentation of the submonoid generated by the minimal-word code, obtained
//! by decoding every defining relation over the code, plus recognition of the
//! few group shapes such presentations take here.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::lambda::{check_biprefix, LambdaElement, MinimalWordSet};
use super::SpecialError;
use crate::rewriting::CompleteSystem;
use crate::words::ParamPattern;

/// How a generator occurrence depends on the rule parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamUse {
    /// Indexed by the relator's own parameter.
    Shared,
    Fixed(u32),
    /// The code word has no parameter.
    Unparameterized,
}

/// A generator occurrence: code pattern `family` at some parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenTerm {
    pub family: usize,
    pub param: ParamUse,
}

/// `lhs = rhs` over the abstract generators, coming from rule `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub rule: usize,
    pub lhs: Vec<GenTerm>,
    pub rhs: Vec<GenTerm>,
    /// `None` when the relator holds schematically for every parameter
    /// value; otherwise the single value it was instantiated at.
    pub at: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitsPresentation {
    /// One generator family per code pattern; parameterized patterns give
    /// one generator per parameter value.
    pub families: Vec<ParamPattern>,
    pub relators: Vec<Relator>,
    /// Largest parameter value at which decodability was checked.
    pub bound: u32,
    /// Whether the underlying system is special.
    pub special: bool,
}

fn term_for(element: &LambdaElement, rule_param: Option<u32>) -> GenTerm {
    let param = match (element.i, rule_param) {
        (None, _) => ParamUse::Unparameterized,
        (Some(v), Some(i)) if v == i => ParamUse::Shared,
        (Some(v), _) => ParamUse::Fixed(v),
    };
    GenTerm {
        family: element.pattern,
        param,
    }
}

/// Decodes both sides of every rule instance (parameter up to the code's
/// bound) over `lam` and records the resulting relators. Relators that keep
/// one shape across all checked values are emitted once, schematically.
pub fn units_presentation(
    sys: &CompleteSystem,
    lam: &MinimalWordSet,
) -> Result<UnitsPresentation, SpecialError> {
    let report = check_biprefix(lam);
    if let Some(v) = report.violation {
        return Err(SpecialError::NotBiprefix(format!(
            "{} is a proper {} of {}",
            v.shorter.word,
            match v.kind {
                super::AffixKind::Prefix => "prefix",
                super::AffixKind::Suffix => "suffix",
            },
            v.longer.word
        )));
    }
    let mut relators = Vec::new();
    for (idx, rule) in sys.system().rules().iter().enumerate() {
        let mut per_param: Vec<(u32, Vec<GenTerm>, Vec<GenTerm>)> = Vec::new();
        for i in rule.params_up_to(lam.bound.max(rule.param_min())) {
            let (l, r) = rule.instance(i).expect("admissible parameter");
            let shared = rule.is_parametric().then_some(i);
            let decode = |w| {
                lam.decode(w)
                    .map(|els| els.iter().map(|e| term_for(e, shared)).collect::<Vec<_>>())
                    .ok_or_else(|| SpecialError::DecodeFailure {
                        rule: idx,
                        i,
                        word: w.clone(),
                    })
            };
            per_param.push((i, decode(&l)?, decode(&r)?));
        }
        let (_, l0, r0) = &per_param[0];
        if per_param.iter().all(|(_, l, r)| l == l0 && r == r0) {
            relators.push(Relator {
                rule: idx,
                lhs: l0.clone(),
                rhs: r0.clone(),
                at: None,
            });
        } else {
            for (i, l, r) in per_param {
                let fix = |terms: Vec<GenTerm>| {
                    terms
                        .into_iter()
                        .map(|t| match t.param {
                            ParamUse::Shared => GenTerm {
                                family: t.family,
                                param: ParamUse::Fixed(i),
                            },
                            _ => t,
                        })
                        .collect()
                };
                relators.push(Relator {
                    rule: idx,
                    lhs: fix(l),
                    rhs: fix(r),
                    at: Some(i),
                });
            }
        }
    }
    Ok(UnitsPresentation {
        families: lam.patterns.clone(),
        relators,
        bound: lam.bound,
        special: sys.system().is_special(),
    })
}

impl UnitsPresentation {
    pub fn generator_name(&self, term: &GenTerm) -> String {
        let base = if self.families.len() == 1 {
            "x".to_string()
        } else {
            format!("x{}", term.family + 1)
        };
        match term.param {
            ParamUse::Shared => format!("{base}_i"),
            ParamUse::Fixed(v) => format!("{base}_{v}"),
            ParamUse::Unparameterized => base,
        }
    }

    /// Generator families as `x_i (i >= 1)` style strings.
    pub fn generator_families(&self) -> Vec<String> {
        self.families
            .iter()
            .enumerate()
            .map(|(family, p)| {
                if p.is_constant() {
                    self.generator_name(&GenTerm {
                        family,
                        param: ParamUse::Unparameterized,
                    })
                } else {
                    format!(
                        "{} (i >= {})",
                        self.generator_name(&GenTerm {
                            family,
                            param: ParamUse::Shared,
                        }),
                        p.param_min()
                    )
                }
            })
            .collect()
    }

    fn render_side(&self, terms: &[GenTerm]) -> String {
        if terms.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut k = 0;
        while k < terms.len() {
            let mut run = 1;
            while k + run < terms.len() && terms[k + run] == terms[k] {
                run += 1;
            }
            let name = self.generator_name(&terms[k]);
            parts.push(if run == 1 {
                name
            } else {
                format!("{name}^{run}")
            });
            k += run;
        }
        parts.join(" ")
    }

    pub fn render_relator(&self, r: &Relator) -> String {
        format!(
            "{} = {}",
            self.render_side(&r.lhs),
            self.render_side(&r.rhs)
        )
    }

    /// Relators holding at parameter value `i`, with shared parameters
    /// replaced by `i`. Their number equals the number of rules.
    pub fn relators_at(&self, i: u32) -> Vec<(Vec<GenTerm>, Vec<GenTerm>)> {
        let fix = |terms: &[GenTerm]| -> Vec<GenTerm> {
            terms
                .iter()
                .map(|t| match t.param {
                    ParamUse::Shared => GenTerm {
                        family: t.family,
                        param: ParamUse::Fixed(i),
                    },
                    _ => *t,
                })
                .collect()
        };
        self.relators
            .iter()
            .filter(|r| r.at.is_none() || r.at == Some(i))
            .map(|r| (fix(&r.lhs), fix(&r.rhs)))
            .collect()
    }
}

impl fmt::Display for UnitsPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| self.render_relator(r))
            .collect();
        write!(
            f,
            "< {} | {} >",
            self.generator_families().join(", "),
            rels.join(", ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorCount {
    Finite(usize),
    Infinite,
}

impl fmt::Display for FactorCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorCount::Finite(n) => write!(f, "{n}"),
            FactorCount::Infinite => write!(f, "infinitely many"),
        }
    }
}

/// A finite group given by a multiplication table on identity plus the
/// listed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub order: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitsStructure {
    /// Every relator is `x^n = 1` on its own generator.
    FreeProductOfCyclic {
        order: usize,
        factors: FactorCount,
    },
    /// Relators form the multiplication table of a finite group, repeated
    /// once per parameter value.
    FreeProductOfFinite {
        group: FiniteGroup,
        copies: FactorCount,
    },
    Unclassified {
        reason: String,
    },
}

impl UnitsStructure {
    pub fn finitely_generated(&self) -> Option<bool> {
        match self {
            UnitsStructure::FreeProductOfCyclic { order: 1, .. } => Some(true),
            UnitsStructure::FreeProductOfCyclic { factors, .. } => {
                Some(matches!(factors, FactorCount::Finite(_)))
            }
            UnitsStructure::FreeProductOfFinite { copies, .. } => {
                Some(matches!(copies, FactorCount::Finite(_)))
            }
            UnitsStructure::Unclassified { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            UnitsStructure::FreeProductOfCyclic { order: 1, .. } => "trivial group".to_string(),
            UnitsStructure::FreeProductOfCyclic {
                order,
                factors: FactorCount::Finite(1),
            } => format!("C{order}"),
            UnitsStructure::FreeProductOfCyclic { order, factors } => {
                format!("free product of {factors} copies of C{order}, one per generator")
            }
            UnitsStructure::FreeProductOfFinite {
                group,
                copies: FactorCount::Finite(1),
            } => group.name.clone(),
            UnitsStructure::FreeProductOfFinite { group, copies } => format!(
                "free product of {copies} copies of {}, one per parameter value",
                group.name
            ),
            UnitsStructure::Unclassified { reason } => format!("unclassified ({reason})"),
        }
    }
}

fn unclassified(reason: &str) -> UnitsStructure {
    UnitsStructure::Unclassified {
        reason: reason.to_string(),
    }
}

fn cyclic_shape(up: &UnitsPresentation) -> Option<UnitsStructure> {
    let mut order = None;
    let mut used: BTreeSet<GenTerm> = BTreeSet::new();
    for r in &up.relators {
        if !r.rhs.is_empty() || r.lhs.is_empty() || r.at.is_some() {
            return None;
        }
        let g = r.lhs[0];
        if r.lhs.iter().any(|t| *t != g) || !used.insert(g) {
            return None;
        }
        match order {
            None => order = Some(r.lhs.len()),
            Some(n) if n == r.lhs.len() => {}
            Some(_) => return None,
        }
    }
    let order = order?;
    let mut infinite = false;
    for (family, p) in up.families.iter().enumerate() {
        let uses: Vec<&GenTerm> = used.iter().filter(|t| t.family == family).collect();
        match (p.is_constant(), uses.as_slice()) {
            (true, [t]) if t.param == ParamUse::Unparameterized => {}
            (false, [t]) if t.param == ParamUse::Shared => infinite = true,
            // Parameterized generators without a schematic relator would be
            // free, and constant ones would be unconstrained.
            _ => return None,
        }
    }
    Some(UnitsStructure::FreeProductOfCyclic {
        order,
        factors: if infinite {
            FactorCount::Infinite
        } else {
            FactorCount::Finite(used.len())
        },
    })
}

/// Elements are `0` (identity) and `1..=k` for the generator families.
fn identify_group(table: &[Vec<usize>]) -> Option<FiniteGroup> {
    let m = table.len();
    let op = |a: usize, b: usize| table[a][b];
    for a in 0..m {
        if op(0, a) != a || op(a, 0) != a || !(0..m).any(|b| op(a, b) == 0) {
            return None;
        }
        for b in 0..m {
            for c in 0..m {
                if op(op(a, b), c) != op(a, op(b, c)) {
                    return None;
                }
            }
        }
    }
    let abelian = (0..m).all(|a| (0..m).all(|b| op(a, b) == op(b, a)));
    let exponent_two = (0..m).all(|a| op(a, a) == 0);
    let name = if abelian && exponent_two && m.is_power_of_two() && m > 1 {
        vec!["C2"; m.trailing_zeros() as usize].join("×")
    } else {
        let order_of = |a: usize| {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = op(x, a);
                k += 1;
            }
            k
        };
        if (0..m).any(|a| order_of(a) == m) {
            format!("C{m}")
        } else {
            format!("group of order {m}")
        }
    };
    Some(FiniteGroup { order: m, name })
}

fn table_shape(up: &UnitsPresentation) -> Option<UnitsStructure> {
    let first = up.relators.first()?;
    let param = first.lhs.first()?.param;
    if !matches!(param, ParamUse::Shared | ParamUse::Unparameterized) {
        return None;
    }
    let mut families: BTreeSet<usize> = BTreeSet::new();
    let mut products: BTreeMap<(usize, usize), Option<usize>> = BTreeMap::new();
    for r in &up.relators {
        if r.at.is_some()
            || r.lhs.len() != 2
            || r.rhs.len() > 1
            || r.lhs.iter().chain(&r.rhs).any(|t| t.param != param)
        {
            return None;
        }
        let key = (r.lhs[0].family, r.lhs[1].family);
        let value = r.rhs.first().map(|t| t.family);
        families.extend([key.0, key.1]);
        families.extend(value);
        if products.insert(key, value).is_some() {
            return None;
        }
    }
    let elements: Vec<usize> = families.into_iter().collect();
    let index = |f: usize| elements.iter().position(|&e| e == f).unwrap() + 1;
    let m = elements.len() + 1;
    let mut table = vec![vec![0usize; m]; m];
    for (a, row) in table.iter_mut().enumerate() {
        row[0] = a;
    }
    table[0] = (0..m).collect();
    for (x, &fx) in elements.iter().enumerate() {
        for (y, &fy) in elements.iter().enumerate() {
            let product = products.get(&(fx, fy))?;
            table[x + 1][y + 1] = product.map(index).unwrap_or(0);
        }
    }
    let group = identify_group(&table)?;
    Some(UnitsStructure::FreeProductOfFinite {
        group,
        copies: if param == ParamUse::Shared {
            FactorCount::Infinite
        } else {
            FactorCount::Finite(1)
        },
    })
}

/// Recognizes free products of cyclic groups (`x^n = 1` per generator) and
/// free products of copies of a finite group given by its multiplication
/// table; anything else is reported as unclassified.
pub fn classify_units(up: &UnitsPresentation) -> UnitsStructure {
    if up.relators.iter().any(|r| r.at.is_some()) {
        return unclassified("relators are not uniform in the parameter");
    }
    cyclic_shape(up)
        .or_else(|| table_shape(up))
        .unwrap_or_else(|| unclassified("relators match no recognized shape"))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{ab_squared, pi};
    use super::*;
    use crate::special::compute_lambda;

    #[test]
    fn pi_families_give_cyclic_free_products() {
        for n in [2usize, 3] {
            let sys = pi(n);
            let lam = compute_lambda(&sys, 4, 40).unwrap();
            let up = units_presentation(&sys, &lam).unwrap();
            assert_eq!(up.relators.len(), 1);
            assert_eq!(up.render_relator(&up.relators[0]), format!("x_i^{n} = 1"));
            assert_eq!(up.generator_families(), vec!["x_i (i >= 1)".to_string()]);
            let structure = classify_units(&up);
            assert_eq!(
                structure,
                UnitsStructure::FreeProductOfCyclic {
                    order: n,
                    factors: FactorCount::Infinite
                }
            );
            assert_eq!(structure.finitely_generated(), Some(false));
            for i in 1..=4 {
                assert_eq!(up.relators_at(i).len(), sys.system().rules().len());
            }
        }
    }

    #[test]
    fn single_constant_generator() {
        let sys = ab_squared();
        let lam = compute_lambda(&sys, 4, 8).unwrap();
        let up = units_presentation(&sys, &lam).unwrap();
        assert_eq!(up.to_string(), "< x | x^2 = 1 >");
        let structure = classify_units(&up);
        assert_eq!(structure.describe(), "C2");
        assert_eq!(structure.finitely_generated(), Some(true));
    }

    #[test]
    fn undecodable_rule_is_rejected() {
        let sys = pi(2);
        let lam = MinimalWordSet::new(
            vec![ParamPattern::constant(crate::words::Word::from("abc")).unwrap()],
            3,
        );
        assert!(matches!(
            units_presentation(&sys, &lam),
            Err(SpecialError::DecodeFailure { i: 2, .. })
        ));
    }

    #[test]
    fn klein_table_is_recognized() {
        let t = |family| GenTerm {
            family,
            param: ParamUse::Shared,
        };
        let mut relators = Vec::new();
        for a in 1..=3usize {
            for b in 1..=3usize {
                let c = a ^ b;
                relators.push(Relator {
                    rule: relators.len(),
                    lhs: vec![t(a - 1), t(b - 1)],
                    rhs: if c == 0 { vec![] } else { vec![t(c - 1)] },
                    at: None,
                });
            }
        }
        let families = (0..3)
            .map(|_| ParamPattern::constant(crate::words::Word::from("ab")).unwrap())
            .collect();
        let up = UnitsPresentation {
            families,
            relators,
            bound: 3,
            special: false,
        };
        let s = classify_units(&up);
        assert_eq!(
            s.describe(),
            "free product of infinitely many copies of C2×C2, one per parameter value"
        );
        assert_eq!(s.finitely_generated(), Some(false));
    }

    #[test]
    fn cyclic_group_of_order_three_from_table() {
        // x y = 1, y x = 1, x x = y, y y = x
        let t = |family| GenTerm {
            family,
            param: ParamUse::Unparameterized,
        };
        let rel = |a, b, c: Option<usize>| Relator {
            rule: 0,
            lhs: vec![t(a), t(b)],
            rhs: c.map(t).into_iter().collect(),
            at: None,
        };
        let families = (0..2)
            .map(|_| ParamPattern::constant(crate::words::Word::from("ab")).unwrap())
            .collect();
        let up = UnitsPresentation {
            families,
            relators: vec![
                rel(0, 1, None),
                rel(1, 0, None),
                rel(0, 0, Some(1)),
                rel(1, 1, Some(0)),
            ],
            bound: 1,
            special: false,
        };
        assert_eq!(classify_units(&up).describe(), "C3");
    }
}
