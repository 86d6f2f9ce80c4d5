use std::fs;

use thiserror::Error;

use speciallab_core::language::{
    cf_verdict, enumerate_slice, export_lhs_grammar, wp_member, LanguageError, WpQuery,
};
use speciallab_core::presentations::{
    make_mn, make_pi, parse_presentation, render_segments, PresentationError, PresentationSchema,
};
use speciallab_core::rewriting::{
    CompleteSystem, OverlapKind, ParamRelation, RewriteError, RewriteSystem, Verdict,
};
use speciallab_core::special::{
    check_biprefix, classify_units, compute_lambda, default_witness_bound, is_left_invertible,
    is_right_invertible, minimal_factorization, units_presentation, SpecialError,
};
use speciallab_core::words::{Alphabet, Segment, Word, WordError};

use crate::report::{Outcome, Report};
use crate::{Cli, Command, Family};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("no presentation given: use --family with --n, or --file")]
    NoPresentation,
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("completeness not established: {0}")]
    NotComplete(RewriteError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

struct Ctx {
    schema: Option<PresentationSchema>,
    family: Option<Family>,
    i_bound: u32,
    witness_bound: Option<usize>,
    e_bound: u32,
}

impl Ctx {
    fn schema(&self) -> Result<&PresentationSchema, CliError> {
        self.schema.as_ref().ok_or(CliError::NoPresentation)
    }

    fn system(&self) -> Result<RewriteSystem, CliError> {
        Ok(self.schema()?.to_system()?)
    }

    fn alphabet(&self) -> Result<&Alphabet, CliError> {
        Ok(&self.schema()?.alphabet)
    }

    /// Certifies completeness up to the parameter bound; queries that rely
    /// on unique normal forms go through here.
    fn complete(&self) -> Result<CompleteSystem, CliError> {
        CompleteSystem::certify(self.system()?, self.i_bound).map_err(|e| match e {
            e @ RewriteError::NotConfluent { .. } => CliError::NotComplete(e),
            e => CliError::Rewrite(e),
        })
    }

    fn witness_bound(&self, sys: &RewriteSystem) -> usize {
        self.witness_bound
            .unwrap_or_else(|| default_witness_bound(sys, self.i_bound))
    }

    fn word(&self, text: &str) -> Result<Word, CliError> {
        Ok(self.alphabet()?.parse_word(text)?)
    }

    fn render(&self, w: &Word) -> String {
        match &self.schema {
            Some(s) => s.alphabet.render(w),
            None => w.to_string(),
        }
    }

    fn segments(&self, segments: &[Segment]) -> String {
        match &self.schema {
            Some(s) => render_segments(&s.alphabet, segments),
            None => format!("{segments:?}"),
        }
    }

    fn header(&self, r: &mut Report) -> Result<(), CliError> {
        r.push("presentation", &self.schema()?.name);
        Ok(())
    }

    fn evidence(&self, r: &mut Report, sys: &CompleteSystem) {
        r.push("i_bound", self.i_bound);
        r.push(
            "completeness",
            format!(
                "terminating; {} critical pairs joinable up to i = {}",
                sys.evidence().examined,
                sys.bound()
            ),
        );
    }
}

fn load(cli: &Cli) -> Result<Option<PresentationSchema>, CliError> {
    if let Some(path) = &cli.file {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        return Ok(Some(parse_presentation(&text)?));
    }
    match (cli.family, cli.n) {
        (Some(Family::Pi), Some(n)) => Ok(Some(make_pi(n)?)),
        (Some(Family::Mn), Some(n)) => Ok(Some(make_mn(n)?)),
        _ => Ok(None),
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let ctx = Ctx {
        schema: load(&cli)?,
        family: cli.family,
        i_bound: cli.i_bound,
        witness_bound: cli.witness_bound.map(|b| b as usize),
        e_bound: cli.e_bound,
    };
    match &cli.command {
        Command::Check => check(&ctx),
        Command::Nf { word } => nf(&ctx, word),
        Command::Eq { u, v } => eq(&ctx, u, v),
        Command::Wp { query } => wp(&ctx, query),
        Command::Invertible { word } => invertible(&ctx, word),
        Command::Factor { word } => factor(&ctx, word),
        Command::Lambda => lambda(&ctx),
        Command::Units => units(&ctx),
        Command::Grammar => grammar(&ctx),
        Command::Slice { n } => slice(&ctx, *n),
        Command::Verdict { n } => verdict(&ctx, *n),
    }
}

fn check(ctx: &Ctx) -> Result<Outcome, CliError> {
    let sys = ctx.system()?;
    let mut r = Report::default();
    ctx.header(&mut r)?;
    for rule in sys.rules() {
        r.push(
            "rule",
            format!(
                "{} -> {}",
                ctx.segments(rule.lhs().segments()),
                ctx.segments(rule.rhs().segments())
            ),
        );
    }
    r.push("length_reducing", true);
    r.push("special", sys.is_special());
    r.push("monadic", sys.is_monadic());
    let report = sys.check_local_confluence(ctx.i_bound)?;
    r.push("i_bound", report.bound);
    r.push("critical_pairs", report.examined);
    r.push("unjoinable_pairs", report.unjoinable.len());
    r.push("mismatched_parameter_pairs", report.mismatched_params);
    for s in &report.shapes {
        let kind = match s.kind {
            OverlapKind::ProperOverlap => "proper overlap",
            OverlapKind::Inclusion => "inclusion",
        };
        let params = match s.params {
            ParamRelation::Equal => "equal parameters",
            ParamRelation::Different => "different parameters",
            ParamRelation::Unparameterized => "unparameterized",
        };
        let shape = s
            .shape
            .as_ref()
            .map(|t| ctx.segments(t.segments()))
            .unwrap_or_else(|| "no uniform shape".to_string());
        r.push(
            "overlap",
            format!(
                "{kind} of rules {} and {}, {params}, {} pairs, source {shape}",
                s.left_rule + 1,
                s.right_rule + 1,
                s.count
            ),
        );
    }
    for u in report.unjoinable.iter().take(5) {
        r.push(
            "unjoinable",
            format!(
                "source {} gives {} and {} with normal forms {} and {}",
                ctx.render(&u.pair.source),
                ctx.render(&u.pair.left_result),
                ctx.render(&u.pair.right_result),
                ctx.render(&u.left_normal),
                ctx.render(&u.right_normal)
            ),
        );
    }
    let ok = report.verdict == Verdict::LocallyConfluentUpToBound;
    r.push(
        "verdict",
        if ok {
            "locally-confluent-up-to-bound"
        } else {
            "refuted"
        },
    );
    Ok(Outcome {
        report: r,
        positive: ok,
    })
}

fn nf(ctx: &Ctx, word: &str) -> Result<Outcome, CliError> {
    let sys = ctx.system()?;
    let w = ctx.word(word)?;
    let red = sys.normal_form_traced(&w, 0)?;
    let mut r = Report::default();
    ctx.header(&mut r)?;
    r.push("word", ctx.render(&w));
    r.push("normal_form", ctx.render(&red.normal_form));
    r.push("steps", red.total_steps);
    r.push("strategy", "leftmost");
    Ok(Outcome {
        report: r,
        positive: true,
    })
}

fn eq(ctx: &Ctx, u: &str, v: &str) -> Result<Outcome, CliError> {
    let (u, v) = (ctx.word(u)?, ctx.word(v)?);
    let sys = ctx.complete()?;
    let (nu, nv) = (sys.normal_form(&u), sys.normal_form(&v));
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("normal_form_u", ctx.render(&nu));
    r.push("normal_form_v", ctx.render(&nv));
    r.push("equal", nu == nv);
    Ok(Outcome {
        report: r,
        positive: nu == nv,
    })
}

fn wp(ctx: &Ctx, query: &str) -> Result<Outcome, CliError> {
    let q = WpQuery::parse(ctx.alphabet()?, query)?;
    let sys = ctx.complete()?;
    let member = wp_member(&sys, &q);
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("u", ctx.render(&q.u));
    r.push("v", ctx.render(&q.v()));
    r.push("member", member);
    Ok(Outcome {
        report: r,
        positive: member,
    })
}

fn invertible(ctx: &Ctx, word: &str) -> Result<Outcome, CliError> {
    let w = ctx.word(word)?;
    let sys = ctx.complete()?;
    let bound = ctx.witness_bound(sys.system());
    let right = is_right_invertible(&sys, &w, bound).and_then(|x| x.right);
    let left = is_left_invertible(&sys, &w, bound).and_then(|x| x.left);
    let show = |x: &Option<Word>| match x {
        Some(x) => ctx.render(x),
        None => "none within bound".to_string(),
    };
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("witness_bound", bound);
    r.push("word", ctx.render(&w));
    r.push("right_inverse", show(&right));
    r.push("left_inverse", show(&left));
    let both = right.is_some() && left.is_some();
    r.push("invertible", both);
    Ok(Outcome {
        report: r,
        positive: both,
    })
}

fn factor(ctx: &Ctx, word: &str) -> Result<Outcome, CliError> {
    let w = ctx.word(word)?;
    let sys = ctx.complete()?;
    let bound = ctx.witness_bound(sys.system());
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("witness_bound", bound);
    r.push("word", ctx.render(&w));
    match minimal_factorization(&sys, &w, bound) {
        Ok(f) => {
            r.push("factor_count", f.factors.len());
            for x in &f.factors {
                r.push("factor", ctx.render(x));
            }
            Ok(Outcome {
                report: r,
                positive: true,
            })
        }
        Err(e @ SpecialError::NotInvertible { .. }) => {
            r.push("invertible", false);
            r.push("reason", e);
            Ok(Outcome {
                report: r,
                positive: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn lambda(ctx: &Ctx) -> Result<Outcome, CliError> {
    let sys = ctx.complete()?;
    let bound = ctx.witness_bound(sys.system());
    let lam = compute_lambda(&sys, ctx.i_bound, bound)?;
    let check = check_biprefix(&lam);
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("witness_bound", bound);
    for p in &lam.patterns {
        let range = if p.is_constant() {
            String::new()
        } else {
            format!(" (i >= {})", p.param_min())
        };
        r.push("element", format!("{}{range}", ctx.segments(p.segments())));
    }
    for w in &lam.warnings {
        r.push("warning", w);
    }
    r.push("biprefix", check.holds);
    r.push("biprefix_exhaustive_up_to", check.bound);
    if let Some(v) = &check.violation {
        r.push(
            "biprefix_violation",
            format!(
                "{} vs {}",
                ctx.render(&v.shorter.word),
                ctx.render(&v.longer.word)
            ),
        );
    }
    Ok(Outcome {
        report: r,
        positive: check.holds,
    })
}

fn units(ctx: &Ctx) -> Result<Outcome, CliError> {
    let sys = ctx.complete()?;
    let bound = ctx.witness_bound(sys.system());
    let lam = compute_lambda(&sys, ctx.i_bound, bound)?;
    let up = units_presentation(&sys, &lam)?;
    let structure = classify_units(&up);
    let mut r = Report::default();
    ctx.header(&mut r)?;
    ctx.evidence(&mut r, &sys);
    r.push("witness_bound", bound);
    for (family, p) in up.generator_families().iter().zip(&up.families) {
        r.push(
            "generator",
            format!("{family} represented by {}", ctx.segments(p.segments())),
        );
    }
    for rel in &up.relators {
        r.push("relator", up.render_relator(rel));
    }
    r.push("structure", structure.describe());
    match structure.finitely_generated() {
        Some(fg) => r.push("finitely_generated", fg),
        None => r.push("finitely_generated", "unknown"),
    }
    if up.special {
        r.push(
            "maximal_subgroups",
            "all isomorphic to the group of units (known for special monoids)",
        );
    }
    for w in &lam.warnings {
        r.push("warning", w);
    }
    Ok(Outcome {
        report: r,
        positive: true,
    })
}

fn grammar(ctx: &Ctx) -> Result<Outcome, CliError> {
    let sys = ctx.system()?;
    let mut r = Report::default();
    ctx.header(&mut r)?;
    let mut all = true;
    for (k, rule) in sys.rules().iter().enumerate() {
        r.push(
            "rule",
            format!("{} {}", k + 1, ctx.segments(rule.lhs().segments())),
        );
        match export_lhs_grammar(rule.lhs()) {
            Ok(g) => {
                for line in g.render(Some(sys.alphabet())).lines() {
                    r.push("grammar", line);
                }
            }
            Err(e @ LanguageError::NotContextFree { .. }) => {
                all = false;
                r.push("rejected", format!("not context-free: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome {
        report: r,
        positive: all,
    })
}

fn slice(ctx: &Ctx, n: usize) -> Result<Outcome, CliError> {
    let schema = match &ctx.schema {
        Some(s) => s.clone(),
        None => make_pi(n)?,
    };
    let letters = if ctx.family == Some(Family::Mn) {
        ["a", "b1", "c"]
    } else {
        ["a", "b", "c"]
    };
    let sys = CompleteSystem::certify(schema.to_system()?, ctx.i_bound.max(ctx.e_bound))
        .map_err(CliError::NotComplete)?;
    let report = enumerate_slice(&sys, letters, n, ctx.e_bound)?;
    let tuple = |t: &Vec<u32>| {
        format!(
            "({})",
            t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        )
    };
    let list = |ts: &[Vec<u32>]| ts.iter().map(tuple).collect::<Vec<_>>().join(" ");
    let mut r = Report::default();
    r.push("presentation", &schema.name);
    r.push("n", report.n);
    r.push("e_bound", report.e_bound);
    r.push("letters", letters.join(" "));
    r.push("tested", report.tested);
    r.push("members", list(&report.members));
    r.push("expected", list(&report.expected));
    r.push("agreement", report.agreement);
    Ok(Outcome {
        report: r,
        positive: report.agreement,
    })
}

fn verdict(ctx: &Ctx, n: usize) -> Result<Outcome, CliError> {
    let v = cf_verdict(n, ctx.e_bound)?;
    let mut r = Report::default();
    r.push("presentation", format!("Pi_{n}"));
    r.push("context_free", v.context_free);
    r.push("basis", v.basis);
    if let Some(g) = &v.grammar {
        for line in g.to_string().lines() {
            r.push("grammar", line);
        }
    }
    if let Some(s) = &v.slice {
        r.push("e_bound", s.e_bound);
        r.push("slice_tested", s.tested);
        r.push("slice_members", s.members.len());
        r.push("slice_agreement", s.agreement);
    }
    Ok(Outcome {
        report: r,
        positive: v.context_free,
    })
}
