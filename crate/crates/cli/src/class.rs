use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use avoidance_core::perm::{family_a, family_a_ki};
use avoidance_core::{Family, PatternSet};

use crate::args::ClassArgs;

#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub set: PatternSet,
    pub family: Option<Family>,
}

impl ClassSpec {
    pub fn label(&self) -> String {
        match self.family {
            Some(f) => f.to_string(),
            None => self.set.to_string(),
        }
    }
}

fn parse_number(token: &str, what: &str) -> Result<usize> {
    token
        .trim()
        .parse()
        .with_context(|| format!("invalid {what} {token:?} in --family"))
}

/// `(k, i)` from the `--family` tokens and the `--k`/`--i` flags.
fn family_parameters(tokens: &[String], k: Option<usize>, i: Option<usize>) -> Result<(usize, Option<usize>)> {
    let joined = tokens.join(" ");
    let joined = joined.trim();
    let (name, rest): (&str, Vec<String>) = match joined.find('(') {
        Some(open) => {
            let Some(inner) = joined[open + 1..].strip_suffix(')') else {
                bail!("unbalanced parentheses in --family {joined:?}");
            };
            (&joined[..open], inner.split(',').map(|s| s.trim().to_string()).collect())
        }
        None => (tokens[0].as_str(), tokens[1..].to_vec()),
    };
    if !name.trim().eq_ignore_ascii_case("a") {
        bail!("unknown family {name:?}; only A(k) and A(k,i) are supported");
    }
    if rest.len() > 2 {
        bail!("--family takes at most k and i");
    }
    let tk = rest.first().map(|t| parse_number(t, "k")).transpose()?;
    let ti = rest.get(1).map(|t| parse_number(t, "i")).transpose()?;
    let pick = |a: Option<usize>, b: Option<usize>, what: &str| match (a, b) {
        (Some(x), Some(y)) if x != y => bail!("--family gives {what} = {x} but --{what} = {y}"),
        (x, y) => Ok(x.or(y)),
    };
    let k = pick(tk, k, "k")?.context("--family needs k, e.g. `--family A 5` or `--k 5`")?;
    Ok((k, pick(ti, i, "i")?))
}

/// The family a literal pattern set coincides with, if any.
fn recognize(set: &PatternSet) -> Option<Family> {
    let k = set.patterns().first()?.len();
    if k < 3 || set.patterns().iter().any(|q| q.len() != k) {
        return None;
    }
    let as_set = |s: &PatternSet| s.patterns().iter().cloned().collect::<BTreeSet<_>>();
    let mine = as_set(set);
    if family_a(k).is_ok_and(|f| as_set(&f) == mine) {
        return Some(Family::A { k });
    }
    (1..=k).find_map(|i| {
        family_a_ki(k, i)
            .is_ok_and(|f| as_set(&f) == mine)
            .then_some(Family::Aki { k, i })
    })
}

pub fn resolve(args: &ClassArgs) -> Result<ClassSpec> {
    match (&args.patterns, &args.family) {
        (Some(_), Some(_)) => bail!("give either --patterns or --family, not both"),
        (None, None) => bail!("a pattern set is required: --patterns LIST or --family A K [I]"),
        (Some(list), None) => {
            if args.k.is_some() || args.i.is_some() {
                bail!("--k and --i only apply to --family");
            }
            let set: PatternSet = list.parse().with_context(|| format!("invalid --patterns {list:?}"))?;
            if set.is_empty() {
                bail!("--patterns is empty");
            }
            let family = recognize(&set);
            Ok(ClassSpec { set, family })
        }
        (None, Some(tokens)) => {
            let (k, i) = family_parameters(tokens, args.k, args.i)?;
            let set = match i {
                Some(i) => family_a_ki(k, i)?,
                None => family_a(k)?,
            };
            Ok(ClassSpec { family: set.family(), set })
        }
    }
}
