//! `solve`: bounded deciders over instance files.
//!
//! Problem-specific lines beyond `elem:`/`target:`/`bound:`:
//! - gpcp: `elem:` lines are `u_i`, `v:` lines are `v_i`, optional `a:`,
//!   `target:` is `b`, optional `mode: group|monoid`
//! - twisted: first `elem:` is `u`, `target:` is `v`, `phi:`/`psi:` lines
//!   list generator images in order (identity when absent)
//! - factor: `elem:` lines generate `A`, `b-gen:` lines generate `B`,
//!   `target:` is `w`

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Subcommand};
use gtc_core::platform::{Element, Platform, SubgroupGens};
use gtc_core::problems::{
    factorization_decide_bounded, gpcp_bounded_search, kp_decide_bounded, smp_decide_bounded, ssp_decide,
    twisted_conjugacy_bounded, GpcpMode, ProblemInstance,
};
use gtc_core::search::Search;
use gtc_core::tietze::GenMap;
use gtc_core::Word;

use crate::read;

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Overrides the instance's `bound:` line
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Subcommand)]
pub enum SolveCommand {
    /// Subset sum
    Ssp(SolveArgs),
    /// Knapsack (bound = largest exponent, default 16)
    Kp(SolveArgs),
    /// Submonoid membership (bound = product length, default 6)
    Smp(SolveArgs),
    /// Post correspondence in a free group or monoid (default bound 6)
    Gpcp(SolveArgs),
    /// Twisted conjugacy in a free group (default bound 5)
    Twisted(SolveArgs),
    /// Factorization `w = ab` (default bound 4)
    Factor(SolveArgs),
}

fn bound(args: &SolveArgs, inst: &ProblemInstance, default: usize) -> Result<usize> {
    match args.bound.or(inst.bound).unwrap_or(default) {
        0 => bail!("bound must be positive"),
        b => Ok(b),
    }
}

fn free_word(e: &Element) -> Result<Word> {
    match e {
        Element::Free(w) => Ok(w.clone()),
        other => bail!("expected a free-group word, got {other}"),
    }
}

fn free_rank(inst: &ProblemInstance) -> Result<usize> {
    match inst.platform {
        Platform::Free { rank } => Ok(rank),
        ref other => bail!("this problem needs a free platform, got {other}"),
    }
}

fn gen_map(inst: &ProblemInstance, key: &str, rank: usize) -> Result<GenMap> {
    let images = inst.aux_values(key);
    if images.is_empty() {
        return Ok(GenMap::identity(rank));
    }
    let words = images.iter().map(|w| Word::parse(w, rank)).collect::<gtc_core::Result<Vec<_>>>()?;
    Ok(GenMap::new(rank, words)?)
}

fn report<T>(name: &str, s: &Search<T>, show: impl Fn(&T) -> String) -> String {
    let mut out = format!("problem: {name}\nfound: {}\n", s.found());
    if let Some(w) = &s.witness {
        let _ = writeln!(out, "witness: {}", show(w));
    }
    let _ = writeln!(out, "work: {}", s.work);
    out
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cmd: SolveCommand) -> Result<u8> {
    let args = match &cmd {
        SolveCommand::Ssp(a)
        | SolveCommand::Kp(a)
        | SolveCommand::Smp(a)
        | SolveCommand::Gpcp(a)
        | SolveCommand::Twisted(a)
        | SolveCommand::Factor(a) => a,
    };
    let inst = ProblemInstance::parse(&read(&args.instance)?)?;
    let text = match &cmd {
        SolveCommand::Ssp(_) => report("ssp", &ssp_decide(&inst)?, |e| join(e)),
        SolveCommand::Kp(_) => report("kp", &kp_decide_bounded(&inst, bound(args, &inst, 16)? as u64)?, |e| join(e)),
        SolveCommand::Smp(_) => report("smp", &smp_decide_bounded(&inst, bound(args, &inst, 6)?)?, |e| join(e)),
        SolveCommand::Gpcp(_) => {
            let rank = free_rank(&inst)?;
            let u = inst.elems.iter().map(free_word).collect::<Result<Vec<_>>>()?;
            let v = inst.aux_values("v").iter().map(|w| Word::parse(w, rank)).collect::<gtc_core::Result<Vec<_>>>()?;
            let a = match inst.aux_values("a").as_slice() {
                [] => Word::identity(rank),
                [w] => Word::parse(w, rank)?,
                _ => bail!("at most one `a:` line"),
            };
            let mode = match inst.aux_values("mode").as_slice() {
                [] | ["group"] => GpcpMode::Group,
                ["monoid"] => GpcpMode::Monoid,
                other => bail!("bad mode {other:?}"),
            };
            let b = free_word(&inst.target)?;
            report("gpcp", &gpcp_bounded_search(&u, &v, &a, &b, bound(args, &inst, 6)?, mode)?, Word::to_string)
        }
        SolveCommand::Twisted(_) => {
            let rank = free_rank(&inst)?;
            let u = free_word(inst.elems.first().ok_or_else(|| anyhow!("missing `elem:` line for u"))?)?;
            let v = free_word(&inst.target)?;
            let phi = gen_map(&inst, "phi", rank)?;
            let psi = gen_map(&inst, "psi", rank)?;
            report("twisted", &twisted_conjugacy_bounded(&u, &v, &phi, &psi, bound(args, &inst, 5)?)?, Word::to_string)
        }
        SolveCommand::Factor(_) => {
            let b_gens = inst
                .aux_values("b-gen")
                .iter()
                .map(|e| inst.platform.parse_element(e))
                .collect::<gtc_core::Result<Vec<_>>>()?;
            let a = SubgroupGens::new(inst.platform.clone(), inst.elems.clone())?;
            let b = SubgroupGens::new(inst.platform.clone(), b_gens)?;
            let s = factorization_decide_bounded(&inst.target, &a, &b, bound(args, &inst, 4)?)?;
            report("factor", &s, |(x, y)| format!("a={x} b={y}"))
        }
    };
    print!("{text}");
    Ok(0)
}
