//! Compact series grammar used by `verify` and `bracket-coeff`:
//! `kdv:J`, `filtered:J`, `mu:2,1`, `file:PATH`.

use std::path::Path;

use sft_core::hierarchy::DegreeFilter;
use sft_core::hurwitz::{BranchingContext, BranchingProfile};
use sft_core::{OrbitModel, SeriesSpec};

use crate::error::CliError;
use crate::io::read_polynomial;

pub fn parse_series(
    text: &str,
    model: &OrbitModel,
    filter: DegreeFilter,
    window: u32,
    ctx: &BranchingContext,
) -> Result<SeriesSpec, CliError> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("series {text:?} is not of the form kind:args")))?;
    let level = || arg.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad level in {text:?}")));
    match kind {
        "kdv" => Ok(SeriesSpec::kdv(level()?)),
        "filtered" => Ok(SeriesSpec::filtered(model.clone(), level()?, filter, window)?),
        "mu" => {
            let mu: BranchingProfile =
                arg.trim_matches('"').parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            Ok(SeriesSpec::Branching { mu, ctx: ctx.clone() })
        }
        "file" => Ok(SeriesSpec::explicit(read_polynomial(Path::new(arg), model)?)?),
        other => Err(CliError::Usage(format!("unknown series kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<SeriesSpec, CliError> {
        parse_series(s, &OrbitModel::circle(), DegreeFilter::Target, 3, &BranchingContext::default())
    }

    #[test]
    fn grammar() {
        assert!(matches!(parse("kdv:2"), Ok(SeriesSpec::Kdv { j: 2 })));
        assert!(matches!(parse("filtered:1"), Ok(SeriesSpec::Filtered { j: 1, .. })));
        assert!(matches!(parse("mu:\"2,1\""), Ok(SeriesSpec::Branching { .. })));
        assert!(matches!(parse("kdv"), Err(CliError::Usage(_))));
        assert!(matches!(parse("kdv:x"), Err(CliError::Usage(_))));
        assert!(matches!(parse("bogus:1"), Err(CliError::Usage(_))));
        assert!(matches!(parse("file:/nonexistent/p.json"), Err(CliError::Io(_))));
    }
}
