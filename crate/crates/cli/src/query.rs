//! `bricolage query`: headless filter evaluation over an index.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use bricolage_core::{ColorSampleFilter, CollectionIndex, Error, FilterState, Srgb};
use clap::Args;

use crate::Failure;

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    /// Cover colour sample `HEX[:TOLERANCE[:MIN_PROPORTION]]`; repeat for OR.
    #[arg(long = "color", value_name = "HEX[:TOL[:MINPROP]]", value_parser = parse_color)]
    pub colors: Vec<ColorSampleFilter>,
    /// Inclusive publication-year range `MIN:MAX`.
    #[arg(long, value_name = "MIN:MAX", value_parser = parse_years)]
    pub years: Option<(i64, i64)>,
    /// Comma-separated size category indices, e.g. `0,2`.
    #[arg(long, value_name = "LIST", value_parser = parse_sizes)]
    pub sizes: Option<BTreeSet<usize>>,
    /// Print the full filter response as JSON instead of ids.
    #[arg(long)]
    pub json: bool,
}

impl QueryArgs {
    pub fn filter_state(&self) -> FilterState {
        FilterState {
            color_samples: self.colors.clone(),
            year_range: self.years,
            size_categories: self.sizes.clone().unwrap_or_default(),
        }
    }
}

pub fn parse_color(raw: &str) -> Result<ColorSampleFilter, String> {
    let mut parts = raw.split(':');
    let hex: Srgb = parts.next().unwrap_or_default().parse()?;
    let mut sample = ColorSampleFilter::from_srgb(hex);
    if let Some(tol) = parts.next() {
        sample.tolerance_de = tol.parse().map_err(|_| format!("invalid tolerance {tol:?}"))?;
        if !(sample.tolerance_de > 0.0 && sample.tolerance_de.is_finite()) {
            return Err(format!("tolerance must be positive, got {tol}"));
        }
    }
    if let Some(prop) = parts.next() {
        sample.min_proportion = prop.parse().map_err(|_| format!("invalid minimum proportion {prop:?}"))?;
        if !(0.0..=1.0).contains(&sample.min_proportion) {
            return Err(format!("minimum proportion must be in [0, 1], got {prop}"));
        }
    }
    if parts.next().is_some() {
        return Err(format!("expected HEX[:TOL[:MINPROP]], got {raw:?}"));
    }
    Ok(sample)
}

pub fn parse_years(raw: &str) -> Result<(i64, i64), String> {
    let (min, max) = raw.split_once(':').ok_or_else(|| format!("expected MIN:MAX, got {raw:?}"))?;
    let min: i64 = min.trim().parse().map_err(|_| format!("invalid year {min:?}"))?;
    let max: i64 = max.trim().parse().map_err(|_| format!("invalid year {max:?}"))?;
    if min > max {
        return Err(format!("year range {min}:{max} has min > max"));
    }
    Ok((min, max))
}

pub fn parse_sizes(raw: &str) -> Result<BTreeSet<usize>, String> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().parse::<usize>() {
            Ok(i) if i < bricolage_core::facet::MAX_SIZE_CATEGORIES => Ok(i),
            _ => Err(format!("size categories are 0..=3, got {s:?}")),
        })
        .collect()
}

pub fn run(args: QueryArgs) -> Result<(), Failure> {
    let index = CollectionIndex::load(&args.index).with_context(|| format!("loading index {}", args.index.display()))?;
    let result = index.filter(&args.filter_state()).map_err(|e| match e {
        Error::InvalidFilter(_) => Failure { code: 2, error: e.into() },
        e => Failure::from(anyhow::Error::new(e)),
    })?;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &result).context("writing output")?;
        writeln!(out).context("writing output")?;
    } else {
        for id in &result.ids {
            writeln!(out, "{id}").context("writing output")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colour_flags() {
        let s = parse_color("#FF0000").unwrap();
        assert_eq!(s, ColorSampleFilter::from_srgb(Srgb::new(255, 0, 0)));
        let s = parse_color("00ff00:12.5:0.3").unwrap();
        assert_eq!((s.tolerance_de, s.min_proportion), (12.5, 0.3));
        for bad in ["red", "#FF0000:0", "#FF0000:5:2", "#FF0000:5:0.1:9", "#FF0000:x"] {
            assert!(parse_color(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn year_and_size_flags() {
        assert_eq!(parse_years("1930:1950").unwrap(), (1930, 1950));
        assert_eq!(parse_years("1888:1888").unwrap(), (1888, 1888));
        assert!(parse_years("1950:1930").is_err());
        assert!(parse_years("1950").is_err());
        assert_eq!(parse_sizes("0,2").unwrap(), [0, 2].into());
        assert!(parse_sizes("4").is_err());
        assert!(parse_sizes("a").is_err());
    }
}
