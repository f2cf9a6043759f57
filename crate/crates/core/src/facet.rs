//! Filter families (cover colour, publication years, physical size), their
//! combination, and the data behind the timeline and size widgets.
//!
//! Colour samples combine with OR; the three families combine with AND; an
//! empty family does not filter.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::collection::{Anthology, Collection};
use crate::kmeans::{self, KMeansConfig};
use crate::palette::{self, Srgb, WheelPosition};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE_DE: f64 = 20.0;
pub const DEFAULT_MIN_PROPORTION: f64 = 0.15;
/// Upper bound on the number of size categories.
pub const MAX_SIZE_CATEGORIES: usize = 4;
pub const SIZE_SEED: u64 = 0;

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE_DE
}

fn default_min_proportion() -> f64 {
    DEFAULT_MIN_PROPORTION
}

/// A sample square placed on the colour wheel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorSampleFilter {
    #[serde(flatten)]
    pub position: WheelPosition,
    #[serde(default = "default_tolerance")]
    pub tolerance_de: f64,
    #[serde(default = "default_min_proportion")]
    pub min_proportion: f64,
}

impl ColorSampleFilter {
    pub fn new(position: WheelPosition) -> Self {
        ColorSampleFilter {
            position,
            tolerance_de: DEFAULT_TOLERANCE_DE,
            min_proportion: DEFAULT_MIN_PROPORTION,
        }
    }

    /// Sample placed where the given cover colour sits on the wheel.
    pub fn from_srgb(c: Srgb) -> Self {
        Self::new(palette::wheel_position(palette::srgb_to_lab(c)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    #[serde(default)]
    pub color_samples: Vec<ColorSampleFilter>,
    #[serde(default)]
    pub year_range: Option<(i64, i64)>,
    #[serde(default)]
    pub size_categories: BTreeSet<usize>,
}

impl FilterState {
    pub fn validate(&self) -> Result<()> {
        if let Some((min, max)) = self.year_range {
            if min > max {
                return Err(Error::InvalidFilter(format!("year range {min}..{max} has min > max")));
            }
        }
        for s in &self.color_samples {
            if !(s.tolerance_de > 0.0 && s.tolerance_de.is_finite()) {
                return Err(Error::InvalidFilter(format!("tolerance_de must be positive, got {}", s.tolerance_de)));
            }
            if !(0.0..=1.0).contains(&s.min_proportion) {
                return Err(Error::InvalidFilter(format!("min_proportion must be in [0, 1], got {}", s.min_proportion)));
            }
            if !(0.0..=1.0).contains(&s.position.radius) || !s.position.hue_deg.is_finite() {
                return Err(Error::InvalidFilter(format!(
                    "wheel position ({}, {}) outside the wheel",
                    s.position.hue_deg, s.position.radius
                )));
            }
        }
        if let Some(&c) = self.size_categories.iter().find(|&&c| c >= MAX_SIZE_CATEGORIES) {
            return Err(Error::InvalidFilter(format!("size category {c} out of range 0..=3")));
        }
        Ok(())
    }
}

/// True when some sufficiently prominent palette entry lies within the
/// sample's tolerance (inclusive).
pub fn matches_color(a: &Anthology, s: &ColorSampleFilter) -> bool {
    let target = palette::sample_to_color(s.position);
    a.palette
        .entries()
        .iter()
        .any(|e| e.proportion >= s.min_proportion && palette::delta_e(e.lab, target) <= s.tolerance_de)
}

/// True when at least one story falls inside the inclusive year range.
pub fn matches_years(a: &Anthology, (min, max): (i64, i64)) -> bool {
    a.stories.iter().any(|s| (min..=max).contains(&s.publication_year))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeCategory {
    pub index: usize,
    pub centroid_width_mm: f64,
    pub centroid_height_mm: f64,
    pub member_ids: Vec<String>,
    /// Member count relative to the largest category.
    pub darkness: f64,
}

/// Clusters anthologies by (width, height) into at most four categories,
/// ordered by centroid area.
pub fn compute_size_categories(c: &Collection) -> Result<Vec<SizeCategory>> {
    if c.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let points: Vec<[f64; 2]> = c.anthologies().iter().map(|a| [a.width_mm, a.height_mm]).collect();
    let distinct: HashSet<[u64; 2]> = points.iter().map(|p| p.map(f64::to_bits)).collect();
    let k = distinct.len().min(MAX_SIZE_CATEGORIES);
    let weights = vec![1.0; points.len()];

    let clustering = kmeans::fit(&points, &weights, KMeansConfig::new(k, SIZE_SEED));
    let mut centroids = clustering.centroids;

    // Re-index by area, then settle assignment under the lowest-index tie rule.
    let mut assignment;
    let mut rounds = 0;
    loop {
        rounds += 1;
        centroids.sort_by(|p, q| (p[0] * p[1]).total_cmp(&(q[0] * q[1])).then(p[0].total_cmp(&q[0])));
        assignment = points.iter().map(|p| kmeans::nearest(p, &centroids)).collect::<Vec<_>>();
        let next = kmeans::weighted_means(&points, &weights, &assignment, &centroids);
        if next == centroids || rounds >= 100 {
            break;
        }
        centroids = next;
    }

    let mut members = vec![Vec::new(); centroids.len()];
    for (a, &cat) in c.anthologies().iter().zip(&assignment) {
        members[cat].push(a.id.clone());
    }
    let largest = members.iter().map(Vec::len).max().unwrap_or(1).max(1) as f64;
    Ok(centroids
        .into_iter()
        .zip(members)
        .enumerate()
        .map(|(index, (centroid, member_ids))| SizeCategory {
            index,
            centroid_width_mm: centroid[0],
            centroid_height_mm: centroid[1],
            darkness: member_ids.len() as f64 / largest,
            member_ids,
        })
        .collect())
}

/// Category index per anthology, in collection order.
pub fn category_lookup(c: &Collection, categories: &[SizeCategory]) -> Result<Vec<usize>> {
    let mut lookup = vec![usize::MAX; c.len()];
    for cat in categories {
        for id in &cat.member_ids {
            let pos = c.position(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
            if lookup[pos] != usize::MAX {
                return Err(Error::MalformedIndex(format!("anthology {id:?} is in more than one size category")));
            }
            lookup[pos] = cat.index;
        }
    }
    if let Some(pos) = lookup.iter().position(|&l| l == usize::MAX) {
        return Err(Error::MalformedIndex(format!(
            "anthology {:?} has no size category",
            c.anthologies()[pos].id
        )));
    }
    Ok(lookup)
}

/// Mean story count over the given anthologies; 0 for an empty selection.
pub fn avg_story_count<S: AsRef<str>>(c: &Collection, ids: &[S]) -> Result<f64> {
    if ids.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0usize;
    for id in ids {
        total += c.require(id.as_ref())?.stories.len();
    }
    Ok(total as f64 / ids.len() as f64)
}

/// Ids of the anthologies passing `f`, in collection order.
///
/// `size_of` gives the size-category index of each anthology in collection
/// order (see [`category_lookup`]).
pub fn evaluate(f: &FilterState, c: &Collection, size_of: &[usize]) -> Result<Vec<String>> {
    f.validate()?;
    Ok(c.anthologies()
        .iter()
        .zip(size_of)
        .filter(|(a, size)| {
            (f.color_samples.is_empty() || f.color_samples.iter().any(|s| matches_color(a, s)))
                && f.year_range.map_or(true, |r| matches_years(a, r))
                && (f.size_categories.is_empty() || f.size_categories.contains(size))
        })
        .map(|(a, _)| a.id.clone())
        .collect())
}

/// For each sample, the matching anthology whose dominant colour is closest
/// to the sample colour, so the UI can show that cover inside the square.
pub fn texture_refs(f: &FilterState, c: &Collection) -> Vec<Option<String>> {
    f.color_samples
        .iter()
        .map(|s| {
            let target = palette::sample_to_color(s.position);
            c.anthologies()
                .iter()
                .filter(|a| matches_color(a, s))
                .map(|a| (palette::delta_e(palette::dominant_color(&a.palette), target), a))
                .fold(None::<(f64, &Anthology)>, |best, (d, a)| match best {
                    Some((bd, _)) if bd <= d => best,
                    _ => Some((d, a)),
                })
                .map(|(_, a)| a.id.clone())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryRef {
    pub anthology_id: String,
    pub story_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearBucket {
    pub year: i64,
    pub stories: Vec<StoryRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnthologySpan {
    pub anthology_id: String,
    pub min_year: i64,
    pub max_year: i64,
    pub color: Srgb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineData {
    /// Ascending by year.
    pub buckets: Vec<YearBucket>,
    /// In collection order.
    pub spans: Vec<AnthologySpan>,
}

pub fn timeline_data(c: &Collection) -> TimelineData {
    let mut buckets: BTreeMap<i64, Vec<StoryRef>> = BTreeMap::new();
    let mut spans = Vec::with_capacity(c.len());
    for a in c.anthologies() {
        for (story_index, story) in a.stories.iter().enumerate() {
            buckets
                .entry(story.publication_year)
                .or_default()
                .push(StoryRef { anthology_id: a.id.clone(), story_index });
        }
        let (min_year, max_year) = a.year_span();
        spans.push(AnthologySpan {
            anthology_id: a.id.clone(),
            min_year,
            max_year,
            color: palette::lab_to_srgb(palette::dominant_color(&a.palette)),
        });
    }
    TimelineData {
        buckets: buckets.into_iter().map(|(year, stories)| YearBucket { year, stories }).collect(),
        spans,
    }
}
