//! Fixture paths and independent reference implementations for the CLI tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bricolage_core::collection::{ManifestEntry, Story};
use bricolage_core::palette::{self, PaletteEntry};
use bricolage_core::{Anthology, CollectionIndex, ColorPalette, FilterState, Srgb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sample")
}

pub fn golden_index_path() -> PathBuf {
    golden_dir().join("index.json")
}

pub fn golden_index() -> CollectionIndex {
    CollectionIndex::load(&golden_index_path()).expect("golden index loads")
}

pub fn bricolage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bricolage")).args(args).output().expect("binary runs")
}

pub fn sq(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn inertia_against(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> f64 {
    points.iter().map(|p| centroids.iter().map(|c| sq(p, c)).fold(f64::INFINITY, f64::min)).sum()
}

/// Lloyd iterations from the given centroids until assignments settle; returns the inertia.
pub fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> f64 {
    let dim = points[0].len();
    let mut assignment = vec![usize::MAX; points.len()];
    loop {
        let next: Vec<usize> = points
            .iter()
            .map(|p| {
                (0..centroids.len()).fold(0, |best, j| if sq(p, &centroids[j]) < sq(p, &centroids[best]) { j } else { best })
            })
            .collect();
        if next == assignment {
            break;
        }
        assignment = next;
        for (j, c) in centroids.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = points.iter().zip(&assignment).filter(|(_, &a)| a == j).map(|(p, _)| p).collect();
            if !members.is_empty() {
                *c = (0..dim).map(|d| members.iter().map(|m| m[d]).sum::<f64>() / members.len() as f64).collect();
            }
        }
    }
    points.iter().zip(&assignment).map(|(p, &a)| sq(p, &centroids[a])).sum()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Best Lloyd result over restarts from every k-subset of `seeds`.
pub fn subset_oracle(points: &[Vec<f64>], seeds: &[Vec<f64>], k: usize) -> f64 {
    subsets(seeds.len(), k)
        .into_iter()
        .map(|s| lloyd(points, s.iter().map(|&i| seeds[i].clone()).collect()))
        .fold(f64::INFINITY, f64::min)
}

/// Best of `restarts` k-means++ seeded Lloyd runs.
pub fn kmeanspp_oracle(points: &[Vec<f64>], k: usize, restarts: u64) -> f64 {
    (0..restarts)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + r);
            let mut centroids = vec![points[rng.gen_range(0..points.len())].clone()];
            while centroids.len() < k {
                let d: Vec<f64> =
                    points.iter().map(|p| centroids.iter().map(|c| sq(p, c)).fold(f64::INFINITY, f64::min)).collect();
                let mut target = rng.gen_range(0.0..d.iter().sum::<f64>());
                let pick = d.iter().position(|&w| {
                    target -= w;
                    target < 0.0
                });
                centroids.push(points[pick.unwrap_or(points.len() - 1)].clone());
            }
            lloyd(points, centroids)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Filter semantics evaluated one anthology at a time, straight from the definitions.
pub fn brute_force(index: &CollectionIndex, f: &FilterState) -> Vec<String> {
    index
        .collection()
        .anthologies()
        .iter()
        .filter(|a| {
            let colour_ok = f.color_samples.is_empty()
                || f.color_samples.iter().any(|s| {
                    let h = s.position.hue_deg.to_radians();
                    let target = [60.0, 100.0 * s.position.radius * h.cos(), 100.0 * s.position.radius * h.sin()];
                    a.palette.entries().iter().any(|e| {
                        e.proportion >= s.min_proportion && sq(&[e.lab.l, e.lab.a, e.lab.b], &target).sqrt() <= s.tolerance_de
                    })
                });
            let years_ok = f
                .year_range
                .map_or(true, |(lo, hi)| a.stories.iter().any(|s| lo <= s.publication_year && s.publication_year <= hi));
            let size_ok = f.size_categories.is_empty()
                || index.size_categories().iter().any(|c| f.size_categories.contains(&c.index) && c.member_ids.contains(&a.id));
            colour_ok && years_ok && size_ok
        })
        .map(|a| a.id.clone())
        .collect()
}

/// An anthology with a hand-set palette and no images.
pub fn anthology(id: &str, width_mm: f64, height_mm: f64, page_count: i64, colors: &[(Srgb, f64)]) -> Anthology {
    let entry = ManifestEntry {
        id: id.into(),
        title: format!("Title {id}"),
        height_mm,
        width_mm,
        page_count,
        cover_material: "card".into(),
        page_material: "newsprint".into(),
        binding: "stapled".into(),
        cover_image: format!("covers/{id}.png"),
        spine_image: None,
        stories: vec![Story { title: format!("{id} story"), publication_year: 1900 }],
    };
    let palette = ColorPalette::new(
        colors
            .iter()
            .map(|&(srgb, proportion)| PaletteEntry { lab: palette::srgb_to_lab(srgb), srgb, proportion })
            .collect(),
    );
    Anthology::from_entry(entry, palette)
}
