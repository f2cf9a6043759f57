//! Procedurally generated ten-item sample collection.
//!
//! Covers are solid or two-tone (horizontal bands), so their palettes are
//! known exactly. Sizes fall into four clusters and story years run from 1840
//! to 1990.

use std::fs;
use std::path::Path;

use image::{Rgb, RgbImage};
use serde_json::{json, Value};

use crate::palette::Srgb;
use crate::Result;

pub const MANIFEST_FILE: &str = "manifest.json";
/// Cover rasters are drawn at this many millimetres per pixel.
const MM_PER_PX: f64 = 2.0;

pub struct SampleItem {
    pub id: &'static str,
    pub title: &'static str,
    pub width_mm: f64,
    pub height_mm: f64,
    pub page_count: i64,
    pub cover_material: &'static str,
    pub page_material: &'static str,
    pub binding: &'static str,
    /// Top band colour, its share of the cover height, and the bottom band colour.
    pub bands: (Srgb, f64, Srgb),
    pub has_spine: bool,
    pub years: &'static [i64],
}

const RED: Srgb = Srgb::new(220, 50, 50);
const BLUE: Srgb = Srgb::new(70, 120, 220);
const CREAM: Srgb = Srgb::new(240, 230, 200);
const YELLOW: Srgb = Srgb::new(235, 200, 40);
const GREEN: Srgb = Srgb::new(60, 160, 70);
const BLACK: Srgb = Srgb::new(20, 20, 20);
const ORANGE: Srgb = Srgb::new(230, 120, 30);
const PURPLE: Srgb = Srgb::new(150, 90, 180);

pub const ITEMS: [SampleItem; 10] = [
    SampleItem {
        id: "g-001",
        title: "Tales of the Luminous Ether",
        width_mm: 106.0,
        height_mm: 170.0,
        page_count: 96,
        cover_material: "red card stock",
        page_material: "newsprint",
        binding: "saddle stitched",
        bands: (RED, 1.0, RED),
        has_spine: true,
        years: &[1840, 1852, 1867],
    },
    SampleItem {
        id: "g-002",
        title: "Voyages Beneath",
        width_mm: 108.0,
        height_mm: 176.0,
        page_count: 120,
        cover_material: "blue wrapping paper",
        page_material: "pulp",
        binding: "staples",
        bands: (BLUE, 1.0, BLUE),
        has_spine: false,
        years: &[1871, 1888, 1890],
    },
    SampleItem {
        id: "g-003",
        title: "The Clockwork Garden",
        width_mm: 148.0,
        height_mm: 210.0,
        page_count: 160,
        cover_material: "painted board",
        page_material: "pulp",
        binding: "hand sewn",
        bands: (RED, 0.7, CREAM),
        has_spine: false,
        years: &[1888, 1923, 1890],
    },
    SampleItem {
        id: "g-004",
        title: "Signals from Vega",
        width_mm: 150.0,
        height_mm: 214.0,
        page_count: 200,
        cover_material: "magazine cover collage",
        page_material: "pulp",
        binding: "glued",
        bands: (BLUE, 0.6, YELLOW),
        has_spine: false,
        years: &[1901, 1912, 1930],
    },
    SampleItem {
        id: "g-005",
        title: "Green Worlds",
        width_mm: 146.0,
        height_mm: 208.0,
        page_count: 80,
        cover_material: "green cloth",
        page_material: "bond paper",
        binding: "hand sewn",
        bands: (GREEN, 1.0, GREEN),
        has_spine: false,
        years: &[1925, 1931, 1938, 1944],
    },
    SampleItem {
        id: "g-006",
        title: "Night of the Rocket",
        width_mm: 214.0,
        height_mm: 280.0,
        page_count: 240,
        cover_material: "black buckram",
        page_material: "pulp",
        binding: "bradbound",
        bands: (BLACK, 0.8, ORANGE),
        has_spine: true,
        years: &[1932, 1936, 1950],
    },
    SampleItem {
        id: "g-007",
        title: "Amethyst Futures",
        width_mm: 210.0,
        height_mm: 276.0,
        page_count: 300,
        cover_material: "purple card stock",
        page_material: "slick paper",
        binding: "glued",
        bands: (PURPLE, 1.0, PURPLE),
        has_spine: false,
        years: &[1946, 1951, 1957, 1962],
    },
    SampleItem {
        id: "g-008",
        title: "Red Planet, Blue Moon",
        width_mm: 212.0,
        height_mm: 278.0,
        page_count: 180,
        cover_material: "printed card",
        page_material: "pulp",
        binding: "staples",
        bands: (RED, 0.5, BLUE),
        has_spine: false,
        years: &[1955, 1960, 1968],
    },
    SampleItem {
        id: "g-009",
        title: "The Pale Archive",
        width_mm: 250.0,
        height_mm: 330.0,
        page_count: 400,
        cover_material: "cream cardboard",
        page_material: "bond paper",
        binding: "ring bound",
        bands: (CREAM, 1.0, CREAM),
        has_spine: false,
        years: &[1966, 1972, 1979, 1985],
    },
    SampleItem {
        id: "g-010",
        title: "Sunset Machines",
        width_mm: 254.0,
        height_mm: 336.0,
        page_count: 140,
        cover_material: "orange construction paper",
        page_material: "newsprint",
        binding: "staples",
        bands: (ORANGE, 0.75, GREEN),
        has_spine: false,
        years: &[1974, 1981, 1990],
    },
];

fn rgb(c: Srgb) -> Rgb<u8> {
    Rgb([c.r, c.g, c.b])
}

/// Cover raster for an item: the top band covers `round(share × rows)` rows.
pub fn cover_image(item: &SampleItem) -> RgbImage {
    let w = (item.width_mm / MM_PER_PX).round() as u32;
    let h = (item.height_mm / MM_PER_PX).round() as u32;
    let (top, share, bottom) = item.bands;
    let split = (share * f64::from(h)).round() as u32;
    RgbImage::from_fn(w, h, |_, y| rgb(if y < split { top } else { bottom }))
}

fn spine_image(item: &SampleItem) -> RgbImage {
    let h = (item.height_mm / MM_PER_PX).round() as u32;
    RgbImage::from_fn(6, h, |x, _| rgb(if x == 0 || x == 5 { BLACK } else { item.bands.0 }))
}

pub fn manifest() -> Value {
    let anthologies: Vec<Value> = ITEMS
        .iter()
        .map(|item| {
            json!({
                "id": item.id,
                "title": item.title,
                "height_mm": item.height_mm,
                "width_mm": item.width_mm,
                "page_count": item.page_count,
                "cover_material": item.cover_material,
                "page_material": item.page_material,
                "binding": item.binding,
                "cover_image": format!("covers/{}.png", item.id),
                "spine_image": item.has_spine.then(|| format!("spines/{}.png", item.id)),
                "stories": item.years.iter().enumerate().map(|(i, y)| json!({
                    "title": format!("{} No. {}", item.title, i + 1),
                    "publication_year": y,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "anthologies": anthologies })
}

/// Writes `manifest.json`, `covers/` and `spines/` under `dir`.
pub fn write_sample(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("covers"))?;
    fs::create_dir_all(dir.join("spines"))?;
    let save = |img: RgbImage, path: std::path::PathBuf| {
        img.save(&path).map_err(|e| std::io::Error::other(format!("{}: {e}", path.display())))
    };
    for item in &ITEMS {
        save(cover_image(item), dir.join(format!("covers/{}.png", item.id)))?;
        if item.has_spine {
            save(spine_image(item), dir.join(format!("spines/{}.png", item.id)))?;
        }
    }
    let mut bytes = serde_json::to_vec_pretty(&manifest()).expect("manifest serializes");
    bytes.push(b'\n');
    fs::write(dir.join(MANIFEST_FILE), bytes)?;
    Ok(())
}
