//! Perceptual colour: sRGB/CIELAB conversion, CIE76 distance, dominant-colour
//! palettes and the chroma-disk mapping behind the colour wheel.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use image::RgbImage;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::kmeans::{self, KMeansConfig};
use crate::{Error, Result};

/// Default number of palette entries.
pub const K_MAX: usize = 5;
/// Largest `k` accepted by [`extract_palette`].
pub const K_LIMIT: usize = 16;
/// Images are nearest-neighbour downsampled to fit this square before clustering.
pub const MAX_SAMPLE_SIDE: u32 = 256;
pub const PALETTE_SEED: u64 = 0;

/// Chroma that maps to the rim of the colour wheel.
pub const WHEEL_CHROMA_REF: f64 = 100.0;
/// Lightness plane of colours picked on the wheel.
pub const WHEEL_LIGHTNESS: f64 = 60.0;

// D65 reference white.
const WHITE_X: f64 = 0.95047;
const WHITE_Y: f64 = 1.0;
const WHITE_Z: f64 = 1.08883;

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

/// An 8-bit sRGB colour, serialized as `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Srgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Srgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Srgb { r, g, b }
    }

    pub fn to_hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl fmt::Display for Srgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Srgb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let hex = s.strip_prefix('#').unwrap_or(s);
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("expected a colour like #RRGGBB, got {s:?}"));
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|e| e.to_string());
        Ok(Srgb::new(channel(0)?, channel(2)?, channel(4)?))
    }
}

impl Serialize for Srgb {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Srgb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A CIELAB colour (D65). Serialized as `[L, a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        LabColor { l, a, b }
    }

    pub fn chroma(&self) -> f64 {
        self.a.hypot(self.b)
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.l, self.a, self.b]
    }
}

impl From<[f64; 3]> for LabColor {
    fn from([l, a, b]: [f64; 3]) -> Self {
        LabColor { l, a, b }
    }
}

impl From<LabColor> for [f64; 3] {
    fn from(c: LabColor) -> Self {
        c.to_array()
    }
}

fn srgb_channel_to_linear(c: u8) -> f64 {
    let c = f64::from(c) / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn linear_to_srgb_channel(v: f64) -> u8 {
    let v = v.clamp(0.0, 1.0);
    let c = if v <= 0.0031308 { 12.92 * v } else { 1.055 * v.powf(1.0 / 2.4) - 0.055 };
    (c * 255.0).round().clamp(0.0, 255.0) as u8
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    let cube = f * f * f;
    if cube > EPSILON {
        cube
    } else {
        (116.0 * f - 16.0) / KAPPA
    }
}

/// sRGB → linear RGB → XYZ (D65) → CIELAB.
///
/// Neutral inputs (`r == g == b`) land exactly on the L* axis.
pub fn srgb_to_lab(c: Srgb) -> LabColor {
    let rgb = [srgb_channel_to_linear(c.r), srgb_channel_to_linear(c.g), srgb_channel_to_linear(c.b)];
    if c.r == c.g && c.g == c.b {
        // Relative luminance of a neutral equals its linear value.
        let l = 116.0 * lab_f(rgb[0]) - 16.0;
        return LabColor::new(l, 0.0, 0.0);
    }
    let [x, y, z] = RGB_TO_XYZ.map(|row| row[0] * rgb[0] + row[1] * rgb[1] + row[2] * rgb[2]);
    let fx = lab_f(x / WHITE_X);
    let fy = lab_f(y / WHITE_Y);
    let fz = lab_f(z / WHITE_Z);
    LabColor::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Nearest displayable sRGB colour; out-of-gamut colours are clipped per channel.
pub fn lab_to_srgb(c: LabColor) -> Srgb {
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    let xyz = [lab_f_inv(fx) * WHITE_X, lab_f_inv(fy) * WHITE_Y, lab_f_inv(fz) * WHITE_Z];
    let [r, g, b] = XYZ_TO_RGB.map(|row| row[0] * xyz[0] + row[1] * xyz[1] + row[2] * xyz[2]);
    Srgb::new(linear_to_srgb_channel(r), linear_to_srgb_channel(g), linear_to_srgb_channel(b))
}

/// CIE76 colour difference.
pub fn delta_e(c1: LabColor, c2: LabColor) -> f64 {
    let (dl, da, db) = (c1.l - c2.l, c1.a - c2.a, c1.b - c2.b);
    (dl * dl + da * da + db * db).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub lab: LabColor,
    pub srgb: Srgb,
    pub proportion: f64,
}

/// Dominant colours of an image, most prominent first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorPalette {
    entries: Vec<PaletteEntry>,
}

impl ColorPalette {
    /// Builds a palette, sorting entries by proportion (descending) and
    /// breaking ties by ascending L, a, b.
    pub fn new(mut entries: Vec<PaletteEntry>) -> Self {
        entries.sort_by(|x, y| {
            y.proportion
                .total_cmp(&x.proportion)
                .then(x.lab.l.total_cmp(&y.lab.l))
                .then(x.lab.a.total_cmp(&y.lab.a))
                .then(x.lab.b.total_cmp(&y.lab.b))
        });
        ColorPalette { entries }
    }

    pub fn entries(&self) -> &[PaletteEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Checks the palette invariants: non-empty, proportions in (0, 1]
    /// summing to 1, sorted order.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.entries.is_empty() {
            return Err("palette is empty".into());
        }
        if self.entries.iter().any(|e| !(e.proportion > 0.0 && e.proportion <= 1.0)) {
            return Err("palette proportion outside (0, 1]".into());
        }
        let sum: f64 = self.entries.iter().map(|e| e.proportion).sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(format!("palette proportions sum to {sum}"));
        }
        if ColorPalette::new(self.entries.clone()) != *self {
            return Err("palette entries are not in canonical order".into());
        }
        Ok(())
    }
}

/// Colour of the highest-proportion entry.
///
/// # Panics
///
/// Panics on an empty palette; palettes produced by [`extract_palette`] never are.
pub fn dominant_color(p: &ColorPalette) -> LabColor {
    p.entries[0].lab
}

fn downsample(img: &RgbImage) -> Vec<Srgb> {
    let (w, h) = img.dimensions();
    let longest = w.max(h);
    let (nw, nh) = if longest <= MAX_SAMPLE_SIDE {
        (w, h)
    } else {
        let scale = |v: u32| ((u64::from(v) * u64::from(MAX_SAMPLE_SIDE)).div_ceil(u64::from(longest))).max(1) as u32;
        (scale(w), scale(h))
    };
    let mut out = Vec::with_capacity((nw * nh) as usize);
    for y in 0..nh {
        let sy = (u64::from(y) * u64::from(h) / u64::from(nh)) as u32;
        for x in 0..nw {
            let sx = (u64::from(x) * u64::from(w) / u64::from(nw)) as u32;
            let p = img.get_pixel(sx, sy).0;
            out.push(Srgb::new(p[0], p[1], p[2]));
        }
    }
    out
}

/// Extracts up to `k` dominant colours.
///
/// Images with at most `k` distinct colours yield those colours with their
/// exact frequencies. Otherwise pixels (downsampled to fit 256×256) are
/// clustered in Lab with seeded k-means++; entries are centroids weighted by
/// pixel share.
pub fn extract_palette(img: &RgbImage, k: usize) -> Result<ColorPalette> {
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::EmptyImage);
    }
    extract_palette_from_pixels(&downsample(img), k)
}

/// [`extract_palette`] over an already sampled pixel list.
pub fn extract_palette_from_pixels(pixels: &[Srgb], k: usize) -> Result<ColorPalette> {
    assert!((1..=K_LIMIT).contains(&k), "palette size must be in 1..={K_LIMIT}");
    if pixels.is_empty() {
        return Err(Error::EmptyImage);
    }

    let mut histogram: BTreeMap<Srgb, usize> = BTreeMap::new();
    for &p in pixels {
        *histogram.entry(p).or_default() += 1;
    }
    let total = pixels.len() as f64;

    if histogram.len() <= k {
        let entries = histogram
            .into_iter()
            .map(|(srgb, n)| PaletteEntry { lab: srgb_to_lab(srgb), srgb, proportion: n as f64 / total })
            .collect();
        return Ok(ColorPalette::new(entries));
    }

    let points: Vec<[f64; 3]> = histogram.keys().map(|&c| srgb_to_lab(c).to_array()).collect();
    let weights: Vec<f64> = histogram.values().map(|&n| n as f64).collect();
    let clustering = kmeans::fit(&points, &weights, KMeansConfig::new(k, PALETTE_SEED));

    let mut counts = vec![0usize; clustering.centroids.len()];
    for (&cluster, &n) in clustering.assignment.iter().zip(histogram.values()) {
        counts[cluster] += n;
    }
    let entries = clustering
        .centroids
        .iter()
        .zip(counts)
        .filter(|(_, n)| *n > 0)
        .map(|(&c, n)| {
            let lab = LabColor::from(c);
            PaletteEntry { lab, srgb: lab_to_srgb(lab), proportion: n as f64 / total }
        })
        .collect();
    Ok(ColorPalette::new(entries))
}

/// A point on the colour wheel: hue angle and normalized chroma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WheelPosition {
    pub hue_deg: f64,
    pub radius: f64,
}

impl WheelPosition {
    /// Normalizes the hue into `[0, 360)`; the centre of the wheel always has hue 0.
    pub fn new(hue_deg: f64, radius: f64) -> Self {
        let mut hue = hue_deg.rem_euclid(360.0);
        if hue >= 360.0 {
            hue -= 360.0;
        }
        if radius == 0.0 {
            hue = 0.0;
        }
        WheelPosition { hue_deg: hue, radius }
    }
}

pub fn wheel_position(c: LabColor) -> WheelPosition {
    let radius = (c.chroma() / WHEEL_CHROMA_REF).min(1.0);
    WheelPosition::new(c.b.atan2(c.a).to_degrees(), radius)
}

/// Colour picked at a wheel position, on the fixed L* = 60 plane.
pub fn sample_to_color(w: WheelPosition) -> LabColor {
    let chroma = w.radius * WHEEL_CHROMA_REF;
    let hue = w.hue_deg.to_radians();
    LabColor::new(WHEEL_LIGHTNESS, chroma * hue.cos(), chroma * hue.sin())
}
