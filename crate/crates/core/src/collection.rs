//! Print-collection domain model and manifest ingestion.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::palette::{self, ColorPalette};
use crate::{Error, Result};

pub const MIN_YEAR: i64 = 1800;
pub const MAX_YEAR: i64 = 2100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Story {
    pub title: String,
    pub publication_year: i64,
}

/// One manifest entry, field names as they appear in the manifest JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub title: String,
    pub height_mm: f64,
    pub width_mm: f64,
    pub page_count: i64,
    pub cover_material: String,
    pub page_material: String,
    pub binding: String,
    pub cover_image: String,
    pub spine_image: Option<String>,
    pub stories: Vec<Story>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub anthologies: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedManifest(e.to_string()))
    }
}

/// A bound volume with its physical description and cover palette.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anthology {
    pub id: String,
    pub title: String,
    pub height_mm: f64,
    pub width_mm: f64,
    pub page_count: i64,
    pub cover_material: String,
    pub page_material: String,
    pub binding: String,
    pub cover_image: String,
    pub spine_image: Option<String>,
    pub stories: Vec<Story>,
    pub palette: ColorPalette,
}

impl Anthology {
    pub fn from_entry(entry: ManifestEntry, palette: ColorPalette) -> Self {
        let ManifestEntry {
            id,
            title,
            height_mm,
            width_mm,
            page_count,
            cover_material,
            page_material,
            binding,
            cover_image,
            spine_image,
            stories,
        } = entry;
        Anthology {
            id,
            title,
            height_mm,
            width_mm,
            page_count,
            cover_material,
            page_material,
            binding,
            cover_image,
            spine_image,
            stories,
            palette,
        }
    }

    /// The manifest view of this anthology (everything except the computed palette).
    pub fn to_entry(&self) -> ManifestEntry {
        ManifestEntry {
            id: self.id.clone(),
            title: self.title.clone(),
            height_mm: self.height_mm,
            width_mm: self.width_mm,
            page_count: self.page_count,
            cover_material: self.cover_material.clone(),
            page_material: self.page_material.clone(),
            binding: self.binding.clone(),
            cover_image: self.cover_image.clone(),
            spine_image: self.spine_image.clone(),
            stories: self.stories.clone(),
        }
    }

    pub fn year_span(&self) -> (i64, i64) {
        year_span(self)
    }
}

/// Earliest and latest publication year among the anthology's stories.
pub fn year_span(anthology: &Anthology) -> (i64, i64) {
    let years = anthology.stories.iter().map(|s| s.publication_year);
    let min = years.clone().min().expect("anthologies always hold stories");
    let max = years.max().expect("anthologies always hold stories");
    (min, max)
}

fn validate_entry(entry: &ManifestEntry) -> Result<()> {
    let id = || entry.id.clone();
    if !(entry.height_mm > 0.0 && entry.height_mm.is_finite()) {
        return Err(Error::InvalidDimension { id: id(), field: "height_mm" });
    }
    if !(entry.width_mm > 0.0 && entry.width_mm.is_finite()) {
        return Err(Error::InvalidDimension { id: id(), field: "width_mm" });
    }
    if entry.page_count < 1 {
        return Err(Error::InvalidDimension { id: id(), field: "page_count" });
    }
    if entry.stories.is_empty() {
        return Err(Error::EmptyStories(id()));
    }
    if let Some(s) = entry.stories.iter().find(|s| !(MIN_YEAR..=MAX_YEAR).contains(&s.publication_year)) {
        return Err(Error::InvalidYear { id: id(), year: s.publication_year });
    }
    Ok(())
}

/// Immutable, validated set of anthologies in manifest order.
#[derive(Debug, Clone, PartialEq)]
pub struct Collection {
    anthologies: Vec<Anthology>,
    id_index: HashMap<String, usize>,
}

impl Collection {
    /// Validates anthologies (unique ids, positive dimensions, stories present,
    /// well-formed palettes) and builds the id index.
    pub fn new(anthologies: Vec<Anthology>) -> Result<Self> {
        let mut id_index = HashMap::with_capacity(anthologies.len());
        for (i, a) in anthologies.iter().enumerate() {
            validate_entry(&a.to_entry())?;
            if let Err(e) = a.palette.validate() {
                return Err(Error::MalformedIndex(format!("anthology {:?}: {e}", a.id)));
            }
            if id_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(a.id.clone()));
            }
        }
        Ok(Collection { anthologies, id_index })
    }

    pub fn anthologies(&self) -> &[Anthology] {
        &self.anthologies
    }

    pub fn len(&self) -> usize {
        self.anthologies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anthologies.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Anthology> {
        self.id_index.get(id).map(|&i| &self.anthologies[i])
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    /// Resolves an id or fails with [`Error::UnknownId`].
    pub fn require(&self, id: &str) -> Result<&Anthology> {
        self.get(id).ok_or_else(|| Error::UnknownId(id.to_owned()))
    }

    pub fn ids(&self) -> Vec<String> {
        self.anthologies.iter().map(|a| a.id.clone()).collect()
    }

    pub fn to_manifest(&self) -> Manifest {
        Manifest { anthologies: self.anthologies.iter().map(Anthology::to_entry).collect() }
    }
}

/// Resolves a manifest-relative image reference against the image root.
pub fn image_path(image_root: &Path, reference: &str) -> PathBuf {
    image_root.join(reference)
}

fn load_rgb(path: &Path) -> Result<image::RgbImage> {
    if !path.is_file() {
        return Err(Error::MissingImage(path.to_owned()));
    }
    let img = image::open(path).map_err(|e| Error::ImageDecode { path: path.to_owned(), message: e.to_string() })?;
    Ok(img.to_rgb8())
}

/// Parses and validates a manifest, extracting a `k_colors` palette from every cover.
pub fn load_manifest_with(manifest_bytes: &[u8], image_root: &Path, k_colors: usize) -> Result<Collection> {
    let manifest = Manifest::from_json(manifest_bytes)?;

    // Cheap structural checks first so an invalid manifest fails before any image is decoded.
    let mut seen = HashSet::new();
    for entry in &manifest.anthologies {
        if !seen.insert(entry.id.as_str()) {
            return Err(Error::DuplicateId(entry.id.clone()));
        }
        validate_entry(entry)?;
        for reference in std::iter::once(&entry.cover_image).chain(entry.spine_image.as_ref()) {
            let path = image_path(image_root, reference);
            if !path.is_file() {
                return Err(Error::MissingImage(path));
            }
        }
    }

    let mut anthologies = Vec::with_capacity(manifest.anthologies.len());
    for entry in manifest.anthologies {
        let cover = load_rgb(&image_path(image_root, &entry.cover_image))?;
        let palette = palette::extract_palette(&cover, k_colors)?;
        anthologies.push(Anthology::from_entry(entry, palette));
    }
    Collection::new(anthologies)
}

/// [`load_manifest_with`] using the default palette size.
pub fn load_manifest(manifest_bytes: &[u8], image_root: &Path) -> Result<Collection> {
    load_manifest_with(manifest_bytes, image_root, palette::K_MAX)
}

#[cfg(test)]
mod tests {
    use image::{Rgb, RgbImage};
    use serde_json::{json, Value};

    use super::*;

    fn entry(id: &str, years: &[i64]) -> Value {
        json!({
            "id": id,
            "title": format!("Anthology {id}"),
            "height_mm": 210.5,
            "width_mm": 148.25,
            "page_count": 120,
            "cover_material": "card stock",
            "page_material": "newsprint",
            "binding": "staples",
            "cover_image": "cover.png",
            "spine_image": null,
            "stories": years.iter().map(|y| json!({"title": format!("Story {y}"), "publication_year": y})).collect::<Vec<_>>(),
        })
    }

    fn image_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        RgbImage::from_pixel(4, 6, Rgb([200, 30, 30])).save(dir.path().join("cover.png")).unwrap();
        dir
    }

    fn load(manifest: Value, dir: &Path) -> Result<Collection> {
        load_manifest(&serde_json::to_vec(&manifest).unwrap(), dir)
    }

    #[test]
    fn preserves_manifest_order() {
        let dir = image_dir();
        let c = load(json!({"anthologies": [entry("b", &[1900]), entry("a", &[1901])]}), dir.path()).unwrap();
        assert_eq!(c.ids(), vec!["b", "a"]);
        assert_eq!(c.get("a").unwrap().id, "a");
        assert_eq!(c.position("b"), Some(0));
        assert_eq!(c.get("b").unwrap().palette.entries()[0].proportion, 1.0);
    }

    #[test]
    fn round_trips_manifest_fields() {
        let dir = image_dir();
        let mut second = entry("g-002", &[1840, 1990]);
        second["spine_image"] = json!("cover.png");
        second["height_mm"] = json!(0.1 + 0.2);
        let manifest = json!({"anthologies": [entry("g-001", &[1888, 1923, 1890]), second]});
        let c = load(manifest.clone(), dir.path()).unwrap();
        assert_eq!(serde_json::to_value(c.to_manifest()).unwrap(), manifest);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = image_dir();
        let err = load(json!({"anthologies": [entry("g-001", &[1900]), entry("g-001", &[1901])]}), dir.path()).unwrap_err();
        assert!(matches!(&err, Error::DuplicateId(id) if id == "g-001"));
        assert!(err.to_string().contains("g-001"));
    }

    #[test]
    fn invalid_dimensions_are_rejected() {
        let dir = image_dir();
        for (field, value) in [("height_mm", json!(0)), ("width_mm", json!(-3.0)), ("page_count", json!(0))] {
            let mut e = entry("x", &[1900]);
            e[field] = value;
            let err = load(json!({"anthologies": [e]}), dir.path()).unwrap_err();
            assert!(matches!(err, Error::InvalidDimension { field: f, .. } if f == field));
        }
    }

    #[test]
    fn structural_errors() {
        let dir = image_dir();
        assert!(matches!(load(json!({"anthologies": [entry("x", &[])]}), dir.path()), Err(Error::EmptyStories(_))));
        assert!(matches!(load(json!({"anthologies": [entry("x", &[1700])]}), dir.path()), Err(Error::InvalidYear { .. })));

        let mut missing_field = entry("x", &[1900]);
        missing_field.as_object_mut().unwrap().remove("binding");
        assert!(matches!(load(json!({"anthologies": [missing_field]}), dir.path()), Err(Error::MalformedManifest(_))));
        assert!(matches!(load_manifest(b"{not json", dir.path()), Err(Error::MalformedManifest(_))));

        let mut no_image = entry("x", &[1900]);
        no_image["cover_image"] = json!("nope.png");
        match load(json!({"anthologies": [no_image]}), dir.path()) {
            Err(Error::MissingImage(p)) => assert!(p.ends_with("nope.png")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn year_span_examples() {
        let dir = image_dir();
        let c = load(
            json!({"anthologies": [entry("a", &[1888, 1923, 1890]), entry("b", &[1950]), entry("c", &[1840, 1990])]}),
            dir.path(),
        )
        .unwrap();
        assert_eq!(c.get("a").unwrap().year_span(), (1888, 1923));
        assert_eq!(c.get("b").unwrap().year_span(), (1950, 1950));
        assert_eq!(c.get("c").unwrap().year_span(), (1840, 1990));
    }
}
