//! The ingested index: a collection with palettes, size categories and
//! timeline data, stored as one self-contained JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::collection::{self, Anthology, Collection};
use crate::facet::{self, FilterState, SizeCategory, TimelineData};
use crate::{Error, Result};

pub const INDEX_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDocument {
    pub format: u32,
    pub anthologies: Vec<Anthology>,
    pub size_categories: Vec<SizeCategory>,
    pub timeline: TimelineData,
}

/// Response to a filter request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterResult {
    pub ids: Vec<String>,
    pub avg_story_count: f64,
    /// One entry per colour sample, in request order.
    pub texture_refs: Vec<Option<String>>,
}

/// Read-only view over a collection with its derived facet data.
#[derive(Debug, Clone)]
pub struct CollectionIndex {
    collection: Collection,
    size_categories: Vec<SizeCategory>,
    size_of: Vec<usize>,
    timeline: TimelineData,
}

impl CollectionIndex {
    /// Derives size categories and timeline data for a loaded collection.
    pub fn build(collection: Collection) -> Result<Self> {
        let size_categories = facet::compute_size_categories(&collection)?;
        let timeline = facet::timeline_data(&collection);
        Self::assemble(collection, size_categories, timeline)
    }

    fn assemble(collection: Collection, size_categories: Vec<SizeCategory>, timeline: TimelineData) -> Result<Self> {
        let size_of = facet::category_lookup(&collection, &size_categories)?;
        Ok(CollectionIndex { collection, size_categories, size_of, timeline })
    }

    /// Loads a manifest, extracting `k_colors`-entry palettes from the covers.
    pub fn ingest(manifest_bytes: &[u8], image_root: &Path, k_colors: usize) -> Result<Self> {
        Self::build(collection::load_manifest_with(manifest_bytes, image_root, k_colors)?)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let doc: IndexDocument = serde_json::from_slice(bytes).map_err(|e| Error::MalformedIndex(e.to_string()))?;
        if doc.format != INDEX_FORMAT {
            return Err(Error::MalformedIndex(format!("unsupported index format {}", doc.format)));
        }
        Self::assemble(Collection::new(doc.anthologies)?, doc.size_categories, doc.timeline)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn to_document(&self) -> IndexDocument {
        IndexDocument {
            format: INDEX_FORMAT,
            anthologies: self.collection.anthologies().to_vec(),
            size_categories: self.size_categories.clone(),
            timeline: self.timeline.clone(),
        }
    }

    /// Pretty-printed JSON with a trailing newline. Identical indexes serialize identically.
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(&self.to_document()).expect("index serializes");
        out.push(b'\n');
        out
    }

    pub fn collection(&self) -> &Collection {
        &self.collection
    }

    pub fn size_categories(&self) -> &[SizeCategory] {
        &self.size_categories
    }

    pub fn timeline(&self) -> &TimelineData {
        &self.timeline
    }

    pub fn size_category_of(&self, id: &str) -> Option<usize> {
        self.collection.position(id).map(|i| self.size_of[i])
    }

    pub fn evaluate(&self, f: &FilterState) -> Result<Vec<String>> {
        facet::evaluate(f, &self.collection, &self.size_of)
    }

    pub fn filter(&self, f: &FilterState) -> Result<FilterResult> {
        let ids = self.evaluate(f)?;
        let avg_story_count = facet::avg_story_count(&self.collection, &ids)?;
        Ok(FilterResult { ids, avg_story_count, texture_refs: facet::texture_refs(f, &self.collection) })
    }

    /// Earliest and latest story year across the collection.
    pub fn year_extent(&self) -> Option<(i64, i64)> {
        Some((self.timeline.buckets.first()?.year, self.timeline.buckets.last()?.year))
    }
}
