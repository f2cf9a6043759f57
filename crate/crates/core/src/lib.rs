//! Engine for browsing print collections through their material qualities:
//! physical scale, cover colour, size clusters and shelf or pile layouts.
//!
//! [`collection`] loads and validates a manifest, [`palette`] does the colour
//! work, [`facet`] evaluates filters, [`layout`] arranges items in millimetre
//! space and [`index`] bundles the derived data into the on-disk index.

pub mod collection;
mod error;
pub mod facet;
pub mod index;
pub mod kmeans;
pub mod layout;
pub mod palette;
pub mod sample;

pub use collection::{Anthology, Collection, Story};
pub use error::{Error, Result};
pub use facet::{ColorSampleFilter, FilterState, SizeCategory, TimelineData};
pub use index::{CollectionIndex, FilterResult};
pub use layout::{GroupBy, LayoutKind, LayoutState, Placement, ScaleSpec};
pub use palette::{ColorPalette, LabColor, Srgb, WheelPosition};
