use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed manifest: {0}")]
    MalformedManifest(String),

    #[error("duplicate anthology id {0:?}")]
    DuplicateId(String),

    #[error("anthology {id:?}: {field} must be positive")]
    InvalidDimension { id: String, field: &'static str },

    #[error("anthology {id:?}: publication year {year} outside 1800..=2100")]
    InvalidYear { id: String, year: i64 },

    #[error("anthology {0:?} has no stories")]
    EmptyStories(String),

    #[error("missing image {}", .0.display())]
    MissingImage(PathBuf),

    #[error("cannot decode image {}: {message}", path.display())]
    ImageDecode { path: PathBuf, message: String },

    #[error("image has no pixels")]
    EmptyImage,

    #[error("collection is empty")]
    EmptyCollection,

    #[error("unknown anthology id {0:?}")]
    UnknownId(String),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("shelf width {shelf_width_mm} mm is narrower than the thickest spine ({required_mm} mm)")]
    ShelfTooNarrow { shelf_width_mm: f64, required_mm: f64 },

    #[error("{requested} piles requested for {available} anthologies")]
    TooManyPiles { requested: usize, available: usize },

    #[error("items can only be moved in a pile layout")]
    WrongLayoutKind,

    #[error("unknown pile {0:?}")]
    UnknownPile(String),

    #[error("malformed index: {0}")]
    MalformedIndex(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used in CLI messages and HTTP error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedManifest(_) => "MalformedManifest",
            Error::DuplicateId(_) => "DuplicateId",
            Error::InvalidDimension { .. } => "InvalidDimension",
            Error::InvalidYear { .. } => "InvalidYear",
            Error::EmptyStories(_) => "EmptyStories",
            Error::MissingImage(_) => "MissingImage",
            Error::ImageDecode { .. } => "ImageDecode",
            Error::EmptyImage => "EmptyImage",
            Error::EmptyCollection => "EmptyCollection",
            Error::UnknownId(_) => "UnknownId",
            Error::InvalidFilter(_) => "InvalidFilter",
            Error::ShelfTooNarrow { .. } => "ShelfTooNarrow",
            Error::TooManyPiles { .. } => "TooManyPiles",
            Error::WrongLayoutKind => "WrongLayoutKind",
            Error::UnknownPile(_) => "UnknownPile",
            Error::MalformedIndex(_) => "MalformedIndex",
            Error::Io(_) => "Io",
        }
    }
}
