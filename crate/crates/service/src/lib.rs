//! HTTP API over an ingested collection index, with per-session layouts
//! persisted as JSON files.
//!
//! | Method | Path | |
//! |---|---|---|
//! | GET  | `/api/collection` | counts, year extent, size categories |
//! | GET  | `/api/anthologies/{id}` | full record for tooltips |
//! | GET  | `/api/anthologies/{id}/cover`, `/spine` | image bytes |
//! | POST | `/api/filter` | ids, average story count, texture refs |
//! | GET  | `/api/timeline`, `/api/sizes` | widget data |
//! | POST | `/api/sessions` | new session with a pile layout |
//! | GET  | `/api/sessions/{sid}/layout` | current or regenerated layout |
//! | POST | `/api/sessions/{sid}/move` | versioned move |
//! | POST | `/api/sessions/{sid}/pile-label` | set a pile label |

use std::io::Cursor;
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use bricolage_core::collection::image_path;
use bricolage_core::layout::{self, GroupBy, ThicknessModel};
use bricolage_core::{palette, Anthology, CollectionIndex, FilterResult, FilterState, LayoutKind, LayoutState, SizeCategory, Srgb};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

mod error;
pub mod session;

pub use error::ApiError;
use session::{now_ms, LayoutParams, Session, SessionStore};

pub const DEFAULT_SHELF_WIDTH_MM: f64 = 1000.0;
pub const DEFAULT_GAP_MM: f64 = 2.0;
pub const DEFAULT_PILES: usize = 4;

pub struct AppState {
    pub index: Arc<CollectionIndex>,
    pub image_root: PathBuf,
    pub sessions: SessionStore,
}

type Shared = Arc<AppState>;
type ApiResult<T> = Result<T, ApiError>;

impl AppState {
    pub fn new(index: CollectionIndex, image_root: impl Into<PathBuf>, data_dir: impl Into<PathBuf>) -> Result<Self, session::StoreError> {
        Ok(AppState {
            index: Arc::new(index),
            image_root: image_root.into(),
            sessions: SessionStore::open(data_dir)?,
        })
    }
}

pub fn router(state: AppState, static_dir: Option<&FsPath>) -> Router {
    let api = Router::new()
        .route("/api/collection", get(collection_summary))
        .route("/api/anthologies/:id", get(anthology_detail))
        .route("/api/anthologies/:id/cover", get(cover_image))
        .route("/api/anthologies/:id/spine", get(spine_image))
        .route("/api/filter", post(filter))
        .route("/api/timeline", get(timeline))
        .route("/api/sizes", get(sizes))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/:sid/layout", get(session_layout))
        .route("/api/sessions/:sid/move", post(move_item))
        .route("/api/sessions/:sid/pile-label", post(pile_label))
        .with_state(Arc::new(state));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CollectionSummary {
    pub count: usize,
    pub story_count: usize,
    pub year_extent: Option<(i64, i64)>,
    pub size_categories: Vec<SizeCategory>,
}

async fn collection_summary(State(state): State<Shared>) -> Json<CollectionSummary> {
    let c = state.index.collection();
    Json(CollectionSummary {
        count: c.len(),
        story_count: c.anthologies().iter().map(|a| a.stories.len()).sum(),
        year_extent: state.index.year_extent(),
        size_categories: state.index.size_categories().to_vec(),
    })
}

/// Tooltip payload: the stored record plus derived values.
#[derive(Debug, Serialize)]
pub struct AnthologyDetail<'a> {
    #[serde(flatten)]
    pub anthology: &'a Anthology,
    pub year_span: (i64, i64),
    pub size_category: usize,
    pub thickness_mm: f64,
    pub dominant_color: Srgb,
}

fn lookup<'a>(state: &'a AppState, id: &str) -> ApiResult<&'a Anthology> {
    Ok(state.index.collection().require(id)?)
}

async fn anthology_detail(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    let a = lookup(&state, &id)?;
    let detail = AnthologyDetail {
        anthology: a,
        year_span: a.year_span(),
        size_category: state.index.size_category_of(&id).expect("indexed anthology has a category"),
        thickness_mm: layout::thickness_mm(a.page_count),
        dominant_color: palette::lab_to_srgb(palette::dominant_color(&a.palette)),
    };
    Ok(Json(detail).into_response())
}

fn content_type(path: &str) -> &'static str {
    let ext = FsPath::new(path).extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        _ => "application/octet-stream",
    }
}

async fn image_bytes(state: &AppState, reference: &str) -> ApiResult<Response> {
    let path = image_path(&state.image_root, reference);
    match tokio::fs::read(&path).await {
        Ok(bytes) => Ok(([(header::CONTENT_TYPE, content_type(reference))], bytes).into_response()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(ApiError::not_found("MissingImage", format!("image {reference:?} not found")))
        }
        Err(e) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Io", e.to_string())),
    }
}

async fn cover_image(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    let a = lookup(&state, &id)?;
    image_bytes(&state, &a.cover_image).await
}

/// Left-edge strip of the cover with the spine's aspect ratio, as PNG.
pub fn spine_from_cover(cover: &image::DynamicImage, anthology: &Anthology) -> image::ImageResult<Vec<u8>> {
    let (w, h) = (cover.width(), cover.height());
    let px_per_mm = f64::from(h) / anthology.height_mm;
    let strip = ((layout::thickness_mm(anthology.page_count) * px_per_mm).round() as u32).clamp(1, w.max(1));
    let mut out = Vec::new();
    cover.crop_imm(0, 0, strip, h).write_to(&mut Cursor::new(&mut out), image::ImageFormat::Png)?;
    Ok(out)
}

async fn spine_image(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    let a = lookup(&state, &id)?;
    if let Some(spine) = &a.spine_image {
        return image_bytes(&state, spine).await;
    }
    let path = image_path(&state.image_root, &a.cover_image);
    let anthology = a.clone();
    let png = tokio::task::spawn_blocking(move || {
        let cover = image::open(&path).map_err(|e| e.to_string())?;
        spine_from_cover(&cover, &anthology).map_err(|e| e.to_string())
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?
    .map_err(|e| ApiError::not_found("MissingImage", e))?;
    Ok(([(header::CONTENT_TYPE, "image/png")], png).into_response())
}

async fn filter(State(state): State<Shared>, body: Result<Json<FilterState>, JsonRejection>) -> ApiResult<Json<FilterResult>> {
    let Json(f) = body?;
    Ok(Json(state.index.filter(&f)?))
}

async fn timeline(State(state): State<Shared>) -> Response {
    Json(state.index.timeline()).into_response()
}

async fn sizes(State(state): State<Shared>) -> Response {
    Json(state.index.size_categories()).into_response()
}

fn default_params() -> LayoutParams {
    LayoutParams {
        kind: LayoutKind::Pile,
        group_by: GroupBy::None,
        n_piles: None,
        shelf_width_mm: DEFAULT_SHELF_WIDTH_MM,
        gap_mm: DEFAULT_GAP_MM,
        filter: None,
    }
}

/// Generates the layout described by `params` for the filtered collection.
pub fn build_layout(index: &CollectionIndex, params: &LayoutParams, seed: u64) -> bricolage_core::Result<LayoutState> {
    let ids = match &params.filter {
        Some(f) => index.evaluate(f)?,
        None => index.collection().ids(),
    };
    let mut state = match params.kind {
        LayoutKind::Shelf => {
            layout::shelf_layout(&ids, index.collection(), params.shelf_width_mm, params.gap_mm, &ThicknessModel::default())?
        }
        LayoutKind::Pile if ids.is_empty() => LayoutState {
            kind: LayoutKind::Pile,
            seed,
            version: 0,
            placements: Vec::new(),
            piles: Default::default(),
        },
        LayoutKind::Pile => {
            let n_piles = params.n_piles.unwrap_or(DEFAULT_PILES.min(ids.len()));
            layout::pile_layout(&ids, index.collection(), n_piles, params.group_by, seed)?
        }
    };
    state.seed = seed;
    Ok(state)
}

fn fresh_seed() -> u64 {
    // Kept within 2^53 so browser clients read it exactly.
    rand::random::<u64>() >> 11
}

async fn create_session(State(state): State<Shared>) -> ApiResult<(StatusCode, Json<Session>)> {
    let params = default_params();
    let seed = fresh_seed();
    let layout = build_layout(&state.index, &params, seed)?;
    let now = now_ms();
    let session = Session {
        session_id: uuid::Uuid::new_v4().to_string(),
        created_ms: now,
        modified_ms: now,
        params,
        layout,
    };
    state.sessions.insert(session.clone())?;
    Ok((StatusCode::CREATED, Json(session)))
}

#[derive(Debug, Default, Deserialize)]
pub struct LayoutQuery {
    pub kind: Option<LayoutKind>,
    pub group_by: Option<GroupBy>,
    pub n_piles: Option<usize>,
    pub shelf_width_mm: Option<f64>,
    pub gap_mm: Option<f64>,
    /// JSON-encoded filter state.
    pub filter: Option<String>,
}

impl LayoutQuery {
    fn is_empty(&self) -> bool {
        self.kind.is_none()
            && self.group_by.is_none()
            && self.n_piles.is_none()
            && self.shelf_width_mm.is_none()
            && self.gap_mm.is_none()
            && self.filter.is_none()
    }

    fn to_params(&self) -> ApiResult<LayoutParams> {
        let defaults = default_params();
        let filter = match &self.filter {
            Some(raw) => {
                let f: FilterState =
                    serde_json::from_str(raw).map_err(|e| ApiError::bad_request(format!("filter: {e}")))?;
                f.validate()?;
                Some(f)
            }
            None => None,
        };
        Ok(LayoutParams {
            kind: self.kind.unwrap_or(defaults.kind),
            group_by: self.group_by.unwrap_or(defaults.group_by),
            n_piles: self.n_piles,
            shelf_width_mm: self.shelf_width_mm.unwrap_or(defaults.shelf_width_mm),
            gap_mm: self.gap_mm.unwrap_or(defaults.gap_mm),
            filter,
        })
    }
}

/// Without query parameters, returns the session's current layout. With
/// parameters, returns the current layout if it was generated from the same
/// parameters; otherwise a fresh layout replaces it (one version step).
async fn session_layout(
    State(state): State<Shared>,
    Path(sid): Path<String>,
    query: Result<Query<LayoutQuery>, QueryRejection>,
) -> ApiResult<Json<LayoutState>> {
    let Query(query) = query?;
    let handle = state.sessions.get(&sid)?;
    let mut session = handle.lock().await;
    if query.is_empty() {
        return Ok(Json(session.layout.clone()));
    }
    let params = query.to_params()?;
    if params == session.params {
        return Ok(Json(session.layout.clone()));
    }
    let mut layout = build_layout(&state.index, &params, session.layout.seed)?;
    layout.version = session.layout.version + 1;

    let mut next = session.clone();
    next.params = params;
    next.layout = layout;
    next.modified_ms = now_ms();
    state.sessions.persist(&next)?;
    *session = next;
    Ok(Json(session.layout.clone()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MoveRequest {
    pub id: String,
    pub x_mm: f64,
    pub y_mm: f64,
    pub expected_version: u64,
}

async fn move_item(
    State(state): State<Shared>,
    Path(sid): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<LayoutState>> {
    let Json(req) = body?;
    if !(req.x_mm.is_finite() && req.y_mm.is_finite()) {
        return Err(ApiError::bad_request("coordinates must be finite"));
    }
    let handle = state.sessions.get(&sid)?;
    let mut session = handle.lock().await;
    if session.layout.version != req.expected_version {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "StaleVersion",
            format!("expected version {}, layout is at {}", req.expected_version, session.layout.version),
        ));
    }
    let layout = layout::move_item(&session.layout, &req.id, req.x_mm, req.y_mm)?;
    commit(&state, &mut session, layout)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PileLabelRequest {
    pub pile_id: String,
    pub label: Option<String>,
    #[serde(default)]
    pub expected_version: Option<u64>,
}

async fn pile_label(
    State(state): State<Shared>,
    Path(sid): Path<String>,
    body: Result<Json<PileLabelRequest>, JsonRejection>,
) -> ApiResult<Json<LayoutState>> {
    let Json(req) = body?;
    let handle = state.sessions.get(&sid)?;
    let mut session = handle.lock().await;
    if let Some(expected) = req.expected_version.filter(|&v| v != session.layout.version) {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "StaleVersion",
            format!("expected version {expected}, layout is at {}", session.layout.version),
        ));
    }
    let layout = layout::set_pile_label(&session.layout, &req.pile_id, req.label)?;
    commit(&state, &mut session, layout)
}

/// Persists the new layout, then publishes it in memory.
fn commit(state: &AppState, session: &mut Session, layout: LayoutState) -> ApiResult<Json<LayoutState>> {
    let mut next = session.clone();
    next.layout = layout;
    next.modified_ms = now_ms();
    state.sessions.persist(&next)?;
    *session = next;
    Ok(Json(session.layout.clone()))
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub index_path: PathBuf,
    pub image_root: PathBuf,
    pub data_dir: PathBuf,
    pub host: String,
    pub port: u16,
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("cannot load index {}: {source}", path.display())]
    Index { path: PathBuf, source: bricolage_core::Error },
    #[error("cannot open session store: {0}")]
    Store(#[from] session::StoreError),
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Loads the index, binds, announces `listening on http://ADDR` on stdout
/// and serves until Ctrl-C.
pub async fn serve(config: ServeConfig) -> Result<(), ServeError> {
    let index = CollectionIndex::load(&config.index_path)
        .map_err(|source| ServeError::Index { path: config.index_path.clone(), source })?;
    let state = AppState::new(index, &config.image_root, &config.data_dir)?;
    let app = router(state, config.static_dir.as_deref());

    let addr = format!("{}:{}", config.host, config.port);
    let listener = tokio::net::TcpListener::bind(&addr).await.map_err(|source| ServeError::Bind { addr, source })?;
    let local: SocketAddr = listener.local_addr()?;
    println!("listening on http://{local}");
    tracing::info!(%local, "serving");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
