//! File-backed session store.
//!
//! Each session lives in `<data_dir>/<session_id>.json`, replaced atomically
//! (write to a temp file in the same directory, then rename) so a crash never
//! leaves a half-written session behind. Mutations on one session are
//! serialized through its mutex; distinct sessions proceed independently.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use bricolage_core::layout::GroupBy;
use bricolage_core::{FilterState, LayoutKind, LayoutState};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("session {0:?} not found")]
    NotFound(String),
    #[error("session file {}: {message}", path.display())]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What a session's current layout was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub kind: LayoutKind,
    pub group_by: GroupBy,
    pub n_piles: Option<usize>,
    pub shelf_width_mm: f64,
    pub gap_mm: f64,
    pub filter: Option<FilterState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    /// Milliseconds since the Unix epoch.
    pub created_ms: u64,
    pub modified_ms: u64,
    pub params: LayoutParams,
    pub layout: LayoutState,
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

fn valid_session_id(sid: &str) -> bool {
    !sid.is_empty() && sid.len() <= 64 && sid.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

pub type SessionHandle = Arc<Mutex<Session>>;

pub struct SessionStore {
    dir: PathBuf,
    live: RwLock<HashMap<String, SessionHandle>>,
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(SessionStore { dir, live: RwLock::new(HashMap::new()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, sid: &str) -> PathBuf {
        self.dir.join(format!("{sid}.json"))
    }

    /// Writes the session to disk atomically.
    pub fn persist(&self, session: &Session) -> Result<(), StoreError> {
        let mut tmp = tempfile::Builder::new().prefix(".session-").suffix(".tmp").tempfile_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, session).map_err(std::io::Error::other)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path_for(&session.session_id)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Persists a new session and registers it.
    pub fn insert(&self, session: Session) -> Result<SessionHandle, StoreError> {
        self.persist(&session)?;
        let sid = session.session_id.clone();
        let handle = Arc::new(Mutex::new(session));
        self.live.write().expect("session map poisoned").insert(sid, handle.clone());
        Ok(handle)
    }

    /// Reads a session file without registering it.
    pub fn read(&self, sid: &str) -> Result<Session, StoreError> {
        if !valid_session_id(sid) {
            return Err(StoreError::NotFound(sid.to_owned()));
        }
        let path = self.path_for(sid);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(StoreError::NotFound(sid.to_owned())),
            Err(e) => return Err(e.into()),
        };
        let session: Session =
            serde_json::from_slice(&bytes).map_err(|e| StoreError::Corrupt { path: path.clone(), message: e.to_string() })?;
        if session.session_id != sid {
            return Err(StoreError::Corrupt { path, message: format!("file holds session {:?}", session.session_id) });
        }
        Ok(session)
    }

    /// Live handle for a session, loading it from disk on first use.
    pub fn get(&self, sid: &str) -> Result<SessionHandle, StoreError> {
        if let Some(h) = self.live.read().expect("session map poisoned").get(sid) {
            return Ok(h.clone());
        }
        let session = self.read(sid)?;
        let mut live = self.live.write().expect("session map poisoned");
        // Another request may have loaded it meanwhile; keep the first handle.
        Ok(live.entry(sid.to_owned()).or_insert_with(|| Arc::new(Mutex::new(session))).clone())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn session(sid: &str) -> Session {
        Session {
            session_id: sid.into(),
            created_ms: 1,
            modified_ms: 2,
            params: LayoutParams {
                kind: LayoutKind::Pile,
                group_by: GroupBy::Color,
                n_piles: Some(2),
                shelf_width_mm: 1000.0,
                gap_mm: 2.0,
                filter: None,
            },
            layout: LayoutState { kind: LayoutKind::Pile, seed: 9, version: 3, placements: vec![], piles: BTreeMap::new() },
        }
    }

    #[test]
    fn persisted_sessions_reload() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        store.insert(session("abc-1")).unwrap();

        let reopened = SessionStore::open(dir.path()).unwrap();
        assert_eq!(reopened.read("abc-1").unwrap(), session("abc-1"));
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("abc-1.json")]);
    }

    #[test]
    fn unknown_and_hostile_ids() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        assert!(matches!(store.get("missing"), Err(StoreError::NotFound(_))));
        assert!(matches!(store.get("../etc/passwd"), Err(StoreError::NotFound(_))));
    }

    #[test]
    fn corrupt_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        std::fs::write(store.path_for("bad"), b"{\"session_id\":").unwrap();
        assert!(matches!(store.get("bad"), Err(StoreError::Corrupt { .. })));
    }
}
