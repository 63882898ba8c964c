//! Session persistence.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use super::session::Session;

pub trait SessionStore: Send + Sync {
    fn load_all(&self) -> io::Result<Vec<Session>>;
    fn save(&self, session: &Session) -> io::Result<()>;
}

/// Keeps nothing beyond the process lifetime.
#[derive(Debug, Default)]
pub struct MemoryStore;

impl SessionStore for MemoryStore {
    fn load_all(&self) -> io::Result<Vec<Session>> {
        Ok(Vec::new())
    }

    fn save(&self, _session: &Session) -> io::Result<()> {
        Ok(())
    }
}

/// One JSON file per session id; writes go through a temporary file and an
/// atomic rename.
#[derive(Debug)]
pub struct FileStore {
    dir: PathBuf,
}

impl FileStore {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }
}

impl SessionStore for FileStore {
    fn load_all(&self) -> io::Result<Vec<Session>> {
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut out = Vec::new();
        for path in paths {
            let text = fs::read_to_string(&path)?;
            let session = serde_json::from_str(&text)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))?;
            out.push(session);
        }
        Ok(out)
    }

    fn save(&self, session: &Session) -> io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, session)?;
        tmp.flush()?;
        tmp.persist(self.dir.join(format!("{}.json", session.id))).map_err(|e| e.error)?;
        Ok(())
    }
}
