use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::analytics::SurveyResponse;
use crate::error::{Error, Result};

/// Append-only JSON-lines file of survey responses. Writers are serialized
/// and each batch is synced before the call returns.
#[derive(Debug)]
pub struct SurveyStore {
    path: PathBuf,
    /// Number of stored responses, counted from the file on first use.
    total: Mutex<Option<usize>>,
}

impl SurveyStore {
    pub fn new(path: impl Into<PathBuf>) -> SurveyStore {
        SurveyStore { path: path.into(), total: Mutex::new(None) }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends a validated batch; returns the number of responses stored
    /// after the write.
    pub fn append(&self, batch: &[SurveyResponse]) -> Result<usize> {
        let mut total = self.total.lock().unwrap_or_else(|p| p.into_inner());
        let before = match *total {
            Some(n) => n,
            None => self.load()?.len(),
        };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        let mut buf = Vec::new();
        for r in batch {
            serde_json::to_writer(&mut buf, r).expect("response serializes");
            buf.push(b'\n');
        }
        if let Err(e) = file.write_all(&buf).and_then(|()| file.sync_data()) {
            // recount from disk next time
            *total = None;
            return Err(Error::io(&self.path, e));
        }
        *total = Some(before + batch.len());
        Ok(before + batch.len())
    }

    /// Every stored response; a missing file is an empty store.
    pub fn read_all(&self) -> Result<Vec<SurveyResponse>> {
        let _guard = self.total.lock().unwrap_or_else(|p| p.into_inner());
        self.load()
    }

    fn load(&self) -> Result<Vec<SurveyResponse>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(&self.path, e)),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&self.path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let r: SurveyResponse = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                column: e.column(),
                message: e.to_string(),
            })?;
            out.push(r);
        }
        Ok(out)
    }
}
