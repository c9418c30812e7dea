//! In-memory session state. Sessions do not survive a restart.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use seechart_core::api::{ChartEntryInfo, SessionInfo};
use seechart_core::query::Selection;
use seechart_core::{ChartSpec, LengthLevel};

use crate::error::ApiError;

#[derive(Debug, Clone)]
pub struct ChartEntry {
    pub id: String,
    pub spec: ChartSpec,
    /// Chosen once per chart so repeated summaries read the same.
    pub seed: u64,
    /// Always valid against `spec`; checked before it is stored.
    pub selection: Option<Selection>,
}

#[derive(Debug)]
pub struct SessionState {
    pub id: String,
    pub charts: Vec<ChartEntry>,
    pub active: Option<usize>,
    pub level: LengthLevel,
}

impl SessionState {
    pub fn new(id: String) -> Self {
        Self {
            id,
            charts: Vec::new(),
            active: None,
            level: LengthLevel::default(),
        }
    }

    /// Finds a chart and makes it the active one.
    pub fn chart_mut(&mut self, chart_id: &str) -> Result<&mut ChartEntry, ApiError> {
        let i = self
            .charts
            .iter()
            .position(|c| c.id == chart_id)
            .ok_or_else(|| ApiError::UnknownChart(chart_id.to_string()))?;
        self.active = Some(i);
        Ok(&mut self.charts[i])
    }

    pub fn info(&self) -> SessionInfo {
        SessionInfo {
            session_id: self.id.clone(),
            charts: self
                .charts
                .iter()
                .map(|c| ChartEntryInfo {
                    chart_id: c.id.clone(),
                    title: c.spec.title.clone(),
                    chart_type: c.spec.chart_type,
                    seed: c.seed,
                })
                .collect(),
            active: self.active.map(|i| self.charts[i].id.clone()),
            level: self.level,
        }
    }
}

pub type SharedSession = Arc<Mutex<SessionState>>;

#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, SharedSession>>,
}

impl SessionStore {
    pub fn create(&self) -> SharedSession {
        let id = uuid::Uuid::new_v4().to_string();
        let session = Arc::new(Mutex::new(SessionState::new(id.clone())));
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(id, session.clone());
        session
    }

    pub fn get(&self, id: &str) -> Result<SharedSession, ApiError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sessions_are_isolated() {
        let store = SessionStore::default();
        let a = store.create();
        let b = store.create();
        a.lock().unwrap().level = LengthLevel::Long;
        assert_eq!(b.lock().unwrap().level, LengthLevel::Moderate);
        let id = a.lock().unwrap().id.clone();
        assert!(Arc::ptr_eq(&store.get(&id).unwrap(), &a));
        assert!(matches!(
            store.get("nope"),
            Err(ApiError::UnknownSession(_))
        ));
    }
}
