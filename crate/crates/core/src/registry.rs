//! Name-keyed registry of interchangeable strategies.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown strategy `{name}`; available: {available:?}")]
    Unknown { name: String, available: Vec<String> },
    #[error("strategy `{0}` is already registered")]
    Duplicate(String),
}

/// Strategies of one kind, stored as trait objects and looked up by name.
pub struct Registry<T: ?Sized> {
    entries: BTreeMap<String, Box<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: BTreeMap::new() }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, strategy: Box<T>) -> Result<(), RegistryError> {
        if self.entries.contains_key(name) {
            return Err(RegistryError::Duplicate(name.to_string()));
        }
        self.entries.insert(name.to_string(), strategy);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&T, RegistryError> {
        self.entries.get(name).map(|b| &**b).ok_or_else(|| RegistryError::Unknown {
            name: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), &**v))
    }
}
