//! Name-keyed registries of interchangeable strategy objects.

use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} {name:?}; available: {}", available.join(", "))]
pub struct UnknownEntry {
    pub kind: &'static str,
    pub name: String,
    pub available: Vec<String>,
}

/// Trait objects registered under names, with one designated default.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    default: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str, default: &'static str) -> Self {
        Registry {
            kind,
            default,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, entry: Arc<T>) -> &mut Self {
        self.entries.insert(name, entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, UnknownEntry> {
        self.entries.get(name).cloned().ok_or_else(|| UnknownEntry {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().map(str::to_string).collect(),
        })
    }

    /// The entry called `name`, or the default when `name` is `None`.
    pub fn resolve(&self, name: Option<&str>) -> Result<Arc<T>, UnknownEntry> {
        self.get(name.unwrap_or(self.default))
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}
