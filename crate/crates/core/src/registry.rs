//! Named strategy objects selectable at run time.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown {kind} `{name}`; available: {available}")]
pub struct UnknownStrategy {
    pub kind: &'static str,
    pub name: String,
    pub available: String,
}

/// Anything that can be stored in a [`Registry`].
pub trait Strategy {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
}

/// Name-indexed table of boxed strategies of one kind.
pub struct Registry<T: ?Sized + Strategy> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized + Strategy> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: BTreeMap::new() }
    }

    pub fn register(&mut self, s: Box<T>) {
        self.entries.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<&T, UnknownStrategy> {
        self.entries.get(name).map(|b| &**b).ok_or_else(|| UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    /// Take ownership of one entry, dropping the rest.
    pub fn into_entry(mut self, name: &str) -> Result<Box<T>, UnknownStrategy> {
        self.get(name)?;
        Ok(self.entries.remove(name).expect("entry checked above"))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(|b| &**b)
    }
}

impl<T: ?Sized + Strategy> std::fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry").field("kind", &self.kind).field("entries", &self.names()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct A;
    impl Strategy for A {
        fn name(&self) -> &'static str {
            "a"
        }
        fn description(&self) -> &'static str {
            "first"
        }
    }

    #[test]
    fn lookup_and_error() {
        let mut r: Registry<dyn Strategy> = Registry::new("thing");
        r.register(Box::new(A));
        assert_eq!(r.get("a").unwrap().description(), "first");
        let e = r.get("b").err().unwrap();
        assert_eq!(e.to_string(), "unknown thing `b`; available: a");
    }
}
