//! Name-keyed collections of interchangeable strategies.

/// Implemented by every strategy that can live in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    fn describe(&self) -> &'static str {
        ""
    }
}

pub struct Registry<T: ?Sized> {
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Registry {
            entries: Vec::new(),
        }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a strategy. Panics if the name or an alias is already taken.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        for key in std::iter::once(entry.name()).chain(entry.aliases().iter().copied()) {
            assert!(self.get(key).is_none(), "strategy `{key}` registered twice");
        }
        self.entries.push(entry);
        self
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, key: &str) -> Option<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == key || e.aliases().contains(&key))
            .map(|e| e.as_ref())
    }

    /// Canonical names in registration order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}
