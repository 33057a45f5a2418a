use std::collections::BTreeSet;

/// Generates names that avoid a growing set of used names.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub fn new() -> FreshNames {
        FreshNames::default()
    }

    pub fn avoiding(names: impl IntoIterator<Item = String>) -> FreshNames {
        FreshNames {
            used: names.into_iter().collect(),
            counter: 0,
        }
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn reserve_all(&mut self, names: impl IntoIterator<Item = String>) {
        self.used.extend(names);
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `prefix` followed by the next counter value not yet in use.
    pub fn fresh(&mut self, prefix: &str) -> String {
        loop {
            let name = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    /// `base` itself if unused, otherwise `base` with a numeric suffix.
    pub fn fresh_like(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        let mut i = 0;
        loop {
            let name = format!("{base}{i}");
            if self.used.insert(name.clone()) {
                return name;
            }
            i += 1;
        }
    }
}
