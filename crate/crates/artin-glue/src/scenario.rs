//! Scenario files: placeholder, filled in after the core compiles.

pub fn placeholder() {}
