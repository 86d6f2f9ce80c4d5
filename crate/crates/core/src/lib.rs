pub mod language;
pub mod presentations;
pub mod rewriting;
pub mod special;
pub mod words;
