use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

/// Ordered `key: value` lines. Keys may repeat (one line per item).
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Kv => {
                for (k, v) in &self.entries {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            Format::Text => {
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    out.push_str(&format!("{:<width$}  {v}\n", k.replace('_', " ")));
                }
            }
        }
        out
    }
}

/// A finished command: its report and whether the answer was positive.
pub struct Outcome {
    pub report: Report,
    pub positive: bool,
}
