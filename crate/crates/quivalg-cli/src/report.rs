use serde::Serialize;

/// One report per command invocation. Failures and errors always carry a
/// witness. Exit codes: 0 pass, 1 semantic fail, 2 I/O or parse error.
#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub witnesses: serde_json::Value,
    pub timing_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn pass(command: &str, witnesses: serde_json::Value, timing_ms: u128) -> Self {
        Report { command: command.into(), status: "pass".into(), witnesses, timing_ms, seed: None }
    }

    pub fn fail(command: &str, witnesses: serde_json::Value, timing_ms: u128) -> Self {
        Report { command: command.into(), status: "fail".into(), witnesses, timing_ms, seed: None }
    }

    pub fn error(command: &str, witnesses: serde_json::Value, timing_ms: u128) -> Self {
        Report { command: command.into(), status: "error".into(), witnesses, timing_ms, seed: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.status.as_str() {
            "pass" => 0,
            "fail" => 1,
            _ => 2,
        }
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).unwrap_or_default());
            return;
        }
        println!("{}: {} ({} ms)", self.command, self.status, self.timing_ms);
        if let Some(seed) = self.seed {
            println!("  seed: {seed}");
        }
        print_value(&self.witnesses, 1);
    }
}

fn print_value(v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_value(val, indent + 1);
                    }
                    _ => println!("{pad}{k}: {val}"),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        print_value(item, indent + 1)
                    }
                    _ => println!("{pad}- {item}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}
