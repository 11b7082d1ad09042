use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Map, Value};

use qcauchy::quantaloid::{MorphismRef, Quantaloid, Witness};

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
}

impl Status {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
        }
    }
}

pub struct Report {
    command: String,
    verdicts: Vec<(String, bool)>,
    facts: Vec<(String, Value)>,
    witnesses: Vec<(String, Value)>,
    caps: Vec<(&'static str, usize)>,
    started: Instant,
    timing: bool,
}

impl Report {
    pub fn new(command: String, timing: bool) -> Self {
        Report {
            command,
            verdicts: Vec::new(),
            facts: Vec::new(),
            witnesses: Vec::new(),
            caps: Vec::new(),
            started: Instant::now(),
            timing,
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, holds: bool) -> bool {
        self.verdicts.push((name.into(), holds));
        holds
    }

    pub fn fact(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.facts.push((name.into(), value.into()));
    }

    pub fn witness(&mut self, text: impl Into<String>, value: Value) {
        self.witnesses.push((text.into(), value));
    }

    pub fn cap(&mut self, name: &'static str, value: usize) {
        self.caps.push((name, value));
    }

    fn elapsed_ms(&self) -> f64 {
        self.started.elapsed().as_secs_f64() * 1000.0
    }

    pub fn to_json(&self) -> Value {
        let map = |items: &mut dyn Iterator<Item = (String, Value)>| Value::Object(items.collect::<Map<_, _>>());
        let mut out = json!({
            "command": self.command,
            "verdicts": map(&mut self.verdicts.iter().map(|(k, v)| (k.clone(), Value::Bool(*v)))),
            "facts": map(&mut self.facts.iter().cloned()),
            "witnesses": self.witnesses.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
            "caps": map(&mut self.caps.iter().map(|(k, v)| (k.to_string(), json!(v)))),
        });
        if self.timing {
            out["timing_ms"] = json!(self.elapsed_ms());
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        for (name, value) in &self.facts {
            let shown = match value {
                Value::String(t) => t.clone(),
                Value::Bool(b) => if *b { "yes" } else { "no" }.to_string(),
                other => other.to_string(),
            };
            writeln!(s, "{name}: {shown}").unwrap();
        }
        for (name, holds) in &self.verdicts {
            writeln!(s, "{name}: {}", if *holds { "yes" } else { "no" }).unwrap();
        }
        for (text, _) in &self.witnesses {
            writeln!(s, "witness: {text}").unwrap();
        }
        if !self.caps.is_empty() {
            let caps: Vec<String> = self.caps.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(s, "caps: {}", caps.join(", ")).unwrap();
        }
        if self.timing {
            writeln!(s, "time: {:.3} ms", self.elapsed_ms()).unwrap();
        }
        s
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(&self.to_json()).expect("serializable"));
        } else {
            print!("{}", self.to_text());
        }
    }
}

pub fn morphism_json(q: &Quantaloid, m: MorphismRef) -> Value {
    json!({
        "src": q.object_name(m.src),
        "dst": q.object_name(m.dst),
        "label": q.describe(m),
    })
}

pub fn morphism_text(q: &Quantaloid, m: MorphismRef) -> String {
    format!("{} : {} -> {}", q.describe(m), q.object_name(m.src), q.object_name(m.dst))
}

pub fn family_json(q: &Quantaloid, w: &Witness) -> Value {
    json!({
        "object": q.object_name(w.object),
        "family": w.family.iter().map(|p| json!({"f": morphism_json(q, p.f), "g": morphism_json(q, p.g)})).collect::<Vec<_>>(),
    })
}

pub fn family_text(q: &Quantaloid, w: &Witness) -> String {
    let pairs: Vec<String> =
        w.family.iter().map(|p| format!("({}, {})", morphism_text(q, p.f), morphism_text(q, p.g))).collect();
    format!("family at {}: {}", q.object_name(w.object), pairs.join(", "))
}
