//! File formats: CSV tables, graph exports, Gantt charts and where they go.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_rational::Ratio;
use tiledag::sched::Schedule;
use tiledag::{TaskGraph, WeightModel};

/// Environment variable naming the directory that receives every artifact.
pub const OUT_DIR_ENV: &str = "TILEDAG_OUT_DIR";

/// A CSV table with a header row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Table {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Position of a header column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner().context("flushing CSV")?)?)
    }
}

/// Fixed two-decimal rendering of a rational, half away from zero.
pub fn two_decimals(r: Ratio<u64>) -> String {
    let hundredths = (r * 100u64).round().to_integer();
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// Exact rendering: an integer, or `numer/denom`.
pub fn exact(r: Ratio<u64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One line per task, `task <id> <kind> <indices> w=<weight>`, then one per
/// edge, `edge <from> <to> <cause>`.
pub fn graph_text(g: &TaskGraph, model: &WeightModel) -> String {
    let mut s = String::new();
    for (id, t) in g.tasks().iter().enumerate() {
        let idx = t.indices.to_string();
        let idx = if idx.is_empty() { "-".to_string() } else { idx };
        writeln!(
            s,
            "task {id} {} {idx} w={}",
            t.kind.name(),
            model.weight(t.kind)
        )
        .unwrap();
    }
    for e in g.edges() {
        writeln!(s, "edge {} {} {}", e.from, e.to, e.cause.name()).unwrap();
    }
    s
}

/// Graphviz rendering with kernel names as labels and hazards on edges.
pub fn graph_dot(g: &TaskGraph, model: &WeightModel) -> String {
    let mut s = String::from("digraph tasks {\n");
    for (id, t) in g.tasks().iter().enumerate() {
        writeln!(
            s,
            "  n{id} [label=\"{} ({}) w={}\"];",
            t.kind.name(),
            t.indices,
            model.weight(t.kind)
        )
        .unwrap();
    }
    for e in g.edges() {
        writeln!(
            s,
            "  n{} -> n{} [label=\"{}\"];",
            e.from,
            e.to,
            e.cause.name()
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

/// Graph export in the format the file extension asks for (`.dot` or text).
pub fn graph_export(path: &Path, g: &TaskGraph, model: &WeightModel) -> String {
    match path.extension().and_then(|e| e.to_str()) {
        Some("dot" | "gv") => graph_dot(g, model),
        _ => graph_text(g, model),
    }
}

/// Gantt chart `proc,start,end,kind,i,j,k` of the tasks that occupy a
/// processor, ordered by processor then start time.
pub fn gantt(g: &TaskGraph, s: &Schedule) -> Result<Table> {
    let mut t = Table::new(&["proc", "start", "end", "kind", "i", "j", "k"]);
    let mut placed: Vec<(usize, u64, usize)> = s
        .slots
        .iter()
        .enumerate()
        .filter_map(|(v, slot)| slot.proc.map(|p| (p, slot.start, v)))
        .collect();
    placed.sort_unstable();
    for (p, start, v) in placed {
        let task = g.task(v);
        let idx = |n: usize| task.indices.get(n).map_or(String::new(), |x| x.to_string());
        t.push(vec![
            p.to_string(),
            start.to_string(),
            s.slots[v].finish.to_string(),
            task.kind.name().to_string(),
            idx(0),
            idx(1),
            idx(2),
        ]);
    }
    Ok(t)
}

/// Where a command's artifacts go. An explicit relative path and the
/// default file name both resolve against the output directory when one is
/// set; otherwise the main artifact goes to stdout.
#[derive(Debug, Clone, Default)]
pub struct Destination {
    pub out_dir: Option<PathBuf>,
}

impl Destination {
    pub fn from_env() -> Destination {
        Destination {
            out_dir: std::env::var_os(OUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }

    /// Path for an artifact, or `None` for stdout.
    pub fn resolve(&self, explicit: Option<&Path>, default_name: &str) -> Option<PathBuf> {
        match (explicit, &self.out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p.to_path_buf()),
            (None, Some(dir)) => Some(dir.join(default_name)),
            (None, None) => None,
        }
    }

    /// Writes `content` to the resolved path, or stdout.
    pub fn emit(&self, explicit: Option<&Path>, default_name: &str, content: &str) -> Result<()> {
        match self.resolve(explicit, default_name) {
            Some(path) => write_file(&path, content),
            None => {
                std::io::stdout().write_all(content.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Writes a side artifact that always goes to a file.
    pub fn emit_file(&self, path: &Path, content: &str) -> Result<()> {
        let path = self
            .resolve(Some(path), "")
            .expect("explicit path always resolves");
        write_file(&path, content)
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}
