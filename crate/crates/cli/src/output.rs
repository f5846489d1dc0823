use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hydrofield::Error as LibError;

#[derive(Debug)]
pub enum AppError {
    /// Bad arguments or out-of-domain input.
    Input(String),
    /// An invariant or consistency check failed.
    Invariant(String),
    Io(String),
}

impl AppError {
    pub fn code(&self) -> u8 {
        match self {
            AppError::Invariant(_) => 1,
            AppError::Input(_) => 2,
            AppError::Io(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Input(m) | AppError::Invariant(m) | AppError::Io(m) => f.write_str(m),
        }
    }
}

impl From<LibError> for AppError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::Consistency(_) => AppError::Invariant(e.to_string()),
            _ => AppError::Input(e.to_string()),
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;

pub fn io_err(path: Option<&Path>, e: io::Error) -> AppError {
    match path {
        Some(p) => AppError::Io(format!("{}: {e}", p.display())),
        None => AppError::Io(e.to_string()),
    }
}

/// Runs `f` against the file at `path`, or stdout.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> AppResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_err(Some(p), e))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(Some(p), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(None, e))
        }
    }
}

pub fn emit_str(path: Option<&Path>, s: &str) -> AppResult<()> {
    emit(path, |w| w.write_all(s.as_bytes()))
}

pub fn json_string<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Left-aligned first column, right-aligned others.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            if i == 0 {
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str("  ");
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    let total: usize = widths.iter().sum::<usize>() + 2 * (cols - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv_line(cells: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(cells).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
