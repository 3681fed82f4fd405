use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// Opens `--out` or stdout.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(io::BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

/// The command line as typed, minus the path to the executable, so that
/// identical flags give identical bytes.
pub fn command_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::iter::once("dispteleport".to_string()).chain(args).collect::<Vec<_>>().join(" ")
}

pub fn nmax_label(nmax: Option<usize>) -> String {
    nmax.map_or_else(|| "rule".to_string(), |n| n.to_string())
}

/// Shortest round-trip representation in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub struct Csv {
    inner: csv::Writer<Box<dyn Write>>,
}

impl Csv {
    /// Writes the `#` comment line, then the column header.
    pub fn new(mut out: Box<dyn Write>, provenance: &str, nmax: &str, columns: &[String]) -> Result<Self> {
        writeln!(
            out,
            "# dispteleport {} | command: {} | provenance: {} | nmax: {}",
            env!("CARGO_PKG_VERSION"),
            command_line(),
            provenance,
            nmax
        )?;
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(columns)?;
        Ok(Self { inner })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        Ok(self.inner.write_record(fields)?)
    }

    pub fn finish(mut self) -> Result<()> {
        Ok(self.inner.flush()?)
    }
}
