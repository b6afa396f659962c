use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::Result;

/// Scientific notation with `precision` significant digits; non-finite
/// values become `NaN`.
pub fn format_real(x: f64, precision: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", precision.saturating_sub(1), x)
    } else {
        "NaN".to_string()
    }
}

fn create(path: &Path, overwrite: bool) -> Result<File> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut opts = OpenOptions::new();
    opts.write(true);
    if overwrite {
        opts.create(true).truncate(true);
    } else {
        opts.create_new(true);
    }
    opts.open(path).map_err(|e| {
        if e.kind() == io::ErrorKind::AlreadyExists {
            io::Error::new(
                e.kind(),
                format!("{} exists; pass --force to overwrite", path.display()),
            )
            .into()
        } else {
            e.into()
        }
    })
}

/// Writes a header and rows of already-formatted cells, LF-terminated.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: &[Vec<String>],
    overwrite: bool,
) -> Result<()> {
    let file = create(path, overwrite)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));
    w.write_record(header).map_err(io::Error::from)?;
    for row in rows {
        w.write_record(row).map_err(io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

/// `key=value` lines.
pub fn write_summary(path: &Path, entries: &[(&str, String)], overwrite: bool) -> Result<()> {
    let mut w = BufWriter::new(create(path, overwrite)?);
    for (k, v) in entries {
        writeln!(w, "{k}={v}")?;
    }
    w.flush()?;
    Ok(())
}
