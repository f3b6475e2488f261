//! CSV helpers shared by all subcommands.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Scientific notation with 15 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

/// `prefix` with `suffix` appended to its file name, e.g. `out/sweep` + `_kernel.csv`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

pub fn ensure_parent(path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(())
}

/// Writes a header and rows of preformatted fields.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table_file(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    ensure_parent(path)?;
    write_table(File::create(path)?, header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_and_format() {
        assert_eq!(with_suffix(Path::new("a/b"), "_x.csv"), PathBuf::from("a/b_x.csv"));
        assert_eq!(fmt_f64(1.5), "1.50000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        let mut buf = Vec::new();
        write_table(&mut buf, &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,2\n");
    }
}
