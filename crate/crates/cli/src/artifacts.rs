//! Artifact writing. Every file is built fully in memory and written in
//! one call, so a run either leaves a complete artifact or none, and a
//! rerun with the same config reproduces identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::CliError;

/// Floats are printed with 17 significant digits so parsing the CSV back
/// recovers the exact f64.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Refuses to clobber any of `names` in `out` unless `force` is set.
/// Runs before the computation so a refusal costs nothing.
pub fn check_overwrite(out: &Path, names: &[&str], force: bool) -> Result<(), CliError> {
    if force {
        return Ok(());
    }
    for name in names {
        let path = out.join(name);
        if path.exists() {
            return Err(CliError::Config(format!(
                "refusing to overwrite {} (pass --force to allow)",
                path.display()
            )));
        }
    }
    Ok(())
}

pub fn write_file(out: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out.display())))?;
    let path = out.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// `quantity,value` rows; the workhorse layout for scalar summaries.
pub fn summary_csv(rows: &[(String, f64)]) -> String {
    let mut s = String::from("quantity,value\n");
    for (name, value) in rows {
        let _ = writeln!(s, "{name},{}", fmt17(*value));
    }
    s
}

/// Minimal static scatter plot of spectrum atoms: white canvas, unit
/// circle for reference, one dot per eigenvalue.
pub fn scatter_svg(atoms: &[Complex64]) -> String {
    let size = 800.0_f64;
    let mut max_abs = 1.0_f64;
    for a in atoms {
        max_abs = max_abs.max(a.re.abs()).max(a.im.abs());
    }
    let half = max_abs * 1.1;
    let map = |x: f64| (x / half + 1.0) * size / 2.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(s, "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"#bbbbbb\"/>",
        map(0.0),
        map(0.0),
        size / (2.0 * half)
    );
    for a in atoms {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"black\" fill-opacity=\"0.5\"/>",
            map(a.re),
            // SVG y grows downward; the spectrum plot keeps Im(z) up.
            map(-a.im)
        );
    }
    s.push_str("</svg>\n");
    s
}
