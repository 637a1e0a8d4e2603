use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::output::Table;

/// Which columns to draw and how.
pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub x: &'a str,
    pub y: Vec<String>,
    pub log_x: bool,
    pub log_y: bool,
}

/// Path of the script written next to `data`: same stem, `.gp` extension.
pub fn script_path(data: &Path) -> PathBuf {
    data.with_extension("gp")
}

/// A standalone gnuplot script that plots `spec.y` against `spec.x` from the
/// CSV file `data` and writes `<stem>.png`.
pub fn gnuplot_script(table: &Table, spec: &PlotSpec, data: &Path) -> String {
    let col = |name: &str| table.columns.iter().position(|c| c == name).map(|i| i + 1);
    let file = data
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let png = data.with_extension("png");
    let png = png
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{png}'");
    let _ = writeln!(s, "set title '{}'", spec.title);
    let _ = writeln!(s, "set xlabel '{}'", spec.x);
    if spec.log_x {
        let _ = writeln!(s, "set logscale x");
    }
    if spec.log_y {
        let _ = writeln!(s, "set logscale y");
        let _ = writeln!(s, "set format y '10^{{%L}}'");
    }
    let xc = col(spec.x).unwrap_or(1);
    let curves: Vec<String> = spec
        .y
        .iter()
        .filter_map(|name| col(name))
        .map(|yc| format!("'{file}' using {xc}:{yc} with lines"))
        .collect();
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    s
}
