//! CSV and plot-script writers. CSV uses `.` decimals, `,` separators and LF
//! line endings; identical runs produce bit-identical files.

use grainkin::experiments::ExperimentOutput;
use std::fs;
use std::io::Write;
use std::path::Path;

pub fn write_outputs(dir: &Path, out: &ExperimentOutput, echo: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.echo"), echo)?;

    let mut report = String::from("key,value,provenance,status\n");
    for row in &out.report {
        let status = match row.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "info",
        };
        report.push_str(&format!(
            "{},{},{},{}\n",
            row.key,
            fmt_f64(row.value),
            row.provenance.as_str(),
            status
        ));
    }
    fs::write(dir.join("report.csv"), report)?;

    if !out.series.columns.is_empty() {
        let mut f = fs::File::create(dir.join("series.csv"))?;
        writeln!(f, "{}", out.series.columns.join(","))?;
        for row in &out.series.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            writeln!(f, "{}", cells.join(","))?;
        }
        fs::write(dir.join("plot.gp"), plot_script(&out.series.columns))?;
    }
    Ok(())
}

fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        // Shortest representation that round-trips.
        format!("{v}")
    }
}

fn plot_script(columns: &[String]) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script for series.csv\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 't'\n");
    s.push_str("set logscale y\n");
    s.push_str("plot \\\n");
    let plots: Vec<String> = (2..=columns.len())
        .map(|i| format!("  'series.csv' using 1:{i} with lines"))
        .collect();
    s.push_str(&plots.join(", \\\n"));
    s.push('\n');
    s
}
