use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::{RunConfig, FIG3_BETAS};
use super::run::{
    provenance_header, regression, run_sweep, simulate_fields, simulate_point, write_sweep_csv,
    SweepTable,
};
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::pulse_engine::{peak_time, FieldEnvelope};

/// One output file, rendered in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub file_name: String,
    pub contents: String,
    /// Companion gnuplot script, when requested.
    pub script: Option<String>,
}

impl Dataset {
    /// Writes the dataset (and its script) into `dir`, returning the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(&self.file_name);
        std::fs::write(&path, &self.contents)?;
        let mut written = vec![path];
        if let Some(script) = &self.script {
            let p = dir.join(self.file_name.replace(".csv", ".gp"));
            std::fs::write(&p, script)?;
            written.push(p);
        }
        Ok(written)
    }
}

fn gnuplot(file: &str, xlabel: &str, ylabel: &str, series: &[(usize, &str)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let plots: Vec<String> = series
        .iter()
        .map(|(col, title)| format!("'{file}' using 1:{col} with lines title '{title}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

fn header(cfg: &RunConfig, figure: u32, summary: &[(&str, String)]) -> String {
    let mut s = format!("# figure = {figure}\n");
    for line in provenance_header(cfg) {
        s.push_str(&line);
        s.push('\n');
    }
    for (k, v) in summary {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s
}

fn envelope_columns(s: &mut String, columns: &[&str], envs: &[(&FieldEnvelope, f64)]) {
    let _ = writeln!(s, "{}", columns.join(","));
    let grid = envs[0].0.grid;
    for m in 0..grid.len {
        let mut row = vec![fmt_f64(grid.time(m))];
        row.extend(
            envs.iter()
                .map(|(e, scale)| fmt_f64(e.values[m].norm_sqr() * scale)),
        );
        let _ = writeln!(s, "{}", row.join(","));
    }
}

fn sweep_dataset(
    cfg: &RunConfig,
    figure: u32,
    name: String,
    summary: Vec<(&str, String)>,
    table: &SweepTable,
) -> Result<Dataset> {
    let mut contents = format!("# figure = {figure}\n");
    for (k, v) in &summary {
        let _ = writeln!(contents, "# {k} = {v}");
    }
    let mut buf = Vec::new();
    write_sweep_csv(cfg, table, &mut buf)?;
    contents.push_str(&String::from_utf8(buf).expect("CSV is UTF-8"));
    let script = cfg.output.gnuplot.then(|| match figure {
        3 => gnuplot(&name, "G/gamma", "gamma <t>", &[(2, "mean arrival")]),
        4 => gnuplot(&name, "G/gamma", "gamma delta tau", &[(6, "measured"), (5, "analytic")]),
        _ => {
            "set datafile separator ','\nset datafile commentschars '#'\nset xlabel 'gamma delta tau'\nset ylabel '2 gamma <t>'\n"
                .to_string()
                + &format!("plot '{name}' using 6:(2*abs($2)) with linespoints title '2|<t>|'\n")
        }
    });
    Ok(Dataset {
        file_name: name,
        contents,
        script,
    })
}

/// Sweep preset for `figure` when the configuration has none of its own.
fn with_sweep(cfg: &RunConfig, figure: u32) -> Result<RunConfig> {
    let mut c = cfg.clone();
    if c.sweep.is_none() {
        c.sweep = RunConfig::preset(figure)?.sweep;
    }
    Ok(c)
}

/// Slope of 2|⟨t⟩| against the measured delay over the successful rows.
pub fn mean_arrival_slope(table: &SweepTable) -> Option<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = table
        .successes()
        .map(|(_, r)| (r.dgd_measured, 2.0 * r.mean_arrival.abs()))
        .unzip();
    regression(&x, &y).map(|(s, _)| s)
}

/// Emits the data underlying figure `id` for the configuration `cfg`.
pub fn reproduce_figure(id: u32, cfg: &RunConfig) -> Result<Vec<Dataset>> {
    match id {
        1 => {
            let f = simulate_fields(&cfg.atomic, &cfg.probe, &cfg.post_selection)?;
            let r = simulate_point(cfg)?;
            let name = "fig1_envelopes.csv".to_string();
            let mut contents = header(
                cfg,
                1,
                &[
                    ("dgd_measured", fmt_f64(r.dgd_measured)),
                    (
                        "dgd_analytic",
                        r.dgd_analytic.map(fmt_f64).unwrap_or_default(),
                    ),
                    ("eta", fmt_f64(r.eta)),
                ],
            );
            envelope_columns(
                &mut contents,
                &[
                    "tau_gamma",
                    "input_abs2",
                    "sigma_plus_abs2",
                    "sigma_minus_abs2",
                ],
                &[(&f.input, 1.0), (&f.plus, 1.0), (&f.minus, 1.0)],
            );
            let script = cfg.output.gnuplot.then(|| {
                gnuplot(
                    &name,
                    "gamma tau",
                    "|E|^2",
                    &[(2, "input"), (3, "sigma+"), (4, "sigma-")],
                )
            });
            Ok(vec![Dataset {
                file_name: name,
                contents,
                script,
            }])
        }
        6 => {
            let f = simulate_fields(&cfg.atomic, &cfg.probe, &cfg.post_selection)?;
            let r = simulate_point(cfg)?;
            let name = "fig6_pulses.csv".to_string();
            let mut contents = header(
                cfg,
                6,
                &[
                    ("mean_arrival", fmt_f64(r.mean_arrival)),
                    ("mean_shift", fmt_f64(r.mean_shift)),
                    ("output_peak_shift", fmt_f64(r.output_peak_shift)),
                    ("output_peak_time", fmt_f64(peak_time(&f.output)?)),
                    ("energy_fraction", fmt_f64(r.energy_fraction)),
                    ("peak_ratio", fmt_f64(r.peak_ratio)),
                    ("dgd_inferred", fmt_f64(r.dgd_inferred)),
                ],
            );
            envelope_columns(
                &mut contents,
                &["tau_gamma", "input_normalized", "output_normalized"],
                &[
                    (&f.input, 1.0 / f.input.peak_intensity()),
                    (&f.output, 1.0 / f.output.peak_intensity()),
                ],
            );
            let script = cfg.output.gnuplot.then(|| {
                gnuplot(
                    &name,
                    "gamma tau",
                    "normalized intensity",
                    &[(2, "input"), (3, "output")],
                )
            });
            Ok(vec![Dataset {
                file_name: name,
                contents,
                script,
            }])
        }
        3 => {
            let base = with_sweep(cfg, 3)?;
            FIG3_BETAS
                .iter()
                .map(|&beta| {
                    let mut c = base.clone();
                    c.post_selection.beta = beta;
                    let table = run_sweep(&c)?;
                    sweep_dataset(
                        &c,
                        3,
                        format!("fig3_beta_{}.csv", fmt_f64(beta)),
                        vec![],
                        &table,
                    )
                })
                .collect()
        }
        4 => {
            let c = with_sweep(cfg, 4)?;
            let table = run_sweep(&c)?;
            let d: Vec<f64> = table.successes().map(|(_, r)| r.dgd_measured).collect();
            let monotone = d.windows(2).all(|w| w[1] < w[0]);
            let summary = vec![("dgd_monotone_decreasing", monotone.to_string())];
            Ok(vec![sweep_dataset(
                &c,
                4,
                "fig4.csv".into(),
                summary,
                &table,
            )?])
        }
        5 | 7 => {
            let c = with_sweep(cfg, id)?;
            let table = run_sweep(&c)?;
            let slope = mean_arrival_slope(&table).map(fmt_f64).unwrap_or_default();
            let summary = vec![("slope_2_mean_arrival_vs_dgd_measured", slope)];
            Ok(vec![sweep_dataset(
                &c,
                id,
                format!("fig{id}.csv"),
                summary,
                &table,
            )?])
        }
        other => Err(Error::UnknownFigure(other)),
    }
}
