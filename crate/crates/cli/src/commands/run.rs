//! The `run` subcommand: propagate, stream `diagnostics.csv`, optionally write
//! snapshots and SVG plots, and print the conservation summary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use srsp_core::{
    conservation_report, run, DiagnosticsRecord, Ensemble, RunError, SpectralBasis, StepParams,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::plot::write_line_plot;
use crate::snapshot::{read_snapshot, write_snapshot};

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn initial_state(cfg: &RunConfig, basis: &Arc<SpectralBasis>) -> Result<Ensemble, CliError> {
    match &cfg.snapshot_in {
        Some(path) => Ok(read_snapshot(path, basis)?),
        None => Ensemble::seeded(basis.clone(), cfg.weights.clone(), cfg.mass, cfg.seed, cfg.damping)
            .map_err(|e| CliError::Config(crate::config::ConfigError::Constraint {
                field: "initial",
                msg: e.to_string(),
            })),
    }
}

pub fn command_run(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let basis = Arc::new(SpectralBasis::new(cfg.domain.clone()));
    let e0 = initial_state(cfg, &basis)?;

    let params = StepParams {
        dt: cfg.dt,
        scheme: cfg.scheme,
        steps: cfg.steps,
        cadence: cfg.cadence,
        coupling: cfg.coupling,
        guard_factor: cfg.guard_factor,
    };
    let wrap = params.phase_wrap_ratio(&basis, e0.mass());
    if wrap >= 1.0 {
        println!(
            "advisory: dt * max kinetic phase = {:.2} pi; the top of the band wraps within one step",
            wrap
        );
    }

    let csv_path = cfg.out_dir.join("diagnostics.csv");
    let mut csv = BufWriter::new(File::create(&csv_path).map_err(io_err(&csv_path))?);
    writeln!(csv, "{}", DiagnosticsRecord::CSV_HEADER).map_err(io_err(&csv_path))?;

    let mut records: Vec<DiagnosticsRecord> = Vec::new();
    let mut snapshots: Vec<PathBuf> = Vec::new();
    let snapshot_cadence = cfg.snapshot_cadence;
    let out_dir = cfg.out_dir.clone();
    let dt = cfg.dt;

    let result = run(&e0, &params, &mut |rec, state| {
        writeln!(csv, "{}", rec.csv_row())?;
        records.push(rec.clone());
        if snapshot_cadence > 0 {
            let step = (rec.t / dt).round() as usize;
            if step > 0 && step % snapshot_cadence == 0 {
                let path = out_dir.join(format!("snapshot_{step:08}.srsp"));
                write_snapshot(&path, state)
                    .map_err(|e| std::io::Error::other(e.to_string()))?;
                snapshots.push(path);
            }
        }
        Ok(())
    });
    csv.flush().map_err(io_err(&csv_path))?;

    let final_state = match result {
        Ok(e) => e,
        Err(RunError::BlowUp { record, guard }) => return Err(CliError::BlowUp { record, guard }),
        Err(RunError::NonFinite { record }) => return Err(CliError::NonFinite { record }),
        Err(RunError::Sink(e)) => return Err(CliError::Io { path: csv_path, source: e }),
    };

    if snapshot_cadence > 0 {
        let path = cfg.out_dir.join("snapshot_final.srsp");
        write_snapshot(&path, &final_state)?;
        snapshots.push(path);
    }

    if cfg.plots {
        let t: Vec<f64> = records.iter().map(|r| r.t).collect();
        let pair = |ys: Vec<f64>| -> Vec<(f64, f64)> { t.iter().cloned().zip(ys).collect() };
        let mass = pair(records.iter().map(|r| r.mass).collect());
        write_line_plot(&cfg.out_dir.join("mass.svg"), "mass vs t", &[("mass", mass)])
            .map_err(io_err(&cfg.out_dir))?;
        let e_tm = pair(records.iter().map(|r| r.energy_tm).collect());
        let e_hp = pair(records.iter().map(|r| r.energy_half_p).collect());
        write_line_plot(
            &cfg.out_dir.join("energy.svg"),
            "energy vs t",
            &[("energy_Tm", e_tm), ("energy_half_p", e_hp)],
        )
        .map_err(io_err(&cfg.out_dir))?;
        let gram = pair(records.iter().map(|r| r.gram_defect).collect());
        write_line_plot(
            &cfg.out_dir.join("gram_defect.svg"),
            "gram defect vs t",
            &[("gram_defect", gram)],
        )
        .map_err(io_err(&cfg.out_dir))?;
    }

    if records.len() >= 2 {
        let summary = conservation_report(&records).expect("at least two records");
        println!("run complete: {} steps, {} records", cfg.steps, records.len());
        println!("{summary}");
    } else {
        println!("run complete: {} steps, {} records", cfg.steps, records.len());
    }
    if !snapshots.is_empty() {
        println!("snapshots written: {}", snapshots.len());
    }
    println!("diagnostics: {}", csv_path.display());
    Ok(())
}
