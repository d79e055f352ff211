//! The `converge` subcommand: dt-halving self-convergence ladder plus a
//! mode-refinement tail study, written to `convergence.csv`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::sync::Arc;

use srsp_core::diagnostics::oracles::fit_slope;
use srsp_core::{
    advance, state_distance, Damping, Ensemble, ModeIndex, SpectralBasis, Weights,
};

use crate::config::RunConfig;
use crate::error::CliError;

pub struct ConvergeOptions {
    /// Number of dt values in the halving ladder.
    pub dt_levels: usize,
}

pub fn command_converge(cfg: &RunConfig, opts: &ConvergeOptions) -> Result<(), CliError> {
    if opts.dt_levels < 4 {
        return Err(CliError::Usage("converge needs at least 4 dt levels".into()));
    }
    if cfg.steps == 0 {
        return Err(CliError::Usage("converge needs steps >= 1".into()));
    }
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|source| CliError::Io { path: cfg.out_dir.clone(), source })?;
    let basis = Arc::new(SpectralBasis::new(cfg.domain.clone()));
    let e0 = crate::commands::run::initial_state(cfg, &basis)?;

    // dt-halving ladder at fixed horizon
    let finals: Vec<Ensemble> = (0..opts.dt_levels)
        .map(|i| {
            let steps = cfg.steps << i;
            let dt = cfg.dt / (1u64 << i) as f64;
            let mut s = e0.clone();
            for _ in 0..steps {
                s = advance(&s, dt, cfg.scheme, cfg.coupling);
            }
            s
        })
        .collect();
    let dt_errors: Vec<f64> = finals.windows(2).map(|w| state_distance(&w[0], &w[1])).collect();
    let dt_values: Vec<f64> = (0..dt_errors.len()).map(|i| cfg.dt / (1u64 << i) as f64).collect();
    let at_roundoff = dt_errors.iter().all(|&e| e < 1e-12);
    let dt_slope = if at_roundoff {
        f64::NAN
    } else {
        let xs: Vec<f64> = (0..dt_errors.len()).map(|i| -(i as f64)).collect();
        let ys: Vec<f64> = dt_errors.iter().map(|e| e.log2()).collect();
        fit_slope(&xs, &ys)
    };

    // mode-refinement tail study on smooth data
    let smooth = Ensemble::seeded(
        basis.clone(),
        Weights::uniform(cfg.weights.len()).unwrap(),
        cfg.mass,
        cfg.seed,
        Damping::Exponential(8.0),
    )
    .map_err(|e| CliError::Verify(format!("smooth initial data: {e}")))?;
    let mut state = smooth.clone();
    for _ in 0..cfg.steps {
        state = advance(&state, cfg.dt, cfg.scheme, cfg.coupling);
    }
    let fractions = [8usize, 4, 2, 1];
    let mut tail_levels = Vec::new();
    for &f in &fractions {
        let cutoffs: Vec<usize> = cfg.domain.cutoffs().iter().map(|&n| (n / f).max(1)).collect();
        if tail_levels.last().map(|(c, _)| c == &cutoffs).unwrap_or(false) {
            continue;
        }
        let tail = tail_norm(&state, &cutoffs);
        tail_levels.push((cutoffs, tail));
    }
    let tail_orders: Vec<f64> = tail_levels
        .windows(2)
        .map(|w| {
            let (ca, ta) = &w[0];
            let (cb, tb) = &w[1];
            let ratio = cb[0] as f64 / ca[0] as f64;
            (ta / tb).log2() / ratio.log2()
        })
        .collect();

    let csv_path = cfg.out_dir.join("convergence.csv");
    let mut csv = BufWriter::new(
        File::create(&csv_path).map_err(|source| CliError::Io { path: csv_path.clone(), source })?,
    );
    let werr = |source: std::io::Error| CliError::Io { path: csv_path.clone(), source };
    writeln!(csv, "study,level,param,value,order").map_err(werr)?;
    for (i, (&dt, &err)) in dt_values.iter().zip(&dt_errors).enumerate() {
        let order = if i == 0 || at_roundoff {
            String::new()
        } else {
            format!("{}", (dt_errors[i - 1] / dt_errors[i]).log2())
        };
        writeln!(csv, "dt,{i},{dt},{err},{order}").map_err(werr)?;
    }
    for (i, (cutoffs, tail)) in tail_levels.iter().enumerate() {
        let order = if i == 0 { String::new() } else { format!("{}", tail_orders[i - 1]) };
        writeln!(csv, "modes,{i},{},{tail},{order}", cutoffs[0]).map_err(werr)?;
    }
    csv.flush().map_err(werr)?;

    println!("dt ladder: errors {dt_errors:?}");
    if at_roundoff {
        println!("dt ladder: errors at roundoff floor, no slope to fit");
    } else {
        println!("dt ladder: observed order {dt_slope:.3}");
    }
    println!(
        "modes ladder: cutoffs {:?} tails {:?}",
        tail_levels.iter().map(|(c, _)| c[0]).collect::<Vec<_>>(),
        tail_levels.iter().map(|(_, t)| *t).collect::<Vec<_>>()
    );
    println!("modes ladder: observed orders {tail_orders:?} (growing orders mean super-algebraic decay)");
    println!("convergence table: {}", csv_path.display());
    Ok(())
}

/// Weighted norm of the coefficients outside the cutoff block `1..=c_i`.
fn tail_norm(e: &Ensemble, cutoffs: &[usize]) -> f64 {
    let bandwidth = e.basis().bandwidth().to_vec();
    let mut total = 0.0;
    for (&lambda, c) in e.weights().as_slice().iter().zip(e.psi()) {
        let mut s = 0.0;
        for (flat, v) in c.0.iter().enumerate() {
            let idx = ModeIndex::from_flat(flat, &bandwidth);
            if idx.0.iter().zip(cutoffs).any(|(&n, &cut)| n > cut) {
                s += v.norm_sqr();
            }
        }
        total += lambda * s;
    }
    total.sqrt()
}
