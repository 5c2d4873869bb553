use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use super::config::RunConfig;
use super::train::train_target;
use crate::dynamics::fmt_f64;
use crate::error::{Error, Result};
use crate::oracle::{optimal_solution_for_lambdas, DEFAULT_SAMPLES};

const HEADER: [&str; 7] = ["lambda_f", "seed", "delta_d", "sigma_min", "oracle_sigma", "converged", "error"];

/// One sweep target. `delta_d` and `sigma_min` come from the deterministic evaluation
/// rollout; failed targets carry `NaN` there and the message in `error`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda_f: f64,
    pub seed: u64,
    pub delta_d: f64,
    pub sigma_min: f64,
    pub oracle_sigma: Option<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

fn target_dir(out: &Path, index: usize) -> std::path::PathBuf {
    out.join(format!("target_{index:02}"))
}

/// Trains and evaluates target `index` in `out/target_NN/`. Failures are recorded in the
/// row rather than returned.
pub fn run_target(cfg: &RunConfig, index: usize, out: &Path, resume: bool) -> SweepRow {
    let lambda_f = cfg.lambda_f[index];
    let seed = cfg.policy_for(index).seed;
    let dir = target_dir(out, index);
    let failed = |e: Error| SweepRow {
        lambda_f,
        seed,
        delta_d: f64::NAN,
        sigma_min: f64::NAN,
        oracle_sigma: None,
        converged: false,
        error: Some(e.to_string()),
    };
    match train_target(cfg, index, &dir, resume) {
        Ok(s) => {
            if s.oracle_sigma.is_some() {
                if let Err(e) = cfg.thermal().and_then(|ctx| {
                    optimal_solution_for_lambdas(cfg.lambda_i, lambda_f, cfg.tau, ctx, DEFAULT_SAMPLES)?.save(
                        &dir.join("oracle.csv"),
                        &dir.join("oracle.meta"),
                        ctx,
                    )
                }) {
                    return failed(e);
                }
            }
            SweepRow {
                lambda_f,
                seed,
                delta_d: s.delta_d,
                sigma_min: s.sigma,
                oracle_sigma: s.oracle_sigma,
                converged: s.converged,
                error: None,
            }
        }
        Err(e) => failed(e),
    }
}

/// Runs every target (in parallel unless `cfg.sequential`) and writes `out/sweep.csv`.
/// Rows are in `lambda_f` list order regardless of scheduling.
pub fn run_sweep(cfg: &RunConfig, out: &Path, resume: bool) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let indices: Vec<usize> = (0..cfg.lambda_f.len()).collect();
    let rows: Vec<SweepRow> = if cfg.sequential {
        indices.iter().map(|&i| run_target(cfg, i, out, resume)).collect()
    } else {
        indices.par_iter().map(|&i| run_target(cfg, i, out, resume)).collect()
    };
    write_sweep_csv(std::fs::File::create(out.join("sweep.csv"))?, &rows)?;
    Ok(rows)
}

/// Sweep CSV: `lambda_f,seed,delta_d,sigma_min,oracle_sigma,converged,error`, with empty
/// cells for absent values.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.lambda_f),
            r.seed.to_string(),
            fmt_f64(r.delta_d),
            fmt_f64(r.sigma_min),
            r.oracle_sigma.map(fmt_f64).unwrap_or_default(),
            r.converged.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R, origin: &str) -> Result<Vec<SweepRow>> {
    let fail = |detail: String| Error::Format { path: origin.to_string(), detail };
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(HEADER) {
        return Err(fail("unexpected sweep header".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let cell = |k: usize| rec.get(k).unwrap_or("").trim();
        let num = |k: usize| -> Result<f64> {
            cell(k).parse().map_err(|_| fail(format!("row {}: bad {}", i + 1, HEADER[k])))
        };
        rows.push(SweepRow {
            lambda_f: num(0)?,
            seed: cell(1).parse().map_err(|_| fail(format!("row {}: bad seed", i + 1)))?,
            delta_d: num(2)?,
            sigma_min: num(3)?,
            oracle_sigma: if cell(4).is_empty() { None } else { Some(num(4)?) },
            converged: cell(5).parse().map_err(|_| fail(format!("row {}: bad converged", i + 1)))?,
            error: Some(cell(6).to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip() {
        let rows = vec![
            SweepRow {
                lambda_f: 0.2,
                seed: 17,
                delta_d: 1e-3,
                sigma_min: 0.0123,
                oracle_sigma: Some(0.01),
                converged: true,
                error: None,
            },
            SweepRow {
                lambda_f: 1.6,
                seed: u64::MAX,
                delta_d: 0.3,
                sigma_min: 0.9,
                oracle_sigma: None,
                converged: false,
                error: Some("numerical failure: x, y".into()),
            },
        ];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_sweep_csv(buf.as_slice(), "mem").unwrap(), rows);
    }
}
