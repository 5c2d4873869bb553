use std::io::{Read, Write};

use crate::dynamics::fmt_f64;
use crate::error::{Error, Result};
use crate::policy::CurvePoint;

/// Relative plateau tolerance used by [`converged`].
pub const CONVERGENCE_TOL: f64 = 0.05;

/// Learning-curve CSV: `episode,total_reward,delta_d,sigma`.
pub fn write_learning_curve<W: Write>(out: W, curve: &[CurvePoint], header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if header {
        w.write_record(["episode", "total_reward", "delta_d", "sigma"])?;
    }
    for p in curve {
        w.write_record([p.episode.to_string(), fmt_f64(p.total_reward), fmt_f64(p.delta_d), fmt_f64(p.sigma)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_learning_curve<R: Read>(input: R, origin: &str) -> Result<Vec<CurvePoint>> {
    let fail = |detail: String| Error::Format { path: origin.to_string(), detail };
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != ["episode", "total_reward", "delta_d", "sigma"] {
        return Err(fail(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| fail(format!("row {}: bad column {k}", i + 1)))
        };
        let episode = rec
            .get(0)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| fail(format!("row {}: bad episode", i + 1)))?;
        out.push(CurvePoint { episode, total_reward: num(1)?, delta_d: num(2)?, sigma: num(3)? });
    }
    Ok(out)
}

/// Plateau test on total reward: the mean over the last tenth of the curve differs from
/// the mean over the tenth before it by at most `CONVERGENCE_TOL·|last| + 1e-4`.
pub fn converged(curve: &[CurvePoint]) -> bool {
    let window = curve.len() / 10;
    if window == 0 {
        return false;
    }
    let mean = |s: &[CurvePoint]| s.iter().map(|p| p.total_reward).sum::<f64>() / s.len() as f64;
    let n = curve.len();
    let last = mean(&curve[n - window..]);
    let prev = mean(&curve[n - 2 * window..n - window]);
    (last - prev).abs() <= CONVERGENCE_TOL * last.abs() + 1e-4
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: u64, r: f64) -> Vec<CurvePoint> {
        (1..=n).map(|e| CurvePoint { episode: e, total_reward: r, delta_d: 0.1, sigma: 0.2 }).collect()
    }

    #[test]
    fn roundtrip() {
        let mut curve = flat(5, -0.0123456789012345);
        curve[2].sigma = 1.0 / 3.0;
        let mut buf = Vec::new();
        write_learning_curve(&mut buf, &curve, true).unwrap();
        assert_eq!(read_learning_curve(buf.as_slice(), "mem").unwrap(), curve);
    }

    #[test]
    fn plateau_detection() {
        assert!(converged(&flat(100, -0.5)));
        assert!(!converged(&flat(5, -0.5)));
        let rising: Vec<CurvePoint> =
            (1..=100).map(|e| CurvePoint { episode: e, total_reward: -1.0 + e as f64 / 100.0, delta_d: 0.0, sigma: 0.0 }).collect();
        assert!(!converged(&rising));
    }
}
