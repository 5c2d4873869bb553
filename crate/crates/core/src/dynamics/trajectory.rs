//! Piecewise-constant protocols and their trajectories.

use std::io::{Read, Write};
use std::path::Path;

use super::{
    equilibrium_population, gibbs_state, step_classical, trace_distance, BlochState, ClassicalState,
    ControlParams, Generator, Mode, ThermalContext,
};
use crate::error::{Error, Result};

/// Either kind of two-level state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SystemState {
    Classical(ClassicalState),
    Quantum(BlochState),
}

impl SystemState {
    pub fn mode(&self) -> Mode {
        match self {
            SystemState::Classical(_) => Mode::Classical,
            SystemState::Quantum(_) => Mode::Quantum,
        }
    }

    /// Thermal state of `H(c)` in the given representation.
    pub fn equilibrium(mode: Mode, c: ControlParams, ctx: ThermalContext) -> Self {
        match mode {
            Mode::Classical => SystemState::Classical(ClassicalState { p_minus: equilibrium_population(c.lam, ctx) }),
            Mode::Quantum => SystemState::Quantum(gibbs_state(c, ctx)),
        }
    }

    /// Trace distance (quantum) or L1 distance (classical); both without the ½ factor.
    pub fn distance(&self, other: &SystemState) -> Result<f64> {
        match (self, other) {
            (SystemState::Classical(a), SystemState::Classical(b)) => Ok(super::l1_distance(*a, *b)),
            (SystemState::Quantum(a), SystemState::Quantum(b)) => Ok(trace_distance(*a, *b)),
            _ => Err(Error::InvalidInput("cannot compare classical and quantum states".into())),
        }
    }

    /// State components: `[p₋]` or `[x, y, z]`.
    pub fn components(&self) -> Vec<f64> {
        match self {
            SystemState::Classical(p) => vec![p.p_minus],
            SystemState::Quantum(r) => r.to_array().to_vec(),
        }
    }

    pub fn check_control(mode: Mode, c: ControlParams) -> Result<()> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite control {c:?}")));
        }
        if mode == Mode::Classical && (c.epsilon != 0.0 || c.lam < 0.0) {
            return Err(Error::InvalidInput(format!("classical mode needs epsilon = 0 and lam >= 0, got {c:?}")));
        }
        Ok(())
    }

    /// Evolves for `dt` under constant `c`; returns the new state and `ΔΣ`.
    pub fn advance(self, c: ControlParams, ctx: ThermalContext, dt: f64, substeps: usize) -> Result<(SystemState, f64)> {
        Self::check_control(self.mode(), c)?;
        match self {
            SystemState::Classical(p) => {
                step_classical(p, c.lam, ctx, dt, substeps).map(|(p, ds)| (SystemState::Classical(p), ds))
            }
            SystemState::Quantum(r) => {
                if !r.is_valid() {
                    return Err(Error::InvalidInput(format!("not a density matrix: {r:?}")));
                }
                Generator::new(c, ctx).advance(r, dt, substeps).map(|(r, ds, _)| (SystemState::Quantum(r), ds))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub mode: Mode,
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
    /// One control per interval `[t_j, t_{j+1})`.
    pub controls: Vec<ControlParams>,
    pub entropy_increments: Vec<f64>,
    pub sigma_total: f64,
}

/// Drives `initial` with piecewise-constant `controls` over `N = controls.len()` equal
/// intervals spanning `tau`.
pub fn evolve_protocol(
    initial: SystemState,
    controls: &[ControlParams],
    tau: f64,
    ctx: ThermalContext,
    substeps: usize,
) -> Result<Trajectory> {
    if controls.is_empty() {
        return Err(Error::InvalidInput("protocol has no intervals".into()));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput(format!("tau must be positive, got {tau}")));
    }
    let n = controls.len();
    let dt = tau / n as f64;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut increments = Vec::with_capacity(n);
    let mut state = initial;
    times.push(0.0);
    states.push(state);
    for (j, &c) in controls.iter().enumerate() {
        let (next, ds) = state.advance(c, ctx, dt, substeps)?;
        state = next;
        times.push(tau * (j + 1) as f64 / n as f64);
        states.push(state);
        increments.push(ds);
    }
    Ok(Trajectory {
        mode: initial.mode(),
        times,
        states,
        controls: controls.to_vec(),
        sigma_total: increments.iter().sum(),
        entropy_increments: increments,
    })
}

/// 17 significant digits, with `−0` written as `0`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

impl Trajectory {
    pub fn final_state(&self) -> SystemState {
        *self.states.last().expect("trajectory has at least one state")
    }

    fn state_columns(mode: Mode) -> &'static [&'static str] {
        match mode {
            Mode::Classical => &["p_minus"],
            Mode::Quantum => &["bloch_x", "bloch_y", "bloch_z"],
        }
    }

    /// CSV with one row per instant. Row `j ≥ 1` carries the control applied on
    /// `(t_{j−1}, t_j]` and that interval's `d_sigma`; row 0 carries the first control and
    /// `d_sigma = 0`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t"];
        header.extend_from_slice(Self::state_columns(self.mode));
        header.extend_from_slice(&["epsilon", "lam", "d_sigma", "sigma_cum"]);
        w.write_record(&header)?;
        let mut cum = 0.0;
        for (j, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            let (c, ds) = if j == 0 { (self.controls[0], 0.0) } else { (self.controls[j - 1], self.entropy_increments[j - 1]) };
            cum += ds;
            let mut row = vec![fmt_f64(*t)];
            row.extend(s.components().into_iter().map(fmt_f64));
            row.extend([fmt_f64(c.epsilon), fmt_f64(c.lam), fmt_f64(ds), fmt_f64(cum)]);
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    /// Reads a CSV written by [`Trajectory::write_csv`].
    pub fn read_csv<R: Read>(input: R, origin: &str) -> Result<Trajectory> {
        let fmt_err = |detail: String| Error::Format { path: origin.to_string(), detail };
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mode = if header.iter().any(|h| h == "p_minus") {
            Mode::Classical
        } else if header.iter().any(|h| h == "bloch_x") {
            Mode::Quantum
        } else {
            return Err(fmt_err("no state columns".into()));
        };
        let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| fmt_err(format!("missing column {name}")));
        let t_col = col("t")?;
        let state_cols = Self::state_columns(mode).iter().map(|c| col(c)).collect::<Result<Vec<_>>>()?;
        let (e_col, l_col, d_col) = (col("epsilon")?, col("lam")?, col("d_sigma")?);

        let mut traj = Trajectory { mode, times: vec![], states: vec![], controls: vec![], entropy_increments: vec![], sigma_total: 0.0 };
        for (j, rec) in r.records().enumerate() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| fmt_err(format!("bad number in row {}", j + 1)))
            };
            traj.times.push(num(t_col)?);
            let s: Vec<f64> = state_cols.iter().map(|&i| num(i)).collect::<Result<_>>()?;
            traj.states.push(match mode {
                Mode::Classical => SystemState::Classical(ClassicalState { p_minus: s[0] }),
                Mode::Quantum => SystemState::Quantum(BlochState::new(s[0], s[1], s[2])),
            });
            if j > 0 {
                traj.controls.push(ControlParams::new(num(e_col)?, num(l_col)?));
                traj.entropy_increments.push(num(d_col)?);
            }
        }
        if traj.controls.is_empty() {
            return Err(fmt_err("trajectory needs at least two rows".into()));
        }
        traj.sigma_total = traj.entropy_increments.iter().sum();
        Ok(traj)
    }
}

/// Reads a protocol: either a trajectory CSV (controls taken from rows 1..) or a plain
/// CSV with `epsilon,lam` columns, one row per interval.
pub fn read_protocol_csv(path: &Path) -> Result<Vec<ControlParams>> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    let first = text.lines().next().unwrap_or("");
    if first.split(',').any(|h| h.trim() == "t") {
        return Ok(Trajectory::read_csv(text.as_bytes(), &origin)?.controls);
    }
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let fmt_err = |detail: String| Error::Format { path: origin.clone(), detail };
    let l_col = header.iter().position(|h| h == "lam").ok_or_else(|| fmt_err("missing column lam".into()))?;
    let e_col = header.iter().position(|h| h == "epsilon");
    let mut out = Vec::new();
    for (j, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| fmt_err(format!("bad number in row {}", j + 1)))
        };
        let eps = match e_col {
            Some(i) => num(i)?,
            None => 0.0,
        };
        out.push(ControlParams::new(eps, num(l_col)?));
    }
    if out.is_empty() {
        return Err(fmt_err("protocol has no rows".into()));
    }
    Ok(out)
}
