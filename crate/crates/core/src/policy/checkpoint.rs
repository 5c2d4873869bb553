//! Plain-text training checkpoints.
//!
//! ```text
//! # entropy-shortcut checkpoint v1
//! layer_sizes=2,100,100,100,1
//! output_scale=1.0000000000000000e1
//! action_dim=1
//! episodes=200000
//! baseline=-3.1e-2
//! adam_t=200000
//! rng_seed=<64 hex digits>
//! rng_stream=0
//! rng_word_pos=123456
//! [theta]
//! <one value per line>
//! [adam_m]
//! ...
//! [adam_v]
//! ...
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::adam::AdamState;
use super::mlp::PolicyParameters;
use super::train::BaselineState;
use crate::dynamics::fmt_f64;
use crate::error::{Error, Result};

const MAGIC: &str = "# entropy-shortcut checkpoint v1";

/// Everything needed to resume training bit-for-bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub theta: PolicyParameters,
    pub adam: AdamState,
    pub baseline: BaselineState,
    pub episodes: u64,
    pub rng: ChaCha8Rng,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let sizes: Vec<String> = self.theta.sizes().iter().map(|n| n.to_string()).collect();
        let seed: String = self.rng.get_seed().iter().map(|b| format!("{b:02x}")).collect();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "layer_sizes={}", sizes.join(",")).unwrap();
        writeln!(s, "output_scale={}", fmt_f64(self.theta.scale())).unwrap();
        writeln!(s, "action_dim={}", self.theta.output_dim()).unwrap();
        writeln!(s, "episodes={}", self.episodes).unwrap();
        writeln!(s, "baseline={}", fmt_f64(self.baseline.w)).unwrap();
        writeln!(s, "adam_t={}", self.adam.t).unwrap();
        writeln!(s, "rng_seed={seed}").unwrap();
        writeln!(s, "rng_stream={}", self.rng.get_stream()).unwrap();
        writeln!(s, "rng_word_pos={}", self.rng.get_word_pos()).unwrap();
        for (name, values) in [("theta", self.theta.as_slice()), ("adam_m", &self.adam.m), ("adam_v", &self.adam.v)] {
            writeln!(s, "[{name}]").unwrap();
            for v in values {
                writeln!(s, "{}", fmt_f64(*v)).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self> {
        let fail = |detail: String| Error::Format { path: origin.to_string(), detail };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(fail("missing checkpoint header".into())),
        }
        let mut header = HashMap::new();
        let mut sections: Vec<(String, Vec<f64>)> = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                sections.push((name.to_string(), Vec::new()));
            } else if let Some((_, values)) = sections.last_mut() {
                values.push(line.parse().map_err(|_| fail(format!("line {}: bad number {line:?}", i + 1)))?);
            } else if let Some((k, v)) = line.split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            } else {
                return Err(fail(format!("line {}: expected key=value", i + 1)));
            }
        }
        let get = |k: &str| header.get(k).ok_or_else(|| fail(format!("missing {k}")));
        let parse_u = |k: &str| -> Result<u128> { get(k)?.parse().map_err(|_| fail(format!("bad {k}"))) };
        let parse_f = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| fail(format!("bad {k}"))) };

        let sizes: Vec<usize> = get("layer_sizes")?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| fail(format!("bad layer size {t:?}"))))
            .collect::<Result<_>>()?;
        let scale = parse_f("output_scale")?;
        let mut take = |name: &str| -> Result<Vec<f64>> {
            let idx = sections.iter().position(|(n, _)| n == name).ok_or_else(|| fail(format!("missing [{name}]")))?;
            Ok(sections.swap_remove(idx).1)
        };
        let (theta_v, m, v) = (take("theta")?, take("adam_m")?, take("adam_v")?);
        let theta = PolicyParameters::from_parts(sizes.clone(), scale, theta_v)
            .ok_or_else(|| fail(format!("parameter count does not match layer sizes {sizes:?}")))?;
        if parse_u("action_dim")? != theta.output_dim() as u128 {
            return Err(fail("action_dim disagrees with layer sizes".into()));
        }
        if m.len() != theta.len() || v.len() != theta.len() {
            return Err(fail("Adam moments do not match the parameter count".into()));
        }
        let hex = get("rng_seed")?;
        if hex.len() != 64 {
            return Err(fail("rng_seed must be 64 hex digits".into()));
        }
        let mut seed = [0u8; 32];
        for (k, b) in seed.iter_mut().enumerate() {
            *b = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16).map_err(|_| fail("bad rng_seed".into()))?;
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(parse_u("rng_stream")? as u64);
        rng.set_word_pos(parse_u("rng_word_pos")?);
        Ok(Checkpoint {
            adam: AdamState { m, v, t: parse_u("adam_t")? as u64 },
            theta,
            baseline: BaselineState { w: parse_f("baseline")? },
            episodes: parse_u("episodes")? as u64,
            rng,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text, &path.display().to_string())
    }
}
