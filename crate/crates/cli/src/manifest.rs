//! Run manifests and the exact/lossy number formats shared by all
//! commands.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

/// Provenance block embedded in every artifact: what ran, with which
/// parameters, under which seed and tool version, and for how long.
/// Wall time is informational and excluded from determinism comparisons.
pub struct Manifest {
    command: &'static str,
    params: Vec<(&'static str, String)>,
    seed: u64,
    wall_ms: u128,
}

impl Manifest {
    pub fn new(
        command: &'static str,
        params: Vec<(&'static str, String)>,
        seed: u64,
        started: Instant,
    ) -> Self {
        Manifest {
            command,
            params,
            seed,
            wall_ms: started.elapsed().as_millis(),
        }
    }

    /// Single-line form for `#`/`//` comment headers.
    pub fn line(&self) -> String {
        let mut s = format!("manifest command={}", self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push_str(&format!(
            " seed={} version={} wall_ms={}",
            self.seed,
            env!("CARGO_PKG_VERSION"),
            self.wall_ms
        ));
        s
    }

    pub fn json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        json!({
            "command": self.command,
            "params": params,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_ms": self.wall_ms as u64,
        })
    }
}

/// `p/q` in lowest terms; the exact form used everywhere.
pub fn rat_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Six-digit decimal, rounded half away from zero. Lossy; only for the
/// convenience columns that say so.
pub fn dec_str(r: &BigRational) -> String {
    let scale = BigInt::from(1_000_000);
    let scaled = (r.numer() * &scale * 2i32 + r.denom() * r.numer().signum()) / (r.denom() * 2i32);
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>7}");
    let (int, frac) = digits.split_at(digits.len() - 6);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// Accepts `p/q` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}
