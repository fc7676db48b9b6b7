//! Exact feasibility arithmetic for the lower-bound parameter system.
//!
//! Given a tree depth n, branching k, a scaling exponent p and a rational
//! load factor alpha, this derives r = ceil(log2(2k)·log2(n)) and the
//! largest d with 2^(d-p) < n - r, then decides three strict inequalities
//! in two algebraically equivalent forms. Everything is integer/rational
//! arithmetic; the one real-valued quantity (the log product) is pinned
//! down by interval bracketing, never floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("{0}")]
    BadInput(String),
    #[error("log bracketing hit the precision cap without separating the ceiling")]
    PrecisionExhausted,
}

/// One strict inequality with both sides evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityVerdict {
    pub name: &'static str,
    pub lhs: BigRational,
    pub relation: &'static str,
    pub rhs: BigRational,
    pub holds: bool,
}

impl InequalityVerdict {
    fn greater(name: &'static str, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs > rhs;
        InequalityVerdict {
            name,
            lhs,
            relation: ">",
            rhs,
            holds,
        }
    }

    fn less(name: &'static str, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs < rhs;
        InequalityVerdict {
            name,
            lhs,
            relation: "<",
            rhs,
            holds,
        }
    }
}

pub(crate) fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for InequalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            fmt_ratio(&self.lhs),
            self.relation,
            fmt_ratio(&self.rhs),
            if self.holds { "holds" } else { "fails" }
        )
    }
}

/// Derived parameters and the verdicts of the feasibility system, in the
/// rewritten form (all sides divided by 2^p) and the original form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessParams {
    pub n: u64,
    pub k: u32,
    pub p: u32,
    pub alpha: BigRational,
    pub r: u64,
    pub d: u64,
    pub rewritten: Vec<InequalityVerdict>,
    pub original: Vec<InequalityVerdict>,
    pub feasible: bool,
}

impl WitnessParams {
    pub fn kv_pairs(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("n".into(), self.n.to_string()),
            ("k".into(), self.k.to_string()),
            ("p".into(), self.p.to_string()),
            ("alpha".into(), fmt_ratio(&self.alpha)),
            ("r".into(), self.r.to_string()),
            ("d".into(), self.d.to_string()),
            ("feasible".into(), self.feasible.to_string()),
        ];
        for (form, list) in [("rewritten", &self.rewritten), ("original", &self.original)] {
            for v in list {
                kv.push((format!("{form}.{}", v.name), v.to_string()));
            }
        }
        kv
    }
}

impl fmt::Display for WitnessParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in self.kv_pairs() {
            writeln!(f, "{key} {value}")?;
        }
        Ok(())
    }
}

const SCALE_VS_DISTORTION: &str = "scale-vs-distortion";
const COUNT_VS_LEAVES: &str = "count-vs-leaves";
const SCALE_VS_DEPTH: &str = "scale-vs-depth";

/// Computes (r, d) from (n, k, p) and evaluates the inequality system
/// against `alpha`. Returns None when n - r < 2 and no d exists.
pub fn witness_params(
    n: u64,
    k: u32,
    p: u32,
    alpha: &BigRational,
) -> Result<Option<WitnessParams>, WitnessError> {
    if n < 2 {
        return Err(WitnessError::BadInput(format!(
            "tree depth must be at least 2, got {n}"
        )));
    }
    if k < 2 {
        return Err(WitnessError::BadInput(format!(
            "branching must be at least 2, got {k}"
        )));
    }
    if !alpha.is_positive() {
        return Err(WitnessError::BadInput(format!(
            "alpha must be positive, got {}",
            fmt_ratio(alpha)
        )));
    }
    let two_k = u64::from(k) * 2;
    let r = ceil_log2_product(&BigUint::from(n), &BigUint::from(two_k))?;
    if i128::from(n) - i128::from(r) < 2 {
        return Ok(None);
    }
    let gap = n - r;
    let e = u64::from((gap - 1).ilog2());
    let d = u64::from(p) + e;

    let ratio = |v: BigUint| BigRational::from_integer(BigInt::from(v));
    let pow2 = |x: u64| ratio(BigUint::one() << x);
    let count = ratio(BigUint::from(two_k).pow(e as u32));
    let r_plus_1 = ratio(BigUint::from(r + 1));
    let gap_r = ratio(BigUint::from(gap));

    let rewritten = vec![
        InequalityVerdict::greater(SCALE_VS_DISTORTION, pow2(e), pow2(1) * alpha * &r_plus_1),
        InequalityVerdict::less(COUNT_VS_LEAVES, count.clone(), pow2(r)),
        InequalityVerdict::less(SCALE_VS_DEPTH, pow2(e), gap_r.clone()),
    ];
    let half_step = if d == 0 {
        BigRational::new(BigInt::one(), BigInt::from(2))
    } else {
        pow2(d - 1)
    };
    let original = vec![
        InequalityVerdict::greater(
            SCALE_VS_DISTORTION,
            half_step,
            alpha * pow2(u64::from(p)) * &r_plus_1,
        ),
        InequalityVerdict::less(COUNT_VS_LEAVES, count, pow2(r)),
        InequalityVerdict::less(SCALE_VS_DEPTH, pow2(d), pow2(u64::from(p)) * gap_r),
    ];
    let feasible = rewritten.iter().all(|v| v.holds);
    Ok(Some(WitnessParams {
        n,
        k,
        p,
        alpha: alpha.clone(),
        r,
        d,
        rewritten,
        original,
        feasible,
    }))
}

fn exact_log2(v: &BigUint) -> Option<u64> {
    if v.count_ones() == 1 {
        v.trailing_zeros()
    } else {
        None
    }
}

/// Smallest c with 2^c >= v, for v >= 1.
fn ceil_log2(v: &BigUint) -> u64 {
    (v - 1u32).bits()
}

/// ceil(log2(x) * log2(y)) for x, y >= 2.
///
/// When either argument is a power of two the product collapses to the
/// ceiling of a single exact logarithm (log2(x)·log2(y) = log2(y^log2(x))).
/// Otherwise both logarithms are bracketed by dyadic rationals at
/// increasing precision until the ceiling is pinned down; a product that
/// sits exactly on an integer could never be separated, so a precision cap
/// turns into an error instead of a loop.
pub fn ceil_log2_product(x: &BigUint, y: &BigUint) -> Result<u64, WitnessError> {
    let two = BigUint::from(2u32);
    if *x < two || *y < two {
        return Err(WitnessError::BadInput(
            "log arguments must be at least 2".into(),
        ));
    }
    let int_pow = |base: &BigUint, exp: u64| -> Result<BigUint, WitnessError> {
        let exp = u32::try_from(exp)
            .map_err(|_| WitnessError::BadInput("log argument too large".into()))?;
        Ok(base.pow(exp))
    };
    if let Some(a) = exact_log2(x) {
        return Ok(ceil_log2(&int_pow(y, a)?));
    }
    if let Some(b) = exact_log2(y) {
        return Ok(ceil_log2(&int_pow(x, b)?));
    }
    for t in [32u64, 64, 128, 256] {
        let (xl, xh) = log2_bracket(x, t);
        let (yl, yh) = log2_bracket(y, t);
        debug_assert!(xl.is_positive() && yl.is_positive());
        let lo = (xl * yl).ceil();
        let hi = (xh * yh).ceil();
        if lo == hi {
            let c = lo.to_integer();
            return u64::try_from(&c)
                .map_err(|_| WitnessError::BadInput("log product exceeds u64".into()));
        }
    }
    Err(WitnessError::PrecisionExhausted)
}

/// Rationals (lo, hi) with lo <= log2(v) <= hi and hi - lo = 4/2^t.
///
/// Fixed-point interval squaring: v/2^a is tracked in [1/2, 2) with
/// t + 64 fractional bits through t squarings, renormalizing by powers of
/// two and accumulating the renormalizations into the dyadic mantissa.
/// The relative interval width stays near 2^-64, so the final bracket is
/// dominated by the +-1 uncertainty of the last residual, padded to +-2.
fn log2_bracket(v: &BigUint, t: u64) -> (BigRational, BigRational) {
    let a = v.bits() - 1;
    let w = t + 64;
    let one = BigUint::one() << w;
    let top = BigUint::one() << (w + 1);
    let mut lo = (v.clone() << w) >> a;
    let mut hi = &lo + 1u32;
    let mut mantissa = BigInt::zero();
    for _ in 0..t {
        lo = (&lo * &lo) >> w;
        hi = ((&hi * &hi) >> w) + 1u32;
        mantissa *= 2;
        while hi >= top {
            lo >>= 1;
            hi = (hi + 1u32) >> 1;
            mantissa += 1;
        }
        while hi < one {
            lo <<= 1;
            hi <<= 1;
            mantissa -= 1;
        }
    }
    debug_assert!(lo > BigUint::one() << (w - 1), "interval drifted low");
    debug_assert!(hi < BigUint::one() << (w + 1), "interval drifted high");
    let denom = BigInt::from(BigUint::one() << t);
    let base = BigInt::from(a) * &denom + mantissa;
    (
        BigRational::new(&base - 2, denom.clone()),
        BigRational::new(base + 2, denom),
    )
}
