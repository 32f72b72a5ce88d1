use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fir::FirFilter;
use super::inverse::InverseTaps;
use crate::error::Error;
use crate::signal::SampleTrain;

/// How samples beyond the ends of a finite signal are synthesized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Whole-sample symmetric extension: x[-n] = x[n], x[N-1+n] = x[N-1-n].
    #[default]
    Mirror,
    Zero,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Mirror => "mirror",
            BoundaryMode::Zero => "zero",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "mirror" => Ok(BoundaryMode::Mirror),
            "zero" => Ok(BoundaryMode::Zero),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary mode '{other}' (expected mirror or zero)"
            ))),
        }
    }
}

/// Array index for position `i` of a length-`len` signal under whole-sample mirroring.
#[inline]
pub(crate) fn mirror_index(i: i64, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as i64 - 1);
    let r = i.rem_euclid(period);
    if r >= len as i64 {
        (period - r) as usize
    } else {
        r as usize
    }
}

/// Coefficients `(inv * x)[n]` for `n` in `n_lo..=n_hi`, with `values[0]` at n = 0.
pub(crate) fn filter_range(
    values: &[f64],
    inv: &FirFilter,
    boundary: BoundaryMode,
    n_lo: i64,
    n_hi: i64,
) -> Vec<f64> {
    let len = values.len();
    let taps = inv.taps();
    let k0 = inv.origin();
    (n_lo..=n_hi)
        .map(|n| {
            let mut acc = 0.0;
            for (j, &a) in taps.iter().enumerate() {
                let i = n - (k0 + j as i64);
                let x = match boundary {
                    BoundaryMode::Mirror => values[mirror_index(i, len)],
                    BoundaryMode::Zero => {
                        if i < 0 || i >= len as i64 {
                            continue;
                        }
                        values[i as usize]
                    }
                };
                acc += a * x;
            }
            acc
        })
        .collect()
}

/// Spline coefficients `(inv * x)[n]`.
///
/// The output has the input's length, shifted by the inverse filter's centre so
/// that it covers the indices where the coefficients are largest; the shift is
/// recorded in the returned train's origin.
pub fn prefilter(x: &SampleTrain, inv: &InverseTaps, boundary: BoundaryMode) -> SampleTrain {
    let shift = inv.center();
    let first = x.first_index() + shift;
    let last = first + x.len() as i64 - 1;
    // filter_range takes indices relative to values[0]
    let rel = x.first_index();
    let vals = filter_range(x.values(), inv.filter(), boundary, first - rel, last - rel);
    SampleTrain::new(vals, -first).expect("nonempty")
}
