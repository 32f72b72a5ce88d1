use crate::error::{Error, Result};

/// A finite discrete-time filter. `taps[i]` sits at time index `origin + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirFilter {
    taps: Vec<f64>,
    origin: i64,
}

impl FirFilter {
    pub fn new(taps: Vec<f64>, origin: i64) -> Result<Self> {
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("filter taps must be finite".into()));
        }
        if taps.iter().all(|&t| t == 0.0) {
            return Err(Error::EmptyFilter);
        }
        Ok(Self { taps, origin })
    }

    /// Unchecked constructor for results of operations on valid filters.
    pub(crate) fn from_raw(taps: Vec<f64>, origin: i64) -> Self {
        debug_assert!(!taps.is_empty());
        Self { taps, origin }
    }

    /// Unit impulse at n = 0.
    pub fn delta() -> Self {
        Self::from_raw(vec![1.0], 0)
    }

    /// Unit impulse at n = `at`.
    pub fn shifted_delta(at: i64) -> Self {
        Self::from_raw(vec![1.0], at)
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Time index of `taps[0]`.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn first_index(&self) -> i64 {
        self.origin
    }

    pub fn last_index(&self) -> i64 {
        self.origin + self.taps.len() as i64 - 1
    }

    /// Tap at time index `n`, zero outside the stored range.
    pub fn at(&self, n: i64) -> f64 {
        let i = n - self.origin;
        if i < 0 || i >= self.taps.len() as i64 {
            0.0
        } else {
            self.taps[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.taps.iter().enumerate().map(move |(i, &t)| (self.origin + i as i64, t))
    }

    pub fn dc_gain(&self) -> f64 {
        self.taps.iter().sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.taps.iter().map(|t| t.abs()).sum()
    }

    /// Drops zero taps at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.taps.iter().position(|&t| t != 0.0).unwrap_or(0);
        let last = self.taps.iter().rposition(|&t| t != 0.0).unwrap_or(self.taps.len() - 1);
        Self::from_raw(self.taps[first..=last].to_vec(), self.origin + first as i64)
    }

    /// True when the filter is a unit impulse at n = 0 up to `tol`.
    pub fn is_delta(&self, tol: f64) -> bool {
        self.iter().all(|(n, t)| if n == 0 { (t - 1.0).abs() <= tol } else { t.abs() <= tol })
            && self.first_index() <= 0
            && self.last_index() >= 0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_raw(self.taps.iter().map(|t| t * factor).collect(), self.origin)
    }
}

impl AsRef<FirFilter> for FirFilter {
    fn as_ref(&self) -> &FirFilter {
        self
    }
}

/// Time reversal: `flip(f)[n] = f[-n]`.
pub fn flip(f: &FirFilter) -> FirFilter {
    let mut taps = f.taps.clone();
    taps.reverse();
    FirFilter::from_raw(taps, -f.last_index())
}

/// Full linear convolution.
pub fn convolve(a: impl AsRef<FirFilter>, b: impl AsRef<FirFilter>) -> FirFilter {
    let (a, b) = (a.as_ref(), b.as_ref());
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.taps.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.taps.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    FirFilter::from_raw(out, a.origin + b.origin)
}

/// Deterministic autocorrelation `v[k] = sum_j a[j] a[j+k]`, exactly symmetric.
pub fn autocorrelate(a: impl AsRef<FirFilter>) -> FirFilter {
    let taps = a.as_ref().taps();
    let n = taps.len();
    let mut out = vec![0.0; 2 * n - 1];
    for k in 0..n {
        let s: f64 = (0..n - k).map(|j| taps[j] * taps[j + k]).sum();
        out[n - 1 + k] = s;
        out[n - 1 - k] = s;
    }
    FirFilter::from_raw(out, -(n as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(taps: &[f64], origin: i64) -> FirFilter {
        FirFilter::new(taps.to_vec(), origin).unwrap()
    }

    #[test]
    fn rejects_all_zero() {
        assert!(matches!(FirFilter::new(vec![0.0, 0.0], 0), Err(Error::EmptyFilter)));
        assert!(matches!(FirFilter::new(vec![], 0), Err(Error::EmptyFilter)));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&FirFilter::delta()), FirFilter::delta());
        let g = flip(&f(&[1.0, 2.0, 3.0], 0));
        assert_eq!(g.taps(), &[3.0, 2.0, 1.0]);
        assert_eq!(g.origin(), -2);
        let sym = f(&[0.233, 0.480, 0.233], -1);
        assert_eq!(flip(&sym), sym);
    }

    #[test]
    fn convolve_examples() {
        let x = f(&[0.5, -1.0, 2.0], 3);
        assert_eq!(convolve(FirFilter::delta(), &x), x);
        let y = convolve(f(&[1.0, 1.0], 0), f(&[1.0, 1.0], 0));
        assert_eq!(y.taps(), &[1.0, 2.0, 1.0]);
        assert_eq!(y.origin(), 0);
    }

    #[test]
    fn autocorrelate_examples() {
        assert_eq!(autocorrelate(FirFilter::delta()), FirFilter::delta());
        let v = autocorrelate(f(&[1.0, 1.0], 5));
        assert_eq!(v.taps(), &[1.0, 2.0, 1.0]);
        assert_eq!(v.origin(), -1);
    }

    #[test]
    fn trimmed_drops_zero_ends() {
        let t = f(&[0.0, 0.0, 1.0, 0.0, 2.0, 0.0], -2).trimmed();
        assert_eq!(t.taps(), &[1.0, 0.0, 2.0]);
        assert_eq!(t.origin(), 0);
    }
}
