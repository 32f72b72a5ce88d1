use crate::error::{Error, Result};

/// Finite discrete signal `x_d[n]`. `values[i]` holds the sample at `n = i - origin`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTrain {
    values: Vec<f64>,
    origin: i64,
}

impl SampleTrain {
    pub fn new(values: Vec<f64>, origin: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sample train must be nonempty".into()));
        }
        Ok(Self { values, origin })
    }

    /// Samples starting at n = 0.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Time index of `values[0]`.
    pub fn first_index(&self) -> i64 {
        -self.origin
    }

    /// Sample at time index `n`, zero outside the stored range.
    pub fn at(&self, n: i64) -> f64 {
        let i = n + self.origin;
        if i < 0 || i >= self.values.len() as i64 {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// CSV with header `index,value`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([(i as i64 - self.origin).to_string(), format!("{v:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let n: i64 = rec
                .get(0)
                .ok_or_else(|| Error::Parse("missing index column".into()))?
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad index: {e}")))?;
            let v: f64 = rec
                .get(1)
                .ok_or_else(|| Error::Parse("missing value column".into()))?
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value: {e}")))?;
            rows.push((n, v));
        }
        let Some(&(first, _)) = rows.first() else {
            return Err(Error::Parse("signal CSV has no rows".into()));
        };
        for (i, &(n, _)) in rows.iter().enumerate() {
            if n != first + i as i64 {
                return Err(Error::Parse("signal CSV indices must be consecutive".into()));
            }
        }
        Self::new(rows.into_iter().map(|(_, v)| v).collect(), -first)
    }
}
