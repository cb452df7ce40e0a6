//! JSON matrix schema shared by state and witness files:
//! `{"dims": [d1, ...], "re": [[...]], "im": [[...]]}`, row-major.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{CMatrix, HermitianMatrix, SystemShape, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_hermitian(m: &HermitianMatrix) -> Self {
        let n = m.dim();
        let rows =
            |f: fn(C64) -> f64| -> Vec<Vec<f64>> { (0..n).map(|i| (0..n).map(|j| f(m.get(i, j))).collect()).collect() };
        Self {
            dims: m.shape().map(|s| s.local_dims().to_vec()),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let n = self.re.len();
        if self.im.len() != n {
            return Err(Error::Parse(format!("re has {n} rows but im has {}", self.im.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for (r, (re_row, im_row)) in self.re.iter().zip(&self.im).enumerate() {
            if re_row.len() != n || im_row.len() != n {
                return Err(Error::Parse(format!("row {r} is not of length {n}")));
            }
            data.extend(re_row.iter().zip(im_row).map(|(a, b)| C64::new(*a, *b)));
        }
        let m = HermitianMatrix::new(CMatrix::from_vec(n, data)?)?;
        match &self.dims {
            Some(d) => m.with_shape(SystemShape::new(d.clone())?),
            None => Ok(m),
        }
    }
}
