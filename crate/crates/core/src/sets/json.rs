//! JSON encoding of sets. Generators are stored column-wise; matrix zonotopes
//! store their center and generators column-stacked next to a `shape` field.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix_zonotope::MatrixZonotope;
use super::zonotope::Zonotope;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZonotopeJson {
    pub center: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixZonotopeJson {
    pub shape: [usize; 2],
    pub center: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
}

impl From<Zonotope> for ZonotopeJson {
    fn from(z: Zonotope) -> Self {
        Self::from(&z)
    }
}

impl From<&Zonotope> for ZonotopeJson {
    fn from(z: &Zonotope) -> Self {
        Self {
            center: z.center().as_slice().to_vec(),
            generators: z
                .generators()
                .column_iter()
                .map(|c| c.iter().copied().collect())
                .collect(),
        }
    }
}

impl TryFrom<ZonotopeJson> for Zonotope {
    type Error = Error;

    fn try_from(j: ZonotopeJson) -> Result<Self> {
        Zonotope::from_slices(&j.center, &j.generators)
    }
}

impl Serialize for Zonotope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ZonotopeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Zonotope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ZonotopeJson::deserialize(d)?;
        Zonotope::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl From<&MatrixZonotope> for MatrixZonotopeJson {
    fn from(m: &MatrixZonotope) -> Self {
        let (n, c) = m.shape();
        Self {
            shape: [n, c],
            center: m.center().as_slice().to_vec(),
            generators: m.generators().iter().map(|g| g.as_slice().to_vec()).collect(),
        }
    }
}

impl TryFrom<MatrixZonotopeJson> for MatrixZonotope {
    type Error = Error;

    fn try_from(j: MatrixZonotopeJson) -> Result<Self> {
        let [n, m] = j.shape;
        let to_matrix = |v: &[f64]| -> Result<DMatrix<f64>> {
            if v.len() != n * m {
                return Err(Error::Parse(format!(
                    "expected {} entries for shape [{n}, {m}], got {}",
                    n * m,
                    v.len()
                )));
            }
            Ok(DMatrix::from_column_slice(n, m, v))
        };
        let center = to_matrix(&j.center)?;
        let generators = j
            .generators
            .iter()
            .map(|g| to_matrix(g))
            .collect::<Result<Vec<_>>>()?;
        MatrixZonotope::new(center, generators)
    }
}

impl Serialize for MatrixZonotope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixZonotopeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixZonotope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixZonotopeJson::deserialize(d)?;
        MatrixZonotope::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}
