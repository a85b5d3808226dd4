use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

pub(crate) fn check_finite(v: &Vector, what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vector);

impl Direction {
    /// Normalizes `v` to unit length.
    pub fn new(v: Vector) -> Result<Self> {
        check_finite(&v, "direction")?;
        if v.is_empty() {
            return Err(Error::Input(
                "direction must have at least one coordinate".into(),
            ));
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Input("direction must be nonzero".into()));
        }
        let u = v / norm;
        debug_assert!((u.norm() - 1.0).abs() <= Tolerances::DEFAULT.unit_norm);
        Ok(Direction(u))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(coords))
    }

    /// Canonical basis vector `e_i`.
    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v[i] = 1.0;
        Direction(v)
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, x: &Vector) -> f64 {
        self.0.dot(x)
    }

    pub fn negated(&self) -> Self {
        Direction(-&self.0)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(d)?;
        Direction::from_slice(&coords).map_err(serde::de::Error::custom)
    }
}

/// The closed half-space `{y : ⟨y, u⟩ ≥ a}`.
///
/// An offset of `-∞` encodes the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    #[serde(rename = "u")]
    pub direction: Direction,
    #[serde(rename = "a", with = "offset_serde")]
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(direction: Direction, offset: f64) -> Result<Self> {
        if offset.is_nan() || offset == f64::INFINITY {
            return Err(Error::NonFinite(format!("half-space offset {offset}")));
        }
        Ok(HalfSpace { direction, offset })
    }

    pub fn whole_space(dim: usize) -> Self {
        HalfSpace {
            direction: Direction::axis(dim, 0),
            offset: f64::NEG_INFINITY,
        }
    }

    /// `{y : ⟨y, u⟩ ≤ b}` rewritten in the canonical `≥` form.
    pub fn at_most(direction: Direction, bound: f64) -> Result<Self> {
        Self::new(direction.negated(), -bound)
    }

    pub fn is_whole_space(&self) -> bool {
        self.offset == f64::NEG_INFINITY
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn contains(&self, y: &Vector) -> bool {
        self.is_whole_space() || self.direction.dot(y) >= self.offset
    }
}

/// JSON encoding of offsets: `-∞` becomes the string `"-inf"`.
pub mod offset_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *a == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*a)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Raw::Str(s) => Err(de::Error::custom(format!("invalid offset `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_is_normalized() {
        let u = Direction::from_slice(&[3.0, 4.0]).unwrap();
        assert!((u.as_vector().norm() - 1.0).abs() < 1e-15);
        assert!(Direction::from_slice(&[0.0, 0.0]).is_err());
        assert!(Direction::from_slice(&[f64::NAN]).is_err());
        assert!(Direction::from_slice(&[]).is_err());
    }

    #[test]
    fn at_most_normalizes_orientation() {
        let u = Direction::from_slice(&[1.0, 0.0]).unwrap();
        let h = HalfSpace::at_most(u, 2.0).unwrap();
        assert_eq!(h.direction.as_vector().as_slice(), &[-1.0, -0.0]);
        assert_eq!(h.offset, -2.0);
        assert!(h.contains(&Vector::from_vec(vec![1.0, 5.0])));
        assert!(!h.contains(&Vector::from_vec(vec![3.0, 5.0])));
    }

    #[test]
    fn whole_space_json_sentinel() {
        let h = HalfSpace::whole_space(2);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"u":[1.0,0.0],"a":"-inf"}"#);
        let back: HalfSpace = serde_json::from_str(&s).unwrap();
        assert!(back.is_whole_space());
        let h: HalfSpace = serde_json::from_str(r#"{"u":[0.0,2.0],"a":1.5}"#).unwrap();
        assert_eq!(h.direction.as_vector().as_slice(), &[0.0, 1.0]);
        assert_eq!(h.offset, 1.5);
        assert!(serde_json::from_str::<HalfSpace>(r#"{"u":[1.0],"a":"inf"}"#).is_err());
    }
}
