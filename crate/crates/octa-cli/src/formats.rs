//! Shared JSON formats: hypergraph instances and exact rational point
//! configurations. Instances are `{"classes":[m1,...],"edges":[[p1,...]]}`
//! with 0-based positions, edges sorted on output; configurations are
//! `{"d":2,"classes":[[["1","0"],...]]}` with rationals as `"num/den"`
//! or plain integer strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use octa_core::geometry::{ColourConfig, Rational, RationalPoint};
use octa_core::shape::{ClassShape, EdgeTuple, VertexRef};
use octa_core::system::OctahedralSystem;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceJson {
    pub classes: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

impl InstanceJson {
    pub fn from_system(sys: &OctahedralSystem) -> Self {
        InstanceJson {
            classes: sys.shape().sizes().to_vec(),
            edges: sys
                .edges()
                .iter()
                .map(|e| e.positions().to_vec())
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<OctahedralSystem, String> {
        let shape = ClassShape::new(self.classes.clone()).map_err(|e| e.to_string())?;
        let edges = self
            .edges
            .iter()
            .map(|positions| EdgeTuple::new(positions.clone()))
            .collect();
        OctahedralSystem::new(shape, edges).map_err(|e| e.to_string())
    }
}

/// Vertices as `[class, position]` pairs in JSON.
pub fn vertex_to_json(v: VertexRef) -> [usize; 2] {
    [v.class, v.position]
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator: {e}"))?;
            let den = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator: {e}"))?;
            if den == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s).map_err(|e| format!("bad rational '{s}': {e}"))?;
            Ok(BigRational::from(num))
        }
    }
}

pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigJson {
    pub d: usize,
    pub classes: Vec<Vec<Vec<String>>>,
}

impl ConfigJson {
    pub fn from_config(cfg: &ColourConfig) -> Self {
        ConfigJson {
            d: cfg.dim(),
            classes: cfg
                .classes()
                .iter()
                .map(|class| {
                    class
                        .iter()
                        .map(|p| p.coords().iter().map(render_rational).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_config(&self) -> Result<ColourConfig, String> {
        let classes = self
            .classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|coords| {
                        let coords = coords
                            .iter()
                            .map(|c| parse_rational(c))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(RationalPoint::new(coords))
                    })
                    .collect::<Result<Vec<_>, String>>()
            })
            .collect::<Result<Vec<_>, String>>()?;
        ColourConfig::new(self.d, classes).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use octa_core::constructions::omega9;

    #[test]
    fn instance_round_trip_is_stable() {
        let sys = omega9();
        let json = InstanceJson::from_system(&sys);
        let text = serde_json::to_string(&json).unwrap();
        let back: InstanceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_system().unwrap(), sys);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn unsorted_input_edges_are_sorted_on_output() {
        let json = InstanceJson {
            classes: vec![2, 2],
            edges: vec![vec![1, 1], vec![0, 0]],
        };
        let sys = json.to_system().unwrap();
        let out = InstanceJson::from_system(&sys);
        assert_eq!(out.edges, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from(BigInt::from(3)));
        assert_eq!(
            parse_rational("-4/6").unwrap(),
            BigRational::new(BigInt::from(-2), BigInt::from(3))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(render_rational(&parse_rational("-4/6").unwrap()), "-2/3");
        assert_eq!(render_rational(&parse_rational("7").unwrap()), "7");
    }
}
