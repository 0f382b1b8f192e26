//! JSON forms of categories, curve-weight sidecars and lattices.

use crate::ainfty::{AInftyData, AInftyError};
use crate::coeff::{parse_rational, rational_to_string, CoeffError, Ring};
use crate::deform::WeightedTensor;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("file declares ring `{found}`, expected `{expected}`")]
    RingMismatch { expected: String, found: String },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Category(#[from] AInftyError),
}

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySpec {
    /// `[x_k, .., x_1]`
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFile {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    pub entries: Vec<EntrySpec>,
}

impl CategoryFile {
    pub fn from_json(s: &str) -> Result<Self, IoError> {
        serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn category_to_file<R: Ring>(c: &AInftyData<R>) -> CategoryFile {
    CategoryFile {
        ring: R::tag(),
        max_arity: Some(c.max_arity()),
        objects: c.objects().to_vec(),
        generators: c
            .generators()
            .iter()
            .map(|g| GeneratorSpec {
                name: g.name.clone(),
                degree: g.degree,
                source: c.objects()[g.source].clone(),
                target: c.objects()[g.target].clone(),
            })
            .collect(),
        entries: c
            .entries()
            .into_iter()
            .map(|(ins, out, v)| EntrySpec {
                inputs: c.names(&ins),
                output: c.generators()[out].name.clone(),
                coeff: v.to_string(),
            })
            .collect(),
    }
}

pub fn category_from_file<R: Ring>(f: &CategoryFile) -> Result<AInftyData<R>, IoError> {
    if f.ring != R::tag() {
        return Err(IoError::RingMismatch { expected: R::tag(), found: f.ring.clone() });
    }
    let mut b = AInftyData::<R>::builder();
    if let Some(k) = f.max_arity {
        b = b.max_arity(k);
    }
    for o in &f.objects {
        b = b.object(o);
    }
    for g in &f.generators {
        b = b.generator(&g.name, g.degree, &g.source, &g.target);
    }
    for e in &f.entries {
        let refs: Vec<&str> = e.inputs.iter().map(String::as_str).collect();
        b = b.entry(&refs, &e.output, R::parse(&e.coeff)?);
    }
    Ok(b.build()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub count: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntrySpec {
    pub inputs: Vec<String>,
    pub output: String,
    pub curves: Vec<CurveSpec>,
}

/// Curve weights for a rational category; entries not listed keep weight zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub entries: Vec<WeightEntrySpec>,
}

impl WeightsFile {
    pub fn from_json(s: &str) -> Result<Self, IoError> {
        serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))
    }

    /// Starts from the zero-weight tensor of `base` and replaces listed entries.
    pub fn to_tensor(&self, base: &AInftyData<BigRational>) -> Result<WeightedTensor, IoError> {
        let mut w = WeightedTensor::from_base(base);
        for e in &self.entries {
            let mut curves = Vec::new();
            for c in &e.curves {
                curves.push(crate::deform::Curve::new(parse_rational(&c.count)?, parse_rational(&c.weight)?));
            }
            w.set(&e.inputs, &e.output, curves);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::models;
    use crate::coeff::{rat, Fp, GradedLaurent, TwistedScalar};

    fn round_trip<R: Ring>(c: &AInftyData<R>) {
        let json = category_to_file(c).to_json();
        let back = category_from_file::<R>(&CategoryFile::from_json(&json).unwrap()).unwrap();
        assert_eq!(&back, c);
    }

    #[test]
    fn categories_round_trip() {
        let q = models::zigzag(3);
        round_trip(&q);
        round_trip(&q.map_coeffs(|v| Fp::<5>::from_rational(v).unwrap()));
        round_trip(&q.map_coeffs(|v| GradedLaurent::<6>::monomial(0, v.clone())));
        let sigma = TwistedScalar::one().minus(&TwistedScalar::t_pow(rat(3, 2)));
        round_trip(&models::a2_floer(models::FloerDegrees::twisted(2), sigma.clone()));
        round_trip(&models::a2_floer(models::FloerDegrees::twisted(2), sigma.to_fraction()));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let f = category_to_file(&models::directed_a2());
        assert!(matches!(category_from_file::<Fp<3>>(&f), Err(IoError::RingMismatch { .. })));
        assert!(matches!(CategoryFile::from_json("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn weights_sidecar() {
        let base = models::isomorphic_pair();
        let w: WeightsFile = serde_json::from_str(
            r#"{"entries":[{"inputs":["g","f"],"output":"eX","curves":[{"count":"1","weight":"1/2"}]}]}"#,
        )
        .unwrap();
        let t = w.to_tensor(&base).unwrap();
        let found = t.entries().find(|((ins, _), _)| ins == &["g".to_string(), "f".to_string()]).unwrap();
        assert_eq!(found.1[0].weight, rat(1, 2));
    }
}
