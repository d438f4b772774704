//! Field-side data consumed by the bound and certificate machinery.
//!
//! Three kinds of base field are supported: Q (everything trivial),
//! imaginary quadratic (class data computed from reduced forms), and
//! user-supplied custom data (s, per-l class ranks, h) for any other number
//! field — bounds only, no field constructions there.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::quadfield::{class_group, QuadClassGroup};
use crate::{Error, Result};

/// JSON wire form: {"field": "Q" | {"quad_disc": D} | {"custom": {...}}}.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDataJson {
    pub field: FieldKindJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldKindJson {
    Name(String),
    Quad { quad_disc: i64 },
    Custom { custom: CustomFieldJson },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CustomFieldJson {
    /// Z-rank of the unit group.
    pub s: u32,
    /// Per-prime l-rank of the class group, keyed by decimal prime.
    #[serde(default)]
    pub r: BTreeMap<String, u32>,
    /// Class number.
    pub h: u64,
    /// Order of the torsion subgroup mu_K; defaults to 2 ({-1, 1}).
    #[serde(default = "default_mu")]
    pub mu: u64,
}

fn default_mu() -> u64 {
    2
}

/// Resolved field data.
#[derive(Debug, Clone)]
pub enum FieldData {
    Rationals,
    Quadratic(QuadClassGroup),
    Custom {
        s: u32,
        r: BTreeMap<u64, u32>,
        h: u64,
        mu: u64,
    },
}

impl FieldData {
    pub fn rationals() -> Self {
        FieldData::Rationals
    }

    pub fn quadratic(disc: i64) -> Result<Self> {
        Ok(FieldData::Quadratic(class_group(disc)?))
    }

    pub fn from_json(json: &FieldDataJson) -> Result<Self> {
        match &json.field {
            FieldKindJson::Name(name) if name == "Q" => Ok(FieldData::Rationals),
            FieldKindJson::Name(other) => {
                Err(Error::Domain(format!("unknown field name {other:?}, expected \"Q\"")))
            }
            FieldKindJson::Quad { quad_disc } => FieldData::quadratic(*quad_disc),
            FieldKindJson::Custom { custom } => {
                let mut r = BTreeMap::new();
                for (k, v) in &custom.r {
                    let l: u64 = k
                        .parse()
                        .map_err(|_| Error::Domain(format!("bad prime key {k:?} in custom field data")))?;
                    r.insert(l, *v);
                }
                Ok(FieldData::Custom {
                    s: custom.s,
                    r,
                    h: custom.h,
                    mu: custom.mu,
                })
            }
        }
    }

    pub fn to_json(&self) -> FieldDataJson {
        match self {
            FieldData::Rationals => FieldDataJson {
                field: FieldKindJson::Name("Q".into()),
            },
            FieldData::Quadratic(cl) => FieldDataJson {
                field: FieldKindJson::Quad {
                    quad_disc: cl.field.discriminant(),
                },
            },
            FieldData::Custom { s, r, h, mu } => FieldDataJson {
                field: FieldKindJson::Custom {
                    custom: CustomFieldJson {
                        s: *s,
                        r: r.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                        h: *h,
                        mu: *mu,
                    },
                },
            },
        }
    }

    /// Z-rank of the unit group (s in the bound).
    pub fn unit_rank(&self) -> u32 {
        match self {
            FieldData::Rationals => 0,
            FieldData::Quadratic(_) => 0,
            FieldData::Custom { s, .. } => *s,
        }
    }

    /// |mu_K|.
    pub fn torsion_order(&self) -> u64 {
        match self {
            FieldData::Rationals => 2,
            FieldData::Quadratic(cl) => cl.field.torsion_order(),
            FieldData::Custom { mu, .. } => *mu,
        }
    }

    /// dim_F_l Cl(K)[l].
    pub fn l_rank(&self, l: u64) -> u32 {
        match self {
            FieldData::Rationals => 0,
            FieldData::Quadratic(cl) => cl.l_rank(l),
            FieldData::Custom { r, .. } => r.get(&l).copied().unwrap_or(0),
        }
    }

    pub fn class_number(&self) -> u64 {
        match self {
            FieldData::Rationals => 1,
            FieldData::Quadratic(cl) => cl.h,
            FieldData::Custom { h, .. } => *h,
        }
    }

    /// Whether some ideal class has order l^2. For custom data this is read
    /// off from v_l(h) > r_l (the l-part is then non-elementary).
    pub fn has_order_l2_class(&self, l: u64) -> bool {
        match self {
            FieldData::Rationals => false,
            FieldData::Quadratic(cl) => cl.has_order_l2_class(l),
            FieldData::Custom { h, r, .. } => {
                let mut v = 0u32;
                let mut hh = *h;
                while hh % l == 0 {
                    hh /= l;
                    v += 1;
                }
                v > r.get(&l).copied().unwrap_or(0)
            }
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, FieldData::Rationals)
    }

    pub fn quad(&self) -> Option<&QuadClassGroup> {
        match self {
            FieldData::Quadratic(cl) => Some(cl),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let q: FieldDataJson = serde_json::from_str(r#"{"field":"Q"}"#).unwrap();
        assert!(FieldData::from_json(&q).unwrap().is_rationals());
        let quad: FieldDataJson = serde_json::from_str(r#"{"field":{"quad_disc":-23}}"#).unwrap();
        let f = FieldData::from_json(&quad).unwrap();
        assert_eq!(f.class_number(), 3);
        assert_eq!(f.l_rank(3), 1);
        assert_eq!(f.unit_rank(), 0);
        let custom: FieldDataJson =
            serde_json::from_str(r#"{"field":{"custom":{"s":1,"r":{"3":2},"h":18}}}"#).unwrap();
        let f = FieldData::from_json(&custom).unwrap();
        assert_eq!(f.unit_rank(), 1);
        assert_eq!(f.l_rank(3), 2);
        assert_eq!(f.l_rank(5), 0);
        assert_eq!(f.torsion_order(), 2);
        // v_3(18) = 2 = r_3: no order-9 class; v_3 > r would flag.
        assert!(!f.has_order_l2_class(3));
        let custom: FieldDataJson =
            serde_json::from_str(r#"{"field":{"custom":{"s":0,"r":{"3":1},"h":9}}}"#).unwrap();
        let f = FieldData::from_json(&custom).unwrap();
        assert!(f.has_order_l2_class(3));
    }

    #[test]
    fn rationals_are_trivial() {
        let f = FieldData::rationals();
        assert_eq!(f.unit_rank(), 0);
        assert_eq!(f.l_rank(3), 0);
        assert_eq!(f.class_number(), 1);
        assert_eq!(f.torsion_order(), 2);
        assert!(!f.has_order_l2_class(3));
    }
}
