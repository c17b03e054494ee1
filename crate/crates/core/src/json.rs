//! JSON forms of groups, profiles and recipes.
//!
//! Integers are numbers when they fit in `i64` and decimal strings
//! otherwise. Coordinates of classes refer to the invariant-factor form of
//! the group they live in. Canonical output sorts object keys.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::constructors::{ConstructError, Recipe};
use crate::fgab::{FgAbGroup, FgabError, GroupElement};
use crate::topology::{F2Vector, ManifoldProfile, Mod2Fragment};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Group(#[from] FgabError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// An arbitrary-precision integer in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn to_json_ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn from_json_ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

/// `{"free": r, "torsion": [d1, ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub free: usize,
    #[serde(default)]
    pub torsion: Vec<JsonInt>,
}

impl GroupJson {
    pub fn from_group(g: &FgAbGroup) -> Self {
        Self {
            free: g.free_rank(),
            torsion: to_json_ints(g.torsion_coefficients()),
        }
    }

    /// Any positive cyclic orders are accepted and brought to invariant-factor form.
    pub fn to_group(&self) -> Result<FgAbGroup, JsonError> {
        if let Some(bad) = self.torsion.iter().find(|d| !d.0.is_positive()) {
            return Err(JsonError::Shape(format!("torsion orders must be positive, got {bad}")));
        }
        Ok(FgAbGroup::from_cyclic_orders(self.free, from_json_ints(&self.torsion)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentJson {
    pub h2_dim: usize,
    pub cup: Vec<Vec<Vec<JsonInt>>>,
    pub psquare: Vec<Vec<JsonInt>>,
    pub w2_class: F2Vector,
    pub w4_class: Vec<JsonInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub name: String,
    pub homology: Vec<GroupJson>,
    pub spin: bool,
    pub w4_zero: bool,
    pub p1: Vec<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod2_fragment: Option<FragmentJson>,
}

impl ProfileJson {
    pub fn from_profile(p: &ManifoldProfile) -> Self {
        let coords = |x: &GroupElement| to_json_ints(&x.coords());
        Self {
            name: p.name.clone(),
            homology: p.homology.iter().map(GroupJson::from_group).collect(),
            spin: p.spin,
            w4_zero: p.w4_zero,
            p1: coords(&p.p1),
            mod2_fragment: p.mod2_fragment.as_ref().map(|f| FragmentJson {
                h2_dim: f.h2_dim,
                cup: f.cup.iter().map(|r| r.iter().map(coords).collect()).collect(),
                psquare: f.psquare.iter().map(coords).collect(),
                w2_class: f.w2_class.clone(),
                w4_class: coords(&f.w4_class),
            }),
        }
    }

    /// Structural conversion only; call [`ManifoldProfile::validate`] afterwards.
    pub fn to_profile(&self) -> Result<ManifoldProfile, JsonError> {
        if self.homology.len() != 6 {
            return Err(JsonError::Shape(format!(
                "homology must list 6 groups H0..H5, got {}",
                self.homology.len()
            )));
        }
        let groups = self.homology.iter().map(GroupJson::to_group).collect::<Result<Vec<_>, _>>()?;
        let homology: [FgAbGroup; 6] = groups.try_into().expect("length checked");
        let mut p = ManifoldProfile {
            name: self.name.clone(),
            homology,
            spin: self.spin,
            w4_zero: self.w4_zero,
            p1: GroupElement::zero(FgAbGroup::trivial()),
            mod2_fragment: None,
        };
        let elem = |g: FgAbGroup, c: &[JsonInt]| GroupElement::from_coords(g, &from_json_ints(c));
        p.p1 = elem(p.h4(), &self.p1)?;
        if let Some(f) = &self.mod2_fragment {
            let (h2, h4) = (p.h4_mod(2), p.h4_mod(4));
            let cup = f
                .cup
                .iter()
                .map(|r| r.iter().map(|c| elem(h2.clone(), c)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let psquare = f
                .psquare
                .iter()
                .map(|c| elem(h4.clone(), c))
                .collect::<Result<Vec<_>, _>>()?;
            p.mod2_fragment = Some(Mod2Fragment {
                h2_dim: f.h2_dim,
                cup,
                psquare,
                w2_class: f.w2_class.clone(),
                w4_class: elem(h2, &f.w4_class)?,
            });
        }
        Ok(p)
    }
}

/// Serialises with sorted keys and two-space indentation.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serialisable");
    serde_json::to_string_pretty(&v).expect("serialisable")
}

pub fn profile_to_json(p: &ManifoldProfile) -> String {
    to_canonical_json(&ProfileJson::from_profile(p))
}

/// Parses a profile without validating it.
pub fn profile_from_json(text: &str) -> Result<ManifoldProfile, JsonError> {
    let pj: ProfileJson = serde_json::from_str(text)?;
    pj.to_profile()
}

/// A document is a recipe when it has a `construction` key, else a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Recipe(Recipe),
    Profile(Box<ManifoldProfile>),
}

pub fn parse_document(text: &str) -> Result<Document, JsonError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("construction").is_some() {
        Ok(Document::Recipe(serde_json::from_value(v)?))
    } else {
        let pj: ProfileJson = serde_json::from_value(v)?;
        Ok(Document::Profile(Box::new(pj.to_profile()?)))
    }
}

/// Evaluates a recipe and validates the result. Recipes validate as they
/// build, so invalid outcomes surface as [`ConstructError::Topology`].
pub fn parse_recipe(text: &str, default_bound: u32) -> Result<ManifoldProfile, JsonError> {
    let r: Recipe = serde_json::from_str(text)?;
    Ok(r.build(default_bound)?)
}
