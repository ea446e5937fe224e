use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConstraintTag, Root, RootConfiguration};
use crate::error::LemniError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRepr {
    pub re: f64,
    pub im: f64,
    pub mult: u64,
}

/// `{"angles_over_2pi": [..], "mults": [..]}`, the shorthand for circle
/// configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnglesShorthand {
    pub angles_over_2pi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mults: Option<Vec<u64>>,
}

/// Wire form of a [`RootConfiguration`]; either the full root list or the
/// angles-only shorthand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigRepr {
    Full {
        roots: Vec<RootRepr>,
        #[serde(default)]
        tag: ConstraintTag,
    },
    Angles(AnglesShorthand),
}

impl TryFrom<ConfigRepr> for RootConfiguration {
    type Error = LemniError;

    fn try_from(repr: ConfigRepr) -> Result<Self, Self::Error> {
        match repr {
            ConfigRepr::Full { roots, tag } => RootConfiguration::new(
                roots
                    .into_iter()
                    .map(|r| Root {
                        location: Complex64::new(r.re, r.im),
                        mult: r.mult,
                    })
                    .collect(),
                tag,
            ),
            ConfigRepr::Angles(a) => {
                RootConfiguration::from_angles_over_2pi(&a.angles_over_2pi, a.mults.as_deref())
            }
        }
    }
}

impl From<RootConfiguration> for ConfigRepr {
    fn from(c: RootConfiguration) -> Self {
        ConfigRepr::Full {
            roots: c
                .roots
                .iter()
                .map(|r| RootRepr {
                    re: r.location.re,
                    im: r.location.im,
                    mult: r.mult,
                })
                .collect(),
            tag: c.tag,
        }
    }
}

impl RootConfiguration {
    /// Angles-only form; `None` unless every root lies on the unit circle.
    pub fn to_angles_shorthand(&self) -> Option<AnglesShorthand> {
        if self.tag != ConstraintTag::UnitCircle {
            return None;
        }
        let angles_over_2pi = self
            .roots
            .iter()
            .map(|r| super::normalize_angle(r.location.arg()) / std::f64::consts::TAU)
            .collect();
        let mults = if self.roots.iter().all(|r| r.mult == 1) {
            None
        } else {
            Some(self.roots.iter().map(|r| r.mult).collect())
        };
        Some(AnglesShorthand {
            angles_over_2pi,
            mults,
        })
    }
}
