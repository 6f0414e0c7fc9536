//! Built-in groups. Each preset is a standard presentation; the matrices are
//! checked for determinant one when the context is built.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{GroupContext, Mat2};
use crate::quadfield::FieldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `PSL_2(Z[i])` on `T = [[1,1],[0,1]]`, `T_i = [[1,i],[0,1]]`, `S = [[0,-1],[1,0]]`.
    Picard,
    /// The two-generator subgroup of `PSL_2(O_3)` uniformising the figure-eight knot complement.
    Figure8,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Picard, Preset::Figure8];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Picard => "picard",
            Preset::Figure8 => "figure8",
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Preset::Picard => FieldSpec::gaussian(),
            Preset::Figure8 => FieldSpec::eisenstein(),
        }
    }

    pub fn generator_strings(&self) -> &'static [&'static str] {
        match self {
            Preset::Picard => &["[[1,1],[0,1]]", "[[1,i],[0,1]]", "[[0,-1],[1,0]]"],
            Preset::Figure8 => &["[[1,1],[0,1]]", "[[1,0],[-w,1]]"],
        }
    }

    /// Covolume of the quotient orbifold/manifold, from the literature.
    pub fn covolume(&self) -> f64 {
        match self {
            Preset::Picard => 0.3053218,
            Preset::Figure8 => 2.0298832,
        }
    }

    pub fn context(&self) -> Result<GroupContext> {
        let field = self.field();
        let gens = self
            .generator_strings()
            .iter()
            .map(|s| Mat2::parse(field, s))
            .collect::<Result<Vec<_>>>()?;
        GroupContext::new(field, gens)
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "picard" => Ok(Preset::Picard),
            "figure8" | "figure-eight" => Ok(Preset::Figure8),
            other => Err(Error::Parse(format!("unknown preset {other:?}"))),
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
