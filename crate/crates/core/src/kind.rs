//! Small selector enums shared by the counting, oracle and CLI layers.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown {what} `{value}`")]
pub struct ParseKindError {
    pub(crate) what: &'static str,
    pub(crate) value: String,
}

macro_rules! selector {
    ($name:ident, $what:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::kind::ParseKindError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err($crate::kind::ParseKindError { what: $what, value: s.to_string() }),
                }
            }
        }
    };
}

pub(crate) use selector;

selector!(Family, "family", { Plane => "plane", Planar => "planar" });
selector!(Pointing, "pointing", {
    None => "none",
    Edge => "edge",
    Triangle => "triangle",
    TriangleEdge => "triangle-edge",
});
selector!(Mode, "mode", {
    Labelled => "labelled",
    Unlabelled => "unlabelled",
    Asymmetric => "asymmetric",
});
selector!(SymmetryGroup, "group", { Cyclic => "cyclic", Dihedral => "dihedral" });

impl Family {
    /// Plane structures are triangulations up to rotation, planar ones up to
    /// rotation and reflection.
    pub fn group(self) -> SymmetryGroup {
        match self {
            Family::Plane => SymmetryGroup::Cyclic,
            Family::Planar => SymmetryGroup::Dihedral,
        }
    }
}
