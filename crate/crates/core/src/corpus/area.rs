use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CorpusError;

macro_rules! job_areas {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// Job-area category of a document.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum JobArea {
            $($variant),+
        }

        impl JobArea {
            /// All categories in their canonical order.
            pub const ALL: [JobArea; 20] = [$(JobArea::$variant),+];

            /// Display name, e.g. `"Information Technology"`.
            pub fn name(self) -> &'static str {
                match self {
                    $(JobArea::$variant => $name),+
                }
            }
        }
    };
}

job_areas! {
    InformationTechnology => "Information Technology",
    BusinessDevelopment => "Business Development",
    Finance => "Finance",
    Advocate => "Advocate",
    Accountant => "Accountant",
    Engineering => "Engineering",
    Chef => "Chef",
    Aviation => "Aviation",
    Fitness => "Fitness",
    Sales => "Sales",
    Banking => "Banking",
    Healthcare => "Healthcare",
    Consultant => "Consultant",
    Construction => "Construction",
    PublicRelations => "Public Relations",
    HumanResources => "Human Resources",
    Designer => "Designer",
    Arts => "Arts",
    Teacher => "Teacher",
    Apparel => "Apparel",
}

impl JobArea {
    /// Position in [`JobArea::ALL`]; used as the class index by classifiers.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<JobArea> {
        JobArea::ALL.get(i).copied()
    }

    /// Lowercase slug with underscores, e.g. `information_technology`.
    pub fn slug(self) -> String {
        self.name().to_lowercase().replace(' ', "_")
    }
}

impl fmt::Display for JobArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JobArea {
    type Err = CorpusError;

    /// Case-insensitive; `_` and `-` are read as spaces so that `INFORMATION-TECHNOLOGY`
    /// and `human_resources` parse.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s
            .trim()
            .replace(['_', '-'], " ")
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        JobArea::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(&wanted))
            .ok_or_else(|| CorpusError::UnknownLabel(s.to_string()))
    }
}

impl Serialize for JobArea {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for JobArea {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
