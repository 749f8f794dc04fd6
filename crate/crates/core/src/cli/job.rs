use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::parse_expr;
use super::CliError;
use crate::exactla::Field;
use crate::fincat::DEFAULT_MORPHISM_CAP;
use crate::funrep::FunctorExpr;
use crate::grouphom::{GroupKind, DEFAULT_ENUMERATION_CAP};

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
        pub enum $name {
            $(#[serde(rename = $text)] #[value(name = $text)] $variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = CliError;
            fn from_str(s: &str) -> Result<$name, CliError> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(CliError::Job(format!("unknown {} {s:?}", stringify!($name)))),
                }
            }
        }
    };
}

named_enum!(
    /// Category builders reachable from the command line, truncated at `dmax`.
    CatKind {
        All => "all",
        Inj => "inj",
        Surj => "surj",
        Iso => "iso",
        Quad => "quad",
        QuadNondeg => "quad-nd",
        Alt => "alt",
        AltNondeg => "alt-nd",
        Gamma => "gamma",
        Theta => "theta",
        Omega => "omega",
        Sigma => "sigma",
        Grassmann => "grassmann",
        SpanInj => "span-inj",
        SpanTheta => "span-theta",
    }
);

named_enum!(GroupArg { GL => "GL", O => "O", Sp => "Sp", Sym => "Sym" });

named_enum!(VerifyTarget { Psi => "psi", Morita => "morita", Pirashvili => "pirashvili", Axioms => "axioms", Exponential => "exponential" });

named_enum!(CompareTarget { Main0 => "main0", LowDeg => "lowdeg", Suslin => "suslin", Djament => "djament", Betley => "betley", Gl => "gl" });

impl From<GroupArg> for GroupKind {
    fn from(g: GroupArg) -> GroupKind {
        match g {
            GroupArg::GL => GroupKind::GL,
            GroupArg::O => GroupKind::O,
            GroupArg::Sp => GroupKind::Sp,
            GroupArg::Sym => GroupKind::Sym,
        }
    }
}

/// `F_q` with `q = p^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
}

impl FieldSpec {
    pub fn q(self) -> u32 {
        self.p.pow(self.d)
    }
    pub fn field(self) -> Result<Field, CliError> {
        let k = Field::new(self.q()).map_err(|e| CliError::Job(e.to_string()))?;
        if k.p() != self.p {
            return Err(CliError::Job(format!("{} is not prime", self.p)));
        }
        Ok(k)
    }
}

impl FromStr for FieldSpec {
    type Err = CliError;
    /// `q`, `p^d` or `p,d`.
    fn from_str(s: &str) -> Result<FieldSpec, CliError> {
        let bad = || CliError::Job(format!("field {s:?}: expected q, p^d or p,d"));
        let nums: Vec<u32> = s.split(['^', ',']).map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let spec = match nums[..] {
            [q] => {
                let k = Field::new(q).map_err(|e| CliError::Job(e.to_string()))?;
                FieldSpec { p: k.p(), d: k.d() }
            }
            [p, d] => FieldSpec { p, d },
            _ => return Err(bad()),
        };
        spec.field()?;
        Ok(spec)
    }
}

/// Truncation caps and degree bounds. Every key is optional in job and config files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Dimension or cardinality cap of the category.
    pub dmax: usize,
    /// Increasing caps for cap-convergence runs; empty means `[dmax]`.
    pub caps: Vec<usize>,
    /// Rank bound of group-side scans.
    pub n_max: usize,
    pub max_degree: usize,
    /// Largest group enumerated element by element.
    pub group_order: u64,
    pub morphism_cap: usize,
    /// Largest bar-complex term in group homology.
    pub cell_cap: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { dmax: 2, caps: Vec::new(), n_max: 3, max_degree: 2, group_order: DEFAULT_ENUMERATION_CAP, morphism_cap: DEFAULT_MORPHISM_CAP, cell_cap: 5_000_000 }
    }
}

impl Caps {
    pub fn cap_list(&self) -> Vec<usize> {
        if self.caps.is_empty() {
            vec![self.dmax]
        } else {
            self.caps.clone()
        }
    }
}

/// Optional overrides of [`Caps`], as read from a config file or flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsOverride {
    pub dmax: Option<usize>,
    pub caps: Option<Vec<usize>>,
    pub n_max: Option<usize>,
    pub max_degree: Option<usize>,
    pub group_order: Option<u64>,
    pub morphism_cap: Option<usize>,
    pub cell_cap: Option<usize>,
}

impl CapsOverride {
    pub fn from_toml(text: &str) -> Result<CapsOverride, CliError> {
        toml::from_str(text).map_err(|e| CliError::Job(format!("config: {e}")))
    }

    /// `self` wins over `other`.
    pub fn or(self, other: CapsOverride) -> CapsOverride {
        CapsOverride {
            dmax: self.dmax.or(other.dmax),
            caps: self.caps.or(other.caps),
            n_max: self.n_max.or(other.n_max),
            max_degree: self.max_degree.or(other.max_degree),
            group_order: self.group_order.or(other.group_order),
            morphism_cap: self.morphism_cap.or(other.morphism_cap),
            cell_cap: self.cell_cap.or(other.cell_cap),
        }
    }

    pub fn resolve(self) -> Caps {
        let d = Caps::default();
        Caps {
            dmax: self.dmax.unwrap_or(d.dmax),
            caps: self.caps.unwrap_or(d.caps),
            n_max: self.n_max.unwrap_or(d.n_max),
            max_degree: self.max_degree.unwrap_or(d.max_degree),
            group_order: self.group_order.unwrap_or(d.group_order),
            morphism_cap: self.morphism_cap.unwrap_or(d.morphism_cap),
            cell_cap: self.cell_cap.unwrap_or(d.cell_cap),
        }
    }
}

/// A functor expression kept in canonical printed form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr(pub FunctorExpr);

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        let text = String::deserialize(d)?;
        parse_expr(&text).map(Expr).map_err(serde::de::Error::custom)
    }
}

impl FromStr for Expr {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Expr, CliError> {
        Ok(Expr(parse_expr(s)?))
    }
}

/// The two roles a functor plays: the contravariant factor and the covariant one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functors {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contra: Option<Expr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub co: Option<Expr>,
}

impl Functors {
    pub fn co(&self) -> Result<&FunctorExpr, CliError> {
        self.co.as_ref().map(|e| &e.0).ok_or_else(|| CliError::Job("missing covariant expression (co)".into()))
    }
    pub fn contra(&self) -> Result<&FunctorExpr, CliError> {
        self.contra.as_ref().map(|e| &e.0).ok_or_else(|| CliError::Job("missing contravariant expression (contra)".into()))
    }
}

/// Inclusive rectangle of `(i, j)` indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub i: (usize, usize),
    pub j: (usize, usize),
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}x{}..{}", self.i.0, self.i.1, self.j.0, self.j.1)
    }
}

impl FromStr for Rect {
    type Err = CliError;
    /// `a..b x c..d`; a missing column range means `0..0`.
    fn from_str(s: &str) -> Result<Rect, CliError> {
        let bad = || CliError::Job(format!("rectangle {s:?}: expected a..bxc..d"));
        let range = |t: &str| -> Result<(usize, usize), CliError> {
            let (a, b) = t.trim().split_once("..").ok_or_else(bad)?;
            let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        };
        let mut parts = s.split('x');
        let i = range(parts.next().ok_or_else(bad)?)?;
        let j = parts.next().map(range).transpose()?.unwrap_or((0, 0));
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Rect { i, j })
    }
}

impl Serialize for Rect {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rect {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rect, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    CatBuild {
        cat: CatKind,
    },
    CatCheck {
        cat: CatKind,
    },
    Tor {
        cat: CatKind,
        /// Also run the bar-complex oracle at the last cap.
        #[serde(default)]
        oracle: bool,
    },
    GroupHomology {
        group: GroupArg,
        n: usize,
    },
    StableScan {
        group: GroupArg,
        degree: usize,
    },
    Verify {
        target: VerifyTarget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cat: Option<CatKind>,
    },
    Compare {
        target: CompareTarget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<GroupArg>,
        /// Named module for the djament and betley comparisons.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<String>,
    },
    Predict {
        /// A series name (`O/S`, `Sp/L`, ...) or a characteristic-2 target.
        series: String,
        rect: Rect,
    },
}

impl Command {
    pub fn label(&self) -> String {
        match self {
            Command::CatBuild { .. } => "cat build".into(),
            Command::CatCheck { .. } => "cat check".into(),
            Command::Tor { .. } => "tor".into(),
            Command::GroupHomology { .. } => "group-homology".into(),
            Command::StableScan { .. } => "stable-scan".into(),
            Command::Verify { target, .. } => format!("verify {target}"),
            Command::Compare { target, .. } => format!("compare {target}"),
            Command::Predict { .. } => "predict".into(),
        }
    }
}

/// Everything a run depends on. Output paths do not affect results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub field: FieldSpec,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub functors: Functors,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

impl JobSpec {
    pub fn from_toml(text: &str) -> Result<JobSpec, CliError> {
        toml::from_str(text).map_err(|e| CliError::Job(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs serialize")
    }

    /// The result-determining part: the spec with output paths cleared.
    pub fn canonical(&self) -> JobSpec {
        JobSpec { output: None, csv: None, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> JobSpec {
        JobSpec {
            command: Command::Tor { cat: CatKind::All, oracle: true },
            field: "2".parse().unwrap(),
            caps: Caps { dmax: 3, caps: vec![2, 3], ..Caps::default() },
            functors: Functors { contra: Some("K[q2]^v".parse().unwrap()), co: Some("Id".parse().unwrap()) },
            output: Some("out.json".into()),
            csv: None,
        }
    }

    #[test]
    fn toml_round_trip() {
        let job = sample();
        let text = job.to_toml();
        assert_eq!(JobSpec::from_toml(&text).unwrap(), job);
        assert_eq!(JobSpec::from_toml(&text).unwrap().to_toml(), text);
        let predict = JobSpec {
            command: Command::Predict { series: "O/S".into(), rect: "0..10x0..4".parse().unwrap() },
            field: "3".parse().unwrap(),
            caps: Caps::default(),
            functors: Functors::default(),
            output: None,
            csv: Some("t.csv".into()),
        };
        assert_eq!(JobSpec::from_toml(&predict.to_toml()).unwrap(), predict);
    }

    #[test]
    fn expressions_are_canonicalized() {
        let text = "field = { p = 3, d = 1 }\n[command]\nname = \"stable-scan\"\ngroup = \"O\"\ndegree = 0\n[functors]\nco = \"(S^2)(+)Id\"\n";
        let job = JobSpec::from_toml(text).unwrap();
        assert_eq!(job.functors.co().unwrap().to_string(), "S^2 (+) Id");
        assert_eq!(job.caps, Caps::default());
        assert!(JobSpec::from_toml(&text.replace("Id\"", "Id (x)\"")).is_err());
        assert!(JobSpec::from_toml(&format!("{text}bogus = 1\n")).is_err());
    }

    #[test]
    fn fields_rectangles_and_overrides() {
        assert_eq!("9".parse::<FieldSpec>().unwrap(), FieldSpec { p: 3, d: 2 });
        assert_eq!("2^2".parse::<FieldSpec>().unwrap().q(), 4);
        assert!("6".parse::<FieldSpec>().is_err());
        assert!("4,1".parse::<FieldSpec>().is_err());
        assert_eq!("0..10x0..4".parse::<Rect>().unwrap(), Rect { i: (0, 10), j: (0, 4) });
        assert_eq!("2..5".parse::<Rect>().unwrap().j, (0, 0));
        assert!("3..1x0..0".parse::<Rect>().is_err());
        let flags = CapsOverride { dmax: Some(4), ..Default::default() };
        let file = CapsOverride::from_toml("dmax = 3\nn_max = 5\n").unwrap();
        let caps = flags.or(file).resolve();
        assert_eq!((caps.dmax, caps.n_max, caps.max_degree), (4, 5, 2));
        assert!(CapsOverride::from_toml("dmx = 3").is_err());
    }
}
