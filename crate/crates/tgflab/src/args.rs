use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tgflab_core::kuo::Recurrence;
use tgflab_core::{Family, RegionSpec, WeightScheme};

#[derive(Parser, Debug)]
#[command(
    name = "tgflab",
    version,
    about = "Tiling generating functions of weighted halved and quartered hexagons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the TGF of a region by enumeration, by closed form, or both.
    Tgf(TgfArgs),
    /// Evaluate the closed-form product for a region.
    Formula(FormulaArgs),
    /// Sweep a parameter grid and check formulas against enumeration.
    Verify(VerifyArgs),
    /// Compare the shifted kind 1/2 formula with kind 3/4.
    Reciprocity(ReciprocityArgs),
    /// Check recurrences, or the condensation identities on one region.
    Kuo(KuoArgs),
    /// Draw a region, one character per unit triangle.
    Render(RenderArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Out {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Enumerate,
    Formula,
    #[default]
    Both,
}

/// Matching engine used for enumeration.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Profile,
    Backtrack,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplayArg {
    Factorial,
    Ratios,
}

/// Comma separated integers; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct List(pub Vec<i64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(List(Vec::new()));
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("`{}`: {e}", p.trim()))
            })
            .collect::<Result<_, _>>()
            .map(List)
    }
}

/// Inclusive range `lo..hi`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn values(self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let int = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("`{}`: {e}", t.trim()))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = int(s)?;
                (v, v)
            }
        };
        if lo < 0 {
            return Err(format!("range `{s}` starts below zero"));
        }
        Ok(Span { lo, hi })
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// Region family: p, p', r1..r4, a, b, c, d, s, t.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<i64>,
    /// Dent positions of a quartered region, e.g. `1,3`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<List>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<List>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<List>,
}

impl SpecArgs {
    pub fn has_parameters(&self) -> bool {
        self.x.is_some()
            || self.n.is_some()
            || self.d.is_some()
            || self.u.is_some()
            || self.s.is_some()
            || self.l.is_some()
            || self.h.is_some()
    }

    fn reject(&self, family: Family, names: &[&str]) -> Result<(), String> {
        for &name in names {
            let given = match name {
                "n" => self.n.is_some(),
                "d" => self.d.is_some(),
                "u" => self.u.is_some(),
                "s" => self.s.is_some(),
                "l" => self.l.is_some(),
                "h" => self.h.is_some(),
                _ => false,
            };
            if given {
                return Err(format!(
                    "invalid parameters: family {family} takes no --{name}"
                ));
            }
        }
        Ok(())
    }

    /// Validated spec for `family`, falling back to `--family`.
    pub fn spec_for(&self, default: Option<Family>) -> Result<RegionSpec, String> {
        let family = match (self.family, default) {
            (Some(f), Some(g)) if f != g => {
                return Err(format!("invalid parameters: expected family {g}, got {f}"))
            }
            (Some(f), _) | (None, Some(f)) => f,
            (None, None) => return Err("--family is required".into()),
        };
        let x = self.x.unwrap_or(0);
        let list = |v: &Option<List>| v.as_ref().map(|l| l.0.clone()).unwrap_or_default();
        let need = |v: Option<i64>, name: &str| {
            v.ok_or_else(|| format!("invalid parameters: family {family} needs --{name}"))
        };
        let (s, l, h) = (list(&self.s), list(&self.l), list(&self.h));
        let mut spec = match family {
            Family::P | Family::Pprime => {
                self.reject(family, &["d", "u", "s", "l", "h"])?;
                RegionSpec::halved(family == Family::Pprime, need(self.n, "n")?, x)
            }
            Family::R1 | Family::R2 | Family::R3 | Family::R4 => {
                self.reject(family, &["d", "u", "l", "h"])?;
                let kind = family.quartered_kind().unwrap_or(1);
                RegionSpec::quartered(kind, x, &s)
            }
            Family::A | Family::B => {
                self.reject(family, &["n", "u", "s", "h"])?;
                let d = need(self.d, "d")?;
                if family == Family::A {
                    RegionSpec::type_a(x, d, &l)
                } else {
                    RegionSpec::type_b(x, d, &l)
                }
            }
            Family::C | Family::D => {
                self.reject(family, &["d", "s", "l"])?;
                let u = need(self.u, "u")?;
                if family == Family::C {
                    RegionSpec::type_c(x, u, &h)
                } else {
                    RegionSpec::type_d(x, u, &h)
                }
            }
            Family::S | Family::T => {
                self.reject(family, &["s"])?;
                let (u, d) = (need(self.u, "u")?, need(self.d, "d")?);
                if family == Family::S {
                    RegionSpec::type_s(x, u, d, &l, &h)
                } else {
                    RegionSpec::type_t(x, u, d, &l, &h)
                }
            }
        };
        if let (Some(n), false) = (self.n, matches!(family, Family::P | Family::Pprime)) {
            spec.n = n;
        }
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    pub fn spec(&self) -> Result<RegionSpec, String> {
        self.spec_for(None)
    }
}

#[derive(Args, Debug)]
pub struct TgfArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Override the family's weight scheme.
    #[arg(long)]
    pub scheme: Option<WeightScheme>,
    #[arg(long, value_enum, default_value_t)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t)]
    pub engine: Engine,
    /// Use the corrected closed forms for P, P' and C.
    #[arg(long)]
    pub corrected: bool,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct FormulaArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Product display for quartered families.
    #[arg(long, value_enum)]
    pub display: Option<DisplayArg>,
    #[arg(long)]
    pub corrected: bool,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Families to sweep; all of them when omitted.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<Family>,
    #[arg(long, default_value = "0..1")]
    pub x: Span,
    #[arg(long, default_value = "0..2")]
    pub n: Span,
    #[arg(long, default_value = "0..2")]
    pub d: Span,
    #[arg(long, default_value = "0..2")]
    pub u: Span,
    #[arg(long)]
    pub scheme: Option<WeightScheme>,
    #[arg(long, value_enum, default_value_t)]
    pub engine: Engine,
    #[arg(long)]
    pub corrected: bool,
    /// Add wall-clock milliseconds per case to the report.
    #[arg(long)]
    pub timings: bool,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct ReciprocityArgs {
    /// `r1` checks 1 -> 3, `r2` checks 2 -> 4; both when omitted.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub x: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: List,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct KuoArgs {
    /// Recurrence name; without it the identities are checked on the region.
    #[arg(long)]
    pub which: Option<Recurrence>,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub scheme: Option<WeightScheme>,
    #[arg(long, value_enum, default_value_t)]
    pub out: Out,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!("1, 2,5".parse::<List>().unwrap(), List(vec![1, 2, 5]));
        assert_eq!("".parse::<List>().unwrap(), List(vec![]));
        assert!("1,,2".parse::<List>().is_err());
    }

    #[test]
    fn spans() {
        assert_eq!("3".parse::<Span>().unwrap(), Span { lo: 3, hi: 3 });
        assert_eq!("0..2".parse::<Span>().unwrap(), Span { lo: 0, hi: 2 });
        assert_eq!("1..=4".parse::<Span>().unwrap(), Span { lo: 1, hi: 4 });
        assert_eq!("1..0".parse::<Span>().unwrap().values().count(), 0);
        assert!("-1..2".parse::<Span>().is_err());
    }

    fn args(family: &str) -> SpecArgs {
        SpecArgs {
            family: Some(family.parse().unwrap()),
            ..Default::default()
        }
    }

    #[test]
    fn quartered_spec_with_explicit_n() {
        let mut a = args("r1");
        a.s = Some(List(vec![1, 2]));
        a.n = Some(3);
        assert!(a.spec().unwrap_err().starts_with("invalid parameters"));
        a.n = Some(2);
        assert_eq!(a.spec().unwrap(), RegionSpec::quartered(1, 0, &[1, 2]));
    }

    #[test]
    fn stray_flags_rejected() {
        let mut a = args("p");
        a.n = Some(1);
        a.d = Some(2);
        assert!(a.spec().is_err());
        a.d = None;
        assert_eq!(a.spec().unwrap(), RegionSpec::halved(false, 1, 0));
    }

    #[test]
    fn family_must_match_default() {
        let mut a = args("b");
        a.d = Some(1);
        assert!(a.spec_for(Some(Family::A)).is_err());
        assert!(a.spec_for(Some(Family::B)).is_ok());
    }
}
