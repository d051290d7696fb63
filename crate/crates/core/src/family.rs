//! Family descriptors: a family name plus a flat `key=value` parameter list,
//! as accepted by the command line and the C interface, e.g.
//! `davison theta=golden k=3` or `perturbed w=1,2 sym=3:R`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::generators::automatic::{
    baum_sweet_morphic_stream, baum_sweet_stream, rudin_shapiro_morphic_stream,
    rudin_shapiro_stream,
};
use crate::generators::concat::{concat_family_stream, BlockSource, ConcatFamily};
use crate::generators::folding::{paperfolding_stream, FoldingSystem, Instructions};
use crate::generators::perturbed::{
    perturbed_symmetry_stream, Mode, PerturbedSymmetry, PerturbedSystem, Schedule,
};
use crate::generators::theta::{davison_stream, DavisonParams};
use crate::words::{Alphabet, FiniteWord, Letter, Morphism, Sign, WordStream};

/// Family names understood by [`Family::from_descriptor`].
pub const FAMILY_NAMES: [&str; 7] = [
    "rudin-shapiro",
    "baum-sweet",
    "davison",
    "paperfolding",
    "perturbed",
    "concat",
    "morphic",
];

/// `name` plus its parameters, kept as strings for echoing back.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyDescriptor {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl FamilyDescriptor {
    pub fn new(name: impl Into<String>) -> Self {
        FamilyDescriptor {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Adds a `key=value` pair.
    pub fn push_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {pair:?}")))?;
        if k.is_empty() {
            return Err(Error::InvalidParameter(format!("empty key in {pair:?}")));
        }
        self.params.insert(k.to_string(), v.to_string());
        Ok(())
    }
}

impl FromStr for FamilyDescriptor {
    type Err = Error;

    /// `name key=value key=value ...`, whitespace separated.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty family descriptor".into()))?;
        let mut d = FamilyDescriptor::new(name);
        for p in parts {
            d.push_pair(p)?;
        }
        Ok(d)
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// A continued fraction given by a preperiod and a non-empty period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSpec {
    pub preperiod: Vec<Letter>,
    pub period: Vec<Letter>,
}

impl ThetaSpec {
    pub fn expansion(&self) -> CfExpansion {
        CfExpansion::periodic(&self.preperiod, &self.period).expect("validated on parse")
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;

    /// `golden`, `silver`, or a pattern such as `1,(2)` or `(1,2)`, the
    /// parenthesised part repeating forever.
    fn from_str(s: &str) -> Result<Self> {
        let spec = match s.trim() {
            "golden" => ThetaSpec {
                preperiod: vec![],
                period: vec![1],
            },
            "silver" => ThetaSpec {
                preperiod: vec![],
                period: vec![2],
            },
            pattern => {
                let bad = || Error::InvalidParameter(format!("bad theta pattern {pattern:?}"));
                let open = pattern.find('(').ok_or_else(bad)?;
                let inner = pattern[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                let pre = pattern[..open].trim_end_matches(',');
                ThetaSpec {
                    preperiod: parse_letters(pre)?,
                    period: parse_letters(inner)?,
                }
            }
        };
        if spec.period.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "theta {s:?} has an empty period"
            )));
        }
        if let Some(&z) = spec.preperiod.iter().chain(&spec.period).find(|&&a| a == 0) {
            return Err(Error::ZeroLetter(z));
        }
        Ok(spec)
    }
}

/// Letters separated by `sep`; empty input is the empty list.
fn parse_list(s: &str, sep: char) -> Result<Vec<Letter>> {
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<Letter>()
                .map_err(|_| Error::InvalidParameter(format!("bad letter {t:?}")))
        })
        .collect()
}

/// Comma-separated letters.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    parse_list(s, ',')
}

fn parse_word(s: &str) -> Result<FiniteWord> {
    FiniteWord::new(parse_letters(s)?)
}

/// `regular`, `seed:N`, or a sign pattern such as `+-+` or `1,-1`.
pub fn parse_instructions(s: &str) -> Result<Instructions> {
    let s = s.trim();
    if s == "regular" {
        return Ok(Instructions::Constant(Sign::Plus));
    }
    if let Some(seed) = s.strip_prefix("seed:") {
        return Ok(Instructions::Seeded(parse_num(seed, "fold seed")?));
    }
    let signs: Result<Vec<Sign>> = if s.contains(',') {
        s.split(',')
            .map(|t| match t.trim() {
                "1" | "+1" | "+" => Ok(Sign::Plus),
                "-1" | "-" => Ok(Sign::Minus),
                t => Err(Error::InvalidParameter(format!("bad fold sign {t:?}"))),
            })
            .collect()
    } else {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                c => Err(Error::InvalidParameter(format!("bad fold sign {c:?}"))),
            })
            .collect()
    };
    let signs = signs?;
    if signs.is_empty() {
        return Err(Error::InvalidParameter("empty fold pattern".into()));
    }
    Ok(Instructions::Periodic(signs))
}

/// Items `letters:mode` separated by commas, letters joined by `.`; an
/// empty letter list is an empty insert. `3:R` is `W -> W 3 mirror(W)`.
pub fn parse_symmetry(s: &str) -> Result<PerturbedSymmetry> {
    let mut inserts = Vec::new();
    let mut modes = Vec::new();
    for item in s.split(',') {
        let (letters, mode) = item.trim().rsplit_once(':').ok_or_else(|| {
            Error::InvalidParameter(format!("symmetry item {item:?} lacks ':E' or ':R'"))
        })?;
        inserts.push(
            FiniteWord::new(parse_list(letters, '.')?).unwrap_or_else(|_| FiniteWord::empty()),
        );
        modes.push(match mode.trim() {
            "E" | "e" => Mode::E,
            "R" | "r" => Mode::R,
            m => {
                return Err(Error::InvalidParameter(format!(
                    "mode must be E or R, got {m:?}"
                )))
            }
        });
    }
    PerturbedSymmetry::new(inserts, modes)
}

/// `seed:N`, or symmetry indices (optionally after `periodic:`).
pub fn parse_schedule(s: &str) -> Result<Schedule> {
    let s = s.trim();
    if let Some(seed) = s.strip_prefix("seed:") {
        return Ok(Schedule::Seeded(parse_num(seed, "schedule seed")?));
    }
    let body = s.strip_prefix("periodic:").unwrap_or(s);
    let idx = parse_letters(body)?
        .into_iter()
        .map(|i| i as usize)
        .collect();
    Ok(Schedule::Periodic(idx))
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad {what}: {s:?}")))
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    RudinShapiro {
        a: Letter,
        b: Letter,
        morphic: bool,
    },
    BaumSweet {
        a: Letter,
        b: Letter,
        morphic: bool,
    },
    Davison {
        theta: ThetaSpec,
        k: u64,
    },
    Paperfolding(FoldingSystem),
    Perturbed(PerturbedSystem),
    Concat(ConcatFamily),
    Morphic {
        sigma: Morphism,
        start: Letter,
        phi: Option<Morphism>,
    },
}

/// A validated family that can produce fresh streams on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    descriptor: FamilyDescriptor,
    kind: Kind,
}

struct Params<'a> {
    d: &'a FamilyDescriptor,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn get(&mut self, key: &'static str) -> Option<&'a str> {
        self.used.push(key);
        self.d.params.get(key).map(String::as_str)
    }

    fn letter(&mut self, key: &'static str, default: Letter) -> Result<Letter> {
        match self.get(key) {
            Some(v) => parse_num(v, key),
            None => Ok(default),
        }
    }

    fn route(&mut self) -> Result<bool> {
        match self.get("route") {
            None | Some("binary") => Ok(false),
            Some("morphic") => Ok(true),
            Some(r) => Err(Error::InvalidParameter(format!(
                "route must be binary or morphic, got {r:?}"
            ))),
        }
    }

    fn finish(self) -> Result<()> {
        match self
            .d
            .params
            .keys()
            .find(|k| !self.used.contains(&k.as_str()))
        {
            Some(k) => Err(Error::InvalidParameter(format!(
                "unknown parameter {k:?} for family {}",
                self.d.name
            ))),
            None => Ok(()),
        }
    }
}

fn check_pair(a: Letter, b: Letter) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroLetter(0));
    }
    if a == b {
        return Err(Error::InvalidParameter(format!(
            "letters a and b must differ, both are {a}"
        )));
    }
    Ok(())
}

impl Family {
    pub fn from_descriptor(d: &FamilyDescriptor) -> Result<Family> {
        let mut p = Params {
            d,
            used: Vec::new(),
        };
        let kind = match d.name.as_str() {
            "rudin-shapiro" | "baum-sweet" => {
                let (a, b) = (p.letter("a", 1)?, p.letter("b", 2)?);
                check_pair(a, b)?;
                let morphic = p.route()?;
                if d.name == "rudin-shapiro" {
                    Kind::RudinShapiro { a, b, morphic }
                } else {
                    Kind::BaumSweet { a, b, morphic }
                }
            }
            "davison" => {
                let theta: ThetaSpec = p.get("theta").unwrap_or("golden").parse()?;
                let k = p.letter("k", 2)?;
                DavisonParams::new(theta.expansion(), k)?;
                Kind::Davison { theta, k }
            }
            "paperfolding" => {
                let ins = parse_instructions(p.get("folds").unwrap_or("regular"))?;
                let (a, b) = (p.letter("a", 1)?, p.letter("b", 2)?);
                Kind::Paperfolding(FoldingSystem::new(ins, a, b)?)
            }
            "perturbed" => {
                let seed = parse_word(p.get("w").unwrap_or("1,2"))?;
                let syms = p
                    .get("sym")
                    .unwrap_or("3:R")
                    .split(';')
                    .map(parse_symmetry)
                    .collect::<Result<Vec<_>>>()?;
                let schedule = parse_schedule(p.get("schedule").unwrap_or("0"))?;
                let alphabet = match p.get("alphabet") {
                    Some(a) => Alphabet::new(parse_letters(a)?)?,
                    None => {
                        let mut letters = seed.to_vec();
                        for s in &syms {
                            letters.extend(s.inserts().iter().flat_map(|x| x.iter().copied()));
                        }
                        Alphabet::of_word(&letters)?
                    }
                };
                Kind::Perturbed(PerturbedSystem::new(alphabet, seed, syms, schedule)?)
            }
            "concat" => {
                let alphabet = Alphabet::new(parse_letters(p.get("alphabet").unwrap_or("1,2,3"))?)?;
                let lambda: f64 = parse_num(p.get("lambda").unwrap_or("4"), "lambda")?;
                let source = match (p.get("blocks"), p.get("seed")) {
                    (Some(_), Some(_)) => {
                        return Err(Error::InvalidParameter(
                            "give either blocks or seed, not both".into(),
                        ))
                    }
                    (Some(blocks), None) => BlockSource::Explicit(
                        blocks
                            .split(';')
                            .map(parse_word)
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    (None, seed) => BlockSource::Seeded(parse_num(seed.unwrap_or("0"), "seed")?),
                };
                Kind::Concat(ConcatFamily::new(alphabet, source, lambda)?)
            }
            "morphic" => {
                let sigma_spec = p
                    .get("sigma")
                    .ok_or_else(|| Error::InvalidParameter("morphic family needs sigma".into()))?;
                let images: Vec<Vec<Letter>> = sigma_spec
                    .split(';')
                    .map(parse_letters)
                    .collect::<Result<_>>()?;
                let refs: Vec<&[Letter]> = images.iter().map(Vec::as_slice).collect();
                let sigma = Morphism::on_range(&refs)?;
                let start = p.letter("start", 1)?;
                sigma.fixed_point_stream(start)?;
                let phi = match p.get("phi") {
                    Some(spec) => {
                        let letters = parse_letters(spec)?;
                        let imgs: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
                        let refs: Vec<&[Letter]> = imgs.iter().map(Vec::as_slice).collect();
                        let phi = Morphism::on_range(&refs)?;
                        if phi.domain() != sigma.domain() {
                            return Err(Error::InvalidMorphism(
                                "coding must have one image per letter of sigma".into(),
                            ));
                        }
                        Some(phi)
                    }
                    None => None,
                };
                Kind::Morphic { sigma, start, phi }
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        p.finish()?;
        Ok(Family {
            descriptor: d.clone(),
            kind,
        })
    }

    pub fn descriptor(&self) -> &FamilyDescriptor {
        &self.descriptor
    }

    pub fn name(&self) -> &str {
        &self.descriptor.name
    }

    /// Whether `q_l^(1/l)` is known to converge for this family, so that the
    /// growth window may be collapsed to its limit value.
    pub fn growth_converges(&self) -> bool {
        matches!(self.kind, Kind::BaumSweet { .. })
    }

    /// A fresh stream from the first letter.
    pub fn stream(&self) -> Result<WordStream> {
        Ok(match &self.kind {
            Kind::RudinShapiro {
                a,
                b,
                morphic: false,
            } => rudin_shapiro_stream(*a, *b)?,
            Kind::RudinShapiro {
                a,
                b,
                morphic: true,
            } => rudin_shapiro_morphic_stream(*a, *b)?,
            Kind::BaumSweet {
                a,
                b,
                morphic: false,
            } => baum_sweet_stream(*a, *b)?,
            Kind::BaumSweet {
                a,
                b,
                morphic: true,
            } => baum_sweet_morphic_stream(*a, *b)?,
            Kind::Davison { theta, k } => {
                davison_stream(DavisonParams::new(theta.expansion(), *k)?)
            }
            Kind::Paperfolding(sys) => paperfolding_stream(sys.clone()),
            Kind::Perturbed(sys) => perturbed_symmetry_stream(sys.clone()),
            Kind::Concat(fam) => concat_family_stream(fam.clone()),
            Kind::Morphic { sigma, start, phi } => {
                let fixed = sigma.fixed_point_stream(*start)?;
                match phi {
                    Some(phi) => phi.coding_apply(fixed)?,
                    None => fixed,
                }
            }
        })
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        self.stream()?.take_prefix(n)
    }

    /// The underlying block family, for the concat family.
    pub fn concat_family(&self) -> Option<&ConcatFamily> {
        match &self.kind {
            Kind::Concat(f) => Some(f),
            _ => None,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::from_descriptor(&s.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(desc: &str, n: usize) -> Vec<Letter> {
        desc.parse::<Family>()
            .unwrap()
            .prefix(n)
            .unwrap()
            .into_vec()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(first("baum-sweet a=1 b=2", 6), [2, 2, 1, 2, 2, 1]);
        assert_eq!(
            first("davison theta=golden k=2", 8),
            [1, 2, 2, 1, 2, 2, 1, 1]
        );
        assert_eq!(first("rudin-shapiro", 4), [1, 1, 1, 2]);
        assert_eq!(first("paperfolding", 7), [1, 1, 2, 1, 1, 2, 2]);
        assert_eq!(first("perturbed w=1,2 sym=3:R", 5), [1, 2, 3, 2, 1]);
        assert_eq!(
            first("morphic sigma=1,2;3,2;2,4;4,4", 12),
            [1, 2, 3, 2, 2, 4, 3, 2, 3, 2, 4, 4]
        );
        assert_eq!(
            first("morphic sigma=1,2;3,2;2,4;4,4 phi=2,2,1,1", 4),
            [2, 2, 1, 2]
        );
        assert_eq!(
            first(
                "concat blocks=1,2,3;1,1,2,3,2,3,1,2,3,2,1,3,1,2,3 lambda=3.26",
                4
            ),
            [1, 2, 3, 1]
        );
    }

    #[test]
    fn routes_agree() {
        assert_eq!(
            first("rudin-shapiro route=morphic", 500),
            first("rudin-shapiro", 500)
        );
        assert_eq!(
            first("baum-sweet route=morphic a=4 b=9", 500),
            first("baum-sweet a=4 b=9", 500)
        );
    }

    #[test]
    fn theta_patterns() {
        assert_eq!("golden".parse::<ThetaSpec>().unwrap().period, [1]);
        let t: ThetaSpec = "1,(2)".parse().unwrap();
        assert_eq!((t.preperiod, t.period), (vec![1], vec![2]));
        let t: ThetaSpec = "(1,2)".parse().unwrap();
        assert_eq!((t.preperiod, t.period), (vec![], vec![1, 2]));
        assert!("1,2".parse::<ThetaSpec>().is_err());
        assert!("()".parse::<ThetaSpec>().is_err());
        assert!("(0)".parse::<ThetaSpec>().is_err());
    }

    #[test]
    fn fold_patterns() {
        assert_eq!(
            parse_instructions("+-").unwrap(),
            Instructions::Periodic(vec![Sign::Plus, Sign::Minus])
        );
        assert_eq!(
            parse_instructions("1,-1").unwrap(),
            Instructions::Periodic(vec![Sign::Plus, Sign::Minus])
        );
        assert_eq!(
            parse_instructions("seed:4").unwrap(),
            Instructions::Seeded(4)
        );
        assert!(parse_instructions("+x").is_err());
    }

    #[test]
    fn symmetry_syntax() {
        let s = parse_symmetry("3.1:R,:E").unwrap();
        assert_eq!(s.arity(), 2);
        assert_eq!(s.inserts()[0].as_slice(), &[3, 1]);
        assert!(s.inserts()[1].is_empty());
        assert_eq!(s.modes(), &[Mode::R, Mode::E]);
        assert!(parse_symmetry("3").is_err());
        assert!(parse_symmetry("3:Q").is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let d: FamilyDescriptor = "davison k=3 theta=silver".parse().unwrap();
        assert_eq!(d.to_string(), "davison k=3 theta=silver");
        assert_eq!(d.to_string().parse::<FamilyDescriptor>().unwrap(), d);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            "thue-morse".parse::<Family>(),
            Err(Error::UnknownFamily(_))
        ));
        assert!("davison k=1".parse::<Family>().is_err());
        assert!("baum-sweet a=2 b=2".parse::<Family>().is_err());
        assert!("baum-sweet c=2".parse::<Family>().is_err());
        assert!("concat alphabet=1,2".parse::<Family>().is_err());
        assert!("morphic".parse::<Family>().is_err());
        assert!("morphic sigma=2,1;1,2".parse::<Family>().is_err());
    }
}
