//! Run configuration: a flat `key = value` text file.
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! model = trig_curve          # builtin family name
//! params = 1/2, 0, 1          # comma-separated; rationals as p/q
//! f_cos = 0, 0                # or the four trig coefficient arrays
//! f_sin = 0, 1
//! h_cos = 0
//! h_sin = 1
//! r = 2
//! seed = 7
//! count = 100
//! max_degree = 4
//! svg = true
//! out = reports
//! tol.gap_margin = 1e-3       # any tolerance key, prefixed with tol.
//! nf.r = 3                    # normal-form suite inputs, prefixed with nf.
//! ```
//!
//! Every key may appear at most once. Unknown keys are errors, so typos
//! never pass silently. A trailing `# ...` after a value is a comment.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::Zero;

use crate::poly::{parse_rational, rat_to_f64, Rational};
use crate::prim_map::{builtin_model, PrimMapModel, TrigPoly};
use crate::tolerances::Tolerances;
use crate::{Error, Result};

const TOP_KEYS: [&str; 12] = [
    "model", "params", "f_cos", "f_sin", "h_cos", "h_sin", "r", "seed", "count", "max_degree", "svg", "out",
];

const NF_KEYS: [&str; 12] =
    ["r", "k", "z", "j", "t", "s", "high", "tu", "tv", "pair_high", "top_tv", "limit_steps"];

fn config_err(line: usize, msg: impl std::fmt::Display) -> Error {
    if line == 0 {
        Error::Config(msg.to_string())
    } else {
        Error::Config(format!("line {line}: {msg}"))
    }
}

/// Raw key/value pairs with the line each came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(config_err(line, "empty key"));
            }
            check_key(&key).map_err(|m| config_err(line, m))?;
            if entries.insert(key.clone(), (line, value.trim().to_string())).is_some() {
                return Err(config_err(line, format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { entries })
    }

    /// Set a key as if it had been written in the file (command-line
    /// overrides); replaces any earlier value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        check_key(key).map_err(|m| config_err(0, m))?;
        self.entries.insert(key.to_string(), (0, value.trim().to_string()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| config_err(self.line(key), format!("`{key}`: cannot parse `{v}`"))),
        }
    }

    fn rationals(&self, key: &str) -> Result<Option<Vec<Rational>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        if v.is_empty() {
            return Ok(Some(Vec::new()));
        }
        v.split(',')
            .map(|item| {
                let item = item.trim();
                parse_rational(item)
                    .ok_or_else(|| config_err(self.line(key), format!("`{key}`: `{item}` is not a rational")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn rational(&self, key: &str) -> Result<Option<Rational>> {
        match self.rationals(key)? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v.into_iter().next().unwrap())),
            Some(_) => Err(config_err(self.line(key), format!("`{key}` takes a single value"))),
        }
    }

    /// Comma-separated reals; each item is a decimal float or `p/q`.
    fn reals(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        if v.is_empty() {
            return Ok(Some(Vec::new()));
        }
        v.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .or_else(|| parse_rational(item).map(|q| rat_to_f64(&q)))
                    .ok_or_else(|| config_err(self.line(key), format!("`{key}`: `{item}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn check_key(key: &str) -> std::result::Result<(), String> {
    if let Some(rest) = key.strip_prefix("tol.") {
        if Tolerances::KEYS.contains(&rest) {
            return Ok(());
        }
        return Err(format!("unknown tolerance `{rest}`"));
    }
    if let Some(rest) = key.strip_prefix("nf.") {
        if NF_KEYS.contains(&rest) {
            return Ok(());
        }
        return Err(format!("unknown normal-form key `{rest}`"));
    }
    if TOP_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(format!("unknown key `{key}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Builtin { name: String, params: Vec<f64> },
    Trig { f: TrigPoly, h: TrigPoly },
}

impl ModelSpec {
    pub fn build(&self) -> Result<PrimMapModel> {
        match self {
            ModelSpec::Builtin { name, params } => builtin_model(name, params),
            ModelSpec::Trig { f, h } => Ok(PrimMapModel::trig_curve(f.clone(), h.clone())),
        }
    }
}

/// Inputs of the exact normal-form suite. Missing coefficient blocks
/// default to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormConfig {
    pub r: usize,
    pub k: usize,
    pub z: usize,
    pub j: usize,
    pub t: Rational,
    pub s: Vec<Rational>,
    pub high: Option<Vec<Rational>>,
    pub tu: Rational,
    pub tv: Rational,
    pub pair_high: Option<Vec<Rational>>,
    pub top_tv: Rational,
    pub limit_steps: u32,
}

impl Default for NormalFormConfig {
    fn default() -> Self {
        Self {
            r: 2,
            k: 0,
            z: 0,
            j: 1,
            t: Rational::new(1.into(), 2.into()),
            s: Vec::new(),
            high: None,
            tu: Rational::zero(),
            tv: Rational::from_integer(1.into()),
            pair_high: None,
            top_tv: Rational::from_integer(1.into()),
            limit_steps: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: Option<ModelSpec>,
    pub r: Option<usize>,
    pub tol: Tolerances,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub max_degree: usize,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub normal_form: NormalFormConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_file(&ConfigFile::parse(text)?)
    }

    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        let trig_keys = ["f_cos", "f_sin", "h_cos", "h_sin"];
        let has_trig = trig_keys.iter().any(|k| file.get(k).is_some());
        let name = file.get("model").map(str::to_string);
        let model = match (name, has_trig) {
            (Some(name), false) => {
                Some(ModelSpec::Builtin { params: file.reals("params")?.unwrap_or_default(), name })
            }
            (name, true) => {
                if name.as_deref().is_some_and(|n| n != "trig_curve") {
                    return Err(config_err(file.line("model"), "trig coefficients given for a non-trig model"));
                }
                if file.get("params").is_some() {
                    return Err(config_err(file.line("params"), "use either `params` or the trig coefficient arrays"));
                }
                let arr = |k: &str| file.reals(k).map(Option::unwrap_or_default);
                let (fc, fs, hc, hs) = (arr("f_cos")?, arr("f_sin")?, arr("h_cos")?, arr("h_sin")?);
                Some(ModelSpec::Trig { f: TrigPoly::new(fc, fs), h: TrigPoly::new(hc, hs) })
            }
            (None, false) => {
                if file.get("params").is_some() {
                    return Err(config_err(file.line("params"), "`params` without `model`"));
                }
                None
            }
        };
        let mut tol = Tolerances::default();
        for key in Tolerances::KEYS {
            if let Some(v) = file.get(&format!("tol.{key}")) {
                tol.set(key, v).map_err(|e| config_err(file.line(&format!("tol.{key}")), e))?;
            }
        }
        let svg = match file.get("svg") {
            None => false,
            Some("true") | Some("1") | Some("yes") => true,
            Some("false") | Some("0") | Some("no") => false,
            Some(v) => return Err(config_err(file.line("svg"), format!("`svg`: expected true/false, got `{v}`"))),
        };
        let mut nf = NormalFormConfig::default();
        let nf_usize = |k: &str, d: usize| file.parsed::<usize>(&format!("nf.{k}")).map(|v| v.unwrap_or(d));
        nf.r = nf_usize("r", nf.r)?;
        nf.k = nf_usize("k", nf.k)?;
        nf.z = nf_usize("z", nf.z)?;
        nf.j = nf_usize("j", nf.j)?;
        nf.limit_steps = file.parsed::<u32>("nf.limit_steps")?.unwrap_or(nf.limit_steps);
        if let Some(t) = file.rational("nf.t")? {
            nf.t = t;
        }
        nf.s = file.rationals("nf.s")?.unwrap_or_else(|| vec![Rational::zero(); nf.z]);
        nf.high = file.rationals("nf.high")?;
        if let Some(tu) = file.rational("nf.tu")? {
            nf.tu = tu;
        }
        if let Some(tv) = file.rational("nf.tv")? {
            nf.tv = tv;
        }
        nf.pair_high = file.rationals("nf.pair_high")?;
        if let Some(tv) = file.rational("nf.top_tv")? {
            nf.top_tv = tv;
        }
        Ok(Self {
            model,
            r: file.parsed("r")?,
            tol,
            seed: file.parsed("seed")?,
            count: file.parsed("count")?,
            max_degree: file.parsed("max_degree")?.unwrap_or(4),
            out: file.get("out").filter(|v| !v.is_empty()).map(PathBuf::from),
            svg,
            normal_form: nf,
        })
    }
}
