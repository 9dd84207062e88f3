//! File formats: surfaces, classes, polynomials, base-case tables, series
//! configs (JSON or TOML) and series reports.
//!
//! Everything here works with the concrete aliases `i64` lattice / `BigInt`
//! coefficients.
//!
//! Polynomials serialize as `{"coeffs": [c0, c1, ...]}`, ascending in `t`.
//! Coefficients that do not fit in `i64` are written as decimal strings;
//! both forms are accepted on input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goettsche::{hilb_epoly, rank1_colength, BettiData};
use crate::ktheory::{Class, PairingContext};
use crate::qpoly::Poly;
use crate::series::{Diagnostic, SeriesParams, SeriesResult, SeriesSpec};
use crate::surface::{Divisor, Surface};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub rho: usize,
    pub gram: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub polarization: Vec<i64>,
}

impl SurfaceJson {
    pub fn build(&self) -> Result<Surface<i64>> {
        Surface::custom(
            self.rho,
            self.gram.clone(),
            Divisor::new(self.canonical.clone()),
            Divisor::new(self.polarization.clone()),
        )
    }

    pub fn from_surface(s: &Surface<i64>) -> Self {
        Self {
            rho: s.rho(),
            gram: s.gram().to_vec(),
            canonical: s.canonical().coords().to_vec(),
            polarization: s.polarization().coords().to_vec(),
        }
    }
}

/// A preset name (`p2`, `p1xp1`, `p1xp1:N`) or an explicit description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurfaceSpec {
    Preset(String),
    Explicit(SurfaceJson),
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<Surface<i64>> {
        match self {
            SurfaceSpec::Preset(name) => surface_preset(name),
            SurfaceSpec::Explicit(j) => j.build(),
        }
    }
}

pub fn surface_preset(name: &str) -> Result<Surface<i64>> {
    match name.trim() {
        "p2" | "P2" => Ok(Surface::p2()),
        "p1xp1" => Surface::p1xp1(1),
        other => {
            let n = other
                .strip_prefix("p1xp1:")
                .and_then(|n| n.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown surface preset `{other}` (try p2 or p1xp1:N)")))?;
            Surface::p1xp1(n)
        }
    }
}

/// Reads a surface argument: a preset name, a path to a JSON file, or
/// inline JSON.
pub fn load_surface(arg: &str) -> Result<Surface<i64>> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return parse_json::<SurfaceJson>(trimmed, "surface")?.build();
    }
    if Path::new(trimmed).is_file() {
        return parse_json::<SurfaceSpec>(&read(Path::new(trimmed))?, trimmed)?.build();
    }
    surface_preset(trimmed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub r: i64,
    pub c1: Vec<i64>,
    pub chi: i64,
}

impl From<&Class<i64>> for ClassJson {
    fn from(c: &Class<i64>) -> Self {
        Self { r: c.r, c1: c.c1.coords().to_vec(), chi: c.chi }
    }
}

impl ClassJson {
    pub fn to_class(&self, ctx: &PairingContext<i64>) -> Result<Class<i64>> {
        ctx.class(self.r, &self.c1, self.chi)
    }
}

/// A class as `{"r", "c1", "chi"}`, comma syntax `"r,c1...,chi"` or a
/// label such as `"(9,-4H,-1)"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Text(String),
    Json(ClassJson),
}

impl ClassSpec {
    pub fn resolve(&self, ctx: &PairingContext<i64>) -> Result<Class<i64>> {
        match self {
            ClassSpec::Text(s) => parse_class(ctx, s),
            ClassSpec::Json(j) => j.to_class(ctx),
        }
    }
}

/// Accepts `r,c1...,chi` and label syntax, with or without parentheses
/// (`(2,H,1)`, `2,H,1`, `(2,[-1,3],1)`).
pub fn parse_class(ctx: &PairingContext<i64>, s: &str) -> Result<Class<i64>> {
    let s = s.trim();
    if s.starts_with('(') {
        return parse_label(ctx, s);
    }
    if s.contains(['H', '[']) {
        return parse_label(ctx, &format!("({s})"));
    }
    let nums: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{p}` in class `{s}`"))))
        .collect::<Result<_>>()?;
    let n = ctx.rho() + 2;
    if nums.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: nums.len() });
    }
    ctx.class(nums[0], &nums[1..n - 1], nums[n - 1])
}

fn divisor_label(d: &Divisor<i64>) -> String {
    match d.coords() {
        [0] => "0".into(),
        [1] => "H".into(),
        [-1] => "-H".into(),
        [k] => format!("{k}H"),
        coords => format!("[{}]", coords.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
    }
}

/// `(r,c1,chi)`, with `c1` written as a multiple of `H` in Picard rank one
/// and as `[a,b,...]` otherwise.
pub fn class_label(c: &Class<i64>) -> String {
    format!("({},{},{})", c.r, divisor_label(&c.c1), c.chi)
}

fn parse_h_multiple(s: &str) -> Option<i64> {
    match s.strip_suffix('H') {
        None => s.parse().ok(),
        Some("") | Some("+") => Some(1),
        Some("-") => Some(-1),
        Some(k) => k.parse().ok(),
    }
}

pub fn parse_label(ctx: &PairingContext<i64>, s: &str) -> Result<Class<i64>> {
    let bad = || Error::Parse(format!("bad class label `{s}`"));
    let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let inner: String = inner.chars().filter(|c| !c.is_whitespace()).collect();
    let first = inner.find(',').ok_or_else(bad)?;
    let last = inner.rfind(',').ok_or_else(bad)?;
    if first == last {
        return Err(bad());
    }
    let r: i64 = inner[..first].parse().map_err(|_| bad())?;
    let chi: i64 = inner[last + 1..].parse().map_err(|_| bad())?;
    let mid = &inner[first + 1..last];
    let c1: Vec<i64> = if let Some(list) = mid.strip_prefix('[').and_then(|m| m.strip_suffix(']')) {
        list.split(',').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?
    } else {
        if ctx.rho() != 1 {
            return Err(Error::Parse(format!("`{mid}` needs Picard rank one; write c1 as [a,b,...]")));
        }
        vec![parse_h_multiple(mid).ok_or_else(bad)?]
    };
    ctx.class(r, &c1, chi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Big(String),
}

impl CoeffJson {
    fn from_big(c: &BigInt) -> Self {
        c.to_i64().map_or_else(|| CoeffJson::Big(c.to_string()), CoeffJson::Int)
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            CoeffJson::Int(v) => Ok(BigInt::from(*v)),
            CoeffJson::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: Vec<CoeffJson>,
}

impl From<&Poly<BigInt>> for PolyJson {
    fn from(p: &Poly<BigInt>) -> Self {
        Self { coeffs: p.coeffs().iter().map(CoeffJson::from_big).collect() }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<Poly<BigInt>> {
        Ok(Poly::from_coeffs(coeffs_to_big(&self.coeffs)?))
    }
}

fn coeffs_to_big(c: &[CoeffJson]) -> Result<Vec<BigInt>> {
    c.iter().map(CoeffJson::to_big).collect()
}

/// Where a tabulated base polynomial comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseSource {
    /// Read off a published table of E-polynomials (wire value `paper-table`).
    #[serde(rename = "paper-table")]
    Published,
    /// Computed from Göttsche's formula.
    Goettsche,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub coeffs: Vec<CoeffJson>,
    pub source: CaseSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `base_cases.json`: class label → polynomial with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BaseCaseTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub cases: BTreeMap<String, BaseCase>,
}

impl BaseCaseTable {
    pub fn load(path: &Path) -> Result<Self> {
        parse_json(&read(path)?, &path.display().to_string())
    }

    pub fn get(&self, label: &str) -> Result<(&BaseCase, Poly<BigInt>)> {
        let case = self.cases.get(label).ok_or_else(|| Error::BaseCase {
            label: label.into(),
            reason: "not in the base-case table".into(),
        })?;
        Ok((case, Poly::from_coeffs(coeffs_to_big(&case.coeffs)?)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transport {
    /// The tabulated class itself.
    Identity,
    /// The dual class, which has the same E-polynomial.
    Dual,
}

/// One base entry in a series config. Exactly one of `coeffs`, `poly`,
/// `case`, `goettsche` must be given.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<CoeffJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    /// Label into the base-case table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<Transport>,
    /// `e(Hilb^n X)`; the class at this index must have rank one and
    /// colength `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goettsche: Option<usize>,
    /// Free-form provenance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Text(String),
    Entry(BaseEntry),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub surface: SurfaceSpec,
    pub gamma: ClassSpec,
    pub gamma0: ClassSpec,
    pub k_min: i64,
    /// Path to a base-case table, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_cases: Option<String>,
    pub bases: BTreeMap<String, BaseSpec>,
}

/// A config together with the directory its relative paths refer to.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: SeriesConfig,
    pub dir: PathBuf,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl SeriesConfig {
    /// Parses JSON, or TOML when `toml` is set.
    pub fn parse(text: &str, toml: bool) -> Result<Self> {
        if toml {
            ::toml::from_str(text).map_err(|e| Error::Parse(format!("series config: {e}")))
        } else {
            parse_json(text, "series config")
        }
    }

    /// Chooses the format from the file extension.
    pub fn load(path: &Path) -> Result<LoadedConfig> {
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        let config = Self::parse(&read(path)?, is_toml)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig { config, dir })
    }
}

impl LoadedConfig {
    pub fn base_case_table(&self) -> Result<Option<BaseCaseTable>> {
        self.config.base_cases.as_ref().map(|p| BaseCaseTable::load(&self.dir.join(p))).transpose()
    }

    pub fn build(&self) -> Result<SeriesSpec<i64, BigInt>> {
        build_spec(&self.config, self.base_case_table()?.as_ref())
    }
}

fn resolve_base(
    ctx: &PairingContext<i64>,
    class: &Class<i64>,
    k: i64,
    spec: &BaseSpec,
    table: Option<&BaseCaseTable>,
) -> Result<Poly<BigInt>> {
    let entry = match spec {
        BaseSpec::Text(s) => return s.parse(),
        BaseSpec::Entry(e) => e,
    };
    let given = [entry.coeffs.is_some(), entry.poly.is_some(), entry.case.is_some(), entry.goettsche.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::Parse(format!("base k = {k}: give exactly one of coeffs, poly, case, goettsche")));
    }
    if let Some(c) = &entry.coeffs {
        return Ok(Poly::from_coeffs(coeffs_to_big(c)?));
    }
    if let Some(p) = &entry.poly {
        return p.parse();
    }
    if let Some(n) = entry.goettsche {
        let colength = if class.r == 1 { Some(rank1_colength(ctx, &class.c1, class.chi)?) } else { None };
        if colength != Some(n as i64) {
            return Err(Error::BaseCase {
                label: class_label(class),
                reason: format!("not a rank-one class of colength {n}"),
            });
        }
        return Ok(hilb_epoly(&BettiData::rational(ctx.rho()), n));
    }
    let label = entry.case.as_deref().unwrap_or_default();
    let table = table.ok_or_else(|| Error::Io(format!("base k = {k} refers to `{label}` but no base_cases file is set")))?;
    let (_, poly) = table.get(label)?;
    let tabulated = parse_label(ctx, label)?;
    let transported = match entry.transport.unwrap_or(Transport::Identity) {
        Transport::Identity => tabulated,
        Transport::Dual => ctx.dual(&tabulated)?,
    };
    if &transported != class {
        return Err(Error::BaseCase {
            label: label.into(),
            reason: format!("transports to {} but index {k} is {}", class_label(&transported), class_label(class)),
        });
    }
    Ok(poly)
}

pub fn build_spec(config: &SeriesConfig, table: Option<&BaseCaseTable>) -> Result<SeriesSpec<i64, BigInt>> {
    let ctx = PairingContext::new(config.surface.build()?);
    let gamma = config.gamma.resolve(&ctx)?;
    let gamma0 = config.gamma0.resolve(&ctx)?;
    let mut bases = BTreeMap::new();
    for (key, spec) in &config.bases {
        let k: i64 = key.trim().parse().map_err(|_| Error::Parse(format!("base index `{key}` is not an integer")))?;
        let class = &gamma + &gamma0.scale(k);
        bases.insert(k, resolve_base(&ctx, &class, k, spec, table)?);
    }
    SeriesSpec::new(ctx, gamma, gamma0, config.k_min, bases)
}

/// Serialized form of a solved series. Maps are keyed by `k`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub params: SeriesParams,
    pub k_min: i64,
    pub classes: BTreeMap<i64, String>,
    pub values: BTreeMap<i64, PolyJson>,
    pub zero_strata: BTreeMap<i64, PolyJson>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SeriesReport {
    pub fn new(name: Option<String>, spec: &SeriesSpec<i64, BigInt>, result: &SeriesResult<BigInt>) -> Self {
        let poly_map = |m: &BTreeMap<i64, Poly<BigInt>>| m.iter().map(|(k, p)| (*k, PolyJson::from(p))).collect();
        Self {
            name,
            params: result.params,
            k_min: result.k_min,
            classes: result.values.keys().map(|&k| (k, class_label(&spec.class_at(k)))).collect(),
            values: poly_map(&result.values),
            zero_strata: poly_map(&result.zero_strata),
            diagnostics: result.diagnostics.clone(),
        }
    }

    pub fn values(&self) -> Result<BTreeMap<i64, Poly<BigInt>>> {
        self.values.iter().map(|(k, p)| Ok((*k, p.to_poly()?))).collect()
    }
}
