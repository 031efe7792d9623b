//! Batch front-end: JSON configuration, norm reports, split campaigns and
//! atom-file validation.
//!
//! Exit codes: `0` success, `1` parse or runtime failure (including a broken
//! reconstruction), `2` usage error (unknown tag, inconsistent parameters).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atoms::{validate_atom, AtomValidation, AtomicDecomposition};
use crate::corpus::{draw_rng, random_decomposition, DecompositionParams, Generator};
use crate::error::Error;
use crate::grid::{lp_norm, GridFunction, GridSpec, Region};
use crate::lipschitz::{lambda_gamma_norm, LipschitzOrder};
use crate::maximal::ScaleLadder;
use crate::orlicz::{hardy_quasinorm_with_ladder, lphi_star_norm, luxembourg_norm, PhiLog};
use crate::oscillation::{bmo_local_norm, bmo_norm, lmo_norm};
use crate::product::{split_bmo, split_lipschitz, verify_split_with_ladder, GridInfo, Regime, SplitReport};

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::failure(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Source of the function a norm is computed on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    /// Named generator sampled on the configured grid with draw index 0.
    Generator(Generator),
    /// Grid-function header file, relative to the config file.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSection {
    /// One of `lp`, `luxembourg`, `lphi_star`, `hardy`, `bmo`, `bmo_local`,
    /// `lmo`, `lambda_gamma`.
    pub which: String,
    pub input: InputSource,
    /// Exponent for `lp` and `hardy`.
    #[serde(default)]
    pub p: Option<f64>,
    /// Order for `lambda_gamma`.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Truncated maximal function for `hardy`.
    #[serde(default)]
    pub local: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSection {
    /// Regime tag, e.g. `p1_bmo` or `p_lt1_proj_local`.
    pub regime: String,
    pub p: f64,
    /// Defaults to `n(1/p - 1)` for `p < 1`.
    #[serde(default)]
    pub gamma: Option<f64>,
    pub draws: usize,
    /// Defaults to `random-bmo` for `p = 1` and `random-lipschitz` otherwise.
    #[serde(default)]
    pub b: Option<Generator>,
    #[serde(default)]
    pub decomposition: DecompositionParams,
    /// Scales per octave of the maximal-function ladder.
    #[serde(default = "default_density")]
    pub ladder_density: u32,
}

fn default_density() -> u32 {
    ScaleLadder::DEFAULT_PER_OCTAVE
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateSection {
    /// Decomposition file, relative to the config file.
    pub atoms: PathBuf,
}

/// A single JSON document driving one of the commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub seed: u64,
    /// Output directory, relative to the config file.
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub norm: Option<NormSection>,
    #[serde(default)]
    pub split: Option<SplitSection>,
    #[serde(default)]
    pub validate: Option<ValidateSection>,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from(".")
}

impl CampaignConfig {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> CliResult<Self> {
        let mut cfg: CampaignConfig =
            serde_json::from_str(text).map_err(|e| CliError::failure(format!("cannot parse config: {e}")))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> CliResult<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::failure(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    fn grid(&self) -> CliResult<GridSpec> {
        self.grid.ok_or_else(|| CliError::usage("config has no grid"))
    }

    fn write(&self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let dir = self.output_path();
        fs::create_dir_all(&dir).map_err(|e| CliError::failure(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::failure(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("report serializes");
    out.push(b'\n');
    out
}

/// Norm families accepted by `cmd_norm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Lp,
    Luxembourg,
    LphiStar,
    Hardy,
    Bmo,
    BmoLocal,
    Lmo,
    LambdaGamma,
}

impl NormKind {
    pub fn parse(tag: &str) -> CliResult<Self> {
        Ok(match tag {
            "lp" => NormKind::Lp,
            "luxembourg" => NormKind::Luxembourg,
            "lphi_star" => NormKind::LphiStar,
            "hardy" => NormKind::Hardy,
            "bmo" => NormKind::Bmo,
            "bmo_local" => NormKind::BmoLocal,
            "lmo" => NormKind::Lmo,
            "lambda_gamma" => NormKind::LambdaGamma,
            other => {
                return Err(CliError::usage(format!(
                    "unknown norm '{other}'; expected lp, luxembourg, lphi_star, hardy, bmo, bmo_local, lmo or lambda_gamma"
                )))
            }
        })
    }
}

/// Contents of `norm_report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOutput {
    pub which: NormKind,
    pub value: f64,
    pub grid: GridInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Argmax data of the ball- and displacement-scanning norms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

fn grid_info(spec: &GridSpec) -> GridInfo {
    GridInfo {
        n: spec.dim(),
        r: spec.halfwidth(),
        m: spec.points_per_axis(),
    }
}

fn details<T: Serialize>(v: &T) -> Option<serde_json::Value> {
    Some(serde_json::to_value(v).expect("report serializes"))
}

/// Computes the configured norm and writes `norm_report.json`.
pub fn cmd_norm(cfg: &CampaignConfig) -> CliResult<NormOutput> {
    let sec = cfg.norm.as_ref().ok_or_else(|| CliError::usage("config has no norm section"))?;
    let which = NormKind::parse(&sec.which)?;
    let f = match &sec.input {
        InputSource::Generator(g) => g.sample(&cfg.grid()?, &mut draw_rng(cfg.seed, 0))?,
        InputSource::File(p) => {
            let f = GridFunction::load(cfg.resolve(p))?;
            if let Some(g) = cfg.grid {
                if g != *f.spec() {
                    return Err(CliError::usage("input grid differs from the configured grid"));
                }
            }
            f
        }
    };
    let spec = *f.spec();
    let mut out = NormOutput {
        which,
        value: 0.0,
        grid: grid_info(&spec),
        p: None,
        gamma: None,
        details: None,
    };
    match which {
        NormKind::Lp => {
            let p = sec.p.unwrap_or(1.0);
            out.p = Some(p);
            out.value = lp_norm(&f, p, Region::Whole)?;
        }
        NormKind::Luxembourg => out.value = luxembourg_norm(&f, &PhiLog, Region::Whole)?,
        NormKind::LphiStar => out.value = lphi_star_norm(&f)?,
        NormKind::Hardy => {
            let p = sec.p.unwrap_or(1.0);
            out.p = Some(p);
            let ladder = if sec.local {
                ScaleLadder::truncated(&spec)?
            } else {
                ScaleLadder::full(&spec)
            };
            out.value = hardy_quasinorm_with_ladder(&f, p, sec.local, &ladder)?;
        }
        NormKind::Bmo | NormKind::BmoLocal | NormKind::Lmo => {
            let rep = match which {
                NormKind::Bmo => bmo_norm(&f)?,
                NormKind::BmoLocal => bmo_local_norm(&f)?,
                _ => lmo_norm(&f)?,
            };
            out.value = rep.norm;
            out.details = details(&rep);
        }
        NormKind::LambdaGamma => {
            let gamma = sec.gamma.ok_or_else(|| CliError::usage("lambda_gamma needs gamma"))?;
            let order = LipschitzOrder::new(gamma).map_err(|e| CliError::usage(e.to_string()))?;
            let rep = lambda_gamma_norm(&f, order);
            out.gamma = Some(gamma);
            out.value = rep.norm;
            out.details = details(&rep);
        }
    }
    cfg.write("norm_report.json", &to_json(&out))?;
    Ok(out)
}

/// One campaign draw with its reconstruction and moment diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrawRecord {
    pub draw: usize,
    pub report: SplitReport,
    pub atoms: usize,
    pub reconstruction_mismatches: usize,
    pub reconstruction_max_ulp: f64,
    pub max_moment_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantSummary {
    pub max: f64,
    pub median: f64,
    pub argmax_draw: usize,
}

/// Contents of `split_summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub regime: Regime,
    pub p: f64,
    pub gamma: Option<f64>,
    pub seed: u64,
    pub draws: usize,
    pub grid: GridInfo,
    #[serde(rename = "C1")]
    pub c1: ConstantSummary,
    #[serde(rename = "C2")]
    pub c2: ConstantSummary,
    /// Nodes where `fl(h1 + h2)` differs from `b · h` in any draw.
    pub reconstruction_mismatches: usize,
    pub reconstruction_max_ulp: f64,
    pub max_moment_ratio: f64,
}

/// Result of `cmd_split`: summary plus rows in draw order.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitOutput {
    pub summary: SplitSummary,
    pub rows: Vec<DrawRecord>,
    pub csv: String,
}

fn parse_regime(tag: &str) -> CliResult<Regime> {
    serde_json::from_value(serde_json::Value::String(tag.to_string()))
        .map_err(|_| CliError::usage(format!("unknown regime '{tag}'")))
}

/// Checked campaign plan derived from a split section.
#[derive(Clone, Debug)]
struct SplitPlan {
    regime: Regime,
    p: f64,
    order: Option<LipschitzOrder>,
    b: Generator,
    params: DecompositionParams,
}

fn plan_split(spec: &GridSpec, sec: &SplitSection) -> CliResult<SplitPlan> {
    let regime = parse_regime(&sec.regime)?;
    let n = spec.dim() as f64;
    let p = sec.p;
    let mut params = sec.decomposition.clone();
    if !regime.is_local() && params.local_fraction > 0.0 {
        return Err(CliError::usage(format!(
            "regime {} does not admit local atoms",
            regime.tag()
        )));
    }
    if sec.draws == 0 {
        return Err(CliError::usage("draws must be positive"));
    }
    if regime.is_p1() {
        if p != 1.0 {
            return Err(CliError::usage(format!("regime {} needs p = 1, got {p}", regime.tag())));
        }
        if sec.gamma.is_some() {
            return Err(CliError::usage("gamma is not used when p = 1"));
        }
        let b = sec.b.clone().unwrap_or(Generator::RandomBmo { target: 1.0 });
        return Ok(SplitPlan {
            regime,
            p,
            order: None,
            b,
            params,
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(CliError::usage(format!("regime {} needs 0 < p < 1, got {p}", regime.tag())));
    }
    let expected = n * (1.0 / p - 1.0);
    let gamma = sec.gamma.unwrap_or(expected);
    if (gamma - expected).abs() > 1e-12 * expected.max(1.0) {
        return Err(CliError::usage(format!("gamma = {gamma} but n(1/p - 1) = {expected}")));
    }
    let order = LipschitzOrder::new(gamma).map_err(|e| CliError::usage(e.to_string()))?;
    let natural = Regime::for_lipschitz(p, spec.dim(), regime.is_local());
    if natural != regime {
        return Err(CliError::usage(format!(
            "p = {p} in dimension {} belongs to regime {}, not {}",
            spec.dim(),
            natural.tag(),
            regime.tag()
        )));
    }
    let k = order.k();
    let min_s = if regime.uses_projection() { 2 * k } else { k };
    params.moment_order = params.moment_order.max(min_s);
    let b = sec.b.clone().unwrap_or(Generator::RandomLipschitz { gamma, target: 1.0 });
    Ok(SplitPlan {
        regime,
        p,
        order: Some(order),
        b,
        params,
    })
}

fn run_draw(spec: &GridSpec, seed: u64, draw: usize, plan: &SplitPlan, ladder: &ScaleLadder) -> CliResult<DrawRecord> {
    let mut rng = draw_rng(seed, draw as u64);
    let b = plan.b.sample(spec, &mut rng)?;
    let decomp = random_decomposition(spec, plan.p, &plan.params, &mut rng)?;
    let local = plan.regime.is_local();
    let (split, b_scale) = match plan.order {
        None => (split_bmo(&b, &decomp, local)?, bmo_local_norm(&b)?.norm),
        Some(order) => (split_lipschitz(&b, &decomp, order, local)?, lambda_gamma_norm(&b, order).norm),
    };
    let rec = split.reconstruction();
    if !rec.within_one_ulp() {
        return Err(CliError::failure(format!(
            "draw {draw}: reconstruction off by {} ulp at node {}",
            rec.max_ulp_error,
            rec.first_mismatch.unwrap_or(0)
        )));
    }
    let report = verify_split_with_ladder(&split, b_scale, &decomp, ladder)?;
    Ok(DrawRecord {
        draw,
        report,
        atoms: decomp.len(),
        reconstruction_mismatches: rec.mismatches,
        reconstruction_max_ulp: rec.max_ulp_error,
        max_moment_ratio: split.max_moment_ratio(),
    })
}

fn summarize(values: impl Iterator<Item = f64>) -> ConstantSummary {
    let v: Vec<f64> = values.collect();
    let (argmax_draw, max) = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
    let mut sorted = v.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    ConstantSummary { max, median, argmax_draw }
}

pub const SPLIT_CSV_HEADER_PREFIX: &str = "draw,seed,";

/// Runs the configured split campaign; writes `split_rows.csv` and
/// `split_summary.json`.
pub fn cmd_split(cfg: &CampaignConfig) -> CliResult<SplitOutput> {
    let sec = cfg.split.as_ref().ok_or_else(|| CliError::usage("config has no split section"))?;
    let spec = cfg.grid()?;
    let plan = plan_split(&spec, sec)?;
    if sec.ladder_density == 0 {
        return Err(CliError::usage("ladder_density must be positive"));
    }
    let ladder = if plan.regime.is_local() {
        ScaleLadder::truncated_with_density(&spec, sec.ladder_density)?
    } else {
        ScaleLadder::full_with_density(&spec, sec.ladder_density)
    };
    let rows = (0..sec.draws)
        .into_par_iter()
        .map(|i| run_draw(&spec, cfg.seed, i, &plan, &ladder))
        .collect::<CliResult<Vec<_>>>()?;

    let mut csv = format!("{SPLIT_CSV_HEADER_PREFIX}{}\n", SplitReport::CSV_HEADER);
    for r in &rows {
        csv.push_str(&format!("{},{},{}\n", r.draw, cfg.seed, r.report.csv_row()));
    }
    let summary = SplitSummary {
        regime: plan.regime,
        p: plan.p,
        gamma: plan.order.map(|o| o.gamma()),
        seed: cfg.seed,
        draws: rows.len(),
        grid: grid_info(&spec),
        c1: summarize(rows.iter().map(|r| r.report.c1)),
        c2: summarize(rows.iter().map(|r| r.report.c2)),
        reconstruction_mismatches: rows.iter().map(|r| r.reconstruction_mismatches).sum(),
        reconstruction_max_ulp: rows.iter().map(|r| r.reconstruction_max_ulp).fold(0.0, f64::max),
        max_moment_ratio: rows.iter().map(|r| r.max_moment_ratio).fold(0.0, f64::max),
    };
    cfg.write("split_rows.csv", csv.as_bytes())?;
    cfg.write("split_summary.json", &to_json(&summary))?;
    Ok(SplitOutput { summary, rows, csv })
}

/// One row of the validation table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomRow {
    pub index: usize,
    pub lambda: f64,
    pub local: bool,
    #[serde(flatten)]
    pub validation: AtomValidation,
}

/// Contents of `validate_report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub atoms: usize,
    pub passed: usize,
    pub rows: Vec<AtomRow>,
}

impl ValidateOutput {
    /// Plain-text table; the moment column shows `-` for local atoms.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:>5} {:>12} {:>5} {:>8} {:>12} {:>12} {:>6}\n",
            "atom", "lambda", "local", "support", "size_ratio", "moment_ratio", "result"
        );
        for r in &self.rows {
            let v = &r.validation;
            let moment = v.max_moment_ratio.map_or("-".to_string(), |m| format!("{m:.3e}"));
            s.push_str(&format!(
                "{:>5} {:>12.5e} {:>5} {:>8} {:>12.6} {:>12} {:>6}\n",
                r.index,
                r.lambda,
                if r.local { "yes" } else { "no" },
                if v.support_ok { "ok" } else { "leak" },
                v.size_ratio,
                moment,
                if v.passed { "pass" } else { "FAIL" }
            ));
        }
        s.push_str(&format!("{} of {} atoms passed\n", self.passed, self.atoms));
        s
    }
}

/// Validates every atom of the configured decomposition file; writes
/// `validate_report.json`.
pub fn cmd_validate(cfg: &CampaignConfig) -> CliResult<ValidateOutput> {
    let sec = cfg
        .validate
        .as_ref()
        .ok_or_else(|| CliError::usage("config has no validate section"))?;
    let path = cfg.resolve(&sec.atoms);
    let decomp = AtomicDecomposition::load(&path)
        .map_err(|e| CliError::failure(format!("cannot parse {}: {e}", path.display())))?;
    if let Some(g) = cfg.grid {
        if g != *decomp.spec() {
            return Err(CliError::usage("atom file grid differs from the configured grid"));
        }
    }
    let rows: Vec<AtomRow> = decomp
        .terms
        .iter()
        .enumerate()
        .map(|(index, (lambda, a))| AtomRow {
            index,
            lambda: *lambda,
            local: a.local,
            validation: validate_atom(a),
        })
        .collect();
    let out = ValidateOutput {
        atoms: rows.len(),
        passed: rows.iter().filter(|r| r.validation.passed).count(),
        rows,
    };
    cfg.write("validate_report.json", &to_json(&out))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> (tempfile::TempDir, CampaignConfig) {
        let dir = tempfile::tempdir().unwrap();
        let c = CampaignConfig::from_json(json, dir.path()).unwrap();
        (dir, c)
    }

    #[test]
    fn constant_bmo_is_zero() {
        let (_d, c) = cfg(r#"{"grid":{"dim":1,"halfwidth":4,"points_per_axis":129},
            "norm":{"which":"bmo","input":{"generator":{"kind":"constant","value":3.0}}}}"#);
        assert_eq!(cmd_norm(&c).unwrap().value, 0.0);
    }

    #[test]
    fn zero_function_all_norms_zero() {
        for which in ["lp", "luxembourg", "lphi_star", "hardy", "bmo", "bmo_local", "lmo", "lambda_gamma"] {
            let json = format!(
                r#"{{"grid":{{"dim":1,"halfwidth":4,"points_per_axis":65}},
                "norm":{{"which":"{which}","gamma":0.5,"input":{{"generator":{{"kind":"zero"}}}}}}}}"#
            );
            let (_d, c) = cfg(&json);
            assert_eq!(cmd_norm(&c).unwrap().value, 0.0, "{which}");
        }
    }

    #[test]
    fn unknown_norm_is_usage_error() {
        let (_d, c) = cfg(r#"{"grid":{"dim":1,"halfwidth":4,"points_per_axis":65},
            "norm":{"which":"sobolev","input":{"generator":{"kind":"zero"}}}}"#);
        assert_eq!(cmd_norm(&c).unwrap_err().code, 2);
    }

    #[test]
    fn gamma_mismatch_is_usage_error() {
        let (_d, c) = cfg(r#"{"grid":{"dim":1,"halfwidth":4,"points_per_axis":129},
            "split":{"regime":"p_lt1_mean","p":0.8,"gamma":0.5,"draws":1}}"#);
        assert_eq!(cmd_split(&c).unwrap_err().code, 2);
    }

    #[test]
    fn wrong_regime_for_p_is_usage_error() {
        let (_d, c) = cfg(r#"{"grid":{"dim":1,"halfwidth":4,"points_per_axis":129},
            "split":{"regime":"p_lt1_mean","p":0.4,"draws":1}}"#);
        assert_eq!(cmd_split(&c).unwrap_err().code, 2);
    }

    #[test]
    fn constant_b_gives_zero_c1() {
        let (_d, c) = cfg(r#"{"grid":{"dim":1,"halfwidth":4,"points_per_axis":129},"seed":3,
            "split":{"regime":"p1_bmo","p":1,"draws":1,"b":{"kind":"constant","value":2.5}}}"#);
        let out = cmd_split(&c).unwrap();
        assert_eq!(out.rows[0].report.c1, 0.0);
        assert!(out.rows[0].report.c2.is_finite());
    }

    #[test]
    fn moment_order_raised_to_regime_minimum() {
        let spec = GridSpec::new(1, 4.0, 129).unwrap();
        let sec: SplitSection = serde_json::from_str(r#"{"regime":"p_lt1_proj","p":0.4,"draws":1}"#).unwrap();
        let plan = plan_split(&spec, &sec).unwrap();
        assert_eq!(plan.params.moment_order, 2);
    }

    #[test]
    fn median_of_even_count() {
        let s = summarize([3.0, 1.0, 4.0, 2.0].into_iter());
        assert_eq!(s.median, 2.5);
        assert_eq!(s.max, 4.0);
        assert_eq!(s.argmax_draw, 2);
    }
}
