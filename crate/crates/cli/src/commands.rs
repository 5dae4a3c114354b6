use anyhow::Result;
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use painleve_core::geometry::{
    curve_gamma_r, lemniscate_boundary, nu_hat, szego_curve_z, unfold_curve, CurveSample, ModelParams,
};
use painleve_core::mp::Precision;
use painleve_core::orthopoly::{monic_orthogonal, OrthoOptions, PolynomialRecord};
use painleve_core::tau::{refine_tau_zero, s_grid, tau_scan, EpsilonPolicy, TauParams};
use painleve_core::zeros::{
    compare_level_forms, corrected_zero_curve, extract, link_gaps, polynomial_roots, unfold_roots,
    zero_curve_distance, AsymptoticExtract, CorrectedCurveOptions, DistanceStats, LevelExponent, LevelFit,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::output::{csv, points_csv, Sink};
use crate::{BadInput, Ctx, Format};

/// Fill in defaults and check the combination of options before dispatch.
pub trait Resolve {
    fn resolve(&mut self) -> Result<(), BadInput>;
}

fn bad<T>(msg: impl Into<String>) -> Result<T, BadInput> {
    Err(BadInput(msg.into()))
}

// ---------------------------------------------------------------- tau

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsArg {
    /// ε = max(floor, −s)
    Floored,
    /// ε = max(0, −s)
    Unfloored,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct TauArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Half the Gauss–Hermite order.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum)]
    pub eps_policy: Option<EpsArg>,
    #[arg(long)]
    pub eps_floor: Option<f64>,
    /// Bisect every sign change down to 1e-10.
    #[arg(long)]
    pub refine: bool,
    /// Output file stem.
    #[arg(long)]
    pub name: Option<String>,
}

impl Resolve for TauArgs {
    fn resolve(&mut self) -> Result<(), BadInput> {
        self.gamma.get_or_insert(0.1);
        self.n.get_or_insert(30);
        self.s_min.get_or_insert(-8.0);
        self.s_max.get_or_insert(8.0);
        self.step.get_or_insert(0.02);
        self.eps_policy.get_or_insert(EpsArg::Floored);
        self.eps_floor.get_or_insert(0.5);
        self.name.get_or_insert_with(|| "tau".into());
        if !(self.eps_floor.unwrap() > 0.0) {
            return bad("--eps-floor must be positive");
        }
        let err = |e: painleve_core::Error| BadInput(e.to_string());
        TauParams::with_policy(self.s_min.unwrap(), self.gamma.unwrap(), self.n.unwrap(), self.policy()).map_err(err)?;
        s_grid(self.s_min.unwrap(), self.s_max.unwrap(), self.step.unwrap()).map_err(err)?;
        Ok(())
    }
}

impl TauArgs {
    fn policy(&self) -> EpsilonPolicy {
        match self.eps_policy.unwrap_or(EpsArg::Floored) {
            EpsArg::Unfloored => EpsilonPolicy::Unfloored,
            EpsArg::Floored => EpsilonPolicy::Floored(self.eps_floor.unwrap_or(0.5)),
        }
    }
}

#[derive(Serialize)]
struct TauSidecar<'a> {
    config: &'a TauArgs,
    policy: EpsilonPolicy,
    points: usize,
    brackets: &'a [(f64, f64)],
    zeros: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<Vec<[f64; 3]>>,
}

pub fn cmd_tau(ctx: &Ctx, a: &TauArgs) -> Result<()> {
    let (g, n) = (a.gamma.unwrap(), a.n.unwrap());
    let series = tau_scan(g, n, a.s_min.unwrap(), a.s_max.unwrap(), a.step.unwrap(), a.policy())?;
    let zeros = if a.refine {
        Some(series.brackets.iter().map(|&b| refine_tau_zero(g, n, b, a.policy())).collect::<painleve_core::Result<Vec<_>>>()?)
    } else {
        None
    };
    let rows: Vec<[f64; 3]> = series.s.iter().zip(&series.tau).map(|(s, t)| [*s, *t, t.atan()]).collect();
    let mut sink = Sink::new(&ctx.out_dir)?;
    let stem = a.name.as_deref().unwrap();
    let mut side = TauSidecar { config: a, policy: a.policy(), points: rows.len(), brackets: &series.brackets, zeros, data: None };
    match ctx.format {
        Format::Csv => {
            sink.text(&format!("{stem}.csv"), &csv(&["s", "tau", "atan_tau"], rows.iter().map(|r| r.to_vec())))?;
        }
        Format::Json => side.data = Some(rows),
    }
    sink.json(&format!("{stem}.json"), &side)?;
    println!(
        "tau: γ = {g}, n = {n}, {} points, {} sign change(s){}",
        side.points,
        series.brackets.len(),
        series.brackets.first().map(|b| format!(", first in [{:.4}, {:.4}]", b.0, b.1)).unwrap_or_default()
    );
    report_files(&sink);
    Ok(())
}

fn report_files(sink: &Sink) {
    for p in &sink.written {
        println!("  wrote {}", p.display());
    }
}

// ---------------------------------------------------------------- zeros

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentArg {
    /// k^{(1+γ)/2}
    HalfOnePlusGamma,
    /// k^{1/2+γ}
    HalfPlusGamma,
}

impl From<ExponentArg> for LevelExponent {
    fn from(e: ExponentArg) -> Self {
        match e {
            ExponentArg::HalfOnePlusGamma => LevelExponent::HalfOnePlusGamma,
            ExponentArg::HalfPlusGamma => LevelExponent::HalfPlusGamma,
        }
    }
}

/// Model selection shared by `zeros` and `extract`.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ModelArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Total "time" T (t_c = √(T/d)).
    #[arg(long = "big-t")]
    pub big_t: Option<f64>,
    /// z₀ = t_c²/t² directly.
    #[arg(long, conflicts_with_all = ["t", "critical"])]
    pub z0: Option<f64>,
    #[arg(long, conflicts_with = "critical")]
    pub t: Option<f64>,
    /// t = t_c (z₀ = 1); the default when neither --z0 nor --t is given.
    #[arg(long)]
    pub critical: bool,
    /// Working decimal digits for moments, Hankel solve and roots [default: automatic].
    #[arg(long)]
    pub digits: Option<u32>,
}

impl ModelArgs {
    fn fill(&mut self) -> Result<(), BadInput> {
        self.d.get_or_insert(3);
        self.ell.get_or_insert(0);
        self.big_t.get_or_insert(1.0);
        if [self.z0.is_some(), self.t.is_some()].iter().filter(|&&b| b).count() + self.critical as usize > 1 {
            return bad("give at most one of --z0, --t, --critical");
        }
        if self.z0.is_none() && self.t.is_none() {
            self.critical = true;
        }
        if self.digits == Some(0) {
            return bad("--digits must be positive");
        }
        self.model(1).map(|_| ())
    }

    fn model(&self, k: usize) -> Result<ModelParams, BadInput> {
        let (d, ell, bt) = (self.d.unwrap(), self.ell.unwrap(), self.big_t.unwrap());
        let r = match (self.z0, self.t) {
            (Some(z0), _) => ModelParams::with_z0(d, ell, bt, k, z0),
            (_, Some(t)) => ModelParams::new(d, ell, t, bt, k),
            _ => ModelParams::critical(d, ell, bt, k),
        };
        r.map_err(|e| BadInput(e.to_string()))
    }

    fn options(&self) -> OrthoOptions {
        OrthoOptions { precision: self.digits.map(Precision::Digits), ..Default::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ZerosArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub k: Option<usize>,
    /// Also write λ-plane zeros (always on when γ = 0).
    #[arg(long)]
    pub unfold: bool,
    /// Points on Γ₁.
    #[arg(long)]
    pub curve_points: Option<usize>,
    /// Rays for the corrected curve.
    #[arg(long)]
    pub corrected_points: Option<usize>,
    #[arg(long, value_enum)]
    pub exponent: Option<ExponentArg>,
    #[arg(long)]
    pub name: Option<String>,
}

impl Resolve for ZerosArgs {
    fn resolve(&mut self) -> Result<(), BadInput> {
        self.model.fill()?;
        let k = *self.k.get_or_insert(40);
        if k == 0 {
            return bad("--k must be positive");
        }
        self.curve_points.get_or_insert(2048);
        self.corrected_points.get_or_insert(512);
        self.exponent.get_or_insert(ExponentArg::HalfOnePlusGamma);
        self.name.get_or_insert_with(|| "zeros".into());
        Ok(())
    }
}

#[derive(Serialize)]
struct ZerosSidecar<'a> {
    config: &'a ZerosArgs,
    model: ModelSummary,
    roots: usize,
    max_modulus: f64,
    max_residual: f64,
    clusters: &'a [Vec<usize>],
    distance_gamma1: Option<DistanceStats>,
    extraction: Option<AsymptoticExtract>,
    extraction_error: Option<String>,
    corrected: Option<CorrectedSummary>,
    level_fits: Vec<LevelFit>,
    polynomial: PolynomialRecord,
}

#[derive(Serialize)]
struct ModelSummary {
    params: ModelParams,
    n: usize,
    gamma: f64,
    z0: f64,
    t_c: f64,
    scaling: f64,
}

impl ModelSummary {
    fn of(m: &ModelParams) -> Self {
        ModelSummary { params: *m, n: m.n(), gamma: m.gamma(), z0: m.z0(), t_c: m.t_c(), scaling: m.scaling() }
    }
}

#[derive(Serialize)]
struct CorrectedSummary {
    points: usize,
    components: usize,
    closed: bool,
    distance: Option<DistanceStats>,
}

fn curve_file(sink: &mut Sink, name: &str, c: &CurveSample, format: Format) -> Result<()> {
    match format {
        Format::Csv => sink.text(&format!("{name}.csv"), &c.to_csv()),
        Format::Json => sink.json(&format!("{name}.json"), c),
    }
}

pub fn cmd_zeros(ctx: &Ctx, a: &ZerosArgs) -> Result<()> {
    let k = a.k.unwrap();
    let m = a.model.model(k)?;
    let (gamma, z0) = (m.gamma(), m.z0());
    let p = monic_orthogonal(k, z0, gamma, &a.model.options())?;
    let zs = polynomial_roots(&p)?;
    let g1 = curve_gamma_r(1.0, z0, a.curve_points.unwrap())?;
    let distance_gamma1 = zero_curve_distance(&zs, &g1, z0).ok();

    let (mut extraction, mut extraction_error, mut corrected, mut level_fits) = (None, None, None, Vec::new());
    let mut corrected_curve = None;
    if gamma > 0.0 {
        match extract(&p, gamma, z0) {
            Ok(ex) => {
                let opts = CorrectedCurveOptions {
                    z0,
                    points: a.corrected_points.unwrap(),
                    exponent: a.exponent.unwrap().into(),
                };
                let cc = corrected_zero_curve(k, gamma, ex.zu.mean, &opts)?;
                corrected = Some(CorrectedSummary {
                    points: cc.len(),
                    components: cc.components,
                    closed: cc.closed,
                    distance: zero_curve_distance(&zs, &cc, z0).ok(),
                });
                level_fits = compare_level_forms(&zs, z0, gamma, ex.zu.mean);
                corrected_curve = Some(cc);
                extraction = Some(ex);
            }
            Err(e) if !e.is_input() => return Err(e.into()),
            Err(e) => extraction_error = Some(e.to_string()),
        }
    }

    let stem = a.name.as_deref().unwrap();
    let mut sink = Sink::new(&ctx.out_dir)?;
    match ctx.format {
        Format::Csv => sink.text(&format!("{stem}_roots.csv"), &zs.to_csv())?,
        Format::Json => sink.json(&format!("{stem}_roots.json"), &zs)?,
    }
    curve_file(&mut sink, &format!("{stem}_gamma1"), &g1, ctx.format)?;
    if let Some(cc) = &corrected_curve {
        curve_file(&mut sink, &format!("{stem}_corrected"), cc, ctx.format)?;
    }
    if a.unfold || gamma == 0.0 {
        let lam = unfold_roots(&zs, m.t, m.d, m.ell)?;
        sink.text(&format!("{stem}_lambda.csv"), &points_csv(&lam))?;
    }
    let side = ZerosSidecar {
        config: a,
        model: ModelSummary::of(&m),
        roots: zs.roots.len(),
        max_modulus: zs.max_modulus(),
        max_residual: zs.max_residual(),
        clusters: &zs.clusters,
        distance_gamma1,
        extraction,
        extraction_error,
        corrected,
        level_fits,
        polynomial: p.record(),
    };
    sink.json(&format!("{stem}.json"), &side)?;
    println!(
        "zeros: k = {k}, γ = {gamma:.6}, z₀ = {z0:.6}: {} roots, max|z| = {:.4}, max residual {:.1e}",
        side.roots, side.max_modulus, side.max_residual
    );
    if let Some(d) = &side.distance_gamma1 {
        println!("  distance to Γ₁ (outside the exclusion disk): max {:.4}, mean {:.4}, {} roots", d.max, d.mean, d.count);
    }
    if let Some(d) = side.corrected.as_ref().and_then(|c| c.distance.as_ref()) {
        println!("  distance to corrected curve: max {:.4}, mean {:.4}", d.max, d.mean);
    }
    report_files(&sink);
    Ok(())
}

// ---------------------------------------------------------------- curve

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
#[command(group = clap::ArgGroup::new("kind").args(["szego", "lemniscate", "gamma_r"]))]
pub struct CurveArgs {
    /// Szegő curve |z e^{1−z}| = 1 with the ν̂ density.
    #[arg(long)]
    pub szego: bool,
    /// Boundary of the droplet in the λ-plane.
    #[arg(long)]
    pub lemniscate: bool,
    /// Contour Γ_r for this r.
    #[arg(long)]
    pub gamma_r: Option<f64>,
    /// Also pull the Szegő curve back to the λ-plane.
    #[arg(long)]
    pub unfold: bool,
    #[arg(short = 'M', long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tc: Option<f64>,
    #[arg(long)]
    pub z0: Option<f64>,
    #[arg(long)]
    pub name: Option<String>,
}

impl Resolve for CurveArgs {
    fn resolve(&mut self) -> Result<(), BadInput> {
        let kinds = self.szego as usize + self.lemniscate as usize + self.gamma_r.is_some() as usize;
        if kinds == 0 {
            self.szego = true;
        } else if kinds > 1 {
            return bad("choose one of --szego, --lemniscate, --gamma-r");
        }
        self.points.get_or_insert(512);
        self.d.get_or_insert(1);
        self.tc.get_or_insert(1.0);
        if self.lemniscate {
            self.t.get_or_insert(1.0);
        }
        if self.gamma_r.is_some() {
            self.z0.get_or_insert(1.0);
        }
        self.name.get_or_insert_with(|| "curve".into());
        Ok(())
    }
}

pub fn cmd_curve(ctx: &Ctx, a: &CurveArgs) -> Result<()> {
    let (m, d, tc) = (a.points.unwrap(), a.d.unwrap(), a.tc.unwrap());
    let mut curve = if a.lemniscate {
        lemniscate_boundary(a.t.unwrap(), tc, d, m)?
    } else if let Some(r) = a.gamma_r {
        curve_gamma_r(r, a.z0.unwrap(), m)?
    } else {
        let mut s = szego_curve_z(m)?;
        s.density = Some(nu_hat(&s, d)?.density);
        s
    };
    if a.unfold && a.szego {
        curve = unfold_curve(&curve, tc, d)?;
    }
    let stem = a.name.as_deref().unwrap();
    let mut sink = Sink::new(&ctx.out_dir)?;
    curve_file(&mut sink, stem, &curve, ctx.format)?;
    #[derive(Serialize)]
    struct Side<'a> {
        config: &'a CurveArgs,
        points: usize,
        components: usize,
        closed: bool,
        max_residual: f64,
    }
    let side = Side { config: a, points: curve.len(), components: curve.components, closed: curve.closed, max_residual: curve.max_residual() };
    if ctx.format == Format::Csv {
        sink.json(&format!("{stem}.json"), &side)?;
    }
    println!("curve: {} points, {} component(s), max residual {:.1e}", side.points, side.components, side.max_residual);
    report_files(&sink);
    Ok(())
}

// ---------------------------------------------------------------- extract

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ExtractArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Off-critical sweep: z₀ = 1/(1 + 𝒮/√k) for each value (overrides --z0/--t).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s_values: Option<Vec<f64>>,
    #[arg(long)]
    pub name: Option<String>,
}

impl Resolve for ExtractArgs {
    fn resolve(&mut self) -> Result<(), BadInput> {
        if self.s_values.is_some() && (self.model.z0.is_some() || self.model.t.is_some()) {
            return bad("--s-values fixes z₀; drop --z0 / --t");
        }
        self.model.fill()?;
        let ks = self.ks.get_or_insert_with(|| vec![40, 60, 70]);
        if ks.is_empty() || ks.contains(&0) {
            return bad("--ks needs positive degrees");
        }
        if ks.windows(2).any(|w| w[1] <= w[0]) {
            return bad("--ks must be strictly increasing");
        }
        self.name.get_or_insert_with(|| "extract".into());
        Ok(())
    }
}

pub fn extraction_rows(a: &ExtractArgs) -> Result<Vec<AsymptoticExtract>> {
    let ks = a.ks.as_ref().unwrap();
    let sweeps: Vec<Option<f64>> = match &a.s_values {
        Some(v) => v.iter().map(|s| Some(*s)).collect(),
        None => vec![None],
    };
    let mut out = Vec::new();
    for s in sweeps {
        let mut rows = Vec::new();
        for &k in ks {
            let m = a.model.model(k)?;
            let z0 = match s {
                Some(s) => 1.0 / (1.0 + s / (k as f64).sqrt()),
                None => m.z0(),
            };
            let p = monic_orthogonal(k, z0, m.gamma(), &a.model.options())?;
            rows.push(extract(&p, m.gamma(), z0)?);
        }
        link_gaps(&mut rows);
        out.extend(rows);
    }
    Ok(out)
}

pub fn cmd_extract(ctx: &Ctx, a: &ExtractArgs) -> Result<()> {
    let rows = extraction_rows(a)?;
    let stem = a.name.as_deref().unwrap();
    let mut sink = Sink::new(&ctx.out_dir)?;
    let nan = f64::NAN;
    match ctx.format {
        Format::Csv => sink.text(
            &format!("{stem}.csv"),
            &csv(
                &["k", "z0", "S", "h_re", "h_im", "h_dispersion", "zu_re", "zu_im", "zu_dispersion", "h_gap", "zu_gap"],
                rows.iter().map(|r| {
                    vec![
                        r.k as f64, r.z0, r.s, r.h.mean.re, r.h.mean.im, r.h.dispersion, r.zu.mean.re, r.zu.mean.im,
                        r.zu.dispersion, r.h_gap.unwrap_or(nan), r.zu_gap.unwrap_or(nan),
                    ]
                }),
            ),
        )?,
        Format::Json => {}
    }
    #[derive(Serialize)]
    struct Side<'a> {
        config: &'a ExtractArgs,
        rows: &'a [AsymptoticExtract],
    }
    sink.json(&format!("{stem}.json"), &Side { config: a, rows: &rows })?;
    println!("{:>4} {:>9} {:>8} {:>24} {:>7} {:>24} {:>7}", "k", "z0", "S", "H", "disp", "Z/U", "disp");
    for r in &rows {
        println!(
            "{:>4} {:>9.6} {:>8.4} {:>24} {:>7.4} {:>24} {:>7.4}",
            r.k, r.z0, r.s, fmt_c(r.h.mean), r.h.dispersion, fmt_c(r.zu.mean), r.zu.dispersion
        );
    }
    report_files(&sink);
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

// ---------------------------------------------------------------- seed-figures

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SeedArgs {
    /// Skip the extended-precision k = 40/60/70 zero sets (the slow part).
    #[arg(long)]
    pub skip_zeros: bool,
}

impl Resolve for SeedArgs {
    fn resolve(&mut self) -> Result<(), BadInput> {
        Ok(())
    }
}

fn sub(ctx: &Ctx, dir: &Path) -> Ctx {
    Ctx { globals: ctx.globals.clone(), out_dir: dir.to_path_buf(), format: ctx.format }
}

pub fn cmd_seed(ctx: &Ctx, a: &SeedArgs) -> Result<()> {
    let dir = ctx.out_dir.join("figures");
    let c = sub(ctx, &dir);
    let mut done: Vec<String> = Vec::new();
    let mut tau = |name: &str, gamma: f64, n: usize, lo: f64, hi: f64, step: f64| -> Result<()> {
        let mut t = TauArgs {
            gamma: Some(gamma),
            n: Some(n),
            s_min: Some(lo),
            s_max: Some(hi),
            step: Some(step),
            name: Some(name.into()),
            ..Default::default()
        };
        t.resolve()?;
        cmd_tau(&c, &t)?;
        done.push(name.into());
        Ok(())
    };
    for g in [0.1, 0.5, 0.9] {
        tau(&format!("tau_g{g}_n30"), g, 30, -8.0, 8.0, 0.02)?;
        tau(&format!("tau_g{g}_n80"), g, 80, -8.0, 8.0, 0.02)?;
    }
    tau("tau_g0.1_n150_extended", 0.1, 150, -5.0, 30.0, 0.05)?;

    let mut curve = |args: CurveArgs| -> Result<()> {
        let mut args = args;
        args.resolve()?;
        cmd_curve(&c, &args)?;
        done.push(args.name.unwrap());
        Ok(())
    };
    for t in [0.5, 1.0, 2.0] {
        curve(CurveArgs { lemniscate: true, d: Some(2), t: Some(t), points: Some(512), name: Some(format!("droplet_d2_t{t}")), ..Default::default() })?;
    }
    curve(CurveArgs { lemniscate: true, d: Some(5), t: Some(1.0), points: Some(1024), name: Some("lemniscate_d5".into()), ..Default::default() })?;
    curve(CurveArgs { szego: true, unfold: true, d: Some(5), points: Some(1024), name: Some("level_curve_d5".into()), ..Default::default() })?;
    curve(CurveArgs { szego: true, points: Some(256), name: Some("szego_nu_hat".into()), ..Default::default() })?;
    for r in [0.3, 0.5, 0.7, 1.0] {
        curve(CurveArgs { gamma_r: Some(r), z0: Some(1.0), points: Some(512), name: Some(format!("gamma_r{r}_z0_1")), ..Default::default() })?;
    }

    if !a.skip_zeros {
        for k in [40usize, 60, 70] {
            let mut z = ZerosArgs {
                model: ModelArgs { d: Some(3), ell: Some(0), z0: Some(1.0), ..Default::default() },
                k: Some(k),
                unfold: true,
                name: Some(format!("zeros_d3_k{k}")),
                ..Default::default()
            };
            z.resolve()?;
            cmd_zeros(&c, &z)?;
            done.push(z.name.unwrap());
        }
    }
    let mut sink = Sink::new(&dir)?;
    sink.json("manifest.json", &done)?;
    println!("seed-figures: {} datasets in {}", done.len(), dir.display());
    Ok(())
}
