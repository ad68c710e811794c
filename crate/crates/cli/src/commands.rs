//! The experiment commands. Each returns the files it produced (name →
//! bytes); results are pure functions of the configuration and the code
//! version, so they are cached whole and, for long searches, per part.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use rug::Float;
use serde::Serialize;
use serde_json::{json, Value};

use hgzeros::asymptotics::{locus_fit, locus_predict, LocusLaw};
use hgzeros::homotopy::{track_path, verify_monotone_descent};
use hgzeros::mcurve::{compare_to_zeros, local_maxima, m_curve};
use hgzeros::models::{phi_term, xi_truncated, Family, FunctionSpec};
use hgzeros::precision::{format_real, parse_real, to_decimal};
use hgzeros::zeros::{difference_table, weak_conjecture_audit_with, AuditOptions, Rectangle, WeakConjectureReport, ZeroFinder, ZeroList};
use hgzeros::{Error, PrecisionContext, Real};

use crate::cache::{hash_hex, key_of, Files, ResultCache, ALGORITHM_VERSION};
use crate::config::{family_spec, CacheMode, Common};
use crate::report::UsageError;

pub const DEFAULT_TILE: f64 = 25.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawArg {
    Gamma,
    Gsum,
    Mahler,
}

/// Stores for final results and for resumable partial results.
pub struct Stores {
    pub results: ResultCache,
    pub partial: ResultCache,
}

impl Stores {
    pub fn for_common(c: &Common) -> Self {
        let results = ResultCache::from_env(c.cache);
        Self::with_results(results, &c.out)
    }

    /// Partial results go to the cache when it is writable, otherwise to a
    /// checkpoint directory under the output directory.
    pub fn with_results(results: ResultCache, out: &Path) -> Self {
        let partial = if results.mode() == CacheMode::ReadWrite {
            results.clone()
        } else {
            ResultCache::at(out.join(".checkpoints"), CacheMode::ReadWrite)
        };
        Self { results, partial }
    }
}

fn spec_value(spec: &FunctionSpec) -> anyhow::Result<Value> {
    Ok(serde_json::from_str(&spec.to_json()?)?)
}

pub fn spec_hash(spec: &FunctionSpec) -> anyhow::Result<String> {
    Ok(hash_hex(spec_value(spec)?.to_string().as_bytes()))
}

fn key(command: &str, spec: Option<&FunctionSpec>, ctx: Option<&PrecisionContext>, params: Value) -> anyhow::Result<String> {
    Ok(key_of(&json!({
        "algorithm": ALGORITHM_VERSION,
        "command": command,
        "spec": match spec { Some(s) => spec_value(s)?, None => Value::Null },
        "digits": ctx.map(|c| c.digits()),
        "guard": ctx.map(|c| c.guard_digits()),
        "params": params,
    })))
}

fn pretty<T: Serialize>(v: &T) -> anyhow::Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn manifest(command: &str, spec: Option<&FunctionSpec>, ctx: Option<&PrecisionContext>, params: Value, files: &Files) -> anyhow::Result<Vec<u8>> {
    pretty(&json!({
        "command": command,
        "algorithm_version": ALGORITHM_VERSION,
        "spec_hash": match spec { Some(s) => Value::String(spec_hash(s)?), None => Value::Null },
        "digits": ctx.map(|c| c.digits()),
        "params": params,
        "outputs": files.keys().collect::<Vec<_>>(),
    }))
}

fn zero_files(prefix: &str, zl: &ZeroList, files: &mut Files) -> anyhow::Result<()> {
    let mut csv = Vec::new();
    zl.write_csv(&mut csv)?;
    files.insert(format!("{prefix}.csv"), csv);
    let mut json = zl.to_json()?;
    json.push('\n');
    files.insert(format!("{prefix}.json"), json.into_bytes());
    Ok(())
}

fn read_zero_file(path: &Path) -> anyhow::Result<ZeroList> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        ZeroList::from_json(&text)
    } else {
        ZeroList::read_csv(text.as_bytes())
    };
    parsed.map_err(|e| UsageError::new(format!("{}: {e}", path.display())).into())
}

/// Splits `rect` into vertical tiles no wider than `tile`, isolates each
/// (checkpointed), merges, and checks the merged count against the winding
/// number of the whole rectangle.
pub fn isolate_tiled(spec: &FunctionSpec, ctx: &PrecisionContext, rect: &Rectangle, tile: f64, stores: &Stores) -> anyhow::Result<ZeroList> {
    if !(tile > 0.0) {
        bail!(UsageError::new("tile width must be positive"));
    }
    let finder = ZeroFinder::new(spec, ctx)?;
    let bits = ctx.bits();
    let width = rect.width();
    let n = (width.to_f64() / tile).ceil().max(1.0) as u32;
    let edge = |k: u32| -> Real {
        if k == 0 {
            rect.x_min.clone()
        } else if k == n {
            rect.x_max.clone()
        } else {
            Float::with_val(bits, &rect.x_min + Float::with_val(bits, &width * k) / n)
        }
    };
    let mut all = Vec::new();
    for k in 0..n {
        let sub = Rectangle::new(edge(k), rect.y_min.clone(), edge(k + 1), rect.y_max.clone())?;
        let sub_key = key("zeros-tile", Some(spec), Some(ctx), serde_json::to_value(&sub)?)?;
        let files = stores.partial.get_or_compute(&sub_key, || {
            log::info!("isolating zeros in tile {}/{n}: {sub}", k + 1);
            let zl = finder.isolate_zeros(&sub)?;
            let mut f = Files::new();
            f.insert("zeros.json".into(), zl.to_json()?.into_bytes());
            Ok(f)
        })?;
        let text = String::from_utf8(files["zeros.json"].clone())?;
        all.extend(ZeroList::from_json(&text)?.zeros);
    }
    all.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
    // tiles grown around a zero on a shared edge both report it
    let tol = 10f64.powi(-(ctx.digits() as i32) / 2);
    let mut merged: Vec<_> = Vec::with_capacity(all.len());
    for z in all {
        let scale = z.location.abs().to_f64().max(1.0);
        let dup = merged
            .iter()
            .any(|m: &hgzeros::zeros::ZeroRecord| (&m.location - &z.location).abs().to_f64() <= tol * scale);
        if !dup {
            merged.push(z);
        }
    }
    if n == 1 {
        return Ok(ZeroList::new(merged, Some(rect.clone()))?);
    }
    let (count, used) = finder.winding_number_perturbed(rect)?;
    merged.retain(|z| used.contains(&z.location));
    if merged.len() as i64 != count {
        return Err(Error::Invariant(format!("tiles found {} zeros, the winding number of {used} is {count}", merged.len())).into());
    }
    Ok(ZeroList::new(merged, Some(used))?)
}

pub fn cmd_zeros(c: &Common, tile: f64, stores: &Stores) -> anyhow::Result<Files> {
    let spec = c.spec()?;
    let ctx = c.context(&spec)?;
    let rect = c.rect(ctx.bits())?;
    let params = json!({ "rect": serde_json::to_value(&rect)?, "tile": tile });
    let k = key("zeros", Some(&spec), Some(&ctx), params.clone())?;
    stores.results.get_or_compute(&k, || {
        let zl = isolate_tiled(&spec, &ctx, &rect, tile, stores)?;
        let mut files = Files::new();
        zero_files("zeros", &zl, &mut files)?;
        let m = manifest("zeros", Some(&spec), Some(&ctx), params, &files)?;
        files.insert("manifest.json".into(), m);
        Ok(files)
    })
}

fn real_zeros_windowed(
    spec: &FunctionSpec,
    ctx: &PrecisionContext,
    (a, b): (&Real, &Real),
    step: &str,
    tile: f64,
    stores: &Stores,
) -> anyhow::Result<ZeroList> {
    let bits = ctx.bits();
    let finder = ZeroFinder::new(spec, ctx)?;
    let step_r = parse_real(bits, step)?;
    let span = Float::with_val(bits, b - a);
    let n = (span.to_f64() / tile).ceil().max(1.0) as u32;
    let edge = |k: u32| -> Real {
        if k == n {
            b.clone()
        } else {
            Float::with_val(bits, a + Float::with_val(bits, &span * k) / n)
        }
    };
    let mut all: Vec<hgzeros::zeros::ZeroRecord> = Vec::new();
    for k in 0..n {
        let (lo, hi) = (edge(k), edge(k + 1));
        let window_key = key(
            "real-zeros-window",
            Some(spec),
            Some(ctx),
            json!({ "lo": to_decimal(&lo), "hi": to_decimal(&hi), "step": step }),
        )?;
        let files = stores.partial.get_or_compute(&window_key, || {
            let zl = finder.real_zero_scan(&lo, &hi, &step_r)?;
            let mut f = Files::new();
            f.insert("zeros.json".into(), zl.to_json()?.into_bytes());
            Ok(f)
        })?;
        let text = String::from_utf8(files["zeros.json"].clone())?;
        for z in ZeroList::from_json(&text)?.zeros {
            let dup = all.iter().any(|o| (o.re_f64() - z.re_f64()).abs() <= 1e-9 * z.re_f64().abs().max(1.0));
            if !dup {
                all.push(z);
            }
        }
    }
    Ok(ZeroList::new(all, None)?)
}

pub fn cmd_real_zeros(c: &Common, tile: f64, stores: &Stores) -> anyhow::Result<Files> {
    let spec = c.spec()?;
    let ctx = c.context(&spec)?;
    let (a, b) = c.interval(ctx.bits())?;
    let step = c.step_or(AuditOptions::for_spec(&spec).step)?;
    let params = json!({ "interval": [to_decimal(&a), to_decimal(&b)], "step": step, "tile": tile });
    let k = key("real-zeros", Some(&spec), Some(&ctx), params.clone())?;
    stores.results.get_or_compute(&k, || {
        let zl = real_zeros_windowed(&spec, &ctx, (&a, &b), &step, tile, stores)?;
        let mut files = Files::new();
        zero_files("real_zeros", &zl, &mut files)?;
        let m = manifest("real-zeros", Some(&spec), Some(&ctx), params, &files)?;
        files.insert("manifest.json".into(), m);
        Ok(files)
    })
}

/// Audits one spec, checkpointed.
pub fn audit_one(spec: &FunctionSpec, ctx: &PrecisionContext, opts: &AuditOptions, stores: &Stores) -> anyhow::Result<WeakConjectureReport> {
    let params = json!({ "scan_max": opts.scan_max, "step": opts.step, "delta": opts.delta });
    let k = key("audit-one", Some(spec), Some(ctx), params)?;
    let files = stores.partial.get_or_compute(&k, || {
        log::info!("auditing {} at {} digits", spec.tag(), ctx.digits());
        let report = weak_conjecture_audit_with(spec, ctx, opts)?;
        let mut f = Files::new();
        f.insert("report.json".into(), serde_json::to_vec(&report)?);
        Ok(f)
    })?;
    Ok(serde_json::from_slice(&files["report.json"])?)
}

pub fn audit_csv(reports: &[WeakConjectureReport]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "N", "digits", "largest_real_zero", "real_zero_count", "total_count_in_region", "verdict"])?;
    for r in reports {
        w.write_record([
            r.family.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.digits.to_string(),
            r.largest_real_zero.clone().unwrap_or_default(),
            r.real_zero_count.to_string(),
            r.total_count_in_region.map(|n| n.to_string()).unwrap_or_default(),
            r.verdict.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn cmd_audit(c: &Common, stores: &Stores) -> anyhow::Result<Files> {
    let specs: Vec<FunctionSpec> = match (&c.family, &c.spec_file) {
        (Some(name), None) => c
            .n_values()?
            .into_iter()
            .map(|n| family_spec(name, Some(n), c))
            .collect::<anyhow::Result<_>>()?,
        _ => vec![c.spec()?],
    };
    for s in &specs {
        if !s.is_real_symmetric() {
            bail!(UsageError::new(format!("audit needs a family that is real on the real axis; {} is not", s.tag())));
        }
    }
    let mut reports = Vec::new();
    let mut parts = Vec::new();
    for spec in &specs {
        let ctx = c.context(spec)?;
        let mut opts = AuditOptions::for_spec(spec);
        if c.step.is_some() {
            opts.step = c.step_or(0.0)?.parse()?;
        }
        parts.push(json!({ "spec": spec_hash(spec)?, "digits": ctx.digits(), "step": opts.step }));
        reports.push(audit_one(spec, &ctx, &opts, stores)?);
    }
    let params = json!({ "parts": parts });
    let mut files = Files::new();
    files.insert("audit.json".into(), pretty(&reports)?);
    files.insert("audit.csv".into(), audit_csv(&reports)?);
    let m = manifest("audit", None, None, params, &files)?;
    files.insert("manifest.json".into(), m);
    Ok(files)
}

fn homotopy_specs(c: &Common) -> anyhow::Result<(u32, FunctionSpec, FunctionSpec)> {
    if c.spec_file.is_some() {
        bail!(UsageError::new("homotopy runs Xi_k -> Xi_(k+1); use --family XiN --N k"));
    }
    let f0 = match &c.family {
        Some(name) => family_spec(name, c.n.as_deref().map(str::parse).transpose().map_err(|_| UsageError::new("--N: expected an integer"))?, c)?,
        None => xi_truncated(c.n.as_deref().ok_or_else(|| UsageError::new("--N is required"))?.parse().map_err(|_| UsageError::new("--N: expected an integer"))?)?,
    };
    if f0.family != Family::XiN {
        bail!(UsageError::new("homotopy supports the XiN family (f0 = Xi_k, f1 = Phi_(k+1))"));
    }
    let k = f0.n.unwrap_or(1);
    Ok((k, f0, phi_term(k + 1)?))
}

pub fn cmd_homotopy(c: &Common, seeds: Option<&Path>, stores: &Stores) -> anyhow::Result<Files> {
    let (k, f0, f1) = homotopy_specs(c)?;
    let target = xi_truncated(k + 1)?;
    let ctx = c.context(&target)?;
    let seeds = match seeds {
        Some(p) => read_zero_file(p)?,
        None => {
            let rect = c.rect(ctx.bits()).context("seeds come from --seeds FILE or zeros of Xi_k in --rect")?;
            isolate_tiled(&f0, &ctx, &rect, DEFAULT_TILE, stores)?
        }
    };
    let seed_doc: Vec<(String, String)> = seeds
        .zeros
        .iter()
        .map(|z| (to_decimal(&z.location.re), to_decimal(&z.location.im)))
        .collect();
    let params = json!({ "k": k, "seeds": seed_doc });
    let kk = key("homotopy", Some(&f0), Some(&ctx), params.clone())?;
    stores.results.get_or_compute(&kk, || {
        let path = track_path(&f0, &f1, &seeds, &ctx)?;
        let descent = verify_monotone_descent(&path);
        let mut files = Files::new();
        files.insert("path.json".into(), pretty(&path)?);
        let mut csv = Vec::new();
        path.write_csv(&mut csv, ctx.digits() as usize)?;
        files.insert("path.csv".into(), csv);
        zero_files("final_zeros", &path.final_zeros()?, &mut files)?;
        files.insert("descent.json".into(), pretty(&descent)?);
        let m = manifest("homotopy", Some(&f0), Some(&ctx), params, &files)?;
        files.insert("manifest.json".into(), m);
        Ok(files)
    })
}

pub fn cmd_mcurve(c: &Common, zeros: Option<&Path>, tol: f64, stores: &Stores) -> anyhow::Result<Files> {
    let spec = c.spec()?;
    let ctx = c.context(&spec)?;
    let (a, b) = c.interval(64)?;
    let step = c.step_or(0.25)?;
    let alpha_step: f64 = step.parse()?;
    let zl = zeros.map(read_zero_file).transpose()?;
    let params = json!({
        "interval": [a.to_f64(), b.to_f64()],
        "alpha_step": alpha_step,
        "zeros": zl.as_ref().map(|z| z.zeros.iter().map(|r| (r.re_f64(), r.im_f64())).collect::<Vec<_>>()),
        "tol": tol,
    });
    let k = key("mcurve", Some(&spec), Some(&ctx), params.clone())?;
    stores.results.get_or_compute(&k, || {
        let curve = m_curve(&spec, a.to_f64(), b.to_f64(), alpha_step, &ctx)?;
        let mut files = Files::new();
        let mut csv = Vec::new();
        curve.write_csv(&mut csv)?;
        files.insert("mcurve.csv".into(), csv);
        files.insert(
            "mcurve.json".into(),
            pretty(&json!({
                "spec_hash": spec_hash(&spec)?,
                "digits": curve.digits,
                "alpha_step": curve.alpha_step,
                "y_step": curve.y_step,
                "y_cap": curve.y_cap,
                "samples": curve.samples,
            }))?,
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["alpha", "m"])?;
        for (alpha, m) in local_maxima(&curve) {
            w.write_record([format!("{alpha:.17e}"), format!("{m:.17e}")])?;
        }
        files.insert("maxima.csv".into(), w.into_inner()?);
        if let Some(zl) = &zl {
            files.insert("comparison.json".into(), pretty(&compare_to_zeros(&curve, zl, tol))?);
        }
        let m = manifest("mcurve", Some(&spec), Some(&ctx), params, &files)?;
        files.insert("manifest.json".into(), m);
        Ok(files)
    })
}

fn zeros_from(c: &Common, input: Option<&Path>, stores: &Stores) -> anyhow::Result<(ZeroList, Option<FunctionSpec>, Option<PrecisionContext>)> {
    match input {
        Some(p) => Ok((read_zero_file(p)?, None, None)),
        None => {
            let spec = c.spec().context("zeros come from --input FILE or a function with --rect")?;
            let ctx = c.context(&spec)?;
            let rect = c.rect(ctx.bits())?;
            let zl = isolate_tiled(&spec, &ctx, &rect, DEFAULT_TILE, stores)?;
            Ok((zl, Some(spec), Some(ctx)))
        }
    }
}

pub fn cmd_diffs(c: &Common, input: Option<&Path>, k: usize, of: Part, stores: &Stores) -> anyhow::Result<Files> {
    let (zl, spec, ctx) = zeros_from(c, input, stores)?;
    let values: Vec<Real> = zl
        .zeros
        .iter()
        .map(|z| match of {
            Part::Re => z.location.re.clone(),
            Part::Im => z.location.im.clone(),
        })
        .collect();
    let table = difference_table(&values, k)?;
    let mut files = Files::new();
    files.insert("diffs.json".into(), pretty(&table)?);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["order", "index", "value"])?;
    for row in &table {
        for (i, v) in row.values.iter().enumerate() {
            let digits = zl.zeros.first().map(|z| z.digits_used as usize).unwrap_or(17);
            w.write_record([row.order.to_string(), i.to_string(), format_real(v, digits)])?;
        }
    }
    files.insert("diffs.csv".into(), w.into_inner()?);
    let params = json!({ "k": k, "of": of, "count": values.len() });
    let m = manifest("diffs", spec.as_ref(), ctx.as_ref(), params, &files)?;
    files.insert("manifest.json".into(), m);
    Ok(files)
}

fn law(arg: LawArg, mahler_a: Option<f64>) -> anyhow::Result<LocusLaw> {
    Ok(match arg {
        LawArg::Gamma => LocusLaw::GammaFamily,
        LawArg::Gsum => LocusLaw::GsumFamily,
        LawArg::Mahler => LocusLaw::mahler(mahler_a.ok_or_else(|| UsageError::new("--law mahler needs --mahler-a"))?)?,
    })
}

pub fn cmd_asymptotics(
    c: &Common,
    law_arg: LawArg,
    mahler_a: Option<f64>,
    input: Option<&Path>,
    coordinate: Option<f64>,
    stores: &Stores,
) -> anyhow::Result<Files> {
    let law = law(law_arg, mahler_a)?;
    let mut files = Files::new();
    let params;
    let (spec, ctx) = if let Some(x) = coordinate {
        let y = locus_predict(law, x)?;
        files.insert("prediction.json".into(), pretty(&json!({ "law": law, "coordinate": x, "prediction": y }))?);
        params = json!({ "law": law, "coordinate": x });
        (None, None)
    } else {
        let (zl, spec, ctx) = zeros_from(c, input, stores)?;
        files.insert("fit.json".into(), pretty(&locus_fit(&zl, law)?)?);
        params = json!({ "law": law, "zeros": zl.len() });
        (spec, ctx)
    };
    let m = manifest("asymptotics", spec.as_ref(), ctx.as_ref(), params, &files)?;
    files.insert("manifest.json".into(), m);
    Ok(files)
}

pub fn write_files(out: &Path, files: &Files) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let p = out.join(name);
        std::fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()))?;
        written.push(p);
    }
    Ok(written)
}
