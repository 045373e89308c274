//! Job implementations: each command validates its inputs, runs the core
//! computation, writes artifacts into the output directory, and prints a
//! compact JSON summary on stdout.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use shellspec_core::bands;
use shellspec_core::bsop::{self, BsError};
use shellspec_core::certify::{self, CertificateInput, CertifyError};
use shellspec_core::schrodinger::{self, SchrodingerError};

use crate::config::{config_err, CertificateConfig, JobConfig, JobError};

/// Errors that mean the job description has to change are configuration
/// errors; errors arising while executing a well-formed job are numerical
/// failures. Window, truncation, and grid-placement problems are fixable in
/// the config, so they land in the first class.
fn classify_bs(e: BsError) -> JobError {
    match e {
        BsError::EmptyWindow
        | BsError::WindowOutsideGap(..)
        | BsError::OutsideGap(_)
        | BsError::UnderTruncated { .. }
        | BsError::GridPointNearCurve(_)
        | BsError::Dirac(_)
        | BsError::Curve(_) => JobError::Config(e.to_string()),
        BsError::DensityLength { .. } => JobError::Numerics(e.to_string()),
    }
}

fn classify_schrodinger(e: SchrodingerError) -> JobError {
    match e {
        SchrodingerError::EigenvalueNotFound(_) => JobError::Numerics(e.to_string()),
        SchrodingerError::Relativistic(inner) => classify_bs(inner),
        other => JobError::Config(other.to_string()),
    }
}

fn classify_certify(e: CertifyError) -> JobError {
    match e {
        CertifyError::NotCertifiable => JobError::Numerics(e.to_string()),
        CertifyError::Scan(inner) => classify_bs(inner),
        other => JobError::Config(other.to_string()),
    }
}

fn write_artifact(out_dir: &Path, rel: &Path, contents: &str) -> Result<PathBuf, JobError> {
    let full = out_dir.join(rel);
    if let Some(parent) = full.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| config_err(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(&full, contents)
        .map_err(|e| config_err(format!("cannot write {}: {e}", full.display())))?;
    log::info!("wrote {}", full.display());
    Ok(full)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("core results serialize");
    s.push('\n');
    s
}

fn json_path(cfg: &JobConfig, default: &str) -> PathBuf {
    cfg.numerics
        .as_ref()
        .and_then(|n| n.json_path.clone())
        .unwrap_or_else(|| PathBuf::from(default))
}

pub fn run_bands(cfg: &JobConfig, out: &Path) -> Result<(), JobError> {
    let p = cfg.require_params()?;
    let report = bands::essential_spectrum(&p);
    write_artifact(out, &json_path(cfg, "bands.json"), &pretty(&report))?;
    println!("{}", serde_json::to_string(&report).expect("core results serialize"));
    Ok(())
}

pub fn run_scan(cfg: &JobConfig, out: &Path, tol: Option<f64>) -> Result<(), JobError> {
    let p = cfg.require_params()?;
    let numerics = cfg.require_numerics()?;
    let curve = cfg.require_curve()?;

    let window = match numerics.window {
        Some([lo, hi]) => (lo, hi),
        None => {
            // default to the hull of the scannable part of the gap
            let report = bands::essential_spectrum(&p);
            let lo = report.gap_complement.iter().map(|iv| iv[0]).fold(f64::INFINITY, f64::min);
            let hi =
                report.gap_complement.iter().map(|iv| iv[1]).fold(f64::NEG_INFINITY, f64::max);
            if !(lo < hi) {
                return Err(config_err(
                    "the essential spectrum leaves no scannable window; give numerics.window",
                ));
            }
            (lo, hi)
        }
    };

    let mut res =
        bsop::bs_eigenvalue_scan(&curve, &p, window, numerics.scan_steps).map_err(classify_bs)?;
    if let Some(tol) = tol {
        let keep: Vec<usize> = res
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, ev)| ev.residual <= tol)
            .map(|(i, _)| i)
            .collect();
        if keep.len() < res.eigenvalues.len() {
            log::warn!(
                "dropping {} eigenvalue(s) with residual above {tol:e}",
                res.eigenvalues.len() - keep.len()
            );
            res.eigenvalues = keep.iter().map(|&i| res.eigenvalues[i].clone()).collect();
            res.densities = keep.iter().map(|&i| res.densities[i].clone()).collect();
        }
    }

    if let Some(grid) = &numerics.field_grid {
        if let (Some(ev), Some(density)) = (res.eigenvalues.first(), res.densities.first()) {
            let asm = bsop::assemble_cz(&curve, &p, ev.z).map_err(classify_bs)?;
            let samples =
                bsop::reconstruct_eigenfunction(&asm, density, grid).map_err(classify_bs)?;
            let field_rel = numerics
                .field_csv_path
                .clone()
                .unwrap_or_else(|| PathBuf::from("field.csv"));
            write_artifact(out, &field_rel, &bsop::field_csv(&samples))?;
            res.field_samples = Some(samples);
        } else {
            log::warn!("field grid given but no eigenvalue found; skipping reconstruction");
        }
    }

    let csv_rel = numerics.csv_path.clone().unwrap_or_else(|| PathBuf::from("scan.csv"));
    write_artifact(out, &csv_rel, &res.scan_csv())?;
    write_artifact(out, &json_path(cfg, "scan.json"), &pretty(&res))?;
    println!(
        "{}",
        json!({
            "eigenvalues": res.eigenvalues,
            "scanned": res.scan.len(),
            "window": [window.0, window.1],
        })
    );
    Ok(())
}

pub fn run_certify(cfg: &JobConfig, out: &Path) -> Result<(), JobError> {
    let p = cfg.require_params()?;
    if p.eta != 0.0 || p.lambda != 0.0 {
        return Err(config_err(
            "the certificate covers purely Lorentz-scalar coupling: set eta = lambda = 0",
        ));
    }
    let defaults = CertificateConfig { target_count: 1, support_scale: None, half_angle: None };
    let cert = cfg.certificate.as_ref().unwrap_or(&defaults);

    let (input, mut payload) = match (cert.support_scale, cert.half_angle) {
        (Some(l), Some(w)) => {
            let input = CertificateInput {
                tau: p.tau,
                mass: p.mass,
                light_speed: p.light_speed,
                target_count: cert.target_count,
                support_scale: l,
                half_angle: w,
            };
            let res = certify::evaluate(&input).map_err(classify_certify)?;
            let payload = json!({
                "L": l,
                "omega": w,
                "bracket": res.bracket_value,
                "certified": res.certified,
                "essential_gap_edge": res.essential_gap_edge,
                "omega_star": res.suggested_omega_star,
            });
            (input, payload)
        }
        (None, None) => {
            let star = certify::find_omega_star(p.tau, p.mass, p.light_speed, cert.target_count)
                .map_err(classify_certify)?;
            let input = CertificateInput {
                tau: p.tau,
                mass: p.mass,
                light_speed: p.light_speed,
                target_count: cert.target_count,
                support_scale: star.support_scale,
                half_angle: star.omega_star,
            };
            let payload = json!({
                "L": star.support_scale,
                "omega_star": star.omega_star,
                "bracket": star.bracket_value,
                "certified": star.bracket_value < 0.0,
                "essential_gap_edge": certify::essential_gap_edge(p.tau, p.mass, p.light_speed),
            });
            (input, payload)
        }
        _ => {
            return Err(config_err(
                "give both certificate.support_scale and certificate.half_angle, or neither",
            ))
        }
    };

    if cfg.curve.is_some() {
        let curve = cfg.require_curve()?;
        let steps = cfg.numerics.as_ref().map_or(40, |n| n.scan_steps);
        let report = certify::cross_validate(&input, &curve, steps).map_err(classify_certify)?;
        payload["cross_validation"] =
            serde_json::to_value(&report).expect("core results serialize");
    }

    write_artifact(out, &json_path(cfg, "certify.json"), &format!("{:#}\n", payload))?;
    println!("{payload}");
    Ok(())
}

pub fn run_nonrel(cfg: &JobConfig, out: &Path) -> Result<(), JobError> {
    let p = cfg.require_params()?;
    if p.tau != 0.0 || p.lambda != 0.0 {
        return Err(config_err(
            "the nonrelativistic experiment takes the scalar shell coupling in params.eta; \
             set tau = lambda = 0",
        ));
    }
    let numerics = cfg.require_numerics()?;
    let cs = numerics
        .light_speeds
        .clone()
        .ok_or_else(|| config_err("command 'nonrel' needs numerics.light_speeds"))?;
    let curve = cfg.require_curve()?;
    let fit = schrodinger::nonrel_limit_experiment(&curve, p.mass, p.eta, &cs)
        .map_err(classify_schrodinger)?;
    write_artifact(out, &json_path(cfg, "nonrel.json"), &pretty(&fit))?;
    println!("{}", serde_json::to_string(&fit).expect("core results serialize"));
    Ok(())
}
