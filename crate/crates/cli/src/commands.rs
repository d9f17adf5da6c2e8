//! One function per subcommand. Each returns the exit code, the certificate and a
//! short human-readable summary; nothing here prints.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use polyharm::boundary::{
    continuity_integral, default_boundary_radii, gamma_curve, jump_indicator, samples_for_cutoffs,
    small_o_probe, DivergenceReport, IntegralVerdict, JumpReport, JumpVerdict, SmallOReport,
};
use polyharm::classes::{certify_ctc, Conclusion};
use polyharm::univalence::{slice_univalence_test, Status};
use polyharm::{GridSpec, HarmonicMap64, MapSpec, PolyharmonicMap64};
use serde::Serialize;
use serde_json::json;

use crate::certificate::{digest, Certificate};
use crate::error::{exit, CliError, CliResult};
use crate::render::{trace, RenderSpec, Which};

pub struct Input {
    pub bytes: Vec<u8>,
    pub spec: MapSpec,
    pub map: PolyharmonicMap64,
}

pub fn load_spec(path: &Path) -> CliResult<Input> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let spec: MapSpec = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let map = spec
        .to_map()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(Input { bytes, spec, map })
}

pub struct Outcome {
    pub code: i32,
    pub certificate: Certificate,
    pub summary: String,
    /// Files written besides the certificate.
    pub files: Vec<PathBuf>,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// `x` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        format!("{:.*}", (14 - exponent) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

pub fn format_complex(w: Complex64) -> String {
    let sign = if w.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", sig15(w.re), sig15(w.im.abs()))
}

pub fn eval(input: &Input, z: Complex64) -> CliResult<Outcome> {
    let w = input.map.eval(z)?;
    let certificate = Certificate::new(
        "eval",
        &input.bytes,
        json!({ "z": [z.re, z.im] }),
        json!({ "value": [w.re, w.im] }),
    );
    Ok(Outcome {
        code: exit::PASS,
        certificate,
        summary: format_complex(w),
        files: Vec::new(),
    })
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::CertifiedPass => exit::PASS,
        Status::CertifiedFail => exit::FAIL,
        Status::Inconclusive => exit::INCONCLUSIVE,
    }
}

pub fn slice_test(input: &Input, grid: &GridSpec, radii: &[f64]) -> CliResult<Outcome> {
    let verdict = slice_univalence_test(&input.map, radii, grid)?;
    let mut summary = format!(
        "slice-test: {}",
        to_value(&verdict.status).as_str().unwrap_or_default()
    );
    if let Some(w) = verdict.witnesses.first() {
        summary += &format!(" ({} at z = {:?}, value {})", w.label, w.z, w.value);
    }
    Ok(Outcome {
        code: status_code(verdict.status),
        certificate: Certificate::new(
            "slice-test",
            &input.bytes,
            json!({ "grid": grid, "radii": radii }),
            to_value(&verdict),
        ),
        summary,
        files: Vec::new(),
    })
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub small_o: SmallOReport,
    pub jump: JumpReport,
    /// Set when `F_2 = o(1/(1 − z))` could not be confirmed, so the jump
    /// criterion's hypothesis is in doubt.
    pub advisory: bool,
}

fn biharmonic_parts(input: &Input, command: &str) -> CliResult<(HarmonicMap64, HarmonicMap64)> {
    if input.map.order() != 2 {
        return Err(CliError::Range(format!(
            "{command} needs a biharmonic spec (p = 2), got p = {}",
            input.map.order()
        )));
    }
    let c = input.map.components();
    Ok((c[0].clone(), c[1].clone()))
}

pub fn boundary(input: &Input, theta0: f64, radii: Option<&[f64]>) -> CliResult<Outcome> {
    let (f1, f2) = biharmonic_parts(input, "boundary")?;
    let default;
    let radii = match radii {
        Some(r) => r,
        None => {
            default = default_boundary_radii();
            &default
        }
    };
    let small_o = small_o_probe(&f2, theta0, radii)?;
    let jump = jump_indicator(&f1.h, &f2.h, theta0, radii)?;
    let report = BoundaryReport {
        advisory: !small_o.holds,
        small_o,
        jump,
    };
    let code = match report.jump.verdict {
        JumpVerdict::Jump | JumpVerdict::Continuous => exit::PASS,
        JumpVerdict::Inconclusive => exit::INCONCLUSIVE,
    };
    let summary = format!(
        "boundary: {} (c ≈ {}){}",
        to_value(&report.jump.verdict).as_str().unwrap_or_default(),
        sig15(report.jump.c_estimate),
        if report.advisory {
            "; advisory: o(1/(1-z)) hypothesis not confirmed"
        } else {
            ""
        }
    );
    Ok(Outcome {
        code,
        certificate: Certificate::new(
            "boundary",
            &input.bytes,
            json!({ "theta0": theta0, "radii": radii }),
            to_value(&report),
        ),
        summary,
        files: Vec::new(),
    })
}

pub fn gamma_integral(input: &Input, theta0: f64, m: f64, cutoffs: &[f64]) -> CliResult<Outcome> {
    let (f1, f2) = biharmonic_parts(input, "gamma-integral")?;
    if !(m > 0.0 && m < std::f64::consts::FRAC_1_PI) {
        return Err(CliError::Range(format!("m = {m} outside (0, 1/π)")));
    }
    let smallest = cutoffs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > 0.0) {
        return Err(CliError::Range("cutoffs must be positive".into()));
    }
    let n = samples_for_cutoffs(m, smallest);
    let gamma = gamma_curve(m, theta0, n)?;
    let report: DivergenceReport = continuity_integral(&f1, &f2, &gamma, cutoffs)?;
    let code = match report.verdict {
        IntegralVerdict::Divergent => exit::PASS,
        IntegralVerdict::Convergent => exit::FAIL,
        IntegralVerdict::Inconclusive => exit::INCONCLUSIVE,
    };
    let summary = format!(
        "gamma-integral: {} (slope {}, residual {}){}",
        to_value(&report.verdict).as_str().unwrap_or_default(),
        sig15(report.slope),
        sig15(report.relative_residual),
        if report.hypothesis_holds {
            ""
        } else {
            "; |phi| >= 1 on the curve"
        }
    );
    Ok(Outcome {
        code,
        certificate: Certificate::new(
            "gamma-integral",
            &input.bytes,
            json!({ "theta0": theta0, "m": m, "cutoffs": cutoffs, "samples_per_side": n }),
            to_value(&report),
        ),
        summary,
        files: Vec::new(),
    })
}

fn write(path: PathBuf, contents: &str) -> CliResult<PathBuf> {
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes `<stem>.svg` and `<stem>.csv` per requested function; returns the
/// written paths and a JSON summary listing their digests.
fn render_files(
    map: &PolyharmonicMap64,
    spec: &RenderSpec,
    which: &[Which],
    out: &Path,
) -> CliResult<(Vec<PathBuf>, serde_json::Value)> {
    spec.validate().map_err(CliError::Range)?;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for &w in which {
        let fig = trace(map, w, spec)?;
        let csv = fig.csv();
        let svg = fig.svg(spec.width, spec.height);
        files.push(write(out.join(format!("{}.csv", w.stem())), &csv)?);
        files.push(write(out.join(format!("{}.svg", w.stem())), &svg)?);
        entries.push(json!({
            "function": w,
            "csv": format!("{}.csv", w.stem()),
            "csv_digest": digest(csv.as_bytes()),
            "svg": format!("{}.svg", w.stem()),
            "svg_digest": digest(svg.as_bytes()),
            "curves": fig.polylines.len(),
            "poles": fig.poles,
        }));
    }
    Ok((files, json!(entries)))
}

pub fn render(input: &Input, spec: &RenderSpec, which: &[Which], out: &Path) -> CliResult<Outcome> {
    let (files, report) = render_files(&input.map, spec, which, out)?;
    Ok(Outcome {
        code: exit::PASS,
        certificate: Certificate::new(
            "render",
            &input.bytes,
            json!({ "render": spec, "which": which }),
            report,
        ),
        summary: format!("render: wrote {} files to {}", files.len(), out.display()),
        files,
    })
}

pub fn certify(
    input: &Input,
    grid: &GridSpec,
    radii: &[f64],
    render: Option<(&RenderSpec, &Path)>,
) -> CliResult<Outcome> {
    if input.map.order() != 1 {
        return Err(CliError::Range(format!(
            "certify-ctc needs a harmonic spec (p = 1), got p = {}",
            input.map.order()
        )));
    }
    let cert = certify_ctc(input.map.component(0).expect("p = 1"), grid, radii)?;
    let code = match cert.conclusion {
        Conclusion::FullyCloseToConvex => exit::PASS,
        Conclusion::Failed => exit::FAIL,
        Conclusion::Inconclusive => exit::INCONCLUSIVE,
    };
    let summary = format!(
        "certify-ctc: {} (coefficient sum {}, sup |a_f| {})",
        to_value(&cert.conclusion).as_str().unwrap_or_default(),
        sig15(cert.kh.sum_value),
        sig15(cert.sup_dilatation)
    );
    let mut report = to_value(&cert);
    let mut files = Vec::new();
    if let Some((spec, out)) = render {
        let f = polyharm::classes::build_ctc_biharmonic(input.map.component(0).expect("p = 1"));
        let (written, listing) = render_files(&f, spec, &Which::ALL, out)?;
        files = written;
        report["render"] = listing;
    }
    Ok(Outcome {
        code,
        certificate: Certificate::new(
            "certify-ctc",
            &input.bytes,
            json!({ "grid": grid, "radii": radii }),
            report,
        ),
        summary,
        files,
    })
}
