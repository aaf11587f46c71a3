//! Subcommand implementations.

use crate::output::{write_csv, write_json, Meta};
use crate::parse::{parse_code, parse_decimal_rational, parse_family};
use clap::Args;
use num_traits::ToPrimitive;
use qwe_core::analysis::{
    code_distance, code_distance_from_estimates, criteria_report, tpd_admissibility, tpd_moments,
    ZeroTolerance,
};
use qwe_core::estimation::{
    build_estimator_tables, estimate_enumerators, fit_mitigation, hoeffding_samples, mitigate,
    samples_required, sld_variance, EstimationReport, MitigationModel,
};
use qwe_core::noise::{noise_threshold, noisy_family_enumerators, Criterion, NoiseModel};
use qwe_core::sampler::decoder::{build_lookup_decoder, correct};
use qwe_core::sampler::{
    histogram_csv, postselect, sample_tpd, simulate_bell_circuit, simulate_code_two_setting,
    BellSampleSet,
};
use qwe_core::states::stabilizer::PauliString;
use qwe_core::states::{code_enumerators, family_all_enumerators, family_enumerators};
use qwe_core::transforms::{apply_transform, build_transform, TransformKind};
use qwe_core::{EnumeratorVector, Error, Precision, Result, TransformMatrix, VectorKind};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::str::FromStr;

fn parse_precision(s: &str) -> Result<Precision> {
    match s {
        "exact" => Ok(Precision::Exact),
        "f64" | "float" | "float64" => Ok(Precision::Float64),
        other => Err(Error::Parse(format!("unknown precision {other:?}"))),
    }
}

fn default_precision(n: usize, requested: Option<&str>) -> Result<Precision> {
    match requested {
        Some(s) => parse_precision(s),
        None => {
            if n <= 64 {
                Ok(Precision::Exact)
            } else {
                eprintln!(
                    "note: n={n} > 64, defaulting to float mode; the sector-length maps \
                     amplify rounding there"
                );
                Ok(Precision::Float64)
            }
        }
    }
}

fn read_json_value(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bad JSON in {}: {e}", path.display())))
}

fn vector_from_value(value: &serde_json::Value, context: &str) -> Result<EnumeratorVector> {
    serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("{context}: not an enumerator vector: {e}")))
}

/// Read an enumerator vector from a bare vector file or from a named field
/// of an envelope written by another command.
fn read_vector(path: &Path, field: Option<&str>) -> Result<EnumeratorVector> {
    let value = read_json_value(path)?;
    if value.get("values").is_some() && value.get("kind").is_some() {
        return vector_from_value(&value, &path.display().to_string());
    }
    if let Some(field) = field {
        if let Some(sub) = value.get(field) {
            return vector_from_value(sub, &format!("{}#{field}", path.display()));
        }
    }
    for key in ["tpd", "sld", "vector", "output"] {
        if let Some(sub) = value.get(key) {
            if sub.get("values").is_some() {
                return vector_from_value(sub, &format!("{}#{key}", path.display()));
            }
        }
    }
    Err(Error::Parse(format!(
        "{}: no enumerator vector found",
        path.display()
    )))
}

// ---------------------------------------------------------------- transform

#[derive(Args)]
pub struct TransformArgs {
    /// `<source>-to-<target>` (e.g. sld-to-apd, tpd-to-sld) or `matrix`.
    #[arg(long)]
    kind: String,
    /// Matrix name for `--kind matrix`: M, M_prime, M_tilde, T_prime,
    /// T_prime_inv, T_tilde, T_tilde_inv, T_tilde_prime, T_tilde_prime_inv.
    #[arg(long)]
    which: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Input enumerator vector (JSON).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision: Option<String>,
    /// json (default) or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Serialize)]
struct TransformPayload {
    transform: String,
    input: EnumeratorVector,
    output: EnumeratorVector,
    /// Max-abs round-trip residual |T⁻¹(T a) − a| used as a validation
    /// check; exactly zero in exact mode.
    round_trip_residual: f64,
}

pub fn run_transform(args: TransformArgs) -> Result<()> {
    if args.kind == "matrix" {
        let which = args
            .which
            .as_deref()
            .ok_or_else(|| Error::contract("--kind matrix needs --which"))?;
        let kind = TransformKind::from_str(which)?;
        let n = args
            .n
            .ok_or_else(|| Error::contract("--kind matrix needs --n"))?;
        let precision = default_precision(n, args.precision.as_deref())?;
        let matrix = build_transform(kind, n, precision)?;
        let meta = Meta::new(None, precision_name(precision));
        return match args.format.as_str() {
            "csv" => write_csv(args.out.as_deref(), meta, &matrix.to_csv()),
            "json" => {
                #[derive(Serialize)]
                struct MatrixPayload {
                    matrix: TransformMatrix,
                }
                write_json(args.out.as_deref(), meta, MatrixPayload { matrix })
            }
            other => Err(Error::contract(format!("unknown format {other:?}"))),
        };
    }

    let (src, dst) = args
        .kind
        .split_once("-to-")
        .ok_or_else(|| Error::Parse(format!("--kind must be matrix or <src>-to-<dst>, got {:?}", args.kind)))?;
    let source = VectorKind::from_str(&src.replace('-', "_"))?;
    let target = VectorKind::from_str(&dst.replace('-', "_"))?;
    let kind = TransformKind::between(source, target).ok_or_else(|| {
        Error::contract(format!("no single transform maps {source} to {target}"))
    })?;
    let input_path = args
        .input
        .as_deref()
        .ok_or_else(|| Error::contract("vector transforms need --in"))?;
    let vec = read_vector(input_path, None)?;
    if vec.kind != source {
        return Err(Error::contract(format!(
            "input vector has kind {}, expected {source}",
            vec.kind
        )));
    }
    let precision = match args.precision.as_deref() {
        Some(s) => parse_precision(s)?,
        None => vec.precision(),
    };
    let matrix = build_transform(kind, vec.n, precision)?;
    let output = apply_transform(&matrix, &vec)?;

    let inverse_kind = TransformKind::between(target, source)
        .unwrap_or(kind); // the MacWilliams maps are involutions
    let inverse = build_transform(inverse_kind, vec.n, precision)?;
    let back = apply_transform(&inverse, &output)?;
    let residual = vec
        .to_f64()
        .iter()
        .zip(back.to_f64())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let meta = Meta::new(None, precision_name(precision));
    let payload = TransformPayload {
        transform: kind.name().to_string(),
        input: vec,
        output,
        round_trip_residual: residual,
    };
    match args.format.as_str() {
        "json" => write_json(args.out.as_deref(), meta, payload),
        "csv" => {
            let mut body = String::from("index,value\n");
            for (i, v) in payload.output.to_f64().iter().enumerate() {
                body.push_str(&format!("{i},{v}\n"));
            }
            write_csv(args.out.as_deref(), meta, &body)
        }
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Exact => "exact",
        Precision::Float64 => "f64",
    }
}

// ---------------------------------------------------------------- enumerate

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    family: Option<String>,
    /// Built-in code name (`steane`) or a path to a .stab/.json file.
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Depolarizing strength applied analytically to the family enumerators.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision: Option<String>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Serialize)]
struct FamilyEnumeratePayload {
    family: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    natural_kind: String,
    sld: EnumeratorVector,
    apd: EnumeratorVector,
    tpd: EnumeratorVector,
    purity: f64,
}

#[derive(Serialize)]
struct CodeEnumeratePayload {
    n: usize,
    k: usize,
    a: Vec<u64>,
    b: Option<Vec<u64>>,
    a_shadow: Option<Vec<u64>>,
    distance: Option<usize>,
    is_state: bool,
    sld: EnumeratorVector,
    dual_sld: Option<EnumeratorVector>,
    tpd: Option<EnumeratorVector>,
}

pub fn run_enumerate(args: EnumerateArgs) -> Result<()> {
    match (&args.family, &args.code) {
        (Some(family), None) => {
            let n = args
                .n
                .ok_or_else(|| Error::contract("--family needs --n"))?;
            let family = parse_family(family, n)?;
            let precision = default_precision(n, args.precision.as_deref())?;
            let natural = family_enumerators(&family, n)?;
            let (sld, apd, tpd) = match &args.p {
                Some(p_str) => {
                    let p = parse_decimal_rational(p_str)?;
                    let noisy = noisy_family_enumerators(&family, n, &p, precision)?;
                    (noisy.sld, noisy.apd, noisy.tpd)
                }
                None => family_all_enumerators(&family, n)?,
            };
            let (sld, apd, tpd) = match precision {
                Precision::Exact => (sld, apd, tpd),
                Precision::Float64 => (sld.into_float(), apd.into_float(), tpd.into_float()),
            };
            let purity = sld.sum_f64();
            let payload = FamilyEnumeratePayload {
                family: family.name().to_string(),
                n,
                p: args
                    .p
                    .as_deref()
                    .map(|s| parse_decimal_rational(s).and_then(|r| {
                        r.to_f64()
                            .ok_or_else(|| Error::Parse("non-finite p".into()))
                    }))
                    .transpose()?,
                natural_kind: natural.kind.name().to_string(),
                sld,
                apd,
                tpd,
                purity,
            };
            emit_enumerate(args.out.as_deref(), &args.format, precision, payload)
        }
        (None, Some(code)) => {
            let group = parse_code(code)?;
            let enums = code_enumerators(&group)?;
            let distance = enums.b.as_ref().map(|_| code_distance(&enums)).transpose()?;
            let n = enums.n;
            let k = enums.k;
            let two_n = 2.0f64.powi(n as i32);
            let two_nk = 2.0f64.powi((n + k) as i32);
            let sld = EnumeratorVector::float(
                n,
                VectorKind::Sld,
                enums.a.iter().map(|&c| c as f64 / two_n).collect(),
            )?;
            let dual_sld = enums
                .b
                .as_ref()
                .map(|b| {
                    EnumeratorVector::float(
                        n,
                        VectorKind::DualSld,
                        b.iter().map(|&c| c as f64 / two_nk).collect(),
                    )
                })
                .transpose()?;
            let tpd = enums
                .a_shadow
                .as_ref()
                .map(|s| {
                    EnumeratorVector::float(
                        n,
                        VectorKind::Tpd,
                        s.iter().map(|&c| c as f64 / two_nk).collect(),
                    )
                })
                .transpose()?;
            let payload = CodeEnumeratePayload {
                n,
                k,
                a: enums.a.clone(),
                b: enums.b.clone(),
                a_shadow: enums.a_shadow.clone(),
                distance: distance.map(|d| d.distance),
                is_state: distance.map(|d| d.is_state).unwrap_or(k == 0),
                sld,
                dual_sld,
                tpd,
            };
            let meta = Meta::new(None, "exact");
            match args.format.as_str() {
                "json" => write_json(args.out.as_deref(), meta, payload),
                "csv" => {
                    let mut body = String::from("series,index,count\n");
                    for (i, c) in payload.a.iter().enumerate() {
                        body.push_str(&format!("A,{i},{c}\n"));
                    }
                    if let Some(b) = &payload.b {
                        for (i, c) in b.iter().enumerate() {
                            body.push_str(&format!("B,{i},{c}\n"));
                        }
                    }
                    if let Some(s) = &payload.a_shadow {
                        for (i, c) in s.iter().enumerate() {
                            body.push_str(&format!("A_shadow,{i},{c}\n"));
                        }
                    }
                    write_csv(args.out.as_deref(), meta, &body)
                }
                other => Err(Error::contract(format!("unknown format {other:?}"))),
            }
        }
        _ => Err(Error::contract("enumerate needs exactly one of --family / --code")),
    }
}

fn emit_enumerate(
    out: Option<&Path>,
    format: &str,
    precision: Precision,
    payload: FamilyEnumeratePayload,
) -> Result<()> {
    let meta = Meta::new(None, precision_name(precision));
    match format {
        "json" => write_json(out, meta, payload),
        "csv" => {
            let mut body = String::from("kind,index,value\n");
            for (name, vec) in [
                ("sld", &payload.sld),
                ("apd", &payload.apd),
                ("tpd", &payload.tpd),
            ] {
                for (i, v) in vec.to_f64().iter().enumerate() {
                    body.push_str(&format!("{name},{i},{v}\n"));
                }
            }
            write_csv(out, meta, &body)
        }
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}

// ------------------------------------------------------------------- sample

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long)]
    family: Option<String>,
    /// Built-in code name (`steane`): samples the maximally mixed logical
    /// state via the two-setting protocol.
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    shots: u64,
    /// RNG seed; generated and recorded in the metadata when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-qubit depolarizing strength before readout.
    #[arg(long, default_value = "0")]
    p: f64,
    /// Per-gate Pauli error probability on each touched qubit.
    #[arg(long = "gate-error", default_value = "0")]
    gate_error: f64,
    /// Sample from the family's exact TPD instead of simulating circuits
    /// (works for non-Clifford families; histogram encoding).
    #[arg(long)]
    multinomial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

pub fn run_sample(args: SampleArgs) -> Result<()> {
    let seed = args.seed.unwrap_or_else(|| rand::random());
    let noise = NoiseModel {
        p: args.p,
        circuit_error_rate: args.gate_error,
    };
    let samples: BellSampleSet = match (&args.family, &args.code) {
        (Some(family), None) => {
            let n = args.n.ok_or_else(|| Error::contract("--family needs --n"))?;
            let family = parse_family(family, n)?;
            if args.multinomial {
                if !noise.is_noiseless() {
                    return Err(Error::contract(
                        "--multinomial samples the exact noiseless TPD; use --p via enumerate instead",
                    ));
                }
                let (_, _, tpd) = family_all_enumerators(&family, n)?;
                sample_tpd(&tpd.into_float(), args.shots, seed)?
            } else {
                let prep = family.preparation_circuit(n)?;
                simulate_bell_circuit(&prep, &noise, args.shots, seed)?
            }
        }
        (None, Some(code)) => {
            if !code.eq_ignore_ascii_case("steane") {
                return Err(Error::contract(
                    "circuit synthesis for arbitrary codes is not implemented; \
                     --code supports the built-in `steane`",
                ));
            }
            let encoder = qwe_core::sampler::circuit::Circuit::steane_zero_encoder();
            let logical_x = PauliString { x: 0x7F, z: 0 };
            simulate_code_two_setting(&encoder, logical_x, &noise, args.shots, seed)?
        }
        _ => return Err(Error::contract("sample needs exactly one of --family / --code")),
    };
    let meta = Meta::new(Some(seed), "f64");
    match args.format.as_str() {
        "json" => write_json(args.out.as_deref(), meta, SamplePayload { samples }),
        "csv" => write_csv(args.out.as_deref(), meta, &histogram_csv(&samples)),
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}

#[derive(Serialize)]
struct SamplePayload {
    samples: BellSampleSet,
}

// ----------------------------------------------------------------- estimate

#[derive(Args)]
pub struct EstimateArgs {
    /// Sample-set file written by `qwe sample`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Code for --postselect/--correct (`steane` or a .stab/.json path).
    #[arg(long)]
    code: Option<String>,
    /// Discard shots with violated parity checks.
    #[arg(long)]
    postselect: bool,
    /// Decode syndromes and correct shots in postprocessing.
    #[arg(long)]
    correct: bool,
    /// Reference sample set (product-zero target) used to fit damping
    /// factors for readout error mitigation.
    #[arg(long = "mitigate-ref")]
    mitigate_ref: Option<PathBuf>,
    #[arg(long, default_value = "1000")]
    bootstrap: usize,
    /// Bootstrap seed; derived from the sample seed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Serialize)]
struct MitigationPayload {
    model: MitigationModel,
    mitigated_sld: EnumeratorVector,
    mitigated_apd: EnumeratorVector,
    mitigated_tpd: EnumeratorVector,
}

#[derive(Serialize)]
struct EstimatePayload {
    report: EstimationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    mitigation: Option<MitigationPayload>,
}

fn read_samples(path: &Path) -> Result<BellSampleSet> {
    let value = read_json_value(path)?;
    let node = value.get("samples").unwrap_or(&value);
    serde_json::from_value(node.clone())
        .map_err(|e| Error::Parse(format!("{}: not a sample set: {e}", path.display())))
}

pub fn run_estimate(args: EstimateArgs) -> Result<()> {
    let mut samples = read_samples(&args.input)?;
    if args.postselect && args.correct {
        return Err(Error::contract("--postselect and --correct are exclusive"));
    }
    if args.postselect || args.correct {
        let code = parse_code(
            args.code
                .as_deref()
                .ok_or_else(|| Error::contract("--postselect/--correct need --code"))?,
        )?;
        samples = if args.postselect {
            postselect(&samples, &code)?
        } else {
            let decoder = build_lookup_decoder(&code)?;
            correct(&samples, &decoder)?
        };
    }
    let table = build_estimator_tables(samples.n)?;
    let seed = args.seed.unwrap_or(samples.seed ^ 0x9E37_79B9);
    let report = estimate_enumerators(&samples, &table, args.bootstrap, seed)?;

    let mitigation = match &args.mitigate_ref {
        None => None,
        Some(ref_path) => {
            let ref_samples = read_samples(ref_path)?;
            if ref_samples.n != samples.n {
                return Err(Error::contract("mitigation reference disagrees on n"));
            }
            let ref_report = estimate_enumerators(&ref_samples, &table, 0, seed)?;
            let raw_ref = EnumeratorVector::float(
                samples.n,
                VectorKind::Sld,
                ref_report.vector(VectorKind::Sld).values.clone(),
            )?;
            let ideal_ref = family_enumerators(
                &qwe_core::states::StateFamily::ProductZero,
                samples.n,
            )?
            .into_float();
            let model = fit_mitigation(&raw_ref, &ideal_ref, "product-zero reference run")?;
            let raw = EnumeratorVector::float(
                samples.n,
                VectorKind::Sld,
                report.vector(VectorKind::Sld).values.clone(),
            )?;
            let mitigated_sld = mitigate(&raw, &model)?;
            let t_prime =
                build_transform(TransformKind::TPrime, samples.n, Precision::Float64)?;
            let t_tilde =
                build_transform(TransformKind::TTilde, samples.n, Precision::Float64)?;
            let mitigated_apd = apply_transform(&t_prime, &mitigated_sld)?;
            let mitigated_tpd = apply_transform(&t_tilde, &mitigated_sld)?;
            Some(MitigationPayload {
                model,
                mitigated_sld,
                mitigated_apd,
                mitigated_tpd,
            })
        }
    };

    let meta = Meta::new(Some(seed), "f64");
    let payload = EstimatePayload { report, mitigation };
    match args.format.as_str() {
        "json" => write_json(args.out.as_deref(), meta, payload),
        "csv" => {
            let mut body = String::from("kind,index,value,ci_low,ci_high\n");
            for est in &payload.report.estimates {
                for i in 0..est.values.len() {
                    body.push_str(&format!(
                        "{},{},{},{},{}\n",
                        est.kind, i, est.values[i], est.ci_low[i], est.ci_high[i]
                    ));
                }
            }
            write_csv(args.out.as_deref(), meta, &body)
        }
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}

// ------------------------------------------------------------------ analyze

#[derive(Args)]
pub struct AnalyzeArgs {
    /// An estimation report or an enumerate output.
    #[arg(long = "in")]
    input: PathBuf,
    /// Interpret the sld/dual-sld estimates as code enumerators with this
    /// logical-qubit count and report the rounded-count distance.
    #[arg(long = "distance-k")]
    distance_k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Serialize)]
struct AnalyzePayload {
    criteria: qwe_core::analysis::CriteriaReport,
    moments: qwe_core::analysis::TpdMoments,
    /// Checked for exact inputs only; statistical fluctuation makes the
    /// bounds meaningless on estimated TPDs.
    #[serde(skip_serializing_if = "Option::is_none")]
    admissibility_violations: Option<Vec<qwe_core::analysis::AdmissibilityViolation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated_distance: Option<usize>,
    /// exact | estimated — provenance of the input vectors.
    input_mode: String,
}

pub fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let value = read_json_value(&args.input)?;
    let (sld, apd, tpd, purity, tol, mode, dual_sld) = if let Some(report) =
        value.get("report").or_else(|| {
            if value.get("estimates").is_some() {
                Some(&value)
            } else {
                None
            }
        }) {
        let report: EstimationReport = serde_json::from_value(report.clone())
            .map_err(|e| Error::Parse(format!("not an estimation report: {e}")))?;
        let n = report.n;
        let grab = |kind: VectorKind| -> Result<EnumeratorVector> {
            EnumeratorVector::float(n, kind, report.vector(kind).values.clone())
        };
        let sld_est = report.vector(VectorKind::Sld);
        let se: Vec<f64> = sld_est
            .ci_low
            .iter()
            .zip(&sld_est.ci_high)
            .map(|(lo, hi)| ((hi - lo) / 3.92).abs())
            .collect();
        (
            grab(VectorKind::Sld)?,
            grab(VectorKind::Apd)?,
            grab(VectorKind::Tpd)?,
            report.purity,
            ZeroTolerance::StandardErrors(se),
            "estimated",
            Some(grab(VectorKind::DualSld)?),
        )
    } else if value.get("sld").is_some() {
        let sld = vector_from_value(value.get("sld").unwrap(), "sld")?;
        let apd = vector_from_value(
            value
                .get("apd")
                .ok_or_else(|| Error::Parse("input lacks an apd vector".into()))?,
            "apd",
        )?;
        let tpd = vector_from_value(
            value
                .get("tpd")
                .ok_or_else(|| Error::Parse("input lacks a tpd vector".into()))?,
            "tpd",
        )?;
        let purity = sld.sum_f64();
        let dual = value
            .get("dual_sld")
            .map(|v| vector_from_value(v, "dual_sld"))
            .transpose()?;
        (sld, apd, tpd, purity, ZeroTolerance::Exact, "exact", dual)
    } else {
        return Err(Error::Parse(
            "input is neither an estimation report nor an enumerate output".into(),
        ));
    };

    let criteria = criteria_report(&sld, &apd, &tpd, purity, &tol)?;
    let moments = tpd_moments(&tpd)?;
    let admissibility_violations = if mode == "exact" {
        Some(tpd_admissibility(&tpd)?)
    } else {
        None
    };
    let estimated_distance = match (args.distance_k, dual_sld) {
        (Some(k), Some(dual)) => {
            let n = sld.n;
            let a_counts: Vec<f64> = sld
                .to_f64()
                .iter()
                .map(|v| v * 2.0f64.powi(n as i32))
                .collect();
            let b_counts: Vec<f64> = dual
                .to_f64()
                .iter()
                .map(|v| v * 2.0f64.powi((n + k) as i32))
                .collect();
            Some(code_distance_from_estimates(&a_counts, &b_counts, true)?)
        }
        (Some(_), None) => {
            return Err(Error::contract(
                "--distance-k needs an input with a dual_sld vector",
            ))
        }
        _ => None,
    };
    let payload = AnalyzePayload {
        criteria,
        moments,
        admissibility_violations,
        estimated_distance,
        input_mode: mode.to_string(),
    };
    let meta = Meta::new(None, "f64");
    match args.format.as_str() {
        "json" => write_json(args.out.as_deref(), meta, payload),
        other => Err(Error::contract(format!("analyze only writes json, got {other:?}"))),
    }
}

// --------------------------------------------------------------------- plan

#[derive(Args)]
pub struct PlanArgs {
    /// Variance-based planning: family whose exact TPD fixes the estimator
    /// variance.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma list or start:stop:step range of qubit counts.
    #[arg(long = "n-list")]
    n_list: Option<String>,
    /// Target total SLD variance.
    #[arg(long = "target-var")]
    target_var: Option<f64>,
    /// Hoeffding planning for one enumerator kind.
    #[arg(long)]
    hoeffding: bool,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    index: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    simultaneous: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Serialize)]
struct PlanRow {
    n: usize,
    shots: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_single_shot_variance: Option<f64>,
}

#[derive(Serialize)]
struct PlanPayload {
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_variance: Option<f64>,
    rows: Vec<PlanRow>,
}

fn parse_n_list(single: Option<usize>, list: Option<&str>) -> Result<Vec<usize>> {
    match (single, list) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(spec)) => {
            if let Some((rest, step)) = spec.rsplit_once(':').and_then(|(head, step)| {
                head.split_once(':').map(|(a, b)| ((a, b), step))
            }) {
                let (a, b) = rest;
                let (start, stop, step): (usize, usize, usize) = (
                    a.parse().map_err(|_| Error::Parse(format!("bad range {spec:?}")))?,
                    b.parse().map_err(|_| Error::Parse(format!("bad range {spec:?}")))?,
                    step.parse().map_err(|_| Error::Parse(format!("bad range {spec:?}")))?,
                );
                if step == 0 {
                    return Err(Error::Parse("range step must be positive".into()));
                }
                Ok((start..=stop).step_by(step).collect())
            } else {
                spec.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad n {s:?}")))
                    })
                    .collect()
            }
        }
        _ => Err(Error::contract("need exactly one of --n / --n-list")),
    }
}

pub fn run_plan(args: PlanArgs) -> Result<()> {
    let ns = parse_n_list(args.n, args.n_list.as_deref())?;
    let payload = if args.hoeffding {
        let kind = VectorKind::from_str(
            &args
                .kind
                .as_deref()
                .ok_or_else(|| Error::contract("--hoeffding needs --kind"))?
                .replace('-', "_"),
        )?;
        let eps = args.eps.ok_or_else(|| Error::contract("--hoeffding needs --eps"))?;
        let delta = args
            .delta
            .ok_or_else(|| Error::contract("--hoeffding needs --delta"))?;
        let rows = ns
            .iter()
            .map(|&n| {
                hoeffding_samples(kind, n, args.index, eps, delta, args.simultaneous).map(
                    |shots| PlanRow {
                        n,
                        shots,
                        total_single_shot_variance: None,
                    },
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PlanPayload {
            mode: format!(
                "hoeffding kind={} eps={eps} delta={delta} simultaneous={}",
                kind, args.simultaneous
            ),
            family: None,
            target_variance: None,
            rows,
        }
    } else {
        let family_spec = args
            .family
            .as_deref()
            .ok_or_else(|| Error::contract("plan needs --family or --hoeffding"))?;
        let target = args
            .target_var
            .ok_or_else(|| Error::contract("variance planning needs --target-var"))?;
        let rows = ns
            .iter()
            .map(|&n| {
                let family = parse_family(family_spec, n)?;
                let (_, _, tpd) = family_all_enumerators(&family, n)?;
                let single = sld_variance(&tpd, 1)?;
                let shots = samples_required(&tpd, target)?;
                Ok(PlanRow {
                    n,
                    shots,
                    total_single_shot_variance: Some(single.total),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PlanPayload {
            mode: "variance".to_string(),
            family: Some(family_spec.to_string()),
            target_variance: Some(target),
            rows,
        }
    };
    let meta = Meta::new(None, "exact");
    match args.format.as_str() {
        "json" => write_json(args.out.as_deref(), meta, payload),
        "csv" => {
            let mut body = String::from("n,shots,total_single_shot_variance\n");
            for row in &payload.rows {
                body.push_str(&format!(
                    "{},{},{}\n",
                    row.n,
                    row.shots,
                    row.total_single_shot_variance
                        .map(|v| v.to_string())
                        .unwrap_or_default()
                ));
            }
            write_csv(args.out.as_deref(), meta, &body)
        }
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}

// --------------------------------------------------------------- thresholds

#[derive(Args)]
pub struct ThresholdsArgs {
    #[arg(long)]
    family: String,
    /// n_body | purity | concurrence | fidelity, or `all`.
    #[arg(long)]
    criterion: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "n-list")]
    n_list: Option<String>,
    /// Witness bound for the fidelity criterion (default 0.5).
    #[arg(long = "fidelity-bound")]
    fidelity_bound: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv (default, plot-ready) or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Serialize)]
struct ThresholdRow {
    family: String,
    n: usize,
    criterion: String,
    threshold: f64,
    fired_at_zero: bool,
}

pub fn run_thresholds(args: ThresholdsArgs) -> Result<()> {
    let ns = parse_n_list(args.n, args.n_list.as_deref())?;
    let criteria: Vec<Criterion> = if args.criterion == "all" {
        vec![
            Criterion::NBody,
            Criterion::Purity,
            Criterion::Concurrence,
            Criterion::Fidelity,
        ]
    } else {
        vec![Criterion::from_str(&args.criterion)?]
    };
    let mut rows = Vec::new();
    for &n in &ns {
        let family = parse_family(&args.family, n)?;
        for &criterion in &criteria {
            let t = match noise_threshold(&family, n, criterion, args.fidelity_bound) {
                Ok(t) => t,
                // `all` skips criteria a family cannot express
                Err(Error::Contract(_)) if args.criterion == "all" => continue,
                Err(e) => return Err(e),
            };
            rows.push(ThresholdRow {
                family: args.family.clone(),
                n,
                criterion: criterion.name().to_string(),
                threshold: t.p_star,
                fired_at_zero: t.fired_at_zero,
            });
        }
    }
    let meta = Meta::new(None, "f64");
    match args.format.as_str() {
        "csv" => {
            let mut body = String::from("family,n,criterion,threshold\n");
            for r in &rows {
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    r.family, r.n, r.criterion, r.threshold
                ));
            }
            write_csv(args.out.as_deref(), meta, &body)
        }
        "json" => {
            #[derive(Serialize)]
            struct ThresholdPayload {
                rows: Vec<ThresholdRow>,
            }
            write_json(args.out.as_deref(), meta, ThresholdPayload { rows })
        }
        other => Err(Error::contract(format!("unknown format {other:?}"))),
    }
}
