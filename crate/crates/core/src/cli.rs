//! The `naimark` command-line tool.
//!
//! Every command prints a human-readable summary, or with `--json` a
//! [`Report`]. Exit codes: 0 when all checks pass, 1 when a verification
//! check fails, 2 for usage, parse and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::complement::{
    complement_bounds, measured_bounds, naimark_complement_from_spectral, unitary_equivalence,
    verify_complement, verify_gram_identity,
};
use crate::completion::{complete_to_tight, CompletionMode};
use crate::error::{NaimarkError, Result};
use crate::frame::{classify, frame_operator, spectral, Frame};
use crate::fusion::{
    angle_transfer, chordal_distance, chordal_distance_sq_forms, chordal_transfer, fusion_bounds, fusion_naimark,
    principal_angles, FusionFrame,
};
use crate::io::{self, digest, Report};
use crate::numkernel::{hermitian_eigendecomposition, Mat};
use crate::properties::{cross_gram_negation, rip_complement_check, rip_constant, subset_carryover};
use crate::random::Sampler;
use crate::{Check, DEFAULT_MULT_TOL, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "naimark", version, about = "Naimark complements of finite frames")]
struct Cli {
    /// Relative tolerance for verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, optimal bounds and structural flags of a frame.
    Analyze { frame: PathBuf },
    /// Vectors completing a Bessel sequence to a tight frame.
    Complete {
        frame: PathBuf,
        #[arg(long)]
        pad: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Naimark complement of a frame.
    Complement {
        frame: PathBuf,
        #[arg(long)]
        pad: Option<f64>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks G*G = t·I − F*F for a given frame and complement.
    Verify {
        frame: PathBuf,
        complement: PathBuf,
        #[arg(long)]
        pad: Option<f64>,
    },
    /// Closed-form complement bounds compared with the built complement.
    Bounds {
        frame: PathBuf,
        #[arg(long)]
        pad: Option<f64>,
    },
    /// Exhaustive RIP constant of a unit-norm frame and of its complement.
    Rip {
        frame: PathBuf,
        #[arg(long = "L", value_name = "L")]
        order: usize,
    },
    /// Complement of a fusion frame.
    FusionComplement {
        fusion: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal angles between the column spans of two bases.
    Angles { first: PathBuf, second: PathBuf },
    /// Chordal distance between the column spans of two bases.
    Chordal { first: PathBuf, second: PathBuf },
    /// Angle and chordal-distance identities for every pair of fusion blocks.
    FusionCheck { fusion: PathBuf },
    /// Unitary equivalence of two complements.
    Equivalence { first: PathBuf, second: PathBuf },
    /// Runs the complement checks on seeded random frames.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        let _ = writeln!(err, "error: --tol must be positive");
        return 2;
    }
    match execute(&cli) {
        Ok(report) => {
            let text = if cli.json { report.to_json() } else { report.to_text() };
            let _ = write!(out, "{text}");
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

struct Inputs {
    texts: Vec<String>,
}

impl Inputs {
    fn read(paths: &[&Path]) -> Result<Inputs> {
        let texts = paths.iter().map(|p| io::read_text(p)).collect::<Result<_>>()?;
        Ok(Inputs { texts })
    }

    fn digest(&self) -> String {
        digest(self.texts.iter().map(|t| t.as_bytes()))
    }

    fn matrix(&self, i: usize) -> Result<Mat> {
        io::parse_matrix(&self.texts[i])
    }

    fn frame(&self, i: usize) -> Result<Frame> {
        Frame::new(self.matrix(i)?)
    }

    fn fusion(&self, i: usize) -> Result<FusionFrame> {
        io::parse_fusion_frame(&self.texts[i])
    }

    fn basis(&self, i: usize) -> Result<Mat> {
        let q = self.matrix(i)?;
        let defect = q.orthonormal_columns_defect();
        if defect > 1e-9 {
            return Err(NaimarkError::invalid(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(q)
    }
}

fn mode(pad: Option<f64>) -> CompletionMode {
    pad.map_or(CompletionMode::Minimal, CompletionMode::Pad)
}

fn emit_matrix(report: &mut Report, name: &str, m: &Mat, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            io::write_matrix(path, m)?;
            report.artifact_path(name, path);
        }
        None => report.inline_matrix(name, m),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Report> {
    let tol = cli.tol;
    match &cli.command {
        Command::Analyze { frame } => analyze(frame, tol),
        Command::Complete { frame, pad, out } => complete(frame, *pad, out.as_deref(), tol),
        Command::Complement {
            frame,
            pad,
            verify,
            out,
        } => complement(frame, *pad, *verify, out.as_deref(), tol),
        Command::Verify {
            frame,
            complement,
            pad,
        } => verify(frame, complement, *pad, tol),
        Command::Bounds { frame, pad } => bounds(frame, *pad, tol),
        Command::Rip { frame, order } => rip(frame, *order, tol),
        Command::FusionComplement { fusion, out } => fusion_complement(fusion, out.as_deref(), tol),
        Command::Angles { first, second } => angles(first, second),
        Command::Chordal { first, second } => chordal(first, second, tol),
        Command::FusionCheck { fusion } => fusion_check(fusion, tol),
        Command::Equivalence { first, second } => equivalence(first, second, tol),
        Command::Selftest { seed, cases } => selftest(*seed, *cases, tol),
    }
}

fn analyze(path: &Path, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let f = inputs.frame(0)?;
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    let class = classify(&f, tol)?;
    let mut r = Report::new("analyze", inputs.digest());
    r.value("field", f.field());
    r.value("dim", f.dim());
    r.value("len", f.len());
    r.value("eigenvalues", &spec.eigenvalues);
    r.value("upper_bound", spec.upper);
    r.value("lower_bound", spec.lower);
    r.value("top_multiplicity", spec.top_multiplicity);
    r.value("classification", &class);
    let eig = hermitian_eigendecomposition(&frame_operator(&f))?;
    let residual = eig.recompose().max_abs_diff(&frame_operator(&f));
    r.check("spectral_recomposition", Check::new(residual, tol * spec.upper.max(1.0)));
    Ok(r)
}

fn complete(path: &Path, pad: Option<f64>, out: Option<&Path>, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let f = inputs.frame(0)?;
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    let c = complete_to_tight(&f, &spec, mode(pad))?;
    let extended = Frame::new(Mat::hstack(&[f.synthesis(), &c.vectors]))?;
    let t = c.target_bound;
    let residual = frame_operator(&extended)
        .max_abs_diff(&Mat::identity(f.dim(), f.field()).scale(t));
    let mut r = Report::new("complete", inputs.digest());
    r.value("upper_bound", spec.upper);
    r.value("target_bound", t);
    r.value("added_vectors", c.vectors.cols());
    r.check("tightness", Check::new(residual, tol * t));
    emit_matrix(&mut r, "completion", &c.vectors, out)?;
    Ok(r)
}

fn complement(
    path: &Path,
    pad: Option<f64>,
    verify: bool,
    out: Option<&Path>,
    tol: f64,
) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let f = inputs.frame(0)?;
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    let res = naimark_complement_from_spectral(&f, &spec, mode(pad))?;
    let mut r = Report::new("complement", inputs.digest());
    r.value("upper_bound", res.upper);
    r.value("target_bound", res.target_bound);
    r.value("top_multiplicity", res.top_multiplicity);
    r.value("embedding_dim", res.embedding_dim);
    r.value("complement_dim", res.complement_dim());
    r.value("complement_rank", res.rank());
    if res.complement_dim() == 0 {
        r.notices.push("the frame is already tight: the complement is empty".into());
    }
    if verify {
        let v = verify_complement(&f, &res, tol);
        r.check("gram_identity", v.gram);
        r.check("orthogonality", v.orthogonality);
        r.check("norms", v.norms);
        if let Some(u) = v.unitarity {
            r.check("unitarity", u);
        }
    }
    emit_matrix(&mut r, "complement", &res.complement, out)?;
    Ok(r)
}

fn verify(frame: &Path, g: &Path, pad: Option<f64>, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[frame, g])?;
    let f = inputs.frame(0)?;
    let g = inputs.matrix(1)?;
    if g.cols() != f.len() {
        return Err(NaimarkError::invalid(format!(
            "complement has {} columns, frame has {} vectors",
            g.cols(),
            f.len()
        )));
    }
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    let m = mode(pad);
    m.validate(spec.upper)?;
    let t = m.target_bound(spec.upper);
    let v = verify_gram_identity(&f, &g, t, tol);
    let mut r = Report::new("verify", inputs.digest());
    r.value("target_bound", t);
    r.check("gram_identity", v.gram);
    r.check("orthogonality", v.orthogonality);
    r.check("norms", v.norms);
    Ok(r)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn bounds(path: &Path, pad: Option<f64>, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let f = inputs.frame(0)?;
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    let m = mode(pad);
    let closed = complement_bounds(&spec, f.len(), m)?;
    let res = naimark_complement_from_spectral(&f, &spec, m)?;
    let measured = measured_bounds(&res.complement, res.target_bound);
    let mut r = Report::new("bounds", inputs.digest());
    r.value("closed_form", closed);
    r.value("measured", measured);
    match (closed.lower.zip(closed.upper), measured) {
        (Some((lo, hi)), Some((mlo, mhi))) => {
            r.check("lower_bound", Check::new(relative_gap(lo, mlo), tol));
            r.check("upper_bound", Check::new(relative_gap(hi, mhi), tol));
        }
        (None, None) => r.notices.push("the complement is empty".into()),
        _ => r.check("nonzero_spectrum", Check::new(f64::INFINITY, tol)),
    }
    Ok(r)
}

fn rip(path: &Path, order: usize, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let f = inputs.frame(0)?;
    let mut r = Report::new("rip", inputs.digest());
    let spec = spectral(&f, DEFAULT_MULT_TOL)?;
    if spec.upper <= 1.0 + tol {
        let frame = rip_constant(&f, order)?;
        r.value("frame", frame);
        r.notices.push(format!(
            "upper bound {} is not above 1; the complement cannot be rescaled to unit norm",
            spec.upper
        ));
        return Ok(r);
    }
    let t = rip_complement_check(&f, order, tol)?;
    r.value("upper_bound", t.upper);
    r.value("frame", &t.frame);
    r.value("complement", &t.complement);
    r.value("predicted", t.predicted);
    r.value("alternative_factor", t.alternative);
    r.check("rip_transfer", t.check);
    Ok(r)
}

fn fusion_complement(path: &Path, out: Option<&Path>, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let ff = inputs.fusion(0)?;
    let (lower, upper) = fusion_bounds(&ff)?;
    let fc = fusion_naimark(&ff, DEFAULT_MULT_TOL)?;
    let f = crate::fusion::fusion_to_frame(&ff)?;
    let v = verify_complement(&f, &fc.result, tol);
    let mut r = Report::new("fusion-complement", inputs.digest());
    r.value("lower_bound", lower);
    r.value("upper_bound", upper);
    r.value("complement_dim", fc.fusion.ambient_dim());
    r.value("block_map", &fc.block_map);
    r.value(
        "complement_weights",
        fc.fusion.blocks().iter().map(|b| b.weight).collect::<Vec<_>>(),
    );
    r.notices.extend(fc.notices());
    r.check("gram_identity", v.gram);
    if let Some(u) = v.unitarity {
        r.check("unitarity", u);
    }
    let text = io::serialize_fusion_frame(&fc.fusion);
    match out {
        Some(p) => {
            io::write_text(p, &text)?;
            r.artifact_path("fusion_complement", p);
        }
        None => {
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| NaimarkError::invalid(e.to_string()))?;
            r.artifacts.insert("fusion_complement".into(), v);
        }
    }
    Ok(r)
}

fn angles(first: &Path, second: &Path) -> Result<Report> {
    let inputs = Inputs::read(&[first, second])?;
    let pa = principal_angles(&inputs.basis(0)?, &inputs.basis(1)?)?;
    let mut r = Report::new("angles", inputs.digest());
    r.value("cosines", &pa.cosines);
    r.value("angles", &pa.angles);
    Ok(r)
}

fn chordal(first: &Path, second: &Path, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[first, second])?;
    let (q1, q2) = (inputs.basis(0)?, inputs.basis(1)?);
    let forms = chordal_distance_sq_forms(&q1, &q2)?;
    let mut r = Report::new("chordal", inputs.digest());
    r.value("distance", chordal_distance(&q1, &q2)?);
    r.value("distance_sq", forms.via_angles);
    let scale = (q1.cols() as f64).max(1.0);
    r.check(
        "angle_trace_agreement",
        Check::new((forms.via_angles - forms.via_trace).abs(), tol * scale),
    );
    Ok(r)
}

fn fusion_check(path: &Path, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[path])?;
    let ff = inputs.fusion(0)?;
    let fc = fusion_naimark(&ff, DEFAULT_MULT_TOL)?;
    let mut r = Report::new("fusion-check", inputs.digest());
    r.value("upper_bound", fc.upper);
    r.notices.extend(fc.notices());
    let kept: Vec<usize> = (0..ff.len()).filter(|k| fc.block_map[*k].is_some()).collect();
    for (i, &k1) in kept.iter().enumerate() {
        for &k2 in &kept[i + 1..] {
            let a = angle_transfer(&ff, &fc, k1, k2, tol)?;
            r.check(format!("angles[{k1},{k2}]"), a.check);
            if ff.blocks()[k1].dim() == ff.blocks()[k2].dim() {
                let c = chordal_transfer(&ff, &fc, k1, k2, tol)?;
                r.value(
                    &format!("chordal_sq[{k1},{k2}]"),
                    serde_json::json!({
                        "measured": c.measured_sq,
                        "predicted": c.predicted_sq,
                        "predicted_with_unit_bound": c.parseval_predicted_sq,
                    }),
                );
                r.check(format!("chordal[{k1},{k2}]"), c.check);
            }
        }
    }
    Ok(r)
}

fn equivalence(first: &Path, second: &Path, tol: f64) -> Result<Report> {
    let inputs = Inputs::read(&[first, second])?;
    let eq = unitary_equivalence(&inputs.matrix(0)?, &inputs.matrix(1)?, tol)?;
    let mut r = Report::new("equivalence", inputs.digest());
    r.check("gram_match", Check::new(eq.gram_residual, eq.tolerance));
    if let Some(res) = eq.alignment_residual {
        r.check("alignment", Check::new(res, eq.tolerance));
    }
    if let Some(u) = &eq.unitary {
        r.inline_matrix("unitary", u);
    }
    Ok(r)
}

fn worst(slot: &mut Option<Check>, c: Check) {
    match slot {
        Some(s) if s.residual / s.tolerance >= c.residual / c.tolerance => {}
        _ => *slot = Some(c),
    }
}

fn selftest(seed: u64, cases: usize, tol: f64) -> Result<Report> {
    let params = format!("seed={seed};cases={cases}");
    let mut r = Report::new("selftest", digest([params.as_bytes()]));
    r.seed = Some(seed);
    let mut rng = Sampler::new(seed);
    let mut gram = None;
    let mut unitarity = None;
    let mut cross = None;
    let mut bounds_gap: f64 = 0.0;
    let mut carry_ok = true;
    for _ in 0..cases {
        let field = rng.field();
        let m = rng.range(1, 8);
        let n = rng.range(1, 12);
        let f = rng.frame(field, m, n);
        let spec = spectral(&f, DEFAULT_MULT_TOL)?;
        if !(spec.upper > 0.0) {
            continue;
        }
        let res = naimark_complement_from_spectral(&f, &spec, CompletionMode::Minimal)?;
        let v = verify_complement(&f, &res, tol);
        worst(&mut gram, v.gram);
        if let Some(u) = v.unitarity {
            worst(&mut unitarity, u);
        }
        worst(&mut cross, cross_gram_negation(&f, &res.complement, tol)?);
        let closed = complement_bounds(&spec, n, CompletionMode::Minimal)?;
        if let (Some(lo), Some(hi), Some((mlo, mhi))) = (
            closed.lower,
            closed.upper,
            measured_bounds(&res.complement, res.target_bound),
        ) {
            bounds_gap = bounds_gap.max(relative_gap(lo, mlo)).max(relative_gap(hi, mhi));
        }
        let all: Vec<usize> = (0..n).collect();
        carry_ok &= subset_carryover(&f, &res.complement, &all, res.target_bound, tol)?.passed;
    }
    r.value("cases", cases);
    for (name, c) in [("gram_identity", gram), ("unitarity", unitarity), ("cross_gram", cross)] {
        r.check(name, c.unwrap_or(Check::vacuous(tol)));
    }
    r.check("bounds", Check::new(bounds_gap, 1e-8));
    r.check("subset_carryover", Check::new(if carry_ok { 0.0 } else { 1.0 }, 0.0));
    Ok(r)
}
