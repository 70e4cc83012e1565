//! The full pipeline from an input file to a cited verdict, and the JSON
//! document describing every step.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use npi_core::braid::BraidWord;
use npi_core::cover::{build_cover_window, relator_span, verify_weak_slim_certificate, CoverError};
use npi_core::homology::{find_weight_homomorphisms, h1_structure, is_generalized_wirtinger};
use npi_core::logs::{adian_normalize, adian_npi_check, artin_presentation, lof_npi_check, ForestReport, Multigraph};
use npi_core::minima::{
    check_presentation, ConcatCertificate, ConcatVerdict, Mode, MinimaMultiset, PresentationCheck,
};
use npi_core::oracle::{npi_scan, ScanResult};
use npi_core::orders::{Assignment, BraidTarget, IntTarget, LexTarget, OrderError, OrderedTarget, TargetSpec};
use npi_core::presentation::Presentation;
use npi_core::verdict::{first_failure, Criterion, Hypothesis, Verdict};

use crate::format::Input;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("{0}")]
    Usage(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<OrderError> for ReportError {
    fn from(e: OrderError) -> Self {
        ReportError::Usage(e.to_string())
    }
}

/// How to choose `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiSpec {
    /// Every primitive integer weight vector up to the search bound.
    Auto,
    AllOnes,
    /// Generator `i` to the Artin generator `σ_{i+1}`.
    Standard,
    Explicit(Vec<(String, String)>),
}

impl std::str::FromStr for PhiSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(PhiSpec::Auto),
            "all-ones" => Ok(PhiSpec::AllOnes),
            "standard" => Ok(PhiSpec::Standard),
            _ => s
                .split(',')
                .map(|part| match part.split_once('=') {
                    Some((g, v)) if !g.trim().is_empty() => Ok((g.trim().to_string(), v.trim().to_string())),
                    _ => Err(format!("bad phi entry {part:?}; expected name=value")),
                })
                .collect::<Result<_, _>>()
                .map(PhiSpec::Explicit),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub target: TargetSpec,
    pub phi: PhiSpec,
    pub bound: i64,
    pub modes: Vec<Mode>,
    pub window: Option<(i64, i64)>,
    pub oracle: Option<(usize, usize)>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            target: TargetSpec::Int,
            phi: PhiSpec::Auto,
            bound: 3,
            modes: vec![Mode::Min, Mode::Max],
            window: None,
            oracle: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub kind: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Echo {
    pub group: String,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub generalized_wirtinger: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageEcho {
    pub gen: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountEcho {
    pub gen: String,
    pub pos: u32,
    pub neg: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultisetEcho {
    pub relator: usize,
    pub word: String,
    pub extremal: String,
    pub counts: Vec<CountEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEcho {
    pub relator: usize,
    pub gen: String,
    pub pos: u32,
    pub neg: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEcho {
    pub ordering: Vec<usize>,
    pub witnesses: Vec<WitnessEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatAttempt {
    pub target: String,
    pub phi: Vec<ImageEcho>,
    pub flips: Vec<String>,
    pub mode: Mode,
    pub hypotheses: Vec<Hypothesis>,
    pub multisets: Vec<MultisetEcho>,
    pub outcome: String,
    pub certificate: Option<CertificateEcho>,
    pub maximal_placeable: Option<Vec<Vec<usize>>>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEcho {
    pub u: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestEcho {
    pub criterion: String,
    pub hypotheses: Vec<Hypothesis>,
    pub pairs: Vec<PairEcho>,
    pub graph_i: Option<Vec<[String; 2]>>,
    pub graph_t: Option<Vec<[String; 2]>>,
    pub i_cycle: Option<Vec<usize>>,
    pub t_cycle: Option<Vec<usize>>,
    pub min_certificate: Option<CertificateEcho>,
    pub max_certificate: Option<CertificateEcho>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedCountEcho {
    pub relator: usize,
    pub witness: String,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEcho {
    pub window: [i64; 2],
    pub mode: Mode,
    pub cells: usize,
    pub passed: bool,
    pub checks: Vec<String>,
    pub signed_counts: Vec<SignedCountEcho>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeEcho {
    pub src: usize,
    pub dst: usize,
    pub gen: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexEcho {
    pub vertices: usize,
    pub edges: Vec<EdgeEcho>,
    pub faces: Vec<[usize; 2]>,
    pub chi: i64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleEcho {
    pub bounds: [usize; 2],
    pub enumerated: usize,
    pub candidates: Vec<ComplexEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub input: InputEcho,
    pub diagnostics: Vec<String>,
    pub h1: H1Echo,
    pub hypotheses: Vec<Hypothesis>,
    pub forest: Option<ForestEcho>,
    pub concat: Vec<ConcatAttempt>,
    pub concat_note: Option<String>,
    pub cover: Option<CoverEcho>,
    pub oracle: Option<OracleEcho>,
    pub verdict: Verdict,
}

fn gen_name(p: &Presentation, g: usize) -> String {
    p.generators.get(g).cloned().unwrap_or_else(|| format!("?{g}"))
}

pub fn echo_certificate(p: &Presentation, c: &ConcatCertificate) -> CertificateEcho {
    CertificateEcho {
        ordering: c.ordering.clone(),
        witnesses: c
            .witnesses
            .iter()
            .map(|w| WitnessEcho { relator: w.relator, gen: gen_name(p, w.gen), pos: w.pos, neg: w.neg })
            .collect(),
    }
}

pub fn echo_multiset<T: OrderedTarget>(target: &T, p: &Presentation, m: &MinimaMultiset<T::Element>) -> MultisetEcho {
    MultisetEcho {
        relator: m.relator,
        word: p.format_word(&p.relators[m.relator]),
        extremal: target.format_element(&m.extremal),
        counts: m
            .counts
            .iter()
            .map(|(&g, c)| CountEcho { gen: gen_name(p, g), pos: c.pos, neg: c.neg })
            .collect(),
    }
}

fn echo_edges(p: &Presentation, g: &Multigraph) -> Vec<[String; 2]> {
    g.edges.iter().map(|&(a, b)| [gen_name(p, a), gen_name(p, b)]).collect()
}

fn echo_forest(p: &Presentation, f: &ForestReport, criterion: Criterion) -> ForestEcho {
    ForestEcho {
        criterion: criterion.label().to_string(),
        hypotheses: f.hypotheses.clone(),
        pairs: f
            .form
            .iter()
            .flat_map(|form| form.pairs.iter())
            .map(|pr| PairEcho { u: p.format_word(&pr.u), v: p.format_word(&pr.v) })
            .collect(),
        graph_i: f.graph_i.as_ref().map(|g| echo_edges(p, g)),
        graph_t: f.graph_t.as_ref().map(|g| echo_edges(p, g)),
        i_cycle: f.i_cycle.clone(),
        t_cycle: f.t_cycle.clone(),
        min_certificate: f.min_certificate.as_ref().map(|c| echo_certificate(p, c)),
        max_certificate: f.max_certificate.as_ref().map(|c| echo_certificate(p, c)),
        verdict: f.verdict.clone(),
    }
}

/// A concatenability attempt together with what the cover check needs.
pub struct Attempt {
    pub echo: ConcatAttempt,
    /// For integer targets: flipped presentation, nonnegative weights and the
    /// certificate, when concatenable.
    pub int_data: Option<(Presentation, Vec<i64>, ConcatCertificate)>,
}

fn attempt<T: OrderedTarget>(
    p: &Presentation,
    target: &T,
    assignment: &Assignment<T::Element>,
    mode: Mode,
    int_weights: impl Fn(&Assignment<T::Element>) -> Option<Vec<i64>>,
) -> Result<Attempt, ReportError> {
    let check: PresentationCheck<T::Element> = check_presentation(p, target, assignment, mode)?;
    let phi = assignment
        .images
        .iter()
        .enumerate()
        .map(|(g, img)| ImageEcho {
            gen: gen_name(p, g),
            image: img.as_ref().map_or("?".to_string(), |e| target.format_element(e)),
        })
        .collect();
    let (outcome, certificate, maximal, reason) = match &check.verdict {
        ConcatVerdict::Concatenable(c) => ("Concatenable", Some(c.clone()), None, None),
        ConcatVerdict::NotConcatenable(f) => ("NotConcatenable", None, Some(f.maximal_placeable.clone()), None),
        ConcatVerdict::HypothesisFailure(r) => ("HypothesisFailure", None, None, Some(r.clone())),
    };
    let int_data = certificate
        .as_ref()
        .and_then(|c| int_weights(&check.assignment).map(|w| (check.presentation.clone(), w, c.clone())));
    let echo = ConcatAttempt {
        target: target.name(),
        phi,
        flips: check.flips.iter().map(|&g| gen_name(p, g)).collect(),
        mode,
        hypotheses: check.hypotheses.clone(),
        multisets: check.multisets.iter().map(|m| echo_multiset(target, &check.presentation, m)).collect(),
        outcome: outcome.to_string(),
        certificate: certificate.as_ref().map(|c| echo_certificate(&check.presentation, c)),
        maximal_placeable: maximal,
        reason,
    };
    Ok(Attempt { echo, int_data })
}

fn explicit<T: OrderedTarget>(
    p: &Presentation,
    target: &T,
    list: &[(String, String)],
) -> Result<Assignment<T::Element>, ReportError> {
    let mut images: Vec<Option<T::Element>> = vec![None; p.num_generators()];
    for (name, value) in list {
        let g = p
            .generator_index(name)
            .ok_or_else(|| ReportError::Usage(format!("phi names unknown generator {name:?}")))?;
        if images[g].is_some() {
            return Err(ReportError::Usage(format!("phi assigns {name:?} twice")));
        }
        images[g] = Some(target.parse_element(value)?);
    }
    if let Some(g) = images.iter().position(|x| x.is_none()) {
        return Err(ReportError::Usage(format!("phi does not assign generator {:?}", p.generators[g])));
    }
    Ok(Assignment { images })
}

fn int_weights(a: &Assignment<BigInt>) -> Option<Vec<i64>> {
    a.images.iter().map(|x| x.as_ref().and_then(|v| i64::try_from(v).ok())).collect()
}

/// Runs the concatenability check for every requested `φ` and mode.
/// Returns the attempts and a note when no `φ` could be formed.
pub fn concat_attempts(p: &Presentation, opts: &ReportOptions) -> Result<(Vec<Attempt>, Option<String>), ReportError> {
    let n = p.num_generators();
    let mut out = Vec::new();
    let mut note = None;
    match opts.target {
        TargetSpec::Int => {
            let weights: Vec<Vec<i64>> = match &opts.phi {
                PhiSpec::Auto => match find_weight_homomorphisms(p, opts.bound) {
                    Ok(c) => c.into_iter().map(|w| w.weights.weights).collect(),
                    Err(e) => {
                        note = Some(e.to_string());
                        Vec::new()
                    }
                },
                PhiSpec::AllOnes => vec![vec![1; n]],
                PhiSpec::Standard => {
                    return Err(ReportError::Usage("phi `standard` is only defined for braid targets".into()))
                }
                PhiSpec::Explicit(list) => {
                    let a = explicit(p, &IntTarget, list)?;
                    vec![int_weights(&a).ok_or_else(|| ReportError::Usage("weights must fit in 64 bits".into()))?]
                }
            };
            for w in weights {
                for &mode in &opts.modes {
                    out.push(attempt(p, &IntTarget, &Assignment::from_weights(&w), mode, int_weights)?);
                }
            }
        }
        TargetSpec::Lex(dim) => {
            let target = LexTarget { dim };
            let a = match &opts.phi {
                PhiSpec::Explicit(list) => explicit(p, &target, list)?,
                PhiSpec::AllOnes => {
                    let mut e1 = vec![BigInt::from(0); dim];
                    e1[0] = BigInt::from(1);
                    Assignment::new(vec![e1; n])
                }
                _ => return Err(ReportError::Usage("zlex targets need --phi all-ones or an explicit list".into())),
            };
            for &mode in &opts.modes {
                out.push(attempt(p, &target, &a, mode, |_| None)?);
            }
        }
        TargetSpec::Braid { strands, opposite } => {
            let target = BraidTarget { strands, opposite };
            let a = match &opts.phi {
                PhiSpec::Explicit(list) => explicit(p, &target, list)?,
                PhiSpec::Standard => {
                    if n + 1 > strands {
                        return Err(ReportError::Usage(format!("{n} generators need at least {} strands", n + 1)));
                    }
                    Assignment::new((1..=n as i32).map(BraidWord::sigma).collect())
                }
                _ => {
                    return Err(ReportError::Usage(
                        "braid targets need --phi standard or an explicit list such as x=s1,y=s2".into(),
                    ))
                }
            };
            for &mode in &opts.modes {
                out.push(attempt(p, &target, &a, mode, |_| None)?);
            }
        }
    }
    Ok((out, note))
}

/// Verifies the slim-cover certificate for an integer certificate. Maxima
/// certificates are checked as minima of the presentation with every
/// generator inverted.
pub fn cover_check(
    p: &Presentation,
    weights: &[i64],
    cert: &ConcatCertificate,
    mode: Mode,
    window: Option<(i64, i64)>,
) -> Result<CoverEcho, CoverError> {
    let (q, cert) = match mode {
        Mode::Min => (p.clone(), cert.clone()),
        Mode::Max => {
            let all: Vec<usize> = (0..p.num_generators()).collect();
            let mut c = cert.clone();
            for w in &mut c.witnesses {
                std::mem::swap(&mut w.pos, &mut w.neg);
            }
            (p.flip_generators(&all), c)
        }
    };
    let (lo, hi) = window.unwrap_or_else(|| {
        let s = q.relators.iter().map(|r| relator_span(r, weights)).max().unwrap_or(0);
        (-s, s)
    });
    let win = build_cover_window(&q, weights, lo, hi)?;
    let mut echo = CoverEcho {
        window: [lo, hi],
        mode,
        cells: win.cells.len(),
        passed: false,
        checks: Vec::new(),
        signed_counts: Vec::new(),
        failures: Vec::new(),
    };
    match verify_weak_slim_certificate(&q, weights, &cert, &win) {
        Ok(report) => {
            echo.passed = true;
            echo.checks = report.checks.iter().map(|s| s.to_string()).collect();
            echo.signed_counts = report
                .signed_counts
                .iter()
                .map(|(&relator, &count)| SignedCountEcho {
                    relator,
                    witness: gen_name(&q, report.slim.witness[&relator]),
                    count,
                })
                .collect();
        }
        Err(CoverError::CertificateMismatch(f)) => {
            echo.failures = f.iter().map(|x| x.to_string()).collect();
        }
        Err(e) => return Err(e),
    }
    Ok(echo)
}

fn echo_scan(p: &Presentation, s: &ScanResult) -> OracleEcho {
    OracleEcho {
        bounds: [s.max_edges, s.max_faces],
        enumerated: s.enumerated,
        candidates: s
            .candidates
            .iter()
            .map(|c| ComplexEcho {
                vertices: c.complex.vertices,
                edges: c
                    .complex
                    .edges
                    .iter()
                    .map(|e| EdgeEcho { src: e.src, dst: e.dst, gen: gen_name(p, e.gen) })
                    .collect(),
                faces: c.complex.faces.iter().map(|f| [f.relator, f.start]).collect(),
                chi: c.chi,
                note: c.note.clone(),
            })
            .collect(),
    }
}

fn input_echo(input: &Input, p: &Presentation) -> InputEcho {
    let edges = match input {
        Input::Presentation(_) => None,
        Input::Log(l) => Some(
            l.edges
                .iter()
                .map(|e| vec![l.vertices[e.i].clone(), l.vertices[e.lambda].clone(), l.vertices[e.t].clone()])
                .collect(),
        ),
        Input::Artin(g) => Some(
            g.edges
                .iter()
                .map(|&(s, t, m)| vec![g.vertices[s].clone(), g.vertices[t].clone(), m.to_string()])
                .collect(),
        ),
    };
    InputEcho {
        kind: input.to_string(),
        generators: p.generators.clone(),
        relators: p.relators.iter().map(|r| p.format_word(r)).collect(),
        edges,
    }
}

pub fn input_presentation(input: &Input) -> Result<Presentation, ReportError> {
    match input {
        Input::Presentation(p) => Ok(p.clone()),
        Input::Log(l) => Ok(l.to_presentation()),
        Input::Artin(g) => artin_presentation(g).map_err(|e| ReportError::Usage(e.to_string())),
    }
}

fn forest_branch(input: &Input, p: &Presentation) -> Result<Option<(ForestReport, Criterion)>, ReportError> {
    let internal = |e: npi_core::logs::LogsError| ReportError::Internal(e.to_string());
    Ok(match input {
        Input::Log(l) => Some((lof_npi_check(l).map_err(internal)?, Criterion::LofForest)),
        Input::Artin(_) => Some((adian_npi_check(p).map_err(internal)?, Criterion::AdianForest)),
        Input::Presentation(_) => {
            let (reduced, _) = p.cyclically_reduced();
            if reduced.validate().is_empty() && adian_normalize(&reduced).is_ok() {
                Some((adian_npi_check(&reduced).map_err(internal)?, Criterion::AdianForest))
            } else {
                None
            }
        }
    })
}

pub fn full_report(input: &Input, opts: &ReportOptions) -> Result<ReportDocument, ReportError> {
    let p = input_presentation(input)?;
    let diagnostics: Vec<String> = p.validate().iter().map(|d| d.to_string()).collect();
    let h1 = h1_structure(&p);
    let wirt = is_generalized_wirtinger(&p);
    let h1_echo = H1Echo {
        group: h1.to_string(),
        free_rank: h1.free_rank,
        torsion: h1.torsion.clone(),
        generalized_wirtinger: wirt.holds,
    };
    let (reduced, _) = p.cyclically_reduced();

    let forest = forest_branch(input, &p)?;
    let (attempts, concat_note) = concat_attempts(&p, opts)?;

    let concat_criterion = match opts.target {
        TargetSpec::Int => Criterion::WeakConcatenabilityZ,
        _ => Criterion::WeakConcatenabilityOrdered,
    };
    let concat_win = attempts.iter().position(|a| a.echo.outcome == "Concatenable");
    let forest_win = forest.as_ref().filter(|(f, _)| f.verdict.is_certified());

    // graph inputs are decided by the forest criterion first
    let prefer_forest = !matches!(input, Input::Presentation(_));
    let mut cover = None;
    let forest_first = forest_win.filter(|_| prefer_forest || concat_win.is_none());
    let (verdict, hypotheses) = match (concat_win, forest_first) {
        (_, Some((f, c))) => {
            let cert = f.min_certificate.as_ref().map(|c| (c, Mode::Min)).or(f.max_certificate.as_ref().map(|c| (c, Mode::Max)));
            if let Some((cert, mode)) = cert {
                let ones = vec![1; reduced.num_generators()];
                cover = Some(run_cover(&reduced, &ones, cert, mode, opts.window)?);
            }
            (Verdict::NpiCertified(*c), f.hypotheses.clone())
        }
        (Some(k), _) => {
            let a = &attempts[k];
            if let Some((q, w, cert)) = &a.int_data {
                cover = Some(run_cover(q, w, cert, a.echo.mode, opts.window)?);
            }
            (Verdict::NpiCertified(concat_criterion), a.echo.hypotheses.clone())
        }
        (None, None) => undecided(&attempts, forest.as_ref().map(|(f, _)| f), &concat_note, &wirt.reason, wirt.holds),
    };

    let oracle = match opts.oracle {
        Some((e, f)) => {
            let scan = npi_scan(&reduced, e, f).map_err(|e| ReportError::Usage(e.to_string()))?;
            Some(echo_scan(&reduced, &scan))
        }
        None => None,
    };

    Ok(ReportDocument {
        input: input_echo(input, &p),
        diagnostics,
        h1: h1_echo,
        hypotheses,
        forest: forest.as_ref().map(|(f, c)| echo_forest(&reduced, f, *c)),
        concat: attempts.into_iter().map(|a| a.echo).collect(),
        concat_note,
        cover,
        oracle,
        verdict,
    })
}

fn run_cover(
    p: &Presentation,
    weights: &[i64],
    cert: &ConcatCertificate,
    mode: Mode,
    window: Option<(i64, i64)>,
) -> Result<CoverEcho, ReportError> {
    let echo = match cover_check(p, weights, cert, mode, window) {
        Ok(e) => e,
        Err(CoverError::WindowTooSmall { lo, hi, span }) => {
            return Err(ReportError::Usage(format!("window [{lo}, {hi}] is narrower than the relator span {span}")))
        }
        Err(e) => return Err(ReportError::Internal(e.to_string())),
    };
    if !echo.passed {
        return Err(ReportError::Internal(format!("cover certificate rejected: {}", echo.failures.join("; "))));
    }
    Ok(echo)
}

/// No criterion certified: `NotDecided` if some criterion ran with its
/// hypotheses satisfied, otherwise the first failed hypothesis.
fn undecided(
    attempts: &[Attempt],
    forest: Option<&ForestReport>,
    note: &Option<String>,
    wirtinger_reason: &str,
    wirtinger: bool,
) -> (Verdict, Vec<Hypothesis>) {
    if let Some(a) = attempts.iter().find(|a| a.echo.outcome == "NotConcatenable") {
        return (Verdict::NotDecided, a.echo.hypotheses.clone());
    }
    if let Some(f) = forest.filter(|f| f.verdict == Verdict::NotDecided) {
        return (Verdict::NotDecided, f.hypotheses.clone());
    }
    if let Some(a) = attempts.first() {
        let h = &a.echo.hypotheses;
        if let Some(fail) = first_failure(h) {
            return (Verdict::HypothesisFailure(format!("{}: {}", fail.name, fail.detail)), h.clone());
        }
        let reason = a.echo.reason.clone().unwrap_or_else(|| "concatenability check failed".into());
        return (Verdict::HypothesisFailure(reason), h.clone());
    }
    if let Some(f) = forest {
        return (f.verdict.clone(), f.hypotheses.clone());
    }
    if !wirtinger {
        let h = Hypothesis::check("generalized Wirtinger", false, npi_core::minima::CITE_WIRTINGER, wirtinger_reason);
        return (Verdict::HypothesisFailure(format!("generalized Wirtinger: {wirtinger_reason}")), vec![h]);
    }
    match note {
        Some(n) => (Verdict::HypothesisFailure(n.clone()), Vec::new()),
        None => (Verdict::NotDecided, Vec::new()),
    }
}

fn status(h: &Hypothesis) -> &'static str {
    match h.status {
        npi_core::verdict::HypothesisStatus::Pass => "pass",
        npi_core::verdict::HypothesisStatus::Fail => "FAIL",
        npi_core::verdict::HypothesisStatus::Assumed => "assumed",
    }
}

pub fn render_hypotheses(out: &mut String, hs: &[Hypothesis]) {
    for h in hs {
        let _ = writeln!(out, "  [{}] {}: {} ({})", status(h), h.name, h.detail, h.citation);
    }
}

pub fn render_attempt(out: &mut String, a: &ConcatAttempt) {
    let phi: Vec<String> = a.phi.iter().map(|i| format!("{}={}", i.gen, i.image)).collect();
    let _ = writeln!(out, "phi: {} -> {}  mode: {:?}", phi.join(","), a.target, a.mode);
    if !a.flips.is_empty() {
        let _ = writeln!(out, "  inverted generators: {}", a.flips.join(" "));
    }
    for m in &a.multisets {
        let counts: Vec<String> = m.counts.iter().map(|c| format!("{}:(+{},-{})", c.gen, c.pos, c.neg)).collect();
        let _ = writeln!(out, "  r{}: {}  extremum {}  multiset {{{}}}", m.relator + 1, m.word, m.extremal, counts.join(", "));
    }
    match (&a.certificate, &a.maximal_placeable, &a.reason) {
        (Some(c), _, _) => {
            let steps: Vec<String> = c.witnesses.iter().map(|w| format!("r{} via {}", w.relator + 1, w.gen)).collect();
            let _ = writeln!(out, "  Concatenable: {}", steps.join(", "));
        }
        (_, Some(m), _) => {
            let sets: Vec<String> = m
                .iter()
                .map(|s| format!("{{{}}}", s.iter().map(|i| format!("r{}", i + 1)).collect::<Vec<_>>().join(",")))
                .collect();
            let _ = writeln!(out, "  NotConcatenable: maximal placeable sets {}", sets.join(" "));
        }
        (_, _, Some(r)) => {
            let _ = writeln!(out, "  HypothesisFailure: {r}");
        }
        _ => {}
    }
}

pub fn render_cover(out: &mut String, c: &CoverEcho) {
    let _ = writeln!(
        out,
        "cover window [{}, {}] ({:?}): {} cells, {}",
        c.window[0],
        c.window[1],
        c.mode,
        c.cells,
        if c.passed { "all checks passed" } else { "REJECTED" }
    );
    for s in &c.signed_counts {
        let _ = writeln!(out, "  r{}: witness {} signed count {}", s.relator + 1, s.witness, s.count);
    }
    for f in &c.failures {
        let _ = writeln!(out, "  {f}");
    }
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {} with generators {}", doc.input.kind, doc.input.generators.join(" "));
    for (i, r) in doc.input.relators.iter().enumerate() {
        let _ = writeln!(out, "  r{} = {}", i + 1, r);
    }
    for d in &doc.diagnostics {
        let _ = writeln!(out, "  note: {d}");
    }
    let _ = writeln!(out, "H1 = {}", doc.h1.group);
    if let Some(f) = &doc.forest {
        let _ = writeln!(out, "forest criterion ({}): {}", f.criterion, f.verdict);
        if let Some(gi) = &f.graph_i {
            let e: Vec<String> = gi.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            let _ = writeln!(out, "  I: {}  {}", e.join(" "), if f.i_cycle.is_some() { "(cycle)" } else { "(forest)" });
        }
        if let Some(gt) = &f.graph_t {
            let e: Vec<String> = gt.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            let _ = writeln!(out, "  T: {}  {}", e.join(" "), if f.t_cycle.is_some() { "(cycle)" } else { "(forest)" });
        }
    }
    for a in &doc.concat {
        render_attempt(&mut out, a);
    }
    if let Some(n) = &doc.concat_note {
        let _ = writeln!(out, "phi search: {n}");
    }
    if let Some(c) = &doc.cover {
        render_cover(&mut out, c);
    }
    if let Some(o) = &doc.oracle {
        let _ = writeln!(
            out,
            "immersion scan up to {} edges, {} faces: {} complexes, {} candidates",
            o.bounds[0],
            o.bounds[1],
            o.enumerated,
            o.candidates.len()
        );
    }
    let _ = writeln!(out, "hypotheses:");
    render_hypotheses(&mut out, &doc.hypotheses);
    let _ = writeln!(out, "verdict: {}", doc.verdict);
    out
}
