//! Single-point evaluation: full report, bracket and certificates for one
//! probe and channel pair.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use clap::ValueEnum;
use ndsread::nds::{analyze, bound_bracket, ChernoffPoint, DiscriminationReport, TruncationErrors};
use ndsread::numerics::half_one_minus_sqrt_one_minus;
use ndsread::oracle::{
    coherent_input_spec, nds_input_spec, propagate, PureInputSpec, DEFAULT_DIM_CAP,
};
use ndsread::transmitters::{
    coherent_pe, epr_chernoff, epr_fidelity, epr_pe_lower, fock_chernoff, fock_error_probability,
    EprInput,
};
use ndsread::{
    universal_pe_lower_bound, ChannelPair, Error, Hypothesis, Occupation, SeriesControl,
    SignalDistribution,
};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Vacuum,
    Fock,
    Epr,
    Coherent,
    Sparse,
}

/// Everything needed to evaluate one point; echoed back in the output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRequest {
    pub state: StateKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub occupation: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<(Vec<u32>, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    pub r0: f64,
    pub r1: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub prior0: f64,
    pub tail_tolerance: f64,
}

impl PointRequest {
    pub fn new(state: StateKind, r0: f64, r1: f64) -> Self {
        Self {
            state,
            occupation: None,
            support: None,
            ns: None,
            modes: None,
            r0,
            r1,
            theta0: 0.0,
            theta1: 0.0,
            prior0: 0.5,
            tail_tolerance: 1e-12,
        }
    }

    pub fn channel(&self) -> Result<ChannelPair> {
        ChannelPair::new(self.r0, self.r1, self.theta0, self.theta1, self.prior0)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn ns(&self) -> Result<f64> {
        self.ns
            .ok_or_else(|| CliError::Usage(format!("--ns is required for {:?}", self.state)))
    }

    fn occupation(&self) -> Result<&[u32]> {
        self.occupation
            .as_deref()
            .ok_or_else(|| CliError::Usage("--occupation is required for fock".into()))
    }

    fn control(&self) -> Result<SeriesControl> {
        SeriesControl::new(
            self.tail_tolerance,
            SeriesControl::default().max_terms,
            1e-10,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Photon statistics of the probe. Number states are reduced to a single
    /// mode holding the total, on which every output depends.
    pub fn distribution(&self) -> Result<SignalDistribution> {
        Ok(match self.state {
            StateKind::Vacuum => SignalDistribution::vacuum(self.modes.unwrap_or(1))?,
            StateKind::Fock => {
                let total: u64 = self.occupation()?.iter().map(|&n| n as u64).sum();
                let total = u32::try_from(total)
                    .map_err(|_| CliError::Usage("photon number too large".into()))?;
                SignalDistribution::fock(&[total])?
            }
            StateKind::Epr => {
                let pairs = self.modes.unwrap_or(1);
                if pairs == 0 {
                    return Err(CliError::Usage("--modes must be at least 1".into()));
                }
                let per_mode_tail = 1.0 - (1.0 - self.tail_tolerance).powf(1.0 / pairs as f64);
                SignalDistribution::epr(pairs, self.ns()?, per_mode_tail * 0.5)?
            }
            StateKind::Sparse => {
                let support = self
                    .support
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--support is required for sparse".into()))?;
                SignalDistribution::sparse(
                    support
                        .iter()
                        .map(|(k, p)| (Occupation::new(k.clone()), *p)),
                )?
            }
            StateKind::Coherent => {
                return Err(CliError::Usage(
                    "a coherent probe has no number-diagonal statistics".into(),
                ))
            }
        })
    }
}

/// Closed-form values for the probe families that have them.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClosedForms {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universal_lb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherent_pe: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_pe: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_chernoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epr_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epr_fid_lb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epr_chernoff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointOutput {
    pub input: PointRequest,
    /// Absent when the error probability would need more blocks than the
    /// term budget allows; the closed forms are still reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<DiscriminationReport>,
    pub closed_form: ClosedForms,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn closed_forms(req: &PointRequest, c: &ChannelPair) -> Result<ClosedForms> {
    let mut out = ClosedForms::default();
    if c.delta() != 0.0 || !c.equal_priors() {
        return Ok(out);
    }
    match req.state {
        StateKind::Fock => {
            let n: u64 = req.occupation()?.iter().map(|&k| k as u64).sum();
            out.universal_lb = Some(universal_pe_lower_bound(n as f64, c)?);
            out.fock_pe = Some(fock_error_probability(n, c)?);
            out.fock_chernoff = fock_chernoff(n, c).ok().map(|e| e.bound);
        }
        StateKind::Epr => {
            let e = EprInput::new(req.modes.unwrap_or(1), req.ns()?)?;
            out.universal_lb = Some(universal_pe_lower_bound(e.ns, c)?);
            out.epr_fidelity = Some(epr_fidelity(&e, c)?);
            out.epr_fid_lb = Some(epr_pe_lower(&e, c)?);
            out.epr_chernoff = Some(epr_chernoff(&e, c)?.bound);
        }
        StateKind::Coherent => {
            out.universal_lb = Some(universal_pe_lower_bound(req.ns()?, c)?);
            out.coherent_pe = Some(coherent_pe(req.ns()?, c)?);
        }
        StateKind::Vacuum | StateKind::Sparse => {}
    }
    Ok(out)
}

/// Coherent probes are pure on both outputs, so `Q(s) = F` for every `s` and
/// the Helstrom error is `(1 - sqrt(1 - 4 π0 π1 F)) / 2`.
fn coherent_report(ns: f64, c: &ChannelPair) -> Result<DiscriminationReport> {
    let pe_equal = coherent_pe(ns, c)?;
    let xi = (c.r(Hypothesis::One) - c.r(Hypothesis::Zero)).powi(2);
    let f = (-xi * ns).exp();
    let p0 = c.prior(Hypothesis::Zero);
    let pe = if c.equal_priors() {
        pe_equal
    } else {
        half_one_minus_sqrt_one_minus(4.0 * p0 * (1.0 - p0) * f)
    };
    let chernoff = ChernoffPoint {
        q: f,
        s: 0.5,
        error: 0.0,
    };
    Ok(DiscriminationReport {
        pe,
        fidelity: f,
        q_of_s_star: f,
        s_star: 0.5,
        bracket: bound_bracket(f, chernoff, p0)?,
        truncation_error: TruncationErrors::default(),
        terms: 0,
    })
}

pub fn evaluate_point(req: &PointRequest) -> Result<PointOutput> {
    let c = req.channel()?;
    let closed_form = closed_forms(req, &c)?;
    let (report, note) = if req.state == StateKind::Coherent {
        (Some(coherent_report(req.ns()?, &c)?), None)
    } else {
        match analyze(&req.distribution()?, &c, &req.control()?) {
            Ok(r) => (Some(r), None),
            Err(e @ Error::TruncationFailure { terms, .. }) if terms > 0 => {
                (None, Some(format!("series report unavailable: {e}")))
            }
            Err(e) => return Err(e.into()),
        }
    };
    Ok(PointOutput {
        input: req.clone(),
        report,
        closed_form,
        note,
    })
}

/// Oracle input for the debug dump; coherent probes are cut where the Poisson
/// tail drops below the requested tolerance.
fn dump_spec(req: &PointRequest) -> Result<PureInputSpec> {
    if req.state == StateKind::Coherent {
        let ns = req.ns()?;
        let mut cutoff = ns.ceil() as u32 + 8;
        loop {
            let spec = coherent_input_spec(ns, cutoff)?;
            if spec.tail_mass() <= req.tail_tolerance || cutoff > 400 {
                return Ok(spec);
            }
            cutoff += 8;
        }
    }
    let d = match req.state {
        // Dump the probe as given rather than its single-mode reduction.
        StateKind::Fock => SignalDistribution::fock(req.occupation()?)?,
        _ => req.distribution()?,
    };
    // Every support point is a basis state, so this bounds the dimension from below.
    let support = d.support_size();
    if support > DEFAULT_DIM_CAP as f64 {
        return Err(Error::Resource {
            dim: support.min(usize::MAX as f64) as usize,
            cap: DEFAULT_DIM_CAP,
        }
        .into());
    }
    Ok(nds_input_spec(&d, None)?)
}

/// Writes the dense output states as `rho0.csv` and `rho1.csv` in `dir`.
pub fn dump_debug(req: &PointRequest, dir: &Path) -> Result<()> {
    let c = req.channel()?;
    let spec = dump_spec(req)?;
    std::fs::create_dir_all(dir)?;
    for (b, name) in [
        (Hypothesis::Zero, "rho0.csv"),
        (Hypothesis::One, "rho1.csv"),
    ] {
        let rho = propagate(&spec, &c, b)?;
        rho.write_debug_csv(BufWriter::new(File::create(dir.join(name))?))?;
    }
    Ok(())
}

/// `"1,0:0.5;0,2:0.5"` → `[([1, 0], 0.5), ([0, 2], 0.5)]`.
pub fn parse_support(s: &str) -> Result<Vec<(Vec<u32>, f64)>> {
    s.split(';')
        .filter(|e| !e.trim().is_empty())
        .map(|entry| {
            let (occ, p) = entry
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("support entry {entry:?} lacks ':p'")))?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad probability in {entry:?}")))?;
            Ok((parse_occupation(occ)?, p))
        })
        .collect()
}

/// `"2,0"` → `[2, 0]`.
pub fn parse_occupation(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|n| {
            n.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad photon number {n:?} in {s:?}")))
        })
        .collect()
}
