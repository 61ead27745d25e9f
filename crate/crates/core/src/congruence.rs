//! Principal congruence subgroups `Gamma(alpha)` of `PSL_2(Z[i])`.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::matgroup::{classify, complex_length, enumerate_image, reduce_mat, FiniteImage, GaussMat, IsomKind, MatError};
use crate::par::{self, Jobs};
use crate::quadint::{GaussianModulus, QuadInt, QuadIntError};
use crate::words::{eval_swan, parse_word, swan_dictionary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("alpha must be a nonzero Gaussian integer")]
    BadAlpha,
    #[error("matrix is not in Gamma({0})")]
    NotMember(String),
    #[error("neither tr - 2 nor tr + 2 is divisible by alpha^2 (trace {trace})")]
    NoWitness { trace: String },
    #[error("norm(alpha) = {0} <= 4: the systole bound is degenerate")]
    NormTooSmall(BigInt),
    #[error("radius {radius} exceeds the audit guard {guard}")]
    RadiusGuard { radius: usize, guard: usize },
    #[error("audit visited more than {0} elements")]
    MemoryGuard(usize),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] QuadIntError),
}

/// `Gamma(alpha)`, the kernel of reduction mod `alpha`.
#[derive(Debug, Clone)]
pub struct CongruenceGroup {
    alpha: QuadInt,
    modulus: Arc<GaussianModulus>,
    quotient: OnceLock<Result<Arc<FiniteImage>, MatError>>,
}

impl CongruenceGroup {
    pub fn new(alpha: QuadInt) -> Result<Self, CongruenceError> {
        if alpha.d() != 1 || alpha.is_zero() {
            return Err(CongruenceError::BadAlpha);
        }
        let modulus = GaussianModulus::new(&alpha)?;
        Ok(CongruenceGroup { alpha, modulus, quotient: OnceLock::new() })
    }

    pub fn alpha(&self) -> &QuadInt {
        &self.alpha
    }

    pub fn modulus(&self) -> &Arc<GaussianModulus> {
        &self.modulus
    }

    /// The finite quotient `PSL_2(Z[i]/(alpha))`, enumerated on first use.
    pub fn quotient(&self) -> Result<Arc<FiniteImage>, CongruenceError> {
        self.quotient
            .get_or_init(|| enumerate_image(&self.alpha).map(Arc::new))
            .clone()
            .map_err(CongruenceError::from)
    }

    pub fn member(&self, m: &GaussMat) -> bool {
        reduce_mat(m, &self.modulus).map(|r| r.is_identity()).unwrap_or(false)
    }

    /// The `z` with `sign * tr(M) = z * alpha^2 + 2`, for `M` in the group.
    pub fn trace_congruence_witness(&self, m: &GaussMat) -> Result<TraceWitness, CongruenceError> {
        if !self.member(m) {
            return Err(CongruenceError::NotMember(self.alpha.to_string()));
        }
        trace_witness(&self.alpha, m)
    }

    pub fn systole_lower_bound(&self) -> Result<f64, CongruenceError> {
        systole_lower_bound(&self.alpha)
    }

    /// Number of cusps of `H^3 / Gamma(alpha)`: the index in the finite
    /// quotient of the image of the cusp stabiliser `<t, u, l>`.
    pub fn count_cusps(&self) -> Result<usize, CongruenceError> {
        let q = self.quotient()?;
        let dict = swan_dictionary();
        let gens: Vec<_> = ["t", "u", "l"]
            .iter()
            .map(|g| reduce_mat(&dict[*g], &self.modulus))
            .collect::<Result<_, _>>()?;
        Ok(q.order() / q.subgroup_order(&gens))
    }

    /// True iff `t^13` and `t^-5 u` are both parabolic members.
    pub fn peripheral_check(&self) -> bool {
        ["t^13", "t^-5*u"].iter().all(|w| {
            let m = eval_swan(&parse_word(w).expect("static word")).expect("Swan generators");
            self.member(&m) && classify(&m).kind == IsomKind::Parabolic
        })
    }

    pub fn audit_short_geodesics(&self, radius: usize, opts: &AuditOptions) -> Result<AuditReport, CongruenceError> {
        audit(self, radius, opts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceWitness {
    /// `+1` or `-1`
    pub sign: i8,
    pub z: String,
    #[serde(skip)]
    pub z_value: QuadInt,
    /// Whether `-sign * tr - 2` was divisible as well.
    pub both_signs: bool,
}

/// Solves `±tr(M) = z * alpha^2 + 2` by exact division; works over any
/// `O_d`.
pub fn trace_witness(alpha: &QuadInt, m: &GaussMat) -> Result<TraceWitness, CongruenceError> {
    let a2 = alpha.mul(alpha)?;
    let tr = m.trace();
    let two = QuadInt::new(tr.d(), 2, 0)?;
    let plus = tr.checked_sub(&two)?.divide_exact(&a2)?;
    let minus = (-&tr).checked_sub(&two)?.divide_exact(&a2)?;
    match (plus, minus) {
        (Some(z), other) => Ok(TraceWitness { sign: 1, z: z.to_string(), z_value: z, both_signs: other.is_some() }),
        (None, Some(z)) => Ok(TraceWitness { sign: -1, z: z.to_string(), z_value: z, both_signs: false }),
        (None, None) => Err(CongruenceError::NoWitness { trace: tr.to_string() }),
    }
}

/// `2 arccosh((norm(alpha) - 2) / 2)`: every loxodromic in `Gamma(alpha)`
/// has `|tr| >= norm(alpha) - 2`.
pub fn systole_lower_bound(alpha: &QuadInt) -> Result<f64, CongruenceError> {
    let n = alpha.norm();
    if n <= BigInt::from(4) {
        return Err(CongruenceError::NormTooSmall(n));
    }
    let nf = n.to_f64().expect("finite norm");
    Ok(2.0 * ((nf - 2.0) / 2.0).acosh())
}

#[derive(Debug, Clone, Copy)]
pub struct AuditOptions {
    pub jobs: Jobs,
    pub max_radius: usize,
    pub max_elements: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { jobs: Jobs::default(), max_radius: 16, max_elements: 20_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub matrix: String,
    pub trace: String,
    pub ell0: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub alpha: String,
    pub bound: f64,
    pub radius: usize,
    pub elements_visited: usize,
    pub kernel_elements: usize,
    pub kernel_loxodromics: usize,
    pub min_loxodromic_length: Option<f64>,
    /// Smallest `|tr|^2` among kernel loxodromics.
    pub min_trace_norm: Option<String>,
    pub violations: Vec<Violation>,
}

struct Finding {
    ell0: f64,
    trace_norm: BigInt,
    violation: Option<Violation>,
}

fn inspect(g: &CongruenceGroup, m: &GaussMat, bound: f64, min_trace_norm: &BigInt) -> Option<Finding> {
    if !g.member(m) {
        return None;
    }
    let cls = classify(m);
    if cls.kind != IsomKind::Loxodromic {
        return Some(Finding { ell0: f64::NAN, trace_norm: BigInt::from(-1), violation: None });
    }
    let ell0 = complex_length(m).expect("loxodromic").ell0;
    let trace_norm = cls.trace.norm();
    let mut reasons = Vec::new();
    if ell0 < bound - 1e-9 {
        reasons.push(format!("ell0 {ell0} below bound {bound}"));
    }
    if &trace_norm < min_trace_norm {
        reasons.push(format!("|tr|^2 = {trace_norm} < {min_trace_norm}"));
    }
    let violation = (!reasons.is_empty()).then(|| Violation {
        matrix: format!("{m:?}"),
        trace: cls.trace.to_string(),
        ell0,
        reason: reasons.join("; "),
    });
    Some(Finding { ell0, trace_norm, violation })
}

fn audit(g: &CongruenceGroup, radius: usize, opts: &AuditOptions) -> Result<AuditReport, CongruenceError> {
    if radius > opts.max_radius {
        return Err(CongruenceError::RadiusGuard { radius, guard: opts.max_radius });
    }
    let bound = g.systole_lower_bound()?;
    let n = g.alpha.norm();
    let floor = &n - BigInt::from(2);
    let min_trace_norm = &floor * &floor;
    let dict = swan_dictionary();
    let mut letters: Vec<GaussMat> = vec![dict["a"].clone(), dict["l"].clone()];
    for x in ["t", "u"] {
        letters.push(dict[x].clone());
        letters.push(dict[x].inverse());
    }
    let id = dict["t"].identity();
    let mut seen: HashSet<GaussMat> = HashSet::from([id.clone()]);
    let mut frontier = if radius == 0 { Vec::new() } else { vec![id] };
    let mut report = AuditReport {
        alpha: g.alpha.to_string(),
        bound,
        radius,
        elements_visited: 0,
        kernel_elements: 0,
        kernel_loxodromics: 0,
        min_loxodromic_length: None,
        min_trace_norm: None,
        violations: Vec::new(),
    };
    let mut best_norm: Option<BigInt> = None;
    for _ in 0..radius {
        let chunks: Vec<Vec<GaussMat>> = frontier.chunks(256).map(<[GaussMat]>::to_vec).collect();
        let products = par::map(opts.jobs, chunks, |chunk| {
            chunk.iter().flat_map(|m| letters.iter().map(move |x| m.op_ref(x))).collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for m in products.into_iter().flatten() {
            if !seen.contains(&m) {
                seen.insert(m.clone());
                next.push(m);
            }
        }
        if seen.len() > opts.max_elements {
            return Err(CongruenceError::MemoryGuard(opts.max_elements));
        }
        let findings = par::map(opts.jobs, next.chunks(256).map(<[GaussMat]>::to_vec).collect(), |chunk| {
            chunk.iter().filter_map(|m| inspect(g, m, bound, &min_trace_norm)).collect::<Vec<_>>()
        });
        for f in findings.into_iter().flatten() {
            report.kernel_elements += 1;
            if f.ell0.is_nan() {
                continue;
            }
            report.kernel_loxodromics += 1;
            if report.min_loxodromic_length.is_none_or(|x| f.ell0 < x) {
                report.min_loxodromic_length = Some(f.ell0);
            }
            if best_norm.as_ref().is_none_or(|b| &f.trace_norm < b) {
                best_norm = Some(f.trace_norm.clone());
            }
            report.violations.extend(f.violation);
        }
        frontier = next;
    }
    report.elements_visited = seen.len();
    report.min_trace_norm = best_norm.map(|b| b.to_string());
    Ok(report)
}

impl GaussMat {
    fn op_ref(&self, o: &GaussMat) -> GaussMat {
        self.mul_unchecked(o)
    }
}
