//! Dehn filling of the principal congruence link for `3+2i` by group
//! quotient: present `Gamma(3+2i)` on Schreier generators, kill all but
//! one meridian, simplify, and compare with the figure-eight knot group.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::fpcore::{
    abelianization, coset_table_from_hom, default_panel, fingerprint_with, reidemeister_schreier, tietze_simplify,
    todd_coxeter, AbelianInvariants, CosetTable, Fingerprint, FiniteGroup, FpError, SchreierRewriter, TietzeOptions,
    DEFAULT_HOM_GUARD,
};
use crate::matgroup::{enumerate_image, reduce_mat, MatError};
use crate::par::{self, Jobs};
use crate::quadint::{GaussianModulus, QuadInt, QuadIntError};
use crate::words::{load_meridians, parse_word, swan_dictionary, swan_presentation, MeridianTable, Presentation, Word, MERIDIAN_COUNT};

/// Coset limit for the enumeration cross-check.
const ENUMERATION_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillError {
    #[error("coset tables disagree: {0}")]
    TableMismatch(String),
    #[error("kept index {0} is outside 1..=42")]
    BadIndex(usize),
    #[error("meridian {index} does not rewrite: {source}")]
    Rewrite { index: usize, source: FpError },
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] QuadIntError),
}

/// `Gamma(3+2i)` as a finitely presented group, with the rewriting map
/// from Swan words and the rewritten meridians.
#[derive(Debug, Clone)]
pub struct KernelPresentation {
    pub presentation: Presentation,
    pub rewriter: SchreierRewriter,
    pub table: CosetTable,
    /// Meridian `k` (1-based) rewritten into Schreier generators, at
    /// position `k - 1`.
    pub meridians: Vec<Word>,
}

impl KernelPresentation {
    pub fn index(&self) -> usize {
        self.table.len()
    }
}

fn alpha() -> QuadInt {
    QuadInt::gaussian(3, 2)
}

/// The mod-`3+2i` coset table, checked against coset enumeration of the
/// Swan presentation with `t^13` and `t^-5 u` killed.
pub fn kernel_coset_table() -> Result<CosetTable, FillError> {
    let swan = swan_presentation();
    let modulus = GaussianModulus::new(&alpha())?;
    let dict = swan_dictionary();
    let images = swan
        .generators()
        .iter()
        .map(|g| reduce_mat(&dict[g], &modulus))
        .collect::<Result<Vec<_>, _>>()?;
    let id = images[0].identity();
    let from_hom = coset_table_from_hom(&swan, &images, &id)?;
    let extra = ["t^13", "t^-5*u"].map(|w| parse_word(w).expect("static word"));
    let filled = swan.with_relators(extra).map_err(FpError::from)?;
    let enumerated = todd_coxeter(&filled, &[], ENUMERATION_LIMIT)?;
    if enumerated.len() != from_hom.len() {
        return Err(FillError::TableMismatch(format!(
            "{} cosets by enumeration, {} from the image",
            enumerated.len(),
            from_hom.len()
        )));
    }
    // both are in breadth-first standard form, so equal actions mean
    // equal tables
    if enumerated != from_hom {
        return Err(FillError::TableMismatch("same size, different actions".into()));
    }
    Ok(from_hom)
}

/// Coset table and Schreier presentation of `Gamma(alpha)` for any
/// Gaussian integer whose quotient is small enough to enumerate.
pub fn congruence_presentation(alpha: &QuadInt) -> Result<(CosetTable, Presentation, SchreierRewriter), FillError> {
    // enumerate first so oversized quotients hit the guard, not memory
    enumerate_image(alpha)?;
    let swan = swan_presentation();
    let modulus = GaussianModulus::new(alpha)?;
    let dict = swan_dictionary();
    let images = swan
        .generators()
        .iter()
        .map(|g| reduce_mat(&dict[g], &modulus))
        .collect::<Result<Vec<_>, _>>()?;
    let table = coset_table_from_hom(&swan, &images, &images[0].identity())?;
    let (p, rw) = reidemeister_schreier(&swan, &table)?;
    Ok((table, p, rw))
}

pub fn build_kernel_presentation() -> Result<KernelPresentation, FillError> {
    build_kernel_with(&load_meridians())
}

pub fn build_kernel_with(meridians: &MeridianTable) -> Result<KernelPresentation, FillError> {
    let table = kernel_coset_table()?;
    let (presentation, rewriter) = reidemeister_schreier(&swan_presentation(), &table)?;
    let meridians = meridians
        .words()
        .iter()
        .enumerate()
        .map(|(i, w)| rewriter.rewrite(w).map_err(|source| FillError::Rewrite { index: i + 1, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KernelPresentation { presentation, rewriter, table, meridians })
}

/// The shared kernel presentation, built on first use.
pub fn kernel() -> Result<&'static KernelPresentation, FillError> {
    static KERNEL: OnceLock<Result<KernelPresentation, FillError>> = OnceLock::new();
    KERNEL.get_or_init(build_kernel_presentation).as_ref().map_err(Clone::clone)
}

pub fn figure_eight() -> Presentation {
    Presentation::parse(&["a", "b"], &["a^-1*b*a*b^-1*a*b*(b*a^-1*b*a)^-1"]).expect("static presentation")
}

pub fn trefoil() -> Presentation {
    Presentation::parse(&["a", "b"], &["a*b*a*b^-1*a^-1*b^-1"]).expect("static presentation")
}

#[derive(Debug, Clone)]
pub struct FillOptions {
    pub tietze: TietzeOptions,
    pub panel: Vec<FiniteGroup>,
    pub jobs: Jobs,
    pub hom_guard: u64,
}

impl Default for FillOptions {
    fn default() -> Self {
        FillOptions { tietze: TietzeOptions::default(), panel: default_panel(), jobs: Jobs::default(), hom_guard: DEFAULT_HOM_GUARD }
    }
}

/// Which meridian survives the filling; `None` fills all 42.
pub type Kept = Option<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl From<&Presentation> for PresentationSummary {
    fn from(p: &Presentation) -> Self {
        PresentationSummary {
            generators: p.generators().to_vec(),
            relators: p.relators().iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillResult {
    pub kept_index: Kept,
    pub presentation: PresentationSummary,
    pub abelian: AbelianInvariants,
    /// `None` when a homomorphism count hit its guard.
    pub fingerprint: Option<Fingerprint>,
    pub matches_fig8: bool,
    /// Simplification stopped on its budget; the presentation is still
    /// correct but may not be minimal.
    pub incomplete: bool,
    pub note: Option<String>,
}

/// Fingerprint of the figure-eight knot group on `panel`.
pub fn figure_eight_fingerprint(panel: &[FiniteGroup], jobs: Jobs) -> Result<Fingerprint, FpError> {
    fingerprint_with(&figure_eight(), panel, jobs, DEFAULT_HOM_GUARD)
}

/// The quotient of the kernel by every meridian except `kept`, before
/// simplification.
pub fn filled_presentation(k: &KernelPresentation, kept: Kept) -> Result<Presentation, FillError> {
    if let Some(i) = kept {
        if !(1..=MERIDIAN_COUNT).contains(&i) {
            return Err(FillError::BadIndex(i));
        }
    }
    let killed = k
        .meridians
        .iter()
        .enumerate()
        .filter(|(i, _)| kept != Some(i + 1))
        .map(|(_, w)| w.clone());
    Ok(k.presentation.with_relators(killed).map_err(FpError::from)?)
}

pub fn fill(k: &KernelPresentation, kept: Kept, opts: &FillOptions) -> Result<FillResult, FillError> {
    let reference = figure_eight_fingerprint(&opts.panel, opts.jobs)?;
    fill_against(k, kept, opts, &reference)
}

fn fill_against(k: &KernelPresentation, kept: Kept, opts: &FillOptions, reference: &Fingerprint) -> Result<FillResult, FillError> {
    let raw = filled_presentation(k, kept)?;
    let simplified = tietze_simplify(&raw, &opts.tietze);
    let p = simplified.presentation;
    let abelian = abelianization(&p);
    let (fp, note) = match fingerprint_with(&p, &opts.panel, opts.jobs, opts.hom_guard) {
        Ok(f) => (Some(f), None),
        Err(FpError::GuardExceeded(msg)) => (None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let matches_fig8 = abelian.is_z() && fp.as_ref() == Some(reference);
    Ok(FillResult {
        kept_index: kept,
        presentation: PresentationSummary::from(&p),
        abelian,
        fingerprint: fp,
        matches_fig8,
        incomplete: simplified.exhausted,
        note,
    })
}

/// Runs [`fill`] for every kept index, in order.
pub fn scan_all(k: &KernelPresentation, opts: &FillOptions) -> Result<Vec<FillResult>, FillError> {
    let reference = figure_eight_fingerprint(&opts.panel, opts.jobs)?;
    // parallelism goes to the independent fills; each fill runs sequentially
    let inner = FillOptions { jobs: Jobs::sequential(), ..opts.clone() };
    let idx: Vec<usize> = (1..=MERIDIAN_COUNT).collect();
    par::map(opts.jobs, idx, |i| fill_against(k, Some(i), &inner, &reference)).into_iter().collect()
}

pub fn matching_indices(results: &[FillResult]) -> Vec<usize> {
    results.iter().filter(|r| r.matches_fig8).filter_map(|r| r.kept_index).collect()
}
