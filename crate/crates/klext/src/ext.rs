//! Ext generating functions, irreducible characters and decomposition
//! matrices for blocks of the representation category, all reduced to
//! parabolic Kazhdan-Lusztig data.
//!
//! The central formula: for a block with stabilizer `J` and dominant
//! representatives `y, w ∈ W^J ∩ W⁺`,
//!
//! ```text
//! Σ_n dim Extⁿ(Δ(y.μ), L(w.μ)) tⁿ  =  t^(l(w)-l(y)) · bar(P^J_{y,w})
//! ```
//!
//! with `q = t²` and `bar` the substitution `t ↦ t⁻¹`. Concretely, the
//! coefficient in degree `n` is the `q^((l(w)-l(y)-n)/2)`-coefficient of
//! `P^J_{y,w}` when `l(w)-l(y)-n` is a non-negative even number, and `0`
//! otherwise. Each series is therefore supported in a single parity class.
//!
//! Everything here is gated on KL-goodness of `ell` for the chosen type;
//! a query for which KL-goodness is not known is refused unless the caller
//! explicitly overrides.

use std::collections::BTreeMap;

use crate::alcove::{self, AlcoveError, BlockData, KlGoodness};
use crate::coxeter::{GroupElement, Word};
use crate::klpoly::{IntPoly, KlContext, KlError};
use crate::rootsys::{TypeLabel, Weight};

#[derive(Debug, thiserror::Error)]
pub enum ExtError {
    #[error(
        "it is not known whether ell = {ell} is KL-good for type {label}{rank} \
         (the Kazhdan-Lusztig correspondence is an equivalence for type A at every ell, \
         and for D/E above known bounds; no bound is known here). \
         Pass --assume-kl-good to compute anyway"
    )]
    KlGoodUnknown {
        label: TypeLabel,
        rank: usize,
        ell: i64,
    },
    #[error("element {0} is not among the block's dominant representatives (bound {1})")]
    NotInBlock(String, usize),
    #[error("operation requires a regular block, but the stabilizer is {{{0}}}")]
    RegularBlockRequired(String),
    #[error("operation requires a singular block")]
    SingularBlockRequired,
    #[error("filtration index {i} out of range 0..={max}")]
    FiltrationIndexOutOfRange { i: usize, max: usize },
    #[error("truncation bound {bound} is smaller than the length {needed} of w")]
    TruncationTooSmall { bound: usize, needed: usize },
    #[error("series coefficient at degree {degree} is negative ({value}); this contradicts the dimension formula")]
    NegativeCoefficient { degree: usize, value: i64 },
    #[error("series has a term at negative degree; the degree bound is violated")]
    DegreeBoundViolated,
    #[error(transparent)]
    Kl(#[from] KlError),
    #[error(transparent)]
    Alcove(#[from] AlcoveError),
    #[error(transparent)]
    Coxeter(#[from] crate::coxeter::CoxeterError),
}

/// Generating function `Σ_n dim Extⁿ · tⁿ` with non-negative coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtSeries {
    coeffs: Vec<i64>,
}

impl ExtSeries {
    pub fn zero() -> ExtSeries {
        ExtSeries { coeffs: Vec::new() }
    }

    pub fn one() -> ExtSeries {
        ExtSeries { coeffs: vec![1] }
    }

    /// Builds a series, rejecting negative coefficients.
    pub fn new(mut coeffs: Vec<i64>) -> Result<ExtSeries, ExtError> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        for (degree, &value) in coeffs.iter().enumerate() {
            if value < 0 {
                return Err(ExtError::NegativeCoefficient { degree, value });
            }
        }
        Ok(ExtSeries { coeffs })
    }

    pub fn coeff(&self, n: usize) -> i64 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total dimension `Σ_n dim Extⁿ`.
    pub fn total(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Euler characteristic: the value at `t = -1`.
    pub fn eval_minus_one(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c } else { -c })
            .sum()
    }

    /// Degrees with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(n, _)| n)
            .collect()
    }

    /// Rendered as `1 + 2t^3 + ...`; `0` when empty.
    pub fn render(&self) -> String {
        IntPoly::from_coeffs(self.coeffs.clone()).render("t")
    }
}

/// KL-goodness gate: operations that rest on the KL correspondence refuse
/// to run when goodness is unknown, unless explicitly overridden.
#[derive(Debug, Clone, Copy, Default)]
pub struct KlGoodGate {
    pub assume: bool,
}

impl KlGoodGate {
    pub fn assume() -> KlGoodGate {
        KlGoodGate { assume: true }
    }

    pub fn check(&self, ctx: &KlContext<'_>) -> Result<(), ExtError> {
        let rs = ctx.group().root_system();
        let ell = match ctx.group().ell() {
            Some(e) => e,
            // Finite mode has no root of unity to gate on.
            None => return Ok(()),
        };
        match alcove::kl_good(rs.type_label(), rs.rank(), ell) {
            KlGoodness::Yes => Ok(()),
            KlGoodness::No | KlGoodness::Unknown => {
                if self.assume {
                    Ok(())
                } else {
                    Err(ExtError::KlGoodUnknown {
                        label: rs.type_label(),
                        rank: rs.rank(),
                        ell,
                    })
                }
            }
        }
    }
}

fn require_in_block<'b>(
    ctx: &KlContext<'_>,
    block: &'b BlockData,
    w: &GroupElement,
) -> Result<&'b Weight, ExtError> {
    block
        .weight_of(w)
        .ok_or_else(|| ExtError::NotInBlock(ctx.word(w).serialize(), block.length_bound()))
}

/// Assembles `t^base · bar(P)` (with `q = t²`) into a series: coefficient
/// `c_k·q^k` lands in degree `base - 2k`.
fn series_from_poly(base: i64, p: &IntPoly) -> Result<ExtSeries, ExtError> {
    let mut coeffs = vec![0i64; (base.max(0) as usize) + 1];
    for (k, &c) in p.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let n = base - 2 * (k as i64);
        if n < 0 {
            return Err(ExtError::DegreeBoundViolated);
        }
        coeffs[n as usize] += c;
    }
    ExtSeries::new(coeffs)
}

/// `Σ_n dim Extⁿ(Δ(y.μ), L(w.μ)) tⁿ = t^(l(w)-l(y)) · bar(P^J_{y,w})`.
pub fn ext_delta_irr(
    ctx: &KlContext<'_>,
    block: &BlockData,
    y: &GroupElement,
    w: &GroupElement,
    gate: KlGoodGate,
) -> Result<ExtSeries, ExtError> {
    gate.check(ctx)?;
    require_in_block(ctx, block, y)?;
    require_in_block(ctx, block, w)?;
    let p = ctx.parabolic_kl(block.stabilizer(), y, w)?;
    let base = ctx.length(w) as i64 - ctx.length(y) as i64;
    series_from_poly(base, &p)
}

/// `Σ_n dim Extⁿ(L(w.μ), ∇(y.μ)) tⁿ`: the dual formula, identical numbers
/// to [`ext_delta_irr`] with the same `(y, w)`.
pub fn ext_irr_nabla(
    ctx: &KlContext<'_>,
    block: &BlockData,
    w: &GroupElement,
    y: &GroupElement,
    gate: KlGoodGate,
) -> Result<ExtSeries, ExtError> {
    ext_delta_irr(ctx, block, y, w, gate)
}

/// `Σ_n dim Extⁿ(L(w.μ), L(z.μ)) tⁿ
///   = Σ_{y ≤ w, y ≤ z} t^(l(w)+l(z)-2l(y)) · bar(P^J_{y,w}) · bar(P^J_{y,z})`,
/// the convolution of the two one-sided series over the block.
pub fn ext_irr_irr(
    ctx: &KlContext<'_>,
    block: &BlockData,
    w: &GroupElement,
    z: &GroupElement,
    gate: KlGoodGate,
) -> Result<ExtSeries, ExtError> {
    gate.check(ctx)?;
    require_in_block(ctx, block, w)?;
    require_in_block(ctx, block, z)?;
    let lw = ctx.length(w) as i64;
    let lz = ctx.length(z) as i64;
    let mut coeffs = vec![0i64; (lw + lz) as usize + 1];
    for (y, _) in block.dominant_reps() {
        if !ctx.bruhat_leq(y, w) || !ctx.bruhat_leq(y, z) {
            continue;
        }
        let ly = ctx.length(y) as i64;
        let pw = ctx.parabolic_kl(block.stabilizer(), y, w)?;
        let pz = ctx.parabolic_kl(block.stabilizer(), y, z)?;
        let base = lw + lz - 2 * ly;
        for (a, &ca) in pw.coeffs().iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in pz.coeffs().iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let n = base - 2 * (a as i64 + b as i64);
                if n < 0 {
                    return Err(ExtError::DegreeBoundViolated);
                }
                coeffs[n as usize] += ca * cb;
            }
        }
    }
    ExtSeries::new(coeffs)
}

/// Ext series from the `i`-th layer of the standard filtration of the
/// wall-crossed standard module:
/// `t^(l(w)-l(y)-i) · Σ_{x∈W_J, l(x)≥i} (-1)^(l(x)-i) · bar(P_{yx,w})`.
///
/// `block` must be regular; `y ∈ W^J ∩ W⁺`, `w ∈ W⁺`, and
/// `0 ≤ i ≤ l(w_J)` for `w_J` the longest element of `W_J`. At `i = 0`
/// (and `w ∈ W^J`) this equals [`ext_delta_irr`] in the block of a weight
/// stabilized exactly by `J`.
pub fn ext_ui(
    ctx: &KlContext<'_>,
    block: &BlockData,
    j: &[usize],
    y: &GroupElement,
    w: &GroupElement,
    i: usize,
    gate: KlGoodGate,
) -> Result<ExtSeries, ExtError> {
    gate.check(ctx)?;
    if !block.is_regular() {
        return Err(ExtError::RegularBlockRequired(
            block
                .stabilizer()
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ));
    }
    require_in_block(ctx, block, y)?;
    require_in_block(ctx, block, w)?;
    if !ctx.group().is_min_coset_rep(y, j) {
        return Err(ExtError::Kl(KlError::NotMinimalCosetRep(
            ctx.word(y).serialize(),
            j.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
        )));
    }
    let subgroup = ctx.group().parabolic_elements(j)?;
    let max_i = subgroup.iter().map(|x| ctx.length(x)).max().unwrap_or(0);
    if i > max_i {
        return Err(ExtError::FiltrationIndexOutOfRange { i, max: max_i });
    }
    let mut p = IntPoly::zero();
    for x in &subgroup {
        let lx = ctx.length(x);
        if lx < i {
            continue;
        }
        let yx = ctx.group().multiply(y, x).unwrap();
        let term = ctx.kl(&yx, w);
        if (lx - i) % 2 == 0 {
            p = p.add(&term);
        } else {
            p = p.sub(&term);
        }
    }
    let base = ctx.length(w) as i64 - ctx.length(y) as i64 - i as i64;
    series_from_poly(base, &p)
}

/// Irreducible character as a vector over standard characters:
/// coefficient `(-1)^(l(w)-l(y)) · P^J_{y,w}(1)` at each `y ≤ w` in the
/// block. (`P^J` has only even powers of `t`, so evaluating the barred
/// polynomial at `t = -1` is evaluation at `q = 1`.)
#[derive(Debug, Clone)]
pub struct CharacterVector {
    /// `(word of y, weight y.μ, coefficient)`, in block order.
    pub entries: Vec<(Word, Weight, i64)>,
}

impl CharacterVector {
    pub fn coeff(&self, word: &Word) -> i64 {
        self.entries
            .iter()
            .find(|(w, _, _)| w == word)
            .map(|(_, _, c)| *c)
            .unwrap_or(0)
    }

    pub fn as_map(&self) -> BTreeMap<String, i64> {
        self.entries
            .iter()
            .filter(|(_, _, c)| *c != 0)
            .map(|(w, _, c)| (w.serialize(), *c))
            .collect()
    }
}

pub fn irr_character(
    ctx: &KlContext<'_>,
    block: &BlockData,
    w: &GroupElement,
    truncation_bound: usize,
) -> Result<CharacterVector, ExtError> {
    require_in_block(ctx, block, w)?;
    let lw = ctx.length(w);
    if truncation_bound < lw {
        return Err(ExtError::TruncationTooSmall {
            bound: truncation_bound,
            needed: lw,
        });
    }
    let mut entries = Vec::new();
    for (y, weight) in block.dominant_reps() {
        if ctx.length(y) > truncation_bound || !ctx.bruhat_leq(y, w) {
            continue;
        }
        let value = ctx.parabolic_kl(block.stabilizer(), y, w)?.eval(1);
        let sign = if (lw - ctx.length(y)) % 2 == 0 { 1 } else { -1 };
        entries.push((ctx.word(y), weight.clone(), sign * value));
    }
    let out = CharacterVector { entries };
    debug_assert_eq!(out.coeff(&ctx.word(w)), 1);
    Ok(out)
}

/// Decomposition matrix of a block truncation: `entries[row][col]` is the
/// composition multiplicity `[Δ(w.μ) : L(y.μ)]` for `y` = row, `w` = col.
#[derive(Debug, Clone)]
pub struct DecompMatrix {
    /// Row/column legend, in block order.
    pub index: Vec<(Word, Weight)>,
    pub entries: Vec<Vec<i64>>,
}

impl DecompMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    }
}

/// Standard-module multiplicities via translation to the regular block:
/// `[Δ(w.μ) : L(y.μ)] = [Δ(w.λ) : L(y.λ)]` for the same coset
/// representatives and any regular `λ`. The regular multiplicities are the
/// values at `q = 1` of the inverse family `Q_{y,w}` on the poset `W⁺`,
/// defined by the triangular system
/// `Σ_{y ≤ z ≤ w} (-1)^(l(z)-l(y)) P_{y,z} · Q_{z,w} = δ_{y,w}`.
pub fn decomp_matrix(
    ctx: &KlContext<'_>,
    block: &BlockData,
    length_bound: usize,
    gate: KlGoodGate,
) -> Result<DecompMatrix, ExtError> {
    gate.check(ctx)?;
    let reps: Vec<&GroupElement> = block
        .dominant_reps()
        .iter()
        .filter(|(w, _)| ctx.length(w) <= length_bound)
        .map(|(w, _)| w)
        .collect();
    let q = regular_inverse_kl(ctx, length_bound);
    let n = reps.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (row, y) in reps.iter().enumerate() {
        for (col, w) in reps.iter().enumerate() {
            if let Some(poly) = q.get(&((*y).clone(), (*w).clone())) {
                entries[row][col] = poly.eval(1);
            }
        }
    }
    let index = block
        .dominant_reps()
        .iter()
        .filter(|(w, _)| ctx.length(w) <= length_bound)
        .map(|(w, wt)| (ctx.word(w), wt.clone()))
        .collect();
    Ok(DecompMatrix { index, entries })
}

/// Inverse-KL polynomials on the regular dominant poset
/// `{w ∈ W⁺ : l(w) ≤ bound}`: the unique unitriangular family with
/// `Σ_{y ≤ z ≤ w} (-1)^(l(z)-l(y)) P_{y,z} Q_{z,w} = δ_{y,w}`, where the
/// intermediate sum runs over the regular poset.
fn regular_inverse_kl(
    ctx: &KlContext<'_>,
    bound: usize,
) -> std::collections::HashMap<(GroupElement, GroupElement), IntPoly> {
    let mut poset: Vec<GroupElement> = ctx
        .ball(bound)
        .into_iter()
        .filter(|w| ctx.group().is_dominant_element(w))
        .collect();
    poset.sort_by_key(|w| ctx.length(w));
    let mut q: std::collections::HashMap<(GroupElement, GroupElement), IntPoly> =
        Default::default();
    for (wi, w) in poset.iter().enumerate() {
        q.insert((w.clone(), w.clone()), IntPoly::one());
        // Downward induction on y below w.
        for y in poset[..wi].iter().rev() {
            if !ctx.bruhat_leq(y, w) {
                continue;
            }
            let ly = ctx.length(y);
            let mut acc = IntPoly::zero();
            for z in &poset[..=wi] {
                if z == y || ctx.length(z) <= ly {
                    continue;
                }
                if !ctx.bruhat_leq(y, z) || !ctx.bruhat_leq(z, w) {
                    continue;
                }
                let qzw = match q.get(&(z.clone(), w.clone())) {
                    Some(p) => p.clone(),
                    None => continue,
                };
                let term = ctx.kl(y, z).mul(&qzw);
                if (ctx.length(z) - ly) % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            let qyw = acc.scale(-1);
            if !qyw.is_zero() {
                q.insert((y.clone(), w.clone()), qyw);
            }
        }
    }
    q
}

/// The ordering requirement for sensible truncation; length-bounded sets
/// are always downward closed in the Bruhat order.
fn character_matrix(
    ctx: &KlContext<'_>,
    block: &BlockData,
    length_bound: usize,
) -> Result<(Vec<GroupElement>, Vec<Vec<i64>>), ExtError> {
    let reps: Vec<GroupElement> = block
        .dominant_reps()
        .iter()
        .filter(|(w, _)| ctx.length(w) <= length_bound)
        .map(|(w, _)| w.clone())
        .collect();
    let n = reps.len();
    let mut c = vec![vec![0i64; n]; n];
    for (row, y) in reps.iter().enumerate() {
        for (col, w) in reps.iter().enumerate() {
            if !ctx.bruhat_leq(y, w) {
                continue;
            }
            let val = ctx.parabolic_kl(block.stabilizer(), y, w)?.eval(1);
            let sign = if (ctx.length(w) - ctx.length(y)) % 2 == 0 {
                1
            } else {
                -1
            };
            c[row][col] = sign * val;
        }
    }
    Ok((reps, c))
}

/// Linear-algebra consistency: the character matrix (irreducibles in terms
/// of standards) times the decomposition matrix (standards in terms of
/// irreducibles) must be the identity on every downward-closed truncation.
pub fn verify_inversion(
    ctx: &KlContext<'_>,
    block: &BlockData,
    length_bound: usize,
    gate: KlGoodGate,
) -> Result<bool, ExtError> {
    let (_, c) = character_matrix(ctx, block, length_bound)?;
    let d = decomp_matrix(ctx, block, length_bound, gate)?;
    let n = c.len();
    assert_eq!(d.dim(), n);
    for (i, row) in c.iter().enumerate() {
        for j in 0..n {
            let acc: i64 = (0..n).map(|k| row[k] * d.entries[k][j]).sum();
            if acc != i64::from(i == j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of [`verify_vanishing`].
#[derive(Debug, Clone)]
pub struct VanishingReport {
    pub pairs_checked: usize,
    /// `(y word, w word)` for every violated pair.
    pub violations: Vec<(Word, Word)>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `Σ_{x∈W_J} (-1)^(l(x)) P_{yx,w} = 0` for every dominant
/// `w ∉ W^J` and every `y` among the block's representatives, up to the
/// length bound. The block must be singular.
pub fn verify_vanishing(
    ctx: &KlContext<'_>,
    block: &BlockData,
    length_bound: usize,
) -> Result<VanishingReport, ExtError> {
    let j = block.stabilizer();
    if j.is_empty() {
        return Err(ExtError::SingularBlockRequired);
    }
    let subgroup = ctx.group().parabolic_elements(j)?;
    let mut report = VanishingReport {
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for w in ctx.ball(length_bound) {
        if !ctx.group().is_dominant_element(&w) || ctx.group().is_min_coset_rep(&w, j) {
            continue;
        }
        for (y, _) in block.dominant_reps() {
            if ctx.length(y) > length_bound {
                continue;
            }
            let mut total = IntPoly::zero();
            for x in &subgroup {
                let yx = ctx.group().multiply(y, x).unwrap();
                let term = ctx.kl(&yx, &w);
                if ctx.length(x) % 2 == 0 {
                    total = total.add(&term);
                } else {
                    total = total.sub(&term);
                }
            }
            report.pairs_checked += 1;
            if !total.is_zero() {
                report.violations.push((ctx.word(y), ctx.word(&w)));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alcove::dominant_orbit;
    use crate::coxeter::CoxeterGroup;
    use crate::rootsys::build_root_system;

    fn a1_group(ell: i64) -> CoxeterGroup {
        CoxeterGroup::affine(build_root_system(TypeLabel::A, 1).unwrap(), ell).unwrap()
    }

    fn rep_of_length(block: &BlockData, ctx: &KlContext<'_>, len: usize) -> GroupElement {
        block
            .dominant_reps()
            .iter()
            .find(|(w, _)| ctx.length(w) == len)
            .map(|(w, _)| w.clone())
            .unwrap()
    }

    #[test]
    fn delta_irr_regular_a1() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        let y = rep_of_length(&block, &ctx, 1); // weight 0
        let w = rep_of_length(&block, &ctx, 2); // weight 8
        let gate = KlGoodGate::default();

        let same = ext_delta_irr(&ctx, &block, &y, &y, gate).unwrap();
        assert_eq!(same, ExtSeries::one());

        let series = ext_delta_irr(&ctx, &block, &y, &w, gate).unwrap();
        assert_eq!(series.coeffs(), &[0, 1], "dim Ext^1 = 1");
        assert_eq!(series.render(), "t");
    }

    #[test]
    fn delta_irr_singular_a1_vanishes() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-1]), 4).unwrap();
        let y = rep_of_length(&block, &ctx, 2); // weight 9
        let w = rep_of_length(&block, &ctx, 4); // weight 19
        let series = ext_delta_irr(&ctx, &block, &y, &w, KlGoodGate::default()).unwrap();
        assert!(series.is_zero());
        // The dual formula gives the same numbers.
        let dual = ext_irr_nabla(&ctx, &block, &w, &y, KlGoodGate::default()).unwrap();
        assert!(dual.is_zero());
        let diag = ext_irr_nabla(&ctx, &block, &w, &w, KlGoodGate::default()).unwrap();
        assert_eq!(diag, ExtSeries::one());
    }

    #[test]
    fn irr_irr_spot_values() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        let gate = KlGoodGate::default();
        let w0 = rep_of_length(&block, &ctx, 1); // weight 0
        let w8 = rep_of_length(&block, &ctx, 2); // weight 8
        assert_eq!(
            ext_irr_irr(&ctx, &block, &w0, &w0, gate).unwrap(),
            ExtSeries::one()
        );
        assert_eq!(
            ext_irr_irr(&ctx, &block, &w0, &w8, gate).unwrap().coeffs(),
            &[0, 1]
        );
        assert_eq!(
            ext_irr_irr(&ctx, &block, &w8, &w8, gate).unwrap().coeffs(),
            &[1, 0, 1]
        );
    }

    #[test]
    fn ext_ui_examples() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        let gate = KlGoodGate::default();
        let j = [1usize];
        let y = rep_of_length(&block, &ctx, 2); // s1s0
        let w = rep_of_length(&block, &ctx, 4); // s1s0s1s0

        let i0 = ext_ui(&ctx, &block, &j, &y, &w, 0, gate).unwrap();
        assert!(i0.is_zero(), "matches the singular Ext vanishing");

        let i1 = ext_ui(&ctx, &block, &j, &y, &w, 1, gate).unwrap();
        assert_eq!(i1.coeffs(), &[0, 1], "single x = s1 term");

        // Single surviving term at i = l(w_J): w = y·w_J.
        let w3 = rep_of_length(&block, &ctx, 3); // s1s0s1 = (s1s0)·s1
        let top = ext_ui(&ctx, &block, &j, &y, &w3, 1, gate).unwrap();
        assert_eq!(top, ExtSeries::one());

        // Out-of-range filtration index.
        assert!(matches!(
            ext_ui(&ctx, &block, &j, &y, &w, 2, gate),
            Err(ExtError::FiltrationIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn characters_a1() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);

        let regular = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        let w8 = rep_of_length(&regular, &ctx, 2);
        let ch = irr_character(&ctx, &regular, &w8, 6).unwrap();
        assert_eq!(ch.coeff(&Word(vec![1, 0])), 1);
        assert_eq!(ch.coeff(&Word(vec![1])), -1);

        // Bottom of the block: ch L = ch Delta.
        let w0 = rep_of_length(&regular, &ctx, 1);
        let ch = irr_character(&ctx, &regular, &w0, 6).unwrap();
        assert_eq!(ch.as_map().len(), 1);

        let singular = dominant_orbit(&g, &Weight(vec![-1]), 6).unwrap();
        let w19 = rep_of_length(&singular, &ctx, 4);
        let ch = irr_character(&ctx, &singular, &w19, 6).unwrap();
        assert_eq!(ch.coeff(&Word(vec![1, 0, 1, 0])), 1);
        assert_eq!(ch.coeff(&Word(vec![1, 0])), 0, "parabolic cancellation");

        // Truncation below l(w) is rejected.
        assert!(matches!(
            irr_character(&ctx, &singular, &w19, 3),
            Err(ExtError::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn decomp_matrix_a1_regular() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 4).unwrap();
        let m = decomp_matrix(&ctx, &block, 2, KlGoodGate::default()).unwrap();
        assert_eq!(m.entries, vec![vec![1, 1], vec![0, 1]]);

        // Standard modules decompose with at most two factors here: the
        // multiplicity dies beyond adjacent lengths.
        let m = decomp_matrix(&ctx, &block, 4, KlGoodGate::default()).unwrap();
        assert_eq!(
            m.entries,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 1, 1, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ]
        );
    }

    #[test]
    fn decomp_matrix_a1_singular_is_identity() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-1]), 8).unwrap();
        let m = decomp_matrix(&ctx, &block, 8, KlGoodGate::default()).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn inversion_a1() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let gate = KlGoodGate::default();
        let regular = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        assert!(verify_inversion(&ctx, &regular, 6, gate).unwrap());
        let singular = dominant_orbit(&g, &Weight(vec![-1]), 6).unwrap();
        assert!(verify_inversion(&ctx, &singular, 6, gate).unwrap());
    }

    #[test]
    fn vanishing_a1() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-1]), 6).unwrap();
        let report = verify_vanishing(&ctx, &block, 6).unwrap();
        assert!(report.passed());
        assert!(report.pairs_checked > 0);

        let regular = dominant_orbit(&g, &Weight(vec![-2]), 6).unwrap();
        assert!(matches!(
            verify_vanishing(&ctx, &regular, 6),
            Err(ExtError::SingularBlockRequired)
        ));

        // A bound below the first dominant length leaves nothing to check.
        let tiny = dominant_orbit(&g, &Weight(vec![-1]), 0).unwrap();
        let vacuous = verify_vanishing(&ctx, &tiny, 0).unwrap();
        assert_eq!(vacuous.pairs_checked, 0);
        assert!(vacuous.passed());
    }

    #[test]
    fn gating_on_type_b() {
        let g = CoxeterGroup::affine(build_root_system(TypeLabel::B, 2).unwrap(), 5).unwrap();
        let ctx = KlContext::new(&g);
        let lam = crate::alcove::find_weight_with_stabilizer(&g, &[])
            .unwrap()
            .unwrap();
        // The lowest dominant alcove sits at length l(w0) = 4 in rank 2.
        let block = dominant_orbit(&g, &lam, 5).unwrap();
        let reps: Vec<GroupElement> = block
            .dominant_reps()
            .iter()
            .map(|(w, _)| w.clone())
            .collect();
        assert!(!reps.is_empty());
        let err = ext_delta_irr(&ctx, &block, &reps[0], &reps[0], KlGoodGate::default());
        match err {
            Err(ExtError::KlGoodUnknown { .. }) => {}
            other => panic!("expected KL-good refusal, got {other:?}"),
        }
        // The override lets it through.
        assert!(ext_delta_irr(&ctx, &block, &reps[0], &reps[0], KlGoodGate::assume()).is_ok());
    }

    #[test]
    fn euler_characteristic_matches_character_coefficient() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 5).unwrap();
        let gate = KlGoodGate::default();
        for (y, _) in block.dominant_reps() {
            for (w, _) in block.dominant_reps() {
                let series = ext_delta_irr(&ctx, &block, y, w, gate).unwrap();
                let p1 = ctx.parabolic_kl(block.stabilizer(), y, w).unwrap().eval(1);
                let diff = ctx.length(w) as i64 - ctx.length(y) as i64;
                let sign = if diff % 2 == 0 { 1 } else { -1 };
                assert_eq!(series.eval_minus_one(), sign * p1);
            }
        }
    }

    #[test]
    fn membership_is_enforced() {
        let g = a1_group(5);
        let ctx = KlContext::new(&g);
        let block = dominant_orbit(&g, &Weight(vec![-2]), 3).unwrap();
        let outside = g.element_from_word(&Word(vec![0])).unwrap();
        assert!(matches!(
            ext_delta_irr(&ctx, &block, &outside, &outside, KlGoodGate::default()),
            Err(ExtError::NotInBlock(..))
        ));
    }
}
