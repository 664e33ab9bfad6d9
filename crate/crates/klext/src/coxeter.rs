//! The affine Weyl group `W_l = lZR ⋊ W` as a concrete group of affine
//! transformations, together with its Coxeter-system structure: lengths,
//! descents, canonical reduced words, Bruhat order, coset decompositions and
//! ball enumeration.
//!
//! Elements act on ρ-shifted weight coordinates `v = λ + ρ` as
//! `v ↦ fin(v) + trans`, with `fin` an exact integer matrix (the finite Weyl
//! part) and `trans` a vector in `l·(root lattice)` written in weight
//! coordinates. Equality and hashing work directly on this canonical pair,
//! so no word problem is ever solved.
//!
//! Generator `i` for `1 ≤ i ≤ rank` is the simple reflection in the wall
//! `⟨v, αᵢ^∨⟩ = 0`, and generator `0` is the affine reflection in the wall
//! `⟨v, α̃^∨⟩ = -l` of the top antidominant alcove `C⁻`, where `α̃` is the
//! highest short root (its coroot is the highest coroot).
//!
//! The same machinery doubles as a finite-Coxeter engine: a group built with
//! [`CoxeterGroup::finite`] has generators `1..=rank` and no translations,
//! which is what the Kazhdan-Lusztig oracle tests run on.

use std::collections::HashMap;
use std::fmt;

use crate::rootsys::RootSystem;

/// Errors from group construction and element operations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("ell must be >= 1, got {0}")]
    InvalidEll(i64),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("generator index {index} out of range (valid: {min}..={max})")]
    GeneratorOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },
    #[error("the parabolic subgroup generated by {{{0}}} is infinite")]
    InfiniteParabolic(String),
    #[error("malformed word {0:?}")]
    MalformedWord(String),
}

/// Reduced word in the generators, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Comma-separated generator indices, e.g. `"1,0,1"`; the identity is
    /// the empty string. Used in cache keys and CLI I/O.
    pub fn serialize(&self) -> String {
        self.0
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(s: &str) -> Result<Word, CoxeterError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for part in s.split(',') {
            let g: usize = part
                .trim()
                .parse()
                .map_err(|_| CoxeterError::MalformedWord(s.to_string()))?;
            letters.push(g);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Whether the group is the affine group `W_l` or just the finite Weyl group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Affine { ell: i64 },
    Finite,
}

/// Group element as an affine map on ρ-shifted weight coordinates:
/// `v ↦ fin(v) + trans`. The identity is `(I, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// Row-major rank×rank matrix of the finite part.
    fin: Vec<i64>,
    /// Translation in weight coordinates; always 0 in finite mode.
    trans: Vec<i64>,
}

impl GroupElement {
    pub fn is_identity(&self, rank: usize) -> bool {
        self.trans.iter().all(|&t| t == 0)
            && (0..rank).all(|i| (0..rank).all(|j| self.fin[i * rank + j] == i64::from(i == j)))
    }
}

/// The group `(W_l, S_l)` (or a finite Weyl group) with its geometric data.
#[derive(Debug)]
pub struct CoxeterGroup {
    rs: RootSystem,
    kind: GroupKind,
    /// Precomputed generator elements, indexed by generator number minus
    /// `min_generator()`.
    gens: Vec<GroupElement>,
    /// Scaled interior base point of (the ρ-shift of) `C⁻`: the true base
    /// point is `base_point / base_scale`, chosen as `-(ell/m)·ρ` with
    /// `m = 1 + max coroot height`.
    base_point: Vec<i64>,
    base_scale: i64,
}

impl CoxeterGroup {
    /// The affine Weyl group for `rs` at translation scale `ell`.
    pub fn affine(rs: RootSystem, ell: i64) -> Result<CoxeterGroup, CoxeterError> {
        if ell < 1 {
            return Err(CoxeterError::InvalidEll(ell));
        }
        Self::build(rs, GroupKind::Affine { ell })
    }

    /// The finite Weyl group of `rs` (generators `1..=rank`, no affine node).
    pub fn finite(rs: RootSystem) -> Result<CoxeterGroup, CoxeterError> {
        Self::build(rs, GroupKind::Finite)
    }

    fn build(rs: RootSystem, kind: GroupKind) -> Result<CoxeterGroup, CoxeterError> {
        let rank = rs.rank();
        let max_ht = (0..rs.positive_coroots().len())
            .map(|k| rs.coroot_height(k))
            .max()
            .unwrap();
        let m = max_ht + 1;
        let ell_for_base = match kind {
            GroupKind::Affine { ell } => ell,
            GroupKind::Finite => 1,
        };
        // base point = -(ell/m)·rho, stored as (-ell·rho, scale m).
        let base_point: Vec<i64> = vec![-ell_for_base; rank];
        let base_scale = m;

        let mut gens = Vec::new();
        if let GroupKind::Affine { ell } = kind {
            gens.push(affine_generator(&rs, ell));
        }
        for i in 0..rank {
            gens.push(simple_reflection(&rs, i));
        }

        let group = CoxeterGroup {
            rs,
            kind,
            gens,
            base_point,
            base_scale,
        };

        // The base point must lie strictly inside the fundamental alcove
        // (resp. chamber): -ell < <p0, a^vee> < 0 for every positive coroot.
        for k in 0..group.rs.positive_coroots().len() {
            let val = group.rs.pair_unchecked(&group.base_point, k);
            assert!(val < 0, "base point not antidominant");
            if let GroupKind::Affine { ell } = kind {
                assert!(val > -ell * group.base_scale, "base point below C- wall");
            }
        }
        // Every generator is an involution.
        for g in group.generators() {
            let s = group.generator(g).unwrap();
            let ss = group.multiply(&s, &s).unwrap();
            assert!(ss.is_identity(rank), "generator {g} is not an involution");
        }
        Ok(group)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn ell(&self) -> Option<i64> {
        match self.kind {
            GroupKind::Affine { ell } => Some(ell),
            GroupKind::Finite => None,
        }
    }

    /// Smallest generator index: 0 in affine mode, 1 in finite mode.
    pub fn min_generator(&self) -> usize {
        match self.kind {
            GroupKind::Affine { .. } => 0,
            GroupKind::Finite => 1,
        }
    }

    /// All generator indices in increasing order.
    pub fn generators(&self) -> Vec<usize> {
        (self.min_generator()..=self.rank()).collect()
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn identity(&self) -> GroupElement {
        let rank = self.rank();
        let mut fin = vec![0i64; rank * rank];
        for i in 0..rank {
            fin[i * rank + i] = 1;
        }
        GroupElement {
            fin,
            trans: vec![0; rank],
        }
    }

    pub fn generator(&self, index: usize) -> Result<GroupElement, CoxeterError> {
        let min = self.min_generator();
        if index < min || index > self.rank() {
            return Err(CoxeterError::GeneratorOutOfRange {
                index,
                min,
                max: self.rank(),
            });
        }
        Ok(self.gens[index - min].clone())
    }

    /// Composition of affine maps: `(a·b)(v) = a(b(v))`.
    pub fn multiply(
        &self,
        a: &GroupElement,
        b: &GroupElement,
    ) -> Result<GroupElement, CoxeterError> {
        let rank = self.rank();
        if a.fin.len() != rank * rank || b.fin.len() != rank * rank {
            return Err(CoxeterError::GroupMismatch);
        }
        let mut fin = vec![0i64; rank * rank];
        for i in 0..rank {
            for k in 0..rank {
                let aik = a.fin[i * rank + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..rank {
                    fin[i * rank + j] += aik * b.fin[k * rank + j];
                }
            }
        }
        let mut trans = a.trans.clone();
        for (i, t) in trans.iter_mut().enumerate() {
            for k in 0..rank {
                *t += a.fin[i * rank + k] * b.trans[k];
            }
        }
        Ok(GroupElement { fin, trans })
    }

    pub fn multiply_gen(&self, a: &GroupElement, s: usize) -> Result<GroupElement, CoxeterError> {
        let g = self.generator(s)?;
        self.multiply(a, &g)
    }

    pub fn gen_multiply(&self, s: usize, a: &GroupElement) -> Result<GroupElement, CoxeterError> {
        let g = self.generator(s)?;
        self.multiply(&g, a)
    }

    /// The affine action `w(v) = fin(v) + trans` on ρ-shifted weight
    /// coordinates.
    pub fn act_on_shifted(&self, w: &GroupElement, v: &[i64]) -> Vec<i64> {
        let rank = self.rank();
        assert_eq!(v.len(), rank, "coordinate rank mismatch");
        (0..rank)
            .map(|i| (0..rank).map(|j| w.fin[i * rank + j] * v[j]).sum::<i64>() + w.trans[i])
            .collect()
    }

    /// Image of the (scaled) base point under `w`. Exact: the returned
    /// vector is `base_scale · w(p0)` in weight coordinates.
    fn image_of_base(&self, w: &GroupElement) -> Vec<i64> {
        let rank = self.rank();
        (0..rank)
            .map(|i| {
                let acc: i64 = (0..rank)
                    .map(|j| w.fin[i * rank + j] * self.base_point[j])
                    .sum();
                acc + self.base_scale * w.trans[i]
            })
            .collect()
    }

    /// Coxeter length: the number of reflection hyperplanes
    /// `⟨v, α^∨⟩ = k·ell` (just `k = 0` in finite mode) strictly separating
    /// the base point from its image under `w`.
    pub fn length(&self, w: &GroupElement) -> usize {
        let img = self.image_of_base(w);
        let mut count = 0usize;
        for k in 0..self.rs.positive_coroots().len() {
            let a = self.rs.pair_unchecked(&self.base_point, k);
            let b = self.rs.pair_unchecked(&img, k);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            match self.kind {
                GroupKind::Finite => {
                    if lo < 0 && 0 < hi {
                        count += 1;
                    }
                }
                GroupKind::Affine { ell } => {
                    // Hyperplane levels are k·ell·base_scale after scaling.
                    let step = ell * self.base_scale;
                    debug_assert!(lo.rem_euclid(step) != 0 && hi.rem_euclid(step) != 0);
                    count += (hi.div_euclid(step) - lo.div_euclid(step)) as usize;
                }
            }
        }
        count
    }

    /// Generators `s` with `l(ws) < l(w)`.
    pub fn right_descents(&self, w: &GroupElement) -> Vec<usize> {
        let lw = self.length(w);
        self.generators()
            .into_iter()
            .filter(|&s| {
                let ws = self.multiply_gen(w, s).unwrap();
                self.length(&ws) < lw
            })
            .collect()
    }

    /// Generators `s` with `l(sw) < l(w)`.
    pub fn left_descents(&self, w: &GroupElement) -> Vec<usize> {
        let lw = self.length(w);
        self.generators()
            .into_iter()
            .filter(|&s| {
                let sw = self.gen_multiply(s, w).unwrap();
                self.length(&sw) < lw
            })
            .collect()
    }

    /// Lexicographically least reduced word: repeatedly strip the
    /// smallest-index left descent.
    pub fn canonical_word(&self, w: &GroupElement) -> Word {
        let mut letters = Vec::new();
        let mut cur = w.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let s = *self
                .left_descents(&cur)
                .first()
                .expect("non-identity element with no left descent");
            letters.push(s);
            cur = self.gen_multiply(s, &cur).unwrap();
            len -= 1;
            debug_assert_eq!(self.length(&cur), len);
        }
        Word(letters)
    }

    /// Multiplies out a word left-to-right.
    pub fn element_from_word(&self, word: &Word) -> Result<GroupElement, CoxeterError> {
        let mut cur = self.identity();
        for &s in &word.0 {
            cur = self.multiply_gen(&cur, s)?;
        }
        Ok(cur)
    }

    /// Bruhat order, by the standard descent recursion.
    pub fn bruhat_leq(&self, u: &GroupElement, w: &GroupElement) -> bool {
        let mut u = u.clone();
        let mut w = w.clone();
        let mut lu = self.length(&u);
        let mut lw = self.length(&w);
        loop {
            if lu > lw {
                return false;
            }
            if lw == 0 {
                return lu == 0;
            }
            if u == w {
                return true;
            }
            let s = *self.right_descents(&w).first().unwrap();
            let us = self.multiply_gen(&u, s).unwrap();
            if self.length(&us) < lu {
                u = us;
                lu -= 1;
            }
            w = self.multiply_gen(&w, s).unwrap();
            lw -= 1;
        }
    }

    /// Coset decomposition `w = w^J · w_J` with `w^J ∈ W^J` (no right
    /// descent in `J`), `w_J ∈ W_J`, lengths additive.
    pub fn coset_decompose(
        &self,
        w: &GroupElement,
        j: &[usize],
    ) -> Result<(GroupElement, GroupElement), CoxeterError> {
        self.check_parabolic_finite(j)?;
        let mut min = w.clone();
        let mut tail = self.identity();
        loop {
            let len = self.length(&min);
            let mut stripped = false;
            for &s in j {
                let ms = self.multiply_gen(&min, s)?;
                if self.length(&ms) < len {
                    min = ms;
                    tail = self.gen_multiply(s, &tail)?;
                    stripped = true;
                    break;
                }
            }
            if !stripped {
                return Ok((min, tail));
            }
        }
    }

    /// True iff `w` has no right descent in `J`.
    pub fn is_min_coset_rep(&self, w: &GroupElement, j: &[usize]) -> bool {
        let lw = self.length(w);
        j.iter().all(|&s| {
            self.multiply_gen(w, s)
                .map(|ws| self.length(&ws) > lw)
                .unwrap_or(false)
        })
    }

    /// All elements of length ≤ `bound`, each exactly once, ordered by
    /// length then lexicographically by canonical word.
    pub fn ball(&self, bound: usize) -> Vec<GroupElement> {
        let mut out = Vec::new();
        let mut frontier = vec![self.identity()];
        out.push((Word::empty(), self.identity()));
        let mut seen: HashMap<GroupElement, ()> = HashMap::new();
        seen.insert(self.identity(), ());
        for len in 1..=bound {
            let mut next = Vec::new();
            for w in &frontier {
                for s in self.generators() {
                    let ws = self.multiply_gen(w, s).unwrap();
                    if self.length(&ws) == len && !seen.contains_key(&ws) {
                        seen.insert(ws.clone(), ());
                        next.push(ws);
                    }
                }
            }
            let mut level: Vec<(Word, GroupElement)> = next
                .iter()
                .map(|w| (self.canonical_word(w), w.clone()))
                .collect();
            level.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(level.iter().cloned());
            frontier = next;
        }
        out.into_iter().map(|(_, w)| w).collect()
    }

    /// Checks that `W_J` is finite. In affine mode any proper subset of the
    /// generators works; the full set generates the whole (infinite) group.
    fn check_parabolic_finite(&self, j: &[usize]) -> Result<(), CoxeterError> {
        for &s in j {
            // Validate indices.
            self.generator(s)?;
        }
        if matches!(self.kind, GroupKind::Affine { .. }) && j.len() > self.rank() {
            return Err(CoxeterError::InfiniteParabolic(join_indices(j)));
        }
        if matches!(self.kind, GroupKind::Affine { .. }) {
            let mut distinct: Vec<usize> = j.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() == self.generator_count() {
                return Err(CoxeterError::InfiniteParabolic(join_indices(j)));
            }
        }
        Ok(())
    }

    /// All elements of the (finite) parabolic subgroup `W_J`, by closure
    /// under the generators in `J`, ordered by length then canonical word.
    /// Enumeration is capped at the classical order of the finite Weyl
    /// group; exceeding the cap reports an infinite parabolic.
    pub fn parabolic_elements(&self, j: &[usize]) -> Result<Vec<GroupElement>, CoxeterError> {
        self.check_parabolic_finite(j)?;
        let cap = self.rs.weyl_order() as usize;
        let mut seen: HashMap<GroupElement, ()> = HashMap::new();
        seen.insert(self.identity(), ());
        let mut queue = vec![self.identity()];
        while let Some(w) = queue.pop() {
            for &s in j {
                let ws = self.multiply_gen(&w, s)?;
                if !seen.contains_key(&ws) {
                    if seen.len() >= cap {
                        return Err(CoxeterError::InfiniteParabolic(join_indices(j)));
                    }
                    seen.insert(ws.clone(), ());
                    queue.push(ws);
                }
            }
        }
        let mut all: Vec<(usize, Word, GroupElement)> = seen
            .into_keys()
            .map(|w| (self.length(&w), self.canonical_word(&w), w))
            .collect();
        all.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        Ok(all.into_iter().map(|(_, _, w)| w).collect())
    }

    /// Length of the longest element of the finite parabolic `W_J`.
    pub fn longest_parabolic_length(&self, j: &[usize]) -> Result<usize, CoxeterError> {
        let elements = self.parabolic_elements(j)?;
        Ok(elements.iter().map(|w| self.length(w)).max().unwrap_or(0))
    }

    /// True iff `w` maps the fundamental alcove into the dominant cone,
    /// i.e. `w.λ` is dominant for every regular `λ` (membership in `W⁺`).
    pub fn is_dominant_element(&self, w: &GroupElement) -> bool {
        let img = self.image_of_base(w);
        // Simple coroots are the height-1 positive coroots.
        (0..self.rs.positive_coroots().len())
            .filter(|&k| self.rs.coroot_height(k) == 1)
            .all(|k| self.rs.pair_unchecked(&img, k) > 0)
    }

    /// Order of the product `s·t` of two generators, by iterated
    /// multiplication; `None` if it exceeds `limit` (treated as infinite).
    pub fn product_order(&self, s: usize, t: usize, limit: usize) -> Option<usize> {
        let st = self
            .multiply(&self.generator(s).ok()?, &self.generator(t).ok()?)
            .ok()?;
        let mut cur = st.clone();
        for order in 1..=limit {
            if cur.is_identity(self.rank()) {
                return Some(order);
            }
            cur = self.multiply(&cur, &st).ok()?;
        }
        None
    }
}

fn join_indices(j: &[usize]) -> String {
    j.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Simple reflection `s_i` (0-based root index) on weight coordinates:
/// `v ↦ v - v_i·α_i`.
fn simple_reflection(rs: &RootSystem, i: usize) -> GroupElement {
    let rank = rs.rank();
    let cartan = rs.cartan();
    let mut fin = vec![0i64; rank * rank];
    for r in 0..rank {
        for c in 0..rank {
            fin[r * rank + c] = i64::from(r == c);
        }
        fin[r * rank + i] -= cartan[r][i];
    }
    GroupElement {
        fin,
        trans: vec![0; rank],
    }
}

/// The affine generator: reflection in `⟨v, α̃^∨⟩ = -ell`, i.e.
/// `v ↦ s_α̃(v) - ell·α̃`.
fn affine_generator(rs: &RootSystem, ell: i64) -> GroupElement {
    let rank = rs.rank();
    let idx = rs.highest_short_root();
    let alpha_w = rs.root_in_weight_coords(idx);
    let alpha_c = &rs.positive_coroots()[idx];
    let mut fin = vec![0i64; rank * rank];
    for r in 0..rank {
        for c in 0..rank {
            fin[r * rank + c] = i64::from(r == c) - alpha_w[r] * alpha_c[c];
        }
    }
    let trans: Vec<i64> = alpha_w.iter().map(|&a| -ell * a).collect();
    GroupElement { fin, trans }
}
