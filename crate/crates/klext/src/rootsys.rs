//! Exact root-system data for the finite irreducible types `A`–`G`.
//!
//! Everything downstream (alcove walls, affine reflections, length counting)
//! is driven by the tables built here: the Cartan matrix, the full list of
//! positive roots and coroots, and the classical constants `h` (Coxeter
//! number), `g` (dual Coxeter number) and the lacing number.
//!
//! Coordinate conventions, used consistently across the crate:
//!
//! * weights are stored in *fundamental-weight* coordinates, so the `i`-th
//!   coordinate of `λ` is the pairing `⟨λ, αᵢ^∨⟩`;
//! * roots are stored in *simple-root* coordinates, coroots in
//!   *simple-coroot* coordinates;
//! * `cartan[i][j] = ⟨αⱼ, αᵢ^∨⟩`, so column `j` of the Cartan matrix is the
//!   simple root `αⱼ` written in fundamental-weight coordinates.
//!
//! All arithmetic is exact (`i64`); the coordinates that appear at the
//! length bounds supported by the CLI stay far below overflow.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Simple-type label of a finite irreducible root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLabel {
    pub fn parse(s: &str) -> Option<TypeLabel> {
        match s.trim() {
            "A" | "a" => Some(TypeLabel::A),
            "B" | "b" => Some(TypeLabel::B),
            "C" | "c" => Some(TypeLabel::C),
            "D" | "d" => Some(TypeLabel::D),
            "E" | "e" => Some(TypeLabel::E),
            "F" | "f" => Some(TypeLabel::F),
            "G" | "g" => Some(TypeLabel::G),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::F => "F",
            TypeLabel::G => "G",
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Errors raised while building or querying a root system.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid type/rank pair {label}{rank}: {reason}")]
    InvalidTypeRank {
        label: TypeLabel,
        rank: usize,
        reason: &'static str,
    },
    #[error("coroot index {index} out of range (there are {count} positive coroots)")]
    CorootIndexOutOfRange { index: usize, count: usize },
    #[error("weight has {got} coordinates, expected {expected}")]
    WeightRankMismatch { got: usize, expected: usize },
}

/// Integral weight in fundamental-weight coordinates.
///
/// Coordinate `i` equals `⟨λ, αᵢ^∨⟩` by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }

    /// Bracketed integer list `[a1,...,an]`, the serialization used by the
    /// CLI and the JSON output.
    pub fn bracketed(&self) -> String {
        let inner: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(","))
    }

    /// Parses the `[a1,...,an]` form. Whitespace around entries is accepted.
    pub fn parse(s: &str) -> Option<Weight> {
        let s = s.trim();
        let inner = s.strip_prefix('[')?.strip_suffix(']')?;
        if inner.trim().is_empty() {
            return Some(Weight(Vec::new()));
        }
        let mut coords = Vec::new();
        for part in inner.split(',') {
            coords.push(part.trim().parse::<i64>().ok()?);
        }
        Some(Weight(coords))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bracketed())
    }
}

/// Finite irreducible root system with its classical constants.
#[derive(Debug, Clone)]
pub struct RootSystem {
    type_label: TypeLabel,
    rank: usize,
    /// `cartan[i][j] = ⟨αⱼ, αᵢ^∨⟩`.
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates; index `k` matches
    /// `positive_coroots[k]`.
    positive_roots: Vec<Vec<i64>>,
    /// Positive coroots in simple-coroot coordinates.
    positive_coroots: Vec<Vec<i64>>,
    rho: Weight,
    coxeter_number: i64,
    dual_coxeter_number: i64,
    lacing: i64,
    /// Index into `positive_roots` of the highest short root; its coroot is
    /// the highest coroot, whose wall bounds the fundamental alcove.
    highest_short_root: usize,
}

/// Builds the root system of the given type and rank.
///
/// Rank constraints: `A: ≥1`, `B: ≥2`, `C: ≥2`, `D: ≥3`, `E: 6–8`, `F: 4`,
/// `G: 2`.
pub fn build_root_system(label: TypeLabel, rank: usize) -> Result<RootSystem, RootSystemError> {
    let cartan = cartan_matrix(label, rank)?;
    let sym = symmetrizer(&cartan);
    let positive_roots = enumerate_positive_roots(&cartan);
    let positive_coroots: Vec<Vec<i64>> = positive_roots
        .iter()
        .map(|root| coroot_of(root, &cartan, &sym))
        .collect();

    // Heights in the two coordinate systems. The highest root determines h,
    // the highest coroot determines g and the affine wall.
    let root_height = |r: &Vec<i64>| -> i64 { r.iter().sum() };
    let highest_root_ht = positive_roots.iter().map(root_height).max().unwrap();
    let highest_coroot_ht = positive_coroots.iter().map(root_height).max().unwrap();
    let coxeter_number = highest_root_ht + 1;
    let min_sym = *sym.iter().min().unwrap();
    debug_assert_eq!(min_sym, 1);
    let lacing = *sym.iter().max().unwrap();

    // The highest short root is the unique short root whose coroot is the
    // highest coroot.
    let highest_short_root = (0..positive_roots.len())
        .max_by_key(|&k| root_height(&positive_coroots[k]))
        .unwrap();
    debug_assert_eq!(
        root_height(&positive_coroots[highest_short_root]),
        highest_coroot_ht
    );

    // g - 1 is the height of the coroot of the highest (long) root.
    let highest_root_idx = (0..positive_roots.len())
        .max_by_key(|&k| root_height(&positive_roots[k]))
        .unwrap();
    let dual_coxeter_number = root_height(&positive_coroots[highest_root_idx]) + 1;

    Ok(RootSystem {
        type_label: label,
        rank,
        cartan,
        positive_roots,
        positive_coroots,
        rho: Weight(vec![1; rank]),
        coxeter_number,
        dual_coxeter_number,
        lacing,
        highest_short_root,
    })
}

impl RootSystem {
    pub fn type_label(&self) -> TypeLabel {
        self.type_label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Coxeter number `h`.
    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    /// Dual Coxeter number `g`.
    pub fn dual_coxeter_number(&self) -> i64 {
        self.dual_coxeter_number
    }

    /// Lacing number: 1 for `A`,`D`,`E`; 2 for `B`,`C`,`F`; 3 for `G`.
    pub fn lacing(&self) -> i64 {
        self.lacing
    }

    /// Index of the highest short root in `positive_roots`.
    pub fn highest_short_root(&self) -> usize {
        self.highest_short_root
    }

    /// `⟨λ, α^∨⟩` for the positive coroot at `coroot_index`, computed by
    /// expanding the coroot in simple coroots.
    pub fn pair(&self, lambda: &Weight, coroot_index: usize) -> Result<i64, RootSystemError> {
        if coroot_index >= self.positive_coroots.len() {
            return Err(RootSystemError::CorootIndexOutOfRange {
                index: coroot_index,
                count: self.positive_coroots.len(),
            });
        }
        if lambda.rank() != self.rank {
            return Err(RootSystemError::WeightRankMismatch {
                got: lambda.rank(),
                expected: self.rank,
            });
        }
        Ok(self.pair_unchecked(&lambda.0, coroot_index))
    }

    pub(crate) fn pair_unchecked(&self, coords: &[i64], coroot_index: usize) -> i64 {
        self.positive_coroots[coroot_index]
            .iter()
            .zip(coords)
            .map(|(c, v)| c * v)
            .sum()
    }

    /// True iff every fundamental coordinate is ≥ 0 (walls included).
    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.0.iter().all(|&c| c >= 0)
    }

    /// A positive root, converted from simple-root to fundamental-weight
    /// coordinates via the Cartan matrix.
    pub fn root_in_weight_coords(&self, root_index: usize) -> Vec<i64> {
        let b = &self.positive_roots[root_index];
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.cartan[i][j] * b[j]).sum())
            .collect()
    }

    /// Height of the coroot at `index` (sum of simple-coroot coefficients).
    pub fn coroot_height(&self, index: usize) -> i64 {
        self.positive_coroots[index].iter().sum()
    }

    /// Order of the finite Weyl group, from the classical formulas.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let factorial = |m: u64| (1..=m).product::<u64>();
        match self.type_label {
            TypeLabel::A => factorial(n + 1),
            TypeLabel::B | TypeLabel::C => (1u64 << n) * factorial(n),
            TypeLabel::D => (1u64 << (n - 1)) * factorial(n),
            TypeLabel::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            TypeLabel::F => 1152,
            TypeLabel::G => 12,
        }
    }
}

fn cartan_matrix(label: TypeLabel, rank: usize) -> Result<Vec<Vec<i64>>, RootSystemError> {
    let invalid = |reason: &'static str| RootSystemError::InvalidTypeRank {
        label,
        rank,
        reason,
    };
    let n = rank;
    let chain = |n: usize| -> Vec<Vec<i64>> {
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            c[i][i] = 2;
            if i + 1 < n {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        c
    };
    match label {
        TypeLabel::A => {
            if n < 1 {
                return Err(invalid("type A needs rank >= 1"));
            }
            Ok(chain(n))
        }
        TypeLabel::B => {
            // alpha_n is the short simple root.
            if n < 2 {
                return Err(invalid("type B needs rank >= 2"));
            }
            let mut c = chain(n);
            c[n - 1][n - 2] = -2;
            Ok(c)
        }
        TypeLabel::C => {
            // alpha_n is the long simple root.
            if n < 2 {
                return Err(invalid("type C needs rank >= 2"));
            }
            let mut c = chain(n);
            c[n - 2][n - 1] = -2;
            Ok(c)
        }
        TypeLabel::D => {
            if n < 3 {
                return Err(invalid("type D needs rank >= 3"));
            }
            // Nodes 1..n-2 form a chain; nodes n-1 and n both attach to n-2.
            let mut c = chain(n - 1);
            for row in &mut c {
                row.push(0);
            }
            c.push(vec![0; n]);
            c[n - 1][n - 1] = 2;
            c[n - 1][n - 3] = -1;
            c[n - 3][n - 1] = -1;
            // Undo the chain bond between n-2 and n-1 introduced by chain(n-1).
            c[n - 2][n - 1] = 0;
            Ok(c)
        }
        TypeLabel::E => {
            if !(6..=8).contains(&n) {
                return Err(invalid("type E needs rank 6, 7 or 8"));
            }
            // Bourbaki numbering: chain 1-3-4-5-6(-7)(-8), node 2 attached to 4.
            let mut c = vec![vec![0i64; n]; n];
            for (i, row) in c.iter_mut().enumerate() {
                row[i] = 2;
            }
            let bonds: &[(usize, usize)] = match n {
                6 => &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
                7 => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
                _ => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
            };
            for &(a, b) in bonds {
                c[a - 1][b - 1] = -1;
                c[b - 1][a - 1] = -1;
            }
            Ok(c)
        }
        TypeLabel::F => {
            if n != 4 {
                return Err(invalid("type F needs rank 4"));
            }
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short.
            let mut c = chain(4);
            c[2][1] = -2;
            Ok(c)
        }
        TypeLabel::G => {
            if n != 2 {
                return Err(invalid("type G needs rank 2"));
            }
            // alpha_1 short, alpha_2 long.
            Ok(vec![vec![2, -3], vec![-1, 2]])
        }
    }
}

/// Minimal positive integers `d` with `d[i]·cartan[i][j] = d[j]·cartan[j][i]`.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    let mut d = vec![0i64; n];
    // Propagate along the (connected) diagram, then clear denominators.
    let mut num = vec![0i64; n];
    let mut den = vec![0i64; n];
    num[0] = 1;
    den[0] = 1;
    let mut todo = vec![0usize];
    while let Some(i) = todo.pop() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && den[j] == 0 {
                // d_j / d_i = cartan[i][j] / cartan[j][i]
                num[j] = num[i] * cartan[i][j];
                den[j] = den[i] * cartan[j][i];
                todo.push(j);
            }
        }
    }
    let gcd = |mut a: i64, mut b: i64| -> i64 {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    let lcm_den = den.iter().fold(1i64, |acc, &x| acc / gcd(acc, x) * x.abs());
    for i in 0..n {
        d[i] = num[i] * (lcm_den / den[i]);
        d[i] = d[i].abs();
    }
    let g = d.iter().fold(0i64, |acc, &x| gcd(acc, x));
    for x in &mut d {
        *x /= g;
    }
    d
}

/// Closure of the simple roots under all simple reflections, restricted to
/// the positive ones. Type-uniform; no per-type tables beyond the Cartan
/// matrix.
fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    while let Some(beta) = queue.pop() {
        for i in 0..n {
            // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
            let mut img = beta.clone();
            img[i] -= pairing;
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    let mut positives: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|r| r.iter().all(|&c| c >= 0))
        .collect();
    // Sort by (height, coords) for a stable, readable order.
    positives.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    positives
}

/// Coroot of `root` in simple-coroot coordinates: if `α = Σ bⱼαⱼ` then
/// `α^∨ = Σ bⱼ (dⱼ/d_α) αⱼ^∨`.
fn coroot_of(root: &[i64], cartan: &[Vec<i64>], sym: &[i64]) -> Vec<i64> {
    let n = root.len();
    // (alpha, alpha)/2 with (alpha_i, alpha_j) = d_i * cartan[i][j].
    let mut norm2_half = 0i64;
    for i in 0..n {
        for j in 0..n {
            norm2_half += root[i] * root[j] * sym[i] * cartan[i][j];
        }
    }
    norm2_half /= 2;
    root.iter()
        .enumerate()
        .map(|(j, &b)| {
            let num = b * sym[j];
            debug_assert_eq!(num % norm2_half, 0);
            num / norm2_half
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(label: TypeLabel, rank: usize) -> RootSystem {
        build_root_system(label, rank).unwrap()
    }

    #[test]
    fn a1_basics() {
        let r = rs(TypeLabel::A, 1);
        assert_eq!(r.coxeter_number(), 2);
        assert_eq!(r.dual_coxeter_number(), 2);
        assert_eq!(r.lacing(), 1);
        assert_eq!(r.positive_roots().len(), 1);
    }

    #[test]
    fn classical_tables_small_ranks() {
        // (label, rank, #positive roots, h, g, lacing)
        let table: &[(TypeLabel, usize, usize, i64, i64, i64)] = &[
            (TypeLabel::A, 1, 1, 2, 2, 1),
            (TypeLabel::A, 2, 3, 3, 3, 1),
            (TypeLabel::A, 3, 6, 4, 4, 1),
            (TypeLabel::A, 4, 10, 5, 5, 1),
            (TypeLabel::B, 2, 4, 4, 3, 2),
            (TypeLabel::B, 3, 9, 6, 5, 2),
            (TypeLabel::B, 4, 16, 8, 7, 2),
            (TypeLabel::C, 2, 4, 4, 3, 2),
            (TypeLabel::C, 3, 9, 6, 4, 2),
            (TypeLabel::C, 4, 16, 8, 5, 2),
            (TypeLabel::D, 3, 6, 4, 4, 1),
            (TypeLabel::D, 4, 12, 6, 6, 1),
            (TypeLabel::F, 4, 24, 12, 9, 2),
            (TypeLabel::G, 2, 6, 6, 4, 3),
            (TypeLabel::E, 6, 36, 12, 12, 1),
            (TypeLabel::E, 7, 63, 18, 18, 1),
            (TypeLabel::E, 8, 120, 30, 30, 1),
        ];
        for &(label, rank, count, h, g, lacing) in table {
            let r = rs(label, rank);
            assert_eq!(r.positive_roots().len(), count, "{label}{rank} root count");
            assert_eq!(r.coxeter_number(), h, "{label}{rank} h");
            assert_eq!(r.dual_coxeter_number(), g, "{label}{rank} g");
            assert_eq!(r.lacing(), lacing, "{label}{rank} lacing");
        }
    }

    #[test]
    fn paper_flagged_constants() {
        assert_eq!(rs(TypeLabel::G, 2).coxeter_number(), 6);
        assert_eq!(rs(TypeLabel::E, 8).coxeter_number(), 30);
        assert_eq!(rs(TypeLabel::B, 3).lacing(), 2);
    }

    #[test]
    fn rho_pairs_to_one_with_simple_coroots() {
        for (label, rank) in [
            (TypeLabel::A, 3),
            (TypeLabel::B, 3),
            (TypeLabel::C, 3),
            (TypeLabel::D, 4),
            (TypeLabel::G, 2),
            (TypeLabel::F, 4),
        ] {
            let r = rs(label, rank);
            // Simple coroots are exactly the positive coroots of height 1.
            let mut simple_count = 0;
            for k in 0..r.positive_coroots().len() {
                if r.coroot_height(k) == 1 {
                    simple_count += 1;
                    assert_eq!(r.pair(r.rho(), k).unwrap(), 1);
                }
            }
            assert_eq!(simple_count, rank);
        }
    }

    #[test]
    fn pair_examples() {
        let a1 = rs(TypeLabel::A, 1);
        assert_eq!(a1.pair(a1.rho(), 0).unwrap(), 1);

        let a2 = rs(TypeLabel::A, 2);
        // Highest coroot of A2 is alpha_1^vee + alpha_2^vee.
        let theta = a2.highest_short_root();
        assert_eq!(a2.positive_coroots()[theta], vec![1, 1]);
        assert_eq!(a2.pair(a2.rho(), theta).unwrap(), 2);
    }

    #[test]
    fn dominance() {
        let a1 = rs(TypeLabel::A, 1);
        assert!(a1.is_dominant(&Weight(vec![0])));
        assert!(a1.is_dominant(a1.rho()));
        assert!(!a1.is_dominant(&Weight(vec![-1])));
    }

    #[test]
    fn sum_of_positive_roots_is_two_rho() {
        for (label, rank) in [
            (TypeLabel::A, 3),
            (TypeLabel::B, 3),
            (TypeLabel::C, 4),
            (TypeLabel::D, 4),
            (TypeLabel::G, 2),
            (TypeLabel::F, 4),
            (TypeLabel::E, 6),
        ] {
            let r = rs(label, rank);
            // Sum in weight coordinates must equal 2*rho.
            let mut total = vec![0i64; rank];
            for k in 0..r.positive_roots().len() {
                for (t, c) in total.iter_mut().zip(r.root_in_weight_coords(k)) {
                    *t += c;
                }
            }
            assert_eq!(total, vec![2i64; rank], "{label}{rank}");
        }
    }

    #[test]
    fn rejects_invalid_rank() {
        assert!(build_root_system(TypeLabel::G, 3).is_err());
        assert!(build_root_system(TypeLabel::F, 5).is_err());
        assert!(build_root_system(TypeLabel::D, 2).is_err());
        assert!(build_root_system(TypeLabel::E, 9).is_err());
        assert!(build_root_system(TypeLabel::B, 1).is_err());
    }

    #[test]
    fn cartan_matrix_is_valid() {
        for (label, rank) in [
            (TypeLabel::A, 4),
            (TypeLabel::B, 4),
            (TypeLabel::C, 4),
            (TypeLabel::D, 4),
            (TypeLabel::E, 8),
            (TypeLabel::F, 4),
            (TypeLabel::G, 2),
        ] {
            let r = rs(label, rank);
            let c = r.cartan();
            for (i, row) in c.iter().enumerate() {
                assert_eq!(row[i], 2);
                for j in 0..rank {
                    if i != j {
                        assert!(row[j] <= 0);
                        assert_eq!(row[j] == 0, c[j][i] == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn weight_parse_round_trip() {
        let w = Weight(vec![3, -1, 0]);
        assert_eq!(Weight::parse(&w.bracketed()), Some(w));
        assert_eq!(Weight::parse("[x]"), None);
        assert_eq!(Weight::parse("1,2"), None);
    }
}
