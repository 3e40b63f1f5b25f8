//! Integer matrices and lattice algebra.
//!
//! Everything here goes through a Smith normal form `U·M·V = D`, with `U` and
//! `V` unimodular. The row lattice of `M` has saturation spanned by the first
//! `rank` rows of `V⁻¹`; its integer kernel is spanned by the trailing columns
//! of `V`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::phase::{Phase, PhaseVec, PHASE_EPS};
use super::rat::{common_denominator, Rat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds from row vectors. All rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Parses rows separated by `;` with entries separated by `,`.
    pub fn parse(s: &str) -> Result<IntMatrix> {
        let rows = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix {s:?}")));
        }
        Ok(IntMatrix::from_rows(&rows, cols))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut r = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    r[(i, j)] += a * o[(k, j)];
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `M·θ` on the torus, exact for exact phases.
    pub fn act_on_phases(&self, theta: &PhaseVec) -> PhaseVec {
        assert_eq!(self.cols, theta.len());
        PhaseVec(
            (0..self.rows)
                .map(|i| {
                    let mut acc = Phase::zero();
                    for (j, &a) in self.row(i).iter().enumerate() {
                        if a != 0 {
                            acc = acc + theta[j].mul_int(a);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn vstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        IntMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Absolute determinant of a square matrix.
    pub fn abs_det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let s = smith_normal_form(self);
        if s.rank() < self.rows {
            0
        } else {
            s.divisors.iter().product()
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<IntMatrix, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(IntMatrix::from_rows(&rows, cols))
    }
}

/// Result of [`smith_normal_form`]: `u · m · v` is diagonal with `divisors`
/// on the diagonal (nonzero ones first, each dividing the next).
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub divisors: Vec<u64>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.divisors.iter().take_while(|&&d| d != 0).count()
    }
}

struct Work {
    rows: usize,
    cols: usize,
    m: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap(a, b);
        self.u.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in self.m.iter_mut().chain(self.v.iter_mut()) {
            r.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    // row_a += k·row_b
    fn add_row(&mut self, a: usize, b: usize, k: i128) {
        for j in 0..self.cols {
            let x = self.m[b][j];
            self.m[a][j] += k * x;
        }
        for j in 0..self.rows {
            let x = self.u[b][j];
            self.u[a][j] += k * x;
        }
    }

    // col_a += k·col_b; V ← V·E, V⁻¹ ← E⁻¹·V⁻¹ (row_b -= k·row_a)
    fn add_col(&mut self, a: usize, b: usize, k: i128) {
        for r in self.m.iter_mut().chain(self.v.iter_mut()) {
            let x = r[b];
            r[a] += k * x;
        }
        for j in 0..self.cols {
            let x = self.v_inv[a][j];
            self.v_inv[b][j] -= k * x;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for x in self.m[a].iter_mut().chain(self.u[a].iter_mut()) {
            *x = -*x;
        }
    }
}

fn to_i64_matrix(rows: usize, cols: usize, m: &[Vec<i128>]) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = i64::try_from(m[i][j]).expect("Smith transform entry overflows i64");
        }
    }
    out
}

fn identity128(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn smith_normal_form(mat: &IntMatrix) -> Smith {
    let (rows, cols) = (mat.rows, mat.cols);
    let mut w = Work {
        rows,
        cols,
        m: (0..rows).map(|i| mat.row(i).iter().map(|&x| x as i128).collect()).collect(),
        u: identity128(rows),
        v: identity128(cols),
        v_inv: identity128(cols),
    };
    let mut divisors = Vec::new();
    let diag = rows.min(cols);
    for t in 0..diag {
        // pivot: smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.m[i][j].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < w.m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if w.m[i][t] != 0 {
                    let q = w.m[i][t].div_euclid(w.m[t][t]);
                    w.add_row(i, t, -q);
                    if w.m[i][t] != 0 {
                        w.swap_rows(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if w.m[t][j] != 0 {
                    let q = w.m[t][j].div_euclid(w.m[t][t]);
                    w.add_col(j, t, -q);
                    if w.m[t][j] != 0 {
                        w.swap_cols(t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block
            let p = w.m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| w.m[i][j] % p != 0));
            match bad {
                Some(i) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.m[t][t] < 0 {
            w.negate_row(t);
        }
        divisors.push(w.m[t][t] as u64);
    }
    while divisors.len() < diag {
        divisors.push(0);
    }
    Smith {
        u: to_i64_matrix(rows, rows, &w.u),
        divisors,
        v: to_i64_matrix(cols, cols, &w.v),
        v_inv: to_i64_matrix(cols, cols, &w.v_inv),
    }
}

/// Index `[sat(A) : ℤA]` of the lattice spanned by independent vectors in
/// its saturation.
pub fn lattice_index(vectors: &[Vec<i64>]) -> Result<u64> {
    let Some(n) = vectors.first().map(Vec::len) else {
        return Ok(1);
    };
    let m = IntMatrix::from_rows(vectors, n);
    let s = smith_normal_form(&m);
    if s.rank() < vectors.len() {
        return Err(Error::NotIndependent(vectors.to_vec()));
    }
    Ok(s.divisors.iter().product())
}

/// Basis of the saturation of the integer span of `vectors` (length `n`).
pub fn span_lattice(vectors: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let s = smith_normal_form(&IntMatrix::from_rows(vectors, n));
    (0..s.rank()).map(|i| s.v_inv.row(i).to_vec()).collect()
}

/// Rational vectors: denominators are cleared row by row first.
pub fn span_lattice_rat(vectors: &[Vec<Rat>], n: usize) -> Vec<Vec<i64>> {
    let ints: Vec<Vec<i64>> = vectors.iter().map(|v| clear_denominators(v)).collect();
    span_lattice(&ints, n)
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (zero stays zero).
pub fn clear_denominators(v: &[Rat]) -> Vec<i64> {
    let l = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("vector entry overflows i64")
        })
        .collect()
}

/// Basis of the integer kernel `{x ∈ ℤⁿ : M·x = 0}`, saturated.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<i64>> {
    let s = smith_normal_form(m);
    let r = s.rank();
    (r..m.cols).map(|j| (0..m.cols).map(|i| s.v[(i, j)]).collect()).collect()
}

/// Whether `θ` lies in the subtorus `𝕌_{N'}` of `𝕌ⁿ`, where `N'` is spanned by
/// `basis`: solvability of `Bᵀφ ≡ θ (mod 1)`.
pub fn subtorus_contains(basis: &[Vec<i64>], theta: &PhaseVec) -> bool {
    let n = theta.len();
    if basis.is_empty() {
        return theta.0.iter().all(|p| p.approx_eq(&Phase::zero()));
    }
    let bt = IntMatrix::from_rows(basis, n).transpose();
    let s = smith_normal_form(&bt);
    let r = s.rank();
    // U·θ; rows r.. must vanish on the torus
    let u_theta = s.u.act_on_phases(theta);
    u_theta.0[r..].iter().all(|p| match p {
        Phase::Turns(t) => t.is_zero(),
        Phase::Radians(_) => p.distance(&Phase::zero()) <= PHASE_EPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(m: &IntMatrix) {
        let s = smith_normal_form(m);
        let d = s.u.mul(m).mul(&s.v);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let expect = if i == j && i < s.divisors.len() { s.divisors[i] as i64 } else { 0 };
                assert_eq!(d[(i, j)], expect, "{m:?} -> {d:?}");
            }
        }
        for w in s.divisors.windows(2) {
            if w[1] != 0 {
                assert!(w[0] != 0 && w[1] % w[0] == 0, "{:?}", s.divisors);
            }
        }
        assert_eq!(s.u.abs_det_unchecked(), 1);
        assert_eq!(s.v.abs_det_unchecked(), 1);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.ncols()));
    }

    impl IntMatrix {
        // Laplace expansion; only for tiny test matrices.
        fn abs_det_unchecked(&self) -> i64 {
            fn det(m: &[Vec<i64>]) -> i64 {
                let n = m.len();
                if n == 0 {
                    return 1;
                }
                (0..n)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = m[1..]
                            .iter()
                            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                            .collect();
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        sign * m[0][j] * det(&minor)
                    })
                    .sum()
            }
            det(&self.to_rows()).abs()
        }
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::identity(2)).divisors, vec![1, 1]);
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2);
        assert_eq!(smith_normal_form(&m).divisors, vec![1, 3]);
        let m = IntMatrix::from_rows(&[vec![2, 4]], 2);
        assert_eq!(smith_normal_form(&m).divisors, vec![2]);
        check_snf(&m);
    }

    #[test]
    fn lattice_index_examples() {
        assert_eq!(lattice_index(&[vec![2, 1], vec![1, 2]]).unwrap(), 3);
        assert_eq!(lattice_index(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap(), 1);
        assert_eq!(lattice_index(&[vec![2, 0], vec![0, 2]]).unwrap(), 4);
        assert!(matches!(lattice_index(&[vec![1, 2], vec![2, 4]]), Err(Error::NotIndependent(_))));
        // non-full rank: index inside the saturation, not in ℤ³
        assert_eq!(lattice_index(&[vec![2, 2, 0]]).unwrap(), 2);
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_lattice(&[vec![1, 1, 0]], 3).len(), 1);
        let b = span_lattice(&[vec![2, 2]], 2);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
        assert!(span_lattice(&[], 2).is_empty());
        let b = span_lattice_rat(&[vec![Rat::new(1, 2), Rat::new(1, 2)]], 2);
        assert_eq!(b[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn kernel_is_saturated() {
        let m = IntMatrix::from_rows(&[vec![2, -2, 0]], 3);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(m.mul_vec(v), vec![0]);
        }
        // (1,1,0) must be an integer combination of the basis
        assert_eq!(lattice_index(&k).unwrap(), 1);
    }

    #[test]
    fn subtorus_examples() {
        let b = vec![vec![1, 1]];
        assert!(subtorus_contains(&b, &PhaseVec::from_turns(&[(1, 3), (1, 3)])));
        assert!(!subtorus_contains(&b, &PhaseVec::from_turns(&[(1, 3), (0, 1)])));
        let full = vec![vec![1, 0], vec![0, 1]];
        assert!(subtorus_contains(&full, &PhaseVec::from_turns(&[(2, 7), (5, 11)])));
        // (2,0) spans the same real subtorus as (1,0) in 𝕌² only up to its image
        assert!(subtorus_contains(&[vec![2, 0]], &PhaseVec::from_turns(&[(1, 3), (0, 1)])));
    }

    // Brute-force [ℤ² : ℤA] by counting lattice points p with p·A⁻¹ ∈ [0,1)².
    fn coset_count(a: [[i64; 2]; 2]) -> u64 {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let bound = a.iter().flatten().map(|x| x.abs()).sum::<i64>() + 1;
        let mut count = 0;
        for x in -bound..=bound {
            for y in -bound..=bound {
                // λ = p·A⁻¹ = p·adj(A)/det
                let l0 = x * a[1][1] - y * a[1][0];
                let l1 = -x * a[0][1] + y * a[0][0];
                let inside = |l: i64| if det > 0 { 0 <= l && l < det } else { det < l && l <= 0 };
                if inside(l0) && inside(l1) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn lattice_index_matches_coset_enumeration() {
        let r = -3..=3i64;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        let det = a * d - b * c;
                        if det == 0 {
                            continue;
                        }
                        let idx = lattice_index(&[vec![a, b], vec![c, d]]).unwrap();
                        assert_eq!(idx, coset_count([[a, b], [c, d]]), "{a} {b} {c} {d}");
                        assert_eq!(idx, det.unsigned_abs());
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn snf_reconstructs(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-6i64..7, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            check_snf(&IntMatrix::from_rows(&data, cols));
        }

        #[test]
        fn subtorus_basis_invariant(p in -12i64..12, q in 1i64..12, k in -3i64..4) {
            // {(1,1,0),(0,1,1)} vs the unimodular change {(1,1,0),(k,k+1,1)}
            let b1 = vec![vec![1, 1, 0], vec![0, 1, 1]];
            let b2 = vec![vec![1, 1, 0], vec![k, k + 1, 1]];
            let theta = PhaseVec::from_turns(&[(p, q), (1, 5), (p + 1, q)]);
            prop_assert_eq!(subtorus_contains(&b1, &theta), subtorus_contains(&b2, &theta));
        }
    }
}
