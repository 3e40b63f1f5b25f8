//! Coamoebae of hyperplanes and simple varieties.
//!
//! The closed coamoeba of `1 + a_1x_1 + … + a_nx_n` is the complement of the
//! open zonotope `{θ : |θ_i - θ_j| < π, θ_0 = 0}` translated by the phases of
//! the `a_i`; simple varieties are pullbacks of products of these along
//! monomial maps.

use std::f64::consts::TAU;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{lattice_index, IntMatrix, Lift, Phase, PhaseVec, PolarC, Rat, PHASE_EPS};
use crate::laurent::{monic_reduced, CPoly, SimpleSystem};
use crate::lp::{Lp, Rel};
use crate::polyhedral::Polyhedron;

/// Relaxation used when a phase is a float.
pub const LP_EPS: f64 = 1e-9;
/// Lower bound replacing `r > 0` for float phases.
pub const LP_DELTA: f64 = 1e-7;

/// One factor `1 + Σ a_i y_i` pulled back along `y = x^A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoaFactor {
    #[serde(rename = "A")]
    pub a: IntMatrix,
    pub shift: PhaseVec,
    /// Full coefficients `a_i` when known; their phases are `shift`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<PolarC>>,
}

/// Closed coamoeba of a simple variety: `θ` is a member iff `A·θ + shift` lies
/// outside the open zonotope for every factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleCoA {
    pub rank: usize,
    pub factors: Vec<CoaFactor>,
}

impl CoaFactor {
    pub fn new(a: IntMatrix, shift: PhaseVec) -> CoaFactor {
        assert_eq!(a.nrows(), shift.len());
        CoaFactor { a, shift, coeffs: None }
    }

    pub fn len(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.a.nrows() == 0
    }

    /// `A·θ + shift`.
    pub fn image(&self, theta: &PhaseVec) -> PhaseVec {
        self.a.act_on_phases(theta).add(&self.shift)
    }

    fn coeff(&self, i: usize) -> PolarC {
        match &self.coeffs {
            Some(c) => c[i].clone(),
            None => PolarC::unit(self.shift[i].clone()),
        }
    }

    /// The monic polynomial `1 + Σ a_i x^{A_i}`.
    pub fn polynomial(&self) -> CPoly {
        let n = self.a.ncols();
        let mut p = CPoly::new(n).term(&vec![0; n], PolarC::one());
        for i in 0..self.len() {
            p.add_term(self.a.row(i).to_vec(), self.coeff(i));
        }
        p
    }
}

impl SimpleCoA {
    pub fn new(rank: usize, factors: Vec<CoaFactor>) -> Result<SimpleCoA> {
        for f in &factors {
            if f.a.ncols() != rank {
                return Err(Error::Dimension { expected: rank, got: f.a.ncols() });
            }
        }
        let d = SimpleCoA { rank, factors };
        let stacked = d.stacked();
        if stacked.rank() < stacked.nrows() {
            return Err(Error::NotIndependent(stacked.to_rows()));
        }
        Ok(d)
    }

    /// `1 + x_1 + … + x_n`.
    pub fn standard_hyperplane(n: usize) -> SimpleCoA {
        SimpleCoA { rank: n, factors: vec![CoaFactor::new(IntMatrix::identity(n), PhaseVec::zeros(n))] }
    }

    /// A single factor with the given matrix and shifts.
    pub fn single(a: IntMatrix, shift: PhaseVec) -> Result<SimpleCoA> {
        SimpleCoA::new(a.ncols(), vec![CoaFactor::new(a, shift)])
    }

    pub fn from_system(sys: &SimpleSystem) -> SimpleCoA {
        let factors = sys
            .factors
            .iter()
            .map(|m| CoaFactor { a: m.a.clone(), shift: m.shifts.clone(), coeffs: Some(m.coeffs.clone()) })
            .collect();
        SimpleCoA { rank: sys.nvars, factors }
    }

    pub fn stacked(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.factors.iter().flat_map(|f| f.a.to_rows()).collect();
        IntMatrix::from_rows(&rows, self.rank)
    }

    /// The descriptor of the translate `coA - δ`: every shift moves by `A·δ`.
    pub fn translate(&self, delta: &PhaseVec) -> SimpleCoA {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let shift = f.shift.add(&f.a.act_on_phases(delta));
                let coeffs = f.coeffs.as_ref().map(|cs| {
                    cs.iter().zip(&shift.0).map(|(c, p)| PolarC { phase: p.clone(), ..c.clone() }).collect()
                });
                CoaFactor { a: f.a.clone(), shift, coeffs }
            })
            .collect();
        SimpleCoA { rank: self.rank, factors }
    }

    /// Same matrices and shifts, ignoring moduli.
    pub fn same_phases(&self, o: &SimpleCoA) -> bool {
        self.rank == o.rank
            && self.factors.len() == o.factors.len()
            && self.factors.iter().zip(&o.factors).all(|(a, b)| a.a == b.a && a.shift == b.shift)
    }
}

fn turn_eps() -> f64 {
    PHASE_EPS / TAU
}

/// Open-zonotope test in the chart `θ_0 = 0`: every canonical lift lies
/// strictly inside `(-π, π)` and the lifts together with 0 span less than π.
/// Float coordinates use closed-set semantics: within tolerance of the
/// boundary counts as outside.
pub fn in_open_zonotope(theta: &PhaseVec) -> bool {
    let lifts: Vec<Lift> = theta.0.iter().map(Phase::lift_turns).collect();
    if theta.is_exact() {
        let half = Rat::new(1, 2);
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for l in &lifts {
            let Lift::Exact(x) = l else { unreachable!() };
            if x == &half {
                return false;
            }
            if x < &lo {
                lo = x.clone();
            }
            if x > &hi {
                hi = x.clone();
            }
        }
        &hi - &lo < half
    } else {
        let eps = turn_eps();
        let mut lo = 0f64;
        let mut hi = 0f64;
        for l in &lifts {
            let x = l.to_f64();
            if x >= 0.5 - eps || x <= -0.5 + eps {
                return false;
            }
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo < 0.5 - eps
    }
}

/// Membership in the closed coamoeba described by `desc`.
pub fn closure_membership(desc: &SimpleCoA, theta: &PhaseVec) -> bool {
    assert_eq!(theta.len(), desc.rank, "phase vector length");
    if let Some(b) = closure_membership_small(desc, theta) {
        return b;
    }
    desc.factors.iter().all(|f| !in_open_zonotope(&f.image(theta)))
}

// Numerator over the common denominator `den`, if everything fits in i64.
fn small_turns(p: &Phase) -> Option<(i64, i64)> {
    let t = p.exact_turns()?;
    Some((t.numer().to_i64()?, t.denom().to_i64()?))
}

// The same test in machine integers, for exact phases with small
// denominators.
fn closure_membership_small(desc: &SimpleCoA, theta: &PhaseVec) -> Option<bool> {
    const LIMIT: i128 = 1 << 40;
    let th: Vec<(i64, i64)> = theta.0.iter().map(small_turns).collect::<Option<_>>()?;
    let mut den: i128 = 1;
    let mut shifts = Vec::new();
    for f in &desc.factors {
        shifts.push(f.shift.0.iter().map(small_turns).collect::<Option<Vec<_>>>()?);
    }
    for &(_, d) in th.iter().chain(shifts.iter().flatten()) {
        den = num_integer::lcm(den, i128::from(d));
        if den > LIMIT {
            return None;
        }
    }
    let scaled = |(n, d): (i64, i64)| i128::from(n) * (den / i128::from(d));
    let th: Vec<i128> = th.into_iter().map(scaled).collect();
    for (f, sh) in desc.factors.iter().zip(&shifts) {
        let (mut lo, mut hi) = (0i128, 0i128);
        let mut inside = true;
        for (i, &s) in sh.iter().enumerate() {
            let mut v = scaled(s);
            for (j, t) in th.iter().enumerate() {
                v += i128::from(f.a[(i, j)]) * t;
            }
            let mut v = v.rem_euclid(den);
            if 2 * v == den {
                inside = false;
                break;
            }
            if 2 * v > den {
                v -= den;
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if inside && 2 * (hi - lo) < den {
            return Some(false);
        }
    }
    Some(true)
}

// A point on the boundary of the square [-1,1]², at arc length 8t from (1,0).
// The map t ↦ direction is a monotone circle map commuting with the
// antipodal map, so it preserves the sign of every 2×2 determinant.
fn square_point(t: &Rat) -> [Rat; 2] {
    let s = t.fract_pos().mul_int(8);
    let one = Rat::one();
    let seg = s.floor().to_i64().expect("small");
    let u = &s - &Rat::from_int(seg);
    match seg {
        0 => [one, u],
        1 | 2 => [&one - &(&s - &one), one],
        3 | 4 => [-&one, &one - &(&s - &Rat::from_int(3))],
        5 | 6 => [&(&s - &Rat::from_int(5)) - &one, -one],
        _ => [one.clone(), &(&s - &Rat::from_int(7)) - &one],
    }
}

// cos and sin: exact at quarter turns, otherwise rationalized floats.
fn unit_vector(p: &Phase) -> ([Rat; 2], bool) {
    if let Some(t) = p.exact_turns() {
        let q = t.mul_int(4);
        if q.is_integer() {
            let v = match q.to_i64().unwrap() {
                0 => [Rat::one(), Rat::zero()],
                1 => [Rat::zero(), Rat::one()],
                2 => [-Rat::one(), Rat::zero()],
                _ => [Rat::zero(), -Rat::one()],
            };
            return (v, true);
        }
    }
    let r = p.to_radians();
    let f = |x: f64| Rat::from_f64(x).expect("finite");
    ([f(r.cos()), f(r.sin())], false)
}

/// Whether `Σ r_j e^{iφ_j} = 0` has a solution with every `r_j > 0`.
///
/// Exact phases are decided exactly by an LP on square-boundary points with
/// the same cyclic order and antipodes; float phases by an ε-relaxed LP with
/// `r_j ≥ δ`.
pub fn positive_dependence(phases: &[Phase]) -> bool {
    let k = phases.len();
    if k < 2 {
        return false;
    }
    if phases.iter().all(Phase::is_exact) {
        // r_j = 1 + r'_j, r'_j ≥ 0:  Σ r'_j P_j = -Σ P_j
        let pts: Vec<[Rat; 2]> = phases.iter().map(|p| square_point(p.exact_turns().unwrap())).collect();
        let mut lp = Lp::new(k);
        for c in 0..2 {
            let row: Vec<Rat> = pts.iter().map(|p| p[c].clone()).collect();
            let rhs = -pts.iter().map(|p| p[c].clone()).sum::<Rat>();
            lp.add(row, Rel::Eq, rhs);
        }
        lp.feasible_point().is_some()
    } else {
        float_lp(phases).is_some_and(|(r, _)| r.iter().all(|x| *x >= LP_DELTA))
    }
}

// max s subject to r_0 = 1, r_j ≥ s, s ≤ 1, |Σ r_j u_j| ≤ ε (componentwise).
fn float_lp(phases: &[Phase]) -> Option<(Vec<f64>, bool)> {
    let k = phases.len();
    let vecs: Vec<([Rat; 2], bool)> = phases.iter().map(unit_vector).collect();
    let all_exact = vecs.iter().all(|v| v.1);
    let eps = Rat::from_f64(LP_EPS).unwrap();
    let mut lp = Lp::new(k + 1);
    lp.set_free(k, true);
    let mut fix = vec![Rat::zero(); k + 1];
    fix[0] = Rat::one();
    lp.add(fix, Rel::Eq, Rat::one());
    for c in 0..2 {
        let mut row: Vec<Rat> = vecs.iter().map(|v| v.0[c].clone()).collect();
        row.push(Rat::zero());
        if all_exact {
            lp.add(row, Rel::Eq, Rat::zero());
        } else {
            lp.add(row.clone(), Rel::Le, eps.clone());
            lp.add(row, Rel::Ge, -&eps);
        }
    }
    for j in 1..k {
        let mut row = vec![Rat::zero(); k + 1];
        row[j] = Rat::one();
        row[k] = -Rat::one();
        lp.add(row, Rel::Ge, Rat::zero());
    }
    let mut cap = vec![Rat::zero(); k + 1];
    cap[k] = Rat::one();
    lp.add(cap.clone(), Rel::Le, Rat::one());
    match lp.maximize(&cap) {
        crate::lp::LpOutcome::Optimal { x, .. } => {
            Some((x[..k].iter().map(Rat::to_f64).collect(), all_exact))
        }
        _ => None,
    }
}

/// Positive radii `r` with `1 + Σ r_i e^{i(θ_i + arg a_i)} = 0`, or `None`
/// when no such radii exist.
pub fn lp_witness(coeff_phases: &PhaseVec, theta: &PhaseVec) -> Option<Vec<f64>> {
    assert_eq!(coeff_phases.len(), theta.len());
    let mut phases = vec![Phase::zero()];
    phases.extend(theta.add(coeff_phases).0);
    if !positive_dependence(&phases) {
        return None;
    }
    let (r, _) = float_lp(&phases)?;
    Some(r[1..].to_vec())
}

/// One piece of the phase limit set: a nonzero cone of the tropical fan and
/// the coamoeba of the initial system on it.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitPiece {
    pub cone: Polyhedron,
    /// For each factor, the indices of the terms kept (0 is the constant
    /// term, `i` the `i`-th row).
    pub faces: Vec<Vec<usize>>,
    pub desc: SimpleCoA,
}

fn proper_faces(k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << k))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (0..k).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// The pieces of the phase limit set: for every tuple of faces (at least two
/// terms each, not all full) the initial system, monic-renormalized.
pub fn phase_limit_pieces(desc: &SimpleCoA) -> Vec<LimitPiece> {
    let n = desc.rank;
    let per_factor: Vec<(Vec<Vec<i64>>, Vec<PolarC>, Vec<Vec<usize>>)> = desc
        .factors
        .iter()
        .map(|f| {
            let mut pts = vec![vec![0; n]];
            pts.extend(f.a.to_rows());
            let mut cs = vec![PolarC::one()];
            cs.extend((0..f.len()).map(|i| f.coeff(i)));
            (pts, cs, proper_faces(f.len() + 1))
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_factor.len()];
    if per_factor.is_empty() {
        return out;
    }
    loop {
        let faces: Vec<Vec<usize>> =
            choice.iter().zip(&per_factor).map(|(&c, pf)| pf.2[c].clone()).collect();
        let all_full = faces.iter().zip(&per_factor).all(|(f, pf)| f.len() == pf.0.len());
        if !all_full {
            let mut eq = Vec::new();
            let mut ineq = Vec::new();
            let mut factors = Vec::new();
            for (face, (pts, cs, _)) in faces.iter().zip(&per_factor) {
                let p0 = &pts[face[0]];
                for (j, p) in pts.iter().enumerate() {
                    let d: Vec<i64> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
                    if face.contains(&j) {
                        eq.push((d, Rat::zero()));
                    } else {
                        ineq.push((d, Rat::zero()));
                    }
                }
                let mut g = CPoly::new(n);
                for &j in face {
                    g.add_term(pts[j].clone(), cs[j].clone());
                }
                let m = monic_reduced(&g).expect("at least two terms");
                factors.push(CoaFactor { a: m.a, shift: m.shifts, coeffs: Some(m.coeffs) });
            }
            out.push(LimitPiece {
                cone: Polyhedron::new(n, eq, ineq).canonical(),
                faces,
                desc: SimpleCoA { rank: n, factors },
            });
        }
        // next tuple
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < per_factor[i].2.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Membership via LPs on initial forms: the closure of the coamoeba is the
/// coamoeba together with the coamoebae of all nonzero initial systems, and
/// each of those is decided by [`positive_dependence`].
pub struct LimitLpTester {
    factors: Vec<(CoaFactor, Vec<LimitPiece>)>,
}

impl LimitLpTester {
    pub fn new(desc: &SimpleCoA) -> LimitLpTester {
        // The factors are independent, so the closure splits factor by
        // factor into single-hyperplane problems.
        let factors = desc
            .factors
            .iter()
            .map(|f| {
                let single = SimpleCoA { rank: desc.rank, factors: vec![f.clone()] };
                (f.clone(), phase_limit_pieces(&single))
            })
            .collect();
        LimitLpTester { factors }
    }

    pub fn contains(&self, theta: &PhaseVec) -> bool {
        let with_constant = |f: &CoaFactor| {
            let mut ph = vec![Phase::zero()];
            ph.extend(f.image(theta).0);
            positive_dependence(&ph)
        };
        self.factors
            .iter()
            .all(|(f, pieces)| with_constant(f) || pieces.iter().any(|p| with_constant(&p.desc.factors[0])))
    }
}

/// [`closure_membership`] recomputed as a union of LP-decided pieces.
pub fn closure_via_limit_lps(desc: &SimpleCoA, theta: &PhaseVec) -> bool {
    LimitLpTester::new(desc).contains(theta)
}

/// Number of connected components of the complement of the closed
/// coamoeba of a single-factor descriptor.
pub fn complement_component_count(desc: &SimpleCoA) -> Result<u64> {
    let [f] = desc.factors.as_slice() else {
        return Err(Error::Dimension { expected: 1, got: desc.factors.len() });
    };
    lattice_index(&f.a.to_rows())
}

/// Dimension of the closed coamoeba.
pub fn coa_dimension(desc: &SimpleCoA) -> usize {
    let used: usize = desc.factors.iter().map(|f| f.len()).sum();
    let own: usize = desc.factors.iter().map(|f| if f.len() >= 2 { f.len() } else { f.len() - 1 }).sum();
    own + (desc.rank - used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(t: &[(i64, i64)]) -> PhaseVec {
        PhaseVec::from_turns(t)
    }

    #[test]
    fn zonotope_examples() {
        assert!(in_open_zonotope(&tv(&[(0, 1), (0, 1)])));
        assert!(!in_open_zonotope(&tv(&[(1, 2), (0, 1)])));
        assert!(!in_open_zonotope(&tv(&[(1, 3), (-1, 3)])));
        assert!(in_open_zonotope(&tv(&[(1, 8), (-1, 8)])));
        // float near the boundary counts as on it
        assert!(!in_open_zonotope(&PhaseVec::from_radians(&[std::f64::consts::PI - 1e-12, 0.0])));
        assert!(in_open_zonotope(&PhaseVec::from_radians(&[0.5, -0.5])));
    }

    #[test]
    fn closure_examples() {
        let line = SimpleCoA::standard_hyperplane(2);
        assert!(closure_membership(&line, &tv(&[(1, 3), (-1, 3)])));
        assert!(!closure_membership(&line, &tv(&[(1, 8), (-1, 8)])));
        let curve = SimpleCoA::single(IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2), PhaseVec::zeros(2)).unwrap();
        assert!(!closure_membership(&curve, &tv(&[(1, 3), (1, 3)])));
    }

    #[test]
    fn witness_examples() {
        let z = PhaseVec::zeros(2);
        let r = lp_witness(&z, &tv(&[(1, 2), (0, 1)])).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12, "{r:?}");
        assert!(lp_witness(&z, &tv(&[(1, 8), (-1, 8)])).is_none());
        let closure_only = tv(&[(1, 2), (1, 4)]);
        assert!(lp_witness(&z, &closure_only).is_none());
        assert!(closure_membership(&SimpleCoA::standard_hyperplane(2), &closure_only));
        // third roots of unity, radii all equal
        let r = lp_witness(&z, &tv(&[(1, 3), (2, 3)])).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-6 && (r[1] - 1.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn square_points_keep_orientation() {
        for a in 0..48 {
            for b in 0..48 {
                let (ta, tb) = (Rat::new(a, 48), Rat::new(b, 48));
                let (p, q) = (square_point(&ta), square_point(&tb));
                let det = &(&p[0] * &q[1]) - &(&p[1] * &q[0]);
                let s = (((b - a) as f64) / 48.0 * TAU).sin();
                let expect = if s.abs() < 1e-12 { 0 } else if s > 0.0 { 1 } else { -1 };
                let got = if det.is_zero() { 0 } else if det.is_positive() { 1 } else { -1 };
                assert_eq!(got, expect, "{a} {b}");
            }
        }
    }

    #[test]
    fn limit_pieces() {
        let line = phase_limit_pieces(&SimpleCoA::standard_hyperplane(2));
        assert_eq!(line.len(), 3);
        assert!(line.iter().all(|p| p.cone.dim() == 1));
        let plane = phase_limit_pieces(&SimpleCoA::standard_hyperplane(3));
        let two = plane.iter().filter(|p| p.faces[0].len() == 2).count();
        let three = plane.iter().filter(|p| p.faces[0].len() == 3).count();
        assert_eq!((two, three), (6, 4));
        let binom = SimpleCoA::single(IntMatrix::from_rows(&[vec![1, -1]], 2), PhaseVec::zeros(1)).unwrap();
        assert!(phase_limit_pieces(&binom).is_empty());
    }

    #[test]
    fn limit_lp_examples() {
        let line = SimpleCoA::standard_hyperplane(2);
        assert!(closure_via_limit_lps(&line, &tv(&[(1, 3), (-1, 3)])));
        assert!(closure_via_limit_lps(&line, &tv(&[(1, 2), (1, 4)])));
        assert!(!closure_via_limit_lps(&line, &tv(&[(1, 8), (-1, 8)])));
    }

    #[test]
    fn grid_agreement_line() {
        let line = SimpleCoA::standard_hyperplane(2);
        let t = LimitLpTester::new(&line);
        let n = 24;
        for a in 0..n {
            for b in 0..n {
                let th = tv(&[(a, n), (b, n)]);
                assert_eq!(closure_membership(&line, &th), t.contains(&th), "{th:?}");
            }
        }
    }

    #[test]
    fn counts_and_dimensions() {
        let m = |rows: &[Vec<i64>]| SimpleCoA::single(IntMatrix::from_rows(rows, rows[0].len()), PhaseVec::zeros(rows.len())).unwrap();
        assert_eq!(complement_component_count(&SimpleCoA::standard_hyperplane(3)).unwrap(), 1);
        assert_eq!(complement_component_count(&m(&[vec![2, 1], vec![1, 2]])).unwrap(), 3);
        assert_eq!(complement_component_count(&m(&[vec![2, 0], vec![0, 2]])).unwrap(), 4);
        assert_eq!(coa_dimension(&SimpleCoA::standard_hyperplane(2)), 2);
        assert_eq!(coa_dimension(&m(&[vec![1, -1]])), 1);
        assert_eq!(coa_dimension(&m(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]])), 4);
    }

    #[test]
    fn translation_covariance() {
        let d = SimpleCoA::single(IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2), tv(&[(1, 4), (0, 1)])).unwrap();
        let delta = tv(&[(1, 12), (5, 12)]);
        let moved = d.translate(&delta);
        for a in 0..12 {
            for b in 0..12 {
                let th = tv(&[(a, 12), (b, 12)]);
                assert_eq!(closure_membership(&moved, &th), closure_membership(&d, &th.add(&delta)));
            }
        }
    }

    #[test]
    fn json_shape() {
        let src = r#"{"rank":3,"factors":[{"A":[[1,0,0],[0,1,0]],"shift":[{"turns":"0"},{"turns":"1/4"}]}]}"#;
        let d: SimpleCoA = serde_json::from_str(src).unwrap();
        assert_eq!(d.factors[0].shift, tv(&[(0, 1), (1, 4)]));
        assert_eq!(serde_json::to_string(&d).unwrap(), src);
    }

    proptest::proptest! {
        #[test]
        fn integer_path_matches_rational_path(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 2),
            shift in proptest::collection::vec((0i64..24, 1i64..25), 2),
            theta in proptest::collection::vec((-50i64..50, 1i64..60), 2),
        ) {
            let a = IntMatrix::from_rows(&rows, 2);
            proptest::prop_assume!(a.rank() == 2);
            let d = SimpleCoA::single(a, tv(&shift)).unwrap();
            let t = tv(&theta);
            let generic = d.factors.iter().all(|f| !in_open_zonotope(&f.image(&t)));
            proptest::prop_assert_eq!(closure_membership_small(&d, &t), Some(generic));
        }
    }
}
