//! Sampling oracles, grid comparisons and SVG rendering.
//!
//! Samplers construct points on the variety (free coordinates random, one
//! coordinate solved) and then ask the membership predicates about their
//! images. A failure therefore points at the predicate, not at sampling
//! noise.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coamoeba::{closure_membership, SimpleCoA};
use crate::error::{Error, Result};
use crate::exact::{smith_normal_form, IntMatrix, Lift, Phase, PhaseVec, PolarC, Rat};
use crate::laurent::KPoly;
use crate::nca::{build_trop_model, nca_membership, ptrop_membership, ModelSource, TropModel};
use crate::series::{arg_section, Section, Series};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleFailure {
    /// The sampled point.
    pub input: String,
    pub w: Option<Vec<Rat>>,
    pub theta: PhaseVec,
    /// The predicate that should have held.
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub count: usize,
    pub seed: u64,
    /// Degenerate draws that were discarded and redrawn.
    pub resampled: usize,
    /// Number of distinct root branches used when solving monomial maps.
    pub branches: usize,
    pub failures: Vec<SampleFailure>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// Independent stream per sample so results do not depend on scheduling.
fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

const MAX_RESAMPLE: usize = 64;

struct Drawn<T> {
    value: T,
    resampled: usize,
}

fn draw<T>(rng: &mut ChaCha8Rng, mut f: impl FnMut(&mut ChaCha8Rng) -> Option<T>) -> Result<Drawn<T>> {
    for resampled in 0..MAX_RESAMPLE {
        if let Some(value) = f(rng) {
            return Ok(Drawn { value, resampled });
        }
    }
    Err(Error::TruncationExhausted(format!("no usable sample after {MAX_RESAMPLE} draws")))
}

fn aggregate(seed: u64, count: usize, results: Vec<Result<(usize, Vec<i64>, Option<SampleFailure>)>>) -> Result<SampleReport> {
    let mut report = SampleReport { count, seed, resampled: 0, branches: 0, failures: Vec::new() };
    let mut branches = std::collections::BTreeSet::new();
    for r in results {
        let (resampled, branch, failure) = r?;
        report.resampled += resampled;
        branches.insert(branch);
        report.failures.extend(failure);
    }
    report.branches = branches.len();
    Ok(report)
}

// ---------------------------------------------------------------------------
// complex points

fn random_unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen_range(-2.0f64..2.0).exp();
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

// Solves `x^A = u` (A of full row rank) on a chosen branch; extra
// coordinates of the kernel torus are random.
fn solve_monomial_complex(a: &IntMatrix, u: &[Complex64], rng: &mut ChaCha8Rng) -> (Vec<Complex64>, Vec<i64>) {
    let s = smith_normal_form(a);
    let (m, n) = (a.nrows(), a.ncols());
    let logu: Vec<Complex64> = u.iter().map(|z| z.ln()).collect();
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut branch = Vec::new();
    for i in 0..n {
        if i < m {
            let d = s.divisors[i] as i64;
            let k = rng.gen_range(0..d);
            branch.push(k);
            let mut acc = Complex64::new(0.0, TAU * k as f64);
            for j in 0..m {
                acc += logu[j] * s.u[(i, j)] as f64;
            }
            z[i] = acc / d as f64;
        } else {
            z[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..TAU));
        }
    }
    let x = (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, zi) in z.iter().enumerate() {
                acc += zi * s.v[(j, i)] as f64;
            }
            acc.exp()
        })
        .collect();
    (x, branch)
}

/// Samples `count` points of the simple variety described by `desc` and
/// checks that their arguments lie in its closed coamoeba.
pub fn sample_complex(desc: &SimpleCoA, count: usize, seed: u64) -> Result<SampleReport> {
    let a = desc.stacked();
    if a.rank() < a.nrows() {
        return Err(Error::NotIndependent(a.to_rows()));
    }
    let coeffs: Vec<Vec<Complex64>> = desc
        .factors
        .iter()
        .map(|f| match &f.coeffs {
            Some(c) => c.iter().map(PolarC::to_complex).collect(),
            None => f.shift.0.iter().map(|p| Complex64::from_polar(1.0, p.to_radians())).collect(),
        })
        .collect();
    let polys: Vec<_> = desc.factors.iter().map(|f| f.polynomial()).collect();
    let results: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let d = draw(&mut rng, |rng| {
                let mut u = Vec::with_capacity(a.nrows());
                for c in &coeffs {
                    let n = c.len();
                    let mut acc = Complex64::new(1.0, 0.0);
                    for cj in &c[..n - 1] {
                        let uj = random_unit_complex(rng);
                        acc += cj * uj;
                        u.push(uj);
                    }
                    let last = -acc / c[n - 1];
                    if last.norm() < 1e-9 {
                        return None;
                    }
                    u.push(last);
                }
                Some(u)
            })?;
            let (x, branch) = solve_monomial_complex(&a, &d.value, &mut rng);
            let theta = PhaseVec(x.iter().map(|z| Phase::radians(z.arg())).collect());
            let input = format!("{x:?}");
            let residual_ok = polys.iter().all(|p| {
                let scale: f64 = p
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let mut t = c.to_complex();
                        for (xi, &e) in x.iter().zip(m) {
                            t *= xi.powi(e as i32);
                        }
                        t.norm()
                    })
                    .sum();
                p.eval(&x).norm() <= 1e-7 * scale
            });
            let failure = if !residual_ok {
                Some(SampleFailure { input, w: None, theta, expected: "point on the variety".into() })
            } else if !closure_membership(desc, &theta) {
                Some(SampleFailure { input, w: None, theta, expected: "closure_membership".into() })
            } else {
                None
            };
            Ok((d.resampled, branch, failure))
        })
        .collect();
    aggregate(seed, count, results)
}

// ---------------------------------------------------------------------------
// points over the valued field

const EXPONENT_MENU: [(i64, i64); 5] = [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1)];
const PHASE_MENU: [(i64, i64); 6] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 3), (2, 3)];

fn random_polar(rng: &mut ChaCha8Rng) -> PolarC {
    let (p, q) = PHASE_MENU[rng.gen_range(0..PHASE_MENU.len())];
    PolarC::new(Rat::from_int(rng.gen_range(1..=2)), Phase::turns_frac(p, q))
}

/// A random exact series with one or two terms; exponents are drawn from
/// `{0, 1/2, 1, 3/2, 2}` times `scale`.
pub fn random_series(rng: &mut ChaCha8Rng, scale: &Rat) -> Series {
    let pick = |rng: &mut ChaCha8Rng| {
        let (p, q) = EXPONENT_MENU[rng.gen_range(0..EXPONENT_MENU.len())];
        &Rat::new(p, q) * scale
    };
    let g = pick(rng);
    let mut s = Series::monomial(g.clone(), random_polar(rng));
    if rng.gen_bool(0.5) {
        let h = &g + &(&pick(rng) + &(scale * &Rat::new(1, 2)));
        s = s.add(&Series::monomial(h, random_polar(rng)));
    }
    s
}

fn solvable(f: &KPoly) -> Result<usize> {
    (0..f.nvars())
        .rev()
        .find(|&k| f.terms().keys().all(|m| m[k] == 0 || m[k] == 1) && f.terms().keys().any(|m| m[k] == 1))
        .ok_or_else(|| Error::Parse("no variable appears linearly".into()))
}

// A point of `f = 0` with every coordinate nonzero, or `None` on degenerate
// draws.
fn kpoint_on(f: &KPoly, k: usize, rng: &mut ChaCha8Rng, scale: &Rat, trunc: &Rat) -> Result<Option<Vec<Series>>> {
    let n = f.nvars();
    let mut a = KPoly::new(n);
    let mut b = KPoly::new(n);
    for (m, c) in f.terms() {
        let mut m0 = m.clone();
        m0[k] = 0;
        if m[k] == 0 {
            a.add_term(m0, c.clone());
        } else {
            b.add_term(m0, c.clone());
        }
    }
    let mut x: Vec<Series> = (0..n).map(|_| random_series(rng, scale)).collect();
    x[k] = Series::one();
    let av = a.eval(&x, trunc)?;
    let bv = b.eval(&x, trunc)?;
    if bv.is_zero() || av.is_zero() {
        return Ok(None);
    }
    let xk = match av.neg().div(&bv, trunc) {
        Ok(s) => s,
        Err(Error::TruncationExhausted(_) | Error::DivisionByZero) => return Ok(None),
        Err(e) => return Err(e),
    };
    if xk.is_zero() {
        return Ok(None);
    }
    x[k] = xk;
    Ok(Some(x))
}

// Solves `x^Φ = u` over the field: `y = u^U`, `s_i^{d_i} = y_i`, `x = s^{Vᵀ}`.
fn solve_monomial_series(
    phi: &IntMatrix,
    u: &[Series],
    rng: &mut ChaCha8Rng,
    scale: &Rat,
    trunc: &Rat,
) -> Result<(Vec<Series>, Vec<i64>)> {
    let s = smith_normal_form(phi);
    let (m, n) = (phi.nrows(), phi.ncols());
    let mut roots = Vec::with_capacity(n);
    let mut branch = Vec::new();
    for i in 0..n {
        if i < m {
            let mut y = Series::one();
            for (j, uj) in u.iter().enumerate() {
                let e = s.u[(i, j)];
                if e != 0 {
                    y = y.mul(&uj.pow(e, trunc)?);
                }
            }
            let d = s.divisors[i] as i64;
            let k = rng.gen_range(0..d);
            branch.push(k);
            roots.push(y.root(d, k, trunc)?);
        } else {
            roots.push(random_series(rng, scale));
        }
    }
    let mut x = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Series::one();
        for (i, r) in roots.iter().enumerate() {
            let e = s.v[(j, i)];
            if e != 0 {
                acc = acc.mul(&r.pow(e, trunc)?);
            }
        }
        x.push(acc);
    }
    Ok((x, branch))
}

/// Tropicalization and section argument of a point.
pub fn kpoint_image(x: &[Series], s: &Section) -> Result<(Vec<Rat>, PhaseVec)> {
    let w = x.iter().map(|c| c.valuation().ok_or(Error::DivisionByZero)).collect::<Result<Vec<_>>>()?;
    let theta = x.iter().map(|c| arg_section(c, s)).collect::<Result<Vec<_>>>()?;
    Ok((w, PhaseVec(theta)))
}

fn kpoint_failures(model: &TropModel, x: &[Series]) -> Result<Option<SampleFailure>> {
    let (w, theta) = kpoint_image(x, &model.section)?;
    let input = format!("{x:?}");
    let expected = if !ptrop_membership(model, &w, &theta) {
        "ptrop_membership"
    } else if !nca_membership(model, &theta).0 {
        "nca_membership"
    } else {
        return Ok(None);
    };
    Ok(Some(SampleFailure { input, w: Some(w), theta, expected: expected.into() }))
}

/// Samples points of a hypersurface over the valued field and checks them
/// against the phase tropical variety and the non-archimedean coamoeba.
pub fn sample_kpoints(f: &KPoly, s: &Section, count: usize, seed: u64, trunc: &Rat) -> Result<SampleReport> {
    let model = build_trop_model(f, s)?;
    // keep valuations in the group where the section is defined
    let scale = match s {
        Section::Canonical => Rat::one(),
        Section::Twisted { generator, .. } => generator.mul_int(2),
    };
    sample_model_kpoints(&model, count, seed, &scale, trunc)
}

/// As [`sample_kpoints`] for a hypersurface or pullback model. Exponents of
/// the random coordinates are scaled by `scale`.
pub fn sample_model_kpoints(model: &TropModel, count: usize, seed: u64, scale: &Rat, trunc: &Rat) -> Result<SampleReport> {
    enum Plan<'a> {
        Hyper(&'a KPoly, usize),
        Pull(&'a IntMatrix, Vec<(&'a KPoly, usize)>),
    }
    let plan = match &model.source {
        ModelSource::Hypersurface(f) => Plan::Hyper(f, solvable(f)?),
        ModelSource::Pullback { phi, hyperplanes } => {
            Plan::Pull(phi, hyperplanes.iter().map(|h| Ok((h, solvable(h)?))).collect::<Result<_>>()?)
        }
        ModelSource::Fixture => {
            return Err(Error::Parse("fixture models carry no sampling recipe".into()));
        }
    };
    let results: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let mut resampled = 0;
            loop {
                let attempt: Result<Option<(Vec<Series>, Vec<i64>)>> = (|| match &plan {
                    Plan::Hyper(f, k) => Ok(kpoint_on(f, *k, &mut rng, scale, trunc)?.map(|x| (x, vec![]))),
                    Plan::Pull(phi, hs) => {
                        let mut u = Vec::new();
                        for (h, k) in hs {
                            match kpoint_on(h, *k, &mut rng, scale, trunc)? {
                                Some(p) => u.extend(p),
                                None => return Ok(None),
                            }
                        }
                        let (x, b) = solve_monomial_series(phi, &u, &mut rng, scale, trunc)?;
                        Ok(Some((x, b)))
                    }
                })();
                match attempt {
                    Ok(Some((x, branch))) => match kpoint_failures(model, &x) {
                        Ok(f) => return Ok((resampled, branch, f)),
                        Err(Error::TruncationExhausted(_) | Error::DivisionByZero) => {}
                        Err(e) => return Err(e),
                    },
                    Ok(None) | Err(Error::TruncationExhausted(_)) => {}
                    Err(e) => return Err(e),
                }
                resampled += 1;
                if resampled >= MAX_RESAMPLE {
                    return Err(Error::TruncationExhausted(format!("sample {i}: no usable draw")));
                }
            }
        })
        .collect();
    aggregate(seed, count, results)
}

// ---------------------------------------------------------------------------
// grids

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridReport {
    pub resolution: usize,
    pub points: usize,
    pub mismatches: usize,
    /// The first few mismatching points, in turns.
    pub mismatch_points: Vec<Vec<String>>,
    pub boundary_excluded: usize,
}

const MISMATCH_CAP: usize = 20;

/// Axis coordinates of a uniform grid over `[lo, hi)` in turns, at cell
/// centers, so no coordinate falls on `0` or `1/2` when the window is the
/// full circle and `resolution` is even.
pub fn grid_axis(resolution: usize, lo: &Rat, hi: &Rat) -> Vec<Rat> {
    let width = hi - lo;
    (0..resolution)
        .map(|k| lo + &(&width * &Rat::new(2 * k as i64 + 1, 2 * resolution as i64)))
        .collect()
}

fn grid_point(axis: &[Rat], rank: usize, mut idx: usize) -> PhaseVec {
    let res = axis.len();
    let mut out = Vec::with_capacity(rank);
    for _ in 0..rank {
        out.push(Phase::turns(axis[idx % res].clone()));
        idx /= res;
    }
    PhaseVec(out)
}

/// Compares two predicates on the exact grid of `resolution^rank` cell
/// centers of `[lo, hi)^rank` (turns). Points for which `exclude` holds are
/// skipped.
pub fn grid_compare<A, B>(
    rank: usize,
    resolution: usize,
    window: (&Rat, &Rat),
    a: A,
    b: B,
    exclude: Option<&(dyn Fn(&PhaseVec) -> bool + Sync)>,
) -> GridReport
where
    A: Fn(&PhaseVec) -> bool + Sync,
    B: Fn(&PhaseVec) -> bool + Sync,
{
    let axis = grid_axis(resolution, window.0, window.1);
    let total = resolution.pow(rank as u32);
    let marks: Vec<u8> = (0..total)
        .into_par_iter()
        .map(|i| {
            let p = grid_point(&axis, rank, i);
            if exclude.is_some_and(|e| e(&p)) {
                2
            } else {
                u8::from(a(&p) != b(&p))
            }
        })
        .collect();
    let mut report = GridReport {
        resolution,
        points: total,
        mismatches: 0,
        mismatch_points: Vec::new(),
        boundary_excluded: 0,
    };
    for (i, m) in marks.iter().enumerate() {
        match m {
            1 => {
                report.mismatches += 1;
                if report.mismatch_points.len() < MISMATCH_CAP {
                    report.mismatch_points.push(grid_point(&axis, rank, i).0.iter().map(|p| p.to_string()).collect());
                }
            }
            2 => report.boundary_excluded += 1,
            _ => {}
        }
    }
    report
}

/// The full circle `[-1/2, 1/2)` in turns.
pub fn full_window() -> (Rat, Rat) {
    (Rat::new(-1, 2), Rat::new(1, 2))
}

/// Whether some factor image of `theta` is within `eps` turns of the
/// boundary of the zonotope: a lift near `±1/2`, or two lifts (or a lift and
/// 0) differing by nearly `1/2`.
pub fn near_boundary(desc: &SimpleCoA, theta: &PhaseVec, eps: f64) -> bool {
    desc.factors.iter().any(|f| {
        let mut l: Vec<f64> = f.image(theta).0.iter().map(|p| p.lift_turns().to_f64()).collect();
        l.push(0.0);
        let edge = |x: f64| (x.abs() - 0.5).abs() < eps;
        l.iter().any(|&x| edge(x)) || l.iter().enumerate().any(|(i, &x)| l[i + 1..].iter().any(|&y| edge(x - y)))
    })
}

/// Connected components of the complement of the closed coamoeba of a
/// single-factor descriptor, by union-find on the exact grid.
///
/// Two neighboring grid points are joined when the lifts of their images lie
/// in the same translate of the open zonotope; these translates are convex,
/// so joined points are connected in the complement.
pub fn complement_components_grid(desc: &SimpleCoA, resolution: usize) -> usize {
    assert_eq!(desc.factors.len(), 1, "single factor");
    let f = &desc.factors[0];
    let rank = desc.rank;
    let (lo, hi) = full_window();
    let axis = grid_axis(resolution, &lo, &hi);
    let step = Rat::new(1, resolution as i64);
    let total = resolution.pow(rank as u32);
    // image lifted to the reals, and the translate index
    let cell = |theta: &[Rat]| -> Option<Vec<Rat>> {
        let img: Vec<Rat> = (0..f.len())
            .map(|i| {
                let mut acc = f.shift[i].exact_turns().expect("exact shifts").clone();
                for (j, t) in theta.iter().enumerate() {
                    acc = &acc + &t.mul_int(f.a[(i, j)]);
                }
                acc
            })
            .collect();
        let phases = PhaseVec(img.iter().map(|x| Phase::turns(x.clone())).collect());
        if !crate::coamoeba::in_open_zonotope(&phases) {
            return None;
        }
        Some(
            img.iter()
                .zip(&phases.0)
                .map(|(x, p)| match p.lift_turns() {
                    Lift::Exact(l) => x - &l,
                    Lift::Float(_) => unreachable!(),
                })
                .collect(),
        )
    };
    let coords = |mut idx: usize| -> Vec<usize> {
        (0..rank)
            .map(|_| {
                let c = idx % resolution;
                idx /= resolution;
                c
            })
            .collect()
    };
    let labels: Vec<Option<Vec<Rat>>> = (0..total)
        .into_par_iter()
        .map(|i| cell(&coords(i).iter().map(|&c| axis[c].clone()).collect::<Vec<_>>()))
        .collect();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..total {
        let Some(k) = &labels[i] else { continue };
        let c = coords(i);
        for d in 0..rank {
            let mut theta: Vec<Rat> = c.iter().map(|&x| axis[x].clone()).collect();
            theta[d] = &theta[d] + &step;
            let Some(k2) = cell(&theta) else { continue };
            if &k2 != k {
                continue;
            }
            let mut c2 = c.clone();
            c2[d] = (c2[d] + 1) % resolution;
            let j = c2.iter().rev().fold(0, |acc, &x| acc * resolution + x);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    // Cells cut off near acute corners of a sheared zonotope stay a handful
    // at any resolution, while genuine components grow with the grid.
    let mut sizes = vec![0usize; total];
    for i in 0..total {
        if labels[i].is_some() {
            let r = find(&mut parent, i);
            sizes[r] += 1;
        }
    }
    let min_cells = resolution.pow(rank as u32 - 1);
    sizes.iter().filter(|&&n| n >= min_cells).count()
}

// ---------------------------------------------------------------------------
// rendering

/// Renders a membership predicate over the fundamental domain `[-π, π]²` as
/// an SVG raster. For rank 3 and up, `slice` fixes the remaining phases.
pub fn render_svg(pred: &(dyn Fn(&PhaseVec) -> bool + Sync), resolution: usize, slice: &[Phase]) -> String {
    let (lo, hi) = full_window();
    let axis = grid_axis(resolution, &lo, &hi);
    let rows: Vec<Vec<bool>> = (0..resolution)
        .into_par_iter()
        .map(|r| {
            // row 0 at the top, θ_2 = π
            let y = &axis[resolution - 1 - r];
            (0..resolution)
                .map(|c| {
                    let mut p = vec![Phase::turns(axis[c].clone()), Phase::turns(y.clone())];
                    p.extend(slice.iter().cloned());
                    pred(&PhaseVec(p))
                })
                .collect()
        })
        .collect();
    let n = resolution;
    let m = (n / 8).max(4);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}" shape-rendering="crispEdges">"#,
        -(m as i64),
        -(m as i64),
        n + 2 * m,
        n + 2 * m,
        2 * (n + 2 * m),
        2 * (n + 2 * m)
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{n}" height="{n}" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<g fill="#4a6fa5">"##);
    for (r, row) in rows.iter().enumerate() {
        let mut c = 0;
        while c < n {
            if row[c] {
                let start = c;
                while c < n && row[c] {
                    c += 1;
                }
                let _ = writeln!(s, r#"<rect x="{start}" y="{r}" width="{}" height="1"/>"#, c - start);
            } else {
                c += 1;
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let h = n / 2;
    let _ = writeln!(s, r##"<g stroke="#000000" stroke-width="{}" fill="none">"##, (n as f64 / 256.0).max(0.25));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{n}" height="{n}"/>"#);
    let _ = writeln!(s, r#"<line x1="{h}" y1="0" x2="{h}" y2="{n}"/>"#);
    let _ = writeln!(s, r#"<line x1="0" y1="{h}" x2="{n}" y2="{h}"/>"#);
    let _ = writeln!(s, "</g>");
    let fs = m as f64 * 0.6;
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="{fs}" text-anchor="middle">"#);
    for (x, label) in [(0, "-π"), (h, "0"), (n, "π")] {
        let _ = writeln!(s, r#"<text x="{x}" y="{}">{label}</text>"#, n as f64 + fs);
    }
    for (y, label) in [(n, "-π"), (h, "0"), (0, "π")] {
        let _ = writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, -(m as f64) / 2.0, y as f64 + fs / 3.0);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coamoeba::CoaFactor;
    use crate::nca::{build_pullback_model, plane_line};

    fn curve() -> SimpleCoA {
        SimpleCoA::single(IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2), PhaseVec::zeros(2)).unwrap()
    }

    #[test]
    fn complex_sampling() {
        let r = sample_complex(&SimpleCoA::standard_hyperplane(2), 2000, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        let r = sample_complex(&curve(), 2000, 7).unwrap();
        assert!(r.passed());
        assert_eq!(r.branches, 3);
        let again = sample_complex(&curve(), 2000, 7).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn corrupted_shift_is_caught() {
        // coefficients of 1 + x + y, shifts claiming 1 + ix + y
        let mut f = CoaFactor::new(IntMatrix::identity(2), PhaseVec::from_turns(&[(1, 4), (0, 1)]));
        f.coeffs = Some(vec![PolarC::one(), PolarC::one()]);
        let wrong = SimpleCoA::new(2, vec![f]).unwrap();
        let r = sample_complex(&wrong, 500, 1).unwrap();
        assert!(!r.failures.is_empty());
        assert!(r.failures.iter().all(|f| f.expected == "closure_membership"));
    }

    #[test]
    fn kpoints_on_the_plane_line() {
        let r = sample_kpoints(&plane_line(), &Section::Canonical, 1000, 3, &Rat::from_int(4)).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        let tw = Section::twisted(Rat::one(), PolarC::root_of_unity(1, 4));
        let r = sample_kpoints(&plane_line(), &tw, 500, 3, &Rat::from_int(4)).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
    }

    #[test]
    fn kpoint_image_of_cube_roots() {
        let x = vec![
            Series::monomial(Rat::one(), PolarC::root_of_unity(1, 3)),
            Series::monomial(Rat::one(), PolarC::root_of_unity(2, 3)),
        ];
        let (w, th) = kpoint_image(&x, &Section::Canonical).unwrap();
        assert_eq!(w, vec![Rat::one(), Rat::one()]);
        assert_eq!(th, PhaseVec::from_turns(&[(1, 3), (2, 3)]));
        let m = build_trop_model(&plane_line(), &Section::Canonical).unwrap();
        assert!(ptrop_membership(&m, &w, &th));
    }

    #[test]
    fn kpoints_on_a_pullback() {
        let h = KPoly::new(2)
            .term(&[0, 0], Series::one())
            .term(&[1, 0], Series::one())
            .term(&[0, 1], Series::one());
        let phi = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2);
        let m = build_pullback_model(&phi, &[h], &Section::Canonical).unwrap();
        let r = sample_model_kpoints(&m, 500, 11, &Rat::one(), &Rat::from_int(4)).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.branches, 3);
    }

    #[test]
    fn grids() {
        let d = SimpleCoA::standard_hyperplane(2);
        let (lo, hi) = full_window();
        let same = grid_compare(2, 32, (&lo, &hi), |t| closure_membership(&d, t), |t| closure_membership(&d, t), None);
        assert_eq!(same.mismatches, 0);
        let neg = grid_compare(2, 32, (&lo, &hi), |t| closure_membership(&d, t), |t| !closure_membership(&d, t), None);
        assert_eq!(neg.mismatches, 32 * 32);
        assert_eq!(neg.mismatch_points.len(), MISMATCH_CAP);
    }

    #[test]
    fn flood_fill_components() {
        assert_eq!(complement_components_grid(&SimpleCoA::standard_hyperplane(2), 32), 1);
        assert_eq!(complement_components_grid(&curve(), 64), 3);
        // sheared unimodular map: one component despite acute corners
        let sheared = SimpleCoA::single(IntMatrix::from_rows(&[vec![1, 1], vec![2, 3]], 2), PhaseVec::zeros(2)).unwrap();
        assert_eq!(complement_components_grid(&sheared, 64), 1);
    }

    #[test]
    fn svg_is_deterministic() {
        let d = SimpleCoA::standard_hyperplane(2);
        let a = render_svg(&|t| closure_membership(&d, t), 16, &[]);
        let b = render_svg(&|t| closure_membership(&d, t), 16, &[]);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("π"));
    }
}
