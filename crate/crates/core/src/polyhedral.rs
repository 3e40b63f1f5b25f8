//! Rational polyhedra in H-representation and the tropical complexes dual to
//! regular subdivisions, built by enumerating candidate argmin sets and
//! deciding each with an exact LP.

use std::collections::BTreeSet;

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{clear_denominators, dot_int_rat, integer_kernel, IntMatrix, Rat};
use crate::laurent::{argmin_weighted, CPoly, Exponent, KPoly};
use crate::lp::{Lp, LpOutcome, Rel};

/// `{w : ⟨m,w⟩ = a for (m,a) ∈ eq, ⟨m,w⟩ ≥ a for (m,a) ∈ ineq}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Polyhedron {
    #[serde(skip)]
    n: usize,
    pub eq: Vec<(Vec<i64>, Rat)>,
    pub ineq: Vec<(Vec<i64>, Rat)>,
}

fn rat_vec(m: &[i64]) -> Vec<Rat> {
    m.iter().map(|&x| Rat::from_int(x)).collect()
}

// Scales (v, a) by a positive factor so that v is a primitive integer vector.
fn primitive(v: &[Rat], a: &Rat) -> (Vec<i64>, Rat) {
    let ints = clear_denominators(v);
    let k = v.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    let factor = &Rat::from_int(ints[k]) / &v[k];
    (ints, a * &factor)
}

// Reduced row echelon form of augmented rows [m | a]; returns rows and pivot
// columns. A row `0 = c` with c ≠ 0 makes the result `None`.
fn rref(rows: &[(Vec<Rat>, Rat)], n: usize) -> Option<(Vec<(Vec<Rat>, Rat)>, Vec<usize>)> {
    let mut m: Vec<(Vec<Rat>, Rat)> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i].0[c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r].0[c].recip();
        for x in m[r].0.iter_mut() {
            *x *= &inv;
        }
        m[r].1 *= &inv;
        let (prow, prhs) = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row.0[c].is_zero() {
                continue;
            }
            let f = row.0[c].clone();
            for (x, y) in row.0.iter_mut().zip(&prow) {
                *x -= &(&f * y);
            }
            row.1 -= &(&f * &prhs);
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|(_, a)| !a.is_zero()) {
        return None;
    }
    m.truncate(r);
    Some((m, pivots))
}

impl Polyhedron {
    pub fn new(n: usize, eq: Vec<(Vec<i64>, Rat)>, ineq: Vec<(Vec<i64>, Rat)>) -> Polyhedron {
        Polyhedron { n, eq, ineq }
    }

    pub fn whole_space(n: usize) -> Polyhedron {
        Polyhedron::new(n, Vec::new(), Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub(crate) fn set_ambient_dim(&mut self, n: usize) {
        self.n = n;
    }

    fn lp(&self, extra_slack: bool) -> Lp {
        let nv = self.n + usize::from(extra_slack);
        let mut lp = Lp::new_free(nv);
        for (m, a) in &self.eq {
            let mut c = rat_vec(m);
            if extra_slack {
                c.push(Rat::zero());
            }
            lp.add(c, Rel::Eq, a.clone());
        }
        for (m, a) in &self.ineq {
            let mut c = rat_vec(m);
            if extra_slack {
                c.push(-Rat::one());
            }
            lp.add(c, Rel::Ge, a.clone());
        }
        lp
    }

    /// A point satisfying every inequality strictly, if one exists.
    pub fn interior_point(&self) -> Option<Vec<Rat>> {
        let mut lp = self.lp(true);
        let mut cap = vec![Rat::zero(); self.n];
        cap.push(Rat::one());
        lp.add(cap.clone(), Rel::Le, Rat::one());
        match lp.maximize(&cap) {
            LpOutcome::Optimal { mut x, value } if value.is_positive() => {
                x.pop();
                Some(x)
            }
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lp(false).feasible_point().is_none()
    }

    pub fn contains(&self, w: &[Rat]) -> bool {
        self.eq.iter().all(|(m, a)| &dot_int_rat(m, w) == a)
            && self.ineq.iter().all(|(m, a)| &dot_int_rat(m, w) >= a)
    }

    /// Strict inequalities; meaningful for canonical representations, which
    /// carry no implicit equalities.
    pub fn in_relint(&self, w: &[Rat]) -> bool {
        self.eq.iter().all(|(m, a)| &dot_int_rat(m, w) == a)
            && self.ineq.iter().all(|(m, a)| &dot_int_rat(m, w) > a)
    }

    /// Minimum of `⟨m, w⟩` over the polyhedron; `None` when unbounded below.
    pub fn min_of(&self, m: &[i64]) -> Option<Rat> {
        match self.lp(false).minimize(&rat_vec(m)) {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Whether `other ⊆ self`.
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        let neg = |m: &[i64]| m.iter().map(|x| -x).collect::<Vec<i64>>();
        self.ineq.iter().all(|(m, a)| other.min_of(m).is_some_and(|v| &v >= a))
            && self.eq.iter().all(|(m, a)| {
                other.min_of(m).is_some_and(|v| &v == a)
                    && other.min_of(&neg(m)).is_some_and(|v| v == -a)
            })
    }

    /// Dimension of the affine hull, assuming a canonical representation.
    pub fn dim(&self) -> usize {
        let rows: Vec<Vec<i64>> = self.eq.iter().map(|(m, _)| m.clone()).collect();
        self.n - IntMatrix::from_rows(&rows, self.n).rank()
    }

    /// Saturated basis of the lattice of integer directions parallel to the
    /// affine hull.
    pub fn span_basis(&self) -> Vec<Vec<i64>> {
        if self.eq.is_empty() {
            return IntMatrix::identity(self.n).to_rows();
        }
        let rows: Vec<Vec<i64>> = self.eq.iter().map(|(m, _)| m.clone()).collect();
        integer_kernel(&IntMatrix::from_rows(&rows, self.n))
    }

    /// The recession cone `{v : ⟨m,v⟩ = 0, ⟨m,v⟩ ≥ 0}`.
    pub fn recession_cone(&self) -> Polyhedron {
        let z = |v: &Vec<(Vec<i64>, Rat)>| v.iter().map(|(m, _)| (m.clone(), Rat::zero())).collect();
        Polyhedron::new(self.n, z(&self.eq), z(&self.ineq)).canonical()
    }

    /// The cone `ℝ≥0·(P − w)` of directions into `P` from `w ∈ P`.
    pub fn tangent_cone(&self, w: &[Rat]) -> Polyhedron {
        let eq = self.eq.iter().map(|(m, _)| (m.clone(), Rat::zero())).collect();
        let ineq = self
            .ineq
            .iter()
            .filter(|(m, a)| &dot_int_rat(m, w) == a)
            .map(|(m, _)| (m.clone(), Rat::zero()))
            .collect();
        Polyhedron::new(self.n, eq, ineq).canonical()
    }

    /// Canonical H-representation: implicit equalities promoted, equalities
    /// in reduced echelon form, inequality normals reduced modulo the
    /// equalities, all normals primitive integer vectors, redundancies
    /// removed, everything sorted. Empty polyhedra become `0 = 1`.
    pub fn canonical(&self) -> Polyhedron {
        let n = self.n;
        let empty = || Polyhedron::new(n, vec![(vec![0; n], Rat::one())], Vec::new());
        if self.is_empty() {
            return empty();
        }
        let mut eq = self.eq.clone();
        let mut ineq = self.ineq.clone();
        if self.interior_point().is_none() {
            let mut keep = Vec::new();
            for (m, a) in &self.ineq {
                if self.min_of(&m.iter().map(|x| -x).collect::<Vec<_>>()).is_some_and(|v| v == -a) {
                    eq.push((m.clone(), a.clone()));
                } else {
                    keep.push((m.clone(), a.clone()));
                }
            }
            ineq = keep;
        }
        let rows: Vec<(Vec<Rat>, Rat)> = eq.iter().map(|(m, a)| (rat_vec(m), a.clone())).collect();
        let Some((ech, pivots)) = rref(&rows, n) else {
            return empty();
        };
        let mut out_eq: Vec<(Vec<i64>, Rat)> =
            ech.iter().map(|(v, a)| primitive(v, a)).collect();
        let mut reduced: Vec<(Vec<i64>, Rat)> = Vec::new();
        for (m, a) in &ineq {
            let mut v = rat_vec(m);
            let mut b = a.clone();
            for ((row, rhs), &p) in ech.iter().zip(&pivots) {
                if v[p].is_zero() {
                    continue;
                }
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &(&f * y);
                }
                b -= &(&f * rhs);
            }
            if v.iter().all(Rat::is_zero) {
                if b.is_positive() {
                    return empty();
                }
                continue;
            }
            reduced.push(primitive(&v, &b));
        }
        reduced.sort();
        // same normal: keep the tightest
        reduced.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                if later.1 > earlier.1 {
                    earlier.1 = later.1.clone();
                }
                true
            } else {
                false
            }
        });
        let mut i = 0;
        while i < reduced.len() {
            let mut others = reduced.clone();
            let (m, a) = others.remove(i);
            let p = Polyhedron::new(n, out_eq.clone(), others);
            if p.min_of(&m).is_some_and(|v| v >= a) {
                reduced.remove(i);
            } else {
                i += 1;
            }
        }
        out_eq.sort();
        Polyhedron::new(n, out_eq, reduced)
    }

    /// Random points of the relative interior, deterministic for a given
    /// generator state. Starts from an interior point and moves along random
    /// integer directions of the span, staying strictly inside.
    pub fn sample_relint<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<Rat>> {
        let Some(p) = self.interior_point() else {
            return Vec::new();
        };
        let basis = self.span_basis();
        let mut out = vec![p.clone()];
        while out.len() < count {
            if basis.is_empty() {
                out.push(p.clone());
                continue;
            }
            let mut d = vec![0i64; self.n];
            for b in &basis {
                let k: i64 = rng.gen_range(-3..=3);
                for (x, y) in d.iter_mut().zip(b) {
                    *x += k * y;
                }
            }
            // largest step t with p + t·d still inside
            let mut tmax: Option<Rat> = None;
            for (m, a) in &self.ineq {
                let rate = Rat::from_int(m.iter().zip(&d).map(|(x, y)| x * y).sum());
                if rate.is_negative() {
                    let t = &(&dot_int_rat(m, &p) - a) / &(-&rate);
                    tmax = Some(tmax.map_or(t.clone(), |u| Rat::min(u, t)));
                }
            }
            let cap = tmax.map_or_else(|| Rat::from_int(2), |t| Rat::min(t, Rat::from_int(2)));
            let num: i64 = rng.gen_range(1..16);
            let t = &cap * &Rat::new(num, 16);
            out.push(p.iter().zip(&d).map(|(x, &y)| x + &(&t * &Rat::from_int(y))).collect());
        }
        out
    }
}

/// A face of a tropical complex with its argmin data.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub poly: Polyhedron,
    /// Argmin exponent set on the relative interior, one per defining
    /// polynomial.
    pub e: Vec<Vec<Exponent>>,
    pub dim: usize,
    /// Basis of the saturated lattice parallel to the face.
    pub span: Vec<Vec<i64>>,
    /// A relative-interior point.
    pub point: Vec<Rat>,
}

impl Face {
    pub fn from_polyhedron(poly: Polyhedron, e: Vec<Vec<Exponent>>) -> Option<Face> {
        let poly = poly.canonical();
        let point = poly.interior_point()?;
        Some(Face { dim: poly.dim(), span: poly.span_basis(), poly, e, point })
    }

    pub fn is_vertex(&self) -> bool {
        self.dim == 0
    }

    /// For a one-dimensional face with a one-dimensional recession cone, the
    /// primitive direction pointing to infinity.
    pub fn ray_direction(&self) -> Option<Vec<i64>> {
        if self.dim != 1 {
            return None;
        }
        let rec = self.poly.recession_cone();
        if rec.dim() != 1 || rec.ineq.is_empty() {
            return None;
        }
        let v = self.span[0].clone();
        let inside = rec.contains(&rat_vec(&v));
        Some(if inside { v } else { v.iter().map(|x| -x).collect() })
    }

    // E(self) ⊇ E(other) in every component.
    fn e_contains(&self, other: &Face) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| b.iter().all(|m| a.contains(m)))
    }
}

/// A rational polyhedral complex with per-face argmin data.
#[derive(Clone, Debug, PartialEq)]
pub struct TropComplex {
    pub n: usize,
    pub faces: Vec<Face>,
    /// Pairs `(i, j)` with face `i` a proper face of face `j`.
    pub incidence: Vec<(usize, usize)>,
}

impl TropComplex {
    /// Builds the complex from faces, with incidence read off the argmin
    /// sets: a face lies in another exactly when its argmin sets are larger.
    pub fn from_faces(n: usize, mut faces: Vec<Face>) -> TropComplex {
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.poly.cmp(&b.poly)));
        let mut incidence = Vec::new();
        for (i, fi) in faces.iter().enumerate() {
            for (j, fj) in faces.iter().enumerate() {
                if i != j && fi.dim < fj.dim && fi.e_contains(fj) {
                    incidence.push((i, j));
                }
            }
        }
        TropComplex { n, faces, incidence }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn subfaces(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.incidence.iter().filter(move |&&(_, b)| b == j).map(|&(a, _)| a)
    }

    pub fn vertices(&self) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.is_vertex()).collect()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.dim).max()
    }

    /// Faces as a set of canonical polyhedra with their argmin sets, for
    /// structural comparison.
    pub fn cone_set(&self) -> BTreeSet<(Polyhedron, Vec<Vec<Exponent>>)> {
        self.faces.iter().map(|f| (f.poly.clone(), f.e.clone())).collect()
    }

    /// Connectivity of the support, via the face incidence graph.
    pub fn is_connected(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for &(a, b) in &self.incidence {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let r0 = find(&mut parent, 0);
        (0..self.faces.len()).all(|i| find(&mut parent, i) == r0)
    }
}

fn subsets_at_least_two<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let k = items.len();
    assert!(k < 24, "support too large for subset enumeration");
    (0u32..(1 << k))
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).map(|i| items[i].clone()).collect())
        .collect()
}

/// The locus where each polynomial attains its minimum exactly on the given
/// subset, as a closed polyhedron.
fn argmin_polyhedron(system: &[Vec<(Exponent, Rat)>], choice: &[Vec<usize>], n: usize) -> Polyhedron {
    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for (supp, idx) in system.iter().zip(choice) {
        let (m0, v0) = &supp[idx[0]];
        for &i in &idx[1..] {
            let (m, v) = &supp[i];
            // v + ⟨m,w⟩ = v0 + ⟨m0,w⟩
            let d: Vec<i64> = m.iter().zip(m0).map(|(a, b)| a - b).collect();
            eq.push((d, v0 - v));
        }
        for (j, (m, v)) in supp.iter().enumerate() {
            if idx.contains(&j) {
                continue;
            }
            // v + ⟨m,w⟩ ≥ v0 + ⟨m0,w⟩
            let d: Vec<i64> = m.iter().zip(m0).map(|(a, b)| a - b).collect();
            ineq.push((d, v0 - v));
        }
    }
    Polyhedron::new(n, eq, ineq)
}

/// Tropical complex of a system of polynomials given by exponents with
/// coefficient valuations: the common refinement of the dual complexes, with
/// one face per tuple of argmin sets whose locus is nonempty.
pub fn trop_complex_weighted(system: &[Vec<(Exponent, Rat)>], n: usize) -> Result<TropComplex> {
    if system.iter().any(|s| s.len() < 2) {
        return Err(Error::EmptyTropicalVariety);
    }
    let per_poly: Vec<Vec<Vec<usize>>> =
        system.iter().map(|s| subsets_at_least_two(&(0..s.len()).collect::<Vec<_>>())).collect();
    let mut faces = Vec::new();
    let mut choice: Vec<Vec<usize>> = Vec::with_capacity(system.len());
    enumerate(system, &per_poly, n, &mut choice, &mut faces);
    if faces.is_empty() {
        return Err(Error::EmptyTropicalVariety);
    }
    Ok(TropComplex::from_faces(n, faces))
}

fn enumerate(
    system: &[Vec<(Exponent, Rat)>],
    per_poly: &[Vec<Vec<usize>>],
    n: usize,
    choice: &mut Vec<Vec<usize>>,
    out: &mut Vec<Face>,
) {
    let k = choice.len();
    if k > 0 {
        // prune: a partial choice with empty strict locus has no extension
        let p = argmin_polyhedron(&system[..k], choice, n);
        if p.interior_point().is_none() {
            return;
        }
        if k == system.len() {
            let e = system
                .iter()
                .zip(choice.iter())
                .map(|(s, idx)| {
                    let mut ms: Vec<Exponent> = idx.iter().map(|&i| s[i].0.clone()).collect();
                    ms.sort();
                    ms
                })
                .collect();
            if let Some(f) = Face::from_polyhedron(p, e) {
                out.push(f);
            }
            return;
        }
    }
    for c in &per_poly[k] {
        choice.push(c.clone());
        enumerate(system, per_poly, n, choice, out);
        choice.pop();
    }
}

/// Tropical hypersurface of `f`.
pub fn trop_complex(f: &KPoly) -> Result<TropComplex> {
    trop_complex_weighted(&[f.weighted_support()], f.nvars())
}

/// Tropical hypersurface of a complex polynomial (all valuations zero): a fan.
pub fn trop_fan(g: &CPoly) -> Result<TropComplex> {
    trop_complex_weighted(&[zero_weighted(&g.support())], g.nvars())
}

/// Tropical variety of a system of complex polynomials.
pub fn trop_fan_system(gs: &[CPoly]) -> Result<TropComplex> {
    let n = gs.first().map_or(0, |g| g.nvars());
    let sys: Vec<Vec<(Exponent, Rat)>> = gs.iter().map(|g| zero_weighted(&g.support())).collect();
    trop_complex_weighted(&sys, n)
}

fn zero_weighted(ms: &[Exponent]) -> Vec<(Exponent, Rat)> {
    ms.iter().map(|m| (m.clone(), Rat::zero())).collect()
}

/// The codimension-≥1 skeleton of the normal fan of `conv(vertices)`, min
/// convention.
pub fn normal_fan_skeleton(vertices: &[Exponent]) -> Result<TropComplex> {
    let n = vertices.first().map_or(0, Vec::len);
    trop_complex_weighted(&[zero_weighted(vertices)], n)
}

/// Index of the face whose relative interior contains `w`.
pub fn face_locate(c: &TropComplex, w: &[Rat]) -> Option<usize> {
    c.faces.iter().position(|f| f.poly.in_relint(w))
}

/// Faces with no proper subface.
pub fn minimal_faces(c: &TropComplex) -> Vec<usize> {
    (0..c.faces.len()).filter(|&j| c.subfaces(j).next().is_none()).collect()
}

/// The fan of cones `ℝ≥0·(ρ − w)` over the faces `ρ` containing `w`.
pub fn local_fan(c: &TropComplex, w: &[Rat]) -> TropComplex {
    let faces = c
        .faces
        .iter()
        .filter(|f| f.poly.contains(w))
        .filter_map(|f| Face::from_polyhedron(f.poly.tangent_cone(w), f.e.clone()))
        .collect();
    TropComplex::from_faces(c.n, faces)
}

/// Argmin sets of each polynomial of a system at `w`.
pub fn argmin_tuple(system: &[Vec<(Exponent, Rat)>], w: &[Rat]) -> Vec<Vec<Exponent>> {
    system.iter().map(|s| argmin_weighted(s, w)).collect()
}

struct FaceRepr<'a>(&'a Face);

impl Serialize for FaceRepr<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = self.0;
        let mut st = s.serialize_struct("Face", 4)?;
        st.serialize_field("eq", &f.poly.eq)?;
        st.serialize_field("ineq", &f.poly.ineq)?;
        if f.e.len() == 1 {
            st.serialize_field("E", &f.e[0])?;
        } else {
            st.serialize_field("E", &f.e)?;
        }
        st.serialize_field("dim", &f.dim)?;
        st.end()
    }
}

impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FaceRepr(self).serialize(s)
    }
}

impl Serialize for TropComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TropComplex", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("faces", &self.faces)?;
        st.serialize_field("incidence", &self.incidence)?;
        st.end()
    }
}
