//! Models of tropically simple varieties: a tropical complex with the
//! reduction and coamoeba descriptor of every face, and the membership
//! tests for non-archimedean coamoebae and phase tropical varieties built on
//! them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coamoeba::{closure_membership, coa_dimension, SimpleCoA};
use crate::error::{Error, Result};
use crate::exact::{subtorus_contains, IntMatrix, PhaseVec, Rat};
use crate::laurent::{check_simple_system, initial_form, tropical_reduction, CPoly, Exponent, KPoly, SimpleSystem};
use crate::polyhedral::{
    argmin_tuple, face_locate, minimal_faces, trop_complex_weighted, Face, Polyhedron, TropComplex,
};
use crate::series::{Section, Series};

/// Where a model's defining polynomials came from.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSource {
    Hypersurface(KPoly),
    /// `X = φ⁻¹(H_1 × … × H_k)`; the rows of `phi` are the images of the
    /// factor characters, factor by factor.
    Pullback { phi: IntMatrix, hyperplanes: Vec<KPoly> },
    Fixture,
}

/// A tropical complex together with per-face reductions and descriptors.
#[derive(Clone, Debug)]
pub struct TropModel {
    pub rank: usize,
    pub source: ModelSource,
    /// Defining polynomials in the ambient variables.
    pub polys: Vec<KPoly>,
    pub complex: TropComplex,
    pub reductions: Vec<SimpleSystem>,
    pub descriptors: Vec<SimpleCoA>,
    pub section: Section,
}

pub(crate) fn face_name(c: &TropComplex, i: usize) -> String {
    let f = &c.faces[i];
    let p: Vec<String> = f.point.iter().map(|x| x.to_string()).collect();
    format!("#{i} (dim {}, through ({}))", f.dim, p.join(","))
}

fn reductions_at(polys: &[KPoly], w: &[Rat], s: &Section) -> Result<Vec<CPoly>> {
    polys.iter().map(|f| tropical_reduction(f, w, s)).collect()
}

fn assemble(
    rank: usize,
    source: ModelSource,
    polys: Vec<KPoly>,
    complex: TropComplex,
    declared: Option<Vec<Vec<CPoly>>>,
    s: &Section,
) -> Result<TropModel> {
    let mut reductions = Vec::with_capacity(complex.faces.len());
    let mut descriptors = Vec::with_capacity(complex.faces.len());
    for (i, face) in complex.faces.iter().enumerate() {
        let red = match &declared {
            Some(d) => d[i].clone(),
            None => reductions_at(&polys, &face.point, s)?,
        };
        let sys = check_simple_system(&red).map_err(|e| match e {
            Error::NotSimple { dependent, .. } => {
                Error::NotSimple { face: face_name(&complex, i), dependent }
            }
            e => e,
        })?;
        descriptors.push(SimpleCoA::from_system(&sys));
        reductions.push(sys);
    }
    Ok(TropModel { rank, source, polys, complex, reductions, descriptors, section: s.clone() })
}

/// Model of the hypersurface `f = 0`.
pub fn build_trop_model(f: &KPoly, s: &Section) -> Result<TropModel> {
    let complex = trop_complex_weighted(&[f.weighted_support()], f.nvars())?;
    assemble(f.nvars(), ModelSource::Hypersurface(f.clone()), vec![f.clone()], complex, None, s)
}

/// Pulls back `g(u_1, …, u_k)` along `u_j ↦ x^{Φ_j}`.
pub fn pullback_poly(g: &KPoly, rows: &[Vec<i64>], rank: usize) -> KPoly {
    let mut out = KPoly::new(rank);
    for (m, c) in g.terms() {
        let mut e = vec![0i64; rank];
        for (mj, row) in m.iter().zip(rows) {
            for (x, r) in e.iter_mut().zip(row) {
                *x += mj * r;
            }
        }
        out.add_term(e, c.clone());
    }
    out
}

/// Model of `φ⁻¹(H_1 × … × H_k)`. Its complex is the preimage of the product
/// of the factor complexes, computed as the tropical variety of the pulled
/// back polynomials.
pub fn build_pullback_model(phi: &IntMatrix, hyperplanes: &[KPoly], s: &Section) -> Result<TropModel> {
    let rank = phi.ncols();
    let total: usize = hyperplanes.iter().map(KPoly::nvars).sum();
    if total != phi.nrows() {
        return Err(Error::Dimension { expected: phi.nrows(), got: total });
    }
    let r = phi.rank();
    if r < phi.nrows() {
        return Err(Error::NotSurjective { rank: r, rows: phi.nrows() });
    }
    let rows = phi.to_rows();
    let mut polys = Vec::with_capacity(hyperplanes.len());
    let mut off = 0;
    for h in hyperplanes {
        polys.push(pullback_poly(h, &rows[off..off + h.nvars()], rank));
        off += h.nvars();
    }
    let sys: Vec<Vec<(Exponent, Rat)>> = polys.iter().map(KPoly::weighted_support).collect();
    let complex = trop_complex_weighted(&sys, rank)?;
    let source = ModelSource::Pullback { phi: phi.clone(), hyperplanes: hyperplanes.to_vec() };
    assemble(rank, source, polys, complex, None, s)
}

/// Fixture format: defining polynomials and the faces of their tropical
/// variety, optionally with declared reductions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub rank: usize,
    pub polys: Vec<KPoly>,
    pub faces: Vec<FixtureFace>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureFace {
    #[serde(default)]
    pub eq: Vec<(Vec<i64>, Rat)>,
    #[serde(default)]
    pub ineq: Vec<(Vec<i64>, Rat)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reductions: Option<Vec<CPoly>>,
}

fn validation(c: &TropComplex, i: usize, property: impl Into<String>) -> Error {
    Error::Validation { face: face_name(c, i), property: property.into() }
}

/// Loads a user-supplied complex and validates it by sampling: initial-form
/// consistency at every vertex, constancy of the reductions on 5 relative
/// interior points per face, and simpleness of every face system.
pub fn load_fixture_model(json: &str, s: &Section) -> Result<TropModel> {
    let fx: Fixture = serde_json::from_str(json)?;
    let rank = fx.rank;
    for p in &fx.polys {
        if p.nvars() != rank {
            return Err(Error::Dimension { expected: rank, got: p.nvars() });
        }
    }
    let system: Vec<Vec<(Exponent, Rat)>> = fx.polys.iter().map(KPoly::weighted_support).collect();
    let mut faces = Vec::new();
    let mut declared = Vec::new();
    for (k, ff) in fx.faces.iter().enumerate() {
        let mut p = Polyhedron::new(rank, ff.eq.clone(), ff.ineq.clone());
        p.set_ambient_dim(rank);
        for (m, _) in p.eq.iter().chain(&p.ineq) {
            if m.len() != rank {
                return Err(Error::Dimension { expected: rank, got: m.len() });
            }
        }
        let Some(point) = p.canonical().interior_point() else {
            return Err(Error::Validation { face: format!("#{k} of the input"), property: "empty face".into() });
        };
        let e = argmin_tuple(&system, &point);
        if e.iter().any(|x| x.len() < 2) {
            return Err(Error::Validation {
                face: format!("#{k} of the input"),
                property: "face not contained in the tropical variety".into(),
            });
        }
        let face = Face::from_polyhedron(p, e).expect("nonempty");
        declared.push((face.poly.clone(), ff.reductions.clone()));
        faces.push(face);
    }
    let complex = TropComplex::from_faces(rank, faces);
    // from_faces sorts; realign declared reductions
    let mut red: Vec<Vec<CPoly>> = Vec::with_capacity(complex.faces.len());
    for (i, face) in complex.faces.iter().enumerate() {
        let (_, d) = declared.iter().find(|(p, _)| p == &face.poly).expect("face present");
        match d {
            Some(d) if d.len() != fx.polys.len() => {
                return Err(validation(&complex, i, "wrong number of declared reductions"));
            }
            Some(d) => red.push(d.clone()),
            None => red.push(reductions_at(&fx.polys, &face.point, s)?),
        }
    }

    // initial forms at vertices
    for (vi, v) in complex.faces.iter().enumerate() {
        if !v.is_vertex() {
            continue;
        }
        for (rho, face) in complex.faces.iter().enumerate() {
            if rho == vi || !face.poly.contains(&v.point) {
                continue;
            }
            let dir: Vec<Rat> = face.point.iter().zip(&v.point).map(|(a, b)| a - b).collect();
            for (k, (g_rho, g_v)) in red[rho].iter().zip(&red[vi]).enumerate() {
                if !initial_form(g_v, &dir).eq_up_to_scalar(g_rho) {
                    return Err(validation(
                        &complex,
                        rho,
                        format!("reduction {k} is not the initial form of the reduction at vertex {}", face_name(&complex, vi)),
                    ));
                }
            }
        }
    }

    // reductions constant on relative interiors
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (i, face) in complex.faces.iter().enumerate() {
        for w in face.poly.sample_relint(&mut rng, 5) {
            let here = reductions_at(&fx.polys, &w, s)?;
            let ok = here.iter().zip(&red[i]).all(|(a, b)| a.eq_up_to_scalar(b));
            if !ok {
                return Err(validation(&complex, i, "reduction not constant on the relative interior"));
            }
        }
    }

    assemble(rank, ModelSource::Fixture, fx.polys.clone(), complex, Some(red), s)
}

impl TropModel {
    /// Number of defining polynomials.
    pub fn codim(&self) -> usize {
        self.polys.len()
    }

    pub fn dim(&self) -> usize {
        self.rank - self.codim()
    }

    pub fn minimal_faces(&self) -> Vec<usize> {
        minimal_faces(&self.complex)
    }

    /// Recomputes reductions and descriptors on the same complex under
    /// another section.
    pub fn rebuild(&self, s: &Section) -> Result<TropModel> {
        assemble(self.rank, self.source.clone(), self.polys.clone(), self.complex.clone(), None, s)
    }
}

/// Membership in the non-archimedean coamoeba: the union of the closed
/// coamoebae of the reductions at minimal faces. Returns a witnessing
/// minimal face.
pub fn nca_membership(model: &TropModel, theta: &PhaseVec) -> (bool, Option<usize>) {
    for i in model.minimal_faces() {
        if closure_membership(&model.descriptors[i], theta) {
            return (true, Some(i));
        }
    }
    (false, None)
}

/// Membership of `(w, θ)` in the phase tropical variety.
pub fn ptrop_membership(model: &TropModel, w: &[Rat], theta: &PhaseVec) -> bool {
    match face_locate(&model.complex, w) {
        Some(i) => closure_membership(&model.descriptors[i], theta),
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacePieceDim {
    pub face: usize,
    pub face_dim: usize,
    pub coa_dim: usize,
    pub sum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcaPieceDim {
    pub face: usize,
    pub coa_dim: usize,
    /// Whether the piece has dimension `dim X + 1`; purely binomial
    /// reductions give `dim X` instead.
    pub is_dim_x_plus_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceDimensions {
    pub dim_x: usize,
    pub faces: Vec<FacePieceDim>,
    pub max_sum: usize,
    pub nca: Vec<NcaPieceDim>,
    pub max_nca: usize,
}

/// Dimensions of the pieces `σ × coA(X_σ)` of the phase tropical variety and
/// of the minimal-face pieces of the non-archimedean coamoeba.
pub fn piece_dimensions(model: &TropModel) -> PieceDimensions {
    let dim_x = model.dim();
    let faces: Vec<FacePieceDim> = model
        .complex
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let c = coa_dimension(&model.descriptors[i]);
            FacePieceDim { face: i, face_dim: f.dim, coa_dim: c, sum: f.dim + c }
        })
        .collect();
    let nca: Vec<NcaPieceDim> = model
        .minimal_faces()
        .into_iter()
        .map(|i| {
            let c = coa_dimension(&model.descriptors[i]);
            NcaPieceDim { face: i, coa_dim: c, is_dim_x_plus_one: c == dim_x + 1 }
        })
        .collect();
    PieceDimensions {
        dim_x,
        max_sum: faces.iter().map(|f| f.sum).max().unwrap_or(0),
        max_nca: nca.iter().map(|p| p.coa_dim).max().unwrap_or(0),
        faces,
        nca,
    }
}

/// Outcome of a change of section.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionChangeReport {
    /// `a_σ` for every minimal face `σ`.
    pub translations: Vec<(usize, PhaseVec)>,
    /// For minimal faces of positive dimension, whether `a_σ` computed at a
    /// second point agrees modulo the subtorus of `⟨σ⟩`.
    pub second_point_checks: Vec<(usize, bool)>,
    /// For every face `ρ`, whether the `a_σ` of its minimal faces lie in a
    /// single coset of the subtorus of `⟨ρ⟩`.
    pub coset_checks: Vec<(usize, bool)>,
    /// Whether the translated descriptors equal the ones recomputed directly
    /// under the new section.
    pub reconstruction_matches: bool,
}

impl SectionChangeReport {
    pub fn all_pass(&self) -> bool {
        self.reconstruction_matches
            && self.second_point_checks.iter().all(|c| c.1)
            && self.coset_checks.iter().all(|c| c.1)
    }
}

fn alpha_phases(alpha: &Section, w: &[Rat]) -> Result<PhaseVec> {
    w.iter().map(|x| alpha.alpha_at(x).map(|a| a.phase)).collect::<Result<Vec<_>>>().map(PhaseVec)
}

// A point of the minimal face where α is defined: the face point itself, or
// the origin when the face is a linear subspace through it.
fn anchor(face: &Face) -> Vec<Rat> {
    let origin = vec![Rat::zero(); face.point.len()];
    if face.dim > 0 && face.poly.contains(&origin) {
        origin
    } else {
        face.point.clone()
    }
}

/// Changes the section to `s_new`. Every descriptor is translated by the
/// `a_σ` of a minimal face below it.
pub fn apply_section_change(model: &TropModel, s_new: &Section) -> Result<(TropModel, SectionChangeReport)> {
    let alpha = s_new.relative_to(&model.section)?;
    let c = &model.complex;
    let mins = model.minimal_faces();
    let mut translations = Vec::new();
    let mut second_point_checks = Vec::new();
    for &i in &mins {
        let face = &c.faces[i];
        let w = anchor(face);
        let a = alpha_phases(&alpha, &w)?;
        if let (Some(b), Section::Twisted { generator, .. }) = (face.span.first(), &alpha) {
            let w2: Vec<Rat> = w.iter().zip(b).map(|(x, &y)| x + &generator.mul_int(y)).collect();
            let a2 = alpha_phases(&alpha, &w2)?;
            second_point_checks.push((i, subtorus_contains(&face.span, &a2.sub(&a))));
        }
        translations.push((i, a));
    }
    let a_of = |i: usize| &translations.iter().find(|(j, _)| *j == i).expect("minimal").1;
    let mut coset_checks = Vec::new();
    let mut descriptors = Vec::with_capacity(c.faces.len());
    for (rho, face) in c.faces.iter().enumerate() {
        let below: Vec<usize> = if mins.contains(&rho) {
            vec![rho]
        } else {
            mins.iter().copied().filter(|&m| c.incidence.contains(&(m, rho))).collect()
        };
        let base = a_of(below[0]);
        let ok = below[1..].iter().all(|&m| subtorus_contains(&face.span, &a_of(m).sub(base)));
        coset_checks.push((rho, ok));
        descriptors.push(model.descriptors[rho].translate(base));
    }
    let direct = model.rebuild(s_new)?;
    let reconstruction_matches =
        descriptors.iter().zip(&direct.descriptors).all(|(a, b)| a.same_phases(b));
    let mut out = direct;
    out.descriptors = descriptors;
    let report = SectionChangeReport { translations, second_point_checks, coset_checks, reconstruction_matches };
    Ok((out, report))
}

#[derive(Serialize)]
struct FaceData<'a> {
    face: &'a Face,
    reduction: &'a [CPoly],
    descriptor: &'a SimpleCoA,
}

impl Serialize for TropModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let faces: Vec<FaceData> = (0..self.complex.faces.len())
            .map(|i| FaceData {
                face: &self.complex.faces[i],
                reduction: &self.reductions[i].polys,
                descriptor: &self.descriptors[i],
            })
            .collect();
        let mut st = s.serialize_struct("TropModel", 5)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("section", &self.section)?;
        st.serialize_field("faces", &faces)?;
        st.serialize_field("incidence", &self.complex.incidence)?;
        st.serialize_field("minimal_faces", &self.minimal_faces())?;
        st.end()
    }
}

/// The plane line `x + y + t` used throughout the examples.
pub fn plane_line() -> KPoly {
    use crate::exact::PolarC;
    KPoly::new(2)
        .term(&[1, 0], Series::one())
        .term(&[0, 1], Series::one())
        .term(&[0, 0], Series::monomial(Rat::one(), PolarC::one()))
}

/// The space line fixture: `x + ζy + ζ²t = ix + z - (1+i) = 0`.
pub const SPACE_LINE_FIXTURE: &str = include_str!("../fixtures/space_line.json");
