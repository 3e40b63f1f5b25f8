use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use phasetrop::coamoeba::{closure_membership, closure_via_limit_lps, phase_limit_pieces, SimpleCoA};
use phasetrop::exact::{lattice_index, IntMatrix, PhaseVec, Rat};
use phasetrop::laurent::{initial_form, tropical_reduction, CPoly, KPoly};
use phasetrop::nca::{
    build_pullback_model, build_trop_model, load_fixture_model, nca_membership, piece_dimensions, plane_line,
    ptrop_membership, TropModel,
};
use phasetrop::oracle::{full_window, grid_compare, render_svg, sample_complex, sample_kpoints};
use phasetrop::polyhedral::trop_complex;
use phasetrop::series::Section;
use phasetrop::{Error, Result};

/// Tropical reductions, coamoebae and phase tropical varieties.
#[derive(Parser)]
#[command(name = "phasetrop", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tropical hypersurface of a polynomial over the valued field.
    Trop { poly: PathBuf },
    /// Tropical reduction at a point.
    Reduce {
        poly: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
        w: Vec<Rat>,
        /// Section as JSON, e.g. {"kind":"twisted","generator":"1","alpha":{...}}.
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Initial form of a complex polynomial.
    Initial {
        cpoly: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
        w: Vec<Rat>,
    },
    /// Closed coamoeba of a simple variety given by its descriptor.
    Coamoeba {
        #[command(subcommand)]
        cmd: CoaCmd,
    },
    /// Non-archimedean coamoeba.
    Nca {
        #[command(subcommand)]
        cmd: NcaCmd,
    },
    /// Phase tropical variety.
    Ptrop {
        #[command(subcommand)]
        cmd: PtropCmd,
    },
    /// Index of the lattice spanned by the rows in its saturation.
    Nvol {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Built-in consistency checks.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SVG raster of a coamoeba over [-π, π]².
    Render {
        #[arg(long)]
        out: PathBuf,
        /// Descriptor JSON; without it a model is read (see --poly etc.),
        /// and without either the line 1 + x + y is drawn.
        #[arg(long)]
        desc: Option<PathBuf>,
        #[command(flatten)]
        model: OptModel,
        #[arg(long, default_value_t = 256)]
        res: usize,
        /// Phases fixing coordinates beyond the second.
        #[arg(long, value_parser = parse_phases, allow_hyphen_values = true)]
        slice: Option<PhaseVec>,
    },
}

#[derive(Subcommand)]
enum CoaCmd {
    Member {
        desc: PathBuf,
        #[arg(long, value_parser = parse_phases, allow_hyphen_values = true)]
        theta: PhaseVec,
    },
}

#[derive(Subcommand)]
enum NcaCmd {
    /// Builds a model and prints it as JSON.
    Build {
        #[command(flatten)]
        model: ModelArgs,
    },
    Member {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_phases, allow_hyphen_values = true)]
        theta: PhaseVec,
    },
}

#[derive(Subcommand)]
enum PtropCmd {
    Member {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
        w: Vec<Rat>,
        #[arg(long, value_parser = parse_phases, allow_hyphen_values = true)]
        theta: PhaseVec,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Polynomial JSON; with --pullback a JSON list of factor polynomials.
    input: PathBuf,
    /// Read `input` as a fixture (polynomials plus faces).
    #[arg(long, conflicts_with = "pullback")]
    fixture: bool,
    /// Character matrix of a monomial map, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pullback: Option<String>,
    #[arg(long)]
    section: Option<PathBuf>,
}

#[derive(Args)]
struct OptModel {
    #[arg(long = "poly")]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    fixture: bool,
    #[arg(long, requires = "input")]
    pullback: Option<String>,
    #[arg(long)]
    section: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Check {
    Prop6,
    Ridges,
    Samples,
    Kpoints,
}

fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    s.trim().parse::<Rat>().map_err(|e| e.to_string())
}

fn parse_phases(s: &str) -> std::result::Result<PhaseVec, String> {
    PhaseVec::parse_list(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn section(path: &Option<PathBuf>) -> Result<Section> {
    path.as_deref().map_or(Ok(Section::Canonical), read_json)
}

fn load_model(input: &Path, fixture: bool, pullback: Option<&str>, s: &Section) -> Result<TropModel> {
    if fixture {
        return load_fixture_model(&read(input)?, s);
    }
    if let Some(m) = pullback {
        let phi = IntMatrix::parse(m)?;
        let text = read(input)?;
        let factors: Vec<KPoly> = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(_) => vec![serde_json::from_str(&text)?],
        };
        return build_pullback_model(&phi, &factors, s);
    }
    build_trop_model(&read_json(input)?, s)
}

impl ModelArgs {
    fn load(&self) -> Result<TropModel> {
        load_model(&self.input, self.fixture, self.pullback.as_deref(), &section(&self.section)?)
    }
}

fn print<T: Serialize>(v: &T) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Membership {
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    face: Option<usize>,
}

fn membership(member: bool, face: Option<usize>) -> Result<ExitCode> {
    print(&Membership { member, face })?;
    Ok(if member { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Trop { poly } => {
            let f: KPoly = read_json(&poly)?;
            print(&trop_complex(&f)?)?;
        }
        Cmd::Reduce { poly, w, section: s } => {
            let f: KPoly = read_json(&poly)?;
            print(&tropical_reduction(&f, &w, &section(&s)?)?)?;
        }
        Cmd::Initial { cpoly, w } => {
            let g: CPoly = read_json(&cpoly)?;
            if w.len() != g.nvars() {
                return Err(Error::Dimension { expected: g.nvars(), got: w.len() });
            }
            print(&initial_form(&g, &w))?;
        }
        Cmd::Coamoeba { cmd: CoaCmd::Member { desc, theta } } => {
            let d: SimpleCoA = read_json(&desc)?;
            let d = SimpleCoA::new(d.rank, d.factors)?;
            if theta.len() != d.rank {
                return Err(Error::Dimension { expected: d.rank, got: theta.len() });
            }
            return membership(closure_membership(&d, &theta), None);
        }
        Cmd::Nca { cmd: NcaCmd::Build { model } } => {
            let m = model.load()?;
            #[derive(Serialize)]
            struct Out<'a> {
                model: &'a TropModel,
                dimensions: phasetrop::nca::PieceDimensions,
            }
            print(&Out { dimensions: piece_dimensions(&m), model: &m })?;
        }
        Cmd::Nca { cmd: NcaCmd::Member { model, theta } } => {
            let m = model.load()?;
            if theta.len() != m.rank {
                return Err(Error::Dimension { expected: m.rank, got: theta.len() });
            }
            let (b, face) = nca_membership(&m, &theta);
            return membership(b, face);
        }
        Cmd::Ptrop { cmd: PtropCmd::Member { model, w, theta } } => {
            let m = model.load()?;
            if theta.len() != m.rank || w.len() != m.rank {
                return Err(Error::Dimension { expected: m.rank, got: theta.len().max(w.len()) });
            }
            let face = phasetrop::polyhedral::face_locate(&m.complex, &w);
            return membership(ptrop_membership(&m, &w, &theta), face);
        }
        Cmd::Nvol { matrix } => {
            let m = IntMatrix::parse(&matrix)?;
            print(&lattice_index(&m.to_rows())?)?;
        }
        Cmd::Verify { check, res, count, seed } => return verify(check, res, count, seed),
        Cmd::Render { out, desc, model, res, slice } => {
            let slice = slice.unwrap_or_else(|| PhaseVec(Vec::new()));
            let svg = if let Some(d) = desc {
                let d: SimpleCoA = read_json(&d)?;
                check_slice(d.rank, &slice)?;
                render_svg(&|t| closure_membership(&d, t), res, &slice.0)
            } else if let Some(input) = &model.input {
                let m = load_model(input, model.fixture, model.pullback.as_deref(), &section(&model.section)?)?;
                check_slice(m.rank, &slice)?;
                render_svg(&|t| nca_membership(&m, t).0, res, &slice.0)
            } else {
                let d = SimpleCoA::standard_hyperplane(2);
                render_svg(&|t| closure_membership(&d, t), res, &[])
            };
            std::fs::write(&out, svg)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check_slice(rank: usize, slice: &PhaseVec) -> Result<()> {
    if rank < 2 || slice.len() + 2 != rank {
        return Err(Error::Dimension { expected: rank.saturating_sub(2), got: slice.len() });
    }
    Ok(())
}

fn verify(check: Check, res: usize, count: usize, seed: u64) -> Result<ExitCode> {
    let (lo, hi) = full_window();
    match check {
        Check::Prop6 => {
            let d = SimpleCoA::standard_hyperplane(2);
            let r = grid_compare(2, res, (&lo, &hi), |t| closure_membership(&d, t), |t| closure_via_limit_lps(&d, t), None);
            print(&r)?;
            Ok(verdict(r.mismatches == 0))
        }
        Check::Ridges => {
            let d = SimpleCoA::standard_hyperplane(3);
            let triangles: Vec<SimpleCoA> = phase_limit_pieces(&d)
                .into_iter()
                .filter(|p| p.faces.len() == 1 && p.faces[0].len() == 3)
                .map(|p| p.desc)
                .collect();
            let r = grid_compare(
                3,
                res,
                (&lo, &hi),
                |t| closure_membership(&d, t),
                |t| triangles.iter().any(|p| closure_membership(p, t)),
                None,
            );
            print(&r)?;
            Ok(verdict(r.mismatches == 0 && triangles.len() == 4))
        }
        Check::Samples => {
            let line = sample_complex(&SimpleCoA::standard_hyperplane(2), count, seed)?;
            let curve = SimpleCoA::single(IntMatrix::parse("2,1;1,2")?, PhaseVec::zeros(2))?;
            let curve = sample_complex(&curve, count, seed)?;
            let ok = line.passed() && curve.passed();
            print(&[line, curve])?;
            Ok(verdict(ok))
        }
        Check::Kpoints => {
            let r = sample_kpoints(&plane_line(), &Section::Canonical, count, seed, &Rat::from_int(4))?;
            let ok = r.passed();
            print(&r)?;
            Ok(verdict(ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Error::Json(e)) if e.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
