//! Command-line surface for the graph-polynomial toolkit.
//!
//! Exit codes: 0 success, 1 a verified identity failed, 2 parse/usage
//! error, 3 the two derivation routes disagreed, 4 precondition violation
//! (disconnected input, missing legs, invalid move).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use symforge_core::graph::{EdgeVar, FeynGraph, GraphError, WhitneyMove};
use symforge_core::graphfile::{self, GraphFileError};
use symforge_core::laplacian::{self, LaplacianError};
use symforge_core::matroid;
use symforge_core::poly::find_variable_isomorphism;
use symforge_core::random::{self, GraphGenConfig};
use symforge_core::{dodgson, forest, Poly};

const EXIT_IDENTITY_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_METHOD_DISAGREEMENT: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "symforge",
    version,
    about = "Graph polynomials of multi-loop diagrams: forest and determinant routes, identity suites, matroid comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute U, calU, F0, calF0 (and F when masses are present).
    Symanzik {
        /// Graph file.
        graph: PathBuf,
        /// Derivation route; `both` cross-checks the two routes.
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an identity suite and print one pass/fail line per instance.
    Verify {
        /// Graph file (ignored by the `random` suite).
        graph: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the cycle matroids and basis polynomials of two graphs.
    Matroid {
        graph1: PathBuf,
        graph2: PathBuf,
        /// Also print the base sets of both matroids.
        #[arg(long)]
        show_bases: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply a Whitney move and write the transformed graph file.
    Transform {
        graph: PathBuf,
        /// Twist about two vertices: `--twist U V --side E,E,...`.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        twist: Option<Vec<String>>,
        /// Edges whose attachments at U and V are swapped.
        #[arg(long, value_delimiter = ',')]
        side: Vec<String>,
        /// Identify two vertices from different components.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        identify: Option<Vec<String>>,
        /// Cleave a vertex: `--cleave W --part E,E,...`.
        #[arg(long, value_name = "W")]
        cleave: Option<String>,
        /// Incident edges that move to the fresh vertex copy.
        #[arg(long, value_delimiter = ',')]
        part: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Forest,
    Laplacian,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    MatrixTree,
    DeletionContraction,
    DodgsonU,
    DodgsonMixed,
    WExpansion,
    Reciprocal,
    Random,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<GraphFileError> for Failure {
    fn from(e: GraphFileError) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<LaplacianError> for Failure {
    fn from(e: LaplacianError) -> Self {
        Failure::new(EXIT_PRECONDITION, e.to_string())
    }
}

impl From<forest::ForestError> for Failure {
    fn from(e: forest::ForestError) -> Self {
        Failure::new(EXIT_PRECONDITION, e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::new(EXIT_PRECONDITION, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Symanzik {
            graph,
            method,
            output,
        } => {
            let g = graphfile::load(&graph)?;
            let report = cmd_symanzik(&g, method)?;
            emit(&report, output.as_deref())
        }
        Command::Verify {
            graph,
            suite,
            output,
        } => {
            let report = cmd_verify(graph.as_deref(), suite)?;
            emit(&report.text, output.as_deref())?;
            if report.failures > 0 {
                return Err(Failure::new(
                    EXIT_IDENTITY_FAILURE,
                    format!("{} of {} checks failed", report.failures, report.total),
                ));
            }
            Ok(())
        }
        Command::Matroid {
            graph1,
            graph2,
            show_bases,
            output,
        } => {
            let g1 = graphfile::load(&graph1)?;
            let g2 = graphfile::load(&graph2)?;
            let report = cmd_matroid(&g1, &g2, show_bases);
            emit(&report, output.as_deref())
        }
        Command::Transform {
            graph,
            twist,
            side,
            identify,
            cleave,
            part,
            output,
        } => {
            let g = graphfile::load(&graph)?;
            let mv = parse_move(twist, side, identify, cleave, part)?;
            let moved = g.apply_whitney_move(&mv)?;
            let text = graphfile::to_canonical_string(&moved)?;
            emit(&text, output.as_deref())
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::new(
                EXIT_PARSE,
                format!("cannot write `{}`: {e}", path.display()),
            )
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn feyn_vars(g: &FeynGraph) -> Vec<u32> {
    g.edges()
        .iter()
        .filter_map(|e| match e.var {
            EdgeVar::Feyn(i) => Some(i),
            EdgeVar::Leg(_) => None,
        })
        .collect()
}

struct PolySet {
    u: Poly,
    calu: Poly,
    f0: Poly,
    calf0: Poly,
}

fn forest_route(g: &FeynGraph) -> Result<PolySet, Failure> {
    Ok(PolySet {
        u: forest::first_symanzik_u(g),
        calu: forest::first_symanzik_calu(g)?,
        f0: forest::second_symanzik_f0(g)?,
        calf0: forest::second_symanzik_calf0(g)?,
    })
}

fn laplacian_route(g: &FeynGraph) -> Result<PolySet, Failure> {
    let vars = feyn_vars(g);
    let u: Poly = laplacian::laplacian_u(g)?;
    let calu = u
        .reciprocal_transform(&vars)
        .expect("determinant polynomial is multilinear");
    let f0: Poly = laplacian::f0_via_w(g)?;
    let calf0 = f0
        .reciprocal_transform(&vars)
        .expect("determinant polynomial is multilinear");
    Ok(PolySet { u, calu, f0, calf0 })
}

fn mass_term(g: &FeynGraph, calu: &Poly) -> Poly {
    let mut mass_sum = Poly::zero();
    for e in g.edges() {
        if let Some(m) = g.masses().get(&e.id) {
            mass_sum += &(Poly::from_atom(e.var.atom()) * Poly::mass(*m));
        }
    }
    calu.clone() * mass_sum
}

fn cmd_symanzik(g: &FeynGraph, method: Method) -> Result<String, Failure> {
    let set = match method {
        Method::Forest => forest_route(g)?,
        Method::Laplacian => laplacian_route(g)?,
        Method::Both => {
            let forest_set = forest_route(g)?;
            let laplacian_set = laplacian_route(g)?;
            for (name, a, b) in [
                ("U", &forest_set.u, &laplacian_set.u),
                ("calU", &forest_set.calu, &laplacian_set.calu),
                ("F0", &forest_set.f0, &laplacian_set.f0),
                ("calF0", &forest_set.calf0, &laplacian_set.calf0),
            ] {
                if a != b {
                    return Err(Failure::new(
                        EXIT_METHOD_DISAGREEMENT,
                        format!("forest and laplacian routes disagree on {name}"),
                    ));
                }
            }
            forest_set
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "graph: {}", g.name);
    let _ = writeln!(out, "U = {}", set.u);
    let _ = writeln!(out, "calU = {}", set.calu);
    let _ = writeln!(out, "F0 = {}", set.f0);
    let _ = writeln!(out, "calF0 = {}", set.calf0);
    if !g.masses().is_empty() {
        let f = &set.calf0 + &mass_term(g, &set.calu);
        let _ = writeln!(out, "F = {f}");
    }
    Ok(out)
}

struct VerifyReport {
    text: String,
    total: usize,
    failures: usize,
}

struct Lines {
    text: String,
    total: usize,
    failures: usize,
}

impl Lines {
    fn new() -> Self {
        Lines {
            text: String::new(),
            total: 0,
            failures: 0,
        }
    }

    fn check(&mut self, label: &str, ok: bool) {
        self.total += 1;
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(self.text, "{label}: {}", if ok { "pass" } else { "FAIL" });
    }

    fn note(&mut self, label: &str, text: &str) {
        let _ = writeln!(self.text, "{label}: {text}");
    }
}

fn cmd_verify(graph: Option<&Path>, suite: Suite) -> Result<VerifyReport, Failure> {
    let mut lines = Lines::new();
    match suite {
        Suite::Random => verify_random(&mut lines)?,
        _ => {
            let path = graph.ok_or_else(|| {
                Failure::new(EXIT_PARSE, "this suite requires a graph file argument")
            })?;
            let g = graphfile::load(path)?;
            match suite {
                Suite::MatrixTree => verify_matrix_tree(&g, &mut lines)?,
                Suite::DeletionContraction => verify_deletion_contraction(&g, &mut lines)?,
                Suite::DodgsonU => verify_dodgson_u(&g, &mut lines)?,
                Suite::DodgsonMixed => verify_dodgson_mixed(&g, &mut lines)?,
                Suite::WExpansion => verify_w_expansion(&g, &mut lines)?,
                Suite::Reciprocal => verify_reciprocal(&g, &mut lines)?,
                Suite::Random => unreachable!(),
            }
        }
    }
    let summary = if lines.failures == 0 {
        format!("all {} checks passed\n", lines.total)
    } else {
        format!("{} of {} checks FAILED\n", lines.failures, lines.total)
    };
    Ok(VerifyReport {
        text: lines.text + &summary,
        total: lines.total,
        failures: lines.failures,
    })
}

fn verify_matrix_tree(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected.into());
    }
    let u = forest::first_symanzik_u::<BigInt>(g);
    let lap = laplacian::build_laplacian::<BigInt>(g);
    for (i, v) in g.vertices().iter().enumerate() {
        let removed: BTreeSet<usize> = BTreeSet::from([i]);
        let det = laplacian::minor_det(&lap, &removed, &removed);
        lines.check(&format!("matrix-tree remove={v}"), det == u);
    }
    Ok(())
}

fn verify_deletion_contraction(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    if !g.is_connected() {
        return Err(forest::ForestError::Disconnected.into());
    }
    let regular = g.regular_edges();
    if regular.is_empty() {
        lines.note("deletion-contraction", "no regular edges, nothing to check");
        return Ok(());
    }
    for e in regular {
        let ok = forest::deletion_contraction_check(g, &e)?;
        lines.check(&format!("deletion-contraction edge={e}"), ok);
    }
    Ok(())
}

fn verify_dodgson_u(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    if !g.is_connected() {
        return Err(forest::ForestError::Disconnected.into());
    }
    let setups = dodgson::valid_setups(g);
    if setups.is_empty() {
        lines.note("dodgson-u", "no shared-vertex regular edge pairs");
        return Ok(());
    }
    for s in setups {
        let label = format!("dodgson-u pair=({},{})", s.ea, s.eb);
        match dodgson::dodgson_u_identity(&s) {
            Ok(report) => lines.check(&label, report.holds),
            Err(e) => return Err(Failure::new(EXIT_PRECONDITION, e.to_string())),
        }
    }
    Ok(())
}

fn verify_dodgson_mixed(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    if !g.is_connected() {
        return Err(forest::ForestError::Disconnected.into());
    }
    let setups = dodgson::valid_setups(g);
    if setups.is_empty() {
        lines.note("dodgson-mixed", "no shared-vertex regular edge pairs");
        return Ok(());
    }
    for s in setups {
        let label = format!("dodgson-mixed pair=({},{})", s.ea, s.eb);
        match dodgson::dodgson_mixed_identity(&s) {
            Ok(report) => lines.check(&label, report.holds),
            Err(dodgson::DodgsonError::DegenerateDelta1) => {
                lines.note(&label, "skip (delta1 = 0)");
            }
            Err(e) => return Err(Failure::new(EXIT_PRECONDITION, e.to_string())),
        }
    }
    Ok(())
}

fn verify_w_expansion(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    let report = laplacian::w_expansion_check(g)?;
    lines.check("w-expansion degree-0 part vanishes", report.w0_zero);
    lines.check("w-expansion degree-1 part is U * sum(z)", report.w1_matches);
    lines.check(
        "w-expansion degree-2 part reproduces F0",
        report.w2_matches_f0,
    );
    Ok(())
}

fn verify_reciprocal(g: &FeynGraph, lines: &mut Lines) -> Result<(), Failure> {
    let vars = feyn_vars(g);
    let u = forest::first_symanzik_u::<BigInt>(g);
    let calu = forest::first_symanzik_calu::<BigInt>(g)?;
    lines.check(
        "reciprocal calU = transform(U)",
        calu == u
            .reciprocal_transform(&vars)
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?,
    );
    let f0 = forest::second_symanzik_f0::<BigInt>(g)?;
    let calf0 = forest::second_symanzik_calf0::<BigInt>(g)?;
    lines.check(
        "reciprocal calF0 = transform(F0)",
        calf0
            == f0
                .reciprocal_transform(&vars)
                .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?,
    );
    Ok(())
}

fn verify_random(lines: &mut Lines) -> Result<(), Failure> {
    let seed = match std::env::var("SYMFORGE_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| Failure::new(EXIT_PARSE, "SYMFORGE_SEED must be an unsigned integer"))?,
        Err(_) => 20240,
    };
    let cfg = GraphGenConfig::default();
    let mut rng = random::rng_for_seed(seed);
    lines.note("random", &format!("seed {seed}, 25 graphs"));
    for k in 0..25 {
        let g = random::random_connected_graph(&mut rng, &cfg);
        let mut ok = laplacian::matrix_tree_check(&g)?;
        let vars = feyn_vars(&g);
        let u = forest::first_symanzik_u::<BigInt>(&g);
        ok &= forest::first_symanzik_calu::<BigInt>(&g)?
            == u.reciprocal_transform(&vars)
                .expect("tree polynomial is multilinear");
        for e in g.regular_edges() {
            ok &= forest::deletion_contraction_check(&g, &e)?;
        }
        if !g.legs().is_empty() {
            ok &= laplacian::w_expansion_check(&g)?.all_hold();
        }
        for s in dodgson::valid_setups(&g) {
            match dodgson::dodgson_u_identity(&s) {
                Ok(report) => ok &= report.holds,
                Err(e) => return Err(Failure::new(EXIT_PRECONDITION, e.to_string())),
            }
            if !g.legs().is_empty() {
                match dodgson::dodgson_mixed_identity(&s) {
                    Ok(report) => ok &= report.holds,
                    Err(dodgson::DodgsonError::DegenerateDelta1) => {}
                    Err(e) => return Err(Failure::new(EXIT_PRECONDITION, e.to_string())),
                }
            }
        }
        lines.check(
            &format!(
                "random graph {k} (n={}, r={})",
                g.edge_count(),
                g.vertex_count()
            ),
            ok,
        );
    }
    Ok(())
}

fn format_base(base: &BTreeSet<String>) -> String {
    let inner = base.iter().cloned().collect::<Vec<_>>().join(",");
    format!("{{{inner}}}")
}

fn cmd_matroid(g1: &FeynGraph, g2: &FeynGraph, show_bases: bool) -> String {
    let mut out = String::new();
    let s1 = g1.strip_isolated_vertices();
    let s2 = g2.strip_isolated_vertices();
    let m1 = matroid::cycle_matroid(&s1);
    let m2 = matroid::cycle_matroid(&s2);
    if !g1.legs().is_empty() || !g2.legs().is_empty() {
        let _ = writeln!(
            out,
            "note: matroids are built from internal edges only; legs are ignored"
        );
    }
    for (g, m) in [(g1, &m1), (g2, &m2)] {
        if !m.source_connected {
            let _ = writeln!(
                out,
                "note: {} is disconnected; bases are unions of per-component spanning trees",
                g.name
            );
        }
    }
    if show_bases {
        for (g, m) in [(g1, &m1), (g2, &m2)] {
            let bases = m
                .bases
                .iter()
                .map(format_base)
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "bases of {}: {}", g.name, bases);
        }
    }
    match matroid::matroid_isomorphic(&m1, &m2) {
        Some(bijection) => {
            let map = bijection
                .iter()
                .map(|(a, b)| format!("{a} -> {b}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "matroid bijection: {map}");
        }
        None => {
            let _ = writeln!(out, "matroid bijection: none");
        }
    }
    let u1: Poly = matroid::u_from_bases(&m1);
    let u2: Poly = matroid::u_from_bases(&m2);
    match find_variable_isomorphism(&u1, &u2) {
        Some(bijection) => {
            let map = bijection
                .iter()
                .map(|(a, b)| format!("x{a} -> x{b}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "U bijection: {map}");
        }
        None => {
            let _ = writeln!(out, "U bijection: none");
        }
    }
    out
}

fn parse_move(
    twist: Option<Vec<String>>,
    side: Vec<String>,
    identify: Option<Vec<String>>,
    cleave: Option<String>,
    part: Vec<String>,
) -> Result<WhitneyMove, Failure> {
    let selected = usize::from(twist.is_some())
        + usize::from(identify.is_some())
        + usize::from(cleave.is_some());
    if selected != 1 {
        return Err(Failure::new(
            EXIT_PARSE,
            "exactly one of --twist, --identify, --cleave is required",
        ));
    }
    if let Some(pair) = twist {
        if side.is_empty() {
            return Err(Failure::new(EXIT_PARSE, "--twist requires --side E,E,..."));
        }
        return Ok(WhitneyMove::Twist {
            u: pair[0].clone(),
            v: pair[1].clone(),
            side: side.into_iter().collect(),
        });
    }
    if !side.is_empty() {
        return Err(Failure::new(
            EXIT_PARSE,
            "--side is only valid with --twist",
        ));
    }
    if let Some(pair) = identify {
        if !part.is_empty() {
            return Err(Failure::new(
                EXIT_PARSE,
                "--part is only valid with --cleave",
            ));
        }
        return Ok(WhitneyMove::Identify {
            u: pair[0].clone(),
            v: pair[1].clone(),
        });
    }
    let w = cleave.expect("one flag is set");
    if part.is_empty() {
        return Err(Failure::new(EXIT_PARSE, "--cleave requires --part E,E,..."));
    }
    Ok(WhitneyMove::Cleave {
        w,
        part: part.into_iter().collect(),
    })
}
