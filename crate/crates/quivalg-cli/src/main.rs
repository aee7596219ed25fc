use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use quivalg::equivalence::{
    connection_from_bimodule, p_connection, roundtrip_algebra, roundtrip_connection,
};
use quivalg::gen::GenConfig;
use quivalg::io::{self, FileRef, IoError, LoadedInstance};
use quivalg::linalg::Field;
use quivalg::suite::{run_axiom_suite, SuiteConfig};

mod report;
use report::Report;

/// Exact computations with bound quivers, quiver connections, basic algebras
/// and their bimodules: validation, bound-quiver presentations, functor
/// images, round trips, and randomized law checking.
#[derive(Parser)]
#[command(name = "quivalg", version)]
struct Cli {
    /// Coefficient field: "q" for the rationals, "gf<p>" for a prime field.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance file of any kind.
    Validate { file: PathBuf },
    /// Compute the bound-quiver presentation of an algebra file and write it.
    Present {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the functor to a connection file, writing the bimodule image
    /// (plus the two algebra files it references).
    Functor {
        connection: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the round trip matching the file kind and report the witness.
    Roundtrip { file: PathBuf },
    /// Run the randomized axiom suites (deterministic per seed).
    CheckAxioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        #[arg(long, default_value_t = 3)]
        max_gamma_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_nilpotency: usize,
        /// Force instances to run sequentially.
        #[arg(long)]
        sequential: bool,
        #[arg(long, hide = true)]
        inject_violation: bool,
    },
}

fn parse_field(spec: &str) -> Result<Field, String> {
    let s = spec.trim().to_lowercase();
    if s == "q" {
        return Ok(Field::Rational);
    }
    let digits = s
        .strip_prefix("gf")
        .map(|rest| rest.trim_start_matches([':', ' ', '=']))
        .ok_or_else(|| format!("unknown field {spec:?} (expected \"q\" or \"gf<p>\")"))?;
    let p: u64 = digits
        .parse()
        .map_err(|_| format!("cannot parse prime in field spec {spec:?}"))?;
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(format!("{p} is not prime"));
    }
    Ok(Field::Prime(p))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match parse_field(&cli.field) {
        Ok(f) => f,
        Err(message) => {
            let report = Report::error("field", serde_json::json!({ "message": message }), 0);
            report.print(cli.json);
            return ExitCode::from(2);
        }
    };
    let report = match &cli.command {
        Command::Validate { file } => cmd_validate(file, field),
        Command::Present { file, out } => cmd_present(file, out, field),
        Command::Functor { connection, out } => cmd_functor(connection, out, field),
        Command::Roundtrip { file } => cmd_roundtrip(file, field),
        Command::CheckAxioms {
            seed,
            count,
            max_vertices,
            max_edges,
            max_gamma_dim,
            max_nilpotency,
            sequential,
            inject_violation,
        } => cmd_check_axioms(
            field,
            *seed,
            *count,
            *max_vertices,
            *max_edges,
            *max_gamma_dim,
            *max_nilpotency,
            *sequential,
            *inject_violation,
        ),
    };
    report.print(cli.json);
    ExitCode::from(report.exit_code())
}

fn io_report(command: &str, err: &IoError, started: Instant) -> Report {
    let witness = serde_json::json!({ "message": err.to_string() });
    if err.exit_code() == 1 {
        Report::fail(command, witness, started.elapsed().as_millis())
    } else {
        Report::error(command, witness, started.elapsed().as_millis())
    }
}

fn cmd_validate(file: &Path, field: Field) -> Report {
    let started = Instant::now();
    match io::load_instance(file, field) {
        Ok(instance) => {
            let summary = match &instance {
                LoadedInstance::Quiver(q) => serde_json::json!({
                    "kind": "quiver", "vertices": q.vertex_count(), "edges": q.edge_count(),
                }),
                LoadedInstance::BoundQuiver(bq) => serde_json::json!({
                    "kind": "bound_quiver",
                    "vertices": bq.quiver.vertex_count(),
                    "edges": bq.quiver.edge_count(),
                    "nilpotency_bound": bq.ideal.bound(),
                    "ideal_dim_below_bound": bq.ideal.dim_below_bound(),
                }),
                LoadedInstance::Connection { connection, .. } => serde_json::json!({
                    "kind": "connection",
                    "total_gamma_dim": connection.total_gamma_dim(),
                }),
                LoadedInstance::Algebra(a) => serde_json::json!({
                    "kind": "algebra", "dim": a.dim(), "radical_dim": a.rad().dim(),
                    "idempotents": a.vertex_count(),
                }),
                LoadedInstance::Bimodule(m) => serde_json::json!({
                    "kind": "bimodule", "dim": m.dim(), "rad_dim": m.rad().dim(),
                }),
            };
            Report::pass("validate", summary, started.elapsed().as_millis())
        }
        Err(e) => io_report("validate", &e, started),
    }
}

fn cmd_present(file: &Path, out: &Path, field: Field) -> Report {
    let started = Instant::now();
    let awd = match io::load_instance(file, field) {
        Ok(LoadedInstance::Algebra(a)) => a,
        Ok(other) => {
            return Report::error(
                "present",
                serde_json::json!({
                    "message": format!("expected an algebra file, got kind {:?}", other.kind())
                }),
                started.elapsed().as_millis(),
            )
        }
        Err(e) => return io_report("present", &e, started),
    };
    match quivalg::algebra::gabriel_presentation(&awd) {
        Ok(pres) => {
            let bq_file = io::bound_quiver_file("presented", &pres.bound_quiver);
            if let Err(e) = io::write_file(out, &bq_file) {
                return io_report("present", &e, started);
            }
            let paths = pres.path_order.len();
            Report::pass(
                "present",
                serde_json::json!({
                    "out": out.display().to_string(),
                    "vertices": pres.bound_quiver.quiver.vertex_count(),
                    "arrows": pres.bound_quiver.quiver.edge_count(),
                    "nilpotency_bound": pres.bound_quiver.ideal.bound(),
                    "dim_kq_mod_i": paths - pres.bound_quiver.ideal.dim_below_bound(),
                    "dim_a": awd.dim(),
                }),
                started.elapsed().as_millis(),
            )
        }
        Err(e) => Report::fail(
            "present",
            serde_json::json!({ "message": e.to_string() }),
            started.elapsed().as_millis(),
        ),
    }
}

fn cmd_functor(connection: &Path, out: &Path, field: Field) -> Report {
    let started = Instant::now();
    let (c, source, target) = match io::load_instance(connection, field) {
        Ok(LoadedInstance::Connection { connection, source, target }) => {
            (connection, source, target)
        }
        Ok(other) => {
            return Report::error(
                "functor",
                serde_json::json!({
                    "message": format!("expected a connection file, got kind {:?}", other.kind())
                }),
                started.elapsed().as_millis(),
            )
        }
        Err(e) => return io_report("functor", &e, started),
    };
    match p_connection(&c, &source, &target) {
        Ok(img) => {
            let stem = out
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "image".into());
            let left_name = format!("{stem}.left.json");
            let right_name = format!("{stem}.right.json");
            let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
            let writes = [
                io::write_file(
                    &dir.join(&left_name),
                    &io::algebra_file("left", &img.source_image.data),
                ),
                io::write_file(
                    &dir.join(&right_name),
                    &io::algebra_file("right", &img.target_image.data),
                ),
                io::write_file(
                    out,
                    &io::bimodule_file(
                        "image",
                        &img.bimodule,
                        FileRef { id: "left".into(), path: left_name.clone() },
                        FileRef { id: "right".into(), path: right_name.clone() },
                    ),
                ),
            ];
            for w in writes {
                if let Err(e) = w {
                    return io_report("functor", &e, started);
                }
            }
            Report::pass(
                "functor",
                serde_json::json!({
                    "out": out.display().to_string(),
                    "bimodule_dim": img.bimodule.dim(),
                    "validated": ["actions", "radical_symmetry", "lifting_data"],
                }),
                started.elapsed().as_millis(),
            )
        }
        Err(e) => Report::fail(
            "functor",
            serde_json::json!({ "message": e.to_string() }),
            started.elapsed().as_millis(),
        ),
    }
}

fn cmd_roundtrip(file: &Path, field: Field) -> Report {
    let started = Instant::now();
    let instance = match io::load_instance(file, field) {
        Ok(i) => i,
        Err(e) => return io_report("roundtrip", &e, started),
    };
    let result = match instance {
        LoadedInstance::Connection { connection, source, target } => {
            roundtrip_connection(&connection, &source, &target).map(|rt| {
                let blocks: Vec<String> = rt
                    .iso
                    .blocks()
                    .map(|((g, h), m)| format!("({g},{h}): {}x{}", m.rows(), m.cols()))
                    .collect();
                serde_json::json!({
                    "kind": "connection",
                    "iso_invertible": true,
                    "iso_blocks": blocks,
                    "reconstructed_gamma_dim": rt.reconstructed.total_gamma_dim(),
                })
            })
        }
        LoadedInstance::Algebra(awd) => roundtrip_algebra(&awd).map(|rt| {
            serde_json::json!({
                "kind": "algebra",
                "presented_vertices": rt.presentation.bound_quiver.quiver.vertex_count(),
                "presented_arrows": rt.presentation.bound_quiver.quiver.edge_count(),
                "iso_dim": rt.iso.rows(),
                "delta2_square_commutes": rt.delta2_square_commutes,
            })
        }),
        LoadedInstance::BoundQuiver(bq) => quivalg::equivalence::p_object(&bq)
            .and_then(|img| roundtrip_algebra(&img.data))
            .map(|rt| {
                serde_json::json!({
                    "kind": "bound_quiver",
                    "presented_vertices": rt.presentation.bound_quiver.quiver.vertex_count(),
                    "presented_arrows": rt.presentation.bound_quiver.quiver.edge_count(),
                    "dim_preserved": rt.iso.rows() == rt.image.data.dim(),
                })
            }),
        LoadedInstance::Bimodule(m) => connection_from_bimodule(&m).map(|cfb| {
            serde_json::json!({
                "kind": "bimodule",
                "gamma_dim": cfb.connection.total_gamma_dim(),
                "source_vertices": cfb.source_presentation.bound_quiver.quiver.vertex_count(),
                "target_vertices": cfb.target_presentation.bound_quiver.quiver.vertex_count(),
                "ideally_connected": true,
            })
        }),
        LoadedInstance::Quiver(_) => {
            return Report::error(
                "roundtrip",
                serde_json::json!({ "message": "no round trip is defined for bare quivers" }),
                started.elapsed().as_millis(),
            )
        }
    };
    match result {
        Ok(witness) => Report::pass("roundtrip", witness, started.elapsed().as_millis()),
        Err(e) => Report::fail(
            "roundtrip",
            serde_json::json!({ "message": e.to_string() }),
            started.elapsed().as_millis(),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check_axioms(
    field: Field,
    seed: u64,
    count: usize,
    max_vertices: usize,
    max_edges: usize,
    max_gamma_dim: usize,
    max_nilpotency: usize,
    sequential: bool,
    inject_violation: bool,
) -> Report {
    let started = Instant::now();
    let cfg = SuiteConfig {
        seed,
        count,
        gen: GenConfig {
            field,
            max_vertices: max_vertices.max(1),
            max_edges,
            max_gamma_dim: max_gamma_dim.max(1),
            max_nilpotency: max_nilpotency.max(2),
        },
        parallel: !sequential,
        inject_violation,
    };
    let suite = run_axiom_suite(&cfg);
    let checks: serde_json::Map<String, serde_json::Value> = suite
        .outcomes
        .iter()
        .map(|o| {
            (
                o.name.clone(),
                serde_json::json!({ "cases": o.cases, "failures": o.failures }),
            )
        })
        .collect();
    let witness = serde_json::json!({ "seed": suite.seed, "checks": checks });
    let elapsed = started.elapsed().as_millis();
    if suite.passed() {
        Report::pass("check-axioms", witness, elapsed).with_seed(seed)
    } else {
        Report::fail("check-axioms", witness, elapsed).with_seed(seed)
    }
}
