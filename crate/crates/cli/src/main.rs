//! `kscolor`: exact truth-value colorings of measurements from the command line.

mod input;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kscolor::coloring::{classify_projection_matrix, classify_ray, ProjectionRep, TruthValue};
use kscolor::density::{false_ray_near_exact, nearest_true_ray_exact, suitable_frame_near_exact};
use kscolor::io::{
    parse_any_decomposition, AnyDecomposition, DecompositionFile, FrameFile, FORMAT_VERSION,
};
use kscolor::kscheck::{build_graph, find_ks_coloring, perturb_to_suitable, RaySet};
use kscolor::povm::{
    classify_with_witness, make_suitable_near_exact, verify_eq2, PovmDecomposition, SuitableOptions,
};
use kscolor::{
    coloring, gen, Error, Frame, GVector, PovmElement, QuadComplex, QuadHermitian, Rational, Result,
};
use serde::Serialize;
use serde_json::json;

use output::Format;

#[derive(Parser)]
#[command(
    name = "kscolor",
    version,
    about = "Exact non-contextual colorings of rays, projections and POVMs"
)]
struct Cli {
    /// Approximation tolerance, read exactly (e.g. 1e-6 or 1/1000).
    #[arg(long, global = true, default_value = "1e-6", value_parser = positive_rational)]
    epsilon: Rational,
    /// Dimension for the gen-* commands.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    dimension: u32,
    /// Seed for the gen-* commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest coordinate denominator for gen-true-ray.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_denominator: u64,
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "json",
        env = "KSCOLOR_FORMAT"
    )]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truth value of a ray representative, e.g. "[1/3,1/2,1/2,1/2,1/2,1/2]".
    ClassifyRay { vector: String },
    /// Truth value of a projection matrix representative.
    ClassifyMatrix { projection: String },
    /// Truth value of a POVM element, with a witness decomposition when FALSE.
    ClassifyPovm { element: String },
    /// A TRUE ray within epsilon of the given one.
    ApproxTrue { vector: String },
    /// A suitable exact frame within epsilon of a near-orthonormal one.
    SuitableFrame { frame: String },
    /// A FALSE ray within epsilon of the given one, with its witness frame.
    FalseRay { vector: String },
    /// A suitable exact POVM within epsilon of the given decomposition file.
    MakeSuitablePovm {
        decomposition: String,
        /// Split a single-element decomposition {I} into two elements.
        #[arg(long)]
        split: bool,
    },
    /// Sum of truth values over a frame or POVM file.
    VerifyDecomposition { file: String },
    /// Searches a ray set file for a valid 0/1 coloring.
    KsSolve { rayset: String },
    /// Moves every context of a ray set file to a nearby suitable frame.
    KsPerturb { rayset: String },
    /// Random TRUE ray.
    #[command(hide = true)]
    GenTrueRay,
    /// Random near-orthonormal frame file.
    #[command(hide = true)]
    GenFrame,
    /// Random POVM decomposition file.
    #[command(hide = true)]
    GenPovm {
        #[arg(long, default_value_t = 3)]
        elements: usize,
    },
    /// One of the bundled ray sets: peres33 or cabello18.
    #[command(hide = true)]
    GenRayset { name: String },
}

fn positive_rational(s: &str) -> std::result::Result<Rational, String> {
    let r: Rational = s.parse().map_err(|e: Error| e.to_string())?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err("must be positive".into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Degenerate(_) | Error::NotApplicable(_) => 3,
        Error::ResourceLimit { .. } => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::Degenerate(_) => "degenerate-input",
        Error::NotApplicable(_) => "not-applicable",
        Error::ResourceLimit { .. } => "resource-limit",
    }
}

#[derive(Serialize)]
struct Value {
    value: TruthValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_shift: Option<i64>,
}

/// Exact-decimal text of a machine real.
fn decimal(x: f64) -> Rational {
    x.to_string()
        .parse()
        .expect("finite floats print as decimals")
}

fn decimal_vector(coords: &[f64]) -> Result<GVector> {
    GVector::from_coords(&coords.iter().map(|&x| decimal(x)).collect::<Vec<_>>())
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("results serialize")
}

fn frame_targets(arg: &str) -> Result<Vec<GVector>> {
    let text = input::text_of(arg)?;
    if let Ok(file) = input::parse::<FrameFile>(&text, "frame") {
        file.validate()?;
        return Ok(file.legs);
    }
    input::parse(&text, "frame")
}

fn run(cli: &Cli) -> Result<serde_json::Value> {
    let eps = &cli.epsilon;
    let n = cli.dimension as usize;
    Ok(match &cli.command {
        Command::ClassifyRay { vector } => {
            let v: GVector = input::read(vector, "vector")?;
            to_json(&Value {
                value: classify_ray(&v),
                witness_shift: None,
            })
        }
        Command::ClassifyMatrix { projection } => {
            let rep: ProjectionRep = input::read(projection, "projection matrix")?;
            let value = classify_projection_matrix(&rep);
            to_json(&Value {
                value,
                witness_shift: rep.witness_shift().filter(|_| value == TruthValue::True),
            })
        }
        Command::ClassifyPovm { element } => {
            let m: QuadHermitian = input::read(element, "POVM element")?;
            to_json(&classify_with_witness(&PovmElement::new(m)?))
        }
        Command::ApproxTrue { vector } => to_json(&nearest_true_ray_exact(
            &input::read(vector, "vector")?,
            eps,
        )?),
        Command::SuitableFrame { frame } => {
            to_json(&suitable_frame_near_exact(&frame_targets(frame)?, eps)?)
        }
        Command::FalseRay { vector } => {
            to_json(&false_ray_near_exact(&input::read(vector, "vector")?, eps)?)
        }
        Command::MakeSuitablePovm {
            decomposition,
            split,
        } => {
            let file: DecompositionFile = input::read(decomposition, "decomposition file")?;
            file.validate()?;
            to_json(&make_suitable_near_exact(
                &file.elements,
                eps,
                SuitableOptions {
                    split_single: *split,
                },
            )?)
        }
        Command::VerifyDecomposition { file } => {
            match parse_any_decomposition(&unwrap_result(input::text_of(file)?))? {
                AnyDecomposition::Frame(f) => {
                    let frame = Frame::new(f.legs)?;
                    let sum = coloring::verify_eq1(&frame)?;
                    json!({ "kind": "frame", "sum": sum, "values": coloring::classify_in_frame(&frame) })
                }
                AnyDecomposition::Povm(d) => {
                    let d = PovmDecomposition::from_matrices(d.elements)?;
                    let sum = verify_eq2(&d)?;
                    json!({ "kind": "povm", "sum": sum, "values": kscolor::povm::classify_in_decomposition(&d) })
                }
            }
        }
        Command::KsSolve { rayset } => {
            let rs = RaySet::parse(&input::text_of(rayset)?)?;
            let g = build_graph(&rs);
            match find_ks_coloring(&g) {
                None => {
                    json!({ "result": "UNSAT", "rays": rs.len(), "contexts": g.contexts().len() })
                }
                Some(c) => {
                    let ones: Vec<&str> = c.ones().map(|i| rs.labels()[i].as_str()).collect();
                    json!({ "result": "SAT", "rays": rs.len(), "contexts": g.contexts().len(), "true_rays": ones })
                }
            }
        }
        Command::KsPerturb { rayset } => to_json(&perturb_to_suitable(
            &RaySet::parse(&input::text_of(rayset)?)?,
            eps,
        )?),
        Command::GenTrueRay => to_json(&gen::true_ray(
            &mut gen::rng(cli.seed),
            n,
            cli.max_denominator,
        )),
        Command::GenFrame => {
            let legs = gen::haar_frame(&mut gen::rng(cli.seed), n);
            to_json(&FrameFile::new(
                legs.iter()
                    .map(|l| decimal_vector(l))
                    .collect::<Result<_>>()?,
            ))
        }
        Command::GenPovm { elements } => {
            if *elements == 0 {
                return Err(Error::InvalidInput(
                    "a POVM needs at least one element".into(),
                ));
            }
            let els = gen::povm(&mut gen::rng(cli.seed), n, *elements);
            let exact = els
                .iter()
                .map(|m| {
                    let rows = m.iter().map(|r| {
                        r.iter()
                            .map(|&(a, b)| QuadComplex::new(decimal(a).into(), decimal(b).into()))
                            .collect()
                    });
                    QuadHermitian::from_rows(rows.collect())
                })
                .collect::<Result<Vec<_>>>()?;
            to_json(&DecompositionFile::new(exact))
        }
        Command::GenRayset { name } => {
            let rs = match name.as_str() {
                "peres33" => RaySet::peres33(),
                "cabello18" => RaySet::cabello18(),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown ray set {other}; try peres33 or cabello18"
                    )))
                }
            };
            serde_json::Value::String(rs.to_text())
        }
    })
}

/// Lets the output of `suitable-frame` and `make-suitable-povm` be verified directly.
fn unwrap_result(text: String) -> String {
    let Ok(serde_json::Value::Object(mut doc)) = serde_json::from_str(&text) else {
        return text;
    };
    if let Some(d) = doc.remove("decomposition") {
        return d.to_string();
    }
    match doc.remove("object") {
        Some(serde_json::Value::Array(legs)) => {
            json!({ "format_version": FORMAT_VERSION, "dimension": legs.len(), "legs": legs })
                .to_string()
        }
        _ => text,
    }
}

fn message(e: &Error) -> &str {
    match e {
        Error::InvalidInput(m) | Error::Degenerate(m) | Error::NotApplicable(m) => m,
        Error::ResourceLimit { message, .. } => message,
    }
}

fn emit(mut out: impl Write, text: &str) {
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(serde_json::Value::String(raw)) if matches!(cli.command, Command::GenRayset { .. }) => {
            emit(io::stdout().lock(), &raw);
            ExitCode::SUCCESS
        }
        Ok(v) => {
            emit(
                io::stdout().lock(),
                &(output::render(&v, cli.format) + "\n"),
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut body = json!({ "error": error_kind(&e), "message": message(&e) });
            if let Error::ResourceLimit {
                achieved: Some(a), ..
            } = &e
            {
                body["achieved"] = json!(a);
            }
            emit(
                io::stderr().lock(),
                &(output::render(&body, cli.format) + "\n"),
            );
            ExitCode::from(exit_code(&e))
        }
    }
}
