use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;
use treecut::{
    absolute_center, augmented_diameter, backbone, classify_usefulness, continuous_diameter, grid_search, load_tree,
    optimize, random_tree, render_svg, GeometricTree, Shape, Shortcut,
};

#[derive(Parser, Debug)]
#[command(name = "treecut", version, about = "Find the straight shortcut that minimizes a geometric tree's diameter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Multiply the length tolerance, for ill-conditioned inputs.
    #[arg(long, global = true, default_value_t = 1.0, value_parser = positive)]
    tolerance_scale: f64,
    /// Also draw the tree (and shortcut, if any) as SVG to this path.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Diameter, center and backbone of a tree.
    Analyze {
        /// Tree JSON file, or `-` for standard input.
        input: String,
    },
    /// Diameter of the tree plus a given shortcut.
    Evaluate {
        input: String,
        /// Shortcut as `{"p": {"edge": [u, v], "lambda": f}, "q": {...}}`.
        #[arg(long)]
        shortcut: String,
    },
    /// Optimal shortcut.
    Optimize {
        input: String,
        /// Include the event trace.
        #[arg(long)]
        trace: bool,
    },
    /// Brute-force grid search.
    Oracle {
        input: String,
        /// Grid spacing in arc length; defaults to diameter / 200.
        #[arg(long, value_parser = positive)]
        resolution: Option<f64>,
        /// Only place endpoints on the backbone, one on each side of the center.
        #[arg(long)]
        restrict_backbone: bool,
    },
    /// Random tree in the JSON tree schema.
    Gen {
        /// Number of vertices.
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform, caterpillar or balanced
        #[arg(long, default_value = "uniform")]
        shape: Shape,
    },
    /// SVG drawing of a tree; written to --svg, or standard output.
    Render {
        input: String,
        #[arg(long)]
        shortcut: Option<String>,
        /// Draw the optimal shortcut.
        #[arg(long, conflicts_with = "shortcut")]
        optimal: bool,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read_tree(path: &str, tol_scale: f64) -> Result<GeometricTree, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input_err)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?
    };
    Ok(load_tree(&text).map_err(input_err)?.with_tolerance_scale(tol_scale))
}

fn parse_shortcut(tree: &GeometricTree, text: &str) -> Result<Shortcut, CliError> {
    let s: Shortcut = serde_json::from_str(text).map_err(|e| CliError::Input(format!("shortcut: {e}")))?;
    tree.point_coordinates(&s.p).map_err(input_err)?;
    tree.point_coordinates(&s.q).map_err(input_err)?;
    Ok(s)
}

/// Round every float to 12 significant digits.
fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if let Some(r) = format!("{x:.11e}").parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(e.to_string()))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Internal(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn write_svg(cli: &Cli, tree: &GeometricTree, shortcut: Option<&Shortcut>) -> Result<(), CliError> {
    let Some(path) = &cli.svg else { return Ok(()) };
    let svg = svg_for(tree, shortcut)?;
    std::fs::write(path, svg).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn svg_for(tree: &GeometricTree, shortcut: Option<&Shortcut>) -> Result<String, CliError> {
    let diagnosis = match shortcut {
        Some(s) => Some(augmented_diameter(tree, &backbone(tree), s).map_err(input_err)?),
        None => None,
    };
    Ok(render_svg(tree, shortcut, diagnosis.as_ref()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = cli.tolerance_scale;
    let mut out = match &cli.command {
        Command::Analyze { input } => {
            let t = read_tree(input, tol)?;
            write_svg(cli, &t, None)?;
            json!({
                "vertex_count": t.vertex_count(),
                "diameter": to_value(&continuous_diameter(&t))?,
                "center": to_value(&absolute_center(&t))?,
                "backbone": to_value(&backbone(&t))?,
            })
        }
        Command::Evaluate { input, shortcut } => {
            let t = read_tree(input, tol)?;
            let s = parse_shortcut(&t, shortcut)?;
            let diagnosis = augmented_diameter(&t, &backbone(&t), &s).map_err(input_err)?;
            let usefulness = classify_usefulness(&t, &s).map_err(input_err)?;
            write_svg(cli, &t, Some(&s))?;
            json!({
                "shortcut": to_value(&s)?,
                "usefulness": to_value(&usefulness.kind)?,
                "diameter_before": usefulness.diameter_before,
                "diameter_after": usefulness.diameter_after,
                "diagnosis": to_value(&diagnosis)?,
            })
        }
        Command::Optimize { input, trace } => {
            let t = read_tree(input, tol)?;
            let r = optimize(&t);
            write_svg(cli, &t, Some(&r.shortcut))?;
            let mut v = to_value(&r)?;
            if !trace {
                v.as_object_mut().expect("result is an object").remove("events");
            }
            v
        }
        Command::Oracle { input, resolution, restrict_backbone } => {
            let t = read_tree(input, tol)?;
            let h = resolution.unwrap_or_else(|| backbone(&t).diameter / 200.0);
            let g = grid_search(&t, h, *restrict_backbone).map_err(input_err)?;
            write_svg(cli, &t, Some(&g.shortcut))?;
            to_value(&g)?
        }
        Command::Gen { n, seed, shape } => {
            if *n < 2 {
                return Err(CliError::Input("a tree needs at least 2 vertices".into()));
            }
            let t = random_tree(*seed, *n, *shape);
            write_svg(cli, &t, None)?;
            // emitted verbatim so that it round-trips through the loader
            return write_out(cli.output.as_ref(), &t.to_json());
        }
        Command::Render { input, shortcut, optimal } => {
            let t = read_tree(input, tol)?;
            let s = match (shortcut, optimal) {
                (Some(text), _) => Some(parse_shortcut(&t, text)?),
                (None, true) => Some(optimize(&t).shortcut),
                (None, false) => None,
            };
            let svg = svg_for(&t, s.as_ref())?;
            return match &cli.svg {
                Some(path) => std::fs::write(path, svg).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
                None => write_out(cli.output.as_ref(), svg.trim_end()),
            };
        }
    };
    round_numbers(&mut out);
    let text = serde_json::to_string_pretty(&out).map_err(|e| CliError::Internal(e.to_string()))?;
    write_out(cli.output.as_ref(), &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("treecut: {info}")));
    let outcome = std::panic::catch_unwind(|| run(&cli))
        .unwrap_or_else(|_| Err(CliError::Internal("invariant violated".into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("treecut: {e}");
            ExitCode::from(e.code())
        }
    }
}
