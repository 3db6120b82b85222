//! `kt`: parse, verify and resolve `.kt-op` operator descriptions.
//!
//! Exit codes: 0 success, 1 input error, 2 verification or oracle failure,
//! 3 operator outside compute mode.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use koszul_tate::dsl::{self, SpecAst};
use koszul_tate::report::{emit_report, Format};
use koszul_tate::resolver::{
    build_tower, classify, resolve_with, verify_tower, LinearityClass, ResolveOptions,
};
use koszul_tate::ResolveError;

#[derive(Parser)]
#[command(name = "kt", version, about = "Noether identities and Koszul-Tate towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form and the expanded components.
    Parse { file: PathBuf },
    /// Verify the stages supplied in a bundle.
    Check { file: PathBuf },
    /// Compute the tower of a linear constant-coefficient operator.
    Resolve {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_stage: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Cross-check every stage against the brute-force oracle up to this degree.
        #[arg(long)]
        oracle_degree: Option<u32>,
    },
}

struct Failure(u8);

fn load(path: &Path) -> Result<SpecAst, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: cannot read file: {e}", path.display());
        Failure(1)
    })?;
    dsl::parse(&src).map_err(|e| {
        eprintln!("{}:{e}", path.display());
        Failure(1)
    })
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    eprintln!("{}:{e}", path.display());
    Failure(1)
}

fn cmd_parse(path: &Path) -> Result<(), Failure> {
    let ast = load(path)?;
    let bundle = dsl::lower_bundle(&ast).map_err(|e| input_error(path, e))?;
    let spec = &bundle.spec;
    print!("{}", dsl::render(&ast));
    for (name, e) in spec.component_names.iter().zip(&spec.components) {
        println!("# {name} = {}", e.render(&spec.fields));
    }
    println!("# linearity: {}", spec.linearity_class().as_str());
    for (k, ((ops, _), names)) in bundle.stages.iter().zip(&bundle.names).enumerate() {
        for (d, (name, _)) in ops.iter().zip(names) {
            println!("# stage {k} {name} = {}", d.render(&spec.fields));
        }
    }
    Ok(())
}

fn cmd_check(path: &Path) -> Result<(), Failure> {
    let ast = load(path)?;
    let bundle = dsl::lower_bundle(&ast).map_err(|e| input_error(path, e))?;
    let spec = &bundle.spec;
    let tower = build_tower(spec, &bundle.stages).map_err(|e| {
        eprintln!("{}:{}: {e}", path.display(), ast.operator.span);
        Failure(1)
    })?;
    let results = verify_tower(spec, &tower).map_err(|e| {
        eprintln!("{}:{}: {e}", path.display(), ast.operator.span);
        Failure(1)
    })?;
    println!("operator {} ({} stages supplied)", spec.name, results.len());
    let mut failed = false;
    for (res, names) in results.iter().zip(&bundle.names) {
        let status = if res.accepted { "verified" } else { "FAILED" };
        println!("stage {}: {} operators, {status}", res.stage, res.residuals.len());
        for (r, (name, span)) in res.residuals.iter().zip(names) {
            if !r.is_zero() {
                failed = true;
                eprintln!(
                    "{}:{span}: stage {} operator {name}: residual {}",
                    path.display(),
                    res.stage,
                    r.render(&spec.fields)
                );
            }
        }
        if res.trivial_candidate {
            println!("stage {}: contains a zero operator (trivial candidate)", res.stage);
        }
    }
    println!("regularity: not checked");
    if failed {
        Err(Failure(2))
    } else {
        Ok(())
    }
}

fn cmd_resolve(
    path: &Path,
    max_stage: usize,
    format: OutputFormat,
    oracle_degree: Option<u32>,
) -> Result<(), Failure> {
    let ast = load(path)?;
    let spec = dsl::lower(&ast).map_err(|e| input_error(path, e))?;
    if spec.linearity_class() != LinearityClass::LinearConstantCoeff {
        let span = spec
            .components
            .iter()
            .zip(&ast.equations)
            .find(|(c, _)| classify(std::slice::from_ref(c)) == LinearityClass::General)
            .map(|(_, eq)| eq.span)
            .unwrap_or(ast.operator.span);
        eprintln!("{}:{span}: {}", path.display(), ResolveError::NotLinearConstantCoeff);
        return Err(Failure(3));
    }
    let options = ResolveOptions {
        max_stage,
        oracle_degree,
    };
    let report = resolve_with(&spec, options).map_err(|e| {
        eprintln!("{}:{}: {e}", path.display(), ast.operator.span);
        match e {
            ResolveError::NotLinearConstantCoeff => Failure(3),
            _ => Failure(2),
        }
    })?;
    let format = match format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    print!("{}", emit_report(&report, format));
    if !report.certificates.exactness {
        eprintln!("{}:{}: exactness certificate failed", path.display(), ast.operator.span);
        return Err(Failure(2));
    }
    if report.certificates.oracle_passed == Some(false) {
        eprintln!(
            "{}:{}: oracle mismatch at degree {}",
            path.display(),
            ast.operator.span,
            oracle_degree.unwrap_or_default()
        );
        return Err(Failure(2));
    }
    Ok(())
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
    let result = match cli.command {
        Command::Parse { file } => cmd_parse(&file),
        Command::Check { file } => cmd_check(&file),
        Command::Resolve {
            file,
            max_stage,
            format,
            oracle_degree,
        } => cmd_resolve(&file, max_stage, format, oracle_degree),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code)) => ExitCode::from(code),
    }
}
