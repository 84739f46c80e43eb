//! `laminar`: generate, check and draw cubic laminations from the shell.
//!
//! Exit status is 0 on success, 1 when a verification fails (an overlap
//! between tags, a lamination that is not sibling invariant) and 2 for
//! unreadable or malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use laminar_core::tags::tag_family_report;
use laminar_core::{
    check_sibling_invariant, enumerate_with, lavaurs_qml, pullback_generate_with,
    render_lamination_svg, render_tag_svg, CriticalPortrait, EnumerateOptions, GeodesicStyle,
    Lamination, MarkedLamination, MixedTag, Polygon, PullbackOptions, RenderSpec,
};

#[derive(Parser)]
#[command(
    name = "laminar",
    version,
    about = "Invariant laminations of the circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pull back a critical portrait file into a lamination dump.
    Pullback {
        portrait: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Fail instead of breaking ties between branch regions.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a corpus of dendritic marked laminations to a directory.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        max_preperiod: u32,
        #[arg(long, default_value_t = 2)]
        max_period: u32,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mixed tags of a corpus family file, plus the pairwise report.
    Tags {
        /// `family.txt` as written by `enumerate`.
        family: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Quadratic minors up to a period, by Lavaurs' algorithm.
    Qml {
        #[arg(long, default_value_t = 8)]
        max_period: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify sibling invariance of a lamination dump.
    Check { lamination: PathBuf },
    /// Draw a lamination dump as SVG.
    Render {
        lamination: PathBuf,
        #[arg(long, value_enum, default_value_t = Style::Hyperbolic)]
        style: Style,
        #[arg(long, default_value_t = 600)]
        size: u32,
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw tag files side by side as SVG.
    RenderTag {
        #[arg(required = true)]
        tags: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Style::Hyperbolic)]
        style: Style,
        #[arg(long, default_value_t = 600)]
        size: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Straight,
    Hyperbolic,
}

impl From<Style> for GeodesicStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::Straight => GeodesicStyle::Straight,
            Style::Hyperbolic => GeodesicStyle::Hyperbolic,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    /// Exit 2.
    #[error("{0}")]
    Input(String),
    /// Exit 1.
    #[error("{0}")]
    Verification(String),
}

type Outcome = Result<(), Failure>;

fn input(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(path, e))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| input(path, e))
}

/// To `out`, or stdout.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn load_lamination(path: &Path) -> Result<Lamination, Failure> {
    Lamination::parse(&read(path)?).map_err(|e| input(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("laminar: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("laminar: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Pullback {
            portrait,
            depth,
            strict,
            out,
        } => {
            let p = CriticalPortrait::parse(&read(&portrait)?).map_err(|e| input(&portrait, e))?;
            let r = pullback_generate_with(&p, depth, PullbackOptions { strict })
                .map_err(|e| input(&portrait, e))?;
            if r.ties > 0 {
                eprintln!("laminar: {} ties broken counter-clockwise", r.ties);
            }
            emit(out.as_deref(), &r.lamination.dump())
        }
        Command::Enumerate {
            degree,
            max_preperiod,
            max_period,
            count,
            depth,
            seed,
            out,
        } => {
            if degree != 3 {
                return Err(Failure::Input(format!(
                    "only cubic portraits are enumerated, got degree {degree}"
                )));
            }
            let opts = EnumerateOptions {
                max_preperiod,
                max_period,
                count,
                depth,
                seed,
            };
            enumerate(&opts, &out)
        }
        Command::Tags { family, out } => tags(&family, &out),
        Command::Qml { max_period, out } => {
            if !(2..=20).contains(&max_period) {
                return Err(Failure::Input(format!(
                    "max period {max_period} outside 2..=20"
                )));
            }
            let l = lavaurs_qml(max_period).map_err(|e| Failure::Verification(e.to_string()))?;
            emit(out.as_deref(), &l.dump())
        }
        Command::Check { lamination } => {
            let l = load_lamination(&lamination)?;
            let r = check_sibling_invariant(&l);
            println!("tested {} leaves, {} failures", r.tested, r.failures.len());
            for f in &r.failures {
                println!("{:?} {}", f.condition, f.leaf);
            }
            if r.passed() {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "{} is not sibling invariant",
                    lamination.display()
                )))
            }
        }
        Command::Render {
            lamination,
            style,
            size,
            labels,
            out,
        } => {
            let l = load_lamination(&lamination)?;
            let spec = RenderSpec {
                size,
                style: style.into(),
                labels,
                ..RenderSpec::default()
            };
            emit(out.as_deref(), &render_lamination_svg(&l, &spec))
        }
        Command::RenderTag {
            tags,
            style,
            size,
            out,
        } => {
            let parsed = tags
                .iter()
                .map(|p| read(p)?.parse::<MixedTag>().map_err(|e| input(p, e)))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = RenderSpec {
                size,
                style: style.into(),
                ..RenderSpec::default()
            };
            emit(out.as_deref(), &render_tag_svg(&parsed, &spec))
        }
    }
}

fn enumerate(opts: &EnumerateOptions, out: &Path) -> Outcome {
    fs::create_dir_all(out).map_err(|e| input(out, e))?;
    let e = enumerate_with(opts);
    let mut family = String::new();
    for (i, (portrait, m)) in e.accepted.iter().enumerate() {
        let lam = format!("lam_{i:03}.txt");
        write(&out.join(&lam), &m.lamination().dump())?;
        write(&out.join(format!("portrait_{i:03}.txt")), &portrait.dump())?;
        family.push_str(&format!("{lam} c1={} c2={}\n", m.c1(), m.c2()));
    }
    write(&out.join("family.txt"), &family)?;
    let skipped: String = e
        .skipped
        .iter()
        .map(|(p, why)| format!("{p}: {why}\n"))
        .collect();
    write(&out.join("skipped.txt"), &skipped)?;
    eprintln!(
        "laminar: {} accepted, {} skipped",
        e.accepted.len(),
        e.skipped.len()
    );
    Ok(())
}

/// One `<file> c1=<polygon> c2=<polygon>` line of a family file.
fn parse_family_line(line: &str) -> Result<(&str, Polygon, Polygon), String> {
    let mut it = line.split_whitespace();
    let (Some(file), Some(c1), Some(c2), None) = (it.next(), it.next(), it.next(), it.next())
    else {
        return Err("expected `<file> c1=<polygon> c2=<polygon>`".into());
    };
    let poly = |tok: &str, key: &str| -> Result<Polygon, String> {
        tok.strip_prefix(key)
            .ok_or_else(|| format!("expected {key}<polygon>, got {tok:?}"))?
            .parse()
            .map_err(|e: laminar_core::Error| e.to_string())
    };
    Ok((file, poly(c1, "c1=")?, poly(c2, "c2=")?))
}

fn tags(family: &Path, out: &Path) -> Outcome {
    let text = read(family)?;
    let dir = family.parent().unwrap_or(Path::new("."));
    let mut tags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at =
            |msg: String| Failure::Input(format!("{}: line {}: {msg}", family.display(), i + 1));
        let (file, c1, c2) = parse_family_line(line).map_err(at)?;
        let l = Arc::new(load_lamination(&dir.join(file))?);
        let m = MarkedLamination::new(l, c1, c2).map_err(|e| at(e.to_string()))?;
        tags.push(MixedTag::of(&m).map_err(|e| at(e.to_string()))?);
    }
    fs::create_dir_all(out).map_err(|e| input(out, e))?;
    for (i, t) in tags.iter().enumerate() {
        write(&out.join(format!("tag_{i:03}.txt")), &t.to_string())?;
    }
    let report = tag_family_report(&tags);
    write(&out.join("report.txt"), &report.to_string())?;
    println!(
        "{} tags: disjoint={} equal={} overlap={}",
        tags.len(),
        report.disjoint,
        report.equal,
        report.overlap
    );
    if report.passed() {
        Ok(())
    } else {
        for (i, j, _) in report.overlaps() {
            eprintln!("overlap: tag {i} {} / tag {j} {}", tags[*i], tags[*j]);
        }
        Err(Failure::Verification(format!(
            "{} overlapping tag pairs",
            report.overlap
        )))
    }
}
