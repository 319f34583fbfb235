use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hitkit::action::{coinvariant_representatives, invariants, Group};
use hitkit::dual::{annihilated_basis, first_nonvanishing_square};
use hitkit::hit::{kameko, kameko_target, QpBasis};
use hitkit::io::{write_atomic, BasisFile, Cache, DualFile, InvariantFile};
use hitkit::lambda::{adem_reduce, cohomology, transfer_verdict, LambdaExpression};
use hitkit::poly::{weight_vector, WeightVector};
use hitkit::{gf2, Error, Result};

#[derive(Parser)]
#[command(name = "hitkit", version, about = "Hit problem, invariants and the algebraic transfer over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of (QP_k)_n with its weight-space table.
    Qp {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Only report the weight space of this weight vector, e.g. "(3,1,1,1)".
        #[arg(long)]
        omega: Option<String>,
        /// Also write the basis file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants of (QP_k)_n under the symmetric or general linear group.
    Invariants {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "gl")]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Kameko map (QP_k)_n -> (QP_k)_{(n-k)/2}.
    Kameko {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Report the dimension of the kernel.
        #[arg(long)]
        kernel: bool,
    },
    /// The annihilated subspace D_k, or a check of the elements in a file.
    Annihilated {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Coinvariants of D_k, with representatives written to a dual file.
    Coinvariants {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "gl")]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare coinvariants, Ext and the transfer images of given elements.
    Transfer {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        elements: PathBuf,
    },
    /// Lambda algebra computations.
    Lambda {
        #[command(subcommand)]
        command: LambdaCommand,
    },
}

#[derive(Subcommand)]
enum LambdaCommand {
    /// dim H^{s,t}, with t the stem.
    Ext {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: u32,
    },
    /// Admissible form of an expression such as "1,1,1,15 + 3,5,11".
    Reduce {
        #[arg(long)]
        expr: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_precondition() { 2 } else { 1 })
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    let cache = Cache::from_env();
    match cmd {
        Command::Qp { k, n, omega, out } => cmd_qp(&cache, k, n, omega.as_deref(), out),
        Command::Invariants { k, n, group, out } => cmd_invariants(&cache, k, n, group.parse()?, out),
        Command::Kameko { k, n, kernel } => cmd_kameko(k, n, kernel),
        Command::Annihilated { k, n, file } => cmd_annihilated(&cache, k, n, file),
        Command::Coinvariants { k, n, group, out } => {
            check_k(k)?;
            let elements = coinvariant_representatives(k, n, group.parse()?)?;
            println!("dim={}", elements.len());
            if let Some(path) = out {
                write_atomic(&path, &DualFile { k, n, elements }.to_text())?;
            }
            Ok(())
        }
        Command::Transfer { k, n, elements } => cmd_transfer(k, n, elements),
        Command::Lambda { command: LambdaCommand::Ext { s, t } } => {
            println!("dim={}", cohomology(s, t).dim);
            Ok(())
        }
        Command::Lambda { command: LambdaCommand::Reduce { expr } } => {
            println!("{}", adem_reduce(&expr.parse::<LambdaExpression>()?));
            Ok(())
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parse("k must be at least 1".into()));
    }
    Ok(())
}

/// Cached text of `kind`, or the result of `compute` written to the cache.
fn cached(cache: &Cache, k: usize, n: u32, kind: &str, compute: impl FnOnce() -> Result<String>) -> Result<String> {
    if let Some(text) = cache.read(k, n, kind)? {
        eprintln!("using {}", cache.path(k, n, kind).display());
        return Ok(text);
    }
    eprintln!("computing k={k} n={n} ({kind})");
    let text = compute()?;
    cache.write(k, n, kind, &text)?;
    Ok(text)
}

fn cmd_qp(cache: &Cache, k: usize, n: u32, omega: Option<&str>, out: Option<PathBuf>) -> Result<()> {
    check_k(k)?;
    let omega = omega.map(str::parse::<WeightVector>).transpose()?;
    if let Some(w) = &omega {
        if w.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, found: w.degree() });
        }
    }
    let text = cached(cache, k, n, "basis", || {
        let b = QpBasis::new(k, n);
        Ok(BasisFile { k, n, admissibles: b.admissibles().to_vec(), hit_rank: b.hit_rank() }.to_text())
    })?;
    let file = BasisFile::parse(&text)?;
    if let Some(path) = out {
        write_atomic(&path, &text)?;
    }
    let mut table: BTreeMap<WeightVector, usize> = BTreeMap::new();
    for x in &file.admissibles {
        *table.entry(weight_vector(x)).or_default() += 1;
    }
    match omega {
        Some(w) => println!("omega={w} dim={}", table.get(&w).copied().unwrap_or(0)),
        None => {
            println!("dim={}", file.admissibles.len());
            for (w, d) in &table {
                println!("omega={w} dim={d}");
            }
        }
    }
    Ok(())
}

fn cmd_invariants(cache: &Cache, k: usize, n: u32, group: Group, out: Option<PathBuf>) -> Result<()> {
    check_k(k)?;
    let kind = format!("inv_{}", group.name());
    let text = cached(cache, k, n, &kind, || {
        let b = QpBasis::new(k, n);
        let inv = invariants(&b, group)?;
        let elements = inv.rows().iter().map(|v| b.lift(v)).collect();
        Ok(InvariantFile { group, k, n, elements }.to_text())
    })?;
    let file = InvariantFile::parse(&text)?;
    if let Some(path) = out {
        write_atomic(&path, &text)?;
    }
    println!("dim={}", file.elements.len());
    Ok(())
}

fn cmd_kameko(k: usize, n: u32, kernel: bool) -> Result<()> {
    check_k(k)?;
    let m = kameko_target(k, n)?;
    let src = QpBasis::new(k, n);
    let dst = QpBasis::new(k, m);
    let rank = gf2::echelon(&kameko(&src, &dst)?, gf2::PivotRule::Leftmost).rank();
    if kernel {
        println!("dim={}", src.dim() - rank);
    } else {
        println!("source={} target={} rank={}", src.dim(), dst.dim(), rank);
    }
    Ok(())
}

fn cmd_annihilated(cache: &Cache, k: usize, n: u32, file: Option<PathBuf>) -> Result<()> {
    check_k(k)?;
    if let Some(path) = file {
        let d = DualFile::parse(&std::fs::read_to_string(path)?)?;
        if d.k != k || d.n != n {
            return Err(Error::Parse(format!("file holds k={} n={}, expected k={k} n={n}", d.k, d.n)));
        }
        for (i, u) in d.elements.iter().enumerate() {
            match first_nonvanishing_square(u) {
                None => println!("element {}: annihilated", i + 1),
                Some(l) => println!("element {}: not annihilated (Sq_*^{l} != 0)", i + 1),
            }
        }
        return Ok(());
    }
    let text = cached(cache, k, n, "dual", || Ok(DualFile { k, n, elements: annihilated_basis(k, n).elements() }.to_text()))?;
    println!("dim={}", DualFile::parse(&text)?.elements.len());
    Ok(())
}

fn cmd_transfer(k: usize, n: u32, elements: PathBuf) -> Result<()> {
    check_k(k)?;
    let d = DualFile::parse(&std::fs::read_to_string(elements)?)?;
    if d.k != k || d.n != n {
        return Err(Error::Parse(format!("file holds k={} n={}, expected k={k} n={n}", d.k, d.n)));
    }
    println!("{}", transfer_verdict(k, n, &d.elements)?);
    Ok(())
}
