use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use alexstrat::covers::{betti_cover_breakdown, betti_cover_oracle, parse_images, validate_epimorphism, FiniteAbelianGroup};
use alexstrat::fox::{fox_gradient, AlexanderMatrix};
use alexstrat::kahler::{kahler_obstruction_report, ObstructionStatus};
use alexstrat::strata::{Stratification, TorsionCharacter};
use alexstrat::{Error, Presentation};

const EXIT_INPUT: u8 = 1;
const EXIT_OBSTRUCTED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Alexander strata, abelian covers and Kähler screening for finitely
/// presented groups.
#[derive(Parser, Debug)]
#[command(name = "alexstrat", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for character-parallel work (default: all cores).
    #[arg(long, global = true, env = "ALEXSTRAT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Presentation file (`gens: ...` / `rels: ...`).
    path: Option<PathBuf>,

    /// Inline presentation instead of a file, e.g. "gens: x, y; rels: x y x^-1 y^-1".
    #[arg(short = 'p', long = "presentation", conflicts_with = "path")]
    inline: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fox partial derivatives of each relator, or of one word.
    Derive {
        #[command(flatten)]
        input: Input,
        /// Differentiate this word instead of the relators.
        #[arg(long)]
        word: Option<String>,
    },
    /// The Alexander matrix (rows = generators, columns = relators).
    Matrix {
        #[command(flatten)]
        input: Input,
        /// Show entries in Z[H_1 / torsion] instead of the free-group ring.
        #[arg(long)]
        quotient: bool,
    },
    /// Betti number and torsion of the abelianization.
    Abelianization {
        #[command(flatten)]
        input: Input,
    },
    /// Stratum data at one torsion character.
    Strata {
        #[command(flatten)]
        input: Input,
        /// Character as N=<N>,a=<a1,...,ar>.
        #[arg(long)]
        at: String,
    },
    /// Torsion characters of order dividing N in V_i (or W_i with --jumping).
    TorsionScan {
        #[command(flatten)]
        input: Input,
        /// Stratum index i.
        #[arg(long)]
        stratum: usize,
        /// Characters with values in the N-th roots of unity.
        #[arg(long)]
        order: u64,
        /// Use the cohomology jumping locus W_i, which also contains the
        /// trivial character when i <= b_1.
        #[arg(long)]
        jumping: bool,
    },
    /// First Betti number of the cover given by an epimorphism onto G.
    Betti {
        #[command(flatten)]
        input: Input,
        /// Cyclic orders of G, e.g. "6" or "2,2".
        #[arg(long)]
        group: String,
        /// Generator images, e.g. "x:1;y:1" or "x:1,0;y:0,1".
        #[arg(long)]
        images: String,
    },
    /// Bounded binomial-ideal screen for Kähler groups.
    KahlerCheck {
        #[command(flatten)]
        input: Input,
        /// Largest exponent magnitude tried in a binomial factor.
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Largest root-of-unity order tried, for both coefficients and torsion points.
        #[arg(long, default_value_t = 12)]
        max_order: u64,
        /// Base relator to try instead of searching.
        #[arg(long)]
        base_relator: Option<String>,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(m) => Failure::Internal(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn load(input: &Input) -> Result<Presentation, Failure> {
    let text = match (&input.path, &input.inline) {
        (_, Some(inline)) => inline.clone(),
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            return Err(Failure::Input(
                "no presentation given: pass a file path or --presentation".into(),
            ))
        }
    };
    Ok(text.parse::<Presentation>()?)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Derive { input, word } => {
            let p = load(input)?;
            let names = p.names();
            let words: Vec<(String, alexstrat::Word)> = match word {
                Some(w) => vec![(w.clone(), p.parse_word(w)?)],
                None => p
                    .relators()
                    .iter()
                    .enumerate()
                    .map(|(j, w)| (format!("R{}", j + 1), w.clone()))
                    .collect(),
            };
            if cli.json {
                let out: Vec<serde_json::Value> = words
                    .iter()
                    .map(|(label, w)| {
                        serde_json::json!({
                            "word": label,
                            "partials": fox_gradient(w),
                        })
                    })
                    .collect();
                return Ok(Output::ok(to_json(&serde_json::json!({
                    "generators": names,
                    "derivatives": out,
                }))?));
            }
            let mut s = String::new();
            for (label, w) in &words {
                for (i, d) in fox_gradient(w).iter().enumerate() {
                    let _ = writeln!(s, "D_{}({label}) = {}", names[i], d.display_with(names));
                }
            }
            Ok(Output::ok(s))
        }
        Command::Matrix { input, quotient } => {
            let p = load(input)?;
            let m = AlexanderMatrix::new(&p);
            let names = p.names();
            if *quotient {
                let q = m.apply_abelianization_quotient(&p.abelianization());
                if cli.json {
                    return Ok(Output::ok(to_json(&serde_json::json!({
                        "variables": q.names,
                        "relators": m.relator_count(),
                        "entries": q.entries,
                    }))?));
                }
                let mut s = format!("{} x {} Alexander matrix over Z[H1/torsion]\n", m.rank(), m.relator_count());
                for (i, name) in names.iter().enumerate().take(m.rank()) {
                    let cells: Vec<String> = (0..m.relator_count()).map(|j| q.entry_text(i, j)).collect();
                    let _ = writeln!(s, "{}: {}", name, cells.join(" | "));
                }
                return Ok(Output::ok(s));
            }
            if cli.json {
                return Ok(Output::ok(to_json(&m.to_json())?));
            }
            let mut s = format!("{} x {} Alexander matrix\n", m.rank(), m.relator_count());
            for (i, row) in m.rows().iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|e| e.display_with(names).to_string()).collect();
                let _ = writeln!(s, "{}: {}", names[i], cells.join(" | "));
            }
            Ok(Output::ok(s))
        }
        Command::Abelianization { input } => {
            let p = load(input)?;
            let ab = p.abelianization();
            let torsion: Vec<String> = ab.torsion.iter().map(|d| d.to_string()).collect();
            if cli.json {
                return Ok(Output::ok(to_json(&serde_json::json!({
                    "betti": ab.betti,
                    "torsion": torsion,
                }))?));
            }
            let mut parts = Vec::new();
            if ab.betti > 0 {
                parts.push(if ab.betti == 1 { "Z".to_string() } else { format!("Z^{}", ab.betti) });
            }
            parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
            let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            Ok(Output::ok(format!(
                "H1 = {group}\nbetti = {}\ntorsion = [{}]\n",
                ab.betti,
                torsion.join(", ")
            )))
        }
        Command::Strata { input, at } => {
            let p = load(input)?;
            let chi: TorsionCharacter = at.parse()?;
            let report = Stratification::new(&p).report(&chi)?;
            if cli.json {
                return Ok(Output::ok(to_json(&report)?));
            }
            Ok(Output::ok(format!(
                "character = {}\nrank = {}\ndim C1 = {}\ndim H1 = {}\ndepth = {}\n",
                report.character, report.rank, report.dim_cocycles, report.dim_cohomology, report.depth
            )))
        }
        Command::TorsionScan {
            input,
            stratum,
            order,
            jumping,
        } => {
            let p = load(input)?;
            if *order == 0 {
                return Err(Failure::Input("--order must be >= 1".into()));
            }
            let s = Stratification::new(&p);
            let chars = if *jumping {
                s.jumping_scan(*stratum, *order)?
            } else {
                s.torsion_scan(*stratum, *order)?
            };
            if cli.json {
                return Ok(Output::ok(to_json(&chars)?));
            }
            let mut out = String::new();
            for c in &chars {
                let _ = writeln!(out, "{c}{}", if c.is_trivial() { " (trivial)" } else { "" });
            }
            Ok(Output::ok(out))
        }
        Command::Betti { input, group, images } => {
            let p = load(input)?;
            let g: FiniteAbelianGroup = group.parse()?;
            let imgs = parse_images(&p, &g, images)?;
            let alpha = validate_epimorphism(&p, &g, imgs)?;
            let breakdown = betti_cover_breakdown(&alpha)?;
            let oracle = betti_cover_oracle(&alpha)?;
            let agree = breakdown.betti == oracle && breakdown.betti == breakdown.jumping_sum;
            let text = if cli.json {
                to_json(&serde_json::json!({
                    "group": g.orders(),
                    "images": alpha.images(),
                    "formula": breakdown.betti,
                    "jumping_sum": breakdown.jumping_sum,
                    "oracle": oracle,
                    "agree": agree,
                }))?
            } else {
                format!("b1 = {} (formula) / {} (oracle)\n", breakdown.betti, oracle)
            };
            if !agree {
                eprintln!(
                    "error: formula ({}), jumping-locus sum ({}) and oracle ({}) disagree",
                    breakdown.betti, breakdown.jumping_sum, oracle
                );
                return Ok(Output {
                    text,
                    code: EXIT_INTERNAL,
                });
            }
            Ok(Output::ok(text))
        }
        Command::KahlerCheck {
            input,
            max_degree,
            max_order,
            base_relator,
        } => {
            let p = load(input)?;
            if *max_degree == 0 || *max_order == 0 {
                return Err(Failure::Input("--max-degree and --max-order must be >= 1".into()));
            }
            let hint = base_relator.as_deref().map(|w| p.parse_word(w)).transpose()?;
            let report = kahler_obstruction_report(&p, *max_degree, *max_order, hint.as_ref())?;
            let code = if report.status == ObstructionStatus::Obstructed {
                EXIT_OBSTRUCTED
            } else {
                0
            };
            if cli.json {
                return Ok(Output {
                    text: to_json(&report)?,
                    code,
                });
            }
            let mut s = format!("status = {} (within bounds)\n", report.status);
            let _ = writeln!(
                s,
                "bounds = max_degree {}, max_order {}",
                report.bounds.max_degree, report.bounds.max_order
            );
            if let Some(base) = &report.base_relator {
                let _ = writeln!(s, "base relator = {base}");
            }
            for (i, pr) in report.pencils.iter().enumerate() {
                let divisors = if pr.divisors.is_empty() {
                    "none".to_string()
                } else {
                    pr.divisors.join(", ")
                };
                let _ = writeln!(s, "p_{} = {}", i + 1, pr.polynomial);
                let _ = writeln!(s, "  binomial divisors: {divisors}");
            }
            if !report.torsion_points.is_empty() {
                let pts: Vec<String> = report.torsion_points.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "torsion points = {}", pts.join("; "));
            }
            let _ = writeln!(s, "{}", report.justification);
            Ok(Output { text: s, code })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(EXIT_INPUT);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
