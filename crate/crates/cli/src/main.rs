use clap::{Args, Parser, Subcommand};
use genus_pls::embedding::EmbeddingScheme;
use genus_pls::pls::mutate::{campaign, klein_attack, trial, Operator};
use genus_pls::pls::{check_centrally, prove, run_verifier, text, unanimous, Assignment, ProveError, Scheme};
use genus_pls::surgery::{self, unfold, SurgeryError};
use genus_pls::{parse_scheme, SurfaceKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "genus-pls", version, about = "Embed, unfold and locally certify graphs of bounded genus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex, edge and face counts and the surface of an embedding.
    Genus {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfold onto the sphere and report the stages.
    Unfold {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Full trace: objects, splits, special walks, unfolded scheme.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Certify an embedding and run the distributed verifier on it.
    Certify {
        input: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-vertex certificate dump.
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Per-vertex verdicts.
        #[arg(long)]
        verdicts: Option<PathBuf>,
    },
    /// Corrupt honest certificates and check that every corruption is caught.
    Fuzz {
        input: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random embedded graph on a given surface, in the embedding file format.
    Gen {
        #[arg(long)]
        n: u32,
        /// Genus, or demigenus with --nonorientable.
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nonorientable: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// Bound to certify: genus, or Euler genus with --nonorientable.
    #[arg(long, conflicts_with = "auto")]
    k: Option<u32>,
    /// Use the smallest bound the embedding meets (the default).
    #[arg(long)]
    auto: bool,
    /// Certify Euler genus on any surface rather than orientable genus.
    #[arg(long)]
    nonorientable: bool,
}

impl TargetArgs {
    fn scheme(&self, kind: SurfaceKind) -> Scheme {
        let euler = 2 - kind.euler_characteristic();
        match (self.k, self.nonorientable) {
            (Some(k), false) => Scheme::orientable(k),
            (Some(k), true) => Scheme::non_orientable(k),
            (None, true) => Scheme::non_orientable(euler as u32),
            (None, false) if kind.orientable => Scheme::orientable(kind.genus),
            // An orientable-genus bound can never hold; certify what is true.
            (None, false) => Scheme::non_orientable(euler as u32),
        }
    }
}

enum Failure {
    Reject(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Reject(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_scheme(path: &Path) -> Result<EmbeddingScheme, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let s = parse_scheme(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if !s.graph().is_connected() {
        return Err(Failure::Input(format!("{}: graph is not connected", path.display())));
    }
    Ok(s)
}

fn surface_of(s: &EmbeddingScheme) -> Result<SurfaceKind, Failure> {
    s.euler_genus().map_err(|e| Failure::Input(e.to_string()))
}

fn emit(path: Option<&Path>, body: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn surgery_failure(e: SurgeryError) -> Failure {
    match e {
        SurgeryError::Embedding(e) => Failure::Input(e.to_string()),
        e => Failure::Internal(e.to_string()),
    }
}

fn honest(s: &EmbeddingScheme, target: Scheme) -> Result<Assignment, Failure> {
    prove(s, target).map_err(|e| match e {
        ProveError::BeyondScheme { found } => Failure::Reject(format!("embedding is {found}, outside {target}")),
        ProveError::Surgery(e) => surgery_failure(e),
        e => Failure::Internal(e.to_string()),
    })
}

fn genus(input: &Path, out: Option<&Path>) -> Outcome {
    let s = read_scheme(input)?;
    let kind = surface_of(&s)?;
    let faces = s.trace_faces().map_err(|e| Failure::Input(e.to_string()))?.len();
    let body = format!("vertices {} edges {} faces {faces}\n{kind}, faces {faces}\n", s.n(), s.m());
    emit(out, &body)
}

fn unfold_cmd(input: &Path, out: Option<&Path>, trace_out: Option<&Path>) -> Outcome {
    let s = read_scheme(input)?;
    let trace = unfold(&s).map_err(surgery_failure)?;
    let mut body = format!("{}\nstages {}\n", trace.params.surface(), trace.depth());
    for (i, stage) in trace.stages.iter().enumerate() {
        let kind = stage.euler_genus().map_err(|e| Failure::Internal(e.to_string()))?;
        let step = match i {
            0 => "input".to_string(),
            _ => format!("{} {}", trace.steps[i - 1].kind, trace.steps[i - 1].index),
        };
        let _ = writeln!(body, "stage {i} {step}: euler genus {} ({kind})", 2 - kind.euler_characteristic());
    }
    let back = surgery::refold(&trace).map_err(surgery_failure)?;
    let refolded = back.euler_genus().map_err(|e| Failure::Internal(e.to_string()))?;
    if refolded != trace.params.surface() {
        return Err(Failure::Internal(format!("refolded onto {refolded}")));
    }
    let _ = writeln!(body, "refolds to {refolded}");
    if let Some(p) = trace_out {
        emit(Some(p), &surgery::text::format_trace(&trace))?;
    }
    emit(out, &body)
}

fn ceil_log2(n: usize) -> u32 {
    usize::BITS - n.saturating_sub(1).leading_zeros()
}

fn certify(
    input: &Path,
    target: &TargetArgs,
    out: Option<&Path>,
    certs: Option<&Path>,
    verdicts_out: Option<&Path>,
) -> Outcome {
    let s = read_scheme(input)?;
    let scheme = target.scheme(surface_of(&s)?);
    let a = match honest(&s, scheme) {
        Ok(a) => a,
        Err(Failure::Reject(why)) => {
            emit(out, &format!("scheme {scheme}\nreject: {why}\n"))?;
            return Err(Failure::Reject(why));
        }
        Err(e) => return Err(e),
    };
    let g = s.graph();
    let verdicts = run_verifier(&g, scheme, &a);
    let central = check_centrally(&g, scheme, &a);
    let sizes: Vec<usize> = a.values().map(|b| b.len()).collect();
    let max = sizes.iter().copied().max().unwrap_or(0);
    let total: usize = sizes.iter().sum();
    let log = ceil_log2(g.n()).max(1);
    let mut body = format!("scheme {scheme}\nvertices {}\n", g.n());
    let _ = writeln!(body, "bits max {max} mean {:.1} total {total}", total as f64 / sizes.len().max(1) as f64);
    let _ = writeln!(body, "log2n {log} max/log2n {:.2}", max as f64 / f64::from(log));
    let accepted = unanimous(&verdicts);
    let _ = writeln!(body, "distributed {}", if accepted { "accept" } else { "reject" });
    let _ = writeln!(body, "central {}", if central.is_ok() { "accept" } else { "reject" });
    if let Some(p) = certs {
        emit(Some(p), &text::format_assignment(&a))?;
    }
    if let Some(p) = verdicts_out {
        emit(Some(p), &text::format_verdicts(&verdicts))?;
    }
    emit(out, &body)?;
    if accepted != central.is_ok() {
        return Err(Failure::Internal("distributed and central verdicts differ".into()));
    }
    if !accepted {
        return Err(Failure::Internal("honest certificates rejected".into()));
    }
    Ok(())
}

fn fuzz(input: &Path, target: &TargetArgs, count: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let s = read_scheme(input)?;
    let scheme = target.scheme(surface_of(&s)?);
    let a = honest(&s, scheme)?;
    let g = s.graph();
    let c = campaign(&g, scheme, &a, count, seed);
    let mut body = format!("scheme {scheme}\nseed {seed}\nmutants {}\n", c.trials.len());
    let by_op = c.by_operator();
    for op in Operator::ALL {
        if let Some((tried, caught)) = by_op.get(&op) {
            let _ = writeln!(body, "{op} {caught}/{tried}");
        }
    }
    let mut slipped = c.trials.len() - c.rejected();
    let mut disagreements = c.disagreements();
    match klein_attack(&a) {
        Some(m) => {
            let t = trial(&g, scheme, Operator::ChainReversal, &m);
            slipped += usize::from(!t.rejected);
            disagreements += usize::from(t.rejected != t.central_rejected);
            let _ = writeln!(body, "klein-attack {}", if t.rejected { "rejected" } else { "accepted" });
        }
        None => body.push_str("klein-attack not applicable\n"),
    }
    let _ = writeln!(body, "rejected {}/{}\ndisagreements {disagreements}", c.rejected(), c.trials.len());
    emit(out, &body)?;
    if slipped > 0 || disagreements > 0 {
        return Err(Failure::Internal(format!("{slipped} mutants accepted, {disagreements} disagreements")));
    }
    Ok(())
}

fn gen(n: u32, genus: u32, seed: u64, nonorientable: bool, out: Option<&Path>) -> Outcome {
    if n < 4 {
        return Err(Failure::Input("--n must be at least 4".into()));
    }
    let kind = SurfaceKind { orientable: !nonorientable, genus };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = genus_pls::generate::random_embedded(n, kind, &mut rng);
    let body = format!("# {kind}, seed {seed}\n{}", genus_pls::format_scheme(&s));
    emit(out, &body)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Genus { input, out } => genus(&input, out.as_deref()),
        Command::Unfold { input, out, trace } => unfold_cmd(&input, out.as_deref(), trace.as_deref()),
        Command::Certify { input, target, out, certs, verdicts } => {
            certify(&input, &target, out.as_deref(), certs.as_deref(), verdicts.as_deref())
        }
        Command::Fuzz { input, target, count, seed, out } => fuzz(&input, &target, count, seed, out.as_deref()),
        Command::Gen { n, genus, seed, nonorientable, out } => gen(n, genus, seed, nonorientable, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Reject(m) | Failure::Input(m) | Failure::Internal(m)) = &f;
            eprintln!("genus-pls: {m}");
            ExitCode::from(f.code())
        }
    }
}
