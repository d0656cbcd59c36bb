mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Outcome;

/// Exact computations in orbifold Tate K-theory of finite groups.
#[derive(Parser)]
#[command(name = "tatek", version)]
struct Cli {
    /// Attach decimal approximations next to exact values.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite groups given by permutation generators.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Iterated inertia groupoids of pt//G.
    Inertia {
        group: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Groupoid equivalence checks on pt//G.
    Gpd {
        #[command(subcommand)]
        command: GpdCommand,
    },
    /// Operators on Tate K-theory elements.
    Tate {
        #[command(subcommand)]
        command: TateCommand,
    },
    /// McKay-Thompson series tools.
    Moonshine {
        #[command(subcommand)]
        command: MoonshineCommand,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, classes and centralizers.
    Info { group: PathBuf },
}

#[derive(Subcommand)]
enum GpdCommand {
    /// Checks that E_k: Φ_k(pt//G) → Λ(pt//G)[ξ^{1/k}] is an equivalence.
    VerifyEk {
        group: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Checks that Q: S(Φ(pt//G)) → Λ(S(pt//G)) is an equivalence through degree N.
    VerifyQ {
        group: PathBuf,
        #[arg(long)]
        nmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Product,
    Hecke,
    Both,
}

#[derive(Subcommand)]
enum TateCommand {
    /// Checks the rotation condition.
    Validate { element: PathBuf },
    /// β_k.
    Beta {
        #[arg(short)]
        k: usize,
        element: PathBuf,
        /// Required output precision: refuse unless known below q^Q.
        #[arg(long)]
        order: Option<usize>,
    },
    /// The Hecke operator T_m, truncated below q^Q.
    Hecke {
        #[arg(short)]
        m: usize,
        #[arg(long)]
        order: usize,
        element: PathBuf,
    },
    /// Total symmetric power through t^T, each coefficient below q^Q.
    Sympow {
        #[arg(long)]
        torder: usize,
        #[arg(long)]
        qorder: usize,
        #[arg(long, value_enum, default_value_t = Via::Both)]
        via: Via,
        element: PathBuf,
    },
    /// Induction from a subgroup H (the element's group) to G.
    Induce {
        element: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        amb: PathBuf,
    },
}

#[derive(Subcommand)]
enum MoonshineCommand {
    /// j − 744 from E₄³/Δ, known below q^N.
    J {
        #[arg(long)]
        order: usize,
    },
    /// Faber polynomials Φ_1..Φ_M of the identity-class series.
    Faber {
        element: PathBuf,
        #[arg(long)]
        mmax: usize,
    },
    /// Replicability through m ≤ M and q^Q.
    Replicable {
        element: PathBuf,
        #[arg(long)]
        mmax: usize,
        #[arg(long)]
        qorder: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, commands::CliError> {
    match &cli.command {
        Command::Group { command: GroupCommand::Info { group } } => commands::group_info(group),
        Command::Inertia { group, n } => commands::inertia(group, *n),
        Command::Gpd { command } => match command {
            GpdCommand::VerifyEk { group, k } => commands::verify_ek(group, *k),
            GpdCommand::VerifyQ { group, nmax } => commands::verify_q(group, *nmax),
        },
        Command::Tate { command } => match command {
            TateCommand::Validate { element } => commands::tate_validate(element),
            TateCommand::Beta { k, element, order } => commands::tate_beta(element, *k, *order),
            TateCommand::Hecke { m, order, element } => commands::tate_hecke(element, *m, *order),
            TateCommand::Sympow { torder, qorder, via, element } => {
                let via = match via {
                    Via::Product => tatek::tate::SymmetricVia::Product,
                    Via::Hecke => tatek::tate::SymmetricVia::Hecke,
                    Via::Both => tatek::tate::SymmetricVia::Both,
                };
                commands::tate_sympow(element, *torder, *qorder, via)
            }
            TateCommand::Induce { element, sub, amb } => commands::tate_induce(element, sub, amb),
        },
        Command::Moonshine { command } => match command {
            MoonshineCommand::J { order } => commands::moonshine_j(*order),
            MoonshineCommand::Faber { element, mmax } => commands::moonshine_faber(element, *mmax),
            MoonshineCommand::Replicable { element, mmax, qorder } => {
                commands::moonshine_replicable(element, *mmax, *qorder)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            output::emit(outcome.body, cli.approx);
            ExitCode::from(if outcome.verified { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
