use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod output;

use config::{Config, Format};

#[derive(Parser, Debug)]
#[command(name = "taut", version, about = "Exact intersection numbers on moduli spaces of stable curves")]
struct Cli {
    /// Psi-integral cache file (plain text).
    #[arg(long, env = "TAUT_CACHE", global = true)]
    cache: Option<PathBuf>,

    /// Ignore the cache even if a path is configured.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Output format (default: json for `verify`, text otherwise).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also render values as decimals with this many digits.
    #[arg(long, global = true)]
    decimal: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbifold Euler characteristic chi_{g,n}.
    Chi {
        g: u32,
        n: usize,
        #[arg(long, value_enum, default_value_t = ChiRouteArg::All)]
        route: ChiRouteArg,
    },
    /// Masur-Veech volume MV_{g,n} / pi^{6g-6+2n}.
    Mv {
        g: u32,
        n: usize,
        #[arg(long, value_enum, default_value_t = MvRouteArg::All)]
        route: MvRouteArg,
    },
    /// int lambda_i psi_1^{d_1} ... psi_n^{d_n}.
    Hodge {
        g: u32,
        n: usize,
        i: u32,
        /// Comma-separated psi exponents, one per marked point.
        #[arg(long, value_delimiter = ',')]
        psi: Vec<u32>,
        /// Evaluate through the Omega graph sum instead of the Hodge engine.
        #[arg(long)]
        graph: bool,
    },
    /// int Omega^{[x]}(r, s; a) psi^d prod kappa.
    Omega {
        g: u32,
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_delimiter = ',')]
        psi: Vec<u32>,
        /// Comma-separated kappa indices, e.g. `1,1,2` for kappa_1^2 kappa_2.
        #[arg(long, value_delimiter = ',')]
        kappa: Vec<u32>,
    },
    /// Run the identity checks over a parameter grid.
    Verify {
        #[arg(long, value_enum, default_value_t = GridArg::Small)]
        grid: GridArg,
        #[arg(long)]
        dimmax: Option<i64>,
        #[arg(long)]
        rmax: Option<u32>,
    },
    /// chi and MV by every route for all stable (g, n) within bounds.
    Table {
        #[arg(long, default_value_t = 3)]
        gmax: u32,
        #[arg(long, default_value_t = 4)]
        dimmax: i64,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ChiRouteArg {
    HarerZagier,
    HodgeSum,
    Omega,
    All,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MvRouteArg {
    Omega,
    HodgeSum,
    All,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GridArg {
    Tiny,
    Small,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let config = Config {
        cache: if cli.no_cache { None } else { cli.cache.clone() },
        format: cli.format.unwrap_or(match cli.command {
            Command::Verify { .. } => Format::Json,
            _ => Format::Text,
        }),
        threads: cli.threads,
        decimal: cli.decimal,
    };
    match commands::run(&config, cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
