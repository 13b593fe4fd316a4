use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "coxspec",
    version,
    about = "Separating functions, graph spectra and Coxeter dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Separating functions rho_r and their solvers
    #[command(subcommand)]
    Rho(RhoCmd),
    /// The sets Sigma_r and the Coxeter map on alpha
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Graph spectra, classification and star shapes
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Reflections, Coxeter transforms, roots and characters
    #[command(subcommand)]
    Coxeter(CoxeterCmd),
    /// Index of star-shaped graphs from rho_r
    #[command(subcommand)]
    Star(StarCmd),
    /// Built-in verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Output {
    /// Emit one JSON document instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SequenceArg {
    U,
    V,
    A,
}

#[derive(Debug, Subcommand)]
pub enum RhoCmd {
    /// rho_r(n), or rho_r(v) for a branch vector
    #[command(group(ArgGroup::new("what").required(true).args(["n", "branches"])))]
    Eval {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        branches: Option<String>,
        /// Exact rational arithmetic
        #[arg(long, conflicts_with = "closed_form")]
        exact: bool,
        /// Closed form, valid for r > 4
        #[arg(long, requires = "n")]
        closed_form: bool,
        #[command(flatten)]
        out: Output,
    },
    /// All branch vectors with rho_r(v) = r
    Solve {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        smax: Option<usize>,
        #[arg(long)]
        nmax: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Dynkin / extended Dynkin / hyperbolic by exact rho_4
    Classify {
        #[arg(long)]
        branches: String,
        #[command(flatten)]
        out: Output,
    },
    /// A term of the u-, v- or a-sequence
    Term {
        #[arg(long, value_enum)]
        kind: SequenceArg,
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum SigmaCmd {
    /// Discrete series, band and reflected sets
    Sets {
        #[arg(long = "r")]
        r: String,
        /// Largest series index
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Parts of Sigma_r containing alpha
    Member {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 50)]
        k: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Phi^{+k}(alpha) in closed and recurrent form
    Phi {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Index and principal eigenvector by power iteration
    Index {
        /// Graph file (edge list or JSON), `-` for standard input
        graph: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// All adjacency eigenvalues by Jacobi rotations
    Spectrum {
        graph: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Smith classification with structural name
    Classify {
        graph: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Print a graph, or build the star on a branch vector
    #[command(group(ArgGroup::new("source").required(true).args(["graph", "star"])))]
    Emit {
        graph: Option<String>,
        #[arg(long)]
        star: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Branch vector of a star-shaped tree
    Branches {
        graph: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoxeterCmd {
    /// One reflection
    Reflect {
        graph: String,
        #[arg(long)]
        vector: String,
        /// Vertex label
        #[arg(long)]
        at: String,
        #[command(flatten)]
        out: Output,
    },
    /// c_t(x) for -tmax <= t <= tmax
    Orbit {
        graph: String,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 6)]
        tmax: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Odd and even standard vectors
    Standard {
        graph: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check the action of c_t on the standard vectors
    #[command(name = "verify-standard", alias = "verify-eq32")]
    VerifyStandard {
        graph: String,
        #[arg(long, default_value_t = 10)]
        tmax: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Real roots by reflection closure of the simple roots
    Roots {
        graph: String,
        /// Largest absolute coordinate kept
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        /// Largest number of roots stored
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Print every root, not only the count
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Standard character of a singular root
    Character {
        graph: String,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        tmax: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Singular / regular / undetermined verdict for a nonnegative vector
    ClassifyRoot {
        graph: String,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        tmax: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum StarCmd {
    /// Squared index by bisection on r - rho_r(v)
    Index {
        #[arg(long)]
        branches: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Compare rho_r(v) with r from power iteration
    Verify {
        #[arg(long)]
        branches: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Analytic principal eigenvector from the v-sequence
    Vector {
        #[arg(long)]
        branches: String,
        /// Squared index; solved for when omitted
        #[arg(long = "r")]
        r: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Both checks over every branch vector in a box
    Sweep {
        #[arg(long, default_value_t = 5)]
        smax: usize,
        #[arg(long, default_value_t = 6)]
        nmax: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Run every identity check
    All {
        #[command(flatten)]
        out: Output,
    },
}
