use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "vertexkit", version, about = "Exact computations for formal group laws, vertex structures, modular forms, MLDEs, Pierce bundles and lattice theta series")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Truncation order (for `mlde`, the order of the equation)
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Number of series terms
    #[arg(long, global = true)]
    pub terms: Option<usize>,

    /// Coefficient ring `Q`, `Z`, `Z/n`; for `pierce`, a finite ring such as `Z/12` or `Z/2xZ/3`
    #[arg(long, global = true)]
    pub ring: Option<String>,

    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV
    #[arg(long, global = true)]
    pub csv: bool,

    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Seed for sampled test elements
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write a run manifest here
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// JSON config whose keys override the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Formal group laws
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Hasse-Schmidt derivations and vertex structures
    #[command(subcommand)]
    Hs(HsCmd),
    /// Modular forms as q-expansions
    #[command(subcommand)]
    Mf(MfCmd),
    /// Modular linear differential equations
    #[command(subcommand)]
    Mlde(MldeCmd),
    /// Finite rings and Pierce bundles
    #[command(subcommand)]
    Pierce(PierceCmd),
    /// Lattice theta series
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Re-run a manifest and compare output digests
    Replay {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum BuiltinLaw {
    Additive,
    Multiplicative,
}

#[derive(Args, Debug, Clone)]
pub struct FglSource {
    /// Built-in law
    #[arg(long, value_enum, conflicts_with_all = ["file", "log_seed"])]
    pub builtin: Option<BuiltinLaw>,
    /// Law in JSON form `{ring, order, monomials}`
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Law generated from a seeded random logarithm (rational only)
    #[arg(long)]
    pub log_seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum FglCmd {
    /// Check identity, associativity and commutativity
    Verify(FglSource),
    /// Formal inverse iota(X) with F(X, iota(X)) = 0
    Inverse(FglSource),
    /// exp(log X + log Y) for a logarithm
    FromLog {
        /// Coefficients of X, X^2, ... as `p/q`, comma separated; the first must be 1
        #[arg(long, conflicts_with_all = ["log_seed", "multiplicative"])]
        log: Option<String>,
        #[arg(long)]
        log_seed: Option<u64>,
        /// Use log(1 + X)
        #[arg(long)]
        multiplicative: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct HsSetup {
    #[command(flatten)]
    pub law: FglSource,
    /// Carrier degree cap M (the carrier is k[t] known through t^M)
    #[arg(long, default_value_t = 12)]
    pub degree_cap: usize,
    /// Derivation depth (default min(M, order, 8))
    #[arg(long)]
    pub depth: Option<usize>,
    /// Random test elements beyond t, t^2, t^3
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
    /// Which derivation to check
    #[arg(long, value_enum, default_value_t = DerivationKind::Translation)]
    pub derivation: DerivationKind,
    /// Law whose translation derivation is used (defaults to the law under test)
    #[arg(long, value_enum)]
    pub translate_by: Option<BuiltinLaw>,
    /// Perturb D_m(t) by `--mutate-delta` at this m
    #[arg(long)]
    pub mutate_m: Option<usize>,
    /// Integer coefficients of the perturbation, comma separated
    #[arg(long, default_value = "1")]
    pub mutate_delta: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum DerivationKind {
    Translation,
    Zero,
}

#[derive(Subcommand, Debug)]
pub enum HsCmd {
    /// D_i o D_j = C(i+j, i) D_(i+j)
    CheckIterative(HsSetup),
    /// The HS F-derivation identity
    CheckFDerivation(HsSetup),
    /// F-weak associativity on generators
    CheckAssoc(HsSetup),
    /// Exploratory multiplier identity for weak associativity
    Conjecture34 {
        #[command(flatten)]
        setup: HsSetup,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Compare the F-derivation and weak-associativity checkers over laws and mutations
    Harness {
        #[arg(long, default_value_t = 12)]
        degree_cap: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        mutations: usize,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        /// Seeds of the random logarithms added to F_a and F_m
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        log_seeds: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MfCmd {
    /// E_k for k = 2, 4, 6
    Eisenstein {
        #[arg(long)]
        weight: i64,
    },
    /// eta^r
    Eta {
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        power: i64,
    },
    /// j = E_4^3 / Delta
    J,
    /// Serre derivative of a named form (E2, E4, E6, delta, j, eta^r)
    Serre {
        #[arg(long)]
        form: String,
    },
    /// Numerical value at tau
    Eval {
        #[arg(long)]
        form: String,
        /// `re,im` with im > 0
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MldeParams {
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub kappa: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub lambda: String,
    /// Comma-separated exponents to fit instead of kappa/lambda
    #[arg(long, allow_hyphen_values = true)]
    pub exponents: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MldeCmd {
    /// Indicial polynomial
    Indicial {
        #[command(flatten)]
        params: MldeParams,
    },
    /// Frobenius solution at an indicial root
    Solve {
        #[command(flatten)]
        params: MldeParams,
        #[arg(long, allow_hyphen_values = true)]
        exponent: String,
    },
    /// Apply the operator to a series (default: the Frobenius solution)
    Residual {
        #[command(flatten)]
        params: MldeParams,
        #[arg(long, allow_hyphen_values = true)]
        exponent: String,
        /// Comma-separated coefficients of the series to test
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
    /// Scan exponent grids for character-like solutions
    Scan {
        /// Largest denominator on the grid
        #[arg(long, default_value_t = 60)]
        dmax: u64,
        /// Smallest vacuum exponent
        #[arg(long, allow_hyphen_values = true, default_value = "-1/2")]
        lower: String,
        /// Optional cap ln(1 + a_n) <= bound sqrt(n)
        #[arg(long)]
        growth_bound: Option<f64>,
        /// Also emit rejected grid points
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum PierceCmd {
    /// Idempotents, stalks and predicates for one ring
    Analyze {
        /// Table ring JSON `{size, add, mul}`
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// All Z/n for 2 <= n <= max
    Sweep {
        #[arg(long, default_value_t = 500)]
        max_n: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArg {
    /// Built-in lattice: A1, Z, E8, D16plus, E8_plus_E8, sqrt2_E8
    #[arg(long, conflicts_with = "lattice_file")]
    pub lattice: Option<String>,
    /// Lattice JSON `{rank, gram}` or `{builtin}`
    #[arg(long)]
    pub lattice_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ThetaCmd {
    /// theta_L to q^N
    Genus1 {
        #[command(flatten)]
        lattice: LatticeArg,
    },
    /// Genus-two table at bounds (a_max, b_max)
    Genus2 {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 1)]
        a_max: u64,
        #[arg(long, default_value_t = 1)]
        b_max: u64,
        /// Cap on enumerated pairs
        #[arg(long, default_value_t = vertexkit::lattice_theta::DEFAULT_PAIR_BUDGET)]
        budget: u64,
    },
    /// theta_L / eta^rank
    Character {
        #[command(flatten)]
        lattice: LatticeArg,
    },
    /// Genus-one and genus-two comparison of two lattices
    Compare {
        #[command(flatten)]
        lattice: LatticeArg,
        /// The second lattice (built-in name)
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 1)]
        a_max: u64,
        #[arg(long, default_value_t = 1)]
        b_max: u64,
    },
}
