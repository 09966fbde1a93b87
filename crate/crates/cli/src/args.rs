use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permuton_lab::perm::{PatternClass, Permutation, DEFAULT_ENUMERATION_CAP};
use permuton_lab::rng::DEFAULT_SEED;
use permuton_lab::spectra::DensityKind;

#[derive(Debug, Parser)]
#[command(
    name = "permuton-lab",
    version,
    about = "Pattern densities of permutations and permutons, with reproducible experiments",
    long_about = "Pattern densities of permutations and permutons, with reproducible experiments.\n\n\
Permutations use one-line notation with 1-based values, e.g. 2,4,1,3. Lists of \
permutations are separated by ';'. Permutons are read from JSON files such as \
{\"type\":\"stepup\",\"sigma\":\"2,4,3,1\",\"weights\":[\"1/6\",\"1/4\",\"1/12\",\"1/4\"]}.\n\n\
Exit status: 0 on success, 1 on usage or input errors, 2 when a search or experiment fails."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format; human and tsv are rendered from the JSON document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Occ,
    Mon,
    Hom,
}

impl From<Kind> for DensityKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Occ => DensityKind::Occurrence,
            Kind::Mon => DensityKind::Monomorphism,
            Kind::Hom => DensityKind::Homomorphism,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    All,
    Indecomposable,
    NonTrivialIndecomposable,
    Simple,
    Thorough,
}

impl From<Class> for PatternClass {
    fn from(c: Class) -> Self {
        match c {
            Class::All => PatternClass::All,
            Class::Indecomposable => PatternClass::Indecomposable,
            Class::NonTrivialIndecomposable => PatternClass::NonTrivialIndecomposable,
            Class::Simple => PatternClass::Simple,
            Class::Thorough => PatternClass::Thorough,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    OccToMon,
    MonToOcc,
}

/// Permutations separated by `;`.
#[derive(Debug, Clone)]
pub struct PermutationList(pub Vec<Permutation>);

impl std::str::FromStr for PermutationList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(';')
            .enumerate()
            .map(|(i, p)| p.trim().parse::<Permutation>().map_err(|e| format!("entry {}: {e}", i + 1)))
            .collect::<Result<_, _>>()
            .map(PermutationList)
    }
}

/// Orders separated by `,`.
#[derive(Debug, Clone)]
pub struct OrderList(pub Vec<usize>);

impl std::str::FromStr for OrderList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()
            .map(OrderList)
    }
}

/// Either a permutation or a permuton file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Text permutation in one-line notation.
    #[arg(long = "in", value_name = "PERM")]
    pub perm: Option<Permutation>,

    /// Permuton JSON file.
    #[arg(long, value_name = "FILE")]
    pub permuton: Option<PathBuf>,
}

/// Where an f-bullet parameter comes from: a JSON file, or a fresh build.
#[derive(Debug, Args)]
pub struct ParamSource {
    /// Parameter JSON file as printed by `fbullet`.
    #[arg(long, value_name = "FILE")]
    pub param: Option<PathBuf>,

    /// Number of terms when building a parameter.
    #[arg(long = "terms", default_value_t = 2)]
    pub terms: usize,

    /// Order of the first pattern when building a parameter.
    #[arg(long, default_value_t = 2)]
    pub q_start: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count occurrences, monomorphisms and homomorphisms of a pattern in a permutation.
    Count {
        #[arg(long, value_name = "PERM")]
        pattern: Permutation,
        #[arg(long = "in", value_name = "PERM")]
        text: Permutation,
    },

    /// Exact density of a pattern in a permutation or a permuton.
    Density {
        #[arg(long, value_name = "PERM")]
        pattern: Permutation,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Kind::Occ)]
        kind: Kind,
    },

    /// List the permutations of a class up to a given order, in canonical order
    /// (inversion count, then order, then lexicographic).
    Enumerate {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = Class::NonTrivialIndecomposable)]
        class: Class,
        /// Largest order that may be enumerated.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },

    /// List the compressive partitions of a pattern and their quotients.
    Compress {
        #[arg(long, value_name = "PERM")]
        tau: Permutation,
    },

    /// Sample random permutations from a permuton.
    Sample {
        #[arg(long, value_name = "FILE")]
        permuton: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },

    /// Exact density of a non-trivial indecomposable pattern in a step-up permuton,
    /// summed over compressive partitions.
    StepupDensity {
        #[arg(long, value_name = "PERM")]
        tau: Permutation,
        #[arg(long, value_name = "PERM")]
        sigma: Permutation,
        /// Segment masses, comma separated, as a/b or decimals.
        #[arg(long)]
        weights: String,
    },

    /// Exact density of a non-trivial indecomposable pattern in a direct sum,
    /// as the mass-weighted sum of block densities.
    DsumDensity {
        #[arg(long, value_name = "PERM")]
        tau: Permutation,
        /// JSON file holding a direct sum.
        #[arg(long, value_name = "FILE")]
        permuton: PathBuf,
    },

    /// Monte Carlo density of a pattern in a permuton, with the exact value for comparison.
    McDensity {
        #[arg(long, value_name = "PERM")]
        tau: Permutation,
        #[arg(long, value_name = "FILE")]
        permuton: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Kind::Occ)]
        kind: Kind,
    },

    /// Matrix converting occurrence densities into monomorphism densities.
    Matrix {
        #[arg(long)]
        q: usize,
    },

    /// Density vector over the canonical indecomposable patterns of order at most q.
    Vector {
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Kind::Occ)]
        kind: Kind,
        /// Change of basis applied to the computed vector.
        #[arg(long, value_enum)]
        transform: Option<Transform>,
    },

    /// Search for step-up permutons with linearly independent density vectors.
    Span {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 256)]
        attempts: usize,
        /// Floating-point lower bound on |det V|; 0 keeps only the exact test.
        #[arg(long, default_value_t = permuton_lab::spectra::DEFAULT_DET_THRESHOLD)]
        threshold: f64,
    },

    /// Jacobian of the map from direct-sum masses to density vectors, with a
    /// finite-difference check.
    Jacobian {
        #[arg(long)]
        q: usize,
        /// Point as comma-separated rationals; defaults to the centre of the box.
        #[arg(long)]
        x: Option<String>,
        /// Spanning system JSON as printed by `span`; searched from the seed otherwise.
        #[arg(long, value_name = "FILE")]
        system: Option<PathBuf>,
    },

    /// Find a point where the density map has a non-singular Jacobian,
    /// certified by an exact determinant.
    Certify {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },

    /// Search for two direct sums of thorough step-ups with equal target densities.
    Borsuk {
        /// Target patterns separated by ';'.
        #[arg(long, conflicts_with = "k")]
        targets: Option<PermutationList>,
        /// Use the first k canonical indecomposable patterns of order below n as targets.
        #[arg(long)]
        k: Option<usize>,
        /// Order of the thorough family.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },

    /// Build (or load) a truncated f-bullet parameter and optionally evaluate it.
    Fbullet {
        #[command(flatten)]
        param: ParamSource,
        /// Permutation to evaluate f-bullet on.
        #[arg(long = "in", value_name = "PERM")]
        perm: Option<Permutation>,
    },

    /// Estimate f-bullet of a permutation from random induced subpermutations.
    Tester {
        #[command(flatten)]
        param: ParamSource,
        #[command(flatten)]
        source: Source,
        /// Order of the sampled permutation when the source is a permuton.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        n0: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },

    /// Compare low-order density gaps with f-bullet gaps for random permutations
    /// drawn from a separating pair of permutons.
    Forcing {
        #[command(flatten)]
        param: ParamSource,
        /// Term index (1-based); defaults to the last term.
        #[arg(long)]
        index: Option<usize>,
        /// Sample orders separated by ','.
        #[arg(long, default_value = "200,500,1000")]
        orders: OrderList,
        #[arg(long, default_value_t = 30)]
        reps: usize,
    },

    /// Fractions of indecomposable and simple permutations among uniform random ones.
    Stats {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}
