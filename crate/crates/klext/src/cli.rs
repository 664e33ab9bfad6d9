//! Command-line front end: query dispatch, table and JSON output, cache
//! lifecycle, and the verification suites as runnable subcommands.
//!
//! Exit codes: `0` success, `1` input or membership error, `2` refusal
//! because a hypothesis (KL-goodness) is not known to hold, `3` internal
//! assertion failure (a mathematical property the formulas guarantee did
//! not hold; that is a bug, not a usage problem).

use std::collections::BTreeMap;
use std::io::Write as IoWrite;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alcove::{self, BlockData};
use crate::coxeter::{CoxeterGroup, GroupElement, Word};
use crate::ext::{self, ExtError, KlGoodGate};
use crate::klpoly::{KLTable, KlContext, KlError, TableKey};
use crate::rootsys::{build_root_system, TypeLabel, Weight};

/// Hard cap on length bounds; interval sizes grow fast enough that larger
/// queries should be a deliberate choice.
const LENGTH_CAP: usize = 16;

pub const ENV_CACHE: &str = "KLEXT_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "klext",
    version,
    about = "Ext dimensions, characters and decomposition numbers in blocks of a quantum group at a root of unity",
    after_help = "Exit codes: 0 ok, 1 input error, 2 hypothesis refusal (see --assume-kl-good), 3 internal assertion failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct GroupOpts {
    /// Root-system type label: A, B, C, D, E, F or G.
    #[arg(long = "type", value_name = "LABEL")]
    type_label: String,
    /// Rank of the root system.
    #[arg(long)]
    rank: usize,
    /// Order of the root of unity (the translation scale of the affine
    /// Weyl group).
    #[arg(long)]
    ell: i64,
}

#[derive(Debug, Args)]
struct CommonOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// KL-table cache file; defaults to the KLEXT_CACHE environment
    /// variable when set.
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Proceed even when KL-goodness of ell for this type is not known.
    #[arg(long)]
    assume_kl_good: bool,
    /// Lift the built-in cap on --length-bound.
    #[arg(long)]
    override_length_cap: bool,
}

#[derive(Debug, Args)]
struct Selectors {
    /// Weight in fundamental coordinates, e.g. --weight [8]. Repeat for
    /// pairs. Weights are resolved through classification.
    #[arg(long = "weight", value_name = "[a,b,...]")]
    weights: Vec<String>,
    /// Element as a comma-separated reduced word, e.g. --word 1,0. Repeat
    /// for pairs. With words, add one --weight naming the block.
    #[arg(long = "word", value_name = "i,j,...")]
    words: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a weight: orbit representative, minimal coset word,
    /// stabilizer, regularity, length and parity.
    Classify {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_name = "[a,b,...]")]
        weight: String,
    },
    /// List the dominant orbit representatives of a weight's block.
    Orbit {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_name = "[a,b,...]")]
        weight: String,
        #[arg(long, default_value_t = 8)]
        length_bound: usize,
    },
    /// Kazhdan-Lusztig polynomial P_{x,w} (in q).
    Kl {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
    },
    /// Parabolic Kazhdan-Lusztig polynomial P^J_{y,w} (in q).
    Pkl {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
        /// Comma-separated generator indices of J, e.g. --J 1 or --J 0,2.
        #[arg(long = "J", value_name = "i,j,...", default_value = "")]
        j: String,
    },
    /// Ext generating functions.
    Ext {
        #[command(subcommand)]
        kind: ExtKind,
    },
    /// Irreducible character as a vector over standard characters.
    Char {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
        #[arg(long, default_value_t = 8)]
        length_bound: usize,
    },
    /// Decomposition matrix of a block truncation.
    Decomp {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        /// Any weight of the block.
        #[arg(long, value_name = "[a,b,...]")]
        weight: String,
        #[arg(long, default_value_t = 8)]
        length_bound: usize,
    },
    /// Run a property-verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Cache lifecycle: save, load (validate), stats.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum ExtKind {
    /// Ext(Δ(y.μ), L(w.μ)): series t^(l(w)-l(y))·bar(P^J_{y,w}).
    Delta {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
    },
    /// Ext(L(w.μ), L(z.μ)): the symmetric convolution over the block.
    Irred {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
    },
    /// Ext from the i-th standard-filtration layer of a wall-crossed
    /// standard module (regular block, parabolic J).
    Ui {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        selectors: Selectors,
        #[arg(long = "J", value_name = "i,j,...")]
        j: String,
        /// Filtration layer index.
        #[arg(long)]
        i: usize,
    },
}

#[derive(Debug, Subcommand)]
enum VerifySuite {
    /// kl == kl_via_r on all Bruhat pairs in a ball.
    Oracle {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 6)]
        length_bound: usize,
    },
    /// Alternating parabolic sums vanish for dominant w outside W^J.
    Vanishing {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        /// Weight of a singular block; omit to sweep all singular blocks.
        #[arg(long, value_name = "[a,b,...]")]
        weight: Option<String>,
        #[arg(long, default_value_t = 6)]
        length_bound: usize,
    },
    /// Character and decomposition matrices are mutually inverse.
    Inversion {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        /// Weight of a block; omit to sweep the regular and all singular
        /// blocks.
        #[arg(long, value_name = "[a,b,...]")]
        weight: Option<String>,
        #[arg(long, default_value_t = 6)]
        length_bound: usize,
    },
    /// Ext series live in a single parity class with Hom = δ.
    Parity {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 6)]
        length_bound: usize,
    },
    /// Filtration-layer series have non-negative coefficients.
    Nonneg {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 6)]
        length_bound: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Write (or normalize) the cache file for this group.
    Save {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Validate the cache file against this group.
    Load {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Entry count and maximal word length in the cache file.
    Stats {
        #[command(flatten)]
        group: GroupOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Everything that can stop a command, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refusal(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Refusal(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn classify_ext_error(e: ExtError) -> CliError {
    match e {
        ExtError::KlGoodUnknown { .. } => CliError::Refusal(e.to_string()),
        ExtError::NegativeCoefficient { .. } | ExtError::DegreeBoundViolated => {
            CliError::Internal(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

/// Entry point used by the `klext` binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify {
            group,
            common,
            weight,
        } => cmd_classify(&group, &common, &weight),
        Command::Orbit {
            group,
            common,
            weight,
            length_bound,
        } => cmd_orbit(&group, &common, &weight, length_bound),
        Command::Kl {
            group,
            common,
            selectors,
        } => cmd_kl(&group, &common, &selectors),
        Command::Pkl {
            group,
            common,
            selectors,
            j,
        } => cmd_pkl(&group, &common, &selectors, &j),
        Command::Ext { kind } => match kind {
            ExtKind::Delta {
                group,
                common,
                selectors,
            } => cmd_ext_delta(&group, &common, &selectors),
            ExtKind::Irred {
                group,
                common,
                selectors,
            } => cmd_ext_irred(&group, &common, &selectors),
            ExtKind::Ui {
                group,
                common,
                selectors,
                j,
                i,
            } => cmd_ext_ui(&group, &common, &selectors, &j, i),
        },
        Command::Char {
            group,
            common,
            selectors,
            length_bound,
        } => cmd_char(&group, &common, &selectors, length_bound),
        Command::Decomp {
            group,
            common,
            weight,
            length_bound,
        } => cmd_decomp(&group, &common, &weight, length_bound),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Cache { action } => cmd_cache(action),
    }
}

fn build_group(opts: &GroupOpts) -> Result<CoxeterGroup, CliError> {
    let label = TypeLabel::parse(&opts.type_label)
        .ok_or_else(|| CliError::Usage(format!("unknown type label {:?}", opts.type_label)))?;
    if opts.ell < 1 {
        return Err(CliError::Usage(format!(
            "ell must be >= 1, got {}",
            opts.ell
        )));
    }
    let rs = build_root_system(label, opts.rank).map_err(|e| CliError::Usage(e.to_string()))?;
    CoxeterGroup::affine(rs, opts.ell).map_err(|e| CliError::Usage(e.to_string()))
}

fn check_bound(bound: usize, common: &CommonOpts) -> Result<(), CliError> {
    if bound > LENGTH_CAP && !common.override_length_cap {
        return Err(CliError::Usage(format!(
            "length bound {bound} exceeds the cap {LENGTH_CAP}; pass --override-length-cap to proceed"
        )));
    }
    Ok(())
}

fn parse_weight(group: &CoxeterGroup, s: &str) -> Result<Weight, CliError> {
    let w = Weight::parse(s)
        .ok_or_else(|| CliError::Usage(format!("malformed weight {s:?}; expected [a,b,...]")))?;
    if w.rank() != group.rank() {
        return Err(CliError::Usage(format!(
            "weight {s} has {} coordinates, the group has rank {}",
            w.rank(),
            group.rank()
        )));
    }
    Ok(w)
}

fn parse_j(group: &CoxeterGroup, s: &str) -> Result<Vec<usize>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("malformed generator set {s:?}")))?;
        if idx > group.rank() {
            return Err(CliError::Usage(format!(
                "generator {idx} out of range 0..={}",
                group.rank()
            )));
        }
        out.push(idx);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_word(group: &CoxeterGroup, s: &str) -> Result<GroupElement, CliError> {
    let word = Word::parse(s).map_err(|e| CliError::Usage(e.to_string()))?;
    for &g in &word.0 {
        if g > group.rank() {
            return Err(CliError::Usage(format!(
                "generator {g} out of range 0..={}",
                group.rank()
            )));
        }
    }
    group
        .element_from_word(&word)
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Resolves a pair of element specifiers plus the block they live in.
/// Two weights determine the block; two words need one extra weight to
/// name it.
fn resolve_pair(
    group: &CoxeterGroup,
    selectors: &Selectors,
) -> Result<(Weight, GroupElement, GroupElement), CliError> {
    match (selectors.weights.len(), selectors.words.len()) {
        (2, 0) => {
            let a = parse_weight(group, &selectors.weights[0])?;
            let b = parse_weight(group, &selectors.weights[1])?;
            let ca = alcove::classify(group, &a).map_err(|e| CliError::Usage(e.to_string()))?;
            let cb = alcove::classify(group, &b).map_err(|e| CliError::Usage(e.to_string()))?;
            if ca.base != cb.base {
                return Err(CliError::Usage(format!(
                    "weights {a} and {b} lie in different blocks (bases {} and {})",
                    ca.base, cb.base
                )));
            }
            Ok((ca.base, ca.rep, cb.rep))
        }
        (1, 2) => {
            let lam = parse_weight(group, &selectors.weights[0])?;
            let c = alcove::classify(group, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
            let x = parse_word(group, &selectors.words[0])?;
            let y = parse_word(group, &selectors.words[1])?;
            Ok((c.base, x, y))
        }
        (0, 2) => Err(CliError::Usage(
            "with --word pairs, add one --weight naming the block".to_string(),
        )),
        _ => Err(CliError::Usage(
            "supply exactly two --weight values, or two --word values plus one --weight for the block"
                .to_string(),
        )),
    }
}

/// Group-element pair without block context (for kl / pkl).
fn resolve_raw_pair(
    group: &CoxeterGroup,
    selectors: &Selectors,
) -> Result<(GroupElement, GroupElement), CliError> {
    match (selectors.weights.len(), selectors.words.len()) {
        (0, 2) => Ok((
            parse_word(group, &selectors.words[0])?,
            parse_word(group, &selectors.words[1])?,
        )),
        (2, 0) => {
            let a = parse_weight(group, &selectors.weights[0])?;
            let b = parse_weight(group, &selectors.weights[1])?;
            let ca = alcove::classify(group, &a).map_err(|e| CliError::Usage(e.to_string()))?;
            let cb = alcove::classify(group, &b).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((ca.rep, cb.rep))
        }
        _ => Err(CliError::Usage(
            "supply exactly two --word values or two --weight values".to_string(),
        )),
    }
}

fn cache_path(common: &CommonOpts) -> Option<PathBuf> {
    common
        .cache
        .clone()
        .or_else(|| std::env::var_os(ENV_CACHE).map(PathBuf::from))
}

fn load_cache_if_present(ctx: &KlContext<'_>, path: &Path) -> Result<(), CliError> {
    if !path.exists() {
        return Ok(());
    }
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open cache {}: {e}", path.display())))?;
    let key = TableKey::for_group(ctx.group());
    match KLTable::load(std::io::BufReader::new(file), &key) {
        Ok(table) => {
            ctx.adopt_table(table);
            Ok(())
        }
        Err(e @ KlError::CacheHeaderMismatch { .. }) => Err(CliError::Usage(format!(
            "cache {} refused: {e}; nothing was loaded and the file is untouched",
            path.display()
        ))),
        Err(e) => Err(CliError::Usage(format!(
            "cache {} refused: {e}; nothing was loaded and the file is untouched",
            path.display()
        ))),
    }
}

fn save_cache(ctx: &KlContext<'_>, path: &Path) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let mut bytes = Vec::new();
    ctx.with_table(|t| t.save(&mut bytes))
        .map_err(|e| CliError::Internal(format!("cache serialization failed: {e}")))?;
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError::Usage(format!("cannot write cache {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::Usage(format!("cannot move cache into place: {e}")))?;
    Ok(())
}

/// Runs `f` with a cache-backed context, persisting the table afterwards.
fn with_context<T>(
    group: &CoxeterGroup,
    common: &CommonOpts,
    f: impl FnOnce(&KlContext<'_>) -> Result<T, CliError>,
) -> Result<T, CliError> {
    let ctx = KlContext::new(group);
    let path = cache_path(common);
    if let Some(p) = &path {
        load_cache_if_present(&ctx, p)?;
    }
    let out = f(&ctx)?;
    if let Some(p) = &path {
        save_cache(&ctx, p)?;
    }
    Ok(out)
}

fn gate(common: &CommonOpts) -> KlGoodGate {
    KlGoodGate {
        assume: common.assume_kl_good,
    }
}

fn emit<T: Serialize>(common: &CommonOpts, json: &T, table: String) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let line = match common.format {
        Format::Json => serde_json::to_string(json)
            .map_err(|e| CliError::Internal(format!("JSON serialization failed: {e}")))?,
        Format::Table => table,
    };
    writeln!(stdout, "{line}").map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(())
}

#[derive(Serialize)]
struct BlockJson {
    lambda: Vec<i64>,
    #[serde(rename = "J")]
    j: Vec<usize>,
}

impl BlockJson {
    fn of(block: &BlockData) -> BlockJson {
        BlockJson {
            lambda: block.lambda().0.clone(),
            j: block.stabilizer().to_vec(),
        }
    }
}

fn cmd_classify(group: &GroupOpts, common: &CommonOpts, weight: &str) -> Result<(), CliError> {
    let g = build_group(group)?;
    let lam = parse_weight(&g, weight)?;
    let c = alcove::classify(&g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;

    #[derive(Serialize)]
    struct ClassifyJson {
        weight: Vec<i64>,
        lambda: Vec<i64>,
        word: String,
        #[serde(rename = "J")]
        j: Vec<usize>,
        regular: bool,
        length: usize,
        parity: &'static str,
    }
    let json = ClassifyJson {
        weight: lam.0.clone(),
        lambda: c.base.0.clone(),
        word: c.word.serialize(),
        j: c.stabilizer.clone(),
        regular: c.regular,
        length: c.weight_length,
        parity: c.parity.as_str(),
    };
    let table = format!(
        "weight {} = w.lambda with lambda={} w=\"{}\" J={{{}}} {} length={} parity={}",
        lam,
        c.base,
        c.word.serialize(),
        join(&c.stabilizer),
        if c.regular { "regular" } else { "singular" },
        c.weight_length,
        c.parity.as_str()
    );
    emit(common, &json, table)
}

fn cmd_orbit(
    group: &GroupOpts,
    common: &CommonOpts,
    weight: &str,
    length_bound: usize,
) -> Result<(), CliError> {
    check_bound(length_bound, common)?;
    let g = build_group(group)?;
    let lam = parse_weight(&g, weight)?;
    let c = alcove::classify(&g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
    let block = alcove::dominant_orbit(&g, &c.base, length_bound)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    #[derive(Serialize)]
    struct RepJson {
        word: String,
        weight: Vec<i64>,
        length: usize,
    }
    #[derive(Serialize)]
    struct OrbitJson {
        block: BlockJson,
        reps: Vec<RepJson>,
    }
    let reps: Vec<RepJson> = block
        .dominant_reps()
        .iter()
        .map(|(w, wt)| RepJson {
            word: g.canonical_word(w).serialize(),
            weight: wt.0.clone(),
            length: g.length(w),
        })
        .collect();
    let mut table = format!(
        "block lambda={} J={{{}}}: {} dominant representatives up to length {}",
        block.lambda(),
        join(block.stabilizer()),
        reps.len(),
        length_bound
    );
    for r in &reps {
        table.push_str(&format!(
            "\n  length {:>2}  w=\"{}\"  weight {}",
            r.length,
            r.word,
            Weight(r.weight.clone())
        ));
    }
    emit(
        common,
        &OrbitJson {
            block: BlockJson::of(&block),
            reps,
        },
        table,
    )
}

#[derive(Serialize)]
struct PolyJson {
    x: String,
    w: String,
    coeffs: Vec<i64>,
}

fn cmd_kl(group: &GroupOpts, common: &CommonOpts, selectors: &Selectors) -> Result<(), CliError> {
    let g = build_group(group)?;
    let (x, w) = resolve_raw_pair(&g, selectors)?;
    with_context(&g, common, |ctx| {
        let p = ctx.kl(&x, &w);
        let json = PolyJson {
            x: ctx.word(&x).serialize(),
            w: ctx.word(&w).serialize(),
            coeffs: p.coeffs().to_vec(),
        };
        let table = format!("P_{{\"{}\", \"{}\"}} = {}", json.x, json.w, p.render("q"));
        emit(common, &json, table)
    })
}

fn cmd_pkl(
    group: &GroupOpts,
    common: &CommonOpts,
    selectors: &Selectors,
    j: &str,
) -> Result<(), CliError> {
    let g = build_group(group)?;
    let j = parse_j(&g, j)?;
    let (y, w) = resolve_raw_pair(&g, selectors)?;
    with_context(&g, common, |ctx| {
        let p = ctx
            .parabolic_kl(&j, &y, &w)
            .map_err(|e| CliError::Usage(e.to_string()))?;

        #[derive(Serialize)]
        struct PklJson {
            #[serde(rename = "J")]
            j: Vec<usize>,
            y: String,
            w: String,
            coeffs: Vec<i64>,
        }
        let json = PklJson {
            j: j.clone(),
            y: ctx.word(&y).serialize(),
            w: ctx.word(&w).serialize(),
            coeffs: p.coeffs().to_vec(),
        };
        let table = format!(
            "P^{{{}}}_{{\"{}\", \"{}\"}} = {}",
            join(&j),
            json.y,
            json.w,
            p.render("q")
        );
        emit(common, &json, table)
    })
}

#[derive(Serialize)]
struct ExtJson {
    block: BlockJson,
    y: String,
    w: String,
    series: Vec<i64>,
}

/// Builds the block that contains the given elements, sized to cover them.
fn block_for(
    g: &CoxeterGroup,
    base: &Weight,
    elements: &[&GroupElement],
) -> Result<BlockData, CliError> {
    let needed = elements.iter().map(|w| g.length(w)).max().unwrap_or(0);
    alcove::dominant_orbit(g, base, needed).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_ext_delta(
    group: &GroupOpts,
    common: &CommonOpts,
    selectors: &Selectors,
) -> Result<(), CliError> {
    let g = build_group(group)?;
    let (base, y, w) = resolve_pair(&g, selectors)?;
    let block = block_for(&g, &base, &[&y, &w])?;
    with_context(&g, common, |ctx| {
        let series =
            ext::ext_delta_irr(ctx, &block, &y, &w, gate(common)).map_err(classify_ext_error)?;
        let json = ExtJson {
            block: BlockJson::of(&block),
            y: ctx.word(&y).serialize(),
            w: ctx.word(&w).serialize(),
            series: series.coeffs().to_vec(),
        };
        let table = format!(
            "Ext(Delta(y.mu), L(w.mu)) for y=\"{}\" w=\"{}\": {}",
            json.y,
            json.w,
            series.render()
        );
        emit(common, &json, table)
    })
}

fn cmd_ext_irred(
    group: &GroupOpts,
    common: &CommonOpts,
    selectors: &Selectors,
) -> Result<(), CliError> {
    let g = build_group(group)?;
    let (base, w, z) = resolve_pair(&g, selectors)?;
    let block = block_for(&g, &base, &[&w, &z])?;
    with_context(&g, common, |ctx| {
        let series =
            ext::ext_irr_irr(ctx, &block, &w, &z, gate(common)).map_err(classify_ext_error)?;

        #[derive(Serialize)]
        struct IrredJson {
            block: BlockJson,
            w: String,
            z: String,
            series: Vec<i64>,
        }
        let json = IrredJson {
            block: BlockJson::of(&block),
            w: ctx.word(&w).serialize(),
            z: ctx.word(&z).serialize(),
            series: series.coeffs().to_vec(),
        };
        let table = format!(
            "Ext(L(w.mu), L(z.mu)) for w=\"{}\" z=\"{}\": {}",
            json.w,
            json.z,
            series.render()
        );
        emit(common, &json, table)
    })
}

fn cmd_ext_ui(
    group: &GroupOpts,
    common: &CommonOpts,
    selectors: &Selectors,
    j: &str,
    i: usize,
) -> Result<(), CliError> {
    let g = build_group(group)?;
    let j = parse_j(&g, j)?;
    let (base, y, w) = resolve_pair(&g, selectors)?;
    let block = block_for(&g, &base, &[&y, &w])?;
    with_context(&g, common, |ctx| {
        let series =
            ext::ext_ui(ctx, &block, &j, &y, &w, i, gate(common)).map_err(classify_ext_error)?;

        #[derive(Serialize)]
        struct UiJson {
            block: BlockJson,
            #[serde(rename = "J")]
            j: Vec<usize>,
            i: usize,
            y: String,
            w: String,
            series: Vec<i64>,
        }
        let json = UiJson {
            block: BlockJson::of(&block),
            j: j.clone(),
            i,
            y: ctx.word(&y).serialize(),
            w: ctx.word(&w).serialize(),
            series: series.coeffs().to_vec(),
        };
        let table = format!(
            "Ext(U_{i}, L(w.lambda)) for J={{{}}} y=\"{}\" w=\"{}\": {}",
            join(&j),
            json.y,
            json.w,
            series.render()
        );
        emit(common, &json, table)
    })
}

fn cmd_char(
    group: &GroupOpts,
    common: &CommonOpts,
    selectors: &Selectors,
    length_bound: usize,
) -> Result<(), CliError> {
    check_bound(length_bound, common)?;
    let g = build_group(group)?;
    let (base, w) = match (selectors.weights.len(), selectors.words.len()) {
        (1, 0) => {
            let lam = parse_weight(&g, &selectors.weights[0])?;
            let c = alcove::classify(&g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
            (c.base, c.rep)
        }
        (1, 1) => {
            let lam = parse_weight(&g, &selectors.weights[0])?;
            let c = alcove::classify(&g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
            (c.base, parse_word(&g, &selectors.words[0])?)
        }
        _ => {
            return Err(CliError::Usage(
                "char takes one --weight (or one --weight for the block plus one --word)"
                    .to_string(),
            ))
        }
    };
    let bound = length_bound.max(g.length(&w));
    let block =
        alcove::dominant_orbit(&g, &base, bound).map_err(|e| CliError::Usage(e.to_string()))?;
    with_context(&g, common, |ctx| {
        let ch = ext::irr_character(ctx, &block, &w, bound).map_err(classify_ext_error)?;

        #[derive(Serialize)]
        struct CharJson {
            coeffs: BTreeMap<String, i64>,
        }
        let json = CharJson {
            coeffs: ch.as_map(),
        };
        let mut table = format!(
            "ch L({}) as a sum of standard characters:",
            block
                .weight_of(&w)
                .map(|wt| wt.bracketed())
                .unwrap_or_else(|| format!("w=\"{}\"", ctx.word(&w).serialize()))
        );
        for (word, weight, c) in &ch.entries {
            if *c != 0 {
                table.push_str(&format!("\n  {c:>3} * ch Delta({weight})  [y=\"{word}\"]"));
            }
        }
        emit(common, &json, table)
    })
}

fn cmd_decomp(
    group: &GroupOpts,
    common: &CommonOpts,
    weight: &str,
    length_bound: usize,
) -> Result<(), CliError> {
    check_bound(length_bound, common)?;
    let g = build_group(group)?;
    let lam = parse_weight(&g, weight)?;
    let c = alcove::classify(&g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
    let block = alcove::dominant_orbit(&g, &c.base, length_bound)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    with_context(&g, common, |ctx| {
        let m = ext::decomp_matrix(ctx, &block, length_bound, gate(common))
            .map_err(classify_ext_error)?;

        #[derive(Serialize)]
        struct DecompJson {
            block: BlockJson,
            index: Vec<String>,
            matrix: Vec<Vec<i64>>,
        }
        let json = DecompJson {
            block: BlockJson::of(&block),
            index: m.index.iter().map(|(w, _)| w.serialize()).collect(),
            matrix: m.entries.clone(),
        };
        let mut table = format!(
            "decomposition matrix [Delta(w.mu) : L(y.mu)] on {} representatives (rows y, columns w):",
            m.dim()
        );
        for (row, (word, wt)) in m.entries.iter().zip(&m.index) {
            table.push_str(&format!(
                "\n  {:>12} {} | {}",
                format!("\"{}\"", word.serialize()),
                wt,
                row.iter()
                    .map(|v| format!("{v:>2}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        emit(common, &json, table)
    })
}

#[derive(Serialize)]
struct VerifyJson {
    suite: &'static str,
    passed: bool,
    checked: usize,
    violations: Vec<String>,
}

fn emit_verify(
    common: &CommonOpts,
    suite: &'static str,
    checked: usize,
    violations: Vec<String>,
) -> Result<(), CliError> {
    let passed = violations.is_empty();
    let json = VerifyJson {
        suite,
        passed,
        checked,
        violations: violations.clone(),
    };
    let mut table = format!(
        "{suite}: {} ({checked} checks)",
        if passed { "pass" } else { "FAIL" }
    );
    for v in &violations {
        table.push_str(&format!("\n  violation: {v}"));
    }
    emit(common, &json, table)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Internal(format!(
            "{suite} suite found {} violations",
            violations.len()
        )))
    }
}

fn cmd_verify(suite: VerifySuite) -> Result<(), CliError> {
    match suite {
        VerifySuite::Oracle {
            group,
            common,
            length_bound,
        } => {
            check_bound(length_bound, &common)?;
            let g = build_group(&group)?;
            with_context(&g, &common, |ctx| {
                let ball = ctx.ball(length_bound);
                let mut checked = 0usize;
                let mut violations = Vec::new();
                for x in &ball {
                    for w in &ball {
                        if !ctx.bruhat_leq(x, w) {
                            continue;
                        }
                        checked += 1;
                        if ctx.kl(x, w) != ctx.kl_via_r(x, w) {
                            violations.push(format!(
                                "kl != kl_via_r at x=\"{}\" w=\"{}\"",
                                ctx.word(x).serialize(),
                                ctx.word(w).serialize()
                            ));
                        }
                    }
                }
                emit_verify(&common, "oracle", checked, violations)
            })
        }
        VerifySuite::Vanishing {
            group,
            common,
            weight,
            length_bound,
        } => {
            check_bound(length_bound, &common)?;
            let g = build_group(&group)?;
            let blocks = singular_blocks(&g, weight.as_deref(), length_bound)?;
            with_context(&g, &common, |ctx| {
                let mut checked = 0usize;
                let mut violations = Vec::new();
                for block in &blocks {
                    let report = ext::verify_vanishing(ctx, block, length_bound)
                        .map_err(classify_ext_error)?;
                    checked += report.pairs_checked;
                    for (y, w) in report.violations {
                        violations.push(format!(
                            "nonzero sum at y=\"{}\" w=\"{}\" J={{{}}}",
                            y.serialize(),
                            w.serialize(),
                            join(block.stabilizer())
                        ));
                    }
                }
                emit_verify(&common, "vanishing", checked, violations)
            })
        }
        VerifySuite::Inversion {
            group,
            common,
            weight,
            length_bound,
        } => {
            check_bound(length_bound, &common)?;
            let g = build_group(&group)?;
            let blocks = blocks_for_inversion(&g, weight.as_deref(), length_bound)?;
            with_context(&g, &common, |ctx| {
                let mut checked = 0usize;
                let mut violations = Vec::new();
                for block in &blocks {
                    checked += 1;
                    let ok = ext::verify_inversion(ctx, block, length_bound, gate(&common))
                        .map_err(classify_ext_error)?;
                    if !ok {
                        violations.push(format!(
                            "character * decomposition != identity for lambda={} J={{{}}}",
                            block.lambda(),
                            join(block.stabilizer())
                        ));
                    }
                }
                emit_verify(&common, "inversion", checked, violations)
            })
        }
        VerifySuite::Parity {
            group,
            common,
            length_bound,
        } => {
            check_bound(length_bound, &common)?;
            let g = build_group(&group)?;
            let blocks = singular_blocks(&g, None, length_bound)?;
            with_context(&g, &common, |ctx| {
                let mut checked = 0usize;
                let mut violations = Vec::new();
                for block in &blocks {
                    for (y, _) in block.dominant_reps() {
                        for (w, _) in block.dominant_reps() {
                            let series = ext::ext_delta_irr(ctx, block, y, w, gate(&common))
                                .map_err(classify_ext_error)?;
                            checked += 1;
                            let want = (ctx.length(w) + ctx.length(y)) % 2;
                            if series.support().iter().any(|n| n % 2 != want) {
                                violations.push(format!(
                                    "parity broken at y=\"{}\" w=\"{}\"",
                                    ctx.word(y).serialize(),
                                    ctx.word(w).serialize()
                                ));
                            }
                            let hom = series.coeff(0);
                            if (y == w && hom != 1) || (y != w && hom != 0) {
                                violations.push(format!(
                                    "Hom is not delta at y=\"{}\" w=\"{}\"",
                                    ctx.word(y).serialize(),
                                    ctx.word(w).serialize()
                                ));
                            }
                        }
                    }
                }
                emit_verify(&common, "parity", checked, violations)
            })
        }
        VerifySuite::Nonneg {
            group,
            common,
            length_bound,
        } => {
            check_bound(length_bound, &common)?;
            let g = build_group(&group)?;
            let regular = alcove::find_weight_with_stabilizer(&g, &[])
                .map_err(|e| CliError::Usage(e.to_string()))?
                .ok_or_else(|| {
                    CliError::Usage(
                        "no regular weight exists (ell below the Coxeter number)".to_string(),
                    )
                })?;
            let block = alcove::dominant_orbit(&g, &regular, length_bound)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let subsets = proper_nonempty_subsets(&g);
            with_context(&g, &common, |ctx| {
                let mut checked = 0usize;
                let mut violations = Vec::new();
                for j in &subsets {
                    let max_i = ctx
                        .group()
                        .longest_parabolic_length(j)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    for (y, _) in block.dominant_reps() {
                        if !ctx.group().is_min_coset_rep(y, j) {
                            continue;
                        }
                        for (w, _) in block.dominant_reps() {
                            for i in 0..=max_i {
                                // Negative coefficients surface as errors.
                                match ext::ext_ui(ctx, &block, j, y, w, i, gate(&common)) {
                                    Ok(_) => checked += 1,
                                    Err(e @ ExtError::KlGoodUnknown { .. }) => {
                                        return Err(classify_ext_error(e))
                                    }
                                    Err(e) => violations.push(format!(
                                        "J={{{}}} y=\"{}\" w=\"{}\" i={i}: {e}",
                                        join(j),
                                        ctx.word(y).serialize(),
                                        ctx.word(w).serialize()
                                    )),
                                }
                            }
                        }
                    }
                }
                emit_verify(&common, "nonneg", checked, violations)
            })
        }
    }
}

fn singular_blocks(
    g: &CoxeterGroup,
    weight: Option<&str>,
    length_bound: usize,
) -> Result<Vec<BlockData>, CliError> {
    match weight {
        Some(s) => {
            let lam = parse_weight(g, s)?;
            let c = alcove::classify(g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
            if c.stabilizer.is_empty() {
                return Err(CliError::Usage(format!(
                    "weight {lam} is regular; this suite requires a singular block"
                )));
            }
            Ok(vec![alcove::dominant_orbit(g, &c.base, length_bound)
                .map_err(|e| CliError::Usage(e.to_string()))?])
        }
        None => {
            let mut out = Vec::new();
            for (_, lam) in
                alcove::singular_stabilizers(g).map_err(|e| CliError::Usage(e.to_string()))?
            {
                out.push(
                    alcove::dominant_orbit(g, &lam, length_bound)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                );
            }
            Ok(out)
        }
    }
}

fn blocks_for_inversion(
    g: &CoxeterGroup,
    weight: Option<&str>,
    length_bound: usize,
) -> Result<Vec<BlockData>, CliError> {
    match weight {
        Some(s) => {
            let lam = parse_weight(g, s)?;
            let c = alcove::classify(g, &lam).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(vec![alcove::dominant_orbit(g, &c.base, length_bound)
                .map_err(|e| CliError::Usage(e.to_string()))?])
        }
        None => {
            let mut out = Vec::new();
            if let Some(reg) = alcove::find_weight_with_stabilizer(g, &[])
                .map_err(|e| CliError::Usage(e.to_string()))?
            {
                out.push(
                    alcove::dominant_orbit(g, &reg, length_bound)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                );
            }
            out.extend(singular_blocks(g, None, length_bound)?);
            Ok(out)
        }
    }
}

fn proper_nonempty_subsets(g: &CoxeterGroup) -> Vec<Vec<usize>> {
    let gens = g.generators();
    let n = gens.len();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) - 1 {
        let subset: Vec<usize> = gens
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        out.push(subset);
    }
    out.sort_by_key(|j| (j.len(), j.clone()));
    out
}

fn cmd_cache(action: CacheAction) -> Result<(), CliError> {
    let (group, common, mode) = match action {
        CacheAction::Save { group, common } => (group, common, "save"),
        CacheAction::Load { group, common } => (group, common, "load"),
        CacheAction::Stats { group, common } => (group, common, "stats"),
    };
    let g = build_group(&group)?;
    let path = cache_path(&common).ok_or_else(|| {
        CliError::Usage(format!("no cache path: pass --cache or set {ENV_CACHE}"))
    })?;
    let ctx = KlContext::new(&g);
    if mode != "save" && !path.exists() {
        return Err(CliError::Usage(format!(
            "cache file {} does not exist",
            path.display()
        )));
    }
    load_cache_if_present(&ctx, &path)?;
    if mode == "save" {
        save_cache(&ctx, &path)?;
    }
    let (entries, max_len) = ctx.with_table(|t| (t.len(), t.max_word_len()));

    #[derive(Serialize)]
    struct CacheJson {
        action: &'static str,
        path: String,
        entries: usize,
        max_word_length: usize,
    }
    let json = CacheJson {
        action: mode,
        path: path.display().to_string(),
        entries,
        max_word_length: max_len,
    };
    let table = format!(
        "cache {mode} {}: {entries} entries, max word length {max_len}",
        path.display()
    );
    emit(&common, &json, table)
}

fn join(j: &[usize]) -> String {
    j.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
