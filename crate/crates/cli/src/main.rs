use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use ncwreath::algebra::{AlgebraError, MultiMatrixAlgebra};
use ncwreath::decorated::{self, DecoratedError, DecoratedPartition};
use ncwreath::fusion::{self, AlternatingWord, Combination, FusionError, Word, WordRing};
use ncwreath::group::{Group, GroupElement, GroupError};
use ncwreath::partition::{self, Partition, PartitionError};
use ncwreath::tensor_maps::{self, TensorMapError};

mod error;

use error::CliError;

#[derive(Parser)]
#[command(name = "ncwreath", version, about = "Noncrossing partitions, intertwiner maps and free wreath product fusion rules")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Numerical tolerance for map verification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Largest number of points a diagram may have.
    #[arg(long, global = true, default_value_t = partition::DEFAULT_MAX_POINTS)]
    max_points: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Noncrossing partitions and their operations.
    #[command(subcommand)]
    Partitions(PartitionsCmd),
    /// The linear maps T_p over a multimatrix algebra.
    #[command(subcommand)]
    Tmap(TmapCmd),
    /// δ-form analysis of a multimatrix algebra with its state.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Group-decorated partitions.
    #[command(subcommand)]
    Decorated(DecoratedCmd),
    /// Fusion rules of the free wreath product.
    #[command(subcommand)]
    Fusion(FusionCmd),
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    upper: usize,
    #[arg(long)]
    lower: usize,
}

#[derive(Args)]
struct Pair {
    /// Top diagram (JSON file).
    #[arg(long)]
    p: PathBuf,
    /// Bottom diagram (JSON file).
    #[arg(long)]
    q: PathBuf,
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra description (JSON file).
    #[arg(long, alias = "spec")]
    algebra: PathBuf,
}

#[derive(Subcommand)]
enum PartitionsCmd {
    /// List NC(k, l) in canonical order.
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        /// Print only the number of partitions.
        #[arg(long)]
        count_only: bool,
    },
    /// Stack --p on top of --q.
    Compose(Pair),
    /// Reflect a partition upside down.
    Adjoint {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Place --p to the left of --q.
    Tensor(Pair),
}

#[derive(Subcommand)]
enum TmapCmd {
    /// Matrix of T_p in the normalized basis.
    Build {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Check T_qp = δ^(-cy) T_q T_p for --p on top of --q.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        pair: Pair,
    },
    /// Rank of the Gram matrix of {T_p : p in NC(k, l)}.
    GramRank {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        shape: Shape,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Whether the state is a δ-form.
    Check(AlgebraArg),
    /// Coarsest splitting into δ-form factors.
    Decompose(AlgebraArg),
}

#[derive(Args)]
struct Labels {
    /// Group: cyclic:<s>, integers or table:<path>.
    #[arg(long)]
    group: String,
    /// Comma-separated upper labels.
    #[arg(long, default_value = "")]
    upper_labels: String,
    /// Comma-separated lower labels.
    #[arg(long, default_value = "")]
    lower_labels: String,
}

#[derive(Subcommand)]
enum DecoratedCmd {
    /// Number of admissible decorated partitions.
    Count {
        #[command(flatten)]
        labels: Labels,
        /// Also compute the dimension from the fusion rules and report any
        /// disagreement.
        #[arg(long)]
        strict: bool,
    },
    /// List the admissible decorated partitions.
    List {
        #[command(flatten)]
        labels: Labels,
    },
}

#[derive(Subcommand)]
enum FusionCmd {
    /// Decompose ω(x) ⊗ ω(y).
    Product {
        #[arg(long)]
        group: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Dimension of ω(word) for dim B = n.
    Dim {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
    },
    /// Multiplicity of the trivial representation in ω(x) ⊗ ω(y).
    TrivialMult {
        #[arg(long)]
        group: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Multiplicity of the trivial representation in a(g1) ⊗ … ⊗ a(gk).
    ATrivialMult {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
    },
    /// Fusion in the free product over the δ-form factors of an algebra.
    ///
    /// Alternating words are written `1:(s,e);2:(s)` with 1-based factor
    /// numbers; the empty string is the trivial representation.
    Freeprod {
        #[arg(long)]
        group: String,
        /// Algebra whose δ-form factors define the free product.
        #[arg(long, alias = "spec", conflicts_with = "dims", required_unless_present = "dims")]
        algebra: Option<PathBuf>,
        /// Comma-separated factor dimensions, instead of --algebra.
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.is_empty() && !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Partitions(cmd) => partitions(cli, cmd),
        Command::Tmap(cmd) => tmap(cli, cmd),
        Command::Algebra(cmd) => algebra(cli, cmd),
        Command::Decorated(cmd) => decorated(cli, cmd),
        Command::Fusion(cmd) => fusion(cli, cmd),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn read_partition(path: &Path, max_points: usize) -> Result<Partition, CliError> {
    let p: Partition = read_json(path)?;
    if p.total_points() > max_points {
        return Err(PartitionError::SizeLimit { points: p.total_points(), limit: max_points }.into());
    }
    Ok(p)
}

fn read_algebra(path: &Path) -> Result<MultiMatrixAlgebra, CliError> {
    read_json(path)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string(value).expect("output values always serialize"))
}

fn no_csv(cli: &Cli) -> Result<(), CliError> {
    if cli.format == Format::Csv {
        return Err(CliError::Usage("csv output is only available for `tmap build` and `partitions enumerate --count-only`".into()));
    }
    Ok(())
}

fn show_partition(cli: &Cli, p: &Partition) -> Result<String, CliError> {
    no_csv(cli)?;
    match cli.format {
        Format::Json => to_json(p),
        _ => Ok(p.to_string()),
    }
}

fn partitions(cli: &Cli, cmd: &PartitionsCmd) -> Result<String, CliError> {
    match cmd {
        PartitionsCmd::Enumerate { shape, count_only: true } => {
            Ok(partition::count(shape.upper, shape.lower, cli.max_points)?.to_string())
        }
        PartitionsCmd::Enumerate { shape, count_only: false } => {
            no_csv(cli)?;
            let all = partition::enumerate_with_limit(shape.upper, shape.lower, cli.max_points)?;
            match cli.format {
                Format::Json => to_json(&all),
                _ => Ok(all.iter().map(|p| format!("{p}\n")).collect()),
            }
        }
        PartitionsCmd::Compose(pair) => {
            no_csv(cli)?;
            let p = read_partition(&pair.p, cli.max_points)?;
            let q = read_partition(&pair.q, cli.max_points)?;
            let comp = p.compose(&q)?;
            match cli.format {
                Format::Json => to_json(&json!({
                    "result": comp.result,
                    "central_blocks": comp.central_blocks,
                    "cycles": comp.cycles,
                })),
                _ => Ok(format!(
                    "result: {}\nblocks: b(p)={} b(q)={} b(qp)={}\ncentral_blocks: {}\ncycles: {}\n",
                    comp.result,
                    p.block_count(),
                    q.block_count(),
                    comp.result.block_count(),
                    comp.central_blocks,
                    comp.cycles
                )),
            }
        }
        PartitionsCmd::Adjoint { partition } => {
            show_partition(cli, &read_partition(partition, cli.max_points)?.adjoint())
        }
        PartitionsCmd::Tensor(pair) => {
            let p = read_partition(&pair.p, cli.max_points)?;
            let q = read_partition(&pair.q, cli.max_points)?;
            show_partition(cli, &p.tensor(&q))
        }
    }
}

fn tmap(cli: &Cli, cmd: &TmapCmd) -> Result<String, CliError> {
    match cmd {
        TmapCmd::Build { algebra, partition } => {
            let alg = read_algebra(&algebra.algebra)?;
            let p = read_partition(partition, cli.max_points)?;
            let map = tensor_maps::build_map(&alg, &p)?;
            let legend = tensor_maps::basis_legend(&alg);
            match cli.format {
                Format::Json => to_json(&json!({ "legend": legend, "matrix": map.to_json() })),
                Format::Csv => Ok(map.to_csv()),
                Format::Text => {
                    let names: Vec<String> = legend.iter().map(|[a, i, j]| format!("({a},{i},{j})")).collect();
                    Ok(format!(
                        "T_p: B^{} -> B^{}, {}x{}\nbasis: {}\n{}",
                        map.domain_power(),
                        map.codomain_power(),
                        map.matrix().nrows(),
                        map.matrix().ncols(),
                        names.join(" "),
                        map.to_csv()
                    ))
                }
            }
        }
        TmapCmd::Verify { algebra, pair } => {
            no_csv(cli)?;
            let alg = read_algebra(&algebra.algebra)?;
            let p = read_partition(&pair.p, cli.max_points)?;
            let q = read_partition(&pair.q, cli.max_points)?;
            let deviation = tensor_maps::verify_composition(&alg, &p, &q)?;
            let cycles = p.compose(&q)?.cycles;
            let ok = deviation <= cli.tolerance;
            let out = match cli.format {
                Format::Json => to_json(&json!({ "deviation": deviation, "cycles": cycles, "ok": ok }))?,
                _ => format!("deviation: {deviation:e}\ncycles: {cycles}\nok: {ok}\n"),
            };
            if !ok {
                print!("{out}");
                return Err(CliError::Validation(format!(
                    "deviation {deviation:e} exceeds tolerance {:e}",
                    cli.tolerance
                )));
            }
            Ok(out)
        }
        TmapCmd::GramRank { algebra, shape } => {
            no_csv(cli)?;
            let alg = read_algebra(&algebra.algebra)?;
            partition::count(shape.upper, shape.lower, cli.max_points)?;
            let maps = tensor_maps::maps_for(&alg, shape.upper, shape.lower)?;
            let rank = tensor_maps::gram_rank(&maps)?;
            match cli.format {
                Format::Json => to_json(&json!({ "diagrams": maps.len(), "rank": rank })),
                _ => Ok(format!("diagrams: {}\nrank: {rank}\n", maps.len())),
            }
        }
    }
}

#[derive(Serialize)]
struct DeltaCheck {
    is_delta_form: bool,
    delta: Option<f64>,
    factors: usize,
}

fn algebra(cli: &Cli, cmd: &AlgebraCmd) -> Result<String, CliError> {
    no_csv(cli)?;
    match cmd {
        AlgebraCmd::Check(arg) => {
            let alg = read_algebra(&arg.algebra)?;
            let delta = alg.is_delta_form();
            let factors = alg.decompose_by_delta().len();
            to_json(&DeltaCheck { is_delta_form: delta.is_some(), delta, factors })
        }
        AlgebraCmd::Decompose(arg) => {
            let alg = read_algebra(&arg.algebra)?;
            let factors = alg.decompose_by_delta();
            match cli.format {
                Format::Json => to_json(
                    &factors
                        .iter()
                        .map(|f| {
                            json!({
                                "blocks": f.blocks,
                                "weight": f.weight,
                                "delta": f.delta,
                                "algebra": f.algebra,
                            })
                        })
                        .collect::<Vec<_>>(),
                ),
                _ => Ok(factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let blocks: Vec<String> = f.blocks.iter().map(|b| (b + 1).to_string()).collect();
                        format!(
                            "factor {}: blocks {} dim {} weight {} delta {}\n",
                            i + 1,
                            blocks.join(","),
                            f.algebra.dim(),
                            f.weight,
                            f.delta
                        )
                    })
                    .collect()),
            }
        }
    }
}

fn parse_group(spec: &str) -> Result<Group, CliError> {
    Ok(Group::from_spec(spec)?)
}

fn parse_word(group: &Group, text: &str) -> Result<Word, CliError> {
    Ok(Word::parse(group, text)?)
}

fn parse_labels(group: &Group, text: &str) -> Result<Vec<GroupElement>, CliError> {
    Ok(parse_word(group, text)?.letters().to_vec())
}

fn decorated(cli: &Cli, cmd: &DecoratedCmd) -> Result<String, CliError> {
    no_csv(cli)?;
    let labels = match cmd {
        DecoratedCmd::Count { labels, .. } | DecoratedCmd::List { labels } => labels,
    };
    let group = parse_group(&labels.group)?;
    let upper = parse_labels(&group, &labels.upper_labels)?;
    let lower = parse_labels(&group, &labels.lower_labels)?;
    match cmd {
        DecoratedCmd::Count { strict, .. } => {
            let count = decorated::decorated_count_with_limit(&group, &upper, &lower, cli.max_points)?;
            if !strict {
                return match cli.format {
                    Format::Json => to_json(&json!({ "count": count })),
                    _ => Ok(count.to_string()),
                };
            }
            let via_fusion = fusion::hom_dimension_via_fusion(&group, &upper, &lower)?;
            if via_fusion != count {
                eprintln!("discrepancy: {count} admissible diagrams but the fusion rules give {via_fusion}");
            }
            match cli.format {
                Format::Json => to_json(&json!({
                    "count": count,
                    "fusion": via_fusion,
                    "agrees": count == via_fusion,
                })),
                _ => Ok(format!("count: {count}\nfusion: {via_fusion}\nagrees: {}\n", count == via_fusion)),
            }
        }
        DecoratedCmd::List { .. } => {
            let mut all: Vec<DecoratedPartition> = Vec::new();
            decorated::for_each_decorated(&group, &upper, &lower, cli.max_points, |p| {
                all.push(DecoratedPartition::new(&group, p.clone(), upper.clone(), lower.clone()).expect("admissible"))
            })?;
            match cli.format {
                Format::Json => to_json(&all.iter().map(|d| d.to_json(&group)).collect::<Vec<_>>()),
                _ => Ok(all.iter().map(|d| format!("{}\n", d.partition)).collect()),
            }
        }
    }
}

type Alternating = AlternatingWord<Word>;

fn parse_alternating(group: &Group, rings: &[WordRing], text: &str) -> Result<Alternating, CliError> {
    let text = text.trim();
    if text.is_empty() || text == "∅" {
        return Ok(AlternatingWord::empty());
    }
    let mut letters = Vec::new();
    for part in text.split(';') {
        let (factor, word) = part
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("expected <factor>:<word>, found {part:?}")))?;
        let factor: usize = factor
            .trim()
            .parse()
            .ok()
            .filter(|&f| f >= 1)
            .ok_or_else(|| CliError::Parse(format!("bad factor number {factor:?}")))?;
        letters.push((factor - 1, parse_word(group, word)?));
    }
    Ok(AlternatingWord::new(rings, letters)?)
}

fn show_alternating(group: &Group, w: &Alternating) -> String {
    if w.is_empty() {
        return "∅".into();
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|(f, label)| format!("{}:{}", f + 1, label.display(group)))
        .collect();
    parts.join(";")
}

fn fusion(cli: &Cli, cmd: &FusionCmd) -> Result<String, CliError> {
    no_csv(cli)?;
    match cmd {
        FusionCmd::Product { group, x, y } => {
            let g = parse_group(group)?;
            let prod = fusion::fusion_product(&g, &parse_word(&g, x)?, &parse_word(&g, y)?)?;
            match cli.format {
                Format::Json => to_json(&prod.to_json(&g)),
                _ => Ok(prod.display(&g)),
            }
        }
        FusionCmd::Dim { group, word, n } => {
            let g = parse_group(group)?;
            Ok(fusion::dimension(&g, &parse_word(&g, word)?, *n)?.to_string())
        }
        FusionCmd::TrivialMult { group, x, y } => {
            let g = parse_group(group)?;
            Ok(fusion::multiplicity_of_trivial(&g, &parse_word(&g, x)?, &parse_word(&g, y)?)?.to_string())
        }
        FusionCmd::ATrivialMult { group, word } => {
            let g = parse_group(group)?;
            Ok(fusion::a_rep_trivial_multiplicity(&g, &parse_labels(&g, word)?)?.to_string())
        }
        FusionCmd::Freeprod { group, algebra, dims, x, y } => {
            let g = parse_group(group)?;
            let rings = match (algebra, dims) {
                (Some(path), _) => WordRing::for_algebra(&g, &read_algebra(path)?)?,
                (None, Some(dims)) => dims
                    .split(',')
                    .map(|d| {
                        let n = d
                            .trim()
                            .parse()
                            .map_err(|_| CliError::Parse(format!("bad dimension {d:?}")))?;
                        Ok(WordRing::new(g.clone(), n)?)
                    })
                    .collect::<Result<_, CliError>>()?,
                (None, None) => return Err(CliError::Usage("pass --algebra or --dims".into())),
            };
            let (wx, wy) = (parse_alternating(&g, &rings, x)?, parse_alternating(&g, &rings, y)?);
            let prod: Combination<Alternating> = fusion::free_product_fusion(&rings, &wx, &wy)?;
            match cli.format {
                Format::Json => to_json(
                    &prod
                        .iter()
                        .map(|(w, mult)| {
                            let word: Vec<_> = w
                                .letters()
                                .iter()
                                .map(|(f, label)| json!({ "factor": f + 1, "label": label.names(&g) }))
                                .collect();
                            json!({ "word": word, "mult": mult })
                        })
                        .collect::<Vec<_>>(),
                ),
                _ => {
                    let parts: Vec<String> =
                        prod.iter().map(|(w, m)| format!("{}:{m}", show_alternating(&g, w))).collect();
                    Ok(format!("{{{}}}", parts.join(", ")))
                }
            }
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::SizeLimit { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Io { .. } => CliError::File(e.to_string()),
            GroupError::Spec(_) | GroupError::UnknownName(_) => CliError::Parse(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TensorMapError> for CliError {
    fn from(e: TensorMapError) -> Self {
        match e {
            TensorMapError::SizeLimit { .. } => CliError::Resource(e.to_string()),
            TensorMapError::Partition(p) => p.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DecoratedError> for CliError {
    fn from(e: DecoratedError) -> Self {
        match e {
            DecoratedError::Partition(p) => p.into(),
            DecoratedError::Group(g) => g.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        match e {
            FusionError::Group(g) => g.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
