//! Command-line frontend for the `sympcp` toolkit: validate and transform
//! correspondence instances, reduce semigroup word problems, run bounded
//! searches, encode pairs as integer matrices, and verify or factor
//! generator relations.
//!
//! Every subcommand is a thin wrapper over a single library operation and
//! writes a structured report to standard output (or to `--output FILE`),
//! as JSON by default or as plain text with `--format text`. Exit codes
//! encode the verdict:
//!
//! * `0` — affirmative: solution or relation found, verification passed,
//!   or transformation succeeded;
//! * `1` — negative: proved unsolvable, or a verification failed;
//! * `2` — usage or input-format error;
//! * `3` — a bounded search exhausted its limits without a verdict.
//!
//! Exit codes depend only on the structured result, so identical inputs
//! always give identical codes and byte-identical JSON reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sympcp::json::{
    DerivationDoc, EmbeddingReportDoc, FactorizationDoc, GammaDoc, InstanceDoc, MatricesDoc,
    MatrixDoc, PresentationDoc, RelationDoc, RelationOutcomeDoc, SolutionDoc, SolveOutcomeDoc,
    StringPairDoc,
};
use sympcp::{
    build_gamma, build_gamma_reduced, build_matrices, build_pcp, build_sympcp,
    derivation_to_solution, enumerate_solutions, factor_blocks, find_relation,
    matrix_relation_check, matrix_to_pair, pair_to_matrix, relation_from_solution,
    relation_from_solution_symmetric, solution_to_derivation, solve, solve_with_threads,
    verify_embedding, verify_relation, Alphabet, Derivation, Error, GammaGenerator, GammaRelation,
    GammaTag, PcpInstance, PcpSolution, Presentation, SearchLimits, StringPair, Word,
};

#[derive(Parser)]
#[command(name = "sympcp", version, about = "Symmetric correspondence toolkit: bounded solving, word-problem reductions, matrix encodings, and relation certificates", long_about = None)]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Input file (JSON).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct LimitArgs {
    /// Most pairs in a candidate solution; for relation search, the
    /// longest combined length of the two generator sequences.
    #[arg(long, default_value_t = 12)]
    max_tiles: usize,

    /// Longest unmatched overhang kept while searching.
    #[arg(long, default_value_t = 64)]
    max_overhang: usize,

    /// Most distinct search states explored.
    #[arg(long, default_value_t = 1 << 20)]
    max_states: usize,
}

impl LimitArgs {
    fn to_limits(&self) -> Result<SearchLimits> {
        SearchLimits::new(self.max_tiles, self.max_overhang, self.max_states)
            .context("invalid search limits")
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// Derivation file in, solution of the reduced instance out.
    ToSolution,
    /// Solution file in, derivation between --x and --y out.
    ToDerivation,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file: well-formed non-trivial pairs, and whether
    /// the pair set is closed under coordinate swap.
    Validate(InputArgs),

    /// Close an instance under coordinate swap and print the result.
    Symmetrize(InputArgs),

    /// Search for a solution within bounded limits.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Worker threads for the layer-parallel search.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        threads: u16,
    },

    /// List every solution that uses at most --max-tiles pairs.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        /// Most pairs in an enumerated solution.
        #[arg(long, default_value_t = 6)]
        max_tiles: usize,
    },

    /// Reduce a word problem (does y derive from x?) to a symmetric
    /// correspondence instance.
    Reduce {
        /// Presentation file (JSON).
        #[arg(long)]
        presentation: PathBuf,
        /// Starting word, as a token string.
        #[arg(long)]
        x: String,
        /// Target word, as a token string.
        #[arg(long)]
        y: String,
        /// Emit the one-directional variant instead of the symmetric one.
        #[arg(long)]
        asymmetric: bool,
    },

    /// Convert a derivation into a solution of the reduced instance, or a
    /// solution back into a derivation.
    Translate {
        /// Presentation file (JSON).
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        input: InputArgs,
        /// Starting word; required with to-derivation, cross-checked
        /// against the derivation with to-solution.
        #[arg(long)]
        x: Option<String>,
        /// Target word; required with to-derivation, cross-checked
        /// against the derivation with to-solution.
        #[arg(long)]
        y: Option<String>,
    },

    /// Recode an instance over any alphabet into one over 0,1.
    EncodeBinary(InputArgs),

    /// Print the 3x3 matrix encoding of a binary instance.
    Matrices(InputArgs),

    /// Encode one (w, j) string pair as its 3x3 matrix.
    EncodePair {
        /// Pair word over 0,1 (may be empty).
        #[arg(long, default_value = "")]
        w: String,
        /// Index word over 0,1,2,3 (may be empty).
        #[arg(long, default_value = "")]
        j: String,
    },

    /// Decode a 3x3 matrix back into the (w, j) string pair it encodes.
    DecodeMatrix(InputArgs),

    /// Randomized check that matrix products decode to concatenated pairs.
    VerifyEmbedding {
        #[command(flatten)]
        input: InputArgs,
        /// Random product sequences to test.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Longest product sequence tested.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Seed for the trial generator; fixed default keeps runs reproducible.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// List an instance's generator set: tags, string pairs, matrices.
    Gamma(InputArgs),

    /// List the reduced generator set (no barred generators).
    GammaReduced(InputArgs),

    /// Print the generator relation induced by a solution.
    RelationFromSolution {
        #[command(flatten)]
        input: InputArgs,
        /// Solution indices, comma-separated.
        #[arg(long, required = true, value_delimiter = ',')]
        indices: Vec<usize>,
        /// Use the barred-generator-free form (symmetric instances only).
        #[arg(long)]
        symmetric: bool,
    },

    /// Search for a shortest nontrivial generator relation.
    FindRelation {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Search over the reduced generator set.
        #[arg(long)]
        reduced: bool,
    },

    /// Check a claimed relation: equal products, different first factors,
    /// different last factors.
    VerifyRelation {
        #[command(flatten)]
        input: InputArgs,
        /// Relation file (JSON).
        #[arg(long)]
        relation: PathBuf,
        /// Verify against the reduced generator set.
        #[arg(long)]
        reduced: bool,
    },

    /// Factor a verified relation into blocks and extract the solution
    /// they spell.
    FactorBlocks {
        #[command(flatten)]
        input: InputArgs,
        /// Relation file (JSON).
        #[arg(long)]
        relation: PathBuf,
    },

    /// Check a relation by multiplying the encoded matrices of both sides.
    MatrixRelationCheck {
        #[command(flatten)]
        input: InputArgs,
        /// Relation file (JSON).
        #[arg(long)]
        relation: PathBuf,
    },

    /// Walk the doubling instance end to end: the bounded solver proves it
    /// unsolvable, yet its generators satisfy relations, each of which
    /// factors into blocks spelling a solution of the symmetric closure.
    DemoCounterexample,
}

#[derive(Clone, Copy)]
enum Verdict {
    Affirmative,
    Negative,
    Exhausted,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Affirmative => 0,
            Verdict::Negative => 1,
            Verdict::Exhausted => 3,
        }
    }
}

struct Report {
    verdict: Verdict,
    body: Value,
    text: String,
}

impl Report {
    fn new(verdict: Verdict, body: Value, text: String) -> Self {
        Report {
            verdict,
            body,
            text,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let report = dispatch(&cli.command)?;
    let rendered = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.body)?;
            s.push('\n');
            s
        }
        Format::Text => report.text,
    };
    match &cli.output {
        Some(path) => {
            fs::write(path, rendered).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{rendered}"),
    }
    Ok(ExitCode::from(report.verdict.code()))
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::Validate(input) => cmd_validate(&input.input),
        Command::Symmetrize(input) => cmd_symmetrize(&input.input),
        Command::Solve {
            input,
            limits,
            threads,
        } => cmd_solve(&input.input, limits, *threads as usize),
        Command::Enumerate { input, max_tiles } => cmd_enumerate(&input.input, *max_tiles),
        Command::Reduce {
            presentation,
            x,
            y,
            asymmetric,
        } => cmd_reduce(presentation, x, y, *asymmetric),
        Command::Translate {
            presentation,
            direction,
            input,
            x,
            y,
        } => cmd_translate(
            presentation,
            *direction,
            &input.input,
            x.as_deref(),
            y.as_deref(),
        ),
        Command::EncodeBinary(input) => cmd_encode_binary(&input.input),
        Command::Matrices(input) => cmd_matrices(&input.input),
        Command::EncodePair { w, j } => cmd_encode_pair(w, j),
        Command::DecodeMatrix(input) => cmd_decode_matrix(&input.input),
        Command::VerifyEmbedding {
            input,
            trials,
            max_len,
            seed,
        } => cmd_verify_embedding(&input.input, *trials, *max_len, *seed),
        Command::Gamma(input) => cmd_gamma(&input.input, false),
        Command::GammaReduced(input) => cmd_gamma(&input.input, true),
        Command::RelationFromSolution {
            input,
            indices,
            symmetric,
        } => cmd_relation_from_solution(&input.input, indices, *symmetric),
        Command::FindRelation {
            input,
            limits,
            reduced,
        } => cmd_find_relation(&input.input, limits, *reduced),
        Command::VerifyRelation {
            input,
            relation,
            reduced,
        } => cmd_verify_relation(&input.input, relation, *reduced),
        Command::FactorBlocks { input, relation } => cmd_factor_blocks(&input.input, relation),
        Command::MatrixRelationCheck { input, relation } => {
            cmd_matrix_relation_check(&input.input, relation)
        }
        Command::DemoCounterexample => cmd_demo(),
    }
}

// ---------------------------------------------------------------- loading

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn load_instance(path: &Path) -> Result<PcpInstance> {
    let doc: InstanceDoc = load_json(path)?;
    doc.to_instance()
        .with_context(|| format!("invalid instance in {}", path.display()))
}

fn load_presentation(path: &Path) -> Result<Presentation> {
    let doc: PresentationDoc = load_json(path)?;
    doc.to_presentation()
        .with_context(|| format!("invalid presentation in {}", path.display()))
}

fn load_relation(path: &Path) -> Result<GammaRelation> {
    let doc: RelationDoc = load_json(path)?;
    doc.to_relation()
        .with_context(|| format!("invalid relation in {}", path.display()))
}

// -------------------------------------------------------- text rendering

fn word_text(w: &Word) -> String {
    if w.is_empty() {
        "-".to_owned()
    } else {
        w.to_string()
    }
}

fn plain_text(w: &str) -> &str {
    if w.is_empty() {
        "-"
    } else {
        w
    }
}

fn instance_text(inst: &PcpInstance) -> String {
    let mut out = format!("alphabet: {}\n", inst.alphabet().tokens().join(" "));
    let _ = writeln!(out, "pairs ({}):", inst.k());
    for (i, (u, v)) in inst.pairs().iter().enumerate() {
        let _ = writeln!(out, "  {i}: {} | {}", word_text(u), word_text(v));
    }
    out
}

fn indices_text(indices: &[usize]) -> String {
    indices
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn tags_line(tags: &[String]) -> String {
    tags.join(" ")
}

fn relation_text(doc: &RelationDoc) -> String {
    format!("p: {}\nq: {}\n", tags_line(&doc.p), tags_line(&doc.q))
}

fn matrix_text(doc: &MatrixDoc) -> String {
    let row = |r: &[String; 3]| format!("[{}]", r.join(","));
    format!(
        "[{},{},{}]",
        row(&doc.rows[0]),
        row(&doc.rows[1]),
        row(&doc.rows[2])
    )
}

fn solve_outcome_text(doc: &SolveOutcomeDoc) -> String {
    match doc {
        SolveOutcomeDoc::Solution { indices } => format!("solution: {}\n", indices_text(indices)),
        SolveOutcomeDoc::Unsolvable { reason } => format!("unsolvable: {reason}\n"),
        SolveOutcomeDoc::Exhausted => "exhausted: no verdict within the given limits\n".to_owned(),
    }
}

fn derivation_text(d: &Derivation) -> String {
    let mut out = String::new();
    for (i, step) in d.steps().iter().enumerate() {
        if i == 0 {
            let _ = writeln!(out, "{step}");
        } else {
            match d.witnesses()[i - 1] {
                Some(w) => {
                    let _ = writeln!(out, "{step}   [relation {} at {}]", w.relation, w.position);
                }
                None => {
                    let _ = writeln!(out, "{step}   [copy]");
                }
            }
        }
    }
    out
}

fn gamma_text(doc: &GammaDoc) -> String {
    let mut out = String::new();
    for g in &doc.generators {
        let _ = writeln!(
            out,
            "{}: ({}, {}) {}",
            g.tag,
            plain_text(&g.w),
            plain_text(&g.j),
            matrix_text(&g.matrix)
        );
    }
    out
}

fn factorization_text(doc: &FactorizationDoc) -> String {
    let mut out = String::new();
    for (i, block) in doc.blocks.iter().enumerate() {
        let _ = writeln!(
            out,
            "block {i}: {} indices {} | b: {} | c: {}",
            block.kind,
            indices_text(&block.indices),
            tags_line(&block.b),
            tags_line(&block.c)
        );
    }
    let _ = writeln!(out, "solution: {}", indices_text(&doc.solution.indices));
    out
}

// ------------------------------------------------------------- commands

fn cmd_validate(path: &Path) -> Result<Report> {
    let doc: InstanceDoc = load_json(path)?;
    match doc.to_instance() {
        Ok(inst) => Ok(Report::new(
            Verdict::Affirmative,
            json!({
                "valid": true,
                "alphabet": inst.alphabet().tokens(),
                "pairs": inst.k(),
                "symmetric": inst.is_symmetric(),
            }),
            format!(
                "valid: {} pairs over {{{}}}, {}\n",
                inst.k(),
                inst.alphabet().tokens().join(" "),
                if inst.is_symmetric() {
                    "symmetric"
                } else {
                    "not symmetric"
                }
            ),
        )),
        Err(err) => Ok(Report::new(
            Verdict::Negative,
            json!({"valid": false, "error": err.to_string()}),
            format!("invalid: {err}\n"),
        )),
    }
}

fn cmd_symmetrize(path: &Path) -> Result<Report> {
    let closure = load_instance(path)?.symmetric_closure();
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(InstanceDoc::from_instance(&closure))?,
        instance_text(&closure),
    ))
}

fn cmd_solve(path: &Path, limits: &LimitArgs, threads: usize) -> Result<Report> {
    let inst = load_instance(path)?;
    let outcome = solve_with_threads(&inst, &limits.to_limits()?, threads)?;
    let doc = SolveOutcomeDoc::from_outcome(&outcome);
    let verdict = match doc {
        SolveOutcomeDoc::Solution { .. } => Verdict::Affirmative,
        SolveOutcomeDoc::Unsolvable { .. } => Verdict::Negative,
        SolveOutcomeDoc::Exhausted => Verdict::Exhausted,
    };
    let text = solve_outcome_text(&doc);
    Ok(Report::new(verdict, serde_json::to_value(doc)?, text))
}

fn cmd_enumerate(path: &Path, max_tiles: usize) -> Result<Report> {
    let inst = load_instance(path)?;
    let solutions = enumerate_solutions(&inst, max_tiles)?;
    let verdict = if solutions.is_empty() {
        Verdict::Exhausted
    } else {
        Verdict::Affirmative
    };
    let mut text = String::new();
    if solutions.is_empty() {
        let _ = writeln!(text, "no solutions within {max_tiles} pairs");
    }
    for sol in &solutions {
        let _ = writeln!(text, "{}", indices_text(sol.indices()));
    }
    let body = json!({
        "solutions": solutions
            .iter()
            .map(|s| s.indices().to_vec())
            .collect::<Vec<_>>(),
    });
    Ok(Report::new(verdict, body, text))
}

fn cmd_reduce(presentation: &Path, x: &str, y: &str, asymmetric: bool) -> Result<Report> {
    let pres = load_presentation(presentation)?;
    let x = pres.word(x)?;
    let y = pres.word(y)?;
    let inst = if asymmetric {
        build_pcp(&pres, &x, &y)?
    } else {
        build_sympcp(&pres, &x, &y)?
    };
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(InstanceDoc::from_instance(&inst))?,
        instance_text(&inst),
    ))
}

fn cmd_translate(
    presentation: &Path,
    direction: Direction,
    input: &Path,
    x: Option<&str>,
    y: Option<&str>,
) -> Result<Report> {
    let pres = load_presentation(presentation)?;
    match direction {
        Direction::ToSolution => {
            let doc: DerivationDoc = load_json(input)?;
            let d = doc
                .to_derivation(pres.letters())
                .with_context(|| format!("invalid derivation in {}", input.display()))?;
            if let Some(x) = x {
                ensure!(
                    pres.word(x)? == *d.first(),
                    "--x does not match the derivation's first word"
                );
            }
            if let Some(y) = y {
                ensure!(
                    pres.word(y)? == *d.last(),
                    "--y does not match the derivation's last word"
                );
            }
            match derivation_to_solution(&pres, &d) {
                Ok(sol) => Ok(Report::new(
                    Verdict::Affirmative,
                    serde_json::to_value(SolutionDoc::from_solution(&sol))?,
                    format!("solution: {}\n", indices_text(sol.indices())),
                )),
                Err(err @ Error::InvalidDerivation { .. }) => Ok(Report::new(
                    Verdict::Negative,
                    json!({"ok": false, "error": err.to_string()}),
                    format!("not a derivation: {err}\n"),
                )),
                Err(err) => Err(err.into()),
            }
        }
        Direction::ToDerivation => {
            let x = x.context("--x is required with --direction to-derivation")?;
            let y = y.context("--y is required with --direction to-derivation")?;
            let doc: SolutionDoc = load_json(input)?;
            let sol = doc
                .to_solution()
                .with_context(|| format!("invalid solution in {}", input.display()))?;
            let x = pres.word(x)?;
            let y = pres.word(y)?;
            match solution_to_derivation(&pres, &x, &y, &sol) {
                Ok(d) => Ok(Report::new(
                    Verdict::Affirmative,
                    serde_json::to_value(DerivationDoc::from_derivation(&d))?,
                    derivation_text(&d),
                )),
                Err(err @ (Error::NotASolution | Error::MalformedSolution(_))) => Ok(Report::new(
                    Verdict::Negative,
                    json!({"ok": false, "error": err.to_string()}),
                    format!("not a solution: {err}\n"),
                )),
                Err(err) => Err(err.into()),
            }
        }
    }
}

fn cmd_encode_binary(path: &Path) -> Result<Report> {
    let coded = load_instance(path)?.binary_code()?;
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(InstanceDoc::from_instance(&coded))?,
        instance_text(&coded),
    ))
}

fn cmd_matrices(path: &Path) -> Result<Report> {
    let matrices = build_matrices(&load_instance(path)?)?;
    let doc = MatricesDoc::from_matrices(&matrices);
    let mut text = format!("h: {}\nl: {}\n", doc.h, matrix_text(&doc.l));
    for (i, pair) in doc.pairs.iter().enumerate() {
        let _ = writeln!(text, "pair {i}:");
        let _ = writeln!(text, "  u:    {}", matrix_text(&pair.u));
        let _ = writeln!(text, "  ubar: {}", matrix_text(&pair.ubar));
        let _ = writeln!(text, "  v:    {}", matrix_text(&pair.v));
        let _ = writeln!(text, "  vbar: {}", matrix_text(&pair.vbar));
    }
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(doc)?,
        text,
    ))
}

fn cmd_encode_pair(w: &str, j: &str) -> Result<Report> {
    let pair = StringPair::parse(w, j)?;
    let doc = MatrixDoc::from_matrix(&pair_to_matrix(&pair));
    let text = format!("{}\n", matrix_text(&doc));
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(doc)?,
        text,
    ))
}

fn cmd_decode_matrix(path: &Path) -> Result<Report> {
    let doc: MatrixDoc = load_json(path)?;
    let matrix = doc
        .to_matrix()
        .with_context(|| format!("invalid matrix in {}", path.display()))?;
    match matrix_to_pair(&matrix) {
        Ok(pair) => {
            let doc = StringPairDoc::from_pair(&pair);
            let text = format!("({}, {})\n", plain_text(&doc.w), plain_text(&doc.j));
            Ok(Report::new(
                Verdict::Affirmative,
                serde_json::to_value(doc)?,
                text,
            ))
        }
        Err(err @ Error::NotInImage(_)) => Ok(Report::new(
            Verdict::Negative,
            json!({"decodable": false, "error": err.to_string()}),
            format!("not decodable: {err}\n"),
        )),
        Err(err) => Err(err.into()),
    }
}

fn cmd_verify_embedding(path: &Path, trials: usize, max_len: usize, seed: u64) -> Result<Report> {
    let report = verify_embedding(&load_instance(path)?, trials, max_len, seed)?;
    let doc = EmbeddingReportDoc::from_report(&report);
    let verdict = if doc.passed {
        Verdict::Affirmative
    } else {
        Verdict::Negative
    };
    let mut text = format!(
        "trials: {}\npassed: {}\n",
        doc.trials,
        if doc.passed { "yes" } else { "no" }
    );
    for failure in &doc.failures {
        let _ = writeln!(
            text,
            "failure: {} ({})",
            failure.sequence.join(" "),
            failure.detail
        );
    }
    Ok(Report::new(verdict, serde_json::to_value(doc)?, text))
}

fn build_generators(inst: &PcpInstance, reduced: bool) -> Result<Vec<GammaGenerator>> {
    Ok(if reduced {
        build_gamma_reduced(inst)?
    } else {
        build_gamma(inst)?
    })
}

fn cmd_gamma(path: &Path, reduced: bool) -> Result<Report> {
    let gens = build_generators(&load_instance(path)?, reduced)?;
    let doc = GammaDoc::from_generators(&gens);
    let text = gamma_text(&doc);
    Ok(Report::new(
        Verdict::Affirmative,
        serde_json::to_value(doc)?,
        text,
    ))
}

fn cmd_relation_from_solution(path: &Path, indices: &[usize], symmetric: bool) -> Result<Report> {
    let inst = load_instance(path)?;
    let sol = PcpSolution::new(indices.to_vec())?;
    let built = if symmetric {
        relation_from_solution_symmetric(&inst, &sol)
    } else {
        relation_from_solution(&inst, &sol)
    };
    match built {
        Ok(rel) => {
            let doc = RelationDoc::from_relation(&rel);
            let text = relation_text(&doc);
            Ok(Report::new(
                Verdict::Affirmative,
                serde_json::to_value(doc)?,
                text,
            ))
        }
        Err(err @ Error::NotASolution) => Ok(Report::new(
            Verdict::Negative,
            json!({"ok": false, "error": err.to_string()}),
            format!("not a solution: {err}\n"),
        )),
        Err(err) => Err(err.into()),
    }
}

fn cmd_find_relation(path: &Path, limits: &LimitArgs, reduced: bool) -> Result<Report> {
    let gens = build_generators(&load_instance(path)?, reduced)?;
    let outcome = find_relation(&gens, &limits.to_limits()?)?;
    let doc = RelationOutcomeDoc::from_outcome(&outcome);
    let (verdict, text) = match &doc {
        RelationOutcomeDoc::Relation { p, q } => (
            Verdict::Affirmative,
            format!("p: {}\nq: {}\n", tags_line(p), tags_line(q)),
        ),
        RelationOutcomeDoc::Exhausted => (
            Verdict::Exhausted,
            "exhausted: no relation within the given limits\n".to_owned(),
        ),
    };
    Ok(Report::new(verdict, serde_json::to_value(doc)?, text))
}

fn cmd_verify_relation(path: &Path, relation: &Path, reduced: bool) -> Result<Report> {
    let gens = build_generators(&load_instance(path)?, reduced)?;
    let rel = load_relation(relation)?;
    let verified = verify_relation(&gens, &rel)?;
    Ok(Report::new(
        if verified {
            Verdict::Affirmative
        } else {
            Verdict::Negative
        },
        json!({"verified": verified}),
        format!("verified: {}\n", if verified { "yes" } else { "no" }),
    ))
}

fn cmd_factor_blocks(path: &Path, relation: &Path) -> Result<Report> {
    let inst = load_instance(path)?;
    let rel = load_relation(relation)?;
    match factor_blocks(&inst, &rel) {
        Ok(fact) => {
            let doc = FactorizationDoc::from_factorization(&fact);
            let text = factorization_text(&doc);
            Ok(Report::new(
                Verdict::Affirmative,
                serde_json::to_value(doc)?,
                text,
            ))
        }
        Err(err @ (Error::UnverifiedRelation | Error::MalformedRelation(_))) => Ok(Report::new(
            Verdict::Negative,
            json!({"ok": false, "error": err.to_string()}),
            format!("does not factor: {err}\n"),
        )),
        Err(err) => Err(err.into()),
    }
}

fn cmd_matrix_relation_check(path: &Path, relation: &Path) -> Result<Report> {
    let inst = load_instance(path)?;
    let rel = load_relation(relation)?;
    let equal = matrix_relation_check(&inst, &rel)?;
    Ok(Report::new(
        if equal {
            Verdict::Affirmative
        } else {
            Verdict::Negative
        },
        json!({"equal": equal}),
        format!(
            "matrix products equal: {}\n",
            if equal { "yes" } else { "no" }
        ),
    ))
}

fn cmd_demo() -> Result<Report> {
    use GammaTag::{Eps2, Ubar, Vbar, U, V};
    let base = PcpInstance::parse(Alphabet::binary(), &[("00", "0")])?;
    let gens = build_gamma(&base)?;
    let outcome = solve(&base, &SearchLimits::new(8, 16, 1 << 12)?)?;
    let solve_doc = SolveOutcomeDoc::from_outcome(&outcome);
    let unsolvable = matches!(solve_doc, SolveOutcomeDoc::Unsolvable { .. });

    let relations = [
        GammaRelation::new(vec![U(0), Eps2, Eps2, Vbar(0)], vec![Eps2, V(0), Ubar(0)]),
        GammaRelation::new(vec![U(0), Eps2, Eps2, V(0)], vec![Eps2, V(0), U(0), Eps2]),
        GammaRelation::new(
            vec![U(0), Ubar(0), Eps2, V(0), Vbar(0)],
            vec![Eps2, V(0), Vbar(0), U(0), Ubar(0)],
        ),
    ];

    let mut all_checked = unsolvable;
    let mut rel_bodies = Vec::new();
    let mut text = format!(
        "instance:\n{}bounded solve: {}",
        instance_text(&base),
        solve_outcome_text(&solve_doc)
    );
    for (i, rel) in relations.iter().enumerate() {
        let verified = verify_relation(&gens, rel)?;
        let matrices_agree = matrix_relation_check(&base, rel)?;
        let fact = factor_blocks(&base, rel)?;
        let fact_doc = FactorizationDoc::from_factorization(&fact);
        all_checked &= verified && matrices_agree;
        let rel_doc = RelationDoc::from_relation(rel);
        let _ = write!(
            text,
            "relation {}:\n{}verified: {}   matrices agree: {}\n{}",
            i + 1,
            relation_text(&rel_doc),
            if verified { "yes" } else { "no" },
            if matrices_agree { "yes" } else { "no" },
            factorization_text(&fact_doc)
        );
        rel_bodies.push(json!({
            "p": rel_doc.p,
            "q": rel_doc.q,
            "verified": verified,
            "matrices_agree": matrices_agree,
            "factorization": serde_json::to_value(fact_doc)?,
        }));
    }
    let _ = writeln!(
        text,
        "every relation factors into a solution of the symmetric closure"
    );
    let body = json!({
        "instance": serde_json::to_value(InstanceDoc::from_instance(&base))?,
        "solve": serde_json::to_value(solve_doc)?,
        "relations": rel_bodies,
    });
    Ok(Report::new(
        if all_checked {
            Verdict::Affirmative
        } else {
            Verdict::Negative
        },
        body,
        text,
    ))
}
