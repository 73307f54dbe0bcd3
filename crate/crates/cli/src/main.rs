use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qexpand::config::PipelineConfig;
use qexpand::eval::{evaluate_run, RankedRun};
use qexpand::expansion::SelectionMode;
use qexpand::index::InvertedIndex;
use qexpand::pipeline::{
    load_corpus, load_relatedness, load_stoplist, load_topics, run_topics, RunMode, RunSettings,
};
use qexpand::relatedness::Relatedness;
use qexpand::retrieval::Model;
use qexpand::synthetic;
use qexpand::trec::{read_qrels, read_run};

#[derive(Parser)]
#[command(
    name = "qexpand",
    version,
    about = "Query expansion with ESA, WordNet and collocation relatedness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Pipeline configuration file (key = value lines).
    #[arg(short, long)]
    config: PathBuf,

    /// Override a configuration key, e.g. `--set t1=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::load(&self.config)?;
        let cwd = std::env::current_dir()?;
        for o in &self.overrides {
            cfg.apply_override(o, &cwd)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the inverted index for the configured corpus.
    Index {
        #[command(flatten)]
        config: ConfigArgs,
        /// Replace an existing index file.
        #[arg(long)]
        force: bool,
    },
    /// Retrieve all topics, optionally expanding queries.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// baseline, esa, ewc, or all (every candidate, no selection).
        #[arg(long, default_value = "ewc")]
        mode: RunMode,
    },
    /// Score a run file against qrels.
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        qrels: PathBuf,
        /// Minimum grade counted as relevant.
        #[arg(long, default_value_t = 2)]
        threshold: u32,
        /// Write the topic-averaged 11-point precision-recall table here.
        #[arg(long, value_name = "FILE")]
        pr: Option<PathBuf>,
        /// Also write the report to this file.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Exit with failure if any topic had to be skipped.
        #[arg(long)]
        warnings_as_errors: bool,
    },
    /// Print the relatedness components for a word pair.
    Relatedness {
        #[command(flatten)]
        config: ConfigArgs,
        word1: String,
        word2: String,
    },
    /// Grid-search t1/t2 and print average precision / R-precision per model.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.65,0.67,0.69,0.75")]
        t1: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.07,0.08,0.09,0.1,0.11,0.12,0.13,0.15"
        )]
        t2: Vec<f64>,
        /// esa or ewc.
        #[arg(long, default_value = "ewc")]
        mode: SelectionMode,
        #[arg(long, value_delimiter = ',', default_value = "inl2,tfidf,bm25")]
        models: Vec<String>,
    },
    /// Write the bundled synthetic test collection.
    GenToy {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = synthetic::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        force: bool,
    },
}

fn index_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output.join("index.bin")
}

fn cmd_index(cfg: &PipelineConfig, force: bool) -> Result<()> {
    let path = index_path(cfg);
    if path.exists() && !force {
        bail!("{} already exists; pass --force to rebuild", path.display());
    }
    let stoplist = load_stoplist(cfg)?;
    let docs = load_corpus(cfg).context("reading corpus")?;
    let index = InvertedIndex::build(&docs, &stoplist)?;
    fs::create_dir_all(&cfg.output)?;
    let tmp = path.with_extension("tmp");
    {
        let f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        index.write_to(std::io::BufWriter::new(f))?;
    }
    fs::rename(&tmp, &path)?;
    println!("documents\t{}", index.num_docs());
    println!("terms\t{}", index.num_terms());
    println!("tokens\t{}", index.total_tokens());
    println!("avg_doc_length\t{:.4}", index.avg_doc_length());
    println!("index\t{}", path.display());
    Ok(())
}

fn load_index(cfg: &PipelineConfig) -> Result<InvertedIndex> {
    let path = index_path(cfg);
    let f = fs::File::open(&path)
        .with_context(|| format!("opening {} (run `qexpand index` first)", path.display()))?;
    Ok(InvertedIndex::read_from(std::io::BufReader::new(f))?)
}

fn cmd_run(cfg: &PipelineConfig, mode: RunMode) -> Result<()> {
    let index = load_index(cfg)?;
    let stoplist = load_stoplist(cfg)?;
    let topics = load_topics(cfg).context("reading topics")?;
    let rel = if mode.needs_relatedness() {
        Some(load_relatedness(cfg, &stoplist).context("loading relatedness resources")?)
    } else {
        None
    };
    let settings = RunSettings::from_config(cfg, mode);
    let out = run_topics(
        &index,
        &topics,
        &stoplist,
        rel.as_ref().map(|r| r as &dyn Relatedness),
        &settings,
    )?;
    let tag = format!("{}-{}", settings.model.name(), mode);
    fs::create_dir_all(&cfg.output)?;
    let run_path = cfg.output.join(format!("run.{tag}.txt"));
    fs::write(&run_path, out.run.to_trec(&tag))?;
    println!("run\t{}", run_path.display());
    if mode.needs_relatedness() {
        let trace_path = cfg.output.join(format!("trace.{tag}.tsv"));
        fs::write(&trace_path, &out.trace)?;
        println!("trace\t{}", trace_path.display());
    }
    let expanded = out
        .outcomes
        .iter()
        .filter(|o| o.expanded != o.query)
        .count();
    println!("topics\t{}\texpanded\t{expanded}", out.outcomes.len());
    Ok(())
}

fn read_file(path: &Path) -> Result<fs::File> {
    fs::File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn cmd_eval(
    run: &Path,
    qrels: &Path,
    threshold: u32,
    pr: Option<&Path>,
    report_path: Option<&Path>,
    strict: bool,
) -> Result<ExitCode> {
    if threshold == 0 {
        bail!("--threshold must be at least 1");
    }
    let lines = read_run(read_file(run)?).with_context(|| format!("parsing {}", run.display()))?;
    let run = RankedRun::from_lines(lines)?;
    let qrels =
        read_qrels(read_file(qrels)?).with_context(|| format!("parsing {}", qrels.display()))?;
    let report = evaluate_run(&run, &qrels, threshold)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = report.to_tsv();
    print!("{text}");
    if let Some(p) = report_path {
        fs::write(p, &text)?;
    }
    if let Some(p) = pr {
        fs::write(p, report.pr_table())?;
    }
    Ok(if strict && !report.warnings.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_relatedness(cfg: &PipelineConfig, w1: &str, w2: &str) -> Result<()> {
    let stoplist = load_stoplist(cfg)?;
    let rel = load_relatedness(cfg, &stoplist)?;
    let m = rel.measures(w1, w2);
    println!("esa\t{:.6}", m.esa);
    println!("wnp\t{:.6}", m.wnp);
    println!("coll\t{:.6}", m.coll);
    println!("ewc\t{:.6}", m.ewc);
    Ok(())
}

fn cmd_sweep(
    cfg: &PipelineConfig,
    t1s: &[f64],
    t2s: &[f64],
    mode: SelectionMode,
    models: &[String],
) -> Result<()> {
    let index = load_index(cfg)?;
    let stoplist = load_stoplist(cfg)?;
    let topics = load_topics(cfg)?;
    let qrels = read_qrels(read_file(cfg.require("qrels")?)?)?;
    let rel = load_relatedness(cfg, &stoplist)?;
    let run_mode = match mode {
        SelectionMode::Ewc => RunMode::Ewc,
        SelectionMode::Esa => RunMode::Esa,
    };
    let mut cfgs = Vec::new();
    for name in models {
        let mut c = cfg.clone();
        c.model_name = name.parse::<Model>()?.name().to_owned();
        cfgs.push(c);
    }
    let evaluate = |c: &PipelineConfig, mode: RunMode| -> Result<(f64, f64)> {
        let out = run_topics(
            &index,
            &topics,
            &stoplist,
            Some(&rel),
            &RunSettings::from_config(c, mode),
        )?;
        let r = evaluate_run(&out.run, &qrels, c.relevance_threshold)?;
        Ok((r.map, r.r_precision))
    };
    print!("t1\tt2");
    for c in &cfgs {
        print!("\t{0}.map\t{0}.Rprec", c.model_name);
    }
    println!();
    for &t1 in t1s {
        for &t2 in t2s {
            print!("{t1}\t{t2}");
            for c in &cfgs {
                let mut c = c.clone();
                c.t1 = t1;
                match mode {
                    SelectionMode::Ewc => c.t2_ewc = t2,
                    SelectionMode::Esa => c.t2_esa = t2,
                }
                c.validate()?;
                let (map, rp) = evaluate(&c, run_mode)?;
                print!("\t{map:.4}\t{rp:.4}");
            }
            println!();
        }
    }
    print!("system\tsystem");
    for c in &cfgs {
        let (map, rp) = evaluate(c, RunMode::Baseline)?;
        print!("\t{map:.4}\t{rp:.4}");
    }
    println!();
    Ok(())
}

fn cmd_gen_toy(out: &Path, seed: u64, force: bool) -> Result<()> {
    if out.join("corpus.trec").exists() && !force {
        bail!(
            "{} already holds a collection; pass --force to overwrite",
            out.display()
        );
    }
    let toy = synthetic::generate(seed);
    toy.write_to(out)?;
    println!(
        "wrote {} documents, {} topics, {} judgments, {} concepts to {}",
        toy.corpus.len(),
        toy.topics.len(),
        toy.qrels.len(),
        toy.concepts.len(),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Index { config, force } => config.load().and_then(|c| cmd_index(&c, *force)),
        Command::Run { config, mode } => config.load().and_then(|c| cmd_run(&c, *mode)),
        Command::Eval {
            run,
            qrels,
            threshold,
            pr,
            report,
            warnings_as_errors,
        } => {
            return match cmd_eval(
                run,
                qrels,
                *threshold,
                pr.as_deref(),
                report.as_deref(),
                *warnings_as_errors,
            ) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Relatedness {
            config,
            word1,
            word2,
        } => config
            .load()
            .and_then(|c| cmd_relatedness(&c, word1, word2)),
        Command::Sweep {
            config,
            t1,
            t2,
            mode,
            models,
        } => config
            .load()
            .and_then(|c| cmd_sweep(&c, t1, t2, *mode, models)),
        Command::GenToy { out, seed, force } => cmd_gen_toy(out, *seed, *force),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
