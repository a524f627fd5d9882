use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use smallcancel::cayley::{build_ball, Budget};
use smallcancel::conditions::{classify, Condition, Regime};
use smallcancel::diagram::{enumerate_by_area, enumerate_with_boundary, EnumerationBudget};
use smallcancel::ordering::ordering_for_regime;
use smallcancel::report::{self, read_directives, RunConfig};
use smallcancel::structure::build_structure_graph;
use smallcancel::{parse_presentation, symmetrize, Error, Presentation, Result};

#[derive(Parser)]
#[command(name = "smallcancel", version, about = "Small-cancellation verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a small-cancellation condition, or classify the presentation.
    Check {
        #[command(flatten)]
        common: Common,
        /// C6, C4T4, C3T6, Cprime:<n>, C:<n> or T:<q>.
        #[arg(long)]
        condition: Option<String>,
    },
    /// Build a ball of the Cayley complex.
    Ball(Common),
    /// Enumerate reduced disc diagrams, optionally with a fixed boundary word.
    Diagrams {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        boundary: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_area: usize,
    },
    /// The structure graph of a ball and its nerve.
    Structure(Common),
    /// The ordering of the cover and its verification.
    Order(Common),
    /// Transversals and the free basis of the normal closure.
    Basis(Common),
    /// Every check the regime supports.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Exit nonzero on INCONCLUSIVE as well as FAIL.
        #[arg(long)]
        fail_on_inconclusive: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Presentation file.
    file: PathBuf,
    #[arg(long)]
    radius: Option<usize>,
    /// Budget as key=value pairs; defaults to $SMALLCANCEL_BUDGET.
    #[arg(long)]
    budget: Option<String>,
    /// Overrides the diagram area cap of the budget.
    #[arg(long)]
    budget_area: Option<usize>,
    /// json or dot.
    #[arg(long, default_value = "json")]
    emit: String,
    /// C6, C4T4, C3T6 or Cprime6; defaults to the strongest detected.
    #[arg(long)]
    regime: Option<String>,
    /// least or random:<seed>.
    #[arg(long, default_value = "least")]
    tie_break: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random tie-break policies tried by verify.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Area cap for the diagram checks of verify; defaults to 4.
    #[arg(long)]
    diagram_area: Option<usize>,
    #[arg(long, default_value_t = 5)]
    helly_max: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Record per-check timings in verify reports.
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn load(&self) -> Result<(Presentation, RunConfig)> {
        let text = std::fs::read_to_string(&self.file)?;
        let p = parse_presentation(&text)?;
        let dir = read_directives(&text)?;
        let mut budget = match (&self.budget, &dir.budget) {
            (Some(b), _) => Budget::parse(b)?,
            (None, Some(b)) => {
                let mut base = Budget::from_env()?;
                let over = Budget::parse(b)?;
                merge(&mut base, b, &over);
                base
            }
            (None, None) => Budget::from_env()?,
        };
        if let Some(a) = self.budget_area {
            budget.max_area = a;
        }
        let regime = self
            .regime
            .as_deref()
            .map(|r| r.parse::<Regime>().map_err(Error::Invalid))
            .transpose()?;
        if !matches!(self.emit.as_str(), "json" | "dot") {
            return Err(Error::UnsupportedFormat(self.emit.clone()));
        }
        let cfg = RunConfig {
            presentation: self.file.display().to_string(),
            regime,
            radius: self.radius.or(dir.radius).unwrap_or(3),
            budget,
            tie_break: self.tie_break.parse()?,
            seeds: self.seeds,
            seed: self.seed,
            diagram_area: self.diagram_area.or(dir.diagram_area).unwrap_or(4),
            helly_max: self.helly_max,
            samples: self.samples,
            emit: self.emit.clone(),
            timings: self.timings,
        };
        Ok((p, cfg))
    }
}

/// Copies the keys named in `text` from `over` into `base`.
fn merge(base: &mut Budget, text: &str, over: &Budget) {
    for key in text.split(',').filter_map(|kv| kv.split_once('=')).map(|(k, _)| k.trim()) {
        match key {
            "area" => base.max_area = over.max_area,
            "divisor" => base.area_divisor = over.area_divisor,
            "len" => base.max_word_len = over.max_word_len,
            "nodes" => base.max_nodes = over.max_nodes,
            "lookahead" => base.lookahead = over.lookahead,
            _ => {}
        }
    }
}

fn regime_of(p: &Presentation, cfg: &RunConfig) -> Result<Regime> {
    cfg.regime
        .or_else(|| Regime::primary(&classify(p)))
        .ok_or_else(|| Error::Invalid("the presentation satisfies none of C(6), C(4)-T(4), C(3)-T(6)".into()))
}

fn json_only(cfg: &RunConfig) -> Result<()> {
    if cfg.emit == "json" {
        Ok(())
    } else {
        Err(Error::UnsupportedFormat(format!("{} for this subcommand", cfg.emit)))
    }
}

/// Prints the output; the flag says whether every check passed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Check { common, condition } => {
            let (p, cfg) = common.load()?;
            json_only(&cfg)?;
            let c = condition
                .as_deref()
                .map(|c| c.parse::<Condition>().map_err(Error::Invalid))
                .transpose()?;
            let (v, ok) = report::check_report(&p, &cfg, c);
            print!("{}", report::to_json(&v)?);
            Ok(ok)
        }
        Command::Ball(common) => {
            let (p, cfg) = common.load()?;
            let b = build_ball(&p, cfg.radius, &cfg.budget)?;
            if cfg.emit == "dot" {
                print!("{}", b.to_dot("ball"));
            } else {
                print!("{}", report::to_json(&report::ball_report(&b, &cfg))?);
            }
            Ok(true)
        }
        Command::Diagrams {
            common,
            boundary,
            max_area,
        } => {
            let (p, cfg) = common.load()?;
            let s = symmetrize(&p);
            let budget = EnumerationBudget {
                max_area,
                max_nodes: cfg.budget.max_nodes,
            };
            let ds = match &boundary {
                Some(w) => enumerate_with_boundary(&s, &p.parse_word(w)?, budget)?,
                None => enumerate_by_area(&s, budget)?,
            };
            if cfg.emit == "dot" {
                for (i, d) in ds.iter().enumerate() {
                    print!("{}", d.to_dot(&p, &format!("diagram{i}")));
                }
            } else {
                let views: Vec<_> = ds.iter().map(|d| d.to_view(&p)).collect();
                let v = serde_json::json!({
                    "config": cfg,
                    "boundary": boundary,
                    "max_area": max_area,
                    "count": ds.len(),
                    "diagrams": views,
                });
                print!("{}", report::to_json(&v)?);
            }
            Ok(true)
        }
        Command::Structure(common) => {
            let (p, cfg) = common.load()?;
            let b = build_ball(&p, cfg.radius, &cfg.budget)?;
            let sg = build_structure_graph(&b)?;
            if cfg.emit == "dot" {
                print!("{}", sg.to_dot("structure"));
            } else {
                let regime = regime_of(&p, &cfg).ok();
                print!("{}", report::to_json(&report::structure_report(&p, &sg, regime, &cfg))?);
            }
            Ok(true)
        }
        Command::Order(common) => {
            let (p, cfg) = common.load()?;
            json_only(&cfg)?;
            let regime = regime_of(&p, &cfg)?;
            let b = build_ball(&p, cfg.radius, &cfg.budget)?;
            let sg = build_structure_graph(&b)?;
            let phi = ordering_for_regime(&sg, regime, cfg.tie_break)?;
            let (v, ok) = report::order_report(&sg, &phi, regime, &cfg);
            print!("{}", report::to_json(&v)?);
            Ok(ok)
        }
        Command::Basis(common) => {
            let (p, cfg) = common.load()?;
            json_only(&cfg)?;
            let regime = regime_of(&p, &cfg)?;
            let b = build_ball(&p, cfg.radius, &cfg.budget)?;
            let sg = build_structure_graph(&b)?;
            let phi = ordering_for_regime(&sg, regime, cfg.tie_break)?;
            let (v, ok) = report::basis_report(&b, &sg, &phi, &cfg)?;
            print!("{}", report::to_json(&v)?);
            Ok(ok)
        }
        Command::Verify {
            common,
            fail_on_inconclusive,
        } => {
            let (p, cfg) = common.load()?;
            json_only(&cfg)?;
            let r = report::run_verify(&p, &cfg);
            print!("{}", report::to_json(&r)?);
            Ok(r.passed(fail_on_inconclusive))
        }
    }
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Check { common, .. } | Command::Diagrams { common, .. } | Command::Verify { common, .. } => {
                &common.file
            }
            Command::Ball(c) | Command::Structure(c) | Command::Order(c) | Command::Basis(c) => &c.file,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = cli.command.file().clone();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            ExitCode::from(2)
        }
    }
}
