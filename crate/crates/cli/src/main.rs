use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynjudge::aggregation::{check_rule_property, CheckOptions, RuleProperty};
use dynjudge::report::{emit_report, resolve_agenda, save_operator_table, AgendaInfo, Format, Report, ReportDocument, SearchResult};
use dynjudge::revision::{check_operator_property, make_operator_with, OperatorConfig, OperatorProperty, Requirements};
use dynjudge::search::{replay_witness, verify_escape_routes, CspInstance, DEFAULT_NODE_BUDGET};
use dynjudge::{check_dynamic_rationality, exists_commuting_operator, make_rule, repro_tark_example, Agenda, DynamicOptions, Error, ReproConfig, TiePreset};

const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "dynjudge", version, about = "Check whether judgment aggregation and judgment revision commute")]
struct Cli {
    /// Emit a single JSON report document.
    #[arg(long, global = true)]
    json: bool,

    /// Node budget for operator search.
    #[arg(long, global = true, env = "DYNJUDGE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,

    /// Witnesses stored per report (counts stay exact).
    #[arg(long, global = true, default_value_t = 100)]
    max_witnesses: usize,

    /// Tie-breaking for a bare `hamming` operator.
    #[arg(long, global = true, value_enum, default_value_t = TieArg::Example)]
    tie_policy: TieArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TieArg {
    /// Keep the premises, let the conclusion move.
    Example,
    /// Keep the conclusion, let the premises move.
    Prose,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect an agenda.
    #[command(subcommand)]
    Agenda(AgendaCmd),
    /// Exhaustive property checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Search for a revision operator that commutes with a rule.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Verify the possibility results for weakened operators.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Reproduce a worked example.
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Args, Debug)]
struct AgendaArg {
    /// Bundled agenda name or path to an agenda JSON file.
    #[arg(long, default_value = "cond-subjunctive")]
    agenda: String,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[command(flatten)]
    agenda: AgendaArg,
    /// Aggregation rule, e.g. `majority`, `quota:2`, `dictator:1`.
    #[arg(long)]
    rule: String,
    /// Number of individuals.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum AgendaCmd {
    /// Valuations, literal classification and minimal inconsistent subsets.
    Info(AgendaArg),
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Check aggregation-rule properties.
    Rule {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated properties, or `all`.
        #[arg(long, default_value = "all")]
        property: String,
    },
    /// Check revision-operator properties.
    Op {
        #[command(flatten)]
        agenda: AgendaArg,
        /// Revision operator, e.g. `hamming`, `constant`, `imposed:canonical`.
        #[arg(long)]
        op: String,
        /// Comma-separated properties, or `all`.
        #[arg(long, default_value = "all")]
        property: String,
    },
    /// Check dynamic rationality of a rule and an operator.
    Dynamic {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        op: String,
        /// Skip learnt literals that no rational set contains.
        #[arg(long)]
        exclude_contradictory: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Decide whether some operator with the required properties commutes.
    Operator {
        #[command(flatten)]
        group: GroupArgs,
        /// Required operator properties: successful, conservative, regular,
        /// rational, none.
        #[arg(long, default_value = "regular,rational")]
        require: String,
        /// Write a SAT witness table to this file.
        #[arg(long)]
        dump_witness: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Run every standard rule against the three escape operators.
    Escapes {
        #[command(flatten)]
        agenda: AgendaArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ReproCmd {
    /// The three-member majority example with learnt `p`.
    TarkExample {
        /// Revision operator to use instead of distance-based revision.
        #[arg(long, default_value = "hamming")]
        op: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_resource_limit() { 3 } else { EXIT_USAGE },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn load(arg: &AgendaArg) -> Result<Agenda, Failure> {
    let loaded = resolve_agenda(&arg.agenda)?;
    Ok(loaded.agenda)
}

fn rule_properties(list: &str) -> Result<Vec<RuleProperty>, Failure> {
    if list.trim() == "all" {
        return Ok(RuleProperty::ALL.to_vec());
    }
    list.split(',').map(|s| s.parse().map_err(Failure::from)).collect()
}

fn operator_properties(list: &str) -> Result<Vec<OperatorProperty>, Failure> {
    if list.trim() == "all" {
        return Ok(OperatorProperty::ALL.to_vec());
    }
    list.split(',').map(|s| s.parse().map_err(Failure::from)).collect()
}

fn execute(cli: &Cli) -> Result<(Agenda, Report), Failure> {
    let config = OperatorConfig {
        tie: match cli.tie_policy {
            TieArg::Example => TiePreset::Example,
            TieArg::Prose => TiePreset::Prose,
        },
    };
    let check_opts = CheckOptions {
        max_witnesses: cli.max_witnesses,
        ..Default::default()
    };
    match &cli.command {
        Command::Agenda(AgendaCmd::Info(arg)) => {
            let loaded = resolve_agenda(&arg.agenda)?;
            let info = AgendaInfo::new(&loaded)?;
            Ok((loaded.agenda, Report::AgendaInfo(info)))
        }
        Command::Check(CheckCmd::Rule { group, property }) => {
            let agenda = load(&group.agenda)?;
            let rule = make_rule(&agenda, group.n, &group.rule)?;
            let reports = rule_properties(property)?
                .into_iter()
                .map(|p| check_rule_property(&agenda, &rule, p, &check_opts))
                .collect::<Result<Vec<_>, _>>()?;
            let report = Report::RuleProperties {
                rule: rule.id().to_string(),
                n: group.n,
                reports,
            };
            Ok((agenda, report))
        }
        Command::Check(CheckCmd::Op { agenda, op, property }) => {
            let agenda = load(agenda)?;
            let op = make_operator_with(&agenda, op, &config)?;
            let reports = operator_properties(property)?
                .into_iter()
                .map(|p| check_operator_property(&agenda, &op, p, cli.max_witnesses))
                .collect::<Result<Vec<_>, _>>()?;
            let report = Report::OperatorProperties {
                operator: op.id().to_string(),
                reports,
            };
            Ok((agenda, report))
        }
        Command::Check(CheckCmd::Dynamic {
            group,
            op,
            exclude_contradictory,
        }) => {
            let agenda = load(&group.agenda)?;
            let rule = make_rule(&agenda, group.n, &group.rule)?;
            let op = make_operator_with(&agenda, op, &config)?;
            let opts = DynamicOptions {
                max_witnesses: cli.max_witnesses,
                include_contradictory: !exclude_contradictory,
                ..Default::default()
            };
            let report = check_dynamic_rationality(&agenda, &rule, &op, &opts)?;
            Ok((agenda, Report::Dynamic(report)))
        }
        Command::Search(SearchCmd::Operator {
            group,
            require,
            dump_witness,
        }) => {
            let agenda = load(&group.agenda)?;
            let rule = make_rule(&agenda, group.n, &group.rule)?;
            let required: Requirements = require.parse()?;
            let mut inst = CspInstance::new(&agenda, &rule, required);
            inst.node_budget = cli.budget;
            let outcome = exists_commuting_operator(&inst)?;
            let replay = match outcome.witness() {
                Some(table) => {
                    if let Some(path) = dump_witness {
                        save_operator_table(&agenda, table, path)?;
                    }
                    Some(replay_witness(&agenda, &rule, required, table)?)
                }
                None => None,
            };
            let report = Report::Search(SearchResult {
                rule: rule.id().to_string(),
                n: group.n,
                required: required.describe(),
                outcome,
                replay,
            });
            Ok((agenda, report))
        }
        Command::Verify(VerifyCmd::Escapes { agenda, n }) => {
            let agenda = load(agenda)?;
            let report = verify_escape_routes(&agenda, *n)?;
            Ok((agenda, Report::Escapes(report)))
        }
        Command::Repro(ReproCmd::TarkExample { op }) => {
            let repro = ReproConfig {
                operator: op.clone(),
                tie: config.tie,
            };
            let report = repro_tark_example(&repro)?;
            Ok((dynjudge::fixtures::x_cond(), Report::Repro(report)))
        }
    }
}

fn run(argv: Vec<String>) -> Result<String, Failure> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err(usage(e.to_string())),
            }
        }
    };
    let start = Instant::now();
    let (agenda, report) = execute(&cli)?;
    let outcome = report.outcome();
    let doc = ReportDocument {
        command: argv.into_iter().skip(1).collect(),
        agenda: &agenda,
        report,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    };
    let format = if cli.json { Format::Structured } else { Format::Human };
    let text = emit_report(&doc, format);
    let code = outcome.exit_code() as u8;
    if code == 0 {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure {
            code,
            message: String::new(),
        })
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if !f.message.is_empty() {
                let msg = f.message.trim_end();
                if msg.starts_with("error:") {
                    eprintln!("{msg}");
                } else {
                    eprintln!("error: {msg}");
                }
            }
            ExitCode::from(f.code)
        }
    }
}
