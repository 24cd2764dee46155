use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use scs_core::model::{Model, ModelFile};
use scs_core::random::{random_scs, rng};
use scs_core::{
    agent_projection, check_space_axioms, delta, delta_oracle, dot, extrusion_inf, extrusion_sup,
    group_projection, join_projection, Algorithm, DeltaEngine, Elem, Error, Group, Lattice,
    OpCounts, OracleLimits, Scs, ValidationReport, Variant, DEFAULT_JOIN_IRREDUCIBLE_CAP,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "scs",
    version,
    about = "Finite spatial constraint systems: validation, distributed spaces, projections and extrusions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the lattice, report distributivity and check every agent's space function.
    Check {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute the distributed space Δ_I of a group.
    Delta {
        path: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        /// oracle|part1|part2|part3; defaults to part3 on distributive lattices, oracle otherwise.
        #[arg(long)]
        alg: Option<Algorithm>,
        /// Print Δ_I at a single element instead of the whole table.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = DEFAULT_JOIN_IRREDUCIBLE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Agent, join or group projection at an element.
    Project {
        path: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        at: String,
        /// Algorithm used for Δ_I when `--kind group`.
        #[arg(long)]
        alg: Option<Algorithm>,
        #[arg(long, default_value_t = DEFAULT_JOIN_IRREDUCIBLE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Derive an extrusion (right inverse) of an agent's space function.
    Extrude {
        path: PathBuf,
        #[arg(long)]
        agent: String,
        #[arg(long, value_enum, default_value_t = Method::Sup)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Run every recursive variant (and the oracle under the cap) and compare.
    Bench {
        path: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        /// Replace the model's agents with this many seeded random space functions.
        #[arg(long)]
        random_agents: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_JOIN_IRREDUCIBLE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Hasse diagram in Graphviz DOT, with agent edges when the model has agents.
    ExportDot { path: PathBuf },
    /// Compile an Aumann structure file into an explicit lattice-and-agents model.
    AumannCompile { path: PathBuf },
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Comma-separated agent ids; defaults to every agent.
    #[arg(long, value_delimiter = ',')]
    group: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Agent,
    Join,
    Group,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Sup,
    Inf,
}

/// A failed command: exit code 1 for bad input, 2 for a failed property or precondition.
enum Failure {
    Input(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotALattice(_)
            | Error::NotSpaceFunction(_)
            | Error::InvalidAgents(_)
            | Error::FrameRequired(..)
            | Error::CapExceeded { .. }
            | Error::NotSurjective(_)
            | Error::NotMeetPreserving(..)
            | Error::TopNotPreserved
            | Error::ExtrusionAxiom(_)
            | Error::GeneratorExhausted => Failure::Property(msg),
            _ => Failure::Input(msg),
        }
    }
}

type Outcome = Result<Status, Failure>;

/// A command that ran to completion can still report a failed property.
#[derive(PartialEq, Eq)]
enum Status {
    Ok,
    PropertyFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { path, json } => cmd_check(&path, json),
        Command::Delta {
            path,
            group,
            alg,
            at,
            cap,
            json,
        } => cmd_delta(&path, &group, alg, at.as_deref(), cap, json),
        Command::Project {
            path,
            group,
            kind,
            at,
            alg,
            cap,
            json,
        } => cmd_project(&path, &group, kind, &at, alg, cap, json),
        Command::Extrude {
            path,
            agent,
            method,
            json,
        } => cmd_extrude(&path, &agent, method, json),
        Command::Bench {
            path,
            group,
            random_agents,
            seed,
            cap,
            json,
        } => cmd_bench(&path, &group, random_agents, seed, cap, json),
        Command::ExportDot { path } => cmd_export_dot(&path),
        Command::AumannCompile { path } => cmd_aumann_compile(&path),
    };
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailed) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_scs(path: &Path) -> Result<Scs, Failure> {
    match scs_core::model::load(path)? {
        Model::Lattice(_) => Err(Failure::Input(format!(
            "{} defines no agents",
            path.display()
        ))),
        Model::Scs(scs) | Model::Aumann { scs, .. } => Ok(scs),
    }
}

fn resolve_group(scs: &Scs, args: &GroupArgs) -> Result<Group, Failure> {
    match &args.group {
        None => Ok(scs.all_agents()),
        Some(names) => Ok(scs.group(names)?),
    }
}

fn default_algorithm(lattice: &Lattice, alg: Option<Algorithm>) -> Algorithm {
    alg.unwrap_or(if lattice.is_distributive() {
        Algorithm::Part(Variant::Part3)
    } else {
        Algorithm::Oracle
    })
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value")
    );
}

/// Two aligned columns, one row per lattice element.
fn print_table(lattice: &Lattice, header: (&str, &str), f: impl Fn(Elem) -> Elem) {
    let width = lattice
        .names()
        .iter()
        .map(|n| n.chars().count())
        .chain([header.0.chars().count()])
        .max()
        .unwrap_or(0);
    println!("{:<width$}  {}", header.0, header.1);
    for c in lattice.elements() {
        println!("{:<width$}  {}", lattice.name(c), lattice.name(f(c)));
    }
}

fn counts_line(c: &OpCounts) -> String {
    format!(
        "joins={} meets={} implications={} recursive_calls={} memo_hits={} meet_candidates={}",
        c.joins, c.meets, c.implications, c.recursive_calls, c.memo_hits, c.meet_candidates
    )
}

fn cmd_check(path: &Path, json: bool) -> Outcome {
    let file = ModelFile::read(path)?;
    let lattice = match file.build_lattice() {
        Ok(l) => l,
        Err(Error::NotALattice(report)) => {
            if json {
                print_json(&json!({ "lattice": report }));
            } else {
                println!("lattice: invalid: {report}");
            }
            return Ok(Status::PropertyFailed);
        }
        Err(e) => return Err(e.into()),
    };
    let witness = lattice
        .distributivity_witness()
        .map(|(a, b, c)| [a, b, c].map(|e| lattice.name(e).to_string()));
    let tables = match file.aumann_model()? {
        Some(model) => {
            let scs = scs_core::instances::aumann_scs(&model)?;
            scs.agents()
                .map(|a| (scs.agent_name(a).to_string(), scs.space(a).table().to_vec()))
                .collect()
        }
        None => file.agent_tables(&lattice)?,
    };
    let reports: Vec<(String, ValidationReport)> = tables
        .iter()
        .map(|(name, t)| Ok((name.clone(), check_space_axioms(&lattice, t)?)))
        .collect::<Result<_, Error>>()?;
    let agents_ok = reports.iter().all(|(_, r)| r.ok());

    if json {
        let agents: serde_json::Map<String, Value> = reports
            .iter()
            .map(|(name, r)| {
                (
                    name.clone(),
                    json!({ "ok": r.ok(), "violations": r.violations() }),
                )
            })
            .collect();
        print_json(&json!({
            "lattice": "ok",
            "distributive": witness.is_none(),
            "witness": witness,
            "agents": agents,
        }));
    } else {
        let mut parts = vec!["lattice: ok".to_string()];
        parts.push(match &witness {
            None => "distributive: yes".into(),
            Some([a, b, c]) => format!("distributive: no, witness ({a},{b},{c})"),
        });
        let names: Vec<&str> = reports.iter().map(|(n, _)| n.as_str()).collect();
        if names.is_empty() {
            parts.push("agents: none".into());
        } else if agents_ok {
            parts.push(format!("agents {}: ok", names.join(",")));
        }
        println!("{}", parts.join(", "));
        for (name, r) in reports.iter().filter(|(_, r)| !r.ok()) {
            println!("agent {name}: {r}");
        }
    }
    Ok(if witness.is_none() && agents_ok {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

fn cmd_delta(
    path: &Path,
    group: &GroupArgs,
    alg: Option<Algorithm>,
    at: Option<&str>,
    cap: usize,
    json: bool,
) -> Outcome {
    let scs = load_scs(path)?;
    let l = scs.lattice();
    let group = resolve_group(&scs, group)?;
    let alg = default_algorithm(l, alg);
    let at = at.map(|name| l.elem(name)).transpose()?;
    let result = delta(
        &scs,
        &group,
        alg,
        OracleLimits {
            max_join_irreducibles: cap,
        },
    )?;
    let names = scs.group_names(&group).join(",");
    match (at, json) {
        (None, true) => print_json(&result.to_json(&scs)),
        (Some(c), true) => print_json(&json!({
            "algorithm": alg.to_string(),
            "at": l.name(c),
            "group": scs.group_names(&group),
            "op_counts": result.op_counts,
            "value": l.name(result.apply(c)),
        })),
        (None, false) => {
            println!("group: {{{names}}}, algorithm: {alg}");
            print_table(l, ("c", "Δ(c)"), |c| result.apply(c));
            println!("op_counts: {}", counts_line(&result.op_counts));
        }
        (Some(c), false) => {
            println!("Δ_{{{names}}}({}) = {}", l.name(c), l.name(result.apply(c)));
            println!("op_counts: {}", counts_line(&result.op_counts));
        }
    }
    Ok(Status::Ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_project(
    path: &Path,
    group: &GroupArgs,
    kind: Kind,
    at: &str,
    alg: Option<Algorithm>,
    cap: usize,
    json: bool,
) -> Outcome {
    let scs = load_scs(path)?;
    let l = scs.lattice();
    let group = resolve_group(&scs, group)?;
    let c = l.elem(at)?;
    let names = scs.group_names(&group).join(",");
    let (symbol, value) = match kind {
        Kind::Agent => {
            let [agent] = group.members() else {
                return Err(Failure::Input(format!(
                    "--kind agent needs exactly one agent, got {{{names}}}"
                )));
            };
            ("π", agent_projection(&scs, *agent, c))
        }
        Kind::Join => ("π", join_projection(&scs, &group, c)),
        Kind::Group => {
            let result = delta(
                &scs,
                &group,
                default_algorithm(l, alg),
                OracleLimits {
                    max_join_irreducibles: cap,
                },
            )?;
            ("Π", group_projection(&scs, &group, c, &result)?)
        }
    };
    if json {
        let kind = match kind {
            Kind::Agent => "agent",
            Kind::Join => "join",
            Kind::Group => "group",
        };
        print_json(&json!({
            "at": l.name(c),
            "group": scs.group_names(&group),
            "kind": kind,
            "value": l.name(value),
        }));
    } else {
        println!("{symbol}_{{{names}}}({}) = {}", l.name(c), l.name(value));
    }
    Ok(Status::Ok)
}

fn cmd_extrude(path: &Path, agent: &str, method: Method, json: bool) -> Outcome {
    let scs = load_scs(path)?;
    let l = scs.lattice();
    let f = scs.space(scs.agent(agent)?);
    let ext = match method {
        Method::Sup => extrusion_sup(f),
        Method::Inf => extrusion_inf(f),
    };
    let ext = match ext {
        Ok(ext) => ext,
        Err(Error::NotSurjective(w)) => {
            return Err(Failure::Property(format!("not surjective, witness {w}")))
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(c) = ext.right_inverse_failure(f) {
        return Err(Failure::Property(format!(
            "right-inverse law fails at {}",
            l.name(c)
        )));
    }
    if json {
        let mut value = ext.to_json();
        value["agent"] = json!(agent);
        value["right_inverse"] = json!(true);
        print_json(&value);
    } else {
        println!("agent: {agent}, method: {}", ext.method());
        print_table(l, ("c", "↑(c)"), |c| ext.apply(c));
        println!(
            "right inverse: ok (δ(↑(c)) = c for all {} elements)",
            l.len()
        );
    }
    Ok(Status::Ok)
}

fn cmd_bench(
    path: &Path,
    group: &GroupArgs,
    random_agents: Option<usize>,
    seed: u64,
    cap: usize,
    json: bool,
) -> Outcome {
    let model = scs_core::model::load(path)?;
    let scs = match (random_agents, model.scs()) {
        (Some(m), _) => random_scs(Arc::clone(model.lattice()), m, &mut rng(seed))?,
        (None, Some(scs)) => scs.clone(),
        (None, None) => {
            return Err(Failure::Input(format!(
                "{} defines no agents; pass --random-agents N",
                path.display()
            )))
        }
    };
    let l = scs.lattice();
    let group = resolve_group(&scs, group)?;

    let mut rows: Vec<(String, Vec<Elem>, OpCounts)> = Vec::new();
    for v in Variant::ALL {
        let mut engine = DeltaEngine::new(&scs, &group, v)?;
        let table: Vec<Elem> = l.elements().map(|c| engine.eval(c)).collect();
        rows.push((Algorithm::Part(v).to_string(), table, engine.counts()));
    }
    let oracle = if l.join_irreducibles().len() <= cap {
        let r = delta_oracle(
            &scs,
            &group,
            OracleLimits {
                max_join_irreducibles: cap,
            },
        )?;
        rows.push(("oracle".into(), r.table.table().to_vec(), r.op_counts));
        true
    } else {
        false
    };
    let agree = rows.iter().all(|(_, t, _)| *t == rows[0].1);

    if json {
        let variants: serde_json::Map<String, Value> = rows
            .iter()
            .map(|(name, _, counts)| (name.clone(), json!(counts)))
            .collect();
        print_json(&json!({
            "agreement": if agree { "ok" } else { "mismatch" },
            "group": scs.group_names(&group),
            "oracle": oracle,
            "seed": seed,
            "variants": variants,
        }));
    } else {
        let header = [
            "variant",
            "joins",
            "meets",
            "implications",
            "recursive_calls",
            "memo_hits",
            "meet_candidates",
        ];
        println!(
            "group: {{{}}}, elements: {}",
            scs.group_names(&group).join(","),
            l.len()
        );
        println!(
            "{:<8}{}",
            header[0],
            header[1..]
                .iter()
                .map(|h| format!("{h:>17}"))
                .collect::<String>()
        );
        for (name, _, c) in &rows {
            let cells = [
                c.joins,
                c.meets,
                c.implications,
                c.recursive_calls,
                c.memo_hits,
                c.meet_candidates,
            ];
            println!(
                "{name:<8}{}",
                cells.iter().map(|x| format!("{x:>17}")).collect::<String>()
            );
        }
        if !oracle {
            println!(
                "oracle: skipped ({} join-irreducibles, cap {cap})",
                l.join_irreducibles().len()
            );
        }
        println!("agreement: {}", if agree { "ok" } else { "mismatch" });
    }
    Ok(if agree {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

fn cmd_export_dot(path: &Path) -> Outcome {
    let model = scs_core::model::load(path)?;
    print!("{}", dot::export(model.lattice(), model.scs()));
    Ok(Status::Ok)
}

fn cmd_aumann_compile(path: &Path) -> Outcome {
    match scs_core::model::load(path)? {
        Model::Aumann { scs, .. } => {
            println!("{}", ModelFile::from_scs(&scs).to_json_string());
            Ok(Status::Ok)
        }
        _ => Err(Failure::Input(format!(
            "{} has no `aumann` section",
            path.display()
        ))),
    }
}
