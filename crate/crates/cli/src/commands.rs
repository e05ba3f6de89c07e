//! Subcommand definitions and their execution.

use std::path::PathBuf;

use capacity_core::constructions::{
    enrichment_map, exponential_map, multiplex, stack, verify_equivalence, EnrichmentKind,
};
use capacity_core::extremal::{
    brute_force_extremal, minimal_architecture, optimal_architecture_nodes,
    optimal_architecture_nodes_input, shallow_region_bound, Budget, Candidate, Objective,
};
use capacity_core::netcap::{
    enumerate_network_functions, exact_network_capacity, network_lower_bounds, network_upper_bounds,
    restricted_capacity_bounds, NetBudget,
};
use capacity_core::polycap::{poly_capacity, poly_capacity_bounds, poly_network_bounds, poly_network_terms};
use capacity_core::setcap::{set_capacity, set_capacity_bounds, CountOptions};
use capacity_core::{truth_table_capped, Architecture, LayeredNetwork, PointSet};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::{load_network, load_point_set, parse_sizes, NetworkJson};
use crate::output::{Document, Format};

#[derive(Debug, Parser)]
#[command(name = "capacity", version, about = "Capacity of linear-threshold networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for the exhaustive counters (0 uses all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    /// Compute exact counts (the default).
    #[arg(long, conflicts_with = "bounds_only")]
    pub exact: bool,
    /// Only evaluate closed-form bounds.
    #[arg(long)]
    pub bounds_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of threshold functions on a point set, with bounds.
    SetCapacity {
        /// Points file, or cube:n.
        points: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Refuse exact counting above this many points.
        #[arg(long, default_value_t = 24)]
        max_points: usize,
    },
    /// Number of functions computed by an architecture, with bounds.
    NetCapacity {
        /// Layer sizes, e.g. 2,2,1.
        #[arg(long)]
        arch: String,
        /// Restrict the inputs to this set (its dimension must equal n1).
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
        /// Enumeration limit as name=value (max_layer_functions, max_depth, max_points).
        #[arg(long)]
        budget: Vec<String>,
        #[arg(long)]
        max_points: Option<usize>,
    },
    /// Closed-form bounds only, for an architecture or a point set.
    Bounds {
        #[arg(long, conflicts_with = "points", required_unless_present = "points")]
        arch: Option<String>,
        #[arg(long)]
        points: Option<String>,
    },
    /// Build and verify an explicit threshold network.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Compare a network with a reference network on every input.
    Verify {
        network: PathBuf,
        #[arg(long)]
        against: PathBuf,
    },
    /// Extremal architectures for the estimated capacity.
    Optimize {
        #[command(subcommand)]
        what: Optimize,
    },
    /// Polynomial threshold capacity.
    Poly {
        #[command(subcommand)]
        what: Poly,
    },
    /// Regions cut by m hidden units on n inputs and output assignments.
    Regions {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Injective threshold map H^n → H^m.
    Enrichment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Select one of the units of a single-layer network with selector bits.
    Multiplex {
        /// Network whose first layer holds the functions f_1..f_m.
        #[arg(long)]
        functions: PathBuf,
        /// Domain of the functions (default: the cube of their dimension).
        #[arg(long)]
        domain: Option<String>,
    },
    /// Chain (n, h1, h2, 1) modules behind a selector.
    Stack {
        #[arg(long, num_args = 1.., required = true)]
        modules: Vec<PathBuf>,
        /// Target layer sizes n_1..n_L for the width accounting.
        #[arg(long)]
        target: Option<String>,
    },
    /// The map H^k → one-hot vectors of length 2^k.
    Exponential {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Optimize {
    /// Best split of N nodes.
    MaxNodes {
        #[arg(long)]
        nodes: usize,
        /// Also run the exhaustive composition search.
        #[arg(long)]
        brute_force: bool,
    },
    /// Best architecture of N nodes with a fixed input layer.
    MaxNodesInput {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        brute_force: bool,
    },
    /// Least capable architecture under a node or weight budget.
    Min {
        #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
        nodes: Option<usize>,
        #[arg(long)]
        weights: Option<usize>,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        brute_force: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Poly {
    /// Degree-d polynomial threshold functions on a point set.
    Set {
        points: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Bounds for A(n,m,1) with degree-d gates.
    Net {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        degree: u64,
    },
}

pub fn run(cli: &Cli) -> Result<Document, CliError> {
    match &cli.command {
        Command::SetCapacity {
            points,
            mode,
            max_points,
        } => {
            let s = load_point_set(points)?;
            if mode.bounds_only {
                return Ok(Document::from_report("set-capacity", &set_capacity_bounds(&s)));
            }
            let opts = CountOptions {
                max_points: *max_points,
                jobs: cli.jobs,
            };
            Ok(Document::from_report("set-capacity", &set_capacity(&s, &opts)?))
        }
        Command::NetCapacity {
            arch,
            points,
            mode,
            budget,
            max_points,
        } => net_capacity(cli, arch, points.as_deref(), mode, budget, *max_points),
        Command::Bounds { arch, points } => match (arch, points) {
            (Some(arch), _) => {
                let arch = Architecture::new(parse_sizes(arch)?)?;
                let mut report = network_upper_bounds(&arch, None);
                let lower = network_lower_bounds(&arch)?;
                report.bounds.extend(lower.bounds);
                report.notes.extend(lower.notes);
                Ok(Document::from_report("bounds", &report))
            }
            (None, Some(points)) => Ok(Document::from_report(
                "bounds",
                &set_capacity_bounds(&load_point_set(points)?),
            )),
            (None, None) => Err(CliError::Input("give --arch or --points".into())),
        },
        Command::Construct { what } => construct(what),
        Command::Verify { network, against } => {
            let net = load_network(network)?;
            let reference = load_network(against)?;
            let table = truth_table_capped(&reference, capacity_core::constructions::VERIFY_CAP)?;
            let eq = verify_equivalence(&net, &table)?;
            if !eq.equal {
                let x = eq.counterexample.unwrap_or_default();
                return Err(CliError::Mismatch(format!(
                    "networks differ at input {}",
                    bits(&x)
                )));
            }
            Ok(Document::new("verify")
                .field("equal", true)
                .field("inputs_checked", 1u64 << net.input_dim()))
        }
        Command::Optimize { what } => optimize(what),
        Command::Poly { what } => match what {
            Poly::Set { points, degree, mode } => {
                let s = load_point_set(points)?;
                let report = if mode.bounds_only {
                    poly_capacity_bounds(&s, *degree)?
                } else {
                    let opts = CountOptions {
                        jobs: cli.jobs,
                        ..CountOptions::default()
                    };
                    poly_capacity(&s, *degree, &opts)?
                };
                Ok(Document::from_report("poly-set", &report))
            }
            Poly::Net { n, m, degree } => {
                let t = poly_network_terms(*n, *m, *degree)?;
                let report = poly_network_bounds(*n, *m, *degree)?;
                Ok(Document::from_report("poly-net", &report)
                    .field("hidden_term", t.hidden.to_string())
                    .field("output_cube_term", t.output_cube.to_string())
                    .field("output_lift_term", t.output_lift.to_string())
                    .field("upper", t.upper.to_string()))
            }
        },
        Command::Regions { n, m } => {
            let r = shallow_region_bound(*n, *m);
            Ok(Document::new("regions")
                .field("n", *n)
                .field("m", *m)
                .field("regions", r.regions.to_string())
                .field("assignment_bound", r.assignment_bound.to_string()))
        }
    }
}

fn net_capacity(
    cli: &Cli,
    arch: &str,
    points: Option<&str>,
    mode: &ModeArgs,
    budget_args: &[String],
    max_points: Option<usize>,
) -> Result<Document, CliError> {
    let arch = Architecture::new(parse_sizes(arch)?)?;
    let mut budget = NetBudget {
        jobs: cli.jobs,
        ..NetBudget::default()
    };
    if let Some(m) = max_points {
        budget.max_points = m;
    }
    for b in budget_args {
        let (name, value) = b
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("budget {b:?} is not name=value")))?;
        let value = value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("budget {b:?} has a non-integer value")))?;
        budget.set(name.trim(), value)?;
    }
    if let Some(points) = points {
        let s = load_point_set(points)?;
        if s.dimension() != arch.input_size() {
            return Err(CliError::Input(format!(
                "points have dimension {}, architecture input is {}",
                s.dimension(),
                arch.input_size()
            )));
        }
        let mut report = restricted_capacity_bounds(&s, &arch.sizes()[1..], &budget)?;
        if !mode.bounds_only {
            report.exact_count = Some(enumerate_network_functions(&arch, &s, &budget)?.count());
        }
        return Ok(Document::from_report("net-capacity", &report));
    }
    if mode.bounds_only {
        let mut report = network_upper_bounds(&arch, None);
        let lower = network_lower_bounds(&arch)?;
        report.bounds.extend(lower.bounds);
        report.notes.extend(lower.notes);
        return Ok(Document::from_report("net-capacity", &report));
    }
    Ok(Document::from_report("net-capacity", &exact_network_capacity(&arch, &budget)?))
}

fn construct(what: &Construct) -> Result<Document, CliError> {
    match what {
        Construct::Enrichment { n, m } => {
            let e = enrichment_map(*n, *m)?;
            let (kind, details) = match &e.kind {
                EnrichmentKind::Balanced { k } => ("balanced", json!({ "k": k })),
                EnrichmentKind::Identity => ("identity", json!({})),
                EnrichmentKind::General(p) => (
                    "general",
                    json!({ "k": p.k, "n0": p.n0, "m0": p.m0, "x": p.x.to_string() }),
                ),
            };
            let net = LayeredNetwork::new(vec![e.map])?;
            Ok(network_doc("enrichment", &net)
                .field("variant", kind)
                .field("injective", e.injective.map_or(Value::Null, Value::Bool))
                .payload("parameters", details))
        }
        Construct::Multiplex { functions, domain } => {
            let source = load_network(functions)?;
            let units = source.layers()[0].units().to_vec();
            let domain = match domain {
                Some(d) => load_point_set(d)?,
                None => PointSet::cube(source.input_dim()),
            };
            let mx = multiplex(&units, &domain)?;
            let codes: Vec<String> = mx.plan.codes.iter().map(|c| bytes(c)).collect();
            Ok(network_doc("multiplex", &mx.network)
                .field("functions", mx.plan.m)
                .field("selector_bits", mx.plan.m_minus)
                .payload("selector_codes", json!(codes)))
        }
        Construct::Stack { modules, target } => {
            let modules = modules
                .iter()
                .map(|p| load_network(p))
                .collect::<Result<Vec<_>, _>>()?;
            let target = target.as_deref().map(parse_sizes).transpose()?;
            let s = stack(&modules, target.as_deref())?;
            let widths: Vec<Value> = s
                .plan
                .widths
                .iter()
                .map(|w| json!({ "width": w.width, "plus_bound": w.plus_bound, "six_bound": w.six_bound }))
                .collect();
            let mut doc = network_doc("stack", &s.network)
                .field("modules", s.plan.module_shapes.len())
                .field("selector_bits", s.plan.selector_bits);
            if !widths.is_empty() {
                doc = doc
                    .field("within_plus_bound", s.plan.within_plus_bound())
                    .field("within_six_bound", s.plan.within_six_bound())
                    .payload("layer_widths", json!(widths));
            }
            Ok(doc
                .payload("selector_codes", json!(s.plan.codes.iter().map(|c| bytes(c)).collect::<Vec<_>>()))
                .payload("projections", json!(s.plan.projections)))
        }
        Construct::Exponential { k } => {
            let map = exponential_map(*k)?;
            Ok(network_doc("exponential", &LayeredNetwork::new(vec![map])?))
        }
    }
}

fn network_doc(kind: &str, net: &LayeredNetwork) -> Document {
    Document::new(kind)
        .field("architecture", net.architecture().to_string())
        .field("verified", true)
        .payload("network", serde_json::to_value(NetworkJson::from_network(net)).expect("network json"))
}

fn candidate_json(c: &Candidate) -> Value {
    json!({ "architecture": c.sizes, "estimated_capacity": c.value.to_string() })
}

fn optimize(what: &Optimize) -> Result<Document, CliError> {
    let (kind, closed, oracle) = match what {
        Optimize::MaxNodes { nodes, brute_force } => (
            "optimize-max-nodes",
            optimal_architecture_nodes(*nodes)?,
            brute_force
                .then(|| brute_force_extremal(*nodes, None, Objective::Max, 10))
                .transpose()?,
        ),
        Optimize::MaxNodesInput {
            nodes,
            n1,
            brute_force,
        } => (
            "optimize-max-nodes-input",
            optimal_architecture_nodes_input(*nodes, *n1)?,
            brute_force
                .then(|| brute_force_extremal(*nodes, Some(*n1), Objective::Max, 10))
                .transpose()?,
        ),
        Optimize::Min {
            nodes,
            weights,
            n1,
            brute_force,
        } => {
            let budget = match (nodes, weights) {
                (Some(n), _) => Budget::Nodes(*n),
                (None, Some(w)) => Budget::Weights(*w),
                (None, None) => return Err(CliError::Input("give --nodes or --weights".into())),
            };
            let oracle = match (brute_force, budget) {
                (false, _) => None,
                (true, Budget::Nodes(n)) => Some(brute_force_extremal(n, Some(*n1), Objective::Min, 10)?),
                (true, Budget::Weights(w)) => Some(capacity_core::extremal::brute_force_weights(
                    w,
                    *n1,
                    Objective::Min,
                )?),
            };
            ("optimize-min", minimal_architecture(budget, *n1)?, oracle)
        }
    };
    let mut doc = Document::new(kind)
        .field("objective", "estimated capacity Σ min(n_1..n_k)·n_k·n_{k+1}")
        .field("architecture", format!("{:?}", closed.sizes))
        .field("estimated_capacity", closed.value.to_string());
    if let Some(o) = oracle {
        let agree = o.best.value == closed.value;
        doc = doc
            .field("brute_force_architecture", format!("{:?}", o.best.sizes))
            .field("brute_force_value", o.best.value.to_string())
            .field("agrees", agree)
            .field("examined", o.examined)
            .payload("ranking", Value::Array(o.ranking.iter().map(candidate_json).collect()));
        if !agree {
            return Err(CliError::Mismatch(format!(
                "closed form {:?} ({}) disagrees with exhaustive search {:?} ({})",
                closed.sizes, closed.value, o.best.sizes, o.best.value
            )));
        }
    }
    if matches!(what, Optimize::MaxNodes { .. }) {
        doc.notes.push(
            "the real optimum (2N/3, N/3) has estimated capacity 4N³/27, not (4/9)N³".into(),
        );
    }
    Ok(doc)
}

fn bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn bytes(x: &[u8]) -> String {
    x.iter().map(|b| char::from(b'0' + b)).collect()
}
