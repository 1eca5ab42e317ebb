//! Single-run subcommands: gen, exact, ls, stream, protocol.

use std::fs;
use std::str::FromStr;

use serde::Serialize;

use matchest::gen::{random_vertex_order, Family, GeneratorSpec};
use matchest::graph::Graph;
use matchest::matching::maximum_matching_size;
use matchest::protocol::{
    build_player_views, final_protocol_with_transcript, partition_vertices, PartitionMode,
    ProtocolConfig, TauRule,
};
use matchest::report::EstimateReport;
use matchest::rng::{substream, Domain};
use matchest::sampler::{estimate_ls, SamplerConfig};
use matchest::stream::{approx_matching_stream, stream_from_graph, VertexArrivalStream};

use crate::CliError;

/// JSON envelope for single-run reports. The timestamp is the only field
/// that varies between identical invocations.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    timestamp: String,
    command: String,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(command: &str, body: T, out: Option<&str>) -> Result<(), CliError> {
    let envelope = Envelope {
        timestamp: chrono::Utc::now().to_rfc3339(),
        command: command.to_string(),
        body,
    };
    let text = serde_json::to_string_pretty(&envelope).expect("reports serialize") + "\n";
    write_output(&text, out)
}

fn write_output(text: &str, out: Option<&str>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_graph(path: &str) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(Graph::parse_edge_list(&text)?)
}

pub fn run_gen(
    family: &str,
    n: usize,
    alpha: Option<usize>,
    seed: u64,
    out: Option<&str>,
) -> Result<(), CliError> {
    let family = Family::from_str(family)?;
    if family == Family::NamedExample && n != 9 {
        return Err(CliError::usage("the named example is fixed at n = 9"));
    }
    let spec = GeneratorSpec {
        family,
        n,
        alpha,
        seed,
    };
    let generated = spec.generate()?;
    let text = generated
        .graph
        .to_edge_list(&spec.header_comments(&generated.witness));
    write_output(&text, out)
}

#[derive(Serialize)]
struct ExactBody {
    n: usize,
    edge_count: usize,
    m: usize,
    ell: usize,
    a_prime: f64,
    degeneracy: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    nash_williams_density: Option<usize>,
}

pub fn run_exact(graph: &str, density: bool, out: Option<&str>) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let nash_williams_density = if density {
        Some(g.nash_williams_density(20)?)
    } else {
        None
    };
    emit(
        "exact",
        ExactBody {
            n: g.vertex_count(),
            edge_count: g.edge_count(),
            m: maximum_matching_size(&g),
            ell: g.locally_superior_count(),
            a_prime: g.a_prime().to_f64(),
            degeneracy: g.degeneracy(),
            nash_williams_density,
        },
        out,
    )
}

#[derive(Serialize)]
struct ReportBody {
    report: EstimateReport,
}

pub fn run_ls(
    graph: &str,
    s: usize,
    epsilon: f64,
    seed: u64,
    r: Option<usize>,
    out: Option<&str>,
) -> Result<(), CliError> {
    if epsilon <= 0.0 {
        return Err(CliError::usage("epsilon must be positive"));
    }
    if s == 0 {
        return Err(CliError::usage("sample size must be at least 1"));
    }
    let g = load_graph(graph)?;
    let mut cfg = SamplerConfig::new(s, epsilon, seed);
    if let Some(r) = r {
        if r == 0 {
            return Err(CliError::usage("repetitions must be at least 1"));
        }
        cfg = cfg.with_repetitions(r);
    }
    let mut report = estimate_ls(&g, &cfg);
    report.attach_oracles(&g);
    emit("ls", ReportBody { report }, out)
}

pub fn run_stream(
    stream: Option<&str>,
    graph: Option<&str>,
    epsilon: f64,
    seed: u64,
    out: Option<&str>,
) -> Result<(), CliError> {
    if epsilon <= 0.0 {
        return Err(CliError::usage("epsilon must be positive"));
    }
    let stream = match (stream, graph) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            VertexArrivalStream::parse(&text)?
        }
        (None, Some(path)) => {
            let g = load_graph(path)?;
            let order = random_vertex_order(
                g.vertex_count(),
                &mut substream(seed, Domain::VertexOrder, 0, 0),
            );
            stream_from_graph(&g, &order)?
        }
        (None, None) => return Err(CliError::usage("need --stream or --graph")),
    };
    let mut report = approx_matching_stream(&stream, epsilon, seed)?;
    report.attach_oracles(&stream.to_graph()?);
    emit("stream", ReportBody { report }, out)
}

pub struct ProtocolArgs<'a> {
    pub graph: &'a str,
    pub players: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub tau: TauRule,
    pub round_robin: bool,
    pub transcript: Option<&'a str>,
    pub out: Option<&'a str>,
}

pub fn run_protocol(args: ProtocolArgs<'_>) -> Result<(), CliError> {
    if args.epsilon <= 0.0 {
        return Err(CliError::usage("epsilon must be positive"));
    }
    let g = load_graph(args.graph)?;
    let mode = if args.round_robin {
        PartitionMode::RoundRobin
    } else {
        PartitionMode::Random
    };
    let partition = partition_vertices(
        g.vertex_count(),
        args.players,
        mode,
        &mut substream(args.seed, Domain::Partition, 0, 0),
    )?;
    let views = build_player_views(&g, &partition)?;
    let mut cfg = ProtocolConfig::new(args.epsilon, args.seed);
    cfg.tau = args.tau;
    let (mut report, transcript) = final_protocol_with_transcript(&views, &cfg)?;
    report.attach_oracles(&g);
    if let Some(path) = args.transcript {
        let text = serde_json::to_string_pretty(&transcript).expect("transcripts serialize") + "\n";
        fs::write(path, text)?;
    }
    emit("protocol", ReportBody { report }, args.out)
}
