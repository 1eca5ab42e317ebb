//! The `bench` subcommand: sweep a generated corpus, run the estimators
//! against exact oracles, and emit a CSV.
//!
//! Trials run concurrently; rows are sorted by (family, n, seed, estimator)
//! so the output is independent of scheduling. Every row embeds the family,
//! per-trial seed, and configuration needed to regenerate it.

use std::fs;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use matchest::gen::{random_vertex_order, Family, GeneratorSpec};
use matchest::matching::maximum_matching_size;
use matchest::protocol::{
    build_player_views, final_protocol, partition_vertices, PartitionMode, ProtocolConfig, TauRule,
};
use matchest::report::ResourceAccounting;
use matchest::rng::{derive_seed, substream, Domain};
use matchest::stream::{approx_matching_stream, stream_from_graph};

use crate::CliError;

/// One CSV row. Column order is fixed; see the README. `seed` regenerates
/// the graph, `estimator_seed` the estimator run, so a row is enough to
/// reproduce itself.
#[derive(Serialize)]
struct Row {
    family: String,
    n: usize,
    alpha: Option<usize>,
    seed: u64,
    trial: u64,
    estimator_seed: u64,
    m: usize,
    ell: usize,
    ell_ratio: Option<f64>,
    estimator: &'static str,
    value: f64,
    branch: String,
    ratio: Option<f64>,
    space_words: Option<usize>,
    max_player_bits: Option<u64>,
}

pub struct BenchArgs<'a> {
    pub family: &'a str,
    pub n: usize,
    pub alpha: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub players: Option<usize>,
    pub tau: TauRule,
    pub out: Option<&'a str>,
}

pub fn run_bench(args: BenchArgs<'_>) -> Result<(), CliError> {
    if args.epsilon <= 0.0 {
        return Err(CliError::usage("epsilon must be positive"));
    }
    if args.trials == 0 {
        return Err(CliError::usage("need at least one trial"));
    }
    let family = Family::from_str(args.family)?;

    let results: Vec<Result<Vec<Row>, matchest::Error>> = (0..args.trials)
        .into_par_iter()
        .map(|trial| run_trial(&args, family, trial as u64))
        .collect();
    let mut rows = Vec::with_capacity(results.len() * 2);
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        (&a.family, a.n, a.seed, a.estimator).cmp(&(&b.family, b.n, b.seed, b.estimator))
    });

    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row).expect("rows serialize");
    }
    let bytes = writer.into_inner().expect("csv buffer");
    let text = String::from_utf8(bytes).expect("csv is utf-8");
    match args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_trial(
    args: &BenchArgs<'_>,
    family: Family,
    trial: u64,
) -> Result<Vec<Row>, matchest::Error> {
    let graph_seed = derive_seed(args.seed, 1, trial);
    let spec = GeneratorSpec {
        family,
        n: args.n,
        alpha: args.alpha,
        seed: graph_seed,
    };
    let generated = spec.generate()?;
    let g = &generated.graph;
    let m = maximum_matching_size(g);
    let ell = g.locally_superior_count();
    let ell_ratio = (m > 0).then(|| ell as f64 / m as f64);

    let mut rows = Vec::new();

    let order = random_vertex_order(
        g.vertex_count(),
        &mut substream(graph_seed, Domain::VertexOrder, 0, 0),
    );
    let stream = stream_from_graph(g, &order)?;
    let stream_seed = derive_seed(args.seed, 2, trial);
    let stream_report = approx_matching_stream(&stream, args.epsilon, stream_seed)?;
    let space = match stream_report.accounting {
        Some(ResourceAccounting::WordsStored { peak }) => Some(peak),
        _ => None,
    };
    rows.push(Row {
        family: family.to_string(),
        n: args.n,
        alpha: args.alpha,
        seed: graph_seed,
        trial,
        estimator_seed: stream_seed,
        m,
        ell,
        ell_ratio,
        estimator: "stream",
        value: stream_report.value,
        branch: stream_report.branch.clone().unwrap_or_default(),
        ratio: (m > 0).then(|| stream_report.value / m as f64),
        space_words: space,
        max_player_bits: None,
    });

    if let Some(players) = args.players {
        let protocol_seed = derive_seed(args.seed, 3, trial);
        let partition = partition_vertices(
            g.vertex_count(),
            players,
            PartitionMode::Random,
            &mut substream(protocol_seed, Domain::Partition, 0, 0),
        )?;
        let views = build_player_views(g, &partition)?;
        let mut cfg = ProtocolConfig::new(args.epsilon, protocol_seed);
        cfg.tau = args.tau;
        let report = final_protocol(&views, &cfg)?;
        let bits = match report.accounting {
            Some(ResourceAccounting::PlayerBits { max, .. }) => Some(max),
            _ => None,
        };
        rows.push(Row {
            family: family.to_string(),
            n: args.n,
            alpha: args.alpha,
            seed: graph_seed,
            trial,
            estimator_seed: protocol_seed,
            m,
            ell,
            ell_ratio,
            estimator: "protocol",
            value: report.value,
            branch: report.branch.clone().unwrap_or_default(),
            ratio: (m > 0).then(|| report.value / m as f64),
            space_words: None,
            max_player_bits: bits,
        });
    }
    Ok(rows)
}
