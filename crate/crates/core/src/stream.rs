//! One-pass estimation over vertex-arrival streams.
//!
//! A stream is an ordered sequence of records `(vertex, neighbor list)`;
//! every edge is seen twice, once from each endpoint. Because each record
//! carries the full neighbor list, the degree of a sampled vertex is known
//! the moment its record arrives, and the minimum degree among its
//! neighbors can be folded in as their records arrive. That is all the
//! state the estimator keeps, and it is accounted in machine words.
//!
//! The combined algorithm runs two logical threads over the same single
//! pass: the sampling estimator with `s = ceil(sqrt(n))`, and a greedy
//! matching capped at `ceil(sqrt(n))`. If greedy finishes below the cap its
//! matching is maximal and is the better answer; otherwise a large matching
//! certifies that the sampled estimate concentrates, and that is reported.

use std::collections::{BTreeMap, HashMap};

use crate::graph::Graph;
use crate::matching::validate_permutation;
use crate::report::{EstimateReport, ResourceAccounting};
use crate::sampler::{combine_repetitions, draw_samples, SamplerConfig};
use crate::{Error, Result};

/// An in-memory vertex-arrival stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexArrivalStream {
    n: usize,
    records: Vec<(usize, Vec<usize>)>,
}

/// Branch labels of the combined streaming algorithm.
pub const BRANCH_GREEDY: &str = "greedy-exact-maximal";
pub const BRANCH_SAMPLER: &str = "sampler";

impl VertexArrivalStream {
    /// Declared vertex count.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[(usize, Vec<usize>)] {
        &self.records
    }

    /// Checks the stream invariants: every id in range, every vertex a head
    /// exactly once, no self-listing or duplicate within a list, and every
    /// edge listed from both endpoints. Fails with the first offending
    /// record named.
    pub fn validate(&self) -> Result<()> {
        let mut head_seen = vec![false; self.n];
        let mut pairs: HashMap<(usize, usize), u8> = HashMap::new();
        for (head, list) in &self.records {
            let name = |reason: String| Error::StreamFormat {
                record: format!("{head}"),
                reason,
            };
            if *head >= self.n {
                return Err(name(format!(
                    "head id {head} out of range for n = {}",
                    self.n
                )));
            }
            if head_seen[*head] {
                return Err(name("duplicate record head".into()));
            }
            head_seen[*head] = true;
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(name("duplicate neighbor in list".into()));
            }
            for &u in list {
                if u >= self.n {
                    return Err(name(format!("neighbor id {u} out of range")));
                }
                if u == *head {
                    return Err(name("vertex lists itself".into()));
                }
                let key = ((*head).min(u), (*head).max(u));
                let bit = if *head < u { 1 } else { 2 };
                *pairs.entry(key).or_insert(0) |= bit;
            }
        }
        if self.records.len() != self.n {
            return Err(Error::StreamFormat {
                record: "<end>".into(),
                reason: format!(
                    "{} records for {} declared vertices",
                    self.records.len(),
                    self.n
                ),
            });
        }
        if let Some((&(u, v), _)) = pairs.iter().find(|(_, &bits)| bits != 3) {
            return Err(Error::StreamFormat {
                record: format!("{u}"),
                reason: format!("edge ({u}, {v}) is listed from only one endpoint"),
            });
        }
        Ok(())
    }

    /// Reconstructs the underlying graph (validates first).
    pub fn to_graph(&self) -> Result<Graph> {
        self.validate()?;
        let mut edges = Vec::new();
        for (head, list) in &self.records {
            for &u in list {
                if *head < u {
                    edges.push((*head, u));
                }
            }
        }
        Graph::from_edges(self.n, &edges)
    }

    /// Parses the stream text format: a first line `n`, then one line per
    /// record, `v: u1 u2 u3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::StreamFormat {
                record: "<header>".into(),
                reason: "missing vertex-count line".into(),
            })?
            .trim()
            .parse()
            .map_err(|_| Error::StreamFormat {
                record: "<header>".into(),
                reason: "malformed vertex count".into(),
            })?;
        let mut records = Vec::new();
        for line in lines {
            let (head, rest) = line.split_once(':').ok_or_else(|| Error::StreamFormat {
                record: line.trim().into(),
                reason: "missing `:` after record head".into(),
            })?;
            let head: usize = head.trim().parse().map_err(|_| Error::StreamFormat {
                record: line.trim().into(),
                reason: "malformed record head".into(),
            })?;
            let mut list = Vec::new();
            for tok in rest.split_whitespace() {
                list.push(tok.parse().map_err(|_| Error::StreamFormat {
                    record: format!("{head}"),
                    reason: format!("malformed neighbor id `{tok}`"),
                })?);
            }
            records.push((head, list));
        }
        let stream = VertexArrivalStream { n, records };
        stream.validate()?;
        Ok(stream)
    }

    /// Serializes to the stream text format, bit-exact round-trip with
    /// [`VertexArrivalStream::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (head, list) in &self.records {
            out.push_str(&format!("{head}:"));
            for u in list {
                out.push_str(&format!(" {u}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Transcribes a graph into a stream under the given arrival order.
pub fn stream_from_graph(g: &Graph, vertex_order: &[usize]) -> Result<VertexArrivalStream> {
    validate_permutation(g.vertex_count(), vertex_order)?;
    let records = vertex_order
        .iter()
        .map(|&v| (v, g.neighbors(v).to_vec()))
        .collect();
    Ok(VertexArrivalStream {
        n: g.vertex_count(),
        records,
    })
}

/// Tracks live machine words of estimator/greedy state. Entries only grow
/// during a pass, so the peak is the running maximum.
#[derive(Debug, Default)]
struct SpaceMeter {
    current: usize,
    peak: usize,
}

impl SpaceMeter {
    fn hold(&mut self, words: usize) {
        self.current += words;
        self.peak = self.peak.max(self.current);
    }
}

/// Outcome of the streamed ls estimator: the report plus the per-vertex
/// locally-superior determinations for every sampled vertex.
#[derive(Debug, Clone)]
pub struct StreamLsOutcome {
    pub report: EstimateReport,
    /// Decision per sampled vertex (union over repetitions).
    pub ls_flags: BTreeMap<usize, bool>,
}

/// Per-repetition sampling state for the single pass.
struct LsPassState {
    /// For each vertex, the (repetition, slot) pairs that sampled it.
    membership: Vec<Vec<(u32, u32)>>,
    /// Degree of each sampled vertex once its record has arrived.
    known_degree: Vec<Vec<Option<usize>>>,
    /// Minimum degree among neighbors seen so far; non-increasing.
    min_neighbor_degree: Vec<Vec<Option<usize>>>,
}

impl LsPassState {
    fn new(n: usize, samples: &[Vec<usize>], meter: &mut SpaceMeter) -> Self {
        let mut membership = vec![Vec::new(); n];
        for (rep, sample) in samples.iter().enumerate() {
            // The sample table itself is live state for the whole pass.
            meter.hold(sample.len());
            for (slot, &v) in sample.iter().enumerate() {
                membership[v].push((rep as u32, slot as u32));
            }
        }
        LsPassState {
            membership,
            known_degree: samples.iter().map(|s| vec![None; s.len()]).collect(),
            min_neighbor_degree: samples.iter().map(|s| vec![None; s.len()]).collect(),
        }
    }

    fn observe_record(&mut self, head: usize, list: &[usize], meter: &mut SpaceMeter) {
        let deg = list.len();
        for &(rep, slot) in &self.membership[head] {
            if self.known_degree[rep as usize][slot as usize]
                .replace(deg)
                .is_none()
            {
                meter.hold(1);
            }
        }
        for &u in list {
            for &(rep, slot) in &self.membership[u] {
                let entry = &mut self.min_neighbor_degree[rep as usize][slot as usize];
                match entry {
                    None => {
                        *entry = Some(deg);
                        meter.hold(1);
                    }
                    Some(best) => *best = (*best).min(deg),
                }
            }
        }
    }

    /// Post-pass per-repetition values and per-vertex decisions.
    fn finish(&self, n: usize, samples: &[Vec<usize>]) -> (Vec<f64>, BTreeMap<usize, bool>) {
        let mut flags = BTreeMap::new();
        let mut values = Vec::with_capacity(samples.len());
        for (rep, sample) in samples.iter().enumerate() {
            if sample.is_empty() {
                values.push(0.0);
                continue;
            }
            let mut superior = 0usize;
            for (slot, &v) in sample.iter().enumerate() {
                let deg =
                    self.known_degree[rep][slot].expect("every vertex appears as a record head");
                let ls = match self.min_neighbor_degree[rep][slot] {
                    Some(min_nbr) => deg >= min_nbr,
                    None => false,
                };
                flags.insert(v, ls);
                if ls {
                    superior += 1;
                }
            }
            values.push(n as f64 / sample.len() as f64 * superior as f64);
        }
        (values, flags)
    }
}

/// Runs the sampling estimator in one pass over the stream. The sample sets
/// are drawn up front from the same substreams as the offline estimator, so
/// for equal seeds the output equals [`crate::sampler::estimate_ls`]
/// exactly.
pub fn run_ls_stream_estimator(
    stream: &VertexArrivalStream,
    cfg: &SamplerConfig,
) -> Result<StreamLsOutcome> {
    stream.validate()?;
    let n = stream.vertex_count();
    let samples = draw_samples(n, cfg);
    let mut meter = SpaceMeter::default();
    meter.hold(4); // n, s, r, record cursor
    let mut state = LsPassState::new(n, &samples, &mut meter);
    for (head, list) in stream.records() {
        state.observe_record(*head, list, &mut meter);
    }
    let (values, ls_flags) = state.finish(n, &samples);
    let value = combine_repetitions(&values, cfg);
    let mut report = EstimateReport::new(value, cfg.seed, cfg.echo());
    report.repetition_values = values;
    report.accounting = Some(ResourceAccounting::WordsStored { peak: meter.peak });
    Ok(StreamLsOutcome { report, ls_flags })
}

/// Greedy matching state for the single pass.
struct GreedyPassState {
    matched: Vec<bool>,
    size: usize,
    cap: usize,
    capped: bool,
}

impl GreedyPassState {
    fn new(n: usize, cap: usize, meter: &mut SpaceMeter) -> Self {
        meter.hold(2); // size and cap counters
        GreedyPassState {
            matched: vec![false; n],
            size: 0,
            cap,
            capped: false,
        }
    }

    fn observe_record(&mut self, head: usize, list: &[usize], meter: &mut SpaceMeter) {
        if self.capped || self.matched[head] {
            return;
        }
        if let Some(&u) = list.iter().filter(|&&u| !self.matched[u]).min() {
            self.matched[head] = true;
            self.matched[u] = true;
            // Two matched-vertex set entries per accepted edge.
            meter.hold(2);
            self.size += 1;
            if self.size == self.cap {
                self.capped = true;
            }
        }
    }
}

/// Runs the capped greedy matching thread alone. Returns the matching size
/// and whether the cap was hit; when it was not, the matching is maximal in
/// the underlying graph.
pub fn run_greedy_stream(stream: &VertexArrivalStream, cap: usize) -> Result<(usize, bool)> {
    if cap == 0 {
        return Err(Error::InvalidInput("greedy cap must be at least 1".into()));
    }
    stream.validate()?;
    let mut meter = SpaceMeter::default();
    let mut state = GreedyPassState::new(stream.vertex_count(), cap, &mut meter);
    for (head, list) in stream.records() {
        state.observe_record(*head, list, &mut meter);
    }
    Ok((state.size, state.capped))
}

fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// The combined streaming approximation: the sampling estimator with
/// `s = ceil(sqrt(n))` and a greedy matching capped at `ceil(sqrt(n))`,
/// interleaved over one pass. Reports the greedy size when greedy finished
/// uncapped below the cap (that matching is maximal), otherwise the
/// estimator value.
pub fn approx_matching_stream(
    stream: &VertexArrivalStream,
    epsilon: f64,
    seed: u64,
) -> Result<EstimateReport> {
    stream.validate()?;
    let n = stream.vertex_count();
    let root = ceil_sqrt(n).max(1);
    let cfg = SamplerConfig::new(root, epsilon, seed);
    let samples = draw_samples(n, &cfg);

    let mut meter = SpaceMeter::default();
    meter.hold(4);
    let mut ls_state = LsPassState::new(n, &samples, &mut meter);
    let mut greedy = GreedyPassState::new(n, root, &mut meter);
    for (head, list) in stream.records() {
        ls_state.observe_record(*head, list, &mut meter);
        greedy.observe_record(*head, list, &mut meter);
    }
    let (values, _) = ls_state.finish(n, &samples);

    let greedy_exact = !greedy.capped && greedy.size < root;
    let (value, branch) = if greedy_exact {
        (greedy.size as f64, BRANCH_GREEDY)
    } else {
        (combine_repetitions(&values, &cfg), BRANCH_SAMPLER)
    };
    let mut echo = cfg.echo();
    echo.greedy_cap = Some(root);
    let mut report = EstimateReport::new(value, seed, echo);
    report.branch = Some(branch.into());
    report.repetition_values = values;
    report.accounting = Some(ResourceAccounting::WordsStored { peak: meter.peak });
    Ok(report)
}
