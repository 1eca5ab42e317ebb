//! Simulator for the simultaneous vertex-partition communication model.
//!
//! The vertex set is split among `t` players; player `i` knows exactly the
//! edges incident to its part. Players never communicate with each other:
//! each sends a single message to a referee, who outputs the estimate. All
//! parties share a random string, modeled as labeled substreams of one
//! seed. Player logic is a pure function of (own view, public data, shared
//! seed) — the type signatures enforce the isolation, and an
//! access-tracking test double asserts the referee never touches a view.
//!
//! Three sub-protocols run over the same views:
//! 1. the locally-superior sampling estimator (players report, per sampled
//!    vertex, the minimum degree among their neighbors of it),
//! 2. an edge-sampling primitive (color vertices, keep one uniform edge per
//!    color class) whose union contains a small maximum matching with high
//!    probability,
//! 3. the exact degree-based half-unit sum, whose value tells the referee
//!    which of the first two answers to trust.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, HalfUnits};
use crate::matching::maximum_matching_size;
use crate::par;
use crate::report::{ConfigEcho, EstimateReport, ResourceAccounting};
use crate::rng::{substream, Domain};
use crate::sampler::{combine_repetitions, draw_samples, SamplerConfig};
use crate::{Error, Result};

/// Branch labels of the final protocol.
pub const BRANCH_Z1: &str = "z1";
pub const BRANCH_Z2: &str = "z2";

/// Assignment of vertices to players. Public to all parties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    t: usize,
    part_of: Vec<usize>,
}

impl Partition {
    pub fn new(t: usize, part_of: Vec<usize>) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidInput("need at least one player".into()));
        }
        if let Some(&bad) = part_of.iter().find(|&&p| p >= t) {
            return Err(Error::InvalidInput(format!(
                "part index {bad} out of range for {t} players"
            )));
        }
        Ok(Partition { t, part_of })
    }

    pub fn players(&self) -> usize {
        self.t
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    /// Owner of an edge for deduplication: the player holding the lower-id
    /// endpoint. Cross edges appear in two views; counting each edge once
    /// is what keeps the referee's weighted pick exactly uniform, and the
    /// rule needs no communication because the partition is public.
    pub fn owner(&self, u: usize, v: usize) -> usize {
        self.part_of[u.min(v)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    Random,
    RoundRobin,
}

/// Assigns `n` vertices to `t` players, uniformly at random or round-robin.
pub fn partition_vertices<R: Rng>(
    n: usize,
    t: usize,
    mode: PartitionMode,
    rng: &mut R,
) -> Result<Partition> {
    if t == 0 || t > n {
        return Err(Error::InvalidInput(format!(
            "player count {t} must be in 1..={n}"
        )));
    }
    let part_of = match mode {
        PartitionMode::Random => (0..n).map(|_| rng.gen_range(0..t)).collect(),
        PartitionMode::RoundRobin => (0..n).map(|v| v % t).collect(),
    };
    Partition::new(t, part_of)
}

/// One player's input: every edge with at least one endpoint in its part,
/// plus the public partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerView {
    player: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
    partition: Partition,
}

/// Read access to a player's input. Player-side protocol logic is generic
/// over this trait so tests can substitute an access-tracking double.
pub trait ViewAccess: Sync {
    fn player(&self) -> usize;
    fn vertex_count(&self) -> usize;
    fn partition(&self) -> &Partition;
    /// The player's private edge set.
    fn edges(&self) -> &[(usize, usize)];
}

impl ViewAccess for PlayerView {
    fn player(&self) -> usize {
        self.player
    }
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn partition(&self) -> &Partition {
        &self.partition
    }
    fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Splits a graph into per-player views under a partition.
pub fn build_player_views(g: &Graph, p: &Partition) -> Result<Vec<PlayerView>> {
    if p.vertex_count() != g.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "partition covers {} vertices, graph has {}",
            p.vertex_count(),
            g.vertex_count()
        )));
    }
    let mut views: Vec<PlayerView> = (0..p.players())
        .map(|i| PlayerView {
            player: i,
            n: g.vertex_count(),
            edges: Vec::new(),
            partition: p.clone(),
        })
        .collect();
    for (u, v) in g.edges() {
        let (pu, pv) = (p.part_of(u), p.part_of(v));
        views[pu].edges.push((u, v));
        if pv != pu {
            views[pv].edges.push((u, v));
        }
    }
    Ok(views)
}

fn check_views<V: ViewAccess>(views: &[V]) -> Result<(usize, usize)> {
    if views.is_empty() {
        return Err(Error::InvalidInput("no player views".into()));
    }
    let n = views[0].vertex_count();
    let partition = views[0].partition().clone();
    if partition.players() != views.len() {
        return Err(Error::InvalidInput(format!(
            "partition declares {} players, got {} views",
            partition.players(),
            views.len()
        )));
    }
    let mut owned_edges = 0usize;
    for (i, view) in views.iter().enumerate() {
        if view.player() != i || view.vertex_count() != n || view.partition() != &partition {
            return Err(Error::InvalidInput(format!(
                "view {i} is inconsistent with the shared partition"
            )));
        }
        owned_edges += view
            .edges()
            .iter()
            .filter(|&&(u, v)| partition.owner(u, v) == i)
            .count();
    }
    Ok((n, owned_edges))
}

// ---------------------------------------------------------------------------
// Messages and bit accounting
// ---------------------------------------------------------------------------

/// What one message entry addresses. Tags are derivable from shared
/// randomness and public data, so only values are priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum EntryTag {
    /// Global degree of a sampled vertex, sent by its owner.
    Degree { vertex: usize },
    /// Minimum degree among the sender's neighbors of a sampled vertex.
    MinNeighborDegree { vertex: usize },
    /// First endpoint of the uniform edge picked for a color class.
    EdgeU { rep: usize, class: [u32; 2] },
    /// Second endpoint of that edge.
    EdgeV { rep: usize, class: [u32; 2] },
    /// Size of the sender's owned portion of a color class.
    OwnedCount { rep: usize, class: [u32; 2] },
    /// Aggregated zero counts for the sender's empty color classes: the
    /// per-class table the protocol transmits prices every class, and this
    /// entry stands for `value` zero-valued count slots.
    ZeroClassCounts { rep: usize },
    /// The sender's half-unit partial sum of the degree estimator.
    APrimePartial,
}

/// A `(tag, integer value)` message entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageEntry {
    #[serde(flatten)]
    pub tag: EntryTag,
    pub value: i64,
}

/// Bit-width parameters of the accounting rule. Vertex ids and degrees
/// cost `ceil(log2(n+1))` bits, counts `ceil(log2(m+1))`, half-unit
/// rationals `ceil(log2(4n+1)) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthParams {
    pub n: usize,
    pub edge_count: usize,
}

fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    u64::from(64 - (x - 1).leading_zeros()).min(63)
}

impl WidthParams {
    pub fn id_width(&self) -> u64 {
        ceil_log2(self.n as u64 + 1)
    }
    pub fn count_width(&self) -> u64 {
        ceil_log2(self.edge_count as u64 + 1)
    }
    pub fn half_unit_width(&self) -> u64 {
        ceil_log2(4 * self.n as u64 + 1) + 1
    }

    pub fn entry_bits(&self, entry: &MessageEntry) -> u64 {
        match entry.tag {
            EntryTag::Degree { .. } | EntryTag::MinNeighborDegree { .. } => self.id_width(),
            EntryTag::EdgeU { .. } | EntryTag::EdgeV { .. } => self.id_width(),
            EntryTag::OwnedCount { .. } => self.count_width(),
            EntryTag::ZeroClassCounts { .. } => entry.value as u64 * self.count_width(),
            EntryTag::APrimePartial => self.half_unit_width(),
        }
    }
}

/// One player's message: tagged integer entries plus accounted bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub player: usize,
    pub width: WidthParams,
    pub entries: Vec<MessageEntry>,
    pub bit_size: u64,
}

impl Message {
    pub fn price(player: usize, entries: Vec<MessageEntry>, width: WidthParams) -> Self {
        let bit_size = entries.iter().map(|e| width.entry_bits(e)).sum();
        Message {
            player,
            width,
            entries,
            bit_size,
        }
    }

    /// Recomputes the accounted bits from the entries alone.
    pub fn recomputed_bits(&self) -> u64 {
        self.entries.iter().map(|e| self.width.entry_bits(e)).sum()
    }
}

// ---------------------------------------------------------------------------
// Locally-superior sub-protocol
// ---------------------------------------------------------------------------

/// Player side of the ls sub-protocol. For every sampled vertex the player
/// owns it sends the global degree (computable locally: all edges at an
/// owned vertex are in the view); for every sampled vertex with neighbors
/// in its part it sends the minimum of their global degrees. Entries are
/// per distinct sampled vertex — repeated samples add nothing new.
pub fn ls_player_entries<V: ViewAccess>(view: &V, sampled: &[usize]) -> Vec<MessageEntry> {
    let me = view.player();
    let n = view.vertex_count();
    let partition = view.partition();
    let mut owned_degree: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in view.edges() {
        if partition.part_of(u) == me {
            *owned_degree.entry(u).or_insert(0) += 1;
        }
        if partition.part_of(v) == me {
            *owned_degree.entry(v).or_insert(0) += 1;
        }
    }
    let mut in_sample = vec![false; n];
    for &u in sampled {
        in_sample[u] = true;
    }
    let mut min_nbr: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in view.edges() {
        if in_sample[u] && partition.part_of(v) == me {
            let dv = owned_degree[&v];
            min_nbr
                .entry(u)
                .and_modify(|m| *m = (*m).min(dv))
                .or_insert(dv);
        }
        if in_sample[v] && partition.part_of(u) == me {
            let du = owned_degree[&u];
            min_nbr
                .entry(v)
                .and_modify(|m| *m = (*m).min(du))
                .or_insert(du);
        }
    }
    let mut entries = Vec::new();
    for &u in sampled {
        if partition.part_of(u) == me {
            entries.push(MessageEntry {
                tag: EntryTag::Degree { vertex: u },
                value: owned_degree.get(&u).copied().unwrap_or(0) as i64,
            });
        }
        if let Some(&m) = min_nbr.get(&u) {
            entries.push(MessageEntry {
                tag: EntryTag::MinNeighborDegree { vertex: u },
                value: m as i64,
            });
        }
    }
    entries
}

/// Referee output of the ls sub-protocol.
#[derive(Debug, Clone)]
pub struct LsRefereeOutcome {
    pub z1: f64,
    pub per_repetition: Vec<f64>,
    /// Locally-superior decision for every sampled vertex.
    pub decisions: BTreeMap<usize, bool>,
}

/// Referee side: reconstruct, per sampled vertex, the degree (from its
/// owner) and the minimum over all reported neighbor degrees, then run the
/// sampling estimator's arithmetic over the shared sample sets.
pub fn ls_referee(
    messages: &[Message],
    samples: &[Vec<usize>],
    n: usize,
    cfg: &SamplerConfig,
) -> LsRefereeOutcome {
    let mut degree: HashMap<usize, i64> = HashMap::new();
    let mut min_nbr: HashMap<usize, i64> = HashMap::new();
    for msg in messages {
        for entry in &msg.entries {
            match entry.tag {
                EntryTag::Degree { vertex } => {
                    degree.insert(vertex, entry.value);
                }
                EntryTag::MinNeighborDegree { vertex } => {
                    min_nbr
                        .entry(vertex)
                        .and_modify(|m| *m = (*m).min(entry.value))
                        .or_insert(entry.value);
                }
                _ => {}
            }
        }
    }
    let mut decisions = BTreeMap::new();
    let mut per_repetition = Vec::with_capacity(samples.len());
    for sample in samples {
        if sample.is_empty() {
            per_repetition.push(0.0);
            continue;
        }
        let mut superior = 0usize;
        for &u in sample {
            let deg = degree
                .get(&u)
                .copied()
                .expect("owner reports every sampled vertex");
            let ls = min_nbr.get(&u).is_some_and(|&m| deg >= m);
            decisions.insert(u, ls);
            if ls {
                superior += 1;
            }
        }
        per_repetition.push(n as f64 / sample.len() as f64 * superior as f64);
    }
    let z1 = combine_repetitions(&per_repetition, cfg);
    LsRefereeOutcome {
        z1,
        per_repetition,
        decisions,
    }
}

/// Full ls sub-protocol run: messages plus referee outcome.
pub struct LsProtocolRun {
    pub messages: Vec<Message>,
    pub outcome: LsRefereeOutcome,
}

pub fn ls_protocol<V: ViewAccess>(views: &[V], cfg: &SamplerConfig) -> Result<LsProtocolRun> {
    let (n, edge_count) = check_views(views)?;
    let samples = draw_samples(n, cfg);
    let mut sampled: Vec<usize> = samples.iter().flatten().copied().collect();
    sampled.sort_unstable();
    sampled.dedup();
    let width = WidthParams { n, edge_count };
    let messages = par::indexed_map(views.len(), |i| {
        Message::price(i, ls_player_entries(&views[i], &sampled), width)
    });
    let outcome = ls_referee(&messages, &samples, n, cfg);
    Ok(LsProtocolRun { messages, outcome })
}

// ---------------------------------------------------------------------------
// Edge-sampling primitive
// ---------------------------------------------------------------------------

/// Resolved parameters of the sampling primitive.
#[derive(Debug, Clone, Copy)]
struct SampleParams {
    colors: usize,
    subset_size: usize,
}

impl SampleParams {
    /// Number of color classes a player's count table covers: all size-`d`
    /// subsets of the palette.
    fn class_count(&self) -> u64 {
        let b = self.colors as u64;
        match self.subset_size {
            1 => b,
            2 => b * (b - 1) / 2,
            _ => unreachable!("subset size is validated to 1 or 2"),
        }
    }
}

fn class_of(cu: u32, cv: u32, d: usize) -> Option<[u32; 2]> {
    match d {
        1 => (cu == cv).then_some([cu, cv]),
        2 => (cu != cv).then_some([cu.min(cv), cu.max(cv)]),
        _ => unreachable!(),
    }
}

/// The shared-randomness coloring of repetition `rep`: every party derives
/// the same palette assignment from the seed.
pub fn sample_coloring(n: usize, colors: usize, rep: usize, seed: u64) -> Vec<u32> {
    let mut rng = substream(seed, Domain::Coloring, rep as u64, 0);
    (0..n).map(|_| rng.gen_range(0..colors as u32)).collect()
}

/// Player side for one repetition of the sampling primitive: group owned
/// edges by color class, pick one uniformly per nonempty class, and report
/// it with the owned count. Empty classes still transmit their zero count;
/// those are aggregated into a single [`EntryTag::ZeroClassCounts`] entry.
pub fn sample_player_entries<V: ViewAccess>(
    view: &V,
    rep: usize,
    coloring: &[u32],
    colors: usize,
    subset_size: usize,
    seed: u64,
) -> Vec<MessageEntry> {
    assert!(
        subset_size == 1 || subset_size == 2,
        "color subset size must be 1 or 2"
    );
    let params = SampleParams {
        colors,
        subset_size,
    };
    sample_player_entries_inner(view, rep, coloring, params, seed)
}

fn sample_player_entries_inner<V: ViewAccess>(
    view: &V,
    rep: usize,
    coloring: &[u32],
    params: SampleParams,
    seed: u64,
) -> Vec<MessageEntry> {
    let me = view.player();
    let partition = view.partition();
    let mut classes: BTreeMap<[u32; 2], Vec<(usize, usize)>> = BTreeMap::new();
    for &(u, v) in view.edges() {
        if partition.owner(u, v) != me {
            continue;
        }
        if let Some(class) = class_of(coloring[u], coloring[v], params.subset_size) {
            classes.entry(class).or_default().push((u, v));
        }
    }
    let mut rng = substream(seed, Domain::PlayerPick, rep as u64, me as u64);
    let mut entries = Vec::new();
    for (&class, edges) in &classes {
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        entries.push(MessageEntry {
            tag: EntryTag::EdgeU { rep, class },
            value: u as i64,
        });
        entries.push(MessageEntry {
            tag: EntryTag::EdgeV { rep, class },
            value: v as i64,
        });
        entries.push(MessageEntry {
            tag: EntryTag::OwnedCount { rep, class },
            value: edges.len() as i64,
        });
    }
    let empty = params.class_count() - classes.len() as u64;
    if empty > 0 {
        entries.push(MessageEntry {
            tag: EntryTag::ZeroClassCounts { rep },
            value: empty as i64,
        });
    }
    entries
}

/// A full sampling-primitive run.
pub struct SamplePrimitiveRun {
    pub messages: Vec<Message>,
    /// The union over repetitions and classes of the referee's picks.
    pub edges: BTreeSet<(usize, usize)>,
}

/// Runs `r` independent repetitions of the sampling primitive over the
/// views. Each repetition colors the vertices afresh from shared
/// randomness; the referee then picks, per color class, a player with
/// probability proportional to the reported owned counts and keeps that
/// player's edge, which is uniform over the class because ownership makes
/// the players' portions disjoint.
pub fn sample_primitive<V: ViewAccess>(
    views: &[V],
    colors: usize,
    subset_size: usize,
    repetitions: usize,
    seed: u64,
) -> Result<SamplePrimitiveRun> {
    let (n, edge_count) = check_views(views)?;
    if !(subset_size == 1 || subset_size == 2) {
        return Err(Error::InvalidInput(format!(
            "color subset size must be 1 or 2, got {subset_size}"
        )));
    }
    if colors < 2 {
        return Err(Error::InvalidInput("need at least 2 colors".into()));
    }
    if repetitions == 0 {
        return Err(Error::InvalidInput("need at least 1 repetition".into()));
    }
    let params = SampleParams {
        colors,
        subset_size,
    };
    let width = WidthParams { n, edge_count };

    let colorings: Vec<Vec<u32>> = (0..repetitions)
        .map(|rep| sample_coloring(n, colors, rep, seed))
        .collect();

    let per_player_entries: Vec<Vec<MessageEntry>> = par::indexed_map(views.len(), |i| {
        let mut entries = Vec::new();
        for (rep, coloring) in colorings.iter().enumerate() {
            entries.extend(sample_player_entries_inner(
                &views[i], rep, coloring, params, seed,
            ));
        }
        entries
    });
    let messages: Vec<Message> = per_player_entries
        .into_iter()
        .enumerate()
        .map(|(i, entries)| Message::price(i, entries, width))
        .collect();

    let edges = sample_referee(&messages, repetitions, seed);
    Ok(SamplePrimitiveRun { messages, edges })
}

/// A `(repetition, color class)` address.
type ClassKey = (usize, [u32; 2]);
/// Per player in index order: the offered edge and its owned count.
type ClassOffers = Vec<((usize, usize), u64)>;
/// Partially assembled `(edge endpoints, count)` triple for one class.
type PartialOffer = (Option<usize>, Option<usize>, Option<u64>);

/// Referee side of the sampling primitive: per repetition and class, a
/// weighted pick among the players' offered edges. Selecting a player with
/// probability proportional to its reported count and taking its uniform
/// edge yields an exactly uniform sample of the class.
pub fn sample_referee(
    messages: &[Message],
    repetitions: usize,
    seed: u64,
) -> BTreeSet<(usize, usize)> {
    let mut table: BTreeMap<ClassKey, ClassOffers> = BTreeMap::new();
    for msg in messages {
        let mut partial: BTreeMap<ClassKey, PartialOffer> = BTreeMap::new();
        for entry in &msg.entries {
            match entry.tag {
                EntryTag::EdgeU { rep, class } => {
                    partial.entry((rep, class)).or_default().0 = Some(entry.value as usize);
                }
                EntryTag::EdgeV { rep, class } => {
                    partial.entry((rep, class)).or_default().1 = Some(entry.value as usize);
                }
                EntryTag::OwnedCount { rep, class } => {
                    partial.entry((rep, class)).or_default().2 = Some(entry.value as u64);
                }
                _ => {}
            }
        }
        for (key, (u, v, count)) in partial {
            let (u, v, count) = (
                u.expect("edge entry pairs with its class"),
                v.expect("edge entry pairs with its class"),
                count.expect("count entry pairs with its class"),
            );
            table.entry(key).or_default().push(((u, v), count));
        }
    }
    let mut picked = BTreeSet::new();
    let mut rngs: Vec<_> = (0..repetitions)
        .map(|rep| substream(seed, Domain::RefereePick, rep as u64, 0))
        .collect();
    for ((rep, _class), offers) in table {
        let total: u64 = offers.iter().map(|&(_, c)| c).sum();
        let mut x = rngs[rep].gen_range(0..total);
        for (edge, count) in offers {
            if x < count {
                picked.insert(edge);
                break;
            }
            x -= count;
        }
    }
    picked
}

// ---------------------------------------------------------------------------
// Degree-sum sub-protocol
// ---------------------------------------------------------------------------

/// Player side of the exact degree estimator: one half-unit entry holding
/// `sum over owned vertices of min{deg(u)/2, 4 - deg(u)/2}`.
pub fn a_prime_player_entries<V: ViewAccess>(view: &V) -> Vec<MessageEntry> {
    let me = view.player();
    let partition = view.partition();
    let mut degree: HashMap<usize, i64> = HashMap::new();
    for &(u, v) in view.edges() {
        if partition.part_of(u) == me {
            *degree.entry(u).or_insert(0) += 1;
        }
        if partition.part_of(v) == me {
            *degree.entry(v).or_insert(0) += 1;
        }
    }
    // Owned isolated vertices contribute min{0, 8} = 0 half-units, so only
    // vertices seen in the edge list matter.
    let partial: i64 = degree.values().map(|&d| d.min(8 - d)).sum();
    vec![MessageEntry {
        tag: EntryTag::APrimePartial,
        value: partial,
    }]
}

/// Runs the degree-sum sub-protocol; the referee's total equals the offline
/// [`Graph::a_prime`] exactly.
pub fn a_prime_protocol<V: ViewAccess>(views: &[V]) -> Result<(Vec<Message>, HalfUnits)> {
    let (n, edge_count) = check_views(views)?;
    let width = WidthParams { n, edge_count };
    let messages: Vec<Message> = par::indexed_map(views.len(), |i| {
        Message::price(i, a_prime_player_entries(&views[i]), width)
    });
    let total = messages
        .iter()
        .flat_map(|m| &m.entries)
        .filter(|e| matches!(e.tag, EntryTag::APrimePartial))
        .map(|e| HalfUnits(e.value))
        .sum();
    Ok((messages, total))
}

// ---------------------------------------------------------------------------
// Final protocol
// ---------------------------------------------------------------------------

/// Referee threshold rule: switch to the sampling estimator when the exact
/// degree sum `z3` reaches tau.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauRule {
    /// `tau = k`. With this choice both branches' preconditions hold:
    /// `z3 >= k` forces a matching (and hence locally-superior count) large
    /// enough for the sampler, while `z3 < k` bounds the matching size for
    /// the edge-sampling branch.
    K,
    /// The verbatim `tau = k / 12.5`, selectable for fidelity experiments.
    KOver12_5,
}

impl TauRule {
    fn z1_branch(self, z3: HalfUnits, k: usize) -> bool {
        match self {
            // z3 >= k  <=>  half-units >= 2k
            TauRule::K => z3.0 >= 2 * k as i64,
            // z3 >= k/12.5  <=>  25 * half-units >= 4k
            TauRule::KOver12_5 => 25 * z3.0 >= 4 * k as i64,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TauRule::K => "k",
            TauRule::KOver12_5 => "k-over-12.5",
        }
    }
}

/// Configuration of the final protocol. Unset knobs resolve to their
/// defaults at run time from the vertex count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Threshold parameter; defaults to `ceil(n^(1/3))`.
    pub k: Option<usize>,
    /// Palette size; defaults to `100 k`.
    pub colors: Option<usize>,
    /// Color subset size, 1 or 2.
    pub color_subset_size: usize,
    /// Multiplier in the default sampling-repetition count.
    pub sample_constant: usize,
    /// Repetitions of the sampling primitive; defaults to
    /// `sample_constant * ceil(log2(k+1))`.
    pub sample_repetitions: Option<usize>,
    pub tau: TauRule,
}

impl ProtocolConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        ProtocolConfig {
            epsilon,
            seed,
            k: None,
            colors: None,
            color_subset_size: 2,
            sample_constant: 10,
            sample_repetitions: None,
            tau: TauRule::K,
        }
    }

    /// Resolves all parameters for a graph on `n` vertices.
    pub fn resolve(&self, n: usize) -> ResolvedProtocol {
        let k = self.k.unwrap_or_else(|| ceil_cbrt(n)).max(1);
        let colors = self.colors.unwrap_or(100 * k).max(2);
        let r_sample = self
            .sample_repetitions
            .unwrap_or_else(|| self.sample_constant * ceil_log2(k as u64 + 1) as usize)
            .max(1);
        // s = min(n, ceil(12.5 n / k)) = min(n, ceil(25n / 2k))
        let s = n.min((25 * n).div_ceil(2 * k));
        ResolvedProtocol {
            k,
            colors,
            subset_size: self.color_subset_size,
            r_sample,
            sample_size: s,
            ls_repetitions: SamplerConfig::default_repetitions(self.epsilon),
            tau: self.tau,
        }
    }
}

/// Concrete parameters of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedProtocol {
    pub k: usize,
    pub colors: usize,
    pub subset_size: usize,
    pub r_sample: usize,
    pub sample_size: usize,
    pub ls_repetitions: usize,
    pub tau: TauRule,
}

fn ceil_cbrt(n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let mut k = (n as f64).cbrt().round() as usize;
    while k.pow(3) < n {
        k += 1;
    }
    while k > 1 && (k - 1).pow(3) >= n {
        k -= 1;
    }
    k
}

/// All messages of a protocol run, dumpable for debugging.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolTranscript {
    pub ls: Vec<Message>,
    pub sample: Vec<Message>,
    pub a_prime: Vec<Message>,
}

/// Runs the three sub-protocols on the same views and applies the referee's
/// threshold: output the sampling estimate `z1` when the exact degree sum
/// `z3` reaches tau, otherwise the exact matching size `z2` of the sampled
/// edge set. The report carries all three values, the branch, and the
/// per-player bit accounting.
pub fn final_protocol<V: ViewAccess>(views: &[V], cfg: &ProtocolConfig) -> Result<EstimateReport> {
    Ok(final_protocol_with_transcript(views, cfg)?.0)
}

pub fn final_protocol_with_transcript<V: ViewAccess>(
    views: &[V],
    cfg: &ProtocolConfig,
) -> Result<(EstimateReport, ProtocolTranscript)> {
    let (n, _) = check_views(views)?;
    let resolved = cfg.resolve(n);

    let sampler_cfg = SamplerConfig {
        sample_size: resolved.sample_size.max(1),
        epsilon: cfg.epsilon,
        repetitions: resolved.ls_repetitions,
        seed: cfg.seed,
        median_groups: None,
    };
    let ls_run = ls_protocol(views, &sampler_cfg)?;
    let sample_run = sample_primitive(
        views,
        resolved.colors,
        resolved.subset_size,
        resolved.r_sample,
        cfg.seed,
    )?;
    let (ap_messages, z3) = a_prime_protocol(views)?;

    let sampled_edges: Vec<(usize, usize)> = sample_run.edges.iter().copied().collect();
    let z2 = maximum_matching_size(
        &Graph::from_edges(n, &sampled_edges).expect("referee holds real graph edges"),
    );
    let z1 = ls_run.outcome.z1;

    let z1_branch = resolved.tau.z1_branch(z3, resolved.k);
    let (value, branch) = if z1_branch {
        (z1, BRANCH_Z1)
    } else {
        (z2 as f64, BRANCH_Z2)
    };

    let per_player: Vec<u64> = (0..views.len())
        .map(|i| {
            ls_run.messages[i].bit_size + sample_run.messages[i].bit_size + ap_messages[i].bit_size
        })
        .collect();
    let max_bits = per_player.iter().copied().max().unwrap_or(0);

    let echo = ConfigEcho {
        epsilon: Some(cfg.epsilon),
        sample_size: Some(sampler_cfg.sample_size),
        repetitions: Some(sampler_cfg.repetitions),
        players: Some(views.len()),
        k: Some(resolved.k),
        colors: Some(resolved.colors),
        color_subset_size: Some(resolved.subset_size),
        sample_repetitions: Some(resolved.r_sample),
        tau: Some(resolved.tau.label().to_string()),
        ..ConfigEcho::default()
    };
    let mut report = EstimateReport::new(value, cfg.seed, echo);
    report.branch = Some(branch.into());
    report.repetition_values = ls_run.outcome.per_repetition.clone();
    report.z1 = Some(z1);
    report.z2 = Some(z2);
    report.z3 = Some(z3.to_f64());
    report.accounting = Some(ResourceAccounting::PlayerBits {
        per_player,
        max: max_bits,
    });
    let transcript = ProtocolTranscript {
        ls: ls_run.messages,
        sample: sample_run.messages,
        a_prime: ap_messages,
    };
    Ok((report, transcript))
}
