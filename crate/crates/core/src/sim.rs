//! Synchronous message-passing executions of the two backbone algorithms.
//!
//! Messages sent in a round are delivered at the end of that round and
//! handled before the next one. A message to a non-neighbor is forwarded one
//! hop per round along a shortest path (smallest-id next hop) of the routing
//! graph; every hop counts as one message. Message sizes are measured in
//! units of `⌈log2 n⌉` bits: every message carries its origin and destination
//! plus a small per-kind payload.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::approx::ConnectorGraph;
use crate::graph::{Digraph, Instance, NodeId};
use crate::ldhd::Color;
use crate::mis::{LubyRun, MisResult};
use crate::solution::{Algorithm, Solution, WitnessPath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("input graph is not strongly connected")]
    NotStronglyConnected,
    #[error("{kind} message of {bits} bits exceeds its {limit}-bit bound")]
    MessageTooLarge {
        kind: MessageKind,
        bits: u64,
        limit: u64,
    },
    #[error("no route from {from} to {to}")]
    NoRoute { from: NodeId, to: NodeId },
    #[error("source {node} informs {ids} nodes, above the bound {limit}")]
    InformPayload {
        node: NodeId,
        ids: usize,
        limit: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageKind {
    MisPriority,
    MisDecide,
    EdgeRequest,
    EdgeAccept,
    Inform,
    LdhdToken,
    DegreeUpdate,
}

impl MessageKind {
    pub const ALL: [MessageKind; 7] = [
        MessageKind::MisPriority,
        MessageKind::MisDecide,
        MessageKind::EdgeRequest,
        MessageKind::EdgeAccept,
        MessageKind::Inform,
        MessageKind::LdhdToken,
        MessageKind::DegreeUpdate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MessageKind::MisPriority => "mis_priority",
            MessageKind::MisDecide => "mis_decide",
            MessageKind::EdgeRequest => "edge_request",
            MessageKind::EdgeAccept => "edge_accept",
            MessageKind::Inform => "inform",
            MessageKind::LdhdToken => "ldhd_token",
            MessageKind::DegreeUpdate => "degree_update",
        }
    }

    /// Size bound in units of `⌈log2 n⌉` bits.
    ///
    /// | kind          | content                                       |
    /// |---------------|-----------------------------------------------|
    /// | mis_priority  | header + priority drawn below `n^4`           |
    /// | mis_decide    | header                                        |
    /// | edge_request  | header + up to two relay ids                  |
    /// | edge_accept   | header + up to two inner ids                  |
    /// | inform        | header + source id                            |
    /// | ldhd_token    | header + two selected ids + verdict bit       |
    /// | degree_update | header + degree + two color bits              |
    pub fn max_units(self) -> u64 {
        match self {
            MessageKind::MisPriority => 6,
            MessageKind::MisDecide => 2,
            MessageKind::EdgeRequest => 4,
            MessageKind::EdgeAccept => 4,
            MessageKind::Inform => 4,
            MessageKind::LdhdToken => 5,
            MessageKind::DegreeUpdate => 5,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn flag_bits(self) -> u64 {
        match self {
            MessageKind::LdhdToken => 1,
            MessageKind::DegreeUpdate => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `⌈log2 n⌉`, at least 1.
pub fn id_bits(n: usize) -> u32 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1)
}

const MAX_PAYLOAD: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Message {
    pub kind: MessageKind,
    /// Originating node (for edge requests: the independent node that started it).
    pub source: NodeId,
    pub dest: NodeId,
    payload: [u64; MAX_PAYLOAD],
    len: u8,
    /// Color or verdict bits.
    pub flags: u8,
    pub size_bits: u64,
}

impl Message {
    pub fn payload(&self) -> &[u64] {
        &self.payload[..self.len as usize]
    }

    fn payload_ids(&self) -> Vec<NodeId> {
        self.payload().iter().map(|&p| p as NodeId).collect()
    }
}

/// Per-round message accounting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub counts: [usize; 7],
    pub total_bits: u64,
}

impl RoundStats {
    pub fn count(&self, kind: MessageKind) -> usize {
        self.counts[kind.index()]
    }

    pub fn messages(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Last round of each phase of the approximation (1-based, cumulative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseEnds {
    pub mis_end: usize,
    pub connect_end: usize,
    pub inform_end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrace {
    pub per_round: Vec<RoundStats>,
    pub max_message_bits: u64,
    pub id_bits: u32,
    pub phases: Option<PhaseEnds>,
}

impl RoundTrace {
    pub fn rounds(&self) -> usize {
        self.per_round.len()
    }

    pub fn total_messages(&self) -> usize {
        self.per_round.iter().map(RoundStats::messages).sum()
    }

    pub fn messages_of(&self, kind: MessageKind) -> usize {
        self.per_round.iter().map(|r| r.count(kind)).sum()
    }

    /// One line per round: `round kind_counts total_bits`, where
    /// `kind_counts` is `kind:count` for the kinds sent that round, comma
    /// separated, or `-`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.per_round.iter().enumerate() {
            let kinds: Vec<String> = MessageKind::ALL
                .iter()
                .filter(|k| r.count(**k) > 0)
                .map(|k| format!("{}:{}", k.name(), r.count(*k)))
                .collect();
            let kinds = if kinds.is_empty() {
                "-".to_string()
            } else {
                kinds.join(",")
            };
            writeln!(out, "{} {} {}", i + 1, kinds, r.total_bits).unwrap();
        }
        out
    }
}

/// Shortest-path next hops inside the nodes where `alive` holds.
struct Routes<'g> {
    g: &'g Digraph,
    alive: Vec<bool>,
    dist_to: HashMap<NodeId, Vec<usize>>,
}

impl<'g> Routes<'g> {
    fn new(g: &'g Digraph, alive: Vec<bool>) -> Self {
        Self {
            g,
            alive,
            dist_to: HashMap::new(),
        }
    }

    fn next_hop(&mut self, at: NodeId, dest: NodeId) -> Option<NodeId> {
        let (g, alive) = (self.g, &self.alive);
        let dist = self.dist_to.entry(dest).or_insert_with(|| {
            let mut dist = vec![usize::MAX; g.n()];
            dist[dest] = 0;
            let mut queue = VecDeque::from([dest]);
            while let Some(x) = queue.pop_front() {
                for &y in g.in_neighbors(x) {
                    if alive[y] && dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            dist
        });
        if dist[at] == usize::MAX || at == dest {
            return None;
        }
        g.out_neighbors(at)
            .iter()
            .copied()
            .find(|&y| dist[y] != usize::MAX && dist[y] + 1 == dist[at])
    }
}

struct Network {
    id_bits: u32,
    rounds: Vec<RoundStats>,
    max_bits: u64,
    queued: Vec<(Message, NodeId)>,
}

impl Network {
    fn new(n: usize) -> Self {
        Self {
            id_bits: id_bits(n),
            rounds: Vec::new(),
            max_bits: 0,
            queued: Vec::new(),
        }
    }

    fn message(
        &self,
        kind: MessageKind,
        source: NodeId,
        dest: NodeId,
        payload: &[u64],
        flags: u8,
    ) -> Result<Message, SimError> {
        assert!(payload.len() <= MAX_PAYLOAD, "payload too long for {kind}");
        let unit = u64::from(self.id_bits);
        let field_units = match kind {
            // priorities are drawn below n^4
            MessageKind::MisPriority => 4 * payload.len() as u64,
            _ => payload.len() as u64,
        };
        let size_bits = (2 + field_units) * unit + kind.flag_bits();
        let limit = kind.max_units() * unit;
        if size_bits > limit {
            return Err(SimError::MessageTooLarge {
                kind,
                bits: size_bits,
                limit,
            });
        }
        let mut buf = [0; MAX_PAYLOAD];
        buf[..payload.len()].copy_from_slice(payload);
        Ok(Message {
            kind,
            source,
            dest,
            payload: buf,
            len: payload.len() as u8,
            flags,
            size_bits,
        })
    }

    /// Queues a message at node `at` for the next round.
    fn post(
        &mut self,
        at: NodeId,
        kind: MessageKind,
        source: NodeId,
        dest: NodeId,
        payload: &[u64],
        flags: u8,
    ) -> Result<(), SimError> {
        let msg = self.message(kind, source, dest, payload, flags)?;
        self.queued.push((msg, at));
        Ok(())
    }

    fn idle(&self) -> bool {
        self.queued.is_empty()
    }

    /// Moves every queued message one hop. Returns the messages that reached
    /// their destination, sorted.
    fn round(&mut self, routes: &mut Routes) -> Result<Vec<Message>, SimError> {
        let mut stats = RoundStats::default();
        let mut delivered = Vec::new();
        let mut onward = Vec::new();
        for (msg, at) in std::mem::take(&mut self.queued) {
            let hop = if routes.g.has_arc(at, msg.dest) {
                msg.dest
            } else {
                routes.next_hop(at, msg.dest).ok_or(SimError::NoRoute {
                    from: at,
                    to: msg.dest,
                })?
            };
            stats.counts[msg.kind.index()] += 1;
            stats.total_bits += msg.size_bits;
            self.max_bits = self.max_bits.max(msg.size_bits);
            if hop == msg.dest {
                delivered.push(msg);
            } else {
                onward.push((msg, hop));
            }
        }
        self.queued = onward;
        self.rounds.push(stats);
        delivered.sort_unstable();
        Ok(delivered)
    }

    /// Runs rounds until nothing is in flight, handing each delivery to
    /// `handle` (which may queue follow-up messages).
    fn drain(
        &mut self,
        routes: &mut Routes,
        mut handle: impl FnMut(&mut Network, Message) -> Result<(), SimError>,
    ) -> Result<(), SimError> {
        while !self.idle() {
            for msg in self.round(routes)? {
                handle(self, msg)?;
            }
        }
        Ok(())
    }

    fn trace(self, phases: Option<PhaseEnds>) -> RoundTrace {
        RoundTrace {
            per_round: self.rounds,
            max_message_bits: self.max_bits,
            id_bits: self.id_bits,
            phases,
        }
    }
}

/// Distributed run of the approximation.
#[derive(Debug, Clone)]
pub struct ApproxSim {
    pub solution: Solution,
    pub trace: RoundTrace,
    pub mis: MisResult,
    /// Arcs formed by the first edge request each independent node received
    /// from each source.
    pub connector: ConnectorGraph,
    /// `(relay, source)` for every edge request a relay forwarded.
    pub relay_forwards: Vec<(NodeId, NodeId)>,
    /// Distinct nodes each source had to inform.
    pub inform_ids: Vec<(NodeId, usize)>,
    /// Sources informing more than `2k²` nodes (logged, not enforced).
    pub over_tight_inform_bound: usize,
}

/// Bound on the nodes one source informs: `⌈2 · 49k²⌉`.
pub fn inform_id_limit(k: f64) -> usize {
    (2.0 * 49.0 * k * k).ceil() as usize
}

/// Runs the approximation as a synchronous protocol.
///
/// 1. Randomized MIS on the bidirectional links; one round per iteration
///    (priority exchange and join notices).
/// 2. Three rounds of edge-request flooding. Relays outside the set forward
///    only the first request per source and append their id; requests die
///    after two relays. Each independent node keeps the first request per
///    source (smallest relay path on ties). Skipped when no node has a link.
/// 3. Every kept request is acknowledged to its source, and its sink informs
///    the relays on it; both are routed inside the backbone.
pub fn simulate_approx(inst: &Instance, seed: u64) -> Result<ApproxSim, SimError> {
    let g = inst.digraph();
    if !g.is_strongly_connected() {
        return Err(SimError::NotStronglyConnected);
    }
    let n = g.n();
    let mut net = Network::new(n);
    let mut routes = Routes::new(g, vec![true; n]);

    // phase 1
    let bidir = g.bidirectional_subgraph();
    let prio_bits = (4 * net.id_bits).min(64);
    let prio_mask = if prio_bits == 64 {
        u64::MAX
    } else {
        (1u64 << prio_bits) - 1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut luby = LubyRun::new(&bidir);
    while !luby.finished() {
        let round = luby.round(|| rng.next_u64() & prio_mask);
        let mut live = vec![false; n];
        for &(v, _) in &round.drawn {
            live[v] = true;
        }
        for &(v, prio) in &round.drawn {
            for &w in bidir.neighbors(v).iter().filter(|&&w| live[w]) {
                net.post(v, MessageKind::MisPriority, v, w, &[prio], 0)?;
            }
        }
        for &v in &round.joined {
            for &w in bidir.neighbors(v).iter().filter(|&&w| live[w]) {
                net.post(v, MessageKind::MisDecide, v, w, &[], 0)?;
            }
        }
        net.round(&mut routes)?;
    }
    let mis = luby.into_result();
    let mis_end = net.rounds.len();

    // phase 2
    let in_mis = g.mask(&mis.members).expect("members are nodes");
    let mut kept: Vec<BTreeMap<NodeId, Vec<NodeId>>> = vec![BTreeMap::new(); n];
    let mut relayed: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    let mut relay_forwards = Vec::new();
    if g.arc_count() > 0 {
        for &u in &mis.members {
            for &x in g.out_neighbors(u) {
                net.post(u, MessageKind::EdgeRequest, u, x, &[], 0)?;
            }
        }
        for _ in 0..3 {
            let delivered = net.round(&mut routes)?;
            // sorted by (dest, source, payload): the first of each group wins
            let mut last = None;
            for msg in delivered {
                if last == Some((msg.dest, msg.source)) {
                    continue;
                }
                last = Some((msg.dest, msg.source));
                let (x, src) = (msg.dest, msg.source);
                let inner = msg.payload_ids();
                if in_mis[x] {
                    if x != src {
                        kept[x].entry(src).or_insert(inner);
                    }
                } else if relayed[x].insert(src) {
                    relay_forwards.push((x, src));
                    if inner.len() < 2 {
                        let mut path: Vec<u64> = msg.payload().to_vec();
                        path.push(x as u64);
                        for &y in g.out_neighbors(x) {
                            net.post(x, MessageKind::EdgeRequest, src, y, &path, 0)?;
                        }
                    }
                }
            }
        }
        debug_assert!(net.idle());
    }
    let connect_end = net.rounds.len();

    let mut arcs: Vec<WitnessPath> = kept
        .iter()
        .enumerate()
        .flat_map(|(v, by_src)| {
            by_src
                .iter()
                .map(move |(&u, inner)| WitnessPath::new(u, v, inner.clone()))
        })
        .collect();
    arcs.sort();
    let connector = ConnectorGraph::from_parts(mis.members.clone(), arcs.clone());
    let backbone: BTreeSet<NodeId> = mis
        .members
        .iter()
        .copied()
        .chain(connector.inner_nodes())
        .collect();

    // phase 3
    let mut alive = vec![false; n];
    for &v in &backbone {
        alive[v] = true;
    }
    let mut backbone_routes = Routes::new(g, alive);
    // the sink acknowledges to the source and informs each relay directly
    for arc in &arcs {
        let inner: Vec<u64> = arc.inner.iter().map(|&v| v as u64).collect();
        net.post(arc.to, MessageKind::EdgeAccept, arc.to, arc.from, &inner, 0)?;
        for &x in &arc.inner {
            net.post(
                arc.to,
                MessageKind::Inform,
                arc.to,
                x,
                &[arc.from as u64],
                0,
            )?;
        }
    }
    let mut informed = vec![false; n];
    net.drain(&mut backbone_routes, |_, msg| {
        if msg.kind == MessageKind::Inform {
            informed[msg.dest] = true;
        }
        Ok(())
    })?;
    let inform_end = net.rounds.len();
    debug_assert!(connector.inner_nodes().iter().all(|&v| informed[v]));

    let mut per_source: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for arc in &arcs {
        per_source
            .entry(arc.from)
            .or_default()
            .extend(arc.inner.iter().copied());
    }
    let inform_ids: Vec<(NodeId, usize)> = per_source
        .into_iter()
        .map(|(src, ids)| (src, ids.len()))
        .collect();
    let mut over_tight_inform_bound = 0;
    if let Some(k) = inst.transmission_ratio() {
        let limit = inform_id_limit(k);
        for &(source, ids) in &inform_ids {
            if ids > limit {
                return Err(SimError::InformPayload {
                    node: source,
                    ids,
                    limit,
                });
            }
            if ids as f64 > 2.0 * k * k {
                over_tight_inform_bound += 1;
            }
        }
    }

    let solution = Solution::new(Algorithm::Approx, backbone)
        .with_seed(seed)
        .with_witnesses(arcs);
    let trace = net.trace(Some(PhaseEnds {
        mis_end,
        connect_end,
        inform_end,
    }));
    Ok(ApproxSim {
        solution,
        trace,
        mis,
        connector,
        relay_forwards,
        inform_ids,
        over_tight_inform_bound,
    })
}

/// Distributed run of the heuristic.
#[derive(Debug, Clone)]
pub struct LdhdSim {
    pub solution: Solution,
    pub trace: RoundTrace,
    /// One turn per white node taking its decision.
    pub turns: usize,
    /// Rounds spent on the initial neighborhood exchange.
    pub setup_rounds: usize,
}

/// What each node believes about its in- and out-neighbors.
struct Views {
    neighbors: Vec<Vec<NodeId>>,
    entries: Vec<Vec<(usize, Color)>>,
}

impl Views {
    fn get(&self, x: NodeId, y: NodeId) -> (usize, Color) {
        let i = self.neighbors[x]
            .binary_search(&y)
            .expect("y is a neighbor of x");
        self.entries[x][i]
    }

    fn set(&mut self, x: NodeId, y: NodeId, entry: (usize, Color)) {
        let i = self.neighbors[x]
            .binary_search(&y)
            .expect("y is a neighbor of x");
        self.entries[x][i] = entry;
    }

    fn non_red(&self, x: NodeId) -> usize {
        self.entries[x].iter().filter(|e| e.1 != Color::Red).count()
    }
}

fn color_bits(c: Color) -> u8 {
    match c {
        Color::White => 0,
        Color::Green => 1,
        Color::Red => 2,
    }
}

fn color_from_bits(b: u8) -> Color {
    match b {
        0 => Color::White,
        1 => Color::Green,
        _ => Color::Red,
    }
}

/// Records a neighbor's `(degree, color)` report at the receiver and
/// recomputes the receiver's degree.
fn apply_status(views: &mut Views, degree: &mut [usize], changed: &mut Vec<NodeId>, msg: Message) {
    let (x, y) = (msg.source, msg.dest);
    let c = color_from_bits(msg.flags);
    views.set(y, x, (msg.payload[0] as usize, c));
    let d = views.non_red(y);
    if d != degree[y] {
        degree[y] = d;
        changed.push(y);
    }
}

/// Runs the heuristic as a protocol in which every decision is taken from
/// node-local knowledge.
///
/// Nodes first send `(degree, color)` to all their in- and out-neighbors.
/// Then turns follow in ascending `(degree, id)` over white nodes (a global
/// token stands in for the contention rule). The connectivity test itself is
/// evaluated globally. A red node picks the dominating and absorbing
/// neighbors from its own table and notifies them; every color or degree
/// change is then reported to all neighbors, white nodes apply the
/// single-neighbor rule from their tables one after another in ascending id,
/// and forced nodes report back.
/// Each of these stages runs until no message is in flight.
pub fn simulate_ldhd(inst: &Instance) -> Result<LdhdSim, SimError> {
    let g = inst.digraph();
    if !g.is_strongly_connected() {
        return Err(SimError::NotStronglyConnected);
    }
    let n = g.n();
    let mut net = Network::new(n);
    let mut routes = Routes::new(g, vec![true; n]);
    let neighbors: Vec<Vec<NodeId>> = (0..n).map(|x| g.neighbors(x)).collect();
    let mut color = vec![Color::White; n];
    let mut degree: Vec<usize> = neighbors.iter().map(Vec::len).collect();
    let mut views = Views {
        entries: neighbors
            .iter()
            .map(|l| vec![(0, Color::White); l.len()])
            .collect(),
        neighbors: neighbors.clone(),
    };

    let broadcast = |net: &mut Network, x: NodeId, degree: usize, c: Color| {
        for &y in &neighbors[x] {
            net.post(
                x,
                MessageKind::DegreeUpdate,
                x,
                y,
                &[degree as u64],
                color_bits(c),
            )?;
        }
        Ok::<(), SimError>(())
    };
    let mut changed_degree: Vec<NodeId> = Vec::new();

    for (x, &d) in degree.iter().enumerate() {
        broadcast(&mut net, x, d, Color::White)?;
    }
    net.drain(&mut routes, |_, msg| {
        apply_status(&mut views, &mut degree, &mut changed_degree, msg);
        Ok(())
    })?;
    let setup_rounds = net.rounds.len();

    let mut turns = 0;
    while let Some(v) = (0..n)
        .filter(|&x| color[x] == Color::White)
        .min_by_key(|&x| (degree[x], x))
    {
        turns += 1;
        let mut rest: Vec<bool> = color.iter().map(|&c| c != Color::Red).collect();
        rest[v] = false;
        let keeps = rest.iter().any(|&r| r) && g.is_strongly_connected_within(&rest);

        if !keeps {
            color[v] = Color::Green;
            broadcast(&mut net, v, degree[v], Color::Green)?;
            net.drain(&mut routes, |_, msg| {
                apply_status(&mut views, &mut degree, &mut changed_degree, msg);
                Ok(())
            })?;
            continue;
        }

        color[v] = Color::Red;
        // every neighbor of v loses exactly one non-red neighbor: v itself
        let pick = |side: &[NodeId], chosen: Option<NodeId>| {
            let entry = |y: NodeId| views.get(v, y);
            if side
                .iter()
                .any(|&y| entry(y).1 == Color::Green || Some(y) == chosen)
            {
                return None;
            }
            side.iter()
                .copied()
                .filter(|&y| entry(y).1 != Color::Red)
                .min_by_key(|&y| (std::cmp::Reverse(entry(y).0 - 1), y))
        };
        let u = pick(g.in_neighbors(v), None);
        let w = pick(g.out_neighbors(v), u);
        let none = n as u64;
        let mut targets: Vec<NodeId> = [u, w].into_iter().flatten().collect();
        targets.dedup();
        for &t in &targets {
            let sel = [u.map_or(none, |x| x as u64), w.map_or(none, |x| x as u64)];
            net.post(v, MessageKind::LdhdToken, v, t, &sel, 0)?;
        }
        net.drain(&mut routes, |_, msg| {
            color[msg.dest] = Color::Green;
            Ok(())
        })?;

        // color changes of v, u and w
        changed_degree.clear();
        for x in std::iter::once(v).chain(targets.iter().copied()) {
            broadcast(&mut net, x, degree[x], color[x])?;
        }
        net.drain(&mut routes, |_, msg| {
            apply_status(&mut views, &mut degree, &mut changed_degree, msg);
            Ok(())
        })?;

        // degree changes of v's neighbors
        let mut movers = std::mem::take(&mut changed_degree);
        movers.sort_unstable();
        movers.dedup();
        for &x in &movers {
            broadcast(&mut net, x, degree[x], color[x])?;
        }
        net.drain(&mut routes, |_, msg| {
            apply_status(&mut views, &mut degree, &mut changed_degree, msg);
            Ok(())
        })?;

        // single-neighbor rule in ascending id: each triggering white node
        // gets its own sub-stage, so a node forced green before its turn
        // knows it is no longer white
        let mut forced = Vec::new();
        for x in 0..n {
            if color[x] != Color::White {
                continue;
            }
            for side in [g.in_neighbors(x), g.out_neighbors(x)] {
                let alive: Vec<NodeId> = side
                    .iter()
                    .copied()
                    .filter(|&y| views.get(x, y).1 != Color::Red)
                    .collect();
                if let [only] = alive[..] {
                    if views.get(x, only).1 != Color::Green {
                        net.post(x, MessageKind::LdhdToken, x, only, &[], 1)?;
                    }
                }
            }
            net.drain(&mut routes, |_, msg| {
                if color[msg.dest] != Color::Green {
                    color[msg.dest] = Color::Green;
                    forced.push(msg.dest);
                }
                Ok(())
            })?;
        }
        for &x in &forced {
            broadcast(&mut net, x, degree[x], Color::Green)?;
        }
        net.drain(&mut routes, |_, msg| {
            apply_status(&mut views, &mut degree, &mut changed_degree, msg);
            Ok(())
        })?;
    }

    let greens = (0..n).filter(|&x| color[x] == Color::Green);
    Ok(LdhdSim {
        solution: Solution::new(Algorithm::Ldhd, greens),
        trace: net.trace(None),
        turns,
        setup_rounds,
    })
}

/// One row of [`round_bound_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRow {
    pub n: usize,
    pub diam: usize,
    pub mis_rounds: usize,
    pub connect_rounds: usize,
    pub inform_rounds: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoundReport {
    pub rows: Vec<RoundRow>,
    /// Mean and max of `total / Diam` over rows with `Diam > 0`.
    pub total_per_diam: Option<(f64, f64)>,
    /// Mean and max of `mis_rounds / log2 n` over rows with `n ≥ 2`.
    pub mis_per_log2n: Option<(f64, f64)>,
}

fn mean_max(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    Some((mean, max))
}

/// Tabulates phase lengths of approximation traces against each graph's
/// diameter. Traces without phase data (and unaligned tails) are skipped.
pub fn round_bound_report(traces: &[RoundTrace], graphs: &[Digraph]) -> RoundReport {
    let rows: Vec<RoundRow> = traces
        .iter()
        .zip(graphs)
        .filter_map(|(t, g)| {
            let p = t.phases?;
            Some(RoundRow {
                n: g.n(),
                diam: g.diameter().ok()?,
                mis_rounds: p.mis_end,
                connect_rounds: p.connect_end - p.mis_end,
                inform_rounds: p.inform_end - p.connect_end,
                total: t.rounds(),
            })
        })
        .collect();
    let per_diam: Vec<f64> = rows
        .iter()
        .filter(|r| r.diam > 0)
        .map(|r| r.total as f64 / r.diam as f64)
        .collect();
    let per_log: Vec<f64> = rows
        .iter()
        .filter(|r| r.n >= 2)
        .map(|r| r.mis_rounds as f64 / (r.n as f64).log2())
        .collect();
    RoundReport {
        total_per_diam: mean_max(&per_diam),
        mis_per_log2n: mean_max(&per_log),
        rows,
    }
}

impl fmt::Display for RoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n diam mis_rounds connect_rounds inform_rounds total")?;
        for r in &self.rows {
            writeln!(
                f,
                "{} {} {} {} {} {}",
                r.n, r.diam, r.mis_rounds, r.connect_rounds, r.inform_rounds, r.total
            )?;
        }
        if let Some((mean, max)) = self.total_per_diam {
            writeln!(f, "# total/diam mean {mean:.4} max {max:.4}")?;
        }
        if let Some((mean, max)) = self.mis_per_log2n {
            writeln!(f, "# mis_rounds/log2n mean {mean:.4} max {max:.4}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Verdict;
    use crate::instance::{all_fixtures, fixture};
    use crate::ldhd::ldhd;

    #[test]
    fn id_bits_values() {
        assert_eq!(id_bits(1), 1);
        assert_eq!(id_bits(2), 1);
        assert_eq!(id_bits(3), 2);
        assert_eq!(id_bits(8), 3);
        assert_eq!(id_bits(9), 4);
        assert_eq!(id_bits(200), 8);
    }

    #[test]
    fn oversized_message_is_rejected() {
        let net = Network::new(16);
        let err = net
            .message(MessageKind::MisDecide, 0, 1, &[3], 0)
            .unwrap_err();
        assert!(matches!(err, SimError::MessageTooLarge { .. }));
    }

    #[test]
    fn approx_on_i1() {
        let inst = fixture("i1_mixed").unwrap();
        for seed in 0..20 {
            let sim = simulate_approx(&inst, seed).unwrap();
            let p = sim.trace.phases.unwrap();
            assert_eq!(p.connect_end, p.mis_end + 3);
            assert!(sim
                .mis
                .members
                .iter()
                .all(|m| sim.solution.members().contains(m)));
            assert_eq!(
                sim.solution.validate(inst.digraph()).unwrap(),
                Verdict::Valid
            );
        }
    }

    #[test]
    fn approx_on_single_node() {
        let inst = Instance::Abstract(Digraph::empty(1));
        let sim = simulate_approx(&inst, 3).unwrap();
        assert_eq!(sim.trace.rounds(), 1);
        assert_eq!(sim.trace.phases.unwrap().mis_end, 1);
        assert_eq!(sim.trace.messages_of(MessageKind::EdgeRequest), 0);
        assert_eq!(sim.solution.members(), &[0]);
    }

    #[test]
    fn approx_on_star_informs_quickly() {
        let inst = fixture("star5").unwrap();
        let diam = inst.digraph().diameter().unwrap();
        for seed in 0..20 {
            let sim = simulate_approx(&inst, seed).unwrap();
            let p = sim.trace.phases.unwrap();
            assert!(p.inform_end - p.connect_end <= diam, "seed {seed}");
            assert_eq!(
                sim.solution.validate(inst.digraph()).unwrap(),
                Verdict::Valid
            );
        }
    }

    #[test]
    fn relays_forward_each_source_once() {
        for (_, inst) in all_fixtures() {
            let sim = simulate_approx(&inst, 1).unwrap();
            let unique: BTreeSet<_> = sim.relay_forwards.iter().collect();
            assert_eq!(unique.len(), sim.relay_forwards.len());
        }
    }

    #[test]
    fn ldhd_matches_sequential_on_fixtures() {
        for (name, inst) in all_fixtures() {
            let sim = simulate_ldhd(&inst).unwrap();
            let seq = ldhd(inst.digraph()).unwrap();
            assert_eq!(sim.solution.members(), seq.solution.members(), "{name}");
        }
        let sim = simulate_ldhd(&fixture("i1_mixed").unwrap()).unwrap();
        assert_eq!(sim.solution.members(), &[1]);
    }

    #[test]
    fn ldhd_single_node_sends_nothing() {
        let sim = simulate_ldhd(&Instance::Abstract(Digraph::empty(1))).unwrap();
        assert_eq!(sim.solution.members(), &[0]);
        assert_eq!(sim.trace.total_messages(), 0);
    }

    #[test]
    fn simulations_reject_disconnected_input() {
        let inst = Instance::Abstract(Digraph::from_arcs(2, [(0, 1)]).unwrap());
        assert_eq!(
            simulate_approx(&inst, 0).unwrap_err(),
            SimError::NotStronglyConnected
        );
        assert_eq!(
            simulate_ldhd(&inst).unwrap_err(),
            SimError::NotStronglyConnected
        );
    }

    #[test]
    fn report_shapes() {
        assert!(round_bound_report(&[], &[]).rows.is_empty());
        let inst = fixture("k3").unwrap();
        let sim = simulate_approx(&inst, 0).unwrap();
        let report = round_bound_report(
            std::slice::from_ref(&sim.trace),
            std::slice::from_ref(inst.digraph()),
        );
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].total, sim.trace.rounds());
        assert_eq!(report.rows[0].connect_rounds, 3);
    }

    #[test]
    fn trace_dump_has_one_line_per_round() {
        let inst = fixture("bipath3").unwrap();
        let sim = simulate_approx(&inst, 2).unwrap();
        let dump = sim.trace.dump();
        assert_eq!(dump.lines().count(), sim.trace.rounds());
        assert!(dump.lines().next().unwrap().starts_with("1 mis_priority:"));
    }
}
