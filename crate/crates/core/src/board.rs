//! Board topology and map generation.
//!
//! Hexes use axial coordinates `(q, r)`. A node (settlement corner) is
//! identified by the unordered triple of hexes that meet there — including
//! off-board water hexes — and node ids are the indices of those triples in
//! sorted order, which makes ids stable across runs and serializations.
//! Edges are unordered pairs of adjacent node ids, stored as `(low, high)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::GameRng;

/// Axial hex coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HexCoord {
    pub q: i8,
    pub r: i8,
}

impl HexCoord {
    pub const fn new(q: i8, r: i8) -> Self {
        Self { q, r }
    }
}

/// Neighbor offsets in cyclic order; consecutive pairs share a corner.
const HEX_DIRS: [(i8, i8); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

impl fmt::Display for HexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.q, self.r)
    }
}

impl FromStr for HexCoord {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (q, r) = s
            .split_once(',')
            .ok_or_else(|| BoardError::BadCoord(s.to_string()))?;
        let q = q.parse().map_err(|_| BoardError::BadCoord(s.to_string()))?;
        let r = r.parse().map_err(|_| BoardError::BadCoord(s.to_string()))?;
        Ok(Self { q, r })
    }
}

// Hex coordinates serialize as "q,r" strings so they can key JSON maps.
impl Serialize for HexCoord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HexCoord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Node (corner) id: index into the board's sorted corner-triple list.
pub type NodeId = u16;

/// Undirected edge between two adjacent nodes, stored `(low, high)`.
pub type EdgeId = (NodeId, NodeId);

pub fn edge(a: NodeId, b: NodeId) -> EdgeId {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The five tradeable resources.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Wood,
    Brick,
    Sheep,
    Wheat,
    Ore,
}

pub const RESOURCES: [Resource; 5] = [
    Resource::Wood,
    Resource::Brick,
    Resource::Sheep,
    Resource::Wheat,
    Resource::Ore,
];

impl Resource {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Resource::Wood => "wood",
            Resource::Brick => "brick",
            Resource::Sheep => "sheep",
            Resource::Wheat => "wheat",
            Resource::Ore => "ore",
        }
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tile terrain: a producing resource or the desert.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Terrain {
    Wood,
    Brick,
    Sheep,
    Wheat,
    Ore,
    Desert,
}

impl Terrain {
    pub fn resource(self) -> Option<Resource> {
        match self {
            Terrain::Wood => Some(Resource::Wood),
            Terrain::Brick => Some(Resource::Brick),
            Terrain::Sheep => Some(Resource::Sheep),
            Terrain::Wheat => Some(Resource::Wheat),
            Terrain::Ore => Some(Resource::Ore),
            Terrain::Desert => None,
        }
    }
}

/// One hex tile: terrain plus its number token (absent iff desert).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TileSpec {
    pub terrain: Terrain,
    pub token: Option<u8>,
}

/// Port kind: 3:1 generic or 2:1 for a specific resource.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortKind {
    Generic,
    Wood,
    Brick,
    Sheep,
    Wheat,
    Ore,
}

impl PortKind {
    pub fn two_to_one(self) -> Option<Resource> {
        match self {
            PortKind::Generic => None,
            PortKind::Wood => Some(Resource::Wood),
            PortKind::Brick => Some(Resource::Brick),
            PortKind::Sheep => Some(Resource::Sheep),
            PortKind::Wheat => Some(Resource::Wheat),
            PortKind::Ore => Some(Resource::Ore),
        }
    }
}

/// Which map layout to generate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapTemplate {
    /// Standard 19-hex island with 9 ports.
    Full,
    /// 7-hex board (desert center, 6-tile ring, no ports) used to keep
    /// evolution cycles cheap.
    Mini,
}

impl FromStr for MapTemplate {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(MapTemplate::Full),
            "mini" => Ok(MapTemplate::Mini),
            other => Err(BoardError::BadTemplate(other.to_string())),
        }
    }
}

impl fmt::Display for MapTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapTemplate::Full => f.write_str("full"),
            MapTemplate::Mini => f.write_str("mini"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BoardError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("malformed hex coordinate '{0}'")]
    BadCoord(String),
    #[error("unknown map template '{0}'")]
    BadTemplate(String),
    #[error("board document is inconsistent: {0}")]
    BadDocument(String),
}

/// Serialized form: exactly the documented external JSON schema.
#[derive(Serialize, Deserialize)]
struct BoardDoc {
    tiles: BTreeMap<HexCoord, TileSpec>,
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
    ports: BTreeMap<NodeId, PortKind>,
    robber: HexCoord,
}

/// Immutable board topology: tiles, the node/edge graph, ports, and the
/// robber's starting tile. The engine tracks the robber's current position
/// separately; this value never changes after generation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "BoardDoc", try_from = "BoardDoc")]
pub struct Board {
    pub template: MapTemplate,
    pub tiles: BTreeMap<HexCoord, TileSpec>,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub ports: BTreeMap<NodeId, PortKind>,
    pub robber_tile: HexCoord,
    // Derived adjacency, rebuilt on deserialize.
    node_tiles: Vec<Vec<HexCoord>>,
    node_neighbors: Vec<Vec<NodeId>>,
    tile_nodes: BTreeMap<HexCoord, [NodeId; 6]>,
    edge_tiles: BTreeMap<EdgeId, Vec<HexCoord>>,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.tiles == other.tiles
            && self.ports == other.ports
            && self.robber_tile == other.robber_tile
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl From<Board> for BoardDoc {
    fn from(b: Board) -> Self {
        BoardDoc {
            tiles: b.tiles,
            nodes: b.nodes,
            edges: b.edges,
            ports: b.ports,
            robber: b.robber_tile,
        }
    }
}

impl TryFrom<BoardDoc> for Board {
    type Error = BoardError;

    fn try_from(doc: BoardDoc) -> Result<Self, Self::Error> {
        let template = match doc.tiles.len() {
            19 => MapTemplate::Full,
            7 => MapTemplate::Mini,
            n => return Err(BoardError::BadDocument(format!("{n} tiles"))),
        };
        let board = Board::from_tiles(template, doc.tiles, doc.ports, doc.robber);
        if board.nodes != doc.nodes || board.edges != doc.edges {
            return Err(BoardError::BadDocument(
                "node/edge lists do not match tile geometry".to_string(),
            ));
        }
        Ok(board)
    }
}

fn hex_list(template: MapTemplate) -> Vec<HexCoord> {
    let radius: i8 = match template {
        MapTemplate::Full => 2,
        MapTemplate::Mini => 1,
    };
    let mut hexes = Vec::new();
    for q in -radius..=radius {
        for r in -radius..=radius {
            if (q + r).abs() <= radius {
                hexes.push(HexCoord::new(q, r));
            }
        }
    }
    hexes.sort();
    hexes
}

fn neighbor(h: HexCoord, dir: usize) -> HexCoord {
    let (dq, dr) = HEX_DIRS[dir];
    HexCoord::new(h.q + dq, h.r + dr)
}

/// Corner `k` of a hex is where the hex meets its `k`-th and `(k+1)`-th
/// neighbors; the sorted triple of those three coordinates names it.
fn corner_triple(h: HexCoord, k: usize) -> [HexCoord; 3] {
    let mut t = [h, neighbor(h, k), neighbor(h, (k + 1) % 6)];
    t.sort();
    t
}

impl Board {
    fn from_tiles(
        template: MapTemplate,
        tiles: BTreeMap<HexCoord, TileSpec>,
        ports: BTreeMap<NodeId, PortKind>,
        robber_tile: HexCoord,
    ) -> Self {
        let hexes: Vec<HexCoord> = tiles.keys().copied().collect();

        let mut triples: BTreeSet<[HexCoord; 3]> = BTreeSet::new();
        for &h in &hexes {
            for k in 0..6 {
                triples.insert(corner_triple(h, k));
            }
        }
        let triple_ids: BTreeMap<[HexCoord; 3], NodeId> = triples
            .iter()
            .enumerate()
            .map(|(i, t)| (*t, i as NodeId))
            .collect();
        let node_count = triple_ids.len();

        let mut tile_nodes = BTreeMap::new();
        let mut edge_set: BTreeSet<EdgeId> = BTreeSet::new();
        for &h in &hexes {
            let corners: Vec<NodeId> = (0..6).map(|k| triple_ids[&corner_triple(h, k)]).collect();
            for k in 0..6 {
                edge_set.insert(edge(corners[k], corners[(k + 1) % 6]));
            }
            tile_nodes.insert(h, <[NodeId; 6]>::try_from(corners).unwrap());
        }

        let mut node_tiles = vec![Vec::new(); node_count];
        for (t, id) in &triple_ids {
            for h in t {
                if tiles.contains_key(h) {
                    node_tiles[*id as usize].push(*h);
                }
            }
        }

        let mut node_neighbors = vec![Vec::new(); node_count];
        for &(a, b) in &edge_set {
            node_neighbors[a as usize].push(b);
            node_neighbors[b as usize].push(a);
        }
        for n in &mut node_neighbors {
            n.sort_unstable();
        }

        let mut edge_tiles: BTreeMap<EdgeId, Vec<HexCoord>> =
            edge_set.iter().map(|&e| (e, Vec::new())).collect();
        for (&h, corners) in &tile_nodes {
            for k in 0..6 {
                let e = edge(corners[k], corners[(k + 1) % 6]);
                edge_tiles.get_mut(&e).unwrap().push(h);
            }
        }

        Board {
            template,
            tiles,
            nodes: (0..node_count as NodeId).collect(),
            edges: edge_set.into_iter().collect(),
            ports,
            robber_tile,
            node_tiles,
            node_neighbors,
            tile_nodes,
            edge_tiles,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        (node as usize) < self.nodes.len()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Nodes adjacent to `node` in the corner graph.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.node_neighbors[node as usize]
    }

    /// The six corner nodes of a tile.
    pub fn tile_nodes(&self, tile: HexCoord) -> Option<&[NodeId; 6]> {
        self.tile_nodes.get(&tile)
    }

    /// Land tiles bordering an edge (1 for coastal edges, 2 inland).
    pub fn edge_tiles(&self, e: EdgeId) -> &[HexCoord] {
        &self.edge_tiles[&e]
    }

    /// Tiles incident to a node (1-3), in coordinate order.
    pub fn node_tiles(&self, node: NodeId) -> Result<Vec<(HexCoord, TileSpec)>, BoardError> {
        if !self.contains_node(node) {
            return Err(BoardError::UnknownNode(node));
        }
        Ok(self.node_tiles[node as usize]
            .iter()
            .map(|h| (*h, self.tiles[h]))
            .collect())
    }

    /// Serialize to the canonical JSON document (sorted map keys, byte
    /// stable for a given seed).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("board serializes")
    }
}

/// Generate a board from a template and seed. Placement (resources, tokens,
/// port kinds) is a deterministic function of the seed; the robber starts
/// on the desert.
pub fn generate_board(template: MapTemplate, seed: u64) -> Board {
    let mut rng = GameRng::seed_from_u64(seed);
    let hexes = hex_list(template);

    let mut tiles = BTreeMap::new();
    match template {
        MapTemplate::Full => {
            let mut terrains = Vec::new();
            for (t, n) in [
                (Terrain::Wood, 4),
                (Terrain::Sheep, 4),
                (Terrain::Wheat, 4),
                (Terrain::Brick, 3),
                (Terrain::Ore, 3),
                (Terrain::Desert, 1),
            ] {
                terrains.extend(std::iter::repeat(t).take(n));
            }
            terrains.shuffle(&mut rng);

            let mut tokens: Vec<u8> = vec![2, 3, 3, 4, 4, 5, 5, 6, 6, 8, 8, 9, 9, 10, 10, 11, 11, 12];
            tokens.shuffle(&mut rng);

            let mut next_token = tokens.into_iter();
            for (h, terrain) in hexes.iter().zip(terrains) {
                let token = match terrain {
                    Terrain::Desert => None,
                    _ => Some(next_token.next().unwrap()),
                };
                tiles.insert(*h, TileSpec { terrain, token });
            }
        }
        MapTemplate::Mini => {
            let center = HexCoord::new(0, 0);
            let mut terrains = vec![
                Terrain::Wood,
                Terrain::Brick,
                Terrain::Sheep,
                Terrain::Wheat,
                Terrain::Ore,
                Terrain::Wood,
            ];
            terrains.shuffle(&mut rng);
            let mut tokens: Vec<u8> = vec![3, 4, 5, 6, 8, 9];
            tokens.shuffle(&mut rng);

            tiles.insert(
                center,
                TileSpec {
                    terrain: Terrain::Desert,
                    token: None,
                },
            );
            let ring: Vec<HexCoord> = hexes.iter().copied().filter(|h| *h != center).collect();
            for ((h, terrain), token) in ring.into_iter().zip(terrains).zip(tokens) {
                tiles.insert(
                    h,
                    TileSpec {
                        terrain,
                        token: Some(token),
                    },
                );
            }
        }
    }

    let desert = *tiles
        .iter()
        .find(|(_, t)| t.terrain == Terrain::Desert)
        .map(|(h, _)| h)
        .expect("every template has a desert");

    let mut board = Board::from_tiles(template, tiles, BTreeMap::new(), desert);

    if template == MapTemplate::Full {
        let mut kinds = vec![
            PortKind::Generic,
            PortKind::Generic,
            PortKind::Generic,
            PortKind::Generic,
            PortKind::Wood,
            PortKind::Brick,
            PortKind::Sheep,
            PortKind::Wheat,
            PortKind::Ore,
        ];
        kinds.shuffle(&mut rng);

        let ring = coastal_ring(&board);
        // Port sites sit on coastal edges spaced 3-4 apart, as on the
        // physical board; the pattern is fixed, only kinds are shuffled.
        const SITE_OFFSETS: [usize; 9] = [0, 3, 7, 10, 14, 17, 20, 24, 27];
        let mut ports = BTreeMap::new();
        for (offset, kind) in SITE_OFFSETS.iter().zip(kinds) {
            let (a, b) = ring[*offset];
            ports.insert(a, kind);
            ports.insert(b, kind);
        }
        board.ports = ports;
    }

    board
}

/// Coastal edges (bordering exactly one land tile) in ring order, starting
/// from the lowest node id and walking toward its lower-numbered coastal
/// neighbor.
fn coastal_ring(board: &Board) -> Vec<EdgeId> {
    let coastal: BTreeSet<EdgeId> = board
        .edges
        .iter()
        .copied()
        .filter(|e| board.edge_tiles(*e).len() == 1)
        .collect();
    let mut next: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(a, b) in &coastal {
        next.entry(a).or_default().push(b);
        next.entry(b).or_default().push(a);
    }
    let start = *next.keys().next().expect("coast is non-empty");
    let mut ring = Vec::with_capacity(coastal.len());
    let mut prev = start;
    let mut cur = *next[&start].iter().min().unwrap();
    ring.push(edge(start, cur));
    while cur != start {
        let step = next[&cur]
            .iter()
            .copied()
            .find(|&n| n != prev)
            .expect("coastal ring is a cycle");
        ring.push(edge(cur, step));
        prev = cur;
        cur = step;
    }
    ring
}

/// Length (edge count) of the longest trail in `edges`: a walk repeating no
/// edge, whose interior vertices avoid `blocked` (a trail may start or end
/// at a blocked node but never continue through one).
pub fn longest_trail(edges: &[EdgeId], blocked: &BTreeSet<NodeId>) -> u32 {
    if edges.is_empty() {
        return 0;
    }
    assert!(edges.len() <= 128, "trail search supports up to 128 edges");

    let mut nodes: Vec<NodeId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let index = |n: NodeId| nodes.binary_search(&n).unwrap();

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (a, b) = (index(a), index(b));
        adj[a].push((i, b));
        adj[b].push((i, a));
    }
    let blocked: Vec<bool> = nodes.iter().map(|n| blocked.contains(n)).collect();

    fn dfs(
        node: usize,
        used: u128,
        len: u32,
        adj: &[Vec<(usize, usize)>],
        blocked: &[bool],
        best: &mut u32,
    ) {
        *best = (*best).max(len);
        if blocked[node] && len > 0 {
            return;
        }
        for &(e, to) in &adj[node] {
            if used & (1u128 << e) == 0 {
                dfs(to, used | (1u128 << e), len + 1, adj, blocked, best);
            }
        }
    }

    let mut best = 0;
    for start in 0..nodes.len() {
        dfs(start, 0, 0, &adj, &blocked, &mut best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    /// Independent oracle: breadth-first enumeration of every trail,
    /// tracking the maximum length. Written before `longest_trail` and kept
    /// structurally distinct from its recursive search.
    fn brute_force_longest_trail(edges: &[EdgeId], blocked: &BTreeSet<NodeId>) -> u32 {
        let mut best = 0;
        let mut queue: VecDeque<(NodeId, Vec<usize>)> = VecDeque::new();
        let nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        for &n in &nodes {
            queue.push_back((n, Vec::new()));
        }
        while let Some((at, used)) = queue.pop_front() {
            best = best.max(used.len() as u32);
            if blocked.contains(&at) && !used.is_empty() {
                continue;
            }
            for (i, &(a, b)) in edges.iter().enumerate() {
                if used.contains(&i) {
                    continue;
                }
                let to = if a == at {
                    b
                } else if b == at {
                    a
                } else {
                    continue;
                };
                let mut next = used.clone();
                next.push(i);
                queue.push_back((to, next));
            }
        }
        best
    }

    fn token_multiset(board: &Board) -> Vec<u8> {
        let mut t: Vec<u8> = board.tiles.values().filter_map(|s| s.token).collect();
        t.sort_unstable();
        t
    }

    fn terrain_count(board: &Board, t: Terrain) -> usize {
        board.tiles.values().filter(|s| s.terrain == t).count()
    }

    #[test]
    fn full_template_counts() {
        let b = generate_board(MapTemplate::Full, 42);
        assert_eq!(b.tiles.len(), 19);
        assert_eq!(b.nodes.len(), 54);
        assert_eq!(b.edges.len(), 72);
        assert_eq!(terrain_count(&b, Terrain::Wood), 4);
        assert_eq!(terrain_count(&b, Terrain::Sheep), 4);
        assert_eq!(terrain_count(&b, Terrain::Wheat), 4);
        assert_eq!(terrain_count(&b, Terrain::Brick), 3);
        assert_eq!(terrain_count(&b, Terrain::Ore), 3);
        assert_eq!(terrain_count(&b, Terrain::Desert), 1);
        assert_eq!(
            token_multiset(&b),
            vec![2, 3, 3, 4, 4, 5, 5, 6, 6, 8, 8, 9, 9, 10, 10, 11, 11, 12]
        );
        // 9 port sites covering 18 nodes, each site a coastal edge.
        assert_eq!(b.ports.len(), 18);
        let site_edges: Vec<EdgeId> = b
            .edges
            .iter()
            .copied()
            .filter(|&(x, y)| {
                b.ports.get(&x).is_some() && b.ports.get(&x) == b.ports.get(&y)
            })
            .collect();
        assert_eq!(site_edges.len(), 9);
        for e in site_edges {
            assert_eq!(b.edge_tiles(e).len(), 1, "port sites are coastal");
        }
    }

    #[test]
    fn mini_template_counts() {
        let b = generate_board(MapTemplate::Mini, 7);
        assert_eq!(b.tiles.len(), 7);
        assert_eq!(b.nodes.len(), 24);
        assert_eq!(b.edges.len(), 30);
        assert_eq!(b.ports.len(), 0);
        assert_eq!(b.robber_tile, HexCoord::new(0, 0), "robber on center desert");
        assert_eq!(terrain_count(&b, Terrain::Wood), 2);
        assert_eq!(terrain_count(&b, Terrain::Desert), 1);
        assert_eq!(token_multiset(&b), vec![3, 4, 5, 6, 8, 9]);
    }

    #[test]
    fn desert_has_no_token_and_hosts_robber() {
        for seed in 0..20 {
            let b = generate_board(MapTemplate::Full, seed);
            for spec in b.tiles.values() {
                assert_eq!(spec.token.is_none(), spec.terrain == Terrain::Desert);
            }
            assert_eq!(b.tiles[&b.robber_tile].terrain, Terrain::Desert);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_board(MapTemplate::Full, 42);
        let b = generate_board(MapTemplate::Full, 42);
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let c = generate_board(MapTemplate::Full, 43);
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn board_json_round_trips() {
        let a = generate_board(MapTemplate::Full, 5);
        let doc = a.to_json();
        let b: Board = serde_json::from_str(&doc).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_json(), doc);
    }

    #[test]
    fn node_tiles_degrees() {
        let b = generate_board(MapTemplate::Full, 1);
        let mut seen = [0usize; 4];
        for &n in &b.nodes {
            let t = b.node_tiles(n).unwrap();
            assert!((1..=3).contains(&t.len()));
            seen[t.len()] += 1;
            // stable order and purity
            assert!(t.windows(2).all(|w| w[0].0 < w[1].0));
            assert_eq!(t, b.node_tiles(n).unwrap());
        }
        assert!(seen[1] > 0, "coastal corner nodes exist");
        assert!(seen[3] > 0, "interior nodes exist");
        assert!(matches!(
            b.node_tiles(200),
            Err(BoardError::UnknownNode(200))
        ));
    }

    #[test]
    fn every_edge_joins_adjacent_nodes() {
        let b = generate_board(MapTemplate::Full, 3);
        for &(x, y) in &b.edges {
            assert!(x < y);
            assert!(b.neighbors(x).contains(&y));
        }
    }

    #[test]
    fn trail_of_empty_set_is_zero() {
        assert_eq!(longest_trail(&[], &BTreeSet::new()), 0);
    }

    #[test]
    fn trail_of_simple_path() {
        let edges: Vec<EdgeId> = (0..5).map(|i| (i, i + 1)).collect();
        assert_eq!(longest_trail(&edges, &BTreeSet::new()), 5);
    }

    #[test]
    fn trail_blocked_midpath() {
        // 0-1-2-3-4 with node 2 blocked: the walk cannot continue through 2.
        let edges: Vec<EdgeId> = (0..4).map(|i| (i, i + 1)).collect();
        let blocked: BTreeSet<NodeId> = [2].into_iter().collect();
        assert_eq!(longest_trail(&edges, &blocked), 2);
    }

    #[test]
    fn trail_matches_brute_force_on_board_subgraphs() {
        let b = generate_board(MapTemplate::Full, 11);
        let mut rng = GameRng::seed_from_u64(99);
        for trial in 0..40 {
            let size = 3 + (trial % 13);
            let mut edges = b.edges.clone();
            edges.shuffle(&mut rng);
            edges.truncate(size);
            let blocked: BTreeSet<NodeId> = edges
                .iter()
                .take(trial % 3)
                .map(|&(a, _)| a)
                .collect();
            assert_eq!(
                longest_trail(&edges, &blocked),
                brute_force_longest_trail(&edges, &blocked),
                "edges={edges:?} blocked={blocked:?}"
            );
        }
    }

    proptest! {
        #[test]
        fn template_invariants_hold_for_all_seeds(seed in any::<u64>()) {
            let b = generate_board(MapTemplate::Full, seed);
            prop_assert_eq!(b.tiles.len(), 19);
            prop_assert_eq!(b.nodes.len(), 54);
            prop_assert_eq!(b.edges.len(), 72);
            prop_assert_eq!(
                token_multiset(&b),
                vec![2, 3, 3, 4, 4, 5, 5, 6, 6, 8, 8, 9, 9, 10, 10, 11, 11, 12]
            );
            prop_assert_eq!(b.tiles[&b.robber_tile].terrain, Terrain::Desert);
            let m = generate_board(MapTemplate::Mini, seed);
            prop_assert_eq!(m.tiles.len(), 7);
            prop_assert_eq!(m.nodes.len(), 24);
            prop_assert_eq!(m.edges.len(), 30);
        }

        #[test]
        fn adding_an_edge_never_shrinks_trail(
            seed in 0u64..500,
            size in 1usize..12,
            extra in 0usize..60,
        ) {
            let b = generate_board(MapTemplate::Full, seed);
            let mut rng = GameRng::seed_from_u64(seed ^ 0xabcd);
            let mut edges = b.edges.clone();
            edges.shuffle(&mut rng);
            let (subset, rest) = edges.split_at(size.min(edges.len()));
            let before = longest_trail(subset, &BTreeSet::new());
            let mut grown = subset.to_vec();
            grown.push(rest[extra % rest.len()]);
            let after = longest_trail(&grown, &BTreeSet::new());
            prop_assert!(after >= before);
        }

        #[test]
        fn blocking_never_grows_trail(seed in 0u64..500, size in 1usize..12) {
            let b = generate_board(MapTemplate::Full, seed);
            let mut rng = GameRng::seed_from_u64(seed ^ 0x1234);
            let mut edges = b.edges.clone();
            edges.shuffle(&mut rng);
            edges.truncate(size);
            let unblocked = longest_trail(&edges, &BTreeSet::new());
            let blocked: BTreeSet<NodeId> = [edges[0].1].into_iter().collect();
            prop_assert!(longest_trail(&edges, &blocked) <= unblocked);
        }
    }
}
