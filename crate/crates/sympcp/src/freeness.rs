//! Relations between the encoding matrices, and what they certify.
//!
//! [`build_gamma`] attaches a named generator set to a correspondence
//! instance over the two-symbol alphabet: `eps2` is the pair `(eps, 2)`,
//! and each instance pair `i` contributes `u:i`, `ubar:i`, `v:i`, `vbar:i`
//! (see the pair templates in [`crate::matrix`]). The matrix semigroup
//! these generate is free exactly when the instance has no solution, so a
//! *relation* — two distinct generator sequences with equal products —
//! is a certificate of solvability.
//!
//! A relation here is a pair of tag sequences `p`, `q` whose string-pair
//! products agree and whose first and last tags differ
//! ([`verify_relation`]). Every verified relation splits into *blocks*
//! ([`factor_blocks`]): runs in which one side plays `u:i1 .. u:ir`
//! against the other side's `eps2 v:i1 .. v:ir`, closed either by an
//! `eps2` on the `u` side (a `2-2` block) or by a final `ubar`/`vbar`
//! exchange (a `2-3` block). Concatenating the block indices — swapped
//! pairs for blocks whose roles are flipped — yields a solution of the
//! instance's symmetric closure ([`extract_pcp_solution`]), which is the
//! computational content of the freeness criterion.
//!
//! [`find_relation`] searches for the shortest relation directly: a
//! Dijkstra pass finds the minimal total product length, then a bounded
//! depth-first pass returns the lexicographically least relation of that
//! length.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{
    mat_mul, pair_eps2, pair_to_matrix, pair_u, pair_ubar, pair_v, pair_vbar, require_binary,
    EncodingParams, Mat3, StringPair,
};
use crate::search::{SearchLimits, SearchOutcome};
use crate::words::{PcpInstance, PcpSolution};

/// The name of one generator: `eps2`, `u:i`, `ubar:i`, `v:i`, or `vbar:i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaTag {
    Eps2,
    U(usize),
    Ubar(usize),
    V(usize),
    Vbar(usize),
}

impl fmt::Display for GammaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaTag::Eps2 => write!(f, "eps2"),
            GammaTag::U(i) => write!(f, "u:{i}"),
            GammaTag::Ubar(i) => write!(f, "ubar:{i}"),
            GammaTag::V(i) => write!(f, "v:{i}"),
            GammaTag::Vbar(i) => write!(f, "vbar:{i}"),
        }
    }
}

impl FromStr for GammaTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "eps2" {
            return Ok(GammaTag::Eps2);
        }
        let bad = || Error::BadGeneratorTag(s.to_owned());
        let (name, index) = s.split_once(':').ok_or_else(bad)?;
        let index: usize = index.parse().map_err(|_| bad())?;
        match name {
            "u" => Ok(GammaTag::U(index)),
            "ubar" => Ok(GammaTag::Ubar(index)),
            "v" => Ok(GammaTag::V(index)),
            "vbar" => Ok(GammaTag::Vbar(index)),
            _ => Err(bad()),
        }
    }
}

/// A named generator together with its string-pair value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGenerator {
    tag: GammaTag,
    pair: StringPair,
}

impl GammaGenerator {
    pub fn tag(&self) -> GammaTag {
        self.tag
    }

    pub fn pair(&self) -> &StringPair {
        &self.pair
    }

    pub fn matrix(&self) -> Mat3 {
        pair_to_matrix(&self.pair)
    }
}

/// The string pair a tag denotes over a given instance.
fn tag_pair(inst: &PcpInstance, params: &EncodingParams, tag: GammaTag) -> Result<StringPair> {
    match tag {
        GammaTag::Eps2 => Ok(pair_eps2()),
        GammaTag::U(i) => pair_u(inst, params, i),
        GammaTag::Ubar(i) => pair_ubar(inst, params, i),
        GammaTag::V(i) => pair_v(inst, params, i),
        GammaTag::Vbar(i) => pair_vbar(inst, params, i),
    }
}

fn gamma_tags(k: usize, reduced: bool) -> Vec<GammaTag> {
    let mut tags = vec![GammaTag::Eps2];
    for i in 0..k {
        if reduced {
            tags.extend([GammaTag::U(i), GammaTag::V(i)]);
        } else {
            tags.extend([
                GammaTag::U(i),
                GammaTag::Ubar(i),
                GammaTag::V(i),
                GammaTag::Vbar(i),
            ]);
        }
    }
    tags
}

fn build_generators(inst: &PcpInstance, reduced: bool) -> Result<Vec<GammaGenerator>> {
    require_binary(inst)?;
    let params = EncodingParams::canonical(inst.k())?;
    gamma_tags(inst.k(), reduced)
        .into_iter()
        .map(|tag| {
            Ok(GammaGenerator {
                tag,
                pair: tag_pair(inst, &params, tag)?,
            })
        })
        .collect()
}

/// The full generator set of an instance over the two-symbol alphabet:
/// `eps2` followed by `u:i`, `ubar:i`, `v:i`, `vbar:i` for each pair
/// (`4k + 1` generators).
pub fn build_gamma(inst: &PcpInstance) -> Result<Vec<GammaGenerator>> {
    build_generators(inst, false)
}

/// The reduced generator set: `eps2` followed by `u:i`, `v:i` for each
/// pair (`2k + 1` generators). Freeness of the reduced set is equivalent
/// to freeness of the full set.
pub fn build_gamma_reduced(inst: &PcpInstance) -> Result<Vec<GammaGenerator>> {
    build_generators(inst, true)
}

/// Two generator sequences claimed to have equal products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRelation {
    pub p: Vec<GammaTag>,
    pub q: Vec<GammaTag>,
}

impl GammaRelation {
    pub fn new(p: Vec<GammaTag>, q: Vec<GammaTag>) -> Self {
        GammaRelation { p, q }
    }
}

impl fmt::Display for GammaRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |tags: &[GammaTag]| {
            tags.iter()
                .map(GammaTag::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} = {}", side(&self.p), side(&self.q))
    }
}

/// The relation induced by a solution `j_1 .. j_n`:
///
/// ```text
/// u:j_1 .. u:j_{n-1} ubar:j_n  =  eps2 v:j_1 .. v:j_{n-1} vbar:j_n
/// ```
pub fn relation_from_solution(inst: &PcpInstance, sol: &PcpSolution) -> Result<GammaRelation> {
    require_binary(inst)?;
    if !inst.check_solution(sol)? {
        return Err(Error::NotASolution);
    }
    let idx = sol.indices();
    let n = idx.len();
    let mut p: Vec<GammaTag> = idx[..n - 1].iter().map(|&i| GammaTag::U(i)).collect();
    p.push(GammaTag::Ubar(idx[n - 1]));
    let mut q = vec![GammaTag::Eps2];
    q.extend(idx[..n - 1].iter().map(|&i| GammaTag::V(i)));
    q.push(GammaTag::Vbar(idx[n - 1]));
    Ok(GammaRelation { p, q })
}

/// The bar-free variant for symmetric instances: with `j*` the coordinate
/// swap of `j_n`,
///
/// ```text
/// u:j_1 .. u:j_{n-1} eps2 eps2 v:j*  =  eps2 v:j_1 .. v:j_{n-1} u:j* eps2
/// ```
///
/// It uses only reduced generators, witnessing that even the reduced set
/// is not free over a solvable symmetric instance.
pub fn relation_from_solution_symmetric(
    inst: &PcpInstance,
    sol: &PcpSolution,
) -> Result<GammaRelation> {
    require_binary(inst)?;
    if !inst.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !inst.check_solution(sol)? {
        return Err(Error::NotASolution);
    }
    let idx = sol.indices();
    let n = idx.len();
    let swap = inst
        .swap_index(idx[n - 1])?
        .expect("symmetric instances contain every swap");
    let mut p: Vec<GammaTag> = idx[..n - 1].iter().map(|&i| GammaTag::U(i)).collect();
    p.extend([GammaTag::Eps2, GammaTag::Eps2, GammaTag::V(swap)]);
    let mut q = vec![GammaTag::Eps2];
    q.extend(idx[..n - 1].iter().map(|&i| GammaTag::V(i)));
    q.extend([GammaTag::U(swap), GammaTag::Eps2]);
    Ok(GammaRelation { p, q })
}

fn product_of(gens: &HashMap<GammaTag, StringPair>, tags: &[GammaTag]) -> Result<StringPair> {
    let mut acc = StringPair::empty();
    for tag in tags {
        let pair = gens
            .get(tag)
            .ok_or_else(|| Error::ForeignGenerator(tag.to_string()))?;
        acc = acc.concat(pair);
    }
    Ok(acc)
}

/// Is the relation genuine over the given generator set? True when both
/// string-pair products agree, the first tags differ, and the last tags
/// differ. Tags outside the set are an error, as are empty sides.
pub fn verify_relation(gens: &[GammaGenerator], rel: &GammaRelation) -> Result<bool> {
    if rel.p.is_empty() || rel.q.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let by_tag: HashMap<GammaTag, StringPair> =
        gens.iter().map(|g| (g.tag, g.pair.clone())).collect();
    let p = product_of(&by_tag, &rel.p)?;
    let q = product_of(&by_tag, &rel.q)?;
    Ok(p == q && rel.p[0] != rel.q[0] && rel.p.last() != rel.q.last())
}

/// Checks the relation directly on the 3x3 matrices: multiplies out both
/// sides over the instance's encoding and compares the products. Ignores
/// the end-tag side conditions.
pub fn matrix_relation_check(inst: &PcpInstance, rel: &GammaRelation) -> Result<bool> {
    require_binary(inst)?;
    if rel.p.is_empty() || rel.q.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let params = EncodingParams::canonical(inst.k())?;
    let product = |tags: &[GammaTag]| -> Result<Mat3> {
        let mut acc = Mat3::identity();
        for &tag in tags {
            acc = mat_mul(&acc, &pair_to_matrix(&tag_pair(inst, &params, tag)?));
        }
        Ok(acc)
    };
    Ok(product(&rel.p)? == product(&rel.q)?)
}

/// How a block closes: `2-2` by an `eps2` on the `u` side, `2-3` by a
/// final `ubar`/`vbar` exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    TwoTwo,
    TwoThree,
}

impl BlockKind {
    pub fn label(&self) -> &'static str {
        match self {
            BlockKind::TwoTwo => "2-2",
            BlockKind::TwoThree => "2-3",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One block of a factored relation. `b` and `c` are the consumed runs of
/// the `p` and `q` side. `indices` are the pair indices the block matches,
/// in the numbering of the instance's symmetric closure: a block whose
/// `eps2` opener sits on the `q` side keeps its indices, one whose opener
/// sits on the `p` side plays the swapped pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub b: Vec<GammaTag>,
    pub c: Vec<GammaTag>,
    pub kind: BlockKind,
    pub indices: Vec<usize>,
}

/// A relation split into blocks; see [`factor_blocks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFactorization {
    blocks: Vec<Block>,
}

impl BlockFactorization {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

/// Factors a verified relation into blocks. Within a block, the side whose
/// next tag is `eps2` answers each `u:i` of the opposite side with `v:i`;
/// the block closes either `2-2` or `2-3`. Relations that fail
/// verification are rejected, and tag sequences that do not parse into
/// blocks are malformed.
pub fn factor_blocks(inst: &PcpInstance, rel: &GammaRelation) -> Result<BlockFactorization> {
    let gens = build_gamma(inst)?;
    if !verify_relation(&gens, rel)? {
        return Err(Error::UnverifiedRelation);
    }
    let closure = inst.symmetric_closure();
    let malformed = |msg: &str| Error::MalformedRelation(msg.to_owned());

    let (p, q) = (&rel.p, &rel.q);
    let (mut ip, mut iq) = (0usize, 0usize);
    let mut blocks = Vec::new();
    while ip < p.len() || iq < q.len() {
        if ip == p.len() || iq == q.len() {
            return Err(malformed("the sides end at different block boundaries"));
        }
        let flipped = match (p[ip] == GammaTag::Eps2, q[iq] == GammaTag::Eps2) {
            (true, false) => true,
            (false, true) => false,
            _ => return Err(malformed("each block must open with exactly one eps2")),
        };
        // Scan with a u-side and a v-side cursor, then translate back.
        let (u_seq, v_seq) = if flipped { (q, p) } else { (p, q) };
        let (mut ui, mut vi) = if flipped { (iq, ip) } else { (ip, iq) };
        vi += 1; // the v side's eps2 opener
        let mut raw: Vec<usize> = Vec::new();
        let kind = loop {
            match u_seq.get(ui).copied() {
                Some(GammaTag::U(i)) => {
                    ui += 1;
                    match v_seq.get(vi).copied() {
                        Some(GammaTag::V(j)) if j == i => vi += 1,
                        _ => return Err(malformed("u:i must be answered by v:i")),
                    }
                    raw.push(i);
                    if u_seq.get(ui) == Some(&GammaTag::Eps2) {
                        ui += 1;
                        break BlockKind::TwoTwo;
                    }
                }
                Some(GammaTag::Ubar(i)) => {
                    ui += 1;
                    match v_seq.get(vi).copied() {
                        Some(GammaTag::Vbar(j)) if j == i => vi += 1,
                        _ => return Err(malformed("ubar:i must be answered by vbar:i")),
                    }
                    raw.push(i);
                    break BlockKind::TwoThree;
                }
                _ => {
                    return Err(malformed(
                        "the side opposite an eps2 opener must continue with u:i or ubar:i",
                    ));
                }
            }
        };
        let (nip, niq) = if flipped { (vi, ui) } else { (ui, vi) };
        let indices = if flipped {
            raw.into_iter()
                .map(|i| {
                    Ok(closure
                        .swap_index(i)?
                        .expect("symmetric closures contain every swap"))
                })
                .collect::<Result<Vec<usize>>>()?
        } else {
            raw
        };
        blocks.push(Block {
            b: p[ip..nip].to_vec(),
            c: q[iq..niq].to_vec(),
            kind,
            indices,
        });
        ip = nip;
        iq = niq;
    }
    Ok(BlockFactorization { blocks })
}

/// Concatenates the block indices into a solution of the instance's
/// symmetric closure.
pub fn extract_pcp_solution(factorization: &BlockFactorization) -> PcpSolution {
    let indices: Vec<usize> = factorization
        .blocks
        .iter()
        .flat_map(|b| b.indices.iter().copied())
        .collect();
    PcpSolution::new(indices).expect("every block matches at least one index")
}

/// Which side's product is ahead in one coordinate, and by what suffix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Lead {
    Level,
    P(Vec<u32>),
    Q(Vec<u32>),
}

impl Lead {
    fn overhang_len(&self) -> usize {
        match self {
            Lead::Level => 0,
            Lead::P(d) | Lead::Q(d) => d.len(),
        }
    }
}

/// The trailing side closes `grown` symbols against the gap `d`. Returns
/// the leftover (of the gap if the growth falls short, of the growth if it
/// overshoots) and the newly matched length.
fn close_gap(d: &[u32], grown: &[u32]) -> Option<(bool, Vec<u32>, usize)> {
    if grown.len() <= d.len() {
        d.starts_with(grown)
            .then(|| (false, d[grown.len()..].to_vec(), grown.len()))
    } else {
        grown
            .starts_with(d)
            .then(|| (true, grown[d.len()..].to_vec(), d.len()))
    }
}

/// One side's word grows by `grown` symbols; yields the new lead and the
/// newly matched length, or nothing on a mismatch.
fn lead_step(lead: &Lead, p_side: bool, grown: &[u32]) -> Option<(Lead, usize)> {
    if grown.is_empty() {
        return Some((lead.clone(), 0));
    }
    let extend = |d: &[u32]| [d, grown].concat();
    match (lead, p_side) {
        (Lead::Level, true) => Some((Lead::P(grown.to_vec()), 0)),
        (Lead::Level, false) => Some((Lead::Q(grown.to_vec()), 0)),
        (Lead::P(d), true) => Some((Lead::P(extend(d)), 0)),
        (Lead::Q(d), false) => Some((Lead::Q(extend(d)), 0)),
        (Lead::P(d), false) => close_gap(d, grown).map(|(overshoot, rest, matched)| {
            let lead = match (overshoot, rest.is_empty()) {
                (true, _) => Lead::Q(rest),
                (false, true) => Lead::Level,
                (false, false) => Lead::P(rest),
            };
            (lead, matched)
        }),
        (Lead::Q(d), true) => close_gap(d, grown).map(|(overshoot, rest, matched)| {
            let lead = match (overshoot, rest.is_empty()) {
                (true, _) => Lead::P(rest),
                (false, true) => Lead::Level,
                (false, false) => Lead::Q(rest),
            };
            (lead, matched)
        }),
    }
}

/// A relation-search configuration: the lead of each coordinate plus the
/// most recent generator of each side (by position in the generator list).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct RelState {
    w: Lead,
    j: Lead,
    last_p: Option<u16>,
    last_q: Option<u16>,
}

impl RelState {
    fn start() -> Self {
        RelState {
            w: Lead::Level,
            j: Lead::Level,
            last_p: None,
            last_q: None,
        }
    }

    fn accepting(&self) -> bool {
        self.w == Lead::Level
            && self.j == Lead::Level
            && matches!((self.last_p, self.last_q), (Some(a), Some(b)) if a != b)
    }

    /// The side to extend: whichever is behind in the second coordinate,
    /// and `p` when the coordinate is level. Every relation is reachable
    /// through exactly one such interleaving, because its prefix products
    /// stay prefix-comparable.
    fn p_turn(&self) -> bool {
        !matches!(self.j, Lead::P(_))
    }
}

struct RelSearch {
    /// Per generator: the symbols it appends in each coordinate.
    parts: Vec<(Vec<u32>, Vec<u32>)>,
    max_overhang: usize,
}

impl RelSearch {
    fn successors(&self, state: &RelState) -> Vec<(u16, RelState, usize)> {
        let p_side = state.p_turn();
        let mut out = Vec::new();
        for (gi, (gw, gj)) in self.parts.iter().enumerate() {
            let gi = gi as u16;
            // The first generators of the two sides must differ; q starts
            // while p has played exactly one.
            if !p_side && state.last_q.is_none() && state.last_p == Some(gi) {
                continue;
            }
            let Some((w, dw)) = lead_step(&state.w, p_side, gw) else {
                continue;
            };
            let Some((j, dj)) = lead_step(&state.j, p_side, gj) else {
                continue;
            };
            if w.overhang_len() > self.max_overhang || j.overhang_len() > self.max_overhang {
                continue;
            }
            let next = RelState {
                w,
                j,
                last_p: if p_side { Some(gi) } else { state.last_p },
                last_q: if p_side { state.last_q } else { Some(gi) },
            };
            out.push((gi, next, dw + dj));
        }
        out
    }

    /// Enumerates every relation of total product length exactly `target`,
    /// keeping the lexicographically least `(p, q)` by generator position.
    fn collect_minimal(
        &self,
        state: &RelState,
        cost: usize,
        target: usize,
        p: &mut Vec<u16>,
        q: &mut Vec<u16>,
        best: &mut Option<(Vec<u16>, Vec<u16>)>,
    ) {
        if cost == target {
            if state.accepting() {
                let candidate = (p.clone(), q.clone());
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    *best = Some(candidate);
                }
            }
            // Any further step grows the matched length past the target.
            return;
        }
        let p_side = state.p_turn();
        for (gi, next, delta) in self.successors(state) {
            if cost + delta > target {
                continue;
            }
            let side = if p_side { &mut *p } else { &mut *q };
            side.push(gi);
            self.collect_minimal(&next, cost + delta, target, p, q, best);
            let side = if p_side { &mut *p } else { &mut *q };
            side.pop();
        }
    }
}

/// Searches for a relation over the generator set, returning the shortest
/// one by total product length (`|w| + |J|` of one side's product), with
/// ties broken lexicographically by generator position. `max_tiles` bounds
/// the total product length, `max_overhang` the length either coordinate
/// may run ahead, and `max_states` the number of distinct configurations.
/// Exhausting any bound yields [`SearchOutcome::Exhausted`]; freeness is
/// never proved outright.
pub fn find_relation(
    gens: &[GammaGenerator],
    limits: &SearchLimits,
) -> Result<SearchOutcome<GammaRelation>> {
    limits.validate()?;
    let search = RelSearch {
        parts: gens
            .iter()
            .map(|g| (g.pair.w().symbols().to_vec(), g.pair.j().symbols().to_vec()))
            .collect(),
        max_overhang: limits.max_overhang,
    };

    // Phase 1: Dijkstra on merged configurations for the minimal total
    // product length of any relation.
    let mut states: Vec<RelState> = vec![RelState::start()];
    let mut index: HashMap<RelState, usize> = HashMap::from([(RelState::start(), 0)]);
    let mut dist: Vec<usize> = vec![0];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::from([Reverse((0, 0))]);
    let mut minimal: Option<usize> = None;
    while let Some(Reverse((cost, si))) = heap.pop() {
        if cost > dist[si] {
            continue;
        }
        let state = states[si].clone();
        if state.accepting() {
            minimal = Some(cost);
            break;
        }
        for (_, next, delta) in search.successors(&state) {
            let next_cost = cost + delta;
            if next_cost > limits.max_tiles {
                continue;
            }
            let ni = if let Some(&i) = index.get(&next) {
                i
            } else {
                if states.len() >= limits.max_states {
                    return Ok(SearchOutcome::Exhausted);
                }
                let i = states.len();
                index.insert(next.clone(), i);
                states.push(next);
                dist.push(usize::MAX);
                i
            };
            if next_cost < dist[ni] {
                dist[ni] = next_cost;
                heap.push(Reverse((next_cost, ni)));
            }
        }
    }
    let Some(target) = minimal else {
        return Ok(SearchOutcome::Exhausted);
    };

    // Phase 2: enumerate the relations of that length and keep the least.
    let mut best = None;
    search.collect_minimal(
        &RelState::start(),
        0,
        target,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut best,
    );
    let (bp, bq) = best.expect("the Dijkstra pass witnessed a relation of this length");
    let tags = |side: Vec<u16>| side.into_iter().map(|i| gens[i as usize].tag).collect();
    let relation = GammaRelation {
        p: tags(bp),
        q: tags(bq),
    };
    debug_assert!(matches!(verify_relation(gens, &relation), Ok(true)));
    Ok(SearchOutcome::Found(relation))
}
