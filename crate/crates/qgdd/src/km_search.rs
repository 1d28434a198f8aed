//! Orbit-based search for designs under a prescribed matrix group.
//!
//! A subgroup of GL(v,q) that stabilizes the spread acts on the uncovered
//! lines and on the scattered k-subspaces. Collapsing both actions to orbits
//! turns the exact-cover condition "every uncovered line in exactly lambda
//! blocks" into a small integer system A·x = lambda·1 over 0/1 selections of
//! block orbits, which an exact backtracking solver handles at desk scale.
//! The natural groups here are powers of the Singer cycle together with the
//! Frobenius map.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gdd::{scattered_k_subspaces, GddInstance};
use crate::grassmann::enumerate_k_subspaces;
use crate::linalg::{GfMatrix, Subspace};
use crate::spread::Spread;

/// Largest group closure that will be materialized.
pub const DEFAULT_CLOSURE_CAP: u64 = 1_000_000;

/// Default backtracking node budget for `solve_lambda_cover`.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// A finite matrix group acting on row vectors of GF(q)^v, with its full
/// element list materialized.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    generators: Vec<GfMatrix>,
    elements: Vec<GfMatrix>,
}

impl MatrixGroup {
    /// Closes the generators under multiplication. Fails with GroupTooLarge
    /// when the closure exceeds the default cap.
    pub fn new(generators: Vec<GfMatrix>) -> Result<MatrixGroup> {
        MatrixGroup::with_cap(generators, DEFAULT_CLOSURE_CAP)
    }

    /// The identity-only group on GF(q)^n.
    pub fn trivial(q: u32, n: u16) -> Result<MatrixGroup> {
        let id = GfMatrix::identity(q, n)?;
        Ok(MatrixGroup { generators: vec![id.clone()], elements: vec![id] })
    }

    /// Closure with an explicit element cap.
    pub fn with_cap(generators: Vec<GfMatrix>, cap: u64) -> Result<MatrixGroup> {
        let first = generators
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a group needs at least one generator".into()))?;
        let (q, n) = (first.q(), first.n());
        for gen in &generators {
            if gen.q() != q || gen.n() != n {
                return Err(Error::DimensionMismatch(
                    "generators act on different spaces".into(),
                ));
            }
            if !gen.is_invertible() {
                return Err(Error::SingularMatrix);
            }
        }
        let identity = GfMatrix::identity(q, n)?;
        let mut seen: HashSet<GfMatrix> = HashSet::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        elements.push(identity.clone());
        queue.push_back(identity);
        while let Some(m) = queue.pop_front() {
            for gen in &generators {
                let next = m.mul(gen)?;
                if seen.insert(next.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::GroupTooLarge(cap));
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(MatrixGroup { generators, elements })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[GfMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[GfMatrix] {
        &self.elements
    }

    pub fn q(&self) -> u32 {
        self.elements[0].q()
    }

    pub fn n(&self) -> u16 {
        self.elements[0].n()
    }

    /// The orbit of a subspace, sorted and deduplicated.
    pub fn orbit_of(&self, s: &Subspace) -> Result<Vec<Subspace>> {
        let mut members: Vec<Subspace> = self
            .elements
            .iter()
            .map(|m| m.apply_to_subspace(s))
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        members.dedup();
        Ok(members)
    }
}

/// Companion matrix of the field's primitive polynomial: multiplication by
/// the primitive element a in the basis 1, a, ..., a^{v-1}, of multiplicative
/// order q^v - 1.
pub fn singer_generator(field: &Field) -> Result<GfMatrix> {
    GfMatrix::companion(field.q(), field.poly())
}

/// The Frobenius map x -> x^q of GF(q^v) as a GF(q)-linear matrix in the
/// same basis as `singer_generator`: row j is the encoding of a^{jq}. Its
/// order is v and it normalizes the Singer cycle.
pub fn frobenius_generator(field: &Field) -> Result<GfMatrix> {
    let q = field.q();
    let n = field.order() - 1;
    let v = field.g() as u16;
    let rows: Vec<u64> = (0..v as u64).map(|j| field.exp(j * q as u64 % n) as u64).collect();
    GfMatrix::from_rows(q, v, rows)
}

/// One orbit of the group action on subspaces: members sorted ascending, the
/// representative being the smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    members: Vec<Subspace>,
}

impl Orbit {
    pub fn representative(&self) -> &Subspace {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }
}

/// Partitions `objects` into orbits of the group action, ordered by their
/// representatives. When a spread is supplied, each generator is first
/// checked to map every spread element onto a spread element, which makes
/// the whole group a subgroup of the spread stabilizer.
///
/// The object list must be closed under the action; an orbit that leaves the
/// list is reported as NotAPartition.
pub fn orbits(
    group: &MatrixGroup,
    objects: &[Subspace],
    spread: Option<&Spread>,
) -> Result<Vec<Orbit>> {
    if let Some(sp) = spread {
        for gen in group.generators() {
            for element in sp.elements() {
                let image = gen.apply_to_subspace(element)?;
                let home = sp.element_of_vector(image.row_encodings()[0])?;
                if sp.elements()[home as usize] != image {
                    return Err(Error::GroupDoesNotStabilizeSpread {
                        element: element.row_encodings().to_vec(),
                    });
                }
            }
        }
    }
    let index: HashSet<&Subspace> = objects.iter().collect();
    let mut sorted: Vec<&Subspace> = objects.iter().collect();
    sorted.sort_unstable();
    let mut assigned: HashSet<Subspace> = HashSet::with_capacity(objects.len());
    let mut out = Vec::new();
    for &obj in &sorted {
        if assigned.contains(obj) {
            continue;
        }
        let members = group.orbit_of(obj)?;
        for m in &members {
            if !index.contains(m) {
                return Err(Error::NotAPartition(
                    "object list is not closed under the group action".into(),
                ));
            }
            assigned.insert(m.clone());
        }
        out.push(Orbit { members });
    }
    Ok(out)
}

/// The orbit-collapsed selection system for one (spread, k) pair: choosing a
/// set of block-orbit columns with A·x = lambda·1 covers every uncovered
/// line exactly lambda times.
#[derive(Debug, Clone)]
pub struct KmSystem {
    pub line_orbits: Vec<Orbit>,
    pub block_orbits: Vec<Orbit>,
    /// a[i][j] = blocks in orbit j containing the representative of line
    /// orbit i.
    pub a: Vec<Vec<u32>>,
}

impl KmSystem {
    /// Total blocks across the selected orbit columns.
    pub fn selection_size(&self, selection: &[usize]) -> usize {
        selection.iter().map(|&j| self.block_orbits[j].len()).sum()
    }
}

/// Builds the selection system for scattered k-subspaces against the
/// uncovered lines, both collapsed to orbits of `group`. The group must
/// stabilize the spread. `limit` bounds the scattered enumeration.
pub fn build_km_system(
    group: &MatrixGroup,
    spread: &Spread,
    k: u16,
    limit: u64,
) -> Result<KmSystem> {
    let q = spread.q();
    let v = spread.ambient_dim();
    if group.q() != q || group.n() != v {
        return Err(Error::AmbientMismatch("group acts on a different space".into()));
    }
    let mut lines = Vec::new();
    for line in enumerate_k_subspaces(q, v, 2)? {
        let rows = line.row_encodings();
        if !spread.covers_line(rows[0], rows[1])? {
            lines.push(line);
        }
    }
    let blocks = scattered_k_subspaces(spread, k, limit)?;
    let line_orbits = orbits(group, &lines, Some(spread))?;
    let block_orbits = orbits(group, &blocks, None)?;
    let reps: Vec<&Subspace> = line_orbits.iter().map(|o| o.representative()).collect();
    let columns: Vec<Vec<u32>> = block_orbits
        .par_iter()
        .map(|orbit| {
            let mut col = vec![0u32; reps.len()];
            for block in orbit.members() {
                for (i, rep) in reps.iter().enumerate() {
                    if block.contains(rep) {
                        col[i] += 1;
                    }
                }
            }
            col
        })
        .collect();
    let a: Vec<Vec<u32>> = (0..reps.len())
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect();
    Ok(KmSystem { line_orbits, block_orbits, a })
}

/// Where a suspended search stopped: the column stack at the moment the node
/// budget ran out, replayable because the branching order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResumeToken {
    pub path: Vec<usize>,
    /// True when the token's node is a solution that was already reported.
    pub skip_solution: bool,
}

/// Result of one solver run.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Each solution is a sorted list of block-orbit columns with
    /// A·x = lambda·1.
    pub solutions: Vec<Vec<usize>>,
    /// Backtracking nodes visited.
    pub nodes: u64,
    /// True when the search space was exhausted.
    pub complete: bool,
    /// Set when the run stopped early, for passing back in as `resume`.
    pub suspended: Option<ResumeToken>,
}

struct CoverSearch<'a> {
    a: &'a [Vec<u32>],
    banned: Vec<bool>,
    residual: Vec<u64>,
    path: Vec<usize>,
    solutions: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
    limit: usize,
    resume: Option<ResumeToken>,
    stop: Option<ResumeToken>,
}

impl CoverSearch<'_> {
    fn admissible_columns(&self) -> Vec<usize> {
        (0..self.banned.len())
            .filter(|&j| {
                !self.banned[j]
                    && self.a.iter().enumerate().all(|(i, row)| row[j] as u64 <= self.residual[i])
            })
            .collect()
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.stop = Some(ResumeToken { path: self.path.clone(), skip_solution: false });
            return;
        }
        if self.residual.iter().all(|&r| r == 0) {
            let at_token = self
                .resume
                .as_ref()
                .map(|t| t.skip_solution && t.path == self.path)
                .unwrap_or(false);
            if !at_token {
                let mut solution = self.path.clone();
                solution.sort_unstable();
                self.solutions.push(solution);
                if self.limit > 0 && self.solutions.len() >= self.limit {
                    self.stop =
                        Some(ResumeToken { path: self.path.clone(), skip_solution: true });
                }
            }
            return;
        }
        let admissible = self.admissible_columns();
        // Branch on the open row with the least slack (support capacity
        // minus residual): rows that are nearly forced fail or cascade
        // fastest. Bail out when some open row cannot reach its residual
        // even by taking every admissible column.
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate() {
            if self.residual[i] == 0 {
                continue;
            }
            let mut count = 0usize;
            let mut capacity = 0u64;
            for &j in &admissible {
                if row[j] > 0 {
                    count += 1;
                    capacity += row[j] as u64;
                }
            }
            if capacity < self.residual[i] {
                return;
            }
            let key = (capacity - self.residual[i], count, i);
            if best.map(|b| key < b).unwrap_or(true) {
                best = Some(key);
            }
        }
        let Some((_, _, row)) = best else { return };
        // Try the biggest contributions first: they close the row in the
        // fewest selections and surface contradictions early.
        let mut candidates: Vec<usize> =
            admissible.into_iter().filter(|&j| self.a[row][j] > 0).collect();
        candidates.sort_by_key(|&j| (std::cmp::Reverse(self.a[row][j]), j));
        let mut to_unban = Vec::new();
        // When replaying a suspension path, everything left of the recorded
        // branch was already explored; ban it and pick up from the branch.
        if let Some(token) = &self.resume {
            if self.path.len() < token.path.len()
                && self.path[..] == token.path[..self.path.len()]
            {
                let guided = token.path[self.path.len()];
                let pos = candidates
                    .iter()
                    .position(|&j| j == guided)
                    .expect("resume token does not match this system");
                for &j in &candidates[..pos] {
                    self.banned[j] = true;
                    to_unban.push(j);
                }
                candidates.drain(..pos);
            }
        }
        // A chosen column is banned for its own subtree (selections are 0/1)
        // and stays banned for the following siblings, so every selection is
        // visited exactly once.
        for &j in &candidates {
            self.banned[j] = true;
            to_unban.push(j);
            for (i, row) in self.a.iter().enumerate() {
                self.residual[i] -= row[j] as u64;
            }
            self.path.push(j);
            self.dfs();
            self.path.pop();
            for (i, row) in self.a.iter().enumerate() {
                self.residual[i] += row[j] as u64;
            }
            if self.stop.is_some() {
                return;
            }
        }
        for j in to_unban {
            self.banned[j] = false;
        }
    }
}

/// Enumerates 0/1 selections of block-orbit columns with A·x = lambda·1 by
/// exact backtracking: branch on the open line orbit with the least slack
/// (ties to fewer supporting columns, then the lower index), try columns by
/// decreasing contribution to that orbit, and exclude a column after its
/// subtree so each selection appears once. Deterministic.
///
/// `limit` = 0 enumerates everything within `node_budget`; otherwise the run
/// stops after `limit` solutions. A run that stops early carries a
/// `ResumeToken`; passing it back continues exactly where the previous run
/// left off.
pub fn solve_lambda_cover(
    system: &KmSystem,
    lambda: u64,
    limit: usize,
    node_budget: u64,
    resume: Option<&ResumeToken>,
) -> SearchOutcome {
    let rows = system.a.len();
    let cols = system.block_orbits.len();
    let mut search = CoverSearch {
        a: &system.a,
        banned: vec![false; cols],
        residual: vec![lambda; rows],
        path: Vec::new(),
        solutions: Vec::new(),
        nodes: 0,
        budget: node_budget,
        limit,
        resume: resume.cloned(),
        stop: None,
    };
    if rows == 0 {
        // Nothing to cover: only the empty selection qualifies.
        return SearchOutcome {
            solutions: vec![Vec::new()],
            nodes: 1,
            complete: true,
            suspended: None,
        };
    }
    search.dfs();
    SearchOutcome {
        complete: search.stop.is_none(),
        suspended: search.stop,
        solutions: search.solutions,
        nodes: search.nodes,
    }
}

/// Blocks named by a selection of columns: the union of those orbits.
pub fn expand_selection(system: &KmSystem, selection: &[usize]) -> Vec<Subspace> {
    let mut blocks = Vec::with_capacity(system.selection_size(selection));
    for &j in selection {
        blocks.extend_from_slice(system.block_orbits[j].members());
    }
    blocks
}

/// Rebuilds a design from published orbit generators: each integer-vector
/// encoding is decoded to a k-subspace and expanded to its orbit under the
/// group; the union of the orbits is the block set. Orbits must be pairwise
/// disjoint.
pub fn reconstruct_from_generators(
    group: &MatrixGroup,
    spread: &Spread,
    generator_encodings: &[Vec<u64>],
    lambda: u64,
) -> Result<GddInstance> {
    let q = spread.q();
    let v = spread.ambient_dim();
    if group.q() != q || group.n() != v {
        return Err(Error::AmbientMismatch("group acts on a different space".into()));
    }
    let mut k = None;
    let mut blocks = Vec::new();
    let mut seen: HashSet<Subspace> = HashSet::new();
    for rows in generator_encodings {
        let generator = Subspace::from_rows(q, v, rows)?;
        if generator.dim() != rows.len() {
            return Err(Error::DecodeError(format!(
                "generator {rows:?} has dependent rows"
            )));
        }
        match k {
            None => k = Some(generator.dim()),
            Some(expected) if expected != generator.dim() => {
                return Err(Error::BlockDimensionMismatch {
                    expected: expected as u16,
                    found: generator.dim() as u16,
                })
            }
            _ => {}
        }
        for member in group.orbit_of(&generator)? {
            if !seen.insert(member.clone()) {
                return Err(Error::DuplicateBlocks(format!(
                    "orbit of {rows:?} overlaps an earlier orbit"
                )));
            }
            blocks.push(member);
        }
    }
    let k = k.ok_or_else(|| Error::DecodeError("no generators given".into()))? as u16;
    GddInstance::new(spread.clone(), k, lambda, blocks)
}
