//! Quivers, quadratic zero-relations, and locally gentle pairs.
//!
//! A pair `(Q, Z)` is *locally gentle* when every vertex has in- and
//! out-degree at most two and every arrow extends in at most one admissible
//! and at most one inadmissible way on each side. All other modules of this
//! crate take a validated [`LocallyGentlePair`] as input.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

/// Index of an arrow in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A finite quiver. Loops and parallel arrows are permitted; the empty
/// quiver is legal.
#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references undeclared vertex `{vertex}`")]
    UndeclaredVertex { arrow: String, vertex: String },
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, tail, head)` triples.
    pub fn new<S: Into<String>>(
        vertices: Vec<S>,
        arrows: Vec<(S, S, S)>,
    ) -> Result<Self, QuiverError> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut built = Vec::new();
        for (i, (name, tail, head)) in arrows.into_iter().enumerate() {
            let (name, tail, head) = (name.into(), tail.into(), head.into());
            let t = *vertex_index
                .get(&tail)
                .ok_or_else(|| QuiverError::UndeclaredVertex {
                    arrow: name.clone(),
                    vertex: tail.clone(),
                })?;
            let h = *vertex_index
                .get(&head)
                .ok_or_else(|| QuiverError::UndeclaredVertex {
                    arrow: name.clone(),
                    vertex: head.clone(),
                })?;
            if arrow_index.insert(name.clone(), ArrowId(i)).is_some() {
                return Err(QuiverError::DuplicateArrow(name));
            }
            built.push(Arrow {
                name,
                tail: t,
                head: h,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: built,
            vertex_index,
            arrow_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn tail(&self, a: ArrowId) -> VertexId {
        self.arrows[a.0].tail
    }

    pub fn head(&self, a: ArrowId) -> VertexId {
        self.arrows[a.0].head
    }

    /// Arrows with head `v`, in declaration order.
    pub fn in_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrow_ids().filter(|&a| self.head(a) == v).collect()
    }

    /// Arrows with tail `v`, in declaration order.
    pub fn out_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrow_ids().filter(|&a| self.tail(a) == v).collect()
    }

    /// Vertex sets of the connected components of the underlying graph,
    /// each sorted, ordered by smallest member.
    pub fn undirected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let idx = components.len();
            let mut stack = vec![start];
            comp[start] = idx;
            let mut members = vec![VertexId(start)];
            while let Some(u) = stack.pop() {
                for a in &self.arrows {
                    for (x, y) in [(a.tail.0, a.head.0), (a.head.0, a.tail.0)] {
                        if x == u && comp[y] == usize::MAX {
                            comp[y] = idx;
                            stack.push(y);
                            members.push(VertexId(y));
                        }
                    }
                }
            }
            members.sort();
            components.push(members);
        }
        components
    }
}

/// A quadratic zero-relation, the length-2 path `outer ∘ inner`
/// (inner traversed first).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Relation {
    pub outer: ArrowId,
    pub inner: ArrowId,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("relation references unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation `{outer}*{inner}` is not composable: tail({outer}) != head({inner})")]
    NotComposable { outer: String, inner: String },
    #[error("duplicate relation `{outer}*{inner}`")]
    DuplicateRelation { outer: String, inner: String },
    #[error("pair is not locally gentle: {0:?}")]
    NotLocallyGentle(Vec<Violation>),
}

/// A single failure of the locally-gentle conditions, with enough data to
/// report the offending vertex or arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// More than two arrows end at this vertex.
    InDegree { vertex: String, count: usize },
    /// More than two arrows start at this vertex.
    OutDegree { vertex: String, count: usize },
    /// Arrow has two admissible continuations `c*arrow`.
    DoubleAdmissibleAfter { arrow: String, first: String, second: String },
    /// Arrow has two inadmissible continuations `c*arrow`.
    DoubleInadmissibleAfter { arrow: String, first: String, second: String },
    /// Arrow has two admissible precedents `arrow*a`.
    DoubleAdmissibleBefore { arrow: String, first: String, second: String },
    /// Arrow has two inadmissible precedents `arrow*a`.
    DoubleInadmissibleBefore { arrow: String, first: String, second: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InDegree { vertex, count } => {
                write!(f, "vertex `{vertex}` is the head of {count} arrows")
            }
            Violation::OutDegree { vertex, count } => {
                write!(f, "vertex `{vertex}` is the tail of {count} arrows")
            }
            Violation::DoubleAdmissibleAfter { arrow, first, second } => write!(
                f,
                "arrow `{arrow}` has two admissible continuations `{first}` and `{second}`"
            ),
            Violation::DoubleInadmissibleAfter { arrow, first, second } => write!(
                f,
                "arrow `{arrow}` has two inadmissible continuations `{first}` and `{second}`"
            ),
            Violation::DoubleAdmissibleBefore { arrow, first, second } => write!(
                f,
                "arrow `{arrow}` has two admissible precedents `{first}` and `{second}`"
            ),
            Violation::DoubleInadmissibleBefore { arrow, first, second } => write!(
                f,
                "arrow `{arrow}` has two inadmissible precedents `{first}` and `{second}`"
            ),
        }
    }
}

/// A validated locally gentle pair `(Q, Z)`.
#[derive(Clone, Debug)]
pub struct LocallyGentlePair {
    quiver: Quiver,
    relations: Vec<Relation>,
    relation_set: BTreeSet<(ArrowId, ArrowId)>,
}

/// Checks conditions (i) and (ii) of the locally gentle definition and
/// returns the validated pair. Relations are given as `(outer, inner)`
/// arrow-name pairs, the path being inner-then-outer.
pub fn validate_locally_gentle(
    quiver: Quiver,
    relations: &[(String, String)],
) -> Result<LocallyGentlePair, PairError> {
    let mut resolved = Vec::new();
    let mut set = BTreeSet::new();
    for (outer, inner) in relations {
        let b = quiver
            .arrow_id(outer)
            .ok_or_else(|| PairError::UnknownArrow(outer.clone()))?;
        let a = quiver
            .arrow_id(inner)
            .ok_or_else(|| PairError::UnknownArrow(inner.clone()))?;
        if quiver.tail(b) != quiver.head(a) {
            return Err(PairError::NotComposable {
                outer: outer.clone(),
                inner: inner.clone(),
            });
        }
        if !set.insert((b, a)) {
            return Err(PairError::DuplicateRelation {
                outer: outer.clone(),
                inner: inner.clone(),
            });
        }
        resolved.push(Relation { outer: b, inner: a });
    }

    let mut violations = Vec::new();
    for v in quiver.vertex_ids() {
        let indeg = quiver.in_arrows(v).len();
        let outdeg = quiver.out_arrows(v).len();
        if indeg > 2 {
            violations.push(Violation::InDegree {
                vertex: quiver.vertex_name(v).to_string(),
                count: indeg,
            });
        }
        if outdeg > 2 {
            violations.push(Violation::OutDegree {
                vertex: quiver.vertex_name(v).to_string(),
                count: outdeg,
            });
        }
    }
    // Condition (ii): per arrow, at most one admissible and one inadmissible
    // composition on each side.
    for b in quiver.arrow_ids() {
        let bname = quiver.arrow(b).name.clone();
        let continuations: Vec<ArrowId> = quiver.out_arrows(quiver.head(b));
        let (adm, inadm): (Vec<&ArrowId>, Vec<&ArrowId>) = continuations
            .iter()
            .partition(|&&c| !set.contains(&(c, b)));
        if adm.len() > 1 {
            violations.push(Violation::DoubleAdmissibleAfter {
                arrow: bname.clone(),
                first: quiver.arrow(*adm[0]).name.clone(),
                second: quiver.arrow(*adm[1]).name.clone(),
            });
        }
        if inadm.len() > 1 {
            violations.push(Violation::DoubleInadmissibleAfter {
                arrow: bname.clone(),
                first: quiver.arrow(*inadm[0]).name.clone(),
                second: quiver.arrow(*inadm[1]).name.clone(),
            });
        }
        let precedents: Vec<ArrowId> = quiver.in_arrows(quiver.tail(b));
        let (adm, inadm): (Vec<&ArrowId>, Vec<&ArrowId>) = precedents
            .iter()
            .partition(|&&a| !set.contains(&(b, a)));
        if adm.len() > 1 {
            violations.push(Violation::DoubleAdmissibleBefore {
                arrow: bname.clone(),
                first: quiver.arrow(*adm[0]).name.clone(),
                second: quiver.arrow(*adm[1]).name.clone(),
            });
        }
        if inadm.len() > 1 {
            violations.push(Violation::DoubleInadmissibleBefore {
                arrow: bname,
                first: quiver.arrow(*inadm[0]).name.clone(),
                second: quiver.arrow(*inadm[1]).name.clone(),
            });
        }
    }
    if !violations.is_empty() {
        return Err(PairError::NotLocallyGentle(violations));
    }
    Ok(LocallyGentlePair {
        quiver,
        relations: resolved,
        relation_set: set,
    })
}

impl LocallyGentlePair {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Relations in declaration order.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Whether the path `outer ∘ inner` lies in `Z`.
    pub fn in_z(&self, outer: ArrowId, inner: ArrowId) -> bool {
        self.relation_set.contains(&(outer, inner))
    }

    /// Relations whose middle vertex is `v`, in declaration order.
    pub fn relations_through(&self, v: VertexId) -> Vec<Relation> {
        self.relations
            .iter()
            .copied()
            .filter(|r| self.quiver.tail(r.outer) == v)
            .collect()
    }

    /// The unique arrow `c` with `c ∘ b` composable and admissible, if any.
    pub fn admissible_successor(&self, b: ArrowId) -> Option<ArrowId> {
        self.quiver
            .out_arrows(self.quiver.head(b))
            .into_iter()
            .find(|&c| !self.in_z(c, b))
    }

    /// The unique arrow `a` with `b ∘ a` composable and admissible, if any.
    pub fn admissible_predecessor(&self, b: ArrowId) -> Option<ArrowId> {
        self.quiver
            .in_arrows(self.quiver.tail(b))
            .into_iter()
            .find(|&a| !self.in_z(b, a))
    }

    /// The unique arrow `c` with `c ∘ b` in `Z`, if any.
    pub fn relational_successor(&self, b: ArrowId) -> Option<ArrowId> {
        self.quiver
            .out_arrows(self.quiver.head(b))
            .into_iter()
            .find(|&c| self.in_z(c, b))
    }

    /// The unique arrow `a` with `b ∘ a` in `Z`, if any.
    pub fn relational_predecessor(&self, b: ArrowId) -> Option<ArrowId> {
        self.quiver
            .in_arrows(self.quiver.tail(b))
            .into_iter()
            .find(|&a| self.in_z(b, a))
    }

    pub fn relational_vertices(&self) -> Vec<VertexId> {
        self.quiver
            .vertex_ids()
            .filter(|&v| !self.relations_through(v).is_empty())
            .collect()
    }
}

/// Classification of a vertex by the relations through it. Witness arrows
/// follow the incidence pattern: `outgoing ∘ incoming` is the (first)
/// relation, `bypass_*` are the remaining incident arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexClass {
    NonRelational,
    Stream {
        outgoing: ArrowId,
        incoming: ArrowId,
    },
    Tributary {
        outgoing: ArrowId,
        incoming: ArrowId,
        bypass_in: ArrowId,
    },
    Distributary {
        outgoing: ArrowId,
        incoming: ArrowId,
        bypass_out: ArrowId,
    },
    Quadbutary {
        outgoing: ArrowId,
        incoming: ArrowId,
        bypass_in: ArrowId,
        bypass_out: ArrowId,
    },
}

impl VertexClass {
    pub fn is_relational(&self) -> bool {
        !matches!(self, VertexClass::NonRelational)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            VertexClass::NonRelational => "non-relational",
            VertexClass::Stream { .. } => "stream",
            VertexClass::Tributary { .. } => "tributary",
            VertexClass::Distributary { .. } => "distributary",
            VertexClass::Quadbutary { .. } => "quadbutary",
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
}

/// Classifies `v` as stream, tributary, distributary, quadbutary, or
/// non-relational.
///
/// A quadbutary has two relations through it; the witness pair `(b, a)` is
/// the relation whose inner arrow was declared later, which pins the
/// labelling of the otherwise symmetric witnesses.
pub fn classify_vertex(pair: &LocallyGentlePair, v: VertexId) -> VertexClass {
    let q = pair.quiver();
    let through = pair.relations_through(v);
    if through.is_empty() {
        return VertexClass::NonRelational;
    }
    let primary = if through.len() == 2 && through[1].inner > through[0].inner {
        through[1]
    } else {
        through[0]
    };
    let b = primary.outer;
    let a = primary.inner;
    let other_in: Vec<ArrowId> = q.in_arrows(v).into_iter().filter(|&x| x != a).collect();
    let other_out: Vec<ArrowId> = q.out_arrows(v).into_iter().filter(|&x| x != b).collect();
    match (other_in.first(), other_out.first()) {
        (None, None) => VertexClass::Stream {
            outgoing: b,
            incoming: a,
        },
        (Some(&c), None) => {
            debug_assert!(!pair.in_z(b, c));
            VertexClass::Tributary {
                outgoing: b,
                incoming: a,
                bypass_in: c,
            }
        }
        (None, Some(&d)) => {
            debug_assert!(!pair.in_z(d, a));
            VertexClass::Distributary {
                outgoing: b,
                incoming: a,
                bypass_out: d,
            }
        }
        (Some(&c), Some(&d)) => {
            debug_assert!(pair.in_z(d, c) && !pair.in_z(b, c) && !pair.in_z(d, a));
            VertexClass::Quadbutary {
                outgoing: b,
                incoming: a,
                bypass_in: c,
                bypass_out: d,
            }
        }
    }
}

/// Classifies a vertex given by name.
pub fn classify_vertex_by_name(
    pair: &LocallyGentlePair,
    name: &str,
) -> Result<VertexClass, ClassifyError> {
    let v = pair
        .quiver()
        .vertex_id(name)
        .ok_or_else(|| ClassifyError::UnknownVertex(name.to_string()))?;
    Ok(classify_vertex(pair, v))
}

/// True when the pair admits only finitely many admissible paths, i.e. no
/// oriented cycle composes admissibly all the way around.
pub fn is_gentle(pair: &LocallyGentlePair) -> bool {
    let n = pair.quiver().arrow_count();
    // Admissible succession is a partial permutation of the arrows, so a
    // cycle is found iff some arrow walks back to itself.
    for start in pair.quiver().arrow_ids() {
        let mut cur = start;
        for _ in 0..n {
            match pair.admissible_successor(cur) {
                Some(next) => {
                    cur = next;
                    if cur == start {
                        return false;
                    }
                }
                None => break,
            }
        }
    }
    true
}

/// A path in a quiver, stored in traversal order (the first arrow traversed
/// first). The conventional right-to-left rendering is produced by
/// [`Path::display`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Path {
    Trivial(VertexId),
    Arrows(Vec<ArrowId>),
}

impl Path {
    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Arrows(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tail(&self, q: &Quiver) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Arrows(a) => q.tail(a[0]),
        }
    }

    pub fn head(&self, q: &Quiver) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Arrows(a) => q.head(*a.last().unwrap()),
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        match self {
            Path::Trivial(v) => format!("e_{}", q.vertex_name(*v)),
            Path::Arrows(arrows) => arrows
                .iter()
                .rev()
                .map(|&a| q.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    fn sort_key(&self, q: &Quiver) -> (usize, Vec<String>) {
        match self {
            Path::Trivial(v) => (0, vec![q.vertex_name(*v).to_string()]),
            Path::Arrows(arrows) => (
                arrows.len(),
                arrows.iter().map(|&a| q.arrow(a).name.clone()).collect(),
            ),
        }
    }
}

/// All admissible paths of length at most `max_len`, trivial paths
/// included, ordered by length then lexicographically on arrow names.
pub fn admissible_paths(pair: &LocallyGentlePair, max_len: usize) -> Vec<Path> {
    let q = pair.quiver();
    let mut out: Vec<Path> = q.vertex_ids().map(Path::Trivial).collect();
    if max_len >= 1 {
        for start in q.arrow_ids() {
            let mut arrows = vec![start];
            out.push(Path::Arrows(arrows.clone()));
            while arrows.len() < max_len {
                match pair.admissible_successor(*arrows.last().unwrap()) {
                    Some(next) => {
                        arrows.push(next);
                        out.push(Path::Arrows(arrows.clone()));
                    }
                    None => break,
                }
            }
        }
    }
    out.sort_by_cached_key(|p| p.sort_key(q));
    out
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RandomPairError {
    #[error("unsatisfiable parameters: cannot place {arrows} arrows on {vertices} vertices")]
    Unsatisfiable { vertices: usize, arrows: usize },
}

/// Generates a random locally gentle pair, deterministic in `seed`.
///
/// Arrows are placed respecting the degree bounds; the relation set at each
/// vertex is then forced up to a finite choice by the unique-continuation
/// condition, and that choice is sampled.
pub fn random_locally_gentle(
    seed: u64,
    n_vertices: usize,
    n_arrows: usize,
) -> Result<LocallyGentlePair, RandomPairError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<String> = (1..=n_vertices).map(|i| i.to_string()).collect();
    let mut out_deg = vec![0usize; n_vertices];
    let mut in_deg = vec![0usize; n_vertices];
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    for k in 0..n_arrows {
        let tails: Vec<usize> = (0..n_vertices).filter(|&v| out_deg[v] < 2).collect();
        let heads: Vec<usize> = (0..n_vertices).filter(|&v| in_deg[v] < 2).collect();
        if tails.is_empty() || heads.is_empty() {
            return Err(RandomPairError::Unsatisfiable {
                vertices: n_vertices,
                arrows: n_arrows,
            });
        }
        let t = tails[rng.gen_range(0..tails.len())];
        let h = heads[rng.gen_range(0..heads.len())];
        out_deg[t] += 1;
        in_deg[h] += 1;
        arrows.push((
            format!("a{}", k + 1),
            vertices[t].clone(),
            vertices[h].clone(),
        ));
    }
    let quiver = Quiver::new(vertices, arrows).expect("generated names are unique");

    let mut relations: Vec<(String, String)> = Vec::new();
    let push = |q: &Quiver, b: ArrowId, a: ArrowId, rel: &mut Vec<(String, String)>| {
        rel.push((q.arrow(b).name.clone(), q.arrow(a).name.clone()));
    };
    for v in quiver.vertex_ids() {
        let ins = quiver.in_arrows(v);
        let outs = quiver.out_arrows(v);
        match (outs.len(), ins.len()) {
            (1, 1) => {
                if rng.gen_bool(0.5) {
                    push(&quiver, outs[0], ins[0], &mut relations);
                }
            }
            (1, 2) => {
                let pick = rng.gen_range(0..2);
                push(&quiver, outs[0], ins[pick], &mut relations);
            }
            (2, 1) => {
                let pick = rng.gen_range(0..2);
                push(&quiver, outs[pick], ins[0], &mut relations);
            }
            (2, 2) => {
                if rng.gen_bool(0.5) {
                    push(&quiver, outs[0], ins[0], &mut relations);
                    push(&quiver, outs[1], ins[1], &mut relations);
                } else {
                    push(&quiver, outs[0], ins[1], &mut relations);
                    push(&quiver, outs[1], ins[0], &mut relations);
                }
            }
            _ => {}
        }
    }
    Ok(validate_locally_gentle(quiver, &relations)
        .expect("forced relation structure is always locally gentle"))
}
