//! The combinatorial surface model of a locally gentle pair.
//!
//! Each quiver vertex is an arc. Maximal admissible arrow chains (fans) are
//! the marked points where arc ends meet; maximal relational chains are the
//! faces. Every arrow occupies one angular sector, consuming a quarter-slot
//! (end x side) on each of its two arcs. Unconsumed quarters lie on the
//! boundary, and matching them through fan gaps and face segments traces
//! the boundary walks. Euler characteristic, genus, and the boundary count
//! follow from the cell counts.

use thiserror::Error;

use crate::galois::{AutomorphismValue, GaloisError, Sigma};
use crate::quiver::{validate_locally_gentle, ArrowId, LocallyGentlePair, VertexId};
use crate::words::{is_admissible, Word};
use crate::zembyk::{excision, extract_component, ComponentClass, ZembykError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("arc slot overflow at vertex index {0} (internal error)")]
    SlotOverflow(usize),
    #[error("thread appearance mismatch for arrow index {0} (internal error)")]
    AppearanceMismatch(usize),
    #[error("quarter consumed twice (internal error)")]
    QuarterReuse,
    #[error("non-internal thread does not carry exactly one boundary segment (internal error)")]
    BoundarySegments,
    #[error("genus computation produced a non-integer (internal error)")]
    BadGenus,
    #[error("word is not admissible for this pair")]
    InadmissibleWord,
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Zembyk(#[from] ZembykError),
}

/// Fan or face selector for [`threads`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreadMode {
    /// Chains composing outside `Z`: the marked points of `V`.
    Admissible,
    /// Chains composing inside `Z`: the faces of the dissection.
    Relational,
}

/// A maximal chain of arrows under the successor relation of one mode.
/// Empty threads occupy a single arc slot recorded in `anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thread {
    pub arrows: Vec<ArrowId>,
    pub cyclic: bool,
    /// `(arc, slot)` for empty threads; the slot is an end for fans and a
    /// side for faces.
    pub anchor: Option<(VertexId, u8)>,
}

impl Thread {
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Number of arc slots the thread occupies.
    pub fn slot_count(&self) -> usize {
        if self.cyclic {
            self.arrows.len()
        } else {
            self.arrows.len() + 1
        }
    }
}

fn successor(pair: &LocallyGentlePair, a: ArrowId, mode: ThreadMode) -> Option<ArrowId> {
    match mode {
        ThreadMode::Admissible => pair.admissible_successor(a),
        ThreadMode::Relational => pair.relational_successor(a),
    }
}

fn predecessor(pair: &LocallyGentlePair, a: ArrowId, mode: ThreadMode) -> Option<ArrowId> {
    match mode {
        ThreadMode::Admissible => pair.admissible_predecessor(a),
        ThreadMode::Relational => pair.relational_predecessor(a),
    }
}

/// Maximal chains plus one empty thread per leftover arc slot.
///
/// Linear threads come first ordered by their first arrow, then cyclic
/// threads rotated to start at their smallest arrow, then empty threads in
/// arc-slot order.
pub fn threads(pair: &LocallyGentlePair, mode: ThreadMode) -> Vec<Thread> {
    threads_with_appearances(pair, mode)
        .map(|(t, _)| t)
        .expect("slot assignment is consistent for validated pairs")
}

type Appearance = (VertexId, u8);

/// Threads together with the arc-slot appearance sequence of each.
fn threads_with_appearances(
    pair: &LocallyGentlePair,
    mode: ThreadMode,
) -> Result<(Vec<Thread>, Vec<Vec<Appearance>>), SurfaceError> {
    let q = pair.quiver();
    let mut threads: Vec<Thread> = Vec::new();
    let mut in_thread = vec![false; q.arrow_count()];

    // Linear chains start at arrows with no predecessor.
    for a in q.arrow_ids() {
        if predecessor(pair, a, mode).is_none() && !in_thread[a.0] {
            let mut arrows = vec![a];
            in_thread[a.0] = true;
            let mut cur = a;
            while let Some(next) = successor(pair, cur, mode) {
                arrows.push(next);
                in_thread[next.0] = true;
                cur = next;
            }
            threads.push(Thread {
                arrows,
                cyclic: false,
                anchor: None,
            });
        }
    }
    // Remaining arrows sit on cycles.
    for a in q.arrow_ids() {
        if !in_thread[a.0] {
            let mut arrows = vec![a];
            in_thread[a.0] = true;
            let mut cur = successor(pair, a, mode).expect("cycle arrows have successors");
            while cur != a {
                arrows.push(cur);
                in_thread[cur.0] = true;
                cur = successor(pair, cur, mode).expect("cycle arrows have successors");
            }
            threads.push(Thread {
                arrows,
                cyclic: true,
                anchor: None,
            });
        }
    }

    // Assign arc slots to every appearance, in thread order.
    let mut used = vec![[false, false]; q.vertex_count()];
    let mut take = |arc: VertexId| -> Result<Appearance, SurfaceError> {
        let slots = &mut used[arc.0];
        if !slots[0] {
            slots[0] = true;
            Ok((arc, 0))
        } else if !slots[1] {
            slots[1] = true;
            Ok((arc, 1))
        } else {
            Err(SurfaceError::SlotOverflow(arc.0))
        }
    };
    let mut appearances: Vec<Vec<Appearance>> = Vec::new();
    for t in &threads {
        let mut apps = Vec::with_capacity(t.slot_count());
        apps.push(take(q.tail(t.arrows[0]))?);
        let upto = if t.cyclic {
            t.arrows.len() - 1
        } else {
            t.arrows.len()
        };
        for &a in &t.arrows[..upto] {
            apps.push(take(q.head(a))?);
        }
        appearances.push(apps);
    }
    // Leftover slots become empty threads.
    for v in q.vertex_ids() {
        for slot in 0..2u8 {
            if !used[v.0][slot as usize] {
                threads.push(Thread {
                    arrows: Vec::new(),
                    cyclic: false,
                    anchor: Some((v, slot)),
                });
                appearances.push(vec![(v, slot)]);
            }
        }
    }
    Ok((threads, appearances))
}

/// End slots of an arrow's two incidences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrowEnds {
    pub tail_end: u8,
    pub head_end: u8,
}

/// Topological summary of one connected piece of the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub arcs: Vec<VertexId>,
    pub euler_characteristic: i64,
    pub genus: usize,
    pub boundary_components: usize,
    pub punctures_v: usize,
    pub punctures_vstar: usize,
}

/// The dissected surface of a pair: arcs, fans, faces, incidence data, and
/// topological invariants.
#[derive(Clone, Debug)]
pub struct DissectedSurface {
    pair: LocallyGentlePair,
    v_fans: Vec<Thread>,
    faces: Vec<Thread>,
    end_assignment: Vec<ArrowEnds>,
    euler_characteristic: i64,
    genus: usize,
    boundary_components: usize,
    boundary_walks: Vec<Vec<(usize, usize)>>,
    punctures_v: usize,
    punctures_vstar: usize,
    components: Vec<SurfaceComponent>,
}

impl DissectedSurface {
    pub fn pair(&self) -> &LocallyGentlePair {
        &self.pair
    }

    /// One arc per quiver vertex.
    pub fn arc_count(&self) -> usize {
        self.pair.quiver().vertex_count()
    }

    pub fn v_fans(&self) -> &[Thread] {
        &self.v_fans
    }

    pub fn faces(&self) -> &[Thread] {
        &self.faces
    }

    pub fn end_assignment(&self) -> &[ArrowEnds] {
        &self.end_assignment
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_characteristic
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_components(&self) -> usize {
        self.boundary_components
    }

    /// Boundary walks as alternating `(fan, face)` index pairs, each walk
    /// in canonical rotation and direction.
    pub fn boundary_walks(&self) -> &[Vec<(usize, usize)>] {
        &self.boundary_walks
    }

    pub fn punctures_v(&self) -> usize {
        self.punctures_v
    }

    pub fn punctures_vstar(&self) -> usize {
        self.punctures_vstar
    }

    pub fn components(&self) -> &[SurfaceComponent] {
        &self.components
    }
}

/// Lexicographically least rotation, over both directions, of a cyclic
/// walk. Reversing a walk re-pairs each fan with the face crossed on its
/// other side.
fn canonical_walk(walk: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let n = walk.len();
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut consider = |cand: Vec<(usize, usize)>| {
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    };
    for r in 0..n {
        let rotated: Vec<_> = (0..n).map(|i| walk[(r + i) % n]).collect();
        consider(rotated);
        let reversed: Vec<_> = (0..n)
            .map(|i| {
                let fan = walk[(r + n - i) % n].0;
                let face = walk[(r + n - i - 1) % n].1;
                (fan, face)
            })
            .collect();
        consider(reversed);
    }
    best.unwrap_or_default()
}

/// Builds the surface model.
pub fn build_surface(pair: &LocallyGentlePair) -> Result<DissectedSurface, SurfaceError> {
    let q = pair.quiver();
    let (fans, fan_apps) = threads_with_appearances(pair, ThreadMode::Admissible)?;
    let (faces, face_apps) = threads_with_appearances(pair, ThreadMode::Relational)?;

    // Locate each arrow's transition inside its fan and its face.
    let mut fan_pos = vec![(usize::MAX, usize::MAX); q.arrow_count()];
    let mut face_pos = vec![(usize::MAX, usize::MAX); q.arrow_count()];
    for (ti, t) in fans.iter().enumerate() {
        for (k, &a) in t.arrows.iter().enumerate() {
            fan_pos[a.0] = (ti, k);
        }
    }
    for (ti, t) in faces.iter().enumerate() {
        for (k, &a) in t.arrows.iter().enumerate() {
            face_pos[a.0] = (ti, k);
        }
    }

    let quarter = |arc: VertexId, end: u8, side: u8| -> usize {
        arc.0 * 4 + (end as usize) * 2 + side as usize
    };
    let mut consumed = vec![false; 4 * q.vertex_count()];
    let mut end_assignment = Vec::with_capacity(q.arrow_count());
    for a in q.arrow_ids() {
        let (fi, fk) = fan_pos[a.0];
        let (gi, gk) = face_pos[a.0];
        let fan_len = fan_apps[fi].len();
        let face_len = face_apps[gi].len();
        let (t_arc, t_end) = fan_apps[fi][fk];
        let (h_arc, h_end) = fan_apps[fi][if fans[fi].cyclic { (fk + 1) % fan_len } else { fk + 1 }];
        let (t_arc2, t_side) = face_apps[gi][gk];
        let (h_arc2, h_side) =
            face_apps[gi][if faces[gi].cyclic { (gk + 1) % face_len } else { gk + 1 }];
        if t_arc != q.tail(a) || h_arc != q.head(a) || t_arc2 != q.tail(a) || h_arc2 != q.head(a)
        {
            return Err(SurfaceError::AppearanceMismatch(a.0));
        }
        for idx in [quarter(t_arc, t_end, t_side), quarter(h_arc, h_end, h_side)] {
            if consumed[idx] {
                return Err(SurfaceError::QuarterReuse);
            }
            consumed[idx] = true;
        }
        end_assignment.push(ArrowEnds {
            tail_end: t_end,
            head_end: h_end,
        });
    }

    // Free quarters of each non-cyclic fan and face.
    let free_of = |apps: &[Appearance],
                   cyclic: bool,
                   per_end: bool,
                   consumed: &[bool]|
     -> Result<Vec<usize>, SurfaceError> {
        let mut free = Vec::new();
        for &(arc, slot) in apps {
            for other in 0..2u8 {
                let idx = if per_end {
                    quarter(arc, slot, other)
                } else {
                    quarter(arc, other, slot)
                };
                if !consumed[idx] {
                    free.push(idx);
                }
            }
        }
        if cyclic {
            if !free.is_empty() {
                return Err(SurfaceError::BoundarySegments);
            }
        } else if free.len() != 2 {
            return Err(SurfaceError::BoundarySegments);
        }
        Ok(free)
    };

    let total_quarters = 4 * q.vertex_count();
    let mut gap_partner = vec![usize::MAX; total_quarters];
    let mut fan_of_quarter = vec![usize::MAX; total_quarters];
    let mut seg_partner = vec![usize::MAX; total_quarters];
    let mut face_of_quarter = vec![usize::MAX; total_quarters];
    for (ti, t) in fans.iter().enumerate() {
        let free = free_of(&fan_apps[ti], t.cyclic, true, &consumed)?;
        if let [x, y] = free[..] {
            gap_partner[x] = y;
            gap_partner[y] = x;
            fan_of_quarter[x] = ti;
            fan_of_quarter[y] = ti;
        }
    }
    for (ti, t) in faces.iter().enumerate() {
        let free = free_of(&face_apps[ti], t.cyclic, false, &consumed)?;
        if let [x, y] = free[..] {
            seg_partner[x] = y;
            seg_partner[y] = x;
            face_of_quarter[x] = ti;
            face_of_quarter[y] = ti;
        }
    }

    // Trace the boundary: alternate fan gaps and face segments.
    let mut visited = vec![false; total_quarters];
    let mut walks: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut walk_arc: Vec<VertexId> = Vec::new();
    for start in 0..total_quarters {
        if consumed[start] || visited[start] || gap_partner[start] == usize::MAX {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            visited[cur] = true;
            let fan = fan_of_quarter[cur];
            let partner = gap_partner[cur];
            visited[partner] = true;
            let face = face_of_quarter[partner];
            if fan == usize::MAX || face == usize::MAX {
                return Err(SurfaceError::BoundarySegments);
            }
            walk.push((fan, face));
            cur = seg_partner[partner];
            if cur == start {
                break;
            }
        }
        walk_arc.push(VertexId(start / 4));
        walks.push(canonical_walk(&walk));
    }

    let punctures_v = fans.iter().filter(|t| t.cyclic).count();
    let punctures_vstar = faces.iter().filter(|t| t.cyclic).count();

    // Connected components via shared threads.
    let mut comp = (0..q.vertex_count()).collect::<Vec<usize>>();
    fn find(comp: &mut Vec<usize>, x: usize) -> usize {
        if comp[x] != x {
            let root = find(comp, comp[x]);
            comp[x] = root;
            root
        } else {
            x
        }
    }
    let union = |comp: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(comp, x), find(comp, y));
        if rx != ry {
            comp[rx.max(ry)] = rx.min(ry);
        }
    };
    for apps in fan_apps.iter().chain(face_apps.iter()) {
        for w in apps.windows(2) {
            union(&mut comp, w[0].0 .0, w[1].0 .0);
        }
    }
    let roots: Vec<usize> = (0..q.vertex_count())
        .map(|v| find(&mut comp, v))
        .collect();
    let mut component_ids: Vec<usize> = roots.clone();
    component_ids.sort_unstable();
    component_ids.dedup();

    let thread_comp = |apps: &Vec<Appearance>| roots[apps[0].0 .0];
    let mut components = Vec::new();
    let mut total_genus = 0usize;
    for &root in &component_ids {
        let arcs: Vec<VertexId> = q.vertex_ids().filter(|v| roots[v.0] == root).collect();
        let n_arcs = arcs.len() as i64;
        let n_faces = face_apps
            .iter()
            .filter(|apps| thread_comp(apps) == root)
            .count() as i64;
        let p_v = fans
            .iter()
            .zip(&fan_apps)
            .filter(|(t, apps)| t.cyclic && thread_comp(apps) == root)
            .count();
        let p_vstar = faces
            .iter()
            .zip(&face_apps)
            .filter(|(t, apps)| t.cyclic && thread_comp(apps) == root)
            .count();
        let chi = p_v as i64 - n_arcs + n_faces;
        let b = walk_arc
            .iter()
            .filter(|arc| roots[arc.0] == root)
            .count();
        let two_g = 2 - chi - b as i64;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(SurfaceError::BadGenus);
        }
        let genus = (two_g / 2) as usize;
        total_genus += genus;
        components.push(SurfaceComponent {
            arcs,
            euler_characteristic: chi,
            genus,
            boundary_components: b,
            punctures_v: p_v,
            punctures_vstar: p_vstar,
        });
    }

    let euler_characteristic = punctures_v as i64 - q.vertex_count() as i64 + faces.len() as i64;
    Ok(DissectedSurface {
        pair: pair.clone(),
        v_fans: fans,
        faces,
        end_assignment,
        euler_characteristic,
        genus: total_genus,
        boundary_components: walks.len(),
        boundary_walks: walks,
        punctures_v,
        punctures_vstar,
        components,
    })
}

/// The pair with the complementary relation set: every composable length-2
/// path not in `Z`.
pub fn dual(pair: &LocallyGentlePair) -> LocallyGentlePair {
    let q = pair.quiver();
    let mut relations = Vec::new();
    for b in q.arrow_ids() {
        for a in q.in_arrows(q.tail(b)) {
            if !pair.in_z(b, a) {
                relations.push((q.arrow(b).name.clone(), q.arrow(a).name.clone()));
            }
        }
    }
    validate_locally_gentle(q.clone(), &relations)
        .expect("complement of a locally gentle relation set is locally gentle")
}

/// The dual arcs indexed by relational vertices.
pub fn relational_dual_arcs(pair: &LocallyGentlePair) -> Vec<VertexId> {
    pair.relational_vertices()
}

/// A face cut out by the dissection together with the relational dual
/// arcs, bounded by two consecutive arcs and carrying one arrow's label.
#[derive(Clone, Debug)]
pub struct Type2Face {
    pub arrow: ArrowId,
    pub arcs: (VertexId, VertexId),
    pub label: AutomorphismValue,
}

/// A face with a single bounding arc and no label.
#[derive(Clone, Debug)]
pub struct Type1Face {
    pub arc: VertexId,
}

/// The dissection refined by the relational dual arcs, with each two-arc
/// face labeled by its arrow's automorphism.
#[derive(Clone, Debug)]
pub struct LabeledTiling {
    pub surface: DissectedSurface,
    pub rstar: Vec<VertexId>,
    type2: Vec<Type2Face>,
    type1: Vec<Type1Face>,
    identity: AutomorphismValue,
}

impl LabeledTiling {
    /// The face carrying `arrow`; total on arrows by construction.
    pub fn arrow_face(&self, arrow: ArrowId) -> &Type2Face {
        &self.type2[arrow.0]
    }

    pub fn face_label(&self, arrow: ArrowId) -> &AutomorphismValue {
        &self.type2[arrow.0].label
    }

    pub fn type2_faces(&self) -> &[Type2Face] {
        &self.type2
    }

    pub fn type1_faces(&self) -> &[Type1Face] {
        &self.type1
    }
}

/// Refines the faces of the surface along the relational dual arcs and
/// labels each resulting two-arc face with `sigma` of its arrow.
pub fn labeled_tiling(
    pair: &LocallyGentlePair,
    sigma: &Sigma,
) -> Result<LabeledTiling, SurfaceError> {
    let q = pair.quiver();
    let surface = build_surface(pair)?;
    let rstar = relational_dual_arcs(pair);
    let mut type2 = Vec::with_capacity(q.arrow_count());
    for a in q.arrow_ids() {
        type2.push(Type2Face {
            arrow: a,
            arcs: (q.tail(a), q.head(a)),
            label: sigma.get(a)?.clone(),
        });
    }
    // Single-arc faces: empty faces stay whole; cutting a linear face whose
    // extreme bounding arc is relational leaves a sliver with one arc.
    let relational = |v: VertexId| !pair.relations_through(v).is_empty();
    let mut type1 = Vec::new();
    for t in surface.faces() {
        match (&t.anchor, t.arrows.is_empty(), t.cyclic) {
            (Some((arc, _)), true, _) => type1.push(Type1Face { arc: *arc }),
            (None, false, false) => {
                let first = q.tail(t.arrows[0]);
                let last = q.head(*t.arrows.last().unwrap());
                if relational(first) {
                    type1.push(Type1Face { arc: first });
                }
                if relational(last) {
                    type1.push(Type1Face { arc: last });
                }
            }
            _ => {}
        }
    }
    Ok(LabeledTiling {
        surface,
        rstar,
        type2,
        type1,
        identity: sigma.identity_value(),
    })
}

/// Semilinearity of a word read through the tiling's face labels: the
/// identity at place 0, then each direct letter composes the inverse label
/// of its face, each inverse letter the label itself. For a band the last
/// place closes the period.
pub fn arc_semilinearity(
    tiling: &LabeledTiling,
    word: &Word,
) -> Result<Vec<AutomorphismValue>, SurfaceError> {
    let pair = tiling.surface.pair();
    if !is_admissible(pair, word) {
        return Err(SurfaceError::InadmissibleWord);
    }
    let mut acc = tiling.identity.clone();
    let mut out = vec![acc.clone()];
    for letter in word.letters() {
        let label = tiling.face_label(letter.arrow);
        acc = if letter.direct {
            label.invert().compose(&acc)?
        } else {
            label.compose(&acc)?
        };
        out.push(acc.clone());
    }
    Ok(out)
}

/// Surface type of one split piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitClass {
    Polygon,
    Annulus,
    OncePuncturedDisk,
}

impl SplitClass {
    pub fn name(&self) -> &'static str {
        match self {
            SplitClass::Polygon => "polygon",
            SplitClass::Annulus => "annulus",
            SplitClass::OncePuncturedDisk => "once-punctured-disk",
        }
    }

    pub fn from_component(class: ComponentClass) -> Self {
        match class {
            ComponentClass::LineA => SplitClass::Polygon,
            ComponentClass::CycleMixed => SplitClass::Annulus,
            ComponentClass::CycleEquioriented => SplitClass::OncePuncturedDisk,
        }
    }
}

/// One piece of the split: a connected excision component with its own
/// surface.
#[derive(Clone, Debug)]
pub struct SplitPiece {
    pub pair: LocallyGentlePair,
    pub surface: DissectedSurface,
    pub class: SplitClass,
    pub component_class: ComponentClass,
    /// Names of the original arrows living on this piece.
    pub arrows: Vec<String>,
}

/// Cuts the surface along the relational dual arcs: the pieces are the
/// surfaces of the connected excision components.
pub fn split(pair: &LocallyGentlePair) -> Result<Vec<SplitPiece>, SurfaceError> {
    let exc = excision(pair)?;
    let q = exc.pair.quiver();
    let mut out = Vec::new();
    for component in &exc.components {
        let sub = extract_component(q, &component.vertices);
        let piece_pair = validate_locally_gentle(sub, &[])
            .expect("relation-free components are locally gentle");
        let surface = build_surface(&piece_pair)?;
        out.push(SplitPiece {
            pair: piece_pair,
            surface,
            class: SplitClass::from_component(component.class),
            component_class: component.class,
            arrows: component
                .arrows
                .iter()
                .map(|&a| q.arrow(a).name.clone())
                .collect(),
        });
    }
    Ok(out)
}
