//! The levee surgery at a relational vertex and the iterated excision that
//! removes every relation, leaving a disjoint union of line and cycle
//! quivers.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::quiver::{
    classify_vertex, validate_locally_gentle, ArrowId, LocallyGentlePair, Quiver, VertexClass,
    VertexId,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ZembykError {
    #[error("vertex `{0}` is not relational")]
    NotRelational(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("component is neither a path nor a cycle (internal error)")]
    MalformedComponent,
    #[error("vertex `{0}` is not relational at its turn in the excision order")]
    BadOrder(String),
}

/// Result of splitting one relational vertex into a sharp and a flat copy.
#[derive(Clone, Debug)]
pub struct LeveeResult {
    pub pair: LocallyGentlePair,
    pub sharp: String,
    pub flat: String,
    /// Original arrow name to levee arrow name. Arrow names are preserved,
    /// so this is the identity correspondence, recorded explicitly.
    pub arrow_map: Vec<(String, String)>,
}

fn fresh_name(base: String, taken: &[String]) -> String {
    if !taken.contains(&base) {
        return base;
    }
    let mut k = 2;
    loop {
        let cand = format!("{base}{k}");
        if !taken.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Splits the pair at a relational vertex `v`.
///
/// The sharp copy receives the tail of the outgoing relation witness `b`
/// and the head of the bypass incoming arrow `c`; the flat copy receives
/// the head of `a` and the tail of `d`. Relations through `v` are dropped.
pub fn levee(pair: &LocallyGentlePair, v: VertexId) -> Result<LeveeResult, ZembykError> {
    let q = pair.quiver();
    let class = classify_vertex(pair, v);
    let (b, a, c, d) = match class {
        VertexClass::NonRelational => {
            return Err(ZembykError::NotRelational(q.vertex_name(v).to_string()))
        }
        VertexClass::Stream { outgoing, incoming } => (outgoing, incoming, None, None),
        VertexClass::Tributary {
            outgoing,
            incoming,
            bypass_in,
        } => (outgoing, incoming, Some(bypass_in), None),
        VertexClass::Distributary {
            outgoing,
            incoming,
            bypass_out,
        } => (outgoing, incoming, None, Some(bypass_out)),
        VertexClass::Quadbutary {
            outgoing,
            incoming,
            bypass_in,
            bypass_out,
        } => (outgoing, incoming, Some(bypass_in), Some(bypass_out)),
    };

    let existing: Vec<String> = q.vertex_names().to_vec();
    let vname = q.vertex_name(v).to_string();
    let sharp = fresh_name(format!("{vname}#"), &existing);
    let mut taken = existing.clone();
    taken.push(sharp.clone());
    let flat = fresh_name(format!("{vname}b"), &taken);

    let mut vertices: Vec<String> = Vec::with_capacity(q.vertex_count() + 1);
    for u in q.vertex_ids() {
        if u == v {
            vertices.push(sharp.clone());
            vertices.push(flat.clone());
        } else {
            vertices.push(q.vertex_name(u).to_string());
        }
    }

    let arrows: Vec<(String, String, String)> = q
        .arrow_ids()
        .map(|x| {
            let arr = q.arrow(x);
            let mut tail = q.vertex_name(arr.tail).to_string();
            let mut head = q.vertex_name(arr.head).to_string();
            if arr.tail == v {
                tail = if x == b {
                    sharp.clone()
                } else {
                    debug_assert_eq!(Some(x), d);
                    flat.clone()
                };
            }
            if arr.head == v {
                head = if x == a {
                    flat.clone()
                } else {
                    debug_assert_eq!(Some(x), c);
                    sharp.clone()
                };
            }
            (arr.name.clone(), tail, head)
        })
        .collect();

    let quiver = Quiver::new(vertices, arrows).expect("levee names are fresh");
    let relations: Vec<(String, String)> = pair
        .relations()
        .iter()
        .filter(|r| q.tail(r.outer) != v)
        .map(|r| (q.arrow(r.outer).name.clone(), q.arrow(r.inner).name.clone()))
        .collect();
    let pair = validate_locally_gentle(quiver, &relations)
        .expect("levee of a locally gentle pair is locally gentle");
    let arrow_map = q
        .arrows()
        .iter()
        .map(|a| (a.name.clone(), a.name.clone()))
        .collect();
    Ok(LeveeResult {
        pair,
        sharp,
        flat,
        arrow_map,
    })
}

/// Shape of a connected relation-free component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentClass {
    /// Underlying graph is a path (possibly a single vertex).
    LineA,
    /// Underlying cycle with all arrows oriented the same way around.
    CycleEquioriented,
    /// Underlying cycle with mixed arrow orientations.
    CycleMixed,
}

impl ComponentClass {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentClass::LineA => "line",
            ComponentClass::CycleEquioriented => "cycle-equioriented",
            ComponentClass::CycleMixed => "cycle-mixed",
        }
    }
}

/// One connected component of an excision output.
#[derive(Clone, Debug)]
pub struct Component {
    pub vertices: Vec<VertexId>,
    pub arrows: Vec<ArrowId>,
    pub class: ComponentClass,
}

/// The full excision: levees iterated until no relations remain.
#[derive(Clone, Debug)]
pub struct ExcisionResult {
    /// The excised pair; its relation set is empty.
    pub pair: LocallyGentlePair,
    /// Original vertex name to the one or two vertex names replacing it.
    pub vertex_map: Vec<(String, Vec<String>)>,
    /// Original arrow name to excised arrow name (names are preserved).
    pub arrow_map: Vec<(String, String)>,
    pub components: Vec<Component>,
}

/// Classifies a connected relation-free quiver as a line or a cycle.
pub fn classify_component(q: &Quiver) -> Result<ComponentClass, ZembykError> {
    let n = q.vertex_count();
    let m = q.arrow_count();
    if n == 0 {
        return Err(ZembykError::MalformedComponent);
    }
    let mut degree = vec![0usize; n];
    for a in q.arrows() {
        degree[a.tail.0] += 1;
        degree[a.head.0] += 1;
    }
    if q.undirected_components().len() != 1 {
        return Err(ZembykError::MalformedComponent);
    }
    if m + 1 == n && degree.iter().all(|&d| d <= 2) {
        return Ok(ComponentClass::LineA);
    }
    if m == n && degree.iter().all(|&d| d == 2) {
        // Equioriented means every vertex has directed in- and out-degree 1.
        let equi = q
            .vertex_ids()
            .all(|v| q.in_arrows(v).len() == 1 && q.out_arrows(v).len() == 1);
        return Ok(if equi {
            ComponentClass::CycleEquioriented
        } else {
            ComponentClass::CycleMixed
        });
    }
    Err(ZembykError::MalformedComponent)
}

/// Extracts a component of `q` as a standalone quiver, preserving names.
pub fn extract_component(q: &Quiver, vertices: &[VertexId]) -> Quiver {
    let vset: Vec<usize> = vertices.iter().map(|v| v.0).collect();
    let names: Vec<String> = vertices
        .iter()
        .map(|&v| q.vertex_name(v).to_string())
        .collect();
    let arrows: Vec<(String, String, String)> = q
        .arrows()
        .iter()
        .filter(|a| vset.contains(&a.tail.0))
        .map(|a| {
            (
                a.name.clone(),
                q.vertex_name(a.tail).to_string(),
                q.vertex_name(a.head).to_string(),
            )
        })
        .collect();
    Quiver::new(names, arrows).expect("component names are unique")
}

fn excise_in_order(
    pair: &LocallyGentlePair,
    order: Option<&[String]>,
) -> Result<ExcisionResult, ZembykError> {
    let mut vertex_map: BTreeMap<String, Vec<String>> = pair
        .quiver()
        .vertex_ids()
        .map(|v| {
            let name = pair.quiver().vertex_name(v).to_string();
            (name.clone(), vec![name])
        })
        .collect();
    let original_order: Vec<String> = pair.quiver().vertex_names().to_vec();
    let arrow_map: Vec<(String, String)> = pair
        .quiver()
        .arrows()
        .iter()
        .map(|a| (a.name.clone(), a.name.clone()))
        .collect();

    let mut current = pair.clone();
    let mut step = 0usize;
    while !current.relations().is_empty() {
        let v = match order {
            Some(names) => {
                let name = names.get(step).ok_or_else(|| {
                    ZembykError::BadOrder("order exhausted before Z emptied".into())
                })?;
                current
                    .quiver()
                    .vertex_id(name)
                    .ok_or_else(|| ZembykError::UnknownVertex(name.clone()))?
            }
            None => *current
                .relational_vertices()
                .first()
                .expect("nonempty Z has a relational vertex"),
        };
        let vname = current.quiver().vertex_name(v).to_string();
        let result = levee(&current, v).map_err(|e| match e {
            ZembykError::NotRelational(n) => ZembykError::BadOrder(n),
            other => other,
        })?;
        vertex_map.insert(vname, vec![result.sharp.clone(), result.flat.clone()]);
        current = result.pair;
        step += 1;
    }

    let q = current.quiver();
    let components = q
        .undirected_components()
        .into_iter()
        .map(|vertices| {
            let sub = extract_component(q, &vertices);
            let class = classify_component(&sub)?;
            let arrows: Vec<ArrowId> = q
                .arrow_ids()
                .filter(|&a| vertices.contains(&q.tail(a)))
                .collect();
            Ok(Component {
                vertices,
                arrows,
                class,
            })
        })
        .collect::<Result<Vec<_>, ZembykError>>()?;

    let vertex_map = original_order
        .into_iter()
        .map(|name| {
            let images = vertex_map.remove(&name).unwrap();
            (name, images)
        })
        .collect();
    Ok(ExcisionResult {
        pair: current,
        vertex_map,
        arrow_map,
        components,
    })
}

/// Iterates levees over relational vertices (declaration order) until the
/// relation set is empty.
pub fn excision(pair: &LocallyGentlePair) -> Result<ExcisionResult, ZembykError> {
    excise_in_order(pair, None)
}

/// Excision processing the given original vertex names in the given order.
/// The outcome is quiver-isomorphic regardless of the order.
pub fn excision_with_order(
    pair: &LocallyGentlePair,
    order: &[String],
) -> Result<ExcisionResult, ZembykError> {
    excise_in_order(pair, Some(order))
}

/// Tests whether two quivers sharing arrow names differ only by a vertex
/// renaming compatible with every arrow's endpoints.
pub fn quiver_isomorphic_by_arrows(q1: &Quiver, q2: &Quiver) -> bool {
    if q1.vertex_count() != q2.vertex_count() || q1.arrow_count() != q2.arrow_count() {
        return false;
    }
    let mut forward: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut backward: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut bind = |x: VertexId, y: VertexId| -> bool {
        if let Some(&prev) = forward.get(&x) {
            if prev != y {
                return false;
            }
        }
        if let Some(&prev) = backward.get(&y) {
            if prev != x {
                return false;
            }
        }
        forward.insert(x, y);
        backward.insert(y, x);
        true
    };
    for a1 in q1.arrows() {
        let a2 = match q2.arrow_id(&a1.name) {
            Some(id) => q2.arrow(id),
            None => return false,
        };
        if !bind(a1.tail, a2.tail) || !bind(a1.head, a2.head) {
            return false;
        }
    }
    // Isolated vertices must match by name.
    for v in q1.vertex_ids() {
        if let std::collections::btree_map::Entry::Vacant(e) = forward.entry(v) {
            match q2.vertex_id(q1.vertex_name(v)) {
                Some(w) if !backward.contains_key(&w) => {
                    e.insert(w);
                    backward.insert(w, v);
                }
                _ => return false,
            }
        }
    }
    forward.len() == q1.vertex_count()
}

/// The excised quiver is acyclic iff the pair is gentle; exposed for
/// cross-checks.
pub fn is_acyclic(q: &Quiver) -> bool {
    let n = q.vertex_count();
    let mut state = vec![0u8; n];
    fn visit(q: &Quiver, v: usize, state: &mut [u8]) -> bool {
        state[v] = 1;
        for a in q.out_arrows(VertexId(v)) {
            let w = q.head(a).0;
            if state[w] == 1 {
                return false;
            }
            if state[w] == 0 && !visit(q, w, state) {
                return false;
            }
        }
        state[v] = 2;
        true
    }
    for v in 0..n {
        if state[v] == 0 && !visit(q, v, &mut state) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex24, ex24_gentle, running_example};
    use crate::quiver::{is_gentle, random_locally_gentle};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arrow_endpoints(pair: &LocallyGentlePair, name: &str) -> (String, String) {
        let q = pair.quiver();
        let a = q.arrow_id(name).unwrap();
        (
            q.vertex_name(q.tail(a)).to_string(),
            q.vertex_name(q.head(a)).to_string(),
        )
    }

    #[test]
    fn levee_of_gentle_loop_pair_is_a_line() {
        let pair = ex24_gentle();
        let v = pair.quiver().vertex_id("2").unwrap();
        let res = levee(&pair, v).unwrap();
        assert_eq!(res.sharp, "2#");
        assert_eq!(res.flat, "2b");
        assert!(res.pair.relations().is_empty());
        assert_eq!(
            arrow_endpoints(&res.pair, "alpha"),
            ("1".to_string(), "2#".to_string())
        );
        assert_eq!(
            arrow_endpoints(&res.pair, "beta"),
            ("2#".to_string(), "2b".to_string())
        );
        assert_eq!(
            arrow_endpoints(&res.pair, "nu"),
            ("2b".to_string(), "3".to_string())
        );
    }

    #[test]
    fn levee_of_locally_gentle_loop_pair_keeps_the_loop() {
        // The fixed sharp/flat rule puts the loop at 2b and the line
        // through 2#; the opposite labelling is the same quiver up to
        // isomorphism.
        let pair = ex24(&[("beta", "alpha"), ("nu", "beta")]);
        let v = pair.quiver().vertex_id("2").unwrap();
        let res = levee(&pair, v).unwrap();
        assert!(res.pair.relations().is_empty());
        assert_eq!(
            arrow_endpoints(&res.pair, "alpha"),
            ("1".to_string(), "2#".to_string())
        );
        assert_eq!(
            arrow_endpoints(&res.pair, "nu"),
            ("2#".to_string(), "3".to_string())
        );
        assert_eq!(
            arrow_endpoints(&res.pair, "beta"),
            ("2b".to_string(), "2b".to_string())
        );
        let expected = Quiver::new(
            vec!["1", "2s", "2f", "3"],
            vec![
                ("alpha", "1", "2s"),
                ("beta", "2f", "2f"),
                ("nu", "2s", "3"),
            ],
        )
        .unwrap();
        assert!(quiver_isomorphic_by_arrows(res.pair.quiver(), &expected));
    }

    #[test]
    fn levee_at_stream_vertex() {
        let pair = running_example();
        let v = pair.quiver().vertex_id("4").unwrap();
        let res = levee(&pair, v).unwrap();
        // epsilon leaves from 4#, zeta now ends at 4b, and exactly the
        // relations whose middle vertex is not 4 survive.
        assert_eq!(
            arrow_endpoints(&res.pair, "epsilon"),
            ("4#".to_string(), "5".to_string())
        );
        assert_eq!(
            arrow_endpoints(&res.pair, "zeta"),
            ("3".to_string(), "4b".to_string())
        );
        let q = res.pair.quiver();
        let surviving: Vec<(String, String)> = res
            .pair
            .relations()
            .iter()
            .map(|r| (q.arrow(r.outer).name.clone(), q.arrow(r.inner).name.clone()))
            .collect();
        assert_eq!(
            surviving,
            vec![
                ("beta".to_string(), "delta".to_string()),
                ("delta".to_string(), "epsilon".to_string()),
                ("zeta".to_string(), "beta".to_string()),
            ]
        );
    }

    #[test]
    fn levee_names_avoid_clashes() {
        // A vertex literally named "2#" forces a numeric suffix.
        let q = Quiver::new(
            vec!["1", "2", "2#", "3"],
            vec![("a", "1", "2"), ("b", "2", "3"), ("c", "2#", "1")],
        )
        .unwrap();
        let pair = validate_locally_gentle(
            q,
            &[("b".to_string(), "a".to_string())],
        )
        .unwrap();
        let v = pair.quiver().vertex_id("2").unwrap();
        let res = levee(&pair, v).unwrap();
        assert_eq!(res.sharp, "2#2");
        assert_eq!(res.flat, "2b");
        assert!(res.pair.quiver().vertex_id("2#").is_some());
    }

    #[test]
    fn levee_requires_relational_vertex() {
        let pair = running_example();
        let v = pair.quiver().vertex_id("1").unwrap();
        assert!(matches!(
            levee(&pair, v),
            Err(ZembykError::NotRelational(_))
        ));
    }

    #[test]
    fn levee_counts_and_classes() {
        // One more vertex, strictly fewer relations, and the new vertices
        // are not relational.
        let pair = running_example();
        for v in pair.relational_vertices() {
            let res = levee(&pair, v).unwrap();
            assert_eq!(
                res.pair.quiver().vertex_count(),
                pair.quiver().vertex_count() + 1
            );
            assert!(res.pair.relations().len() < pair.relations().len());
            for name in [&res.sharp, &res.flat] {
                let class =
                    crate::quiver::classify_vertex_by_name(&res.pair, name).unwrap();
                assert_eq!(class, VertexClass::NonRelational);
            }
        }
    }

    #[test]
    fn excision_of_running_example() {
        let pair = running_example();
        let res = excision(&pair).unwrap();
        assert!(res.pair.relations().is_empty());
        assert_eq!(res.pair.quiver().vertex_count(), 10);
        assert_eq!(res.components.len(), 4);
        let q = res.pair.quiver();
        let mut described: Vec<(Vec<String>, Vec<String>, ComponentClass)> = res
            .components
            .iter()
            .map(|c| {
                (
                    c.vertices
                        .iter()
                        .map(|&v| q.vertex_name(v).to_string())
                        .collect(),
                    c.arrows
                        .iter()
                        .map(|&a| q.arrow(a).name.clone())
                        .collect(),
                    c.class,
                )
            })
            .collect();
        described.sort();
        // The cycle keeps alpha, beta, nu; the three lines carry zeta,
        // delta, and epsilon-eta. Sharp receives the tail of the relation
        // witness at each split vertex.
        assert_eq!(
            described,
            vec![
                (
                    vec!["1".to_string(), "2#".to_string(), "3b".to_string()],
                    vec!["alpha".to_string(), "beta".to_string(), "nu".to_string()],
                    ComponentClass::CycleEquioriented
                ),
                (
                    vec!["2b".to_string(), "5#".to_string()],
                    vec!["delta".to_string()],
                    ComponentClass::LineA
                ),
                (
                    vec!["3#".to_string(), "4b".to_string()],
                    vec!["zeta".to_string()],
                    ComponentClass::LineA
                ),
                (
                    vec!["4#".to_string(), "5b".to_string(), "6".to_string()],
                    vec!["epsilon".to_string(), "eta".to_string()],
                    ComponentClass::LineA
                ),
            ]
        );
    }

    #[test]
    fn excision_without_relations_is_identity() {
        let q = Quiver::new(vec!["1", "2"], vec![("a", "1", "2")]).unwrap();
        let pair = validate_locally_gentle(q, &[]).unwrap();
        let res = excision(&pair).unwrap();
        assert!(quiver_isomorphic_by_arrows(
            res.pair.quiver(),
            pair.quiver()
        ));
        assert_eq!(res.components.len(), 1);
        assert_eq!(res.components[0].class, ComponentClass::LineA);
    }

    #[test]
    fn excision_of_gentle_loop_pair_is_one_line() {
        let res = excision(&ex24_gentle()).unwrap();
        assert_eq!(res.components.len(), 1);
        assert_eq!(res.components[0].class, ComponentClass::LineA);
        assert_eq!(res.pair.quiver().vertex_count(), 4);
    }

    #[test]
    fn component_classification_cases() {
        let line = Quiver::new(vec!["1"], vec![]).unwrap();
        assert_eq!(classify_component(&line).unwrap(), ComponentClass::LineA);
        let mixed = Quiver::new(
            vec!["1", "2"],
            vec![("a", "1", "2"), ("b", "1", "2")],
        )
        .unwrap();
        assert_eq!(
            classify_component(&mixed).unwrap(),
            ComponentClass::CycleMixed
        );
        let equi = Quiver::new(
            vec!["1", "2"],
            vec![("a", "1", "2"), ("b", "2", "1")],
        )
        .unwrap();
        assert_eq!(
            classify_component(&equi).unwrap(),
            ComponentClass::CycleEquioriented
        );
        let loop_q = Quiver::new(vec!["1"], vec![("a", "1", "1")]).unwrap();
        assert_eq!(
            classify_component(&loop_q).unwrap(),
            ComponentClass::CycleEquioriented
        );
        let disconnected = Quiver::new(vec!["1", "2"], vec![]).unwrap();
        assert!(classify_component(&disconnected).is_err());
    }

    #[test]
    fn excision_order_independence_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..60u64 {
            let n_v = 2 + (seed as usize % 8);
            let n_a = (seed as usize * 5) % (2 * n_v);
            let pair = match random_locally_gentle(seed, n_v, n_a) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let relational: Vec<String> = pair
                .relational_vertices()
                .iter()
                .map(|&v| pair.quiver().vertex_name(v).to_string())
                .collect();
            let base = excision(&pair).unwrap();
            for _ in 0..3 {
                let mut order = relational.clone();
                order.shuffle(&mut rng);
                let other = excision_with_order(&pair, &order).unwrap();
                assert!(quiver_isomorphic_by_arrows(
                    base.pair.quiver(),
                    other.pair.quiver()
                ));
            }
        }
    }

    #[test]
    fn gentle_iff_excision_acyclic_sampled() {
        for seed in 0..60u64 {
            let n_v = 1 + (seed as usize % 8);
            let n_a = (seed as usize * 7) % (2 * n_v + 1);
            if let Ok(pair) = random_locally_gentle(seed, n_v, n_a) {
                let res = excision(&pair).unwrap();
                assert_eq!(is_gentle(&pair), is_acyclic(res.pair.quiver()));
            }
        }
    }

    #[test]
    fn vertex_map_splits_exactly_the_relational_vertices() {
        let pair = running_example();
        let res = excision(&pair).unwrap();
        for (name, images) in &res.vertex_map {
            let v = pair.quiver().vertex_id(name).unwrap();
            let relational = classify_vertex(&pair, v).is_relational();
            assert_eq!(images.len(), if relational { 2 } else { 1 });
        }
        assert_eq!(
            res.pair.quiver().vertex_count(),
            pair.quiver().vertex_count() + pair.relational_vertices().len()
        );
    }
}
