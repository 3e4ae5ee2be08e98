//! Embedding of a finite-dimensional gentle algebra into the hereditary
//! algebra of its excision, and the three-part nodal verification:
//! injectivity on the path basis, equality of radicals, and tensor length
//! at most two for every simple module.

use thiserror::Error;

use crate::algebra::{idempotent_and_radical_basis, Algebra, AlgebraElement, AlgebraError};
use crate::quiver::{is_gentle, LocallyGentlePair, Path};
use crate::zembyk::{excision, ExcisionResult, ZembykError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NodalError {
    #[error("pair is not gentle; the nodal construction needs a finite-dimensional algebra")]
    NotGentle,
    #[error("path does not survive in the excised quiver (internal error)")]
    BrokenImage,
    #[error(transparent)]
    Zembyk(#[from] ZembykError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Hereditariness of the codomain is taken as given, not verified; the
/// report carries this note.
pub const HEREDITY_NOTE: &str =
    "heredity of the excised path algebra is assumed (acyclic quiver), not re-verified";

/// The gentle pair together with its excision, ready to embed elements.
#[derive(Clone, Debug)]
pub struct NodalEmbedding {
    pair: LocallyGentlePair,
    excision: ExcisionResult,
}

/// Report of the three nodal conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalReport {
    pub injective: bool,
    pub rad_equal: bool,
    pub rad_dim_lambda: u64,
    pub rad_dim_gamma: u64,
    /// Per original vertex: number of excised vertices whose idempotent
    /// meets the embedded idempotent. Must be at most 2 everywhere.
    pub tensor_lengths: Vec<(String, usize)>,
    pub verdict: bool,
}

impl NodalEmbedding {
    pub fn new(pair: &LocallyGentlePair) -> Result<Self, NodalError> {
        if !is_gentle(pair) {
            return Err(NodalError::NotGentle);
        }
        let excision = excision(pair)?;
        Ok(NodalEmbedding {
            pair: pair.clone(),
            excision,
        })
    }

    pub fn pair(&self) -> &LocallyGentlePair {
        &self.pair
    }

    pub fn excision(&self) -> &ExcisionResult {
        &self.excision
    }

    /// Images of a basis path: a trivial path maps to the idempotents of
    /// its one or two excised vertices, a nontrivial path to the same
    /// arrow sequence read in the excised quiver.
    pub fn embed_path(&self, path: &Path) -> Result<Vec<Path>, NodalError> {
        let q = self.pair.quiver();
        let gq = self.excision.pair.quiver();
        match path {
            Path::Trivial(v) => {
                let name = q.vertex_name(*v);
                let images = self
                    .excision
                    .vertex_map
                    .iter()
                    .find(|(orig, _)| orig == name)
                    .map(|(_, im)| im.clone())
                    .ok_or(NodalError::BrokenImage)?;
                images
                    .iter()
                    .map(|im| {
                        gq.vertex_id(im)
                            .map(Path::Trivial)
                            .ok_or(NodalError::BrokenImage)
                    })
                    .collect()
            }
            Path::Arrows(arrows) => {
                let mapped: Vec<_> = arrows
                    .iter()
                    .map(|&a| {
                        gq.arrow_id(&q.arrow(a).name)
                            .ok_or(NodalError::BrokenImage)
                    })
                    .collect::<Result<_, _>>()?;
                // Admissible paths stay composable after the excision.
                for w in mapped.windows(2) {
                    if gq.head(w[0]) != gq.tail(w[1]) {
                        return Err(NodalError::BrokenImage);
                    }
                }
                Ok(vec![Path::Arrows(mapped)])
            }
        }
    }

    /// Embeds an element term by term, coefficients unchanged.
    pub fn embed_element(
        &self,
        source: &Algebra,
        target: &Algebra,
        x: &AlgebraElement,
    ) -> Result<AlgebraElement, NodalError> {
        debug_assert_eq!(source.field(), target.field());
        let mut terms = Vec::new();
        for (path, coeff) in x.terms() {
            for image in self.embed_path(path)? {
                terms.push((image, coeff.clone()));
            }
        }
        Ok(target.element(terms)?)
    }
}

/// Runs the three nodal checks for a gentle pair. The verdict does not
/// depend on the automorphism assignment: the excised algebra reuses each
/// arrow's automorphism, so all three conditions are path combinatorics.
pub fn check_nodal(pair: &LocallyGentlePair) -> Result<NodalReport, NodalError> {
    let embedding = NodalEmbedding::new(pair)?;
    let q = pair.quiver();
    let gamma = &embedding.excision.pair;

    let (idempotents, radical) = idempotent_and_radical_basis(pair)?;
    let (_, gamma_radical) = idempotent_and_radical_basis(gamma)?;

    // Condition 1: distinct basis elements map to supports that never
    // collide. Nontrivial paths map to single distinct paths; trivial
    // paths map to disjoint idempotent sets.
    let mut injective = true;
    let mut nontrivial_images = Vec::new();
    for p in &radical {
        let images = embedding.embed_path(p)?;
        if images.len() != 1 {
            injective = false;
            break;
        }
        nontrivial_images.push(images[0].clone());
    }
    nontrivial_images.sort();
    let before = nontrivial_images.len();
    nontrivial_images.dedup();
    if nontrivial_images.len() != before {
        injective = false;
    }
    let mut idempotent_images: Vec<Path> = Vec::new();
    for p in &idempotents {
        idempotent_images.extend(embedding.embed_path(p)?);
    }
    idempotent_images.sort();
    let before = idempotent_images.len();
    idempotent_images.dedup();
    if idempotent_images.len() != before {
        injective = false;
    }

    // Condition 2: the embedded radical basis must be a basis of the
    // excised radical. Images are distinct paths of positive length, so
    // dimension equality suffices.
    let rad_dim_lambda = radical.len() as u64;
    let rad_dim_gamma = gamma_radical.len() as u64;
    let rad_equal = injective && rad_dim_lambda == rad_dim_gamma;

    // Condition 3: tensor length of each simple module, reduced to the
    // number of excised idempotents meeting the embedded one.
    let mut tensor_lengths = Vec::new();
    let mut lengths_ok = true;
    for v in q.vertex_ids() {
        let images = embedding.embed_path(&Path::Trivial(v))?;
        let len = images.len();
        if len > 2 {
            lengths_ok = false;
        }
        tensor_lengths.push((q.vertex_name(v).to_string(), len));
    }

    let verdict = injective && rad_equal && lengths_ok;
    Ok(NodalReport {
        injective,
        rad_equal,
        rad_dim_lambda,
        rad_dim_gamma,
        tensor_lengths,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::fixtures::{ex24_gentle, running_example};
    use crate::galois::{FiniteField, Sigma};
    use crate::quiver::{
        classify_vertex, random_locally_gentle, validate_locally_gentle, ArrowId, Quiver,
    };
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn embeds_idempotents_and_paths() {
        let pair = ex24_gentle();
        let embedding = NodalEmbedding::new(&pair).unwrap();
        let q = pair.quiver();
        let gq = embedding.excision().pair.quiver();
        // Relational vertex 2 splits in two.
        let images = embedding
            .embed_path(&Path::Trivial(q.vertex_id("2").unwrap()))
            .unwrap();
        let names: Vec<&str> = images
            .iter()
            .map(|p| match p {
                Path::Trivial(v) => gq.vertex_name(*v),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(names, vec!["2#", "2b"]);
        // beta*alpha survives as a path of the excised line.
        let ba = Path::Arrows(vec![
            q.arrow_id("alpha").unwrap(),
            q.arrow_id("beta").unwrap(),
        ]);
        let images = embedding.embed_path(&ba).unwrap();
        assert_eq!(images.len(), 1);
        assert_eq!(images[0].display(gq), "beta*alpha");
    }

    #[test]
    fn embedding_is_multiplicative_on_random_elements() {
        let pair = ex24_gentle();
        let embedding = NodalEmbedding::new(&pair).unwrap();
        let field = FiniteField::new(2, 2, vec![1, 1, 1]).unwrap();
        let mut exps = BTreeMap::new();
        exps.insert(ArrowId(1), 1usize);
        let sigma = Sigma::from_frobenius_exponents(&pair, &exps, 2);
        let source = Algebra::new(pair.clone(), sigma, field.clone()).unwrap();
        // The excised algebra reuses each arrow's automorphism.
        let gamma_pair = embedding.excision().pair.clone();
        let mut gexps = BTreeMap::new();
        gexps.insert(gamma_pair.quiver().arrow_id("beta").unwrap(), 1usize);
        let gsigma = Sigma::from_frobenius_exponents(&gamma_pair, &gexps, 2);
        let target = Algebra::new(gamma_pair, gsigma, field.clone()).unwrap();

        let basis = crate::quiver::admissible_paths(&pair, 3);
        let elems = field.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let pick = |rng: &mut ChaCha8Rng| {
                let mut terms: Vec<(Path, crate::galois::FFElem)> = Vec::new();
                for p in &basis {
                    if rng.gen_bool(0.5) {
                        terms.push((p.clone(), elems[rng.gen_range(0..elems.len())].clone()));
                    }
                }
                source.element(terms).unwrap()
            };
            let x = pick(&mut rng);
            let y = pick(&mut rng);
            let lhs = embedding
                .embed_element(&source, &target, &source.multiply(&x, &y).unwrap())
                .unwrap();
            let rhs = target
                .multiply(
                    &embedding.embed_element(&source, &target, &x).unwrap(),
                    &embedding.embed_element(&source, &target, &y).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn nodal_report_for_gentle_loop_pair() {
        let report = check_nodal(&ex24_gentle()).unwrap();
        assert!(report.injective);
        assert!(report.rad_equal);
        assert_eq!(report.rad_dim_lambda, 6);
        assert_eq!(report.rad_dim_gamma, 6);
        assert_eq!(
            report.tensor_lengths,
            vec![
                ("1".to_string(), 1),
                ("2".to_string(), 2),
                ("3".to_string(), 1)
            ]
        );
        assert!(report.verdict);
    }

    #[test]
    fn non_gentle_pairs_are_rejected() {
        assert_eq!(
            check_nodal(&running_example()).unwrap_err(),
            NodalError::NotGentle
        );
    }

    #[test]
    fn relation_free_pairs_embed_identically() {
        let q = Quiver::new(
            vec!["1", "2", "3"],
            vec![("a", "1", "2"), ("b", "2", "3")],
        )
        .unwrap();
        let pair = validate_locally_gentle(q, &[]).unwrap();
        let report = check_nodal(&pair).unwrap();
        assert!(report.verdict);
        assert!(report.tensor_lengths.iter().all(|(_, l)| *l == 1));
        assert_eq!(report.rad_dim_lambda, report.rad_dim_gamma);
    }

    #[test]
    fn tensor_length_two_exactly_at_relational_vertices() {
        for seed in 0..50u64 {
            let n_v = 1 + (seed as usize % 7);
            let n_a = (seed as usize * 3) % (2 * n_v + 1);
            let Ok(pair) = random_locally_gentle(seed, n_v, n_a) else {
                continue;
            };
            if !is_gentle(&pair) {
                continue;
            }
            let report = check_nodal(&pair).unwrap();
            assert!(report.verdict);
            for (name, len) in &report.tensor_lengths {
                let v = pair.quiver().vertex_id(name).unwrap();
                let relational = classify_vertex(&pair, v).is_relational();
                assert_eq!(*len, if relational { 2 } else { 1 });
            }
        }
    }

    #[test]
    fn gamma_dominates_lambda_in_dimension() {
        for seed in 0..40u64 {
            let n_v = 2 + (seed as usize % 6);
            let n_a = (seed as usize * 5) % (2 * n_v);
            let Ok(pair) = random_locally_gentle(seed, n_v, n_a) else {
                continue;
            };
            if !is_gentle(&pair) {
                continue;
            }
            let embedding = NodalEmbedding::new(&pair).unwrap();
            let dim_lambda =
                crate::quiver::admissible_paths(&pair, pair.quiver().arrow_count()).len();
            let gamma = &embedding.excision().pair;
            let dim_gamma =
                crate::quiver::admissible_paths(gamma, gamma.quiver().arrow_count()).len();
            assert!(dim_gamma >= dim_lambda);
        }
    }
}
