//! Arithmetic in the semilinear locally gentle algebra: the quotient of
//! the semilinear path algebra by the relation ideal, with the admissible
//! paths as a left basis. Scalars pass an arrow at the cost of its
//! automorphism: `a λ = σ_a(λ) a`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::galois::{AutomorphismValue, FFElem, FiniteField, GaloisError, Sigma};
use crate::quiver::{admissible_paths, is_gentle, LocallyGentlePair, Path, VertexId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("pair is not gentle, so the algebra is infinite-dimensional")]
    NotGentle,
    #[error("sigma must be concrete of the field's degree")]
    SigmaNotConcrete,
    #[error("path is not admissible")]
    InadmissiblePath,
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

/// Number of admissible paths, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

/// Counts admissible paths. With a bound, counts paths of length at most
/// the bound; without one, reports `Infinite` exactly when the pair is not
/// gentle.
pub fn dimension(pair: &LocallyGentlePair, up_to: Option<usize>) -> Dimension {
    match up_to {
        Some(bound) => Dimension::Finite(admissible_paths(pair, bound).len() as u64),
        None => {
            if !is_gentle(pair) {
                Dimension::Infinite
            } else {
                let bound = pair.quiver().arrow_count();
                Dimension::Finite(admissible_paths(pair, bound).len() as u64)
            }
        }
    }
}

/// The trivial-path idempotents and the radical basis (admissible paths of
/// positive length). Requires a gentle pair.
pub fn idempotent_and_radical_basis(
    pair: &LocallyGentlePair,
) -> Result<(Vec<Path>, Vec<Path>), AlgebraError> {
    if !is_gentle(pair) {
        return Err(AlgebraError::NotGentle);
    }
    let all = admissible_paths(pair, pair.quiver().arrow_count());
    let (trivial, radical): (Vec<Path>, Vec<Path>) =
        all.into_iter().partition(|p| p.is_empty());
    Ok((trivial, radical))
}

/// An element: a finite left-coefficient combination of admissible paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, FFElem>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &FFElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }
}

/// The algebra context: a gentle or locally gentle pair, a concrete sigma,
/// and the coefficient field.
#[derive(Clone, Debug)]
pub struct Algebra {
    pair: LocallyGentlePair,
    sigma: Sigma,
    field: FiniteField,
}

impl Algebra {
    pub fn new(
        pair: LocallyGentlePair,
        sigma: Sigma,
        field: FiniteField,
    ) -> Result<Self, AlgebraError> {
        if !sigma.is_concrete(field.degree()) {
            return Err(AlgebraError::SigmaNotConcrete);
        }
        Ok(Algebra { pair, sigma, field })
    }

    pub fn pair(&self) -> &LocallyGentlePair {
        &self.pair
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    fn is_admissible_path(&self, path: &Path) -> bool {
        match path {
            Path::Trivial(_) => true,
            Path::Arrows(arrows) => arrows.windows(2).all(|w| {
                self.pair.quiver().head(w[0]) == self.pair.quiver().tail(w[1])
                    && !self.pair.in_z(w[1], w[0])
            }),
        }
    }

    /// Builds an element from `(path, coefficient)` terms, dropping zeros.
    pub fn element(
        &self,
        terms: impl IntoIterator<Item = (Path, FFElem)>,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            if !self.is_admissible_path(&p) {
                return Err(AlgebraError::InadmissiblePath);
            }
            if !self.field.is_zero(&c) {
                let entry = map.entry(p).or_insert_with(|| self.field.zero());
                *entry = self.field.add(entry, &c);
            }
        }
        map.retain(|_, c| !self.field.is_zero(c));
        Ok(AlgebraElement { terms: map })
    }

    pub fn idempotent(&self, v: VertexId) -> AlgebraElement {
        self.element([(Path::Trivial(v), self.field.one())])
            .expect("trivial paths are admissible")
    }

    pub fn one(&self) -> AlgebraElement {
        let terms: Vec<(Path, FFElem)> = self
            .pair
            .quiver()
            .vertex_ids()
            .map(|v| (Path::Trivial(v), self.field.one()))
            .collect();
        self.element(terms).expect("trivial paths are admissible")
    }

    pub fn path_element(&self, path: Path) -> Result<AlgebraElement, AlgebraError> {
        self.element([(path, self.field.one())])
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut terms = x.terms.clone();
        for (p, c) in &y.terms {
            let entry = terms.entry(p.clone()).or_insert_with(|| self.field.zero());
            *entry = self.field.add(entry, c);
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        AlgebraElement { terms }
    }

    pub fn scale(&self, c: &FFElem, x: &AlgebraElement) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (p, k) in &x.terms {
            let prod = self.field.mul(c, k);
            if !self.field.is_zero(&prod) {
                terms.insert(p.clone(), prod);
            }
        }
        AlgebraElement { terms }
    }

    /// The composite automorphism of a path, outermost arrow first.
    fn path_automorphism(&self, path: &Path) -> Result<AutomorphismValue, AlgebraError> {
        let mut acc = AutomorphismValue::identity_frobenius(self.field.degree());
        if let Path::Arrows(arrows) = path {
            for &a in arrows {
                acc = self.sigma.get(a)?.compose(&acc)?;
            }
        }
        Ok(acc)
    }

    /// Concatenation of basis paths: `p * q` is `q` then `p`, zero when the
    /// junction does not compose or the result is inadmissible.
    fn compose_paths(&self, p: &Path, q: &Path) -> Option<Path> {
        let quiver = self.pair.quiver();
        match (p, q) {
            (Path::Trivial(v), Path::Trivial(w)) => (v == w).then_some(Path::Trivial(*v)),
            (Path::Trivial(v), Path::Arrows(_)) => (q.head(quiver) == *v).then(|| q.clone()),
            (Path::Arrows(_), Path::Trivial(w)) => (p.tail(quiver) == *w).then(|| p.clone()),
            (Path::Arrows(pa), Path::Arrows(qa)) => {
                if p.tail(quiver) != q.head(quiver) {
                    return None;
                }
                if self.pair.in_z(pa[0], *qa.last().unwrap()) {
                    return None;
                }
                let mut arrows = qa.clone();
                arrows.extend_from_slice(pa);
                Some(Path::Arrows(arrows))
            }
        }
    }

    /// Bilinear product with the twist rule: the left factor's automorphism
    /// is applied to the right factor's coefficient.
    pub fn multiply(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut terms: BTreeMap<Path, FFElem> = BTreeMap::new();
        for (p, cp) in &x.terms {
            let twist = self.path_automorphism(p)?;
            for (q, cq) in &y.terms {
                if let Some(pq) = self.compose_paths(p, q) {
                    let coeff = self.field.mul(cp, &twist.apply(&self.field, cq)?);
                    let entry = terms.entry(pq).or_insert_with(|| self.field.zero());
                    *entry = self.field.add(entry, &coeff);
                }
            }
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        Ok(AlgebraElement { terms })
    }

    pub fn display(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.terms
            .iter()
            .map(|(p, c)| {
                format!(
                    "{}·{}",
                    self.field.format_element(c),
                    p.display(self.pair.quiver())
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex24_gentle, running_example};
    use crate::galois::Sigma;
    use crate::quiver::{validate_locally_gentle, ArrowId, Quiver};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap as Map;

    fn f4() -> FiniteField {
        FiniteField::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    fn running_algebra_f4() -> Algebra {
        let pair = running_example();
        let mut exps = Map::new();
        exps.insert(pair.quiver().arrow_id("beta").unwrap(), 1usize);
        let sigma = Sigma::from_frobenius_exponents(&pair, &exps, 2);
        Algebra::new(pair, sigma, f4()).unwrap()
    }

    #[test]
    fn idempotents_multiply_orthogonally() {
        let alg = running_algebra_f4();
        let e1 = alg.idempotent(VertexId(0));
        let e2 = alg.idempotent(VertexId(1));
        assert_eq!(alg.multiply(&e1, &e1).unwrap(), e1);
        assert!(alg.multiply(&e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn sum_of_idempotents_is_identity() {
        let alg = running_algebra_f4();
        let one = alg.one();
        let q = alg.pair().quiver().clone();
        let beta = alg
            .path_element(Path::Arrows(vec![q.arrow_id("beta").unwrap()]))
            .unwrap();
        assert_eq!(alg.multiply(&one, &beta).unwrap(), beta);
        assert_eq!(alg.multiply(&beta, &one).unwrap(), beta);
    }

    #[test]
    fn scalar_crosses_arrow_through_frobenius() {
        // beta carries the Frobenius twist: beta * (x e) = (x^2) beta.
        let alg = running_algebra_f4();
        let q = alg.pair().quiver().clone();
        let x = alg.field().generator();
        let e2 = VertexId(1);
        let beta = alg
            .path_element(Path::Arrows(vec![q.arrow_id("beta").unwrap()]))
            .unwrap();
        let scalar = alg.scale(&x, &alg.idempotent(e2));
        let lhs = alg.multiply(&beta, &scalar).unwrap();
        let frob_x = alg.field().frobenius(&x, 1);
        let rhs = alg.scale(&frob_x, &beta);
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, alg.scale(&x, &beta));
    }

    #[test]
    fn relation_products_vanish() {
        let alg = running_algebra_f4();
        let q = alg.pair().quiver().clone();
        let beta = alg
            .path_element(Path::Arrows(vec![q.arrow_id("beta").unwrap()]))
            .unwrap();
        let delta = alg
            .path_element(Path::Arrows(vec![q.arrow_id("delta").unwrap()]))
            .unwrap();
        assert!(alg.multiply(&beta, &delta).unwrap().is_zero());
        // nu then beta is admissible: beta first in traversal order.
        let nu = alg
            .path_element(Path::Arrows(vec![q.arrow_id("nu").unwrap()]))
            .unwrap();
        let prod = alg.multiply(&nu, &beta).unwrap();
        assert_eq!(prod.support_len(), 1);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&ex24_gentle(), None), Dimension::Finite(9));
        assert_eq!(dimension(&running_example(), None), Dimension::Infinite);
        let q = Quiver::new(vec!["v"], vec![]).unwrap();
        let single = validate_locally_gentle(q, &[]).unwrap();
        assert_eq!(dimension(&single, None), Dimension::Finite(1));
        assert_eq!(dimension(&running_example(), Some(1)), Dimension::Finite(13));
    }

    #[test]
    fn radical_basis_examples() {
        let (idem, rad) = idempotent_and_radical_basis(&ex24_gentle()).unwrap();
        assert_eq!(idem.len(), 3);
        assert_eq!(rad.len(), 6);
        // Line on 4 vertices with no relations: 10 paths, 6 of length >= 1.
        let q = Quiver::new(
            vec!["1", "2", "3", "4"],
            vec![("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4")],
        )
        .unwrap();
        let line = validate_locally_gentle(q, &[]).unwrap();
        let (idem, rad) = idempotent_and_radical_basis(&line).unwrap();
        assert_eq!(idem.len(), 4);
        assert_eq!(rad.len(), 6);
        let q = Quiver::new(vec!["v"], vec![]).unwrap();
        let single = validate_locally_gentle(q, &[]).unwrap();
        let (_, rad) = idempotent_and_radical_basis(&single).unwrap();
        assert!(rad.is_empty());
        assert_eq!(
            idempotent_and_radical_basis(&running_example()).unwrap_err(),
            AlgebraError::NotGentle
        );
    }

    fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let basis = admissible_paths(alg.pair(), 3);
        let elems = alg.field().elements();
        let mut terms: Vec<(Path, FFElem)> = Vec::new();
        for p in &basis {
            if rng.gen_bool(0.4) {
                terms.push((p.clone(), elems[rng.gen_range(0..elems.len())].clone()));
            }
        }
        alg.element(terms).unwrap()
    }

    #[test]
    fn multiplication_is_associative_on_random_triples() {
        let alg = running_algebra_f4();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let x = random_element(&alg, &mut rng);
            let y = random_element(&alg, &mut rng);
            let z = random_element(&alg, &mut rng);
            let xy_z = alg
                .multiply(&alg.multiply(&x, &y).unwrap(), &z)
                .unwrap();
            let x_yz = alg
                .multiply(&x, &alg.multiply(&y, &z).unwrap())
                .unwrap();
            assert_eq!(xy_z, x_yz);
        }
    }

    #[test]
    fn identity_is_two_sided_on_random_elements() {
        let alg = running_algebra_f4();
        let one = alg.one();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let x = random_element(&alg, &mut rng);
            assert_eq!(alg.multiply(&one, &x).unwrap(), x);
            assert_eq!(alg.multiply(&x, &one).unwrap(), x);
        }
    }

    /// Matrix model of the oriented line on three vertices: elements map to
    /// lower-triangular matrices, with the second arrow's twist applied
    /// whenever its slot crosses a plain scalar.
    #[test]
    fn a3_matrix_model_is_multiplicative() {
        let field = f4();
        let q = Quiver::new(
            vec!["1", "2", "3"],
            vec![("al", "1", "2"), ("be", "2", "3")],
        )
        .unwrap();
        let pair = validate_locally_gentle(q, &[]).unwrap();
        let mut exps = Map::new();
        exps.insert(ArrowId(1), 1usize); // tau = frobenius on the second arrow
        let sigma = Sigma::from_frobenius_exponents(&pair, &exps, 2);
        let alg = Algebra::new(pair, sigma, field.clone()).unwrap();

        // Coordinates of a general element in the path basis:
        // (e1, e2, e3, al, be, be*al).
        type Coords = [FFElem; 6];
        let to_coords = |x: &AlgebraElement| -> Coords {
            let mut out = [
                field.zero(),
                field.zero(),
                field.zero(),
                field.zero(),
                field.zero(),
                field.zero(),
            ];
            for (p, c) in x.terms() {
                let idx = match p {
                    Path::Trivial(VertexId(i)) => *i,
                    Path::Arrows(a) if a.len() == 1 && a[0] == ArrowId(0) => 3,
                    Path::Arrows(a) if a.len() == 1 && a[0] == ArrowId(1) => 4,
                    Path::Arrows(a) if a.len() == 2 => 5,
                    _ => unreachable!(),
                };
                out[idx] = c.clone();
            }
            out
        };
        // The displayed product rule, with the twisted slots reading their
        // right-hand factors through tau.
        let tau = |c: &FFElem| field.frobenius(c, 1);
        let matrix_mul = |m: &Coords, n: &Coords| -> Coords {
            let [l, l1, l2, mu, mu1, eta] = m.clone();
            let [k, k1, k2, io, io1, th] = n.clone();
            [
                field.mul(&l, &k),
                field.mul(&l1, &k1),
                field.mul(&l2, &k2),
                field.add(&field.mul(&mu, &k), &field.mul(&l1, &io)),
                field.add(&field.mul(&mu1, &tau(&k1)), &field.mul(&l2, &io1)),
                field.add(
                    &field.add(&field.mul(&eta, &tau(&k)), &field.mul(&mu1, &tau(&io))),
                    &field.mul(&l2, &th),
                ),
            ]
        };

        let basis = admissible_paths(alg.pair(), 2);
        assert_eq!(basis.len(), 6);
        let elems = field.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let pick = |rng: &mut ChaCha8Rng, alg: &Algebra| {
                let terms: Vec<(Path, FFElem)> = basis
                    .iter()
                    .map(|p| (p.clone(), elems[rng.gen_range(0..elems.len())].clone()))
                    .collect();
                alg.element(terms).unwrap()
            };
            let x = pick(&mut rng, &alg);
            let y = pick(&mut rng, &alg);
            let lhs = to_coords(&alg.multiply(&x, &y).unwrap());
            let rhs = matrix_mul(&to_coords(&x), &to_coords(&y));
            assert_eq!(lhs, rhs);
        }
    }
}
