//! Semilinear quiver representations over a finite field: string modules,
//! band modules, morphism spaces over the prime field, and the local-ring
//! test for indecomposability.
//!
//! An arrow with matrix `M` and automorphism `s` acts on coordinates by
//! `x -> M s(x)`, the automorphism applied entrywise.

use std::fmt;

use thiserror::Error;

use crate::galois::{AutomorphismValue, FFElem, FiniteField, GaloisError, Sigma};
use crate::quiver::LocallyGentlePair;
#[cfg(test)]
use crate::quiver::VertexId;
use crate::words::{is_admissible, word_quiver, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("word is not admissible")]
    InadmissibleWord,
    #[error("sigma must be concrete of the field's degree")]
    SigmaNotConcrete,
    #[error("expected a band")]
    NotABand,
    #[error("band parameter matrix must be square of the stated size")]
    BadParameterShape,
    #[error("band parameter matrix is singular")]
    SingularParameter,
    #[error("representations live over different fields or pairs")]
    ContextMismatch,
    #[error("endomorphism ring too large to enumerate: p^{dim} elements")]
    EndTooLarge { dim: usize },
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

/// Dense matrix over a finite field. The field is passed to operations
/// rather than stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FFElem>,
}

impl Mat {
    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &FiniteField, rows: Vec<Vec<FFElem>>) -> Result<Self, RepError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(RepError::BadParameterShape);
        }
        let mut m = Mat::zeros(field, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn get(&self, r: usize, c: usize) -> &FFElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FFElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self, field: &FiniteField) -> bool {
        self.data.iter().all(|e| field.is_zero(e))
    }

    pub fn mul(&self, field: &FiniteField, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let add = field.mul(a, other.get(k, j));
                    let cur = out.get(i, j).clone();
                    out.set(i, j, field.add(&cur, &add));
                }
            }
        }
        out
    }

    pub fn add(&self, field: &FiniteField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = field.add(&out.data[i], &other.data[i]);
        }
        out
    }

    pub fn scale(&self, field: &FiniteField, c: &FFElem) -> Mat {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = field.mul(e, c);
        }
        out
    }

    /// Entrywise application of an automorphism.
    pub fn map_entries(
        &self,
        field: &FiniteField,
        auto: &AutomorphismValue,
    ) -> Result<Mat, GaloisError> {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = auto.apply(field, e)?;
        }
        Ok(out)
    }

    /// Applies the map `x -> self * s(x)` to a coordinate vector.
    pub fn act(
        &self,
        field: &FiniteField,
        auto: &AutomorphismValue,
        x: &[FFElem],
    ) -> Result<Vec<FFElem>, GaloisError> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![field.zero(); self.rows];
        for (j, xv) in x.iter().enumerate() {
            let tx = auto.apply(field, xv)?;
            if field.is_zero(&tx) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = field.add(o, &field.mul(self.get(i, j), &tx));
            }
        }
        Ok(out)
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !field.is_zero(m.get(r, col)));
            let Some(p) = pivot else { continue };
            for c in 0..m.cols {
                let tmp = m.get(p, c).clone();
                m.set(p, c, m.get(rank, c).clone());
                m.set(rank, c, tmp);
            }
            let inv = field.inv(m.get(rank, col)).expect("pivot nonzero");
            for c in 0..m.cols {
                m.set(rank, c, field.mul(m.get(rank, c), &inv));
            }
            for r in 0..m.rows {
                if r != rank && !field.is_zero(m.get(r, col)) {
                    let factor = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let sub = field.mul(&factor, m.get(rank, c));
                        let cur = m.get(r, c).clone();
                        m.set(r, c, field.sub(&cur, &sub));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn invertible(&self, field: &FiniteField) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                let e = self.get(r, c);
                write!(
                    f,
                    "{}",
                    e.coeffs
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join("")
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A representation: one dimension per vertex and one matrix with its
/// automorphism per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearRep {
    pub field: FiniteField,
    pub dims: Vec<usize>,
    pub arrow_maps: Vec<(Mat, AutomorphismValue)>,
}

impl SemilinearRep {
    pub fn dim_vector(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Basis bookkeeping for a word module: which basis indices sit at which
/// vertex.
fn vertex_positions(
    pair: &LocallyGentlePair,
    word: &Word,
    count: usize,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let q = pair.quiver();
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); q.vertex_count()];
    let mut pos = vec![0usize; count];
    for i in 0..count {
        let v = word.vertex_at(q, i);
        pos[i] = per_vertex[v.0].len();
        per_vertex[v.0].push(i);
    }
    (pos, per_vertex)
}

fn require_concrete(sigma: &Sigma, field: &FiniteField) -> Result<(), RepError> {
    if sigma.is_concrete(field.degree()) {
        Ok(())
    } else {
        Err(RepError::SigmaNotConcrete)
    }
}

/// The string module of a trivial or finite word: basis `b_0..b_n`, each
/// word arrow sending its tail basis vector to its head basis vector.
pub fn string_module(
    pair: &LocallyGentlePair,
    sigma: &Sigma,
    field: &FiniteField,
    word: &Word,
) -> Result<SemilinearRep, RepError> {
    if word.is_band() {
        return Err(RepError::InadmissibleWord);
    }
    if !is_admissible(pair, word) {
        return Err(RepError::InadmissibleWord);
    }
    require_concrete(sigma, field)?;
    let q = pair.quiver();
    let n = word.len();
    let (pos, per_vertex) = vertex_positions(pair, word, n + 1);
    let dims: Vec<usize> = per_vertex.iter().map(Vec::len).collect();
    let mut arrow_maps: Vec<(Mat, AutomorphismValue)> = Vec::with_capacity(q.arrow_count());
    for a in q.arrow_ids() {
        let m = Mat::zeros(field, dims[q.head(a).0], dims[q.tail(a).0]);
        arrow_maps.push((m, sigma.get(a)?.clone()));
    }
    let wq = word_quiver(q, word);
    for (i, letter) in word.letters().iter().enumerate() {
        // theta_{i+1} joins indices i and i+1.
        let (t_idx, h_idx) = if letter.direct {
            (i + 1, i)
        } else {
            (i, i + 1)
        };
        let a = wq.f_arrows[i];
        arrow_maps[a.0]
            .0
            .set(pos[h_idx], pos[t_idx], field.one());
    }
    Ok(SemilinearRep {
        field: field.clone(),
        dims,
        arrow_maps,
    })
}

/// A finite-dimensional module over the band's parameter ring: a size and
/// an invertible matrix giving the action of the ring generator.
#[derive(Clone, Debug)]
pub struct BandParameter {
    pub size: usize,
    pub matrix: Mat,
}

impl BandParameter {
    pub fn scalar(field: &FiniteField, value: FFElem) -> Self {
        let mut m = Mat::zeros(field, 1, 1);
        m.set(0, 0, value);
        BandParameter { size: 1, matrix: m }
    }
}

/// The band module of a primitive band tensored with a parameter module:
/// basis `b_j x e_l` over one period, the wrap step twisted by the
/// parameter matrix and the band automorphism.
pub fn band_module(
    pair: &LocallyGentlePair,
    sigma: &Sigma,
    field: &FiniteField,
    band: &Word,
    param: &BandParameter,
) -> Result<SemilinearRep, RepError> {
    if !band.is_band() {
        return Err(RepError::NotABand);
    }
    if !is_admissible(pair, band) {
        return Err(RepError::InadmissibleWord);
    }
    require_concrete(sigma, field)?;
    let m = param.size;
    if param.matrix.rows != m || param.matrix.cols != m {
        return Err(RepError::BadParameterShape);
    }
    if !param.matrix.invertible(field) {
        return Err(RepError::SingularParameter);
    }
    let q = pair.quiver();
    let n = band.len();
    let pis = crate::galois::pi_sequence(pair, band, sigma)?;
    let (pos, per_vertex) = vertex_positions(pair, band, n);
    let dims: Vec<usize> = per_vertex.iter().map(|v| v.len() * m).collect();
    let mut arrow_maps: Vec<(Mat, AutomorphismValue)> = Vec::with_capacity(q.arrow_count());
    for a in q.arrow_ids() {
        let mat = Mat::zeros(field, dims[q.head(a).0], dims[q.tail(a).0]);
        arrow_maps.push((mat, sigma.get(a)?.clone()));
    }

    // Inverse parameter matrix, needed when the wrap letter is inverse.
    let inv_matrix = invert_matrix(field, &param.matrix);

    for (i, letter) in band.letters().iter().enumerate() {
        let a = letter.arrow;
        let mat = &mut arrow_maps[a.0].0;
        let block = |r_idx: usize, c_idx: usize| (pos[r_idx] * m, pos[c_idx] * m);
        if i + 1 < n {
            // Interior step: b_{i+1} -> b_i for direct, b_i -> b_{i+1} else.
            let (t_idx, h_idx) = if letter.direct { (i + 1, i) } else { (i, i + 1) };
            let (r0, c0) = block(h_idx, t_idx);
            for l in 0..m {
                mat.set(r0 + l, c0 + l, field.one());
            }
        } else if letter.direct {
            // Wrap step down: b_0 -> b_{n-1} t, entries pi_{n-1}(T).
            let twisted = param
                .matrix
                .map_entries(field, &pis[n - 1])
                .map_err(RepError::Galois)?;
            let (r0, c0) = block(n - 1, 0);
            for k in 0..m {
                for l in 0..m {
                    mat.set(r0 + k, c0 + l, twisted.get(k, l).clone());
                }
            }
        } else {
            // Wrap step up: b_{n-1} -> b_0 t^{-1}, entries pi_n(T^{-1}).
            let twisted = inv_matrix
                .map_entries(field, &pis[n])
                .map_err(RepError::Galois)?;
            let (r0, c0) = block(0, n - 1);
            for k in 0..m {
                for l in 0..m {
                    mat.set(r0 + k, c0 + l, twisted.get(k, l).clone());
                }
            }
        }
    }
    Ok(SemilinearRep {
        field: field.clone(),
        dims,
        arrow_maps,
    })
}

fn invert_matrix(field: &FiniteField, m: &Mat) -> Mat {
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Mat::identity(field, n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !field.is_zero(a.get(r, col)))
            .expect("matrix is invertible");
        for c in 0..n {
            let tmp = a.get(pivot, c).clone();
            a.set(pivot, c, a.get(col, c).clone());
            a.set(col, c, tmp);
            let tmp = inv.get(pivot, c).clone();
            inv.set(pivot, c, inv.get(col, c).clone());
            inv.set(col, c, tmp);
        }
        let piv_inv = field.inv(a.get(col, col)).unwrap();
        for c in 0..n {
            a.set(col, c, field.mul(a.get(col, c), &piv_inv));
            inv.set(col, c, field.mul(inv.get(col, c), &piv_inv));
        }
        for r in 0..n {
            if r != col && !field.is_zero(a.get(r, col)) {
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let sa = field.mul(&f, a.get(col, c));
                    let cur = a.get(r, c).clone();
                    a.set(r, c, field.sub(&cur, &sa));
                    let si = field.mul(&f, inv.get(col, c));
                    let cur = inv.get(r, c).clone();
                    inv.set(r, c, field.sub(&cur, &si));
                }
            }
        }
    }
    inv
}

/// One verification failure found by [`check_rep`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckFailure {
    ShapeMismatch { arrow: String },
    RelationNotAnnihilated { outer: String, inner: String },
    SemilinearityViolated { arrow: String },
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::ShapeMismatch { arrow } => {
                write!(f, "matrix shape mismatch on arrow `{arrow}`")
            }
            CheckFailure::RelationNotAnnihilated { outer, inner } => {
                write!(f, "relation `{outer}*{inner}` does not act as zero")
            }
            CheckFailure::SemilinearityViolated { arrow } => {
                write!(f, "semilinearity law fails on arrow `{arrow}`")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies shapes, relation annihilation, and the semilinearity law on
/// sampled scalars.
pub fn check_rep(rep: &SemilinearRep, pair: &LocallyGentlePair) -> CheckReport {
    let q = pair.quiver();
    let field = &rep.field;
    let mut failures = Vec::new();
    for a in q.arrow_ids() {
        let (mat, _) = &rep.arrow_maps[a.0];
        if mat.rows != rep.dims[q.head(a).0] || mat.cols != rep.dims[q.tail(a).0] {
            failures.push(CheckFailure::ShapeMismatch {
                arrow: q.arrow(a).name.clone(),
            });
        }
    }
    if !failures.is_empty() {
        return CheckReport { failures };
    }
    for r in pair.relations() {
        let (mb, sb) = &rep.arrow_maps[r.outer.0];
        let (ma, _) = &rep.arrow_maps[r.inner.0];
        let twisted = match ma.map_entries(field, sb) {
            Ok(t) => t,
            Err(_) => {
                failures.push(CheckFailure::SemilinearityViolated {
                    arrow: q.arrow(r.outer).name.clone(),
                });
                continue;
            }
        };
        if !mb.mul(field, &twisted).is_zero(field) {
            failures.push(CheckFailure::RelationNotAnnihilated {
                outer: q.arrow(r.outer).name.clone(),
                inner: q.arrow(r.inner).name.clone(),
            });
        }
    }
    // Semilinearity on sampled scalars and basis vectors.
    let samples = [field.generator(), field.one(), field.from_u64(field.prime() - 1)];
    for a in q.arrow_ids() {
        let (mat, auto) = &rep.arrow_maps[a.0];
        let dim_t = mat.cols;
        'outer: for lambda in &samples {
            for j in 0..dim_t {
                let mut v = vec![field.zero(); dim_t];
                v[j] = field.one();
                let scaled: Vec<FFElem> = v.iter().map(|x| field.mul(lambda, x)).collect();
                let lhs = match mat.act(field, auto, &scaled) {
                    Ok(x) => x,
                    Err(_) => {
                        failures.push(CheckFailure::SemilinearityViolated {
                            arrow: q.arrow(a).name.clone(),
                        });
                        break 'outer;
                    }
                };
                let base = mat.act(field, auto, &v).unwrap();
                let slambda = auto.apply(field, lambda).unwrap();
                let rhs: Vec<FFElem> = base.iter().map(|x| field.mul(&slambda, x)).collect();
                if lhs != rhs {
                    failures.push(CheckFailure::SemilinearityViolated {
                        arrow: q.arrow(a).name.clone(),
                    });
                    break 'outer;
                }
            }
        }
    }
    CheckReport { failures }
}

/// Basis of the space of homomorphisms between two representations, solved
/// over the prime field.
#[derive(Clone, Debug)]
pub struct HomSpace {
    /// Dimension over the prime field.
    pub dim: usize,
    /// Each basis morphism as one matrix per vertex.
    pub basis: Vec<Vec<Mat>>,
}

/// Row-reduces a matrix over the prime field and returns a kernel basis.
fn fp_kernel(p: u64, rows: usize, cols: usize, data: &mut [u64]) -> Vec<Vec<u64>> {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..rows).find(|&r| !data[idx(r, c)].is_multiple_of(p));
        let Some(pr) = pivot else { continue };
        for cc in 0..cols {
            data.swap(idx(pr, cc), idx(rank, cc));
        }
        let inv = mod_inverse(data[idx(rank, c)] % p, p);
        for cc in 0..cols {
            data[idx(rank, cc)] = data[idx(rank, cc)] % p * inv % p;
        }
        for r in 0..rows {
            if r != rank && !data[idx(r, c)].is_multiple_of(p) {
                let f = data[idx(r, c)] % p;
                for cc in 0..cols {
                    let sub = f * data[idx(rank, cc)] % p;
                    data[idx(r, cc)] = (data[idx(r, cc)] + p - sub) % p;
                }
            }
        }
        pivot_of_col[c] = rank;
        rank += 1;
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut vec = vec![0u64; cols];
        vec[free] = 1;
        for c in 0..cols {
            let pr = pivot_of_col[c];
            if pr != usize::MAX {
                // Row pr reads: x_c + sum coeff * x_free = 0.
                vec[c] = (p - data[idx(pr, free)] % p) % p;
            }
        }
        kernel.push(vec);
    }
    kernel
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Multiplication-by-constant as a prime-field matrix in the power basis.
fn mult_matrix(field: &FiniteField, c: &FFElem) -> Vec<u64> {
    let n = field.degree();
    let mut cols = vec![0u64; n * n];
    let mut power = field.one();
    for j in 0..n {
        let prod = field.mul(c, &power);
        for i in 0..n {
            cols[i * n + j] = prod.coeffs[i];
        }
        power = field.mul(&power, &field.generator_or_one());
    }
    cols
}

/// Frobenius power as a prime-field matrix in the power basis.
fn frob_matrix(field: &FiniteField, k: usize) -> Vec<u64> {
    let n = field.degree();
    let mut cols = vec![0u64; n * n];
    let mut power = field.one();
    for j in 0..n {
        let img = field.frobenius(&power, k);
        for i in 0..n {
            cols[i * n + j] = img.coeffs[i];
        }
        power = field.mul(&power, &field.generator_or_one());
    }
    cols
}

/// Solves the twisted intertwining equations `F_h M1_a = M2_a s_a(F_t)`
/// over the prime field and returns a basis of solutions.
pub fn hom_space(
    rep1: &SemilinearRep,
    rep2: &SemilinearRep,
    pair: &LocallyGentlePair,
) -> Result<HomSpace, RepError> {
    if rep1.field != rep2.field {
        return Err(RepError::ContextMismatch);
    }
    let q = pair.quiver();
    let field = &rep1.field;
    let p = field.prime();
    let n = field.degree();

    // Variables: entries of one matrix per vertex, n prime-field
    // coordinates per entry.
    let mut var_base = Vec::with_capacity(q.vertex_count());
    let mut total_vars = 0usize;
    for v in q.vertex_ids() {
        var_base.push(total_vars);
        total_vars += rep2.dims[v.0] * rep1.dims[v.0] * n;
    }
    let var = |v: usize, r: usize, c: usize, t: usize, d1: &[usize]| -> usize {
        var_base[v] + (r * d1[v] + c) * n + t
    };

    let mut rows: Vec<Vec<u64>> = Vec::new();
    for a in q.arrow_ids() {
        let tv = q.tail(a).0;
        let hv = q.head(a).0;
        let (m1, auto1) = &rep1.arrow_maps[a.0];
        let (m2, auto) = &rep2.arrow_maps[a.0];
        if auto1 != auto {
            return Err(RepError::ContextMismatch);
        }
        let k = match auto {
            AutomorphismValue::Frobenius { exp, .. } => *exp,
            AutomorphismValue::FreeWord { .. } => return Err(RepError::SigmaNotConcrete),
        };
        let frob = frob_matrix(field, k);
        // Equation entries are indexed by (r, s) over rep2.dims[h] x
        // rep1.dims[t], each contributing n prime-field rows.
        for r in 0..rep2.dims[hv] {
            for s in 0..rep1.dims[tv] {
                let mut row_block = vec![vec![0u64; total_vars]; n];
                // LHS: sum_c F_h[r,c] * M1[c,s].
                for c in 0..rep1.dims[hv] {
                    let constant = m1.get(c, s);
                    if field.is_zero(constant) {
                        continue;
                    }
                    let mm = mult_matrix(field, constant);
                    for i in 0..n {
                        for t in 0..n {
                            let coeff = mm[i * n + t];
                            if coeff != 0 {
                                let vi = var(hv, r, c, t, &rep1.dims);
                                row_block[i][vi] = (row_block[i][vi] + coeff) % p;
                            }
                        }
                    }
                }
                // RHS (subtracted): sum_c M2[r,c] * frob(F_t[c,s]).
                for c in 0..rep2.dims[tv] {
                    let constant = m2.get(r, c);
                    if field.is_zero(constant) {
                        continue;
                    }
                    let mm = mult_matrix(field, constant);
                    // combined = mult(constant) * frob
                    for i in 0..n {
                        for t in 0..n {
                            let mut coeff = 0u64;
                            for mid in 0..n {
                                coeff = (coeff + mm[i * n + mid] * frob[mid * n + t]) % p;
                            }
                            if coeff != 0 {
                                let vi = var(tv, c, s, t, &rep1.dims);
                                row_block[i][vi] = (row_block[i][vi] + p - coeff) % p;
                            }
                        }
                    }
                }
                rows.extend(row_block);
            }
        }
    }

    let n_rows = rows.len();
    let mut flat: Vec<u64> = rows.into_iter().flatten().collect();
    let kernel = if total_vars == 0 {
        Vec::new()
    } else if n_rows == 0 {
        // No constraints: all coordinate vectors.
        (0..total_vars)
            .map(|i| {
                let mut v = vec![0u64; total_vars];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        fp_kernel(p, n_rows, total_vars, &mut flat)
    };

    let basis: Vec<Vec<Mat>> = kernel
        .iter()
        .map(|sol| {
            q.vertex_ids()
                .map(|v| {
                    let mut mat = Mat::zeros(field, rep2.dims[v.0], rep1.dims[v.0]);
                    for r in 0..rep2.dims[v.0] {
                        for c in 0..rep1.dims[v.0] {
                            let mut coeffs = vec![0u64; n];
                            for (t, coeff) in coeffs.iter_mut().enumerate() {
                                *coeff = sol[var(v.0, r, c, t, &rep1.dims)];
                            }
                            mat.set(r, c, field.from_coeffs(coeffs).unwrap());
                        }
                    }
                    mat
                })
                .collect()
        })
        .collect();
    Ok(HomSpace {
        dim: basis.len(),
        basis,
    })
}

fn compose_morphisms(field: &FiniteField, f: &[Mat], g: &[Mat]) -> Vec<Mat> {
    f.iter().zip(g).map(|(a, b)| a.mul(field, b)).collect()
}

fn morphism_is_zero(field: &FiniteField, f: &[Mat]) -> bool {
    f.iter().all(|m| m.is_zero(field))
}

fn morphism_eq(f: &[Mat], g: &[Mat]) -> bool {
    f == g
}

/// Local-ring test: enumerates the endomorphism ring over the prime field
/// and checks that every element is nilpotent or invertible and that the
/// only idempotents are zero and the identity.
pub fn is_indecomposable(rep: &SemilinearRep, pair: &LocallyGentlePair) -> Result<bool, RepError> {
    if rep.total_dim() == 0 {
        return Ok(false);
    }
    let end = hom_space(rep, rep, pair)?;
    let field = &rep.field;
    let p = field.prime();
    let d = end.dim;
    let count = (p as u128).checked_pow(d as u32);
    match count {
        Some(c) if c <= 1 << 20 => {}
        _ => return Err(RepError::EndTooLarge { dim: d }),
    }
    let identity: Vec<Mat> = rep
        .dims
        .iter()
        .map(|&dim| Mat::identity(field, dim))
        .collect();
    let total = rep.total_dim();
    let mut digits = vec![0u64; d];
    loop {
        // Assemble the endomorphism with these prime-field coordinates.
        let mut endo: Vec<Mat> = rep
            .dims
            .iter()
            .map(|&dim| Mat::zeros(field, dim, dim))
            .collect();
        for (i, &c) in digits.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let scalar = field.from_u64(c);
            for (e, b) in endo.iter_mut().zip(&end.basis[i]) {
                *e = e.add(field, &b.scale(field, &scalar));
            }
        }
        let invertible = endo.iter().all(|m| m.invertible(field));
        if !invertible {
            let mut power = endo.clone();
            let mut steps = 1;
            while !morphism_is_zero(field, &power) && steps <= total {
                power = compose_morphisms(field, &power, &endo);
                steps += 1;
            }
            if !morphism_is_zero(field, &power) {
                return Ok(false);
            }
        }
        let square = compose_morphisms(field, &endo, &endo);
        if morphism_eq(&square, &endo)
            && !morphism_is_zero(field, &endo)
            && !morphism_eq(&endo, &identity)
        {
            return Ok(false);
        }
        // Next coordinate tuple.
        let mut i = 0;
        loop {
            if i == d {
                return Ok(true);
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Block-diagonal direct sum. The automorphisms of the two summands must
/// agree arrow by arrow.
pub fn direct_sum(a: &SemilinearRep, b: &SemilinearRep) -> Result<SemilinearRep, RepError> {
    if a.field != b.field || a.dims.len() != b.dims.len() {
        return Err(RepError::ContextMismatch);
    }
    let field = &a.field;
    let dims: Vec<usize> = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
    let mut arrow_maps = Vec::with_capacity(a.arrow_maps.len());
    for ((ma, sa), (mb, sb)) in a.arrow_maps.iter().zip(&b.arrow_maps) {
        if sa != sb {
            return Err(RepError::ContextMismatch);
        }
        let mut m = Mat::zeros(field, ma.rows + mb.rows, ma.cols + mb.cols);
        for r in 0..ma.rows {
            for c in 0..ma.cols {
                m.set(r, c, ma.get(r, c).clone());
            }
        }
        for r in 0..mb.rows {
            for c in 0..mb.cols {
                m.set(ma.rows + r, ma.cols + c, mb.get(r, c).clone());
            }
        }
        arrow_maps.push((m, sa.clone()));
    }
    Ok(SemilinearRep {
        field: field.clone(),
        dims,
        arrow_maps,
    })
}
