//! Finite field arithmetic and automorphism values in two backends: free
//! symbolic words (one generator per arrow) and Frobenius powers over
//! `F_{p^n}`. Also the automorphism sequence attached to a word.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::quiver::{ArrowId, LocallyGentlePair, Quiver};
use crate::words::{is_admissible, word_quiver, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree n with coefficients below p")]
    BadModulus,
    #[error("modulus is reducible")]
    Reducible,
    #[error("no irreducible polynomial found")]
    SearchFailed,
}

/// The field `F_{p^n}` presented as `F_p[x]` modulo a monic irreducible
/// polynomial, coefficients stored low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

/// An element of a [`FiniteField`]: `n` coefficients mod `p`, low degree
/// first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FFElem {
    pub coeffs: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial remainder of `a` by monic `m`, both low-first, mod `p`.
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let k = a.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let idx = k + i;
                a[idx] = (a[idx] + p - lead * m[i] % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

impl FiniteField {
    /// Validates primality, monicity, and irreducibility (trial division by
    /// all monic polynomials of degree up to `n/2`).
    pub fn new(p: u64, n: usize, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if modulus.len() != n + 1
            || modulus[n] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus);
        }
        for d in 1..=n / 2 {
            // All monic divisor candidates of degree d.
            let count = (p as u128).pow(d as u32);
            for code in 0..count {
                let mut divisor = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    divisor.push((c % p as u128) as u64);
                    c /= p as u128;
                }
                divisor.push(1);
                if poly_is_zero(&poly_rem(modulus.clone(), &divisor, p)) {
                    return Err(FieldError::Reducible);
                }
            }
        }
        Ok(FiniteField { p, n, modulus })
    }

    /// First monic irreducible polynomial of degree `n` in coefficient
    /// order, packaged as a field.
    pub fn search_irreducible(p: u64, n: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let count = (p as u128).pow(n as u32);
        for code in 0..count {
            let mut m = Vec::with_capacity(n + 1);
            let mut c = code;
            for _ in 0..n {
                m.push((c % p as u128) as u64);
                c /= p as u128;
            }
            m.push(1);
            if let Ok(f) = FiniteField::new(p, n, m) {
                return Ok(f);
            }
        }
        Err(FieldError::SearchFailed)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FFElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// The class of `x`, or of the prime-field generator when `n = 1`.
    pub fn generator(&self) -> FFElem {
        if self.n == 1 {
            self.from_u64(1)
        } else {
            let mut e = self.zero();
            e.coeffs[1] = 1;
            e
        }
    }

    /// `x` for proper extensions, `1` for the prime field itself; walks
    /// the power basis.
    pub fn generator_or_one(&self) -> FFElem {
        if self.n == 1 {
            self.one()
        } else {
            self.generator()
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FFElem, FieldError> {
        if coeffs.len() != self.n || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadModulus);
        }
        Ok(FFElem { coeffs })
    }

    pub fn is_zero(&self, a: &FFElem) -> bool {
        poly_is_zero(&a.coeffs)
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        FFElem {
            coeffs: a.coeffs.iter().map(|x| (self.p - x % self.p) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut prod = vec![0u64; 2 * self.n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(prod, &self.modulus, self.p);
        r.resize(self.n, 0);
        FFElem { coeffs: r }
    }

    pub fn pow(&self, a: &FFElem, mut e: u128) -> FFElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &FFElem) -> Result<FFElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::BadModulus);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// `a ↦ a^{p^k}`.
    pub fn frobenius(&self, a: &FFElem, k: usize) -> FFElem {
        let mut out = a.clone();
        for _ in 0..k % self.n.max(1) {
            out = self.pow(&out, self.p as u128);
        }
        out
    }

    /// Every field element, in coefficient order.
    pub fn elements(&self) -> Vec<FFElem> {
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.n];
        loop {
            out.push(FFElem {
                coeffs: cur.clone(),
            });
            let mut i = 0;
            loop {
                if i == self.n {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.p {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    pub fn format_element(&self, a: &FFElem) -> String {
        a.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("automorphism backends do not match")]
    BackendMismatch,
    #[error("Frobenius degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot apply a symbolic automorphism to a field element")]
    SymbolicApply,
    #[error("word is not admissible")]
    InadmissibleWord,
    #[error("word is not a band")]
    NotABand,
    #[error("no automorphism assigned to arrow `{0}`")]
    MissingSigma(String),
}

/// An element of `Aut(K)`, either a Frobenius power over `F_{p^n}` or a
/// reduced word in formal generators. Composition reads right to left:
/// `compose(f, g)` applies `g` first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AutomorphismValue {
    Frobenius { exp: usize, degree: usize },
    /// Factors applied right to left; exponents are nonzero and adjacent
    /// factors have distinct generator names.
    FreeWord { factors: Vec<(String, i64)> },
}

impl AutomorphismValue {
    pub fn frobenius(exp: usize, degree: usize) -> Self {
        AutomorphismValue::Frobenius {
            exp: exp % degree.max(1),
            degree,
        }
    }

    pub fn identity_frobenius(degree: usize) -> Self {
        Self::frobenius(0, degree)
    }

    pub fn identity_symbolic() -> Self {
        AutomorphismValue::FreeWord {
            factors: Vec::new(),
        }
    }

    pub fn generator(name: impl Into<String>) -> Self {
        AutomorphismValue::FreeWord {
            factors: vec![(name.into(), 1)],
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            AutomorphismValue::Frobenius { exp, .. } => *exp == 0,
            AutomorphismValue::FreeWord { factors } => factors.is_empty(),
        }
    }

    fn reduce(mut factors: Vec<(String, i64)>) -> Vec<(String, i64)> {
        let mut out: Vec<(String, i64)> = Vec::with_capacity(factors.len());
        for f in factors.drain(..) {
            if f.1 == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == f.0 => {
                    last.1 += f.1;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push(f),
            }
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AutomorphismValue) -> Result<AutomorphismValue, GaloisError> {
        match (self, other) {
            (
                AutomorphismValue::Frobenius { exp: a, degree: da },
                AutomorphismValue::Frobenius { exp: b, degree: db },
            ) => {
                if da != db {
                    return Err(GaloisError::DegreeMismatch(*da, *db));
                }
                Ok(AutomorphismValue::frobenius(a + b, *da))
            }
            (
                AutomorphismValue::FreeWord { factors: a },
                AutomorphismValue::FreeWord { factors: b },
            ) => {
                let mut joined = a.clone();
                joined.extend(b.iter().cloned());
                Ok(AutomorphismValue::FreeWord {
                    factors: Self::reduce(joined),
                })
            }
            _ => Err(GaloisError::BackendMismatch),
        }
    }

    pub fn invert(&self) -> AutomorphismValue {
        match self {
            AutomorphismValue::Frobenius { exp, degree } => {
                AutomorphismValue::frobenius((degree - exp % degree) % degree, *degree)
            }
            AutomorphismValue::FreeWord { factors } => AutomorphismValue::FreeWord {
                factors: factors.iter().rev().map(|(g, e)| (g.clone(), -e)).collect(),
            },
        }
    }

    /// Realizes a Frobenius power on a field element.
    pub fn apply(&self, field: &FiniteField, e: &FFElem) -> Result<FFElem, GaloisError> {
        match self {
            AutomorphismValue::Frobenius { exp, degree } => {
                if *degree != field.degree() {
                    return Err(GaloisError::DegreeMismatch(*degree, field.degree()));
                }
                Ok(field.frobenius(e, *exp))
            }
            AutomorphismValue::FreeWord { .. } => Err(GaloisError::SymbolicApply),
        }
    }

    /// Evaluates a free word by substituting a Frobenius exponent for each
    /// generator.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<String, usize>,
        degree: usize,
    ) -> Result<AutomorphismValue, GaloisError> {
        match self {
            AutomorphismValue::Frobenius { .. } => Ok(self.clone()),
            AutomorphismValue::FreeWord { factors } => {
                let mut total: i64 = 0;
                for (g, e) in factors {
                    let k = *assignment
                        .get(g)
                        .ok_or_else(|| GaloisError::MissingSigma(g.clone()))?
                        as i64;
                    total += k * e;
                }
                let d = degree as i64;
                Ok(AutomorphismValue::frobenius(
                    total.rem_euclid(d) as usize,
                    degree,
                ))
            }
        }
    }
}

impl fmt::Display for AutomorphismValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomorphismValue::Frobenius { exp, .. } => {
                if *exp == 0 {
                    write!(f, "id")
                } else if *exp == 1 {
                    write!(f, "frob")
                } else {
                    write!(f, "frob^{exp}")
                }
            }
            AutomorphismValue::FreeWord { factors } => {
                if factors.is_empty() {
                    return write!(f, "id");
                }
                let parts: Vec<String> = factors
                    .iter()
                    .map(|(g, e)| {
                        if *e == 1 {
                            format!("sigma_{g}")
                        } else {
                            format!("sigma_{g}^{e}")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

/// Assignment of an automorphism to each arrow.
#[derive(Clone, Debug)]
pub struct Sigma {
    map: BTreeMap<ArrowId, AutomorphismValue>,
}

impl Sigma {
    pub fn new(map: BTreeMap<ArrowId, AutomorphismValue>) -> Self {
        Sigma { map }
    }

    /// One formal generator per arrow, named after the arrow.
    pub fn free_symbolic(pair: &LocallyGentlePair) -> Self {
        let map = pair
            .quiver()
            .arrow_ids()
            .map(|a| {
                (
                    a,
                    AutomorphismValue::generator(pair.quiver().arrow(a).name.clone()),
                )
            })
            .collect();
        Sigma { map }
    }

    pub fn identity_symbolic(pair: &LocallyGentlePair) -> Self {
        let map = pair
            .quiver()
            .arrow_ids()
            .map(|a| (a, AutomorphismValue::identity_symbolic()))
            .collect();
        Sigma { map }
    }

    pub fn identity_frobenius(pair: &LocallyGentlePair, degree: usize) -> Self {
        let map = pair
            .quiver()
            .arrow_ids()
            .map(|a| (a, AutomorphismValue::identity_frobenius(degree)))
            .collect();
        Sigma { map }
    }

    /// Frobenius powers from per-arrow exponents; missing arrows get the
    /// identity.
    pub fn from_frobenius_exponents(
        pair: &LocallyGentlePair,
        exps: &BTreeMap<ArrowId, usize>,
        degree: usize,
    ) -> Self {
        let map = pair
            .quiver()
            .arrow_ids()
            .map(|a| {
                (
                    a,
                    AutomorphismValue::frobenius(exps.get(&a).copied().unwrap_or(0), degree),
                )
            })
            .collect();
        Sigma { map }
    }

    pub fn get(&self, a: ArrowId) -> Result<&AutomorphismValue, GaloisError> {
        self.map
            .get(&a)
            .ok_or_else(|| GaloisError::MissingSigma(format!("#{}", a.0)))
    }

    pub fn get_by_name(&self, q: &Quiver, name: &str) -> Option<&AutomorphismValue> {
        q.arrow_id(name).and_then(|a| self.map.get(&a))
    }

    pub fn set(&mut self, a: ArrowId, value: AutomorphismValue) {
        self.map.insert(a, value);
    }

    /// True when every value is a Frobenius power of the given degree.
    pub fn is_concrete(&self, degree: usize) -> bool {
        self.map
            .values()
            .all(|v| matches!(v, AutomorphismValue::Frobenius { degree: d, .. } if *d == degree))
    }

    /// The identity in this assignment's backend.
    pub fn identity_value(&self) -> AutomorphismValue {
        match self.map.values().next() {
            Some(AutomorphismValue::Frobenius { degree, .. }) => {
                AutomorphismValue::identity_frobenius(*degree)
            }
            _ => AutomorphismValue::identity_symbolic(),
        }
    }
}

/// The running compositions `π_0 = id, …, π_n` along a word, stepping
/// through its quiver: `π_{h(θ)} = σ_{f(θ)} ∘ π_{t(θ)}`. For bands the
/// indices run over one period, `0..=n`.
pub fn pi_sequence(
    pair: &LocallyGentlePair,
    word: &Word,
    sigma: &Sigma,
) -> Result<Vec<AutomorphismValue>, GaloisError> {
    if !is_admissible(pair, word) {
        return Err(GaloisError::InadmissibleWord);
    }
    let identity = sigma.identity_value();
    let wq = word_quiver(pair.quiver(), word);
    let n = word.len();
    let mut out = vec![identity];
    for i in 1..=n {
        let s = sigma.get(wq.f_arrows[i - 1])?;
        let prev = &out[i - 1];
        // theta_i has head i-1 for a direct letter, so stepping from i-1 to
        // i moves against the arrow and inverts; inverse letters compose
        // forward.
        let next = if word.letters()[i - 1].direct {
            s.invert().compose(prev)?
        } else {
            s.compose(prev)?
        };
        out.push(next);
    }
    Ok(out)
}

/// The band automorphism `π_C = π_n^{-1}` over one period.
pub fn pi_band(
    pair: &LocallyGentlePair,
    band: &Word,
    sigma: &Sigma,
) -> Result<AutomorphismValue, GaloisError> {
    if !band.is_band() {
        return Err(GaloisError::NotABand);
    }
    let seq = pi_sequence(pair, band, sigma)?;
    Ok(seq.last().unwrap().invert())
}
