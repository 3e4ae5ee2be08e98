//! Words over signed arrow letters: strings, bands, admissibility,
//! equivalence canonicalization, enumeration, and the quiver attached to a
//! word.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::quiver::{ArrowId, LocallyGentlePair, Quiver, VertexId};

/// A direct letter `a` or an inverse letter `a^-1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub arrow: ArrowId,
    pub direct: bool,
}

impl Letter {
    pub fn direct(arrow: ArrowId) -> Self {
        Letter { arrow, direct: true }
    }

    pub fn inverse(arrow: ArrowId) -> Self {
        Letter {
            arrow,
            direct: false,
        }
    }

    /// Head of the letter: `h(a)` for direct, `t(a)` for inverse.
    pub fn head(&self, q: &Quiver) -> VertexId {
        if self.direct {
            q.head(self.arrow)
        } else {
            q.tail(self.arrow)
        }
    }

    /// Tail of the letter: `t(a)` for direct, `h(a)` for inverse.
    pub fn tail(&self, q: &Quiver) -> VertexId {
        if self.direct {
            q.tail(self.arrow)
        } else {
            q.head(self.arrow)
        }
    }

    pub fn inverted(&self) -> Letter {
        Letter {
            arrow: self.arrow,
            direct: !self.direct,
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.direct {
            q.arrow(self.arrow).name.clone()
        } else {
            format!("{}^-1", q.arrow(self.arrow).name)
        }
    }

    /// Ordering key used for canonical forms: arrow name, direct before
    /// inverse.
    fn key<'q>(&self, q: &'q Quiver) -> (&'q str, bool) {
        (&q.arrow(self.arrow).name, !self.direct)
    }
}

/// A word: trivial at a vertex, a finite letter sequence, or one period of
/// a doubly-infinite periodic word.
///
/// Letters are stored left to right, consecutive letters satisfying
/// `t(C_i) = h(C_{i+1})` with no immediate backtracking. Bands satisfy both
/// conditions cyclically and are primitive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Word {
    Trivial { vertex: VertexId, sign: i8 },
    Finite(Vec<Letter>),
    Band(Vec<Letter>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word must contain at least one letter")]
    Empty,
    #[error("letters {0} and {1} do not compose: tail/head mismatch")]
    NotComposable(usize, usize),
    #[error("letters {0} and {1} backtrack")]
    Backtrack(usize, usize),
    #[error("band period is a proper power of a shorter word")]
    NotPrimitive,
    #[error("trivial word sign must be +1 or -1")]
    BadSign,
    #[error("expected a band")]
    NotABand,
    #[error("word is not admissible for this pair")]
    Inadmissible,
}

fn check_joint(q: &Quiver, letters: &[Letter], i: usize, j: usize) -> Result<(), WordError> {
    if letters[i].tail(q) != letters[j].head(q) {
        return Err(WordError::NotComposable(i, j));
    }
    if letters[i].inverted() == letters[j] {
        return Err(WordError::Backtrack(i, j));
    }
    Ok(())
}

fn is_primitive(letters: &[Letter]) -> bool {
    let n = letters.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (0..n).all(|i| letters[i] == letters[i % d]) {
            return false;
        }
    }
    true
}

impl Word {
    pub fn trivial(vertex: VertexId, sign: i8) -> Result<Word, WordError> {
        if sign != 1 && sign != -1 {
            return Err(WordError::BadSign);
        }
        Ok(Word::Trivial { vertex, sign })
    }

    pub fn finite(q: &Quiver, letters: Vec<Letter>) -> Result<Word, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        for i in 0..letters.len() - 1 {
            check_joint(q, &letters, i, i + 1)?;
        }
        Ok(Word::Finite(letters))
    }

    pub fn band(q: &Quiver, letters: Vec<Letter>) -> Result<Word, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        let n = letters.len();
        for i in 0..n {
            check_joint(q, &letters, i, (i + 1) % n)?;
        }
        if !is_primitive(&letters) {
            return Err(WordError::NotPrimitive);
        }
        Ok(Word::Band(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            Word::Trivial { .. } => &[],
            Word::Finite(l) | Word::Band(l) => l,
        }
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters().is_empty()
    }

    pub fn is_band(&self) -> bool {
        matches!(self, Word::Band(_))
    }

    /// The vertex `v_i(C)`, for `i` in `0..=len` (finite and trivial words)
    /// or any `i` taken mod the period (bands).
    pub fn vertex_at(&self, q: &Quiver, i: usize) -> VertexId {
        match self {
            Word::Trivial { vertex, .. } => *vertex,
            Word::Finite(l) => {
                if i == 0 {
                    l[0].head(q)
                } else {
                    l[i - 1].tail(q)
                }
            }
            Word::Band(l) => {
                let n = l.len();
                let i = i % n;
                if i == 0 {
                    l[0].head(q)
                } else {
                    l[i - 1].tail(q)
                }
            }
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        match self {
            Word::Trivial { vertex, sign } => format!(
                "triv:{}{}",
                q.vertex_name(*vertex),
                if *sign >= 0 { "" } else { ",-" }
            ),
            Word::Finite(l) => l
                .iter()
                .map(|x| x.display(q))
                .collect::<Vec<_>>()
                .join(","),
            Word::Band(l) => format!(
                "band:{}",
                l.iter().map(|x| x.display(q)).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Whether consecutive direct-direct and inverse-inverse pairs avoid `Z`
/// (cyclically for bands).
pub fn is_admissible(pair: &LocallyGentlePair, word: &Word) -> bool {
    let letters = word.letters();
    let n = letters.len();
    if n == 0 {
        return true;
    }
    let bound = if word.is_band() { n } else { n - 1 };
    for i in 0..bound {
        let x = letters[i];
        let y = letters[(i + 1) % n];
        if x.direct && y.direct && pair.in_z(x.arrow, y.arrow) {
            return false;
        }
        if !x.direct && !y.direct && pair.in_z(y.arrow, x.arrow) {
            return false;
        }
    }
    true
}

/// The inverse word: letters reversed and inverted; trivial signs flip.
pub fn inverse(word: &Word) -> Word {
    match word {
        Word::Trivial { vertex, sign } => Word::Trivial {
            vertex: *vertex,
            sign: -sign,
        },
        Word::Finite(l) => Word::Finite(l.iter().rev().map(Letter::inverted).collect()),
        Word::Band(l) => Word::Band(l.iter().rev().map(Letter::inverted).collect()),
    }
}

/// Shift by `d`: identity on trivial and finite words, cyclic rotation of a
/// band's period.
pub fn shift(word: &Word, d: i64) -> Word {
    match word {
        Word::Band(l) => {
            let n = l.len() as i64;
            let r = d.rem_euclid(n) as usize;
            let mut rotated = l[r..].to_vec();
            rotated.extend_from_slice(&l[..r]);
            Word::Band(rotated)
        }
        other => other.clone(),
    }
}

fn word_key(q: &Quiver, w: &Word) -> Vec<(String, bool)> {
    w.letters()
        .iter()
        .map(|l| {
            let (name, inv) = l.key(q);
            (name.to_string(), inv)
        })
        .collect()
}

/// The least representative of the equivalence class of `word` under
/// inversion and (for bands) rotation. Trivial signs collapse to `+1`.
pub fn canonical(q: &Quiver, word: &Word) -> Word {
    match word {
        Word::Trivial { vertex, .. } => Word::Trivial {
            vertex: *vertex,
            sign: 1,
        },
        Word::Finite(_) => {
            let inv = inverse(word);
            if word_key(q, &inv) < word_key(q, word) {
                inv
            } else {
                word.clone()
            }
        }
        Word::Band(l) => {
            let mut best: Option<(Vec<(String, bool)>, Word)> = None;
            for base in [word.clone(), inverse(word)] {
                for d in 0..l.len() as i64 {
                    let cand = shift(&base, d);
                    let key = word_key(q, &cand);
                    if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                        best = Some((key, cand));
                    }
                }
            }
            best.unwrap().1
        }
    }
}

/// All admissible continuations of a partial letter sequence, in a
/// deterministic order.
fn extensions(pair: &LocallyGentlePair, last: Letter) -> Vec<Letter> {
    let q = pair.quiver();
    let v = last.tail(q);
    let mut out = Vec::new();
    for a in q.arrow_ids() {
        for direct in [true, false] {
            let cand = Letter { arrow: a, direct };
            if cand.head(q) != v || last.inverted() == cand {
                continue;
            }
            if last.direct && cand.direct && pair.in_z(last.arrow, cand.arrow) {
                continue;
            }
            if !last.direct && !cand.direct && pair.in_z(cand.arrow, last.arrow) {
                continue;
            }
            out.push(cand);
        }
    }
    out
}

/// Canonical representatives of all admissible strings of length at most
/// `max_len`, trivial words included, ordered by length then letter keys.
pub fn enumerate_strings(pair: &LocallyGentlePair, max_len: usize) -> Vec<Word> {
    let q = pair.quiver();
    let mut seen: BTreeSet<Vec<(String, bool)>> = BTreeSet::new();
    let mut out: Vec<Word> = q
        .vertex_ids()
        .map(|v| Word::Trivial { vertex: v, sign: 1 })
        .collect();
    if max_len > 0 {
        let mut frontier: Vec<Vec<Letter>> = Vec::new();
        for a in q.arrow_ids() {
            for direct in [true, false] {
                frontier.push(vec![Letter { arrow: a, direct }]);
            }
        }
        while let Some(letters) = frontier.pop() {
            let word = Word::Finite(letters.clone());
            let canon = canonical(q, &word);
            if seen.insert(word_key(q, &canon)) {
                out.push(canon);
            }
            if letters.len() < max_len {
                for next in extensions(pair, *letters.last().unwrap()) {
                    let mut ext = letters.clone();
                    ext.push(next);
                    frontier.push(ext);
                }
            }
        }
    }
    out.sort_by_cached_key(|w| (w.len(), word_key(q, w), sort_vertex(w)));
    out
}

fn sort_vertex(w: &Word) -> usize {
    match w {
        Word::Trivial { vertex, .. } => vertex.0,
        _ => 0,
    }
}

/// Canonical representatives of all primitive admissible bands of period at
/// most `max_period`.
pub fn enumerate_bands(pair: &LocallyGentlePair, max_period: usize) -> Vec<Word> {
    let q = pair.quiver();
    let mut seen: BTreeSet<Vec<(String, bool)>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Letter>> = Vec::new();
    for a in q.arrow_ids() {
        for direct in [true, false] {
            stack.push(vec![Letter { arrow: a, direct }]);
        }
    }
    while let Some(letters) = stack.pop() {
        // Try to close the cycle at this length.
        if let Ok(band) = Word::band(q, letters.clone()) {
            if is_admissible(pair, &band) {
                let canon = canonical(q, &band);
                if seen.insert(word_key(q, &canon)) {
                    out.push(canon);
                }
            }
        }
        if letters.len() < max_period {
            for next in extensions(pair, *letters.last().unwrap()) {
                let mut ext = letters.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
    }
    out.sort_by_cached_key(|w| (w.len(), word_key(q, w)));
    out
}

/// The quiver `Q(C)` of a word together with the projection back to the
/// underlying quiver.
///
/// Vertices are named `0..=n` for finite words and `0..n-1` for bands,
/// where the wrap arrow joins `n-1` back to `0`. Arrows are named
/// `theta1..thetan`.
#[derive(Clone, Debug)]
pub struct WordQuiver {
    pub quiver: Quiver,
    /// For bands, the arrow of `quiver` that closes the period.
    pub wrap: Option<ArrowId>,
    /// Image of each `Q(C)` vertex in the underlying quiver.
    pub f_vertices: Vec<VertexId>,
    /// Image of each `theta` arrow in the underlying quiver.
    pub f_arrows: Vec<ArrowId>,
}

/// Builds `Q(C)`: direct letters point left (head `i-1`, tail `i`),
/// inverse letters point right.
pub fn word_quiver(q: &Quiver, word: &Word) -> WordQuiver {
    let letters = word.letters();
    let n = letters.len();
    let band = word.is_band();
    let vertex_count = if band { n } else { n + 1 };
    let vertices: Vec<String> = (0..vertex_count).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        let lo = i.to_string();
        let hi = if band {
            ((i + 1) % n).to_string()
        } else {
            (i + 1).to_string()
        };
        let name = format!("theta{}", i + 1);
        if l.direct {
            arrows.push((name, hi, lo));
        } else {
            arrows.push((name, lo, hi));
        }
    }
    let quiver = Quiver::new(vertices, arrows).expect("word quiver names are unique");
    let wrap = if band && n > 0 {
        quiver.arrow_id(&format!("theta{n}"))
    } else {
        None
    };
    let f_vertices: Vec<VertexId> = (0..vertex_count).map(|i| word.vertex_at(q, i)).collect();
    let f_arrows: Vec<ArrowId> = letters.iter().map(|l| l.arrow).collect();
    WordQuiver {
        quiver,
        wrap,
        f_vertices,
        f_arrows,
    }
}
