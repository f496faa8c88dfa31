//! Positive words in the elementary matrices `L = (1 0; 1 1)` and
//! `R = (1 1; 0 1)`, traces, cyclic normal forms, and the catalogue of
//! genus-one first-return words for geodesic flows.
//!
//! Conjugacy classes of hyperbolic elements of `SL_2(Z)` with nonnegative
//! entries are enumerated by positive `LR`-words up to cyclic permutation;
//! the canonical representative used here is the lexicographically least
//! rotation with `L < R`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    L,
    R,
}

impl Gen {
    pub fn as_char(self) -> char {
        match self {
            Gen::L => 'L',
            Gen::R => 'R',
        }
    }
}

/// A word in `L`, `R`; possibly empty. Cyclic identity is taken by
/// [`LrWord::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LrWord {
    gens: Vec<Gen>,
}

impl LrWord {
    pub fn new(gens: Vec<Gen>) -> Self {
        LrWord { gens }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let gens = s
            .chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Gen::L),
                'R' | 'r' => Ok(Gen::R),
                other => Err(Error::InvalidWord(format!("unexpected generator {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LrWord { gens })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn rotation(&self, i: usize) -> LrWord {
        if self.gens.is_empty() {
            return self.clone();
        }
        let n = self.gens.len();
        let i = i % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.gens[i..]);
        v.extend_from_slice(&self.gens[..i]);
        LrWord { gens: v }
    }

    /// Lexicographically least rotation, `L < R`.
    pub fn canonicalize(&self) -> LrWord {
        (0..self.gens.len().max(1))
            .map(|i| self.rotation(i))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    pub fn cyclic_eq(&self, other: &LrWord) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

impl fmt::Display for LrWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(empty)");
        }
        for g in &self.gens {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

/// An integer 2x2 matrix; every matrix produced here has determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub m11: i64,
    pub m12: i64,
    pub m21: i64,
    pub m22: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { m11: 1, m12: 0, m21: 0, m22: 1 };
    pub const L: IntMatrix2 = IntMatrix2 { m11: 1, m12: 0, m21: 1, m22: 1 };
    pub const R: IntMatrix2 = IntMatrix2 { m11: 1, m12: 1, m21: 0, m22: 1 };

    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Self {
        IntMatrix2 { m11, m12, m21, m22 }
    }

    pub fn mul(&self, other: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }

    pub fn det(&self) -> i64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> i64 {
        self.m11 + self.m22
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m11, self.m12, self.m21, self.m22)
    }
}

/// Ordered product of the generator matrices.
pub fn word_to_matrix(w: &LrWord) -> IntMatrix2 {
    let mut m = IntMatrix2::IDENTITY;
    for g in w.gens() {
        let gm = match g {
            Gen::L => IntMatrix2::L,
            Gen::R => IntMatrix2::R,
        };
        m = m.mul(&gm);
    }
    m
}

/// Trace of the word's matrix; a conjugacy (hence rotation) invariant.
pub fn trace(w: &LrWord) -> i64 {
    word_to_matrix(w).trace()
}

/// All canonical cyclic positive words of length at most `max_len` whose
/// matrix has the given trace, deduplicated up to rotation. Words in a
/// single letter (parabolic, trace 2) are excluded; the enumeration covers
/// hyperbolic classes only, including proper powers.
pub fn classes_with_trace(t: i64, max_len: usize) -> Vec<LrWord> {
    let mut out = Vec::new();
    for n in 2..=max_len {
        for word in lr_necklaces(n) {
            let has_both = word.gens().contains(&Gen::L) && word.gens().contains(&Gen::R);
            if has_both && trace(&word) == t {
                out.push(word);
            }
        }
    }
    out
}

/// Binary Lyndon words over `L < R` of length exactly `n`; these are the
/// canonical rotations of primitive cyclic words.
fn lr_lyndon_words(n: usize) -> Vec<LrWord> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            let gens = w.iter().map(|&c| if c == 0 { Gen::L } else { Gen::R }).collect();
            out.push(LrWord { gens });
        }
        let k = w.len();
        while w.len() < n {
            let c = w[w.len() % k];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last = 1,
        }
    }
    out
}

/// Canonical rotations of all cyclic words of length exactly `n`: powers
/// `u^(n/d)` of Lyndon words `u` of length `d` dividing `n`, sorted.
fn lr_necklaces(n: usize) -> Vec<LrWord> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        for u in lr_lyndon_words(d) {
            let mut gens = Vec::with_capacity(n);
            for _ in 0..n / d {
                gens.extend_from_slice(u.gens());
            }
            out.push(LrWord { gens });
        }
    }
    out.sort();
    out
}

/// Recover the canonical cyclic positive word conjugate to `m`.
///
/// Factors are peeled off by Euclidean subtraction on rows and columns: if
/// the second row dominates the first, a left factor `L` splits off, and
/// symmetrically for `R`. When neither splits but the matrix is not the
/// identity, a letter is cycled from the back to the front (conjugation),
/// which must eventually expose a peelable factor for matrices in the
/// positive cone.
pub fn matrix_to_lr_word(m: &IntMatrix2) -> Result<LrWord> {
    if m.det() != 1 {
        return Err(Error::NotUnimodular(m.det()));
    }
    if m.trace() < 3 {
        return Err(Error::NotHyperbolic(m.trace()));
    }
    let nonneg = |m: &IntMatrix2| m.m11 >= 0 && m.m12 >= 0 && m.m21 >= 0 && m.m22 >= 0;
    // Bring the matrix into the nonnegative cone by conjugating with L/R.
    let mut cur = *m;
    let mut tries = 0;
    while !nonneg(&cur) {
        // Conjugating by L or R preserves trace; a matrix conjugate to a
        // positive word reaches the cone in finitely many steps.
        let cand_l = {
            let linv = IntMatrix2::new(1, 0, -1, 1);
            linv.mul(&cur).mul(&IntMatrix2::L)
        };
        let cand_r = {
            let rinv = IntMatrix2::new(1, -1, 0, 1);
            rinv.mul(&cur).mul(&IntMatrix2::R)
        };
        let score = |m: &IntMatrix2| {
            let neg = [m.m11, m.m12, m.m21, m.m22].iter().filter(|&&x| x < 0).count() as i64;
            let mass: i64 = [m.m11, m.m12, m.m21, m.m22].iter().map(|x| x.abs()).sum();
            (neg, mass)
        };
        cur = if score(&cand_l) <= score(&cand_r) { cand_l } else { cand_r };
        tries += 1;
        if tries > 4096 {
            return Err(Error::NotPositiveClass);
        }
    }
    // Peel letters, cycling when stuck.
    let mut word = Vec::new();
    let mut guard = 0;
    while cur != IntMatrix2::IDENTITY {
        if cur.m21 >= cur.m11 && cur.m22 >= cur.m12 && (cur.m11 > 0 || cur.m12 > 0) {
            // cur = L * rest
            word.push(Gen::L);
            cur = IntMatrix2::new(cur.m11, cur.m12, cur.m21 - cur.m11, cur.m22 - cur.m12);
        } else if cur.m11 >= cur.m21 && cur.m12 >= cur.m22 && (cur.m21 > 0 || cur.m22 > 0) {
            // cur = R * rest
            word.push(Gen::R);
            cur = IntMatrix2::new(cur.m11 - cur.m21, cur.m12 - cur.m22, cur.m21, cur.m22);
        } else {
            return Err(Error::NotPositiveClass);
        }
        guard += 1;
        if guard > 4096 {
            return Err(Error::NotPositiveClass);
        }
    }
    if word.is_empty() {
        return Err(Error::NotPositiveClass);
    }
    Ok(LrWord::new(word).canonicalize())
}

/// Rows of the genus-one Birkhoff section catalogue for geodesic flows.
///
/// Each row gives, for a family of hyperbolic surfaces or orbifolds, the
/// number of boundary components of a genus-one section and (when known) the
/// cyclic word of its first-return map. Rows whose first-return word has not
/// been computed return `None` for the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionFamily {
    /// Closed genus-g surface, 4g+4 boundary components.
    ClosedA { g: u32 },
    /// Closed genus-g surface, 4g+2 boundary components.
    ClosedB { g: u32 },
    /// Closed genus-g surface, 4g boundary components.
    ClosedC { g: u32 },
    /// Sphere with cone points (2,3,r), r >= 7.
    Sphere23R { r: u32 },
    /// Sphere with cone points (2,q,r), q >= 4, r >= 5.
    Sphere2QR { q: u32, r: u32 },
    /// Sphere with cone points (p,q,r), p,q >= 3, r >= 4; one boundary component.
    SpherePQR { p: u32, q: u32, r: u32 },
    /// Sphere with cone points (p,q,r), p,q >= 3, r >= 4; two boundary components.
    SpherePQRTwo { p: u32, q: u32, r: u32 },
    /// Sphere with cone points (p,q,r,s), p,q,r >= 2, s >= 3.
    SpherePQRS { p: u32, q: u32, r: u32, s: u32 },
    /// Sphere with n cone points, all orders >= 4; word not catalogued.
    SphereAllAtLeast4 { n: u32 },
    /// Sphere with 2n cone points; word not catalogued.
    SphereEven { n: u32 },
    /// Genus g >= 1 with n cone points; word not catalogued.
    GenusWithCones { g: u32, n: u32 },
}

fn repeat(g: Gen, k: u32) -> impl Iterator<Item = Gen> {
    std::iter::repeat(g).take(k as usize)
}

/// Boundary-component count and first-return word for a catalogue row.
pub fn appendix_table(family: SectionFamily) -> Result<(u64, Option<LrWord>)> {
    use SectionFamily::*;
    let word = |parts: Vec<Gen>| Some(LrWord::new(parts).canonicalize());
    match family {
        ClosedA { g } => {
            if g < 2 {
                return Err(Error::OutOfRange("closed surface rows need g >= 2".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 2));
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 2));
            Ok((4 * g as u64 + 4, word(v)))
        }
        ClosedB { g } => {
            if g < 2 {
                return Err(Error::OutOfRange("closed surface rows need g >= 2".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 4));
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 2));
            Ok((4 * g as u64 + 2, word(v)))
        }
        ClosedC { g } => {
            if g < 2 {
                return Err(Error::OutOfRange("closed surface rows need g >= 2".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 4));
            v.extend(repeat(Gen::L, g - 1));
            v.extend(repeat(Gen::R, 4));
            Ok((4 * g as u64, word(v)))
        }
        Sphere23R { r } => {
            if r < 7 {
                return Err(Error::OutOfRange("(2,3,r) row needs r >= 7".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, r - 6));
            v.push(Gen::R);
            Ok((1, word(v)))
        }
        Sphere2QR { q, r } => {
            if q < 4 || r < 5 {
                return Err(Error::OutOfRange("(2,q,r) row needs q >= 4, r >= 5".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, q - 4));
            v.push(Gen::R);
            v.extend(repeat(Gen::L, r - 4));
            v.push(Gen::R);
            Ok((1, word(v)))
        }
        SpherePQR { p, q, r } => {
            if p < 3 || q < 3 || r < 4 {
                return Err(Error::OutOfRange("(p,q,r) row needs p,q >= 3, r >= 4".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, p - 3));
            v.push(Gen::R);
            v.extend(repeat(Gen::L, q - 3));
            v.push(Gen::R);
            v.extend(repeat(Gen::L, r - 3));
            v.push(Gen::R);
            Ok((1, word(v)))
        }
        SpherePQRTwo { p, q, r } => {
            if p < 3 || q < 3 || r < 4 {
                return Err(Error::OutOfRange("(p,q,r) row needs p,q >= 3, r >= 4".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            v.extend(repeat(Gen::L, p + q - 6));
            v.push(Gen::R);
            v.extend(repeat(Gen::L, r - 3));
            v.push(Gen::R);
            Ok((2, word(v)))
        }
        SpherePQRS { p, q, r, s } => {
            if p < 2 || q < 2 || r < 2 || s < 3 {
                return Err(Error::OutOfRange("(p,q,r,s) row needs p,q,r >= 2, s >= 3".into()));
            }
            let mut v: Vec<Gen> = Vec::new();
            for k in [p, q, r, s] {
                v.extend(repeat(Gen::L, k - 2));
                v.push(Gen::R);
            }
            Ok((2, word(v)))
        }
        SphereAllAtLeast4 { n } => {
            if n < 3 {
                return Err(Error::OutOfRange("need at least 3 cone points".into()));
            }
            Ok((n as u64, None))
        }
        SphereEven { n } => {
            if n < 2 {
                return Err(Error::OutOfRange("need at least 4 cone points".into()));
            }
            Ok((2 * n as u64 - 2, None))
        }
        GenusWithCones { g, n } => {
            if g < 1 {
                return Err(Error::OutOfRange("row needs g >= 1".into()));
            }
            Ok((4 * g as u64 + n as u64 + 3, None))
        }
    }
}
