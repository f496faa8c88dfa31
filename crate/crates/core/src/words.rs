//! Cyclic binary words and the admissibility rules of the two supported
//! orbifold codings.
//!
//! A periodic orbit of the flow is represented by one period of its symbolic
//! code, a cyclic word over `{a, b}`. Letter `a` is one turn on the first ear
//! of the carrying branched surface, `b` one turn on the second. All factor
//! conditions are cyclic (wrap-around included); they are checked on the word
//! repeated three times, which covers every factor of length at most `2|w|`.

use std::fmt;

use crate::error::{Error, Result};

/// One symbol of an orbit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    fn from_char(c: char) -> Result<Letter> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            other => Err(Error::InvalidWord(format!("unexpected letter {other:?}"))),
        }
    }
}

/// A nonempty cyclic word over `{a, b}`; index arithmetic is modulo length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        Ok(CyclicWord { letters })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        CyclicWord::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter at cyclic position `i`.
    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i % self.letters.len()]
    }

    /// The rotation starting at position `i`.
    pub fn rotation(&self, i: usize) -> CyclicWord {
        let n = self.letters.len();
        let i = i % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.letters[i..]);
        v.extend_from_slice(&self.letters[..i]);
        CyclicWord { letters: v }
    }

    /// Lexicographically least rotation (`a < b`). Idempotent.
    pub fn canonicalize(&self) -> CyclicWord {
        let n = self.len();
        let mut best = 0usize;
        for i in 1..n {
            for k in 0..n {
                let c = self.letter(i + k).cmp(&self.letter(best + k));
                match c {
                    std::cmp::Ordering::Less => {
                        best = i;
                        break;
                    }
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        self.rotation(best)
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| self.letters[i] == self.letters[i % d]) {
                return false;
            }
        }
        true
    }

    /// `(n_a, n_b)` with `n_a + n_b = len`.
    pub fn letter_counts(&self) -> (usize, usize) {
        let n_a = self.letters.iter().filter(|&&l| l == Letter::A).count();
        (n_a, self.len() - n_a)
    }

    /// Number of positions whose letter is `first` and whose cyclic successor
    /// is `second`.
    pub fn adjacent_pairs(&self, first: Letter, second: Letter) -> usize {
        (0..self.len())
            .filter(|&i| self.letter(i) == first && self.letter(i + 1) == second)
            .count()
    }

    /// The word repeated three times, as a `String`.
    fn tripled(&self) -> String {
        let once: String = self.letters.iter().map(|l| l.as_char()).collect();
        let mut s = String::with_capacity(3 * once.len());
        s.push_str(&once);
        s.push_str(&once);
        s.push_str(&once);
        s
    }

    /// Longest cyclic run of the given letter (length of the word if the word
    /// is a single-letter power).
    fn max_cyclic_run(&self, letter: Letter) -> usize {
        if self.letters.iter().all(|&l| l == letter) {
            return self.len();
        }
        let n = self.len();
        // Start just after a position holding the other letter.
        let start = (0..n).find(|&i| self.letter(i) != letter).unwrap() + 1;
        let mut best = 0;
        let mut run = 0;
        for k in 0..n {
            if self.letter(start + k) == letter {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    fn contains_cyclic_factor(&self, factor: &str) -> bool {
        self.tripled().contains(factor)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Cone orders `(p, q, r)` of a hyperbolic triangle orbifold, sorted
/// `p <= q <= r` with `1/p + 1/q + 1/r < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    p: u32,
    q: u32,
    r: u32,
}

impl SurfaceSpec {
    pub fn new(p: u32, q: u32, r: u32) -> Result<Self> {
        let mut v = [p, q, r];
        v.sort_unstable();
        let [p, q, r] = v;
        if p < 2 {
            return Err(Error::InvalidSurface { p, q, r, reason: "orders must be >= 2".into() });
        }
        // 1/p + 1/q + 1/r < 1  <=>  qr + pr + pq < pqr, exactly in integers.
        let (p64, q64, r64) = (p as u64, q as u64, r as u64);
        if q64 * r64 + p64 * r64 + p64 * q64 >= p64 * q64 * r64 {
            return Err(Error::InvalidSurface { p, q, r, reason: "not hyperbolic".into() });
        }
        Ok(SurfaceSpec { p, q, r })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn r(&self) -> u32 {
        self.r
    }

    /// `pqr - pq - qr - rp`, the order of the first homology group.
    pub fn homology_order(&self) -> i64 {
        let (p, q, r) = (self.p as i64, self.q as i64, self.r as i64);
        p * q * r - p * q - q * r - r * p
    }

    /// True for the two triples whose symbolic coding is implemented.
    pub fn supports_coding(&self) -> bool {
        (self.p, self.q, self.r) == (2, 3, 7) || (self.p, self.q, self.r) == (3, 3, 4)
    }

    pub fn is_237(&self) -> bool {
        (self.p, self.q, self.r) == (2, 3, 7)
    }

    pub fn is_334(&self) -> bool {
        (self.p, self.q, self.r) == (3, 3, 4)
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.q, self.r)
    }
}

/// One syllable of the `(2,3,7)` coding: `x = ab`, `y = abb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Syllable {
    X,
    Y,
}

/// Rewrite an `aa`-free, `bbb`-free word containing both letters over the
/// syllable alphabet, reading from its first `a`.
pub fn syllables(w: &CyclicWord) -> Result<Vec<Syllable>> {
    let n = w.len();
    let start = (0..n)
        .find(|&i| w.letter(i) == Letter::A)
        .ok_or_else(|| Error::InvalidWord(format!("{w} has no letter a")))?;
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        if w.letter(start + k) != Letter::A {
            return Err(Error::InvalidWord(format!("{w} is not a product of ab and abb")));
        }
        let mut bs = 0;
        k += 1;
        while k < n && w.letter(start + k) == Letter::B {
            bs += 1;
            k += 1;
        }
        match bs {
            1 => out.push(Syllable::X),
            2 => out.push(Syllable::Y),
            _ => return Err(Error::InvalidWord(format!("{w} is not a product of ab and abb"))),
        }
    }
    Ok(out)
}

fn max_cyclic_syllable_run(sylls: &[Syllable], s: Syllable) -> usize {
    if sylls.iter().all(|&t| t == s) {
        // A pure power: the bi-infinite word is a constant syllable sequence.
        return usize::MAX;
    }
    let n = sylls.len();
    let start = (0..n).find(|&i| sylls[i] != s).unwrap() + 1;
    let mut best = 0;
    let mut run = 0;
    for k in 0..n {
        if sylls[(start + k) % n] == s {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Admissibility of `w` as the code of a periodic geodesic on `s`.
///
/// `(2,3,7)`: no cyclic `aa`, no `bbb`, both letters present, and in the
/// syllable alphabet no three consecutive equal syllables. `(3,3,4)`: no
/// cyclic `aaa`, no `bbb`, both letters present, and neither `abbabb` nor
/// `aabaab` occurs cyclically.
pub fn is_admissible(w: &CyclicWord, s: &SurfaceSpec) -> Result<bool> {
    if !s.supports_coding() {
        return Err(Error::UnsupportedSurface(*s));
    }
    let (n_a, n_b) = w.letter_counts();
    if n_a == 0 || n_b == 0 {
        return Ok(false);
    }
    if s.is_237() {
        if w.max_cyclic_run(Letter::A) > 1 || w.max_cyclic_run(Letter::B) > 2 {
            return Ok(false);
        }
        let sylls = syllables(w)?;
        Ok(max_cyclic_syllable_run(&sylls, Syllable::X) <= 2
            && max_cyclic_syllable_run(&sylls, Syllable::Y) <= 2)
    } else {
        Ok(w.max_cyclic_run(Letter::A) <= 2
            && w.max_cyclic_run(Letter::B) <= 2
            && !w.contains_cyclic_factor("abbabb")
            && !w.contains_cyclic_factor("aabaab"))
    }
}

/// A block of an admissible word: `x^i y^j` on `(2,3,7)` and `a^i b^j` on
/// `(3,3,4)`, with `i, j` in `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub i: u8,
    pub j: u8,
}

impl Block {
    fn new(i: usize, j: usize) -> Result<Self> {
        if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
            return Err(Error::InvalidWord(format!("block exponents ({i},{j}) out of range")));
        }
        Ok(Block { i: i as u8, j: j as u8 })
    }
}

/// Generic run-block cutter: cut a cyclic sequence after each maximal run of
/// the "second" symbol. `letters[k]` must alternate runs of two symbols.
fn cut_blocks<T: PartialEq + Copy>(seq: &[T], first: T) -> Result<Vec<(usize, usize)>> {
    let n = seq.len();
    let start = (0..n)
        .find(|&i| seq[i] == first && seq[(i + n - 1) % n] != first)
        .ok_or_else(|| Error::InvalidWord("sequence has a single run".into()))?;
    let mut blocks = Vec::new();
    let mut k = 0;
    while k < n {
        let mut i = 0;
        while k < n && seq[(start + k) % n] == first {
            i += 1;
            k += 1;
        }
        let mut j = 0;
        while k < n && seq[(start + k) % n] != first {
            j += 1;
            k += 1;
        }
        blocks.push((i, j));
    }
    Ok(blocks)
}

/// Decompose an admissible word into blocks.
///
/// The decomposition is unique up to cyclic rotation of the block list; the
/// returned list is read from the canonical rotation of the word, whose first
/// letter always opens a block.
pub fn block_decomposition(w: &CyclicWord, s: &SurfaceSpec) -> Result<Vec<Block>> {
    if !is_admissible(w, s)? {
        return Err(Error::Inadmissible(w.to_string(), *s));
    }
    let canon = w.canonicalize();
    let raw: Vec<(usize, usize)> = if s.is_237() {
        let sylls = syllables(&canon)?;
        cut_blocks(&sylls, Syllable::X)?
    } else {
        cut_blocks(canon.letters(), Letter::A)?
    };
    raw.into_iter().map(|(i, j)| Block::new(i, j)).collect()
}

/// A canonical admissible code together with the orbit it belongs to.
///
/// On `(2,3,7)` the three codes `ababb`, `abababb`, `ababbabb` all describe
/// the same geodesic; the latter two carry the orbit tag of the first. On
/// every other code the tag equals the word itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCode {
    pub word: CyclicWord,
    pub orbit: CyclicWord,
}

/// Orbit tag of a canonical admissible word.
pub fn orbit_tag(word: &CyclicWord, s: &SurfaceSpec) -> CyclicWord {
    if s.is_237() {
        let w = word.to_string();
        if w == "abababb" || w == "ababbabb" {
            return CyclicWord::parse("ababb").expect("static word");
        }
    }
    word.clone()
}

/// All canonical, primitive, admissible words of length at most `max_len`,
/// sorted by `(length, lexicographic)`.
pub fn enumerate_orbits(s: &SurfaceSpec, max_len: usize) -> Result<Vec<OrbitCode>> {
    if !s.supports_coding() {
        return Err(Error::UnsupportedSurface(*s));
    }
    if max_len < 1 {
        return Err(Error::OutOfRange("max_len must be >= 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=max_len {
        for word in lyndon_words(n) {
            if is_admissible(&word, s)? {
                let orbit = orbit_tag(&word, s);
                out.push(OrbitCode { word, orbit });
            }
        }
    }
    Ok(out)
}

/// Binary Lyndon words of length exactly `n`, in lexicographic order
/// (Duval's generation). These are precisely the canonical primitive words.
pub fn lyndon_words(n: usize) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            let letters = w
                .iter()
                .map(|&c| if c == 0 { Letter::A } else { Letter::B })
                .collect::<Vec<_>>();
            out.push(CyclicWord { letters });
        }
        // Extend periodically to length n, then increment.
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

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> CyclicWord {
        CyclicWord::parse(s).unwrap()
    }

    fn s237() -> SurfaceSpec {
        SurfaceSpec::new(2, 3, 7).unwrap()
    }

    fn s334() -> SurfaceSpec {
        SurfaceSpec::new(3, 3, 4).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(w("ba").canonicalize(), w("ab"));
        assert_eq!(w("ababb").canonicalize(), w("ababb"));
        assert_eq!(w("baa").canonicalize(), w("aab"));
    }

    #[test]
    fn empty_word_rejected() {
        assert!(CyclicWord::parse("").is_err());
        assert!(matches!(CyclicWord::parse("abc"), Err(Error::InvalidWord(_))));
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&w("ababb"), &s237()).unwrap());
        // Pure power of x: the bi-infinite word contains xxx.
        assert!(!is_admissible(&w("abab"), &s237()).unwrap());
        assert!(!is_admissible(&w("abbabb"), &s334()).unwrap());
        assert!(is_admissible(&w("ab"), &s334()).unwrap());
        // Single-letter words fail the run constraints.
        assert!(!is_admissible(&w("a"), &s237()).unwrap());
        assert!(!is_admissible(&w("b"), &s334()).unwrap());
        let other = SurfaceSpec::new(2, 3, 8).unwrap();
        assert!(matches!(is_admissible(&w("ab"), &other), Err(Error::UnsupportedSurface(_))));
    }

    #[test]
    fn enumerate_237_up_to_10() {
        let codes = enumerate_orbits(&s237(), 10).unwrap();
        let words: Vec<String> = codes.iter().map(|c| c.word.to_string()).collect();
        assert_eq!(words, vec!["ababb", "abababb", "ababbabb", "abababbabb"]);
        // Orbit tags: the first three code the same geodesic.
        assert_eq!(codes[1].orbit.to_string(), "ababb");
        assert_eq!(codes[2].orbit.to_string(), "ababb");
        assert_eq!(codes[3].orbit.to_string(), "abababbabb");
    }

    #[test]
    fn enumerate_334_up_to_4() {
        let codes = enumerate_orbits(&s334(), 4).unwrap();
        let words: Vec<String> = codes.iter().map(|c| c.word.to_string()).collect();
        assert_eq!(words, vec!["ab", "aabb"]);
    }

    #[test]
    fn enumerate_237_len_1_empty() {
        assert!(enumerate_orbits(&s237(), 1).unwrap().is_empty());
    }

    #[test]
    fn block_decomposition_examples() {
        // x^2 y . x y
        let blocks = block_decomposition(&w("abababbababb"), &s237()).unwrap();
        assert_eq!(blocks, vec![Block { i: 2, j: 1 }, Block { i: 1, j: 1 }]);
        let blocks = block_decomposition(&w("ababb"), &s237()).unwrap();
        assert_eq!(blocks, vec![Block { i: 1, j: 1 }]);
        // a^2 b . a b
        let blocks = block_decomposition(&w("aabab"), &s334()).unwrap();
        assert_eq!(blocks, vec![Block { i: 2, j: 1 }, Block { i: 1, j: 1 }]);
        assert!(block_decomposition(&w("abab"), &s237()).is_err());
    }

    fn rebuild(blocks: &[Block], surface: &SurfaceSpec) -> CyclicWord {
        let mut s = String::new();
        for b in blocks {
            if surface.is_237() {
                for _ in 0..b.i {
                    s.push_str("ab");
                }
                for _ in 0..b.j {
                    s.push_str("abb");
                }
            } else {
                for _ in 0..b.i {
                    s.push('a');
                }
                for _ in 0..b.j {
                    s.push('b');
                }
            }
        }
        CyclicWord::parse(&s).unwrap()
    }

    #[test]
    fn block_concat_reproduces_canonical_rotation() {
        for surface in [s237(), s334()] {
            for code in enumerate_orbits(&surface, 12).unwrap() {
                let blocks = block_decomposition(&code.word, &surface).unwrap();
                assert_eq!(
                    rebuild(&blocks, &surface),
                    code.word,
                    "blocks of {} rebuild differently",
                    code.word
                );
            }
        }
    }

    #[test]
    fn letter_counts_examples() {
        assert_eq!(w("ababb").letter_counts(), (2, 3));
        assert_eq!(w("ab").letter_counts(), (1, 1));
        assert_eq!(w("abababbabb").letter_counts(), (4, 6));
    }

    #[test]
    fn surface_validation() {
        assert!(SurfaceSpec::new(2, 3, 6).is_err()); // euclidean
        assert!(SurfaceSpec::new(1, 5, 5).is_err());
        let s = SurfaceSpec::new(7, 3, 2).unwrap(); // sorted
        assert!(s.is_237());
        assert_eq!(s237().homology_order(), 1);
        assert_eq!(s334().homology_order(), 3);
    }

    #[test]
    fn lyndon_words_are_canonical_primitive() {
        for n in 1..=10 {
            for word in lyndon_words(n) {
                assert!(word.is_canonical());
                assert!(word.is_primitive());
            }
        }
        assert_eq!(lyndon_words(6).len(), 9);
    }
}
