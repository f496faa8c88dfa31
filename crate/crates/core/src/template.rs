//! The embedded two-eared branched surface carrying the periodic orbits, and
//! the crossing-count engine for linking numbers of carried curves.
//!
//! Orbit strands meet the branch segment in points ordered by their future
//! itinerary; one tick of the semi-flow moves every point one letter forward,
//! sending each strand through the ear of its current letter. All crossings
//! of a planar projection are accounted per strand pair:
//!
//! * pairs in the same ear cross once per half-twist of the ear, plus once
//!   at an order-reversing fold;
//! * pairs in different ears cross once when their branch-line order inverts
//!   across the tick, with a fixed sign given by which ear lies on top;
//! * band sectors near the branch contribute a fixed even number of
//!   crossings to a pair, depending on the letters before and after the tick
//!   (the `zone_*` constants).
//!
//! The parameters are not free: they are pinned by a committed calibration
//! (see [`crate::calib`]) before any linking result is reported.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::words::{is_admissible, CyclicWord, Letter, SurfaceSpec};

/// Linking numbers of a carried curve with the three surgery-link
/// components. The third component never links a carried curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopfVector {
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
}

/// Which ear passes over the other where the two ears meet the branch line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layering {
    AOverB,
    BOverA,
}

impl Layering {
    /// Sign of an inversion crossing between strands of different ears.
    pub fn crossing_sign(self) -> i64 {
        match self {
            Layering::AOverB => 1,
            Layering::BOverA => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "a_over_b" | "1" | "+1" => Ok(Layering::AOverB),
            "b_over_a" | "-1" => Ok(Layering::BOverA),
            other => Err(Error::BadCalibration(format!("unknown layering {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layering::AOverB => "a_over_b",
            Layering::BOverA => "b_over_a",
        }
    }
}

/// Embedding constants of the template over one surface family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemplateParams {
    /// Branch-line order reversal of each ear's return map.
    pub order_reversing_a: bool,
    pub order_reversing_b: bool,
    /// Signed half-twist count of each ear.
    pub twist_a: i64,
    pub twist_b: i64,
    /// Order-reversing fold crossing of each ear: -1, 0 or +1.
    pub fold_a: i64,
    pub fold_b: i64,
    /// Which ear passes over the other at the branch line.
    pub layering: Layering,
    /// Even sector-crossing counts for pairs of strands in different ears,
    /// keyed by the (letter, next letter) arc types of the two strands.
    pub zone_aa_ba: i64,
    pub zone_aa_bb: i64,
    pub zone_ab_ba: i64,
    pub zone_ab_bb: i64,
}

impl TemplateParams {
    pub fn validate(&self) -> Result<()> {
        for fold in [self.fold_a, self.fold_b] {
            if !(-1..=1).contains(&fold) {
                return Err(Error::BadCalibration(format!("fold {fold} out of range")));
            }
        }
        for (twist, fold, rev, name) in [
            (self.twist_a, self.fold_a, self.order_reversing_a, "a"),
            (self.twist_b, self.fold_b, self.order_reversing_b, "b"),
        ] {
            let flips = (twist + fold).rem_euclid(2) == 1;
            if flips != rev {
                return Err(Error::BadCalibration(format!(
                    "ear {name}: crossing parity of twist {twist} and fold {fold} \
                     does not match its order reversal flag"
                )));
            }
        }
        for z in [self.zone_aa_ba, self.zone_aa_bb, self.zone_ab_ba, self.zone_ab_bb] {
            if z.rem_euclid(2) != 0 {
                return Err(Error::BadCalibration(format!("zone count {z} must be even")));
            }
        }
        Ok(())
    }

    fn same_ear_crossings(&self, ear: Letter) -> i64 {
        match ear {
            Letter::A => self.twist_a + self.fold_a,
            Letter::B => self.twist_b + self.fold_b,
        }
    }

}

/// Letter-count linking rule with the three surgery-link components: an
/// `a`-pass winds the first component positively, a `b`-pass winds the
/// second negatively, nothing winds the third.
pub fn hopf_linking_vector(w: &CyclicWord) -> HopfVector {
    let (n_a, n_b) = w.letter_counts();
    HopfVector { l1: n_a as i64, l2: -(n_b as i64), l3: 0 }
}

/// The strand stream a word traces through the template's two ears.
///
/// On `(3,3,4)` every letter is one ear pass. On `(2,3,7)` one pass of the
/// first ear is the two-letter trip `ab` and one pass of the second the
/// three-letter trip `abb`, so the stream is the syllable rewriting of the
/// word; the first ear is coded `a`, the second `b`.
pub fn coding_stream(s: &SurfaceSpec, w: &CyclicWord) -> Result<CyclicWord> {
    if s.is_334() {
        return Ok(w.clone());
    }
    if !s.is_237() {
        return Err(Error::UnsupportedSurface(*s));
    }
    let letters = crate::words::syllables(w)?
        .into_iter()
        .map(|syl| match syl {
            crate::words::Syllable::X => Letter::A,
            crate::words::Syllable::Y => Letter::B,
        })
        .collect();
    CyclicWord::new(letters)
}

/// Compare two orbit points by future itinerary. Comparisons at depth `k`
/// are reversed once for every order-reversing letter in the common prefix.
fn compare_points(
    w1: &CyclicWord,
    i: usize,
    w2: &CyclicWord,
    j: usize,
    rev_a: bool,
    rev_b: bool,
) -> Ordering {
    let bound = w1.len() + w2.len();
    let mut flip = false;
    for k in 0..bound {
        let c1 = w1.letter(i + k);
        let c2 = w2.letter(j + k);
        if c1 != c2 {
            let base = c1.cmp(&c2);
            return if flip { base.reverse() } else { base };
        }
        let rev = match c1 {
            Letter::A => rev_a,
            Letter::B => rev_b,
        };
        if rev {
            flip = !flip;
        }
    }
    Ordering::Equal
}

/// Crossing statistics of the strand pairs between two distinct orbits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairStats {
    /// Strand pairs sharing ear `a` resp. `b`.
    pub pairs_aa: i64,
    pub pairs_bb: i64,
    /// Cross-ear pairs whose branch order inverts over the tick.
    pub inversions: i64,
    /// Cross-ear pair counts by arc type: the `a`-strand continues with
    /// `a` or `b`, the `b`-strand with `a` or `b`.
    pub zone_aa_ba: i64,
    pub zone_aa_bb: i64,
    pub zone_ab_ba: i64,
    pub zone_ab_bb: i64,
}

/// Crossing statistics of the strand pairs of a single orbit, plus the
/// half-twist count collected by the framing along the orbit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelfStats {
    pub pairs: PairStats,
    pub passes_a: i64,
    pub passes_b: i64,
}

#[derive(Clone, Copy)]
struct Strand {
    ribbon: Letter,
    next: Letter,
    entry: usize,
    exit: usize,
}

/// Build the branch-line configuration for one or two orbit words. Words
/// must be primitive and, when two are given, distinct as orbits.
fn strands(words: &[&CyclicWord], rev_a: bool, rev_b: bool) -> Result<Vec<Vec<Strand>>> {
    for w in words {
        if !w.is_primitive() {
            return Err(Error::InvalidWord(format!("{w} is a proper power")));
        }
    }
    let mut points: Vec<(usize, usize)> = Vec::new();
    for (o, w) in words.iter().enumerate() {
        for i in 0..w.len() {
            points.push((o, i));
        }
    }
    points.sort_by(|&(o1, i1), &(o2, i2)| {
        compare_points(words[o1], i1, words[o2], i2, rev_a, rev_b)
            .then_with(|| (o1, i1).cmp(&(o2, i2)))
    });
    for pair in points.windows(2) {
        let (o1, i1) = pair[0];
        let (o2, i2) = pair[1];
        if compare_points(words[o1], i1, words[o2], i2, rev_a, rev_b) == Ordering::Equal {
            return Err(Error::SameOrbit(words[o1].to_string(), words[o2].to_string()));
        }
    }
    let mut rank = vec![Vec::new(); words.len()];
    for (o, w) in words.iter().enumerate() {
        rank[o] = vec![0usize; w.len()];
    }
    for (r, &(o, i)) in points.iter().enumerate() {
        rank[o][i] = r;
    }
    let mut out = Vec::with_capacity(words.len());
    for (o, w) in words.iter().enumerate() {
        let n = w.len();
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(Strand {
                ribbon: w.letter(i),
                next: w.letter(i + 1),
                entry: rank[o][i],
                exit: rank[o][(i + 1) % n],
            });
        }
        out.push(v);
    }
    Ok(out)
}

fn classify_pair(s: &Strand, t: &Strand, stats: &mut PairStats) {
    use Letter::{A, B};
    match (s.ribbon, t.ribbon) {
        (A, A) => stats.pairs_aa += 1,
        (B, B) => stats.pairs_bb += 1,
        _ => {
            let (a_strand, b_strand) = if s.ribbon == A { (s, t) } else { (t, s) };
            let inverted = (s.entry < t.entry) != (s.exit < t.exit);
            if inverted {
                stats.inversions += 1;
            }
            match (a_strand.next, b_strand.next) {
                (A, A) => stats.zone_aa_ba += 1,
                (A, B) => stats.zone_aa_bb += 1,
                (B, A) => stats.zone_ab_ba += 1,
                (B, B) => stats.zone_ab_bb += 1,
            }
        }
    }
}

/// Pair statistics between two distinct orbits under a given branch order.
pub fn pair_stats(
    w1: &CyclicWord,
    w2: &CyclicWord,
    rev_a: bool,
    rev_b: bool,
) -> Result<PairStats> {
    let built = strands(&[w1, w2], rev_a, rev_b)?;
    let mut stats = PairStats::default();
    for s in &built[0] {
        for t in &built[1] {
            classify_pair(s, t, &mut stats);
        }
    }
    Ok(stats)
}

/// Pair and framing statistics of a single orbit under a given branch order.
pub fn self_stats(w: &CyclicWord, rev_a: bool, rev_b: bool) -> Result<SelfStats> {
    let built = strands(&[w], rev_a, rev_b)?;
    let list = &built[0];
    let mut stats = SelfStats::default();
    for (i, s) in list.iter().enumerate() {
        for t in list.iter().skip(i + 1) {
            classify_pair(s, t, &mut stats.pairs);
        }
        match s.ribbon {
            Letter::A => stats.passes_a += 1,
            Letter::B => stats.passes_b += 1,
        }
    }
    Ok(stats)
}

fn pair_crossings(params: &TemplateParams, stats: &PairStats) -> i64 {
    params.same_ear_crossings(Letter::A) * stats.pairs_aa
        + params.same_ear_crossings(Letter::B) * stats.pairs_bb
        + params.layering.crossing_sign() * stats.inversions
        + params.zone_aa_ba * stats.zone_aa_ba
        + params.zone_aa_bb * stats.zone_aa_bb
        + params.zone_ab_ba * stats.zone_ab_ba
        + params.zone_ab_bb * stats.zone_ab_bb
}

/// Half the signed crossing count between the carried curves of two words.
pub fn linking_from_stats(params: &TemplateParams, stats: &PairStats) -> Result<i64> {
    let x = pair_crossings(params, stats);
    if x.rem_euclid(2) != 0 {
        return Err(Error::ModelInconsistency(format!(
            "odd crossing total {x} between two closed curves"
        )));
    }
    Ok(x / 2)
}

/// Self-linking with the push-off along the carrying surface.
pub fn self_linking_from_stats(params: &TemplateParams, stats: &SelfStats) -> Result<i64> {
    let framing = params.twist_a * stats.passes_a + params.twist_b * stats.passes_b;
    if framing.rem_euclid(2) != 0 {
        return Err(Error::ModelInconsistency(format!(
            "framing twist {framing} is odd; the surface push-off does not close up"
        )));
    }
    Ok(pair_crossings(params, &stats.pairs) + framing / 2)
}

/// The calibrated template: one parameter set per coding surface.
///
/// The embedded branched surface is the same shape for every surface family,
/// but its twisting constants differ between the two codings; both sets are
/// pinned by the committed calibration before use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateModel {
    params_237: TemplateParams,
    params_334: TemplateParams,
}

impl TemplateModel {
    /// Assemble a model from raw parameter sets. This does not check the
    /// calibration fixture; [`crate::calib`] does that on every load.
    pub fn from_params(params_237: TemplateParams, params_334: TemplateParams) -> Result<Self> {
        params_237.validate()?;
        params_334.validate()?;
        Ok(TemplateModel { params_237, params_334 })
    }

    pub fn params_for(&self, s: &SurfaceSpec) -> Result<&TemplateParams> {
        if s.is_237() {
            Ok(&self.params_237)
        } else if s.is_334() {
            Ok(&self.params_334)
        } else {
            Err(Error::UnsupportedSurface(*s))
        }
    }

    pub fn hopf_linking_vector(&self, w: &CyclicWord) -> HopfVector {
        hopf_linking_vector(w)
    }

    /// Linking number in the ambient sphere of two distinct carried curves,
    /// both admissible on `s`.
    pub fn s3_linking(&self, s: &SurfaceSpec, w1: &CyclicWord, w2: &CyclicWord) -> Result<i64> {
        if !is_admissible(w1, s)? {
            return Err(Error::Inadmissible(w1.to_string(), *s));
        }
        if !is_admissible(w2, s)? {
            return Err(Error::Inadmissible(w2.to_string(), *s));
        }
        self.s3_linking_curve(s, w1, w2)
    }

    /// Linking of two distinct carried curves without the admissibility
    /// requirement; block words that are not stand-alone orbit codes are
    /// still carried curves.
    pub fn s3_linking_curve(
        &self,
        s: &SurfaceSpec,
        w1: &CyclicWord,
        w2: &CyclicWord,
    ) -> Result<i64> {
        if w1.canonicalize() == w2.canonicalize() {
            return Err(Error::SameOrbit(w1.to_string(), w2.to_string()));
        }
        let params = self.params_for(s)?;
        let u1 = coding_stream(s, w1)?;
        let u2 = coding_stream(s, w2)?;
        let stats = pair_stats(&u1, &u2, params.order_reversing_a, params.order_reversing_b)?;
        linking_from_stats(params, &stats)
    }

    /// Self-linking of an admissible curve with its surface push-off.
    pub fn s3_self_linking(&self, s: &SurfaceSpec, w: &CyclicWord) -> Result<i64> {
        if !is_admissible(w, s)? {
            return Err(Error::Inadmissible(w.to_string(), *s));
        }
        self.s3_self_linking_curve(s, w)
    }

    /// Self-linking without the admissibility requirement.
    pub fn s3_self_linking_curve(&self, s: &SurfaceSpec, w: &CyclicWord) -> Result<i64> {
        let params = self.params_for(s)?;
        let u = coding_stream(s, w)?;
        let stats = self_stats(&u, params.order_reversing_a, params.order_reversing_b)?;
        self_linking_from_stats(params, &stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib;

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
    fn hopf_vectors() {
        assert_eq!(hopf_linking_vector(&w("ababb")), HopfVector { l1: 2, l2: -3, l3: 0 });
        assert_eq!(hopf_linking_vector(&w("ab")), HopfVector { l1: 1, l2: -1, l3: 0 });
        assert_eq!(hopf_linking_vector(&w("abababbabb")), HopfVector { l1: 4, l2: -6, l3: 0 });
    }

    #[test]
    fn calibrated_s3_values() {
        let model = &calib::default_calibration().model;
        let h = w("ababb");
        assert_eq!(model.s3_linking(&s237(), &h, &w("abababb")).unwrap(), -8);
        assert_eq!(model.s3_linking(&s237(), &h, &w("ababbabb")).unwrap(), -9);
        assert_eq!(model.s3_linking(&s237(), &h, &w("abababbabb")).unwrap(), -12);
        assert_eq!(model.s3_self_linking(&s237(), &h).unwrap(), -6);
        assert_eq!(model.s3_self_linking(&s334(), &w("ab")).unwrap(), -1);
    }

    #[test]
    fn symmetry_and_rotation_invariance() {
        let model = &calib::default_calibration().model;
        let pairs = [
            (s237(), "ababb", "abababb"),
            (s237(), "abababb", "abababbabb"),
            (s334(), "ab", "aabb"),
            (s334(), "aabab", "aabb"),
        ];
        for (s, a, b) in pairs {
            let (a, b) = (w(a), w(b));
            let v1 = model.s3_linking(&s, &a, &b).unwrap();
            let v2 = model.s3_linking(&s, &b, &a).unwrap();
            assert_eq!(v1, v2, "asymmetric linking for {a},{b}");
            for i in 0..a.len() {
                let rot = a.rotation(i);
                assert_eq!(model.s3_linking(&s, &rot, &b).unwrap(), v1);
            }
        }
    }

    #[test]
    fn same_orbit_rejected() {
        let model = &calib::default_calibration().model;
        let h = w("ababb");
        assert!(matches!(
            model.s3_linking(&s237(), &h, &h.rotation(2)),
            Err(Error::SameOrbit(_, _))
        ));
    }

    #[test]
    fn proper_power_rejected() {
        let model = &calib::default_calibration().model;
        // abab is (ab)^2; inadmissible on (2,3,7) and a proper power anyway.
        assert!(model.s3_linking(&s237(), &w("abab"), &w("ababb")).is_err());
        assert!(model
            .s3_linking_curve(&s334(), &w("abab"), &w("ab"))
            .is_err());
    }
}
