//! Certification of the positivity criterion in linking form, the fast
//! block-additive evaluation against the two distinguished base orbits, and
//! the section invariants (Euler characteristic, genus, fixed points,
//! monodromy class) that follow from a passed certificate.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::calib::Calibration;
use crate::error::{Error, Result};
use crate::sl2::{self, LrWord};
use crate::surgery::{surgered_linking, surgered_self_linking, Rational};
use crate::words::{
    block_decomposition, enumerate_orbits, is_admissible, Block, CyclicWord, OrbitCode,
    SurfaceSpec,
};

/// The distinguished shortest-geodesic lift a certificate is run against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseRole {
    /// `(2,3,7)`: the lift of the height from the order-two point, code `ababb`.
    H,
    /// `(3,3,4)`: a lift of the figure-eight geodesic, code `ab`.
    Gamma8,
}

#[derive(Debug, Clone)]
pub struct BaseOrbit {
    pub surface: SurfaceSpec,
    pub word: CyclicWord,
    pub role: BaseRole,
}

impl BaseOrbit {
    pub fn h() -> Self {
        BaseOrbit {
            surface: SurfaceSpec::new(2, 3, 7).expect("static surface"),
            word: CyclicWord::parse("ababb").expect("static word"),
            role: BaseRole::H,
        }
    }

    pub fn gamma8() -> Self {
        BaseOrbit {
            surface: SurfaceSpec::new(3, 3, 4).expect("static surface"),
            word: CyclicWord::parse("ab").expect("static word"),
            role: BaseRole::Gamma8,
        }
    }

    /// The base for a surface; `word`, when given, must be the designated
    /// code of that surface's base orbit.
    pub fn for_surface(surface: &SurfaceSpec, word: Option<&str>) -> Result<Self> {
        let base = if surface.is_237() {
            BaseOrbit::h()
        } else if surface.is_334() {
            BaseOrbit::gamma8()
        } else {
            return Err(Error::UnsupportedSurface(*surface));
        };
        if let Some(word) = word {
            let given = CyclicWord::parse(word)?.canonicalize();
            if given != base.word {
                return Err(Error::InvalidWord(format!(
                    "base must be the designated code {} on ({}), got {}",
                    base.word, surface, given
                )));
            }
        }
        Ok(base)
    }
}

/// Evaluation strategy for a certificate run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Block-additive table evaluation.
    Fast,
    /// Full template-plus-surgery pipeline per orbit.
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Fast => "fast",
            Mode::Oracle => "oracle",
        }
    }
}

fn block_value_237(b: &Block) -> Rational {
    if b.i == 2 && b.j == 2 {
        Rational::from_integer(-2)
    } else {
        Rational::from_integer(-1)
    }
}

/// Block-additive linking of an admissible word with the base orbit.
///
/// Codes of the base orbit itself evaluate to the base's surgered
/// self-linking, which is also their single-block table value.
pub fn base_linking(cal: &Calibration, base: &BaseOrbit, w: &CyclicWord) -> Result<Rational> {
    if !is_admissible(w, &base.surface)? {
        return Err(Error::Inadmissible(w.to_string(), base.surface));
    }
    let blocks = block_decomposition(w, &base.surface)?;
    let mut acc = Rational::zero();
    for b in &blocks {
        acc += match base.role {
            BaseRole::H => block_value_237(b),
            BaseRole::Gamma8 => cal.table_334.value(b),
        };
    }
    Ok(acc)
}

/// Linking of one enumerated code with the base via the full pipeline.
fn oracle_linking(cal: &Calibration, base: &BaseOrbit, w: &CyclicWord) -> Result<Rational> {
    if w.canonicalize() == base.word {
        surgered_self_linking(&cal.model, &base.surface, w)
    } else {
        surgered_linking(&cal.model, &base.surface, &base.word, w)
    }
}

/// Outcome of evaluating every enumerated orbit against the base.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub surface: SurfaceSpec,
    pub base: CyclicWord,
    pub max_len: usize,
    pub mode: Mode,
    /// Surgered self-linking of the base; covers the boundary orbits of the
    /// normal blow-up.
    pub self_linking: Rational,
    /// True when every enumerated orbit links the base strictly negatively
    /// and the self-linking is strictly negative.
    pub all_negative: bool,
    /// Least-negative linking among codes of orbits other than the base,
    /// with a witness; `None` when only the base exists at this length.
    pub min_value: Option<Rational>,
    pub min_witness: Option<CyclicWord>,
    /// Orbits met exactly once by the section (by orbit tag, deduplicated).
    pub unit_intersection_orbits: Vec<CyclicWord>,
    /// Per-code linking values, sorted by (length, word).
    pub values: Vec<(OrbitCode, Rational)>,
    pub assumptions: Vec<String>,
    pub elapsed: Duration,
}

/// Evaluate the linking of every orbit of length at most `max_len` with the
/// base. A failed criterion is a valid report with `all_negative = false`.
pub fn certify(
    cal: &Calibration,
    base: &BaseOrbit,
    max_len: usize,
    mode: Mode,
) -> Result<CertificationReport> {
    if max_len < base.word.len() {
        return Err(Error::OutOfRange(format!(
            "max_len {} is below the base length {}",
            max_len,
            base.word.len()
        )));
    }
    let start = Instant::now();
    let codes = enumerate_orbits(&base.surface, max_len)?;
    let self_linking = surgered_self_linking(&cal.model, &base.surface, &base.word)?;

    let mut values: Vec<(OrbitCode, Rational)> = codes
        .into_par_iter()
        .map(|code| {
            let value = match mode {
                Mode::Fast => base_linking(cal, base, &code.word),
                Mode::Oracle => oracle_linking(cal, base, &code.word),
            }?;
            Ok((code, value))
        })
        .collect::<Result<Vec<_>>>()?;
    values.sort_by_key(|(code, _)| (code.word.len(), code.word.clone()));

    let all_negative = self_linking.is_negative()
        && values.iter().all(|(_, v)| v.is_negative());

    // Least-negative value among non-base orbits (the binding bound of the
    // certificate), with a deterministic witness.
    let mut min_value: Option<Rational> = None;
    let mut min_witness: Option<CyclicWord> = None;
    for (code, v) in &values {
        if code.orbit == base.word {
            continue;
        }
        if min_value.map_or(true, |m| *v > m) {
            min_value = Some(*v);
            min_witness = Some(code.word.clone());
        }
    }

    // Multiplicity from the self-linking denominator; orbits crossing the
    // section exactly once satisfy m * (-value) = 1.
    let multiplicity = *self_linking.denom();
    let mut unit_orbits: Vec<CyclicWord> = Vec::new();
    for (code, v) in &values {
        if Rational::from_integer(multiplicity) * -*v == Rational::from_integer(1)
            && !unit_orbits.contains(&code.orbit)
        {
            unit_orbits.push(code.orbit.clone());
        }
    }

    let mut assumptions = vec![
        format!(
            "certificate covers the finite code prefix of length <= {max_len}; \
             the unbounded statement follows from block additivity, not from \
             this enumeration"
        ),
        "boundary orbits of the normal blow-up are covered by the self-linking \
         value; the unstable-framing value is assumed equal to the stable one"
            .to_string(),
    ];
    if multiplicity > 1 {
        assumptions.push(format!(
            "multiplicity {multiplicity} read off the self-linking denominator"
        ));
    }

    Ok(CertificationReport {
        surface: base.surface,
        base: base.word.clone(),
        max_len,
        mode,
        self_linking,
        all_negative,
        min_value,
        min_witness,
        unit_intersection_orbits: unit_orbits,
        values,
        assumptions,
        elapsed: start.elapsed(),
    })
}

/// Topological data of the section bounded by the base orbit.
#[derive(Debug, Clone)]
pub struct SectionData {
    pub multiplicity: i64,
    pub chi: i64,
    pub boundary_components: u32,
    pub genus: u32,
    pub fixed_points: usize,
    pub trace: i64,
    pub monodromy: LrWord,
    pub assumptions: Vec<String>,
}

/// Configuration of the section computation; the boundary-component count
/// is an input, not a derived quantity.
#[derive(Debug, Clone, Copy)]
pub struct SectionConfig {
    pub boundary_components: u32,
    /// Length bound of the monodromy-class enumeration.
    pub monodromy_len: usize,
}

impl Default for SectionConfig {
    fn default() -> Self {
        SectionConfig { boundary_components: 1, monodromy_len: 12 }
    }
}

/// Genus from the Euler characteristic and the boundary-component count;
/// fails when `chi = 2 - 2g - b` has no nonnegative integer solution.
pub fn genus_from(chi: i64, boundary_components: u32) -> Result<u32> {
    let twice_genus = 2 - boundary_components as i64 - chi;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::ModelInconsistency(format!(
            "chi = {chi} with {boundary_components} boundary component(s) \
             gives no integer genus"
        )));
    }
    Ok((twice_genus / 2) as u32)
}

/// Compute the invariants of the section bounded by the base orbit from a
/// passed certificate.
pub fn section_data(
    cal: &Calibration,
    base: &BaseOrbit,
    max_len: usize,
    config: SectionConfig,
) -> Result<SectionData> {
    let report = certify(cal, base, max_len, Mode::Fast)?;
    if !report.all_negative {
        return Err(Error::ModelInconsistency(format!(
            "certificate failed on ({}) up to length {max_len}; no section data",
            base.surface
        )));
    }
    let multiplicity = *report.self_linking.denom();
    let chi_rat = Rational::from_integer(multiplicity) * report.self_linking;
    if !chi_rat.is_integer() {
        return Err(Error::ModelInconsistency(format!(
            "multiplicity {} times self-linking {} is not an integer",
            multiplicity, report.self_linking
        )));
    }
    let chi = chi_rat.to_integer();
    let genus = genus_from(chi, config.boundary_components)?;
    let fixed_points = report.unit_intersection_orbits.len();
    let trace = fixed_points as i64 + 2;
    let classes = sl2::classes_with_trace(trace, config.monodromy_len);
    let monodromy = match classes.len() {
        0 => return Err(Error::NoMonodromyClass { trace, max_len: config.monodromy_len }),
        1 => classes.into_iter().next().expect("one class"),
        _ => {
            return Err(Error::AmbiguousMonodromy {
                trace,
                candidates: classes.iter().map(|w| w.to_string()).collect(),
            })
        }
    };
    let mut assumptions = report.assumptions.clone();
    assumptions.push(format!(
        "boundary components = {} taken as input, not derived",
        config.boundary_components
    ));
    Ok(SectionData {
        multiplicity,
        chi,
        boundary_components: config.boundary_components,
        genus,
        fixed_points,
        trace,
        monodromy,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::default_calibration;

    fn w(s: &str) -> CyclicWord {
        CyclicWord::parse(s).unwrap()
    }

    #[test]
    fn base_linking_examples() {
        let cal = default_calibration();
        let h = BaseOrbit::h();
        // x^2 y . x y decomposes into two blocks of value -1.
        assert_eq!(
            base_linking(cal, &h, &w("abababbababb")).unwrap(),
            Rational::from_integer(-2)
        );
        assert_eq!(
            base_linking(cal, &h, &w("abababbabb")).unwrap(),
            Rational::from_integer(-2)
        );
        let g8 = BaseOrbit::gamma8();
        assert_eq!(base_linking(cal, &g8, &w("ab")).unwrap(), Rational::new(-1, 3));
    }

    #[test]
    fn base_for_surface_checks_word() {
        let s = SurfaceSpec::new(2, 3, 7).unwrap();
        assert!(BaseOrbit::for_surface(&s, Some("ababb")).is_ok());
        assert!(BaseOrbit::for_surface(&s, Some("babba")).is_ok()); // rotation
        assert!(BaseOrbit::for_surface(&s, Some("abababb")).is_err());
    }

    #[test]
    fn certify_single_orbit_at_len_5() {
        let cal = default_calibration();
        let report = certify(cal, &BaseOrbit::h(), 5, Mode::Fast).unwrap();
        assert!(report.all_negative);
        assert_eq!(report.self_linking, Rational::from_integer(-1));
        assert_eq!(report.values.len(), 1);
        assert!(report.min_value.is_none());
    }

    #[test]
    fn certify_rejects_short_bound() {
        let cal = default_calibration();
        assert!(certify(cal, &BaseOrbit::h(), 3, Mode::Fast).is_err());
    }

    #[test]
    fn genus_parity_check() {
        assert_eq!(genus_from(-1, 1).unwrap(), 1);
        // chi = -2 with one boundary component has no integer genus.
        assert!(genus_from(-2, 1).is_err());
    }

    #[test]
    fn section_data_both_bases() {
        let cal = default_calibration();
        for base in [BaseOrbit::h(), BaseOrbit::gamma8()] {
            let data = section_data(cal, &base, 14, SectionConfig::default()).unwrap();
            assert_eq!(data.chi, -1);
            assert_eq!(data.boundary_components, 1);
            assert_eq!(data.genus, 1);
            assert_eq!(data.fixed_points, 1);
            assert_eq!(data.trace, 3);
            assert!(data.monodromy.cyclic_eq(&LrWord::parse("RL").unwrap()));
        }
        let h = section_data(cal, &BaseOrbit::h(), 14, SectionConfig::default()).unwrap();
        assert_eq!(h.multiplicity, 1);
        let g8 = section_data(cal, &BaseOrbit::gamma8(), 14, SectionConfig::default()).unwrap();
        assert_eq!(g8.multiplicity, 3);
    }
}
