//! Exact rational arithmetic for surgered linking numbers, and the homology
//! of the surgered manifolds via integer Smith normal form.
//!
//! All arithmetic is exact: linking values are rationals, homology is
//! computed over arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::template::{HopfVector, TemplateModel};
use crate::words::{is_admissible, CyclicWord, SurfaceSpec};

/// Exact fraction used for every linking number and homological quantity.
pub type Rational = Ratio<i64>;

/// Format a rational as `num/den` with a positive denominator, e.g. `-1/3`
/// or `-1/1`. Machine outputs always carry the denominator.
pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// The 3x3 symmetric rational form of the surgery linking formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QForm {
    entries: [[Rational; 3]; 3],
    surface: SurfaceSpec,
}

impl QForm {
    pub fn entries(&self) -> &[[Rational; 3]; 3] {
        &self.entries
    }

    pub fn surface(&self) -> &SurfaceSpec {
        &self.surface
    }

    /// Evaluate the bilinear form on two integer vectors.
    pub fn eval(&self, u: &HopfVector, v: &HopfVector) -> Rational {
        let uv = [u.l1, u.l2, u.l3];
        let vv = [v.l1, v.l2, v.l3];
        let mut acc = Rational::zero();
        for (i, &ui) in uv.iter().enumerate() {
            for (j, &vj) in vv.iter().enumerate() {
                acc += self.entries[i][j] * Rational::from_integer(ui * vj);
            }
        }
        acc
    }
}

/// The surgery form: `1/(pqr - pq - qr - rp)` times the integer matrix
/// `[[qr-q-r, r, q], [r, pr-p-r, p], [q, p, pq-p-q]]`.
pub fn q_form(s: &SurfaceSpec) -> Result<QForm> {
    let d = s.homology_order();
    if d == 0 {
        return Err(Error::InvalidSurface {
            p: s.p(),
            q: s.q(),
            r: s.r(),
            reason: "degenerate surgery form".into(),
        });
    }
    let (p, q, r) = (s.p() as i64, s.q() as i64, s.r() as i64);
    let m = [
        [q * r - q - r, r, q],
        [r, p * r - p - r, p],
        [q, p, p * q - p - q],
    ];
    let mut entries = [[Rational::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = Rational::new(m[i][j], d);
        }
    }
    Ok(QForm { entries, surface: *s })
}

fn check_pair(s: &SurfaceSpec, w1: &CyclicWord, w2: &CyclicWord) -> Result<()> {
    if !is_admissible(w1, s)? {
        return Err(Error::Inadmissible(w1.to_string(), *s));
    }
    if !is_admissible(w2, s)? {
        return Err(Error::Inadmissible(w2.to_string(), *s));
    }
    if w1.canonicalize() == w2.canonicalize() {
        return Err(Error::SameOrbit(w1.to_string(), w2.to_string()));
    }
    Ok(())
}

/// Linking number of the two orbits in the surgered manifold: the carried
/// linking plus the surgery correction term.
pub fn surgered_linking(
    model: &TemplateModel,
    s: &SurfaceSpec,
    w1: &CyclicWord,
    w2: &CyclicWord,
) -> Result<Rational> {
    check_pair(s, w1, w2)?;
    let carried = model.s3_linking(s, w1, w2)?;
    let q = q_form(s)?;
    let term = q.eval(&model.hopf_linking_vector(w1), &model.hopf_linking_vector(w2));
    Ok(Rational::from_integer(carried) + term)
}

/// Linking of an orbit with its stable push-off in the surgered manifold.
pub fn surgered_self_linking(
    model: &TemplateModel,
    s: &SurfaceSpec,
    w: &CyclicWord,
) -> Result<Rational> {
    if !is_admissible(w, s)? {
        return Err(Error::Inadmissible(w.to_string(), *s));
    }
    let carried = model.s3_self_linking(s, w)?;
    let q = q_form(s)?;
    let v = model.hopf_linking_vector(w);
    Ok(Rational::from_integer(carried) + q.eval(&v, &v))
}

/// Presentation matrix of the first homology group of the surgered manifold.
pub fn presentation_matrix(s: &SurfaceSpec) -> [[i64; 4]; 4] {
    let (p, q, r) = (s.p() as i64, s.q() as i64, s.r() as i64);
    [
        [p, 0, 0, 1],
        [0, q, 0, 1],
        [0, 0, r, 1],
        [1, 1, 1, 1],
    ]
}

/// A finitely generated finite abelian group as invariant factors, each
/// dividing the next; the empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, f| acc * f)
    }

    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            "trivial".to_string()
        } else {
            self.factors
                .iter()
                .map(|f| format!("Z/{f}"))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
pub struct SmithDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = BigInt::zero();
            for t in 0..k {
                acc += &a[i][t] * &b[t][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    // Fraction-free Gaussian elimination (Bareiss); fine for the small
    // matrices used here.
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Integer Smith normal form with pivoting on the least nonzero absolute
/// value. Returns `(u, d, v)` with `u * m * v = d`.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut d: Vec<Vec<BigInt>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        // Least-absolute-value nonzero pivot in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[i][j].abs() < d[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        let mut dirty = false;
        for i in t + 1..rows {
            if !d[i][t].is_zero() {
                let f = &d[i][t] / &d[t][t];
                if !f.is_zero() {
                    for j in 0..cols {
                        let sub = &f * &d[t][j];
                        d[i][j] -= sub;
                    }
                    for j in 0..rows {
                        let sub = &f * &u[t][j];
                        u[i][j] -= sub;
                    }
                }
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..cols {
            if !d[t][j].is_zero() {
                let f = &d[t][j] / &d[t][t];
                if !f.is_zero() {
                    for i in 0..rows {
                        let sub = &f * &d[i][t];
                        d[i][j] -= sub;
                        let subv = &f * &v[i][t];
                        v[i][j] -= subv;
                    }
                }
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue; // pick a smaller pivot and repeat
        }
        // Enforce the divisibility chain: fold any non-multiple into place.
        let mut offender = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            for j in 0..cols {
                let add = d[i][j].clone();
                d[t][j] += add;
            }
            for j in 0..rows {
                let add = u[i][j].clone();
                u[t][j] += add;
            }
            continue;
        }
        if d[t][t].is_negative() {
            for i in 0..rows {
                d[i][t] = -d[i][t].clone();
                v[i][t] = -v[i][t].clone();
            }
        }
        t += 1;
    }
    SmithDecomposition { u, d, v }
}

/// First homology of the surgered manifold, as invariant factors.
pub fn homology(s: &SurfaceSpec) -> AbelianGroup {
    let pm = presentation_matrix(s);
    let m: Vec<Vec<BigInt>> = pm
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let snf = smith_normal_form(&m);
    let mut factors = Vec::new();
    for i in 0..4 {
        let e = snf.d[i][i].clone();
        if e.is_zero() {
            // A zero elementary divisor would mean a free summand; the
            // hyperbolicity invariant rules it out.
            continue;
        }
        if e.abs() > BigInt::one() {
            factors.push(e.abs());
        }
    }
    AbelianGroup { factors }
}

/// Verification helper: recompute `u * m * v` and check it equals `d` with
/// the divisibility chain. Used by tests.
pub fn verify_smith(m: &[Vec<BigInt>], snf: &SmithDecomposition) -> bool {
    let umv = mat_mul(&mat_mul(&snf.u, m), &snf.v);
    if umv != snf.d {
        return false;
    }
    if det_big(&snf.u).abs() != BigInt::one() || det_big(&snf.v).abs() != BigInt::one() {
        return false;
    }
    let n = snf.d.len().min(snf.d[0].len());
    for i in 0..snf.d.len() {
        for j in 0..snf.d[i].len() {
            if i != j && !snf.d[i][j].is_zero() {
                return false;
            }
        }
    }
    for i in 1..n {
        let prev = &snf.d[i - 1][i - 1];
        let cur = &snf.d[i][i];
        if !prev.is_zero() && !cur.is_zero() && !(cur % prev).is_zero() {
            return false;
        }
        if prev.is_zero() && !cur.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, q: u32, r: u32) -> SurfaceSpec {
        SurfaceSpec::new(p, q, r).unwrap()
    }

    #[test]
    fn q_form_237() {
        let q = q_form(&s(2, 3, 7)).unwrap();
        let expect = [[11, 7, 3], [7, 5, 2], [3, 2, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q.entries()[i][j], Rational::from_integer(expect[i][j]));
            }
        }
    }

    #[test]
    fn q_form_334() {
        let q = q_form(&s(3, 3, 4)).unwrap();
        let expect = [[5, 4, 3], [4, 5, 3], [3, 3, 3]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q.entries()[i][j], Rational::new(expect[i][j], 3));
            }
        }
    }

    #[test]
    fn q_form_symmetric() {
        for p in 2..=6 {
            for q in p..=8 {
                for r in q..=12 {
                    let Ok(spec) = SurfaceSpec::new(p, q, r) else { continue };
                    let form = q_form(&spec).unwrap();
                    for i in 0..3 {
                        for j in 0..3 {
                            assert_eq!(form.entries()[i][j], form.entries()[j][i]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn presentation_matrix_examples() {
        assert_eq!(
            presentation_matrix(&s(2, 3, 7)),
            [[2, 0, 0, 1], [0, 3, 0, 1], [0, 0, 7, 1], [1, 1, 1, 1]]
        );
        assert_eq!(
            presentation_matrix(&s(3, 3, 4)),
            [[3, 0, 0, 1], [0, 3, 0, 1], [0, 0, 4, 1], [1, 1, 1, 1]]
        );
    }

    #[test]
    fn presentation_determinant_matches_order() {
        for p in 2..=12u32 {
            for q in p..=12 {
                for r in q..=12 {
                    let Ok(spec) = SurfaceSpec::new(p, q, r) else { continue };
                    let m: Vec<Vec<BigInt>> = presentation_matrix(&spec)
                        .iter()
                        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                        .collect();
                    assert_eq!(
                        det_big(&m).abs(),
                        BigInt::from(spec.homology_order().abs()),
                        "determinant mismatch at ({spec})"
                    );
                }
            }
        }
    }

    #[test]
    fn homology_examples() {
        assert!(homology(&s(2, 3, 7)).is_trivial());
        let h334 = homology(&s(3, 3, 4));
        assert_eq!(h334.invariant_factors(), &[BigInt::from(3)]);
        assert_eq!(homology(&s(2, 3, 8)).order(), BigInt::from(2));
    }

    #[test]
    fn homology_order_matches_formula() {
        for p in 2..=12u32 {
            for q in p..=12 {
                for r in q..=12 {
                    let Ok(spec) = SurfaceSpec::new(p, q, r) else { continue };
                    let h = homology(&spec);
                    assert_eq!(
                        h.order(),
                        BigInt::from(spec.homology_order()),
                        "wrong order at ({spec})"
                    );
                }
            }
        }
    }

    #[test]
    fn smith_verifies() {
        for p in 2..=9u32 {
            for q in p..=9 {
                for r in q..=9 {
                    let Ok(spec) = SurfaceSpec::new(p, q, r) else { continue };
                    let m: Vec<Vec<BigInt>> = presentation_matrix(&spec)
                        .iter()
                        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                        .collect();
                    let snf = smith_normal_form(&m);
                    assert!(verify_smith(&m, &snf), "snf fails verification at ({spec})");
                }
            }
        }
    }
}
