//! HOMFLY polynomials by descending-diagram skein recursion, coefficient
//! polynomial extraction, Conway data, and the closed-form family
//! polynomials for pretzel and twist knots.
//!
//! Convention: `v^-1 P_+ - v P_- = z P_0` with `P_unknot = 1`.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::knotio::{to_diagram, PDCode, Presentation};
use crate::poly::{HomflyValue, LaurentPoly};

pub const DEFAULT_CROSSING_LIMIT: usize = 16;

// below this size the rayon join overhead outweighs the branch work
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 7;

/// Skein computation engine. Immutable configuration; safe to share.
pub struct SkeinEngine {
    pub crossing_limit: usize,
    pub parallel: bool,
    cache: Option<Mutex<HashMap<String, HomflyValue>>>,
}

impl Default for SkeinEngine {
    fn default() -> Self {
        Self {
            crossing_limit: DEFAULT_CROSSING_LIMIT,
            parallel: cfg!(feature = "parallel"),
            cache: None,
        }
    }
}

impl SkeinEngine {
    pub fn new(crossing_limit: usize) -> Self {
        Self { crossing_limit, ..Self::default() }
    }

    pub fn sequential(crossing_limit: usize) -> Self {
        Self { crossing_limit, parallel: false, cache: None }
    }

    /// Enable memoization keyed by canonical PD text.
    pub fn with_cache(mut self) -> Self {
        self.cache = Some(Mutex::new(HashMap::new()));
        self
    }

    pub fn homfly(&self, pd: &PDCode) -> Result<HomflyValue, Error> {
        if pd.crossing_count() > self.crossing_limit {
            return Err(Error::CrossingLimit {
                crossings: pd.crossing_count(),
                limit: self.crossing_limit,
            });
        }
        let d = crate::knotio::Diagram::from_pd(pd)?;
        Ok(self.eval(&d))
    }

    pub fn homfly_of(&self, p: &Presentation) -> Result<HomflyValue, Error> {
        let d = to_diagram(p)?;
        if d.crossing_count() > self.crossing_limit {
            return Err(Error::CrossingLimit {
                crossings: d.crossing_count(),
                limit: self.crossing_limit,
            });
        }
        Ok(self.eval(&d))
    }

    fn eval(&self, d: &crate::knotio::Diagram) -> HomflyValue {
        if let Some(cache) = &self.cache {
            let key = d.to_pd().to_string();
            if let Some(hit) = cache.lock().unwrap().get(&key) {
                return hit.clone();
            }
            let value = self.eval_uncached(d);
            cache.lock().unwrap().insert(key, value.clone());
            return value;
        }
        self.eval_uncached(d)
    }

    fn eval_uncached(&self, d: &crate::knotio::Diagram) -> HomflyValue {
        let Some(branch) = find_branch_crossing(d) else {
            // descending diagram: an unlink
            let c = d.component_count();
            return HomflyValue::delta().pow(c as u32 - 1);
        };
        let sign = d.sign(branch);
        let switched = d.switch(branch);
        let smoothed = d.smooth(branch);

        #[cfg(feature = "parallel")]
        let (h_switch, h_smooth) = if self.parallel && d.crossing_count() >= PARALLEL_THRESHOLD {
            rayon::join(|| self.eval(&switched), || self.eval(&smoothed))
        } else {
            (self.eval(&switched), self.eval(&smoothed))
        };
        #[cfg(not(feature = "parallel"))]
        let (h_switch, h_smooth) = (self.eval(&switched), self.eval(&smoothed));

        if sign > 0 {
            // P_+ = v^2 P_- + v z P_0
            h_switch
                .scale_monomial(2, 0)
                .add(&h_smooth.scale_monomial(1, 1))
        } else {
            // P_- = v^-2 P_+ - v^-1 z P_0
            h_switch
                .scale_monomial(-2, 0)
                .sub(&h_smooth.scale_monomial(-1, 1))
        }
    }
}

/// First crossing reached on its under-strand before its over-strand when
/// traversing components from their base points (lowest arc labels).
fn find_branch_crossing(d: &crate::knotio::Diagram) -> Option<usize> {
    let mut passed: HashSet<usize> = HashSet::new();
    for cycle in d.components() {
        for (c, p) in cycle {
            if passed.contains(&c) {
                continue;
            }
            passed.insert(c);
            if p == 0 {
                return Some(c);
            }
        }
    }
    None
}

/// HOMFLY polynomial of a PD code under the default engine.
pub fn homfly(pd: &PDCode) -> Result<HomflyValue, Error> {
    SkeinEngine::default().homfly(pd)
}

/// HOMFLY polynomial of a presentation under the default engine.
pub fn homfly_of(p: &Presentation) -> Result<HomflyValue, Error> {
    SkeinEngine::default().homfly_of(p)
}

/// The coefficient polynomials `p^i` of a HOMFLY value:
/// `P = (v^-1 z)^(1-#K) Σ p^i(v) z^(2i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDecomposition {
    pub component_count: usize,
    pub coeffs: Vec<LaurentPoly>,
}

impl CoefficientDecomposition {
    pub fn p0(&self) -> &LaurentPoly {
        &self.coeffs[0]
    }

    /// Reassemble `(v^-1 z)^(1-#K) Σ p^i(v) z^(2i)`.
    pub fn reassemble(&self) -> HomflyValue {
        let mut sum = HomflyValue::zero();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (e, c) in p.terms() {
                sum = sum.add(&HomflyValue::monomial(e, 2 * i as i64, c.clone()));
            }
        }
        let k = self.component_count as i64 - 1;
        sum.scale_monomial(k, -k)
    }
}

/// Extract coefficient polynomials from the HOMFLY value of an
/// `n_components`-component link.
pub fn coefficient_polys(
    h: &HomflyValue,
    n_components: usize,
) -> Result<CoefficientDecomposition, Error> {
    assert!(n_components >= 1);
    let k = n_components as i64 - 1;
    let normalized = h.scale_monomial(-k, k);
    let mut coeffs: Vec<LaurentPoly> = Vec::new();
    for ((v, z), c) in normalized.terms() {
        if z < 0 || z % 2 != 0 {
            return Err(Error::MalformedHomfly(format!(
                "z-exponent {z} after normalization (wrong component count?)"
            )));
        }
        let i = (z / 2) as usize;
        while coeffs.len() <= i {
            coeffs.push(LaurentPoly::zero());
        }
        coeffs[i] = coeffs[i].add(&LaurentPoly::monomial(v, c.clone()));
    }
    if coeffs.is_empty() {
        coeffs.push(LaurentPoly::zero());
    }
    let decomp = CoefficientDecomposition { component_count: n_components, coeffs };
    debug_assert_eq!(decomp.reassemble(), *h);
    Ok(decomp)
}

/// Conway polynomial (in `z`) of a knot: the HOMFLY value at `v = 1`.
pub fn conway(h: &HomflyValue) -> LaurentPoly {
    h.eval_v_one()
}

/// Coefficient of `z^2` in the Conway polynomial.
pub fn a2_of(h: &HomflyValue) -> BigInt {
    conway(h).coeff(2)
}

/// Closed-form zeroth coefficient polynomial of the pretzel knot
/// P(2p+1, 2q+1, 2r+1):
/// `v^2(p+q+1) + v^2(q+r+1) + v^2(r+p+1) - v^2(p+q+r+1) - v^2(p+q+r+2)`.
pub fn pretzel_p0(p: u64, q: u64, r: u64) -> LaurentPoly {
    let (p, q, r) = (p as i64, q as i64, r as i64);
    LaurentPoly::from_terms([
        (2 * (p + q + 1), BigInt::one()),
        (2 * (q + r + 1), BigInt::one()),
        (2 * (r + p + 1), BigInt::one()),
        (2 * (p + q + r + 1), -BigInt::one()),
        (2 * (p + q + r + 2), -BigInt::one()),
    ])
}

/// Closed-form zeroth coefficient polynomial of the 2m-twist knot:
/// `v^-2 - v^(2m-2) + v^2m`.
pub fn twist_p0(m: u64) -> LaurentPoly {
    assert!(m >= 1);
    let m = m as i64;
    LaurentPoly::from_terms([
        (-2, BigInt::one()),
        (2 * m - 2, -BigInt::one()),
        (2 * m, BigInt::one()),
    ])
}

/// True when the two strands meeting at crossing `index` belong to the same
/// component (the δ = 0 case of the zeroth-coefficient skein relation).
pub fn crossing_strands_same_component(pd: &PDCode, index: usize) -> Result<bool, Error> {
    let d = crate::knotio::Diagram::from_pd(pd)?;
    let comps = d.components();
    let find = |e: (usize, u8)| comps.iter().position(|c| c.contains(&e)).unwrap();
    let under = find((index, 0));
    let over = find((index, if d.sign(index) > 0 { 3 } else { 1 }));
    Ok(under == over)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::BraidWord;

    fn lp(text: &str) -> LaurentPoly {
        LaurentPoly::parse(text).unwrap()
    }

    fn braid(letters: Vec<i32>, strands: usize) -> Presentation {
        Presentation::Braid(BraidWord::new(letters, strands).unwrap())
    }

    pub(crate) fn trefoil_homfly() -> HomflyValue {
        // 2v^2 - v^4 + v^2 z^2, derived by hand skein through the Hopf link
        HomflyValue::from_terms([((2, 0), 2), ((4, 0), -1), ((2, 2), 1)])
    }

    #[test]
    fn unknot_is_one() {
        assert_eq!(homfly(&PDCode::empty()).unwrap(), HomflyValue::one());
        assert_eq!(
            homfly_of(&Presentation::Twist(0)).unwrap(),
            HomflyValue::one()
        );
    }

    #[test]
    fn positive_trefoil() {
        let h = homfly_of(&braid(vec![1, 1, 1], 2)).unwrap();
        assert_eq!(h, trefoil_homfly());
    }

    #[test]
    fn positive_hopf_link() {
        // (v - v^3) z^-1 + v z, one-step hand skein from the 2-component unlink
        let h = homfly_of(&braid(vec![1, 1], 2)).unwrap();
        let expected =
            HomflyValue::from_terms([((1, -1), 1), ((3, -1), -1), ((1, 1), 1)]);
        assert_eq!(h, expected);
    }

    #[test]
    fn hopf_from_smoothing_trefoil() {
        let pd = crate::knotio::to_pd(&braid(vec![1, 1, 1], 2)).unwrap();
        let smoothed = crate::knotio::smooth_crossing(&pd, 0).unwrap();
        assert_eq!(smoothed.crossing_count(), 2);
        let h = homfly(&smoothed).unwrap();
        let expected =
            HomflyValue::from_terms([((1, -1), 1), ((3, -1), -1), ((1, 1), 1)]);
        assert_eq!(h, expected);
    }

    #[test]
    fn switching_trefoil_crossing_unknots() {
        let pd = crate::knotio::to_pd(&braid(vec![1, 1, 1], 2)).unwrap();
        let switched = crate::knotio::switch_crossing(&pd, 0).unwrap();
        assert_eq!(homfly(&switched).unwrap(), HomflyValue::one());
    }

    #[test]
    fn mirror_trefoil() {
        let h = homfly_of(&braid(vec![-1, -1, -1], 2)).unwrap();
        let expected = HomflyValue::from_terms([((-2, 0), 2), ((-4, 0), -1), ((-2, 2), 1)]);
        assert_eq!(h, expected);
        assert_eq!(h, trefoil_homfly().mirror_v());
    }

    #[test]
    fn pretzel_111_is_trefoil() {
        let h = homfly_of(&Presentation::Pretzel(0, 0, 0)).unwrap();
        assert_eq!(h, trefoil_homfly());
    }

    #[test]
    fn coefficient_extraction() {
        let d = coefficient_polys(&trefoil_homfly(), 1).unwrap();
        assert_eq!(d.coeffs.len(), 2);
        assert_eq!(*d.p0(), lp("2v^2 - v^4"));
        assert_eq!(d.coeffs[1], lp("v^2"));

        let hopf = homfly_of(&braid(vec![1, 1], 2)).unwrap();
        let d = coefficient_polys(&hopf, 2).unwrap();
        assert_eq!(*d.p0(), lp("1 - v^2"));

        let d = coefficient_polys(&HomflyValue::one(), 1).unwrap();
        assert_eq!(*d.p0(), LaurentPoly::one());
    }

    #[test]
    fn wrong_component_count_is_rejected() {
        let hopf = homfly_of(&braid(vec![1, 1], 2)).unwrap();
        assert!(matches!(
            coefficient_polys(&hopf, 1),
            Err(Error::MalformedHomfly(_))
        ));
    }

    #[test]
    fn conway_and_a2() {
        assert_eq!(conway(&trefoil_homfly()), lp("1 + v^2")); // 1 + z^2
        assert_eq!(a2_of(&trefoil_homfly()), BigInt::from(1));
        assert_eq!(a2_of(&HomflyValue::one()), BigInt::from(0));
        // figure-eight: 1 - z^2
        let fig8 = homfly_of(&Presentation::Twist(1)).unwrap();
        assert_eq!(conway(&fig8), lp("1 - v^2"));
        assert_eq!(a2_of(&fig8), BigInt::from(-1));
    }

    #[test]
    fn pretzel_p0_examples() {
        assert_eq!(pretzel_p0(0, 0, 0), lp("2v^2 - v^4"));
        assert_eq!(pretzel_p0(1, 1, 1), lp("3v^6 - v^8 - v^10"));
        // (1,2,3): exponent pairs 2(p+q+1)=8, 2(q+r+1)=12, 2(r+p+1)=10,
        // minus v^14 and v^16
        assert_eq!(pretzel_p0(1, 2, 3), lp("v^8 + v^10 + v^12 - v^14 - v^16"));
    }

    #[test]
    fn twist_p0_examples() {
        assert_eq!(twist_p0(1), lp("v^-2 - 1 + v^2"));
        assert_eq!(twist_p0(3), lp("v^-2 - v^4 + v^6"));
        for m in 1..=8 {
            assert_eq!(twist_p0(m).eval_one(), BigInt::from(1));
        }
    }

    #[test]
    fn diagram_p0_matches_closed_forms_small() {
        let h = homfly_of(&Presentation::Pretzel(1, 0, 0)).unwrap();
        let d = coefficient_polys(&h, 1).unwrap();
        assert_eq!(*d.p0(), pretzel_p0(1, 0, 0));

        let h = homfly_of(&Presentation::Twist(1)).unwrap();
        let d = coefficient_polys(&h, 1).unwrap();
        assert_eq!(*d.p0(), twist_p0(1));

        let h = homfly_of(&Presentation::Twist(2)).unwrap();
        let d = coefficient_polys(&h, 1).unwrap();
        assert_eq!(*d.p0(), twist_p0(2));
    }

    #[test]
    fn crossing_limit_guard() {
        let p = braid(vec![1; 17], 2);
        assert!(matches!(
            homfly_of(&p),
            Err(Error::CrossingLimit { crossings: 17, limit: 16 })
        ));
    }

    #[test]
    fn base_point_choice_does_not_matter() {
        // rotate the arc numbering of the trefoil within its single
        // component; the engine picks a different base point but must agree
        let pd = crate::knotio::to_pd(&braid(vec![1, 1, 1], 2)).unwrap();
        let h = homfly(&pd).unwrap();
        let n = 2 * pd.crossing_count() as u32;
        for shift in 1..n {
            let rotated = PDCode {
                crossings: pd
                    .crossings
                    .iter()
                    .map(|x| x.map(|l| (l - 1 + shift) % n + 1))
                    .collect(),
                free_loops: 0,
            };
            assert_eq!(homfly(&rotated).unwrap(), h);
        }
    }

    #[test]
    fn cache_agrees_with_uncached() {
        let p = Presentation::Pretzel(1, 1, 0);
        let plain = SkeinEngine::default().homfly_of(&p).unwrap();
        let cached = SkeinEngine::default().with_cache().homfly_of(&p).unwrap();
        assert_eq!(plain, cached);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = Presentation::Pretzel(1, 1, 1);
        let seq = SkeinEngine::sequential(16).homfly_of(&p).unwrap();
        let par = SkeinEngine::default().homfly_of(&p).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn homfly_value_parity_invariant() {
        for p in [
            braid(vec![1, 1, 1], 2),
            braid(vec![1, -2, 1, -2], 3),
            Presentation::Pretzel(1, 1, 0),
            Presentation::Twist(2),
        ] {
            let d = to_diagram(&p).unwrap();
            let n = d.component_count() as i64;
            let h = homfly_of(&p).unwrap();
            for ((v, z), _) in h.terms() {
                assert!(z >= -(n - 1));
                assert_eq!((v + z).rem_euclid(2), 0);
            }
        }
    }
}
