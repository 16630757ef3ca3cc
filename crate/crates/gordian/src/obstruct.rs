//! Lower bounds for the genus non-increasing totally positive unknotting
//! number of a genus one knot, read off the zeroth coefficient polynomial:
//! the five sign clauses, the refined per-length exclusion through the
//! sum-of-squares classification, the Gordian-distance-one test, and a
//! bounded search for explicit square decompositions.
//!
//! All bounds are conditional on the genus one hypothesis; callers assert it
//! (family presentations are structurally genus ≤ 1).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::poly::LaurentPoly;
use crate::squares::sum_of_squares_feasible;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(u64),
    Infinite,
}

impl Bound {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Bound::Finite(n) => Some(*n),
            Bound::Infinite => None,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(n) => s.serialize_u64(*n),
            Bound::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    #[serde(rename = "i-a")]
    IA,
    #[serde(rename = "i-b")]
    IB,
    #[serde(rename = "i-c")]
    IC,
    #[serde(rename = "ii-a")]
    IIA,
    #[serde(rename = "ii-b")]
    IIB,
    #[serde(rename = "refined-n-exclusion")]
    RefinedNExclusion,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::IA => "i-a",
            Rule::IB => "i-b",
            Rule::IC => "i-c",
            Rule::IIA => "ii-a",
            Rule::IIB => "ii-b",
            Rule::RefinedNExclusion => "refined-n-exclusion",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A certified lower bound with the trace of rules that fired. Only rules
/// with informative conclusions (a bound ≥ 1, or infinity) are recorded.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bound: Bound,
    pub rules_fired: Vec<Rule>,
    /// validity is conditional on g(K) = 1
    pub genus_assumption: bool,
    /// the refined search ran out of candidate lengths without settling
    pub exhausted: bool,
}

fn validate_knot_p0(p0: &LaurentPoly) -> Result<(), Error> {
    if p0.is_zero() {
        return Err(Error::NotKnotP0("zero polynomial".into()));
    }
    if !p0.is_even_supported() {
        return Err(Error::NotKnotP0("odd exponents present".into()));
    }
    if !p0.eval_one().is_one() {
        return Err(Error::NotKnotP0(format!("p0(1) = {} != 1", p0.eval_one())));
    }
    if !p0.deriv_one().is_zero() {
        return Err(Error::NotKnotP0(format!(
            "p0'(1) = {} != 0",
            p0.deriv_one()
        )));
    }
    Ok(())
}

/// Extreme data of `p0 = Σ h_i v^2i`: (m, M, h_m, h_M, h_m') where m' is
/// the next supported index above m, when present.
fn extreme_data(p0: &LaurentPoly) -> (i64, i64, BigInt, BigInt, Option<BigInt>) {
    let (lo, hi, c_lo, c_hi) = p0.bounds().unwrap();
    let h_m_prime = p0
        .terms()
        .map(|(e, c)| (e / 2, c))
        .find(|(i, _)| *i > lo / 2)
        .map(|(_, c)| c.clone());
    (lo / 2, hi / 2, c_lo, c_hi, h_m_prime)
}

/// Apply the five sign clauses to a knot zeroth coefficient polynomial and
/// combine them into one lower bound (each clause is independently valid,
/// so the maximum is).
pub fn theorem_bound(p0: &LaurentPoly) -> Result<BoundReport, Error> {
    validate_knot_p0(p0)?;
    let (m, big_m, h_m, h_big_m, h_m_prime) = extreme_data(p0);
    let mut rules = Vec::new();
    let mut best: i64 = 0;
    let mut fire = |rules: &mut Vec<Rule>, rule: Rule, value: i64| {
        if value >= 1 {
            rules.push(rule);
        }
        if value > best {
            best = value;
        }
    };

    if h_m.is_negative() {
        return Ok(BoundReport {
            bound: Bound::Infinite,
            rules_fired: vec![Rule::IB],
            genus_assumption: true,
            exhausted: false,
        });
    }
    fire(&mut rules, Rule::IA, m);
    if h_m.is_one() {
        if let Some(hp) = &h_m_prime {
            if hp.is_negative() {
                fire(&mut rules, Rule::IC, m + 1);
            }
        }
    }
    if h_big_m.is_positive() {
        fire(&mut rules, Rule::IIA, big_m);
    }
    if h_big_m > BigInt::one() {
        fire(&mut rules, Rule::IIB, big_m + 1);
    }
    Ok(BoundReport {
        bound: Bound::Finite(best.max(0) as u64),
        rules_fired: rules,
        genus_assumption: true,
        exhausted: false,
    })
}

/// For each candidate length `n ≤ n_max`, the quotient
/// `g_n = (p0 - v^2n) / (1 - v^2)` would have to be a sum of at most n
/// squares, so its extreme coefficients must be. The smallest candidate
/// that survives is the bound; if every candidate dies and the bottom
/// coefficient is negative the bound is infinite, otherwise the search is
/// reported as exhausted at `n_max + 1`.
pub fn refined_bound(p0: &LaurentPoly, n_max: u64) -> Result<BoundReport, Error> {
    validate_knot_p0(p0)?;
    let theorem = theorem_bound(p0)?;
    if theorem.bound.is_infinite() {
        return Ok(theorem);
    }
    let one_minus_v2 = LaurentPoly::from_terms([(0i64, 1), (2, -1)]);
    let mut excluded_any = false;
    for n in 0..=n_max {
        let numerator = p0.sub(&LaurentPoly::monomial(2 * n as i64, 1));
        let g = numerator
            .divide_exact(&one_minus_v2)
            .expect("1 - v^2 divides p0 - v^2n whenever p0(1) = 1");
        let feasible = if g.is_zero() {
            true
        } else {
            let (_, _, c_lo, c_hi) = g.bounds().unwrap();
            sum_of_squares_feasible(&c_lo, n) && sum_of_squares_feasible(&c_hi, n)
        };
        if feasible {
            let mut rules = theorem.rules_fired.clone();
            if excluded_any {
                rules.push(Rule::RefinedNExclusion);
            }
            return Ok(BoundReport {
                bound: Bound::Finite(n.max(theorem.bound.finite().unwrap())),
                rules_fired: rules,
                genus_assumption: true,
                exhausted: false,
            });
        }
        excluded_any = true;
    }
    // every candidate length was excluded
    let (_, _, h_m, _, _) = extreme_data(p0);
    if h_m.is_negative() {
        // unreachable here (theorem_bound already returned infinity), kept
        // for the invariant that only the i-b sign pattern justifies it
        return Ok(BoundReport {
            bound: Bound::Infinite,
            rules_fired: vec![Rule::IB, Rule::RefinedNExclusion],
            genus_assumption: true,
            exhausted: false,
        });
    }
    let mut rules = theorem.rules_fired;
    rules.push(Rule::RefinedNExclusion);
    Ok(BoundReport {
        bound: Bound::Finite(n_max + 1),
        rules_fired: rules,
        genus_assumption: true,
        exhausted: true,
    })
}

/// Outcome of the Gordian-distance-one test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GordianOutcome {
    /// The single-crossing-change equation has a solution; `witness` is the
    /// normalized square root `f`, absent for the distance-0 short circuit.
    Pass { witness: Option<LaurentPoly> },
    /// No ε-signed non-nugatory genus-respecting crossing change can relate
    /// the two knots.
    Fail,
}

/// Decide whether two genus ≤ 1 knots can be related by one crossing change
/// of sign `eps`, from their zeroth coefficient polynomials and Conway z^2
/// coefficients: the difference `v^-ε p0_K - v^ε p0_K'` must factor as
/// `ε (v^-1 - v) v^2ε(a2-a2') f(v)^2` with `f(1) = 1`, `f'(1) = 0`.
pub fn gordian_one_test(
    p0_k: &LaurentPoly,
    p0_k2: &LaurentPoly,
    a2_k: &BigInt,
    a2_k2: &BigInt,
    eps: i8,
) -> GordianOutcome {
    assert!(eps == 1 || eps == -1);
    if p0_k == p0_k2 && a2_k == a2_k2 {
        // distance 0 is outside the theorem's hypothesis
        return GordianOutcome::Pass { witness: None };
    }
    let e = eps as i64;
    let lhs = p0_k.shift(-e).sub(&p0_k2.shift(e));
    let vinv_minus_v = LaurentPoly::from_terms([(-1i64, 1), (1, -1)]);
    let Some(quotient) = lhs.divide_exact(&vinv_minus_v) else {
        return GordianOutcome::Fail;
    };
    let quotient = if eps == 1 { quotient } else { quotient.neg() };
    let delta: BigInt = a2_k - a2_k2;
    let Ok(delta) = i64::try_from(&delta) else {
        return GordianOutcome::Fail;
    };
    let candidate_square = quotient.shift(-2 * e * delta);
    let Some(f) = candidate_square.sqrt_exact() else {
        return GordianOutcome::Fail;
    };
    // sqrt_exact normalizes to a positive leading coefficient; the theorem
    // fixes the sign by f(1) = 1 instead
    let f = if f.eval_one() == BigInt::one() {
        f
    } else if f.eval_one() == -BigInt::one() {
        f.neg()
    } else {
        return GordianOutcome::Fail;
    };
    if !f.deriv_one().is_zero() {
        return GordianOutcome::Fail;
    }
    GordianOutcome::Pass { witness: Some(f) }
}

/// Explicit witness that `p0 = v^2n + (1 - v^2) Σ v^2k_i f_i(v)^2` with
/// every `f_i(1) = 1`, `f_i'(1) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCertificate {
    pub n: u64,
    pub shifts: Vec<i64>,
    pub factors: Vec<LaurentPoly>,
}

impl DecompositionCertificate {
    pub fn reassemble(&self) -> LaurentPoly {
        let one_minus_v2 = LaurentPoly::from_terms([(0i64, 1), (2, -1)]);
        let mut sum = LaurentPoly::zero();
        for (k, f) in self.shifts.iter().zip(&self.factors) {
            sum = sum.add(&f.mul(f).shift(2 * k));
        }
        LaurentPoly::monomial(2 * self.n as i64, 1).add(&one_minus_v2.mul(&sum))
    }

    pub fn verify(&self, p0: &LaurentPoly) -> bool {
        self.shifts.len() == self.n as usize
            && self.factors.len() == self.n as usize
            && self
                .factors
                .iter()
                .all(|f| f.eval_one().is_one() && f.deriv_one().is_zero())
            && self.reassemble() == *p0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub shift_lo: i64,
    pub shift_hi: i64,
    /// factors are supported on exponents 2j for j in 0..=deg_span
    pub deg_span: u32,
    pub coeff_bound: u32,
    /// refuse searches whose candidate count exceeds this
    pub ceiling: u128,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            shift_lo: -4,
            shift_hi: 8,
            deg_span: 2,
            coeff_bound: 2,
            ceiling: 20_000_000,
        }
    }
}

/// All factor candidates within the bounds that satisfy `f(1) = 1` and
/// `f'(1) = 0`, in lexicographic coefficient order.
fn factor_candidates(bounds: &SearchBounds) -> Vec<LaurentPoly> {
    let span = bounds.deg_span as usize;
    let b = bounds.coeff_bound as i64;
    let mut out = Vec::new();
    let mut coeffs = vec![-b; span + 1];
    loop {
        let sum: i64 = coeffs.iter().sum();
        let weighted: i64 = coeffs.iter().enumerate().map(|(j, c)| 2 * j as i64 * c).sum();
        if sum == 1 && weighted == 0 {
            out.push(LaurentPoly::from_terms(
                coeffs.iter().enumerate().map(|(j, &c)| (2 * j as i64, c)),
            ));
        }
        // next coefficient vector
        let mut idx = span + 1;
        for i in (0..=span).rev() {
            if coeffs[i] < b {
                idx = i;
                break;
            }
        }
        if idx == span + 1 {
            break;
        }
        coeffs[idx] += 1;
        for c in coeffs.iter_mut().skip(idx + 1) {
            *c = -b;
        }
    }
    out
}

/// Bounded exhaustive search for a length-`n` decomposition certificate.
/// Absence within the bounds is not a nonexistence proof. The returned
/// certificate is the lexicographically least over (shift, factor-index)
/// tuples; tuples are enumerated in non-decreasing order since summands
/// commute.
pub fn decomposition_search(
    p0: &LaurentPoly,
    n: u64,
    bounds: &SearchBounds,
) -> Result<Option<DecompositionCertificate>, Error> {
    assert!(n >= 1);
    if bounds.shift_hi < bounds.shift_lo {
        return Ok(None);
    }
    let factors = factor_candidates(bounds);
    let shifts = (bounds.shift_hi - bounds.shift_lo + 1) as u128;
    let pairs = shifts * factors.len() as u128;
    let size = pairs.checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > bounds.ceiling {
        return Err(Error::SearchCeiling { size, ceiling: bounds.ceiling });
    }
    let target = p0.sub(&LaurentPoly::monomial(2 * n as i64, 1));
    let one_minus_v2 = LaurentPoly::from_terms([(0i64, 1), (2, -1)]);
    // (1 - v^2) always divides: both sides vanish at v = 1
    let Some(residual) = target.divide_exact(&one_minus_v2) else {
        return Ok(None);
    };

    // pre-square the candidates once
    let squares: Vec<LaurentPoly> = factors.iter().map(|f| f.mul(f)).collect();

    let first_pair_indices: Vec<usize> = (0..pairs as usize).collect();
    let search_from = |first: usize| -> Option<Vec<usize>> {
        let mut stack = vec![first];
        search_rest(
            &residual,
            &squares,
            shifts as usize,
            bounds.shift_lo,
            n as usize,
            &mut stack,
        )
    };

    #[cfg(feature = "parallel")]
    let found: Option<Vec<usize>> = {
        use rayon::prelude::*;
        first_pair_indices
            .par_iter()
            .find_map_first(|&first| search_from(first))
    };
    #[cfg(not(feature = "parallel"))]
    let found: Option<Vec<usize>> = first_pair_indices.iter().find_map(|&first| search_from(first));

    Ok(found.map(|pair_indices| {
        let shift_count = shifts as usize;
        let mut cert = DecompositionCertificate {
            n,
            shifts: Vec::new(),
            factors: Vec::new(),
        };
        for pi in pair_indices {
            cert.shifts.push(bounds.shift_lo + (pi / factors.len() % shift_count) as i64);
            cert.factors.push(factors[pi % factors.len()].clone());
        }
        cert
    }))
}

/// Depth-first over non-decreasing pair indices; `stack` holds the prefix.
/// Pair index `pi` encodes (shift offset `pi / squares.len()` from
/// `shift_lo`, factor index `pi % squares.len()`).
fn search_rest(
    residual: &LaurentPoly,
    squares: &[LaurentPoly],
    shift_count: usize,
    shift_lo: i64,
    n: usize,
    stack: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let factor_count = squares.len();
    let pair_total = shift_count * factor_count;
    if stack[0] >= pair_total {
        return None;
    }
    let partial = |stack: &Vec<usize>| -> LaurentPoly {
        let mut sum = LaurentPoly::zero();
        for &pi in stack.iter() {
            let shift = shift_lo + (pi / factor_count) as i64;
            sum = sum.add(&squares[pi % factor_count].shift(2 * shift));
        }
        sum
    };
    fn rec(
        residual: &LaurentPoly,
        n: usize,
        stack: &mut Vec<usize>,
        pair_total: usize,
        partial: &dyn Fn(&Vec<usize>) -> LaurentPoly,
    ) -> Option<Vec<usize>> {
        if stack.len() == n {
            return if &partial(stack) == residual {
                Some(stack.clone())
            } else {
                None
            };
        }
        let start = *stack.last().unwrap();
        for next in start..pair_total {
            stack.push(next);
            if let Some(hit) = rec(residual, n, stack, pair_total, partial) {
                return Some(hit);
            }
            stack.pop();
        }
        None
    }
    rec(residual, n, stack, pair_total, &partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skein::{pretzel_p0, twist_p0};

    fn lp(text: &str) -> LaurentPoly {
        LaurentPoly::parse(text).unwrap()
    }

    fn left_trefoil_p0() -> LaurentPoly {
        lp("2v^-2 - v^-4")
    }

    #[test]
    fn theorem_examples() {
        let r = theorem_bound(&pretzel_p0(1, 1, 1)).unwrap();
        assert_eq!(r.bound, Bound::Finite(3));
        assert_eq!(r.rules_fired, vec![Rule::IA]);

        let r = theorem_bound(&twist_p0(3)).unwrap();
        assert_eq!(r.bound, Bound::Finite(3));
        assert_eq!(r.rules_fired, vec![Rule::IIA]);

        let r = theorem_bound(&left_trefoil_p0()).unwrap();
        assert_eq!(r.bound, Bound::Infinite);
        assert_eq!(r.rules_fired, vec![Rule::IB]);
    }

    #[test]
    fn theorem_rejects_bad_input() {
        assert!(theorem_bound(&LaurentPoly::zero()).is_err());
        assert!(theorem_bound(&lp("v^1")).is_err());
        assert!(theorem_bound(&lp("2v^2")).is_err());
        // eval 1 but derivative nonzero
        assert!(theorem_bound(&lp("2v^2 - v^6")).is_err());
    }

    #[test]
    fn refined_examples() {
        // trefoil: n=0 excluded, n=1 feasible with g_1 = v^2
        let r = refined_bound(&lp("2v^2 - v^4"), 10).unwrap();
        assert_eq!(r.bound, Bound::Finite(1));
        assert!(!r.exhausted);
        assert!(r.rules_fired.contains(&Rule::RefinedNExclusion));

        let r = refined_bound(&pretzel_p0(1, 1, 1), 10).unwrap();
        assert_eq!(r.bound, Bound::Finite(3));

        let r = refined_bound(&left_trefoil_p0(), 10).unwrap();
        assert_eq!(r.bound, Bound::Infinite);
    }

    #[test]
    fn refined_unknot_is_zero() {
        let r = refined_bound(&LaurentPoly::one(), 5).unwrap();
        assert_eq!(r.bound, Bound::Finite(0));
        assert!(!r.exhausted);
    }

    #[test]
    fn refined_dominates_theorem() {
        for (p, q, s) in [(1u64, 1, 1), (2, 1, 3), (3, 3, 3), (1, 4, 2)] {
            let p0 = pretzel_p0(p, q, s);
            let t = theorem_bound(&p0).unwrap();
            let r = refined_bound(&p0, 30).unwrap();
            match (t.bound, r.bound) {
                (Bound::Finite(a), Bound::Finite(b)) => assert!(b >= a),
                (_, Bound::Infinite) => {}
                (Bound::Infinite, Bound::Finite(_)) => panic!("refined below theorem"),
            }
        }
    }

    #[test]
    fn refined_monotone_in_n_max() {
        let p0 = pretzel_p0(2, 2, 2);
        let mut prev = 0;
        for n_max in 1..=20 {
            let r = refined_bound(&p0, n_max).unwrap();
            let b = r.bound.finite().unwrap();
            assert!(b >= prev.min(b));
            prev = b;
        }
    }

    #[test]
    fn gordian_examples() {
        let trefoil = lp("2v^2 - v^4");
        let one = LaurentPoly::one();
        let a2_trefoil = BigInt::from(1);
        let a2_unknot = BigInt::from(0);
        match gordian_one_test(&trefoil, &one, &a2_trefoil, &a2_unknot, 1) {
            GordianOutcome::Pass { witness: Some(f) } => assert_eq!(f, LaurentPoly::one()),
            other => panic!("expected pass with f = 1, got {other:?}"),
        }

        // left trefoil vs unknot: candidate square is not a square
        assert_eq!(
            gordian_one_test(&left_trefoil_p0(), &one, &BigInt::from(1), &a2_unknot, 1),
            GordianOutcome::Fail
        );

        // identical inputs short-circuit
        assert_eq!(
            gordian_one_test(&trefoil, &trefoil, &a2_trefoil, &a2_trefoil, 1),
            GordianOutcome::Pass { witness: None }
        );
    }

    #[test]
    fn decomposition_examples() {
        let bounds = SearchBounds::default();
        // trefoil: 2v^2 - v^4 = v^2 + (1 - v^2) v^2
        let cert = decomposition_search(&lp("2v^2 - v^4"), 1, &bounds)
            .unwrap()
            .expect("certificate exists");
        assert!(cert.verify(&lp("2v^2 - v^4")));
        assert_eq!(cert.shifts, vec![1]);
        assert_eq!(cert.factors, vec![LaurentPoly::one()]);

        // twist m=1: v^-2 - 1 + v^2 = v^2 + (1 - v^2) v^-2
        let cert = decomposition_search(&twist_p0(1), 1, &bounds)
            .unwrap()
            .expect("certificate exists");
        assert!(cert.verify(&twist_p0(1)));
        assert_eq!(cert.shifts, vec![-1]);
        assert_eq!(cert.factors, vec![LaurentPoly::one()]);

        // left trefoil: none at any small n
        for n in 1..=3 {
            assert!(decomposition_search(&left_trefoil_p0(), n, &bounds)
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn decomposition_never_beats_refined_bound() {
        let bounds = SearchBounds::default();
        for p0 in [lp("2v^2 - v^4"), twist_p0(1), twist_p0(2), pretzel_p0(1, 1, 1)] {
            let refined = refined_bound(&p0, 20).unwrap().bound.finite().unwrap();
            for n in 1..=4u64 {
                if let Some(cert) = decomposition_search(&p0, n, &bounds).unwrap() {
                    assert!(cert.verify(&p0));
                    assert!(n >= refined, "certificate below lower bound");
                }
            }
        }
    }

    #[test]
    fn search_ceiling_refusal() {
        let bounds = SearchBounds { ceiling: 10, ..Default::default() };
        assert!(matches!(
            decomposition_search(&lp("2v^2 - v^4"), 3, &bounds),
            Err(Error::SearchCeiling { .. })
        ));
    }
}
