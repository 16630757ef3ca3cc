//! Self-contained acceptance suite: closed-form cross-checks, corollary
//! reproductions, the skein property battery, and soundness couplings.
//! Shared by the `selftest` CLI subcommand and the integration test target
//! so the same checks run in both places.

use std::sync::Mutex;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use crate::error::Error;
use crate::knotio::{BraidWord, PDCode, Presentation};
use crate::obstruct::{
    decomposition_search, gordian_one_test, refined_bound, theorem_bound, Bound, GordianOutcome,
    Rule, SearchBounds,
};
use crate::poly::{HomflyValue, LaurentPoly};
use crate::sequences::{pretzel_sequence, twist_sequence, verify_sequence, SequenceCertificate};
use crate::skein::{
    a2_of, coefficient_polys, conway, crossing_strands_same_component, pretzel_p0, twist_p0,
    SkeinEngine,
};
use crate::squares::{min_squares, min_squares_bruteforce_table};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} ({} ms) — {}",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.millis,
            self.detail
        )
    }
}

struct Suite {
    engine: SkeinEngine,
    /// every knot zeroth coefficient polynomial the suite computes, for the
    /// global normalization post-check
    knot_p0s: Mutex<Vec<(String, LaurentPoly)>>,
}

impl Suite {
    fn new() -> Self {
        Self {
            engine: SkeinEngine::new(32).with_cache(),
            knot_p0s: Mutex::new(Vec::new()),
        }
    }

    /// HOMFLY of a PD code; when it is a knot, extract, register, and return
    /// its zeroth coefficient polynomial alongside.
    fn homfly_and_p0(
        &self,
        pd: &PDCode,
        label: &str,
    ) -> Result<(HomflyValue, usize, LaurentPoly), Error> {
        let n = crate::knotio::component_count(pd)?;
        let h = self.engine.homfly(pd)?;
        let p0 = coefficient_polys(&h, n)?.p0().clone();
        if n == 1 {
            self.knot_p0s
                .lock()
                .unwrap()
                .push((label.to_string(), p0.clone()));
        }
        Ok((h, n, p0))
    }

    fn knot_p0(&self, p: &Presentation, label: &str) -> Result<LaurentPoly, Error> {
        let pd = crate::knotio::to_pd(p)?;
        let (_, n, p0) = self.homfly_and_p0(&pd, label)?;
        if n != 1 {
            return Err(Error::InvalidDiagram(format!("{label} is not a knot")));
        }
        Ok(p0)
    }
}

fn run_criterion(
    name: &'static str,
    body: impl FnOnce() -> Result<String, String>,
) -> CriterionResult {
    let t = Instant::now();
    let outcome = body();
    let millis = t.elapsed().as_millis();
    match outcome {
        Ok(detail) => CriterionResult { name, passed: true, detail, millis },
        Err(detail) => CriterionResult { name, passed: false, detail, millis },
    }
}

fn err<T>(e: impl std::fmt::Display) -> Result<T, String> {
    Err(e.to_string())
}

/// Run the acceptance suite. Each entry is one criterion; the normalization
/// post-check runs last over everything computed before it.
pub fn run_all() -> Vec<CriterionResult> {
    let suite = Suite::new();
    let mut results = vec![
        run_criterion("criterion-01-pretzel-closed-form", || c1(&suite)),
        run_criterion("criterion-02-twist-closed-form", || c2(&suite)),
        run_criterion("criterion-03-pretzel-corollary", || c3(&suite)),
        run_criterion("criterion-04-twist-corollary", || c4(&suite)),
        run_criterion("criterion-05-infinity-clause", || c5(&suite)),
        run_criterion("criterion-06-skein-property", || c6(&suite)),
        run_criterion("criterion-08-squares-oracle", || c8()),
        run_criterion("criterion-09-gordian-one", || c9(&suite)),
        run_criterion("criterion-10-decomposition-soundness", || c10()),
        run_criterion("remark-9_35-unknotting-three", || remark_9_35()),
    ];
    // global post-check over every knot the suite touched
    results.push(run_criterion("criterion-07-normalization", || c7(&suite)));
    results.sort_by_key(|r| r.name);
    results
}

fn c1(suite: &Suite) -> Result<String, String> {
    let mut checked = 0;
    for p in 0..=2u64 {
        for q in 0..=2u64 {
            for r in 0..=2u64 {
                let pres = Presentation::Pretzel(p as i64, q as i64, r as i64);
                let label = format!("P({},{},{})", 2 * p + 1, 2 * q + 1, 2 * r + 1);
                let got = suite.knot_p0(&pres, &label).or_else(err)?;
                let want = pretzel_p0(p, q, r);
                if got != want {
                    return Err(format!("{label}: diagram p0 = {got}, formula = {want}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pretzel diagrams match the closed form"))
}

fn c2(suite: &Suite) -> Result<String, String> {
    for m in 1..=4u64 {
        let label = format!("T_{}", 2 * m);
        let got = suite
            .knot_p0(&Presentation::Twist(m), &label)
            .or_else(err)?;
        let want = twist_p0(m);
        if got != want {
            return Err(format!("{label}: diagram p0 = {got}, formula = {want}"));
        }
    }
    Ok("4 twist diagrams match the closed form".into())
}

fn c3(suite: &Suite) -> Result<String, String> {
    for p in 1..=10u64 {
        for q in 1..=10u64 {
            for r in 1..=10u64 {
                let p0 = pretzel_p0(p, q, r);
                let expected = [p + q, q + r, r + p].into_iter().min().unwrap() + 1;
                let t = theorem_bound(&p0).or_else(err)?;
                let rf = refined_bound(&p0, 32).or_else(err)?;
                if t.bound != Bound::Finite(expected) || rf.bound != Bound::Finite(expected) {
                    return Err(format!(
                        "P({p},{q},{r}) params: theorem {}, refined {}, expected {expected}",
                        t.bound, rf.bound
                    ));
                }
            }
        }
    }
    let mut verified = 0;
    for p in 1..=3u64 {
        for q in 1..=3u64 {
            for r in 1..=3u64 {
                let cert = pretzel_sequence(p, q, r);
                let expected = [p + q, q + r, r + p].into_iter().min().unwrap() + 1;
                check_sequence(suite, &cert, expected)
                    .map_err(|e| format!("pretzel ({p},{q},{r}): {e}"))?;
                verified += 1;
            }
        }
    }
    Ok(format!(
        "1000 closed-form bounds equal min{{p+q,q+r,r+p}}+1; {verified} sequences certify the value"
    ))
}

fn c4(suite: &Suite) -> Result<String, String> {
    for m in 1..=10u64 {
        let t = theorem_bound(&twist_p0(m)).or_else(err)?;
        if t.bound != Bound::Finite(m) || !t.rules_fired.contains(&Rule::IIA) {
            return Err(format!(
                "T_{}: bound {} via {:?}, expected {m} via ii-a",
                2 * m,
                t.bound,
                t.rules_fired
            ));
        }
    }
    for m in 1..=5u64 {
        check_sequence(suite, &twist_sequence(m), m)
            .map_err(|e| format!("twist m={m}: {e}"))?;
    }
    Ok("bounds equal m via ii-a for m in 1..=10; sequences certify m in 1..=5".into())
}

fn check_sequence(
    suite: &Suite,
    cert: &SequenceCertificate,
    expected_length: u64,
) -> Result<(), String> {
    let report = verify_sequence(cert, &suite.engine).or_else(err)?;
    if !report.ok {
        return Err(format!("verification failed: {:?}", report.failures));
    }
    if cert.claimed_length != expected_length {
        return Err(format!(
            "length {} but corollary says {expected_length}",
            cert.claimed_length
        ));
    }
    // fold the intermediate knots into the normalization registry
    for step in &cert.steps {
        suite.knot_p0(step, &step.to_string()).or_else(err)?;
    }
    Ok(())
}

fn c5(suite: &Suite) -> Result<String, String> {
    let left = Presentation::Braid(BraidWord::new(vec![-1, -1, -1], 2).unwrap());
    let p0 = suite.knot_p0(&left, "left trefoil").or_else(err)?;
    let want = LaurentPoly::parse("2v^-2 - v^-4").unwrap();
    if p0 != want {
        return Err(format!("left trefoil p0 = {p0}, expected {want}"));
    }
    let t = theorem_bound(&p0).or_else(err)?;
    if t.bound != Bound::Infinite || t.rules_fired != vec![Rule::IB] {
        return Err(format!("bound {} via {:?}, expected inf via i-b", t.bound, t.rules_fired));
    }
    Ok("left trefoil p0 obstructs with bound inf via i-b".into())
}

fn c6(suite: &Suite) -> Result<String, String> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut same_component_cases = 0usize;
    let mut split_component_cases = 0usize;
    for trial in 0..200 {
        let strands = rng.gen_range(2..=4usize);
        let len = rng.gen_range(1..=8usize);
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let word = BraidWord::new(letters.clone(), strands).unwrap();
        let pd = crate::knotio::to_pd(&Presentation::Braid(word)).or_else(err)?;
        if pd.crossing_count() == 0 {
            continue;
        }
        let c = rng.gen_range(0..pd.crossing_count());
        let switched = crate::knotio::switch_crossing(&pd, c).or_else(err)?;
        let smoothed = crate::knotio::smooth_crossing(&pd, c).or_else(err)?;
        let sign = crate::knotio::crossing_sign(&pd, c).or_else(err)?;

        let label = |which: &str| format!("braid trial {trial} {which}");
        let (h_here, n_here, p0_here) = suite.homfly_and_p0(&pd, &label("base")).or_else(err)?;
        let (h_flip, n_flip, p0_flip) =
            suite.homfly_and_p0(&switched, &label("switched")).or_else(err)?;
        let (h_zero, _n_zero, p0_zero) =
            suite.homfly_and_p0(&smoothed, &label("smoothed")).or_else(err)?;
        let (h_pos, h_neg) = if sign > 0 { (&h_here, &h_flip) } else { (&h_flip, &h_here) };

        // v^-1 P_+ - v P_- = z P_0, exactly
        let lhs = h_pos
            .scale_monomial(-1, 0)
            .sub(&h_neg.scale_monomial(1, 0));
        if lhs != h_zero.scale_monomial(0, 1) {
            return Err(format!("skein relation fails on trial {trial} ({letters:?} at {c})"));
        }

        // zeroth-coefficient relation, split by the δ-case
        if n_here != n_flip {
            return Err(format!("switch changed component count on trial {trial}"));
        }
        let (p0_pos, p0_neg) = if sign > 0 {
            (&p0_here, &p0_flip)
        } else {
            (&p0_flip, &p0_here)
        };
        let lhs0 = p0_pos.shift(-2).sub(p0_neg);
        let same = crossing_strands_same_component(&pd, c).or_else(err)?;
        if same {
            same_component_cases += 1;
            if lhs0 != p0_zero {
                return Err(format!(
                    "zeroth-coefficient skein (same component) fails on trial {trial}"
                ));
            }
        } else {
            split_component_cases += 1;
            if !lhs0.is_zero() {
                return Err(format!(
                    "zeroth-coefficient skein (different components) fails on trial {trial}"
                ));
            }
        }
    }
    if same_component_cases < 10 || split_component_cases < 10 {
        return Err(format!(
            "δ-case coverage too thin: {same_component_cases} same / {split_component_cases} split"
        ));
    }

    // (2, 2k) torus links
    for k in 1..=4u64 {
        let word = BraidWord::new(vec![1; 2 * k as usize], 2).unwrap();
        let pd = crate::knotio::to_pd(&Presentation::Braid(word)).or_else(err)?;
        let (_, n, p0) = suite
            .homfly_and_p0(&pd, &format!("torus (2,{})", 2 * k))
            .or_else(err)?;
        if n != 2 {
            return Err(format!("(2,{}) torus link has {n} components", 2 * k));
        }
        let want = LaurentPoly::from_terms([(2 * k as i64 - 2, 1), (2 * k as i64, -1)]);
        if p0 != want {
            return Err(format!(
                "(2,{}) torus link p0 = {p0}, expected {want}",
                2 * k
            ));
        }
    }
    Ok(format!(
        "200 random skein triples hold; δ-cases {same_component_cases}/{split_component_cases}; 4 torus links match"
    ))
}

fn c7(suite: &Suite) -> Result<String, String> {
    let registry = suite.knot_p0s.lock().unwrap();
    for (label, p0) in registry.iter() {
        if !p0.eval_one().is_one() {
            return Err(format!("{label}: p0(1) = {} != 1", p0.eval_one()));
        }
        if !p0.deriv_one().is_zero() {
            return Err(format!("{label}: p0'(1) = {} != 0", p0.deriv_one()));
        }
    }
    Ok(format!(
        "all {} knot zeroth coefficient polynomials are normalized",
        registry.len()
    ))
}

fn c8() -> Result<String, String> {
    let table = min_squares_bruteforce_table(20000);
    for (n, &want) in table.iter().enumerate() {
        let got = min_squares(n as u64);
        if got != want {
            return Err(format!("min_squares({n}) = {got}, brute force says {want}"));
        }
    }
    Ok("min_squares agrees with brute force on 0..=20000".into())
}

fn c9(suite: &Suite) -> Result<String, String> {
    let right = suite
        .knot_p0(
            &Presentation::Braid(BraidWord::new(vec![1, 1, 1], 2).unwrap()),
            "right trefoil",
        )
        .or_else(err)?;
    let left = LaurentPoly::parse("2v^-2 - v^-4").unwrap();
    let one = LaurentPoly::one();
    let a2_trefoil = num_bigint::BigInt::one();
    let a2_unknot = num_bigint::BigInt::zero();
    match gordian_one_test(&right, &one, &a2_trefoil, &a2_unknot, 1) {
        GordianOutcome::Pass { witness: Some(f) } if f == LaurentPoly::one() => {}
        other => return Err(format!("(right trefoil, unknot, +): {other:?}, expected f = 1")),
    }
    if gordian_one_test(&left, &one, &a2_trefoil, &a2_unknot, 1) != GordianOutcome::Fail {
        return Err("(left trefoil, unknot, +) unexpectedly passes".into());
    }

    // consecutive steps of verified family sequences, restricted to pairs
    // of genus one knots
    let mut certs: Vec<SequenceCertificate> = vec![twist_sequence(1), twist_sequence(2)];
    for p in 1..=2u64 {
        for q in 1..=2u64 {
            for r in 1..=2u64 {
                certs.push(pretzel_sequence(p, q, r));
            }
        }
    }
    let mut pairs_checked = 0;
    for cert in &certs {
        let data: Vec<(LaurentPoly, num_bigint::BigInt, i64)> = cert
            .steps
            .iter()
            .map(
                |s| -> Result<(LaurentPoly, num_bigint::BigInt, i64), Error> {
                    let pd = crate::knotio::to_pd(s)?;
                    let (h, _, p0) = suite.homfly_and_p0(&pd, &s.to_string())?;
                    let genus_degree =
                        conway(&h).bounds().map(|(_, hi, _, _)| hi).unwrap_or(0);
                    Ok((p0, a2_of(&h), genus_degree))
                },
            )
            .collect::<Result<_, Error>>()
            .or_else(err)?;
        for w in data.windows(2) {
            let ((p0a, a2a, ga), (p0b, a2b, gb)) = (&w[0], &w[1]);
            if *ga != 2 || *gb != 2 {
                continue; // only genus-one endpoints are in the theorem's scope
            }
            if gordian_one_test(p0a, p0b, a2a, a2b, 1) == GordianOutcome::Fail {
                return Err(format!("sequence pair fails distance-one test: {p0a} vs {p0b}"));
            }
            pairs_checked += 1;
        }
    }
    if pairs_checked == 0 {
        return Err("no genus-one sequence pairs were exercised".into());
    }
    Ok(format!(
        "trefoil/unknot cases behave; {pairs_checked} sequence pairs pass with ε = +1"
    ))
}

fn c10() -> Result<String, String> {
    let bounds = SearchBounds::default();
    let family: Vec<(String, LaurentPoly)> = std::iter::once((
        "right trefoil".to_string(),
        pretzel_p0(0, 0, 0),
    ))
    .chain((1..=3u64).map(|m| (format!("T_{}", 2 * m), twist_p0(m))))
    .collect();
    let mut found = 0;
    for (label, p0) in &family {
        let refined = refined_bound(p0, 20)
            .or_else(err)?
            .bound
            .finite()
            .ok_or_else(|| format!("{label}: unexpected infinite bound"))?;
        for n in 1..=3u64 {
            let Some(cert) = decomposition_search(p0, n, &bounds).or_else(err)? else {
                continue;
            };
            if !cert.verify(p0) {
                return Err(format!("{label}: length-{n} certificate fails to reassemble"));
            }
            if n < refined {
                return Err(format!(
                    "{label}: certificate of length {n} below refined bound {refined}"
                ));
            }
            found += 1;
        }
    }
    if found == 0 {
        return Err("no certificates found anywhere; search bounds too tight".into());
    }
    Ok(format!("{found} certificates reassemble and respect the lower bound"))
}

fn remark_9_35() -> Result<String, String> {
    let t = theorem_bound(&pretzel_p0(1, 1, 1)).or_else(err)?;
    if t.bound != Bound::Finite(3) {
        return Err(format!("theorem bound {} for P(3,3,3), expected 3", t.bound));
    }
    Ok("theorem_bound(pretzel_p0(1,1,1)) = 3".into())
}
